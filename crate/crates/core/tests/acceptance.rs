//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The process fails only when a criterion outside `KNOWN_SHORTFALLS` fails;
//! those are still reported as FAIL, followed by the reason.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use stabkit::flow::{flow_to_zero, FlowConfig, FlowStatus};
use stabkit::gallery::{points_suite, AdjointProblem, FlowOutcome, HomProblem};
use stabkit::metrics::{
    balance_iterate, bergman, distance_mod_aut, expansion_check, gram, grid_for, t_operator, balance_residual, Grid,
    GramMatrix, MetricPotential,
};
use stabkit::polytope::{brute_force_1ps, hm_classify, hypersurface_newton, StabilityClass, WeightSystem};
use stabkit::rational::{frac, int, Rational};
use stabkit::slope::{
    chow_compare, df_from_family, hilbert_samuel_from_oracle, mu, mu_c, normal_cone_weight, slope_classify,
    trapezium_asymptotics, Family, SlopeClass,
};

const SEED: u64 = 20240611;

/// Criteria expected to fail, with the reason printed under the FAIL line.
const KNOWN_SHORTFALLS: &[(u32, &str)] = &[(
    2,
    "destabilizing 1-PS of weight systems in [-4,4]^d can need sup-norm far above 5 (up to 38 \
     in this sample), so enumeration at B=5 misses them and reports semistable; the LP witnesses \
     are confirmed by the companion enumeration at a bound covering them",
)];

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Check {
    Check { pass, detail: detail.into() }
}

struct Report {
    unexpected: usize,
}

impl Report {
    fn run(&mut self, id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Check) {
        let t = Instant::now();
        let c = f();
        let elapsed = t.elapsed();
        let in_time = limit.is_none_or(|l| elapsed < l);
        let pass = c.pass && in_time;
        let timing = match limit {
            Some(l) => format!("{:.2}s < {}s", elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.2}s", elapsed.as_secs_f64()),
        };
        println!("{} [{id}] {name}: {} ({timing})", if pass { "PASS" } else { "FAIL" }, c.detail);
        if !pass {
            match KNOWN_SHORTFALLS.iter().find(|(k, _)| *k == id) {
                Some((_, why)) => println!("      known shortfall: {why}"),
                None => self.unexpected += 1,
            }
        }
    }

    fn companion(&mut self, label: &str, c: Check) {
        println!("{} [{label}] {}", if c.pass { "PASS" } else { "FAIL" }, c.detail);
        if !c.pass {
            self.unexpected += 1;
        }
    }
}

fn points_rows(seed: u64) -> String {
    let rows = points_suite(seed, 200, 8, &FlowConfig::with_tol(1e-8)).expect("suite runs");
    serde_json::to_string(&rows).unwrap()
}

fn criterion_1() -> Check {
    let rows = points_suite(SEED, 200, 8, &FlowConfig::with_tol(1e-8)).expect("suite runs");
    let agree = rows.iter().filter(|r| r.agrees).count();
    let max_total = rows.iter().map(|r| r.multiplicities.iter().sum::<u32>()).max().unwrap_or(0);
    let max_mult = rows.iter().flat_map(|r| r.multiplicities.iter().copied()).max().unwrap_or(0);
    let escaped_iff_unstable = rows
        .iter()
        .all(|r| (r.outcome == FlowOutcome::Escaped) == (r.class == StabilityClass::Unstable));
    check(
        agree == 200 && escaped_iff_unstable && max_total <= 8 && max_mult <= 4,
        format!("{agree}/200 agree, n <= {max_total}, multiplicity <= {max_mult}"),
    )
}

fn random_systems(seed: u64, dim: usize, count: usize) -> Vec<WeightSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.random_range(1..=6);
            let mut ws: Vec<Vec<i64>> = Vec::new();
            while ws.len() < k {
                let w: Vec<i64> = (0..dim).map(|_| rng.random_range(-4..=4)).collect();
                if !ws.contains(&w) {
                    ws.push(w);
                }
            }
            WeightSystem::full(dim, ws).unwrap()
        })
        .collect()
}

fn compare_enumeration(systems: &[WeightSystem], bound: impl Fn(&WeightSystem) -> i64) -> (usize, usize) {
    let agree = systems.iter().filter(|ws| hm_classify(ws).class == brute_force_1ps(ws, bound(ws)).unwrap().class).count();
    (agree, systems.len())
}

fn criterion_2() -> Check {
    let plane = random_systems(SEED, 2, 250);
    let space = random_systems(SEED + 1, 3, 250);
    let (a2, n2) = compare_enumeration(&plane, |_| 5);
    let (a3, n3) = compare_enumeration(&space, |_| 5);
    check(a2 + a3 == n2 + n3, format!("B=5: Z^2 {a2}/{n2}, Z^3 {a3}/{n3} agree"))
}

/// Enumeration bound that covers every witness in the seeded systems.
const COMPANION_BOUND: i64 = 40;

fn companion_2() -> Check {
    let plane = random_systems(SEED, 2, 250);
    let space = random_systems(SEED + 1, 3, 250);
    let (a2, n2) = compare_enumeration(&plane, |_| COMPANION_BOUND);
    let (a3, n3) = compare_enumeration(&space, |_| COMPANION_BOUND);
    let widest = plane
        .iter()
        .chain(&space)
        .filter_map(|ws| hm_classify(ws).witness)
        .map(|w| w.as_slice().iter().map(|x| x.abs()).max().unwrap())
        .max()
        .unwrap_or(0);
    check(
        a2 + a3 == n2 + n3,
        format!("B={COMPANION_BOUND}: Z^2 {a2}/{n2}, Z^3 {a3}/{n3} agree; widest LP witness has sup-norm {widest}"),
    )
}

fn pairings(mons: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    mons.iter().map(|m| m.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn criterion_3() -> Check {
    let conic = vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]];
    let fermat = vec![vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3]];
    let cusp = vec![vec![0, 2, 1], vec![3, 0, 0]];
    // y^2 z = x^3 + x^2 z
    let node = vec![vec![0, 2, 1], vec![3, 0, 0], vec![2, 0, 1]];
    let vc = hypersurface_newton(2, 3, &conic).unwrap();
    let vf = hypersurface_newton(3, 3, &fermat).unwrap();
    let vk = hypersurface_newton(3, 3, &cusp).unwrap();
    let vn = hypersurface_newton(3, 3, &node).unwrap();
    let witness_ok = match &vk.witness {
        Some(w) => {
            let p = pairings(&cusp, w.as_slice());
            w.as_slice().iter().sum::<i64>() == 0 && p.iter().all(|&x| x >= 0) && *p.iter().min().unwrap() > 0
        }
        None => false,
    };
    check(
        vc.class.is_semistable()
            && vf.class.is_semistable()
            && vk.class == StabilityClass::Unstable
            && witness_ok
            && vn.class == StabilityClass::StrictlySemistable,
        format!(
            "conic {:?}, Fermat {:?}, cusp {:?} witness {:?} pairings {:?}, node {:?}",
            vc.class,
            vf.class,
            vk.class,
            vk.witness.as_ref().map(|w| w.as_slice().to_vec()),
            vk.witness.as_ref().map(|w| pairings(&cusp, w.as_slice())),
            vn.class
        ),
    )
}

fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

/// Coefficients of `det(tI − A)` from the eigenvalues.
fn char_coeffs(a: &DMatrix<Complex64>) -> Vec<Complex64> {
    let ev = a.clone().schur().eigenvalues().expect("complex Schur form has eigenvalues");
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for l in ev.iter() {
        let mut next = vec![Complex64::zero(); c.len() + 1];
        for (i, x) in c.iter().enumerate() {
            next[i] += x;
            next[i + 1] -= x * l;
        }
        c = next;
    }
    c
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let cfg = FlowConfig::with_tol(1e-9);
    let id = DMatrix::<Complex64>::identity(2, 2);

    let mut worst_hom = 0.0f64;
    for _ in 0..20 {
        let p = HomProblem::new(4, 2, &random_complex(&mut rng, 8)).unwrap();
        let r = flow_to_zero(&p, &cfg).unwrap();
        let a = r.state.matrix();
        worst_hom = worst_hom.max((a.adjoint() * a - &id).norm());
    }

    let mut min_deficient = f64::INFINITY;
    for _ in 0..10 {
        let u = random_complex(&mut rng, 4);
        let w = random_complex(&mut rng, 2);
        let entries: Vec<Complex64> = (0..4).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| u[i] * w[j]).collect();
        let p = HomProblem::new(4, 2, &entries).unwrap();
        let r = flow_to_zero(&p, &FlowConfig::default()).unwrap();
        let along = r.trace.iter().map(|t| t.moment_norm).fold(f64::INFINITY, f64::min);
        let a = r.state.matrix();
        min_deficient = min_deficient.min(along).min((a.adjoint() * a - &id).norm());
    }

    let mut worst_drift = 0.0f64;
    let mut worst_comm = 0.0f64;
    for _ in 0..10 {
        let p = AdjointProblem::new(3, &random_complex(&mut rng, 9)).unwrap();
        let before = char_coeffs(p.matrix());
        let r = flow_to_zero(&p, &cfg).unwrap();
        let a = r.state.matrix();
        let after = char_coeffs(a);
        let scale = before.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let drift = before.iter().zip(&after).map(|(x, y)| (x - y).norm() / scale).fold(0.0, f64::max);
        worst_drift = worst_drift.max(drift);
        worst_comm = worst_comm.max((a * a.adjoint() - a.adjoint() * a).norm());
    }

    let one = Complex64::new(1.0, 0.0);
    let z = Complex64::zero();
    let jordan = AdjointProblem::new(3, &[one, one, z, z, one, one, z, z, one]).unwrap();
    let rj = flow_to_zero(&jordan, &FlowConfig::default()).unwrap();

    check(
        worst_hom <= 1e-8 && min_deficient >= 1.0 && worst_drift <= 1e-6 && worst_comm <= 1e-8 && rj.orbit_escape,
        format!(
            "hom |A*A-I| <= {worst_hom:.1e}; rank-deficient min |m| {min_deficient:.3}; adjoint char drift {worst_drift:.1e}, \
             |[A,A*]| <= {worst_comm:.1e}; Jordan escape {}",
            rj.orbit_escape
        ),
    )
}

/// `∫ |z|^{2i} (1+|z|²)^{−r} ω_FS = i!(r−i)!/(r+1)!`, as a running product.
fn beta_integral(r: usize, i: usize) -> f64 {
    let mut v = 1.0 / (r as f64 + 1.0);
    for k in 1..=i {
        v *= k as f64 / (r - i + k) as f64;
    }
    v
}

fn criterion_5() -> Check {
    let mut notes = Vec::new();
    let mut ok = true;

    let mut worst_fixed = 0.0f64;
    let mut worst_beta = 0.0f64;
    for r in 1..=24 {
        let g = GramMatrix::round(r);
        worst_fixed = worst_fixed.max(balance_residual(&g, &t_operator(&g, g.log_det()).unwrap()));
        let q = gram(&MetricPotential::zero(), r).unwrap();
        for (i, h) in q.diagonal().iter().enumerate() {
            worst_beta = worst_beta.max((h / beta_integral(r, i) - 1.0).abs());
        }
    }
    ok &= worst_fixed <= 1e-10 && worst_beta <= 1e-10;
    notes.push(format!("round fixed point {worst_fixed:.1e}, Gram vs Beta {worst_beta:.1e}"));

    let phi = MetricPotential::bump(0.3, 0.25, 1.0).unwrap();
    let mut worst_int = 0.0f64;
    let mut worst_flat = 0.0f64;
    let mut iters = Vec::new();
    let mut raw = Vec::new();
    let mut reduced = Vec::new();
    for r in [8usize, 12, 16, 20] {
        let grid = grid_for(&phi, r);
        let g0 = gram(&phi, r).unwrap();
        worst_int = worst_int.max((bergman(&phi, &g0, &grid).unwrap().integral - (r + 1) as f64).abs());
        match balance_iterate(&phi, r, 1e-8, 500) {
            Ok(b) => {
                ok &= b.residual <= 1e-8 && b.iterations <= 500;
                iters.push(b.iterations);
                // Balanced means the Bergman function of the metric's own Hilbert
                // Gram matrix is constant.
                let prof = bergman(&b.potential, &gram(&b.potential, r).unwrap(), &grid).unwrap();
                worst_int = worst_int.max((prof.integral - (r + 1) as f64).abs());
                let flat = prof.values.iter().map(|v| (v - (r + 1) as f64).abs()).fold(0.0, f64::max);
                worst_flat = worst_flat.max(flat);
                let d = distance_mod_aut(&b.potential, &Grid::zonal(64));
                raw.push(d.raw);
                reduced.push(d.reduced);
            }
            Err(e) => {
                ok = false;
                notes.push(format!("r={r}: {e}"));
            }
        }
    }
    for r in [1usize, 5, 24] {
        let g = GramMatrix::round(r);
        let z = MetricPotential::zero();
        worst_int = worst_int.max((bergman(&z, &g, &grid_for(&z, r)).unwrap().integral - (r + 1) as f64).abs());
    }
    ok &= worst_int <= 1e-9;
    notes.push(format!(
        "balanced in {iters:?} iterations, |int B - (r+1)| <= {worst_int:.1e}, balanced |B - (r+1)| <= {worst_flat:.1e}"
    ));

    let fit_phi = MetricPotential::mode(2, 0.005);
    let fit = expansion_check(&fit_phi, &[12, 16, 20], &grid_for(&fit_phi, 20)).unwrap();
    ok &= fit.c0_min >= 0.98 && fit.c0_max <= 1.02 && fit.c1_rel_error <= 0.10;
    notes.push(format!("c0 in [{:.4}, {:.4}], c1 rel err {:.3}", fit.c0_min, fit.c0_max, fit.c1_rel_error));

    // Balanced metrics are unique up to automorphisms, so the distance modulo
    // dilations sits at round-off; allow that much slack.
    let monotone = reduced.windows(2).all(|w| w[1] <= w[0] + 1e-6);
    ok &= monotone && reduced.len() == 4;
    notes.push(format!(
        "distance mod dilations {:?}, raw {:?}",
        reduced.iter().map(|d| format!("{d:.1e}")).collect::<Vec<_>>(),
        raw.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>()
    ));
    check(ok, notes.join("; "))
}

fn criterion_6() -> Check {
    let mut ok = true;
    let mut notes = Vec::new();
    let cs = |eps: i64| -> Vec<Rational> {
        let mut v: Vec<Rational> = [frac(1, 7), frac(1, 3), frac(1, 2), frac(2, 3), int(1), frac(3, 2), int(2), frac(7, 3)]
            .into_iter()
            .filter(|c| c <= &int(eps))
            .collect();
        v.push(int(eps));
        v
    };

    // (genus, degree, closed form of μ_c)
    type Closed = Box<dyn Fn(&Rational) -> Rational>;
    let mut families: Vec<(u32, i64, Closed)> = vec![(0, 1, Box::new(|c: &Rational| int(1) / (int(2) - c)))];
    for d in [1i64, 2, 3] {
        families.push((1, d, Box::new(move |c: &Rational| -(int(1) / (int(2 * d) - c)))));
    }
    for g in [2i64, 3] {
        families.push((g as u32, 2 * g - 2, Box::new(move |c: &Rational| (frac(1, 2) - int(g)) / (int(2 * g - 2) - c / int(2)))));
    }
    let mut checked = 0;
    for (g, d, closed) in &families {
        let (h, hs) = Family::curve(*g, *d).build().unwrap();
        for c in cs(*d) {
            checked += 1;
            if mu_c(&hs, &c).unwrap() != closed(&c) {
                ok = false;
                notes.push(format!("g={g} d={d} c={c}: mismatch"));
            }
            // The Hilbert–Samuel data must agree with the section counts.
            // Past ε the genus ≥ 1 counts depend on the point, so the oracle stops short of it.
            if *g == 0 || c < int(*d) {
                let (b0, b1) = hilbert_samuel_from_oracle(&h, &hs, &c).unwrap();
                if b0 != hs.a0x.eval(&c) || b1 != hs.a1x.eval(&c) {
                    ok = false;
                    notes.push(format!("g={g} d={d} x={c}: oracle disagrees with Hilbert-Samuel data"));
                }
            }
        }
    }
    notes.push(format!("{checked} exact curve values"));

    let (h, hs) = Family::curve(0, 1).build().unwrap();
    let boundary = mu_c(&hs, &hs.epsilon).unwrap() == mu(&h).unwrap();
    let ch = chow_compare(&h, &hs, 1).unwrap();
    ok &= boundary && ch.ch_c == int(2) && ch.ch_x == int(2);
    notes.push(format!("P1 boundary mu_eps = mu(X): {boundary}, Ch_1 = {}, Ch(X) = {}", ch.ch_c, ch.ch_x));

    let mut intervals = Vec::new();
    for (a, b) in [(2i64, 1i64), (3, 1), (3, 2), (4, 3)] {
        let (h, hs) = Family::blowup_p2(a, b).build().unwrap();
        let v = slope_classify(&h, &hs).unwrap();
        // Intersection numbers on the blow-up: (aH − (b+x)E)² and −K·(aH − (b+x)E).
        let a0 = |x: &Rational| (int(a * a) - (int(b) + x) * (int(b) + x)) / int(2);
        let a1 = |x: &Rational| (int(3 * a - b) - x) / int(2);
        let direct = |c: &Rational| {
            // ∫₀^c (a₁ + a₀′/2) and ∫₀^c a₀, by antiderivatives
            let num = int(3 * a - b) / int(2) * c - c * c / int(4) - (int(b) * c + c * c / int(2)) / int(2);
            let den = (int(a * a - b * b) * c - int(b) * c * c - c * c * c / int(3)) / int(2);
            num / den
        };
        let mu_x = a1(&int(0)) / a0(&int(0));
        let witnessed = v.destabilizing.iter().all(|i| direct(&i.sample) > mu_x && direct(&i.sample) == i.mu_c_at_sample);
        let nonempty = !v.destabilizing.is_empty() && v.class == SlopeClass::Unstable;
        ok &= nonempty && witnessed;
        intervals.push(format!(
            "({a},{b}): {}",
            v.destabilizing.iter().map(|i| format!("({:.3}, {:.3}{}", i.lo.approx, i.hi.approx, if i.hi_closed { "]" } else { ")" })).collect::<String>()
        ));
    }
    notes.push(format!("Bl_p P2 destabilizing c: {}", intervals.join(" ")));
    check(ok, notes.join("; "))
}

fn criterion_7() -> Check {
    let mut ok = true;
    let mut notes = Vec::new();
    let families = [
        Family::curve(0, 1),
        Family::curve(0, 2),
        Family::curve(1, 3),
        Family::curve(2, 2),
        Family::curve(3, 4),
        Family::blowup_p2(2, 1),
        Family::blowup_p2(3, 1),
        Family::blowup_p2(3, 2),
        Family::blowup_p2(4, 3),
    ];
    let mut sign_checks = 0;
    for fam in &families {
        let (h, hs) = fam.build().unwrap();
        let c = int(1);
        let pred = trapezium_asymptotics(&hs, &c);
        let diffs: Vec<Rational> = (5..=50)
            .map(|r| Rational::from_integer(normal_cone_weight(&hs, &c, r).unwrap()) - pred.eval(h.n, r))
            .collect();
        // O(r^{n−1}) exactly: the differences are a polynomial of degree at most n − 1.
        let mut d = diffs.clone();
        for _ in 0..h.n {
            d = d.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        let poly_ok = d.iter().all(|x| x.is_zero());
        ok &= poly_ok;
        if matches!(fam, Family::Curve { genus: 0, degree: 1, .. }) {
            ok &= diffs.iter().all(|x| x.is_zero());
        }
        let scaled = diffs
            .iter()
            .enumerate()
            .map(|(i, x)| x.abs() / num_traits::pow(int(i as i64 + 5), h.n as usize - 1))
            .max()
            .unwrap();
        notes.push(format!("{}: max|w-pred|/r^(n-1) = {}", h.description, scaled));

        let eps = hs.epsilon.clone();
        // At ε itself the degeneration only exists when the ideal is saturated there.
        let mut grid: Vec<Rational> = [frac(1, 4), frac(1, 3), frac(1, 2), frac(2, 3), int(1), frac(3, 2), int(2)]
            .into_iter()
            .filter(|c| c < &eps)
            .collect();
        if hs.saturated_at_epsilon {
            grid.push(eps.clone());
        }
        for c in grid {
            let Ok((df, _)) = df_from_family(&h, &hs, &c) else {
                ok = false;
                notes.push(format!("{} c={c}: no df", h.description));
                continue;
            };
            let margin = mu_c(&hs, &c).unwrap() - mu(&h).unwrap();
            sign_checks += 1;
            if df.signum() != margin.signum() {
                ok = false;
                notes.push(format!("{} c={c}: df {df} vs margin {margin}", h.description));
            }
        }
    }
    let (h, hs) = Family::curve(0, 1).build().unwrap();
    let df_boundary = df_from_family(&h, &hs, &int(1)).unwrap().0;
    ok &= df_boundary.is_zero();
    notes.push(format!("{sign_checks} sign checks, P1 df at c=1: {df_boundary}"));
    check(ok, notes.join("; "))
}

fn cli_json(args: &[&str]) -> String {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = stabkit::cli::run(std::iter::once("stabkit").chain(args.iter().copied()), &mut out, &mut err);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    String::from_utf8(out).unwrap()
}

fn criterion_8() -> Check {
    let seed = SEED.to_string();
    let suite_a = cli_json(&["points", "suite", "--count", "200", "--seed", &seed, "--json"]);
    let suite_b = cli_json(&["points", "suite", "--count", "200", "--seed", &seed, "--json"]);
    let rows_a = points_rows(SEED);
    let rows_b = points_rows(SEED);
    let ws = |s| {
        let v: Vec<_> = random_systems(s, 3, 250).iter().map(|w| (hm_classify(w), brute_force_1ps(w, 5).unwrap())).collect();
        serde_json::to_string(&v).unwrap()
    };
    let metric = || {
        let phi = MetricPotential::bump(0.3, 0.25, 1.0).unwrap();
        let b = balance_iterate(&phi, 12, 1e-10, 500).unwrap();
        json!({"history": b.history, "diag": b.gram.diagonal()}).to_string()
    };
    let flows = || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let p = AdjointProblem::new(3, &random_complex(&mut rng, 9)).unwrap();
        let r = flow_to_zero(&p, &FlowConfig::default()).unwrap();
        serde_json::to_string(&r.trace).unwrap()
    };
    let same = [suite_a == suite_b, rows_a == rows_b, ws(SEED) == ws(SEED), metric() == metric(), flows() == flows()];
    check(same.iter().all(|&s| s), format!("identical reruns: cli suite, points rows, weight systems, balancing, flow trace = {same:?}"))
}

fn main() -> ExitCode {
    let mut report = Report { unexpected: 0 };
    report.run(1, "points on P1: classification vs flow", Some(Duration::from_secs(60)), criterion_1);
    report.run(2, "Hilbert-Mumford LP vs enumeration", Some(Duration::from_secs(10)), criterion_2);
    report.companion("2*", companion_2());
    report.run(3, "hypersurface verdicts", Some(Duration::from_secs(1)), criterion_3);
    report.run(4, "moment-map zeros", Some(Duration::from_secs(30)), criterion_4);
    report.run(5, "balanced metrics on (P1, O(r))", Some(Duration::from_secs(300)), criterion_5);
    report.run(6, "slope exactness", None, criterion_6);
    report.run(7, "weight consistency", None, criterion_7);
    report.run(8, "determinism", None, criterion_8);
    // Stalled flows would have shown up as disagreements above.
    let _ = FlowStatus::Stalled;
    if report.unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} unexpected failure(s)", report.unexpected);
        ExitCode::FAILURE
    }
}
