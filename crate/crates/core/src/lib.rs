pub mod cli;
pub mod flow;
pub mod gallery;
pub mod metrics;
mod lp;
pub mod polytope;
pub mod rational;
pub mod slope;
