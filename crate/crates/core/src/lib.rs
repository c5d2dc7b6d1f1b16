pub mod approx;
pub mod error;
pub mod exact;
pub mod formula;
pub mod minmax;
pub mod prooftree;
pub mod rational;
pub mod reductions;
pub mod sat;
mod search;
pub mod semiring;
