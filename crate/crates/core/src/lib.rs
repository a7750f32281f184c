pub mod bnb;
pub mod deadline;
pub mod diving;
pub mod error;
pub mod fpump;
pub mod lp;
pub mod model;
pub mod orchestrator;
pub mod mps;
pub mod presolve;
pub mod rlb;
pub mod rounding;
pub mod sol;
