//! Reductions among Karp's 21 NP-complete decision problems whose output
//! size grows linearly in the input size, together with certificate lifting,
//! exhaustive oracles for small instances, seeded instance generators and a
//! growth auditor.

pub mod error;
pub mod genlab;
pub mod growth;
pub mod instances;
pub mod io;
pub mod num;
pub mod oracles;
pub mod program;
pub mod reductions;
pub mod size;

pub use error::{Error, Result};
pub use instances::{Certificate, Problem, ProblemKind};
pub use program::BinaryProgram;
pub use size::{measure, measure_input_size, SizeMode, SizeReport};
