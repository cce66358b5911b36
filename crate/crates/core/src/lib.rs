pub mod cli;
pub mod density;
pub mod error;
pub mod expr;
pub mod graph;
pub mod groebner;
pub mod hadamard;
pub mod hom;
pub mod kernel;
pub mod poly;
pub mod quantum;
pub mod rational;
pub mod variety;

pub use error::{Error, Result};
pub use expr::parse_expr;
pub use graph::{enumerate_multigraphs, standard_graph, CanonicalKey, Multigraph};
pub use quantum::{glue, QuantumGraph};
pub use rational::Rational;
