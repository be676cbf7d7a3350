//! Circuit representation, execution and syndrome-extraction builders.

pub mod builders;
pub mod exec;
pub mod frame;
pub mod scheduler;
pub mod ir;
pub mod runner;

pub use exec::{Backend, Executor, Fault, FaultSource, InjectedFault, Noiseless};
pub use frame::PauliFrame;
pub use ir::*;
