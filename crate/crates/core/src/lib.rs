//! Analytical throughput, power and energy model for stateful-logic
//! processing-in-memory (PIM), CPU-only, and combined PIM+CPU systems.
//!
//! ```
//! use bitlet::{evaluate, MachineConfig, WorkloadProfile};
//! use bitlet::quantities::to_gops;
//!
//! // 16-bit ADD on aligned rows; the CPU would move 48 bits, PIM leaves 16.
//! let w = WorkloadProfile::new("add16", 144.0, 0.0, 48.0, 16.0);
//! let r = evaluate(&MachineConfig::default(), &w).unwrap();
//! assert_eq!((to_gops(r.tp_combined) * 10.0).round() / 10.0, 57.6);
//! ```

// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexity;
pub mod engine;
pub mod interface;
pub mod quantities;
pub mod scenarios;
pub mod sweep;
pub mod usecases;

pub use complexity::{ComplexitySpec, LayoutClass, OpKind};
pub use engine::{evaluate, EvalResult, Metric};
pub use quantities::{MachineConfig, WorkloadProfile};
pub use usecases::UseCase;
