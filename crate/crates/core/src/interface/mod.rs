//! Configuration documents, unit parsing and output formats used by the
//! command line and the HTTP service.

pub mod config;
pub mod ops;
pub mod table;
pub mod units;

pub use config::{parse_config, ConfigDocument, ConfigError, MachineOverrides, WorkloadSection};
pub use ops::{contour_document, crossover_document, evaluate_document, sweep_document, Evaluation};
pub use table::{emit_table, Format, TableRow};
pub use units::{parse_quantity, Dimension};
