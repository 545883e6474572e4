//! Command line and HTTP front end for the bitlet model.
//!
//! Both front ends read the same JSON documents and call the same document
//! operations in [`bitlet::interface`], so identical inputs give identical
//! numbers.

pub mod cli;
pub mod server;

pub use cli::run;
pub use server::router;
