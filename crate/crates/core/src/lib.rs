pub mod cycle;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod rng;
pub mod structure;
pub mod types;
