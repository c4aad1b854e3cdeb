//! Command-line front end for the collision-network fraud analytics
//! engine: configuration, the staged pipeline, and artifact export.

pub mod config;
pub mod dot;
pub mod error;
pub mod pipeline;
