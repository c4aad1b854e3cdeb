//! Graph analytics for detecting collaborating fraud rings in
//! automobile collision data: typed collision networks, component
//! screening against rewiring null models, and iterative suspicion
//! score propagation.

pub mod attrs;
pub mod centrality;
pub mod community;
pub mod component;
pub mod cover;
pub mod error;
pub mod evaluate;
pub mod graph;
pub mod iaa;
pub mod ingest;
pub mod nullmodel;
pub mod par;
pub mod screen;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{EdgeId, Network, NetworkBuilder, VertexId, VertexKind, VertexLabel};
