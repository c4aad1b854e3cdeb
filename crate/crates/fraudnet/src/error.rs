use crate::graph::VertexId;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {0} is not a member of the component")]
    VertexNotInComponent(VertexId),
    #[error("self-loop between {0} and itself is not allowed")]
    SelfLoop(VertexId),
    #[error("adjacency index inconsistent at vertex {0}")]
    CorruptAdjacency(VertexId),
    #[error("component is empty")]
    EmptyComponent,
    #[error("component is not connected")]
    Disconnected,
    #[error("eigenvector centrality is undefined for a single-vertex component")]
    EigenvectorUndefined,
    #[error("rewiring needs at least {needed} edges, component has {got}")]
    TooFewEdges { needed: usize, got: usize },
    #[error("indicator statistic `{0}` is not registered")]
    UnknownStatistic(String),
    #[error("indicator `{0}` requires a null distribution but none was supplied")]
    MissingNullDistribution(String),
    #[error("significance level {0} must lie strictly inside (0, 1)")]
    BadSignificance(f64),
    #[error("virtual factor {0} must lie strictly inside (-1, 1)")]
    BadVirtualFactor(f64),
    #[error("indicator matrix is empty")]
    EmptyIndicatorMatrix,
    #[error("RIDIT matrix is identically zero; PRIDIT weights are undefined")]
    ZeroRiditMatrix,
    #[error("labeled scores need at least one entity of each class")]
    SingleClassScores,
    #[error("null distribution is empty")]
    EmptyNullDistribution,
    #[error("{file}:{row}: {msg}")]
    ParseRow {
        file: String,
        row: usize,
        msg: String,
    },
    #[error("collision {collision_id}: {rule}")]
    InvalidRecord {
        collision_id: String,
        rule: String,
    },
    #[error("synthetic spec invalid: {0}")]
    BadSynthSpec(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
