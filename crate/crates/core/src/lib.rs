//! Cluster algebras of small rank: seeds and mutation, exchange graphs,
//! geodesic-loop layer signatures, and the automorphism groups of the graph
//! and of the cluster algebra.

pub mod builtins;
pub mod classify;
pub mod exchange_graph;
pub mod groups;
pub mod laurent;
pub mod matrix;
pub mod mutation;
pub mod seed;
pub mod verify;

use thiserror::Error;

pub use exchange_graph::{build_graph, ExchangeGraph, Limits};
pub use laurent::LaurentPolynomial;
pub use matrix::ExchangeMatrix;
pub use seed::LabeledSeed;

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Laurent(#[from] laurent::LaurentError),
    #[error(transparent)]
    Matrix(#[from] matrix::MatrixError),
    #[error(transparent)]
    Seed(#[from] seed::SeedError),
    #[error(transparent)]
    Mutation(#[from] mutation::MutationError),
    #[error(transparent)]
    Graph(#[from] exchange_graph::GraphError),
    #[error(transparent)]
    Group(#[from] groups::GroupError),
    #[error(transparent)]
    Classify(#[from] classify::ClassifyError),
}

impl Error {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Laurent(_) => "laurent",
            Error::Matrix(_) | Error::Seed(_) => "invalid_input",
            Error::Mutation(_) => "mutation",
            Error::Graph(exchange_graph::GraphError::Unsupported(_)) => "unsupported",
            Error::Graph(_) => "graph",
            Error::Group(groups::GroupError::Incomplete) => "unsupported",
            Error::Group(_) => "group",
            Error::Classify(classify::ClassifyError::Inconclusive(_)) => "inconclusive",
            Error::Classify(_) => "classify",
        }
    }
}
