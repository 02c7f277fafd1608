//! Similar-repository search over cluster distributions of identifier sub-tokens.

pub mod clustering;
pub mod distribution;
pub mod embedding;
pub mod error;
pub mod explain;
pub mod pipeline;
pub mod search;
pub mod tokenizer;

pub use clustering::{spherical_kmeans, ClusterModel, FitReport};
pub use distribution::{build_distribution, smooth, ProjectDistribution, DEFAULT_EPSILON};
pub use embedding::EmbeddingModel;
pub use error::{Error, Result};
pub use explain::{explain, Explanation};
pub use search::{build_index, kl_divergence, SearchIndex, SearchResult, SimilarityMode};
pub use tokenizer::{tokenize_project, Language, SourceFile, TokenStats, TokenizeOptions};
