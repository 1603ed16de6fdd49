//! Information cascades on overlaid social and physical networks, modelled as
//! bond percolation: degree laws, network generators, percolation, and the
//! analytical threshold and giant-component results.

pub mod dist;
pub mod error;
pub mod graph;
pub mod kernel;
pub mod netgen;
pub mod percolate;
mod quad;
pub mod rng;
pub mod theory;

pub use dist::DegreeDistribution;
pub use error::{Error, Result};
pub use graph::{Edge, Layer, LayerProbs, LayeredGraph};
pub use kernel::KernelModel;
pub use percolate::ComponentStats;
pub use theory::{Overlay, TheoryResult};
