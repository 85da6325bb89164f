//! Maniplexes, their induced posets and polytopality tests.

pub mod generators;
pub mod graph;
pub mod io;
pub mod maniplex;
pub mod mix;
pub mod polytopality;
pub mod poset;

pub use graph::{are_isomorphic, ColourSet, ColouredGraph, GraphError, Partition};
pub use maniplex::{Maniplex, ManiplexError};
pub use polytopality::{is_polytopal, PolytopalityReport};
pub use poset::{InducedPoset, RankedPoset};
