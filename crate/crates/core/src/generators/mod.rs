//! Deterministic constructors for the standard fixtures.

mod hypercube;
pub mod lattice;
mod random;
mod rectified;
mod torus;

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

use crate::graph::{ColouredGraph, GraphError};
use crate::maniplex::{Maniplex, ManiplexError};

pub use hypercube::hypercube;
pub use lattice::Lattice;
pub use random::{random_maniplex, RANDOM_MAX_FLAGS, RANDOM_MAX_RANK};
pub use rectified::{rectified_cubic_3torus, CellKind, SHEARED_BASIS, STANDARD_BASIS};
pub use torus::{klein_44, torus_44, torus_44_lattice};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("lattice basis is degenerate")]
    DegenerateBasis,
    #[error("no valid sample within {attempts} attempts")]
    BudgetExhausted { attempts: usize },
    #[error(transparent)]
    Maniplex(#[from] ManiplexError),
}

impl From<GraphError> for GeneratorError {
    fn from(e: GraphError) -> Self {
        GeneratorError::Maniplex(e.into())
    }
}

/// The 2p-cycle: colour 0 pairs `2k, 2k+1`, colour 1 pairs `2k+1, 2k+2`.
pub fn polygon(p: usize) -> Result<Maniplex, GeneratorError> {
    if p < 2 {
        return Err(GeneratorError::BadParam(format!("polygon needs p >= 2, got {p}")));
    }
    let f = 2 * p;
    let r0 = (0..f).map(|v| v ^ 1).collect();
    let r1 = (0..f)
        .map(|v| if v % 2 == 1 { (v + 1) % f } else { (v + f - 1) % f })
        .collect();
    Ok(Maniplex::from_matchings(2, vec![r0, r1])?)
}

/// Enumerates the flags reachable from `start` under `step`, numbering them
/// in BFS order.
fn enumerate_flags<T, S>(rank: usize, start: T, step: S) -> Result<Maniplex, GeneratorError>
where
    T: Clone + Eq + Hash,
    S: Fn(&T, usize) -> T,
{
    let mut index: HashMap<T, usize> = HashMap::new();
    let mut flags = vec![start.clone()];
    index.insert(start, 0);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); rank];
    let mut head = 0;
    while head < flags.len() {
        let flag = flags[head].clone();
        for (c, row) in rows.iter_mut().enumerate() {
            let next = step(&flag, c);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = flags.len();
                    index.insert(next.clone(), id);
                    flags.push(next);
                    id
                }
            };
            row.push(id);
        }
        head += 1;
    }
    let graph = ColouredGraph::new(rank, rows)?;
    Ok(Maniplex::new(graph)?)
}
