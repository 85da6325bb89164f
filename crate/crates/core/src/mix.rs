//! Mixes (parallel products) of maniplexes and coverings between them.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{is_colour_homomorphism, propagate_map, spanning_tree, ColouredGraph, GraphError};
use crate::maniplex::{Maniplex, ManiplexError};

#[derive(Debug, Error)]
pub enum MixError {
    #[error("ranks differ: {left} and {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("base flag {flag} out of range for {flag_count} flags")]
    FlagOutOfRange { flag: usize, flag_count: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Maniplex(#[from] ManiplexError),
}

/// A colour-commuting surjection between flag sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringMap {
    map: Vec<usize>,
}

impl CoveringMap {
    pub fn new(map: Vec<usize>) -> Self {
        CoveringMap { map }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, flag: usize) -> usize {
        self.map[flag]
    }

    /// Checks that the map commutes with every colour and hits every flag.
    pub fn verify(&self, from: &ColouredGraph, to: &ColouredGraph) -> bool {
        if !is_colour_homomorphism(from, to, &self.map) {
            return false;
        }
        let mut hit = vec![false; to.flag_count()];
        self.map.iter().for_each(|&x| hit[x] = true);
        hit.into_iter().all(|h| h)
    }

    /// Sizes of the fibres; constant when the target is connected.
    pub fn fibre_sizes(&self, target_flags: usize) -> Vec<usize> {
        let mut sizes = vec![0; target_flags];
        self.map.iter().for_each(|&x| sizes[x] += 1);
        sizes
    }
}

#[derive(Clone, Debug)]
pub struct Mix {
    pub maniplex: Maniplex,
    /// Flag `k` of the mix is the pair `pairs[k]`.
    pub pairs: Vec<(usize, usize)>,
}

impl Mix {
    pub fn projections(&self) -> (CoveringMap, CoveringMap) {
        (
            CoveringMap::new(self.pairs.iter().map(|p| p.0).collect()),
            CoveringMap::new(self.pairs.iter().map(|p| p.1).collect()),
        )
    }
}

fn same_rank(m: &Maniplex, n: &Maniplex) -> Result<(), MixError> {
    if m.rank() != n.rank() {
        return Err(MixError::RankMismatch { left: m.rank(), right: n.rank() });
    }
    Ok(())
}

/// Component of the product graph containing `(base_m, base_n)`, grown by BFS.
pub fn mix(m: &Maniplex, n: &Maniplex, base_m: usize, base_n: usize) -> Result<Mix, MixError> {
    same_rank(m, n)?;
    for (flag, count) in [(base_m, m.flag_count()), (base_n, n.flag_count())] {
        if flag >= count {
            return Err(MixError::FlagOutOfRange { flag, flag_count: count });
        }
    }
    let rank = m.rank();
    let mut index = HashMap::from([((base_m, base_n), 0)]);
    let mut pairs = vec![(base_m, base_n)];
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); rank];
    let mut head = 0;
    while head < pairs.len() {
        let (a, u) = pairs[head];
        head += 1;
        for (c, row) in rows.iter_mut().enumerate() {
            let next = (m.adj(c, a), n.adj(c, u));
            let id = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                pairs.len() - 1
            });
            row.push(id);
        }
    }
    let maniplex = Maniplex::from_matchings(rank, rows)?;
    Ok(Mix { maniplex, pairs })
}

/// First covering `m -> n`, trying images of flag 0 in flag order.
pub fn find_covering(m: &Maniplex, n: &Maniplex) -> Result<Option<CoveringMap>, MixError> {
    same_rank(m, n)?;
    if m.flag_count() < n.flag_count() {
        return Ok(None);
    }
    let tree = spanning_tree(m.graph())?;
    for anchor in 0..n.flag_count() {
        if let Some(phi) = propagate_map(m.graph(), &tree, n.graph(), anchor) {
            let cover = CoveringMap::new(phi);
            if cover.verify(m.graph(), n.graph()) {
                return Ok(Some(cover));
            }
        }
    }
    Ok(None)
}
