//! Properly edge-coloured graphs, colour-restricted components and the
//! partition algebra built on top of them.
//!
//! Flags are dense indices `0..F`. Every colour `c` is stored as a flat
//! involution `adj_c: flag -> flag`, so the graph is `n`-regular with exactly
//! one edge of each colour at every flag.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported rank; colour sets are single machine words.
pub const MAX_RANK: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("rank {rank} exceeds the supported maximum of {MAX_RANK}")]
    RankTooLarge { rank: usize },
    #[error("a coloured graph needs at least one flag")]
    NoFlags,
    #[error("expected {expected} matchings, found {found}")]
    MatchingCount { expected: usize, found: usize },
    #[error("matching of colour {colour} has {found} entries, expected {expected}")]
    MatchingLength {
        colour: usize,
        expected: usize,
        found: usize,
    },
    #[error("colour {colour} maps flag {flag} to {target}, outside 0..{flag_count}")]
    OutOfRange {
        colour: usize,
        flag: usize,
        target: usize,
        flag_count: usize,
    },
    #[error("colour {colour} fixes flag {flag}")]
    FixedPoint { colour: usize, flag: usize },
    #[error("colour {colour} is not an involution at flag {flag}")]
    NotInvolution { colour: usize, flag: usize },
    #[error("colours {first} and {second} join flag {flag} to the same neighbour")]
    MultiEdge {
        first: usize,
        second: usize,
        flag: usize,
    },
    #[error("partitions cover {left} and {right} flags")]
    SizeMismatch { left: usize, right: usize },
    #[error("graph is not connected")]
    Disconnected,
}

/// A subset of the colours `[n] = {0, .., n-1}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", from = "Vec<usize>")]
pub struct ColourSet(u32);

impl ColourSet {
    pub const EMPTY: ColourSet = ColourSet(0);

    pub fn from_bits(bits: u32) -> Self {
        ColourSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// All colours of a rank-`rank` graph.
    pub fn full(rank: usize) -> Self {
        debug_assert!(rank <= MAX_RANK);
        if rank >= 32 {
            ColourSet(u32::MAX)
        } else {
            ColourSet((1u32 << rank) - 1)
        }
    }

    pub fn singleton(colour: usize) -> Self {
        ColourSet(1 << colour)
    }

    /// Colours `lo..hi` (half open); empty when `lo >= hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        if lo >= hi {
            return ColourSet::EMPTY;
        }
        ColourSet(ColourSet::full(hi).0 & !ColourSet::full(lo).0)
    }

    /// Colours strictly below `j`.
    pub fn below(j: usize) -> Self {
        ColourSet::range(0, j)
    }

    /// Colours strictly above `i` in a rank-`rank` graph.
    pub fn above(i: usize, rank: usize) -> Self {
        ColourSet::range(i + 1, rank)
    }

    /// Colours strictly between `i` and `j`.
    pub fn between(i: usize, j: usize) -> Self {
        ColourSet::range(i + 1, j)
    }

    pub fn contains(self, colour: usize) -> bool {
        colour < 32 && self.0 & (1 << colour) != 0
    }

    pub fn with(self, colour: usize) -> Self {
        ColourSet(self.0 | (1 << colour))
    }

    pub fn without(self, colour: usize) -> Self {
        ColourSet(self.0 & !(1 << colour))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// `[rank] \ self`.
    pub fn complement(self, rank: usize) -> Self {
        ColourSet(!self.0 & ColourSet::full(rank).0)
    }

    pub fn union(self, other: Self) -> Self {
        ColourSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ColourSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&c| self.contains(c))
    }

    /// Every subset of `[rank]`, in increasing bit order.
    pub fn all_subsets(rank: usize) -> impl Iterator<Item = ColourSet> {
        (0..(1u64 << rank)).map(|b| ColourSet(b as u32))
    }
}

impl FromIterator<usize> for ColourSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(ColourSet::EMPTY, ColourSet::with)
    }
}

impl From<ColourSet> for Vec<usize> {
    fn from(set: ColourSet) -> Self {
        set.iter().collect()
    }
}

impl From<Vec<usize>> for ColourSet {
    fn from(colours: Vec<usize>) -> Self {
        colours.into_iter().collect()
    }
}

impl fmt::Debug for ColourSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ColourSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, c) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// A properly `n`-edge-coloured simple graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ColouredGraph {
    rank: usize,
    flag_count: usize,
    /// `adj[c * flag_count + v]` is the `c`-neighbour of `v`.
    adj: Vec<usize>,
}

impl fmt::Debug for ColouredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColouredGraph")
            .field("rank", &self.rank)
            .field("flag_count", &self.flag_count)
            .finish()
    }
}

impl ColouredGraph {
    /// Builds a graph from one matching per colour, checking that each is a
    /// fixed-point-free involution and that no two colours share an edge.
    pub fn new(rank: usize, matchings: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        if rank == 0 {
            return Err(GraphError::ZeroRank);
        }
        if rank > MAX_RANK {
            return Err(GraphError::RankTooLarge { rank });
        }
        if matchings.len() != rank {
            return Err(GraphError::MatchingCount {
                expected: rank,
                found: matchings.len(),
            });
        }
        let flag_count = matchings[0].len();
        if flag_count == 0 {
            return Err(GraphError::NoFlags);
        }
        let mut adj = Vec::with_capacity(rank * flag_count);
        for (colour, row) in matchings.into_iter().enumerate() {
            if row.len() != flag_count {
                return Err(GraphError::MatchingLength {
                    colour,
                    expected: flag_count,
                    found: row.len(),
                });
            }
            adj.extend(row);
        }
        let graph = ColouredGraph {
            rank,
            flag_count,
            adj,
        };
        graph.check()?;
        Ok(graph)
    }

    fn check(&self) -> Result<(), GraphError> {
        let f = self.flag_count;
        for colour in 0..self.rank {
            let row = self.matching(colour);
            for (flag, &target) in row.iter().enumerate() {
                if target >= f {
                    return Err(GraphError::OutOfRange {
                        colour,
                        flag,
                        target,
                        flag_count: f,
                    });
                }
            }
            for (flag, &target) in row.iter().enumerate() {
                if target == flag {
                    return Err(GraphError::FixedPoint { colour, flag });
                }
                if row[target] != flag {
                    return Err(GraphError::NotInvolution { colour, flag });
                }
            }
        }
        for flag in 0..f {
            for first in 0..self.rank {
                for second in first + 1..self.rank {
                    if self.adj(first, flag) == self.adj(second, flag) {
                        return Err(GraphError::MultiEdge {
                            first,
                            second,
                            flag,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn flag_count(&self) -> usize {
        self.flag_count
    }

    /// The `colour`-neighbour of `flag`.
    #[inline]
    pub fn adj(&self, colour: usize, flag: usize) -> usize {
        self.adj[colour * self.flag_count + flag]
    }

    pub fn matching(&self, colour: usize) -> &[usize] {
        &self.adj[colour * self.flag_count..(colour + 1) * self.flag_count]
    }

    pub fn matchings(&self) -> Vec<Vec<usize>> {
        (0..self.rank).map(|c| self.matching(c).to_vec()).collect()
    }

    /// Applies the colours of `word` in order, starting at `start`.
    pub fn walk(&self, start: usize, word: &[usize]) -> usize {
        word.iter().fold(start, |v, &c| self.adj(c, v))
    }

    /// Flags reachable from `start` using only colours in `colours`, in BFS
    /// order.
    pub fn component_of(&self, colours: ColourSet, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.flag_count];
        let mut order = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for c in colours.iter().take_while(|&c| c < self.rank) {
                let w = self.adj(c, v);
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
        order
    }

    /// Connected components of the subgraph keeping only edges with colours in
    /// `colours`.
    pub fn components(&self, colours: ColourSet) -> Partition {
        let mut uf = UnionFind::new(self.flag_count);
        for c in colours.iter().take_while(|&c| c < self.rank) {
            for v in 0..self.flag_count {
                uf.union(v, self.adj(c, v));
            }
        }
        let labels: Vec<usize> = (0..self.flag_count).map(|v| uf.find(v)).collect();
        Partition::from_labels(&labels)
    }

    /// Components for every subset of `[n]`, indexed by the subset's bits.
    /// Subsets are independent, so they are evaluated in parallel.
    pub fn all_components(&self) -> Vec<Partition> {
        ColourSet::all_subsets(self.rank)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|set| self.components(set))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(ColourSet::full(self.rank), 0).len() == self.flag_count
    }

    /// The subgraph on `flags`, which must be closed under every colour.
    /// New flag `k` is `flags[k]`.
    pub fn induced(&self, flags: &[usize]) -> Result<ColouredGraph, GraphError> {
        let index: HashMap<usize, usize> = flags.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut matchings = vec![Vec::with_capacity(flags.len()); self.rank];
        for &v in flags {
            for (c, row) in matchings.iter_mut().enumerate() {
                let w = self.adj(c, v);
                let target = *index.get(&w).ok_or(GraphError::OutOfRange {
                    colour: c,
                    flag: v,
                    target: w,
                    flag_count: flags.len(),
                })?;
                row.push(target);
            }
        }
        ColouredGraph::new(self.rank, matchings)
    }

    /// Permutes the colours: colour `c` of the result is colour `order[c]`
    /// of `self`. Reversing the order gives the dual.
    pub fn recolour(&self, order: &[usize]) -> Result<ColouredGraph, GraphError> {
        let matchings = order.iter().map(|&c| self.matching(c).to_vec()).collect();
        ColouredGraph::new(self.rank, matchings)
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// A partition of the flags `0..F` into numbered blocks.
///
/// Block ids are canonical: scanning flags in increasing order, each new block
/// receives the next id. Two partitions with the same blocks therefore compare
/// equal with `==`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Partition {
    ids: Vec<usize>,
    block_count: usize,
}

impl Partition {
    /// Canonicalizes arbitrary labels; flags with equal labels share a block.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Self {
        let mut map: HashMap<L, usize> = HashMap::new();
        let ids: Vec<usize> = labels
            .iter()
            .map(|&l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Partition {
            block_count: map.len(),
            ids,
        }
    }

    pub fn discrete(flag_count: usize) -> Self {
        Partition {
            ids: (0..flag_count).collect(),
            block_count: flag_count,
        }
    }

    pub fn single_block(flag_count: usize) -> Self {
        Partition {
            ids: vec![0; flag_count],
            block_count: usize::from(flag_count > 0),
        }
    }

    pub fn flag_count(&self) -> usize {
        self.ids.len()
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn block_of(&self, flag: usize) -> usize {
        self.ids[flag]
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.ids[a] == self.ids[b]
    }

    pub fn is_discrete(&self) -> bool {
        self.block_count == self.ids.len()
    }

    /// Flags of every block, each list sorted ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count];
        for (v, &id) in self.ids.iter().enumerate() {
            blocks[id].push(v);
        }
        blocks
    }

    pub fn block(&self, id: usize) -> Vec<usize> {
        (0..self.ids.len()).filter(|&v| self.ids[v] == id).collect()
    }

    /// Smallest flag of each block; ascending because ids are canonical.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.block_count];
        for (v, &id) in self.ids.iter().enumerate() {
            if reps[id] == usize::MAX {
                reps[id] = v;
            }
        }
        reps
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.block_count];
        for &id in &self.ids {
            sizes[id] += 1;
        }
        sizes
    }

    /// Coarsest common refinement.
    pub fn meet(&self, other: &Partition) -> Result<Partition, GraphError> {
        if self.ids.len() != other.ids.len() {
            return Err(GraphError::SizeMismatch {
                left: self.ids.len(),
                right: other.ids.len(),
            });
        }
        let pairs: Vec<(usize, usize)> = self.ids.iter().copied().zip(other.ids.iter().copied()).collect();
        Ok(Partition::from_labels(&pairs))
    }

    /// Meet of a non-empty sequence of partitions over the same flags.
    pub fn meet_all<'a, I>(parts: I) -> Result<Option<Partition>, GraphError>
    where
        I: IntoIterator<Item = &'a Partition>,
    {
        let mut acc: Option<Partition> = None;
        for p in parts {
            acc = Some(match acc {
                None => p.clone(),
                Some(a) => a.meet(p)?,
            });
        }
        Ok(acc)
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        if self.ids.len() != other.ids.len() {
            return false;
        }
        let mut image = vec![usize::MAX; self.block_count];
        for (v, &id) in self.ids.iter().enumerate() {
            let target = other.ids[v];
            if image[id] == usize::MAX {
                image[id] = target;
            } else if image[id] != target {
                return false;
            }
        }
        true
    }

    /// Lexicographically smallest pair `u < v` sharing a block of `coarse`
    /// while lying in different blocks of `self`.
    pub fn first_split_pair(&self, coarse: &Partition) -> Option<(usize, usize)> {
        let blocks = coarse.blocks();
        for u in 0..self.ids.len() {
            let block = &blocks[coarse.ids[u]];
            if let Some(&v) = block.iter().find(|&&v| v > u && self.ids[v] != self.ids[u]) {
                return Some((u, v));
            }
        }
        None
    }
}

/// Spanning tree of a connected graph as `(child, parent, colour)` in BFS
/// order from flag 0.
fn bfs_tree(graph: &ColouredGraph) -> Vec<(usize, usize, usize)> {
    let mut seen = vec![false; graph.flag_count()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut tree = Vec::with_capacity(graph.flag_count());
    while let Some(v) = queue.pop_front() {
        for c in 0..graph.rank() {
            let w = graph.adj(c, v);
            if !seen[w] {
                seen[w] = true;
                tree.push((w, v, c));
                queue.push_back(w);
            }
        }
    }
    tree
}

/// The unique colour-preserving map `from -> to` sending flag 0 to
/// `image_of_root`, if it exists. `from` must be connected and have the same
/// rank as `to`.
pub(crate) fn propagate_map(
    from: &ColouredGraph,
    tree: &[(usize, usize, usize)],
    to: &ColouredGraph,
    image_of_root: usize,
) -> Option<Vec<usize>> {
    let mut phi = vec![usize::MAX; from.flag_count()];
    phi[0] = image_of_root;
    for &(child, parent, c) in tree {
        phi[child] = to.adj(c, phi[parent]);
    }
    if is_colour_homomorphism(from, to, &phi) {
        Some(phi)
    } else {
        None
    }
}

pub(crate) fn spanning_tree(graph: &ColouredGraph) -> Result<Vec<(usize, usize, usize)>, GraphError> {
    let tree = bfs_tree(graph);
    if tree.len() + 1 != graph.flag_count() {
        return Err(GraphError::Disconnected);
    }
    Ok(tree)
}

/// `phi(adj_c(v)) == adj_c(phi(v))` for every flag and colour.
pub fn is_colour_homomorphism(from: &ColouredGraph, to: &ColouredGraph, phi: &[usize]) -> bool {
    from.rank() == to.rank()
        && phi.len() == from.flag_count()
        && phi.iter().all(|&x| x < to.flag_count())
        && (0..from.rank()).all(|c| (0..from.flag_count()).all(|v| phi[from.adj(c, v)] == to.adj(c, phi[v])))
}

/// Checks that `phi` is a colour-preserving bijection from `g` onto `h`.
pub fn is_isomorphism(g: &ColouredGraph, h: &ColouredGraph, phi: &[usize]) -> bool {
    if g.flag_count() != h.flag_count() || !is_colour_homomorphism(g, h, phi) {
        return false;
    }
    let mut hit = vec![false; h.flag_count()];
    phi.iter().all(|&x| !std::mem::replace(&mut hit[x], true))
}

/// Searches for a colour-preserving isomorphism `g -> h`.
///
/// In a connected properly coloured graph a colour-preserving map is fixed by
/// the image of a single flag, so it suffices to try every flag of `h` as the
/// image of flag 0 of `g` and propagate.
pub fn are_isomorphic(g: &ColouredGraph, h: &ColouredGraph) -> Result<Option<Vec<usize>>, GraphError> {
    let tree = spanning_tree(g)?;
    spanning_tree(h)?;
    if g.rank() != h.rank() || g.flag_count() != h.flag_count() {
        return Ok(None);
    }
    for anchor in 0..h.flag_count() {
        if let Some(phi) = propagate_map(g, &tree, h, anchor) {
            if is_isomorphism(g, h, &phi) {
                return Ok(Some(phi));
            }
        }
    }
    Ok(None)
}
