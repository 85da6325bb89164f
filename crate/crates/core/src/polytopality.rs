//! Graph-side polytopality criteria and the flag graph of a polytope.
//!
//! All three criteria reduce to comparisons of colour-restricted component
//! partitions:
//!
//! * component intersection (CIP): for each non-empty colour set `S`, the
//!   meet over `i` in `S` of the `i`-face partitions equals the components of
//!   the graph without colours in `S`. A block of that meet is exactly the
//!   intersection of a chain of faces with ranks `S`, and such an
//!   intersection is a union of components of the graph without `S`, so it
//!   is connected iff it is a single such component.
//! * weak path intersection (WPIP): for `i < j`, flags joined both by a path
//!   using colours above `i` and by a path using colours below `j` are joined
//!   by a path using colours strictly between.
//! * strong path intersection (SPIP): the same for arbitrary colour sets
//!   `A`, `B` and their intersection.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{are_isomorphic, ColourSet, ColouredGraph, GraphError, Partition};
use crate::maniplex::Maniplex;
use crate::poset::{ElementId, InducedPoset, MaximalChain, PosetReport, RankedPoset, Verdict};

/// Ranks above this are too large for the exhaustive pairwise SPIP check.
pub const SPIP_EXHAUSTIVE_MAX_RANK: usize = 6;

#[derive(Debug, Error, Clone)]
pub enum PolytopalityError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("exhaustive SPIP check is limited to rank {SPIP_EXHAUSTIVE_MAX_RANK}, got {rank}")]
    RankTooLargeForExhaustive { rank: usize },
    #[error("poset is not an abstract polytope")]
    NotAPolytope,
    #[error("graph-side and poset-side verdicts disagree")]
    InconsistentVerdicts(Box<PolytopalityReport>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CipWitness {
    /// Ranks of the chain of faces.
    pub colours: ColourSet,
    /// Two flags in the same chain intersection but in different components
    /// of the graph without `colours`.
    pub flags: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WpipWitness {
    pub i: usize,
    pub j: usize,
    pub flags: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpipWitness {
    pub a: ColourSet,
    pub b: ColourSet,
    pub flags: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpipMode {
    /// All pairs of colour sets; fails above [`SPIP_EXHAUSTIVE_MAX_RANK`].
    Exhaustive,
    /// Exhaustive when the rank allows, otherwise the weak property, which
    /// is equivalent.
    Auto,
}

/// Lazily computed component partitions keyed by colour set.
pub struct ComponentCache<'a> {
    graph: &'a ColouredGraph,
    parts: HashMap<ColourSet, Partition>,
}

impl<'a> ComponentCache<'a> {
    pub fn new(graph: &'a ColouredGraph) -> Self {
        ComponentCache {
            graph,
            parts: HashMap::new(),
        }
    }

    /// Fills the cache for every colour subset at once, in parallel.
    pub fn with_all_subsets(graph: &'a ColouredGraph) -> Self {
        let parts = ColourSet::all_subsets(graph.rank()).zip(graph.all_components()).collect();
        ComponentCache { graph, parts }
    }

    pub fn get(&mut self, colours: ColourSet) -> &Partition {
        let graph = self.graph;
        self.parts.entry(colours).or_insert_with(|| graph.components(colours))
    }
}

/// Colour subsets ordered by size, then lexicographically by their sorted
/// colours.
fn subsets_by_size(rank: usize) -> Vec<ColourSet> {
    let mut sets: Vec<ColourSet> = ColourSet::all_subsets(rank).collect();
    sets.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
    sets
}

/// First split flag pair for the chain intersections with ranks `colours`.
pub fn cip_failure_at(m: &Maniplex, cache: &mut ComponentCache<'_>, colours: ColourSet) -> Option<(usize, usize)> {
    let meet = Partition::meet_all(colours.iter().map(|i| m.face_partition(i)))
        .expect("same flag set")?;
    let comps = cache.get(colours.complement(m.rank()));
    comps.first_split_pair(&meet)
}

pub fn check_cip(m: &Maniplex) -> Verdict<CipWitness> {
    let mut cache = ComponentCache::new(m.graph());
    check_cip_with(m, &mut cache)
}

fn check_cip_with(m: &Maniplex, cache: &mut ComponentCache<'_>) -> Verdict<CipWitness> {
    for colours in subsets_by_size(m.rank()) {
        if colours.is_empty() {
            continue;
        }
        if let Some(flags) = cip_failure_at(m, cache, colours) {
            return Verdict::fail(CipWitness { colours, flags });
        }
    }
    Verdict::pass()
}

/// The component intersection property checked literally: every chain of
/// proper faces is enumerated and its intersection tested for connectivity
/// by a search that never leaves it. Returns `None` when the poset has more
/// than `chain_limit` maximal chains.
pub fn check_cip_by_chains(m: &Maniplex, poset: &InducedPoset, chain_limit: usize) -> Option<bool> {
    let chains = poset.maximal_chains();
    if chains.len() > chain_limit {
        return None;
    }
    let n = m.rank();
    for colours in ColourSet::all_subsets(n).filter(|s| !s.is_empty()) {
        let mut seen: Vec<Vec<ElementId>> = chains
            .iter()
            .map(|c| c.proper().iter().copied().filter(|e| colours.contains(e.rank as usize)).collect())
            .collect();
        seen.sort();
        seen.dedup();
        let moves = colours.complement(n);
        for sub in seen {
            let inside = poset.chain_intersection(&sub).expect("sub-chain of a maximal chain");
            let reached = m.graph().component_of(moves, inside[0]);
            if reached.len() != inside.len() {
                return Some(false);
            }
        }
    }
    Some(true)
}

/// Flags joined above `i` and below `j` but not strictly between.
pub fn wpip_failure_at(m: &Maniplex, cache: &mut ComponentCache<'_>, i: usize, j: usize) -> Option<(usize, usize)> {
    let n = m.rank();
    let high = cache.get(ColourSet::above(i, n)).clone();
    let low = cache.get(ColourSet::below(j)).clone();
    let meet = high.meet(&low).expect("same flag set");
    cache.get(ColourSet::between(i, j)).first_split_pair(&meet)
}

pub fn check_wpip(m: &Maniplex) -> Verdict<WpipWitness> {
    let mut cache = ComponentCache::new(m.graph());
    check_wpip_with(m, &mut cache)
}

fn check_wpip_with(m: &Maniplex, cache: &mut ComponentCache<'_>) -> Verdict<WpipWitness> {
    let n = m.rank();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(flags) = wpip_failure_at(m, cache, i, j) {
                return Verdict::fail(WpipWitness { i, j, flags });
            }
        }
    }
    Verdict::pass()
}

/// Flags joined within `a` and within `b` but not within `a ∩ b`.
pub fn spip_failure_at(cache: &mut ComponentCache<'_>, a: ColourSet, b: ColourSet) -> Option<(usize, usize)> {
    let pa = cache.get(a).clone();
    let meet = pa.meet(cache.get(b)).expect("same flag set");
    cache.get(a.intersection(b)).first_split_pair(&meet)
}

/// The strong property over all pairs of colour sets (including the empty
/// set). Pairs are visited with `a` before `b` in bit order; pairs where one
/// set contains the other hold trivially and are skipped.
pub fn check_spip(m: &Maniplex, mode: SpipMode) -> Result<Verdict<SpipWitness>, PolytopalityError> {
    let n = m.rank();
    if n > SPIP_EXHAUSTIVE_MAX_RANK {
        return match mode {
            SpipMode::Exhaustive => Err(PolytopalityError::RankTooLargeForExhaustive { rank: n }),
            SpipMode::Auto => {
                let weak = check_wpip(m);
                Ok(Verdict {
                    holds: weak.holds,
                    witness: weak.witness.map(|w| SpipWitness {
                        a: ColourSet::above(w.i, n),
                        b: ColourSet::below(w.j),
                        flags: w.flags,
                    }),
                })
            }
        };
    }
    let mut cache = ComponentCache::with_all_subsets(m.graph());
    Ok(check_spip_with(n, &mut cache))
}

fn check_spip_with(n: usize, cache: &mut ComponentCache<'_>) -> Verdict<SpipWitness> {
    let sets: Vec<ColourSet> = ColourSet::all_subsets(n).collect();
    for (k, &a) in sets.iter().enumerate() {
        for &b in &sets[k + 1..] {
            if a.is_subset(b) || b.is_subset(a) {
                continue;
            }
            if let Some(flags) = spip_failure_at(cache, a, b) {
                return Verdict::fail(SpipWitness { a, b, flags });
            }
        }
    }
    Verdict::pass()
}

/// The map sending each flag to the chain of faces containing it.
pub fn beta(poset: &InducedPoset, flag_count: usize) -> Vec<MaximalChain> {
    (0..flag_count).map(|v| poset.chain_of_flag(v)).collect()
}

/// Flag graph of a polytope: one vertex per maximal chain, in lexicographic
/// order of the chains' element indices, with an `i`-edge between chains
/// differing only at rank `i`.
pub fn flag_graph(poset: &RankedPoset) -> Result<(ColouredGraph, Vec<MaximalChain>), PolytopalityError> {
    if poset.rank() < 1 || !poset.is_polytope().is_polytope {
        return Err(PolytopalityError::NotAPolytope);
    }
    let n = poset.rank() as usize;
    let chains = poset.maximal_chains();
    let rows: Vec<Vec<usize>> = chains
        .iter()
        .map(|c| c.elements.iter().map(|e| e.index).collect())
        .collect();
    let mut matchings = vec![vec![usize::MAX; chains.len()]; n];
    for (i, matching) in matchings.iter_mut().enumerate() {
        let mut pairs: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (k, row) in rows.iter().enumerate() {
            let mut key = row.clone();
            key[i + 1] = usize::MAX;
            pairs.entry(key).or_default().push(k);
        }
        for group in pairs.values() {
            if group.len() != 2 {
                return Err(PolytopalityError::NotAPolytope);
            }
            matching[group[0]] = group[1];
            matching[group[1]] = group[0];
        }
    }
    Ok((ColouredGraph::new(n, matchings)?, chains))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolytopalityReport {
    pub rank: usize,
    pub flag_count: usize,
    pub f_vector: Vec<usize>,
    pub cip: Verdict<CipWitness>,
    pub wpip: Verdict<WpipWitness>,
    pub spip: Verdict<SpipWitness>,
    pub poset: PosetReport,
    pub polytopal: bool,
    pub verdicts_consistent: bool,
    /// Colour-preserving isomorphism from the maniplex onto the flag graph of
    /// its induced poset, present when polytopal.
    pub isomorphism: Option<Vec<usize>>,
}

impl PolytopalityReport {
    pub fn faithful(&self) -> bool {
        self.poset.faithful.as_ref().is_some_and(|f| f.holds)
    }
}

/// Runs every criterion on both sides and checks that they agree.
pub fn is_polytopal(m: &Maniplex) -> Result<PolytopalityReport, PolytopalityError> {
    let n = m.rank();
    let mut cache = if n <= SPIP_EXHAUSTIVE_MAX_RANK {
        ComponentCache::with_all_subsets(m.graph())
    } else {
        ComponentCache::new(m.graph())
    };
    let cip = check_cip_with(m, &mut cache);
    let wpip = check_wpip_with(m, &mut cache);
    let spip = if n <= SPIP_EXHAUSTIVE_MAX_RANK {
        check_spip_with(n, &mut cache)
    } else {
        check_spip(m, SpipMode::Auto)?
    };
    let induced = InducedPoset::new(m);
    let poset = induced.report();
    let faithful = poset.faithful.as_ref().is_some_and(|f| f.holds);

    let mut isomorphism = None;
    if poset.is_polytope {
        let (fg, _) = flag_graph(induced.poset())?;
        isomorphism = are_isomorphic(m.graph(), &fg)?;
    }
    let polytopal = cip.holds;
    let verdicts_consistent = cip.holds == wpip.holds
        && wpip.holds == spip.holds
        && spip.holds == poset.is_polytope
        && (!cip.holds || (poset.diamond.holds && faithful && isomorphism.is_some()))
        && (!(faithful && poset.diamond.holds) || poset.strong_flag_connected.holds == cip.holds);
    let report = PolytopalityReport {
        rank: n,
        flag_count: m.flag_count(),
        f_vector: m.f_vector(),
        cip,
        wpip,
        spip,
        poset,
        polytopal,
        verdicts_consistent,
        isomorphism,
    };
    if report.verdicts_consistent {
        Ok(report)
    } else {
        Err(PolytopalityError::InconsistentVerdicts(Box::new(report)))
    }
}
