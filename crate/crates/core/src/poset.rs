//! Ranked posets stored as Hasse diagrams between consecutive ranks, the
//! poset induced by a maniplex, and direct checks of the abstract polytope
//! axioms on them.
//!
//! The poset-side checks here enumerate maximal chains and never look at
//! partitions of flags, so they serve as an independent oracle for the
//! graph-side criteria in [`crate::polytopality`].

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::graph::Partition;
use crate::maniplex::{Face, Maniplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("a ranked poset needs rank at least -1 and one level per rank")]
    BadShape,
    #[error("cover ({lower}, {upper}) at level {level} is out of range")]
    BadCover { level: usize, lower: usize, upper: usize },
    #[error("element {0:?} does not exist")]
    NoSuchElement(ElementId),
    #[error("{lower:?} is not below {upper:?}")]
    NotComparable { lower: ElementId, upper: ElementId },
    #[error("faces do not form a chain of proper faces")]
    NotAChain,
}

/// An element of a ranked poset, addressed by rank and position within the
/// rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ElementId {
    pub rank: isize,
    pub index: usize,
}

impl ElementId {
    pub fn new(rank: isize, index: usize) -> Self {
        ElementId { rank, index }
    }
}

impl std::fmt::Display for ElementId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F{}.{}", self.rank, self.index)
    }
}

/// Outcome of a predicate together with a counterexample when it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    pub fn pass() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fail(witness: W) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }

    pub fn from_witness(witness: Option<W>) -> Self {
        Verdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiamondWitness {
    /// The middle rank `i`.
    pub rank: usize,
    pub lower: ElementId,
    pub upper: ElementId,
    /// Number of rank-`i` elements strictly between `lower` and `upper`.
    pub count: usize,
}

/// A maximal chain, listed from the bottom up.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MaximalChain {
    pub elements: Vec<ElementId>,
}

impl MaximalChain {
    pub fn index_at(&self, rank: isize) -> Option<usize> {
        self.elements.iter().find(|e| e.rank == rank).map(|e| e.index)
    }

    /// Elements of rank `0..n`, dropping the bottom and top.
    pub fn proper(&self) -> &[ElementId] {
        let len = self.elements.len();
        if len < 2 {
            &[]
        } else {
            &self.elements[1..len - 1]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SfcWitness {
    pub from: MaximalChain,
    pub to: MaximalChain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaithfulWitness {
    pub chain: MaximalChain,
    /// Flags in the chain's intersection; at least two.
    pub flags: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetReport {
    pub ranked_bounded: bool,
    pub uniform_chains: bool,
    pub chain_count: usize,
    pub diamond: Verdict<DiamondWitness>,
    pub strong_flag_connected: Verdict<SfcWitness>,
    /// Only meaningful for posets induced by a maniplex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faithful: Option<Verdict<FaithfulWitness>>,
    pub is_polytope: bool,
}

/// A finite ranked poset with ranks `-1..=n`, stored as its Hasse diagram.
/// Every cover relation joins consecutive ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedPoset {
    rank: isize,
    up: Vec<Vec<Vec<usize>>>,
    down: Vec<Vec<Vec<usize>>>,
}

fn level(rank: isize) -> usize {
    (rank + 1) as usize
}

impl RankedPoset {
    /// `sizes[l]` is the number of elements of rank `l - 1`; `covers[l]`
    /// lists pairs `(a, b)` with `a` at level `l` covered by `b` at level
    /// `l + 1`.
    pub fn new(sizes: &[usize], covers: &[Vec<(usize, usize)>]) -> Result<Self, PosetError> {
        if sizes.is_empty() || covers.len() + 1 != sizes.len() {
            return Err(PosetError::BadShape);
        }
        let mut up: Vec<Vec<Vec<usize>>> = sizes.iter().map(|&s| vec![Vec::new(); s]).collect();
        let mut down = up.clone();
        for (l, pairs) in covers.iter().enumerate() {
            for &(a, b) in pairs {
                if a >= sizes[l] || b >= sizes[l + 1] {
                    return Err(PosetError::BadCover {
                        level: l,
                        lower: a,
                        upper: b,
                    });
                }
                up[l][a].push(b);
                down[l + 1][b].push(a);
            }
        }
        for lists in up.iter_mut().chain(down.iter_mut()) {
            for list in lists.iter_mut() {
                list.sort_unstable();
                list.dedup();
            }
        }
        Ok(RankedPoset {
            rank: sizes.len() as isize - 2,
            up,
            down,
        })
    }

    /// Rank of the top; the bottom has rank `-1`.
    pub fn rank(&self) -> isize {
        self.rank
    }

    pub fn count_at(&self, rank: isize) -> usize {
        self.up.get(level(rank)).map_or(0, Vec::len)
    }

    /// Element counts for ranks `-1..=n`.
    pub fn sizes(&self) -> Vec<usize> {
        self.up.iter().map(Vec::len).collect()
    }

    pub fn element_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, id: ElementId) -> bool {
        id.rank >= -1 && id.rank <= self.rank && id.index < self.count_at(id.rank)
    }

    /// Upper covers, at rank `id.rank + 1`.
    pub fn up(&self, id: ElementId) -> &[usize] {
        &self.up[level(id.rank)][id.index]
    }

    /// Lower covers, at rank `id.rank - 1`.
    pub fn down(&self, id: ElementId) -> &[usize] {
        &self.down[level(id.rank)][id.index]
    }

    pub fn bottom(&self) -> ElementId {
        ElementId::new(-1, 0)
    }

    pub fn top(&self) -> ElementId {
        ElementId::new(self.rank, 0)
    }

    /// Covers between ranks `l - 1` and `l`, in level-indexed form.
    pub fn covers(&self) -> Vec<Vec<(usize, usize)>> {
        self.up[..self.up.len() - 1]
            .iter()
            .map(|lists| {
                lists
                    .iter()
                    .enumerate()
                    .flat_map(|(a, ups)| ups.iter().map(move |&b| (a, b)))
                    .collect()
            })
            .collect()
    }

    /// Elements `x` with `from <= x`, per level, by upward reachability.
    fn up_set(&self, from: ElementId) -> Vec<Vec<bool>> {
        let mut seen: Vec<Vec<bool>> = self.up.iter().map(|l| vec![false; l.len()]).collect();
        seen[level(from.rank)][from.index] = true;
        for l in level(from.rank)..self.up.len() - 1 {
            for a in 0..self.up[l].len() {
                if seen[l][a] {
                    for &b in &self.up[l][a] {
                        seen[l + 1][b] = true;
                    }
                }
            }
        }
        seen
    }

    fn down_set(&self, from: ElementId) -> Vec<Vec<bool>> {
        let mut seen: Vec<Vec<bool>> = self.up.iter().map(|l| vec![false; l.len()]).collect();
        seen[level(from.rank)][from.index] = true;
        for l in (1..=level(from.rank)).rev() {
            for b in 0..self.down[l].len() {
                if seen[l][b] {
                    for &a in &self.down[l][b] {
                        seen[l - 1][a] = true;
                    }
                }
            }
        }
        seen
    }

    /// `a <= b` in the transitive closure of the cover relation.
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        if !self.contains(a) || !self.contains(b) || a.rank > b.rank {
            return false;
        }
        self.up_set(a)[level(b.rank)][b.index]
    }

    /// A unique bottom and top, and no element other than those is maximal
    /// or minimal.
    pub fn is_ranked_bounded(&self) -> bool {
        let last = self.up.len() - 1;
        self.up[0].len() == 1
            && self.up[last].len() == 1
            && (0..last).all(|l| self.up[l].iter().all(|u| !u.is_empty()))
            && (1..=last).all(|l| self.down[l].iter().all(|d| !d.is_empty()))
    }

    /// All maximal chains, in lexicographic order of their element indices.
    pub fn maximal_chains(&self) -> Vec<MaximalChain> {
        let mut out = Vec::new();
        let mut stack: Vec<ElementId> = Vec::new();
        for l in 0..self.up.len() {
            for a in 0..self.up[l].len() {
                if self.down[l][a].is_empty() {
                    self.extend_chain(ElementId::new(l as isize - 1, a), &mut stack, &mut out);
                }
            }
        }
        out
    }

    fn extend_chain(&self, at: ElementId, stack: &mut Vec<ElementId>, out: &mut Vec<MaximalChain>) {
        stack.push(at);
        let ups = self.up(at);
        if ups.is_empty() {
            out.push(MaximalChain {
                elements: stack.clone(),
            });
        } else {
            for &b in ups {
                self.extend_chain(ElementId::new(at.rank + 1, b), stack, out);
            }
        }
        stack.pop();
    }

    /// For every middle rank `i` and every `E < F` with ranks `i - 1` and
    /// `i + 1`, the number of rank-`i` elements between them must be 2.
    /// The witness is the first violation by rank, then `E`, then `F`.
    pub fn diamond(&self) -> Verdict<DiamondWitness> {
        Verdict::from_witness(self.diamond_violations().into_iter().next())
    }

    /// Every violation of the diamond condition.
    pub fn diamond_violations(&self) -> Vec<DiamondWitness> {
        let mut out = Vec::new();
        for i in 0..self.rank.max(0) {
            let lower_level = level(i - 1);
            for e in 0..self.up[lower_level].len() {
                let mut counts: HashMap<usize, usize> = HashMap::new();
                for &mid in &self.up[lower_level][e] {
                    for &f in &self.up[lower_level + 1][mid] {
                        *counts.entry(f).or_insert(0) += 1;
                    }
                }
                let mut counts: Vec<(usize, usize)> = counts.into_iter().collect();
                counts.sort_unstable();
                for (f, count) in counts {
                    if count != 2 {
                        out.push(DiamondWitness {
                            rank: i as usize,
                            lower: ElementId::new(i - 1, e),
                            upper: ElementId::new(i + 1, f),
                            count,
                        });
                    }
                }
            }
        }
        out
    }

    /// Strong flag connectivity, checked pair by pair: any two maximal
    /// chains are joined by a sequence of chains, each differing from the
    /// previous in one element, all containing the elements the two share.
    ///
    /// Reachability is memoised per set of shared ranks: moving only at
    /// ranks outside `T` keeps the elements at ranks in `T` fixed, so the
    /// reachable chains from a chain are one connected component of the
    /// chain graph restricted to moves outside `T`.
    pub fn strong_flag_connectivity(&self) -> Verdict<SfcWitness> {
        let chains = self.maximal_chains();
        let width = self.up.len();
        if chains.iter().any(|c| c.elements.len() != width) {
            return Verdict {
                holds: false,
                witness: None,
            };
        }
        let rows: Vec<Vec<usize>> = chains
            .iter()
            .map(|c| c.elements.iter().map(|e| e.index).collect())
            .collect();
        // groups[l]: chains that agree everywhere except possibly at level l.
        let groups: Vec<Vec<Vec<usize>>> = (0..width)
            .map(|l| {
                let mut by_key: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
                for (k, row) in rows.iter().enumerate() {
                    let mut key = row.clone();
                    key[l] = usize::MAX;
                    by_key.entry(key).or_default().push(k);
                }
                by_key.into_values().filter(|g| g.len() > 1).collect()
            })
            .collect();
        let mut reach: HashMap<u64, Vec<usize>> = HashMap::new();
        for a in 0..rows.len() {
            for b in a + 1..rows.len() {
                let shared: u64 = (0..width)
                    .filter(|&l| rows[a][l] == rows[b][l])
                    .fold(0, |m, l| m | (1u64 << l));
                let comp = reach
                    .entry(shared)
                    .or_insert_with(|| chain_components(rows.len(), &groups, shared));
                if comp[a] != comp[b] {
                    return Verdict::fail(SfcWitness {
                        from: chains[a].clone(),
                        to: chains[b].clone(),
                    });
                }
            }
        }
        Verdict::pass()
    }

    /// The interval `[lower, upper]`, re-ranked so that `lower` becomes the
    /// new bottom. Also returns, per new level, the original indices.
    pub fn section_with_map(
        &self,
        lower: ElementId,
        upper: ElementId,
    ) -> Result<(RankedPoset, Vec<Vec<usize>>), PosetError> {
        for id in [lower, upper] {
            if !self.contains(id) {
                return Err(PosetError::NoSuchElement(id));
            }
        }
        if !self.leq(lower, upper) {
            return Err(PosetError::NotComparable { lower, upper });
        }
        let above = self.up_set(lower);
        let below = self.down_set(upper);
        let levels = level(lower.rank)..=level(upper.rank);
        let mut keep: Vec<Vec<usize>> = Vec::new();
        let mut new_index: Vec<HashMap<usize, usize>> = Vec::new();
        for l in levels.clone() {
            let kept: Vec<usize> = (0..self.up[l].len()).filter(|&a| above[l][a] && below[l][a]).collect();
            new_index.push(kept.iter().enumerate().map(|(k, &a)| (a, k)).collect());
            keep.push(kept);
        }
        let mut covers = Vec::new();
        for (k, l) in levels.clone().enumerate().take(keep.len() - 1) {
            let mut pairs = Vec::new();
            for (na, &a) in keep[k].iter().enumerate() {
                for &b in &self.up[l][a] {
                    if let Some(&nb) = new_index[k + 1].get(&b) {
                        pairs.push((na, nb));
                    }
                }
            }
            covers.push(pairs);
        }
        let sizes: Vec<usize> = keep.iter().map(Vec::len).collect();
        Ok((RankedPoset::new(&sizes, &covers)?, keep))
    }

    pub fn section(&self, lower: ElementId, upper: ElementId) -> Result<RankedPoset, PosetError> {
        self.section_with_map(lower, upper).map(|(p, _)| p)
    }

    /// Number of connected components of the Hasse diagram restricted to the
    /// elements of rank `0..n`.
    pub fn proper_part_components(&self) -> usize {
        let last = self.up.len() - 1;
        if last < 2 {
            return 0;
        }
        let offsets: Vec<usize> = (0..=last)
            .scan(0, |acc, l| {
                let o = *acc;
                *acc += self.up[l].len();
                Some(o)
            })
            .collect();
        let mut seen = vec![false; self.element_count()];
        let mut components = 0;
        for l in 1..last {
            for a in 0..self.up[l].len() {
                if seen[offsets[l] + a] {
                    continue;
                }
                components += 1;
                seen[offsets[l] + a] = true;
                let mut queue = VecDeque::from([(l, a)]);
                while let Some((l, a)) = queue.pop_front() {
                    let mut visit = |l2: usize, b: usize, queue: &mut VecDeque<(usize, usize)>| {
                        if l2 >= 1 && l2 < last && !seen[offsets[l2] + b] {
                            seen[offsets[l2] + b] = true;
                            queue.push_back((l2, b));
                        }
                    };
                    for &b in &self.up[l][a] {
                        visit(l + 1, b, &mut queue);
                    }
                    for &b in &self.down[l][a] {
                        visit(l - 1, b, &mut queue);
                    }
                }
            }
        }
        components
    }

    /// The axioms checked directly: bounded and ranked, every maximal chain
    /// has one element per rank, strong flag connectivity and the diamond
    /// condition.
    pub fn is_polytope(&self) -> PosetReport {
        let chains = self.maximal_chains();
        let width = self.up.len();
        let ranked_bounded = self.is_ranked_bounded();
        let uniform_chains = chains.iter().all(|c| c.elements.len() == width);
        let diamond = self.diamond();
        let strong_flag_connected = self.strong_flag_connectivity();
        let is_polytope = ranked_bounded && uniform_chains && diamond.holds && strong_flag_connected.holds;
        PosetReport {
            ranked_bounded,
            uniform_chains,
            chain_count: chains.len(),
            diamond,
            strong_flag_connected,
            faithful: None,
            is_polytope,
        }
    }

    /// A rank-preserving isomorphism onto `other`, as per-level index maps.
    /// Plain backtracking; meant for small posets.
    pub fn isomorphism(&self, other: &RankedPoset) -> Option<Vec<Vec<usize>>> {
        if self.sizes() != other.sizes() {
            return None;
        }
        let mut map: Vec<Vec<usize>> = self.up.iter().map(|l| vec![usize::MAX; l.len()]).collect();
        let mut used: Vec<Vec<bool>> = self.up.iter().map(|l| vec![false; l.len()]).collect();
        let order: Vec<(usize, usize)> = (0..self.up.len())
            .flat_map(|l| (0..self.up[l].len()).map(move |a| (l, a)))
            .collect();
        if self.assign(other, &order, 0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    fn assign(
        &self,
        other: &RankedPoset,
        order: &[(usize, usize)],
        k: usize,
        map: &mut Vec<Vec<usize>>,
        used: &mut Vec<Vec<bool>>,
    ) -> bool {
        let Some(&(l, a)) = order.get(k) else {
            return true;
        };
        let mut image: Vec<usize> = if l == 0 {
            Vec::new()
        } else {
            self.down[l][a].iter().map(|&d| map[l - 1][d]).collect()
        };
        image.sort_unstable();
        for b in 0..other.up[l].len() {
            if used[l][b] || other.up[l][b].len() != self.up[l][a].len() {
                continue;
            }
            if l > 0 && other.down[l][b] != image {
                continue;
            }
            map[l][a] = b;
            used[l][b] = true;
            if self.assign(other, order, k + 1, map, used) {
                return true;
            }
            used[l][b] = false;
            map[l][a] = usize::MAX;
        }
        false
    }
}

fn chain_components(count: usize, groups: &[Vec<Vec<usize>>], fixed: u64) -> Vec<usize> {
    let mut label: Vec<usize> = (0..count).collect();
    fn root(label: &mut [usize], mut x: usize) -> usize {
        while label[x] != x {
            label[x] = label[label[x]];
            x = label[x];
        }
        x
    }
    for (l, level_groups) in groups.iter().enumerate() {
        if fixed & (1 << l) != 0 {
            continue;
        }
        for g in level_groups {
            let r0 = root(&mut label, g[0]);
            for &x in &g[1..] {
                let r = root(&mut label, x);
                label[r] = r0;
            }
        }
    }
    (0..count).map(|x| root(&mut label, x)).collect()
}

/// The poset of faces of a maniplex: `F_i <= F_j` iff `i <= j` and the two
/// faces share a flag, with a bottom `F_{-1}` and top `F_n` adjoined.
#[derive(Clone, Debug)]
pub struct InducedPoset {
    poset: RankedPoset,
    membership: Vec<Partition>,
    faces: Vec<Vec<Face>>,
    flag_count: usize,
}

impl InducedPoset {
    pub fn new(m: &Maniplex) -> Self {
        let n = m.rank();
        let mut sizes = vec![1];
        sizes.extend(m.f_vector());
        sizes.push(1);
        let mut covers: Vec<Vec<(usize, usize)>> = Vec::with_capacity(n + 1);
        covers.push((0..m.faces(0).len()).map(|a| (0, a)).collect());
        for i in 0..n.saturating_sub(1) {
            let mut pairs: Vec<(usize, usize)> = (0..m.flag_count())
                .map(|v| (m.face_of(i, v), m.face_of(i + 1, v)))
                .collect();
            pairs.sort_unstable();
            pairs.dedup();
            covers.push(pairs);
        }
        covers.push((0..m.faces(n - 1).len()).map(|a| (a, 0)).collect());
        let poset = RankedPoset::new(&sizes, &covers).expect("face covers are in range");
        let induced = InducedPoset {
            poset,
            membership: m.face_partitions().to_vec(),
            faces: (0..n).map(|i| m.faces(i).to_vec()).collect(),
            flag_count: m.flag_count(),
        };
        debug_assert!(induced.hasse_matches_intersection());
        induced
    }

    pub fn poset(&self) -> &RankedPoset {
        &self.poset
    }

    pub fn rank(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self, rank: usize) -> &[Face] {
        &self.faces[rank]
    }

    pub fn face(&self, id: ElementId) -> Option<&Face> {
        if id.rank < 0 {
            return None;
        }
        self.faces.get(id.rank as usize).and_then(|f| f.get(id.index))
    }

    /// Flags of an element; the improper faces contain every flag.
    pub fn flags_of(&self, id: ElementId) -> Vec<usize> {
        match self.face(id) {
            Some(face) => face.flags.clone(),
            None => (0..self.flag_count).collect(),
        }
    }

    /// Whether flag `v` lies in element `id`.
    pub fn holds_flag(&self, id: ElementId, v: usize) -> bool {
        if id.rank < 0 || id.rank as usize >= self.rank() {
            return true;
        }
        self.membership[id.rank as usize].block_of(v) == id.index
    }

    /// The defining order: ranks compare and the flag sets meet.
    pub fn leq_by_intersection(&self, a: ElementId, b: ElementId) -> bool {
        a.rank <= b.rank && (0..self.flag_count).any(|v| self.holds_flag(a, v) && self.holds_flag(b, v))
    }

    /// Spot check that Hasse reachability reproduces the intersection order.
    fn hasse_matches_intersection(&self) -> bool {
        let n = self.rank() as isize;
        let sample = |r: isize| (0..self.poset.count_at(r).min(4)).map(move |k| ElementId::new(r, k));
        (0..n).all(|r| {
            (r..n).all(|s| {
                sample(r).all(|a| sample(s).all(|b| self.poset.leq(a, b) == self.leq_by_intersection(a, b)))
            })
        })
    }

    /// The chain of faces through flag `v`, from `F_{-1}` to `F_n`.
    pub fn chain_of_flag(&self, v: usize) -> MaximalChain {
        let n = self.rank();
        let mut elements = vec![ElementId::new(-1, 0)];
        elements.extend((0..n).map(|i| ElementId::new(i as isize, self.membership[i].block_of(v))));
        elements.push(ElementId::new(n as isize, 0));
        MaximalChain { elements }
    }

    pub fn maximal_chains(&self) -> Vec<MaximalChain> {
        self.poset.maximal_chains()
    }

    /// Flags common to every face of a chain. Improper faces are ignored.
    pub fn chain_intersection(&self, chain: &[ElementId]) -> Result<Vec<usize>, PosetError> {
        let proper: Vec<ElementId> = chain
            .iter()
            .copied()
            .filter(|id| id.rank >= 0 && (id.rank as usize) < self.rank())
            .collect();
        for id in &proper {
            if !self.poset.contains(*id) {
                return Err(PosetError::NoSuchElement(*id));
            }
        }
        for w in proper.windows(2) {
            if w[0].rank >= w[1].rank || !self.poset.leq(w[0], w[1]) {
                return Err(PosetError::NotAChain);
            }
        }
        let flags: Vec<usize> = (0..self.flag_count)
            .filter(|&v| proper.iter().all(|&id| self.holds_flag(id, v)))
            .collect();
        assert!(!flags.is_empty(), "a chain of faces always has a common flag");
        Ok(flags)
    }

    /// Faithful when every flag is determined by its faces, i.e. the meet of
    /// the face partitions of all ranks is discrete.
    pub fn is_faithful(&self) -> Verdict<FaithfulWitness> {
        let meet = Partition::meet_all(&self.membership)
            .expect("face partitions share the flag set")
            .unwrap_or_else(|| Partition::discrete(self.flag_count));
        let sizes = meet.block_sizes();
        match sizes.iter().position(|&s| s >= 2) {
            None => Verdict::pass(),
            Some(block) => {
                let flags = meet.block(block);
                Verdict::fail(FaithfulWitness {
                    chain: self.chain_of_flag(flags[0]),
                    flags,
                })
            }
        }
    }

    /// Faithfulness from the chain-counting side: as many maximal chains as
    /// flags.
    pub fn is_faithful_by_chain_count(&self) -> bool {
        self.poset.maximal_chains().len() == self.flag_count
    }

    /// Faithfulness from the definition: every maximal chain meets in
    /// exactly one flag.
    pub fn is_faithful_by_intersections(&self) -> bool {
        self.poset
            .maximal_chains()
            .iter()
            .all(|c| self.chain_intersection(&c.elements).map(|f| f.len() == 1).unwrap_or(false))
    }

    /// [`RankedPoset::is_polytope`] plus faithfulness.
    pub fn report(&self) -> PosetReport {
        let mut report = self.poset.is_polytope();
        report.faithful = Some(self.is_faithful());
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> RankedPoset {
        // vertices 0..4, edges 0..4 with edge k = {k, k+1 mod 4}
        let covers = vec![
            (0..4).map(|a| (0, a)).collect(),
            (0..4).flat_map(|k| [(k, k), ((k + 1) % 4, k)]).collect(),
            (0..4).map(|a| (a, 0)).collect(),
        ];
        RankedPoset::new(&[1, 4, 4, 1], &covers).unwrap()
    }

    #[test]
    fn square_is_a_polytope() {
        let p = square();
        assert!(p.is_ranked_bounded());
        assert_eq!(p.maximal_chains().len(), 8);
        let report = p.is_polytope();
        assert!(report.is_polytope, "{report:?}");
    }

    #[test]
    fn diamond_failure_is_reported() {
        // two vertices, both in each of three edges
        let covers = vec![
            vec![(0, 0), (0, 1)],
            vec![(0, 0), (1, 0), (0, 1), (1, 1), (0, 2), (1, 2)],
            vec![(0, 0), (1, 0), (2, 0)],
        ];
        let p = RankedPoset::new(&[1, 2, 3, 1], &covers).unwrap();
        let d = p.diamond();
        assert!(!d.holds);
        let w = d.witness.unwrap();
        assert_eq!((w.rank, w.count), (1, 3));
    }

    #[test]
    fn sections() {
        let p = square();
        let whole = p.section(p.bottom(), p.top()).unwrap();
        assert_eq!(whole, p);
        let edge = p.section(p.bottom(), ElementId::new(1, 2)).unwrap();
        assert_eq!(edge.sizes(), vec![1, 2, 1]);
        assert!(matches!(
            p.section(ElementId::new(0, 0), ElementId::new(1, 2)),
            Err(PosetError::NotComparable { .. })
        ));
        assert_eq!(p.proper_part_components(), 1);
    }

    #[test]
    fn disconnected_proper_part_is_not_strongly_connected() {
        // two disjoint digons under one top: diamond holds, connectivity fails
        let covers = vec![
            (0..4).map(|a| (0, a)).collect(),
            vec![(0, 0), (1, 0), (0, 1), (1, 1), (2, 2), (3, 2), (2, 3), (3, 3)],
            (0..4).map(|a| (a, 0)).collect(),
        ];
        let p = RankedPoset::new(&[1, 4, 4, 1], &covers).unwrap();
        assert!(p.diamond().holds);
        assert!(!p.strong_flag_connectivity().holds);
        assert_eq!(p.proper_part_components(), 2);
    }

    #[test]
    fn isomorphism_search() {
        let p = square();
        // relabel vertices by reversing
        let covers = vec![
            (0..4).map(|a| (0, a)).collect(),
            (0..4).flat_map(|k| [(3 - k, k), (3 - (k + 1) % 4, k)]).collect(),
            (0..4).map(|a| (a, 0)).collect(),
        ];
        let q = RankedPoset::new(&[1, 4, 4, 1], &covers).unwrap();
        assert!(p.isomorphism(&q).is_some());
        let tri = RankedPoset::new(
            &[1, 3, 3, 1],
            &[
                (0..3).map(|a| (0, a)).collect(),
                (0..3).flat_map(|k| [(k, k), ((k + 1) % 3, k)]).collect(),
                (0..3).map(|a| (a, 0)).collect(),
            ],
        )
        .unwrap();
        assert!(p.isomorphism(&tri).is_none());
    }

    #[test]
    fn bad_covers_rejected() {
        assert!(matches!(
            RankedPoset::new(&[1, 2], &[vec![(0, 5)]]),
            Err(PosetError::BadCover { .. })
        ));
        assert_eq!(RankedPoset::new(&[1, 2], &[]), Err(PosetError::BadShape));
    }
}
