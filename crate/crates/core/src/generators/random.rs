//! Seeded random maniplexes.
//!
//! A rank-n sample is grown from copies of random (n-1)-maniplexes: the last
//! colour glues ridges (components of colours `0..n-2`) in pairs along random
//! colour-preserving isomorphisms, or maps a ridge to itself by a fixed-point
//! free automorphism. Gluing along isomorphisms makes the new colour commute
//! with every colour below `n-2`, so only simplicity needs a rejection check.
//! The component of flag 0 is returned.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GeneratorError;
use crate::graph::{is_isomorphism, propagate_map, spanning_tree, ColourSet, ColouredGraph};
use crate::maniplex::Maniplex;

pub const RANDOM_MAX_RANK: usize = 4;
pub const RANDOM_MAX_FLAGS: usize = 512;
const ATTEMPTS: usize = 200;
const MAX_COPIES: usize = 6;

pub fn random_maniplex(rank: usize, seed: u64, budget: usize) -> Result<Maniplex, GeneratorError> {
    if rank == 0 || rank > RANDOM_MAX_RANK {
        return Err(GeneratorError::BadParam(format!("random rank must be in 1..={RANDOM_MAX_RANK}, got {rank}")));
    }
    if budget > RANDOM_MAX_FLAGS {
        return Err(GeneratorError::BadParam(format!("random budget must be at most {RANDOM_MAX_FLAGS}, got {budget}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = sample(rank, budget, &mut rng).ok_or(GeneratorError::BudgetExhausted { attempts: ATTEMPTS })?;
    Ok(Maniplex::new(graph)?)
}

fn sample(rank: usize, budget: usize, rng: &mut ChaCha8Rng) -> Option<ColouredGraph> {
    (0..ATTEMPTS).find_map(|_| attempt(rank, budget, rng))
}

fn attempt(rank: usize, budget: usize, rng: &mut ChaCha8Rng) -> Option<ColouredGraph> {
    match rank {
        1 => (budget >= 2).then(|| ColouredGraph::new(1, vec![vec![1, 0]]).expect("1-maniplex")),
        2 => {
            if budget < 4 {
                return None;
            }
            let p = rng.gen_range(2..=budget / 2);
            let f = 2 * p;
            let r0 = (0..f).map(|v| v ^ 1).collect();
            let r1 = (0..f).map(|v| if v % 2 == 1 { (v + 1) % f } else { (v + f - 1) % f }).collect();
            ColouredGraph::new(2, vec![r0, r1]).ok()
        }
        _ => glue(rank, budget, rng),
    }
}

fn glue(rank: usize, budget: usize, rng: &mut ChaCha8Rng) -> Option<ColouredGraph> {
    let types = rng.gen_range(1..=2);
    let mut facets = Vec::new();
    for _ in 0..types {
        let sub = rng.gen_range(1..=(budget / 2).max(1));
        if let Some(g) = sample(rank - 1, sub, rng) {
            facets.push(g);
        }
    }
    if facets.is_empty() {
        return None;
    }

    let mut copies: Vec<usize> = Vec::new();
    let mut used = 0;
    for (t, g) in facets.iter().enumerate() {
        if used + g.flag_count() <= budget {
            copies.push(t);
            used += g.flag_count();
        }
    }
    while copies.len() < MAX_COPIES && rng.gen_bool(0.6) {
        let t = rng.gen_range(0..facets.len());
        if used + facets[t].flag_count() > budget {
            break;
        }
        copies.push(t);
        used += facets[t].flag_count();
    }
    if copies.is_empty() {
        return None;
    }

    let mut rows: Vec<Vec<usize>> = vec![Vec::with_capacity(used); rank];
    let mut offset = 0;
    for &t in &copies {
        let g = &facets[t];
        for c in 0..rank - 1 {
            rows[c].extend(g.matching(c).iter().map(|&w| w + offset));
        }
        offset += g.flag_count();
    }
    rows[rank - 1] = vec![usize::MAX; used];

    let ridge_colours = ColourSet::below(rank - 2);
    let mut seen = vec![false; used];
    let mut ridges: Vec<Ridge> = Vec::new();
    for v in 0..used {
        if seen[v] {
            continue;
        }
        let ridge = Ridge::new(&rows, rank - 2, ridge_colours, v);
        ridge.flags.iter().for_each(|&w| seen[w] = true);
        ridges.push(ridge);
    }

    let mut classes: Vec<Vec<usize>> = Vec::new();
    for r in 0..ridges.len() {
        let class = classes
            .iter_mut()
            .find(|class| !ridges[class[0]].isomorphisms_to(&ridges[r]).is_empty());
        match class {
            Some(class) => class.push(r),
            None => classes.push(vec![r]),
        }
    }

    let last = &mut rows[rank - 1];
    for mut class in classes {
        class.shuffle(rng);
        while let Some(a) = class.pop() {
            let ra = &ridges[a];
            if class.is_empty() || rng.gen_bool(0.2) {
                let mut inv = ra.involutions();
                if let Some(phi) = inv.choose_mut(rng) {
                    for (k, &v) in ra.flags.iter().enumerate() {
                        last[v] = ra.flags[phi[k]];
                    }
                    continue;
                }
                if class.is_empty() {
                    return None;
                }
            }
            let b = class.pop().expect("non-empty class");
            let rb = &ridges[b];
            let isos = ra.isomorphisms_to(rb);
            let phi = isos.choose(rng)?;
            for (k, &v) in ra.flags.iter().enumerate() {
                let w = rb.flags[phi[k]];
                last[v] = w;
                last[w] = v;
            }
        }
    }

    let full = ColouredGraph::new(rank, rows).ok()?;
    let component = full.component_of(ColourSet::full(rank), 0);
    let graph = full.induced(&component).ok()?;
    Maniplex::new(graph.clone()).ok()?;
    Some(graph)
}

/// A component of the ridge colours, relabelled locally in BFS order.
struct Ridge {
    flags: Vec<usize>,
    graph: ColouredGraph,
    tree: Vec<(usize, usize, usize)>,
}

impl Ridge {
    fn new(rows: &[Vec<usize>], rank: usize, colours: ColourSet, start: usize) -> Ridge {
        let mut flags = vec![start];
        let mut index = HashMap::from([(start, 0)]);
        let mut head = 0;
        while head < flags.len() {
            let v = flags[head];
            head += 1;
            for c in colours.iter() {
                let w = rows[c][v];
                if !index.contains_key(&w) {
                    index.insert(w, flags.len());
                    flags.push(w);
                }
            }
        }
        let local = (0..rank)
            .map(|c| flags.iter().map(|&v| index[&rows[c][v]]).collect())
            .collect();
        let graph = ColouredGraph::new(rank, local).expect("ridge of a valid facet");
        let tree = spanning_tree(&graph).expect("ridge is connected");
        Ridge { flags, graph, tree }
    }

    fn isomorphisms_to(&self, other: &Ridge) -> Vec<Vec<usize>> {
        if self.flags.len() != other.flags.len() {
            return Vec::new();
        }
        (0..other.flags.len())
            .filter_map(|anchor| propagate_map(&self.graph, &self.tree, &other.graph, anchor))
            .filter(|phi| is_isomorphism(&self.graph, &other.graph, phi))
            .collect()
    }

    /// Automorphisms usable as the new colour inside this ridge.
    fn involutions(&self) -> Vec<Vec<usize>> {
        let g = &self.graph;
        self.isomorphisms_to(self)
            .into_iter()
            .filter(|phi| {
                (0..phi.len()).all(|k| phi[k] != k && phi[phi[k]] == k && (0..g.rank()).all(|c| g.adj(c, k) != phi[k]))
            })
            .collect()
    }
}
