//! Maniplexes: connected properly coloured graphs whose colours `i`, `j`
//! with `|i - j| > 1` commute. Faces, the product structure of middle-rank
//! faces and normalisation of coloured paths live here.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{ColourSet, ColouredGraph, GraphError, Partition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ManiplexError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph is disconnected: no path from flag {from} to flag {to}")]
    Disconnected { from: usize, to: usize },
    #[error("the {{{i},{j}}} 2-factor through flag {flag} is not a 4-cycle")]
    BadTwoFactor { i: usize, j: usize, flag: usize },
    #[error("face of rank {face_rank} has no product decomposition in rank {rank}")]
    RankOutOfRange { rank: usize, face_rank: usize },
    #[error("colour {colour} is out of range for rank {rank}")]
    ColourOutOfRange { colour: usize, rank: usize },
    #[error("flag {flag} is out of range")]
    FlagOutOfRange { flag: usize },
    #[error("path step {position} uses pivot colour {colour}")]
    PathUsesPivotColour { position: usize, colour: usize },
    #[error("pivot colours must be strictly increasing and below the rank")]
    InvalidPivots,
}

/// An `i`-face: a connected component of the maniplex with its `i`-edges
/// removed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub rank: usize,
    /// Block id in `components(graph, complement {rank})`.
    pub index: usize,
    pub representative: usize,
    /// Sorted ascending.
    pub flags: Vec<usize>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn contains(&self, flag: usize) -> bool {
        self.flags.binary_search(&flag).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Maniplex {
    graph: ColouredGraph,
    face_partitions: Vec<Partition>,
    faces: Vec<Vec<Face>>,
}

impl Maniplex {
    /// Checks connectivity and the commutation of colours more than one
    /// apart. For fixed-point-free involutions without shared edges,
    /// commuting is the same as every such 2-factor being a 4-cycle.
    pub fn new(graph: ColouredGraph) -> Result<Self, ManiplexError> {
        let n = graph.rank();
        let reached = graph.component_of(ColourSet::full(n), 0);
        if reached.len() != graph.flag_count() {
            let mut seen = vec![false; graph.flag_count()];
            for &v in &reached {
                seen[v] = true;
            }
            let to = seen.iter().position(|&s| !s).unwrap_or(0);
            return Err(ManiplexError::Disconnected { from: 0, to });
        }
        for i in 0..n {
            for j in i + 2..n {
                for v in 0..graph.flag_count() {
                    if graph.adj(i, graph.adj(j, v)) != graph.adj(j, graph.adj(i, v)) {
                        return Err(ManiplexError::BadTwoFactor { i, j, flag: v });
                    }
                }
            }
        }
        let face_partitions: Vec<Partition> = (0..n)
            .map(|i| graph.components(ColourSet::singleton(i).complement(n)))
            .collect();
        let faces = face_partitions
            .iter()
            .enumerate()
            .map(|(rank, part)| {
                part.blocks()
                    .into_iter()
                    .enumerate()
                    .map(|(index, flags)| Face {
                        rank,
                        index,
                        representative: flags[0],
                        flags,
                    })
                    .collect()
            })
            .collect();
        Ok(Maniplex {
            graph,
            face_partitions,
            faces,
        })
    }

    pub fn from_matchings(rank: usize, matchings: Vec<Vec<usize>>) -> Result<Self, ManiplexError> {
        Maniplex::new(ColouredGraph::new(rank, matchings)?)
    }

    pub fn graph(&self) -> &ColouredGraph {
        &self.graph
    }

    pub fn into_graph(self) -> ColouredGraph {
        self.graph
    }

    pub fn rank(&self) -> usize {
        self.graph.rank()
    }

    pub fn flag_count(&self) -> usize {
        self.graph.flag_count()
    }

    #[inline]
    pub fn adj(&self, colour: usize, flag: usize) -> usize {
        self.graph.adj(colour, flag)
    }

    /// The `i`-faces, ordered by their smallest flag.
    pub fn faces(&self, i: usize) -> &[Face] {
        &self.faces[i]
    }

    /// `components(graph, complement {i})`.
    pub fn face_partition(&self, i: usize) -> &Partition {
        &self.face_partitions[i]
    }

    pub fn face_partitions(&self) -> &[Partition] {
        &self.face_partitions
    }

    /// Index of the `i`-face containing `flag`.
    pub fn face_of(&self, i: usize, flag: usize) -> usize {
        self.face_partitions[i].block_of(flag)
    }

    /// Face counts per rank.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// Splits a face of middle rank `i` into a component of the colours below
    /// `i` and a component of the colours above `i` through its
    /// representative, and checks that the face is their cartesian product.
    pub fn face_factors(&self, face: &Face) -> Result<FaceFactors, ManiplexError> {
        let n = self.rank();
        let i = face.rank;
        if i == 0 || i + 2 > n {
            return Err(ManiplexError::RankOutOfRange { rank: n, face_rank: i });
        }
        let root = face.representative;
        let (below, below_tree) = self.tree(ColourSet::below(i), root);
        let (above, above_tree) = self.tree(ColourSet::above(i, n), root);

        // grid[b][a]: the flag reached from `root` by the low path to `below[a]`
        // followed by the high path to `above[b]`.
        let mut grid: Vec<Vec<usize>> = Vec::with_capacity(above.len());
        grid.push(below.clone());
        for &(child, parent, colour) in &above_tree {
            debug_assert_eq!(child, grid.len());
            let row = grid[parent].iter().map(|&v| self.adj(colour, v)).collect();
            grid.push(row);
        }
        let mut product_holds = true;
        for row in &grid {
            for &(child, parent, colour) in &below_tree {
                if self.adj(colour, row[parent]) != row[child] {
                    product_holds = false;
                }
            }
        }
        let mut coordinates = vec![None; self.flag_count()];
        for (b, row) in grid.iter().enumerate() {
            for (a, &v) in row.iter().enumerate() {
                if coordinates[v].is_some() {
                    product_holds = false;
                }
                coordinates[v] = Some((a, b));
            }
        }
        let coords: Vec<Option<(usize, usize)>> = face.flags.iter().map(|&v| coordinates[v]).collect();
        let covered = coords.iter().all(Option::is_some);
        Ok(FaceFactors {
            product_holds: product_holds && covered && face.len() == below.len() * above.len(),
            below,
            above,
            coordinates: coords.into_iter().map(|c| c.unwrap_or((usize::MAX, usize::MAX))).collect(),
        })
    }

    /// BFS over `colours` from `root`; returns the visit order and tree edges
    /// as `(child position, parent position, colour)`.
    fn tree(&self, colours: ColourSet, root: usize) -> (Vec<usize>, Vec<(usize, usize, usize)>) {
        let mut pos = vec![usize::MAX; self.flag_count()];
        let mut order = vec![root];
        let mut edges = Vec::new();
        pos[root] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            for c in colours.iter() {
                let w = self.adj(c, v);
                if pos[w] == usize::MAX {
                    pos[w] = order.len();
                    edges.push((order.len(), head, c));
                    order.push(w);
                }
            }
            head += 1;
        }
        (order, edges)
    }

    /// Rewrites `path` so that its colours pass through the windows cut out
    /// by `pivots` in increasing order, and splits it at the window changes.
    ///
    /// Segment `j` uses only colours strictly between `pivots[j-1]` and
    /// `pivots[j]` (with `-1` and `n` as outer bounds). The segments are
    /// consecutive and join the endpoints of `path`.
    pub fn normalize_path(&self, path: &ColouredPath, pivots: &[usize]) -> Result<Vec<ColouredPath>, ManiplexError> {
        let n = self.rank();
        if path.start >= self.flag_count() {
            return Err(ManiplexError::FlagOutOfRange { flag: path.start });
        }
        if pivots.windows(2).any(|w| w[0] >= w[1]) || pivots.iter().any(|&p| p >= n) {
            return Err(ManiplexError::InvalidPivots);
        }
        for (position, &colour) in path.colours.iter().enumerate() {
            if colour >= n {
                return Err(ManiplexError::ColourOutOfRange { colour, rank: n });
            }
            if pivots.binary_search(&colour).is_ok() {
                return Err(ManiplexError::PathUsesPivotColour { position, colour });
            }
        }
        let word = normal_form(&path.colours);
        let window = |c: usize| pivots.partition_point(|&p| p < c);
        let mut segments: Vec<ColouredPath> = Vec::with_capacity(pivots.len() + 1);
        let mut at = path.start;
        let mut rest = word.as_slice();
        for j in 0..=pivots.len() {
            let cut = rest.iter().position(|&c| window(c) != j).unwrap_or(rest.len());
            let (seg, tail) = rest.split_at(cut);
            let segment = ColouredPath::new(at, seg.to_vec());
            at = segment.end(&self.graph);
            segments.push(segment);
            rest = tail;
        }
        debug_assert!(rest.is_empty(), "normal form is not window-monotone");
        debug_assert_eq!(at, path.end(&self.graph));
        Ok(segments)
    }
}

/// Result of [`Maniplex::face_factors`].
#[derive(Clone, Debug)]
pub struct FaceFactors {
    /// Component of the colours below the face's rank, in BFS order from the
    /// representative.
    pub below: Vec<usize>,
    /// Component of the colours above the face's rank.
    pub above: Vec<usize>,
    /// `(index into below, index into above)` for each flag of the face, in
    /// the face's flag order.
    pub coordinates: Vec<(usize, usize)>,
    pub product_holds: bool,
}

/// A walk given by a start flag and a colour sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredPath {
    pub start: usize,
    pub colours: Vec<usize>,
}

impl ColouredPath {
    pub fn new(start: usize, colours: Vec<usize>) -> Self {
        ColouredPath { start, colours }
    }

    pub fn end(&self, graph: &ColouredGraph) -> usize {
        graph.walk(self.start, &self.colours)
    }

    pub fn colour_set(&self) -> ColourSet {
        self.colours.iter().copied().collect()
    }
}

/// Normal form of a colour word under the maniplex relations: adjacent equal
/// colours cancel and adjacent colours more than one apart commute, with the
/// smaller one moved first.
///
/// Each incoming colour is pushed and sunk left past larger non-neighbouring
/// colours; meeting an equal colour cancels both. The prefix is kept in normal
/// form throughout, so one pass suffices.
pub fn normal_form(word: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(word.len());
    for &c in word {
        let mut pos = out.len();
        while pos > 0 && out[pos - 1] > c + 1 {
            pos -= 1;
        }
        if pos > 0 && out[pos - 1] == c {
            out.remove(pos - 1);
        } else {
            out.insert(pos, c);
        }
    }
    out
}
