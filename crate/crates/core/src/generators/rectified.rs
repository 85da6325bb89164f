//! Quotients of the rectified cubic honeycomb (cuboctahedra and octahedra).
//!
//! Doubled coordinates again: vertices are points with exactly one odd
//! coordinate (midpoints of cube edges), squares sit at centres with two odd
//! coordinates, a triangle is cut off a cube `C` (all odd) at a corner `P`
//! (all even). Cuboctahedra are indexed by cube centres, octahedra by cube
//! corners.

use serde::Serialize;

use super::{enumerate_flags, GeneratorError, Lattice};
use crate::maniplex::Maniplex;

type P3 = [i64; 3];

/// Four cubes per fundamental domain. The translation `(1, 0, 0)` glues
/// every cube to itself, so opposite vertices of the squares normal to `y`
/// and `z` coincide in the quotient.
pub const STANDARD_BASIS: [[i64; 3]; 3] = [[0, 2, 0], [1, 0, 0], [1, 0, 2]];

/// Same index as [`STANDARD_BASIS`] with `(1, 0, 0)` replaced by `(1, 1, 0)`;
/// no square or triangle has a repeated vertex.
pub const SHEARED_BASIS: [[i64; 3]; 3] = [[0, 2, 0], [1, 1, 0], [1, 0, 2]];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CellKind {
    Cuboctahedron,
    Octahedron,
}

impl CellKind {
    /// Cells are told apart by their flag counts.
    pub fn from_flag_count(n: usize) -> Option<CellKind> {
        match n {
            96 => Some(CellKind::Cuboctahedron),
            48 => Some(CellKind::Octahedron),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Polygon {
    Square(P3),
    Triangle { cube: P3, corner: P3 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Cell {
    Cubocta(P3),
    Octa(P3),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Flag {
    v: P3,
    e: [P3; 2],
    p: Polygon,
    c: Cell,
}

fn add(a: P3, b: P3) -> P3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn unit(axis: usize, sign: i64) -> P3 {
    let mut u = [0; 3];
    u[axis] = sign;
    u
}

fn edge(a: P3, b: P3) -> [P3; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Vertices in cyclic order.
fn vertices(p: Polygon) -> Vec<P3> {
    match p {
        Polygon::Square(q) => {
            let odd: Vec<usize> = (0..3).filter(|&k| q[k].rem_euclid(2) == 1).collect();
            let (a, b) = (odd[0], odd[1]);
            vec![
                add(q, unit(a, 1)),
                add(q, unit(b, 1)),
                add(q, unit(a, -1)),
                add(q, unit(b, -1)),
            ]
        }
        Polygon::Triangle { cube, corner } => {
            let d = sub(cube, corner);
            (0..3).map(|k| add(corner, unit(k, d[k]))).collect()
        }
    }
}

fn polygons_of(c: Cell) -> Vec<Polygon> {
    let signs = [-1, 1];
    let mut out = Vec::new();
    match c {
        Cell::Cubocta(cube) => {
            for k in 0..3 {
                for s in signs {
                    out.push(Polygon::Square(add(cube, unit(k, s))));
                }
            }
            for x in signs {
                for y in signs {
                    for z in signs {
                        out.push(Polygon::Triangle { cube, corner: add(cube, [x, y, z]) });
                    }
                }
            }
        }
        Cell::Octa(corner) => {
            for x in signs {
                for y in signs {
                    for z in signs {
                        out.push(Polygon::Triangle { cube: add(corner, [x, y, z]), corner });
                    }
                }
            }
        }
    }
    out
}

fn centre(c: Cell) -> P3 {
    match c {
        Cell::Cubocta(p) | Cell::Octa(p) => p,
    }
}

fn step(f: &Flag, colour: usize) -> Flag {
    let Flag { v, e, p, c } = *f;
    let w = if e[0] == v { e[1] } else { e[0] };
    match colour {
        0 => Flag { v: w, ..*f },
        1 => {
            let vs = vertices(p);
            let n = vs.len();
            let i = vs.iter().position(|&x| x == v).expect("vertex on polygon");
            let (prev, next) = (vs[(i + n - 1) % n], vs[(i + 1) % n]);
            let other = if next == w { prev } else { next };
            Flag { e: edge(v, other), ..*f }
        }
        2 => {
            let other = polygons_of(c)
                .into_iter()
                .find(|&q| {
                    if q == p {
                        return false;
                    }
                    let vs = vertices(q);
                    vs.contains(&e[0]) && vs.contains(&e[1])
                })
                .expect("every edge lies on two polygons of a cell");
            Flag { p: other, ..*f }
        }
        _ => {
            let other = match p {
                Polygon::Square(q) => {
                    let k = (0..3).find(|&k| q[k].rem_euclid(2) == 0).expect("square centre");
                    let a = Cell::Cubocta(add(q, unit(k, 1)));
                    if a == c {
                        Cell::Cubocta(add(q, unit(k, -1)))
                    } else {
                        a
                    }
                }
                Polygon::Triangle { cube, corner } => {
                    if c == Cell::Cubocta(cube) {
                        Cell::Octa(corner)
                    } else {
                        Cell::Cubocta(cube)
                    }
                }
            };
            Flag { c: other, ..*f }
        }
    }
}

fn translate(f: &Flag, t: P3) -> Flag {
    let p = match f.p {
        Polygon::Square(q) => Polygon::Square(add(q, t)),
        Polygon::Triangle { cube, corner } => Polygon::Triangle { cube: add(cube, t), corner: add(corner, t) },
    };
    let c = match f.c {
        Cell::Cubocta(x) => Cell::Cubocta(add(x, t)),
        Cell::Octa(x) => Cell::Octa(add(x, t)),
    };
    Flag { v: add(f.v, t), e: edge(add(f.e[0], t), add(f.e[1], t)), p, c }
}

/// Quotient of the rectified cubic honeycomb by the translations spanned by
/// the rows of `basis` (in units of the cube edge).
pub fn rectified_cubic_3torus(basis: [[i64; 3]; 3]) -> Result<Maniplex, GeneratorError> {
    let rows: Vec<Vec<i64>> = basis.iter().map(|r| r.to_vec()).collect();
    let lattice = Lattice::new(&rows)?.scaled(2);
    let canon = |f: &Flag| {
        let x = centre(f.c);
        let r = lattice.reduce(&x);
        translate(f, [r[0] - x[0], r[1] - x[1], r[2] - x[2]])
    };
    let start = Flag {
        v: [1, 0, 0],
        e: edge([1, 0, 0], [0, 1, 0]),
        p: Polygon::Triangle { cube: [1, 1, 1], corner: [0, 0, 0] },
        c: Cell::Octa([0, 0, 0]),
    };
    enumerate_flags(4, canon(&start), |f, c| canon(&step(f, c)))
}
