//! Quotients of the square tessellation of the plane.
//!
//! Points use doubled coordinates: vertices are even/even, edge midpoints
//! have one odd coordinate and square centres are odd/odd. A flag is a
//! (vertex, edge, square) triple and every flag involution is a point
//! reflection of one of its members through another.

use super::{enumerate_flags, GeneratorError, Lattice};
use crate::graph::are_isomorphic;
use crate::maniplex::Maniplex;
use crate::poset::InducedPoset;

type P2 = [i64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct SquareFlag {
    v: P2,
    e: P2,
    s: P2,
}

const START: SquareFlag = SquareFlag { v: [0, 0], e: [1, 0], s: [1, 1] };

fn reflect(p: P2, centre: P2) -> P2 {
    [2 * centre[0] - p[0], 2 * centre[1] - p[1]]
}

fn step(f: &SquareFlag, colour: usize) -> SquareFlag {
    let SquareFlag { v, e, s } = *f;
    match colour {
        0 => SquareFlag { v: reflect(v, e), e, s },
        1 => SquareFlag { v, e: [s[0] + v[0] - e[0], s[1] + v[1] - e[1]], s },
        _ => SquareFlag { v, e, s: reflect(s, e) },
    }
}

fn translate(f: &SquareFlag, t: P2) -> SquareFlag {
    let add = |p: P2| [p[0] + t[0], p[1] + t[1]];
    SquareFlag { v: add(f.v), e: add(f.e), s: add(f.s) }
}

/// `{4,4}` quotient by the translation lattice spanned by `u` and `w`.
pub fn torus_44_lattice(u: [i64; 2], w: [i64; 2]) -> Result<Maniplex, GeneratorError> {
    let lattice = Lattice::new(&[u.to_vec(), w.to_vec()])?.scaled(2);
    let canon = |f: &SquareFlag| {
        let r = lattice.reduce(&f.s);
        translate(f, [r[0] - f.s[0], r[1] - f.s[1]])
    };
    enumerate_flags(3, canon(&START), |f, c| canon(&step(f, c)))
}

/// The toroidal map `{4,4}_(b,c)` with `8(b^2 + c^2)` flags.
pub fn torus_44(b: i64, c: i64) -> Result<Maniplex, GeneratorError> {
    if b == 0 && c == 0 {
        return Err(GeneratorError::BadParam("torus44 needs (b, c) != (0, 0)".into()));
    }
    let m = torus_44_lattice([b, c], [-c, b])?;
    debug_assert_eq!(m.flag_count() as i64, 8 * (b * b + c * c));
    Ok(m)
}

/// Klein bottle map with 8 flags: the quotient by the unit horizontal
/// translation `x -> x + 1` and the glide `(x, y) -> (-x, y + 1)`.
pub fn klein_44() -> Result<Maniplex, GeneratorError> {
    // In doubled coordinates: t(p) = p + (2, 0), g(p) = (-p.x, p.y + 2).
    let canon = |f: &SquareFlag| {
        let k = (f.s[1] - 1).div_euclid(2);
        let glide = |p: P2| {
            let x = if k.rem_euclid(2) == 0 { p[0] } else { -p[0] };
            [x, p[1] - 2 * k]
        };
        let g = SquareFlag { v: glide(f.v), e: glide(f.e), s: glide(f.s) };
        let m = (g.s[0] - 1).div_euclid(2);
        translate(&g, [-2 * m, 0])
    };
    let klein = enumerate_flags(3, canon(&START), |f, c| canon(&step(f, c)))?;
    let torus = torus_44(1, 0)?;
    assert_eq!(klein.flag_count(), 8);
    assert!(are_isomorphic(klein.graph(), torus.graph())?.is_none());
    assert!(InducedPoset::new(&klein)
        .poset()
        .isomorphism(InducedPoset::new(&torus).poset())
        .is_some());
    Ok(klein)
}
