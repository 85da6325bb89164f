use super::{enumerate_flags, GeneratorError};
use crate::maniplex::Maniplex;

/// Flag graph of the d-cube. A flag is a signed permutation: the vertex is
/// the sign vector and the i-face spans the axes `perm[..i]`.
pub fn hypercube(d: usize) -> Result<Maniplex, GeneratorError> {
    if !(1..=5).contains(&d) {
        return Err(GeneratorError::BadParam(format!("hypercube needs 1 <= d <= 5, got {d}")));
    }
    let start: (Vec<usize>, u32) = ((0..d).collect(), 0);
    enumerate_flags(d, start, |(perm, signs), c| {
        let mut perm = perm.clone();
        let mut signs = *signs;
        if c == 0 {
            signs ^= 1 << perm[0];
        } else {
            perm.swap(c - 1, c);
        }
        (perm, signs)
    })
}
