//! Integer lattices in Hermite normal form, used to pick canonical
//! representatives of points modulo a translation group.

use super::GeneratorError;

/// A full-rank sublattice of `Z^d`, stored as an upper triangular basis with
/// positive diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    rows: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(basis: &[Vec<i64>]) -> Result<Self, GeneratorError> {
        let d = basis.len();
        if d == 0 || basis.iter().any(|r| r.len() != d) {
            return Err(GeneratorError::DegenerateBasis);
        }
        let mut rows: Vec<Vec<i64>> = basis.to_vec();
        for k in 0..d {
            // Euclid on column k over rows k.. until a single non-zero entry.
            loop {
                let pivot = (k..d)
                    .filter(|&r| rows[r][k] != 0)
                    .min_by_key(|&r| rows[r][k].abs());
                let Some(pivot) = pivot else {
                    return Err(GeneratorError::DegenerateBasis);
                };
                rows.swap(k, pivot);
                let mut done = true;
                for r in k + 1..d {
                    if rows[r][k] != 0 {
                        let q = rows[r][k].div_euclid(rows[k][k]);
                        for c in 0..d {
                            rows[r][c] -= q * rows[k][c];
                        }
                        if rows[r][k] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if rows[k][k] < 0 {
                rows[k].iter_mut().for_each(|x| *x = -*x);
            }
        }
        Ok(Lattice { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Index in `Z^d`, i.e. `|det|` of any basis.
    pub fn index(&self) -> i64 {
        (0..self.dim()).map(|k| self.rows[k][k]).product()
    }

    /// Every coordinate scaled by `factor`.
    pub fn scaled(&self, factor: i64) -> Lattice {
        Lattice {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x * factor).collect())
                .collect(),
        }
    }

    /// Canonical representative of `p` modulo the lattice: coordinate `k`
    /// ends up in `0..h_kk`.
    pub fn reduce(&self, p: &[i64]) -> Vec<i64> {
        let mut p = p.to_vec();
        for k in 0..self.dim() {
            let q = p[k].div_euclid(self.rows[k][k]);
            if q != 0 {
                for c in 0..self.dim() {
                    p[c] -= q * self.rows[k][c];
                }
            }
        }
        p
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.reduce(p).iter().all(|&x| x == 0)
    }
}
