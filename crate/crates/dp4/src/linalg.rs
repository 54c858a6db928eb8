//! Small exact linear algebra over the rationals, used internally to extend
//! line permutations to lattice automorphisms and to compute fixed-sublattice
//! ranks.  Matrix entries stay tiny (single-digit numerators), so `Ratio<i64>`
//! is ample.

use num_rational::Ratio;
use num_traits::{One, Zero};

pub(crate) type Rat = Ratio<i64>;

/// Dense square rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RatMat {
    pub n: usize,
    pub a: Vec<Rat>,
}

impl RatMat {
    pub fn zero(n: usize) -> Self {
        RatMat {
            n,
            a: vec![Rat::zero(); n * n],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> Rat {
        self.a[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.a[r * self.n + c] = v;
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<i64>]) -> Self {
        let n = cols.len();
        let mut m = RatMat::zero(n);
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), n);
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, Rat::from_integer(v));
            }
        }
        m
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = RatMat::zero(n);
        for r in 0..n {
            for c in 0..n {
                let mut s = Rat::zero();
                for t in 0..n {
                    s += self.at(r, t) * other.at(t, c);
                }
                out.set(r, c, s);
            }
        }
        out
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMat> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = RatMat::zero(n);
        for i in 0..n {
            inv.set(i, i, Rat::one());
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot != col {
                for c in 0..n {
                    let (x, y) = (a.at(pivot, c), a.at(col, c));
                    a.set(pivot, c, y);
                    a.set(col, c, x);
                    let (x, y) = (inv.at(pivot, c), inv.at(col, c));
                    inv.set(pivot, c, y);
                    inv.set(col, c, x);
                }
            }
            let p = a.at(col, col);
            for c in 0..n {
                a.set(col, c, a.at(col, c) / p);
                inv.set(col, c, inv.at(col, c) / p);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.at(r, col);
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = a.at(r, c) - f * a.at(col, c);
                    a.set(r, c, v);
                    let v = inv.at(r, c) - f * inv.at(col, c);
                    inv.set(r, c, v);
                }
            }
        }
        Some(inv)
    }

    /// Integer entries if all denominators are 1.
    pub fn to_integer(&self) -> Option<Vec<i64>> {
        self.a
            .iter()
            .map(|r| if r.is_integer() { Some(r.to_integer()) } else { None })
            .collect()
    }
}

/// Solves for the matrix M with M * basis[i] = images[i]; the basis vectors
/// must be linearly independent.
pub(crate) fn solve_transform(basis: &[Vec<i64>], images: &[Vec<i64>]) -> Option<RatMat> {
    let b = RatMat::from_columns(basis);
    let t = RatMat::from_columns(images);
    Some(t.mul(&b.inverse()?))
}

/// Rank over Q of an arbitrary (not necessarily square) integer matrix given
/// as rows.
pub(crate) fn rank_of_rows(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| Rat::from_integer(v)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col];
        for r in 0..m.len() {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col] / p;
            for c in col..cols {
                let v = m[r][c] - f * m[rank][c];
                m[r][c] = v;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Greedily selects indices of a maximal linearly independent subset.
pub(crate) fn independent_subset(vectors: &[Vec<i64>], want: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        rows.push(v.clone());
        if rank_of_rows(&rows) == rows.len() {
            chosen.push(i);
            if chosen.len() == want {
                break;
            }
        } else {
            rows.pop();
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = RatMat::from_columns(&[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(id.at(r, c), if r == c { Rat::one() } else { Rat::zero() });
            }
        }
        let sing = RatMat::from_columns(&[vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn rank_and_independent_subset() {
        let rows = vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2], vec![0, 0, 1]];
        assert_eq!(rank_of_rows(&rows), 3);
        assert_eq!(independent_subset(&rows, 3), vec![0, 1, 3]);
    }

    #[test]
    fn solve_transform_reproduces_map() {
        // M = rotation-ish integer map on a basis.
        let basis = vec![vec![1, 0], vec![1, 1]];
        let images = vec![vec![0, 1], vec![-1, 1]];
        let m = solve_transform(&basis, &images).unwrap();
        let ints = m.to_integer().unwrap();
        // Check M * (1,0) = (0,1).
        assert_eq!(ints[0] * 1 + ints[1] * 0, 0);
        assert_eq!(ints[2] * 1 + ints[3] * 0, 1);
    }
}
