//! Smith normal form over the integers with explicit unimodular transforms.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntMatrix};

/// `u * a * v == d` with `u`, `v` unimodular and `d` diagonal,
/// `d[i][i] | d[i+1][i+1]`, all diagonal entries nonnegative.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn row_axpy(m: &mut IntMatrix, target: usize, source: usize, q: &Int) {
    // row[target] -= q * row[source]
    for j in 0..m.cols() {
        if !m[(source, j)].is_zero() {
            let v = &m[(target, j)] - q * &m[(source, j)];
            m[(target, j)] = v;
        }
    }
}

fn col_axpy(m: &mut IntMatrix, target: usize, source: usize, q: &Int) {
    for i in 0..m.rows() {
        if !m[(i, source)].is_zero() {
            let v = &m[(i, target)] - q * &m[(i, source)];
            m[(i, target)] = v;
        }
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut rank = 0;

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            'scan: for i in t..rows {
                for j in t..cols {
                    let x = &d[(i, j)];
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x.magnitude() < d[(bi, bj)].magnitude()) {
                        best = Some((i, j));
                        if x.magnitude().is_one() {
                            break 'scan;
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v, rank);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !d[(i, t)].is_zero() {
                    let q = d[(i, t)].div_floor(&pivot);
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    clean &= d[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !d[(t, j)].is_zero() {
                    let q = d[(t, j)].div_floor(&pivot);
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    clean &= d[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // divisibility: pull an offending row into the pivot row
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            if let Some(i) = offending {
                let minus_one = Int::from(-1);
                row_axpy(&mut d, t, i, &minus_one);
                row_axpy(&mut u, t, i, &minus_one);
                continue;
            }
            break;
        }
        if d[(t, t)].is_negative() {
            for j in 0..cols {
                let x = -d[(t, j)].clone();
                d[(t, j)] = x;
            }
            for j in 0..rows {
                let x = -u[(t, j)].clone();
                u[(t, j)] = x;
            }
        }
        rank += 1;
    }
    finish(u, d, v, rank)
}

fn finish(u: IntMatrix, d: IntMatrix, v: IntMatrix, rank: usize) -> Smith {
    Smith { u, d, v, rank }
}

/// Z-basis of the integer kernel `{x in Z^n : a x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<Int>> {
    let s = smith_normal_form(a);
    (s.rank..a.cols()).map(|j| s.v.col(j)).collect()
}

/// Z-basis of the lattice spanned by the columns of `a`.
pub fn column_lattice_basis(a: &IntMatrix) -> Vec<Vec<Int>> {
    let s = smith_normal_form(a);
    let av = &(a * &s.v);
    (0..s.rank).map(|j| av.col(j)).collect()
}

/// Integer solution of `a x = b`, if any.
pub fn integer_solve(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    let s = smith_normal_form(a);
    let y = s.u.mul_vec(b);
    let mut z = vec![Int::zero(); a.cols()];
    for (i, yi) in y.iter().enumerate() {
        if i < s.rank {
            let di = &s.d[(i, i)];
            if !yi.is_multiple_of(di) {
                return None;
            }
            z[i] = yi / di;
        } else if !yi.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::matrix::is_unimodular;

    fn check(a: &IntMatrix) -> Smith {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d, "U A V != D for {a:?}");
        assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn one_by_one() {
        let s = check(&IntMatrix::from_i64(1, 1, &[2]));
        assert_eq!(s.d, IntMatrix::from_i64(1, 1, &[2]));
        assert!(s.u[(0, 0)].is_one() && s.v[(0, 0)].is_one());
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = check(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]));
        assert_eq!(s.diagonal(), vec![Int::from(1), Int::from(6)]);
    }

    #[test]
    fn rectangular_and_zero() {
        check(&IntMatrix::from_i64(2, 3, &[4, 6, 8, 6, 9, 12]));
        let s = check(&IntMatrix::zeros(3, 2));
        assert_eq!(s.rank, 0);
        check(&IntMatrix::zeros(0, 3));
    }

    #[test]
    fn kernel_and_solve() {
        let a = IntMatrix::from_i64(1, 2, &[2, 4]);
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0])[0].is_zero());
        assert!(integer_solve(&a, &[Int::from(3)]).is_none());
        let x = integer_solve(&a, &[Int::from(6)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![Int::from(6)]);
    }
}
