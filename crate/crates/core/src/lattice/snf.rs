//! Dense Smith normal form over the integers.
//!
//! Pivoting is deterministic: the pivot is the entry of smallest absolute
//! value in the active block, ties broken by lowest row and then lowest
//! column. Transforms are tracked only when requested.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal with
/// `d[0] | d[1] | ...`. `u_inv` is the inverse of `u`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries of `d`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        diagonal(&self.d)
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut w = Work::new(m, true);
    w.run();
    let d = IntMatrix::from_big_rows(w.rows, w.cols, w.a).expect("shape preserved");
    let t = w.track.expect("tracking enabled");
    SmithDecomposition {
        u: t.u,
        d,
        v: t.v,
        u_inv: t.u_inv,
    }
}

/// Nonzero invariant factors of `m`, without computing transforms.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut w = Work::new(m, false);
    w.run();
    (0..w.rows.min(w.cols))
        .map(|i| w.a[i][i].clone())
        .take_while(|x| !x.is_zero())
        .collect()
}

fn diagonal(d: &IntMatrix) -> Vec<BigInt> {
    (0..d.rows().min(d.cols()))
        .map(|i| d[(i, i)].clone())
        .take_while(|x| !x.is_zero())
        .collect()
}

struct Transforms {
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

struct Work {
    rows: usize,
    cols: usize,
    a: Vec<Vec<BigInt>>,
    track: Option<Transforms>,
}

impl Work {
    fn new(m: &IntMatrix, track: bool) -> Self {
        Work {
            rows: m.rows(),
            cols: m.cols(),
            a: m.to_rows(),
            track: track.then(|| Transforms {
                u: IntMatrix::identity(m.rows()),
                u_inv: IntMatrix::identity(m.rows()),
                v: IntMatrix::identity(m.cols()),
            }),
        }
    }

    fn run(&mut self) {
        for t in 0..self.rows.min(self.cols) {
            if !self.reduce_block(t) {
                break;
            }
        }
    }

    fn pick_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.abs() < self.a[bi][bj].abs(),
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Places a divisor of the whole active block at `(t, t)` and clears its
    /// row and column. Returns false when the block is zero.
    fn reduce_block(&mut self, t: usize) -> bool {
        loop {
            let Some((pi, pj)) = self.pick_pivot(t) else {
                return false;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..self.rows {
                if self.a[i][t].is_zero() {
                    continue;
                }
                let q = self.a[i][t].div_floor(&self.a[t][t]);
                self.row_axpy(i, t, &q);
                if !self.a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..self.cols {
                if self.a[t][j].is_zero() {
                    continue;
                }
                let q = self.a[t][j].div_floor(&self.a[t][t]);
                self.col_axpy(j, t, &q);
                if !self.a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            let p = self.a[t][t].clone();
            let offending = (t + 1..self.rows)
                .find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
            match offending {
                Some(i) => self.row_add(t, i),
                None => {
                    if p.is_negative() {
                        self.negate_row(t);
                    }
                    return true;
                }
            }
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(tr) = &mut self.track {
            for c in 0..tr.u.cols() {
                let tmp = tr.u[(i, c)].clone();
                tr.u[(i, c)] = tr.u[(j, c)].clone();
                tr.u[(j, c)] = tmp;
            }
            for r in 0..tr.u_inv.rows() {
                let tmp = tr.u_inv[(r, i)].clone();
                tr.u_inv[(r, i)] = tr.u_inv[(r, j)].clone();
                tr.u_inv[(r, j)] = tmp;
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(tr) = &mut self.track {
            for r in 0..tr.v.rows() {
                let tmp = tr.v[(r, i)].clone();
                tr.v[(r, i)] = tr.v[(r, j)].clone();
                tr.v[(r, j)] = tmp;
            }
        }
    }

    /// row_i -= q * row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &BigInt) {
        let (src, dst) = if i < t {
            let (lo, hi) = self.a.split_at_mut(t);
            (&hi[0], &mut lo[i])
        } else {
            let (lo, hi) = self.a.split_at_mut(i);
            (&lo[t], &mut hi[0])
        };
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *d -= q * s;
            }
        }
        if let Some(tr) = &mut self.track {
            for c in 0..tr.u.cols() {
                let s = tr.u[(t, c)].clone();
                if !s.is_zero() {
                    tr.u[(i, c)] -= q * s;
                }
            }
            // inverse: col_t += q * col_i
            for r in 0..tr.u_inv.rows() {
                let s = tr.u_inv[(r, i)].clone();
                if !s.is_zero() {
                    tr.u_inv[(r, t)] += q * s;
                }
            }
        }
    }

    /// col_j -= q * col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &BigInt) {
        for row in &mut self.a {
            if !row[t].is_zero() {
                let s = row[t].clone();
                row[j] -= q * s;
            }
        }
        if let Some(tr) = &mut self.track {
            for r in 0..tr.v.rows() {
                let s = tr.v[(r, t)].clone();
                if !s.is_zero() {
                    tr.v[(r, j)] -= q * s;
                }
            }
        }
    }

    /// row_t += row_i
    fn row_add(&mut self, t: usize, i: usize) {
        let src = self.a[i].clone();
        for (d, s) in self.a[t].iter_mut().zip(src) {
            *d += s;
        }
        if let Some(tr) = &mut self.track {
            for c in 0..tr.u.cols() {
                let s = tr.u[(i, c)].clone();
                tr.u[(t, c)] += s;
            }
            // inverse: col_i -= col_t
            for r in 0..tr.u_inv.rows() {
                let s = tr.u_inv[(r, t)].clone();
                tr.u_inv[(r, i)] -= s;
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in &mut self.a[t] {
            *x = -x.clone();
        }
        if let Some(tr) = &mut self.track {
            for c in 0..tr.u.cols() {
                tr.u[(t, c)] = -tr.u[(t, c)].clone();
            }
            for r in 0..tr.u_inv.rows() {
                tr.u_inv[(r, t)] = -tr.u_inv[(r, t)].clone();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check(m: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m.rows()));
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| is 8
        let s = check(&IntMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(3, 2));
        assert!(s.d.is_zero());
        assert!(invariant_factors(&IntMatrix::zeros(2, 5)).is_empty());
    }

    #[test]
    fn needs_divisibility_fix() {
        // diag(2,3) must become diag(1,6)
        let s = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn empty_shapes() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(3, 0));
    }
}
