//! Smith normal form with transforms over a Euclidean domain.

use super::euclid::Euclid;
use super::mat::Mat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithData<E> {
    pub u: Mat<E>,
    pub d: Mat<E>,
    pub v: Mat<E>,
    /// Inverse of `v`; rows of `vinv` form the basis dual to the columns of `v`.
    pub vinv: Mat<E>,
    /// Inverse of `u`.
    pub uinv: Mat<E>,
    pub rank: usize,
}

impl<E: Clone> SmithData<E> {
    pub fn diagonal(&self) -> Vec<E> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Work<'a, R: Euclid> {
    r: &'a R,
    a: Mat<R::E>,
    u: Mat<R::E>,
    uinv: Mat<R::E>,
    v: Mat<R::E>,
    vinv: Mat<R::E>,
}

impl<R: Euclid> Work<'_, R> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.uinv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.vinv.swap_rows(i, j);
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &R::E) {
        let r = self.r;
        for k in 0..self.a.cols {
            let x = r.add(self.a.get(i, k), &r.mul(c, self.a.get(j, k)));
            self.a.set(i, k, x);
        }
        for k in 0..self.u.cols {
            let x = r.add(self.u.get(i, k), &r.mul(c, self.u.get(j, k)));
            self.u.set(i, k, x);
        }
        // inverse: col_j -= c * col_i
        for k in 0..self.uinv.rows {
            let x = r.sub(self.uinv.get(k, j), &r.mul(c, self.uinv.get(k, i)));
            self.uinv.set(k, j, x);
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &R::E) {
        let r = self.r;
        for k in 0..self.a.rows {
            let x = r.add(self.a.get(k, i), &r.mul(c, self.a.get(k, j)));
            self.a.set(k, i, x);
        }
        for k in 0..self.v.rows {
            let x = r.add(self.v.get(k, i), &r.mul(c, self.v.get(k, j)));
            self.v.set(k, i, x);
        }
        for k in 0..self.vinv.cols {
            let x = r.sub(self.vinv.get(j, k), &r.mul(c, self.vinv.get(i, k)));
            self.vinv.set(j, k, x);
        }
    }

    fn scale_row(&mut self, i: usize, u: &R::E, uinv: &R::E) {
        let r = self.r;
        for k in 0..self.a.cols {
            let x = r.mul(u, self.a.get(i, k));
            self.a.set(i, k, x);
        }
        for k in 0..self.u.cols {
            let x = r.mul(u, self.u.get(i, k));
            self.u.set(i, k, x);
        }
        for k in 0..self.uinv.rows {
            let x = r.mul(uinv, self.uinv.get(k, i));
            self.uinv.set(k, i, x);
        }
    }
}

/// Returns U, D, V with U*A*V = D, D diagonal with a divisibility chain of
/// canonical associates. Pivots: smallest norm, then first position in
/// row-major order.
pub fn smith<R: Euclid>(r: &R, a: &Mat<R::E>) -> SmithData<R::E> {
    let (m, n) = (a.rows, a.cols);
    let mut w = Work {
        r,
        a: a.clone(),
        u: r.identity(m),
        uinv: r.identity(m),
        v: r.identity(n),
        vinv: r.identity(n),
    };
    let mut rank = 0;
    for t in 0..m.min(n) {
        loop {
            // pivot search
            let mut best: Option<(num_bigint::BigInt, usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = w.a.get(i, j);
                    if r.is_zero(x) {
                        continue;
                    }
                    let nm = r.norm(x);
                    if best.as_ref().map_or(true, |b| nm < b.0) {
                        best = Some((nm, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                return finish(w, rank);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..m {
                if r.is_zero(w.a.get(i, t)) {
                    continue;
                }
                let (q, rem) = r.divrem(w.a.get(i, t), w.a.get(t, t));
                w.add_row(i, t, &r.neg(&q));
                if !r.is_zero(&rem) {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if r.is_zero(w.a.get(t, j)) {
                    continue;
                }
                let (q, rem) = r.divrem(w.a.get(t, j), w.a.get(t, t));
                w.add_col(j, t, &r.neg(&q));
                if !r.is_zero(&rem) {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let piv = w.a.get(t, t).clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !r.divides(&piv, w.a.get(i, j))));
            if let Some(i) = bad {
                w.add_row(t, i, &r.one());
                continue;
            }
            break;
        }
        let (u, uinv) = r.normal_unit(w.a.get(t, t));
        w.scale_row(t, &u, &uinv);
        rank += 1;
    }
    finish(w, rank)
}

fn finish<R: Euclid>(w: Work<'_, R>, rank: usize) -> SmithData<R::E> {
    SmithData { u: w.u, d: w.a, v: w.v, vinv: w.vinv, uinv: w.uinv, rank }
}

/// Basis of the right kernel {x : A x = 0} as columns.
pub fn kernel<R: Euclid>(r: &R, a: &Mat<R::E>) -> Mat<R::E> {
    let s = smith(r, a);
    let cols: Vec<usize> = (s.rank..a.cols).collect();
    s.v.select_cols(&cols)
}

/// Solves A X = B; `None` when some column has no solution.
pub fn solve<R: Euclid>(r: &R, a: &Mat<R::E>, b: &Mat<R::E>) -> Option<Mat<R::E>> {
    assert_eq!(a.rows, b.rows);
    let s = smith(r, a);
    let ub = r.mat_mul(&s.u, b);
    let mut y = r.zeros(a.cols, b.cols);
    for j in 0..b.cols {
        for i in 0..a.rows {
            let c = ub.get(i, j);
            if i < s.rank {
                let (q, rem) = r.divrem(c, s.d.get(i, i));
                if !r.is_zero(&rem) {
                    return None;
                }
                y.set(i, j, q);
            } else if !r.is_zero(c) {
                return None;
            }
        }
    }
    Some(r.mat_mul(&s.v, &y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::euclid::{FpX, ZZ};
    use num_bigint::BigInt;

    fn zm(rows: &[&[i64]]) -> Mat<BigInt> {
        let c = rows[0].len();
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), c)
    }

    fn check<R: Euclid>(r: &R, a: &Mat<R::E>) -> SmithData<R::E> {
        let s = smith(r, a);
        assert_eq!(r.mat_mul(&r.mat_mul(&s.u, a), &s.v), s.d);
        assert_eq!(r.mat_mul(&s.u, &s.uinv), r.identity(a.rows));
        assert_eq!(r.mat_mul(&s.v, &s.vinv), r.identity(a.cols));
        let d = s.diagonal();
        for i in 0..d.len() {
            for j in 0..d.len() {
                if i != j && i < a.rows && j < a.cols {
                    assert!(r.is_zero(s.d.get(i, j)) || i == j);
                }
            }
        }
        for w in d.windows(2) {
            assert!(r.divides(&w[0], &w[1]));
        }
        s
    }

    #[test]
    fn small_integer_example() {
        let s = check(&ZZ, &zm(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        let s = check(&ZZ, &zm(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(s.d, ZZ.identity(3));
    }

    #[test]
    fn polynomial_example() {
        let r = FpX::new(BigInt::from(2));
        let a = Mat::from_rows(vec![vec![r.from_coeffs(&[0, 1]), r.from_coeffs(&[0, 0, 1])]], 2);
        let s = check(&r, &a);
        assert_eq!(s.diagonal(), vec![r.from_coeffs(&[0, 1])]);
        assert!(r.is_zero(s.d.get(0, 1)));
    }

    #[test]
    fn kernels_and_solves() {
        let a = zm(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&ZZ, &a);
        assert_eq!(k.cols, 2);
        assert!(ZZ.is_zero_mat(&ZZ.mat_mul(&a, &k)));
        let b = zm(&[&[3], &[6]]);
        let x = solve(&ZZ, &a, &b).unwrap();
        assert_eq!(ZZ.mat_mul(&a, &x), b);
        assert!(solve(&ZZ, &zm(&[&[2]]), &zm(&[&[3]])).is_none());
    }
}
