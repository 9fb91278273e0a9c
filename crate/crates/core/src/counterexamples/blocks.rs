//! Multigraded pieces of F_p[s,t]/(s^k,t^k)[x^±,y^±] on which sx − ty acts.
//!
//! A monomial s^i t^j x^a y^b has weights u = i − a, v = j − b and degree
//! e = a + b; multiplication by sx − ty fixes (u, v) and raises e by one.

use super::fp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub k: i64,
    pub u: i64,
    pub v: i64,
    pub e: i64,
    /// s-exponents of the basis monomials, increasing.
    pub basis: Vec<i64>,
}

impl Block {
    /// `laurent = false` keeps only a, b ≥ 0.
    pub fn new(k: i64, u: i64, v: i64, e: i64, laurent: bool) -> Block {
        let total = e + u + v;
        let basis = (0..k)
            .filter(|&i| {
                let j = total - i;
                (0..k).contains(&j) && (laurent || (i - u >= 0 && j - v >= 0))
            })
            .collect();
        Block { k, u, v, e, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index(&self, i: i64) -> Option<usize> {
        self.basis.binary_search(&i).ok()
    }

    pub fn j(&self, i: i64) -> i64 {
        self.e + self.u + self.v - i
    }

    /// x-exponent of the monomial with s-exponent i.
    pub fn a(&self, i: i64) -> i64 {
        i - self.u
    }

    pub fn b(&self, i: i64) -> i64 {
        self.j(i) - self.v
    }

    pub fn next(&self, laurent: bool) -> Block {
        Block::new(self.k, self.u, self.v, self.e + 1, laurent)
    }

    /// Matrix rows of sx − ty from this block to `dst` (the same weights,
    /// degree e + 1).
    pub fn operator(&self, dst: &Block, p: u64) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; self.dim()]; dst.dim()];
        for (c, &i) in self.basis.iter().enumerate() {
            if let Some(r) = dst.index(i + 1) {
                m[r][c] = (m[r][c] + 1) % p;
            }
            if self.j(i) + 1 < self.k {
                if let Some(r) = dst.index(i) {
                    m[r][c] = (m[r][c] + p - 1) % p;
                }
            }
        }
        m
    }

    pub fn annihilator(&self, p: u64, laurent: bool) -> Vec<Vec<u64>> {
        let dst = self.next(laurent);
        fp::kernel(&self.operator(&dst, p), self.dim(), p)
    }

    /// Annihilator elements supported on the monomials satisfying `keep`.
    pub fn annihilator_on(&self, p: u64, keep: impl Fn(i64) -> bool) -> Vec<Vec<u64>> {
        let dst = self.next(true);
        let mut rows = self.operator(&dst, p);
        for (c, &i) in self.basis.iter().enumerate() {
            if !keep(i) {
                let mut r = vec![0u64; self.dim()];
                r[c] = 1;
                rows.push(r);
            }
        }
        fp::kernel(&rows, self.dim(), p)
    }

    /// Image of `vectors` from `src` under s^α t^β (the x, y part is fixed
    /// by the weights).
    pub fn shift_from(&self, src: &Block, vectors: &[Vec<u64>], alpha: i64, beta: i64) -> Vec<Vec<u64>> {
        vectors
            .iter()
            .map(|v| {
                let mut w = vec![0u64; self.dim()];
                for (c, &i) in src.basis.iter().enumerate() {
                    if v[c] == 0 || i + alpha >= self.k || src.j(i) + beta >= self.k {
                        continue;
                    }
                    if let Some(r) = self.index(i + alpha) {
                        w[r] = v[c];
                    }
                }
                w
            })
            .collect()
    }

    pub fn is_annihilated(&self, v: &[u64], p: u64) -> bool {
        let dst = self.next(true);
        self.operator(&dst, p)
            .iter()
            .all(|row| row.iter().zip(v).fold(0u64, |acc, (a, b)| (acc + a * b) % p) == 0)
    }
}

/// (st)^{k−j} Σ_{i<j} (sx)^i (ty)^{j−1−i} times s^α t^β / (x^γ y^δ) as a
/// vector in its block; γ, δ may be negative (multiplication).
pub fn lemma_generator(k: i64, j: i64, alpha: i64, beta: i64, gamma: i64, delta: i64, laurent: bool) -> (Block, Vec<u64>) {
    let u = k - j + gamma + alpha;
    let v = k - j + delta + beta;
    let e = j - 1 - gamma - delta;
    let blk = Block::new(k, u, v, e, laurent);
    let mut w = vec![0u64; blk.dim()];
    for i in 0..j {
        let (si, ti) = (k - j + i + alpha, k - 1 - i + beta);
        if si >= k || ti >= k {
            continue;
        }
        if let Some(r) = blk.index(si) {
            w[r] = 1;
        }
    }
    (blk, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_annihilated() {
        for k in 1..6 {
            for j in 1..=k {
                let (b, v) = lemma_generator(k, j, 0, 0, 0, 0, false);
                assert!(v.iter().any(|&x| x != 0));
                assert!(b.is_annihilated(&v, 2), "k={k} j={j}");
                assert!(b.is_annihilated(&v, 3), "k={k} j={j}");
            }
        }
    }

    #[test]
    fn sx_minus_ty_on_small_block() {
        // k = 2, weights (0, 0), degree 0: only the monomial 1.
        let b = Block::new(2, 0, 0, 0, false);
        assert_eq!(b.basis, vec![0]);
        // (sx − ty)·1 ≠ 0
        assert_eq!(b.annihilator(3, false).len(), 0);
    }
}
