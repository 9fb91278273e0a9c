//! μ[Ann_B(s) ⊗_B Ann_B(s)] at B = F_p[s,t,u]/(s,t,u)^n.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::cohen::check_prime;
use super::fp;
use crate::error::{Error, Result};
use crate::functor::growth::truncation;
use crate::functor::{ann_functor, eval_tensor};
use crate::ring::{BaseRing, TestAlgebra};

pub const MAX_N: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorReport {
    pub n: u32,
    pub p: u64,
    /// [n(n+1)/2]².
    pub expected: BigInt,
    /// From the evaluated tensor of the two functors.
    pub mu: usize,
    /// μ(Ann_B(s))², from the same evaluation.
    pub mu_product: usize,
    /// From dense F_p linear algebra on Ann_B(s) ⊗_{F_p} Ann_B(s).
    pub mu_dense: usize,
}

impl TensorReport {
    pub fn consistent(&self) -> bool {
        let e = &self.expected;
        [self.mu, self.mu_product, self.mu_dense].iter().all(|&m| BigInt::from(m) == *e)
    }
}

pub fn expected(n: u32) -> BigInt {
    let t = BigInt::from(n) * BigInt::from(n + 1) / 2;
    &t * &t
}

pub fn base(p: u64) -> BaseRing {
    BaseRing::MultivariatePoly(Box::new(BaseRing::PrimeField(BigInt::from(p))), vec!["s".into(), "t".into(), "u".into()])
}

pub fn tensor_mc_mu(n: u32, p: u64) -> Result<TensorReport> {
    check_prime(p)?;
    if n == 0 || n > MAX_N {
        return Err(Error::Invalid(format!("n = {n} is outside 1..={MAX_N}")));
    }
    let a = base(p);
    let f = ann_functor(&a, &[a.var("s")?])?;
    let b = truncation(&a, n)?;
    let te = eval_tensor(&f, &f, &b)?;
    let mu = te.mu.ok_or_else(|| Error::Internal("truncation is not local".into()))?;
    let mu_product = te.mu_product.unwrap();
    Ok(TensorReport { n, p, expected: expected(n), mu, mu_product, mu_dense: dense_mu(&b, p)? })
}

fn row(alg: &TestAlgebra, name: &str, p: u64) -> Result<Vec<Vec<u64>>> {
    let x = alg.var_image(name)?;
    let m = alg.mul_matrix(&x);
    Ok(m.iter()
        .map(|r| r.iter().map(|c| u64::try_from(c % BigInt::from(p)).unwrap()).collect())
        .collect())
}

fn apply(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter().map(|r| r.iter().zip(v).fold(0, |acc, (a, b)| (acc + a * b) % p)).collect()
}

/// Coordinates of `w` in the basis `basis` (which spans a space containing w).
fn coords(basis: &[Vec<u64>], w: &[u64], p: u64) -> Result<Vec<u64>> {
    // solve Σ cᵢ basisᵢ = w via the left kernel of [basis; w]
    let mut rows = basis.to_vec();
    rows.push(w.to_vec());
    let lk = fp::left_kernel(&rows, w.len(), p);
    let rel = lk
        .into_iter()
        .find(|c| c[basis.len()] != 0)
        .ok_or_else(|| Error::Internal("element outside the annihilator".into()))?;
    let last = rel[basis.len()];
    let scale = p - inv(last, p);
    Ok(rel[..basis.len()].iter().map(|&c| c * scale % p).collect())
}

fn inv(a: u64, p: u64) -> u64 {
    (1..p).find(|&x| a * x % p == 1).unwrap()
}

/// μ of F ⊗_B F with F = Ann_B(s): the F_p-tensor modulo balancing for
/// s, t, u, then modulo the maximal ideal.
fn dense_mu(alg: &TestAlgebra, p: u64) -> Result<usize> {
    let ms: Vec<Vec<Vec<u64>>> = ["s", "t", "u"].iter().map(|v| row(alg, v, p)).collect::<Result<_>>()?;
    let r = alg.rank();
    let f = fp::kernel(&ms[0], r, p);
    let a = f.len();
    // action of each variable on F in the basis f
    let mut act: Vec<Vec<Vec<u64>>> = Vec::new();
    for m in &ms {
        let cols: Vec<Vec<u64>> = f.iter().map(|v| coords(&f, &apply(m, v, p), p)).collect::<Result<_>>()?;
        act.push(cols);
    }
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for x in &act {
        for i in 0..a {
            for j in 0..a {
                // (x fᵢ) ⊗ fⱼ − fᵢ ⊗ (x fⱼ), and (x fᵢ) ⊗ fⱼ
                let mut bal = vec![0u64; a * a];
                let mut rad = vec![0u64; a * a];
                for (s, &c) in x[i].iter().enumerate() {
                    bal[s * a + j] = (bal[s * a + j] + c) % p;
                    rad[s * a + j] = (rad[s * a + j] + c) % p;
                }
                for (t, &c) in x[j].iter().enumerate() {
                    bal[i * a + t] = (bal[i * a + t] + p - c) % p;
                }
                if bal.iter().any(|&c| c != 0) {
                    rows.push(bal);
                }
                if rad.iter().any(|&c| c != 0) {
                    rows.push(rad);
                }
            }
        }
    }
    Ok(a * a - fp::span_dim(&rows, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_values() {
        let v: Vec<BigInt> = (1..=8).map(expected).collect();
        let want: Vec<BigInt> = [1, 9, 36, 100, 225, 441, 784, 1296].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(v, want);
    }

    #[test]
    fn small_n_agree() {
        for (n, p) in [(1, 2), (2, 2), (3, 3)] {
            let r = tensor_mc_mu(n, p).unwrap();
            assert!(r.consistent(), "{r:?}");
        }
    }
}
