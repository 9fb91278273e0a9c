//! The annihilator of sx − ty in C = F_p[s,t,x,y]/(s^k, t^k), compared with
//! the span of (st)^{k−j} Σ_{i<j} (sx)^i (ty)^{j−1−i} (j = 1..k) times
//! monomials, one multidegree at a time.

use serde::{Deserialize, Serialize};

use super::blocks::{lemma_generator, Block};
use super::cohen::check_prime;
use super::fp;
use crate::error::{Error, Result};

pub const MAX_BOUND: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnWitness {
    /// Weights (u, v) = (deg_s − deg_x, deg_t − deg_y) and x,y-degree.
    pub u: i64,
    pub v: i64,
    pub degree: i64,
    pub annihilator_dim: usize,
    pub generated_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnReport {
    pub k: u32,
    pub p: u64,
    pub degree_bound: u32,
    pub generators: Vec<String>,
    pub blocks: usize,
    /// Every multiple of a claimed generator kills sx − ty.
    pub contained: bool,
    /// The multiples span the whole annihilator in every block.
    pub equal: bool,
    pub witness: Option<AnnWitness>,
}

impl AnnReport {
    pub fn passed(&self) -> bool {
        self.contained && self.equal
    }
}

pub fn generator_names(k: u32) -> Vec<String> {
    (1..=k)
        .map(|j| format!("(st)^{} * sum_{{i=0}}^{} (sx)^i (ty)^({}-i)", k - j, j - 1, j - 1))
        .collect()
}

pub fn ann_lemma_check(k: u32, p: u64, degree_bound: u32) -> Result<AnnReport> {
    check_with(k, p, degree_bound, &(1..=k as i64).collect::<Vec<_>>())
}

fn check_with(k: u32, p: u64, degree_bound: u32, js: &[i64]) -> Result<AnnReport> {
    check_prime(p)?;
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    if degree_bound < 2 * k {
        return Err(Error::Invalid(format!("degree bound {degree_bound} is below 2k = {}", 2 * k)));
    }
    if degree_bound > MAX_BOUND {
        return Err(Error::Invalid(format!("degree bound {degree_bound} exceeds {MAX_BOUND}")));
    }
    let ki = k as i64;
    let mut report = AnnReport {
        k,
        p,
        degree_bound,
        generators: generator_names(k),
        blocks: 0,
        contained: true,
        equal: true,
        witness: None,
    };
    for d in 0..=degree_bound as i64 {
        for u in -d..ki {
            for v in -d..ki {
                let blk = Block::new(ki, u, v, d, false);
                if blk.dim() == 0 {
                    continue;
                }
                report.blocks += 1;
                let ann = blk.annihilator(p, false);
                let mut span: Vec<Vec<u64>> = Vec::new();
                for &j in js {
                    let extra = d - (j - 1);
                    if extra < 0 {
                        continue;
                    }
                    for gamma in 0..=extra {
                        let delta = extra - gamma;
                        let alpha = u - (ki - j) + gamma;
                        let beta = v - (ki - j) + delta;
                        if alpha < 0 || beta < 0 {
                            continue;
                        }
                        let (b2, w) = lemma_generator(ki, j, alpha, beta, -gamma, -delta, false);
                        debug_assert_eq!((b2.u, b2.v, b2.e), (u, v, d));
                        if !blk.is_annihilated(&w, p) {
                            report.contained = false;
                        }
                        span.push(w);
                    }
                }
                let gd = fp::span_dim(&span, p);
                let mut joint = span;
                joint.extend(ann.iter().cloned());
                let jd = fp::span_dim(&joint, p);
                if gd != ann.len() || jd != ann.len() {
                    report.equal = false;
                    if report.witness.is_none() {
                        report.witness =
                            Some(AnnWitness { u, v, degree: d, annihilator_dim: ann.len(), generated_dim: gd });
                    }
                }
            }
        }
    }
    Ok(report)
}
