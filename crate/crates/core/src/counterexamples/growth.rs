//! μ growth profiles of the two counterexamples and of library functors.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{cohen::cohen_h1, tensor::tensor_mc_mu};
use crate::arith::pow;
use crate::error::{Error, Result};
use crate::functor::growth::{mu_growth_profile, GrowthProfile};
use crate::functor::FunctorPresentation;

#[derive(Clone, Debug)]
pub enum GrowthSource {
    /// μ[H(B)] at B = F_p[s,t]/(s^k,t^k), k = 1..
    Cohen { p: u64 },
    /// μ[Ann(s) ⊗ Ann(s)] at F_p[s,t,u]/(s,t,u)^n.
    Tensor { p: u64 },
    Library { name: String, functor: FunctorPresentation },
}

impl GrowthSource {
    pub fn name(&self) -> String {
        match self {
            GrowthSource::Cohen { p } => format!("cohen (p = {p})"),
            GrowthSource::Tensor { p } => format!("tensor (p = {p})"),
            GrowthSource::Library { name, .. } => name.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub exponent: u32,
    /// Least c with μ_n ≤ c·n^exponent on the sampled range.
    pub c: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub source: String,
    pub d: u32,
    pub mu: Vec<BigInt>,
    pub fits: Vec<GrowthFit>,
    /// μ_n/n^d strictly increasing on the second half of the range.
    pub flagged: bool,
}

pub fn fit(mu: &[BigInt], e: u32) -> BigRational {
    mu.iter()
        .enumerate()
        .map(|(i, m)| BigRational::new(m.clone(), pow(&BigInt::from(i as u64 + 1), e as u64)))
        .max()
        .unwrap_or_else(|| BigRational::from_integer(BigInt::from(0)))
}

pub fn sequence(source: &GrowthSource, n_max: u32) -> Result<Vec<BigInt>> {
    match source {
        GrowthSource::Cohen { p } => (1..=n_max).map(|k| Ok(BigInt::from(cohen_h1(k, *p)?.mu_direct))).collect(),
        GrowthSource::Tensor { p } => (1..=n_max).map(|n| Ok(BigInt::from(tensor_mc_mu(n, *p)?.mu))).collect(),
        GrowthSource::Library { functor, .. } => Ok(mu_growth_profile(functor, n_max)?.mu),
    }
}

pub fn growth_report(source: &GrowthSource, n_max: u32, d: u32) -> Result<GrowthReport> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be positive".into()));
    }
    let mu = sequence(source, n_max)?;
    let profile = GrowthProfile::from_sequence(mu.clone(), d);
    let fits = (d.saturating_sub(1)..=d + 2).map(|e| GrowthFit { exponent: e, c: fit(&mu, e) }).collect();
    Ok(GrowthReport { source: source.name(), d, mu, fits, flagged: profile.flagged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_is_least_constant() {
        let mu: Vec<BigInt> = [1, 4, 9].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(fit(&mu, 2), BigRational::from_integer(1.into()));
        assert_eq!(fit(&mu, 1), BigRational::from_integer(3.into()));
    }
}
