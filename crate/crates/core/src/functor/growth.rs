//! μ growth along A/mⁿ, finite products, and the flatness witness for
//! equalizers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{carrier, expr::direct_sum_sq, expr::transport_is_bijective, eval, BaseChange, FunctorPresentation};
use crate::arith::pow;
use crate::error::{Error, Result};
use crate::linalg::{kernel, Mat};
use crate::module::{FPModule, ModuleMap};
use crate::ring::{BaseRing, RingElement, TestAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthProfile {
    pub d: u32,
    /// μ_n for n = 1, 2, …
    pub mu: Vec<BigInt>,
    /// Least c with μ_n ≤ c·n^d on the sampled range.
    pub c: BigRational,
    /// μ_n/n^d strictly increasing on the tail.
    pub flagged: bool,
}

impl GrowthProfile {
    pub fn from_sequence(mu: Vec<BigInt>, d: u32) -> GrowthProfile {
        let ratios: Vec<BigRational> = mu
            .iter()
            .enumerate()
            .map(|(i, m)| BigRational::new(m.clone(), pow(&BigInt::from(i as u64 + 1), d as u64)))
            .collect();
        let c = ratios.iter().cloned().fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        let start = ratios.len() / 2;
        let tail = &ratios[start..];
        let flagged = tail.len() >= 3 && tail.windows(2).all(|w| w[1] > w[0]);
        GrowthProfile { d, mu, c, flagged }
    }

    pub fn fits(&self, c: &BigRational) -> bool {
        self.mu.iter().enumerate().all(|(i, m)| {
            BigRational::from_integer(m.clone()) <= c * BigRational::from_integer(pow(&BigInt::from(i as u64 + 1), self.d as u64))
        })
    }
}

/// The local test algebra k[vars]/(vars)ⁿ for a polynomial base over F_p.
pub fn truncation(base: &BaseRing, n: u32) -> Result<TestAlgebra> {
    let vars = base.vars();
    let k = base.coefficient_ring();
    if !matches!(k, BaseRing::PrimeField(_)) || vars.is_empty() {
        return Err(Error::Invalid(format!("{base} is not a polynomial ring over a prime field")));
    }
    let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    TestAlgebra::monomial(k, &names, &[], Some(n))
}

/// μ[F(A/mⁿ)] for n = 1..=n_max, A = F_p[x₁..x_d] localized at the origin.
pub fn mu_growth_profile(f: &FunctorPresentation, n_max: u32) -> Result<GrowthProfile> {
    let d = f.base().nvars() as u32;
    let mut mu = Vec::new();
    for n in 1..=n_max {
        let b = truncation(f.base(), n)?;
        let e = eval(f, &b)?;
        mu.push(BigInt::from(e.mu.ok_or_else(|| Error::Internal("truncation is not local".into()))?));
    }
    Ok(GrowthProfile::from_sequence(mu, d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductReport {
    pub bijective: bool,
    pub product: Vec<BigInt>,
    pub left: Vec<BigInt>,
    pub right: Vec<BigInt>,
}

/// Checks that F(B₁×B₂) → F(B₁)×F(B₂) is bijective.
pub fn check_finite_products(f: &FunctorPresentation, b1: &TestAlgebra, b2: &TestAlgebra) -> Result<ProductReport> {
    let b = TestAlgebra::product(b1, b2)?;
    let bc = BaseChange::new(f.base(), &b)?;
    let bc1 = BaseChange::new(f.base(), b1)?;
    let bc2 = BaseChange::new(f.base(), b2)?;
    let s = carrier(f, &bc)?;
    let s1 = carrier(f, &bc1)?;
    let s2 = carrier(f, &bc2)?;
    let g = f.source().gens;
    let (r, r1, r2) = (b.rank(), b1.rank(), b2.rank());
    let proj = Mat::from_fn(g * (r1 + r2), g * r, |row, col| {
        let (i, k) = (col / r, col % r);
        let target = if k < r1 { i * r1 + k } else { g * r1 + i * r2 + (k - r1) };
        if row == target {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    let pair = direct_sum_sq(&[s1.clone(), s2.clone()]);
    Ok(ProductReport {
        bijective: transport_is_bijective(&proj, &s, &pair),
        product: s.structure().invariants(),
        left: s1.structure().invariants(),
        right: s2.structure().invariants(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flatness {
    FlatOnIdeal,
    Witness(FlatnessWitness),
}

/// B = A[x₁..xₙ]/(xᵢxⱼ), maps f, g: B → A[y]/(y²) with f(xᵢ) = aᵢy and
/// g(xᵢ) = 0, and p = Σ mᵢ ⊗ xᵢ ∈ M ⊗ B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessWitness {
    pub ideal: Vec<RingElement>,
    /// Nonzero element of ker(M ⊗ I → M) in the generators eᵢ ⊗ ιⱼ.
    pub kernel_element: Vec<RingElement>,
    /// mⱼ as generator coordinates of M.
    pub m: Vec<Vec<RingElement>>,
    /// (f ⊗ M)(p) = (g ⊗ M)(p).
    pub maps_agree: bool,
    /// p ∉ image(Eq(f, g) ⊗ M → M ⊗ B).
    pub outside_image: bool,
}

impl FlatnessWitness {
    pub fn valid(&self) -> bool {
        self.maps_agree && self.outside_image
    }
}

pub fn flatness_equalizer_witness(m: &FPModule, ideal: &[RingElement]) -> Result<Flatness> {
    let b = m.base.clone();
    let l = m.lift()?;
    let n = ideal.len();
    let g = m.gens;
    // syzygies of (a₁..aₙ) over A
    let mut row = Mat::from_fn(1, n, |_, j| ideal[j].clone());
    if let Some(md) = l.modulus() {
        row = row.hcat(&Mat::from_rows(vec![vec![RingElement::Int(md)]], 1));
    }
    let ker = kernel(&l, &row);
    let syz = l.down_mat(&ker.select_rows(&(0..n).collect::<Vec<_>>()));
    let imod = FPModule::new(&b, n, syz.clone())?;
    let mi = m.tensor(&imod);
    let mut phi = crate::module::zero_mat(&b, g, g * n);
    for i in 0..g {
        for j in 0..n {
            phi.set(i, i * n + j, ideal[j].clone());
        }
    }
    let mult = ModuleMap::new(&mi, m, phi)?;
    let (_, incl) = mult.kernel()?;
    let y = (0..incl.matrix.cols)
        .map(|c| incl.matrix.col(c))
        .find(|col| matches!(mi.is_zero_element(col), Ok(false)));
    let Some(y) = y else { return Ok(Flatness::FlatOnIdeal) };
    let mvecs: Vec<Vec<RingElement>> = (0..n).map(|j| (0..g).map(|i| y[i * n + j].clone()).collect()).collect();
    // (f ⊗ M)(p) = Σ aⱼ mⱼ ⊗ y and (g ⊗ M)(p) = 0
    let fp: Vec<RingElement> = (0..g)
        .map(|i| (0..n).fold(b.zero(), |acc, j| b.add(&acc, &b.mul(&ideal[j], &mvecs[j][i]))))
        .collect();
    let maps_agree = m.is_zero_element(&fp)?;
    // degree-one part of M ⊗ B is Mⁿ (copy j, coordinate i); Eq(f,g) in degree
    // one is the syzygy module, whose image is spanned by sⱼ·eᵢ
    let mn = (0..n).fold(FPModule::zero(&b), |acc, _| acc.direct_sum(m));
    let mut img_cols: Vec<Vec<RingElement>> = Vec::new();
    for s in 0..syz.cols {
        for i in 0..g {
            let mut v = vec![b.zero(); g * n];
            for j in 0..n {
                v[j * g + i] = syz.get(j, s).clone();
            }
            img_cols.push(v);
        }
    }
    let rel = if img_cols.is_empty() {
        mn.rel.clone()
    } else {
        mn.rel.hcat(&Mat::from_fn(g * n, img_cols.len(), |r, c| img_cols[c][r].clone()))
    };
    let quotient = FPModule::new(&b, g * n, rel)?;
    let p: Vec<RingElement> = (0..n).flat_map(|j| mvecs[j].clone()).collect();
    let outside_image = !quotient.is_zero_element(&p)?;
    Ok(Flatness::Witness(FlatnessWitness {
        ideal: ideal.to_vec(),
        kernel_element: y,
        m: mvecs,
        maps_agree,
        outside_image,
    }))
}
