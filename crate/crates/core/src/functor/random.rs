//! Seeded random expression trees, the default battery of test algebras and
//! homomorphisms between battery algebras.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::expr::{direct_eval, Arrow};
use super::{carrier, normalize, BaseChange, FunctorExpr, FunctorPresentation, Normalized, SquareSpec};
use crate::error::{Error, Result};
use crate::linalg::lattice::mat_vec;
use crate::linalg::{Lattice, Mat};
use crate::module::{identity_mat, zero_mat, FPModule, ModuleMap};
use crate::ring::{parse_algebra, AlgElem, BaseRing, RingElement, TestAlgebra};

pub const BATTERY: [&str; 7] = ["Z/4", "Z/6", "Z/8", "F2", "F2[x]/(x^2)", "F3[s,t]/(s,t)^2", "Z/4 x Z/3"];

pub const PRODUCT_PAIRS: [(&str, &str); 2] = [("Z/4", "Z/3"), ("F2", "F2[s]/(s^2)")];

/// Battery names usable over `base` (those admitting a structure map).
pub fn battery_names(base: &BaseRing) -> Vec<&'static str> {
    BATTERY
        .iter()
        .copied()
        .filter(|s| parse_algebra(s).map(|b| b.check_base(base).is_ok()).unwrap_or(false))
        .collect()
}

pub fn battery(base: &BaseRing) -> Vec<TestAlgebra> {
    battery_names(base).into_iter().map(|s| parse_algebra(s).unwrap()).collect()
}

pub fn product_pairs() -> Vec<(TestAlgebra, TestAlgebra)> {
    PRODUCT_PAIRS.iter().map(|(a, b)| (parse_algebra(a).unwrap(), parse_algebra(b).unwrap())).collect()
}

/// A homomorphism of test algebras given by the images of basis elements
/// (columns of `matrix`).
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    pub source: TestAlgebra,
    pub target: TestAlgebra,
    pub matrix: Mat<BigInt>,
}

impl AlgebraHom {
    pub fn new(source: &TestAlgebra, target: &TestAlgebra, images: Vec<AlgElem>) -> Result<AlgebraHom> {
        if images.len() != source.rank() || images.iter().any(|v| v.len() != target.rank()) {
            return Err(Error::Invalid("basis images have the wrong shape".into()));
        }
        let matrix = Mat::from_fn(target.rank(), source.rank(), |i, j| images[j][i].clone());
        let h = AlgebraHom { source: source.clone(), target: target.clone(), matrix };
        if !h.is_homomorphism() {
            return Err(Error::Invalid(format!("not an algebra homomorphism {source} → {target}")));
        }
        Ok(h)
    }

    pub fn apply(&self, a: &AlgElem) -> AlgElem {
        let mut v: AlgElem = (0..self.target.rank())
            .map(|i| (0..self.source.rank()).map(|j| self.matrix.get(i, j) * &a[j]).sum())
            .collect();
        self.target.reduce(&mut v);
        v
    }

    /// Unital, additive on orders, multiplicative on basis pairs.
    pub fn is_homomorphism(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        if self.apply(&s.one()) != t.one() {
            return false;
        }
        for (j, m) in s.moduli.iter().enumerate() {
            let scaled = t.scale(m, &self.apply(&s.basis_elem(j)));
            if !m.is_zero() && scaled != t.zero() {
                return false;
            }
        }
        for i in 0..s.rank() {
            for j in 0..s.rank() {
                let (a, b) = (s.basis_elem(i), s.basis_elem(j));
                if self.apply(&s.mul(&a, &b)) != t.mul(&self.apply(&a), &self.apply(&b)) {
                    return false;
                }
            }
        }
        true
    }

    /// id_M ⊗ u on coefficient groups of M ⊗ B → M ⊗ B′.
    pub fn on_module(&self, gens: usize) -> Mat<BigInt> {
        let (rs, rt) = (self.source.rank(), self.target.rank());
        Mat::from_fn(gens * rt, gens * rs, |r, c| {
            if r / rt == c / rs {
                self.matrix.get(r % rt, c % rs).clone()
            } else {
                BigInt::zero()
            }
        })
    }
}

/// Homomorphisms between battery algebras usable over `base`.
pub fn battery_homs(base: &BaseRing) -> Result<Vec<AlgebraHom>> {
    let b = |s: &str| -> BigInt { s.parse().unwrap() };
    let v = |xs: &[&str]| -> AlgElem { xs.iter().map(|x| b(x)).collect() };
    let specs: Vec<(&str, &str, Vec<AlgElem>)> = vec![
        ("Z/8", "Z/4", vec![v(&["1"])]),
        ("Z/4", "F2", vec![v(&["1"])]),
        ("Z/6", "F2", vec![v(&["1"])]),
        ("F2[x]/(x^2)", "F2", vec![v(&["1"]), v(&["0"])]),
        ("F2", "F2[x]/(x^2)", vec![v(&["1", "0"])]),
        ("Z/4", "F2[x]/(x^2)", vec![v(&["1", "0"])]),
        ("Z/4 x Z/3", "Z/4", vec![v(&["1"]), v(&["0"])]),
        ("Z/4 x Z/3", "Z/6", vec![v(&["3"]), v(&["4"])]),
        ("F3[s,t]/(s,t)^2", "F3[s,t]/(s,t)^2", vec![v(&["1", "0", "0"]), v(&["0", "0", "1"]), v(&["0", "2", "1"])]),
    ];
    let mut out = Vec::new();
    for (s, t, images) in specs {
        let (sa, ta) = (parse_algebra(s)?, parse_algebra(t)?);
        if sa.check_base(base).is_err() || ta.check_base(base).is_err() {
            continue;
        }
        out.push(AlgebraHom::new(&sa, &ta, images)?);
    }
    Ok(out)
}

/// Naturality of one normalized node along u: B → B′. The direct and
/// normalized evaluations are both carried into their B′ counterparts and
/// the transport commutes with u up to the B′ relations.
pub fn check_naturality(e: &FunctorExpr, n: &Normalized, u: &AlgebraHom) -> Result<bool> {
    let base = n.presentation.base();
    let (bc, bc2) = (BaseChange::new(base, &u.source)?, BaseChange::new(base, &u.target)?);
    let (d, d2) = (direct_eval(e, n, &bc)?, direct_eval(e, n, &bc2)?);
    let (p, p2) = (carrier(&n.presentation, &bc)?, carrier(&n.presentation, &bc2)?);
    let ua = u.on_module(n.ambient.gens);
    let us = u.on_module(n.presentation.source().gens);
    let maps_into = |x: &Lattice, y: &Lattice, m: &Mat<BigInt>| x.rows.iter().all(|r| y.contains(&mat_vec(m, r)));
    if !maps_into(&d.num, &d2.num, &ua) || !maps_into(&d.den, &d2.den, &ua) {
        return Ok(false);
    }
    if !maps_into(&p.num, &p2.num, &us) || !maps_into(&p.den, &p2.den, &us) {
        return Ok(false);
    }
    let (t, t2) = (bc.matrix(&n.transport)?, bc2.matrix(&n.transport)?);
    for x in &d.num.rows {
        let a = mat_vec(&t2, &mat_vec(&ua, x));
        let b = mat_vec(&us, &mat_vec(&t, x));
        let diff: Vec<BigInt> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        if !p2.den.contains(&diff) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random small modules, maps and trees over Z or Z/m.
pub struct TreeGen {
    base: BaseRing,
    rng: ChaCha8Rng,
}

impl TreeGen {
    pub fn new(base: &BaseRing, seed: u64) -> Result<TreeGen> {
        match base {
            BaseRing::Integers | BaseRing::IntegersMod(_) | BaseRing::PrimeField(_) => {}
            other => return Err(Error::Unsupported(format!("random trees over {other}"))),
        }
        Ok(TreeGen { base: base.clone(), rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    fn scalar(&mut self) -> RingElement {
        let v = match &self.base {
            BaseRing::Integers => self.rng.gen_range(-3..=3),
            _ => {
                let m: i64 = self.base.modulus().try_into().unwrap_or(12);
                self.rng.gen_range(0..m)
            }
        };
        self.base.from_i64(v)
    }

    fn small_mat(&mut self, r: usize, c: usize) -> Mat<RingElement> {
        Mat::from_fn(r, c, |_, _| self.scalar())
    }

    fn module(&mut self) -> FPModule {
        let g = self.rng.gen_range(1..=2);
        let k = self.rng.gen_range(0..=1);
        let rel = self.small_mat(g, k);
        FPModule::new(&self.base, g, rel).expect("canonical entries")
    }

    fn map(&mut self, m: &FPModule, n: &FPModule) -> ModuleMap {
        for _ in 0..8 {
            let a = self.small_mat(n.gens, m.gens);
            if let Ok(f) = ModuleMap::new(m, n, a) {
                return f;
            }
        }
        ModuleMap::zero(m, n)
    }

    fn complex(&mut self) -> Vec<ModuleMap> {
        let a1 = FPModule::free(&self.base, 1);
        let a = self.scalar();
        let draws: Vec<RingElement> = (0..12).map(|_| self.scalar()).collect();
        let candidates: Vec<RingElement> =
            draws.into_iter().filter(|b| self.base.is_zero(&self.base.mul(&a, b))).collect();
        let b = candidates.first().cloned().unwrap_or_else(|| self.base.zero());
        vec![
            ModuleMap::new(&a1, &a1, Mat::from_rows(vec![vec![a]], 1)).unwrap(),
            ModuleMap::new(&a1, &a1, Mat::from_rows(vec![vec![b]], 1)).unwrap(),
        ]
    }

    fn leaf(&mut self) -> FunctorExpr {
        match self.rng.gen_range(0..5) {
            0 => FunctorExpr::Strict(self.module()),
            1 => {
                let (m, n) = (self.module(), self.module());
                FunctorExpr::KernelPair(self.map(&m, &n))
            }
            2 => FunctorExpr::AnnOf { base: self.base.clone(), gens: vec![self.scalar()] },
            3 => {
                let (x, y) = (self.scalar(), self.scalar());
                FunctorExpr::Tor1 { left: FPModule::cyclic(&self.base, x), right: FPModule::cyclic(&self.base, y) }
            }
            _ => {
                let degree = self.rng.gen_range(0..=2);
                FunctorExpr::CohomologyOf { complex: self.complex(), degree }
            }
        }
    }

    fn scaled(&self, s: &SquareSpec, c: &RingElement) -> SquareSpec {
        let b = &self.base;
        SquareSpec { phi: s.phi.map(|x| b.mul(c, x)), psi: s.psi.map(|x| b.mul(c, x)) }
    }

    /// Operands S, T of depth < `depth` and `count` squares S → T.
    #[allow(clippy::type_complexity)]
    fn squares(&mut self, depth: usize, count: usize) -> Result<(FunctorExpr, FunctorExpr, Vec<SquareSpec>)> {
        let b = self.base.clone();
        match self.rng.gen_range(0..4) {
            0 => {
                let (s, t) = (self.tree(depth - 1)?, self.tree(depth - 1)?);
                let (ns, nt) = (normalize(&s)?, normalize(&t)?);
                let z = SquareSpec {
                    phi: zero_mat(&b, nt.presentation.source().gens, ns.presentation.source().gens),
                    psi: zero_mat(&b, nt.presentation.target().gens, ns.presentation.target().gens),
                };
                Ok((s, t, vec![z; count]))
            }
            1 => {
                let s = self.tree(depth - 1)?;
                let ns = normalize(&s)?;
                let specs = (0..count)
                    .map(|_| {
                        let c = self.scalar();
                        let (gm, gn) = (ns.presentation.source().gens, ns.presentation.target().gens);
                        self.scaled(&SquareSpec { phi: identity_mat(&b, gm), psi: identity_mat(&b, gn) }, &c)
                    })
                    .collect();
                Ok((s.clone(), s, specs))
            }
            2 => {
                // pushout of the target: Ñ = (N ⊕ M″)/{(f m, −φ m)}
                let s = self.tree(depth - 1)?;
                let ns = normalize(&s)?;
                let p = &ns.presentation;
                let (m, n) = (p.source(), p.target());
                let v = self.small_mat(m.gens, 1);
                let m2 = FPModule::new(&b, m.gens, m.rel.hcat(&v))?;
                let c = self.scalar();
                let phi = identity_mat(&b, m.gens).map(|x| b.mul(&c, x));
                let neg_phi = phi.map(|x| b.neg(x));
                let top = n.rel.hcat(&zero_mat(&b, n.gens, m2.rel.cols)).hcat(&p.f.matrix);
                let bottom = zero_mat(&b, m.gens, n.rel.cols).hcat(&m2.rel).hcat(&neg_phi);
                let nt = FPModule::new(&b, n.gens + m.gens, top.vcat(&bottom))?;
                let ft = zero_mat(&b, n.gens, m.gens).vcat(&identity_mat(&b, m.gens));
                let t = FunctorExpr::KernelPair(ModuleMap::new(&m2, &nt, ft)?);
                let psi = identity_mat(&b, n.gens).vcat(&zero_mat(&b, m.gens, n.gens));
                let first = SquareSpec { phi, psi };
                let mut specs = vec![first.clone()];
                if count > 1 {
                    let c2 = self.scalar();
                    specs.push(self.scaled(&first, &c2));
                }
                Ok((s, t, specs))
            }
            _ => {
                // pullback: S = Ker(A^r → N′^count) through f′∘φᵢ
                let t = self.tree(depth - 1)?;
                let nt = normalize(&t)?;
                let p = &nt.presentation;
                let (m, n) = (p.source(), p.target());
                let r = self.rng.gen_range(1..=2);
                let free = FPModule::free(&b, r);
                let phis: Vec<Mat<RingElement>> = (0..count).map(|_| self.small_mat(m.gens, r)).collect();
                let mut tgt = FPModule::zero(&b);
                let mut f = zero_mat(&b, 0, r);
                for phi in &phis {
                    tgt = tgt.direct_sum(n);
                    f = f.vcat(&super::mat_mul(&b, &p.f.matrix, phi));
                }
                let s = FunctorExpr::KernelPair(ModuleMap::new(&free, &tgt, f)?);
                let specs = phis
                    .into_iter()
                    .enumerate()
                    .map(|(i, phi)| {
                        let psi = Mat::from_fn(n.gens, n.gens * count, |row, col| {
                            if col == i * n.gens + row {
                                b.one()
                            } else {
                                b.zero()
                            }
                        });
                        SquareSpec { phi, psi }
                    })
                    .collect();
                Ok((s, t, specs))
            }
        }
    }

    /// A tree of depth at most `depth`; HomOf is not generated.
    pub fn tree(&mut self, depth: usize) -> Result<FunctorExpr> {
        if depth <= 1 || self.rng.gen_bool(0.25) {
            return Ok(self.leaf());
        }
        let e = match self.rng.gen_range(0..7) {
            0 => FunctorExpr::Product(vec![self.tree(depth - 1)?, self.tree(depth - 1)?]),
            1 => {
                let count = self.rng.gen_range(1..=2);
                let (s, t, specs) = self.squares(depth, count)?;
                let arrows = specs.into_iter().map(|square| Arrow { from: 0, to: 1, square }).collect();
                FunctorExpr::LimitOf { nodes: vec![s, t], arrows }
            }
            2 => {
                let (s, t, mut specs) = self.squares(depth, 2)?;
                let tau = specs.pop().unwrap();
                let sigma = specs.pop().unwrap();
                FunctorExpr::Equalizer { source: Box::new(s), target: Box::new(t), sigma, tau }
            }
            3 => {
                let (s, t, mut specs) = self.squares(depth, 1)?;
                FunctorExpr::KernelOfMorphism { source: Box::new(s), target: Box::new(t), sigma: specs.pop().unwrap() }
            }
            4 => {
                let (s, t, mut specs) = self.squares(depth, 1)?;
                FunctorExpr::CokernelOfMorphism { source: Box::new(s), target: Box::new(t), sigma: specs.pop().unwrap() }
            }
            5 => {
                let (s, t, mut specs) = self.squares(depth, 1)?;
                FunctorExpr::ImageOfMorphism { source: Box::new(s), target: Box::new(t), sigma: specs.pop().unwrap() }
            }
            _ => {
                let inner = self.tree(depth - 1)?;
                FunctorExpr::TensorModule { inner: Box::new(inner), module: self.module() }
            }
        };
        Ok(e)
    }
}

/// `count` trees of depth ≤ `depth`, alternating between Z and Z/12; tree i
/// uses the seed derived from (seed, i).
pub fn random_suite(seed: u64, count: usize, depth: usize) -> Result<Vec<(BaseRing, FunctorExpr)>> {
    let bases = [BaseRing::Integers, BaseRing::integers_mod(12)];
    (0..count)
        .map(|i| {
            let base = bases[i % 2].clone();
            let mut g = TreeGen::new(&base, seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64))?;
            Ok((base, g.tree(depth)?))
        })
        .collect()
}

/// The presentations of every node of a normalized tree, in post-order.
pub fn node_presentations(n: &Normalized) -> Vec<FunctorPresentation> {
    let mut out = Vec::new();
    for k in &n.children {
        out.extend(node_presentations(k));
    }
    out.push(n.presentation.clone());
    out
}
