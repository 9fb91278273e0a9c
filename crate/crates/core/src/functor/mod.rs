//! Module-coherent functors presented as B ↦ ker(f ⊗ B), their morphisms,
//! and evaluation at finite test algebras.

mod basechange;
pub mod expr;
pub mod growth;
pub mod hom;
pub mod ops;
pub mod polysys;
pub mod random;

#[cfg(test)]
mod tests;

use num_bigint::BigInt;

pub use basechange::BaseChange;
pub use expr::{normalize, FunctorExpr, Normalized, SquareSpec};
pub use hom::{end_algebra, hom_functor, EndAlgebra, HomElement, HomFunctor};
pub use ops::{ann_functor, cohomology_functor, eval_tensor, tensor_with_module, tor1_functor};

use crate::error::{Error, Result};
use crate::linalg::{Lattice, Mat, Structure, Subquotient};
use crate::module::{base_mat_mul, identity_mat, zero_mat, FPModule, ModuleMap};
use crate::ring::{AlgElem, BaseRing, TestAlgebra};

/// The functor B ↦ ker(f ⊗ B) for f: M → N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorPresentation {
    pub f: ModuleMap,
}

impl FunctorPresentation {
    pub fn new(f: ModuleMap) -> FunctorPresentation {
        FunctorPresentation { f }
    }

    /// M̲ = Ker(M → 0).
    pub fn strict(m: &FPModule) -> FunctorPresentation {
        FunctorPresentation { f: ModuleMap::zero(m, &FPModule::zero(&m.base)) }
    }

    pub fn zero(base: &BaseRing) -> FunctorPresentation {
        FunctorPresentation::strict(&FPModule::zero(base))
    }

    pub fn source(&self) -> &FPModule {
        &self.f.source
    }

    pub fn target(&self) -> &FPModule {
        &self.f.target
    }

    pub fn base(&self) -> &BaseRing {
        self.f.base()
    }

    pub fn direct_sum(&self, other: &FunctorPresentation) -> FunctorPresentation {
        FunctorPresentation { f: self.f.direct_sum(&other.f) }
    }

    /// Ker(f) for f = (rows stacked) M → N₁ ⊕ N₂ built from two maps out of M.
    fn stacked(m: &FPModule, parts: &[(&FPModule, &Mat<crate::ring::RingElement>)]) -> Result<FunctorPresentation> {
        let base = &m.base;
        let mut target = FPModule::zero(base);
        let mut mat = zero_mat(base, 0, m.gens);
        for (n, a) in parts {
            target = target.direct_sum(n);
            mat = mat.vcat(a);
        }
        Ok(FunctorPresentation { f: ModuleMap::new(m, &target, mat)? })
    }
}

/// σ: Ker(f: M→N) → Ker(f′: M′→N′) given by φ: M → M′ and ψ: N → N′ with
/// ψ∘f = f′∘φ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismSquare {
    pub source: FunctorPresentation,
    pub target: FunctorPresentation,
    pub phi: ModuleMap,
    pub psi: ModuleMap,
}

impl MorphismSquare {
    pub fn new(
        source: &FunctorPresentation,
        target: &FunctorPresentation,
        phi: Mat<crate::ring::RingElement>,
        psi: Mat<crate::ring::RingElement>,
    ) -> Result<MorphismSquare> {
        let phi = ModuleMap::new(source.source(), target.source(), phi)?;
        let psi = ModuleMap::new(source.target(), target.target(), psi)?;
        let left = psi.compose(&source.f);
        let right = target.f.compose(&phi);
        if !left.equals(&right)? {
            return Err(Error::Invalid("square does not commute: ψ∘f ≠ f′∘φ".into()));
        }
        Ok(MorphismSquare { source: source.clone(), target: target.clone(), phi, psi })
    }

    pub fn identity(p: &FunctorPresentation) -> MorphismSquare {
        MorphismSquare {
            source: p.clone(),
            target: p.clone(),
            phi: ModuleMap::identity(p.source()),
            psi: ModuleMap::identity(p.target()),
        }
    }

    pub fn zero(source: &FunctorPresentation, target: &FunctorPresentation) -> MorphismSquare {
        MorphismSquare {
            source: source.clone(),
            target: target.clone(),
            phi: ModuleMap::zero(source.source(), target.source()),
            psi: ModuleMap::zero(source.target(), target.target()),
        }
    }

    /// Multiplication by a base scalar on one functor.
    pub fn scalar(p: &FunctorPresentation, c: &crate::ring::RingElement) -> MorphismSquare {
        let b = p.base();
        let sc = |n: usize| Mat::from_fn(n, n, |i, j| if i == j { c.clone() } else { b.zero() });
        MorphismSquare {
            source: p.clone(),
            target: p.clone(),
            phi: ModuleMap { source: p.source().clone(), target: p.source().clone(), matrix: sc(p.source().gens) },
            psi: ModuleMap { source: p.target().clone(), target: p.target().clone(), matrix: sc(p.target().gens) },
        }
    }

    pub fn compose(&self, first: &MorphismSquare) -> MorphismSquare {
        MorphismSquare {
            source: first.source.clone(),
            target: self.target.clone(),
            phi: self.phi.compose(&first.phi),
            psi: self.psi.compose(&first.psi),
        }
    }
}

/// F(B) as a subquotient of the coefficient group of M ⊗ B.
#[derive(Clone, Debug)]
pub struct EvaluatedModule {
    pub algebra: TestAlgebra,
    /// Generator count of the ambient module M; coordinates are indexed
    /// `i * rank(B) + k`.
    pub gens: usize,
    pub carrier: Subquotient,
    pub structure: Structure,
    pub mu: Option<usize>,
}

impl EvaluatedModule {
    pub fn new(algebra: &TestAlgebra, gens: usize, carrier: Subquotient) -> EvaluatedModule {
        let structure = carrier.structure();
        let mu = local_mu(algebra, gens, &carrier);
        EvaluatedModule { algebra: algebra.clone(), gens, carrier, structure, mu }
    }

    pub fn invariants(&self) -> Vec<BigInt> {
        self.structure.invariants()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.structure.order()
    }

    pub fn is_zero(&self) -> bool {
        self.structure.generators.is_empty()
    }

    pub fn elements(&self, cap: usize) -> Option<Vec<Vec<BigInt>>> {
        self.carrier.elements(cap)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.carrier.num.contains(v)
    }

    pub fn same_class(&self, v: &[BigInt], w: &[BigInt]) -> bool {
        let d: Vec<BigInt> = v.iter().zip(w).map(|(a, b)| a - b).collect();
        self.carrier.den.contains(&d)
    }

    /// Action of a ∈ B on an ambient vector.
    pub fn act(&self, a: &AlgElem, v: &[BigInt]) -> Vec<BigInt> {
        act_blockwise(&self.algebra.mul_matrix(a), self.gens, v)
    }

    /// Human-readable invariants, e.g. "Z/2 + Z/2" or "0".
    pub fn describe(&self) -> String {
        describe_invariants(&self.invariants())
    }
}

pub fn describe_invariants(inv: &[BigInt]) -> String {
    if inv.is_empty() {
        return "0".into();
    }
    inv.iter()
        .map(|d| if d == &BigInt::from(0) { "Z".to_string() } else { format!("Z/{d}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Applies an r×r multiplication matrix to each of `gens` blocks of `v`.
pub fn act_blockwise(mm: &[Vec<BigInt>], gens: usize, v: &[BigInt]) -> Vec<BigInt> {
    let r = mm.len();
    let mut out = vec![BigInt::from(0); v.len()];
    for i in 0..gens {
        for k in 0..r {
            let x = &v[i * r + k];
            if x == &BigInt::from(0) {
                continue;
            }
            for t in 0..r {
                let c = &mm[t][k];
                if c != &BigInt::from(0) {
                    out[i * r + t] += c * x;
                }
            }
        }
    }
    out
}

/// μ of U/L as a module over a local B: the number of cyclic factors of
/// U/(rad·U + L), which is a vector space over the residue field.
pub fn local_mu(alg: &TestAlgebra, gens: usize, sq: &Subquotient) -> Option<usize> {
    let ld = alg.local_data().ok()?;
    let mats: Vec<Vec<Vec<BigInt>>> = ld.radical.iter().map(|r| alg.mul_matrix(r)).collect();
    let mut gens_rad = Vec::new();
    for u in &sq.num.rows {
        for m in &mats {
            gens_rad.push(act_blockwise(m, gens, u));
        }
    }
    let den = sq.den.sum(&Lattice::span(&sq.den.moduli, gens_rad));
    Some(Subquotient::new(sq.num.clone(), den).structure().torsion.len())
}

/// Carrier of F(B): the preimage of the relations of N ⊗ B under f ⊗ B,
/// modulo the relations of M ⊗ B.
pub fn carrier(p: &FunctorPresentation, bc: &BaseChange) -> Result<Subquotient> {
    let (mm, den_m) = bc.module(p.source())?;
    let (_, den_n) = bc.module(p.target())?;
    let fb = bc.matrix(&p.f.matrix)?;
    let num = Lattice::full(&mm).preimage(&fb, &den_n);
    Ok(Subquotient::new(num, den_m))
}

pub fn eval(p: &FunctorPresentation, alg: &TestAlgebra) -> Result<EvaluatedModule> {
    let bc = BaseChange::new(p.base(), alg)?;
    let sq = carrier(p, &bc)?;
    Ok(EvaluatedModule::new(alg, p.source().gens, sq))
}

/// Image of the source evaluation under φ ⊗ B, inside M′ ⊗ B.
pub fn square_image(sq: &MorphismSquare, bc: &BaseChange) -> Result<Lattice> {
    let src = carrier(&sq.source, bc)?;
    let (mt, den_t) = bc.module(sq.target.source())?;
    let phib = bc.matrix(&sq.phi.matrix)?;
    Ok(src.num.image(&phib, &mt).sum(&den_t))
}

/// Ker((f, φ): M → N ⊕ M′).
pub fn kernel_of_morphism(sq: &MorphismSquare) -> Result<FunctorPresentation> {
    FunctorPresentation::stacked(
        sq.source.source(),
        &[(sq.source.target(), &sq.source.f.matrix), (sq.target.source(), &sq.phi.matrix)],
    )
}

/// The cokernel presentation Ker(D → Q) together with j′: M′ → D (which
/// induces G(B) ↠ coker(B)) and the canonical square G → Coker.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub presentation: FunctorPresentation,
    pub j: ModuleMap,
    pub projection: MorphismSquare,
    pub linear: LinearRep,
}

/// Cokernel of σ: F → G via a linear cover of F′ = F ×_{M̲′} A̲^m and a
/// pushout.
pub fn cokernel_of_morphism(sq: &MorphismSquare) -> Result<Cokernel> {
    let b = sq.source.base().clone();
    let (mm, nn) = (sq.source.source(), sq.source.target());
    let (mt, nt) = (sq.target.source(), sq.target.target());
    let (a, m) = (mm.gens, mt.gens);
    // F′ = Ker(M ⊕ A^m → N ⊕ M′, (x, y) ↦ (f x, φ x − y))
    let m2 = mm.direct_sum(&FPModule::free(&b, m));
    let n2 = nn.direct_sum(mt);
    let mut f2 = zero_mat(&b, nn.gens + m, a + m);
    for i in 0..nn.gens {
        for j in 0..a {
            f2.set(i, j, sq.source.f.matrix.get(i, j).clone());
        }
    }
    for i in 0..m {
        for j in 0..a {
            f2.set(nn.gens + i, j, sq.phi.matrix.get(i, j).clone());
        }
        f2.set(nn.gens + i, a + i, b.neg(&b.one()));
    }
    let fprime = FunctorPresentation::new(ModuleMap::new(&m2, &n2, f2)?);
    let lin = dominate_linear(&fprime);
    let (n, k) = (lin.n, lin.k);
    // projection of the linear cover onto the A^m factor
    let gproj = Mat::from_fn(m, n, |i, j| if j == a + i { b.one() } else { b.zero() });
    // D = (M′ ⊕ A^k) / {(gproj x, −h x)}
    let top = mt.rel.hcat(&gproj);
    let bottom = zero_mat(&b, k, mt.rel.cols).hcat(&crate::module::mat_neg(&b, &lin.h));
    let d = FPModule::new(&b, m + k, top.vcat(&bottom))?;
    let jm = Mat::from_fn(m + k, m, |i, j| if i == j { b.one() } else { b.zero() });
    let j = ModuleMap::new(mt, &d, jm)?;
    // χ: A^k → N′ with χ h ≡ f′ gproj; the block form [ψ | −f′] solves it
    let chi = sq.psi.matrix.hcat(&crate::module::mat_neg(&b, &sq.target.f.matrix));
    let q = FPModule::new(&b, k, lin.h.clone())?.direct_sum(nt);
    let mut fc = zero_mat(&b, k + nt.gens, m + k);
    for i in 0..k {
        fc.set(i, m + i, b.one());
    }
    for i in 0..nt.gens {
        for jx in 0..m {
            fc.set(k + i, jx, sq.target.f.matrix.get(i, jx).clone());
        }
        for jx in 0..k {
            fc.set(k + i, m + jx, chi.get(i, jx).clone());
        }
    }
    let fcm = ModuleMap::new(&d, &q, fc)
        .map_err(|e| Error::Internal(format!("cokernel map is not well defined: {e}")))?;
    let presentation = FunctorPresentation::new(fcm);
    let psi = Mat::from_fn(k + nt.gens, nt.gens, |i, jx| if i == k + jx { b.one() } else { b.zero() });
    let projection = MorphismSquare::new(&sq.target, &presentation, j.matrix.clone(), psi)
        .map_err(|e| Error::Internal(format!("projection square: {e}")))?;
    Ok(Cokernel { presentation, j, projection, linear: lin })
}

/// Im(σ) = Ker(G → Coker σ), a subfunctor of G.
pub fn image_of_morphism(sq: &MorphismSquare) -> Result<FunctorPresentation> {
    let c = cokernel_of_morphism(sq)?;
    kernel_of_morphism(&c.projection)
}

/// R = Ker(h: A̲ⁿ → A̲ᵏ) with an epimorphism onto F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRep {
    pub n: usize,
    pub k: usize,
    /// k × n.
    pub h: Mat<crate::ring::RingElement>,
    /// coker(hᵀ), the degree-1 part of A[x₁..xₙ]/(h x).
    pub c1: FPModule,
    /// A^n → M, the epimorphism R → F on ambient modules (gens(M) × n).
    pub epi: Mat<crate::ring::RingElement>,
}

impl LinearRep {
    pub fn presentation(&self) -> FunctorPresentation {
        let b = self.h_base();
        let f = ModuleMap {
            source: FPModule::free(&b, self.n),
            target: FPModule::free(&b, self.k),
            matrix: self.h.clone(),
        };
        FunctorPresentation::new(f)
    }

    fn h_base(&self) -> BaseRing {
        self.c1.base.clone()
    }

    /// Exact check that R(B) → F(B) is onto.
    pub fn is_surjective_at(&self, f: &FunctorPresentation, alg: &TestAlgebra) -> Result<bool> {
        let bc = BaseChange::new(f.base(), alg)?;
        let r = carrier(&self.presentation(), &bc)?;
        let target = carrier(f, &bc)?;
        let eb = bc.matrix(&self.epi)?;
        let img = r.num.image(&eb, &target.num.moduli).sum(&target.den);
        Ok(img == target.num)
    }
}

/// Covers π = id on the generators of M, h = id on the generators of N,
/// g = f, e = the relation columns of N.
pub fn dominate_linear(p: &FunctorPresentation) -> LinearRep {
    let b = p.base().clone();
    let (m, r) = (p.source().gens, p.target().gens);
    let e = &p.target().rel;
    let s = e.cols;
    let h = p.f.matrix.hcat(&crate::module::mat_neg(&b, e));
    let c1 = FPModule { base: b.clone(), gens: m + s, rel: h.transpose() };
    let epi = identity_mat(&b, m).hcat(&zero_mat(&b, m, s));
    LinearRep { n: m + s, k: r, h, c1, epi }
}

/// φ ⊗ B applied to a vector, for a module map given by its matrix.
pub fn apply_matrix(bc: &BaseChange, a: &Mat<crate::ring::RingElement>, v: &[BigInt]) -> Result<Vec<BigInt>> {
    let ab = bc.matrix(a)?;
    Ok(crate::linalg::lattice::mat_vec(&ab, v))
}

pub(crate) fn mat_mul(b: &BaseRing, x: &Mat<crate::ring::RingElement>, y: &Mat<crate::ring::RingElement>) -> Mat<crate::ring::RingElement> {
    base_mat_mul(b, x, y)
}
