//! Expression trees of functors, normalization to level-1 presentations, and
//! a direct evaluator used as the oracle for normalization.

use num_bigint::BigInt;

use super::ops::{ann_functor, cohomology_functor, tensor_with_module, tor1_functor};
use super::{
    carrier, cokernel_of_morphism, hom_functor, image_of_morphism, kernel_of_morphism, BaseChange,
    FunctorPresentation, MorphismSquare,
};
use crate::error::{Error, Result};
use crate::linalg::{Lattice, Mat, Subquotient};
use crate::module::{identity_mat, kron, mat_sub, zero_mat, FPModule, ModuleMap};
use crate::ring::{BaseRing, RingElement, TestAlgebra};

/// φ: M → M′ and ψ: N → N′ relative to the normalized presentations of the
/// two operands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareSpec {
    pub phi: Mat<RingElement>,
    pub psi: Mat<RingElement>,
}

impl SquareSpec {
    pub fn of(sq: &MorphismSquare) -> SquareSpec {
        SquareSpec { phi: sq.phi.matrix.clone(), psi: sq.psi.matrix.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub square: SquareSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorExpr {
    Strict(FPModule),
    KernelPair(ModuleMap),
    LimitOf { nodes: Vec<FunctorExpr>, arrows: Vec<Arrow> },
    Product(Vec<FunctorExpr>),
    Equalizer { source: Box<FunctorExpr>, target: Box<FunctorExpr>, sigma: SquareSpec, tau: SquareSpec },
    KernelOfMorphism { source: Box<FunctorExpr>, target: Box<FunctorExpr>, sigma: SquareSpec },
    CokernelOfMorphism { source: Box<FunctorExpr>, target: Box<FunctorExpr>, sigma: SquareSpec },
    ImageOfMorphism { source: Box<FunctorExpr>, target: Box<FunctorExpr>, sigma: SquareSpec },
    TensorModule { inner: Box<FunctorExpr>, module: FPModule },
    Tor1 { left: FPModule, right: FPModule },
    AnnOf { base: BaseRing, gens: Vec<RingElement> },
    HomOf { source: Box<FunctorExpr>, target: Box<FunctorExpr> },
    CohomologyOf { complex: Vec<ModuleMap>, degree: usize },
}

impl FunctorExpr {
    pub fn kind(&self) -> &'static str {
        match self {
            FunctorExpr::Strict(_) => "Strict",
            FunctorExpr::KernelPair(_) => "KernelPair",
            FunctorExpr::LimitOf { .. } => "LimitOf",
            FunctorExpr::Product(_) => "Product",
            FunctorExpr::Equalizer { .. } => "Equalizer",
            FunctorExpr::KernelOfMorphism { .. } => "KernelOfMorphism",
            FunctorExpr::CokernelOfMorphism { .. } => "CokernelOfMorphism",
            FunctorExpr::ImageOfMorphism { .. } => "ImageOfMorphism",
            FunctorExpr::TensorModule { .. } => "TensorModule",
            FunctorExpr::Tor1 { .. } => "Tor1",
            FunctorExpr::AnnOf { .. } => "AnnOf",
            FunctorExpr::HomOf { .. } => "HomOf",
            FunctorExpr::CohomologyOf { .. } => "CohomologyOf",
        }
    }

    pub fn children(&self) -> Vec<&FunctorExpr> {
        match self {
            FunctorExpr::LimitOf { nodes, .. } => nodes.iter().collect(),
            FunctorExpr::Product(v) => v.iter().collect(),
            FunctorExpr::Equalizer { source, target, .. }
            | FunctorExpr::KernelOfMorphism { source, target, .. }
            | FunctorExpr::CokernelOfMorphism { source, target, .. }
            | FunctorExpr::ImageOfMorphism { source, target, .. }
            | FunctorExpr::HomOf { source, target } => vec![source, target],
            FunctorExpr::TensorModule { inner, .. } => vec![inner],
            _ => vec![],
        }
    }

    /// Nesting depth of finite limits and colimits in the construction.
    pub fn level(&self) -> usize {
        match self {
            FunctorExpr::Strict(_) => 0,
            FunctorExpr::KernelPair(_) | FunctorExpr::AnnOf { .. } => 1,
            FunctorExpr::Tor1 { .. } | FunctorExpr::CohomologyOf { .. } => 2,
            other => 1 + other.children().iter().map(|c| c.level()).max().unwrap_or(0),
        }
    }

    /// Height of the tree (leaves have depth 1).
    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

/// A normalized node: the level-1 presentation, the ambient module of the
/// direct evaluation and the transport ambient → source(presentation).
#[derive(Clone, Debug)]
pub struct Normalized {
    pub presentation: FunctorPresentation,
    pub ambient: FPModule,
    pub transport: Mat<RingElement>,
    pub children: Vec<Normalized>,
    /// Squares built at this node (verified on construction).
    pub squares: Vec<MorphismSquare>,
}

impl Normalized {
    fn leaf(p: FunctorPresentation) -> Normalized {
        let amb = p.source().clone();
        let t = identity_mat(&amb.base, amb.gens);
        Normalized { presentation: p, ambient: amb, transport: t, children: vec![], squares: vec![] }
    }
}

fn square(src: &Normalized, dst: &Normalized, s: &SquareSpec) -> Result<MorphismSquare> {
    MorphismSquare::new(&src.presentation, &dst.presentation, s.phi.clone(), s.psi.clone())
}

pub fn normalize(e: &FunctorExpr) -> Result<Normalized> {
    match e {
        FunctorExpr::Strict(m) => Ok(Normalized::leaf(FunctorPresentation::strict(m))),
        FunctorExpr::KernelPair(f) => Ok(Normalized::leaf(FunctorPresentation::new(f.clone()))),
        FunctorExpr::Product(list) => {
            if list.is_empty() {
                return Err(Error::Invalid("empty product".into()));
            }
            let kids: Vec<Normalized> = list.iter().map(normalize).collect::<Result<_>>()?;
            let b = kids[0].presentation.base().clone();
            let mut p = FunctorPresentation::zero(&b);
            let mut amb = FPModule::zero(&b);
            for k in &kids {
                p = p.direct_sum(&k.presentation);
                amb = amb.direct_sum(&k.ambient);
            }
            let blocks: Vec<&Mat<RingElement>> = kids.iter().map(|k| &k.transport).collect();
            let t = Mat::block_diag(&blocks, b.zero());
            Ok(Normalized { presentation: p, ambient: amb, transport: t, children: kids, squares: vec![] })
        }
        FunctorExpr::LimitOf { nodes, arrows } => {
            if nodes.is_empty() {
                return Err(Error::Invalid("empty diagram".into()));
            }
            let kids: Vec<Normalized> = nodes.iter().map(normalize).collect::<Result<_>>()?;
            let b = kids[0].presentation.base().clone();
            let mut squares = Vec::new();
            for a in arrows {
                if a.from >= kids.len() || a.to >= kids.len() {
                    return Err(Error::Invalid(format!("arrow {}→{} leaves the diagram", a.from, a.to)));
                }
                squares.push(square(&kids[a.from], &kids[a.to], &a.square)?);
            }
            let offs = offsets(kids.iter().map(|k| k.presentation.source().gens));
            let mut m = FPModule::zero(&b);
            let mut n = FPModule::zero(&b);
            for k in &kids {
                m = m.direct_sum(k.presentation.source());
                n = n.direct_sum(k.presentation.target());
            }
            let fs: Vec<&Mat<RingElement>> = kids.iter().map(|k| &k.presentation.f.matrix).collect();
            let mut f = Mat::block_diag(&fs, b.zero());
            for (a, sq) in arrows.iter().zip(&squares) {
                let mt = kids[a.to].presentation.source();
                let mut rows = zero_mat(&b, mt.gens, m.gens);
                for i in 0..mt.gens {
                    for j in 0..sq.phi.matrix.cols {
                        let cur = rows.get(i, offs[a.from] + j).clone();
                        rows.set(i, offs[a.from] + j, b.add(&cur, sq.phi.matrix.get(i, j)));
                    }
                    let cur = rows.get(i, offs[a.to] + i).clone();
                    rows.set(i, offs[a.to] + i, b.sub(&cur, &b.one()));
                }
                f = f.vcat(&rows);
                n = n.direct_sum(mt);
            }
            let p = FunctorPresentation::new(ModuleMap::new(&m, &n, f)?);
            let mut amb = FPModule::zero(&b);
            for k in &kids {
                amb = amb.direct_sum(&k.ambient);
            }
            let blocks: Vec<&Mat<RingElement>> = kids.iter().map(|k| &k.transport).collect();
            let t = Mat::block_diag(&blocks, b.zero());
            Ok(Normalized { presentation: p, ambient: amb, transport: t, children: kids, squares })
        }
        FunctorExpr::Equalizer { source, target, sigma, tau } => {
            let (s, t) = (normalize(source)?, normalize(target)?);
            let (sq1, sq2) = (square(&s, &t, sigma)?, square(&s, &t, tau)?);
            let b = s.presentation.base().clone();
            let diff = mat_sub(&b, &sq1.phi.matrix, &sq2.phi.matrix);
            let p = FunctorPresentation::stacked(
                s.presentation.source(),
                &[(s.presentation.target(), &s.presentation.f.matrix), (t.presentation.source(), &diff)],
            )?;
            Ok(Normalized {
                presentation: p,
                ambient: s.ambient.clone(),
                transport: s.transport.clone(),
                children: vec![s, t],
                squares: vec![sq1, sq2],
            })
        }
        FunctorExpr::KernelOfMorphism { source, target, sigma } => {
            let (s, t) = (normalize(source)?, normalize(target)?);
            let sq = square(&s, &t, sigma)?;
            let p = kernel_of_morphism(&sq)?;
            Ok(Normalized {
                presentation: p,
                ambient: s.ambient.clone(),
                transport: s.transport.clone(),
                children: vec![s, t],
                squares: vec![sq],
            })
        }
        FunctorExpr::CokernelOfMorphism { source, target, sigma } => {
            let (s, t) = (normalize(source)?, normalize(target)?);
            let sq = square(&s, &t, sigma)?;
            let c = cokernel_of_morphism(&sq)?;
            let tr = super::mat_mul(s.presentation.base(), &c.j.matrix, &t.transport);
            Ok(Normalized {
                presentation: c.presentation,
                ambient: t.ambient.clone(),
                transport: tr,
                children: vec![s, t],
                squares: vec![sq],
            })
        }
        FunctorExpr::ImageOfMorphism { source, target, sigma } => {
            let (s, t) = (normalize(source)?, normalize(target)?);
            let sq = square(&s, &t, sigma)?;
            let p = image_of_morphism(&sq)?;
            Ok(Normalized {
                presentation: p,
                ambient: t.ambient.clone(),
                transport: t.transport.clone(),
                children: vec![s, t],
                squares: vec![sq],
            })
        }
        FunctorExpr::TensorModule { inner, module } => {
            let s = normalize(inner)?;
            let tm = tensor_with_module(&s.presentation, module)?;
            let b = s.presentation.base().clone();
            let n = module.gens;
            let amb = (0..n).fold(FPModule::zero(&b), |acc, _| acc.direct_sum(&s.ambient));
            let lifted = kron(&b, &identity_mat(&b, n), &s.transport);
            let tr = super::mat_mul(&b, &tm.transport, &lifted);
            Ok(Normalized { presentation: tm.presentation, ambient: amb, transport: tr, children: vec![s], squares: vec![] })
        }
        FunctorExpr::Tor1 { left, right } => {
            let t = tor1_functor(left, right)?;
            Ok(Normalized {
                presentation: t.presentation,
                ambient: t.ambient,
                transport: t.transport,
                children: vec![],
                squares: vec![],
            })
        }
        FunctorExpr::AnnOf { base, gens } => Ok(Normalized::leaf(ann_functor(base, gens)?)),
        FunctorExpr::HomOf { source, target } => {
            let (s, t) = (normalize(source)?, normalize(target)?);
            let h = hom_functor(&s.presentation, &t.presentation)?;
            let mut n = Normalized::leaf(h.presentation);
            n.children = vec![s, t];
            Ok(n)
        }
        FunctorExpr::CohomologyOf { complex, degree } => {
            let c = cohomology_functor(complex, *degree)?;
            Ok(Normalized {
                presentation: c.presentation,
                ambient: c.ambient,
                transport: c.transport,
                children: vec![],
                squares: vec![],
            })
        }
    }
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = Vec::new();
    let mut acc = 0;
    for s in sizes {
        out.push(acc);
        acc += s;
    }
    out
}

/// Block direct sum of subquotients (coordinates concatenated).
pub fn direct_sum_sq(parts: &[Subquotient]) -> Subquotient {
    let moduli: Vec<BigInt> = parts.iter().flat_map(|p| p.num.moduli.iter().cloned()).collect();
    let d = moduli.len();
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut off = 0;
    for p in parts {
        let pad = |r: &Vec<BigInt>| {
            let mut v = vec![BigInt::from(0); d];
            v[off..off + r.len()].clone_from_slice(r);
            v
        };
        num.extend(p.num.rows.iter().map(pad));
        den.extend(p.den.rows.iter().map(pad));
        off += p.num.dim();
    }
    Subquotient::new(Lattice::span(&moduli, num), Lattice::span(&moduli, den))
}

/// Evaluates `e` at B without using the normalized presentation of `e`
/// itself: each node is computed as the set-level limit, quotient, image,
/// tensor or homology of its operands. Operand evaluations are moved into
/// the operand presentations through their (separately verified)
/// transports.
pub fn direct_eval(e: &FunctorExpr, n: &Normalized, bc: &BaseChange) -> Result<Subquotient> {
    let kid = |i: usize| -> Result<Subquotient> { direct_eval(e.children()[i], &n.children[i], bc) };
    match e {
        FunctorExpr::Strict(m) => {
            let (mm, den) = bc.module(m)?;
            Ok(Subquotient::new(Lattice::full(&mm), den))
        }
        FunctorExpr::KernelPair(f) => carrier(&FunctorPresentation::new(f.clone()), bc),
        FunctorExpr::Product(list) => {
            let parts: Vec<Subquotient> = (0..list.len()).map(kid).collect::<Result<_>>()?;
            Ok(direct_sum_sq(&parts))
        }
        FunctorExpr::LimitOf { nodes, arrows } => {
            let parts: Vec<Subquotient> = (0..nodes.len()).map(kid).collect::<Result<_>>()?;
            let sum = direct_sum_sq(&parts);
            let b = n.presentation.base().clone();
            let offs = offsets(n.children.iter().map(|k| k.ambient.gens));
            let total: usize = n.children.iter().map(|k| k.ambient.gens).sum();
            let mut num = sum.num.clone();
            for (a, sq) in arrows.iter().zip(&n.squares) {
                let (s, t) = (&n.children[a.from], &n.children[a.to]);
                let mt = t.presentation.source();
                let sx = super::mat_mul(&b, &sq.phi.matrix, &s.transport);
                let mut c = zero_mat(&b, mt.gens, total);
                for i in 0..mt.gens {
                    for j in 0..sx.cols {
                        c.set(i, offs[a.from] + j, sx.get(i, j).clone());
                    }
                    for j in 0..t.transport.cols {
                        let cur = c.get(i, offs[a.to] + j).clone();
                        c.set(i, offs[a.to] + j, b.sub(&cur, t.transport.get(i, j)));
                    }
                }
                let (_, den_t) = bc.module(mt)?;
                num = num.preimage(&bc.matrix(&c)?, &den_t);
            }
            Ok(Subquotient::new(num, sum.den))
        }
        FunctorExpr::Equalizer { .. } | FunctorExpr::KernelOfMorphism { .. } => {
            let src = kid(0)?;
            let (s, t) = (&n.children[0], &n.children[1]);
            let b = n.presentation.base().clone();
            let phi = match e {
                FunctorExpr::Equalizer { .. } => mat_sub(&b, &n.squares[0].phi.matrix, &n.squares[1].phi.matrix),
                _ => n.squares[0].phi.matrix.clone(),
            };
            let c = super::mat_mul(&b, &phi, &s.transport);
            let (_, den_t) = bc.module(t.presentation.source())?;
            let num = src.num.preimage(&bc.matrix(&c)?, &den_t);
            Ok(Subquotient::new(num, src.den))
        }
        FunctorExpr::CokernelOfMorphism { .. } | FunctorExpr::ImageOfMorphism { .. } => {
            let (src, dst) = (kid(0)?, kid(1)?);
            let (s, t) = (&n.children[0], &n.children[1]);
            let b = n.presentation.base().clone();
            let (mt, den_t) = bc.module(t.presentation.source())?;
            let c = super::mat_mul(&b, &n.squares[0].phi.matrix, &s.transport);
            let im = src.num.image(&bc.matrix(&c)?, &mt).sum(&den_t);
            let back = dst.num.preimage(&bc.matrix(&t.transport)?, &im);
            match e {
                FunctorExpr::CokernelOfMorphism { .. } => Ok(Subquotient::new(dst.num, back)),
                _ => Ok(Subquotient::new(back, dst.den)),
            }
        }
        FunctorExpr::TensorModule { module, .. } => {
            let inner = kid(0)?;
            let b = n.presentation.base().clone();
            let (g, k) = (module.gens, module.rel.cols);
            let gi = n.children[0].ambient.gens;
            let ug = direct_sum_sq(&vec![inner.clone(); g]);
            let uk = direct_sum_sq(&vec![inner; k]);
            let act = kron(&b, &module.rel, &identity_mat(&b, gi));
            let rel = uk.num.image(&bc.matrix(&act)?, &ug.num.moduli);
            Ok(Subquotient::new(ug.num, ug.den.sum(&rel)))
        }
        FunctorExpr::Tor1 { left, right } => super::ops::tor1_direct(left, right, bc),
        FunctorExpr::AnnOf { gens, .. } => {
            // b with aᵢ·b = 0 for every i, one multiplication matrix per generator
            let mut num = Lattice::full(&bc.alg.moduli);
            for a in gens {
                let mm = bc.elem_matrix(a)?;
                let m = Mat::from_rows(mm, bc.rank());
                num = num.preimage(&m, &Lattice::zero(&bc.alg.moduli));
            }
            Ok(Subquotient::new(num, Lattice::zero(&bc.alg.moduli)))
        }
        FunctorExpr::HomOf { .. } => carrier(&n.presentation, bc),
        FunctorExpr::CohomologyOf { complex, degree } => super::ops::cohomology_direct(complex, *degree, bc),
    }
}

/// Exact check that `transport ⊗ B` induces a bijection U/L → U′/L′.
pub fn transport_is_bijective(t: &Mat<BigInt>, direct: &Subquotient, normal: &Subquotient) -> bool {
    let img = direct.num.image(t, &normal.num.moduli).sum(&normal.den);
    if img != normal.num {
        return false;
    }
    let back = direct.num.preimage(t, &normal.den);
    back == direct.den
}

/// Outcome of comparing direct and normalized evaluations of every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeCheck {
    pub kind: &'static str,
    pub ok: bool,
    pub invariants: Vec<BigInt>,
}

/// Checks every node of the tree at B; returns one record per node in
/// post-order.
pub fn check_tree(e: &FunctorExpr, n: &Normalized, alg: &TestAlgebra) -> Result<Vec<NodeCheck>> {
    let bc = BaseChange::new(n.presentation.base(), alg)?;
    let mut out = Vec::new();
    check_rec(e, n, &bc, &mut out)?;
    Ok(out)
}

fn check_rec(e: &FunctorExpr, n: &Normalized, bc: &BaseChange, out: &mut Vec<NodeCheck>) -> Result<()> {
    for (c, k) in e.children().into_iter().zip(&n.children) {
        check_rec(c, k, bc, out)?;
    }
    let direct = direct_eval(e, n, bc)?;
    let normal = carrier(&n.presentation, bc)?;
    let t = bc.matrix(&n.transport)?;
    let ok = transport_is_bijective(&t, &direct, &normal);
    out.push(NodeCheck { kind: e.kind(), ok, invariants: normal.structure().invariants() });
    Ok(())
}
