//! Hom(F, G) from a right exact linear cover L₂ → L₁ → F, elements with
//! their actions, and End(F)(B).

use num_bigint::BigInt;
use num_traits::Zero;

use super::{carrier, dominate_linear, BaseChange, EvaluatedModule, FunctorPresentation, LinearRep, MorphismSquare};
use crate::error::{Error, Result};
use crate::linalg::lattice::{mat_vec, solve_mod};
use crate::linalg::{Lattice, Mat, Subquotient};
use crate::module::{identity_mat, kron, FPModule, ModuleMap};
use crate::ring::{AlgElem, RingElement, TestAlgebra};

#[derive(Clone, Debug)]
pub struct HomFunctor {
    pub source: FunctorPresentation,
    pub target: FunctorPresentation,
    pub l1: LinearRep,
    pub l2: LinearRep,
    /// L₂ → L₁ on ambients (n₁ × n₂).
    pub e2: Mat<RingElement>,
    /// Ker(M′⊗C₁(L₁) → M′⊗C₁(L₂) ⊕ N′⊗C₁(L₁)); generator (i, j) of the
    /// source is the matrix unit at row i of M′ and column j of A^{n₁}.
    pub presentation: FunctorPresentation,
}

/// An element of Hom(F, G)(B) as a gens(M′) × n₁ matrix over B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomElement {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<AlgElem>,
}

impl HomElement {
    pub fn from_vector(rows: usize, cols: usize, rank: usize, v: &[BigInt]) -> HomElement {
        let entries = (0..rows * cols).map(|t| v[t * rank..(t + 1) * rank].to_vec()).collect();
        HomElement { rows, cols, entries }
    }

    pub fn to_vector(&self) -> Vec<BigInt> {
        self.entries.iter().flatten().cloned().collect()
    }

    pub fn get(&self, i: usize, j: usize) -> &AlgElem {
        &self.entries[i * self.cols + j]
    }
}

pub fn hom_functor(f: &FunctorPresentation, g: &FunctorPresentation) -> Result<HomFunctor> {
    let b = f.base().clone();
    if g.base() != &b {
        return Err(Error::Invalid("Hom operands live over different bases".into()));
    }
    let l1 = dominate_linear(f);
    // K = Ker(L₁ → F) = Ker(A^{n₁} → A^{k₁} ⊕ M)
    let a1 = FPModule::free(&b, l1.n);
    let tgt = FPModule::free(&b, l1.k).direct_sum(f.source());
    let kmap = ModuleMap::new(&a1, &tgt, l1.h.vcat(&l1.epi))?;
    let kp = FunctorPresentation::new(kmap);
    let l2 = dominate_linear(&kp);
    let e2 = l2.epi.clone();
    let (mt, nt) = (g.source(), g.target());
    let c1 = &l1.c1;
    let c2 = &l2.c1;
    let src = mt.tensor(c1);
    let t1 = mt.tensor(c2);
    let t2 = nt.tensor(c1);
    let to_l2 = kron(&b, &identity_mat(&b, mt.gens), &e2.transpose());
    let to_n = kron(&b, &g.f.matrix, &identity_mat(&b, l1.n));
    let presentation = FunctorPresentation::stacked(&src, &[(&t1, &to_l2), (&t2, &to_n)])?;
    Ok(HomFunctor { source: f.clone(), target: g.clone(), l1, l2, e2, presentation })
}

impl HomFunctor {
    pub fn rows(&self) -> usize {
        self.target.source().gens
    }

    pub fn cols(&self) -> usize {
        self.l1.n
    }

    /// The element induced by a square: φ composed with the cover.
    pub fn element_of_square(&self, sq: &MorphismSquare) -> Mat<RingElement> {
        super::mat_mul(self.source.base(), &sq.phi.matrix, &self.l1.epi)
    }

    pub fn element_at(&self, x: &Mat<RingElement>, bc: &BaseChange) -> Result<HomElement> {
        let mut entries = Vec::with_capacity(x.rows * x.cols);
        for i in 0..x.rows {
            for j in 0..x.cols {
                entries.push(bc.image(x.get(i, j))?);
            }
        }
        Ok(HomElement { rows: x.rows, cols: x.cols, entries })
    }

    pub fn eval(&self, alg: &TestAlgebra) -> Result<EvaluatedModule> {
        super::eval(&self.presentation, alg)
    }

    /// Lifts x ∈ F(B) ⊆ M ⊗ B to a ∈ L₁(B) ⊆ B^{n₁}.
    pub fn lift(&self, x: &[BigInt], bc: &BaseChange) -> Result<Vec<BigInt>> {
        let p = &self.source;
        let e = &p.target().rel;
        let rk = bc.rank();
        if e.cols == 0 {
            return Ok(x.to_vec());
        }
        let eb = bc.matrix(e)?;
        let fx = mat_vec(&bc.matrix(&p.f.matrix)?, x);
        let tgt = Lattice::zero(&bc.moduli(p.target().gens));
        let c = solve_mod(&eb, &bc.moduli(e.cols), &tgt, &fx)
            .ok_or_else(|| Error::Invalid("vector does not lie in F(B)".into()))?;
        let mut a = x.to_vec();
        a.extend(c);
        debug_assert_eq!(a.len(), self.l1.n * rk);
        Ok(a)
    }

    /// σ_B(x) ∈ M′ ⊗ B.
    pub fn act(&self, h: &HomElement, x: &[BigInt], bc: &BaseChange) -> Result<Vec<BigInt>> {
        let a = self.lift(x, bc)?;
        let rk = bc.rank();
        let mut out = vec![BigInt::zero(); h.rows * rk];
        for i in 0..h.rows {
            for j in 0..h.cols {
                let aj = a[j * rk..(j + 1) * rk].to_vec();
                let p = bc.alg.mul(h.get(i, j), &aj);
                for t in 0..rk {
                    out[i * rk + t] += &p[t];
                }
            }
        }
        Ok(out)
    }

    /// Checks that `h` maps F(B) into G(B), kills the relations of M ⊗ B
    /// and is additive on a basis of F(B).
    pub fn check_action(&self, h: &HomElement, bc: &BaseChange) -> Result<bool> {
        let sf = carrier(&self.source, bc)?;
        let sg = carrier(&self.target, bc)?;
        let imgs: Vec<Vec<BigInt>> = sf.num.rows.iter().map(|u| self.act(h, u, bc)).collect::<Result<_>>()?;
        if !imgs.iter().all(|v| sg.num.contains(v)) {
            return Ok(false);
        }
        for l in &sf.den.rows {
            let v = self.act(h, l, bc)?;
            if !sg.den.contains(&v) {
                return Ok(false);
            }
        }
        for (i, u) in sf.num.rows.iter().enumerate() {
            for (j, w) in sf.num.rows.iter().enumerate().skip(i) {
                let s: Vec<BigInt> = u.iter().zip(w).map(|(a, b)| a + b).collect();
                let lhs = self.act(h, &s, bc)?;
                let d: Vec<BigInt> = lhs.iter().zip(&imgs[i]).zip(&imgs[j]).map(|((a, b), c)| a - b - c).collect();
                if !sg.den.contains(&d) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// X ∘ Y for X ∈ Hom(G, H)(B) (given via `outer`) and Y ∈ Hom(F, G)(B):
    /// lift Y to W: L₁(F) → L₁(G) by solving f_G·Y = e_G·C + V·h₁(F) over B.
    pub fn compose(
        outer: &HomFunctor,
        x: &HomElement,
        inner: &HomFunctor,
        y: &HomElement,
        bc: &BaseChange,
    ) -> Result<HomElement> {
        let g = &inner.target;
        let rk = bc.rank();
        let (gm, n1) = (g.source().gens, inner.cols());
        let (gn, s) = (g.target().gens, g.target().rel.cols);
        let k1 = inner.l1.k;
        let fb = bc.matrix(&g.f.matrix)?;
        // target: f_G·Y as a (gn × n1) matrix over B, flattened row-major
        let mut rhs = vec![BigInt::zero(); gn * n1 * rk];
        for r in 0..gn {
            for q in 0..n1 {
                for p in 0..gm {
                    let fr = fb_entry(&fb, r, p, rk);
                    let v = mat_vec_small(&fr, y.get(p, q));
                    for t in 0..rk {
                        rhs[(r * n1 + q) * rk + t] += &v[t];
                    }
                }
            }
        }
        // unknowns C (s × n1) then V (gn × k1), each entry a B-element
        let nun = (s * n1 + gn * k1) * rk;
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(nun);
        let eb = bc.matrix(&g.target().rel)?;
        let hb = bc.matrix(&inner.l1.h)?;
        for pp in 0..s {
            for q in 0..n1 {
                for t in 0..rk {
                    let beta = bc.alg.basis_elem(t);
                    let mut col = vec![BigInt::zero(); gn * n1 * rk];
                    for r in 0..gn {
                        let v = mat_vec_small(&fb_entry(&eb, r, pp, rk), &beta);
                        col[(r * n1 + q) * rk..(r * n1 + q + 1) * rk].clone_from_slice(&v);
                    }
                    cols.push(col);
                }
            }
        }
        for r in 0..gn {
            for ss in 0..k1 {
                for t in 0..rk {
                    let beta = bc.alg.basis_elem(t);
                    let mut col = vec![BigInt::zero(); gn * n1 * rk];
                    for q in 0..n1 {
                        let v = mat_vec_small(&fb_entry(&hb, ss, q, rk), &beta);
                        col[(r * n1 + q) * rk..(r * n1 + q + 1) * rk].clone_from_slice(&v);
                    }
                    cols.push(col);
                }
            }
        }
        let tmod: Vec<BigInt> = bc.moduli(gn * n1);
        let smod: Vec<BigInt> = bc.moduli(s * n1 + gn * k1);
        let a = if cols.is_empty() {
            Mat::filled(tmod.len(), 0, BigInt::zero())
        } else {
            Mat::from_fn(tmod.len(), cols.len(), |i, j| cols[j][i].clone())
        };
        let sol = solve_mod(&a, &smod, &Lattice::zero(&tmod), &rhs)
            .ok_or_else(|| Error::Internal("composition lift is infeasible".into()))?;
        // W = [Y; C] : n1 → n1(G) = gm + s
        let wc = |row: usize, q: usize| -> AlgElem {
            if row < gm {
                y.get(row, q).clone()
            } else {
                let pp = row - gm;
                sol[(pp * n1 + q) * rk..(pp * n1 + q + 1) * rk].to_vec()
            }
        };
        let rows = x.rows;
        let mut entries = Vec::with_capacity(rows * n1);
        for i in 0..rows {
            for q in 0..n1 {
                let mut acc = bc.alg.zero();
                for j in 0..x.cols {
                    acc = bc.alg.add(&acc, &bc.alg.mul(x.get(i, j), &wc(j, q)));
                }
                entries.push(acc);
            }
        }
        let _ = outer;
        Ok(HomElement { rows, cols: n1, entries })
    }
}

fn fb_entry(m: &Mat<BigInt>, i: usize, j: usize, rk: usize) -> Vec<Vec<BigInt>> {
    (0..rk).map(|t| (0..rk).map(|k| m.get(i * rk + t, j * rk + k).clone()).collect()).collect()
}

fn mat_vec_small(m: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// End(F)(B) with its multiplication table and unit count.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub module: EvaluatedModule,
    /// Canonical representatives, in the order used by `table`.
    pub elements: Vec<Vec<BigInt>>,
    /// table[i][j] = index of elements[i] ∘ elements[j].
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub units: usize,
}

pub fn end_algebra(f: &FunctorPresentation, alg: &TestAlgebra, cap: usize) -> Result<EndAlgebra> {
    let h = hom_functor(f, f)?;
    let bc = BaseChange::new(f.base(), alg)?;
    let module = h.eval(alg)?;
    let elements = module
        .elements(cap)
        .ok_or_else(|| Error::CapExceeded(format!("End(F)({alg}) is infinite or larger than {cap}")))?;
    let rk = bc.rank();
    let (r, c) = (h.rows(), h.cols());
    let sq: &Subquotient = &module.carrier;
    let index = |v: &[BigInt]| -> Result<usize> {
        let red = sq.den.reduce(v);
        elements
            .binary_search(&red)
            .map_err(|_| Error::Internal("composite left End(F)(B)".into()))
    };
    let hs: Vec<HomElement> = elements.iter().map(|v| HomElement::from_vector(r, c, rk, v)).collect();
    let mut table = vec![vec![0usize; elements.len()]; elements.len()];
    for i in 0..elements.len() {
        for j in 0..elements.len() {
            let z = HomFunctor::compose(&h, &hs[i], &h, &hs[j], &bc)?;
            table[i][j] = index(&z.to_vector())?;
        }
    }
    let idm = h.element_at(&h.l1.epi, &bc)?;
    let identity = index(&idm.to_vector())?;
    let units = (0..elements.len())
        .filter(|&i| (0..elements.len()).any(|j| table[i][j] == identity && table[j][i] == identity))
        .count();
    Ok(EndAlgebra { module, elements, table, identity, units })
}

/// Hom(F, G)(B) elements applied to a square: the element is an element of
/// the evaluated Hom module.
pub fn square_is_element(h: &HomFunctor, sq: &MorphismSquare, alg: &TestAlgebra) -> Result<bool> {
    let bc = BaseChange::new(h.source.base(), alg)?;
    let x = h.element_at(&h.element_of_square(sq), &bc)?;
    Ok(carrier(&h.presentation, &bc)?.num.contains(&x.to_vector()))
}
