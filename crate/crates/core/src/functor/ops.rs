//! Tensor with a module, Tor₁, annihilators, cohomology of complexes and
//! the evaluated tensor F(B) ⊗_B G(B).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{carrier, cokernel_of_morphism, act_blockwise, BaseChange, FunctorPresentation, MorphismSquare};
use crate::error::{Error, Result};
use crate::linalg::{Lattice, Mat, Subquotient};
use crate::module::{identity_mat, kron, zero_mat, FPModule, ModuleMap};
use crate::ring::{BaseRing, RingElement, TestAlgebra};

/// A presentation with the map j: M′ → D through which the target of the
/// underlying morphism surjects onto it.
#[derive(Clone, Debug)]
pub struct WithTransport {
    pub presentation: FunctorPresentation,
    pub ambient: FPModule,
    pub transport: Mat<RingElement>,
}

fn power(p: &FunctorPresentation, n: usize) -> FunctorPresentation {
    (0..n).fold(FunctorPresentation::zero(p.base()), |acc, _| acc.direct_sum(p))
}

/// F ⊗ M̲ as the cokernel of F^k → F^n for a presentation A^k → A^n → M.
/// The transport is the map from F's ambient to the n-fold sum.
pub fn tensor_with_module(f: &FunctorPresentation, m: &FPModule) -> Result<WithTransport> {
    let b = f.base().clone();
    if m.base != b {
        return Err(Error::Invalid("module and functor live over different bases".into()));
    }
    let (n, k) = (m.gens, m.rel.cols);
    let fnn = power(f, n);
    let fk = power(f, k);
    let phi = kron(&b, &m.rel, &identity_mat(&b, f.source().gens));
    let psi = kron(&b, &m.rel, &identity_mat(&b, f.target().gens));
    let sq = MorphismSquare::new(&fk, &fnn, phi, psi)?;
    let c = cokernel_of_morphism(&sq)?;
    Ok(WithTransport { presentation: c.presentation, ambient: fnn.source().clone(), transport: c.j.matrix })
}

/// Tor₁(M, N): with K = Ker(A^g → M), the kernel of K ⊗ N̲ → A̲^g ⊗ N̲,
/// written as the cokernel of K^k → Ker(K^n → N̲^g). The ambient of the
/// direct evaluation is N^r (one copy per relation of M).
pub fn tor1_functor(m: &FPModule, n: &FPModule) -> Result<WithTransport> {
    let b = m.base.clone();
    if n.base != b {
        return Err(Error::Invalid("Tor operands live over different bases".into()));
    }
    let (g, r) = (m.gens, m.rel.cols);
    let (gn, kn) = (n.gens, n.rel.cols);
    let free = FPModule::free(&b, g);
    let pi = ModuleMap::new(&free, m, identity_mat(&b, g))?;
    let kf = FunctorPresentation::new(pi);
    let kgn = power(&kf, gn);
    let kkn = power(&kf, kn);
    // α on ambients: copy j, coordinate i ↦ e_j in copy i of N^g
    let ng = (0..g).fold(FPModule::zero(&b), |acc, _| acc.direct_sum(n));
    let mut alpha = zero_mat(&b, g * gn, g * gn);
    for j in 0..gn {
        for i in 0..g {
            alpha.set(i * gn + j, j * g + i, b.one());
        }
    }
    let ker_alpha = FunctorPresentation::stacked(kgn.source(), &[(kgn.target(), &kgn.f.matrix), (&ng, &alpha)])?;
    let phi = kron(&b, &n.rel, &identity_mat(&b, g));
    let psi = phi.vcat(&zero_mat(&b, g * gn, g * kn));
    let sq = MorphismSquare::new(&kkn, &ker_alpha, phi, psi)?;
    let c = cokernel_of_morphism(&sq)?;
    // y ∈ N^r ↦ x with x_{(j,i)} = Σ_l R_M[i,l] y_{(l,j)}
    let mut x = zero_mat(&b, g * gn, r * gn);
    for j in 0..gn {
        for i in 0..g {
            for l in 0..r {
                x.set(j * g + i, l * gn + j, m.rel.get(i, l).clone());
            }
        }
    }
    let transport = super::mat_mul(&b, &c.j.matrix, &x);
    let ambient = (0..r).fold(FPModule::zero(&b), |acc, _| acc.direct_sum(n));
    Ok(WithTransport { presentation: c.presentation, ambient, transport })
}

/// Tor₁^B(M_B, N_B) from the start of a free B-resolution of M_B:
/// ker(R_M ⊗ N_B) / (syzygies of R_M over B) · N_B, inside N_B^r.
pub fn tor1_direct(m: &FPModule, n: &FPModule, bc: &BaseChange) -> Result<Subquotient> {
    let b = m.base.clone();
    let (g, r) = (m.gens, m.rel.cols);
    let gn = n.gens;
    let rk = bc.rank();
    let ambient = (0..r).fold(FPModule::zero(&b), |acc, _| acc.direct_sum(n));
    let ng = (0..g).fold(FPModule::zero(&b), |acc, _| acc.direct_sum(n));
    let (am, den_amb) = bc.module(&ambient)?;
    let (_, den_ng) = bc.module(&ng)?;
    let act = kron(&b, &m.rel, &identity_mat(&b, gn));
    let num = Lattice::full(&am).preimage(&bc.matrix(&act)?, &den_ng);
    // syzygies of R_M over B
    let rb = bc.matrix(&m.rel)?;
    let syz = Lattice::full(&bc.moduli(r)).preimage(&rb, &Lattice::zero(&bc.moduli(g)));
    let mut gens = Vec::new();
    for z in &syz.rows {
        for j in 0..gn {
            for k in 0..rk {
                let beta = bc.alg.basis_elem(k);
                let mut v = vec![BigInt::zero(); am.len()];
                for l in 0..r {
                    let zl = &z[l * rk..(l + 1) * rk];
                    let p = bc.alg.mul(&zl.to_vec(), &beta);
                    v[(l * gn + j) * rk..(l * gn + j + 1) * rk].clone_from_slice(&p);
                }
                gens.push(v);
            }
        }
    }
    let den = den_amb.sum(&Lattice::span(&am, gens));
    Ok(Subquotient::new(num, den))
}

/// Ann(a₁..aₙ) = Ker(A → Aⁿ, x ↦ (aᵢx)).
pub fn ann_functor(base: &BaseRing, gens: &[RingElement]) -> Result<FunctorPresentation> {
    let col = Mat::from_fn(gens.len(), 1, |i, _| gens[i].clone());
    let f = ModuleMap::new(&FPModule::free(base, 1), &FPModule::free(base, gens.len()), col)?;
    Ok(FunctorPresentation::new(f))
}

fn check_complex(complex: &[ModuleMap]) -> Result<()> {
    for w in complex.windows(2) {
        if w[0].target != w[1].source {
            return Err(Error::Invalid("consecutive maps of the complex do not compose".into()));
        }
        let comp = w[1].compose(&w[0]);
        if !comp.equals(&ModuleMap::zero(&w[0].source, &w[1].target))? {
            return Err(Error::Invalid("d∘d ≠ 0".into()));
        }
    }
    Ok(())
}

fn term(complex: &[ModuleMap], i: usize) -> &FPModule {
    if i < complex.len() {
        &complex[i].source
    } else {
        &complex[complex.len() - 1].target
    }
}

/// B ↦ H^n(K ⊗ B) for K⁰ → K¹ → … given by `complex[i]: Kⁱ → Kⁱ⁺¹`, as the
/// cokernel of K̲ⁿ⁻¹ → Ker(dⁿ).
pub fn cohomology_functor(complex: &[ModuleMap], n: usize) -> Result<WithTransport> {
    if complex.is_empty() {
        return Err(Error::Invalid("a complex needs at least one map".into()));
    }
    check_complex(complex)?;
    if n > complex.len() {
        return Err(Error::Invalid(format!("degree {n} is outside the complex")));
    }
    let kn = term(complex, n).clone();
    let b = kn.base.clone();
    let dn = if n < complex.len() {
        complex[n].clone()
    } else {
        ModuleMap::zero(&kn, &FPModule::zero(&b))
    };
    let ker = FunctorPresentation::new(dn);
    if n == 0 {
        let t = identity_mat(&b, kn.gens);
        return Ok(WithTransport { presentation: ker, ambient: kn, transport: t });
    }
    let prev = FunctorPresentation::strict(term(complex, n - 1));
    let psi = zero_mat(&b, ker.target().gens, 0);
    let sq = MorphismSquare::new(&prev, &ker, complex[n - 1].matrix.clone(), psi)?;
    let c = cokernel_of_morphism(&sq)?;
    Ok(WithTransport { presentation: c.presentation, ambient: kn, transport: c.j.matrix })
}

/// ker(dⁿ ⊗ B) / im(dⁿ⁻¹ ⊗ B).
pub fn cohomology_direct(complex: &[ModuleMap], n: usize, bc: &BaseChange) -> Result<Subquotient> {
    let kn = term(complex, n);
    let (km, den) = bc.module(kn)?;
    let mut num = Lattice::full(&km);
    if n < complex.len() {
        let (_, den_next) = bc.module(&complex[n].target)?;
        num = num.preimage(&bc.matrix(&complex[n].matrix)?, &den_next);
    }
    let mut l = den;
    if n > 0 {
        let prev = term(complex, n - 1);
        let pm = bc.moduli(prev.gens);
        l = l.sum(&Lattice::full(&pm).image(&bc.matrix(&complex[n - 1].matrix)?, &km));
    }
    Ok(Subquotient::new(num, l))
}

/// F(B) ⊗_B G(B).
#[derive(Clone, Debug)]
pub struct TensorEval {
    /// μ of the tensor from its presentation over B (local B only).
    pub mu: Option<usize>,
    /// μ(F(B)) · μ(G(B)) (local B only).
    pub mu_product: Option<usize>,
    /// Invariant factors of the full tensor as a coefficient group, when it
    /// was small enough to build.
    pub invariants: Option<Vec<BigInt>>,
    /// μ of the fully built tensor, when built and B is local.
    pub mu_full: Option<usize>,
}

/// Cap on (generators of F(B)) · (generators of G(B)) · rank(B) for the full
/// tensor construction.
pub const FULL_TENSOR_CAP: usize = 4_000;

pub fn eval_tensor(f: &FunctorPresentation, g: &FunctorPresentation, alg: &TestAlgebra) -> Result<TensorEval> {
    let bc = BaseChange::new(f.base(), alg)?;
    let sf = carrier(f, &bc)?;
    let sg = carrier(g, &bc)?;
    let (cf, cg) = (sf.coordinates(), sg.coordinates());
    let (a, bb) = (cf.structure.generators.len(), cg.structure.generators.len());
    let (gf, gg) = (f.source().gens, g.source().gens);
    let mut out = TensorEval { mu: None, mu_product: None, invariants: None, mu_full: None };
    if a == 0 || bb == 0 {
        out.invariants = Some(vec![]);
        if alg.local_data().is_ok() {
            out.mu = Some(0);
            out.mu_product = Some(0);
            out.mu_full = Some(0);
        }
        return Ok(out);
    }
    if let Ok(ld) = alg.local_data() {
        let p = ld.residue_char.clone();
        let mf = super::local_mu(alg, gf, &sf).unwrap();
        let mg = super::local_mu(alg, gg, &sg).unwrap();
        out.mu_product = Some(mf * mg);
        let pf = residue_relations(alg, gf, &sf, &cf, &p);
        let pg = residue_relations(alg, gg, &sg, &cg, &p);
        let pu = to_u64(&p);
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for rf in &pf {
            for j in 0..bb {
                let mut v = vec![0u64; a * bb];
                for i in 0..a {
                    v[i * bb + j] = rf[i];
                }
                rows.push(v);
            }
        }
        for rg in &pg {
            for i in 0..a {
                let mut v = vec![0u64; a * bb];
                for j in 0..bb {
                    v[i * bb + j] = rg[j];
                }
                rows.push(v);
            }
        }
        out.mu = Some(a * bb - crate::counterexamples::fp::rank(&mut rows, pu));
    }
    if a * bb * alg.rank() <= FULL_TENSOR_CAP {
        let (sqt, act) = full_tensor(alg, gf, &sf, &cf, gg, &sg, &cg);
        out.invariants = Some(sqt.structure().invariants());
        if let Ok(ld) = alg.local_data() {
            let mut rad = Vec::new();
            for r in &ld.radical {
                for u in &sqt.num.rows {
                    rad.push(act(r, u));
                }
            }
            let den = sqt.den.sum(&Lattice::span(&sqt.num.moduli, rad));
            out.mu_full = Some(Subquotient::new(sqt.num.clone(), den).structure().torsion.len());
        }
    }
    Ok(out)
}

fn to_u64(p: &BigInt) -> u64 {
    u64::try_from(p).expect("residue characteristic fits in u64")
}

/// Relations among the cyclic generators of U/L modulo rad·U + L, reduced
/// mod p: a basis of {c ∈ F_p^a : Σ cᵢ gᵢ ∈ rad·U + L}.
fn residue_relations(
    alg: &TestAlgebra,
    gens: usize,
    sq: &Subquotient,
    co: &crate::linalg::Coords,
    p: &BigInt,
) -> Vec<Vec<u64>> {
    let ld = alg.local_data().unwrap();
    let mats: Vec<Vec<Vec<BigInt>>> = ld.radical.iter().map(|r| alg.mul_matrix(r)).collect();
    let mut rad = Vec::new();
    for u in &sq.num.rows {
        for m in &mats {
            rad.push(act_blockwise(m, gens, u));
        }
    }
    let q = Subquotient::new(sq.num.clone(), sq.den.sum(&Lattice::span(&sq.num.moduli, rad)));
    let qc = q.coordinates();
    let pu = to_u64(p);
    // images of the generators in the residue space
    let imgs: Vec<Vec<u64>> = co
        .structure
        .generators
        .iter()
        .map(|(_, g)| qc.of(g).iter().map(|x| to_u64(&x.mod_floor(p))).collect())
        .collect();
    crate::counterexamples::fp::left_kernel(&imgs, qc.structure.generators.len(), pu)
}

type ActFn<'a> = Box<dyn Fn(&Vec<BigInt>, &Vec<BigInt>) -> Vec<BigInt> + 'a>;

/// The full tensor U/L ⊗_B U′/L′ as a quotient of the Z-tensor of the two
/// cyclic decompositions by the balancing relations, with the B-action.
fn full_tensor<'a>(
    alg: &'a TestAlgebra,
    gf: usize,
    sf: &Subquotient,
    cf: &'a crate::linalg::Coords,
    gg: usize,
    sg: &Subquotient,
    cg: &'a crate::linalg::Coords,
) -> (Subquotient, ActFn<'a>) {
    let _ = (sf, sg);
    let gens_f: Vec<(BigInt, Vec<BigInt>)> = cf.structure.generators.clone();
    let gens_g: Vec<(BigInt, Vec<BigInt>)> = cg.structure.generators.clone();
    let (a, bb) = (gens_f.len(), gens_g.len());
    let moduli: Vec<BigInt> = (0..a * bb).map(|t| gens_f[t / bb].0.gcd(&gens_g[t % bb].0)).collect();
    let mut rels = Vec::new();
    for k in 0..alg.rank() {
        let mm = alg.mul_matrix(&alg.basis_elem(k));
        let bf: Vec<Vec<BigInt>> = gens_f.iter().map(|(_, x)| cf.of(&act_blockwise(&mm, gf, x))).collect();
        let bg: Vec<Vec<BigInt>> = gens_g.iter().map(|(_, y)| cg.of(&act_blockwise(&mm, gg, y))).collect();
        for i in 0..a {
            for j in 0..bb {
                let mut v = vec![BigInt::zero(); a * bb];
                for (s, c) in bf[i].iter().enumerate() {
                    v[s * bb + j] += c;
                }
                for (t, c) in bg[j].iter().enumerate() {
                    v[i * bb + t] -= c;
                }
                rels.push(v);
            }
        }
    }
    let sq = Subquotient::new(Lattice::full(&moduli), Lattice::span(&moduli, rels));
    let act: ActFn<'a> = Box::new(move |r: &Vec<BigInt>, u: &Vec<BigInt>| {
        let mm = alg.mul_matrix(r);
        let mut v = vec![BigInt::zero(); a * bb];
        for i in 0..a {
            for j in 0..bb {
                let c = &u[i * bb + j];
                if c.is_zero() {
                    continue;
                }
                let img = cf.of(&act_blockwise(&mm, gf, &gens_f[i].1));
                for (s, x) in img.iter().enumerate() {
                    v[s * bb + j] += c * x;
                }
            }
        }
        v
    });
    (sq, act)
}
