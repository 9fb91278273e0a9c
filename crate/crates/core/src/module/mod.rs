//! Finitely presented modules and maps over Euclidean bases.

pub mod lift;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use lift::{base_mat_mul, Lift};

use crate::arith::{big, binomial, prime_power};
use crate::error::{Error, Result};
use crate::linalg::{kernel, smith, solve, Euclid, Mat};
use crate::ring::{BaseRing, RingElement};

/// coker(relations: base^r -> base^gens).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FPModule {
    pub base: BaseRing,
    pub gens: usize,
    pub rel: Mat<RingElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleMap {
    pub source: FPModule,
    pub target: FPModule,
    pub matrix: Mat<RingElement>,
}

pub fn zero_mat(base: &BaseRing, r: usize, c: usize) -> Mat<RingElement> {
    Mat::filled(r, c, base.zero())
}

pub fn identity_mat(base: &BaseRing, n: usize) -> Mat<RingElement> {
    Mat::from_fn(n, n, |i, j| if i == j { base.one() } else { base.zero() })
}

pub fn int_mat(base: &BaseRing, rows: &[&[i64]], cols: usize) -> Mat<RingElement> {
    Mat::from_rows(
        rows.iter().map(|r| r.iter().map(|&x| base.from_i64(x)).collect()).collect(),
        cols,
    )
}

pub fn canon_mat(base: &BaseRing, a: &Mat<RingElement>) -> Mat<RingElement> {
    Mat::from_fn(a.rows, a.cols, |i, j| match a.get(i, j) {
        RingElement::Int(v) => base.from_int(v.clone()),
        other => other.clone(),
    })
}

pub fn mat_sub(base: &BaseRing, a: &Mat<RingElement>, b: &Mat<RingElement>) -> Mat<RingElement> {
    Mat::from_fn(a.rows, a.cols, |i, j| base.sub(a.get(i, j), b.get(i, j)))
}

pub fn mat_add(base: &BaseRing, a: &Mat<RingElement>, b: &Mat<RingElement>) -> Mat<RingElement> {
    Mat::from_fn(a.rows, a.cols, |i, j| base.add(a.get(i, j), b.get(i, j)))
}

pub fn mat_neg(base: &BaseRing, a: &Mat<RingElement>) -> Mat<RingElement> {
    Mat::from_fn(a.rows, a.cols, |i, j| base.neg(a.get(i, j)))
}

/// Kronecker product.
pub fn kron(base: &BaseRing, a: &Mat<RingElement>, b: &Mat<RingElement>) -> Mat<RingElement> {
    Mat::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        base.mul(a.get(i / b.rows, j / b.cols), b.get(i % b.rows, j % b.cols))
    })
}

impl FPModule {
    pub fn new(base: &BaseRing, gens: usize, rel: Mat<RingElement>) -> Result<FPModule> {
        if rel.rows != gens {
            return Err(Error::Invalid(format!(
                "relation matrix has {} rows, expected {gens}",
                rel.rows
            )));
        }
        Ok(FPModule { base: base.clone(), gens, rel: canon_mat(base, &rel) })
    }

    pub fn free(base: &BaseRing, n: usize) -> FPModule {
        FPModule { base: base.clone(), gens: n, rel: zero_mat(base, n, 0) }
    }

    pub fn zero(base: &BaseRing) -> FPModule {
        FPModule::free(base, 0)
    }

    /// base / (a).
    pub fn cyclic(base: &BaseRing, a: RingElement) -> FPModule {
        FPModule { base: base.clone(), gens: 1, rel: Mat::from_rows(vec![vec![a]], 1) }
    }

    /// base^n / diag.
    pub fn diagonal(base: &BaseRing, d: &[RingElement]) -> FPModule {
        let n = d.len();
        FPModule {
            base: base.clone(),
            gens: n,
            rel: Mat::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { base.zero() }),
        }
    }

    pub fn lift(&self) -> Result<Lift> {
        Lift::new(&self.base)
    }

    /// Relations plus `m·I` when the base is Z/m or F_p, over the lifted ring.
    pub fn presentation(&self, l: &Lift) -> Mat<RingElement> {
        match l.modulus() {
            None => self.rel.clone(),
            Some(m) => {
                let mi = l.scalar_mat(self.gens, &RingElement::Int(m));
                self.rel.hcat(&mi)
            }
        }
    }

    pub fn direct_sum(&self, other: &FPModule) -> FPModule {
        FPModule {
            base: self.base.clone(),
            gens: self.gens + other.gens,
            rel: Mat::block_diag(&[&self.rel, &other.rel], self.base.zero()),
        }
    }

    pub fn direct_sum_all(base: &BaseRing, ms: &[&FPModule]) -> FPModule {
        ms.iter().fold(FPModule::zero(base), |acc, m| acc.direct_sum(m))
    }

    pub fn tensor(&self, other: &FPModule) -> FPModule {
        let b = &self.base;
        let r1 = kron(b, &self.rel, &identity_mat(b, other.gens));
        let r2 = kron(b, &identity_mat(b, self.gens), &other.rel);
        FPModule { base: b.clone(), gens: self.gens * other.gens, rel: r1.hcat(&r2) }
    }

    /// d_1 | d_2 | ... (units dropped) followed by one 0 per free summand.
    pub fn invariant_factors(&self) -> Result<Vec<RingElement>> {
        let l = self.lift()?;
        let p = self.presentation(&l);
        let s = smith(&l, &p);
        let mut out = Vec::new();
        for i in 0..s.rank {
            let d = s.d.get(i, i);
            if !l.is_unit(d) {
                out.push(d.clone());
            }
        }
        for _ in s.rank..self.gens {
            out.push(l.zero());
        }
        Ok(out)
    }

    /// `invariant_factors` rendered as strings.
    pub fn invariant_strings(&self) -> Result<Vec<String>> {
        let l = self.lift()?;
        Ok(self
            .invariant_factors()?
            .iter()
            .map(|d| l.lifted_ring().render(d))
            .collect())
    }

    pub fn is_zero_module(&self) -> Result<bool> {
        Ok(self.invariant_factors()?.is_empty())
    }

    /// Is `x` (a column of length gens) zero in the module?
    pub fn is_zero_element(&self, x: &[RingElement]) -> Result<bool> {
        let l = self.lift()?;
        let p = self.presentation(&l);
        let b = Mat::from_fn(self.gens, 1, |i, _| x[i].clone());
        if self.gens == 0 {
            return Ok(true);
        }
        Ok(solve(&l, &p, &b).is_some())
    }

    /// Minimal generator count over a local Euclidean base (Z/p^e or F_p).
    pub fn min_generators(&self) -> Result<usize> {
        match &self.base {
            BaseRing::PrimeField(_) => {}
            BaseRing::IntegersMod(m) if prime_power(m).is_some() => {}
            other => return Err(Error::NotLocal(format!("{other} is not a local ring"))),
        }
        Ok(self.invariant_factors()?.len())
    }

    /// Orders p^{l_i} of a cyclic decomposition over Z/p^e, as exponents l_i.
    pub fn cyclic_decomposition_tdvr(&self) -> Result<Vec<u32>> {
        let BaseRing::IntegersMod(m) = &self.base else {
            return Err(Error::Invalid(format!("{} is not Z/p^e", self.base)));
        };
        let (p, e) = prime_power(m).ok_or_else(|| Error::Invalid(format!("{m} is not a prime power")))?;
        let mut out = Vec::new();
        for d in self.invariant_factors()? {
            let mut v = d.as_int().clone();
            if v.is_zero() {
                out.push(e);
                continue;
            }
            let mut l = 0;
            while (&v % &p).is_zero() {
                v /= &p;
                l += 1;
            }
            out.push(l.min(e));
        }
        Ok(out)
    }
}

impl ModuleMap {
    pub fn new(source: &FPModule, target: &FPModule, matrix: Mat<RingElement>) -> Result<ModuleMap> {
        if matrix.rows != target.gens || matrix.cols != source.gens {
            return Err(Error::Invalid(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows, matrix.cols, target.gens, source.gens
            )));
        }
        if source.base != target.base {
            return Err(Error::Invalid("maps must stay over one base ring".into()));
        }
        let matrix = canon_mat(&source.base, &matrix);
        let f = ModuleMap { source: source.clone(), target: target.clone(), matrix };
        f.check()?;
        Ok(f)
    }

    /// Non-Euclidean bases: the caller supplies Y with F·R_M = R_N·Y.
    pub fn with_witness(
        source: &FPModule,
        target: &FPModule,
        matrix: Mat<RingElement>,
        y: &Mat<RingElement>,
    ) -> Result<ModuleMap> {
        let b = &source.base;
        let lhs = base_mat_mul(b, &matrix, &source.rel);
        let rhs = base_mat_mul(b, &target.rel, y);
        if lhs != rhs {
            return Err(Error::Invalid("witness does not certify well-definedness".into()));
        }
        Ok(ModuleMap { source: source.clone(), target: target.clone(), matrix: canon_mat(b, &matrix) })
    }

    fn check(&self) -> Result<()> {
        if self.source.gens == 0 || self.source.rel.cols == 0 {
            return Ok(());
        }
        let l = match self.source.lift() {
            Ok(l) => l,
            Err(_) => {
                return Err(Error::NotEuclidean(format!(
                    "{}: supply a witness with ModuleMap::with_witness",
                    self.source.base
                )))
            }
        };
        let img = l.mat_mul(&self.matrix, &self.source.rel);
        let pt = self.target.presentation(&l);
        if self.target.gens == 0 {
            return Ok(());
        }
        if solve(&l, &pt, &img).is_none() {
            return Err(Error::Invalid("matrix does not respect the source relations".into()));
        }
        Ok(())
    }

    pub fn identity(m: &FPModule) -> ModuleMap {
        ModuleMap { source: m.clone(), target: m.clone(), matrix: identity_mat(&m.base, m.gens) }
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> ModuleMap {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: zero_mat(&source.base, target.gens, source.gens),
        }
    }

    pub fn compose(&self, first: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: base_mat_mul(&self.source.base, &self.matrix, &first.matrix),
        }
    }

    pub fn base(&self) -> &BaseRing {
        &self.source.base
    }

    /// Equality as maps: the difference lands in the target relations.
    pub fn equals(&self, other: &ModuleMap) -> Result<bool> {
        let b = self.base();
        let diff = mat_sub(b, &self.matrix, &other.matrix);
        let l = self.target.lift()?;
        if self.target.gens == 0 || diff.cols == 0 {
            return Ok(true);
        }
        Ok(solve(&l, &self.target.presentation(&l), &diff).is_some())
    }

    pub fn direct_sum(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.direct_sum(&other.source),
            target: self.target.direct_sum(&other.target),
            matrix: Mat::block_diag(&[&self.matrix, &other.matrix], self.base().zero()),
        }
    }

    /// Kernel module with its inclusion into the source.
    pub fn kernel(&self) -> Result<(FPModule, ModuleMap)> {
        let l = self.source.lift()?;
        let b = self.base().clone();
        let gm = self.source.gens;
        if gm == 0 {
            let k = FPModule::zero(&b);
            return Ok((k.clone(), ModuleMap::zero(&k, &self.source)));
        }
        let pn = self.target.presentation(&l);
        let big = self.matrix.hcat(&l.mat_neg(&pn));
        let kb = kernel(&l, &big);
        let rows: Vec<usize> = (0..gm).collect();
        let kg = kb.select_rows(&rows);
        // drop zero generators
        let keep: Vec<usize> = (0..kg.cols).filter(|&j| (0..gm).any(|i| !l.is_zero(kg.get(i, j)))).collect();
        let kg = kg.select_cols(&keep);
        let s = kg.cols;
        let pm = self.source.presentation(&l);
        let syz = kernel(&l, &kg.hcat(&pm));
        let rel = syz.select_rows(&(0..s).collect::<Vec<_>>());
        let kmod = FPModule::new(&b, s, l.down_mat(&rel))?;
        let incl = ModuleMap { source: kmod.clone(), target: self.source.clone(), matrix: l.down_mat(&kg) };
        Ok((kmod, incl))
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> (FPModule, ModuleMap) {
        let c = FPModule {
            base: self.base().clone(),
            gens: self.target.gens,
            rel: self.target.rel.hcat(&self.matrix),
        };
        let proj = ModuleMap {
            source: self.target.clone(),
            target: c.clone(),
            matrix: identity_mat(self.base(), self.target.gens),
        };
        (c, proj)
    }

    /// Image as source / kernel, with the epimorphism from the source and the
    /// monomorphism into the target.
    pub fn image(&self) -> Result<(FPModule, ModuleMap, ModuleMap)> {
        let (_, incl) = self.kernel()?;
        let im = FPModule {
            base: self.base().clone(),
            gens: self.source.gens,
            rel: self.source.rel.hcat(&incl.matrix),
        };
        let epi = ModuleMap {
            source: self.source.clone(),
            target: im.clone(),
            matrix: identity_mat(self.base(), self.source.gens),
        };
        let mono = ModuleMap { source: im.clone(), target: self.target.clone(), matrix: self.matrix.clone() };
        Ok((im, epi, mono))
    }

    pub fn is_injective(&self) -> Result<bool> {
        self.kernel()?.0.is_zero_module()
    }

    pub fn is_surjective(&self) -> Result<bool> {
        self.cokernel().0.is_zero_module()
    }
}

/// D = (M ⊕ N) / {(f p, -g p)} with the two structure maps.
pub fn pushout(f: &ModuleMap, g: &ModuleMap) -> Result<(FPModule, ModuleMap, ModuleMap)> {
    if f.source != g.source {
        return Err(Error::Invalid("pushout needs a common source".into()));
    }
    let b = f.base();
    let (m, n) = (&f.target, &g.target);
    let stacked = f.matrix.vcat(&mat_neg(b, &g.matrix));
    let rel = Mat::block_diag(&[&m.rel, &n.rel], b.zero()).hcat(&stacked);
    let d = FPModule { base: b.clone(), gens: m.gens + n.gens, rel };
    let im = Mat::from_fn(d.gens, m.gens, |i, j| if i == j { b.one() } else { b.zero() });
    let inn = Mat::from_fn(d.gens, n.gens, |i, j| if i == j + m.gens { b.one() } else { b.zero() });
    let jm = ModuleMap { source: m.clone(), target: d.clone(), matrix: im };
    let jn = ModuleMap { source: n.clone(), target: d.clone(), matrix: inn };
    Ok((d, jm, jn))
}

/// λ(A/m^{n+1}) for A = k[x_1..x_d] localized at the origin: C(n+d, d).
pub fn length_and_hs(d: u32, n: u32) -> BigInt {
    binomial((n + d) as i64, d as i64)
}

/// Invariant factors of a diagonal presentation regrouped by CRT, used as an
/// oracle: d_1 | d_2 | ... from a list of cyclic orders over Z.
pub fn regroup_cyclic_orders(orders: &[BigInt]) -> Vec<BigInt> {
    let mut primes: std::collections::BTreeMap<BigInt, Vec<u32>> = Default::default();
    let mut free = 0usize;
    for o in orders {
        if o.is_zero() {
            free += 1;
            continue;
        }
        for (p, e) in crate::arith::factor(o) {
            primes.entry(p).or_default().push(e);
        }
    }
    let len = primes.values().map(|v| v.len()).max().unwrap_or(0);
    let mut out = vec![BigInt::one(); len];
    for (p, mut es) in primes {
        es.sort_unstable_by(|a, b| b.cmp(a));
        for (i, e) in es.into_iter().enumerate() {
            out[len - 1 - i] *= crate::arith::pow(&p, e as u64);
        }
    }
    out.extend(std::iter::repeat(big(0)).take(free));
    out
}


impl FPModule {
    /// The underlying abelian group when the base is Z, Z/m or F_p:
    /// Z^gens/Λ modulo the relation columns.
    pub fn to_subquotient(&self) -> Result<crate::linalg::Subquotient> {
        use crate::linalg::{Lattice, Subquotient};
        let m = match &self.base {
            BaseRing::Integers => BigInt::zero(),
            BaseRing::IntegersMod(m) | BaseRing::PrimeField(m) => m.clone(),
            other => return Err(Error::Unsupported(format!("{other} modules are not finitely generated groups"))),
        };
        let moduli = vec![m; self.gens];
        let den = Lattice::span(&moduli, (0..self.rel.cols).map(|j| self.rel.col(j).iter().map(|x| x.as_int().clone()).collect()));
        Ok(Subquotient::new(Lattice::full(&moduli), den))
    }
}
