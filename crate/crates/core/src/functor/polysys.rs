//! Solution functors of polynomial systems with module coefficients:
//! B ↦ {b ∈ Bⁿ : every constraint vanishes in M ⊗ B}.

use num_bigint::BigInt;

use super::BaseChange;
use crate::error::{Error, Result};
use crate::linalg::Lattice;
use crate::module::FPModule;
use crate::ring::{AlgElem, Mono, RingElement, TestAlgebra};

/// One constraint Σ_α m_α x^α with m_α ∈ M (generator coordinates).
pub type Constraint = Vec<(Mono, Vec<RingElement>)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    pub nvars: usize,
    pub module: FPModule,
    pub constraints: Vec<Constraint>,
}

impl PolySystem {
    pub fn degree(&self) -> u32 {
        self.constraints.iter().flat_map(|c| c.iter().map(|(m, _)| m.degree())).max().unwrap_or(0)
    }

    /// All constraints have degree exactly 1.
    pub fn is_linear(&self) -> bool {
        self.constraints.iter().all(|c| c.iter().all(|(m, _)| m.degree() == 1))
    }
}

/// Solutions in Bⁿ by enumeration, each as a list of B-elements.
pub fn eval_poly_functor(s: &PolySystem, alg: &TestAlgebra, cap: usize) -> Result<Vec<Vec<AlgElem>>> {
    let bc = BaseChange::new(&s.module.base, alg)?;
    let (_, den) = bc.module(&s.module)?;
    let elems = alg.elements(cap)?;
    let total = (elems.len() as f64).powi(s.nvars as i32);
    if total > cap as f64 {
        return Err(Error::CapExceeded(format!("|B|^{} exceeds {cap}", s.nvars)));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; s.nvars];
    loop {
        let point: Vec<AlgElem> = idx.iter().map(|&i| elems[i].clone()).collect();
        if satisfies(s, &bc, &den, &point)? {
            out.push(point);
        }
        let mut k = 0;
        loop {
            if k == s.nvars {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn satisfies(s: &PolySystem, bc: &BaseChange, den: &Lattice, point: &[AlgElem]) -> Result<bool> {
    let alg = bc.alg;
    for c in &s.constraints {
        let mut v = vec![BigInt::from(0); s.module.gens * alg.rank()];
        for (mono, coeff) in c {
            let mut xa = alg.one();
            for (i, &e) in mono.0.iter().enumerate() {
                xa = alg.mul(&xa, &alg.pow(&point[i], e));
            }
            let w = bc.embed(coeff, &xa)?;
            for (a, b) in v.iter_mut().zip(w) {
                *a += b;
            }
        }
        if !den.contains(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The linear system as Ker(Aⁿ → M^c).
pub fn linear_presentation(s: &PolySystem) -> Result<super::FunctorPresentation> {
    if !s.is_linear() {
        return Err(Error::Invalid("system is not linear".into()));
    }
    let b = &s.module.base;
    let g = s.module.gens;
    let target = (0..s.constraints.len()).fold(FPModule::zero(b), |acc, _| acc.direct_sum(&s.module));
    let mut mat = crate::module::zero_mat(b, g * s.constraints.len(), s.nvars);
    for (ci, c) in s.constraints.iter().enumerate() {
        for (mono, coeff) in c {
            let var = mono.0.iter().position(|&e| e == 1).unwrap();
            for i in 0..g {
                let cur = mat.get(ci * g + i, var).clone();
                mat.set(ci * g + i, var, b.add(&cur, &coeff[i]));
            }
        }
    }
    let f = crate::module::ModuleMap::new(&FPModule::free(b, s.nvars), &target, mat)?;
    Ok(super::FunctorPresentation::new(f))
}
