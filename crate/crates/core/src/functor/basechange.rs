//! Base change of presentations along the structure map A → B, written
//! over the coefficient group of B.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Result;
use crate::linalg::{Lattice, Mat};
use crate::module::FPModule;
use crate::ring::{AlgElem, BaseRing, RingElement, TestAlgebra};

pub struct BaseChange<'a> {
    pub base: BaseRing,
    pub alg: &'a TestAlgebra,
    cache: RefCell<HashMap<RingElement, Vec<Vec<BigInt>>>>,
}

impl<'a> BaseChange<'a> {
    pub fn new(base: &BaseRing, alg: &'a TestAlgebra) -> Result<BaseChange<'a>> {
        alg.check_base(base)?;
        Ok(BaseChange { base: base.clone(), alg, cache: RefCell::new(HashMap::new()) })
    }

    pub fn rank(&self) -> usize {
        self.alg.rank()
    }

    pub fn image(&self, a: &RingElement) -> Result<AlgElem> {
        self.alg.image(&self.base, a)
    }

    /// Multiplication matrix of the image of `a`.
    pub fn elem_matrix(&self, a: &RingElement) -> Result<Vec<Vec<BigInt>>> {
        if let Some(m) = self.cache.borrow().get(a) {
            return Ok(m.clone());
        }
        let m = self.alg.mul_matrix(&self.image(a)?);
        self.cache.borrow_mut().insert(a.clone(), m.clone());
        Ok(m)
    }

    /// The (rows·r) × (cols·r) integer matrix of A ⊗ B; block (i, j) is the
    /// multiplication matrix of the entry (i, j).
    pub fn matrix(&self, a: &Mat<RingElement>) -> Result<Mat<BigInt>> {
        let r = self.rank();
        let mut out = Mat::filled(a.rows * r, a.cols * r, BigInt::zero());
        for i in 0..a.rows {
            for j in 0..a.cols {
                let e = a.get(i, j);
                if self.base.is_zero(e) {
                    continue;
                }
                let mm = self.elem_matrix(e)?;
                for (t, row) in mm.iter().enumerate() {
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() {
                            out.set(i * r + t, j * r + k, x.clone());
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn moduli(&self, gens: usize) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(gens * self.rank());
        for _ in 0..gens {
            v.extend(self.alg.moduli.iter().cloned());
        }
        v
    }

    /// Coefficient moduli of M ⊗ B and the subgroup spanned by the relations.
    pub fn module(&self, m: &FPModule) -> Result<(Vec<BigInt>, Lattice)> {
        let moduli = self.moduli(m.gens);
        let rb = self.matrix(&m.rel)?;
        let den = Lattice::span(&moduli, (0..rb.cols).map(|j| rb.col(j)));
        Ok((moduli, den))
    }

    /// The vector of x ⊗ β for x ∈ A^gens given by base elements and β ∈ B.
    pub fn embed(&self, x: &[RingElement], beta: &AlgElem) -> Result<Vec<BigInt>> {
        let r = self.rank();
        let mut v = vec![BigInt::zero(); x.len() * r];
        for (i, e) in x.iter().enumerate() {
            let p = self.alg.mul(&self.image(e)?, beta);
            v[i * r..(i + 1) * r].clone_from_slice(&p);
        }
        Ok(v)
    }
}
