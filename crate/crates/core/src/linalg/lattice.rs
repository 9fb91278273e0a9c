//! Subgroups of Z^D/Λ with Λ = ⊕ m_j Z (m_j = 0 allowed), kept as the
//! canonical Hermite form of the preimage lattice in Z^D.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::euclid::ZZ;
use super::mat::Mat;
use super::smith::smith;
use crate::arith::{modp, xgcd};

/// A lattice L with Λ ⊆ L ⊆ Z^D. `rows` are in echelon form with strictly
/// increasing pivots, positive pivot entries and entries above each pivot
/// reduced into [0, pivot); this form is unique, so equality is `==`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub moduli: Vec<BigInt>,
    pub rows: Vec<Vec<BigInt>>,
}

struct Echelon<'a> {
    moduli: &'a [BigInt],
    piv: Vec<Option<Vec<BigInt>>>,
}

impl<'a> Echelon<'a> {
    fn new(moduli: &'a [BigInt]) -> Self {
        let d = moduli.len();
        let piv = (0..d)
            .map(|j| {
                if moduli[j].is_zero() {
                    None
                } else {
                    let mut v = vec![BigInt::zero(); d];
                    v[j] = moduli[j].clone();
                    Some(v)
                }
            })
            .collect();
        Echelon { moduli, piv }
    }

    fn reduce_tail(&self, v: &mut [BigInt], from: usize) {
        for k in from..v.len() {
            if !self.moduli[k].is_zero() {
                v[k] = modp(&v[k], &self.moduli[k]);
            }
        }
    }

    fn insert(&mut self, mut v: Vec<BigInt>) {
        let d = v.len();
        self.reduce_tail(&mut v, 0);
        let mut j = 0;
        while j < d {
            if v[j].is_zero() {
                j += 1;
                continue;
            }
            match self.piv[j].take() {
                None => {
                    if v[j].is_negative() {
                        for x in v.iter_mut() {
                            *x = -&*x;
                        }
                        self.reduce_tail(&mut v, j + 1);
                    }
                    self.piv[j] = Some(v);
                    return;
                }
                Some(b) => {
                    let (bj, vj) = (b[j].clone(), v[j].clone());
                    if (&vj % &bj).is_zero() {
                        let q = &vj / &bj;
                        for k in j..d {
                            v[k] -= &q * &b[k];
                        }
                        self.reduce_tail(&mut v, j + 1);
                        self.piv[j] = Some(b);
                    } else {
                        let (g, s, t) = xgcd(&bj, &vj);
                        let (bg, vg) = (&bj / &g, &vj / &g);
                        let mut nb = vec![BigInt::zero(); d];
                        let mut nv = vec![BigInt::zero(); d];
                        for k in j..d {
                            nb[k] = &s * &b[k] + &t * &v[k];
                            nv[k] = &bg * &v[k] - &vg * &b[k];
                        }
                        self.reduce_tail(&mut nb, j + 1);
                        self.reduce_tail(&mut nv, j + 1);
                        self.piv[j] = Some(nb);
                        v = nv;
                    }
                    j += 1;
                }
            }
        }
    }

    fn finish(self) -> Vec<Vec<BigInt>> {
        let d = self.moduli.len();
        let mut rows: Vec<(usize, Vec<BigInt>)> =
            self.piv.into_iter().enumerate().filter_map(|(j, r)| r.map(|r| (j, r))).collect();
        // back-reduce column by column
        for idx in 0..rows.len() {
            let (j, pr) = rows[idx].clone();
            let p = pr[j].clone();
            for r in rows.iter_mut().take(idx) {
                let x = r.1[j].clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(&p);
                if q.is_zero() {
                    continue;
                }
                for k in j..d {
                    r.1[k] -= &q * &pr[k];
                }
                for k in j + 1..d {
                    if !self.moduli[k].is_zero() {
                        r.1[k] = modp(&r.1[k], &self.moduli[k]);
                    }
                }
            }
        }
        rows.into_iter().map(|(_, r)| r).collect()
    }
}

impl Lattice {
    pub fn span(moduli: &[BigInt], gens: impl IntoIterator<Item = Vec<BigInt>>) -> Lattice {
        let mut e = Echelon::new(moduli);
        for g in gens {
            assert_eq!(g.len(), moduli.len(), "generator length mismatch");
            e.insert(g);
        }
        Lattice { moduli: moduli.to_vec(), rows: e.finish() }
    }

    /// The zero subgroup, i.e. Λ itself.
    pub fn zero(moduli: &[BigInt]) -> Lattice {
        Lattice::span(moduli, std::iter::empty())
    }

    pub fn full(moduli: &[BigInt]) -> Lattice {
        let d = moduli.len();
        Lattice::span(moduli, (0..d).map(|i| unit(d, i)))
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn pivot(row: &[BigInt]) -> usize {
        row.iter().position(|x| !x.is_zero()).expect("zero row in echelon form")
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for r in &self.rows {
            let j = Lattice::pivot(r);
            let q = v[j].div_floor(&r[j]);
            if !q.is_zero() {
                for k in j..v.len() {
                    v[k] -= &q * &r[k];
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        let mut next = 0;
        for r in &self.rows {
            let j = Lattice::pivot(r);
            for k in next..j {
                if !v[k].is_zero() {
                    return false;
                }
            }
            if !(&v[j] % &r[j]).is_zero() {
                return false;
            }
            let q = &v[j] / &r[j];
            for k in j..v.len() {
                v[k] -= &q * &r[k];
            }
            next = j + 1;
        }
        (next..v.len()).all(|k| v[k].is_zero())
    }

    pub fn is_subset(&self, other: &Lattice) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.moduli, other.moduli);
        Lattice::span(&self.moduli, self.rows.iter().chain(&other.rows).cloned())
    }

    pub fn is_everything(&self) -> bool {
        self.rows.len() == self.dim() && self.rows.iter().enumerate().all(|(i, r)| r[i].is_one())
    }

    pub fn is_trivial(&self) -> bool {
        *self == Lattice::zero(&self.moduli)
    }

    /// {x in self : A x in target}, where A : Z^D -> Z^E is compatible with
    /// the moduli (A Λ ⊆ Λ').
    pub fn preimage(&self, a: &Mat<BigInt>, target: &Lattice) -> Lattice {
        let (e, d) = (a.rows, a.cols);
        assert_eq!(d, self.dim());
        assert_eq!(e, target.dim());
        let mut moduli = target.moduli.clone();
        moduli.extend(self.moduli.iter().cloned());
        let mut gens = Vec::new();
        for u in &self.rows {
            let mut g = mat_vec(a, u);
            g.extend(u.iter().cloned());
            gens.push(g);
        }
        for l in &target.rows {
            let mut g = l.clone();
            g.extend(std::iter::repeat(BigInt::zero()).take(d));
            gens.push(g);
        }
        let big = Lattice::span(&moduli, gens);
        let rows = big
            .rows
            .into_iter()
            .filter(|r| Lattice::pivot(r) >= e)
            .map(|r| r[e..].to_vec());
        Lattice::span(&self.moduli, rows)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let d = self.dim();
        let id = Mat::from_fn(d, d, |i, j| if i == j { BigInt::one() } else { BigInt::zero() });
        self.preimage(&id, other)
    }

    /// A(self) inside Z^E/Λ'.
    pub fn image(&self, a: &Mat<BigInt>, target_moduli: &[BigInt]) -> Lattice {
        Lattice::span(target_moduli, self.rows.iter().map(|u| mat_vec(a, u)))
    }

    /// Coordinates of `v` (which must lie in the lattice) in terms of `rows`.
    pub fn coords(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        let mut c = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let j = Lattice::pivot(r);
            let q = &v[j] / &r[j];
            for k in j..v.len() {
                v[k] -= &q * &r[k];
            }
            c.push(q);
        }
        debug_assert!(v.iter().all(|x| x.is_zero()), "vector not in lattice");
        c
    }
}

/// Some u with A u ≡ y modulo `target` (a lattice on the target moduli),
/// where A maps Z^D/Λ into Z^E/Λ′ and `source_moduli` are the moduli of Λ.
pub fn solve_mod(a: &Mat<BigInt>, source_moduli: &[BigInt], target: &Lattice, y: &[BigInt]) -> Option<Vec<BigInt>> {
    let (e, d) = (a.rows, a.cols);
    let mut moduli = target.moduli.clone();
    moduli.extend(source_moduli.iter().cloned());
    let mut gens = Vec::with_capacity(d + target.rows.len());
    for j in 0..d {
        let mut g = a.col(j);
        g.extend(unit(d, j));
        gens.push(g);
    }
    for l in &target.rows {
        let mut g = l.clone();
        g.extend(std::iter::repeat(BigInt::zero()).take(d));
        gens.push(g);
    }
    let w = Lattice::span(&moduli, gens);
    let mut v = y.to_vec();
    v.extend(std::iter::repeat(BigInt::zero()).take(d));
    let r = w.reduce(&v);
    if r[..e].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(r[e..].iter().map(|x| -x).collect())
}

pub fn unit(d: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); d];
    v[i] = BigInt::one();
    v
}

pub fn mat_vec(a: &Mat<BigInt>, v: &[BigInt]) -> Vec<BigInt> {
    (0..a.rows)
        .map(|i| {
            let mut s = BigInt::zero();
            for j in 0..a.cols {
                let x = a.get(i, j);
                if !x.is_zero() && !v[j].is_zero() {
                    s += x * &v[j];
                }
            }
            s
        })
        .collect()
}

/// The finitely generated abelian group U/L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    pub num: Lattice,
    pub den: Lattice,
}

/// Coefficients of an element of U with respect to the generators of
/// `structure`, reduced modulo their orders.
#[derive(Clone, Debug)]
pub struct Coords {
    num: Lattice,
    v: Mat<BigInt>,
    keep: Vec<(usize, BigInt)>,
    pub structure: Structure,
}

impl Coords {
    pub fn of(&self, x: &[BigInt]) -> Vec<BigInt> {
        let c = self.num.coords(x);
        self.keep
            .iter()
            .map(|(i, d)| {
                let mut a = BigInt::zero();
                for (j, cj) in c.iter().enumerate() {
                    if !cj.is_zero() {
                        a += cj * self.v.get(j, *i);
                    }
                }
                modp(&a, d)
            })
            .collect()
    }
}

/// Invariant factors > 1 and free rank, with explicit generators of each
/// cyclic summand (orders paired with generators; order 0 = infinite).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
    pub generators: Vec<(BigInt, Vec<BigInt>)>,
}

impl Structure {
    /// Canonical invariant list: torsion invariants then one 0 per free summand.
    pub fn invariants(&self) -> Vec<BigInt> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat(BigInt::zero()).take(self.free_rank));
        v
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }
}

impl Subquotient {
    pub fn new(num: Lattice, den: Lattice) -> Subquotient {
        debug_assert!(den.is_subset(&num), "denominator not contained in numerator");
        Subquotient { num, den }
    }

    pub fn structure(&self) -> Structure {
        let r = self.num.rows.len();
        if r == 0 {
            return Structure { torsion: vec![], free_rank: 0, generators: vec![] };
        }
        let rel: Vec<Vec<BigInt>> = self.den.rows.iter().map(|l| self.num.coords(l)).collect();
        let relm = if rel.is_empty() {
            Mat::filled(0, r, BigInt::zero())
        } else {
            Mat::from_rows(rel, r)
        };
        let s = smith(&ZZ, &relm);
        let diag = s.diagonal();
        let mut torsion = Vec::new();
        let mut generators = Vec::new();
        let mut free_rank = 0;
        for i in 0..r {
            let d = if i < s.rank { diag[i].clone() } else { BigInt::zero() };
            if d.is_one() {
                continue;
            }
            // generator = row i of vinv, expressed in ambient coordinates
            let w = s.vinv.row(i);
            let mut g = vec![BigInt::zero(); self.num.dim()];
            for (c, u) in w.iter().zip(&self.num.rows) {
                if c.is_zero() {
                    continue;
                }
                for k in 0..g.len() {
                    g[k] += c * &u[k];
                }
            }
            let g = self.den.reduce(&g);
            if d.is_zero() {
                free_rank += 1;
            } else {
                torsion.push(d.clone());
            }
            generators.push((d, g));
        }
        Structure { torsion, free_rank, generators }
    }

    /// Structure together with a coordinate map onto its cyclic generators.
    pub fn coordinates(&self) -> Coords {
        let st = self.structure();
        let r = self.num.rows.len();
        let rel: Vec<Vec<BigInt>> = self.den.rows.iter().map(|l| self.num.coords(l)).collect();
        let relm = if rel.is_empty() { Mat::filled(0, r, BigInt::zero()) } else { Mat::from_rows(rel, r) };
        let s = smith(&ZZ, &relm);
        let diag = s.diagonal();
        let keep = (0..r)
            .filter_map(|i| {
                let d = if i < s.rank { diag[i].clone() } else { BigInt::zero() };
                (!d.is_one()).then_some((i, d))
            })
            .collect();
        Coords { num: self.num.clone(), v: s.v, keep, structure: st }
    }

    /// All elements as canonical representatives (finite case only).
    pub fn elements(&self, cap: usize) -> Option<Vec<Vec<BigInt>>> {
        let st = self.structure();
        let order = st.order()?;
        if order > BigInt::from(cap) {
            return None;
        }
        let mut out = vec![vec![BigInt::zero(); self.num.dim()]];
        for (d, g) in &st.generators {
            let n: usize = crate::arith::to_usize(d).unwrap();
            let mut next = Vec::with_capacity(out.len() * n);
            for e in &out {
                for c in 0..n {
                    let v: Vec<BigInt> = e.iter().zip(g).map(|(x, y)| x + BigInt::from(c) * y).collect();
                    next.push(v);
                }
            }
            out = next;
        }
        let mut reps: Vec<Vec<BigInt>> = out.into_iter().map(|v| self.den.reduce(&v)).collect();
        reps.sort();
        Some(reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| big(x)).collect()
    }

    #[test]
    fn span_is_canonical() {
        let m = v(&[4, 4]);
        let a = Lattice::span(&m, vec![v(&[2, 2])]);
        let b = Lattice::span(&m, vec![v(&[6, 2]), v(&[0, 0])]);
        assert_eq!(a, b);
        assert!(a.contains(&v(&[2, 2])));
        assert!(!a.contains(&v(&[2, 0])));
        assert!(a.contains(&v(&[0, 4])));
    }

    #[test]
    fn kernel_of_doubling_mod_4() {
        let m = v(&[4]);
        let two = Mat::from_rows(vec![v(&[2])], 1);
        let k = Lattice::full(&m).preimage(&two, &Lattice::zero(&m));
        assert_eq!(k, Lattice::span(&m, vec![v(&[2])]));
        let sq = Subquotient::new(k, Lattice::zero(&m));
        assert_eq!(sq.structure().torsion, v(&[2]));
        assert_eq!(sq.elements(100).unwrap(), vec![v(&[0]), v(&[2])]);
    }

    #[test]
    fn mixed_moduli_and_free() {
        let m = v(&[4, 3, 0]);
        let full = Subquotient::new(Lattice::full(&m), Lattice::zero(&m));
        let st = full.structure();
        assert_eq!(st.torsion, v(&[12]));
        assert_eq!(st.free_rank, 1);
        let half = Lattice::span(&m, vec![v(&[0, 0, 2])]);
        let sq = Subquotient::new(Lattice::full(&m), half);
        assert_eq!(sq.structure().torsion, v(&[2, 12]));
    }

    #[test]
    fn intersections() {
        let m = v(&[0]);
        let a = Lattice::span(&m, vec![v(&[4])]);
        let b = Lattice::span(&m, vec![v(&[6])]);
        assert_eq!(a.intersect(&b), Lattice::span(&m, vec![v(&[12])]));
        assert_eq!(a.sum(&b), Lattice::span(&m, vec![v(&[2])]));
    }
}
