//! Addition, multiplication and negation laws of p-typical Witt vectors of
//! length n, built by the ghost recursion with exact division by p.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};

/// At most 8 variables with exponents below 2^16, packed into a u128.
const BITS: u32 = 16;
const MAX_VARS: usize = 8;
pub const MAX_N: u32 = 4;

fn unpack(key: u128, nvars: usize) -> Vec<u32> {
    (0..nvars).map(|i| ((key >> (BITS * i as u32)) & 0xffff) as u32).collect()
}

fn pack(exps: &[u32]) -> u128 {
    exps.iter().enumerate().fold(0u128, |acc, (i, &e)| acc | ((e as u128) << (BITS * i as u32)))
}

/// Sparse polynomial over Z in at most eight variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PolyTerms", try_from = "PolyTerms")]
pub struct IntPoly {
    pub nvars: usize,
    terms: HashMap<u128, BigInt>,
}

#[derive(Serialize, Deserialize)]
struct PolyTerms {
    nvars: usize,
    terms: Vec<(Vec<u32>, String)>,
}

impl From<IntPoly> for PolyTerms {
    fn from(f: IntPoly) -> PolyTerms {
        PolyTerms { nvars: f.nvars, terms: f.terms().into_iter().map(|(e, c)| (e, c.to_string())).collect() }
    }
}

impl TryFrom<PolyTerms> for IntPoly {
    type Error = String;

    fn try_from(t: PolyTerms) -> std::result::Result<IntPoly, String> {
        if t.nvars > MAX_VARS {
            return Err(format!("{} variables, at most {MAX_VARS}", t.nvars));
        }
        let mut f = IntPoly::zero(t.nvars);
        for (e, c) in t.terms {
            if e.len() != t.nvars || e.iter().any(|&x| x >= 1 << BITS) {
                return Err(format!("bad exponent vector {e:?}"));
            }
            let c: BigInt = c.parse().map_err(|_| format!("bad coefficient {c:?}"))?;
            f = f.add(&IntPoly::monomial(&e, c));
        }
        Ok(f)
    }
}

impl IntPoly {
    pub fn zero(nvars: usize) -> IntPoly {
        IntPoly { nvars, terms: HashMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> IntPoly {
        let mut p = IntPoly::zero(nvars);
        p.push(0, c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> IntPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        IntPoly::monomial(&e, BigInt::one())
    }

    pub fn monomial(exps: &[u32], c: BigInt) -> IntPoly {
        let mut p = IntPoly::zero(exps.len());
        p.push(pack(exps), c);
        p
    }

    fn push(&mut self, key: u128, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms sorted by exponent tuple.
    pub fn terms(&self) -> Vec<(Vec<u32>, BigInt)> {
        let mut v: Vec<(Vec<u32>, BigInt)> = self.terms.iter().map(|(k, c)| (unpack(*k, self.nvars), c.clone())).collect();
        v.sort();
        v
    }

    /// Raw (exponents, coefficient) pairs in no particular order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u32>, &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (unpack(*k, self.nvars), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(&pack(exps)).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut r = self.clone();
        for (k, c) in &other.terms {
            r.push(*k, c.clone());
        }
        r
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let mut r = self.clone();
        for (k, c) in &other.terms {
            r.push(*k, -c);
        }
        r
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        let mut r = IntPoly::zero(self.nvars);
        if c.is_zero() {
            return r;
        }
        r.terms = self.terms.iter().map(|(k, a)| (*k, a * c)).collect();
        r
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut acc: HashMap<u128, BigInt> = HashMap::with_capacity(self.len() * other.len() / 2 + 1);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                *acc.entry(k1 + k2).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        IntPoly { nvars: self.nvars, terms: acc }
    }

    pub fn pow(&self, mut e: u64) -> IntPoly {
        let mut result = IntPoly::constant(self.nvars, BigInt::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Division by d when every coefficient is divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<IntPoly> {
        let mut terms = HashMap::with_capacity(self.len());
        for (k, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(*k, q);
        }
        Some(IntPoly { nvars: self.nvars, terms })
    }

    /// Largest exponent of each variable.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.nvars];
        for k in self.terms.keys() {
            for (i, e) in unpack(*k, self.nvars).into_iter().enumerate() {
                m[i] = m[i].max(e);
            }
        }
        m
    }

    /// Evaluation at integer points.
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        self.terms
            .iter()
            .map(|(k, c)| {
                unpack(*k, self.nvars)
                    .iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
            })
            .sum()
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut terms = self.terms();
        if terms.is_empty() {
            return "0".into();
        }
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(&a.0))
        });
        let mut out = String::new();
        for (i, (e, c)) in terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(&x, _)| x > 0)
                .map(|(&x, n)| if x == 1 { n.clone() } else { format!("{n}^{x}") })
                .collect();
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{mag}*{}", mono.join("*")),
            };
            if i == 0 {
                out.push_str(&if c.is_negative() { format!("-{body}") } else { body });
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittLaw {
    pub p: u64,
    pub n: u32,
    /// S_i(x_0..x_i, y_0..y_i); x_j is variable j, y_j is variable n + j.
    pub sum: Vec<IntPoly>,
    pub product: Vec<IntPoly>,
    /// N_i(x_0..x_i), the components of −x.
    pub negation: Vec<IntPoly>,
}

/// w_i(a) = Σ_{j≤i} p^j a_j^{p^{i−j}} in the variables offset..offset+i.
pub fn ghost(p: u64, i: u32, nvars: usize, offset: usize) -> IntPoly {
    let pb = BigInt::from(p);
    (0..=i).fold(IntPoly::zero(nvars), |acc, j| {
        let mut e = vec![0; nvars];
        e[offset + j as usize] = p.pow(i - j) as u32;
        acc.add(&IntPoly::monomial(&e, num_traits::pow(pb.clone(), j as usize)))
    })
}

fn check_params(p: u64, n: u32) -> Result<()> {
    if !is_prime(&BigInt::from(p)) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    if n == 0 || n > MAX_N || p.checked_pow(n - 1).map_or(true, |q| q >= 1 << BITS) {
        return Err(Error::Unsupported(format!("Witt length {n} at p = {p} is outside the supported range")));
    }
    Ok(())
}

/// Solves Σ_{j≤i} p^j Q_j^{p^{i−j}} = target_i for Q_i, for each i.
fn recursion(p: u64, n: u32, target: impl Fn(u32) -> IntPoly) -> Result<Vec<IntPoly>> {
    let pb = BigInt::from(p);
    let mut out: Vec<IntPoly> = Vec::new();
    // powers[j] = Q_j^{p^{i−j}} for the current i
    let mut powers: Vec<IntPoly> = Vec::new();
    for i in 0..n {
        for q in powers.iter_mut() {
            *q = q.pow(p);
        }
        let mut rest = target(i);
        for (j, q) in powers.iter().enumerate() {
            rest = rest.sub(&q.scale(&num_traits::pow(pb.clone(), j)));
        }
        let d = num_traits::pow(pb.clone(), i as usize);
        let qi = rest
            .div_exact(&d)
            .ok_or_else(|| Error::Internal(format!("ghost recursion not divisible by p^{i}")))?;
        powers.push(qi.clone());
        out.push(qi);
    }
    Ok(out)
}

impl WittLaw {
    pub fn compute(p: u64, n: u32) -> Result<WittLaw> {
        check_params(p, n)?;
        let nv = 2 * n as usize;
        let (nn, ni) = (n as usize, n);
        let sum = recursion(p, ni, |i| ghost(p, i, nv, 0).add(&ghost(p, i, nv, nn)))?;
        let product = recursion(p, ni, |i| ghost(p, i, nv, 0).mul(&ghost(p, i, nv, nn)))?;
        let negation = recursion(p, ni, |i| ghost(p, i, nv, 0).scale(&BigInt::from(-1)))?;
        debug_assert!(nv <= MAX_VARS);
        Ok(WittLaw { p, n, sum, product, negation })
    }

    pub fn names(&self) -> Vec<String> {
        let n = self.n as usize;
        (0..n).map(|i| format!("x{i}")).chain((0..n).map(|i| format!("y{i}"))).collect()
    }

    /// The same law with S₁ shifted by 1, for negative controls.
    pub fn sabotaged(&self) -> WittLaw {
        let mut w = self.clone();
        let i = if w.n > 1 { 1 } else { 0 };
        w.sum[i] = w.sum[i].add(&IntPoly::constant(2 * w.n as usize, BigInt::one()));
        w
    }
}

static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<WittLaw>>>> = OnceLock::new();

/// Directory for laws saved between runs.
pub const CACHE_ENV: &str = "MODCOH_CACHE_DIR";

fn cache_file(p: u64, n: u32) -> Option<std::path::PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    Some(std::path::Path::new(&dir).join(format!("witt-law-p{p}-n{n}.json")))
}

/// Reads a saved law; anything unreadable or of another format is ignored.
fn load_cached(p: u64, n: u32) -> Option<WittLaw> {
    let text = std::fs::read_to_string(cache_file(p, n)?).ok()?;
    let doc: serde_json::Value = serde_json::from_str(&text).ok()?;
    crate::io::check_version(&doc).ok()?;
    let law: WittLaw = serde_json::from_value(doc.get("law")?.clone()).ok()?;
    (law.p == p && law.n == n && law.sum.len() == n as usize).then_some(law)
}

fn save_cached(law: &WittLaw) {
    let Some(path) = cache_file(law.p, law.n) else { return };
    let Ok(body) = serde_json::to_value(law) else { return };
    let doc = crate::io::envelope("witt-law", serde_json::json!({ "law": body }));
    if let Some(dir) = path.parent() {
        let _ = std::fs::create_dir_all(dir);
    }
    // write then rename, so concurrent readers never see a partial file
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    if std::fs::write(&tmp, doc.to_string()).is_ok() {
        let _ = std::fs::rename(&tmp, &path);
    }
}

/// Memoized laws; computed once per (p, n) and kept in MODCOH_CACHE_DIR
/// when that is set.
pub fn witt_laws(p: u64, n: u32) -> Result<Arc<WittLaw>> {
    check_params(p, n)?;
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(l) = cache.lock().expect("law cache poisoned").get(&(p, n)) {
        return Ok(l.clone());
    }
    let law = match load_cached(p, n) {
        Some(l) => l,
        None => {
            let l = WittLaw::compute(p, n)?;
            save_cached(&l);
            l
        }
    };
    let law = Arc::new(law);
    cache.lock().expect("law cache poisoned").insert((p, n), law.clone());
    Ok(law)
}

/// One failed identity: which law and which component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhostFailure {
    pub law: String,
    pub component: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhostReport {
    pub p: u64,
    pub n: u32,
    pub checked: usize,
    pub failures: Vec<GhostFailure>,
}

impl GhostReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-derives every ghost component from the law and compares it with
/// w_i(x) + w_i(y), w_i(x)·w_i(y) and −w_i(x) as polynomials.
pub fn verify_ghost(law: &WittLaw) -> GhostReport {
    let (p, n) = (law.p, law.n);
    let nv = 2 * n as usize;
    let pb = BigInt::from(p);
    let ghost_of = |qs: &[IntPoly], i: u32| -> IntPoly {
        (0..=i).fold(IntPoly::zero(nv), |acc, j| {
            let q = qs[j as usize].pow(p.pow(i - j));
            acc.add(&q.scale(&num_traits::pow(pb.clone(), j as usize)))
        })
    };
    let mut failures = Vec::new();
    let mut checked = 0;
    for i in 0..n {
        let (wx, wy) = (ghost(p, i, nv, 0), ghost(p, i, nv, n as usize));
        let cases = [
            ("sum", &law.sum, wx.add(&wy)),
            ("product", &law.product, wx.mul(&wy)),
            ("negation", &law.negation, wx.scale(&BigInt::from(-1))),
        ];
        for (name, qs, want) in cases {
            checked += 1;
            if ghost_of(qs, i) != want {
                failures.push(GhostFailure { law: name.into(), component: i });
            }
        }
    }
    GhostReport { p, n, checked, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(v: &[u32]) -> Vec<u32> {
        v.to_vec()
    }

    #[test]
    fn p2_n2_laws() {
        let l = WittLaw::compute(2, 2).unwrap();
        // over Z the x₀y₀ coefficient is −1; mod 2 this is x₁ + y₁ + x₀y₀
        let s1 = &l.sum[1];
        assert_eq!(s1.len(), 3);
        assert_eq!(s1.coeff(&e(&[0, 1, 0, 0])), BigInt::from(1));
        assert_eq!(s1.coeff(&e(&[0, 0, 0, 1])), BigInt::from(1));
        assert_eq!(s1.coeff(&e(&[1, 0, 1, 0])), BigInt::from(-1));
        assert!(s1.terms().iter().all(|(_, c)| c.is_odd()));
        // P₁ = x₁y₀² + x₀²y₁ + 2x₁y₁
        let p1 = &l.product[1];
        assert_eq!(p1.len(), 3);
        assert_eq!(p1.coeff(&e(&[0, 1, 2, 0])), BigInt::from(1));
        assert_eq!(p1.coeff(&e(&[2, 0, 0, 1])), BigInt::from(1));
        assert_eq!(p1.coeff(&e(&[0, 1, 0, 1])), BigInt::from(2));
    }

    #[test]
    fn degree_zero_laws() {
        for p in [2, 3, 5, 7] {
            let l = WittLaw::compute(p, 1).unwrap();
            assert_eq!(l.sum[0], IntPoly::var(2, 0).add(&IntPoly::var(2, 1)));
            assert_eq!(l.product[0], IntPoly::var(2, 0).mul(&IntPoly::var(2, 1)));
        }
    }

    #[test]
    fn ghost_identities_small() {
        for (p, top) in [(2, 4), (3, 4), (5, 3)] {
            for n in 1..=top {
                let r = verify_ghost(&WittLaw::compute(p, n).unwrap());
                assert!(r.passed(), "p={p} n={n}: {:?}", r.failures);
            }
        }
    }

    #[test]
    fn sabotage_is_detected() {
        let l = WittLaw::compute(3, 2).unwrap().sabotaged();
        let r = verify_ghost(&l);
        assert_eq!(r.failures, vec![GhostFailure { law: "sum".into(), component: 1 }]);
    }

    #[test]
    fn json_round_trip() {
        let law = WittLaw::compute(3, 2).unwrap();
        let text = serde_json::to_string(&law).unwrap();
        assert_eq!(serde_json::from_str::<WittLaw>(&text).unwrap(), law);
        let bad = text.replacen("\"nvars\":4", "\"nvars\":9", 1);
        assert!(serde_json::from_str::<WittLaw>(&bad).is_err());
    }

    #[test]
    fn unsupported_parameters() {
        assert!(WittLaw::compute(4, 2).is_err());
        assert!(WittLaw::compute(2, 5).is_err());
        assert!(WittLaw::compute(2, 0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Numeric ghost identity at integer points, for p = 3, n = 3.
        #[test]
        fn ghost_at_integer_points(v in proptest::collection::vec(-20i64..=20, 6)) {
            let (p, n) = (3u64, 3u32);
            let l = witt_laws(p, n).unwrap();
            let pt: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            let w = |a: &[BigInt], i: u32| -> BigInt {
                (0..=i).map(|j| num_traits::pow(BigInt::from(p), j as usize) * num_traits::pow(a[j as usize].clone(), p.pow(i - j) as usize)).sum()
            };
            let s: Vec<BigInt> = l.sum.iter().map(|q| q.eval(&pt)).collect();
            let m: Vec<BigInt> = l.product.iter().map(|q| q.eval(&pt)).collect();
            for i in 0..n {
                prop_assert_eq!(w(&s, i), w(&pt[..3], i) + w(&pt[3..], i));
                prop_assert_eq!(w(&m, i), w(&pt[..3], i) * w(&pt[3..], i));
            }
        }
    }
}
