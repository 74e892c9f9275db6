//! Sparse symmetric functions over the field of rational functions in q.
//!
//! Four bases are supported: elementary (e), complete homogeneous (h), power
//! sum (p), and the plethystically transformed homogeneous functions
//! th_lambda = c_lambda(q) h_lambda[X/(1-q)] with
//! c_lambda = prod_i prod_{j<=lambda_i} (1 - q^j). All conversions route
//! through the power-sum basis; the change-of-basis matrices are memoized per
//! degree and inverted exactly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::One;
use serde_json::{json, Value};

use crate::check_degree_cap;
use crate::combinat::{partitions, Partition};
use crate::error::{Error, Result};
use crate::ratfun::RatFun;
use crate::{QPoly, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    E,
    H,
    P,
    Th,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::E => "e",
            Basis::H => "h",
            Basis::P => "p",
            Basis::Th => "th",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "e" => Ok(Basis::E),
            "h" => Ok(Basis::H),
            "p" => Ok(Basis::P),
            "th" => Ok(Basis::Th),
            _ => Err(Error::Parse(format!("unknown basis {s:?}"))),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// c_lambda(q) = prod_i prod_{j=1..lambda_i} (1 - q^j).
pub fn c_poly(lambda: &Partition) -> QPoly {
    let mut c = QPoly::one();
    for &part in lambda.parts() {
        for j in 1..=part {
            c = c.times(&QPoly::one_minus_q_pow(j));
        }
    }
    c
}

/// b_mu(q) = prod_i (1 - q^{mu_i}).
pub fn b_poly(mu: &Partition) -> QPoly {
    let mut b = QPoly::one();
    for &part in mu.parts() {
        b = b.times(&QPoly::one_minus_q_pow(part));
    }
    b
}

/// A homogeneous symmetric function tagged with the basis of its expansion.
/// No zero coefficients are stored; all keys are partitions of `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymFun {
    basis: Basis,
    degree: usize,
    coeffs: BTreeMap<Partition, RatFun>,
}

impl SymFun {
    pub fn zero(basis: Basis, degree: usize) -> Self {
        SymFun { basis, degree, coeffs: BTreeMap::new() }
    }

    /// The multiplicative unit: degree 0, coefficient 1 on the empty
    /// partition (basis tag is immaterial).
    pub fn one(basis: Basis) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Partition::empty(), RatFun::one());
        SymFun { basis, degree: 0, coeffs }
    }

    /// The basis element B_lambda itself.
    pub fn basis_element(basis: Basis, lambda: Partition) -> Self {
        let degree = lambda.size();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(lambda, RatFun::one());
        SymFun { basis, degree, coeffs }
    }

    pub fn from_coeffs(
        basis: Basis,
        degree: usize,
        coeffs: BTreeMap<Partition, RatFun>,
    ) -> Result<Self> {
        for (k, _) in coeffs.iter() {
            if k.size() != degree {
                return Err(Error::SizeMismatch { left: k.size(), right: degree });
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(SymFun { basis, degree, coeffs })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, RatFun> {
        &self.coeffs
    }

    pub fn coeff(&self, lambda: &Partition) -> RatFun {
        self.coeffs.get(lambda).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &RatFun) -> Self {
        if c.is_zero() {
            return Self::zero(self.basis, self.degree);
        }
        SymFun {
            basis: self.basis,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v.mul_ref(c)))
                .collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scale(&RatFun::from_int(-1))
    }

    /// Add two functions of the same degree; mismatched bases are resolved
    /// through the power-sum hub.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::SizeMismatch { left: self.degree, right: other.degree });
        }
        if self.basis != other.basis {
            return convert(self, Basis::P)?.add(&convert(other, Basis::P)?);
        }
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            let entry = coeffs.entry(k.clone()).or_insert_with(RatFun::zero);
            *entry = entry.add_ref(v);
        }
        coeffs.retain(|_, v| !v.is_zero());
        Ok(SymFun { basis: self.basis, degree: self.degree, coeffs })
    }

    /// Support partitions in the canonical (reverse-lexicographic) order.
    pub fn ordered_support(&self) -> Vec<Partition> {
        partitions(self.degree)
            .into_iter()
            .filter(|p| self.coeffs.contains_key(p))
            .collect()
    }

    /// JSON form: `{"basis": "e", "degree": 4, "coeffs": [[[2,1,1], ratfun]]}`.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = partitions(self.degree)
            .into_iter()
            .filter_map(|p| {
                self.coeffs
                    .get(&p)
                    .map(|c| json!([p.to_json(), c.to_json()]))
            })
            .collect();
        json!({ "basis": self.basis.name(), "degree": self.degree, "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let basis = Basis::from_name(
            v.get("basis")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("symfun: missing basis".into()))?,
        )?;
        let degree = v
            .get("degree")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("symfun: missing degree".into()))? as usize;
        let arr = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("symfun: missing coeffs".into()))?;
        let mut coeffs = BTreeMap::new();
        for item in arr {
            let pair = item
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Parse("symfun: expected [partition, ratfun]".into()))?;
            let p = Partition::from_json(&pair[0])?;
            let c = RatFun::from_json(&pair[1])?;
            coeffs.insert(p, c);
        }
        Self::from_coeffs(basis, degree, coeffs)
    }
}

impl fmt::Display for SymFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let name = self.basis.name();
        let mut first = true;
        for p in self.ordered_support() {
            let c = &self.coeffs[&p];
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            let simple =
                c.den().is_one() && c.num().num_terms() == 1 && !cs.starts_with('-');
            if c.is_one() {
                write!(f, "{name}{p}")?;
            } else if simple {
                write!(f, "{cs}*{name}{p}")?;
            } else {
                write!(f, "({cs})*{name}{p}")?;
            }
        }
        Ok(())
    }
}

/// Expansion of a single-part basis element in the power sums.
fn single_part_to_p(basis: Basis, k: usize) -> BTreeMap<Partition, RatFun> {
    let mut out = BTreeMap::new();
    if k == 0 {
        out.insert(Partition::empty(), RatFun::one());
        return out;
    }
    match basis {
        Basis::P => {
            out.insert(Partition::single_row(k), RatFun::one());
        }
        Basis::E => {
            // e_k = sum_{mu |- k} (-1)^{k - l(mu)} p_mu / z_mu
            for mu in partitions(k) {
                let sign: i32 = if (k - mu.len()) % 2 == 0 { 1 } else { -1 };
                let c = RatFun::from_rat(Rat::from_integer(sign.into()) / mu.zee_rat());
                out.insert(mu, c);
            }
        }
        Basis::H => {
            for mu in partitions(k) {
                let c = RatFun::from_rat(Rat::one() / mu.zee_rat());
                out.insert(mu, c);
            }
        }
        Basis::Th => {
            // th_k = c_k sum_{mu |- k} p_mu / (z_mu prod_i (1 - q^{mu_i}))
            let ck = RatFun::from_poly(c_poly(&Partition::single_row(k)));
            for mu in partitions(k) {
                let den = QPoly::constant(mu.zee_rat()).times(&b_poly(&mu));
                let c = ck.div_ref(&RatFun::from_poly(den)).expect("nonzero");
                out.insert(mu, c);
            }
        }
    }
    out
}

fn merge_products(
    a: &BTreeMap<Partition, RatFun>,
    b: &BTreeMap<Partition, RatFun>,
) -> BTreeMap<Partition, RatFun> {
    let mut out: BTreeMap<Partition, RatFun> = BTreeMap::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let key = ka.merge(kb);
            let add = va.mul_ref(vb);
            let entry = out.entry(key).or_insert_with(RatFun::zero);
            *entry = entry.add_ref(&add);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// p-expansion of the multiplicative basis element B_lambda.
fn element_to_p(basis: Basis, lambda: &Partition) -> BTreeMap<Partition, RatFun> {
    let mut acc = BTreeMap::new();
    acc.insert(Partition::empty(), RatFun::one());
    for &part in lambda.parts() {
        let single = single_part_to_p(basis, part);
        acc = merge_products(&acc, &single);
    }
    acc
}

struct BasisMatrix {
    parts: Vec<Partition>,
    /// Column lambda of `to_p` is B_lambda expanded in p_mu (row mu).
    to_p: Vec<Vec<RatFun>>,
}

fn matrix_cache() -> &'static Mutex<HashMap<(Basis, usize), Arc<BasisMatrix>>> {
    static CACHE: OnceLock<Mutex<HashMap<(Basis, usize), Arc<BasisMatrix>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn inverse_cache() -> &'static Mutex<HashMap<(Basis, usize), Arc<Vec<Vec<RatFun>>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(Basis, usize), Arc<Vec<Vec<RatFun>>>>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn invert(n: usize, m: &[Vec<RatFun>]) -> Vec<Vec<RatFun>> {
    let mut a: Vec<Vec<RatFun>> = m.to_vec();
    let mut inv: Vec<Vec<RatFun>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { RatFun::one() } else { RatFun::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("basis matrix is invertible");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pinv = a[col][col].inverse().expect("nonzero pivot");
        for j in 0..n {
            a[col][j] = a[col][j].mul_ref(&pinv);
            inv[col][j] = inv[col][j].mul_ref(&pinv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = a[r][j].sub_ref(&f.mul_ref(&a[col][j]));
                inv[r][j] = inv[r][j].sub_ref(&f.mul_ref(&inv[col][j]));
            }
        }
    }
    inv
}

fn basis_matrix(basis: Basis, degree: usize) -> Arc<BasisMatrix> {
    if let Some(m) = matrix_cache().lock().unwrap().get(&(basis, degree)) {
        return Arc::clone(m);
    }
    let parts = partitions(degree);
    let index: BTreeMap<Partition, usize> = parts
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let n = parts.len();
    let mut to_p = vec![vec![RatFun::zero(); n]; n];
    for (col, lambda) in parts.iter().enumerate() {
        for (mu, c) in element_to_p(basis, lambda) {
            to_p[index[&mu]][col] = c;
        }
    }
    let m = Arc::new(BasisMatrix { parts, to_p });
    matrix_cache()
        .lock()
        .unwrap()
        .insert((basis, degree), Arc::clone(&m));
    m
}

/// Inverse of the basis-to-power-sum matrix, built on first use.
fn basis_inverse(basis: Basis, degree: usize) -> Arc<Vec<Vec<RatFun>>> {
    if let Some(m) = inverse_cache().lock().unwrap().get(&(basis, degree)) {
        return Arc::clone(m);
    }
    let m = basis_matrix(basis, degree);
    let inv = Arc::new(invert(m.parts.len(), &m.to_p));
    inverse_cache()
        .lock()
        .unwrap()
        .insert((basis, degree), Arc::clone(&inv));
    inv
}

fn coeff_vector(f: &SymFun, parts: &[Partition]) -> Vec<RatFun> {
    parts.iter().map(|p| f.coeff(p)).collect()
}

fn poly_lcm(a: &QPoly, b: &QPoly) -> QPoly {
    let g = crate::poly::Poly::gcd_rat(a, b);
    a.times(&b.div_exact(&g).expect("gcd divides"))
}

/// Matrix-vector product over rational functions, accumulating each row over
/// a common denominator so only one reduction happens per row.
fn mat_vec(m: &[Vec<RatFun>], v: &[RatFun]) -> Vec<RatFun> {
    // Shared denominator of the vector.
    let mut vden = QPoly::one();
    for x in v {
        if !x.is_zero() {
            vden = poly_lcm(&vden, x.den());
        }
    }
    let vnum: Vec<QPoly> = v
        .iter()
        .map(|x| {
            if x.is_zero() {
                QPoly::zero()
            } else {
                x.num().times(&vden.div_exact(x.den()).expect("lcm divisible"))
            }
        })
        .collect();
    m.iter()
        .map(|row| {
            let mut rden = QPoly::one();
            for (a, bn) in row.iter().zip(&vnum) {
                if !a.is_zero() && !bn.is_zero() {
                    rden = poly_lcm(&rden, a.den());
                }
            }
            let mut acc = QPoly::zero();
            for (a, bn) in row.iter().zip(&vnum) {
                if !a.is_zero() && !bn.is_zero() {
                    let scaled = a
                        .num()
                        .times(&rden.div_exact(a.den()).expect("lcm divisible"));
                    acc = acc.plus(&scaled.times(bn));
                }
            }
            if acc.is_zero() {
                RatFun::zero()
            } else {
                RatFun::new(acc, rden.times(&vden)).expect("nonzero denominator")
            }
        })
        .collect()
}

/// Re-expand `f` in the target basis. All routes go through the power sums.
pub fn convert(f: &SymFun, target: Basis) -> Result<SymFun> {
    if f.basis == target {
        return Ok(f.clone());
    }
    check_degree_cap(f.degree)?;
    let mut v;
    if f.basis == Basis::P {
        v = coeff_vector(f, &basis_matrix(Basis::P, f.degree).parts);
    } else {
        let m = basis_matrix(f.basis, f.degree);
        v = mat_vec(&m.to_p, &coeff_vector(f, &m.parts));
    }
    if target != Basis::P {
        v = mat_vec(&basis_inverse(target, f.degree), &v);
    }
    let parts = partitions(f.degree);
    let coeffs = parts
        .into_iter()
        .zip(v)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Ok(SymFun { basis: target, degree: f.degree, coeffs })
}

/// Exact product. In a shared multiplicative basis this is a part-merge of
/// keys; otherwise both factors are taken to the power sums first.
pub fn multiply(f: &SymFun, g: &SymFun) -> Result<SymFun> {
    check_degree_cap(f.degree + g.degree)?;
    if f.basis != g.basis {
        return multiply(&convert(f, Basis::P)?, &convert(g, Basis::P)?);
    }
    let coeffs = merge_products(&f.coeffs, &g.coeffs);
    Ok(SymFun { basis: f.basis, degree: f.degree + g.degree, coeffs })
}

/// Hall inner product, computed in the power-sum basis where
/// the pairing of p_lambda with p_mu is delta_{lambda,mu} z_lambda.
pub fn hall_pair(f: &SymFun, g: &SymFun) -> Result<RatFun> {
    if f.degree != g.degree {
        return Err(Error::SizeMismatch { left: f.degree, right: g.degree });
    }
    let fp = convert(f, Basis::P)?;
    let gp = convert(g, Basis::P)?;
    let mut acc = RatFun::zero();
    for (k, a) in &fp.coeffs {
        if let Some(b) = gp.coeffs.get(k) {
            let z = RatFun::from_rat(k.zee_rat());
            acc = acc.add_ref(&a.mul_ref(b).mul_ref(&z));
        }
    }
    Ok(acc)
}

/// The involution omega: p_k -> (-1)^{k-1} p_k; swaps the e and h expansions
/// keywise.
pub fn omega(f: &SymFun) -> Result<SymFun> {
    let p = convert(f, Basis::P)?;
    let coeffs = p
        .coeffs
        .into_iter()
        .map(|(k, c)| {
            let c = if (k.size() - k.len()) % 2 == 0 { c } else { c.negated() };
            (k, c)
        })
        .collect();
    let g = SymFun { basis: Basis::P, degree: f.degree, coeffs };
    convert(&g, f.basis)
}

/// Adams operation tau_r: p_k -> p_{kr}. Returns a power-sum expansion.
pub fn adams(f: &SymFun, r: usize) -> Result<SymFun> {
    if r == 0 {
        return Err(Error::Invalid("adams operation requires r >= 1".into()));
    }
    check_degree_cap(f.degree * r)?;
    let p = convert(f, Basis::P)?;
    let coeffs = p
        .coeffs
        .into_iter()
        .map(|(k, c)| (k.stretch(r), c))
        .collect();
    Ok(SymFun { basis: Basis::P, degree: f.degree * r, coeffs })
}

/// The t = 1 nabla operator iterated `a` times: scales the coefficient of
/// th_lambda by q^{a sum_i lambda_i (lambda_i - 1) / 2}. Returns a th-basis
/// expansion.
pub fn nabla_t1(f: &SymFun, a: usize) -> Result<SymFun> {
    let th = convert(f, Basis::Th)?;
    let coeffs = th
        .coeffs
        .into_iter()
        .map(|(k, c)| {
            let e = a * k.twist_exponent();
            let scaled = c.mul_ref(&RatFun::q_pow(e as i64));
            (k, scaled)
        })
        .collect();
    Ok(SymFun { basis: Basis::Th, degree: f.degree, coeffs })
}

/// The three germ families of one master symmetric function: its th, h and e
/// coefficient tables. Re-deriving any one from another reproduces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermTable {
    pub shalika: BTreeMap<Partition, RatFun>,
    pub steinberg: BTreeMap<Partition, RatFun>,
    pub dyck: BTreeMap<Partition, RatFun>,
}

impl GermTable {
    pub fn to_json(&self, degree: usize) -> Value {
        let table = |m: &BTreeMap<Partition, RatFun>| -> Value {
            Value::Array(
                partitions(degree)
                    .into_iter()
                    .filter_map(|p| m.get(&p).map(|c| json!([p.to_json(), c.to_json()])))
                    .collect(),
            )
        };
        json!({
            "shalika": table(&self.shalika),
            "steinberg": table(&self.steinberg),
            "dyck": table(&self.dyck),
        })
    }
}
