//! The t = 1 degenerate elliptic-Hall operators acting on symmetric
//! functions as multiplication operators: the Dyck-path generating functions
//! E_{m,n,k}, the slope plethysm sending e_k to E_{m,n,k}, and the elements
//! P_{km,kn} acting on the vacuum, expanded over compositions with explicit
//! weights.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;

use crate::check_degree_cap;
use crate::combinat::{
    compositions, content_exponents, dyck_paths, slope_steps, Composition, Partition, SlopeMode,
};
use crate::error::{Error, Result};
use crate::ratfun::RatFun;
use crate::symfunc::{convert, multiply, Basis, SymFun};

fn e_cache() -> &'static Mutex<HashMap<(usize, usize, usize), SymFun>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), SymFun>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn pkm_cache() -> &'static Mutex<HashMap<(usize, usize, usize), SymFun>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), SymFun>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// E_{m,n,k}: the sum over Dyck paths in the kn x km rectangle of
/// q^area times the product of e's over the horizontal steps. Elementary
/// basis, degree kn.
pub fn elementary_slope(m: usize, n: usize, k: usize) -> Result<SymFun> {
    if n < 1 || k < 1 {
        return Err(Error::Invalid("elementary_slope requires n, k >= 1".into()));
    }
    if m.gcd(&n) != 1 {
        return Err(Error::NonCoprime { m, n });
    }
    if let Some(f) = e_cache().lock().unwrap().get(&(m, n, k)) {
        return Ok(f.clone());
    }
    // Accumulate areas as plain polynomials; one rational-function wrap at
    // the end keeps large enumerations cheap.
    let mut polys: BTreeMap<Partition, crate::QPoly> = BTreeMap::new();
    for path in dyck_paths(m, n, k, false)? {
        let key = Partition::new(path.composition());
        let term = crate::QPoly::monomial(path.area(), crate::Rat::from_integer(1.into()));
        let entry = polys.entry(key).or_insert_with(crate::QPoly::zero);
        *entry = entry.plus(&term);
    }
    let coeffs: BTreeMap<Partition, RatFun> = polys
        .into_iter()
        .map(|(k, p)| (k, RatFun::from_poly(p)))
        .collect();
    let f = SymFun::from_coeffs(Basis::E, k * n, coeffs)?;
    e_cache().lock().unwrap().insert((m, n, k), f.clone());
    Ok(f)
}

/// The slope-m/n plethysm: expand `f` in the elementary basis and substitute
/// e_k by E_{m,n,k} multiplicatively. Degree multiplies by n.
pub fn slope_plethysm(f: &SymFun, m: usize, n: usize) -> Result<SymFun> {
    if n < 1 {
        return Err(Error::Invalid("slope_plethysm requires n >= 1".into()));
    }
    if m.gcd(&n) != 1 {
        return Err(Error::NonCoprime { m, n });
    }
    check_degree_cap(f.degree() * n)?;
    let fe = convert(f, Basis::E)?;
    let mut acc = SymFun::zero(Basis::E, f.degree() * n);
    for (lambda, c) in fe.coeffs() {
        let mut term = SymFun::one(Basis::E);
        for &part in lambda.parts() {
            term = multiply(&term, &elementary_slope(m, n, part)?)?;
        }
        acc = acc.add(&term.scale(c))?;
    }
    Ok(acc)
}

/// The weight of the composition alpha in the expansion of P_{km,kn} acting
/// on the vacuum over th's. Requires |alpha| = kn and gcd(m, n) = 1.
///
/// With z the t = 1 content vector of alpha and S the ceiling slope steps:
///
/// ```text
/// wt(alpha) = [ sum_{j=0}^{k-1} q^j prod_{s=1}^{j} z_{(k-s)n} / z_{(k-s)n+1} ]
///             * (-1)^{kn - l(alpha) + k + 1} * prod_i z_i^{S(i)} / c_{alpha-1}(q)
/// ```
///
/// where alpha-1 removes 1 from the last part. The k-dependent sign makes the
/// expansion agree with the slope plethysm route for every k (checked
/// exhaustively in the tests); the coprime case k = 1 reduces to the familiar
/// (-1)^{n - l(alpha)}.
pub fn comp_weight(alpha: &Composition, m: usize, n: usize, k: usize) -> Result<RatFun> {
    if n < 1 || k < 1 {
        return Err(Error::Invalid("comp_weight requires n, k >= 1".into()));
    }
    if m.gcd(&n) != 1 {
        return Err(Error::NonCoprime { m, n });
    }
    if alpha.size() != k * n {
        return Err(Error::SizeMismatch { left: alpha.size(), right: k * n });
    }
    let z = content_exponents(alpha);
    // prod_i z_i^{S(i)}
    let mut top = 0i64;
    for i in 1..=(k * n) {
        let s = slope_steps(m, n, i, SlopeMode::Ceil);
        top += (s as i64) * (z[i - 1] as i64);
    }
    // Prefactor over j = 0..k-1; each summand is a possibly-negative q power.
    let mut prefactor = RatFun::zero();
    for j in 0..k {
        let mut e = j as i64;
        for s in 1..=j {
            let idx = (k - s) * n; // 1-based boundary index
            e += z[idx - 1] as i64 - z[idx] as i64;
        }
        prefactor = prefactor.add_ref(&RatFun::q_pow(e));
    }
    let c_den = crate::symfunc::c_poly(&alpha.minus_one_on_last().sorted());
    let sign = (k * n - alpha.len() + k + 1) % 2 == 0;
    let mut wt = prefactor
        .mul_ref(&RatFun::q_pow(top))
        .div_ref(&RatFun::from_poly(c_den))?;
    if !sign {
        wt = wt.negated();
    }
    Ok(wt)
}

/// P_{km,kn} acting on the vacuum: the sum over compositions alpha of kn of
/// wt(alpha) th_{sort(alpha)}. Transformed-homogeneous basis, degree kn.
pub fn pkm_compositions(m: usize, n: usize, k: usize) -> Result<SymFun> {
    if let Some(f) = pkm_cache().lock().unwrap().get(&(m, n, k)) {
        return Ok(f.clone());
    }
    let mut buckets: BTreeMap<Partition, Vec<RatFun>> = BTreeMap::new();
    for alpha in compositions(k * n) {
        let wt = comp_weight(&alpha, m, n, k)?;
        buckets.entry(alpha.sorted()).or_default().push(wt);
    }
    let coeffs: BTreeMap<Partition, RatFun> = buckets
        .into_iter()
        .map(|(key, items)| (key, crate::ratfun::ratfun_sum(items)))
        .collect();
    let f = SymFun::from_coeffs(Basis::Th, k * n, coeffs)?;
    pkm_cache().lock().unwrap().insert((m, n, k), f.clone());
    Ok(f)
}
