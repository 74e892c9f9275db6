//! Branch data (Newton pairs, Puiseux exponents, cabling), the master
//! symmetric function recursion, germ extraction, and the independent
//! transition-matrix route used to cross-check it.
//!
//! A branch is a list of steps applied innermost first: a ramified step with
//! coprime pair (p, q) applies the slope-q/p plethysm; an unramified step
//! with residue degree f and twist a applies (-1)^{n(f-1)} nabla^a tau_f.
//! Multi-branch data multiplies the per-branch master symmetric functions.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::combinat::{partitions, twist_exponent, Partition};
use crate::eha::{pkm_compositions, slope_plethysm};
use crate::error::{Error, Result};
use crate::ratfun::RatFun;
use crate::symfunc::{
    adams, b_poly, c_poly, convert, hall_pair, multiply, nabla_t1, Basis, GermTable, SymFun,
};
use crate::Exponent;

/// Newton pairs of a single branch, innermost first. Each pair (p_i, q_i) is
/// coprime with p_i, q_i >= 1; the slope applied at step i is q_i/p_i and the
/// branch degree is the product of the p_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPairs(Vec<(usize, usize)>);

impl NewtonPairs {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        for &(p, q) in &pairs {
            if p < 1 || q < 1 {
                return Err(Error::Invalid(format!("newton pair ({p},{q}) must be positive")));
            }
            if p.gcd(&q) != 1 {
                return Err(Error::Invalid(format!("newton pair ({p},{q}) is not coprime")));
            }
        }
        Ok(NewtonPairs(pairs))
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&(p, _)| p).product()
    }

    /// Non-fatal validation notes. The outermost slope is normally >= 1.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(&(p, q)) = self.0.last() {
            if q < p {
                out.push(format!(
                    "outermost newton pair ({p},{q}) has slope below 1; results are computed as given"
                ));
            }
        }
        out
    }
}

/// One recursion step of a branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Ramified { p: usize, q: usize },
    Unramified { f: usize, a: usize },
}

/// One branch: ordered steps, innermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchSpec {
    steps: Vec<Step>,
}

impl BranchSpec {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        for s in &steps {
            match *s {
                Step::Ramified { p, q } => {
                    if p < 1 || q < 1 {
                        return Err(Error::Invalid("ramified step must have p, q >= 1".into()));
                    }
                    if p.gcd(&q) != 1 {
                        return Err(Error::Invalid(format!(
                            "ramified step ({p},{q}) is not coprime"
                        )));
                    }
                }
                Step::Unramified { f, .. } => {
                    if f < 2 {
                        return Err(Error::Invalid("unramified step requires f >= 2".into()));
                    }
                }
            }
        }
        Ok(BranchSpec { steps })
    }

    pub fn trivial() -> Self {
        BranchSpec { steps: Vec::new() }
    }

    pub fn from_newton(pairs: &NewtonPairs) -> Self {
        BranchSpec {
            steps: pairs
                .pairs()
                .iter()
                .map(|&(p, q)| Step::Ramified { p, q })
                .collect(),
        }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn degree(&self) -> usize {
        self.steps
            .iter()
            .map(|s| match *s {
                Step::Ramified { p, .. } => p,
                Step::Unramified { f, .. } => f,
            })
            .product()
    }

    /// Newton pairs when the branch is totally ramified.
    pub fn newton_pairs(&self) -> Option<NewtonPairs> {
        let mut pairs = Vec::new();
        for s in &self.steps {
            match *s {
                Step::Ramified { p, q } => pairs.push((p, q)),
                Step::Unramified { .. } => return None,
            }
        }
        Some(NewtonPairs(pairs))
    }

    /// The lowest Puiseux exponent (the outermost slope q_d/p_d), defined
    /// when the outermost step is ramified.
    pub fn leading_exponent(&self) -> Option<Exponent> {
        match self.steps.last() {
            Some(&Step::Ramified { p, q }) => Some(Exponent::new(q as i64, p as i64)),
            _ => None,
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        match self.newton_pairs() {
            Some(np) => np.warnings(),
            None => Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| match *s {
                Step::Ramified { p, q } => json!({ "ramified": [p, q] }),
                Step::Unramified { f, a } => json!({ "unramified": { "f": f, "a": a } }),
            })
            .collect();
        json!({ "steps": steps })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(pu) = v.get("puiseux") {
            let arr = pu
                .as_array()
                .ok_or_else(|| Error::Parse("puiseux: expected array of rationals".into()))?;
            let mut exps = Vec::new();
            for x in arr {
                let s = x
                    .as_str()
                    .ok_or_else(|| Error::Parse("puiseux: exponents are strings".into()))?;
                exps.push(parse_exponent(s)?);
            }
            let np = puiseux_to_newton(&exps)?;
            return Ok(Self::from_newton(&np));
        }
        let steps = v
            .get("steps")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("branch: missing steps".into()))?;
        let mut out = Vec::new();
        for s in steps {
            if let Some(r) = s.get("ramified") {
                let pair = r
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Parse("ramified: expected [p, q]".into()))?;
                let p = pair[0]
                    .as_u64()
                    .ok_or_else(|| Error::Parse("ramified: bad p".into()))?
                    as usize;
                let q = pair[1]
                    .as_u64()
                    .ok_or_else(|| Error::Parse("ramified: bad q".into()))?
                    as usize;
                out.push(Step::Ramified { p, q });
            } else if let Some(u) = s.get("unramified") {
                let f = u
                    .get("f")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("unramified: bad f".into()))?
                    as usize;
                let a = u
                    .get("a")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("unramified: bad a".into()))?
                    as usize;
                out.push(Step::Unramified { f, a });
            } else {
                return Err(Error::Parse("branch step must be ramified or unramified".into()));
            }
        }
        Self::new(out)
    }
}

pub fn parse_exponent(s: &str) -> Result<Exponent> {
    let parse = |t: &str| -> Result<i64> {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
    };
    match s.split_once('/') {
        None => Ok(Exponent::from_integer(parse(s)?)),
        Some((a, b)) => {
            let den = parse(b)?;
            if den == 0 {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(Exponent::new(parse(a)?, den))
        }
    }
}

/// The arithmetic datum of gamma: branches, optional cross-branch contact
/// valuations, and an optional dimension override.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSpec {
    branches: Vec<BranchSpec>,
    contact: BTreeMap<(usize, usize), Exponent>,
    dim_override: Option<usize>,
}

impl GammaSpec {
    pub fn new(
        branches: Vec<BranchSpec>,
        contact: BTreeMap<(usize, usize), Exponent>,
        dim_override: Option<usize>,
    ) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::Invalid("at least one branch is required".into()));
        }
        for (&(i, j), c) in &contact {
            if i >= j || j >= branches.len() {
                return Err(Error::Invalid(format!("bad contact key ({i},{j})")));
            }
            if !c.is_positive() {
                return Err(Error::Invalid("contact valuations must be positive".into()));
            }
        }
        Ok(GammaSpec { branches, contact, dim_override })
    }

    pub fn single(branch: BranchSpec) -> Self {
        GammaSpec { branches: vec![branch], contact: BTreeMap::new(), dim_override: None }
    }

    pub fn from_newton(pairs: &NewtonPairs) -> Self {
        Self::single(BranchSpec::from_newton(pairs))
    }

    pub fn branches(&self) -> &[BranchSpec] {
        &self.branches
    }

    pub fn contact(&self, i: usize, j: usize) -> Option<Exponent> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.contact.get(&key).copied()
    }

    pub fn dim_override(&self) -> Option<usize> {
        self.dim_override
    }

    pub fn degree(&self) -> usize {
        self.branches.iter().map(|b| b.degree()).sum()
    }

    pub fn warnings(&self) -> Vec<String> {
        self.branches.iter().flat_map(|b| b.warnings()).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert(
            "branches".into(),
            Value::Array(self.branches.iter().map(|b| b.to_json()).collect()),
        );
        if !self.contact.is_empty() {
            let mut c = serde_json::Map::new();
            for (&(i, j), v) in &self.contact {
                c.insert(format!("{i},{j}"), Value::from(v.to_string()));
            }
            obj.insert("contact".into(), Value::Object(c));
        }
        if let Some(d) = self.dim_override {
            obj.insert("dim_override".into(), Value::from(d));
        }
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let branches = v
            .get("branches")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("spec: missing branches".into()))?
            .iter()
            .map(BranchSpec::from_json)
            .collect::<Result<Vec<_>>>()?;
        let mut contact = BTreeMap::new();
        if let Some(c) = v.get("contact") {
            let obj = c
                .as_object()
                .ok_or_else(|| Error::Parse("spec: contact must be an object".into()))?;
            for (key, val) in obj {
                let (i, j) = key
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("bad contact key {key:?}")))?;
                let i: usize = i
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad contact key {key:?}")))?;
                let j: usize = j
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad contact key {key:?}")))?;
                let s = val
                    .as_str()
                    .ok_or_else(|| Error::Parse("contact values are strings".into()))?;
                let (i, j) = if i < j { (i, j) } else { (j, i) };
                contact.insert((i, j), parse_exponent(s)?);
            }
        }
        let dim_override = match v.get("dim_override") {
            None => None,
            Some(d) => Some(
                d.as_u64()
                    .ok_or_else(|| Error::Parse("dim_override must be a nonnegative integer".into()))?
                    as usize,
            ),
        };
        Self::new(branches, contact, dim_override)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Step::Ramified { p, q } => write!(f, "({p},{q})"),
            Step::Unramified { f: fd, a } => write!(f, "u:{fd},{a}"),
        }
    }
}

/// Convert strictly decreasing positive Puiseux exponents to Newton pairs,
/// innermost first.
pub fn puiseux_to_newton(exponents: &[Exponent]) -> Result<NewtonPairs> {
    for w in exponents.windows(2) {
        if w[0] <= w[1] {
            return Err(Error::Invalid("puiseux exponents must be strictly decreasing".into()));
        }
    }
    if exponents.iter().any(|e| !e.is_positive()) {
        return Err(Error::Invalid("puiseux exponents must be positive".into()));
    }
    let d = exponents.len();
    let mut pairs = vec![(1usize, 1usize); d];
    let mut p_prod = Exponent::one();
    for i in (0..d).rev() {
        let r = if i + 1 == d {
            exponents[i]
        } else {
            (exponents[i] - exponents[i + 1]) * p_prod
        };
        let (p, q) = (*r.denom() as usize, *r.numer() as usize);
        pairs[i] = (p, q);
        p_prod *= Exponent::from_integer(p as i64);
    }
    NewtonPairs::new(pairs)
}

/// Inverse of [`puiseux_to_newton`]: the strictly decreasing exponent list.
pub fn newton_to_puiseux(pairs: &NewtonPairs) -> Vec<Exponent> {
    let d = pairs.pairs().len();
    let mut out = vec![Exponent::zero(); d];
    let mut acc = Exponent::zero();
    let mut p_prod = Exponent::one();
    for i in (0..d).rev() {
        let (p, q) = pairs.pairs()[i];
        p_prod *= Exponent::from_integer(p as i64);
        acc += Exponent::new(q as i64, 1) / p_prod;
        out[i] = acc;
    }
    out
}

/// The cabling pairs (p_i, a_i) with a_d = q_d and
/// a_i = a_{i+1} p_{i+1} p_i + q_i.
pub fn newton_to_cabling(pairs: &NewtonPairs) -> Vec<(usize, usize)> {
    let ps = pairs.pairs();
    let d = ps.len();
    let mut out = vec![(0usize, 0usize); d];
    let mut next_a = 0usize;
    for i in (0..d).rev() {
        let (p, q) = ps[i];
        let a = if i + 1 == d { q } else { next_a * ps[i + 1].0 * p + q };
        out[i] = (p, a);
        next_a = a;
    }
    out
}

/// The delta invariant (Seifert genus of the associated cable link), via the
/// genus recursion over the cabling pairs.
pub fn delta_invariant(pairs: &NewtonPairs) -> usize {
    let cab = newton_to_cabling(pairs);
    let mut g = 0usize;
    for i in (0..cab.len()).rev() {
        let (p, a) = cab[i];
        g = if i + 1 == cab.len() {
            (p - 1) * (a - 1) / 2
        } else {
            p * g + (p - 1) * (a - 1) / 2
        };
    }
    g
}

/// Master symmetric function of one branch, in the elementary basis.
pub fn branch_master(branch: &BranchSpec) -> Result<SymFun> {
    let mut f = SymFun::basis_element(Basis::E, Partition::single_row(1));
    let mut n_cur = 1usize;
    for step in branch.steps() {
        match *step {
            Step::Ramified { p, q } => {
                f = slope_plethysm(&f, q, p)?;
                n_cur *= p;
            }
            Step::Unramified { f: fd, a } => {
                let g = nabla_t1(&adams(&f, fd)?, a)?;
                let g = if (n_cur * (fd - 1)) % 2 == 1 { g.negated() } else { g };
                f = convert(&g, Basis::E)?;
                n_cur *= fd;
            }
        }
    }
    Ok(f)
}

/// Master symmetric function of the full datum: the product over branches.
/// Elementary basis, degree equal to the total degree.
pub fn master_symfun(spec: &GammaSpec) -> Result<SymFun> {
    let mut f = SymFun::one(Basis::E);
    for b in spec.branches() {
        f = multiply(&f, &branch_master(b)?)?;
    }
    Ok(f)
}

/// Expand a master symmetric function into its three germ tables.
pub fn germ_tables(f: &SymFun) -> Result<GermTable> {
    Ok(GermTable {
        shalika: convert(f, Basis::Th)?.coeffs().clone(),
        steinberg: convert(f, Basis::H)?.coeffs().clone(),
        dyck: convert(f, Basis::E)?.coeffs().clone(),
    })
}

/// A transition matrix on th-coefficient vectors: rows indexed by partitions
/// of the target degree, columns by partitions of the source degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThMatrix {
    pub row_parts: Vec<Partition>,
    pub col_parts: Vec<Partition>,
    pub entries: Vec<Vec<RatFun>>,
}

impl ThMatrix {
    pub fn entry(&self, row: &Partition, col: &Partition) -> RatFun {
        let r = self.row_parts.iter().position(|p| p == row);
        let c = self.col_parts.iter().position(|p| p == col);
        match (r, c) {
            (Some(r), Some(c)) => self.entries[r][c].clone(),
            _ => RatFun::zero(),
        }
    }

    pub fn apply(&self, v: &BTreeMap<Partition, RatFun>) -> BTreeMap<Partition, RatFun> {
        let mut out = BTreeMap::new();
        for (r, row_part) in self.row_parts.iter().enumerate() {
            let mut acc = RatFun::zero();
            for (c, col_part) in self.col_parts.iter().enumerate() {
                if let Some(x) = v.get(col_part) {
                    if !self.entries[r][c].is_zero() && !x.is_zero() {
                        acc = acc.add_ref(&self.entries[r][c].mul_ref(x));
                    }
                }
            }
            if !acc.is_zero() {
                out.insert(row_part.clone(), acc);
            }
        }
        out
    }
}

fn matrix_cache(
) -> &'static std::sync::Mutex<std::collections::HashMap<((usize, usize), usize, usize), ThMatrix>>
{
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<
        Mutex<std::collections::HashMap<((usize, usize), usize, usize), ThMatrix>>,
    > = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(std::collections::HashMap::new()))
}

fn transition_matrix_for_slope(
    slope: (usize, usize),
    stretch: usize,
    nprime: usize,
) -> Result<ThMatrix> {
    if let Some(m) = matrix_cache().lock().unwrap().get(&(slope, stretch, nprime)) {
        return Ok(m.clone());
    }
    let col_parts = partitions(nprime);
    let row_parts = partitions(nprime * stretch);
    let mut entries = vec![vec![RatFun::zero(); col_parts.len()]; row_parts.len()];
    let row_index: BTreeMap<Partition, usize> = row_parts
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    for (c, lambda_p) in col_parts.iter().enumerate() {
        // th_{lambda'} = c_{lambda'} sum_mu |S_{lambda'} cap C_mu| /
        //                (lambda'! b_mu) p_mu, and each p_mu maps to the
        //                product of the per-part operator images on the
        //                vacuum. A part mu_i contributes a degree
        //                mu_i * stretch factor, so its k index is
        //                mu_i * stretch / n_slope.
        let c_lp = RatFun::from_poly(c_poly(lambda_p));
        let fact = RatFun::from_rat(crate::Rat::from_integer(lambda_p.parts_factorial()));
        let mut acc = SymFun::zero(Basis::Th, nprime * stretch);
        for mu in partitions(nprime) {
            let count = crate::combinat::young_cycle_count(lambda_p, &mu)?;
            if count.is_zero() {
                continue;
            }
            let mut term = SymFun::one(Basis::Th);
            for &part in mu.parts() {
                let k = part * stretch / slope.1;
                term = multiply(&term, &pkm_compositions(slope.0, slope.1, k)?)?;
            }
            let b = RatFun::from_poly(b_poly(&mu));
            let w = RatFun::from_rat(crate::Rat::from_integer(count))
                .div_ref(&b.mul_ref(&fact))?;
            acc = acc.add(&term.scale(&w))?;
        }
        let acc = acc.scale(&c_lp);
        for (lambda, v) in acc.coeffs() {
            entries[row_index[lambda]][c] = v.clone();
        }
    }
    let m = ThMatrix { row_parts, col_parts, entries };
    matrix_cache()
        .lock()
        .unwrap()
        .insert((slope, stretch, nprime), m.clone());
    Ok(m)
}

/// The Shalika-germ transition matrix of one ramified step with pair (p, q):
/// entry (lambda, lambda') is the coefficient of th_lambda in the image of
/// th_{lambda'} under the slope-q/p plethysm, computed entirely through
/// composition weights.
pub fn transition_matrix(p: usize, q: usize, nprime: usize) -> Result<ThMatrix> {
    if p < 1 || nprime < 1 {
        return Err(Error::Invalid("transition_matrix requires p, n' >= 1".into()));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NonCoprime { m: q, n: p });
    }
    transition_matrix_for_slope((q, p), p, nprime)
}

/// The unramified analog: the matrix of the Adams operation tau_f on
/// th-coefficient vectors, using the zero-slope composition weights.
fn unramified_matrix(f: usize, nprime: usize) -> Result<ThMatrix> {
    transition_matrix_for_slope((0, 1), f, nprime)
}

/// The master symmetric function computed through transition-matrix
/// applications on th-coefficient vectors. Independent of the Dyck-path
/// route: only the composition weights and basic combinatorics are shared.
/// Returns a th-basis expansion.
pub fn waldspurger_master(spec: &GammaSpec) -> Result<SymFun> {
    let mut total = SymFun::one(Basis::Th);
    for branch in spec.branches() {
        let mut v: BTreeMap<Partition, RatFun> = BTreeMap::new();
        v.insert(Partition::single_row(1), RatFun::one());
        let mut n_cur = 1usize;
        for step in branch.steps() {
            match *step {
                Step::Ramified { p, q } => {
                    let m = transition_matrix(p, q, n_cur)?;
                    v = m.apply(&v);
                    n_cur *= p;
                }
                Step::Unramified { f, a } => {
                    let m = unramified_matrix(f, n_cur)?;
                    v = m.apply(&v);
                    let negate = (n_cur * (f - 1)) % 2 == 1;
                    n_cur *= f;
                    let mut scaled = BTreeMap::new();
                    for (k, c) in v {
                        let mut c = c.mul_ref(&RatFun::q_pow((a * twist_exponent(&k)) as i64));
                        if negate {
                            c = c.negated();
                        }
                        scaled.insert(k, c);
                    }
                    v = scaled;
                }
            }
        }
        let branch_fun = SymFun::from_coeffs(Basis::Th, n_cur, v)?;
        total = multiply(&total, &branch_fun)?;
    }
    Ok(total)
}

/// Experimental: the conjectured graph expansion of the renormalized
/// transition matrix c_lambda/c_lambda' M_{lambda,lambda'}.
///
/// Directed graphs on the boxes of lambda' with edges within rows and all
/// degrees 1 are row-wise permutations; each cycle is dilated p-fold, at
/// least one edge is deleted from every dilated cycle, and a surviving chain
/// of vertices contributes q^{coarm * S_{q/p}(vertex)} with vertices labeled
/// cyclically inside their dilated cycle.
pub fn graph_transition_matrix(p: usize, q: usize, nprime: usize) -> Result<ThMatrix> {
    if p < 1 || nprime < 1 {
        return Err(Error::Invalid("graph_transition_matrix requires p, n' >= 1".into()));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NonCoprime { m: q, n: p });
    }
    // Edge subsets are enumerated by bitmask; this is a desk-scale check.
    if p * nprime > 12 {
        return Err(Error::Invalid(
            "graph_transition_matrix is limited to p * n' <= 12".into(),
        ));
    }
    let col_parts = partitions(nprime);
    let row_parts = partitions(nprime * p);
    let row_index: BTreeMap<Partition, usize> = row_parts
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, pp)| (pp, i))
        .collect();
    let mut entries = vec![vec![RatFun::zero(); col_parts.len()]; row_parts.len()];

    for (cidx, lambda_p) in col_parts.iter().enumerate() {
        // Accumulate over all row-wise permutations, keyed by the sorted
        // chain multiset.
        let mut acc: BTreeMap<Partition, RatFun> = BTreeMap::new();
        for cycle_type in young_subgroup_cycle_types(lambda_p) {
            let (mu, count) = cycle_type;
            let sign_g = (nprime - mu.len()) % 2 == 0;
            // Per-cycle chain generating functions, convolved over cycles.
            let mut combo: BTreeMap<Partition, RatFun> = BTreeMap::new();
            combo.insert(Partition::empty(), RatFun::one());
            for &c in mu.parts() {
                let per_cycle = dilated_cycle_chains(c * p, q, p);
                let mut next: BTreeMap<Partition, RatFun> = BTreeMap::new();
                for (k1, v1) in &combo {
                    for (k2, v2) in &per_cycle {
                        let key = k1.merge(k2);
                        let add = v1.mul_ref(v2);
                        let e = next.entry(key).or_insert_with(RatFun::zero);
                        *e = e.add_ref(&add);
                    }
                }
                next.retain(|_, v| !v.is_zero());
                combo = next;
            }
            let count_rf = RatFun::from_rat(crate::Rat::from_integer(count));
            for (k, v) in combo {
                let mut add = v.mul_ref(&count_rf);
                if !sign_g {
                    add = add.negated();
                }
                let e = acc.entry(k).or_insert_with(RatFun::zero);
                *e = e.add_ref(&add);
            }
        }
        let fact = RatFun::from_rat(crate::Rat::from_integer(lambda_p.parts_factorial()));
        for (lambda, v) in acc {
            let sign = (nprime * p - lambda.len()) % 2 == 0;
            let mut entry = v.div_ref(&fact)?;
            if !sign {
                entry = entry.negated();
            }
            if !entry.is_zero() {
                entries[row_index[&lambda]][cidx] = entry;
            }
        }
    }
    Ok(ThMatrix { row_parts, col_parts, entries })
}

/// Cycle types arising in the Young subgroup S_lambda, with multiplicities.
fn young_subgroup_cycle_types(lambda: &Partition) -> Vec<(Partition, crate::Int)> {
    let mut out: BTreeMap<Partition, crate::Int> = BTreeMap::new();
    for mu in partitions(lambda.size()) {
        let c = crate::combinat::young_cycle_count(lambda, &mu).expect("same size");
        if !c.is_zero() {
            out.insert(mu, c);
        }
    }
    out.into_iter().collect()
}

/// Chain generating function of one dilated cycle of length `len`: for every
/// nonempty edge-deletion set, the sorted chain lengths weighted by
/// q^{sum_v coarm(v) S_{q/p}(label(v))} with labels 1..len cyclic.
fn dilated_cycle_chains(len: usize, qq: usize, pp: usize) -> BTreeMap<Partition, RatFun> {
    let s: Vec<usize> = (1..=len)
        .map(|i| slope_steps_pub(qq, pp, i))
        .collect();
    let mut out: BTreeMap<Partition, RatFun> = BTreeMap::new();
    // Iterate over nonempty subsets of the `len` edges; edge i runs from
    // vertex i to vertex i % len + 1 (1-based).
    for mask in 1u64..(1u64 << len) {
        let deleted: Vec<usize> = (0..len).filter(|i| mask & (1 << i) != 0).collect();
        let mut lengths = Vec::new();
        let mut exponent = 0i64;
        for w in 0..deleted.len() {
            // Chain starting after deleted edge w, ending at deleted edge
            // w+1 (cyclically).
            let start = (deleted[w] + 1) % len; // 0-based start vertex
            let end = deleted[(w + 1) % deleted.len()]; // 0-based end vertex
            let chain_len = (end + len - start) % len + 1;
            lengths.push(chain_len);
            for offset in 0..chain_len {
                let vertex = (start + offset) % len; // 0-based label - 1
                exponent += (offset as i64) * (s[vertex] as i64);
            }
        }
        let key = Partition::new(lengths);
        let e = out.entry(key).or_insert_with(RatFun::zero);
        *e = e.add_ref(&RatFun::q_pow(exponent));
    }
    out
}

fn slope_steps_pub(m: usize, n: usize, i: usize) -> usize {
    crate::combinat::slope_steps(m, n, i, crate::combinat::SlopeMode::Ceil)
}

/// Renormalized matrix entry: c_lambda / c_lambda' times the transition
/// matrix, the quantity the graph expansion conjecturally computes.
pub fn renormalized_transition_matrix(p: usize, q: usize, nprime: usize) -> Result<ThMatrix> {
    let m = transition_matrix(p, q, nprime)?;
    let mut entries = m.entries.clone();
    for (r, lambda) in m.row_parts.iter().enumerate() {
        let cl = RatFun::from_poly(c_poly(lambda));
        for (c, lambda_p) in m.col_parts.iter().enumerate() {
            if entries[r][c].is_zero() {
                continue;
            }
            let clp = RatFun::from_poly(c_poly(lambda_p));
            entries[r][c] = entries[r][c].mul_ref(&cl).div_ref(&clp)?;
        }
    }
    Ok(ThMatrix { row_parts: m.row_parts, col_parts: m.col_parts, entries })
}

/// Pairing of the master symmetric function with e_(n): its q-degree is the
/// delta invariant for elliptic totally ramified data.
pub fn spherical_pairing(f: &SymFun) -> Result<RatFun> {
    let en = SymFun::basis_element(Basis::E, Partition::single_row(f.degree()));
    hall_pair(f, &en)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::QPoly;

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn rf(num: &[i64], den: &[i64]) -> RatFun {
        RatFun::new(QPoly::from_coeff_slice(num), QPoly::from_coeff_slice(den)).unwrap()
    }

    fn np(pairs: &[(usize, usize)]) -> NewtonPairs {
        NewtonPairs::new(pairs.to_vec()).unwrap()
    }

    fn exps(list: &[(i64, i64)]) -> Vec<Exponent> {
        list.iter().map(|&(a, b)| Exponent::new(a, b)).collect()
    }

    #[test]
    fn puiseux_conversions() {
        assert_eq!(
            puiseux_to_newton(&exps(&[(7, 4), (3, 2)])).unwrap(),
            np(&[(2, 1), (2, 3)])
        );
        assert_eq!(
            puiseux_to_newton(&exps(&[(15, 8), (7, 4), (3, 2)])).unwrap(),
            np(&[(2, 1), (2, 1), (2, 3)])
        );
        assert_eq!(puiseux_to_newton(&exps(&[(3, 2)])).unwrap(), np(&[(2, 3)]));
        // Round trip.
        for pairs in [np(&[(2, 1), (2, 3)]), np(&[(2, 1), (2, 1), (2, 3)]), np(&[(3, 5)])] {
            let ex = newton_to_puiseux(&pairs);
            assert_eq!(puiseux_to_newton(&ex).unwrap(), pairs);
        }
        assert!(puiseux_to_newton(&exps(&[(1, 2), (3, 2)])).is_err());
    }

    #[test]
    fn cabling_pairs() {
        assert_eq!(newton_to_cabling(&np(&[(2, 1), (2, 3)])), vec![(2, 13), (2, 3)]);
        assert_eq!(
            newton_to_cabling(&np(&[(2, 1), (2, 1), (2, 3)])),
            vec![(2, 53), (2, 13), (2, 3)]
        );
        assert_eq!(newton_to_cabling(&np(&[(3, 5)])), vec![(3, 5)]);
    }

    #[test]
    fn delta_invariants() {
        assert_eq!(delta_invariant(&np(&[(2, 3)])), 1);
        assert_eq!(delta_invariant(&np(&[(2, 1), (2, 3)])), 8);
        assert_eq!(delta_invariant(&np(&[(2, 1), (2, 1), (2, 3)])), 42);
    }

    #[test]
    fn master_of_double_cable() {
        // f_{(2,1),(2,3)} = phi_{3/2}(e_2), the five-term expansion.
        let spec = GammaSpec::from_newton(&np(&[(2, 1), (2, 3)]));
        let f = master_symfun(&spec).unwrap();
        assert_eq!(f.coeff(&pt(&[1, 1, 1, 1])), rf(&[1, 1, 1], &[1]));
        assert_eq!(f.coeff(&pt(&[4])), RatFun::q_pow(8));
        assert_eq!(f.coeffs().len(), 5);
    }

    #[test]
    fn master_of_two_branches() {
        // Two (2,3)-branches: (e_11 + q e_2)^2.
        let b = BranchSpec::from_newton(&np(&[(2, 3)]));
        let spec = GammaSpec::new(vec![b.clone(), b], BTreeMap::new(), None).unwrap();
        let f = master_symfun(&spec).unwrap();
        assert_eq!(f.coeff(&pt(&[1, 1, 1, 1])), RatFun::one());
        assert_eq!(f.coeff(&pt(&[2, 1, 1])), rf(&[0, 2], &[1]));
        assert_eq!(f.coeff(&pt(&[2, 2])), rf(&[0, 0, 1], &[1]));
    }

    #[test]
    fn master_of_unramified_step() {
        // A single unramified step on the trivial branch: e_11 + 2q e_2.
        let b = BranchSpec::new(vec![Step::Unramified { f: 2, a: 1 }]).unwrap();
        let f = master_symfun(&GammaSpec::single(b)).unwrap();
        assert_eq!(f.coeff(&pt(&[1, 1])), RatFun::one());
        assert_eq!(f.coeff(&pt(&[2])), rf(&[0, 2], &[1]));
    }

    #[test]
    fn germ_tables_of_u6() {
        let b = BranchSpec::from_newton(&np(&[(2, 3)]));
        let spec = GammaSpec::new(vec![b.clone(), b], BTreeMap::new(), None).unwrap();
        let t = germ_tables(&master_symfun(&spec).unwrap()).unwrap();
        // Shalika: th-coefficients.
        assert_eq!(t.shalika[&pt(&[1, 1, 1, 1])], rf(&[1], &[1, -2, 1]));
        assert_eq!(t.shalika[&pt(&[2, 1, 1])], rf(&[0, -2], &[1, -2, 1]));
        assert_eq!(t.shalika[&pt(&[2, 2])], rf(&[0, 0, 1], &[1, -2, 1]));
        assert_eq!(t.shalika.len(), 3);
        // Steinberg: h-coefficients.
        assert_eq!(t.steinberg[&pt(&[1, 1, 1, 1])], rf(&[1, 2, 1], &[1]));
        assert_eq!(t.steinberg[&pt(&[2, 1, 1])], rf(&[0, -2, -2], &[1]));
        assert_eq!(t.steinberg[&pt(&[2, 2])], rf(&[0, 0, 1], &[1]));
        // Trivial branch: all three tables are {(1): 1}.
        let e1 = SymFun::basis_element(Basis::E, pt(&[1]));
        let t = germ_tables(&e1).unwrap();
        assert_eq!(t.shalika[&pt(&[1])], RatFun::one());
        assert_eq!(t.steinberg[&pt(&[1])], RatFun::one());
        assert_eq!(t.dyck[&pt(&[1])], RatFun::one());
    }

    #[test]
    fn transition_vanishing_entry() {
        // Column (2) of the (p,q) = (2,3) matrix has zero entry at (2,1,1).
        let m = transition_matrix(2, 3, 2).unwrap();
        assert!(m.entry(&pt(&[2, 1, 1]), &pt(&[2])).is_zero());
        // Sanity: the same column is nonzero elsewhere.
        assert!(!m.entry(&pt(&[2, 2]), &pt(&[2])).is_zero());
    }

    #[test]
    fn transition_with_unit_p_is_the_nabla_twist() {
        for nprime in 1..=3 {
            for s in 1..=2usize {
                let m = transition_matrix(1, s, nprime).unwrap();
                for (r, lambda) in m.row_parts.iter().enumerate() {
                    for (c, lambda_p) in m.col_parts.iter().enumerate() {
                        let expected = if lambda == lambda_p {
                            RatFun::q_pow((s * twist_exponent(lambda)) as i64)
                        } else {
                            RatFun::zero()
                        };
                        assert_eq!(m.entries[r][c], expected, "at {lambda},{lambda_p}");
                    }
                }
                // Cross-check against the plethysm route on th-elements.
                for lambda_p in &m.col_parts {
                    let th = SymFun::basis_element(Basis::Th, lambda_p.clone());
                    let via = convert(&slope_plethysm(&th, s, 1).unwrap(), Basis::Th).unwrap();
                    assert_eq!(
                        via.coeff(lambda_p),
                        m.entry(lambda_p, lambda_p),
                        "plethysm cross-check at {lambda_p}"
                    );
                }
            }
        }
    }

    #[test]
    fn transition_first_column_is_p32() {
        let m = transition_matrix(2, 3, 1).unwrap();
        let p32 = pkm_compositions(3, 2, 1).unwrap();
        for (r, lambda) in m.row_parts.iter().enumerate() {
            assert_eq!(m.entries[r][0], p32.coeff(lambda));
        }
    }

    #[test]
    fn two_route_equality_on_worked_examples() {
        for pairs in [np(&[(2, 1), (2, 3)]), np(&[(2, 3)]), np(&[(3, 4)])] {
            let spec = GammaSpec::from_newton(&pairs);
            let a = convert(&master_symfun(&spec).unwrap(), Basis::Th).unwrap();
            let b = waldspurger_master(&spec).unwrap();
            assert_eq!(a, b, "route mismatch for {:?}", pairs);
        }
    }

    #[test]
    fn two_route_equality_with_unramified_steps() {
        let b = BranchSpec::new(vec![
            Step::Ramified { p: 2, q: 3 },
            Step::Unramified { f: 2, a: 1 },
        ])
        .unwrap();
        let spec = GammaSpec::single(b);
        let a = convert(&master_symfun(&spec).unwrap(), Basis::Th).unwrap();
        let bb = waldspurger_master(&spec).unwrap();
        assert_eq!(a, bb);
        let b = BranchSpec::new(vec![
            Step::Unramified { f: 2, a: 1 },
            Step::Ramified { p: 2, q: 3 },
        ])
        .unwrap();
        let spec = GammaSpec::single(b);
        let a = convert(&master_symfun(&spec).unwrap(), Basis::Th).unwrap();
        let bb = waldspurger_master(&spec).unwrap();
        assert_eq!(a, bb);
    }

    #[test]
    fn homogeneity_twist_on_shalika_coefficients() {
        let spec = GammaSpec::from_newton(&np(&[(2, 3)]));
        let f = master_symfun(&spec).unwrap();
        let twisted = nabla_t1(&f, 1).unwrap();
        let t0 = germ_tables(&f).unwrap();
        let t1 = germ_tables(&twisted).unwrap();
        for (lambda, c) in &t0.shalika {
            let e = twist_exponent(lambda) as i64;
            assert_eq!(t1.shalika[lambda], c.mul_ref(&RatFun::q_pow(e)));
        }
    }

    #[test]
    fn renormalized_germs_are_integral() {
        for pairs in [np(&[(2, 3)]), np(&[(2, 1), (2, 3)]), np(&[(3, 4)])] {
            let spec = GammaSpec::from_newton(&pairs);
            let t = germ_tables(&master_symfun(&spec).unwrap()).unwrap();
            for (lambda, g) in &t.shalika {
                let c = RatFun::from_poly(c_poly(lambda));
                let prod = c.mul_ref(g);
                let p = prod.as_poly().expect("c_lambda Gamma_lambda is polynomial");
                assert!(p.has_int_coeffs(), "non-integral at {lambda}");
            }
        }
    }

    #[test]
    fn delta_matches_pairing_degree() {
        for pairs in [np(&[(2, 3)]), np(&[(2, 1), (2, 3)]), np(&[(3, 4)]), np(&[(3, 5)])] {
            let spec = GammaSpec::from_newton(&pairs);
            let f = master_symfun(&spec).unwrap();
            let pair = spherical_pairing(&f).unwrap();
            assert_eq!(pair.qdegree().unwrap() as usize, delta_invariant(&pairs));
        }
    }

    #[test]
    fn graph_matrix_matches_renormalized_transition() {
        for (p, q, nprime) in [(2usize, 3usize, 1usize), (2, 3, 2), (3, 4, 1), (2, 1, 2), (1, 2, 3)] {
            if p * nprime > 6 {
                continue;
            }
            let got = graph_transition_matrix(p, q, nprime).unwrap();
            let want = renormalized_transition_matrix(p, q, nprime).unwrap();
            assert_eq!(got.row_parts, want.row_parts);
            for r in 0..got.row_parts.len() {
                for c in 0..got.col_parts.len() {
                    assert_eq!(
                        got.entries[r][c], want.entries[r][c],
                        "graph mismatch at ({p},{q},n'={nprime}) entry ({r},{c})"
                    );
                }
            }
        }
    }

    #[test]
    fn json_round_trips() {
        let b = BranchSpec::new(vec![
            Step::Ramified { p: 2, q: 1 },
            Step::Unramified { f: 2, a: 1 },
            Step::Ramified { p: 2, q: 3 },
        ])
        .unwrap();
        let mut contact = BTreeMap::new();
        contact.insert((0, 1), Exponent::new(3, 2));
        let spec = GammaSpec::new(vec![b.clone(), b], contact, Some(8)).unwrap();
        let j = spec.to_json();
        assert_eq!(GammaSpec::from_json(&j).unwrap(), spec);
        // Puiseux-style branch input.
        let v: Value = serde_json::from_str(
            r#"{"branches": [{"puiseux": ["7/4", "3/2"]}]}"#,
        )
        .unwrap();
        let spec = GammaSpec::from_json(&v).unwrap();
        assert_eq!(
            spec.branches()[0],
            BranchSpec::from_newton(&np(&[(2, 1), (2, 3)]))
        );
    }

    #[test]
    fn low_slope_warning() {
        let pairs = np(&[(2, 1)]);
        assert_eq!(pairs.warnings().len(), 1);
        assert!(np(&[(2, 3)]).warnings().is_empty());
    }
}
