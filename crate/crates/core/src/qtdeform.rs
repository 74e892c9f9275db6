//! The q,t-deformed master symmetric function of a torus knot via standard
//! Young tableau weights, its superpolynomial, and the t = 1 degeneration
//! checks against the composition-weight route.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::One;
use serde_json::{json, Value};

use crate::bivar::{Poly2, QtRatFun};
use crate::combinat::{partitions, slope_steps, syt, SlopeMode, Partition, Tableau};
use crate::error::{Error, Result};
use crate::{qt_degree_cap, Rat};

/// Number of label pairs (i, i+1) sitting in consecutive columns.
fn consecutive_column_pairs(t: &Tableau) -> usize {
    let pos = t.positions();
    pos.windows(2)
        .filter(|w| w[1].0 == w[0].0 + 1)
        .count()
}

/// The order of vanishing at t = 1 of the tableau weight:
/// v(T) = |shape| - length(shape) - pi(T). Zero exactly on the tableaux that
/// come from compositions.
pub fn vanishing_order(t: &Tableau) -> usize {
    let n = t.size();
    let l = t.shape().len();
    let pi = consecutive_column_pairs(t);
    n - l - pi
}

/// Accumulates a product of factors of the form q^a t^b (1 - q^x t^y),
/// split across a fraction, with identical binomials cancelled symbolically
/// before anything is expanded. Only the residual relations between distinct
/// binomials (such as 1 - q^2 t^2 against 1 - q t) are left for the final
/// rational-function reduction.
struct FactorProduct {
    /// Net monomial exponents (numerator minus denominator).
    mono_q: i64,
    mono_t: i64,
    sign: bool,
    /// Normalized binomial (larger monomial, smaller monomial) -> net power.
    binomials: BTreeMap<((usize, usize), (usize, usize)), i64>,
}

impl FactorProduct {
    fn new() -> Self {
        FactorProduct { mono_q: 0, mono_t: 0, sign: false, binomials: BTreeMap::new() }
    }

    fn push_monomial(&mut self, qe: i64, te: i64, to_num: bool) {
        if to_num {
            self.mono_q += qe;
            self.mono_t += te;
        } else {
            self.mono_q -= qe;
            self.mono_t -= te;
        }
    }

    /// Multiply by (1 - q^dq t^dt) into the numerator (`to_num`) or the
    /// denominator. Returns false when the factor vanishes identically, so
    /// the caller can skip it per the weight convention.
    fn push_one_minus(&mut self, dq: i64, dt: i64, to_num: bool) -> bool {
        if dq == 0 && dt == 0 {
            return false;
        }
        // Clear to q^a t^b - q^c t^d with nonnegative exponents.
        let ca = ((-dq).max(0), (-dt).max(0));
        let cb = ((dq + ca.0).max(0) as usize, (dt + ca.1).max(0) as usize);
        let ca_u = (ca.0 as usize, ca.1 as usize);
        self.push_monomial(-ca.0, -ca.1, to_num);
        // Extract the common monomial of the two terms.
        let shared = (ca_u.0.min(cb.0), ca_u.1.min(cb.1));
        let m1 = (ca_u.0 - shared.0, ca_u.1 - shared.1);
        let m2 = (cb.0 - shared.0, cb.1 - shared.1);
        self.push_monomial(shared.0 as i64, shared.1 as i64, to_num);
        let (hi, lo, flip) = if m1 > m2 { (m1, m2, false) } else { (m2, m1, true) };
        if flip {
            self.sign ^= true;
        }
        let entry = self.binomials.entry((hi, lo)).or_insert(0);
        *entry += if to_num { 1 } else { -1 };
        true
    }

    fn into_ratfun(self) -> Result<QtRatFun> {
        let mut num = Poly2::one();
        let mut den = Poly2::one();
        for (&((hq, ht), (lq, lt)), &count) in &self.binomials {
            let b = Poly2::monomial(hq, ht, Rat::one())
                .minus(&Poly2::monomial(lq, lt, Rat::one()));
            for _ in 0..count.unsigned_abs() {
                if count > 0 {
                    num = num.times(&b);
                } else {
                    den = den.times(&b);
                }
            }
        }
        if self.mono_q >= 0 {
            num = num.times(&Poly2::monomial(self.mono_q as usize, 0, Rat::one()));
        } else {
            den = den.times(&Poly2::monomial((-self.mono_q) as usize, 0, Rat::one()));
        }
        if self.mono_t >= 0 {
            num = num.times(&Poly2::monomial(0, self.mono_t as usize, Rat::one()));
        } else {
            den = den.times(&Poly2::monomial(0, (-self.mono_t) as usize, Rat::one()));
        }
        if self.sign {
            num = num.negated();
        }
        if den.is_zero() {
            return Err(Error::Internal("residual zero denominator in tableau weight".into()));
        }
        QtRatFun::new(num, den)
    }
}

/// The full q,t weight of a standard Young tableau at slope m/n.
///
/// With z_i the q,t-content of the box labeled i and S the ceiling slope
/// steps, the weight is
///
/// ```text
///   prod_i z_i^{S(i)-1}
///   / prod_{i=2..n} (1 - 1/z_i)(1 - qt z_{i-1}/z_i)
///   * prod_{i<j} (1 - z_i/z_j)(1 - qt z_i/z_j)
///               / ((1 - q z_i/z_j)(1 - t z_i/z_j))
/// ```
///
/// Factors that vanish identically as q,t-monomial differences are skipped
/// before multiplying, on both sides of the fraction.
pub fn syt_weight(t: &Tableau, m: usize, n: usize) -> Result<QtRatFun> {
    if n < 1 || m.gcd(&n) != 1 {
        return Err(Error::NonCoprime { m, n });
    }
    if t.size() != n {
        return Err(Error::SizeMismatch { left: t.size(), right: n });
    }
    let pos = t.positions();
    let z = |i: usize| -> (i64, i64) {
        let (c, r) = pos[i - 1];
        (c as i64, r as i64)
    };
    let mut acc = FactorProduct::new();
    // Content powers z_i^{S(i)-1}.
    for i in 1..=n {
        let s = slope_steps(m, n, i, SlopeMode::Ceil) as i64 - 1;
        let (zq, zt) = z(i);
        acc.push_monomial(s * zq, s * zt, true);
    }
    // Denominator chain factors (1 - 1/z_i)(1 - qt z_{i-1}/z_i), i = 2..n.
    for i in 2..=n {
        let (zq, zt) = z(i);
        acc.push_one_minus(-zq, -zt, false);
        let (pq, pt) = z(i - 1);
        acc.push_one_minus(1 + pq - zq, 1 + pt - zt, false);
    }
    // Interaction factors over pairs i < j:
    // (1 - z_i/z_j)(1 - qt z_i/z_j) / ((1 - q z_i/z_j)(1 - t z_i/z_j)).
    for i in 1..=n {
        for j in (i + 1)..=n {
            let (iq, it) = z(i);
            let (jq, jt) = z(j);
            let (dq, dt) = (iq - jq, it - jt);
            acc.push_one_minus(dq, dt, true);
            acc.push_one_minus(1 + dq, 1 + dt, true);
            acc.push_one_minus(1 + dq, dt, false);
            acc.push_one_minus(dq, 1 + dt, false);
        }
    }
    acc.into_ratfun()
}

/// The modified-Macdonald-basis coefficients of the deformed master
/// symmetric function of the (m, n) torus knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QtCoeffMap {
    pub m: usize,
    pub n: usize,
    pub coeffs: BTreeMap<Partition, QtRatFun>,
}

impl QtCoeffMap {
    pub fn coeff(&self, lambda: &Partition) -> QtRatFun {
        self.coeffs
            .get(lambda)
            .cloned()
            .unwrap_or_else(QtRatFun::zero)
    }

    /// The t = 1 specialization of every coefficient, keyed by partition.
    pub fn specialize_t1(&self) -> Result<BTreeMap<Partition, crate::RatFun>> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.coeffs {
            out.insert(k.clone(), v.specialize_t1()?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = partitions(self.n)
            .into_iter()
            .filter_map(|p| self.coeffs.get(&p).map(|c| json!([p.to_json(), c.to_json()])))
            .collect();
        json!({ "m": self.m, "n": self.n, "coeffs": coeffs })
    }
}

/// The deformed master symmetric function of the (m, n) torus knot: for each
/// shape, the sum of the q,t weights over its standard Young tableaux.
pub fn torus_msf_qt(m: usize, n: usize) -> Result<QtCoeffMap> {
    if n < 1 || m.gcd(&n) != 1 {
        return Err(Error::NonCoprime { m, n });
    }
    let cap = qt_degree_cap();
    if n > cap {
        return Err(Error::DegreeCap { degree: n, cap });
    }
    let mut coeffs = BTreeMap::new();
    for shape in partitions(n) {
        let mut acc = QtRatFun::zero();
        for t in syt(&shape) {
            acc = acc.add_ref(&syt_weight(&t, m, n)?);
        }
        if !acc.is_zero() {
            coeffs.insert(shape, acc);
        }
    }
    Ok(QtCoeffMap { m, n, coeffs })
}

/// The superpolynomial of the (m, n) torus knot as a polynomial in a with
/// q,t-rational coefficients, index = power of a:
/// P(a) = sum_lambda coeff_lambda prod_{box} (1 - a q^{coarm} t^{coleg}).
pub fn superpolynomial(m: usize, n: usize) -> Result<Vec<QtRatFun>> {
    let map = torus_msf_qt(m, n)?;
    let mut out = vec![QtRatFun::zero(); n + 1];
    for (lambda, c) in &map.coeffs {
        // Expand prod (1 - a z_box) into a-coefficients.
        let mut apoly: Vec<Poly2> = vec![Poly2::one()];
        for (row, &len) in lambda.parts().iter().enumerate() {
            for col in 0..len {
                let zb = Poly2::monomial(col, row, Rat::one());
                let mut next = vec![Poly2::zero(); apoly.len() + 1];
                for (k, v) in apoly.iter().enumerate() {
                    next[k] = next[k].plus(v);
                    next[k + 1] = next[k + 1].minus(&v.times(&zb));
                }
                apoly = next;
            }
        }
        for (k, v) in apoly.into_iter().enumerate() {
            if !v.is_zero() {
                out[k] = out[k].add_ref(&c.mul_ref(&QtRatFun::from_poly(v)));
            }
        }
    }
    Ok(out)
}
