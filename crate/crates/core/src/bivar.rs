//! Sparse bivariate polynomials in q, t and their reduced rational functions.
//!
//! The gcd needed for reduction treats a bivariate polynomial as a univariate
//! polynomial in t whose coefficients live in the field of rational functions
//! in q, so the generic Euclidean gcd from [`crate::poly`] applies; contents
//! are pulled out Gauss-style. Needed sizes are small, so simplicity wins
//! over asymptotics.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::{Int, Rat};

type QPoly = Poly<Rat>;

/// Sparse polynomial in q and t; keys are `(q_exponent, t_exponent)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(usize, usize), Rat>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, Rat::one())
    }

    pub fn monomial(qe: usize, te: usize, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((qe, te), c);
        }
        Poly2 { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = ((usize, usize), Rat)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in iter {
            p.add_term(k, c);
        }
        p
    }

    fn add_term(&mut self, key: (usize, usize), c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).map_or(false, |c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &Rat)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c.clone());
        }
        r
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }

    pub fn negated(&self) -> Self {
        Poly2 { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }

    pub fn times(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for ((q1, t1), c1) in &self.terms {
            for ((q2, t2), c2) in &o.terms {
                r.add_term((q1 + q2, t1 + t2), c1.clone() * c2.clone());
            }
        }
        r
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut r = Self::one();
        for _ in 0..k {
            r = r.times(self);
        }
        r
    }

    /// Exchange the two variables.
    pub fn swap_vars(&self) -> Self {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|((qe, te), c)| ((*te, *qe), c.clone()))
                .collect(),
        }
    }

    /// Specialize t = 1, leaving a polynomial in q.
    pub fn subst_t_one(&self) -> QPoly {
        QPoly::from_terms(self.terms.iter().map(|((qe, _), c)| (*qe, c.clone())))
    }

    /// Specialize q = 1, leaving a polynomial in the remaining variable t.
    pub fn subst_q_one(&self) -> QPoly {
        QPoly::from_terms(self.terms.iter().map(|((_, te), c)| (*te, c.clone())))
    }

    /// The t-coefficient slices as polynomials in q.
    fn t_slices(&self) -> BTreeMap<usize, QPoly> {
        let mut raw: BTreeMap<usize, Vec<(usize, Rat)>> = BTreeMap::new();
        for ((qe, te), c) in &self.terms {
            raw.entry(*te).or_default().push((*qe, c.clone()));
        }
        raw.into_iter()
            .map(|(te, v)| (te, QPoly::from_terms(v)))
            .collect()
    }

    /// View as a polynomial in t over the field of rational functions in q.
    fn to_tpoly(&self) -> Poly<RatFun> {
        Poly::from_terms(
            self.t_slices()
                .into_iter()
                .map(|(te, p)| (te, RatFun::from_poly(p))),
        )
    }

    /// Content in q: monic gcd of the t-coefficient slices.
    fn content_q(&self) -> QPoly {
        let mut g = QPoly::zero();
        for p in self.t_slices().values() {
            g = if g.is_zero() { p.make_monic() } else { Poly::gcd_rat(&g, p) };
        }
        g
    }

    fn t_degree(&self) -> Option<usize> {
        self.terms.keys().map(|k| k.1).max()
    }

    fn leading_t_slice(&self) -> QPoly {
        match self.t_degree() {
            None => QPoly::zero(),
            Some(d) => QPoly::from_terms(
                self.terms
                    .iter()
                    .filter(|((_, te), _)| *te == d)
                    .map(|((qe, _), c)| (*qe, c.clone())),
            ),
        }
    }

    fn times_t_pow(&self, k: usize) -> Self {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|((qe, te), c)| ((*qe, te + k), c.clone()))
                .collect(),
        }
    }

    /// Divide out the q-content, leaving a q-primitive polynomial.
    fn primitive_q(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_q();
        if c.is_one() {
            return self.clone();
        }
        let mut out = Self::zero();
        for (te, slice) in self.t_slices() {
            let quo = slice.div_exact(&c).expect("content divides every slice");
            for (qe, v) in quo.terms() {
                out.add_term((qe, te), v.clone());
            }
        }
        out
    }

    /// Multiply every t-slice by a polynomial in q.
    fn times_q(&self, f: &QPoly) -> Self {
        let mut out = Self::zero();
        for ((qe, te), c) in &self.terms {
            for (fe, fc) in f.terms() {
                out.add_term((qe + fe, *te), c.clone() * fc.clone());
            }
        }
        out
    }

    /// Exact division; `None` when the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.is_zero() {
            return None;
        }
        let (quo, rem) = self.to_tpoly().divrem(&d.to_tpoly());
        if !rem.is_zero() {
            return None;
        }
        // The quotient of two polynomials that divide exactly has polynomial
        // coefficients; reject otherwise.
        let mut out = Self::zero();
        for (te, c) in quo.terms() {
            let p = c.as_poly()?;
            for (qe, v) in p.terms() {
                out.add_term((qe, te), v.clone());
            }
        }
        Some(out)
    }

    /// Primitive gcd via content/primitive-part recursion: the gcd of the
    /// q-contents times the gcd of the q-primitive parts, the latter by a
    /// primitive polynomial remainder sequence in t (pseudo-division with the
    /// q-content stripped after every step, which keeps coefficient growth
    /// linear at these sizes). Normalized to integer coefficients with a
    /// positive leading term.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.normalize_int();
        }
        if b.is_zero() {
            return a.normalize_int();
        }
        let cg = Poly::gcd_rat(&a.content_q(), &b.content_q());
        let mut x = a.primitive_q();
        let mut y = b.primitive_q();
        if x.t_degree() < y.t_degree() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            let r = Self::pseudo_rem(&x, &y).primitive_q();
            x = y;
            y = r;
        }
        x.primitive_q().times_q(&cg).normalize_int()
    }

    /// Pseudo-remainder of a by b in the variable t (b nonzero, with
    /// t-degree at most that of a at entry; the loop handles the rest).
    fn pseudo_rem(a: &Self, b: &Self) -> Self {
        let db = b.t_degree().expect("nonzero divisor");
        let lb = b.leading_t_slice();
        let mut r = a.clone();
        while let Some(dr) = r.t_degree() {
            if dr < db || r.is_zero() {
                break;
            }
            let lr = r.leading_t_slice();
            r = r
                .times_q(&lb)
                .minus(&b.times_q(&lr).times_t_pow(dr - db));
            if r.t_degree() == Some(dr) {
                // Leading slices cancelled exactly; nothing left at dr.
                break;
            }
        }
        r
    }

    /// Clear coefficients to coprime integers with the lexicographically
    /// leading term positive.
    fn normalize_int(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = Int::one();
        for c in self.terms.values() {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        let mut g = Int::zero();
        for c in self.terms.values() {
            g = num_integer::Integer::gcd(&g, &(c.numer() * &l));
        }
        let mut s = Rat::new(l, g);
        if self
            .terms
            .iter()
            .next_back()
            .map_or(false, |(_, c)| c.is_negative())
        {
            s = -s;
        }
        self.scale(&s)
    }

    fn leading_is_negative(&self) -> bool {
        self.terms
            .iter()
            .next_back()
            .map_or(false, |(_, c)| c.is_negative())
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, ((qe, te), c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || (*qe == 0 && *te == 0) {
                if abs.is_integer() {
                    parts.push(abs.numer().to_string());
                } else {
                    parts.push(format!("({}/{})", abs.numer(), abs.denom()));
                }
            }
            match qe {
                0 => {}
                1 => parts.push("q".into()),
                _ => parts.push(format!("q^{qe}")),
            }
            match te {
                0 => {}
                1 => parts.push("t".into()),
                _ => parts.push(format!("t^{te}")),
            }
            out.push_str(&parts.join("*"));
        }
        out
    }

    /// JSON form: list of `[q_exp, t_exp, coeff]` triples, sorted.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((qe, te), c)| {
                    let cs = if c.is_integer() {
                        c.numer().to_string()
                    } else {
                        format!("{}/{}", c.numer(), c.denom())
                    };
                    json!([qe, te, cs])
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("bivariate polynomial: expected array".into()))?;
        let mut p = Self::zero();
        for item in arr {
            let trip = item
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| Error::Parse("expected [i, j, coeff] triple".into()))?;
            let qe = trip[0]
                .as_u64()
                .ok_or_else(|| Error::Parse("bad q exponent".into()))? as usize;
            let te = trip[1]
                .as_u64()
                .ok_or_else(|| Error::Parse("bad t exponent".into()))? as usize;
            let c = match &trip[2] {
                Value::String(s) => match s.split_once('/') {
                    None => Rat::from_integer(
                        s.parse::<Int>()
                            .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?,
                    ),
                    Some((n, d)) => Rat::new(
                        n.parse::<Int>()
                            .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?,
                        d.parse::<Int>()
                            .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?,
                    ),
                },
                Value::Number(n) => Rat::from_integer(Int::from(
                    n.as_i64()
                        .ok_or_else(|| Error::Parse("bad coefficient".into()))?,
                )),
                _ => return Err(Error::Parse("bad coefficient".into())),
            };
            p.add_term((qe, te), c);
        }
        Ok(p)
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Reduced bivariate rational function in q, t.
///
/// Canonical form mirrors [`RatFun`]: numerator and denominator share no
/// bivariate factor, carry coprime integer contents, and the denominator's
/// lexicographically leading term is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QtRatFun {
    num: Poly2,
    den: Poly2,
}

impl QtRatFun {
    pub fn new(num: Poly2, den: Poly2) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly2, den: Poly2) -> Self {
        if num.is_zero() {
            return QtRatFun { num, den: Poly2::one() };
        }
        let g = Poly2::gcd(&num, &den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        // Clear contents jointly so the pair is determined up to sign.
        let mut l = Int::one();
        for c in num.terms.values().chain(den.terms.values()) {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        let mut gc = Int::zero();
        for c in num.terms.values().chain(den.terms.values()) {
            gc = num_integer::Integer::gcd(&gc, &(c.numer() * &l));
        }
        let s = Rat::new(l, gc);
        num = num.scale(&s);
        den = den.scale(&s);
        if den.leading_is_negative() {
            num = num.negated();
            den = den.negated();
        }
        QtRatFun { num, den }
    }

    pub fn from_poly(p: Poly2) -> Self {
        Self::reduce(p, Poly2::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(Poly2::monomial(0, 0, Rat::from_integer(Int::from(n))))
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// a/b + c/d with the shared denominator factor cancelled first:
    /// with g = gcd(b, d) only g can still divide the combined numerator,
    /// which keeps the final gcd small.
    pub fn add_ref(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let g = Poly2::gcd(&self.den, &o.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.times(&d1).plus(&o.num.times(&b1));
        if num.is_zero() {
            return Self::zero();
        }
        let h = Poly2::gcd(&num, &g);
        let num = num.div_exact(&h).expect("gcd divides");
        let den = g
            .div_exact(&h)
            .expect("gcd divides")
            .times(&b1)
            .times(&d1);
        Self::reduce_normalized_only(num, den)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.negated())
    }

    /// a/b * c/d with cross cancellation, avoiding a gcd of full products.
    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let g1 = Poly2::gcd(&self.num, &o.den);
        let g2 = Poly2::gcd(&o.num, &self.den);
        let num = self
            .num
            .div_exact(&g1)
            .expect("gcd divides")
            .times(&o.num.div_exact(&g2).expect("gcd divides"));
        let den = self
            .den
            .div_exact(&g2)
            .expect("gcd divides")
            .times(&o.den.div_exact(&g1).expect("gcd divides"));
        Self::reduce_normalized_only(num, den)
    }

    /// Content/sign normalization for a pair already coprime as polynomials.
    fn reduce_normalized_only(num: Poly2, den: Poly2) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut l = Int::one();
        for c in num.terms.values().chain(den.terms.values()) {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        let mut gc = Int::zero();
        for c in num.terms.values().chain(den.terms.values()) {
            gc = num_integer::Integer::gcd(&gc, &(c.numer() * &l));
        }
        let s = Rat::new(l, gc);
        let mut num = num.scale(&s);
        let mut den = den.scale(&s);
        if den.leading_is_negative() {
            num = num.negated();
            den = den.negated();
        }
        QtRatFun { num, den }
    }

    pub fn div_ref(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(
            self.num.times(&o.den),
            self.den.times(&o.num),
        ))
    }

    pub fn negated(&self) -> Self {
        QtRatFun { num: self.num.negated(), den: self.den.clone() }
    }

    pub fn zero() -> Self {
        QtRatFun { num: Poly2::zero(), den: Poly2::one() }
    }

    pub fn one() -> Self {
        QtRatFun { num: Poly2::one(), den: Poly2::one() }
    }

    pub fn swap_vars(&self) -> Self {
        Self::reduce(self.num.swap_vars(), self.den.swap_vars())
    }

    /// Exact specialization at t = 1 after full cancellation. A surviving
    /// (t - 1) factor in the denominator is reported as a pole with its order.
    pub fn specialize_t1(&self) -> Result<RatFun> {
        let den1 = self.den.subst_t_one();
        if den1.is_zero() {
            let t_minus_one = Poly2::monomial(0, 1, Rat::one()).minus(&Poly2::one());
            let mut order = 0;
            let mut d = self.den.clone();
            while let Some(next) = d.div_exact(&t_minus_one) {
                order += 1;
                d = next;
            }
            return Err(Error::PoleAtTOne { order });
        }
        RatFun::new(self.num.subst_t_one(), den1)
    }

    /// Multiplicity of (t - 1) in the numerator of the reduced form.
    pub fn t_minus_one_order(&self) -> usize {
        let t_minus_one = Poly2::monomial(0, 1, Rat::one()).minus(&Poly2::one());
        let mut order = 0;
        let mut n = self.num.clone();
        loop {
            match n.div_exact(&t_minus_one) {
                Some(next) => {
                    order += 1;
                    n = next;
                }
                None => return order,
            }
        }
    }

    /// True when (t - 1) divides the reduced denominator.
    pub fn denominator_vanishes_at_t1(&self) -> bool {
        self.den.subst_t_one().is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({ "num": self.num.to_json(), "den": self.den.to_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let num = Poly2::from_json(
            v.get("num")
                .ok_or_else(|| Error::Parse("qt ratfun: missing num".into()))?,
        )?;
        let den = Poly2::from_json(
            v.get("den")
                .ok_or_else(|| Error::Parse("qt ratfun: missing den".into()))?,
        )?;
        Self::new(num, den)
    }
}

impl fmt::Display for QtRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num.render())
        } else {
            write!(f, "({})/({})", self.num.render(), self.den.render())
        }
    }
}
