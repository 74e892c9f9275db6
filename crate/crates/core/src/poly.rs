//! Sparse univariate polynomials with exact coefficients.
//!
//! Exponents are machine words (degrees stay small in this domain);
//! coefficients are arbitrary precision. No zero coefficient is ever stored.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::{Int, Rat};

/// Sparse polynomial in one variable over the scalar `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    terms: BTreeMap<usize, T>,
}

impl<T: Coeff> Poly<T> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: usize, c: T) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, T)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: usize, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            None => {
                self.terms.insert(exp, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(exp, s);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map_or(false, |c| c.is_one())
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&T> {
        self.terms.values().next_back()
    }

    pub fn coeff(&self, exp: usize) -> T {
        self.terms.get(&exp).cloned().unwrap_or_else(T::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &T)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    pub fn negated(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn times(&self, other: &Self) -> Self {
        let (da, db) = match (self.degree(), other.degree()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Self::zero(),
        };
        // Dense accumulation: the products here are low-degree and nearly
        // dense, so a scratch vector beats per-term map updates.
        let mut acc: Vec<T> = vec![T::zero(); da + db + 1];
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let slot = &mut acc[e1 + e2];
                *slot = std::mem::replace(slot, T::zero()) + c1.clone() * c2.clone();
            }
        }
        Poly {
            terms: acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (*e, v.clone() * c.clone()))
                .filter(|(_, v)| !v.is_zero())
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

    /// Substitute the variable by its k-th power (k >= 1).
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1, "substitute_power requires k >= 1");
        Poly {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    /// q^d * p(1/q). Requires d >= deg p so the result is a polynomial.
    pub fn reversed(&self, d: usize) -> Result<Self> {
        if let Some(deg) = self.degree() {
            if deg > d {
                return Err(Error::ReverseDegree { degree: deg, bound: d });
            }
        }
        Ok(Poly {
            terms: self.terms.iter().map(|(e, c)| (d - e, c.clone())).collect(),
        })
    }

    pub fn eval(&self, x: &T) -> T {
        // Horner over the sparse support.
        let mut acc = T::zero();
        let mut last_exp = 0usize;
        for (e, c) in self.terms.iter().rev() {
            if !acc.is_zero() {
                for _ in 0..(last_exp - e) {
                    acc = acc * x.clone();
                }
            }
            acc = acc + c.clone();
            last_exp = *e;
        }
        for _ in 0..last_exp {
            acc = acc * x.clone();
        }
        acc
    }

    /// Long division; panics when `div` is zero.
    pub fn divrem(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero(), "polynomial division by zero");
        let dd = div.degree().unwrap();
        let dl = div.leading_coeff().unwrap().clone();
        let mut quo = Self::zero();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff().unwrap().clone() / dl.clone();
            let e = rd - dd;
            let t = Self::monomial(e, c);
            quo = quo.plus(&t);
            rem = rem.minus(&t.times(div));
        }
        (quo, rem)
    }

    pub fn div_exact(&self, div: &Self) -> Option<Self> {
        let (q, r) = self.divrem(div);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn make_monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(l) => {
                let l = l.clone();
                Poly {
                    terms: self
                        .terms
                        .iter()
                        .map(|(e, c)| (*e, c.clone() / l.clone()))
                        .collect(),
                }
            }
        }
    }

    /// Monic gcd by the Euclidean algorithm (valid over a field scalar).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.make_monic();
        }
        a.make_monic()
    }
}

impl<T: Coeff> std::ops::Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Self {
        self.plus(&rhs)
    }
}

impl<T: Coeff> std::ops::Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Self {
        self.minus(&rhs)
    }
}

impl<T: Coeff> std::ops::Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Self {
        self.times(&rhs)
    }
}

impl<T: Coeff> std::ops::Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Self {
        self.negated()
    }
}


fn rat_str(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| -> Result<Int> {
        t.parse::<Int>()
            .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(Rat::new(parse_int(n)?, den))
        }
    }
}

impl Poly<Rat> {
    /// The variable q itself.
    pub fn q() -> Self {
        Self::monomial(1, Rat::one())
    }

    /// Scale to coprime integer coefficients.
    fn primitive_int(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.denom_lcm();
        let scaled = self.scale(&Rat::from_integer(l));
        let g = scaled.int_content();
        scaled.scale(&Rat::new(Int::one(), g))
    }

    /// Monic gcd via an integer primitive remainder sequence, which avoids
    /// the coefficient blowup of plain Euclid over the rationals on large
    /// inputs.
    pub fn gcd_rat(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.make_monic();
        }
        if b.is_zero() {
            return a.make_monic();
        }
        let mut x = a.primitive_int();
        let mut y = b.primitive_int();
        if x.degree() < y.degree() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            let r = Self::pseudo_rem_int(&x, &y);
            x = y;
            y = if r.is_zero() { r } else { r.primitive_int() };
        }
        x.make_monic()
    }

    fn pseudo_rem_int(a: &Self, b: &Self) -> Self {
        let db = b.degree().expect("nonzero divisor");
        let lb = b.leading_coeff().unwrap().clone();
        let mut r = a.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading_coeff().unwrap().clone();
            let shifted = Poly {
                terms: b
                    .terms
                    .iter()
                    .map(|(e, c)| (e + dr - db, c.clone() * lr.clone()))
                    .collect(),
            };
            r = r.scale(&lb).minus(&shifted);
        }
        r
    }


    pub fn from_int(n: i64) -> Self {
        Self::constant(Rat::from_integer(Int::from(n)))
    }

    /// Build from ascending coefficients: `[1, 2, 1]` is 1 + 2q + q^2.
    pub fn from_coeff_slice(coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(e, c)| (e, Rat::from_integer(Int::from(*c)))),
        )
    }

    /// 1 - q^k.
    pub fn one_minus_q_pow(k: usize) -> Self {
        Self::one().minus(&Self::monomial(k, Rat::one()))
    }

    pub fn has_nonneg_int_coeffs(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    pub fn has_int_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denom_lcm(&self) -> Int {
        let mut l = Int::one();
        for c in self.terms.values() {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        l
    }

    /// Gcd of the coefficient numerators (call after clearing denominators).
    pub fn int_content(&self) -> Int {
        let mut g = Int::zero();
        for c in self.terms.values() {
            g = num_integer::Integer::gcd(&g, c.numer());
        }
        g
    }

    pub fn scale_rat(&self, c: &Rat) -> Self {
        self.scale(c)
    }

    /// Render in the canonical string form, e.g. `q^8+2*q^7+q^6`.
    ///
    /// `ascending` selects the term order; the canonical order is descending.
    pub fn render(&self, var: &str, ascending: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut items: Vec<(usize, &Rat)> = self.terms.iter().map(|(e, c)| (*e, c)).collect();
        if !ascending {
            items.reverse();
        }
        let mut out = String::new();
        for (i, (e, c)) in items.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let coeff_part = if abs.is_one() && *e > 0 {
                None
            } else if abs.is_integer() {
                Some(abs.numer().to_string())
            } else {
                Some(format!("({})", rat_str(&abs)))
            };
            let var_part = match e {
                0 => None,
                1 => Some(var.to_string()),
                _ => Some(format!("{var}^{e}")),
            };
            match (coeff_part, var_part) {
                (Some(c), Some(v)) => {
                    out.push_str(&c);
                    out.push('*');
                    out.push_str(&v);
                }
                (Some(c), None) => out.push_str(&c),
                (None, Some(v)) => out.push_str(&v),
                (None, None) => out.push('1'),
            }
        }
        out
    }

    /// JSON form: sorted list of `[exponent, "numerator/denominator"]` pairs.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| Value::Array(vec![Value::from(*e), Value::from(rat_str(c))]))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("polynomial: expected array".into()))?;
        let mut p = Self::zero();
        for item in arr {
            let pair = item
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Parse("polynomial: expected [exp, coeff] pair".into()))?;
            let e = pair[0]
                .as_u64()
                .ok_or_else(|| Error::Parse("polynomial: bad exponent".into()))?
                as usize;
            let c = match &pair[1] {
                Value::String(s) => parse_rat(s)?,
                Value::Number(n) => {
                    let i = n
                        .as_i64()
                        .ok_or_else(|| Error::Parse("polynomial: bad coefficient".into()))?;
                    Rat::from_integer(Int::from(i))
                }
                _ => return Err(Error::Parse("polynomial: bad coefficient".into())),
            };
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl fmt::Display for Poly<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("q", false))
    }
}
