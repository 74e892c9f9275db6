//! Reduced rational functions in q.
//!
//! Canonical form: numerator and denominator are coprime polynomials with
//! integer coefficients, their integer contents are coprime, and the
//! denominator has a positive leading coefficient. Equality of values is then
//! equality of representations, which every golden test relies on.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::{Int, Rat};

pub type QPoly = Poly<Rat>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: QPoly,
    den: QPoly,
}

impl RatFun {
    /// Build and reduce. Fails when `den` is zero.
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: QPoly, den: QPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFun { num, den: QPoly::one() };
        }
        let g = Poly::gcd_rat(&num, &den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        // Clear rational coefficients to coprime integer contents.
        let l = num_integer::Integer::lcm(&num.denom_lcm(), &den.denom_lcm());
        let lr = Rat::from_integer(l);
        num = num.scale_rat(&lr);
        den = den.scale_rat(&lr);
        let g = num_integer::Integer::gcd(&num.int_content(), &den.int_content());
        if !g.is_one() {
            let inv = Rat::new(Int::one(), g);
            num = num.scale_rat(&inv);
            den = den.scale_rat(&inv);
        }
        if den.leading_coeff().map_or(false, |c| c.is_negative()) {
            num = num.negated();
            den = den.negated();
        }
        RatFun { num, den }
    }

    pub fn from_poly(p: QPoly) -> Self {
        Self::reduce(p, QPoly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(QPoly::from_int(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::from_poly(QPoly::constant(r))
    }

    /// q^e for any integer e (negative exponents go to the denominator).
    pub fn q_pow(e: i64) -> Self {
        if e >= 0 {
            Self::from_poly(QPoly::monomial(e as usize, Rat::one()))
        } else {
            Self::reduce(QPoly::one(), QPoly::monomial((-e) as usize, Rat::one()))
        }
    }

    pub fn zero() -> Self {
        RatFun { num: QPoly::zero(), den: QPoly::one() }
    }

    pub fn one() -> Self {
        RatFun { num: QPoly::one(), den: QPoly::one() }
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as a polynomial, if the reduced denominator is constant.
    pub fn as_poly(&self) -> Option<QPoly> {
        if self.den.degree() == Some(0) {
            let c = self.den.leading_coeff().unwrap().clone();
            Some(self.num.scale_rat(&(Rat::one() / c)))
        } else {
            None
        }
    }

    /// Degree in q: deg(num) - deg(den). `None` for zero.
    pub fn qdegree(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap() as i64)
    }

    /// a/b + c/d, cancelling the shared part of the denominators first: with
    /// g = gcd(b, d), only g can divide the combined numerator, so the final
    /// reduction stays small.
    pub fn add_ref(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let g = Poly::gcd_rat(&self.den, &o.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.times(&d1).plus(&o.num.times(&b1));
        if num.is_zero() {
            return Self::zero();
        }
        let h = Poly::gcd_rat(&num, &g);
        let num = num.div_exact(&h).expect("gcd divides");
        let den = g.div_exact(&h).expect("gcd divides").times(&b1).times(&d1);
        Self::normalize_coprime(num, den)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.negated())
    }

    /// a/b * c/d with cross cancellation, avoiding a gcd of full products.
    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let g1 = Poly::gcd_rat(&self.num, &o.den);
        let g2 = Poly::gcd_rat(&o.num, &self.den);
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
        Self::normalize_coprime(num, den)
    }

    /// Content and sign normalization for an already coprime pair.
    fn normalize_coprime(mut num: QPoly, mut den: QPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let l = num_integer::Integer::lcm(&num.denom_lcm(), &den.denom_lcm());
        let lr = Rat::from_integer(l);
        num = num.scale_rat(&lr);
        den = den.scale_rat(&lr);
        let g = num_integer::Integer::gcd(&num.int_content(), &den.int_content());
        if !g.is_one() {
            let inv = Rat::new(Int::one(), g);
            num = num.scale_rat(&inv);
            den = den.scale_rat(&inv);
        }
        if den.leading_coeff().map_or(false, |c| c.is_negative()) {
            num = num.negated();
            den = den.negated();
        }
        RatFun { num, den }
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

    pub fn inverse(&self) -> Result<Self> {
        RatFun::from_int(1).div_ref(self)
    }

    pub fn negated(&self) -> Self {
        RatFun { num: self.num.negated(), den: self.den.clone() }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut r = Self::one();
        for _ in 0..k {
            r = r.mul_ref(self);
        }
        r
    }

    /// Replace q by q^k everywhere and re-reduce.
    pub fn substitute_power(&self, k: usize) -> Self {
        Self::reduce(self.num.substitute_power(k), self.den.substitute_power(k))
    }

    /// Evaluate at q = x when the denominator does not vanish there.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "num": self.num.to_json(), "den": self.den.to_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let num = Poly::from_json(
            v.get("num")
                .ok_or_else(|| Error::Parse("ratfun: missing num".into()))?,
        )?;
        let den = Poly::from_json(
            v.get("den")
                .ok_or_else(|| Error::Parse("ratfun: missing den".into()))?,
        )?;
        Self::new(num, den)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ns = self.num.render("q", false);
        if self.den.is_one() {
            return write!(f, "{ns}");
        }
        let num_simple = self.num.num_terms() == 1 && !ns.starts_with('-');
        let ds = self.den.render("q", false);
        let den_simple = self.den.num_terms() == 1 && !ds.starts_with('-');
        let left = if num_simple { ns } else { format!("({ns})") };
        let right = if den_simple { ds } else { format!("({ds})") };
        write!(f, "{left}/{right}")
    }
}

impl Zero for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
}

impl One for RatFun {
    fn one() -> Self {
        RatFun::one()
    }
    fn is_one(&self) -> bool {
        RatFun::is_one(self)
    }
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl Sub for RatFun {
    type Output = RatFun;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> Self {
        self.negated()
    }
}

impl Div for RatFun {
    type Output = RatFun;
    fn div(self, rhs: Self) -> Self {
        self.div_ref(&rhs).expect("rational function division by zero")
    }
}

/// Sum a sequence of rational functions over a running common denominator,
/// reducing only once at the end. Much cheaper than folding `add_ref` when
/// many summands share denominator factors.
pub fn ratfun_sum<I: IntoIterator<Item = RatFun>>(items: I) -> RatFun {
    let items: Vec<RatFun> = items.into_iter().filter(|x| !x.is_zero()).collect();
    if items.is_empty() {
        return RatFun::zero();
    }
    let mut den = QPoly::one();
    for x in &items {
        let g = Poly::gcd_rat(&den, x.den());
        den = den.times(&x.den().div_exact(&g).expect("gcd divides"));
    }
    let mut num = QPoly::zero();
    for x in &items {
        let scale = den.div_exact(x.den()).expect("lcm divisible");
        num = num.plus(&x.num().times(&scale));
    }
    RatFun::reduce(num, den)
}

/// The arithmetic entry point used by callers that dispatch on an operation
/// name; plain operator syntax is preferred in library code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn ratfun_arith(a: &RatFun, b: &RatFun, op: ArithOp) -> Result<RatFun> {
    match op {
        ArithOp::Add => Ok(a.add_ref(b)),
        ArithOp::Sub => Ok(a.sub_ref(b)),
        ArithOp::Mul => Ok(a.mul_ref(b)),
        ArithOp::Div => a.div_ref(b),
    }
}
