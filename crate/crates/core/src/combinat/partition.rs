//! Partitions and compositions with the fixed deterministic orders used by
//! every table and golden test: reverse-lexicographic for partitions,
//! lexicographic for compositions.

use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::{Int, Rat};

/// A partition: weakly decreasing positive parts. The empty partition is the
/// unique partition of 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Build from parts in any order; zero parts are dropped.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn single_row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition(vec![n])
        }
    }

    pub fn single_column(n: usize) -> Self {
        Partition(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        if self.0.is_empty() {
            return Self::empty();
        }
        let cols = self.0[0];
        let parts = (0..cols)
            .map(|c| self.0.iter().filter(|&&p| p > c).count())
            .collect();
        Partition(parts)
    }

    /// Dominance order: self <= other when all partial sums compare.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        debug_assert_eq!(self.size(), other.size());
        let mut a = 0usize;
        let mut b = 0usize;
        let k = self.0.len().max(other.0.len());
        for i in 0..k {
            a += self.0.get(i).copied().unwrap_or(0);
            b += other.0.get(i).copied().unwrap_or(0);
            if a > b {
                return false;
            }
        }
        true
    }

    /// z_lambda = prod_i i^{m_i} m_i! over multiplicities.
    pub fn zee(&self) -> Int {
        let mut z = Int::from(1);
        let mut i = 0;
        while i < self.0.len() {
            let part = self.0[i];
            let mut mult = 0;
            while i < self.0.len() && self.0[i] == part {
                mult += 1;
                i += 1;
            }
            for _ in 0..mult {
                z *= Int::from(part);
            }
            z *= factorial(mult);
        }
        z
    }

    pub fn zee_rat(&self) -> Rat {
        Rat::from_integer(self.zee())
    }

    /// prod_i (lambda_i!).
    pub fn parts_factorial(&self) -> Int {
        self.0.iter().map(|&p| factorial(p)).product()
    }

    /// sum_i lambda_i (lambda_i - 1) / 2.
    pub fn twist_exponent(&self) -> usize {
        self.0.iter().map(|&p| p * (p - 1) / 2).sum()
    }

    /// Merge parts with another partition (multiplication of multiplicative
    /// basis elements).
    pub fn merge(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Partition::new(parts)
    }

    /// Each part multiplied by r (Adams operation on indices).
    pub fn stretch(&self, r: usize) -> Partition {
        Partition::new(self.0.iter().map(|&p| p * r).collect())
    }

    /// All parts divisible by f, divided by f; `None` otherwise.
    pub fn unstretch(&self, f: usize) -> Option<Partition> {
        if self.0.iter().all(|&p| p % f == 0) {
            Some(Partition::new(self.0.iter().map(|&p| p / f).collect()))
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|&p| Value::from(p)).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("partition: expected array".into()))?;
        let mut parts = Vec::with_capacity(arr.len());
        for x in arr {
            let p = x
                .as_u64()
                .ok_or_else(|| Error::Parse("partition: expected positive integers".into()))?;
            if p == 0 {
                return Err(Error::Parse("partition: zero part".into()));
            }
            parts.push(p as usize);
        }
        Ok(Partition::new(parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

pub(crate) fn factorial(n: usize) -> Int {
    let mut f = Int::from(1);
    for i in 2..=n {
        f *= Int::from(i);
    }
    f
}

/// A composition: ordered positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Invalid("composition parts must be positive".into()));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sorted(&self) -> Partition {
        Partition::new(self.0.clone())
    }

    /// The composition with 1 removed from its last part (dropping the part
    /// when it becomes empty).
    pub fn minus_one_on_last(&self) -> Composition {
        let mut parts = self.0.clone();
        if let Some(last) = parts.last_mut() {
            *last -= 1;
            if *last == 0 {
                parts.pop();
            }
        }
        Composition(parts)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|&p| Value::from(p)).collect())
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of n in reverse-lexicographic order: (n) first, (1^n) last.
pub fn partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        let hi = left.min(max);
        for part in (1..=hi).rev() {
            cur.push(part);
            rec(left - part, part, cur, out);
            cur.pop();
        }
    }
    rec(n, n.max(1), &mut cur, &mut out);
    out
}

/// All compositions of n in lexicographic order.
pub fn compositions(n: usize) -> Vec<Composition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(left: usize, cur: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if left == 0 {
            out.push(Composition(cur.clone()));
            return;
        }
        for part in 1..=left {
            cur.push(part);
            rec(left - part, cur, out);
            cur.pop();
        }
    }
    rec(n, &mut cur, &mut out);
    out
}
