//! Orbital integrals and weight polynomials of affine Springer fibers,
//! compactified Jacobian point counts, component counts, and the top-degree
//! Frobenius character.
//!
//! Everything reduces to Hall pairings of the master symmetric function with
//! elementary symmetric functions, reversed and scaled by q to the dimension
//! of the fiber.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::combinat::{contingency_count, partitions, Partition};
use crate::error::{Error, Result};
use crate::germs::{branch_master, delta_invariant, GammaSpec};
use crate::symfunc::{hall_pair, Basis, SymFun};
use crate::{Exponent, Int, QPoly};

/// Everything the CLI reports for one spectral datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitalReport {
    pub dim_sp: usize,
    pub by_parahoric: BTreeMap<Partition, QPoly>,
    pub components: Int,
    pub top_frobenius: Partition,
    pub jacobian_count: QPoly,
}

impl OrbitalReport {
    pub fn to_json(&self) -> Value {
        let table: Vec<Value> = {
            let degree: usize = self.by_parahoric.keys().next().map(|p| p.size()).unwrap_or(0);
            partitions(degree)
                .into_iter()
                .filter_map(|p| {
                    self.by_parahoric
                        .get(&p)
                        .map(|poly| json!([p.to_json(), poly.to_json()]))
                })
                .collect()
        };
        json!({
            "dim_sp": self.dim_sp,
            "by_parahoric": table,
            "components": self.components.to_string(),
            "top_frobenius": self.top_frobenius.to_json(),
            "jacobian_count": self.jacobian_count.to_json(),
        })
    }
}

/// Per-datum analysis shared by the operations below: the master symmetric
/// function and the fiber dimension.
struct Analysis {
    f: SymFun,
    n: usize,
    dim: usize,
}

fn analyze(spec: &GammaSpec) -> Result<Analysis> {
    let branches = spec.branches();
    let mut branch_funs = Vec::with_capacity(branches.len());
    for b in branches {
        branch_funs.push(branch_master(b)?);
    }
    let mut f = SymFun::one(Basis::E);
    for bf in &branch_funs {
        f = crate::symfunc::multiply(&f, bf)?;
    }
    let n = f.degree();
    let dim = match spec.dim_override() {
        Some(d) => d,
        None => {
            // Per-branch delta plus pairwise intersection numbers
            // n_i n_j c_{ij}, with the generic-coefficient default contact
            // being the smaller of the two leading Puiseux exponents.
            let mut total = Exponent::zero();
            for (i, b) in branches.iter().enumerate() {
                let delta = match b.newton_pairs() {
                    Some(np) => delta_invariant(&np),
                    None => {
                        // Branches with unramified steps: fall back to the
                        // q-degree of the spherical pairing.
                        let pair = crate::germs::spherical_pairing(&branch_funs[i])?;
                        pair.qdegree().unwrap_or(0).max(0) as usize
                    }
                };
                total += Exponent::from_integer(delta as i64);
            }
            for i in 0..branches.len() {
                for j in (i + 1)..branches.len() {
                    let c = match spec.contact(i, j) {
                        Some(c) => c,
                        None => {
                            let li = branches[i]
                                .leading_exponent()
                                .ok_or(Error::MissingContact { i, j })?;
                            let lj = branches[j]
                                .leading_exponent()
                                .ok_or(Error::MissingContact { i, j })?;
                            li.min(lj)
                        }
                    };
                    let ni = branches[i].degree() as i64;
                    let nj = branches[j].degree() as i64;
                    total += Exponent::from_integer(ni * nj) * c;
                }
            }
            if !total.is_integer() || total.is_negative() {
                return Err(Error::NonIntegerDim { value: total.to_string() });
            }
            *total.numer() as usize
        }
    };
    Ok(Analysis { f, n, dim })
}

/// Dimension of the affine Springer fiber of the datum.
pub fn dim_sp(spec: &GammaSpec) -> Result<usize> {
    Ok(analyze(spec)?.dim)
}

fn orbital_from_analysis(a: &Analysis, lambda: &Partition) -> Result<QPoly> {
    if lambda.size() != a.n {
        return Err(Error::SizeMismatch { left: lambda.size(), right: a.n });
    }
    let e = SymFun::basis_element(Basis::E, lambda.clone());
    let pair = hall_pair(&a.f, &e)?;
    let poly = pair
        .as_poly()
        .filter(|p| p.has_nonneg_int_coeffs())
        .ok_or_else(|| {
            Error::Internal(format!(
                "pairing with e{lambda} is not a nonnegative integer polynomial"
            ))
        })?;
    poly.reversed(a.dim)
}

/// The orbital integral of the characteristic function of the standard
/// parahoric of type lambda: q^{dim} <f_gamma, e_lambda> at q -> 1/q.
pub fn orbital_integral(spec: &GammaSpec, lambda: &Partition) -> Result<QPoly> {
    let a = analyze(spec)?;
    orbital_from_analysis(&a, lambda)
}

/// Orbital integrals for every partition of n.
pub fn weight_polynomials(spec: &GammaSpec) -> Result<BTreeMap<Partition, QPoly>> {
    let a = analyze(spec)?;
    let mut out = BTreeMap::new();
    for lambda in partitions(a.n) {
        let poly = orbital_from_analysis(&a, &lambda)?;
        out.insert(lambda, poly);
    }
    Ok(out)
}

/// The dominance-least partition carrying a nonzero Dyck germ.
fn least_dominant_support(f: &SymFun) -> Result<Partition> {
    let fe = crate::symfunc::convert(f, Basis::E)?;
    let support: Vec<Partition> = fe.coeffs().keys().cloned().collect();
    support
        .iter()
        .find(|p| support.iter().all(|q| p.dominated_by(q)))
        .cloned()
        .ok_or_else(|| Error::Internal("no dominance-least support partition".into()))
}

/// Number of irreducible components of the Iwahori affine Springer fiber
/// modulo the lattice action: the pairing of e_nu with e_{(1^n)} for the
/// dominance-least nu in the Dyck support. Always divides n!.
pub fn component_count(spec: &GammaSpec) -> Result<Int> {
    let a = analyze(spec)?;
    let nu = least_dominant_support(&a.f)?;
    contingency_count(&nu, &Partition::single_column(a.n))
}

/// The partition nu with top-degree Frobenius character h_nu.
pub fn top_frobenius(spec: &GammaSpec) -> Result<Partition> {
    let a = analyze(spec)?;
    least_dominant_support(&a.f)
}

/// Point count of the compactified Jacobian: the spherical weight polynomial.
pub fn jacobian_count(spec: &GammaSpec) -> Result<QPoly> {
    let a = analyze(spec)?;
    orbital_from_analysis(&a, &Partition::single_row(a.n))
}

/// The full report.
pub fn report(spec: &GammaSpec) -> Result<OrbitalReport> {
    let a = analyze(spec)?;
    let mut by_parahoric = BTreeMap::new();
    for lambda in partitions(a.n) {
        let poly = orbital_from_analysis(&a, &lambda)?;
        by_parahoric.insert(lambda, poly);
    }
    let nu = least_dominant_support(&a.f)?;
    let components = contingency_count(&nu, &Partition::single_column(a.n))?;
    let jacobian_count = by_parahoric[&Partition::single_row(a.n)].clone();
    Ok(OrbitalReport {
        dim_sp: a.dim,
        by_parahoric,
        components,
        top_frobenius: nu,
        jacobian_count,
    })
}
