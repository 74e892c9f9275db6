//! Acceptance suite: every golden value and property this library promises,
//! one test per criterion, each printing a pass line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::collections::BTreeMap;
use std::time::Instant;

use shalika_core::combinat::{
    partitions, syt, twist_exponent, Composition, Partition,
};
use shalika_core::eha::{comp_weight, pkm_compositions, slope_plethysm};
use shalika_core::germs::{
    germ_tables, graph_transition_matrix, master_symfun, renormalized_transition_matrix,
    waldspurger_master, BranchSpec, GammaSpec, NewtonPairs, Step,
};
use shalika_core::orbital;
use shalika_core::qtdeform::{syt_weight, torus_msf_qt, vanishing_order};
use shalika_core::symfunc::{c_poly, convert, multiply, nabla_t1, Basis, SymFun};
use shalika_core::{Int, QPoly, Rat, RatFun};

fn pt(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec())
}

fn np(pairs: &[(usize, usize)]) -> NewtonPairs {
    NewtonPairs::new(pairs.to_vec()).unwrap()
}

fn rf(num: &[i64], den: &[i64]) -> RatFun {
    RatFun::new(QPoly::from_coeff_slice(num), QPoly::from_coeff_slice(den)).unwrap()
}

/// All ramified step sequences of length <= 3 over the slope set
/// {1/2, 3/2, 2/1, 5/3} with total degree at most `max_n`.
fn ramified_family(max_n: usize) -> Vec<Vec<(usize, usize)>> {
    let slopes = [(2usize, 1usize), (2, 3), (1, 2), (3, 5)];
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for _ in 0..3 {
        let mut next = Vec::new();
        for seq in &frontier {
            let deg: usize = seq.iter().map(|&(p, _)| p).product();
            for &(p, q) in &slopes {
                if deg * p <= max_n {
                    let mut s = seq.clone();
                    s.push((p, q));
                    next.push(s);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn criterion_01_master_symfun_golden_display() {
    let spec = GammaSpec::from_newton(&np(&[(2, 1), (2, 3)]));
    let f = master_symfun(&spec).unwrap();
    // The five coefficients, checked individually...
    assert_eq!(f.coeff(&pt(&[1, 1, 1, 1])), rf(&[1, 1, 1], &[1]));
    assert_eq!(f.coeff(&pt(&[2, 1, 1])), rf(&[0, 2, 2, 4, 2, 1], &[1]));
    assert_eq!(f.coeff(&pt(&[2, 2])), rf(&[0, 0, 1, 0, 1, 0, 1], &[1]));
    assert_eq!(f.coeff(&pt(&[3, 1])), rf(&[0, 0, 0, 0, 1, 2, 1, 1], &[1]));
    assert_eq!(f.coeff(&pt(&[4])), RatFun::q_pow(8));
    assert_eq!(f.coeffs().len(), 5);
    // ...and the canonical rendering, character for character.
    assert_eq!(
        f.to_string(),
        "q^8*e[4] + (q^7+q^6+2*q^5+q^4)*e[3,1] + (q^6+q^4+q^2)*e[2,2] + \
         (q^5+2*q^4+4*q^3+2*q^2+2*q)*e[2,1,1] + (q^2+q+1)*e[1,1,1,1]"
    );
    println!("criterion 1: PASS (master symmetric function of (2,1),(2,3))");
}

#[test]
fn criterion_02_weight_polynomial_goldens() {
    let spec = GammaSpec::from_newton(&np(&[(2, 1), (2, 3)]));
    let w = orbital::weight_polynomials(&spec).unwrap();
    assert_eq!(
        w[&pt(&[4])].render("q", true),
        "1+q+2*q^2+3*q^3+4*q^4+4*q^5+4*q^6+3*q^7+q^8"
    );
    assert_eq!(
        w[&pt(&[1, 1, 1, 1])].render("q", true),
        "1+4*q+10*q^2+20*q^3+34*q^4+48*q^5+54*q^6+48*q^7+24*q^8"
    );
    println!("criterion 2: PASS (spherical and Iwahori weight polynomials)");
}

#[test]
fn criterion_03_degree_42_polynomial() {
    let t0 = Instant::now();
    let spec = GammaSpec::from_newton(&np(&[(2, 1), (2, 1), (2, 3)]));
    let poly = orbital::jacobian_count(&spec).unwrap();
    let expected: [i64; 43] = [
        1, 1, 2, 3, 5, 7, 11, 15, 21, 28, 38, 48, 63, 78, 97, 118, 143, 168, 199, 230, 264,
        298, 335, 370, 406, 437, 466, 488, 504, 510, 507, 492, 465, 424, 370, 306, 236, 166,
        104, 56, 24, 7, 1,
    ];
    assert_eq!(poly, QPoly::from_coeff_slice(&expected));
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 30, "runtime budget exceeded: {elapsed:?}");
    println!("criterion 3: PASS (degree-42 polynomial, all 43 coefficients, in {elapsed:?})");
}

#[test]
fn criterion_04_shalika_table_and_orbital_values() {
    let b = BranchSpec::from_newton(&np(&[(2, 3)]));
    let spec = GammaSpec::new(vec![b.clone(), b], BTreeMap::new(), None).unwrap();
    let f = master_symfun(&spec).unwrap();
    // f = (e_11 + q e_2)^2.
    let base = SymFun::basis_element(Basis::E, pt(&[1, 1]))
        .add(&SymFun::basis_element(Basis::E, pt(&[2])).scale(&RatFun::q_pow(1)))
        .unwrap();
    assert_eq!(f, multiply(&base, &base).unwrap());
    let t = germ_tables(&f).unwrap();
    assert_eq!(t.shalika[&pt(&[1, 1, 1, 1])], rf(&[1], &[1, -2, 1]));
    assert_eq!(t.shalika[&pt(&[2, 1, 1])], rf(&[0, -2], &[1, -2, 1]));
    assert_eq!(t.shalika[&pt(&[2, 2])], rf(&[0, 0, 1], &[1, -2, 1]));
    assert_eq!(t.shalika.len(), 3);
    let spherical = orbital::orbital_integral(&spec, &pt(&[4])).unwrap();
    assert_eq!(spherical.render("q", false), "q^8+2*q^7+q^6");
    let iwahori = orbital::orbital_integral(&spec, &pt(&[1, 1, 1, 1])).unwrap();
    assert_eq!(iwahori.render("q", false), "24*q^8+24*q^7+6*q^6");
    println!("criterion 4: PASS (Shalika table of (e_11+q e_2)^2 and orbital values)");
}

#[test]
fn criterion_05_unramified_example() {
    let b = BranchSpec::new(vec![Step::Unramified { f: 2, a: 1 }]).unwrap();
    let spec = GammaSpec::single(b);
    let f = master_symfun(&spec).unwrap();
    assert_eq!(f.coeff(&pt(&[1, 1])), RatFun::one());
    assert_eq!(f.coeff(&pt(&[2])), rf(&[0, 2], &[1]));
    assert_eq!(f.coeffs().len(), 2);
    let v = orbital::orbital_integral(&spec, &pt(&[2])).unwrap();
    assert_eq!(v.render("q", false), "q+2");
    println!("criterion 5: PASS (unramified example e_11 + 2q e_2, orbital q+2)");
}

#[test]
fn criterion_06_composition_weights_and_vanishing() {
    // P_{3,2}: 1/(1-q) on th_11, -q/(1-q) on th_2.
    let p32 = pkm_compositions(3, 2, 1).unwrap();
    assert_eq!(p32.coeff(&pt(&[1, 1])), rf(&[1], &[1, -1]));
    assert_eq!(p32.coeff(&pt(&[2])), rf(&[0, -1], &[1, -1]));
    // The three composition weights for P_{6,4}. Their overall sign is the
    // one forced jointly by the operator identity of criterion 8, by their
    // sum (the th_211 coefficient asserted below), and by the vanishing of
    // the th_211 coefficient of the slope-3/2 image of th_2.
    let c = |parts: &[usize]| Composition::new(parts.to_vec()).unwrap();
    let d2 = QPoly::from_coeff_slice(&[1, -1])
        .pow(2)
        .times(&QPoly::from_coeff_slice(&[1, 0, -1]));
    assert_eq!(
        comp_weight(&c(&[2, 1, 1]), 3, 2, 2).unwrap(),
        RatFun::new(QPoly::from_coeff_slice(&[0, 1, 0, 1]), d2.clone()).unwrap()
    );
    assert_eq!(
        comp_weight(&c(&[1, 2, 1]), 3, 2, 2).unwrap(),
        RatFun::new(QPoly::from_coeff_slice(&[0, 0, 2]), d2).unwrap()
    );
    assert_eq!(
        comp_weight(&c(&[1, 1, 2]), 3, 2, 2).unwrap(),
        RatFun::new(
            QPoly::from_coeff_slice(&[0, 1, 1]),
            QPoly::from_coeff_slice(&[1, -1]).pow(3)
        )
        .unwrap()
    );
    // Their sum, the th_211 coefficient of P_{6,4}: (-2q^2 - 2q)/(q - 1)^3.
    let p64 = pkm_compositions(3, 2, 2).unwrap();
    let expected = RatFun::new(
        QPoly::from_coeff_slice(&[0, -2, -2]),
        QPoly::from_coeff_slice(&[-1, 1]).pow(3),
    )
    .unwrap();
    assert_eq!(p64.coeff(&pt(&[2, 1, 1])), expected);
    // The slope-3/2 plethysm of th_2 has vanishing th_211 coefficient.
    let th2 = SymFun::basis_element(Basis::Th, pt(&[2]));
    let image = slope_plethysm(&th2, 3, 2).unwrap();
    let image_th = convert(&image, Basis::Th).unwrap();
    assert!(image_th.coeff(&pt(&[2, 1, 1])).is_zero());
    println!("criterion 6: PASS (P_32 and P_64 composition weights, vanishing th_211)");
}

#[test]
fn criterion_07_two_route_equality() {
    let mut checked = 0;
    for seq in ramified_family(6) {
        let pairs = match NewtonPairs::new(seq.clone()) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let spec = GammaSpec::from_newton(&pairs);
        let direct = convert(&master_symfun(&spec).unwrap(), Basis::Th).unwrap();
        let via_matrices = waldspurger_master(&spec).unwrap();
        assert_eq!(direct, via_matrices, "route mismatch for {seq:?}");
        checked += 1;
    }
    assert!(checked >= 40);
    println!("criterion 7: PASS (two-route equality on {checked} ramified step sequences)");
}

#[test]
fn criterion_08_pkm_vs_newton_identity() {
    let mut checked = 0;
    for m in 0..=5usize {
        for n in 1..=3usize {
            if num_gcd(m, n) != 1 {
                continue;
            }
            for k in 1..=3usize {
                let pk = SymFun::basis_element(Basis::P, pt(&[k]));
                let via_dyck = convert(&slope_plethysm(&pk, m, n).unwrap(), Basis::E).unwrap();
                let via_weights =
                    convert(&pkm_compositions(m, n, k).unwrap(), Basis::E).unwrap();
                assert_eq!(via_dyck, via_weights, "mismatch at ({m},{n}), k={k}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 30);
    println!("criterion 8: PASS (operator identity on {checked} slope/level pairs)");
}

fn num_gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn criterion_09_positivity_and_integrality() {
    for seq in ramified_family(6) {
        let pairs = match NewtonPairs::new(seq.clone()) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let spec = GammaSpec::from_newton(&pairs);
        let f = master_symfun(&spec).unwrap();
        let t = germ_tables(&f).unwrap();
        // Dyck germs with nonnegative integer coefficients.
        for (lambda, g) in &t.dyck {
            let p = g.as_poly().expect("dyck germ is polynomial");
            assert!(p.has_nonneg_int_coeffs(), "dyck germ at {lambda} for {seq:?}");
        }
        // Renormalized Shalika germs are integral.
        for (lambda, g) in &t.shalika {
            let c = RatFun::from_poly(c_poly(lambda));
            let p = c.mul_ref(g).as_poly().expect("renormalized germ is polynomial");
            assert!(p.has_int_coeffs(), "renormalized germ at {lambda} for {seq:?}");
        }
        // Weight polynomials in N[q] with constant term 1 (single branch).
        for (lambda, w) in orbital::weight_polynomials(&spec).unwrap() {
            assert!(w.has_nonneg_int_coeffs(), "weights at {lambda} for {seq:?}");
            assert_eq!(w.coeff(0), Rat::from_integer(1.into()), "constant term for {seq:?}");
        }
    }
    println!("criterion 9: PASS (positivity and integrality over the n <= 6 family)");
}

#[test]
fn criterion_10_homogeneity() {
    for pairs in [np(&[(2, 3)]), np(&[(2, 1), (2, 3)]), np(&[(3, 4)])] {
        let f = master_symfun(&GammaSpec::from_newton(&pairs)).unwrap();
        let twisted = nabla_t1(&f, 1).unwrap();
        let t0 = germ_tables(&f).unwrap();
        let t1 = germ_tables(&twisted).unwrap();
        for (lambda, c) in &t0.shalika {
            let e = twist_exponent(lambda) as i64;
            assert_eq!(t1.shalika[lambda], c.mul_ref(&RatFun::q_pow(e)));
        }
        for lambda in t1.shalika.keys() {
            assert!(t0.shalika.contains_key(lambda));
        }
    }
    println!("criterion 10: PASS (nabla twist acts by q^(sum lambda_i(lambda_i-1)/2))");
}

#[test]
fn criterion_11_component_counts() {
    // 24 on both n = 4 worked examples.
    assert_eq!(
        orbital::component_count(&GammaSpec::from_newton(&np(&[(2, 1), (2, 3)]))).unwrap(),
        Int::from(24)
    );
    let b = BranchSpec::from_newton(&np(&[(2, 3)]));
    let two = GammaSpec::new(vec![b.clone(), b], BTreeMap::new(), None).unwrap();
    assert_eq!(orbital::component_count(&two).unwrap(), Int::from(24));
    // Divides n!, with equality when every slope is >= 1.
    for seq in ramified_family(6) {
        let pairs = match NewtonPairs::new(seq.clone()) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let spec = GammaSpec::from_newton(&pairs);
        let n = spec.degree();
        let c = orbital::component_count(&spec).unwrap();
        let mut order = Int::from(1);
        for i in 2..=n {
            order *= Int::from(i);
        }
        assert_eq!(&order % &c, Int::from(0), "count does not divide n! for {seq:?}");
        if seq.iter().all(|&(p, q)| q >= p) {
            assert_eq!(c, order, "expected n! components for {seq:?}");
        }
    }
    println!("criterion 11: PASS (component counts divide n!, equal n! at depth >= 1)");
}

#[test]
fn criterion_12_qt_deformation() {
    for (m, n) in [(3usize, 2usize), (5, 2), (4, 3), (5, 3)] {
        // t = 1 specialization equals the composition route.
        let map = torus_msf_qt(m, n).unwrap();
        let limits = map.specialize_t1().unwrap();
        let pkm = pkm_compositions(m, n, 1).unwrap();
        for lambda in partitions(n) {
            let lhs = limits.get(&lambda).cloned().unwrap_or_else(RatFun::zero);
            assert_eq!(lhs, pkm.coeff(&lambda), "t=1 mismatch at ({m},{n}), {lambda}");
        }
        // Numerators divisible by (t-1)^{v(T)}.
        for shape in partitions(n) {
            for t in syt(&shape) {
                let w = syt_weight(&t, m, n).unwrap();
                assert!(!w.denominator_vanishes_at_t1());
                assert!(w.t_minus_one_order() >= vanishing_order(&t));
            }
        }
        // Transpose symmetry under lambda -> lambda', q <-> t.
        for (lambda, c) in &map.coeffs {
            assert_eq!(c, &map.coeff(&lambda.conjugate()).swap_vars());
        }
    }
    println!("criterion 12: PASS (q,t master functions at (3,2), (5,2), (4,3), (5,3))");
}

#[test]
fn criterion_13_graph_conjecture_report() {
    // Experimental and non-blocking: report agreement of the conjectured
    // graph expansion with the renormalized transition matrix at desk scale.
    let mut all_match = true;
    let mut cases = Vec::new();
    for (p, q, nprime) in [
        (1usize, 2usize, 1usize),
        (1, 2, 2),
        (1, 2, 3),
        (2, 1, 1),
        (2, 3, 1),
        (2, 3, 2),
        (2, 5, 2),
        (3, 4, 1),
        (5, 2, 1),
        (2, 1, 2),
        (3, 2, 1),
    ] {
        if p * nprime > 5 {
            continue;
        }
        let got = graph_transition_matrix(p, q, nprime).unwrap();
        let want = renormalized_transition_matrix(p, q, nprime).unwrap();
        let matches = got == want;
        // Integrality of the renormalized entries.
        let mut integral = true;
        for row in &want.entries {
            for e in row {
                if e.is_zero() {
                    continue;
                }
                match e.as_poly() {
                    Some(p) => integral &= p.has_int_coeffs(),
                    None => integral = false,
                }
            }
        }
        all_match &= matches && integral;
        cases.push(format!(
            "(p={p}, q={q}, n'={nprime}): {}, entries {}",
            if matches { "match" } else { "MISMATCH" },
            if integral { "in Z[q]" } else { "NOT integral" },
        ));
    }
    for c in &cases {
        println!("criterion 13 [experimental]: {c}");
    }
    println!(
        "criterion 13: {} (graph-expansion conjecture at desk scale, non-blocking)",
        if all_match { "MATCHES" } else { "reported mismatches above" }
    );
}

#[test]
fn criterion_14_note() {
    println!(
        "criterion 14: N/A (distribution-level statements are covered by the \
         oracle-equivalence and golden-example suites above)"
    );
}
