use num_bigint::BigInt;
use weyl_denom::denominator::*;
use weyl_denom::{ExpVec, GradedSeries, LatticeSpec};

fn x(v: &[i64]) -> ExpVec {
    ExpVec(v.to_vec())
}

fn slice(s: &GradedSeries, d: u32) -> Vec<(Vec<i64>, i64)> {
    let mut v: Vec<_> = s
        .slice(d)
        .unwrap()
        .into_iter()
        .map(|(e, c)| (e.0, i64::try_from(c).unwrap()))
        .collect();
    v.sort();
    v
}

/// `1 - x - y1 - y2 - q/(x y1 y2)` through degree 1, by hand.
fn degree_one() -> Vec<(Vec<i64>, i64)> {
    let mut v = vec![
        (vec![0, 1, 0, 0], -1),
        (vec![0, 0, 1, 0], -1),
        (vec![0, 0, 0, 1], -1),
        (vec![1, -1, -1, -1], -1),
    ];
    v.sort();
    v
}

#[test]
fn lhs_low_degrees() {
    let lhs = build_lhs(6).unwrap();
    assert_eq!(lhs.coeff(&x(&[0, 0, 0, 0])).unwrap(), BigInt::from(1));
    assert_eq!(slice(&lhs, 0), vec![(vec![0, 0, 0, 0], 1)]);
    assert_eq!(slice(&lhs, 1), degree_one());
}

#[test]
fn lhs_equals_root_list_product() {
    for n in [0, 3, 9, 17] {
        assert_eq!(build_lhs(n).unwrap(), build_rhat_from_roots(n).unwrap(), "N={n}");
    }
}

#[test]
fn prefactor_examples() {
    let p = build_prefactor(12, PrefactorMethod::Product).unwrap();
    assert_eq!(p.coeff(&x(&[1, 0, 1, -1])).unwrap(), BigInt::from(1));
    assert_eq!(p.coeff(&x(&[1, 0, 0, 0])).unwrap(), BigInt::from(-2));
    // |k| > m lies outside the cone and is never stored
    assert_eq!(p.coeff(&x(&[1, 0, 2, -2])).unwrap(), BigInt::from(0));
    for (e, _) in p.terms() {
        assert_eq!(e.0[1], 0);
        assert_eq!(e.0[2], -e.0[3]);
        assert!(e.0[2].abs() <= e.0[0]);
    }
}

#[test]
fn prefactor_methods_agree() {
    for n in [0, 4, 13, 28, 40] {
        assert_eq!(
            build_prefactor(n, PrefactorMethod::Product).unwrap(),
            build_prefactor(n, PrefactorMethod::FnSeries).unwrap(),
            "N={n}"
        );
    }
}

#[test]
fn orbit_sum_low_degrees() {
    let s = build_orbit_sum(4, OrbitMethod::Closed).unwrap();
    assert_eq!(slice(&s, 0), vec![(vec![0, 0, 0, 0], 1)]);
    assert_eq!(slice(&s, 1), degree_one());
}

#[test]
fn orbit_sum_methods_agree() {
    for n in [0, 1, 2, 7, 12, 16, 24] {
        assert_eq!(
            build_orbit_sum(n, OrbitMethod::Closed).unwrap(),
            build_orbit_sum(n, OrbitMethod::Weyl).unwrap(),
            "N={n}"
        );
    }
}

#[test]
fn results_are_monotone_in_the_cutoff() {
    let big = build_rhs(14).unwrap();
    for m in [0, 5, 9] {
        assert_eq!(big.truncate(m).unwrap(), build_rhs(m).unwrap());
        assert_eq!(build_lhs(14).unwrap().truncate(m).unwrap(), build_lhs(m).unwrap());
    }
}

#[test]
fn verify_denominator_small_and_default() {
    for n in [0, 1, 24] {
        let r = verify_denominator(n).unwrap();
        assert!(r.matched && r.passed(), "N={n}: {:?}", r.first_diffs);
        assert!(r.first_diffs.is_empty());
    }
}

#[test]
fn mismatch_is_reported_not_raised() {
    let lhs = build_lhs(6).unwrap();
    let wrong = build_orbit_sum(6, OrbitMethod::Closed).unwrap();
    let r = weyl_denom::QReport::compare("wrong", 6, &lhs, &wrong).unwrap();
    assert!(!r.matched);
    assert!(!r.first_diffs.is_empty() && r.first_diffs.len() <= 20);
}

#[test]
fn finite_identity() {
    let r = verify_finite_identity(24).unwrap();
    assert!(r.passed(), "{r:?}");
    let two_term = build_finite_r(3).unwrap();
    // 1 - y1 - y2 - x + ... : R = (1-x)(1-x y1 y2)/((1+y1)(1+y2)(1+x y1)(1+x y2))
    assert_eq!(two_term.coeff(&x(&[1, 0, 0])).unwrap(), BigInt::from(-1));
    assert_eq!(two_term.coeff(&x(&[0, 1, 0])).unwrap(), BigInt::from(-1));
}

#[test]
fn talpha_tgamma() {
    let r = verify_talpha_tgamma(12).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.subchecks.len(), 3);
}

#[test]
fn sl21_slices_and_match() {
    let lhs = build_sl21_lhs(6).unwrap();
    let rhs = build_sl21_rhs(6).unwrap();
    let want: Vec<(Vec<i64>, i64)> = {
        let mut v = vec![(vec![0, 1, 0], -1), (vec![0, 0, 1], -1), (vec![1, -1, -1], -1)];
        v.sort();
        v
    };
    for s in [&lhs, &rhs] {
        assert_eq!(slice(s, 0), vec![(vec![0, 0, 0], 1)]);
        assert_eq!(slice(s, 1), want);
    }
    assert!(verify_sl21(18).unwrap().passed());
}

#[test]
fn ratio_is_one() {
    let r = ratio_support_check(16).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.subchecks.iter().any(|c| c.name == "constant_term_is_1" && c.passed));
}

#[test]
fn dumps_are_canonical_json() {
    let s = build_expr(DumpExpr::Lhs, 1).unwrap();
    let text = s.to_json();
    assert_eq!(text, include_str!("golden/slice1.json"));
    assert_eq!(GradedSeries::from_json(&text).unwrap(), s);
    assert_eq!(s.lattice(), &LatticeSpec::gl22_affine());
}
