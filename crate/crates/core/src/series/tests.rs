use super::*;
use proptest::prelude::*;

fn gl() -> Arc<LatticeSpec> {
    LatticeSpec::gl22_affine()
}

fn e(v: [i64; 4]) -> ExpVec {
    ExpVec::from(v)
}

const Q: [i64; 4] = [1, 0, 0, 0];
const X: [i64; 4] = [0, 1, 0, 0];
const Y1: [i64; 4] = [0, 0, 1, 0];
const Y2: [i64; 4] = [0, 0, 0, 1];
const ONE: [i64; 4] = [0, 0, 0, 0];

fn poly(cutoff: u32, terms: &[([i64; 4], i64)]) -> GradedSeries {
    GradedSeries::from_terms(
        gl(),
        cutoff,
        terms.iter().map(|(x, c)| (e(*x), BigInt::from(*c))),
    )
    .unwrap()
}

fn int(c: i64) -> BigInt {
    BigInt::from(c)
}

/// Dense univariate product, used as an independent oracle.
fn dense_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0; n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

#[test]
fn linear_combine_examples() {
    let one = GradedSeries::one(gl(), 6).unwrap();
    let z = GradedSeries::linear_combine(&[(int(1), &one), (int(-1), &one)]).unwrap();
    assert!(z.is_zero());

    let a = poly(6, &[(ONE, 1), (X, -1)]);
    let b = poly(6, &[(X, 1)]);
    let s = GradedSeries::linear_combine(&[(int(1), &a), (int(1), &b)]).unwrap();
    assert_eq!(s, one);

    let c = poly(6, &[(ONE, 1), (Q, 1)]);
    let s = GradedSeries::linear_combine(&[(int(2), &c), (int(-1), &c)]).unwrap();
    assert_eq!(s, c);
}

#[test]
fn linear_combine_takes_min_cutoff_and_checks_lattice() {
    let a = poly(8, &[(ONE, 1), (Q, 1)]);
    let b = poly(3, &[(X, 1)]);
    let s = a.add(&b).unwrap();
    assert_eq!(s.cutoff(), 3);
    assert_eq!(s, poly(3, &[(ONE, 1), (X, 1)]));

    let other = GradedSeries::one(LatticeSpec::sl21_affine(), 3).unwrap();
    assert_eq!(a.add(&other).unwrap_err(), Error::LatticeMismatch);
    assert_eq!(a.mul(&other).unwrap_err(), Error::LatticeMismatch);
}

#[test]
fn mul_examples() {
    let a = poly(10, &[(ONE, 1), (X, -1)]);
    let b = poly(10, &[(ONE, 1), (X, 1)]);
    assert_eq!(a.mul(&b).unwrap(), poly(10, &[(ONE, 1), ([0, 2, 0, 0], -1)]));

    // q * (x y1 y2)^-1 : degrees 4 and -3 combine into the simple root of degree 1
    let m = e([1, -1, -1, -1]);
    let s = GradedSeries::monomial(gl(), 10, &m, 1).unwrap();
    assert_eq!(s.slice(1).unwrap(), vec![(m.clone(), int(1))]);
    // the (x y1 y2)^-1 factor alone is not in the cone
    assert!(matches!(
        GradedSeries::monomial(gl(), 10, &e([0, -1, -1, -1]), 1),
        Err(Error::OutOfCone(_))
    ));
    // (x y1 y2) * q/(x y1 y2) = q
    let xyy = GradedSeries::monomial(gl(), 10, &e([0, 1, 1, 1]), 1).unwrap();
    assert_eq!(xyy.mul(&s).unwrap(), poly(10, &[(Q, 1)]));
}

#[test]
fn mul_truncates_at_min_cutoff() {
    let a = poly(9, &[(ONE, 1), (Q, 1)]);
    let b = poly(5, &[(ONE, 1), (Q, 1)]);
    let p = a.mul(&b).unwrap();
    assert_eq!(p.cutoff(), 5);
    assert_eq!(p, poly(5, &[(ONE, 1), (Q, 2)]));
}

#[test]
fn invert_examples() {
    let n = 9;
    let inv = poly(n, &[(ONE, 1), (X, -1)]).invert().unwrap();
    let expect: Vec<_> = (0..=n as i64).map(|k| ([0, k, 0, 0], 1)).collect();
    assert_eq!(inv, poly(n, &expect));

    let m = [1, -1, -1, -1];
    let inv = poly(n, &[(ONE, 1), (m, 1)]).invert().unwrap();
    let expect: Vec<_> = (0..=n as i64)
        .map(|k| ([k, -k, -k, -k], if k % 2 == 0 { 1 } else { -1 }))
        .collect();
    assert_eq!(inv, poly(n, &expect));

    let err = poly(n, &[(X, 1)]).invert().unwrap_err();
    assert!(matches!(err, Error::NotInvertible(_)));
    assert!(err.to_string().contains("not invertible in cone-supported ring"));

    let s = poly(n, &[(ONE, 1), (Y1, 1)]);
    assert_eq!(s.mul(&s.invert().unwrap()).unwrap(), GradedSeries::one(gl(), n).unwrap());

    // constant term -1 is a unit too
    let s = poly(n, &[(ONE, -1), (Y2, 3)]);
    assert_eq!(s.mul(&s.invert().unwrap()).unwrap(), GradedSeries::one(gl(), n).unwrap());
}

#[test]
fn binomial_division_matches_invert() {
    let mut a = poly(12, &[(ONE, 1), (Y1, 2), (Q, -1)]);
    let b = a.clone();
    a.div_binomial(&e([1, 0, 1, 0]), 3).unwrap();
    let f = poly(12, &[(ONE, 1), ([1, 0, 1, 0], 3)]);
    assert_eq!(a, b.mul(&f.invert().unwrap()).unwrap());
    a.mul_binomial(&e([1, 0, 1, 0]), 3).unwrap();
    assert_eq!(a, b);
}

#[test]
fn binomial_rejects_degree_zero_and_out_of_cone() {
    let mut s = GradedSeries::one(gl(), 5).unwrap();
    assert!(matches!(s.mul_binomial(&e(ONE), 1), Err(Error::InvalidFactor(_))));
    assert!(matches!(s.div_binomial(&e([0, -1, 0, 0]), 1), Err(Error::OutOfCone(_))));
}

#[test]
fn euler_product_pentagonal_pattern() {
    // (q;q)_inf on the q line, checked against a dense product of factors
    let n = 30u32;
    let s = GradedSeries::pochhammer(
        LatticeSpec::q_line(),
        &ExpVec::from([1]),
        &ExpVec::from([1]),
        -1,
        n,
    )
    .unwrap();
    let mut dense = vec![0i64; n as usize + 1];
    dense[0] = 1;
    for k in 1..=n as usize {
        let mut f = vec![0i64; k + 1];
        f[0] = 1;
        f[k] = -1;
        dense = dense_mul(&dense, &f, n as usize);
    }
    for (k, c) in dense.iter().enumerate() {
        assert_eq!(s.coeff(&ExpVec::from([k as i64])).unwrap(), int(*c), "q^{k}");
    }
    assert_eq!(&dense[..6], &[1, -1, -1, 0, 0, 1]);

    // same product on the gl lattice, where q has degree 4
    let s = GradedSeries::pochhammer(gl(), &e(Q), &e(Q), -1, 20).unwrap();
    for k in 0..=5 {
        assert_eq!(s.coeff(&e([k, 0, 0, 0])).unwrap(), int(dense[k as usize]));
    }
    assert_eq!(s.num_terms(), 4); // 1, -q, -q^2, q^5
}

#[test]
fn pochhammer_unrolled() {
    let n = 14;
    let s = GradedSeries::pochhammer(gl(), &e(Y1), &e(Q), 1, n).unwrap();
    let mut p = GradedSeries::one(gl(), n).unwrap();
    for k in 0..4 {
        p = p.mul(&poly(n, &[(ONE, 1), ([k, 0, 1, 0], 1)])).unwrap();
    }
    assert_eq!(s, p);

    let s = GradedSeries::pochhammer(gl(), &e(X), &e(Q), -1, n).unwrap();
    assert_eq!(s.coeff(&e(ONE)).unwrap(), int(1));
    assert_eq!(s.coeff(&e(X)).unwrap(), int(-1));
}

#[test]
fn pochhammer_rejects_bad_factors() {
    let err = GradedSeries::pochhammer(gl(), &e(ONE), &e(Q), 1, 5).unwrap_err();
    assert!(matches!(err, Error::InvalidFactor(_)));
    let err = GradedSeries::pochhammer(gl(), &e([0, -1, 0, 0]), &e(Q), 1, 5).unwrap_err();
    assert!(matches!(err, Error::InvalidFactor(_)));
    let err = GradedSeries::pochhammer(gl(), &e(X), &e(Q), 2, 5).unwrap_err();
    assert!(matches!(err, Error::InvalidFactor(_)));
}

#[test]
fn queries() {
    let s = poly(6, &[(ONE, 1), (X, -1)]).invert().unwrap();
    assert_eq!(s.coeff(&e(ONE)).unwrap(), int(1));
    assert_eq!(
        s.query(Query::Coeff(&e([0, 3, 0, 0]))).unwrap(),
        QueryAnswer::Coeff(int(1))
    );
    assert_eq!(s.coeff(&e([0, -1, 0, 0])).unwrap(), int(0));
    assert!(matches!(
        s.coeff(&e([2, 0, 0, 0])),
        Err(Error::BeyondTruncation { requested: 8, cutoff: 6 })
    ));
    assert!(matches!(s.slice(7), Err(Error::BeyondTruncation { .. })));
    assert_eq!(s.query(Query::EqualUpTo(&s, 6)).unwrap(), QueryAnswer::Flag(true));
    assert_eq!(s.support().len(), 7);
    assert!(s.equal_up_to(&s, 7).is_err());
}

#[test]
fn diff_lists_disagreements() {
    let a = poly(4, &[(ONE, 1), (X, 2), (Y1, 1)]);
    let b = poly(4, &[(ONE, 1), (X, 1), (Y2, 5)]);
    let d = a.diff_up_to(&b, 4).unwrap();
    assert_eq!(d.len(), 3);
    assert!(d.iter().all(|t| t.degree == 1));
    let x = d.iter().find(|t| t.exponents == e(X)).unwrap();
    assert_eq!((x.left.clone(), x.right.clone()), (int(2), int(1)));
}

#[test]
fn display() {
    let s = poly(3, &[(ONE, 1), (X, -1), ([0, 0, 1, 1], 2)]);
    assert_eq!(s.to_string(), "1 - x + 2*y1*y2 + O(deg 4)");
}

#[test]
fn serialize_two_records() {
    let s = poly(3, &[(ONE, 1), (X, -1)]);
    let text = s.to_json();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        r#"{"rank":4,"K":[[1,0,1,0],[1,1,0,0],[1,0,0,1],[1,0,0,0]],"cutoff":3,"vars":["q","x","y1","y2"],"terms":["#
    );
    assert_eq!(lines[1], r#"{"k":[0,0,0,0],"e":[0,0,0,0],"c":"1"},"#);
    assert_eq!(lines[2], r#"{"k":[0,1,0,0],"e":[0,1,0,0],"c":"-1"}"#);
    assert_eq!(lines[3], "]}");
    assert_eq!(GradedSeries::from_json(&text).unwrap(), s);
    let empty = GradedSeries::zero(gl(), 2).unwrap();
    assert_eq!(GradedSeries::from_json(&empty.to_json()).unwrap(), empty);
}

#[test]
fn deserialize_rejects_bad_input() {
    let head = r#"{"rank":4,"K":[[1,0,1,0],[1,1,0,0],[1,0,0,1],[1,0,0,0]],"cutoff":3,"terms":["#;
    let out_of_cone = format!(r#"{head}{{"k":[0,-1,0,0],"e":[0,-1,0,0],"c":"1"}}]}}"#);
    assert!(matches!(
        GradedSeries::from_json(&out_of_cone),
        Err(Error::OutOfCone(_))
    ));
    let wrong_k = format!(r#"{head}{{"k":[0,0,0,0],"e":[0,1,0,0],"c":"1"}}]}}"#);
    assert!(matches!(GradedSeries::from_json(&wrong_k), Err(Error::Malformed(_))));
    let bad_c = format!(r#"{head}{{"k":[0,1,0,0],"e":[0,1,0,0],"c":"one"}}]}}"#);
    assert!(matches!(GradedSeries::from_json(&bad_c), Err(Error::Malformed(_))));
    let too_high = format!(r#"{head}{{"k":[0,0,0,1],"e":[1,0,0,0],"c":"1"}}]}}"#);
    assert!(matches!(GradedSeries::from_json(&too_high), Err(Error::Malformed(_))));
    let dup = format!(
        r#"{head}{{"k":[0,1,0,0],"e":[0,1,0,0],"c":"1"}},{{"k":[0,1,0,0],"e":[0,1,0,0],"c":"2"}}]}}"#
    );
    assert!(matches!(GradedSeries::from_json(&dup), Err(Error::Malformed(_))));
    assert!(matches!(GradedSeries::from_json("{"), Err(Error::Malformed(_))));
}

// ---------------------------------------------------------------------------
// properties

fn cone_point(max_deg: u32) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..=max_deg as i64, 4).prop_filter("degree", move |c| {
        c.iter().sum::<i64>() <= max_deg as i64
    })
}

fn series(cutoff: u32, max_terms: usize) -> impl Strategy<Value = GradedSeries> {
    prop::collection::vec((cone_point(cutoff), -4i64..=4), 0..max_terms).prop_map(move |terms| {
        let l = gl();
        let terms: Vec<_> = terms
            .into_iter()
            .map(|(k, c)| (l.from_cone_coords(&k).unwrap(), BigInt::from(c)))
            .collect();
        GradedSeries::from_terms(l, cutoff, terms).unwrap()
    })
}

fn unit_series(cutoff: u32) -> impl Strategy<Value = GradedSeries> {
    (series(cutoff, 10), prop::bool::ANY).prop_map(move |(s, neg)| {
        let c0 = s.coeff(&ExpVec::zero(4)).unwrap();
        let target = if neg { -1 } else { 1 };
        let fix = GradedSeries::monomial(gl(), cutoff, &ExpVec::zero(4), BigInt::from(target) - c0)
            .unwrap();
        s.add(&fix).unwrap()
    })
}

proptest! {
    #[test]
    fn grading_is_additive(a in cone_point(30), b in cone_point(30)) {
        let l = gl();
        let ea = l.from_cone_coords(&a).unwrap();
        let eb = l.from_cone_coords(&b).unwrap();
        let prod = &ea + &eb;
        prop_assert_eq!(
            l.degree(&prod).unwrap(),
            l.degree(&ea).unwrap() + l.degree(&eb).unwrap()
        );
        prop_assert!(l.cone_coords(&prod).unwrap().in_cone);
    }

    #[test]
    fn unimodular_round_trip(raw in prop::collection::vec(-50i64..50, 4)) {
        for l in [LatticeSpec::gl22_affine(), LatticeSpec::sl21_affine(), LatticeSpec::gl22_finite()] {
            let r = &raw[..l.rank()];
            let e = ExpVec(r.to_vec());
            let cc = l.cone_coords(&e).unwrap();
            prop_assert_eq!(l.from_cone_coords(&cc.coords).unwrap(), e);
        }
    }

    #[test]
    fn ring_axioms(a in series(10, 8), b in series(10, 8), c in series(10, 8)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn truncation_soundness(a in series(12, 10), b in unit_series(12), m in 0u32..=12) {
        let at = |s: &GradedSeries| s.truncate(m).unwrap();
        prop_assert_eq!(at(&a.mul(&b).unwrap()), at(&a).mul(&at(&b)).unwrap());
        prop_assert_eq!(at(&b.invert().unwrap()), at(&b).invert().unwrap());
        prop_assert_eq!(at(&a.add(&b).unwrap()), at(&a).add(&at(&b)).unwrap());
        let head = ExpVec::from([0, 1, 1, 0]);
        let step = ExpVec::from([1, 0, 0, 0]);
        let p = GradedSeries::pochhammer(gl(), &head, &step, -1, 12).unwrap();
        prop_assert_eq!(at(&p), GradedSeries::pochhammer(gl(), &head, &step, -1, m).unwrap());
    }

    #[test]
    fn serialization_round_trip(a in series(12, 20)) {
        prop_assert_eq!(GradedSeries::from_json(&a.to_json()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn invert_is_two_sided_inverse(s in unit_series(12)) {
        let inv = s.invert().unwrap();
        let one = GradedSeries::one(gl(), 12).unwrap();
        prop_assert_eq!(s.mul(&inv).unwrap(), one.clone());
        prop_assert_eq!(inv.mul(&s).unwrap(), one);
    }

    #[test]
    fn pochhammer_times_inverted_factors_is_one(
        head in cone_point(4).prop_filter("deg>=1", |c| c.iter().sum::<i64>() >= 1),
        step in cone_point(4).prop_filter("deg>=1", |c| c.iter().sum::<i64>() >= 1),
    ) {
        let l = gl();
        let n = 16;
        let head = l.from_cone_coords(&head).unwrap();
        let step = l.from_cone_coords(&step).unwrap();
        let mut p = GradedSeries::pochhammer(l.clone(), &head, &step, -1, n).unwrap();
        let mut k = 0i64;
        loop {
            let f = &head + &step.scale(k);
            if l.degree(&f).unwrap() > n as i64 {
                break;
            }
            let factor = GradedSeries::from_terms(
                l.clone(), n, [(ExpVec::zero(4), BigInt::from(1)), (f, BigInt::from(-1))],
            ).unwrap();
            p = p.mul(&factor.invert().unwrap()).unwrap();
            k += 1;
        }
        prop_assert_eq!(p, GradedSeries::one(l, n).unwrap());
    }
}
