//! Weight space of affine gl(2|2), its bilinear form, the positive roots and
//! the affine Weyl group `W^ = W^_alpha x W^_gamma`.
//!
//! Weights are exact rational vectors over the ordered basis
//! `(eps1, eps2, delta1, delta2, delta, Lambda0)`. The form is diagonal
//! `(1, 1, -1, -1)` on the finite part, `(delta, Lambda0) = 1`, and zero
//! otherwise.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rat = Rational64;

const DIM: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Weight(pub [Rat; DIM]);

fn r(n: i64) -> Rat {
    Rat::from_integer(n)
}

impl Weight {
    pub fn zero() -> Self {
        Weight([Rat::zero(); DIM])
    }

    fn unit(i: usize) -> Self {
        let mut w = Self::zero();
        w.0[i] = Rat::one();
        w
    }

    pub fn from_ints(c: [i64; DIM]) -> Self {
        Weight(c.map(r))
    }

    pub fn eps1() -> Self {
        Self::unit(0)
    }
    pub fn eps2() -> Self {
        Self::unit(1)
    }
    pub fn delta1() -> Self {
        Self::unit(2)
    }
    pub fn delta2() -> Self {
        Self::unit(3)
    }
    /// The null root.
    pub fn delta() -> Self {
        Self::unit(4)
    }
    pub fn lambda0() -> Self {
        Self::unit(5)
    }
    pub fn alpha() -> Self {
        Self::eps1() - Self::eps2()
    }
    pub fn beta1() -> Self {
        Self::delta1() - Self::eps1()
    }
    pub fn beta2() -> Self {
        Self::eps2() - Self::delta2()
    }
    /// `gamma = beta1 + alpha + beta2 = delta1 - delta2`.
    pub fn gamma() -> Self {
        Self::beta1() + Self::alpha() + Self::beta2()
    }
    /// `rho = -(beta1 + beta2)/2`.
    pub fn rho() -> Self {
        (Self::beta1() + Self::beta2()) * Rat::new(-1, 2)
    }

    pub fn coords(&self) -> &[Rat; DIM] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rat::is_integer)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(mut self, rhs: Weight) -> Weight {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        self + (-rhs)
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.map(|a| -a))
    }
}

impl Mul<Rat> for Weight {
    type Output = Weight;
    fn mul(self, k: Rat) -> Weight {
        Weight(self.0.map(|a| a * k))
    }
}

impl Mul<i64> for Weight {
    type Output = Weight;
    fn mul(self, k: i64) -> Weight {
        self * r(k)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Weights travel as six `"p/q"` strings.
impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self
            .0
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        if v.len() != DIM {
            return Err(serde::de::Error::custom(format!(
                "weight needs {DIM} coordinates, got {}",
                v.len()
            )));
        }
        let mut out = [Rat::zero(); DIM];
        for (slot, s) in out.iter_mut().zip(&v) {
            *slot = Rat::from_str(s).map_err(|_| serde::de::Error::custom(format!("bad rational {s:?}")))?;
        }
        Ok(Weight(out))
    }
}

/// The invariant bilinear form.
pub fn inner(a: &Weight, b: &Weight) -> Rat {
    let (a, b) = (&a.0, &b.0);
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2] - a[3] * b[3] + a[4] * b[5] + a[5] * b[4]
}

/// `s_nu(lambda) = lambda - 2 (lambda, nu)/(nu, nu) * nu`.
pub fn reflect(nu: &Weight, lambda: &Weight) -> Result<Weight> {
    let nn = inner(nu, nu);
    if nn.is_zero() {
        return Err(Error::IsotropicRoot);
    }
    Ok(*lambda - *nu * (r(2) * inner(lambda, nu) / nn))
}

/// `t_mu(lambda) = lambda + (lambda,delta) mu - ((lambda,mu) + (mu,mu)/2 (lambda,delta)) delta`.
pub fn translate(mu: &Weight, lambda: &Weight) -> Weight {
    let delta = Weight::delta();
    let ld = inner(lambda, &delta);
    *lambda + *mu * ld - delta * (inner(lambda, mu) + inner(mu, mu) / r(2) * ld)
}

/// `t_{p alpha} s_alpha^eps * t_{pp gamma} s_gamma^epsp`, acting right to left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct WeylElement {
    pub p: i64,
    pub eps: bool,
    pub pp: i64,
    pub epsp: bool,
}

impl WeylElement {
    pub fn identity() -> Self {
        Self::default()
    }
    pub fn s_alpha() -> Self {
        WeylElement { eps: true, ..Self::default() }
    }
    pub fn s_gamma() -> Self {
        WeylElement { epsp: true, ..Self::default() }
    }
    pub fn t_alpha(p: i64) -> Self {
        WeylElement { p, ..Self::default() }
    }
    pub fn t_gamma(pp: i64) -> Self {
        WeylElement { pp, ..Self::default() }
    }

    pub fn sgn(&self) -> i64 {
        if self.eps ^ self.epsp {
            -1
        } else {
            1
        }
    }

    pub fn apply(&self, lambda: &Weight) -> Weight {
        let mut v = *lambda;
        if self.epsp {
            v = reflect(&Weight::gamma(), &v).expect("gamma is not isotropic");
        }
        if self.pp != 0 {
            v = translate(&(Weight::gamma() * self.pp), &v);
        }
        if self.eps {
            v = reflect(&Weight::alpha(), &v).expect("alpha is not isotropic");
        }
        if self.p != 0 {
            v = translate(&(Weight::alpha() * self.p), &v);
        }
        v
    }

    /// `self * other`, using `s t_{q nu} s = t_{-q nu}` in each factor.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let flip = |eps: bool, q: i64| if eps { -q } else { q };
        WeylElement {
            p: self.p + flip(self.eps, other.p),
            eps: self.eps ^ other.eps,
            pp: self.pp + flip(self.epsp, other.pp),
            epsp: self.epsp ^ other.epsp,
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let inv = |p: i64, eps: bool| if eps { (p, eps) } else { (-p, eps) };
        let (p, eps) = inv(self.p, self.eps);
        let (pp, epsp) = inv(self.pp, self.epsp);
        WeylElement { p, eps, pp, epsp }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.p != 0 {
            parts.push(format!("t_{{{}a}}", self.p));
        }
        if self.eps {
            parts.push("s_a".to_string());
        }
        if self.pp != 0 {
            parts.push(format!("t_{{{}g}}", self.pp));
        }
        if self.epsp {
            parts.push("s_g".to_string());
        }
        if parts.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// A positive root of affine gl(2|2) with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineRoot {
    pub weight: Weight,
    pub parity: Parity,
    pub multiplicity: u32,
}

/// Finite roots: even `+-alpha, +-gamma`, odd `+-beta_i, +-(alpha+beta_i)`.
pub fn finite_roots() -> Vec<(Weight, Parity)> {
    let (a, g, b1, b2) = (Weight::alpha(), Weight::gamma(), Weight::beta1(), Weight::beta2());
    let mut out = Vec::new();
    for s in [1, -1] {
        out.push((a * s, Parity::Even));
        out.push((g * s, Parity::Even));
        for b in [b1, b2] {
            out.push((b * s, Parity::Odd));
            out.push(((a + b) * s, Parity::Odd));
        }
    }
    out
}

/// Positive finite roots `alpha, gamma, beta_i, alpha + beta_i`.
pub fn finite_positive_roots() -> Vec<(Weight, Parity)> {
    let (a, g, b1, b2) = (Weight::alpha(), Weight::gamma(), Weight::beta1(), Weight::beta2());
    vec![
        (a, Parity::Even),
        (g, Parity::Even),
        (b1, Parity::Odd),
        (b2, Parity::Odd),
        (a + b1, Parity::Odd),
        (a + b2, Parity::Odd),
    ]
}

/// Positive affine roots `nu + s delta` with `s <= max_s`: the finite positive
/// roots, every finite root shifted by `s >= 1`, and the imaginary roots
/// `s delta` with multiplicity 4 (the rank of the gl(2|2) Cartan).
pub fn affine_positive_roots(max_s: u32) -> Vec<AffineRoot> {
    let mut out: Vec<AffineRoot> = finite_positive_roots()
        .into_iter()
        .map(|(weight, parity)| AffineRoot { weight, parity, multiplicity: 1 })
        .collect();
    let d = Weight::delta();
    for s in 1..=max_s as i64 {
        for (nu, parity) in finite_roots() {
            out.push(AffineRoot { weight: nu + d * s, parity, multiplicity: 1 });
        }
        out.push(AffineRoot { weight: d * s, parity: Parity::Even, multiplicity: 4 });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn form_on_basis() {
        assert_eq!(inner(&Weight::eps1(), &Weight::eps1()), r(1));
        assert_eq!(inner(&Weight::delta1(), &Weight::delta1()), r(-1));
        assert_eq!(inner(&Weight::delta(), &Weight::lambda0()), r(1));
        assert_eq!(inner(&Weight::delta(), &Weight::delta()), r(0));
        assert_eq!(inner(&Weight::lambda0(), &Weight::lambda0()), r(0));
        assert_eq!(inner(&Weight::eps1(), &Weight::delta1()), r(0));
    }

    #[test]
    fn named_constants() {
        assert_eq!(inner(&Weight::beta1(), &Weight::alpha()), r(-1));
        assert_eq!(inner(&Weight::rho(), &Weight::alpha()), r(1));
        assert_eq!(inner(&Weight::gamma(), &Weight::gamma()), r(-2));
        assert_eq!(Weight::gamma(), Weight::delta1() - Weight::delta2());
        assert_eq!(inner(&Weight::alpha(), &Weight::gamma()), r(0));
        assert_eq!(inner(&Weight::rho(), &Weight::gamma()), r(1));
        // beta1 - beta2 is in the kernel of the form on the finite roots
        let k = Weight::beta1() - Weight::beta2();
        for (nu, _) in finite_roots() {
            assert_eq!(inner(&k, &nu), r(0));
        }
    }

    #[test]
    fn reflections() {
        let (a, g, b1, b2, rho) = (
            Weight::alpha(),
            Weight::gamma(),
            Weight::beta1(),
            Weight::beta2(),
            Weight::rho(),
        );
        assert_eq!(reflect(&a, &a).unwrap(), -a);
        assert_eq!(reflect(&a, &rho).unwrap(), rho - a);
        assert_eq!(reflect(&g, &b1).unwrap(), -(a + b2));
        assert_eq!(reflect(&Weight::beta1(), &rho), Err(Error::IsotropicRoot));
    }

    #[test]
    fn translations() {
        let (a, b1, d, rho) = (Weight::alpha(), Weight::beta1(), Weight::delta(), Weight::rho());
        assert_eq!(translate(&a, &rho), rho - d);
        assert_eq!(translate(&a, &b1), b1 + d);
        assert_eq!(translate(&a, &Weight::lambda0()), Weight::lambda0() + a - d);
    }

    #[test]
    fn signs() {
        assert_eq!(WeylElement::t_alpha(1).sgn(), 1);
        assert_eq!(WeylElement::s_alpha().compose(&WeylElement::s_gamma()).sgn(), 1);
        assert_eq!(WeylElement::s_alpha().sgn(), -1);
        assert_eq!(WeylElement::s_gamma().sgn(), -1);
    }

    #[test]
    fn delta_and_kernel_fixed() {
        let k = Weight::beta1() - Weight::beta2();
        for w in [
            WeylElement::s_alpha(),
            WeylElement::t_alpha(3),
            WeylElement { p: -2, eps: true, pp: 5, epsp: true },
        ] {
            assert_eq!(w.apply(&Weight::delta()), Weight::delta());
            assert_eq!(w.apply(&k), k);
        }
    }

    #[test]
    fn weight_json() {
        let s = serde_json::to_string(&Weight::rho()).unwrap();
        assert_eq!(s, r#"["1/2","-1/2","-1/2","1/2","0/1","0/1"]"#);
        let back: Weight = serde_json::from_str(&s).unwrap();
        assert_eq!(back, Weight::rho());
        let w = WeylElement { p: 2, eps: true, pp: -1, epsp: false };
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"p":2,"eps":true,"pp":-1,"epsp":false}"#
        );
    }

    #[test]
    fn affine_root_count() {
        let roots = affine_positive_roots(2);
        assert_eq!(roots.len(), 6 + 2 * 13);
        let even_imag: u32 = roots
            .iter()
            .filter(|r| inner(&r.weight, &r.weight).is_zero() && r.parity == Parity::Even)
            .filter(|r| r.weight.0[..4].iter().all(Rat::is_zero))
            .map(|r| r.multiplicity)
            .sum();
        assert_eq!(even_imag, 8);
    }

    fn weight() -> impl Strategy<Value = Weight> {
        prop::array::uniform6((-12i64..12, 1i64..4)).prop_map(|c| Weight(c.map(|(n, d)| Rat::new(n, d))))
    }

    fn element() -> impl Strategy<Value = WeylElement> {
        (-4i64..=4, any::<bool>(), -4i64..=4, any::<bool>())
            .prop_map(|(p, eps, pp, epsp)| WeylElement { p, eps, pp, epsp })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn form_invariance(w in element(), l in weight(), m in weight()) {
            prop_assert_eq!(inner(&w.apply(&l), &w.apply(&m)), inner(&l, &m));
        }

        #[test]
        fn group_law(w1 in element(), w2 in element(), l in weight()) {
            prop_assert_eq!(w1.compose(&w2).apply(&l), w1.apply(&w2.apply(&l)));
            prop_assert_eq!(w1.compose(&w2).sgn(), w1.sgn() * w2.sgn());
            prop_assert_eq!(w1.inverse().apply(&w1.apply(&l)), l);
        }

        #[test]
        fn translations_add(p in -5i64..5, q in -5i64..5, l in weight()) {
            for nu in [Weight::alpha(), Weight::gamma()] {
                let lhs = translate(&(nu * p), &translate(&(nu * q), &l));
                prop_assert_eq!(lhs, translate(&(nu * (p + q)), &l));
            }
        }

        #[test]
        fn reflection_is_involution(l in weight()) {
            let s = WeylElement::s_alpha();
            prop_assert_eq!(s.compose(&s).apply(&l), l);
            prop_assert_eq!(s.apply(&s.apply(&l)), l);
            let a = Weight::alpha();
            prop_assert_eq!(reflect(&a, &reflect(&a, &l).unwrap()).unwrap(), l);
        }
    }
}
