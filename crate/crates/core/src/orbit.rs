//! Signed orbit sums `F_G = sum_{w in G} sgn(w) w(t)` expanded into
//! [`GradedSeries`], always divided by `e^rho` so that every exponent is an
//! integer.
//!
//! Monomials are identified with weights through `q = e^{-delta}`,
//! `x = e^{-alpha}`, `y_i = e^{-beta_i}`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{Rat, Weight, WeylElement};
use crate::series::{ExpVec, GradedSeries, LatticeSpec};

/// Which monomial lattice orbit terms expand into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightLattice {
    /// Exponents `(n, a, b1, b2)` of `q^n x^a y1^b1 y2^b2`.
    Affine,
    /// Exponents `(a, b1, b2)` of `x^a y1^b1 y2^b2`; no `delta` component allowed.
    Finite,
}

impl WeightLattice {
    pub fn spec(self) -> Arc<LatticeSpec> {
        match self {
            WeightLattice::Affine => LatticeSpec::gl22_affine(),
            WeightLattice::Finite => LatticeSpec::gl22_finite(),
        }
    }
}

fn int(r: &Rat, lambda: &Weight) -> Result<i64> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::NotInRootLattice(format!(
            "{lambda} has non-integral coordinates; requires rho-normalization"
        )))
    }
}

/// Exponent vector of `e^lambda`.
pub fn weight_to_exp(lambda: &Weight, lattice: WeightLattice) -> Result<ExpVec> {
    let c = lambda.coords();
    let bad = |why: &str| Error::NotInRootLattice(format!("{lambda}: {why}"));
    if !c[5].is_zero() {
        return Err(bad("has a Lambda0 component"));
    }
    if !(c[0] + c[1] + c[2] + c[3]).is_zero() {
        return Err(bad("finite part is not in the root lattice"));
    }
    let b1 = -int(&c[2], lambda)?;
    let b2 = int(&c[3], lambda)?;
    let a = b1 - int(&c[0], lambda)?;
    let n = -int(&c[4], lambda)?;
    match lattice {
        WeightLattice::Affine => Ok(ExpVec(vec![n, a, b1, b2])),
        WeightLattice::Finite if n == 0 => Ok(ExpVec(vec![a, b1, b2])),
        WeightLattice::Finite => Err(bad("has a delta component on the finite lattice")),
    }
}

/// The weight `lambda` with `e^lambda` equal to the monomial `e`.
pub fn exp_to_weight(e: &ExpVec, lattice: WeightLattice) -> Result<Weight> {
    let (n, a, b1, b2) = match (lattice, e.0.as_slice()) {
        (WeightLattice::Affine, &[n, a, b1, b2]) => (n, a, b1, b2),
        (WeightLattice::Finite, &[a, b1, b2]) => (0, a, b1, b2),
        _ => {
            return Err(Error::DimensionMismatch {
                expected: lattice.spec().rank(),
                got: e.rank(),
            })
        }
    };
    Ok(-(Weight::delta() * n + Weight::alpha() * a + Weight::beta1() * b1 + Weight::beta2() * b2))
}

/// `sign * e^top * prod_j (1 - e^{-numers_j}) / prod_j (1 + e^{-denoms_j})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitTerm {
    pub sign: i64,
    pub top: Weight,
    #[serde(default)]
    pub numers: Vec<Weight>,
    pub denoms: Vec<Weight>,
}

impl OrbitTerm {
    /// `e^rho / ((1 + e^{-beta1})(1 + e^{-beta2}))`.
    pub fn standard_seed() -> Self {
        OrbitTerm {
            sign: 1,
            top: Weight::rho(),
            numers: vec![],
            denoms: vec![Weight::beta1(), Weight::beta2()],
        }
    }

    /// The finite denominator times `e^rho`, as a single term.
    pub fn r_rho_seed() -> Self {
        let (a, b1, b2) = (Weight::alpha(), Weight::beta1(), Weight::beta2());
        OrbitTerm {
            sign: 1,
            top: Weight::rho(),
            numers: vec![a, Weight::gamma()],
            denoms: vec![b1, b2, a + b1, a + b2],
        }
    }

    pub fn act(&self, w: &WeylElement) -> OrbitTerm {
        OrbitTerm {
            sign: self.sign * w.sgn(),
            top: w.apply(&self.top),
            numers: self.numers.iter().map(|v| w.apply(v)).collect(),
            denoms: self.denoms.iter().map(|m| w.apply(m)).collect(),
        }
    }
}

impl fmt::Display for OrbitTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}e^{}", if self.sign < 0 { "-" } else { "+" }, self.top)?;
        for v in &self.numers {
            write!(f, " (1-e^-{v})")?;
        }
        for m in &self.denoms {
            write!(f, " /(1+e^-{m})")?;
        }
        Ok(())
    }
}

/// Expands `e^{-rho} * t` up to `cutoff`.
///
/// A factor whose monomial has negative degree is flipped first:
/// `1/(1+e^{-mu}) = e^{mu}/(1+e^{mu})` and `1-e^{-nu} = -e^{-nu}(1-e^{nu})`.
pub fn expand_orbit_term(t: &OrbitTerm, lattice: WeightLattice, cutoff: u32) -> Result<GradedSeries> {
    let spec = lattice.spec();
    let mut prefix = t.top - Weight::rho();
    let mut sign = t.sign;
    let mut numers = Vec::with_capacity(t.numers.len());
    let mut denoms = Vec::with_capacity(t.denoms.len());
    for (list, out, is_numer) in [(&t.numers, &mut numers, true), (&t.denoms, &mut denoms, false)] {
        for w in list {
            let m = weight_to_exp(&-*w, lattice)?;
            let d = spec.degree(&m)?;
            if d == 0 {
                return Err(Error::InvalidFactor(format!(
                    "factor monomial {} has degree 0",
                    spec.format_monomial(&m)
                )));
            }
            if d > 0 {
                out.push(m);
            } else if is_numer {
                sign = -sign;
                prefix = prefix - *w;
                out.push(-&m);
            } else {
                prefix = prefix + *w;
                out.push(-&m);
            }
        }
    }
    let p = weight_to_exp(&prefix, lattice)?;
    let cc = spec.cone_coords(&p)?;
    if !cc.in_cone {
        return Err(Error::SupportViolation(format!(
            "{t} has leading monomial {} outside the cone",
            spec.format_monomial(&p)
        )));
    }
    if cc.degree > cutoff as i64 {
        return GradedSeries::zero(spec, cutoff);
    }
    let violation = |m: &ExpVec| {
        Error::SupportViolation(format!("{t}: factor monomial {} outside the cone", spec.format_monomial(m)))
    };
    let mut s = GradedSeries::monomial(spec.clone(), cutoff, &p, BigInt::from(sign))?;
    for m in &numers {
        s.mul_binomial(m, -1).map_err(|_| violation(m))?;
    }
    for m in &denoms {
        s.div_binomial(m, 1).map_err(|_| violation(m))?;
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subgroup {
    /// `{1, s_alpha}`
    WAlpha,
    /// `{1, s_gamma}`
    WGamma,
    /// `{t_{p alpha}}`
    TAlpha,
    /// `{t_{p gamma}}`
    TGamma,
    /// `{t_{p alpha} s_alpha^eps}`
    AffineAlpha,
    /// `{t_{p gamma} s_gamma^eps}`
    AffineGamma,
}

impl Subgroup {
    /// Elements whose translation part has `|p| = r`; empty past `r = 0` for finite groups.
    pub fn ring(self, r: i64) -> Vec<WeylElement> {
        let ps: Vec<i64> = if r == 0 { vec![0] } else { vec![r, -r] };
        let mut out = Vec::new();
        for &p in &ps {
            match self {
                Subgroup::WAlpha | Subgroup::WGamma if r > 0 => {}
                Subgroup::WAlpha => out.extend([WeylElement::identity(), WeylElement::s_alpha()]),
                Subgroup::WGamma => out.extend([WeylElement::identity(), WeylElement::s_gamma()]),
                Subgroup::TAlpha => out.push(WeylElement::t_alpha(p)),
                Subgroup::TGamma => out.push(WeylElement::t_gamma(p)),
                Subgroup::AffineAlpha => {
                    out.push(WeylElement::t_alpha(p));
                    out.push(WeylElement::t_alpha(p).compose(&WeylElement::s_alpha()));
                }
                Subgroup::AffineGamma => {
                    out.push(WeylElement::t_gamma(p));
                    out.push(WeylElement::t_gamma(p).compose(&WeylElement::s_gamma()));
                }
            }
        }
        out
    }

    fn is_finite(self) -> bool {
        matches!(self, Subgroup::WAlpha | Subgroup::WGamma)
    }
}

/// Rings examined before giving up on termination.
fn ring_bound(cutoff: u32) -> i64 {
    2 * cutoff as i64 + 8
}

/// `e^{-rho} F_G(seed)` truncated at `cutoff`.
///
/// Walks rings `|p| = 0, 1, 2, ...` and stops at the first ring whose every
/// term starts above the cutoff.
pub fn orbit_sum(
    group: Subgroup,
    seed: &OrbitTerm,
    lattice: WeightLattice,
    cutoff: u32,
) -> Result<GradedSeries> {
    let mut acc = GradedSeries::zero(lattice.spec(), cutoff)?;
    for r in 0..=ring_bound(cutoff) {
        let ring = group.ring(r);
        if ring.is_empty() && group.is_finite() {
            return Ok(acc);
        }
        let parts: Vec<GradedSeries> = ring
            .par_iter()
            .map(|w| expand_orbit_term(&seed.act(w), lattice, cutoff))
            .collect::<Result<_>>()?;
        if r > 0 && parts.iter().all(GradedSeries::is_zero) {
            return Ok(acc);
        }
        let mut pairs: Vec<(BigInt, &GradedSeries)> = vec![(BigInt::from(1), &acc)];
        pairs.extend(parts.iter().map(|p| (BigInt::from(1), p)));
        acc = GradedSeries::linear_combine(&pairs)?;
    }
    Err(Error::NonTerminating(ring_bound(cutoff) as u64))
}
