//! Exact Laurent series supported in the standard cone of a lattice,
//! truncated by total degree.
//!
//! Every monomial in the cone has nonnegative degree and each degree slice is
//! finite, so a series truncated at degree `N` is a finite object and products
//! truncate soundly at the smaller of the two cutoffs.
//!
//! Terms are kept per degree slice as sorted vectors keyed by packed cone
//! coordinates. Multiplying or dividing by a binomial `1 + c*m` is a linear
//! sweep over slices, which is how every infinite product in the crate is
//! built; the general product and inverse are reserved for the places that
//! genuinely need them.

mod io;
mod lattice;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

pub use io::{SeriesHeader, SeriesRecord, SeriesDocument};
pub use lattice::{ConeCoords, ExpVec, LatticeSpec, MAX_CUTOFF, MAX_RANK};
pub(crate) use lattice::Mono;

use crate::error::{Error, Result};

type Slice = Vec<(Mono, BigInt)>;

#[derive(Clone, Debug, PartialEq)]
pub struct GradedSeries {
    lattice: Arc<LatticeSpec>,
    cutoff: u32,
    slices: Vec<Slice>,
}

/// One coefficient disagreement between two series.
#[derive(Clone, Debug, PartialEq)]
pub struct TermDiff {
    pub exponents: ExpVec,
    pub degree: u32,
    pub left: BigInt,
    pub right: BigInt,
}

/// What a [`GradedSeries::query`] call asks for.
#[derive(Clone, Debug)]
pub enum Query<'a> {
    Coeff(&'a ExpVec),
    Slice(u32),
    Support,
    EqualUpTo(&'a GradedSeries, u32),
}

#[derive(Clone, Debug, PartialEq)]
pub enum QueryAnswer {
    Coeff(BigInt),
    Terms(Vec<(ExpVec, BigInt)>),
    Support(Vec<ExpVec>),
    Flag(bool),
}

fn check_cutoff(cutoff: u32) -> Result<()> {
    if cutoff > MAX_CUTOFF {
        return Err(Error::CutoffTooLarge(cutoff as u64));
    }
    Ok(())
}

impl GradedSeries {
    pub fn zero(lattice: Arc<LatticeSpec>, cutoff: u32) -> Result<Self> {
        check_cutoff(cutoff)?;
        Ok(GradedSeries {
            lattice,
            cutoff,
            slices: vec![Vec::new(); cutoff as usize + 1],
        })
    }

    pub fn one(lattice: Arc<LatticeSpec>, cutoff: u32) -> Result<Self> {
        let mut s = Self::zero(lattice, cutoff)?;
        s.slices[0].push((Mono::ONE, BigInt::one()));
        Ok(s)
    }

    /// `c * e`; a monomial above the cutoff gives the zero series.
    pub fn monomial(
        lattice: Arc<LatticeSpec>,
        cutoff: u32,
        e: &ExpVec,
        c: impl Into<BigInt>,
    ) -> Result<Self> {
        Self::from_terms(lattice, cutoff, [(e.clone(), c.into())])
    }

    /// Builds a series from raw terms. Duplicates are summed, terms above
    /// the cutoff are dropped, and out-of-cone exponents are rejected.
    pub fn from_terms(
        lattice: Arc<LatticeSpec>,
        cutoff: u32,
        terms: impl IntoIterator<Item = (ExpVec, BigInt)>,
    ) -> Result<Self> {
        let mut s = Self::zero(lattice, cutoff)?;
        let mut acc: Vec<HashMap<Mono, BigInt>> = vec![HashMap::new(); cutoff as usize + 1];
        for (e, c) in terms {
            let cc = s.lattice.cone_coords(&e)?;
            if !cc.in_cone {
                return Err(Error::OutOfCone(e.0));
            }
            if cc.degree > cutoff as i64 {
                continue;
            }
            *acc[cc.degree as usize]
                .entry(Mono::from_coords(&cc.coords))
                .or_default() += c;
        }
        for (slot, map) in s.slices.iter_mut().zip(acc) {
            *slot = into_sorted(map);
        }
        Ok(s)
    }

    pub fn lattice(&self) -> &Arc<LatticeSpec> {
        &self.lattice
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn num_terms(&self) -> usize {
        self.slices.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.slices.iter().all(Vec::is_empty)
    }

    /// All stored terms in canonical order: degree-major, then lexicographic
    /// in cone coordinates.
    pub fn terms(&self) -> impl Iterator<Item = (ExpVec, &BigInt)> + '_ {
        self.slices
            .iter()
            .flatten()
            .map(|(m, c)| (self.lattice.exp_of(*m), c))
    }

    pub(crate) fn raw_terms(&self) -> impl Iterator<Item = (Mono, &BigInt)> + '_ {
        self.slices.iter().flatten().map(|(m, c)| (*m, c))
    }

    fn same_lattice(&self, other: &GradedSeries) -> Result<()> {
        if Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    fn check_degree(&self, d: i64) -> Result<()> {
        if d > self.cutoff as i64 {
            return Err(Error::BeyondTruncation {
                requested: d,
                cutoff: self.cutoff,
            });
        }
        Ok(())
    }

    pub fn query(&self, q: Query<'_>) -> Result<QueryAnswer> {
        Ok(match q {
            Query::Coeff(e) => QueryAnswer::Coeff(self.coeff(e)?),
            Query::Slice(d) => QueryAnswer::Terms(self.slice(d)?),
            Query::Support => QueryAnswer::Support(self.support()),
            Query::EqualUpTo(other, d) => QueryAnswer::Flag(self.equal_up_to(other, d)?),
        })
    }

    /// Coefficient of `e`. Monomials outside the cone have coefficient zero;
    /// asking above the cutoff is an error.
    pub fn coeff(&self, e: &ExpVec) -> Result<BigInt> {
        let cc = self.lattice.cone_coords(e)?;
        self.check_degree(cc.degree)?;
        if !cc.in_cone {
            return Ok(BigInt::zero());
        }
        let m = Mono::from_coords(&cc.coords);
        let slice = &self.slices[cc.degree as usize];
        Ok(slice
            .binary_search_by_key(&m, |(k, _)| *k)
            .map(|i| slice[i].1.clone())
            .unwrap_or_default())
    }

    pub fn slice(&self, d: u32) -> Result<Vec<(ExpVec, BigInt)>> {
        self.check_degree(d as i64)?;
        Ok(self.slices[d as usize]
            .iter()
            .map(|(m, c)| (self.lattice.exp_of(*m), c.clone()))
            .collect())
    }

    pub fn support(&self) -> Vec<ExpVec> {
        self.terms().map(|(e, _)| e).collect()
    }

    pub fn equal_up_to(&self, other: &GradedSeries, d: u32) -> Result<bool> {
        self.same_lattice(other)?;
        self.check_degree(d as i64)?;
        other.check_degree(d as i64)?;
        Ok(self.slices[..=d as usize] == other.slices[..=d as usize])
    }

    /// Every monomial of degree `<= d` where the two series disagree, in
    /// canonical order.
    pub fn diff_up_to(&self, other: &GradedSeries, d: u32) -> Result<Vec<TermDiff>> {
        self.same_lattice(other)?;
        self.check_degree(d as i64)?;
        other.check_degree(d as i64)?;
        let mut out = Vec::new();
        for deg in 0..=d as usize {
            let (a, b) = (&self.slices[deg], &other.slices[deg]);
            let (mut i, mut j) = (0, 0);
            let zero = BigInt::zero();
            while i < a.len() || j < b.len() {
                let (m, l, r) = match (a.get(i), b.get(j)) {
                    (Some((ma, ca)), Some((mb, _))) if ma < mb => {
                        i += 1;
                        (*ma, ca, &zero)
                    }
                    (Some((ma, _)), Some((mb, cb))) if mb < ma => {
                        j += 1;
                        (*mb, &zero, cb)
                    }
                    (Some((ma, ca)), Some((_, cb))) => {
                        i += 1;
                        j += 1;
                        (*ma, ca, cb)
                    }
                    (Some((ma, ca)), None) => {
                        i += 1;
                        (*ma, ca, &zero)
                    }
                    (None, Some((mb, cb))) => {
                        j += 1;
                        (*mb, &zero, cb)
                    }
                    (None, None) => unreachable!(),
                };
                if l != r {
                    out.push(TermDiff {
                        exponents: self.lattice.exp_of(m),
                        degree: deg as u32,
                        left: l.clone(),
                        right: r.clone(),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Restriction to degree `<= m`.
    pub fn truncate(&self, m: u32) -> Result<Self> {
        self.check_degree(m as i64)?;
        Ok(GradedSeries {
            lattice: self.lattice.clone(),
            cutoff: m,
            slices: self.slices[..=m as usize].to_vec(),
        })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = self.clone();
        if k.is_zero() {
            out.slices.iter_mut().for_each(Vec::clear);
        } else if !k.is_one() {
            for (_, c) in out.slices.iter_mut().flatten() {
                *c *= k;
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for (_, c) in out.slices.iter_mut().flatten() {
            *c = -std::mem::take(c);
        }
        out
    }

    /// Exact signed sum `sum k_i * s_i`, truncated at the smallest cutoff.
    pub fn linear_combine(pairs: &[(BigInt, &GradedSeries)]) -> Result<Self> {
        let Some((_, first)) = pairs.first() else {
            return Err(Error::InvalidParameter("empty linear combination".into()));
        };
        let cutoff = pairs.iter().map(|(_, s)| s.cutoff).min().unwrap_or(0);
        let mut out = Self::zero(first.lattice.clone(), cutoff)?;
        for (k, s) in pairs {
            first.same_lattice(s)?;
            if k.is_zero() {
                continue;
            }
            for d in 0..=cutoff as usize {
                let src = s.slices[d].iter().map(|(m, c)| (*m, c * k));
                merge_add(&mut out.slices[d], src);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &GradedSeries) -> Result<Self> {
        Self::linear_combine(&[(BigInt::one(), self), (BigInt::one(), other)])
    }

    pub fn sub(&self, other: &GradedSeries) -> Result<Self> {
        Self::linear_combine(&[(BigInt::one(), self), (-BigInt::one(), other)])
    }

    /// Exact product truncated at `min(cutoff_a, cutoff_b)`. Output degree
    /// slices are computed independently in parallel.
    pub fn mul(&self, other: &GradedSeries) -> Result<Self> {
        self.same_lattice(other)?;
        let cutoff = self.cutoff.min(other.cutoff);
        let slices: Vec<Slice> = (0..=cutoff as usize)
            .into_par_iter()
            .map(|d| {
                let mut acc: HashMap<Mono, BigInt> = HashMap::new();
                for k in 0..=d {
                    accumulate_product(&mut acc, &self.slices[k], &other.slices[d - k], None);
                }
                into_sorted(acc)
            })
            .collect();
        Ok(GradedSeries {
            lattice: self.lattice.clone(),
            cutoff,
            slices,
        })
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut result = Self::one(self.lattice.clone(), self.cutoff)?;
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Multiplicative inverse, solved slice by slice:
    /// `t_0 = 1/s_0`, `t_d = -(1/s_0) * sum_{k>=1} s_k t_{d-k}`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.slices[0]
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_default();
        if !c0.abs().is_one() {
            return Err(Error::NotInvertible(c0.to_string()));
        }
        let neg_c0 = -c0.clone();
        let mut inv = Self::zero(self.lattice.clone(), self.cutoff)?;
        inv.slices[0].push((Mono::ONE, c0));
        for d in 1..=self.cutoff as usize {
            let acc = (1..=d)
                .into_par_iter()
                .fold(HashMap::new, |mut acc, k| {
                    accumulate_product(&mut acc, &self.slices[k], &inv.slices[d - k], Some(&neg_c0));
                    acc
                })
                .reduce(HashMap::new, merge_maps);
            inv.slices[d] = into_sorted(acc);
        }
        Ok(inv)
    }

    fn binomial_mono(&self, m: &ExpVec) -> Result<(Mono, usize)> {
        let mono = self.lattice.mono(m)?;
        let dm = mono.degree() as usize;
        if dm == 0 {
            return Err(Error::InvalidFactor(format!(
                "monomial {} has degree 0",
                self.lattice.format_monomial(m)
            )));
        }
        Ok((mono, dm))
    }

    /// `self *= (1 + c*m)` for an in-cone monomial of positive degree.
    pub fn mul_binomial(&mut self, m: &ExpVec, c: i64) -> Result<()> {
        let (mono, dm) = self.binomial_mono(m)?;
        if c == 0 {
            return Ok(());
        }
        let c = BigInt::from(c);
        for d in (dm..=self.cutoff as usize).rev() {
            let (lo, hi) = self.slices.split_at_mut(d);
            let src = lo[d - dm].iter().map(|(k, v)| (k.mul(mono), v * &c));
            merge_add(&mut hi[0], src);
        }
        Ok(())
    }

    /// `self /= (1 + c*m)` via the geometric series in `-c*m`, which has
    /// integer coefficients for every integer `c`.
    pub fn div_binomial(&mut self, m: &ExpVec, c: i64) -> Result<()> {
        let (mono, dm) = self.binomial_mono(m)?;
        if c == 0 {
            return Ok(());
        }
        let c = BigInt::from(-c);
        for d in dm..=self.cutoff as usize {
            let (lo, hi) = self.slices.split_at_mut(d);
            let src = lo[d - dm].iter().map(|(k, v)| (k.mul(mono), v * &c));
            merge_add(&mut hi[0], src);
        }
        Ok(())
    }

    /// Multiplies by the in-cone monomial `c*m`.
    pub fn mul_monomial(&self, m: &ExpVec, c: impl Into<BigInt>) -> Result<Self> {
        let mono = self.lattice.mono(m)?;
        let c: BigInt = c.into();
        let dm = mono.degree() as usize;
        let mut out = Self::zero(self.lattice.clone(), self.cutoff)?;
        if c.is_zero() {
            return Ok(out);
        }
        for d in dm..=self.cutoff as usize {
            out.slices[d] = self.slices[d - dm]
                .iter()
                .map(|(k, v)| (k.mul(mono), v * &c))
                .collect();
        }
        Ok(out)
    }

    /// Factors `step^n * head` (n >= 0) of a q-Pochhammer product that can
    /// affect degrees `<= cutoff`.
    fn pochhammer_factors(&self, head: &ExpVec, step: &ExpVec) -> Result<Vec<ExpVec>> {
        let l = &self.lattice;
        for (name, e) in [("head", head), ("step", step)] {
            let cc = l.cone_coords(e)?;
            if !cc.in_cone || cc.degree < 1 {
                return Err(Error::InvalidFactor(format!(
                    "pochhammer {name} {} must be in the cone with degree >= 1",
                    l.format_monomial(e)
                )));
            }
        }
        let dh = l.degree(head)?;
        let ds = l.degree(step)?;
        let count = if dh > self.cutoff as i64 {
            0
        } else {
            (self.cutoff as i64 - dh) / ds + 1
        };
        Ok((0..count).map(|n| &head.clone() + &step.scale(n)).collect())
    }

    /// `self *= prod_{n>=0} (1 + sign * step^n * head)`.
    pub fn mul_pochhammer(&mut self, head: &ExpVec, step: &ExpVec, sign: i64) -> Result<()> {
        for f in self.pochhammer_factors(head, step)? {
            self.mul_binomial(&f, sign)?;
        }
        Ok(())
    }

    /// `self /= prod_{n>=0} (1 + sign * step^n * head)`.
    pub fn div_pochhammer(&mut self, head: &ExpVec, step: &ExpVec, sign: i64) -> Result<()> {
        for f in self.pochhammer_factors(head, step)? {
            self.div_binomial(&f, sign)?;
        }
        Ok(())
    }

    /// Truncation of `prod_{n>=0} (1 + sign * step^n * head)`.
    pub fn pochhammer(
        lattice: Arc<LatticeSpec>,
        head: &ExpVec,
        step: &ExpVec,
        sign: i64,
        cutoff: u32,
    ) -> Result<Self> {
        if sign.abs() != 1 {
            return Err(Error::InvalidFactor(format!("sign must be +-1, got {sign}")));
        }
        let mut s = Self::one(lattice, cutoff)?;
        s.mul_pochhammer(head, step, sign)?;
        Ok(s)
    }
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let mono = self.lattice.format_monomial(&e);
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (mag.is_one(), mono.as_str()) {
                (_, "1") => write!(f, "{mag}")?,
                (true, m) => write!(f, "{m}")?,
                (false, m) => write!(f, "{mag}*{m}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(deg {})", self.cutoff + 1)
    }
}

fn into_sorted(map: HashMap<Mono, BigInt>) -> Slice {
    let mut v: Slice = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_unstable_by_key(|(m, _)| *m);
    v
}

fn merge_maps(mut a: HashMap<Mono, BigInt>, b: HashMap<Mono, BigInt>) -> HashMap<Mono, BigInt> {
    if a.len() < b.len() {
        return merge_maps(b, a);
    }
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

fn accumulate_product(
    acc: &mut HashMap<Mono, BigInt>,
    a: &[(Mono, BigInt)],
    b: &[(Mono, BigInt)],
    scale: Option<&BigInt>,
) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    for (ma, ca) in a {
        let ca = match scale {
            Some(s) => ca * s,
            None => ca.clone(),
        };
        for (mb, cb) in b {
            *acc.entry(ma.mul(*mb)).or_default() += &ca * cb;
        }
    }
}

/// Adds a sorted stream of terms into a sorted slice, dropping zeros.
fn merge_add(dst: &mut Slice, src: impl Iterator<Item = (Mono, BigInt)>) {
    let mut src = src.peekable();
    if src.peek().is_none() {
        return;
    }
    let old = std::mem::take(dst);
    let mut out = Vec::with_capacity(old.len() + src.size_hint().0);
    let mut old = old.into_iter().peekable();
    loop {
        match (old.peek(), src.peek()) {
            (Some((a, _)), Some((b, _))) => {
                if a < b {
                    out.push(old.next().unwrap());
                } else if b < a {
                    let t = src.next().unwrap();
                    if !t.1.is_zero() {
                        out.push(t);
                    }
                } else {
                    let (m, mut c) = old.next().unwrap();
                    c += src.next().unwrap().1;
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                }
            }
            (Some(_), None) => out.push(old.next().unwrap()),
            (None, Some(_)) => {
                let t = src.next().unwrap();
                if !t.1.is_zero() {
                    out.push(t);
                }
            }
            (None, None) => break,
        }
    }
    *dst = out;
}

#[cfg(test)]
mod tests;
