//! Exponent lattices and the unimodular change of basis onto cone coordinates.
//!
//! A monomial is stored by its raw exponent vector (`ExpVec`), e.g. the
//! exponents of `q^n x^a y1^b1 y2^b2`. The lattice matrix `K` maps raw
//! exponents to coordinates in the basis of simple-root monomials, in which
//! the standard cone is just the nonnegative orthant and the degree is the
//! coordinate sum.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_RANK: usize = 8;
pub const MAX_CUTOFF: u32 = u16::MAX as u32;

/// Raw exponent vector of a Laurent monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExpVec(pub Vec<i64>);

impl ExpVec {
    pub fn zero(rank: usize) -> Self {
        ExpVec(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, k: i64) -> ExpVec {
        ExpVec(self.0.iter().map(|e| e * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl From<Vec<i64>> for ExpVec {
    fn from(v: Vec<i64>) -> Self {
        ExpVec(v)
    }
}

impl<const N: usize> From<[i64; N]> for ExpVec {
    fn from(v: [i64; N]) -> Self {
        ExpVec(v.to_vec())
    }
}

impl Add for &ExpVec {
    type Output = ExpVec;
    fn add(self, rhs: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.rank(), rhs.rank());
        ExpVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ExpVec {
    type Output = ExpVec;
    fn sub(self, rhs: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.rank(), rhs.rank());
        ExpVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ExpVec {
    type Output = ExpVec;
    fn neg(self) -> ExpVec {
        ExpVec(self.0.iter().map(|a| -a).collect())
    }
}

/// Result of mapping a raw exponent into cone coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCoords {
    pub coords: Vec<i64>,
    pub in_cone: bool,
    pub degree: i64,
}

/// A rank-`r` exponent lattice with a unimodular map onto cone coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSpec {
    rank: usize,
    k: Vec<Vec<i64>>,
    k_inv: Vec<Vec<i64>>,
    vars: Vec<String>,
}

impl LatticeSpec {
    pub fn new(k: Vec<Vec<i64>>, vars: Vec<String>) -> Result<Self> {
        let rank = k.len();
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::UnsupportedRank(rank));
        }
        for row in &k {
            if row.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: row.len(),
                });
            }
        }
        if vars.len() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                got: vars.len(),
            });
        }
        let k_inv = integer_inverse(&k)?;
        Ok(LatticeSpec {
            rank,
            k,
            k_inv,
            vars,
        })
    }

    /// `q^n x^a y1^b1 y2^b2` with cone coordinates `(b1+n, a+n, b2+n, n)`:
    /// the simple roots beta1, alpha, beta2, delta-gamma become unit vectors.
    pub fn gl22_affine() -> Arc<LatticeSpec> {
        static CELL: OnceLock<Arc<LatticeSpec>> = OnceLock::new();
        CELL.get_or_init(|| {
            Arc::new(
                LatticeSpec::new(
                    vec![
                        vec![1, 0, 1, 0],
                        vec![1, 1, 0, 0],
                        vec![1, 0, 0, 1],
                        vec![1, 0, 0, 0],
                    ],
                    names(&["q", "x", "y1", "y2"]),
                )
                .expect("gl22 affine lattice is unimodular"),
            )
        })
        .clone()
    }

    /// `x^a y1^b1 y2^b2` for the finite root system; `K` is the identity.
    pub fn gl22_finite() -> Arc<LatticeSpec> {
        static CELL: OnceLock<Arc<LatticeSpec>> = OnceLock::new();
        CELL.get_or_init(|| {
            Arc::new(
                LatticeSpec::new(identity(3), names(&["x", "y1", "y2"]))
                    .expect("identity is unimodular"),
            )
        })
        .clone()
    }

    /// `z^n u1^b1 u2^b2` for affine sl(2|1), cone coordinates `(b1+n, b2+n, n)`.
    pub fn sl21_affine() -> Arc<LatticeSpec> {
        static CELL: OnceLock<Arc<LatticeSpec>> = OnceLock::new();
        CELL.get_or_init(|| {
            Arc::new(
                LatticeSpec::new(
                    vec![vec![1, 1, 0], vec![1, 0, 1], vec![1, 0, 0]],
                    names(&["z", "u1", "u2"]),
                )
                .expect("sl21 lattice is unimodular"),
            )
        })
        .clone()
    }

    /// Plain power series in `q`.
    pub fn q_line() -> Arc<LatticeSpec> {
        static CELL: OnceLock<Arc<LatticeSpec>> = OnceLock::new();
        CELL.get_or_init(|| {
            Arc::new(LatticeSpec::new(identity(1), names(&["q"])).expect("identity is unimodular"))
        })
        .clone()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.k
    }

    pub fn inverse_matrix(&self) -> &[Vec<i64>] {
        &self.k_inv
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn check_rank(&self, e: &ExpVec) -> Result<()> {
        if e.rank() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: e.rank(),
            });
        }
        Ok(())
    }

    pub fn cone_coords(&self, e: &ExpVec) -> Result<ConeCoords> {
        self.check_rank(e)?;
        let coords = mat_vec(&self.k, &e.0);
        let in_cone = coords.iter().all(|&c| c >= 0);
        let degree = coords.iter().sum();
        Ok(ConeCoords {
            coords,
            in_cone,
            degree,
        })
    }

    pub fn degree(&self, e: &ExpVec) -> Result<i64> {
        Ok(self.cone_coords(e)?.degree)
    }

    pub fn from_cone_coords(&self, coords: &[i64]) -> Result<ExpVec> {
        if coords.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: coords.len(),
            });
        }
        Ok(ExpVec(mat_vec(&self.k_inv, coords)))
    }

    pub(crate) fn mono(&self, e: &ExpVec) -> Result<Mono> {
        let cc = self.cone_coords(e)?;
        if !cc.in_cone {
            return Err(Error::OutOfCone(e.0.clone()));
        }
        if cc.degree > MAX_CUTOFF as i64 {
            return Err(Error::CutoffTooLarge(cc.degree as u64));
        }
        Ok(Mono::from_coords(&cc.coords))
    }

    pub(crate) fn exp_of(&self, m: Mono) -> ExpVec {
        ExpVec(mat_vec(&self.k_inv, &m.coords(self.rank)))
    }

    /// Human-readable monomial such as `q^2*x^-1*y1`.
    pub fn format_monomial(&self, e: &ExpVec) -> String {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(&e.0)
            .filter(|(_, &p)| p != 0)
            .map(|(v, &p)| if p == 1 { v.clone() } else { format!("{v}^{p}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Cone coordinates packed into 16-bit lanes, lane 0 most significant, so
/// integer order is lexicographic order on coordinates and monomial
/// multiplication is integer addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Mono(pub(crate) u128);

impl Mono {
    pub(crate) const ONE: Mono = Mono(0);

    pub(crate) fn from_coords(coords: &[i64]) -> Mono {
        let mut packed = 0u128;
        for (i, &c) in coords.iter().enumerate() {
            debug_assert!((0..=MAX_CUTOFF as i64).contains(&c));
            packed |= (c as u128) << (16 * (MAX_RANK - 1 - i));
        }
        Mono(packed)
    }

    pub(crate) fn coords(self, rank: usize) -> Vec<i64> {
        (0..rank)
            .map(|i| ((self.0 >> (16 * (MAX_RANK - 1 - i))) & 0xffff) as i64)
            .collect()
    }

    pub(crate) fn degree(self) -> u32 {
        (0..MAX_RANK)
            .map(|i| ((self.0 >> (16 * i)) & 0xffff) as u32)
            .sum()
    }

    /// Caller guarantees the combined degree stays within `MAX_CUTOFF`.
    #[inline]
    pub(crate) fn mul(self, other: Mono) -> Mono {
        Mono(self.0 + other.0)
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Gauss-Jordan over the rationals; fails unless the inverse is integral
/// with determinant +-1.
fn integer_inverse(k: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = k.len();
    let mut a: Vec<Vec<Ratio<i128>>> = k
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Ratio<i128>> = row.iter().map(|&x| Ratio::from_integer(x as i128)).collect();
            r.extend((0..n).map(|j| Ratio::from_integer(i128::from(i == j))));
            r
        })
        .collect();
    let mut det = Ratio::<i128>::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Err(Error::NotUnimodular { det: "0".into() });
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot = a[col].clone();
                for (x, v) in a[r].iter_mut().zip(pivot) {
                    *x -= f * v;
                }
            }
        }
    }
    if !(det.is_integer() && det.abs().is_one()) {
        return Err(Error::NotUnimodular {
            det: det.to_string(),
        });
    }
    Ok(a.into_iter()
        .map(|row| row[n..].iter().map(|x| x.to_integer() as i64).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vector_is_apex() {
        let l = LatticeSpec::gl22_affine();
        let cc = l.cone_coords(&ExpVec::zero(4)).unwrap();
        assert_eq!(cc.coords, vec![0, 0, 0, 0]);
        assert!(cc.in_cone);
        assert_eq!(cc.degree, 0);
    }

    #[test]
    fn affine_simple_root_delta_minus_gamma() {
        let l = LatticeSpec::gl22_affine();
        let cc = l.cone_coords(&ExpVec::from([1, -1, -1, -1])).unwrap();
        assert_eq!(cc.coords, vec![0, 0, 0, 1]);
        assert!(cc.in_cone);
        assert_eq!(cc.degree, 1);
    }

    #[test]
    fn inverse_columns_are_simple_root_monomials() {
        let l = LatticeSpec::gl22_affine();
        let unit = |i: usize| {
            let mut v = vec![0; 4];
            v[i] = 1;
            l.from_cone_coords(&v).unwrap()
        };
        assert_eq!(unit(0), ExpVec::from([0, 0, 1, 0])); // y1
        assert_eq!(unit(1), ExpVec::from([0, 1, 0, 0])); // x
        assert_eq!(unit(2), ExpVec::from([0, 0, 0, 1])); // y2
        assert_eq!(unit(3), ExpVec::from([1, -1, -1, -1])); // q/(x y1 y2)
    }

    #[test]
    fn y1_over_y2_cone_condition() {
        let l = LatticeSpec::gl22_affine();
        for n in 0..6i64 {
            for k in -8..=8i64 {
                let cc = l.cone_coords(&ExpVec::from([n, 0, k, -k])).unwrap();
                assert_eq!(cc.in_cone, k.abs() <= n, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn degrees_of_generators() {
        let l = LatticeSpec::gl22_affine();
        assert_eq!(l.degree(&ExpVec::from([1, 0, 0, 0])).unwrap(), 4);
        assert_eq!(l.degree(&ExpVec::from([0, 1, 0, 0])).unwrap(), 1);
        let s = LatticeSpec::sl21_affine();
        assert_eq!(s.degree(&ExpVec::from([1, 0, 0])).unwrap(), 3);
        assert!(s.cone_coords(&ExpVec::from([1, -1, -1])).unwrap().in_cone);
    }

    #[test]
    fn dimension_mismatch() {
        let l = LatticeSpec::gl22_affine();
        assert!(matches!(
            l.cone_coords(&ExpVec::from([1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_non_unimodular() {
        let err = LatticeSpec::new(vec![vec![2, 0], vec![0, 1]], names(&["a", "b"])).unwrap_err();
        assert!(matches!(err, Error::NotUnimodular { .. }));
    }

    #[test]
    fn packing_preserves_lex_order_and_degree() {
        let a = Mono::from_coords(&[0, 3, 1, 0]);
        let b = Mono::from_coords(&[1, 0, 0, 0]);
        assert!(a < b);
        assert_eq!(a.degree(), 4);
        assert_eq!(a.mul(b).coords(4), vec![1, 3, 1, 0]);
    }

    #[test]
    fn format() {
        let l = LatticeSpec::gl22_affine();
        assert_eq!(l.format_monomial(&ExpVec::from([1, -1, -1, -1])), "q*x^-1*y1^-1*y2^-1");
        assert_eq!(l.format_monomial(&ExpVec::zero(4)), "1");
    }
}
