//! One-variable q-series: theta functions, Gauss's identity, and Jacobi's
//! eight-squares formula checked against brute-force counting.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{QReport, SubCheck};
use crate::series::{ExpVec, GradedSeries, LatticeSpec};

/// Largest `n` for which [`r8_oracle`] will enumerate lattice points.
pub const MAX_ENUMERATION_N: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum R8Method {
    Convolution,
    Enumeration,
}

fn qseries(cutoff: u32, coeffs: impl IntoIterator<Item = (i64, BigInt)>) -> Result<GradedSeries> {
    let terms = coeffs.into_iter().map(|(n, c)| (ExpVec(vec![n]), c));
    GradedSeries::from_terms(LatticeSpec::q_line(), cutoff, terms)
}

/// Coefficients `0..=cutoff` of a q-series.
pub fn coefficients(s: &GradedSeries) -> Vec<BigInt> {
    let mut out = vec![BigInt::default(); s.cutoff() as usize + 1];
    for (e, c) in s.terms() {
        out[e.0[0] as usize] = c.clone();
    }
    out
}

/// `sum_{j in Z} (sign q)^(j^2)`.
pub fn theta(cutoff: u32, sign: i64) -> Result<GradedSeries> {
    if sign.abs() != 1 {
        return Err(Error::InvalidParameter(format!("sign must be +-1, got {sign}")));
    }
    let mut coeffs = vec![(0, BigInt::one())];
    for j in 1i64.. {
        let m = j * j;
        if m > cutoff as i64 {
            break;
        }
        let s = if sign < 0 && m % 2 == 1 { -2 } else { 2 };
        coeffs.push((m, BigInt::from(s)));
    }
    qseries(cutoff, coeffs)
}

/// `r_8(0..=n)`: the number of `v in Z^8` with `|v|^2 = k`.
pub fn r8_oracle(n: u32, method: R8Method) -> Result<Vec<u64>> {
    match method {
        R8Method::Enumeration => {
            if n > MAX_ENUMERATION_N {
                return Err(Error::InvalidParameter(format!(
                    "enumeration is limited to n <= {MAX_ENUMERATION_N}, got {n}"
                )));
            }
            Ok(r8_enumerate(n as i64))
        }
        R8Method::Convolution => {
            let r1 = r1_sequence(n as usize);
            let mut acc = vec![0u64; n as usize + 1];
            acc[0] = 1;
            for _ in 0..8 {
                acc = convolve(&acc, &r1);
            }
            Ok(acc)
        }
    }
}

fn r1_sequence(n: usize) -> Vec<u64> {
    let mut r1 = vec![0u64; n + 1];
    r1[0] = 1;
    let mut j = 1;
    while j * j <= n {
        r1[j * j] = 2;
        j += 1;
    }
    r1
}

fn convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b[..a.len() - i].iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Walks every integer point of the ball `|v|^2 <= n` in `Z^8`, pruning on
/// the partial norm.
fn r8_enumerate(n: i64) -> Vec<u64> {
    fn walk(depth: usize, norm: i64, n: i64, counts: &mut [u64]) {
        if depth == 8 {
            counts[norm as usize] += 1;
            return;
        }
        let mut v = 0;
        while norm + v * v <= n {
            walk(depth + 1, norm + v * v, n, counts);
            if v > 0 {
                walk(depth + 1, norm + v * v, n, counts);
            }
            v += 1;
        }
    }
    let top = (n as f64).sqrt() as i64 + 1;
    (-top..=top)
        .into_par_iter()
        .filter(|v| v * v <= n)
        .map(|v| {
            let mut counts = vec![0u64; n as usize + 1];
            walk(1, v * v, n, &mut counts);
            counts
        })
        .reduce(
            || vec![0u64; n as usize + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// `(1-q)_q / (1+q)_q`.
pub fn gauss_product(cutoff: u32) -> Result<GradedSeries> {
    let q = ExpVec(vec![1]);
    let mut s = GradedSeries::one(LatticeSpec::q_line(), cutoff)?;
    s.mul_pochhammer(&q, &q, -1)?;
    s.div_pochhammer(&q, &q, 1)?;
    Ok(s)
}

pub fn gauss_check(cutoff: u32) -> Result<QReport> {
    QReport::compare("gauss", cutoff, &gauss_product(cutoff)?, &theta(cutoff, -1)?)
}

/// `1 + 16 sum_{j,k>=1} (-1)^((j+1)k) k^3 q^(jk)`.
pub fn jacobi_formula(cutoff: u32) -> Result<GradedSeries> {
    let n = cutoff as i64;
    let mut coeffs = vec![(0, BigInt::one())];
    for j in 1..=n {
        for k in 1..=n / j {
            let s = if ((j + 1) * k) % 2 == 0 { 1 } else { -1 };
            coeffs.push((j * k, BigInt::from(16 * s * k * k * k)));
        }
    }
    qseries(cutoff, coeffs)
}

/// `(j+1)(j+2)(j+3)/6`, so that `(1+a)^-4 = sum_j (-1)^j c_j a^j`.
pub fn inverse_fourth_power_coeff(j: i64) -> i64 {
    (j + 1) * (j + 2) * (j + 3) / 6
}

/// `1 - 16 sum_{n>=1} q^n (q^2n - 4 q^n + 1) / (1+q^n)^4`, each `(1+q^n)^-4`
/// expanded by its binomial series.
pub fn intermediate_rhs(cutoff: u32) -> Result<GradedSeries> {
    let big_n = cutoff as i64;
    let mut coeffs = vec![(0, BigInt::one())];
    for n in 1..=big_n {
        for j in 0.. {
            let base = n + n * j;
            if base > big_n {
                break;
            }
            let c = inverse_fourth_power_coeff(j) * if j % 2 == 0 { -16 } else { 16 };
            for (shift, w) in [(2 * n, 1), (n, -4), (0, 1)] {
                if base + shift <= big_n {
                    coeffs.push((base + shift, BigInt::from(c * w)));
                }
            }
        }
    }
    qseries(cutoff, coeffs)
}

pub fn intermediate_identity_check(cutoff: u32) -> Result<QReport> {
    let lhs = gauss_product(cutoff)?.pow(8)?;
    QReport::compare("intermediate", cutoff, &lhs, &intermediate_rhs(cutoff)?)
}

/// `16 sum_{d|n} (-1)^(n-d) d^3`, the divisor form of the Jacobi coefficient.
pub fn divisor_form(n: i64) -> i64 {
    if n == 0 {
        return 1;
    }
    16 * (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| if (n - d) % 2 == 0 { d * d * d } else { -d * d * d })
        .sum::<i64>()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiRow {
    pub n: u32,
    pub r8_enum: Option<u64>,
    pub r8_conv: u64,
    pub r8_theta: String,
    pub r8_formula: String,
    #[serde(rename = "match")]
    pub matched: bool,
}

/// Per-`n` comparison of every count of `r_8(n)`; enumeration is omitted
/// past [`MAX_ENUMERATION_N`].
pub fn jacobi_table(max_n: u32) -> Result<Vec<JacobiRow>> {
    let en = if max_n <= MAX_ENUMERATION_N {
        Some(r8_oracle(max_n, R8Method::Enumeration)?)
    } else {
        None
    };
    let conv = r8_oracle(max_n, R8Method::Convolution)?;
    let th = coefficients(&theta(max_n, 1)?.pow(8)?);
    let fo = coefficients(&jacobi_formula(max_n)?);
    Ok((0..=max_n as usize)
        .map(|n| {
            let e = en.as_ref().map(|v| v[n]);
            let c = BigInt::from(conv[n]);
            let matched = th[n] == c && fo[n] == c && e.is_none_or(|e| e == conv[n]);
            JacobiRow {
                n: n as u32,
                r8_enum: e,
                r8_conv: conv[n],
                r8_theta: th[n].to_string(),
                r8_formula: fo[n].to_string(),
                matched,
            }
        })
        .collect())
}

/// `theta(q)^8` against the formula, with the counting oracles, the divisor
/// form and the `q -> -q` twist as subchecks.
pub fn verify_jacobi(cutoff: u32) -> Result<QReport> {
    let th8 = theta(cutoff, 1)?.pow(8)?;
    let formula = jacobi_formula(cutoff)?;
    let mut report = QReport::compare("jacobi", cutoff, &th8, &formula)?;

    let table = jacobi_table(cutoff)?;
    let bad: Vec<u32> = table.iter().filter(|r| !r.matched).map(|r| r.n).collect();
    report = report.with_subcheck(SubCheck::new(
        "counting_oracles_agree",
        bad.is_empty(),
        format!("{} rows disagree {:?}", bad.len(), bad),
    ));

    let fo = coefficients(&formula);
    let div_bad = (0..=cutoff as i64)
        .filter(|&n| fo[n as usize].to_i64() != Some(divisor_form(n)))
        .count();
    report = report.with_subcheck(SubCheck::new(
        "divisor_form",
        div_bad == 0,
        format!("{div_bad} coefficients disagree"),
    ));

    // theta(-q)^8 = 1 + 16 sum_{n,j>=1} (-1)^j j^3 q^(nj)
    let twisted = theta(cutoff, -1)?.pow(8)?;
    let n = cutoff as i64;
    let mut coeffs = vec![(0, BigInt::one())];
    for a in 1..=n {
        for j in 1..=n / a {
            let s = if j % 2 == 0 { 1 } else { -1 };
            coeffs.push((a * j, BigInt::from(16 * s * j * j * j)));
        }
    }
    let twisted_formula = qseries(cutoff, coeffs)?;
    let tw = coefficients(&twisted);
    let th = coefficients(&th8);
    let sign_ok = (0..=cutoff as usize).all(|k| if k % 2 == 0 { tw[k] == th[k] } else { tw[k] == -&th[k] });
    let twist_diffs = twisted.diff_up_to(&twisted_formula, cutoff)?.len();
    Ok(report
        .with_subcheck(SubCheck::new(
            "sign_twisted_formula",
            twist_diffs == 0,
            format!("{twist_diffs} coefficients disagree"),
        ))
        .with_subcheck(SubCheck::new("sign_twist_is_(-1)^n", sign_ok, "")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn theta_examples() {
        assert_eq!(coefficients(&theta(4, 1).unwrap()), ints(&[1, 2, 0, 0, 2]));
        assert_eq!(coefficients(&theta(4, -1).unwrap()), ints(&[1, -2, 0, 0, 2]));
        assert_eq!(coefficients(&theta(9, 1).unwrap())[9], BigInt::from(2));
        assert!(theta(3, 2).is_err());
    }

    #[test]
    fn r8_small_values() {
        let e = r8_oracle(4, R8Method::Enumeration).unwrap();
        assert_eq!(e, vec![1, 16, 112, 448, 1136]);
        assert_eq!(r8_oracle(4, R8Method::Convolution).unwrap(), e);
        assert!(r8_oracle(65, R8Method::Enumeration).is_err());
    }

    #[test]
    fn formula_examples() {
        let c = coefficients(&jacobi_formula(4).unwrap());
        assert_eq!(c, ints(&[1, 16, 112, 448, 1136]));
    }

    #[test]
    fn binomial_series_coefficients() {
        let c: Vec<i64> = (0..4).map(inverse_fourth_power_coeff).collect();
        assert_eq!(c, vec![1, 4, 10, 20]);
    }

    #[test]
    fn gauss_low_order() {
        let c = coefficients(&gauss_product(3).unwrap());
        assert_eq!(c, ints(&[1, -2, 0, 0]));
    }
}
