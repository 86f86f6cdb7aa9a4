//! JSON interchange for [`GradedSeries`].
//!
//! A document is a header `{rank, K, cutoff, vars}` followed by one record
//! `{"k": cone coords, "e": raw exponents, "c": "<decimal>"}` per line, in
//! canonical order, so output is stable and diff-able.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{ExpVec, GradedSeries, LatticeSpec, Mono};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesHeader {
    pub rank: usize,
    #[serde(rename = "K")]
    pub k: Vec<Vec<i64>>,
    pub cutoff: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub k: Vec<i64>,
    pub e: Vec<i64>,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDocument {
    #[serde(flatten)]
    pub header: SeriesHeader,
    pub terms: Vec<SeriesRecord>,
}

impl GradedSeries {
    pub fn header(&self) -> SeriesHeader {
        SeriesHeader {
            rank: self.lattice.rank(),
            k: self.lattice.matrix().to_vec(),
            cutoff: self.cutoff,
            vars: Some(self.lattice.vars().to_vec()),
        }
    }

    pub fn records(&self) -> impl Iterator<Item = SeriesRecord> + '_ {
        let rank = self.lattice.rank();
        self.raw_terms().map(move |(m, c)| SeriesRecord {
            k: m.coords(rank),
            e: self.lattice.exp_of(m).0,
            c: c.to_string(),
        })
    }

    pub fn to_document(&self) -> SeriesDocument {
        SeriesDocument {
            header: self.header(),
            terms: self.records().collect(),
        }
    }

    /// Canonical JSON text: header on the first line, one record per line.
    pub fn to_json(&self) -> String {
        let header = serde_json::to_string(&self.header()).expect("header serializes");
        let mut out = String::new();
        // splice `"terms":[` into the header object
        out.push_str(&header[..header.len() - 1]);
        out.push_str(",\"terms\":[\n");
        let mut first = true;
        for r in self.records() {
            if !first {
                out.push_str(",\n");
            }
            first = false;
            write!(out, "{}", serde_json::to_string(&r).expect("record serializes")).unwrap();
        }
        if !first {
            out.push('\n');
        }
        out.push_str("]}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SeriesDocument =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &SeriesDocument) -> Result<Self> {
        let h = &doc.header;
        if h.k.len() != h.rank {
            return Err(Error::Malformed(format!(
                "K has {} rows, rank is {}",
                h.k.len(),
                h.rank
            )));
        }
        let vars = h
            .vars
            .clone()
            .unwrap_or_else(|| (0..h.rank).map(|i| format!("v{i}")).collect());
        let lattice = shared_lattice(LatticeSpec::new(h.k.clone(), vars)?);
        let mut seen = HashSet::new();
        let mut terms = Vec::with_capacity(doc.terms.len());
        for r in &doc.terms {
            let e = ExpVec(r.e.clone());
            let cc = lattice
                .cone_coords(&e)
                .map_err(|err| Error::Malformed(err.to_string()))?;
            if cc.coords != r.k {
                return Err(Error::Malformed(format!(
                    "record k {:?} does not match K*e = {:?}",
                    r.k, cc.coords
                )));
            }
            if !cc.in_cone {
                return Err(Error::OutOfCone(e.0));
            }
            if cc.degree > h.cutoff as i64 {
                return Err(Error::Malformed(format!(
                    "record {:?} has degree {} above cutoff {}",
                    r.e, cc.degree, h.cutoff
                )));
            }
            let c = BigInt::from_str(&r.c)
                .map_err(|_| Error::Malformed(format!("bad coefficient {:?}", r.c)))?;
            if c.is_zero() {
                return Err(Error::Malformed(format!("zero coefficient at {:?}", r.e)));
            }
            if !seen.insert(Mono::from_coords(&cc.coords)) {
                return Err(Error::Malformed(format!("duplicate monomial {:?}", r.e)));
            }
            terms.push((e, c));
        }
        GradedSeries::from_terms(lattice, h.cutoff, terms)
    }
}

/// Reuses the built-in lattice instances when the header matches one.
fn shared_lattice(l: LatticeSpec) -> Arc<LatticeSpec> {
    for known in [
        LatticeSpec::gl22_affine(),
        LatticeSpec::gl22_finite(),
        LatticeSpec::sl21_affine(),
        LatticeSpec::q_line(),
    ] {
        if *known == l {
            return known;
        }
    }
    Arc::new(l)
}
