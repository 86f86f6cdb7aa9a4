//! Exact verification engine for the Weyl denominator identity of the affine
//! Lie superalgebra gl(2|2)^ and the identities derived from it.

pub mod analytic;
pub mod denominator;
pub mod error;
pub mod jacobi;
pub mod orbit;
pub mod report;
pub mod roots;
pub mod series;

pub use error::{Error, Result};
pub use orbit::{expand_orbit_term, orbit_sum, OrbitTerm, Subgroup, WeightLattice};
pub use report::{QReport, SubCheck};
pub use roots::{Weight, WeylElement};
pub use series::{ExpVec, GradedSeries, LatticeSpec};
