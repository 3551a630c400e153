//! Khovanov-type homology over `C_{h,t} = k[x]/(x^2 - hx - t)` for links with
//! double points, built from the genus-one crossing-change map.

pub mod chain;
pub mod diagram;
pub mod error;
pub mod frobenius;
pub mod genusone;
pub mod invariants;
pub mod khcube;
pub mod linalg;

pub use error::{Error, ParseError, Result};
pub use linalg::{DegreeKey, HomologyGroup, HomologySummary, Ring, SparseIntMatrix};
