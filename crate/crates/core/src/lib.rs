//! Exact computations with lower central series quotients of groups over a
//! fixed ambient group `G`, aimed at knot groups in 3-manifolds.

pub mod error;
pub mod group;
pub mod homology;
pub mod concordance;
pub mod coset;
pub mod intmat;
pub mod invariants;
pub mod io;
pub mod nq;
pub mod pc;
pub mod relquo;
pub mod satellite;
pub mod subgroup;
pub mod words;

pub use error::{Error, Result};
