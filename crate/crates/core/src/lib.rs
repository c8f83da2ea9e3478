//! Linear codes over Z_{2^s} and exact covering radii.
//!
//! The crate provides ring arithmetic and weights ([`ring`]), generator
//! matrices in standard form with duals and codeword enumeration
//! ([`linalg`]), the Z4 code families of interest ([`families`]), exact
//! covering-radius engines with the classical bounds ([`covering`]) and a
//! harness that checks known closed forms against the engines ([`verify`]).

pub mod covering;
pub mod error;
pub mod families;
pub mod linalg;
pub mod ring;
pub mod verify;

pub use covering::{covering_radius, MethodChoice, RadiusReport, SearchConfig};
pub use error::{Error, Result};
pub use families::FamilySpec;
pub use linalg::LinearCode;
pub use ring::{RingSpec, WeightMetric, ZqVector};
