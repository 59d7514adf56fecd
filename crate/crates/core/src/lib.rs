//! Type II codes over Z_2k, their Construction A lattices, and exact
//! theta-series machinery for certifying minimum weights.

pub mod cli;
pub mod code;
pub mod constructions;
pub mod error;
pub mod lattice;
pub mod modforms;
pub mod pipelines;
pub mod ring;

pub use code::{extremal_bound, LinearCode, MinWeight, SWEPolynomial};
pub use error::{Error, Result};
pub use lattice::{construction_a, EnumOptions, LatticeBasis};
pub use ring::{euclidean_weight, inner_product, rho, Modulus, ResidueVector};
