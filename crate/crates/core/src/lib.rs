//! Exact tools for factor systems of finite groups.
//!
//! Cocycles and coboundaries are computed with `Z_m` coefficients, so every
//! question about whether a projective representation can be rephased into a
//! genuine one is decided exactly. Numerical unitary representations only
//! appear in [`projrep`], where phases are snapped back onto the `Z_m` grid.

pub mod cochain;
pub mod cohomology;
pub mod extension;
pub mod format;
pub mod group;
pub mod projrep;
pub mod selftest;
pub mod smith;

pub use cochain::{Cochain, CochainError};
pub use cohomology::{
  alternating_pairing, are_equivalent, is_coboundary, second_cohomology, CohomologyError,
  CohomologyResult, Obstruction, Trivialization,
};
pub use group::{FiniteGroup, GroupError};
pub use extension::{CentralExtension, ExtensionError};
pub use projrep::{
  extract_factor_system, lift_to_extension, rephase, schwinger_rep, twisted_regular_rep, CMatrix,
  FactorSystem, ProjRepError, UnitaryRep,
};
