//! Brute-force oracles for auditing the constructions of `metcat-core`.
//!
//! Nothing here calls a construction from the core crate: only its data
//! types (spaces, maps, chains and certificates) are shared.

pub mod ban;
pub mod classical;
pub mod grid;
pub mod hom;
pub mod iso;
pub mod paths;
pub mod universal;

pub use ban::{audit_bnf, audit_factor, lp_bracket, norm_by_bases, FactorAudit};
pub use grid::{grid_values, space_grid};
pub use hom::{enumerate_hom, HomSet};
pub use iso::{find_isometry, isometries};
pub use paths::shortest_path_oracle;
pub use universal::{
    verify_eps_coequalizer, verify_eps_equalizer, verify_eps_pullback, verify_eps_pushout, verify_square,
    UniversalityReport,
};
