//! Finite-dimensional real Banach spaces with polyhedral unit balls over
//! exact rationals, and the constructions of `Ban` needed for the
//! approximate back-and-forth.

pub mod bnf;
pub mod chain;
pub mod constructions;
pub mod dd;
pub mod linalg;
pub mod lp;
pub mod map;
pub mod space;

pub use bnf::{back_and_forth, extend_along_eps_isometry, BnFRun, BnFState, Extension, ExtensionOracle};
pub use constructions::{
    eps_coequalizer_ban, eps_pushout_ban, eps_pushout_leg_isometry_ban, exact_pushout_ban, is_eps_isometry_ban,
    is_isometry_ban, l1_coproduct, pushout_ban, quotient_by_subspace, BanSquare,
};
pub use chain::{
    factor_through_stage, sample_contractions, saturation_chain, saturation_step_ban, AttachRecord, BanChain,
    FactorCertificate, SaturationCertificate,
};
pub use linalg::{Matrix, Vector, Q};
pub use map::LinMap;
pub use space::PolyNormedSpace;
