//! Finite metric-enriched category theory: the category `Met` of finite
//! generalized metric spaces with nonexpanding maps, its ε-weighted limits and
//! colimits, approximate injectivity, and polyhedral Banach spaces.

pub mod approx;
pub mod ban;
pub mod colimit;
pub mod dist;
pub mod error;
pub mod hom;
pub mod inject;
pub mod map;
pub mod space;
pub mod text;

pub use colimit::{
    colimit_chain, coproduct, final_pseudometric, metric_quotient, product, ChainColimit, Cocone, FiniteChain,
    Quotient,
};
pub use dist::{ExtDist, Rational};
pub use error::{Error, Result};
pub use hom::{for_each_hom, hom_distance, hom_set, is_coisometry, is_isometry, isometry_violation};
pub use map::NonexpMap;
pub use space::{MetSpace, PseudoMetSpace};
