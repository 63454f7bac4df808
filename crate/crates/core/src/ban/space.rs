//! Finite-dimensional rational spaces with polyhedral unit balls.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};

use super::dd::symmetric_facets;
use super::linalg::{dot, is_zero, neg, qi, rank, unit, Vector, Q};
use super::lp::{minimize, LpOutcome};
use crate::error::{invalid, Error, Result};

struct Inner {
    dim: usize,
    gens: Vec<Vector>,
    facets: OnceLock<Vec<Vector>>,
}

/// `R^dim` normed by the gauge of `conv(±gens)`. Facet functionals are
/// computed once on first use and shared by clones.
#[derive(Clone)]
pub struct PolyNormedSpace(Arc<Inner>);

impl PolyNormedSpace {
    /// Rejects zero generators, wrong lengths and non-spanning families.
    pub fn new(dim: usize, gens: Vec<Vector>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.len() != dim) {
            return invalid("normed space", format!("generator of length {} in dimension {dim}", g.len()));
        }
        if gens.iter().any(|g| is_zero(g)) {
            return invalid("normed space", "zero generator");
        }
        if rank(&gens) != dim {
            return invalid("normed space", "generators do not span the space");
        }
        Ok(PolyNormedSpace(Arc::new(Inner { dim, gens, facets: OnceLock::new() })))
    }

    /// Like [`new`](Self::new) with a supplied facet list, checked for
    /// consistency: every generator lies in the ball and every facet is
    /// supported by `dim` independent signed generators.
    pub fn with_facets(dim: usize, gens: Vec<Vector>, facets: Vec<Vector>) -> Result<Self> {
        let space = Self::new(dim, gens)?;
        for a in &facets {
            if a.len() != dim {
                return invalid("normed space", "facet functional of wrong length");
            }
            let mut tight = Vec::new();
            for g in space.gens() {
                let v = dot(a, g);
                if v.abs() > Q::one() {
                    return invalid("normed space", "generator lies outside a facet");
                }
                if v.abs() == Q::one() {
                    tight.push(g.clone());
                }
            }
            if rank(&tight) < dim {
                return invalid("normed space", "facet is not supported by enough generators");
            }
        }
        let _ = space.0.facets.set(facets);
        Ok(space)
    }

    pub fn zero() -> Self {
        Self::new(0, vec![]).expect("zero space")
    }

    /// `ℓ1^dim`: generators are the unit vectors.
    pub fn l1(dim: usize) -> Self {
        Self::new(dim, (0..dim).map(|i| unit(dim, i)).collect()).expect("l1 space")
    }

    /// `ℓ∞^dim`: generators are the sign vectors with first entry 1.
    pub fn linf(dim: usize) -> Self {
        if dim == 0 {
            return Self::zero();
        }
        let gens = (0..1usize << (dim - 1))
            .map(|mask| {
                (0..dim)
                    .map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { qi(-1) } else { qi(1) })
                    .collect()
            })
            .collect();
        Self::new(dim, gens).expect("linf space")
    }

    /// The line with unit ball `[-1, 1]`.
    pub fn line() -> Self {
        Self::l1(1)
    }

    /// The plane whose ball is the hexagon `conv(±e1, ±e2, ±(e1+e2))`.
    pub fn hexagon() -> Self {
        Self::new(2, vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)], vec![qi(1), qi(1)]]).expect("hexagon")
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn gens(&self) -> &[Vector] {
        &self.0.gens
    }

    /// Generators together with their negatives.
    pub fn signed_gens(&self) -> Vec<Vector> {
        self.gens().iter().flat_map(|g| [g.clone(), neg(g)]).collect()
    }

    /// Facet functionals, one per ± pair.
    pub fn facets(&self) -> &[Vector] {
        self.0.facets.get_or_init(|| symmetric_facets(self.dim(), self.gens()))
    }

    pub fn facets_cached(&self) -> bool {
        self.0.facets.get().is_some()
    }

    fn check_len(&self, x: &[Q]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Usage(format!("vector of length {} in dimension {}", x.len(), self.dim())));
        }
        Ok(())
    }

    /// The gauge `max_a |<a, x>|` over facet functionals.
    pub fn norm(&self, x: &[Q]) -> Q {
        assert_eq!(x.len(), self.dim(), "vector length");
        self.facets()
            .iter()
            .map(|a| dot(a, x).abs())
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// The least `t` with `x ∈ t·conv(±gens)`, by linear programming:
    /// minimize `Σ(λ⁺ + λ⁻)` subject to `Σ (λ⁺_k − λ⁻_k) g_k = x`.
    pub fn norm_eval(&self, x: &[Q]) -> Result<Q> {
        self.check_len(x)?;
        if self.dim() == 0 {
            return Ok(Q::zero());
        }
        let k = self.gens().len();
        let a: Vec<Vector> = (0..self.dim())
            .map(|i| {
                let mut row: Vector = self.gens().iter().map(|g| g[i].clone()).collect();
                row.extend(self.gens().iter().map(|g| -&g[i]));
                row
            })
            .collect();
        let c = vec![Q::one(); 2 * k];
        match minimize(&c, &a, x) {
            LpOutcome::Optimal { value, .. } => Ok(value),
            other => Err(Error::Internal(format!("norm LP did not solve: {other:?}"))),
        }
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl PartialEq for PolyNormedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || (self.dim() == other.dim() && self.gens() == other.gens())
    }
}

impl Eq for PolyNormedSpace {}

impl fmt::Debug for PolyNormedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyNormedSpace(dim {}, {} gens)", self.dim(), self.gens().len())
    }
}
