//! Linear maps between polyhedral normed spaces.

use std::fmt;

use num_traits::{One, Zero};

use super::linalg::{dot, Matrix, Vector, Q};
use super::lp::{minimize, LpOutcome};
use super::space::PolyNormedSpace;
use crate::error::{invalid, usage, Error, Result};

/// A rational `cod.dim × dom.dim` matrix between two normed spaces. The
/// operator norm is not constrained; [`LinMap::is_contraction`] tells
/// whether the map is a `Ban` morphism.
#[derive(Clone, PartialEq, Eq)]
pub struct LinMap {
    dom: PolyNormedSpace,
    cod: PolyNormedSpace,
    matrix: Matrix,
}

impl LinMap {
    pub fn new(dom: PolyNormedSpace, cod: PolyNormedSpace, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != cod.dim() || matrix.cols() != dom.dim() {
            return invalid(
                "linear map",
                format!("{}x{} matrix between dimensions {} and {}", matrix.rows(), matrix.cols(), dom.dim(), cod.dim()),
            );
        }
        Ok(LinMap { dom, cod, matrix })
    }

    pub fn identity(space: &PolyNormedSpace) -> Self {
        LinMap { dom: space.clone(), cod: space.clone(), matrix: Matrix::identity(space.dim()) }
    }

    pub fn zero(dom: &PolyNormedSpace, cod: &PolyNormedSpace) -> Self {
        LinMap { dom: dom.clone(), cod: cod.clone(), matrix: Matrix::zeros(cod.dim(), dom.dim()) }
    }

    pub fn dom(&self) -> &PolyNormedSpace {
        &self.dom
    }

    pub fn cod(&self) -> &PolyNormedSpace {
        &self.cod
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Q]) -> Vector {
        self.matrix.apply(x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinMap) -> Result<LinMap> {
        if inner.cod != self.dom {
            return usage("compose: codomain of the inner map is not the domain of the outer map");
        }
        Ok(LinMap { dom: inner.dom.clone(), cod: self.cod.clone(), matrix: self.matrix.mul(&inner.matrix) })
    }

    /// `self - other` for parallel maps.
    pub fn minus(&self, other: &LinMap) -> Result<LinMap> {
        if self.dom != other.dom || self.cod != other.cod {
            return usage("maps are not parallel");
        }
        Ok(LinMap { dom: self.dom.clone(), cod: self.cod.clone(), matrix: self.matrix.sub(&other.matrix) })
    }

    pub fn scaled(&self, s: &Q) -> LinMap {
        LinMap { dom: self.dom.clone(), cod: self.cod.clone(), matrix: self.matrix.scale(s) }
    }

    /// Same matrix between other spaces of the same dimensions.
    pub fn retarget(&self, dom: PolyNormedSpace, cod: PolyNormedSpace) -> Result<LinMap> {
        LinMap::new(dom, cod, self.matrix.clone())
    }

    /// `max_g ‖f g‖` over domain generators: the operator norm, since a convex
    /// function on a polytope peaks at a vertex.
    pub fn op_norm(&self) -> Q {
        self.dom
            .gens()
            .iter()
            .map(|g| self.cod.norm(&self.apply(g)))
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// Whether `norm_eval(cod, f g) <= c` for every domain generator `g`.
    pub fn op_norm_leq(&self, c: &Q) -> bool {
        self.op_norm() <= *c
    }

    pub fn is_contraction(&self) -> bool {
        self.op_norm_leq(&Q::one())
    }

    /// `min ‖f x‖` over the unit sphere of `dom`, solved facet by facet: on the
    /// facet `<a, x> = 1` the points are convex combinations of the tight
    /// signed generators, and minimizing the codomain gauge there is a linear
    /// program. `None` for the zero space, whose sphere is empty.
    pub fn min_norm_on_sphere(&self) -> Result<Option<Q>> {
        if self.dom.dim() == 0 {
            return Ok(None);
        }
        let cod_gens = self.cod.gens();
        let k = cod_gens.len();
        let m = self.cod.dim();
        let mut best: Option<Q> = None;
        for a in self.dom.facets() {
            let verts: Vec<Vector> = self
                .dom
                .signed_gens()
                .into_iter()
                .filter(|v| dot(a, v) == Q::one())
                .map(|v| self.apply(&v))
                .collect();
            let nv = verts.len();
            let mut rows: Vec<Vector> = (0..m)
                .map(|i| {
                    let mut row: Vector = verts.iter().map(|v| v[i].clone()).collect();
                    row.extend(cod_gens.iter().map(|g| -&g[i]));
                    row.extend(cod_gens.iter().map(|g| g[i].clone()));
                    row
                })
                .collect();
            let mut sum_row = vec![Q::one(); nv];
            sum_row.extend(std::iter::repeat_n(Q::zero(), 2 * k));
            rows.push(sum_row);
            let mut rhs = vec![Q::zero(); m];
            rhs.push(Q::one());
            let mut cost = vec![Q::zero(); nv];
            cost.extend(std::iter::repeat_n(Q::one(), 2 * k));
            let value = match minimize(&cost, &rows, &rhs) {
                LpOutcome::Optimal { value, .. } => value,
                other => return Err(Error::Internal(format!("facet LP did not solve: {other:?}"))),
            };
            if best.as_ref().is_none_or(|b| value < *b) {
                best = Some(value);
            }
        }
        Ok(best)
    }

    /// Least ε for which `(1-ε)‖x‖ <= ‖fx‖ <= (1+ε)‖x‖`.
    pub fn isometry_defect(&self) -> Result<Q> {
        let over = self.op_norm() - Q::one();
        let under = match self.min_norm_on_sphere()? {
            Some(m) => Q::one() - m,
            None => Q::zero(),
        };
        Ok(over.max(under).max(Q::zero()))
    }
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinMap{:?}", self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::super::linalg::{q, qi};
    use super::*;

    #[test]
    fn diagonal_on_square() {
        let sq = PolyNormedSpace::linf(2);
        let d = Matrix::from_rows(2, 2, vec![vec![qi(1), qi(0)], vec![qi(0), q(1, 2)]]);
        let f = LinMap::new(sq.clone(), sq.clone(), d).unwrap();
        assert_eq!(f.min_norm_on_sphere().unwrap(), Some(q(1, 2)));
        assert_eq!(f.op_norm(), qi(1));
        assert_eq!(f.isometry_defect().unwrap(), q(1, 2));
    }

    #[test]
    fn identity_and_zero() {
        let h = PolyNormedSpace::hexagon();
        assert_eq!(LinMap::identity(&h).min_norm_on_sphere().unwrap(), Some(qi(1)));
        assert_eq!(LinMap::zero(&h, &h).min_norm_on_sphere().unwrap(), Some(qi(0)));
        let z = PolyNormedSpace::zero();
        assert_eq!(LinMap::zero(&z, &h).min_norm_on_sphere().unwrap(), None);
    }

    #[test]
    fn scaling_by_two_is_not_a_contraction() {
        let l = PolyNormedSpace::l1(2);
        let f = LinMap::identity(&l).scaled(&qi(2));
        assert!(!f.op_norm_leq(&qi(1)));
        assert!(f.op_norm_leq(&qi(2)));
    }
}
