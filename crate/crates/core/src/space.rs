//! Finite generalized (pseudo)metric spaces.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::dist::{ExtDist, Rational};
use crate::error::{invalid, Result};

/// A finite pseudometric space with ordered, labelled points.
///
/// Distances may be infinite. Symmetry, zero self-distance and the triangle
/// inequality are checked on construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PseudoMetSpace {
    labels: Vec<String>,
    dist: Vec<ExtDist>,
}

impl PseudoMetSpace {
    /// Builds a space from labels and a full square distance table.
    pub fn new(labels: Vec<String>, table: Vec<Vec<ExtDist>>) -> Result<Self> {
        let n = labels.len();
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return invalid("space", format!("distance table is not {n}x{n}"));
        }
        let dist = table.into_iter().flatten().collect();
        Self::from_flat(labels, dist)
    }

    /// Builds a space whose distance between `i` and `j` is `f(i, j)`.
    pub fn from_fn(labels: Vec<String>, f: impl Fn(usize, usize) -> ExtDist) -> Result<Self> {
        let n = labels.len();
        let dist = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::from_flat(labels, dist)
    }

    pub(crate) fn from_flat(labels: Vec<String>, dist: Vec<ExtDist>) -> Result<Self> {
        let space = PseudoMetSpace { labels, dist };
        space.validate()?;
        Ok(space)
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        let mut seen = HashMap::with_capacity(n);
        for (i, l) in self.labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return invalid("space", format!("bad point label {l:?}"));
            }
            if seen.insert(l.as_str(), i).is_some() {
                return invalid("space", format!("duplicate point label {l}"));
            }
        }
        for i in 0..n {
            if !self.d(i, i).is_zero() {
                return invalid("space", format!("d({0},{0}) is not 0", self.labels[i]));
            }
            for j in 0..n {
                if self.d(i, j) != self.d(j, i) {
                    return invalid(
                        "space",
                        format!("asymmetric distance between {} and {}", self.labels[i], self.labels[j]),
                    );
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.d(i, k) > self.d(i, j) + self.d(j, k) {
                        return invalid(
                            "space",
                            format!(
                                "triangle inequality fails for {}, {}, {}",
                                self.labels[i], self.labels[j], self.labels[k]
                            ),
                        );
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> ExtDist {
        self.dist[i * self.labels.len() + j]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// True when distinct points are at positive distance.
    pub fn is_metric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| i == j || !self.d(i, j).is_zero()))
    }

    pub fn table(&self) -> Vec<Vec<ExtDist>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| self.d(i, j)).collect()).collect()
    }
}

impl fmt::Debug for PseudoMetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space{:?}", self.labels)?;
        let n = self.len();
        let mut first = true;
        write!(f, "{{")?;
        for i in 0..n {
            for j in i + 1..n {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "{}-{}: {}", self.labels[i], self.labels[j], self.d(i, j))?;
            }
        }
        write!(f, "}}")
    }
}

/// A finite generalized metric space: a pseudometric space whose distinct
/// points are at positive distance. Cheap to clone.
#[derive(Clone)]
pub struct MetSpace(Arc<PseudoMetSpace>);

impl MetSpace {
    pub fn new(labels: Vec<String>, table: Vec<Vec<ExtDist>>) -> Result<Self> {
        Self::from_pseudo(PseudoMetSpace::new(labels, table)?)
    }

    pub fn from_fn(labels: Vec<String>, f: impl Fn(usize, usize) -> ExtDist) -> Result<Self> {
        Self::from_pseudo(PseudoMetSpace::from_fn(labels, f)?)
    }

    pub fn from_pseudo(p: PseudoMetSpace) -> Result<Self> {
        if !p.is_metric() {
            return invalid("metric space", "distinct points at distance 0");
        }
        Ok(MetSpace(Arc::new(p)))
    }

    /// Builds from a list of `(a, b, d)` entries; unlisted pairs are infinite.
    pub fn from_pairs(labels: &[&str], pairs: &[(&str, &str, ExtDist)]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let n = labels.len();
        let mut table = vec![vec![ExtDist::Inf; n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            row[i] = ExtDist::ZERO;
        }
        for (a, b, d) in pairs {
            let (Some(i), Some(j)) = (
                labels.iter().position(|l| l == a),
                labels.iter().position(|l| l == b),
            ) else {
                return invalid("space", format!("unknown point in pair ({a}, {b})"));
            };
            table[i][j] = *d;
            table[j][i] = *d;
        }
        Self::new(labels, table)
    }

    pub fn empty() -> Self {
        MetSpace::new(vec![], vec![]).expect("empty space")
    }

    /// The one-point space `1`.
    pub fn point() -> Self {
        Self::named_point("*")
    }

    pub fn named_point(label: &str) -> Self {
        MetSpace::new(vec![label.to_string()], vec![vec![ExtDist::ZERO]]).expect("one-point space")
    }

    /// `2_ε`: points `p1`, `p2` at distance `eps`. Panics for `eps = 0`.
    pub fn two_point(eps: ExtDist) -> Self {
        MetSpace::from_pairs(&["p1", "p2"], &[("p1", "p2", eps)]).expect("2_eps needs eps > 0")
    }

    /// All distinct points at infinite distance.
    pub fn discrete(labels: &[&str]) -> Self {
        MetSpace::from_pairs(labels, &[]).expect("discrete space")
    }

    /// The subspace of the real line at the given (distinct) positions.
    pub fn on_line(labels: &[&str], positions: &[Rational]) -> Result<Self> {
        if labels.len() != positions.len() {
            return invalid("space", "label and position counts differ");
        }
        let labels = labels.iter().map(|s| s.to_string()).collect();
        MetSpace::from_fn(labels, |i, j| {
            let d = positions[i] - positions[j];
            ExtDist::Finite(if d < Rational::from_integer(0) { -d } else { d })
        })
    }

    /// The induced subspace on `indices`, in the given order.
    pub fn subspace(&self, indices: &[usize]) -> MetSpace {
        let labels = indices.iter().map(|&i| self.label(i).to_string()).collect();
        MetSpace::from_fn(labels, |a, b| self.d(indices[a], indices[b])).expect("subspace of a metric space")
    }

    pub fn pseudo(&self) -> &PseudoMetSpace {
        &self.0
    }

    pub fn ptr_eq(&self, other: &MetSpace) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Deref for MetSpace {
    type Target = PseudoMetSpace;

    fn deref(&self) -> &PseudoMetSpace {
        &self.0
    }
}

impl PartialEq for MetSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for MetSpace {}

impl std::hash::Hash for MetSpace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for MetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_triangle_violation() {
        let err = MetSpace::from_pairs(
            &["a", "b", "c"],
            &[
                ("a", "b", ExtDist::int(1)),
                ("b", "c", ExtDist::int(1)),
                ("a", "c", ExtDist::int(3)),
            ],
        );
        assert!(err.is_err());
    }

    #[test]
    fn rejects_zero_distance_in_metric() {
        let p = PseudoMetSpace::from_fn(vec!["a".into(), "b".into()], |_, _| ExtDist::ZERO).unwrap();
        assert!(!p.is_metric());
        assert!(MetSpace::from_pseudo(p).is_err());
    }

    #[test]
    fn rejects_asymmetric_table() {
        let t = vec![
            vec![ExtDist::ZERO, ExtDist::int(1)],
            vec![ExtDist::int(2), ExtDist::ZERO],
        ];
        assert!(MetSpace::new(vec!["a".into(), "b".into()], t).is_err());
    }

    #[test]
    fn infinite_distances_are_allowed() {
        let s = MetSpace::discrete(&["x", "y", "z"]);
        assert_eq!(s.d(0, 2), ExtDist::Inf);
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn line_subspace() {
        let s = MetSpace::on_line(&["a", "b", "c"], &[Rational::from(0), Rational::new(1, 2), Rational::from(2)]).unwrap();
        assert_eq!(s.d(0, 2), ExtDist::int(2));
        let sub = s.subspace(&[2, 0]);
        assert_eq!(sub.labels(), ["c", "a"]);
        assert_eq!(sub.d(0, 1), ExtDist::int(2));
    }
}
