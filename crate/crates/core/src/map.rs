//! Nonexpanding maps between finite metric spaces.

use std::fmt;

use crate::dist::ExtDist;
use crate::error::{invalid, usage, Result};
use crate::space::MetSpace;

/// A function `dom -> cod` with `d(fx, fy) <= d(x, y)`, checked on construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NonexpMap {
    dom: MetSpace,
    cod: MetSpace,
    assign: Vec<usize>,
}

impl NonexpMap {
    pub fn new(dom: MetSpace, cod: MetSpace, assign: Vec<usize>) -> Result<Self> {
        if assign.len() != dom.len() {
            return invalid("map", format!("{} images for {} points", assign.len(), dom.len()));
        }
        if let Some(&bad) = assign.iter().find(|&&y| y >= cod.len()) {
            return invalid("map", format!("image index {bad} out of range"));
        }
        if let Some((x, y)) = first_expanding_pair(&dom, &cod, &assign) {
            return invalid(
                "map",
                format!("expands distance between {} and {}", dom.label(x), dom.label(y)),
            );
        }
        Ok(NonexpMap { dom, cod, assign })
    }

    /// Skips the nonexpansion check. Callers must guarantee it.
    pub(crate) fn new_unchecked(dom: MetSpace, cod: MetSpace, assign: Vec<usize>) -> Self {
        debug_assert!(first_expanding_pair(&dom, &cod, &assign).is_none());
        NonexpMap { dom, cod, assign }
    }

    /// Builds from `(source label, target label)` pairs covering `dom`.
    pub fn from_labels(dom: MetSpace, cod: MetSpace, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut assign = vec![usize::MAX; dom.len()];
        for (a, b) in pairs {
            let (Some(i), Some(j)) = (dom.index_of(a), cod.index_of(b)) else {
                return invalid("map", format!("unknown point in {a} -> {b}"));
            };
            assign[i] = j;
        }
        if let Some(i) = assign.iter().position(|&j| j == usize::MAX) {
            return invalid("map", format!("no image for {}", dom.label(i)));
        }
        Self::new(dom, cod, assign)
    }

    pub fn identity(space: &MetSpace) -> Self {
        NonexpMap {
            dom: space.clone(),
            cod: space.clone(),
            assign: (0..space.len()).collect(),
        }
    }

    /// The constant map onto `point`. Panics if `point` is out of range.
    pub fn constant(dom: &MetSpace, cod: &MetSpace, point: usize) -> Self {
        assert!(point < cod.len());
        NonexpMap {
            dom: dom.clone(),
            cod: cod.clone(),
            assign: vec![point; dom.len()],
        }
    }

    pub fn dom(&self) -> &MetSpace {
        &self.dom
    }

    pub fn cod(&self) -> &MetSpace {
        &self.cod
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.assign[x]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &NonexpMap) -> Result<NonexpMap> {
        if inner.cod != self.dom {
            return usage("compose: codomain of the inner map is not the domain of the outer map");
        }
        Ok(NonexpMap {
            dom: inner.dom.clone(),
            cod: self.cod.clone(),
            assign: inner.assign.iter().map(|&x| self.assign[x]).collect(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for &y in &self.assign {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        self.assign.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
    }

    /// The same assignment viewed with a different (equal up to labels) domain or codomain.
    pub fn with_spaces(&self, dom: MetSpace, cod: MetSpace) -> Result<NonexpMap> {
        Self::new(dom, cod, self.assign.clone())
    }
}

fn first_expanding_pair(dom: &MetSpace, cod: &MetSpace, assign: &[usize]) -> Option<(usize, usize)> {
    let n = dom.len();
    (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .find(|&(x, y)| cod.d(assign[x], assign[y]) > dom.d(x, y))
}

/// Largest `|d(x, y) - d(fx, fy)|` over pairs for an arbitrary function `f`.
pub fn max_distortion(dom: &MetSpace, cod: &MetSpace, assign: &[usize]) -> ExtDist {
    let n = dom.len();
    let mut worst = ExtDist::ZERO;
    for x in 0..n {
        for y in x + 1..n {
            worst = worst.max(dom.d(x, y).deviation(&cod.d(assign[x], assign[y])));
        }
    }
    worst
}

impl fmt::Debug for NonexpMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Map{{")?;
        for (i, &j) in self.assign.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", self.dom.label(i), self.cod.label(j))?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_expanding_function() {
        let a = MetSpace::two_point(ExtDist::ratio(1, 2));
        let b = MetSpace::two_point(ExtDist::int(1));
        assert!(NonexpMap::new(a.clone(), b.clone(), vec![0, 1]).is_err());
        assert!(NonexpMap::new(b, a, vec![0, 1]).is_ok());
    }

    #[test]
    fn composition_and_identity() {
        let a = MetSpace::discrete(&["x", "y"]);
        let b = MetSpace::two_point(ExtDist::int(1));
        let f = NonexpMap::new(a.clone(), b.clone(), vec![1, 0]).unwrap();
        let id = NonexpMap::identity(&b);
        assert_eq!(id.compose(&f).unwrap(), f);
        assert!(f.compose(&id).is_err());
        assert!(f.is_surjective() && f.is_injective());
    }

    #[test]
    fn distortion_of_collapse() {
        let a = MetSpace::two_point(ExtDist::ratio(3, 4));
        let p = MetSpace::point();
        assert_eq!(max_distortion(&a, &p, &[0, 0]), ExtDist::ratio(3, 4));
    }
}
