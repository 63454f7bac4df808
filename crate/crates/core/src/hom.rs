//! Hom-sets, the hom-metric, isometries and coisometries.

use std::ops::ControlFlow;

use crate::dist::ExtDist;
use crate::error::{usage, Result};
use crate::map::NonexpMap;
use crate::space::MetSpace;

/// Visits every nonexpanding assignment `a -> x` in lexicographic order
/// (first point most significant) by backtracking.
pub fn for_each_hom<B>(
    a: &MetSpace,
    x: &MetSpace,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<B>,
) -> Option<B> {
    let n = a.len();
    let mut assign = Vec::with_capacity(n);
    fn rec<B>(
        a: &MetSpace,
        x: &MetSpace,
        assign: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let i = assign.len();
        if i == a.len() {
            return visit(assign);
        }
        for y in 0..x.len() {
            if (0..i).all(|j| x.d(assign[j], y) <= a.d(j, i)) {
                assign.push(y);
                rec(a, x, assign, visit)?;
                assign.pop();
            }
        }
        ControlFlow::Continue(())
    }
    if n > 0 && x.is_empty() {
        return None;
    }
    match rec(a, x, &mut assign, &mut visit) {
        ControlFlow::Break(b) => Some(b),
        ControlFlow::Continue(()) => None,
    }
}

/// All nonexpanding maps `a -> x`, in the order of [`for_each_hom`].
pub fn hom_set(a: &MetSpace, x: &MetSpace) -> Vec<NonexpMap> {
    let mut out = Vec::new();
    for_each_hom::<()>(a, x, |assign| {
        out.push(NonexpMap::new_unchecked(a.clone(), x.clone(), assign.to_vec()));
        ControlFlow::Continue(())
    });
    out
}

/// `max_a d(f a, g a)`; zero on an empty domain.
pub fn hom_distance(f: &NonexpMap, g: &NonexpMap) -> Result<ExtDist> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return usage("hom_distance: maps are not parallel");
    }
    Ok(assign_distance(f.cod(), f.assignment(), g.assignment()))
}

pub(crate) fn assign_distance(cod: &MetSpace, f: &[usize], g: &[usize]) -> ExtDist {
    f.iter()
        .zip(g)
        .map(|(&x, &y)| cod.d(x, y))
        .max()
        .unwrap_or(ExtDist::ZERO)
}

/// `None` if `f` preserves all distances, else the first violating pair.
pub fn isometry_violation(f: &NonexpMap) -> Option<(usize, usize)> {
    let (dom, cod) = (f.dom(), f.cod());
    let n = dom.len();
    (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .find(|&(x, y)| cod.d(f.apply(x), f.apply(y)) != dom.d(x, y))
}

pub fn is_isometry(f: &NonexpMap) -> bool {
    isometry_violation(f).is_none()
}

/// On finite spaces density of the image is surjectivity.
pub fn is_coisometry(f: &NonexpMap) -> bool {
    f.is_surjective()
}
