//! ε-weighted limits and colimits in `Met`, tensors and cotensors, the
//! (surjective, isometry) factorization system and ε-isometries.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::colimit::{coproduct, final_pseudometric, metric_quotient, Cocone};
use crate::dist::ExtDist;
use crate::error::{usage, Result};
use crate::hom::{assign_distance, for_each_hom, hom_distance, is_isometry};
use crate::map::{max_distortion, NonexpMap};
use crate::space::MetSpace;

/// A cone of two projections out of a common apex.
#[derive(Clone, Debug)]
pub struct Span {
    pub apex: MetSpace,
    pub p1: NonexpMap,
    pub p2: NonexpMap,
}

/// A square `g1 ∘ f1 ∼_ε g2 ∘ f2` over the span `B1 <- A -> B2`.
#[derive(Clone, Debug)]
pub struct EpsSquare {
    pub f1: NonexpMap,
    pub f2: NonexpMap,
    pub g1: NonexpMap,
    pub g2: NonexpMap,
    pub eps: ExtDist,
}

impl EpsSquare {
    pub fn new(f1: NonexpMap, f2: NonexpMap, g1: NonexpMap, g2: NonexpMap, eps: ExtDist) -> Result<Self> {
        let sq = EpsSquare { f1, f2, g1, g2, eps };
        if sq.slack()? > eps {
            return usage("square is not ε-commutative");
        }
        Ok(sq)
    }

    pub fn apex(&self) -> &MetSpace {
        self.g1.cod()
    }

    /// `d(g1 f1, g2 f2)`.
    pub fn slack(&self) -> Result<ExtDist> {
        hom_distance(&self.g1.compose(&self.f1)?, &self.g2.compose(&self.f2)?)
    }

    /// The map `h` with `h g1 = c1` and `h g2 = c2`, if it exists. Legs of
    /// constructed squares are jointly surjective, so it is unique when it does.
    pub fn mediator(&self, c1: &NonexpMap, c2: &NonexpMap) -> Option<NonexpMap> {
        joint_mediator(&[(&self.g1, c1), (&self.g2, c2)])
    }
}

/// Given jointly surjective `legs[i].0: X_i -> P` and `legs[i].1: X_i -> C`,
/// the map `P -> C` commuting with all of them, if well defined and nonexpanding.
pub fn joint_mediator(legs: &[(&NonexpMap, &NonexpMap)]) -> Option<NonexpMap> {
    let p = legs.first()?.0.cod().clone();
    let c = legs[0].1.cod().clone();
    let mut assign = vec![usize::MAX; p.len()];
    for (g, k) in legs {
        if *g.cod() != p || *k.cod() != c || g.dom() != k.dom() {
            return None;
        }
        for x in 0..g.dom().len() {
            let slot = &mut assign[g.apply(x)];
            if *slot == usize::MAX {
                *slot = k.apply(x);
            } else if *slot != k.apply(x) {
                return None;
            }
        }
    }
    if assign.contains(&usize::MAX) {
        return None;
    }
    NonexpMap::new(p, c, assign).ok()
}

fn check_parallel(u: &NonexpMap, v: &NonexpMap) -> Result<()> {
    if u.dom() != v.dom() || u.cod() != v.cod() {
        return usage("maps are not parallel");
    }
    Ok(())
}

/// Inclusion of the subspace `{x : d(ux, vx) <= ε}` of `dom u`.
pub fn eps_equalizer(u: &NonexpMap, v: &NonexpMap, eps: ExtDist) -> Result<NonexpMap> {
    check_parallel(u, v)?;
    let keep: Vec<usize> = (0..u.dom().len())
        .filter(|&x| u.cod().d(u.apply(x), v.apply(x)) <= eps)
        .collect();
    let sub = u.dom().subspace(&keep);
    Ok(NonexpMap::new_unchecked(sub, u.dom().clone(), keep))
}

/// The pairs `(b, c)` with `d(ub, vc) <= ε` inside the max-metric product.
pub fn eps_pullback(u: &NonexpMap, v: &NonexpMap, eps: ExtDist) -> Result<Span> {
    if u.cod() != v.cod() {
        return usage("eps_pullback: maps do not share a codomain");
    }
    let (b, c) = (u.dom(), v.dom());
    let pairs: Vec<(usize, usize)> = (0..b.len())
        .flat_map(|x| (0..c.len()).map(move |y| (x, y)))
        .filter(|&(x, y)| u.cod().d(u.apply(x), v.apply(y)) <= eps)
        .collect();
    let labels = pairs
        .iter()
        .map(|&(x, y)| format!("({},{})", b.label(x), c.label(y)))
        .collect();
    let apex = MetSpace::from_fn(labels, |i, j| {
        let ((x1, y1), (x2, y2)) = (pairs[i], pairs[j]);
        b.d(x1, x2).max(c.d(y1, y2))
    })?;
    let p1 = NonexpMap::new_unchecked(apex.clone(), b.clone(), pairs.iter().map(|p| p.0).collect());
    let p2 = NonexpMap::new_unchecked(apex.clone(), c.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(Span { apex, p1, p2 })
}

/// Glues `u(a)` to `v(a)` with an edge of weight ε on `cod u`, takes the final
/// pseudometric and its metric quotient. The result is surjective.
pub fn eps_coequalizer(u: &NonexpMap, v: &NonexpMap, eps: ExtDist) -> Result<NonexpMap> {
    check_parallel(u, v)?;
    let b = u.cod();
    let mut cocone = Cocone::new(b.labels().to_vec());
    cocone.push_map_leg(b, (0..b.len()).collect())?;
    for a in 0..u.dom().len() {
        if u.apply(a) != v.apply(a) {
            cocone.push_bridge(u.apply(a), v.apply(a), eps)?;
        }
    }
    let q = metric_quotient(&final_pseudometric(&cocone)?);
    NonexpMap::new(b.clone(), q.space, q.class_of)
}

/// ε-pushout of `f1`, `f2`: the ε-coequalizer of the two composites into the
/// coproduct `B1 + B2`.
pub fn eps_pushout(f1: &NonexpMap, f2: &NonexpMap, eps: ExtDist) -> Result<EpsSquare> {
    if f1.dom() != f2.dom() {
        return usage("eps_pushout: maps do not share a domain");
    }
    let (_, i1, i2) = coproduct(f1.cod(), f2.cod());
    let c = eps_coequalizer(&i1.compose(f1)?, &i2.compose(f2)?, eps)?;
    let g1 = c.compose(&i1)?;
    let g2 = c.compose(&i2)?;
    EpsSquare::new(f1.clone(), f2.clone(), g1, g2, eps)
}

/// Product set with the sum metric.
pub fn tensor(m: &MetSpace, l: &MetSpace) -> MetSpace {
    let k = l.len();
    let labels = (0..m.len() * k)
        .map(|i| format!("({},{})", m.label(i / k), l.label(i % k)))
        .collect();
    MetSpace::from_fn(labels, |a, b| m.d(a / k, b / k) + l.d(a % k, b % k)).expect("tensor of metric spaces")
}

pub(crate) fn function_label(l: &MetSpace, assign: &[usize]) -> String {
    let parts: Vec<&str> = assign.iter().map(|&y| l.label(y)).collect();
    format!("[{}]", parts.join(","))
}

/// All nonexpanding maps `M -> L` with the sup metric, in hom-set order.
pub fn cotensor(m: &MetSpace, l: &MetSpace) -> MetSpace {
    let mut maps: Vec<Vec<usize>> = Vec::new();
    for_each_hom::<()>(m, l, |a| {
        maps.push(a.to_vec());
        ControlFlow::Continue(())
    });
    let labels = maps.iter().map(|a| function_label(l, a)).collect();
    MetSpace::from_fn(labels, |i, j| assign_distance(l, &maps[i], &maps[j])).expect("cotensor of metric spaces")
}

/// `[M, L]` assembled from ε-pullbacks and a conical limit: for every pair
/// `x < y` of `M` the space `[M_{x,y}, L]` is the `d(x, y)`-pullback of
/// `id_L` against itself, and `[M, L]` is the space of compatible families
/// in their max-metric product.
pub fn cotensor_via_pullbacks(m: &MetSpace, l: &MetSpace) -> Result<MetSpace> {
    let n = m.len();
    if n == 1 {
        return Ok(l.clone());
    }
    let id = NonexpMap::identity(l);
    let mut pieces = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let span = eps_pullback(&id, &id, m.d(x, y))?;
            let index: HashMap<(usize, usize), usize> = (0..span.apex.len())
                .map(|p| ((span.p1.apply(p), span.p2.apply(p)), p))
                .collect();
            pieces.push((x, y, span.apex, index));
        }
    }
    // A family is a choice of one point per pair piece; compatibility forces
    // it to come from a single function M -> L, found by backtracking.
    let mut families: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut assign = Vec::with_capacity(n);
    fn extend(
        n: usize,
        l: usize,
        pieces: &[(usize, usize, MetSpace, HashMap<(usize, usize), usize>)],
        assign: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        let i = assign.len();
        if i == n {
            let comps = pieces.iter().map(|(x, y, _, idx)| idx[&(assign[*x], assign[*y])]).collect();
            out.push((assign.clone(), comps));
            return;
        }
        for z in 0..l {
            assign.push(z);
            let ok = pieces
                .iter()
                .filter(|(_, y, _, _)| *y == i)
                .all(|(x, y, _, idx)| idx.contains_key(&(assign[*x], assign[*y])));
            if ok {
                extend(n, l, pieces, assign, out);
            }
            assign.pop();
        }
    }
    extend(n, l.len(), &pieces, &mut assign, &mut families);
    let labels = families.iter().map(|(a, _)| function_label(l, a)).collect();
    let space = MetSpace::from_fn(labels, |i, j| {
        pieces
            .iter()
            .enumerate()
            .map(|(k, (_, _, apex, _))| apex.d(families[i].1[k], families[j].1[k]))
            .max()
            .unwrap_or(ExtDist::ZERO)
    })?;
    Ok(space)
}

/// `f = m ∘ e` with `e` surjective onto the image and `m` its inclusion.
#[derive(Clone, Debug)]
pub struct FactorizationPair {
    pub e: NonexpMap,
    pub m: NonexpMap,
}

pub fn factorize(f: &NonexpMap) -> FactorizationPair {
    let mut image: Vec<usize> = f.assignment().to_vec();
    image.sort_unstable();
    image.dedup();
    let sub = f.cod().subspace(&image);
    let pos: HashMap<usize, usize> = image.iter().enumerate().map(|(i, &y)| (y, i)).collect();
    let e = NonexpMap::new_unchecked(f.dom().clone(), sub.clone(), f.assignment().iter().map(|y| pos[y]).collect());
    let m = NonexpMap::new_unchecked(sub, f.cod().clone(), image);
    FactorizationPair { e, m }
}

/// For a commuting square `g ∘ e = m ∘ f` with `e: A -> B` surjective and
/// `m: C -> D` an isometry, the unique `d: B -> C` with `d e = f`, `m d = g`.
pub fn diagonal_fill_in(e: &NonexpMap, m: &NonexpMap, f: &NonexpMap, g: &NonexpMap) -> Result<NonexpMap> {
    if g.compose(e)? != m.compose(f)? {
        return usage("diagonal_fill_in: square does not commute");
    }
    if !e.is_surjective() {
        return usage("diagonal_fill_in: left map is not surjective");
    }
    if !is_isometry(m) {
        return usage("diagonal_fill_in: right map is not an isometry");
    }
    let mut assign = vec![0; e.cod().len()];
    for a in 0..e.dom().len() {
        assign[e.apply(a)] = f.apply(a);
    }
    NonexpMap::new(e.cod().clone(), f.cod().clone(), assign)
}

/// `|d(x, y) - d(fx, fy)| <= ε` for all pairs, for any function `f`.
pub fn check_sharp_sharp(dom: &MetSpace, cod: &MetSpace, assign: &[usize], eps: ExtDist) -> bool {
    max_distortion(dom, cod, assign) <= eps
}

/// Whether the leg out of `dom f` in the ε-pushout of `f` against the
/// identity of `dom f` is an isometry.
pub fn eps_isometry_via_pushout(f: &NonexpMap, eps: ExtDist) -> Result<bool> {
    let sq = eps_pushout(f, &NonexpMap::identity(f.dom()), eps)?;
    Ok(is_isometry(&sq.g2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::hom_set;

    fn one_into_two(eps: ExtDist) -> (NonexpMap, NonexpMap) {
        let one = MetSpace::point();
        let two = MetSpace::two_point(eps);
        (NonexpMap::constant(&one, &two, 0), NonexpMap::constant(&one, &two, 1))
    }

    #[test]
    fn coequalizer_halves_distance() {
        let (p1, p2) = one_into_two(ExtDist::int(1));
        let c = eps_coequalizer(&p1, &p2, ExtDist::ratio(1, 2)).unwrap();
        assert_eq!(*c.cod(), MetSpace::two_point(ExtDist::ratio(1, 2)));
        let c0 = eps_coequalizer(&p1, &p2, ExtDist::ZERO).unwrap();
        assert_eq!(c0.cod().len(), 1);
    }

    #[test]
    fn pushout_of_points() {
        let one = MetSpace::point();
        let id = NonexpMap::identity(&one);
        let sq = eps_pushout(&id, &id, ExtDist::ratio(1, 4)).unwrap();
        assert_eq!(sq.apex().labels(), ["*", "*_1"]);
        assert_eq!(sq.apex().d(0, 1), ExtDist::ratio(1, 4));
        let inf = eps_pushout(&id, &id, ExtDist::Inf).unwrap();
        assert_eq!(inf.apex().d(0, 1), ExtDist::Inf);
    }

    #[test]
    fn equalizer_and_pullback_filters() {
        let (p1, p2) = one_into_two(ExtDist::int(1));
        assert_eq!(eps_equalizer(&p1, &p2, ExtDist::ratio(1, 2)).unwrap().dom().len(), 0);
        assert_eq!(eps_equalizer(&p1, &p2, ExtDist::int(1)).unwrap().dom().len(), 1);
        let two = MetSpace::two_point(ExtDist::int(1));
        let id = NonexpMap::identity(&two);
        let pb = eps_pullback(&id, &id, ExtDist::ratio(1, 2)).unwrap();
        assert_eq!(pb.apex.labels(), ["(p1,p1)", "(p2,p2)"]);
        assert_eq!(eps_pullback(&id, &id, ExtDist::Inf).unwrap().apex.len(), 4);
    }

    #[test]
    fn cotensor_constructions_agree() {
        let m = MetSpace::from_pairs(&["a", "b", "c"], &[("a", "b", ExtDist::int(1)), ("b", "c", ExtDist::int(1)), ("a", "c", ExtDist::int(2))]).unwrap();
        let l = MetSpace::on_line(&["x", "y", "z"], &[0.into(), 1.into(), 2.into()]).unwrap();
        assert_eq!(cotensor(&m, &l), cotensor_via_pullbacks(&m, &l).unwrap());
        assert_eq!(cotensor(&MetSpace::point(), &l).len(), 3);
        assert_eq!(tensor(&MetSpace::point(), &l).d(0, 2), ExtDist::int(2));
    }

    #[test]
    fn factorization_and_fill_in() {
        let x = MetSpace::on_line(&["a", "b", "c"], &[0.into(), 1.into(), 2.into()]).unwrap();
        let f = NonexpMap::new(x.clone(), x.clone(), vec![1, 1, 2]).unwrap();
        let FactorizationPair { e, m } = factorize(&f);
        assert_eq!(m.compose(&e).unwrap(), f);
        assert!(e.is_surjective() && is_isometry(&m));
        let d = diagonal_fill_in(&e, &m, &e, &m).unwrap();
        assert_eq!(d, NonexpMap::identity(e.cod()));
    }

    #[test]
    fn pushout_mediator_into_itself_is_identity() {
        let (p1, p2) = one_into_two(ExtDist::int(1));
        let sq = eps_pushout(&p1, &p2, ExtDist::ratio(1, 2)).unwrap();
        let h = sq.mediator(&sq.g1, &sq.g2).unwrap();
        assert_eq!(h, NonexpMap::identity(sq.apex()));
    }

    #[test]
    fn sharp_sharp_matches_pushout_leg_on_collapse() {
        let two = MetSpace::two_point(ExtDist::int(1));
        for f in hom_set(&two, &MetSpace::point()) {
            assert!(!eps_isometry_via_pushout(&f, ExtDist::ratio(1, 4)).unwrap());
            assert!(eps_isometry_via_pushout(&f, ExtDist::ratio(1, 2)).unwrap());
        }
    }
}
