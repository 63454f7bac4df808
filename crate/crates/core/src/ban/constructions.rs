//! Coproducts, quotients, pushouts and ε-(co)limits in `Ban` at desk scale.

use num_traits::{One, Signed, Zero};

use super::linalg::{canonical_sign, dot, extend_independent, is_zero, rank, unit, Matrix, Vector, Q};
use super::map::LinMap;
use super::space::PolyNormedSpace;
use crate::error::{usage, Result};

/// `(1-ε)‖x‖ <= ‖fx‖ <= (1+ε)‖x‖` for all `x`.
pub fn is_eps_isometry_ban(f: &LinMap, eps: &Q) -> Result<bool> {
    if !f.op_norm_leq(&(Q::one() + eps)) {
        return Ok(false);
    }
    Ok(match f.min_norm_on_sphere()? {
        Some(m) => m >= Q::one() - eps,
        None => true,
    })
}

pub fn is_isometry_ban(f: &LinMap) -> Result<bool> {
    is_eps_isometry_ban(f, &Q::zero())
}

/// The generators that are vertices of `conv(±gens)`, first occurrence of
/// each ± pair kept, in input order.
pub fn vertex_generators(dim: usize, gens: &[Vector]) -> Result<Vec<Vector>> {
    let all = PolyNormedSpace::new(dim, gens.to_vec())?;
    let facets = all.facets();
    let mut seen: Vec<Vector> = Vec::new();
    let mut out = Vec::new();
    for g in gens {
        let key = canonical_sign(g);
        if seen.contains(&key) {
            continue;
        }
        let tight: Vec<Vector> = facets.iter().filter(|a| dot(a, g).abs() == Q::one()).cloned().collect();
        if rank(&tight) == dim {
            seen.push(key);
            out.push(g.clone());
        }
    }
    Ok(out)
}

/// `X ⊕_1 Y` with the two isometric injections.
pub fn l1_coproduct(x: &PolyNormedSpace, y: &PolyNormedSpace) -> Result<(PolyNormedSpace, LinMap, LinMap)> {
    let (n, m) = (x.dim(), y.dim());
    let mut gens: Vec<Vector> = x.gens().iter().map(|g| {
        let mut v = g.clone();
        v.extend(std::iter::repeat_n(Q::zero(), m));
        v
    }).collect();
    gens.extend(y.gens().iter().map(|g| {
        let mut v = vec![Q::zero(); n];
        v.extend(g.iter().cloned());
        v
    }));
    let s = PolyNormedSpace::new(n + m, gens)?;
    let mut i1 = Matrix::zeros(n + m, n);
    for k in 0..n {
        i1[(k, k)] = Q::one();
    }
    let mut i2 = Matrix::zeros(n + m, m);
    for k in 0..m {
        i2[(n + k, k)] = Q::one();
    }
    let i1 = LinMap::new(x.clone(), s.clone(), i1)?;
    let i2 = LinMap::new(y.clone(), s.clone(), i2)?;
    Ok((s, i1, i2))
}

/// `X / span(N)` with the quotient norm. Coordinates are taken along a
/// complement of `N` chosen greedily from the standard basis; the ball is the
/// projection of `X`'s ball, generated by the projected vertices.
pub fn quotient_by_subspace(x: &PolyNormedSpace, kernel: &[Vector]) -> Result<(PolyNormedSpace, LinMap)> {
    let d = x.dim();
    if kernel.iter().any(|v| v.len() != d) || rank(kernel) != kernel.len() {
        return usage("quotient_by_subspace: kernel vectors are not linearly independent");
    }
    if kernel.is_empty() {
        return Ok((x.clone(), LinMap::identity(x)));
    }
    let units: Vec<Vector> = (0..d).map(|i| unit(d, i)).collect();
    let comp: Vec<Vector> = extend_independent(kernel, &units).into_iter().map(|i| units[i].clone()).collect();
    let mut basis = kernel.to_vec();
    basis.extend(comp.iter().cloned());
    let inv = Matrix::from_cols(d, &basis).inverse().expect("basis");
    let k = kernel.len();
    let proj = Matrix::from_rows(d - k, d, (k..d).map(|i| inv.row(i).to_vec()).collect());
    let projected: Vec<Vector> = x.gens().iter().map(|g| proj.apply(g)).filter(|v| !is_zero(v)).collect();
    let gens = if d - k == 0 { vec![] } else { vertex_generators(d - k, &projected)? };
    let qspace = PolyNormedSpace::new(d - k, gens)?;
    let p = LinMap::new(x.clone(), qspace.clone(), proj)?;
    Ok((qspace, p))
}

/// A square `g1 f1 ∼_ε g2 f2` in `Ban`, with its exact slack `‖g1 f1 − g2 f2‖`.
#[derive(Clone, Debug)]
pub struct BanSquare {
    pub f1: LinMap,
    pub f2: LinMap,
    pub g1: LinMap,
    pub g2: LinMap,
    pub eps: Q,
    pub slack: Q,
}

impl BanSquare {
    pub fn apex(&self) -> &PolyNormedSpace {
        self.g1.cod()
    }
}

fn square(f1: &LinMap, f2: &LinMap, g1: LinMap, g2: LinMap, eps: Q) -> Result<BanSquare> {
    let slack = g1.compose(f1)?.minus(&g2.compose(f2)?)?.op_norm();
    Ok(BanSquare { f1: f1.clone(), f2: f2.clone(), g1, g2, eps, slack })
}

/// The pushout of any span: `B1 ⊕_1 B2` modulo `{(f1 a, −f2 a)}`.
pub fn exact_pushout_ban(f1: &LinMap, f2: &LinMap) -> Result<BanSquare> {
    if f1.dom() != f2.dom() {
        return usage("pushout: maps do not share a domain");
    }
    let (s, i1, i2) = l1_coproduct(f1.cod(), f2.cod())?;
    let a = f1.dom().dim();
    let diffs: Vec<Vector> = (0..a)
        .map(|j| {
            let e = unit(a, j);
            let mut v = f1.apply(&e);
            v.extend(f2.apply(&e).into_iter().map(|x| -x));
            v
        })
        .collect();
    let keep = extend_independent(&[], &diffs);
    let kernel: Vec<Vector> = keep.into_iter().map(|i| diffs[i].clone()).collect();
    let (_, p) = quotient_by_subspace(&s, &kernel)?;
    let g1 = p.compose(&i1)?;
    let g2 = p.compose(&i2)?;
    square(f1, f2, g1, g2, Q::zero())
}

/// Pushout of two isometries; both legs are isometries.
pub fn pushout_ban(f1: &LinMap, f2: &LinMap) -> Result<BanSquare> {
    if !is_isometry_ban(f1)? || !is_isometry_ban(f2)? {
        return usage("pushout_ban: both maps must be isometries");
    }
    exact_pushout_ban(f1, f2)
}

/// ε-coequalizer of `u, v: A -> B`: the identity of `B` into `B` renormed by
/// `conv(Ball_B ∪ (1/ε)(u−v)(Ball_A))`. For ε = 0 the exact coequalizer, the
/// quotient by the image of `u − v`.
pub fn eps_coequalizer_ban(u: &LinMap, v: &LinMap, eps: &Q) -> Result<LinMap> {
    let diff = u.minus(v)?;
    let b = u.cod();
    if eps.is_negative() {
        return usage("eps_coequalizer_ban: negative parameter");
    }
    if eps.is_zero() {
        let cols: Vec<Vector> = (0..diff.matrix().cols()).map(|j| diff.matrix().col(j)).collect();
        let keep = extend_independent(&[], &cols);
        let kernel: Vec<Vector> = keep.into_iter().map(|i| cols[i].clone()).collect();
        return Ok(quotient_by_subspace(b, &kernel)?.1);
    }
    let inv = eps.recip();
    let mut gens = b.gens().to_vec();
    for g in u.dom().gens() {
        let w: Vector = diff.apply(g).iter().map(|x| x * &inv).collect();
        if b.norm(&w) > Q::one() {
            gens.push(w);
        }
    }
    let gens = if gens.len() == b.gens().len() { gens } else { vertex_generators(b.dim(), &gens)? };
    let c = PolyNormedSpace::new(b.dim(), gens)?;
    LinMap::new(b.clone(), c, Matrix::identity(b.dim()))
}

/// ε-pushout: the ε-coequalizer of `i1 f1` and `i2 f2` on `B1 ⊕_1 B2`.
pub fn eps_pushout_ban(f1: &LinMap, f2: &LinMap, eps: &Q) -> Result<BanSquare> {
    if f1.dom() != f2.dom() {
        return usage("eps_pushout_ban: maps do not share a domain");
    }
    if eps.is_zero() {
        return exact_pushout_ban(f1, f2);
    }
    let (_, i1, i2) = l1_coproduct(f1.cod(), f2.cod())?;
    let c = eps_coequalizer_ban(&i1.compose(f1)?, &i2.compose(f2)?, eps)?;
    let g1 = c.compose(&i1)?;
    let g2 = c.compose(&i2)?;
    square(f1, f2, g1, g2, eps.clone())
}

/// Whether the leg out of `dom f` in the ε-pushout of `f` against the
/// identity is an isometry.
pub fn eps_pushout_leg_isometry_ban(f: &LinMap, eps: &Q) -> Result<bool> {
    let sq = eps_pushout_ban(f, &LinMap::identity(f.dom()), eps)?;
    is_isometry_ban(&sq.g2)
}

#[cfg(test)]
mod tests {
    use super::super::linalg::{q, qi};
    use super::*;

    #[test]
    fn coproduct_is_l1_sum() {
        let (s, i1, i2) = l1_coproduct(&PolyNormedSpace::linf(2), &PolyNormedSpace::line()).unwrap();
        assert_eq!(s.norm(&[qi(1), qi(-1), q(1, 2)]), q(3, 2));
        assert!(is_isometry_ban(&i1).unwrap() && is_isometry_ban(&i2).unwrap());
    }

    #[test]
    fn quotient_of_l1_plane_by_diagonal() {
        let (qs, p) = quotient_by_subspace(&PolyNormedSpace::l1(2), &[vec![qi(1), qi(1)]]).unwrap();
        assert_eq!(qs.dim(), 1);
        // [e1] has quotient norm min_t |1-t| + |t| = 1.
        assert_eq!(qs.norm(&p.apply(&[qi(1), qi(0)])), qi(1));
        assert!(p.is_contraction());
    }

    #[test]
    fn pushout_of_identities_is_the_space() {
        let h = PolyNormedSpace::hexagon();
        let id = LinMap::identity(&h);
        let sq = pushout_ban(&id, &id).unwrap();
        assert_eq!(sq.apex().dim(), 2);
        assert_eq!(sq.g1, sq.g2);
        assert!(is_isometry_ban(&sq.g1).unwrap());
    }

    #[test]
    fn coequalizer_unchanged_for_large_eps() {
        let l = PolyNormedSpace::l1(2);
        let u = LinMap::identity(&l);
        let v = LinMap::zero(&l, &l);
        let c = eps_coequalizer_ban(&u, &v, &qi(1)).unwrap();
        assert_eq!(c.cod(), &l);
        let c2 = eps_coequalizer_ban(&u, &v, &q(1, 2)).unwrap();
        assert_eq!(c2.cod().norm(&[qi(1), qi(0)]), q(1, 2));
    }

    #[test]
    fn sharp_matches_pushout_leg_on_scalings() {
        let l = PolyNormedSpace::hexagon();
        for s in [q(1, 2), q(3, 4), qi(1)] {
            let f = LinMap::identity(&l).scaled(&s);
            for eps in [q(1, 4), q(1, 2)] {
                assert_eq!(is_eps_isometry_ban(&f, &eps).unwrap(), eps_pushout_leg_isometry_ban(&f, &eps).unwrap());
            }
        }
    }
}
