//! Facet enumeration for centrally symmetric polytopes by the double
//! description method applied to the polar.

use num_traits::{Signed, Zero};

use super::linalg::{canonical_sign, dot, rref, scale, Matrix, Vector, Q};

type Bits = Vec<u64>;

fn bits_new(n: usize) -> Bits {
    vec![0; n.div_ceil(64)]
}

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bits_and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_count(b: &Bits) -> u32 {
    b.iter().map(|w| w.count_ones()).sum()
}

fn bits_subset(small: &Bits, big: &Bits) -> bool {
    small.iter().zip(big).all(|(s, b)| s & !b == 0)
}

fn common_rank(rows: &[Vector], common: &Bits, m: usize) -> usize {
    let mut sel: Vec<Vector> = (0..rows.len())
        .filter(|&i| common[i / 64] >> (i % 64) & 1 == 1)
        .map(|i| rows[i].clone())
        .collect();
    rref(&mut sel, m).len()
}

struct Ray {
    v: Vector,
    zeros: Bits,
}

fn normalize(v: Vector) -> Vector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) => {
            let s = x.abs().recip();
            scale(&v, &s)
        }
        None => v,
    }
}

/// Extreme rays of the pointed cone `{y : rows·y >= 0}`; `rows` must have
/// full column rank.
pub fn extreme_rays(rows: &[Vector]) -> Vec<Vector> {
    let Some(m) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    // Initial basis of m independent constraints.
    let mut init = Vec::new();
    let mut acc: Vec<Vector> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        acc.push(r.clone());
        let mut tmp = acc.clone();
        if rref(&mut tmp, m).len() == acc.len() {
            init.push(i);
            if init.len() == m {
                break;
            }
        } else {
            acc.pop();
        }
    }
    assert_eq!(init.len(), m, "constraint rows must have full column rank");
    let a0 = Matrix::from_rows(m, m, init.iter().map(|&i| rows[i].clone()).collect());
    let inv = a0.inverse().expect("independent rows");
    let nrows = rows.len();
    let mut rays: Vec<Ray> = (0..m)
        .map(|k| {
            let mut zeros = bits_new(nrows);
            for (t, &i) in init.iter().enumerate() {
                if t != k {
                    bit_set(&mut zeros, i);
                }
            }
            Ray { v: normalize(inv.col(k)), zeros }
        })
        .collect();
    for (ci, c) in rows.iter().enumerate() {
        if init.contains(&ci) {
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|r| dot(c, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let negs: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &pi in &pos {
            for &ni in &negs {
                let common = bits_and(&rays[pi].zeros, &rays[ni].zeros);
                if (bits_count(&common) as usize) + 2 < m {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&k| k != pi && k != ni)
                    .all(|k| !bits_subset(&common, &rays[k].zeros));
                if !adjacent || common_rank(rows, &common, m) + 2 < m {
                    continue;
                }
                let v: Vector = rays[ni]
                    .v
                    .iter()
                    .zip(&rays[pi].v)
                    .map(|(x, y)| &vals[pi] * x - &vals[ni] * y)
                    .collect();
                let mut zeros = common;
                bit_set(&mut zeros, ci);
                next.push(Ray { v: normalize(v), zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_negative() {
                continue;
            }
            if vals[k].is_zero() {
                bit_set(&mut r.zeros, ci);
            }
            kept.push(r);
        }
        kept.extend(next);
        rays = kept;
    }
    rays.into_iter().map(|r| r.v).collect()
}

/// Facet functionals `a` of `conv(±gens)` (one per ± pair, canonical sign),
/// so that the gauge is `max_a |<a, x>|`. `gens` must span `R^dim`.
pub fn symmetric_facets(dim: usize, gens: &[Vector]) -> Vec<Vector> {
    if dim == 0 {
        return Vec::new();
    }
    let mut rows = Vec::with_capacity(2 * gens.len());
    for g in gens {
        if g.iter().all(Zero::is_zero) {
            continue;
        }
        let mut r1: Vector = g.iter().map(|x| -x).collect();
        r1.push(Q::from_integer(1.into()));
        let mut r2 = g.clone();
        r2.push(Q::from_integer(1.into()));
        rows.push(r1);
        rows.push(r2);
    }
    let mut out: Vec<Vector> = Vec::new();
    for ray in extreme_rays(&rows) {
        let s = ray[dim].clone();
        assert!(s.is_positive(), "polar of a spanning polytope is bounded");
        let a = canonical_sign(&scale(&ray[..dim], &s.recip()));
        if !out.contains(&a) {
            out.push(a);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::super::linalg::{q, qi, unit};
    use super::*;

    #[test]
    fn square_and_cross_polytope() {
        let l1 = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
        let f = symmetric_facets(2, &l1);
        assert_eq!(f.len(), 2);
        assert!(f.contains(&vec![qi(1), qi(1)]) && f.contains(&vec![qi(1), qi(-1)]));
        let linf = vec![vec![qi(1), qi(1)], vec![qi(1), qi(-1)]];
        let f = symmetric_facets(2, &linf);
        assert_eq!(f.len(), 2);
        assert!(f.contains(&vec![qi(1), qi(0)]) && f.contains(&vec![qi(0), qi(1)]));
    }

    #[test]
    fn interior_generator_is_ignored() {
        let gens = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)], vec![q(1, 4), q(1, 4)]];
        assert_eq!(symmetric_facets(2, &gens).len(), 2);
    }

    #[test]
    fn octahedron_has_four_facet_pairs() {
        let gens: Vec<Vector> = (0..3).map(|i| unit(3, i)).collect();
        assert_eq!(symmetric_facets(3, &gens).len(), 4);
        let cube: Vec<Vector> = (0..4)
            .map(|k| vec![qi(1), qi(if k & 1 == 0 { 1 } else { -1 }), qi(if k & 2 == 0 { 1 } else { -1 })])
            .collect();
        assert_eq!(symmetric_facets(3, &cube).len(), 3);
    }
}
