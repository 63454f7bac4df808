//! Exact (co)limits of finite metric spaces computed from first principles,
//! for comparison with the ε-constructions at ε = 0.

use metcat_core::{ExtDist, MetSpace, NonexpMap};

use crate::paths::shortest_path_oracle;

/// An apex with one assignment vector per leg.
#[derive(Clone, Debug)]
pub struct Classical {
    pub apex: MetSpace,
    pub legs: Vec<Vec<usize>>,
}

/// Glues the points of `n` nodes (with the given distance function) along
/// zero-weight identifications and returns the class of each node.
fn glue(n: usize, d: impl Fn(usize, usize) -> ExtDist, same: &[(usize, usize)]) -> (MetSpace, Vec<usize>) {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = d(i, j);
            if w.is_finite() {
                edges.push((i, j, w));
            }
        }
    }
    edges.extend(same.iter().map(|&(a, b)| (a, b, ExtDist::ZERO)));
    let t = shortest_path_oracle(n, &edges);
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for i in 0..n {
        if class[i] == usize::MAX {
            for j in i..n {
                if t[i][j].is_zero() {
                    class[j] = reps.len();
                }
            }
            reps.push(i);
        }
    }
    let labels = (0..reps.len()).map(|k| format!("c{k}")).collect();
    let apex = MetSpace::from_fn(labels, |a, b| t[reps[a]][reps[b]]).expect("quotient metric");
    (apex, class)
}

/// Coequalizer of `u, v: A -> B`; the single leg is the quotient map.
pub fn coequalizer(u: &NonexpMap, v: &NonexpMap) -> Classical {
    let b = u.cod();
    let same: Vec<(usize, usize)> = u.assignment().iter().zip(v.assignment()).map(|(&x, &y)| (x, y)).collect();
    let (apex, class) = glue(b.len(), |i, j| b.d(i, j), &same);
    Classical { apex, legs: vec![class] }
}

/// Pushout of `f1: A -> B1`, `f2: A -> B2`; legs out of `B1` and `B2`.
pub fn pushout(f1: &NonexpMap, f2: &NonexpMap) -> Classical {
    let (b1, b2) = (f1.cod(), f2.cod());
    let n1 = b1.len();
    let d = |i: usize, j: usize| match (i < n1, j < n1) {
        (true, true) => b1.d(i, j),
        (false, false) => b2.d(i - n1, j - n1),
        _ => ExtDist::Inf,
    };
    let same: Vec<(usize, usize)> = f1.assignment().iter().zip(f2.assignment()).map(|(&x, &y)| (x, n1 + y)).collect();
    let (apex, class) = glue(n1 + b2.len(), d, &same);
    Classical { apex, legs: vec![class[..n1].to_vec(), class[n1..].to_vec()] }
}

/// Equalizer of `u, v: A -> B`: the points where they agree.
pub fn equalizer(u: &NonexpMap, v: &NonexpMap) -> Classical {
    let a = u.dom();
    let keep: Vec<usize> = (0..a.len()).filter(|&x| u.apply(x) == v.apply(x)).collect();
    let labels = keep.iter().map(|&x| a.label(x).to_string()).collect();
    let apex = MetSpace::from_fn(labels, |i, j| a.d(keep[i], keep[j])).expect("subspace");
    Classical { apex, legs: vec![keep] }
}

/// Pullback of `u: A -> C`, `v: B -> C` with the max metric.
pub fn pullback(u: &NonexpMap, v: &NonexpMap) -> Classical {
    let (a, b) = (u.dom(), v.dom());
    let pairs: Vec<(usize, usize)> =
        (0..a.len()).flat_map(|x| (0..b.len()).map(move |y| (x, y))).filter(|&(x, y)| u.apply(x) == v.apply(y)).collect();
    let labels = pairs.iter().map(|&(x, y)| format!("<{},{}>", a.label(x), b.label(y))).collect();
    let apex = MetSpace::from_fn(labels, |i, j| a.d(pairs[i].0, pairs[j].0).max(b.d(pairs[i].1, pairs[j].1))).expect("pullback");
    Classical { apex, legs: vec![pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect()] }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pushout_of_points_glues() {
        let p = MetSpace::point();
        let f = NonexpMap::identity(&p);
        let c = pushout(&f, &f);
        assert_eq!(c.apex.len(), 1);
    }

    #[test]
    fn coequalizer_identifies_endpoints() {
        let two = MetSpace::two_point(ExtDist::int(1));
        let p = MetSpace::point();
        let u = NonexpMap::constant(&p, &two, 0);
        let v = NonexpMap::constant(&p, &two, 1);
        assert_eq!(coequalizer(&u, &v).apex.len(), 1);
    }
}
