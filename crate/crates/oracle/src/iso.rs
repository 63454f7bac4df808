//! Isometric bijections by backtracking.

use metcat_core::MetSpace;

/// Every distance-preserving bijection `a -> b`, as assignment vectors.
pub fn isometries(a: &MetSpace, b: &MetSpace) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    search(a, b, |phi| {
        out.push(phi.to_vec());
        false
    });
    out
}

/// Backtracking over isometric bijections until `accept` returns true.
fn search(a: &MetSpace, b: &MetSpace, mut accept: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let mut assign = Vec::with_capacity(a.len());
    let mut used = vec![false; b.len()];
    if extend(a, b, &mut assign, &mut used, &mut accept) {
        Some(assign)
    } else {
        None
    }
}

fn extend(a: &MetSpace, b: &MetSpace, assign: &mut Vec<usize>, used: &mut [bool], accept: &mut impl FnMut(&[usize]) -> bool) -> bool {
    let i = assign.len();
    if i == a.len() {
        return accept(assign);
    }
    for y in 0..b.len() {
        if used[y] || (0..i).any(|k| b.d(assign[k], y) != a.d(k, i)) {
            continue;
        }
        used[y] = true;
        assign.push(y);
        if extend(a, b, assign, used, accept) {
            return true;
        }
        assign.pop();
        used[y] = false;
    }
    false
}

pub fn find_isometry(a: &MetSpace, b: &MetSpace) -> Option<Vec<usize>> {
    search(a, b, |_| true)
}

/// Whether some isometry `φ: a -> b` carries each `legs_a[i]` (a map into
/// `a`) to `legs_b[i]`: `φ ∘ legs_a[i] = legs_b[i]`.
pub fn iso_under_colimit_legs(a: &MetSpace, b: &MetSpace, legs_a: &[&[usize]], legs_b: &[&[usize]]) -> bool {
    search(a, b, |phi| legs_a.iter().zip(legs_b).all(|(la, lb)| la.iter().map(|&x| phi[x]).eq(lb.iter().copied())))
        .is_some()
}

/// Whether some isometry `φ: a -> b` satisfies `legs_b[i] ∘ φ = legs_a[i]`
/// for maps out of the apexes.
pub fn iso_under_limit_legs(a: &MetSpace, b: &MetSpace, legs_a: &[&[usize]], legs_b: &[&[usize]]) -> bool {
    search(a, b, |phi| legs_a.iter().zip(legs_b).all(|(la, lb)| (0..a.len()).all(|x| lb[phi[x]] == la[x]))).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use metcat_core::ExtDist;

    #[test]
    fn symmetric_triangle_has_six() {
        let t = MetSpace::from_fn(vec!["a".into(), "b".into(), "c".into()], |i, j| if i == j { ExtDist::ZERO } else { ExtDist::int(1) }).unwrap();
        assert_eq!(isometries(&t, &t).len(), 6);
        let line = MetSpace::from_pairs(&["a", "b", "c"], &[("a", "b", ExtDist::int(1)), ("b", "c", ExtDist::int(1)), ("a", "c", ExtDist::int(2))]).unwrap();
        assert_eq!(isometries(&line, &line).len(), 2);
        assert!(find_isometry(&t, &line).is_none());
    }
}
