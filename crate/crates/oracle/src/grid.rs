//! Small metric spaces up to isometry.

use metcat_core::{ExtDist, MetSpace};

/// The distance values used by the competitor grid.
pub fn grid_values() -> Vec<ExtDist> {
    vec![ExtDist::ratio(1, 4), ExtDist::ratio(1, 2), ExtDist::int(1), ExtDist::int(2), ExtDist::Inf]
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every metric space on `1..=max_points` points with off-diagonal distances
/// from `values`, one per isometry class, smallest first. Points are
/// labelled `x0, x1, ...`.
pub fn space_grid(max_points: usize, values: &[ExtDist]) -> Vec<MetSpace> {
    let mut out = Vec::new();
    for n in 1..=max_points {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let perms = permutations(n);
        let mut seen: std::collections::BTreeSet<Vec<ExtDist>> = Default::default();
        let mut choice = vec![0usize; pairs.len()];
        loop {
            let mut t = vec![vec![ExtDist::ZERO; n]; n];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                t[i][j] = values[choice[k]];
                t[j][i] = values[choice[k]];
            }
            let triangle = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| t[i][j] <= t[i][k] + t[k][j])));
            if triangle {
                let key = perms
                    .iter()
                    .map(|p| pairs.iter().map(|&(i, j)| t[p[i]][p[j]]).collect::<Vec<_>>())
                    .min()
                    .expect("nonempty");
                if seen.insert(key) {
                    let labels = (0..n).map(|i| format!("x{i}")).collect();
                    out.push(MetSpace::new(labels, t).expect("grid space"));
                }
            }
            let mut p = 0;
            while p < choice.len() {
                choice[p] += 1;
                if choice[p] < values.len() {
                    break;
                }
                choice[p] = 0;
                p += 1;
            }
            if p == choice.len() {
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_classes() {
        let g = space_grid(2, &grid_values());
        assert_eq!(g.len(), 1 + 5);
    }

    #[test]
    fn three_point_classes_are_distinct() {
        let g = space_grid(3, &[ExtDist::int(1), ExtDist::int(2)]);
        // {1,1,1}, {1,1,2}, {1,2,2}, {2,2,2}.
        assert_eq!(g.iter().filter(|s| s.len() == 3).count(), 4);
    }
}
