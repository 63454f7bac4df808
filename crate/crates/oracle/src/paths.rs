//! All-pairs shortest paths by repeated edge relaxation.

use metcat_core::ExtDist;

/// Distances in the graph on `n` nodes with undirected weighted `edges`;
/// unreachable pairs are infinite.
pub fn shortest_path_oracle(n: usize, edges: &[(usize, usize, ExtDist)]) -> Vec<Vec<ExtDist>> {
    let mut out = Vec::with_capacity(n);
    for s in 0..n {
        let mut d = vec![ExtDist::Inf; n];
        d[s] = ExtDist::ZERO;
        loop {
            let mut changed = false;
            for &(a, b, w) in edges {
                for (x, y) in [(a, b), (b, a)] {
                    let via = d[x] + w;
                    if via < d[y] {
                        d[y] = via;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        out.push(d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_graphs() {
        let t = shortest_path_oracle(2, &[]);
        assert_eq!(t[0][1], ExtDist::Inf);
        let t = shortest_path_oracle(2, &[(0, 1, ExtDist::ratio(3, 4))]);
        assert_eq!(t[1][0], ExtDist::ratio(3, 4));
    }

    #[test]
    fn chain_beats_direct_edge() {
        let e = [(0, 1, ExtDist::int(1)), (1, 2, ExtDist::int(1)), (0, 2, ExtDist::int(3))];
        assert_eq!(shortest_path_oracle(3, &e)[0][2], ExtDist::int(2));
    }
}
