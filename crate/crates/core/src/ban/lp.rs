//! Exact two-phase simplex with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::linalg::{Vector, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vector, value: Q },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Q> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vector>,
    rhs: Vector,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, cost: &mut Vector, obj: &mut Q) {
        let inv = self.rows[r][c].recip();
        self.rows[r].iter_mut().for_each(|x| *x *= &inv);
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            self.rows[i].iter_mut().zip(&prow).for_each(|(x, p)| *x -= &f * p);
            self.rhs[i] -= &f * &prhs;
        }
        if !cost[c].is_zero() {
            let f = cost[c].clone();
            cost.iter_mut().zip(&prow).for_each(|(x, p)| *x -= &f * p);
            *obj -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Minimizes with reduced costs `cost` over columns `< ncols`. Returns
    /// false when unbounded. `obj` tracks minus the objective value.
    fn run(&mut self, cost: &mut Vector, obj: &mut Q, ncols: usize) -> bool {
        loop {
            let Some(c) = (0..ncols).find(|&j| cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c, cost, obj);
        }
    }
}

/// Minimizes `c·x` subject to `A x = b`, `x >= 0`.
pub fn minimize(c: &[Q], a: &[Vector], b: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|r| r.len() == n));
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut r: Vector = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        rows.push(r);
        rhs.push(if flip { -&b[i] } else { b[i].clone() });
    }
    let mut t = Tableau { rows, rhs, basis: (n..n + m).collect() };

    // Phase 1: minimize the sum of artificials.
    let mut cost = vec![Q::zero(); n + m];
    let mut obj = Q::zero();
    for i in 0..m {
        for j in 0..n {
            cost[j] -= &t.rows[i][j];
        }
        obj -= &t.rhs[i];
    }
    t.run(&mut cost, &mut obj, n + m);
    if !obj.is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    let mut dummy = vec![Q::zero(); n + m];
                    let mut dobj = Q::zero();
                    t.pivot(i, j, &mut dummy, &mut dobj);
                }
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for r in t.rows.iter_mut() {
        r.truncate(n);
    }

    // Phase 2.
    let mut cost: Vector = c.to_vec();
    let mut obj = Q::zero();
    for i in 0..t.rows.len() {
        let bj = t.basis[i];
        if !cost[bj].is_zero() {
            let f = cost[bj].clone();
            cost.iter_mut().zip(&t.rows[i]).for_each(|(x, p)| *x -= &f * p);
            obj -= &f * &t.rhs[i];
        }
    }
    if !t.run(&mut cost, &mut obj, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &bj) in t.basis.iter().enumerate() {
        x[bj] = t.rhs[i].clone();
    }
    LpOutcome::Optimal { x, value: -obj }
}
