//! Norms of polyhedral spaces by enumerating generator bases, norm brackets
//! from separating functionals, and recomputation of Ban certificates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use metcat_core::ban::{BanChain, BnFRun, FactorCertificate, LinMap, PolyNormedSpace};

pub type Q = BigRational;

type Mat = Vec<Vec<Q>>;

fn rows_of(m: &LinMap) -> Mat {
    let mm = m.matrix();
    (0..mm.rows()).map(|i| (0..mm.cols()).map(|j| mm[(i, j)].clone()).collect()).collect()
}

fn mat_vec(m: &Mat, x: &[Q]) -> Vec<Q> {
    m.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).fold(Q::zero(), |s, t| s + t)).collect()
}

fn mat_mul(a: &Mat, b: &Mat, inner: usize, cols: usize) -> Mat {
    a.iter()
        .map(|r| (0..cols).map(|j| (0..inner).map(|k| &r[k] * &b[k][j]).fold(Q::zero(), |s, t| s + t)).collect())
        .collect()
}

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

/// Solves `Σ c_k cols[k] = x` for square independent `cols`.
fn solve(cols: &[&Vec<Q>], x: &[Q]) -> Option<Vec<Q>> {
    let n = x.len();
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut r: Vec<Q> = cols.iter().map(|c| c[i].clone()).collect();
            r.push(x[i].clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..=n {
                    let t = &f * &a[col][k];
                    a[r][k] = &a[r][k] - &t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

fn subsets(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The gauge of `conv(±gens)` at `x`: the least `Σ|c_k|` over expansions of
/// `x` in a basis drawn from the generators.
pub fn norm_by_bases(dim: usize, gens: &[Vec<Q>], x: &[Q]) -> Q {
    if x.iter().all(Zero::is_zero) {
        return Q::zero();
    }
    let mut best: Option<Q> = None;
    subsets(gens.len(), dim, |s| {
        let cols: Vec<&Vec<Q>> = s.iter().map(|&i| &gens[i]).collect();
        if let Some(c) = solve(&cols, x) {
            let v = c.iter().fold(Q::zero(), |a, t| a + t.abs());
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
    });
    best.expect("generators span the space")
}

pub fn norm(space: &PolyNormedSpace, x: &[Q]) -> Q {
    norm_by_bases(space.dim(), space.gens(), x)
}

fn op_norm_mat(m: &Mat, dom: &PolyNormedSpace, cod: &PolyNormedSpace) -> Q {
    dom.gens().iter().map(|g| norm(cod, &mat_vec(m, g))).max().unwrap_or_else(Q::zero)
}

pub fn op_norm(m: &LinMap) -> Q {
    op_norm_mat(&rows_of(m), m.dom(), m.cod())
}

/// Lower and upper bounds on the norm of `x`. The upper bound is an explicit
/// expansion in generators; the lower bound is `|<a, x>| / max_g |<a, g>|`
/// maximized over functionals through `dim` signed generators and over the
/// integer functionals with entries in `[-radius, radius]`.
pub fn lp_bracket(space: &PolyNormedSpace, x: &[Q], radius: i64) -> (Q, Q) {
    let dim = space.dim();
    let upper = norm(space, x);
    if upper.is_zero() {
        return (Q::zero(), Q::zero());
    }
    let gens = space.gens();
    let signed: Vec<Vec<Q>> = gens.iter().flat_map(|g| [g.clone(), g.iter().map(|v| -v).collect()]).collect();
    let mut lower = Q::zero();
    let mut consider = |a: &[Q]| {
        let den = gens.iter().map(|g| dot(a, g).abs()).max().unwrap_or_else(Q::zero);
        if !den.is_zero() {
            let v = dot(a, x).abs() / den;
            if v > lower {
                lower = v;
            }
        }
    };
    // Rows `p_k` of the system `<a, p_k> = 1`; transpose to reuse `solve`.
    subsets(signed.len(), dim, |s| {
        let t: Vec<Vec<Q>> = (0..dim).map(|i| s.iter().map(|&k| signed[k][i].clone()).collect()).collect();
        let cols: Vec<&Vec<Q>> = t.iter().collect();
        if let Some(a) = solve(&cols, &vec![Q::one(); dim]) {
            consider(&a);
        }
    });
    let span = (2 * radius + 1) as usize;
    let total = span.pow(dim as u32);
    for code in 0..total {
        let mut c = code;
        let a: Vec<Q> = (0..dim)
            .map(|_| {
                let v = (c % span) as i64 - radius;
                c /= span;
                Q::from_integer(BigInt::from(v))
            })
            .collect();
        consider(&a);
    }
    (lower, upper)
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Q::zero(), |s, t| s + t)
}

/// Independent recomputation of a factorization certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorAudit {
    pub r: Q,
    pub delta: Q,
    pub distance: Q,
    pub norm: Q,
    /// `f''` is `f'`, `f'/(1+ε/2)` or zero, consistently with the record.
    pub rescaling_ok: bool,
    pub agrees: bool,
}

impl FactorAudit {
    pub fn passed(&self, eps: &Q) -> bool {
        self.agrees && self.rescaling_ok && self.distance <= *eps && self.norm <= Q::one()
    }
}

fn connecting(ch: &BanChain, i: usize, j: usize) -> Mat {
    let mut m = identity(ch.stage(i).dim());
    for l in &ch.links()[i..j] {
        let lm = rows_of(l);
        m = mat_mul(&lm, &m, l.dom().dim(), ch.stage(i).dim());
    }
    m
}

/// Rechecks `‖k f'' − f‖ <= ε`, `‖f''‖ <= 1`, the constant `r`, and the
/// rescaling rule.
pub fn audit_factor(ch: &BanChain, f: &LinMap, cert: &FactorCertificate) -> FactorAudit {
    let a = f.dom();
    let r = a.gens().iter().map(|g| g.iter().fold(Q::zero(), |s, t| s + t.abs())).max().unwrap_or_else(Q::zero);
    let two = Q::from_integer(BigInt::from(2));
    let delta = if r.is_zero() { Q::zero() } else { &cert.eps / (&two * &r) };
    let k = connecting(ch, cert.stage, ch.top_index());
    let fs = rows_of(&cert.factor);
    let kf = mat_mul(&k, &fs, ch.stage(cert.stage).dim(), a.dim());
    let diff: Mat = kf.iter().zip(rows_of(f)).map(|(x, y)| x.iter().zip(&y).map(|(p, q)| p - q).collect()).collect();
    let distance = op_norm_mat(&diff, a, ch.top());
    let norm = op_norm_mat(&fs, a, ch.stage(cert.stage));
    let fp = rows_of(&cert.f_prime);
    let scale = (Q::one() + &cert.eps / &two).recip();
    let scaled: Mat = fp.iter().map(|r| r.iter().map(|v| v * &scale).collect()).collect();
    let zero = fs.iter().all(|r| r.iter().all(Zero::is_zero));
    let rescaling_ok = match cert.rescaled {
        Some(true) => fs == scaled && cert.errors.iter().all(|e| *e <= delta),
        Some(false) => fs == fp && cert.errors.iter().all(|e| *e <= delta),
        None => zero,
    };
    let agrees = r == cert.r && delta == cert.delta && distance == cert.distance && norm == cert.norm;
    FactorAudit { r, delta, distance, norm, rescaling_ok, agrees }
}

/// Recomputes every recorded `(∗)` and `(∗∗)` value of a back-and-forth run;
/// returns the values in report order and whether they all match the record.
pub fn audit_bnf(ch_k: &BanChain, ch_l: &BanChain, run: &BnFRun) -> (Vec<Q>, bool) {
    let mut vals = Vec::new();
    let mut agree = true;
    for (idx, s) in run.states.iter().enumerate() {
        let next_f = run.states.get(idx + 1).map(|t| &t.f_n).or(run.last_f.as_ref());
        let gf = mat_mul(&rows_of(&s.g_n), &rows_of(&s.f_n), s.g_n.dom().dim(), s.f_n.dom().dim());
        let k = connecting(ch_k, s.i_n, s.i_next);
        let d: Mat = gf.iter().zip(&k).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect();
        let star = op_norm_mat(&d, s.f_n.dom(), ch_k.stage(s.i_next));
        agree &= star == s.star;
        vals.push(star);
        if let (Some(rec), Some(j_next), Some(f_next)) = (&s.star_star, s.j_next, next_f) {
            let fg = mat_mul(&rows_of(f_next), &rows_of(&s.g_n), f_next.dom().dim(), s.g_n.dom().dim());
            let l = connecting(ch_l, s.j_n, j_next);
            let d: Mat = fg.iter().zip(&l).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect();
            let ss = op_norm_mat(&d, s.g_n.dom(), ch_l.stage(j_next));
            agree &= ss == *rec;
            vals.push(ss);
        }
    }
    (vals, agree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    #[test]
    fn bracket_on_hexagon() {
        let h = PolyNormedSpace::hexagon();
        assert_eq!(lp_bracket(&h, &[qi(0), qi(0)], 2), (qi(0), qi(0)));
        let (lo, hi) = lp_bracket(&h, &[qi(1), qi(-1)], 2);
        assert!(lo <= qi(2) && qi(2) <= hi);
        assert_eq!(norm(&h, &[qi(1), qi(1)]), qi(1));
    }
}
