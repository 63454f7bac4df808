//! Extension along ε-isometries into a chain, and the approximate
//! back-and-forth between two chains.

use num_traits::Zero;

use super::chain::{factor_through_stage, BanChain};
use super::constructions::{eps_pushout_ban, exact_pushout_ban, is_isometry_ban};
use super::linalg::{extend_independent, format_q, neg, rank, Matrix, Vector, Q};
use super::map::LinMap;
use crate::error::{usage, Error, Result};

/// Budgeted provider of isometric extensions into a chain. It first looks
/// for an isometry into an existing stage assembled from the stage's
/// spanning vectors; failing that it amalgamates by a pushout and appends
/// the result to the chain.
#[derive(Clone, Debug)]
pub struct ExtensionOracle {
    /// Candidate maps tried per request.
    pub search_budget: usize,
    /// Pushouts that may still be attached to the chain.
    pub attach_budget: usize,
}

impl ExtensionOracle {
    pub fn new(search_budget: usize, attach_budget: usize) -> Self {
        ExtensionOracle { search_budget, attach_budget }
    }

    /// An isometry `f'': B -> K_j` with `f'' v = k_{s,j} f`, for some `j >=
    /// min_stage`.
    pub fn extend_isometry(
        &mut self,
        ch: &mut BanChain,
        s: usize,
        f: &LinMap,
        v: &LinMap,
        min_stage: usize,
    ) -> Result<(usize, LinMap, bool)> {
        let b = v.cod();
        let a_dim = v.dom().dim();
        let vcols: Vec<Vector> = (0..a_dim).map(|j| v.matrix().col(j)).collect();
        if rank(&vcols) != a_dim {
            return usage("extension along a map that is not injective");
        }
        let comp: Vec<Vector> = extend_independent(&vcols, b.gens()).into_iter().map(|i| b.gens()[i].clone()).collect();
        let mut basis = vcols.clone();
        basis.extend(comp.iter().cloned());
        let binv = Matrix::from_cols(b.dim(), &basis).inverse().expect("basis of B");
        let mut tried = 0usize;
        for j in s.max(min_stage)..ch.len() {
            let kj = ch.stage(j).clone();
            if kj.dim() < b.dim() {
                continue;
            }
            let g = ch.composite(s, j)?.compose(f)?;
            let gcols: Vec<Vector> = (0..a_dim).map(|c| g.matrix().col(c)).collect();
            let mut cands: Vec<Vector> = Vec::new();
            for w in ch.spanning(j) {
                for x in [w.clone(), neg(w)] {
                    if !cands.contains(&x) {
                        cands.push(x);
                    }
                }
            }
            let c = comp.len();
            let mut idx = vec![0usize; c];
            loop {
                if tried >= self.search_budget {
                    break;
                }
                tried += 1;
                let mut cols = gcols.clone();
                cols.extend(idx.iter().map(|&t| cands[t].clone()));
                if rank(&cols) == b.dim() {
                    let m = Matrix::from_cols(kj.dim(), &cols).mul(&binv);
                    let cand = LinMap::new(b.clone(), kj.clone(), m)?;
                    if cand.is_contraction() && is_isometry_ban(&cand)? {
                        return Ok((j, cand, false));
                    }
                }
                let mut p = 0;
                while p < c {
                    idx[p] += 1;
                    if idx[p] < cands.len() {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
                if p == c {
                    break;
                }
            }
        }
        if self.attach_budget == 0 {
            return Err(Error::Exhausted(format!("no isometric extension found after {tried} candidates")));
        }
        self.attach_budget -= 1;
        let top = ch.top_index();
        let f_top = ch.composite(s, top)?.compose(f)?;
        let sq = exact_pushout_ban(v, &f_top)?;
        if !is_isometry_ban(&sq.g1)? {
            return Err(Error::Internal("pushout leg is not an isometry".into()));
        }
        ch.push(sq.g2.clone())?;
        Ok((ch.top_index(), sq.g1, true))
    }
}

/// An extension `f': A' -> K_stage` of `f: A -> K_s` along `h: A -> A'`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub stage: usize,
    pub map: LinMap,
    /// Isometry defect of `h`.
    pub eps: Q,
    pub delta: Q,
    /// `‖f' h − k_{s,stage} f‖`.
    pub slack: Q,
    /// Whether the chain was extended to make room.
    pub attached: bool,
}

impl Extension {
    pub fn ok(&self) -> bool {
        self.slack <= &self.eps + &self.delta
    }
}

/// Extends the isometry `f: A -> K_s` along the ε-isometry `h: A -> A'`.
/// With `ε` the defect of `h`, the ε-pushout of `h` against the identity
/// gives isometries `u: A' -> B` and `v: A -> B` with `‖u h − v‖ <= ε`; an
/// isometric `f''` with `f'' v = k f` then yields `f' = f'' u`. The oracle's
/// extensions are exact, so the slack never exceeds `ε` and `delta` is only
/// recorded.
pub fn extend_along_eps_isometry(
    h: &LinMap,
    f: &LinMap,
    s: usize,
    ch: &mut BanChain,
    oracle: &mut ExtensionOracle,
    delta: &Q,
    min_stage: usize,
) -> Result<Extension> {
    if f.dom() != h.dom() || f.cod() != ch.stage(s) {
        return usage("extend_along_eps_isometry: maps do not match the chain");
    }
    if !is_isometry_ban(f)? {
        return usage("extend_along_eps_isometry: f must be an isometry");
    }
    let eps = h.isometry_defect()?;
    let (u, v) = if eps.is_zero() {
        (LinMap::identity(h.cod()), h.clone())
    } else {
        let sq = eps_pushout_ban(h, &LinMap::identity(h.dom()), &eps)?;
        (sq.g1, sq.g2)
    };
    let (stage, f2, attached) = oracle.extend_isometry(ch, s, f, &v, min_stage)?;
    let map = f2.compose(&u)?;
    let slack = map.compose(h)?.minus(&ch.composite(s, stage)?.compose(f)?)?.op_norm();
    Ok(Extension { stage, map, eps, delta: delta.clone(), slack, attached })
}

/// One step of the back-and-forth: `f_n: K_{i_n} -> L_{j_n}`, `g_n: L_{j_n}
/// -> K_{i_{n+1}}`, with `star = ‖g_n f_n − k_{i_n,i_{n+1}}‖` and
/// `star_star = ‖f_{n+1} g_n − l_{j_n,j_{n+1}}‖`.
#[derive(Clone, Debug)]
pub struct BnFState {
    pub n: usize,
    pub i_n: usize,
    pub j_n: usize,
    /// `i_{n+1}`, the stage `g_n` lands in.
    pub i_next: usize,
    /// `j_{n+1}`, when `f_{n+1}` was reached.
    pub j_next: Option<usize>,
    pub f_n: LinMap,
    pub g_n: LinMap,
    pub star: Q,
    pub star_star: Option<Q>,
}

impl BnFState {
    pub fn bound(&self) -> Q {
        Q::new(2.into(), (self.n as i64 + 1).into())
    }

    pub fn ok(&self) -> bool {
        let b = self.bound();
        self.star <= b && self.star_star.as_ref().is_none_or(|v| *v <= b)
    }
}

#[derive(Clone, Debug)]
pub struct BnFRun {
    pub steps: usize,
    pub states: Vec<BnFState>,
    /// Last maps produced, `f_{N+1}` when the run completed.
    pub last_f: Option<LinMap>,
    pub failure: Option<String>,
}

impl BnFRun {
    pub fn complete(&self) -> bool {
        self.failure.is_none() && self.states.len() == self.steps && self.states.iter().all(|s| s.star_star.is_some())
    }

    pub fn passed(&self) -> bool {
        self.complete() && self.states.iter().all(BnFState::ok)
    }

    /// One line per recorded bound, then a summary line.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for s in &self.states {
            let b = s.bound();
            let line = |name: &str, v: &Q| {
                format!("n={} {name} value={} bound={} {}\n", s.n, format_q(v), format_q(&b), if *v <= b { "OK" } else { "FAIL" })
            };
            out.push_str(&line("(*)", &s.star));
            if let Some(v) = &s.star_star {
                out.push_str(&line("(**)", v));
            }
        }
        match &self.failure {
            Some(msg) => out.push_str(&format!("# PARTIAL after {} steps: {msg}\n", self.states.len())),
            None => out.push_str(&format!("# steps={} {}\n", self.steps, if self.passed() { "PASS" } else { "FAIL" })),
        }
        out
    }
}

/// Runs `steps` rounds of the back-and-forth between chains starting at the
/// zero space, extending them through the oracles as needed. Stage indices
/// advance by at least one per step until the top is reached.
pub fn back_and_forth(
    ch_k: &mut BanChain,
    ch_l: &mut BanChain,
    oracle_k: &mut ExtensionOracle,
    oracle_l: &mut ExtensionOracle,
    steps: usize,
) -> Result<BnFRun> {
    if ch_k.stage(0).dim() != 0 || ch_l.stage(0).dim() != 0 {
        return usage("back_and_forth: chains must start at the zero space");
    }
    let mut run = BnFRun { steps, states: Vec::new(), last_f: None, failure: None };
    let mut j = 0usize;
    let mut i_next = 0usize;
    let mut g = LinMap::identity(ch_l.stage(0)).retarget(ch_l.stage(0).clone(), ch_k.stage(0).clone())?;
    let mut pending: Option<(usize, LinMap, Q)> = None;
    for n in 0..=steps {
        let outcome = (|| -> Result<()> {
            let eps = Q::new(1.into(), (n as i64 + 1).into());
            let delta = &eps / Q::from_integer(2.into());
            // t: K_{i_{n+1}} -> L with t g_n close to l_{j_n}.
            let id_l = LinMap::identity(ch_l.stage(j));
            let t = extend_along_eps_isometry(&g, &id_l, j, ch_l, oracle_l, &delta, j)?;
            let t_top = ch_l.composite(t.stage, ch_l.top_index())?.compose(&t.map)?;
            let min_l = (j + 1).min(ch_l.top_index());
            let fc = factor_through_stage(ch_l, &t_top, &eps, min_l)?;
            let j_next = fc.stage;
            let f_next = fc.factor;
            let ss = f_next.compose(&g)?.minus(&ch_l.composite(j, j_next)?)?.op_norm();
            if let Some((i_n, f_n, star)) = pending.take() {
                run.states.push(BnFState { n, i_n, j_n: j, i_next, j_next: Some(j_next), f_n, g_n: g.clone(), star, star_star: Some(ss) });
            }
            j = j_next;
            if n == steps {
                run.last_f = Some(f_next);
                return Ok(());
            }
            // t': L_{j_{n+1}} -> K with t' f_{n+1} close to k_{i_{n+1}}.
            let eps2 = Q::new(1.into(), (n as i64 + 2).into());
            let delta2 = &eps2 / Q::from_integer(2.into());
            let id_k = LinMap::identity(ch_k.stage(i_next));
            let t2 = extend_along_eps_isometry(&f_next, &id_k, i_next, ch_k, oracle_k, &delta2, i_next)?;
            let t2_top = ch_k.composite(t2.stage, ch_k.top_index())?.compose(&t2.map)?;
            let min_k = (i_next + 1).min(ch_k.top_index());
            let gc = factor_through_stage(ch_k, &t2_top, &eps2, min_k)?;
            let star = gc.factor.compose(&f_next)?.minus(&ch_k.composite(i_next, gc.stage)?)?.op_norm();
            pending = Some((i_next, f_next, star));
            i_next = gc.stage;
            g = gc.factor;
            Ok(())
        })();
        if let Err(e) = outcome {
            if let Some((i_n, f_n, star)) = pending.take() {
                run.states.push(BnFState { n, i_n, j_n: j, i_next, j_next: None, f_n, g_n: g.clone(), star, star_star: None });
            }
            run.failure = Some(e.to_string());
            break;
        }
    }
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::super::linalg::{q, qi};
    use num_traits::One;

    use super::super::chain::saturation_chain;
    use super::super::space::PolyNormedSpace;
    use super::*;

    fn twin(first: PolyNormedSpace, second: PolyNormedSpace) -> BanChain {
        let z = PolyNormedSpace::zero();
        let cat = vec![LinMap::zero(&z, &first), LinMap::zero(&z, &second)];
        saturation_chain(z, &cat, 1, 1, 4).unwrap().0
    }

    #[test]
    fn extension_of_scaled_line() {
        let line = PolyNormedSpace::line();
        let mut ch = BanChain::new(line.clone());
        let h = LinMap::identity(&line).scaled(&(Q::one() + q(1, 4)).recip());
        let mut o = ExtensionOracle::new(50, 1);
        let ext = extend_along_eps_isometry(&h, &LinMap::identity(&line), 0, &mut ch, &mut o, &q(1, 10), 0).unwrap();
        assert_eq!(ext.eps, q(1, 5));
        assert!(ext.ok());
        assert!(is_isometry_ban(&ext.map).unwrap());
    }

    #[test]
    fn zero_chains_give_zero_bounds() {
        let mut k = BanChain::zero();
        let mut l = BanChain::zero();
        let (mut ok, mut ol) = (ExtensionOracle::new(10, 0), ExtensionOracle::new(10, 0));
        let run = back_and_forth(&mut k, &mut l, &mut ok, &mut ol, 3).unwrap();
        assert!(run.passed(), "{}", run.report());
        assert!(run.states.iter().all(|s| s.star.is_zero()));
    }

    #[test]
    fn twin_chains_align() {
        let mut k = twin(PolyNormedSpace::line(), PolyNormedSpace::hexagon());
        let mut l = twin(PolyNormedSpace::hexagon(), PolyNormedSpace::line());
        assert_eq!(k.top().dim(), 3);
        let (mut ok, mut ol) = (ExtensionOracle::new(400, 0), ExtensionOracle::new(400, 0));
        let run = back_and_forth(&mut k, &mut l, &mut ok, &mut ol, 3).unwrap();
        assert!(run.passed(), "{}", run.report());
        assert_eq!(run.report().lines().filter(|l| l.starts_with("n=")).count(), 6);
        assert_eq!(run.states[2].star, qi(0));
    }
}
