//! Chains of isometries in `Ban`, factorization through a stage, and
//! saturation by ε-pushouts.

use num_traits::{One, Signed, Zero};

use super::constructions::{eps_pushout_ban, is_isometry_ban};
use super::linalg::{canonical_sign, l1, neg, unit, Matrix, Vector, Q};
use super::lp::{minimize, LpOutcome};
use super::map::LinMap;
use super::space::PolyNormedSpace;
use crate::error::{invalid, usage, Error, Result};

/// `K_0 -> K_1 -> ...` with isometric links. Each stage carries a spanning
/// list: its own generators followed by the link image of the previous list.
#[derive(Clone, Debug)]
pub struct BanChain {
    stages: Vec<PolyNormedSpace>,
    links: Vec<LinMap>,
    spanning: Vec<Vec<Vector>>,
}

impl BanChain {
    pub fn new(base: PolyNormedSpace) -> Self {
        let spanning = vec![base.gens().to_vec()];
        BanChain { stages: vec![base], links: Vec::new(), spanning }
    }

    pub fn zero() -> Self {
        Self::new(PolyNormedSpace::zero())
    }

    /// Builds a chain from its links, checking each.
    pub fn from_links(base: PolyNormedSpace, links: Vec<LinMap>) -> Result<Self> {
        let mut ch = Self::new(base);
        for l in links {
            ch.push(l)?;
        }
        Ok(ch)
    }

    /// Appends a link out of the top stage; it must be an isometry.
    pub fn push(&mut self, link: LinMap) -> Result<()> {
        if link.dom() != self.top() {
            return usage("chain link does not start at the top stage");
        }
        if !is_isometry_ban(&link)? {
            return invalid("chain link", "not an isometry");
        }
        let mut span = link.cod().gens().to_vec();
        for v in &self.spanning[self.spanning.len() - 1] {
            let w = link.apply(v);
            if !span.iter().any(|s| canonical_sign(s) == canonical_sign(&w)) {
                span.push(w);
            }
        }
        self.stages.push(link.cod().clone());
        self.links.push(link);
        self.spanning.push(span);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn stages(&self) -> &[PolyNormedSpace] {
        &self.stages
    }

    pub fn links(&self) -> &[LinMap] {
        &self.links
    }

    pub fn stage(&self, i: usize) -> &PolyNormedSpace {
        &self.stages[i]
    }

    pub fn top_index(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn top(&self) -> &PolyNormedSpace {
        &self.stages[self.top_index()]
    }

    pub fn spanning(&self, i: usize) -> &[Vector] {
        &self.spanning[i]
    }

    /// `k_{i,j}: K_i -> K_j` for `i <= j`.
    pub fn composite(&self, i: usize, j: usize) -> Result<LinMap> {
        if i > j || j >= self.len() {
            return usage(format!("no connecting map from stage {i} to stage {j}"));
        }
        let mut m = LinMap::identity(&self.stages[i]);
        for l in &self.links[i..j] {
            m = l.compose(&m)?;
        }
        Ok(m)
    }
}

/// The point `u` of `k(K_i)` nearest to `y` in the norm of `k`'s codomain,
/// as `(u, ‖k u − y‖)`.
fn nearest_preimage(k: &LinMap, y: &[Q]) -> Result<(Vector, Q)> {
    let top = k.cod();
    let (m, d) = (k.dom().dim(), top.dim());
    if d == 0 {
        return Ok((vec![Q::zero(); m], Q::zero()));
    }
    let gens = top.gens();
    let rows: Vec<Vector> = (0..d)
        .map(|c| {
            let mut row: Vector = (0..m).map(|i| k.matrix()[(c, i)].clone()).collect();
            row.extend((0..m).map(|i| -&k.matrix()[(c, i)]));
            row.extend(gens.iter().map(|g| -&g[c]));
            row.extend(gens.iter().map(|g| g[c].clone()));
            row
        })
        .collect();
    let mut cost = vec![Q::zero(); 2 * m];
    cost.extend(std::iter::repeat_n(Q::one(), 2 * gens.len()));
    match minimize(&cost, &rows, y) {
        LpOutcome::Optimal { x, value } => {
            let u = (0..m).map(|i| &x[i] - &x[m + i]).collect();
            Ok((u, value))
        }
        other => Err(Error::Internal(format!("nearest-point LP did not solve: {other:?}"))),
    }
}

/// The record of one factorization `f ≈ k_{i,top} f''`.
#[derive(Clone, Debug)]
pub struct FactorCertificate {
    pub stage: usize,
    pub eps: Q,
    /// `max Σ|a_j|` over the unit ball of the domain, in the standard basis.
    pub r: Q,
    pub delta: Q,
    /// `‖k u_j − f e_j‖` per basis vector.
    pub errors: Vec<Q>,
    pub f_prime: LinMap,
    /// `f'` divided by `1 + ε/2`, or `f'` itself when it already has norm
    /// at most 1; `None` when the zero map was returned because `‖f‖ <= ε`.
    pub rescaled: Option<bool>,
    pub factor: LinMap,
    /// `‖k_{i,top} f'' − f‖`.
    pub distance: Q,
    /// `‖f''‖`.
    pub norm: Q,
}

impl FactorCertificate {
    pub fn ok(&self) -> bool {
        self.distance <= self.eps && self.norm <= Q::one()
    }
}

/// Factors a contraction `f: A -> top` through the earliest stage `i >=
/// min_stage` up to `eps`. Each basis image `f e_j` is matched by the
/// nearest stage vector; a stage qualifies when all matches are within
/// `δ = ε/(2r)`, and then `f''` is `f'` rescaled by `1/(1+ε/2)` if needed.
/// A stage where neither works still qualifies with the zero map if
/// `‖f‖ <= ε`.
pub fn factor_through_stage(ch: &BanChain, f: &LinMap, eps: &Q, min_stage: usize) -> Result<FactorCertificate> {
    if f.cod() != ch.top() {
        return usage("factor_through_stage: map does not land in the top stage");
    }
    if !f.is_contraction() {
        return usage("factor_through_stage: map has norm above 1");
    }
    if !eps.is_positive() && f.dom().dim() > 0 {
        return usage("factor_through_stage: eps must be positive");
    }
    let a = f.dom();
    let n = a.dim();
    let r = a.gens().iter().map(|g| l1(g)).max().unwrap_or_else(Q::zero);
    let half = eps / Q::from_integer(2.into());
    let delta = if r.is_zero() { Q::zero() } else { &half / &r };
    let fnorm = f.op_norm();
    let mut best: Option<Q> = None;
    for i in min_stage.min(ch.top_index())..=ch.top_index() {
        let k = ch.composite(i, ch.top_index())?;
        let mut cols = Vec::with_capacity(n);
        let mut errors = Vec::with_capacity(n);
        for j in 0..n {
            let (u, err) = nearest_preimage(&k, &f.apply(&unit(n, j)))?;
            cols.push(u);
            errors.push(err);
        }
        let worst = errors.iter().max().cloned().unwrap_or_else(Q::zero);
        if best.as_ref().is_none_or(|b| worst < *b) {
            best = Some(worst.clone());
        }
        let stage = ch.stage(i).clone();
        let f_prime = LinMap::new(a.clone(), stage.clone(), Matrix::from_cols(stage.dim(), &cols))?;
        let found = if worst <= delta {
            let big = !f_prime.is_contraction();
            let factor = if big { f_prime.scaled(&(Q::one() + &half).recip()) } else { f_prime.clone() };
            Some((Some(big), factor))
        } else if fnorm <= *eps {
            Some((None, LinMap::zero(a, &stage)))
        } else {
            None
        };
        if let Some((rescaled, factor)) = found {
            let distance = k.compose(&factor)?.minus(f)?.op_norm();
            let norm = factor.op_norm();
            return Ok(FactorCertificate {
                stage: i,
                eps: eps.clone(),
                r,
                delta,
                errors,
                f_prime,
                rescaled,
                factor,
                distance,
                norm,
            });
        }
    }
    Err(Error::Exhausted(format!(
        "no stage factors the map within {}; best basis error {}",
        super::linalg::format_q(eps),
        super::linalg::format_q(&best.unwrap_or_else(Q::zero))
    )))
}

/// Deterministic contractions `A -> K`: the zero map, then maps sending the
/// standard basis of `A` to signed generators of `K`, scaled down to norm 1
/// when needed. At most `limit` maps, without repeats.
pub fn sample_contractions(a: &PolyNormedSpace, k: &PolyNormedSpace, limit: usize) -> Vec<LinMap> {
    let mut out = vec![LinMap::zero(a, k)];
    let signed: Vec<Vector> = k.gens().iter().flat_map(|g| [g.clone(), neg(g)]).collect();
    let n = a.dim();
    if n == 0 || signed.is_empty() {
        out.truncate(limit);
        return out;
    }
    let mut idx = vec![0usize; n];
    while out.len() < limit {
        let cols: Vec<Vector> = idx.iter().map(|&t| signed[t].clone()).collect();
        let mut m = LinMap::new(a.clone(), k.clone(), Matrix::from_cols(k.dim(), &cols)).expect("shapes");
        let norm = m.op_norm();
        if norm > Q::one() {
            m = m.scaled(&norm.recip());
        }
        if !out.contains(&m) {
            out.push(m);
        }
        let mut p = 0;
        loop {
            if p == n {
                return out;
            }
            idx[p] += 1;
            if idx[p] < signed.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
    out
}

/// One attached ε-pushout square.
#[derive(Clone, Debug)]
pub struct AttachRecord {
    pub h: usize,
    pub u: LinMap,
    pub eps: Q,
    pub slack: Q,
    /// Index of the new stage.
    pub stage: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SaturationCertificate {
    pub attached: Vec<AttachRecord>,
    /// Whether tasks were left over when the budget ran out.
    pub truncated: bool,
}

impl SaturationCertificate {
    pub fn ok(&self) -> bool {
        self.attached.iter().all(|a| a.slack <= a.eps)
    }
}

/// One round: for each `h` in the catalogue and each sampled `u: dom h ->
/// top`, attaches the `1/n`-pushout of `u` and `h` as a new link, up to
/// `attach_budget` attachments.
pub fn saturation_step_ban(
    ch: &mut BanChain,
    catalogue: &[LinMap],
    n: u64,
    attach_budget: usize,
) -> Result<SaturationCertificate> {
    if n == 0 {
        return usage("saturation_step_ban: n must be positive");
    }
    for h in catalogue {
        if !is_isometry_ban(h)? {
            return usage("saturation_step_ban: catalogue members must be isometries");
        }
    }
    let eps = Q::new(1.into(), n.into());
    let start = ch.top().clone();
    let mut tasks = Vec::new();
    for (hi, h) in catalogue.iter().enumerate() {
        for u in sample_contractions(h.dom(), &start, attach_budget + 1) {
            tasks.push((hi, u));
        }
    }
    let mut cert = SaturationCertificate { truncated: tasks.len() > attach_budget, ..Default::default() };
    let base = ch.top_index();
    for (hi, u) in tasks.into_iter().take(attach_budget) {
        let u_top = ch.composite(base, ch.top_index())?.compose(&u)?;
        let sq = eps_pushout_ban(&u_top, &catalogue[hi], &eps)?;
        ch.push(sq.g1.clone())?;
        cert.attached.push(AttachRecord { h: hi, u, eps: eps.clone(), slack: sq.slack, stage: ch.top_index() });
    }
    Ok(cert)
}

/// A chain from `base` after `rounds` saturation rounds over the catalogue,
/// in the catalogue's order.
pub fn saturation_chain(
    base: PolyNormedSpace,
    catalogue: &[LinMap],
    rounds: usize,
    n: u64,
    attach_budget: usize,
) -> Result<(BanChain, Vec<SaturationCertificate>)> {
    let mut ch = BanChain::new(base);
    let mut certs = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        certs.push(saturation_step_ban(&mut ch, catalogue, n, attach_budget)?);
    }
    Ok((ch, certs))
}
