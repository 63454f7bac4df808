//! Subcommands on polyhedral Banach spaces.

use metcat_core::ban::linalg::format_q;
use metcat_core::ban::{
    back_and_forth, eps_coequalizer_ban, eps_pushout_ban, factor_through_stage, is_isometry_ban, pushout_ban,
    saturation_chain, ExtensionOracle, LinMap, Matrix, PolyNormedSpace, Q,
};
use metcat_core::text::Writer;
use metcat_core::{Error, Result};
use metcat_oracle::{audit_bnf, audit_factor};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::Report;
use crate::{Ctx, Outcome};

fn oracle_norm(m: &LinMap) -> Q {
    metcat_oracle::ban::op_norm(m)
}

pub fn ban_pushout(ctx: &Ctx, f1: &str, f2: &str) -> Result<Outcome> {
    let (f1, f2) = (ctx.doc.ban_map(f1)?, ctx.doc.ban_map(f2)?);
    let sq = pushout_ban(f1, f2)?;
    let mut w = Writer::new();
    w.ban_space("P", sq.apex());
    w.ban_map("g1", &sq.g1);
    w.ban_map("g2", &sq.g2);
    let mut rep = Report::new();
    rep.check("slack", sq.slack.is_zero(), format!("value={}", format_q(&sq.slack)));
    rep.check("legs", is_isometry_ban(&sq.g1)? && is_isometry_ban(&sq.g2)?, "isometries");
    if ctx.audit {
        let slack = oracle_norm(&sq.g1.compose(f1)?.minus(&sq.g2.compose(f2)?)?);
        let legs = oracle_norm(&sq.g1) <= Q::one() && oracle_norm(&sq.g2) <= Q::one();
        rep.check("audit slack", slack == sq.slack && legs, format!("value={}", format_q(&slack)));
    }
    Ok(Outcome { doc: w.finish(), report: rep })
}

pub fn ban_eps_pushout(ctx: &Ctx, f1: &str, f2: &str, eps: &Q) -> Result<Outcome> {
    let (f1, f2) = (ctx.doc.ban_map(f1)?, ctx.doc.ban_map(f2)?);
    let sq = eps_pushout_ban(f1, f2, eps)?;
    let mut w = Writer::new();
    w.ban_space("P", sq.apex());
    w.ban_map("g1", &sq.g1);
    w.ban_map("g2", &sq.g2);
    let mut rep = Report::new();
    rep.check("slack", sq.slack <= *eps, format!("value={} eps={}", format_q(&sq.slack), format_q(eps)));
    if ctx.audit {
        let slack = oracle_norm(&sq.g1.compose(f1)?.minus(&sq.g2.compose(f2)?)?);
        let legs = oracle_norm(&sq.g1) <= Q::one() && oracle_norm(&sq.g2) <= Q::one();
        rep.check("audit slack", slack == sq.slack && legs, format!("value={}", format_q(&slack)));
    }
    Ok(Outcome { doc: w.finish(), report: rep })
}

pub fn ban_factor_stage(ctx: &Ctx, chain: &str, map: &str, eps: &Q, min_stage: usize) -> Result<Outcome> {
    let (ch, f) = (ctx.doc.ban_chain(chain)?, ctx.doc.ban_map(map)?);
    let cert = factor_through_stage(ch, f, eps, min_stage)?;
    let mut w = Writer::new();
    w.ban_map("factor", &cert.factor);
    let mut rep = Report::new();
    let rescaled = match cert.rescaled {
        Some(true) => "yes",
        Some(false) => "no",
        None => "zero",
    };
    rep.check(
        "factor",
        cert.ok(),
        format!(
            "stage={} r={} delta={} distance={} norm={} rescaled={rescaled}",
            cert.stage,
            format_q(&cert.r),
            format_q(&cert.delta),
            format_q(&cert.distance),
            format_q(&cert.norm)
        ),
    );
    if ctx.audit {
        let a = audit_factor(ch, f, &cert);
        rep.check(
            "audit factor",
            a.passed(eps),
            format!("r={} delta={} distance={} norm={}", format_q(&a.r), format_q(&a.delta), format_q(&a.distance), format_q(&a.norm)),
        );
    }
    Ok(Outcome { doc: w.finish(), report: rep })
}

/// Where the two chains of a back-and-forth come from.
pub enum Chains {
    Given(String, String),
    /// Catalogue names and saturation budget.
    Twin(Vec<String>, usize),
}

pub fn gurarii_bnf(ctx: &Ctx, chains: Chains, steps: usize, search_budget: usize, attach_budget: usize) -> Result<Outcome> {
    let (mut k, mut l) = match chains {
        Chains::Given(k, l) => (ctx.doc.ban_chain(&k)?.clone(), ctx.doc.ban_chain(&l)?.clone()),
        Chains::Twin(names, budget) => {
            let cat = names.iter().map(|n| ctx.doc.ban_map(n).cloned()).collect::<Result<Vec<_>>>()?;
            let rev: Vec<LinMap> = cat.iter().rev().cloned().collect();
            let (k, _) = saturation_chain(PolyNormedSpace::zero(), &cat, 1, 1, budget)?;
            let (l, _) = saturation_chain(PolyNormedSpace::zero(), &rev, 1, 1, budget)?;
            (k, l)
        }
    };
    let mut ok_k = ExtensionOracle::new(search_budget, attach_budget);
    let mut ok_l = ExtensionOracle::new(search_budget, attach_budget);
    let run = back_and_forth(&mut k, &mut l, &mut ok_k, &mut ok_l, steps)?;
    let mut w = Writer::new();
    w.ban_chain("K", &k);
    w.ban_chain("L", &l);
    if let Some(f) = &run.last_f {
        w.ban_map("f_last", f);
    }
    let mut rep = Report::new();
    rep.raw(&run.report(), run.passed());
    if ctx.audit {
        let (vals, agree) = audit_bnf(&k, &l, &run);
        rep.check("audit bounds", agree, format!("values={}", vals.len()));
    }
    Ok(Outcome { doc: w.finish(), report: rep })
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let entries = (0..rows)
        .map(|_| (0..cols).map(|_| Q::new(rng.gen_range(-4i64..=4).into(), 4.into())).collect())
        .collect();
    Matrix::from_rows(rows, cols, entries)
}

/// Samples maps `c': B -> B` with `‖c'‖ <= 1` and `‖c'(u − v)‖ <= ε` and
/// checks that each factors through the ε-coequalizer with norm at most 1.
pub fn verify_ban_coequalizer(ctx: &Ctx, u: &str, v: &str, eps: &Q, samples: usize) -> Result<Outcome> {
    let (u, v) = (ctx.doc.ban_map(u)?, ctx.doc.ban_map(v)?);
    let c = eps_coequalizer_ban(u, v, eps)?;
    let b = u.cod();
    let diff = u.minus(v)?;
    let mut w = Writer::new();
    w.ban_space("Q", c.cod());
    w.ban_map("c", &c);
    let mut rep = Report::new();
    let slack = c.compose(&diff)?.op_norm();
    rep.check("slack", slack <= *eps, format!("value={} eps={}", format_q(&slack), format_q(eps)));
    let invertible = c.matrix().inverse().is_some();
    rep.check("unique", invertible, "coequalizer map is onto");
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let (mut taken, mut tries) = (0usize, 0usize);
    while taken < samples {
        tries += 1;
        if tries > samples * 500 {
            return Err(Error::Exhausted(format!("{taken} of {samples} samples accepted")));
        }
        let cand = LinMap::new(b.clone(), b.clone(), random_matrix(&mut rng, b.dim(), b.dim()))?;
        if !cand.is_contraction() || !cand.compose(&diff)?.op_norm_leq(eps) {
            continue;
        }
        taken += 1;
        // c is the identity matrix, so the mediator has the matrix of c'.
        let med = cand.retarget(c.cod().clone(), b.clone())?;
        let norm = if ctx.audit { oracle_norm(&med) } else { med.op_norm() };
        let commutes = med.compose(&c)? == cand;
        rep.check(&format!("sample {taken}"), commutes && norm <= Q::one(), format!("norm={}", format_q(&norm)));
    }
    rep.note(format!("accepted {taken} of {tries} candidates"));
    Ok(Outcome { doc: w.finish(), report: rep })
}
