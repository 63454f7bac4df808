//! Subcommands on finite metric spaces.

use metcat_core::approx::{self, cotensor_via_pullbacks, factorize as factor_map};
use metcat_core::inject::{is_approx_injective, weak_reflection, MorphismClass, ReflectionOptions};
use metcat_core::text::Writer;
use metcat_core::{colimit_chain, hom_distance, is_isometry, ExtDist, MetSpace, NonexpMap, Result};
use metcat_oracle::{
    enumerate_hom, find_isometry, grid_values, shortest_path_oracle, space_grid, verify_eps_coequalizer,
    verify_eps_equalizer, verify_eps_pullback, verify_square, UniversalityReport,
};

use crate::report::Report;
use crate::{Ctx, Outcome};

/// Competitors used by `--audit` have at most this many points.
const AUDIT_POINTS: usize = 2;
/// Largest hom-set the oracles enumerate.
const HOM_CAP: u64 = 1 << 20;

fn competitors(points: usize) -> Vec<MetSpace> {
    space_grid(points, &grid_values())
}

fn class_of(ctx: &Ctx, names: &[String]) -> Result<MorphismClass> {
    let members = names.iter().map(|n| ctx.doc.map(n).cloned()).collect::<Result<Vec<_>>>()?;
    Ok(MorphismClass::new(members))
}

fn universality(rep: &mut Report, u: &UniversalityReport) {
    for v in &u.violations {
        rep.note(v);
    }
    rep.check("audit universality", u.passed(), format!("competitors={}", u.competitors));
}

/// Min over extensions and max over maps of the extension error, by brute force.
fn oracle_deficiency(x: &MetSpace, h: &NonexpMap) -> Result<ExtDist> {
    let fs = enumerate_hom(h.dom(), x, HOM_CAP)?.maps;
    let gs = enumerate_hom(h.cod(), x, HOM_CAP)?.maps;
    let mut worst = ExtDist::ZERO;
    for f in &fs {
        let best = gs
            .iter()
            .map(|g| {
                let gh = metcat_oracle::hom::compose(g, h.assignment());
                metcat_oracle::hom::sup_distance(x, &gh, f)
            })
            .min()
            .unwrap_or(ExtDist::Inf);
        worst = worst.max(best);
    }
    Ok(worst)
}

pub fn met_colimit(ctx: &Ctx, name: &str) -> Result<Outcome> {
    let ch = ctx.doc.chain(name)?;
    let col = colimit_chain(ch)?;
    let mut w = Writer::new();
    w.space("colim", &col.apex);
    for (i, leg) in col.legs.iter().enumerate() {
        w.map(&format!("leg{i}"), leg);
    }
    let mut rep = Report::new();
    let commutes = ch
        .links()
        .iter()
        .enumerate()
        .map(|(i, k)| col.legs[i + 1].compose(k).map(|c| c == col.legs[i]))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    rep.check("cocone", commutes, format!("stages={} points={}", ch.len(), col.apex.len()));
    if ctx.audit {
        let mut offsets = Vec::new();
        let mut edges = Vec::new();
        let mut n = 0;
        for st in ch.stages() {
            offsets.push(n);
            for x in 0..st.len() {
                for y in x + 1..st.len() {
                    if st.d(x, y).is_finite() {
                        edges.push((n + x, n + y, st.d(x, y)));
                    }
                }
            }
            n += st.len();
        }
        for (s, k) in ch.links().iter().enumerate() {
            for x in 0..k.dom().len() {
                edges.push((offsets[s] + x, offsets[s + 1] + k.apply(x), ExtDist::ZERO));
            }
        }
        let t = shortest_path_oracle(n, &edges);
        let mut agree = true;
        for (s, a) in ch.stages().iter().enumerate() {
            for (u, b) in ch.stages().iter().enumerate() {
                for x in 0..a.len() {
                    for y in 0..b.len() {
                        let got = col.apex.d(col.legs[s].apply(x), col.legs[u].apply(y));
                        agree &= got == t[offsets[s] + x][offsets[u] + y];
                    }
                }
            }
        }
        rep.check("audit paths", agree, format!("nodes={n}"));
    }
    Ok(Outcome { doc: w.finish(), report: rep })
}

pub fn eps_pushout(ctx: &Ctx, f1: &str, f2: &str, eps: ExtDist) -> Result<Outcome> {
    let (f1, f2) = (ctx.doc.map(f1)?, ctx.doc.map(f2)?);
    let sq = approx::eps_pushout(f1, f2, eps)?;
    let mut w = Writer::new();
    w.space("P", sq.apex());
    w.map("g1", &sq.g1);
    w.map("g2", &sq.g2);
    let mut rep = Report::new();
    let slack = sq.slack()?;
    rep.check("slack", slack <= eps, format!("value={slack} eps={eps}"));
    if ctx.audit {
        universality(&mut rep, &verify_square(&sq, &competitors(AUDIT_POINTS), HOM_CAP)?);
    }
    Ok(Outcome { doc: w.finish(), report: rep })
}

pub fn eps_coequalizer(ctx: &Ctx, u: &str, v: &str, eps: ExtDist) -> Result<Outcome> {
    let (u, v) = (ctx.doc.map(u)?, ctx.doc.map(v)?);
    let c = approx::eps_coequalizer(u, v, eps)?;
    let mut w = Writer::new();
    w.space("Q", c.cod());
    w.map("c", &c);
    let mut rep = Report::new();
    let slack = hom_distance(&c.compose(u)?, &c.compose(v)?)?;
    rep.check("slack", slack <= eps, format!("value={slack} eps={eps}"));
    if ctx.audit {
        universality(&mut rep, &verify_eps_coequalizer(u, v, &c, eps, &competitors(AUDIT_POINTS), HOM_CAP)?);
    }
    Ok(Outcome { doc: w.finish(), report: rep })
}

pub fn cotensor(ctx: &Ctx, m: &str, l: &str) -> Result<Outcome> {
    let (m, l) = (ctx.doc.space(m)?, ctx.doc.space(l)?);
    let direct = approx::cotensor(m, l);
    let built = cotensor_via_pullbacks(m, l)?;
    let mut w = Writer::new();
    w.space("cotensor", &direct);
    let mut rep = Report::new();
    rep.check("pullbacks", find_isometry(&direct, &built).is_some(), format!("points={}", direct.len()));
    if ctx.audit {
        let maps = enumerate_hom(m, l, HOM_CAP)?.maps;
        let labels = (0..maps.len()).map(|i| format!("h{i}")).collect();
        let oracle = MetSpace::from_fn(labels, |i, j| metcat_oracle::hom::sup_distance(l, &maps[i], &maps[j]))?;
        rep.check("audit hom-space", find_isometry(&direct, &oracle).is_some(), format!("maps={}", maps.len()));
    }
    Ok(Outcome { doc: w.finish(), report: rep })
}

pub fn factorize(ctx: &Ctx, name: &str) -> Result<Outcome> {
    let f = ctx.doc.map(name)?;
    let p = factor_map(f);
    let mut w = Writer::new();
    w.space("image", p.e.cod());
    w.map("e", &p.e);
    w.map("m", &p.m);
    let mut rep = Report::new();
    rep.check("composite", p.m.compose(&p.e)? == *f, "m.e=f");
    rep.check("surjective", p.e.is_surjective(), format!("image={}", p.e.cod().len()));
    rep.check("isometry", is_isometry(&p.m), "m");
    if ctx.audit {
        let mut image: Vec<usize> = f.assignment().to_vec();
        image.sort_unstable();
        image.dedup();
        let (img, cod) = (p.m.dom(), f.cod());
        let preserved = (0..img.len()).all(|a| (0..img.len()).all(|b| img.d(a, b) == cod.d(p.m.apply(a), p.m.apply(b))));
        rep.check("audit image", p.m.assignment() == image && preserved, format!("points={}", image.len()));
    }
    Ok(Outcome { doc: w.finish(), report: rep })
}

pub fn inject_check(ctx: &Ctx, space: &str, class: &[String], eps: ExtDist) -> Result<Outcome> {
    let x = ctx.doc.space(space)?;
    let class = class_of(ctx, class)?;
    let (ok, worst) = is_approx_injective(x, &class, eps)?;
    let mut w = Writer::new();
    w.space(space, x);
    let worst_d = worst.as_ref().map_or(ExtDist::ZERO, |wst| wst.deficiency);
    if let Some(wst) = &worst {
        w.map("worst", &wst.f);
    }
    let mut rep = Report::new();
    let h = worst.as_ref().map_or(0, |wst| wst.h);
    rep.check("injective", ok, format!("h={h} deficiency={worst_d} eps={eps}"));
    if ctx.audit {
        let mut max = ExtDist::ZERO;
        for h in &class.members {
            max = max.max(oracle_deficiency(x, h)?);
        }
        rep.check("audit deficiency", max == worst_d, format!("value={max}"));
    }
    Ok(Outcome { doc: w.finish(), report: rep })
}

pub fn weak_reflect(ctx: &Ctx, space: &str, class: &[String], n_max: u32, rounds: u32, audit_cap: u64) -> Result<Outcome> {
    let k = ctx.doc.space(space)?;
    let class = class_of(ctx, class)?;
    let opts = ReflectionOptions { n_max, rounds, audit_cap: ctx.audit.then_some(audit_cap) };
    let wr = weak_reflection(k, &class, opts)?;
    let mut w = Writer::new();
    w.map("eta", &wr.reflection);
    let mut rep = Report::new();
    let cert = &wr.certificate;
    rep.raw(&cert.report(), cert.passed());
    if ctx.audit && !cert.audit_skipped {
        let k_hat = wr.reflection.cod();
        let mut agree = true;
        for r in &cert.residuals {
            let h = &class.members[r.h];
            let gs = enumerate_hom(h.cod(), k_hat, HOM_CAP)?.maps;
            let best = gs
                .iter()
                .map(|g| {
                    let gh = metcat_oracle::hom::compose(g, h.assignment());
                    metcat_oracle::hom::sup_distance(k_hat, &gh, r.f.assignment())
                })
                .min()
                .unwrap_or(ExtDist::Inf);
            agree &= best == r.deficiency;
        }
        rep.check("audit residuals", agree, format!("pairs={}", cert.residuals.len()));
    }
    Ok(Outcome { doc: w.finish(), report: rep })
}

#[derive(Clone, Copy, Debug)]
pub enum VerifyKind {
    Pushout,
    Coequalizer,
    Equalizer,
    Pullback,
}

pub fn verify(ctx: &Ctx, kind: VerifyKind, first: &str, second: &str, eps: ExtDist, points: usize) -> Result<Outcome> {
    let (a, b) = (ctx.doc.map(first)?, ctx.doc.map(second)?);
    let comps = competitors(points);
    let mut w = Writer::new();
    let u = match kind {
        VerifyKind::Pushout => {
            let sq = approx::eps_pushout(a, b, eps)?;
            w.map("g1", &sq.g1);
            w.map("g2", &sq.g2);
            verify_square(&sq, &comps, HOM_CAP)?
        }
        VerifyKind::Coequalizer => {
            let c = approx::eps_coequalizer(a, b, eps)?;
            w.map("c", &c);
            verify_eps_coequalizer(a, b, &c, eps, &comps, HOM_CAP)?
        }
        VerifyKind::Equalizer => {
            let e = approx::eps_equalizer(a, b, eps)?;
            w.map("e", &e);
            verify_eps_equalizer(a, b, &e, eps, &comps, HOM_CAP)?
        }
        VerifyKind::Pullback => {
            let span = approx::eps_pullback(a, b, eps)?;
            w.map("p1", &span.p1);
            w.map("p2", &span.p2);
            verify_eps_pullback(a, b, &span, eps, &comps, HOM_CAP)?
        }
    };
    let mut rep = Report::new();
    let text = u.to_string();
    let body: Vec<&str> = text.lines().collect();
    rep.raw(&body[..body.len() - 1].join("\n"), u.passed());
    Ok(Outcome { doc: w.finish(), report: rep })
}
