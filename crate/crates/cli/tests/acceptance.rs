//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use metcat_core::approx::{
    check_sharp_sharp, cotensor, cotensor_via_pullbacks, diagonal_fill_in, eps_coequalizer, eps_equalizer,
    eps_isometry_via_pushout, eps_pullback, eps_pushout, factorize,
};
use metcat_core::ban::linalg::{q, qi};
use metcat_core::ban::{
    eps_pushout_leg_isometry_ban, is_eps_isometry_ban, l1_coproduct, sample_contractions, BanChain, LinMap, Matrix,
    PolyNormedSpace, Q,
};
use metcat_core::inject::{smallness_witness, smallness_witness_in, weak_reflection, MorphismClass, ReflectionOptions, Smallness};
use metcat_core::text::Writer;
use metcat_core::{
    colimit_chain, final_pseudometric, hom_set, is_isometry, Cocone, ExtDist, FiniteChain, MetSpace, NonexpMap,
    Rational,
};
use metcat_oracle::classical;
use metcat_oracle::iso::{iso_under_colimit_legs, iso_under_limit_legs};
use metcat_oracle::{
    enumerate_hom, find_isometry, grid_values, lp_bracket, shortest_path_oracle, space_grid, verify_eps_coequalizer,
    verify_eps_equalizer, verify_eps_pullback, verify_square,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const CAP: u64 = 1 << 22;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn d(n: i64, m: i64) -> ExtDist {
    ExtDist::ratio(n, m)
}

/// Spaces of up to three points, then every fifth four-point space.
fn sweep_objects() -> Vec<MetSpace> {
    let all = space_grid(4, &grid_values());
    let mut out: Vec<MetSpace> = all.iter().filter(|s| s.len() <= 3).cloned().collect();
    out.extend(all.iter().filter(|s| s.len() == 4).step_by(5).cloned());
    out
}

fn small_objects() -> Vec<MetSpace> {
    space_grid(2, &grid_values())
}

/// First, middle and last elements.
fn spread<T: Clone>(v: &[T]) -> Vec<T> {
    let mut idx = vec![0, v.len() / 2, v.len().saturating_sub(1)];
    idx.dedup();
    idx.into_iter().filter(|&i| i < v.len()).map(|i| v[i].clone()).collect()
}

fn parallel_pairs() -> Vec<(NonexpMap, NonexpMap)> {
    let mut out = Vec::new();
    for a in small_objects() {
        for b in sweep_objects() {
            let hs = hom_set(&a, &b);
            let picks = spread(&hs);
            for u in &picks {
                for v in &picks {
                    out.push((u.clone(), v.clone()));
                }
            }
        }
    }
    out
}

fn spans() -> Vec<(NonexpMap, NonexpMap)> {
    let objs: Vec<MetSpace> = sweep_objects().into_iter().filter(|s| s.len() <= 3).collect();
    let mut out = Vec::new();
    for a in small_objects() {
        for (i, b1) in objs.iter().enumerate() {
            for b2 in objs.iter().skip(i).step_by(3) {
                let (h1, h2) = (hom_set(&a, b1), hom_set(&a, b2));
                for f1 in [h1.first(), h1.last()].into_iter().flatten() {
                    for f2 in [h2.first(), h2.last()].into_iter().flatten() {
                        out.push((f1.clone(), f2.clone()));
                    }
                }
            }
        }
    }
    out
}

fn cospans() -> Vec<(NonexpMap, NonexpMap)> {
    let mut out = Vec::new();
    let smalls = small_objects();
    for c in sweep_objects().into_iter().filter(|s| s.len() <= 3) {
        for (i, a) in smalls.iter().enumerate() {
            for b in &smalls[i..] {
                let (h1, h2) = (hom_set(a, &c), hom_set(b, &c));
                for u in spread(&h1) {
                    for v in spread(&h2) {
                        out.push((u.clone(), v));
                    }
                }
            }
        }
    }
    out
}

fn two_point_maps(eps: ExtDist) -> (NonexpMap, NonexpMap) {
    let one = MetSpace::point();
    let two = MetSpace::two_point(eps);
    (NonexpMap::constant(&one, &two, 0), NonexpMap::constant(&one, &two, 1))
}

fn c1_eps_coequalizer() -> Outcome {
    for eps in [d(1, 2), d(1, 1), d(2, 1)] {
        let (u, v) = two_point_maps(eps);
        let half = eps.scale(Rational::new(1, 2));
        let c = eps_coequalizer(&u, &v, half).map_err(e2s)?;
        let q = c.cod();
        if q.len() != 2 || q.d(0, 1) != half || c.assignment() != [0, 1] {
            return fail(format!("eps={eps}: got {q:?}"));
        }
    }
    Ok("eps in {1/2,1,2}".into())
}

fn c2_eps_pushout() -> Outcome {
    let one = MetSpace::point();
    let id = NonexpMap::identity(&one);
    for eps in [d(1, 4), d(1, 1)] {
        let sq = eps_pushout(&id, &id, eps).map_err(e2s)?;
        let p = sq.apex();
        if p.len() != 2 || p.d(0, 1) != eps {
            return fail(format!("eps={eps}: got {p:?}"));
        }
    }
    Ok("eps in {1/4,1}".into())
}

fn c3_universality() -> Outcome {
    let comps = space_grid(3, &grid_values());
    let eps_set = [ExtDist::ZERO, d(1, 2), d(1, 1)];
    let mut checked = 0usize;
    let mut competitors = 0usize;
    for eps in eps_set {
        for (u, v) in parallel_pairs() {
            let c = eps_coequalizer(&u, &v, eps).map_err(e2s)?;
            let r = verify_eps_coequalizer(&u, &v, &c, eps, &comps, CAP).map_err(e2s)?;
            if !r.passed() {
                return fail(format!("coequalizer eps={eps} u={:?} v={:?}:\n{r}", u.assignment(), v.assignment()));
            }
            let e = eps_equalizer(&u, &v, eps).map_err(e2s)?;
            let r2 = verify_eps_equalizer(&u, &v, &e, eps, &comps, CAP).map_err(e2s)?;
            if !r2.passed() {
                return fail(format!("equalizer eps={eps}:\n{r2}"));
            }
            checked += 2;
            competitors += r.competitors + r2.competitors;
        }
        for (f1, f2) in spans() {
            let sq = eps_pushout(&f1, &f2, eps).map_err(e2s)?;
            let r = verify_square(&sq, &comps, CAP).map_err(e2s)?;
            if !r.passed() {
                return fail(format!("pushout eps={eps}:\n{r}"));
            }
            checked += 1;
            competitors += r.competitors;
        }
        for (u, v) in cospans() {
            let span = eps_pullback(&u, &v, eps).map_err(e2s)?;
            let r = verify_eps_pullback(&u, &v, &span, eps, &comps, CAP).map_err(e2s)?;
            if !r.passed() {
                return fail(format!("pullback eps={eps}:\n{r}"));
            }
            checked += 1;
            competitors += r.competitors;
        }
    }
    Ok(format!("{checked} constructions, {competitors} competitor cocones/cones, one mediator each"))
}

fn c4_classical() -> Outcome {
    let z = ExtDist::ZERO;
    let mut n = 0usize;
    for (u, v) in parallel_pairs() {
        let c = eps_coequalizer(&u, &v, z).map_err(e2s)?;
        let k = classical::coequalizer(&u, &v);
        if !iso_under_colimit_legs(c.cod(), &k.apex, &[c.assignment()], &[&k.legs[0]]) {
            return fail(format!("coequalizer u={:?} v={:?}", u.assignment(), v.assignment()));
        }
        let e = eps_equalizer(&u, &v, z).map_err(e2s)?;
        let k = classical::equalizer(&u, &v);
        if !iso_under_limit_legs(e.dom(), &k.apex, &[e.assignment()], &[&k.legs[0]]) {
            return fail("equalizer");
        }
        n += 2;
    }
    for (f1, f2) in spans() {
        let sq = eps_pushout(&f1, &f2, z).map_err(e2s)?;
        let k = classical::pushout(&f1, &f2);
        if !iso_under_colimit_legs(sq.apex(), &k.apex, &[sq.g1.assignment(), sq.g2.assignment()], &[&k.legs[0], &k.legs[1]]) {
            return fail(format!("pushout f1={:?} f2={:?}", f1.assignment(), f2.assignment()));
        }
        n += 1;
    }
    for (u, v) in cospans() {
        let s = eps_pullback(&u, &v, z).map_err(e2s)?;
        let k = classical::pullback(&u, &v);
        if !iso_under_limit_legs(&s.apex, &k.apex, &[s.p1.assignment(), s.p2.assignment()], &[&k.legs[0], &k.legs[1]]) {
            return fail("pullback");
        }
        n += 1;
    }
    Ok(format!("{n} instances match classical (co)limits"))
}

fn c5_cotensor() -> Outcome {
    let g = space_grid(3, &grid_values());
    let mut n = 0;
    for m in &g {
        for l in &g {
            let a = cotensor(m, l);
            let b = cotensor_via_pullbacks(m, l).map_err(e2s)?;
            if find_isometry(&a, &b).is_none() {
                return fail(format!("M={m:?} L={l:?}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} pairs"))
}

fn c6_factorization() -> Outcome {
    let objs = sweep_objects();
    let mut factored = 0usize;
    for a in &objs {
        for b in &objs {
            for f in hom_set(a, b) {
                let p = factorize(&f);
                if p.m.compose(&p.e).map_err(e2s)? != f || !p.e.is_surjective() || !is_isometry(&p.m) {
                    return fail(format!("factorize {:?}", f.assignment()));
                }
                factored += 1;
            }
        }
    }
    let g3 = space_grid(3, &grid_values());
    let mut surj = Vec::new();
    let mut isos = Vec::new();
    for a in &g3 {
        for b in &g3 {
            for h in hom_set(a, b) {
                if h.is_surjective() {
                    surj.push(h.clone());
                }
                if is_isometry(&h) {
                    isos.push(h);
                }
            }
        }
    }
    let mut squares = 0usize;
    for e in &surj {
        for m in &isos {
            let fs = hom_set(e.dom(), m.dom());
            let gs = hom_set(e.cod(), m.cod());
            for f in &fs {
                let mf = m.compose(f).map_err(e2s)?;
                for g in &gs {
                    if g.compose(e).map_err(e2s)? != mf {
                        continue;
                    }
                    squares += 1;
                    let dgn = diagonal_fill_in(e, m, f, g).map_err(e2s)?;
                    if dgn.compose(e).map_err(e2s)? != *f || m.compose(&dgn).map_err(e2s)? != *g {
                        return fail("diagonal does not commute");
                    }
                    let count = enumerate_hom(e.cod(), m.dom(), CAP)
                        .map_err(e2s)?
                        .maps
                        .iter()
                        .filter(|x| {
                            e.assignment().iter().map(|&p| x[p]).eq(f.assignment().iter().copied())
                                && x.iter().map(|&p| m.apply(p)).eq(g.assignment().iter().copied())
                        })
                        .count();
                    if count != 1 {
                        return fail(format!("{count} diagonals"));
                    }
                }
            }
        }
    }
    Ok(format!("{factored} factorizations, {squares} squares with a unique diagonal"))
}

fn c7_sharp_sharp() -> Outcome {
    let g = space_grid(3, &grid_values());
    let mut n = 0;
    let mut both = [0usize; 2];
    for a in &g {
        for b in &g {
            for f in hom_set(a, b) {
                for eps in [d(1, 4), d(1, 2), d(1, 1)] {
                    let lhs = check_sharp_sharp(a, b, f.assignment(), eps.scale(Rational::from_integer(2)));
                    let rhs = eps_isometry_via_pushout(&f, eps).map_err(e2s)?;
                    if lhs != rhs {
                        return fail(format!("f={:?} eps={eps}: sharp={lhs} pushout={rhs}", f.assignment()));
                    }
                    both[lhs as usize] += 1;
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} cases ({} hold, {} fail)", both[1], both[0]))
}

fn ban_spaces() -> Vec<PolyNormedSpace> {
    vec![PolyNormedSpace::line(), PolyNormedSpace::l1(2), PolyNormedSpace::linf(2), PolyNormedSpace::hexagon()]
}

/// Matrices with entries in {-1, -1/2, 0, 1/2, 1}, every `stride`-th.
fn grid_matrices(rows: usize, cols: usize, stride: usize) -> Vec<Matrix> {
    let vals = [q(-1, 1), q(-1, 2), qi(0), q(1, 2), qi(1)];
    let n = rows * cols;
    let total = vals.len().pow(n as u32);
    (0..total)
        .step_by(stride)
        .map(|mut k| {
            let mut entries = vec![vec![qi(0); cols]; rows];
            for idx in 0..n {
                entries[idx / cols][idx % cols] = vals[k % vals.len()].clone();
                k /= vals.len();
            }
            Matrix::from_rows(rows, cols, entries)
        })
        .collect()
}

fn c8_ban_sharp() -> Outcome {
    let mut maps = Vec::new();
    for a in ban_spaces() {
        for b in ban_spaces() {
            let stride = if a.dim() * b.dim() == 4 { 37 } else { 3 };
            let mut kept = 0;
            for m in grid_matrices(b.dim(), a.dim(), stride) {
                let f = LinMap::new(a.clone(), b.clone(), m).map_err(e2s)?;
                if f.is_contraction() && kept < 5 {
                    maps.push(f);
                    kept += 1;
                }
            }
        }
    }
    if maps.len() < 50 {
        return fail(format!("only {} maps", maps.len()));
    }
    let mut agree = [0usize; 2];
    for f in &maps {
        for eps in [q(1, 4), q(1, 2), qi(1)] {
            let a = is_eps_isometry_ban(f, &eps).map_err(e2s)?;
            let b = eps_pushout_leg_isometry_ban(f, &eps).map_err(e2s)?;
            if a != b {
                return fail(format!("{:?} eps={eps}: sharp={a} pushout={b}", f.matrix()));
            }
            agree[a as usize] += 1;
        }
    }
    Ok(format!("{} maps x 3 eps ({} hold, {} fail)", maps.len(), agree[1], agree[0]))
}

fn metcat(args: &[&str], input: &Path) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_metcat"))
        .arg("--input")
        .arg(input)
        .args(args)
        .output()
        .expect("run metcat");
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    (out.status.code().unwrap_or(-1), stdout + &String::from_utf8_lossy(&out.stderr))
}

fn c9_ban_coequalizer() -> Outcome {
    let dir = tempfile::tempdir().map_err(e2s)?;
    let bs = [PolyNormedSpace::hexagon(), PolyNormedSpace::l1(2), PolyNormedSpace::linf(2)];
    let eps_set = [q(1, 2), q(1, 4), qi(1)];
    let mut total = 0;
    for i in 0..10 {
        let b = &bs[i % 3];
        let a = if i % 2 == 0 { PolyNormedSpace::line() } else { PolyNormedSpace::hexagon() };
        let cands = sample_contractions(&a, b, 12);
        let u = &cands[1 + i % (cands.len() - 1)];
        let v = &cands[(3 * i + 2) % cands.len()];
        let eps = &eps_set[i % 3];
        let mut w = Writer::new();
        w.ban_map("u", u);
        w.ban_map("v", v);
        let path = dir.path().join(format!("coeq{i}.txt"));
        std::fs::write(&path, w.finish()).map_err(e2s)?;
        let seed = i.to_string();
        let eps_s = metcat_core::ban::linalg::format_q(eps);
        let args = [
            "verify", "--kind", "ban-coequalizer", "--first", "u", "--second", "v", "--eps", &eps_s, "--samples", "100",
            "--seed", &seed, "--audit",
        ];
        let (code, out) = metcat(&args, &path);
        let ok = out.lines().filter(|l| l.starts_with("sample ") && l.ends_with(" OK")).count();
        if code != 0 || ok != 100 {
            return fail(format!("instance {i}: exit {code}, {ok} samples OK\n{out}"));
        }
        total += ok;
    }
    Ok(format!("{total}/1000 samples factor with norm <= 1"))
}

/// Chains of isometric coordinate embeddings, padded with identities.
fn factor_chains() -> Vec<BanChain> {
    let line = PolyNormedSpace::line();
    let (l1, linf, hex) = (PolyNormedSpace::l1(2), PolyNormedSpace::linf(2), PolyNormedSpace::hexagon());
    let e = |a: &PolyNormedSpace, b: &PolyNormedSpace| {
        LinMap::new(a.clone(), b.clone(), Matrix::from_cols(b.dim(), &(0..a.dim()).map(|j| metcat_core::ban::linalg::unit(b.dim(), j)).collect::<Vec<_>>())).unwrap()
    };
    let (hex3, i1, _) = l1_coproduct(&hex, &line).unwrap();
    let l13 = PolyNormedSpace::l1(3);
    let linf3 = PolyNormedSpace::linf(3);
    let paths: Vec<Vec<LinMap>> = vec![
        vec![e(&line, &l1), e(&l1, &l13)],
        vec![e(&line, &linf), e(&linf, &linf3)],
        vec![e(&line, &hex), i1.clone()],
        vec![LinMap::identity(&l1), e(&l1, &l13), LinMap::identity(&l13)],
        vec![i1.clone(), LinMap::identity(&hex3)],
    ];
    let mut out = Vec::new();
    for (t, links) in paths.into_iter().enumerate() {
        for pad in 0..4 {
            let mut ls = links.clone();
            let top = ls.last().unwrap().cod().clone();
            for _ in 0..(pad + t) % 3 {
                ls.push(LinMap::identity(&top));
            }
            ls.truncate(4);
            let base = ls[0].dom().clone();
            out.push(BanChain::from_links(base, ls).unwrap());
        }
    }
    out
}

fn c10_factor_stage() -> Outcome {
    let dir = tempfile::tempdir().map_err(e2s)?;
    let doms = [PolyNormedSpace::line(), PolyNormedSpace::l1(2), PolyNormedSpace::hexagon()];
    let eps_set = [q(1, 2), q(1, 3), q(1, 4)];
    let chains = factor_chains();
    let mut stages = Vec::new();
    for (i, ch) in chains.iter().enumerate() {
        let a = &doms[i % 3];
        let cands = sample_contractions(a, ch.top(), 16);
        let f = &cands[(5 * i + 1) % cands.len()];
        let mut w = Writer::new();
        w.ban_chain("K", ch);
        w.ban_map("f", f);
        let path = dir.path().join(format!("chain{i}.txt"));
        std::fs::write(&path, w.finish()).map_err(e2s)?;
        let eps = metcat_core::ban::linalg::format_q(&eps_set[i % 3]);
        let (code, out) = metcat(&["ban-factor-stage", "--chain", "K", "--map", "f", "--eps", &eps, "--audit"], &path);
        let audited = out.lines().any(|l| l.starts_with("audit factor ") && l.ends_with(" OK"));
        if code != 0 || !audited || out.lines().last() != Some("PASS") {
            return fail(format!("chain {i}: exit {code}\n{out}"));
        }
        let st = out.lines().find_map(|l| l.strip_prefix("factor stage=")).and_then(|s| s.split(' ').next()).unwrap_or("?");
        stages.push(st.to_string());
    }
    Ok(format!("{} chains audited, stages [{}]", chains.len(), stages.join(",")))
}

fn c11_weak_reflection() -> Outcome {
    let one = MetSpace::point();
    let two = |e: ExtDist| MetSpace::two_point(e);
    let ident = |a: &MetSpace, b: &MetSpace| NonexpMap::new(a.clone(), b.clone(), vec![0, 1]).unwrap();
    let point_in = |e: ExtDist| NonexpMap::constant(&one, &two(e), 0);
    let cases: Vec<(MetSpace, Vec<NonexpMap>, u32, u32)> = vec![
        (one.clone(), vec![ident(&two(ExtDist::Inf), &two(d(1, 1)))], 1, 1),
        (two(d(2, 1)), vec![ident(&two(d(2, 1)), &two(d(1, 1)))], 2, 1),
        (two(d(1, 1)), vec![point_in(d(1, 1))], 3, 2),
        (one.clone(), vec![point_in(d(1, 1))], 2, 3),
        (one.clone(), vec![ident(&two(d(2, 1)), &two(d(1, 1))), point_in(d(1, 2))], 1, 2),
    ];
    let mut tasks = 0;
    for (i, (k, h, n_max, rounds)) in cases.into_iter().enumerate() {
        let wr = weak_reflection(&k, &MorphismClass::new(h), ReflectionOptions { n_max, rounds, audit_cap: None })
            .map_err(e2s)?;
        let cert = &wr.certificate;
        if !cert.passed() || cert.handled.is_empty() {
            return fail(format!("instance {i}:\n{}", cert.report()));
        }
        tasks += cert.handled.len();
    }
    Ok(format!("5 instances, {tasks} handled tasks within 1/n and monotone"))
}

fn c12_smallness() -> Outcome {
    let g = space_grid(3, &grid_values());
    let smalls = small_objects();
    let mut isos: Vec<NonexpMap> = Vec::new();
    for a in &g {
        for b in &g {
            isos.extend(hom_set(a, b).into_iter().filter(is_isometry));
        }
    }
    let mut chains = Vec::new();
    for k in &isos {
        chains.push(FiniteChain::new(vec![k.dom().clone(), k.cod().clone()], vec![k.clone()]).map_err(e2s)?);
        for l in isos.iter().filter(|l| l.dom() == k.cod()).take(2) {
            chains.push(
                FiniteChain::new(vec![k.dom().clone(), k.cod().clone(), l.cod().clone()], vec![k.clone(), l.clone()])
                    .map_err(e2s)?,
            );
        }
    }
    let mut found = 0usize;
    for ch in &chains {
        let col = colimit_chain(ch).map_err(e2s)?;
        for a in &smalls {
            for f in hom_set(a, &col.apex) {
                for eps in [d(1, 4), d(1, 2), d(1, 1)] {
                    match smallness_witness(ch, &f, eps).map_err(e2s)? {
                        Smallness::Found { .. } => found += 1,
                        Smallness::Failed { best } => return fail(format!("finite space failed, best {best}")),
                    }
                }
            }
        }
    }
    // Truncations K_r = {0} ∪ {d + 1/k : k <= r} of a sequence converging to d.
    let dd = Rational::from_integer(1);
    for r in 1..=10i64 {
        let mut stages = Vec::new();
        for s in 1..=r {
            let mut labels = vec!["z".to_string()];
            let mut pos = vec![Rational::from_integer(0)];
            for k in 1..=s {
                labels.push(format!("t{k}"));
                pos.push(dd + Rational::new(1, k));
            }
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            stages.push(MetSpace::on_line(&refs, &pos).map_err(e2s)?);
        }
        let links: Vec<NonexpMap> = stages
            .windows(2)
            .map(|w| NonexpMap::new(w[0].clone(), w[1].clone(), (0..w[0].len()).collect()))
            .collect::<Result<_, _>>()
            .map_err(e2s)?;
        let ch = FiniteChain::new(stages.clone(), links).map_err(e2s)?;
        let mut labels: Vec<String> = stages.last().unwrap().labels().to_vec();
        let mut pos = vec![Rational::from_integer(0)];
        pos.extend((1..=r).map(|k| dd + Rational::new(1, k)));
        labels.push("limit".into());
        pos.push(dd);
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let apex = MetSpace::on_line(&refs, &pos).map_err(e2s)?;
        let legs: Vec<NonexpMap> = stages
            .iter()
            .map(|s| NonexpMap::new(s.clone(), apex.clone(), (0..s.len()).collect()))
            .collect::<Result<_, _>>()
            .map_err(e2s)?;
        let a = MetSpace::two_point(ExtDist::Finite(dd));
        let f = NonexpMap::new(a, apex.clone(), vec![0, apex.len() - 1]).map_err(e2s)?;
        for eps in [d(0, 1), d(1, 4), d(1, 2), d(3, 4), d(99, 100)] {
            match smallness_witness_in(&ch, &legs, &f, eps).map_err(e2s)? {
                Smallness::Failed { best } if best == ExtDist::Finite(dd) => {}
                other => return fail(format!("truncation r={r} eps={eps}: {other:?}")),
            }
        }
    }
    Ok(format!("{} chains, {found} finite witnesses; truncations r<=10 fail with deficiency exactly 1", chains.len()))
}

fn c13_bnf() -> Outcome {
    let dir = tempfile::tempdir().map_err(e2s)?;
    let z = PolyNormedSpace::zero();
    let mut w = Writer::new();
    w.ban_map("a", &LinMap::zero(&z, &PolyNormedSpace::line()));
    w.ban_map("b", &LinMap::zero(&z, &PolyNormedSpace::hexagon()));
    let path = dir.path().join("twin.txt");
    std::fs::write(&path, w.finish()).map_err(e2s)?;
    let (code, out) = metcat(&["gurarii-bnf", "--catalogue", "a,b", "--steps", "8", "--audit"], &path);
    let bounds: Vec<&str> = out.lines().filter(|l| l.starts_with("n=")).collect();
    let all_ok = bounds.iter().all(|l| l.ends_with(" OK"));
    let audited = out.lines().any(|l| l.starts_with("audit bounds") && l.ends_with(" OK"));
    if code != 0 || bounds.len() != 16 || !all_ok || !audited {
        return fail(format!("exit {code}, {} bound lines\n{out}", bounds.len()));
    }
    Ok("N=8, 16 bound lines within 2/(n+1), audit agrees".into())
}

fn c14_dual_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let weights = [d(0, 1), d(1, 4), d(1, 2), d(1, 1), d(2, 1), ExtDist::Inf];
    for inst in 0..200 {
        let n = rng.gen_range(2..=8usize);
        let carrier: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let discrete = MetSpace::from_fn(carrier.clone(), |i, j| if i == j { ExtDist::ZERO } else { ExtDist::Inf })
            .map_err(e2s)?;
        let mut cocone = Cocone::new(carrier);
        cocone.push_map_leg(&discrete, (0..n).collect()).map_err(e2s)?;
        let mut edges = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let k = rng.gen_range(2..=n.min(4));
            let mut pos = Vec::new();
            let mut at = Rational::from_integer(0);
            for _ in 0..k {
                at += Rational::new(rng.gen_range(1..=8), 4);
                pos.push(at);
            }
            let labels: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            let leg = MetSpace::on_line(&refs, &pos).map_err(e2s)?;
            let assign: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
            for x in 0..k {
                for y in x + 1..k {
                    edges.push((assign[x], assign[y], leg.d(x, y)));
                }
            }
            cocone.push_map_leg(&leg, assign).map_err(e2s)?;
        }
        for _ in 0..rng.gen_range(0..=3) {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let w = weights[rng.gen_range(0..weights.len())];
            if w.is_finite() {
                edges.push((x, y, w));
            }
            cocone.push_bridge(x, y, w).map_err(e2s)?;
        }
        let p = final_pseudometric(&cocone).map_err(e2s)?;
        let t = shortest_path_oracle(n, &edges);
        for (i, row) in t.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if p.d(i, j) != *v {
                    return fail(format!("gluing {inst}: d({i},{j}) = {} vs {v}", p.d(i, j)));
                }
            }
        }
    }
    let mut inside = 0;
    for _ in 0..100 {
        let mut gens: Vec<Vec<Q>> = (0..3).map(|i| metcat_core::ban::linalg::unit(3, i)).collect();
        for _ in 0..rng.gen_range(0..=3) {
            let g: Vec<Q> = (0..3).map(|_| qi(rng.gen_range(-2..=2))).collect();
            if g.iter().any(|c| *c != qi(0)) {
                gens.push(g);
            }
        }
        let space = PolyNormedSpace::new(3, gens).map_err(e2s)?;
        let x: Vec<Q> = (0..3).map(|_| q(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect();
        let v = space.norm_eval(&x).map_err(e2s)?;
        let (lo, hi) = lp_bracket(&space, &x, 2);
        if !(lo <= v && v <= hi) {
            return fail(format!("x={x:?}: {v} not in [{lo}, {hi}]"));
        }
        if lo == hi {
            inside += 1;
        }
    }
    Ok(format!("200 gluings agree; 100 norms bracketed ({inside} tight)"))
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "eps-coequalizer of 2_eps is 2_{eps/2}", c1_eps_coequalizer),
        (2, "eps-pushout of 1 <- 1 -> 1 is 2_eps", c2_eps_pushout),
        (3, "universality of eps-(co)limits", c3_universality),
        (4, "eps = 0 agrees with classical (co)limits", c4_classical),
        (5, "cotensor from pullbacks", c5_cotensor),
        (6, "factorization system", c6_factorization),
        (7, "Met eps-isometry equivalence", c7_sharp_sharp),
        (8, "Ban eps-isometry equivalence", c8_ban_sharp),
        (9, "Ban eps-coequalizer universality", c9_ban_coequalizer),
        (10, "factor through a chain stage", c10_factor_stage),
        (11, "weak reflection certificates", c11_weak_reflection),
        (12, "smallness regression pair", c12_smallness),
        (13, "back-and-forth bounds", c13_bnf),
        (14, "dual-oracle agreement", c14_dual_oracles),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let res = run();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{secs:.2}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {why} [{secs:.2}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
