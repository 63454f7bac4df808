//! Approximate injectivity, approximately cellular chains, approximate
//! smallness at finite truncation, and the weak reflection by iterated
//! 1/n-pushouts.

use std::fmt::Write as _;
use std::ops::ControlFlow;

use crate::approx::{eps_pushout, function_label, EpsSquare};
use crate::colimit::{colimit_chain, FiniteChain};
use crate::dist::{ExtDist, Rational};
use crate::error::{usage, Result};
use crate::hom::{assign_distance, for_each_hom, hom_distance, hom_set};
use crate::map::NonexpMap;
use crate::space::MetSpace;

/// A finite class `H` of morphisms.
#[derive(Clone, Debug, Default)]
pub struct MorphismClass {
    pub members: Vec<NonexpMap>,
}

impl MorphismClass {
    pub fn new(members: Vec<NonexpMap>) -> Self {
        MorphismClass { members }
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn inv_n(n: u32) -> ExtDist {
    ExtDist::Finite(Rational::new(1, n as i64))
}

/// Best `f'` over `Hom(cod h, X)` together with `d(f' h, f)`; `None` when the
/// hom-set is empty.
pub fn best_extension(h: &NonexpMap, f: &NonexpMap) -> Result<Option<(NonexpMap, ExtDist)>> {
    if h.dom() != f.dom() {
        return usage("injectivity: h and f have different domains");
    }
    let x = f.cod();
    let mut best: Option<(Vec<usize>, ExtDist)> = None;
    for_each_hom(h.cod(), x, |cand| {
        let d = h
            .assignment()
            .iter()
            .zip(f.assignment())
            .map(|(&b, &y)| x.d(cand[b], y))
            .max()
            .unwrap_or(ExtDist::ZERO);
        if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
            best = Some((cand.to_vec(), d));
        }
        if d.is_zero() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(best.map(|(a, d)| (NonexpMap::new_unchecked(h.cod().clone(), x.clone(), a), d)))
}

/// `min_{f'} d(f' ∘ h, f)`, infinite when `Hom(cod h, cod f)` is empty.
pub fn injectivity_deficiency(h: &NonexpMap, f: &NonexpMap) -> Result<ExtDist> {
    Ok(best_extension(h, f)?.map_or(ExtDist::Inf, |(_, d)| d))
}

/// The worst `(h, f)` pair found by [`is_approx_injective`].
#[derive(Clone, Debug)]
pub struct Worst {
    pub h: usize,
    pub f: NonexpMap,
    pub deficiency: ExtDist,
}

/// Whether every `f: dom h -> X`, `h ∈ H`, has deficiency at most ε. Returns
/// the worst pair seen (first in enumeration order among ties).
pub fn is_approx_injective(x: &MetSpace, class: &MorphismClass, eps: ExtDist) -> Result<(bool, Option<Worst>)> {
    let mut worst: Option<Worst> = None;
    for (i, h) in class.members.iter().enumerate() {
        for f in hom_set(h.dom(), x) {
            let d = injectivity_deficiency(h, &f)?;
            if worst.as_ref().is_none_or(|w| d > w.deficiency) {
                worst = Some(Worst { h: i, f, deficiency: d });
            }
        }
    }
    let ok = worst.as_ref().is_none_or(|w| w.deficiency <= eps);
    Ok((ok, worst))
}

/// Per-`n` witnesses of a bounded membership search; `ok` is true when every
/// `n <= n_max` found one. A false result only says the search failed at some
/// `n`, not that membership fails.
#[derive(Clone, Debug)]
pub struct BoundedMembership {
    pub ok: bool,
    pub witnesses: Vec<Option<(usize, NonexpMap)>>,
}

fn per_n_search(n_max: u32, mut best_for: impl FnMut(ExtDist) -> Option<(usize, NonexpMap)>) -> BoundedMembership {
    let witnesses: Vec<_> = (1..=n_max).map(|n| best_for(inv_n(n))).collect();
    BoundedMembership {
        ok: witnesses.iter().all(Option::is_some),
        witnesses,
    }
}

fn first_within(g: &NonexpMap, h: &NonexpMap, bound: ExtDist) -> Option<NonexpMap> {
    let target = h.cod();
    for_each_hom(g.cod(), target, |cand| {
        let d = g
            .assignment()
            .iter()
            .zip(h.assignment())
            .map(|(&b, &y)| target.d(cand[b], y))
            .max()
            .unwrap_or(ExtDist::ZERO);
        if d <= bound {
            ControlFlow::Break(NonexpMap::new_unchecked(g.cod().clone(), target.clone(), cand.to_vec()))
        } else {
            ControlFlow::Continue(())
        }
    })
}

/// For each `n <= n_max`, looks for `f_n: B' -> B` with `f_n ∘ h' ∼_{1/n} h`.
pub fn consequence_by_triangles(h: &NonexpMap, h_prime: &NonexpMap, n_max: u32) -> Result<BoundedMembership> {
    if h.dom() != h_prime.dom() {
        return usage("consequence_by_triangles: maps have different domains");
    }
    Ok(per_n_search(n_max, |b| first_within(h_prime, h, b).map(|f| (0, f))))
}

/// For each `n <= n_max`, looks for `h ∈ H` with `dom h = dom g` and
/// `f_n: cod g -> cod h` with `f_n ∘ g ∼_{1/n} h`.
pub fn cancellable_closure_member(g: &NonexpMap, class: &MorphismClass, n_max: u32) -> BoundedMembership {
    per_n_search(n_max, |b| {
        class
            .members
            .iter()
            .enumerate()
            .filter(|(_, h)| h.dom() == g.dom())
            .find_map(|(i, h)| first_within(g, h, b).map(|f| (i, f)))
    })
}

/// One attachment: push out `h = class[h]` along `u` at parameter ε.
#[derive(Clone, Debug)]
pub struct AttachStep {
    pub h: usize,
    pub u: NonexpMap,
    pub eps: ExtDist,
}

/// A chain built by successive ε-pushouts, with the square of every step.
#[derive(Clone, Debug)]
pub struct CellularChain {
    pub chain: FiniteChain,
    pub squares: Vec<EpsSquare>,
}

impl CellularChain {
    pub fn new(k0: MetSpace) -> Self {
        CellularChain {
            chain: FiniteChain::single(k0),
            squares: Vec::new(),
        }
    }

    /// Pushes out `h` along `u: dom h -> top` and appends the new stage.
    pub fn attach(&mut self, h: &NonexpMap, u: &NonexpMap, eps: ExtDist) -> Result<&EpsSquare> {
        if u.cod() != self.chain.top() {
            return usage("attach: attaching map does not land in the last stage");
        }
        if u.dom() != h.dom() {
            return usage("attach: attaching map and h have different domains");
        }
        let sq = eps_pushout(u, h, eps)?;
        self.chain.push(sq.g1.clone())?;
        self.squares.push(sq);
        Ok(self.squares.last().expect("just pushed"))
    }

    /// The composite `K_0 -> K_m`.
    pub fn composite(&self) -> NonexpMap {
        self.chain.composite(0, self.chain.len() - 1).expect("valid stage pair")
    }
}

/// Applies a script of attachments to `K_0`.
pub fn approx_cellular_compose(k0: MetSpace, class: &MorphismClass, script: &[AttachStep]) -> Result<CellularChain> {
    let mut out = CellularChain::new(k0);
    for step in script {
        let h = class
            .members
            .get(step.h)
            .ok_or_else(|| crate::error::Error::Usage(format!("script names missing member {}", step.h)))?;
        out.attach(h, &step.u, step.eps)?;
    }
    Ok(out)
}

/// Result of a per-stage factorization search.
#[derive(Clone, Debug)]
pub enum Smallness {
    Found {
        stage: usize,
        factor: NonexpMap,
        distance: ExtDist,
    },
    /// No stage works; `best` is the least distance achieved over all stages.
    Failed { best: ExtDist },
}

/// Least `i` with some `f': A -> K_i` such that `legs[i] ∘ f' ∼_ε f`, where
/// `legs` is a cocone from the chain to `cod f`.
pub fn smallness_witness_in(ch: &FiniteChain, legs: &[NonexpMap], f: &NonexpMap, eps: ExtDist) -> Result<Smallness> {
    if legs.len() != ch.len() {
        return usage("smallness_witness: one leg per stage required");
    }
    let apex = f.cod();
    let mut best = ExtDist::Inf;
    for (i, leg) in legs.iter().enumerate() {
        if leg.dom() != ch.stage(i) || leg.cod() != apex {
            return usage(format!("smallness_witness: leg {i} does not join stage and apex"));
        }
        let found = for_each_hom(f.dom(), ch.stage(i), |cand| {
            let d = cand
                .iter()
                .zip(f.assignment())
                .map(|(&k, &y)| apex.d(leg.apply(k), y))
                .max()
                .unwrap_or(ExtDist::ZERO);
            best = best.min(d);
            if d <= eps {
                ControlFlow::Break((cand.to_vec(), d))
            } else {
                ControlFlow::Continue(())
            }
        });
        if let Some((a, distance)) = found {
            let factor = NonexpMap::new_unchecked(f.dom().clone(), ch.stage(i).clone(), a);
            return Ok(Smallness::Found { stage: i, factor, distance });
        }
    }
    Ok(Smallness::Failed { best })
}

/// [`smallness_witness_in`] against the chain's own colimit; `f` must land in
/// the apex of `colimit_chain(ch)`.
pub fn smallness_witness(ch: &FiniteChain, f: &NonexpMap, eps: ExtDist) -> Result<Smallness> {
    let col = colimit_chain(ch)?;
    if *f.cod() != col.apex {
        return usage("smallness_witness: map does not land in the chain colimit");
    }
    smallness_witness_in(ch, &col.legs, f, eps)
}

/// Least `j >= i` with `k_{ij} f' ∼_ε k_{ij} f''`.
pub fn merge_witness(ch: &FiniteChain, i: usize, f1: &NonexpMap, f2: &NonexpMap, eps: ExtDist) -> Result<Option<usize>> {
    hom_distance(f1, f2)?;
    if f1.cod() != ch.stage(i) {
        return usage("merge_witness: maps do not land in the given stage");
    }
    let mut a = f1.assignment().to_vec();
    let mut b = f2.assignment().to_vec();
    for j in i..ch.len() {
        if j > i {
            let l = &ch.links()[j - 1];
            a.iter_mut().for_each(|x| *x = l.apply(*x));
            b.iter_mut().for_each(|x| *x = l.apply(*x));
        }
        if assign_distance(ch.stage(j), &a, &b) <= eps {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// A handled triple `(h, u, n)` and the distance `d(w h, k u)` of its attached
/// witness `w`, recorded at the attach stage and every later stage.
#[derive(Clone, Debug)]
pub struct HandledTask {
    pub round: u32,
    pub h: usize,
    pub u: NonexpMap,
    pub n: u32,
    pub stage: usize,
    pub history: Vec<ExtDist>,
}

impl HandledTask {
    pub fn bound(&self) -> ExtDist {
        inv_n(self.n)
    }

    pub fn final_deficiency(&self) -> ExtDist {
        *self.history.last().expect("history starts at the attach stage")
    }

    pub fn ok(&self) -> bool {
        self.final_deficiency() <= self.bound()
    }

    pub fn monotone(&self) -> bool {
        self.history.windows(2).all(|w| w[1] <= w[0])
    }
}

/// A post-hoc pair `(h, f: dom h -> K̂)` and its exact deficiency.
#[derive(Clone, Debug)]
pub struct Residual {
    pub h: usize,
    pub f: NonexpMap,
    pub deficiency: ExtDist,
}

#[derive(Clone, Debug)]
pub struct ReflectionCertificate {
    pub rounds: u32,
    pub n_max: u32,
    pub handled: Vec<HandledTask>,
    pub residuals: Vec<Residual>,
    /// Set when the residual audit was requested but exceeded its cap.
    pub audit_skipped: bool,
}

impl ReflectionCertificate {
    pub fn passed(&self) -> bool {
        self.handled.iter().all(|t| t.ok() && t.monotone())
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# weak reflection rounds={} n_max={} tasks={}", self.rounds, self.n_max, self.handled.len());
        for t in &self.handled {
            let _ = writeln!(
                s,
                "round={} h={} n={} deficiency={} {}",
                t.round,
                t.h,
                t.n,
                t.final_deficiency(),
                if t.ok() && t.monotone() { "OK" } else { "FAIL" }
            );
        }
        for r in &self.residuals {
            let _ = writeln!(
                s,
                "# residual h={} f={} deficiency={}",
                r.h,
                function_label(r.f.cod(), r.f.assignment()),
                r.deficiency
            );
        }
        if self.audit_skipped {
            let _ = writeln!(s, "# residual audit skipped: cap exceeded");
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct WeakReflection {
    pub reflection: NonexpMap,
    pub chain: CellularChain,
    pub certificate: ReflectionCertificate,
}

/// Options for [`weak_reflection`].
#[derive(Clone, Copy, Debug)]
pub struct ReflectionOptions {
    pub n_max: u32,
    pub rounds: u32,
    /// When set, audits every `(h, f: dom h -> K̂)` pair provided the number
    /// of candidate functions `|K̂|^{|dom h|}` stays below this cap.
    pub audit_cap: Option<u64>,
}

/// Each round enumerates the tasks `(h, u, n)` against the stage the round
/// started from, in order (h index, hom-set order of u, n ascending), and
/// attaches each by a `1/n`-pushout of `h` along the transported `u`.
pub fn weak_reflection(k: &MetSpace, class: &MorphismClass, opts: ReflectionOptions) -> Result<WeakReflection> {
    if opts.n_max == 0 || opts.rounds == 0 {
        return usage("weak_reflection: n_max and rounds must be positive");
    }
    let mut chain = CellularChain::new(k.clone());
    // Per task: current witness w (cod h -> top) and transported u (dom h -> top).
    let mut live: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut handled: Vec<HandledTask> = Vec::new();
    for round in 1..=opts.rounds {
        let start = chain.chain.len() - 1;
        let round_start = chain.chain.top().clone();
        for (hi, h) in class.members.iter().enumerate() {
            for u in hom_set(h.dom(), &round_start) {
                for n in 1..=opts.n_max {
                    let top = chain.chain.len() - 1;
                    let k_u = chain.chain.composite(start, top)?.compose(&u)?;
                    let sq = chain.attach(h, &k_u, inv_n(n))?.clone();
                    let link = &sq.g1;
                    for ((w, ku), task) in live.iter_mut().zip(handled.iter_mut()) {
                        w.iter_mut().for_each(|x| *x = link.apply(*x));
                        ku.iter_mut().for_each(|x| *x = link.apply(*x));
                        let wh: Vec<usize> = class.members[task.h].assignment().iter().map(|&a| w[a]).collect();
                        task.history.push(assign_distance(link.cod(), &wh, ku));
                    }
                    let w = sq.g2.assignment().to_vec();
                    let ku: Vec<usize> = k_u.assignment().iter().map(|&x| link.apply(x)).collect();
                    let wh: Vec<usize> = h.assignment().iter().map(|&a| w[a]).collect();
                    handled.push(HandledTask {
                        round,
                        h: hi,
                        u: u.clone(),
                        n,
                        stage: chain.chain.len() - 1,
                        history: vec![assign_distance(link.cod(), &wh, &ku)],
                    });
                    live.push((w, ku));
                }
            }
        }
    }
    let k_hat = chain.chain.top().clone();
    let mut residuals = Vec::new();
    let mut audit_skipped = false;
    if let Some(cap) = opts.audit_cap {
        let too_big = class.members.iter().any(|h| {
            (k_hat.len() as u64)
                .checked_pow(h.cod().len() as u32)
                .is_none_or(|c| c > cap)
        });
        if too_big {
            audit_skipped = true;
        } else {
            for (hi, h) in class.members.iter().enumerate() {
                for f in hom_set(h.dom(), &k_hat) {
                    let deficiency = injectivity_deficiency(h, &f)?;
                    residuals.push(Residual { h: hi, f, deficiency });
                }
            }
        }
    }
    let reflection = chain.composite();
    Ok(WeakReflection {
        reflection,
        certificate: ReflectionCertificate {
            rounds: opts.rounds,
            n_max: opts.n_max,
            handled,
            residuals,
            audit_skipped,
        },
        chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_point_to_two(d: ExtDist) -> NonexpMap {
        NonexpMap::constant(&MetSpace::point(), &MetSpace::two_point(d), 0)
    }

    #[test]
    fn deficiency_of_spreading_map() {
        let a = MetSpace::two_point(ExtDist::Inf);
        let a2 = MetSpace::two_point(ExtDist::int(1));
        let h = NonexpMap::new(a.clone(), a2, vec![0, 1]).unwrap();
        let x = MetSpace::two_point(ExtDist::ratio(1, 2));
        let f = NonexpMap::new(a, x, vec![0, 1]).unwrap();
        assert_eq!(injectivity_deficiency(&h, &f).unwrap(), ExtDist::ZERO);
        let x2 = MetSpace::two_point(ExtDist::int(2));
        let f2 = NonexpMap::new(f.dom().clone(), x2, vec![0, 1]).unwrap();
        assert_eq!(injectivity_deficiency(&h, &f2).unwrap(), ExtDist::int(2));
    }

    #[test]
    fn empty_hom_set_gives_infinite_deficiency() {
        let one = MetSpace::point();
        let h = NonexpMap::identity(&one);
        let f = NonexpMap::new(one.clone(), one.clone(), vec![0]).unwrap();
        let empty_target = MetSpace::empty();
        assert_eq!(injectivity_deficiency(&h, &f).unwrap(), ExtDist::ZERO);
        let h2 = NonexpMap::new(MetSpace::empty(), one, vec![]).unwrap();
        let f2 = NonexpMap::new(MetSpace::empty(), empty_target, vec![]).unwrap();
        assert_eq!(injectivity_deficiency(&h2, &f2).unwrap(), ExtDist::Inf);
    }

    #[test]
    fn single_attachment_makes_two_point_space() {
        let one = MetSpace::point();
        let class = MorphismClass::new(vec![NonexpMap::identity(&one)]);
        let script = [AttachStep { h: 0, u: NonexpMap::identity(&one), eps: ExtDist::ratio(1, 3) }];
        let cc = approx_cellular_compose(one, &class, &script).unwrap();
        assert_eq!(cc.chain.top().d(0, 1), ExtDist::ratio(1, 3));
    }

    #[test]
    fn reflection_certificate_bounds() {
        let class = MorphismClass::new(vec![h_point_to_two(ExtDist::int(1))]);
        let opts = ReflectionOptions { n_max: 2, rounds: 2, audit_cap: Some(1 << 20) };
        let wr = weak_reflection(&MetSpace::point(), &class, opts).unwrap();
        assert!(wr.certificate.passed());
        assert_eq!(wr.certificate.handled.len(), 2 + 5 * 2);
        assert!(wr.certificate.residuals.iter().all(|r| r.deficiency.is_zero()));
        assert!(wr.certificate.report().lines().nth(1).unwrap().starts_with("round=1 h=0 n=1 deficiency=1/1 OK"));
    }

    #[test]
    fn merge_scan_on_collapsing_chain() {
        let ds = [ExtDist::int(1), ExtDist::ratio(3, 4), ExtDist::ratio(1, 2), ExtDist::ratio(1, 4)];
        let stages: Vec<MetSpace> = ds.iter().map(|&d| MetSpace::two_point(d)).collect();
        let links = (0..3).map(|i| NonexpMap::new(stages[i].clone(), stages[i + 1].clone(), vec![0, 1]).unwrap()).collect();
        let ch = FiniteChain::new(stages.clone(), links).unwrap();
        let one = MetSpace::point();
        let a = NonexpMap::constant(&one, &stages[0], 0);
        let b = NonexpMap::constant(&one, &stages[0], 1);
        assert_eq!(merge_witness(&ch, 0, &a, &b, ExtDist::ratio(1, 2)).unwrap(), Some(2));
        assert_eq!(merge_witness(&ch, 0, &a, &a, ExtDist::ZERO).unwrap(), Some(0));
    }
}
