//! Universal-property checks by counting mediating maps into every
//! competitor drawn from a list of small spaces.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use metcat_core::approx::{EpsSquare, Span};
use metcat_core::{ExtDist, MetSpace, NonexpMap, Result};

use crate::hom::{compose, enumerate_hom, sup_distance};

/// Outcome of one universality check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalityReport {
    pub construction: String,
    pub competitors: usize,
    /// Number of mediating maps found, per competitor, in enumeration order.
    pub mediators: Vec<usize>,
    /// Whether the constructed square or cone meets its ε bound.
    pub bound_ok: bool,
    pub violations: Vec<String>,
}

impl UniversalityReport {
    fn new(construction: String, bound_ok: bool) -> Self {
        let mut r = UniversalityReport { construction, competitors: 0, mediators: Vec::new(), bound_ok, violations: Vec::new() };
        if !bound_ok {
            r.violations.push("construction misses its ε bound".into());
        }
        r
    }

    fn record(&mut self, count: usize, describe: impl FnOnce() -> String) {
        self.competitors += 1;
        self.mediators.push(count);
        if count != 1 && self.violations.len() < 8 {
            self.violations.push(format!("{} mediators for {}", count, describe()));
        }
    }

    pub fn passed(&self) -> bool {
        self.bound_ok && self.mediators.iter().all(|&c| c == 1)
    }
}

impl fmt::Display for UniversalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "construction {}", self.construction)?;
        writeln!(f, "competitors {}", self.competitors)?;
        writeln!(f, "bound {}", if self.bound_ok { "OK" } else { "FAIL" })?;
        let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &self.mediators {
            *hist.entry(c).or_default() += 1;
        }
        for (c, k) in hist {
            writeln!(f, "mediators={c} competitors={k}")?;
        }
        for v in &self.violations {
            writeln!(f, "violation {v}")?;
        }
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// The ε-pushout property of `g1 f1 ∼_ε g2 f2`.
pub fn verify_eps_pushout(
    f1: &NonexpMap,
    f2: &NonexpMap,
    g1: &NonexpMap,
    g2: &NonexpMap,
    eps: ExtDist,
    competitors: &[MetSpace],
    cap: u64,
) -> Result<UniversalityReport> {
    let apex = g1.cod();
    let slack = sup_distance(apex, &compose(g1.assignment(), f1.assignment()), &compose(g2.assignment(), f2.assignment()));
    let mut rep = UniversalityReport::new(format!("eps-pushout eps={eps}"), slack <= eps);
    for c in competitors {
        let mut counts: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
        for h in enumerate_hom(apex, c, cap)?.maps {
            *counts.entry((compose(&h, g1.assignment()), compose(&h, g2.assignment()))).or_default() += 1;
        }
        let c1s = enumerate_hom(f1.cod(), c, cap)?.maps;
        let c2s = enumerate_hom(f2.cod(), c, cap)?.maps;
        for c1 in &c1s {
            let c1f1 = compose(c1, f1.assignment());
            for c2 in &c2s {
                if sup_distance(c, &c1f1, &compose(c2, f2.assignment())) > eps {
                    continue;
                }
                let n = counts.get(&(c1.clone(), c2.clone())).copied().unwrap_or(0);
                rep.record(n, || format!("cocone {c1:?},{c2:?} into {c:?}"));
            }
        }
    }
    Ok(rep)
}

pub fn verify_square(sq: &EpsSquare, competitors: &[MetSpace], cap: u64) -> Result<UniversalityReport> {
    verify_eps_pushout(&sq.f1, &sq.f2, &sq.g1, &sq.g2, sq.eps, competitors, cap)
}

/// The ε-coequalizer property of `c: B -> Q` for `u, v: A -> B`.
pub fn verify_eps_coequalizer(
    u: &NonexpMap,
    v: &NonexpMap,
    c: &NonexpMap,
    eps: ExtDist,
    competitors: &[MetSpace],
    cap: u64,
) -> Result<UniversalityReport> {
    let bound = sup_distance(c.cod(), &compose(c.assignment(), u.assignment()), &compose(c.assignment(), v.assignment()));
    let mut rep = UniversalityReport::new(format!("eps-coequalizer eps={eps}"), bound <= eps);
    for z in competitors {
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for h in enumerate_hom(c.cod(), z, cap)?.maps {
            *counts.entry(compose(&h, c.assignment())).or_default() += 1;
        }
        for w in enumerate_hom(u.cod(), z, cap)?.maps {
            if sup_distance(z, &compose(&w, u.assignment()), &compose(&w, v.assignment())) > eps {
                continue;
            }
            let n = counts.get(&w).copied().unwrap_or(0);
            rep.record(n, || format!("map {w:?} into {z:?}"));
        }
    }
    Ok(rep)
}

/// The ε-equalizer property of `e: E -> A` for `u, v: A -> B`.
pub fn verify_eps_equalizer(
    u: &NonexpMap,
    v: &NonexpMap,
    e: &NonexpMap,
    eps: ExtDist,
    competitors: &[MetSpace],
    cap: u64,
) -> Result<UniversalityReport> {
    let bound = sup_distance(u.cod(), &compose(u.assignment(), e.assignment()), &compose(v.assignment(), e.assignment()));
    let mut rep = UniversalityReport::new(format!("eps-equalizer eps={eps}"), bound <= eps);
    for w_space in competitors {
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for h in enumerate_hom(w_space, e.dom(), cap)?.maps {
            *counts.entry(compose(e.assignment(), &h)).or_default() += 1;
        }
        for w in enumerate_hom(w_space, u.dom(), cap)?.maps {
            if sup_distance(u.cod(), &compose(u.assignment(), &w), &compose(v.assignment(), &w)) > eps {
                continue;
            }
            let n = counts.get(&w).copied().unwrap_or(0);
            rep.record(n, || format!("map {w:?} from {w_space:?}"));
        }
    }
    Ok(rep)
}

/// The ε-pullback property of the span `p1, p2` over `u: A -> C`, `v: B -> C`.
pub fn verify_eps_pullback(
    u: &NonexpMap,
    v: &NonexpMap,
    span: &Span,
    eps: ExtDist,
    competitors: &[MetSpace],
    cap: u64,
) -> Result<UniversalityReport> {
    let bound = sup_distance(u.cod(), &compose(u.assignment(), span.p1.assignment()), &compose(v.assignment(), span.p2.assignment()));
    let mut rep = UniversalityReport::new(format!("eps-pullback eps={eps}"), bound <= eps);
    for w_space in competitors {
        let mut counts: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
        for h in enumerate_hom(w_space, &span.apex, cap)?.maps {
            *counts.entry((compose(span.p1.assignment(), &h), compose(span.p2.assignment(), &h))).or_default() += 1;
        }
        let w1s = enumerate_hom(w_space, u.dom(), cap)?.maps;
        let w2s = enumerate_hom(w_space, v.dom(), cap)?.maps;
        for w1 in &w1s {
            let uw1 = compose(u.assignment(), w1);
            for w2 in &w2s {
                if sup_distance(u.cod(), &uw1, &compose(v.assignment(), w2)) > eps {
                    continue;
                }
                let n = counts.get(&(w1.clone(), w2.clone())).copied().unwrap_or(0);
                rep.record(n, || format!("cone {w1:?},{w2:?} from {w_space:?}"));
            }
        }
    }
    Ok(rep)
}

/// Sup distance between parallel maps.
pub fn map_distance(f: &NonexpMap, g: &NonexpMap) -> ExtDist {
    sup_distance(f.cod(), f.assignment(), g.assignment())
}
