//! Final pseudometrics, metric quotients, chain colimits, products and coproducts.

use std::collections::HashSet;

use crate::dist::ExtDist;
use crate::error::{invalid, usage, Result};
use crate::hom::is_isometry;
use crate::map::NonexpMap;
use crate::space::{MetSpace, PseudoMetSpace};

/// One leg of a cocone: a space and a function into the carrier set.
#[derive(Clone, Debug)]
pub struct CoconeLeg {
    pub dom: PseudoMetSpace,
    pub assign: Vec<usize>,
}

/// A family of functions into a common carrier set with no metric yet.
#[derive(Clone, Debug)]
pub struct Cocone {
    pub carrier: Vec<String>,
    pub legs: Vec<CoconeLeg>,
}

impl Cocone {
    pub fn new(carrier: Vec<String>) -> Self {
        Cocone { carrier, legs: Vec::new() }
    }

    pub fn push_leg(&mut self, dom: PseudoMetSpace, assign: Vec<usize>) -> Result<()> {
        if assign.len() != dom.len() || assign.iter().any(|&y| y >= self.carrier.len()) {
            return invalid("cocone leg", "assignment does not fit domain and carrier");
        }
        self.legs.push(CoconeLeg { dom, assign });
        Ok(())
    }

    pub fn push_map_leg(&mut self, space: &MetSpace, assign: Vec<usize>) -> Result<()> {
        self.push_leg(space.pseudo().clone(), assign)
    }

    /// Adds an edge of weight `w` between carrier points `x` and `y`, as a
    /// leg out of the two-point pseudometric space at distance `w`.
    pub fn push_bridge(&mut self, x: usize, y: usize, w: ExtDist) -> Result<()> {
        let two = PseudoMetSpace::from_fn(vec!["0".into(), "1".into()], |i, j| {
            if i == j {
                ExtDist::ZERO
            } else {
                w
            }
        })?;
        self.push_leg(two, vec![x, y])
    }

    fn jointly_surjective(&self) -> bool {
        let mut hit = vec![false; self.carrier.len()];
        for leg in &self.legs {
            for &y in &leg.assign {
                hit[y] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }
}

/// The largest pseudometric on the carrier making every leg nonexpanding:
/// all-pairs shortest paths over the edges `(f u, f v)` of weight `d(u, v)`.
pub fn final_pseudometric(c: &Cocone) -> Result<PseudoMetSpace> {
    if !c.jointly_surjective() {
        return usage("final_pseudometric: legs are not jointly surjective");
    }
    let n = c.carrier.len();
    let mut d = vec![ExtDist::Inf; n * n];
    for i in 0..n {
        d[i * n + i] = ExtDist::ZERO;
    }
    for leg in &c.legs {
        let m = leg.dom.len();
        for u in 0..m {
            for v in 0..m {
                let (x, y) = (leg.assign[u], leg.assign[v]);
                let w = leg.dom.d(u, v);
                if w < d[x * n + y] {
                    d[x * n + y] = w;
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if !dik.is_finite() {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    PseudoMetSpace::from_flat(c.carrier.clone(), d)
}

/// A metric quotient together with the projection from the pseudometric carrier.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub space: MetSpace,
    pub class_of: Vec<usize>,
}

/// Identifies points at distance 0. Each class is labelled by its least member
/// and classes are ordered by that member.
pub fn metric_quotient(p: &PseudoMetSpace) -> Quotient {
    metric_quotient_labelled(p, |members| p.label(members[0]).to_string())
}

pub(crate) fn metric_quotient_labelled(
    p: &PseudoMetSpace,
    label: impl Fn(&[usize]) -> String,
) -> Quotient {
    let n = p.len();
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (i..n).filter(|&j| p.d(i, j).is_zero()).collect();
        for &j in &members {
            class_of[j] = reps.len();
        }
        labels.push(label(&members));
        reps.push(i);
    }
    let space = MetSpace::from_fn(labels, |a, b| p.d(reps[a], reps[b])).expect("quotient of a pseudometric is metric");
    Quotient { space, class_of }
}

/// Stages `K_0 .. K_m` joined by links `K_i -> K_{i+1}`.
#[derive(Clone, Debug)]
pub struct FiniteChain {
    stages: Vec<MetSpace>,
    links: Vec<NonexpMap>,
}

impl FiniteChain {
    pub fn new(stages: Vec<MetSpace>, links: Vec<NonexpMap>) -> Result<Self> {
        if stages.is_empty() || links.len() + 1 != stages.len() {
            return invalid("chain", "need m+1 stages and m links");
        }
        for (i, l) in links.iter().enumerate() {
            if *l.dom() != stages[i] || *l.cod() != stages[i + 1] {
                return invalid("chain", format!("link {i} does not join stages {i} and {}", i + 1));
            }
        }
        Ok(FiniteChain { stages, links })
    }

    /// A chain whose links must all be isometries.
    pub fn new_isometric(stages: Vec<MetSpace>, links: Vec<NonexpMap>) -> Result<Self> {
        let ch = Self::new(stages, links)?;
        if let Some(i) = ch.links.iter().position(|l| !is_isometry(l)) {
            return invalid("chain", format!("link {i} is not an isometry"));
        }
        Ok(ch)
    }

    pub fn single(space: MetSpace) -> Self {
        FiniteChain { stages: vec![space], links: vec![] }
    }

    pub fn push(&mut self, link: NonexpMap) -> Result<()> {
        if link.dom() != self.top() {
            return invalid("chain", "new link does not start at the last stage");
        }
        self.stages.push(link.cod().clone());
        self.links.push(link);
        Ok(())
    }

    pub fn stages(&self) -> &[MetSpace] {
        &self.stages
    }

    pub fn links(&self) -> &[NonexpMap] {
        &self.links
    }

    pub fn stage(&self, i: usize) -> &MetSpace {
        &self.stages[i]
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top(&self) -> &MetSpace {
        self.stages.last().expect("chain has a stage")
    }

    pub fn is_isometric(&self) -> bool {
        self.links.iter().all(is_isometry)
    }

    /// `k_{ij} = k_{j-1,j} ∘ … ∘ k_{i,i+1}`; the identity when `i = j`.
    pub fn composite(&self, i: usize, j: usize) -> Result<NonexpMap> {
        if i > j || j >= self.stages.len() {
            return usage(format!("composite: bad stage pair ({i}, {j})"));
        }
        let mut acc = NonexpMap::identity(&self.stages[i]);
        for l in &self.links[i..j] {
            acc = l.compose(&acc)?;
        }
        Ok(acc)
    }
}

/// A colimit cocone with a metric apex.
#[derive(Clone, Debug)]
pub struct ChainColimit {
    pub apex: MetSpace,
    pub legs: Vec<NonexpMap>,
}

/// Colimit of a finite chain: the final pseudometric on the disjoint union of
/// stages with every `x` glued to `k(x)`, then the metric quotient. Each class
/// contains exactly one point of the last stage and takes its label.
pub fn colimit_chain(ch: &FiniteChain) -> Result<ChainColimit> {
    let mut offsets = Vec::with_capacity(ch.len());
    let mut carrier = Vec::new();
    for (s, st) in ch.stages.iter().enumerate() {
        offsets.push(carrier.len());
        carrier.extend(st.labels().iter().map(|l| format!("{s}.{l}")));
    }
    let mut cocone = Cocone::new(carrier);
    for (s, st) in ch.stages.iter().enumerate() {
        cocone.push_map_leg(st, (0..st.len()).map(|x| offsets[s] + x).collect())?;
    }
    for (s, l) in ch.links.iter().enumerate() {
        for x in 0..l.dom().len() {
            cocone.push_bridge(offsets[s] + x, offsets[s + 1] + l.apply(x), ExtDist::ZERO)?;
        }
    }
    let p = final_pseudometric(&cocone)?;
    let last = offsets[ch.len() - 1];
    let top = ch.top().clone();
    let q = metric_quotient_labelled(&p, |members| {
        let m = members.iter().find(|&&m| m >= last).expect("class meets the last stage");
        top.label(m - last).to_string()
    });
    let legs = ch
        .stages
        .iter()
        .enumerate()
        .map(|(s, st)| {
            let assign = (0..st.len()).map(|x| q.class_of[offsets[s] + x]).collect();
            NonexpMap::new(st.clone(), q.space.clone(), assign)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainColimit { apex: q.space, legs })
}

/// Product with the max metric and its projections.
pub fn product(x: &MetSpace, y: &MetSpace) -> (MetSpace, NonexpMap, NonexpMap) {
    let (n, m) = (x.len(), y.len());
    let labels = (0..n * m)
        .map(|k| format!("({},{})", x.label(k / m), y.label(k % m)))
        .collect();
    let p = MetSpace::from_fn(labels, |a, b| {
        x.d(a / m, b / m).max(y.d(a % m, b % m))
    })
    .expect("product of metric spaces");
    let p1 = NonexpMap::new_unchecked(p.clone(), x.clone(), (0..n * m).map(|k| k / m).collect());
    let p2 = NonexpMap::new_unchecked(p.clone(), y.clone(), (0..n * m).map(|k| k % m).collect());
    (p, p1, p2)
}

/// Labels for a disjoint union: left labels kept, a clashing right label `l`
/// becomes the first free `l_1`, `l_2`, ...
pub fn disjoint_labels(left: &[String], right: &[String]) -> Vec<String> {
    let mut used: HashSet<String> = left.iter().cloned().collect();
    let mut out = left.to_vec();
    for l in right {
        let mut cand = l.clone();
        let mut k = 1;
        while used.contains(&cand) {
            cand = format!("{l}_{k}");
            k += 1;
        }
        used.insert(cand.clone());
        out.push(cand);
    }
    out
}

/// Disjoint union with infinite cross distances and its injections.
pub fn coproduct(x: &MetSpace, y: &MetSpace) -> (MetSpace, NonexpMap, NonexpMap) {
    let n = x.len();
    let labels = disjoint_labels(x.labels(), y.labels());
    let s = MetSpace::from_fn(labels, |a, b| match (a < n, b < n) {
        (true, true) => x.d(a, b),
        (false, false) => y.d(a - n, b - n),
        _ => ExtDist::Inf,
    })
    .expect("coproduct of metric spaces");
    let i1 = NonexpMap::new_unchecked(x.clone(), s.clone(), (0..n).collect());
    let i2 = NonexpMap::new_unchecked(y.clone(), s.clone(), (n..n + y.len()).collect());
    (s, i1, i2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{hom_distance, is_coisometry};

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn identity_leg_reproduces_metric() {
        let x = MetSpace::on_line(&["a", "b", "c"], &[0.into(), 1.into(), 3.into()]).unwrap();
        let mut c = Cocone::new(x.labels().to_vec());
        c.push_map_leg(&x, vec![0, 1, 2]).unwrap();
        assert_eq!(final_pseudometric(&c).unwrap(), *x.pseudo());
    }

    #[test]
    fn disconnected_points_stay_infinitely_apart() {
        let one = MetSpace::point();
        let mut c = Cocone::new(labels(&["x", "y"]));
        c.push_map_leg(&one, vec![0]).unwrap();
        c.push_map_leg(&one, vec![1]).unwrap();
        assert_eq!(final_pseudometric(&c).unwrap().d(0, 1), ExtDist::Inf);
    }

    #[test]
    fn non_surjective_cocone_is_rejected() {
        let one = MetSpace::point();
        let mut c = Cocone::new(labels(&["x", "y"]));
        c.push_map_leg(&one, vec![0]).unwrap();
        assert!(final_pseudometric(&c).is_err());
    }

    #[test]
    fn quotient_merges_zero_pairs() {
        let p = PseudoMetSpace::from_fn(labels(&["a", "b", "c"]), |i, j| {
            if i == j || (i.min(j) == 0 && i.max(j) == 1) {
                ExtDist::ZERO
            } else {
                ExtDist::int(1)
            }
        })
        .unwrap();
        let q = metric_quotient(&p);
        assert_eq!(q.space.labels(), ["a", "c"]);
        assert_eq!(q.class_of, vec![0, 0, 1]);
    }

    #[test]
    fn shrinking_chain_colimit_is_last_stage() {
        let stages: Vec<MetSpace> = (1..=3).map(|k| MetSpace::two_point(ExtDist::ratio(1, k))).collect();
        let links = (0..2)
            .map(|i| NonexpMap::new(stages[i].clone(), stages[i + 1].clone(), vec![0, 1]).unwrap())
            .collect();
        let ch = FiniteChain::new(stages.clone(), links).unwrap();
        let col = colimit_chain(&ch).unwrap();
        assert_eq!(col.apex, stages[2]);
        assert!(col.legs.iter().all(is_coisometry));
    }

    #[test]
    fn product_and_coproduct_legs() {
        let a = MetSpace::two_point(ExtDist::ratio(1, 2));
        let b = MetSpace::two_point(ExtDist::int(2));
        let (p, p1, p2) = product(&a, &b);
        assert_eq!(p.d(0, 3), ExtDist::int(2));
        assert_eq!(p.label(1), "(p1,p2)");
        assert!(is_coisometry(&p1) && is_coisometry(&p2));
        let (s, i1, i2) = coproduct(&a, &b);
        assert_eq!(s.labels(), ["p1", "p2", "p1_1", "p2_1"]);
        assert!(is_isometry(&i1) && is_isometry(&i2));
        let c = NonexpMap::constant(&MetSpace::point(), &s, 0);
        let c2 = NonexpMap::constant(&MetSpace::point(), &s, 2);
        assert_eq!(hom_distance(&c, &c2).unwrap(), ExtDist::Inf);
    }
}
