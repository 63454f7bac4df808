//! Line-oriented text format for spaces, maps and chains.
//!
//! ```text
//! # comment
//! space X
//! points a b c
//! dist a b 1/2
//! map f X -> Y
//! a -> p
//! chain C
//! stage X
//! link f
//! banspace V dim 2
//! gen 1 0
//! gen 0 1
//! banmap g V -> W
//! row 1 0
//! banchain D
//! stage V
//! link g
//! ```
//!
//! Unlisted distances are infinite. Names are unique across a document and
//! must be defined before they are referenced.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::ban::linalg::{format_vector, Matrix, Vector, Q};
use crate::ban::{BanChain, LinMap, PolyNormedSpace};
use crate::colimit::FiniteChain;
use crate::dist::{parse_ratio_i64, ExtDist};
use crate::error::{Error, Result};
use crate::map::NonexpMap;
use crate::space::MetSpace;

/// Size caps applied to parsed input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_points: usize,
    pub max_dim: usize,
    pub max_gens: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_points: 64, max_dim: 4, max_gens: 64 }
    }
}

impl Limits {
    /// Defaults overridden by `METCAT_MAX_POINTS` and `METCAT_MAX_DIM`.
    pub fn from_env() -> Result<Self> {
        let mut l = Limits::default();
        for (var, slot) in [("METCAT_MAX_POINTS", &mut l.max_points), ("METCAT_MAX_DIM", &mut l.max_dim)] {
            if let Ok(v) = std::env::var(var) {
                *slot = v.trim().parse().map_err(|_| Error::Usage(format!("{var} must be a nonnegative integer")))?;
            }
        }
        Ok(l)
    }
}

/// One named item of a document.
#[derive(Clone, Debug)]
pub enum Item {
    Space(MetSpace),
    Map(NonexpMap),
    Chain(FiniteChain),
    BanSpace(PolyNormedSpace),
    BanMap(LinMap),
    BanChain(BanChain),
}

/// Parsed items in file order.
#[derive(Clone, Debug, Default)]
pub struct Document {
    items: Vec<(String, Item)>,
    index: HashMap<String, usize>,
}

macro_rules! getter {
    ($name:ident, $variant:ident, $ty:ty, $kind:literal) => {
        pub fn $name(&self, name: &str) -> Result<&$ty> {
            match self.get(name) {
                Some(Item::$variant(x)) => Ok(x),
                Some(_) => Err(Error::Usage(format!("`{name}` is not a {}", $kind))),
                None => Err(Error::Usage(format!("no {} named `{name}`", $kind))),
            }
        }
    };
}

impl Document {
    pub fn items(&self) -> &[(String, Item)] {
        &self.items
    }

    pub fn get(&self, name: &str) -> Option<&Item> {
        self.index.get(name).map(|&i| &self.items[i].1)
    }

    /// Names of the items of one kind, in file order.
    pub fn names_where(&self, pred: impl Fn(&Item) -> bool) -> Vec<&str> {
        self.items.iter().filter(|(_, it)| pred(it)).map(|(n, _)| n.as_str()).collect()
    }

    getter!(space, Space, MetSpace, "space");
    getter!(map, Map, NonexpMap, "map");
    getter!(chain, Chain, FiniteChain, "chain");
    getter!(ban_space, BanSpace, PolyNormedSpace, "banspace");
    getter!(ban_map, BanMap, LinMap, "banmap");
    getter!(ban_chain, BanChain, BanChain, "banchain");

    fn insert(&mut self, name: String, item: Item) {
        self.index.insert(name.clone(), self.items.len());
        self.items.push((name, item));
    }

    /// Name of an item equal to `space`, if any.
    fn space_name(&self, space: &MetSpace) -> Option<&str> {
        self.items.iter().find_map(|(n, it)| match it {
            Item::Space(s) if s == space => Some(n.as_str()),
            _ => None,
        })
    }

    fn ban_space_name(&self, space: &PolyNormedSpace) -> Option<&str> {
        self.items.iter().find_map(|(n, it)| match it {
            Item::BanSpace(s) if s == space => Some(n.as_str()),
            _ => None,
        })
    }
}

struct Tok<'a> {
    col: usize,
    text: &'a str,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok { col: line[..s].chars().count() + 1, text: &line[s..i] });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Tok { col: line[..s].chars().count() + 1, text: &line[s..] });
    }
    out
}

fn perr<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, column, message: message.into() })
}

/// Exact rational `p/q` or integer, arbitrary precision.
pub fn parse_q(s: &str) -> std::result::Result<Q, String> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num.strip_prefix('-').unwrap_or(num)) || !digits(den) {
        return Err(format!("malformed rational `{s}`"));
    }
    let n: BigInt = num.parse().map_err(|_| format!("malformed rational `{s}`"))?;
    let d: BigInt = den.parse().map_err(|_| format!("malformed rational `{s}`"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Q::new(n, d))
}

enum Block {
    Space { name: String, line: usize, points: Vec<String>, dists: Vec<(usize, usize, usize, ExtDist)> },
    Map { name: String, line: usize, dom: MetSpace, cod: MetSpace, pairs: Vec<(usize, Tok2, Tok2)> },
    Chain { name: String, line: usize, stages: Vec<MetSpace>, links: Vec<NonexpMap> },
    BanSpace { name: String, line: usize, dim: usize, gens: Vec<Vector>, facets: Vec<Vector> },
    BanMap { name: String, line: usize, dom: PolyNormedSpace, cod: PolyNormedSpace, rows: Vec<Vector> },
    BanChain { name: String, line: usize, stages: Vec<PolyNormedSpace>, links: Vec<LinMap> },
}

/// A token copied out of its line.
struct Tok2 {
    col: usize,
    text: String,
}

fn finish(doc: &mut Document, block: Block, limits: &Limits) -> Result<()> {
    let wrap = |line: usize, e: Error| match e {
        Error::Parse { .. } | Error::Cap(_) => e,
        other => Error::Parse { line, column: 1, message: other.to_string() },
    };
    match block {
        Block::Space { name, line, points, dists } => {
            let n = points.len();
            let mut table = vec![vec![ExtDist::Inf; n]; n];
            for (i, row) in table.iter_mut().enumerate() {
                row[i] = ExtDist::ZERO;
            }
            let mut set = vec![vec![false; n]; n];
            for (l, i, j, d) in dists {
                if i == j && !d.is_zero() {
                    return perr(l, 1, "self-distance must be 0");
                }
                if set[i][j] && table[i][j] != d {
                    return perr(l, 1, format!("conflicting distances declared for ({}, {})", points[i], points[j]));
                }
                set[i][j] = true;
                set[j][i] = true;
                table[i][j] = d;
                table[j][i] = d;
            }
            let space = MetSpace::new(points, table).map_err(|e| wrap(line, e))?;
            doc.insert(name, Item::Space(space));
        }
        Block::Map { name, line, dom, cod, pairs } => {
            let mut assign = vec![usize::MAX; dom.len()];
            for (l, a, b) in pairs {
                let Some(i) = dom.index_of(&a.text) else {
                    return perr(l, a.col, format!("`{}` is not a point of the domain", a.text));
                };
                let Some(j) = cod.index_of(&b.text) else {
                    return perr(l, b.col, format!("`{}` is not a point of the codomain", b.text));
                };
                if assign[i] != usize::MAX {
                    return perr(l, a.col, format!("`{}` assigned twice", a.text));
                }
                assign[i] = j;
            }
            if let Some(i) = assign.iter().position(|&j| j == usize::MAX) {
                return perr(line, 1, format!("point `{}` has no image", dom.label(i)));
            }
            let m = NonexpMap::new(dom, cod, assign).map_err(|e| wrap(line, e))?;
            doc.insert(name, Item::Map(m));
        }
        Block::Chain { name, line, stages, links } => {
            let ch = FiniteChain::new(stages, links).map_err(|e| wrap(line, e))?;
            doc.insert(name, Item::Chain(ch));
        }
        Block::BanSpace { name, line, dim, gens, facets } => {
            if gens.len() > limits.max_gens {
                return Err(Error::Cap(format!("banspace `{name}` has {} generators (cap {})", gens.len(), limits.max_gens)));
            }
            let space = if facets.is_empty() {
                PolyNormedSpace::new(dim, gens)
            } else {
                PolyNormedSpace::with_facets(dim, gens, facets)
            }
            .map_err(|e| wrap(line, e))?;
            doc.insert(name, Item::BanSpace(space));
        }
        Block::BanMap { name, line, dom, cod, rows } => {
            if rows.len() != cod.dim() {
                return perr(line, 1, format!("expected {} rows, found {}", cod.dim(), rows.len()));
            }
            let m = LinMap::new(dom.clone(), cod.clone(), Matrix::from_rows(cod.dim(), dom.dim(), rows))
                .map_err(|e| wrap(line, e))?;
            doc.insert(name, Item::BanMap(m));
        }
        Block::BanChain { name, line, stages, links } => {
            let Some(base) = stages.first() else {
                return perr(line, 1, "banchain has no stages");
            };
            if links.len() + 1 != stages.len() {
                return perr(line, 1, "need m+1 stages and m links");
            }
            for (i, l) in links.iter().enumerate() {
                if *l.dom() != stages[i] || *l.cod() != stages[i + 1] {
                    return perr(line, 1, format!("link {i} does not join stages {i} and {}", i + 1));
                }
            }
            let ch = BanChain::from_links(base.clone(), links).map_err(|e| wrap(line, e))?;
            doc.insert(name, Item::BanChain(ch));
        }
    }
    Ok(())
}

/// Parses a document. Errors carry 1-based line and column numbers.
pub fn parse(text: &str, limits: &Limits) -> Result<Document> {
    let mut doc = Document::default();
    let mut cur: Option<Block> = None;
    for (ln0, raw) in text.lines().enumerate() {
        let ln = ln0 + 1;
        let toks = tokenize(raw);
        let Some(head) = toks.first() else { continue };
        if head.text.starts_with('#') {
            continue;
        }
        let header = matches!(head.text, "space" | "map" | "chain" | "banspace" | "banmap" | "banchain");
        if header {
            if let Some(b) = cur.take() {
                finish(&mut doc, b, limits)?;
            }
            let Some(name) = toks.get(1) else {
                return perr(ln, head.col + head.text.len(), "missing name");
            };
            if doc.index.contains_key(name.text) {
                return perr(ln, name.col, format!("name `{}` already defined", name.text));
            }
            let name_s = name.text.to_string();
            let arrow = |toks: &[Tok]| -> Result<(usize, usize)> {
                if toks.len() != 5 || toks[3].text != "->" {
                    return perr(ln, head.col, format!("expected `{} <name> <dom> -> <cod>`", head.text));
                }
                Ok((2, 4))
            };
            let expect_len = |n: usize| -> Result<()> {
                if toks.len() != n {
                    let col = toks.get(n).map_or(raw.chars().count() + 1, |t| t.col);
                    return perr(ln, col, "unexpected number of fields");
                }
                Ok(())
            };
            cur = Some(match head.text {
                "space" => {
                    expect_len(2)?;
                    Block::Space { name: name_s, line: ln, points: vec![], dists: vec![] }
                }
                "map" => {
                    let (d, c) = arrow(&toks)?;
                    let dom = doc.space(toks[d].text).map_err(|e| Error::Parse { line: ln, column: toks[d].col, message: e.to_string() })?.clone();
                    let cod = doc.space(toks[c].text).map_err(|e| Error::Parse { line: ln, column: toks[c].col, message: e.to_string() })?.clone();
                    Block::Map { name: name_s, line: ln, dom, cod, pairs: vec![] }
                }
                "chain" => {
                    expect_len(2)?;
                    Block::Chain { name: name_s, line: ln, stages: vec![], links: vec![] }
                }
                "banspace" => {
                    if toks.len() != 4 || toks[2].text != "dim" {
                        return perr(ln, head.col, "expected `banspace <name> dim <n>`");
                    }
                    let dim: usize = toks[3].text.parse().map_err(|_| Error::Parse { line: ln, column: toks[3].col, message: "dimension must be a nonnegative integer".into() })?;
                    if dim > limits.max_dim {
                        return Err(Error::Cap(format!("banspace `{name_s}` has dimension {dim} (cap {})", limits.max_dim)));
                    }
                    Block::BanSpace { name: name_s, line: ln, dim, gens: vec![], facets: vec![] }
                }
                "banmap" => {
                    let (d, c) = arrow(&toks)?;
                    let dom = doc.ban_space(toks[d].text).map_err(|e| Error::Parse { line: ln, column: toks[d].col, message: e.to_string() })?.clone();
                    let cod = doc.ban_space(toks[c].text).map_err(|e| Error::Parse { line: ln, column: toks[c].col, message: e.to_string() })?.clone();
                    Block::BanMap { name: name_s, line: ln, dom, cod, rows: vec![] }
                }
                _ => {
                    expect_len(2)?;
                    Block::BanChain { name: name_s, line: ln, stages: vec![], links: vec![] }
                }
            });
            continue;
        }
        let Some(block) = cur.as_mut() else {
            return perr(ln, head.col, format!("`{}` outside of a block", head.text));
        };
        let rationals = |toks: &[Tok], want: usize| -> Result<Vector> {
            if toks.len() != want + 1 {
                let col = toks.get(want + 1).map_or(raw.chars().count() + 1, |t| t.col);
                return perr(ln, col, format!("expected {want} entries"));
            }
            toks[1..]
                .iter()
                .map(|t| parse_q(t.text).map_err(|m| Error::Parse { line: ln, column: t.col, message: m }))
                .collect()
        };
        match block {
            Block::Space { points, dists, name, .. } => match head.text {
                "points" => {
                    for t in &toks[1..] {
                        if points.iter().any(|p| p == t.text) {
                            return perr(ln, t.col, format!("duplicate point `{}`", t.text));
                        }
                        points.push(t.text.to_string());
                    }
                    if points.len() > limits.max_points {
                        return Err(Error::Cap(format!("space `{name}` has more than {} points", limits.max_points)));
                    }
                }
                "dist" => {
                    if toks.len() != 4 {
                        return perr(ln, head.col, "expected `dist <p> <q> <value>`");
                    }
                    let find = |t: &Tok| {
                        points.iter().position(|p| p == t.text).ok_or_else(|| Error::Parse {
                            line: ln,
                            column: t.col,
                            message: format!("unknown point `{}`", t.text),
                        })
                    };
                    let (i, j) = (find(&toks[1])?, find(&toks[2])?);
                    let d = if toks[3].text == "inf" {
                        ExtDist::Inf
                    } else {
                        let r = parse_ratio_i64(toks[3].text, false)
                            .map_err(|m| Error::Parse { line: ln, column: toks[3].col, message: m })?;
                        ExtDist::Finite(r)
                    };
                    dists.push((ln, i, j, d));
                }
                other => return perr(ln, head.col, format!("unexpected `{other}` in space block")),
            },
            Block::Map { pairs, .. } => {
                if toks.len() != 3 || toks[1].text != "->" {
                    return perr(ln, head.col, "expected `<point> -> <point>`");
                }
                let own = |t: &Tok| Tok2 { col: t.col, text: t.text.to_string() };
                pairs.push((ln, own(&toks[0]), own(&toks[2])));
            }
            Block::Chain { stages, links, .. } => {
                if toks.len() != 2 {
                    return perr(ln, head.col, "expected `stage <space>` or `link <map>`");
                }
                let at = |e: Error| Error::Parse { line: ln, column: toks[1].col, message: e.to_string() };
                match head.text {
                    "stage" => stages.push(doc.space(toks[1].text).map_err(at)?.clone()),
                    "link" => links.push(doc.map(toks[1].text).map_err(at)?.clone()),
                    other => return perr(ln, head.col, format!("unexpected `{other}` in chain block")),
                }
            }
            Block::BanSpace { dim, gens, facets, .. } => match head.text {
                "gen" => gens.push(rationals(&toks, *dim)?),
                "facet" => facets.push(rationals(&toks, *dim)?),
                other => return perr(ln, head.col, format!("unexpected `{other}` in banspace block")),
            },
            Block::BanMap { dom, rows, .. } => match head.text {
                "row" => rows.push(rationals(&toks, dom.dim())?),
                other => return perr(ln, head.col, format!("unexpected `{other}` in banmap block")),
            },
            Block::BanChain { stages, links, .. } => {
                if toks.len() != 2 {
                    return perr(ln, head.col, "expected `stage <banspace>` or `link <banmap>`");
                }
                let at = |e: Error| Error::Parse { line: ln, column: toks[1].col, message: e.to_string() };
                match head.text {
                    "stage" => stages.push(doc.ban_space(toks[1].text).map_err(at)?.clone()),
                    "link" => links.push(doc.ban_map(toks[1].text).map_err(at)?.clone()),
                    other => return perr(ln, head.col, format!("unexpected `{other}` in banchain block")),
                }
            }
        }
    }
    if let Some(b) = cur.take() {
        finish(&mut doc, b, limits)?;
    }
    Ok(doc)
}

/// Builds a document for output; items are emitted in insertion order and
/// referenced spaces are emitted once.
#[derive(Default)]
pub struct Writer {
    doc: Document,
    out: String,
    fresh: usize,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn finish(self) -> String {
        self.out
    }

    fn fresh_name(&mut self, prefix: &str) -> String {
        loop {
            self.fresh += 1;
            let n = format!("{prefix}{}", self.fresh);
            if !self.doc.index.contains_key(&n) {
                return n;
            }
        }
    }

    fn take_name(&mut self, name: &str, prefix: &str) -> String {
        if self.doc.index.contains_key(name) {
            self.fresh_name(prefix)
        } else {
            name.to_string()
        }
    }

    /// Emits `space` under `name` (or a fresh name if taken) and returns the
    /// name used.
    pub fn space(&mut self, name: &str, space: &MetSpace) -> String {
        if let Some(n) = self.doc.space_name(space) {
            return n.to_string();
        }
        let name = self.take_name(name, "S");
        writeln!(self.out, "space {name}").unwrap();
        writeln!(self.out, "points {}", space.labels().join(" ")).unwrap();
        for i in 0..space.len() {
            for j in i + 1..space.len() {
                if let ExtDist::Finite(r) = space.d(i, j) {
                    writeln!(self.out, "dist {} {} {}/{}", space.label(i), space.label(j), r.numer(), r.denom()).unwrap();
                }
            }
        }
        self.doc.insert(name.clone(), Item::Space(space.clone()));
        name
    }

    pub fn map(&mut self, name: &str, map: &NonexpMap) -> String {
        let d = self.space(&format!("{name}_dom"), map.dom());
        let c = self.space(&format!("{name}_cod"), map.cod());
        let name = self.take_name(name, "f");
        writeln!(self.out, "map {name} {d} -> {c}").unwrap();
        for (i, &j) in map.assignment().iter().enumerate() {
            writeln!(self.out, "{} -> {}", map.dom().label(i), map.cod().label(j)).unwrap();
        }
        self.doc.insert(name.clone(), Item::Map(map.clone()));
        name
    }

    pub fn chain(&mut self, name: &str, ch: &FiniteChain) -> String {
        let stages: Vec<String> = ch.stages().iter().enumerate().map(|(i, s)| self.space(&format!("{name}_{i}"), s)).collect();
        let links: Vec<String> = ch.links().iter().enumerate().map(|(i, l)| self.map(&format!("{name}_link{i}"), l)).collect();
        let name = self.take_name(name, "C");
        writeln!(self.out, "chain {name}").unwrap();
        for s in stages {
            writeln!(self.out, "stage {s}").unwrap();
        }
        for l in links {
            writeln!(self.out, "link {l}").unwrap();
        }
        self.doc.insert(name.clone(), Item::Chain(ch.clone()));
        name
    }

    pub fn ban_space(&mut self, name: &str, space: &PolyNormedSpace) -> String {
        if let Some(n) = self.doc.ban_space_name(space) {
            return n.to_string();
        }
        let name = self.take_name(name, "V");
        writeln!(self.out, "banspace {name} dim {}", space.dim()).unwrap();
        for g in space.gens() {
            writeln!(self.out, "gen {}", format_vector(g)).unwrap();
        }
        self.doc.insert(name.clone(), Item::BanSpace(space.clone()));
        name
    }

    pub fn ban_map(&mut self, name: &str, map: &LinMap) -> String {
        let d = self.ban_space(&format!("{name}_dom"), map.dom());
        let c = self.ban_space(&format!("{name}_cod"), map.cod());
        let name = self.take_name(name, "g");
        writeln!(self.out, "banmap {name} {d} -> {c}").unwrap();
        for r in map.matrix().row_vectors() {
            let body = format_vector(&r);
            if body.is_empty() {
                writeln!(self.out, "row").unwrap();
            } else {
                writeln!(self.out, "row {body}").unwrap();
            }
        }
        self.doc.insert(name.clone(), Item::BanMap(map.clone()));
        name
    }

    pub fn ban_chain(&mut self, name: &str, ch: &BanChain) -> String {
        let stages: Vec<String> = ch.stages().iter().enumerate().map(|(i, s)| self.ban_space(&format!("{name}_{i}"), s)).collect();
        let links: Vec<String> = ch.links().iter().enumerate().map(|(i, l)| self.ban_map(&format!("{name}_link{i}"), l)).collect();
        let name = self.take_name(name, "D");
        writeln!(self.out, "banchain {name}").unwrap();
        for s in stages {
            writeln!(self.out, "stage {s}").unwrap();
        }
        for l in links {
            writeln!(self.out, "link {l}").unwrap();
        }
        self.doc.insert(name.clone(), Item::BanChain(ch.clone()));
        name
    }

    /// A free-form comment line.
    pub fn comment(&mut self, text: &str) {
        for l in text.lines() {
            writeln!(self.out, "# {l}").unwrap();
        }
    }
}
