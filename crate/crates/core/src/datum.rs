//! The Kirby datum: dotted circles, framed 2-handles and 3-handle count.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::StarZeroSequence;
use crate::word::Word;

/// Which circle of a wheel pair a component is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Circle {
    /// Radial component `α_i`.
    Alpha,
    /// Circular component `β_i`.
    Beta,
}

/// Position of a component in the wheel link `L_{n,m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Role {
    pub circle: Circle,
    pub index: usize,
}

impl Role {
    pub fn alpha(index: usize) -> Role {
        Role { circle: Circle::Alpha, index }
    }

    pub fn beta(index: usize) -> Role {
        Role { circle: Circle::Beta, index }
    }

    pub fn partner(self) -> Role {
        Role {
            circle: match self.circle {
                Circle::Alpha => Circle::Beta,
                Circle::Beta => Circle::Alpha,
            },
            index: self.index,
        }
    }

    /// Canonical component name: `a3`, `b0`, ...
    pub fn name(self) -> String {
        match self.circle {
            Circle::Alpha => format!("a{}", self.index),
            Circle::Beta => format!("b{}", self.index),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.circle {
            Circle::Alpha => "alpha",
            Circle::Beta => "beta",
        };
        write!(f, "{c}:{}", self.index)
    }
}

impl Serialize for Role {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Role {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let (c, i) = s.split_once(':').ok_or_else(|| serde::de::Error::custom("role must be circle:index"))?;
        let circle = match c {
            "alpha" => Circle::Alpha,
            "beta" => Circle::Beta,
            _ => return Err(serde::de::Error::custom(format!("unknown circle {c}"))),
        };
        let index = i.parse().map_err(serde::de::Error::custom)?;
        Ok(Role { circle, index })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DottedCircle {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoHandle {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
    /// Based attaching word over the dotted generators.
    pub word: Word,
    pub framing: i64,
    /// Linking numbers with other 2-handles (zeros omitted).
    #[serde(default)]
    pub links: BTreeMap<String, i64>,
    /// Recorded linking numbers with dotted circles (zeros omitted).
    #[serde(default)]
    pub dot_links: BTreeMap<String, i64>,
}

impl TwoHandle {
    /// A handle whose dotted linking record agrees with its word.
    pub fn new(name: impl Into<String>, word: Word, framing: i64) -> Self {
        let dot_links = word.exponent_sums();
        TwoHandle { name: name.into(), role: None, word, framing, links: BTreeMap::new(), dot_links }
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = Some(role);
        self
    }

    pub fn link(&self, other: &str) -> i64 {
        self.links.get(other).copied().unwrap_or(0)
    }

    pub fn dot_link(&self, gen: &str) -> i64 {
        self.dot_links.get(gen).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    /// The single cork `C(m)`.
    Cm,
    X,
    C,
    D,
    E,
    F,
    W,
    Z,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyMeta {
    pub family: FamilyKind,
    pub n: usize,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seq: Option<StarZeroSequence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KirbyDatum {
    pub one_handles: Vec<DottedCircle>,
    pub two_handles: Vec<TwoHandle>,
    #[serde(default)]
    pub three_handles: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<FamilyMeta>,
}

/// A dotted circle with its dual 0-framed 2-handle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorkPair {
    pub dotted: String,
    pub zero_handle: String,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub handles: Vec<String>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, handles: &[&str], message: impl Into<String>) {
        self.violations.push(Violation {
            handles: handles.iter().map(|s| s.to_string()).collect(),
            message: message.into(),
        });
    }
}

impl KirbyDatum {
    pub fn empty() -> Self {
        KirbyDatum { one_handles: Vec::new(), two_handles: Vec::new(), three_handles: 0, meta: None }
    }

    pub fn handle_count(&self) -> usize {
        self.one_handles.len() + self.two_handles.len()
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.one_handles.iter().map(|d| d.name.clone()).collect()
    }

    pub fn has_generator(&self, name: &str) -> bool {
        self.one_handles.iter().any(|d| d.name == name)
    }

    pub fn two_handle(&self, name: &str) -> Result<&TwoHandle> {
        self.two_handles.iter().find(|h| h.name == name).ok_or_else(|| Error::HandleNotFound(name.into()))
    }

    pub fn two_handle_mut(&mut self, name: &str) -> Result<&mut TwoHandle> {
        self.two_handles.iter_mut().find(|h| h.name == name).ok_or_else(|| Error::HandleNotFound(name.into()))
    }

    pub fn two_handle_index(&self, name: &str) -> Result<usize> {
        self.two_handles.iter().position(|h| h.name == name).ok_or_else(|| Error::HandleNotFound(name.into()))
    }

    pub fn contains_name(&self, name: &str) -> bool {
        self.has_generator(name) || self.two_handles.iter().any(|h| h.name == name)
    }

    /// Symmetric 2-handle linking number (0 for unknown names).
    pub fn lk(&self, a: &str, b: &str) -> i64 {
        self.two_handles.iter().find(|h| h.name == a).map_or(0, |h| h.link(b))
    }

    /// Sets `lk(a, b) = lk(b, a) = v`.
    pub fn set_lk(&mut self, a: &str, b: &str, v: i64) -> Result<()> {
        for (x, y) in [(a, b), (b, a)] {
            let h = self.two_handle_mut(x)?;
            if v == 0 {
                h.links.remove(y);
            } else {
                h.links.insert(y.to_string(), v);
            }
        }
        Ok(())
    }

    pub fn component_by_role(&self, role: Role) -> Option<&str> {
        self.one_handles
            .iter()
            .find(|d| d.role == Some(role))
            .map(|d| d.name.as_str())
            .or_else(|| self.two_handles.iter().find(|h| h.role == Some(role)).map(|h| h.name.as_str()))
    }

    /// Sorted handles, zero links dropped, words reduced.
    pub fn canonical(&self) -> KirbyDatum {
        let mut d = self.clone();
        d.one_handles.sort_by(|a, b| a.name.cmp(&b.name));
        for h in &mut d.two_handles {
            h.word = h.word.reduced();
            h.links.retain(|_, v| *v != 0);
            h.dot_links.retain(|_, v| *v != 0);
        }
        d.two_handles.sort_by(|a, b| a.name.cmp(&b.name));
        d
    }

    /// Checks every structural invariant and reports violations by handle.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let mut names = BTreeSet::new();
        for n in self.one_handles.iter().map(|d| &d.name).chain(self.two_handles.iter().map(|h| &h.name)) {
            if !names.insert(n.as_str()) {
                r.push(&[n], "duplicate component name");
            }
        }
        let gens: BTreeSet<&str> = self.one_handles.iter().map(|d| d.name.as_str()).collect();
        let twos: BTreeSet<&str> = self.two_handles.iter().map(|h| h.name.as_str()).collect();
        for h in &self.two_handles {
            if !h.word.is_reduced() {
                r.push(&[&h.name], "word not freely reduced");
            }
            for g in h.word.generators() {
                if !gens.contains(g) {
                    r.push(&[&h.name, g], "word uses unknown generator");
                }
            }
            for g in h.dot_links.keys() {
                if !gens.contains(g.as_str()) {
                    r.push(&[&h.name, g], "linking recorded with unknown dotted circle");
                }
            }
            for g in &gens {
                let e = h.word.exponent_sum(g);
                if e != h.dot_link(g) {
                    r.push(
                        &[&h.name, g],
                        format!("exponent sum {e} differs from recorded linking {} with dotted circle", h.dot_link(g)),
                    );
                }
            }
            for (other, &v) in &h.links {
                if other == &h.name {
                    r.push(&[&h.name], "self linking recorded outside the framing");
                } else if !twos.contains(other.as_str()) {
                    r.push(&[&h.name, other], "linking with unknown 2-handle");
                } else if self.lk(other, &h.name) != v {
                    r.push(&[&h.name, other], "linking not symmetric");
                }
            }
        }
        r
    }

    /// Whether `pair` satisfies the cork-pair invariants.
    pub fn check_cork_pair(&self, pair: &CorkPair) -> Result<()> {
        let fail = |reason: &str| Error::NotSeparated {
            dotted: pair.dotted.clone(),
            handle: pair.zero_handle.clone(),
            reason: reason.into(),
        };
        if !self.has_generator(&pair.dotted) {
            return Err(Error::HandleNotFound(pair.dotted.clone()));
        }
        let h = self.two_handle(&pair.zero_handle)?;
        if h.word.exponent_sum(&pair.dotted).abs() != 1 {
            return Err(fail("exponent sum of the 0-framed handle in the dotted generator is not ±1"));
        }
        if h.framing != 0 {
            return Err(fail("framing is not 0"));
        }
        if h.word.generators().any(|g| g != pair.dotted) {
            return Err(fail("0-framed handle runs over other dotted circles"));
        }
        if self.two_handles.iter().any(|o| o.name != h.name && o.word.contains(&pair.dotted)) {
            return Err(fail("another 2-handle runs over the dotted circle"));
        }
        if h.links.values().any(|&v| v != 0) {
            return Err(fail("0-framed handle links other 2-handles"));
        }
        Ok(())
    }

    /// Wheel cork pairs `(dotted, 0-framed)` in index order.
    pub fn wheel_pairs(&self) -> Vec<CorkPair> {
        let m = self.meta.as_ref().map_or(1, |x| x.m);
        let mut out: Vec<(usize, CorkPair)> = self
            .one_handles
            .iter()
            .filter_map(|d| {
                let role = d.role?;
                let partner = self.two_handles.iter().find(|h| h.role == Some(role.partner()))?;
                Some((role.index, CorkPair { dotted: d.name.clone(), zero_handle: partner.name.clone(), m }))
            })
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out.into_iter().map(|(_, p)| p).collect()
    }

    /// Renames components everywhere (words, links, names).
    pub fn renamed(&self, map: &BTreeMap<String, String>) -> KirbyDatum {
        let f = |s: &str| map.get(s).cloned().unwrap_or_else(|| s.to_string());
        let mut d = self.clone();
        for g in &mut d.one_handles {
            g.name = f(&g.name);
        }
        for h in &mut d.two_handles {
            h.name = f(&h.name);
            h.word = h.word.relabel(|g| (f(g), 1));
            h.links = h.links.iter().map(|(k, v)| (f(k), *v)).collect();
            h.dot_links = h.dot_links.iter().map(|(k, v)| (f(k), *v)).collect();
        }
        d
    }

    /// Boundary sum: disjoint union of diagrams. Names must be disjoint.
    pub fn boundary_sum(&self, other: &KirbyDatum) -> Result<KirbyDatum> {
        let mut d = self.clone();
        for g in &other.one_handles {
            if d.contains_name(&g.name) {
                return Err(Error::DuplicateHandle(g.name.clone()));
            }
            d.one_handles.push(g.clone());
        }
        for h in &other.two_handles {
            if d.contains_name(&h.name) {
                return Err(Error::DuplicateHandle(h.name.clone()));
            }
            d.two_handles.push(h.clone());
        }
        d.three_handles += other.three_handles;
        d.meta = None;
        Ok(d)
    }
}

/// Default bound on the number of handles for [`isomorphic`].
pub const DEFAULT_ISO_BOUND: usize = 24;

/// A witnessing relabeling between two data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isomorphism {
    /// Dotted generator map `g -> (g', ±1)`.
    pub generators: BTreeMap<String, (String, i8)>,
    /// 2-handle map `h -> (h', orientation ±1)`.
    pub handles: BTreeMap<String, (String, i8)>,
}

impl Isomorphism {
    pub fn is_identity(&self) -> bool {
        self.generators.iter().all(|(a, (b, s))| a == b && *s == 1)
            && self.handles.iter().all(|(a, (b, _))| a == b)
    }
}

pub fn isomorphic(a: &KirbyDatum, b: &KirbyDatum) -> Result<Option<Isomorphism>> {
    isomorphic_with_bound(a, b, DEFAULT_ISO_BOUND)
}

/// Searches for a relabeling of generators and 2-handles (with sign
/// flips) preserving wheel circle kinds, framings, 2-handle linkings,
/// 3-handle counts and words up to cyclic permutation and inversion.
pub fn isomorphic_with_bound(a: &KirbyDatum, b: &KirbyDatum, bound: usize) -> Result<Option<Isomorphism>> {
    for d in [a, b] {
        if d.handle_count() > bound {
            return Err(Error::SearchBudgetExceeded { handles: d.handle_count(), bound });
        }
    }
    if a.one_handles.len() != b.one_handles.len()
        || a.two_handles.len() != b.two_handles.len()
        || a.three_handles != b.three_handles
    {
        return Ok(None);
    }
    let kind = |r: Option<Role>| r.map(|r| r.circle);
    let count_kinds = |d: &KirbyDatum| {
        let mut g: Vec<_> = d.one_handles.iter().map(|x| kind(x.role)).collect();
        let mut h: Vec<_> = d.two_handles.iter().map(|x| kind(x.role)).collect();
        g.sort();
        h.sort();
        (g, h)
    };
    if count_kinds(a) != count_kinds(b) {
        return Ok(None);
    }

    let sig = |d: &KirbyDatum, h: &TwoHandle| {
        let mut links: Vec<i64> = d.two_handles.iter().filter(|o| o.name != h.name).map(|o| h.link(&o.name).abs()).collect();
        links.sort();
        (h.framing, h.word.cyclically_reduced().len(), links, kind(h.role))
    };
    let mut order: Vec<usize> = (0..a.two_handles.len()).collect();
    order.sort_by(|&i, &j| {
        let (hi, hj) = (&a.two_handles[i], &a.two_handles[j]);
        sig(a, hi).cmp(&sig(a, hj)).then_with(|| hi.name.cmp(&hj.name))
    });
    let mut targets: Vec<usize> = (0..b.two_handles.len()).collect();
    targets.sort_by(|&i, &j| b.two_handles[i].name.cmp(&b.two_handles[j].name));
    let b_sigs: Vec<_> = b.two_handles.iter().map(|h| sig(b, h)).collect();
    let a_sigs: Vec<_> = a.two_handles.iter().map(|h| sig(a, h)).collect();

    let gen_kind_a: BTreeMap<&str, Option<Circle>> = a.one_handles.iter().map(|g| (g.name.as_str(), kind(g.role))).collect();
    let gen_kind_b: BTreeMap<&str, Option<Circle>> = b.one_handles.iter().map(|g| (g.name.as_str(), kind(g.role))).collect();

    let mut st = IsoState {
        a,
        b,
        order,
        targets,
        a_sigs,
        b_sigs,
        gen_kind_a,
        gen_kind_b,
        gmap: BTreeMap::new(),
        gused: BTreeSet::new(),
        hmap: vec![None; a.two_handles.len()],
        hused: vec![false; b.two_handles.len()],
    };
    if st.search(0) {
        Ok(Some(st.into_witness()))
    } else {
        Ok(None)
    }
}

struct IsoState<'a> {
    a: &'a KirbyDatum,
    b: &'a KirbyDatum,
    order: Vec<usize>,
    targets: Vec<usize>,
    a_sigs: Vec<(i64, usize, Vec<i64>, Option<Circle>)>,
    b_sigs: Vec<(i64, usize, Vec<i64>, Option<Circle>)>,
    gen_kind_a: BTreeMap<&'a str, Option<Circle>>,
    gen_kind_b: BTreeMap<&'a str, Option<Circle>>,
    gmap: BTreeMap<String, (String, i8)>,
    gused: BTreeSet<String>,
    hmap: Vec<Option<(usize, i8)>>,
    hused: Vec<bool>,
}

impl IsoState<'_> {
    fn search(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return self.complete_generators();
        }
        let i = self.order[depth];
        let src = &self.a.two_handles[i];
        for ti in 0..self.targets.len() {
            let t = self.targets[ti];
            if self.hused[t] || self.a_sigs[i] != self.b_sigs[t] {
                continue;
            }
            let dst = &self.b.two_handles[t];
            // Each alignment of the source word with a cyclic variant of the target.
            let source = src.word.cyclically_reduced();
            let variants = dst.word.cyclic_variants();
            let mut tried: BTreeSet<(Vec<(String, String, i8)>, i8)> = BTreeSet::new();
            for (variant, orient) in variants {
                let Some(assign) = self.align(&source, &variant) else { continue };
                let key: Vec<_> = assign.iter().map(|(g, (h, s))| (g.clone(), h.clone(), *s)).collect();
                // Orientation of the source handle: inverting the target word flips it.
                let eps = if source.is_empty() { None } else { Some(orient) };
                for e in eps.map_or_else(|| vec![1i8, -1], |e| vec![e]) {
                    if !tried.insert((key.clone(), e)) {
                        continue;
                    }
                    if !self.links_consistent(i, t, e) {
                        continue;
                    }
                    let added: Vec<String> = assign.keys().filter(|g| !self.gmap.contains_key(*g)).cloned().collect();
                    for g in &added {
                        let v = assign[g].clone();
                        self.gused.insert(v.0.clone());
                        self.gmap.insert(g.clone(), v);
                    }
                    self.hmap[i] = Some((t, e));
                    self.hused[t] = true;
                    if self.search(depth + 1) {
                        return true;
                    }
                    self.hmap[i] = None;
                    self.hused[t] = false;
                    for g in &added {
                        let (h, _) = self.gmap.remove(g).unwrap();
                        self.gused.remove(&h);
                    }
                }
            }
        }
        false
    }

    /// Letter-by-letter generator assignment making `source` map onto
    /// `target`, consistent with the current partial map.
    fn align(&self, source: &Word, target: &Word) -> Option<BTreeMap<String, (String, i8)>> {
        if source.len() != target.len() {
            return None;
        }
        let mut assign: BTreeMap<String, (String, i8)> = BTreeMap::new();
        let mut used: BTreeSet<String> = BTreeSet::new();
        for (x, y) in source.letters().iter().zip(target.letters()) {
            let s = x.sign * y.sign;
            let want = (y.gen.clone(), s);
            if let Some(cur) = self.gmap.get(&x.gen).or_else(|| assign.get(&x.gen)) {
                if *cur != want {
                    return None;
                }
                continue;
            }
            if self.gused.contains(&y.gen) || used.contains(&y.gen) {
                return None;
            }
            if self.gen_kind_a.get(x.gen.as_str()) != self.gen_kind_b.get(y.gen.as_str()) {
                return None;
            }
            used.insert(y.gen.clone());
            assign.insert(x.gen.clone(), want);
        }
        Some(assign)
    }

    fn links_consistent(&self, i: usize, t: usize, e: i8) -> bool {
        let src = &self.a.two_handles[i];
        let dst = &self.b.two_handles[t];
        self.hmap.iter().enumerate().all(|(j, m)| match m {
            None => true,
            Some((u, f)) => {
                let lhs = src.link(&self.a.two_handles[j].name) * (e as i64) * (*f as i64);
                lhs == dst.link(&self.b.two_handles[*u].name)
            }
        })
    }

    /// Generators not occurring in any word are matched by kind.
    fn complete_generators(&mut self) -> bool {
        let free_a: Vec<&str> = self
            .a
            .one_handles
            .iter()
            .map(|g| g.name.as_str())
            .filter(|g| !self.gmap.contains_key(*g))
            .collect();
        let mut free_b: Vec<&str> = self
            .b
            .one_handles
            .iter()
            .map(|g| g.name.as_str())
            .filter(|g| !self.gused.contains(*g))
            .collect();
        for g in free_a {
            let k = self.gen_kind_a[g];
            let Some(pos) = free_b.iter().position(|h| self.gen_kind_b[h] == k) else {
                return false;
            };
            let h = free_b.remove(pos);
            self.gmap.insert(g.to_string(), (h.to_string(), 1));
            self.gused.insert(h.to_string());
        }
        true
    }

    fn into_witness(self) -> Isomorphism {
        let handles = self
            .hmap
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let (t, e) = m.expect("complete map");
                (self.a.two_handles[i].name.clone(), (self.b.two_handles[t].name.clone(), e))
            })
            .collect();
        Isomorphism { generators: self.gmap, handles }
    }
}
