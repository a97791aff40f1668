//! Kirby moves on data, cork twists, rotations and replayable traces.
//!
//! Every move is a pure function `KirbyDatum -> KirbyDatum`. A
//! [`MoveTrace`] records each applied [`Move`] with content hashes of the
//! data before and after, so a trace can be replayed and audited.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::datum::{Circle, DottedCircle, FamilyKind, FamilyMeta, KirbyDatum, Role, TwoHandle};
use crate::error::{Error, Result};
use crate::seq::{StarZeroSequence, Symbol};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Front,
    Back,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    #[serde(rename = "slide_2_over_2")]
    Slide22 { handle: String, over: String, sign: i8 },
    #[serde(rename = "slide_2_over_1")]
    Slide21 { handle: String, generator: String, sign: i8, end: End },
    #[serde(rename = "cancel_1_2")]
    Cancel12 { generator: String, handle: String },
    #[serde(rename = "remove_split_zero_handle")]
    RemoveSplitZero { handle: String },
    #[serde(rename = "attach_2handle")]
    Attach {
        name: String,
        word: Word,
        framing: i64,
        #[serde(default)]
        links: BTreeMap<String, i64>,
    },
    BlowUp { name: String, sign: i8 },
    BlowDown { handle: String },
    #[serde(rename = "cork_twist_pair")]
    CorkTwist { dotted: String, handle: String },
    Rotate { shift: i64 },
    TwistEmbeddedCork { shift: i64 },
    ReindexWheel,
}

impl Move {
    pub fn name(&self) -> &'static str {
        match self {
            Move::Slide22 { .. } => "slide_2_over_2",
            Move::Slide21 { .. } => "slide_2_over_1",
            Move::Cancel12 { .. } => "cancel_1_2",
            Move::RemoveSplitZero { .. } => "remove_split_zero_handle",
            Move::Attach { .. } => "attach_2handle",
            Move::BlowUp { .. } => "blow_up",
            Move::BlowDown { .. } => "blow_down",
            Move::CorkTwist { .. } => "cork_twist_pair",
            Move::Rotate { .. } => "rotate",
            Move::TwistEmbeddedCork { .. } => "twist_embedded_cork",
            Move::ReindexWheel => "reindex_wheel",
        }
    }

    pub fn apply(&self, d: &KirbyDatum) -> Result<KirbyDatum> {
        match self {
            Move::Slide22 { handle, over, sign } => slide_2_over_2(d, handle, over, *sign),
            Move::Slide21 { handle, generator, sign, end } => slide_2_over_1(d, handle, generator, *sign, *end),
            Move::Cancel12 { generator, handle } => cancel_1_2(d, generator, handle),
            Move::RemoveSplitZero { handle } => remove_split_zero_handle(d, handle),
            Move::Attach { name, word, framing, links } => attach_2handle(d, name, word.clone(), *framing, links),
            Move::BlowUp { name, sign } => blow_up(d, name, *sign),
            Move::BlowDown { handle } => blow_down(d, handle),
            Move::CorkTwist { dotted, handle } => cork_twist_pair(d, dotted, handle),
            Move::Rotate { shift } => rotate(d, *shift).map(|(r, _)| r),
            Move::TwistEmbeddedCork { shift } => twist_embedded_cork(d, *shift),
            Move::ReindexWheel => reindex_wheel(d),
        }
    }
}

fn check_sign(sign: i8) -> Result<()> {
    if sign == 1 || sign == -1 {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("sign must be ±1, got {sign}")))
    }
}

/// Slides `handle` over `over`, inserting `over`'s word at letter `pos`.
fn slide_at(d: &KirbyDatum, handle: &str, over: &str, sign: i8, pos: Option<usize>) -> Result<KirbyDatum> {
    check_sign(sign)?;
    if handle == over {
        return Err(Error::SelfSlide(handle.into()));
    }
    let h2 = d.two_handle(over)?.clone();
    let h1 = d.two_handle(handle)?.clone();
    let s = sign as i64;
    let lk12 = h1.link(over);
    let mut out = d.clone();

    let inserted = h2.word.pow(s);
    let word = match pos {
        Some(p) => h1.word.insert_at(p, &inserted),
        None => h1.word.concat(&inserted),
    };
    {
        let h = out.two_handle_mut(handle)?;
        h.word = word;
        h.framing = h1.framing + h2.framing + 2 * s * lk12;
        for (g, v) in &h2.dot_links {
            *h.dot_links.entry(g.clone()).or_insert(0) += s * v;
        }
        h.dot_links.retain(|_, v| *v != 0);
    }
    for other in d.two_handles.iter().filter(|o| o.name != handle && o.name != over) {
        let v = h1.link(&other.name) + s * h2.link(&other.name);
        out.set_lk(handle, &other.name, v)?;
    }
    out.set_lk(handle, over, lk12 + s * h2.framing)?;
    Ok(out)
}

/// Handle slide of `handle` over `over`; on the full linking matrix this is
/// the congruence by `I + sign·E_{over,handle}`.
pub fn slide_2_over_2(d: &KirbyDatum, handle: &str, over: &str, sign: i8) -> Result<KirbyDatum> {
    slide_at(d, handle, over, sign, None)
}

/// Multiplies the word of `handle` by `generator^sign` at one end and
/// updates its dotted linking record; framing and 2-handle linkings are
/// untouched.
pub fn slide_2_over_1(d: &KirbyDatum, handle: &str, generator: &str, sign: i8, end: End) -> Result<KirbyDatum> {
    check_sign(sign)?;
    if !d.has_generator(generator) {
        return Err(Error::HandleNotFound(generator.into()));
    }
    let mut out = d.clone();
    let h = out.two_handle_mut(handle)?;
    let g = Word::gen(generator, sign);
    h.word = match end {
        End::Front => g.concat(&h.word),
        End::Back => h.word.concat(&g),
    };
    *h.dot_links.entry(generator.to_string()).or_insert(0) += sign as i64;
    h.dot_links.retain(|_, v| *v != 0);
    Ok(out)
}

/// Cancels dotted `generator` against `handle`, whose word must reduce to
/// `generator^{±1}`. Other handles are first slid off the dotted circle.
pub fn cancel_1_2(d: &KirbyDatum, generator: &str, handle: &str) -> Result<KirbyDatum> {
    if !d.has_generator(generator) {
        return Err(Error::HandleNotFound(generator.into()));
    }
    let h = d.two_handle(handle)?;
    let delta = match h.word.reduced().single_letter() {
        Some((g, s)) if g == generator => s,
        _ => return Err(Error::NotCancellable { generator: generator.into(), handle: handle.into() }),
    };
    let mut cur = d.clone();
    let others: Vec<String> = d.two_handles.iter().filter(|o| o.name != handle).map(|o| o.name.clone()).collect();
    for name in others {
        while let Some((pos, eps)) = cur
            .two_handle(&name)?
            .word
            .letters()
            .iter()
            .enumerate()
            .find(|(_, l)| l.gen == generator)
            .map(|(k, l)| (k, l.sign))
        {
            // Inserting (g^delta)^s right after a letter g^eps cancels it when s = -eps·delta.
            cur = slide_at(&cur, &name, handle, -eps * delta, Some(pos + 1))?;
        }
    }
    cur.one_handles.retain(|g| g.name != generator);
    cur.two_handles.retain(|o| o.name != handle);
    for o in &mut cur.two_handles {
        o.links.remove(handle);
        o.dot_links.remove(generator);
    }
    Ok(cur)
}

/// Removes a split 0-framed unknot, modeling its cancellation against a
/// 3-handle. The stored 3-handle count is unchanged.
pub fn remove_split_zero_handle(d: &KirbyDatum, handle: &str) -> Result<KirbyDatum> {
    let h = d.two_handle(handle)?;
    let linked = d.two_handles.iter().any(|o| o.name != handle && o.link(handle) != 0);
    if !h.word.is_empty() || h.framing != 0 || h.links.values().any(|&v| v != 0) || linked {
        return Err(Error::NotSplit(handle.into()));
    }
    let mut out = d.clone();
    out.two_handles.retain(|o| o.name != handle);
    Ok(out)
}

/// Adds a 2-handle with the given word, framing and 2-handle linkings.
pub fn attach_2handle(
    d: &KirbyDatum,
    name: &str,
    word: Word,
    framing: i64,
    links: &BTreeMap<String, i64>,
) -> Result<KirbyDatum> {
    if d.contains_name(name) {
        return Err(Error::DuplicateHandle(name.into()));
    }
    if let Some(g) = word.generators().find(|g| !d.has_generator(g)) {
        return Err(Error::UnknownGenerator(g.into()));
    }
    for k in links.keys() {
        if d.two_handle(k).is_err() {
            return Err(Error::BadLinking(format!("linking given with unknown 2-handle {k}")));
        }
    }
    let mut out = d.clone();
    out.two_handles.push(TwoHandle::new(name, word.reduced(), framing));
    for (k, &v) in links {
        out.set_lk(name, k, v)?;
    }
    Ok(out)
}

/// Positional variant: `linking[i]` is the linking with the i-th existing
/// 2-handle.
pub fn attach_2handle_vec(d: &KirbyDatum, name: &str, word: Word, framing: i64, linking: &[i64]) -> Result<KirbyDatum> {
    if linking.len() != d.two_handles.len() {
        return Err(Error::BadLinking(format!(
            "linking vector has length {}, datum has {} 2-handles",
            linking.len(),
            d.two_handles.len()
        )));
    }
    let links = d.two_handles.iter().zip(linking).filter(|(_, &v)| v != 0).map(|(h, &v)| (h.name.clone(), v)).collect();
    attach_2handle(d, name, word, framing, &links)
}

/// Adds a split `±1`-framed unknot.
pub fn blow_up(d: &KirbyDatum, name: &str, sign: i8) -> Result<KirbyDatum> {
    check_sign(sign)?;
    attach_2handle(d, name, Word::empty(), sign as i64, &BTreeMap::new())
}

/// Blows down a `±1`-framed handle with empty word: the linking matrix
/// of the rest becomes `L - v v^T / f`.
pub fn blow_down(d: &KirbyDatum, handle: &str) -> Result<KirbyDatum> {
    let h = d.two_handle(handle)?.clone();
    if !(h.framing == 1 || h.framing == -1) || !h.word.is_empty() {
        return Err(Error::NotBlowDownable(handle.into()));
    }
    // -v v^T / f = -f v v^T for f = ±1
    let c = -h.framing;
    let mut out = d.clone();
    out.two_handles.retain(|o| o.name != handle);
    let names: Vec<String> = out.two_handles.iter().map(|o| o.name.clone()).collect();
    for (i, a) in names.iter().enumerate() {
        let ka = h.link(a);
        if ka == 0 {
            continue;
        }
        out.two_handle_mut(a)?.framing += c * ka * ka;
        for b in &names[i + 1..] {
            let kb = h.link(b);
            if kb != 0 {
                let v = out.lk(a, b) + c * ka * kb;
                out.set_lk(a, b, v)?;
            }
        }
    }
    for o in &mut out.two_handles {
        o.links.remove(handle);
    }
    Ok(out)
}

/// Exchanges the dot and the 0 of an algebraically separated cork pair.
pub fn cork_twist_pair(d: &KirbyDatum, dotted: &str, handle: &str) -> Result<KirbyDatum> {
    let m = d.meta.as_ref().map_or(1, |x| x.m);
    d.check_cork_pair(&crate::datum::CorkPair { dotted: dotted.into(), zero_handle: handle.into(), m })?;
    let h = d.two_handle(handle)?.clone();
    let delta = h.word.exponent_sum(dotted);
    let g_role = d.one_handles.iter().find(|g| g.name == dotted).and_then(|g| g.role);
    let mut out = d.clone();
    for g in &mut out.one_handles {
        if g.name == dotted {
            *g = DottedCircle { name: h.name.clone(), role: h.role };
        }
    }
    for o in &mut out.two_handles {
        if o.name == handle {
            let mut t = TwoHandle::new(dotted, Word::gen(&h.name, delta as i8), 0);
            t.role = g_role;
            *o = t;
        }
    }
    if let (Some(meta), Some(role)) = (out.meta.as_mut(), g_role.or(h.role)) {
        if let Some(seq) = meta.seq.as_mut() {
            *seq = seq.flipped_at(role.index as i64);
            if !matches!(meta.family, FamilyKind::E | FamilyKind::Cm) {
                meta.family = FamilyKind::X;
            }
        }
    }
    Ok(out)
}

/// Applies the dot-zero exchange to every wheel pair.
pub fn dot_zero_exchange(d: &KirbyDatum) -> Result<KirbyDatum> {
    let mut cur = d.clone();
    for p in d.wheel_pairs() {
        cur = cork_twist_pair(&cur, &p.dotted, &p.zero_handle)?;
    }
    Ok(cur)
}

fn wheel_size(d: &KirbyDatum) -> Result<usize> {
    let meta = d.meta.as_ref().ok_or(Error::NotWheelFamily)?;
    if meta.seq.is_none() || meta.n == 0 {
        return Err(Error::NotWheelFamily);
    }
    let roles = d.one_handles.iter().filter_map(|g| g.role).count() + d.two_handles.iter().filter_map(|h| h.role).count();
    if roles != 2 * meta.n {
        return Err(Error::NotWheelFamily);
    }
    Ok(meta.n)
}

fn role_map(d: &KirbyDatum, f: impl Fn(Role) -> Role) -> (BTreeMap<String, String>, BTreeMap<String, Role>) {
    let mut names = BTreeMap::new();
    let mut roles = BTreeMap::new();
    let all = d
        .one_handles
        .iter()
        .map(|g| (&g.name, g.role))
        .chain(d.two_handles.iter().map(|h| (&h.name, h.role)));
    for (name, role) in all {
        if let Some(r) = role {
            let nr = f(r);
            names.insert(name.clone(), nr.name());
            roles.insert(nr.name(), nr);
        }
    }
    (names, roles)
}

fn apply_role_map(d: &KirbyDatum, names: &BTreeMap<String, String>, roles: &BTreeMap<String, Role>) -> KirbyDatum {
    let mut out = d.renamed(names);
    for g in &mut out.one_handles {
        if g.role.is_some() {
            g.role = roles.get(&g.name).copied();
        }
    }
    for h in &mut out.two_handles {
        if h.role.is_some() {
            h.role = roles.get(&h.name).copied();
        }
    }
    out
}

/// Reads the `{*,0}`-sequence off the wheel roles, in index order.
pub fn wheel_sequence(d: &KirbyDatum) -> Option<StarZeroSequence> {
    let mut entries: BTreeMap<usize, Symbol> = BTreeMap::new();
    for g in &d.one_handles {
        if let Some(r) = g.role {
            let s = match r.circle {
                Circle::Alpha => Symbol::Star,
                Circle::Beta => Symbol::Zero,
            };
            entries.insert(r.index, s);
        }
    }
    StarZeroSequence::new(entries.into_values().collect()).ok()
}

/// The rotation `α_j -> α_{j-i}`, `β_j -> β_{j-i}` (indices mod n). The image
/// of `X_{n,m}(x)` is `X_{n,m}(S_{-i}(x))`. Also returns the index map.
pub fn rotate(d: &KirbyDatum, i: i64) -> Result<(KirbyDatum, Vec<usize>)> {
    let n = wheel_size(d)?;
    let shift = |j: usize| (j as i64 - i).rem_euclid(n as i64) as usize;
    let (names, roles) = role_map(d, |r| Role { circle: r.circle, index: shift(r.index) });
    let mut out = apply_role_map(d, &names, &roles);
    if let Some(meta) = out.meta.as_mut() {
        let old = meta.seq.clone().expect("checked by wheel_size");
        let new = old.shift(-i);
        if new != old && !matches!(meta.family, FamilyKind::E) {
            meta.family = FamilyKind::X;
        }
        meta.seq = Some(new);
    }
    Ok((out, (0..n).map(shift).collect()))
}

/// Whether rotating by `i` maps the datum onto itself, labels included.
pub fn rotation_is_automorphism(d: &KirbyDatum, i: i64) -> Result<bool> {
    let (r, _) = rotate(d, i)?;
    Ok(r.canonical() == d.canonical())
}

/// Order of the index permutation `j -> j - i` on `Z/n`.
pub fn rotation_permutation_order(n: usize, i: i64) -> usize {
    let perm: Vec<usize> = (0..n).map(|j| (j as i64 - i).rem_euclid(n as i64) as usize).collect();
    let mut cur: Vec<usize> = (0..n).collect();
    for k in 1..=n {
        cur = cur.iter().map(|&j| perm[j]).collect();
        if cur.iter().enumerate().all(|(a, &b)| a == b) {
            return k;
        }
    }
    n
}

/// Cork twist of the embedded wheel cork by `τ^k`: every handle outside the
/// wheel that was attached along a meridian of the wheel component with
/// index `j` is reattached along the same kind of meridian at `j + k`.
pub fn twist_embedded_cork(d: &KirbyDatum, k: i64) -> Result<KirbyDatum> {
    let n = wheel_size(d)?;
    let role_of: BTreeMap<&str, Role> = d
        .one_handles
        .iter()
        .filter_map(|g| g.role.map(|r| (g.name.as_str(), r)))
        .chain(d.two_handles.iter().filter_map(|h| h.role.map(|r| (h.name.as_str(), r))))
        .collect();
    let moved = |r: Role| Role { circle: r.circle, index: (r.index as i64 + k).rem_euclid(n as i64) as usize };
    let target = |r: Role| -> Result<(String, bool)> {
        let nr = moved(r);
        if let Some(g) = d.one_handles.iter().find(|g| g.role == Some(nr)) {
            return Ok((g.name.clone(), true));
        }
        let h = d.two_handles.iter().find(|h| h.role == Some(nr)).ok_or(Error::NotWheelFamily)?;
        Ok((h.name.clone(), false))
    };

    let mut out = d.clone();
    let externals: Vec<String> = d.two_handles.iter().filter(|h| h.role.is_none()).map(|h| h.name.clone()).collect();
    // Clear old wheel links of external handles on both sides.
    for e in &externals {
        for w in d.two_handles.iter().filter(|h| h.role.is_some()) {
            out.set_lk(e, &w.name, 0)?;
        }
    }
    for e in &externals {
        let old = d.two_handle(e)?.clone();
        let mut letters: Vec<Letter> = Vec::new();
        let mut new_links: BTreeMap<String, i64> = BTreeMap::new();
        for l in old.word.letters() {
            match role_of.get(l.gen.as_str()) {
                Some(&r) => {
                    let (name, dotted) = target(r)?;
                    if dotted {
                        letters.push(Letter::new(name, l.sign));
                    } else {
                        *new_links.entry(name).or_insert(0) += l.sign as i64;
                    }
                }
                None => letters.push(l.clone()),
            }
        }
        for (other, &v) in &old.links {
            if let Some(&r) = role_of.get(other.as_str()) {
                let (name, dotted) = target(r)?;
                if dotted {
                    let s = if v > 0 { 1 } else { -1 };
                    letters.extend(std::iter::repeat_n(Letter::new(name, s), v.unsigned_abs() as usize));
                } else {
                    *new_links.entry(name).or_insert(0) += v;
                }
            }
        }
        let word = Word::from_letters(letters);
        {
            let h = out.two_handle_mut(e)?;
            h.dot_links = word.exponent_sums();
            h.word = word;
        }
        for (name, v) in new_links {
            let cur = out.lk(e, &name);
            out.set_lk(e, &name, cur + v)?;
        }
    }
    if let Some(meta) = out.meta.as_mut() {
        meta.index = Some(k.rem_euclid(n as i64) as usize);
    }
    Ok(out)
}

/// Renumbers wheel indices to `0..n'` in increasing order and refreshes
/// the family metadata from the roles.
pub fn reindex_wheel(d: &KirbyDatum) -> Result<KirbyDatum> {
    let mut indices: Vec<usize> = d
        .one_handles
        .iter()
        .filter_map(|g| g.role)
        .chain(d.two_handles.iter().filter_map(|h| h.role))
        .map(|r| r.index)
        .collect();
    indices.sort();
    indices.dedup();
    let pos: BTreeMap<usize, usize> = indices.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let (names, roles) = role_map(d, |r| Role { circle: r.circle, index: pos[&r.index] });
    let mut out = apply_role_map(d, &names, &roles);
    let seq = wheel_sequence(&out).ok_or(Error::NotWheelFamily)?;
    let m = d.meta.as_ref().map_or(1, |x| x.m);
    let family = if seq.len() == 1 { FamilyKind::Cm } else { FamilyKind::X };
    out.meta = Some(FamilyMeta { family, n: seq.len(), m, seq: Some(seq), index: None });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Traces

/// Content hash of the canonical serialization.
pub fn datum_hash(d: &KirbyDatum) -> String {
    let bytes = serde_json::to_vec(&d.canonical()).expect("datum serializes");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    #[serde(flatten)]
    pub mv: Move,
    pub pre: String,
    pub post: String,
}

/// Declared result of a trace, checked by isomorphism after replay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceTarget {
    pub family: FamilyKind,
    pub n: usize,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seq: Option<StarZeroSequence>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveTrace {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TraceTarget>,
    pub steps: Vec<TraceStep>,
}

impl MoveTrace {
    pub fn concat(mut self, other: MoveTrace) -> MoveTrace {
        self.steps.extend(other.steps);
        self.target = other.target.or(self.target);
        self
    }
}

/// Applies moves while recording the trace.
#[derive(Debug, Clone)]
pub struct Recorder {
    datum: KirbyDatum,
    trace: MoveTrace,
}

impl Recorder {
    pub fn new(initial: KirbyDatum) -> Self {
        Recorder { datum: initial, trace: MoveTrace::default() }
    }

    pub fn apply(&mut self, mv: Move) -> Result<&KirbyDatum> {
        let pre = datum_hash(&self.datum);
        let next = mv.apply(&self.datum)?;
        let post = datum_hash(&next);
        self.trace.steps.push(TraceStep { mv, pre, post });
        self.datum = next;
        Ok(&self.datum)
    }

    pub fn datum(&self) -> &KirbyDatum {
        &self.datum
    }

    pub fn finish(self) -> (KirbyDatum, MoveTrace) {
        (self.datum, self.trace)
    }
}

/// Replays `trace` from `initial`, checking the hash chain at every step.
pub fn replay(initial: &KirbyDatum, trace: &MoveTrace) -> Result<KirbyDatum> {
    let mut cur = initial.clone();
    for (k, step) in trace.steps.iter().enumerate() {
        let found = datum_hash(&cur);
        if found != step.pre {
            return Err(Error::HashMismatch { step: k, expected: step.pre.clone(), found });
        }
        cur = step.mv.apply(&cur)?;
        let found = datum_hash(&cur);
        if found != step.post {
            return Err(Error::HashMismatch { step: k, expected: step.post.clone(), found });
        }
    }
    Ok(cur)
}

/// Whether index `i` of `x` may be deleted: the shortened sequence must
/// be non-constant, unless it is the single-pair cork itself.
pub fn is_deletable(x: &StarZeroSequence, i: usize) -> bool {
    match x.deleted_at(i) {
        Some(rest) => rest.len() == 1 || !rest.is_constant(),
        None => false,
    }
}

/// Move script removing pair `i` from `X_{n,m}(x)`: attach a meridional
/// 0-framed 2-handle, cancel a 1-/2-handle pair, cancel the split 0-framed
/// handle against a 3-handle, then renumber the wheel.
pub fn deletion_script(n: usize, m: u32, x: &StarZeroSequence, i: usize) -> Result<MoveTrace> {
    if n < 2 || i >= n {
        return Err(Error::BadIndex { index: i as i64, n });
    }
    if x.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x.len() });
    }
    if !is_deletable(x, i) {
        return Err(Error::BadParameter(format!("deleting index {i} of {x} leaves a constant sequence")));
    }
    let start = crate::families::build_x(n, m, x)?;
    let (_, trace) = deletion_on(&start, i)?;
    let x2 = x.deleted_at(i).expect("deletable");
    Ok(MoveTrace {
        target: Some(TraceTarget { family: FamilyKind::X, n: n - 1, m, seq: Some(x2) }),
        steps: trace.steps,
    })
}

/// The deletion moves applied to an arbitrary wheel datum at index `i`.
pub fn deletion_on(d: &KirbyDatum, i: usize) -> Result<(KirbyDatum, MoveTrace)> {
    let n = wheel_size(d)?;
    if i >= n {
        return Err(Error::BadIndex { index: i as i64, n });
    }
    let alpha = d.component_by_role(Role::alpha(i)).ok_or(Error::NotWheelFamily)?.to_string();
    let beta = d.component_by_role(Role::beta(i)).ok_or(Error::NotWheelFamily)?.to_string();
    let mu = format!("mu{i}");
    let mut rec = Recorder::new(d.clone());
    if d.has_generator(&alpha) {
        // x_i = *: meridian of the dotted α_i cancels it; β_i falls off split.
        rec.apply(Move::Attach { name: mu.clone(), word: Word::gen(&alpha, 1), framing: 0, links: BTreeMap::new() })?;
        rec.apply(Move::Cancel12 { generator: alpha, handle: mu })?;
        rec.apply(Move::RemoveSplitZero { handle: beta })?;
    } else {
        // x_i = 0: a meridional 0-framed handle on α_i; {β_i, α_i} cancel and
        // the meridian is left split.
        let links = BTreeMap::from([(alpha.clone(), 1)]);
        rec.apply(Move::Attach { name: mu.clone(), word: Word::empty(), framing: 0, links })?;
        rec.apply(Move::Cancel12 { generator: beta, handle: alpha })?;
        rec.apply(Move::RemoveSplitZero { handle: mu })?;
    }
    rec.apply(Move::ReindexWheel)?;
    Ok(rec.finish())
}

/// Chain of deletions from `X_{n,m}(x)` down to `C(m) = X_{1,m}(*)`, always
/// deleting the last deletable index that leaves a `*` behind.
pub fn deletion_chain(n: usize, m: u32, x: &StarZeroSequence) -> Result<MoveTrace> {
    let mut cur = crate::families::build_x(n, m, x)?;
    let mut seq = x.clone();
    let mut trace = MoveTrace::default();
    while seq.len() > 1 {
        let keeps_star = |i: usize| seq.deleted_at(i).is_some_and(|r| r.star_count() > 0);
        let i = (0..seq.len()).rev().find(|&i| is_deletable(&seq, i) && keeps_star(i)).ok_or_else(|| {
            Error::BadParameter(format!("no deletable index in {seq}"))
        })?;
        let (next, t) = deletion_on(&cur, i)?;
        trace.steps.extend(t.steps);
        seq = seq.deleted_at(i).expect("deletable");
        cur = next;
    }
    trace.target = Some(TraceTarget { family: FamilyKind::Cm, n: 1, m, seq: Some(seq) });
    Ok(trace)
}
