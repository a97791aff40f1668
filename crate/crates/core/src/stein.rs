//! Legendrian fronts in Gompf standard form and the `tb - 1` framing check.
//!
//! A front is read left to right as a stack of strands, position 0 on top.
//! Strands passing through 1-handles are declared first; they enter at the
//! left and must reappear in the same order on the right. Events:
//!
//! ```text
//! handle a0 b0:>          # strands of 1-handle a0 (component:direction)
//! lcusp 1 b0 up           # left cusp creating strands 1,2
//! cross 0 +               # crossing of strands 0 and 1, declared sign
//! rcusp 1 b0 down         # right cusp joining strands 1,2
//! twist 1 -m+1            # full twists of strands 1,2, expanded by template
//! ```
//!
//! Cusp marks give the direction of travel through the cusp. A left cusp
//! marked `down` has its upper strand pointing left and its lower strand
//! pointing right; `up` is the reverse. A right cusp marked `down` has its
//! upper strand pointing right and its lower strand pointing left.
//!
//! A crossing is positive when both strands point the same way. Then
//! `tb = writhe - #right cusps` and `rot = (#down - #up) / 2`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::datum::KirbyDatum;
use crate::error::{Error, Result};
use crate::families::read_data_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    Right,
    Left,
}

impl Dir {
    fn sign(self) -> i64 {
        match self {
            Dir::Right => 1,
            Dir::Left => -1,
        }
    }

    fn flipped(self) -> Dir {
        match self {
            Dir::Right => Dir::Left,
            Dir::Left => Dir::Right,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Dir::Right => ">",
            Dir::Left => "<",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mark {
    Up,
    Down,
}

impl Mark {
    fn flipped(self) -> Mark {
        match self {
            Mark::Up => Mark::Down,
            Mark::Down => Mark::Up,
        }
    }

    /// Directions of the (upper, lower) strands at a left cusp.
    fn left_dirs(self) -> (Dir, Dir) {
        match self {
            Mark::Down => (Dir::Left, Dir::Right),
            Mark::Up => (Dir::Right, Dir::Left),
        }
    }

    /// Directions of the (upper, lower) strands at a right cusp.
    fn right_dirs(self) -> (Dir, Dir) {
        match self {
            Mark::Down => (Dir::Right, Dir::Left),
            Mark::Up => (Dir::Left, Dir::Right),
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mark::Up => "up",
            Mark::Down => "down",
        })
    }
}

/// Strands of one component passing through a 1-handle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandlePass {
    pub generator: String,
    pub strands: Vec<(String, Dir)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Event {
    LeftCusp { pos: usize, comp: String, mark: Mark },
    RightCusp { pos: usize, comp: String, mark: Mark },
    Cross { pos: usize, sign: i8 },
    /// `coef·m + constant` full twists on strands `pos`, `pos + 1`.
    Twist { pos: usize, coef: i64, constant: i64 },
}

/// A front as written, possibly with twist macros.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontSource {
    pub handles: Vec<HandlePass>,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TwistKind {
    Parallel,
    Antiparallel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TemplateEvent {
    LeftCusp { offset: usize, mark: Mark },
    RightCusp { offset: usize, mark: Mark },
    Cross { offset: usize, sign: i8 },
}

/// Expansions of one negative full twist, keyed by strand relation and the
/// direction of the upper strand.
#[derive(Debug, Clone, Default)]
pub struct TwistTemplates {
    templates: BTreeMap<(TwistKind, bool), Vec<TemplateEvent>>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_dir(s: &str, line: usize) -> Result<Dir> {
    match s {
        ">" => Ok(Dir::Right),
        "<" => Ok(Dir::Left),
        _ => Err(parse_err(line, format!("bad direction {s:?}"))),
    }
}

fn parse_mark(s: &str, line: usize) -> Result<Mark> {
    match s {
        "up" => Ok(Mark::Up),
        "down" => Ok(Mark::Down),
        _ => Err(parse_err(line, format!("bad cusp mark {s:?}"))),
    }
}

fn parse_sign(s: &str, line: usize) -> Result<i8> {
    match s {
        "+" => Ok(1),
        "-" => Ok(-1),
        _ => Err(parse_err(line, format!("bad crossing sign {s:?}"))),
    }
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| parse_err(line, format!("bad position {s:?}")))
}

/// Parses `a·m + b` written like `-m+1`, `-2m`, `3` or `-2m-1`.
pub fn parse_linear_in_m(s: &str) -> Option<(i64, i64)> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (k, c) in s.char_indices() {
        if k > 0 && (c == '+' || c == '-') {
            terms.push(&s[start..k]);
            start = k;
        }
    }
    terms.push(&s[start..]);
    let (mut coef, mut constant) = (0i64, 0i64);
    for t in terms {
        let (sign, body) = match t.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, t.strip_prefix('+').unwrap_or(t)),
        };
        if let Some(c) = body.strip_suffix('m') {
            let c: i64 = if c.is_empty() { 1 } else { c.parse().ok()? };
            coef += sign * c;
        } else {
            constant += sign * body.parse::<i64>().ok()?;
        }
    }
    Some((coef, constant))
}

fn tokens(line: &str) -> Vec<&str> {
    line.split('#').next().unwrap_or("").split_whitespace().collect()
}

impl FrontSource {
    pub fn parse(text: &str) -> Result<FrontSource> {
        let mut src = FrontSource::default();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let t = tokens(raw);
            if t.is_empty() {
                continue;
            }
            let want = |n: usize| -> Result<()> {
                if t.len() != n {
                    return Err(parse_err(line, format!("{} expects {} fields", t[0], n - 1)));
                }
                Ok(())
            };
            match t[0] {
                "handle" => {
                    if !src.events.is_empty() {
                        return Err(parse_err(line, "handle lines must precede events"));
                    }
                    if t.len() < 2 {
                        return Err(parse_err(line, "handle needs a generator"));
                    }
                    let mut strands = Vec::new();
                    for s in &t[2..] {
                        let (c, d) = s.rsplit_once(':').ok_or_else(|| parse_err(line, format!("bad strand {s:?}")))?;
                        strands.push((c.to_string(), parse_dir(d, line)?));
                    }
                    src.handles.push(HandlePass { generator: t[1].to_string(), strands });
                }
                "lcusp" | "rcusp" => {
                    want(4)?;
                    let pos = parse_usize(t[1], line)?;
                    let comp = t[2].to_string();
                    let mark = parse_mark(t[3], line)?;
                    src.events.push(if t[0] == "lcusp" {
                        Event::LeftCusp { pos, comp, mark }
                    } else {
                        Event::RightCusp { pos, comp, mark }
                    });
                }
                "cross" => {
                    want(3)?;
                    src.events.push(Event::Cross { pos: parse_usize(t[1], line)?, sign: parse_sign(t[2], line)? });
                }
                "twist" => {
                    want(3)?;
                    let (coef, constant) =
                        parse_linear_in_m(t[2]).ok_or_else(|| parse_err(line, format!("bad twist count {:?}", t[2])))?;
                    src.events.push(Event::Twist { pos: parse_usize(t[1], line)?, coef, constant });
                }
                other => return Err(parse_err(line, format!("unknown front event {other:?}"))),
            }
        }
        Ok(src)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for h in &self.handles {
            out.push_str(&format!("handle {}", h.generator));
            for (c, d) in &h.strands {
                out.push_str(&format!(" {c}:{}", d.symbol()));
            }
            out.push('\n');
        }
        for e in &self.events {
            let line = match e {
                Event::LeftCusp { pos, comp, mark } => format!("lcusp {pos} {comp} {mark}"),
                Event::RightCusp { pos, comp, mark } => format!("rcusp {pos} {comp} {mark}"),
                Event::Cross { pos, sign } => format!("cross {pos} {}", if *sign > 0 { "+" } else { "-" }),
                Event::Twist { pos, coef, constant } => format!("twist {pos} {}", linear_to_string(*coef, *constant)),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Expands twist macros for the given `m`.
    pub fn instantiate(&self, m: u32, templates: &TwistTemplates) -> Result<LegendrianFront> {
        let mut stack: Vec<(String, Dir)> = self.handles.iter().flat_map(|h| h.strands.iter().cloned()).collect();
        let mut events = Vec::new();
        for (k, e) in self.events.iter().enumerate() {
            match e {
                Event::Twist { pos, coef, constant } => {
                    let count = coef * m as i64 + constant;
                    if count > 0 {
                        return Err(Error::MalformedFront(format!("event {k}: only negative twists have templates")));
                    }
                    for _ in 0..(-count) {
                        let (top, bottom) = match (stack.get(*pos), stack.get(pos + 1)) {
                            (Some(a), Some(b)) => (a.1, b.1),
                            _ => return Err(Error::MalformedFront(format!("event {k}: twist position {pos} out of range"))),
                        };
                        let kind = if top == bottom { TwistKind::Parallel } else { TwistKind::Antiparallel };
                        let tmpl = templates.get(kind, top)?;
                        for te in tmpl {
                            let ev = match *te {
                                TemplateEvent::LeftCusp { offset, mark } => {
                                    Event::LeftCusp { pos: pos + offset, comp: stack[*pos].0.clone(), mark }
                                }
                                TemplateEvent::RightCusp { offset, mark } => {
                                    Event::RightCusp { pos: pos + offset, comp: stack[pos + offset].0.clone(), mark }
                                }
                                TemplateEvent::Cross { offset, sign } => Event::Cross { pos: pos + offset, sign },
                            };
                            step_stack(&mut stack, &ev, events.len())?;
                            events.push(ev);
                        }
                    }
                }
                ev => {
                    step_stack(&mut stack, ev, events.len())?;
                    events.push(ev.clone());
                }
            }
        }
        LegendrianFront::new(self.handles.clone(), events)
    }
}

fn linear_to_string(coef: i64, constant: i64) -> String {
    match (coef, constant) {
        (0, c) => c.to_string(),
        (a, 0) => format!("{}m", coef_str(a)),
        (a, c) => format!("{}m{:+}", coef_str(a), c),
    }
}

fn coef_str(a: i64) -> String {
    match a {
        1 => String::new(),
        -1 => "-".into(),
        a => a.to_string(),
    }
}

/// Direction bookkeeping only; full validation happens in
/// [`LegendrianFront::new`].
fn step_stack(stack: &mut Vec<(String, Dir)>, ev: &Event, k: usize) -> Result<()> {
    match ev {
        Event::LeftCusp { pos, comp, mark } => {
            if *pos > stack.len() {
                return Err(Error::MalformedFront(format!("event {k}: left cusp position {pos} out of range")));
            }
            let (u, l) = mark.left_dirs();
            stack.splice(*pos..*pos, [(comp.clone(), u), (comp.clone(), l)]);
        }
        Event::RightCusp { pos, .. } => {
            if pos + 1 >= stack.len() {
                return Err(Error::MalformedFront(format!("event {k}: right cusp position {pos} out of range")));
            }
            stack.drain(*pos..pos + 2);
        }
        Event::Cross { pos, .. } => {
            if pos + 1 >= stack.len() {
                return Err(Error::MalformedFront(format!("event {k}: crossing position {pos} out of range")));
            }
            stack.swap(*pos, pos + 1);
        }
        Event::Twist { .. } => return Err(Error::MalformedFront(format!("event {k}: unexpanded twist"))),
    }
    Ok(())
}

impl TwistTemplates {
    /// Template file: blocks `template <parallel|antiparallel> <dir>` ...
    /// `end`, where `<dir>` is the direction of the upper strand and event
    /// positions are offsets from the twisted pair.
    pub fn parse(text: &str) -> Result<TwistTemplates> {
        let mut out = TwistTemplates::default();
        let mut current: Option<((TwistKind, bool), Vec<TemplateEvent>)> = None;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let t = tokens(raw);
            if t.is_empty() {
                continue;
            }
            match (t[0], current.as_mut()) {
                ("template", None) => {
                    if t.len() != 3 {
                        return Err(parse_err(line, "template expects a kind and a direction"));
                    }
                    let kind = match t[1] {
                        "parallel" => TwistKind::Parallel,
                        "antiparallel" => TwistKind::Antiparallel,
                        other => return Err(parse_err(line, format!("unknown template kind {other:?}"))),
                    };
                    let right = parse_dir(t[2], line)? == Dir::Right;
                    current = Some(((kind, right), Vec::new()));
                }
                ("end", Some(_)) => {
                    let (key, evs) = current.take().expect("checked");
                    out.templates.insert(key, evs);
                }
                ("lcusp" | "rcusp", Some((_, evs))) => {
                    if t.len() != 3 {
                        return Err(parse_err(line, "template cusp expects an offset and a mark"));
                    }
                    let offset = parse_usize(t[1], line)?;
                    let mark = parse_mark(t[2], line)?;
                    evs.push(if t[0] == "lcusp" {
                        TemplateEvent::LeftCusp { offset, mark }
                    } else {
                        TemplateEvent::RightCusp { offset, mark }
                    });
                }
                ("cross", Some((_, evs))) => {
                    if t.len() != 3 {
                        return Err(parse_err(line, "template crossing expects an offset and a sign"));
                    }
                    evs.push(TemplateEvent::Cross { offset: parse_usize(t[1], line)?, sign: parse_sign(t[2], line)? });
                }
                (other, _) => return Err(parse_err(line, format!("unexpected {other:?}"))),
            }
        }
        if current.is_some() {
            return Err(parse_err(text.lines().count(), "unterminated template"));
        }
        Ok(out)
    }

    pub fn load() -> Result<TwistTemplates> {
        TwistTemplates::parse(&read_data_file("fronts/twist_templates.txt")?)
    }

    fn get(&self, kind: TwistKind, top: Dir) -> Result<&[TemplateEvent]> {
        self.templates
            .get(&(kind, top == Dir::Right))
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::MalformedFront(format!("no {kind:?} twist template for upper strand {}", top.symbol())))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct ComponentStats {
    writhe: i64,
    right_cusps: i64,
    down: i64,
    up: i64,
}

/// A validated front with no macros.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendrianFront {
    handles: Vec<HandlePass>,
    events: Vec<Event>,
    stats: BTreeMap<String, ComponentStats>,
    /// Twice the linking number for each pair of distinct components.
    mixed: BTreeMap<(String, String), i64>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn add(&mut self) -> usize {
        self.0.push(self.0.len());
        self.0.len() - 1
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

#[derive(Clone)]
struct Strand {
    arc: usize,
    comp: String,
    dir: Dir,
}

impl LegendrianFront {
    pub fn new(handles: Vec<HandlePass>, events: Vec<Event>) -> Result<LegendrianFront> {
        let bad = |k: usize, msg: String| Error::MalformedFront(format!("event {k}: {msg}"));
        let mut uf = UnionFind(Vec::new());
        let mut arc_comp: Vec<String> = Vec::new();
        let mut stack: Vec<Strand> = Vec::new();
        let mut stats: BTreeMap<String, ComponentStats> = BTreeMap::new();
        let mut mixed: BTreeMap<(String, String), i64> = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for h in &handles {
            if !seen.insert(h.generator.clone()) {
                return Err(Error::MalformedFront(format!("1-handle {} declared twice", h.generator)));
            }
            for (c, d) in &h.strands {
                let arc = uf.add();
                arc_comp.push(c.clone());
                stack.push(Strand { arc, comp: c.clone(), dir: *d });
                stats.entry(c.clone()).or_default();
            }
        }
        let initial = stack.clone();
        for (k, e) in events.iter().enumerate() {
            match e {
                Event::LeftCusp { pos, comp, mark } => {
                    if *pos > stack.len() {
                        return Err(bad(k, format!("left cusp position {pos} out of range")));
                    }
                    let arc = uf.add();
                    arc_comp.push(comp.clone());
                    let (u, l) = mark.left_dirs();
                    stack.splice(
                        *pos..*pos,
                        [Strand { arc, comp: comp.clone(), dir: u }, Strand { arc, comp: comp.clone(), dir: l }],
                    );
                    let s = stats.entry(comp.clone()).or_default();
                    match mark {
                        Mark::Down => s.down += 1,
                        Mark::Up => s.up += 1,
                    }
                }
                Event::RightCusp { pos, comp, mark } => {
                    if pos + 1 >= stack.len() {
                        return Err(bad(k, format!("right cusp position {pos} out of range")));
                    }
                    let (a, b) = (&stack[*pos], &stack[pos + 1]);
                    if a.comp != *comp || b.comp != *comp {
                        return Err(bad(k, format!("right cusp joins {} and {}, declared {comp}", a.comp, b.comp)));
                    }
                    if (a.dir, b.dir) != mark.right_dirs() {
                        return Err(bad(k, format!("right cusp marked {mark} joins strands oriented {}{}", a.dir.symbol(), b.dir.symbol())));
                    }
                    uf.union(a.arc, b.arc);
                    stack.drain(*pos..pos + 2);
                    let s = stats.entry(comp.clone()).or_default();
                    s.right_cusps += 1;
                    match mark {
                        Mark::Down => s.down += 1,
                        Mark::Up => s.up += 1,
                    }
                }
                Event::Cross { pos, sign } => {
                    if pos + 1 >= stack.len() {
                        return Err(bad(k, format!("crossing position {pos} out of range")));
                    }
                    let (a, b) = (&stack[*pos], &stack[pos + 1]);
                    let actual = if a.dir == b.dir { 1 } else { -1 };
                    if actual != *sign {
                        return Err(bad(k, format!("crossing declared {sign:+} but orientations give {actual:+}")));
                    }
                    if a.comp == b.comp {
                        stats.entry(a.comp.clone()).or_default().writhe += actual as i64;
                    } else {
                        let key = if a.comp < b.comp { (a.comp.clone(), b.comp.clone()) } else { (b.comp.clone(), a.comp.clone()) };
                        *mixed.entry(key).or_insert(0) += actual as i64;
                    }
                    stack.swap(*pos, pos + 1);
                }
                Event::Twist { .. } => return Err(bad(k, "unexpanded twist".into())),
            }
        }
        if stack.len() != initial.len() {
            return Err(Error::MalformedFront(format!(
                "{} strands reach the right side, {} leave the 1-handles",
                stack.len(),
                initial.len()
            )));
        }
        for (i, (a, b)) in initial.iter().zip(&stack).enumerate() {
            if a.comp != b.comp || a.dir != b.dir {
                return Err(Error::MalformedFront(format!("strand {i} does not close up through its 1-handle")));
            }
            uf.union(a.arc, b.arc);
        }
        // Each component must be one closed curve.
        let mut roots: BTreeMap<String, usize> = BTreeMap::new();
        for arc in 0..arc_comp.len() {
            let r = uf.find(arc);
            match roots.get(&arc_comp[arc]) {
                Some(&r0) if r0 != r => {
                    return Err(Error::MalformedFront(format!("component {} is not connected", arc_comp[arc])));
                }
                _ => {
                    roots.insert(arc_comp[arc].clone(), r);
                }
            }
        }
        let mut by_root: BTreeMap<usize, &String> = BTreeMap::new();
        for (c, r) in &roots {
            if let Some(other) = by_root.insert(*r, c) {
                return Err(Error::MalformedFront(format!("components {other} and {c} are one curve")));
            }
        }
        Ok(LegendrianFront { handles, events, stats, mixed })
    }

    pub fn handles(&self) -> &[HandlePass] {
        &self.handles
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn components(&self) -> Vec<String> {
        self.stats.keys().cloned().collect()
    }

    fn stat(&self, c: &str) -> ComponentStats {
        self.stats.get(c).cloned().unwrap_or_default()
    }

    pub fn writhe(&self, c: &str) -> i64 {
        self.stat(c).writhe
    }

    pub fn right_cusps(&self, c: &str) -> i64 {
        self.stat(c).right_cusps
    }

    pub fn tb(&self, c: &str) -> i64 {
        let s = self.stat(c);
        s.writhe - s.right_cusps
    }

    pub fn rot(&self, c: &str) -> Result<i64> {
        let s = self.stat(c);
        let d = s.down - s.up;
        if d % 2 != 0 {
            return Err(Error::OddCuspImbalance(c.into()));
        }
        Ok(d / 2)
    }

    /// Linking number read from crossings between the two components.
    pub fn linking(&self, a: &str, b: &str) -> Result<i64> {
        let key = if a < b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        let twice = self.mixed.get(&key).copied().unwrap_or(0);
        if twice % 2 != 0 {
            return Err(Error::MalformedFront(format!("odd mixed crossing sum between {a} and {b}")));
        }
        Ok(twice / 2)
    }

    /// Signed number of passes of component `c` through 1-handle `g`.
    pub fn passes(&self, c: &str, g: &str) -> i64 {
        self.handles
            .iter()
            .filter(|h| h.generator == g)
            .flat_map(|h| &h.strands)
            .filter(|(comp, _)| comp == c)
            .map(|(_, d)| d.sign())
            .sum()
    }

    /// Reflection `z -> -z`: reverses the strand stack and swaps cusp marks.
    /// Crossing signs are unchanged, so `tb` is preserved and `rot` negated.
    pub fn reflected(&self) -> Result<LegendrianFront> {
        let mut handles = self.handles.clone();
        handles.reverse();
        for h in &mut handles {
            h.strands.reverse();
        }
        let mut n = self.handles.iter().map(|h| h.strands.len()).sum::<usize>();
        let mut events = Vec::with_capacity(self.events.len());
        for e in &self.events {
            let ev = match e {
                Event::LeftCusp { pos, comp, mark } => {
                    let ev = Event::LeftCusp { pos: n - pos, comp: comp.clone(), mark: mark.flipped() };
                    n += 2;
                    ev
                }
                Event::RightCusp { pos, comp, mark } => {
                    let ev = Event::RightCusp { pos: n - pos - 2, comp: comp.clone(), mark: mark.flipped() };
                    n -= 2;
                    ev
                }
                Event::Cross { pos, sign } => Event::Cross { pos: n - pos - 2, sign: *sign },
                Event::Twist { .. } => unreachable!("validated fronts have no macros"),
            };
            events.push(ev);
        }
        LegendrianFront::new(handles, events)
    }

    /// The same front with every component's orientation reversed.
    pub fn reversed(&self) -> Result<LegendrianFront> {
        let mut handles = self.handles.clone();
        for h in &mut handles {
            for s in &mut h.strands {
                s.1 = s.1.flipped();
            }
        }
        let events = self
            .events
            .iter()
            .map(|e| match e {
                Event::LeftCusp { pos, comp, mark } => Event::LeftCusp { pos: *pos, comp: comp.clone(), mark: mark.flipped() },
                Event::RightCusp { pos, comp, mark } => Event::RightCusp { pos: *pos, comp: comp.clone(), mark: mark.flipped() },
                other => other.clone(),
            })
            .collect();
        LegendrianFront::new(handles, events)
    }

    /// Disjoint union, `other` stacked below `self`.
    pub fn stacked(&self, other: &LegendrianFront) -> Result<LegendrianFront> {
        let top_strands: usize = self.handles.iter().map(|h| h.strands.len()).sum();
        let mut handles = self.handles.clone();
        handles.extend(other.handles.iter().cloned());
        // Run self's events first with other's strands parked below, then
        // other's events shifted below self's strands.
        let mut events = self.events.clone();
        events.extend(other.events.iter().map(|e| match e {
            Event::LeftCusp { pos, comp, mark } => Event::LeftCusp { pos: pos + top_strands, comp: comp.clone(), mark: *mark },
            Event::RightCusp { pos, comp, mark } => Event::RightCusp { pos: pos + top_strands, comp: comp.clone(), mark: *mark },
            Event::Cross { pos, sign } => Event::Cross { pos: pos + top_strands, sign: *sign },
            Event::Twist { pos, coef, constant } => Event::Twist { pos: pos + top_strands, coef: *coef, constant: *constant },
        }));
        LegendrianFront::new(handles, events)
    }

    pub fn renamed(&self, map: &BTreeMap<String, String>) -> Result<LegendrianFront> {
        let r = |s: &String| map.get(s).cloned().unwrap_or_else(|| s.clone());
        let handles = self
            .handles
            .iter()
            .map(|h| HandlePass { generator: r(&h.generator), strands: h.strands.iter().map(|(c, d)| (r(c), *d)).collect() })
            .collect();
        let events = self
            .events
            .iter()
            .map(|e| match e {
                Event::LeftCusp { pos, comp, mark } => Event::LeftCusp { pos: *pos, comp: r(comp), mark: *mark },
                Event::RightCusp { pos, comp, mark } => Event::RightCusp { pos: *pos, comp: r(comp), mark: *mark },
                other => other.clone(),
            })
            .collect();
        LegendrianFront::new(handles, events)
    }

    pub fn to_source(&self) -> FrontSource {
        FrontSource { handles: self.handles.clone(), events: self.events.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandleVerdict {
    pub handle: String,
    pub component: String,
    pub framing: i64,
    pub tb: i64,
    pub rot: i64,
    /// `(tb - 1) - framing`; zero when the handle passes.
    pub deficit: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinReport {
    pub handles: Vec<HandleVerdict>,
    /// Mismatches between front and datum (linkings, passes, 1-handles).
    pub mismatches: Vec<String>,
    pub pass: bool,
}

/// Checks that every 2-handle is attached with framing `tb - 1` along the
/// front component assigned to it, and that the front realizes the datum's
/// linking numbers and 1-handle passes.
pub fn stein_check(
    d: &KirbyDatum,
    f: &LegendrianFront,
    correspondence: &BTreeMap<String, String>,
) -> Result<SteinReport> {
    for h in &d.two_handles {
        if !correspondence.contains_key(&h.name) {
            return Err(Error::CorrespondenceIncomplete(h.name.clone()));
        }
    }
    let comps = f.components();
    let mut verdicts = Vec::new();
    let mut mismatches = Vec::new();
    for h in &d.two_handles {
        let c = &correspondence[&h.name];
        if !comps.contains(c) {
            mismatches.push(format!("front has no component {c} for 2-handle {}", h.name));
            continue;
        }
        let tb = f.tb(c);
        let deficit = (tb - 1) - h.framing;
        verdicts.push(HandleVerdict {
            handle: h.name.clone(),
            component: c.clone(),
            framing: h.framing,
            tb,
            rot: f.rot(c)?,
            deficit,
            pass: deficit == 0,
        });
    }
    let front_gens: Vec<&str> = f.handles.iter().map(|h| h.generator.as_str()).collect();
    for g in &d.one_handles {
        if !front_gens.contains(&g.name.as_str()) && d.two_handles.iter().any(|h| h.word.contains(&g.name)) {
            mismatches.push(format!("front has no 1-handle {}", g.name));
        }
    }
    for g in &front_gens {
        if !d.has_generator(g) {
            mismatches.push(format!("front 1-handle {g} is not a dotted circle of the datum"));
        }
    }
    for (i, a) in d.two_handles.iter().enumerate() {
        let ca = &correspondence[&a.name];
        for g in &d.one_handles {
            let want = a.word.exponent_sum(&g.name);
            let got = f.passes(ca, &g.name);
            if want != got {
                mismatches.push(format!("{} passes {} {got} times in the front, {want} in the datum", a.name, g.name));
            }
        }
        for b in &d.two_handles[i + 1..] {
            let cb = &correspondence[&b.name];
            let got = f.linking(ca, cb)?;
            let want = d.lk(&a.name, &b.name);
            if got != want {
                mismatches.push(format!("lk({}, {}) is {got} in the front, {want} in the datum", a.name, b.name));
            }
        }
    }
    let pass = mismatches.is_empty() && verdicts.iter().all(|v| v.pass);
    Ok(SteinReport { handles: verdicts, mismatches, pass })
}

/// Bundled front for `C(m)`, components named like the `C(m)` datum.
pub fn cm_front(m: u32) -> Result<LegendrianFront> {
    let src = FrontSource::parse(&read_data_file("fronts/cm.front")?)?;
    src.instantiate(m, &TwistTemplates::load()?)
}

/// Bundled front for `C_{n,m}`.
pub fn cnm_front(n: usize, m: u32) -> Result<LegendrianFront> {
    let src = FrontSource::parse(&read_data_file(&format!("fronts/c{n}.front"))?)?;
    src.instantiate(m, &TwistTemplates::load()?)
}

/// Bundled maximal-tb right trefoil front.
pub fn trefoil_front() -> Result<LegendrianFront> {
    let src = FrontSource::parse(&read_data_file("fronts/right_trefoil.front")?)?;
    src.instantiate(1, &TwistTemplates::default())
}

/// Identity correspondence: component names equal 2-handle names.
pub fn identity_correspondence(d: &KirbyDatum) -> BTreeMap<String, String> {
    d.two_handles.iter().map(|h| (h.name.clone(), h.name.clone())).collect()
}
