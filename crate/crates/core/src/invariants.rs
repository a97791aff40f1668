//! Homology, boundary homology, fundamental group presentations,
//! intersection forms and characteristic numbers of Kirby data.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::datum::KirbyDatum;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::word::Word;

/// Exponent-sum matrix: row per 2-handle, column per dotted generator.
pub fn exponent_matrix(d: &KirbyDatum) -> IntMatrix {
    let rows: Vec<BigInt> = d
        .two_handles
        .iter()
        .flat_map(|h| d.one_handles.iter().map(move |g| BigInt::from(h.word.exponent_sum(&g.name))))
        .collect();
    IntMatrix::from_vec(d.two_handles.len(), d.one_handles.len(), rows)
}

/// Symmetric 2-handle linking matrix with framings on the diagonal.
pub fn linking_matrix(d: &KirbyDatum) -> IntMatrix {
    let n = d.two_handles.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, h) in d.two_handles.iter().enumerate() {
        for (j, k) in d.two_handles.iter().enumerate() {
            let v = if i == j { h.framing } else { h.link(&k.name) };
            m.set(i, j, BigInt::from(v));
        }
    }
    m
}

/// Full linking matrix after replacing every dot by a 0-framing.
/// Dotted circles come first, then 2-handles, in datum order.
pub fn boundary_matrix(d: &KirbyDatum) -> IntMatrix {
    let g = d.one_handles.len();
    let n = g + d.two_handles.len();
    let mut m = IntMatrix::zeros(n, n);
    for (j, h) in d.two_handles.iter().enumerate() {
        for (i, c) in d.one_handles.iter().enumerate() {
            let v = BigInt::from(h.dot_link(&c.name));
            m.set(i, g + j, v.clone());
            m.set(g + j, i, v);
        }
    }
    let l = linking_matrix(d);
    for i in 0..d.two_handles.len() {
        for j in 0..d.two_handles.len() {
            m.set(g + i, g + j, l.get(i, j).clone());
        }
    }
    m
}

pub mod bigint_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let vals: Vec<serde_json::Value> = v
            .iter()
            .map(|x| match x.to_string().parse::<i64>() {
                Ok(i) => serde_json::Value::from(i),
                Err(_) => serde_json::Value::String(x.to_string()),
            })
            .collect();
        vals.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let vals = Vec::<serde_json::Value>::deserialize(d)?;
        vals.into_iter()
            .map(|v| {
                let s = match v {
                    serde_json::Value::Number(n) => n.to_string(),
                    serde_json::Value::String(s) => s,
                    _ => return Err(serde::de::Error::custom("expected integer")),
                };
                s.parse().map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    #[serde(with = "bigint_list")]
    pub h1_invariants: Vec<BigInt>,
    pub b2: usize,
    pub h2_free_rank: usize,
    pub h3_rank: usize,
    pub is_contractible_homology: bool,
}

impl HomologyProfile {
    pub fn ball() -> Self {
        HomologyProfile { h1_invariants: vec![], b2: 0, h2_free_rank: 0, h3_rank: 0, is_contractible_homology: true }
    }
}

/// Cellular homology of `0 -> Z^{2-handles} -> Z^{1-handles} -> 0`.
pub fn homology(d: &KirbyDatum) -> Result<HomologyProfile> {
    if d.three_handles > 0 {
        return Err(Error::UnsupportedThreeHandles(d.three_handles));
    }
    let boundary = exponent_matrix(d).transpose();
    let h1_invariants = linalg::coker_invariants(&boundary);
    let b2 = d.two_handles.len() - linalg::rank(&boundary);
    Ok(HomologyProfile {
        is_contractible_homology: h1_invariants.is_empty() && b2 == 0,
        h1_invariants,
        b2,
        h2_free_rank: b2,
        h3_rank: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryHomology {
    #[serde(with = "bigint_list")]
    pub invariants: Vec<BigInt>,
    pub is_homology_sphere: bool,
    pub det: String,
}

pub fn boundary_h1(d: &KirbyDatum) -> BoundaryHomology {
    let m = boundary_matrix(d);
    let det = linalg::det(&m).expect("boundary matrix is square");
    BoundaryHomology {
        invariants: linalg::coker_invariants(&m),
        is_homology_sphere: det.abs().is_one(),
        det: det.to_string(),
    }
}

/// Intersection form on `H_2`: the linking matrix restricted to the
/// kernel of the exponent-sum boundary map.
pub fn intersection_form(d: &KirbyDatum) -> Result<IntMatrix> {
    Ok(intersection_form_with_basis(d)?.0)
}

/// The form together with its basis (rows, in 2-handle coordinates).
pub fn intersection_form_with_basis(d: &KirbyDatum) -> Result<(IntMatrix, IntMatrix)> {
    if d.three_handles > 0 {
        return Err(Error::UnsupportedThreeHandles(d.three_handles));
    }
    let n = d.two_handles.len();
    let kernel = linalg::kernel_basis(&exponent_matrix(d).transpose());
    let basis = IntMatrix::from_vec(kernel.len(), n, kernel.into_iter().flatten().collect());
    Ok((linking_matrix(d).congruence(&basis), basis))
}

/// A 2-handle with empty word and framing -1 is an embedded -1 sphere.
pub fn minus_one_sphere(d: &KirbyDatum) -> Option<&str> {
    d.two_handles.iter().find(|h| h.word.is_empty() && h.framing == -1).map(|h| h.name.as_str())
}

// ---------------------------------------------------------------------------
// Presentations

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TietzeStep {
    DropTrivialRelator { relator: Word },
    DropDuplicateRelator { relator: Word },
    Eliminate { generator: String, via: Word, replacement: Word },
    MultiplyRelators { target: usize, by: usize, inverse: bool, result: Word },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    #[serde(default)]
    pub move_log: Vec<TietzeStep>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let p = GroupPresentation { generators, relators, move_log: Vec::new() };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        let gens: BTreeSet<&str> = self.generators.iter().map(String::as_str).collect();
        for r in &self.relators {
            if let Some(g) = r.generators().find(|g| !gens.contains(g)) {
                return Err(Error::UnknownGenerator(g.to_string()));
            }
        }
        Ok(())
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    /// Invariant factors of the abelianization (0 marks a free summand).
    pub fn abelianization(&self) -> Vec<BigInt> {
        let data = self
            .generators
            .iter()
            .flat_map(|g| self.relators.iter().map(move |r| BigInt::from(r.exponent_sum(g))))
            .collect();
        linalg::coker_invariants(&IntMatrix::from_vec(self.generators.len(), self.relators.len(), data))
    }
}

/// `π_1` presentation: dotted generators, 2-handle words as relators.
pub fn pi1_presentation(d: &KirbyDatum) -> GroupPresentation {
    GroupPresentation {
        generators: d.generator_names(),
        relators: d.two_handles.iter().map(|h| h.word.reduced()).collect(),
        move_log: Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TietzeOutcome {
    pub presentation: GroupPresentation,
    /// True only when every generator was eliminated.
    pub certified_trivial: bool,
    pub budget_exhausted: bool,
    pub steps: usize,
    #[serde(with = "bigint_list")]
    pub abelianization: Vec<BigInt>,
}

/// Greedy Tietze simplification with deterministic tie-breaks.
pub fn tietze_simplify(p: &GroupPresentation, budget: usize) -> TietzeOutcome {
    let mut p = p.clone();
    let mut steps = 0usize;
    let mut exhausted = false;
    loop {
        if p.generators.is_empty() {
            break;
        }
        if steps >= budget {
            exhausted = true;
            break;
        }
        let Some(step) = next_step(&p) else { break };
        apply_step(&mut p, step);
        steps += 1;
    }
    // Housekeeping that never costs budget: trivial relators vanish with the last generator.
    p.relators.retain(|r| !r.cyclically_reduced().is_empty());
    TietzeOutcome {
        certified_trivial: p.generators.is_empty(),
        budget_exhausted: exhausted,
        steps,
        abelianization: p.abelianization(),
        presentation: p,
    }
}

fn next_step(p: &GroupPresentation) -> Option<TietzeStep> {
    // 1. trivial and duplicate relators
    let mut seen = BTreeSet::new();
    for r in &p.relators {
        if r.cyclically_reduced().is_empty() {
            return Some(TietzeStep::DropTrivialRelator { relator: r.clone() });
        }
        if !seen.insert(r.cyclic_normal_form()) {
            return Some(TietzeStep::DropDuplicateRelator { relator: r.clone() });
        }
    }
    // 2. generator elimination: single letters first, then any generator
    // occurring once when the substitution does not grow the presentation.
    let mut candidates: Vec<(usize, usize, String)> = Vec::new();
    for (ri, r) in p.relators.iter().enumerate() {
        let c = r.cyclically_reduced();
        for g in &p.generators {
            if c.letters().iter().filter(|l| &l.gen == g).count() == 1 {
                candidates.push((c.len(), p.generators.iter().position(|x| x == g).unwrap(), g.clone()));
                let _ = ri;
            }
        }
    }
    candidates.sort();
    for (_, _, g) in &candidates {
        let (via, replacement) = elimination(p, g)?;
        let grown: usize = p
            .relators
            .iter()
            .filter(|r| **r != via)
            .map(|r| r.substitute(g, &replacement).cyclically_reduced().len())
            .sum();
        if via.cyclically_reduced().len() == 1 || grown <= p.total_length() - via.len() {
            return Some(TietzeStep::Eliminate { generator: g.clone(), via, replacement });
        }
    }
    // 3. relator products of depth two
    for i in 0..p.relators.len() {
        let ri = p.relators[i].cyclically_reduced();
        for j in 0..p.relators.len() {
            if i == j {
                continue;
            }
            for (variant, orient) in p.relators[j].cyclic_variants() {
                let prod = ri.concat(&variant).cyclically_reduced();
                if prod.len() < ri.len() {
                    return Some(TietzeStep::MultiplyRelators { target: i, by: j, inverse: orient < 0, result: prod });
                }
            }
        }
    }
    None
}

/// Relator of least length in which `g` occurs exactly once, and the word
/// `g` equals in the quotient.
fn elimination(p: &GroupPresentation, g: &str) -> Option<(Word, Word)> {
    let r = p
        .relators
        .iter()
        .filter(|r| r.cyclically_reduced().letters().iter().filter(|l| l.gen == g).count() == 1)
        .min_by_key(|r| r.cyclically_reduced().len())?;
    let c = r.cyclically_reduced();
    let k = c.letters().iter().position(|l| l.gen == g)?;
    let rot = c.rotated(k);
    let sign = rot.letters()[0].sign;
    let rest = Word::from_letters(rot.letters()[1..].iter().cloned());
    // g^sign · rest = 1  =>  g = rest^{-sign}
    let replacement = rest.pow(-(sign as i64));
    Some((r.clone(), replacement))
}

fn apply_step(p: &mut GroupPresentation, step: TietzeStep) {
    match &step {
        TietzeStep::DropTrivialRelator { relator } | TietzeStep::DropDuplicateRelator { relator } => {
            if let Some(k) = p.relators.iter().position(|r| r == relator) {
                p.relators.remove(k);
            }
        }
        TietzeStep::Eliminate { generator, via, replacement } => {
            if let Some(k) = p.relators.iter().position(|r| r == via) {
                p.relators.remove(k);
            }
            p.generators.retain(|g| g != generator);
            for r in &mut p.relators {
                *r = r.substitute(generator, replacement).cyclically_reduced();
            }
        }
        TietzeStep::MultiplyRelators { target, result, .. } => {
            p.relators[*target] = result.clone();
        }
    }
    p.move_log.push(step);
}

// ---------------------------------------------------------------------------
// Characteristic numbers

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CharacteristicNumbers {
    pub b2_plus: u64,
    pub b2_minus: u64,
}

impl CharacteristicNumbers {
    pub fn new(b2_plus: u64, b2_minus: u64) -> Self {
        CharacteristicNumbers { b2_plus, b2_minus }
    }

    pub fn cp2() -> Self {
        Self::new(1, 0)
    }

    pub fn cp2_bar() -> Self {
        Self::new(0, 1)
    }

    pub fn b2(self) -> u64 {
        self.b2_plus + self.b2_minus
    }

    pub fn signature(self) -> i64 {
        self.b2_plus as i64 - self.b2_minus as i64
    }

    pub fn connected_sum(self, other: Self) -> Self {
        Self::new(self.b2_plus + other.b2_plus, self.b2_minus + other.b2_minus)
    }

    pub fn times(self, k: u64) -> Self {
        Self::new(self.b2_plus * k, self.b2_minus * k)
    }

    /// Numbers of a nondegenerate form, from its inertia.
    pub fn of_form(q: &IntMatrix) -> Result<Self> {
        let (p, n, z) = linalg::inertia(q)?;
        if z > 0 {
            return Err(Error::BadParameter("form is degenerate".into()));
        }
        Ok(Self::new(p as u64, n as u64))
    }
}

/// Connected sum of a list of summands; the empty sum is `S^4`.
pub fn connected_sum(parts: &[CharacteristicNumbers]) -> CharacteristicNumbers {
    parts.iter().fold(CharacteristicNumbers::default(), |a, &b| a.connected_sum(b))
}

/// Tabulated values for the elliptic surface `E(l)`: `b2 = 12l - 2`, `σ = -8l`.
pub fn elliptic_table(l: u64) -> CharacteristicNumbers {
    CharacteristicNumbers::new(2 * l - 1, 10 * l - 1)
}

/// `⌈(2n + 1) / 3⌉`, the least `l` admitting the embedding into `E(l) # n CP̄²`.
pub fn elliptic_embedding_bound(n: u64) -> u64 {
    (2 * n + 1).div_ceil(3)
}

/// Integer value of a small `BigInt`, for reports.
pub fn small(v: &BigInt) -> i64 {
    v.to_i64().unwrap_or(if v.is_zero() { 0 } else { i64::MAX })
}
