//! Generators for the wheel families and their companions.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Deserialize;

use crate::datum::{DottedCircle, FamilyKind, FamilyMeta, KirbyDatum, Role, TwoHandle};
use crate::error::{Error, Result};
use crate::moves::twist_embedded_cork;
use crate::seq::{StarZeroSequence, Symbol};
use crate::word::Word;

pub const DATA_DIR_ENV: &str = "CORKCALC_DATA_DIR";

/// Directory holding bundled data files.
pub fn data_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(p) => PathBuf::from(p),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data")),
    }
}

pub fn read_data_file(name: &str) -> Result<String> {
    let path = data_dir().join(name);
    std::fs::read_to_string(&path).map_err(|_| Error::DataFileMissing(path.display().to_string()))
}

fn check_m(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::BadParameter("m must be at least 1".into()));
    }
    Ok(())
}

fn with_family(mut d: KirbyDatum, family: FamilyKind, index: Option<usize>) -> KirbyDatum {
    if let Some(meta) = d.meta.as_mut() {
        meta.family = family;
        meta.index = index;
    }
    d
}

/// `X_{n,m}(x)`: pair `i` has `α_i` dotted when `x_i = *` and `β_i` dotted
/// when `x_i = 0`; the other member is a 0-framed 2-handle running once over
/// it.
pub fn build_x(n: usize, m: u32, x: &StarZeroSequence) -> Result<KirbyDatum> {
    check_m(m)?;
    if x.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x.len() });
    }
    let mut d = KirbyDatum::empty();
    for (i, s) in x.entries().iter().enumerate() {
        let (dot, zero) = match s {
            Symbol::Star => (Role::alpha(i), Role::beta(i)),
            Symbol::Zero => (Role::beta(i), Role::alpha(i)),
        };
        d.one_handles.push(DottedCircle { name: dot.name(), role: Some(dot) });
        d.two_handles.push(TwoHandle::new(zero.name(), Word::gen(&dot.name(), 1), 0).with_role(zero));
    }
    d.meta = Some(FamilyMeta { family: FamilyKind::X, n, m, seq: Some(x.clone()), index: None });
    Ok(d)
}

/// The single cork `C(m)`.
pub fn build_cm(m: u32) -> Result<KirbyDatum> {
    let d = build_x(1, m, &"*".parse()?)?;
    Ok(with_family(d, FamilyKind::Cm, None))
}

pub fn build_c(n: usize, m: u32) -> Result<KirbyDatum> {
    Ok(with_family(build_x(n, m, &StarZeroSequence::star_then_zeros(n)?)?, FamilyKind::C, None))
}

pub fn build_d(n: usize, m: u32) -> Result<KirbyDatum> {
    Ok(with_family(build_x(n, m, &StarZeroSequence::zero_then_stars(n)?)?, FamilyKind::D, None))
}

/// `F_{n,m} = X_{2n,m}(0,*,...,0,*)`.
pub fn build_f(n: usize, m: u32) -> Result<KirbyDatum> {
    Ok(with_family(build_x(2 * n, m, &StarZeroSequence::alternating(n)?)?, FamilyKind::F, None))
}

/// Bundled description of the E-family modification.
#[derive(Debug, Clone, Deserialize)]
pub struct EFamilyPattern {
    /// Base sequence pattern: `star_then_zeros` or `zero_then_stars`.
    pub base: String,
    /// Extra linking numbers between wheel components, by role, added by the
    /// modification.
    #[serde(default)]
    pub extra_links: Vec<(Role, Role, i64)>,
}

pub fn load_e_pattern() -> Result<EFamilyPattern> {
    let text = read_data_file("e_family.json")?;
    serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
}

pub fn build_e(n: usize, m: u32) -> Result<KirbyDatum> {
    let pattern = load_e_pattern()?;
    let seq = match pattern.base.as_str() {
        "star_then_zeros" => StarZeroSequence::star_then_zeros(n)?,
        "zero_then_stars" => StarZeroSequence::zero_then_stars(n)?,
        other => return Err(Error::BadParameter(format!("unknown E base pattern {other}"))),
    };
    let mut d = with_family(build_x(n, m, &seq)?, FamilyKind::E, None);
    for (a, b, v) in &pattern.extra_links {
        if a.index >= n || b.index >= n {
            continue;
        }
        let (na, nb) = (a.name(), b.name());
        d.two_handle(&na)?;
        d.two_handle(&nb)?;
        let cur = d.lk(&na, &nb);
        d.set_lk(&na, &nb, cur + v)?;
    }
    Ok(d)
}

fn meridian(name: String, dotted: &str) -> TwoHandle {
    TwoHandle::new(name, Word::gen(dotted, 1), -1)
}

/// `C_{n,m}` with `j` parallel `-1`-framed meridians on `β_j` for
/// `1 ≤ j ≤ n-1`.
pub fn build_w(n: usize, m: u32) -> Result<KirbyDatum> {
    if n < 2 {
        return Err(Error::BadParameter(format!("W needs n >= 2, got {n}")));
    }
    let mut d = with_family(build_c(n, m)?, FamilyKind::W, None);
    for j in 1..n {
        let b = Role::beta(j).name();
        for k in 0..j {
            d.two_handles.push(meridian(format!("w{j}_{k}"), &b));
        }
    }
    Ok(d)
}

/// `W_{n,m}` after the cork twist `τ^i`: the `i` meridians of `β_i` land on
/// the 0-framed `β_0` and can be blown down.
pub fn build_w_twisted(n: usize, m: u32, i: usize) -> Result<KirbyDatum> {
    if i >= n {
        return Err(Error::BadIndex { index: i as i64, n });
    }
    let w = build_w(n, m)?;
    let k = (n - i) % n;
    let mut t = twist_embedded_cork(&w, k as i64)?;
    if let Some(meta) = t.meta.as_mut() {
        meta.index = Some(i);
    }
    Ok(t)
}

/// Names of the handles that sit on `β_0` as unknotted `-1` meridians.
pub fn blow_downable_meridians(d: &KirbyDatum) -> Vec<String> {
    let b0 = Role::beta(0).name();
    d.two_handles
        .iter()
        .filter(|h| h.role.is_none() && h.word.is_empty() && h.framing.abs() == 1 && h.link(&b0) != 0)
        .map(|h| h.name.clone())
        .collect()
}

/// `Z_{n-i} = C_{n,m} ∪ h`, `h` a `-1`-framed meridian of `β_{n-i}`.
pub fn build_z(n: usize, m: u32, i: usize) -> Result<KirbyDatum> {
    if i == 0 || i >= n {
        return Err(Error::BadIndex { index: i as i64, n });
    }
    let mut d = with_family(build_c(n, m)?, FamilyKind::Z, Some(i));
    d.two_handles.push(meridian("h".into(), &Role::beta(n - i).name()));
    Ok(d)
}

/// `Z_{n-i}` after the twist `τ^i`, which carries the meridian onto `β_0`.
pub fn build_z_twisted(n: usize, m: u32, i: usize) -> Result<KirbyDatum> {
    twist_embedded_cork(&build_z(n, m, i)?, i as i64)
}

/// Bundled intersection-form blocks for the elliptic surfaces.
#[derive(Debug, Clone, Deserialize)]
pub struct EllipticBlocks {
    pub neg_e8: Vec<Vec<i64>>,
    pub hyperbolic: Vec<Vec<i64>>,
}

pub fn load_elliptic_blocks() -> Result<EllipticBlocks> {
    let text = read_data_file("elliptic_blocks.json")?;
    serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
}

/// A simply connected plumbing with the intersection form of `E(l)`:
/// `l` copies of `-E8` and `2l-1` hyperbolic pairs, without 1-handles.
pub fn build_elliptic(l: usize) -> Result<KirbyDatum> {
    if l == 0 {
        return Err(Error::BadParameter("E(l) needs l >= 1".into()));
    }
    let blocks = load_elliptic_blocks()?;
    let mut d = KirbyDatum::empty();
    let add_block = |d: &mut KirbyDatum, prefix: String, q: &[Vec<i64>]| -> Result<()> {
        let names: Vec<String> = (0..q.len()).map(|k| format!("{prefix}_{k}")).collect();
        for (k, name) in names.iter().enumerate() {
            d.two_handles.push(TwoHandle::new(name.clone(), Word::empty(), q[k][k]));
        }
        for a in 0..q.len() {
            for b in a + 1..q.len() {
                if q[a][b] != 0 {
                    d.set_lk(&names[a], &names[b], q[a][b])?;
                }
            }
        }
        Ok(())
    };
    for k in 0..l {
        add_block(&mut d, format!("e8x{k}"), &blocks.neg_e8)?;
    }
    for k in 0..2 * l - 1 {
        add_block(&mut d, format!("hyp{k}"), &blocks.hyperbolic)?;
    }
    Ok(d)
}

/// Every generator by family name, for sweeps and the CLI.
pub fn build_named(family: FamilyKind, n: usize, m: u32, seq: Option<&StarZeroSequence>, i: Option<usize>) -> Result<KirbyDatum> {
    match family {
        FamilyKind::Cm => build_cm(m),
        FamilyKind::X => {
            let x = seq.ok_or_else(|| Error::BadParameter("X needs a sequence".into()))?;
            build_x(n, m, x)
        }
        FamilyKind::C => build_c(n, m),
        FamilyKind::D => build_d(n, m),
        FamilyKind::E => build_e(n, m),
        FamilyKind::F => build_f(n, m),
        FamilyKind::W => match i {
            Some(i) => build_w_twisted(n, m, i),
            None => build_w(n, m),
        },
        FamilyKind::Z => build_z(n, m, i.ok_or_else(|| Error::BadParameter("Z needs an index".into()))?),
    }
}

/// Maps names of the data to their roles, for reports.
pub fn role_table(d: &KirbyDatum) -> BTreeMap<String, Role> {
    d.one_handles
        .iter()
        .filter_map(|g| g.role.map(|r| (g.name.clone(), r)))
        .chain(d.two_handles.iter().filter_map(|h| h.role.map(|r| (h.name.clone(), r))))
        .collect()
}
