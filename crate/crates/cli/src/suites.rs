//! Verification suites. Each case is independent; results are sorted by
//! case name so reports do not depend on scheduling.

use rayon::prelude::*;
use serde::Serialize;

use corkcalc::datum::isomorphic;
use corkcalc::families::{
    blow_downable_meridians, build_c, build_cm, build_d, build_elliptic, build_f, build_w, build_w_twisted, build_x,
};
use corkcalc::invariants::{
    boundary_h1, connected_sum, elliptic_embedding_bound, homology, intersection_form, pi1_presentation,
    tietze_simplify, CharacteristicNumbers, HomologyProfile,
};
use corkcalc::linalg::is_diag_minus_one;
use corkcalc::moves::{
    blow_down, deletion_chain, deletion_script, dot_zero_exchange, is_deletable, replay, rotate,
    rotation_permutation_order,
};
use corkcalc::stein::{cm_front, cnm_front, identity_correspondence, stein_check, trefoil_front};
use corkcalc::{CorkOrder, StarZeroSequence};

pub const SUITES: &[&str] =
    &["lemma-2-2", "cork-order", "prop-2-6", "lemma-3-4-scripts", "w-family", "stein-framings", "thm-1-7-arith"];

#[derive(Debug, Clone)]
pub struct Grid {
    pub n_max: usize,
    pub m_max: u32,
    pub l: Option<u64>,
    pub n: Option<u64>,
    pub l_max: u64,
    pub budget: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Case {
    pub case: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub cases: Vec<Case>,
}

type Job = Box<dyn Fn() -> Case + Send + Sync>;

fn case(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Case {
    Case { case: name.into(), pass, detail: detail.into() }
}

fn err_case(name: String, e: impl std::fmt::Display) -> Case {
    case(name, false, format!("error: {e}"))
}

fn run_jobs(suite: &str, jobs: Vec<Job>) -> SuiteResult {
    let mut cases: Vec<Case> = jobs.par_iter().map(|j| j()).collect();
    cases.sort_by(|a, b| a.case.cmp(&b.case));
    let passed = cases.iter().filter(|c| c.pass).count();
    SuiteResult { suite: suite.into(), passed, failed: cases.len() - passed, cases }
}

pub fn run(suite: &str, g: &Grid) -> Option<SuiteResult> {
    let jobs = match suite {
        "lemma-2-2" => contractibility(g),
        "cork-order" => cork_order(g),
        "prop-2-6" => prop_2_6(g),
        "lemma-3-4-scripts" => scripts(g),
        "w-family" => w_family(g),
        "stein-framings" => stein(g),
        "thm-1-7-arith" => elliptic(g),
        _ => return None,
    };
    Some(run_jobs(suite, jobs))
}

fn contractibility(g: &Grid) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    let budget = g.budget;
    for n in 1..=g.n_max {
        for m in 1..=g.m_max {
            for x in StarZeroSequence::all(n) {
                jobs.push(Box::new(move || {
                    let name = format!("X_{{{n},{m}}}({x})");
                    let d = match build_x(n, m, &x) {
                        Ok(d) => d,
                        Err(e) => return err_case(name, e),
                    };
                    let h = match homology(&d) {
                        Ok(h) => h,
                        Err(e) => return err_case(name, e),
                    };
                    let t = tietze_simplify(&pi1_presentation(&d), budget);
                    let pass = h == HomologyProfile::ball() && t.certified_trivial && d.validate().is_valid();
                    case(name, pass, format!("b2 {}, H1 {:?}, pi1 trivial {} in {} steps", h.b2, h.h1_invariants, t.certified_trivial, t.steps))
                }));
            }
        }
    }
    jobs
}

fn cork_order(g: &Grid) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for n in 1..=g.n_max {
        jobs.push(Box::new(move || {
            let all = StarZeroSequence::all(n);
            let bad: Vec<String> = all.iter().filter(|x| n % x.period() != 0).map(|x| x.to_string()).collect();
            let constants_ok = all
                .iter()
                .filter(|x| x.is_constant())
                .all(|x| x.cork_order() == CorkOrder::NotACork);
            let mut counts = std::collections::BTreeMap::new();
            for x in &all {
                *counts.entry(x.period()).or_insert(0usize) += 1;
            }
            case(
                format!("periods n={n}"),
                bad.is_empty() && constants_ok,
                format!("period counts {counts:?}; non-dividing {bad:?}"),
            )
        }));
        jobs.push(Box::new(move || {
            let x = StarZeroSequence::star_then_zeros(n).expect("n >= 1");
            case(format!("C_{n} order"), x.period() == n, format!("period of {x} is {}", x.period()))
        }));
    }
    for m in 1..=g.m_max {
        jobs.push(Box::new(move || {
            let name = format!("F_{{2,{m}}} order");
            let f = match build_f(2, m) {
                Ok(f) => f,
                Err(e) => return err_case(name, e),
            };
            let seq = f.meta.as_ref().and_then(|x| x.seq.clone()).expect("F carries its sequence");
            let perm = match rotate(&f, 1) {
                Ok((_, p)) => p,
                Err(e) => return err_case(name, e),
            };
            let order = rotation_permutation_order(perm.len(), 1);
            case(name, seq.period() == 2 && order == 4, format!("cork order {}, rotation order {order}", seq.period()))
        }));
    }
    jobs
}

fn prop_2_6(g: &Grid) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for m in 1..=g.m_max {
        jobs.push(Box::new(move || {
            let name = format!("C_{{2,{m}}} = D_{{2,{m}}}");
            let r = build_c(2, m).and_then(|c| {
                let d = dot_zero_exchange(&build_d(2, m)?)?;
                isomorphic(&c, &d)
            });
            match r {
                Ok(w) => case(name, w.is_some(), format!("witness found: {}", w.is_some())),
                Err(e) => err_case(name, e),
            }
        }));
        jobs.push(Box::new(move || {
            let name = format!("C_{{3,{m}}} vs D_{{3,{m}}}");
            let r = build_c(3, m).and_then(|c| isomorphic(&c, &build_d(3, m)?));
            match r {
                Ok(w) => case(name, w.is_none(), format!("witness found: {}", w.is_some())),
                Err(e) => err_case(name, e),
            }
        }));
    }
    jobs
}

fn scripts(g: &Grid) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for n in 2..=g.n_max.max(2) {
        for m in 1..=g.m_max {
            for x in StarZeroSequence::all(n).into_iter().filter(|x| !x.is_constant()) {
                for i in (0..n).filter(|&i| is_deletable(&x, i)) {
                    let x = x.clone();
                    jobs.push(Box::new(move || {
                        let name = format!("delete {i} from X_{{{n},{m}}}({x})");
                        let r = (|| {
                            let t = deletion_script(n, m, &x, i)?;
                            let end = replay(&build_x(n, m, &x)?, &t)?;
                            let target = build_x(n - 1, m, &x.deleted_at(i).expect("deletable"))?;
                            Ok::<_, corkcalc::Error>(isomorphic(&end, &target)?.is_some())
                        })();
                        match r {
                            Ok(ok) => case(name, ok, format!("isomorphic to target: {ok}")),
                            Err(e) => err_case(name, e),
                        }
                    }));
                }
                let x = x.clone();
                jobs.push(Box::new(move || {
                    let name = format!("chain X_{{{n},{m}}}({x}) to C({m})");
                    let r = (|| {
                        let t = deletion_chain(n, m, &x)?;
                        let end = replay(&build_x(n, m, &x)?, &t)?;
                        Ok::<_, corkcalc::Error>((isomorphic(&end, &build_cm(m)?)?.is_some(), t.steps.len()))
                    })();
                    match r {
                        Ok((ok, steps)) => case(name, ok, format!("{steps} moves, reaches C(m): {ok}")),
                        Err(e) => err_case(name, e),
                    }
                }));
            }
        }
    }
    jobs
}

fn w_family(g: &Grid) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for n in 2..=g.n_max.max(2) {
        for m in 1..=g.m_max {
            jobs.push(Box::new(move || {
                let name = format!("W_{{{n},{m}}}");
                let r = (|| {
                    let w = build_w(n, m)?;
                    let b2 = homology(&w)?.b2;
                    let bd = boundary_h1(&w);
                    let form = is_diag_minus_one(&intersection_form(&w)?)?;
                    Ok::<_, corkcalc::Error>((b2, bd, form))
                })();
                match r {
                    Ok((b2, bd, form)) => {
                        let want = n * (n - 1) / 2;
                        case(
                            name,
                            b2 == want && bd.is_homology_sphere && form.is_yes(),
                            format!("b2 {b2} (want {want}), det {}, form -I certified {}", bd.det, form.is_yes()),
                        )
                    }
                    Err(e) => err_case(name, e),
                }
            }));
            for i in 1..n {
                jobs.push(Box::new(move || {
                    let name = format!("W_{{{n},{m}}} twisted by {i}");
                    let r = (|| {
                        let mut t = build_w_twisted(n, m, i)?;
                        let ms = blow_downable_meridians(&t);
                        for h in &ms {
                            t = blow_down(&t, h)?;
                        }
                        Ok::<_, corkcalc::Error>((ms.len(), homology(&t)?.b2, boundary_h1(&t).is_homology_sphere))
                    })();
                    match r {
                        Ok((k, b2, sphere)) => {
                            let want = n * (n - 1) / 2 - i;
                            case(name, k == i && b2 == want && sphere, format!("{k} blow-downs, b2 {b2} (want {want}), homology sphere {sphere}"))
                        }
                        Err(e) => err_case(name, e),
                    }
                }));
            }
        }
    }
    jobs
}

fn stein(g: &Grid) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(Box::new(|| match trefoil_front() {
        Ok(f) => case("right trefoil", f.tb("k") == 1, format!("tb {}", f.tb("k"))),
        Err(e) => err_case("right trefoil".into(), e),
    }));
    for m in 1..=g.m_max {
        jobs.push(Box::new(move || {
            let name = format!("C({m})");
            let r = build_cm(m).and_then(|d| stein_check(&d, &cm_front(m)?, &identity_correspondence(&d)));
            match r {
                Ok(rep) => case(name, rep.pass, summarize(&rep)),
                Err(e) => err_case(name, e),
            }
        }));
        for n in 2..=g.n_max.clamp(2, 4) {
            jobs.push(Box::new(move || {
                let name = format!("C_{{{n},{m}}}");
                let r = build_c(n, m).and_then(|d| stein_check(&d, &cnm_front(n, m)?, &identity_correspondence(&d)));
                match r {
                    Ok(rep) => case(name, rep.pass, summarize(&rep)),
                    Err(e) => err_case(name, e),
                }
            }));
        }
    }
    jobs
}

fn summarize(r: &corkcalc::stein::SteinReport) -> String {
    let parts: Vec<String> =
        r.handles.iter().map(|h| format!("{}: framing {} tb {} rot {}", h.handle, h.framing, h.tb, h.rot)).collect();
    let mut s = parts.join("; ");
    if !r.mismatches.is_empty() {
        s.push_str(&format!("; mismatches: {}", r.mismatches.join(", ")));
    }
    s
}

fn elliptic(g: &Grid) -> Vec<Job> {
    let ls: Vec<u64> = match g.l {
        Some(l) => vec![l],
        None => (1..=g.l_max).collect(),
    };
    let ns: Vec<u64> = match g.n {
        Some(n) => vec![n],
        None => (1..=g.n_max as u64).collect(),
    };
    let mut jobs: Vec<Job> = Vec::new();
    for &l in &ls {
        for &n in &ns {
            jobs.push(Box::new(move || {
                let name = format!("l={l} n={n}");
                let bound = elliptic_embedding_bound(n);
                if l < bound {
                    return case(name, true, format!("precondition l >= {bound} fails; skipped"));
                }
                let r = (|| {
                    let q = intersection_form(&build_elliptic(l as usize)?)?;
                    CharacteristicNumbers::of_form(&q)
                })();
                match r {
                    Ok(e) => {
                        let lhs = connected_sum(&[e, CharacteristicNumbers::cp2_bar().times(n)]);
                        let rhs = connected_sum(&[
                            CharacteristicNumbers::cp2().times(2 * l - 1),
                            CharacteristicNumbers::cp2_bar().times(10 * l + n - 1),
                        ]);
                        case(
                            name,
                            lhs.b2() == rhs.b2() && lhs.signature() == rhs.signature(),
                            format!(
                                "precondition l >= {bound} holds; b2 {} vs {}, signature {} vs {}",
                                lhs.b2(),
                                rhs.b2(),
                                lhs.signature(),
                                rhs.signature()
                            ),
                        )
                    }
                    Err(e) => err_case(name, e),
                }
            }));
        }
    }
    jobs
}
