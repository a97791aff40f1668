use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use corkcalc::datum::isomorphic;
use corkcalc::families::build_named;
use corkcalc::format::{datum_from_str, datum_to_string, presentation_from_str, trace_from_str, trace_to_string};
use corkcalc::invariants::{bigint_list, boundary_h1, homology, intersection_form, pi1_presentation, tietze_simplify};
use corkcalc::linalg::{is_diag_minus_one, DiagMinusOne};
use corkcalc::moves::{deletion_chain, deletion_script, replay};
use corkcalc::stein::{identity_correspondence, stein_check, FrontSource, TwistTemplates};
use corkcalc::{Error, FamilyKind, StarZeroSequence};

mod suites;

#[derive(Parser)]
#[command(name = "corkcalc", version, about = "Handle calculus for finite order corks")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for suites (0 = all cores).
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,
    /// Tietze step budget.
    #[arg(long, default_value_t = 10_000, global = true)]
    budget: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the datum of a family member.
    Gen {
        /// Cm, X, C, D, E, F, W or Z.
        family: String,
        n: usize,
        m: u32,
        /// Sequence for X, as a string of `*` and `0`.
        #[arg(long)]
        seq: Option<String>,
        /// Twist index for Z, or for W to get the twisted datum.
        #[arg(long)]
        index: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Homology, boundary, fundamental group and intersection form report.
    Invariants { datum: PathBuf },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        m_max: u32,
        /// Single l for thm-1-7-arith.
        #[arg(long)]
        l: Option<u64>,
        /// Single n for thm-1-7-arith.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = 4)]
        l_max: u64,
        /// Also write the JSON results here.
        #[arg(long)]
        results: Option<PathBuf>,
    },
    /// Replay a move trace and check its hash chain and declared target.
    Replay {
        datum: PathBuf,
        trace: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write the deletion move script for X_{n,m}(x).
    Script {
        n: usize,
        m: u32,
        #[arg(long)]
        seq: String,
        /// Index to delete; without it, the full chain down to C(m).
        #[arg(long)]
        index: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Tietze-simplify a presentation file.
    Simplify { presentation: PathBuf },
    /// Check framings against tb - 1 for a datum and a front.
    SteinCheck {
        datum: PathBuf,
        front: PathBuf,
        /// Value of m for twist boxes.
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// handle=component pairs; unlisted handles map to equal names.
        #[arg(long = "map")]
        map: Vec<String>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Io(_) | Error::DataFileMissing(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure { code: 3, message: format!("{}: {e}", path.display()) })
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure { code: 3, message: format!("{}: {e}", p.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_family(s: &str) -> Result<FamilyKind, Failure> {
    Ok(match s {
        "Cm" | "cm" => FamilyKind::Cm,
        "X" | "x" => FamilyKind::X,
        "C" | "c" => FamilyKind::C,
        "D" | "d" => FamilyKind::D,
        "E" | "e" => FamilyKind::E,
        "F" | "f" => FamilyKind::F,
        "W" | "w" => FamilyKind::W,
        "Z" | "z" => FamilyKind::Z,
        _ => return Err(Failure::usage(format!("unknown family {s:?}"))),
    })
}

fn parse_seq(s: &str) -> Result<StarZeroSequence, Failure> {
    s.parse().map_err(|e: Error| Failure::usage(e.to_string()))
}

fn emit<T: Serialize>(format: Format, value: &T, md: impl FnOnce(&T) -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("report serializes")),
        Format::Md => print!("{}", md(value)),
    }
}

#[derive(Serialize)]
struct InvariantsReport {
    #[serde(with = "bigint_list")]
    h1: Vec<num_bigint::BigInt>,
    b2: usize,
    #[serde(with = "bigint_list")]
    boundary_invariants: Vec<num_bigint::BigInt>,
    is_homology_sphere: bool,
    pi1_certified_trivial: bool,
    /// `true`, `false`, or `null` when the search is inconclusive.
    form_diag_minus_one: Option<bool>,
}

fn cmd_gen(family: &str, n: usize, m: u32, seq: Option<&str>, index: Option<usize>, out: Option<&Path>) -> CmdResult {
    let kind = parse_family(family)?;
    if n == 0 {
        return Err(Failure::usage("n must be at least 1"));
    }
    if m == 0 {
        return Err(Failure::usage("m must be at least 1"));
    }
    let seq = seq.map(parse_seq).transpose()?;
    let d = build_named(kind, n, m, seq.as_ref(), index)?;
    write_or_print(out, &datum_to_string(&d))?;
    Ok(0)
}

fn cmd_invariants(path: &Path, budget: usize, format: Format) -> CmdResult {
    let d = datum_from_str(&read(path)?)?;
    let h = homology(&d)?;
    let bd = boundary_h1(&d);
    let t = tietze_simplify(&pi1_presentation(&d), budget);
    let form = match is_diag_minus_one(&intersection_form(&d)?)? {
        DiagMinusOne::Yes(_) => Some(true),
        DiagMinusOne::No(_) => Some(false),
        DiagMinusOne::Inconclusive => None,
    };
    let report = InvariantsReport {
        h1: h.h1_invariants,
        b2: h.b2,
        boundary_invariants: bd.invariants,
        is_homology_sphere: bd.is_homology_sphere,
        pi1_certified_trivial: t.certified_trivial,
        form_diag_minus_one: form,
    };
    emit(format, &report, |r| {
        let fmt = |v: &[num_bigint::BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        format!(
            "| field | value |\n|---|---|\n| h1 | [{}] |\n| b2 | {} |\n| boundary_invariants | [{}] |\n| is_homology_sphere | {} |\n| pi1_certified_trivial | {} |\n| form_diag_minus_one | {} |\n",
            fmt(&r.h1),
            r.b2,
            fmt(&r.boundary_invariants),
            r.is_homology_sphere,
            r.pi1_certified_trivial,
            r.form_diag_minus_one.map_or("inconclusive".to_string(), |b| b.to_string())
        )
    });
    Ok(0)
}

fn suite_md(r: &suites::SuiteResult) -> String {
    let mut s = format!("## {}\n\n{} passed, {} failed\n\n| case | result | detail |\n|---|---|---|\n", r.suite, r.passed, r.failed);
    for c in &r.cases {
        s.push_str(&format!("| {} | {} | {} |\n", c.case, if c.pass { "pass" } else { "FAIL" }, c.detail.replace('|', "/")));
    }
    s
}

fn cmd_verify(suite: &str, grid: suites::Grid, results: Option<&Path>, format: Format) -> CmdResult {
    let r = suites::run(suite, &grid)
        .ok_or_else(|| Failure::usage(format!("unknown suite {suite:?}; known: {}", suites::SUITES.join(", "))))?;
    if let Some(p) = results {
        let json = serde_json::to_string_pretty(&r).expect("results serialize");
        std::fs::write(p, json + "\n").map_err(|e| Failure { code: 3, message: format!("{}: {e}", p.display()) })?;
    }
    emit(format, &r, suite_md);
    for c in r.cases.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}: {}", c.case, c.detail);
    }
    Ok(if r.failed == 0 { 0 } else { 1 })
}

#[derive(Serialize)]
struct ReplayReport {
    steps: usize,
    integrity: bool,
    /// `null` when the trace declares no target.
    target_matches: Option<bool>,
    error: Option<String>,
    result_hash: Option<String>,
}

fn cmd_replay(datum: &Path, trace: &Path, out: Option<&Path>, format: Format) -> CmdResult {
    let d = datum_from_str(&read(datum)?)?;
    let t = trace_from_str(&read(trace)?)?;
    let mut report = ReplayReport { steps: t.steps.len(), integrity: false, target_matches: None, error: None, result_hash: None };
    match replay(&d, &t) {
        Ok(end) => {
            report.integrity = true;
            report.result_hash = Some(corkcalc::moves::datum_hash(&end));
            if let Some(target) = &t.target {
                let want = build_named(target.family, target.n, target.m, target.seq.as_ref(), None)?;
                report.target_matches = Some(isomorphic(&end, &want)?.is_some());
            }
            if let Some(p) = out {
                write_or_print(Some(p), &datum_to_string(&end))?;
            }
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    emit(format, &report, |r| {
        format!(
            "| field | value |\n|---|---|\n| steps | {} |\n| integrity | {} |\n| target_matches | {} |\n| error | {} |\n",
            r.steps,
            r.integrity,
            r.target_matches.map_or("none declared".into(), |b| b.to_string()),
            r.error.clone().unwrap_or_default()
        )
    });
    let ok = report.integrity && report.target_matches != Some(false);
    Ok(if ok { 0 } else { 1 })
}

fn cmd_script(n: usize, m: u32, seq: &str, index: Option<usize>, out: Option<&Path>) -> CmdResult {
    let x = parse_seq(seq)?;
    let t = match index {
        Some(i) => deletion_script(n, m, &x, i)?,
        None => {
            if x.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: x.len() }.into());
            }
            deletion_chain(n, m, &x)?
        }
    };
    write_or_print(out, &trace_to_string(&t))?;
    Ok(0)
}

fn cmd_simplify(path: &Path, budget: usize, format: Format) -> CmdResult {
    let p = presentation_from_str(&read(path)?)?;
    let out = tietze_simplify(&p, budget);
    emit(format, &out, |o| {
        format!(
            "certified trivial: {}\nsteps: {}\nbudget exhausted: {}\n\n```\n{}```\n",
            o.certified_trivial,
            o.steps,
            o.budget_exhausted,
            corkcalc::format::presentation_to_string(&o.presentation)
        )
    });
    Ok(0)
}

fn cmd_stein(datum: &Path, front: &Path, m: u32, map: &[String], format: Format) -> CmdResult {
    let d = datum_from_str(&read(datum)?)?;
    let src = FrontSource::parse(&read(front)?)?;
    let templates = if src.events.iter().any(|e| matches!(e, corkcalc::stein::Event::Twist { .. })) {
        TwistTemplates::load()?
    } else {
        TwistTemplates::default()
    };
    let f = src.instantiate(m, &templates)?;
    let mut corr: BTreeMap<String, String> = identity_correspondence(&d);
    for pair in map {
        let (h, c) = pair.split_once('=').ok_or_else(|| Failure::usage(format!("bad --map {pair:?}, want handle=component")))?;
        corr.insert(h.to_string(), c.to_string());
    }
    let r = stein_check(&d, &f, &corr)?;
    emit(format, &r, |r| {
        let mut s = String::from("| handle | component | framing | tb | rot | deficit | verdict |\n|---|---|---|---|---|---|---|\n");
        for h in &r.handles {
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} |\n",
                h.handle,
                h.component,
                h.framing,
                h.tb,
                h.rot,
                h.deficit,
                if h.pass { "pass" } else { "FAIL" }
            ));
        }
        for mm in &r.mismatches {
            s.push_str(&format!("\n- {mm}"));
        }
        s.push_str(&format!("\n\n{}\n", if r.pass { "PASS" } else { "FAIL" }));
        s
    });
    Ok(if r.pass { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // Only fails if a global pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    let result = match &cli.cmd {
        Cmd::Gen { family, n, m, seq, index, out } => cmd_gen(family, *n, *m, seq.as_deref(), *index, out.as_deref()),
        Cmd::Invariants { datum } => cmd_invariants(datum, cli.budget, cli.format),
        Cmd::Verify { suite, n_max, m_max, l, n, l_max, results } => {
            let grid = suites::Grid { n_max: *n_max, m_max: *m_max, l: *l, n: *n, l_max: *l_max, budget: cli.budget };
            cmd_verify(suite, grid, results.as_deref(), cli.format)
        }
        Cmd::Replay { datum, trace, out } => cmd_replay(datum, trace, out.as_deref(), cli.format),
        Cmd::Script { n, m, seq, index, out } => cmd_script(*n, *m, seq, *index, out.as_deref()),
        Cmd::Simplify { presentation } => cmd_simplify(presentation, cli.budget, cli.format),
        Cmd::SteinCheck { datum, front, m, map } => cmd_stein(datum, front, *m, map, cli.format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
