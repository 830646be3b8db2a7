use cubic_units::bounds::{absolute_parameter_bound, bounds_report, derivation_chain, ChainStep};
use cubic_units::cubic_core::UnitRepr;
use cubic_units::reduction::{completed_parameters, sweep, verify_file, CertificateSink, SweepSummary};
use cubic_units::search::{
    conjecture_scan, reproduce_table, reproduce_table_with, solve_bounded, table1_fixture, write_classes_csv,
    SearchConfig,
};
use cubic_units::solutions::{orbit, EquivalenceClass, SolutionTriple};
use cubic_units::{CubicParams, Error};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::manifest::RunManifest;
use crate::{Command, Format};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Verification(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::ParamMismatch { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Verification(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    manifest: &'a RunManifest,
    #[serde(flatten)]
    body: &'a T,
}

/// Writes a JSON report, with the manifest embedded, to `out` or stdout.
fn emit_json<T: Serialize>(mut manifest: RunManifest, body: &T, out: Option<&Path>) -> Outcome {
    manifest.finish();
    let mut text = serde_json::to_string_pretty(&Document { manifest: &manifest, body }).map_err(Error::from)?;
    text.push('\n');
    write_output(manifest, text.as_bytes(), out)
}

fn emit_csv(manifest: RunManifest, classes: &[EquivalenceClass], out: Option<&Path>) -> Outcome {
    let mut buf = Vec::new();
    write_classes_csv(classes, &mut buf)?;
    write_output(manifest, &buf, out)
}

fn write_output(mut manifest: RunManifest, bytes: &[u8], out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => {
            std::fs::write(path, bytes)?;
            manifest.write_sidecar(path)?;
        }
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn classes_out(manifest: RunManifest, body: &impl Serialize, classes: &[EquivalenceClass], format: Format, out: Option<&Path>) -> Outcome {
    match format {
        Format::Json => emit_json(manifest, body, out),
        Format::Csv => emit_csv(manifest, classes, out),
    }
}

fn parse_unit(text: &str) -> std::result::Result<UnitRepr, Failure> {
    let bad = || Failure::Usage(format!("expected a unit as s,x,y with s = 1 or -1, got {text:?}"));
    let parts: Vec<i64> = text
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    match parts.as_slice() {
        [s @ (1 | -1), x, y] => Ok(UnitRepr::new(*s as i8, *x, *y)),
        _ => Err(bad()),
    }
}

fn read_fixture(manifest: &mut RunManifest, path: &Option<PathBuf>) -> std::result::Result<String, Failure> {
    match path {
        Some(p) => {
            manifest.input(p)?;
            Ok(std::fs::read_to_string(p)?)
        }
        None => Ok(table1_fixture().to_string()),
    }
}

pub fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Solve { a, n_max, x_max, trivial, format, out } => solve(a, n_max, x_max, trivial, format, out),
        Command::Sweep { from, to, out, precision_cap } => cmd_sweep(from, to, &out, precision_cap),
        Command::VerifyCerts { file } => verify_certs(&file),
        Command::Bounds { a, out } => bounds(a, out),
        Command::Orbit { a, u1, u2, out } => cmd_orbit(a, &u1, &u2, out),
        Command::Table { x_max, format, out, fixture } => table(x_max, format, out, fixture),
        Command::ConjectureScan { a, n_max, x_max, format, out } => scan(a, n_max, x_max, format, out),
        Command::Theorem { quick, out, precision_cap, fixture } => theorem(quick, out, precision_cap, fixture),
    }
}

fn solve(a: i64, n_max: Option<u64>, x_max: i64, trivial: bool, format: Format, out: Option<PathBuf>) -> Outcome {
    if a < -1 {
        return Err(Failure::Usage(format!("--a must be at least -1, got {a}")));
    }
    let manifest = RunManifest::start("solve");
    let params = CubicParams::new(a);
    let base = SearchConfig::theorem_mode(&params);
    let cfg = SearchConfig::new(&params, n_max.unwrap_or(base.n_max()), x_max)?.with_trivial(trivial);
    let result = solve_bounded(&cfg)?;
    let mut classes = result.sporadic.clone();
    classes.extend(result.trivial.iter().cloned());
    classes_out(manifest, &result, &classes, format, out.as_deref())
}

fn check_sweep_range(from: i64, to: i64) -> Outcome {
    if from <= 100 || to < from {
        return Err(Failure::Usage(format!("need 100 < from <= to, got {from}..{to}")));
    }
    let bound = absolute_parameter_bound()?;
    if to as u64 > bound {
        return Err(Failure::Usage(format!("--to {to} exceeds the absolute parameter bound {bound}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepBody<'a> {
    certificates: String,
    summary: &'a SweepSummary,
}

fn cmd_sweep(from: i64, to: i64, out: &Path, precision_cap: Option<u32>) -> Outcome {
    check_sweep_range(from, to)?;
    let mut manifest = RunManifest::start("sweep");
    if out.exists() {
        manifest.input(out)?;
    }
    let done = completed_parameters(out)?;
    let summary = {
        let sink = CertificateSink::append_to(out)?;
        sweep(from, to, &done, precision_cap, &sink)?
    };
    manifest.write_sidecar(out)?;
    let body = SweepBody {
        certificates: out.display().to_string(),
        summary: &summary,
    };
    emit_json(manifest, &body, None)?;
    if summary.all_contradictions() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} parameters without a contradiction, {} failures",
            summary.no_contradiction.len(),
            summary.failures.len()
        )))
    }
}

fn verify_certs(file: &Path) -> Outcome {
    let mut manifest = RunManifest::start("verify-certs");
    manifest.input(file)?;
    let report = verify_file(file)?;
    emit_json(manifest, &report, None)?;
    if report.ok() {
        Ok(())
    } else if report.verified == 0 && report.failures.is_empty() {
        Err(Failure::Verification("no certificates in file".into()))
    } else {
        Err(Failure::Verification(format!("{} of {} certificates failed replay", report.failures.len(), report.lines)))
    }
}

#[derive(Serialize)]
struct AbsoluteBody {
    absolute_parameter_bound: u64,
    derivation: Vec<ChainStep>,
}

fn bounds(a: Option<i64>, out: Option<PathBuf>) -> Outcome {
    let manifest = RunManifest::start("bounds");
    match a {
        Some(a) => {
            let report = bounds_report(&CubicParams::new(a))?;
            emit_json(manifest, &report, out.as_deref())
        }
        None => {
            let body = AbsoluteBody {
                absolute_parameter_bound: absolute_parameter_bound()?,
                derivation: derivation_chain()?,
            };
            let ok = body.derivation.iter().all(|s| s.holds);
            emit_json(manifest, &body, out.as_deref())?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Verification("a derivation step is not certified".into()))
            }
        }
    }
}

#[derive(Serialize)]
struct OrbitBody {
    class: EquivalenceClass,
    members: Vec<SolutionTriple>,
}

fn cmd_orbit(a: i64, u1: &str, u2: &str, out: Option<PathBuf>) -> Outcome {
    if a < -1 {
        return Err(Failure::Usage(format!("--a must be at least -1, got {a}")));
    }
    let manifest = RunManifest::start("orbit");
    let params = CubicParams::new(a);
    let (r1, r2) = (parse_unit(u1)?, parse_unit(u2)?);
    let sum = cubic_units::cubic_core::unit_from_exponents(&params, &r1)
        .checked_add(&cubic_units::cubic_core::unit_from_exponents(&params, &r2))?;
    let n = sum
        .as_integer()
        .cloned()
        .ok_or_else(|| Failure::Verification(format!("u1 + u2 = {sum} is not a rational integer")))?;
    let sol = SolutionTriple::new(&params, r1, r2, n)?;
    let body = OrbitBody {
        class: EquivalenceClass::of(&sol),
        members: orbit(&sol),
    };
    emit_json(manifest, &body, out.as_deref())
}

fn table(x_max: i64, format: Format, out: Option<PathBuf>, fixture: Option<PathBuf>) -> Outcome {
    let mut manifest = RunManifest::start("table");
    let text = read_fixture(&mut manifest, &fixture)?;
    let report = if fixture.is_none() && x_max == cubic_units::search::DEFAULT_X_MAX {
        reproduce_table()
    } else {
        reproduce_table_with(&text, x_max)
    }
    .map_err(|e| Failure::Verification(format!("reproduce_table: {e}")))?;
    classes_out(manifest, &report, &report.classes, format, out.as_deref())
}

fn scan(a: i64, n_max: u64, x_max: i64, format: Format, out: Option<PathBuf>) -> Outcome {
    let manifest = RunManifest::start("conjecture-scan");
    let report = conjecture_scan(a, n_max, x_max)?;
    classes_out(manifest, &report, &report.classes, format, out.as_deref())
}

#[derive(Serialize)]
struct Stage {
    name: &'static str,
    ok: bool,
    detail: String,
}

#[derive(Serialize)]
struct TheoremBody {
    verdict: String,
    exhaustive: bool,
    stages: Vec<Stage>,
    sporadic_classes: Vec<SolutionTriple>,
}

fn theorem(quick: bool, out: Option<PathBuf>, precision_cap: Option<u32>, fixture: Option<PathBuf>) -> Outcome {
    let mut manifest = RunManifest::start("theorem");
    let text = read_fixture(&mut manifest, &fixture)?;
    let mut body = TheoremBody {
        verdict: String::new(),
        exhaustive: !quick,
        stages: Vec::new(),
        sporadic_classes: Vec::new(),
    };
    let finish = |mut body: TheoremBody, manifest: RunManifest, failed: Option<(&'static str, String)>| -> Outcome {
        match failed {
            Some((stage, why)) => {
                body.verdict = format!("not verified: stage {stage} failed");
                emit_json(manifest, &body, None)?;
                Err(Failure::Verification(format!("stage {stage} failed: {why}")))
            }
            None => emit_json(manifest, &body, None),
        }
    };

    match reproduce_table_with(&text, cubic_units::search::DEFAULT_X_MAX) {
        Ok(r) => {
            body.stages.push(Stage {
                name: "reproduce_table",
                ok: true,
                detail: format!("{} sporadic classes, {} triples, -1 <= a <= 100", r.class_count, r.sporadic_triples),
            });
            body.sporadic_classes = r.classes.into_iter().map(|c| c.representative).collect();
        }
        Err(e) => return finish(body, manifest, Some(("reproduce_table", e.to_string()))),
    }

    let bound = match absolute_parameter_bound() {
        Ok(b) => b,
        Err(e) => return finish(body, manifest, Some(("absolute_parameter_bound", e.to_string()))),
    };
    body.stages.push(Stage {
        name: "absolute_parameter_bound",
        ok: true,
        detail: format!("upper and lower exponent bounds contradict for every a > {bound}"),
    });

    let to = bound as i64;
    let mut skip: BTreeSet<i64> = match &out {
        Some(p) => completed_parameters(p)?,
        None => BTreeSet::new(),
    };
    if quick {
        skip.extend((101..=to).filter(|a| (a - 101) % 100 != 0));
    }
    let sink = match &out {
        Some(p) => CertificateSink::append_to(p)?,
        None => CertificateSink::null(),
    };
    let summary = match sweep(101, to, &skip, precision_cap, &sink) {
        Ok(s) => s,
        Err(e) => return finish(body, manifest, Some(("sweep", e.to_string()))),
    };
    drop(sink);
    if let Some(p) = &out {
        manifest.write_sidecar(p)?;
    }
    let ok = summary.all_contradictions();
    body.stages.push(Stage {
        name: "sweep",
        ok,
        detail: format!(
            "{} certificates with a contradiction for 101 <= a <= {to}{}",
            summary.contradictions,
            if quick { ", every 100th parameter" } else { "" }
        ),
    });
    if !ok {
        let why = format!("{} without contradiction, {} failures", summary.no_contradiction.len(), summary.failures.len());
        return finish(body, manifest, Some(("sweep", why)));
    }
    body.verdict = if quick {
        "theorem verified at certificate level (non-exhaustive: sweep subsampled every 100th a)".into()
    } else {
        "theorem verified at certificate level".into()
    };
    finish(body, manifest, None)
}
