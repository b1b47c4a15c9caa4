//! The `vertex` command line. Every command parses its arguments, calls one
//! library entry point and renders the result.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use vertex_core::characters::{boson_fermion_character_check, character, lattice_theta_character, QSeries};
use vertex_core::coords::{huang_check, primary_differential_check, CoordChange, Truncation};
use vertex_core::correlators::{bootstrap_verify, consistency_check, heisenberg_npoint};
use vertex_core::error::Error;
use vertex_core::fock::{AlgebraDocument, State};
use vertex_core::half::Half;
use vertex_core::ope::{center, check_commutator, commutator_via_formula, coset_graded, corrupted_heisenberg, singular_part, verify_axioms};
use vertex_core::presets::{self, boson_fermion_check, AlgebraInstance};
use vertex_core::scalars::ParamPoint;

#[derive(Parser, Debug)]
#[command(name = "vertex", version, about = "Exact computations in vertex algebras")]
pub struct Cli {
    /// Emit the structured JSON form.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraArgs {
    /// Preset name (heisenberg, virasoro, affine:sl2, affine:sl3, fermion,
    /// weyl:N, lattice:N, commutative, corrupted:heisenberg) or a JSON file.
    #[arg(long, default_value = "heisenberg")]
    pub algebra: String,
    /// Parameter assignment such as `k=-2`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    pub params: Vec<String>,
    /// Shorthand for `--param lambda=VALUE`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the vertex algebra axioms on all basis states up to a degree.
    Verify {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<String>,
    },
    /// Singular part of the operator product of two states.
    Ope {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Commutator `[A_m, B_n]` from the operator product, checked against
    /// direct commutators on basis states.
    Bracket {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long, default_value = "4")]
        degree: String,
    },
    /// Graded character of a sector, or of all sectors of a lattice algebra.
    Character {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long, default_value = "6")]
        cutoff: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        sector: i64,
        /// Sum over lattice sectors and compare with the theta-series form.
        #[arg(long)]
        all_sectors: bool,
    },
    /// Correlation functions: the Heisenberg pairing sum, or a region and
    /// translation consistency check for the listed insertions.
    Npoint {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Number of `b(-1)|0>` insertions in the Heisenberg formula.
        #[arg(long)]
        n: Option<usize>,
        /// Insertions separated by `;`.
        #[arg(long)]
        states: Option<String>,
        /// Functional `phi`, paired with the product of insertions.
        #[arg(long, default_value = "|0>")]
        phi: String,
        /// Exponent window for the region comparison.
        #[arg(long, default_value_t = 3)]
        radius: i64,
    },
    /// Basis of the center in each degree up to `--degree`.
    Center {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long, default_value = "2")]
        degree: String,
    },
    /// Basis of the commutant of the listed states in each degree.
    Coset {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Generating states separated by `;`.
        #[arg(long)]
        states: String,
        #[arg(long, default_value = "2")]
        degree: String,
    },
    /// Transformation law of a field under a change of coordinate.
    CoordCheck {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// State to transform; every basis state up to `--degree` if absent.
        #[arg(long)]
        a: Option<String>,
        /// Coefficients `rho_1, rho_2, ...` of `rho(z)`.
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
        #[arg(long, default_value = "3")]
        degree: String,
        /// Work to first order in this parameter.
        #[arg(long)]
        first_order: Option<String>,
        /// Check the differential law for a primary state instead.
        #[arg(long)]
        primary: bool,
    },
    /// Fermion against lattice: the explicit isomorphism and graded dimensions.
    BfCheck {
        #[arg(long, default_value = "2")]
        degree: String,
    },
}

/// Exit code and rendered output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(passed: bool, stdout: String) -> Outcome {
        Outcome {
            code: if passed { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: String) -> Outcome {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: msg,
        }
    }
}

fn point(alg: &AlgebraArgs) -> Result<ParamPoint, Error> {
    let mut p = ParamPoint::new();
    for a in &alg.params {
        p.parse_assignment(a)?;
    }
    if let Some(l) = &alg.lambda {
        p.parse_assignment(&format!("lambda={l}"))?;
    }
    Ok(p)
}

/// Resolve `--algebra` and apply parameter assignments.
pub fn load_algebra(alg: &AlgebraArgs) -> Result<AlgebraInstance, Error> {
    let inst = if alg.algebra == "corrupted:heisenberg" {
        AlgebraInstance::new("corrupted:heisenberg", corrupted_heisenberg())
    } else if alg.algebra.ends_with(".json") || Path::new(&alg.algebra).is_file() {
        let text = std::fs::read_to_string(&alg.algebra)
            .map_err(|e| Error::InvalidAlgebra(format!("{}: {e}", alg.algebra)))?;
        presets::from_document(&AlgebraDocument::from_json(&text)?)?
    } else {
        presets::preset(&alg.algebra)?
    };
    let p = point(alg)?;
    if p.is_empty() {
        Ok(inst)
    } else {
        inst.specialize(&p)
    }
}

fn half(flag: &str, s: &str) -> Result<Half, Error> {
    s.parse().map_err(|e: Error| Error::Unsupported(format!("--{flag}: {e}")))
}

fn state(inst: &AlgebraInstance, flag: &str, s: &str) -> Result<State, Error> {
    inst.parse(s).map_err(|e| Error::Unsupported(format!("--{flag}: {e}")))
}

fn states(inst: &AlgebraInstance, flag: &str, s: &str) -> Result<Vec<State>, Error> {
    s.split(';').map(|t| state(inst, flag, t.trim())).collect()
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json renders") + "\n"
}

fn verify(alg: &AlgebraArgs, degree: &Option<String>, as_json: bool) -> Result<Outcome, Error> {
    let inst = load_algebra(alg)?;
    let d = match degree {
        Some(s) => half("degree", s)?,
        None => inst.default_degree(),
    };
    let report = verify_axioms(inst.name(), inst.va(), d);
    let text = if as_json {
        report.to_json() + "\n"
    } else {
        let verdict = if report.passed() { "all axioms pass" } else { "axiom check failed" };
        format!("{}{verdict}\n", report.table())
    };
    Ok(Outcome::ok(report.passed(), text))
}

fn ope(alg: &AlgebraArgs, a: &str, b: &str, as_json: bool) -> Result<Outcome, Error> {
    let inst = load_algebra(alg)?;
    let (sa, sb) = (state(&inst, "a", a)?, state(&inst, "b", b)?);
    let sp = singular_part(inst.va(), &sa, &sb);
    let text = if as_json {
        let poles: serde_json::Map<String, Value> = sp
            .poles
            .iter()
            .map(|(j, s)| (j.to_string(), Value::String(inst.render(s))))
            .collect();
        pretty(&json!({"a": inst.render(&sa), "b": inst.render(&sb), "poles": poles}))
    } else {
        sp.render(inst.va()) + "\n"
    };
    Ok(Outcome::ok(true, text))
}

#[allow(clippy::too_many_arguments)]
fn bracket(alg: &AlgebraArgs, a: &str, b: &str, m: &str, n: &str, degree: &str, as_json: bool) -> Result<Outcome, Error> {
    let inst = load_algebra(alg)?;
    let (sa, sb) = (state(&inst, "a", a)?, state(&inst, "b", b)?);
    let (m, n, d) = (half("m", m)?, half("n", n)?, half("degree", degree)?);
    let va = inst.va();
    let f = commutator_via_formula(va, &sa, m, &sb, n);
    let terms: Vec<String> = f
        .terms
        .iter()
        .map(|t| format!("({}) ({})_({})", t.coeff, inst.render(&t.state), f.mode))
        .collect();
    let formula = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    let checked = check_commutator(va, &sa, m, &sb, n, d);
    let text = if as_json {
        let (passed, detail) = match &checked {
            Ok(k) => (true, json!({"states": k})),
            Err(v) => (false, json!({"witness": inst.render(v)})),
        };
        pretty(&json!({"mode": f.mode.to_string(), "formula": formula, "passed": passed, "check": detail}))
    } else {
        let mut out = format!("[A_({m}), B_({n})] = {formula}\n");
        match &checked {
            Ok(k) => writeln!(out, "agrees with direct commutators on {k} basis states to degree {d}").unwrap(),
            Err(v) => writeln!(out, "disagrees on basis state {}", inst.render(v)).unwrap(),
        }
        out
    };
    Ok(Outcome::ok(checked.is_ok(), text))
}

fn render_series(s: &QSeries, as_json: bool) -> String {
    if as_json {
        pretty(&s.to_json())
    } else {
        format!("{s}\n")
    }
}

fn character_cmd(alg: &AlgebraArgs, cutoff: &str, sector: i64, all: bool, as_json: bool) -> Result<Outcome, Error> {
    let inst = load_algebra(alg)?;
    let p = point(alg)?;
    let cutoff = half("cutoff", cutoff)?;
    if !all {
        return Ok(Outcome::ok(true, render_series(&character(&inst, sector, cutoff, &p)?, as_json)));
    }
    let fock = inst.fock();
    let mut total: Option<QSeries> = None;
    for s in fock.sectors_up_to(cutoff) {
        let ch = character(&inst, s, cutoff - fock.sector_energy(s), &p)?;
        total = Some(match total {
            None => ch,
            Some(t) => t.add(&ch)?,
        });
    }
    let total = total.expect("sector 0 is always present");
    let Some(n) = inst.algebra().lattice().map(|l| l.n) else {
        return Ok(Outcome::ok(true, render_series(&total, as_json)));
    };
    let theta = lattice_theta_character(n, cutoff);
    let agree = theta == total;
    let text = if as_json {
        pretty(&json!({"sectors": total.to_json(), "theta": theta.to_json(), "agree": agree}))
    } else {
        format!(
            "{total}\ntheta form {}\n",
            if agree { "agrees" } else { "DISAGREES" }
        )
    };
    Ok(Outcome::ok(agree, text))
}

fn npoint(
    alg: &AlgebraArgs,
    n: Option<usize>,
    list: &Option<String>,
    phi: &str,
    radius: i64,
    as_json: bool,
) -> Result<Outcome, Error> {
    let inst = load_algebra(alg)?;
    let phi = state(&inst, "phi", phi)?;
    if let Some(list) = list {
        let ins = states(&inst, "states", list)?;
        let r = consistency_check(inst.va(), &ins, &phi, &[], radius)?;
        let text = if as_json {
            pretty(&serde_json::to_value(&r).expect("report serializes"))
        } else {
            let mut out = format!(
                "{}\n{} regions, {} coefficients  {}\n",
                r.correlator,
                r.regions,
                r.coefficients,
                if r.passed { "pass" } else { "FAIL" }
            );
            if let Some(w) = &r.witness {
                writeln!(out, "  {w}").unwrap();
            }
            out
        };
        return Ok(Outcome::ok(r.passed, text));
    }
    let n = n.ok_or_else(|| Error::Unsupported("npoint needs --n or --states".into()))?;
    let f = heisenberg_npoint(&phi, n)?;
    let boot = bootstrap_verify(&phi, n)?;
    let text = if as_json {
        pretty(&json!({"correlator": f.to_json(), "bootstrap": boot}))
    } else {
        let mut out = format!("{}\nrecursion {} ({} cases)\n", f.render(), if boot.passed { "pass" } else { "FAIL" }, boot.cases);
        if let Some(w) = &boot.witness {
            writeln!(out, "  {w}").unwrap();
        }
        out
    };
    Ok(Outcome::ok(boot.passed, text))
}

fn graded_listing(inst: &AlgebraInstance, d: Half, as_json: bool, f: impl Fn(Half) -> Vec<State>) -> String {
    let mut rows = Vec::new();
    let mut k = Half::ZERO;
    while k <= d {
        let basis: Vec<String> = f(k).iter().map(|s| inst.render(s)).collect();
        rows.push((k, basis));
        k += Half::from_doubled(1);
    }
    if as_json {
        let v: Vec<Value> = rows
            .iter()
            .map(|(k, b)| json!({"degree": k.to_string(), "dimension": b.len(), "basis": b}))
            .collect();
        return pretty(&Value::Array(v));
    }
    let mut out = String::new();
    for (k, basis) in rows {
        if basis.is_empty() && !k.is_integer() {
            continue;
        }
        writeln!(out, "degree {k}: dim {}", basis.len()).unwrap();
        for b in basis {
            writeln!(out, "  {b}").unwrap();
        }
    }
    out
}

fn coord_check(
    alg: &AlgebraArgs,
    a: &Option<String>,
    rho: &str,
    degree: &str,
    first_order: &Option<String>,
    primary: bool,
    as_json: bool,
) -> Result<Outcome, Error> {
    let inst = load_algebra(alg)?;
    let rho = CoordChange::parse(rho)?;
    let d = half("degree", degree)?;
    let trunc = match first_order {
        Some(v) => Truncation::FirstOrder(v.clone()),
        None => Truncation::Exact,
    };
    let targets: Vec<State> = match a {
        Some(s) => vec![state(&inst, "a", s)?],
        None => inst
            .fock()
            .basis_up_to(d)
            .into_iter()
            .map(State::from_monomial)
            .collect(),
    };
    let mut reports = Vec::new();
    for t in &targets {
        reports.push(if primary {
            primary_differential_check(&inst, t, &rho, d, &trunc)?
        } else {
            huang_check(&inst, t, &rho, d, &trunc)?
        });
    }
    let passed = reports.iter().all(|r| r.passed);
    let text = if as_json {
        pretty(&serde_json::to_value(&reports).expect("reports serialize"))
    } else {
        let mut out = format!("rho(z) = {}\n", rho.render());
        for (t, r) in targets.iter().zip(&reports) {
            writeln!(out, "{}: {}", inst.render(t), r.summary()).unwrap();
        }
        out
    };
    Ok(Outcome::ok(passed, text))
}

fn bf_check(degree: &str, as_json: bool) -> Result<Outcome, Error> {
    let d = half("degree", degree)?;
    let iso = boson_fermion_check(d);
    let dims = boson_fermion_character_check(d.doubled())?;
    let passed = iso.passed() && dims.passed;
    let text = if as_json {
        pretty(&json!({"isomorphism": iso, "dimensions": dims, "passed": passed}))
    } else {
        let mut out = String::from("degree  fermion  lattice  rank\n");
        for (k, f, l, r) in &iso.dims {
            writeln!(out, "{:>6}  {:>7}  {:>7}  {:>4}", k.to_string(), f, l, r).unwrap();
        }
        writeln!(out, "{} intertwining relations checked", iso.intertwinings_checked).unwrap();
        if let Some(m) = &iso.mismatch {
            writeln!(out, "  {m}").unwrap();
        }
        writeln!(
            out,
            "graded dimensions by enumeration: {}",
            if dims.passed { "equal" } else { "DIFFER" }
        )
        .unwrap();
        out
    };
    Ok(Outcome::ok(passed, text))
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    let j = cli.json;
    match &cli.command {
        Command::Verify { alg, degree } => verify(alg, degree, j),
        Command::Ope { alg, a, b } => ope(alg, a, b, j),
        Command::Bracket { alg, a, b, m, n, degree } => bracket(alg, a, b, m, n, degree, j),
        Command::Character { alg, cutoff, sector, all_sectors } => character_cmd(alg, cutoff, *sector, *all_sectors, j),
        Command::Npoint { alg, n, states, phi, radius } => npoint(alg, *n, states, phi, *radius, j),
        Command::Center { alg, degree } => {
            let inst = load_algebra(alg)?;
            let d = half("degree", degree)?;
            Ok(Outcome::ok(true, graded_listing(&inst, d, j, |k| center(inst.va(), k))))
        }
        Command::Coset { alg, states: list, degree } => {
            let inst = load_algebra(alg)?;
            let w = states(&inst, "states", list)?;
            let d = half("degree", degree)?;
            Ok(Outcome::ok(true, graded_listing(&inst, d, j, |k| coset_graded(inst.va(), &w, k))))
        }
        Command::CoordCheck { alg, a, rho, degree, first_order, primary } => {
            coord_check(alg, a, rho, degree, first_order, *primary, j)
        }
        Command::BfCheck { degree } => bf_check(degree, j),
    }
}

/// Run one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(true, text)
            } else {
                Outcome::usage(text)
            };
        }
    };
    let mut outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &outcome.stdout) {
            return Outcome::usage(format!("error: cannot write {}: {e}\n", path.display()));
        }
        outcome.stdout.clear();
    }
    outcome
}

#[cfg(test)]
mod tests;
