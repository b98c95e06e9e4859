//! Command-line interface.
//!
//! Exit codes: 0 success, 1 parse/usage/IO error, 2 backend refusal,
//! 3 invalid model, 4 cap exceeded, 5 verification mismatch. Data goes to
//! stdout (or `--output`), diagnostics to stderr.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::distributions::{Distribution as _, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::random::{random_circuit_over, random_clifford_circuit, MeasureChoice, RandomCircuitSpec};
use crate::circuit::{gate_key, parse_circuit, schedule, Circuit, GateApp};
use crate::modular::is_odd_prime;
use crate::ncom::{
    exact_ontological_distribution, load_model, ModelFileError, OntologicalModel, SamplingPlan, SimError,
    DEFAULT_SUPPORT_CAP,
};
use crate::oracle::{
    derive_symplectic, exact_quantum_distribution, gate_matrix, negativity, wigner_function, OracleError,
    DEFAULT_AMPLITUDE_CAP, ORACLE_GATES,
};
use crate::rng::{shot_rng, shot_seed};
use crate::stats::{max_abs_difference, normalize, report_tsv, tv_distance, Distribution, Outcome};
use crate::wigner::{build_ncom, WignerError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_REFUSED: u8 = 2;
pub const EXIT_MODEL_INVALID: u8 = 3;
pub const EXIT_CAP: u8 = 4;
pub const EXIT_MISMATCH: u8 = 5;

/// Enumerator and oracle must agree to this per-outcome difference.
pub const EXACT_TOL: f64 = 1e-9;
/// Negativities at or below this count as zero.
pub const NEGATIVITY_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "ncomsim", version, about = "Weak simulation of circuits with a noncontextual ontological model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// More diagnostics on stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample measurement outcomes and write counts as TSV.
    Simulate(SimulateArgs),
    /// Compare oracle, exact ontological and sampled distributions.
    Verify(VerifyArgs),
    /// Validate a model file.
    CheckModel(CheckModelArgs),
    /// Wigner negativity of every preparation, gate and measurement.
    Negativity(NegativityArgs),
    /// Time random stabilizer circuits of growing size.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Wigner,
    Generic,
    Statevector,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Backend::Wigner)]
    pub backend: Backend,
    #[arg(long)]
    pub circuit: PathBuf,
    /// Model file, required by the generic backend.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Backend::Wigner)]
    pub backend: Backend,
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cap on the enumerator's initial support size.
    #[arg(long, default_value_t = DEFAULT_SUPPORT_CAP)]
    pub support_cap: usize,
    /// Largest accepted TV distance between sampled and oracle distributions.
    #[arg(long, default_value_t = 0.01)]
    pub tv_threshold: f64,
    /// Skip the statevector oracle (generic models that are not quantum circuits).
    #[arg(long)]
    pub no_oracle: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckModelArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NegativityArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Backend::Wigner)]
    pub backend: Backend,
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Comma-separated wire counts.
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    pub sizes: Vec<usize>,
    /// Circuit depth; defaults to the wire count.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub dim: u32,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A command error: exit code and message for stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        let code = match e {
            SimError::InvalidModel(_) => EXIT_MODEL_INVALID,
            SimError::Mismatch(_) => EXIT_REFUSED,
            SimError::SupportCapExceeded { .. } => EXIT_CAP,
            SimError::NoShots | SimError::Stats(_) => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::CapExceeded { .. } => EXIT_CAP,
            OracleError::BadDimension(_) | OracleError::UnknownGate(_) | OracleError::NotClifford(_) => EXIT_REFUSED,
            _ => EXIT_USAGE,
        };
        Failure::new(code, format!("oracle: {e}"))
    }
}

/// Data for stdout plus the exit code of a command that ran to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub data: String,
    pub code: u8,
}

impl Report {
    fn ok(data: String) -> Self {
        Self { data, code: EXIT_OK }
    }
}

pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(f) = configure_threads(std::env::var("NCOMSIM_THREADS").ok().as_deref()) {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code);
    }
    ExitCode::from(run(&cli))
}

/// Sizes the worker pool from the `NCOMSIM_THREADS` value, if any.
pub fn configure_threads(value: Option<&str>) -> Result<(), Failure> {
    let Some(text) = value else { return Ok(()) };
    let n: usize =
        text.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
            Failure::new(EXIT_USAGE, format!("NCOMSIM_THREADS must be a positive integer, got {text:?}"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot configure worker threads: {e}")))
}

/// Runs a parsed command line, printing data and diagnostics. Returns the exit code.
pub fn run(cli: &Cli) -> u8 {
    let (result, output) = match &cli.command {
        Command::Simulate(a) => (cmd_simulate(a, cli.verbose), a.output.as_deref()),
        Command::Verify(a) => (cmd_verify(a, cli.verbose), a.output.as_deref()),
        Command::CheckModel(a) => (cmd_check_model(a), a.output.as_deref()),
        Command::Negativity(a) => (cmd_negativity(a), a.output.as_deref()),
        Command::Bench(a) => (cmd_bench(a, cli.verbose), a.output.as_deref()),
    };
    match result.and_then(|report| emit(output, &report.data).map(|()| report.code)) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn emit(output: Option<&Path>, data: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, data)
            .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))
}

pub fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = read_file(path)?;
    let c = parse_circuit(&text).map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(c.with_name(name))
}

pub fn load_model_file(path: &Path) -> Result<OntologicalModel, Failure> {
    let text = read_file(path)?;
    load_model(&text).map_err(|e| {
        let code = match e {
            ModelFileError::Invalid(_) => EXIT_MODEL_INVALID,
            ModelFileError::Schema { .. } | ModelFileError::Version(_) => EXIT_USAGE,
        };
        Failure::new(code, format!("{}: {e}", path.display()))
    })
}

fn wigner_model(c: &Circuit) -> Result<OntologicalModel, Failure> {
    build_ncom(c).map_err(|e| {
        let code = match e {
            WignerError::NotRepresentable(_) | WignerError::BadDimension(_) => EXIT_REFUSED,
            _ => EXIT_USAGE,
        };
        Failure::new(code, format!("wigner backend refuses circuit {:?}: {e}", c.name))
    })
}

fn model_for(backend: Backend, c: &Circuit, model: Option<&Path>) -> Result<OntologicalModel, Failure> {
    match backend {
        Backend::Wigner => wigner_model(c),
        Backend::Generic => {
            let path = model.ok_or_else(|| Failure::new(EXIT_USAGE, "the generic backend needs --model"))?;
            load_model_file(path)
        }
        Backend::Statevector => unreachable!("statevector has no ontological model"),
    }
}

fn describe(c: &Circuit) -> String {
    format!(
        "circuit {:?}: d={} wires={} gates={} depth={} measured={}",
        c.name,
        c.dim,
        c.n_wires,
        c.gates.len(),
        schedule(c).depth(),
        c.measured.len()
    )
}

/// Draws `shots` outcomes from an exact distribution with the same per-shot
/// streams as the ontological sampler.
pub fn sample_exact(dist: &Distribution, seed: u64, shots: u64) -> Result<Distribution, Failure> {
    let (outcomes, weights): (Vec<&Outcome>, Vec<f64>) = dist.iter().unzip();
    let index = WeightedIndex::new(&weights).map_err(|e| Failure::new(EXIT_USAGE, format!("cannot sample: {e}")))?;
    let tally = (0..shots)
        .into_par_iter()
        .fold(
            || vec![0u64; outcomes.len()],
            |mut acc, k| {
                acc[index.sample(&mut shot_rng(seed, k))] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; outcomes.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let mut counts = Distribution::counts();
    for (o, n) in outcomes.into_iter().zip(tally) {
        if n > 0 {
            counts.add_count(o.clone(), n);
        }
    }
    Ok(counts)
}

pub fn cmd_simulate(a: &SimulateArgs, verbose: u8) -> Result<Report, Failure> {
    let c = load_circuit(&a.circuit)?;
    if verbose > 0 {
        eprintln!("{}", describe(&c));
    }
    let start = Instant::now();
    let counts = match a.backend {
        Backend::Statevector => sample_exact(&exact_quantum_distribution(&c, DEFAULT_AMPLITUDE_CAP)?, a.seed, a.shots)?,
        backend => {
            let m = model_for(backend, &c, a.model.as_deref())?;
            let plan = SamplingPlan::new(&m, &c, &schedule(&c))?;
            if verbose > 0 {
                eprintln!("touched pairs: {}", plan.touched_pairs().len());
            }
            plan.sample_many(a.seed, a.shots)?
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!("shots: {}\nseed: {}\nwall time: {elapsed:.3} s", a.shots, a.seed);
    Ok(Report::ok(report_tsv(&counts, None)))
}

/// Oracle, exact ontological and sampled distributions with their distances.
/// The oracle is absent for generic models that are not quantum circuits.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub oracle: Option<Distribution>,
    pub ontological: Distribution,
    pub sampled: Distribution,
    pub max_abs_diff: Option<f64>,
    pub tv_ontological_oracle: Option<f64>,
    pub tv_sampled_oracle: Option<f64>,
    pub tv_sampled_ontological: f64,
}

impl VerifyOutcome {
    /// Enumerator equals oracle within [`EXACT_TOL`] and the sampler is within
    /// `tv_threshold` of the oracle; without an oracle, of the enumerator.
    pub fn passes(&self, tv_threshold: f64) -> bool {
        match (self.max_abs_diff, self.tv_sampled_oracle) {
            (Some(diff), Some(tv)) => diff <= EXACT_TOL && tv <= tv_threshold,
            _ => self.tv_sampled_ontological <= tv_threshold,
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("outcome\toracle\tontological\tsampled\n");
        let mut keys: Vec<&Outcome> = self.ontological.outcomes().chain(self.sampled.outcomes()).collect();
        if let Some(o) = &self.oracle {
            keys.extend(o.outcomes());
        }
        keys.sort();
        keys.dedup();
        for o in keys {
            let oracle = self.oracle.as_ref().map_or("-".to_string(), |d| d.get(o).to_string());
            let _ = writeln!(out, "{o}\t{oracle}\t{}\t{}", self.ontological.get(o), self.sampled.get(o));
        }
        let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:e}"));
        out.push_str("\nmetric\tvalue\n");
        let _ = writeln!(out, "max_abs_diff_ontological_oracle\t{}", opt(self.max_abs_diff));
        let _ = writeln!(out, "tv_ontological_oracle\t{}", opt(self.tv_ontological_oracle));
        let _ = writeln!(out, "tv_sampled_oracle\t{}", opt(self.tv_sampled_oracle));
        let _ = writeln!(out, "tv_sampled_ontological\t{:e}", self.tv_sampled_ontological);
        out
    }
}

/// Runs the enumerator and the sampler, and the oracle when `with_oracle` holds.
pub fn verify_circuit(
    m: &OntologicalModel,
    c: &Circuit,
    shots: u64,
    seed: u64,
    support_cap: usize,
    with_oracle: bool,
) -> Result<VerifyOutcome, Failure> {
    let s = schedule(c);
    let oracle = if with_oracle { Some(exact_quantum_distribution(c, DEFAULT_AMPLITUDE_CAP)?) } else { None };
    let ontological = exact_ontological_distribution(m, c, &s, support_cap)?;
    let counts = SamplingPlan::new(m, c, &s)?.sample_many(seed, shots)?;
    let sampled = normalize(&counts).map_err(SimError::from)?;
    let tv = |p: &Distribution, q: &Distribution| tv_distance(p, q).map_err(|e| Failure::from(SimError::from(e)));
    let (max_abs_diff, tv_ontological_oracle, tv_sampled_oracle) = match &oracle {
        Some(o) => (Some(max_abs_difference(&ontological, o)), Some(tv(&ontological, o)?), Some(tv(&sampled, o)?)),
        None => (None, None, None),
    };
    Ok(VerifyOutcome {
        tv_sampled_ontological: tv(&sampled, &ontological)?,
        max_abs_diff,
        tv_ontological_oracle,
        tv_sampled_oracle,
        oracle,
        ontological,
        sampled,
    })
}

fn oracle_knows(c: &Circuit) -> bool {
    c.gates.iter().all(|g| ORACLE_GATES.contains(&g.name.as_str()))
}

pub fn cmd_verify(a: &VerifyArgs, verbose: u8) -> Result<Report, Failure> {
    if a.backend == Backend::Statevector {
        return Err(Failure::new(
            EXIT_USAGE,
            "verify compares an ontological backend (wigner or generic) with the oracle",
        ));
    }
    let c = load_circuit(&a.circuit)?;
    if verbose > 0 {
        eprintln!("{}", describe(&c));
    }
    let m = model_for(a.backend, &c, a.model.as_deref())?;
    let with_oracle = !a.no_oracle && (a.backend == Backend::Wigner || oracle_knows(&c));
    if !with_oracle {
        eprintln!("no quantum oracle for this run; comparing sampler with enumerator only");
    }
    let v = verify_circuit(&m, &c, a.shots, a.seed, a.support_cap, with_oracle)?;
    let pass = v.passes(a.tv_threshold);
    let verdict = if pass { "PASS" } else { "FAIL" };
    match (v.max_abs_diff, v.tv_sampled_oracle) {
        (Some(diff), Some(tv)) => eprintln!(
            "verify {verdict}: max |ontological - oracle| = {diff:e} (limit {EXACT_TOL:e}), TV(sampled, oracle) = {tv:e} (limit {})",
            a.tv_threshold
        ),
        _ => eprintln!(
            "verify {verdict}: TV(sampled, ontological) = {:e} (limit {})",
            v.tv_sampled_ontological, a.tv_threshold
        ),
    }
    Ok(Report { data: v.to_tsv(), code: if pass { EXIT_OK } else { EXIT_MISMATCH } })
}

pub fn cmd_check_model(a: &CheckModelArgs) -> Result<Report, Failure> {
    let text = read_file(&a.model)?;
    match load_model(&text) {
        Ok(m) => {
            let mut out = String::from("status\tvalid\n");
            let _ = writeln!(
                out,
                "d\t{}\nn_wires\t{}\nlocal_size\t{}\npair_size\t{}",
                m.d, m.n_wires, m.local_size, m.pair_size
            );
            let _ = writeln!(out, "preparations\t{}", m.preparations.len());
            let _ = writeln!(out, "gates1\t{}", m.gates1.keys().cloned().collect::<Vec<_>>().join(","));
            let _ = writeln!(out, "gates2\t{}", m.gates2.keys().cloned().collect::<Vec<_>>().join(","));
            Ok(Report::ok(out))
        }
        Err(ModelFileError::Invalid(diags)) => {
            let mut out = String::from("status\tinvalid\n");
            for d in &diags {
                let _ = writeln!(out, "{}\t{}", d.location, d.message);
            }
            eprintln!("{}: {} problem(s)", a.model.display(), diags.len());
            Ok(Report { data: out, code: EXIT_MODEL_INVALID })
        }
        Err(e) => Err(Failure::new(EXIT_USAGE, format!("{}: {e}", a.model.display()))),
    }
}

/// One line of the negativity report.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementReport {
    pub kind: &'static str,
    pub element: String,
    pub negativity: Option<f64>,
    pub deterministic: Option<bool>,
}

fn basis_projector(d: u32, x: u32) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(d as usize, d as usize);
    m[(x as usize, x as usize)] = Complex64::new(1.0, 0.0);
    m
}

/// Sum of the negative parts of `ξ(x | u) = Tr(|x⟩⟨x| A_u)` over outcomes and points.
fn measurement_negativity(d: u32) -> Result<f64, OracleError> {
    let mut total = 0.0;
    for x in 0..d {
        let w = wigner_function(&basis_projector(d, x), d, 1)?;
        total += w.iter().map(|&v| (-(d as f64) * v).max(0.0)).sum::<f64>();
    }
    Ok(total)
}

/// Per-element phase-space analysis: negativity of preparations and
/// measurements, existence of a deterministic action for gates.
pub fn negativity_report(c: &Circuit) -> Result<Vec<ElementReport>, Failure> {
    let d = c.dim;
    if !is_odd_prime(d) {
        return Err(Failure::new(
            EXIT_REFUSED,
            format!("the phase-space representation needs an odd prime dimension, got {d}"),
        ));
    }
    let mut rows = Vec::new();
    let mut prep_cache: BTreeMap<u32, f64> = BTreeMap::new();
    for p in &c.preps {
        let n = match prep_cache.get(&p.label) {
            Some(&n) => n,
            None => {
                let n = negativity(&wigner_function(&basis_projector(d, p.label), d, 1)?)?;
                prep_cache.insert(p.label, n);
                n
            }
        };
        rows.push(ElementReport {
            kind: "prep",
            element: format!("wire {} basis {}", p.wire, p.label),
            negativity: Some(n),
            deterministic: None,
        });
    }
    let mut gate_cache: BTreeMap<String, bool> = BTreeMap::new();
    for (i, g) in c.gates.iter().enumerate() {
        let key = gate_key(&g.name, g.param);
        let det = match gate_cache.get(&key) {
            Some(&b) => b,
            None => {
                let b = match gate_matrix(&g.name, g.param, d) {
                    Ok(u) if u.nrows() == (d as usize).pow(g.arity() as u32) => match derive_symplectic(&u, d) {
                        Ok(_) => true,
                        Err(OracleError::NotClifford(_)) => false,
                        Err(e) => return Err(e.into()),
                    },
                    Ok(_) | Err(OracleError::UnknownGate(_)) => false,
                    Err(e) => return Err(e.into()),
                };
                gate_cache.insert(key, b);
                b
            }
        };
        rows.push(ElementReport {
            kind: "gate",
            element: format!("{i}: {g}"),
            negativity: None,
            deterministic: Some(det),
        });
    }
    if !c.measured.is_empty() {
        let n = measurement_negativity(d)?;
        for &w in &c.measured {
            rows.push(ElementReport {
                kind: "measure",
                element: format!("wire {w}"),
                negativity: Some(n),
                deterministic: None,
            });
        }
    }
    Ok(rows)
}

/// Whether every element has a nonnegative, deterministic phase-space representation.
pub fn ncom_available(rows: &[ElementReport]) -> bool {
    rows.iter().all(|r| r.negativity.is_none_or(|n| n <= NEGATIVITY_TOL) && r.deterministic != Some(false))
}

pub fn cmd_negativity(a: &NegativityArgs) -> Result<Report, Failure> {
    let c = load_circuit(&a.circuit)?;
    let rows = negativity_report(&c)?;
    let mut out = String::from("kind\telement\tnegativity\tdeterministic_action\n");
    for r in &rows {
        let neg = r.negativity.map_or("-".to_string(), |n| format!("{n:e}"));
        let det = match r.deterministic {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        let _ = writeln!(out, "{}\t{}\t{neg}\t{det}", r.kind, r.element);
    }
    let summary = if ncom_available(&rows) { "NCOM available" } else { "no NCOM in this representation" };
    let _ = writeln!(out, "summary\t{summary}");
    Ok(Report::ok(out))
}

/// One row of the scaling benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub gates: usize,
    pub depth: usize,
    pub shots: u64,
    pub build_s: f64,
    pub sample_s: f64,
    pub tracked_coordinates: usize,
    pub touched_pairs: usize,
}

impl BenchRow {
    pub fn ns_per_gate(&self) -> f64 {
        let work = (self.gates as f64 * self.shots as f64).max(1.0);
        self.sample_s * 1e9 / work
    }
}

pub const BENCH_HEADER: &str =
    "n\tgates\tdepth\tshots\tbuild_s\tsample_s\tns_per_gate\ttracked_coordinates\ttouched_pairs\tpair_bound";

fn model_gate_choices(m: &OntologicalModel) -> Vec<(GateApp, usize)> {
    let app = |key: &str, wires: &[usize]| match key.split_once(':').and_then(|(n, a)| Some((n, a.parse().ok()?))) {
        Some((name, a)) => GateApp::with_param(name, wires, a),
        None => GateApp::new(key, wires),
    };
    m.gates1.keys().map(|k| (app(k, &[0]), 1)).chain(m.gates2.keys().map(|k| (app(k, &[0, 1]), 2))).collect()
}

/// Builds, samples and measures one random circuit of `n` wires.
pub fn bench_one(
    backend: Backend,
    generic: Option<&OntologicalModel>,
    dim: u32,
    n: usize,
    depth: usize,
    shots: u64,
    seed: u64,
) -> Result<BenchRow, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(shot_seed(seed, n as u64));
    let start = Instant::now();
    let (c, model) = match (backend, generic) {
        (Backend::Generic, Some(m)) => {
            let spec = RandomCircuitSpec { dim: m.d, n_wires: n, depth, measure: MeasureChoice::All };
            let c = random_circuit_over(&mut rng, spec, &model_gate_choices(m));
            let mut sized = m.clone();
            sized.n_wires = n;
            (c, sized)
        }
        (Backend::Wigner, _) => {
            let spec = RandomCircuitSpec { dim, n_wires: n, depth, measure: MeasureChoice::All };
            let c = random_clifford_circuit(&mut rng, spec);
            let m = wigner_model(&c)?;
            (c, m)
        }
        _ => return Err(Failure::new(EXIT_USAGE, "bench runs the wigner backend, or generic with --model")),
    };
    let s = schedule(&c);
    let plan = SamplingPlan::new(&model, &c, &s)?;
    let build_s = start.elapsed().as_secs_f64();
    let start = Instant::now();
    plan.sample_many(seed, shots)?;
    let sample_s = start.elapsed().as_secs_f64();
    let (_, state) = plan.run_traced(&mut shot_rng(seed, 0));
    Ok(BenchRow {
        n,
        gates: c.gates.len(),
        depth: s.depth(),
        shots,
        build_s,
        sample_s,
        tracked_coordinates: state.tracked_coordinates(),
        touched_pairs: plan.touched_pairs().len(),
    })
}

pub fn cmd_bench(a: &BenchArgs, verbose: u8) -> Result<Report, Failure> {
    let generic = match a.backend {
        Backend::Generic => Some(load_model_file(
            a.model.as_deref().ok_or_else(|| Failure::new(EXIT_USAGE, "the generic backend needs --model"))?,
        )?),
        _ => None,
    };
    let mut out = format!("{BENCH_HEADER}\n");
    for &n in &a.sizes {
        if n == 0 {
            return Err(Failure::new(EXIT_USAGE, "bench sizes must be at least 1"));
        }
        let row = bench_one(a.backend, generic.as_ref(), a.dim, n, a.depth.unwrap_or(n), a.shots, a.seed)?;
        if verbose > 0 {
            eprintln!("n={n}: {} gates in {:.3} s", row.gates, row.build_s + row.sample_s);
        }
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.1}\t{}\t{}\t{}",
            row.n,
            row.gates,
            row.depth,
            row.shots,
            row.build_s,
            row.sample_s,
            row.ns_per_gate(),
            row.tracked_coordinates,
            row.touched_pairs,
            n * (n + 1) / 2
        );
    }
    Ok(Report::ok(out))
}
