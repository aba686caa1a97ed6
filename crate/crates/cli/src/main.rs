//! `dcomp`: command-line front end for the recursive-state toolkit.
//!
//! Every subcommand reads/writes the JSON interchange formats defined by
//! `dcomp-core` (matrices as `{"rows","cols","data":[[re,im],…]}`, state
//! parameters as `{"family","a","c","d","ladder","j_variant"}`), so output
//! of one command can feed another. Exit codes: 0 success, 1 computation
//! failure (singular system, failed verification, …), 2 usage or parse
//! error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use dcomp_core::entanglement::{
    assemble_density, build_p, build_p_legacy16, concurrence_pure, eof_from_concurrence,
    mixed_concurrence, Ensemble, MixedRoute,
};
use dcomp_core::identities::{verify_family_suite, IdentityReport, SuiteConfig};
use dcomp_core::linalg::ComplexMatrix;
use dcomp_core::multipliers::{build_i, build_j, Family, JVariant};
use dcomp_core::solver::{bench_solve, structured_solve, SolveForm, BENCH_CSV_HEADER};
use dcomp_core::states::{bracket_norm, build_matrix, normalize, vectorize, StateParams};
use dcomp_core::Complex64;

#[derive(Debug)]
enum CliError {
    /// Bad flags or unparseable input files → exit 2.
    Usage(String),
    /// The computation itself failed or a verification gate tripped → exit 1.
    Compute(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Compute(msg) => f.write_str(msg),
        }
    }
}

fn compute(err: impl std::fmt::Display) -> CliError {
    CliError::Compute(err.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Json,
    Pretty,
}

#[derive(Parser)]
#[command(
    name = "dcomp",
    version,
    about = "Recursive block-structured bipartite states: build, verify, measure, solve, benchmark"
)]
struct Cli {
    /// Output format; defaults to json (verify defaults to a pretty table).
    #[arg(long, global = true, value_enum)]
    output: Option<OutputMode>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a multiplier matrix (J or I) at the given level.
    Multiplier {
        /// Family: J or I.
        #[arg(long, value_parser = parse_family)]
        kind: Family,
        /// Level m: the multiplier has size 2^m.
        #[arg(long)]
        level: usize,
        /// Seed the J tower with the fixed explicit 4x4 instead of doubling
        /// from J₂ (J only).
        #[arg(long)]
        explicit_j4: bool,
    },
    /// Build, inspect, or normalize a parameterized state.
    State {
        #[command(subcommand)]
        action: StateAction,
    },
    /// Run the identity suite over seeded random draws.
    Verify {
        /// Restrict to one family (default: both).
        #[arg(long, value_parser = parse_family)]
        family: Option<Family>,
        /// Largest ladder length to check.
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        /// Random draws per (family, k) cell.
        #[arg(long, default_value_t = 100)]
        draws: usize,
        /// Seed for the draw stream.
        #[arg(long)]
        seed: u64,
        /// Restrict the J tower to one seed variant (default: both).
        #[arg(long = "j-variant", value_parser = parse_variant)]
        j_variant: Option<JVariant>,
    },
    /// Concurrence of the (auto-normalized) state described by a params file.
    Concurrence {
        /// StateParams JSON file.
        #[arg(long)]
        params: PathBuf,
    },
    /// Entanglement of formation of the (auto-normalized) state.
    Eof {
        /// StateParams JSON file.
        #[arg(long)]
        params: PathBuf,
    },
    /// Concurrence and EoF of a mixed state given as a pure-state ensemble.
    Mixed {
        /// Ensemble JSON file: {"k":1,"members":[{"p":0.5,"params":{...}},…]}.
        #[arg(long)]
        ensemble: PathBuf,
        /// Spectrum route: hermitian or direct.
        #[arg(long, default_value = "hermitian", value_parser = parse_route)]
        route: MixedRoute,
        /// Allow k > 2 (the density matrix has size 4^{k+1}).
        #[arg(long)]
        allow_large: bool,
    },
    /// Emit the pairing matrix p used by the concurrence quadratic form.
    Pmatrix {
        /// Ladder length k; p has size 2^{2(k+1)}.
        #[arg(long, required_unless_present = "legacy", conflicts_with = "legacy")]
        k: Option<usize>,
        /// Emit the fixed 16x16 pairing of the four-parameter family instead.
        #[arg(long)]
        legacy: bool,
    },
    /// Solve a structured system in O(N²).
    Solve {
        /// StateParams JSON file describing A.
        #[arg(long)]
        params: PathBuf,
        /// Right-hand side: JSON array of [re,im] pairs of length N.
        #[arg(long)]
        y: PathBuf,
        /// Which system to solve: A, BA, At, or AtBt.
        #[arg(long, value_parser = parse_form)]
        form: SolveForm,
    },
    /// Time the structured solve against dense LU.
    Bench {
        /// Comma-separated ladder lengths, e.g. 5,7,9 (N = 2^{k+1}).
        #[arg(long, required = true, value_delimiter = ',')]
        klist: Vec<usize>,
        /// Timed repetitions per solver (the median is reported).
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Seed for the benchmark draws.
        #[arg(long)]
        seed: u64,
        /// Write the measurements as CSV to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum StateAction {
    /// Emit the built coefficient matrix.
    Build {
        /// StateParams JSON file.
        #[arg(long)]
        params: PathBuf,
    },
    /// Emit the bracket [A] and norm ‖A‖ scalar forms.
    Bracket {
        /// StateParams JSON file.
        #[arg(long)]
        params: PathBuf,
    },
    /// Emit rescaled parameters describing the unit-norm state.
    Normalize {
        /// StateParams JSON file.
        #[arg(long)]
        params: PathBuf,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "J" => Ok(Family::J),
        "I" => Ok(Family::I),
        other => Err(format!("unknown family {other:?}; expected J or I")),
    }
}

fn parse_variant(s: &str) -> Result<JVariant, String> {
    match s {
        "recursive" => Ok(JVariant::Recursive),
        "explicit-j4" => Ok(JVariant::ExplicitJ4),
        other => Err(format!(
            "unknown variant {other:?}; expected recursive or explicit-j4"
        )),
    }
}

fn parse_route(s: &str) -> Result<MixedRoute, String> {
    match s {
        "hermitian" => Ok(MixedRoute::Hermitian),
        "direct" => Ok(MixedRoute::Direct),
        other => Err(format!(
            "unknown route {other:?}; expected hermitian or direct"
        )),
    }
}

fn parse_form(s: &str) -> Result<SolveForm, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Compute(_) => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mode = |default| cli.output.unwrap_or(default);
    match cli.command {
        Command::Multiplier {
            kind,
            level,
            explicit_j4,
        } => cmd_multiplier(kind, level, explicit_j4, mode(OutputMode::Json)),
        Command::State { action } => cmd_state(action, mode(OutputMode::Json)),
        Command::Verify {
            family,
            kmax,
            draws,
            seed,
            j_variant,
        } => cmd_verify(
            family,
            kmax,
            draws,
            seed,
            j_variant,
            mode(OutputMode::Pretty),
        ),
        Command::Concurrence { params } => cmd_concurrence(&params, mode(OutputMode::Json)),
        Command::Eof { params } => cmd_eof(&params, mode(OutputMode::Json)),
        Command::Mixed {
            ensemble,
            route,
            allow_large,
        } => cmd_mixed(&ensemble, route, allow_large, mode(OutputMode::Json)),
        Command::Pmatrix { k, legacy } => cmd_pmatrix(k, legacy, mode(OutputMode::Json)),
        Command::Solve { params, y, form } => cmd_solve(&params, &y, form, mode(OutputMode::Json)),
        Command::Bench {
            klist,
            reps,
            seed,
            out,
        } => cmd_bench(&klist, reps, seed, out.as_deref(), mode(OutputMode::Json)),
    }
}

// ---------------------------------------------------------------- plumbing

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|err| CliError::Usage(format!("cannot read {}: {err}", path.display())))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_file(path)?)
        .map_err(|err| CliError::Usage(format!("cannot parse {}: {err}", path.display())))
}

fn load_params(path: &Path) -> Result<StateParams, CliError> {
    load_json(path)
}

fn emit_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("output types serialize without maps or errors")
    );
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:+.12e}{:+.12e}i", z.re, z.im)
}

fn print_matrix(m: &ComplexMatrix, mode: OutputMode) {
    match mode {
        OutputMode::Json => emit_json(m),
        OutputMode::Pretty => {
            let integral = m
                .entries()
                .iter()
                .all(|z| z.im == 0.0 && z.re.fract() == 0.0 && z.re.abs() < 1e6);
            for i in 0..m.rows() {
                let mut line = String::new();
                for j in 0..m.cols() {
                    if integral {
                        let _ = write!(line, "{:>3}", m[(i, j)].re as i64);
                    } else {
                        let _ = write!(line, " {}", fmt_complex(m[(i, j)]));
                    }
                }
                println!("{}", line.trim_start_matches(' '));
            }
        }
    }
}

// ---------------------------------------------------------------- commands

fn cmd_multiplier(
    kind: Family,
    level: usize,
    explicit_j4: bool,
    mode: OutputMode,
) -> Result<(), CliError> {
    let multiplier = match kind {
        Family::J => {
            let variant = if explicit_j4 {
                JVariant::ExplicitJ4
            } else {
                JVariant::Recursive
            };
            build_j(level, variant).map_err(compute)?
        }
        Family::I => {
            if explicit_j4 {
                return Err(CliError::Usage(
                    "--explicit-j4 only applies to --kind J".into(),
                ));
            }
            build_i(level).map_err(compute)?
        }
    };
    print_matrix(&multiplier.matrix(), mode);
    Ok(())
}

#[derive(Serialize)]
struct BracketOut {
    bracket: [f64; 2],
    norm_sq: f64,
}

fn cmd_state(action: StateAction, mode: OutputMode) -> Result<(), CliError> {
    match action {
        StateAction::Build { params } => {
            let params = load_params(&params)?;
            print_matrix(&build_matrix(&params), mode);
        }
        StateAction::Bracket { params } => {
            let params = load_params(&params)?;
            let bn = bracket_norm(&params);
            match mode {
                OutputMode::Json => emit_json(&BracketOut {
                    bracket: [bn.bracket.re, bn.bracket.im],
                    norm_sq: bn.norm_sq,
                }),
                OutputMode::Pretty => {
                    println!("bracket = {}", fmt_complex(bn.bracket));
                    println!("norm_sq = {:.12e}", bn.norm_sq);
                }
            }
        }
        StateAction::Normalize { params } => {
            let params = load_params(&params)?;
            let normalized = normalize(&params).map_err(compute)?;
            match mode {
                OutputMode::Json => emit_json(&normalized),
                OutputMode::Pretty => println!(
                    "{}",
                    serde_json::to_string_pretty(&normalized)
                        .expect("params serialize without errors")
                ),
            }
        }
    }
    Ok(())
}

/// The suite verdict behind `verify`'s exit code: every check without a seed
/// variant must pass its gate, and at least one J seed variant (when any J
/// rows are present) must clear every gating check. Running both variants
/// therefore reports the arbitration between them without failing the run,
/// as long as one of the two towers holds up.
fn arbitration_passes(reports: &[IdentityReport]) -> bool {
    let variantless_ok = reports
        .iter()
        .filter(|r| r.j_variant.is_none())
        .all(|r| !r.gating || r.pass);
    let mut variants: Vec<JVariant> = Vec::new();
    for report in reports {
        if let Some(variant) = report.j_variant {
            if !variants.contains(&variant) {
                variants.push(variant);
            }
        }
    }
    let j_ok = variants.is_empty()
        || variants.iter().any(|variant| {
            reports
                .iter()
                .filter(|r| r.j_variant == Some(*variant))
                .all(|r| !r.gating || r.pass)
        });
    variantless_ok && j_ok
}

fn cmd_verify(
    family: Option<Family>,
    kmax: usize,
    draws: usize,
    seed: u64,
    j_variant: Option<JVariant>,
    mode: OutputMode,
) -> Result<(), CliError> {
    let mut config = SuiteConfig::new(kmax, draws, seed);
    if let Some(family) = family {
        config.families = vec![family];
    }
    if let Some(variant) = j_variant {
        config.variants = vec![variant];
    }
    let reports = verify_family_suite(&config).map_err(compute)?;

    match mode {
        OutputMode::Json => emit_json(&reports),
        OutputMode::Pretty => print_verify_table(&reports),
    }

    if arbitration_passes(&reports) {
        Ok(())
    } else {
        let failed = reports.iter().filter(|r| r.gating && !r.pass).count();
        Err(CliError::Compute(format!(
            "{failed} gating check(s) failed with no fully passing configuration"
        )))
    }
}

fn print_verify_table(reports: &[IdentityReport]) {
    println!(
        "{:<26} {:<6} {:>2}  {:<12} {:>12} {:>10}  {:<6} result",
        "name", "family", "k", "variant", "residual", "tolerance", "gating"
    );
    for r in reports {
        let family = r.family.map_or("-".to_string(), |f| f.to_string());
        let variant = r.j_variant.map_or("-".to_string(), |v| v.to_string());
        println!(
            "{:<26} {:<6} {:>2}  {:<12} {:>12.3e} {:>10.1e}  {:<6} {}",
            r.name,
            family,
            r.k,
            variant,
            r.residual,
            r.tolerance,
            if r.gating { "yes" } else { "no" },
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    let gating_failed = reports.iter().filter(|r| r.gating && !r.pass).count();
    println!(
        "{} checks: {} passed, {} failed ({} gating)",
        reports.len(),
        passed,
        reports.len() - passed,
        gating_failed
    );
    let mut variants: Vec<JVariant> = Vec::new();
    for r in reports {
        if let Some(v) = r.j_variant {
            if !variants.contains(&v) {
                variants.push(v);
            }
        }
    }
    for variant in variants {
        let failed = reports
            .iter()
            .filter(|r| r.j_variant == Some(variant) && r.gating && !r.pass)
            .count();
        if failed == 0 {
            println!("J seed {variant}: all gating checks pass");
        } else {
            println!("J seed {variant}: {failed} gating check(s) fail");
        }
    }
}

#[derive(Serialize)]
struct ConcurrenceOut {
    d: f64,
}

fn cmd_concurrence(path: &Path, mode: OutputMode) -> Result<(), CliError> {
    let params = load_params(path)?;
    let normalized = normalize(&params).map_err(compute)?;
    let d = concurrence_pure(&normalized);
    match mode {
        OutputMode::Json => emit_json(&ConcurrenceOut { d }),
        OutputMode::Pretty => println!("d = {d:.12e}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct EofOut {
    d: f64,
    #[serde(rename = "E")]
    e: f64,
}

fn cmd_eof(path: &Path, mode: OutputMode) -> Result<(), CliError> {
    let params = load_params(path)?;
    let normalized = normalize(&params).map_err(compute)?;
    let d = concurrence_pure(&normalized);
    let e = eof_from_concurrence(d.min(1.0), 1 << normalized.k()).map_err(compute)?;
    match mode {
        OutputMode::Json => emit_json(&EofOut { d, e }),
        OutputMode::Pretty => {
            println!("d = {d:.12e}");
            println!("E = {e:.12e}");
        }
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleFile {
    k: usize,
    members: Vec<MemberSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MemberSpec {
    p: f64,
    params: StateParams,
}

fn cmd_mixed(
    path: &Path,
    route: MixedRoute,
    allow_large: bool,
    mode: OutputMode,
) -> Result<(), CliError> {
    let file: EnsembleFile = load_json(path)?;
    if file.k > 2 && !allow_large {
        return Err(CliError::Usage(format!(
            "k = {} builds a {}x{} density matrix; pass --allow-large to proceed",
            file.k,
            1usize << (2 * file.k + 2),
            1usize << (2 * file.k + 2),
        )));
    }
    let mut members = Vec::with_capacity(file.members.len());
    for (index, member) in file.members.iter().enumerate() {
        if member.params.k() != file.k {
            return Err(CliError::Compute(format!(
                "member {index} has ladder length {} but the ensemble declares k = {}",
                member.params.k(),
                file.k
            )));
        }
        let normalized = normalize(&member.params).map_err(compute)?;
        let state = vectorize(&build_matrix(&normalized)).map_err(compute)?;
        members.push((member.p, state));
    }
    let ensemble = Ensemble::new(members).map_err(compute)?;
    let rho = assemble_density(&ensemble).map_err(compute)?;
    let p = build_p(file.k).map_err(compute)?;
    let result = mixed_concurrence(&rho, &p, route).map_err(compute)?;
    match mode {
        OutputMode::Json => emit_json(&result),
        OutputMode::Pretty => {
            println!("d = {:.12e}", result.d);
            println!("E = {:.12e}", result.e);
            let omegas: Vec<String> = result.omegas.iter().map(|w| format!("{w:.6e}")).collect();
            println!("omegas = [{}]", omegas.join(", "));
        }
    }
    Ok(())
}

fn cmd_pmatrix(k: Option<usize>, legacy: bool, mode: OutputMode) -> Result<(), CliError> {
    let p = if legacy {
        build_p_legacy16()
    } else {
        let k = k.expect("clap requires --k unless --legacy is present");
        build_p(k).map_err(compute)?
    };
    print_matrix(&p, mode);
    Ok(())
}

#[derive(Serialize)]
struct SolveOut {
    x: Vec<[f64; 2]>,
}

fn cmd_solve(
    params_path: &Path,
    y_path: &Path,
    form: SolveForm,
    mode: OutputMode,
) -> Result<(), CliError> {
    let params = load_params(params_path)?;
    let y_raw: Vec<[f64; 2]> = load_json(y_path)?;
    let y: Vec<Complex64> = y_raw
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    let x = structured_solve(&params, &y, form).map_err(compute)?;
    match mode {
        OutputMode::Json => emit_json(&SolveOut {
            x: x.iter().map(|z| [z.re, z.im]).collect(),
        }),
        OutputMode::Pretty => {
            for z in &x {
                println!("{}", fmt_complex(*z));
            }
        }
    }
    Ok(())
}

fn cmd_bench(
    klist: &[usize],
    reps: usize,
    seed: u64,
    out: Option<&Path>,
    mode: OutputMode,
) -> Result<(), CliError> {
    let records = bench_solve(klist, reps, seed).map_err(compute)?;
    if let Some(path) = out {
        let mut csv = String::from(BENCH_CSV_HEADER);
        csv.push('\n');
        for record in &records {
            csv.push_str(&record.csv_row());
            csv.push('\n');
        }
        std::fs::write(path, csv)
            .map_err(|err| CliError::Compute(format!("cannot write {}: {err}", path.display())))?;
    }
    match mode {
        OutputMode::Json => emit_json(&records),
        OutputMode::Pretty => {
            println!(
                "{:>6} {:>14} {:>14} {:>8} {:>14} {:>14}",
                "N", "structured_s", "lu_s", "ratio", "res_structured", "res_lu"
            );
            for r in &records {
                println!(
                    "{:>6} {:>14.6e} {:>14.6e} {:>8.4} {:>14.3e} {:>14.3e}",
                    r.n,
                    r.structured_seconds,
                    r.lu_seconds,
                    r.structured_seconds / r.lu_seconds,
                    r.residual_structured,
                    r.residual_lu
                );
            }
            if let Some(path) = out {
                println!("csv written to {}", path.display());
            }
        }
    }
    Ok(())
}
