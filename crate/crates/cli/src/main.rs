//! `qthresh`: command-line front end. Every command prints one JSON report
//! on stdout (or CSV for `table1 --format csv`).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qudit_thresholds::clifford::{enumerate_clifford, robust_eigenvector_certificate};
use qudit_thresholds::data::{self, load_matrix_file, matrix_to_json};
use qudit_thresholds::gatesearch::{
    eigen_bound, gate_value, optimize_gate, robustness_from_value, table_one, GateSearchConfig,
    Parametrization, TableRow,
};
use qudit_thresholds::linalg::{hermitian_eig, C64};
use qudit_thresholds::wigner::{
    negativity, phase_point_operator, phase_point_spectrum_sample, phase_point_spectrum_scan,
    preset_state, robust_state_family, robustness_from_negativity, PhasePointIndex,
};
use qudit_thresholds::witness::{
    certify, derive_witness, load_witness_file, orbit, orbit_size, save_witness_file,
    CertifyOptions, Witness,
};
use qudit_thresholds::{CodeId, Error, Exec};

#[derive(Parser)]
#[command(
    name = "qthresh",
    version,
    about = "Depolarizing-noise thresholds for qudit magic states and gates"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "QTHRESH_THREADS")]
    threads: Option<usize>,
    /// Saturation tolerance for facet certification.
    #[arg(long, global = true, default_value_t = qudit_thresholds::witness::DEFAULT_TOL_SAT)]
    tol_sat: f64,
    /// Relative singular-value cutoff for ranks.
    #[arg(long, global = true, default_value_t = qudit_thresholds::linalg::DEFAULT_RANK_TOL)]
    tol_rank: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wigner negativity and state robustness.
    Negativity(NegativityArgs),
    /// The family of pure states with negativity 1/d.
    RobustStates {
        #[arg(long)]
        d: u32,
    },
    /// A phase-point operator and its spectrum, or a scan over many of them.
    PhasePoint(PhasePointArgs),
    #[command(subcommand)]
    Clifford(CliffordCommand),
    #[command(subcommand)]
    Witness(WitnessCommand),
    #[command(subcommand)]
    Gate(GateCommand),
    /// Most robust state and reference gate for each dimension.
    Table1 {
        /// A dimension (2, 3, 5, 7) or `all`.
        #[arg(long, default_value = "all")]
        d: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
struct NegativityArgs {
    #[arg(long)]
    d: Option<u32>,
    /// Named state: nu1, T (qubits), maxmixed.
    #[arg(long, conflicts_with = "state")]
    preset: Option<String>,
    /// JSON density matrix file.
    #[arg(long)]
    state: Option<PathBuf>,
}

#[derive(Args)]
struct PhasePointArgs {
    #[arg(long)]
    d: u32,
    /// Comma-separated point, e.g. 2,0,0,0 (default: the (d+1)/2 point).
    #[arg(long, conflicts_with = "scan")]
    u: Option<String>,
    /// Minimum eigenvalue over all operators (or `--samples` random ones).
    #[arg(long)]
    scan: bool,
    #[arg(long, requires = "scan")]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum CliffordCommand {
    /// All single-qudit Cliffords modulo phase.
    Enumerate {
        #[arg(long)]
        d: u32,
        /// Write the elements here instead of into the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A Clifford with (|0> - |1>)/sqrt(2) as eigenvector.
    Certificate {
        #[arg(long)]
        d: u32,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// Witness from a code and a phase-point.
    Derive {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        code: CodeId,
        /// Comma-separated phase-point, `d + 1` entries.
        #[arg(long)]
        u: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also check it against every Clifford vertex.
        #[arg(long)]
        certify: bool,
    },
    /// Saturation count and rank against all Clifford vertices.
    Certify { file: PathBuf },
    /// Distinct images under local Clifford conjugation.
    Orbit {
        file: PathBuf,
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Subcommand)]
enum GateCommand {
    /// Value of a gate against a facet.
    Eval(GateArgs),
    /// Local search for a gate violating the facet most.
    Search {
        #[command(flatten)]
        gate: FacetArg,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = Parametrization::Both)]
        mode: Parametrization,
    },
}

#[derive(Args)]
struct FacetArg {
    #[arg(long)]
    d: u32,
    /// Witness file (tuple format or JSON matrix); defaults to the reference facet.
    #[arg(long)]
    facet: Option<PathBuf>,
}

#[derive(Args)]
struct GateArgs {
    #[command(flatten)]
    facet: FacetArg,
    /// JSON unitary; defaults to the reference gate.
    #[arg(long)]
    unitary: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

struct Ctx {
    opts: CertifyOptions,
}

struct Output {
    parameters: Value,
    results: Value,
    seed: Option<u64>,
}

type Res<T> = std::result::Result<T, Error>;

fn c64(z: C64) -> Value {
    json!([z.re, z.im])
}

fn parse_u(d: u32, s: &str) -> Res<PhasePointIndex> {
    PhasePointIndex::parse(d, s)
}

fn load_facet(path: &Path) -> Res<Witness> {
    if path.extension().is_some_and(|e| e == "json") {
        let m = load_matrix_file(path)?;
        let d = (m.rows() as f64).sqrt().round() as u32;
        Witness::from_matrix(d, m)
    } else {
        load_witness_file(path)
    }
}

fn facet_for(arg: &FacetArg) -> Res<Witness> {
    let w = match &arg.facet {
        Some(p) => load_facet(p)?,
        None => data::designated_facet(arg.d)?,
    };
    if w.d != arg.d {
        return Err(Error::Shape(format!(
            "facet has d={} but --d {}",
            w.d, arg.d
        )));
    }
    Ok(w)
}

fn facet_report(w: &Witness, ctx: &Ctx) -> Res<Value> {
    let group = enumerate_clifford(w.d, ctx.opts.exec)?;
    let vertices = group.choi_vertices(ctx.opts.exec)?;
    let r = certify(w, &vertices, &ctx.opts)?;
    Ok(json!({
        "saturating": r.saturating_count,
        "rank": r.rank,
        "dimension": (w.d * w.d - 1).pow(2),
        "is_facet": r.is_facet,
        "classification": r.classification,
        "min_vertex_value": r.min_vertex_value,
    }))
}

fn run(cmd: &Command, ctx: &Ctx) -> Res<Output> {
    let exec = ctx.opts.exec;
    let out = |parameters, results| Output {
        parameters,
        results,
        seed: None,
    };
    Ok(match cmd {
        Command::Negativity(a) => {
            let rho = match (&a.preset, &a.state) {
                (Some(name), None) => {
                    let d =
                        a.d.ok_or_else(|| Error::Contract("--preset needs --d".into()))?;
                    preset_state(name, d)?
                }
                (None, Some(path)) => load_matrix_file(path)?,
                _ => {
                    return Err(Error::Contract(
                        "give exactly one of --preset or --state".into(),
                    ))
                }
            };
            let d = rho.rows() as u32;
            if a.d.is_some_and(|x| x != d) {
                return Err(Error::Shape(format!(
                    "state is {d}-dimensional but --d {}",
                    a.d.unwrap()
                )));
            }
            let r = negativity(&rho)?;
            out(
                json!({"d": d, "preset": a.preset, "state": a.state}),
                json!({
                    "negativity": r.negativity,
                    "min_value": r.min_value,
                    "argmin_u": r.argmin.to_string(),
                    "p_star": robustness_from_negativity(r.negativity, d),
                }),
            )
        }
        Command::RobustStates { d } => {
            let family = robust_state_family(*d)?;
            let states: Vec<Value> = family
                .iter()
                .map(|s| {
                    json!({
                        "eigenvector": s.eigenvector,
                        "displacement": s.displacement.to_string(),
                        "vector": s.vector.iter().copied().map(c64).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let neg = 1.0 / *d as f64;
            out(
                json!({"d": d}),
                json!({
                    "count": states.len(),
                    "negativity": neg,
                    "p_star": robustness_from_negativity(neg, *d),
                    "states": states,
                }),
            )
        }
        Command::PhasePoint(a) => {
            if a.scan {
                let scan = match a.samples {
                    Some(n) => phase_point_spectrum_sample(a.d, n, a.seed, exec)?,
                    None => phase_point_spectrum_scan(a.d, exec)?,
                };
                let mut o = out(
                    json!({"d": a.d, "samples": a.samples}),
                    json!({
                        "operators": scan.operators,
                        "min_eigenvalue": scan.min_eigenvalue,
                        "argmin_u": scan.argmin.to_string(),
                        "bound": -1.0 / a.d as f64,
                    }),
                );
                o.seed = a.samples.map(|_| a.seed);
                o
            } else {
                let u = match &a.u {
                    Some(s) => parse_u(a.d, s)?,
                    None => PhasePointIndex::u_star(a.d)?,
                };
                let op = phase_point_operator(&u)?;
                let spectrum = hermitian_eig(&op.matrix)?.values;
                out(
                    json!({"d": a.d, "u": u.to_string()}),
                    json!({"matrix": matrix_to_json(&op.matrix), "spectrum": spectrum}),
                )
            }
        }
        Command::Clifford(CliffordCommand::Enumerate { d, out: path }) => {
            let group = enumerate_clifford(*d, exec)?;
            let elements: Vec<Value> = group
                .elements()
                .iter()
                .map(|e| json!({"F": e.f, "chi": e.chi, "matrix": matrix_to_json(&e.matrix)}))
                .collect();
            let mut results = json!({"count": group.len()});
            match path {
                Some(p) => {
                    std::fs::write(p, serde_json::to_string(&elements).expect("serializable"))?;
                    results["out"] = json!(p);
                }
                None => results["elements"] = Value::Array(elements),
            }
            out(json!({"d": d}), results)
        }
        Command::Clifford(CliffordCommand::Certificate { d }) => {
            let c = robust_eigenvector_certificate(*d)?;
            out(
                json!({"d": d}),
                json!({
                    "eigenvalue": c64(c.eigenvalue),
                    "k": c.k,
                    "form": format!("-w^{}", c.k),
                    "c_prime": matrix_to_json(&c.c_prime),
                }),
            )
        }
        Command::Witness(WitnessCommand::Derive {
            d,
            code,
            u,
            out: path,
            certify,
        }) => {
            let u = parse_u(*d, u)?;
            let w = derive_witness(*code, &u)?;
            let mut results = json!({
                "provenance": w.provenance.to_string(),
                "spectrum": w.spectrum()?,
                "eigen_bound": eigen_bound(&w)?,
            });
            if let Some(p) = path {
                save_witness_file(&w, p)?;
                results["out"] = json!(p);
            }
            if *certify {
                results["certify"] = facet_report(&w, ctx)?;
            }
            out(
                json!({"d": d, "code": code.to_string(), "u": u.to_string()}),
                results,
            )
        }
        Command::Witness(WitnessCommand::Certify { file }) => {
            let w = load_facet(file)?;
            let mut results = facet_report(&w, ctx)?;
            results["spectrum"] = json!(w.spectrum()?);
            out(json!({"file": file, "d": w.d}), results)
        }
        Command::Witness(WitnessCommand::Orbit { file, count_only }) => {
            let w = load_facet(file)?;
            let group = enumerate_clifford(w.d, exec)?;
            let results = if *count_only {
                json!({"size": orbit_size(&w, &group, exec)?})
            } else {
                let members = orbit(&w, &group, exec)?;
                json!({
                    "size": members.len(),
                    "members": members.iter().map(|m| matrix_to_json(&m.matrix)).collect::<Vec<_>>(),
                })
            };
            out(
                json!({"file": file, "d": w.d, "count_only": count_only}),
                results,
            )
        }
        Command::Gate(GateCommand::Eval(a)) => {
            let w = facet_for(&a.facet)?;
            let u = match &a.unitary {
                Some(p) => load_matrix_file(p)?,
                None => data::optimal_gate(a.facet.d)?,
            };
            let v = gate_value(&u, &w)?;
            out(
                json!({"d": a.facet.d, "facet": a.facet.facet, "unitary": a.unitary}),
                json!({
                    "value": v,
                    "p_star": if v < 0.0 { Some(robustness_from_value(v, w.d)) } else { None },
                    "eigen_bound": eigen_bound(&w)?,
                }),
            )
        }
        Command::Gate(GateCommand::Search {
            gate,
            restarts,
            max_iters,
            seed,
            mode,
        }) => {
            let w = facet_for(gate)?;
            let cfg = GateSearchConfig {
                restarts: *restarts,
                max_iters: *max_iters,
                seed: *seed,
                parametrization: *mode,
                ..Default::default()
            };
            let r = optimize_gate(&w, &cfg, exec)?;
            Output {
                parameters: json!({"d": gate.d, "facet": gate.facet, "config": cfg}),
                results: json!({
                    "best_found_value": r.value,
                    "p_star": if r.value < 0.0 { Some(robustness_from_value(r.value, w.d)) } else { None },
                    "mode": r.mode,
                    "task": r.task,
                    "tasks": r.tasks,
                    "unitary": matrix_to_json(&r.unitary),
                }),
                seed: Some(*seed),
            }
        }
        Command::Table1 { d, .. } => {
            let rows = table_rows(d)?;
            out(json!({"d": d}), json!({"rows": rows}))
        }
    })
}

fn table_rows(d: &str) -> Res<Vec<TableRow>> {
    let dims: Vec<u32> = if d == "all" {
        vec![2, 3, 5, 7]
    } else {
        vec![d
            .parse()
            .map_err(|_| Error::Contract(format!("--d must be a prime or 'all', got {d:?}")))?]
    };
    dims.into_iter().map(table_one).collect()
}

fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from("d,state_negativity,p_star_state,gate_value,p_star_gate\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.d, r.state_negativity, r.p_star_state, r.gate_value, r.p_star_gate
        ));
    }
    s
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Negativity(_) => "negativity",
        Command::RobustStates { .. } => "robust-states",
        Command::PhasePoint(_) => "phase-point",
        Command::Clifford(CliffordCommand::Enumerate { .. }) => "clifford enumerate",
        Command::Clifford(CliffordCommand::Certificate { .. }) => "clifford certificate",
        Command::Witness(WitnessCommand::Derive { .. }) => "witness derive",
        Command::Witness(WitnessCommand::Certify { .. }) => "witness certify",
        Command::Witness(WitnessCommand::Orbit { .. }) => "witness orbit",
        Command::Gate(GateCommand::Eval(_)) => "gate eval",
        Command::Gate(GateCommand::Search { .. }) => "gate search",
        Command::Table1 { .. } => "table1",
    }
}

fn exec_for(threads: Option<usize>) -> std::result::Result<Exec, String> {
    match threads {
        Some(0) => Err("--threads must be at least 1".into()),
        Some(1) => Ok(Exec::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| e.to_string())?;
            Ok(Exec::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Exec::Sequential),
        None => Ok(Exec::default()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = match exec_for(cli.threads) {
        Ok(e) => e,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx {
        opts: CertifyOptions {
            tol_sat: cli.tol_sat,
            rank_tol: cli.tol_rank,
            exec,
        },
    };
    if let Command::Table1 {
        d,
        format: Format::Csv,
    } = &cli.command
    {
        return match table_rows(d) {
            Ok(rows) => emit(&table_csv(&rows)),
            Err(e) => fail(e),
        };
    }
    let start = Instant::now();
    match run(&cli.command, &ctx) {
        Ok(o) => {
            let report = json!({
                "command": command_name(&cli.command),
                "parameters": o.parameters,
                "results": o.results,
                "runtime_ms": start.elapsed().as_secs_f64() * 1e3,
                "tool_version": env!("CARGO_PKG_VERSION"),
                "seed": o.seed,
            });
            emit(&(serde_json::to_string_pretty(&report).expect("serializable") + "\n"))
        }
        Err(e) => fail(e),
    }
}

fn emit(text: &str) -> ExitCode {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        _ => ExitCode::SUCCESS,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    // a missing input file is the caller's mistake, not an internal failure
    let missing = matches!(&e, Error::Io(io) if io.kind() == std::io::ErrorKind::NotFound);
    ExitCode::from(if e.is_validation() || missing { 2 } else { 1 })
}
