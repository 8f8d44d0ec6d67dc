//! File-based command-line pipeline: every stage of the library is exposed as
//! a subcommand that reads/writes the documented formats.
//!
//! Angle-valued flags accept symbolic π fractions (`pi/2`, `3pi/4`, `2pi`,
//! `-pi/4`) parsed exactly before float conversion, as well as plain decimals.
//! Output files are written atomically (write-then-rename) and are
//! byte-identical across runs with the same configuration and seed. CSV is
//! the default; `--format json` mirrors the rows with run metadata attached.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::circuit::{
    self, parse_circuit, postselect_onehot, sample_counts, sample_noisy_trajectories,
    simulate_statevector, NoiseSpec,
};
use crate::compile::{self, TrotterOrder, TrotterPlan};
use crate::error::{Error, Result};
use crate::extract::{self, AngleDistribution, CouplingMap, ExtractionParams, SamplerConfig};
use crate::graphs;
use crate::walk::{self, StateVector, WalkDistribution, WalkParams};

/// Seed fallback environment variable.
pub const SEED_ENV_VAR: &str = "WALKFORGE_SEED";

/// Parse an angle literal: `pi/2`, `3pi/4`, `-pi`, `2pi`, `0.25pi/3`, or a
/// plain decimal. The rational multiple of π is resolved exactly before the
/// single float multiplication.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = |msg: &str| Error::InvalidArgument(format!("angle `{text}`: {msg}"));
    if let Some(pos) = t.find("pi") {
        let (coef_str, rest) = t.split_at(pos);
        let rest = &rest[2..];
        let coef = match coef_str.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad("bad coefficient"))?,
        };
        let div = match rest.trim() {
            "" => 1.0,
            d => {
                let d = d.strip_prefix('/').ok_or_else(|| bad("expected `/divisor`"))?;
                let v: f64 = d.trim().parse().map_err(|_| bad("bad divisor"))?;
                if v == 0.0 {
                    return Err(bad("division by zero"));
                }
                v
            }
        };
        Ok(coef * PI / div)
    } else {
        t.parse().map_err(|_| bad("not a number"))
    }
}

fn parse_angle_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(parse_angle).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CouplingKind {
    Linear,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderKind {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AngleKind {
    Grid,
    Continuous,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output path prefix; files are written as `<prefix>.<name>.<ext>`.
    #[arg(long, short = 'o')]
    pub output: PathBuf,
    /// Output format (JSON mirrors the CSV rows plus run metadata).
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Shots per sampled distribution.
    #[arg(long, default_value_t = 8192)]
    pub shots: u64,
    /// RNG seed; falls back to WALKFORGE_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Depolarizing probability per one-qubit gate.
    #[arg(long = "noise-1q", default_value_t = 0.0)]
    pub noise_1q: f64,
    /// Depolarizing probability per CNOT.
    #[arg(long = "noise-2q", default_value_t = 0.0)]
    pub noise_2q: f64,
    /// Readout flip probability per measured bit.
    #[arg(long, default_value_t = 0.0)]
    pub readout: f64,
}

impl SamplingArgs {
    fn resolve_seed(&self) -> u64 {
        self.seed
            .or_else(|| {
                std::env::var(SEED_ENV_VAR)
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or(0)
    }

    fn noise(&self) -> Result<NoiseSpec> {
        NoiseSpec::new(self.noise_1q, self.noise_2q, self.readout)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "walkforge",
    version,
    about = "Continuous-time quantum walks: exact evolution, circuit compilation, simulation, and graph extraction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hypercube walk via the separable encoding (one U3 per qubit).
    HypercubeSeparable(HypercubeSeparableArgs),
    /// Hypercube walk via the one-hot line encoding with Trotterized XX+YY blocks.
    HypercubeOnehot(HypercubeOnehotArgs),
    /// Extract a walk graph from a circuit's unitary via the matrix logarithm.
    Extract(ExtractArgs),
    /// Search random depth-bounded circuits for perfect |0…0⟩→|1…1⟩ transfer.
    SampleTransfer(SampleTransferArgs),
    /// Evolve an exact walk on a graph file.
    Evolve(EvolveArgs),
    /// Simulate a raw circuit file on the statevector backend.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct HypercubeSeparableArgs {
    /// Hypercube dimension (qubit count).
    #[arg(long)]
    pub n: usize,
    /// Hopping frequency Ω.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Circuit angle θ = 2Ωt (accepts pi literals).
    #[arg(long, conflicts_with_all = ["theta_list", "time"])]
    pub theta: Option<String>,
    /// Comma-separated list of θ values.
    #[arg(long = "theta-list", conflicts_with = "time")]
    pub theta_list: Option<String>,
    /// Evolution time t (accepts pi literals).
    #[arg(long)]
    pub time: Option<String>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HypercubeOnehotArgs {
    /// Hypercube dimension (the line uses n+1 qubits).
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Comma-separated evolution times (pi literals allowed).
    #[arg(long = "time-list", default_value = "pi/4,pi/2,3pi/4,pi")]
    pub time_list: String,
    /// Trotter steps.
    #[arg(long, default_value_t = compile::DEFAULT_TROTTER_STEPS)]
    pub steps: usize,
    /// Trotter order.
    #[arg(long, value_enum, default_value_t = OrderKind::First)]
    pub order: OrderKind,
    /// Run the published four-qubit circuit and report its best-fit time.
    #[arg(long = "table-s1", default_value_t = false)]
    pub table_s1: bool,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Circuit text file to extract from.
    #[arg(long, short = 'i')]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Evolution time t (pi literals allowed).
    #[arg(long, default_value = "1")]
    pub time: String,
    /// Complete-graph multiple k.
    #[arg(long, default_value_t = 0)]
    pub k: i64,
    /// Diagonal shift φ (pi literals allowed).
    #[arg(long, default_value = "0")]
    pub phi: String,
    /// Rescale factor b (graph = b·A, effective Ω' = Ω/b).
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Drop extracted weights with modulus below this.
    #[arg(long, default_value_t = extract::PRUNE_THRESHOLD)]
    pub prune: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SampleTransferArgs {
    #[arg(long)]
    pub qubits: usize,
    /// Depth bound (layers of the greedy schedule).
    #[arg(long, default_value_t = extract::DEFAULT_MAX_DEPTH)]
    pub depth: usize,
    /// Number of seeded tries.
    #[arg(long, default_value_t = 100_000)]
    pub tries: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = CouplingKind::Linear)]
    pub coupling: CouplingKind,
    /// Acceptance fidelity for |⟨1…1|U|0…0⟩|².
    #[arg(long, default_value_t = extract::DEFAULT_FIDELITY_THRESHOLD)]
    pub threshold: f64,
    /// U3 angle distribution.
    #[arg(long, value_enum, default_value_t = AngleKind::Grid)]
    pub angles: AngleKind,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Graph JSON file.
    #[arg(long, short = 'g')]
    pub graph: PathBuf,
    /// Initial basis state as a bit-string (leftmost character = qubit 0).
    #[arg(long)]
    pub initial: String,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Evolution time t (pi literals allowed).
    #[arg(long, default_value = "1")]
    pub time: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Circuit text file.
    #[arg(long, short = 'i')]
    pub input: PathBuf,
    /// Initial basis state bit-string; defaults to |0…0⟩.
    #[arg(long)]
    pub initial: Option<String>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Parse argv and run. Errors come back to the caller (the binary prints the
/// one-line diagnostic and exits nonzero).
pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::HypercubeSeparable(args) => cmd_hypercube_separable(args),
        Command::HypercubeOnehot(args) => cmd_hypercube_onehot(args),
        Command::Extract(args) => cmd_extract(args),
        Command::SampleTransfer(args) => cmd_sample_transfer(args),
        Command::Evolve(args) => cmd_evolve(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

fn format_float(x: f64) -> String {
    format!("{x}")
}

/// Write via a temporary file in the same directory plus rename, so a failed
/// run never leaves a partial output behind.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn out_path(prefix: &Path, name: &str, format: OutputFormat) -> PathBuf {
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let stem = prefix
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("out");
    prefix.with_file_name(format!("{stem}.{name}.{ext}"))
}

fn write_distribution(
    prefix: &Path,
    name: &str,
    format: OutputFormat,
    dist: &WalkDistribution,
    meta: &serde_json::Value,
) -> Result<PathBuf> {
    let path = out_path(prefix, name, format);
    let contents = match format {
        OutputFormat::Csv => {
            let mut s = String::from("label,probability\n");
            for (label, p) in dist.labels.iter().zip(&dist.probabilities) {
                s.push_str(label);
                s.push(',');
                s.push_str(&format_float(*p));
                s.push('\n');
            }
            s
        }
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = dist
                .labels
                .iter()
                .zip(&dist.probabilities)
                .map(|(label, p)| json!({"label": label, "probability": p}))
                .collect();
            let doc = json!({"meta": meta, "time": dist.time, "rows": rows});
            format!("{:#}\n", doc)
        }
    };
    write_atomic(&path, &contents)?;
    Ok(path)
}

fn write_json_report(prefix: &Path, name: &str, value: &serde_json::Value) -> Result<PathBuf> {
    let path = out_path(prefix, name, OutputFormat::Json);
    write_atomic(&path, &format!("{:#}\n", value))?;
    Ok(path)
}

fn base_meta(command: &str, seed: u64, omega: f64) -> serde_json::Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "omega": omega,
    })
}

fn levels_distribution(levels: &[f64], time: f64) -> WalkDistribution {
    WalkDistribution {
        probabilities: levels.to_vec(),
        time,
        labels: (0..levels.len()).map(|k| k.to_string()).collect(),
    }
}

fn aggregate_levels(dist: &WalkDistribution, n: usize) -> WalkDistribution {
    let mut levels = vec![0.0; n + 1];
    for (v, p) in dist.probabilities.iter().enumerate() {
        levels[v.count_ones() as usize] += p;
    }
    levels_distribution(&levels, dist.time)
}

fn cmd_hypercube_separable(args: HypercubeSeparableArgs) -> Result<()> {
    let thetas: Vec<f64> = if let Some(t) = &args.theta {
        vec![parse_angle(t)?]
    } else if let Some(list) = &args.theta_list {
        parse_angle_list(list)?
    } else if let Some(time) = &args.time {
        vec![2.0 * args.omega * parse_angle(time)?]
    } else {
        return Err(Error::InvalidArgument(
            "exactly one of --theta, --theta-list, --time is required".into(),
        ));
    };
    if args.n == 0 || args.n > graphs::MAX_HYPERCUBE_DIM {
        return Err(Error::DimensionTooLarge {
            got: args.n,
            max: graphs::MAX_HYPERCUBE_DIM,
            hint: "",
        });
    }
    let seed = args.sampling.resolve_seed();
    let noise = args.sampling.noise()?;
    let n = args.n;

    for (idx, &theta) in thetas.iter().enumerate() {
        let params = WalkParams::from_theta(theta, args.omega);
        let point_seed = seed.wrapping_add(idx as u64);
        let meta = {
            let mut m = base_meta("hypercube-separable", point_seed, args.omega);
            m["n"] = json!(n);
            m["theta"] = json!(theta);
            m["time"] = json!(params.time);
            m["shots"] = json!(args.sampling.shots);
            m
        };

        // Exact distributions through the product structure.
        let product = walk::evolve_hypercube_product(n, params, 0)?;
        let exact_levels = levels_distribution(&product.profile().levels, params.time);
        write_distribution(
            &args.out.output,
            &format!("t{idx}.exact.levels"),
            args.out.format,
            &exact_levels,
            &meta,
        )?;
        if n <= 10 {
            let d = 1usize << n;
            let vertex = WalkDistribution {
                probabilities: (0..d).map(|v| product.vertex_probability(v)).collect(),
                time: params.time,
                labels: (0..d).map(|v| graphs::bitstring_label(v, n)).collect(),
            };
            write_distribution(
                &args.out.output,
                &format!("t{idx}.exact.vertex"),
                args.out.format,
                &vertex,
                &meta,
            )?;
        }

        // Shot-sampled path through the compiled circuit.
        let c = compile::compile_hypercube_separable(n, params)?;
        let psi0 = StateVector::basis_state(1 << n, 0)?;
        let mut sampled = if noise.depol_1q > 0.0 || noise.depol_2q > 0.0 {
            sample_noisy_trajectories(&c, &psi0, args.sampling.shots, point_seed, &noise)?
        } else {
            let psi = simulate_statevector(&c, &psi0)?;
            sample_counts(&psi, args.sampling.shots, point_seed, Some(&noise))?
        };
        sampled.time = params.time;
        write_distribution(
            &args.out.output,
            &format!("t{idx}.sampled.levels"),
            args.out.format,
            &aggregate_levels(&sampled, n),
            &meta,
        )?;
        if n <= 10 {
            write_distribution(
                &args.out.output,
                &format!("t{idx}.sampled.vertex"),
                args.out.format,
                &sampled,
                &meta,
            )?;
        }
    }
    Ok(())
}

fn cmd_hypercube_onehot(args: HypercubeOnehotArgs) -> Result<()> {
    if args.table_s1 {
        return cmd_table_s1(&args);
    }
    let n = args.n;
    let times = parse_angle_list(&args.time_list)?;
    let seed = args.sampling.resolve_seed();
    let noise = args.sampling.noise()?;
    let order = match args.order {
        OrderKind::First => TrotterOrder::First,
        OrderKind::Second => TrotterOrder::Second,
    };
    let plan = TrotterPlan::new(args.steps, order)?;

    let line = graphs::pst_line(n)?;
    let prop = walk::GraphPropagator::new(&line)?;
    let start = StateVector::basis_state(n + 1, 0)?;
    let mut summary_rows = Vec::new();

    for (idx, &time) in times.iter().enumerate() {
        let params = WalkParams::new(args.omega, time);
        let point_seed = seed.wrapping_add(idx as u64);
        let meta = {
            let mut m = base_meta("hypercube-onehot", point_seed, args.omega);
            m["n"] = json!(n);
            m["time"] = json!(time);
            m["steps"] = json!(args.steps);
            m["shots"] = json!(args.sampling.shots);
            m
        };

        let exact_psi = prop.evolve(params.phase(), &start)?;
        let exact = WalkDistribution {
            probabilities: exact_psi.probabilities(),
            time,
            labels: (0..=n).map(|v| v.to_string()).collect(),
        };
        write_distribution(
            &args.out.output,
            &format!("t{idx}.exact"),
            args.out.format,
            &exact,
            &meta,
        )?;

        let (compiled, discarded_ideal) = compile::onehot_walk_distribution(n, params, plan)?;
        write_distribution(
            &args.out.output,
            &format!("t{idx}.compiled"),
            args.out.format,
            &compiled,
            &meta,
        )?;

        let c = compile::compile_onehot_line(n, params, plan)?;
        let psi0 = StateVector::basis_state(1 << (n + 1), 1)?;
        let mut raw_sampled = if noise.depol_1q > 0.0 || noise.depol_2q > 0.0 {
            sample_noisy_trajectories(&c, &psi0, args.sampling.shots, point_seed, &noise)?
        } else {
            let psi = simulate_statevector(&c, &psi0)?;
            sample_counts(&psi, args.sampling.shots, point_seed, Some(&noise))?
        };
        raw_sampled.time = time;
        let post = postselect_onehot(&raw_sampled)?;
        let mut sampled = post.distribution;
        sampled.time = time;
        write_distribution(
            &args.out.output,
            &format!("t{idx}.sampled"),
            args.out.format,
            &sampled,
            &meta,
        )?;

        summary_rows.push(json!({
            "time": time,
            "tv_exact_compiled": walk::total_variation(&exact.probabilities, &compiled.probabilities),
            "tv_exact_sampled": walk::total_variation(&exact.probabilities, &sampled.probabilities),
            "tv_compiled_sampled": walk::total_variation(&compiled.probabilities, &sampled.probabilities),
            "discarded_ideal": discarded_ideal,
            "discarded_sampled": post.discarded_fraction,
        }));
    }

    let summary = json!({
        "meta": base_meta("hypercube-onehot", seed, args.omega),
        "n": n,
        "steps": args.steps,
        "rows": summary_rows,
    });
    write_json_report(&args.out.output, "summary", &summary)?;
    Ok(())
}

fn cmd_table_s1(args: &HypercubeOnehotArgs) -> Result<()> {
    let report = compile::table_s1_report()?;
    let meta = base_meta("hypercube-onehot --table-s1", args.sampling.resolve_seed(), args.omega);
    write_distribution(
        &args.out.output,
        "table_s1.distribution",
        args.out.format,
        &report.distribution,
        &meta,
    )?;
    let doc = json!({
        "meta": meta,
        "discarded_fraction": report.discarded_fraction,
        "per_time": report
            .per_time
            .iter()
            .map(|(t, tv)| json!({"phase": t, "tv": tv}))
            .collect::<Vec<_>>(),
        "best_phase": report.best_time,
        "best_tv": report.best_tv,
    });
    write_json_report(&args.out.output, "table_s1.report", &doc)?;
    println!(
        "table-s1: best-fit phase {} with TV {:.6} (discarded {:.6})",
        format_float(report.best_time),
        report.best_tv,
        report.discarded_fraction
    );
    Ok(())
}

fn cmd_extract(args: ExtractArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.input)?;
    let c = parse_circuit(&text)?;
    let u = circuit::circuit_unitary(&c)?;
    let params = ExtractionParams {
        omega: args.omega,
        time: parse_angle(&args.time)?,
        k: args.k,
        phi: parse_angle(&args.phi)?,
        b: args.b,
    };
    let g = extract::graph_from_unitary_pruned(&u, &params, args.prune)?;

    let graph_path = out_path(&args.out.output, "graph", OutputFormat::Json);
    write_atomic(&graph_path, &graphs::to_json(&g))?;
    let meta = json!({
        "meta": base_meta("extract", 0, args.omega),
        "time": params.time,
        "k": params.k,
        "phi": params.phi,
        "b": params.b,
        "omega_effective": params.omega_effective(),
        "num_vertices": g.num_vertices(),
        "num_edges": g.num_edges(),
        "chiral": extract::is_chiral(&g, 1e-9),
        "prune": args.prune,
    });
    write_json_report(&args.out.output, "meta", &meta)?;
    println!(
        "extracted {} vertices, {} edges (omega_eff {})",
        g.num_vertices(),
        g.num_edges(),
        format_float(params.omega_effective())
    );
    Ok(())
}

fn cmd_sample_transfer(args: SampleTransferArgs) -> Result<()> {
    let seed = args
        .seed
        .or_else(|| {
            std::env::var(SEED_ENV_VAR)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    let cfg = SamplerConfig {
        max_depth: args.depth,
        fidelity_threshold: args.threshold,
        angles: match args.angles {
            AngleKind::Grid => AngleDistribution::Grid,
            AngleKind::Continuous => AngleDistribution::Continuous,
        },
        ..SamplerConfig::new(args.qubits, args.tries, seed)?
    };
    let map = match args.coupling {
        CouplingKind::Linear => CouplingMap::linear(args.qubits),
        CouplingKind::Full => CouplingMap::full(args.qubits),
    };
    let found = extract::sample_perfect_transfer(&cfg, &map)?;

    let stem = args
        .out
        .output
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("out")
        .to_string();
    let mut manifest = String::new();
    for (try_idx, circuit, fidelity) in &found {
        let circuit_file = args
            .out
            .output
            .with_file_name(format!("{stem}.try{try_idx}.circuit.txt"));
        write_atomic(&circuit_file, &circuit::emit_circuit(circuit))?;
        let line = json!({
            "try": try_idx,
            "depth": circuit.depth(),
            "fidelity": fidelity,
            "circuit_file": circuit_file.to_string_lossy(),
        });
        manifest.push_str(&line.to_string());
        manifest.push('\n');
    }
    let manifest_path = args.out.output.with_file_name(format!("{stem}.manifest.jsonl"));
    write_atomic(&manifest_path, &manifest)?;
    println!(
        "found {} perfect-transfer circuits in {} tries (seed {seed})",
        found.len(),
        args.tries
    );
    Ok(())
}

fn cmd_evolve(args: EvolveArgs) -> Result<()> {
    let g = graphs::load(&args.graph)?;
    let d = g.num_vertices();
    let (v, bits) = graphs::vertex_from_bitstring(&args.initial)?;
    if 1usize << bits != d {
        return Err(Error::DimensionMismatch {
            left: 1usize << bits,
            right: d,
        });
    }
    let time = parse_angle(&args.time)?;
    let params = WalkParams::new(args.omega, time);
    let psi = walk::evolve_exact(&g, params, &StateVector::basis_state(d, v)?)?;
    let dist = WalkDistribution {
        probabilities: psi.probabilities(),
        time,
        labels: (0..d).map(|u| g.label_of(u)).collect(),
    };
    let mut meta = base_meta("evolve", 0, args.omega);
    meta["time"] = json!(time);
    meta["initial"] = json!(args.initial);
    write_distribution(&args.out.output, "distribution", args.out.format, &dist, &meta)?;
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.input)?;
    let c = parse_circuit(&text)?;
    let n = c.num_qubits();
    let psi0 = match &args.initial {
        Some(bits) => {
            let psi = StateVector::from_bitstring(bits)?;
            if psi.dim() != 1 << n {
                return Err(Error::DimensionMismatch {
                    left: psi.dim(),
                    right: 1 << n,
                });
            }
            psi
        }
        None => StateVector::basis_state(1 << n, 0)?,
    };
    let seed = args.sampling.resolve_seed();
    let noise = args.sampling.noise()?;
    let mut meta = base_meta("simulate", seed, 1.0);
    meta["shots"] = json!(args.sampling.shots);

    let psi = simulate_statevector(&c, &psi0)?;
    let exact = WalkDistribution {
        probabilities: psi.probabilities(),
        time: 0.0,
        labels: (0..psi.dim())
            .map(|v| graphs::bitstring_label(v, n))
            .collect(),
    };
    write_distribution(&args.out.output, "exact", args.out.format, &exact, &meta)?;

    let sampled = if noise.depol_1q > 0.0 || noise.depol_2q > 0.0 {
        sample_noisy_trajectories(&c, &psi0, args.sampling.shots, seed, &noise)?
    } else {
        sample_counts(&psi, args.sampling.shots, seed, Some(&noise))?
    };
    write_distribution(&args.out.output, "sampled", args.out.format, &sampled, &meta)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_literals() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle(" 1 ").unwrap(), 1.0);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("banana").is_err());
    }

    #[test]
    fn angle_lists() {
        let v = parse_angle_list("pi/2,pi,3pi/2,2pi").unwrap();
        assert_eq!(v, vec![PI / 2.0, PI, 1.5 * PI, 2.0 * PI]);
    }

    #[test]
    fn out_paths_attach_name_and_extension() {
        let p = out_path(Path::new("/tmp/run"), "t0.exact.levels", OutputFormat::Csv);
        assert_eq!(p, PathBuf::from("/tmp/run.t0.exact.levels.csv"));
    }
}
