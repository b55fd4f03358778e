//! Command-line front end. Exit codes: 0 success, 1 validation failure, 2 usage error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::anneal::{
    compare_encodings, gap_scan, resolve_degeneracy, CompareOptions, EncodedProblem, Encoding,
    GapScan, GapScanOptions,
};
use crate::error::{invalid, Error, Result};
use crate::ising::{brute_force_ground_states, IsingHamiltonian, SpinAssignment, BRUTE_FORCE_CAP};
use crate::manifest::{read_verified, write_artifact, RunManifest};
use crate::paintshop::{enumerate_instances_with, Nontriviality, PaintShopInstance};
use crate::parity::{
    compile_lhz, hamiltonian, plaquette_hamiltonian, solve_flip_mask, tune_penalty, Form,
    ParityCompilation, ParityForm, PlaquetteKind,
};
use crate::pegasus::{
    build_embedding, embed_problem, find_largest_lhz, generate_pegasus, parse_defects, place_lhz,
    validate_embedding, Embedding, EmbeddingStyle, LhzPlacement,
};
use crate::sampler::{
    chain_states, distribution_stats, gs_fraction, simulated_anneal, AnnealParams,
};

/// Directory for cached gap scans, keyed by manifest hash.
pub const CACHE_ENV: &str = "PARITY_ANNEAL_CACHE";

#[derive(Parser, Debug)]
#[command(
    name = "parity-anneal",
    version,
    about = "Parity compilation, Pegasus embedding and annealing analysis"
)]
pub struct Cli {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build or enumerate multi-car paint shop instances.
    #[command(subcommand)]
    Paintshop(PaintshopCommand),
    /// Compile a logical problem to multi-body or 2-body parity form.
    Compile(CompileArgs),
    /// Spectral-gap scan of one encoding, or all three with `--encoding all`.
    GapScan(GapScanArgs),
    /// Embed a parity problem on a Pegasus graph.
    Embed(EmbedArgs),
    /// Simulated-annealing samples of an embedded problem.
    Sample(SampleArgs),
    /// Join artifacts into figure tables.
    Report(ReportArgs),
}

#[derive(Subcommand, Debug)]
pub enum PaintshopCommand {
    Gen(GenArgs),
    Enum(EnumArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub cars: usize,
    /// JSON list of groups, e.g. `[[0,1,2]]`.
    #[arg(long)]
    pub groups: String,
    /// JSON list of black-car counts, one per group.
    #[arg(long)]
    pub k: String,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EnumArgs {
    #[arg(long, default_value_t = 2)]
    pub cmin: usize,
    #[arg(long)]
    pub cmax: usize,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Allow k = 0 (full groups only must be non-trivial).
    #[arg(long)]
    pub full_only: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Where a logical problem comes from.
#[derive(Args, Debug, Clone, Serialize)]
pub struct ProblemSource {
    /// Enumerated instance label such as `(3,1,2)` or `(4,2,1)#2`.
    #[arg(long)]
    pub instance: Option<String>,
    /// Instance file written by `paintshop gen`.
    #[arg(long)]
    pub instance_file: Option<PathBuf>,
    /// Hamiltonian text file.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompileArgs {
    #[arg(long, value_parser = parse_form)]
    pub form: ParityForm,
    #[command(flatten)]
    pub source: ProblemSource,
    /// Fixed penalty; tuned when absent.
    #[arg(long)]
    pub penalty: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GapScanArgs {
    /// logical, multibody, 2body or all.
    #[arg(long)]
    pub encoding: String,
    #[command(flatten)]
    pub source: ProblemSource,
    /// Artifact written by `compile`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 201)]
    pub grid: usize,
    #[arg(long)]
    pub levels: Option<usize>,
    /// Also write the per-point spectrum as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[arg(long, value_parser = parse_style)]
    pub style: EmbeddingStyle,
    #[arg(long)]
    pub pegasus: usize,
    #[arg(long)]
    pub defects: Option<PathBuf>,
    /// `square`, `lhz` (largest triangle), `lhz:N` or `topology`.
    #[arg(long, default_value = "square")]
    pub problem: String,
    /// Logical problem for `lhz`; all-zero when absent.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Prefactor of the chain-strength rule.
    #[arg(long, default_value_t = 1.414)]
    pub chain_prefactor: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Artifact written by `embed`.
    #[arg(long)]
    pub embedding: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1000)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 100)]
    pub gauge_period: usize,
    /// Sample file (`+`/`-` rows).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Statistics JSON.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Artifacts from `gap-scan` and `sample --stats`.
    #[arg(required = true)]
    pub artifacts: Vec<PathBuf>,
}

fn parse_form(s: &str) -> std::result::Result<ParityForm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_style(s: &str) -> std::result::Result<EmbeddingStyle, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Paintshop(PaintshopCommand::Gen(a)) => paintshop_gen(a),
        Command::Paintshop(PaintshopCommand::Enum(a)) => paintshop_enum(a),
        Command::Compile(a) => compile_cmd(a),
        Command::GapScan(a) => gap_scan_cmd(a),
        Command::Embed(a) => embed_cmd(a),
        Command::Sample(a) => sample_cmd(a, cli.seed),
        Command::Report(a) => report_cmd(a),
    }
}

/// Writes an artifact with sidecar, or prints it when no path is given.
fn emit(path: Option<&Path>, contents: &str, manifest: &RunManifest) -> Result<()> {
    match path {
        Some(p) => write_artifact(p, contents, manifest),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn json_artifact(manifest: &RunManifest, kind: &str, mut body: Value) -> Result<String> {
    let obj = body
        .as_object_mut()
        .ok_or_else(|| invalid("artifact body must be an object"))?;
    obj.insert("manifest".into(), json!(manifest.hash()));
    obj.insert("kind".into(), json!(kind));
    let mut s = serde_json::to_string_pretty(&body)?;
    s.push('\n');
    Ok(s)
}

fn paintshop_gen(a: &GenArgs) -> Result<()> {
    let groups: Vec<Vec<usize>> = serde_json::from_str(&a.groups)?;
    let k: Vec<usize> = serde_json::from_str(&a.k)?;
    let inst = PaintShopInstance::new(a.cars, groups, k, a.lambda)?;
    if let Some(w) = inst.penalty_warning() {
        eprintln!("warning: {w}");
    }
    let m = RunManifest::new(
        "paintshop gen",
        &json!({"cars": a.cars, "groups": a.groups, "k": a.k, "lambda": a.lambda}),
    )?;
    emit(
        a.output.as_deref(),
        &format!("# manifest={} label={}\n{inst}\n", m.hash(), inst.label()),
        &m,
    )
}

fn paintshop_enum(a: &EnumArgs) -> Result<()> {
    let rule = if a.full_only {
        Nontriviality::FullOnly
    } else {
        Nontriviality::Strict
    };
    let list = enumerate_instances_with(a.cmin, a.cmax, a.lambda, rule)?;
    let m = RunManifest::new(
        "paintshop enum",
        &json!({"cmin": a.cmin, "cmax": a.cmax, "lambda": a.lambda, "full_only": a.full_only}),
    )?;
    let mut out = format!("# manifest={}\nlabel,instance\n", m.hash());
    for inst in &list {
        let _ = writeln!(out, "{},\"{inst}\"", inst.label());
    }
    emit(a.output.as_deref(), &out, &m)
}

/// Files read for a run, recorded in its manifest.
type Inputs = Vec<(PathBuf, Vec<u8>)>;

/// Resolves a problem source to (name, logical Hamiltonian, manifest inputs).
fn load_problem(src: &ProblemSource) -> Result<(String, IsingHamiltonian, Inputs)> {
    match (&src.instance, &src.instance_file, &src.hamiltonian) {
        (Some(label), None, None) => {
            let inst = find_instance(label)?;
            Ok((inst.label(), inst.hamiltonian()?, vec![]))
        }
        (None, Some(p), None) => {
            let bytes = fs::read(p)?;
            let text = String::from_utf8_lossy(&bytes);
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty() && !l.starts_with('#'))
                .ok_or_else(|| invalid(format!("{}: no instance line", p.display())))?;
            let inst: PaintShopInstance = line.parse()?;
            Ok((inst.label(), inst.hamiltonian()?, vec![(p.clone(), bytes)]))
        }
        (None, None, Some(p)) => {
            let bytes = fs::read(p)?;
            let h: IsingHamiltonian = String::from_utf8_lossy(&bytes).parse()?;
            Ok((p.display().to_string(), h, vec![(p.clone(), bytes)]))
        }
        _ => Err(invalid(
            "give exactly one of --instance, --instance-file, --hamiltonian",
        )),
    }
}

/// Looks up an enumerated instance by label, e.g. `(4,2,1)#2`.
pub fn find_instance(label: &str) -> Result<PaintShopInstance> {
    let cars: usize = label
        .trim_start_matches('(')
        .split(',')
        .next()
        .and_then(|c| c.parse().ok())
        .ok_or_else(|| invalid(format!("bad instance label {label:?}")))?;
    enumerate_instances_with(cars, cars, 1.0, Nontriviality::Strict)?
        .into_iter()
        .find(|i| i.label() == label)
        .ok_or_else(|| invalid(format!("no enumerated instance is labelled {label}")))
}

fn with_inputs(mut m: RunManifest, inputs: &[(PathBuf, Vec<u8>)]) -> RunManifest {
    for (p, b) in inputs {
        m = m.with_input(p, b);
    }
    m
}

fn compile_problem(
    h: &IsingHamiltonian,
    form: ParityForm,
    penalty: Option<f64>,
) -> Result<(ParityCompilation, IsingHamiltonian)> {
    let mut c = compile_lhz(h)?;
    if form == ParityForm::TwoBody {
        c = c.with_flip_mask(&solve_flip_mask(&c)?)?;
    }
    let lambda = match penalty {
        Some(p) => p,
        None => tune_penalty(&c, form)?,
    };
    let c = c.with_penalty(lambda)?;
    let h = hamiltonian(&c, form)?;
    Ok((c, h))
}

fn compile_cmd(a: &CompileArgs) -> Result<()> {
    let (name, h, inputs) = load_problem(&a.source)?;
    let (h, biased) = resolve_degeneracy(&h, GapScanOptions::default().bias)?;
    let (c, hp) = compile_problem(&h, a.form, a.penalty)?;
    let m = with_inputs(
        RunManifest::new(
            "compile",
            &json!({"form": a.form, "source": a.source, "penalty": a.penalty}),
        )?,
        &inputs,
    );
    let body = json!({
        "source": name,
        "form": a.form,
        "logical_n": h.n(),
        "biased": biased,
        "penalty": c.penalty(),
        "num_spins": hp.n(),
        "hamiltonian": hp.to_string(),
        "compilation": c,
    });
    emit(
        a.output.as_deref(),
        &json_artifact(&m, "compile", body)?,
        &m,
    )
}

fn cached_scan(h: &IsingHamiltonian, opts: &GapScanOptions, key: &str) -> Result<GapScan> {
    let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    let file = dir.as_ref().map(|d| d.join(format!("gap-{key}.json")));
    if let Some(f) = &file {
        if let Ok(text) = fs::read_to_string(f) {
            if let Ok(scan) = serde_json::from_str(&text) {
                return Ok(scan);
            }
        }
    }
    let scan = gap_scan(h, opts)?;
    if let (Some(d), Some(f)) = (dir, file) {
        fs::create_dir_all(d)?;
        crate::manifest::write_atomic(&f, serde_json::to_string(&scan)?.as_bytes())?;
    }
    Ok(scan)
}

fn gap_scan_cmd(a: &GapScanArgs) -> Result<()> {
    let params =
        json!({"encoding": a.encoding, "source": a.source, "grid": a.grid, "levels": a.levels});
    if a.encoding == "all" {
        let label = a
            .source
            .instance
            .as_deref()
            .ok_or_else(|| invalid("--encoding all needs --instance"))?;
        let inst = find_instance(label)?;
        let mut opts = CompareOptions::default();
        opts.scan.grid_size = a.grid;
        if let Some(l) = a.levels {
            opts.scan.levels = l;
        }
        let rows = compare_encodings(&inst, &opts)?;
        let m = RunManifest::new("gap-scan", &params)?;
        return emit(
            a.output.as_deref(),
            &json_artifact(&m, "compare", json!({ "rows": rows }))?,
            &m,
        );
    }
    let encoding: Encoding = a.encoding.parse()?;
    let (name, h, penalty, inputs) = match &a.input {
        Some(p) => {
            let bytes = fs::read(p)?;
            let art: Value = serde_json::from_slice(&bytes)?;
            let form = art["form"].as_str().unwrap_or("");
            if form != encoding.to_string() {
                return Err(invalid(format!(
                    "{} holds a {form} compilation, not {encoding}",
                    p.display()
                )));
            }
            let h: IsingHamiltonian = art["hamiltonian"]
                .as_str()
                .ok_or_else(|| invalid("artifact lacks hamiltonian"))?
                .parse()?;
            let name = art["source"].as_str().unwrap_or("").to_string();
            (name, h, art["penalty"].as_f64(), vec![(p.clone(), bytes)])
        }
        None => {
            let (name, h, inputs) = load_problem(&a.source)?;
            let (h, _) = resolve_degeneracy(&h, GapScanOptions::default().bias)?;
            let problem = EncodedProblem::build(&h, encoding)?;
            (name, problem.hamiltonian.clone(), problem.penalty(), inputs)
        }
    };
    let opts = GapScanOptions {
        grid_size: a.grid,
        levels: a.levels.unwrap_or(GapScanOptions::default().levels),
        ..Default::default()
    };
    let m = with_inputs(RunManifest::new("gap-scan", &params)?, &inputs);
    let scan = cached_scan(&h, &opts, &m.hash())?;
    if let Some(csv) = &a.csv {
        let text = format!("# manifest={}\n{}", m.hash(), scan.to_csv());
        write_artifact(csv, &text, &m)?;
    }
    let body = json!({
        "instance": name,
        "encoding": encoding,
        "n_qubits": scan.n_qubits,
        "penalty": penalty,
        "min_gap": scan.min_gap,
        "s_star": scan.s_star,
        "biased": scan.biased,
    });
    emit(
        a.output.as_deref(),
        &json_artifact(&m, "gap-scan", body)?,
        &m,
    )
}

/// The five-spin odd square plaquette: four parity spins and its auxiliary.
pub fn square_plaquette() -> IsingHamiltonian {
    plaquette_hamiltonian(5, PlaquetteKind::Square, Form::Odd, &[0, 1, 2, 3], 4)
        .expect("odd square")
}

fn embed_cmd(a: &EmbedArgs) -> Result<()> {
    let mut inputs = Vec::new();
    let defects = match &a.defects {
        Some(p) => {
            let bytes = fs::read(p)?;
            let d = parse_defects(&String::from_utf8_lossy(&bytes))?;
            inputs.push((p.clone(), bytes));
            d
        }
        None => Vec::new(),
    };
    let g = generate_pegasus(a.pegasus, &defects)?;
    let (mut full, topo) = build_embedding(&g, a.style)?;
    full.chain_strength.prefactor = a.chain_prefactor;
    let largest = find_largest_lhz(&topo);
    let (embedding, problem, placement): (
        Embedding,
        Option<IsingHamiltonian>,
        Option<LhzPlacement>,
    ) = match a.problem.as_str() {
        "topology" => (full, None, None),
        "square" => {
            let p = topo
                .complete_plaquettes()
                .next()
                .ok_or_else(|| Error::Embedding("no complete plaquette site".into()))?;
            (full.select(&p.qubits())?, Some(square_plaquette()), None)
        }
        spec if spec == "lhz" || spec.starts_with("lhz:") => {
            let n = match spec.strip_prefix("lhz:") {
                Some(n) => n
                    .parse()
                    .map_err(|_| invalid(format!("bad problem {spec:?}")))?,
                None => largest.n,
            };
            if n > largest.n {
                return Err(Error::Embedding(format!(
                    "an LHZ triangle of N = {n} does not fit; largest is {}",
                    largest.n
                )));
            }
            let logical = match &a.hamiltonian {
                Some(p) => {
                    let bytes = fs::read(p)?;
                    let h: IsingHamiltonian = String::from_utf8_lossy(&bytes).parse()?;
                    inputs.push((p.clone(), bytes));
                    h
                }
                None => IsingHamiltonian::new(n),
            };
            if logical.n() != n {
                return Err(invalid(format!(
                    "logical problem has {} spins, triangle holds {n}",
                    logical.n()
                )));
            }
            let pl = LhzPlacement { n, ..largest };
            let (c, h2) = compile_problem(&logical, ParityForm::TwoBody, Some(1.0))?;
            let sites = place_lhz(&topo, &pl, &c)?;
            (full.select(&sites)?, Some(h2), Some(pl))
        }
        other => return Err(invalid(format!("unknown problem {other:?}"))),
    };
    let report = validate_embedding(&embedding, &g);
    let m = with_inputs(
        RunManifest::new(
            "embed",
            &json!({"style": a.style, "pegasus": a.pegasus, "problem": a.problem, "chain_prefactor": a.chain_prefactor}),
        )?,
        &inputs,
    );
    let body = json!({
        "style": a.style,
        "pegasus": a.pegasus,
        "defects": g.defects(),
        "problem": a.problem,
        "num_nodes": embedding.num_nodes(),
        "num_chains": embedding.chains.len(),
        "max_chain_len": embedding.max_chain_len(),
        "violations": report.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "topology": {
            "qubits": topo.num_qubits(),
            "plaquette_sites": topo.plaquettes.len(),
            "missing": topo.missing.len(),
            "largest_lhz": largest,
        },
        "placement": placement,
        "hamiltonian": problem.as_ref().map(ToString::to_string),
        "embedding": embedding,
    });
    emit(a.output.as_deref(), &json_artifact(&m, "embed", body)?, &m)?;
    if !report.is_valid() {
        return Err(Error::Embedding(format!("validation failed:\n{report}")));
    }
    Ok(())
}

fn sample_cmd(a: &SampleArgs, seed: u64) -> Result<()> {
    let bytes = fs::read(&a.embedding)?;
    let art: Value = serde_json::from_slice(&bytes)?;
    let embedding: Embedding = serde_json::from_value(art["embedding"].clone())?;
    let h2: IsingHamiltonian = art["hamiltonian"]
        .as_str()
        .ok_or_else(|| invalid("embedding artifact carries no problem Hamiltonian"))?
        .parse()?;
    let m_size = art["pegasus"]
        .as_u64()
        .ok_or_else(|| invalid("embedding artifact lacks pegasus size"))? as usize;
    let defects: Vec<usize> = serde_json::from_value(art["defects"].clone())?;
    let g = generate_pegasus(m_size, &defects)?;
    let report = validate_embedding(&embedding, &g);
    if !report.is_valid() {
        return Err(Error::Embedding(format!("validation failed:\n{report}")));
    }
    let emb = embed_problem(&h2, &embedding, &g)?;
    let params = AnnealParams {
        num_samples: a.samples,
        sweeps: a.sweeps,
        temperatures: None,
        gauge_period: a.gauge_period,
    };
    let set = simulated_anneal(&emb.hamiltonian, &params, seed)?;
    let chains = chain_states(&set, &emb.chain_map)?;
    let m = RunManifest::new("sample", &params)?
        .with_seed(seed)
        .with_input(&a.embedding, &bytes);

    let mean_break = chains.break_rate.iter().sum::<f64>() / chains.break_rate.len().max(1) as f64;
    let (fraction, distribution) = if h2.n() <= BRUTE_FORCE_CAP {
        let gs: Vec<SpinAssignment> = brute_force_ground_states(&h2)?.states;
        (
            Some(gs_fraction(&set, &gs, &emb.chain_map, seed)?),
            Some(distribution_stats(&set, &gs, &emb.chain_map, seed)?),
        )
    } else {
        (None, None)
    };
    if let Some(out) = &a.output {
        let text = set.to_text(&emb.chain_map.nodes).replacen(
            '\n',
            &format!(" manifest={}\n", m.hash()),
            1,
        );
        write_artifact(out, &text, &m)?;
    }
    let body = json!({
        "source": a.embedding.display().to_string(),
        "style": art["style"],
        "seed": seed,
        "samples": set.len(),
        "sweeps": a.sweeps,
        "chain_strength": emb.chain_strength,
        "mean_break_rate": mean_break,
        "break_rate": chains.break_rate,
        "gs_fraction": fraction,
        "distribution": distribution,
    });
    let text = json_artifact(&m, "sample", body)?;
    match &a.stats {
        Some(p) => write_artifact(p, &text, &m),
        None if a.output.is_none() => {
            print!("{text}");
            Ok(())
        }
        None => Ok(()),
    }
}

/// Column order of the report tables.
pub const MIN_GAP_COLUMNS: &str = "instance,encoding,n_qubits,penalty,min_gap,s_star,skipped";
pub const PERFORMANCE_COLUMNS: &str =
    "source,style,samples,chain_strength,mean_break_rate,raw,logical";
pub const DISTRIBUTION_COLUMNS: &str = "source,state,count,uniform_reference";

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains(',') || s.contains('"') => {
            format!("\"{}\"", s.replace('"', "\"\""))
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn report_cmd(a: &ReportArgs) -> Result<()> {
    let mut gaps = Vec::new();
    let mut perf = Vec::new();
    let mut dist = Vec::new();
    let mut manifest = RunManifest::new("report", &json!({}))?;
    for path in &a.artifacts {
        let (text, _) = read_verified(path)?;
        manifest = manifest.with_input(path, text.as_bytes());
        let v: Value = serde_json::from_str(&text)?;
        let name = path.display().to_string();
        match v["kind"].as_str() {
            Some("gap-scan") => gaps.push(
                [
                    "instance", "encoding", "n_qubits", "penalty", "min_gap", "s_star",
                ]
                .iter()
                .map(|k| cell(&v[*k]))
                .chain([String::new()])
                .collect::<Vec<_>>()
                .join(","),
            ),
            Some("compare") => {
                for r in v["rows"].as_array().into_iter().flatten() {
                    gaps.push(
                        [
                            "instance", "encoding", "n_qubits", "penalty", "min_gap", "s_star",
                            "skipped",
                        ]
                        .iter()
                        .map(|k| cell(&r[*k]))
                        .collect::<Vec<_>>()
                        .join(","),
                    );
                }
            }
            Some("sample") => {
                perf.push(format!(
                    "{},{},{},{},{},{},{}",
                    cell(&json!(name)),
                    cell(&v["style"]),
                    cell(&v["samples"]),
                    cell(&v["chain_strength"]),
                    cell(&v["mean_break_rate"]),
                    cell(&v["gs_fraction"]["raw"]),
                    cell(&v["gs_fraction"]["logical"]),
                ));
                let d = &v["distribution"];
                for c in d["counts"].as_array().into_iter().flatten() {
                    dist.push(format!(
                        "{},{},{},{}",
                        cell(&json!(name)),
                        cell(&c["state"]),
                        cell(&c["count"]),
                        cell(&d["uniform_reference"])
                    ));
                }
            }
            other => {
                return Err(invalid(format!(
                    "{name}: cannot report artifact of kind {other:?}"
                )))
            }
        }
    }
    fs::create_dir_all(&a.out_dir)?;
    let h = manifest.hash();
    for (file, header, rows) in [
        ("min_gaps.csv", MIN_GAP_COLUMNS, gaps),
        ("square_performance.csv", PERFORMANCE_COLUMNS, perf),
        ("gs_distribution.csv", DISTRIBUTION_COLUMNS, dist),
    ] {
        let mut text = format!("# manifest={h}\n{header}\n");
        for r in rows {
            text.push_str(&r);
            text.push('\n');
        }
        write_artifact(&a.out_dir.join(file), &text, &manifest)?;
    }
    Ok(())
}
