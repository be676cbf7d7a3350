//! `hft`: build circuits, run extraction experiments, sweeps and temporal
//! decoder reports.

mod output;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hft_core::bench::{
    code_by_name, log_grid, method_comparison_report, pseudo_threshold, run_workload, sweep_threshold, BackendKind,
    ExperimentConfig, ThresholdPoint, Workload,
};
use hft_core::circuit::scheduler::{schedule_cycle, Mode, Readout, SchedulerConfig};
use hft_core::css::generator_notation;
use hft_core::noise::{NoiseModel, SweepConvention};
use hft_core::rng::{shot_rng, Stream};
use hft_core::temporal::{circuit_stream, compare_methods, fit_default_params, simulate_stream, HmmParams, Method};

use output::{csv, num, write_atomic, Envelope, Format};

#[derive(Parser, Debug)]
#[command(name = "hft", version, about = "Fault-tolerant syndrome extraction on the Steane code")]
struct Cli {
    /// Base seed for every random stream.
    #[arg(long, global = true, env = "HFT_SEED")]
    seed: Option<u64>,
    /// Output file (written atomically); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect built-in codes.
    Codes {
        #[command(subcommand)]
        action: CodesAction,
    },
    /// Build and print a syndrome-extraction circuit.
    Circuit {
        #[command(subcommand)]
        action: CircuitAction,
    },
    /// Run one memory or workload experiment.
    Run(RunArgs),
    /// Logical error rate against physical error rate.
    Sweep(SweepArgs),
    /// Compare the three extraction methods at one noise strength.
    Compare(CompareArgs),
    /// Temporal decoder comparison on syndrome streams.
    Temporal(TemporalArgs),
}

#[derive(Subcommand, Debug)]
enum CodesAction {
    List,
    Show { name: String },
}

#[derive(Subcommand, Debug)]
enum CircuitAction {
    Build(CircuitArgs),
}

#[derive(Args, Debug, Clone)]
struct SchedArgs {
    #[arg(long, default_value = "steane")]
    mode: Mode,
    #[arg(long, default_value = "sequential")]
    readout: Readout,
    #[arg(long, default_value_t = 10)]
    rounds: usize,
    /// Cat verification ancillas.
    #[arg(long, default_value_t = 2)]
    verify: usize,
    #[arg(long, default_value_t = 3)]
    max_attempts: usize,
    #[arg(long)]
    swap: bool,
    /// Decode each round's syndrome once, without confirming it.
    #[arg(long)]
    no_confirm: bool,
}

impl SchedArgs {
    fn config(&self) -> SchedulerConfig {
        SchedulerConfig {
            mode: self.mode,
            readout: self.readout,
            rounds: self.rounds,
            verify: self.verify,
            max_prep_attempts: self.max_attempts,
            swap_policy: self.swap,
            pauli_frame: false,
            confirm_syndrome: !self.no_confirm,
        }
    }
}

#[derive(Args, Debug)]
struct CircuitArgs {
    #[arg(long, default_value = "steane")]
    code: String,
    #[command(flatten)]
    sched: SchedArgs,
    /// Fixed-width lane drawing instead of the text format.
    #[arg(long)]
    render: bool,
    /// Instrument with the noise model given by --pphys.
    #[arg(long)]
    pphys: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Convention {
    /// p2 = 10 p, p_meas = 15 p.
    Proportional,
    /// p1 = p2 = p_meas = p.
    Uniform,
}

impl Convention {
    fn value(self) -> SweepConvention {
        match self {
            Convention::Proportional => SweepConvention::default(),
            Convention::Uniform => SweepConvention::UNIFORM,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Frame,
    Tableau,
}

#[derive(Args, Debug)]
struct NoiseArgs {
    /// Noise model JSON file.
    #[arg(long)]
    noise: Option<PathBuf>,
    /// Physical error rate shortcut (overrides the model's rates).
    #[arg(long)]
    pphys: Option<f64>,
    #[arg(long, value_enum)]
    convention: Option<Convention>,
    /// Enable idle (T1/T2) noise.
    #[arg(long)]
    idle: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Experiment JSON; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    readout: Option<Readout>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    shots: Option<u64>,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Random transversal Clifford layers.
    #[arg(long)]
    rb_depth: Option<usize>,
    /// Fraction of layers followed by T noise locations (with --rb-depth).
    #[arg(long)]
    t_density: Option<f64>,
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "3")]
    d: Vec<usize>,
    #[arg(long, default_value_t = 1e-4)]
    pmin: f64,
    #[arg(long, default_value_t = 3e-2)]
    pmax: f64,
    #[arg(long, default_value_t = 12)]
    points: usize,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    #[command(flatten)]
    sched: SchedArgs,
    #[arg(long, value_enum, default_value = "proportional")]
    convention: Convention,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long, default_value_t = 1e-3)]
    pphys: f64,
    #[arg(long, default_value_t = 50_000)]
    shots: u64,
    #[arg(long, default_value_t = 10)]
    rounds: usize,
    #[arg(long, value_enum, default_value = "proportional")]
    convention: Convention,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Majority,
    Viterbi,
    Bayes,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StreamSource {
    /// Streams drawn from the HMM itself.
    Synthetic,
    /// Observe-only rounds of the extraction circuit under noise.
    Circuit,
}

#[derive(Args, Debug)]
struct TemporalArgs {
    #[arg(long, value_enum, default_value = "all")]
    method: MethodArg,
    #[arg(long, default_value_t = 16)]
    rounds: usize,
    #[arg(long, default_value_t = 100)]
    shots: u64,
    #[arg(long, default_value_t = 3)]
    window: usize,
    #[arg(long, value_enum, default_value = "synthetic")]
    source: StreamSource,
    #[arg(long)]
    q_flip: Option<f64>,
    #[arg(long)]
    r_obs: Option<f64>,
    #[arg(long)]
    prior0: Option<f64>,
    /// Stabilizers per synthetic stream.
    #[arg(long, default_value_t = 3)]
    width: usize,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<hft_core::Error> for Failure {
    fn from(e: hft_core::Error) -> Self {
        match e {
            hft_core::Error::Config(_) | hft_core::Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Ctx {
    seed: u64,
    out: Option<PathBuf>,
    format: Option<Format>,
}

impl Ctx {
    fn format(&self, allowed: &[Format], default: Format) -> CliResult<Format> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Failure::Usage(format!("format {f:?} not supported by this command")))
        }
    }

    fn emit(&self, contents: &str) -> CliResult<()> {
        match &self.out {
            Some(p) => write_atomic(p, contents).map_err(|e| Failure::Runtime(format!("writing {}: {e}", p.display()))),
            None => {
                print!("{contents}");
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = Ctx {
        seed: cli.seed.unwrap_or(0),
        out: cli.out.clone(),
        format: cli.format,
    };
    let seed_given = cli.seed.is_some();
    let res = match cli.command {
        Command::Codes { action } => codes(&ctx, action),
        Command::Circuit {
            action: CircuitAction::Build(a),
        } => circuit(&ctx, a),
        Command::Run(a) => run(&ctx, a, seed_given),
        Command::Sweep(a) => sweep(&ctx, a),
        Command::Compare(a) => compare(&ctx, a),
        Command::Temporal(a) => temporal(&ctx, a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn codes(ctx: &Ctx, action: CodesAction) -> CliResult<()> {
    let name = match action {
        CodesAction::List => return ctx.emit("steane  [[7,1,3]]  Hamming-based CSS code\n"),
        CodesAction::Show { name } => name,
    };
    let code = code_by_name(&name)?;
    let fmt = ctx.format(&[Format::Text, Format::Json], Format::Text)?;
    if fmt == Format::Json {
        #[derive(Serialize)]
        struct Shown {
            description: hft_core::css::CodeDescription,
            k: usize,
            generators: Vec<String>,
            logical_x: String,
            logical_z: String,
        }
        let shown = Shown {
            description: code.description(),
            k: code.k,
            generators: generator_notation(&code),
            logical_x: code.logical_x.to_string(),
            logical_z: code.logical_z.to_string(),
        };
        return ctx.emit(&Envelope::new("codes show", ctx.seed, &name, &shown).json());
    }
    let mut s = String::new();
    let _ = writeln!(s, "{} [[{}, {}, {}]]", code.name, code.n, code.k, code.d);
    let _ = writeln!(s, "\nParity check matrix H:");
    for line in code.hz.to_string().lines() {
        let _ = writeln!(s, "  {line}");
    }
    let _ = writeln!(s, "\nStabilizer generators:");
    for g in generator_notation(&code) {
        let _ = writeln!(s, "  {g}");
    }
    let _ = writeln!(s, "\nLogical X: {}\nLogical Z: {}", code.logical_x, code.logical_z);
    ctx.emit(&s)
}

fn circuit(ctx: &Ctx, a: CircuitArgs) -> CliResult<()> {
    let code = code_by_name(&a.code)?;
    let cfg = a.sched.config();
    let mut c = schedule_cycle(&code, &cfg)?;
    if let Some(p) = a.pphys {
        let m = NoiseModel::from_pphys(p, SweepConvention::default())?;
        c = hft_core::noise::instrument(&c, &m)?;
    }
    match ctx.format(&[Format::Text, Format::Json], Format::Text)? {
        Format::Json => {
            #[derive(Serialize)]
            struct Built {
                stats: hft_core::circuit::CircuitStats,
                text: String,
            }
            let b = Built {
                stats: c.stats(),
                text: c.to_text(),
            };
            ctx.emit(&Envelope::new("circuit build", ctx.seed, &cfg, &b).json())
        }
        _ => ctx.emit(&if a.render { c.render() } else { c.to_text() }),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {what} '{}': {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid {what} '{}': {e}", path.display())))
}

fn apply_noise(cfg: &mut ExperimentConfig, n: &NoiseArgs) -> CliResult<()> {
    if let Some(p) = &n.noise {
        cfg.noise = read_json(p, "noise model")?;
    }
    if n.pphys.is_some() {
        cfg.p_phys = n.pphys;
    }
    if let Some(c) = n.convention {
        cfg.convention = c.value();
    }
    if n.idle {
        cfg.noise = cfg.noise.clone().with_idle();
    }
    Ok(())
}

fn bench_row(r: &hft_core::bench::BenchResult) -> (Vec<&'static str>, Vec<String>) {
    let header = vec![
        "mode", "p_phys", "p_log", "ci_low", "ci_high", "fail_prob", "shots", "rounds", "n_data", "n_anc", "n_total", "depth",
        "syndrome_fidelity", "prep_success_rate",
    ];
    let row = vec![
        r.mode.to_string(),
        num(r.p_phys),
        num(r.p_log),
        num(r.ci_low),
        num(r.ci_high),
        num(r.fail_prob),
        r.shots.to_string(),
        r.rounds.to_string(),
        r.n_data.to_string(),
        r.n_anc.to_string(),
        r.n_total.to_string(),
        r.depth.to_string(),
        num(r.syndrome_fidelity),
        num(r.prep_success_rate),
    ];
    (header, row)
}

fn run(ctx: &Ctx, a: RunArgs, seed_given: bool) -> CliResult<()> {
    let mut cfg = match &a.config {
        Some(p) => read_json::<ExperimentConfig>(p, "experiment config")?,
        None => ExperimentConfig::new(SchedulerConfig::default(), NoiseModel::default(), 10_000, 0),
    };
    if seed_given || a.config.is_none() {
        cfg.seed = ctx.seed;
    }
    if let Some(m) = a.mode {
        cfg.scheduler.mode = m;
    }
    if let Some(r) = a.readout {
        cfg.scheduler.readout = r;
    }
    if let Some(r) = a.rounds {
        cfg.scheduler.rounds = r;
    }
    if let Some(s) = a.shots {
        cfg.shots = s;
    }
    apply_noise(&mut cfg, &a.noise)?;
    match (a.rb_depth, a.t_density) {
        (Some(depth), None) => cfg.workload = Workload::RbDepth { depth },
        (Some(depth), Some(t_density)) => cfg.workload = Workload::THeavy { depth, t_density },
        (None, Some(_)) => return Err(Failure::Usage("--t-density needs --rb-depth".into())),
        (None, None) => {}
    }
    if let Some(b) = a.backend {
        cfg.backend = match b {
            BackendArg::Frame => BackendKind::Frame,
            BackendArg::Tableau => BackendKind::Tableau,
        };
    }
    cfg.validate()?;
    cfg.noise = cfg.resolved_noise()?;
    let r = run_workload(&cfg)?;
    let env = Envelope::new("run", cfg.seed, &cfg, &r);
    match ctx.format(&[Format::Json, Format::Csv, Format::Text], Format::Json)? {
        Format::Json => ctx.emit(&env.json()),
        Format::Csv => {
            let (h, row) = bench_row(&r);
            ctx.emit(&(env.comment_header() + &csv(&h, &[row])))
        }
        Format::Text => {
            let (h, row) = bench_row(&r);
            let mut s = env.comment_header();
            for (k, v) in h.iter().zip(row) {
                let _ = writeln!(s, "{k:>18}  {v}");
            }
            ctx.emit(&s)
        }
    }
}

fn sweep(ctx: &Ctx, a: SweepArgs) -> CliResult<()> {
    let p_list = log_grid(a.pmin, a.pmax, a.points)?;
    let mut base = ExperimentConfig::new(a.sched.config(), NoiseModel::default(), a.shots, ctx.seed);
    base.convention = a.convention.value();
    base.validate()?;
    let pts = sweep_threshold(&base, &a.d, &p_list)?;
    #[derive(Serialize)]
    struct SweepConfig<'a> {
        d: &'a [usize],
        p_list: &'a [f64],
        base: &'a ExperimentConfig,
    }
    #[derive(Serialize)]
    struct SweepResult<'a> {
        points: &'a [ThresholdPoint],
        pseudo_threshold: Option<f64>,
    }
    let scfg = SweepConfig {
        d: &a.d,
        p_list: &p_list,
        base: &base,
    };
    let res = SweepResult {
        points: &pts,
        pseudo_threshold: pseudo_threshold(&pts),
    };
    let env = Envelope::new("sweep", ctx.seed, &scfg, &res);
    let rows: Vec<Vec<String>> = pts
        .iter()
        .map(|p| {
            vec![
                p.d.to_string(),
                num(p.p_phys),
                num(p.p_log),
                num(p.ci_low),
                num(p.ci_high),
                p.source.name().to_string(),
            ]
        })
        .collect();
    let header = ["d", "p_phys", "p_log", "ci_low", "ci_high", "source"];
    match ctx.format(&[Format::Json, Format::Csv, Format::Text], Format::Csv)? {
        Format::Json => ctx.emit(&env.json()),
        Format::Csv => ctx.emit(&(env.comment_header() + &csv(&header, &rows))),
        Format::Text => {
            let mut s = env.comment_header();
            let _ = writeln!(s, "{:>3} {:>12} {:>12} {:>12} {:>12}  source", "d", "p_phys", "p_log", "ci_low", "ci_high");
            for p in &pts {
                let _ = writeln!(
                    s,
                    "{:>3} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}  {}",
                    p.d,
                    p.p_phys,
                    p.p_log,
                    p.ci_low,
                    p.ci_high,
                    p.source.name()
                );
            }
            if let Some(t) = res.pseudo_threshold {
                let _ = writeln!(s, "pseudo-threshold (d=3 crossing p_log = p_phys): {t:.3e}");
            }
            ctx.emit(&s)
        }
    }
}

fn compare(ctx: &Ctx, a: CompareArgs) -> CliResult<()> {
    let mut base = ExperimentConfig::new(
        SchedulerConfig::new(Mode::Standard, Readout::Sequential, a.rounds),
        NoiseModel::default(),
        a.shots,
        ctx.seed,
    );
    base.p_phys = Some(a.pphys);
    base.convention = a.convention.value();
    base.validate()?;
    let rep = method_comparison_report(&base)?;
    let env = Envelope::new("compare", ctx.seed, &base, &rep);
    let header = [
        "mode",
        "syndrome_fidelity",
        "prep_success_rate",
        "n_anc",
        "ancilla_overhead",
        "depth_ratio",
        "p_log",
        "ci_low",
        "ci_high",
        "suppression",
    ];
    let rows: Vec<Vec<String>> = rep
        .rows
        .iter()
        .map(|r| {
            vec![
                r.mode.to_string(),
                num(r.syndrome_fidelity),
                num(r.prep_success_rate),
                r.n_anc.to_string(),
                num(r.ancilla_overhead),
                num(r.depth_ratio),
                num(r.p_log),
                num(r.ci_low),
                num(r.ci_high),
                num(r.suppression),
            ]
        })
        .collect();
    match ctx.format(&[Format::Json, Format::Csv, Format::Text], Format::Text)? {
        Format::Json => ctx.emit(&env.json()),
        Format::Csv => ctx.emit(&(env.comment_header() + &csv(&header, &rows))),
        Format::Text => {
            let mut s = env.comment_header();
            let _ = writeln!(s, "# syndrome fidelity: {}", rep.syndrome_fidelity_definition);
            let _ = writeln!(
                s,
                "{:<9} {:>9} {:>9} {:>6} {:>9} {:>7} {:>11} {:>23} {:>11}",
                "mode", "fidelity", "prep", "n_anc", "overhead", "depth", "p_log", "95% CI", "suppression"
            );
            for r in &rep.rows {
                let _ = writeln!(
                    s,
                    "{:<9} {:>9.4} {:>9.4} {:>6} {:>8.1}x {:>6.2}x {:>11.3e} [{:>9.2e},{:>9.2e}] {:>11.1}",
                    r.mode.to_string(),
                    r.syndrome_fidelity,
                    r.prep_success_rate,
                    r.n_anc,
                    r.ancilla_overhead,
                    r.depth_ratio,
                    r.p_log,
                    r.ci_low,
                    r.ci_high,
                    r.suppression
                );
            }
            ctx.emit(&s)
        }
    }
}

fn temporal(ctx: &Ctx, a: TemporalArgs) -> CliResult<()> {
    if a.rounds == 0 {
        return Err(Failure::Usage("--rounds must be positive".into()));
    }
    let code = code_by_name("steane")?;
    let sched = SchedulerConfig::default();
    let noise = NoiseModel::default();
    let base = match a.source {
        StreamSource::Synthetic => HmmParams::default(),
        StreamSource::Circuit => fit_default_params(&code, &sched, &noise, 2000, ctx.seed)?,
    };
    let params = HmmParams::new(
        a.q_flip.unwrap_or(base.q_flip),
        a.r_obs.unwrap_or(base.r_obs),
        a.prior0.unwrap_or(base.prior0),
    )?;
    let streams = (0..a.shots)
        .map(|s| match a.source {
            StreamSource::Synthetic => {
                let mut rng = shot_rng(ctx.seed, s, Stream::Synthetic);
                Ok(simulate_stream(&params, a.rounds, a.width, &mut rng))
            }
            StreamSource::Circuit => circuit_stream(&code, &sched, &noise, a.rounds, ctx.seed, s),
        })
        .collect::<hft_core::Result<Vec<_>>>()?;
    let mut rep = compare_methods(&streams, &params, a.window)?;
    let keep: Vec<Method> = match a.method {
        MethodArg::All => Method::ALL.to_vec(),
        MethodArg::Majority => vec![Method::Majority],
        MethodArg::Viterbi => vec![Method::Viterbi],
        MethodArg::Bayes => vec![Method::Bayes],
    };
    rep.summaries.retain(|m| keep.contains(&m.method));
    for shot in &mut rep.shots {
        shot.corrected.retain(|(m, _)| keep.contains(m));
        shot.confidence.retain(|(m, _)| keep.contains(m));
    }
    #[derive(Serialize)]
    struct TemporalConfig {
        source: &'static str,
        rounds: usize,
        shots: u64,
        window: usize,
        width: usize,
        params: HmmParams,
    }
    let tcfg = TemporalConfig {
        source: match a.source {
            StreamSource::Synthetic => "synthetic",
            StreamSource::Circuit => "circuit",
        },
        rounds: a.rounds,
        shots: a.shots,
        window: a.window,
        width: streams.first().map_or(a.width, |s| s.width()),
        params,
    };
    let env = Envelope::new("temporal", ctx.seed, &tcfg, &rep);
    let bits = |b: &[bool]| b.iter().map(|&x| if x { '1' } else { '0' }).collect::<String>();
    match ctx.format(&[Format::Json, Format::Text, Format::Csv], Format::Json)? {
        Format::Json => ctx.emit(&env.json()),
        Format::Csv => {
            let header = ["method", "accuracy", "mean_confidence"];
            let rows: Vec<Vec<String>> = rep
                .summaries
                .iter()
                .map(|m| vec![m.method.name().to_string(), num(m.accuracy), num(m.mean_confidence)])
                .collect();
            ctx.emit(&(env.comment_header() + &csv(&header, &rows)))
        }
        Format::Text => {
            let mut s = env.comment_header();
            for m in &rep.summaries {
                let _ = writeln!(
                    s,
                    "{:<9} accuracy {:.4}  mean confidence {:.4}",
                    m.method.name(),
                    m.accuracy,
                    m.mean_confidence
                );
            }
            for shot in rep.shots.iter().take(5) {
                let _ = writeln!(s, "\nShot {}:", shot.shot);
                if let Some(h) = &shot.hidden_final {
                    let _ = writeln!(s, "  hidden truth:  {}", bits(h));
                }
                let _ = writeln!(s, "  observed:      {}", bits(&shot.observed_final));
                for ((m, b), (_, c)) in shot.corrected.iter().zip(&shot.confidence) {
                    let cs: Vec<String> = c.iter().map(|x| format!("{x:.3}")).collect();
                    let _ = writeln!(s, "  {:<9}      {}  confidence [{}]", m.name(), bits(b), cs.join(" "));
                }
                if !shot.disagreement_rounds.is_empty() {
                    let _ = writeln!(s, "  disagreement at rounds {:?}", shot.disagreement_rounds);
                }
            }
            ctx.emit(&s)
        }
    }
}
