//! Monte-Carlo experiments: logical memory, workloads, method comparison and
//! threshold sweeps.

use std::time::Instant;

use rand::RngExt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::frame::PauliFrame;
use crate::circuit::runner::{CycleRunner, LogicalLayer, PrepStats, Shot};
use crate::circuit::scheduler::{schedule_cycle, Mode, Readout, SchedulerConfig};
use crate::circuit::{Backend, FaultSource};
use crate::css::{steane_code, CssCode};
use crate::error::{invalid, Error, Result};
use crate::noise::{NoiseModel, SampledNoise, SweepConvention};
use crate::rng::{shot_rng, shot_seed, Stream};
use crate::tableau::StabilizerTableau;

/// 97.5% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Workload {
    Memory,
    /// `depth` random transversal Clifford layers spread between rounds.
    RbDepth { depth: usize },
    /// Clifford layers plus `ceil(t_density * depth)` T noise layers.
    THeavy { depth: usize, t_density: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    /// Pauli frame against a noiseless reference.
    #[default]
    Frame,
    /// Full stabilizer tableau.
    Tableau,
}

/// Everything that defines an experiment. Identical configs give identical
/// results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_code")]
    pub code: String,
    #[serde(default)]
    pub scheduler: SchedulerConfig,
    #[serde(default)]
    pub noise: NoiseModel,
    /// Shortcut overriding `noise`: every rate scaled from `p_phys`.
    #[serde(default)]
    pub p_phys: Option<f64>,
    #[serde(default)]
    pub convention: SweepConvention,
    pub shots: u64,
    #[serde(default = "default_workload")]
    pub workload: Workload,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub backend: BackendKind,
}

fn default_code() -> String {
    "steane".into()
}

fn default_workload() -> Workload {
    Workload::Memory
}

impl ExperimentConfig {
    pub fn new(scheduler: SchedulerConfig, noise: NoiseModel, shots: u64, seed: u64) -> Self {
        Self {
            code: default_code(),
            scheduler,
            noise,
            p_phys: None,
            convention: SweepConvention::default(),
            shots,
            workload: Workload::Memory,
            seed,
            backend: BackendKind::Frame,
        }
    }

    /// The noise model after applying the `p_phys` shortcut.
    pub fn resolved_noise(&self) -> Result<NoiseModel> {
        match self.p_phys {
            Some(p) => {
                let mut m = NoiseModel::from_pphys(p, self.convention)?;
                m.channels = self.noise.channels.clone();
                m.t1_us = self.noise.t1_us;
                m.t2_us = self.noise.t2_us;
                m.gate_times = self.noise.gate_times;
                Ok(m)
            }
            None => Ok(self.noise.clone()),
        }
    }

    /// Nominal physical error rate: `p_phys` if given, else the one-qubit
    /// gate rate.
    pub fn p_phys_value(&self) -> f64 {
        self.p_phys.unwrap_or(self.noise.p1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return invalid("shots must be at least 1");
        }
        self.scheduler.validate()?;
        self.resolved_noise()?.validate()?;
        if let Workload::THeavy { t_density, .. } = self.workload {
            if !(0.0..=1.0).contains(&t_density) {
                return invalid(format!("t_density {t_density} outside [0, 1]"));
            }
        }
        code_by_name(&self.code)?;
        Ok(())
    }
}

/// Codes known by name.
pub fn code_by_name(name: &str) -> Result<CssCode> {
    match name.to_ascii_lowercase().as_str() {
        "steane" | "steane7" | "[[7,1,3]]" => Ok(steane_code()),
        other => Err(Error::InvalidArgument(format!("unknown code '{other}' (known: steane)"))),
    }
}

/// Rate with a Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

pub fn estimate_rate(failures: u64, trials: u64) -> Result<RateEstimate> {
    if trials == 0 {
        return invalid("trials must be at least 1");
    }
    if failures > trials {
        return invalid(format!("{failures} failures exceed {trials} trials"));
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Ok(RateEstimate {
        rate: p,
        ci_low: (center - half).max(0.0).min(p),
        ci_high: (center + half).min(1.0).max(p),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub mode: Mode,
    pub p_phys: f64,
    /// Logical failures per round.
    pub p_log: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Fraction of shots whose final logical value is wrong.
    pub fail_prob: f64,
    pub shots: u64,
    pub rounds: usize,
    pub n_data: usize,
    pub n_anc: usize,
    pub n_total: usize,
    pub width: usize,
    pub depth: usize,
    pub wall_time_s: f64,
    /// Rounds whose decoded syndrome equals the ideal syndrome.
    pub syndrome_fidelity: f64,
    pub prep_success_rate: f64,
    /// Rounds in which every ancilla passed verification.
    pub acceptance_rate: f64,
    pub prep: PrepStats,
    /// Wrong syndromes among accepted rounds.
    pub accepted_syndrome_error_rate: f64,
    /// Accepted cat states carrying a spreading (weight >= 2) X error.
    pub bad_cat_rate: f64,
}

#[derive(Debug, Clone, Default)]
struct Tally {
    round_failures: u64,
    failed_shots: u64,
    rounds: u64,
    matching_rounds: u64,
    accepted_rounds: u64,
    accepted_wrong: u64,
    prep: PrepStats,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.round_failures += o.round_failures;
        self.failed_shots += o.failed_shots;
        self.rounds += o.rounds;
        self.matching_rounds += o.matching_rounds;
        self.accepted_rounds += o.accepted_rounds;
        self.accepted_wrong += o.accepted_wrong;
        self.prep.merge(&o.prep);
        self
    }
}

/// Layer schedule of a workload: entry `t` lists the layers applied before
/// round `t`.
pub fn workload_layers(workload: Workload, rounds: usize, rng: &mut impl rand::Rng) -> Vec<Vec<LogicalLayer>> {
    let mut out = vec![Vec::new(); rounds];
    let (depth, t_layers) = match workload {
        Workload::Memory => return out,
        Workload::RbDepth { depth } => (depth, 0),
        Workload::THeavy { depth, t_density } => (depth, (t_density * depth as f64).ceil() as usize),
    };
    for i in 0..depth {
        let slot = i * rounds / depth.max(1);
        out[slot].push(LogicalLayer::CLIFFORD[rng.random_range(0..4)]);
        if (i + 1) * t_layers / depth > i * t_layers / depth {
            out[slot].push(LogicalLayer::TNoise);
        }
    }
    out
}

fn run_shot<B: Backend, F: FaultSource>(
    runner: &CycleRunner,
    backend: B,
    faults: F,
    layers: &[Vec<LogicalLayer>],
) -> Result<Tally> {
    let mut shot: Shot<B, F> = runner.start(backend, faults, false)?;
    let mut tally = Tally::default();
    for before in layers {
        for &l in before {
            runner.apply_layer(&mut shot, l)?;
        }
        let rec = runner.round(&mut shot)?;
        tally.rounds += 1;
        tally.round_failures += rec.logical_flip as u64;
        let right = rec.outcome.syndrome.z_bits == rec.truth.z_bits && rec.outcome.syndrome.x_bits == rec.truth.x_bits;
        tally.matching_rounds += right as u64;
        if rec.outcome.accepted {
            tally.accepted_rounds += 1;
            tally.accepted_wrong += !right as u64;
        }
        tally.prep.merge(&rec.prep);
    }
    tally.failed_shots = shot.class as u64;
    Ok(tally)
}

fn ratio(num: u64, den: u64, empty: f64) -> f64 {
    if den == 0 {
        empty
    } else {
        num as f64 / den as f64
    }
}

/// Logical memory (or workload) experiment: encode `|0_L>`, run the
/// configured rounds under noise, decode ideally after every round.
pub fn run_workload(config: &ExperimentConfig) -> Result<BenchResult> {
    config.validate()?;
    let start = Instant::now();
    let code = code_by_name(&config.code)?;
    let noise = config.resolved_noise()?;
    let runner = CycleRunner::new(&code, &config.scheduler, &noise)?;
    let n_total = runner.n_total();
    let rounds = config.scheduler.rounds;
    let seed = config.seed;
    let tally = (0..config.shots)
        .into_par_iter()
        .map(|s| -> Result<Tally> {
            let mut wrng = shot_rng(seed, s, Stream::Workload);
            let layers = workload_layers(config.workload, rounds, &mut wrng);
            let faults = SampledNoise::new(&noise, shot_rng(seed, s, Stream::Noise));
            match config.backend {
                BackendKind::Frame => run_shot(&runner, PauliFrame::new(n_total), faults, &layers),
                BackendKind::Tableau => {
                    let t = StabilizerTableau::new(n_total, shot_seed(seed, s, Stream::Measurement))?;
                    run_shot(&runner, t, faults, &layers)
                }
            }
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    let est = estimate_rate(tally.round_failures, tally.rounds)?;
    let cycle = schedule_cycle(&code, &SchedulerConfig { rounds: 1, ..config.scheduler.clone() })?;
    let plan = runner.plan();
    Ok(BenchResult {
        mode: config.scheduler.mode,
        p_phys: config.p_phys_value(),
        p_log: est.rate,
        ci_low: est.ci_low,
        ci_high: est.ci_high,
        fail_prob: ratio(tally.failed_shots, config.shots, 0.0),
        shots: config.shots,
        rounds,
        n_data: code.n,
        n_anc: plan.layout.n_anc(),
        n_total,
        width: n_total,
        depth: cycle.depth(),
        wall_time_s: start.elapsed().as_secs_f64(),
        syndrome_fidelity: ratio(tally.matching_rounds, tally.rounds, 1.0),
        prep_success_rate: tally.prep.success_rate(config.scheduler.mode),
        acceptance_rate: ratio(tally.accepted_rounds, tally.rounds, 1.0),
        prep: tally.prep,
        accepted_syndrome_error_rate: ratio(tally.accepted_wrong, tally.accepted_rounds, 0.0),
        bad_cat_rate: ratio(tally.prep.bad_accepted_cats, tally.prep.accepted_cats, 0.0),
    })
}

/// [`run_workload`] with the workload forced to memory.
pub fn run_memory(config: &ExperimentConfig) -> Result<BenchResult> {
    run_workload(&ExperimentConfig {
        workload: Workload::Memory,
        ..config.clone()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointSource {
    MonteCarlo,
    AnalyticModel,
}

impl PointSource {
    pub fn name(self) -> &'static str {
        match self {
            PointSource::MonteCarlo => "monte_carlo",
            PointSource::AnalyticModel => "analytic_model",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub d: usize,
    pub p_phys: f64,
    pub p_log: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub source: PointSource,
}

pub const MODEL_P_TH: f64 = 0.01;
pub const MODEL_A: f64 = 0.1;

/// Analytic scaling model `A (p / p_th)^ceil(d/2)`.
pub fn analytic_p_log(d: usize, p: f64) -> f64 {
    MODEL_A * (p / MODEL_P_TH).powi(d.div_ceil(2) as i32)
}

/// Threshold curves: Monte Carlo for d = 3 (using `base` for everything but
/// the noise strength), the analytic model for larger odd distances.
pub fn sweep_threshold(base: &ExperimentConfig, d_list: &[usize], p_list: &[f64]) -> Result<Vec<ThresholdPoint>> {
    if p_list.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("p_list must be strictly ascending");
    }
    if let Some(d) = d_list.iter().find(|&&d| d < 3 || d % 2 == 0) {
        return invalid(format!("distance {d} must be odd and at least 3"));
    }
    let mut out = Vec::new();
    for &d in d_list {
        for (i, &p) in p_list.iter().enumerate() {
            if d == 3 {
                let cfg = ExperimentConfig {
                    p_phys: Some(p),
                    seed: base.seed.wrapping_add(i as u64),
                    ..base.clone()
                };
                let r = run_memory(&cfg)?;
                out.push(ThresholdPoint {
                    d,
                    p_phys: p,
                    p_log: r.p_log,
                    ci_low: r.ci_low,
                    ci_high: r.ci_high,
                    source: PointSource::MonteCarlo,
                });
            } else {
                let v = analytic_p_log(d, p);
                out.push(ThresholdPoint {
                    d,
                    p_phys: p,
                    p_log: v,
                    ci_low: v,
                    ci_high: v,
                    source: PointSource::AnalyticModel,
                });
            }
        }
    }
    Ok(out)
}

/// Log-spaced grid of `points` values from `pmin` to `pmax`.
pub fn log_grid(pmin: f64, pmax: f64, points: usize) -> Result<Vec<f64>> {
    if !(pmin > 0.0 && pmax > pmin) || points < 2 {
        return invalid("need 0 < pmin < pmax and at least 2 points");
    }
    let (a, b) = (pmin.ln(), pmax.ln());
    let mut g: Vec<f64> = (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect();
    g[0] = pmin;
    g[points - 1] = pmax;
    Ok(g)
}

/// Where the Monte-Carlo curve crosses `p_log = p_phys`, by log-linear
/// interpolation between the first bracketing pair.
pub fn pseudo_threshold(points: &[ThresholdPoint]) -> Option<f64> {
    let mc: Vec<_> = points.iter().filter(|p| p.source == PointSource::MonteCarlo && p.d == 3).collect();
    mc.windows(2).find_map(|w| {
        let (a, b) = (w[0], w[1]);
        let fa = (a.p_log.max(1e-300) / a.p_phys).ln();
        let fb = (b.p_log.max(1e-300) / b.p_phys).ln();
        if fa < 0.0 && fb >= 0.0 {
            let t = fa / (fa - fb);
            Some((a.p_phys.ln() + t * (b.p_phys.ln() - a.p_phys.ln())).exp())
        } else {
            None
        }
    })
}

/// Least-squares slope of `ln y` against `ln x`, skipping zero rates.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > 0.0)
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodRow {
    pub mode: Mode,
    pub syndrome_fidelity: f64,
    pub prep_success_rate: f64,
    pub n_anc: usize,
    /// Ancilla qubits relative to standard extraction.
    pub ancilla_overhead: f64,
    /// Cycle depth relative to standard extraction.
    pub depth_ratio: f64,
    pub p_log: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `p_phys / p_log`; infinite when no failure was seen.
    pub suppression: f64,
    pub result: BenchResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodComparison {
    pub p_phys: f64,
    pub shots: u64,
    /// Definition used for the fidelity column.
    pub syndrome_fidelity_definition: String,
    pub rows: Vec<MethodRow>,
}

/// All three extraction modes at the same noise, shots and seed. Ancilla
/// counts are for batched readout (all stabilizers in parallel).
pub fn method_comparison_report(base: &ExperimentConfig) -> Result<MethodComparison> {
    let mut results = Vec::new();
    for mode in Mode::ALL {
        let cfg = ExperimentConfig {
            scheduler: SchedulerConfig {
                mode,
                ..base.scheduler.clone()
            },
            ..base.clone()
        };
        let r = run_memory(&cfg)?;
        let code = code_by_name(&cfg.code)?;
        let batched = crate::circuit::scheduler::RoundPlan::new(
            &code,
            &SchedulerConfig {
                readout: Readout::Batched,
                ..cfg.scheduler.clone()
            },
        )?;
        results.push((r, batched.layout.n_anc()));
    }
    let (std_anc, std_depth) = (results[0].1 as f64, results[0].0.depth as f64);
    let rows = results
        .into_iter()
        .map(|(r, n_anc)| MethodRow {
            mode: r.mode,
            syndrome_fidelity: r.syndrome_fidelity,
            prep_success_rate: r.prep_success_rate,
            n_anc,
            ancilla_overhead: n_anc as f64 / std_anc,
            depth_ratio: r.depth as f64 / std_depth,
            p_log: r.p_log,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            suppression: if r.p_log > 0.0 { r.p_phys / r.p_log } else { f64::INFINITY },
            result: r,
        })
        .collect();
    Ok(MethodComparison {
        p_phys: base.p_phys_value(),
        shots: base.shots,
        syndrome_fidelity_definition: "fraction of rounds whose decoded syndrome equals the ideal syndrome of the data".into(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(mode: Mode, p: Option<f64>, shots: u64) -> ExperimentConfig {
        ExperimentConfig {
            p_phys: p,
            ..ExperimentConfig::new(SchedulerConfig::new(mode, Readout::Sequential, 5), NoiseModel::noiseless(), shots, 3)
        }
    }

    #[test]
    fn wilson_examples() {
        let r = estimate_rate(0, 100).unwrap();
        assert_eq!(r.rate, 0.0);
        assert!((r.ci_high - 0.037).abs() < 1e-3);
        let r = estimate_rate(50, 100).unwrap();
        assert!((r.ci_low - 0.403).abs() < 1e-3 && (r.ci_high - 0.597).abs() < 1e-3);
        let r = estimate_rate(100, 100).unwrap();
        assert!((r.ci_low - 0.963).abs() < 1e-3);
        assert!(estimate_rate(1, 0).is_err());
        assert!(estimate_rate(3, 2).is_err());
    }

    #[test]
    fn noiseless_memory_never_fails() {
        for mode in Mode::ALL {
            let r = run_memory(&cfg(mode, None, 20)).unwrap();
            assert_eq!((r.p_log, r.fail_prob), (0.0, 0.0));
            assert_eq!(r.syndrome_fidelity, 1.0);
        }
    }

    #[test]
    fn analytic_anchors() {
        assert!((analytic_p_log(13, 1e-4) / 1e-15 - 1.0).abs() < 1e-9);
        for d in [3, 5, 7, 9, 11, 13] {
            assert!((analytic_p_log(d, 1e-2) - 0.1).abs() < 1e-15);
        }
        assert!((analytic_p_log(3, 1e-3) - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn zero_depth_workload_is_memory() {
        let base = cfg(Mode::Steane, Some(5e-3), 200);
        let a = run_memory(&base).unwrap();
        let b = run_workload(&ExperimentConfig {
            workload: Workload::RbDepth { depth: 0 },
            ..base.clone()
        })
        .unwrap();
        assert_eq!(a.p_log, b.p_log);
        assert_eq!(a.fail_prob, b.fail_prob);
        assert!(run_workload(&ExperimentConfig {
            workload: Workload::THeavy { depth: 3, t_density: 1.5 },
            ..base
        })
        .is_err());
    }

    #[test]
    fn t_heavy_layer_count() {
        let mut rng = shot_rng(1, 0, Stream::Workload);
        let l = workload_layers(Workload::THeavy { depth: 7, t_density: 0.3 }, 4, &mut rng);
        let t = l.iter().flatten().filter(|&&x| x == LogicalLayer::TNoise).count();
        let c = l.iter().flatten().count() - t;
        assert_eq!((t, c), (3, 7));
    }

    #[test]
    fn reproducible_and_backend_independent() {
        let base = cfg(Mode::Cat, Some(4e-3), 150);
        let mut a = run_memory(&base).unwrap();
        let mut b = run_memory(&base).unwrap();
        let mut c = run_memory(&ExperimentConfig {
            backend: BackendKind::Tableau,
            ..base
        })
        .unwrap();
        a.wall_time_s = 0.0;
        b.wall_time_s = 0.0;
        c.wall_time_s = 0.0;
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn sweep_sources_and_validation() {
        let base = cfg(Mode::Standard, None, 30);
        let pts = sweep_threshold(&base, &[3, 5], &[1e-3, 1e-2]).unwrap();
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0].source, PointSource::MonteCarlo);
        assert_eq!(pts[3].source, PointSource::AnalyticModel);
        assert!(sweep_threshold(&base, &[3], &[1e-2, 1e-3]).is_err());
        assert!(sweep_threshold(&base, &[4], &[1e-3]).is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1e-3, 2e-3, 4e-3];
        let ys: Vec<f64> = xs.iter().map(|x| 5.0 * x * x).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() - 2.0).abs() < 1e-9);
    }
}
