//! Time-series decoding of repeated syndrome measurements. Each stabilizer
//! is an independent two-state hidden Markov chain: the hidden bit toggles
//! with probability `q_flip` per round and each observation misreports it
//! with probability `r_obs`.

use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::frame::PauliFrame;
use crate::circuit::ir::NoiseSite;
use crate::circuit::runner::CycleRunner;
use crate::circuit::scheduler::SchedulerConfig;
use crate::css::CssCode;
use crate::error::{invalid, Result};
use crate::noise::{idle_probabilities, Channel, NoiseModel, SampledNoise};
use crate::rng::{shot_rng, Stream};

/// T rounds by S stabilizers of observed bits, with the hidden syndrome
/// when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyndromeStream {
    pub observations: Vec<Vec<bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden_truth: Option<Vec<Vec<bool>>>,
}

impl SyndromeStream {
    pub fn new(observations: Vec<Vec<bool>>, hidden_truth: Option<Vec<Vec<bool>>>) -> Result<Self> {
        let s = Self {
            observations,
            hidden_truth,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn rounds(&self) -> usize {
        self.observations.len()
    }

    pub fn width(&self) -> usize {
        self.observations.first().map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<()> {
        let w = self.width();
        if self.observations.iter().any(|r| r.len() != w) {
            return invalid("observation rows have different widths");
        }
        if let Some(t) = &self.hidden_truth {
            if t.len() != self.rounds() || t.iter().any(|r| r.len() != w) {
                return invalid("hidden truth does not match the observation shape");
            }
        }
        Ok(())
    }

    fn column(&self, s: usize) -> Vec<bool> {
        self.observations.iter().map(|r| r[s]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HmmParams {
    pub q_flip: f64,
    pub r_obs: f64,
    pub prior0: f64,
}

impl HmmParams {
    pub fn new(q_flip: f64, r_obs: f64, prior0: f64) -> Result<Self> {
        let p = Self { q_flip, r_obs, prior0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("q_flip", self.q_flip), ("r_obs", self.r_obs), ("prior0", self.prior0)] {
            if !(0.0..=1.0).contains(&v) {
                return invalid(format!("{name} = {v} outside [0, 1]"));
            }
        }
        Ok(())
    }
}

impl Default for HmmParams {
    fn default() -> Self {
        Self {
            q_flip: 0.05,
            r_obs: 0.1,
            prior0: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Majority,
    Viterbi,
    Bayes,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Majority, Method::Viterbi, Method::Bayes];

    pub fn name(self) -> &'static str {
        match self {
            Method::Majority => "majority",
            Method::Viterbi => "viterbi",
            Method::Bayes => "bayes",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| crate::Error::InvalidArgument(format!("unknown method '{s}'")))
    }
}

/// Decoded syndrome at one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalDecision {
    pub round: usize,
    pub corrected_bits: Vec<bool>,
    pub confidence: Vec<f64>,
    pub method: Method,
}

fn assemble(method: Method, per_stab: Vec<(Vec<bool>, Vec<f64>)>, rounds: usize) -> Vec<TemporalDecision> {
    (0..rounds)
        .map(|t| TemporalDecision {
            round: t,
            corrected_bits: per_stab.iter().map(|(b, _)| b[t]).collect(),
            confidence: per_stab.iter().map(|(_, c)| c[t]).collect(),
            method,
        })
        .collect()
}

/// Sliding-window majority. Ties keep the previously reported bit.
pub fn majority_vote(stream: &SyndromeStream, window: usize) -> Result<Vec<TemporalDecision>> {
    stream.validate()?;
    if stream.rounds() == 0 {
        return invalid("empty syndrome stream");
    }
    if window == 0 {
        return invalid("majority window must be at least 1");
    }
    let per_stab = (0..stream.width())
        .map(|s| {
            let col = stream.column(s);
            let mut bits = Vec::with_capacity(col.len());
            let mut conf = Vec::with_capacity(col.len());
            let mut prev = false;
            for t in 0..col.len() {
                let win = &col[(t + 1).saturating_sub(window)..=t];
                let ones = win.iter().filter(|&&b| b).count();
                let zeros = win.len() - ones;
                let bit = match ones.cmp(&zeros) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => prev,
                };
                prev = bit;
                bits.push(bit);
                conf.push(ones.max(zeros) as f64 / win.len() as f64);
            }
            (bits, conf)
        })
        .collect();
    Ok(assemble(Method::Majority, per_stab, stream.rounds()))
}

fn ln(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        m
    } else {
        m + ((a - m).exp() + (b - m).exp()).ln()
    }
}

/// Log-domain model terms: `[stay, toggle]`, emission `[match, mismatch]`,
/// prior `[0, 1]`.
struct LogModel {
    trans: [f64; 2],
    emit: [f64; 2],
    prior: [f64; 2],
}

impl LogModel {
    fn new(p: &HmmParams) -> Self {
        Self {
            trans: [ln(1.0 - p.q_flip), ln(p.q_flip)],
            emit: [ln(1.0 - p.r_obs), ln(p.r_obs)],
            prior: [ln(p.prior0), ln(1.0 - p.prior0)],
        }
    }

    fn t(&self, from: usize, to: usize) -> f64 {
        self.trans[(from != to) as usize]
    }

    fn e(&self, state: usize, obs: bool) -> f64 {
        self.emit[(state != obs as usize) as usize]
    }
}

/// Most likely hidden path of one chain. Ties prefer state 0.
pub fn viterbi_path(obs: &[bool], params: &HmmParams) -> (Vec<bool>, Vec<f64>) {
    let m = LogModel::new(params);
    let n = obs.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut delta = vec![[0.0f64; 2]; n];
    let mut alpha = vec![[0.0f64; 2]; n];
    let mut back = vec![[0usize; 2]; n];
    for s in 0..2 {
        delta[0][s] = m.prior[s] + m.e(s, obs[0]);
        alpha[0][s] = delta[0][s];
    }
    for t in 1..n {
        for s in 0..2 {
            let c0 = delta[t - 1][0] + m.t(0, s);
            let c1 = delta[t - 1][1] + m.t(1, s);
            let (best, arg) = if c1 > c0 { (c1, 1) } else { (c0, 0) };
            delta[t][s] = best + m.e(s, obs[t]);
            back[t][s] = arg;
            alpha[t][s] = log_add(alpha[t - 1][0] + m.t(0, s), alpha[t - 1][1] + m.t(1, s)) + m.e(s, obs[t]);
        }
    }
    let mut state = if delta[n - 1][1] > delta[n - 1][0] { 1 } else { 0 };
    let mut path = vec![0usize; n];
    for t in (0..n).rev() {
        path[t] = state;
        state = back[t][state];
    }
    let conf = (0..n)
        .map(|t| {
            let z = log_add(alpha[t][0], alpha[t][1]);
            if z == f64::NEG_INFINITY {
                0.0
            } else {
                (delta[t][path[t]] - z).exp().clamp(0.0, 1.0)
            }
        })
        .collect();
    (path.into_iter().map(|s| s == 1).collect(), conf)
}

/// Viterbi decoding of every stabilizer chain.
pub fn viterbi_decode(stream: &SyndromeStream, params: &HmmParams) -> Result<Vec<TemporalDecision>> {
    stream.validate()?;
    params.validate()?;
    let per_stab = (0..stream.width())
        .map(|s| viterbi_path(&stream.column(s), params))
        .collect();
    Ok(assemble(Method::Viterbi, per_stab, stream.rounds()))
}

/// Joint log-likelihood of a hidden path and observations.
pub fn path_log_likelihood(path: &[bool], obs: &[bool], params: &HmmParams) -> f64 {
    let m = LogModel::new(params);
    let mut ll = 0.0;
    for t in 0..path.len() {
        let s = path[t] as usize;
        ll += if t == 0 { m.prior[s] } else { m.t(path[t - 1] as usize, s) };
        ll += m.e(s, obs[t]);
    }
    ll
}

/// Online forward filter for one chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BayesFilter {
    params: HmmParams,
    /// Posterior `[P(0), P(1)]`; `None` before the first observation.
    posterior: Option<[f64; 2]>,
}

impl BayesFilter {
    pub fn new(params: HmmParams) -> Self {
        Self { params, posterior: None }
    }

    pub fn posterior(&self) -> Option<[f64; 2]> {
        self.posterior
    }

    /// Predict, update with `obs`, renormalize. Returns the reported bit and
    /// its posterior probability.
    pub fn step(&mut self, obs: bool) -> (bool, f64) {
        let q = self.params.q_flip;
        let r = self.params.r_obs;
        let prior = match self.posterior {
            None => [self.params.prior0, 1.0 - self.params.prior0],
            Some([p0, p1]) => [p0 * (1.0 - q) + p1 * q, p1 * (1.0 - q) + p0 * q],
        };
        let like = |s: usize| if (s == 1) == obs { 1.0 - r } else { r };
        let mut post = [prior[0] * like(0), prior[1] * like(1)];
        let z = post[0] + post[1];
        if z > 0.0 {
            post = [post[0] / z, post[1] / z];
        } else {
            // Observation impossible under the model: fall back to it.
            post = if obs { [0.0, 1.0] } else { [1.0, 0.0] };
        }
        self.posterior = Some(post);
        if post[1] > post[0] {
            (true, post[1])
        } else {
            (false, post[0])
        }
    }
}

pub fn bayes_filter(stream: &SyndromeStream, params: &HmmParams) -> Result<Vec<TemporalDecision>> {
    stream.validate()?;
    params.validate()?;
    let per_stab = (0..stream.width())
        .map(|s| {
            let mut f = BayesFilter::new(*params);
            stream.column(s).into_iter().map(|o| f.step(o)).unzip()
        })
        .collect();
    Ok(assemble(Method::Bayes, per_stab, stream.rounds()))
}

/// Decisions of `method` on `stream`.
pub fn decode(method: Method, stream: &SyndromeStream, params: &HmmParams, window: usize) -> Result<Vec<TemporalDecision>> {
    match method {
        Method::Majority => majority_vote(stream, window),
        Method::Viterbi => viterbi_decode(stream, params),
        Method::Bayes => bayes_filter(stream, params),
    }
}

/// Verdict of [`AdaptiveAcceptance`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Accept { bits: Vec<bool>, rounds_used: usize },
    /// Measure another round.
    NeedMore,
    /// Budget exhausted; the best current estimate.
    GiveUp { bits: Vec<bool>, confidence: Vec<f64> },
}

/// Consumes syndrome rounds until every stabilizer's filtered confidence
/// exceeds the threshold.
#[derive(Debug, Clone)]
pub struct AdaptiveAcceptance {
    filters: Vec<BayesFilter>,
    pub threshold: f64,
    pub max_rounds: usize,
    rounds: usize,
}

impl AdaptiveAcceptance {
    pub const DEFAULT_THRESHOLD: f64 = 0.95;

    pub fn new(width: usize, params: HmmParams, threshold: f64, max_rounds: usize) -> Self {
        Self {
            filters: vec![BayesFilter::new(params); width],
            threshold,
            max_rounds,
            rounds: 0,
        }
    }

    pub fn push(&mut self, observation: &[bool]) -> Result<Verdict> {
        if observation.len() != self.filters.len() {
            return invalid(format!("expected {} bits, got {}", self.filters.len(), observation.len()));
        }
        self.rounds += 1;
        let (bits, conf): (Vec<bool>, Vec<f64>) = self.filters.iter_mut().zip(observation).map(|(f, &o)| f.step(o)).unzip();
        Ok(if conf.iter().all(|&c| c > self.threshold) {
            Verdict::Accept {
                bits,
                rounds_used: self.rounds,
            }
        } else if self.rounds >= self.max_rounds {
            Verdict::GiveUp { bits, confidence: conf }
        } else {
            Verdict::NeedMore
        })
    }
}

/// Synthetic stream drawn from the HMM itself.
pub fn simulate_stream(params: &HmmParams, rounds: usize, width: usize, rng: &mut ChaCha8Rng) -> SyndromeStream {
    let mut obs = vec![vec![false; width]; rounds];
    let mut truth = vec![vec![false; width]; rounds];
    for s in 0..width {
        let mut h = rng.random::<f64>() >= params.prior0;
        for t in 0..rounds {
            if t > 0 && rng.random::<f64>() < params.q_flip {
                h = !h;
            }
            truth[t][s] = h;
            obs[t][s] = h ^ (rng.random::<f64>() < params.r_obs);
        }
    }
    SyndromeStream {
        observations: obs,
        hidden_truth: Some(truth),
    }
}

/// Stream from the error-correction cycle run without corrections, so the
/// hidden syndrome is that of the accumulated data error. Columns: Z checks
/// then X checks.
pub fn circuit_stream(
    code: &CssCode,
    config: &SchedulerConfig,
    noise: &NoiseModel,
    rounds: usize,
    seed: u64,
    shot: u64,
) -> Result<SyndromeStream> {
    let cfg = SchedulerConfig {
        confirm_syndrome: false,
        ..config.clone()
    };
    let runner = CycleRunner::new(code, &cfg, noise)?;
    let faults = SampledNoise::new(noise, shot_rng(seed, shot, Stream::Noise));
    let mut s = runner.start(PauliFrame::new(runner.n_total()), faults, false)?;
    let mut obs = Vec::with_capacity(rounds);
    let mut truth = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let rec = runner.observe_round(&mut s)?;
        obs.push(rec.outcome.syndrome.bits());
        truth.push(rec.truth.bits());
    }
    SyndromeStream::new(obs, Some(truth))
}

/// HMM parameters for a code, schedule and noise model. `q_flip` is the
/// per-round probability that one Z-check's hidden bit toggles, from the
/// noise sites on the data qubits in its support; `r_obs` is the misreport
/// rate of a calibration run of `shots` observe-only rounds from a clean
/// code state.
pub fn fit_default_params(
    code: &CssCode,
    config: &SchedulerConfig,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<HmmParams> {
    let cfg = SchedulerConfig {
        confirm_syndrome: false,
        ..config.clone()
    };
    let runner = CycleRunner::new(code, &cfg, noise)?;
    let data = runner.plan().layout.data.clone();
    let support: Vec<usize> = code.hz.row_support(0).into_iter().map(|q| data[q]).collect();
    let mut sites = Vec::new();
    {
        let mut shot = runner.start(PauliFrame::new(runner.n_total()), Recorder(&mut sites), false)?;
        runner.observe_round(&mut shot)?;
    }
    // Probability that a site's Pauli anticommutes with the Z check.
    let mut keep = 1.0;
    for site in &sites {
        let hits = |q: &usize| support.contains(q);
        let p = match *site {
            NoiseSite::Gate1(q) if hits(&q) && noise.enabled(Channel::Gate1) => noise.p1 * 2.0 / 3.0,
            NoiseSite::Gate2(a, b) if (hits(&a) || hits(&b)) && noise.enabled(Channel::Gate2) => noise.p2 * 8.0 / 15.0,
            NoiseSite::Idle(q, t) if hits(&q) && noise.enabled(Channel::Idle) => {
                let [px, py, _] = idle_probabilities(t, noise.t1_us, noise.t2_us)?;
                px + py
            }
            _ => 0.0,
        };
        keep *= 1.0 - p;
    }
    let q_flip = 1.0 - keep;
    let (mut wrong, mut total) = (0u64, 0u64);
    for s in 0..shots {
        let faults = SampledNoise::new(noise, shot_rng(seed, s, Stream::Noise));
        let mut shot = runner.start(PauliFrame::new(runner.n_total()), faults, false)?;
        let rec = runner.observe_round(&mut shot)?;
        let m = rec.outcome.syndrome.bits();
        let t = rec.truth.bits();
        wrong += m.iter().zip(&t).filter(|(a, b)| a != b).count() as u64;
        total += m.len() as u64;
    }
    let r_obs = if total == 0 { 0.0 } else { wrong as f64 / total as f64 };
    HmmParams::new(q_flip, r_obs, 1.0 - q_flip)
}

struct Recorder<'a>(&'a mut Vec<NoiseSite>);

impl crate::circuit::FaultSource for Recorder<'_> {
    fn fault(&mut self, _index: u64, site: &NoiseSite) -> crate::circuit::Fault {
        self.0.push(*site);
        crate::circuit::Fault::None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    /// Fraction of (round, stabilizer) decisions equal to the hidden truth.
    pub accuracy: f64,
    pub mean_confidence: f64,
}

/// Final-round decisions of every method for one shot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotReport {
    pub shot: usize,
    pub observed_final: Vec<bool>,
    pub hidden_final: Option<Vec<bool>>,
    pub corrected: Vec<(Method, Vec<bool>)>,
    pub confidence: Vec<(Method, Vec<f64>)>,
    /// Rounds where the methods disagree on at least one bit.
    pub disagreement_rounds: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub params: HmmParams,
    pub window: usize,
    pub summaries: Vec<MethodSummary>,
    pub shots: Vec<ShotReport>,
}

/// Runs all three methods on each stream and compares them against the
/// hidden truth.
pub fn compare_methods(streams: &[SyndromeStream], params: &HmmParams, window: usize) -> Result<ComparisonReport> {
    let mut correct = [0u64; 3];
    let mut conf_sum = [0.0f64; 3];
    let mut count = 0u64;
    let mut shots = Vec::new();
    for (i, stream) in streams.iter().enumerate() {
        let Some(truth) = &stream.hidden_truth else {
            return invalid(format!("stream {i} has no hidden truth"));
        };
        let decs: Vec<Vec<TemporalDecision>> = Method::ALL
            .iter()
            .map(|&m| decode(m, stream, params, window))
            .collect::<Result<_>>()?;
        for (k, d) in decs.iter().enumerate() {
            for (t, dec) in d.iter().enumerate() {
                correct[k] += dec.corrected_bits.iter().zip(&truth[t]).filter(|(a, b)| a == b).count() as u64;
                conf_sum[k] += dec.confidence.iter().sum::<f64>();
            }
        }
        count += (stream.rounds() * stream.width()) as u64;
        let disagreement_rounds = (0..stream.rounds())
            .filter(|&t| decs.iter().any(|d| d[t].corrected_bits != decs[0][t].corrected_bits))
            .collect();
        let last = stream.rounds().saturating_sub(1);
        shots.push(ShotReport {
            shot: i,
            observed_final: stream.observations.get(last).cloned().unwrap_or_default(),
            hidden_final: truth.get(last).cloned(),
            corrected: Method::ALL
                .iter()
                .zip(&decs)
                .map(|(&m, d)| (m, d.get(last).map(|x| x.corrected_bits.clone()).unwrap_or_default()))
                .collect(),
            confidence: Method::ALL
                .iter()
                .zip(&decs)
                .map(|(&m, d)| (m, d.get(last).map(|x| x.confidence.clone()).unwrap_or_default()))
                .collect(),
            disagreement_rounds,
        });
    }
    let den = count.max(1) as f64;
    Ok(ComparisonReport {
        params: *params,
        window,
        summaries: Method::ALL
            .iter()
            .enumerate()
            .map(|(k, &method)| MethodSummary {
                method,
                accuracy: if count == 0 { 1.0 } else { correct[k] as f64 / den },
                mean_confidence: if count == 0 { 1.0 } else { conf_sum[k] / den },
            })
            .collect(),
        shots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream(col: &[u8]) -> SyndromeStream {
        SyndromeStream::new(col.iter().map(|&b| vec![b == 1]).collect(), None).unwrap()
    }

    #[test]
    fn majority_examples() {
        let d = majority_vote(&stream(&[1, 1, 1]), 3).unwrap();
        assert_eq!((d[2].corrected_bits[0], d[2].confidence[0]), (true, 1.0));
        let d = majority_vote(&stream(&[1, 0, 1]), 3).unwrap();
        assert!(d[2].corrected_bits[0]);
        assert!((d[2].confidence[0] - 2.0 / 3.0).abs() < 1e-12);
        // Round 1 sees 1,0: a tie keeps the previous bit.
        assert!(d[1].corrected_bits[0]);
        let d = majority_vote(&stream(&[0, 1]), 2).unwrap();
        assert!(!d[1].corrected_bits[0]);
        assert!(majority_vote(&SyndromeStream::new(vec![], None).unwrap(), 3).is_err());
        assert!(majority_vote(&stream(&[1]), 0).is_err());
    }

    #[test]
    fn viterbi_trivial_cases() {
        let p = HmmParams::new(0.05, 0.0, 0.5).unwrap();
        let obs = [true, false, false, true, true];
        let (path, conf) = viterbi_path(&obs, &p);
        assert_eq!(path, obs);
        assert!(conf.iter().all(|&c| (c - 1.0).abs() < 1e-12));
        let p = HmmParams::new(0.01, 0.1, 0.9).unwrap();
        assert!(viterbi_path(&[false; 10], &p).0.iter().all(|&b| !b));
        assert_eq!(viterbi_path(&[], &p).0.len(), 0);
    }

    #[test]
    fn bayes_by_hand() {
        let mut f = BayesFilter::new(HmmParams::new(0.0, 0.1, 0.5).unwrap());
        let (bit, conf) = f.step(true);
        assert!(bit);
        assert!((conf - 0.9).abs() < 1e-12);
        let mut f = BayesFilter::new(HmmParams::new(0.2, 0.0, 1.0).unwrap());
        assert_eq!(f.step(false), (false, 1.0));
        assert_eq!(f.posterior(), Some([1.0, 0.0]));
    }

    #[test]
    fn bayes_plateau_on_constant_stream() {
        let p = HmmParams::new(0.02, 0.1, 0.5).unwrap();
        let d = bayes_filter(&stream(&[1; 30]), &p).unwrap();
        let c: Vec<f64> = d.iter().map(|x| x.confidence[0]).collect();
        assert!(c.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!(c[29] > 0.9 && c[29] < 1.0);
    }

    #[test]
    fn adaptive_acceptance_waits_for_confidence() {
        let p = HmmParams::new(0.02, 0.1, 0.5).unwrap();
        let mut a = AdaptiveAcceptance::new(2, p, AdaptiveAcceptance::DEFAULT_THRESHOLD, 10);
        assert_eq!(a.push(&[true, false]).unwrap(), Verdict::NeedMore);
        let mut v = Verdict::NeedMore;
        for _ in 0..5 {
            v = a.push(&[true, false]).unwrap();
            if v != Verdict::NeedMore {
                break;
            }
        }
        assert!(matches!(v, Verdict::Accept { ref bits, .. } if bits == &vec![true, false]));
        let mut a = AdaptiveAcceptance::new(1, p, 0.999_999, 2);
        a.push(&[true]).unwrap();
        assert!(matches!(a.push(&[false]).unwrap(), Verdict::GiveUp { .. }));
        assert!(a.push(&[true, true]).is_err());
    }

    #[test]
    fn ambiguous_tail_is_flagged() {
        let p = HmmParams::new(0.3, 0.25, 0.5).unwrap();
        let s = SyndromeStream::new(
            [0, 0, 0, 0, 1, 0, 1, 0, 1].iter().map(|&b| vec![b == 1]).collect(),
            Some(vec![vec![false]; 9]),
        )
        .unwrap();
        let rep = compare_methods(&[s], &p, 3).unwrap();
        let last = &rep.shots[0];
        assert!(last.confidence.iter().any(|(_, c)| c[0] < 0.75));
    }

    #[test]
    fn noiseless_streams_agree() {
        let s = SyndromeStream::new(vec![vec![false, true]; 8], Some(vec![vec![false, true]; 8])).unwrap();
        let rep = compare_methods(&[s.clone(), s], &HmmParams::default(), 3).unwrap();
        assert!(rep.summaries.iter().all(|m| m.accuracy == 1.0));
        assert!(rep.shots.iter().all(|r| r.disagreement_rounds.is_empty()));
    }

    #[test]
    fn fitted_params() {
        let code = crate::css::steane_code();
        let cfg = SchedulerConfig::new(crate::circuit::scheduler::Mode::Standard, crate::circuit::scheduler::Readout::Sequential, 1);
        let p = fit_default_params(&code, &cfg, &NoiseModel::noiseless(), 200, 1).unwrap();
        assert_eq!((p.q_flip, p.r_obs), (0.0, 0.0));
        let meas_only = NoiseModel::default().with_channels(&[Channel::Meas]);
        let p = fit_default_params(&code, &cfg, &meas_only, 10_000, 1).unwrap();
        assert_eq!(p.q_flip, 0.0);
        assert!((p.r_obs - 0.015).abs() < 0.003, "{p:?}");
        let p = fit_default_params(&code, &SchedulerConfig::default(), &NoiseModel::default(), 2000, 1).unwrap();
        assert!(p.q_flip > 0.0 && p.q_flip < 0.1 && p.r_obs > 0.0 && p.r_obs < 0.1, "{p:?}");
    }
}
