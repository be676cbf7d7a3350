//! Executes the error-correction cycle shot by shot with classical control:
//! ancilla preparation retries, correct-and-reverify, logical SWAP, fallback
//! to bare-ancilla extraction, decoding and ideal-decoder ground truth.

use serde::{Deserialize, Serialize};

use crate::circuit::builders::{build_encoder, AncillaBasis, AncillaCheckBits, StabType};
use crate::circuit::exec::{Backend, Executor, Fault, FaultSource};
use crate::circuit::ir::{Circuit, Instruction, NoiseSite};
use crate::circuit::scheduler::{
    DecodeScope, Mode, PrepKind, Readout, RoundPlan, SchedulerConfig, Step,
};
use crate::css::{CssCode, Syndrome};
use crate::error::Result;
use crate::noise::{instrument, NoiseModel};
use crate::pauli::{Pauli, PauliString};
use crate::tableau::CliffordGate;

/// Fault source defined by a closure over `(site index, site)`.
pub struct FnFaults<G>(pub G);

impl<G: FnMut(u64, &NoiseSite) -> Fault> FaultSource for FnFaults<G> {
    fn fault(&mut self, index: u64, site: &NoiseSite) -> Fault {
        (self.0)(index, site)
    }
}

/// Counters for ancilla preparation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrepStats {
    /// Preparation + verification attempts.
    pub attempts: u64,
    /// Attempts whose first verification passed.
    pub accepted_attempts: u64,
    /// Ancilla requests (one per prep step).
    pub requests: u64,
    /// Requests that produced a verified ancilla within the attempt budget.
    pub successes: u64,
    /// Failed verifications, including failed re-verifications.
    pub verification_failures: u64,
    /// Successes that needed correct-and-reverify.
    pub corrected: u64,
    pub swaps: u64,
    /// Extractions that fell back to bare ancillas.
    pub fallbacks: u64,
    /// Accepted cat states.
    pub accepted_cats: u64,
    /// Accepted cat states carrying an X error of weight >= 2 up to the
    /// global flip (the errors that would spread to data).
    pub bad_accepted_cats: u64,
}

impl PrepStats {
    pub fn merge(&mut self, o: &PrepStats) {
        self.attempts += o.attempts;
        self.accepted_attempts += o.accepted_attempts;
        self.requests += o.requests;
        self.successes += o.successes;
        self.verification_failures += o.verification_failures;
        self.corrected += o.corrected;
        self.swaps += o.swaps;
        self.fallbacks += o.fallbacks;
        self.accepted_cats += o.accepted_cats;
        self.bad_accepted_cats += o.bad_accepted_cats;
    }

    /// Per-attempt acceptance for cat states, per-request success within
    /// the attempt budget for encoded ancillas. 1.0 when nothing was
    /// prepared.
    pub fn success_rate(&self, mode: Mode) -> f64 {
        let (num, den) = match mode {
            Mode::Cat => (self.accepted_attempts, self.attempts),
            _ => (self.successes, self.requests),
        };
        if den == 0 {
            1.0
        } else {
            num as f64 / den as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AncillaMetrics {
    pub prep_success_rate: f64,
    pub verification_failures: u64,
}

/// Result of one round of syndrome extraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionOutcome {
    /// Bits used for decoding.
    pub syndrome: Syndrome,
    /// Whether every ancilla used this round passed verification.
    pub accepted: bool,
    pub attempts_used: u64,
    pub ancilla_metrics: AncillaMetrics,
}

/// Everything recorded about one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub outcome: ExtractionOutcome,
    /// Ideal syndrome of the data at each decode point.
    pub truth: Syndrome,
    pub prep: PrepStats,
    /// Ideal-decoded logical class changed during this round.
    pub logical_flip: bool,
}

/// Outcome of one preparation request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrepResult {
    Ready,
    /// Accepted after correcting a detected error and re-verifying.
    Corrected,
    /// No verified ancilla within budget.
    Exhausted,
}

/// Transversal logical layers between rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogicalLayer {
    X,
    Z,
    H,
    S,
    /// Noise sites on every data qubit, no gates (T-gate locations).
    TNoise,
}

impl LogicalLayer {
    pub const CLIFFORD: [LogicalLayer; 4] = [LogicalLayer::X, LogicalLayer::Z, LogicalLayer::H, LogicalLayer::S];
}

struct CompiledPrep {
    circuit: Circuit,
    verify: Option<Circuit>,
}

struct Compiled {
    plan: RoundPlan,
    preps: Vec<CompiledPrep>,
    extracts: Vec<Circuit>,
    fallbacks: Vec<Circuit>,
    swap: Option<Circuit>,
    z_stabs: Vec<PauliString>,
    x_stabs: Vec<PauliString>,
}

impl Compiled {
    fn new(code: &CssCode, plan: RoundPlan, noise: &NoiseModel) -> Result<Self> {
        let n_total = plan.layout.n_total;
        let data = plan.layout.data.clone();
        let preps = plan
            .preps
            .iter()
            .map(|p| {
                Ok(CompiledPrep {
                    circuit: instrument(&p.circuit, noise)?,
                    verify: match &p.kind {
                        PrepKind::Encoded { verify, .. } => Some(instrument(verify, noise)?),
                        PrepKind::Cat { .. } => None,
                    },
                })
            })
            .collect::<Result<_>>()?;
        let extracts = plan
            .extracts
            .iter()
            .map(|u| instrument(&u.circuit, noise))
            .collect::<Result<_>>()?;
        let fallbacks = plan
            .fallbacks
            .iter()
            .map(|u| instrument(&u.circuit, noise))
            .collect::<Result<_>>()?;
        let swap = plan.swap.as_ref().map(|s| instrument(s, noise)).transpose()?;
        let embed = |p: PauliString| p.embed(n_total, &data);
        Ok(Self {
            z_stabs: (0..code.hz.rows()).map(|i| embed(code.z_stabilizer(i))).collect(),
            x_stabs: (0..code.hx.rows()).map(|i| embed(code.x_stabilizer(i))).collect(),
            plan,
            preps,
            extracts,
            fallbacks,
            swap,
        })
    }
}

/// Per-shot mutable state.
pub struct Shot<B, F> {
    pub exec: Executor<B, F>,
    /// Data and first ancilla block exchanged by a logical SWAP.
    pub swapped: bool,
    /// Logical operator (code-local) whose +1 eigenstate the data holds.
    pub tracked: PauliString,
    /// Logical class after ideal decoding at the end of the last round.
    pub class: bool,
    pub round: usize,
    /// Latest result of each prep unit in the current round.
    last_prep: Vec<Option<PrepResult>>,
}

/// Compiled error-correction cycle for one code, configuration and noise
/// model. Circuits are instrumented once and shared by every shot.
pub struct CycleRunner<'a> {
    code: &'a CssCode,
    config: SchedulerConfig,
    noise: NoiseModel,
    compiled: Vec<Compiled>,
    encoder: Circuit,
    check_bits: AncillaCheckBits,
}

impl<'a> CycleRunner<'a> {
    pub fn new(code: &'a CssCode, config: &SchedulerConfig, noise: &NoiseModel) -> Result<Self> {
        noise.validate()?;
        let mut compiled = vec![Compiled::new(code, RoundPlan::new(code, config)?, noise)?];
        if config.mode == Mode::Steane && config.swap_policy {
            compiled.push(Compiled::new(code, RoundPlan::swapped(code, config)?, noise)?);
        }
        Ok(Self {
            code,
            config: config.clone(),
            noise: noise.clone(),
            compiled,
            encoder: build_encoder(code)?,
            check_bits: AncillaCheckBits::of(code),
        })
    }

    pub fn config(&self) -> &SchedulerConfig {
        &self.config
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn plan(&self) -> &RoundPlan {
        &self.compiled[0].plan
    }

    pub fn n_total(&self) -> usize {
        self.plan().layout.n_total
    }

    fn current<B, F>(&self, shot: &Shot<B, F>) -> &Compiled {
        &self.compiled[shot.swapped as usize]
    }

    /// Fresh shot with the data block in `|0_L>` (or `|+_L>` when `plus`)
    /// prepared without noise.
    pub fn start<B: Backend, F: FaultSource>(&self, backend: B, faults: F, plus: bool) -> Result<Shot<B, F>> {
        let mut exec = Executor::new(backend, crate::circuit::exec::Noiseless);
        let data = &self.plan().layout.data;
        exec.run(&self.encoder, data)?;
        let mut tracked = self.code.logical_z.clone();
        if plus {
            for &q in data {
                exec.backend.gate(CliffordGate::H(q));
            }
            for q in 0..self.code.n {
                tracked.conjugate_by(CliffordGate::H(q));
            }
        }
        let Executor { backend, .. } = exec;
        Ok(Shot {
            exec: Executor::new(backend, faults),
            swapped: false,
            tracked,
            class: false,
            round: 0,
            last_prep: Vec::new(),
        })
    }

    /// Applies a transversal logical layer to the data (noisy) and updates
    /// the tracked logical.
    pub fn apply_layer<B: Backend, F: FaultSource>(&self, shot: &mut Shot<B, F>, layer: LogicalLayer) -> Result<()> {
        let comp = self.current(shot);
        let data = &comp.plan.layout.data;
        let mut c = Circuit::new(comp.plan.layout.n_total, 0);
        for (i, &q) in data.iter().enumerate() {
            let g: fn(usize) -> CliffordGate = match layer {
                LogicalLayer::X => CliffordGate::X,
                LogicalLayer::Z => CliffordGate::Z,
                LogicalLayer::H => CliffordGate::H,
                LogicalLayer::S => CliffordGate::S,
                LogicalLayer::TNoise => {
                    c.push(Instruction::Noise(NoiseSite::Gate1(q)));
                    continue;
                }
            };
            c.gate(g(q));
            shot.tracked.conjugate_by(g(i));
        }
        let c = if layer == LogicalLayer::TNoise {
            c
        } else {
            instrument(&c, &self.noise)?
        };
        shot.exec.run_direct(&c)?;
        Ok(())
    }

    /// One full round of the cycle.
    pub fn round<B: Backend, F: FaultSource>(&self, shot: &mut Shot<B, F>) -> Result<RoundRecord> {
        self.round_impl(shot, true)
    }

    /// A round that extracts but never corrects: errors accumulate and the
    /// record's truth is the syndrome of the accumulated data error.
    pub fn observe_round<B: Backend, F: FaultSource>(&self, shot: &mut Shot<B, F>) -> Result<RoundRecord> {
        self.round_impl(shot, false)
    }

    fn round_impl<B: Backend, F: FaultSource>(&self, shot: &mut Shot<B, F>, decode: bool) -> Result<RoundRecord> {
        let mz = self.code.hz.rows();
        let mx = self.code.hx.rows();
        let mut measured = Syndrome {
            z_bits: vec![false; mz],
            x_bits: vec![false; mx],
            round: shot.round,
        };
        let mut truth = measured.clone();
        shot.last_prep.clear();
        shot.last_prep.resize(self.current(shot).plan.preps.len(), None);
        let mut stats = PrepStats::default();
        let mut accepted = true;
        let steps = self.current(shot).plan.steps.clone();
        let mut segment = Vec::new();
        for step in steps {
            match step {
                Step::Decode(scope) => {
                    let mut use_z = decode && scope != DecodeScope::XChecks;
                    let mut use_x = decode && scope != DecodeScope::ZChecks;
                    let nonzero = (use_z && measured.z_bits.iter().any(|&b| b))
                        || (use_x && measured.x_bits.iter().any(|&b| b));
                    if self.config.confirm_syndrome && nonzero {
                        let mut again = measured.clone();
                        accepted &= self.run_segment(shot, &segment, &mut again, &mut stats)?;
                        if use_z && again.z_bits != measured.z_bits {
                            measured.z_bits.fill(false);
                            use_z = false;
                        }
                        if use_x && again.x_bits != measured.x_bits {
                            measured.x_bits.fill(false);
                            use_x = false;
                        }
                    }
                    let comp = self.current(shot);
                    let data = comp.plan.layout.data.clone();
                    if scope != DecodeScope::XChecks {
                        truth.z_bits = self.ideal_bits(shot, &comp.z_stabs)?;
                    }
                    if scope != DecodeScope::ZChecks {
                        truth.x_bits = self.ideal_bits(shot, &comp.x_stabs)?;
                    }
                    if use_z {
                        let corr = self.code.decoder.decode_x_errors(&measured.z_bits).to_vec();
                        apply_correction(shot, &data, &corr, Pauli::X);
                    }
                    if use_x {
                        let corr = self.code.decoder.decode_z_errors(&measured.x_bits).to_vec();
                        apply_correction(shot, &data, &corr, Pauli::Z);
                    }
                    segment.clear();
                }
                other => {
                    accepted &= self.run_segment(shot, &[other], &mut measured, &mut stats)?;
                    segment.push(other);
                }
            }
        }
        let class = self.ideal_class(shot)?;
        let logical_flip = class != shot.class;
        shot.class = class;
        shot.round += 1;
        let rate = stats.success_rate(self.config.mode);
        Ok(RoundRecord {
            outcome: ExtractionOutcome {
                syndrome: measured,
                accepted,
                attempts_used: stats.attempts,
                ancilla_metrics: AncillaMetrics {
                    prep_success_rate: rate,
                    verification_failures: stats.verification_failures,
                },
            },
            truth,
            prep: stats,
            logical_flip,
        })
    }

    /// Runs prep and extract steps, writing syndrome bits into `measured`.
    /// Returns false if any preparation exhausted its attempts.
    fn run_segment<B: Backend, F: FaultSource>(
        &self,
        shot: &mut Shot<B, F>,
        steps: &[Step],
        measured: &mut Syndrome,
        stats: &mut PrepStats,
    ) -> Result<bool> {
        let mut ok = true;
        for &step in steps {
            match step {
                Step::Prep(i) => {
                    let r = self.prepare(shot, i, stats)?;
                    ok &= r != PrepResult::Exhausted;
                    shot.last_prep[i] = Some(r);
                }
                Step::Extract(i) => {
                    let comp = self.current(shot);
                    let unit = &comp.plan.extracts[i];
                    let exhausted = unit.prep.and_then(|p| shot.last_prep[p])
                        == Some(PrepResult::Exhausted);
                    if exhausted && !unit.fallback.is_empty() {
                        stats.fallbacks += 1;
                        for &f in &unit.fallback {
                            let bits = shot.exec.run_direct(&comp.fallbacks[f])?;
                            write_bits(measured, &comp.plan.fallbacks[f].outputs, &bits);
                        }
                    } else {
                        let bits = shot.exec.run_direct(&comp.extracts[i])?;
                        write_bits(measured, &unit.outputs, &bits);
                    }
                }
                Step::Decode(_) => {}
            }
        }
        Ok(ok)
    }

    fn ideal_bits<B: Backend, F>(&self, shot: &Shot<B, F>, stabs: &[PauliString]) -> Result<Vec<bool>> {
        stabs
            .iter()
            .map(|s| {
                shot.exec
                    .backend
                    .flipped(s)
                    .ok_or_else(|| crate::Error::InvalidArgument("data left the stabilizer code space".into()))
            })
            .collect()
    }

    /// Logical class of the data after a noiseless ideal decode: whether the
    /// tracked logical would read -1.
    pub fn ideal_class<B: Backend, F>(&self, shot: &Shot<B, F>) -> Result<bool> {
        let comp = self.current(shot);
        let data = &comp.plan.layout.data;
        let syn = Syndrome {
            z_bits: self.ideal_bits(shot, &comp.z_stabs)?,
            x_bits: self.ideal_bits(shot, &comp.x_stabs)?,
            round: 0,
        };
        let corr = self.code.decode(&syn);
        let n_total = comp.plan.layout.n_total;
        let l = shot.tracked.embed(n_total, data);
        let base = shot
            .exec
            .backend
            .flipped(&l)
            .ok_or_else(|| crate::Error::InvalidArgument("logical operator not determined".into()))?;
        Ok(base ^ !corr.commutes(&shot.tracked)?)
    }

    /// Preparation with retries, correct-and-reverify and the swap policy.
    fn prepare<B: Backend, F: FaultSource>(&self, shot: &mut Shot<B, F>, i: usize, stats: &mut PrepStats) -> Result<PrepResult> {
        stats.requests += 1;
        let r = self.try_prepare(shot, i, stats, self.config.max_prep_attempts)?;
        if r != PrepResult::Exhausted {
            stats.successes += 1;
            return Ok(r);
        }
        let can_swap = self.config.swap_policy && !shot.swapped && self.current(shot).swap.is_some();
        if can_swap && self.current(shot).plan.extracts.iter().any(|e| e.prep == Some(i)) {
            let swap = self.current(shot).swap.as_ref().expect("checked").clone();
            shot.exec.run_direct(&swap)?;
            shot.swapped = true;
            stats.swaps += 1;
            let r = self.try_prepare(shot, i, stats, 1)?;
            if r != PrepResult::Exhausted {
                stats.successes += 1;
            }
            return Ok(r);
        }
        Ok(PrepResult::Exhausted)
    }

    fn try_prepare<B: Backend, F: FaultSource>(
        &self,
        shot: &mut Shot<B, F>,
        i: usize,
        stats: &mut PrepStats,
        attempts: usize,
    ) -> Result<PrepResult> {
        for _ in 0..attempts {
            let comp = self.current(shot);
            let bits = shot.exec.run_direct(&comp.preps[i].circuit)?;
            stats.attempts += 1;
            if bits.iter().all(|b| !b) {
                stats.accepted_attempts += 1;
                if let PrepKind::Cat { core } = &comp.plan.preps[i].kind {
                    stats.accepted_cats += 1;
                    if cat_x_error_weight(&shot.exec.backend, core, comp.plan.layout.n_total)? >= 2 {
                        stats.bad_accepted_cats += 1;
                    }
                }
                return Ok(PrepResult::Ready);
            }
            stats.verification_failures += 1;
            let PrepKind::Encoded { block, .. } = &comp.plan.preps[i].kind else {
                continue;
            };
            let cb = self.check_bits;
            let zb = &bits[cb.z_range()];
            let xb = &bits[cb.x_range()];
            if zb.iter().chain(xb).all(|b| !b) {
                continue;
            }
            let block = block.clone();
            let xc = self.code.decoder.decode_x_errors(zb).to_vec();
            let zc = self.code.decoder.decode_z_errors(xb).to_vec();
            apply_correction(shot, &block, &xc, Pauli::X);
            apply_correction(shot, &block, &zc, Pauli::Z);
            let verify = comp.preps[i].verify.as_ref().expect("encoded prep has a verifier");
            let again = shot.exec.run_direct(verify)?;
            if again.iter().all(|b| !b) {
                stats.corrected += 1;
                return Ok(PrepResult::Corrected);
            }
            stats.verification_failures += 1;
        }
        Ok(PrepResult::Exhausted)
    }
}

/// Weight of the X error on a cat state modulo the global flip, read from
/// the `Z_j Z_{j+1}` stabilizers.
fn cat_x_error_weight<B: Backend>(b: &B, core: &[usize], n_total: usize) -> Result<usize> {
    let mut e = false;
    let mut ones = 0;
    for pair in core.windows(2) {
        let zz = PauliString::on_support(n_total, pair, Pauli::Z);
        e ^= b
            .flipped(&zz)
            .ok_or_else(|| crate::Error::InvalidArgument("cat parity not determined".into()))?;
        ones += e as usize;
    }
    Ok(ones.min(core.len() - ones))
}

fn write_bits(s: &mut Syndrome, outputs: &[crate::circuit::scheduler::SyndromeBit], bits: &[bool]) {
    for o in outputs {
        match o.stab_type {
            StabType::Z => s.z_bits[o.index] = bits[o.clbit],
            StabType::X => s.x_bits[o.index] = bits[o.clbit],
        }
    }
}

fn apply_correction<B: Backend, F>(shot: &mut Shot<B, F>, block: &[usize], corr: &[bool], p: Pauli) {
    for (q, _) in corr.iter().enumerate().filter(|(_, b)| **b) {
        shot.exec.backend.pauli(block[q], p);
    }
}

/// Worst case of [`fault_containment`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    /// Noise sites in one round.
    pub locations: u64,
    /// Faults simulated (every Pauli at every site).
    pub faults: u64,
    /// Largest data error weight, up to stabilizers, left by one fault.
    pub max_weight: usize,
    /// Site index of the first fault reaching `max_weight`.
    pub worst_site: u64,
}

/// Injects every possible single fault into one extraction round (decoding
/// skipped) and measures the weight of the resulting data error.
pub fn fault_containment(code: &CssCode, config: &SchedulerConfig, noise: &NoiseModel) -> Result<ContainmentReport> {
    use crate::circuit::exec::{possible_faults, InjectedFault};
    use crate::circuit::frame::PauliFrame;

    let runner = CycleRunner::new(code, config, noise)?;
    let n_total = runner.n_total();
    let mut sites = Vec::new();
    {
        let mut shot = runner.start(PauliFrame::new(n_total), RecordSites(&mut sites), false)?;
        runner.round_impl(&mut shot, false)?;
    }
    let mut report = ContainmentReport {
        locations: sites.len() as u64,
        faults: 0,
        max_weight: 0,
        worst_site: 0,
    };
    for (idx, site) in sites.iter().enumerate() {
        for fault in possible_faults(site) {
            let inj = InjectedFault { site: idx as u64, fault };
            let mut shot = runner.start(PauliFrame::new(n_total), inj, false)?;
            runner.round_impl(&mut shot, false)?;
            let data = &runner.current(&shot).plan.layout.data;
            let w = code.reduced_weight(&shot.exec.backend.to_pauli_string().restrict(data));
            report.faults += 1;
            if w > report.max_weight {
                report.max_weight = w;
                report.worst_site = idx as u64;
            }
        }
    }
    Ok(report)
}

struct RecordSites<'a>(&'a mut Vec<NoiseSite>);

impl FaultSource for RecordSites<'_> {
    fn fault(&mut self, _index: u64, site: &NoiseSite) -> Fault {
        self.0.push(*site);
        Fault::None
    }
}

/// Report of [`run_prep_with_policy`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrepReport {
    pub result: PrepResult,
    pub attempts_used: u64,
    pub prep_success_rate: f64,
    pub verification_failures: u64,
    pub swapped: bool,
}

/// Prepares one verified encoded ancilla next to a data block in `|0_L>`
/// (steane sequential layout). Returns the report and the final backend.
pub fn run_prep_with_policy<B: Backend, F: FaultSource>(
    code: &CssCode,
    basis: AncillaBasis,
    max_attempts: usize,
    swap_policy: bool,
    noise: &NoiseModel,
    backend: B,
    faults: F,
) -> Result<(PrepReport, B)> {
    let config = SchedulerConfig {
        max_prep_attempts: max_attempts,
        swap_policy,
        ..SchedulerConfig::new(Mode::Steane, Readout::Sequential, 1)
    };
    let runner = CycleRunner::new(code, &config, noise)?;
    let mut shot = runner.start(backend, faults, false)?;
    let i = runner
        .plan()
        .preps
        .iter()
        .position(|p| matches!(&p.kind, PrepKind::Encoded { basis: b, .. } if *b == basis))
        .expect("steane plan prepares both bases");
    let mut stats = PrepStats::default();
    let result = runner.prepare(&mut shot, i, &mut stats)?;
    Ok((
        PrepReport {
            result,
            attempts_used: stats.attempts,
            prep_success_rate: stats.success_rate(Mode::Steane),
            verification_failures: stats.verification_failures,
            swapped: shot.swapped,
        },
        shot.exec.backend,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::exec::Noiseless;
    use crate::circuit::frame::PauliFrame;
    use crate::css::steane_code;
    use crate::tableau::StabilizerTableau;

    #[test]
    fn noiseless_rounds_all_modes() {
        let code = steane_code();
        let noise = NoiseModel::noiseless();
        for mode in Mode::ALL {
            for readout in [Readout::Sequential, Readout::Batched] {
                let cfg = SchedulerConfig::new(mode, readout, 3);
                let r = CycleRunner::new(&code, &cfg, &noise).unwrap();
                let t = StabilizerTableau::new(r.n_total(), 9).unwrap();
                let mut shot = r.start(t, Noiseless, false).unwrap();
                for _ in 0..3 {
                    let rec = r.round(&mut shot).unwrap();
                    assert!(rec.outcome.syndrome.is_trivial());
                    assert!(rec.outcome.accepted && !rec.logical_flip);
                    assert_eq!(rec.outcome.ancilla_metrics.prep_success_rate, 1.0);
                }
            }
        }
    }

    #[test]
    fn prep_noiseless_single_attempt() {
        let code = steane_code();
        let noise = NoiseModel::noiseless();
        let t = StabilizerTableau::new(16, 1).unwrap();
        let (rep, _) = run_prep_with_policy(&code, AncillaBasis::ZeroL, 3, false, &noise, t, Noiseless).unwrap();
        assert_eq!(rep.attempts_used, 1);
        assert_eq!(rep.prep_success_rate, 1.0);
        assert_eq!(rep.result, PrepResult::Ready);
    }

    #[test]
    fn forced_failures_exhaust_or_swap() {
        let code = steane_code();
        let noise = NoiseModel::default();
        // XX after the last encoder CNOT of the ancilla block (block starts
        // at qubit 7) every time: a weight-2 error the lookup miscorrects.
        let enc = build_encoder(&code).unwrap();
        let Some(&Instruction::Gate(CliffordGate::Cnot(a, b))) = enc.instructions.last() else {
            panic!("encoder layout changed");
        };
        let (a, b) = (a + 7, b + 7);
        let inject = move |_: u64, s: &NoiseSite| match *s {
            NoiseSite::Gate2(x, y) if (x, y) == (a, b) => Fault::Two(Pauli::X, Pauli::X),
            _ => Fault::None,
        };
        let t = PauliFrame::new(16);
        let (rep, _) =
            run_prep_with_policy(&code, AncillaBasis::ZeroL, 3, false, &noise, t, FnFaults(inject))
                .unwrap();
        assert_eq!(rep.result, PrepResult::Exhausted);
        assert_eq!(rep.attempts_used, 3);
        assert_eq!(rep.prep_success_rate, 0.0);
        let t = PauliFrame::new(16);
        let (rep, _) =
            run_prep_with_policy(&code, AncillaBasis::ZeroL, 3, true, &noise, t, FnFaults(inject))
                .unwrap();
        assert!(rep.swapped);
        // After the swap the ancilla lives on qubits 0..7, away from the
        // injected pair.
        assert_eq!(rep.result, PrepResult::Ready);
        assert_eq!(rep.attempts_used, 4);
    }

    #[test]
    fn frame_and_tableau_agree_per_shot() {
        use crate::rng::{shot_rng, Stream};
        let code = steane_code();
        let noise = NoiseModel::from_pphys(3e-3, crate::noise::SweepConvention::UNIFORM).unwrap();
        for mode in Mode::ALL {
            let cfg = SchedulerConfig::new(mode, Readout::Sequential, 4);
            let r = CycleRunner::new(&code, &cfg, &noise).unwrap();
            for s in 0..40u64 {
                let f1 = crate::noise::SampledNoise::new(&noise, shot_rng(5, s, Stream::Noise));
                let f2 = crate::noise::SampledNoise::new(&noise, shot_rng(5, s, Stream::Noise));
                let mut a = r.start(StabilizerTableau::new(r.n_total(), s).unwrap(), f1, s % 2 == 1).unwrap();
                let mut b = r.start(PauliFrame::new(r.n_total()), f2, s % 2 == 1).unwrap();
                for _ in 0..4 {
                    let ra = r.round(&mut a).unwrap();
                    let rb = r.round(&mut b).unwrap();
                    assert_eq!(ra, rb, "{mode} shot {s}");
                }
            }
        }
    }

    #[test]
    fn single_faults_contained_except_standard() {
        let code = steane_code();
        let noise = NoiseModel::default();
        for (mode, readout) in [(Mode::Cat, Readout::Sequential), (Mode::Steane, Readout::Sequential), (Mode::Steane, Readout::Batched)] {
            let cfg = SchedulerConfig::new(mode, readout, 1);
            let rep = fault_containment(&code, &cfg, &noise).unwrap();
            assert!(rep.max_weight <= 1, "{mode} {readout:?}: {rep:?}");
            assert!(rep.locations > 50);
        }
        let cfg = SchedulerConfig::new(Mode::Standard, Readout::Sequential, 1);
        assert!(fault_containment(&code, &cfg, &noise).unwrap().max_weight >= 2);
    }

    #[test]
    fn logical_layers_tracked() {
        let code = steane_code();
        let noise = NoiseModel::noiseless();
        let cfg = SchedulerConfig::new(Mode::Steane, Readout::Sequential, 1);
        let r = CycleRunner::new(&code, &cfg, &noise).unwrap();
        let t = StabilizerTableau::new(r.n_total(), 2).unwrap();
        let mut shot = r.start(t, Noiseless, false).unwrap();
        for layer in [LogicalLayer::H, LogicalLayer::S, LogicalLayer::X, LogicalLayer::TNoise, LogicalLayer::Z, LogicalLayer::H] {
            r.apply_layer(&mut shot, layer).unwrap();
            let rec = r.round(&mut shot).unwrap();
            assert!(!rec.logical_flip, "{layer:?}");
            assert!(rec.outcome.syndrome.is_trivial());
        }
    }
}
