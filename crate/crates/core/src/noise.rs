//! Stochastic Pauli noise: depolarizing gate errors, readout flips and
//! Pauli-twirled idle decoherence, plus placement of noise sites in circuits.

use std::collections::BTreeSet;

use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::exec::{Fault, FaultSource};
use crate::circuit::ir::{Circuit, Instruction, NoiseSite};
use crate::error::{invalid, Result};
use crate::pauli::Pauli;
use crate::tableau::CliffordGate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Gate1,
    Gate2,
    Meas,
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateTimes {
    pub one_qubit_us: f64,
    pub two_qubit_us: f64,
    pub meas_us: f64,
}

impl Default for GateTimes {
    fn default() -> Self {
        Self {
            one_qubit_us: 0.05,
            two_qubit_us: 0.3,
            meas_us: 1.0,
        }
    }
}

/// How the three error rates follow a single swept `p_phys`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConvention {
    pub p2_over_p1: f64,
    pub meas_over_p1: f64,
}

impl Default for SweepConvention {
    /// Ratios of the default rates: `p2 = 10 p1`, `p_meas = 15 p1`.
    fn default() -> Self {
        Self {
            p2_over_p1: 10.0,
            meas_over_p1: 15.0,
        }
    }
}

impl SweepConvention {
    pub const UNIFORM: SweepConvention = SweepConvention {
        p2_over_p1: 1.0,
        meas_over_p1: 1.0,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub p_meas: f64,
    pub t1_us: f64,
    pub t2_us: f64,
    #[serde(default)]
    pub gate_times: GateTimes,
    pub channels: BTreeSet<Channel>,
}

impl Default for NoiseModel {
    /// Gate and readout channels at the default transmon-like rates; idle
    /// decoherence is opt-in.
    fn default() -> Self {
        Self {
            p1: 0.001,
            p2: 0.01,
            p_meas: 0.015,
            t1_us: 100.0,
            t2_us: 80.0,
            gate_times: GateTimes::default(),
            channels: [Channel::Gate1, Channel::Gate2, Channel::Meas].into(),
        }
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self {
            p1: 0.0,
            p2: 0.0,
            p_meas: 0.0,
            channels: BTreeSet::new(),
            ..Self::default()
        }
    }

    /// `p1 = p_phys`, other rates scaled by the convention's ratios.
    pub fn from_pphys(p_phys: f64, convention: SweepConvention) -> Result<Self> {
        let m = Self {
            p1: p_phys,
            p2: (p_phys * convention.p2_over_p1).min(1.0),
            p_meas: (p_phys * convention.meas_over_p1).min(1.0),
            ..Self::default()
        };
        m.validate()?;
        Ok(m)
    }

    /// Scale every error probability by `lambda`; T1/T2 stay fixed.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let m = Self {
            p1: self.p1 * lambda,
            p2: self.p2 * lambda,
            p_meas: self.p_meas * lambda,
            ..self.clone()
        };
        m.validate()?;
        Ok(m)
    }

    pub fn with_channels(mut self, channels: &[Channel]) -> Self {
        self.channels = channels.iter().copied().collect();
        self
    }

    pub fn with_idle(mut self) -> Self {
        self.channels.insert(Channel::Idle);
        self
    }

    pub fn enabled(&self, c: Channel) -> bool {
        self.channels.contains(&c)
    }

    pub fn is_noiseless(&self) -> bool {
        let active = |c, p: f64| self.enabled(c) && p > 0.0;
        !(active(Channel::Gate1, self.p1)
            || active(Channel::Gate2, self.p2)
            || active(Channel::Meas, self.p_meas)
            || self.enabled(Channel::Idle))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p1", self.p1), ("p2", self.p2), ("p_meas", self.p_meas)] {
            if !(0.0..=1.0).contains(&p) {
                return invalid(format!("{name} = {p} is not a probability"));
            }
        }
        if self.t1_us <= 0.0 || self.t2_us <= 0.0 {
            return invalid("T1 and T2 must be positive");
        }
        if self.t2_us > 2.0 * self.t1_us {
            return invalid(format!("T2 = {} exceeds 2*T1 = {}", self.t2_us, 2.0 * self.t1_us));
        }
        Ok(())
    }
}

/// Identity with probability `1 - p`, otherwise X, Y or Z uniformly.
pub fn sample_depolarizing_1q(p: f64, rng: &mut ChaCha8Rng) -> Pauli {
    if rng.random::<f64>() < p {
        Pauli::NON_IDENTITY[rng.random_range(0..3usize)]
    } else {
        Pauli::I
    }
}

const PAULI_BY_INDEX: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

/// The `k`-th of the 15 non-identity two-qubit Paulis, `k` in `0..15`.
pub fn two_qubit_pauli(k: usize) -> (Pauli, Pauli) {
    let idx = k + 1;
    (PAULI_BY_INDEX[idx / 4], PAULI_BY_INDEX[idx % 4])
}

/// `(I, I)` with probability `1 - p`, otherwise uniform over the 15
/// non-identity two-qubit Paulis.
pub fn sample_depolarizing_2q(p: f64, rng: &mut ChaCha8Rng) -> (Pauli, Pauli) {
    if rng.random::<f64>() < p {
        two_qubit_pauli(rng.random_range(0..15usize))
    } else {
        (Pauli::I, Pauli::I)
    }
}

pub fn sample_meas_flip(p: f64, rng: &mut ChaCha8Rng) -> bool {
    rng.random::<f64>() < p
}

/// Pauli-twirled amplitude and phase damping over `duration_us`:
/// `[p_x, p_y, p_z]`.
pub fn idle_probabilities(duration_us: f64, t1_us: f64, t2_us: f64) -> Result<[f64; 3]> {
    if duration_us < 0.0 {
        return invalid(format!("negative idle duration {duration_us}"));
    }
    if t2_us > 2.0 * t1_us {
        return invalid(format!("T2 = {t2_us} exceeds 2*T1 = {}", 2.0 * t1_us));
    }
    let amp = -(-duration_us / t1_us).exp_m1();
    let deph = -(-duration_us / t2_us).exp_m1();
    let pxy = amp / 4.0;
    let pz = (deph / 2.0 - amp / 4.0).max(0.0);
    Ok([pxy, pxy, pz])
}

pub fn sample_idle(duration_us: f64, t1_us: f64, t2_us: f64, rng: &mut ChaCha8Rng) -> Result<Pauli> {
    let [px, py, pz] = idle_probabilities(duration_us, t1_us, t2_us)?;
    let u = rng.random::<f64>();
    Ok(if u < px {
        Pauli::X
    } else if u < px + py {
        Pauli::Y
    } else if u < px + py + pz {
        Pauli::Z
    } else {
        Pauli::I
    })
}

/// Fault source drawing from a [`NoiseModel`] with a per-shot generator.
pub struct SampledNoise<'a> {
    model: &'a NoiseModel,
    rng: ChaCha8Rng,
}

impl<'a> SampledNoise<'a> {
    pub fn new(model: &'a NoiseModel, rng: ChaCha8Rng) -> Self {
        Self { model, rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

impl FaultSource for SampledNoise<'_> {
    fn fault(&mut self, _index: u64, site: &NoiseSite) -> Fault {
        let m = self.model;
        match *site {
            NoiseSite::Gate1(_) if m.enabled(Channel::Gate1) => {
                Fault::One(sample_depolarizing_1q(m.p1, &mut self.rng))
            }
            NoiseSite::Gate2(..) if m.enabled(Channel::Gate2) => {
                let (a, b) = sample_depolarizing_2q(m.p2, &mut self.rng);
                Fault::Two(a, b)
            }
            NoiseSite::Meas(_) if m.enabled(Channel::Meas) => {
                if sample_meas_flip(m.p_meas, &mut self.rng) {
                    Fault::Flip
                } else {
                    Fault::None
                }
            }
            NoiseSite::Idle(_, t) if m.enabled(Channel::Idle) => Fault::One(
                sample_idle(t, m.t1_us, m.t2_us, &mut self.rng).expect("model validated"),
            ),
            _ => Fault::None,
        }
    }
}

/// Inserts noise sites: `NOISE1` after each single-qubit gate, `NOISE2`
/// after each CNOT, `MNOISE` before each measurement and, with the idle
/// channel on, `IDLE` for every gap a qubit waits before its next operation.
/// Placement depends only on the circuit and the enabled channels.
pub fn instrument(c: &Circuit, m: &NoiseModel) -> Result<Circuit> {
    if c.instrumented {
        return invalid("circuit already carries noise sites");
    }
    let mut out = Circuit {
        instructions: Vec::with_capacity(c.instructions.len() * 2),
        instrumented: true,
        ..c.clone()
    };
    let idle = m.enabled(Channel::Idle);
    let mut clock: Vec<Option<f64>> = vec![None; c.n_qubits];
    let gt = m.gate_times;
    for inst in &c.instructions {
        if idle && inst.is_operation() {
            let qs = inst.qubits();
            let start = qs.iter().filter_map(|&q| clock[q]).fold(0.0, f64::max);
            let duration = match inst {
                Instruction::Gate(g) if g.is_two_qubit() => gt.two_qubit_us,
                Instruction::Gate(_) | Instruction::CondPauli { .. } => gt.one_qubit_us,
                _ => gt.meas_us,
            };
            for &q in &qs {
                if let Some(t) = clock[q] {
                    if start > t {
                        out.push(Instruction::Noise(NoiseSite::Idle(q, start - t)));
                    }
                }
                clock[q] = Some(start + duration);
            }
        }
        match inst {
            Instruction::Gate(CliffordGate::Cnot(a, b)) => {
                out.push(inst.clone());
                if m.enabled(Channel::Gate2) {
                    out.push(Instruction::Noise(NoiseSite::Gate2(*a, *b)));
                }
            }
            Instruction::Gate(g) => {
                out.push(inst.clone());
                if m.enabled(Channel::Gate1) {
                    out.push(Instruction::Noise(NoiseSite::Gate1(g.qubits()[0])));
                }
            }
            Instruction::Measure { qubit, .. } => {
                if m.enabled(Channel::Meas) {
                    out.push(Instruction::Noise(NoiseSite::Meas(*qubit)));
                }
                out.push(inst.clone());
            }
            _ => out.push(inst.clone()),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn defaults_match_reference_rates() {
        let m = NoiseModel::default();
        assert_eq!((m.p1, m.p2, m.p_meas, m.t1_us, m.t2_us), (0.001, 0.01, 0.015, 100.0, 80.0));
        m.validate().unwrap();
    }

    #[test]
    fn invalid_models_rejected() {
        let mut m = NoiseModel::default();
        m.p2 = 1.5;
        assert!(m.validate().is_err());
        let mut m = NoiseModel::default();
        m.t2_us = 250.0;
        assert!(m.validate().is_err());
    }

    #[test]
    fn proportional_scaling() {
        let base = NoiseModel::default();
        let s = base.scaled(2.0).unwrap();
        assert!((s.p1 - 0.002).abs() < 1e-15 && (s.p2 - 0.02).abs() < 1e-15 && (s.p_meas - 0.03).abs() < 1e-15);
        assert_eq!((s.t1_us, s.t2_us), (base.t1_us, base.t2_us));
        let p = NoiseModel::from_pphys(1e-3, SweepConvention::default()).unwrap();
        assert!((p.p2 - 1e-2).abs() < 1e-15 && (p.p_meas - 1.5e-2).abs() < 1e-15);
    }

    #[test]
    fn extreme_probabilities() {
        let mut r = rng(1);
        for _ in 0..1000 {
            assert_eq!(sample_depolarizing_1q(0.0, &mut r), Pauli::I);
            assert_eq!(sample_depolarizing_2q(0.0, &mut r), (Pauli::I, Pauli::I));
            assert!(!sample_meas_flip(0.0, &mut r));
            assert!(sample_meas_flip(1.0, &mut r));
            assert_ne!(sample_depolarizing_1q(1.0, &mut r), Pauli::I);
        }
    }

    #[test]
    fn fifteen_distinct_two_qubit_paulis() {
        let all: BTreeSet<String> = (0..15)
            .map(|k| {
                let (a, b) = two_qubit_pauli(k);
                format!("{a}{b}")
            })
            .collect();
        assert_eq!(all.len(), 15);
        assert!(!all.contains("II"));
    }

    #[test]
    fn idle_formula_values() {
        assert_eq!(idle_probabilities(0.0, 100.0, 80.0).unwrap(), [0.0, 0.0, 0.0]);
        let [px, py, pz] = idle_probabilities(1.0, 100.0, 80.0).unwrap();
        let amp = 1.0 - (-0.01f64).exp();
        let deph = 1.0 - (-1.0f64 / 80.0).exp();
        assert!((px - amp / 4.0).abs() < 1e-15 && px == py);
        assert!((pz - (deph / 2.0 - amp / 4.0)).abs() < 1e-15);
        assert!((px - 2.4875e-3).abs() < 1e-6);
        assert!((pz - 3.7236e-3).abs() < 1e-6);
        let [lx, ly, lz] = idle_probabilities(1e9, 50.0, 50.0).unwrap();
        assert!((lx - 0.25).abs() < 1e-12 && (ly - 0.25).abs() < 1e-12 && (lz - 0.25).abs() < 1e-12);
        assert!(idle_probabilities(1.0, 10.0, 30.0).is_err());
        let mut r = rng(2);
        for _ in 0..100 {
            assert_eq!(sample_idle(0.0, 100.0, 80.0, &mut r).unwrap(), Pauli::I);
        }
    }

    #[test]
    fn instrument_single_cnot() {
        let mut c = Circuit::new(2, 0);
        c.cx(0, 1);
        let ic = instrument(&c, &NoiseModel::default()).unwrap();
        assert_eq!(ic.stats().sites("NOISE2"), 1);
        assert_eq!(ic.stats().noise_sites.values().sum::<usize>(), 1);
        assert!(instrument(&ic, &NoiseModel::default()).is_err());
    }

    #[test]
    fn noiseless_instrumentation_adds_no_sites() {
        let mut c = Circuit::new(2, 1);
        c.h(0);
        c.cx(0, 1);
        c.measure(1, 0);
        let ic = instrument(&c, &NoiseModel::noiseless()).unwrap();
        assert_eq!(ic.instructions, c.instructions);
        assert!(ic.instrumented);
    }

    #[test]
    fn idle_sites_fill_gaps() {
        let mut c = Circuit::new(3, 0);
        c.h(0);
        c.h(1);
        c.cx(0, 1);
        c.cx(1, 2);
        c.h(0);
        c.cx(0, 1);
        let m = NoiseModel::default().with_idle();
        let ic = instrument(&c, &m).unwrap();
        // q0 waits for the second CNOT before its last CNOT.
        let idles: Vec<_> = ic
            .instructions
            .iter()
            .filter_map(|i| match i {
                Instruction::Noise(NoiseSite::Idle(q, t)) => Some((*q, *t)),
                _ => None,
            })
            .collect();
        assert_eq!(idles.len(), 1);
        assert_eq!(idles[0].0, 0);
        assert!((idles[0].1 - 0.25).abs() < 1e-12);
        let again = instrument(&c, &m).unwrap();
        assert_eq!(again, ic);
    }
}
