//! Runs circuits on a simulation backend: the exact tableau or a Pauli frame
//! tracking only the deviation from the noiseless reference run.

use crate::circuit::frame::PauliFrame;
use crate::circuit::ir::{Circuit, Instruction, NoiseSite};
use crate::error::{invalid, Result};
use crate::noise::two_qubit_pauli;
use crate::pauli::{Pauli, PauliString};
use crate::tableau::{CliffordGate, StabilizerTableau};

/// Operations the executor needs from a simulator.
///
/// For [`PauliFrame`] measurement results are flips relative to the
/// noiseless reference, so only outcomes (and parities of outcomes) that are
/// deterministic in the reference carry meaning. Every decision made by this
/// crate's runners depends on such parities only.
pub trait Backend {
    fn num_qubits(&self) -> usize;
    fn gate(&mut self, g: CliffordGate);
    fn pauli(&mut self, q: usize, p: Pauli);
    fn measure(&mut self, q: usize) -> bool;
    fn reset(&mut self, q: usize);
    /// Whether the state has eigenvalue -1 for `p`. `p` must stabilize the
    /// noiseless reference state; `None` if the outcome is not determined.
    fn flipped(&self, p: &PauliString) -> Option<bool>;
}

impl Backend for StabilizerTableau {
    fn num_qubits(&self) -> usize {
        StabilizerTableau::num_qubits(self)
    }

    fn gate(&mut self, g: CliffordGate) {
        self.apply_gate_unchecked(g);
    }

    fn pauli(&mut self, q: usize, p: Pauli) {
        self.apply_single_pauli(q, p);
    }

    fn measure(&mut self, q: usize) -> bool {
        self.measure_z_unchecked(q)
    }

    fn reset(&mut self, q: usize) {
        self.reset_unchecked(q);
    }

    fn flipped(&self, p: &PauliString) -> Option<bool> {
        self.expectation(p).ok().flatten()
    }
}

impl Backend for PauliFrame {
    fn num_qubits(&self) -> usize {
        PauliFrame::num_qubits(self)
    }

    fn gate(&mut self, g: CliffordGate) {
        self.apply_gate(g);
    }

    fn pauli(&mut self, q: usize, p: Pauli) {
        self.apply_pauli(q, p);
    }

    fn measure(&mut self, q: usize) -> bool {
        self.x_bit(q)
    }

    fn reset(&mut self, q: usize) {
        self.clear(q);
    }

    fn flipped(&self, p: &PauliString) -> Option<bool> {
        Some(self.anticommutes(p))
    }
}

/// What happens at one noise site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    None,
    One(Pauli),
    Two(Pauli, Pauli),
    /// Flip the next readout on the site's qubit.
    Flip,
}

/// Supplies the fault at each noise site in execution order. `index` counts
/// sites across every circuit run by one executor.
pub trait FaultSource {
    fn fault(&mut self, index: u64, site: &NoiseSite) -> Fault;
}

pub struct Noiseless;

impl FaultSource for Noiseless {
    fn fault(&mut self, _index: u64, _site: &NoiseSite) -> Fault {
        Fault::None
    }
}

/// A single fault at a fixed site index; every other site is clean.
#[derive(Debug, Clone, Copy)]
pub struct InjectedFault {
    pub site: u64,
    pub fault: Fault,
}

impl FaultSource for InjectedFault {
    fn fault(&mut self, index: u64, _site: &NoiseSite) -> Fault {
        if index == self.site {
            self.fault
        } else {
            Fault::None
        }
    }
}

/// All faults that can occur at a site: 3 for one-qubit locations, 15 for
/// two-qubit locations, one readout flip for measurements.
pub fn possible_faults(site: &NoiseSite) -> Vec<Fault> {
    match site {
        NoiseSite::Gate1(_) | NoiseSite::Idle(..) => Pauli::NON_IDENTITY.iter().map(|&p| Fault::One(p)).collect(),
        NoiseSite::Gate2(..) => (0..15)
            .map(|k| {
                let (a, b) = two_qubit_pauli(k);
                Fault::Two(a, b)
            })
            .collect(),
        NoiseSite::Meas(_) => vec![Fault::Flip],
    }
}

pub struct Executor<B, F> {
    pub backend: B,
    pub faults: F,
    sites_seen: u64,
    pending_flip: Vec<bool>,
}

impl<B: Backend, F: FaultSource> Executor<B, F> {
    pub fn new(backend: B, faults: F) -> Self {
        let n = backend.num_qubits();
        Self {
            backend,
            faults,
            sites_seen: 0,
            pending_flip: vec![false; n],
        }
    }

    pub fn sites_seen(&self) -> u64 {
        self.sites_seen
    }

    /// Execute `c` with local qubit `q` acting on tableau qubit
    /// `qubit_map[q]`. Returns the circuit's classical bits.
    pub fn run(&mut self, c: &Circuit, qubit_map: &[usize]) -> Result<Vec<bool>> {
        if qubit_map.len() != c.n_qubits {
            return invalid(format!(
                "qubit map covers {} qubits, circuit has {}",
                qubit_map.len(),
                c.n_qubits
            ));
        }
        let n = self.backend.num_qubits();
        if let Some(&q) = qubit_map.iter().find(|&&q| q >= n) {
            return invalid(format!("qubit map target {q} outside simulator of {n} qubits"));
        }
        let mut bits = vec![false; c.n_clbits];
        self.run_into(c, qubit_map, &mut bits);
        Ok(bits)
    }

    /// Execute on the identity qubit map.
    pub fn run_direct(&mut self, c: &Circuit) -> Result<Vec<bool>> {
        let map: Vec<usize> = (0..c.n_qubits).collect();
        self.run(c, &map)
    }

    fn run_into(&mut self, c: &Circuit, map: &[usize], bits: &mut [bool]) {
        for inst in &c.instructions {
            match inst {
                Instruction::Gate(g) => self.backend.gate(g.remap(map)),
                Instruction::Measure { qubit, clbit } => {
                    let q = map[*qubit];
                    let m = self.backend.measure(q);
                    bits[*clbit] = m ^ std::mem::take(&mut self.pending_flip[q]);
                }
                Instruction::Reset(q) => self.backend.reset(map[*q]),
                Instruction::Noise(site) => {
                    let idx = self.sites_seen;
                    self.sites_seen += 1;
                    match (self.faults.fault(idx, site), site) {
                        (Fault::None, _) => {}
                        (Fault::One(p), s) => self.backend.pauli(map[s.qubit()], p),
                        (Fault::Two(pa, pb), NoiseSite::Gate2(a, b)) => {
                            self.backend.pauli(map[*a], pa);
                            self.backend.pauli(map[*b], pb);
                        }
                        (Fault::Two(pa, _), s) => self.backend.pauli(map[s.qubit()], pa),
                        (Fault::Flip, s) => {
                            let q = map[s.qubit()];
                            self.pending_flip[q] ^= true;
                        }
                    }
                }
                Instruction::Parity { target, sources } => {
                    bits[*target] = sources.iter().fold(false, |acc, &s| acc ^ bits[s]);
                }
                Instruction::CondPauli { pauli, qubit, condition } => {
                    if condition.iter().all(|l| bits[l.clbit] == l.value) {
                        self.backend.pauli(map[*qubit], *pauli);
                    }
                }
                Instruction::Tick => {}
            }
        }
    }
}

/// Number of noise sites `c` visits; equal to the site count since circuits
/// have no classical branching over noise.
pub fn count_sites(c: &Circuit) -> u64 {
    c.instructions
        .iter()
        .filter(|i| matches!(i, Instruction::Noise(_)))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::ir::ClassicalLiteral;

    fn bell() -> Circuit {
        let mut c = Circuit::new(2, 3);
        c.h(0);
        c.cx(0, 1);
        c.measure(0, 0);
        c.measure(1, 1);
        c.parity(2, vec![0, 1]);
        c
    }

    #[test]
    fn bell_pair_correlated() {
        for seed in 0..20 {
            let t = StabilizerTableau::new(2, seed).unwrap();
            let mut ex = Executor::new(t, Noiseless);
            let bits = ex.run_direct(&bell()).unwrap();
            assert_eq!(bits[0], bits[1]);
            assert!(!bits[2]);
        }
    }

    #[test]
    fn injected_flip_hits_one_readout() {
        let mut c = Circuit::new(1, 2);
        c.push(Instruction::Noise(NoiseSite::Meas(0)));
        c.measure(0, 0);
        c.measure(0, 1);
        let t = StabilizerTableau::new(1, 0).unwrap();
        let mut ex = Executor::new(t, InjectedFault { site: 0, fault: Fault::Flip });
        assert_eq!(ex.run_direct(&c).unwrap(), vec![true, false]);
        assert_eq!(ex.sites_seen(), 1);
    }

    #[test]
    fn two_qubit_fault_on_both_qubits() {
        let mut c = Circuit::new(2, 2);
        c.push(Instruction::Noise(NoiseSite::Gate2(0, 1)));
        c.measure(0, 0);
        c.measure(1, 1);
        let t = StabilizerTableau::new(2, 0).unwrap();
        let mut ex = Executor::new(
            t,
            InjectedFault {
                site: 0,
                fault: Fault::Two(Pauli::Y, Pauli::X),
            },
        );
        assert_eq!(ex.run_direct(&c).unwrap(), vec![true, true]);
    }

    #[test]
    fn conditional_pauli_and_mapping() {
        let mut c = Circuit::new(2, 3);
        c.push(Instruction::Gate(crate::tableau::CliffordGate::X(0)));
        c.measure(0, 0);
        c.push(Instruction::CondPauli {
            pauli: Pauli::X,
            qubit: 1,
            condition: vec![ClassicalLiteral { clbit: 0, value: true }],
        });
        c.push(Instruction::CondPauli {
            pauli: Pauli::X,
            qubit: 0,
            condition: vec![ClassicalLiteral { clbit: 0, value: false }],
        });
        c.measure(1, 1);
        c.measure(0, 2);
        let t = StabilizerTableau::new(4, 0).unwrap();
        let mut ex = Executor::new(t, Noiseless);
        assert_eq!(ex.run(&c, &[3, 1]).unwrap(), vec![true, true, true]);
        assert_eq!(ex.backend.peek_z(3).unwrap(), Some(true));
        assert_eq!(ex.backend.peek_z(0).unwrap(), Some(false));
        assert!(ex.run(&c, &[0]).is_err());
        assert!(ex.run(&c, &[0, 9]).is_err());
    }

    #[test]
    fn fault_catalogue_sizes() {
        assert_eq!(possible_faults(&NoiseSite::Gate1(0)).len(), 3);
        assert_eq!(possible_faults(&NoiseSite::Gate2(0, 1)).len(), 15);
        assert_eq!(possible_faults(&NoiseSite::Meas(0)).len(), 1);
    }
}
