//! Pauli-frame simulation: tracks the Pauli difference between a noisy run
//! and the noiseless reference run of the same Clifford circuit.

use crate::pauli::{words_for, Pauli, PauliString};
use crate::tableau::CliffordGate;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliFrame {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliFrame {
    pub fn new(n: usize) -> Self {
        let w = words_for(n).max(1);
        Self {
            n,
            x: vec![0; w],
            z: vec![0; w],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    fn bit(v: &[u64], q: usize) -> bool {
        v[q / 64] >> (q % 64) & 1 == 1
    }

    #[inline]
    fn flip(v: &mut [u64], q: usize, b: bool) {
        v[q / 64] ^= (b as u64) << (q % 64);
    }

    pub fn x_bit(&self, q: usize) -> bool {
        Self::bit(&self.x, q)
    }

    pub fn z_bit(&self, q: usize) -> bool {
        Self::bit(&self.z, q)
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        let (px, pz) = p.bits();
        Self::flip(&mut self.x, q, px);
        Self::flip(&mut self.z, q, pz);
    }

    /// Conjugate the frame by a Clifford; Pauli gates leave it unchanged.
    pub fn apply_gate(&mut self, g: CliffordGate) {
        match g {
            CliffordGate::H(q) => {
                let (xb, zb) = (self.x_bit(q), self.z_bit(q));
                Self::flip(&mut self.x, q, xb ^ zb);
                Self::flip(&mut self.z, q, xb ^ zb);
            }
            CliffordGate::S(q) => {
                let xb = self.x_bit(q);
                Self::flip(&mut self.z, q, xb);
            }
            CliffordGate::Cnot(c, t) => {
                let (xc, zt) = (self.x_bit(c), self.z_bit(t));
                Self::flip(&mut self.x, t, xc);
                Self::flip(&mut self.z, c, zt);
            }
            CliffordGate::X(_) | CliffordGate::Y(_) | CliffordGate::Z(_) => {}
        }
    }

    pub fn clear(&mut self, q: usize) {
        let (xb, zb) = (self.x_bit(q), self.z_bit(q));
        Self::flip(&mut self.x, q, xb);
        Self::flip(&mut self.z, q, zb);
    }

    pub fn anticommutes(&self, p: &PauliString) -> bool {
        let ones: u32 = self
            .x
            .iter()
            .zip(&self.z)
            .zip(p.x_words().iter().zip(p.z_words()))
            .map(|((fx, fz), (px, pz))| ((fx & pz) ^ (fz & px)).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn to_pauli_string(&self) -> PauliString {
        PauliString::from_words(self.n, self.x.clone(), self.z.clone(), false)
    }

    /// The frame on `qubits`, re-indexed from 0.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        let mut p = PauliString::identity(qubits.len());
        for (i, &q) in qubits.iter().enumerate() {
            p.set(i, Pauli::from_bits(self.x_bit(q), self.z_bit(q)));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_string_conjugation() {
        let gates = [
            CliffordGate::H(0),
            CliffordGate::Cnot(0, 2),
            CliffordGate::S(1),
            CliffordGate::Cnot(2, 1),
            CliffordGate::H(2),
            CliffordGate::S(0),
        ];
        for start in ["XII", "IZI", "IIY", "XYZ", "ZZX"] {
            let mut s: PauliString = format!("+{start}").parse().unwrap();
            let mut f = PauliFrame::new(3);
            for q in 0..3 {
                f.apply_pauli(q, s.get(q));
            }
            for g in gates {
                s.conjugate_by(g);
                f.apply_gate(g);
            }
            s.set_negative(false);
            assert_eq!(f.to_pauli_string(), s, "start {start}");
        }
    }

    #[test]
    fn clear_and_anticommute() {
        let mut f = PauliFrame::new(70);
        f.apply_pauli(65, Pauli::X);
        f.apply_pauli(3, Pauli::Z);
        assert!(f.anticommutes(&PauliString::single(70, 65, Pauli::Z)));
        assert!(!f.anticommutes(&PauliString::single(70, 65, Pauli::X)));
        f.clear(65);
        assert!(!f.anticommutes(&PauliString::single(70, 65, Pauli::Z)));
        assert_eq!(f.restrict(&[3, 4]).to_string(), "+ZI");
    }
}
