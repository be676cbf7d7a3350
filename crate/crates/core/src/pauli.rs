//! Signed Pauli strings over `n` qubits in the symplectic (x | z) bit layout.
//!
//! Qubit `i` carries I, X, Z or Y for `(x_i, z_i)` equal to `(0,0)`, `(1,0)`,
//! `(0,1)` and `(1,1)`. Only a `±1` sign is tracked; products of
//! anticommuting operators drop the imaginary unit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::tableau::CliffordGate;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'I' | '_' | '.' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Exponent of `i` picked up when multiplying `P1 * P2`, summed over one word
/// of qubits. Returned modulo 4.
#[inline]
pub(crate) fn phase_exponent(x1: u64, z1: u64, x2: u64, z2: u64) -> u32 {
    let y1 = x1 & z1;
    let xo1 = x1 & !z1;
    let zo1 = !x1 & z1;
    let pos = (y1 & z2 & !x2) | (xo1 & z2 & x2) | (zo1 & x2 & !z2);
    let neg = (y1 & x2 & !z2) | (xo1 & z2 & !x2) | (zo1 & x2 & z2);
    (pos.count_ones() + 4 * 64 - neg.count_ones()) & 3
}

/// An `n`-qubit Pauli operator with a `±1` sign.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    negative: bool,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self {
            n,
            x: vec![0; w],
            z: vec![0; w],
            negative: false,
        }
    }

    /// Weight-one operator `p` on qubit `q`.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut out = Self::identity(n);
        out.set(q, p);
        out
    }

    /// Operator with Pauli `p` on every qubit of `support`.
    pub fn on_support(n: usize, support: &[usize], p: Pauli) -> Self {
        let mut out = Self::identity(n);
        for &q in support {
            out.set(q, p);
        }
        out
    }

    pub fn from_bits(x_bits: &[bool], z_bits: &[bool], negative: bool) -> Result<Self> {
        if x_bits.len() != z_bits.len() {
            return invalid(format!(
                "x and z components differ in length ({} vs {})",
                x_bits.len(),
                z_bits.len()
            ));
        }
        let mut out = Self::identity(x_bits.len());
        for (q, (&xb, &zb)) in x_bits.iter().zip(z_bits).enumerate() {
            out.set(q, Pauli::from_bits(xb, zb));
        }
        out.negative = negative;
        Ok(out)
    }

    pub(crate) fn from_words(n: usize, x: Vec<u64>, z: Vec<u64>, negative: bool) -> Self {
        debug_assert_eq!(x.len(), words_for(n));
        Self { n, x, z, negative }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn set_negative(&mut self, negative: bool) {
        self.negative = negative;
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn x_bits(&self) -> Vec<bool> {
        (0..self.n).map(|q| self.x_bit(q)).collect()
    }

    pub fn z_bits(&self) -> Vec<bool> {
        (0..self.n).map(|q| self.z_bit(q)).collect()
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {}-qubit Pauli", self.n);
        let (xb, zb) = p.bits();
        let (w, m) = (q / 64, 1u64 << (q % 64));
        if xb {
            self.x[w] |= m;
        } else {
            self.x[w] &= !m;
        }
        if zb {
            self.z[w] |= m;
        } else {
            self.z[w] &= !m;
        }
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Qubits on which the operator acts non-trivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.x_bit(q) || self.z_bit(q))
            .collect()
    }

    /// Symplectic inner product test.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        if self.n != other.n {
            return invalid(format!(
                "Pauli dimension mismatch ({} vs {})",
                self.n, other.n
            ));
        }
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones() & 1;
        }
        acc == 0
    }

    /// In-place product `self := self * other`. Returns `false` when the
    /// operands anticommute (the dropped phase was imaginary).
    pub fn mul_assign(&mut self, other: &PauliString) -> Result<bool> {
        if self.n != other.n {
            return invalid(format!(
                "Pauli dimension mismatch ({} vs {})",
                self.n, other.n
            ));
        }
        let mut e = 2 * self.negative as u32 + 2 * other.negative as u32;
        for w in 0..self.x.len() {
            e += phase_exponent(self.x[w], self.z[w], other.x[w], other.z[w]);
            self.x[w] ^= other.x[w];
            self.z[w] ^= other.z[w];
        }
        let e = e & 3;
        self.negative = e >= 2;
        Ok(e & 1 == 0)
    }

    /// Product ignoring signs and phases; the usual composition for error
    /// bookkeeping.
    pub fn compose(&self, other: &PauliString) -> Result<PauliString> {
        let mut out = self.clone();
        out.mul_assign(other)?;
        out.negative = false;
        Ok(out)
    }

    /// Heisenberg-picture update `P -> G P G†`.
    pub fn conjugate_by(&mut self, gate: CliffordGate) {
        let bit = |v: &[u64], q: usize| v[q / 64] >> (q % 64) & 1 == 1;
        match gate {
            CliffordGate::H(q) => {
                let (xb, zb) = (bit(&self.x, q), bit(&self.z, q));
                self.negative ^= xb && zb;
                self.set(q, Pauli::from_bits(zb, xb));
            }
            CliffordGate::S(q) => {
                let (xb, zb) = (bit(&self.x, q), bit(&self.z, q));
                self.negative ^= xb && zb;
                self.set(q, Pauli::from_bits(xb, zb ^ xb));
            }
            CliffordGate::X(q) => self.negative ^= bit(&self.z, q),
            CliffordGate::Z(q) => self.negative ^= bit(&self.x, q),
            CliffordGate::Y(q) => self.negative ^= bit(&self.x, q) ^ bit(&self.z, q),
            CliffordGate::Cnot(c, t) => {
                let (xc, zc) = (bit(&self.x, c), bit(&self.z, c));
                let (xt, zt) = (bit(&self.x, t), bit(&self.z, t));
                self.negative ^= xc && zt && !(xt ^ zc);
                self.set(t, Pauli::from_bits(xt ^ xc, zt));
                self.set(c, Pauli::from_bits(xc, zc ^ zt));
            }
        }
    }

    /// Restriction to the listed qubits, in the given order.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        let mut out = PauliString::identity(qubits.len());
        for (i, &q) in qubits.iter().enumerate() {
            out.set(i, self.get(q));
        }
        out
    }

    /// Embed into a larger register, placing qubit `i` at `positions[i]`.
    pub fn embed(&self, n: usize, positions: &[usize]) -> PauliString {
        let mut out = PauliString::identity(n);
        for (i, &q) in positions.iter().enumerate() {
            out.set(q, self.get(i));
        }
        out.negative = self.negative;
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.negative { '-' } else { '+' })?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.chars().next() {
            Some('-') => (true, &s[1..]),
            Some('+') => (false, &s[1..]),
            _ => (false, s),
        };
        let paulis = body
            .chars()
            .map(|c| Pauli::from_symbol(c).ok_or_else(|| Error::InvalidArgument(format!("bad Pauli symbol {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let mut out = PauliString::identity(paulis.len());
        for (q, p) in paulis.into_iter().enumerate() {
            out.set(q, p);
        }
        out.negative = negative;
        Ok(out)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_commutation() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("X").commutes(&p("X")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        assert!(matches!(
            p("XX").commutes(&p("X")),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn product_phases() {
        // Z * X = iY, X * Z = -iY: both anticommuting, sign dropped.
        let mut a = p("X");
        assert!(!a.mul_assign(&p("Z")).unwrap());
        assert_eq!(a.get(0), Pauli::Y);
        // XX * ZZ = (XZ)(XZ) = (-iY)(-iY) = -YY
        let mut b = p("XX");
        assert!(b.mul_assign(&p("ZZ")).unwrap());
        assert_eq!(b.to_string(), "-YY");
        // Y * Y = I
        let mut c = p("-Y");
        c.mul_assign(&p("Y")).unwrap();
        assert_eq!(c.to_string(), "-I");
    }

    #[test]
    fn conjugation_rules() {
        let mut a = p("Y");
        a.conjugate_by(CliffordGate::H(0));
        assert_eq!(a.to_string(), "-Y");
        let mut b = p("X");
        b.conjugate_by(CliffordGate::S(0));
        assert_eq!(b.to_string(), "+Y");
        b.conjugate_by(CliffordGate::S(0));
        assert_eq!(b.to_string(), "-X");
        let mut c = p("XI");
        c.conjugate_by(CliffordGate::Cnot(0, 1));
        assert_eq!(c.to_string(), "+XX");
        let mut d = p("IZ");
        d.conjugate_by(CliffordGate::Cnot(0, 1));
        assert_eq!(d.to_string(), "+ZZ");
    }

    #[test]
    fn weight_and_support() {
        let a = p("IXIYZ");
        assert_eq!(a.weight(), 3);
        assert_eq!(a.support(), vec![1, 3, 4]);
        let big = PauliString::single(130, 129, Pauli::Y);
        assert_eq!(big.weight(), 1);
        assert_eq!(big.get(129), Pauli::Y);
    }
}
