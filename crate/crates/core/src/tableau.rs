//! Destabilizer/stabilizer tableau simulation of Clifford circuits with
//! Z-basis measurement.
//!
//! Rows `0..n` hold destabilizers, rows `n..2n` stabilizers and row `2n` is
//! scratch space for deterministic measurements. Each row stores its x and z
//! components packed into 64-bit words plus a sign bit. Imaginary phases never
//! appear on rows, so only `±1` is tracked.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::pauli::{phase_exponent, words_for, Pauli, PauliString};
use crate::rng::counter_bit;

/// Clifford generators understood by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CliffordGate {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    S(usize),
    Cnot(usize, usize),
}

impl CliffordGate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CliffordGate::H(q)
            | CliffordGate::X(q)
            | CliffordGate::Y(q)
            | CliffordGate::Z(q)
            | CliffordGate::S(q) => vec![q],
            CliffordGate::Cnot(c, t) => vec![c, t],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, CliffordGate::Cnot(..))
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliffordGate::H(_) => "H",
            CliffordGate::X(_) => "X",
            CliffordGate::Y(_) => "Y",
            CliffordGate::Z(_) => "Z",
            CliffordGate::S(_) => "S",
            CliffordGate::Cnot(..) => "CX",
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            CliffordGate::Cnot(c, t) if c == t => invalid(format!("CNOT targets must differ (got {c}, {t})")),
            _ => {
                for q in self.qubits() {
                    if q >= n {
                        return invalid(format!("gate target {q} out of range for {n} qubits"));
                    }
                }
                Ok(())
            }
        }
    }

    /// The same gate with qubit `q` replaced by `map[q]`.
    pub fn remap(self, map: &[usize]) -> CliffordGate {
        match self {
            CliffordGate::H(q) => CliffordGate::H(map[q]),
            CliffordGate::X(q) => CliffordGate::X(map[q]),
            CliffordGate::Y(q) => CliffordGate::Y(map[q]),
            CliffordGate::Z(q) => CliffordGate::Z(map[q]),
            CliffordGate::S(q) => CliffordGate::S(map[q]),
            CliffordGate::Cnot(c, t) => CliffordGate::Cnot(map[c], map[t]),
        }
    }

    /// Pauli gate for a single-qubit Pauli (`None` for identity).
    pub fn from_pauli(p: Pauli, q: usize) -> Option<CliffordGate> {
        match p {
            Pauli::I => None,
            Pauli::X => Some(CliffordGate::X(q)),
            Pauli::Y => Some(CliffordGate::Y(q)),
            Pauli::Z => Some(CliffordGate::Z(q)),
        }
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CliffordGate::Cnot(c, t) => write!(f, "CX {c} {t}"),
            g => write!(f, "{} {}", g.name(), g.qubits()[0]),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    words: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    signs: Vec<bool>,
    seed: u64,
    measurements: u64,
}

impl StabilizerTableau {
    /// Tableau for `|0…0⟩` on `n` qubits. Random measurement outcomes are
    /// keyed by `(seed, measurement index)`.
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return invalid("tableau needs at least one qubit");
        }
        let words = words_for(n);
        let rows = 2 * n + 1;
        let mut t = Self {
            n,
            words,
            xs: vec![0; rows * words],
            zs: vec![0; rows * words],
            signs: vec![false; rows],
            seed,
            measurements: 0,
        };
        t.reset_all();
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of `measure_z` calls so far.
    pub fn measurement_count(&self) -> u64 {
        self.measurements
    }

    pub fn reset_all(&mut self) {
        self.xs.fill(0);
        self.zs.fill(0);
        self.signs.fill(false);
        for q in 0..self.n {
            let (w, m) = (q / 64, 1u64 << (q % 64));
            self.xs[q * self.words + w] |= m;
            self.zs[(q + self.n) * self.words + w] |= m;
        }
    }

    #[inline]
    fn check(&self, q: usize) -> Result<()> {
        if q >= self.n {
            invalid(format!("qubit {q} out of range for {} qubits", self.n))
        } else {
            Ok(())
        }
    }

    pub fn apply_gate(&mut self, g: CliffordGate) -> Result<()> {
        g.validate(self.n)?;
        self.apply_gate_unchecked(g);
        Ok(())
    }

    /// Gate application without bounds checks; callers validate circuits once
    /// up front.
    pub(crate) fn apply_gate_unchecked(&mut self, g: CliffordGate) {
        let rows = 2 * self.n;
        let words = self.words;
        match g {
            CliffordGate::H(q) => {
                let (w, b) = (q / 64, q % 64);
                for r in 0..rows {
                    let i = r * words + w;
                    let x = self.xs[i] >> b & 1;
                    let z = self.zs[i] >> b & 1;
                    self.signs[r] ^= (x & z) == 1;
                    if x != z {
                        self.xs[i] ^= 1 << b;
                        self.zs[i] ^= 1 << b;
                    }
                }
            }
            CliffordGate::S(q) => {
                let (w, b) = (q / 64, q % 64);
                for r in 0..rows {
                    let i = r * words + w;
                    let x = self.xs[i] >> b & 1;
                    let z = self.zs[i] >> b & 1;
                    self.signs[r] ^= (x & z) == 1;
                    self.zs[i] ^= x << b;
                }
            }
            CliffordGate::X(q) => {
                let (w, b) = (q / 64, q % 64);
                for r in 0..rows {
                    self.signs[r] ^= self.zs[r * words + w] >> b & 1 == 1;
                }
            }
            CliffordGate::Z(q) => {
                let (w, b) = (q / 64, q % 64);
                for r in 0..rows {
                    self.signs[r] ^= self.xs[r * words + w] >> b & 1 == 1;
                }
            }
            CliffordGate::Y(q) => {
                let (w, b) = (q / 64, q % 64);
                for r in 0..rows {
                    let i = r * words + w;
                    self.signs[r] ^= ((self.xs[i] ^ self.zs[i]) >> b & 1) == 1;
                }
            }
            CliffordGate::Cnot(c, t) => {
                let (wc, bc) = (c / 64, c % 64);
                let (wt, bt) = (t / 64, t % 64);
                for r in 0..rows {
                    let ic = r * words + wc;
                    let it = r * words + wt;
                    let xc = self.xs[ic] >> bc & 1;
                    let zc = self.zs[ic] >> bc & 1;
                    let xt = self.xs[it] >> bt & 1;
                    let zt = self.zs[it] >> bt & 1;
                    self.signs[r] ^= (xc & zt & (xt ^ zc ^ 1)) == 1;
                    self.xs[it] ^= xc << bt;
                    self.zs[ic] ^= zt << bc;
                }
            }
        }
    }

    /// Conjugate the state by a Pauli operator (error injection).
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.n {
            return invalid(format!(
                "Pauli acts on {} qubits but tableau has {}",
                p.num_qubits(),
                self.n
            ));
        }
        let (px, pz) = (p.x_words(), p.z_words());
        for r in 0..2 * self.n {
            let base = r * self.words;
            let mut parity = 0u32;
            for w in 0..self.words {
                parity ^= ((self.xs[base + w] & pz[w]) ^ (self.zs[base + w] & px[w])).count_ones();
            }
            self.signs[r] ^= parity & 1 == 1;
        }
        Ok(())
    }

    /// Single-qubit Pauli shortcut used on the noise hot path.
    pub(crate) fn apply_single_pauli(&mut self, q: usize, p: Pauli) {
        if let Some(g) = CliffordGate::from_pauli(p, q) {
            self.apply_gate_unchecked(g);
        }
    }

    #[inline]
    fn x_bit(&self, row: usize, q: usize) -> bool {
        self.xs[row * self.words + q / 64] >> (q % 64) & 1 == 1
    }

    /// row h := row i * row h
    fn rowsum(&mut self, h: usize, i: usize) {
        let (hb, ib) = (h * self.words, i * self.words);
        let mut e = 2 * self.signs[h] as u32 + 2 * self.signs[i] as u32;
        for w in 0..self.words {
            e += phase_exponent(self.xs[ib + w], self.zs[ib + w], self.xs[hb + w], self.zs[hb + w]);
            self.xs[hb + w] ^= self.xs[ib + w];
            self.zs[hb + w] ^= self.zs[ib + w];
        }
        debug_assert_eq!(e & 1, 0, "rowsum of anticommuting rows");
        self.signs[h] = e & 3 == 2;
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        self.xs.copy_within(src * w..(src + 1) * w, dst * w);
        self.zs.copy_within(src * w..(src + 1) * w, dst * w);
        self.signs[dst] = self.signs[src];
    }

    fn clear_row(&mut self, r: usize) {
        let w = self.words;
        self.xs[r * w..(r + 1) * w].fill(0);
        self.zs[r * w..(r + 1) * w].fill(0);
        self.signs[r] = false;
    }

    /// Outcome of a Z measurement if it is deterministic, without disturbing
    /// the state.
    pub fn peek_z(&mut self, q: usize) -> Result<Option<bool>> {
        self.check(q)?;
        let n = self.n;
        if (n..2 * n).any(|r| self.x_bit(r, q)) {
            return Ok(None);
        }
        Ok(Some(self.deterministic_z(q)))
    }

    fn deterministic_z(&mut self, q: usize) -> bool {
        let n = self.n;
        let scratch = 2 * n;
        self.clear_row(scratch);
        for i in 0..n {
            if self.x_bit(i, q) {
                self.rowsum(scratch, i + n);
            }
        }
        self.signs[scratch]
    }

    /// Z-basis measurement; `true` means outcome 1.
    pub fn measure_z(&mut self, q: usize) -> Result<bool> {
        self.check(q)?;
        Ok(self.measure_z_unchecked(q))
    }

    pub(crate) fn measure_z_unchecked(&mut self, q: usize) -> bool {
        let n = self.n;
        let index = self.measurements;
        self.measurements += 1;
        let Some(p) = (n..2 * n).find(|&r| self.x_bit(r, q)) else {
            return self.deterministic_z(q);
        };
        // Row p - n is overwritten below.
        for i in 0..2 * n {
            if i != p && i != p - n && self.x_bit(i, q) {
                self.rowsum(i, p);
            }
        }
        self.copy_row(p - n, p);
        self.clear_row(p);
        self.zs[p * self.words + q / 64] |= 1 << (q % 64);
        let outcome = counter_bit(self.seed, index);
        self.signs[p] = outcome;
        outcome
    }

    /// Measure then flip back to `|0⟩` if needed.
    pub fn reset_qubit(&mut self, q: usize) -> Result<()> {
        self.check(q)?;
        self.reset_unchecked(q);
        Ok(())
    }

    pub(crate) fn reset_unchecked(&mut self, q: usize) {
        if self.measure_z_unchecked(q) {
            self.apply_gate_unchecked(CliffordGate::X(q));
        }
    }

    /// Stabilizer row `i` (0-based among the `n` generators).
    pub fn stabilizer(&self, i: usize) -> PauliString {
        self.row(self.n + i)
    }

    pub fn destabilizer(&self, i: usize) -> PauliString {
        self.row(i)
    }

    fn row(&self, r: usize) -> PauliString {
        let w = self.words;
        PauliString::from_words(
            self.n,
            self.xs[r * w..(r + 1) * w].to_vec(),
            self.zs[r * w..(r + 1) * w].to_vec(),
            self.signs[r],
        )
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.stabilizer(i)).collect()
    }

    /// Expectation value of a Hermitian Pauli: `Some(+1 / -1)` as
    /// `Some(false / true)` when `±p` is in the stabilizer group, `None`
    /// otherwise.
    pub fn expectation(&self, p: &PauliString) -> Result<Option<bool>> {
        if p.num_qubits() != self.n {
            return invalid(format!(
                "Pauli acts on {} qubits but tableau has {}",
                p.num_qubits(),
                self.n
            ));
        }
        let n = self.n;
        if (n..2 * n).any(|r| !self.row_commutes(r, p)) {
            return Ok(None);
        }
        let mut acc = PauliString::identity(n);
        for i in 0..n {
            if !self.row_commutes(i, p) {
                acc.mul_assign(&self.row(i + n))?;
            }
        }
        debug_assert_eq!(acc.x_words(), p.x_words());
        debug_assert_eq!(acc.z_words(), p.z_words());
        Ok(Some(acc.is_negative() != p.is_negative()))
    }

    fn row_commutes(&self, r: usize, p: &PauliString) -> bool {
        let base = r * self.words;
        let (px, pz) = (p.x_words(), p.z_words());
        let mut parity = 0u32;
        for w in 0..self.words {
            parity ^= ((self.xs[base + w] & pz[w]) ^ (self.zs[base + w] & px[w])).count_ones();
        }
        parity & 1 == 0
    }

    /// Stabilizer generators in reduced row-echelon form (X pivots, then Z
    /// pivots, per qubit). Two tableaux describe the same state iff their
    /// canonical forms are equal.
    pub fn canonical_stabilizers(&self) -> Vec<PauliString> {
        canonicalize(self.stabilizers())
    }

    /// Checks that stabilizers mutually commute, each anticommutes with its
    /// own destabilizer only, and the generators are independent.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.n;
        let rows: Vec<PauliString> = (0..2 * n).map(|r| self.row(r)).collect();
        for i in 0..n {
            for j in 0..n {
                let s_i = &rows[n + i];
                if !s_i.commutes_unchecked(&rows[n + j]) {
                    return Err(format!("stabilizers {i} and {j} anticommute"));
                }
                let anti = !rows[i].commutes_unchecked(&rows[n + j]);
                if anti != (i == j) {
                    return Err(format!("destabilizer {i} / stabilizer {j} pairing broken"));
                }
            }
        }
        let canon = canonicalize(rows[n..].to_vec());
        if canon.iter().any(|p| p.is_identity()) {
            return Err("stabilizer generators are dependent".into());
        }
        Ok(())
    }
}

/// Gaussian elimination over Pauli generators with sign tracking.
pub fn canonicalize(mut gens: Vec<PauliString>) -> Vec<PauliString> {
    let Some(n) = gens.first().map(|g| g.num_qubits()) else {
        return gens;
    };
    let mut pivot_row = 0;
    for pass in 0..2 {
        for q in 0..n {
            let has = |g: &PauliString| if pass == 0 { g.x_bit(q) } else { g.z_bit(q) && !g.x_bit(q) };
            let Some(found) = (pivot_row..gens.len()).find(|&r| has(&gens[r])) else {
                continue;
            };
            gens.swap(pivot_row, found);
            let pivot = gens[pivot_row].clone();
            for r in 0..gens.len() {
                if r == pivot_row {
                    continue;
                }
                let hit = if pass == 0 { gens[r].x_bit(q) } else { gens[r].z_bit(q) };
                if hit {
                    gens[r].mul_assign(&pivot).expect("same dimension");
                }
            }
            pivot_row += 1;
        }
    }
    gens
}

impl fmt::Debug for StabilizerTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "StabilizerTableau(n = {})", self.n)?;
        for r in 0..2 * self.n {
            let tag = if r < self.n { "D" } else { "S" };
            writeln!(f, "  {tag} {}", self.row(r))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use CliffordGate::*;

    fn t(n: usize) -> StabilizerTableau {
        StabilizerTableau::new(n, 42).unwrap()
    }

    #[test]
    fn zero_qubits_rejected() {
        assert!(StabilizerTableau::new(0, 1).is_err());
    }

    #[test]
    fn single_qubit_stabilizer_is_z() {
        let s = t(1);
        assert_eq!(s.stabilizers(), vec!["+Z".parse().unwrap()]);
    }

    #[test]
    fn fresh_state_measures_zero() {
        let mut s = t(7);
        for q in 0..7 {
            assert!(!s.measure_z(q).unwrap());
        }
    }

    #[test]
    fn x_flips_deterministically() {
        let mut s = t(3);
        s.apply_gate(X(1)).unwrap();
        assert!(s.measure_z(1).unwrap());
        assert!(!s.measure_z(0).unwrap());
    }

    #[test]
    fn cnot_on_10() {
        let mut s = t(2);
        s.apply_gate(X(0)).unwrap();
        s.apply_gate(Cnot(0, 1)).unwrap();
        assert!(s.measure_z(0).unwrap());
        assert!(s.measure_z(1).unwrap());
    }

    #[test]
    fn out_of_range_gate() {
        let mut s = t(2);
        assert!(s.apply_gate(H(2)).is_err());
        assert!(s.apply_gate(Cnot(0, 0)).is_err());
        assert!(s.measure_z(5).is_err());
    }

    #[test]
    fn xx_is_identity() {
        let mut s = t(3);
        s.apply_gate(H(0)).unwrap();
        s.apply_gate(Cnot(0, 2)).unwrap();
        let before = s.canonical_stabilizers();
        s.apply_gate(X(2)).unwrap();
        s.apply_gate(X(2)).unwrap();
        assert_eq!(before, s.canonical_stabilizers());
    }

    #[test]
    fn repeated_measurement_agrees() {
        let mut s = t(2);
        s.apply_gate(H(0)).unwrap();
        s.apply_gate(Cnot(0, 1)).unwrap();
        let a = s.measure_z(0).unwrap();
        assert_eq!(a, s.measure_z(0).unwrap());
        assert_eq!(a, s.measure_z(1).unwrap());
    }

    #[test]
    fn identity_pauli_leaves_state() {
        let mut s = t(3);
        s.apply_gate(H(1)).unwrap();
        let before = s.clone();
        s.apply_pauli(&PauliString::identity(3)).unwrap();
        assert_eq!(before, s);
        assert!(s.apply_pauli(&PauliString::identity(2)).is_err());
    }

    #[test]
    fn reset_on_one_and_zero() {
        let mut s = t(2);
        s.apply_gate(X(0)).unwrap();
        s.reset_qubit(0).unwrap();
        assert!(!s.measure_z(0).unwrap());
        let mut fresh = t(2);
        let before = fresh.canonical_stabilizers();
        fresh.reset_qubit(1).unwrap();
        assert_eq!(before, fresh.canonical_stabilizers());
    }

    #[test]
    fn expectation_reads_group_membership() {
        let mut s = t(2);
        s.apply_gate(H(0)).unwrap();
        s.apply_gate(Cnot(0, 1)).unwrap();
        assert_eq!(s.expectation(&"XX".parse().unwrap()).unwrap(), Some(false));
        assert_eq!(s.expectation(&"ZZ".parse().unwrap()).unwrap(), Some(false));
        assert_eq!(s.expectation(&"YY".parse().unwrap()).unwrap(), Some(true));
        assert_eq!(s.expectation(&"ZI".parse().unwrap()).unwrap(), None);
        s.apply_gate(Z(0)).unwrap();
        assert_eq!(s.expectation(&"XX".parse().unwrap()).unwrap(), Some(true));
    }

    #[test]
    fn validator_accepts_evolved_state() {
        let mut s = t(5);
        for g in [H(0), Cnot(0, 1), S(1), H(3), Cnot(3, 4), Cnot(1, 2)] {
            s.apply_gate(g).unwrap();
        }
        s.measure_z(2).unwrap();
        s.validate().unwrap();
    }

    #[test]
    fn wide_tableau_spans_words() {
        let mut s = t(70);
        s.apply_gate(H(0)).unwrap();
        s.apply_gate(Cnot(0, 69)).unwrap();
        let a = s.measure_z(69).unwrap();
        assert_eq!(a, s.measure_z(0).unwrap());
        s.validate().unwrap();
    }

    proptest::proptest! {
        #[test]
        fn random_circuits_keep_tableau_valid(ops in proptest::collection::vec((0u8..7, 0usize..5, 0usize..5), 1..60), seed in 0u64..1000) {
            let mut tab = StabilizerTableau::new(5, seed).unwrap();
            for (op, a, b) in ops {
                match op {
                    0 => tab.apply_gate(H(a)).unwrap(),
                    1 => tab.apply_gate(S(a)).unwrap(),
                    2 if a != b => tab.apply_gate(Cnot(a, b)).unwrap(),
                    3 => tab.apply_gate(X(a)).unwrap(),
                    4 => { tab.measure_z(a).unwrap(); }
                    5 => tab.reset_qubit(a).unwrap(),
                    _ => {
                        let first = tab.measure_z(a).unwrap();
                        proptest::prop_assert_eq!(tab.measure_z(a).unwrap(), first);
                    }
                }
                proptest::prop_assert!(tab.validate().is_ok());
            }
        }
    }
}
