//! CSS codes from pairs of binary parity-check matrices, the Steane
//! [[7,1,3]] code and syndrome lookup decoding.
//!
//! Qubits are 0-based internally. Printed notation (`Z4 Z5 Z6 Z7`) is
//! 1-based; [`display_label`] is the single conversion point.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gf2::BinaryMatrix;
use crate::pauli::{Pauli, PauliString};
use crate::tableau::StabilizerTableau;

/// Largest check count for which a dense lookup table is built.
pub const MAX_LOOKUP_CHECKS: usize = 24;
const EXHAUSTIVE_LOGICAL_LIMIT: usize = 16;

/// 1-based label for an internal 0-based qubit index.
pub fn display_label(q: usize) -> usize {
    q + 1
}

/// Parity-check matrix of the [7,4,3] Hamming code. Column `j` is the binary
/// expansion of `j + 1` (most significant bit in row 0).
pub fn hamming_parity_check() -> BinaryMatrix {
    BinaryMatrix::from_rows(
        &[
            [0u8, 0, 0, 1, 1, 1, 1],
            [0, 1, 1, 0, 0, 1, 1],
            [1, 0, 1, 0, 1, 0, 1],
        ],
        7,
    )
    .expect("static matrix")
}

/// Stabilizer measurement outcomes for one round.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syndrome {
    /// Outcomes of the Z-type stabilizers (flag X errors).
    pub z_bits: Vec<bool>,
    /// Outcomes of the X-type stabilizers (flag Z errors).
    pub x_bits: Vec<bool>,
    pub round: usize,
}

impl Syndrome {
    pub fn zeros(code: &CssCode) -> Self {
        Self {
            z_bits: vec![false; code.hz.rows()],
            x_bits: vec![false; code.hx.rows()],
            round: 0,
        }
    }

    pub fn is_trivial(&self) -> bool {
        !self.z_bits.iter().chain(&self.x_bits).any(|&b| b)
    }

    /// Z bits followed by X bits.
    pub fn bits(&self) -> Vec<bool> {
        self.z_bits.iter().chain(&self.x_bits).copied().collect()
    }

    pub fn xor(&self, other: &Syndrome) -> Syndrome {
        let x = |a: &[bool], b: &[bool]| a.iter().zip(b).map(|(p, q)| p ^ q).collect();
        Syndrome {
            z_bits: x(&self.z_bits, &other.z_bits),
            x_bits: x(&self.x_bits, &other.x_bits),
            round: self.round,
        }
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        write!(f, "z={} x={}", s(&self.z_bits), s(&self.x_bits))
    }
}

pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | ((b as usize) << i))
}

/// Lookup table from one syndrome family to a minimum-weight correction of
/// one Pauli type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalLookup {
    checks: usize,
    table: Vec<Vec<bool>>,
}

impl ClassicalLookup {
    /// Breadth-first over error weight, lowest-index supports first, so every
    /// reachable syndrome gets a minimum-weight representative.
    fn build(h: &BinaryMatrix) -> Result<Self> {
        let checks = h.rows();
        let n = h.cols();
        if checks > MAX_LOOKUP_CHECKS {
            return invalid(format!(
                "lookup decoding supports at most {MAX_LOOKUP_CHECKS} checks, got {checks}"
            ));
        }
        let size = 1usize << checks;
        let mut table: Vec<Option<Vec<bool>>> = vec![None; size];
        let reachable = 1usize << h.rank();
        let mut found = 0;
        let columns: Vec<usize> = (0..n).map(|c| bits_to_index(&h.column(c))).collect();
        'outer: for w in 0..=n {
            let mut combo: Vec<usize> = (0..w).collect();
            loop {
                let s = combo.iter().fold(0, |acc, &c| acc ^ columns[c]);
                if table[s].is_none() {
                    let mut e = vec![false; n];
                    for &c in &combo {
                        e[c] = true;
                    }
                    table[s] = Some(e);
                    found += 1;
                    if found == reachable {
                        break 'outer;
                    }
                }
                if !next_combination(&mut combo, n) {
                    break;
                }
            }
        }
        // Syndromes outside the column space only arise from faulty
        // measurements when checks are dependent; leave them uncorrected.
        let table = table
            .into_iter()
            .map(|e| e.unwrap_or_else(|| vec![false; n]))
            .collect();
        Ok(Self { checks, table })
    }

    pub fn lookup(&self, syndrome: &[bool]) -> &[bool] {
        debug_assert_eq!(syndrome.len(), self.checks);
        &self.table[bits_to_index(syndrome)]
    }
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lookup decoder: X corrections from the Z-syndrome, Z corrections from the
/// X-syndrome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoderTable {
    x_part: ClassicalLookup,
    z_part: ClassicalLookup,
    n: usize,
}

impl DecoderTable {
    pub fn decode(&self, syndrome: &Syndrome) -> PauliString {
        let xs = self.x_part.lookup(&syndrome.z_bits);
        let zs = self.z_part.lookup(&syndrome.x_bits);
        PauliString::from_bits(xs, zs, false).expect("table rows have length n")
    }

    /// X-type correction for a Z-syndrome alone.
    pub fn decode_x_errors(&self, z_bits: &[bool]) -> &[bool] {
        self.x_part.lookup(z_bits)
    }

    /// Z-type correction for an X-syndrome alone.
    pub fn decode_z_errors(&self, x_bits: &[bool]) -> &[bool] {
        self.z_part.lookup(x_bits)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }
}

/// A CSS stabilizer code with one designated logical pair.
#[derive(Debug, Clone)]
pub struct CssCode {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// Z-stabilizer supports (detect bit flips).
    pub hz: BinaryMatrix,
    /// X-stabilizer supports (detect phase flips).
    pub hx: BinaryMatrix,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
    pub decoder: DecoderTable,
}

/// JSON code description `{n, d, hz, hx}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CodeDescription {
    #[serde(default)]
    pub name: Option<String>,
    pub n: usize,
    pub d: usize,
    pub hz: Vec<Vec<u8>>,
    pub hx: Vec<Vec<u8>>,
}

impl CodeDescription {
    pub fn build(&self) -> Result<CssCode> {
        let hz = BinaryMatrix::from_rows(&self.hz, self.n)?;
        let hx = BinaryMatrix::from_rows(&self.hx, self.n)?;
        let mut code = css_from_matrices(hz, hx, self.d)?;
        if let Some(name) = &self.name {
            code.name = name.clone();
        }
        Ok(code)
    }
}

impl CssCode {
    pub fn description(&self) -> CodeDescription {
        CodeDescription {
            name: Some(self.name.clone()),
            n: self.n,
            d: self.d,
            hz: self.hz.to_rows(),
            hx: self.hx.to_rows(),
        }
    }

    pub fn num_z_stabilizers(&self) -> usize {
        self.hz.rows()
    }

    pub fn num_x_stabilizers(&self) -> usize {
        self.hx.rows()
    }

    pub fn num_stabilizers(&self) -> usize {
        self.hz.rows() + self.hx.rows()
    }

    pub fn z_stabilizer(&self, i: usize) -> PauliString {
        PauliString::on_support(self.n, &self.hz.row_support(i), Pauli::Z)
    }

    pub fn x_stabilizer(&self, i: usize) -> PauliString {
        PauliString::on_support(self.n, &self.hx.row_support(i), Pauli::X)
    }

    /// Z-type generators followed by X-type generators.
    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.hz.rows())
            .map(|i| self.z_stabilizer(i))
            .chain((0..self.hx.rows()).map(|i| self.x_stabilizer(i)))
            .collect()
    }

    pub fn syndrome_of(&self, e: &PauliString) -> Result<Syndrome> {
        if e.num_qubits() != self.n {
            return invalid(format!(
                "error acts on {} qubits, code has {}",
                e.num_qubits(),
                self.n
            ));
        }
        Ok(Syndrome {
            z_bits: self.hz.mul_packed(e.x_words()),
            x_bits: self.hx.mul_packed(e.z_words()),
            round: 0,
        })
    }

    pub fn decode(&self, s: &Syndrome) -> PauliString {
        self.decoder.decode(s)
    }

    /// Whether `p` (sign ignored) is an element of the stabilizer group.
    pub fn in_stabilizer_group(&self, p: &PauliString) -> bool {
        self.hx.row_space_contains(&p.x_bits()) && self.hz.row_space_contains(&p.z_bits())
    }

    /// Whether `p` commutes with all stabilizers but is not one of them.
    pub fn is_nontrivial_logical(&self, p: &PauliString) -> bool {
        self.stabilizers().iter().all(|s| s.commutes_unchecked(p)) && !self.in_stabilizer_group(p)
    }

    /// Minimum weight of `e` up to multiplication by stabilizers (exhaustive
    /// over the stabilizer group, intended for small codes).
    pub fn reduced_weight(&self, e: &PauliString) -> usize {
        let gens = self.stabilizers();
        let m = gens.len();
        assert!(m <= 20, "reduced_weight enumerates 2^{m} stabilizers");
        let mut best = e.weight();
        let mut cur = e.clone();
        // Gray-code walk over the group.
        for i in 1u64..(1 << m) {
            let flip = i.trailing_zeros() as usize;
            cur.mul_assign(&gens[flip]).expect("same dimension");
            best = best.min(cur.weight());
        }
        best
    }

    /// Whether lookup correction of `e` leaves a stabilizer.
    pub fn corrects(&self, e: &PauliString) -> bool {
        let s = self.syndrome_of(e).expect("dimension checked by caller");
        let residual = self.decode(&s).compose(e).expect("same dimension");
        self.in_stabilizer_group(&residual)
    }
}

/// The Steane [[7,1,3]] code: both stabilizer families are the Hamming
/// checks, logical operators are transversal.
pub fn steane_code() -> CssCode {
    let h = hamming_parity_check();
    let mut code = css_from_matrices(h.clone(), h, 3).expect("Steane code is a valid CSS code");
    code.name = "steane".into();
    code.logical_x = PauliString::on_support(7, &(0..7).collect::<Vec<_>>(), Pauli::X);
    code.logical_z = PauliString::on_support(7, &(0..7).collect::<Vec<_>>(), Pauli::Z);
    code
}

/// Builds a CSS code from Z- and X-stabilizer supports.
pub fn css_from_matrices(hz: BinaryMatrix, hx: BinaryMatrix, d: usize) -> Result<CssCode> {
    if hz.cols() != hx.cols() {
        return invalid(format!(
            "hz has {} columns but hx has {}",
            hz.cols(),
            hx.cols()
        ));
    }
    let n = hz.cols();
    if n == 0 {
        return invalid("code needs at least one qubit");
    }
    let comm = hx.mul_transpose(&hz)?;
    for x_row in 0..comm.rows() {
        for z_row in 0..comm.cols() {
            if comm.get(x_row, z_row) {
                return Err(Error::CssCondition { x_row, z_row });
            }
        }
    }
    let k = n as i64 - hz.rank() as i64 - hx.rank() as i64;
    if k <= 0 {
        return Err(Error::DegenerateCode(k));
    }
    let (lx, lz) = find_logicals(&hz, &hx);
    let decoder = build_decoder_table(&hz, &hx, d)?;
    Ok(CssCode {
        name: format!("css-{n}"),
        n,
        k: k as usize,
        d,
        logical_x: PauliString::from_bits(&lx, &vec![false; n], false)?,
        logical_z: PauliString::from_bits(&vec![false; n], &lz, false)?,
        hz,
        hx,
        decoder,
    })
}

fn span(basis: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = basis.first().map_or(0, |b| b.len());
    (0u64..1 << basis.len())
        .map(|mask| {
            let mut v = vec![false; n];
            for (i, b) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (a, &x) in v.iter_mut().zip(b) {
                        *a ^= x;
                    }
                }
            }
            v
        })
        .collect()
}

fn weight_key(v: &[bool]) -> (usize, Vec<usize>) {
    let support: Vec<usize> = v.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
    (support.len(), support)
}

fn odd_overlap(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).filter(|(&x, &y)| x && y).count() % 2 == 1
}

/// One logical X/Z pair: lowest weight by exhaustive search for small codes,
/// first admissible kernel basis vector otherwise.
fn find_logicals(hz: &BinaryMatrix, hx: &BinaryMatrix) -> (Vec<bool>, Vec<bool>) {
    let n = hz.cols();
    let ker_z = hz.kernel();
    let ker_x = hx.kernel();
    if n <= EXHAUSTIVE_LOGICAL_LIMIT {
        let mut xs: Vec<Vec<bool>> = span(&ker_z)
            .into_iter()
            .filter(|v| !hx.row_space_contains(v))
            .collect();
        xs.sort_by_key(|v| weight_key(v));
        let mut zs: Vec<Vec<bool>> = span(&ker_x)
            .into_iter()
            .filter(|v| !hz.row_space_contains(v))
            .collect();
        zs.sort_by_key(|v| weight_key(v));
        for lx in &xs {
            if let Some(lz) = zs.iter().find(|lz| odd_overlap(lx, lz)) {
                return (lx.clone(), lz.clone());
            }
        }
        unreachable!("k > 0 guarantees an anticommuting logical pair");
    }
    let lx = ker_z
        .iter()
        .find(|v| !hx.row_space_contains(v))
        .cloned()
        .expect("k > 0 guarantees a logical X");
    let lz = ker_x
        .iter()
        .find(|v| odd_overlap(&lx, v))
        .cloned()
        .expect("logical X outside the X row space has an odd partner");
    (lx, lz)
}

/// Lookup tables for both error types. Fails when two errors of weight at
/// most `(d-1)/2` share a syndrome but differ by a logical operator. An error
/// family with no checks at all (for example Z errors on a classical
/// repetition code) is unprotected and skipped.
pub fn build_decoder_table(hz: &BinaryMatrix, hx: &BinaryMatrix, d: usize) -> Result<DecoderTable> {
    let n = hz.cols();
    let t = d.saturating_sub(1) / 2;
    for (checks, stabs, label) in [(hz, hx, 'X'), (hx, hz, 'Z')] {
        if checks.rows() == 0 {
            continue;
        }
        check_distance(checks, stabs, t, label)?;
    }
    Ok(DecoderTable {
        x_part: ClassicalLookup::build(hz)?,
        z_part: ClassicalLookup::build(hx)?,
        n,
    })
}

fn check_distance(checks: &BinaryMatrix, stabs: &BinaryMatrix, t: usize, label: char) -> Result<()> {
    let n = checks.cols();
    let mut seen: HashMap<Vec<bool>, Vec<usize>> = HashMap::new();
    for w in 0..=t.min(n) {
        let mut combo: Vec<usize> = (0..w).collect();
        loop {
            let mut e = vec![false; n];
            for &c in &combo {
                e[c] = true;
            }
            let s = checks.mul_vec(&e)?;
            match seen.get(&s) {
                Some(other) => {
                    let mut diff = e.clone();
                    for &c in other {
                        diff[c] ^= true;
                    }
                    if !stabs.row_space_contains(&diff) {
                        let name = |sup: &[usize]| {
                            if sup.is_empty() {
                                "I".to_string()
                            } else {
                                sup.iter().map(|q| format!("{label}{}", display_label(*q))).collect::<Vec<_>>().join(" ")
                            }
                        };
                        return Err(Error::DistanceViolation {
                            first: name(other),
                            second: name(&combo),
                        });
                    }
                }
                None => {
                    seen.insert(s, combo.clone());
                }
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    Ok(())
}

/// Eigenvalue of an operator read from a tableau without measuring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Eigenvalue {
    PlusOne,
    MinusOne,
    Indeterminate,
}

impl From<Option<bool>> for Eigenvalue {
    fn from(v: Option<bool>) -> Self {
        match v {
            Some(false) => Eigenvalue::PlusOne,
            Some(true) => Eigenvalue::MinusOne,
            None => Eigenvalue::Indeterminate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalStateReport {
    pub z_stabilizers: Vec<Eigenvalue>,
    pub x_stabilizers: Vec<Eigenvalue>,
    pub logical_z: Eigenvalue,
    pub logical_x: Eigenvalue,
}

impl LogicalStateReport {
    pub fn in_code_space(&self) -> bool {
        self.z_stabilizers
            .iter()
            .chain(&self.x_stabilizers)
            .all(|&e| e == Eigenvalue::PlusOne)
    }

    /// Syndrome implied by determinate stabilizer eigenvalues (`-1` -> 1).
    pub fn syndrome(&self) -> Option<Syndrome> {
        let conv = |v: &[Eigenvalue]| {
            v.iter()
                .map(|e| match e {
                    Eigenvalue::PlusOne => Some(false),
                    Eigenvalue::MinusOne => Some(true),
                    Eigenvalue::Indeterminate => None,
                })
                .collect::<Option<Vec<bool>>>()
        };
        Some(Syndrome {
            z_bits: conv(&self.z_stabilizers)?,
            x_bits: conv(&self.x_stabilizers)?,
            round: 0,
        })
    }
}

/// Reads stabilizer and logical eigenvalues of the code block living on
/// `block` (block qubit `i` = tableau qubit `block[i]`).
pub fn logical_state_check(
    t: &StabilizerTableau,
    code: &CssCode,
    block: &[usize],
) -> Result<LogicalStateReport> {
    if block.len() != code.n {
        return invalid(format!(
            "block has {} qubits, code needs {}",
            block.len(),
            code.n
        ));
    }
    let n = t.num_qubits();
    let read = |p: &PauliString| -> Result<Eigenvalue> { Ok(t.expectation(&p.embed(n, block))?.into()) };
    Ok(LogicalStateReport {
        z_stabilizers: (0..code.hz.rows())
            .map(|i| read(&code.z_stabilizer(i)))
            .collect::<Result<_>>()?,
        x_stabilizers: (0..code.hx.rows())
            .map(|i| read(&code.x_stabilizer(i)))
            .collect::<Result<_>>()?,
        logical_z: read(&code.logical_z)?,
        logical_x: read(&code.logical_x)?,
    })
}

/// `g_1^Z = Z4 Z5 Z6 Z7` style listing with 1-based qubit labels.
pub fn generator_notation(code: &CssCode) -> Vec<String> {
    let fmt_row = |h: &BinaryMatrix, r: usize, p: char| {
        h.row_support(r)
            .iter()
            .map(|&q| format!("{p}{}", display_label(q)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = Vec::new();
    for r in 0..code.hz.rows() {
        out.push(format!("g_{}^Z = {}", r + 1, fmt_row(&code.hz, r, 'Z')));
    }
    for r in 0..code.hx.rows() {
        out.push(format!("g_{}^X = {}", r + 1, fmt_row(&code.hx, r, 'X')));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label_qubit(q: usize) -> usize {
        q - 1
    }

    #[test]
    fn hamming_matrix_rows() {
        let h = hamming_parity_check();
        assert_eq!(
            h.to_rows(),
            vec![
                vec![0, 0, 0, 1, 1, 1, 1],
                vec![0, 1, 1, 0, 0, 1, 1],
                vec![1, 0, 1, 0, 1, 0, 1]
            ]
        );
        assert_eq!(h.mul_vec(&[false; 7]).unwrap(), vec![false; 3]);
        let mut e5 = [false; 7];
        e5[label_qubit(5)] = true;
        assert_eq!(h.mul_vec(&e5).unwrap(), vec![true, false, true]);
    }

    #[test]
    fn steane_structure() {
        let code = steane_code();
        assert_eq!((code.n, code.k, code.d), (7, 1, 3));
        assert_eq!(code.hz, code.hx);
        assert_eq!(
            code.hx.row_support(1),
            [2, 3, 6, 7].map(label_qubit).to_vec()
        );
        assert_eq!(code.z_stabilizer(0).to_string(), "+IIIZZZZ");
        assert!(!code.logical_x.commutes(&code.logical_z).unwrap());
        for s in code.stabilizers() {
            assert!(s.commutes(&code.logical_x).unwrap());
            assert!(s.commutes(&code.logical_z).unwrap());
        }
    }

    #[test]
    fn cross_type_stabilizers_commute() {
        let code = steane_code();
        for i in 0..3 {
            for j in 0..3 {
                assert!(code.z_stabilizer(i).commutes(&code.x_stabilizer(j)).unwrap());
            }
        }
    }

    #[test]
    fn generic_construction_matches_steane() {
        let h = hamming_parity_check();
        let generic = css_from_matrices(h.clone(), h, 3).unwrap();
        let steane = steane_code();
        assert_eq!(generic.stabilizers(), steane.stabilizers());
        assert_eq!(generic.k, 1);
        // Lowest-weight logicals for the generic path have weight 3.
        assert_eq!(generic.logical_x.weight(), 3);
        assert!(generic.is_nontrivial_logical(&generic.logical_x));
        assert!(!generic.logical_x.commutes(&generic.logical_z).unwrap());
    }

    #[test]
    fn css_condition_violation_named() {
        let hz = BinaryMatrix::from_rows(&[[1u8, 0, 0]], 3).unwrap();
        let hx = BinaryMatrix::from_rows(&[[1u8, 1, 0]], 3).unwrap();
        assert_eq!(
            css_from_matrices(hz, hx, 1).unwrap_err(),
            Error::CssCondition { x_row: 0, z_row: 0 }
        );
    }

    #[test]
    fn degenerate_code_rejected() {
        let hz = BinaryMatrix::identity(2);
        let hx = BinaryMatrix::zeros(0, 2);
        assert_eq!(css_from_matrices(hz, hx, 1).unwrap_err(), Error::DegenerateCode(0));
    }

    #[test]
    fn distance_violation_detected() {
        // Two-bit repetition code cannot correct one flip.
        let hz = BinaryMatrix::from_rows(&[[1u8, 1]], 2).unwrap();
        let hx = BinaryMatrix::zeros(0, 2);
        assert!(matches!(
            css_from_matrices(hz, hx, 3),
            Err(Error::DistanceViolation { .. })
        ));
    }

    #[test]
    fn repetition_code_corrects_single_bit_flips() {
        let hz = BinaryMatrix::from_rows(&[[1u8, 1, 0], [0, 1, 1]], 3).unwrap();
        let hx = BinaryMatrix::zeros(0, 3);
        let code = css_from_matrices(hz, hx, 3).unwrap();
        assert_eq!(code.k, 1);
        for q in 0..3 {
            assert!(code.corrects(&PauliString::single(3, q, Pauli::X)));
        }
        assert!(!code.corrects(&"XXI".parse().unwrap()));
    }

    #[test]
    fn syndromes_of_examples() {
        let code = steane_code();
        let s = code.syndrome_of(&PauliString::identity(7)).unwrap();
        assert!(s.is_trivial());
        let s = code.syndrome_of(&PauliString::single(7, label_qubit(5), Pauli::X)).unwrap();
        assert_eq!(s.z_bits, vec![true, false, true]);
        assert_eq!(s.x_bits, vec![false; 3]);
        let s = code.syndrome_of(&PauliString::single(7, label_qubit(3), Pauli::Y)).unwrap();
        assert_eq!(s.z_bits, vec![false, true, true]);
        assert_eq!(s.x_bits, vec![false, true, true]);
        assert!(code.syndrome_of(&PauliString::identity(6)).is_err());
    }

    #[test]
    fn bit_flip_on_five_decodes_to_x5() {
        let code = steane_code();
        let s = Syndrome {
            z_bits: vec![true, false, true],
            x_bits: vec![false; 3],
            round: 0,
        };
        assert_eq!(code.decode(&s), PauliString::single(7, label_qubit(5), Pauli::X));
        assert!(code.decode(&Syndrome::zeros(&code)).is_identity());
    }

    #[test]
    fn reduced_weight_mod_stabilizers() {
        let code = steane_code();
        // Three X's on a weight-4 stabilizer support reduce to one.
        assert_eq!(code.reduced_weight(&"IIIXXXI".parse().unwrap()), 1);
        assert_eq!(code.reduced_weight(&"XXIIIII".parse().unwrap()), 2);
        assert_eq!(code.reduced_weight(&PauliString::identity(7)), 0);
    }

    #[test]
    fn description_round_trip() {
        let code = steane_code();
        let json = serde_json::to_string(&code.description()).unwrap();
        let back: CodeDescription = serde_json::from_str(&json).unwrap();
        let rebuilt = back.build().unwrap();
        assert_eq!(rebuilt.stabilizers(), code.stabilizers());
    }

    #[test]
    fn notation_uses_one_based_labels() {
        let lines = generator_notation(&steane_code());
        assert_eq!(lines[0], "g_1^Z = Z4 Z5 Z6 Z7");
        assert_eq!(lines[4], "g_2^X = X2 X3 X6 X7");
    }
}
