//! Encoder, cat-state and encoded-ancilla circuits, and the three syndrome
//! extraction gadgets.
//!
//! Builders return circuits in a local layout documented on each function;
//! registers name the blocks so callers can map them onto a larger device.

use serde::{Deserialize, Serialize};

use crate::circuit::exec::{Executor, Noiseless};
use crate::circuit::ir::{Circuit, RegisterKind};
use crate::css::{logical_state_check, CssCode, Eigenvalue};
use crate::error::{invalid, Error, Result};
use crate::gf2::BinaryMatrix;
use crate::pauli::Pauli;
use crate::tableau::{CliffordGate, StabilizerTableau};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StabType {
    X,
    Z,
}

impl StabType {
    pub fn symbol(self) -> char {
        match self {
            StabType::X => 'X',
            StabType::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AncillaBasis {
    ZeroL,
    PlusL,
}

fn stab_support(code: &CssCode, ty: StabType, i: usize) -> Result<Vec<usize>> {
    let h = match ty {
        StabType::X => &code.hx,
        StabType::Z => &code.hz,
    };
    if i >= h.rows() {
        return invalid(format!("{}-stabilizer index {i} out of range ({} rows)", ty.symbol(), h.rows()));
    }
    Ok(h.row_support(i))
}

/// Lowest-weight vector in `v + rowspace(h)`.
fn min_weight_coset(h: &BinaryMatrix, v: &[bool]) -> Vec<bool> {
    let rows = h.to_bool_rows();
    assert!(rows.len() <= 20, "coset search over 2^{} elements", rows.len());
    let mut cur = v.to_vec();
    let mut best = cur.clone();
    for i in 1u64..(1 << rows.len()) {
        let r = &rows[i.trailing_zeros() as usize];
        cur.iter_mut().zip(r).for_each(|(a, b)| *a ^= b);
        if cur.iter().filter(|b| **b).count() < best.iter().filter(|b| **b).count() {
            best = cur.clone();
        }
    }
    best
}

fn support(v: &[bool]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect()
}

/// Encoder mapping `|0>^n` to `|0_L>`: H on the pivot of each row of
/// `rref(hx)`, then CNOTs fanning every pivot out to the rest of its row.
/// The result is a uniform superposition over the X-stabilizer row space,
/// which already satisfies every Z-stabilizer and `Z_L`.
pub fn build_encoder(code: &CssCode) -> Result<Circuit> {
    if code.k != 1 {
        return invalid(format!("encoder needs k = 1, code has k = {}", code.k));
    }
    let (r, pivots) = code.hx.rref();
    let mut c = Circuit::new(code.n, 0);
    c.add_register("data", RegisterKind::Quantum, 0, code.n);
    for &p in &pivots {
        c.h(p);
    }
    for (row, &p) in pivots.iter().enumerate() {
        for q in r.row_support(row) {
            if q != p {
                c.cx(p, q);
            }
        }
    }
    let t = StabilizerTableau::new(code.n, 0)?;
    let mut ex = Executor::new(t, Noiseless);
    ex.run_direct(&c)?;
    let block: Vec<usize> = (0..code.n).collect();
    let report = logical_state_check(&ex.backend, code, &block)?;
    if !report.in_code_space() || report.logical_z != Eigenvalue::PlusOne {
        return Err(Error::EncoderConstruction(format!("encoder output failed the stabilizer check: {report:?}")));
    }
    Ok(c)
}

/// `w + v` ancillas: H on ancilla 0 and a CNOT chain `0 -> 1 -> ... -> w+v-1`.
pub fn build_cat_prep(w: usize, v: usize) -> Result<Circuit> {
    if w < 2 {
        return invalid(format!("cat state needs w >= 2, got {w}"));
    }
    let n = w + v;
    let mut c = Circuit::new(n, 0);
    c.add_register("cat", RegisterKind::Quantum, 0, w);
    if v > 0 {
        c.add_register("ver", RegisterKind::Quantum, w, v);
    }
    c.h(0);
    for i in 0..n - 1 {
        c.cx(i, i + 1);
    }
    Ok(c)
}

/// Adjacent core pairs `(j, j+1)` checked by the verification ancillas,
/// starting from the middle of the chain where a single fault leaves the
/// heaviest uncorrectable pattern.
pub fn cat_check_pairs(w: usize, v: usize) -> Vec<(usize, usize)> {
    let links = w - 1;
    (0..v).map(|k| ((w / 2 - 1 + k) % links, (w / 2 - 1 + k) % links + 1)).collect()
}

/// Verified cat preparation on `w` core plus `v` checker qubits (local order:
/// core, then checkers). Checker `k` measures `Z_j Z_{j+1}` on the pair from
/// [`cat_check_pairs`] into clbit `k`; the cat is accepted iff all are 0.
pub fn build_verified_cat(w: usize, v: usize) -> Result<Circuit> {
    if w < 2 {
        return invalid(format!("cat state needs w >= 2, got {w}"));
    }
    let mut c = Circuit::new(w + v, v);
    c.add_register("cat", RegisterKind::Quantum, 0, w);
    c.add_register("ver", RegisterKind::Quantum, w, v);
    c.add_register("ver_m", RegisterKind::Classical, 0, v);
    for q in 0..w + v {
        c.reset(q);
    }
    c.h(0);
    for i in 0..w - 1 {
        c.cx(i, i + 1);
    }
    for (k, (a, b)) in cat_check_pairs(w, v).into_iter().enumerate() {
        c.cx(a, w + k);
        c.cx(b, w + k);
        c.measure(w + k, k);
    }
    Ok(c)
}

/// Couples a prepared cat on `w` core qubits (local `n..n+w`) to the data
/// block (`0..n`) and reads the stabilizer parity. Clbits `0..w` hold the
/// core outcomes, clbit `w` their XOR.
pub fn build_cat_coupling(code: &CssCode, stab_index: usize, stab_type: StabType) -> Result<Circuit> {
    let supp = stab_support(code, stab_type, stab_index)?;
    let (n, w) = (code.n, supp.len());
    let mut c = Circuit::new(n + w, w + 1);
    c.add_register("data", RegisterKind::Quantum, 0, n);
    c.add_register("cat", RegisterKind::Quantum, n, w);
    c.add_register("cat_m", RegisterKind::Classical, 0, w);
    c.add_register("syn", RegisterKind::Classical, w, 1);
    match stab_type {
        StabType::Z => {
            for i in 0..w {
                c.h(n + i);
            }
            for (i, &q) in supp.iter().enumerate() {
                c.cx(q, n + i);
            }
        }
        StabType::X => {
            for (i, &q) in supp.iter().enumerate() {
                c.cx(n + i, q);
            }
            for i in 0..w {
                c.h(n + i);
            }
        }
    }
    for i in 0..w {
        c.measure(n + i, i);
    }
    c.parity(w, (0..w).collect());
    Ok(c)
}

/// Shor-style extraction of one stabilizer. Local layout: data `0..n`, core
/// cat `n..n+w`, checkers `n+w..n+w+v`. Clbits: checker outcomes `0..v`,
/// core outcomes `v..v+w`, syndrome bit `v+w`.
pub fn build_shor_extraction(code: &CssCode, stab_index: usize, stab_type: StabType, v: usize) -> Result<Circuit> {
    if v == 0 {
        return invalid("Shor extraction needs at least one verification ancilla");
    }
    let coupling = build_cat_coupling(code, stab_index, stab_type)?;
    let n = code.n;
    let w = coupling.n_qubits - n;
    let prep = build_verified_cat(w, v)?;
    let mut c = Circuit::new(n + w + v, v + w + 1);
    c.add_register("data", RegisterKind::Quantum, 0, n);
    c.add_register("cat", RegisterKind::Quantum, n, w);
    c.add_register("ver", RegisterKind::Quantum, n + w, v);
    c.add_register("ver_m", RegisterKind::Classical, 0, v);
    c.add_register("cat_m", RegisterKind::Classical, v, w);
    c.add_register("syn", RegisterKind::Classical, v + w, 1);
    let prep_map: Vec<usize> = (n..n + w + v).collect();
    c.append_mapped(&prep, &prep_map, 0);
    c.tick();
    let couple_map: Vec<usize> = (0..n + w).collect();
    c.append_mapped(&coupling, &couple_map, v);
    Ok(c)
}

/// Non-fault-tolerant extraction with one bare ancilla (local `n`).
/// Clbit 0 holds the syndrome bit.
pub fn build_standard_extraction(code: &CssCode, stab_index: usize, stab_type: StabType) -> Result<Circuit> {
    let supp = stab_support(code, stab_type, stab_index)?;
    let n = code.n;
    let mut c = Circuit::new(n + 1, 1);
    c.add_register("data", RegisterKind::Quantum, 0, n);
    c.add_register("anc", RegisterKind::Quantum, n, 1);
    c.add_register("syn", RegisterKind::Classical, 0, 1);
    c.reset(n);
    match stab_type {
        StabType::Z => {
            for &q in &supp {
                c.cx(q, n);
            }
        }
        StabType::X => {
            c.h(n);
            for &q in &supp {
                c.cx(n, q);
            }
            c.h(n);
        }
    }
    c.measure(n, 0);
    Ok(c)
}

/// Clbit layout of [`build_steane_ancilla_prep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AncillaCheckBits {
    /// Z-stabilizer checks (detect X errors), one per `hz` row.
    pub z_checks: usize,
    /// X-stabilizer checks (detect Z errors), one per `hx` row.
    pub x_checks: usize,
}

impl AncillaCheckBits {
    pub fn of(code: &CssCode) -> Self {
        Self {
            z_checks: code.hz.rows(),
            x_checks: code.hx.rows(),
        }
    }

    pub fn z_range(&self) -> std::ops::Range<usize> {
        0..self.z_checks
    }

    pub fn x_range(&self) -> std::ops::Range<usize> {
        self.z_checks..self.z_checks + self.x_checks
    }

    pub fn logical(&self) -> usize {
        self.z_checks + self.x_checks
    }

    pub fn total(&self) -> usize {
        self.logical() + 1
    }
}

/// Encoded ancilla in `|0_L>` or `|+_L>` followed by
/// [`build_ancilla_verification`]. Local layout: block `0..n`, Z-check qubit
/// `n`, X-check qubit `n+1`. `|+_L>` uses transversal H and needs `hx = hz`.
pub fn build_steane_ancilla_prep(code: &CssCode, basis: AncillaBasis) -> Result<Circuit> {
    let encoder = build_encoder(code)?;
    let verify = build_ancilla_verification(code, basis)?;
    let n = code.n;
    let mut c = Circuit::new(n + 2, verify.n_clbits);
    c.registers = verify.registers.clone();
    for q in 0..n + 2 {
        c.reset(q);
    }
    let block: Vec<usize> = (0..n).collect();
    c.append_mapped(&encoder, &block, 0);
    if basis == AncillaBasis::PlusL {
        for q in 0..n {
            c.h(q);
        }
    }
    c.tick();
    let all: Vec<usize> = (0..n + 2).collect();
    c.append_mapped(&verify, &all, 0);
    Ok(c)
}

/// Measures an encoded ancilla block's stabilizers and one logical operator
/// through two reusable check qubits (layout as in
/// [`build_steane_ancilla_prep`]).
///
/// Clbits follow [`AncillaCheckBits`]: Z-checks, X-checks, then the logical
/// check (`Z_L` for `|0_L>`, `X_L` for `|+_L>`). Checks whose hook errors
/// could reach the data through the later transversal CNOTs run first, so
/// the second family catches them: X-checks first for `|0_L>`, Z-checks
/// first for `|+_L>`.
pub fn build_ancilla_verification(code: &CssCode, basis: AncillaBasis) -> Result<Circuit> {
    if basis == AncillaBasis::PlusL && code.hx != code.hz {
        return invalid("|+_L> by transversal H requires a self-dual code (hx = hz)");
    }
    let n = code.n;
    let bits = AncillaCheckBits::of(code);
    let (zq, xq) = (n, n + 1);
    let mut c = Circuit::new(n + 2, bits.total());
    c.add_register("anc", RegisterKind::Quantum, 0, n);
    c.add_register("ver", RegisterKind::Quantum, n, 2);
    c.add_register("ver_z", RegisterKind::Classical, 0, bits.z_checks);
    c.add_register("ver_x", RegisterKind::Classical, bits.z_checks, bits.x_checks);
    c.add_register("ver_l", RegisterKind::Classical, bits.logical(), 1);
    let z_check = |c: &mut Circuit, supp: &[usize], bit: usize| {
        c.reset(zq);
        for &q in supp {
            c.cx(q, zq);
        }
        c.measure(zq, bit);
    };
    let x_check = |c: &mut Circuit, supp: &[usize], bit: usize| {
        c.reset(xq);
        c.h(xq);
        for &q in supp {
            c.cx(xq, q);
        }
        c.h(xq);
        c.measure(xq, bit);
    };
    let z_checks = |c: &mut Circuit| {
        for r in 0..code.hz.rows() {
            z_check(c, &code.hz.row_support(r), bits.z_range().start + r);
        }
    };
    let x_checks = |c: &mut Circuit| {
        for r in 0..code.hx.rows() {
            x_check(c, &code.hx.row_support(r), bits.x_range().start + r);
        }
    };
    match basis {
        AncillaBasis::ZeroL => {
            x_checks(&mut c);
            z_checks(&mut c);
            let lz = min_weight_coset(&code.hz, &code.logical_z.z_bits());
            z_check(&mut c, &support(&lz), bits.logical());
        }
        AncillaBasis::PlusL => {
            z_checks(&mut c);
            x_checks(&mut c);
            let lx = min_weight_coset(&code.hx, &code.logical_x.x_bits());
            x_check(&mut c, &support(&lx), bits.logical());
        }
    }
    Ok(c)
}

/// Transversal extraction between a data block and a prepared ancilla
/// block at arbitrary positions of a `n_qubits` device.
///
/// Z-syndrome (ancilla in `|+_L>`): CNOT `data_i -> anc_i`, Z-measure the
/// ancilla. X-syndrome (ancilla in `|0_L>`): CNOT `anc_i -> data_i`,
/// X-measure the ancilla. Clbits `0..n` hold the ancilla outcomes, the next
/// `hz`/`hx` rows hold the syndrome parities.
pub fn build_steane_extraction(
    code: &CssCode,
    data: &[usize],
    anc: &[usize],
    stab_type: StabType,
    n_qubits: usize,
) -> Result<Circuit> {
    let n = code.n;
    if data.len() != n || anc.len() != n {
        return invalid(format!("blocks must both have {n} qubits"));
    }
    if data.iter().any(|q| anc.contains(q)) {
        return invalid("data and ancilla blocks overlap");
    }
    if let Some(q) = data.iter().chain(anc).find(|&&q| q >= n_qubits) {
        return invalid(format!("block qubit {q} outside {n_qubits} qubits"));
    }
    let h = match stab_type {
        StabType::Z => &code.hz,
        StabType::X => &code.hx,
    };
    let mut c = Circuit::new(n_qubits, n + h.rows());
    c.add_register("anc_m", RegisterKind::Classical, 0, n);
    c.add_register("syn", RegisterKind::Classical, n, h.rows());
    for i in 0..n {
        match stab_type {
            StabType::Z => c.cx(data[i], anc[i]),
            StabType::X => c.cx(anc[i], data[i]),
        }
    }
    for i in 0..n {
        if stab_type == StabType::X {
            c.h(anc[i]);
        }
        c.measure(anc[i], i);
    }
    for r in 0..h.rows() {
        c.parity(n + r, h.row_support(r));
    }
    Ok(c)
}

/// Three transversal CNOT layers swapping two code blocks.
pub fn build_logical_swap(a: &[usize], b: &[usize], n_qubits: usize) -> Result<Circuit> {
    if a.len() != b.len() || a.iter().any(|q| b.contains(q)) {
        return invalid("swap needs two disjoint blocks of equal size");
    }
    let mut c = Circuit::new(n_qubits, 0);
    for (from, to) in [(a, b), (b, a), (a, b)] {
        for (&x, &y) in from.iter().zip(to) {
            c.gate(CliffordGate::Cnot(x, y));
        }
    }
    c.validate()?;
    Ok(c)
}

/// Transversal logical Pauli on a block.
pub fn logical_pauli_layer(block: &[usize], p: Pauli, n_qubits: usize) -> Circuit {
    let mut c = Circuit::new(n_qubits, 0);
    for &q in block {
        if let Some(g) = CliffordGate::from_pauli(p, q) {
            c.gate(g);
        }
    }
    c
}
