//! Circuit instructions, registers, resource statistics and the line-based
//! text format.
//!
//! ```text
//! QUBITS 11
//! CLBITS 4
//! QREG data 0 7
//! CREG syn 0 3
//! H 7
//! CX 0 7
//! NOISE2 0 7
//! MNOISE 7
//! M 7 -> c0
//! PARITY c3 = c0 c1 c2
//! CPAULI X 4 if c0 !c1 c2
//! TICK
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::pauli::Pauli;
use crate::tableau::CliffordGate;

/// Where a stochastic channel acts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NoiseSite {
    /// After a single-qubit gate.
    Gate1(usize),
    /// After a two-qubit gate.
    Gate2(usize, usize),
    /// Readout flip of the next measurement of this qubit.
    Meas(usize),
    /// Idle decoherence for `duration_us`.
    Idle(usize, f64),
}

impl NoiseSite {
    /// First (or only) qubit of the site.
    pub fn qubit(&self) -> usize {
        match *self {
            NoiseSite::Gate1(q) | NoiseSite::Meas(q) | NoiseSite::Idle(q, _) | NoiseSite::Gate2(q, _) => q,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            NoiseSite::Gate1(q) | NoiseSite::Meas(q) | NoiseSite::Idle(q, _) => vec![q],
            NoiseSite::Gate2(a, b) => vec![a, b],
        }
    }
}

/// A literal in a classical condition: clbit must equal `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalLiteral {
    pub clbit: usize,
    pub value: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Instruction {
    Gate(CliffordGate),
    Measure { qubit: usize, clbit: usize },
    Reset(usize),
    Noise(NoiseSite),
    /// `target := XOR of sources` on classical bits.
    Parity { target: usize, sources: Vec<usize> },
    /// Pauli applied when every literal holds.
    CondPauli {
        pauli: Pauli,
        qubit: usize,
        condition: Vec<ClassicalLiteral>,
    },
    /// Round / phase separator; no effect on execution.
    Tick,
}

impl Instruction {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Instruction::Gate(g) => g.qubits(),
            Instruction::Measure { qubit, .. } | Instruction::Reset(qubit) => vec![*qubit],
            Instruction::CondPauli { qubit, .. } => vec![*qubit],
            Instruction::Noise(site) => site.qubits(),
            Instruction::Parity { .. } | Instruction::Tick => vec![],
        }
    }

    pub fn clbits(&self) -> Vec<usize> {
        match self {
            Instruction::Measure { clbit, .. } => vec![*clbit],
            Instruction::Parity { target, sources } => {
                let mut v = sources.clone();
                v.push(*target);
                v
            }
            Instruction::CondPauli { condition, .. } => condition.iter().map(|l| l.clbit).collect(),
            _ => vec![],
        }
    }

    /// Whether the instruction occupies its qubits for a time step.
    pub fn is_operation(&self) -> bool {
        matches!(
            self,
            Instruction::Gate(_) | Instruction::Measure { .. } | Instruction::Reset(_) | Instruction::CondPauli { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegisterKind {
    Quantum,
    Classical,
}

/// Named contiguous index range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub kind: RegisterKind,
    pub start: usize,
    pub len: usize,
}

impl Register {
    pub fn indices(&self) -> Vec<usize> {
        (self.start..self.start + self.len).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub n_clbits: usize,
    pub instructions: Vec<Instruction>,
    pub registers: Vec<Register>,
    /// Set once noise sites have been inserted.
    pub instrumented: bool,
}

/// Width, depth and operation counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub width: usize,
    pub depth: usize,
    pub gate_counts: BTreeMap<String, usize>,
    pub measurements: usize,
    pub resets: usize,
    pub noise_sites: BTreeMap<String, usize>,
}

impl CircuitStats {
    pub fn gates(&self, name: &str) -> usize {
        self.gate_counts.get(name).copied().unwrap_or(0)
    }

    pub fn total_gates(&self) -> usize {
        self.gate_counts.values().sum()
    }

    pub fn one_qubit_gates(&self) -> usize {
        self.gate_counts
            .iter()
            .filter(|(k, _)| k.as_str() != "CX" && k.as_str() != "CPAULI")
            .map(|(_, v)| v)
            .sum()
    }

    pub fn sites(&self, name: &str) -> usize {
        self.noise_sites.get(name).copied().unwrap_or(0)
    }
}

impl Circuit {
    pub fn new(n_qubits: usize, n_clbits: usize) -> Self {
        Self {
            n_qubits,
            n_clbits,
            ..Default::default()
        }
    }

    pub fn push(&mut self, inst: Instruction) {
        self.instructions.push(inst);
    }

    pub fn gate(&mut self, g: CliffordGate) {
        self.push(Instruction::Gate(g));
    }

    pub fn h(&mut self, q: usize) {
        self.gate(CliffordGate::H(q));
    }

    pub fn cx(&mut self, c: usize, t: usize) {
        self.gate(CliffordGate::Cnot(c, t));
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) {
        self.push(Instruction::Measure { qubit, clbit });
    }

    pub fn reset(&mut self, q: usize) {
        self.push(Instruction::Reset(q));
    }

    pub fn parity(&mut self, target: usize, sources: Vec<usize>) {
        self.push(Instruction::Parity { target, sources });
    }

    pub fn tick(&mut self) {
        self.push(Instruction::Tick);
    }

    pub fn add_register(&mut self, name: &str, kind: RegisterKind, start: usize, len: usize) {
        self.registers.push(Register {
            name: name.to_string(),
            kind,
            start,
            len,
        });
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    /// Register indices, panicking on unknown names (builder-internal use).
    pub fn reg(&self, name: &str) -> Vec<usize> {
        self.register(name)
            .unwrap_or_else(|| panic!("circuit has no register {name:?}"))
            .indices()
    }

    /// Range checks on every index.
    pub fn validate(&self) -> Result<()> {
        for (i, inst) in self.instructions.iter().enumerate() {
            if let Instruction::Gate(g) = inst {
                g.validate(self.n_qubits)
                    .map_err(|e| Error::InvalidArgument(format!("instruction {i}: {e}")))?;
            }
            if let Some(q) = inst.qubits().into_iter().find(|&q| q >= self.n_qubits) {
                return invalid(format!("instruction {i}: qubit {q} out of range ({} qubits)", self.n_qubits));
            }
            if let Some(c) = inst.clbits().into_iter().find(|&c| c >= self.n_clbits) {
                return invalid(format!("instruction {i}: clbit {c} out of range ({} clbits)", self.n_clbits));
            }
        }
        for r in &self.registers {
            let limit = match r.kind {
                RegisterKind::Quantum => self.n_qubits,
                RegisterKind::Classical => self.n_clbits,
            };
            if r.start + r.len > limit {
                return invalid(format!("register {} exceeds {limit}", r.name));
            }
        }
        Ok(())
    }

    /// Append `other`, mapping its qubit `i` to `qubit_map[i]` and shifting
    /// its classical bits by `clbit_offset`.
    pub fn append_mapped(&mut self, other: &Circuit, qubit_map: &[usize], clbit_offset: usize) {
        assert!(qubit_map.len() >= other.n_qubits, "qubit map too short");
        let q = |i: usize| qubit_map[i];
        let c = |i: usize| i + clbit_offset;
        for inst in &other.instructions {
            let mapped = match inst {
                Instruction::Gate(g) => Instruction::Gate(g.remap(qubit_map)),
                Instruction::Measure { qubit, clbit } => Instruction::Measure {
                    qubit: q(*qubit),
                    clbit: c(*clbit),
                },
                Instruction::Reset(a) => Instruction::Reset(q(*a)),
                Instruction::Noise(site) => Instruction::Noise(match *site {
                    NoiseSite::Gate1(a) => NoiseSite::Gate1(q(a)),
                    NoiseSite::Gate2(a, b) => NoiseSite::Gate2(q(a), q(b)),
                    NoiseSite::Meas(a) => NoiseSite::Meas(q(a)),
                    NoiseSite::Idle(a, t) => NoiseSite::Idle(q(a), t),
                }),
                Instruction::Parity { target, sources } => Instruction::Parity {
                    target: c(*target),
                    sources: sources.iter().map(|&s| c(s)).collect(),
                },
                Instruction::CondPauli { pauli, qubit, condition } => Instruction::CondPauli {
                    pauli: *pauli,
                    qubit: q(*qubit),
                    condition: condition
                        .iter()
                        .map(|l| ClassicalLiteral {
                            clbit: c(l.clbit),
                            value: l.value,
                        })
                        .collect(),
                },
                Instruction::Tick => Instruction::Tick,
            };
            self.instructions.push(mapped);
        }
        self.instrumented |= other.instrumented;
    }

    /// ASAP layer index (1-based) of every operation; noise, parity and ticks
    /// get 0.
    pub fn layers(&self) -> Vec<usize> {
        let mut front = vec![0usize; self.n_qubits];
        self.instructions
            .iter()
            .map(|inst| {
                if !inst.is_operation() {
                    return 0;
                }
                let qs = inst.qubits();
                let layer = qs.iter().map(|&q| front[q]).max().unwrap_or(0) + 1;
                for q in qs {
                    front[q] = layer;
                }
                layer
            })
            .collect()
    }

    pub fn depth(&self) -> usize {
        self.layers().into_iter().max().unwrap_or(0)
    }

    pub fn stats(&self) -> CircuitStats {
        let mut gate_counts = BTreeMap::new();
        let mut noise_sites = BTreeMap::new();
        let (mut measurements, mut resets) = (0, 0);
        for inst in &self.instructions {
            match inst {
                Instruction::Gate(g) => *gate_counts.entry(g.name().to_string()).or_insert(0) += 1,
                Instruction::CondPauli { .. } => *gate_counts.entry("CPAULI".to_string()).or_insert(0) += 1,
                Instruction::Measure { .. } => measurements += 1,
                Instruction::Reset(_) => resets += 1,
                Instruction::Noise(site) => {
                    let key = match site {
                        NoiseSite::Gate1(_) => "NOISE1",
                        NoiseSite::Gate2(..) => "NOISE2",
                        NoiseSite::Meas(_) => "MNOISE",
                        NoiseSite::Idle(..) => "IDLE",
                    };
                    *noise_sites.entry(key.to_string()).or_insert(0) += 1;
                }
                Instruction::Parity { .. } | Instruction::Tick => {}
            }
        }
        CircuitStats {
            width: self.n_qubits,
            depth: self.depth(),
            gate_counts,
            measurements,
            resets,
            noise_sites,
        }
    }

    /// Fixed-width lane drawing, one row per qubit, `|` at ticks.
    pub fn render(&self) -> String {
        let layers = self.layers();
        let mut columns: Vec<Vec<String>> = Vec::new();
        // Layers restart their column numbering after every tick.
        let mut offset = 0;
        let mut base_layer = 0;
        let mut seen_layer = 0;
        for (inst, &layer) in self.instructions.iter().zip(&layers) {
            if let Instruction::Tick = inst {
                columns.push(vec!["|".into(); self.n_qubits]);
                offset = columns.len();
                base_layer = seen_layer;
                continue;
            }
            seen_layer = seen_layer.max(layer);
            if layer == 0 {
                continue;
            }
            let col = offset + layer.saturating_sub(base_layer + 1);
            while columns.len() <= col {
                columns.push(vec!["-".into(); self.n_qubits]);
            }
            match inst {
                Instruction::Gate(CliffordGate::Cnot(c, t)) => {
                    columns[col][*c] = "@".into();
                    columns[col][*t] = "X".into();
                    for q in *c.min(t) + 1..*c.max(t) {
                        if columns[col][q] == "-" {
                            columns[col][q] = "+".into();
                        }
                    }
                }
                Instruction::Gate(g) => columns[col][g.qubits()[0]] = g.name().into(),
                Instruction::Measure { qubit, .. } => columns[col][*qubit] = "M".into(),
                Instruction::Reset(q) => columns[col][*q] = "R".into(),
                Instruction::CondPauli { pauli, qubit, .. } => {
                    columns[col][*qubit] = pauli.symbol().to_ascii_lowercase().to_string()
                }
                _ => {}
            }
        }
        let label_width = format!("q{}", self.n_qubits.saturating_sub(1)).len();
        let mut out = String::new();
        for q in 0..self.n_qubits {
            let _ = write!(out, "{:>label_width$}: ", format!("q{q}"));
            for col in &columns {
                let cell = &col[q];
                let fill = if cell == "|" { ' ' } else { '-' };
                let _ = write!(out, "{fill}{cell}{fill}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn fmt_condition(cond: &[ClassicalLiteral]) -> String {
    cond.iter()
        .map(|l| format!("{}c{}", if l.value { "" } else { "!" }, l.clbit))
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Gate(g) => write!(f, "{g}"),
            Instruction::Measure { qubit, clbit } => write!(f, "M {qubit} -> c{clbit}"),
            Instruction::Reset(q) => write!(f, "R {q}"),
            Instruction::Noise(NoiseSite::Gate1(q)) => write!(f, "NOISE1 {q}"),
            Instruction::Noise(NoiseSite::Gate2(a, b)) => write!(f, "NOISE2 {a} {b}"),
            Instruction::Noise(NoiseSite::Meas(q)) => write!(f, "MNOISE {q}"),
            Instruction::Noise(NoiseSite::Idle(q, t)) => write!(f, "IDLE {q} {t}"),
            Instruction::Parity { target, sources } => {
                write!(f, "PARITY c{target} =")?;
                for s in sources {
                    write!(f, " c{s}")?;
                }
                Ok(())
            }
            Instruction::CondPauli { pauli, qubit, condition } => {
                write!(f, "CPAULI {pauli} {qubit} if {}", fmt_condition(condition))
            }
            Instruction::Tick => write!(f, "TICK"),
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QUBITS {}", self.n_qubits)?;
        writeln!(f, "CLBITS {}", self.n_clbits)?;
        if self.instrumented {
            writeln!(f, "INSTRUMENTED")?;
        }
        for r in &self.registers {
            let tag = match r.kind {
                RegisterKind::Quantum => "QREG",
                RegisterKind::Classical => "CREG",
            };
            writeln!(f, "{tag} {} {} {}", r.name, r.start, r.len)?;
        }
        for inst in &self.instructions {
            writeln!(f, "{inst}")?;
        }
        Ok(())
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::Parse { line, msg: format!("expected integer, got {tok:?}") })
}

fn parse_clbit(tok: &str, line: usize) -> Result<usize> {
    let body = tok
        .strip_prefix('c')
        .ok_or_else(|| Error::Parse { line, msg: format!("expected clbit like c3, got {tok:?}") })?;
    parse_usize(body, line)
}

fn parse_literal(tok: &str, line: usize) -> Result<ClassicalLiteral> {
    let (value, body) = match tok.strip_prefix('!') {
        Some(rest) => (false, rest),
        None => (true, tok),
    };
    Ok(ClassicalLiteral { clbit: parse_clbit(body, line)?, value })
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut c = Circuit::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
            let arity = |k: usize| -> Result<()> {
                if toks.len() != k {
                    Err(Error::Parse {
                        line,
                        msg: format!("{} expects {} operands, got {}", toks[0], k - 1, toks.len() - 1),
                    })
                } else {
                    Ok(())
                }
            };
            let q = |i: usize| parse_usize(toks[i], line);
            match toks[0] {
                "QUBITS" => {
                    arity(2)?;
                    c.n_qubits = q(1)?;
                }
                "CLBITS" => {
                    arity(2)?;
                    c.n_clbits = q(1)?;
                }
                "INSTRUMENTED" => c.instrumented = true,
                "QREG" | "CREG" => {
                    arity(4)?;
                    let kind = if toks[0] == "QREG" { RegisterKind::Quantum } else { RegisterKind::Classical };
                    c.add_register(toks[1], kind, q(2)?, q(3)?);
                }
                "H" | "X" | "Y" | "Z" | "S" => {
                    arity(2)?;
                    let a = q(1)?;
                    c.gate(match toks[0] {
                        "H" => CliffordGate::H(a),
                        "X" => CliffordGate::X(a),
                        "Y" => CliffordGate::Y(a),
                        "Z" => CliffordGate::Z(a),
                        _ => CliffordGate::S(a),
                    });
                }
                "CX" | "CNOT" => {
                    arity(3)?;
                    c.cx(q(1)?, q(2)?);
                }
                "M" => {
                    arity(4)?;
                    if toks[2] != "->" {
                        return Err(err("expected `M q -> cK`"));
                    }
                    c.measure(q(1)?, parse_clbit(toks[3], line)?);
                }
                "R" => {
                    arity(2)?;
                    c.reset(q(1)?);
                }
                "NOISE1" => {
                    arity(2)?;
                    c.push(Instruction::Noise(NoiseSite::Gate1(q(1)?)));
                }
                "NOISE2" => {
                    arity(3)?;
                    c.push(Instruction::Noise(NoiseSite::Gate2(q(1)?, q(2)?)));
                }
                "MNOISE" => {
                    arity(2)?;
                    c.push(Instruction::Noise(NoiseSite::Meas(q(1)?)));
                }
                "IDLE" => {
                    arity(3)?;
                    let t: f64 = toks[2].parse().map_err(|_| err("bad idle duration"))?;
                    c.push(Instruction::Noise(NoiseSite::Idle(q(1)?, t)));
                }
                "PARITY" => {
                    if toks.len() < 3 || toks[2] != "=" {
                        return Err(err("expected `PARITY cT = cA cB ...`"));
                    }
                    let target = parse_clbit(toks[1], line)?;
                    let sources = toks[3..].iter().map(|t| parse_clbit(t, line)).collect::<Result<_>>()?;
                    c.parity(target, sources);
                }
                "CPAULI" => {
                    if toks.len() < 5 || toks[3] != "if" {
                        return Err(err("expected `CPAULI P q if cK ...`"));
                    }
                    let pauli = match toks[1] {
                        "X" => Pauli::X,
                        "Y" => Pauli::Y,
                        "Z" => Pauli::Z,
                        other => return Err(err(&format!("bad Pauli {other:?}"))),
                    };
                    let condition = toks[4..].iter().map(|t| parse_literal(t, line)).collect::<Result<_>>()?;
                    c.push(Instruction::CondPauli { pauli, qubit: q(2)?, condition });
                }
                "TICK" => c.tick(),
                other => return Err(err(&format!("unknown instruction {other:?}"))),
            }
        }
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Circuit {
        let mut c = Circuit::new(3, 3);
        c.add_register("data", RegisterKind::Quantum, 0, 2);
        c.add_register("syn", RegisterKind::Classical, 0, 3);
        c.h(0);
        c.cx(0, 2);
        c.push(Instruction::Noise(NoiseSite::Gate2(0, 2)));
        c.push(Instruction::Noise(NoiseSite::Idle(1, 0.25)));
        c.push(Instruction::Noise(NoiseSite::Meas(2)));
        c.measure(2, 0);
        c.reset(2);
        c.parity(2, vec![0, 1]);
        c.push(Instruction::CondPauli {
            pauli: Pauli::X,
            qubit: 1,
            condition: vec![
                ClassicalLiteral { clbit: 0, value: true },
                ClassicalLiteral { clbit: 1, value: false },
            ],
        });
        c.tick();
        c
    }

    #[test]
    fn text_round_trip() {
        let c = sample();
        let text = c.to_text();
        assert!(text.contains("CX 0 2"));
        assert!(text.contains("M 2 -> c0"));
        assert!(text.contains("CPAULI X 1 if c0 !c1"));
        let back: Circuit = text.parse().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn spec_style_lines_parse() {
        let text = "QUBITS 6\nCLBITS 3\nH 3\nCX 0 4\nM 4 -> c2\nR 4\nNOISE2 0 4\nCPAULI X 5 if c2\n";
        let c: Circuit = text.parse().unwrap();
        assert_eq!(c.instructions.len(), 6);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = "QUBITS 2\nCLBITS 0\nFOO 1\n".parse::<Circuit>().unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, msg: "unknown instruction \"FOO\"".into() });
        assert!("QUBITS 2\nH 5\n".parse::<Circuit>().is_err());
        assert!("QUBITS 2\nCLBITS 1\nM 0 -> c4\n".parse::<Circuit>().is_err());
    }

    #[test]
    fn empty_circuit_stats() {
        let s = Circuit::new(5, 0).stats();
        assert_eq!((s.width, s.depth, s.total_gates()), (5, 0, 0));
    }

    #[test]
    fn depth_is_longest_chain() {
        let mut c = Circuit::new(4, 0);
        c.h(0);
        c.h(1);
        c.cx(0, 1);
        c.h(3);
        assert_eq!(c.depth(), 2);
        let s = c.stats();
        assert_eq!(s.gates("H"), 3);
        assert_eq!(s.gates("CX"), 1);
    }

    #[test]
    fn render_has_one_lane_per_qubit() {
        let art = sample().render();
        assert_eq!(art.lines().count(), 3);
        assert!(art.contains('@'));
    }
}
