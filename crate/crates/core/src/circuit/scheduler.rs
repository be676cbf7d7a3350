//! The unified error-correction cycle: per-mode qubit layouts, the step plan
//! of one round, and the static multi-round circuit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::builders::{
    build_ancilla_verification, build_cat_coupling, build_logical_swap, build_standard_extraction,
    build_steane_ancilla_prep, build_steane_extraction, build_verified_cat, AncillaBasis, AncillaCheckBits,
    StabType,
};
use crate::circuit::ir::{Circuit, ClassicalLiteral, Instruction, RegisterKind};
use crate::css::{bits_to_index, CssCode};
use crate::error::{Error, Result};
use crate::pauli::Pauli;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Standard,
    Cat,
    Steane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Readout {
    Sequential,
    Batched,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Standard, Mode::Cat, Mode::Steane];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Standard => "standard",
            Mode::Cat => "cat",
            Mode::Steane => "steane",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(Mode::Standard),
            "cat" | "shor" => Ok(Mode::Cat),
            "steane" => Ok(Mode::Steane),
            other => Err(Error::Config(format!("unknown mode {other:?}"))),
        }
    }
}

impl FromStr for Readout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sequential" => Ok(Readout::Sequential),
            "batched" => Ok(Readout::Batched),
            other => Err(Error::Config(format!("unknown readout {other:?}"))),
        }
    }
}

fn default_verify() -> usize {
    2
}

fn default_true() -> bool {
    true
}

fn default_attempts() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchedulerConfig {
    pub mode: Mode,
    pub readout: Readout,
    pub rounds: usize,
    /// Cat verification depth `v`.
    #[serde(default = "default_verify")]
    pub verify: usize,
    /// Preparation attempts per ancilla request (cat and steane modes).
    #[serde(default = "default_attempts")]
    pub max_prep_attempts: usize,
    #[serde(default)]
    pub swap_policy: bool,
    /// Track recovery in software instead of emitting conditional Paulis.
    #[serde(default)]
    pub pauli_frame: bool,
    /// Re-extract a nonzero syndrome and correct only if both agree.
    #[serde(default = "default_true")]
    pub confirm_syndrome: bool,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Steane,
            readout: Readout::Sequential,
            rounds: 10,
            verify: default_verify(),
            max_prep_attempts: default_attempts(),
            swap_policy: false,
            pauli_frame: false,
            confirm_syndrome: true,
        }
    }
}

impl SchedulerConfig {
    pub fn new(mode: Mode, readout: Readout, rounds: usize) -> Self {
        Self {
            mode,
            readout,
            rounds,
            ..Self::default()
        }
    }

    pub fn with_verify(mut self, v: usize) -> Self {
        self.verify = v;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Config(m));
        if self.rounds == 0 {
            return err("rounds must be positive".into());
        }
        if self.mode == Mode::Cat && self.verify == 0 {
            return err("cat mode needs verify >= 1".into());
        }
        if self.mode != Mode::Standard && self.max_prep_attempts == 0 {
            return err("max_prep_attempts must be >= 1".into());
        }
        if self.swap_policy && self.mode != Mode::Steane {
            return err(format!("swap_policy applies to steane mode, not {}", self.mode));
        }
        Ok(())
    }
}

/// Where each role lives on the device.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub n_total: usize,
    pub data: Vec<usize>,
    /// Qubits coupled to the data (bare ancillas, cat cores, ancilla blocks).
    pub ancilla: Vec<usize>,
    /// Verification / checker qubits.
    pub verification: Vec<usize>,
}

impl Layout {
    pub fn n_anc(&self) -> usize {
        self.ancilla.len() + self.verification.len()
    }
}

/// One syndrome bit produced by an extraction unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndromeBit {
    pub stab_type: StabType,
    pub index: usize,
    pub clbit: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PrepKind {
    /// Verified cat; accepted iff every clbit is 0.
    /// Cat state on `core`.
    Cat { core: Vec<usize> },
    /// Encoded ancilla on `block` with `check` qubits and a standalone
    /// verification circuit for correct-and-reverify.
    Encoded {
        basis: AncillaBasis,
        block: Vec<usize>,
        verify: Circuit,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrepUnit {
    pub circuit: Circuit,
    pub kind: PrepKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractUnit {
    pub circuit: Circuit,
    pub prep: Option<usize>,
    pub outputs: Vec<SyndromeBit>,
    /// Standard-extraction units to run when the prep is exhausted.
    pub fallback: Vec<usize>,
}

/// Which syndrome family a decode step consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecodeScope {
    /// Z-stabilizer bits, correcting X errors.
    ZChecks,
    /// X-stabilizer bits, correcting Z errors.
    XChecks,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Prep(usize),
    Extract(usize),
    Decode(DecodeScope),
}

/// Circuits and step order for one round on a fixed layout. Every unit
/// circuit acts on the full device (`layout.n_total` qubits) with its own
/// classical bits.
#[derive(Debug, Clone)]
pub struct RoundPlan {
    pub mode: Mode,
    pub readout: Readout,
    pub layout: Layout,
    pub preps: Vec<PrepUnit>,
    pub extracts: Vec<ExtractUnit>,
    /// Fallback-only extraction units (not referenced by `steps`).
    pub fallbacks: Vec<ExtractUnit>,
    pub steps: Vec<Step>,
    /// Logical SWAP between the data block and the first ancilla block
    /// (steane mode only).
    pub swap: Option<Circuit>,
}

fn stabilizer_order(code: &CssCode) -> Vec<(StabType, usize)> {
    (0..code.hz.rows())
        .map(|i| (StabType::Z, i))
        .chain((0..code.hx.rows()).map(|i| (StabType::X, i)))
        .collect()
}

fn weight(code: &CssCode, ty: StabType, i: usize) -> usize {
    match ty {
        StabType::Z => code.hz.row_support(i).len(),
        StabType::X => code.hx.row_support(i).len(),
    }
}

fn on_device(c: &Circuit, map: &[usize], n_total: usize) -> Circuit {
    let mut out = Circuit::new(n_total, c.n_clbits);
    out.registers = c
        .registers
        .iter()
        .filter(|r| r.kind == RegisterKind::Classical)
        .cloned()
        .collect();
    out.append_mapped(c, map, 0);
    out
}

fn scope_steps(readout: Readout, z_steps: Vec<Step>, x_steps: Vec<Step>, preps_first: Vec<Step>) -> Vec<Step> {
    match readout {
        Readout::Sequential => {
            let mut s = z_steps;
            s.push(Step::Decode(DecodeScope::ZChecks));
            s.extend(x_steps);
            s.push(Step::Decode(DecodeScope::XChecks));
            s
        }
        Readout::Batched => {
            let mut s = preps_first;
            s.extend(z_steps);
            s.extend(x_steps);
            s.push(Step::Decode(DecodeScope::All));
            s
        }
    }
}

impl RoundPlan {
    pub fn new(code: &CssCode, config: &SchedulerConfig) -> Result<Self> {
        config.validate()?;
        match config.mode {
            Mode::Standard => Self::standard(code, config.readout),
            Mode::Cat => Self::cat(code, config.readout, config.verify),
            Mode::Steane => Self::steane(code, config.readout, false),
        }
    }

    /// The plan with data and first ancilla block exchanged (steane mode,
    /// after a logical SWAP).
    pub fn swapped(code: &CssCode, config: &SchedulerConfig) -> Result<Self> {
        config.validate()?;
        if config.mode != Mode::Steane {
            return Err(Error::Config("only steane mode has a swapped layout".into()));
        }
        Self::steane(code, config.readout, true)
    }

    fn standard(code: &CssCode, readout: Readout) -> Result<Self> {
        let n = code.n;
        let order = stabilizer_order(code);
        let n_anc = match readout {
            Readout::Sequential => 1,
            Readout::Batched => order.len(),
        };
        let layout = Layout {
            n_total: n + n_anc,
            data: (0..n).collect(),
            ancilla: (n..n + n_anc).collect(),
            verification: vec![],
        };
        let mut extracts = Vec::new();
        let (mut zs, mut xs) = (Vec::new(), Vec::new());
        for (k, &(ty, i)) in order.iter().enumerate() {
            let anc = if n_anc == 1 { n } else { n + k };
            let mut map: Vec<usize> = (0..n).collect();
            map.push(anc);
            let c = build_standard_extraction(code, i, ty)?;
            extracts.push(ExtractUnit {
                circuit: on_device(&c, &map, layout.n_total),
                prep: None,
                outputs: vec![SyndromeBit {
                    stab_type: ty,
                    index: i,
                    clbit: 0,
                }],
                fallback: vec![],
            });
            let step = Step::Extract(extracts.len() - 1);
            match ty {
                StabType::Z => zs.push(step),
                StabType::X => xs.push(step),
            }
        }
        Ok(Self {
            mode: Mode::Standard,
            readout,
            steps: scope_steps(readout, zs, xs, vec![]),
            layout,
            preps: vec![],
            extracts,
            fallbacks: vec![],
            swap: None,
        })
    }

    fn cat(code: &CssCode, readout: Readout, v: usize) -> Result<Self> {
        let n = code.n;
        let order = stabilizer_order(code);
        let groups = code.hz.rows().max(code.hx.rows());
        let (core_total, ver_total) = match readout {
            Readout::Sequential => (order.iter().map(|&(t, i)| weight(code, t, i)).max().unwrap_or(0), v),
            Readout::Batched => (order.iter().map(|&(t, i)| weight(code, t, i)).sum(), v * groups),
        };
        let layout = Layout {
            n_total: n + core_total + ver_total,
            data: (0..n).collect(),
            ancilla: (n..n + core_total).collect(),
            verification: (n + core_total..n + core_total + ver_total).collect(),
        };
        let mut preps = Vec::new();
        let mut extracts = Vec::new();
        let (mut zs, mut xs, mut prep_steps) = (Vec::new(), Vec::new(), Vec::new());
        let mut core_offset = n;
        for &(ty, i) in &order {
            let w = weight(code, ty, i);
            let core: Vec<usize> = match readout {
                Readout::Sequential => (n..n + w).collect(),
                Readout::Batched => (core_offset..core_offset + w).collect(),
            };
            core_offset += w;
            let ver_base = match readout {
                Readout::Sequential => n + core_total,
                Readout::Batched => n + core_total + i * v,
            };
            let ver: Vec<usize> = (ver_base..ver_base + v).collect();
            let prep = build_verified_cat(w, v)?;
            let map: Vec<usize> = core.iter().chain(&ver).copied().collect();
            preps.push(PrepUnit {
                circuit: on_device(&prep, &map, layout.n_total),
                kind: PrepKind::Cat { core: core.to_vec() },
            });
            let coupling = build_cat_coupling(code, i, ty)?;
            let map: Vec<usize> = (0..n).chain(core.iter().copied()).collect();
            extracts.push(ExtractUnit {
                circuit: on_device(&coupling, &map, layout.n_total),
                prep: Some(preps.len() - 1),
                outputs: vec![SyndromeBit {
                    stab_type: ty,
                    index: i,
                    clbit: w,
                }],
                fallback: vec![],
            });
            let (p, e) = (Step::Prep(preps.len() - 1), Step::Extract(extracts.len() - 1));
            let list = match ty {
                StabType::Z => &mut zs,
                StabType::X => &mut xs,
            };
            match readout {
                Readout::Sequential => list.extend([p, e]),
                Readout::Batched => {
                    prep_steps.push(p);
                    list.push(e);
                }
            }
        }
        Ok(Self {
            mode: Mode::Cat,
            readout,
            steps: scope_steps(readout, zs, xs, prep_steps),
            layout,
            preps,
            extracts,
            fallbacks: vec![],
            swap: None,
        })
    }

    fn steane(code: &CssCode, readout: Readout, swapped: bool) -> Result<Self> {
        let n = code.n;
        let blocks = match readout {
            Readout::Sequential => 1,
            Readout::Batched => 2,
        };
        let n_total = n * (1 + blocks) + 2;
        let mut data: Vec<usize> = (0..n).collect();
        let mut first: Vec<usize> = (n..2 * n).collect();
        if swapped {
            std::mem::swap(&mut data, &mut first);
        }
        let second: Vec<usize> = if blocks == 2 { (2 * n..3 * n).collect() } else { first.clone() };
        let checks = vec![n * (1 + blocks), n * (1 + blocks) + 1];
        let layout = Layout {
            n_total,
            data: data.clone(),
            ancilla: if blocks == 2 {
                first.iter().chain(&second).copied().collect()
            } else {
                first.clone()
            },
            verification: checks.clone(),
        };
        let mut preps = Vec::new();
        let mut extracts = Vec::new();
        let mut fallbacks = Vec::new();
        let mut steps_for = |basis: AncillaBasis, block: &[usize], ty: StabType| -> Result<(Step, Step)> {
            let map: Vec<usize> = block.iter().chain(&checks).copied().collect();
            let prep = build_steane_ancilla_prep(code, basis)?;
            let verify = build_ancilla_verification(code, basis)?;
            preps.push(PrepUnit {
                circuit: on_device(&prep, &map, n_total),
                kind: PrepKind::Encoded {
                    basis,
                    block: block.to_vec(),
                    verify: on_device(&verify, &map, n_total),
                },
            });
            let ext = build_steane_extraction(code, &data, block, ty, n_total)?;
            let rows = match ty {
                StabType::Z => code.hz.rows(),
                StabType::X => code.hx.rows(),
            };
            let mut fb = Vec::new();
            for i in 0..rows {
                let c = build_standard_extraction(code, i, ty)?;
                let mut map = data.clone();
                map.push(block[0]);
                fallbacks.push(ExtractUnit {
                    circuit: on_device(&c, &map, n_total),
                    prep: None,
                    outputs: vec![SyndromeBit {
                        stab_type: ty,
                        index: i,
                        clbit: 0,
                    }],
                    fallback: vec![],
                });
                fb.push(fallbacks.len() - 1);
            }
            extracts.push(ExtractUnit {
                circuit: ext,
                prep: Some(preps.len() - 1),
                outputs: (0..rows)
                    .map(|i| SyndromeBit {
                        stab_type: ty,
                        index: i,
                        clbit: n + i,
                    })
                    .collect(),
                fallback: fb,
            });
            Ok((Step::Prep(preps.len() - 1), Step::Extract(extracts.len() - 1)))
        };
        let (pz, ez) = steps_for(AncillaBasis::PlusL, &first, StabType::Z)?;
        let (px, ex) = steps_for(AncillaBasis::ZeroL, &second, StabType::X)?;
        let steps = match readout {
            Readout::Sequential => scope_steps(readout, vec![pz, ez], vec![px, ex], vec![]),
            Readout::Batched => scope_steps(readout, vec![ez], vec![ex], vec![pz, px]),
        };
        Ok(Self {
            mode: Mode::Steane,
            readout,
            swap: Some(build_logical_swap(&data, &first, n_total)?),
            layout,
            preps,
            extracts,
            fallbacks,
            steps,
        })
    }

    /// The verification-bit layout of encoded preps.
    pub fn check_bits(code: &CssCode) -> AncillaCheckBits {
        AncillaCheckBits::of(code)
    }
}

/// Conditional Paulis implementing the lookup correction for one syndrome
/// family whose bits sit in `bits`.
fn recovery(code: &CssCode, ty: StabType, bits: &[usize], data: &[usize], c: &mut Circuit) {
    let m = bits.len();
    for s in 1usize..(1 << m) {
        let syn: Vec<bool> = (0..m).map(|i| s >> i & 1 == 1).collect();
        debug_assert_eq!(bits_to_index(&syn), s);
        let (corr, p) = match ty {
            StabType::Z => (code.decoder.decode_x_errors(&syn), Pauli::X),
            StabType::X => (code.decoder.decode_z_errors(&syn), Pauli::Z),
        };
        let condition: Vec<ClassicalLiteral> = bits
            .iter()
            .zip(&syn)
            .map(|(&clbit, &value)| ClassicalLiteral { clbit, value })
            .collect();
        for (q, _) in corr.iter().enumerate().filter(|(_, b)| **b) {
            c.push(Instruction::CondPauli {
                pauli: p,
                qubit: data[q],
                condition: condition.clone(),
            });
        }
    }
}

/// The static `T`-round cycle: one preparation attempt per ancilla, all
/// stabilizers extracted, per-round syndrome registers `syn{t}` (Z bits
/// then X bits) and conditional recovery after each decode point.
/// Preparation retries and fallbacks need classical control flow and are
/// carried out by the Monte-Carlo runner instead.
pub fn schedule_cycle(code: &CssCode, config: &SchedulerConfig) -> Result<Circuit> {
    let plan = RoundPlan::new(code, config)?;
    let l = &plan.layout;
    let order = stabilizer_order(code);
    let per_round_units: usize = plan
        .steps
        .iter()
        .map(|s| match s {
            Step::Prep(i) => plan.preps[*i].circuit.n_clbits,
            Step::Extract(i) => plan.extracts[*i].circuit.n_clbits,
            Step::Decode(_) => 0,
        })
        .sum();
    let per_round = per_round_units + order.len();
    let mut c = Circuit::new(l.n_total, per_round * config.rounds);
    c.add_register("data", RegisterKind::Quantum, l.data[0].min(l.data[l.data.len() - 1]), l.data.len());
    add_runs(&mut c, "anc", &l.ancilla);
    add_runs(&mut c, "ver", &l.verification);
    let syn_index = |ty: StabType, i: usize| order.iter().position(|&o| o == (ty, i)).expect("known stabilizer");
    for t in 0..config.rounds {
        let base = t * per_round;
        let syn_base = base + per_round_units;
        c.add_register(&format!("syn{t}"), RegisterKind::Classical, syn_base, order.len());
        let mut offset = base;
        for step in &plan.steps {
            match *step {
                Step::Prep(i) => {
                    let u = &plan.preps[i].circuit;
                    c.append_mapped(u, &(0..l.n_total).collect::<Vec<_>>(), offset);
                    offset += u.n_clbits;
                }
                Step::Extract(i) => {
                    let u = &plan.extracts[i];
                    c.append_mapped(&u.circuit, &(0..l.n_total).collect::<Vec<_>>(), offset);
                    for b in &u.outputs {
                        c.parity(syn_base + syn_index(b.stab_type, b.index), vec![offset + b.clbit]);
                    }
                    offset += u.circuit.n_clbits;
                }
                Step::Decode(scope) => {
                    if config.pauli_frame {
                        continue;
                    }
                    if scope != DecodeScope::XChecks {
                        let bits: Vec<usize> = (0..code.hz.rows()).map(|i| syn_base + syn_index(StabType::Z, i)).collect();
                        recovery(code, StabType::Z, &bits, &l.data, &mut c);
                    }
                    if scope != DecodeScope::ZChecks {
                        let bits: Vec<usize> = (0..code.hx.rows()).map(|i| syn_base + syn_index(StabType::X, i)).collect();
                        recovery(code, StabType::X, &bits, &l.data, &mut c);
                    }
                }
            }
        }
        c.tick();
    }
    c.validate()?;
    Ok(c)
}

/// Register entries for maximal runs of consecutive indices.
fn add_runs(c: &mut Circuit, name: &str, qubits: &[usize]) {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &q in qubits {
        match runs.last_mut() {
            Some((s, len)) if *s + *len == q => *len += 1,
            _ => runs.push((q, 1)),
        }
    }
    for (k, (s, len)) in runs.iter().enumerate() {
        let label = if runs.len() == 1 { name.to_string() } else { format!("{name}{k}") };
        c.add_register(&label, RegisterKind::Quantum, *s, *len);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::exec::{Executor, Noiseless};
    use crate::circuit::builders::build_encoder;
    use crate::css::steane_code;
    use crate::tableau::StabilizerTableau;

    fn run_from_zero(code: &CssCode, c: &Circuit, seed: u64) -> (StabilizerTableau, Vec<bool>) {
        let t = StabilizerTableau::new(c.n_qubits, seed).unwrap();
        let mut ex = Executor::new(t, Noiseless);
        ex.run_direct(&build_encoder(code).unwrap()).unwrap();
        let bits = ex.run_direct(c).unwrap();
        (ex.backend, bits)
    }

    #[test]
    fn config_validation() {
        assert!(SchedulerConfig::new(Mode::Cat, Readout::Batched, 1).with_verify(0).validate().is_err());
        assert!(SchedulerConfig::new(Mode::Steane, Readout::Batched, 0).validate().is_err());
        let mut c = SchedulerConfig::new(Mode::Steane, Readout::Sequential, 1);
        c.max_prep_attempts = 0;
        assert!(c.validate().is_err());
        let mut c = SchedulerConfig::new(Mode::Cat, Readout::Sequential, 1);
        c.swap_policy = true;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        assert_eq!("Shor".parse::<Mode>().unwrap(), Mode::Cat);
        assert!("bogus".parse::<Readout>().is_err());
    }

    #[test]
    fn ancilla_counts() {
        let code = steane_code();
        let count = |mode, readout| {
            RoundPlan::new(&code, &SchedulerConfig::new(mode, readout, 1))
                .unwrap()
                .layout
                .n_anc()
        };
        assert_eq!(count(Mode::Standard, Readout::Batched), 6);
        assert_eq!(count(Mode::Cat, Readout::Batched), 30);
        assert_eq!(count(Mode::Standard, Readout::Sequential), 1);
        assert_eq!(count(Mode::Cat, Readout::Sequential), 6);
        assert_eq!(count(Mode::Steane, Readout::Sequential), 9);
        assert_eq!(count(Mode::Steane, Readout::Batched), 16);
        let c = schedule_cycle(&code, &SchedulerConfig::new(Mode::Cat, Readout::Batched, 1)).unwrap();
        let s = schedule_cycle(&code, &SchedulerConfig::new(Mode::Standard, Readout::Batched, 1)).unwrap();
        assert_eq!((c.n_qubits - 7) / (s.n_qubits - 7), 5);
    }

    #[test]
    fn all_combinations_give_zero_syndromes() {
        let code = steane_code();
        for mode in Mode::ALL {
            for readout in [Readout::Sequential, Readout::Batched] {
                let cfg = SchedulerConfig::new(mode, readout, 2);
                let c = schedule_cycle(&code, &cfg).unwrap();
                for seed in 0..3 {
                    let (t, bits) = run_from_zero(&code, &c, seed);
                    for r in 0..2 {
                        let reg = c.reg(&format!("syn{r}"));
                        assert_eq!(reg.len(), 6);
                        assert!(reg.iter().all(|&b| !bits[b]), "{mode} {readout:?}");
                    }
                    let data: Vec<usize> = (0..7).collect();
                    let rep = crate::css::logical_state_check(&t, &code, &data).unwrap();
                    assert!(rep.in_code_space());
                    assert_eq!(rep.logical_z, crate::css::Eigenvalue::PlusOne);
                }
            }
        }
    }

    #[test]
    fn sixteen_round_records() {
        let code = steane_code();
        let c = schedule_cycle(&code, &SchedulerConfig::new(Mode::Cat, Readout::Batched, 16)).unwrap();
        assert!((0..16).all(|t| c.reg(&format!("syn{t}")).len() == 6));
        assert!(c.register("syn16").is_none());
        let text = c.to_text();
        let back: Circuit = text.parse().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn recovery_fixes_injected_error() {
        let code = steane_code();
        for mode in Mode::ALL {
            let c = schedule_cycle(&code, &SchedulerConfig::new(mode, Readout::Sequential, 1)).unwrap();
            for (q, p) in [(4, crate::tableau::CliffordGate::X(4)), (2, crate::tableau::CliffordGate::Z(2))] {
                let mut full = Circuit::new(c.n_qubits, c.n_clbits);
                full.gate(p);
                full.append_mapped(&c, &(0..c.n_qubits).collect::<Vec<_>>(), 0);
                let (t, _) = run_from_zero(&code, &full, q as u64);
                let rep = crate::css::logical_state_check(&t, &code, &(0..7).collect::<Vec<_>>()).unwrap();
                assert!(rep.in_code_space(), "{mode}");
                assert_eq!(rep.logical_z, crate::css::Eigenvalue::PlusOne);
            }
        }
    }

    #[test]
    fn steane_round_scale() {
        let code = steane_code();
        let c = schedule_cycle(&code, &SchedulerConfig::new(Mode::Steane, Readout::Sequential, 1)).unwrap();
        assert_eq!(c.n_qubits, 16);
        let d = c.depth();
        assert!((10..=200).contains(&d), "depth {d}");
    }
}
