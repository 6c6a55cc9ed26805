//! Circuit model: registers, gates, success set and output map.
//!
//! A setup acts on two registers, the measured register `M` that produces
//! the generated number and the projection register `P` whose outcome
//! decides whether a run counted. The environment register `E` mirrors `M`
//! in size and is never touched by gates; that restriction is enforced by
//! the `Wire` type itself.
//!
//! Index convention (`mpe-msb-v1`): the joint basis index of an (m, p, e)
//! outcome triple is `m * 2^(p_qubits + e_qubits) + p * 2^e_qubits + e`,
//! and within each register wire 0 is the most significant bit.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{Complex64, DenseMatrix, UNITARY_TOL};

/// Default cap on total (M + P + E) qubits; 2^20 amplitudes.
pub const DEFAULT_MAX_QUBITS: usize = 20;
/// Cap on M + P qubits for dense compilation.
pub const COMPILE_MAX_QUBITS: usize = 12;

/// Qubit counts of the three registers.
///
/// The environment register always has as many qubits as the measured one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsystemLayout {
    m_qubits: usize,
    p_qubits: usize,
    e_qubits: usize,
}

impl SubsystemLayout {
    /// Validates against [`DEFAULT_MAX_QUBITS`].
    pub fn new(m_qubits: usize, p_qubits: usize, e_qubits: usize) -> Result<Self> {
        Self::with_max(m_qubits, p_qubits, e_qubits, DEFAULT_MAX_QUBITS)
    }

    /// Validates against a caller-chosen total-qubit cap.
    pub fn with_max(
        m_qubits: usize,
        p_qubits: usize,
        e_qubits: usize,
        max_qubits: usize,
    ) -> Result<Self> {
        if m_qubits == 0 {
            return Err(Error::EmptyRegister { register: 'M' });
        }
        if p_qubits == 0 {
            return Err(Error::EmptyRegister { register: 'P' });
        }
        if e_qubits != m_qubits {
            return Err(Error::EnvironmentSizeMismatch { m_qubits, e_qubits });
        }
        let total = m_qubits + p_qubits + e_qubits;
        if total > max_qubits {
            return Err(Error::TooManyQubits { total, max: max_qubits });
        }
        Ok(Self { m_qubits, p_qubits, e_qubits })
    }

    pub fn m_qubits(&self) -> usize {
        self.m_qubits
    }

    pub fn p_qubits(&self) -> usize {
        self.p_qubits
    }

    pub fn e_qubits(&self) -> usize {
        self.e_qubits
    }

    pub fn total_qubits(&self) -> usize {
        self.m_qubits + self.p_qubits + self.e_qubits
    }

    pub fn circuit_qubits(&self) -> usize {
        self.m_qubits + self.p_qubits
    }

    /// Dimension of the joint M (x) P (x) E state space.
    pub fn dim(&self) -> usize {
        1 << self.total_qubits()
    }

    pub fn m_dim(&self) -> usize {
        1 << self.m_qubits
    }

    pub fn p_dim(&self) -> usize {
        1 << self.p_qubits
    }

    pub fn e_dim(&self) -> usize {
        1 << self.e_qubits
    }

    /// Dimension of the M (x) P circuit space.
    pub fn mp_dim(&self) -> usize {
        1 << self.circuit_qubits()
    }

    /// Joint basis index of an outcome triple.
    pub fn index_of(&self, m: usize, p: usize, e: usize) -> usize {
        (m << (self.p_qubits + self.e_qubits)) | (p << self.e_qubits) | e
    }

    /// Inverse of [`Self::index_of`].
    pub fn split_index(&self, index: usize) -> (usize, usize, usize) {
        let e = index & (self.e_dim() - 1);
        let p = (index >> self.e_qubits) & (self.p_dim() - 1);
        let m = index >> (self.p_qubits + self.e_qubits);
        (m, p, e)
    }

    /// Bit position (from the least significant end of the joint index)
    /// of a circuit wire.
    pub(crate) fn wire_bit(&self, wire: Wire) -> usize {
        match wire {
            Wire::M(i) => self.total_qubits() - 1 - i,
            Wire::P(i) => self.total_qubits() - 1 - (self.m_qubits + i),
        }
    }

    /// Bit position of a wire within the M (x) P circuit space.
    pub(crate) fn circuit_wire_bit(&self, wire: Wire) -> usize {
        match wire {
            Wire::M(i) => self.circuit_qubits() - 1 - i,
            Wire::P(i) => self.circuit_qubits() - 1 - (self.m_qubits + i),
        }
    }
}

/// A circuit wire. Only M and P exist; the environment has no wires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Wire {
    M(usize),
    P(usize),
}

impl Wire {
    fn check(&self, layout: &SubsystemLayout) -> Result<()> {
        match *self {
            Wire::M(i) if i >= layout.m_qubits => {
                Err(Error::WireOutOfRange { register: 'M', index: i, count: layout.m_qubits })
            }
            Wire::P(i) if i >= layout.p_qubits => {
                Err(Error::WireOutOfRange { register: 'P', index: i, count: layout.p_qubits })
            }
            _ => Ok(()),
        }
    }
}

/// One gate acting on M and/or P wires.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(Wire),
    X(Wire),
    Z(Wire),
    /// Controlled NOT, control first.
    Cnot(Wire, Wire),
    Cz(Wire, Wire),
    Swap(Wire, Wire),
    /// Explicit 2x2 unitary.
    U1(Wire, DenseMatrix),
    /// Explicit 4x4 unitary; the first wire is the high bit of the local index.
    U2(Wire, Wire, DenseMatrix),
}

impl Gate {
    pub fn wires(&self) -> Vec<Wire> {
        match self {
            Gate::H(w) | Gate::X(w) | Gate::Z(w) | Gate::U1(w, _) => vec![*w],
            Gate::Cnot(a, b) | Gate::Cz(a, b) | Gate::Swap(a, b) | Gate::U2(a, b, _) => {
                vec![*a, *b]
            }
        }
    }

    /// The inverse gate. Named gates are all self-adjoint; explicit
    /// matrices get conjugate-transposed.
    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::U1(w, m) => Gate::U1(*w, m.adjoint()),
            Gate::U2(a, b, m) => Gate::U2(*a, *b, m.adjoint()),
            other => other.clone(),
        }
    }

    /// 2x2 matrix for single-wire gates.
    pub(crate) fn one_qubit_matrix(&self) -> Option<[Complex64; 4]> {
        let r = |x: f64| Complex64::new(x, 0.0);
        match self {
            Gate::H(_) => {
                let h = core::f64::consts::FRAC_1_SQRT_2;
                Some([r(h), r(h), r(h), r(-h)])
            }
            Gate::X(_) => Some([r(0.0), r(1.0), r(1.0), r(0.0)]),
            Gate::Z(_) => Some([r(1.0), r(0.0), r(0.0), r(-1.0)]),
            Gate::U1(_, m) => {
                let e = m.as_slice();
                Some([e[0], e[1], e[2], e[3]])
            }
            _ => None,
        }
    }

    /// 4x4 matrix for two-wire gates, local index = 2*first + second.
    pub(crate) fn two_qubit_matrix(&self) -> Option<[Complex64; 16]> {
        let r = |x: f64| Complex64::new(x, 0.0);
        let o = r(0.0);
        let l = r(1.0);
        match self {
            Gate::Cnot(_, _) => {
                Some([l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o])
            }
            Gate::Cz(_, _) => {
                Some([l, o, o, o, o, l, o, o, o, o, l, o, o, o, o, r(-1.0)])
            }
            Gate::Swap(_, _) => {
                Some([l, o, o, o, o, o, l, o, o, l, o, o, o, o, o, l])
            }
            Gate::U2(_, _, m) => {
                let mut out = [o; 16];
                out.copy_from_slice(m.as_slice());
                Some(out)
            }
            _ => None,
        }
    }

    /// Checks wire ranges, wire distinctness and (for explicit matrices)
    /// shape and unitarity against a layout.
    pub fn validate(&self, layout: &SubsystemLayout) -> Result<()> {
        let wires = self.wires();
        for w in &wires {
            w.check(layout)?;
        }
        if wires.len() == 2 && wires[0] == wires[1] {
            return Err(Error::DuplicateWires);
        }
        match self {
            Gate::U1(_, m) => check_explicit_matrix(m, 2),
            Gate::U2(_, _, m) => check_explicit_matrix(m, 4),
            _ => Ok(()),
        }
    }
}

fn check_explicit_matrix(m: &DenseMatrix, expected: usize) -> Result<()> {
    if m.rows() != expected || m.cols() != expected {
        return Err(Error::BadMatrixShape { rows: m.rows(), cols: m.cols(), expected });
    }
    let dev = m.unitarity_deviation()?;
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation: dev });
    }
    Ok(())
}

/// The pre-agreed function turning raw outcomes into the generated number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputMap {
    /// f(m, p) = m.
    IdentityM,
    /// Explicit table over (all m) x (success set).
    Table(BTreeMap<(usize, usize), usize>),
}

impl OutputMap {
    /// Value of f(m, p). Callers must stay within (all m) x (success set);
    /// circuit validation guarantees the table is total there.
    pub fn eval(&self, m: usize, p: usize) -> usize {
        match self {
            OutputMap::IdentityM => m,
            OutputMap::Table(t) => *t.get(&(m, p)).expect("output map validated total"),
        }
    }

    /// Largest output value + 1, used to size output distributions.
    pub fn output_dim(&self, layout: &SubsystemLayout) -> usize {
        match self {
            OutputMap::IdentityM => layout.m_dim(),
            OutputMap::Table(t) => t.values().max().map_or(1, |v| v + 1),
        }
    }
}

/// A validated RNG setup: layout, gate list, success set, output map.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    layout: SubsystemLayout,
    gates: Vec<Gate>,
    success_set: BTreeSet<usize>,
    output_map: OutputMap,
}

impl Circuit {
    pub fn new(
        layout: SubsystemLayout,
        gates: Vec<Gate>,
        success_set: BTreeSet<usize>,
        output_map: OutputMap,
    ) -> Result<Self> {
        for gate in &gates {
            gate.validate(&layout)?;
        }
        if success_set.is_empty() {
            return Err(Error::EmptySuccessSet);
        }
        for &p in &success_set {
            if p >= layout.p_dim() {
                return Err(Error::SuccessOutcomeOutOfRange { outcome: p, limit: layout.p_dim() });
            }
        }
        if let OutputMap::Table(table) = &output_map {
            for &(m, p) in table.keys() {
                if m >= layout.m_dim() || !success_set.contains(&p) {
                    return Err(Error::OutputMapInvalidEntry { m, p });
                }
            }
            for m in 0..layout.m_dim() {
                for &p in &success_set {
                    if !table.contains_key(&(m, p)) {
                        return Err(Error::OutputMapIncomplete { m, p });
                    }
                }
            }
        }
        Ok(Self { layout, gates, success_set, output_map })
    }

    /// The 1/1/1 H-CNOT-H setup with both projection outcomes counted
    /// successful and f(m, p) = m.
    pub fn case_study() -> Circuit {
        let layout = SubsystemLayout::new(1, 1, 1).expect("static layout");
        let gates = vec![
            Gate::H(Wire::M(0)),
            Gate::Cnot(Wire::M(0), Wire::P(0)),
            Gate::H(Wire::M(0)),
        ];
        let success: BTreeSet<usize> = [0usize, 1].into_iter().collect();
        Circuit::new(layout, gates, success, OutputMap::IdentityM).expect("static circuit")
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn success_set(&self) -> &BTreeSet<usize> {
        &self.success_set
    }

    pub fn output_map(&self) -> &OutputMap {
        &self.output_map
    }

    /// The inverse circuit: reversed gate list, each gate adjointed.
    pub fn inverse(&self) -> Circuit {
        let gates = self.gates.iter().rev().map(Gate::adjoint).collect();
        Circuit {
            layout: self.layout,
            gates,
            success_set: self.success_set.clone(),
            output_map: self.output_map.clone(),
        }
    }

    /// Dense unitary on M (x) P obtained by multiplying the gates out in
    /// order. Guarded by [`COMPILE_MAX_QUBITS`].
    ///
    /// This is the slow reference route; [`crate::sim::run`] never calls it.
    pub fn compile_unitary(&self) -> Result<DenseMatrix> {
        let n = self.layout.circuit_qubits();
        if n > COMPILE_MAX_QUBITS {
            return Err(Error::CompileTooLarge { qubits: n, max: COMPILE_MAX_QUBITS });
        }
        let dim = 1usize << n;
        let mut acc = DenseMatrix::identity(dim);
        let mut next = DenseMatrix::zeros(dim, dim);
        for gate in &self.gates {
            // acc <- G * acc, mixing rows of acc according to the embedded
            // gate: row r of the product combines the rows of acc whose
            // indices agree with r outside the gate's wire bits.
            if let Some(g) = gate.one_qubit_matrix() {
                let bit = self.layout.circuit_wire_bit(gate.wires()[0]);
                let mask = 1usize << bit;
                for r in 0..dim {
                    let lr = (r >> bit) & 1;
                    let base = r & !mask;
                    for c in 0..dim {
                        let v = g[lr * 2] * acc.get(base, c) + g[lr * 2 + 1] * acc.get(base | mask, c);
                        next.set(r, c, v);
                    }
                }
            } else if let Some(g) = gate.two_qubit_matrix() {
                let wires = gate.wires();
                let bit_hi = self.layout.circuit_wire_bit(wires[0]);
                let bit_lo = self.layout.circuit_wire_bit(wires[1]);
                let (mask_hi, mask_lo) = (1usize << bit_hi, 1usize << bit_lo);
                for r in 0..dim {
                    let lr = (((r >> bit_hi) & 1) << 1) | ((r >> bit_lo) & 1);
                    let base = r & !(mask_hi | mask_lo);
                    for c in 0..dim {
                        let mut v = crate::linalg::ZERO;
                        for lc in 0..4 {
                            let src = base
                                | (if lc & 2 != 0 { mask_hi } else { 0 })
                                | (if lc & 1 != 0 { mask_lo } else { 0 });
                            v += g[lr * 4 + lc] * acc.get(src, c);
                        }
                        next.set(r, c, v);
                    }
                }
            } else {
                unreachable!("gate is either one- or two-qubit");
            }
            core::mem::swap(&mut acc, &mut next);
        }
        Ok(acc)
    }

    /// SHA-256 over a canonical binary encoding of the circuit; stable
    /// across runs and platforms, independent of the text format.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"qraudit-circuit-v1\0");
        let push_usize = |h: &mut Sha256, v: usize| h.update((v as u64).to_le_bytes());
        push_usize(&mut hasher, self.layout.m_qubits);
        push_usize(&mut hasher, self.layout.p_qubits);
        push_usize(&mut hasher, self.layout.e_qubits);
        push_usize(&mut hasher, self.gates.len());
        for gate in &self.gates {
            let (tag, matrix): (u8, Option<&DenseMatrix>) = match gate {
                Gate::H(_) => (0, None),
                Gate::X(_) => (1, None),
                Gate::Z(_) => (2, None),
                Gate::Cnot(_, _) => (3, None),
                Gate::Cz(_, _) => (4, None),
                Gate::Swap(_, _) => (5, None),
                Gate::U1(_, m) => (6, Some(m)),
                Gate::U2(_, _, m) => (7, Some(m)),
            };
            hasher.update([tag]);
            for wire in gate.wires() {
                let (reg, idx) = match wire {
                    Wire::M(i) => (0u8, i),
                    Wire::P(i) => (1u8, i),
                };
                hasher.update([reg]);
                hasher.update((idx as u64).to_le_bytes());
            }
            if let Some(m) = matrix {
                for c in m.as_slice() {
                    hasher.update(c.re.to_le_bytes());
                    hasher.update(c.im.to_le_bytes());
                }
            }
        }
        push_usize(&mut hasher, self.success_set.len());
        for &p in &self.success_set {
            push_usize(&mut hasher, p);
        }
        match &self.output_map {
            OutputMap::IdentityM => hasher.update([0u8]),
            OutputMap::Table(t) => {
                hasher.update([1u8]);
                push_usize(&mut hasher, t.len());
                for (&(m, p), &out) in t {
                    push_usize(&mut hasher, m);
                    push_usize(&mut hasher, p);
                    push_usize(&mut hasher, out);
                }
            }
        }
        let out = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in out {
            const HEX: &[u8; 16] = b"0123456789abcdef";
            hex.push(HEX[(byte >> 4) as usize] as char);
            hex.push(HEX[(byte & 0xf) as usize] as char);
        }
        hex
    }
}

/// Deterministic circuit over the named gate set plus occasional phase
/// gates, for fuzzing and audits at scale. Same seed, same circuit.
pub fn random_circuit(layout: SubsystemLayout, gate_count: usize, seed: u64) -> Circuit {
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let n_wires = layout.circuit_qubits();
    let wire_at = |i: usize| {
        if i < layout.m_qubits() {
            Wire::M(i)
        } else {
            Wire::P(i - layout.m_qubits())
        }
    };
    let mut pick = |n: usize| (rng.next_u64() % n as u64) as usize;
    let mut gates = Vec::with_capacity(gate_count);
    for _ in 0..gate_count {
        let kind = if n_wires >= 2 { pick(7) } else { pick(4) };
        let a = wire_at(pick(n_wires));
        let gate = match kind {
            0 => Gate::H(a),
            1 => Gate::X(a),
            2 => Gate::Z(a),
            3 => {
                // diag(1, e^{i k pi/4})
                let theta = core::f64::consts::FRAC_PI_4 * pick(8) as f64;
                let m = DenseMatrix::new(
                    2,
                    2,
                    vec![
                        crate::linalg::ONE,
                        crate::linalg::ZERO,
                        crate::linalg::ZERO,
                        Complex64::new(libm::cos(theta), libm::sin(theta)),
                    ],
                )
                .expect("finite entries");
                Gate::U1(a, m)
            }
            _ => {
                let b = loop {
                    let b = wire_at(pick(n_wires));
                    if b != a {
                        break b;
                    }
                };
                match kind {
                    4 => Gate::Cnot(a, b),
                    5 => Gate::Cz(a, b),
                    _ => Gate::Swap(a, b),
                }
            }
        };
        gates.push(gate);
    }
    let p_dim = layout.p_dim();
    let mut success: BTreeSet<usize> = BTreeSet::new();
    for p in 0..p_dim {
        if rng.next_u64() & 1 == 1 {
            success.insert(p);
        }
    }
    success.insert((rng.next_u64() % p_dim as u64) as usize);
    Circuit::new(layout, gates, success, OutputMap::IdentityM).expect("generated circuit is valid")
}
