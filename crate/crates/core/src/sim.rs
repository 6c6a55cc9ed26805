//! Statevector evolution and Born-rule measurement.
//!
//! Gates update the statevector in place over strided index groups; the
//! full circuit unitary is never materialized, so the environment register
//! rides along untouched at any supported size.

use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};

use crate::circuit::{Circuit, Gate, SubsystemLayout};
use crate::error::{Error, Result};
use crate::linalg::{Complex64, DenseMatrix, DenseVector, ZERO};

/// Fixed, seedable, platform-independent PRNG used for outcome sampling.
/// Seeding goes through `seed_from_u64` (SplitMix64 expansion).
pub const PRNG_NAME: &str = "chacha20";

/// Probabilities at or below this are treated as exactly zero.
pub const PROB_FLOOR: f64 = 1e-15;

/// One joint measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OutcomeTriple {
    pub m: usize,
    pub p: usize,
    pub e: usize,
}

/// Exact Born-rule probability table over outcome triples.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    layout: SubsystemLayout,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn probability(&self, m: usize, p: usize, e: usize) -> f64 {
        self.probs[self.layout.index_of(m, p, e)]
    }

    /// All outcomes in index order (lexicographic in (m, p, e)).
    pub fn iter(&self) -> impl Iterator<Item = (OutcomeTriple, f64)> + '_ {
        self.probs.iter().enumerate().map(|(idx, &prob)| {
            let (m, p, e) = self.layout.split_index(idx);
            (OutcomeTriple { m, p, e }, prob)
        })
    }

    /// Outcomes with probability above [`PROB_FLOOR`], index order.
    pub fn support(&self) -> impl Iterator<Item = (OutcomeTriple, f64)> + '_ {
        self.iter().filter(|&(_, p)| p > PROB_FLOOR)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// Computational basis state |index> for the layout.
pub fn basis_state(layout: &SubsystemLayout, index: usize) -> Result<DenseVector> {
    DenseVector::basis(layout.dim(), index)
}

/// State from an explicit amplitude list. The list is normalized; the
/// returned flag is true when the renormalization moved the norm by more
/// than 1e-12.
pub fn state_from_amplitudes(
    layout: &SubsystemLayout,
    amplitudes: Vec<Complex64>,
) -> Result<(DenseVector, bool)> {
    if amplitudes.len() != layout.dim() {
        return Err(Error::WrongStateLength { expected: layout.dim(), got: amplitudes.len() });
    }
    let mut state = DenseVector::new(amplitudes)?;
    let norm = state.normalize()?;
    Ok((state, libm::fabs(norm - 1.0) > 1e-12))
}

fn check_state(layout: &SubsystemLayout, s: &DenseVector) -> Result<()> {
    if s.dim() != layout.dim() {
        return Err(Error::DimensionMismatch { expected: layout.dim(), got: s.dim() });
    }
    Ok(())
}

fn apply_one_qubit(amps: &mut [Complex64], g: &[Complex64; 4], bit: usize) {
    let mask = 1usize << bit;
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for i in base..base + mask {
            let a = amps[i];
            let b = amps[i | mask];
            amps[i] = g[0] * a + g[1] * b;
            amps[i | mask] = g[2] * a + g[3] * b;
        }
        base += mask << 1;
    }
}

fn apply_two_qubit(amps: &mut [Complex64], g: &[Complex64; 16], bit_hi: usize, bit_lo: usize) {
    let mask_hi = 1usize << bit_hi;
    let mask_lo = 1usize << bit_lo;
    let pair = mask_hi | mask_lo;
    for idx in 0..amps.len() {
        if idx & pair != 0 {
            continue;
        }
        let i0 = idx;
        let i1 = idx | mask_lo;
        let i2 = idx | mask_hi;
        let i3 = idx | pair;
        let (a0, a1, a2, a3) = (amps[i0], amps[i1], amps[i2], amps[i3]);
        amps[i0] = g[0] * a0 + g[1] * a1 + g[2] * a2 + g[3] * a3;
        amps[i1] = g[4] * a0 + g[5] * a1 + g[6] * a2 + g[7] * a3;
        amps[i2] = g[8] * a0 + g[9] * a1 + g[10] * a2 + g[11] * a3;
        amps[i3] = g[12] * a0 + g[13] * a1 + g[14] * a2 + g[15] * a3;
    }
}

fn apply_gates(circuit: &Circuit, state: &mut DenseVector, gates: &[Gate]) {
    let layout = circuit.layout();
    for gate in gates {
        let wires = gate.wires();
        if let Some(g) = gate.one_qubit_matrix() {
            apply_one_qubit(state.as_mut_slice(), &g, layout.wire_bit(wires[0]));
        } else if let Some(g) = gate.two_qubit_matrix() {
            apply_two_qubit(
                state.as_mut_slice(),
                &g,
                layout.wire_bit(wires[0]),
                layout.wire_bit(wires[1]),
            );
        }
    }
}

/// Applies the circuit's gates in order to the M and P wires, leaving E
/// untouched.
pub fn run(circuit: &Circuit, state: &DenseVector) -> Result<DenseVector> {
    check_state(circuit.layout(), state)?;
    let mut out = state.clone();
    apply_gates(circuit, &mut out, circuit.gates());
    Ok(out)
}

/// Applies the inverse circuit; `run(c, run_inverse(c, s))` is the identity
/// up to roundoff.
pub fn run_inverse(circuit: &Circuit, state: &DenseVector) -> Result<DenseVector> {
    check_state(circuit.layout(), state)?;
    let inverse = circuit.inverse();
    let mut out = state.clone();
    apply_gates(&inverse, &mut out, inverse.gates());
    Ok(out)
}

/// Exact outcome distribution of a terminal computational-basis
/// measurement of all three registers.
pub fn measure_all(state: &DenseVector, layout: &SubsystemLayout) -> Result<JointDistribution> {
    check_state(layout, state)?;
    let probs = state
        .as_slice()
        .iter()
        .map(|c| {
            let p = c.norm_sqr();
            if p <= PROB_FLOOR {
                0.0
            } else {
                p
            }
        })
        .collect();
    Ok(JointDistribution { layout: *layout, probs })
}

/// Register selector for conditioning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    M,
    P,
    E,
}

impl Subsystem {
    fn letter(self) -> char {
        match self {
            Subsystem::M => 'M',
            Subsystem::P => 'P',
            Subsystem::E => 'E',
        }
    }
}

/// Projects onto `subsystem = outcome`, renormalizes, and returns the
/// collapsed state together with the outcome probability.
///
/// The collapsed state keeps the full M (x) P (x) E indexing with the
/// measured register pinned to the observed basis state; the measurement
/// record stays in the state rather than being traced out.
pub fn conditional_state(
    state: &DenseVector,
    layout: &SubsystemLayout,
    subsystem: Subsystem,
    outcome: usize,
) -> Result<(DenseVector, f64)> {
    check_state(layout, state)?;
    let selector = |idx: usize| {
        let (m, p, e) = layout.split_index(idx);
        match subsystem {
            Subsystem::M => m,
            Subsystem::P => p,
            Subsystem::E => e,
        }
    };
    let mut prob = 0.0;
    for (idx, amp) in state.as_slice().iter().enumerate() {
        if selector(idx) == outcome {
            prob += amp.norm_sqr();
        }
    }
    if prob < 1e-12 {
        return Err(Error::ImpossibleOutcome { register: subsystem.letter(), outcome });
    }
    let scale = 1.0 / libm::sqrt(prob);
    let amps = state
        .as_slice()
        .iter()
        .enumerate()
        .map(|(idx, amp)| if selector(idx) == outcome { amp * scale } else { ZERO })
        .collect();
    Ok((DenseVector::new(amps)?, prob))
}

/// Draws `n` independent outcomes from the exact distribution of `state`.
///
/// Sampling is inverse-CDF over the index-ordered probability table with a
/// ChaCha20 stream, so the result is bit-identical for a given
/// (state, n, seed) on every platform.
pub fn sample(
    state: &DenseVector,
    layout: &SubsystemLayout,
    n: usize,
    seed: u64,
) -> Result<Vec<OutcomeTriple>> {
    if n == 0 {
        return Err(Error::ZeroSamples);
    }
    let dist = measure_all(state, layout)?;
    let mut cdf = Vec::with_capacity(dist.probs.len());
    let mut acc = 0.0;
    let mut last_support = 0usize;
    for (idx, &p) in dist.probs.iter().enumerate() {
        acc += p;
        cdf.push(acc);
        if p > 0.0 {
            last_support = idx;
        }
    }
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        // 53-bit uniform in [0, 1).
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let target = u * acc;
        let idx = cdf.partition_point(|&c| c <= target).min(last_support);
        let (m, p, e) = layout.split_index(idx);
        out.push(OutcomeTriple { m, p, e });
    }
    Ok(out)
}

/// Reduced density matrix of the environment register, obtained by tracing
/// out M and P. The circuit acts as U (x) I_E, so `run` leaves this
/// invariant up to roundoff.
pub fn reduced_env_density(state: &DenseVector, layout: &SubsystemLayout) -> Result<DenseMatrix> {
    check_state(layout, state)?;
    let e_dim = layout.e_dim();
    let mut rho = DenseMatrix::zeros(e_dim, e_dim);
    let amps = state.as_slice();
    for mp in 0..layout.mp_dim() {
        let offset = mp << layout.e_qubits();
        for row in 0..e_dim {
            let a = amps[offset + row];
            if a == ZERO {
                continue;
            }
            for col in 0..e_dim {
                let v = rho.get(row, col) + a * amps[offset + col].conj();
                rho.set(row, col, v);
            }
        }
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_circuit, Circuit, OutputMap, Wire};
    use alloc::collections::BTreeSet;

    fn case_study_layout() -> SubsystemLayout {
        SubsystemLayout::new(1, 1, 1).unwrap()
    }

    /// Amplitude 1/2 on |000>, |010>, |101>, |111> (M, P, E bit order).
    fn entangled_preset() -> DenseVector {
        let mut amps = vec![ZERO; 8];
        for idx in [0usize, 2, 5, 7] {
            amps[idx] = Complex64::new(0.5, 0.0);
        }
        DenseVector::new(amps).unwrap()
    }

    #[test]
    fn basis_state_is_point_mass() {
        let layout = case_study_layout();
        let s = basis_state(&layout, 0).unwrap();
        let dist = measure_all(&s, &layout).unwrap();
        assert_eq!(dist.probability(0, 0, 0), 1.0);
        assert_eq!(dist.support().count(), 1);
    }

    #[test]
    fn basis_state_rejects_out_of_range() {
        let layout = case_study_layout();
        assert!(matches!(
            basis_state(&layout, 8),
            Err(Error::BasisIndexOutOfRange { index: 8, dim: 8 })
        ));
    }

    #[test]
    fn amplitude_list_init_matches_preset() {
        let layout = case_study_layout();
        let (s, renormalized) =
            state_from_amplitudes(&layout, vec![Complex64::new(0.5, 0.0); 1].repeat(8)).unwrap();
        // Uniform list of 8 entries of 0.5 has norm sqrt(2); must renormalize.
        assert!(renormalized);
        assert!(libm::fabs(s.norm() - 1.0) < 1e-12);

        let mut amps = vec![ZERO; 8];
        for idx in [0usize, 2, 5, 7] {
            amps[idx] = Complex64::new(0.5, 0.0);
        }
        let (s, renormalized) = state_from_amplitudes(&layout, amps).unwrap();
        assert!(!renormalized);
        assert!(s.distance(&entangled_preset()).unwrap() < 1e-15);
    }

    #[test]
    fn amplitude_list_init_rejects_bad_input() {
        let layout = case_study_layout();
        assert!(matches!(
            state_from_amplitudes(&layout, vec![ZERO; 4]),
            Err(Error::WrongStateLength { expected: 8, got: 4 })
        ));
        assert!(matches!(
            state_from_amplitudes(&layout, vec![ZERO; 8]),
            Err(Error::ZeroStateNorm)
        ));
    }

    #[test]
    fn preset_state_is_fixed_point_of_case_study() {
        let c = Circuit::case_study();
        let s = entangled_preset();
        let out = run(&c, &s).unwrap();
        assert!(out.distance_up_to_phase(&s).unwrap() < 1e-12);
    }

    #[test]
    fn case_study_on_product_zero_state() {
        let c = Circuit::case_study();
        let out = run(&c, &basis_state(c.layout(), 0).unwrap()).unwrap();
        // (|000> + |010> + |100> - |110>) / 2, brute-forced via the compiled
        // unitary in the oracle property tests; hand values here.
        let e = |idx: usize| out.as_slice()[idx];
        for (idx, want) in [(0usize, 0.5), (2, 0.5), (4, 0.5), (6, -0.5)] {
            assert!((e(idx) - Complex64::new(want, 0.0)).norm() < 1e-15);
        }
        let dist = measure_all(&out, c.layout()).unwrap();
        for (m, p) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!(libm::fabs(dist.probability(m, p, 0) - 0.25) < 1e-15);
        }
    }

    #[test]
    fn empty_circuit_is_identity() {
        let layout = case_study_layout();
        let c = Circuit::new(
            layout,
            vec![],
            [0].into_iter().collect::<BTreeSet<_>>(),
            OutputMap::IdentityM,
        )
        .unwrap();
        let s = entangled_preset();
        assert_eq!(run(&c, &s).unwrap(), s);
        assert_eq!(run_inverse(&c, &s).unwrap(), s);
    }

    #[test]
    fn run_rejects_wrong_dimension() {
        let c = Circuit::case_study();
        let s = DenseVector::basis(4, 0).unwrap();
        assert!(matches!(run(&c, &s), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn run_inverse_undoes_run() {
        let layout = SubsystemLayout::new(2, 2, 2).unwrap();
        let c = random_circuit(layout, 40, 11);
        let (s, _) = state_from_amplitudes(
            &layout,
            (0..layout.dim())
                .map(|i| Complex64::new(1.0 + i as f64, (i % 3) as f64 - 1.0))
                .collect(),
        )
        .unwrap();
        let there = run(&c, &s).unwrap();
        let back = run_inverse(&c, &there).unwrap();
        assert!(back.distance(&s).unwrap() < 1e-12);
        assert!(libm::fabs(there.norm() - 1.0) < 1e-12);
    }

    #[test]
    fn inverse_fixes_preset_up_to_phase() {
        let c = Circuit::case_study();
        let s = entangled_preset();
        let back = run_inverse(&c, &s).unwrap();
        assert!(back.distance_up_to_phase(&s).unwrap() < 1e-12);
    }

    #[test]
    fn measure_preset_is_uniform_on_support() {
        let layout = case_study_layout();
        let dist = measure_all(&entangled_preset(), &layout).unwrap();
        for (m, p, e) in [(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1)] {
            assert!(libm::fabs(dist.probability(m, p, e) - 0.25) < 1e-15);
        }
        assert_eq!(dist.support().count(), 4);
        assert!(libm::fabs(dist.total() - 1.0) < 1e-12);
    }

    #[test]
    fn conditional_on_projection_yields_bell_pair() {
        let layout = case_study_layout();
        let (collapsed, prob) =
            conditional_state(&entangled_preset(), &layout, Subsystem::P, 0).unwrap();
        assert!(libm::fabs(prob - 0.5) < 1e-12);
        // (|0>_M |0>_E + |1>_M |1>_E)/sqrt(2) with P pinned to |0>.
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let mut expected = vec![ZERO; 8];
        expected[layout.index_of(0, 0, 0)] = Complex64::new(h, 0.0);
        expected[layout.index_of(1, 0, 1)] = Complex64::new(h, 0.0);
        let expected = DenseVector::new(expected).unwrap();
        assert!(collapsed.distance(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn conditional_on_impossible_outcome_errors() {
        let layout = case_study_layout();
        let s = basis_state(&layout, 0).unwrap();
        assert!(matches!(
            conditional_state(&s, &layout, Subsystem::M, 1),
            Err(Error::ImpossibleOutcome { register: 'M', outcome: 1 })
        ));
    }

    #[test]
    fn conditional_on_plus_state_projects_cleanly() {
        let layout = case_study_layout();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![ZERO; 8];
        amps[layout.index_of(0, 0, 0)] = Complex64::new(h, 0.0);
        amps[layout.index_of(1, 0, 0)] = Complex64::new(h, 0.0);
        let s = DenseVector::new(amps).unwrap();
        let (collapsed, prob) = conditional_state(&s, &layout, Subsystem::M, 0).unwrap();
        assert!(libm::fabs(prob - 0.5) < 1e-12);
        assert!(collapsed.distance(&basis_state(&layout, 0).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn sampling_point_mass_is_constant() {
        let layout = case_study_layout();
        let s = basis_state(&layout, 0).unwrap();
        let draws = sample(&s, &layout, 5, 1234).unwrap();
        assert_eq!(draws, vec![OutcomeTriple { m: 0, p: 0, e: 0 }; 5]);
    }

    #[test]
    fn sampling_is_deterministic_and_correlated_on_preset() {
        let layout = case_study_layout();
        let s = entangled_preset();
        let a = sample(&s, &layout, 2000, 99).unwrap();
        let b = sample(&s, &layout, 2000, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|t| t.m == t.e));
        let ones = a.iter().filter(|t| t.m == 1).count();
        assert!(ones > 800 && ones < 1200);
    }

    #[test]
    fn sampling_rejects_zero_draws() {
        let layout = case_study_layout();
        let s = basis_state(&layout, 0).unwrap();
        assert!(matches!(sample(&s, &layout, 0, 1), Err(Error::ZeroSamples)));
    }

    #[test]
    fn environment_density_is_inert_under_run() {
        let layout = SubsystemLayout::new(2, 1, 2).unwrap();
        let c = random_circuit(layout, 25, 3);
        let (s, _) = state_from_amplitudes(
            &layout,
            (0..layout.dim())
                .map(|i| Complex64::new((i as f64).sin() + 1.5, (i as f64 * 0.7).cos()))
                .collect(),
        )
        .unwrap();
        let before = reduced_env_density(&s, &layout).unwrap();
        let after = reduced_env_density(&run(&c, &s).unwrap(), &layout).unwrap();
        assert!(before.max_abs_diff(&after).unwrap() < 1e-12);
    }
}
