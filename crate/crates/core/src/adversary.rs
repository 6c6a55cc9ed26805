//! Environment-correlation attack on RNG circuits.
//!
//! For any circuit in the model there is an initial joint state of setup
//! and environment under which the run always counts as successful and the
//! generated number can be read off the environment register. The
//! construction is direct: pick the maximally correlated target state with
//! the projection register pinned to a successful outcome, and pull it
//! back through the inverse circuit. This module builds that state and
//! quantifies the resulting dependence.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::analysis::BivariateDistribution;
use crate::circuit::{Circuit, SubsystemLayout};
use crate::error::{Error, Result};
use crate::linalg::{Complex64, DenseVector, ZERO};
use crate::sim::{self, JointDistribution};

/// Identifier of the index convention baked into states, files and reports.
pub const INDEX_CONVENTION: &str = "mpe-msb-v1";

/// Choice of fixed successful projection outcome and of the pairing between
/// measured-register and environment basis labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryConfig {
    p_star: usize,
    pairing: Vec<usize>,
}

impl AdversaryConfig {
    /// Default attack on a circuit: smallest successful outcome, identity
    /// pairing.
    pub fn for_circuit(circuit: &Circuit) -> Self {
        let p_star = *circuit.success_set().iter().next().expect("success set nonempty");
        Self { p_star, pairing: (0..circuit.layout().m_dim()).collect() }
    }

    /// Picks a specific successful projection outcome.
    pub fn with_p_star(circuit: &Circuit, p_star: usize) -> Result<Self> {
        if !circuit.success_set().contains(&p_star) {
            return Err(Error::PStarNotInSuccessSet { p_star });
        }
        Ok(Self { p_star, pairing: (0..circuit.layout().m_dim()).collect() })
    }

    /// Replaces the identity pairing with an arbitrary bijection
    /// k (measured) <-> pairing[k] (environment).
    pub fn with_pairing(mut self, pairing: Vec<usize>) -> Result<Self> {
        let n = self.pairing.len();
        if pairing.len() != n {
            return Err(Error::InvalidPairing);
        }
        let mut seen = vec![false; n];
        for &v in &pairing {
            if v >= n || seen[v] {
                return Err(Error::InvalidPairing);
            }
            seen[v] = true;
        }
        self.pairing = pairing;
        Ok(self)
    }

    pub fn p_star(&self) -> usize {
        self.p_star
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }
}

/// The post-circuit target: an equal superposition over paired (m, e)
/// basis labels with the projection register pinned to `p_star`.
///
/// Amplitude 1/sqrt(d_M) sits on exactly the indices (k, p_star,
/// pairing(k)).
pub fn build_target_state(layout: &SubsystemLayout, cfg: &AdversaryConfig) -> Result<DenseVector> {
    if cfg.p_star >= layout.p_dim() {
        return Err(Error::SuccessOutcomeOutOfRange { outcome: cfg.p_star, limit: layout.p_dim() });
    }
    if cfg.pairing.len() != layout.m_dim() {
        return Err(Error::InvalidPairing);
    }
    let amp = Complex64::new(1.0 / libm::sqrt(layout.m_dim() as f64), 0.0);
    let mut amps = vec![ZERO; layout.dim()];
    for k in 0..layout.m_dim() {
        amps[layout.index_of(k, cfg.p_star, cfg.pairing[k])] = amp;
    }
    DenseVector::new(amps)
}

/// The initial state whose forward evolution through the circuit is the
/// target state: the target pulled back through the inverse circuit.
pub fn build_adversarial_initial(circuit: &Circuit, cfg: &AdversaryConfig) -> Result<DenseVector> {
    let target = build_target_state(circuit.layout(), cfg)?;
    sim::run_inverse(circuit, &target)
}

/// The entangled 1/1/1 preset: amplitude 1/2 on the (m, p, e) triples
/// (0,0,0), (0,1,0), (1,0,1), (1,1,1). It is a fixed point of the
/// case-study circuit and superposes both successful projection outcomes,
/// so it demonstrates that the constructed attack state is not unique.
pub fn case_study_initial() -> DenseVector {
    let layout = SubsystemLayout::new(1, 1, 1).expect("static layout");
    let mut amps = vec![ZERO; layout.dim()];
    let half = Complex64::new(0.5, 0.0);
    for (m, p, e) in [(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1)] {
        amps[layout.index_of(m, p, e)] = half;
    }
    DenseVector::new(amps).expect("static state")
}

/// Dependence metrics of one audited run.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    /// Total probability of a successful projection outcome.
    pub success_probability: f64,
    /// P[m = pairing(e)] conditioned on success.
    pub agreement_probability: f64,
    /// I(M;E) in bits, conditioned on success.
    pub mutual_information_bits: f64,
    /// H_min(f(m,p) | E) in bits, conditioned on success.
    pub output_min_entropy_given_e_bits: f64,
    /// SHA-256 of the canonical circuit encoding.
    pub circuit_digest: String,
    /// Index convention identifier.
    pub convention: &'static str,
    /// Core library version the numbers were produced with.
    pub version: &'static str,
    /// Present when a sampled verification was attached.
    pub sampling: Option<SamplingReport>,
}

/// Empirical cross-check of an exact audit.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingReport {
    pub prng: &'static str,
    pub seed: u64,
    pub samples: usize,
    /// Fraction of draws with a successful projection outcome.
    pub empirical_success: f64,
    /// Among successful draws, fraction with m = pairing(e).
    pub empirical_agreement: f64,
}

/// Everything an audit produced: the report plus the states and exact
/// distribution it was computed from.
#[derive(Debug, Clone)]
pub struct AuditRun {
    pub report: AuditReport,
    pub initial_state: DenseVector,
    pub final_state: DenseVector,
    pub distribution: JointDistribution,
}

/// Success probability of a distribution under the circuit's success set.
pub fn success_probability(dist: &JointDistribution, circuit: &Circuit) -> f64 {
    dist.iter()
        .filter(|(t, _)| circuit.success_set().contains(&t.p))
        .map(|(_, prob)| prob)
        .sum()
}

/// Joint distribution of (m, e) conditioned on success.
pub fn joint_m_e_given_success(
    dist: &JointDistribution,
    circuit: &Circuit,
) -> Result<BivariateDistribution> {
    let layout = circuit.layout();
    let success = success_probability(dist, circuit);
    if success < 1e-12 {
        return Err(Error::AdversaryConstructionFailed { success_probability: success });
    }
    let mut probs = vec![0.0; layout.m_dim() * layout.e_dim()];
    for (t, prob) in dist.iter() {
        if circuit.success_set().contains(&t.p) {
            probs[t.m * layout.e_dim() + t.e] += prob / success;
        }
    }
    BivariateDistribution::new(layout.m_dim(), layout.e_dim(), probs)
}

/// Joint distribution of (f(m, p), e) conditioned on success.
pub fn joint_output_e_given_success(
    dist: &JointDistribution,
    circuit: &Circuit,
) -> Result<BivariateDistribution> {
    let layout = circuit.layout();
    let success = success_probability(dist, circuit);
    if success < 1e-12 {
        return Err(Error::AdversaryConstructionFailed { success_probability: success });
    }
    let out_dim = circuit.output_map().output_dim(layout);
    let mut probs = vec![0.0; out_dim * layout.e_dim()];
    for (t, prob) in dist.iter() {
        if circuit.success_set().contains(&t.p) {
            let f = circuit.output_map().eval(t.m, t.p);
            probs[f * layout.e_dim() + t.e] += prob / success;
        }
    }
    BivariateDistribution::new(out_dim, layout.e_dim(), probs)
}

/// Runs the full audit: construct the initial state (or take the
/// override), evolve it, measure exactly, and compute the dependence
/// metrics on the success-conditioned distribution.
pub fn audit_run(
    circuit: &Circuit,
    cfg: &AdversaryConfig,
    initial_override: Option<&DenseVector>,
) -> Result<AuditRun> {
    let initial_state = match initial_override {
        Some(s) => {
            if s.dim() != circuit.layout().dim() {
                return Err(Error::DimensionMismatch {
                    expected: circuit.layout().dim(),
                    got: s.dim(),
                });
            }
            s.clone()
        }
        None => build_adversarial_initial(circuit, cfg)?,
    };
    let final_state = sim::run(circuit, &initial_state)?;
    let distribution = sim::measure_all(&final_state, circuit.layout())?;
    let success = success_probability(&distribution, circuit);
    if success < 1e-12 {
        return Err(Error::AdversaryConstructionFailed { success_probability: success });
    }
    let m_e = joint_m_e_given_success(&distribution, circuit)?;
    let out_e = joint_output_e_given_success(&distribution, circuit)?;
    let report = AuditReport {
        success_probability: success,
        agreement_probability: m_e.agreement_probability(cfg.pairing())?,
        mutual_information_bits: m_e.mutual_information(),
        output_min_entropy_given_e_bits: out_e.min_entropy_given_y(),
        circuit_digest: circuit.digest(),
        convention: INDEX_CONVENTION,
        version: env!("CARGO_PKG_VERSION"),
        sampling: None,
    };
    Ok(AuditRun { report, initial_state, final_state, distribution })
}

/// Like [`audit_run`], returning only the report.
pub fn audit(
    circuit: &Circuit,
    cfg: &AdversaryConfig,
    initial_override: Option<&DenseVector>,
) -> Result<AuditReport> {
    Ok(audit_run(circuit, cfg, initial_override)?.report)
}

/// Draws `n` outcomes from the final state and counts empirical success
/// and agreement rates.
pub fn sampled_verification(
    circuit: &Circuit,
    cfg: &AdversaryConfig,
    final_state: &DenseVector,
    n: usize,
    seed: u64,
) -> Result<SamplingReport> {
    let draws = sim::sample(final_state, circuit.layout(), n, seed)?;
    let mut successes = 0usize;
    let mut agreements = 0usize;
    for t in &draws {
        if circuit.success_set().contains(&t.p) {
            successes += 1;
            if cfg.pairing().get(t.m) == Some(&t.e) {
                agreements += 1;
            }
        }
    }
    Ok(SamplingReport {
        prng: sim::PRNG_NAME,
        seed,
        samples: n,
        empirical_success: successes as f64 / n as f64,
        empirical_agreement: if successes == 0 {
            0.0
        } else {
            agreements as f64 / successes as f64
        },
    })
}
