//! Exact statevector simulation and environment-correlation auditing for
//! quantum random-number-generation circuits.
//!
//! A candidate RNG setup is modeled as a circuit on a measured register
//! `M` and a projection register `P`, together with a success set of
//! projection outcomes and an output map f(m, p). An environment register
//! `E` of the same size as `M` is carried through every simulation but
//! never touched by gates. The crate answers one question quantitatively:
//! can the setup's output be guaranteed independent of `E`? It cannot —
//! for every circuit the [`adversary`] module constructs an initial joint
//! state under which the run always succeeds and the output is a function
//! of the environment outcome, and the [`analysis`] module measures the
//! dependence (mutual information, conditional min-entropy, agreement).
//!
//! The crate is `no_std` (alloc only); file formats, reports and the CLI
//! live in the companion `qraudit-cli` crate.
//!
//! # Example
//!
//! ```
//! use qraudit_core::adversary::{audit, AdversaryConfig};
//! use qraudit_core::circuit::Circuit;
//!
//! let circuit = Circuit::case_study();
//! let cfg = AdversaryConfig::for_circuit(&circuit);
//! let report = audit(&circuit, &cfg, None).unwrap();
//! assert!((report.success_probability - 1.0).abs() < 1e-9);
//! assert!((report.mutual_information_bits - 1.0).abs() < 1e-9);
//! assert!(report.output_min_entropy_given_e_bits < 1e-9);
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod adversary;
pub mod analysis;
pub mod circuit;
pub mod error;
pub mod linalg;
pub mod sim;

pub use adversary::{AdversaryConfig, AuditReport, INDEX_CONVENTION};
pub use circuit::{Circuit, Gate, OutputMap, SubsystemLayout, Wire};
pub use error::{Error, Result};
pub use linalg::{Complex64, DenseMatrix, DenseVector};
pub use sim::{JointDistribution, OutcomeTriple, PRNG_NAME};
