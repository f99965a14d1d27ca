//! Measurement-induced localization of two-photon polarization entanglement.
//!
//! A photon pair shares a singlet; photon B is mixed with an unpolarized
//! environmental photon E on a beam splitter. Measuring E and filtering
//! locally restores entanglement between A and B. The crate provides the
//! closed-form results ([`formulas`]), a stage-by-stage protocol simulator
//! ([`pipeline`]), a second-quantized reference model ([`fockoracle`]) and
//! a simulated tomography chain ([`tomolab`]), all built on small dense
//! state algebra ([`qstate`]) and two-qubit measures ([`metrics`]).
//!
//! Matrices use the basis ordering `HH, HV, VH, VV` with photon A first.

// `!(x > y)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fockoracle;
pub mod formulas;
pub mod metrics;
pub mod pipeline;
pub mod qstate;
pub mod tomolab;

pub use error::{Error, Result};
pub use metrics::MetricReport;
pub use pipeline::{
    Balance, Coupling, CouplingConfig, ExplicitGains, FilterConfig, Regime, Stage, StageResult,
};
pub use qstate::{DensityMatrix, InputState, Ket, LocalFilter, Outcome, Side, C64};
