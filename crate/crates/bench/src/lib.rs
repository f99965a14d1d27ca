//! Benchmark fixtures.

use entloc_core::fockoracle::OracleConfig;
use entloc_core::tomolab::{expected_counts, standard_settings, CountRecord, MeasurementSetting};
use entloc_core::{CouplingConfig, DensityMatrix, FilterConfig, Regime};

/// Stage-II state of the partially distinguishable protocol at T=0.3, p=0.85.
pub fn protocol_state() -> DensityMatrix {
    let cfg = partial_config();
    entloc_core::pipeline::stage_measure(&cfg, entloc_core::Outcome::H).expect("valid point").rho
}

pub fn partial_config() -> CouplingConfig {
    CouplingConfig::isotropic(Regime::Partial { p: 0.85 }, 0.3).expect("valid point")
}

pub fn polarizing_config() -> CouplingConfig {
    CouplingConfig::polarizing(Regime::Indistinguishable, 0.8, 0.6).expect("valid point")
}

pub fn filter() -> FilterConfig {
    FilterConfig::new(0.121).expect("valid eps")
}

pub fn oracle_config() -> OracleConfig {
    OracleConfig::new(0.8, 0.6, 0.85).expect("valid point")
}

/// Noiseless counts of the protocol state at 2000 coincidences per basis pair.
pub fn tomography_counts() -> (Vec<CountRecord>, Vec<MeasurementSetting>) {
    let set = standard_settings();
    let rec = expected_counts(&protocol_state(), &set, 2000.0, 1.0, 0.0).expect("valid state");
    (rec, set)
}
