//! Closed-form stage matrices.
//!
//! Every state in the protocol is an X state in the `HH, HV, VH, VV` basis
//! with a single coherence between |HV⟩ and |VH⟩. Weights are kept
//! unnormalized so that their trace is the absolute probability of
//! reaching the stage.

use serde::Serialize;

use super::{filter_plan, CouplingConfig, FilterConfig, FilterPlan};
use crate::error::Result;
use crate::qstate::{c, CMatrix, DensityMatrix, InputState, Outcome, Side, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XWeights {
    pub hh: f64,
    pub hv: f64,
    pub vh: f64,
    pub vv: f64,
    /// ρ_{HV,VH}
    pub z: C64,
}

impl XWeights {
    pub fn trace(&self) -> f64 {
        self.hh + self.hv + self.vh + self.vv
    }

    pub fn to_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(self.hh, 0.0);
        m[(1, 1)] = c(self.hv, 0.0);
        m[(2, 2)] = c(self.vh, 0.0);
        m[(3, 3)] = c(self.vv, 0.0);
        m[(1, 2)] = self.z;
        m[(2, 1)] = self.z.conj();
        m
    }

    /// Normalized state and its absolute probability.
    pub fn state(&self) -> Result<(DensityMatrix, f64)> {
        DensityMatrix::from_unnormalized(self.to_matrix())
    }

    /// Applies diagonal amplitude gains `[H, V]` on each photon.
    pub fn filtered(&self, a: [f64; 2], b: [f64; 2]) -> XWeights {
        let sq = |x: f64| x * x;
        XWeights {
            hh: self.hh * sq(a[0] * b[0]),
            hv: self.hv * sq(a[0] * b[1]),
            vh: self.vh * sq(a[1] * b[0]),
            vv: self.vv * sq(a[1] * b[1]),
            z: self.z * (a[0] * b[1] * a[1] * b[0]),
        }
    }

    fn scaled(mut self, s: f64) -> XWeights {
        self.hh *= s;
        self.hv *= s;
        self.vh *= s;
        self.vv *= s;
        self.z *= s;
        self
    }

    fn rotate_input(mut self, input: InputState) -> XWeights {
        // (|HV⟩ + i|VH⟩)/√2 = (diag(1, −i) ⊗ 𝟙)|Ψ−⟩
        if input == InputState::Experimental {
            self.z *= c(0.0, 1.0);
        }
        self
    }
}

/// After the coupler, photon E traced out.
pub fn stage_one(cfg: &CouplingConfig) -> XWeights {
    let (tv, th) = cfg.coupling.amplitudes();
    let p = cfg.regime.p();
    let (tv2, th2) = (tv * tv, th * th);
    let (rv2, rh2) = (1.0 - tv2, 1.0 - th2);
    XWeights {
        hh: rv2 * rh2,
        hv: th2 * tv2 + 1.0 - 2.0 * (1.0 + p) * tv2 * rv2,
        vh: th2 * tv2 + 1.0 - 2.0 * (1.0 + p) * th2 * rh2,
        vv: rv2 * rh2,
        z: c(-th * tv * ((1.0 + p) * (th2 + tv2) - 2.0 * p), 0.0),
    }
    .scaled(0.25)
    .rotate_input(cfg.input)
}

/// After projecting photon E on `outcome`.
pub fn stage_two(cfg: &CouplingConfig, outcome: Outcome) -> XWeights {
    let (tv, th) = cfg.coupling.amplitudes();
    let p = cfg.regime.p();
    let (tv2, th2) = (tv * tv, th * th);
    let (rv2, rh2) = (1.0 - tv2, 1.0 - th2);
    match outcome {
        Outcome::H => XWeights {
            hh: 0.0,
            hv: th2 * tv2,
            vh: 1.0 - 2.0 * (1.0 + p) * th2 * rh2,
            vv: rv2 * rh2,
            z: c(-th * tv * ((1.0 + p) * th2 - p), 0.0),
        },
        Outcome::V => XWeights {
            hh: rv2 * rh2,
            hv: 1.0 - 2.0 * (1.0 + p) * tv2 * rv2,
            vh: th2 * tv2,
            vv: 0.0,
            z: c(-th * tv * ((1.0 + p) * tv2 - p), 0.0),
        },
    }
    .scaled(0.25)
    .rotate_input(cfg.input)
}

/// After the local filters chosen by `f`.
pub fn stage_three(cfg: &CouplingConfig, outcome: Outcome, f: &FilterConfig) -> Result<XWeights> {
    let w = stage_two(cfg, outcome);
    let plan = filter_plan(cfg, outcome, f, w.hv, w.vh)?;
    Ok(apply_plan(&w, &plan))
}

fn apply_plan(w: &XWeights, plan: &FilterPlan) -> XWeights {
    let mut a = [1.0, 1.0];
    let mut b = [1.0, 1.0];
    for fl in &plan.filters {
        let g = match fl.side {
            Side::A => &mut a,
            Side::B => &mut b,
        };
        g[0] *= fl.gain_h;
        g[1] *= fl.gain_v;
    }
    w.filtered(a, b)
}
