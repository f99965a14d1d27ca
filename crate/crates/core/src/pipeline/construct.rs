//! Numeric route: the three-photon state A⊗B⊗E is built explicitly, the
//! coupler is applied as Kraus operators on B⊗E, and the stages follow by
//! partial trace, projection and filtering.

use super::{filter_plan, CouplingConfig, FilterConfig};
use crate::error::Result;
use crate::qstate::{
    apply_filter, apply_kraus, c, partial_trace_matrix, project_matrix, tensor, CMatrix, CVector, DensityMatrix,
    Outcome,
};

const DIMS: [usize; 3] = [2, 2, 2];

/// Kraus operators on A⊗B⊗E for the "both transmitted" and "both
/// reflected" paths of a one-photon-per-port event. Reflection carries the
/// minus sign of the (t, r; −r, t) splitter and exchanges the photons.
pub fn coupler_kraus(cfg: &CouplingConfig) -> (CMatrix, CMatrix) {
    let (tv, th) = cfg.coupling.amplitudes();
    let (rv, rh) = ((1.0 - tv * tv).max(0.0).sqrt(), (1.0 - th * th).max(0.0).sqrt());
    let diag = |h: f64, v: f64| CMatrix::from_diagonal(&CVector::from_vec(vec![c(h, 0.0), c(v, 0.0)]));
    let id = CMatrix::identity(2, 2);
    let t = diag(th, tv);
    let r = diag(rh, rv);
    let pass = id.kronecker(&t).kronecker(&t);
    let mut swap = CMatrix::zeros(8, 8);
    for a in 0..2 {
        for b in 0..2 {
            for e in 0..2 {
                swap[(a * 4 + e * 2 + b, a * 4 + b * 2 + e)] = c(1.0, 0.0);
            }
        }
    }
    let refl = swap * id.kronecker(&r).kronecker(&r) * c(-1.0, 0.0);
    (pass, refl)
}

/// Unnormalized A⊗B'⊗E' state conditioned on one photon per output port;
/// its trace is the coincidence probability.
pub fn post_selected(cfg: &CouplingConfig) -> Result<CMatrix> {
    let pair = DensityMatrix::from_ket(&cfg.input.ket())?;
    let env = DensityMatrix::maximally_mixed(2)?;
    let rho = tensor(&pair, &env)?;
    let (pass, refl) = coupler_kraus(cfg);
    let p = cfg.regime.p();
    let coherent = &pass + &refl;
    let mut out = apply_kraus(rho.matrix(), &coherent) * c(p, 0.0);
    out += (apply_kraus(rho.matrix(), &pass) + apply_kraus(rho.matrix(), &refl)) * c(1.0 - p, 0.0);
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Constructed {
    pub rho_i: DensityMatrix,
    pub p_i: f64,
    pub rho_ii_h: DensityMatrix,
    pub p_ii_h: f64,
    pub rho_ii_v: DensityMatrix,
    pub p_ii_v: f64,
}

impl Constructed {
    pub fn stage_two(&self, outcome: Outcome) -> (&DensityMatrix, f64) {
        match outcome {
            Outcome::H => (&self.rho_ii_h, self.p_ii_h),
            Outcome::V => (&self.rho_ii_v, self.p_ii_v),
        }
    }
}

/// Stage I and both stage-II states with absolute probabilities.
pub fn stage_states(cfg: &CouplingConfig) -> Result<Constructed> {
    cfg.validate()?;
    let full = post_selected(cfg)?;
    let (rho_i, p_i) = DensityMatrix::from_unnormalized(partial_trace_matrix(&full, &[0, 1], &DIMS)?)?;
    let h = project_matrix(&full, 2, &Outcome::H.ket(), &DIMS)?;
    let v = project_matrix(&full, 2, &Outcome::V.ket(), &DIMS)?;
    let (rho_ii_h, p_ii_h) = DensityMatrix::from_unnormalized(h)?;
    let (rho_ii_v, p_ii_v) = DensityMatrix::from_unnormalized(v)?;
    Ok(Constructed { rho_i, p_i, rho_ii_h, p_ii_h, rho_ii_v, p_ii_v })
}

/// Stage III state and its absolute probability.
pub fn stage_three(cfg: &CouplingConfig, outcome: Outcome, f: &FilterConfig) -> Result<(DensityMatrix, f64)> {
    let st = stage_states(cfg)?;
    let (rho, p) = st.stage_two(outcome);
    let plan = filter_plan(cfg, outcome, f, rho.get(1, 1).re, rho.get(2, 2).re)?;
    let mut rho = rho.clone();
    let mut prob = p;
    for fl in &plan.filters {
        let (next, q) = apply_filter(&rho, fl)?;
        rho = next;
        prob *= q;
    }
    Ok((rho, prob))
}
