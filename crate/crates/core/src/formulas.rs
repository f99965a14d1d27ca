//! Closed-form scalars of the localization protocol.
//!
//! Probabilities are absolute: `p_i` is the chance that the two photons
//! leave the coupler separately, `p_ii` that this happens and photon E is
//! found in the chosen polarization, `p_iii` that the filters then pass as
//! well. Concurrences and Bell factors refer to the conditional states.

use nalgebra::Matrix2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qstate::{c, Polarization, Side, C64};

pub const SQRT2: f64 = std::f64::consts::SQRT_2;
/// Guard band around published thresholds; inputs exactly on a threshold
/// are reported on the non-violating side.
pub const THRESHOLD_GUARD: f64 = 1e-12;
const TINY: f64 = 1e-300;

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} = {x} outside [0,1]")))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("eps = {eps} outside (0,1]")))
    }
}

/// Effective transmissivity of a Mach-Zehnder coupler, as printed:
/// T₁ + T₂ − 2T₁T₂ + √(T₁T₂R₁R₂) cos 2φ.
pub fn effective_transmissivity(t1: f64, t2: f64, phi: f64) -> Result<f64> {
    check_unit("T1", t1)?;
    check_unit("T2", t2)?;
    let (r1, r2) = (1.0 - t1, 1.0 - t2);
    let t = t1 + t2 - 2.0 * t1 * t2 + (t1 * t2 * r1 * r2).sqrt() * (2.0 * phi).cos();
    if !(-1e-9..=1.0 + 1e-9).contains(&t) {
        return Err(Error::ModelInconsistency(format!(
            "effective transmissivity {t} outside [0,1]"
        )));
    }
    Ok(t.clamp(0.0, 1.0))
}

/// Mode matrix of two beam splitters (t, r; −r, t) with phases e^{±iφ}
/// in the internal arms.
pub fn mach_zehnder_unitary(t1: f64, t2: f64, phi: f64) -> Result<Matrix2<C64>> {
    check_unit("T1", t1)?;
    check_unit("T2", t2)?;
    let bs = |t: f64| {
        let (a, b) = (t.sqrt(), (1.0 - t).sqrt());
        Matrix2::new(c(a, 0.0), c(b, 0.0), c(-b, 0.0), c(a, 0.0))
    };
    let ph = Matrix2::new(C64::from_polar(1.0, phi), c(0.0, 0.0), c(0.0, 0.0), C64::from_polar(1.0, -phi));
    Ok(bs(t2) * ph * bs(t1))
}

/// Crossing-port probability of [`mach_zehnder_unitary`]; equals
/// T₁R₂ + T₂R₁ + 2√(T₁T₂R₁R₂) cos 2φ.
pub fn composed_transmissivity(t1: f64, t2: f64, phi: f64) -> Result<f64> {
    Ok(mach_zehnder_unitary(t1, t2, phi)?[(1, 0)].norm_sqr())
}

/// Maximal CHSH value of a normalized X state whose only coherence is
/// |z| = |ρ_{HV,VH}|.
pub fn x_state_bell(hh: f64, hv: f64, vh: f64, vv: f64, z: f64) -> f64 {
    let zz = 4.0 * z * z;
    let t33 = hh + vv - hv - vh;
    2.0 * (zz + zz.max(t33 * t33)).sqrt()
}

/// Concurrence of the same X state.
pub fn x_state_concurrence(hh: f64, _hv: f64, _vh: f64, vv: f64, z: f64) -> f64 {
    (2.0 * (z - (hh * vv).max(0.0).sqrt())).max(0.0)
}

/// Bell value and concurrence from unnormalized X-state weights.
fn x_metrics(hh: f64, hv: f64, vh: f64, vv: f64, z: f64) -> (f64, f64) {
    let n = hh + hv + vh + vv;
    if n < TINY {
        return (0.0, 0.0);
    }
    let (a, b, cc, d, zz) = (hh / n, hv / n, vh / n, vv / n, z / n);
    (x_state_concurrence(a, b, cc, d, zz), x_state_bell(a, b, cc, d, zz))
}

pub mod thresholds {
    use super::{SQRT2, THRESHOLD_GUARD};

    /// Below this T the indistinguishable channel breaks entanglement.
    pub fn ind_entanglement() -> f64 {
        1.0 / 3f64.sqrt()
    }

    pub fn dis_entanglement() -> f64 {
        SQRT2 - 1.0
    }

    /// Root of (2√2−3)T² + (3−√2)T − 1 = 0 above 1/2.
    pub fn ind_bell() -> f64 {
        let a = 2.0 * SQRT2 - 3.0;
        let b = 3.0 - SQRT2;
        let disc = (b * b + 4.0 * a).sqrt();
        (-b + disc) / (2.0 * a)
    }

    pub fn dis_bell() -> f64 {
        1.0 + (1.0 - (1.0 + SQRT2).sqrt()) / SQRT2
    }

    pub fn ind_entangled(t: f64) -> bool {
        t > ind_entanglement() + THRESHOLD_GUARD
    }

    pub fn dis_entangled(t: f64) -> bool {
        t > dis_entanglement() + THRESHOLD_GUARD
    }

    pub fn ind_violates_bell(t: f64) -> bool {
        t > ind_bell() + THRESHOLD_GUARD
    }

    pub fn dis_violates_bell(t: f64) -> bool {
        t > dis_bell() + THRESHOLD_GUARD
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndSuite {
    pub f_i: f64,
    pub c_i: f64,
    pub b_i: f64,
    pub p_i: f64,
    pub c_ii: f64,
    pub p_ii: f64,
    pub b_ii: f64,
    pub c_iii: f64,
    pub p_iii: f64,
    pub b_iii: f64,
    pub c_iii_limit: f64,
    pub b_iii_limit: f64,
    /// T = 0 or T = 1/2: filtration cannot restore entanglement.
    pub singular: bool,
}

/// Indistinguishable photons, isotropic coupling.
pub fn indistinguishable_suite(t: f64, eps: f64) -> Result<IndSuite> {
    check_unit("T", t)?;
    check_eps(eps)?;
    let r = 1.0 - t;
    let den = 1.0 - 3.0 * t * r;
    let f_i = (1.0 - 3.0 * t).powi(2) / (4.0 * den);
    let c_i = ((3.0 * t * t - 1.0) / (2.0 * den)).max(0.0);
    let b_i = 2.0 * SQRT2 * t * (1.0 - 2.0 * t).abs() / den;
    let p_i = (t * t + (t - r).powi(2) + r * r) / 2.0;
    let c_ii = t * (2.0 * t - 1.0).abs() / den;
    let singular = t < 1e-15 || (2.0 * t - 1.0).abs() < 1e-15;

    // Balance |HV⟩ and |VH⟩ on Alice's side, then attenuate V on both arms.
    let k = (2.0 * t - 1.0).powi(2);
    let (alpha, delta) = if t >= 1.0 / 3.0 { (k, r * r) } else { (t * t, r * r * t * t / k) };
    let w = 2.0 * eps * alpha + eps * eps * delta;
    let p_iii = w / 4.0;
    let b_iii = x_metrics(0.0, eps * alpha, eps * alpha, eps * eps * delta, eps * alpha).1;
    let c_iii = if singular {
        0.0
    } else {
        1.0 / (1.0 + eps * r * r / (2.0 * (1.0 - 2.0 * t).powi(2)))
    };
    Ok(IndSuite {
        f_i,
        c_i,
        b_i,
        p_i,
        c_ii,
        p_ii: p_i / 2.0,
        b_ii: b_i,
        c_iii,
        p_iii,
        b_iii,
        c_iii_limit: if singular { 0.0 } else { 1.0 },
        b_iii_limit: if singular { b_iii } else { 2.0 * SQRT2 },
        singular,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisSuite {
    pub f_i: f64,
    pub c_i: f64,
    pub b_i: f64,
    pub p_i: f64,
    pub c_ii: f64,
    pub p_ii: f64,
    pub b_ii: f64,
    pub c_iii: f64,
    pub p_iii: f64,
    pub b_iii: f64,
    pub c_iii_limit: f64,
    pub b_iii_limit: f64,
}

/// Fully distinguishable photons, isotropic coupling.
pub fn distinguishable_suite(t: f64, eps: f64) -> Result<DisSuite> {
    check_unit("T", t)?;
    check_eps(eps)?;
    let r = 1.0 - t;
    let d = t * t + r * r;
    let den = 1.0 - 2.0 * t * r;
    let f_i = (5.0 * t * t - 2.0 * t + 1.0) / (4.0 * den);
    let c_i = ((t * t + 2.0 * t - 1.0) / (2.0 * den)).max(0.0);
    let b_i = 2.0 * SQRT2 * t * t / d;
    let c_ii = t * t / (2.0 * t * t - 2.0 * t + 1.0);

    // Matrix form after balancing on Bob and attenuating V on both arms.
    let xi = t.powi(3) / d.sqrt();
    let beta = t * t;
    let delta = r * r;
    let w = 2.0 * eps * beta + eps * eps * delta;
    let c_iii = 2.0 * eps * xi / w;
    let (_, b_iii) = x_metrics(0.0, eps * beta, eps * beta, eps * eps * delta, eps * xi);
    Ok(DisSuite {
        f_i,
        c_i,
        b_i,
        p_i: d,
        c_ii,
        p_ii: d / 2.0,
        b_ii: b_i,
        c_iii,
        p_iii: w / 4.0,
        b_iii,
        c_iii_limit: c_ii.sqrt(),
        b_iii_limit: 2.0 * (1.0 + t * t / d).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialSuite {
    pub f: f64,
    pub c: f64,
    pub b: f64,
    pub p: f64,
    /// Concurrence right after the measurement on E.
    pub c_i_meas: f64,
    pub p_ii: f64,
    pub c_iii: f64,
    pub p_iii: f64,
    pub b_iii: f64,
    pub c_iii_limit: f64,
    pub b_iii_limit: f64,
    /// Open ε interval in which the coherence dominates the Bell value.
    pub eps_window: (f64, f64),
    pub eps_in_window: bool,
    /// Stage-I entanglement is lost for p above this value.
    pub p_loss: f64,
    /// Stage-I Bell violation requires p below this value.
    pub p_bell: f64,
    /// 1 − 2(1+p)T(1−T) = 0: no state survives the filters.
    pub singular: bool,
}

/// Bell value inside the ε window.
pub fn bell_iii_coherent(p: f64, t: f64, eps: f64) -> f64 {
    let r = 1.0 - t;
    let d = 1.0 - 2.0 * (1.0 + p) * t * r;
    4.0 * SQRT2 * t * t * (t - p * r).abs() / (d.sqrt() * (2.0 * t * t + r * r * eps))
}

/// Bell value outside the ε window.
pub fn bell_iii_population(p: f64, t: f64, eps: f64) -> f64 {
    let r = 1.0 - t;
    let d = 1.0 - 2.0 * (1.0 + p) * t * r;
    let x = 4.0 * t.powi(4) * (t - p * r).powi(2) / d + (r * r * eps - 2.0 * t * t).powi(2);
    2.0 * x.sqrt() / (2.0 * t * t + r * r * eps)
}

/// ε interval separating the two Bell branches.
pub fn eps_window(p: f64, t: f64) -> (f64, f64) {
    let r = 1.0 - t;
    if r == 0.0 {
        return (0.0, f64::INFINITY);
    }
    let s = (1.0 - 2.0 * (1.0 + p) * t * r).max(0.0).sqrt();
    let a = (t - p * r).abs();
    (2.0 * t * t * (s - a) / (r * r * s), 2.0 * t * t * (s + a) / (r * r * s))
}

/// Mixture of indistinguishable (weight p) and distinguishable couplings.
pub fn partial_suite(p: f64, t: f64, eps: f64) -> Result<PartialSuite> {
    check_unit("p", p)?;
    check_unit("T", t)?;
    check_eps(eps)?;
    let r = 1.0 - t;
    let pp = 1.0 - (2.0 + p) * t * r;
    let f = ((4.0 * p + 5.0) * t * t - 2.0 * (2.0 * p + 1.0) * t + 1.0) / (4.0 * pp);
    let b = 2.0 * SQRT2 * t * (t - p * r).abs() / pp;
    let c_i_meas = (((1.0 + p) * t * t - p * t).abs() / pp).max(0.0);
    let d = 1.0 - 2.0 * (1.0 + p) * t * r;
    let singular = d < 1e-15;
    let window = eps_window(p, t);
    let in_window = eps > window.0 && eps < window.1;

    let (c_iii, p_iii, b_iii, c_lim, b_lim) = if singular {
        (0.0, 0.0, 0.0, 0.0, 0.0)
    } else {
        let c_iii = 2.0 * t * t * (t - p * r).abs() / (d.sqrt() * (eps * r * r + 2.0 * t * t));
        // Bob's filter pulls the larger of |HV⟩, |VH⟩ down to the smaller.
        let p_iii = if d >= t * t {
            (2.0 * eps * t * t + eps * eps * r * r) / 4.0
        } else {
            (2.0 * eps * d + eps * eps * r * r * d / (t * t)) / 4.0
        };
        let b_iii = if in_window || r == 0.0 {
            bell_iii_coherent(p, t, eps)
        } else {
            bell_iii_population(p, t, eps)
        };
        let c_lim = ((t - p * r).abs() / d.sqrt()).max(0.0);
        let b_lim = 2.0 * (1.0 + (t - p * r).powi(2) / d).sqrt();
        (c_iii, p_iii, b_iii, c_lim, b_lim)
    };
    Ok(PartialSuite {
        f,
        c: (2.0 * f - 1.0).max(0.0),
        b,
        p: pp,
        c_i_meas,
        p_ii: pp / 2.0,
        c_iii,
        p_iii,
        b_iii,
        c_iii_limit: c_lim,
        b_iii_limit: b_lim,
        eps_window: window,
        eps_in_window: in_window,
        p_loss: (t * t + 2.0 * t - 1.0) / (2.0 * t * r),
        p_bell: SQRT2 + 1.0 / r - (1.0 + SQRT2) / t,
        singular,
    })
}

/// Hong-Ou-Mandel dip visibility p·2RT/(R²+T²).
pub fn hom_visibility(p: f64, t: f64) -> Result<f64> {
    check_unit("p", p)?;
    check_unit("T", t)?;
    let r = 1.0 - t;
    Ok(p * 2.0 * r * t / (r * r + t * t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhotonRegime {
    #[serde(alias = "indistinguishable")]
    Ind,
    #[serde(alias = "distinguishable")]
    Dis,
}

/// Balancing filter used before the ε attenuation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Balancer {
    pub side: Side,
    pub pol: Polarization,
    /// Amplitude gain; values above 1 mean the closed form assumes an
    /// amplifier and its probability is not physical.
    pub gain: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarizingSuite {
    pub c_i: f64,
    pub p_i: f64,
    pub c_ii: f64,
    pub p_ii: f64,
    pub c_iii: f64,
    pub p_iii: f64,
    pub c_iii_limit: f64,
    pub balancer: Balancer,
}

/// Polarization-dependent coupling with amplitude transmissivities t_v, t_h;
/// photon E is projected on |V⟩ and H is attenuated by √ε on both arms.
pub fn polarizing_suite(tv: f64, th: f64, eps: f64, regime: PhotonRegime) -> Result<PolarizingSuite> {
    check_unit("tv", tv)?;
    check_unit("th", th)?;
    check_eps(eps)?;
    if tv == 0.0 && th == 0.0 {
        return Err(Error::DegenerateCoupling("t_v = t_h = 0 reflects both polarizations".into()));
    }
    let (v2, h2) = (tv * tv, th * th);
    let rr = (1.0 - v2) * (1.0 - h2);
    let ratio = |num: f64, den: f64| if den < TINY { 0.0 } else { num / den };
    match regime {
        PhotonRegime::Ind => {
            let p_i = (2.0 * v2 * h2 + (1.0 - 2.0 * v2).powi(2) + (1.0 - 2.0 * h2).powi(2) + 2.0 * rr) / 4.0;
            let c_i = ratio(2.0 * tv * th * (h2 - 1.0 + v2).abs() - rr, 2.0 * p_i).max(0.0);
            let p_ii = (v2 * h2 + (1.0 - 2.0 * v2).powi(2) + rr) / 4.0;
            let c_ii = ratio(th * tv * (1.0 - 2.0 * v2).abs(), 2.0 * p_ii);
            let k = (1.0 - 2.0 * v2).powi(2);
            let first = tv > 0.0 && th > (2.0 * v2 - 1.0).abs() / tv;
            let (c_iii, p_iii, balancer) = if first {
                let p3 = (2.0 * eps * k + eps * eps * rr) / 4.0;
                let gain = (2.0 * v2 - 1.0).abs() / (tv * th);
                (ratio(eps * k, 2.0 * p3), p3, Balancer { side: Side::A, pol: Polarization::V, gain })
            } else {
                let p3 = if k < TINY { 0.0 } else { (2.0 * eps * v2 * h2 + eps * eps * rr * v2 * h2 / k) / 4.0 };
                let gain = ratio(tv * th, (2.0 * v2 - 1.0).abs());
                (ratio(eps * v2 * h2, 2.0 * p3), p3, Balancer { side: Side::A, pol: Polarization::H, gain })
            };
            let live = th > 0.0 && tv > 0.0 && (1.0 - 2.0 * v2).abs() >= 1e-15;
            Ok(PolarizingSuite {
                c_i,
                p_i,
                c_ii,
                p_ii,
                c_iii,
                p_iii,
                c_iii_limit: if live { 1.0 } else { 0.0 },
                balancer,
            })
        }
        PhotonRegime::Dis => {
            let p_i = (2.0 * rr + (1.0 - h2).powi(2) + h2 * (h2 + v2) + (1.0 - v2).powi(2) + v2 * (h2 + v2)) / 4.0;
            let c_i = ratio(th * tv * (h2 + v2) - rr, 2.0 * p_i).max(0.0);
            let p_ii = (h2 * v2 + v2 * v2 + (1.0 - v2).powi(2) + rr) / 4.0;
            let c_ii = ratio(th * tv.powi(3), 2.0 * p_ii);
            let n = (v2 * v2 + (1.0 - v2).powi(2)).sqrt();
            let p_iii = (2.0 * eps * v2 * h2 + eps * eps * rr) / 4.0;
            let c_iii = ratio(eps * v2 * v2 * h2, 2.0 * p_iii * n);
            Ok(PolarizingSuite {
                c_i,
                p_i,
                c_ii,
                p_ii,
                c_iii,
                p_iii,
                c_iii_limit: if th > 0.0 { v2 / n } else { 0.0 },
                balancer: Balancer { side: Side::B, pol: Polarization::V, gain: tv * th / n },
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Codomain {
    Concurrence,
    Probability,
    Bell,
    Fidelity,
    Visibility,
    Epsilon,
}

impl Codomain {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Codomain::Bell => (0.0, 2.0 * SQRT2),
            Codomain::Epsilon => (0.0, f64::INFINITY),
            _ => (0.0, 1.0),
        }
    }
}

/// A named closed-form curve evaluated on named parameters.
#[derive(Clone, Copy)]
pub struct ScalarCurve {
    pub name: &'static str,
    pub inputs: &'static [&'static str],
    pub codomain: Codomain,
    eval: fn(&[f64]) -> Result<f64>,
}

impl std::fmt::Debug for ScalarCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarCurve")
            .field("name", &self.name)
            .field("inputs", &self.inputs)
            .field("codomain", &self.codomain)
            .finish()
    }
}

impl ScalarCurve {
    /// Evaluates with arguments in the order of `inputs`.
    pub fn eval(&self, args: &[f64]) -> Result<f64> {
        if args.len() != self.inputs.len() {
            return Err(Error::InvalidArgument(format!(
                "{} takes {} arguments",
                self.name,
                self.inputs.len()
            )));
        }
        (self.eval)(args)
    }

    /// Evaluates by looking each input up by name.
    pub fn eval_with(&self, lookup: impl Fn(&str) -> Option<f64>) -> Result<f64> {
        let args = self
            .inputs
            .iter()
            .map(|n| lookup(n).ok_or_else(|| Error::InvalidArgument(format!("{} needs {n}", self.name))))
            .collect::<Result<Vec<_>>>()?;
        self.eval(&args)
    }

    pub fn in_bounds(&self, value: f64) -> bool {
        let (lo, hi) = self.codomain.bounds();
        value >= lo - 1e-12 && value <= hi + 1e-12
    }
}

macro_rules! curve {
    ($name:expr, [$($inp:expr),*], $cod:ident, |$a:ident| $body:expr) => {
        ScalarCurve { name: $name, inputs: &[$($inp),*], codomain: Codomain::$cod, eval: |$a: &[f64]| $body }
    };
}

/// Every named curve, grouped by regime prefix.
pub fn catalog() -> Vec<ScalarCurve> {
    use PhotonRegime::{Dis, Ind};
    vec![
        curve!("ind.F_I", ["T"], Fidelity, |a| Ok(indistinguishable_suite(a[0], 1.0)?.f_i)),
        curve!("ind.C_I", ["T"], Concurrence, |a| Ok(indistinguishable_suite(a[0], 1.0)?.c_i)),
        curve!("ind.B_I", ["T"], Bell, |a| Ok(indistinguishable_suite(a[0], 1.0)?.b_i)),
        curve!("ind.P_I", ["T"], Probability, |a| Ok(indistinguishable_suite(a[0], 1.0)?.p_i)),
        curve!("ind.C_II", ["T"], Concurrence, |a| Ok(indistinguishable_suite(a[0], 1.0)?.c_ii)),
        curve!("ind.P_II", ["T"], Probability, |a| Ok(indistinguishable_suite(a[0], 1.0)?.p_ii)),
        curve!("ind.B_II", ["T"], Bell, |a| Ok(indistinguishable_suite(a[0], 1.0)?.b_ii)),
        curve!("ind.C_III", ["T", "eps"], Concurrence, |a| Ok(indistinguishable_suite(a[0], a[1])?.c_iii)),
        curve!("ind.P_III", ["T", "eps"], Probability, |a| Ok(indistinguishable_suite(a[0], a[1])?.p_iii)),
        curve!("ind.B_III", ["T", "eps"], Bell, |a| Ok(indistinguishable_suite(a[0], a[1])?.b_iii)),
        curve!("dis.F_I", ["T"], Fidelity, |a| Ok(distinguishable_suite(a[0], 1.0)?.f_i)),
        curve!("dis.C_I", ["T"], Concurrence, |a| Ok(distinguishable_suite(a[0], 1.0)?.c_i)),
        curve!("dis.B_I", ["T"], Bell, |a| Ok(distinguishable_suite(a[0], 1.0)?.b_i)),
        curve!("dis.P_I", ["T"], Probability, |a| Ok(distinguishable_suite(a[0], 1.0)?.p_i)),
        curve!("dis.C_II", ["T"], Concurrence, |a| Ok(distinguishable_suite(a[0], 1.0)?.c_ii)),
        curve!("dis.P_II", ["T"], Probability, |a| Ok(distinguishable_suite(a[0], 1.0)?.p_ii)),
        curve!("dis.B_II", ["T"], Bell, |a| Ok(distinguishable_suite(a[0], 1.0)?.b_ii)),
        curve!("dis.C_III", ["T", "eps"], Concurrence, |a| Ok(distinguishable_suite(a[0], a[1])?.c_iii)),
        curve!("dis.P_III", ["T", "eps"], Probability, |a| Ok(distinguishable_suite(a[0], a[1])?.p_iii)),
        curve!("dis.B_III", ["T", "eps"], Bell, |a| Ok(distinguishable_suite(a[0], a[1])?.b_iii)),
        curve!("dis.C_III_limit", ["T"], Concurrence, |a| Ok(distinguishable_suite(a[0], 1.0)?.c_iii_limit)),
        curve!("dis.B_III_limit", ["T"], Bell, |a| Ok(distinguishable_suite(a[0], 1.0)?.b_iii_limit)),
        curve!("partial.F", ["p", "T"], Fidelity, |a| Ok(partial_suite(a[0], a[1], 1.0)?.f)),
        curve!("partial.C", ["p", "T"], Concurrence, |a| Ok(partial_suite(a[0], a[1], 1.0)?.c)),
        curve!("partial.B", ["p", "T"], Bell, |a| Ok(partial_suite(a[0], a[1], 1.0)?.b)),
        curve!("partial.P", ["p", "T"], Probability, |a| Ok(partial_suite(a[0], a[1], 1.0)?.p)),
        curve!("partial.C_I_meas", ["p", "T"], Concurrence, |a| Ok(partial_suite(a[0], a[1], 1.0)?.c_i_meas)),
        curve!("partial.P_II", ["p", "T"], Probability, |a| Ok(partial_suite(a[0], a[1], 1.0)?.p_ii)),
        curve!("partial.C_III", ["p", "T", "eps"], Concurrence, |a| Ok(partial_suite(a[0], a[1], a[2])?.c_iii)),
        curve!("partial.P_III", ["p", "T", "eps"], Probability, |a| Ok(partial_suite(a[0], a[1], a[2])?.p_iii)),
        curve!("partial.B_III", ["p", "T", "eps"], Bell, |a| Ok(partial_suite(a[0], a[1], a[2])?.b_iii)),
        curve!("partial.C_III_limit", ["p", "T"], Concurrence, |a| Ok(partial_suite(a[0], a[1], 1.0)?.c_iii_limit)),
        curve!("partial.B_III_limit", ["p", "T"], Bell, |a| Ok(partial_suite(a[0], a[1], 1.0)?.b_iii_limit)),
        curve!("partial.eps_lo", ["p", "T"], Epsilon, |a| Ok(partial_suite(a[0], a[1], 1.0)?.eps_window.0)),
        curve!("partial.eps_hi", ["p", "T"], Epsilon, |a| Ok(partial_suite(a[0], a[1], 1.0)?.eps_window.1)),
        curve!("partial.V", ["p", "T"], Visibility, |a| hom_visibility(a[0], a[1])),
        curve!("polarizing.ind.C_I", ["tv", "th"], Concurrence, |a| Ok(polarizing_suite(a[0], a[1], 1.0, Ind)?.c_i)),
        curve!("polarizing.ind.P_I", ["tv", "th"], Probability, |a| Ok(polarizing_suite(a[0], a[1], 1.0, Ind)?.p_i)),
        curve!("polarizing.ind.C_II", ["tv", "th"], Concurrence, |a| Ok(polarizing_suite(a[0], a[1], 1.0, Ind)?.c_ii)),
        curve!("polarizing.ind.P_II", ["tv", "th"], Probability, |a| Ok(polarizing_suite(a[0], a[1], 1.0, Ind)?.p_ii)),
        curve!("polarizing.ind.C_III", ["tv", "th", "eps"], Concurrence, |a| Ok(polarizing_suite(a[0], a[1], a[2], Ind)?.c_iii)),
        curve!("polarizing.ind.P_III", ["tv", "th", "eps"], Probability, |a| Ok(polarizing_suite(a[0], a[1], a[2], Ind)?.p_iii)),
        curve!("polarizing.dis.C_I", ["tv", "th"], Concurrence, |a| Ok(polarizing_suite(a[0], a[1], 1.0, Dis)?.c_i)),
        curve!("polarizing.dis.P_I", ["tv", "th"], Probability, |a| Ok(polarizing_suite(a[0], a[1], 1.0, Dis)?.p_i)),
        curve!("polarizing.dis.C_II", ["tv", "th"], Concurrence, |a| Ok(polarizing_suite(a[0], a[1], 1.0, Dis)?.c_ii)),
        curve!("polarizing.dis.P_II", ["tv", "th"], Probability, |a| Ok(polarizing_suite(a[0], a[1], 1.0, Dis)?.p_ii)),
        curve!("polarizing.dis.C_III", ["tv", "th", "eps"], Concurrence, |a| Ok(polarizing_suite(a[0], a[1], a[2], Dis)?.c_iii)),
        curve!("polarizing.dis.P_III", ["tv", "th", "eps"], Probability, |a| Ok(polarizing_suite(a[0], a[1], a[2], Dis)?.p_iii)),
        curve!("mz.T_printed", ["T1", "T2", "phi"], Probability, |a| effective_transmissivity(a[0], a[1], a[2])),
        curve!("mz.T_composed", ["T1", "T2", "phi"], Probability, |a| composed_transmissivity(a[0], a[1], a[2])),
    ]
}

pub fn curve(name: &str) -> Option<ScalarCurve> {
    catalog().into_iter().find(|c| c.name == name)
}
