//! Stage-by-stage protocol: mixing (I), measurement of E (II), local
//! filtration (III).
//!
//! Each [`StageResult`] carries a trace-one state, the probability of the
//! stage given the previous one, and the absolute probability of the chain
//! so far.

pub mod closed_form;
pub mod construct;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::MetricReport;
use crate::qstate::{apply_filter, DensityMatrix, InputState, LocalFilter, Outcome, Polarization, Side};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Regime {
    #[serde(alias = "ind")]
    Indistinguishable,
    #[serde(alias = "dis")]
    Distinguishable,
    /// Indistinguishable with probability `p`.
    Partial { p: f64 },
}

impl Regime {
    pub fn p(&self) -> f64 {
        match *self {
            Regime::Indistinguishable => 1.0,
            Regime::Distinguishable => 0.0,
            Regime::Partial { p } => p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Coupling {
    /// Intensity transmissivity T for both polarizations.
    Isotropic { t: f64 },
    /// Amplitude transmissivities for V and H.
    Polarizing { tv: f64, th: f64 },
}

impl Coupling {
    /// Amplitude transmissivities (t_v, t_h).
    pub fn amplitudes(&self) -> (f64, f64) {
        match *self {
            Coupling::Isotropic { t } => (t.sqrt(), t.sqrt()),
            Coupling::Polarizing { tv, th } => (tv, th),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingConfig {
    pub regime: Regime,
    pub coupling: Coupling,
    #[serde(default)]
    pub input: InputState,
}

impl CouplingConfig {
    pub fn new(regime: Regime, coupling: Coupling, input: InputState) -> Result<Self> {
        let cfg = CouplingConfig { regime, coupling, input };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn isotropic(regime: Regime, t: f64) -> Result<Self> {
        Self::new(regime, Coupling::Isotropic { t }, InputState::Singlet)
    }

    pub fn polarizing(regime: Regime, tv: f64, th: f64) -> Result<Self> {
        Self::new(regime, Coupling::Polarizing { tv, th }, InputState::Singlet)
    }

    pub fn with_input(mut self, input: InputState) -> Self {
        self.input = input;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, x: f64| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} = {x} outside [0,1]")))
            }
        };
        unit("p", self.regime.p())?;
        match self.coupling {
            Coupling::Isotropic { t } => unit("T", t),
            Coupling::Polarizing { tv, th } => {
                unit("tv", tv)?;
                unit("th", th)
            }
        }
    }

    /// Side on which [`Balance::Auto`] equalizes |HV⟩ and |VH⟩.
    pub fn auto_balance_side(&self) -> Side {
        match self.regime {
            Regime::Indistinguishable => Side::A,
            _ => Side::B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    I,
    II,
    III,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageResult {
    pub stage: Stage,
    pub rho: DensityMatrix,
    /// Probability of this stage given the previous one.
    pub success_probability: f64,
    /// Absolute probability of the chain up to and including this stage.
    pub cumulative_probability: f64,
    pub metrics: MetricReport,
    pub outcome: Option<Outcome>,
}

impl StageResult {
    fn new(stage: Stage, rho: DensityMatrix, success: f64, cumulative: f64, outcome: Option<Outcome>) -> Result<Self> {
        let metrics = MetricReport::of(&rho)?;
        Ok(StageResult {
            stage,
            rho,
            success_probability: success,
            cumulative_probability: cumulative,
            metrics,
            outcome,
        })
    }
}

/// Which photon carries the filter that equalizes |HV⟩ and |VH⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Balance {
    /// Alice for indistinguishable photons, Bob otherwise.
    #[default]
    Auto,
    OnA,
    OnB,
    None,
}

/// Intensity transmissions of the four attenuators; on each photon the
/// larger of the two must be 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplicitGains {
    pub a_h: f64,
    pub a_v: f64,
    pub b_h: f64,
    pub b_v: f64,
}

impl ExplicitGains {
    pub fn filters(&self) -> Result<[LocalFilter; 2]> {
        for g in [self.a_h, self.a_v, self.b_h, self.b_v] {
            if !(0.0..=1.0).contains(&g) {
                return Err(Error::InvalidArgument(format!("attenuation {g} outside [0,1]")));
            }
        }
        Ok([
            LocalFilter::new(Side::A, self.a_h.sqrt(), self.a_v.sqrt())?,
            LocalFilter::new(Side::B, self.b_h.sqrt(), self.b_v.sqrt())?,
        ])
    }
}

/// Stage III settings. `eps` is the intensity transmission of the
/// polarization orthogonal to the measured one, applied on both photons
/// after balancing. Explicit gains replace both steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    pub eps: f64,
    #[serde(default)]
    pub balance: Balance,
    #[serde(default)]
    pub explicit_gains: Option<ExplicitGains>,
}

impl FilterConfig {
    pub fn new(eps: f64) -> Result<Self> {
        let f = FilterConfig { eps, balance: Balance::Auto, explicit_gains: None };
        f.validate()?;
        Ok(f)
    }

    /// ε = 1 without balancing.
    pub fn identity() -> Self {
        FilterConfig { eps: 1.0, balance: Balance::None, explicit_gains: None }
    }

    pub fn with_balance(mut self, balance: Balance) -> Self {
        self.balance = balance;
        self
    }

    pub fn with_gains(mut self, gains: ExplicitGains) -> Self {
        self.explicit_gains = Some(gains);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::InvalidArgument(format!("eps = {} outside (0,1]", self.eps)));
        }
        if let Some(g) = self.explicit_gains {
            g.filters()?;
        }
        Ok(())
    }
}

/// Ordered list of single-photon filters realizing a [`FilterConfig`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterPlan {
    pub filters: Vec<LocalFilter>,
}

/// Resolves the filters for a stage-II state with populations `hv`, `vh`.
pub fn filter_plan(cfg: &CouplingConfig, outcome: Outcome, f: &FilterConfig, hv: f64, vh: f64) -> Result<FilterPlan> {
    f.validate()?;
    if let Some(g) = f.explicit_gains {
        return Ok(FilterPlan { filters: g.filters()?.to_vec() });
    }
    let mut filters = Vec::new();
    let side = match f.balance {
        Balance::Auto => Some(cfg.auto_balance_side()),
        Balance::OnA => Some(Side::A),
        Balance::OnB => Some(Side::B),
        Balance::None => None,
    };
    if let Some(side) = side {
        if hv.max(vh) > 0.0 {
            // Alice attenuates her half of the larger term; Bob his.
            let (pol, gain) = match (side, hv >= vh) {
                (Side::A, true) => (Polarization::H, (vh / hv).sqrt()),
                (Side::A, false) => (Polarization::V, (hv / vh).sqrt()),
                (Side::B, true) => (Polarization::V, (vh / hv).sqrt()),
                (Side::B, false) => (Polarization::H, (hv / vh).sqrt()),
            };
            if gain < 1.0 {
                filters.push(LocalFilter::attenuate(side, pol, gain)?);
            }
        }
    }
    if f.eps < 1.0 {
        let noisy = outcome.orthogonal();
        let g = f.eps.sqrt();
        filters.push(LocalFilter::attenuate(Side::A, noisy, g)?);
        filters.push(LocalFilter::attenuate(Side::B, noisy, g)?);
    }
    Ok(FilterPlan { filters })
}

/// Stage I: the pair after the coupler, photon E ignored.
pub fn stage_mix(cfg: &CouplingConfig) -> Result<StageResult> {
    cfg.validate()?;
    let (rho, p) = closed_form::stage_one(cfg).state()?;
    StageResult::new(Stage::I, rho, p, p, None)
}

fn check_transmits(cfg: &CouplingConfig) -> Result<()> {
    let (tv, th) = cfg.coupling.amplitudes();
    if tv == 0.0 && th == 0.0 {
        return Err(Error::DegenerateCoupling(
            "zero transmissivity: the signal photon never reaches Bob".into(),
        ));
    }
    Ok(())
}

/// Stage II: photon E found in `outcome`.
pub fn stage_measure(cfg: &CouplingConfig, outcome: Outcome) -> Result<StageResult> {
    cfg.validate()?;
    check_transmits(cfg)?;
    let p_one = closed_form::stage_one(cfg).trace();
    let (rho, p) = closed_form::stage_two(cfg, outcome).state()?;
    StageResult::new(Stage::II, rho, p / p_one, p, Some(outcome))
}

/// Stage III: local filters on the measured state.
pub fn stage_filter(prev: &StageResult, cfg: &CouplingConfig, f: &FilterConfig) -> Result<StageResult> {
    if prev.stage != Stage::II {
        return Err(Error::InvalidArgument("filtration must follow the measurement stage".into()));
    }
    let outcome = prev.outcome.unwrap_or(Outcome::H);
    let hv = prev.rho.get(1, 1).re;
    let vh = prev.rho.get(2, 2).re;
    let plan = filter_plan(cfg, outcome, f, hv, vh)?;
    let mut rho = prev.rho.clone();
    let mut success = 1.0;
    for fl in &plan.filters {
        let (next, p) = apply_filter(&rho, fl)?;
        rho = next;
        success *= p;
    }
    StageResult::new(Stage::III, rho, success, prev.cumulative_probability * success, Some(outcome))
}

/// All three stages, with E projected on |H⟩.
pub fn run_protocol(cfg: &CouplingConfig, f: &FilterConfig) -> Result<Vec<StageResult>> {
    run_protocol_for(cfg, Outcome::H, f)
}

pub fn run_protocol_for(cfg: &CouplingConfig, outcome: Outcome, f: &FilterConfig) -> Result<Vec<StageResult>> {
    let one = stage_mix(cfg)?;
    let two = stage_measure(cfg, outcome)?;
    let three = stage_filter(&two, cfg, f)?;
    Ok(vec![one, two, three])
}
