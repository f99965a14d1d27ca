//! Second-quantized reference model of the coupler.
//!
//! Photons B and E enter the two ports of a beam splitter with amplitude
//! transmissivities (t_h, t_v). Output states are built by expanding
//! products of creation operators on the vacuum, with bosonic √(n+1)
//! factors, over the occupation basis of the output modes. Distinguishable
//! photons carry orthogonal internal tags, so they never interfere. A pair
//! is indistinguishable with probability p, otherwise distinguishable.
//!
//! Mode transformation:
//! a†_B → t a†_B' + r a†_E', a†_E → t a†_E' − r a†_B'.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qstate::{c, CMatrix, DensityMatrix, InputState, Ket, C64};

/// Output port of the coupler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    /// Bob's mode B'.
    Signal,
    /// Environment mode E'.
    Idler,
}

/// Output modes indexed by (port, polarization, tag).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeLayout {
    pub tags: usize,
}

impl ModeLayout {
    pub fn modes(&self) -> usize {
        4 * self.tags
    }

    pub fn mode(&self, port: Port, pol: usize, tag: usize) -> usize {
        let p = match port {
            Port::Signal => 0,
            Port::Idler => 1,
        };
        (p * 2 + pol) * self.tags + tag
    }

    /// Inverse of [`ModeLayout::mode`].
    pub fn describe(&self, mode: usize) -> (Port, usize, usize) {
        let tag = mode % self.tags;
        let rest = mode / self.tags;
        let port = if rest / 2 == 0 { Port::Signal } else { Port::Idler };
        (port, rest % 2, tag)
    }
}

/// Superposition over occupation-number vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    modes: usize,
    amps: BTreeMap<Vec<u8>, C64>,
}

impl FockState {
    pub fn vacuum(modes: usize) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(vec![0; modes], c(1.0, 0.0));
        FockState { modes, amps }
    }

    /// Applies Σ_k c_k a†_k.
    pub fn create(&self, terms: &[(usize, C64)]) -> FockState {
        let mut out: BTreeMap<Vec<u8>, C64> = BTreeMap::new();
        for (occ, &amp) in &self.amps {
            for &(mode, coef) in terms {
                if coef == c(0.0, 0.0) {
                    continue;
                }
                let mut next = occ.clone();
                next[mode] += 1;
                let boson = (next[mode] as f64).sqrt();
                *out.entry(next).or_insert(c(0.0, 0.0)) += amp * coef * boson;
            }
        }
        out.retain(|_, a| a.norm_sqr() > 0.0);
        FockState { modes: self.modes, amps: out }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn amplitude(&self, occ: &[u8]) -> C64 {
        self.amps.get(occ).copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], C64)> {
        self.amps.iter().map(|(k, v)| (k.as_slice(), *v))
    }
}

/// All occupation vectors with `n` photons in `modes` modes.
pub fn occupation_basis(modes: usize, n: u8) -> Vec<Vec<u8>> {
    fn rec(prefix: &mut Vec<u8>, left: u8, modes: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == modes - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            rec(prefix, left - k, modes, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, modes, &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    pub tv: f64,
    pub th: f64,
    pub p: f64,
    /// Forces p = 0, as for photons delayed beyond their coherence time.
    pub delay_distinguishable: bool,
    pub input: InputState,
}

impl OracleConfig {
    pub fn new(tv: f64, th: f64, p: f64) -> Result<Self> {
        let cfg = OracleConfig { tv, th, p, delay_distinguishable: false, input: InputState::Singlet };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn isotropic(t: f64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!("T = {t} outside [0,1]")));
        }
        Self::new(t.sqrt(), t.sqrt(), p)
    }

    pub fn with_input(mut self, input: InputState) -> Self {
        self.input = input;
        self
    }

    pub fn delayed(mut self) -> Self {
        self.delay_distinguishable = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (n, x) in [("tv", self.tv), ("th", self.th), ("p", self.p)] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::InvalidArgument(format!("{n} = {x} outside [0,1]")));
            }
        }
        Ok(())
    }

    pub fn effective_p(&self) -> f64 {
        if self.delay_distinguishable {
            0.0
        } else {
            self.p
        }
    }

    fn t(&self, pol: usize) -> f64 {
        if pol == 0 {
            self.th
        } else {
            self.tv
        }
    }

    fn r(&self, pol: usize) -> f64 {
        (1.0 - self.t(pol).powi(2)).max(0.0).sqrt()
    }
}

/// Creation-operator combination for a photon of polarization `pol`
/// (two amplitudes, not necessarily normalized) entering `port`.
fn input_photon(cfg: &OracleConfig, layout: ModeLayout, port: Port, pol: [C64; 2], tag: usize) -> Vec<(usize, C64)> {
    let mut terms = Vec::with_capacity(4);
    for (k, &amp) in pol.iter().enumerate() {
        let (t, r) = (cfg.t(k), cfg.r(k));
        match port {
            Port::Signal => {
                terms.push((layout.mode(Port::Signal, k, tag), amp * t));
                terms.push((layout.mode(Port::Idler, k, tag), amp * r));
            }
            Port::Idler => {
                terms.push((layout.mode(Port::Idler, k, tag), amp * t));
                terms.push((layout.mode(Port::Signal, k, tag), -amp * r));
            }
        }
    }
    terms
}

fn pol_amps(k: &Ket) -> Result<[C64; 2]> {
    if k.dim() != 2 {
        return Err(Error::InvalidArgument("photon polarization must be a qubit".into()));
    }
    Ok([k.amplitudes()[0], k.amplitudes()[1]])
}

/// Output state of the coupler for single photons in B and E.
pub fn propagate(cfg: &OracleConfig, pol_b: &Ket, pol_e: &Ket, distinguishable: bool) -> Result<FockState> {
    let layout = ModeLayout { tags: if distinguishable { 2 } else { 1 } };
    let tag_e = if distinguishable { 1 } else { 0 };
    let b = input_photon(cfg, layout, Port::Signal, pol_amps(pol_b)?, 0);
    let e = input_photon(cfg, layout, Port::Idler, pol_amps(pol_e)?, tag_e);
    Ok(FockState::vacuum(layout.modes()).create(&e).create(&b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sectors {
    /// Both photons in B'.
    pub both_signal: f64,
    /// Both photons in E'.
    pub both_idler: f64,
    /// One photon in each output port.
    pub split: f64,
}

fn photons_per_port(layout: ModeLayout, occ: &[u8]) -> (u8, u8) {
    let mut s = 0;
    let mut i = 0;
    for (m, &n) in occ.iter().enumerate() {
        match layout.describe(m).0 {
            Port::Signal => s += n,
            Port::Idler => i += n,
        }
    }
    (s, i)
}

fn sectors_of(state: &FockState, layout: ModeLayout) -> Sectors {
    let mut out = Sectors { both_signal: 0.0, both_idler: 0.0, split: 0.0 };
    for (occ, a) in state.iter() {
        match photons_per_port(layout, occ) {
            (2, 0) => out.both_signal += a.norm_sqr(),
            (0, 2) => out.both_idler += a.norm_sqr(),
            _ => out.split += a.norm_sqr(),
        }
    }
    out
}

/// Output-sector probabilities for normalized input polarizations.
pub fn sector_probabilities(cfg: &OracleConfig, pol_b: &Ket, pol_e: &Ket) -> Result<Sectors> {
    cfg.validate()?;
    let p = cfg.effective_p();
    let ind = sectors_of(&propagate(cfg, pol_b, pol_e, false)?, ModeLayout { tags: 1 });
    let dis = sectors_of(&propagate(cfg, pol_b, pol_e, true)?, ModeLayout { tags: 2 });
    let mix = |x: f64, y: f64| p * x + (1.0 - p) * y;
    Ok(Sectors {
        both_signal: mix(ind.both_signal, dis.both_signal),
        both_idler: mix(ind.both_idler, dis.both_idler),
        split: mix(ind.split, dis.split),
    })
}

pub fn coincidence_probability(cfg: &OracleConfig, pol_b: &Ket, pol_e: &Ket) -> Result<f64> {
    Ok(sector_probabilities(cfg, pol_b, pol_e)?.split)
}

/// Dip visibility 1 − C(p)/C(0) for identically H-polarized inputs.
pub fn oracle_hom_scan(cfg: &OracleConfig) -> Result<f64> {
    let h = Ket::h();
    let at_p = coincidence_probability(cfg, &h, &h)?;
    let flat = coincidence_probability(&OracleConfig { p: 0.0, ..*cfg }, &h, &h)?;
    if flat < 1e-14 {
        return Err(Error::DegenerateCoupling("no coincidences without interference".into()));
    }
    Ok(1.0 - at_p / flat)
}

/// Unnormalized A⊗B'⊗E' polarization state after post-selecting one
/// photon per port, tags traced out.
fn post_selected(cfg: &OracleConfig, distinguishable: bool) -> Result<CMatrix> {
    let layout = ModeLayout { tags: if distinguishable { 2 } else { 1 } };
    let pair = cfg.input.ket();
    let amp = |a: usize, b: usize| pair.amplitudes()[a * 2 + b];
    let mut rho = CMatrix::zeros(8, 8);
    for e in [Ket::h(), Ket::v()] {
        // (τ_B', τ_E') → amplitudes over (a, x, y)
        let mut branches: BTreeMap<(usize, usize), Vec<C64>> = BTreeMap::new();
        for a in 0..2 {
            let pol_b = Ket::new(vec![amp(a, 0), amp(a, 1)])?;
            let out = propagate(cfg, &pol_b, &e, distinguishable)?;
            for (occ, v) in out.iter() {
                if photons_per_port(layout, occ) != (1, 1) {
                    continue;
                }
                let mut sig = None;
                let mut idl = None;
                for (m, &n) in occ.iter().enumerate() {
                    if n == 1 {
                        let (port, pol, tag) = layout.describe(m);
                        match port {
                            Port::Signal => sig = Some((pol, tag)),
                            Port::Idler => idl = Some((pol, tag)),
                        }
                    }
                }
                let ((x, tx), (y, ty)) = (sig.expect("signal photon"), idl.expect("idler photon"));
                let slot = branches.entry((tx, ty)).or_insert_with(|| vec![c(0.0, 0.0); 8]);
                slot[a * 4 + x * 2 + y] += v;
            }
        }
        for v in branches.values() {
            for i in 0..8 {
                for j in 0..8 {
                    rho[(i, j)] += v[i] * v[j].conj() * 0.5;
                }
            }
        }
    }
    Ok(rho)
}

#[derive(Debug, Clone)]
pub struct OracleStates {
    pub rho_i: DensityMatrix,
    pub p_i: f64,
    pub rho_ii_h: DensityMatrix,
    pub p_ii_h: f64,
    pub rho_ii_v: DensityMatrix,
    pub p_ii_v: f64,
}

impl OracleStates {
    pub fn stage_two(&self, outcome: crate::qstate::Outcome) -> (&DensityMatrix, f64) {
        match outcome {
            crate::qstate::Outcome::H => (&self.rho_ii_h, self.p_ii_h),
            crate::qstate::Outcome::V => (&self.rho_ii_v, self.p_ii_v),
        }
    }
}

fn conditional(m: CMatrix) -> Result<(DensityMatrix, f64)> {
    let tr = m.trace().re;
    if tr < 1e-14 {
        return Err(Error::DegenerateCoupling(format!("post-selection probability {tr:e}")));
    }
    DensityMatrix::from_unnormalized(m)
}

/// Stage I (E' ignored) and stage II (E' found H or V) pair states with
/// their absolute post-selection probabilities.
pub fn oracle_stage_states(cfg: &OracleConfig) -> Result<OracleStates> {
    cfg.validate()?;
    let p = cfg.effective_p();
    let mut full = CMatrix::zeros(8, 8);
    if p > 0.0 {
        full += post_selected(cfg, false)? * c(p, 0.0);
    }
    if p < 1.0 {
        full += post_selected(cfg, true)? * c(1.0 - p, 0.0);
    }
    // explicit sums over the E' index, no shared helpers
    let mut one = CMatrix::zeros(4, 4);
    let mut h = CMatrix::zeros(4, 4);
    let mut v = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let hh = full[(i * 2, j * 2)];
            let vv = full[(i * 2 + 1, j * 2 + 1)];
            h[(i, j)] = hh;
            v[(i, j)] = vv;
            one[(i, j)] = hh + vv;
        }
    }
    let (rho_i, p_i) = conditional(one)?;
    let (rho_ii_h, p_ii_h) = conditional(h)?;
    let (rho_ii_v, p_ii_v) = conditional(v)?;
    Ok(OracleStates { rho_i, p_i, rho_ii_h, p_ii_h, rho_ii_v, p_ii_v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        assert_eq!(occupation_basis(4, 2).len(), 10);
        assert_eq!(occupation_basis(8, 2).len(), 36);
        assert!(occupation_basis(4, 2).iter().all(|o| o.iter().sum::<u8>() == 2));
    }

    #[test]
    fn balanced_splitter_bunches_identical_photons() {
        let cfg = OracleConfig::isotropic(0.5, 1.0).unwrap();
        let c = coincidence_probability(&cfg, &Ket::h(), &Ket::h()).unwrap();
        assert!(c.abs() < 1e-15);
        let dis = OracleConfig::isotropic(0.5, 0.0).unwrap();
        assert!((coincidence_probability(&dis, &Ket::h(), &Ket::h()).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn coincidence_amplitude_is_t_minus_r() {
        let t = 0.3;
        let cfg = OracleConfig::isotropic(t, 1.0).unwrap();
        let c = coincidence_probability(&cfg, &Ket::d(), &Ket::d()).unwrap();
        assert!((c - (2.0 * t - 1.0).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn no_coupling_returns_input() {
        let st = oracle_stage_states(&OracleConfig::new(1.0, 1.0, 0.7).unwrap()).unwrap();
        let s = DensityMatrix::from_ket(&Ket::singlet()).unwrap();
        assert!((st.p_i - 1.0).abs() < 1e-15);
        assert!(st.rho_i.max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn hom_examples() {
        let v = |t: f64, p: f64| oracle_hom_scan(&OracleConfig::isotropic(t, p).unwrap()).unwrap();
        assert!((v(0.5, 1.0) - 1.0).abs() < 1e-15);
        assert!((v(0.3, 0.85) - 0.85 * 0.42 / 0.58).abs() < 1e-14);
        assert!((v(0.4, 0.5) - 0.5 * 0.48 / 0.52).abs() < 1e-14);
        let delayed = OracleConfig::isotropic(0.5, 1.0).unwrap().delayed();
        assert!(v(0.5, 0.0).abs() < 1e-15);
        assert!(oracle_hom_scan(&delayed).unwrap().abs() < 1e-15);
    }

    #[test]
    fn mode_layout_round_trip() {
        let l = ModeLayout { tags: 2 };
        for m in 0..l.modes() {
            let (port, pol, tag) = l.describe(m);
            assert_eq!(l.mode(port, pol, tag), m);
        }
    }
}
