//! Simulated polarization tomography of a photon pair.
//!
//! Counts are Poissonian around `rate · duration · ⟨ab|ρ|ab⟩` plus a
//! constant accidental background per setting. The accidental model is a
//! stand-in: the same expected background is subtracted from every
//! setting, regardless of projector. Reconstruction is unweighted linear
//! inversion over the 16 Pauli products followed by projection onto the
//! unit-trace positive cone.

use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{self, pauli, MetricReport};
use crate::qstate::{c, hermitize, CMatrix, CVector, DensityMatrix, Ket};

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting {
    pub projector_a: Ket,
    pub projector_b: Ket,
    pub label: String,
}

impl MeasurementSetting {
    pub fn new(projector_a: Ket, projector_b: Ket, label: impl Into<String>) -> Result<Self> {
        for k in [&projector_a, &projector_b] {
            if k.dim() != 2 || !k.is_normalized() {
                return Err(Error::InvalidArgument("projectors must be normalized qubit kets".into()));
            }
        }
        Ok(MeasurementSetting { projector_a, projector_b, label: label.into() })
    }

    pub fn born_probability(&self, rho: &DensityMatrix) -> Result<f64> {
        let k = self.projector_a.tensor(&self.projector_b)?;
        Ok(rho.expectation(&k).max(0.0))
    }
}

/// The 36 settings {H,V,D,A,R,L}², labelled e.g. `"HD"`.
pub fn standard_settings() -> Vec<MeasurementSetting> {
    const LABELS: [char; 6] = ['H', 'V', 'D', 'A', 'R', 'L'];
    let mut out = Vec::with_capacity(36);
    for a in LABELS {
        for b in LABELS {
            let ka = Ket::polarization(a).expect("standard label");
            let kb = Ket::polarization(b).expect("standard label");
            out.push(MeasurementSetting { projector_a: ka, projector_b: kb, label: format!("{a}{b}") });
        }
    }
    out
}

/// Coincidences are stored as reals so that expected (noise-free) counts
/// and accidental-subtracted counts share the type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub setting_label: String,
    pub coincidences: f64,
    pub duration_s: f64,
    pub accidental_estimate: f64,
}

pub fn write_csv<W: Write>(w: W, records: &[CountRecord]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<CountRecord>> {
    let mut rd = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for rec in rd.deserialize() {
        let rec: CountRecord = rec?;
        if !(rec.coincidences >= 0.0 && rec.duration_s > 0.0 && rec.accidental_estimate >= 0.0) {
            return Err(Error::InvalidArgument(format!("bad count record for {}", rec.setting_label)));
        }
        out.push(rec);
    }
    Ok(out)
}

fn check_rates(rate_per_s: f64, duration_s: f64, accidental_rate: f64) -> Result<()> {
    if !(rate_per_s > 0.0 && rate_per_s.is_finite()) {
        return Err(Error::InvalidArgument(format!("rate {rate_per_s} must be positive")));
    }
    if !(duration_s > 0.0 && duration_s.is_finite()) {
        return Err(Error::InvalidArgument(format!("duration {duration_s} must be positive")));
    }
    if !(accidental_rate >= 0.0 && accidental_rate.is_finite()) {
        return Err(Error::InvalidArgument(format!("accidental rate {accidental_rate} must be nonnegative")));
    }
    Ok(())
}

/// Mean counts per setting, without noise.
pub fn expected_counts(
    rho: &DensityMatrix,
    settings: &[MeasurementSetting],
    rate_per_s: f64,
    duration_s: f64,
    accidental_rate: f64,
) -> Result<Vec<CountRecord>> {
    check_rates(rate_per_s, duration_s, accidental_rate)?;
    settings
        .iter()
        .map(|s| {
            let acc = accidental_rate * duration_s;
            Ok(CountRecord {
                setting_label: s.label.clone(),
                coincidences: rate_per_s * duration_s * s.born_probability(rho)? + acc,
                duration_s,
                accidental_estimate: acc,
            })
        })
        .collect()
}

fn poisson(lambda: f64, rng: &mut ChaCha20Rng) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    Poisson::new(lambda).expect("finite positive mean").sample(rng)
}

pub fn simulate_counts(
    rho: &DensityMatrix,
    settings: &[MeasurementSetting],
    rate_per_s: f64,
    duration_s: f64,
    accidental_rate: f64,
    seed: u64,
) -> Result<Vec<CountRecord>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = expected_counts(rho, settings, rate_per_s, duration_s, accidental_rate)?;
    for r in &mut out {
        r.coincidences = poisson(r.coincidences, &mut rng);
    }
    Ok(out)
}

/// Removes the accidental estimate from each record, flooring at zero.
pub fn subtract_accidentals(records: &[CountRecord]) -> Vec<CountRecord> {
    records
        .iter()
        .map(|r| CountRecord {
            coincidences: (r.coincidences - r.accidental_estimate).max(0.0),
            accidental_estimate: 0.0,
            ..r.clone()
        })
        .collect()
}

fn align<'a>(records: &[CountRecord], settings: &'a [MeasurementSetting]) -> Result<Vec<&'a MeasurementSetting>> {
    records
        .iter()
        .map(|r| {
            settings
                .iter()
                .find(|s| s.label == r.setting_label)
                .ok_or_else(|| Error::InvalidArgument(format!("no setting labelled {}", r.setting_label)))
        })
        .collect()
}

fn bloch(k: &Ket, i: usize) -> f64 {
    let v = k.amplitudes();
    (v.adjoint() * pauli(i) * v)[(0, 0)].re
}

/// Linear-inversion estimate, Hermitian and unit-trace but not necessarily
/// positive.
pub fn reconstruct_raw(records: &[CountRecord], settings: &[MeasurementSetting]) -> Result<CMatrix> {
    let matched = align(records, settings)?;
    let n = records.len();
    // rate_s = (1/4) Σ_ij x_ij ⟨a|σ_i|a⟩⟨b|σ_j|b⟩ with x_ij = Tr(X σ_i⊗σ_j)
    let design = DMatrix::from_fn(n, 16, |s, col| {
        let st = matched[s];
        bloch(&st.projector_a, col / 4) * bloch(&st.projector_b, col % 4) / 4.0
    });
    let rates = DVector::from_fn(n, |s, _| records[s].coincidences / records[s].duration_s);
    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if n < 16 || !(smin > 1e-10 * smax) {
        return Err(Error::Unidentifiable(format!("settings span rank below 16 ({n} settings)")));
    }
    let x = svd.solve(&rates, 0.0).map_err(|e| Error::Unidentifiable(e.to_string()))?;
    if !(x[0] > 0.0) {
        return Err(Error::Unidentifiable("reconstructed trace is not positive".into()));
    }
    let mut m = CMatrix::zeros(4, 4);
    for col in 0..16 {
        m += pauli(col / 4).kronecker(&pauli(col % 4)) * c(x[col] / (4.0 * x[0]), 0.0);
    }
    Ok(hermitize(&m))
}

fn eigen_rebuild(m: &CMatrix, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<DensityMatrix> {
    let eig = hermitize(m).symmetric_eigen();
    let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let new = f(&vals);
    let d = CVector::from_iterator(new.len(), new.iter().map(|&x| c(x, 0.0)));
    let out = &eig.eigenvectors * CMatrix::from_diagonal(&d) * eig.eigenvectors.adjoint();
    DensityMatrix::new(hermitize(&out))
}

/// Closest density matrix in Frobenius norm (Smolin, Gambetta, Smith):
/// eigenvalues are projected onto the probability simplex.
pub fn project_psd(m: &CMatrix) -> Result<DensityMatrix> {
    eigen_rebuild(m, |vals| {
        let mut idx: Vec<usize> = (0..vals.len()).collect();
        idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        let tr: f64 = vals.iter().sum();
        let mu: Vec<f64> = idx.iter().map(|&i| vals[i] / tr).collect();
        // drop eigenvalues from the bottom while the removed weight, spread
        // evenly over the rest, cannot keep them nonnegative
        let mut acc = 0.0;
        let mut keep = mu.len();
        while keep > 1 && mu[keep - 1] + acc / (keep as f64) < 0.0 {
            acc += mu[keep - 1];
            keep -= 1;
        }
        let mut lam = vec![0.0; mu.len()];
        for j in 0..keep {
            lam[j] = mu[j] + acc / keep as f64;
        }
        let mut out = vec![0.0; vals.len()];
        for (rank, &i) in idx.iter().enumerate() {
            out[i] = lam[rank];
        }
        out
    })
}

/// Negative eigenvalues set to zero, then trace renormalized.
pub fn clip_psd(m: &CMatrix) -> Result<DensityMatrix> {
    eigen_rebuild(m, |vals| {
        let pos: Vec<f64> = vals.iter().map(|&x| x.max(0.0)).collect();
        let s: f64 = pos.iter().sum();
        pos.iter().map(|x| x / s).collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Uncertainties {
    pub concurrence: f64,
    pub fidelity: f64,
    pub linear_entropy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionResult {
    pub rho_hat: DensityMatrix,
    pub metrics: MetricReport,
    pub uncertainties: Option<Uncertainties>,
}

pub fn reconstruct(records: &[CountRecord], settings: &[MeasurementSetting]) -> Result<ReconstructionResult> {
    let rho_hat = project_psd(&reconstruct_raw(records, settings)?)?;
    let metrics = MetricReport::of(&rho_hat)?;
    Ok(ReconstructionResult { rho_hat, metrics, uncertainties: None })
}

fn sample_std(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Resamples every count as Poisson around its observed value, subtracts
/// the recorded accidental estimate, and reconstructs. Fidelity spread is
/// taken against the reconstruction of the observed counts. Trial `k`
/// draws from stream `k` of a ChaCha20 generator seeded with `seed`.
pub fn monte_carlo_uncertainty(
    records: &[CountRecord],
    settings: &[MeasurementSetting],
    trials: usize,
    seed: u64,
) -> Result<Uncertainties> {
    if trials < 100 {
        return Err(Error::InvalidArgument(format!("{trials} trials, need at least 100")));
    }
    let central = reconstruct(&subtract_accidentals(records), settings)?.rho_hat;
    let samples: Vec<[f64; 3]> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let drawn: Vec<CountRecord> = records
                .iter()
                .map(|r| CountRecord { coincidences: poisson(r.coincidences, &mut rng), ..r.clone() })
                .collect();
            let rho = reconstruct(&subtract_accidentals(&drawn), settings)?.rho_hat;
            Ok([
                metrics::concurrence(&rho)?,
                metrics::fidelity(&rho, &central)?,
                metrics::linear_entropy(&rho)?,
            ])
        })
        .collect::<Result<_>>()?;
    let col = |i: usize| samples.iter().map(|s| s[i]).collect::<Vec<_>>();
    Ok(Uncertainties {
        concurrence: sample_std(&col(0)),
        fidelity: sample_std(&col(1)),
        linear_entropy: sample_std(&col(2)),
    })
}

/// Reconstruction of accidental-subtracted counts with Monte-Carlo errors.
pub fn analyze(
    records: &[CountRecord],
    settings: &[MeasurementSetting],
    trials: usize,
    seed: u64,
) -> Result<ReconstructionResult> {
    let mut res = reconstruct(&subtract_accidentals(records), settings)?;
    res.uncertainties = Some(monte_carlo_uncertainty(records, settings, trials, seed)?);
    Ok(res)
}
