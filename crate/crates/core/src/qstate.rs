//! Dense state algebra on small polarization Hilbert spaces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Smallest probability for which a conditional state is renormalized.
pub const PROB_FLOOR: f64 = 1e-14;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in `[-PSD_TOL, 0)` are clipped; anything lower is rejected.
pub const PSD_TOL: f64 = 1e-10;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check_dim(dim: usize) -> Result<()> {
    if matches!(dim, 2 | 4 | 8) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "dimension {dim} not supported (expected 2, 4 or 8)"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

/// Label of the polarization found on the environmental photon.
pub type Outcome = Polarization;

impl Polarization {
    pub fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }

    pub fn orthogonal(self) -> Self {
        match self {
            Polarization::H => Polarization::V,
            Polarization::V => Polarization::H,
        }
    }

    pub fn ket(self) -> Ket {
        match self {
            Polarization::H => Ket::h(),
            Polarization::V => Ket::v(),
        }
    }
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Polarization::H => "H",
            Polarization::V => "V",
        })
    }
}

impl std::str::FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" | "h" => Ok(Polarization::H),
            "V" | "v" => Ok(Polarization::V),
            _ => Err(Error::InvalidArgument(format!("unknown polarization {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amps: CVector,
}

impl Ket {
    /// Wraps raw amplitudes; call [`Ket::normalized`] to fix the norm.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        check_dim(amps.len())?;
        Ok(Ket { amps: CVector::from_vec(amps) })
    }

    fn unit(amps: [C64; 2]) -> Self {
        Ket { amps: CVector::from_vec(amps.to_vec()) }
    }

    pub fn h() -> Self {
        Self::unit([c(1.0, 0.0), c(0.0, 0.0)])
    }

    pub fn v() -> Self {
        Self::unit([c(0.0, 0.0), c(1.0, 0.0)])
    }

    pub fn d() -> Self {
        Self::unit([c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)])
    }

    pub fn a() -> Self {
        Self::unit([c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)])
    }

    pub fn r() -> Self {
        Self::unit([c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)])
    }

    pub fn l() -> Self {
        Self::unit([c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2)])
    }

    /// Single-qubit polarization state by its usual letter (H, V, D, A, R, L).
    pub fn polarization(label: char) -> Option<Self> {
        match label {
            'H' => Some(Self::h()),
            'V' => Some(Self::v()),
            'D' => Some(Self::d()),
            'A' => Some(Self::a()),
            'R' => Some(Self::r()),
            'L' => Some(Self::l()),
            _ => None,
        }
    }

    /// (|HV⟩ − |VH⟩)/√2
    pub fn singlet() -> Self {
        let s = FRAC_1_SQRT_2;
        Ket {
            amps: CVector::from_vec(vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]),
        }
    }

    /// (|HV⟩ + i|VH⟩)/√2, the pair actually produced by the source.
    pub fn psi_in() -> Self {
        let s = FRAC_1_SQRT_2;
        Ket {
            amps: CVector::from_vec(vec![c(0.0, 0.0), c(s, 0.0), c(0.0, s), c(0.0, 0.0)]),
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= TRACE_TOL
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n < PROB_FLOOR {
            return Err(Error::InvalidArgument("cannot normalize a zero ket".into()));
        }
        Ok(Ket { amps: self.amps.map(|a| a / n) })
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Ket) -> C64 {
        self.amps.dotc(&other.amps)
    }

    pub fn tensor(&self, other: &Ket) -> Result<Ket> {
        check_dim(self.dim() * other.dim())?;
        Ok(Ket { amps: self.amps.kronecker(&other.amps) })
    }

    pub fn projector(&self) -> CMatrix {
        &self.amps * self.amps.adjoint()
    }
}

/// Which two-photon state enters the coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputState {
    #[default]
    Singlet,
    /// (|HV⟩ + i|VH⟩)/√2
    Experimental,
}

impl InputState {
    pub fn ket(self) -> Ket {
        match self {
            InputState::Singlet => Ket::singlet(),
            InputState::Experimental => Ket::psi_in(),
        }
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates `m`. Eigenvalues slightly below zero (down to `-PSD_TOL`)
    /// are clipped and the result renormalized.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotDensityMatrix(format!(
                "matrix is {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        check_dim(m.nrows())?;
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotDensityMatrix("non-finite entry".into()));
        }
        let asym = hermitian_defect(&m);
        if asym > HERMITIAN_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "hermiticity defect {asym:e}"
            )));
        }
        let m = hermitize(&m);
        let tr = m.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!("trace {tr}")));
        }
        let eig = m.clone().symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::NotDensityMatrix(format!("eigenvalue {min:e}")));
        }
        if min < 0.0 {
            let vals: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
            let total: f64 = vals.iter().sum();
            let mut out = CMatrix::zeros(m.nrows(), m.ncols());
            for (k, &l) in vals.iter().enumerate() {
                let v = eig.eigenvectors.column(k);
                out += (v * v.adjoint()) * c(l / total, 0.0);
            }
            return Ok(DensityMatrix { m: hermitize(&out) });
        }
        Ok(DensityMatrix { m })
    }

    /// Normalizes a positive operator, returning the state and its trace.
    pub fn from_unnormalized(m: CMatrix) -> Result<(Self, f64)> {
        if !m.is_square() {
            return Err(Error::NotDensityMatrix("matrix is not square".into()));
        }
        let tr = m.trace().re;
        if !(tr >= PROB_FLOOR) {
            return Err(Error::DegenerateOutcome(tr.max(0.0)));
        }
        let scaled = hermitize(&m) / c(tr, 0.0);
        Ok((DensityMatrix::new(scaled)?, tr))
    }

    pub fn from_ket(k: &Ket) -> Result<Self> {
        let k = k.normalized()?;
        Ok(DensityMatrix { m: hermitize(&k.projector()) })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(DensityMatrix { m: CMatrix::identity(dim, dim) / c(dim as f64, 0.0) })
    }

    /// F|Ψ−⟩⟨Ψ−| + (1−F)/3 (𝟙 − |Ψ−⟩⟨Ψ−|), the singlet-fidelity-F Werner state.
    pub fn werner(fidelity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fidelity) {
            return Err(Error::InvalidArgument(format!("Werner fidelity {fidelity}")));
        }
        let p = Ket::singlet().projector();
        let id = CMatrix::identity(4, 4);
        let w = (4.0 * fidelity - 1.0) / 3.0;
        let m = p * c(w, 0.0) + id * c((1.0 - fidelity) / 3.0, 0.0);
        DensityMatrix::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.m.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.m.clone().symmetric_eigen().eigenvalues.iter().cloned().collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs_diff(&self.m, &other.m)
    }

    /// ⟨ψ|ρ|ψ⟩
    pub fn expectation(&self, k: &Ket) -> f64 {
        k.amplitudes().dotc(&(&self.m * k.amplitudes())).re
    }
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl From<DensityMatrix> for MatrixJson {
    fn from(d: DensityMatrix) -> Self {
        let n = d.dim();
        let row = |f: fn(&C64) -> f64, i: usize| (0..n).map(|j| f(&d.m[(i, j)])).collect();
        MatrixJson {
            dim: n,
            re: (0..n).map(|i| row(|z| z.re, i)).collect(),
            im: (0..n).map(|i| row(|z| z.im, i)).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let n = j.dim;
        let shape_ok = j.re.len() == n
            && j.im.len() == n
            && j.re.iter().chain(j.im.iter()).all(|r| r.len() == n);
        if !shape_ok {
            return Err(Error::InvalidArgument("matrix rows do not match dim".into()));
        }
        DensityMatrix::new(CMatrix::from_fn(n, n, |i, k| c(j.re[i][k], j.im[i][k])))
    }
}

/// Kronecker product a ⊗ b.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    check_dim(a.dim() * b.dim())?;
    Ok(DensityMatrix { m: a.m.kronecker(&b.m) })
}

fn check_layout(total: usize, dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidArgument(format!("bad subsystem dims {dims:?}")));
    }
    let prod: usize = dims.iter().product();
    if prod != total {
        return Err(Error::InvalidArgument(format!(
            "dims {dims:?} multiply to {prod}, operator has dimension {total}"
        )));
    }
    Ok(())
}

/// Splits a flat index into per-subsystem digits (first subsystem most significant).
fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

fn flatten(d: impl Iterator<Item = (usize, usize)>) -> usize {
    d.fold(0, |acc, (digit, dim)| acc * dim + digit)
}

/// Partial trace of an arbitrary square operator; keeps the listed subsystems.
pub fn partial_trace_matrix(m: &CMatrix, keep: &[usize], dims: &[usize]) -> Result<CMatrix> {
    check_layout(m.nrows(), dims)?;
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidArgument(format!(
            "keep {keep:?} must be strictly increasing subsystem indices below {}",
            dims.len()
        )));
    }
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let dk: usize = kept_dims.iter().product();
    let n = m.nrows();
    let all: Vec<Vec<usize>> = (0..n).map(|i| digits(i, dims)).collect();
    let mut out = CMatrix::zeros(dk, dk);
    for i in 0..n {
        for j in 0..n {
            if traced.iter().any(|&t| all[i][t] != all[j][t]) {
                continue;
            }
            let ri = flatten(keep.iter().map(|&k| (all[i][k], dims[k])));
            let rj = flatten(keep.iter().map(|&k| (all[j][k], dims[k])));
            out[(ri, rj)] += m[(i, j)];
        }
    }
    Ok(out)
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize], dims: &[usize]) -> Result<DensityMatrix> {
    let out = partial_trace_matrix(&rho.m, keep, dims)?;
    DensityMatrix::new(hermitize(&out))
}

/// The map ρ ↦ ⟨k|_s ρ |k⟩_s onto the remaining subsystems, unnormalized.
pub fn project_matrix(m: &CMatrix, subsystem: usize, k: &Ket, dims: &[usize]) -> Result<CMatrix> {
    check_layout(m.nrows(), dims)?;
    if subsystem >= dims.len() {
        return Err(Error::InvalidArgument(format!("no subsystem {subsystem}")));
    }
    if k.dim() != dims[subsystem] {
        return Err(Error::InvalidArgument(format!(
            "ket of dimension {} cannot project a subsystem of dimension {}",
            k.dim(),
            dims[subsystem]
        )));
    }
    let bra = k.amplitudes().adjoint();
    let mut op = CMatrix::from_element(1, 1, c(1.0, 0.0));
    for (i, &d) in dims.iter().enumerate() {
        op = if i == subsystem {
            op.kronecker(&bra)
        } else {
            op.kronecker(&CMatrix::identity(d, d))
        };
    }
    Ok(&op * m * op.adjoint())
}

/// Projects one subsystem onto `k`; returns the renormalized state of the
/// remaining subsystems and the outcome probability.
pub fn project(
    rho: &DensityMatrix,
    subsystem: usize,
    k: &Ket,
    dims: &[usize],
) -> Result<(DensityMatrix, f64)> {
    if !k.is_normalized() {
        return Err(Error::InvalidArgument("projection ket is not normalized".into()));
    }
    let out = project_matrix(&rho.m, subsystem, k, dims)?;
    let p = out.trace().re;
    if p < PROB_FLOOR {
        return Err(Error::DegenerateOutcome(p.max(0.0)));
    }
    let (state, _) = DensityMatrix::from_unnormalized(out)?;
    Ok((state, p.min(1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// Diagonal polarization attenuator on one photon of a pair. Gains are
/// amplitude transmissions and the larger one is always 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalFilter {
    pub side: Side,
    pub gain_h: f64,
    pub gain_v: f64,
}

impl LocalFilter {
    pub fn new(side: Side, gain_h: f64, gain_v: f64) -> Result<Self> {
        for g in [gain_h, gain_v] {
            if !(0.0..=1.0).contains(&g) {
                return Err(Error::InvalidArgument(format!("filter gain {g} outside [0,1]")));
            }
        }
        if (gain_h.max(gain_v) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "filter ({gain_h}, {gain_v}) must pass one polarization unattenuated"
            )));
        }
        Ok(LocalFilter { side, gain_h, gain_v })
    }

    pub fn identity(side: Side) -> Self {
        LocalFilter { side, gain_h: 1.0, gain_v: 1.0 }
    }

    /// Attenuates `pol` by amplitude `gain`, leaving the other polarization intact.
    pub fn attenuate(side: Side, pol: Polarization, gain: f64) -> Result<Self> {
        match pol {
            Polarization::H => LocalFilter::new(side, gain, 1.0),
            Polarization::V => LocalFilter::new(side, 1.0, gain),
        }
    }

    pub fn gain(&self, pol: Polarization) -> f64 {
        match pol {
            Polarization::H => self.gain_h,
            Polarization::V => self.gain_v,
        }
    }

    /// Kraus operator on the two-photon space.
    pub fn kraus(&self) -> CMatrix {
        let g = CMatrix::from_diagonal(&CVector::from_vec(vec![c(self.gain_h, 0.0), c(self.gain_v, 0.0)]));
        let id = CMatrix::identity(2, 2);
        match self.side {
            Side::A => g.kronecker(&id),
            Side::B => id.kronecker(&g),
        }
    }
}

pub fn apply_kraus(m: &CMatrix, k: &CMatrix) -> CMatrix {
    k * m * k.adjoint()
}

pub fn apply_filter(rho: &DensityMatrix, filter: &LocalFilter) -> Result<(DensityMatrix, f64)> {
    if rho.dim() != 4 {
        return Err(Error::InvalidArgument("filters act on two-photon states".into()));
    }
    let out = apply_kraus(&rho.m, &filter.kraus());
    let p = out.trace().re;
    if p < PROB_FLOOR {
        return Err(Error::DegenerateOutcome(p.max(0.0)));
    }
    let (state, _) = DensityMatrix::from_unnormalized(out)?;
    Ok((state, p.min(1.0)))
}
