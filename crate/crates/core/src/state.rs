//! Bipartite Schmidt representation of the emitted photon pairs and the
//! arrival-time averaged state after propagation through two linear media.
//!
//! Basis convention: index `m` in `0..2^N` encodes the branch labels
//! `(i_1, ..., i_N)` with `i_1` as the most significant bit, so pair `n`
//! (1-based) sits at bit `N - n`. The partner index is the bitwise
//! complement `m_bar = 2^N - 1 - m`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::phase_matching::PairAmplitude;

pub const DEFAULT_MAX_PAIRS: usize = 12;

const NORM_TOL: f64 = 1e-10;

/// Branch label `i_n` of pair `n` (0-based) inside index `m`.
pub fn branch_bit(m: usize, n: usize, n_pairs: usize) -> usize {
    (m >> (n_pairs - 1 - n)) & 1
}

/// Schmidt coefficients `gamma_m = prod_n [(1 - i_n) alpha_n + i_n beta_n]`.
pub fn gamma_vector(pairs: &[PairAmplitude], max_pairs: usize) -> Result<Vec<f64>> {
    let n_pairs = pairs.len();
    if n_pairs == 0 {
        return Err(Error::InvalidState("at least one pair is required".into()));
    }
    if n_pairs > max_pairs {
        return Err(Error::CapacityExceeded { n_pairs, max_pairs });
    }
    for (n, p) in pairs.iter().enumerate() {
        let norm = p.alpha * p.alpha + p.beta * p.beta;
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("pair {} has alpha^2 + beta^2 = {norm}", n + 1)));
        }
    }
    let dim = 1usize << n_pairs;
    Ok((0..dim)
        .map(|m| {
            pairs
                .iter()
                .enumerate()
                .map(|(n, p)| if branch_bit(m, n, n_pairs) == 0 { p.alpha } else { p.beta })
                .product()
        })
        .collect())
}

/// `N` photon pairs flattened to `2^N` Schmidt coefficients, with the branch
/// energies needed to propagate them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartiteState {
    gamma: Vec<f64>,
    e1: Vec<f64>,
    e2: Vec<f64>,
}

impl BipartiteState {
    pub fn from_pairs(pairs: &[PairAmplitude]) -> Result<Self> {
        Self::from_pairs_with_capacity(pairs, DEFAULT_MAX_PAIRS)
    }

    pub fn from_pairs_with_capacity(pairs: &[PairAmplitude], max_pairs: usize) -> Result<Self> {
        let gamma = gamma_vector(pairs, max_pairs)?;
        for (n, p) in pairs.iter().enumerate() {
            if !(p.e1 < p.e2) {
                return Err(Error::InvalidState(format!(
                    "pair {} has E_1 = {} not below E_2 = {}",
                    n + 1,
                    p.e1,
                    p.e2
                )));
            }
        }
        Ok(BipartiteState {
            gamma,
            e1: pairs.iter().map(|p| p.e1).collect(),
            e2: pairs.iter().map(|p| p.e2).collect(),
        })
    }

    pub fn n_pairs(&self) -> usize {
        self.e1.len()
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn e1(&self) -> &[f64] {
        &self.e1
    }

    pub fn e2(&self) -> &[f64] {
        &self.e2
    }

    pub fn complement(&self, m: usize) -> usize {
        self.dim() - 1 - m
    }

    fn check_index(&self, m: usize) -> Result<()> {
        if m >= self.dim() {
            return Err(Error::IndexOutOfRange { index: m, dim: self.dim() });
        }
        Ok(())
    }
}

/// Linear dispersion `omega(k) = slope * k`; vacuum has slope 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumDispersion {
    slope: f64,
}

impl MediumDispersion {
    pub const VACUUM: MediumDispersion = MediumDispersion { slope: 1.0 };

    pub fn new(slope: f64) -> Result<Self> {
        if !(slope.is_finite() && slope > 0.0) {
            return Err(Error::InvalidParams(format!("medium slope must be positive, got {slope}")));
        }
        Ok(MediumDispersion { slope })
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn frequency(&self, energy: f64) -> f64 {
        self.slope * energy
    }
}

/// The two propagation channels: `minus` carries the `k_p - q` photons,
/// `plus` the `k_p + q` ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Media {
    pub minus: MediumDispersion,
    pub plus: MediumDispersion,
}

impl Media {
    pub fn new(minus: MediumDispersion, plus: MediumDispersion) -> Self {
        Media { minus, plus }
    }
}

/// `E_m = sum_n [(1 - i_n) omega(E_1n) + i_n omega(E_2n)]` in one medium.
pub fn channel_energy(state: &BipartiteState, m: usize, medium: MediumDispersion) -> Result<f64> {
    state.check_index(m)?;
    let n_pairs = state.n_pairs();
    Ok((0..n_pairs)
        .map(|n| {
            let e = if branch_bit(m, n, n_pairs) == 0 { state.e1[n] } else { state.e2[n] };
            medium.frequency(e)
        })
        .sum())
}

/// Total propagation energy `E_{m,-} + E_{m_bar,+}` of component `m`.
pub fn propagation_energy(state: &BipartiteState, m: usize, media: Media) -> Result<f64> {
    Ok(channel_energy(state, m, media.minus)? + channel_energy(state, state.complement(m), media.plus)?)
}

/// `exp(-i (E_{m,-} + E_{m_bar,+}) t)`.
pub fn evolution_phase(state: &BipartiteState, m: usize, media: Media, t: f64) -> Result<Complex64> {
    let e = propagation_energy(state, m, media)?;
    Ok(Complex64::from_polar(1.0, -e * t))
}

/// Propagation energies relative to component 0, `eps_m = E_m - E_0`.
///
/// Accumulated per pair as `i_n s_n`, which keeps `eps` exactly zero when both
/// media coincide and avoids differencing two large totals.
pub fn relative_energies(state: &BipartiteState, media: Media) -> Vec<f64> {
    let n_pairs = state.n_pairs();
    let shifts: Vec<f64> = (0..n_pairs)
        .map(|n| {
            let (lo, hi) = (state.e1[n], state.e2[n]);
            (media.minus.frequency(hi) - media.minus.frequency(lo))
                + (media.plus.frequency(lo) - media.plus.frequency(hi))
        })
        .collect();
    (0..state.dim())
        .map(|m| (0..n_pairs).filter(|&n| branch_bit(m, n, n_pairs) == 1).map(|n| shifts[n]).sum())
        .collect()
}

/// `sin(y) / y` with the removable singularity filled in.
pub fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        let y2 = y * y;
        1.0 - y2 / 6.0 + y2 * y2 / 120.0
    } else {
        y.sin() / y
    }
}

/// Schmidt-correlated density matrix `rho = D K D^dagger`.
///
/// `D = diag(phases)` is a diagonal unitary and `K` a Hermitian kernel. For
/// the arrival-time averaged state the kernel is real and depends on the
/// window length only, while the window midpoint enters through `D` alone.
#[derive(Debug, Clone)]
pub struct DephasedState {
    phases: DVector<Complex64>,
    kernel: DMatrix<Complex64>,
    t1: f64,
    t2: f64,
}

impl DephasedState {
    /// Pure state `sum_m gamma_m |m, m_bar>`.
    pub fn pure(gamma: &[f64]) -> Result<Self> {
        let norm: f64 = gamma.iter().map(|g| g * g).sum();
        if gamma.is_empty() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("Schmidt vector has norm^2 {norm}")));
        }
        let n = gamma.len();
        let kernel = DMatrix::from_fn(n, n, |m, l| Complex64::new(gamma[m] * gamma[l], 0.0));
        Ok(DephasedState { phases: unit_phases(n), kernel, t1: 0.0, t2: 0.0 })
    }

    /// Wraps an arbitrary coefficient matrix, checking it is a density
    /// matrix (Hermitian, unit trace, positive semi-definite).
    pub fn from_density(rho: DMatrix<Complex64>) -> Result<Self> {
        let n = rho.nrows();
        let state = DephasedState { phases: unit_phases(n), kernel: rho, t1: 0.0, t2: 0.0 };
        state.validate(NORM_TOL)?;
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.kernel.nrows()
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn window(&self) -> f64 {
        self.t2 - self.t1
    }

    pub fn phases(&self) -> &DVector<Complex64> {
        &self.phases
    }

    pub fn kernel(&self) -> &DMatrix<Complex64> {
        &self.kernel
    }

    pub fn entry(&self, m: usize, l: usize) -> Complex64 {
        self.phases[m] * self.kernel[(m, l)] * self.phases[l].conj()
    }

    /// The coefficient matrix `rho_ml`.
    pub fn rho(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |m, l| self.entry(m, l))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|m| self.kernel[(m, m)].re).sum()
    }

    /// Conjugates the state by `diag(phases)`, a local unitary on one party.
    pub fn with_local_phases(&self, phases: &[Complex64]) -> Result<Self> {
        if phases.len() != self.dim() {
            return Err(Error::InvalidState(format!(
                "expected {} phases, got {}",
                self.dim(),
                phases.len()
            )));
        }
        if phases.iter().any(|z| (z.norm() - 1.0).abs() > NORM_TOL) {
            return Err(Error::InvalidState("local phases must have unit modulus".into()));
        }
        let mut out = self.clone();
        for (p, &z) in out.phases.iter_mut().zip(phases) {
            *p *= z;
        }
        Ok(out)
    }

    /// Checks Hermiticity, unit trace and positivity, all to within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let defect = linalg::hermiticity_defect(&self.kernel);
        if defect > tol {
            return Err(Error::NotHermitian(defect));
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let min = linalg::hermitian_eigenvalues(&self.kernel)?.first().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(Error::InvalidState(format!("minimum eigenvalue {min:e} is negative")));
        }
        Ok(())
    }
}

fn unit_phases(n: usize) -> DVector<Complex64> {
    DVector::from_element(n, Complex64::new(1.0, 0.0))
}

/// Arrival-time averaged state over the window `[t1, t2]`.
pub fn dephased_density(state: &BipartiteState, media: Media, t1: f64, t2: f64) -> Result<DephasedState> {
    if !(t1.is_finite() && t2.is_finite() && t2 > t1) {
        return Err(Error::InvalidWindow { t1, t2 });
    }
    let mut out = dephased_density_window(state, media, 0.5 * (t1 + t2), t2 - t1)?;
    out.t1 = t1;
    out.t2 = t2;
    Ok(out)
}

/// Same state parametrized by the window midpoint and length. `dt = 0` gives
/// the undephased pure state.
pub fn dephased_density_window(
    state: &BipartiteState,
    media: Media,
    t_mid: f64,
    dt: f64,
) -> Result<DephasedState> {
    if !(t_mid.is_finite() && dt.is_finite() && dt >= 0.0) {
        return Err(Error::InvalidWindow { t1: t_mid - 0.5 * dt, t2: t_mid + 0.5 * dt });
    }
    let eps = relative_energies(state, media);
    let gamma = state.gamma();
    let n = state.dim();
    let half = 0.5 * dt;
    let build_row = |m: usize| -> Vec<f64> {
        (0..n).map(|l| gamma[m] * gamma[l] * sinc((eps[m] - eps[l]) * half)).collect()
    };
    let rows: Vec<Vec<f64>> = if n >= 64 { (0..n).into_par_iter().map(build_row).collect() } else { (0..n).map(build_row).collect() };
    let kernel = DMatrix::from_fn(n, n, |m, l| Complex64::new(rows[m][l], 0.0));
    let phases = DVector::from_iterator(n, eps.iter().map(|&e| Complex64::from_polar(1.0, -e * t_mid)));
    Ok(DephasedState { phases, kernel, t1: t_mid - half, t2: t_mid + half })
}

/// Completely dephased state `sum_m gamma_m^2 |m, m_bar><m, m_bar|`.
pub fn full_dephasing_limit(state: &BipartiteState) -> DephasedState {
    let n = state.dim();
    let diag = DVector::from_iterator(n, state.gamma().iter().map(|g| Complex64::new(g * g, 0.0)));
    DephasedState {
        phases: unit_phases(n),
        kernel: DMatrix::from_diagonal(&diag),
        t1: 0.0,
        t2: f64::INFINITY,
    }
}
