//! Planar microcavity: photon and polariton dispersions, Hopfield mixing and
//! the effective branch-dependent polariton-polariton potential.
//!
//! Energies and wave numbers are both expressed in eV (`hbar = c = 1`), with
//! `k0 = E_C(0)`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Material and cavity constants.
///
/// `delta` is the normalized detuning `(E_C(0) - E_X) / (2 Omega_R)`. The
/// saturation ratio `p_s` defaults to `2 Omega_R / E_b` but can be overridden
/// to sweep the strength of the anharmonic exciton-photon term on its own.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    ec0: f64,
    omega_r: f64,
    eb: f64,
    delta: f64,
    saturation_ratio: Option<f64>,
}

impl CavityParams {
    pub fn new(ec0: f64, omega_r: f64, eb: f64, delta: f64) -> Result<Self> {
        for (name, v) in [("ec0", ec0), ("omega_r", omega_r), ("eb", eb)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        if !delta.is_finite() {
            return Err(Error::InvalidParams(format!("delta must be finite, got {delta}")));
        }
        let params = CavityParams { ec0, omega_r, eb, delta, saturation_ratio: None };
        let ex = params.exciton_energy();
        if !(ex > 0.0) {
            return Err(Error::InvalidParams(format!(
                "exciton energy E_X = {ex} eV is not positive (delta = {delta})"
            )));
        }
        Ok(params)
    }

    /// Overrides the saturation ratio `p_s` entering the effective potential.
    pub fn with_saturation_ratio(mut self, p_s: f64) -> Result<Self> {
        if !(p_s.is_finite() && p_s >= 0.0) {
            return Err(Error::InvalidParams(format!("p_s must be non-negative, got {p_s}")));
        }
        self.saturation_ratio = Some(p_s);
        Ok(self)
    }

    /// Same cavity with a different detuning (and the same `p_s` override).
    pub fn with_delta(self, delta: f64) -> Result<Self> {
        let p = CavityParams::new(self.ec0, self.omega_r, self.eb, delta)?;
        Ok(CavityParams { saturation_ratio: self.saturation_ratio, ..p })
    }

    /// Multiplies every energy scale by `s`. The detuning and `p_s` are
    /// dimensionless and unchanged.
    pub fn scaled(self, s: f64) -> Result<Self> {
        let p = CavityParams::new(self.ec0 * s, self.omega_r * s, self.eb * s, self.delta)?;
        Ok(CavityParams { saturation_ratio: self.saturation_ratio, ..p })
    }

    pub fn ec0(&self) -> f64 {
        self.ec0
    }

    pub fn omega_r(&self) -> f64 {
        self.omega_r
    }

    pub fn eb(&self) -> f64 {
        self.eb
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn exciton_energy(&self) -> f64 {
        self.ec0 - 2.0 * self.omega_r * self.delta
    }

    pub fn saturation_ratio(&self) -> f64 {
        self.saturation_ratio.unwrap_or(2.0 * self.omega_r / self.eb)
    }

    pub fn saturation_ratio_override(&self) -> Option<f64> {
        self.saturation_ratio
    }

    pub fn k0(&self) -> f64 {
        self.ec0
    }
}

/// In-plane wave vector, components in eV.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WaveVector {
    pub kx: f64,
    pub ky: f64,
}

impl WaveVector {
    pub const ZERO: WaveVector = WaveVector { kx: 0.0, ky: 0.0 };

    pub fn new(kx: f64, ky: f64) -> Self {
        WaveVector { kx, ky }
    }

    /// Builds a wave vector from components given in units of `k0`.
    pub fn in_k0(params: &CavityParams, x: f64, y: f64) -> Self {
        let k0 = params.k0();
        WaveVector { kx: x * k0, ky: y * k0 }
    }

    pub fn norm(&self) -> f64 {
        self.kx.hypot(self.ky)
    }

    pub fn norm_sq(&self) -> f64 {
        self.kx * self.kx + self.ky * self.ky
    }

    pub fn dot(&self, other: &WaveVector) -> f64 {
        self.kx * other.kx + self.ky * other.ky
    }

    /// `e_z x self`, i.e. the vector rotated by +90 degrees.
    pub fn perp(&self) -> WaveVector {
        WaveVector { kx: -self.ky, ky: self.kx }
    }

    pub fn rotated(&self, angle: f64) -> WaveVector {
        let (s, c) = angle.sin_cos();
        WaveVector { kx: c * self.kx - s * self.ky, ky: s * self.kx + c * self.ky }
    }

    pub fn is_finite(&self) -> bool {
        self.kx.is_finite() && self.ky.is_finite()
    }
}

impl Add for WaveVector {
    type Output = WaveVector;
    fn add(self, rhs: WaveVector) -> WaveVector {
        WaveVector { kx: self.kx + rhs.kx, ky: self.ky + rhs.ky }
    }
}

impl Sub for WaveVector {
    type Output = WaveVector;
    fn sub(self, rhs: WaveVector) -> WaveVector {
        WaveVector { kx: self.kx - rhs.kx, ky: self.ky - rhs.ky }
    }
}

impl Neg for WaveVector {
    type Output = WaveVector;
    fn neg(self) -> WaveVector {
        WaveVector { kx: -self.kx, ky: -self.ky }
    }
}

impl Mul<f64> for WaveVector {
    type Output = WaveVector;
    fn mul(self, s: f64) -> WaveVector {
        WaveVector { kx: self.kx * s, ky: self.ky * s }
    }
}

/// Polariton branch: `Lower` is `j = 1`, `Upper` is `j = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Lower,
    Upper,
}

impl Branch {
    pub fn index(self) -> u8 {
        match self {
            Branch::Lower => 1,
            Branch::Upper => 2,
        }
    }
}

impl TryFrom<u8> for Branch {
    type Error = Error;
    fn try_from(j: u8) -> Result<Self> {
        match j {
            1 => Ok(Branch::Lower),
            2 => Ok(Branch::Upper),
            other => Err(Error::InvalidBranch(other)),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Hopfield matrix at one wave vector. Row 1 is the exciton, row 2 the
/// photon; column `j` is polariton branch `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfieldCoeffs {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl HopfieldCoeffs {
    /// `M_{row, branch}` with `row` in {1, 2}.
    pub fn get(&self, row: u8, branch: Branch) -> f64 {
        match (row, branch) {
            (1, Branch::Lower) => self.m11,
            (1, Branch::Upper) => self.m12,
            (2, Branch::Lower) => self.m21,
            (2, Branch::Upper) => self.m22,
            _ => panic!("Hopfield row must be 1 or 2, got {row}"),
        }
    }

    pub fn exciton(&self, branch: Branch) -> f64 {
        self.get(1, branch)
    }

    pub fn photon(&self, branch: Branch) -> f64 {
        self.get(2, branch)
    }
}

/// Bare cavity photon dispersion `E_C(0) sqrt(1 + (k/k0)^2)`.
pub fn photon_energy(params: &CavityParams, k: WaveVector) -> f64 {
    photon_energy_at(params, k.norm())
}

pub(crate) fn photon_energy_at(params: &CavityParams, k: f64) -> f64 {
    let x = k / params.k0();
    params.ec0 * (1.0 + x * x).sqrt()
}

fn splitting_at(params: &CavityParams, ec: f64) -> f64 {
    let d = ec - params.exciton_energy();
    (d * d + 4.0 * params.omega_r * params.omega_r).sqrt()
}

/// Lower (`j = 1`) or upper (`j = 2`) polariton energy.
pub fn polariton_energy(params: &CavityParams, branch: Branch, k: WaveVector) -> f64 {
    polariton_energy_at(params, branch, k.norm())
}

pub(crate) fn polariton_energy_at(params: &CavityParams, branch: Branch, k: f64) -> f64 {
    let ec = photon_energy_at(params, k);
    let s = splitting_at(params, ec);
    let sum = ec + params.exciton_energy();
    match branch {
        Branch::Lower => 0.5 * (sum - s),
        Branch::Upper => 0.5 * (sum + s),
    }
}

/// Branch-indexed variant of [`polariton_energy`].
pub fn polariton_energy_indexed(params: &CavityParams, branch: u8, k: WaveVector) -> Result<f64> {
    Ok(polariton_energy(params, Branch::try_from(branch)?, k))
}

/// Hopfield coefficients at wave vector `k`.
pub fn hopfield(params: &CavityParams, k: WaveVector) -> HopfieldCoeffs {
    hopfield_at(params, k.norm())
}

pub(crate) fn hopfield_at(params: &CavityParams, k: f64) -> HopfieldCoeffs {
    // rho = (E_2 - E_C) / Omega_R, written without the E_2 - E_C cancellation
    // that appears once the photon runs far above the exciton.
    let ec = photon_energy_at(params, k);
    let d = ec - params.exciton_energy();
    let s = splitting_at(params, ec);
    let om = params.omega_r;
    let rho = if d > 0.0 { 2.0 * om / (s + d) } else { (s - d) / (2.0 * om) };
    let norm = (1.0 + rho * rho).sqrt();
    let m11 = 1.0 / norm;
    let m12 = rho / norm;
    HopfieldCoeffs { m11, m12, m21: -m12, m22: m11 }
}

/// Effective branch-dependent potential `V^{j1 j2 j3 j4}_{k, k', q}` in eV.
pub fn effective_potential(
    params: &CavityParams,
    k: WaveVector,
    kp: WaveVector,
    q: WaveVector,
    branches: [Branch; 4],
) -> f64 {
    potential_with(params.eb, params.saturation_ratio(), |v| hopfield(params, v), k, kp, q, branches)
}

/// Branch-indexed variant of [`effective_potential`].
pub fn effective_potential_indexed(
    params: &CavityParams,
    k: WaveVector,
    kp: WaveVector,
    q: WaveVector,
    branches: [u8; 4],
) -> Result<f64> {
    let mut js = [Branch::Lower; 4];
    for (slot, j) in js.iter_mut().zip(branches) {
        *slot = Branch::try_from(j)?;
    }
    Ok(effective_potential(params, k, kp, q, js))
}

/// The potential with Hopfield coefficients supplied by `coeffs`.
pub(crate) fn potential_with<F>(
    eb: f64,
    p_s: f64,
    coeffs: F,
    k: WaveVector,
    kp: WaveVector,
    q: WaveVector,
    [j1, j2, j3, j4]: [Branch; 4],
) -> f64
where
    F: Fn(WaveVector) -> HopfieldCoeffs,
{
    let h_out1 = coeffs(k + q);
    let h_out2 = coeffs(kp - q);
    let h_in1 = coeffs(k);
    let h_in2 = coeffs(kp);

    let exciton_exciton =
        12.0 * h_out1.exciton(j1) * h_out2.exciton(j2) * h_in1.exciton(j3) * h_in2.exciton(j4);
    let saturation = h_out1.photon(j1) * h_out2.exciton(j2) * h_in1.exciton(j3) * h_in2.exciton(j4)
        + h_in2.photon(j4) * h_in1.exciton(j3) * h_out2.exciton(j2) * h_out1.exciton(j1);
    eb * (exciton_exciton - (8.0 * PI / 7.0) * p_s * saturation)
}

/// Normalized pair amplitudes `(alpha, beta)` for pump `kp` and scattering
/// vector `q`. Signs follow `V^{1222}` and `V^{2122}`.
pub fn pair_amplitudes(params: &CavityParams, kp: WaveVector, q: WaveVector) -> Result<(f64, f64)> {
    use Branch::{Lower, Upper};
    let v_a = effective_potential(params, kp, kp, q, [Lower, Upper, Upper, Upper]);
    let v_b = effective_potential(params, kp, kp, q, [Upper, Lower, Upper, Upper]);
    normalize_amplitudes(v_a, v_b)
}

fn normalize_amplitudes(v_a: f64, v_b: f64) -> Result<(f64, f64)> {
    let norm = v_a.hypot(v_b);
    if !(norm > 0.0) {
        return Err(Error::DegeneratePotentials);
    }
    Ok((v_a / norm, v_b / norm))
}

/// Mean-field energy shift of branch `j` at `q` under a pump at `kp` with
/// intensity `|P|^2`.
pub fn mean_field_shift(
    params: &CavityParams,
    q: WaveVector,
    kp: WaveVector,
    branch: Branch,
    pump_intensity: f64,
) -> Result<f64> {
    if !(pump_intensity.is_finite() && pump_intensity >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "pump intensity must be non-negative, got {pump_intensity}"
        )));
    }
    let lambda =
        mean_field_lambda_with(params.eb, params.saturation_ratio(), |v| hopfield(params, v), q, kp, branch);
    Ok(lambda * pump_intensity)
}

pub(crate) fn mean_field_lambda_with<F>(
    eb: f64,
    p_s: f64,
    coeffs: F,
    q: WaveVector,
    kp: WaveVector,
    j: Branch,
) -> f64
where
    F: Fn(WaveVector) -> HopfieldCoeffs + Copy,
{
    use Branch::Upper as U;
    let v = |k, k2, dq, js| potential_with(eb, p_s, coeffs, k, k2, dq, js);
    0.5 * (v(q, kp, WaveVector::ZERO, [j, U, j, U])
        + v(kp, q, WaveVector::ZERO, [U, j, U, j])
        + v(q, kp, kp - q, [U, j, j, U])
        + v(kp, q, q - kp, [j, U, U, j]))
}
