//! Interbranch phase matching for a train of collinear pumps.

use serde::{Deserialize, Serialize};

use crate::cavity::{self, Branch, CavityParams, WaveVector};
use crate::error::{Error, Result};

/// Collinear pumps: a common in-plane direction and distinct magnitudes in
/// units of `k0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpSpec {
    direction: [f64; 2],
    magnitudes: Vec<f64>,
}

impl PumpSpec {
    /// `direction` need not be normalized but must be nonzero.
    pub fn new(direction: [f64; 2], magnitudes: Vec<f64>) -> Result<Self> {
        let norm = direction[0].hypot(direction[1]);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidPumps(format!("pump direction {direction:?} is not a nonzero vector")));
        }
        if magnitudes.is_empty() {
            return Err(Error::InvalidPumps("at least one pump is required".into()));
        }
        for (i, &m) in magnitudes.iter().enumerate() {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::InvalidPumps(format!("pump {} has non-positive magnitude {m}", i + 1)));
            }
            if magnitudes[..i].contains(&m) {
                return Err(Error::InvalidPumps(format!("duplicate pump magnitude {m}")));
            }
        }
        Ok(PumpSpec { direction: [direction[0] / norm, direction[1] / norm], magnitudes })
    }

    /// Pumps `k_pn = step * n * k0 e_p` for `n = 1..=count`.
    pub fn evenly_spaced(direction: [f64; 2], step: f64, count: usize) -> Result<Self> {
        PumpSpec::new(direction, (1..=count).map(|n| step * n as f64).collect())
    }

    pub fn direction(&self) -> [f64; 2] {
        self.direction
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn wave_vectors(&self, params: &CavityParams) -> Vec<WaveVector> {
        let [dx, dy] = self.direction;
        self.magnitudes.iter().map(|&m| WaveVector::in_k0(params, m * dx, m * dy)).collect()
    }
}

/// One phase-matched pump and the branch-entangled pair it emits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairAmplitude {
    pub kp: WaveVector,
    pub q: WaveVector,
    pub alpha: f64,
    pub beta: f64,
    /// Lower-branch energy at `kp + q` (equal to the one at `kp - q`).
    pub e1: f64,
    /// Upper-branch energy at `kp + q`.
    pub e2: f64,
}

/// Phase-matched scattering vector for the pump `kp`: perpendicular to `kp`,
/// pointing along `e_z x e_p`, with modulus from the closed-form solution.
pub fn solve_scattering_vector(params: &CavityParams, kp: WaveVector) -> Result<WaveVector> {
    let k0 = params.k0();
    let kp_rel = kp.norm() / k0;
    let e2 = cavity::polariton_energy(params, Branch::Upper, kp);
    let ratio = (2.0 * e2 - params.exciton_energy()) / params.ec0();
    let q_sq = (ratio * ratio - 1.0) - kp_rel * kp_rel;
    if !(q_sq >= 0.0) {
        return Err(Error::NoPhaseMatching { q_sq });
    }
    let axis = if kp.norm() > 0.0 { (kp * (1.0 / kp.norm())).perp() } else { WaveVector::new(0.0, 1.0) };
    Ok(axis * (q_sq.sqrt() * k0))
}

/// `E_2(kp + q) + E_1(kp - q) - 2 E_2(kp)`.
pub fn phase_mismatch(params: &CavityParams, kp: WaveVector, q: WaveVector) -> f64 {
    cavity::polariton_energy(params, Branch::Upper, kp + q) + cavity::polariton_energy(params, Branch::Lower, kp - q)
        - 2.0 * cavity::polariton_energy(params, Branch::Upper, kp)
}

pub fn pair_for_pump(params: &CavityParams, kp: WaveVector) -> Result<PairAmplitude> {
    let q = solve_scattering_vector(params, kp)?;
    let (alpha, beta) = cavity::pair_amplitudes(params, kp, q)?;
    let out = kp + q;
    Ok(PairAmplitude {
        kp,
        q,
        alpha,
        beta,
        e1: cavity::polariton_energy(params, Branch::Lower, out),
        e2: cavity::polariton_energy(params, Branch::Upper, out),
    })
}

/// One pair per pump, in the order the pumps were given.
pub fn build_pairs(params: &CavityParams, pumps: &PumpSpec) -> Result<Vec<PairAmplitude>> {
    if pumps.is_empty() {
        return Err(Error::InvalidPumps("at least one pump is required".into()));
    }
    pumps.wave_vectors(params).into_iter().map(|kp| pair_for_pump(params, kp)).collect()
}
