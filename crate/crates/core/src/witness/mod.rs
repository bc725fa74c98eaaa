//! Schmidt-number certification with projector witnesses.
//!
//! For a Schmidt-correlated test operator `L = sum Gamma_ml |m, m_bar><l, l_bar|`
//! with positive semi-definite `Gamma`, the largest expectation value over
//! states of Schmidt number `r` is the largest eigenvalue among all `r x r`
//! principal submatrices of `Gamma`. A state with `Tr(rho L) > f_r(L)` has
//! Schmidt number above `r`.
//!
//! The witness is the projector onto the support of the state itself, so
//! `<L> = 1` up to the discarded weight, and the certified Schmidt number is
//! `1 + max { r : f_r < <L> - tolerance }`.

mod search;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::state::DephasedState;

/// Support threshold, relative to the largest eigenvalue of the state.
pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-10;
/// Margin in the strict inequality `f_r < <L>`.
pub const DEFAULT_CERTIFICATION_TOLERANCE: f64 = 1e-7;

const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    #[default]
    Pruned,
}

/// Coefficient matrix `Gamma` of a Schmidt-correlated witness, held as
/// `diag(phases) * coeffs * diag(phases)^dagger`.
#[derive(Debug, Clone)]
pub struct WitnessOperator {
    phases: DVector<Complex64>,
    coeffs: DMatrix<Complex64>,
    rank: Option<usize>,
    max_eigenvalue: f64,
    min_eigenvalue: f64,
}

impl WitnessOperator {
    /// Witness from an explicit Hermitian positive semi-definite `Gamma`.
    pub fn new(gamma: DMatrix<Complex64>) -> Result<Self> {
        let n = gamma.nrows();
        Self::from_parts(DVector::from_element(n, Complex64::new(1.0, 0.0)), gamma, None)
    }

    fn from_parts(phases: DVector<Complex64>, coeffs: DMatrix<Complex64>, rank: Option<usize>) -> Result<Self> {
        if coeffs.nrows() == 0 {
            return Err(Error::InvalidState("empty witness".into()));
        }
        let values = linalg::hermitian_eigenvalues(&coeffs)?;
        let min_eigenvalue = values[0];
        let max_eigenvalue = values[values.len() - 1];
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "witness coefficients are not positive semi-definite (min eigenvalue {min_eigenvalue:e})"
            )));
        }
        Ok(WitnessOperator { phases, coeffs, rank, max_eigenvalue, min_eigenvalue })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.nrows()
    }

    /// Number of support vectors when built as a projector.
    pub fn rank(&self) -> Option<usize> {
        self.rank
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.max_eigenvalue
    }

    pub fn entry(&self, m: usize, l: usize) -> Complex64 {
        self.phases[m] * self.coeffs[(m, l)] * self.phases[l].conj()
    }

    /// `Gamma_ml` as a dense matrix.
    pub fn gamma_matrix(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |m, l| self.entry(m, l))
    }

    /// `Tr(rho L)`.
    pub fn expectation(&self, state: &DephasedState) -> Result<f64> {
        let n = self.dim();
        if state.dim() != n {
            return Err(Error::InvalidState(format!("state dimension {} != witness dimension {n}", state.dim())));
        }
        let same_gauge = state.phases() == &self.phases;
        let mut acc = 0.0;
        for m in 0..n {
            for l in 0..n {
                let term = if same_gauge {
                    state.kernel()[(m, l)] * self.coeffs[(l, m)]
                } else {
                    state.entry(m, l) * self.entry(l, m)
                };
                acc += term.re;
            }
        }
        Ok(acc)
    }

    /// `|Gamma^2 - Gamma|_max`.
    pub fn projector_defect(&self) -> f64 {
        let sq = &self.coeffs * &self.coeffs;
        (sq - &self.coeffs).iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Projector onto the span of the eigenvectors of the state whose eigenvalue
/// exceeds `rank_tolerance` times the largest one.
pub fn witness_from_state(state: &DephasedState, rank_tolerance: f64) -> Result<WitnessOperator> {
    if !(rank_tolerance.is_finite() && rank_tolerance >= 0.0) {
        return Err(Error::InvalidParams(format!("rank tolerance must be non-negative, got {rank_tolerance}")));
    }
    // The midpoint phases commute with everything downstream, so only the
    // kernel needs diagonalizing.
    let eig = linalg::hermitian_eigensystem(state.kernel())?;
    let n = state.dim();
    let top = eig.values[n - 1];
    if !(top > 0.0) {
        return Err(Error::NullState);
    }
    let cutoff = rank_tolerance * top;
    let support: Vec<usize> = (0..n).filter(|&k| eig.values[k] > cutoff).collect();
    let mut coeffs = DMatrix::<Complex64>::zeros(n, n);
    for &k in &support {
        let x = eig.vectors.column(k);
        coeffs += x * x.adjoint();
    }
    // exact Hermitian symmetry for the search
    for m in 0..n {
        coeffs[(m, m)].im = 0.0;
        for l in (m + 1)..n {
            let avg = 0.5 * (coeffs[(m, l)] + coeffs[(l, m)].conj());
            coeffs[(m, l)] = avg;
            coeffs[(l, m)] = avg.conj();
        }
    }
    WitnessOperator::from_parts(state.phases().clone(), coeffs, Some(support.len()))
}

/// Largest eigenvalue over all `r x r` principal submatrices of `Gamma`.
pub fn f_r(witness: &WitnessOperator, r: usize, mode: SearchMode) -> Result<f64> {
    let dim = witness.dim();
    if r == 0 || r > dim {
        return Err(Error::RankOutOfRange { r, dim });
    }
    Ok(match mode {
        SearchMode::Exhaustive => search::exhaustive(&witness.coeffs, r),
        SearchMode::Pruned => pruner(witness).search(r, f64::NEG_INFINITY),
    })
}

fn pruner(witness: &WitnessOperator) -> search::Pruner<'_> {
    search::Pruner::new(&witness.coeffs, witness.max_eigenvalue, witness.min_eigenvalue)
}

/// `f_1 ..= f_dim`, non-decreasing by construction.
pub fn f_values(witness: &WitnessOperator, mode: SearchMode) -> Vec<f64> {
    let dim = witness.dim();
    let mut out = Vec::with_capacity(dim);
    let mut floor = f64::NEG_INFINITY;
    match mode {
        SearchMode::Exhaustive => {
            for r in 1..=dim {
                floor = floor.max(search::exhaustive(&witness.coeffs, r));
                out.push(floor);
            }
        }
        SearchMode::Pruned => {
            let p = pruner(witness);
            for r in 1..=dim {
                floor = p.search(r, floor);
                out.push(floor);
            }
        }
    }
    out
}

/// Result of a Schmidt-number test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnCertificate {
    /// Largest Schmidt number the witness guarantees.
    pub certified_sn: usize,
    /// `<L> = Tr(rho L)`.
    pub expectation: f64,
    /// `f_r` for `r = 1..=dim`.
    pub f_values: Vec<f64>,
    pub tolerance: f64,
    /// Dimension of the support the witness projects on.
    pub witness_rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub rank_tolerance: f64,
    pub tolerance: f64,
    pub mode: SearchMode,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            rank_tolerance: DEFAULT_RANK_TOLERANCE,
            tolerance: DEFAULT_CERTIFICATION_TOLERANCE,
            mode: SearchMode::Pruned,
        }
    }
}

/// Certifies the Schmidt number of `state` with the default rank tolerance
/// and pruned search.
pub fn certify_sn(state: &DephasedState, tolerance: f64) -> Result<SnCertificate> {
    certify_sn_with(state, CertifyOptions { tolerance, ..CertifyOptions::default() })
}

pub fn certify_sn_with(state: &DephasedState, options: CertifyOptions) -> Result<SnCertificate> {
    let tolerance = options.tolerance;
    if !(tolerance > 0.0 && tolerance <= 0.1) {
        return Err(Error::InvalidParams(format!("certification tolerance must lie in (0, 0.1], got {tolerance}")));
    }
    let witness = witness_from_state(state, options.rank_tolerance)?;
    let expectation = witness.expectation(state)?;
    let f = f_values(&witness, options.mode);
    Ok(certificate_from(expectation, f, tolerance, witness.rank().unwrap_or(witness.dim())))
}

pub(crate) fn certificate_from(expectation: f64, f_values: Vec<f64>, tolerance: f64, witness_rank: usize) -> SnCertificate {
    let threshold = expectation - tolerance;
    let largest_excluded = f_values
        .iter()
        .enumerate()
        .filter(|(_, &f)| f < threshold)
        .map(|(i, _)| i + 1)
        .max()
        .unwrap_or(0);
    let certified_sn = (largest_excluded + 1).min(f_values.len());
    SnCertificate { certified_sn, expectation, f_values, tolerance, witness_rank }
}

/// Schmidt number of a pure state: the number of coefficients with modulus
/// above `zero_tolerance`.
pub fn pure_state_schmidt_number(gamma: &[f64], zero_tolerance: f64) -> usize {
    gamma.iter().filter(|g| g.abs() > zero_tolerance).count()
}
