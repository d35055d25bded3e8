//! Confined spin waves along the stripe depth.
//!
//! In the circular-precession approximation a mode `exp(i k_x x)` with
//! profile `psi(z)` obeys
//!
//! ```text
//! -d_ex psi'' + v(z) psi = b psi,      v(z) = b0 + B_z(0, z)
//! ```
//!
//! where `b = h nu / (g_fm mu_B) - d_ex k_x^2` and `d_ex = 2 A / M_sat`.
//! Two independent solvers are provided: a transfer-matrix shooting method
//! (production) and a refined finite-difference discretization of the same
//! piecewise-constant operator (oracle).

mod fd;
mod lines;
mod potential;
mod transfer;
mod tridiag;

pub use fd::{fd_count_below, fd_eigensolve, fd_eigensolve_with, FdOptions};
pub use lines::{
    assemble_lines, highest_gap, HighestGap, SpinWaveLine, DEFAULT_N_X_MAX, DEGENERACY_TOL,
};
pub use potential::{build_potential, edge_weight, PotentialProfile, EDGE_BAND, MIN_GRID};
pub use transfer::{tm_eigensolve, tm_eigensolve_with, TmOptions};

use alloc::vec::Vec;

/// Boundary condition on the magnetization at the faces `z = +-w_z/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryCondition {
    /// Fully pinned, `psi = 0`.
    #[default]
    Dirichlet,
    /// Free, `psi' = 0`.
    Neumann,
}

/// One 1D eigenmode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    /// 0-based index in eigenvalue order.
    pub n_z: usize,
    /// Eigenvalue in tesla.
    pub b_n: f64,
    /// Profile at the potential's cell centres, `sum psi^2 dz = 1` (1/sqrt(m)).
    pub psi: Vec<f64>,
    /// Share of the norm within [`EDGE_BAND`] of either face.
    pub edge_weight: f64,
}

impl ModeSolution {
    /// Number of sign changes of the sampled profile (exact zeros skipped).
    pub fn sign_changes(&self) -> usize {
        let mut last = 0.0f64;
        let mut n = 0;
        for &p in &self.psi {
            if p == 0.0 {
                continue;
            }
            if last != 0.0 && p.signum() != last.signum() {
                n += 1;
            }
            last = p;
        }
        n
    }
}

/// Solver output: the modes found below the scan ceiling.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    pub modes: Vec<ModeSolution>,
    /// Set when fewer modes than requested exist below the ceiling.
    pub truncated: bool,
}

// Largest downward step tolerated in the merged eigenvalue sequence. Even/odd
// edge pairs can be degenerate below double precision.
pub(crate) const ORDER_SLACK: f64 = 1e-10;

/// Interleaves even- and odd-sector eigen-data `e0, o0, e1, o1, ...`.
pub(crate) fn interleave<T>(even: Vec<T>, odd: Vec<T>) -> crate::Result<Vec<T>> {
    if odd.len() > even.len() || even.len() > odd.len() + 1 {
        return Err(crate::Error::Resolution {
            expected: 2 * even.len(),
            found: even.len() + odd.len(),
        });
    }
    let mut out = Vec::with_capacity(even.len() + odd.len());
    let mut odd = odd.into_iter();
    for e in even {
        out.push(e);
        if let Some(o) = odd.next() {
            out.push(o);
        }
    }
    Ok(out)
}

/// Normalizes `psi` to `sum psi^2 dz = 1` and makes its first significant
/// lobe positive.
pub(crate) fn normalize(psi: &mut [f64], dz: f64) {
    let norm = libm::sqrt(psi.iter().map(|p| p * p).sum::<f64>() * dz);
    if norm > 0.0 {
        psi.iter_mut().for_each(|p| *p /= norm);
    }
    let peak = psi.iter().fold(0.0f64, |m, p| m.max(p.abs()));
    if let Some(first) = psi.iter().find(|p| p.abs() > 1e-3 * peak) {
        if *first < 0.0 {
            psi.iter_mut().for_each(|p| *p = -*p);
        }
    }
}

/// Solver settings for [`solve_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSettings {
    pub n_grid: usize,
    pub bc: BoundaryCondition,
    /// Upper bound on the number of z-modes kept.
    pub n_modes: usize,
    pub n_x_max: usize,
}

impl Default for SpectrumSettings {
    fn default() -> Self {
        SpectrumSettings {
            n_grid: 1601,
            bc: BoundaryCondition::Dirichlet,
            n_modes: 64,
            n_x_max: DEFAULT_N_X_MAX,
        }
    }
}

/// Bound z-modes at zero applied field and the resulting resonance lines.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnonSpectrum {
    pub potential: PotentialProfile,
    pub modes: Vec<ModeSolution>,
    pub lines: Vec<SpinWaveLine>,
}

pub fn solve_spectrum(
    geom: &crate::units::StripeGeometry,
    mat: &crate::units::MaterialParams,
    nu: f64,
    settings: &SpectrumSettings,
) -> crate::Result<MagnonSpectrum> {
    let potential = build_potential(geom, mat, 0.0, settings.n_grid)?;
    let opts = TmOptions {
        bc: settings.bc,
        ..TmOptions::default()
    };
    let modes = tm_eigensolve_with(&potential, settings.n_modes, &opts)?.modes;
    let lines = assemble_lines(&modes, geom, mat, nu, settings.n_x_max)?;
    Ok(MagnonSpectrum {
        potential,
        modes,
        lines,
    })
}

#[cfg(test)]
mod tests;
