use alloc::vec::Vec;
use core::f64::consts::PI;

use super::ModeSolution;
use crate::units::{field_from_frequency, MaterialParams, StripeGeometry};
use crate::{Error, Result};

/// Width quantum numbers kept by default (`n_x = 1, 2`).
pub const DEFAULT_N_X_MAX: usize = 2;

/// Resonance fields closer than this (0.1 G) are one spectral line.
pub const DEGENERACY_TOL: f64 = 1e-5;

/// One field-sweep line of the confined spin waves (`k_y = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinWaveLine {
    pub n_z: usize,
    pub n_x: usize,
    /// `b_n + d_ex (n_x pi / t_x)^2` at zero applied field (T).
    pub b_total: f64,
    /// Applied field at which the mode resonates (T).
    pub b_res: f64,
    /// Edge weight of the underlying z-mode.
    pub edge_weight: f64,
}

/// Combines z-modes solved at `b0 = 0` with the width quantization and the
/// energy conservation rule `h nu = g_fm mu_B (b_res + b_total)`.
/// Lines with `b_res <= 0` are dropped.
pub fn assemble_lines(
    modes: &[ModeSolution],
    geom: &StripeGeometry,
    mat: &MaterialParams,
    nu: f64,
    n_x_max: usize,
) -> Result<Vec<SpinWaveLine>> {
    if n_x_max == 0 {
        return Err(Error::Domain("n_x_max must be at least 1"));
    }
    mat.validate()?;
    let b_photon = field_from_frequency(nu, mat.g_fm)?;
    let d_ex = mat.exchange_coefficient();
    let mut lines = Vec::with_capacity(modes.len() * n_x_max);
    for m in modes {
        for n_x in 1..=n_x_max {
            let k_x = n_x as f64 * PI / geom.t_x;
            let b_total = m.b_n + d_ex * k_x * k_x;
            let b_res = b_photon - b_total;
            if b_res > 0.0 {
                lines.push(SpinWaveLine {
                    n_z: m.n_z,
                    n_x,
                    b_total,
                    b_res,
                    edge_weight: m.edge_weight,
                });
            }
        }
    }
    Ok(lines)
}

/// The two highest distinct resonance fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighestGap {
    pub upper: SpinWaveLine,
    pub lower: SpinWaveLine,
    /// `upper.b_res - lower.b_res` (T).
    pub separation: f64,
}

/// Highest line and the next line lying more than [`DEGENERACY_TOL`] below
/// it. Degenerate even/odd partners appear as one line in a field sweep.
pub fn highest_gap(lines: &[SpinWaveLine]) -> Result<HighestGap> {
    let mut sorted = lines.to_vec();
    sorted.sort_by(|a, b| {
        b.b_res
            .total_cmp(&a.b_res)
            .then(a.n_z.cmp(&b.n_z))
            .then(a.n_x.cmp(&b.n_x))
    });
    let upper = *sorted
        .first()
        .ok_or(Error::Domain("need at least two spin-wave lines"))?;
    let lower = *sorted
        .iter()
        .find(|l| upper.b_res - l.b_res > DEGENERACY_TOL)
        .ok_or(Error::Domain("need at least two distinct spin-wave lines"))?;
    Ok(HighestGap {
        upper,
        lower,
        separation: upper.b_res - lower.b_res,
    })
}
