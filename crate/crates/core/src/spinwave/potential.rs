use alloc::vec::Vec;

use crate::magnetostatics::stray_bz;
use crate::units::{MaterialParams, StripeGeometry, NANOMETER};
use crate::{Error, Result};

/// Smallest grid accepted by [`build_potential`].
pub const MIN_GRID: usize = 801;

/// Distance from a face within which a mode counts as edge-localized.
pub const EDGE_BAND: f64 = 50.0 * NANOMETER;

/// Piecewise-constant potential on `N` equal cells spanning the stripe depth.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile {
    /// Cell centres (m), symmetric about 0.
    pub z: Vec<f64>,
    /// Potential per cell (T).
    pub v: Vec<f64>,
    /// Cell width (m).
    pub dz: f64,
    pub w_z: f64,
    /// Exchange coefficient (T m^2).
    pub d_ex: f64,
    /// Uniform applied field included in `v` (T).
    pub b0: f64,
}

impl PotentialProfile {
    /// Wraps arbitrary cell values; used for model problems.
    pub fn from_values(w_z: f64, v: Vec<f64>, d_ex: f64) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::Domain("potential needs at least two cells"));
        }
        if !(w_z > 0.0 && d_ex > 0.0 && w_z.is_finite() && d_ex.is_finite()) {
            return Err(Error::Domain(
                "depth and exchange coefficient must be positive",
            ));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("potential"));
        }
        let n = v.len();
        let dz = w_z / n as f64;
        let z = (0..n)
            .map(|j| (j as f64 + 0.5 - 0.5 * n as f64) * dz)
            .collect();
        Ok(PotentialProfile {
            z,
            v,
            dz,
            w_z,
            d_ex,
            b0: 0.0,
        })
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.v.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `v(z) = v(-z)` to 1e-12 relative.
    pub fn is_symmetric(&self) -> bool {
        let scale = self
            .v
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()))
            .max(f64::MIN_POSITIVE);
        let n = self.len();
        (0..n / 2).all(|j| (self.v[j] - self.v[n - 1 - j]).abs() <= 1e-12 * scale)
    }

    /// Same profile with `db` added everywhere.
    pub fn shifted(&self, db: f64) -> Self {
        let mut p = self.clone();
        p.v.iter_mut().for_each(|x| *x += db);
        p.b0 += db;
        p
    }
}

/// Samples `v(z) = b0 + B_z(0, z)` at the centres of `n_grid` cells, which
/// keeps every node half a step away from the charged faces.
pub fn build_potential(
    geom: &StripeGeometry,
    mat: &MaterialParams,
    b0: f64,
    n_grid: usize,
) -> Result<PotentialProfile> {
    if n_grid < MIN_GRID {
        return Err(Error::Domain("potential grid needs at least 801 cells"));
    }
    mat.validate()?;
    let mut pot = PotentialProfile::from_values(
        geom.w_z,
        alloc::vec![0.0; n_grid],
        mat.exchange_coefficient(),
    )?;
    for (v, &z) in pot.v.iter_mut().zip(&pot.z) {
        *v = b0 + stray_bz(geom, mat, 0.0, z)?;
    }
    pot.b0 = b0;
    Ok(pot)
}

/// Fraction of `sum psi^2 dz` lying within [`EDGE_BAND`] of a face.
pub fn edge_weight(pot: &PotentialProfile, psi: &[f64]) -> f64 {
    let inner = 0.5 * pot.w_z - EDGE_BAND;
    let (mut edge, mut total) = (0.0, 0.0);
    for (&z, &p) in pot.z.iter().zip(psi) {
        total += p * p;
        if z.abs() > inner {
            edge += p * p;
        }
    }
    if total > 0.0 {
        edge / total
    } else {
        0.0
    }
}
