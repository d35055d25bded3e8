//! Dipolar field of a uniformly magnetized stripe.
//!
//! The stripe is saturated along `+z`, so its only magnetic charges are the
//! sheets `sigma = +M` on the top face `z = +w_z/2` and `-M` on the bottom
//! face. Integrating the 2D line-charge kernel over each face of an infinitely
//! long stripe gives closed forms for both in-plane components. The functions
//! return `mu_0 H` (tesla), which is the field `B` outside the magnet and the
//! demagnetizing field inside it.

use libm::{atan, log};

use crate::quad;
use crate::units::{MaterialParams, StripeGeometry, NANOMETER};
use crate::{Error, Result};

/// Points closer than this to a charged face are rejected.
pub const FACE_GUARD: f64 = 1e-12;

/// Default half range of the homogeneity integral (m).
pub const DEFAULT_C_HALF_RANGE: f64 = 100.0 * NANOMETER;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;
const FOUR_PI: f64 = 4.0 * core::f64::consts::PI;

/// One evaluated field point in the `y = 0` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub x: f64,
    pub z: f64,
    pub b_x: f64,
    pub b_z: f64,
}

/// Value of the homogeneity functional at one position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneityResult {
    pub x: f64,
    /// `C(x)` in T m.
    pub c_value: f64,
}

fn check_off_face(geom: &StripeGeometry, x: f64, z: f64) -> Result<()> {
    if !(x.is_finite() && z.is_finite()) {
        return Err(Error::NonFinite("field point"));
    }
    let near_face = (z.abs() - geom.half_depth()).abs() < FACE_GUARD;
    if near_face && x.abs() <= geom.half_width() + FACE_GUARD {
        return Err(Error::Singular { x, z });
    }
    Ok(())
}

/// Angle subtended by a face of half width `t_x/2` seen from `(x, d)`, where
/// `d` is the signed distance from the face plane.
fn subtended(half: f64, x: f64, d: f64) -> f64 {
    if d == 0.0 {
        // only reached outside the face (checked by the caller)
        return 0.0;
    }
    atan((x + half) / d) - atan((x - half) / d)
}

fn subtended_dx(half: f64, x: f64, d: f64) -> f64 {
    let a = x + half;
    let b = x - half;
    d / (a * a + d * d) - d / (b * b + d * d)
}

fn log_ratio(half: f64, x: f64, d: f64) -> f64 {
    let a = x + half;
    let b = x - half;
    log((a * a + d * d) / (b * b + d * d))
}

/// z-component of the stripe's dipolar field at `(x, z)`.
pub fn stray_bz(geom: &StripeGeometry, mat: &MaterialParams, x: f64, z: f64) -> Result<f64> {
    check_off_face(geom, x, z)?;
    let h = geom.half_width();
    let w = geom.half_depth();
    let s = subtended(h, x, w - z) + subtended(h, x, w + z);
    Ok(-mat.b_sat / TWO_PI * s)
}

/// x-component of the stripe's dipolar field at `(x, z)`.
pub fn stray_bx(geom: &StripeGeometry, mat: &MaterialParams, x: f64, z: f64) -> Result<f64> {
    check_off_face(geom, x, z)?;
    let h = geom.half_width();
    let w = geom.half_depth();
    let g = log_ratio(h, x, w - z) - log_ratio(h, x, w + z);
    if !g.is_finite() {
        return Err(Error::Singular { x, z });
    }
    Ok(mat.b_sat / FOUR_PI * g)
}

/// Both in-plane components at once.
pub fn stray_field(
    geom: &StripeGeometry,
    mat: &MaterialParams,
    x: f64,
    z: f64,
) -> Result<FieldSample> {
    Ok(FieldSample {
        x,
        z,
        b_x: stray_bx(geom, mat, x, z)?,
        b_z: stray_bz(geom, mat, x, z)?,
    })
}

/// Analytic `dB_z/dx` (T/m), signed.
pub fn stray_bz_gradient_x(
    geom: &StripeGeometry,
    mat: &MaterialParams,
    x: f64,
    z: f64,
) -> Result<f64> {
    check_off_face(geom, x, z)?;
    let h = geom.half_width();
    let w = geom.half_depth();
    let s = subtended_dx(h, x, w - z) + subtended_dx(h, x, w + z);
    Ok(-mat.b_sat / TWO_PI * s)
}

/// `C(x) = integral over |z| <= z_half of (B_z(x, z) - B_z(x, 0)) dz`.
///
/// `abs_tol` is the quadrature tolerance in T m; the default used by
/// [`homogeneity_c`] is 1e-12.
pub fn homogeneity_c_with_tol(
    geom: &StripeGeometry,
    mat: &MaterialParams,
    x: f64,
    z_half: f64,
    abs_tol: f64,
) -> Result<HomogeneityResult> {
    if !(x > geom.half_width()) {
        return Err(Error::Domain("homogeneity functional needs x > t_x/2"));
    }
    if !(z_half > 0.0 && z_half < geom.half_depth()) {
        return Err(Error::Domain("z half range must lie inside (0, w_z/2)"));
    }
    let b0 = stray_bz(geom, mat, x, 0.0)?;
    let c_value = quad::integrate(
        |z| stray_bz(geom, mat, x, z).map_or(f64::NAN, |b| b - b0),
        -z_half,
        z_half,
        abs_tol,
    )?;
    Ok(HomogeneityResult { x, c_value })
}

pub fn homogeneity_c(
    geom: &StripeGeometry,
    mat: &MaterialParams,
    x: f64,
    z_half: f64,
) -> Result<HomogeneityResult> {
    homogeneity_c_with_tol(geom, mat, x, z_half, 1e-12)
}

/// Root of `C(x)` on `(t_x/2 + 1 nm, 5 w_z)` by bisection, to `x_tol`.
pub fn find_x_optim_with(
    geom: &StripeGeometry,
    mat: &MaterialParams,
    z_half: f64,
    x_tol: f64,
) -> Result<f64> {
    // Tight enough that the quadrature error cannot flip the sign of C
    // within x_tol of the root.
    const ROOT_QUAD_TOL: f64 = 1e-18;
    let c = |x: f64| homogeneity_c_with_tol(geom, mat, x, z_half, ROOT_QUAD_TOL).map(|r| r.c_value);
    let mut lo = geom.half_width() + NANOMETER;
    let mut hi = 5.0 * geom.w_z;
    let mut c_lo = c(lo)?;
    let c_hi = c(hi)?;
    if c_lo == 0.0 {
        return Ok(lo);
    }
    if c_lo.signum() == c_hi.signum() {
        return Err(Error::RootNotFound { lo, hi });
    }
    while hi - lo > x_tol {
        let mid = 0.5 * (lo + hi);
        let c_mid = c(mid)?;
        if c_mid == 0.0 {
            return Ok(mid);
        }
        if c_mid.signum() == c_lo.signum() {
            lo = mid;
            c_lo = c_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Position of optimal z-homogeneity, to 0.1 nm, for the default
/// 100 nm half range.
pub fn find_x_optim(geom: &StripeGeometry, mat: &MaterialParams) -> Result<f64> {
    find_x_optim_with(geom, mat, DEFAULT_C_HALF_RANGE, 0.1 * NANOMETER)
}

/// Full 3D field of the finite stripe from direct numerical integration of
/// the Coulomb kernel over the two charged faces. Validation oracle only.
///
/// The `y'` integral uses the substitution `y' - y = rho tan(theta)`, which
/// turns the `1/r^3` peak into a smooth integrand; both directions use
/// `n_quad`-point Gauss-Legendre rules, the x' direction in panels no wider
/// than the distance to the face plane.
pub fn oracle_field_3d(
    geom: &StripeGeometry,
    mat: &MaterialParams,
    x: f64,
    y: f64,
    z: f64,
    n_quad: usize,
) -> Result<[f64; 3]> {
    if n_quad < 64 {
        return Err(Error::Domain(
            "oracle needs at least 64 nodes per dimension",
        ));
    }
    check_off_face(geom, x, z)?;
    let (nodes, weights) = quad::gauss_legendre(n_quad);
    let h = geom.half_width();
    let ly = 0.5 * geom.l_y;
    let mut field = [0.0f64; 3];
    for (zf, sigma) in [(geom.half_depth(), 1.0f64), (-geom.half_depth(), -1.0f64)] {
        let dz = z - zf;
        let panels = if dz.abs() > 0.0 {
            libm::ceil(geom.t_x / dz.abs()).clamp(1.0, 64.0) as usize
        } else {
            64
        };
        let pw = geom.t_x / panels as f64;
        for p in 0..panels {
            let a = -h + p as f64 * pw;
            let mid = a + 0.5 * pw;
            for (xi, wi) in nodes.iter().zip(&weights) {
                let xp = mid + 0.5 * pw * xi;
                let wx = 0.5 * pw * wi;
                let dx = x - xp;
                let rho2 = dx * dx + dz * dz;
                let rho = libm::sqrt(rho2);
                // theta range for y' in [-L/2, L/2]
                let t1 = atan((-ly - y) / rho);
                let t2 = atan((ly - y) / rho);
                let (mut iz, mut iy) = (0.0, 0.0);
                for (ti, wt) in nodes.iter().zip(&weights) {
                    let th = 0.5 * (t1 + t2) + 0.5 * (t2 - t1) * ti;
                    let wth = 0.5 * (t2 - t1) * wt;
                    // dy'/|r|^3 = cos(theta) dtheta / rho^2
                    iz += wth * libm::cos(th) / rho2;
                    // (y - y') dy'/|r|^3 = -sin(theta) dtheta / rho
                    iy -= wth * libm::sin(th) / rho;
                }
                field[0] += sigma * wx * dx * iz;
                field[1] += sigma * wx * iy;
                field[2] += sigma * wx * dz * iz;
            }
        }
    }
    let scale = mat.b_sat / FOUR_PI;
    Ok([field[0] * scale, field[1] * scale, field[2] * scale])
}

pub fn oracle_bz_3d(
    geom: &StripeGeometry,
    mat: &MaterialParams,
    x: f64,
    y: f64,
    z: f64,
    n_quad: usize,
) -> Result<f64> {
    oracle_field_3d(geom, mat, x, y, z, n_quad).map(|f| f[2])
}
