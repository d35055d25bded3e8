//! Numerical integration: adaptive Gauss-Kronrod and fixed Gauss-Legendre rules.

#![allow(clippy::excessive_precision)]

use alloc::vec::Vec;

use crate::{Error, Result};

// Kronrod 15-point abscissae (positive half) and weights, QUADPACK qk15.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss 7-point weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Integrates `f` over `[a, b]` by globally adaptive Gauss-Kronrod (7-15)
/// bisection until the summed error estimate falls below `abs_tol`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 2000;
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut intervals: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, v, e)];
    loop {
        let total: f64 = intervals.iter().map(|iv| iv.2).sum();
        let err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if !total.is_finite() {
            return Err(Error::NonFinite("quadrature integrand"));
        }
        if err <= abs_tol {
            return Ok(total);
        }
        if intervals.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureNonConvergence {
                estimate: total,
                error: err,
            });
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .fold(
                (0, -1.0),
                |acc, (i, iv)| if iv.3 > acc.1 { (i, iv.3) } else { acc },
            );
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adaptive_polynomial_and_peak() {
        let v = integrate(|x| x * x, 0.0, 3.0, 1e-14).unwrap();
        assert!((v - 9.0).abs() < 1e-12);
        // Lorentzian peak: atan closed form.
        let w = 1e-3;
        let v = integrate(|x| w / (x * x + w * w), -1.0, 1.0, 1e-12).unwrap();
        let exact = 2.0 * libm::atan(1.0 / w);
        assert!((v - exact).abs() < 1e-10, "{v} {exact}");
    }

    #[test]
    fn adaptive_reports_non_finite() {
        assert!(integrate(|_| f64::NAN, 0.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn legendre_rules_integrate_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n);
            let sw: f64 = w.iter().sum();
            assert!((sw - 2.0).abs() < 1e-13, "n={n}");
            // degree 2n-1 monomial
            let deg = 2 * n - 2;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let exact = 2.0 / (deg as f64 + 1.0);
            assert!((s - exact).abs() < 1e-12, "n={n} {s} {exact}");
        }
    }
}
