//! Relaxation and dephasing of a qubit by thermal magnons of the stripe.
//!
//! Phenomenological golden-rule model:
//!
//! ```text
//! Gamma1 = gamma0 (b_sat / b_sat_ref)^2 coth(h nu / 2 k_B T)
//!          * sum over lines |g_c(x) / g_ref|^2 L(delta)
//! Gamma2 = Gamma1 (1/2 + alpha_phi)
//! ```
//!
//! `L` is a unit-peak Lorentzian of FWHM `de_fmr` in the energy detuning
//! `delta = g_fm mu_B (b0(x) - b_res)` between the qubit (resonant at its
//! operating field `b0(x)`) and the magnon line. `gamma0` is fixed by one
//! measured T1, and the overall scale grows as `M_sat^2`.

use alloc::vec::Vec;

use libm::tanh;

use crate::register::{qubit_line, RegisterDesign};
use crate::spinwave::{ModeSolution, SpinWaveLine};
use crate::units::{StripeGeometry, BOHR_MAGNETON, BOLTZMANN, NANOMETER, PLANCK};
use crate::{Error, Result};

pub const DEFAULT_ALPHA_PHI: f64 = 1.0 / 32.0;

/// Lines further than this from the qubit's operating field are skipped (T).
pub const DETUNING_WINDOW: f64 = 0.5;

/// Position at which the coupling of the lowest mode sets the unit of `g_c`.
pub const REFERENCE_X: f64 = 230.0 * NANOMETER;

/// Calibrated rate model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceModel {
    /// Rate scale (1/s).
    pub gamma0: f64,
    /// Pure-dephasing share of `Gamma1`.
    pub alpha_phi: f64,
    /// Magnon linewidth, FWHM (J).
    pub de_fmr: f64,
    /// Saturation at calibration (T).
    pub b_sat_ref: f64,
    /// Lowest-mode coupling at [`REFERENCE_X`] for the calibration design.
    pub g_ref: f64,
}

/// Calibration point: `T1(x, temp) = t1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anchor {
    pub x: f64,
    pub temp: f64,
    pub t1: f64,
}

impl Anchor {
    /// 3.4 s at 230 nm and 2 K.
    pub const REFERENCE: Anchor = Anchor {
        x: 230.0 * NANOMETER,
        temp: 2.0,
        t1: 3.4,
    };
}

/// Contribution of one spin-wave line to `Gamma1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeContribution {
    pub n_z: usize,
    pub n_x: usize,
    /// 1/s
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceResult {
    pub x: f64,
    pub temp: f64,
    pub t1: f64,
    pub t2: f64,
    pub per_mode: Vec<ModeContribution>,
}

/// One row of a sweep table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub x: f64,
    pub temp: f64,
    pub t1: f64,
    pub t2: f64,
}

/// Field at `(x, 0)` of the surface charges `+-psi(z)` that a unit
/// transverse excitation of `mode` leaves on the faces `x = +-t_x/2`
/// (arbitrary units; the scale is absorbed in `gamma0`). The profile is
/// assumed to sample the stripe depth at cell centres.
pub fn mode_coupling(geom: &StripeGeometry, mode: &ModeSolution, x: f64) -> Result<f64> {
    if !(x > geom.half_width()) || x.is_nan() {
        return Err(Error::Domain("coupling needs x > t_x/2"));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let n = mode.psi.len();
    if n == 0 {
        return Err(Error::Domain("empty mode profile"));
    }
    let dz = geom.w_z / n as f64;
    let a = x - geom.half_width();
    let b = x + geom.half_width();
    let mut sum = 0.0;
    for (j, &p) in mode.psi.iter().enumerate() {
        let z = (j as f64 + 0.5 - 0.5 * n as f64) * dz;
        let z2 = z * z;
        sum += p * (a / (a * a + z2) - b / (b * b + z2));
    }
    let g = sum * dz / (2.0 * core::f64::consts::PI);
    if g.is_finite() {
        Ok(g)
    } else {
        Err(Error::NonFinite("mode coupling"))
    }
}

/// `coth(h nu / 2 k_B T)`.
pub fn thermal_factor(nu: f64, temp: f64) -> Result<f64> {
    if !(temp > 0.0 && temp.is_finite()) {
        return Err(Error::Domain("temperature must be positive"));
    }
    Ok(1.0 / tanh(PLANCK * nu / (2.0 * BOLTZMANN * temp)))
}

/// Unit-peak Lorentzian in the energy detuning.
fn lorentzian(detuning: f64, fwhm: f64) -> Result<f64> {
    if fwhm == 0.0 {
        return if detuning == 0.0 {
            Err(Error::ZeroWidthResonance)
        } else {
            Ok(0.0)
        };
    }
    let r = 2.0 * detuning / fwhm;
    Ok(1.0 / (1.0 + r * r))
}

/// Unscaled mode sum `sum |g_c / g_ref|^2 L(delta)` with per-line terms.
/// `window` limits the lines to `|b_res - b0(x)| <= window`.
pub fn mode_sum(
    design: &RegisterDesign,
    lines: &[SpinWaveLine],
    modes: &[ModeSolution],
    x: f64,
    de_fmr: f64,
    g_ref: f64,
    window: f64,
) -> Result<(f64, Vec<ModeContribution>)> {
    if !(de_fmr >= 0.0) {
        return Err(Error::Domain("linewidth must be non-negative"));
    }
    if !(g_ref != 0.0 && g_ref.is_finite()) {
        return Err(Error::CalibrationImpossible);
    }
    let b0 = qubit_line(design, x)?.b_res;
    let mut total = 0.0;
    let mut per = Vec::new();
    let mut couplings: Vec<Option<f64>> = alloc::vec![None; modes.len()];
    for line in lines {
        if (line.b_res - b0).abs() > window {
            continue;
        }
        let idx = modes
            .iter()
            .position(|m| m.n_z == line.n_z)
            .ok_or(Error::Domain("line refers to a missing mode"))?;
        let g = match couplings[idx] {
            Some(g) => g,
            None => {
                let g = mode_coupling(&design.geom, &modes[idx], x)? / g_ref;
                couplings[idx] = Some(g);
                g
            }
        };
        let delta = design.mat.g_fm * BOHR_MAGNETON * (b0 - line.b_res);
        let term = g * g * lorentzian(delta, de_fmr)?;
        total += term;
        per.push(ModeContribution {
            n_z: line.n_z,
            n_x: line.n_x,
            rate: term,
        });
    }
    Ok((total, per))
}

fn reference_coupling(design: &RegisterDesign, modes: &[ModeSolution]) -> Result<f64> {
    let lowest = modes.first().ok_or(Error::CalibrationImpossible)?;
    let g = mode_coupling(&design.geom, lowest, REFERENCE_X)?;
    if g == 0.0 {
        return Err(Error::CalibrationImpossible);
    }
    Ok(g)
}

/// Fixes `gamma0` so that the model reproduces `anchor` exactly.
pub fn calibrate(
    design: &RegisterDesign,
    lines: &[SpinWaveLine],
    modes: &[ModeSolution],
    anchor: Anchor,
) -> Result<DecoherenceModel> {
    if !(anchor.t1 > 0.0 && anchor.t1.is_finite()) {
        return Err(Error::Domain("anchor T1 must be positive"));
    }
    let g_ref = reference_coupling(design, modes)?;
    let de_fmr = design.mat.de_fmr;
    let (sum, _) = mode_sum(
        design,
        lines,
        modes,
        anchor.x,
        de_fmr,
        g_ref,
        DETUNING_WINDOW,
    )?;
    let thermal = thermal_factor(design.nu, anchor.temp)?;
    if !(sum > 0.0) {
        return Err(Error::CalibrationImpossible);
    }
    Ok(DecoherenceModel {
        gamma0: 1.0 / (anchor.t1 * thermal * sum),
        alpha_phi: DEFAULT_ALPHA_PHI,
        de_fmr,
        b_sat_ref: design.mat.b_sat,
        g_ref,
    })
}

/// T1, T2 and per-line rates for a qubit at `x` and temperature `temp`.
pub fn evaluate(
    model: &DecoherenceModel,
    design: &RegisterDesign,
    lines: &[SpinWaveLine],
    modes: &[ModeSolution],
    x: f64,
    temp: f64,
) -> Result<DecoherenceResult> {
    if !(model.gamma0 >= 0.0 && model.alpha_phi >= 0.0) {
        return Err(Error::Domain("gamma0 and alpha_phi must be non-negative"));
    }
    let thermal = thermal_factor(design.nu, temp)?;
    let (sum, mut per_mode) = mode_sum(
        design,
        lines,
        modes,
        x,
        model.de_fmr,
        model.g_ref,
        DETUNING_WINDOW,
    )?;
    let ms = design.mat.b_sat / model.b_sat_ref;
    let scale = model.gamma0 * ms * ms * thermal;
    per_mode.iter_mut().for_each(|c| c.rate *= scale);
    let gamma1 = scale * sum;
    let gamma2 = gamma1 * (0.5 + model.alpha_phi);
    Ok(DecoherenceResult {
        x,
        temp,
        t1: 1.0 / gamma1,
        t2: 1.0 / gamma2,
        per_mode,
    })
}

/// `Gamma1` (1/s).
pub fn t1_rate(
    model: &DecoherenceModel,
    design: &RegisterDesign,
    lines: &[SpinWaveLine],
    modes: &[ModeSolution],
    x: f64,
    temp: f64,
) -> Result<f64> {
    evaluate(model, design, lines, modes, x, temp).map(|r| 1.0 / r.t1)
}

/// `Gamma2 = Gamma1 / 2 + alpha_phi Gamma1` (1/s).
pub fn t2_rate(
    model: &DecoherenceModel,
    design: &RegisterDesign,
    lines: &[SpinWaveLine],
    modes: &[ModeSolution],
    x: f64,
    temp: f64,
) -> Result<f64> {
    evaluate(model, design, lines, modes, x, temp).map(|r| 1.0 / r.t2)
}

/// Default temperatures of the position sweep (K).
pub const SWEEP_TEMPERATURES: [f64; 3] = [3.0, 30.0, 300.0];

/// T1/T2 on every `(x, temp)` pair; rows grouped by temperature.
pub fn sweep_x(
    model: &DecoherenceModel,
    design: &RegisterDesign,
    lines: &[SpinWaveLine],
    modes: &[ModeSolution],
    xs: &[f64],
    temps: &[f64],
) -> Result<Vec<SweepPoint>> {
    let mut out = Vec::with_capacity(xs.len() * temps.len());
    for &temp in temps {
        for &x in xs {
            let r = evaluate(model, design, lines, modes, x, temp)?;
            out.push(SweepPoint {
                x,
                temp,
                t1: r.t1,
                t2: r.t2,
            });
        }
    }
    Ok(out)
}

pub fn sweep_temp(
    model: &DecoherenceModel,
    design: &RegisterDesign,
    lines: &[SpinWaveLine],
    modes: &[ModeSolution],
    x: f64,
    temps: &[f64],
) -> Result<Vec<SweepPoint>> {
    temps
        .iter()
        .map(|&temp| {
            evaluate(model, design, lines, modes, x, temp).map(|r| SweepPoint {
                x,
                temp,
                t1: r.t1,
                t2: r.t2,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinwave::{solve_spectrum, MagnonSpectrum, SpectrumSettings};
    use crate::units::MaterialParams;

    const NM: f64 = NANOMETER;

    fn setup(design: &RegisterDesign) -> MagnonSpectrum {
        solve_spectrum(
            &design.geom,
            &design.mat,
            design.nu,
            &SpectrumSettings::default(),
        )
        .unwrap()
    }

    fn calibrated() -> (RegisterDesign, MagnonSpectrum, DecoherenceModel) {
        let d = RegisterDesign::reference();
        let s = setup(&d);
        let m = calibrate(&d, &s.lines, &s.modes, Anchor::REFERENCE).unwrap();
        (d, s, m)
    }

    #[test]
    fn anchor_round_trip_and_reference_values() {
        let (d, s, m) = calibrated();
        let at = |t: f64| evaluate(&m, &d, &s.lines, &s.modes, 230.0 * NM, t).unwrap();
        let cold = at(2.0);
        assert!((cold.t1 - 3.4).abs() < 1e-12);
        assert!((cold.t2 / 6.4 - 1.0).abs() < 0.02, "{}", cold.t2);
        let hot = at(300.0);
        assert!((hot.t1 / 25e-3 - 1.0).abs() < 0.10, "{}", hot.t1);
        assert!((hot.t2 / 47e-3 - 1.0).abs() < 0.10, "{}", hot.t2);
        assert!(cold.per_mode.iter().all(|c| c.rate >= 0.0));
    }

    #[test]
    fn calibration_scales_linearly() {
        let (d, s, m) = calibrated();
        let doubled = calibrate(
            &d,
            &s.lines,
            &s.modes,
            Anchor {
                t1: 6.8,
                ..Anchor::REFERENCE
            },
        )
        .unwrap();
        assert!((doubled.gamma0 * 2.0 / m.gamma0 - 1.0).abs() < 1e-12);
        assert!(calibrate(
            &d,
            &s.lines,
            &s.modes,
            Anchor {
                t1: 0.0,
                ..Anchor::REFERENCE
            }
        )
        .is_err());
        assert_eq!(
            calibrate(&d, &[], &s.modes, Anchor::REFERENCE),
            Err(Error::CalibrationImpossible)
        );
    }

    #[test]
    fn temperature_law_and_dephasing() {
        let (d, s, mut m) = calibrated();
        let xs: Vec<f64> = (0..12).map(|i| (150.0 + 75.0 * i as f64) * NM).collect();
        let table = sweep_x(&m, &d, &s.lines, &s.modes, &xs, &SWEEP_TEMPERATURES).unwrap();
        let ratio0 = table[0].t1 / table[2 * xs.len()].t1;
        for (i, _) in xs.iter().enumerate() {
            let (c, h) = (table[i], table[2 * xs.len() + i]);
            assert!((c.t1 / h.t1 / ratio0 - 1.0).abs() < 1e-12);
            let exact = thermal_factor(d.nu, 300.0).unwrap() / thermal_factor(d.nu, 3.0).unwrap();
            assert!((c.t1 / h.t1 / exact - 1.0).abs() < 1e-12);
        }
        for p in &table {
            assert!(p.t2 <= 2.0 * p.t1);
            assert!((p.t2 / p.t1 - 1.0 / (0.5 + DEFAULT_ALPHA_PHI)).abs() < 1e-12);
        }
        m.alpha_phi = 0.0;
        let r = evaluate(&m, &d, &s.lines, &s.modes, 230.0 * NM, 10.0).unwrap();
        assert_eq!(r.t2, 2.0 * r.t1);
        let temps: Vec<f64> = (1..100).map(|i| i as f64 * 3.0).collect();
        let tt = sweep_temp(&m, &d, &s.lines, &s.modes, 230.0 * NM, &temps).unwrap();
        assert!(tt.windows(2).all(|w| w[1].t1 < w[0].t1));
    }

    #[test]
    fn rates_fall_with_distance() {
        let (d, s, m) = calibrated();
        let xs: Vec<f64> = (60..=2000).step_by(5).map(|i| i as f64 * NM).collect();
        let table = sweep_x(&m, &d, &s.lines, &s.modes, &xs, &[3.0]).unwrap();
        assert!(table
            .windows(2)
            .all(|w| w[1].t1 > w[0].t1 && w[1].t2 > w[0].t2));
    }

    #[test]
    fn window_and_parity_selection() {
        let (d, s, m) = calibrated();
        let x = 230.0 * NM;
        let (windowed, _) = mode_sum(
            &d,
            &s.lines,
            &s.modes,
            x,
            m.de_fmr,
            m.g_ref,
            DETUNING_WINDOW,
        )
        .unwrap();
        let (all, _) =
            mode_sum(&d, &s.lines, &s.modes, x, m.de_fmr, m.g_ref, f64::INFINITY).unwrap();
        assert!((all - windowed) / all < 1e-6);
        for mode in s.modes.iter().filter(|m| m.n_z % 2 == 1) {
            let g = mode_coupling(&d.geom, mode, x).unwrap();
            let even = mode_coupling(&d.geom, &s.modes[0], x).unwrap();
            assert!(g.abs() < 1e-9 * even.abs());
        }
        assert_eq!(
            mode_coupling(&d.geom, &s.modes[0], f64::INFINITY).unwrap(),
            0.0
        );
        let far = mode_coupling(&d.geom, &s.modes[0], 1e-3).unwrap();
        assert!(far.abs() < 1e-6 * m.g_ref.abs());
    }

    #[test]
    fn narrower_magnon_line_quarters_far_wing() {
        // unit-peak Lorentzian: far wing goes as fwhm^2
        let (d, s, m) = calibrated();
        let narrow = DecoherenceModel {
            de_fmr: 0.5 * m.de_fmr,
            ..m
        };
        let x = 230.0 * NM;
        let a = evaluate(&m, &d, &s.lines, &s.modes, x, 2.0).unwrap();
        let b = evaluate(&narrow, &d, &s.lines, &s.modes, x, 2.0).unwrap();
        let b0 = qubit_line(&d, x).unwrap().b_res;
        let mut checked = 0;
        for (p, q) in a.per_mode.iter().zip(&b.per_mode) {
            let line = s
                .lines
                .iter()
                .find(|l| l.n_z == p.n_z && l.n_x == p.n_x)
                .unwrap();
            let delta = d.mat.g_fm * BOHR_MAGNETON * (b0 - line.b_res);
            if p.rate > 0.0 && (2.0 * delta / m.de_fmr).abs() > 20.0 {
                assert!((q.rate / p.rate / 0.25 - 1.0).abs() < 0.05);
                checked += 1;
            }
        }
        assert!(checked > 0);
        let zero = DecoherenceModel { de_fmr: 0.0, ..m };
        let z = evaluate(&zero, &d, &s.lines, &s.modes, x, 2.0).unwrap();
        assert!(z.t1.is_infinite());
    }

    #[test]
    fn dysprosium_decoheres_faster() {
        let (d, s, m) = calibrated();
        let py = evaluate(&m, &d, &s.lines, &s.modes, 230.0 * NM, 2.0).unwrap();
        let dy_design = RegisterDesign {
            mat: MaterialParams::dysprosium(),
            ..d.clone()
        };
        let dy_s = setup(&dy_design);
        let dy = evaluate(&m, &dy_design, &dy_s.lines, &dy_s.modes, 230.0 * NM, 2.0).unwrap();
        assert!(dy.t1 < py.t1);
    }
}
