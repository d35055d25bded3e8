//! Qubit-array validation: qubit resonance fields in the stray field, the
//! effective Ising condition, spectral clearance from the spin-wave lines
//! and the number of addressable qubits.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::magnetostatics::{stray_bz, stray_bz_gradient_x};
use crate::spinwave::SpinWaveLine;
use crate::units::{
    field_from_frequency, gauss_to_tesla, tesla_to_gauss, MaterialParams, QubitSpec,
    StripeGeometry, BOHR_MAGNETON, MU_0, NANOMETER,
};
use crate::{Error, Result};

/// Qubits allotted one per this many linewidths.
pub const DEFAULT_PACKING: f64 = 2.0;

/// Guard band between a qubit line and any spin-wave line (G).
pub const DEFAULT_MARGIN_G: f64 = 10.0;

/// Stripe, material, qubit species, drive frequency and qubit sites.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterDesign {
    pub geom: StripeGeometry,
    pub mat: MaterialParams,
    pub qubit: QubitSpec,
    /// Operating frequency (Hz).
    pub nu: f64,
    /// Qubit x-positions (m) on the line `y = z = 0`, strictly increasing.
    pub positions: Vec<f64>,
    /// Nearest-neighbour spacing along a qubit chain (m).
    pub l_inter: f64,
}

impl RegisterDesign {
    pub fn new(
        geom: StripeGeometry,
        mat: MaterialParams,
        qubit: QubitSpec,
        nu: f64,
        positions: Vec<f64>,
        l_inter: f64,
    ) -> Result<Self> {
        let d = RegisterDesign {
            geom,
            mat,
            qubit,
            nu,
            positions,
            l_inter,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        self.mat.validate()?;
        QubitSpec::new(self.qubit.g_q, self.qubit.linewidth_g)?;
        StripeGeometry::new(self.geom.t_x, self.geom.w_z, self.geom.l_y)?;
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::Domain("operating frequency must be positive"));
        }
        if !(self.l_inter > 0.0 && self.l_inter.is_finite()) {
            return Err(Error::Domain("l_inter must be positive"));
        }
        if self.positions.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("qubit positions must be strictly increasing"));
        }
        if self
            .positions
            .iter()
            .any(|&x| !(x > self.geom.half_width() && x.is_finite()))
        {
            return Err(Error::Domain("qubits must sit outside the stripe"));
        }
        Ok(())
    }

    /// Sixteen qubits from 199 nm to 274 nm (5 nm pitch), 5 nm chain spacing,
    /// permalloy stripe, Q band.
    pub fn reference() -> Self {
        RegisterDesign {
            geom: StripeGeometry::reference(),
            mat: MaterialParams::permalloy(),
            qubit: QubitSpec::default(),
            nu: 34e9,
            positions: (0..16)
                .map(|i| (199.0 + 5.0 * i as f64) * NANOMETER)
                .collect(),
            l_inter: 5.0 * NANOMETER,
        }
    }

    fn check_outside(&self, x: f64) -> Result<()> {
        if x > self.geom.half_width() && !x.is_nan() {
            Ok(())
        } else {
            Err(Error::Domain("qubit position must satisfy x > t_x/2"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    SpinWave,
    Qubit,
}

/// A Lorentzian line of the field-sweep spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceLine {
    /// Resonance field (T).
    pub b_res: f64,
    pub kind: LineKind,
    /// FWHM (G).
    pub width_g: f64,
    /// Peak height, arbitrary units.
    pub amplitude: f64,
}

/// Resonance of a qubit at `(x, 0, 0)`: the applied field must make up for
/// the (negative) stray field.
pub fn qubit_line(design: &RegisterDesign, x: f64) -> Result<ResonanceLine> {
    let b_res = if x.is_infinite() && x > 0.0 {
        field_from_frequency(design.nu, design.qubit.g_q)?
    } else {
        design.check_outside(x)?;
        field_from_frequency(design.nu, design.qubit.g_q)?
            - stray_bz(&design.geom, &design.mat, x, 0.0)?
    };
    Ok(ResonanceLine {
        b_res,
        kind: LineKind::Qubit,
        width_g: design.qubit.linewidth_g,
        amplitude: 1.0,
    })
}

/// Qubit lines for every configured position.
pub fn register_lines(design: &RegisterDesign) -> Result<Vec<ResonanceLine>> {
    design
        .positions
        .iter()
        .map(|&x| qubit_line(design, x))
        .collect()
}

/// Spectrum line of a spin-wave resonance. Its width is the ferromagnet's
/// linewidth converted to field; oscillator strengths are not modelled, so
/// the amplitude is 1.
pub fn spin_wave_resonance(line: &SpinWaveLine, mat: &MaterialParams) -> ResonanceLine {
    ResonanceLine {
        b_res: line.b_res,
        kind: LineKind::SpinWave,
        width_g: tesla_to_gauss(mat.linewidth_field()),
        amplitude: 1.0,
    }
}

/// `|g mu_B (dB_z/dx) l| / (mu_0 mu_B^2 g^2 / (4 pi l^3))`: gradient splitting
/// of neighbouring qubits over their dipolar coupling.
pub fn ising_ratio(design: &RegisterDesign, x: f64) -> Result<f64> {
    ising_ratio_scaled(design, x, 1.0)
}

/// [`ising_ratio`] with the dipolar energy multiplied by `dipolar_prefactor`,
/// for comparing against other coupling conventions.
pub fn ising_ratio_scaled(design: &RegisterDesign, x: f64, dipolar_prefactor: f64) -> Result<f64> {
    design.check_outside(x)?;
    if !(dipolar_prefactor > 0.0) {
        return Err(Error::Domain("dipolar prefactor must be positive"));
    }
    let g = design.qubit.g_q;
    let l = design.l_inter;
    let grad = stray_bz_gradient_x(&design.geom, &design.mat, x, 0.0)?;
    let splitting = (g * BOHR_MAGNETON * grad * l).abs();
    let dipolar =
        dipolar_prefactor * MU_0 * BOHR_MAGNETON * BOHR_MAGNETON * g * g / (4.0 * PI * l * l * l);
    Ok(splitting / dipolar)
}

/// Clearances of the qubit lines from the spin-wave lines.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapReport {
    /// Per qubit line: smallest `|b_q - b_sw|` (G).
    pub clearance_g: Vec<f64>,
    /// Per qubit line: every spin-wave line is further away than the margin
    /// plus the two half widths.
    pub passes: Vec<bool>,
    pub pass: bool,
}

pub fn overlap_check(
    qubit_lines: &[ResonanceLine],
    spinwave_lines: &[ResonanceLine],
    margin_g: f64,
) -> Result<OverlapReport> {
    if qubit_lines.is_empty() || spinwave_lines.is_empty() {
        return Err(Error::Domain(
            "overlap check needs qubit and spin-wave lines",
        ));
    }
    if !(margin_g >= 0.0) {
        return Err(Error::Domain("margin must be non-negative"));
    }
    let mut clearance_g = Vec::with_capacity(qubit_lines.len());
    let mut passes = Vec::with_capacity(qubit_lines.len());
    for q in qubit_lines {
        let mut best = f64::INFINITY;
        let mut ok = true;
        for s in spinwave_lines {
            let gap = tesla_to_gauss((q.b_res - s.b_res).abs());
            best = best.min(gap);
            if gap <= margin_g + 0.5 * (q.width_g + s.width_g) {
                ok = false;
            }
        }
        clearance_g.push(best);
        passes.push(ok);
    }
    let pass = passes.iter().all(|&p| p);
    Ok(OverlapReport {
        clearance_g,
        passes,
        pass,
    })
}

/// `floor(interval / (2 linewidth))`.
pub fn addressable_count(interval_g: f64, linewidth_g: f64) -> Result<u64> {
    addressable_count_with(interval_g, linewidth_g, DEFAULT_PACKING)
}

pub fn addressable_count_with(interval_g: f64, linewidth_g: f64, packing: f64) -> Result<u64> {
    if !(interval_g > 0.0 && linewidth_g > 0.0 && packing > 0.0) {
        return Err(Error::Domain(
            "interval, linewidth and packing must be positive",
        ));
    }
    Ok(libm::floor(interval_g / (packing * linewidth_g)) as u64)
}

/// Field interval (G) covered by a resonator of `bandwidth` Hz at g-factor `g`.
pub fn bandwidth_interval_g(bandwidth: f64, g: f64) -> Result<f64> {
    field_from_frequency(bandwidth, g).map(tesla_to_gauss)
}

/// Sum of unit-peak Lorentzians (times each amplitude) on `b_grid` (T).
pub fn absorption(lines: &[ResonanceLine], b_grid: &[f64]) -> Result<Vec<f64>> {
    if b_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("field grid must be increasing"));
    }
    if lines.iter().any(|l| !(l.width_g > 0.0)) {
        return Err(Error::ZeroWidthResonance);
    }
    Ok(b_grid
        .iter()
        .map(|&b| {
            lines
                .iter()
                .map(|l| {
                    let hw = 0.5 * gauss_to_tesla(l.width_g);
                    let d = b - l.b_res;
                    l.amplitude * hw * hw / (d * d + hw * hw)
                })
                .sum()
        })
        .collect())
}

/// Full field-sweep spectrum: the design's qubit lines plus the spin-wave
/// lines.
pub fn full_spectrum(
    design: &RegisterDesign,
    spinwave_lines: &[SpinWaveLine],
    b_grid: &[f64],
) -> Result<Vec<f64>> {
    let mut lines = register_lines(design)?;
    lines.extend(
        spinwave_lines
            .iter()
            .map(|l| spin_wave_resonance(l, &design.mat)),
    );
    absorption(&lines, b_grid)
}
