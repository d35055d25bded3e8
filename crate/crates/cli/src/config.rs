//! JSON run configuration. Every key has a default reproducing the reference
//! design, unknown keys are rejected, and physical ranges are checked before
//! any computation starts.

#![allow(non_snake_case)]

use std::path::{Path, PathBuf};

use serde::Deserialize;
use stripe_core::register::RegisterDesign;
use stripe_core::spinwave::{BoundaryCondition, SpectrumSettings};
use stripe_core::units::{ev_to_joule, MaterialParams, QubitSpec, StripeGeometry, NANOMETER};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Geometry {
    pub t_x_nm: f64,
    pub w_z_nm: f64,
    pub l_y_nm: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            t_x_nm: 100.0,
            w_z_nm: 800.0,
            l_y_nm: 100_000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Material {
    pub preset: String,
    pub b_sat_T: Option<f64>,
    pub a_exch_J_per_m: Option<f64>,
    pub g_fm: Option<f64>,
    pub de_fmr_ueV: Option<f64>,
}

impl Default for Material {
    fn default() -> Self {
        Material {
            preset: "permalloy".into(),
            b_sat_T: None,
            a_exch_J_per_m: None,
            g_fm: None,
            de_fmr_ueV: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Qubit {
    pub g_q: f64,
    pub linewidth_G: f64,
}

impl Default for Qubit {
    fn default() -> Self {
        Qubit {
            g_q: 2.0,
            linewidth_G: 1.0,
        }
    }
}

/// Either explicit positions or a regular row `x_start + i pitch`. With
/// neither given, the reference row of 16 qubits from 199 nm at 5 nm pitch.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Sites {
    pub positions_nm: Option<Vec<f64>>,
    pub x_start_nm: Option<f64>,
    pub pitch_nm: Option<f64>,
    pub count: Option<usize>,
}

impl Sites {
    fn positions(&self) -> Result<Vec<f64>, ConfigError> {
        let row = (self.x_start_nm, self.pitch_nm, self.count);
        let (x0, dx, n) = match (&self.positions_nm, row) {
            (Some(p), (None, None, None)) => {
                if p.is_empty() {
                    return invalid("qubits.positions_nm is empty");
                }
                return Ok(p.iter().map(|x| x * NANOMETER).collect());
            }
            (None, (None, None, None)) => (199.0, 5.0, 16),
            (None, (Some(x0), Some(dx), Some(n))) => (x0, dx, n),
            _ => return invalid("qubits: give either positions_nm or x_start_nm/pitch_nm/count"),
        };
        if n == 0 || !(dx > 0.0) {
            return invalid("qubit row needs count >= 1 and pitch > 0");
        }
        Ok((0..n).map(|i| (x0 + dx * i as f64) * NANOMETER).collect())
    }
}

/// Inclusive `start, start + step, ...` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub const fn new(start: f64, stop: f64, step: f64) -> Self {
        Range { start, stop, step }
    }

    pub fn values(&self, what: &str) -> Result<Vec<f64>, ConfigError> {
        if !(self.step > 0.0 && self.start.is_finite() && self.stop.is_finite())
            || self.stop < self.start
        {
            return invalid(format!("{what}: empty or malformed range"));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        if n > 5_000_000 {
            return invalid(format!("{what}: range too large"));
        }
        Ok((0..n).map(|i| self.start + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldmapGrids {
    pub x_nm: Range,
    pub z_nm: Range,
    pub profile_x_nm: Range,
    pub c_x_nm: Range,
    /// Half range of the homogeneity integral.
    pub c_half_range_nm: f64,
}

impl Default for FieldmapGrids {
    fn default() -> Self {
        FieldmapGrids {
            x_nm: Range::new(-995.0, 995.0, 10.0),
            z_nm: Range::new(-795.0, 795.0, 10.0),
            profile_x_nm: Range::new(51.0, 1000.0, 1.0),
            c_x_nm: Range::new(55.0, 1000.0, 5.0),
            c_half_range_nm: 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bc {
    Dirichlet,
    Neumann,
}

impl From<Bc> for BoundaryCondition {
    fn from(bc: Bc) -> Self {
        match bc {
            Bc::Dirichlet => BoundaryCondition::Dirichlet,
            Bc::Neumann => BoundaryCondition::Neumann,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpinWave {
    pub bc: Bc,
    pub n_grid: usize,
    pub n_modes: usize,
    pub n_x_max: usize,
    /// Odd refinement factor of the finite-difference cross-check.
    pub fd_refine: usize,
}

impl Default for SpinWave {
    fn default() -> Self {
        SpinWave {
            bc: Bc::Dirichlet,
            n_grid: 1601,
            n_modes: 64,
            n_x_max: 2,
            fd_refine: 15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Spectrum {
    pub start_T: f64,
    pub stop_T: f64,
    pub step_G: f64,
    /// Extra single qubits drawn for comparison; `null` means infinitely far.
    pub reference_qubits_nm: Vec<Option<f64>>,
}

impl Default for Spectrum {
    fn default() -> Self {
        Spectrum {
            start_T: 0.7,
            stop_T: 1.5,
            step_G: 0.2,
            reference_qubits_nm: vec![None, Some(500.0)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Register {
    pub margin_G: f64,
    pub packing: f64,
    pub bandwidth_GHz: f64,
    /// Multiplies the dipolar energy in the second reported Ising ratio.
    pub dipolar_prefactor: f64,
    /// Design check requires every Ising ratio to reach this value.
    pub ising_min_ratio: f64,
}

impl Default for Register {
    fn default() -> Self {
        Register {
            margin_G: 10.0,
            packing: 2.0,
            bandwidth_GHz: 1.0,
            dipolar_prefactor: 1.0,
            ising_min_ratio: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorCfg {
    pub x_nm: f64,
    pub T_K: f64,
    pub T1_s: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Decoherence {
    pub anchor: AnchorCfg,
    pub alpha_phi: f64,
    pub x_nm: Range,
    pub temperatures_K: Vec<f64>,
    pub T_K: Range,
    pub x_fixed_nm: f64,
}

impl Default for Decoherence {
    fn default() -> Self {
        Decoherence {
            anchor: AnchorCfg {
                x_nm: 230.0,
                T_K: 2.0,
                T1_s: 3.4,
            },
            alpha_phi: 1.0 / 32.0,
            x_nm: Range::new(150.0, 1000.0, 10.0),
            temperatures_K: vec![3.0, 30.0, 300.0],
            T_K: Range::new(1.0, 300.0, 1.0),
            x_fixed_nm: 230.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub geometry: Geometry,
    pub material: Material,
    pub qubit: Qubit,
    pub frequency_GHz: f64,
    pub qubits: Sites,
    pub l_inter_nm: f64,
    pub fieldmap: FieldmapGrids,
    pub spinwave: SpinWave,
    pub spectrum: Spectrum,
    pub register: Register,
    pub decoherence: Decoherence,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            geometry: Geometry::default(),
            material: Material::default(),
            qubit: Qubit::default(),
            frequency_GHz: 34.0,
            qubits: Sites::default(),
            l_inter_nm: 5.0,
            fieldmap: FieldmapGrids::default(),
            spinwave: SpinWave::default(),
            spectrum: Spectrum::default(),
            register: Register::default(),
            decoherence: Decoherence::default(),
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    /// Parses and validates.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg = Self::parse(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses without range checks, so that command-line overrides can be
    /// applied before [`RunConfig::validate`].
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn geometry(&self) -> Result<StripeGeometry, ConfigError> {
        let g = &self.geometry;
        let geom = StripeGeometry::new(
            g.t_x_nm * NANOMETER,
            g.w_z_nm * NANOMETER,
            g.l_y_nm * NANOMETER,
        )
        .or_else(|e| invalid(format!("geometry: {e}")))?;
        geom.check_infinite_stripe()
            .or_else(|e| invalid(format!("geometry: {e}")))?;
        Ok(geom)
    }

    pub fn material(&self) -> Result<MaterialParams, ConfigError> {
        let m = &self.material;
        let Some(mut mat) = MaterialParams::preset(&m.preset) else {
            return invalid(format!("unknown material preset {:?}", m.preset));
        };
        if let Some(v) = m.b_sat_T {
            mat.b_sat = v;
        }
        if let Some(v) = m.a_exch_J_per_m {
            mat.a_exch = v;
        }
        if let Some(v) = m.g_fm {
            mat.g_fm = v;
        }
        if let Some(v) = m.de_fmr_ueV {
            mat.de_fmr = ev_to_joule(v * 1e-6);
        }
        mat.validate()
            .or_else(|e| invalid(format!("material: {e}")))?;
        Ok(mat)
    }

    pub fn design(&self) -> Result<RegisterDesign, ConfigError> {
        let qubit = QubitSpec::new(self.qubit.g_q, self.qubit.linewidth_G)
            .or_else(|e| invalid(format!("qubit: {e}")))?;
        RegisterDesign::new(
            self.geometry()?,
            self.material()?,
            qubit,
            self.frequency_GHz * 1e9,
            self.qubits.positions()?,
            self.l_inter_nm * NANOMETER,
        )
        .or_else(|e| invalid(format!("register: {e}")))
    }

    pub fn spectrum_settings(&self) -> SpectrumSettings {
        SpectrumSettings {
            n_grid: self.spinwave.n_grid,
            bc: self.spinwave.bc.into(),
            n_modes: self.spinwave.n_modes,
            n_x_max: self.spinwave.n_x_max,
        }
    }

    /// Range and consistency checks on everything a command may touch.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.design()?;
        let sw = &self.spinwave;
        if sw.n_grid < stripe_core::spinwave::MIN_GRID {
            return invalid("spinwave.n_grid must be at least 801");
        }
        if sw.n_modes == 0 || sw.n_x_max == 0 {
            return invalid("spinwave.n_modes and n_x_max must be positive");
        }
        if sw.fd_refine == 0 || sw.fd_refine.is_multiple_of(2) {
            return invalid("spinwave.fd_refine must be odd");
        }
        let f = &self.fieldmap;
        for (r, what) in [
            (f.x_nm, "fieldmap.x_nm"),
            (f.z_nm, "fieldmap.z_nm"),
            (f.profile_x_nm, "fieldmap.profile_x_nm"),
            (f.c_x_nm, "fieldmap.c_x_nm"),
        ] {
            r.values(what)?;
        }
        let half_t = 0.5 * self.geometry.t_x_nm;
        if f.profile_x_nm.start <= half_t || f.c_x_nm.start <= half_t {
            return invalid("fieldmap profiles must start outside the stripe");
        }
        if !(f.c_half_range_nm > 0.0 && f.c_half_range_nm < 0.5 * self.geometry.w_z_nm) {
            return invalid("fieldmap.c_half_range_nm must lie inside the stripe depth");
        }
        let s = &self.spectrum;
        if !(s.step_G > 0.0 && s.start_T > 0.0 && s.stop_T > s.start_T) {
            return invalid("spectrum: need 0 < start_T < stop_T and step_G > 0");
        }
        if (s.stop_T - s.start_T) / (s.step_G * 1e-4) > 5e6 {
            return invalid("spectrum: grid too large");
        }
        if s.reference_qubits_nm
            .iter()
            .flatten()
            .any(|&x| !(x > half_t))
        {
            return invalid("spectrum.reference_qubits_nm must lie outside the stripe");
        }
        let r = &self.register;
        if !(r.margin_G >= 0.0
            && r.packing > 0.0
            && r.bandwidth_GHz > 0.0
            && r.dipolar_prefactor > 0.0)
            || !(r.ising_min_ratio >= 0.0)
        {
            return invalid("register: margin, packing, bandwidth and prefactor must be positive");
        }
        let d = &self.decoherence;
        if !(d.anchor.T1_s > 0.0 && d.anchor.T_K > 0.0 && d.anchor.x_nm > half_t) {
            return invalid("decoherence.anchor: need T1_s > 0, T_K > 0 and x outside the stripe");
        }
        if !(d.alpha_phi >= 0.0) {
            return invalid("decoherence.alpha_phi must be non-negative");
        }
        let xs = d.x_nm.values("decoherence.x_nm")?;
        if xs[0] <= half_t || !(d.x_fixed_nm > half_t) {
            return invalid("decoherence positions must lie outside the stripe");
        }
        let ts = d.T_K.values("decoherence.T_K")?;
        if d.temperatures_K.is_empty() || d.temperatures_K.iter().chain(&ts).any(|&t| !(t > 0.0)) {
            return invalid("decoherence temperatures must be positive");
        }
        Ok(())
    }
}
