//! The five subcommands. Each writes its files into `out` and reports
//! whether the design passed (only `design-check` can fail).

#![allow(non_snake_case)]

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use stripe_core::decoherence::{self, Anchor};
use stripe_core::magnetostatics::{
    find_x_optim_with, homogeneity_c, stray_bz, stray_bz_gradient_x, stray_field,
};
use stripe_core::register::{
    self, addressable_count_with, bandwidth_interval_g, ising_ratio, ising_ratio_scaled,
    overlap_check, qubit_line, register_lines, spin_wave_resonance, LineKind, RegisterDesign,
    ResonanceLine,
};
use stripe_core::spinwave::{
    fd_eigensolve_with, highest_gap, solve_spectrum, FdOptions, HighestGap, MagnonSpectrum,
    SpinWaveLine,
};
use stripe_core::units::{tesla_to_gauss, NANOMETER, PLOT_Z_OFFSET};

use crate::config::RunConfig;
use crate::output::{write_json, Csv};

pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub pass: bool,
}

impl Outcome {
    fn ok(files: Vec<PathBuf>) -> Self {
        Outcome { files, pass: true }
    }
}

fn nm(x: f64) -> f64 {
    x / NANOMETER
}

fn g(b: f64) -> f64 {
    tesla_to_gauss(b)
}

fn to_m(xs: Vec<f64>) -> Vec<f64> {
    xs.into_iter().map(|x| x * NANOMETER).collect()
}

/// Validated inputs shared by the commands.
struct Setup {
    cfg: RunConfig,
    design: RegisterDesign,
}

impl Setup {
    fn new(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Setup {
            design: cfg.design()?,
            cfg: cfg.clone(),
        })
    }

    fn spectrum(&self) -> Result<MagnonSpectrum> {
        let d = &self.design;
        solve_spectrum(&d.geom, &d.mat, d.nu, &self.cfg.spectrum_settings())
            .context("spin-wave solve failed")
    }
}

fn prepare(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))
}

pub fn fieldmap(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let s = Setup::new(cfg)?;
    prepare(out)?;
    let (geom, mat) = (&s.design.geom, &s.design.mat);
    let f = &cfg.fieldmap;
    let mut files = Vec::new();

    let xs = to_m(f.x_nm.values("fieldmap.x_nm")?);
    let zs = to_m(f.z_nm.values("fieldmap.z_nm")?);
    let mut csv = Csv::create(
        out,
        "fieldmap.csv",
        &["x_nm", "z_nm", "Bz_T", "Bz_G", "Bx_T", "Bx_G"],
    )?;
    for &x in &xs {
        for &z in &zs {
            let p = stray_field(geom, mat, x, z)?;
            csv.row(&[nm(x), nm(z), p.b_z, g(p.b_z), p.b_x, g(p.b_x)])?;
        }
    }
    files.push(csv.finish()?);

    let px = to_m(f.profile_x_nm.values("fieldmap.profile_x_nm")?);
    let mut csv = Csv::create(out, "profile_bz_x.csv", &["x_nm", "Bz_T", "Bz_G"])?;
    for &x in &px {
        let b = stray_bz(geom, mat, x, 0.0)?;
        csv.row(&[nm(x), b, g(b)])?;
    }
    files.push(csv.finish()?);

    let mut csv = Csv::create(
        out,
        "gradient_x.csv",
        &["x_nm", "dBz_dx_T_per_m", "dBz_dx_G_per_nm"],
    )?;
    for &x in &px {
        let d = stray_bz_gradient_x(geom, mat, x, 0.0)?;
        csv.row(&[nm(x), d, g(d) * NANOMETER])?;
    }
    files.push(csv.finish()?);

    let z_half = f.c_half_range_nm * NANOMETER;
    let mut csv = Csv::create(out, "c_of_x.csv", &["x_nm", "C_T_m", "C_G_nm"])?;
    for x in to_m(f.c_x_nm.values("fieldmap.c_x_nm")?) {
        let c = homogeneity_c(geom, mat, x, z_half)?.c_value;
        csv.row(&[nm(x), c, g(c) / NANOMETER])?;
    }
    files.push(csv.finish()?);

    let x_opt = find_x_optim_with(geom, mat, z_half, 0.1 * NANOMETER)?;
    let bz = stray_bz(geom, mat, x_opt, 0.0)?;
    let grad = stray_bz_gradient_x(geom, mat, x_opt, 0.0)?;
    #[derive(Serialize)]
    struct XOptim {
        x_optim_nm: f64,
        c_half_range_nm: f64,
        bz_T: f64,
        bz_G: f64,
        gradient_T_per_m: f64,
        gradient_G_per_nm: f64,
    }
    let rec = XOptim {
        x_optim_nm: nm(x_opt),
        c_half_range_nm: f.c_half_range_nm,
        bz_T: bz,
        bz_G: g(bz),
        gradient_T_per_m: grad,
        gradient_G_per_nm: g(grad) * NANOMETER,
    };
    files.push(write_json(out, "xoptim.json", &rec)?);
    Ok(Outcome::ok(files))
}

pub fn modes(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let s = Setup::new(cfg)?;
    let spec = s.spectrum()?;
    prepare(out)?;
    let pot = &spec.potential;
    let mut files = Vec::new();

    let mut csv = Csv::create(out, "potential.csv", &["z_nm", "zstar_nm", "v_T", "v_G"])?;
    for (&z, &v) in pot.z.iter().zip(&pot.v) {
        csv.row(&[nm(z), nm(z + PLOT_Z_OFFSET), v, g(v)])?;
    }
    files.push(csv.finish()?);

    let fd_opts = FdOptions {
        bc: cfg.spinwave.bc.into(),
        refine: cfg.spinwave.fd_refine,
        ..FdOptions::default()
    };
    let fd = fd_eigensolve_with(pot, spec.modes.len(), &fd_opts)
        .context("finite-difference cross-check failed")?;
    let mut csv = Csv::create(
        out,
        "modes.csv",
        &[
            "n_z",
            "n_x",
            "edge_localized",
            "b_n_T",
            "b_res_T",
            "b_res_G",
            "edge_weight",
            "b_n_fd_T",
            "tm_fd_rel_diff",
        ],
    )?;
    for line in &spec.lines {
        let b_n = spec.modes[line.n_z].b_n;
        let fd_b = fd.modes.get(line.n_z).map_or(f64::NAN, |m| m.b_n);
        let rel = ((b_n - fd_b) / fd_b).abs();
        csv.row_mixed(
            &[line.n_z, line.n_x, usize::from(line.edge_weight > 0.5)],
            &[b_n, line.b_res, g(line.b_res), line.edge_weight, fd_b, rel],
        )?;
    }
    files.push(csv.finish()?);

    let mut header = vec!["z_nm".to_string(), "zstar_nm".to_string()];
    header.extend(spec.modes.iter().map(|m| format!("psi_{}", m.n_z)));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = Csv::create(out, "profiles.csv", &header)?;
    let mut row = Vec::with_capacity(header.len());
    for (j, &z) in pot.z.iter().enumerate() {
        row.clear();
        row.push(nm(z));
        row.push(nm(z + PLOT_Z_OFFSET));
        row.extend(spec.modes.iter().map(|m| m.psi[j] * NANOMETER.sqrt()));
        csv.row(&row)?;
    }
    files.push(csv.finish()?);
    Ok(Outcome::ok(files))
}

#[derive(Serialize)]
struct LineRecord {
    x_nm: Option<f64>,
    b_res_T: f64,
    b_res_G: f64,
    width_G: f64,
}

#[derive(Serialize)]
struct SpinWaveRecord {
    n_z: usize,
    n_x: usize,
    b_res_T: f64,
    b_res_G: f64,
    width_G: f64,
    edge_weight: f64,
}

#[derive(Serialize)]
struct WindowRecord {
    lower_T: f64,
    upper_T: f64,
    width_G: f64,
    lower_mode: [usize; 2],
    upper_mode: [usize; 2],
}

impl From<&HighestGap> for WindowRecord {
    fn from(h: &HighestGap) -> Self {
        WindowRecord {
            lower_T: h.lower.b_res,
            upper_T: h.upper.b_res,
            width_G: g(h.separation),
            lower_mode: [h.lower.n_z, h.lower.n_x],
            upper_mode: [h.upper.n_z, h.upper.n_x],
        }
    }
}

fn line_record(x: Option<f64>, l: &ResonanceLine) -> LineRecord {
    LineRecord {
        x_nm: x.map(nm),
        b_res_T: l.b_res,
        b_res_G: g(l.b_res),
        width_G: l.width_g,
    }
}

fn spin_wave_records(lines: &[SpinWaveLine], design: &RegisterDesign) -> Vec<SpinWaveRecord> {
    let mut sorted = lines.to_vec();
    sorted.sort_by(|a, b| {
        b.b_res
            .total_cmp(&a.b_res)
            .then(a.n_z.cmp(&b.n_z))
            .then(a.n_x.cmp(&b.n_x))
    });
    sorted
        .iter()
        .map(|l| SpinWaveRecord {
            n_z: l.n_z,
            n_x: l.n_x,
            b_res_T: l.b_res,
            b_res_G: g(l.b_res),
            width_G: spin_wave_resonance(l, &design.mat).width_g,
            edge_weight: l.edge_weight,
        })
        .collect()
}

pub fn spectrum(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let s = Setup::new(cfg)?;
    let d = &s.design;
    let spec = s.spectrum()?;
    prepare(out)?;
    let sp = &cfg.spectrum;

    let qubits = register_lines(d)?;
    let mut references = Vec::new();
    for x in &sp.reference_qubits_nm {
        let x_m = x.map_or(f64::INFINITY, |x| x * NANOMETER);
        references.push((*x, qubit_line(d, x_m)?));
    }
    let mut all: Vec<ResonanceLine> = qubits.clone();
    all.extend(references.iter().map(|(_, l)| *l));
    all.extend(spec.lines.iter().map(|l| spin_wave_resonance(l, &d.mat)));

    let step = sp.step_G * 1e-4;
    let n = ((sp.stop_T - sp.start_T) / step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..n).map(|i| sp.start_T + i as f64 * step).collect();
    let a = register::absorption(&all, &grid)?;
    let mut csv = Csv::create(out, "spectrum.csv", &["B_T", "B_G", "absorption"])?;
    for (&b, &v) in grid.iter().zip(&a) {
        csv.row(&[b, g(b), v])?;
    }
    let mut files = vec![csv.finish()?];

    #[derive(Serialize)]
    struct Lines {
        qubits: Vec<LineRecord>,
        reference_qubits: Vec<LineRecord>,
        spin_waves: Vec<SpinWaveRecord>,
        spin_wave_free_window: Option<WindowRecord>,
    }
    let rec = Lines {
        qubits: d
            .positions
            .iter()
            .zip(&qubits)
            .map(|(&x, l)| line_record(Some(x), l))
            .collect(),
        reference_qubits: references
            .iter()
            .map(|(x, l)| LineRecord {
                x_nm: *x,
                ..line_record(None, l)
            })
            .collect(),
        spin_waves: spin_wave_records(&spec.lines, d),
        spin_wave_free_window: highest_gap(&spec.lines)
            .ok()
            .as_ref()
            .map(WindowRecord::from),
    };
    files.push(write_json(out, "lines.json", &rec)?);
    Ok(Outcome::ok(files))
}

pub fn design_check(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let s = Setup::new(cfg)?;
    let d = &s.design;
    let spec = s.spectrum()?;
    prepare(out)?;
    let r = &cfg.register;

    let qubits = register_lines(d)?;
    debug_assert!(qubits.iter().all(|l| l.kind == LineKind::Qubit));
    let sw: Vec<ResonanceLine> = spec
        .lines
        .iter()
        .map(|l| spin_wave_resonance(l, &d.mat))
        .collect();
    let overlap = overlap_check(&qubits, &sw, r.margin_G)?;

    #[derive(Serialize)]
    struct QubitRecord {
        x_nm: f64,
        b_res_T: f64,
        b_res_G: f64,
        clearance_G: f64,
        clear: bool,
        ising_ratio: f64,
        ising_ratio_scaled: f64,
    }
    let mut per_qubit = Vec::with_capacity(qubits.len());
    for (i, (&x, l)) in d.positions.iter().zip(&qubits).enumerate() {
        per_qubit.push(QubitRecord {
            x_nm: nm(x),
            b_res_T: l.b_res,
            b_res_G: g(l.b_res),
            clearance_G: overlap.clearance_g[i],
            clear: overlap.passes[i],
            ising_ratio: ising_ratio(d, x)?,
            ising_ratio_scaled: ising_ratio_scaled(d, x, r.dipolar_prefactor)?,
        });
    }
    let ising_pass = per_qubit
        .iter()
        .all(|q| q.ising_ratio_scaled >= r.ising_min_ratio);

    let window = highest_gap(&spec.lines).ok();
    let addressable_window = match &window {
        Some(w) => Some(addressable_count_with(
            g(w.separation),
            d.qubit.linewidth_g,
            r.packing,
        )?),
        None => None,
    };
    let bw_g = bandwidth_interval_g(r.bandwidth_GHz * 1e9, d.qubit.g_q)?;
    let addressable_bandwidth = addressable_count_with(bw_g, d.qubit.linewidth_g, r.packing)?;

    #[derive(Serialize)]
    struct Report {
        pass: bool,
        overlap_pass: bool,
        ising_pass: bool,
        margin_G: f64,
        ising_min_ratio: f64,
        dipolar_prefactor: f64,
        packing: f64,
        spin_wave_free_window: Option<WindowRecord>,
        addressable_window: Option<u64>,
        bandwidth_GHz: f64,
        bandwidth_interval_G: f64,
        addressable_bandwidth: u64,
        qubits: Vec<QubitRecord>,
    }
    let pass = overlap.pass && ising_pass;
    let rec = Report {
        pass,
        overlap_pass: overlap.pass,
        ising_pass,
        margin_G: r.margin_G,
        ising_min_ratio: r.ising_min_ratio,
        dipolar_prefactor: r.dipolar_prefactor,
        packing: r.packing,
        spin_wave_free_window: window.as_ref().map(WindowRecord::from),
        addressable_window,
        bandwidth_GHz: r.bandwidth_GHz,
        bandwidth_interval_G: bw_g,
        addressable_bandwidth,
        qubits: per_qubit,
    };
    let files = vec![write_json(out, "report.json", &rec)?];
    Ok(Outcome { files, pass })
}

pub fn decoherence(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let s = Setup::new(cfg)?;
    let d = &s.design;
    let spec = s.spectrum()?;
    prepare(out)?;
    let dc = &cfg.decoherence;

    let anchor = Anchor {
        x: dc.anchor.x_nm * NANOMETER,
        temp: dc.anchor.T_K,
        t1: dc.anchor.T1_s,
    };
    let mut model = decoherence::calibrate(d, &spec.lines, &spec.modes, anchor)?;
    model.alpha_phi = dc.alpha_phi;

    let header = ["x_nm", "T_K", "T1_s", "T2_s"];
    let xs = to_m(dc.x_nm.values("decoherence.x_nm")?);
    let rows = decoherence::sweep_x(&model, d, &spec.lines, &spec.modes, &xs, &dc.temperatures_K)?;
    let mut csv = Csv::create(out, "t_vs_x.csv", &header)?;
    for p in &rows {
        csv.row(&[nm(p.x), p.temp, p.t1, p.t2])?;
    }
    let mut files = vec![csv.finish()?];

    let temps = dc.T_K.values("decoherence.T_K")?;
    let x = dc.x_fixed_nm * NANOMETER;
    let rows = decoherence::sweep_temp(&model, d, &spec.lines, &spec.modes, x, &temps)?;
    let mut csv = Csv::create(out, "t_vs_T.csv", &header)?;
    for p in &rows {
        csv.row(&[nm(p.x), p.temp, p.t1, p.t2])?;
    }
    files.push(csv.finish()?);
    Ok(Outcome::ok(files))
}
