use super::*;
use crate::units::{tesla_to_gauss, MaterialParams, StripeGeometry, NANOMETER};
use core::f64::consts::PI;

fn reference(n: usize) -> PotentialProfile {
    build_potential(
        &StripeGeometry::reference(),
        &MaterialParams::permalloy(),
        0.0,
        n,
    )
    .unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn box_potential(n: usize, v0: f64) -> PotentialProfile {
    PotentialProfile::from_values(800.0 * NANOMETER, alloc::vec![v0; n], 7.8e-17).unwrap()
}

#[test]
fn potential_shape() {
    let p = reference(1601);
    assert_eq!(p.len(), 1601);
    let centre = tesla_to_gauss(p.v[800]);
    assert!((centre + 895.0).abs() < 2.0, "{centre}");
    for j in 0..800 {
        assert_eq!(p.v[j], p.v[1600 - j]);
        assert_eq!(p.z[j], -p.z[1600 - j]);
    }
    assert!(p.is_symmetric());
    let min = p.min();
    assert!(p.v[0] == min && p.v[1600] == min);
    assert!((p.z[0] + 0.5 * p.w_z - 0.5 * p.dz).abs() < 1e-20);
    let g = StripeGeometry::reference();
    assert!(build_potential(&g, &MaterialParams::permalloy(), 0.0, 800).is_err());
}

#[test]
fn box_closed_form_dirichlet() {
    let v0 = -0.05;
    let p = box_potential(801, v0);
    let opts = TmOptions {
        ceiling_above_max: 0.12,
        ..TmOptions::default()
    };
    let set = tm_eigensolve_with(&p, 8, &opts).unwrap();
    assert_eq!(set.modes.len(), 8);
    let fd = fd_eigensolve_with(
        &p,
        8,
        &FdOptions {
            ceiling_above_max: 0.12,
            ..FdOptions::default()
        },
    )
    .unwrap();
    for (n, (m, f)) in set.modes.iter().zip(&fd.modes).enumerate() {
        let k = (n + 1) as f64 * PI / p.w_z;
        let exact = v0 + p.d_ex * k * k;
        assert!((m.b_n - exact).abs() < 1e-12 * exact.abs().max(p.d_ex * k * k));
        // second order: relative kinetic error ~ (k h)^2 / 12 on the fine grid
        let h = p.dz / 15.0;
        let bound = p.d_ex * k * k * (k * h) * (k * h) / 6.0;
        assert!((f.b_n - exact).abs() < bound, "n={n}");
        assert_eq!(m.sign_changes(), n);
    }
}

#[test]
fn box_fd_error_is_second_order() {
    let v0 = 0.0;
    let k = PI / (800.0 * NANOMETER);
    let err = |refine: usize| {
        let p = box_potential(801, v0);
        let opts = FdOptions {
            refine,
            ceiling_above_max: 0.01,
            ..FdOptions::default()
        };
        let b = fd_eigensolve_with(&p, 1, &opts).unwrap().modes[0].b_n;
        (b - p.d_ex * k * k).abs()
    };
    let ratio = err(3) / err(9);
    assert!((ratio - 9.0).abs() < 0.3, "{ratio}");
}

#[test]
fn box_closed_form_neumann() {
    let v0 = 0.02;
    let p = box_potential(900, v0);
    let opts = TmOptions {
        bc: BoundaryCondition::Neumann,
        ceiling_above_max: 0.05,
        ..TmOptions::default()
    };
    let set = tm_eigensolve_with(&p, 6, &opts).unwrap();
    for (n, m) in set.modes.iter().enumerate() {
        let k = n as f64 * PI / p.w_z;
        assert!((m.b_n - (v0 + p.d_ex * k * k)).abs() < 1e-13, "n={n}");
    }
}

#[test]
fn transfer_matrix_matches_fd_oracle() {
    let p = reference(1601);
    let opts = TmOptions {
        ceiling_above_max: 0.08,
        ..TmOptions::default()
    };
    let tm = tm_eigensolve_with(&p, 10, &opts).unwrap();
    let fd = fd_eigensolve_with(
        &p,
        10,
        &FdOptions {
            ceiling_above_max: 0.08,
            ..FdOptions::default()
        },
    )
    .unwrap();
    assert_eq!(tm.modes.len(), 10);
    assert_eq!(fd.modes.len(), 10);
    for (a, b) in tm.modes.iter().zip(&fd.modes) {
        assert!(rel(a.b_n, b.b_n) < 1e-6, "n={} {} {}", a.n_z, a.b_n, b.b_n);
        let overlap: f64 = a.psi.iter().zip(&b.psi).map(|(x, y)| x * y).sum::<f64>() * p.dz;
        assert!(overlap.abs() > 0.999, "n={} overlap {overlap}", a.n_z);
    }
}

#[test]
fn mode_invariants() {
    let p = reference(1601);
    let set = tm_eigensolve(&p, 12).unwrap();
    let modes = &set.modes;
    assert!(set.truncated, "only a handful of modes are bound");
    assert!(modes.len() >= 4);
    for w in modes.windows(2) {
        assert!(w[1].b_n >= w[0].b_n - 1e-10);
    }
    for (i, m) in modes.iter().enumerate() {
        assert_eq!(m.sign_changes(), m.n_z);
        assert!((0.0..=1.0).contains(&m.edge_weight));
        let n = m.psi.len();
        for j in 0..n {
            assert!((m.psi[j].abs() - m.psi[n - 1 - j].abs()).abs() < 1e-8);
        }
        for other in &modes[i..] {
            let s: f64 = m
                .psi
                .iter()
                .zip(&other.psi)
                .map(|(a, b)| a * b)
                .sum::<f64>()
                * p.dz;
            let expect = if other.n_z == m.n_z { 1.0 } else { 0.0 };
            assert!((s - expect).abs() < 1e-8, "<{}|{}> = {s}", m.n_z, other.n_z);
        }
    }
    assert!(modes[0].edge_weight > 0.5 && modes[1].edge_weight > 0.5);
    let mean = p.v.iter().sum::<f64>() / p.len() as f64;
    let central = modes
        .iter()
        .min_by(|a, b| (a.b_n - mean).abs().total_cmp(&(b.b_n - mean).abs()))
        .unwrap();
    assert!(central.edge_weight < 0.3, "{}", central.edge_weight);
}

#[test]
fn rigid_shift() {
    let g = StripeGeometry::reference();
    let mat = MaterialParams::permalloy();
    let base = tm_eigensolve(&reference(1201), 6).unwrap();
    for b0 in [0.37, 1.2147, -0.21] {
        let p = build_potential(&g, &mat, b0, 1201).unwrap();
        let shifted = tm_eigensolve(&p, 6).unwrap();
        assert_eq!(shifted.modes.len(), base.modes.len());
        for (a, b) in shifted.modes.iter().zip(&base.modes) {
            assert!((a.b_n - b.b_n - b0).abs() < 1e-10);
        }
    }
}

#[test]
fn grid_convergence() {
    let coarse = tm_eigensolve(&reference(3201), 6).unwrap();
    let fine = tm_eigensolve(&reference(6402), 6).unwrap();
    for (a, b) in coarse.modes.iter().zip(&fine.modes) {
        assert!(
            rel(a.b_n, b.b_n) < 1e-6,
            "n={} {}",
            a.n_z,
            rel(a.b_n, b.b_n)
        );
    }
}

#[test]
fn asymmetric_potential_uses_full_domain() {
    // tilted box: two solvers must still agree
    let n = 1001;
    let v: alloc::vec::Vec<f64> = (0..n).map(|j| -0.1 + 0.08 * j as f64 / n as f64).collect();
    let p = PotentialProfile::from_values(800.0 * NANOMETER, v, 7.8e-17).unwrap();
    assert!(!p.is_symmetric());
    let tm = tm_eigensolve(&p, 8).unwrap();
    let fd = fd_eigensolve(&p, 8).unwrap();
    assert!(tm.modes.len() >= 5);
    assert_eq!(tm.modes.len(), fd.modes.len());
    for (a, b) in tm.modes.iter().zip(&fd.modes) {
        assert!(rel(a.b_n, b.b_n) < 1e-6);
        assert_eq!(a.sign_changes(), a.n_z);
        assert!(a.b_n > b.b_n - 1.0 && a.edge_weight <= 1.0);
    }
}

#[test]
fn sturm_count_matches_fd_spectrum() {
    let p = reference(1001);
    let opts = FdOptions {
        ceiling_above_max: 0.05,
        ..FdOptions::default()
    };
    let fd = fd_eigensolve_with(&p, 30, &opts).unwrap();
    for m in &fd.modes {
        let b = m.b_n + 1e-7;
        let below = fd.modes.iter().filter(|x| x.b_n < b).count();
        assert_eq!(fd_count_below(&p, b, &opts).unwrap(), below);
    }
    assert_eq!(fd_count_below(&p, p.min(), &opts).unwrap(), 0);
}

#[test]
fn coarse_scan_is_detected() {
    let p = reference(1001);
    let opts = TmOptions {
        scan_steps: 1,
        ceiling_above_max: 0.1,
        ..TmOptions::default()
    };
    assert!(matches!(
        tm_eigensolve_with(&p, 10, &opts),
        Err(crate::Error::Resolution { .. })
    ));
}

#[test]
fn neumann_changes_eigenvalues() {
    let p = reference(1201);
    let d = tm_eigensolve(&p, 4).unwrap();
    let opts = TmOptions {
        bc: BoundaryCondition::Neumann,
        ..TmOptions::default()
    };
    let n = tm_eigensolve_with(&p, 4, &opts).unwrap();
    let fdn = fd_eigensolve_with(
        &p,
        4,
        &FdOptions {
            bc: BoundaryCondition::Neumann,
            ..FdOptions::default()
        },
    )
    .unwrap();
    assert!(n.modes[0].b_n < d.modes[0].b_n);
    for (a, b) in n.modes.iter().zip(&fdn.modes) {
        assert!(rel(a.b_n, b.b_n) < 1e-6);
    }
}

#[test]
fn lines_and_gap() {
    let g = StripeGeometry::reference();
    let mat = MaterialParams::permalloy();
    let modes = tm_eigensolve(&reference(1601), 20).unwrap().modes;
    let lines = assemble_lines(&modes, &g, &mat, 34e9, 3).unwrap();
    for l in &lines {
        if l.n_x > 1 {
            let prev = lines
                .iter()
                .find(|p| p.n_z == l.n_z && p.n_x == l.n_x - 1)
                .unwrap();
            assert!(l.b_res < prev.b_res);
        }
        assert!(l.b_res > 0.0);
    }
    let gap = highest_gap(&lines).unwrap();
    let mut rev = lines.clone();
    rev.reverse();
    rev.rotate_left(3);
    assert_eq!(highest_gap(&rev).unwrap(), gap);
    assert!(gap.separation > DEGENERACY_TOL);
    assert!(highest_gap(&lines[..1]).is_err());
    assert!(assemble_lines(&modes, &g, &mat, 34e9, 0).is_err());
}

#[test]
fn softer_exchange_narrows_gap() {
    let g = StripeGeometry::reference();
    let mat = MaterialParams::permalloy();
    let mut soft = mat.clone();
    soft.a_exch /= 4.0;
    let gap_for = |m: &MaterialParams| {
        let p = build_potential(&g, m, 0.0, 1601).unwrap();
        let modes = tm_eigensolve(&p, 40).unwrap().modes;
        let lines = assemble_lines(&modes, &g, m, 34e9, DEFAULT_N_X_MAX).unwrap();
        highest_gap(&lines).unwrap().separation
    };
    assert!(gap_for(&soft) < gap_for(&mat));
}
