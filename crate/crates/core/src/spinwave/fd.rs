//! Finite-difference oracle.
//!
//! Each cell of the potential is split into `refine` (odd) sub-cells and the
//! operator is discretized with the standard 3-point stencil on the sub-cell
//! centres. Walls sit half a step outside the outermost nodes and are imposed
//! with ghost nodes. Symmetric potentials are again split into parity sectors.

use alloc::vec::Vec;

use super::tridiag::SymTridiag;
use super::{
    edge_weight, interleave, normalize, BoundaryCondition, ModeSet, ModeSolution, PotentialProfile,
    ORDER_SLACK,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    pub bc: BoundaryCondition,
    /// Sub-cells per potential cell; must be odd so a node sits on every
    /// cell centre.
    pub refine: usize,
    /// Eigenvalues above `max v + ceiling_above_max` are not returned.
    pub ceiling_above_max: f64,
}

impl Default for FdOptions {
    fn default() -> Self {
        FdOptions {
            bc: BoundaryCondition::Dirichlet,
            refine: 15,
            ceiling_above_max: 0.0,
        }
    }
}

struct Fine {
    v: Vec<f64>,
    /// `d_ex / h^2`
    c: f64,
}

fn fine_grid(pot: &PotentialProfile, refine: usize) -> Fine {
    let h = pot.dz / refine as f64;
    let v = pot
        .v
        .iter()
        .flat_map(|&x| core::iter::repeat_n(x, refine))
        .collect();
    Fine {
        v,
        c: pot.d_ex / (h * h),
    }
}

fn wall_diag(bc: BoundaryCondition, c: f64) -> f64 {
    match bc {
        BoundaryCondition::Dirichlet => 3.0 * c,
        BoundaryCondition::Neumann => c,
    }
}

fn full_matrix(f: &Fine, bc: BoundaryCondition) -> SymTridiag {
    let m = f.v.len();
    let mut diag: Vec<f64> = f.v.iter().map(|v| v + 2.0 * f.c).collect();
    diag[0] = f.v[0] + wall_diag(bc, f.c);
    diag[m - 1] = f.v[m - 1] + wall_diag(bc, f.c);
    SymTridiag {
        diag,
        off: alloc::vec![-f.c; m - 1],
    }
}

/// Half-domain matrix for one parity sector. For an odd node count the even
/// sector keeps the centre node, rescaled by `1/sqrt 2` to stay symmetric.
fn sector_matrix(f: &Fine, bc: BoundaryCondition, even: bool) -> SymTridiag {
    let m = f.v.len();
    let c = f.c;
    let half = m / 2;
    let (mut diag, off): (Vec<f64>, Vec<f64>);
    if m.is_multiple_of(2) {
        diag = f.v[..half].iter().map(|v| v + 2.0 * c).collect();
        off = alloc::vec![-c; half - 1];
        diag[half - 1] = f.v[half - 1] + if even { c } else { 3.0 * c };
    } else if even {
        diag = f.v[..=half].iter().map(|v| v + 2.0 * c).collect();
        let mut o = alloc::vec![-c; half];
        o[half - 1] = -core::f64::consts::SQRT_2 * c;
        off = o;
    } else {
        diag = f.v[..half].iter().map(|v| v + 2.0 * c).collect();
        off = alloc::vec![-c; half - 1];
    }
    diag[0] = f.v[0] + wall_diag(bc, c);
    SymTridiag { diag, off }
}

/// Sturm count of the full-domain FD matrix: eigenvalues strictly below `b`.
pub fn fd_count_below(pot: &PotentialProfile, b: f64, opts: &FdOptions) -> Result<usize> {
    check(opts)?;
    Ok(full_matrix(&fine_grid(pot, opts.refine), opts.bc).count_below(b))
}

fn check(opts: &FdOptions) -> Result<()> {
    if opts.refine == 0 || opts.refine.is_multiple_of(2) {
        return Err(Error::Domain("refinement factor must be odd"));
    }
    if !(opts.ceiling_above_max >= 0.0) {
        return Err(Error::Domain("invalid eigenvalue ceiling"));
    }
    Ok(())
}

pub fn fd_eigensolve(pot: &PotentialProfile, n_max: usize) -> Result<ModeSet> {
    fd_eigensolve_with(pot, n_max, &FdOptions::default())
}

/// Lowest `n_max` eigenmodes of the refined FD operator below the ceiling.
pub fn fd_eigensolve_with(
    pot: &PotentialProfile,
    n_max: usize,
    opts: &FdOptions,
) -> Result<ModeSet> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1"));
    }
    check(opts)?;
    let r = opts.refine;
    let fine = fine_grid(pot, r);
    let m = fine.v.len();
    let ceiling = pot.max() + opts.ceiling_above_max;

    let eigen = |t: &SymTridiag| -> Vec<(f64, Vec<f64>)> {
        let n_below = t.count_below(ceiling).min(n_max);
        (0..n_below)
            .map(|k| {
                let lambda = t.eigenvalue(k);
                (lambda, t.eigenvector(lambda))
            })
            .collect()
    };

    let full: Vec<(f64, Vec<f64>)> = if pot.is_symmetric() && m >= 4 {
        let half = m / 2;
        let expand = |vec: Vec<f64>, even: bool| -> Vec<f64> {
            let mut out = Vec::with_capacity(m);
            out.extend_from_slice(&vec[..half]);
            if m % 2 == 1 {
                out.push(if even {
                    core::f64::consts::SQRT_2 * vec[half]
                } else {
                    0.0
                });
            }
            let sign = if even { 1.0 } else { -1.0 };
            out.extend(vec[..half].iter().rev().map(|x| sign * x));
            out
        };
        let even: Vec<_> = eigen(&sector_matrix(&fine, opts.bc, true))
            .into_iter()
            .map(|(l, v)| (l, expand(v, true)))
            .collect();
        let odd: Vec<_> = eigen(&sector_matrix(&fine, opts.bc, false))
            .into_iter()
            .map(|(l, v)| (l, expand(v, false)))
            .collect();
        let (ne, no) = (even.len(), odd.len());
        // Each sector was cut at n_max; trim to a consistent alternation.
        let keep_odd = no.min(ne);
        let keep_even = ne.min(keep_odd + 1);
        interleave(
            even.into_iter().take(keep_even).collect(),
            odd.into_iter().take(keep_odd).collect(),
        )?
    } else {
        eigen(&full_matrix(&fine, opts.bc))
    };

    let mut modes = Vec::with_capacity(n_max);
    for (n_z, (b_n, vec)) in full.into_iter().take(n_max).enumerate() {
        if let Some(prev) = modes.last().map(|m: &ModeSolution| m.b_n) {
            if b_n < prev - ORDER_SLACK {
                return Err(Error::Resolution {
                    expected: n_z,
                    found: n_z - 1,
                });
            }
        }
        let mut psi: Vec<f64> = (0..pot.len()).map(|j| vec[j * r + (r - 1) / 2]).collect();
        normalize(&mut psi, pot.dz);
        let edge_weight = edge_weight(pot, &psi);
        modes.push(ModeSolution {
            n_z,
            b_n,
            psi,
            edge_weight,
        });
    }
    let truncated = modes.len() < n_max;
    Ok(ModeSet { modes, truncated })
}
