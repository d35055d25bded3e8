//! Transfer-matrix shooting for `-d psi'' + v psi = b psi` with piecewise
//! constant `v`.
//!
//! Symmetric potentials are solved in the two parity sectors on the half
//! domain (even: `psi'(0) = 0`, odd: `psi(0) = 0`). The even/odd partners of
//! the two edge wells are degenerate to far below double precision, so the
//! full-domain mismatch function has a double root there that no sign scan
//! can bracket.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{atan2, cos, cosh, floor, log, sin, sinh, sqrt};

use super::{
    edge_weight, interleave, normalize, BoundaryCondition, ModeSet, ModeSolution, PotentialProfile,
    ORDER_SLACK,
};
use crate::{Error, Result};

/// Scan and boundary settings for [`tm_eigensolve_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmOptions {
    pub bc: BoundaryCondition,
    /// Scan ceiling above `max v` (T). Zero keeps only modes bound by the
    /// potential.
    pub ceiling_above_max: f64,
    /// Number of scan steps across `[min v, max v]`.
    pub scan_steps: usize,
}

impl Default for TmOptions {
    fn default() -> Self {
        TmOptions {
            bc: BoundaryCondition::Dirichlet,
            ceiling_above_max: 0.0,
            scan_steps: 5000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum End {
    /// `u = 0`
    Value,
    /// `u' = 0`
    Slope,
}

impl End {
    fn start(self) -> (f64, f64) {
        match self {
            End::Value => (0.0, 1.0),
            End::Slope => (1.0, 0.0),
        }
    }
}

impl From<BoundaryCondition> for End {
    fn from(bc: BoundaryCondition) -> Self {
        match bc {
            BoundaryCondition::Dirichlet => End::Value,
            BoundaryCondition::Neumann => End::Slope,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Seg {
    v: f64,
    len: f64,
}

/// Advances `(u, u')` across one constant-potential segment.
fn advance(u: f64, du: f64, seg: Seg, b: f64, d: f64) -> (f64, f64) {
    let q = (b - seg.v) / d;
    let s = seg.len;
    if q > 0.0 {
        let k = sqrt(q);
        let (sn, cs) = (sin(k * s), cos(k * s));
        (u * cs + du / k * sn, -u * k * sn + du * cs)
    } else if q < 0.0 {
        let k = sqrt(-q);
        let (sh, ch) = (sinh(k * s), cosh(k * s));
        (u * ch + du / k * sh, u * k * sh + du * ch)
    } else {
        (u + du * s, du)
    }
}

/// One shooting problem: segments from left to right with end conditions.
struct Problem {
    /// Half cells, so every cell centre is a segment boundary.
    segs: Vec<Seg>,
    /// Same potential with equal neighbours merged, for fast scans.
    coarse: Vec<Seg>,
    left: End,
    right: End,
    d: f64,
    /// Length used to weight `u'` against `u`.
    ell: f64,
}

impl Problem {
    fn new(segs: Vec<Seg>, left: End, right: End, d: f64, ell: f64) -> Self {
        let mut coarse: Vec<Seg> = Vec::new();
        for s in &segs {
            match coarse.last_mut() {
                Some(last) if last.v == s.v => last.len += s.len,
                _ => coarse.push(*s),
            }
        }
        Problem {
            segs,
            coarse,
            left,
            right,
            d,
            ell,
        }
    }

    fn rescale(&self, u: &mut f64, du: &mut f64) -> f64 {
        let n = u.abs() + du.abs() * self.ell;
        if n > 1e100 || (n < 1e-100 && n > 0.0) {
            *u /= n;
            *du /= n;
            log(n)
        } else {
            0.0
        }
    }

    /// Right-end mismatch; its zeros are the eigenvalues.
    fn mismatch(&self, b: f64) -> f64 {
        let (mut u, mut du) = self.left.start();
        for &seg in &self.coarse {
            (u, du) = advance(u, du, seg, b, self.d);
            self.rescale(&mut u, &mut du);
        }
        match self.right {
            End::Value => u,
            End::Slope => du,
        }
    }

    /// Number of eigenvalues strictly below `b`, from the node count of the
    /// shooting solution (Prufer angle bookkeeping per segment).
    fn count_below(&self, b: f64) -> usize {
        let (mut u, mut du) = self.left.start();
        let mut zeros: i64 = 0;
        for &seg in &self.coarse {
            let q = (b - seg.v) / self.d;
            let (u1, du1) = advance(u, du, seg, b, self.d);
            if q > 0.0 {
                let k = sqrt(q);
                let phi = atan2(u, du / k);
                zeros += (floor((phi + k * seg.len) / PI) - floor(phi / PI)) as i64;
            } else if u != 0.0 && (u1 == 0.0 || u1.signum() != u.signum()) {
                zeros += 1;
            }
            u = u1;
            du = du1;
            self.rescale(&mut u, &mut du);
        }
        let zeros = zeros.max(0) as usize;
        match self.right {
            End::Value => zeros,
            End::Slope => zeros + usize::from(u * du < 0.0),
        }
    }

    /// Eigenvalues in `[lo, hi]`, verified against the node count.
    fn eigenvalues(&self, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
        let mut roots = Vec::new();
        let n_steps = libm::ceil((hi - lo) / step).max(1.0) as usize;
        let at = |i: usize| {
            if i == n_steps {
                hi
            } else {
                lo + i as f64 * step
            }
        };
        let mut b_prev = lo;
        let mut f_prev = self.mismatch(lo);
        if f_prev == 0.0 {
            roots.push(lo);
        }
        for i in 1..=n_steps {
            let b = at(i);
            let f = self.mismatch(b);
            if f == 0.0 {
                roots.push(b);
            } else if f_prev != 0.0 && f.signum() != f_prev.signum() {
                roots.push(self.bisect(b_prev, b, f_prev));
            }
            b_prev = b;
            f_prev = f;
        }
        let expected =
            self.count_below(hi) + usize::from(self.mismatch(hi) == 0.0) - self.count_below(lo);
        if expected != roots.len() {
            return Err(Error::Resolution {
                expected,
                found: roots.len(),
            });
        }
        Ok(roots)
    }

    /// Bisection down to adjacent doubles.
    fn bisect(&self, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f = self.mismatch(mid);
            if f == 0.0 {
                return mid;
            }
            if f.signum() == f_lo.signum() {
                lo = mid;
                f_lo = f;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// States `(u, u', log scale)` at every segment boundary, shooting
    /// forward over `segs` from `start`.
    fn shoot(segs: &[Seg], start: (f64, f64), b: f64, d: f64, ell: f64) -> Vec<(f64, f64, f64)> {
        let (mut u, mut du) = start;
        let mut ls = 0.0;
        let mut out = Vec::with_capacity(segs.len() + 1);
        out.push((u, du, ls));
        for &seg in segs {
            (u, du) = advance(u, du, seg, b, d);
            let n = u.abs() + du.abs() * ell;
            if n > 1e100 || (n < 1e-100 && n > 0.0) {
                u /= n;
                du /= n;
                ls += log(n);
            }
            out.push((u, du, ls));
        }
        out
    }

    /// Values of the eigenfunction at every segment boundary, from shooting
    /// inward from both ends and matching at the boundary with the largest
    /// `v - b`.
    fn profile(&self, b: f64) -> Vec<f64> {
        let nseg = self.segs.len();
        let mut m = 1;
        for i in 1..nseg {
            if self.segs[i - 1].v > self.segs[m - 1].v {
                m = i;
            }
        }
        let left = Self::shoot(&self.segs[..m], self.left.start(), b, self.d, self.ell);
        let rev: Vec<Seg> = self.segs[m..].iter().rev().copied().collect();
        let right = Self::shoot(&rev, self.right.start(), b, self.d, self.ell);

        let (ul, dul, lsl) = left[m];
        let (ur, dur_t, lsr) = right[nseg - m];
        // right shot runs in t = -z
        let dur = -dur_t;
        let w2 = self.ell * self.ell;
        let denom = ur * ur + w2 * dur * dur;
        let alpha = if denom > 0.0 {
            (ul * ur + w2 * dul * dur) / denom
        } else {
            0.0
        };

        let mut values = Vec::with_capacity(nseg + 1);
        for &(u, _, ls) in &left[..=m] {
            values.push(u * libm::exp(ls - lsl));
        }
        for i in (m + 1)..=nseg {
            let (u, _, ls) = right[nseg - i];
            values.push(alpha * u * libm::exp(ls - lsr));
        }
        values
    }
}

fn half_cells(v: &[f64], dz: f64) -> Vec<Seg> {
    let mut segs = Vec::with_capacity(2 * v.len());
    for &x in v {
        segs.push(Seg {
            v: x,
            len: 0.5 * dz,
        });
        segs.push(Seg {
            v: x,
            len: 0.5 * dz,
        });
    }
    segs
}

enum Layout {
    Full,
    Even,
    Odd,
}

fn problem(pot: &PotentialProfile, bc: BoundaryCondition, layout: &Layout) -> Problem {
    let n = pot.len();
    let wall = End::from(bc);
    let ell = pot.dz;
    match layout {
        Layout::Full => Problem::new(half_cells(&pot.v, pot.dz), wall, wall, pot.d_ex, ell),
        Layout::Even | Layout::Odd => {
            let mut segs = half_cells(&pot.v[..n / 2], pot.dz);
            if n % 2 == 1 {
                segs.push(Seg {
                    v: pot.v[n / 2],
                    len: 0.5 * pot.dz,
                });
            }
            let right = if matches!(layout, Layout::Even) {
                End::Slope
            } else {
                End::Value
            };
            Problem::new(segs, wall, right, pot.d_ex, ell)
        }
    }
}

/// Profile samples at cell centres: the odd-indexed segment boundaries.
fn cell_samples(values: &[f64]) -> Vec<f64> {
    values.iter().skip(1).step_by(2).copied().collect()
}

fn mirror(pot: &PotentialProfile, half: &[f64], sign: f64) -> Vec<f64> {
    let n = pot.len();
    let mut psi = Vec::with_capacity(n);
    let outer = &half[..n / 2];
    psi.extend_from_slice(outer);
    if n % 2 == 1 {
        psi.push(if sign > 0.0 { half[n / 2] } else { 0.0 });
    }
    psi.extend(outer.iter().rev().map(|p| sign * p));
    psi
}

/// Lowest `n_max` eigenmodes with Dirichlet faces and the bound-state scan.
pub fn tm_eigensolve(pot: &PotentialProfile, n_max: usize) -> Result<ModeSet> {
    tm_eigensolve_with(pot, n_max, &TmOptions::default())
}

/// Lowest `n_max` eigenmodes with eigenvalues in `[min v, max v + ceiling]`.
///
/// Returns fewer (with `truncated` set) when the window holds fewer modes.
pub fn tm_eigensolve_with(
    pot: &PotentialProfile,
    n_max: usize,
    opts: &TmOptions,
) -> Result<ModeSet> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1"));
    }
    if opts.scan_steps == 0 || !(opts.ceiling_above_max >= 0.0) {
        return Err(Error::Domain("invalid scan settings"));
    }
    let lo = pot.min();
    let hi = pot.max() + opts.ceiling_above_max;
    let spread = pot.max() - lo;
    let step = if spread > 0.0 { spread } else { hi - lo } / opts.scan_steps as f64;
    if !(step > 0.0) {
        // flat potential and no ceiling: nothing can be bound
        return Ok(ModeSet {
            modes: Vec::new(),
            truncated: true,
        });
    }

    let solve = |layout: Layout| -> Result<Vec<(f64, Vec<f64>)>> {
        let p = problem(pot, opts.bc, &layout);
        let roots = p.eigenvalues(lo, hi, step)?;
        Ok(roots
            .into_iter()
            .take(n_max)
            .map(|b| {
                let samples = cell_samples(&p.profile(b));
                let psi = match layout {
                    Layout::Full => samples,
                    Layout::Even => mirror(pot, &samples, 1.0),
                    Layout::Odd => mirror(pot, &samples, -1.0),
                };
                (b, psi)
            })
            .collect())
    };

    let raw = if pot.is_symmetric() && pot.len() >= 2 {
        interleave(solve(Layout::Even)?, solve(Layout::Odd)?)?
    } else {
        solve(Layout::Full)?
    };

    let mut modes = Vec::with_capacity(n_max);
    for (n_z, (b_n, mut psi)) in raw.into_iter().take(n_max).enumerate() {
        if let Some(prev) = modes.last().map(|m: &ModeSolution| m.b_n) {
            if b_n < prev - ORDER_SLACK {
                return Err(Error::Resolution {
                    expected: n_z,
                    found: n_z - 1,
                });
            }
        }
        normalize(&mut psi, pot.dz);
        if psi.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("mode profile"));
        }
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
