//! Finite-difference reference eigensolver.
//!
//! The operator `-hbar^2 d^2/dx^2 + v` is discretized on a uniform grid with
//! Dirichlet truncation far in the forbidden region. After scaling by
//! `h^2 / hbar^2` every scheme becomes a symmetric tridiagonal matrix `T(mu)`
//! with unit off-diagonal (except at a Robin wall), whose negative-pivot count
//! is the number of grid eigenvalues below `mu`. Eigenvalues are isolated by
//! bisection on that count, the grid is doubled, and successive Richardson
//! extrapolants are compared for the error estimate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{Domain, Potential, Side, SingularKind};
use crate::quantize::BoundaryCondition;
use crate::weight::Weight;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const MIN_INTERVALS: usize = 2048;
pub const MAX_INTERVALS: usize = 1 << 22;
/// Grid points per local wavelength at the top of the window.
const POINTS_PER_WAVELENGTH: f64 = 64.0;
/// Required `int (v - lambda)^(1/2) / hbar` between a turning point and the truncation bound.
const DECAY_ACTION: f64 = 30.0;
/// Required `v - lambda_max` at the truncation bounds.
pub const TRUNCATION_MARGIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Three-point Laplacian, error `O(h^2)`.
    #[default]
    SecondOrder,
    /// Numerov-corrected three-point scheme, error `O(h^4)` for smooth `v`.
    Numerov,
}

impl Scheme {
    fn order(self) -> i32 {
        match self {
            Scheme::SecondOrder => 2,
            Scheme::Numerov => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    pub tol: f64,
    pub scheme: Scheme,
    pub max_intervals: usize,
    /// Overrides the automatic truncation bounds.
    pub truncation: Option<(f64, f64)>,
    /// Condition at the wall of a half-line problem.
    pub wall: BoundaryCondition,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            scheme: Scheme::SecondOrder,
            max_intervals: MAX_INTERVALS,
            truncation: None,
            wall: BoundaryCondition::Dirichlet,
        }
    }
}

/// Uniform grid `x_min + i h`, `i = 0..=intervals`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub intervals: usize,
}

impl Grid {
    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / self.intervals as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.intervals {
            self.x_max
        } else {
            self.x_min + self.step() * i as f64
        }
    }
}

/// Scaled tridiagonal discretization on one grid.
#[derive(Debug, Clone)]
pub struct Discretization {
    grid: Grid,
    scheme: Scheme,
    /// Index of the first unknown node.
    first: usize,
    /// Potential at the unknown nodes.
    v: Vec<f64>,
    /// `h^2 / hbar^2`
    scale: f64,
    /// Extra diagonal term at the first unknown (Robin wall).
    wall_diag: f64,
    /// Squared off-diagonal between unknowns 0 and 1.
    wall_off2: f64,
}

fn node_potential(pot: &Potential, x: f64) -> f64 {
    match pot.singular_points().iter().find(|s| s.x == x) {
        Some(s) if s.kind == SingularKind::Jump => {
            let l = pot.eval_unchecked(x, Side::Left).v;
            let r = pot.eval_unchecked(x, Side::Right).v;
            0.5 * (l + r)
        }
        _ => pot.v(x),
    }
}

impl Discretization {
    pub fn new(
        pot: &Potential,
        hbar: f64,
        grid: Grid,
        scheme: Scheme,
        wall: Option<BoundaryCondition>,
    ) -> Result<Self> {
        let h = grid.step();
        let (first, wall_diag, wall_off2) = match wall {
            Some(BoundaryCondition::Robin { b }) => {
                if scheme == Scheme::Numerov {
                    return Err(Error::InvalidParameter(
                        "Numerov scheme supports Dirichlet walls only".into(),
                    ));
                }
                (0, 2.0 * h * b, 2.0)
            }
            _ => (1, 0.0, 1.0),
        };
        let v = (first..grid.intervals)
            .map(|i| node_potential(pot, grid.node(i)))
            .collect();
        Ok(Self {
            grid,
            scheme,
            first,
            v,
            scale: h * h / (hbar * hbar),
            wall_diag,
            wall_off2,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn unknowns(&self) -> usize {
        self.v.len()
    }

    /// Numerov weight `1 - h^2 (v - mu) / (12 hbar^2)`; 1 for the plain scheme.
    fn weight(&self, i: usize, mu: f64) -> f64 {
        match self.scheme {
            Scheme::SecondOrder => 1.0,
            Scheme::Numerov => 1.0 - self.scale * (self.v[i] - mu) / 12.0,
        }
    }

    fn diag(&self, i: usize, mu: f64) -> f64 {
        let g = self.scale * (self.v[i] - mu);
        let base = match self.scheme {
            Scheme::SecondOrder => 2.0 + g,
            Scheme::Numerov => 2.0 + g / self.weight(i, mu),
        };
        if i == 0 {
            base + self.wall_diag
        } else {
            base
        }
    }

    fn off2(&self, i: usize) -> f64 {
        if i == 0 {
            self.wall_off2
        } else {
            1.0
        }
    }

    /// True when the Sturm count is meaningful at `mu` (all Numerov weights positive).
    pub fn admissible(&self, mu: f64) -> bool {
        self.scheme == Scheme::SecondOrder || (0..self.v.len()).all(|i| self.weight(i, mu) > 0.0)
    }

    /// Number of grid eigenvalues strictly below `mu`.
    pub fn sturm_count(&self, mu: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.v.len() {
            let d = self.diag(i, mu);
            q = if i == 0 { d } else { d - self.off2(i - 1) / q };
            if q == 0.0 {
                q = -f64::EPSILON;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th grid eigenvalue (0-based) inside `[lo, hi]`.
    pub fn eigenvalue(&self, index: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
        if !(self.sturm_count(lo) <= index && self.sturm_count(hi) > index) {
            return Err(Error::RootFinding {
                lo,
                hi,
                reason: format!("bracket does not isolate grid eigenvalue {index}"),
            });
        }
        loop {
            let m = 0.5 * (lo + hi);
            if m <= lo || m >= hi || hi - lo <= 4.0 * f64::EPSILON * m.abs() {
                return Ok(m);
            }
            if self.sturm_count(m) > index {
                hi = m;
            } else {
                lo = m;
            }
        }
    }

    /// Grid eigenvector for the eigenvalue `mu` by inverse iteration, as values
    /// of `psi` at every grid node (boundary nodes included), trapezoid-normalized.
    pub fn eigenvector(&self, mu: f64) -> Result<Vec<f64>> {
        let n = self.v.len();
        let shift = mu - 1e-10 * mu.abs().max(1.0);
        let diag: Vec<f64> = (0..n).map(|i| self.diag(i, shift)).collect();
        let off: Vec<f64> = (0..n.saturating_sub(1)).map(|i| -self.off2(i).sqrt()).collect();
        let mut y = vec![1.0; n];
        for _ in 0..4 {
            y = solve_tridiagonal(&off, &diag, &off, &y)?;
            let m = y.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            y.iter_mut().for_each(|t| *t /= m);
        }
        // Residual of T(mu) y = 0, relative to the diagonal scale.
        let residual = (0..n)
            .map(|i| {
                let mut r = self.diag(i, mu) * y[i];
                if i > 0 {
                    r += off[i - 1] * y[i - 1];
                }
                if i + 1 < n {
                    r += off[i] * y[i + 1];
                }
                r.abs()
            })
            .fold(0.0, f64::max);
        if residual > 1e-6 {
            return Err(Error::InverseIteration { residual });
        }
        let mut psi = vec![0.0; self.grid.intervals + 1];
        for i in 0..n {
            psi[self.first + i] = y[i] / self.weight(i, mu);
        }
        if self.first == 0 {
            // Robin wall: the symmetrized unknown is psi_0 / sqrt(2).
            psi[0] *= std::f64::consts::SQRT_2;
        }
        let h = self.grid.step();
        let norm: f64 = h
            * (0.5 * psi[0] * psi[0]
                + psi[1..psi.len() - 1].iter().map(|p| p * p).sum::<f64>()
                + 0.5 * psi[psi.len() - 1].powi(2));
        let s = norm.sqrt();
        psi.iter_mut().for_each(|p| *p /= s);
        // Sign: the outermost significant lobe on the right is positive.
        let peak = psi.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if let Some(last) = psi.iter().rev().find(|p| p.abs() > 1e-3 * peak) {
            if *last < 0.0 {
                psi.iter_mut().for_each(|p| *p = -*p);
            }
        }
        Ok(psi)
    }
}

/// Solves a tridiagonal system with partial pivoting.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    // Row i holds (a[i], b[i], c[i]) on columns i, i+1, i+2 after elimination.
    let mut a = diag.to_vec();
    let mut b: Vec<f64> = (0..n).map(|i| if i + 1 < n { sup[i] } else { 0.0 }).collect();
    let mut c = vec![0.0; n];
    let mut r = rhs.to_vec();
    for i in 0..n.saturating_sub(1) {
        let l = sub[i];
        if l.abs() > a[i].abs() {
            // Swap rows i and i+1.
            let (ai1, bi1) = (a[i + 1], b[i + 1]);
            let (ai, bi, ci) = (a[i], b[i], c[i]);
            a[i] = l;
            b[i] = ai1;
            c[i] = bi1;
            r.swap(i, i + 1);
            let f = ai / l;
            a[i + 1] = bi - f * ai1;
            b[i + 1] = ci - f * bi1;
            r[i + 1] -= f * r[i];
        } else {
            let f = if a[i] == 0.0 { 0.0 } else { l / a[i] };
            a[i + 1] -= f * b[i];
            b[i + 1] -= f * c[i];
            r[i + 1] -= f * r[i];
        }
    }
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = r[i];
        if i + 1 < n {
            s -= b[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= c[i] * x[i + 2];
        }
        let p = if a[i].abs() < tiny { tiny } else { a[i] };
        x[i] = s / p;
    }
    if x.iter().any(|t| !t.is_finite()) {
        return Err(Error::InverseIteration {
            residual: f64::INFINITY,
        });
    }
    Ok(x)
}

/// Boundary conditions used by the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum OracleBoundary {
    DirichletBoth,
    HalfLine { wall: BoundaryCondition },
}

/// Converged reference eigenvalues inside a window.
#[derive(Debug, Clone)]
pub struct OracleSpectrum {
    pub hbar: f64,
    /// Finest grid used.
    pub grid: Grid,
    pub window: (f64, f64),
    /// Richardson-extrapolated eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Per-eigenvalue `|R_k - R_(k-1)|` of successive extrapolants.
    pub est_error: Vec<f64>,
    /// Eigenvalues on the finest grid, before extrapolation.
    pub grid_eigenvalues: Vec<f64>,
    /// Eigenvalues on the grid with half as many intervals.
    pub coarse_eigenvalues: Vec<f64>,
    /// Global index (number of eigenvalues below) of `eigenvalues[0]`.
    pub first_index: usize,
    pub bc: OracleBoundary,
    pub scheme: Scheme,
    potential: Potential,
}

/// Outer edge where `v >= level + margin` and the decay action reaches `DECAY_ACTION`.
fn decay_bound(pot: &Potential, level: f64, hbar: f64, start: f64, dir: f64) -> f64 {
    let mut x = start;
    let mut step = 1e-3f64.max(hbar * 1e-2);
    let mut action = 0.0;
    let mut prev = (pot.v(x) - level).max(0.0).sqrt();
    for _ in 0..1_000_000 {
        let nx = x + dir * step;
        let cur = (pot.v(nx) - level).max(0.0).sqrt();
        action += 0.5 * (prev + cur) * step;
        x = nx;
        prev = cur;
        if pot.v(x) >= level + TRUNCATION_MARGIN && action >= DECAY_ACTION * hbar {
            break;
        }
        step *= 1.05;
    }
    x
}

fn default_bounds(pot: &Potential, hbar: f64, top: f64) -> Result<(f64, f64)> {
    let edges = pot.well_edges(top)?;
    let hi = decay_bound(pot, top, hbar, edges.right(), 1.0);
    let lo = match pot.domain() {
        Domain::HalfLine => 0.0,
        Domain::FullLine => decay_bound(pot, top, hbar, edges.left(), -1.0),
    };
    Ok((lo, hi))
}

fn initial_grid(pot: &Potential, hbar: f64, window: (f64, f64), bounds: (f64, f64), scheme: Scheme) -> Grid {
    let (lo, hi) = bounds;
    let len = hi - lo;
    let samples = 4096;
    let vmin = (0..=samples)
        .map(|i| pot.v(lo + len * i as f64 / samples as f64))
        .fold(f64::INFINITY, f64::min);
    let k = ((window.1 - vmin).max(1e-12)).sqrt() / hbar;
    let wavelength = 2.0 * std::f64::consts::PI / k;
    let mut intervals = MIN_INTERVALS.max((POINTS_PER_WAVELENGTH * len / wavelength).ceil() as usize);
    if scheme == Scheme::Numerov {
        // Keeps every Numerov weight positive across the truncated domain.
        let vmax = pot.v(lo).max(pot.v(hi));
        let hmax = hbar * (6.0 / (vmax - vmin).max(1e-12)).sqrt();
        intervals = intervals.max((len / hmax).ceil() as usize);
    }
    let mut grid = Grid {
        x_min: lo,
        x_max: hi,
        intervals,
    };
    if pot.domain() == Domain::FullLine {
        // Put a node exactly on the first jump; doubling keeps it a node.
        if let Some(s) = pot.singular_points().iter().find(|s| s.x > lo && s.x < hi) {
            let h = grid.step();
            let m = ((s.x - lo) / h).round();
            let shift = s.x - (lo + m * h);
            grid.x_min += shift;
            grid.x_max += shift;
        }
    }
    grid
}

/// Converged eigenvalues of the truncated problem inside `window`.
pub fn solve_spectrum(pot: &Potential, hbar: f64, window: (f64, f64), opts: &OracleOptions) -> Result<OracleSpectrum> {
    if !(hbar > 0.0) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    if !(window.0 < window.1) {
        return Err(Error::EmptyWindow {
            lo: window.0,
            hi: window.1,
        });
    }
    if !(opts.tol >= 1e-10) {
        return Err(Error::InvalidParameter(format!(
            "oracle tolerance {} below 1e-10",
            opts.tol
        )));
    }
    let (wall, bc) = match pot.domain() {
        Domain::FullLine => (None, OracleBoundary::DirichletBoth),
        Domain::HalfLine => (Some(opts.wall), OracleBoundary::HalfLine { wall: opts.wall }),
    };
    let bounds = match opts.truncation {
        Some(b) => b,
        None => default_bounds(pot, hbar, window.1)?,
    };
    if pot.domain() == Domain::FullLine && pot.v(bounds.0) < window.1 + TRUNCATION_MARGIN
        || pot.v(bounds.1) < window.1 + TRUNCATION_MARGIN
    {
        return Err(Error::TruncationEdge { lambda: window.1 });
    }
    let mut grid = initial_grid(pot, hbar, window, bounds, opts.scheme);
    let factor = 2f64.powi(opts.scheme.order());

    let disc = Discretization::new(pot, hbar, grid, opts.scheme, wall)?;
    let first = disc.sturm_count(window.0);
    let count = disc.sturm_count(window.1) - first;
    let indices: Vec<usize> = (first..first + count).collect();
    let mut history: Vec<Vec<f64>> = Vec::new();
    let mut extrapolated: Vec<Vec<f64>> = Vec::new();
    let span = window.1 - window.0;
    loop {
        let disc = Discretization::new(pot, hbar, grid, opts.scheme, wall)?;
        let (lo0, hi0) = (window.0 - span, window.1 + span);
        if !disc.admissible(lo0) {
            return Err(Error::InvalidParameter("grid too coarse for the Numerov scheme".into()));
        }
        let prev = history.last().cloned();
        let values: Vec<f64> = indices
            .par_iter()
            .enumerate()
            .map(|(j, &idx)| {
                if let Some(p) = &prev {
                    let guess = p[j];
                    let w =
                        1e-6 * guess.abs().max(1.0) + 2.0 * (guess - extrapolated.last().map_or(guess, |e| e[j])).abs();
                    let (lo, hi) = (guess - w, guess + w);
                    if let Ok(v) = disc.eigenvalue(idx, lo, hi) {
                        return Ok(v);
                    }
                }
                disc.eigenvalue(idx, lo0, hi0)
            })
            .collect::<Result<_>>()?;
        if let Some(p) = &history.last() {
            extrapolated.push(
                values
                    .iter()
                    .zip(p.iter())
                    .map(|(f, c)| (factor * f - c) / (factor - 1.0))
                    .collect(),
            );
        }
        history.push(values);
        if extrapolated.len() >= 2 {
            let r1 = &extrapolated[extrapolated.len() - 1];
            let r0 = &extrapolated[extrapolated.len() - 2];
            let err: Vec<f64> = r1.iter().zip(r0).map(|(a, b)| (a - b).abs()).collect();
            let worst = err.iter().copied().fold(0.0, f64::max);
            if worst <= opts.tol {
                let keep: Vec<usize> = (0..r1.len())
                    .filter(|&j| r1[j] > window.0 && r1[j] < window.1)
                    .collect();
                let finest = &history[history.len() - 1];
                let coarse = &history[history.len() - 2];
                return Ok(OracleSpectrum {
                    hbar,
                    grid,
                    window,
                    eigenvalues: keep.iter().map(|&j| r1[j]).collect(),
                    est_error: keep.iter().map(|&j| err[j]).collect(),
                    grid_eigenvalues: keep.iter().map(|&j| finest[j]).collect(),
                    coarse_eigenvalues: keep.iter().map(|&j| coarse[j]).collect(),
                    first_index: keep.first().map_or(first, |&j| indices[j]),
                    bc,
                    scheme: opts.scheme,
                    potential: pot.clone(),
                });
            }
            if grid.intervals * 2 > opts.max_intervals {
                let prev_worst = if extrapolated.len() >= 3 {
                    let r_1 = &extrapolated[extrapolated.len() - 3];
                    r0.iter().zip(r_1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
                } else {
                    f64::NAN
                };
                return Err(Error::OracleNonConvergence {
                    points: grid.intervals,
                    last: worst,
                    previous: prev_worst,
                });
            }
        }
        grid.intervals *= 2;
    }
}

/// A grid function with the node coordinates it lives on.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub x: Vec<f64>,
    pub psi: Vec<f64>,
    pub lambda: f64,
    /// Global index, equal to the number of nodes of `psi`.
    pub index: usize,
}

impl GridFunction {
    /// Linear interpolation, zero outside the grid.
    pub fn interpolate(&self, x: f64) -> f64 {
        let n = self.x.len();
        if x < self.x[0] || x > self.x[n - 1] {
            return 0.0;
        }
        let h = (self.x[n - 1] - self.x[0]) / (n - 1) as f64;
        let i = (((x - self.x[0]) / h).floor() as usize).min(n - 2);
        let t = (x - self.x[i]) / h;
        self.psi[i] * (1.0 - t) + self.psi[i + 1] * t
    }

    /// Sign changes, ignoring entries below `1e-10` of the peak.
    pub fn sign_changes(&self) -> usize {
        let peak = self.psi.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let mut last = 0.0;
        let mut n = 0;
        for &p in &self.psi {
            if p.abs() <= 1e-10 * peak {
                continue;
            }
            if last != 0.0 && p.signum() != last {
                n += 1;
            }
            last = p.signum();
        }
        n
    }

    /// `int w psi^2` with the trapezoid rule in `psi^2`, splitting panels at the
    /// breaks of `w` and sampling `w` at sub-panel midpoints.
    pub fn integrate_weight(&self, w: &Weight) -> f64 {
        let mut total = 0.0;
        let breaks = w.breaks();
        for i in 0..self.x.len() - 1 {
            let (x0, x1) = (self.x[i], self.x[i + 1]);
            let (p0, p1) = (self.psi[i] * self.psi[i], self.psi[i + 1] * self.psi[i + 1]);
            let mut cuts = vec![x0];
            cuts.extend(breaks.iter().copied().filter(|&b| b > x0 && b < x1));
            cuts.push(x1);
            for s in cuts.windows(2) {
                let m = 0.5 * (s[0] + s[1]);
                let t = (m - x0) / (x1 - x0);
                let avg = p0 * (1.0 - t) + p1 * t;
                total += (s[1] - s[0]) * w.eval(m) * avg;
            }
        }
        total
    }
}

impl OracleSpectrum {
    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Global indices of the returned eigenvalues.
    pub fn indices(&self) -> std::ops::Range<usize> {
        self.first_index..self.first_index + self.eigenvalues.len()
    }

    fn wall(&self) -> Option<BoundaryCondition> {
        match self.bc {
            OracleBoundary::DirichletBoth => None,
            OracleBoundary::HalfLine { wall } => Some(wall),
        }
    }
}

fn vector_on(spec: &OracleSpectrum, k: usize, grid: Grid, mu: f64) -> Result<GridFunction> {
    if k >= spec.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: spec.len(),
        });
    }
    let disc = Discretization::new(&spec.potential, spec.hbar, grid, spec.scheme, spec.wall())?;
    let psi = disc.eigenvector(mu)?;
    let x = (0..=grid.intervals).map(|i| grid.node(i)).collect();
    Ok(GridFunction {
        x,
        psi,
        lambda: spec.eigenvalues[k],
        index: spec.first_index + k,
    })
}

/// Normalized eigenvector `k` (position in the window list) on the finest grid.
pub fn eigenvector(spec: &OracleSpectrum, k: usize) -> Result<GridFunction> {
    let mu = *spec.grid_eigenvalues.get(k).ok_or(Error::IndexOutOfRange {
        index: k,
        len: spec.len(),
    })?;
    vector_on(spec, k, spec.grid, mu)
}

/// `int w psi_k^2`, Richardson-extrapolated from the two finest grids.
pub fn observable(spec: &OracleSpectrum, k: usize, w: &Weight) -> Result<f64> {
    let fine = eigenvector(spec, k)?.integrate_weight(w);
    let coarse_grid = Grid {
        intervals: spec.grid.intervals / 2,
        ..spec.grid
    };
    let coarse = vector_on(spec, k, coarse_grid, spec.coarse_eigenvalues[k])?.integrate_weight(w);
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Kinetic energy `lambda_k - int v psi_k^2`.
pub fn kinetic(spec: &OracleSpectrum, k: usize) -> Result<f64> {
    let v = observable(spec, k, &Weight::potential(&spec.potential))?;
    Ok(spec.eigenvalues[k] - v)
}
