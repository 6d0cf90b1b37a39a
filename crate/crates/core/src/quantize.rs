//! Quantization conditions: Bohr-Sommerfeld, Weyl counting, the generalized
//! condition at an interior jump of `v`, and half-line Dirichlet/Robin offsets.

use std::f64::consts::{FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{self, split_inverse_integrals};
use crate::error::{Error, Result};
use crate::potential::{Domain, Potential, Side, SingularPoint, WellCertificate, AUDIT_GRID_SIZE};

/// Relative root tolerance in `lambda`.
pub const TOL_LAMBDA: f64 = 1e-12;
/// The phase scan for the jump condition is refined at most this many times.
const MAX_SCAN_HALVINGS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelKind {
    Smooth,
    Discontinuous,
    HalflineDirichlet,
    /// Robin condition `psi'(0) = b psi(0)`; `b` does not enter at leading order.
    HalflineRobin {
        b: f64,
    },
}

impl LevelKind {
    pub fn label(&self) -> &'static str {
        match self {
            LevelKind::Smooth => "smooth",
            LevelKind::Discontinuous => "discontinuous",
            LevelKind::HalflineDirichlet => "halfline_dirichlet",
            LevelKind::HalflineRobin { .. } => "halfline_robin",
        }
    }
}

/// Boundary condition at the wall of a half-line problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum BoundaryCondition {
    Dirichlet,
    Robin { b: f64 },
}

impl BoundaryCondition {
    /// Quantization offset: `int_0^{x_+} (lambda - v)^(1/2) = pi hbar (n + offset)`.
    pub fn offset(&self) -> f64 {
        match self {
            BoundaryCondition::Dirichlet => 0.75,
            BoundaryCondition::Robin { .. } => 0.25,
        }
    }

    fn kind(&self) -> LevelKind {
        match *self {
            BoundaryCondition::Dirichlet => LevelKind::HalflineDirichlet,
            BoundaryCondition::Robin { b } => LevelKind::HalflineRobin { b },
        }
    }
}

/// A semiclassical eigenvalue prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalLevel {
    pub n: u32,
    pub hbar: f64,
    pub lambda: f64,
    /// Action-units mismatch of the quantization condition at `lambda`.
    pub residual: f64,
    pub kind: LevelKind,
    /// Ratio `a` with `u_- = a u_+` at this level; `(-1)^n` for smooth wells.
    pub amplitude_a: f64,
}

/// Weyl count of quantization points in a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub window: (f64, f64),
    pub hbar: f64,
    /// `(Phi(a2) - Phi(a1)) / (pi hbar)`
    pub predicted: f64,
    pub count: usize,
    /// `count - predicted`
    pub epsilon: f64,
    /// Area of `{(x, p) : a1 <= p^2 + v(x) < a2}`, equal to `2 (Phi(a2) - Phi(a1))`.
    pub phase_space_area: f64,
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar > 0.0 && hbar.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")))
    }
}

fn certify(pot: &Potential, window: (f64, f64)) -> Result<WellCertificate> {
    pot.certify_well(window.0, window.1, AUDIT_GRID_SIZE)
}

fn require_smooth(cert: &WellCertificate) -> Result<()> {
    if let Some(s) = cert.essential_singularities().next() {
        return Err(Error::InvalidParameter(format!(
            "well has a singular point at {}; use disc_levels",
            s.x
        )));
    }
    Ok(())
}

/// Solves `Phi(lambda) = target` inside `(lo, hi)` where `Phi(lo) < target < Phi(hi)`.
fn solve_action(pot: &Potential, target: f64, lo: f64, hi: f64, phi_lo: f64, phi_hi: f64) -> Result<(f64, f64)> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (phi_lo - target, phi_hi - target);
    let mut x = a - fa * (b - a) / (fb - fa);
    for _ in 0..200 {
        let p = action::phi(pot, x)?;
        let g = p.phi - target;
        if g == 0.0 {
            return Ok((x, 0.0));
        }
        if g < 0.0 {
            a = x;
            fa = g;
        } else {
            b = x;
            fb = g;
        }
        let mut next = x - g / p.phi_prime;
        if !(next > a && next < b) {
            next = if fb != fa {
                a - fa * (b - a) / (fb - fa)
            } else {
                0.5 * (a + b)
            };
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
        }
        let tol = TOL_LAMBDA * x.abs().max(1.0);
        if (next - x).abs() <= tol || b - a <= tol {
            let r = (action::action_only(pot, next)? - target).abs();
            return Ok((next, r));
        }
        x = next;
    }
    Err(Error::RootFinding {
        lo: a,
        hi: b,
        reason: "no convergence in 200 iterations".into(),
    })
}

/// Quantum numbers `n` with `pi hbar (n + offset)` strictly between the two actions.
fn quantum_numbers(phi_lo: f64, phi_hi: f64, hbar: f64, offset: f64) -> std::ops::Range<u32> {
    let s = PI * hbar;
    let mut first = ((phi_lo / s - offset).floor() + 1.0).max(0.0) as u32;
    while first > 0 && s * (f64::from(first - 1) + offset) > phi_lo {
        first -= 1;
    }
    while s * (f64::from(first) + offset) <= phi_lo {
        first += 1;
    }
    let mut end = first;
    while s * (f64::from(end) + offset) < phi_hi {
        end += 1;
    }
    first..end
}

/// `Phi(lambda)`, zero at and below the bottom of the well.
fn action_above(pot: &Potential, lambda: f64, bottom: f64) -> Result<f64> {
    if lambda <= bottom {
        Ok(0.0)
    } else {
        Ok(action::phi(pot, lambda)?.phi)
    }
}

fn offset_levels(
    pot: &Potential,
    cert: &WellCertificate,
    hbar: f64,
    offset: f64,
    kind: LevelKind,
) -> Result<Vec<SemiclassicalLevel>> {
    let bottom = cert.well_bottom;
    let window = (cert.lambda_window.0.max(bottom), cert.lambda_window.1);
    let lo = action_above(pot, window.0, bottom)?;
    let hi = action_above(pot, window.1, bottom)?;
    let ns: Vec<u32> = quantum_numbers(lo, hi, hbar, offset).collect();
    ns.into_par_iter()
        .map(|n| {
            let target = PI * hbar * (f64::from(n) + offset);
            let (lambda, residual) = solve_action(pot, target, window.0, window.1, lo, hi)?;
            Ok(SemiclassicalLevel {
                n,
                hbar,
                lambda,
                residual,
                kind,
                amplitude_a: if n % 2 == 0 { 1.0 } else { -1.0 },
            })
        })
        .collect()
}

/// Bohr-Sommerfeld levels `Phi(lambda_n) = pi (n + 1/2) hbar` in the window.
pub fn bs_levels(pot: &Potential, window: (f64, f64), hbar: f64) -> Result<Vec<SemiclassicalLevel>> {
    check_hbar(hbar)?;
    if pot.domain() != Domain::FullLine {
        return Err(Error::InvalidParameter("bs_levels needs a full-line potential".into()));
    }
    let cert = certify(pot, window)?;
    require_smooth(&cert)?;
    offset_levels(pot, &cert, hbar, 0.5, LevelKind::Smooth)
}

/// Counts quantization points in the window and compares with the Weyl term.
pub fn weyl_count(pot: &Potential, a1: f64, a2: f64, hbar: f64) -> Result<CountResult> {
    check_hbar(hbar)?;
    let cert = certify(pot, (a1, a2))?;
    let lo = action_above(pot, a1, cert.well_bottom)?;
    let hi = action_above(pot, a2, cert.well_bottom)?;
    let offset = match pot.domain() {
        Domain::FullLine => 0.5,
        Domain::HalfLine => 0.75,
    };
    let count = quantum_numbers(lo, hi, hbar, offset).len();
    let predicted = (hi - lo) / (PI * hbar);
    Ok(CountResult {
        window: (a1, a2),
        hbar,
        predicted,
        count,
        epsilon: count as f64 - predicted,
        phase_space_area: 2.0 * (hi - lo),
    })
}

/// Half-line levels `int_0^{x_+} (lambda - v)^(1/2) = pi hbar (n + 3/4)` (Dirichlet)
/// or `pi hbar (n + 1/4)` (Robin, any `b`).
pub fn halfline_levels(
    pot: &Potential,
    window: (f64, f64),
    hbar: f64,
    bc: BoundaryCondition,
) -> Result<Vec<SemiclassicalLevel>> {
    check_hbar(hbar)?;
    if pot.domain() != Domain::HalfLine {
        return Err(crate::error::CertificationFailure::WrongDomain.into());
    }
    let cert = certify(pot, window)?;
    require_smooth(&cert)?;
    let mut levels = offset_levels(pot, &cert, hbar, bc.offset(), bc.kind())?;
    for l in &mut levels {
        l.amplitude_a = 1.0;
    }
    Ok(levels)
}

/// Phase data of the jump condition at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpPhase {
    pub lambda: f64,
    /// `phi_+(x0) / hbar + pi/4`
    pub theta_plus: f64,
    /// `phi_-(x0) / hbar + pi/4`
    pub theta_minus: f64,
    /// `((lambda - v(x0 - 0)) / (lambda - v(x0 + 0)))^(1/4)`
    pub p: f64,
}

impl JumpPhase {
    /// `p sin(theta_+) cos(theta_-) + p^-1 cos(theta_+) sin(theta_-)`.
    pub fn f(&self) -> f64 {
        let (sp, cp) = self.theta_plus.sin_cos();
        let (sm, cm) = self.theta_minus.sin_cos();
        self.p * sp * cm + cp * sm / self.p
    }

    /// `theta_-` deformed so that `F = |a| sin(theta_+ + theta_-')`; it shares
    /// the quadrant of `theta_-` and coincides with it when `p = 1`.
    fn theta_minus_deformed(&self) -> f64 {
        let (sm, cm) = self.theta_minus.sin_cos();
        let psi = (sm / self.p).atan2(self.p * cm);
        let d = (psi - self.theta_minus).rem_euclid(2.0 * PI);
        let d = if d > PI { d - 2.0 * PI } else { d };
        self.theta_minus + d
    }

    /// Continuous phase `theta_+ + theta_-'`; roots of `F` sit at `(n + 1) pi`.
    pub fn total_phase(&self) -> f64 {
        self.theta_plus + self.theta_minus_deformed()
    }

    /// `a^2 = p^2 cos^2(theta_-) + p^-2 sin^2(theta_-)`.
    pub fn a_squared(&self) -> f64 {
        let (sm, cm) = self.theta_minus.sin_cos();
        self.p * self.p * cm * cm + sm * sm / (self.p * self.p)
    }

    /// The alternative form `(p^2 sin^2(theta_+) + p^-2 cos^2(theta_+))^-1`.
    pub fn a_squared_alt(&self) -> f64 {
        let (sp, cp) = self.theta_plus.sin_cos();
        1.0 / (self.p * self.p * sp * sp + cp * cp / (self.p * self.p))
    }

    /// Signed `a`, from whichever of `p^-1 sin(theta_-)/sin(theta_+)` and
    /// `-p cos(theta_-)/cos(theta_+)` is better conditioned.
    pub fn a(&self) -> f64 {
        let (sp, cp) = self.theta_plus.sin_cos();
        let (sm, cm) = self.theta_minus.sin_cos();
        let sign = if sp.abs() >= cp.abs() {
            (sm * sp).signum()
        } else {
            -(cm * cp).signum()
        };
        sign * self.a_squared().sqrt()
    }
}

/// The interior point where the generalized condition is imposed: the single
/// `v`/`v'` singular point, or a lone curvature-only one (where the condition
/// reduces to Bohr-Sommerfeld).
fn single_jump(cert: &WellCertificate) -> Result<SingularPoint> {
    let essential: Vec<&SingularPoint> = cert.essential_singularities().collect();
    match (essential.as_slice(), cert.interior_singularities.as_slice()) {
        ([s], _) => Ok(**s),
        ([], [s]) => Ok(*s),
        _ => Err(Error::InvalidParameter(format!(
            "jump quantization needs exactly one interior singular point, found {}",
            cert.interior_singularities.len()
        ))),
    }
}

/// Evaluates the phases of the jump condition at `x0`.
pub fn jump_phase(pot: &Potential, x0: f64, lambda: f64, hbar: f64) -> Result<JumpPhase> {
    let edges = pot.well_edges(lambda)?;
    let vl = pot.eval_side(x0, Side::Left)?.v;
    let vr = pot.eval_side(x0, Side::Right)?.v;
    if !(lambda > vl.max(vr)) {
        return Err(Error::InvalidParameter(format!(
            "energy {lambda} is below the one-sided limits {vl}, {vr} at {x0}"
        )));
    }
    let plus = action::partial_action_with(pot, &edges, lambda, x0, Side::Right)?;
    let minus = action::partial_action_with(pot, &edges, lambda, x0, Side::Left)?;
    Ok(JumpPhase {
        lambda,
        theta_plus: plus / hbar + FRAC_PI_4,
        theta_minus: minus / hbar + FRAC_PI_4,
        p: ((lambda - vl) / (lambda - vr)).powf(0.25),
    })
}

/// Roots of the generalized condition `F(lambda) = 0` for a well with one interior
/// singular point `x0`.
///
/// The continuous phase `theta_+ + theta_-'` is scanned on an energy grid fine
/// enough that it moves by at most `pi/8` per step, every crossing of a level
/// `(n + 1) pi` is bracketed and then bisected. If a step ever moves the phase by
/// more than `pi/2` the grid is halved.
pub fn disc_levels(pot: &Potential, window: (f64, f64), hbar: f64) -> Result<Vec<SemiclassicalLevel>> {
    check_hbar(hbar)?;
    let cert = certify(pot, window)?;
    let x0 = single_jump(&cert)?.x;
    let dmax = action::phi(pot, window.0)?
        .phi_prime
        .max(action::phi(pot, window.1)?.phi_prime);
    let jump_phase = |l: f64| jump_phase(pot, x0, l, hbar);
    let mut step = PI * hbar / (8.0 * dmax);
    for _ in 0..=MAX_SCAN_HALVINGS {
        let n_steps = ((window.1 - window.0) / step).ceil().max(1.0) as usize;
        let grid: Vec<f64> = (0..=n_steps)
            .map(|i| {
                if i == n_steps {
                    window.1
                } else {
                    window.0 + (window.1 - window.0) * i as f64 / n_steps as f64
                }
            })
            .collect();
        let phases: Vec<f64> = grid
            .par_iter()
            .map(|&l| jump_phase(l).map(|j| j.total_phase() / PI - 1.0))
            .collect::<Result<_>>()?;
        if phases.windows(2).any(|w| (w[1] - w[0]).abs() > 0.5) {
            step *= 0.5;
            continue;
        }
        // Integer k in (lo, hi] marks a root in the step; a root exactly on a
        // grid point is claimed by the step that ends there.
        let mut brackets = Vec::new();
        for (i, w) in phases.windows(2).enumerate() {
            let (lo, hi) = (w[0].min(w[1]), w[0].max(w[1]));
            let mut k = (lo.floor() + 1.0).max(0.0);
            while k <= hi {
                brackets.push((k as u32, grid[i], grid[i + 1]));
                k += 1.0;
            }
        }
        return brackets
            .into_par_iter()
            .map(|(n, a, b)| {
                let target = (f64::from(n) + 1.0) * PI;
                let g = |l: f64| jump_phase(l).map(|j| j.total_phase() - target);
                let (mut a, mut b) = (a, b);
                let mut ga = g(a)?;
                for _ in 0..200 {
                    if b - a <= TOL_LAMBDA * a.abs().max(1.0) {
                        break;
                    }
                    let m = 0.5 * (a + b);
                    let gm = g(m)?;
                    if (gm > 0.0) == (ga > 0.0) {
                        a = m;
                        ga = gm;
                    } else {
                        b = m;
                    }
                }
                let lambda = 0.5 * (a + b);
                let j = jump_phase(lambda)?;
                Ok(SemiclassicalLevel {
                    n,
                    hbar,
                    lambda,
                    residual: hbar * (j.total_phase() - target).abs(),
                    kind: LevelKind::Discontinuous,
                    amplitude_a: j.a(),
                })
            })
            .collect();
    }
    Err(Error::GridTooCoarse {
        halvings: MAX_SCAN_HALVINGS,
    })
}

/// Normalization data of a level at a jump: `(|c_+|, |c_-|, a^2)`.
pub fn disc_normalization(pot: &Potential, level: &SemiclassicalLevel) -> Result<(f64, f64, f64)> {
    if level.kind != LevelKind::Discontinuous {
        return Err(Error::LevelMismatch(format!(
            "expected a discontinuous level, got {}",
            level.kind.label()
        )));
    }
    let x0 = jump_point(pot)?;
    let j = jump_phase(pot, x0, level.lambda, level.hbar)?;
    let edges = pot.well_edges(level.lambda)?;
    let (i_minus, i_plus) = split_inverse_integrals(pot, &edges, level.lambda, x0)?;
    let a2 = j.a_squared();
    let pre = (2.0 * PI).sqrt() * level.hbar.powf(-1.0 / 6.0);
    Ok((
        pre / (i_plus + i_minus / a2).sqrt(),
        pre / (a2 * i_plus + i_minus).sqrt(),
        a2,
    ))
}

/// The point used by [`disc_normalization`]; see `single_jump`.
pub fn jump_point(pot: &Potential) -> Result<f64> {
    let all = pot.singular_points();
    let essential: Vec<&SingularPoint> = all
        .iter()
        .filter(|s| s.kind != crate::potential::SingularKind::Curvature)
        .collect();
    match (essential.as_slice(), all) {
        ([s], _) => Ok(s.x),
        ([], [s]) => Ok(s.x),
        _ => Err(Error::LevelMismatch(
            "potential does not have exactly one jump point".into(),
        )),
    }
}
