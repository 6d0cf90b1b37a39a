//! Langer charts `xi_+-` and the uniform Airy approximation of the decaying
//! solutions `u_+-`, their normalization, and the assembled eigenfunction.
//!
//! `xi` solves `xi'^2 xi = v - lambda` with `xi(x_t) = 0`; it is negative inside
//! the well. Near the turning point the defining integral vanishes like
//! `|x - x_t|^(3/2)`, so a collar around `x_t` uses a third-order Taylor model of
//! `xi` built from `v'(x_t)`, `v''(x_t)` and `v'''(x_t)`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::action::{self, TOL_QUAD};
use crate::airy::{ai_with_exponent, airy_eval};
use crate::error::{Error, Result};
use crate::potential::{Domain, Potential, Side, WellEdges};
use crate::quadrature::integrate;
use crate::quantize::{disc_normalization, jump_phase, jump_point, LevelKind, SemiclassicalLevel};

/// Chebyshev nodes used to memoize `xi` on each chart.
pub const CACHE_NODES: usize = 64;
/// Relative agreement required before the memoized `xi` replaces quadrature.
const CACHE_CHECK: f64 = 1e-10;
/// Tolerance for the integrals defining `xi`.
const TOL_CHART: f64 = 1e-12;

/// Collar half-width around a turning point for a well of the given width.
pub fn collar_width(well_width: f64) -> f64 {
    1e-3f64.max(TOL_QUAD.cbrt()) * well_width
}

#[derive(Debug, Clone)]
struct ChebyshevCache {
    lo: f64,
    hi: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl ChebyshevCache {
    fn nodes(lo: f64, hi: f64) -> Vec<f64> {
        let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        (0..CACHE_NODES)
            .map(|j| c + h * (PI * j as f64 / (CACHE_NODES - 1) as f64).cos())
            .collect()
    }

    fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Barycentric interpolation on Chebyshev-Lobatto nodes.
    fn eval(&self, x: f64) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        let last = self.nodes.len() - 1;
        for (j, (&xj, &fj)) in self.nodes.iter().zip(&self.values).enumerate() {
            let d = x - xj;
            if d == 0.0 {
                return fj;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == last {
                w *= 0.5;
            }
            num += w * fj / d;
            den += w / d;
        }
        num / den
    }
}

/// The Langer variable attached to one turning point.
#[derive(Debug, Clone)]
pub struct LangerChart {
    side: Side,
    lambda: f64,
    turning: f64,
    slope: f64,
    match_point: f64,
    collar: f64,
    // Taylor model xi = k0 s (1 + k1 s + k2 s^2), s = x - x_t.
    k0: f64,
    k1: f64,
    k2: f64,
    cache: Option<ChebyshevCache>,
    pot: Potential,
}

impl LangerChart {
    /// Chart for the turning point `x_t` on `side`. The chart lives on
    /// `[match_point, inf)` for `Side::Right` and `(-inf, match_point]` for `Side::Left`.
    pub fn new(
        pot: &Potential,
        lambda: f64,
        turning: f64,
        side: Side,
        match_point: f64,
        well_width: f64,
    ) -> Result<Self> {
        let inside_ok = match side {
            Side::Right => match_point < turning,
            Side::Left => match_point > turning,
        };
        if !inside_ok {
            return Err(Error::InvalidParameter(format!(
                "match point {match_point} is not on the allowed side of turning point {turning}"
            )));
        }
        let tv = pot.eval_unchecked(turning, side);
        let a = tv.dv;
        if !(a.abs() > 0.0) || (side == Side::Right) != (a > 0.0) {
            return Err(crate::error::CertificationFailure::CriticalTurningPoint {
                lambda,
                x: turning,
                slope: a,
            }
            .into());
        }
        let b = tv.d2v / (2.0 * a);
        let c = pot.third_derivative(turning, side) / (6.0 * a);
        let mut chart = Self {
            side,
            lambda,
            turning,
            slope: a,
            match_point,
            collar: collar_width(well_width),
            k0: a.cbrt(),
            k1: b / 5.0,
            k2: c / 7.0 - 8.0 * b * b / 175.0,
            cache: None,
            pot: pot.clone(),
        };
        chart.cache = chart.build_cache();
        Ok(chart)
    }

    /// Memoizes `xi` on `match_point .. mirror image across x_t` if no breakpoint
    /// of `v` lies inside and interpolation reproduces quadrature.
    fn build_cache(&self) -> Option<ChebyshevCache> {
        let d = (self.turning - self.match_point).abs();
        let (lo, hi) = match self.side {
            Side::Right => (self.match_point, self.turning + d),
            Side::Left => (self.turning - d, self.match_point),
        };
        if self.pot.breakpoints().any(|b| b > lo && b < hi) {
            return None;
        }
        let nodes = ChebyshevCache::nodes(lo, hi);
        let values: Option<Vec<f64>> = nodes.iter().map(|&x| self.xi_direct(x).ok()).collect();
        let cache = ChebyshevCache {
            lo,
            hi,
            nodes,
            values: values?,
        };
        // Probe halfway between neighbouring nodes.
        for j in (0..CACHE_NODES - 1).step_by(7) {
            let x = 0.5 * (cache.nodes[j] + cache.nodes[j + 1]);
            if (x - self.turning).abs() < self.collar {
                continue;
            }
            let want = self.xi_direct(x).ok()?;
            if (cache.eval(x) - want).abs() > CACHE_CHECK * want.abs().max(1e-3) {
                return None;
            }
        }
        Some(cache)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn turning_point(&self) -> f64 {
        self.turning
    }

    /// `v'` at the turning point.
    pub fn turning_slope(&self) -> f64 {
        self.slope
    }

    pub fn match_point(&self) -> f64 {
        self.match_point
    }

    pub fn collar(&self) -> f64 {
        self.collar
    }

    pub fn is_cached(&self) -> bool {
        self.cache.is_some()
    }

    /// `+1` for the right chart (`xi' > 0`), `-1` for the left.
    fn orientation(&self) -> f64 {
        match self.side {
            Side::Right => 1.0,
            Side::Left => -1.0,
        }
    }

    fn check(&self, x: f64) -> Result<()> {
        let ok = x.is_finite()
            && match self.side {
                Side::Right => x >= self.match_point,
                Side::Left => x <= self.match_point,
            };
        if !ok {
            return Err(Error::ChartDomain { x });
        }
        if self.pot.domain() == Domain::HalfLine && x < 0.0 {
            return Err(Error::OutOfDomain { x });
        }
        Ok(())
    }

    fn in_collar(&self, x: f64) -> bool {
        (x - self.turning).abs() < self.collar
    }

    /// `int |v - lambda|^(1/2)` between `x` and the turning point.
    fn action_to_turning(&self, x: f64) -> Result<f64> {
        let xt = self.turning;
        if x == xt {
            return Ok(0.0);
        }
        let (a, b) = if x < xt { (x, xt) } else { (xt, x) };
        let mut cuts: Vec<f64> = self.pot.breakpoints().filter(|&p| p > a && p < b).collect();
        cuts.push(a);
        cuts.push(b);
        cuts.sort_by(f64::total_cmp);
        let side = self.side;
        let g = |y: f64| (self.pot.eval_unchecked(y, side).v - self.lambda).abs().sqrt();
        let tol = TOL_CHART / (cuts.len() - 1) as f64;
        let mut total = 0.0;
        for (i, seg) in cuts.windows(2).enumerate() {
            let (s0, s1) = (seg[0], seg[1]);
            let r = if i == 0 && s0 == xt {
                integrate(|t| 2.0 * t * g(s0 + t * t), 0.0, (s1 - s0).sqrt(), tol, 1e-14)?
            } else if i + 2 == cuts.len() && s1 == xt {
                integrate(|t| 2.0 * t * g(s1 - t * t), 0.0, (s1 - s0).sqrt(), tol, 1e-14)?
            } else {
                integrate(g, s0, s1, tol, 1e-14)?
            };
            total += r.value;
        }
        Ok(total)
    }

    fn xi_taylor(&self, s: f64) -> (f64, f64, f64) {
        let (k0, k1, k2) = (self.k0, self.k1, self.k2);
        (
            k0 * s * (1.0 + k1 * s + k2 * s * s),
            k0 * (1.0 + 2.0 * k1 * s + 3.0 * k2 * s * s),
            k0 * (2.0 * k1 + 6.0 * k2 * s),
        )
    }

    /// `xi` from its defining integral (Taylor model inside the collar).
    pub fn xi_direct(&self, x: f64) -> Result<f64> {
        if self.in_collar(x) {
            return Ok(self.xi_taylor(x - self.turning).0);
        }
        let forbidden = (x - self.turning) * self.orientation() > 0.0;
        let m = (1.5 * self.action_to_turning(x)?).powf(2.0 / 3.0);
        Ok(if forbidden { m } else { -m })
    }

    /// `xi(x)`.
    pub fn xi(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        if self.in_collar(x) {
            return Ok(self.xi_taylor(x - self.turning).0);
        }
        match &self.cache {
            Some(c) if c.contains(x) => Ok(c.eval(x)),
            _ => self.xi_direct(x),
        }
    }

    fn q(&self, x: f64) -> (f64, f64) {
        let e = self.pot.eval_unchecked(x, self.side);
        (e.v - self.lambda, e.dv)
    }

    /// `(xi, xi', xi'')` at `x`.
    pub fn jet(&self, x: f64) -> Result<(f64, f64, f64)> {
        self.check(x)?;
        if self.in_collar(x) {
            return Ok(self.xi_taylor(x - self.turning));
        }
        let xi = self.xi(x)?;
        let (q, dq) = self.q(x);
        let d = self.orientation() * (q / xi).sqrt();
        Ok((xi, d, (dq - d * d * d) / (2.0 * d * xi)))
    }

    /// `xi'(x)`; equals `+-|v'(x_t)|^(1/3)` at the turning point.
    pub fn xi_prime(&self, x: f64) -> Result<f64> {
        self.jet(x).map(|j| j.1)
    }

    /// Error-control function `p` with
    /// `-16 p = 5 xi^-2 + xi (4 q^-2 q'' - 5 q^-3 q'^2)`.
    ///
    /// Not evaluated inside the collar, where both terms blow up and cancel.
    pub fn error_control(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        if self.in_collar(x) {
            return Err(Error::CollarViolation { x, width: self.collar });
        }
        let e = self.pot.eval(x)?;
        let q = e.v - self.lambda;
        let xi = self.xi(x)?;
        let s = 5.0 / (xi * xi) + xi * (4.0 * e.d2v / (q * q) - 5.0 * e.dv * e.dv / (q * q * q));
        Ok(-s / 16.0)
    }
}

/// Chart for the turning point on `side` of the certified well, matched at the
/// well midpoint (or at the wall for a half-line well).
pub fn build_chart(pot: &Potential, lambda: f64, side: Side) -> Result<LangerChart> {
    let edges = pot.well_edges(lambda)?;
    let (turning, x1) = match (edges, side) {
        (WellEdges::Full(t), Side::Right) => (t.x_plus, t.midpoint()),
        (WellEdges::Full(t), Side::Left) => (t.x_minus, t.midpoint()),
        (WellEdges::Half(h), Side::Right) => (h.x_plus, 0.0),
        (WellEdges::Half(_), Side::Left) => {
            return Err(Error::InvalidParameter(
                "a half-line well has no left turning point".into(),
            ))
        }
    };
    LangerChart::new(pot, lambda, turning, side, x1, edges.width())
}

/// `p(x)` on a freshly built chart; see [`LangerChart::error_control`].
pub fn error_control(pot: &Potential, lambda: f64, x: f64, side: Side) -> Result<f64> {
    build_chart(pot, lambda, side)?.error_control(x)
}

/// Leading term `|xi'|^(-1/2) Ai(hbar^(-2/3) xi)` of a decaying solution.
#[derive(Debug, Clone)]
pub struct UniformWave {
    chart: Arc<LangerChart>,
    hbar: f64,
}

impl UniformWave {
    pub fn new(chart: LangerChart, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self {
            chart: Arc::new(chart),
            hbar,
        })
    }

    pub fn chart(&self) -> &LangerChart {
        &self.chart
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `|xi'(x)|^(-1/2)`.
    pub fn amplitude(&self, x: f64) -> Result<f64> {
        Ok(self.chart.xi_prime(x)?.abs().powf(-0.5))
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        let (xi, d, _) = self.chart.jet(x)?;
        let t = xi * self.hbar.powf(-2.0 / 3.0);
        let (m, _, e) = ai_with_exponent(t);
        Ok(d.abs().powf(-0.5) * m * (-e).exp())
    }

    /// `du/dx`; refused inside the turning-point collar.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        if self.chart.in_collar(x) {
            return Err(Error::CollarViolation {
                x,
                width: self.chart.collar,
            });
        }
        let (xi, d, d2) = self.chart.jet(x)?;
        let k = self.hbar.powf(-2.0 / 3.0);
        let (m, mp, e) = ai_with_exponent(xi * k);
        let scale = (-e).exp();
        let sg = d.signum();
        let ad = d.abs();
        Ok(sg * (ad.sqrt() * k * mp - 0.5 * ad.powf(-1.5) * d2 * m) * scale)
    }
}

/// `|xi'|^(-1/2) Ai(hbar^(-2/3) xi)` on the default chart.
pub fn uniform_u(pot: &Potential, lambda: f64, hbar: f64, x: f64, side: Side) -> Result<f64> {
    UniformWave::new(build_chart(pot, lambda, side)?, hbar)?.value(x)
}

pub fn uniform_u_prime(pot: &Potential, lambda: f64, hbar: f64, x: f64, side: Side) -> Result<f64> {
    UniformWave::new(build_chart(pot, lambda, side)?, hbar)?.derivative(x)
}

/// Leading-order normalization of a smooth-well level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    /// `|c_+|`
    pub c_plus: f64,
    /// `|c_-|`
    pub c_minus: f64,
    /// `u_- = a u_+`
    pub a: f64,
}

/// `|c_+-| = (2 pi)^(1/2) hbar^(-1/6) (int (lambda - v)^(-1/2))^(-1/2)` and `a = (-1)^n`.
///
/// The constant follows from `int u^2 = hbar^(1/3) (2 pi)^(-1) int (lambda - v)^(-1/2)`
/// for the standard `Ai`.
pub fn normalization(pot: &Potential, lambda: f64, hbar: f64, n: u32) -> Result<Normalization> {
    let i = 2.0 * action::phi_prime(pot, lambda)?;
    let c = (2.0 * PI).sqrt() * hbar.powf(-1.0 / 6.0) / i.sqrt();
    Ok(Normalization {
        c_plus: c,
        c_minus: c,
        a: if n.is_multiple_of(2) { 1.0 } else { -1.0 },
    })
}

/// Leading coefficient of `|psi(x_+)| ~ alpha_+ hbar^(-1/6)`.
pub fn peak_coefficient(pot: &Potential, lambda: f64) -> Result<f64> {
    let i = 2.0 * action::phi_prime(pot, lambda)?;
    let slope = pot.well_edges(lambda)?;
    let vp = pot.eval_unchecked(slope.right(), Side::Right).dv;
    Ok((2.0 * PI).sqrt() / i.sqrt() * vp.abs().powf(-1.0 / 6.0) * airy_eval(0.0).ai)
}

/// Normalized uniform approximation of an eigenfunction.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    pub level: SemiclassicalLevel,
    plus: UniformWave,
    minus: Option<UniformWave>,
    /// Signed `c_+ > 0`.
    pub c_plus: f64,
    /// Signed `c_-`, with `sign(c_-) = sign(a)`.
    pub c_minus: f64,
    pub match_point: f64,
}

/// Checks that `level` satisfies its quantization condition on `pot`.
fn check_level(pot: &Potential, level: &SemiclassicalLevel) -> Result<()> {
    let tol = 1e-6 * (1.0 + level.lambda.abs());
    let n = f64::from(level.n);
    let r = match level.kind {
        LevelKind::Smooth => (action::action_only(pot, level.lambda)? - PI * level.hbar * (n + 0.5)).abs(),
        LevelKind::HalflineDirichlet => (action::action_only(pot, level.lambda)? - PI * level.hbar * (n + 0.75)).abs(),
        LevelKind::HalflineRobin { .. } => {
            (action::action_only(pot, level.lambda)? - PI * level.hbar * (n + 0.25)).abs()
        }
        LevelKind::Discontinuous => {
            let j = jump_phase(pot, jump_point(pot)?, level.lambda, level.hbar)?;
            level.hbar * (j.total_phase() - (n + 1.0) * PI).abs()
        }
    };
    if r > tol {
        return Err(Error::LevelMismatch(format!(
            "level n = {} at {} misses its quantization condition by {r:e}",
            level.n, level.lambda
        )));
    }
    let half = matches!(
        level.kind,
        LevelKind::HalflineDirichlet | LevelKind::HalflineRobin { .. }
    );
    if half != (pot.domain() == Domain::HalfLine) {
        return Err(Error::LevelMismatch(
            "level geometry does not match the potential domain".into(),
        ));
    }
    Ok(())
}

/// Assembles `psi = c_+ u_+` right of the match point and `c_- u_-` left of it.
///
/// The match point is the well midpoint for smooth wells and the jump point for
/// discontinuous ones; half-line eigenfunctions are `c_+ u_+` on `[0, inf)`.
pub fn eigenfunction(pot: &Potential, level: &SemiclassicalLevel) -> Result<Eigenfunction> {
    check_level(pot, level)?;
    let lambda = level.lambda;
    let hbar = level.hbar;
    let edges = pot.well_edges(lambda)?;
    match edges {
        WellEdges::Half(h) => {
            let chart = LangerChart::new(pot, lambda, h.x_plus, Side::Right, 0.0, h.x_plus)?;
            let c = normalization(pot, lambda, hbar, level.n)?.c_plus;
            Ok(Eigenfunction {
                level: *level,
                plus: UniformWave::new(chart, hbar)?,
                minus: None,
                c_plus: c,
                c_minus: 0.0,
                match_point: 0.0,
            })
        }
        WellEdges::Full(t) => {
            let (x1, c_plus, c_minus) = if level.kind == LevelKind::Discontinuous {
                let (cp, cm, _) = disc_normalization(pot, level)?;
                (jump_point(pot)?, cp, level.amplitude_a.signum() * cm)
            } else {
                let nz = normalization(pot, lambda, hbar, level.n)?;
                (t.midpoint(), nz.c_plus, nz.a * nz.c_minus)
            };
            let w = t.width();
            let plus = LangerChart::new(pot, lambda, t.x_plus, Side::Right, x1, w)?;
            let minus = LangerChart::new(pot, lambda, t.x_minus, Side::Left, x1, w)?;
            Ok(Eigenfunction {
                level: *level,
                plus: UniformWave::new(plus, hbar)?,
                minus: Some(UniformWave::new(minus, hbar)?),
                c_plus,
                c_minus,
                match_point: x1,
            })
        }
    }
}

impl Eigenfunction {
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x >= self.match_point {
            return Ok(self.c_plus * self.plus.value(x)?);
        }
        match &self.minus {
            Some(m) => Ok(self.c_minus * m.value(x)?),
            None => Err(Error::OutOfDomain { x }),
        }
    }

    pub fn plus(&self) -> &UniformWave {
        &self.plus
    }

    pub fn minus(&self) -> Option<&UniformWave> {
        self.minus.as_ref()
    }

    /// `psi(x_1 + 0) - psi(x_1 - 0)`; zero for a half-line eigenfunction.
    pub fn continuity_mismatch(&self) -> Result<f64> {
        match &self.minus {
            Some(m) => Ok(self.c_plus * self.plus.value(self.match_point)? - self.c_minus * m.value(self.match_point)?),
            None => Ok(0.0),
        }
    }
}
