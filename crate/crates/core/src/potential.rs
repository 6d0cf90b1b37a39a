//! Piecewise-analytic potentials and single-well certification.
//!
//! A [`Potential`] is an ordered partition of its domain into pieces, each
//! carrying a closed-form branch that supplies `v`, `v'` and `v''`. Interior
//! breakpoints where the branches disagree are recorded as singular points and
//! classified by the lowest derivative order that jumps.
//!
//! Certification is sampling based: crossings of `v = lambda` are counted on an
//! audit grid, so a pathological potential can hide extra wells between grid
//! points.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{CertificationFailure, Error, Result};

/// Absolute root tolerance for turning points.
pub const TOL_X: f64 = 1e-12;
/// Default number of audit-grid points per certification.
pub const AUDIT_GRID_SIZE: usize = 1024;
/// Number of energies sampled across a certified window.
const AUDIT_ENERGIES: usize = 33;
/// Truncation bounds are placed where `v` exceeds the energy by this margin.
pub const TRUNCATION_MARGIN: f64 = 10.0;

/// Value and first two derivatives of the potential at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialValue {
    pub v: f64,
    pub dv: f64,
    pub d2v: f64,
}

impl From<[f64; 3]> for PotentialValue {
    fn from(a: [f64; 3]) -> Self {
        Self {
            v: a[0],
            dv: a[1],
            d2v: a[2],
        }
    }
}

/// One-sided limit selector at a singular point (`x0 - 0` or `x0 + 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    #[default]
    FullLine,
    /// `[0, inf)`
    HalfLine,
}

impl Domain {
    pub fn start(self) -> f64 {
        match self {
            Domain::FullLine => f64::NEG_INFINITY,
            Domain::HalfLine => 0.0,
        }
    }
}

/// Lowest derivative order that jumps at a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularKind {
    /// `v` itself jumps.
    Jump,
    /// `v` is continuous, `v'` jumps.
    Kink,
    /// Only `v''` jumps (or is unbounded).
    Curvature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub x: f64,
    pub kind: SingularKind,
}

type BranchFn = dyn Fn(f64) -> [f64; 3] + Send + Sync;

/// Closed-form branch of a piecewise potential.
#[derive(Clone)]
pub enum Branch {
    /// `sum_k c_k x^k`
    Poly(Vec<f64>),
    /// `offset + scale * |x - center|^exponent`
    Power {
        offset: f64,
        scale: f64,
        exponent: f64,
        center: f64,
    },
    /// `offset + scale * exp(rate * (x - center)^2)`
    ExpQuadratic {
        offset: f64,
        scale: f64,
        rate: f64,
        center: f64,
    },
    /// Caller-supplied `x -> [v, v', v'']`.
    Custom(Arc<BranchFn>),
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Poly(c) => f.debug_tuple("Poly").field(c).finish(),
            Branch::Power {
                offset,
                scale,
                exponent,
                center,
            } => f
                .debug_struct("Power")
                .field("offset", offset)
                .field("scale", scale)
                .field("exponent", exponent)
                .field("center", center)
                .finish(),
            Branch::ExpQuadratic {
                offset,
                scale,
                rate,
                center,
            } => f
                .debug_struct("ExpQuadratic")
                .field("offset", offset)
                .field("scale", scale)
                .field("rate", rate)
                .field("center", center)
                .finish(),
            Branch::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Branch {
    pub fn custom(f: impl Fn(f64) -> [f64; 3] + Send + Sync + 'static) -> Self {
        Branch::Custom(Arc::new(f))
    }

    /// Evaluates the branch; `side` only matters at the center of a power branch.
    pub fn eval(&self, x: f64, side: Side) -> PotentialValue {
        match self {
            Branch::Poly(c) => {
                // Horner for p, p', p'' together.
                let (mut p, mut dp, mut d2p) = (0.0, 0.0, 0.0);
                for &ck in c.iter().rev() {
                    d2p = d2p * x + 2.0 * dp;
                    dp = dp * x + p;
                    p = p * x + ck;
                }
                PotentialValue { v: p, dv: dp, d2v: d2p }
            }
            Branch::Power {
                offset,
                scale,
                exponent,
                center,
            } => {
                let d = x - center;
                let r = d.abs();
                let sgn = if d == 0.0 { side.sign() } else { d.signum() };
                let a = *exponent;
                let v = offset + scale * r.powf(a);
                let dv = if r == 0.0 && a < 1.0 {
                    sgn * f64::INFINITY
                } else {
                    scale * a * r.powf(a - 1.0) * sgn
                };
                let d2v = if a == 1.0 {
                    0.0
                } else {
                    scale * a * (a - 1.0) * r.powf(a - 2.0)
                };
                PotentialValue { v, dv, d2v }
            }
            Branch::ExpQuadratic {
                offset,
                scale,
                rate,
                center,
            } => {
                let d = x - center;
                let e = scale * (rate * d * d).exp();
                PotentialValue {
                    v: offset + e,
                    dv: 2.0 * rate * d * e,
                    d2v: (2.0 * rate + 4.0 * rate * rate * d * d) * e,
                }
            }
            Branch::Custom(f) => f(x).into(),
        }
    }
}

/// A branch on the open interval `(start, end)`.
#[derive(Debug, Clone)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub branch: Branch,
}

/// Turning points of a full-line well at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    pub x_minus: f64,
    pub x_plus: f64,
    /// `v'(x_minus)`, negative for a non-critical well.
    pub slope_minus: f64,
    /// `v'(x_plus)`, positive for a non-critical well.
    pub slope_plus: f64,
}

impl TurningPoints {
    pub fn width(&self) -> f64 {
        self.x_plus - self.x_minus
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.x_minus + self.x_plus)
    }
}

/// Right edge of a half-line well `(0, x_plus)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfWell {
    pub x_plus: f64,
    pub slope_plus: f64,
}

/// Well edges in either geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WellEdges {
    Full(TurningPoints),
    Half(HalfWell),
}

impl WellEdges {
    /// Left end of the classically allowed region (turning point or wall).
    pub fn left(&self) -> f64 {
        match self {
            WellEdges::Full(t) => t.x_minus,
            WellEdges::Half(_) => 0.0,
        }
    }

    pub fn right(&self) -> f64 {
        match self {
            WellEdges::Full(t) => t.x_plus,
            WellEdges::Half(h) => h.x_plus,
        }
    }

    pub fn left_is_turning(&self) -> bool {
        matches!(self, WellEdges::Full(_))
    }

    pub fn width(&self) -> f64 {
        self.right() - self.left()
    }
}

/// A one-dimensional potential described piecewise.
///
/// Immutable after construction; cloning is cheap for the built-in branch kinds.
#[derive(Debug, Clone)]
pub struct Potential {
    pieces: Vec<Piece>,
    singular: Vec<SingularPoint>,
    decay_exponent: Option<f64>,
    domain: Domain,
    truncation: Option<(f64, f64)>,
    reference: f64,
}

fn close(a: f64, b: f64) -> bool {
    a.is_finite() && b.is_finite() && (a - b).abs() <= 1e-12 * 1f64.max(a.abs()).max(b.abs())
}

impl Potential {
    /// Builds a potential from pieces that must partition the domain in order.
    pub fn piecewise(domain: Domain, pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidParameter("potential needs at least one piece".into()));
        }
        if pieces[0].start != domain.start() {
            return Err(Error::InvalidParameter(format!(
                "first piece starts at {}, domain starts at {}",
                pieces[0].start,
                domain.start()
            )));
        }
        if pieces.last().map(|p| p.end) != Some(f64::INFINITY) {
            return Err(Error::InvalidParameter("last piece must extend to +inf".into()));
        }
        for p in &pieces {
            if p.start.is_nan() || p.end.is_nan() || !(p.start < p.end) {
                return Err(Error::InvalidParameter(format!(
                    "piece ({}, {}) is empty",
                    p.start, p.end
                )));
            }
        }
        for w in pieces.windows(2) {
            if w[0].end != w[1].start {
                return Err(Error::InvalidParameter(format!(
                    "pieces leave a gap or overlap at {} / {}",
                    w[0].end, w[1].start
                )));
            }
        }
        let mut singular = Vec::new();
        for w in pieces.windows(2) {
            let b = w[0].end;
            let l = w[0].branch.eval(b, Side::Left);
            let r = w[1].branch.eval(b, Side::Right);
            if !l.v.is_finite() || !r.v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "one-sided limits of v at {b} are not finite"
                )));
            }
            let kind = if !close(l.v, r.v) {
                Some(SingularKind::Jump)
            } else if !close(l.dv, r.dv) {
                Some(SingularKind::Kink)
            } else if !close(l.d2v, r.d2v) {
                Some(SingularKind::Curvature)
            } else {
                None
            };
            if let Some(kind) = kind {
                singular.push(SingularPoint { x: b, kind });
            }
        }
        Ok(Self {
            pieces,
            singular,
            decay_exponent: None,
            domain,
            truncation: None,
            reference: 0.0,
        })
    }

    /// Single smooth branch on the full line.
    pub fn smooth(branch: Branch) -> Self {
        Self::piecewise(
            Domain::FullLine,
            vec![Piece {
                start: f64::NEG_INFINITY,
                end: f64::INFINITY,
                branch,
            }],
        )
        .expect("single piece partitions the line")
    }

    /// `sum_k c_k x^k` on the full line.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Self::smooth(Branch::Poly(coeffs))
    }

    /// Single smooth branch on `[0, inf)`.
    pub fn half_line(branch: Branch) -> Self {
        Self::piecewise(
            Domain::HalfLine,
            vec![Piece {
                start: 0.0,
                end: f64::INFINITY,
                branch,
            }],
        )
        .expect("single piece partitions the half line")
    }

    pub fn with_decay_exponent(mut self, rho0: f64) -> Self {
        self.decay_exponent = Some(rho0);
        self
    }

    /// Overrides the default truncation bounds used as "infinity".
    pub fn with_truncation(mut self, lo: f64, hi: f64) -> Self {
        self.truncation = Some((lo, hi));
        self
    }

    /// A point inside the well, used as the start of outward searches.
    pub fn with_reference(mut self, x: f64) -> Self {
        self.reference = x;
        self
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn singular_points(&self) -> &[SingularPoint] {
        &self.singular
    }

    pub fn decay_exponent(&self) -> Option<f64> {
        self.decay_exponent
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Interior breakpoints between pieces, singular or not.
    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.pieces.windows(2).map(|w| w[0].end)
    }

    fn singular_at(&self, x: f64) -> Option<&SingularPoint> {
        self.singular.iter().find(|s| s.x == x)
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if !x.is_finite() || x < self.domain.start() {
            Err(Error::OutOfDomain { x })
        } else {
            Ok(())
        }
    }

    /// Index of the piece containing `x`; at a breakpoint, the piece on `side`.
    fn piece_index(&self, x: f64, side: Side) -> usize {
        let i = self.pieces.partition_point(|p| p.end <= x);
        let i = i.min(self.pieces.len() - 1);
        if side == Side::Left && i > 0 && self.pieces[i].start == x {
            i - 1
        } else {
            i
        }
    }

    /// `(v, v', v'')` at `x`. Fails at singular points; use [`Potential::eval_side`] there.
    pub fn eval(&self, x: f64) -> Result<PotentialValue> {
        self.check_domain(x)?;
        if self.singular_at(x).is_some() {
            return Err(Error::AtSingularPoint { x });
        }
        Ok(self.eval_unchecked(x, Side::Right))
    }

    /// One-sided evaluation; away from breakpoints the side is irrelevant.
    pub fn eval_side(&self, x: f64, side: Side) -> Result<PotentialValue> {
        self.check_domain(x)?;
        Ok(self.eval_unchecked(x, side))
    }

    pub(crate) fn eval_unchecked(&self, x: f64, side: Side) -> PotentialValue {
        let i = self.piece_index(x, side);
        self.pieces[i].branch.eval(x, side)
    }

    /// `v(x)` taking the right-hand limit at breakpoints.
    pub fn v(&self, x: f64) -> f64 {
        self.eval_unchecked(x, Side::Right).v
    }

    /// `v'''` by central differences of the branch owning `x` from `side`.
    pub fn third_derivative(&self, x: f64, side: Side) -> f64 {
        let branch = &self.pieces[self.piece_index(x, side)].branch;
        let h = 1e-4 * x.abs().max(1.0);
        (branch.eval(x + h, side).d2v - branch.eval(x - h, side).d2v) / (2.0 * h)
    }

    /// Truncation bounds where `v` reaches `level + TRUNCATION_MARGIN`, searched
    /// outward from the reference point. On the half line the lower bound is 0.
    pub fn truncation_bounds(&self, level: f64) -> Result<(f64, f64)> {
        if let Some(b) = self.truncation {
            return Ok(b);
        }
        let target = level + TRUNCATION_MARGIN;
        let hi = self.outward_bound(target, 1.0)?;
        let lo = match self.domain {
            Domain::HalfLine => 0.0,
            Domain::FullLine => self.outward_bound(target, -1.0)?,
        };
        Ok((lo, hi))
    }

    fn outward_bound(&self, target: f64, dir: f64) -> Result<f64> {
        let x0 = self.reference;
        let mut inner = x0;
        let mut step = 1.0;
        for _ in 0..64 {
            let x = x0 + dir * step;
            if self.check_domain(x).is_err() {
                break;
            }
            let vx = self.v(x);
            if vx >= target {
                // v(inner) < target, v(x) >= target: bisect the crossing.
                let (mut a, mut b) = (inner, x);
                if self.v(a) >= target {
                    return Ok(x);
                }
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    if m == a || m == b {
                        break;
                    }
                    if self.v(m) >= target {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                return Ok(b);
            }
            inner = x;
            step *= 2.0;
        }
        Err(CertificationFailure::InsufficientGrowth {
            lambda: target - TRUNCATION_MARGIN,
            bound: x0 + dir * step,
            value: self.v(inner),
        }
        .into())
    }

    /// Sign-change brackets of `v - lambda` on a uniform grid over `[lo, hi]`.
    fn crossings(&self, lambda: f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        let n = n.max(2);
        let h = (hi - lo) / (n - 1) as f64;
        let mut out = Vec::new();
        let mut xp = lo;
        let mut sp = self.v(lo) > lambda;
        for i in 1..n {
            let x = if i == n - 1 { hi } else { lo + h * i as f64 };
            let s = self.v(x) > lambda;
            if s != sp {
                out.push((xp, x));
            }
            xp = x;
            sp = s;
        }
        out
    }

    /// Refines a sign-change bracket of `v - lambda` by bisection to `TOL_X`,
    /// then takes one secant step inside the final bracket.
    fn refine_root(&self, lambda: f64, mut a: f64, mut b: f64) -> Result<f64> {
        let f = |x: f64| self.v(x) - lambda;
        let mut fa = f(a);
        let mut fb = f(b);
        while b - a > TOL_X {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = f(m);
            if fm == 0.0 {
                a = m;
                b = m;
                fa = 0.0;
                fb = 0.0;
                break;
            }
            if (fm > 0.0) == (fa > 0.0) {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
        }
        let mut best = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
        if fb != fa {
            let xs = a - fa * (b - a) / (fb - fa);
            if xs >= a && xs <= b {
                let fs = f(xs);
                if fs.abs() < best.1.abs() {
                    best = (xs, fs);
                }
            }
        }
        let (x, fx) = best;
        if fx.abs() > 1e-8 * (1.0 + lambda.abs()) {
            // The sign change happens across a jump of v.
            return Err(CertificationFailure::SingularPointOnEdge { x }.into());
        }
        Ok(x)
    }

    fn slope_at(&self, x: f64) -> f64 {
        self.eval_unchecked(x, Side::Right).dv
    }

    /// Both turning points of a full-line well.
    pub fn turning_points(&self, lambda: f64) -> Result<TurningPoints> {
        self.turning_points_with(lambda, AUDIT_GRID_SIZE)
    }

    pub fn turning_points_with(&self, lambda: f64, grid: usize) -> Result<TurningPoints> {
        if self.domain != Domain::FullLine {
            return Err(Error::InvalidParameter(
                "turning_points needs a full-line potential; use right_turning_point".into(),
            ));
        }
        let (lo, hi) = self.truncation_bounds(lambda)?;
        let brackets = self.crossings(lambda, lo, hi, grid);
        match brackets.len() {
            0 => Err(Error::NoSignChange { lambda, lo, hi }),
            2 => {
                let xm = self.refine_root(lambda, brackets[0].0, brackets[0].1)?;
                let xp = self.refine_root(lambda, brackets[1].0, brackets[1].1)?;
                Ok(TurningPoints {
                    x_minus: xm,
                    x_plus: xp,
                    slope_minus: self.slope_at(xm),
                    slope_plus: self.slope_at(xp),
                })
            }
            found => Err(CertificationFailure::CrossingCount {
                lambda,
                expected: 2,
                found,
            }
            .into()),
        }
    }

    /// The single turning point of a half-line well `(0, x_plus)`.
    pub fn right_turning_point(&self, lambda: f64) -> Result<HalfWell> {
        if self.domain != Domain::HalfLine {
            return Err(CertificationFailure::WrongDomain.into());
        }
        let (lo, hi) = self.truncation_bounds(lambda)?;
        let v0 = self.v(0.0);
        if v0 >= lambda {
            return Err(CertificationFailure::WallAboveEnergy { lambda, value: v0 }.into());
        }
        let brackets = self.crossings(lambda, lo, hi, AUDIT_GRID_SIZE);
        match brackets.len() {
            0 => Err(Error::NoSignChange { lambda, lo, hi }),
            1 => {
                let xp = self.refine_root(lambda, brackets[0].0, brackets[0].1)?;
                Ok(HalfWell {
                    x_plus: xp,
                    slope_plus: self.slope_at(xp),
                })
            }
            found => Err(CertificationFailure::CrossingCount {
                lambda,
                expected: 1,
                found,
            }
            .into()),
        }
    }

    /// Well edges in whichever geometry the domain implies.
    pub fn well_edges(&self, lambda: f64) -> Result<WellEdges> {
        match self.domain {
            Domain::FullLine => self.turning_points(lambda).map(WellEdges::Full),
            Domain::HalfLine => self.right_turning_point(lambda).map(WellEdges::Half),
        }
    }

    /// Infimum of `v` on `[lo, hi]`: audit-grid minimum refined by golden
    /// section in the neighbouring cells.
    pub fn well_bottom(&self, lo: f64, hi: f64, grid: usize) -> f64 {
        let n = grid.max(3);
        let h = (hi - lo) / (n - 1) as f64;
        let (mut best_i, mut best) = (0, f64::INFINITY);
        for i in 0..n {
            let x = lo + h * i as f64;
            let v = self.v(x).min(self.eval_unchecked(x, Side::Left).v);
            if v < best {
                best = v;
                best_i = i;
            }
        }
        let mut a = (lo + h * best_i.saturating_sub(1) as f64).max(lo);
        let mut b = (lo + h * (best_i + 1) as f64).min(hi);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (self.v(c), self.v(d));
        while b - a > TOL_X {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = self.v(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = self.v(d);
            }
        }
        best.min(fc).min(fd).min(self.v(0.5 * (a + b)))
    }

    /// Certifies the single-well assumptions on `[lambda_lo, lambda_hi]`.
    ///
    /// Energies at or below the bottom of the well carry no well and are not
    /// audited; `WellCertificate::well_bottom` records where the audit starts.
    pub fn certify_well(&self, lambda_lo: f64, lambda_hi: f64, audit_grid_size: usize) -> Result<WellCertificate> {
        if !(lambda_lo < lambda_hi) {
            return Err(Error::EmptyWindow {
                lo: lambda_lo,
                hi: lambda_hi,
            });
        }
        let (lo, hi) = self.truncation_bounds(lambda_hi)?;
        for bound in [lo, hi] {
            if self.domain == Domain::HalfLine && bound == 0.0 {
                continue;
            }
            let value = self.v(bound);
            if !(value > lambda_hi) {
                return Err(CertificationFailure::InsufficientGrowth {
                    lambda: lambda_hi,
                    bound,
                    value,
                }
                .into());
            }
        }

        let expected = match self.domain {
            Domain::FullLine => 2,
            Domain::HalfLine => 1,
        };
        let bottom = self.well_bottom(lo, hi, audit_grid_size);
        if !(bottom < lambda_hi) {
            return Err(CertificationFailure::CrossingCount {
                lambda: lambda_hi,
                expected,
                found: 0,
            }
            .into());
        }
        let start = lambda_lo.max(bottom);
        let floor = bottom + 1e-9 * (lambda_hi - bottom);
        let mut margin = f64::INFINITY;
        let mut prev: Option<WellEdges> = None;
        let mut edges_lo = None;
        for k in 0..AUDIT_ENERGIES {
            let lambda = start + (lambda_hi - start) * k as f64 / (AUDIT_ENERGIES - 1) as f64;
            if lambda <= floor {
                continue;
            }
            if self.domain == Domain::HalfLine {
                let v0 = self.v(0.0);
                if v0 >= lambda {
                    return Err(CertificationFailure::WallAboveEnergy { lambda, value: v0 }.into());
                }
            }
            let found = self.crossings(lambda, lo, hi, audit_grid_size).len();
            if found != expected {
                return Err(CertificationFailure::CrossingCount {
                    lambda,
                    expected,
                    found,
                }
                .into());
            }
            let edges = self.well_edges(lambda)?;
            let slopes: Vec<(f64, f64)> = match edges {
                WellEdges::Full(t) => vec![(t.x_minus, -t.slope_minus), (t.x_plus, t.slope_plus)],
                WellEdges::Half(h) => vec![(h.x_plus, h.slope_plus)],
            };
            for (x, s) in slopes {
                if !(s > 0.0) || !s.is_finite() {
                    return Err(CertificationFailure::CriticalTurningPoint { lambda, x, slope: s }.into());
                }
                margin = margin.min(s);
            }
            if let Some(p) = prev {
                if edges.right() < p.right() || edges.left() > p.left() {
                    return Err(CertificationFailure::NonMonotone { lambda }.into());
                }
            }
            if edges_lo.is_none() {
                edges_lo = Some(edges);
            }
            prev = Some(edges);
        }
        let (inner, outer) = (edges_lo.unwrap(), prev.unwrap());
        let mut interior = Vec::new();
        for s in &self.singular {
            let strictly_inside = s.x > inner.left() && s.x < inner.right();
            let crossed = (s.x >= outer.left() && s.x <= inner.left() && inner.left_is_turning())
                || (s.x >= inner.right() && s.x <= outer.right());
            if crossed {
                return Err(CertificationFailure::SingularPointOnEdge { x: s.x }.into());
            }
            if strictly_inside {
                let l = self.eval_unchecked(s.x, Side::Left).v;
                let r = self.eval_unchecked(s.x, Side::Right).v;
                if l.max(r) >= start {
                    return Err(CertificationFailure::SingularPointOnEdge { x: s.x }.into());
                }
                interior.push(*s);
            }
        }
        Ok(WellCertificate {
            lambda_window: (lambda_lo, lambda_hi),
            well_bottom: bottom,
            interior_singularities: interior,
            criticality_margin: margin,
            truncation: (lo, hi),
            potential: self.clone(),
        })
    }
}

/// Result of a successful single-well certification on an energy window.
#[derive(Debug, Clone)]
pub struct WellCertificate {
    pub lambda_window: (f64, f64),
    /// Infimum of `v`; the window is audited from `max(lambda_lo, well_bottom)`.
    pub well_bottom: f64,
    /// Singular points strictly inside the well for every energy in the window.
    pub interior_singularities: Vec<SingularPoint>,
    /// Minimum of `|v'|` at the turning points over the audited energies.
    pub criticality_margin: f64,
    /// Bounds standing in for infinity.
    pub truncation: (f64, f64),
    potential: Potential,
}

impl WellCertificate {
    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn contains(&self, lambda: f64) -> bool {
        lambda >= self.lambda_window.0 && lambda <= self.lambda_window.1
    }

    /// Turning-point map restricted to the certified window.
    pub fn edges(&self, lambda: f64) -> Result<WellEdges> {
        if !self.contains(lambda) {
            return Err(Error::InvalidParameter(format!(
                "energy {lambda} outside certified window {:?}",
                self.lambda_window
            )));
        }
        self.potential.well_edges(lambda)
    }

    /// Singular points that change `v` or `v'`; curvature-only jumps are
    /// handled by the smooth quantizer.
    pub fn essential_singularities(&self) -> impl Iterator<Item = &SingularPoint> {
        self.interior_singularities
            .iter()
            .filter(|s| s.kind != SingularKind::Curvature)
    }
}

/// The two-branch power-law potential
/// `v = a+ + v+ x^alpha+` for `x > 0`, `a- + v- |x|^alpha-` for `x < 0`.
pub fn make_power_law(
    a_plus: f64,
    v_plus: f64,
    alpha_plus: f64,
    a_minus: f64,
    v_minus: f64,
    alpha_minus: f64,
) -> Result<Potential> {
    for (name, val) in [
        ("v_plus", v_plus),
        ("alpha_plus", alpha_plus),
        ("v_minus", v_minus),
        ("alpha_minus", alpha_minus),
    ] {
        if !(val > 0.0) || !val.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {val}")));
        }
    }
    Potential::piecewise(
        Domain::FullLine,
        vec![
            Piece {
                start: f64::NEG_INFINITY,
                end: 0.0,
                branch: Branch::Power {
                    offset: a_minus,
                    scale: v_minus,
                    exponent: alpha_minus,
                    center: 0.0,
                },
            },
            Piece {
                start: 0.0,
                end: f64::INFINITY,
                branch: Branch::Power {
                    offset: a_plus,
                    scale: v_plus,
                    exponent: alpha_plus,
                    center: 0.0,
                },
            },
        ],
    )
    .map(|p| p.with_decay_exponent(2.0))
}
