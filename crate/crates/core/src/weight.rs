//! Observable weights `w(x)` with declared discontinuities.

use std::fmt;
use std::sync::Arc;

use crate::potential::Potential;

type WeightFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A locally bounded, piecewise smooth weight. `breaks` lists the points where
/// `w` may jump so that quadrature panels can be split there.
#[derive(Clone)]
pub struct Weight {
    f: Arc<WeightFn>,
    breaks: Vec<f64>,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Weight")
            .field("breaks", &self.breaks)
            .finish_non_exhaustive()
    }
}

impl Weight {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, mut breaks: Vec<f64>) -> Self {
        breaks.retain(|b| b.is_finite());
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        Self { f: Arc::new(f), breaks }
    }

    pub fn one() -> Self {
        Self::new(|_| 1.0, Vec::new())
    }

    /// `w = v`, breaking at the potential's singular points.
    pub fn potential(pot: &Potential) -> Self {
        let p = pot.clone();
        let breaks = pot.singular_points().iter().map(|s| s.x).collect();
        Self::new(move |x| p.v(x), breaks)
    }

    /// Indicator of the open interval `(lo, hi)`; either end may be infinite.
    pub fn indicator(lo: f64, hi: f64) -> Self {
        Self::new(move |x| if x > lo && x < hi { 1.0 } else { 0.0 }, vec![lo, hi])
    }

    /// `w = x^k`.
    pub fn monomial(k: i32) -> Self {
        Self::new(move |x| x.powi(k), Vec::new())
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }
}
