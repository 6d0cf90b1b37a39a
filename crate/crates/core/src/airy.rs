//! Airy functions Ai, Bi and their derivatives on the real line.
//!
//! `|t| <= T_SWITCH` sums the Maclaurin series of the two standard power-series
//! solutions in double-double arithmetic; for `t > 8` the Ai series loses every
//! significant digit to cancellation in plain `f64`. Outside that interval the
//! Poincare expansions are summed up to their smallest term.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Series/asymptotic handoff point.
pub const T_SWITCH: f64 = 8.0;

const MAX_SERIES_TERMS: usize = 80;
const MAX_ASYMPTOTIC_TERMS: usize = 40;

// Ai(0) = 3^(-2/3) / Gamma(2/3) and -Ai'(0) = 3^(-1/3) / Gamma(1/3), split hi + lo.
const AI0: (f64, f64) = (0.3550280538878172, 2.05233632436212e-17);
const AIP0: (f64, f64) = (-0.2588194037928068, 2.522243111610832e-17);
const SQRT3: (f64, f64) = (1.7320508075688772, 1.0035084221806903e-16);

/// Which representation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AiryMethod {
    Series,
    AsymptoticPlus,
    AsymptoticMinus,
}

/// `Ai, Ai', Bi, Bi'` at one point.
///
/// When `bi_exponent` is nonzero, the true values are `bi * exp(bi_exponent)`
/// and `bi_prime * exp(bi_exponent)`; this only happens when Bi overflows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValues {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
    pub bi_exponent: f64,
    pub method: AiryMethod,
}

impl AiryValues {
    /// `Ai' Bi - Ai Bi'`, which is `-1/pi` identically.
    pub fn wronskian(&self) -> f64 {
        (self.ai_prime * self.bi - self.ai * self.bi_prime) * self.bi_exponent.exp()
    }
}

/// Exponentially rescaled values for `t >= 0`:
/// `Ai = ai * exp(-zeta)`, `Bi = bi * exp(zeta)` with `zeta = 2 t^(3/2) / 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledAiry {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
    pub zeta: f64,
}

fn dd(c: (f64, f64)) -> TwoFloat {
    TwoFloat::new_add(c.0, c.1)
}

/// Unscaled `[ai, ai', bi, bi']` from the Maclaurin series.
fn series(t: f64) -> [f64; 4] {
    let x = TwoFloat::from(t);
    let t3 = x * x * x;
    // f = sum 3^k (1/3)_k t^(3k) / (3k)!, g = sum 3^k (2/3)_k t^(3k+1) / (3k+1)!
    let mut f = TwoFloat::from(1.0);
    let mut g = x;
    let mut fp = TwoFloat::from(0.0);
    let mut gp = TwoFloat::from(1.0);
    let (mut tf, mut tg) = (TwoFloat::from(1.0), x);
    let (mut tfp, mut tgp) = (TwoFloat::from(1.0), TwoFloat::from(1.0));
    for k in 1..MAX_SERIES_TERMS {
        let kf = k as f64;
        tf = tf * t3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        tg = tg * t3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        tfp = if k == 1 {
            x * x / 2.0
        } else {
            tfp * t3 / ((3.0 * kf - 3.0) * (3.0 * kf - 1.0))
        };
        tgp = tgp * t3 / ((3.0 * kf - 2.0) * (3.0 * kf));
        f += tf;
        g += tg;
        fp += tfp;
        gp += tgp;
        let small = |term: TwoFloat, sum: TwoFloat| term.hi().abs() <= 1e-34 * sum.hi().abs();
        if k > 2 && small(tf, f) && small(tg, g) && small(tfp, fp) && small(tgp, gp) {
            break;
        }
    }
    let c1 = dd(AI0);
    let c2 = -dd(AIP0);
    let s3 = dd(SQRT3);
    let ai = c1 * f - c2 * g;
    let aip = c1 * fp - c2 * gp;
    let bi = s3 * (c1 * f + c2 * g);
    let bip = s3 * (c1 * fp + c2 * gp);
    [ai.hi(), aip.hi(), bi.hi(), bip.hi()]
}

/// `u_k` and `v_k` of the Poincare expansions.
fn asymptotic_coefficients() -> ([f64; MAX_ASYMPTOTIC_TERMS], [f64; MAX_ASYMPTOTIC_TERMS]) {
    let mut u = [0.0; MAX_ASYMPTOTIC_TERMS];
    let mut v = [0.0; MAX_ASYMPTOTIC_TERMS];
    u[0] = 1.0;
    v[0] = 1.0;
    for k in 1..MAX_ASYMPTOTIC_TERMS {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
    }
    (u, v)
}

/// Number of terms of `sum c_k / zeta^k` kept under smallest-term truncation.
fn truncation_length(c: &[f64], zeta: f64) -> usize {
    let mut best = f64::INFINITY;
    let mut p = 1.0;
    for (k, ck) in c.iter().enumerate() {
        let term = (ck * p).abs();
        if term > best {
            return k;
        }
        best = term;
        p /= zeta;
    }
    c.len()
}

/// Scaled `[ai, ai', bi, bi']` for `t > 0` from the exponential expansions.
fn asymptotic_plus(t: f64) -> ([f64; 4], f64) {
    let (u, v) = asymptotic_coefficients();
    let zeta = 2.0 / 3.0 * t * t.sqrt();
    let nu = truncation_length(&u, zeta);
    let nv = truncation_length(&v, zeta);
    let (mut sa, mut sb, mut sap, mut sbp) = (0.0, 0.0, 0.0, 0.0);
    let mut p = 1.0;
    let mut sign = 1.0;
    for k in 0..nu.max(nv) {
        if k < nu {
            sa += sign * u[k] * p;
            sb += u[k] * p;
        }
        if k < nv {
            sap += sign * v[k] * p;
            sbp += v[k] * p;
        }
        p /= zeta;
        sign = -sign;
    }
    let q = t.powf(0.25);
    let rpi = PI.sqrt();
    (
        [
            sa / (2.0 * rpi * q),
            -q * sap / (2.0 * rpi),
            sb / (rpi * q),
            q * sbp / rpi,
        ],
        zeta,
    )
}

/// Unscaled `[ai, ai', bi, bi']` for `t < 0` from the oscillatory expansions.
fn asymptotic_minus(t: f64) -> [f64; 4] {
    let (u, v) = asymptotic_coefficients();
    let x = -t;
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let nu = truncation_length(&u, zeta);
    let nv = truncation_length(&v, zeta);
    // Even- and odd-index partial sums with alternating signs.
    let split = |c: &[f64], n: usize| {
        let (mut even, mut odd) = (0.0, 0.0);
        let mut p = 1.0;
        for (k, ck) in c.iter().enumerate().take(n) {
            let s = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                even += s * ck * p;
            } else {
                odd += s * ck * p;
            }
            p /= zeta;
        }
        (even, odd)
    };
    let (pu, qu) = split(&u, nu);
    let (pv, qv) = split(&v, nv);
    let (s, c) = (zeta - PI / 4.0).sin_cos();
    let q = x.powf(0.25);
    let rpi = PI.sqrt();
    [
        (c * pu + s * qu) / (rpi * q),
        q * (s * pv - c * qv) / rpi,
        (-s * pu + c * qu) / (rpi * q),
        q * (c * pv + s * qv) / rpi,
    ]
}

/// Evaluates `Ai, Ai', Bi, Bi'` at a finite real `t`.
pub fn airy_eval(t: f64) -> AiryValues {
    debug_assert!(t.is_finite(), "airy_eval needs a finite argument");
    if t.abs() <= T_SWITCH {
        let [ai, ai_prime, bi, bi_prime] = series(t);
        AiryValues {
            ai,
            ai_prime,
            bi,
            bi_prime,
            bi_exponent: 0.0,
            method: AiryMethod::Series,
        }
    } else if t > 0.0 {
        let ([ai, aip, bi, bip], zeta) = asymptotic_plus(t);
        let decay = (-zeta).exp();
        // exp(zeta) overflows past ~709.78; keep Bi as a mantissa there.
        let (grow, bi_exponent) = if zeta < 700.0 { (zeta.exp(), 0.0) } else { (1.0, zeta) };
        AiryValues {
            ai: ai * decay,
            ai_prime: aip * decay,
            bi: bi * grow,
            bi_prime: bip * grow,
            bi_exponent,
            method: AiryMethod::AsymptoticPlus,
        }
    } else {
        let [ai, ai_prime, bi, bi_prime] = asymptotic_minus(t);
        AiryValues {
            ai,
            ai_prime,
            bi,
            bi_prime,
            bi_exponent: 0.0,
            method: AiryMethod::AsymptoticMinus,
        }
    }
}

/// Overflow-safe values for `t >= 0`; see [`ScaledAiry`].
pub fn airy_scaled(t: f64) -> Result<ScaledAiry> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "airy_scaled needs finite t >= 0, got {t}"
        )));
    }
    if t > T_SWITCH {
        let ([ai, ai_prime, bi, bi_prime], zeta) = asymptotic_plus(t);
        return Ok(ScaledAiry {
            ai,
            ai_prime,
            bi,
            bi_prime,
            zeta,
        });
    }
    let zeta = 2.0 / 3.0 * t * t.sqrt();
    let [ai, aip, bi, bip] = series(t);
    let (up, down) = (zeta.exp(), (-zeta).exp());
    Ok(ScaledAiry {
        ai: ai * up,
        ai_prime: aip * up,
        bi: bi * down,
        bi_prime: bip * down,
        zeta,
    })
}

/// `(Ai(t), Ai'(t))` written as `m * exp(-e)`: mantissas and a common exponent
/// `e >= 0`. Never underflows, for use deep in the forbidden region.
pub fn ai_with_exponent(t: f64) -> (f64, f64, f64) {
    if t > 0.0 {
        let s = airy_scaled(t).expect("positive argument");
        (s.ai, s.ai_prime, s.zeta)
    } else {
        let a = airy_eval(t);
        (a.ai, a.ai_prime, 0.0)
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn values_at_origin() {
        let a = airy_eval(0.0);
        assert_eq!(a.method, AiryMethod::Series);
        assert!(rel(a.ai, 0.3550280538878172) < 1e-15);
        assert!(rel(a.ai_prime, -0.2588194037928068) < 1e-15);
        assert!(rel(a.bi, 0.6149266274460007) < 1e-15);
        assert!(rel(a.bi_prime, 0.4482883573538264) < 1e-15);
    }

    #[test]
    fn leading_term_at_ten() {
        let t: f64 = 10.0;
        let lead = (-2.0 / 3.0 * t.powf(1.5)).exp() / (2.0 * PI.sqrt() * t.powf(0.25));
        let a = airy_eval(t);
        assert!(rel(a.ai, lead) < 1e-2);
        assert!(rel(a.ai, 1.1047532552898686e-10) < 1e-13);
    }

    #[test]
    fn handoff_is_continuous() {
        for s in [-1.0, 1.0] {
            let t = s * T_SWITCH;
            let inner = series(t);
            let outer = if s > 0.0 {
                let (v, z) = asymptotic_plus(t);
                [v[0] * (-z).exp(), v[1] * (-z).exp(), v[2] * z.exp(), v[3] * z.exp()]
            } else {
                asymptotic_minus(t)
            };
            for k in 0..4 {
                assert!(rel(inner[k], outer[k]) < 1e-11, "t={t} k={k}");
            }
        }
    }

    #[test]
    fn scaled_matches_unscaled() {
        assert_eq!(airy_scaled(0.0).unwrap().ai, airy_eval(0.0).ai);
        let s = airy_scaled(5.0).unwrap();
        assert!(rel(s.ai * (-s.zeta).exp(), airy_eval(5.0).ai) < 1e-12);
        let deep = airy_scaled(100.0).unwrap();
        assert!(airy_eval(100.0).ai > 0.0);
        assert!(rel(deep.ai, 0.089196920936330413175) < 1e-13);
        assert!(airy_scaled(-1.0).is_err());
    }

    #[test]
    fn bi_overflow_keeps_exponent() {
        let a = airy_eval(100.0);
        assert_eq!(a.bi_exponent, 0.0);
        assert!(rel(a.wronskian(), -1.0 / PI) < 1e-12);
        let a = airy_eval(200.0);
        assert!(a.bi.is_finite() && a.bi_exponent > 0.0);
        assert!(rel(a.bi, 0.15003188417418147851) < 1e-13);
    }

    #[test]
    fn positivity_on_positive_axis() {
        for k in 0..=400 {
            let t = k as f64 * 0.1;
            let a = airy_eval(t);
            assert!(a.ai > 0.0 && a.bi > 0.0, "t={t}");
        }
    }
}
