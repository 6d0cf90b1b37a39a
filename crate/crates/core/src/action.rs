//! Classical action, its energy derivative, partial actions and classical
//! averages over the allowed region `{v < lambda}`.
//!
//! Integrands carry `(lambda - v)^(+-1/2)`, which behaves like `|x - x_t|^(+-1/2)`
//! at a non-critical turning point `x_t`. Panels touching a turning point are
//! integrated in `t` with `x = x_t -+ t^2`, which makes both kernels smooth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{Potential, Side, WellEdges};
use crate::quadrature::{integrate, Integral};
use crate::special::beta;
use crate::weight::Weight;

/// Absolute tolerance of each classical integral.
pub const TOL_QUAD: f64 = 1e-10;

/// Power of `lambda - v` in the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// `(lambda - v)^(1/2)`
    Sqrt,
    /// `(lambda - v)^(-1/2)`
    InvSqrt,
}

/// `Phi(lambda)`, `Phi'(lambda)` and the well they were computed on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionProfile {
    pub lambda: f64,
    pub phi: f64,
    pub phi_prime: f64,
    pub edges: WellEdges,
    pub quadrature_error: f64,
}

/// `int_a^b w (lambda - v)^(+-1/2) dx` for `[a, b]` inside the allowed region.
///
/// Panels are split at breakpoints of `v` and `w`; an end that coincides with a
/// turning point of `edges` is desingularized.
pub fn well_integral(
    pot: &Potential,
    edges: &WellEdges,
    lambda: f64,
    a: f64,
    b: f64,
    kernel: Kernel,
    weight: Option<&Weight>,
) -> Result<Integral> {
    if !(a <= b) || a < edges.left() || b > edges.right() {
        return Err(Error::InvalidParameter(format!(
            "integration range [{a}, {b}] is not inside the well [{}, {}]",
            edges.left(),
            edges.right()
        )));
    }
    if a == b {
        return Ok(Integral::ZERO);
    }
    let left_turning = edges.left_is_turning() && a == edges.left();
    let right_turning = b == edges.right();

    let mut cuts: Vec<f64> = pot.breakpoints().filter(|&x| x > a && x < b).collect();
    if let Some(w) = weight {
        cuts.extend(w.breaks().iter().copied().filter(|&x| x > a && x < b));
    }
    if left_turning && right_turning {
        cuts.push(0.5 * (a + b));
    }
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let slope = |x: f64| pot.eval_unchecked(x, Side::Right).dv.abs();
    let f = |x: f64, fallback: f64| {
        let mut d = lambda - pot.v(x);
        if d <= 0.0 {
            // Rounding right next to a turning point.
            d = fallback;
        }
        let k = match kernel {
            Kernel::Sqrt => d.sqrt(),
            Kernel::InvSqrt => 1.0 / d.sqrt(),
        };
        k * weight.map_or(1.0, |w| w.eval(x))
    };
    let nseg = (cuts.len() - 1) as f64;
    let tol = TOL_QUAD / nseg;
    let mut total = Integral::ZERO;
    for (i, seg) in cuts.windows(2).enumerate() {
        let (s0, s1) = (seg[0], seg[1]);
        let first = i == 0;
        let last = i + 2 == cuts.len();
        let r = if first && left_turning {
            let sl = slope(s0);
            integrate(|t| 2.0 * t * f(s0 + t * t, sl * t * t), 0.0, (s1 - s0).sqrt(), tol, 0.0)?
        } else if last && right_turning {
            let sl = slope(s1);
            integrate(|t| 2.0 * t * f(s1 - t * t, sl * t * t), 0.0, (s1 - s0).sqrt(), tol, 0.0)?
        } else {
            integrate(|x| f(x, f64::MIN_POSITIVE), s0, s1, tol, 0.0)?
        };
        total = total + r;
    }
    Ok(total)
}

fn full_integral(
    pot: &Potential,
    edges: &WellEdges,
    lambda: f64,
    kernel: Kernel,
    w: Option<&Weight>,
) -> Result<Integral> {
    well_integral(pot, edges, lambda, edges.left(), edges.right(), kernel, w)
}

/// `Phi` and `Phi'` on a precomputed well.
pub fn profile_with(pot: &Potential, edges: WellEdges, lambda: f64) -> Result<ActionProfile> {
    let s = full_integral(pot, &edges, lambda, Kernel::Sqrt, None)?;
    let i = full_integral(pot, &edges, lambda, Kernel::InvSqrt, None)?;
    Ok(ActionProfile {
        lambda,
        phi: s.value,
        phi_prime: 0.5 * i.value,
        edges,
        quadrature_error: s.error.max(0.5 * i.error),
    })
}

/// `Phi(lambda) = int (lambda - v)^(1/2) dx` over the allowed region, with `Phi'`.
///
/// On the half line the region is `(0, x_plus)`.
pub fn phi(pot: &Potential, lambda: f64) -> Result<ActionProfile> {
    profile_with(pot, pot.well_edges(lambda)?, lambda)
}

/// `Phi'(lambda) = (1/2) int (lambda - v)^(-1/2) dx`.
pub fn phi_prime(pot: &Potential, lambda: f64) -> Result<f64> {
    let edges = pot.well_edges(lambda)?;
    Ok(0.5 * full_integral(pot, &edges, lambda, Kernel::InvSqrt, None)?.value)
}

/// `Phi` alone; cheaper than [`phi`] inside root finders.
pub fn action_only(pot: &Potential, lambda: f64) -> Result<f64> {
    let edges = pot.well_edges(lambda)?;
    Ok(full_integral(pot, &edges, lambda, Kernel::Sqrt, None)?.value)
}

fn check_inside(edges: &WellEdges, x: f64) -> Result<()> {
    if x > edges.left() && x < edges.right() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "x = {x} is outside the open well ({}, {})",
            edges.left(),
            edges.right()
        )))
    }
}

/// `phi_+(x) = int_x^{x_+}` or `phi_-(x) = int_{x_-}^x` of `(lambda - v)^(1/2)`.
pub fn partial_action_with(pot: &Potential, edges: &WellEdges, lambda: f64, x: f64, side: Side) -> Result<f64> {
    check_inside(edges, x)?;
    let r = match side {
        Side::Right => well_integral(pot, edges, lambda, x, edges.right(), Kernel::Sqrt, None)?,
        Side::Left => well_integral(pot, edges, lambda, edges.left(), x, Kernel::Sqrt, None)?,
    };
    Ok(r.value)
}

pub fn partial_action(pot: &Potential, lambda: f64, x: f64, side: Side) -> Result<f64> {
    partial_action_with(pot, &pot.well_edges(lambda)?, lambda, x, side)
}

/// `(int_{x_-}^{x0}, int_{x0}^{x_+})` of `(lambda - v)^(-1/2)`.
pub fn split_inverse_integrals(pot: &Potential, edges: &WellEdges, lambda: f64, x0: f64) -> Result<(f64, f64)> {
    check_inside(edges, x0)?;
    let l = well_integral(pot, edges, lambda, edges.left(), x0, Kernel::InvSqrt, None)?;
    let r = well_integral(pot, edges, lambda, x0, edges.right(), Kernel::InvSqrt, None)?;
    Ok((l.value, r.value))
}

/// `int w (lambda - v)^(-1/2) / int (lambda - v)^(-1/2)`.
pub fn classical_average(pot: &Potential, lambda: f64, w: &Weight) -> Result<f64> {
    let edges = pot.well_edges(lambda)?;
    let num = full_integral(pot, &edges, lambda, Kernel::InvSqrt, Some(w))?;
    let den = full_integral(pot, &edges, lambda, Kernel::InvSqrt, None)?;
    Ok(num.value / den.value)
}

/// Time-averaged kinetic energy `int (lambda - v)^(1/2) / int (lambda - v)^(-1/2)`.
pub fn kinetic_cl(pot: &Potential, lambda: f64) -> Result<f64> {
    let p = phi(pot, lambda)?;
    Ok(p.phi / (2.0 * p.phi_prime))
}

/// Period `(2m)^(1/2) int (lambda - v)^(-1/2)` of the classical orbit.
pub fn classical_period(pot: &Potential, lambda: f64, mass: f64) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
    }
    Ok((2.0 * mass).sqrt() * 2.0 * phi_prime(pot, lambda)?)
}

/// Closed-form actions of the two-branch power-law well.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawActions {
    /// `phi_+(0)`
    pub phi_plus: f64,
    /// `phi_-(0)`
    pub phi_minus: f64,
    pub phi: f64,
    pub phi_prime: f64,
    pub kinetic: f64,
}

/// Beta-function evaluation of the power-law actions; see
/// [`crate::potential::make_power_law`] for the parametrization.
pub fn power_law_closed_forms(
    a_plus: f64,
    v_plus: f64,
    alpha_plus: f64,
    a_minus: f64,
    v_minus: f64,
    alpha_minus: f64,
    lambda: f64,
) -> Result<PowerLawActions> {
    if !(lambda > a_plus.max(a_minus)) {
        return Err(Error::InvalidParameter(format!(
            "energy {lambda} is not above the well bottom {}",
            a_plus.max(a_minus)
        )));
    }
    let half = |a: f64, v: f64, alpha: f64| {
        let l = lambda - a;
        let r = 1.0 / alpha;
        let s = l.powf(0.5 + r) * v.powf(-r) * r * beta(1.5, r);
        let j = l.powf(-0.5 + r) * v.powf(-r) * r * beta(0.5, r);
        (s, j)
    };
    let (sp, jp) = half(a_plus, v_plus, alpha_plus);
    let (sm, jm) = half(a_minus, v_minus, alpha_minus);
    let phi = sp + sm;
    let phi_prime = 0.5 * (jp + jm);
    Ok(PowerLawActions {
        phi_plus: sp,
        phi_minus: sm,
        phi,
        phi_prime,
        kinetic: phi / (2.0 * phi_prime),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{make_power_law, Branch};
    use std::f64::consts::PI;

    fn harmonic() -> Potential {
        Potential::polynomial(vec![0.0, 0.0, 1.0])
    }

    fn quartic() -> Potential {
        Potential::polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0])
    }

    #[test]
    fn harmonic_action_and_derivative() {
        let p = phi(&harmonic(), 1.0).unwrap();
        assert!((p.phi - PI / 2.0).abs() < 1e-12);
        assert!((p.phi_prime - PI / 2.0).abs() < 1e-12);
        assert!(p.quadrature_error <= TOL_QUAD);
    }

    #[test]
    fn linear_well_action() {
        let v = make_power_law(0.0, 1.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        assert!((action_only(&v, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let q = quartic();
        let h = 1e-5;
        for lambda in [0.5, 1.0, 2.0] {
            let fd = (action_only(&q, lambda + h).unwrap() - action_only(&q, lambda - h).unwrap()) / (2.0 * h);
            assert!((phi_prime(&q, lambda).unwrap() - fd).abs() < 1e-7);
        }
    }

    #[test]
    fn partial_actions_add_up() {
        let h = harmonic();
        assert!((partial_action(&h, 1.0, 0.0, Side::Right).unwrap() - PI / 4.0).abs() < 1e-12);
        for x in [-0.5, 0.0, 0.5] {
            let s = partial_action(&h, 1.0, x, Side::Right).unwrap() + partial_action(&h, 1.0, x, Side::Left).unwrap();
            assert!((s - PI / 2.0).abs() < 2.0 * TOL_QUAD);
        }
        let near = partial_action(&h, 1.0, 1.0 - 1e-9, Side::Right).unwrap();
        assert!(near < 1e-12);
        assert!(partial_action(&h, 1.0, 1.5, Side::Right).is_err());
    }

    #[test]
    fn classical_averages() {
        let h = harmonic();
        assert_eq!(classical_average(&h, 1.0, &Weight::one()).unwrap(), 1.0);
        assert!((classical_average(&h, 1.0, &Weight::potential(&h)).unwrap() - 0.5).abs() < 1e-12);
        let right = Weight::indicator(0.0, f64::INFINITY);
        assert!((classical_average(&h, 1.0, &right).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn kinetic_and_period() {
        let h = harmonic();
        assert!((kinetic_cl(&h, 1.0).unwrap() - 0.5).abs() < 1e-12);
        for lambda in [0.5, 1.0, 2.0] {
            assert!((classical_period(&h, lambda, 0.5).unwrap() - PI).abs() < 1e-11);
        }
        let t1 = classical_period(&h, 1.0, 0.3).unwrap();
        let t4 = classical_period(&h, 1.0, 1.2).unwrap();
        assert!((t4 - 2.0 * t1).abs() < 1e-12);
        assert!(classical_period(&h, 1.0, 0.0).is_err());
    }

    #[test]
    fn kinetic_virial_sum() {
        let q = quartic();
        let w = Weight::potential(&q);
        for lambda in [0.5, 1.0, 2.0] {
            let k = kinetic_cl(&q, lambda).unwrap();
            let v = classical_average(&q, lambda, &w).unwrap();
            assert!((k + v - lambda).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let c = power_law_closed_forms(0.0, 1.0, 2.0, 0.0, 1.0, 2.0, 1.0).unwrap();
        assert!((c.phi - PI / 2.0).abs() < 1e-13);
        assert!((c.phi_plus - PI / 4.0).abs() < 1e-13);
        let c = power_law_closed_forms(0.0, 1.0, 4.0, 0.0, 1.0, 4.0, 1.0).unwrap();
        assert!((c.phi_plus - 0.874_019_184_764_04).abs() < 1e-13);
        let c4 = power_law_closed_forms(0.0, 1.0, 4.0, 0.0, 1.0, 4.0, 4.0).unwrap();
        assert!((c4.phi_plus / c.phi_plus - 4f64.powf(0.75)).abs() < 1e-12);
        assert!(power_law_closed_forms(0.5, 1.0, 2.0, 0.0, 1.0, 2.0, 0.4).is_err());
    }

    #[test]
    fn half_line_action_is_half_of_full() {
        let h = Potential::half_line(Branch::Poly(vec![0.0, 0.0, 1.0]));
        let p = phi(&h, 1.0).unwrap();
        assert!((p.phi - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn jump_splits_panels() {
        let p = make_power_law(0.5, 1.0, 2.0, 0.0, 1.0, 2.0).unwrap();
        let c = power_law_closed_forms(0.5, 1.0, 2.0, 0.0, 1.0, 2.0, 1.5).unwrap();
        let prof = phi(&p, 1.5).unwrap();
        assert!((prof.phi - c.phi).abs() < 1e-11);
        assert!((prof.phi_prime - c.phi_prime).abs() < 1e-10);
    }
}
