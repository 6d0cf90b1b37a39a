use std::f64::consts::PI;

use proptest::prelude::*;
use semiclass::action::{phi, power_law_closed_forms};
use semiclass::airy::airy_eval;
use semiclass::io::format_float;
use semiclass::oracle::{Discretization, Grid, Scheme};
use semiclass::quantize::{bs_levels, jump_phase, weyl_count};
use semiclass::scaling::loglog_slope;
use semiclass::{make_power_law, Potential};

fn quartic() -> Potential {
    Potential::polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn airy_wronskian(t in -40.0f64..40.0) {
        let a = airy_eval(t);
        prop_assert!((a.wronskian() + 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn action_is_increasing(l in 0.05f64..5.0, dl in 0.01f64..1.0) {
        let pot = quartic();
        let a = phi(&pot, l).unwrap();
        let b = phi(&pot, l + dl).unwrap();
        prop_assert!(b.phi > a.phi);
        prop_assert!(a.phi_prime > 0.0);
    }

    #[test]
    fn power_law_homogeneity(alpha in 1.0f64..6.0, l in 0.2f64..3.0, s in 1.1f64..3.0) {
        let pot = make_power_law(0.0, 1.0, alpha, 0.0, 1.0, alpha).unwrap();
        let a = phi(&pot, l).unwrap().phi;
        let b = phi(&pot, s * l).unwrap().phi;
        let want = s.powf(0.5 + 1.0 / alpha);
        prop_assert!((b / a - want).abs() < 1e-9 * want, "{} vs {}", b / a, want);
    }

    #[test]
    fn closed_forms_match_quadrature(ap in 0.5f64..4.0, am in 0.5f64..4.0, vp in 0.5f64..2.0, vm in 0.5f64..2.0, l in 0.5f64..2.0) {
        let pot = make_power_law(0.0, vp, ap, 0.0, vm, am).unwrap();
        let closed = power_law_closed_forms(0.0, vp, ap, 0.0, vm, am, l).unwrap();
        let numeric = phi(&pot, l).unwrap();
        prop_assert!((closed.phi - numeric.phi).abs() < 1e-9 * closed.phi);
    }

    #[test]
    fn levels_satisfy_quantization(hbar in 0.01f64..0.3) {
        let pot = quartic();
        let levels = bs_levels(&pot, (0.3, 2.0), hbar).unwrap();
        for w in levels.windows(2) {
            prop_assert_eq!(w[1].n, w[0].n + 1);
            prop_assert!(w[1].lambda > w[0].lambda);
        }
        for l in &levels {
            let a = phi(&pot, l.lambda).unwrap().phi;
            prop_assert!((a - PI * hbar * (f64::from(l.n) + 0.5)).abs() < 1e-9);
        }
    }

    #[test]
    fn weyl_remainder_is_bounded(lo in 0.1f64..1.0, width in 0.05f64..2.0, hbar in 0.005f64..0.2) {
        let c = weyl_count(&quartic(), lo, lo + width, hbar).unwrap();
        prop_assert!(c.epsilon.abs() <= 1.0);
        prop_assert!((c.phase_space_area - 2.0 * PI * hbar * c.predicted).abs() < 1e-9 * c.phase_space_area.max(1.0));
    }

    #[test]
    fn jump_amplitude_forms_agree(l in 1.05f64..3.0, hbar in 0.01f64..0.2) {
        let pot = make_power_law(0.5, 1.0, 2.0, 0.0, 1.0, 2.0).unwrap();
        let j = jump_phase(&pot, 0.0, l, hbar).unwrap();
        let f = j.f();
        let phase = j.total_phase();
        prop_assert!((f - j.a_squared().sqrt() * phase.sin()).abs() < 1e-9);
    }

    #[test]
    fn sturm_count_is_monotone(m1 in -1.0f64..6.0, m2 in -1.0f64..6.0) {
        let pot = quartic();
        let grid = Grid { x_min: -3.0, x_max: 3.0, intervals: 600 };
        let d = Discretization::new(&pot, 0.1, grid, Scheme::SecondOrder, None).unwrap();
        let (lo, hi) = if m1 < m2 { (m1, m2) } else { (m2, m1) };
        prop_assert!(d.sturm_count(lo) <= d.sturm_count(hi));
    }

    #[test]
    fn floats_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn slope_recovery(p in -3.0f64..3.0, c in 0.1f64..10.0) {
        let xs = [0.4, 0.2, 0.1, 0.05];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| c * x.powf(p)).collect();
        let fit = loglog_slope(&xs, &ys).unwrap();
        prop_assert!((fit.slope - p).abs() < 1e-10);
    }
}
