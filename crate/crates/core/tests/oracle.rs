use semiclass::oracle::{
    eigenvector, kinetic, observable, solve_spectrum, Discretization, Grid, OracleOptions, Scheme,
};
use semiclass::quantize::BoundaryCondition;
use semiclass::weight::Weight;
use semiclass::{make_power_law, Potential};

const QUARTIC: &str = include_str!("fixtures/quartic_levels.json");
const JUMP: &str = include_str!("fixtures/jump_levels.json");

fn quartic_fixture() -> Vec<f64> {
    let v: serde_json::Value = serde_json::from_str(QUARTIC).unwrap();
    serde_json::from_value(v["levels"].clone()).unwrap()
}

fn quartic() -> Potential {
    Potential::polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0])
}

#[test]
fn quartic_matches_spectral_reference() {
    let reference = quartic_fixture();
    let s = solve_spectrum(&quartic(), 1.0, (0.0, 17.0), &OracleOptions::default()).unwrap();
    assert_eq!(s.eigenvalues.len(), 5);
    for (l, r) in s.eigenvalues.iter().zip(&reference) {
        assert!((l - r).abs() < 1e-8, "{l} vs {r}");
    }
    for e in &s.est_error {
        assert!(*e <= 1e-8);
    }
}

#[test]
fn quartic_small_hbar_matches_scaled_reference() {
    let reference = quartic_fixture();
    let hbar: f64 = 0.05;
    let s = solve_spectrum(&quartic(), hbar, (0.5, 2.0), &OracleOptions::default()).unwrap();
    let scale = hbar.powf(4.0 / 3.0);
    for (k, l) in s.eigenvalues.iter().enumerate() {
        let r = scale * reference[s.first_index + k];
        assert!((l - r).abs() < 1e-8, "n={}: {l} vs {r}", s.first_index + k);
    }
    let below = reference.iter().filter(|e| scale * **e <= 0.5).count();
    assert_eq!(s.first_index, below);
}

#[test]
fn jump_potential_matches_exact_matching_roots() {
    let v: serde_json::Value = serde_json::from_str(JUMP).unwrap();
    let pot = make_power_law(0.5, 1.0, 2.0, 0.0, 1.0, 2.0).unwrap();
    for hbar in [0.05, 0.025] {
        let reference: Vec<f64> = serde_json::from_value(v["levels"][hbar.to_string()].clone()).unwrap();
        let s = solve_spectrum(&pot, hbar, (1.0, 2.0), &OracleOptions::default()).unwrap();
        assert_eq!(s.eigenvalues.len(), reference.len());
        for (l, r) in s.eigenvalues.iter().zip(&reference) {
            assert!((l - r).abs() < 1e-8, "hbar={hbar}: {l} vs {r}");
        }
    }
}

#[test]
fn quartic_ground_state_self_convergence() {
    let base = solve_spectrum(&quartic(), 1.0, (0.0, 2.0), &OracleOptions::default()).unwrap();
    let (lo, hi) = (base.grid.x_min, base.grid.x_max);
    let wider = OracleOptions {
        truncation: Some((lo - 2.0, hi + 2.0)),
        ..Default::default()
    };
    let w = solve_spectrum(&quartic(), 1.0, (0.0, 2.0), &wider).unwrap();
    assert!((w.eigenvalues[0] - base.eigenvalues[0]).abs() < 1e-8);
}

#[test]
fn truncation_independence() {
    let base = solve_spectrum(&quartic(), 0.1, (0.5, 2.0), &OracleOptions::default()).unwrap();
    let (lo, hi) = (base.grid.x_min, base.grid.x_max);
    let pad = 0.1 * (hi - lo);
    let wider = OracleOptions {
        truncation: Some((lo - pad, hi + pad)),
        ..Default::default()
    };
    let w = solve_spectrum(&quartic(), 0.1, (0.5, 2.0), &wider).unwrap();
    assert_eq!(w.eigenvalues.len(), base.eigenvalues.len());
    for (a, b) in w.eigenvalues.iter().zip(&base.eigenvalues) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn second_order_refinement_ratio() {
    let pot = Potential::polynomial(vec![0.0, 0.0, 1.0]);
    let exact = [1.0, 3.0, 5.0];
    let errors: Vec<Vec<f64>> = [1000, 2000, 4000]
        .iter()
        .map(|&n| {
            let grid = Grid {
                x_min: -8.0,
                x_max: 8.0,
                intervals: n,
            };
            let d = Discretization::new(&pot, 1.0, grid, Scheme::SecondOrder, None).unwrap();
            (0..3)
                .map(|k| (d.eigenvalue(k, 0.0, 7.0).unwrap() - exact[k]).abs())
                .collect()
        })
        .collect();
    for k in 0..3 {
        for w in errors.windows(2) {
            let ratio = w[0][k] / w[1][k];
            assert!((3.5..=4.5).contains(&ratio), "k={k}: {ratio}");
        }
    }
}

#[test]
fn numerov_and_second_order_agree() {
    let numerov = OracleOptions {
        scheme: Scheme::Numerov,
        ..Default::default()
    };
    let pot = quartic();
    let a = solve_spectrum(&pot, 0.1, (0.5, 2.0), &OracleOptions::default()).unwrap();
    let b = solve_spectrum(&pot, 0.1, (0.5, 2.0), &numerov).unwrap();
    assert_eq!(a.eigenvalues.len(), b.eigenvalues.len());
    for k in 0..a.len() {
        let bound = a.est_error[k] + b.est_error[k] + 1e-9;
        assert!((a.eigenvalues[k] - b.eigenvalues[k]).abs() <= bound, "k={k}");
    }
}

#[test]
fn eigenvectors_have_index_many_nodes() {
    let s = solve_spectrum(&quartic(), 0.2, (0.0, 3.0), &OracleOptions::default()).unwrap();
    assert!(s.len() > 5);
    for k in 0..s.len() {
        let v = eigenvector(&s, k).unwrap();
        assert_eq!(v.sign_changes(), s.first_index + k);
        assert!((v.integrate_weight(&Weight::one()) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn harmonic_observables() {
    let pot = Potential::polynomial(vec![0.0, 0.0, 1.0]);
    let s = solve_spectrum(&pot, 1.0, (0.0, 2.0), &OracleOptions::default()).unwrap();
    let v = observable(&s, 0, &Weight::potential(&pot)).unwrap();
    assert!((v - 0.5).abs() < 1e-6, "{v}");
    assert!((kinetic(&s, 0).unwrap() - 0.5).abs() < 1e-6);
    let half = observable(&s, 0, &Weight::indicator(0.0, f64::INFINITY)).unwrap();
    assert!((half - 0.5).abs() < 1e-7, "{half}");
}

#[test]
fn robin_spectra_are_ordered_inside_window() {
    let h = Potential::half_line(semiclass::potential::Branch::Poly(vec![0.0, 0.0, 1.0]));
    let opts = |b| OracleOptions {
        wall: BoundaryCondition::Robin { b },
        ..Default::default()
    };
    for b in [-0.5, 0.0, 2.0] {
        let s = solve_spectrum(&h, 0.1, (0.0, 2.0), &opts(b)).unwrap();
        assert!(s.eigenvalues.windows(2).all(|w| w[0] < w[1]));
        assert!(s.eigenvalues.iter().all(|l| *l > 0.0 && *l < 2.0));
    }
}

#[test]
fn out_of_range_vector_is_an_error() {
    let pot = Potential::polynomial(vec![0.0, 0.0, 1.0]);
    let s = solve_spectrum(&pot, 1.0, (0.0, 2.0), &OracleOptions::default()).unwrap();
    assert!(eigenvector(&s, 3).is_err());
}
