mod common;

use common::random_sphere;
use selfpolar::flow::{
    classify, coalesce, run_flow, run_flow_from, smoothed_diameter, spherical_diameter, sweep,
    trial_seed, FlowConfig, FlowOutcome,
};
use selfpolar::io::rows_to_csv;
use selfpolar::pipeline::analyze;
use selfpolar::polarity::opposition_map;
use selfpolar::PointCloud;
use selfpolar::{ToleranceConfig, Vec4};

/// Log-sum-exp of pairwise geodesic distances of the normalized points,
/// written independently of the library.
fn reference_value(x: &[Vec4], beta: f64) -> f64 {
    let u: Vec<Vec4> = x.iter().map(|p| *p * (1.0 / p.norm())).collect();
    let mut thetas = Vec::new();
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            thetas.push(u[i].dot(&u[j]).clamp(-1.0, 1.0).acos());
        }
    }
    let m = thetas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + thetas.iter().map(|t| (beta * (t - m)).exp()).sum::<f64>().ln() / beta
}

fn fd_relative_error(x: &[Vec4], beta: f64, h: f64) -> f64 {
    let (value, grad) = smoothed_diameter(x, beta).unwrap();
    assert!((value - reference_value(x, beta)).abs() < 1e-12);
    let mut err = 0.0;
    let mut norm = 0.0;
    for i in 0..x.len() {
        for k in 0..4 {
            let mut plus = x.to_vec();
            let mut minus = x.to_vec();
            plus[i][k] += h;
            minus[i][k] -= h;
            let fd = (reference_value(&plus, beta) - reference_value(&minus, beta)) / (2.0 * h);
            err += (fd - grad[i][k]).powi(2);
            norm += grad[i][k].powi(2);
        }
    }
    (err / norm).sqrt()
}

#[test]
fn gradient_matches_finite_differences() {
    for seed in 0..10 {
        let x = random_sphere(seed, 8);
        for beta in [10.0, 100.0, 1000.0] {
            let e = fd_relative_error(&x, beta, 1e-7);
            assert!(e < 1e-5, "seed {seed} beta {beta}: {e}");
        }
    }
}

#[test]
fn gradient_is_tangent() {
    let x = random_sphere(5, 12);
    let (_, g) = smoothed_diameter(&x, 300.0).unwrap();
    for (p, gi) in x.iter().zip(&g) {
        assert!(p.dot(gi).abs() < 1e-12);
    }
}

#[test]
fn flow_is_deterministic() {
    let config = FlowConfig::new(7, trial_seed(3, 7, 0));
    let a = run_flow(&config).unwrap();
    let b = run_flow(&config).unwrap();
    assert_eq!(a.state, b.state);
    assert_eq!(a.outcome, b.outcome);
    assert_eq!(a.trace, b.trace);
}

#[test]
fn annealing_trace_follows_schedule() {
    let config = FlowConfig::new(8, 11);
    let run = run_flow(&config).unwrap();
    // 50 · 2⁸ = 12800: nine levels of 500 iterations
    assert_eq!(run.trace.len(), 9 * 500);
    assert_eq!(run.trace[0].beta, 50.0);
    assert_eq!(run.trace[500].beta, 100.0);
    assert_eq!(run.trace.last().unwrap().beta, 12_800.0);
    for t in &run.trace {
        let pairs = (8 * 7 / 2) as f64;
        assert!(t.smoothed >= t.diameter - 1e-12);
        assert!(t.smoothed <= t.diameter + pairs.ln() / t.beta + 1e-12);
    }
}

#[test]
fn simplex_start_stays_put() {
    let simplex = selfpolar::catalog::simplex().into_points();
    let run = run_flow_from(&FlowConfig::new(5, 0), simplex.clone()).unwrap();
    assert_eq!(run.outcome, FlowOutcome::Converged);
    for (p, q) in run.state.points.iter().zip(&simplex) {
        assert!((*p - *q).norm() < 1e-9);
    }
}

#[test]
fn converged_runs_classify_consistently() {
    let tol = ToleranceConfig::flow();
    let mut certified = 0;
    for t in 0..6 {
        let run = run_flow(&FlowConfig::new(8, trial_seed(9, 8, t))).unwrap();
        if run.outcome != FlowOutcome::Converged {
            continue;
        }
        let pts = &run.state.points;
        assert_eq!(coalesce(pts, 1e-3).len(), pts.len());
        let row = classify(pts, &tol);
        assert!((row.d - spherical_diameter(pts)).abs() < 1e-15);
        if row.is_asp {
            certified += 1;
            assert!(row.bound_ok().unwrap());
            assert_eq!(row.f03.unwrap(), 2 * row.e_g.unwrap());
            // the facet opposite v lies on the hyperplane <x, v> = -1/c
            let cloud = PointCloud::new(pts.clone(), tol.eps_unit).unwrap();
            let a = analyze(&cloud, &tol).unwrap();
            let report = a.polarity.as_ref().unwrap();
            for (v, &f) in opposition_map(report).unwrap().iter().enumerate() {
                for &w in &a.facets[f].vertex_ids {
                    assert!((pts[v].dot(&pts[w]) + 1.0 / report.c).abs() < 1e-6);
                }
            }
        }
    }
    assert!(certified > 0);
}

#[test]
fn sweep_rows_are_ordered_and_reproducible() {
    let template = FlowConfig::new(5, 0);
    let tol = ToleranceConfig::flow();
    let a = sweep(&[5, 6], 3, 7, &template, &tol).unwrap();
    let b = sweep(&[5, 6], 3, 7, &template, &tol).unwrap();
    let keys: Vec<(usize, usize)> = a.rows.iter().map(|r| (r.n, r.trial)).collect();
    assert_eq!(keys, vec![(5, 0), (5, 1), (5, 2), (6, 0), (6, 1), (6, 2)]);
    assert_eq!(rows_to_csv(&a.rows).unwrap(), rows_to_csv(&b.rows).unwrap());
    assert_eq!(a.summary.trials, 6);
}

#[test]
fn sweep_rejects_small_n() {
    assert!(sweep(&[4], 1, 0, &FlowConfig::new(5, 0), &ToleranceConfig::flow()).is_err());
}
