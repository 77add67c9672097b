//! Downward flow of the spherical diameter on (S³)ⁿ.
//!
//! A run has three phases:
//!
//! 1. **Annealing.** Projected gradient descent on the log-sum-exp smoothing
//!    `(1/β) log Σ exp(β θᵢⱼ)` of the maximal geodesic distance, with β raised
//!    by `beta_growth` every `window` iterations up to `beta_max` and step
//!    `η = step / β`.
//! 2. **Polish.** Steepest descent on the exact max: the direction is the
//!    minimum-norm element of the convex hull of the gradients of all pairs
//!    within δ of the maximum, with Armijo backtracking; δ halves whenever no
//!    progress is possible, down to `delta_min`.
//! 3. **Coalescing.** Descent typically drives groups of points onto a common
//!    location. Points closer than `collapse_margin` are merged into one
//!    representative and the polish is repeated on the representatives. A
//!    run whose representatives number fewer than five, or no longer surround
//!    the origin, is a collapse.
//!
//! Random streams are ChaCha8 seeded per trial from
//! `splitmix64(splitmix64(splitmix64(master) ^ n) ^ trial)`, so sweeps give
//! identical rows regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{unit_project, PointCloud, ToleranceConfig, Vec4};
use crate::hull::{origin_strictly_interior, polytope_facets};
use crate::minnorm::min_norm_point;
use crate::pipeline::analyze;

/// Lower end of the open diameter range, arccos(-1/4).
pub fn d_simplex() -> f64 {
    (-0.25f64).acos()
}

/// Upper end of the open diameter range, arccos(-1/3).
pub fn d_tetrahedron() -> f64 {
    (-1.0f64 / 3.0).acos()
}

/// Distance from the range endpoints below which a diameter counts as
/// sitting on the endpoint.
pub const RANGE_MARGIN: f64 = 1e-6;

pub fn in_open_range(d: f64) -> bool {
    d > d_simplex() + RANGE_MARGIN && d < d_tetrahedron() - RANGE_MARGIN
}

const MIN_SIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub n: usize,
    pub seed: u64,
    /// Iteration cap for each polish phase.
    pub max_iters: usize,
    /// Annealing step numerator: η = step / β.
    pub step: f64,
    pub beta0: f64,
    pub beta_max: f64,
    pub beta_growth: f64,
    /// Iterations per β level.
    pub window: usize,
    pub grad_tol: f64,
    /// Slack defining the active pairs in the convergence test.
    pub active_eps: f64,
    /// Euclidean radius below which points coalesce.
    pub collapse_margin: f64,
    /// Initial and final active-set slack of the polish.
    pub delta0: f64,
    pub delta_min: f64,
    /// Trailing polish iterations over which the active set must not change.
    pub stable_window: usize,
    /// Random restarts allowed to find a start surrounding the origin.
    pub init_attempts: usize,
}

impl FlowConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        FlowConfig {
            n,
            seed,
            max_iters: 20_000,
            step: 1e-2,
            beta0: 50.0,
            beta_max: 12_800.0,
            beta_growth: 2.0,
            window: 500,
            grad_tol: 1e-6,
            active_eps: 1e-4,
            collapse_margin: 1e-3,
            delta0: 0.05,
            delta_min: 1e-10,
            stable_window: 20,
            init_attempts: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.n < 5 {
            return bad("n must be at least 5");
        }
        if !(self.step > 0.0) {
            return bad("step must be positive");
        }
        if !(self.beta0 >= 1.0) || !(self.beta_max >= self.beta0) {
            return bad("need 1 <= beta0 <= beta_max");
        }
        if !(self.beta_growth > 1.0) {
            return bad("beta_growth must exceed 1");
        }
        if self.window == 0 || self.max_iters == 0 || self.init_attempts == 0 {
            return bad("window, max_iters and init_attempts must be positive");
        }
        for (name, v) in [
            ("grad_tol", self.grad_tol),
            ("active_eps", self.active_eps),
            ("collapse_margin", self.collapse_margin),
            ("delta0", self.delta0),
            ("delta_min", self.delta_min),
        ] {
            if !(v > 0.0) {
                return bad(&format!("{name} must be positive"));
            }
        }
        if self.delta_min >= self.delta0 {
            return bad("delta_min must be below delta0");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub points: Vec<Vec4>,
    pub iter: usize,
    /// Current spherical diameter.
    pub diameter: f64,
    pub grad_norm: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlowOutcome {
    Converged,
    Collapsed,
    MaxIters,
}

/// One annealing iteration: β, the smoothed value and the true diameter
/// before the step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iter: usize,
    pub beta: f64,
    pub smoothed: f64,
    pub diameter: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowRun {
    pub state: FlowState,
    pub outcome: FlowOutcome,
    pub trace: Vec<TracePoint>,
    /// Number of flow points before coalescing.
    pub n_initial: usize,
}

/// Log-sum-exp smoothing of the maximal pairwise geodesic distance, and its
/// gradient projected onto the tangent space at each point.
pub fn smoothed_diameter(points: &[Vec4], beta: f64) -> Result<(f64, Vec<Vec4>)> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, got: n });
    }
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    let mut max_theta = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let c = points[i].dot(&points[j]).clamp(-1.0, 1.0);
            let theta = c.acos();
            max_theta = max_theta.max(theta);
            pairs.push((i, j, c, theta));
        }
    }
    let weights: Vec<f64> = pairs
        .iter()
        .map(|p| (beta * (p.3 - max_theta)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    let value = max_theta + total.ln() / beta;

    let mut grad = vec![Vec4::ZERO; n];
    for (&(i, j, c, _), &w) in pairs.iter().zip(&weights) {
        let w = w / total;
        if w == 0.0 {
            continue;
        }
        let s = (1.0 - c * c).max(0.0).sqrt();
        if s < MIN_SIN {
            if w > 1e-15 {
                return Err(Error::NumericalDegeneracy(format!(
                    "pair ({i}, {j}) is coincident or antipodal"
                )));
            }
            continue;
        }
        // ∂θ/∂xᵢ = -(xⱼ - c xᵢ)/sin θ
        grad[i] -= (points[j] - points[i] * c) * (w / s);
        grad[j] -= (points[i] - points[j] * c) * (w / s);
    }
    for (g, x) in grad.iter_mut().zip(points) {
        *g -= *x * g.dot(x);
    }
    Ok((value, grad))
}

/// Maximal pairwise geodesic distance.
pub fn spherical_diameter(points: &[Vec4]) -> f64 {
    let mut min_ip = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            min_ip = min_ip.min(points[i].dot(&points[j]));
        }
    }
    min_ip.clamp(-1.0, 1.0).acos()
}

fn random_sphere_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec4> {
    (0..n)
        .map(|_| loop {
            let v = Vec4(std::array::from_fn(|_| StandardNormal.sample(rng)));
            if let Ok(u) = unit_project(v) {
                break u;
            }
        })
        .collect()
}

fn surrounds_origin(points: &[Vec4], eps: f64) -> bool {
    let tol = ToleranceConfig {
        eps_geom: eps,
        ..ToleranceConfig::flow()
    };
    polytope_facets(points, &tol)
        .map(|f| origin_strictly_interior(&f, eps))
        .unwrap_or(false)
}

/// Random start whose hull contains the origin, by rejection.
fn initial_points(config: &FlowConfig) -> Option<Vec<Vec4>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.init_attempts {
        let pts = random_sphere_points(&mut rng, config.n);
        if surrounds_origin(&pts, 1e-6) {
            return Some(pts);
        }
    }
    None
}

pub fn run_flow(config: &FlowConfig) -> Result<FlowRun> {
    config.validate()?;
    match initial_points(config) {
        Some(pts) => run_flow_from(config, pts),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let pts = random_sphere_points(&mut rng, config.n);
            Ok(collapsed(config, pts, 0, Vec::new()))
        }
    }
}

fn collapsed(config: &FlowConfig, points: Vec<Vec4>, iter: usize, trace: Vec<TracePoint>) -> FlowRun {
    FlowRun {
        state: FlowState {
            diameter: spherical_diameter(&points),
            points,
            iter,
            grad_norm: f64::NAN,
            beta: config.beta_max,
        },
        outcome: FlowOutcome::Collapsed,
        trace,
        n_initial: config.n,
    }
}

/// Runs the flow from explicit starting points (normalized on entry).
pub fn run_flow_from(config: &FlowConfig, initial: Vec<Vec4>) -> Result<FlowRun> {
    let mut points = initial
        .into_iter()
        .map(unit_project)
        .collect::<Result<Vec<_>>>()?;
    let n_initial = points.len();
    let mut trace = Vec::new();
    let mut iter = 0;

    // annealing
    let mut beta = config.beta0;
    loop {
        let eta = config.step / beta;
        for _ in 0..config.window {
            let (value, grad) = match smoothed_diameter(&points, beta) {
                Ok(v) => v,
                Err(_) => return Ok(collapsed(config, points, iter, trace)),
            };
            trace.push(TracePoint {
                iter,
                beta,
                smoothed: value,
                diameter: spherical_diameter(&points),
            });
            for (x, g) in points.iter_mut().zip(&grad) {
                *x = unit_project(*x - *g * eta)?;
            }
            iter += 1;
        }
        if beta >= config.beta_max {
            break;
        }
        beta = (beta * config.beta_growth).min(config.beta_max);
    }

    let first = polish(&points, config);
    iter += first.iters;
    if first.degenerate {
        return Ok(collapsed(config, first.points, iter, trace));
    }
    let reps = coalesce(&first.points, config.collapse_margin);
    if reps.len() < PointCloud::MIN_POINTS || !surrounds_origin(&reps, 1e-6) {
        return Ok(collapsed(config, reps, iter, trace));
    }
    let second = polish(&reps, config);
    iter += second.iters;
    let points = second.points;
    if second.degenerate || coalesce(&points, config.collapse_margin).len() != points.len() {
        return Ok(collapsed(config, points, iter, trace));
    }

    let grad_norm = match active_gradients(&points, config.active_eps) {
        Ok((grads, _, _)) => norm(&min_norm_point(&grads).0),
        Err(_) => return Ok(collapsed(config, points, iter, trace)),
    };
    let tail = second
        .active_history
        .len()
        .saturating_sub(config.stable_window);
    let stable = second.active_history[tail..]
        .windows(2)
        .all(|w| w[0] == w[1]);
    let outcome = if grad_norm < config.grad_tol && stable {
        FlowOutcome::Converged
    } else {
        FlowOutcome::MaxIters
    };
    Ok(FlowRun {
        state: FlowState {
            diameter: spherical_diameter(&points),
            points,
            iter,
            grad_norm,
            beta,
        },
        outcome,
        trace,
        n_initial,
    })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Flattened (length 4n) gradients of the active θᵢⱼ, the active pairs and
/// the maximal distance.
type ActiveSet = (Vec<Vec<f64>>, Vec<(usize, usize)>, f64);

/// The pairs within `delta` of the maximal distance.
fn active_gradients(points: &[Vec4], delta: f64) -> Result<ActiveSet> {
    let n = points.len();
    let mut thetas = Vec::with_capacity(n * (n - 1) / 2);
    let mut max_theta = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let c = points[i].dot(&points[j]).clamp(-1.0, 1.0);
            let t = c.acos();
            max_theta = max_theta.max(t);
            thetas.push((i, j, c, t));
        }
    }
    let mut grads = Vec::new();
    let mut pairs = Vec::new();
    for &(i, j, c, t) in &thetas {
        if t < max_theta - delta {
            continue;
        }
        let s = (1.0 - c * c).max(0.0).sqrt();
        if s < MIN_SIN {
            return Err(Error::NumericalDegeneracy(format!(
                "active pair ({i}, {j}) is coincident or antipodal"
            )));
        }
        let gi = (points[j] - points[i] * c) * (-1.0 / s);
        let gj = (points[i] - points[j] * c) * (-1.0 / s);
        let mut g = vec![0.0; 4 * n];
        g[4 * i..4 * i + 4].copy_from_slice(&gi.0);
        g[4 * j..4 * j + 4].copy_from_slice(&gj.0);
        grads.push(g);
        pairs.push((i, j));
    }
    Ok((grads, pairs, max_theta))
}

struct Polished {
    points: Vec<Vec4>,
    iters: usize,
    /// Active pairs at `active_eps` after each polish iteration.
    active_history: Vec<Vec<(usize, usize)>>,
    /// An active pair became coincident: the points have concentrated.
    degenerate: bool,
}

const ARMIJO: f64 = 0.3;
const MAX_STEP: f64 = 0.2;

fn polish(start: &[Vec4], config: &FlowConfig) -> Polished {
    let n = start.len();
    let mut x = start.to_vec();
    let mut delta = config.delta0;
    let mut step = 0.02;
    let mut history = Vec::new();
    let mut iters = 0;
    let mut degenerate = false;
    while iters < config.max_iters {
        iters += 1;
        let Ok((grads, _, m)) = active_gradients(&x, delta) else {
            degenerate = true;
            break;
        };
        let dir = min_norm_point(&grads).0;
        let dn2: f64 = dir.iter().map(|v| v * v).sum();
        let mut accepted = false;
        if dn2.sqrt() > 1e-14 {
            let mut t = step;
            while t > 1e-14 {
                // the step is tangent, so the projection never sees a zero vector
                let trial: Vec<Vec4> = (0..n)
                    .map(|i| {
                        let d = Vec4([dir[4 * i], dir[4 * i + 1], dir[4 * i + 2], dir[4 * i + 3]]);
                        let y = x[i] - d * t;
                        y * (1.0 / y.norm())
                    })
                    .collect();
                if spherical_diameter(&trial) < m - ARMIJO * t * dn2 {
                    x = trial;
                    step = (2.0 * t).min(MAX_STEP);
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
        }
        match active_gradients(&x, config.active_eps) {
            Ok((_, pairs, _)) => history.push(pairs),
            Err(_) => {
                degenerate = true;
                break;
            }
        }
        if !accepted {
            delta *= 0.5;
            if delta < config.delta_min {
                break;
            }
        }
    }
    Polished {
        points: x,
        iters,
        active_history: history,
        degenerate,
    }
}

/// Merges points within `margin` (single linkage) into normalized centroids,
/// ordered by their first member.
pub fn coalesce(points: &[Vec4], margin: f64) -> Vec<Vec4> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i].dist(&points[j]) < margin {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut sums: Vec<Option<Vec4>> = vec![None; n];
    for (i, p) in points.iter().enumerate() {
        let r = find(&mut parent, i);
        sums[r] = Some(sums[r].unwrap_or(Vec4::ZERO) + *p);
    }
    sums.into_iter()
        .flatten()
        .filter_map(|s| unit_project(s).ok())
        .collect()
}

/// One line of the results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub trial: usize,
    pub n: usize,
    pub converged: bool,
    pub collapsed: bool,
    /// Spherical diameter of the final configuration.
    pub d: f64,
    pub in_range: bool,
    pub is_asp: bool,
    pub c: Option<f64>,
    pub residual: Option<f64>,
    pub f: Option<[usize; 4]>,
    pub f03: Option<usize>,
    pub e_g: Option<usize>,
    /// 3f₀ − 5.
    pub bound: Option<i64>,
    /// e(G) = 3f₀ − 5; present only for certified rows.
    pub equality: Option<bool>,
    pub g2: Option<i64>,
    /// Why a converged configuration could not be classified.
    #[serde(skip)]
    pub failure: Option<String>,
}

impl TableRow {
    fn empty(trial: usize, n: usize, d: f64) -> Self {
        TableRow {
            trial,
            n,
            converged: false,
            collapsed: false,
            d,
            in_range: false,
            is_asp: false,
            c: None,
            residual: None,
            f: None,
            f03: None,
            e_g: None,
            bound: None,
            equality: None,
            g2: None,
            failure: None,
        }
    }

    /// Theorem-1 status for certified rows: e(G) ≥ 3f₀ − 5.
    pub fn bound_ok(&self) -> Option<bool> {
        if !self.is_asp {
            return None;
        }
        Some(self.e_g? as i64 >= self.bound?)
    }
}

/// Runs the full pipeline on a converged configuration.
pub fn classify(points: &[Vec4], tol: &ToleranceConfig) -> TableRow {
    let d = spherical_diameter(points);
    let mut row = TableRow::empty(0, points.len(), d);
    row.converged = true;
    row.in_range = in_open_range(d);
    let analysis = PointCloud::new(points.to_vec(), tol.eps_unit).and_then(|cloud| analyze(&cloud, tol));
    match analysis {
        Ok(a) => {
            if let Some(p) = &a.polarity {
                row.is_asp = p.is_asp;
                row.c = Some(p.c);
                row.residual = Some(p.residual);
            }
            row.f = Some(a.stats.f);
            row.f03 = Some(a.stats.f03);
            row.e_g = Some(a.graph.edge_count());
            row.bound = Some(3 * a.stats.f[0] as i64 - 5);
            row.equality = a.verify.theorem1.map(|t| t.equality);
            row.g2 = Some(a.verify.g2_flag);
        }
        Err(e) => row.failure = Some(e.to_string()),
    }
    row
}

/// Deterministic per-trial seed.
pub fn trial_seed(master_seed: u64, n: usize, trial: usize) -> u64 {
    fn splitmix64(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    splitmix64(splitmix64(splitmix64(master_seed) ^ n as u64) ^ trial as u64)
}

/// Runs one trial and classifies it.
pub fn run_trial(template: &FlowConfig, n: usize, trial: usize, master_seed: u64, tol: &ToleranceConfig) -> TableRow {
    let config = FlowConfig {
        n,
        seed: trial_seed(master_seed, n, trial),
        ..template.clone()
    };
    let run = match run_flow(&config) {
        Ok(r) => r,
        Err(e) => {
            let mut row = TableRow::empty(trial, n, f64::NAN);
            row.failure = Some(e.to_string());
            return row;
        }
    };
    match run.outcome {
        FlowOutcome::Converged => TableRow {
            trial,
            n,
            ..classify(&run.state.points, tol)
        },
        FlowOutcome::Collapsed => TableRow {
            collapsed: true,
            ..TableRow::empty(trial, n, run.state.diameter)
        },
        FlowOutcome::MaxIters => TableRow::empty(trial, n, run.state.diameter),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub trials: usize,
    pub converged: usize,
    pub collapsed: usize,
    pub certified: usize,
    pub certified_in_range: usize,
    pub equality_in_range: usize,
    /// Certified rows with e(G) < 3f₀ − 5.
    pub bound_violations: Vec<(usize, usize)>,
    /// Certified in-range rows with e(G) ≠ 3f₀ − 5, as (n, trial).
    pub non_equality_in_range: Vec<(usize, usize)>,
}

impl SweepSummary {
    pub fn from_rows(rows: &[TableRow]) -> Self {
        let mut s = SweepSummary {
            trials: rows.len(),
            ..Default::default()
        };
        for r in rows {
            s.converged += r.converged as usize;
            s.collapsed += r.collapsed as usize;
            if r.is_asp {
                s.certified += 1;
                if r.bound_ok() == Some(false) {
                    s.bound_violations.push((r.n, r.trial));
                }
                if r.in_range {
                    s.certified_in_range += 1;
                    if r.equality == Some(true) {
                        s.equality_in_range += 1;
                    } else {
                        s.non_equality_in_range.push((r.n, r.trial));
                    }
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<TableRow>,
    pub summary: SweepSummary,
}

/// Runs `trials_per_n` trials for every n, concurrently, ordered by (n, trial).
pub fn sweep(
    n_list: &[usize],
    trials_per_n: usize,
    master_seed: u64,
    template: &FlowConfig,
    tol: &ToleranceConfig,
) -> Result<Sweep> {
    for &n in n_list {
        FlowConfig { n, ..template.clone() }.validate()?;
    }
    let jobs: Vec<(usize, usize)> = n_list
        .iter()
        .flat_map(|&n| (0..trials_per_n).map(move |t| (n, t)))
        .collect();
    let rows: Vec<TableRow> = jobs
        .par_iter()
        .map(|&(n, t)| run_trial(template, n, t, master_seed, tol))
        .collect();
    let summary = SweepSummary::from_rows(&rows);
    Ok(Sweep { rows, summary })
}
