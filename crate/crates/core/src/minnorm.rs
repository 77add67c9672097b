//! Minimum-norm point of the convex hull of a finite vector set (Wolfe's
//! algorithm). The polish phase of the diameter flow uses it to find the
//! steepest-descent direction of a max of smooth functions.

use nalgebra::{DMatrix, DVector};

const Z1: f64 = 1e-12;
const Z2: f64 = 1e-10;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Returns the minimum-norm point and its convex weights over `vectors`.
pub(crate) fn min_norm_point(vectors: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let k = vectors.len();
    assert!(k > 0, "min_norm_point needs at least one vector");
    let dim = vectors[0].len();
    let norms: Vec<f64> = vectors.iter().map(|v| dot(v, v)).collect();
    let max_norm = norms.iter().cloned().fold(0.0, f64::max);
    let start = (0..k).min_by(|&a, &b| norms[a].total_cmp(&norms[b])).unwrap();

    let mut support = vec![start];
    let mut weights = vec![1.0];
    let combine = |support: &[usize], weights: &[f64]| {
        let mut x = vec![0.0; dim];
        for (&s, &w) in support.iter().zip(weights) {
            for (xi, vi) in x.iter_mut().zip(&vectors[s]) {
                *xi += w * vi;
            }
        }
        x
    };
    let mut x = vectors[start].clone();

    for _ in 0..(10 * k + 100) {
        let xx = dot(&x, &x);
        let (j, xj) = (0..k)
            .map(|j| (j, dot(&x, &vectors[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xx - xj <= Z1 * max_norm.max(1e-300) || support.contains(&j) {
            break;
        }
        support.push(j);
        weights.push(0.0);

        loop {
            let alpha = affine_minimizer(vectors, &support);
            if alpha.iter().all(|&a| a > Z2) {
                weights = alpha;
                break;
            }
            let theta = support
                .iter()
                .enumerate()
                .filter(|&(i, _)| alpha[i] <= Z2)
                .map(|(i, _)| {
                    let denom = weights[i] - alpha[i];
                    if denom > 0.0 {
                        weights[i] / denom
                    } else {
                        0.0
                    }
                })
                .fold(1.0_f64, f64::min)
                .clamp(0.0, 1.0);
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = theta * a + (1.0 - theta) * *w;
            }
            let mut i = 0;
            let mut removed = false;
            while i < support.len() {
                if weights[i] <= Z2 {
                    support.remove(i);
                    weights.remove(i);
                    removed = true;
                } else {
                    i += 1;
                }
            }
            if !removed {
                // drop the smallest weight so the minor loop terminates
                let (m, _) = weights
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .unwrap();
                support.remove(m);
                weights.remove(m);
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            if support.len() == 1 {
                weights = vec![1.0];
                break;
            }
        }
        x = combine(&support, &weights);
    }

    let mut full = vec![0.0; k];
    for (&s, &w) in support.iter().zip(&weights) {
        full[s] = w;
    }
    (x, full)
}

/// Weights α (summing to one) minimizing |Σ α_i v_{S_i}|.
fn affine_minimizer(vectors: &[Vec<f64>], support: &[usize]) -> Vec<f64> {
    let s = support.len();
    let mut m = DMatrix::<f64>::zeros(s + 1, s + 1);
    for a in 0..s {
        for b in a..s {
            let g = dot(&vectors[support[a]], &vectors[support[b]]);
            m[(a, b)] = g;
            m[(b, a)] = g;
        }
        m[(a, s)] = 1.0;
        m[(s, a)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(s + 1);
    rhs[s] = 1.0;
    let sol = m
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|x| x.iter().all(|v| v.is_finite()))
        .unwrap_or_else(|| {
            m.svd(true, true)
                .solve(&rhs, 1e-14)
                .unwrap_or_else(|_| DVector::from_element(s + 1, 1.0 / s as f64))
        });
    sol.iter().take(s).copied().collect()
}
