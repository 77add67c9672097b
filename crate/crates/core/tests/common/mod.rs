//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use nalgebra::{DMatrix, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use selfpolar::{catalog, Vec4};

/// Faces of each dimension as sorted vertex sets.
pub type FaceSets = [BTreeSet<Vec<usize>>; 4];

/// Rank of the differences `p_i - p_0` by singular values.
pub fn affine_rank(points: &[Vec4], ids: &[usize], tol: f64) -> usize {
    if ids.len() < 2 {
        return 0;
    }
    let base = points[ids[0]];
    let rows = ids.len() - 1;
    let m = DMatrix::from_fn(rows, 4, |r, c| points[ids[r + 1]][c] - base[c]);
    m.singular_values().iter().filter(|&&s| s > tol).count()
}

/// Brute-force face oracle: every affinely independent 4-subset spans a
/// hyperplane; it supports the hull when no point lies strictly on both
/// sides, and the points on it form a facet. Lower faces are the closure of
/// the facets under intersection.
pub fn oracle_faces(points: &[Vec4], eps: f64) -> FaceSets {
    let n = points.len();
    let scale = points.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let mut facets = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let q = [points[a], points[b], points[c], points[d]];
                    // rows (p, -1); the null vector is (normal, offset)
                    let m = DMatrix::from_fn(4, 5, |r, k| if k < 4 { q[r][k] / scale } else { -1.0 });
                    let svd = (m.transpose() * &m).symmetric_eigen();
                    let mut order: Vec<usize> = (0..5).collect();
                    order.sort_by(|&i, &j| svd.eigenvalues[i].total_cmp(&svd.eigenvalues[j]));
                    if svd.eigenvalues[order[1]] < 1e-10 {
                        continue;
                    }
                    let v = svd.eigenvectors.column(order[0]);
                    let normal = Vec4([v[0], v[1], v[2], v[3]]);
                    let len = normal.norm();
                    if len < 1e-12 {
                        continue;
                    }
                    let h = |p: &Vec4| (normal.dot(p) / scale - v[4]) / len;
                    let (mut above, mut below) = (false, false);
                    let mut on = Vec::new();
                    for (k, p) in points.iter().enumerate() {
                        let s = h(p);
                        if s > eps {
                            above = true;
                        } else if s < -eps {
                            below = true;
                        } else {
                            on.push(k);
                        }
                    }
                    if !(above && below) {
                        facets.insert(on);
                    }
                }
            }
        }
    }
    let mut all: BTreeSet<Vec<usize>> = facets.clone();
    let mut frontier: Vec<Vec<usize>> = facets.iter().cloned().collect();
    while let Some(f) = frontier.pop() {
        for g in &facets {
            let common: Vec<usize> = f.iter().copied().filter(|x| g.binary_search(x).is_ok()).collect();
            if !common.is_empty() && all.insert(common.clone()) {
                frontier.push(common);
            }
        }
    }
    let mut out: FaceSets = Default::default();
    for face in all {
        let dim = affine_rank(points, &face, 1e-7 * scale);
        out[dim].insert(face);
    }
    out
}

pub fn lattice_faces(lattice: &selfpolar::lattice::FaceLattice) -> FaceSets {
    std::array::from_fn(|d| lattice.faces(d).iter().cloned().collect())
}

pub fn random_unit(rng: &mut impl Rng) -> Vec4 {
    loop {
        let v = Vec4(std::array::from_fn(|_| StandardNormal.sample(rng)));
        let n = v.norm();
        if n > 1e-6 {
            return v * (1.0 / n);
        }
    }
}

/// `n` uniform points on S³ (in general position with probability one).
pub fn random_sphere(seed: u64, n: usize) -> Vec<Vec4> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_unit(&mut rng)).collect()
}

/// A random rotation of R⁴ from the QR factorization of a Gaussian matrix.
pub fn random_rotation(rng: &mut impl Rng) -> Matrix4<f64> {
    let g = Matrix4::from_fn(|_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // fix column signs so the distribution is Haar
    let signs = Matrix4::from_diagonal(&r.diagonal().map(|x: f64| x.signum()));
    q * signs
}

pub fn rotate(points: &[Vec4], rot: &Matrix4<f64>) -> Vec<Vec4> {
    points
        .iter()
        .map(|p| {
            let v = rot * nalgebra::Vector4::from(p.0);
            Vec4([v[0], v[1], v[2], v[3]])
        })
        .collect()
}

/// The 48 vertices of the 24-cell and its dual pair of cross-polytope and
/// hypercube, all on the unit sphere; subsets give non-simplicial hulls.
pub fn lattice_pool() -> Vec<Vec4> {
    let mut pool = catalog::cell24().into_points();
    pool.extend(catalog::cross_polytope().into_points());
    pool.extend(catalog::hypercube().into_points());
    pool
}

/// A random `n`-subset of the 48-point pool, in random order.
pub fn random_pool_subset(seed: u64, n: usize) -> Vec<Vec4> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = lattice_pool();
    rand::seq::index::sample(&mut rng, pool.len(), n)
        .into_iter()
        .map(|i| pool[i])
        .collect()
}
