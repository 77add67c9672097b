//! Regular 4-polytopes with exact unit-sphere coordinates.

use crate::error::{Error, Result};
use crate::geom::{PointCloud, Vec4};

pub const NAMES: [&str; 4] = ["simplex", "cross", "hypercube", "cell24"];

const EPS: f64 = 1e-12;

pub fn by_name(name: &str) -> Result<PointCloud> {
    match name {
        "simplex" => Ok(simplex()),
        "cross" => Ok(cross_polytope()),
        "hypercube" => Ok(hypercube()),
        "cell24" => Ok(cell24()),
        other => Err(Error::UnknownCatalogName(other.to_string())),
    }
}

/// Regular 4-simplex: five unit vectors with mutual inner product -1/4.
///
/// Built from e₀..e₃ and t·(1,1,1,1) with t = (1 - √5)/4 (all edges √2),
/// recentred at the centroid and normalized.
pub fn simplex() -> PointCloud {
    let t = (1.0 - 5f64.sqrt()) / 4.0;
    let mut raw: Vec<Vec4> = (0..4).map(Vec4::basis).collect();
    raw.push(Vec4::new(t, t, t, t));
    let centroid = raw.iter().fold(Vec4::ZERO, |a, p| a + *p) * 0.2;
    let pts = raw.into_iter().map(|p| p - centroid).collect();
    PointCloud::normalized(pts, EPS).expect("simplex coordinates are valid")
}

/// Cross-polytope ±e₀..±e₃.
pub fn cross_polytope() -> PointCloud {
    let pts = (0..4)
        .flat_map(|k| [Vec4::basis(k), -Vec4::basis(k)])
        .collect();
    PointCloud::new(pts, EPS).expect("cross-polytope coordinates are valid")
}

/// Hypercube (±½, ±½, ±½, ±½).
pub fn hypercube() -> PointCloud {
    let pts = (0..16u32)
        .map(|mask| {
            Vec4(std::array::from_fn(|k| {
                if mask & (1 << k) != 0 {
                    -0.5
                } else {
                    0.5
                }
            }))
        })
        .collect();
    PointCloud::new(pts, EPS).expect("hypercube coordinates are valid")
}

/// 24-cell: coordinate permutations of (±1, ±1, 0, 0)/√2.
pub fn cell24() -> PointCloud {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut pts = Vec::with_capacity(24);
    for i in 0..4 {
        for j in i + 1..4 {
            for (si, sj) in [(s, s), (s, -s), (-s, s), (-s, -s)] {
                let mut v = Vec4::ZERO;
                v[i] = si;
                v[j] = sj;
                pts.push(v);
            }
        }
    }
    PointCloud::new(pts, EPS).expect("24-cell coordinates are valid")
}
