//! Diameter graph: pairs of vertices at maximal mutual distance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ToleranceConfig, Vec4};
use crate::lattice::FlagStats;
use crate::polarity::PolarityReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiameterGraph {
    /// Sorted pairs (i, j), i < j.
    pub edges: Vec<(usize, usize)>,
    /// Maximal Euclidean distance.
    pub max_dist: f64,
    /// arccos of the minimal pairwise inner product, in radians.
    pub spherical_d: f64,
}

impl DiameterGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Pairs within `eps_diam` (absolute, Euclidean) of the maximal distance.
pub fn diameter_graph(points: &[Vec4], tol: &ToleranceConfig) -> Result<DiameterGraph> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            need: 2,
            got: points.len(),
        });
    }
    let n = points.len();
    let mut max_dist = 0.0_f64;
    let mut min_ip = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            max_dist = max_dist.max(points[i].dist(&points[j]));
            min_ip = min_ip.min(points[i].dot(&points[j]));
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if points[i].dist(&points[j]) >= max_dist - tol.eps_diam {
                edges.push((i, j));
            }
        }
    }
    Ok(DiameterGraph {
        edges,
        max_dist,
        spherical_d: min_ip.clamp(-1.0, 1.0).acos(),
    })
}

/// Whether f₀₃ = 2·e(G); only meaningful for certified anti-self-polar input.
pub fn check_f03_double_count(
    graph: &DiameterGraph,
    stats: &FlagStats,
    report: &PolarityReport,
) -> Result<bool> {
    if !report.is_asp {
        return Err(Error::NotAntiSelfPolar);
    }
    Ok(stats.f03 == 2 * graph.edge_count())
}
