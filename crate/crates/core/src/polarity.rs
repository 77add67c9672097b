//! Polar duality with respect to the unit sphere and certification of the
//! anti-self-polar relation P* = -cP.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{PointCloud, ToleranceConfig, Vec4};
use crate::hull::Facet;

/// Outcome of matching the polar dual against the negated, rescaled polytope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarityReport {
    pub is_asp: bool,
    /// Least-squares scale with dual_vertex(φ) ≈ -c · v_σ(φ).
    pub c: f64,
    /// `sigma[φ]` is the vertex matched to facet φ.
    pub sigma: Vec<usize>,
    /// max over facets of |dual_vertex(φ) + c · v_σ(φ)|.
    pub residual: f64,
    pub dual_vertices: Vec<Vec4>,
}

/// One dual vertex `normal / h` per facet.
pub fn polar_dual(facets: &[Facet], tol: &ToleranceConfig) -> Result<Vec<Vec4>> {
    facets
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if f.support <= tol.eps_geom {
                Err(Error::OriginNotInterior {
                    facet: i,
                    support: f.support,
                })
            } else {
                Ok(f.unit_normal * (1.0 / f.support))
            }
        })
        .collect()
}

/// Matches each dual vertex to the cloud point with the most opposite
/// direction, fits c by least squares and measures the residual.
///
/// Ambiguous matches (runner-up within `eps_polar` of the best) and
/// non-bijective matchings are reported as not anti-self-polar.
pub fn certify_anti_self_polar(
    cloud: &PointCloud,
    facets: &[Facet],
    tol: &ToleranceConfig,
) -> Result<PolarityReport> {
    let dual = polar_dual(facets, tol)?;
    let pts = cloud.points();
    let mut sigma = Vec::with_capacity(dual.len());
    let mut ambiguous = false;
    for u in &dual {
        let dir = *u * (1.0 / u.norm());
        let mut best = (usize::MAX, f64::NEG_INFINITY);
        let mut second = f64::NEG_INFINITY;
        for (k, v) in pts.iter().enumerate() {
            let score = -dir.dot(v);
            if score > best.1 {
                second = best.1;
                best = (k, score);
            } else if score > second {
                second = score;
            }
        }
        if best.1 - second <= tol.eps_polar {
            ambiguous = true;
        }
        sigma.push(best.0);
    }

    let num: f64 = dual.iter().zip(&sigma).map(|(u, &k)| -u.dot(&pts[k])).sum();
    let den: f64 = sigma.iter().map(|&k| pts[k].norm_sq()).sum();
    let c = num / den;
    let residual = dual
        .iter()
        .zip(&sigma)
        .map(|(u, &k)| (*u + pts[k] * c).norm())
        .fold(0.0, f64::max);

    let mut seen = vec![false; pts.len()];
    let mut bijective = dual.len() == pts.len();
    for &k in &sigma {
        bijective &= !std::mem::replace(&mut seen[k], true);
    }

    Ok(PolarityReport {
        is_asp: bijective && !ambiguous && c > 0.0 && residual <= tol.eps_polar,
        c,
        sigma,
        residual,
        dual_vertices: dual,
    })
}

/// For each vertex, the facet whose dual vertex is -c·v.
pub fn opposition_map(report: &PolarityReport) -> Result<Vec<usize>> {
    if !report.is_asp {
        return Err(Error::NotAntiSelfPolar);
    }
    let mut inverse = vec![usize::MAX; report.sigma.len()];
    for (facet, &v) in report.sigma.iter().enumerate() {
        inverse[v] = facet;
    }
    Ok(inverse)
}
