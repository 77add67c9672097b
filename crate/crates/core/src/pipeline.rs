//! The full analysis of one point set: hull, lattice, census, polarity,
//! diameter graph and the integer checks.

use serde::Serialize;

use crate::diameter::{diameter_graph, DiameterGraph};
use crate::error::Result;
use crate::geom::{PointCloud, ToleranceConfig};
use crate::hull::{origin_strictly_interior, polytope_facets, Facet};
use crate::lattice::{
    build_lattice, euler_residual, flag_stats, polygon_census, FaceLattice, FlagStats,
    PolygonCensus,
};
use crate::polarity::{certify_anti_self_polar, polar_dual, PolarityReport};
use crate::verify::{verify, VerifyReport};

#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub facets: Vec<Facet>,
    #[serde(skip)]
    pub lattice: FaceLattice,
    pub stats: FlagStats,
    pub census: PolygonCensus,
    /// f₀ − f₁ + f₂ − f₃; zero for every 4-polytope.
    pub euler: i64,
    /// `None` when the origin is not strictly inside the hull.
    pub polarity: Option<PolarityReport>,
    pub graph: DiameterGraph,
    /// Flag statistics of the polar dual, when it exists.
    pub dual_stats: Option<FlagStats>,
    pub verify: VerifyReport,
}

impl Analysis {
    pub fn is_asp(&self) -> bool {
        self.polarity.as_ref().is_some_and(|p| p.is_asp)
    }
}

pub fn analyze(cloud: &PointCloud, tol: &ToleranceConfig) -> Result<Analysis> {
    tol.validate()?;
    let facets = polytope_facets(cloud.points(), tol)?;
    let lattice = build_lattice(&facets, cloud.points(), tol)?;
    let stats = flag_stats(&lattice);
    let census = polygon_census(&lattice);
    let euler = euler_residual(&lattice);
    let graph = diameter_graph(cloud.points(), tol)?;

    let (polarity, dual_stats) = if origin_strictly_interior(&facets, tol.eps_geom) {
        let report = certify_anti_self_polar(cloud, &facets, tol)?;
        let dual = polar_dual(&facets, tol)?;
        let dual_facets = polytope_facets(&dual, tol)?;
        let dual_lattice = build_lattice(&dual_facets, &dual, tol)?;
        (Some(report), Some(flag_stats(&dual_lattice)))
    } else {
        (None, None)
    };

    let verify = verify(&census, &stats, &graph, polarity.as_ref(), dual_stats.as_ref());
    Ok(Analysis {
        facets,
        lattice,
        stats,
        census,
        euler,
        polarity,
        graph,
        dual_stats,
        verify,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn catalog_analyses() {
        let tol = ToleranceConfig::exact();
        for (name, f, g2, asp) in [
            ("simplex", [5, 10, 10, 5], 0, true),
            ("cross", [8, 24, 32, 16], 2, false),
            ("hypercube", [16, 32, 24, 8], 2, false),
            ("cell24", [24, 96, 96, 24], 10, false),
        ] {
            let a = analyze(&catalog::by_name(name).unwrap(), &tol).unwrap();
            assert_eq!(a.stats.f, f, "{name}");
            assert_eq!(a.euler, 0);
            assert_eq!(a.verify.g2_flag, g2);
            assert_eq!(a.verify.g2_census, g2);
            assert_eq!(a.verify.dual_g2, Some(g2));
            assert_eq!(a.is_asp(), asp);
            assert_eq!(a.verify.theorem1.is_some(), asp);
            assert!(a.verify.all_ok());
        }
    }
}
