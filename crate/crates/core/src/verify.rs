//! Integer checks on flag vectors: the g₂ gap computed from the polygon
//! census and from f₀₃, Kalai's and Stanley's inequalities, the lower bound
//! e(G) ≥ 3f₀ − 5 for anti-self-polar polytopes, and g₂ self-duality.

use serde::{Deserialize, Serialize};

use crate::diameter::DiameterGraph;
use crate::error::{Error, Result};
use crate::lattice::{FlagStats, PolygonCensus};
use crate::polarity::PolarityReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1 {
    /// 3f₀ − 5.
    pub bound: i64,
    pub ok: bool,
    pub equality: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub g2_census: i64,
    pub g2_flag: i64,
    pub kalai_lhs: i64,
    pub kalai_rhs: i64,
    pub stanley_ok: bool,
    /// `None` when the polytope is not certified anti-self-polar.
    pub theorem1: Option<Theorem1>,
    pub dual_g2: Option<i64>,
}

impl VerifyReport {
    /// All checks that apply to every 4-polytope, plus the diameter bound and
    /// dual g₂ when present.
    pub fn all_ok(&self) -> bool {
        self.g2_census == self.g2_flag
            && self.g2_census >= 0
            && self.stanley_ok
            && self.theorem1.is_none_or(|t| t.ok)
            && self.dual_g2.is_none_or(|d| d == self.g2_flag)
    }
}

/// (Σ_{j≥4} (j−3)·a^j, 4f₀ − f₁ − 10).
pub fn kalai_terms(census: &PolygonCensus, stats: &FlagStats) -> (i64, i64) {
    let lhs = census
        .a
        .iter()
        .filter(|(&j, _)| j >= 4)
        .map(|(&j, &n)| (j as i64 - 3) * n as i64)
        .sum();
    let f = stats.f.map(|x| x as i64);
    (lhs, 4 * f[0] - f[1] - 10)
}

pub fn g2_census(census: &PolygonCensus, stats: &FlagStats) -> i64 {
    let (lhs, rhs) = kalai_terms(census, stats);
    lhs - rhs
}

/// f₀₃ − 3f₀ − 3f₃ + 10.
pub fn g2_flag(stats: &FlagStats) -> i64 {
    stats.f03 as i64 - 3 * stats.f[0] as i64 - 3 * stats.f[3] as i64 + 10
}

/// f₀₃ ≥ 3f₀ + 3f₃ − 10.
pub fn stanley_check(stats: &FlagStats) -> bool {
    g2_flag(stats) >= 0
}

pub fn theorem1_check(
    graph: &DiameterGraph,
    stats: &FlagStats,
    report: &PolarityReport,
) -> Result<Theorem1> {
    if !report.is_asp {
        return Err(Error::NotAntiSelfPolar);
    }
    let bound = 3 * stats.f[0] as i64 - 5;
    let e = graph.edge_count() as i64;
    Ok(Theorem1 {
        bound,
        ok: e >= bound,
        equality: e == bound,
    })
}

pub fn dual_g2_check(p_stats: &FlagStats, dual_stats: &FlagStats) -> bool {
    g2_flag(p_stats) == g2_flag(dual_stats)
}

pub fn verify(
    census: &PolygonCensus,
    stats: &FlagStats,
    graph: &DiameterGraph,
    report: Option<&PolarityReport>,
    dual_stats: Option<&FlagStats>,
) -> VerifyReport {
    let (kalai_lhs, kalai_rhs) = kalai_terms(census, stats);
    VerifyReport {
        g2_census: kalai_lhs - kalai_rhs,
        g2_flag: g2_flag(stats),
        kalai_lhs,
        kalai_rhs,
        stanley_ok: stanley_check(stats),
        theorem1: report.and_then(|r| theorem1_check(graph, stats, r).ok()),
        dual_g2: dual_stats.map(g2_flag),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    fn stats(f: [usize; 4], f03: usize) -> FlagStats {
        FlagStats {
            f,
            f03,
            per_facet: Vec::new(),
        }
    }

    fn census(pairs: &[(usize, usize)]) -> PolygonCensus {
        PolygonCensus {
            a: pairs.iter().copied().collect::<BTreeMap<_, _>>(),
            a_phi: Vec::new(),
        }
    }

    #[test]
    fn catalog_values() {
        // (f, f03, census, lhs, rhs, g2)
        let cases = [
            ([5, 10, 10, 5], 20, vec![(3, 10)], 0, 0, 0),
            ([16, 32, 24, 8], 64, vec![(4, 24)], 24, 22, 2),
            ([8, 24, 32, 16], 64, vec![(3, 32)], 0, -2, 2),
            ([24, 96, 96, 24], 144, vec![(3, 96)], 0, -10, 10),
        ];
        for (f, f03, cen, lhs, rhs, g2) in cases {
            let s = stats(f, f03);
            let c = census(&cen);
            assert_eq!(kalai_terms(&c, &s), (lhs, rhs));
            assert_eq!(g2_census(&c, &s), g2);
            assert_eq!(g2_flag(&s), g2);
            assert!(stanley_check(&s));
        }
        assert!(dual_g2_check(&stats([16, 32, 24, 8], 64), &stats([8, 24, 32, 16], 64)));
    }

    #[test]
    fn theorem1_gates_on_certification() {
        let graph = DiameterGraph {
            edges: (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect(),
            max_dist: 1.0,
            spherical_d: 1.0,
        };
        let mut report = PolarityReport {
            is_asp: true,
            c: 4.0,
            sigma: vec![4, 3, 2, 1, 0],
            residual: 0.0,
            dual_vertices: Vec::new(),
        };
        let s = stats([5, 10, 10, 5], 20);
        assert_eq!(
            theorem1_check(&graph, &s, &report).unwrap(),
            Theorem1 {
                bound: 10,
                ok: true,
                equality: true
            }
        );
        report.is_asp = false;
        assert_eq!(theorem1_check(&graph, &s, &report), Err(Error::NotAntiSelfPolar));
    }
}
