//! Face lattice of a 4-polytope from its merged facets, with f-vectors, the
//! vertex-facet flag number and the polygon census.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{affine_dimension, orthonormal_basis, ToleranceConfig, Vec4};
use crate::hull::Facet;

/// Faces of dimensions 0..=3, identified by their sorted vertex sets.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceLattice {
    faces: [Vec<Vec<usize>>; 4],
    /// Cyclic vertex order of each 2-face (same indexing as `faces[2]`).
    polygons: Vec<Vec<usize>>,
    /// `up[k][i]`: indices of the (k+1)-faces containing face `i` of dimension `k`.
    up: [Vec<Vec<usize>>; 3],
    /// Inverse of `up[2]`: the 2-faces of each facet.
    facet_ridges: Vec<Vec<usize>>,
}

impl FaceLattice {
    pub fn faces(&self, dim: usize) -> &[Vec<usize>] {
        &self.faces[dim]
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.faces[3]
    }

    /// Faces of dimension `dim + 1` containing face `index` of dimension `dim`.
    pub fn cofaces(&self, dim: usize, index: usize) -> &[usize] {
        &self.up[dim][index]
    }

    /// Vertices of 2-face `index` in cyclic order.
    pub fn polygon(&self, index: usize) -> &[usize] {
        &self.polygons[index]
    }

    /// 2-faces lying in facet `index`.
    pub fn facet_two_faces(&self, index: usize) -> &[usize] {
        &self.facet_ridges[index]
    }
}

/// Face counts and the flag number f₀₃.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagStats {
    pub f: [usize; 4],
    pub f03: usize,
    /// (f₀(φ), f₁(φ), f₂(φ)) for each facet φ.
    pub per_facet: Vec<[usize; 3]>,
}

/// Numbers of j-gonal 2-faces, overall and per facet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonCensus {
    pub a: BTreeMap<usize, usize>,
    pub a_phi: Vec<BTreeMap<usize, usize>>,
}

impl PolygonCensus {
    pub fn count(&self, j: usize) -> usize {
        self.a.get(&j).copied().unwrap_or(0)
    }

    pub fn facet_count(&self, facet: usize, j: usize) -> usize {
        self.a_phi[facet].get(&j).copied().unwrap_or(0)
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Builds the lattice: 2-faces are facet-pair intersections spanning a
/// 2-flat, edges are consecutive vertices of the cyclically ordered 2-faces.
pub fn build_lattice(facets: &[Facet], points: &[Vec4], tol: &ToleranceConfig) -> Result<FaceLattice> {
    let scale = points.iter().map(Vec4::norm).fold(0.0_f64, f64::max).max(1.0);
    let dim_tol = (tol.eps_geom * scale).max(1e-12);

    let facet_sets: Vec<Vec<usize>> = facets.iter().map(|f| f.vertex_ids.clone()).collect();
    let mut ridge_map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for i in 0..facet_sets.len() {
        for j in i + 1..facet_sets.len() {
            let common = intersect_sorted(&facet_sets[i], &facet_sets[j]);
            if common.len() < 3 {
                continue;
            }
            let pts: Vec<Vec4> = common.iter().map(|&v| points[v]).collect();
            let dim = affine_dimension(&pts, dim_tol);
            if dim != 2 {
                return Err(Error::LatticeInconsistency(format!(
                    "facets {i} and {j} meet in a set of affine dimension {dim}"
                )));
            }
            ridge_map.entry(common).or_default().extend([i, j]);
        }
    }
    let mut two_faces = Vec::with_capacity(ridge_map.len());
    let mut two_up = Vec::with_capacity(ridge_map.len());
    for (face, mut owners) in ridge_map {
        owners.sort_unstable();
        owners.dedup();
        if owners.len() != 2 {
            return Err(Error::LatticeInconsistency(format!(
                "2-face {face:?} lies in {} facets",
                owners.len()
            )));
        }
        two_faces.push(face);
        two_up.push(owners);
    }

    let polygons = two_faces
        .iter()
        .map(|face| cyclic_order(face, points))
        .collect::<Result<Vec<_>>>()?;

    let mut edge_map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (k, poly) in polygons.iter().enumerate() {
        for i in 0..poly.len() {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            edge_map.entry(vec![a.min(b), a.max(b)]).or_default().push(k);
        }
    }

    let mut facet_ridges = vec![Vec::new(); facet_sets.len()];
    for (k, owners) in two_up.iter().enumerate() {
        for &f in owners {
            facet_ridges[f].push(k);
        }
    }
    // each facet boundary must be a closed polyhedral surface
    for (f, ridges) in facet_ridges.iter().enumerate() {
        let mut edge_uses: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &k in ridges {
            let poly = &polygons[k];
            for i in 0..poly.len() {
                let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
                *edge_uses.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        if let Some((e, n)) = edge_uses.iter().find(|(_, &n)| n != 2) {
            return Err(Error::LatticeInconsistency(format!(
                "edge {e:?} is used by {n} 2-faces of facet {f}"
            )));
        }
    }

    let edges: Vec<Vec<usize>> = edge_map.keys().cloned().collect();
    let edge_up: Vec<Vec<usize>> = edge_map.into_values().collect();

    let mut vertex_ids: Vec<usize> = facet_sets.iter().flatten().copied().collect();
    vertex_ids.sort_unstable();
    vertex_ids.dedup();
    let vertex_pos: BTreeMap<usize, usize> = vertex_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut vertex_up = vec![Vec::new(); vertex_ids.len()];
    for (e, edge) in edges.iter().enumerate() {
        for v in edge {
            vertex_up[vertex_pos[v]].push(e);
        }
    }

    Ok(FaceLattice {
        faces: [
            vertex_ids.into_iter().map(|v| vec![v]).collect(),
            edges,
            two_faces,
            facet_sets,
        ],
        polygons,
        up: [vertex_up, edge_up, two_up],
        facet_ridges,
    })
}

/// Orders the vertices of a planar convex polygon by angle about its centroid,
/// rejecting non-convex or degenerate rings.
fn cyclic_order(face: &[usize], points: &[Vec4]) -> Result<Vec<usize>> {
    let pts: Vec<Vec4> = face.iter().map(|&v| points[v]).collect();
    let centroid = pts.iter().fold(Vec4::ZERO, |a, p| a + *p) * (1.0 / pts.len() as f64);
    let basis = orthonormal_basis(pts.iter().map(|p| *p - centroid), 1e-12);
    if basis.len() < 2 {
        return Err(Error::LatticeInconsistency(format!("2-face {face:?} is not planar-spanning")));
    }
    let plane = |p: &Vec4| {
        let d = *p - centroid;
        (d.dot(&basis[0]), d.dot(&basis[1]))
    };
    let mut order: Vec<(f64, usize, (f64, f64))> = face
        .iter()
        .zip(&pts)
        .map(|(&v, p)| {
            let (x, y) = plane(p);
            (y.atan2(x), v, (x, y))
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let m = order.len();
    let size = order
        .iter()
        .map(|o| (o.2 .0.powi(2) + o.2 .1.powi(2)).sqrt())
        .fold(0.0, f64::max);
    for i in 0..m {
        let (ax, ay) = order[i].2;
        let (bx, by) = order[(i + 1) % m].2;
        let (cx, cy) = order[(i + 2) % m].2;
        let turn = (bx - ax) * (cy - by) - (by - ay) * (cx - bx);
        if !(turn > 1e-12 * size * size) {
            return Err(Error::LatticeInconsistency(format!(
                "2-face {face:?} is not a strictly convex polygon"
            )));
        }
    }
    Ok(order.into_iter().map(|o| o.1).collect())
}

pub fn f_vector(lattice: &FaceLattice) -> [usize; 4] {
    std::array::from_fn(|k| lattice.faces[k].len())
}

/// Σ over facets of their vertex counts.
pub fn flag_f03(lattice: &FaceLattice) -> usize {
    lattice.facets().iter().map(Vec::len).sum()
}

pub fn flag_stats(lattice: &FaceLattice) -> FlagStats {
    let per_facet = (0..lattice.facets().len())
        .map(|f| {
            let ridges = lattice.facet_two_faces(f);
            let edge_incidences: usize = ridges.iter().map(|&k| lattice.polygons[k].len()).sum();
            [lattice.facets()[f].len(), edge_incidences / 2, ridges.len()]
        })
        .collect();
    FlagStats {
        f: f_vector(lattice),
        f03: flag_f03(lattice),
        per_facet,
    }
}

pub fn polygon_census(lattice: &FaceLattice) -> PolygonCensus {
    let mut a = BTreeMap::new();
    for poly in &lattice.polygons {
        *a.entry(poly.len()).or_insert(0) += 1;
    }
    let a_phi = (0..lattice.facets().len())
        .map(|f| {
            let mut m = BTreeMap::new();
            for &k in lattice.facet_two_faces(f) {
                *m.entry(lattice.polygons[k].len()).or_insert(0) += 1;
            }
            m
        })
        .collect();
    PolygonCensus { a, a_phi }
}

/// f₀ − f₁ + f₂ − f₃.
pub fn euler_residual(lattice: &FaceLattice) -> i64 {
    let f = f_vector(lattice);
    f[0] as i64 - f[1] as i64 + f[2] as i64 - f[3] as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::hull::polytope_facets;

    fn lattice_of(name: &str) -> FaceLattice {
        let cloud = catalog::by_name(name).unwrap();
        let tol = ToleranceConfig::exact();
        let facets = polytope_facets(cloud.points(), &tol).unwrap();
        build_lattice(&facets, cloud.points(), &tol).unwrap()
    }

    #[test]
    fn simplex_faces_are_all_small_subsets() {
        let l = lattice_of("simplex");
        assert_eq!(f_vector(&l), [5, 10, 10, 5]);
        assert_eq!(flag_f03(&l), 20);
        assert_eq!(euler_residual(&l), 0);
        let c = polygon_census(&l);
        assert_eq!(c.count(3), 10);
        assert_eq!(c.a.len(), 1);
    }

    #[test]
    fn hypercube_counts() {
        let l = lattice_of("hypercube");
        assert_eq!(f_vector(&l), [16, 32, 24, 8]);
        assert_eq!(flag_f03(&l), 64);
        let c = polygon_census(&l);
        assert_eq!(c.count(4), 24);
        for f in 0..8 {
            assert_eq!(c.facet_count(f, 4), 6);
        }
    }

    #[test]
    fn cross_polytope_counts() {
        let l = lattice_of("cross");
        assert_eq!(f_vector(&l), [8, 24, 32, 16]);
        assert_eq!(polygon_census(&l).count(3), 32);
    }

    #[test]
    fn cell24_counts() {
        let l = lattice_of("cell24");
        assert_eq!(f_vector(&l), [24, 96, 96, 24]);
        assert_eq!(flag_f03(&l), 144);
        let c = polygon_census(&l);
        assert_eq!(c.count(3), 96);
        for f in 0..24 {
            assert_eq!(c.facet_count(f, 3), 8);
        }
    }

    #[test]
    fn per_facet_euler_and_handshakes() {
        for name in catalog::NAMES {
            let l = lattice_of(name);
            let stats = flag_stats(&l);
            let census = polygon_census(&l);
            for (f, [v, e, r]) in stats.per_facet.iter().enumerate() {
                assert_eq!(*v as i64 - *e as i64 + *r as i64, 2, "{name} facet {f}");
                let twice_edges: usize = census.a_phi[f].iter().map(|(j, n)| j * n).sum();
                assert_eq!(twice_edges, 2 * e);
            }
            assert_eq!(stats.per_facet.iter().map(|x| x[2]).sum::<usize>(), 2 * stats.f[2]);
            for (j, n) in &census.a {
                let total: usize = census.a_phi.iter().map(|m| m.get(j).copied().unwrap_or(0)).sum();
                assert_eq!(total, 2 * n);
            }
        }
    }

    #[test]
    fn incidences_are_containments() {
        let l = lattice_of("hypercube");
        for dim in 0..3 {
            for (i, face) in l.faces(dim).iter().enumerate() {
                let cofaces = l.cofaces(dim, i);
                assert!(!cofaces.is_empty());
                for &c in cofaces {
                    let big = &l.faces(dim + 1)[c];
                    assert!(face.iter().all(|v| big.binary_search(v).is_ok()));
                }
            }
        }
        // every edge of a 4-polytope lies in at least three 2-faces
        assert!((0..l.faces(1).len()).all(|e| l.cofaces(1, e).len() >= 3));
    }
}
