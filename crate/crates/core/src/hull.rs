//! Convex hulls of full-dimensional point sets in R⁴.
//!
//! The hull is found by gift wrapping over whole facets. Starting from one
//! supporting hyperplane, the ridges of each facet are computed as the facets
//! of its own vertex set inside the facet hyperplane (the same algorithm one
//! dimension down), and the neighbouring facet across a ridge is reached by
//! rotating the hyperplane about the ridge by the smallest angle that meets
//! another point.
//!
//! # Degeneracies
//!
//! All points within `eps_geom` of a hyperplane belong to it, so coplanar
//! vertex sets (cubes, octahedra, the polygons of polar duals) come out as
//! single facets and no triangulation, and hence no sliver simplex, is ever
//! formed. Facet hyperplanes are refitted to their vertex sets by least
//! squares, which makes the result independent of the ridge a facet was
//! reached from. Input order does not matter: the output is sorted by vertex
//! set.

use std::collections::{BTreeSet, VecDeque};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{affine_dimension, PointCloud, ToleranceConfig, Vec4};

/// A facet: the vertices lying on one supporting hyperplane `⟨x, n⟩ = h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    /// Sorted indices into the point list.
    pub vertex_ids: Vec<usize>,
    pub unit_normal: Vec4,
    pub support: f64,
}

impl Facet {
    /// Signed height of `p` over the facet hyperplane (negative inside).
    pub fn height(&self, p: &Vec4) -> f64 {
        p.dot(&self.unit_normal) - self.support
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertex_ids.binary_search(&v).is_ok()
    }
}

/// Facets of the hull of a spherical point cloud.
pub fn convex_hull(cloud: &PointCloud, tol: &ToleranceConfig) -> Result<Vec<Facet>> {
    convex_hull_points(cloud.points(), tol)
}

/// Facets of the hull of points in convex position (every point must be a
/// vertex). Used directly for polar duals, which are not inscribed.
pub fn convex_hull_points(points: &[Vec4], tol: &ToleranceConfig) -> Result<Vec<Facet>> {
    if points.len() < 5 {
        return Err(Error::TooFewPoints {
            need: 5,
            got: points.len(),
        });
    }
    let scale = points.iter().map(Vec4::norm).fold(0.0_f64, f64::max);
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::DegenerateInput("points must be finite and non-zero".into()));
    }
    let scaled: Vec<Vec4> = points.iter().map(|p| *p * (1.0 / scale)).collect();
    for i in 0..scaled.len() {
        for j in i + 1..scaled.len() {
            if scaled[i].dist(&scaled[j]) <= tol.eps_unit {
                return Err(Error::DegeneratePoints(i, j));
            }
        }
    }
    let dim = affine_dimension(&scaled, tol.eps_geom);
    if dim < 4 {
        return Err(Error::NotFullDimensional(dim));
    }
    let coords: Vec<Vec<f64>> = scaled.iter().map(|p| p.0.to_vec()).collect();
    let faces = hull_faces(&coords, tol.eps_geom)?;

    let mut facets: Vec<Facet> = faces
        .into_iter()
        .map(|f| Facet {
            vertex_ids: f.vertices,
            unit_normal: -Vec4([f.normal[0], f.normal[1], f.normal[2], f.normal[3]]),
            support: -f.offset * scale,
        })
        .collect();
    facets.sort_by(|a, b| a.vertex_ids.cmp(&b.vertex_ids));
    let mut used = vec![false; points.len()];
    for f in &facets {
        for &v in &f.vertex_ids {
            used[v] = true;
        }
    }
    if let Some(missing) = used.iter().position(|u| !u) {
        return Err(Error::NotInConvexPosition(missing));
    }
    Ok(facets)
}

/// Hull followed by [`merge_coplanar`]: the true facets of the polytope.
pub fn polytope_facets(points: &[Vec4], tol: &ToleranceConfig) -> Result<Vec<Facet>> {
    Ok(merge_coplanar(&convex_hull_points(points, tol)?, tol))
}

/// Fuses facets whose normals and supports agree within `eps_geom`.
pub fn merge_coplanar(facets: &[Facet], tol: &ToleranceConfig) -> Vec<Facet> {
    let n = facets.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            let a = &facets[i];
            let b = &facets[j];
            let h_tol = tol.eps_geom * a.support.abs().max(b.support.abs()).max(1.0);
            if (a.unit_normal - b.unit_normal).norm() <= tol.eps_geom
                && (a.support - b.support).abs() <= h_tol
            {
                let (ra, rb) = (find(&mut parent, i), find(&mut parent, j));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    let mut out: Vec<Facet> = groups
        .into_iter()
        .filter(|g| !g.is_empty())
        .map(|g| {
            if g.len() == 1 {
                return facets[g[0]].clone();
            }
            let mut ids: Vec<usize> = g
                .iter()
                .flat_map(|&i| facets[i].vertex_ids.iter().copied())
                .collect();
            ids.sort_unstable();
            ids.dedup();
            let sum = g
                .iter()
                .fold(Vec4::ZERO, |acc, &i| acc + facets[i].unit_normal);
            let support = g.iter().map(|&i| facets[i].support).sum::<f64>() / g.len() as f64;
            Facet {
                vertex_ids: ids,
                unit_normal: sum * (1.0 / sum.norm()),
                support,
            }
        })
        .collect();
    out.sort_by(|a, b| a.vertex_ids.cmp(&b.vertex_ids));
    out
}

/// True iff every facet hyperplane lies strictly beyond the origin.
pub fn origin_strictly_interior(facets: &[Facet], eps: f64) -> bool {
    facets.iter().all(|f| f.support > eps)
}

/// A facet of a hull in Rᵈ: all points satisfy `⟨x, normal⟩ ≥ offset`.
#[derive(Debug, Clone)]
struct Face {
    /// Sorted indices of the extreme points on the hyperplane.
    vertices: Vec<usize>,
    /// Inward unit normal.
    normal: Vec<f64>,
    offset: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let n = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
    v
}

/// Gram-Schmidt: extends `basis` by the components of `vectors` longer than
/// `tol` after projection.
fn extend_basis(basis: &mut Vec<Vec<f64>>, vectors: impl IntoIterator<Item = Vec<f64>>, tol: f64) {
    for v in vectors {
        let mut w = v;
        for _ in 0..2 {
            for b in basis.iter() {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = dot(&w, &w).sqrt();
        if n > tol {
            basis.push(w.into_iter().map(|x| x / n).collect());
        }
    }
}

fn unit_vectors(d: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..d).map(move |k| {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        e
    })
}

fn affine_rank(pts: &[Vec<f64>], ids: &[usize], tol: f64) -> usize {
    let mut basis = Vec::new();
    if let Some((&first, rest)) = ids.split_first() {
        extend_basis(&mut basis, rest.iter().map(|&i| sub(&pts[i], &pts[first])), tol);
    }
    basis.len()
}

fn on_plane(pts: &[Vec<f64>], normal: &[f64], offset: f64, eps: f64) -> Vec<usize> {
    (0..pts.len())
        .filter(|&i| (dot(&pts[i], normal) - offset).abs() <= eps)
        .collect()
}

/// Least-squares hyperplane through `ids`, oriented towards `inside`.
fn refit(pts: &[Vec<f64>], ids: &[usize], inside: &[f64]) -> (Vec<f64>, f64) {
    let d = inside.len();
    let k = ids.len();
    let centroid: Vec<f64> = (0..d)
        .map(|c| ids.iter().map(|&i| pts[i][c]).sum::<f64>() / k as f64)
        .collect();
    let m = DMatrix::from_fn(k.max(d), d, |r, c| if r < k { pts[ids[r]][c] - centroid[c] } else { 0.0 });
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let smallest = (0..d)
        .min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
        .expect("d >= 1");
    let mut normal: Vec<f64> = normalized(v_t.row(smallest).iter().copied().collect());
    let mut offset = dot(&centroid, &normal);
    if dot(inside, &normal) < offset {
        normal.iter_mut().for_each(|x| *x = -*x);
        offset = -offset;
    }
    (normal, offset)
}

/// Smallest rotation of the supporting hyperplane (`normal`, through `p`)
/// about the flat through `p` orthogonal to `normal` and `w`, tilting away
/// from `w`, that meets a point off that flat. Returns the rotated normal.
fn rotate_to_next(pts: &[Vec<f64>], p: &[f64], normal: &[f64], w: &[f64], eps: f64) -> Option<Vec<f64>> {
    let mut best: Option<f64> = None;
    for q in pts {
        let r = sub(q, p);
        let a = dot(&r, normal);
        let b = dot(&r, w);
        if a.abs() <= eps && b.abs() <= eps {
            continue;
        }
        // a cos φ − b sin φ stays non-negative until φ = π/2 − atan2(b, a)
        let phi = std::f64::consts::FRAC_PI_2 - b.atan2(a);
        best = Some(best.map_or(phi, |x: f64| x.min(phi)));
    }
    let phi = best?;
    let (s, c) = phi.sin_cos();
    Some(normalized(normal.iter().zip(w).map(|(n, w)| c * n - s * w).collect()))
}

/// Facets of the hull of `pts` (full-dimensional in Rᵈ, d ≥ 1).
fn hull_faces(pts: &[Vec<f64>], eps: f64) -> Result<Vec<Face>> {
    let d = pts[0].len();
    let centroid: Vec<f64> = (0..d)
        .map(|c| pts.iter().map(|p| p[c]).sum::<f64>() / pts.len() as f64)
        .collect();
    if d == 1 {
        let (lo, hi) = (0..pts.len()).fold((0, 0), |(lo, hi), i| {
            (
                if pts[i][0] < pts[lo][0] { i } else { lo },
                if pts[i][0] > pts[hi][0] { i } else { hi },
            )
        });
        if pts[hi][0] - pts[lo][0] <= eps {
            return Err(Error::NumericalDegeneracy("face collapsed to a point".into()));
        }
        return Ok(vec![
            Face {
                vertices: vec![lo],
                normal: vec![1.0],
                offset: pts[lo][0],
            },
            Face {
                vertices: vec![hi],
                normal: vec![-1.0],
                offset: -pts[hi][0],
            },
        ]);
    }

    // Initial facet: start from the supporting hyperplane x₀ = min and tilt
    // it until its contact set spans a hyperplane.
    let low = (0..pts.len())
        .min_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]))
        .expect("non-empty");
    let mut normal: Vec<f64> = unit_vectors(d).next().expect("d >= 1");
    let mut offset = pts[low][0];
    let mut contact = on_plane(pts, &normal, offset, eps);
    loop {
        let rank = affine_rank(pts, &contact, eps);
        if rank + 1 >= d {
            break;
        }
        let mut basis = vec![normal.clone()];
        let anchor = &pts[contact[0]];
        extend_basis(&mut basis, contact.iter().map(|&i| sub(&pts[i], anchor)), eps);
        let spanned = basis.len();
        extend_basis(&mut basis, unit_vectors(d), 1e-6);
        let w = basis[spanned].clone();
        normal = rotate_to_next(pts, anchor, &normal, &w, eps)
            .ok_or_else(|| Error::NumericalDegeneracy("no point to wrap onto".into()))?;
        offset = dot(anchor, &normal);
        let grown = on_plane(pts, &normal, offset, eps);
        if grown.len() <= contact.len() {
            return Err(Error::NumericalDegeneracy("hull wrapping stalled".into()));
        }
        contact = grown;
    }

    let mut faces = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let (n0, h0) = refit(pts, &contact, &centroid);
    let first = on_plane(pts, &n0, h0, eps);
    seen.insert(first.clone());
    queue.push_back((first, n0, h0));

    while let Some((members, normal, offset)) = queue.pop_front() {
        if affine_rank(pts, &members, eps) + 1 != d {
            return Err(Error::NumericalDegeneracy(format!(
                "facet on points {members:?} does not span a hyperplane"
            )));
        }
        // coordinates inside the facet hyperplane
        let mut basis = vec![normal.clone()];
        extend_basis(&mut basis, unit_vectors(d), 1e-6);
        let basis = &basis[1..];
        let origin = &pts[members[0]];
        let local: Vec<Vec<f64>> = members
            .iter()
            .map(|&i| {
                let r = sub(&pts[i], origin);
                basis.iter().map(|b| dot(&r, b)).collect()
            })
            .collect();
        let ridges = hull_faces(&local, eps)?;

        let mut vertices = BTreeSet::new();
        for ridge in &ridges {
            let ridge_ids: Vec<usize> = ridge.vertices.iter().map(|&k| members[k]).collect();
            vertices.extend(ridge_ids.iter().copied());
            // outward direction of the ridge inside the facet hyperplane
            let mut w = vec![0.0; d];
            for (c, b) in ridge.normal.iter().zip(basis) {
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let w = normalized(w);
            let mut skip = ridge_ids.clone();
            skip.sort_unstable();
            let anchor = &pts[ridge_ids[0]];
            let Some(next) = rotate_to_next(pts, anchor, &normal, &w, eps) else {
                return Err(Error::NumericalDegeneracy("ridge without a neighbour".into()));
            };
            let wrapped = on_plane(pts, &next, dot(anchor, &next), eps);
            let (n1, h1) = refit(pts, &wrapped, &centroid);
            let neighbour = on_plane(pts, &n1, h1, eps);
            if !skip.iter().all(|v| neighbour.binary_search(v).is_ok()) {
                return Err(Error::NumericalDegeneracy(format!(
                    "neighbour facet across ridge {skip:?} lost the ridge"
                )));
            }
            if seen.insert(neighbour.clone()) {
                queue.push_back((neighbour, n1, h1));
            }
        }
        faces.push(Face {
            vertices: vertices.into_iter().collect(),
            normal,
            offset,
        });
    }
    for f in &faces {
        if pts.iter().any(|p| dot(p, &f.normal) - f.offset < -eps) {
            return Err(Error::NumericalDegeneracy("wrapped hyperplane is not supporting".into()));
        }
    }
    Ok(faces)
}
