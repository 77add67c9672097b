//! Vectors in R⁴, spherical point clouds and tolerance settings.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point or direction in R⁴.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec4(pub [f64; 4]);

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0.0; 4]);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Vec4([x0, x1, x2, x3])
    }

    /// The `k`-th standard basis vector.
    pub fn basis(k: usize) -> Self {
        let mut v = [0.0; 4];
        v[k] = 1.0;
        Vec4(v)
    }

    pub fn dot(&self, other: &Vec4) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Vec4) -> f64 {
        (*self - *other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Generalized cross product: the vector orthogonal to `a`, `b`, `c`
    /// whose components are the signed 3×3 minors of the matrix `[a; b; c]`.
    pub fn cross3(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
        let m = [a.0, b.0, c.0];
        let minor = |skip: usize| {
            let cols: Vec<usize> = (0..4).filter(|&k| k != skip).collect();
            let e = |r: usize, k: usize| m[r][cols[k]];
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        };
        Vec4([minor(0), -minor(1), minor(2), -minor(3)])
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl AddAssign for Vec4 {
    fn add_assign(&mut self, o: Vec4) {
        for k in 0..4 {
            self.0[k] += o.0[k];
        }
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }
}

impl SubAssign for Vec4 {
    fn sub_assign(&mut self, o: Vec4) {
        for k in 0..4 {
            self.0[k] -= o.0[k];
        }
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, s: f64) -> Vec4 {
        Vec4(self.0.map(|x| x * s))
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, v: Vec4) -> Vec4 {
        v * self
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4(self.0.map(|x| -x))
    }
}

impl Index<usize> for Vec4 {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

impl IndexMut<usize> for Vec4 {
    fn index_mut(&mut self, k: usize) -> &mut f64 {
        &mut self.0[k]
    }
}

/// Rescale `v` onto the unit sphere.
pub fn unit_project(v: Vec4) -> Result<Vec4> {
    let n = v.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::DegenerateInput(
            "cannot project a zero or non-finite vector onto the sphere".into(),
        ));
    }
    Ok(v * (1.0 / n))
}

/// Tolerances used by the geometric predicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Unit-norm slack and minimum separation of distinct points.
    pub eps_unit: f64,
    /// Coplanarity / incidence slack.
    pub eps_geom: f64,
    /// Absolute slack on Euclidean distance for diameter pairs.
    pub eps_diam: f64,
    /// Residual allowed in the relation P* = -cP.
    pub eps_polar: f64,
}

impl ToleranceConfig {
    /// Settings for exact catalog coordinates.
    pub const fn exact() -> Self {
        ToleranceConfig {
            eps_unit: 1e-9,
            eps_geom: 1e-9,
            eps_diam: 1e-9,
            eps_polar: 1e-9,
        }
    }

    /// Settings for numerically converged flow outputs.
    pub const fn flow() -> Self {
        ToleranceConfig {
            eps_unit: 1e-9,
            eps_geom: 1e-6,
            eps_diam: 1e-6,
            eps_polar: 1e-5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps_unit", self.eps_unit),
            ("eps_geom", self.eps_geom),
            ("eps_diam", self.eps_diam),
            ("eps_polar", self.eps_polar),
        ] {
            if !(v > 0.0 && v < 1e-2) {
                return Err(Error::InvalidConfig(format!(
                    "{name} = {v} must lie in (0, 1e-2)"
                )));
            }
        }
        Ok(())
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self::exact()
    }
}

/// Distinct unit vectors in R⁴: the candidate vertex set of an inscribed polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec4>,
    eps_unit: f64,
}

impl PointCloud {
    pub const MIN_POINTS: usize = 5;

    /// Validates unit norm, pairwise distinctness and the minimum size.
    pub fn new(points: Vec<Vec4>, eps_unit: f64) -> Result<Self> {
        if points.len() < Self::MIN_POINTS {
            return Err(Error::TooFewPoints {
                need: Self::MIN_POINTS,
                got: points.len(),
            });
        }
        for (i, p) in points.iter().enumerate() {
            let norm = p.norm();
            if !p.is_finite() || (norm - 1.0).abs() > eps_unit {
                return Err(Error::NotUnitNorm { index: i, norm });
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].dist(&points[j]) <= eps_unit {
                    return Err(Error::DegeneratePoints(i, j));
                }
            }
        }
        Ok(PointCloud { points, eps_unit })
    }

    /// Projects every point onto the sphere before validating.
    pub fn normalized(points: Vec<Vec4>, eps_unit: f64) -> Result<Self> {
        let points = points
            .into_iter()
            .map(unit_project)
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, eps_unit)
    }

    pub fn points(&self) -> &[Vec4] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn eps_unit(&self) -> f64 {
        self.eps_unit
    }

    pub fn into_points(self) -> Vec<Vec4> {
        self.points
    }
}

/// Orthonormal basis (Gram-Schmidt) of the span of `vectors`, dropping
/// directions shorter than `tol` after projection.
pub(crate) fn orthonormal_basis(vectors: impl IntoIterator<Item = Vec4>, tol: f64) -> Vec<Vec4> {
    let mut basis: Vec<Vec4> = Vec::with_capacity(4);
    for v in vectors {
        let mut w = v;
        // two passes keep the basis orthogonal in floating point
        for _ in 0..2 {
            for b in &basis {
                w -= *b * w.dot(b);
            }
        }
        let n = w.norm();
        if n > tol {
            basis.push(w * (1.0 / n));
            if basis.len() == 4 {
                break;
            }
        }
    }
    basis
}

/// Affine dimension of a finite point set (0 for a single point).
pub fn affine_dimension(points: &[Vec4], tol: f64) -> usize {
    match points.split_first() {
        None => 0,
        Some((first, rest)) => orthonormal_basis(rest.iter().map(|p| *p - *first), tol).len(),
    }
}
