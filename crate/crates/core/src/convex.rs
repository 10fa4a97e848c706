//! Compact convex bodies and their support-function calculus.
//!
//! Three representations are supported: exact intervals on the line, exact
//! convex polygons in the plane, and bodies known only through samples of
//! their support function `h(ξ) = max_{x ∈ K} ⟨x, ξ⟩`.
//!
//! Conventions:
//! - Polygons are counterclockwise and canonicalized so that the first vertex
//!   is the lowest one (ties broken by the smallest x). Collinear interior
//!   vertices are dropped. Points and segments are polygons with one and two
//!   vertices.
//! - Membership is closed: boundary points belong to the body.
//! - A 2-D sampled body is interpreted as the polygon cut out by its sampled
//!   support lines (an outer approximation of the true body). Its support
//!   function between sample directions is that polygon's support function.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::aabb::Aabb;
use crate::error::{check_dim, Error, Result};

pub type Point2 = [f64; 2];

/// Default number of directions for sampled bodies in the plane.
pub const DEFAULT_ANGULAR_GRID: usize = 256;

/// Relative tolerance used when validating convexity of float polygons.
const CONVEXITY_EPS: f64 = 1e-12;

#[inline]
pub(crate) fn cross(a: Point2, b: Point2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub(crate) fn dot(a: Point2, b: Point2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
fn sub(a: Point2, b: Point2) -> Point2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
fn add(a: Point2, b: Point2) -> Point2 {
    [a[0] + b[0], a[1] + b[1]]
}

/// Angle of `v` in `[0, 2π)`.
#[inline]
pub(crate) fn angle_of(v: Point2) -> f64 {
    let a = v[1].atan2(v[0]);
    if a < 0.0 {
        (a + TAU) % TAU
    } else {
        a
    }
}

/// `0` for directions with angle in `[0, π)`, `1` otherwise.
#[inline]
fn half_plane(v: Point2) -> u8 {
    if v[1] > 0.0 || (v[1] == 0.0 && v[0] > 0.0) {
        0
    } else {
        1
    }
}

/// Exact angular order of nonzero vectors on `[0, 2π)`.
fn angular_cmp(a: Point2, b: Point2) -> Ordering {
    half_plane(a).cmp(&half_plane(b)).then_with(|| {
        let c = cross(a, b);
        if c > 0.0 {
            Ordering::Less
        } else if c < 0.0 {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// `0.0` for `-0.0`, identity otherwise.
#[inline]
fn positive_zero(x: f64) -> f64 {
    x + 0.0
}

/// Unit vector at angle `theta`.
#[inline]
pub fn unit(theta: f64) -> Point2 {
    [theta.cos(), theta.sin()]
}

/// `n` directions at angles `2πk/n`.
pub fn uniform_directions(n: usize) -> Vec<Point2> {
    (0..n).map(|k| unit(TAU * k as f64 / n as f64)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidBody(
                "interval endpoints must be finite".into(),
            ));
        }
        if lo > hi {
            return Err(Error::InvalidBody(format!(
                "interval [{lo}, {hi}] has lo > hi"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Convex polygon with counterclockwise, canonicalized vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    /// Validates and canonicalizes a counterclockwise convex vertex list.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidBody(
                "polygon needs at least one vertex".into(),
            ));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidBody("polygon vertices must be finite".into()));
        }
        let n = vertices.len();
        if n >= 2 {
            for i in 0..n {
                if vertices[i] == vertices[(i + 1) % n] {
                    return Err(Error::InvalidBody(format!(
                        "duplicate consecutive vertices at index {i}"
                    )));
                }
            }
        }
        if n >= 3 {
            let mut turning = 0.0;
            for i in 0..n {
                let e0 = sub(vertices[(i + 1) % n], vertices[i]);
                let e1 = sub(vertices[(i + 2) % n], vertices[(i + 1) % n]);
                let c = cross(e0, e1);
                let scale = (dot(e0, e0) * dot(e1, e1)).sqrt();
                if c < -CONVEXITY_EPS * scale {
                    return Err(Error::InvalidBody(format!(
                        "polygon is not convex and counterclockwise at vertex {}",
                        (i + 1) % n
                    )));
                }
                turning += c.atan2(dot(e0, e1));
            }
            if (turning - TAU).abs() > 1e-6 {
                return Err(Error::InvalidBody(format!(
                    "polygon turning angle {turning} is not 2π"
                )));
            }
        }
        Ok(Self::canonical(vertices))
    }

    /// Convex hull of a point cloud (Andrew's monotone chain).
    pub fn hull(points: &[Point2]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidBody("hull of an empty point set".into()));
        }
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        pts.dedup();
        if pts.len() <= 2 {
            return Polygon::new(pts);
        }
        let mut lower: Vec<Point2> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2
                && cross(
                    sub(lower[lower.len() - 1], lower[lower.len() - 2]),
                    sub(p, lower[lower.len() - 1]),
                ) <= 0.0
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point2> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2
                && cross(
                    sub(upper[upper.len() - 1], upper[upper.len() - 2]),
                    sub(p, upper[upper.len() - 1]),
                ) <= 0.0
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Polygon::new(lower)
    }

    /// Regular `n`-gon inscribed in the circle of radius `radius` about
    /// `center`, with a vertex at angle 0.
    pub fn regular(n: usize, radius: f64, center: Point2) -> Result<Self> {
        if n < 3 || radius <= 0.0 {
            return Err(Error::InvalidArgument(
                "regular polygon needs n >= 3 and radius > 0".into(),
            ));
        }
        let verts = (0..n)
            .map(|k| {
                let u = unit(TAU * k as f64 / n as f64);
                [center[0] + radius * u[0], center[1] + radius * u[1]]
            })
            .collect();
        Polygon::new(verts)
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Polygon::new(vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
    }

    /// Rotate to the lowest-then-leftmost vertex and drop collinear vertices.
    fn canonical(mut v: Vec<Point2>) -> Self {
        if v.len() >= 3 {
            let mut i = 0;
            while v.len() >= 3 && i < v.len() {
                let n = v.len();
                let prev = v[(i + n - 1) % n];
                let next = v[(i + 1) % n];
                let e0 = sub(v[i], prev);
                let e1 = sub(next, v[i]);
                if cross(e0, e1) == 0.0 && dot(e0, e1) > 0.0 {
                    v.remove(i);
                    i = i.saturating_sub(1);
                } else {
                    i += 1;
                }
            }
        }
        let start = v
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a[1].total_cmp(&b[1]).then(a[0].total_cmp(&b[0])))
            .map(|(i, _)| i)
            .unwrap_or(0);
        v.rotate_left(start);
        Self { vertices: v }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    /// Edge vectors `v[i+1] - v[i]`; empty for a point.
    pub fn edges(&self) -> Vec<Point2> {
        let n = self.vertices.len();
        if n < 2 {
            return Vec::new();
        }
        (0..n)
            .map(|i| sub(self.vertices[(i + 1) % n], self.vertices[i]))
            .collect()
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let s: f64 = (0..n)
            .map(|i| cross(self.vertices[i], self.vertices[(i + 1) % n]))
            .sum();
        0.5 * s
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().iter().map(|e| e[0].hypot(e[1])).sum()
    }

    fn support(&self, d: Point2) -> f64 {
        self.vertices
            .iter()
            .map(|&v| dot(v, d))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn contains(&self, p: Point2) -> bool {
        let v = &self.vertices;
        match v.len() {
            1 => v[0] == p,
            2 => {
                let e = sub(v[1], v[0]);
                let w = sub(p, v[0]);
                cross(e, w) == 0.0 && dot(e, w) >= 0.0 && dot(e, w) <= dot(e, e)
            }
            n => (0..n).all(|i| cross(sub(v[(i + 1) % n], v[i]), sub(p, v[i])) >= 0.0),
        }
    }

    /// Edge-merge Minkowski sum. Output vertices are sums of input vertices.
    pub fn minkowski_sum(&self, other: &Polygon) -> Polygon {
        let (a, b) = (&self.vertices, &other.vertices);
        let (ea, eb) = (self.edges(), other.edges());
        let mut out = Vec::with_capacity(ea.len() + eb.len());
        let (mut i, mut j) = (0usize, 0usize);
        out.push(add(a[0], b[0]));
        while i < ea.len() || j < eb.len() {
            let step = if i == ea.len() {
                Ordering::Greater
            } else if j == eb.len() {
                Ordering::Less
            } else {
                angular_cmp(ea[i], eb[j])
            };
            match step {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
            out.push(add(a[i % a.len()], b[j % b.len()]));
        }
        if out.len() > 1 {
            // the walk returns to the start vertex
            out.pop();
        }
        Polygon::canonical(out)
    }

    pub fn translate(&self, t: Point2) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&v| add(v, t)).collect(),
        }
    }
}

/// Body known through samples of its support function.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSampled {
    dim: usize,
    directions: Vec<Vec<f64>>,
    values: Vec<f64>,
    /// For `dim == 2`: sample angles in `[0, 2π)`, ascending.
    angles: Vec<f64>,
}

impl SupportSampled {
    /// Validates unit directions, finite values and sampled sublinearity.
    /// Planar samples are reordered by angle.
    pub fn new(dim: usize, directions: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        let body = Self::new_unchecked(dim, directions, values)?;
        let tol = 1e-9 * (1.0 + body.values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        body.check_sublinear(tol)?;
        Ok(body)
    }

    /// Structural validation only (no sublinearity check).
    fn new_unchecked(dim: usize, directions: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidBody("sampled body needs dim >= 1".into()));
        }
        if directions.len() != values.len() || directions.is_empty() {
            return Err(Error::InvalidBody(
                "directions and values must be nonempty and of equal length".into(),
            ));
        }
        for d in &directions {
            check_dim(dim, d.len())?;
            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidBody(format!("direction {d:?} is not unit")));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBody("support values must be finite".into()));
        }
        let mut body = Self {
            dim,
            directions,
            values,
            angles: Vec::new(),
        };
        if dim == 2 {
            body.sort_planar()?;
        }
        Ok(body)
    }

    fn sort_planar(&mut self) -> Result<()> {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        let angles: Vec<f64> = self
            .directions
            .iter()
            .map(|d| angle_of([d[0], d[1]]))
            .collect();
        idx.sort_by(|&a, &b| angles[a].total_cmp(&angles[b]));
        self.directions = idx.iter().map(|&i| self.directions[i].clone()).collect();
        self.values = idx.iter().map(|&i| self.values[i]).collect();
        self.angles = idx.iter().map(|&i| angles[i]).collect();
        let n = self.angles.len();
        if n < 3 {
            return Err(Error::InvalidBody(
                "planar sampled body needs at least 3 directions".into(),
            ));
        }
        for k in 0..n {
            let gap = if k + 1 < n {
                self.angles[k + 1] - self.angles[k]
            } else {
                self.angles[0] + TAU - self.angles[k]
            };
            if gap <= 0.0 {
                return Err(Error::InvalidBody("repeated sample direction".into()));
            }
            if gap >= PI {
                return Err(Error::InvalidBody(
                    "sample directions leave a gap of at least π".into(),
                ));
            }
        }
        Ok(())
    }

    /// Planar body sampled on `n` uniform directions from a support profile
    /// `θ ↦ h(cos θ, sin θ)`.
    pub fn from_angular_fn(n: usize, h: impl Fn(f64) -> f64) -> Result<Self> {
        let dirs: Vec<Vec<f64>> = (0..n)
            .map(|k| unit(TAU * k as f64 / n as f64).to_vec())
            .collect();
        let vals = (0..n).map(|k| h(TAU * k as f64 / n as f64)).collect();
        Self::new(2, dirs, vals)
    }

    /// Sampled unit disk.
    pub fn disk(n: usize, radius: f64) -> Result<Self> {
        Self::from_angular_fn(n, |_| radius)
    }

    /// Samples any body's support function on uniform planar directions.
    pub fn sample(body: &ConvexBody, n: usize) -> Result<Self> {
        check_dim(2, body.dim())?;
        let dirs: Vec<Vec<f64>> = (0..n)
            .map(|k| unit(TAU * k as f64 / n as f64).to_vec())
            .collect();
        let vals = dirs
            .iter()
            .map(|d| body.support_function(d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(2, dirs, vals)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sample angles (planar bodies only).
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// True when the planar samples sit on a uniform grid `θ₀ + 2πk/n`.
    pub fn is_uniform_planar(&self) -> bool {
        if self.dim != 2 {
            return false;
        }
        let n = self.angles.len();
        let step = TAU / n as f64;
        (1..n).all(|k| ((self.angles[k] - self.angles[0]) - step * k as f64).abs() < 1e-9)
    }

    /// Checks `h(ξ_k)·|ξ_i + ξ_j| ≤ h(ξ_i) + h(ξ_j) + tol` for every sampled
    /// triple with `ξ_k = (ξ_i + ξ_j)/|ξ_i + ξ_j|`.
    pub fn check_sublinear(&self, tol: f64) -> Result<()> {
        let n = self.values.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let s: Vec<f64> = self.directions[i]
                    .iter()
                    .zip(&self.directions[j])
                    .map(|(a, b)| a + b)
                    .collect();
                let norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm < 1e-12 {
                    continue;
                }
                let u: Vec<f64> = s.iter().map(|x| x / norm).collect();
                if let Some(k) = self.find_direction(&u) {
                    let lhs = self.values[k] * norm;
                    let rhs = self.values[i] + self.values[j];
                    if lhs > rhs + tol {
                        return Err(Error::InvalidBody(format!(
                            "sampled support violates sublinearity at directions {i}, {j}, {k}: {lhs} > {rhs}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn find_direction(&self, u: &[f64]) -> Option<usize> {
        const MATCH: f64 = 1e-12;
        let close = |k: usize| {
            self.directions[k]
                .iter()
                .zip(u)
                .all(|(a, b)| (a - b).abs() < MATCH)
        };
        if self.dim == 2 {
            let a = angle_of([u[0], u[1]]);
            let pos = self.angles.partition_point(|&t| t < a);
            let n = self.angles.len();
            [pos % n, (pos + n - 1) % n].into_iter().find(|&k| close(k))
        } else {
            (0..self.directions.len()).find(|&k| close(k))
        }
    }

    /// Vertex of the outer polygon between sample directions `k` and `k+1`.
    fn corner(&self, k: usize) -> Point2 {
        let n = self.values.len();
        let k1 = (k + 1) % n;
        let a = [self.directions[k][0], self.directions[k][1]];
        let b = [self.directions[k1][0], self.directions[k1][1]];
        let (ha, hb) = (self.values[k], self.values[k1]);
        let det = cross(a, b);
        [(ha * b[1] - hb * a[1]) / det, (a[0] * hb - b[0] * ha) / det]
    }

    /// Polygon cut out by consecutive sampled support lines.
    pub fn outer_vertices(&self) -> Result<Vec<Point2>> {
        if self.dim != 2 {
            return Err(Error::Unsupported(
                "outer polygon only defined for planar sampled bodies".into(),
            ));
        }
        Ok((0..self.values.len()).map(|k| self.corner(k)).collect())
    }

    fn support(&self, d: &[f64]) -> Result<f64> {
        let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        let u: Vec<f64> = d.iter().map(|x| x / norm).collect();
        if let Some(k) = self.find_direction(&u) {
            return Ok(norm * self.values[k]);
        }
        match self.dim {
            1 => {
                let k = self.find_direction(&[u[0].signum()]).ok_or_else(|| {
                    Error::Unsupported("1-D sampled body lacks this direction".into())
                })?;
                Ok(norm * self.values[k])
            }
            2 => {
                let a = angle_of([u[0], u[1]]);
                let n = self.angles.len();
                let pos = self.angles.partition_point(|&t| t < a);
                let k = (pos + n - 1) % n;
                let v = self.corner(k);
                Ok(dot(v, [d[0], d[1]]))
            }
            _ => Err(Error::Unsupported(
                "support of a sampled body off its sample directions needs dim <= 2".into(),
            )),
        }
    }

    fn contains(&self, p: &[f64]) -> bool {
        self.directions
            .iter()
            .zip(&self.values)
            .all(|(d, h)| d.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() <= *h)
    }

    fn scaled(&self, t: f64) -> Self {
        Self {
            dim: self.dim,
            directions: self.directions.clone(),
            values: self.values.iter().map(|v| positive_zero(v * t)).collect(),
            angles: self.angles.clone(),
        }
    }

    /// Adds another body's support function on this body's directions.
    fn plus_support_of(&self, other: &ConvexBody) -> Result<Self> {
        let values = self
            .directions
            .iter()
            .zip(&self.values)
            .map(|(d, h)| Ok(h + other.support_function(d)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim: self.dim,
            directions: self.directions.clone(),
            values,
            angles: self.angles.clone(),
        })
    }
}

/// A compact convex body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBody", into = "RawBody")]
pub enum ConvexBody {
    Interval(Interval),
    Polygon(Polygon),
    Support(SupportSampled),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawBody {
    Interval {
        lo: f64,
        hi: f64,
    },
    Polygon {
        vertices: Vec<Point2>,
    },
    Support {
        dim: usize,
        directions: Vec<Vec<f64>>,
        values: Vec<f64>,
    },
}

impl TryFrom<RawBody> for ConvexBody {
    type Error = Error;

    fn try_from(raw: RawBody) -> Result<Self> {
        match raw {
            RawBody::Interval { lo, hi } => ConvexBody::interval(lo, hi),
            RawBody::Polygon { vertices } => ConvexBody::polygon(vertices),
            RawBody::Support {
                dim,
                directions,
                values,
            } => SupportSampled::new(dim, directions, values).map(ConvexBody::Support),
        }
    }
}

impl From<ConvexBody> for RawBody {
    fn from(body: ConvexBody) -> Self {
        match body {
            ConvexBody::Interval(i) => RawBody::Interval { lo: i.lo, hi: i.hi },
            ConvexBody::Polygon(p) => RawBody::Polygon {
                vertices: p.vertices,
            },
            ConvexBody::Support(s) => RawBody::Support {
                dim: s.dim,
                directions: s.directions,
                values: s.values,
            },
        }
    }
}

impl From<Polygon> for ConvexBody {
    fn from(p: Polygon) -> Self {
        ConvexBody::Polygon(p)
    }
}

impl From<Interval> for ConvexBody {
    fn from(i: Interval) -> Self {
        ConvexBody::Interval(i)
    }
}

impl From<SupportSampled> for ConvexBody {
    fn from(s: SupportSampled) -> Self {
        ConvexBody::Support(s)
    }
}

impl ConvexBody {
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Interval::new(lo, hi).map(ConvexBody::Interval)
    }

    pub fn polygon(vertices: Vec<Point2>) -> Result<Self> {
        Polygon::new(vertices).map(ConvexBody::Polygon)
    }

    /// The single point `{0}` in dimension `dim` (1 or 2).
    pub fn origin(dim: usize) -> Result<Self> {
        match dim {
            1 => ConvexBody::interval(0.0, 0.0),
            2 => ConvexBody::polygon(vec![[0.0, 0.0]]),
            _ => Err(Error::Unsupported(format!(
                "exact point body in dimension {dim}"
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Interval(_) => 1,
            ConvexBody::Polygon(_) => 2,
            ConvexBody::Support(s) => s.dim,
        }
    }

    /// `h_K(ξ) = max_{x ∈ K} ⟨x, ξ⟩`.
    pub fn support_function(&self, direction: &[f64]) -> Result<f64> {
        check_dim(self.dim(), direction.len())?;
        if direction.iter().all(|&x| x == 0.0) {
            return Err(Error::InvalidArgument(
                "support function needs a nonzero direction".into(),
            ));
        }
        match self {
            ConvexBody::Interval(i) => {
                let d = direction[0];
                Ok(if d >= 0.0 { d * i.hi } else { d * i.lo })
            }
            ConvexBody::Polygon(p) => Ok(p.support([direction[0], direction[1]])),
            ConvexBody::Support(s) => s.support(direction),
        }
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        if point.len() != self.dim() {
            return false;
        }
        match self {
            ConvexBody::Interval(i) => i.lo <= point[0] && point[0] <= i.hi,
            ConvexBody::Polygon(p) => p.contains([point[0], point[1]]),
            ConvexBody::Support(s) => s.contains(point),
        }
    }

    pub fn minkowski_sum(&self, other: &ConvexBody) -> Result<ConvexBody> {
        check_dim(self.dim(), other.dim())?;
        Ok(match (self, other) {
            (ConvexBody::Interval(a), ConvexBody::Interval(b)) => ConvexBody::Interval(Interval {
                lo: a.lo + b.lo,
                hi: a.hi + b.hi,
            }),
            (ConvexBody::Polygon(a), ConvexBody::Polygon(b)) => {
                ConvexBody::Polygon(a.minkowski_sum(b))
            }
            (ConvexBody::Support(a), b) => ConvexBody::Support(a.plus_support_of(b)?),
            (a, ConvexBody::Support(b)) => ConvexBody::Support(b.plus_support_of(a)?),
            _ => unreachable!("dimensions already checked"),
        })
    }

    /// Homothety `tK` about the origin.
    pub fn scale(&self, t: f64) -> Result<ConvexBody> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be finite and >= 0, got {t}"
            )));
        }
        Ok(match self {
            ConvexBody::Interval(i) => ConvexBody::Interval(Interval {
                lo: positive_zero(i.lo * t),
                hi: positive_zero(i.hi * t),
            }),
            ConvexBody::Polygon(p) => {
                if t == 0.0 {
                    ConvexBody::Polygon(Polygon {
                        vertices: vec![[0.0, 0.0]],
                    })
                } else {
                    ConvexBody::Polygon(Polygon {
                        vertices: p
                            .vertices
                            .iter()
                            .map(|v| [positive_zero(v[0] * t), positive_zero(v[1] * t)])
                            .collect(),
                    })
                }
            }
            ConvexBody::Support(s) => ConvexBody::Support(s.scaled(t)),
        })
    }

    /// Reflection `-K`.
    pub fn reflect(&self) -> ConvexBody {
        match self {
            ConvexBody::Interval(i) => ConvexBody::Interval(Interval {
                lo: -i.hi,
                hi: -i.lo,
            }),
            ConvexBody::Polygon(p) => ConvexBody::Polygon(Polygon::canonical(
                p.vertices.iter().map(|v| [-v[0], -v[1]]).collect(),
            )),
            ConvexBody::Support(s) => {
                let mut r = SupportSampled {
                    dim: s.dim,
                    directions: s
                        .directions
                        .iter()
                        .map(|d| d.iter().map(|x| -x).collect())
                        .collect(),
                    values: s.values.clone(),
                    angles: Vec::new(),
                };
                if r.dim == 2 {
                    r.sort_planar()
                        .expect("reflection keeps a valid direction set");
                }
                ConvexBody::Support(r)
            }
        }
    }

    /// Length, area, or the area of the outer polygon for planar samples.
    pub fn volume(&self) -> Result<f64> {
        match self {
            ConvexBody::Interval(i) => Ok(i.length()),
            ConvexBody::Polygon(p) => Ok(p.area()),
            ConvexBody::Support(s) => match s.dim {
                1 => Ok(s.support(&[1.0])? + s.support(&[-1.0])?),
                2 => {
                    let v = s.outer_vertices()?;
                    let n = v.len();
                    Ok(0.5 * (0..n).map(|i| cross(v[i], v[(i + 1) % n])).sum::<f64>())
                }
                d => Err(Error::Unsupported(format!(
                    "volume of a sampled body in dimension {d}"
                ))),
            },
        }
    }

    pub fn bounding_box(&self) -> Result<Aabb> {
        match self {
            ConvexBody::Interval(i) => Ok(Aabb::new(vec![i.lo], vec![i.hi])),
            ConvexBody::Polygon(p) => {
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for v in &p.vertices {
                    for k in 0..2 {
                        lo[k] = lo[k].min(v[k]);
                        hi[k] = hi[k].max(v[k]);
                    }
                }
                Ok(Aabb::new(lo.to_vec(), hi.to_vec()))
            }
            ConvexBody::Support(s) => {
                let mut lo = Vec::with_capacity(s.dim);
                let mut hi = Vec::with_capacity(s.dim);
                for k in 0..s.dim {
                    let mut e = vec![0.0; s.dim];
                    e[k] = 1.0;
                    hi.push(s.support(&e)?);
                    e[k] = -1.0;
                    lo.push(-s.support(&e)?);
                }
                Ok(Aabb::new(lo, hi))
            }
        }
    }

    /// Planar sampled copy of this body on `n` uniform directions.
    pub fn to_sampled(&self, n: usize) -> Result<SupportSampled> {
        SupportSampled::sample(self, n)
    }
}

/// `h_{A×B}(ξ₁, ξ₂) = h_A(ξ₁) + h_B(ξ₂)` with `h(0) := 0`.
pub fn product_support(a: &ConvexBody, b: &ConvexBody, xi1: &[f64], xi2: &[f64]) -> Result<f64> {
    check_dim(a.dim(), xi1.len())?;
    check_dim(b.dim(), xi2.len())?;
    let zero1 = xi1.iter().all(|&x| x == 0.0);
    let zero2 = xi2.iter().all(|&x| x == 0.0);
    if zero1 && zero2 {
        return Err(Error::InvalidArgument(
            "product support needs a nonzero direction".into(),
        ));
    }
    let h1 = if zero1 { 0.0 } else { a.support_function(xi1)? };
    let h2 = if zero2 { 0.0 } else { b.support_function(xi2)? };
    Ok(h1 + h2)
}

/// `max_ξ |h_A(ξ) - h_B(ξ)|` over the given directions.
pub fn support_distance(a: &ConvexBody, b: &ConvexBody, grid: &[Vec<f64>]) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty direction grid".into()));
    }
    grid.iter().try_fold(0.0f64, |m, d| {
        Ok(m.max((a.support_function(d)? - b.support_function(d)?).abs()))
    })
}

/// Minkowski average of rotated copies of a planar body:
/// `h(ξ) = Σ_k w_k h_K(R(-θ_k) ξ)`, sampled on `grid` uniform directions.
pub fn rotational_smoothing(
    body: &ConvexBody,
    kernel: &[(f64, f64)],
    grid: usize,
) -> Result<SupportSampled> {
    check_dim(2, body.dim())?;
    if kernel.is_empty() {
        return Err(Error::InvalidArgument("smoothing kernel is empty".into()));
    }
    if let Some(&(_, w)) = kernel.iter().find(|(_, w)| *w < 0.0 || !w.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "negative kernel weight {w}"
        )));
    }
    let total: f64 = kernel.iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "kernel weights sum to {total}, expected 1"
        )));
    }
    let dirs: Vec<Vec<f64>> = (0..grid)
        .map(|k| unit(TAU * k as f64 / grid as f64).to_vec())
        .collect();
    let values = dirs
        .iter()
        .map(|d| {
            kernel.iter().try_fold(0.0, |acc, &(theta, w)| {
                let (s, c) = theta.sin_cos();
                // R(-θ) ξ
                let rotated = [c * d[0] + s * d[1], -s * d[0] + c * d[1]];
                Ok(acc + w * body.support_function(&rotated)?)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SupportSampled::new(2, dirs, values)
}

/// Uniform kernel of `samples` equally weighted angles spanning `[-width, width]`.
pub fn uniform_kernel(width: f64, samples: usize) -> Vec<(f64, f64)> {
    if samples <= 1 || width == 0.0 {
        return vec![(0.0, 1.0)];
    }
    let w = 1.0 / samples as f64;
    (0..samples)
        .map(|k| (-width + 2.0 * width * k as f64 / (samples - 1) as f64, w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_square() -> ConvexBody {
        ConvexBody::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
    }

    fn brute_hull_vertices(a: &[Point2], b: &[Point2]) -> Vec<Point2> {
        // independent oracle: gift wrapping over all pairwise vertex sums
        let mut pts: Vec<Point2> = a
            .iter()
            .flat_map(|p| b.iter().map(move |q| [p[0] + q[0], p[1] + q[1]]))
            .collect();
        pts.sort_by(|p, q| p[1].total_cmp(&q[1]).then(p[0].total_cmp(&q[0])));
        pts.dedup();
        let start = pts[0];
        let mut hull = vec![start];
        let mut cur = start;
        loop {
            let mut best: Option<Point2> = None;
            for &p in &pts {
                if p == cur {
                    continue;
                }
                best = Some(match best {
                    None => p,
                    Some(b) => {
                        let c = cross(sub(b, cur), sub(p, cur));
                        let farther = dot(sub(p, cur), sub(p, cur)) > dot(sub(b, cur), sub(b, cur));
                        if c < 0.0 || (c == 0.0 && farther) {
                            p
                        } else {
                            b
                        }
                    }
                });
            }
            let next = best.unwrap();
            if next == start {
                break;
            }
            hull.push(next);
            cur = next;
        }
        hull
    }

    #[test]
    fn support_examples() {
        let sq = unit_square();
        assert_eq!(sq.support_function(&[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(sq.support_function(&[-1.0, -1.0]).unwrap(), 0.0);
        let iv = ConvexBody::interval(-2.0, 3.0).unwrap();
        assert_eq!(iv.support_function(&[-1.0]).unwrap(), 2.0);
        assert!(matches!(
            sq.support_function(&[0.0, 0.0]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn product_support_examples() {
        let i01 = ConvexBody::interval(0.0, 1.0).unwrap();
        assert_eq!(product_support(&i01, &i01, &[1.0], &[1.0]).unwrap(), 2.0);
        let sym = ConvexBody::interval(-1.0, 1.0).unwrap();
        assert_eq!(
            product_support(&unit_square(), &sym, &[0.0, 0.0], &[1.0]).unwrap(),
            1.0
        );
        let a = ConvexBody::interval(0.0, 2.0).unwrap();
        let b = ConvexBody::interval(0.0, 3.0).unwrap();
        assert_eq!(product_support(&a, &b, &[-1.0], &[-1.0]).unwrap(), 0.0);
        assert!(product_support(&a, &b, &[0.0], &[0.0]).is_err());
    }

    #[test]
    fn minkowski_examples() {
        let a = ConvexBody::interval(0.0, 1.0).unwrap();
        let b = ConvexBody::interval(2.0, 5.0).unwrap();
        assert_eq!(
            a.minkowski_sum(&b).unwrap(),
            ConvexBody::interval(2.0, 6.0).unwrap()
        );

        let two = unit_square().minkowski_sum(&unit_square()).unwrap();
        assert_eq!(
            two,
            ConvexBody::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]).unwrap()
        );

        let tri = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let seg = vec![[0.0, 0.0], [1.0, 0.0]];
        let oracle = brute_hull_vertices(&tri, &seg);
        assert_eq!(oracle, vec![[0.0, 0.0], [2.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let sum = ConvexBody::polygon(tri)
            .unwrap()
            .minkowski_sum(&ConvexBody::polygon(seg).unwrap())
            .unwrap();
        match sum {
            ConvexBody::Polygon(p) => assert_eq!(p.vertices(), oracle.as_slice()),
            _ => panic!("expected polygon"),
        }
        assert!(matches!(
            a.minkowski_sum(&unit_square()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn minkowski_matches_brute_hull_on_random_polygons() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut cloud = |n: usize| -> Vec<Point2> {
                (0..n)
                    .map(|_| {
                        [
                            rng.random_range(-4..=4) as f64 / 4.0,
                            rng.random_range(-4..=4) as f64 / 4.0,
                        ]
                    })
                    .collect()
            };
            let pa = Polygon::hull(&cloud(6)).unwrap();
            let pb = Polygon::hull(&cloud(5)).unwrap();
            let sum = pa.minkowski_sum(&pb);
            let oracle = brute_hull_vertices(pa.vertices(), pb.vertices());
            assert_eq!(sum.vertices(), oracle.as_slice());
        }
    }

    #[test]
    fn scale_examples() {
        let i = ConvexBody::interval(1.0, 2.0).unwrap();
        assert_eq!(
            i.scale(2.0).unwrap(),
            ConvexBody::interval(2.0, 4.0).unwrap()
        );
        assert_eq!(
            i.scale(0.0).unwrap(),
            ConvexBody::interval(0.0, 0.0).unwrap()
        );
        assert_eq!(
            unit_square().scale(0.0).unwrap(),
            ConvexBody::polygon(vec![[0.0, 0.0]]).unwrap()
        );
        let disk = ConvexBody::Support(SupportSampled::disk(64, 1.0).unwrap());
        match disk.scale(3.0).unwrap() {
            ConvexBody::Support(s) => assert!(s.values().iter().all(|&v| v == 3.0)),
            _ => panic!(),
        }
        assert!(i.scale(-1.0).is_err());
    }

    #[test]
    fn volume_examples() {
        assert_eq!(
            ConvexBody::interval(2.0, 6.0).unwrap().volume().unwrap(),
            4.0
        );
        let sq2 =
            ConvexBody::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]).unwrap();
        assert_eq!(sq2.volume().unwrap(), 4.0);
        let n = 256.0;
        let oracle = n / 2.0 * (TAU / n).sin();
        let disk = ConvexBody::Polygon(Polygon::regular(256, 1.0, [0.0, 0.0]).unwrap());
        assert_relative_eq!(disk.volume().unwrap(), oracle, max_relative = 1e-12);
        assert_relative_eq!(disk.volume().unwrap(), PI, max_relative = 1e-3);
        let sampled = SupportSampled::new(3, vec![vec![1.0, 0.0, 0.0]], vec![1.0]).unwrap();
        assert!(matches!(
            ConvexBody::Support(sampled).volume(),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn sampled_disk_area_is_circumscribed_polygon() {
        let d = ConvexBody::Support(SupportSampled::disk(256, 1.0).unwrap());
        let n = 256.0;
        assert_relative_eq!(
            d.volume().unwrap(),
            n * (PI / n).tan(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn membership_examples() {
        let sq = unit_square();
        assert!(sq.contains(&[0.5, 0.5]));
        assert!(!sq.contains(&[1.5, 0.0]));
        assert!(sq.contains(&[1.0, 0.0]));
        let seg = ConvexBody::polygon(vec![[0.0, 0.0], [2.0, 2.0]]).unwrap();
        assert!(seg.contains(&[1.0, 1.0]));
        assert!(!seg.contains(&[1.0, 1.5]));
        let pt = ConvexBody::polygon(vec![[1.0, 2.0]]).unwrap();
        assert!(pt.contains(&[1.0, 2.0]));
    }

    #[test]
    fn polygon_validation() {
        assert!(Polygon::new(vec![]).is_err());
        // clockwise
        assert!(Polygon::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).is_err());
        // duplicate
        assert!(Polygon::new(vec![[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]]).is_err());
        // non-convex
        assert!(Polygon::new(vec![[0.0, 0.0], [2.0, 0.0], [1.0, 0.2], [1.0, 2.0]]).is_err());
        // canonical rotation and collinear removal
        let p = Polygon::new(vec![
            [1.0, 1.0],
            [0.0, 1.0],
            [0.0, 0.0],
            [0.5, 0.0],
            [1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(
            p.vertices(),
            &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
        );
    }

    #[test]
    fn rotational_smoothing_identity_kernel() {
        let sq = unit_square();
        let s = rotational_smoothing(&sq, &[(0.0, 1.0)], 64).unwrap();
        for (d, h) in s.directions().iter().zip(s.values()) {
            assert_relative_eq!(*h, sq.support_function(d).unwrap(), epsilon = 1e-15);
        }
    }

    #[test]
    fn rotational_smoothing_full_circle_gives_disk() {
        // oracle: trapezoid average of the square's support profile over
        // 20000 angles, independent of the kernel evaluation path
        let sq = unit_square();
        let m = 20000;
        let oracle: f64 = (0..m)
            .map(|k| {
                let t = TAU * k as f64 / m as f64;
                t.cos().max(0.0) + t.sin().max(0.0)
            })
            .sum::<f64>()
            / m as f64;
        assert_relative_eq!(oracle, 2.0 / PI, max_relative = 1e-6);
        let kernel: Vec<(f64, f64)> = (0..720)
            .map(|k| (TAU * k as f64 / 720.0, 1.0 / 720.0))
            .collect();
        let s = rotational_smoothing(&sq, &kernel, 64).unwrap();
        for h in s.values() {
            assert!((h - oracle).abs() < 1e-4, "{h} vs {oracle}");
        }
    }

    #[test]
    fn rotational_smoothing_converges() {
        let sq = unit_square();
        let grid: Vec<Vec<f64>> = uniform_directions(512).iter().map(|d| d.to_vec()).collect();
        let dists: Vec<f64> = [0.4, 0.2, 0.1]
            .iter()
            .map(|&w| {
                let s = rotational_smoothing(&sq, &uniform_kernel(w, 41), 256).unwrap();
                support_distance(&ConvexBody::Support(s), &sq, &grid).unwrap()
            })
            .collect();
        assert!(dists[0] > dists[1] && dists[1] > dists[2], "{dists:?}");
    }

    #[test]
    fn smoothing_kernel_validation() {
        let sq = unit_square();
        assert!(rotational_smoothing(&sq, &[], 16).is_err());
        assert!(rotational_smoothing(&sq, &[(0.0, 1.5), (0.1, -0.5)], 16).is_err());
        assert!(rotational_smoothing(&sq, &[(0.0, 0.5)], 16).is_err());
    }

    #[test]
    fn support_distance_examples() {
        let a = ConvexBody::interval(0.0, 1.0).unwrap();
        let b = ConvexBody::interval(0.0, 2.0).unwrap();
        assert_eq!(
            support_distance(&a, &b, &[vec![1.0], vec![-1.0]]).unwrap(),
            1.0
        );
        assert_eq!(support_distance(&a, &a, &[vec![1.0]]).unwrap(), 0.0);
        assert!(support_distance(&a, &b, &[]).is_err());
    }

    #[test]
    fn support_distance_squares_matches_hausdorff() {
        // oracle: Hausdorff distance between dense boundary samples
        let boundary = |s: f64| -> Vec<Point2> {
            let m = 400;
            (0..4 * m)
                .map(|k| {
                    let t = (k % m) as f64 / m as f64 * s;
                    match k / m {
                        0 => [t, 0.0],
                        1 => [s, t],
                        2 => [s - t, s],
                        _ => [0.0, s - t],
                    }
                })
                .collect()
        };
        let (p, q) = (boundary(1.0), boundary(2.0));
        let directed = |x: &[Point2], y: &[Point2]| {
            x.iter()
                .map(|a| {
                    y.iter()
                        .map(|b| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt())
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        let hausdorff = directed(&p, &q).max(directed(&q, &p));
        let grid: Vec<Vec<f64>> = uniform_directions(64).iter().map(|d| d.to_vec()).collect();
        let sq1 = unit_square();
        let sq2 = sq1.scale(2.0).unwrap();
        let d = support_distance(&sq1, &sq2, &grid).unwrap();
        assert_relative_eq!(d, 2f64.sqrt(), epsilon = 1e-12);
        assert!((d - hausdorff).abs() < 1e-2, "{d} vs {hausdorff}");
    }

    #[test]
    fn sampled_sublinearity_rejects_bad_profile() {
        let dirs: Vec<Vec<f64>> = uniform_directions(8).iter().map(|d| d.to_vec()).collect();
        let mut vals = vec![1.0; 8];
        vals[2] = 5.0;
        assert!(SupportSampled::new(2, dirs, vals).is_err());
    }

    #[test]
    fn sampled_support_between_directions() {
        let sq = unit_square();
        let s = ConvexBody::Support(SupportSampled::sample(&sq, 64).unwrap());
        // the outer polygon of a square sampled on a grid containing the axes
        // is the square itself
        for k in 0..100 {
            let d = unit(0.0123 + TAU * k as f64 / 100.0);
            assert_relative_eq!(
                s.support_function(&d).unwrap(),
                sq.support_function(&d).unwrap(),
                epsilon = 1e-12
            );
        }
        assert_relative_eq!(s.volume().unwrap(), 1.0, epsilon = 1e-12);
        assert!(s.contains(&[0.5, 0.5]));
        assert!(!s.contains(&[1.5, 0.5]));
    }

    #[test]
    fn json_round_trip() {
        let bodies = vec![
            ConvexBody::interval(-1.0, 2.0).unwrap(),
            unit_square(),
            ConvexBody::Support(SupportSampled::disk(16, 2.0).unwrap()),
        ];
        for b in bodies {
            let s = serde_json::to_string(&b).unwrap();
            let back: ConvexBody = serde_json::from_str(&s).unwrap();
            assert_eq!(b, back);
        }
        let bad = r#"{"kind":"interval","lo":2.0,"hi":1.0}"#;
        assert!(serde_json::from_str::<ConvexBody>(bad).is_err());
        let sq: ConvexBody =
            serde_json::from_str(r#"{"kind":"polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]}"#)
                .unwrap();
        assert_eq!(sq, unit_square());
    }
}
