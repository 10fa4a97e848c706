//! Normal cycles in `ℝ² × S¹` and smooth valuations given by forms
//! `μ(K) = ∫_{N(K)} (a₁ dx₁ + a₂ dx₂ + a₃ dθ) + ∫_K φ`.
//!
//! Also the derivative functionals `τ_K(μ) = d/dt|₀ μ(tK)`, for smooth `K` and
//! for the square.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::aabb::Aabb;
use crate::convex::{ConvexBody, Point2, Polygon, SupportSampled};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_triangle};

pub const DEFAULT_ORDER: usize = 16;

const GRADIENT_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgePiece {
    pub start: Point2,
    pub end: Point2,
    /// Outer normal angle in `(-π, π]`.
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPiece {
    pub vertex: Point2,
    pub theta_start: f64,
    pub theta_end: f64,
}

impl ArcPiece {
    pub fn extent(&self) -> f64 {
        self.theta_end - self.theta_start
    }
}

/// Edges and arcs alternate: `arcs[i]` sits at the end point of `edges[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalCycle2D {
    pub edges: Vec<EdgePiece>,
    pub arcs: Vec<ArcPiece>,
}

/// Angle of `v` in `(-π, π]`.
fn normal_angle(v: Point2) -> f64 {
    let t = v[1].atan2(v[0]);
    if t == -PI {
        PI
    } else {
        t
    }
}

impl NormalCycle2D {
    pub fn of_polygon(p: &Polygon) -> Self {
        let v = p.vertices();
        if v.len() == 1 {
            return Self {
                edges: Vec::new(),
                arcs: vec![ArcPiece {
                    vertex: v[0],
                    theta_start: 0.0,
                    theta_end: TAU,
                }],
            };
        }
        let n = v.len();
        let edges: Vec<EdgePiece> = (0..n)
            .map(|i| {
                let (a, b) = (v[i], v[(i + 1) % n]);
                EdgePiece {
                    start: a,
                    end: b,
                    theta: normal_angle([b[1] - a[1], a[0] - b[0]]),
                }
            })
            .collect();
        let arcs = (0..n)
            .filter_map(|i| {
                let t0 = edges[i].theta;
                let extent = (edges[(i + 1) % n].theta - t0).rem_euclid(TAU);
                (extent > 0.0).then_some(ArcPiece {
                    vertex: edges[i].end,
                    theta_start: t0,
                    theta_end: t0 + extent,
                })
            })
            .collect();
        Self { edges, arcs }
    }

    /// Validates the vertex list as a convex counterclockwise polygon first.
    pub fn from_vertices(vertices: Vec<Point2>) -> Result<Self> {
        Ok(Self::of_polygon(&Polygon::new(vertices)?))
    }

    pub fn total_turning(&self) -> f64 {
        self.arcs.iter().map(ArcPiece::extent).sum()
    }
}

pub type CoefficientFn = Arc<dyn Fn(Point2, f64) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(Point2, f64) -> Point2 + Send + Sync>;
pub type DensityFn = Arc<dyn Fn(Point2) -> f64 + Send + Sync>;

/// Coefficients `(a₁, a₂, a₃, φ)`, all vanishing outside `support_box`.
/// Absent coefficients are identically zero and skipped by quadrature.
#[derive(Clone)]
pub struct ValuationForm2D {
    a1: Option<CoefficientFn>,
    a2: Option<CoefficientFn>,
    a3: Option<CoefficientFn>,
    a3_gradient: Option<GradientFn>,
    phi: Option<DensityFn>,
    support_box: Aabb,
}

impl fmt::Debug for ValuationForm2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ValuationForm2D")
            .field("a1", &self.a1.is_some())
            .field("a2", &self.a2.is_some())
            .field("a3", &self.a3.is_some())
            .field("phi", &self.phi.is_some())
            .field("support_box", &self.support_box)
            .finish()
    }
}

impl ValuationForm2D {
    pub fn new(support_box: Aabb) -> Result<Self> {
        if support_box.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: support_box.dim(),
            });
        }
        Ok(Self {
            a1: None,
            a2: None,
            a3: None,
            a3_gradient: None,
            phi: None,
            support_box,
        })
    }

    pub fn with_a1(mut self, f: impl Fn(Point2, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.a1 = Some(Arc::new(f));
        self
    }

    pub fn with_a2(mut self, f: impl Fn(Point2, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.a2 = Some(Arc::new(f));
        self
    }

    pub fn with_a3(mut self, f: impl Fn(Point2, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.a3 = Some(Arc::new(f));
        self.a3_gradient = None;
        self
    }

    /// Exact `∇ₓ a₃`; without it central differences are used.
    pub fn with_a3_gradient(
        mut self,
        f: impl Fn(Point2, f64) -> Point2 + Send + Sync + 'static,
    ) -> Self {
        self.a3_gradient = Some(Arc::new(f));
        self
    }

    pub fn with_phi(mut self, f: impl Fn(Point2) -> f64 + Send + Sync + 'static) -> Self {
        self.phi = Some(Arc::new(f));
        self
    }

    pub fn support_box(&self) -> &Aabb {
        &self.support_box
    }

    pub fn a1(&self, x: Point2, theta: f64) -> f64 {
        self.a1.as_ref().map_or(0.0, |f| f(x, theta))
    }

    pub fn a2(&self, x: Point2, theta: f64) -> f64 {
        self.a2.as_ref().map_or(0.0, |f| f(x, theta))
    }

    pub fn a3(&self, x: Point2, theta: f64) -> f64 {
        self.a3.as_ref().map_or(0.0, |f| f(x, theta))
    }

    pub fn phi(&self, x: Point2) -> f64 {
        self.phi.as_ref().map_or(0.0, |f| f(x))
    }

    pub fn grad_a3(&self, x: Point2, theta: f64) -> Point2 {
        if let Some(g) = &self.a3_gradient {
            return g(x, theta);
        }
        let Some(a3) = &self.a3 else {
            return [0.0, 0.0];
        };
        let s = GRADIENT_STEP;
        [
            (a3([x[0] + s, x[1]], theta) - a3([x[0] - s, x[1]], theta)) / (2.0 * s),
            (a3([x[0], x[1] + s], theta) - a3([x[0], x[1] - s], theta)) / (2.0 * s),
        ]
    }

    /// `self + c · other`, on the union of the support boxes.
    pub fn plus_scaled(&self, c: f64, other: &ValuationForm2D) -> ValuationForm2D {
        fn join(
            a: &Option<CoefficientFn>,
            b: &Option<CoefficientFn>,
            c: f64,
        ) -> Option<CoefficientFn> {
            match (a.clone(), b.clone()) {
                (None, None) => None,
                (Some(f), None) => Some(f),
                (None, Some(g)) => Some(Arc::new(move |x, t| c * g(x, t))),
                (Some(f), Some(g)) => Some(Arc::new(move |x, t| f(x, t) + c * g(x, t))),
            }
        }
        let phi: Option<DensityFn> = match (self.phi.clone(), other.phi.clone()) {
            (None, None) => None,
            (Some(f), None) => Some(f),
            (None, Some(g)) => Some(Arc::new(move |x| c * g(x))),
            (Some(f), Some(g)) => Some(Arc::new(move |x| f(x) + c * g(x))),
        };
        ValuationForm2D {
            a1: join(&self.a1, &other.a1, c),
            a2: join(&self.a2, &other.a2, c),
            a3: join(&self.a3, &other.a3, c),
            a3_gradient: None,
            phi,
            support_box: self.support_box.union(&other.support_box),
        }
    }

    /// Spot-checks finiteness inside the support box and vanishing outside
    /// it (within one box width).
    pub fn check<R: Rng>(&self, rng: &mut R, samples: usize) -> Result<()> {
        let (lo, hi) = (&self.support_box.lo, &self.support_box.hi);
        let width = [hi[0] - lo[0], hi[1] - lo[1]];
        for _ in 0..samples {
            let theta = rng.random_range(0.0..TAU);
            let inside = [
                rng.random_range(lo[0]..=hi[0]),
                rng.random_range(lo[1]..=hi[1]),
            ];
            let vals = self.values(inside, theta);
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "form is not finite at {inside:?}, θ = {theta}"
                )));
            }
            let outside = loop {
                let p = [
                    rng.random_range(lo[0] - width[0]..=hi[0] + width[0]),
                    rng.random_range(lo[1] - width[1]..=hi[1] + width[1]),
                ];
                if !self.support_box.contains_point(&p) {
                    break p;
                }
            };
            if self.values(outside, theta).iter().any(|v| *v != 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "form does not vanish at {outside:?} outside its support box"
                )));
            }
        }
        Ok(())
    }

    fn values(&self, x: Point2, theta: f64) -> [f64; 4] {
        [
            self.a1(x, theta),
            self.a2(x, theta),
            self.a3(x, theta),
            self.phi(x),
        ]
    }
}

fn sub(a: Point2, b: Point2) -> Point2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// `∫ a₃(x, θ) dθ` over `[t0, t1]`, split at the multiples of `π/4` so that
/// arcs of different bodies share nodes wherever they overlap.
fn arc_integral(form: &ValuationForm2D, x: Point2, t0: f64, t1: f64, order: usize) -> f64 {
    let mut total = 0.0;
    let mut a = t0;
    while a < t1 {
        let mut k = (a / FRAC_PI_4).floor() + 1.0;
        while k * FRAC_PI_4 <= a {
            k += 1.0;
        }
        let b = (k * FRAC_PI_4).min(t1);
        if b > a {
            total += integrate(|t| form.a3(x, t), a, b, order);
        }
        a = b;
    }
    total
}

fn polygon_area_integral(form: &ValuationForm2D, v: &[Point2], order: usize) -> f64 {
    if form.phi.is_none() || v.len() < 3 {
        return 0.0;
    }
    (1..v.len() - 1)
        .map(|i| integrate_triangle(|p| form.phi(p), v[0], v[i], v[i + 1], order))
        .sum()
}

fn evaluate_polygon(form: &ValuationForm2D, p: &Polygon, order: usize) -> f64 {
    let nc = NormalCycle2D::of_polygon(p);
    let mut total = 0.0;
    if form.a1.is_some() || form.a2.is_some() {
        for e in &nc.edges {
            let d = sub(e.end, e.start);
            total += integrate(
                |s| {
                    let x = [e.start[0] + s * d[0], e.start[1] + s * d[1]];
                    form.a1(x, e.theta) * d[0] + form.a2(x, e.theta) * d[1]
                },
                0.0,
                1.0,
                order,
            );
        }
    }
    if form.a3.is_some() {
        for a in &nc.arcs {
            total += arc_integral(form, a.vertex, a.theta_start, a.theta_end, order);
        }
    }
    total + polygon_area_integral(form, p.vertices(), order)
}

/// 4th-order periodic central difference of samples on a uniform grid.
fn periodic_derivative(v: &[f64], step: f64) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|k| {
            let at = |o: isize| v[(k as isize + o).rem_euclid(n as isize) as usize];
            (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * step)
        })
        .collect()
}

/// Boundary parametrization `θ ↦ g(θ) = ∇h(θ)` of a sampled smooth body,
/// with `g'(θ)`, on its uniform angular grid.
struct SmoothBoundary {
    theta: Vec<f64>,
    step: f64,
    g: Vec<Point2>,
    dg: Vec<Point2>,
}

fn smooth_boundary(k: &SupportSampled) -> Result<SmoothBoundary> {
    if k.dim() != 2 || !k.is_uniform_planar() {
        return Err(Error::Unsupported(
            "smooth-body evaluation needs a planar support function on a uniform angular grid"
                .into(),
        ));
    }
    let theta = k.angles().to_vec();
    let n = theta.len();
    if n < 5 {
        return Err(Error::InvalidBody("too few support samples".into()));
    }
    let step = TAU / n as f64;
    let h = k.values();
    let dh = periodic_derivative(h, step);
    let g: Vec<Point2> = (0..n)
        .map(|i| {
            let (s, c) = theta[i].sin_cos();
            [h[i] * c - dh[i] * s, h[i] * s + dh[i] * c]
        })
        .collect();
    let gx = periodic_derivative(&g.iter().map(|p| p[0]).collect::<Vec<_>>(), step);
    let gy = periodic_derivative(&g.iter().map(|p| p[1]).collect::<Vec<_>>(), step);
    let dg = gx.into_iter().zip(gy).map(|(a, b)| [a, b]).collect();
    Ok(SmoothBoundary { theta, step, g, dg })
}

fn evaluate_smooth(form: &ValuationForm2D, k: &SupportSampled, order: usize) -> Result<f64> {
    let b = smooth_boundary(k)?;
    let n = b.theta.len();
    let boundary: f64 = (0..n)
        .map(|i| {
            let (x, t, d) = (b.g[i], b.theta[i], b.dg[i]);
            form.a1(x, t) * d[0] + form.a2(x, t) * d[1] + form.a3(x, t)
        })
        .sum::<f64>()
        * b.step;
    let mut area = 0.0;
    if form.phi.is_some() {
        let c = b.g.iter().fold([0.0, 0.0], |acc, p| {
            [acc[0] + p[0] / n as f64, acc[1] + p[1] / n as f64]
        });
        for i in 0..n {
            area += integrate_triangle(|p| form.phi(p), c, b.g[i], b.g[(i + 1) % n], order);
        }
    }
    Ok(boundary + area)
}

/// `μ(K)` for a polygon (exact normal cycle, Gauss–Legendre of the given
/// order) or a sampled smooth body (trapezoid rule along `θ ↦ (∇h(θ), θ)`).
pub fn evaluate_form(form: &ValuationForm2D, body: &ConvexBody, order: usize) -> Result<f64> {
    if order == 0 {
        return Err(Error::InvalidArgument(
            "quadrature order must be positive".into(),
        ));
    }
    match body {
        ConvexBody::Polygon(p) => Ok(evaluate_polygon(form, p, order)),
        ConvexBody::Support(s) => evaluate_smooth(form, s, order),
        ConvexBody::Interval(_) => Err(Error::DimensionMismatch {
            expected: 2,
            found: 1,
        }),
    }
}

/// `Σⱼ ∫ ∂ⱼa₃(0,θ) gⱼ(θ) dθ + Σᵢ ∫ aᵢ(0,θ) dgᵢ(θ)` with `g = ∇h_K` on `S¹`.
pub fn tau_smooth(form: &ValuationForm2D, k: &SupportSampled) -> Result<f64> {
    let b = smooth_boundary(k)?;
    let o = [0.0, 0.0];
    Ok((0..b.theta.len())
        .map(|i| {
            let (t, g, d) = (b.theta[i], b.g[i], b.dg[i]);
            let grad = form.grad_a3(o, t);
            grad[0] * g[0] + grad[1] * g[1] + form.a1(o, t) * d[0] + form.a2(o, t) * d[1]
        })
        .sum::<f64>()
        * b.step)
}

/// `d/dt|₀ μ(t[-w, w]²)`: the four edge terms
/// `2w (a₁(0,-π/2) + a₂(0,0) - a₁(0,π/2) - a₂(0,π))` plus, when `a₃` moves
/// with `x`, the corner terms `Σᵥ ∫ ∇a₃(0,θ)·v dθ` over each quarter arc.
pub fn tau_square(form: &ValuationForm2D, half_width: f64) -> Result<f64> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::InvalidArgument("half width must be positive".into()));
    }
    let w = half_width;
    let o = [0.0, 0.0];
    let edges = 2.0
        * w
        * (form.a1(o, -FRAC_PI_2) + form.a2(o, 0.0) - form.a1(o, FRAC_PI_2) - form.a2(o, PI));
    if form.a3.is_none() {
        return Ok(edges);
    }
    let corners = [
        ([w, -w], -FRAC_PI_2),
        ([w, w], 0.0),
        ([-w, w], FRAC_PI_2),
        ([-w, -w], PI),
    ];
    let arcs: f64 = corners
        .iter()
        .map(|&(v, t0)| {
            integrate(
                |t| {
                    let g = form.grad_a3(o, t);
                    g[0] * v[0] + g[1] * v[1]
                },
                t0,
                t0 + FRAC_PI_2,
                DEFAULT_ORDER,
            )
        })
        .sum();
    Ok(edges + arcs)
}

/// `(μ(hK) - μ(0·K)) / h` with the same quadrature for both terms.
pub fn finite_diff_derivative(
    form: &ValuationForm2D,
    k: &ConvexBody,
    h: f64,
    order: usize,
) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    Ok(
        (evaluate_form(form, &k.scale(h)?, order)? - evaluate_form(form, &k.scale(0.0)?, order)?)
            / h,
    )
}
