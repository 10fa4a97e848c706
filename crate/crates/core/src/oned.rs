//! Valuations on `ℝ` in the `(f, g)` representation `φ([a, b]) = g(b) - f(a)`.
//!
//! Both functions vanish to the left of the grid and equal the constant `c2`
//! to the right of it. Convolution uses `(f₁ * f₂)' = f₁' * f₂`: `f₁` is not
//! compactly supported, but its derivative is.

use serde::{Deserialize, Serialize};

use crate::conv;
use crate::convex::ConvexBody;
use crate::error::{check_dim, Error, Result};
use crate::measure::Measure;
use crate::valuation::SmoothValuation;

pub const DEFAULT_SPACING: f64 = 1e-3;

const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPair", into = "RawPair")]
pub struct Pair1D {
    origin: f64,
    spacing: f64,
    f: Vec<f64>,
    g: Vec<f64>,
    c2: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPair {
    origin: f64,
    spacing: f64,
    f: Vec<f64>,
    g: Vec<f64>,
    c2: f64,
}

impl TryFrom<RawPair> for Pair1D {
    type Error = Error;

    fn try_from(r: RawPair) -> Result<Self> {
        Pair1D::new(r.origin, r.spacing, r.f, r.g, r.c2)
    }
}

impl From<Pair1D> for RawPair {
    fn from(p: Pair1D) -> Self {
        RawPair {
            origin: p.origin,
            spacing: p.spacing,
            f: p.f,
            g: p.g,
            c2: p.c2,
        }
    }
}

fn interval_bounds(body: &ConvexBody) -> Result<(f64, f64)> {
    check_dim(1, body.dim())?;
    Ok((
        -body.support_function(&[-1.0])?,
        body.support_function(&[1.0])?,
    ))
}

impl Pair1D {
    pub fn new(origin: f64, spacing: f64, f: Vec<f64>, g: Vec<f64>, c2: f64) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) || !origin.is_finite() || !c2.is_finite() {
            return Err(Error::InvalidArgument("bad grid or constant".into()));
        }
        if f.len() != g.len() || f.len() < 2 {
            return Err(Error::InvalidArgument(
                "f and g need equal length of at least 2".into(),
            ));
        }
        if f.iter().chain(&g).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite values".into()));
        }
        let tol = NORMALIZATION_TOL * (1.0 + c2.abs());
        let last = f.len() - 1;
        if f[0].abs() > tol
            || g[0].abs() > tol
            || (f[last] - c2).abs() > tol
            || (g[last] - c2).abs() > tol
        {
            return Err(Error::InvalidArgument(
                "f and g must start at 0 and end at c2".into(),
            ));
        }
        Ok(Self {
            origin,
            spacing,
            f,
            g,
            c2,
        })
    }

    /// `(f, g)` of `ψ_{μ,A}` at [`DEFAULT_SPACING`].
    pub fn from_term(measure: &Measure, body: &ConvexBody) -> Result<Self> {
        Self::from_term_with_spacing(measure, body, DEFAULT_SPACING)
    }

    pub fn from_term_with_spacing(
        measure: &Measure,
        body: &ConvexBody,
        spacing: f64,
    ) -> Result<Self> {
        Self::from_valuation(
            &SmoothValuation::single(1.0, measure.clone(), body.clone())?,
            spacing,
        )
    }

    /// `f(x) = Σ cᵢ μᵢ((-∞, x + pᵢ))` and `g(x) = Σ cᵢ μᵢ((-∞, x + qᵢ)])` for
    /// `Aᵢ = [pᵢ, qᵢ]`, so that `g(b) - f(a) = Σ cᵢ μᵢ([a + pᵢ, b + qᵢ])`.
    pub fn from_valuation(psi: &SmoothValuation, spacing: f64) -> Result<Self> {
        check_dim(1, psi.dim())?;
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidArgument("spacing must be positive".into()));
        }
        let mut parts = Vec::new();
        let (mut start, mut end) = (f64::INFINITY, f64::NEG_INFINITY);
        for t in psi.terms() {
            let Some(bb) = t.measure.bounding_box() else {
                continue;
            };
            let (p, q) = interval_bounds(&t.body)?;
            start = start.min(bb.lo[0] - q);
            end = end.max(bb.hi[0] - p);
            parts.push((t.coeff, &t.measure, p, q));
        }
        if parts.is_empty() {
            return Self::new(0.0, spacing, vec![0.0; 2], vec![0.0; 2], 0.0);
        }
        // one spare node on each side keeps the end values clear of atoms
        let origin = start - spacing;
        let n = ((end - origin) / spacing).floor() as usize + 2;
        let xs: Vec<f64> = (0..n).map(|k| origin + k as f64 * spacing).collect();
        let mut f = vec![0.0; n];
        let mut g = vec![0.0; n];
        let mut c2 = 0.0;
        for (c, mu, p, q) in parts {
            let fx: Vec<f64> = xs.iter().map(|x| x + p).collect();
            let gx: Vec<f64> = xs.iter().map(|x| x + q).collect();
            for (acc, v) in f.iter_mut().zip(mu.cumulative(&fx, false)?) {
                *acc += c * v;
            }
            for (acc, v) in g.iter_mut().zip(mu.cumulative(&gx, true)?) {
                *acc += c * v;
            }
            c2 += c * mu.total_mass();
        }
        f[n - 1] = c2;
        g[n - 1] = c2;
        Self::new(origin, spacing, f, g, c2)
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn right_constant(&self) -> f64 {
        self.c2
    }

    fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        let t = (x - self.origin) / self.spacing;
        let last = values.len() - 1;
        if t <= 0.0 {
            return 0.0;
        }
        if t >= last as f64 {
            return self.c2;
        }
        let i = (t.floor() as usize).min(last - 1);
        let s = t - i as f64;
        values[i] + s * (values[i + 1] - values[i])
    }

    pub fn f_at(&self, x: f64) -> f64 {
        self.interpolate(&self.f, x)
    }

    pub fn g_at(&self, x: f64) -> f64 {
        self.interpolate(&self.g, x)
    }

    /// `φ([a, b]) = g(b) - f(a)`.
    pub fn evaluate(&self, a: f64, b: f64) -> Result<f64> {
        if !(a <= b) {
            return Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")));
        }
        Ok(self.g_at(b) - self.f_at(a))
    }

    /// `((f₁ * f₂)', (g₁ * g₂)')`, computed as `f₁' * f₂` on the common grid.
    pub fn convolve(&self, other: &Pair1D) -> Result<Pair1D> {
        let h = self.spacing;
        if (h - other.spacing).abs() > 1e-12 * h.max(other.spacing) {
            return Err(Error::IncompatibleGrid(format!(
                "spacings {} and {}",
                h, other.spacing
            )));
        }
        let c2 = self.c2 * other.c2;
        let f = derivative_convolve(&self.f, &other.f, other.c2);
        let g = derivative_convolve(&self.g, &other.g, other.c2);
        let mut out = Pair1D {
            origin: self.origin + other.origin,
            spacing: h,
            f,
            g,
            c2,
        };
        let last = out.f.len() - 1;
        out.f[0] = 0.0;
        out.g[0] = 0.0;
        out.f[last] = c2;
        out.g[last] = c2;
        Ok(out)
    }

    /// Largest `|f₁ - f₂|` or `|g₁ - g₂|` over the nodes of both grids.
    pub fn sup_distance(&self, other: &Pair1D) -> f64 {
        fn nodes(p: &Pair1D) -> impl Iterator<Item = f64> + '_ {
            (0..p.f.len()).map(move |k| p.origin + k as f64 * p.spacing)
        }
        nodes(self)
            .chain(nodes(other))
            .map(|x| {
                (self.f_at(x) - other.f_at(x))
                    .abs()
                    .max((self.g_at(x) - other.g_at(x)).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Samples of `(u' * v)` where `u` is eventually constant and `v` is extended
/// by 0 on the left and `v_right` on the right. `u'` uses central differences
/// (one-sided at the ends) with trapezoid weights, so its weights sum to
/// `u[last] - u[0]` exactly up to rounding.
fn derivative_convolve(u: &[f64], v: &[f64], v_right: f64) -> Vec<f64> {
    let n = u.len();
    let mut w = vec![0.0; n];
    w[0] = 0.5 * (u[1] - u[0]);
    w[n - 1] = 0.5 * (u[n - 1] - u[n - 2]);
    for k in 1..n - 1 {
        w[k] = 0.5 * (u[k + 1] - u[k - 1]);
    }
    let nv = v.len();
    let mut out = conv::convolve(&w, &[n], v, &[nv]);
    // v beyond its last node is constant, which the finite array omits
    let mut tail = 0.0;
    for (m, slot) in out.iter_mut().enumerate().skip(nv) {
        tail += w[m - nv];
        *slot += v_right * tail;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform01() -> Measure {
        Measure::uniform(&[0.0], &[1.0], 1.0, 1e-3).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let p = Pair1D::from_term(&uniform01(), &ConvexBody::origin(1).unwrap()).unwrap();
        assert_eq!(p.evaluate(-5.0, -4.0).unwrap(), 0.0);
        assert!((p.evaluate(-5.0, 5.0).unwrap() - p.right_constant()).abs() < 1e-15);
        assert!((p.evaluate(0.0, 0.5).unwrap() - 0.5).abs() < 1e-6);
        assert!((p.evaluate(0.3, 0.3).unwrap() - (p.g_at(0.3) - p.f_at(0.3))).abs() == 0.0);
        assert!(p.evaluate(1.0, 0.0).is_err());

        let q = Pair1D::from_term(&uniform01(), &ConvexBody::interval(0.0, 1.0).unwrap()).unwrap();
        assert!((q.evaluate(0.0, 0.0).unwrap() - 1.0).abs() < 1e-6);
        assert!((q.right_constant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalization_is_enforced() {
        assert!(Pair1D::new(0.0, 0.1, vec![0.0, 1.0], vec![0.0, 1.0], 1.0).is_ok());
        assert!(Pair1D::new(0.0, 0.1, vec![0.5, 1.0], vec![0.0, 1.0], 1.0).is_err());
        assert!(Pair1D::new(0.0, 0.1, vec![0.0, 1.0], vec![0.0, 0.9], 1.0).is_err());
        assert!(Pair1D::new(0.0, 0.0, vec![0.0, 1.0], vec![0.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn atoms_use_closed_intervals() {
        let m = Measure::dirac(vec![0.5], 2.0).unwrap();
        let p = Pair1D::from_term_with_spacing(&m, &ConvexBody::origin(1).unwrap(), 0.25).unwrap();
        assert_eq!(p.evaluate(0.5, 0.5).unwrap(), 2.0);
        assert_eq!(p.evaluate(0.0, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn narrow_bump_is_approximate_identity() {
        let mu = Measure::smooth_bump(&[0.3], 0.4, 1.5, 1e-3).unwrap();
        let p1 = Pair1D::from_term(&mu, &ConvexBody::interval(-0.2, 0.1).unwrap()).unwrap();
        let width = 0.01;
        let delta = Measure::smooth_bump(&[0.0], width, 1.0, 1e-3).unwrap();
        let p2 = Pair1D::from_term(&delta, &ConvexBody::origin(1).unwrap()).unwrap();
        let c = p1.convolve(&p2).unwrap();
        assert!((c.right_constant() - p1.right_constant()).abs() < 1e-9);
        // every sample of c lies within 1e-3 of p1 shifted by at most 2·width
        let shifts: Vec<f64> = (-20..=20).map(|k| k as f64 * width / 10.0).collect();
        for k in 0..c.f().len() {
            let x = c.origin() + k as f64 * c.spacing();
            for (mine, theirs) in [(c.f_at(x), 0), (c.g_at(x), 1)] {
                let best = shifts
                    .iter()
                    .map(|s| {
                        let r = if theirs == 0 {
                            p1.f_at(x + s)
                        } else {
                            p1.g_at(x + s)
                        };
                        (mine - r).abs()
                    })
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-3, "x={x} gap={best}");
            }
        }
    }

    #[test]
    fn right_constant_is_multiplicative() {
        let m1 = Measure::smooth_bump(&[0.0], 0.3, 2.5, 1e-3).unwrap();
        let m2 = Measure::uniform(&[0.2], &[0.7], -1.5, 1e-3).unwrap();
        let p1 = Pair1D::from_term(&m1, &ConvexBody::interval(0.0, 0.5).unwrap()).unwrap();
        let p2 = Pair1D::from_term(&m2, &ConvexBody::origin(1).unwrap()).unwrap();
        let c = p1.convolve(&p2).unwrap();
        assert!((c.right_constant() - p1.right_constant() * p2.right_constant()).abs() < 1e-9);
        let cf = c.f();
        assert!((cf[cf.len() - 2] - c.right_constant()).abs() < 1e-9);
    }

    #[test]
    fn convolution_matches_measure_convolution() {
        let cases = [
            (
                Measure::smooth_bump(&[0.1], 0.25, 1.0, 1e-3).unwrap(),
                ConvexBody::interval(0.0, 0.3).unwrap(),
                Measure::uniform(&[-0.2], &[0.4], 2.0, 1e-3).unwrap(),
                ConvexBody::origin(1).unwrap(),
            ),
            (
                Measure::smooth_bump(&[-0.3], 0.2, 1.0, 1e-3)
                    .unwrap()
                    .convolve(&Measure::dirac(vec![0.0], 1.0).unwrap())
                    .unwrap(),
                ConvexBody::interval(-0.1, 0.0).unwrap(),
                Measure::smooth_bump(&[0.4], 0.3, -0.7, 1e-3).unwrap(),
                ConvexBody::interval(0.2, 0.25).unwrap(),
            ),
        ];
        for (m1, a1, m2, a2) in cases {
            let lhs = Pair1D::from_term(&m1, &a1)
                .unwrap()
                .convolve(&Pair1D::from_term(&m2, &a2).unwrap())
                .unwrap();
            let rhs =
                Pair1D::from_term(&m1.convolve(&m2).unwrap(), &a1.minkowski_sum(&a2).unwrap())
                    .unwrap();
            assert!(lhs.sup_distance(&rhs) < 1e-3, "{}", lhs.sup_distance(&rhs));
        }
    }

    #[test]
    fn spacing_mismatch_is_rejected() {
        let p = Pair1D::new(0.0, 0.1, vec![0.0, 1.0], vec![0.0, 1.0], 1.0).unwrap();
        let q = Pair1D::new(0.0, 0.2, vec![0.0, 1.0], vec![0.0, 1.0], 1.0).unwrap();
        assert!(matches!(p.convolve(&q), Err(Error::IncompatibleGrid(_))));
    }

    #[test]
    fn json_shape() {
        let p = Pair1D::new(0.0, 0.5, vec![0.0, 1.0], vec![0.0, 1.0], 1.0).unwrap();
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"origin":0.0,"spacing":0.5,"f":[0.0,1.0],"g":[0.0,1.0],"c2":1.0}"#
        );
        assert!(serde_json::from_str::<Pair1D>(
            r#"{"origin":0.0,"spacing":0.5,"f":[0.2,1.0],"g":[0.0,1.0],"c2":1.0}"#
        )
        .is_err());
    }
}
