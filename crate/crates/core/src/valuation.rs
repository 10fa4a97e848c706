//! Compactly supported smooth valuations `ψ = Σ cᵢ ψ_{μᵢ,Aᵢ}` on `ℝⁿ` with
//! `ψ_{μ,A}(K) = μ(K + A)`, their convolution, and the averaging map onto
//! translation-invariant valuations `K ↦ Σ cᵢ vol(K + Aᵢ)`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aabb::{union_opt, Aabb};
use crate::convex::{ConvexBody, Polygon};
use crate::error::{check_dim, Error, Result};
use crate::measure::Measure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub measure: Measure,
    pub body: ConvexBody,
}

impl Term {
    pub fn new(coeff: f64, measure: Measure, body: ConvexBody) -> Self {
        Self {
            coeff,
            measure,
            body,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawValuation", into = "RawValuation")]
pub struct SmoothValuation {
    dim: usize,
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct RawValuation {
    dim: usize,
    terms: Vec<Term>,
}

impl TryFrom<RawValuation> for SmoothValuation {
    type Error = Error;

    fn try_from(raw: RawValuation) -> Result<Self> {
        SmoothValuation::new(raw.dim, raw.terms)
    }
}

impl From<SmoothValuation> for RawValuation {
    fn from(v: SmoothValuation) -> Self {
        RawValuation {
            dim: v.dim,
            terms: v.terms,
        }
    }
}

fn fingerprint<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("valuation parts serialize")
}

impl SmoothValuation {
    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            check_dim(dim, t.measure.dim())?;
            check_dim(dim, t.body.dim())?;
            if !t.coeff.is_finite() {
                return Err(Error::InvalidArgument("coefficients must be finite".into()));
            }
        }
        Ok(Self { dim, terms })
    }

    pub fn single(coeff: f64, measure: Measure, body: ConvexBody) -> Result<Self> {
        let dim = measure.dim();
        Self::new(dim, vec![Term::new(coeff, measure, body)])
    }

    /// The Dirac valuation `(1, δ₀, {0})`, the unit of convolution.
    pub fn unit(dim: usize) -> Result<Self> {
        Self::single(
            1.0,
            Measure::dirac(vec![0.0; dim], 1.0)?,
            ConvexBody::origin(dim)?,
        )
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// `ψ(K) = Σ cᵢ μᵢ(K + Aᵢ)`.
    pub fn evaluate(&self, body: &ConvexBody) -> Result<f64> {
        check_dim(self.dim, body.dim())?;
        let mut total = 0.0;
        for t in &self.terms {
            let sum = body.minkowski_sum(&t.body)?;
            total += t.coeff * t.measure.measure_of_body(&sum)?;
        }
        Ok(total)
    }

    /// Bilinear extension of `(c, μ, A) * (d, ν, B) = (cd, μ*ν, A+B)`.
    /// Terms are ordered lexicographically by `(i, j)`.
    pub fn convolve(&self, other: &SmoothValuation) -> Result<SmoothValuation> {
        check_dim(self.dim, other.dim)?;
        let pairs: Vec<(usize, usize)> = (0..self.terms.len())
            .flat_map(|i| (0..other.terms.len()).map(move |j| (i, j)))
            .collect();
        let terms = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (a, b) = (&self.terms[i], &other.terms[j]);
                Ok(Term {
                    coeff: a.coeff * b.coeff,
                    measure: a.measure.convolve(&b.measure)?,
                    body: a.body.minkowski_sum(&b.body)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SmoothValuation {
            dim: self.dim,
            terms,
        })
    }

    /// Term-list concatenation (valuation sum).
    pub fn add(&self, other: &SmoothValuation) -> Result<SmoothValuation> {
        check_dim(self.dim, other.dim)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(SmoothValuation {
            dim: self.dim,
            terms,
        })
    }

    pub fn scaled(&self, c: f64) -> SmoothValuation {
        SmoothValuation {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(c * t.coeff, t.measure.clone(), t.body.clone()))
                .collect(),
        }
    }

    /// `F(ψ) = Σ cᵢ μᵢ(V) vol(· + Aᵢ)`.
    pub fn f_transform(&self) -> TransInvValuation {
        TransInvValuation {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| (t.coeff * t.measure.total_mass(), t.body.clone()))
                .collect(),
        }
    }

    /// `∪ᵢ (box(μᵢ) + box(-Aᵢ))`; `None` when every measure is zero.
    /// `ψ(K)` only depends on `K` near this box: `K + A` meets `spt μ` iff
    /// `K` meets `spt μ - A`.
    pub fn support_bound(&self) -> Result<Option<Aabb>> {
        let mut acc = None;
        for t in &self.terms {
            if let Some(mb) = t.measure.bounding_box() {
                let ab = t.body.bounding_box()?.reflect();
                acc = union_opt(acc, Some(mb.minkowski_sum(&ab)?));
            }
        }
        Ok(acc)
    }

    /// Merges terms with identical canonical measure and body, then sorts
    /// terms by that fingerprint.
    pub fn canonicalize(&self) -> SmoothValuation {
        let mut keyed: Vec<(String, Term)> = self
            .terms
            .iter()
            .map(|t| {
                let m = t.measure.canonicalize();
                (
                    fingerprint(&(&m, &t.body)),
                    Term::new(t.coeff, m, t.body.clone()),
                )
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.coeff.total_cmp(&b.1.coeff)));
        let mut out: Vec<(String, Term)> = Vec::with_capacity(keyed.len());
        for (k, t) in keyed {
            match out.last_mut() {
                Some((lk, lt)) if *lk == k => lt.coeff += t.coeff,
                _ => out.push((k, t)),
            }
        }
        SmoothValuation {
            dim: self.dim,
            terms: out.into_iter().map(|(_, t)| t).collect(),
        }
    }
}

/// Translation-invariant valuation `K ↦ Σ cᵢ vol(K + Aᵢ)` (times the dual
/// Lebesgue density, left implicit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransInvValuation {
    dim: usize,
    terms: Vec<(f64, ConvexBody)>,
}

impl TransInvValuation {
    pub fn new(dim: usize, terms: Vec<(f64, ConvexBody)>) -> Result<Self> {
        for (c, b) in &terms {
            check_dim(dim, b.dim())?;
            if !c.is_finite() {
                return Err(Error::InvalidArgument("coefficients must be finite".into()));
            }
        }
        Ok(Self { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(f64, ConvexBody)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| *c == 0.0)
    }

    pub fn evaluate(&self, body: &ConvexBody) -> Result<f64> {
        check_dim(self.dim, body.dim())?;
        self.terms.iter().try_fold(0.0, |acc, (c, a)| {
            Ok(acc + c * body.minkowski_sum(a)?.volume()?)
        })
    }

    /// `(c, A) * (d, B) = (cd, A + B)`, extended bilinearly.
    pub fn bf_convolve(&self, other: &TransInvValuation) -> Result<TransInvValuation> {
        check_dim(self.dim, other.dim)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (c, a) in &self.terms {
            for (d, b) in &other.terms {
                terms.push((c * d, a.minkowski_sum(b)?));
            }
        }
        Ok(TransInvValuation {
            dim: self.dim,
            terms,
        })
    }

    /// Terms sorted by body fingerprint, equal bodies merged.
    pub fn canonicalize(&self) -> TransInvValuation {
        let mut keyed: Vec<(String, f64, ConvexBody)> = self
            .terms
            .iter()
            .map(|(c, b)| (fingerprint(b), *c, b.clone()))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut out: Vec<(String, f64, ConvexBody)> = Vec::new();
        for (k, c, b) in keyed {
            match out.last_mut() {
                Some((lk, lc, _)) if *lk == k => *lc += c,
                _ => out.push((k, c, b)),
            }
        }
        TransInvValuation {
            dim: self.dim,
            terms: out.into_iter().map(|(_, c, b)| (c, b)).collect(),
        }
    }
}

/// Least-squares quadratic fit `(c0, c1, c2)` of `t ↦ vol(K + t·D)`, where
/// `D` is the regular 256-gon inscribed in the unit circle.
pub fn steiner_coefficients(body: &ConvexBody, radii: &[f64]) -> Result<[f64; 3]> {
    steiner_coefficients_with(body, radii, |k, d| k.minkowski_sum(d)?.volume())
}

/// [`steiner_coefficients`] with a caller-supplied `vol(K + D)`, used by the
/// fault-injection harness.
pub fn steiner_coefficients_with(
    body: &ConvexBody,
    radii: &[f64],
    volume_of_sum: impl Fn(&ConvexBody, &ConvexBody) -> Result<f64>,
) -> Result<[f64; 3]> {
    check_dim(2, body.dim())?;
    let mut distinct: Vec<f64> = radii.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InvalidArgument(
            "Steiner fit needs at least 3 distinct radii".into(),
        ));
    }
    if radii.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::InvalidArgument("radii must be positive".into()));
    }
    let disk = ConvexBody::Polygon(Polygon::regular(256, 1.0, [0.0, 0.0])?);
    let m = radii.len();
    let mut design = DMatrix::zeros(m, 3);
    let mut rhs = DVector::zeros(m);
    for (row, &t) in radii.iter().enumerate() {
        design[(row, 0)] = 1.0;
        design[(row, 1)] = t;
        design[(row, 2)] = t * t;
        rhs[row] = volume_of_sum(body, &disk.scale(t)?)?;
    }
    let sol = design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))?;
    Ok([sol[0], sol[1], sol[2]])
}

/// Random convex polygons inside a 2-D box, used as evaluation probes.
pub fn random_probes<R: Rng>(rng: &mut R, bound: &Aabb, count: usize) -> Result<Vec<ConvexBody>> {
    check_dim(2, bound.dim())?;
    (0..count)
        .map(|_| {
            let pts: Vec<[f64; 2]> = (0..rng.random_range(3..8))
                .map(|_| {
                    [
                        rng.random_range(bound.lo[0]..=bound.hi[0]),
                        rng.random_range(bound.lo[1]..=bound.hi[1]),
                    ]
                })
                .collect();
            Polygon::hull(&pts).map(ConvexBody::Polygon)
        })
        .collect()
}

/// Seeded probe bodies around `ψ`'s support bound (padded by 1/4): random
/// polygons in 2-D, random intervals in 1-D.
pub fn probe_set(psi: &SmoothValuation, seed: u64, count: usize) -> Result<Vec<ConvexBody>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Some(mut bound) = psi.support_bound()? else {
        return Ok(vec![ConvexBody::origin(psi.dim())?; count]);
    };
    for (lo, hi) in bound.lo.iter_mut().zip(bound.hi.iter_mut()) {
        *lo -= 0.25;
        *hi += 0.25;
    }
    match psi.dim() {
        1 => (0..count)
            .map(|_| {
                let a = rng.random_range(bound.lo[0]..=bound.hi[0]);
                let b = rng.random_range(a..=bound.hi[0]);
                ConvexBody::interval(a, b)
            })
            .collect(),
        2 => random_probes(&mut rng, &bound, count),
        d => Err(Error::Unsupported(format!("probes in dimension {d}"))),
    }
}

/// Largest `|ψ(K) - φ(K)|` over the probes.
pub fn probe_distance(
    a: &SmoothValuation,
    b: &SmoothValuation,
    probes: &[ConvexBody],
) -> Result<f64> {
    probes.iter().try_fold(0.0f64, |m, k| {
        Ok(m.max((a.evaluate(k)? - b.evaluate(k)?).abs()))
    })
}
