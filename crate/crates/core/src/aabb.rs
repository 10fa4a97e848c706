//! Axis-aligned boxes used for support bounds.
//!
//! All arithmetic here is plain floating point with no outward rounding, so
//! containment statements are exact whenever the coordinates involved are
//! exactly representable sums (e.g. dyadic rationals of moderate size).

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Aabb {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        debug_assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    pub fn point(p: &[f64]) -> Self {
        Self {
            lo: p.to_vec(),
            hi: p.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains_point(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (l, h))| l <= x && x <= h)
    }

    /// `self ⊆ other`, compared without tolerance.
    pub fn is_subset_of(&self, other: &Aabb) -> bool {
        self.dim() == other.dim()
            && self.lo.iter().zip(&other.lo).all(|(a, b)| a >= b)
            && self.hi.iter().zip(&other.hi).all(|(a, b)| a <= b)
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            lo: self
                .lo
                .iter()
                .zip(&other.lo)
                .map(|(a, b)| a.min(*b))
                .collect(),
            hi: self
                .hi
                .iter()
                .zip(&other.hi)
                .map(|(a, b)| a.max(*b))
                .collect(),
        }
    }

    pub fn minkowski_sum(&self, other: &Aabb) -> Result<Aabb> {
        check_dim(self.dim(), other.dim())?;
        Ok(Aabb {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a + b).collect(),
        })
    }

    /// The reflected box `-B`.
    pub fn reflect(&self) -> Aabb {
        Aabb {
            lo: self.hi.iter().map(|x| -x).collect(),
            hi: self.lo.iter().map(|x| -x).collect(),
        }
    }
}

/// Union of optional boxes, where `None` stands for the empty set.
pub fn union_opt(a: Option<Aabb>, b: Option<Aabb>) -> Option<Aabb> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.union(&b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Minkowski sum of optional boxes; the empty set absorbs.
pub fn sum_opt(a: Option<&Aabb>, b: Option<&Aabb>) -> Result<Option<Aabb>> {
    match (a, b) {
        (Some(a), Some(b)) => a.minkowski_sum(b).map(Some),
        _ => Ok(None),
    }
}

/// `a ⊆ b` for optional boxes.
pub fn subset_opt(a: Option<&Aabb>, b: Option<&Aabb>) -> bool {
    match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a.is_subset_of(b),
    }
}
