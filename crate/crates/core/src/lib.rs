//! Convolution of smooth valuations on finite-dimensional vector spaces.

pub mod aabb;
pub mod conv;
pub mod convex;
pub mod error;
pub mod forms;
pub mod measure;
pub mod normal_cycle;
pub mod oned;
pub mod quadrature;
pub mod valuation;
pub mod verify;

pub use aabb::Aabb;
pub use convex::{ConvexBody, Interval, Point2, Polygon, SupportSampled};
pub use error::{Error, Result};
pub use measure::{Atom, Grid, Measure};
pub use normal_cycle::{NormalCycle2D, ValuationForm2D};
pub use oned::Pair1D;
pub use valuation::{SmoothValuation, Term, TransInvValuation};
