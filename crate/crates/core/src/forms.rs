//! Named test forms on `ℝ² × S¹`.
//!
//! Every form is multiplied by a smooth cutoff that equals 1 on `[-4, 4]²`
//! and vanishes outside `[-6, 6]²`.

use std::f64::consts::TAU;

use crate::aabb::Aabb;
use crate::convex::Point2;
use crate::error::{Error, Result};
use crate::normal_cycle::ValuationForm2D;

pub const CATALOG: [&str; 8] = [
    "euler",
    "area-stokes",
    "area-density",
    "square-example",
    "tau-bump",
    "generic-a",
    "generic-b",
    "generic-c",
];

const INNER: f64 = 4.0;
const OUTER: f64 = 6.0;

fn flat(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

fn step(t: f64) -> f64 {
    let r = t.abs();
    let a = flat(OUTER - r);
    a / (a + flat(r - INNER))
}

/// `C^∞` cutoff, 1 on `[-4, 4]²`, 0 outside `(-6, 6)²`.
pub fn cutoff(x: Point2) -> f64 {
    step(x[0]) * step(x[1])
}

fn support_box() -> Aabb {
    Aabb::new(vec![-OUTER, -OUTER], vec![OUTER, OUTER])
}

pub fn catalog(name: &str) -> Result<ValuationForm2D> {
    let base = ValuationForm2D::new(support_box())?;
    let form = match name {
        "euler" => base.with_a3(|x, _| cutoff(x) / TAU),
        "area-stokes" => base
            .with_a1(|x, _| -0.5 * x[1] * cutoff(x))
            .with_a2(|x, _| 0.5 * x[0] * cutoff(x)),
        "area-density" => base.with_phi(cutoff),
        "square-example" => base.with_a2(|x, t| t.cos() * cutoff(x)),
        "tau-bump" => base.with_a3(|x, t| x[0] * t.cos().exp() * cutoff(x)),
        "generic-a" => base
            .with_a1(|x, t| (1.0 + x[0] + x[1] * x[1]) * t.sin() * cutoff(x))
            .with_a2(|x, t| (x[0] * x[1] + 2.0) * (2.0 * t).cos() * cutoff(x))
            .with_a3(|x, t| (3.0 * x[0] * t.cos() + x[1] * x[1] * t.sin()) * cutoff(x))
            .with_phi(|x| (1.0 + 0.5 * x[0]) * cutoff(x)),
        "generic-b" => base
            .with_a1(|x, t| x[0].exp() * t.cos() * cutoff(x))
            .with_a2(|x, t| (x[1] * t.sin() + 0.5) * cutoff(x))
            .with_a3(|x, t| ((x[0] + t).sin() + x[1]) * cutoff(x))
            .with_phi(|x| (0.3 + x[1]) * cutoff(x)),
        "generic-c" => base
            .with_a1(|x, t| (x[1] * (2.0 * t).cos() - t.sin() * x[0].cos()) * cutoff(x))
            .with_a2(|x, t| (1.0 + x[0] * x[0]) * t.cos() * cutoff(x))
            .with_a3(|x, t| (x[0] * x[1] + 0.5 * x[0] * t.sin()) * cutoff(x))
            .with_phi(|x| (x[0].cos() + x[1]) * cutoff(x)),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown form '{other}'; expected one of {}",
                CATALOG.join(", ")
            )))
        }
    };
    Ok(form)
}
