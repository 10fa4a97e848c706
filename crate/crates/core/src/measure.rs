//! Compactly supported signed measures: point masses plus cell-averaged
//! densities on regular grids.
//!
//! Grid cell `i` covers `Π_k [origin_k + i_k·h, origin_k + (i_k + 1)·h]`;
//! values are densities, so a cell carries mass `value · h^dim`. Values are
//! stored row-major with the last axis fastest.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::aabb::{union_opt, Aabb};
use crate::conv;
use crate::convex::ConvexBody;
use crate::error::{check_dim, Error, Result};

/// Subsamples per axis used by [`Measure::measure_of_body`] on cells cut by
/// the body boundary.
pub const DEFAULT_SUBSAMPLES: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: Vec<f64>,
    pub weight: f64,
}

impl Serialize for Atom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (&self.point, self.weight).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (point, weight) = <(Vec<f64>, f64)>::deserialize(d)?;
        Ok(Atom { point, weight })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    origin: Vec<f64>,
    spacing: f64,
    shape: Vec<usize>,
    values: Vec<f64>,
}

impl Grid {
    pub fn new(
        origin: Vec<f64>,
        spacing: f64,
        shape: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let g = Grid {
            origin,
            spacing,
            shape,
            values,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return Err(Error::InvalidMeasure(format!(
                "grid spacing must be positive, got {}",
                self.spacing
            )));
        }
        if self.origin.len() != self.shape.len() || self.shape.is_empty() {
            return Err(Error::InvalidMeasure(
                "grid origin/shape rank mismatch".into(),
            ));
        }
        if self.shape.iter().any(|&n| n == 0) {
            return Err(Error::InvalidMeasure("grid shape has an empty axis".into()));
        }
        if self.shape.iter().product::<usize>() != self.values.len() {
            return Err(Error::InvalidMeasure(format!(
                "grid has {} values for shape {:?}",
                self.values.len(),
                self.shape
            )));
        }
        if self
            .origin
            .iter()
            .chain(&self.values)
            .any(|x| !x.is_finite())
        {
            return Err(Error::InvalidMeasure("grid entries must be finite".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim() as i32)
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_volume()
    }

    /// Full grid extent `[origin, origin + shape·h]`.
    pub fn extent(&self) -> Aabb {
        Aabb::new(
            self.origin.clone(),
            self.origin
                .iter()
                .zip(&self.shape)
                .map(|(o, &n)| o + n as f64 * self.spacing)
                .collect(),
        )
    }

    fn unravel(&self, mut flat: usize, out: &mut [usize]) {
        for k in (0..self.shape.len()).rev() {
            out[k] = flat % self.shape[k];
            flat /= self.shape[k];
        }
    }

    /// Cell value at a multi-index.
    pub fn at(&self, idx: &[usize]) -> f64 {
        let flat = idx
            .iter()
            .zip(&self.shape)
            .fold(0usize, |acc, (i, n)| acc * n + i);
        self.values[flat]
    }

    fn translated_scaled(&self, shift: &[f64], w: f64) -> Grid {
        Grid {
            origin: self.origin.iter().zip(shift).map(|(o, s)| o + s).collect(),
            spacing: self.spacing,
            shape: self.shape.clone(),
            values: self.values.iter().map(|v| v * w).collect(),
        }
    }

    /// Total order used to make grid convolution independent of operand order.
    fn order_key(&self, other: &Grid) -> Ordering {
        self.shape
            .cmp(&other.shape)
            .then_with(|| cmp_f64s(&self.origin, &other.origin))
            .then_with(|| cmp_f64s(&self.values, &other.values))
    }

    fn convolve_with(&self, other: &Grid, spectral: Option<bool>) -> Grid {
        let (a, b) = if self.order_key(other) == Ordering::Greater {
            (other, self)
        } else {
            (self, other)
        };
        let h = a.spacing;
        let shape = conv::output_shape(&a.shape, &b.shape);
        let raw = match spectral {
            None => conv::convolve(&a.values, &a.shape, &b.values, &b.shape),
            Some(false) => conv::convolve_direct(&a.values, &a.shape, &b.values, &b.shape),
            Some(true) => conv::convolve_fft(&a.values, &a.shape, &b.values, &b.shape),
        };
        let cv = a.cell_volume();
        // The product of cells i and j is a tent centred at the sum of the
        // cell centres, so output cell k sits half a cell inside o_a + o_b.
        Grid {
            origin: a
                .origin
                .iter()
                .zip(&b.origin)
                .map(|(x, y)| (x + y) + 0.5 * h)
                .collect(),
            spacing: h,
            shape,
            values: raw.into_iter().map(|v| v * cv).collect(),
        }
    }

    /// Integral of the density over a body by per-cell subsampling.
    fn integrate_over(&self, body: &ConvexBody, subsamples: usize) -> Result<f64> {
        if let Some(iv) = interval_of(body)? {
            return Ok(self.integrate_interval(iv.0, iv.1));
        }
        let d = self.dim();
        let h = self.spacing;
        let bbox = body.bounding_box()?;
        // corner-node membership, shared between neighbouring cells
        let node_shape: Vec<usize> = self.shape.iter().map(|n| n + 1).collect();
        let node_count: usize = node_shape.iter().product();
        let mut node_in = vec![false; node_count];
        let mut idx = vec![0usize; d];
        let mut x = vec![0.0; d];
        for (flat, slot) in node_in.iter_mut().enumerate() {
            let mut f = flat;
            for k in (0..d).rev() {
                idx[k] = f % node_shape[k];
                f /= node_shape[k];
                x[k] = self.origin[k] + idx[k] as f64 * h;
            }
            *slot = bbox.contains_point(&x) && body.contains(&x);
        }
        let node_flat = |i: &[usize]| i.iter().zip(&node_shape).fold(0, |acc, (a, n)| acc * n + a);
        let corners = 1usize << d;
        let s = subsamples.max(1);
        let sub_total = s.pow(d as u32);
        let mut total = 0.0;
        let mut corner = vec![0usize; d];
        let mut sub = vec![0usize; d];
        for (flat, &v) in self.values.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            self.unravel(flat, &mut idx);
            let mut inside = 0;
            for c in 0..corners {
                for k in 0..d {
                    corner[k] = idx[k] + ((c >> k) & 1);
                }
                if node_in[node_flat(&corner)] {
                    inside += 1;
                }
            }
            if inside == corners {
                total += v;
                continue;
            }
            let lo: Vec<f64> = (0..d).map(|k| self.origin[k] + idx[k] as f64 * h).collect();
            let cell = Aabb::new(lo.clone(), lo.iter().map(|l| l + h).collect());
            if inside == 0 && !overlaps(&cell, &bbox) {
                continue;
            }
            let mut hits = 0usize;
            for m in 0..sub_total {
                let mut r = m;
                for k in (0..d).rev() {
                    sub[k] = r % s;
                    r /= s;
                    x[k] = lo[k] + (sub[k] as f64 + 0.5) * h / s as f64;
                }
                if body.contains(&x) {
                    hits += 1;
                }
            }
            total += v * hits as f64 / sub_total as f64;
        }
        Ok(total * self.cell_volume())
    }

    /// Exact integral of a 1-D cell-constant density over `[a, b]`.
    fn integrate_interval(&self, a: f64, b: f64) -> f64 {
        let h = self.spacing;
        let o = self.origin[0];
        let n = self.shape[0];
        let first = (((a - o) / h).floor().max(0.0) as usize).min(n);
        let mut total = 0.0;
        for i in first..n {
            let c0 = o + i as f64 * h;
            if c0 > b {
                break;
            }
            let c1 = o + (i + 1) as f64 * h;
            let overlap = b.min(c1) - a.max(c0);
            if overlap > 0.0 {
                total += self.values[i] * overlap;
            }
        }
        total
    }
}

fn overlaps(a: &Aabb, b: &Aabb) -> bool {
    a.lo.iter()
        .zip(&a.hi)
        .zip(b.lo.iter().zip(&b.hi))
        .all(|((al, ah), (bl, bh))| al <= bh && bl <= ah)
}

/// 1-D bodies as closed intervals.
fn interval_of(body: &ConvexBody) -> Result<Option<(f64, f64)>> {
    if body.dim() != 1 {
        return Ok(None);
    }
    Ok(Some((
        -body.support_function(&[-1.0])?,
        body.support_function(&[1.0])?,
    )))
}

fn cmp_f64s(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Signed measure with compact support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct Measure {
    dim: usize,
    atoms: Vec<Atom>,
    grids: Vec<Grid>,
}

/// JSON form. A single density component is written as `"grid"`; a measure
/// built from several misaligned components uses `"grids"`.
#[derive(Serialize, Deserialize)]
struct RawMeasure {
    dim: usize,
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<Grid>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    grids: Vec<Grid>,
}

impl TryFrom<RawMeasure> for Measure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        let mut grids: Vec<Grid> = raw.grid.into_iter().collect();
        grids.extend(raw.grids);
        Measure::new(raw.dim, raw.atoms, grids)
    }
}

impl From<Measure> for RawMeasure {
    fn from(m: Measure) -> Self {
        let (grid, grids) = if m.grids.len() == 1 {
            (m.grids.into_iter().next(), Vec::new())
        } else {
            (None, m.grids)
        };
        RawMeasure {
            dim: m.dim,
            atoms: m.atoms,
            grid,
            grids,
        }
    }
}

impl Measure {
    pub fn new(dim: usize, atoms: Vec<Atom>, grids: Vec<Grid>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMeasure("dimension must be >= 1".into()));
        }
        for a in &atoms {
            check_dim(dim, a.point.len())?;
            if !a.weight.is_finite() || a.point.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidMeasure("atoms must be finite".into()));
            }
        }
        for g in &grids {
            g.validate()?;
            check_dim(dim, g.dim())?;
        }
        Ok(Self { dim, atoms, grids })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            atoms: Vec::new(),
            grids: Vec::new(),
        }
    }

    /// Point mass `weight · δ_point`.
    pub fn dirac(point: Vec<f64>, weight: f64) -> Result<Self> {
        let dim = point.len();
        Measure::new(dim, vec![Atom { point, weight }], Vec::new())
    }

    pub fn from_grid(grid: Grid) -> Self {
        Self {
            dim: grid.dim(),
            atoms: Vec::new(),
            grids: vec![grid],
        }
    }

    /// Constant `density` on the box `[lo, hi]`, with `round((hi-lo)/h)`
    /// cells per axis.
    pub fn uniform(lo: &[f64], hi: &[f64], density: f64, spacing: f64) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        if !(spacing > 0.0) {
            return Err(Error::InvalidArgument("spacing must be positive".into()));
        }
        let shape: Vec<usize> = lo
            .iter()
            .zip(hi)
            .map(|(l, h)| (((h - l) / spacing).round() as usize).max(1))
            .collect();
        let n = shape.iter().product();
        Grid::new(lo.to_vec(), spacing, shape, vec![density; n]).map(Measure::from_grid)
    }

    /// Smooth bump `exp(-1/(1-|x-c|²/r²))` on the cells lying entirely
    /// inside the ball, normalized to total mass `mass`.
    pub fn smooth_bump(center: &[f64], radius: f64, mass: f64, spacing: f64) -> Result<Self> {
        if !(radius > 0.0) || !(spacing > 0.0) {
            return Err(Error::InvalidArgument(
                "bump needs radius > 0 and spacing > 0".into(),
            ));
        }
        if spacing >= radius {
            return Err(Error::InvalidArgument(format!(
                "spacing {spacing} cannot resolve a bump of radius {radius}"
            )));
        }
        let d = center.len();
        let n = (2.0 * radius / spacing).ceil() as usize;
        let half = n as f64 / 2.0;
        let origin: Vec<f64> = center.iter().map(|c| c - half * spacing).collect();
        let total = n.pow(d as u32);
        let mut values = vec![0.0; total];
        let mut idx = vec![0usize; d];
        for (flat, slot) in values.iter_mut().enumerate() {
            let mut f = flat;
            for k in (0..d).rev() {
                idx[k] = f % n;
                f /= n;
            }
            // offsets are computed relative to the centre so the profile is
            // exactly symmetric under i ↦ n-1-i
            let mut r2 = 0.0;
            let mut far2 = 0.0;
            for &i in &idx {
                let c = (i as f64 + 0.5 - half) * spacing;
                r2 += c * c;
                let e = ((i as f64 - half).abs()).max((i as f64 + 1.0 - half).abs()) * spacing;
                far2 += e * e;
            }
            if far2 < radius * radius {
                let q = r2 / (radius * radius);
                *slot = (-1.0 / (1.0 - q)).exp();
            }
        }
        let raw_mass: f64 = values.iter().sum::<f64>() * spacing.powi(d as i32);
        if raw_mass == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "spacing {spacing} leaves no cell inside the bump"
            )));
        }
        let scale = mass / raw_mass;
        values.iter_mut().for_each(|v| *v *= scale);
        Grid::new(origin, spacing, vec![n; d], values).map(Measure::from_grid)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn grids(&self) -> &[Grid] {
        &self.grids
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.grids.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum::<f64>()
            + self.grids.iter().map(Grid::mass).sum::<f64>()
    }

    /// Box containing every atom and the full extent of every grid; `None`
    /// for the zero measure.
    pub fn bounding_box(&self) -> Option<Aabb> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Aabb::point(&a.point))
            .reduce(|a, b| a.union(&b));
        let grids = self
            .grids
            .iter()
            .map(Grid::extent)
            .reduce(|a, b| a.union(&b));
        union_opt(atoms, grids)
    }

    pub fn scaled(&self, c: f64) -> Measure {
        Measure {
            dim: self.dim,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    point: a.point.clone(),
                    weight: a.weight * c,
                })
                .collect(),
            grids: self
                .grids
                .iter()
                .map(|g| g.translated_scaled(&vec![0.0; g.dim()], c))
                .collect(),
        }
    }

    /// `μ * ν`: atoms pair up by addition, atoms translate grids, and grid
    /// pairs convolve. Output order is atoms `(i, j)` lexicographic, then
    /// `μ`-atoms × `ν`-grids, `μ`-grids × `ν`-atoms, and grid pairs.
    pub fn convolve(&self, other: &Measure) -> Result<Measure> {
        self.convolve_impl(other, None)
    }

    /// Convolution with the grid path forced to direct summation or FFT.
    pub fn convolve_with_path(&self, other: &Measure, spectral: bool) -> Result<Measure> {
        self.convolve_impl(other, Some(spectral))
    }

    fn convolve_impl(&self, other: &Measure, spectral: Option<bool>) -> Result<Measure> {
        check_dim(self.dim, other.dim)?;
        for g in &self.grids {
            for k in &other.grids {
                let (a, b) = (g.spacing, k.spacing);
                if (a - b).abs() > 1e-12 * a.max(b) {
                    return Err(Error::IncompatibleGrid(format!(
                        "grid spacings {a} and {b} differ"
                    )));
                }
            }
        }
        let mut atoms = Vec::with_capacity(self.atoms.len() * other.atoms.len());
        for a in &self.atoms {
            for b in &other.atoms {
                atoms.push(Atom {
                    point: a.point.iter().zip(&b.point).map(|(x, y)| x + y).collect(),
                    weight: a.weight * b.weight,
                });
            }
        }
        let mut grids = Vec::new();
        for a in &self.atoms {
            for g in &other.grids {
                grids.push(g.translated_scaled(&a.point, a.weight));
            }
        }
        for g in &self.grids {
            for b in &other.atoms {
                grids.push(g.translated_scaled(&b.point, b.weight));
            }
        }
        for g in &self.grids {
            for k in &other.grids {
                grids.push(g.convolve_with(k, spectral));
            }
        }
        Ok(Measure {
            dim: self.dim,
            atoms,
            grids,
        })
    }

    /// `μ(K)` with closed membership for atoms; densities integrated exactly
    /// in 1-D and by `DEFAULT_SUBSAMPLES`-per-axis subsampling otherwise.
    pub fn measure_of_body(&self, body: &ConvexBody) -> Result<f64> {
        self.measure_of_body_with(body, DEFAULT_SUBSAMPLES)
    }

    pub fn measure_of_body_with(&self, body: &ConvexBody, subsamples: usize) -> Result<f64> {
        check_dim(self.dim, body.dim())?;
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| body.contains(&a.point))
            .map(|a| a.weight)
            .sum();
        let mut grids = 0.0;
        for g in &self.grids {
            grids += g.integrate_over(body, subsamples)?;
        }
        Ok(atoms + grids)
    }

    /// Cumulative function `μ((-∞, y])` of a 1-D measure at each `y`, or the
    /// left limit `μ((-∞, y))` when `closed` is false.
    pub fn cumulative(&self, ys: &[f64], closed: bool) -> Result<Vec<f64>> {
        check_dim(1, self.dim)?;
        let prefixes: Vec<Vec<f64>> = self
            .grids
            .iter()
            .map(|g| {
                let h = g.spacing;
                let mut acc = vec![0.0];
                for v in &g.values {
                    acc.push(acc.last().unwrap() + v * h);
                }
                acc
            })
            .collect();
        Ok(ys
            .iter()
            .map(|&y| {
                let atoms: f64 = self
                    .atoms
                    .iter()
                    .filter(|a| {
                        if closed {
                            a.point[0] <= y
                        } else {
                            a.point[0] < y
                        }
                    })
                    .map(|a| a.weight)
                    .sum();
                let grids: f64 = self
                    .grids
                    .iter()
                    .zip(&prefixes)
                    .map(|(g, pre)| {
                        let (o, h, n) = (g.origin[0], g.spacing, g.shape[0]);
                        let t = (y - o) / h;
                        if t <= 0.0 {
                            0.0
                        } else if t >= n as f64 {
                            pre[n]
                        } else {
                            let i = (t.floor() as usize).min(n - 1);
                            pre[i] + g.values[i] * (y - (o + i as f64 * h))
                        }
                    })
                    .sum();
                atoms + grids
            })
            .collect())
    }

    /// Sorted atoms with coincident points merged, and sorted grids. Two
    /// measures that differ only by term order canonicalize identically.
    pub fn canonicalize(&self) -> Measure {
        let mut atoms = self.atoms.clone();
        atoms.sort_by(|a, b| cmp_f64s(&a.point, &b.point).then(a.weight.total_cmp(&b.weight)));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.point == a.point => last.weight += a.weight,
                _ => merged.push(a),
            }
        }
        let mut grids = self.grids.clone();
        grids.sort_by(|a, b| a.order_key(b));
        Measure {
            dim: self.dim,
            atoms: merged,
            grids,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square(lo: f64, hi: f64) -> ConvexBody {
        ConvexBody::polygon(vec![[lo, lo], [hi, lo], [hi, hi], [lo, hi]]).unwrap()
    }

    #[test]
    fn total_mass_examples() {
        assert_eq!(
            Measure::dirac(vec![1.0, 2.0], 3.0).unwrap().total_mass(),
            3.0
        );
        let u = Measure::uniform(&[0.0, 0.0], &[1.0, 1.0], 1.0, 1e-2).unwrap();
        assert!((u.total_mass() - 1.0).abs() < 1e-12);
        assert_eq!(Measure::zero(2).total_mass(), 0.0);
    }

    #[test]
    fn dirac_convolution() {
        let a = Measure::dirac(vec![1.0, 2.0], 2.0).unwrap();
        let b = Measure::dirac(vec![-0.5, 1.0], 3.0).unwrap();
        let c = a.convolve(&b).unwrap();
        assert_eq!(c, Measure::dirac(vec![0.5, 3.0], 6.0).unwrap());
    }

    #[test]
    fn dirac_at_zero_is_identity() {
        let mut nu = Measure::uniform(&[0.0, 0.5], &[1.0, 1.0], 2.0, 0.25).unwrap();
        nu.atoms.push(Atom {
            point: vec![0.3, -0.2],
            weight: -1.5,
        });
        let delta = Measure::dirac(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(delta.convolve(&nu).unwrap(), nu);
        assert_eq!(nu.convolve(&delta).unwrap(), nu);
    }

    #[test]
    fn uniform_convolution_is_tent() {
        let h = 1e-3;
        let u = Measure::uniform(&[0.0], &[1.0], 1.0, h).unwrap();
        let t = u.convolve(&u).unwrap();
        let g = &t.grids()[0];
        // closed-form oracle: tent(x) = 1 - |x - 1| on [0, 2]
        let tent = |x: f64| (1.0 - (x - 1.0).abs()).max(0.0);
        let mut max_err: f64 = 0.0;
        for (i, v) in g.values().iter().enumerate() {
            let centre = g.origin()[0] + (i as f64 + 0.5) * h;
            max_err = max_err.max((v - tent(centre)).abs());
        }
        assert!(max_err < 1e-3, "{max_err}");
        let peak = g.values().iter().cloned().fold(f64::MIN, f64::max);
        assert!((peak - 1.0).abs() < 1e-3);
        assert_relative_eq!(t.total_mass(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn measure_of_body_examples() {
        let d = Measure::dirac(vec![0.5, 0.5], 0.7).unwrap();
        assert_eq!(d.measure_of_body(&square(0.0, 1.0)).unwrap(), 0.7);
        let u = Measure::uniform(&[0.0, 0.0], &[1.0, 1.0], 1.0, 1e-2).unwrap();
        assert!((u.measure_of_body(&square(0.0, 0.5)).unwrap() - 0.25).abs() < 1e-3);
        let disk =
            ConvexBody::Polygon(crate::convex::Polygon::regular(256, 0.5, [0.5, 0.5]).unwrap());
        let got = u.measure_of_body(&disk).unwrap();
        assert!((got - std::f64::consts::PI / 4.0).abs() < 2e-3, "{got}");
        // containing body recovers the total mass
        assert!((u.measure_of_body(&square(-1.0, 2.0)).unwrap() - u.total_mass()).abs() < 1e-9);
    }

    #[test]
    fn interval_integration_is_exact() {
        let u = Measure::uniform(&[0.0], &[1.0], 2.0, 0.1).unwrap();
        let k = ConvexBody::interval(0.25, 0.61).unwrap();
        assert_relative_eq!(u.measure_of_body(&k).unwrap(), 0.72, epsilon = 1e-12);
    }

    #[test]
    fn smooth_bump_examples() {
        let b = Measure::smooth_bump(&[0.0], 1.0, 2.5, 0.01).unwrap();
        assert_relative_eq!(b.total_mass(), 2.5, epsilon = 1e-9);
        let b2 = Measure::smooth_bump(&[0.3, -0.2], 0.5, 1.0, 0.05).unwrap();
        let g = &b2.grids()[0];
        let n = g.shape()[0];
        for i in 0..n {
            for j in 0..n {
                let v = g.at(&[i, j]);
                assert_eq!(v, g.at(&[n - 1 - i, n - 1 - j]));
                if v != 0.0 {
                    for (ci, cj) in [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)] {
                        let x = g.origin()[0] + ci as f64 * 0.05 - 0.3;
                        let y = g.origin()[1] + cj as f64 * 0.05 + 0.2;
                        assert!(x * x + y * y <= 0.25 + 1e-12);
                    }
                }
            }
        }
        assert!(Measure::smooth_bump(&[0.0], 0.1, 1.0, 0.2).is_err());
    }

    #[test]
    fn spacing_mismatch_is_rejected() {
        let a = Measure::uniform(&[0.0], &[1.0], 1.0, 0.1).unwrap();
        let b = Measure::uniform(&[0.0], &[1.0], 1.0, 0.05).unwrap();
        assert!(matches!(a.convolve(&b), Err(Error::IncompatibleGrid(_))));
    }

    #[test]
    fn direct_and_spectral_paths_agree() {
        let a = Measure::smooth_bump(&[0.0, 0.0], 0.3, 1.0, 0.02).unwrap();
        let b = Measure::uniform(&[0.1, 0.2], &[0.5, 0.4], -2.0, 0.02).unwrap();
        let d = a.convolve_with_path(&b, false).unwrap();
        let f = a.convolve_with_path(&b, true).unwrap();
        let (gd, gf) = (&d.grids()[0], &f.grids()[0]);
        assert_eq!(gd.shape(), gf.shape());
        let err = gd
            .values()
            .iter()
            .zip(gf.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn grid_convolution_commutes_bitwise() {
        let a = Measure::smooth_bump(&[0.0], 0.3, 1.0, 0.01).unwrap();
        let b = Measure::uniform(&[0.1], &[0.5], -2.0, 0.01).unwrap();
        assert_eq!(a.convolve(&b).unwrap(), b.convolve(&a).unwrap());
    }

    #[test]
    fn json_shape() {
        let mut m = Measure::uniform(&[0.0], &[0.5], 1.0, 0.25).unwrap();
        m.atoms.push(Atom {
            point: vec![2.0],
            weight: 0.5,
        });
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"dim":1,"atoms":[[[2.0],0.5]],"grid":{"origin":[0.0],"spacing":0.25,"shape":[2],"values":[1.0,1.0]}}"#
        );
        let back: Measure = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"dim":1,"grid":{"origin":[0.0],"spacing":-1,"shape":[1],"values":[1.0]}}"#;
        assert!(serde_json::from_str::<Measure>(bad).is_err());
    }
}
