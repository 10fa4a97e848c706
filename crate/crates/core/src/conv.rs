//! Full linear convolution of dense n-dimensional arrays.
//!
//! Arrays are row-major (last axis fastest). The output of convolving shapes
//! `a` and `b` has shape `a[k] + b[k] - 1` on every axis.

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Output cell count at or above which [`convolve`] switches to the FFT path.
pub const SPECTRAL_THRESHOLD: usize = 1 << 16;

pub fn output_shape(sa: &[usize], sb: &[usize]) -> Vec<usize> {
    sa.iter().zip(sb).map(|(a, b)| a + b - 1).collect()
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * shape[k + 1];
    }
    s
}

fn unravel(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for k in (0..shape.len()).rev() {
        out[k] = flat % shape[k];
        flat /= shape[k];
    }
}

/// Picks direct summation below [`SPECTRAL_THRESHOLD`] output cells and the
/// FFT path above.
pub fn convolve(a: &[f64], sa: &[usize], b: &[f64], sb: &[usize]) -> Vec<f64> {
    let cells: usize = output_shape(sa, sb).iter().product();
    if cells < SPECTRAL_THRESHOLD {
        convolve_direct(a, sa, b, sb)
    } else {
        convolve_fft(a, sa, b, sb)
    }
}

/// Direct summation. Each output cell sums its terms in row-major order of
/// the `a` index, so the parallel result is bit-identical to a serial loop.
pub fn convolve_direct(a: &[f64], sa: &[usize], b: &[f64], sb: &[usize]) -> Vec<f64> {
    let so = output_shape(sa, sb);
    let total: usize = so.iter().product();
    if sa.len() == 1 {
        let (na, nb) = (sa[0], sb[0]);
        return (0..total)
            .into_par_iter()
            .map(|m| {
                let lo = m.saturating_sub(nb - 1);
                let hi = m.min(na - 1);
                (lo..=hi).fold(0.0, |acc, i| acc + a[i] * b[m - i])
            })
            .collect();
    }
    let (st_a, st_b) = (strides(sa), strides(sb));
    let d = sa.len();
    (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut m = vec![0usize; d];
            unravel(flat, &so, &mut m);
            // admissible a-index range on each axis
            let lo: Vec<usize> = (0..d).map(|k| m[k].saturating_sub(sb[k] - 1)).collect();
            let hi: Vec<usize> = (0..d).map(|k| m[k].min(sa[k] - 1)).collect();
            let mut i = lo.clone();
            let mut acc = 0.0;
            loop {
                let ia: usize = (0..d).map(|k| i[k] * st_a[k]).sum();
                let ib: usize = (0..d).map(|k| (m[k] - i[k]) * st_b[k]).sum();
                acc += a[ia] * b[ib];
                // odometer over the box lo..=hi
                let mut k = d;
                loop {
                    if k == 0 {
                        return acc;
                    }
                    k -= 1;
                    if i[k] < hi[k] {
                        i[k] += 1;
                        break;
                    }
                    i[k] = lo[k];
                }
            }
        })
        .collect()
}

/// FFT-based convolution (separable transforms along each axis).
pub fn convolve_fft(a: &[f64], sa: &[usize], b: &[f64], sb: &[usize]) -> Vec<f64> {
    let so = output_shape(sa, sb);
    let total: usize = so.iter().product();
    let mut planner = FftPlanner::<f64>::new();

    let embed = |src: &[f64], shape: &[usize]| -> Vec<Complex<f64>> {
        let mut buf = vec![Complex::new(0.0, 0.0); total];
        let st_o = strides(&so);
        let mut idx = vec![0usize; shape.len()];
        for (flat, &v) in src.iter().enumerate() {
            unravel(flat, shape, &mut idx);
            let o: usize = idx.iter().zip(&st_o).map(|(i, s)| i * s).sum();
            buf[o] = Complex::new(v, 0.0);
        }
        buf
    };
    let mut fa = embed(a, sa);
    let mut fb = embed(b, sb);
    transform_all_axes(&mut planner, &mut fa, &so, false);
    transform_all_axes(&mut planner, &mut fb, &so, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    transform_all_axes(&mut planner, &mut fa, &so, true);
    let norm = 1.0 / total as f64;
    fa.into_iter().map(|c| c.re * norm).collect()
}

fn transform_all_axes(
    planner: &mut FftPlanner<f64>,
    data: &mut [Complex<f64>],
    shape: &[usize],
    inverse: bool,
) {
    let st = strides(shape);
    let total = data.len();
    for axis in 0..shape.len() {
        let len = shape[axis];
        if len == 1 {
            continue;
        }
        let fft = if inverse {
            planner.plan_fft_inverse(len)
        } else {
            planner.plan_fft_forward(len)
        };
        let stride = st[axis];
        let mut line = vec![Complex::new(0.0, 0.0); len];
        // every line start has index 0 along `axis`
        for start in 0..total {
            if (start / stride) % len != 0 {
                continue;
            }
            for (t, slot) in line.iter_mut().enumerate() {
                *slot = data[start + t * stride];
            }
            fft.process(&mut line);
            for (t, v) in line.iter().enumerate() {
                data[start + t * stride] = *v;
            }
        }
    }
}
