//! Gauss–Legendre rules on intervals and triangles.

use crate::convex::Point2;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`, from Newton's
/// method on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `∫_a^b f` with the `n`-point rule.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    x.iter()
        .zip(&w)
        .map(|(xi, wi)| wi * f(mid + half * xi))
        .sum::<f64>()
        * half
}

/// `∫_T f` over the triangle `(p0, p1, p2)` using the collapsed square map
/// `(u, v) ↦ p0 + u(p1 - p0) + uv(p2 - p1)` with `n × n` nodes.
pub fn integrate_triangle(
    f: impl Fn(Point2) -> f64,
    p0: Point2,
    p1: Point2,
    p2: Point2,
    n: usize,
) -> f64 {
    let (x, w) = gauss_legendre(n);
    let e1 = [p1[0] - p0[0], p1[1] - p0[1]];
    let e2 = [p2[0] - p1[0], p2[1] - p1[1]];
    let jac = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
    let mut total = 0.0;
    for (xu, wu) in x.iter().zip(&w) {
        let u = 0.5 * (xu + 1.0);
        let mut inner = 0.0;
        for (xv, wv) in x.iter().zip(&w) {
            let v = 0.5 * (xv + 1.0);
            let p = [
                p0[0] + u * e1[0] + u * v * e2[0],
                p0[1] + u * e1[1] + u * v * e2[1],
            ];
            inner += wv * f(p);
        }
        total += wu * u * inner;
    }
    total * jac * 0.25
}
