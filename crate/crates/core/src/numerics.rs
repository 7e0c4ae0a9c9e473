//! Small numerical building blocks shared by the analytic modules.

use std::f64::consts::PI;

/// Surface area of the unit sphere S^{n-1} in R^n (n = 1 gives the two points of S^0).
pub fn sphere_area(n: usize) -> f64 {
    assert!(n >= 1);
    // omega_{n-1} = 2 pi^{n/2} / Gamma(n/2), Gamma at half-integers by recursion.
    let half = n as f64 / 2.0;
    2.0 * PI.powf(half) / gamma_half_integer(n)
}

/// Gamma(n/2) for a positive integer n.
fn gamma_half_integer(n: usize) -> f64 {
    let (mut g, mut x) = if n % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = n as f64 / 2.0;
    while x < target - 1e-12 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Composite Simpson weights for `n` equal intervals of width `h` (trapezoid on a trailing odd interval).
pub fn simpson_weights(n_intervals: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n_intervals + 1];
    if n_intervals == 0 {
        return w;
    }
    let even = n_intervals - n_intervals % 2;
    for i in (0..even).step_by(2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if even < n_intervals {
        w[even] += h / 2.0;
        w[even + 1] += h / 2.0;
    }
    w
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Outcome of a golden-section maximization.
#[derive(Debug, Clone, Copy)]
pub struct GoldenMax {
    pub x: f64,
    pub f: f64,
    /// True when the final point is within two final bracket widths of an endpoint.
    pub at_endpoint: bool,
}

/// Golden-section maximization of a unimodal `f` on `[lo, hi]` until the bracket is
/// narrower than `rel_tol * |x|` or `max_iter` is exhausted.
pub fn golden_max<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    max_iter: usize,
) -> GoldenMax {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a) <= rel_tol * 0.5 * (a.abs() + b.abs()) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let (x, fx) = if fc >= fd { (c, fc) } else { (d, fd) };
    let width = (b - a).max(rel_tol * x.abs());
    let at_endpoint = (x - lo) <= 2.0 * width || (hi - x) <= 2.0 * width;
    GoldenMax { x, f: fx, at_endpoint }
}

/// Smallest integer >= n whose prime factors are all in {2, 3, 5}.
pub fn smooth_ceil(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn simpson_integrates_cubics_exactly() {
        let n = 10;
        let h = 0.3;
        let w = simpson_weights(n, h);
        let s: f64 = w.iter().enumerate().map(|(i, wi)| wi * (i as f64 * h).powi(3)).sum();
        assert!((s - 3f64.powi(4) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_degree() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn golden_finds_parabola_vertex() {
        let m = golden_max(|x| -(x - 1.3).powi(2), 0.0, 4.0, 1e-10, 200);
        assert!((m.x - 1.3).abs() < 1e-6);
        assert!(!m.at_endpoint);
        let e = golden_max(|x| x, 0.0, 4.0, 1e-10, 200);
        assert!(e.at_endpoint);
    }

    #[test]
    fn smooth_numbers() {
        assert_eq!(smooth_ceil(7), 8);
        assert_eq!(smooth_ceil(121), 125);
        assert_eq!(smooth_ceil(61), 64);
    }
}
