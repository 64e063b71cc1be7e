//! Small dense helpers on `f64` slices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `a += s * b`
pub fn axpy(a: &mut [f64], s: f64, b: &[f64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += s * y;
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

pub fn check_unit(p: &[f64], tol: f64) -> Result<()> {
    let dev = norm(p) - 1.0;
    if dev.abs() > tol || !dev.is_finite() {
        return Err(Error::OffSphere { deviation: dev });
    }
    Ok(())
}

/// Orthonormal completion: Gram-Schmidt of the coordinate axes against `span(against)`.
///
/// `against` must be orthonormal. Axes are visited in index order, so the
/// result is deterministic.
pub fn orthonormal_complement(against: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = against.to_vec();
    let mut out = Vec::new();
    for i in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        // two passes for stability
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&e, b);
                axpy(&mut e, -c, b);
            }
        }
        let n = norm(&e);
        if n > 1e-6 {
            let e = scale(&e, 1.0 / n);
            basis.push(e.clone());
            out.push(e);
        }
    }
    out
}

/// Evenly spaced samples on `[t0, t1]`, endpoints included.
pub fn linspace(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t0],
        _ => (0..n).map(|k| t0 + (t1 - t0) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Fourth-order central difference of a vector-valued function.
pub fn central_diff4<F: Fn(f64) -> Vec<f64>>(f: &F, t: f64, h: f64) -> Vec<f64> {
    let a = f(t - 2.0 * h);
    let b = f(t - h);
    let c = f(t + h);
    let d = f(t + 2.0 * h);
    (0..a.len())
        .map(|i| (a[i] - 8.0 * b[i] + 8.0 * c[i] - d[i]) / (12.0 * h))
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `exp(A)` by Padé-13 scaling and squaring.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    const THETA13: f64 = 5.371920351148152;
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let n = a.nrows();
    let norm1 = a.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let s = if norm1 > THETA13 { (norm1 / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a / 2f64.powi(s);
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * B[13] + &a4 * B[11] + &a2 * B[9]) + &a6 * B[7] + &a4 * B[5] + &a2 * B[3] + &id * B[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * B[12] + &a4 * B[10] + &a2 * B[8]) + &a6 * B[6] + &a4 * B[4] + &a2 * B[2] + &id * B[0];
    let mut r = (&v - &u).lu().solve(&(&v + &u)).expect("Padé denominator is invertible");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Composite Simpson rule on a uniform grid; the last three intervals use
/// the 3/8 rule when the interval count is odd.
pub fn simpson(y: &[f64], h: f64) -> f64 {
    let n = y.len().saturating_sub(1);
    match n {
        0 => 0.0,
        1 => 0.5 * h * (y[0] + y[1]),
        2 => h / 3.0 * (y[0] + 4.0 * y[1] + y[2]),
        3 => 3.0 * h / 8.0 * (y[0] + 3.0 * y[1] + 3.0 * y[2] + y[3]),
        _ if n.is_multiple_of(2) => {
            let mut acc = y[0] + y[n];
            for (i, v) in y.iter().enumerate().take(n).skip(1) {
                acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            acc * h / 3.0
        }
        _ => simpson(&y[..n - 2], h) + simpson(&y[n - 3..], h),
    }
}

/// Fourth-order derivative of samples on a uniform grid (one-sided stencils at the ends).
pub fn grid_derivative(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    assert!(n >= 5, "need at least five samples");
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h)
            } else if i < 2 {
                let w: [f64; 5] = if i == 0 {
                    [-25.0, 48.0, -36.0, 16.0, -3.0]
                } else {
                    [-3.0, -10.0, 18.0, -6.0, 1.0]
                };
                (0..5).map(|k| w[k] * y[k]).sum::<f64>() / (12.0 * h)
            } else {
                let w: [f64; 5] = if i == n - 1 {
                    [3.0, -16.0, 36.0, -48.0, 25.0]
                } else {
                    [-1.0, 6.0, -18.0, 10.0, 3.0]
                };
                (0..5).map(|k| w[k] * y[n - 5 + k]).sum::<f64>() / (12.0 * h)
            }
        })
        .collect()
}

/// Five-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre5<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    const X: [f64; 5] = [0.0, -0.5384693101056831, 0.5384693101056831, -0.906179845938664, 0.906179845938664];
    const W: [f64; 5] = [
        0.5688888888888889,
        0.4786286704993665,
        0.4786286704993665,
        0.2369268850561891,
        0.2369268850561891,
    ];
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    r * X.iter().zip(&W).map(|(x, w)| w * f(m + r * x)).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_orthonormal() {
        let p = vec![0.5, 0.5, 0.5, 0.5];
        let c = orthonormal_complement(std::slice::from_ref(&p), 4);
        assert_eq!(c.len(), 3);
        for (i, a) in c.iter().enumerate() {
            assert!(dot(a, &p).abs() < 1e-14);
            for (j, b) in c.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot(a, b) - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn diff4_on_sine() {
        let f = |t: f64| vec![t.sin()];
        let d = central_diff4(&f, 0.3, 1e-3);
        assert!((d[0] - 0.3f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(4)).collect();
        assert!((loglog_slope(&xs, &ys) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn expm_rotation_and_series() {
        let th = 7.3;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -th, th, 0.0]);
        let e = expm(&a);
        let want = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
        assert!((e - want).norm() < 1e-12);
        let b = DMatrix::from_row_slice(3, 3, &[0.1, 0.02, -0.03, 0.0, -0.2, 0.05, 0.04, 0.01, 0.3]);
        let mut series = DMatrix::identity(3, 3);
        let mut term = DMatrix::identity(3, 3);
        for k in 1..30 {
            term = &term * &b / k as f64;
            series += &term;
        }
        assert!((expm(&b) - series).norm() < 1e-14);
        assert_eq!(expm(&DMatrix::zeros(4, 4)), DMatrix::identity(4, 4));
    }

    #[test]
    fn quadrature_rules() {
        for n in [4usize, 5, 6, 7, 100, 101] {
            let h = std::f64::consts::PI / n as f64;
            let y: Vec<f64> = (0..=n).map(|k| (k as f64 * h).sin()).collect();
            assert!((simpson(&y, h) - 2.0).abs() < 0.05 * h.powi(4), "n = {n}");
        }
        assert!((gauss_legendre5(|x| x.powi(9), 0.0, 1.0) - 0.1).abs() < 1e-15);
        let h = 0.01;
        let y: Vec<f64> = (0..50).map(|k| (k as f64 * h).exp()).collect();
        let d = grid_derivative(&y, h);
        for (a, b) in d.iter().zip(&y) {
            assert!((a - b).abs() < 1e-8);
        }
    }
}
