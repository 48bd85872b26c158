//! Tensor-product Chebyshev surrogates of smooth Hamiltonians, re-expanded in
//! the monomial basis so they feed the symbolic algebra.

use super::poly::FloatHamiltonian;
use super::xu::{XUPolynomial, XuMonomial};
use crate::contact::Hamiltonian;
use crate::error::{Error, Result};

/// Largest per-axis degree accepted for the monomial re-expansion.
pub const MAX_SURROGATE_DEGREE: usize = 30;

/// Uniform grid resolution used for the sampled sup-norm error.
pub const DEFAULT_ERROR_GRID: usize = 21;

#[derive(Clone, Debug)]
pub struct Surrogate {
    pub poly: FloatHamiltonian,
    /// Max `|H − poly|` over a uniform grid on the box.
    pub sampled_sup_error: f64,
}

/// Interpolates `h(·, t)` at Chebyshev–Gauss–Lobatto nodes on a box in
/// `(x₁..xₙ, u, p₁..pₙ)`.
///
/// `bounds` and `degrees` are indexed in that block order. A zero degree
/// uses the single midpoint node.
pub fn chebyshev_surrogate<H: Hamiltonian>(
    h: &H,
    bounds: &[(f64, f64)],
    degrees: &[usize],
    t: f64,
) -> Result<Surrogate> {
    let d = bounds.len();
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "box needs 2n+1 ≥ 3 intervals, got {d}"
        )));
    }
    if degrees.len() != d {
        return Err(Error::Dimension {
            expected: d,
            got: degrees.len(),
        });
    }
    for (axis, (&(a, b), &deg)) in bounds.iter().zip(degrees).enumerate() {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Precondition(format!(
                "axis {axis}: interval [{a}, {b}] must be finite and non-degenerate"
            )));
        }
        if deg > MAX_SURROGATE_DEGREE {
            return Err(Error::DegreeLimit {
                axis,
                degree: deg,
                limit: MAX_SURROGATE_DEGREE,
            });
        }
    }
    let n = (d - 1) / 2;
    let nodes: Vec<Vec<f64>> = bounds
        .iter()
        .zip(degrees)
        .map(|(&(a, b), &deg)| {
            lobatto_nodes(deg)
                .into_iter()
                .map(|s| 0.5 * (a + b) + 0.5 * (b - a) * s)
                .collect()
        })
        .collect();
    let shape: Vec<usize> = degrees.iter().map(|k| k + 1).collect();
    let total: usize = shape.iter().product();
    let mut values = Vec::with_capacity(total);
    let mut idx = vec![0usize; d];
    let mut point = vec![0.0; d];
    for _ in 0..total {
        for k in 0..d {
            point[k] = nodes[k][idx[k]];
        }
        let v = h.eval(&point[..n], &point[n], &point[n + 1..], t);
        if !v.is_finite() {
            return Err(Error::non_finite(format!("H at surrogate node {point:?}")));
        }
        values.push(v);
        increment(&mut idx, &shape);
    }
    let mut coeffs = values;
    for axis in 0..d {
        let (a, b) = bounds[axis];
        let m = monomial_matrix(degrees[axis], a, b);
        coeffs = apply_axis(&coeffs, &shape, axis, &m);
    }
    let mut poly = FloatHamiltonian::zero(n);
    let mut idx = vec![0usize; d];
    for c in coeffs {
        if c != 0.0 {
            let m = XuMonomial {
                x: idx[..n].iter().map(|&e| e as u32).collect(),
                u: idx[n] as u32,
            };
            let alpha = idx[n + 1..].iter().map(|&e| e as u32).collect();
            poly.add_term(alpha, XUPolynomial::monomial(n, m, c));
        }
        increment(&mut idx, &shape);
    }
    let sampled_sup_error = sampled_sup_error(h, &poly, bounds, DEFAULT_ERROR_GRID, t)?;
    Ok(Surrogate {
        poly,
        sampled_sup_error,
    })
}

/// Max `|h − g|` over `points` uniformly spaced samples per axis.
pub fn sampled_sup_error<H: Hamiltonian, G: Hamiltonian>(
    h: &H,
    g: &G,
    bounds: &[(f64, f64)],
    points: usize,
    t: f64,
) -> Result<f64> {
    let d = bounds.len();
    let n = (d - 1) / 2;
    let points = points.max(2);
    let shape = vec![points; d];
    let total: usize = shape.iter().product();
    let mut idx = vec![0usize; d];
    let mut z = vec![0.0; d];
    let mut worst: f64 = 0.0;
    for _ in 0..total {
        for k in 0..d {
            let (a, b) = bounds[k];
            z[k] = a + (b - a) * idx[k] as f64 / (points - 1) as f64;
        }
        let e =
            (h.eval(&z[..n], &z[n], &z[n + 1..], t) - g.eval(&z[..n], &z[n], &z[n + 1..], t)).abs();
        if !e.is_finite() {
            return Err(Error::non_finite(format!("surrogate error at {z:?}")));
        }
        worst = worst.max(e);
        increment(&mut idx, &shape);
    }
    Ok(worst)
}

fn lobatto_nodes(deg: usize) -> Vec<f64> {
    if deg == 0 {
        return vec![0.0];
    }
    (0..=deg)
        .map(|j| (std::f64::consts::PI * j as f64 / deg as f64).cos())
        .collect()
}

/// Maps node values on one axis to monomial coefficients in the original
/// variable: DCT-I to Chebyshev coefficients, then re-expansion.
fn monomial_matrix(deg: usize, a: f64, b: f64) -> Vec<Vec<f64>> {
    let k = deg + 1;
    let dct: Vec<Vec<f64>> = if deg == 0 {
        vec![vec![1.0]]
    } else {
        let nf = deg as f64;
        (0..k)
            .map(|m| {
                let end = if m == 0 || m == deg { 0.5 } else { 1.0 };
                (0..k)
                    .map(|j| {
                        let w = if j == 0 || j == deg { 0.5 } else { 1.0 };
                        end * 2.0 / nf * w * (std::f64::consts::PI * (m * j) as f64 / nf).cos()
                    })
                    .collect()
            })
            .collect()
    };
    // Chebyshev polynomials in s, then s = αv + β.
    let mut cheb: Vec<Vec<f64>> = vec![vec![1.0]];
    if k > 1 {
        cheb.push(vec![0.0, 1.0]);
    }
    for m in 2..k {
        let mut next = vec![0.0; m + 1];
        for (i, c) in cheb[m - 1].iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, c) in cheb[m - 2].iter().enumerate() {
            next[i] -= c;
        }
        cheb.push(next);
    }
    let alpha = 2.0 / (b - a);
    let beta = -(a + b) / (b - a);
    let binom = pascal(k);
    let mut expand = vec![vec![0.0; k]; k];
    for (m, tm) in cheb.iter().enumerate() {
        for (p, &c) in tm.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for i in 0..=p {
                expand[i][m] += c * binom[p][i] * alpha.powi(i as i32) * beta.powi((p - i) as i32);
            }
        }
    }
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (0..k).map(|m| expand[i][m] * dct[m][j]).sum())
                .collect()
        })
        .collect()
}

fn pascal(k: usize) -> Vec<Vec<f64>> {
    let mut b = vec![vec![0.0; k]; k];
    for p in 0..k {
        b[p][0] = 1.0;
        for i in 1..=p {
            b[p][i] = b[p - 1][i - 1] + if i < p { b[p - 1][i] } else { 0.0 };
        }
    }
    b
}

/// Applies `mat` along `axis` of a row-major tensor (last axis fastest).
fn apply_axis(data: &[f64], shape: &[usize], axis: usize, mat: &[Vec<f64>]) -> Vec<f64> {
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let len = shape[axis];
    let mut out = vec![0.0; data.len()];
    for o in 0..outer {
        for i in 0..inner {
            for r in 0..len {
                let mut acc = 0.0;
                for c in 0..len {
                    acc += mat[r][c] * data[(o * len + c) * inner + i];
                }
                out[(o * len + r) * inner + i] = acc;
            }
        }
    }
    out
}

/// Row-major odometer increment (last axis fastest).
fn increment(idx: &mut [usize], shape: &[usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < shape[k] {
            return;
        }
        idx[k] = 0;
    }
}
