//! Shared numerical kernels: trapezoidal quadrature on nonuniform grids, a
//! Sturm-bisection generalized eigensolver for symmetric tridiagonal pencils,
//! and bracketed root finding.
//!
//! The eigensolver is deliberately dependency-free. The pencils assembled from
//! stability forms are heavily graded (entries spanning many tens of orders of
//! magnitude across a log-refined grid); bisection on Sturm counts only needs
//! pivot signs and stays reliable where dense reductions lose the bottom
//! eigenvalue in roundoff.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;

/// Composite trapezoidal rule for per-node samples on `grid`.
///
/// Exact for piecewise-linear integrands on the grid; linear and monotone in
/// the sample vector.
pub fn integrate(samples: &[f64], grid: &RadialGrid) -> Result<f64> {
    check_samples(samples, grid)?;
    let r = grid.nodes();
    let mut acc = 0.0;
    for i in 0..r.len() - 1 {
        acc += 0.5 * (samples[i] + samples[i + 1]) * (r[i + 1] - r[i]);
    }
    Ok(acc)
}

/// Cumulative trapezoidal integral from the first node: out[i] holds
/// `initial + integral over [r_min, r_i]`.
pub fn cumulative_integral(samples: &[f64], grid: &RadialGrid, initial: f64) -> Result<Vec<f64>> {
    check_samples(samples, grid)?;
    let r = grid.nodes();
    let mut out = Vec::with_capacity(r.len());
    let mut acc = initial;
    out.push(acc);
    for i in 0..r.len() - 1 {
        acc += 0.5 * (samples[i] + samples[i + 1]) * (r[i + 1] - r[i]);
        out.push(acc);
    }
    Ok(out)
}

/// Cumulative trapezoidal integral toward the right endpoint: out[i] holds
/// `integral over [r_i, 1]`.
pub fn cumulative_from_right(samples: &[f64], grid: &RadialGrid) -> Result<Vec<f64>> {
    check_samples(samples, grid)?;
    let r = grid.nodes();
    let m = r.len();
    let mut out = vec![0.0; m];
    for i in (0..m - 1).rev() {
        out[i] = out[i + 1] + 0.5 * (samples[i] + samples[i + 1]) * (r[i + 1] - r[i]);
    }
    Ok(out)
}

fn check_samples(samples: &[f64], grid: &RadialGrid) -> Result<()> {
    if samples.len() != grid.len() {
        return Err(Error::Domain(format!(
            "sample count {} does not match grid size {}",
            samples.len(),
            grid.len()
        )));
    }
    for (i, (&v, &r)) in samples.iter().zip(grid.nodes()).enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteSample {
                index: i,
                radius: r,
                value: v,
            });
        }
    }
    Ok(())
}

/// Symmetric tridiagonal stiffness matrix A paired with a positive diagonal
/// mass matrix B.
#[derive(Debug, Clone)]
pub struct TridiagonalPair {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub mass: Vec<f64>,
}

impl TridiagonalPair {
    pub fn new(diag: Vec<f64>, off: Vec<f64>, mass: Vec<f64>) -> Result<Self> {
        let m = diag.len();
        if m == 0 || off.len() + 1 != m || mass.len() != m {
            return Err(Error::Domain(format!(
                "inconsistent pencil sizes: diag {}, off {}, mass {}",
                m,
                off.len(),
                mass.len()
            )));
        }
        for (i, &b) in mass.iter().enumerate() {
            if !(b > 0.0) || !b.is_finite() {
                return Err(Error::Domain(format!(
                    "mass matrix must be positive and finite, entry {i} = {b:e}"
                )));
            }
        }
        if diag.iter().chain(off.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite pencil entry".into()));
        }
        Ok(Self { diag, off, mass })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// Standard-form entries C = B^{-1/2} A B^{-1/2} (still tridiagonal).
    fn standard_form(&self) -> (Vec<f64>, Vec<f64>) {
        let m = self.size();
        let sb: Vec<f64> = self.mass.iter().map(|&b| b.sqrt()).collect();
        let d: Vec<f64> = (0..m).map(|i| self.diag[i] / self.mass[i]).collect();
        let e: Vec<f64> = (0..m - 1)
            .map(|i| self.off[i] / (sb[i] * sb[i + 1]))
            .collect();
        (d, e)
    }
}

/// Number of eigenvalues of tridiag(d, e) strictly below `lambda`, via the
/// Sturm sequence (signs of LDL^T pivots).
fn sturm_count(d: &[f64], e: &[f64], lambda: f64) -> usize {
    let tiny = f64::MIN_POSITIVE;
    let mut count = 0usize;
    let mut q = d[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let qs = if q.abs() < tiny {
            if q >= 0.0 {
                tiny
            } else {
                -tiny
            }
        } else {
            q
        };
        q = (d[i] - lambda) - e[i - 1] * e[i - 1] / qs;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Tridiagonal solve of (T - shift I) x = rhs with partial pivoting.
/// Returns None if a pivot degenerates (shift is an eigenvalue to roundoff).
fn solve_shifted(d: &[f64], e: &[f64], shift: f64, rhs: &[f64]) -> Option<Vec<f64>> {
    let n = d.len();
    // Band storage after elimination: main a, first super b, second super c2
    // (fill-in created by row swaps).
    let mut a: Vec<f64> = d.iter().map(|&v| v - shift).collect();
    let mut b = vec![0.0; n];
    let mut c2 = vec![0.0; n];
    for i in 0..n - 1 {
        b[i] = e[i];
    }
    let mut x: Vec<f64> = rhs.to_vec();
    for i in 0..n - 1 {
        // row i: (a[i], b[i], c2[i]) at columns (i, i+1, i+2)
        // row i+1: (sub, a[i+1], b[i+1]) at the same columns, sub = e[i]
        let mut sub = e[i];
        if sub.abs() > a[i].abs() {
            let (pi0, pi1, pi2) = (a[i], b[i], c2[i]);
            a[i] = sub;
            b[i] = a[i + 1];
            c2[i] = b[i + 1];
            sub = pi0;
            a[i + 1] = pi1;
            b[i + 1] = pi2;
            x.swap(i, i + 1);
        }
        if a[i] == 0.0 {
            return None;
        }
        let factor = sub / a[i];
        a[i + 1] -= factor * b[i];
        b[i + 1] -= factor * c2[i];
        x[i + 1] -= factor * x[i];
    }
    if a[n - 1] == 0.0 {
        return None;
    }
    let mut out = vec![0.0; n];
    out[n - 1] = x[n - 1] / a[n - 1];
    if n >= 2 {
        out[n - 2] = (x[n - 2] - b[n - 2] * out[n - 1]) / a[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        out[i] = (x[i] - b[i] * out[i + 1] - c2[i] * out[i + 2]) / a[i];
    }
    Some(out)
}

/// Smallest eigenvalue and B-normalized eigenvector of the pencil A v = λ B v.
///
/// Bisection with Sturm counts on the standard form brackets λ_min, then
/// inverse iteration recovers the eigenvector. The residual satisfies
/// ‖A v − λ B v‖₂ ≤ tol · (‖A‖∞ + |λ| ‖B‖∞), or the call fails with the best
/// iterate.
pub fn min_generalized_eig(pair: &TridiagonalPair, tol: f64) -> Result<(f64, Vec<f64>)> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol:e}")));
    }
    let m = pair.size();
    let (d, e) = pair.standard_form();

    if m == 1 {
        let lam = d[0];
        let v = vec![1.0 / pair.mass[0].sqrt()];
        return Ok((lam, v));
    }

    // Gershgorin bracket on the standard form.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let radius = if i > 0 { e[i - 1].abs() } else { 0.0 }
            + if i + 1 < m { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - radius);
        hi = hi.max(d[i] + radius);
    }
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let (mut lo, mut hi) = (lo - 1e-12 * span, hi + 1e-12 * span);
    // bisect down to roundoff-limited width
    for _ in 0..240 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(&d, &e, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * (hi.abs().max(lo.abs()).max(1e-300)) {
            break;
        }
    }
    let mut lambda = 0.5 * (lo + hi);

    // Inverse iteration with the lower bracket end as shift (strictly below
    // λ_min by construction, so the shifted matrix is nonsingular).
    let norm_a =
        matrix_inf_norm(&pair.diag, &pair.off);
    let norm_b = pair.mass.iter().fold(0.0f64, |acc, &b| acc.max(b.abs()));
    let mut v: Vec<f64> = (0..m)
        .map(|i| 1.0 + 0.5 * ((i * 2654435761) % 97) as f64 / 97.0)
        .collect();
    normalize(&mut v);
    let mut best_res = f64::INFINITY;
    let mut best_lambda = lambda;
    let mut best_v = v.clone();
    let mut shift = lo;
    for iter in 0..60 {
        match solve_shifted(&d, &e, shift, &v) {
            Some(mut w) => {
                normalize(&mut w);
                v = w;
            }
            None => {
                // shift hit an eigenvalue to roundoff; nudge it down
                shift -= (hi - lo).abs().max(f64::EPSILON * lambda.abs()).max(1e-300);
                continue;
            }
        }
        // Rayleigh quotient in standard form
        let mut num = 0.0;
        for i in 0..m {
            num += d[i] * v[i] * v[i];
            if i + 1 < m {
                num += 2.0 * e[i] * v[i] * v[i + 1];
            }
        }
        lambda = num;
        // residual in the original pencil: x = B^{-1/2} v, check ‖Ax − λBx‖₂
        let x: Vec<f64> = (0..m).map(|i| v[i] / pair.mass[i].sqrt()).collect();
        let res = pencil_residual(pair, lambda, &x);
        if res < best_res {
            best_res = res;
            best_lambda = lambda;
            best_v = x.clone();
        }
        if res <= tol * (norm_a + lambda.abs() * norm_b) {
            return Ok((lambda, x));
        }
        if iter > 4 {
            // refresh the shift with the current estimate, staying below it
            shift = lambda - best_res.max(f64::EPSILON * lambda.abs());
        }
    }
    if best_res <= tol * (norm_a + best_lambda.abs() * norm_b) {
        return Ok((best_lambda, best_v));
    }
    Err(Error::NoConvergence {
        message: format!(
            "eigen residual {best_res:e} above tolerance after iteration cap"
        ),
        best: best_lambda,
    })
}

fn matrix_inf_norm(diag: &[f64], off: &[f64]) -> f64 {
    let m = diag.len();
    (0..m)
        .map(|i| {
            diag[i].abs()
                + if i > 0 { off[i - 1].abs() } else { 0.0 }
                + if i + 1 < m { off[i].abs() } else { 0.0 }
        })
        .fold(0.0f64, f64::max)
}

fn pencil_residual(pair: &TridiagonalPair, lambda: f64, x: &[f64]) -> f64 {
    let m = pair.size();
    let mut acc = 0.0;
    for i in 0..m {
        let mut ax = pair.diag[i] * x[i];
        if i > 0 {
            ax += pair.off[i - 1] * x[i - 1];
        }
        if i + 1 < m {
            ax += pair.off[i] * x[i + 1];
        }
        let r = ax - lambda * pair.mass[i] * x[i];
        acc += r * r;
    }
    acc.sqrt()
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

/// Bisection on a bracketed root: returns x with |f(x)| <= tol or bracket
/// width <= tol. Requires f(lo) * f(hi) <= 0.
pub fn find_root_bracketed(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol:e}")));
    }
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo * fhi > 0.0 {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo:e}, {hi:e}]: f(lo)={flo:e}, f(hi)={fhi:e}"
        )));
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..400 {
        mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= tol || (hi - lo) <= tol {
            return Ok(mid);
        }
        if fm * flo <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Ok(mid)
}
