//! Radial test functions for weak forms and stability quadratic forms.
//!
//! The workhorse is a smooth bump with compact support: a Gaussian-profile
//! mollifier `exp(1 - 1/(1-t²))` on |t| < 1, t = (r - center)/width, which is
//! C¹ (in fact C^∞) so the quadrature sees no derivative jumps at the support
//! boundary. Suite files are CSV rows `center,width`.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;

/// A radial test function: value and derivative at a radius.
pub trait RadialTestFn {
    fn eval(&self, r: f64) -> (f64, f64);

    fn value(&self, r: f64) -> f64 {
        self.eval(r).0
    }

    /// Samples aligned to a grid: (values, derivatives).
    fn sample(&self, grid: &RadialGrid) -> (Vec<f64>, Vec<f64>) {
        let mut v = Vec::with_capacity(grid.len());
        let mut d = Vec::with_capacity(grid.len());
        for &r in grid.nodes() {
            let (a, b) = self.eval(r);
            v.push(a);
            d.push(b);
        }
        (v, d)
    }
}

impl<F: Fn(f64) -> (f64, f64)> RadialTestFn for F {
    fn eval(&self, r: f64) -> (f64, f64) {
        self(r)
    }
}

/// Smooth compactly supported bump centered at `center` with half-width
/// `width`; peak value 1 at the center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
}

impl Bump {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !(center > 0.0 && width > 0.0) {
            return Err(Error::Domain(format!(
                "bump needs positive center and width, got center = {center:e}, width = {width:e}"
            )));
        }
        if center + width > 1.0 {
            return Err(Error::Domain(format!(
                "bump support ({:e}, {:e}) must stay inside (0, 1)",
                center - width,
                center + width
            )));
        }
        Ok(Self { center, width })
    }
}

impl RadialTestFn for Bump {
    fn eval(&self, r: f64) -> (f64, f64) {
        let t = (r - self.center) / self.width;
        if t.abs() >= 1.0 {
            return (0.0, 0.0);
        }
        let q = 1.0 - t * t;
        let v = (1.0 - 1.0 / q).exp();
        let dv = v * (-2.0 * t / (q * q)) / self.width;
        (v, dv)
    }
}

fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// The default 20-bump suite: centers log-spaced across the grid, widths a
/// fixed fraction of the center so inner bumps stay clear of r_min.
pub fn default_bump_suite(grid: &RadialGrid) -> Vec<Bump> {
    let lo = (grid.r_min() * 10.0).max(1e-5);
    log_spaced(lo, 0.5, 20)
        .into_iter()
        .map(|c| Bump::new(c, 0.6 * c).expect("suite bumps are valid"))
        .collect()
}

/// Fixed 8-bump suite used by the weak/integral equivalence checks.
pub fn equivalence_suite(grid: &RadialGrid) -> Vec<Bump> {
    let lo = (grid.r_min() * 10.0).max(1e-4);
    log_spaced(lo, 0.4, 8)
        .into_iter()
        .map(|c| Bump::new(c, 0.5 * c).expect("suite bumps are valid"))
        .collect()
}

/// Seeded random bump suite: centers log-uniform in [lo, hi], widths uniform
/// in [0.3, 0.8] of the center.
pub fn random_bump_suite(seed: u64, count: usize, lo: f64, hi: f64) -> Vec<Bump> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let c = (rng.gen_range(lo.ln()..hi.ln())).exp();
            let w = c * rng.gen_range(0.3..0.8);
            Bump::new(c, w).expect("random suite bumps are valid")
        })
        .collect()
}

/// Load a bump suite from CSV rows `center,width` (optional header).
pub fn load_bump_suite(path: &Path) -> Result<Vec<Bump>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line == "center,width" {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 2 {
            return Err(Error::Parse(format!(
                "{}: line {}: expected 'center,width', got '{line}'",
                path.display(),
                idx + 1
            )));
        }
        let parse = |v: &str| -> Result<f64> {
            v.trim().parse::<f64>().map_err(|_| {
                Error::Parse(format!(
                    "{}: line {}: invalid number '{v}'",
                    path.display(),
                    idx + 1
                ))
            })
        };
        out.push(Bump::new(parse(cols[0])?, parse(cols[1])?)?);
    }
    if out.is_empty() {
        return Err(Error::Parse(format!(
            "{}: no bumps found",
            path.display()
        )));
    }
    Ok(out)
}
