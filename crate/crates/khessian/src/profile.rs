//! Sampled radial profiles and their CSV form.
//!
//! CSV header is `r,u,du` or `r,u,du,d2u`; radii strictly increasing, plain
//! decimal text.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;

/// A radial profile sampled on a grid: u, u' and optionally u''.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    grid: RadialGrid,
    u: Vec<f64>,
    du: Vec<f64>,
    d2u: Option<Vec<f64>>,
}

impl RadialProfile {
    pub fn new(grid: RadialGrid, u: Vec<f64>, du: Vec<f64>) -> Result<Self> {
        if u.len() != grid.len() || du.len() != grid.len() {
            return Err(Error::Domain(format!(
                "profile arrays must match grid size {}, got u: {}, du: {}",
                grid.len(),
                u.len(),
                du.len()
            )));
        }
        for (i, (&a, &b)) in u.iter().zip(&du).enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::NonFiniteSample {
                    index: i,
                    radius: grid.nodes()[i],
                    value: if a.is_finite() { b } else { a },
                });
            }
        }
        Ok(Self {
            grid,
            u,
            du,
            d2u: None,
        })
    }

    pub fn with_d2u(mut self, d2u: Vec<f64>) -> Result<Self> {
        if d2u.len() != self.grid.len() {
            return Err(Error::Domain(format!(
                "d2u length {} does not match grid size {}",
                d2u.len(),
                self.grid.len()
            )));
        }
        self.d2u = Some(d2u);
        Ok(self)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn du(&self) -> &[f64] {
        &self.du
    }

    pub fn d2u(&self) -> Option<&[f64]> {
        self.d2u.as_deref()
    }

    /// True when u' >= 0 at every node (admissible radially increasing profile).
    pub fn is_monotone(&self) -> bool {
        self.du.iter().all(|&v| v >= 0.0)
    }

    /// Boundary value u(1).
    pub fn boundary_value(&self) -> f64 {
        *self.u.last().unwrap()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        match &self.d2u {
            Some(d2u) => {
                out.push_str("r,u,du,d2u\n");
                for i in 0..self.grid.len() {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        self.grid.nodes()[i],
                        self.u[i],
                        self.du[i],
                        d2u[i]
                    ));
                }
            }
            None => {
                out.push_str("r,u,du\n");
                for i in 0..self.grid.len() {
                    out.push_str(&format!(
                        "{},{},{}\n",
                        self.grid.nodes()[i],
                        self.u[i],
                        self.du[i]
                    ));
                }
            }
        }
        crate::cli::write_atomic(path, out.as_bytes())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("{}: empty profile", path.display())))?;
        let has_d2u = match header.trim() {
            "r,u,du" => false,
            "r,u,du,d2u" => true,
            other => {
                return Err(Error::Parse(format!(
                    "{}: line 1: expected header 'r,u,du' or 'r,u,du,d2u', got '{other}'",
                    path.display()
                )))
            }
        };
        let want = if has_d2u { 4 } else { 3 };
        let mut r = Vec::new();
        let mut u = Vec::new();
        let mut du = Vec::new();
        let mut d2u = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != want {
                return Err(Error::Parse(format!(
                    "{}: line {}: expected {want} columns, got {}",
                    path.display(),
                    idx + 1,
                    cols.len()
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
            r.push(parse(cols[0])?);
            u.push(parse(cols[1])?);
            du.push(parse(cols[2])?);
            if has_d2u {
                d2u.push(parse(cols[3])?);
            }
        }
        let grid = RadialGrid::from_nodes(r)?;
        let profile = RadialProfile::new(grid, u, du)?;
        if has_d2u {
            profile.with_d2u(d2u)
        } else {
            Ok(profile)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_profile(m: usize) -> RadialProfile {
        let grid = RadialGrid::uniform(0.25, m).unwrap();
        let u: Vec<f64> = grid.nodes().iter().map(|r| (r * r - 1.0) / 2.0).collect();
        let du: Vec<f64> = grid.nodes().to_vec();
        RadialProfile::new(grid, u, du).unwrap()
    }

    #[test]
    fn csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("profile.csv");
        let p = sample_profile(32);
        p.write_csv(&path).unwrap();
        let q = RadialProfile::read_csv(&path).unwrap();
        assert_eq!(p.grid().nodes(), q.grid().nodes());
        assert_eq!(p.u(), q.u());
        assert_eq!(p.du(), q.du());
        assert!(q.d2u().is_none());
    }

    #[test]
    fn csv_rejects_malformed_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "r,u,du\n0.5,0,0\n0.75,zero,0\n1,0,0\n").unwrap();
        let err = RadialProfile::read_csv(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn csv_rejects_wrong_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "radius,u,du\n").unwrap();
        assert!(RadialProfile::read_csv(&path).is_err());
    }

    proptest! {
        #[test]
        fn csv_roundtrip_bitexact(seed in 0u64..1000) {
            // shortest round-trip decimal text preserves f64 exactly
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64
            };
            let grid = RadialGrid::uniform(0.1 + 0.4 * next(), 24).unwrap();
            let u: Vec<f64> = (0..24).map(|_| next() * 2.0 - 1.0).collect();
            let du: Vec<f64> = (0..24).map(|_| next()).collect();
            let p = RadialProfile::new(grid, u, du).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("p.csv");
            p.write_csv(&path).unwrap();
            let q = RadialProfile::read_csv(&path).unwrap();
            prop_assert_eq!(p.u(), q.u());
            prop_assert_eq!(p.du(), q.du());
            prop_assert_eq!(p.grid().nodes(), q.grid().nodes());
        }
    }
}
