//! Nonlinearities g(u) on the right-hand side of the equation.
//!
//! Builtin families (constant, exponential, power) plus tabulated data with
//! linear interpolation. Spec strings: `const:<c>`, `exp:<lambda>`,
//! `power:<lambda>:<p>`, `table:<path>`.

use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};

use crate::error::{Error, Result};

/// Evaluator for g and g'.
#[derive(Debug)]
pub enum Nonlinearity {
    /// g(u) = c
    Constant { c: f64 },
    /// g(u) = lambda e^u
    Exponential { lambda: f64 },
    /// g(u) = lambda (-u)^p, clamped to 0 for u >= 0
    Power { lambda: f64, p: f64 },
    /// linear interpolation of monotone node data, constant extrapolation
    Tabulated(TabulatedG),
}

/// Sampled nonlinearity on an increasing abscissa.
#[derive(Debug)]
pub struct TabulatedG {
    s: Vec<f64>,
    g: Vec<f64>,
    gprime: Vec<f64>,
    warned: AtomicBool,
}

impl TabulatedG {
    pub fn new(s: Vec<f64>, g: Vec<f64>, gprime: Vec<f64>) -> Result<Self> {
        if s.len() < 2 || g.len() != s.len() || gprime.len() != s.len() {
            return Err(Error::Domain(
                "tabulated nonlinearity needs at least two rows of equal length".into(),
            ));
        }
        for w in s.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Domain(format!(
                    "table abscissa must be strictly increasing, found {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if s.iter().chain(&g).chain(&gprime).any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite table entry".into()));
        }
        Ok(Self {
            s,
            g,
            gprime,
            warned: AtomicBool::new(false),
        })
    }

    pub fn abscissa(&self) -> &[f64] {
        &self.s
    }

    pub fn values(&self) -> &[f64] {
        &self.g
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.gprime
    }

    fn interp(&self, table: &[f64], u: f64) -> f64 {
        let s = &self.s;
        let m = s.len();
        if u <= s[0] || u >= s[m - 1] {
            if (u < s[0] || u > s[m - 1]) && !self.warned.swap(true, Ordering::Relaxed) {
                log::warn!(
                    "tabulated nonlinearity evaluated outside [{:e}, {:e}] at u = {u:e}; using constant extrapolation",
                    s[0],
                    s[m - 1]
                );
            }
            return if u <= s[0] {
                table[0]
            } else {
                table[m - 1]
            };
        }
        let hi = s.partition_point(|&v| v < u).max(1);
        let (s0, s1) = (s[hi - 1], s[hi]);
        let t = (u - s0) / (s1 - s0);
        table[hi - 1] + t * (table[hi] - table[hi - 1])
    }
}

impl Nonlinearity {
    /// g evaluated at u. Total on the builtin families (power is clamped to 0
    /// for u >= 0); tabulated data extrapolates as a constant.
    pub fn eval_g(&self, u: f64) -> f64 {
        match self {
            Nonlinearity::Constant { c } => *c,
            Nonlinearity::Exponential { lambda } => lambda * u.exp(),
            Nonlinearity::Power { lambda, p } => {
                if u >= 0.0 {
                    0.0
                } else {
                    lambda * (-u).powf(*p)
                }
            }
            Nonlinearity::Tabulated(t) => t.interp(&t.g, u),
        }
    }

    /// g' evaluated at u.
    pub fn eval_gprime(&self, u: f64) -> f64 {
        match self {
            Nonlinearity::Constant { .. } => 0.0,
            Nonlinearity::Exponential { lambda } => lambda * u.exp(),
            Nonlinearity::Power { lambda, p } => {
                if u >= 0.0 {
                    0.0
                } else {
                    -lambda * p * (-u).powf(p - 1.0)
                }
            }
            Nonlinearity::Tabulated(t) => t.interp(&t.gprime, u),
        }
    }

    /// Parse a nonlinearity spec string.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            ["const", c] => Ok(Nonlinearity::Constant {
                c: parse_num(c, spec)?,
            }),
            ["exp", lam] => Ok(Nonlinearity::Exponential {
                lambda: parse_num(lam, spec)?,
            }),
            ["power", lam, p] => Ok(Nonlinearity::Power {
                lambda: parse_num(lam, spec)?,
                p: parse_num(p, spec)?,
            }),
            ["table", path] => Self::from_table_csv(Path::new(path)),
            _ => Err(Error::Parse(format!(
                "unrecognized nonlinearity spec '{spec}' (expected const:<c>, exp:<lambda>, power:<lambda>:<p>, table:<path>)"
            ))),
        }
    }

    /// Load a tabulated nonlinearity from CSV with header `s,g[,gprime]`.
    /// A missing gprime column is filled by finite differences in s.
    pub fn from_table_csv(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("{}: empty table", path.display())))?;
        let has_gprime = match header.trim() {
            "s,g" => false,
            "s,g,gprime" => true,
            other => {
                return Err(Error::Parse(format!(
                    "{}: line 1: expected header 's,g' or 's,g,gprime', got '{other}'",
                    path.display()
                )))
            }
        };
        let mut s = Vec::new();
        let mut g = Vec::new();
        let mut gp = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            let want = if has_gprime { 3 } else { 2 };
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
            s.push(parse(cols[0])?);
            g.push(parse(cols[1])?);
            if has_gprime {
                gp.push(parse(cols[2])?);
            }
        }
        if !has_gprime {
            gp = difference_derivative(&s, &g)?;
        }
        Ok(Nonlinearity::Tabulated(TabulatedG::new(s, g, gp)?))
    }

    /// Write a tabulated nonlinearity as CSV `s,g,gprime`. Errors on builtins.
    pub fn write_table_csv(&self, path: &Path) -> Result<()> {
        let t = match self {
            Nonlinearity::Tabulated(t) => t,
            _ => {
                return Err(Error::Domain(
                    "only tabulated nonlinearities can be written as tables".into(),
                ))
            }
        };
        let mut out = String::from("s,g,gprime\n");
        for i in 0..t.s.len() {
            out.push_str(&format!("{},{},{}\n", t.s[i], t.g[i], t.gprime[i]));
        }
        crate::cli::write_atomic(path, out.as_bytes())
    }

    /// Spec-string form for reports.
    pub fn describe(&self) -> String {
        match self {
            Nonlinearity::Constant { c } => format!("const:{c}"),
            Nonlinearity::Exponential { lambda } => format!("exp:{lambda}"),
            Nonlinearity::Power { lambda, p } => format!("power:{lambda}:{p}"),
            Nonlinearity::Tabulated(t) => format!("table[{} rows]", t.s.len()),
        }
    }
}

fn parse_num(v: &str, spec: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::Parse(format!("invalid number '{v}' in nonlinearity spec '{spec}'")))
}

/// Nonuniform 3-point derivative of g with respect to s (one-sided at ends).
fn difference_derivative(s: &[f64], g: &[f64]) -> Result<Vec<f64>> {
    let m = s.len();
    if m < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let mut out = vec![0.0; m];
    for i in 0..m {
        let j = i.clamp(1, m - 2);
        let (s0, s1, s2) = (s[j - 1], s[j], s[j + 1]);
        let (g0, g1, g2) = (g[j - 1], g[j], g[j + 1]);
        let x = s[i];
        // derivative of the interpolating parabola at x
        out[i] = g0 * (2.0 * x - s1 - s2) / ((s0 - s1) * (s0 - s2))
            + g1 * (2.0 * x - s0 - s2) / ((s1 - s0) * (s1 - s2))
            + g2 * (2.0 * x - s0 - s1) / ((s2 - s0) * (s2 - s1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_values() {
        let c = Nonlinearity::parse_spec("const:2.5").unwrap();
        assert_eq!(c.eval_g(-3.0), 2.5);
        assert_eq!(c.eval_gprime(-3.0), 0.0);

        let e = Nonlinearity::parse_spec("exp:0.5").unwrap();
        assert!((e.eval_g(-1.0) - 0.5 * (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(e.eval_g(-1.0), e.eval_gprime(-1.0));

        let p = Nonlinearity::parse_spec("power:2:3").unwrap();
        assert_eq!(p.eval_g(-2.0), 16.0);
        assert_eq!(p.eval_gprime(-2.0), -24.0);
        assert_eq!(p.eval_g(0.5), 0.0);
    }

    #[test]
    fn bad_specs() {
        assert!(Nonlinearity::parse_spec("const").is_err());
        assert!(Nonlinearity::parse_spec("exp:abc").is_err());
        assert!(Nonlinearity::parse_spec("linear:1").is_err());
    }

    #[test]
    fn tabulated_interp_and_extrapolation() {
        let t = TabulatedG::new(
            vec![-2.0, -1.0, 0.0],
            vec![4.0, 1.0, 0.0],
            vec![-4.0, -2.0, 0.0],
        )
        .unwrap();
        let g = Nonlinearity::Tabulated(t);
        assert_eq!(g.eval_g(-1.5), 2.5);
        assert_eq!(g.eval_g(-5.0), 4.0); // constant extrapolation
        assert_eq!(g.eval_g(1.0), 0.0);
        assert_eq!(g.eval_gprime(-0.5), -1.0);
    }

    #[test]
    fn table_requires_monotone_abscissa() {
        assert!(TabulatedG::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn difference_derivative_exact_for_parabola() {
        let s: Vec<f64> = (0..20).map(|i| -2.0 + 0.13 * i as f64).collect();
        let g: Vec<f64> = s.iter().map(|x| 3.0 * x * x - x + 1.5).collect();
        let d = difference_derivative(&s, &g).unwrap();
        for (x, dv) in s.iter().zip(&d) {
            assert!((dv - (6.0 * x - 1.0)).abs() < 1e-12);
        }
    }
}
