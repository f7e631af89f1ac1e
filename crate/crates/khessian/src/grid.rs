//! Radial grids on (0, 1].
//!
//! All one-dimensional quadrature in the crate runs on a [`RadialGrid`]:
//! strictly increasing nodes with the last node pinned at r = 1. The default
//! grid is geometric (log-spaced) near the origin and uniform on the outer
//! part, which resolves the singular weights r^(n-k) and unbounded profiles
//! near r = 0 at linear cost.

use crate::error::{Error, Result};

/// Default smallest radius.
pub const DEFAULT_R_MIN: f64 = 1e-8;
/// Default junction between the geometric and uniform parts.
pub const DEFAULT_R_JOIN: f64 = 0.1;
/// Default total node count.
pub const DEFAULT_NODES: usize = 4096;

/// Hard floor for the smallest radius.
pub const R_MIN_FLOOR: f64 = 1e-12;
/// Minimum number of nodes for a valid grid.
pub const MIN_NODES: usize = 16;

/// Strictly increasing radii in (0, 1], last node exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
}

impl RadialGrid {
    /// Build a grid from explicit nodes, validating the invariants.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < MIN_NODES {
            return Err(Error::Domain(format!(
                "grid needs at least {MIN_NODES} nodes, got {}",
                nodes.len()
            )));
        }
        let first = nodes[0];
        if !first.is_finite() || first < R_MIN_FLOOR {
            return Err(Error::Domain(format!(
                "first node must satisfy r_min >= {R_MIN_FLOOR:e}, got {first:e}"
            )));
        }
        let last = *nodes.last().unwrap();
        if last != 1.0 {
            return Err(Error::Domain(format!("last node must be 1, got {last}")));
        }
        for w in nodes.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Domain(format!(
                    "nodes must be strictly increasing, found {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { nodes })
    }

    /// Geometric nodes on [r_min, r_join] followed by uniform nodes on
    /// (r_join, 1]. Half of the budget goes to each part.
    pub fn log_uniform(r_min: f64, r_join: f64, total: usize) -> Result<Self> {
        if !(r_min < r_join && r_join < 1.0) {
            return Err(Error::Domain(format!(
                "need r_min < r_join < 1, got r_min={r_min:e}, r_join={r_join:e}"
            )));
        }
        if total < MIN_NODES {
            return Err(Error::Domain(format!(
                "grid needs at least {MIN_NODES} nodes, got {total}"
            )));
        }
        let n_geo = total / 2;
        let n_uni = total - n_geo;
        let mut nodes = Vec::with_capacity(total);
        let (l0, l1) = (r_min.ln(), r_join.ln());
        for i in 0..n_geo {
            let t = i as f64 / (n_geo - 1) as f64;
            nodes.push((l0 + t * (l1 - l0)).exp());
        }
        // exact junction value, then uniform steps up to 1
        nodes[n_geo - 1] = r_join;
        let h = (1.0 - r_join) / n_uni as f64;
        for i in 1..=n_uni {
            nodes.push(r_join + h * i as f64);
        }
        let m = nodes.len();
        nodes[m - 1] = 1.0;
        Self::from_nodes(nodes)
    }

    /// Uniform nodes on [r_min, 1].
    pub fn uniform(r_min: f64, total: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_min < 1.0) {
            return Err(Error::Domain(format!("need 0 < r_min < 1, got {r_min:e}")));
        }
        let mut nodes = Vec::with_capacity(total);
        for i in 0..total {
            let t = i as f64 / (total.saturating_sub(1).max(1)) as f64;
            nodes.push(r_min + t * (1.0 - r_min));
        }
        if let Some(last) = nodes.last_mut() {
            *last = 1.0;
        }
        Self::from_nodes(nodes)
    }

    /// The default grid: geometric on [1e-8, 0.1], uniform on (0.1, 1], 4096 nodes.
    pub fn default_grid() -> Self {
        Self::log_uniform(DEFAULT_R_MIN, DEFAULT_R_JOIN, DEFAULT_NODES)
            .expect("default grid parameters are valid")
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    /// Indices of the nodes lying inside [lo, hi].
    pub fn window(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let start = self.nodes.partition_point(|&r| r < lo);
        let end = self.nodes.partition_point(|&r| r <= hi);
        start..end
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = RadialGrid::default_grid();
        assert_eq!(g.len(), DEFAULT_NODES);
        assert_eq!(g.r_min(), DEFAULT_R_MIN);
        assert_eq!(*g.nodes().last().unwrap(), 1.0);
        // geometric part: ratios nearly constant
        let r = g.nodes();
        let q0 = r[1] / r[0];
        let q1 = r[100] / r[99];
        assert!((q0 - q1).abs() < 1e-10 * q0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(RadialGrid::from_nodes(vec![0.5, 1.0]).is_err());
        let mut nodes: Vec<f64> = (0..32).map(|i| 0.5 + 0.5 * i as f64 / 31.0).collect();
        nodes[31] = 1.0;
        assert!(RadialGrid::from_nodes(nodes.clone()).is_ok());
        nodes[5] = nodes[4];
        assert!(RadialGrid::from_nodes(nodes).is_err());
        // last node must be exactly 1
        let nodes: Vec<f64> = (0..32).map(|i| 0.5 + 0.49 * i as f64 / 31.0).collect();
        assert!(RadialGrid::from_nodes(nodes).is_err());
    }

    #[test]
    fn window_selects_nodes() {
        let g = RadialGrid::uniform(0.1, 10 * 9 + 1).unwrap();
        let w = g.window(0.5, 0.6);
        for i in w.clone() {
            let r = g.nodes()[i];
            assert!((0.5..=0.6).contains(&r));
        }
        assert!(!w.is_empty());
    }
}
