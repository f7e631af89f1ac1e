//! The k-Hessian operator S_k and its linearization for radial functions.
//!
//! S_k(D²u) is the sum of the k-th principal minors of the Hessian, equal to
//! the k-th elementary symmetric function of its eigenvalues. For radial u the
//! Hessian has eigenvalues λ₁ = u'' (multiplicity 1, direction x) and
//! λ₂ = u'/r (multiplicity n−1), and the operator collapses to
//!
//!   S_k = c_{n,k} λ₂^{k-1} ( n λ₂ + k (λ₁ − λ₂) ),   c_{n,k} = C(n,k)/n.
//!
//! The matrix of partial derivatives S_k^{ij} = ∂S_k/∂u_ij has the closed form
//!
//!   S = k c_{n,k} λ₂^{k-2} ( λ₂ I + ((k−1)/(n−1)) (λ₁−λ₂) (I − x xᵀ/|x|²) ),
//!
//! which this module evaluates directly, alongside the brute-force principal
//! minor sum that serves as its independent oracle.

use crate::error::{Error, Result};

/// Largest dimension for exact integer binomials (Pascal recurrence in u128).
pub const MAX_BINOMIAL_N: u32 = 64;

/// Exact binomial coefficient C(n, k) for n <= 64; C(n, k) = 0 for k > n.
pub fn binomial(n: u32, k: u32) -> Result<u128> {
    if n > MAX_BINOMIAL_N {
        return Err(Error::Scale(format!(
            "binomial supports n <= {MAX_BINOMIAL_N}, got n = {n}"
        )));
    }
    if k > n {
        return Ok(0);
    }
    let mut row = vec![0u128; n as usize + 1];
    row[0] = 1;
    for i in 1..=n as usize {
        for j in (1..=i).rev() {
            row[j] += row[j - 1];
        }
    }
    Ok(row[k as usize])
}

/// Problem dimensions: the ambient dimension n, the Hessian order k, and the
/// radial-reduction constant c_{n,k} = C(n,k)/n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    n: u32,
    k: u32,
    c_nk: f64,
}

impl ProblemParams {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("dimension n must be >= 2, got {n}")));
        }
        if k < 1 || k > n {
            return Err(Error::Domain(format!(
                "Hessian order must satisfy 1 <= k <= n, got k = {k}, n = {n}"
            )));
        }
        let c_nk = binomial(n, k)? as f64 / n as f64;
        Ok(Self { n, k, c_nk })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn c_nk(&self) -> f64 {
        self.c_nk
    }
}

/// k-th elementary symmetric function of the entries of `lambda`.
pub fn sigma_k(lambda: &[f64], k: usize) -> Result<f64> {
    let n = lambda.len();
    if k < 1 || k > n {
        return Err(Error::Domain(format!(
            "sigma_k needs 1 <= k <= {n}, got k = {k}"
        )));
    }
    // DP over e_1..e_k; exact for the polynomial identity, O(nk) flops.
    let mut e = vec![0.0f64; k + 1];
    e[0] = 1.0;
    for &x in lambda {
        for j in (1..=k).rev() {
            e[j] += x * e[j - 1];
        }
    }
    Ok(e[k])
}

/// True iff sigma_i(lambda) > 0 for all i = 1..k (the ellipticity cone).
pub fn in_gamma_k(lambda: &[f64], k: usize) -> Result<bool> {
    let n = lambda.len();
    if k < 1 || k > n {
        return Err(Error::Domain(format!(
            "in_gamma_k needs 1 <= k <= {n}, got k = {k}"
        )));
    }
    for i in 1..=k {
        if sigma_k(lambda, i)? <= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dense symmetric matrix, row-major full storage. Small sizes only; this is
/// the oracle-side representation.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMat {
    n: usize,
    data: Vec<f64>,
}

impl SymMat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets (i, j) and (j, i).
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }
}

/// Maximum dimension accepted by the brute-force minor sum.
pub const MAX_ORACLE_N: usize = 12;

/// S_k as the explicit sum of k×k principal minors (determinants via LU with
/// partial pivoting). Brute-force oracle, n <= 12.
pub fn sk_full(h: &SymMat, k: usize) -> Result<f64> {
    let n = h.n();
    if n > MAX_ORACLE_N {
        return Err(Error::Scale(format!(
            "minor-sum oracle supports n <= {MAX_ORACLE_N}, got n = {n}"
        )));
    }
    if k < 1 || k > n {
        return Err(Error::Domain(format!(
            "sk_full needs 1 <= k <= {n}, got k = {k}"
        )));
    }
    let mut total = 0.0;
    let mut subset: Vec<usize> = (0..k).collect();
    let mut scratch = vec![0.0f64; k * k];
    loop {
        for (a, &ia) in subset.iter().enumerate() {
            for (b, &ib) in subset.iter().enumerate() {
                scratch[a * k + b] = h.get(ia, ib);
            }
        }
        total += det_in_place(&mut scratch, k);
        // next k-subset of {0..n-1} in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(total);
            }
            i -= 1;
            if subset[i] != i + n - k {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn det_in_place(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[piv * n + col].abs() {
                piv = row;
            }
        }
        if a[piv * n + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            det = -det;
        }
        let d = a[col * n + col];
        det *= d;
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            if f != 0.0 {
                for j in col..n {
                    a[row * n + j] -= f * a[col * n + j];
                }
            }
        }
    }
    det
}

/// S_k(D²u) for a radial profile through the closed radial form.
pub fn sk_radial(r: f64, uprime: f64, usecond: f64, params: &ProblemParams) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r:e}")));
    }
    let n = params.n() as f64;
    let k = params.k() as i32;
    let lam2 = uprime / r;
    Ok(params.c_nk() * lam2.powi(k - 1) * (n * lam2 + k as f64 * (usecond - lam2)))
}

/// The two Hessian eigenvalues of a radial function at radius r:
/// λ₁ = u'' (multiplicity 1) and λ₂ = u'/r (multiplicity n−1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialEigenpair {
    pub lambda1: f64,
    pub lambda2: f64,
    r: f64,
}

impl RadialEigenpair {
    pub fn new(lambda1: f64, lambda2: f64, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {r:e}")));
        }
        Ok(Self { lambda1, lambda2, r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

fn check_point(x: &[f64], pair: &RadialEigenpair) -> Result<f64> {
    let norm2: f64 = x.iter().map(|v| v * v).sum();
    let norm = norm2.sqrt();
    if norm == 0.0 {
        return Err(Error::Domain("point x must be nonzero".into()));
    }
    if (norm - pair.r()).abs() > 1e-9 * pair.r().max(1.0) {
        return Err(Error::Domain(format!(
            "|x| = {norm:e} does not match the eigenpair radius {:e}",
            pair.r()
        )));
    }
    Ok(norm)
}

/// Radial Hessian at x: H = λ₂ I + (λ₁ − λ₂) x xᵀ / |x|².
pub fn radial_hessian(x: &[f64], pair: &RadialEigenpair) -> Result<SymMat> {
    let norm = check_point(x, pair)?;
    let n = x.len();
    let mut h = SymMat::zeros(n);
    let diff = pair.lambda1 - pair.lambda2;
    for i in 0..n {
        for j in i..n {
            let mut v = diff * x[i] * x[j] / (norm * norm);
            if i == j {
                v += pair.lambda2;
            }
            h.set(i, j, v);
        }
    }
    Ok(h)
}

/// Closed-form S_k^{ij} matrix with a degeneracy flag.
#[derive(Debug, Clone)]
pub struct SkijMatrix {
    pub matrix: SymMat,
    /// λ₂ = 0 with k >= 2: the λ₂^{k-2} factor degenerates. For k >= 3 the
    /// matrix is the zero limit; for k = 2 the finite two-term limit is kept.
    pub degenerate: bool,
}

/// Radial and tangential coefficients of S: S = a_r P + a_t (I − P) with
/// P = x xᵀ/|x|². Written so k = 1 never touches λ₂^{k-2}.
fn skij_coefficients(pair: &RadialEigenpair, params: &ProblemParams) -> (f64, f64, bool) {
    let k = params.k() as i32;
    let n = params.n() as f64;
    let kc = params.k() as f64 * params.c_nk();
    let lam1 = pair.lambda1;
    let lam2 = pair.lambda2;
    let radial = kc * lam2.powi(k - 1);
    let tangential = if k == 1 {
        kc
    } else {
        kc * (lam2.powi(k - 1) + (k as f64 - 1.0) / (n - 1.0) * (lam1 - lam2) * lam2.powi(k - 2))
    };
    let degenerate = k >= 2 && lam2 == 0.0;
    (radial, tangential, degenerate)
}

/// The matrix S_k^{ij}(D²u) at the point x.
pub fn skij_matrix(
    x: &[f64],
    pair: &RadialEigenpair,
    params: &ProblemParams,
) -> Result<SkijMatrix> {
    let norm = check_point(x, pair)?;
    if x.len() != params.n() as usize {
        return Err(Error::Domain(format!(
            "point dimension {} does not match n = {}",
            x.len(),
            params.n()
        )));
    }
    let (a_r, a_t, degenerate) = skij_coefficients(pair, params);
    let n = x.len();
    let mut m = SymMat::zeros(n);
    for i in 0..n {
        for j in i..n {
            let p = x[i] * x[j] / (norm * norm);
            let mut v = (a_r - a_t) * p;
            if i == j {
                v += a_t;
            }
            m.set(i, j, v);
        }
    }
    Ok(SkijMatrix {
        matrix: m,
        degenerate,
    })
}

/// The quadratic form w S vᵀ evaluated through its radial/tangential split,
/// without forming the matrix.
pub fn quad_wsv(
    w: &[f64],
    v: &[f64],
    x: &[f64],
    pair: &RadialEigenpair,
    params: &ProblemParams,
) -> Result<(f64, bool)> {
    let norm = check_point(x, pair)?;
    if w.len() != x.len() || v.len() != x.len() {
        return Err(Error::Domain("vector dimensions must match x".into()));
    }
    let (a_r, a_t, degenerate) = skij_coefficients(pair, params);
    let xw: f64 = x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / norm;
    let xv: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / norm;
    let wv: f64 = w.iter().zip(v).map(|(a, b)| a * b).sum();
    Ok((a_r * xw * xv + a_t * (wv - xw * xv), degenerate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_table() {
        assert_eq!(binomial(4, 2).unwrap(), 6);
        assert_eq!(binomial(10, 0).unwrap(), 1);
        assert_eq!(binomial(10, 11).unwrap(), 0);
        assert_eq!(binomial(64, 32).unwrap(), 1832624140942590534);
        assert!(binomial(65, 1).is_err());
    }

    #[test]
    fn binomial_identities_from_minor_counting() {
        // C(n-2,k-2) + C(n-2,k-1) = C(n-1,k-1) = (k/n) C(n,k)
        // C(n-1,k) = ((n-k)/n) C(n,k), exact integers for 1 <= k <= n <= 20
        // (C(m, j) = 0 when j > m; the k = 1 case uses C(n-2, -1) = 0)
        for n in 2u32..=20 {
            for k in 1..=n {
                let first = if k >= 2 {
                    binomial(n - 2, k - 2).unwrap()
                } else {
                    0
                };
                let lhs = first + binomial(n - 2, k - 1).unwrap();
                let mid = binomial(n - 1, k - 1).unwrap();
                assert_eq!(lhs, mid, "n={n} k={k}");
                assert_eq!(u128::from(n) * mid, u128::from(k) * binomial(n, k).unwrap());
                assert_eq!(
                    u128::from(n) * binomial(n - 1, k).unwrap(),
                    u128::from(n - k) * binomial(n, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn params_constant() {
        let p = ProblemParams::new(4, 2).unwrap();
        assert_eq!(p.c_nk(), 1.5);
        assert!(ProblemParams::new(1, 1).is_err());
        assert!(ProblemParams::new(4, 5).is_err());
        assert!(ProblemParams::new(4, 0).is_err());
    }

    #[test]
    fn sigma_examples() {
        // enumeration oracle for sigma_2(1,2,3): 1*2 + 1*3 + 2*3 = 11
        assert_eq!(sigma_k(&[1.0, 2.0, 3.0], 2).unwrap(), 11.0);
        assert_eq!(sigma_k(&[1.0, 2.0, 3.0], 1).unwrap(), 6.0);
        assert_eq!(sigma_k(&[1.0, 2.0, 3.0], 3).unwrap(), 6.0);
        assert!(sigma_k(&[1.0], 2).is_err());
    }

    #[test]
    fn gamma_cone() {
        assert!(in_gamma_k(&[1.0; 5], 5).unwrap());
        assert!(!in_gamma_k(&[-1.0, -1.0], 1).unwrap());
        // sigma_1 = 2 > 0 but sigma_2 = -3
        assert!(!in_gamma_k(&[3.0, -1.0], 2).unwrap());
        assert!(in_gamma_k(&[3.0, -1.0], 1).unwrap());
    }

    #[test]
    fn sk_full_identity() {
        let h = SymMat::identity(4);
        assert_eq!(sk_full(&h, 2).unwrap(), 6.0);
        let mut d = SymMat::zeros(3);
        d.set(0, 0, 1.0);
        d.set(1, 1, 2.0);
        d.set(2, 2, 3.0);
        assert_eq!(sk_full(&d, 2).unwrap(), 11.0);
        assert!(sk_full(&SymMat::zeros(13), 2).is_err());
    }

    #[test]
    fn sk_radial_identity_hessian() {
        // u = r²/2: u' = r, u'' = 1, every eigenvalue 1
        let p = ProblemParams::new(4, 2).unwrap();
        let v = sk_radial(0.7, 0.7, 1.0, &p).unwrap();
        assert!((v - 6.0).abs() < 1e-14);
        assert!(sk_radial(0.0, 0.0, 1.0, &p).is_err());
    }

    #[test]
    fn sk_radial_is_laplacian_for_k1() {
        let p = ProblemParams::new(5, 1).unwrap();
        let (r, up, upp) = (0.3, 0.45, -1.2);
        let v = sk_radial(r, up, upp, &p).unwrap();
        let lap = upp + (5.0 - 1.0) * up / r;
        assert!((v - lap).abs() < 1e-13);
    }

    #[test]
    fn skij_equal_eigenvalues_reduction() {
        for (n, k) in [(4u32, 2u32), (5, 3), (6, 1), (6, 6)] {
            let p = ProblemParams::new(n, k).unwrap();
            let lam = 0.8;
            let x: Vec<f64> = (0..n).map(|i| 0.1 + i as f64).collect();
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let pair = RadialEigenpair::new(lam, lam, r).unwrap();
            let s = skij_matrix(&x, &pair, &p).unwrap();
            let expect = k as f64 * p.c_nk() * lam.powi(k as i32 - 1);
            for i in 0..n as usize {
                for j in 0..n as usize {
                    let want = if i == j { expect } else { 0.0 };
                    assert!(
                        (s.matrix.get(i, j) - want).abs() <= 1e-12 * (1.0 + expect.abs()),
                        "n={n} k={k} ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn skij_k1_is_identity() {
        let p = ProblemParams::new(5, 1).unwrap();
        let x = [1.0, 0.0, 0.0, 0.0, 0.0];
        let pair = RadialEigenpair::new(2.0, -0.7, 1.0).unwrap();
        let s = skij_matrix(&x, &pair, &p).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((s.matrix.get(i, j) - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn skij_degenerate_flag() {
        let p3 = ProblemParams::new(5, 3).unwrap();
        let x = [0.0, 0.0, 2.0, 0.0, 0.0];
        let pair = RadialEigenpair::new(1.5, 0.0, 2.0).unwrap();
        let s = skij_matrix(&x, &pair, &p3).unwrap();
        assert!(s.degenerate);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(s.matrix.get(i, j), 0.0);
            }
        }
        // k = 2 keeps the finite two-term limit
        let p2 = ProblemParams::new(5, 2).unwrap();
        let s2 = skij_matrix(&x, &pair, &p2).unwrap();
        assert!(s2.degenerate);
        let coef = 2.0 * p2.c_nk() * (1.0 / 4.0) * 1.5; // (k-1)/(n-1) (λ1-λ2)
        assert!((s2.matrix.get(0, 0) - coef).abs() < 1e-14);
        assert!(s2.matrix.get(2, 2).abs() < 1e-14); // tangential projector kills x-direction
    }

    #[test]
    fn quad_wsv_matches_matrix_route() {
        let p = ProblemParams::new(6, 3).unwrap();
        let x = [0.3, -0.2, 0.5, 0.1, -0.4, 0.2];
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let pair = RadialEigenpair::new(-0.9, 1.3, r).unwrap();
        let s = skij_matrix(&x, &pair, &p).unwrap();
        let w = [1.0, 2.0, -1.0, 0.5, 0.25, -2.0];
        let v = [-0.5, 1.5, 2.0, -1.0, 0.75, 0.1];
        let mut want = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                want += w[i] * s.matrix.get(i, j) * v[j];
            }
        }
        let (got, deg) = quad_wsv(&w, &v, &x, &pair, &p).unwrap();
        assert!(!deg);
        assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn quad_wsv_radial_and_orthogonal() {
        let p = ProblemParams::new(4, 2).unwrap();
        let x = [2.0, 0.0, 0.0, 0.0];
        let pair = RadialEigenpair::new(0.7, 1.1, 2.0).unwrap();
        // w = v = x: k c λ₂^{k-1} |x|²
        let (got, _) = quad_wsv(&x, &x, &x, &pair, &p).unwrap();
        let want = 2.0 * p.c_nk() * 1.1 * 4.0;
        assert!((got - want).abs() < 1e-12);
        // w ⟂ x, v = x: cross term vanishes
        let w = [0.0, 3.0, -1.0, 0.5];
        let (got, _) = quad_wsv(&w, &x, &x, &pair, &p).unwrap();
        assert!(got.abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn sigma_k_matches_pair_enumeration(v in prop::collection::vec(-3.0f64..3.0, 2..7)) {
            // independent oracle: direct sum over index pairs
            let n = v.len();
            let mut direct = 0.0;
            for i in 0..n {
                for j in i+1..n {
                    direct += v[i]*v[j];
                }
            }
            let got = sigma_k(&v, 2).unwrap();
            prop_assert!((got - direct).abs() <= 1e-10 * (1.0 + direct.abs()));
        }

        #[test]
        fn cone_positivity_of_tangential_coefficient(
            lam1 in -5.0f64..5.0,
            lam2 in 0.01f64..5.0,
            n in 2u32..9,
            k in 1u32..9,
        ) {
            // if λ₂ > 0 and nλ₂ + k(λ₁ − λ₂) > 0 then
            // λ₂ + ((k−1)/(n−1))(λ₁−λ₂) > 0
            prop_assume!(k <= n);
            let nf = n as f64;
            let kf = k as f64;
            prop_assume!(nf * lam2 + kf * (lam1 - lam2) > 1e-9);
            let coef = lam2 + (kf - 1.0) / (nf - 1.0) * (lam1 - lam2);
            prop_assert!(coef > 0.0);
        }
    }
}
