//! Pointwise metric contact structures `(g, eta, J, xi)` on `R^{2m+1}`.

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs, max_abs_vec, Mat, Vector};
use crate::random;
use crate::report::CheckRecord;

/// Absolute tolerance used for validation of unit-normalized data.
pub const VALIDATION_TOL: f64 = 1e-9;

/// A metric contact structure on a single vector space, in a fixed frame.
///
/// `g` is the metric, `eta` the contact covector and `j` the endomorphism;
/// the Reeb vector `xi = eta^sharp` is derived. Construction only checks
/// shapes; use [`ContactMetricSpace::validate`] for the structure equations.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactMetricSpace {
    m: usize,
    g: Mat,
    g_inv: Mat,
    eta: Vector,
    j: Mat,
    xi: Vector,
    proj: Mat,
}

impl ContactMetricSpace {
    pub fn new(m: usize, g: Mat, eta: Vector, j: Mat) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroRank);
        }
        let n = 2 * m + 1;
        for (what, rows, cols) in [
            ("metric", g.nrows(), g.ncols()),
            ("J", j.nrows(), j.ncols()),
        ] {
            if rows != n {
                return Err(Error::Dimension {
                    what,
                    expected: n,
                    found: rows,
                });
            }
            if cols != n {
                return Err(Error::Dimension {
                    what,
                    expected: n,
                    found: cols,
                });
            }
        }
        if eta.len() != n {
            return Err(Error::Dimension {
                what: "eta",
                expected: n,
                found: eta.len(),
            });
        }
        let g_inv = g.clone().try_inverse().ok_or(Error::SingularMetric)?;
        let xi = &g_inv * &eta;
        let proj = Mat::identity(n, n) - &xi * eta.transpose();
        Ok(Self {
            m,
            g,
            g_inv,
            eta,
            j,
            xi,
            proj,
        })
    }

    /// The standard structure in the frame `(e_1, f_1, ..., e_m, f_m, xi)`:
    /// `g = Id`, `J e_i = f_i`, `J f_i = -e_i`, `J xi = 0`.
    pub fn canonical(m: usize) -> Self {
        let n = 2 * m + 1;
        let mut j = Mat::zeros(n, n);
        for i in 0..m {
            let (e, f) = (2 * i, 2 * i + 1);
            j[(f, e)] = 1.0;
            j[(e, f)] = -1.0;
        }
        let mut eta = Vector::zeros(n);
        eta[n - 1] = 1.0;
        Self::new(m, Mat::identity(n, n), eta, j).expect("canonical structure is well-formed")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        2 * self.m + 1
    }

    pub fn g(&self) -> &Mat {
        &self.g
    }

    pub fn g_inv(&self) -> &Mat {
        &self.g_inv
    }

    pub fn eta(&self) -> &Vector {
        &self.eta
    }

    pub fn j(&self) -> &Mat {
        &self.j
    }

    pub fn xi(&self) -> &Vector {
        &self.xi
    }

    /// Projection `Id - xi (x) eta` onto the contact distribution along `xi`.
    pub fn contact_projection(&self) -> &Mat {
        &self.proj
    }

    /// Kahler form `F(X, Y) = g(JX, Y)` as a component matrix.
    pub fn kahler(&self) -> Mat {
        self.j.transpose() * &self.g
    }

    pub fn sharp(&self, covector: &Vector) -> Vector {
        &self.g_inv * covector
    }

    pub fn flat(&self, vector: &Vector) -> Vector {
        &self.g * vector
    }

    /// g-adjoint `E* = g^{-1} E^T g` of an endomorphism.
    pub fn adjoint(&self, e: &Mat) -> Mat {
        &self.g_inv * e.transpose() * &self.g
    }

    /// Expresses the structure in a new frame whose vectors are the columns of `basis`.
    pub fn in_frame(&self, basis: &Mat) -> Result<Self> {
        let n = self.dim();
        if basis.nrows() != n || basis.ncols() != n {
            return Err(Error::Dimension {
                what: "frame",
                expected: n,
                found: basis.ncols(),
            });
        }
        let inv = basis
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Precondition("frame vectors are linearly dependent".into()))?;
        let g = basis.transpose() * &self.g * basis;
        let eta = basis.transpose() * &self.eta;
        let j = &inv * &self.j * basis;
        Self::new(self.m, g, eta, j)
    }

    /// Checks every structure equation and records the worst violation of each.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let n = self.dim();
        let id = Mat::identity(n, n);
        let g = &self.g;
        let j = &self.j;
        let f = self.kahler();

        let symmetric = max_abs(&(g - g.transpose()));
        let lambda_min = linalg::min_symmetric_eigenvalue(g);
        let positive = if lambda_min > 0.0 {
            0.0
        } else {
            lambda_min.abs().max(f64::MIN_POSITIVE)
        };
        let unit = (self.eta.dot(&self.xi) - 1.0).abs();
        let j_sq = max_abs(&(j * j + &id - &self.xi * self.eta.transpose()));
        let j_xi = max_abs_vec(&(j * &self.xi)).max(max_abs_vec(&(j.transpose() * &self.eta)));
        let f_skew = max_abs(&(&f + f.transpose()));
        let compat = max_abs(&(j.transpose() * g * j - g + &self.eta * self.eta.transpose()));

        let checks = vec![
            CheckRecord::new("metric_symmetric", "g(X,Y) = g(Y,X)", symmetric, tol),
            CheckRecord::new("metric_positive_definite", "g > 0", positive, tol),
            CheckRecord::new("eta_unit", "|eta|_g = 1", unit, tol),
            CheckRecord::new("j_squared", "J^2 = -Id + eta (x) xi", j_sq, tol),
            CheckRecord::new("j_kills_reeb", "J xi = 0, eta o J = 0", j_xi, tol),
            CheckRecord::new("kahler_skew", "F = g(J.,.) skew", f_skew, tol),
            CheckRecord::new(
                "metric_compatible",
                "g(JX,JY) = g(X,Y) - eta(X) eta(Y)",
                compat,
                tol,
            ),
        ];
        ValidationReport {
            tolerance: tol,
            checks,
        }
    }

    /// Orthonormal frame `(e_1, f_1, ..., e_m, f_m, xi)` with `f_i = J e_i`.
    ///
    /// Candidates are the coordinate vectors in order, projected to the
    /// contact distribution and orthogonalized against the pairs chosen so far.
    pub fn adapted_frame(&self) -> Result<AdaptedFrame> {
        let report = self.validate(VALIDATION_TOL);
        if !report.passed() {
            return Err(Error::Precondition(format!(
                "adapted frame needs a valid structure; failing: {}",
                report.failing_ids().join(", ")
            )));
        }
        let n = self.dim();
        let ip = |u: &Vector, v: &Vector| (u.transpose() * &self.g * v)[(0, 0)];
        let mut chosen: Vec<Vector> = Vec::with_capacity(2 * self.m);
        let mut e = Vec::with_capacity(self.m);
        let mut f = Vec::with_capacity(self.m);
        while e.len() < self.m {
            let mut best: Option<(f64, Vector)> = None;
            let mut accepted = None;
            for k in 0..n {
                let cand = self.proj.column(k).into_owned();
                let norm0 = ip(&cand, &cand).sqrt();
                if norm0 < 1e-12 {
                    continue;
                }
                let mut r = cand.clone();
                for c in &chosen {
                    r -= c * ip(c, &r);
                }
                let ratio = ip(&r, &r).max(0.0).sqrt() / norm0;
                if ratio > 0.1 {
                    accepted = Some(r);
                    break;
                }
                if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
                    best = Some((ratio, r));
                }
            }
            let r = match accepted.or(best.map(|(_, r)| r)) {
                Some(r) => r,
                None => {
                    return Err(Error::Precondition(
                        "contact distribution is degenerate".into(),
                    ))
                }
            };
            let ei = &r / ip(&r, &r).sqrt();
            let fi = &self.j * &ei;
            chosen.push(ei.clone());
            chosen.push(fi.clone());
            e.push(ei);
            f.push(fi);
        }
        let mut basis = Mat::zeros(n, n);
        for i in 0..self.m {
            basis.set_column(2 * i, &e[i]);
            basis.set_column(2 * i + 1, &f[i]);
        }
        basis.set_column(n - 1, &self.xi);
        Ok(AdaptedFrame {
            e,
            f,
            xi: self.xi.clone(),
            basis,
        })
    }

    /// A random valid structure, deterministic in `(m, seed)`.
    ///
    /// In a random frame `(c_1..c_2m, x)` a nondegenerate skew form `rho` on
    /// the first `2m` vectors gets a compatible complex structure from the
    /// polar decomposition relative to a random inner product; the metric is
    /// `rho(., J.)` there, extended by `eta (x) eta` with `eta(x) = 1`.
    pub fn random(m: usize, seed: u64) -> Self {
        assert!(m >= 1, "contact rank must be at least 1");
        let mut rng = random::rng(seed);
        let n = 2 * m + 1;
        let k = 2 * m;
        loop {
            let p = Mat::identity(n, n) + random::gaussian_matrix(&mut rng, n, n) * 0.4;
            if linalg::condition_number(&p) > 8.0 {
                continue;
            }
            let r = random::gaussian_matrix(&mut rng, k, k);
            let rho = &r - r.transpose();
            if linalg::condition_number(&rho) > 20.0 {
                continue;
            }
            let h = random::spd_matrix(&mut rng, k);
            let (j_c, g_c) = compatible_pair(&rho, &h);

            let mut g_new = Mat::zeros(n, n);
            g_new.view_mut((0, 0), (k, k)).copy_from(&g_c);
            g_new[(n - 1, n - 1)] = 1.0;
            let mut j_new = Mat::zeros(n, n);
            j_new.view_mut((0, 0), (k, k)).copy_from(&j_c);

            let p_inv = p.clone().try_inverse().expect("well-conditioned frame");
            let g = p_inv.transpose() * g_new * &p_inv;
            let g = (&g + g.transpose()) * 0.5;
            if linalg::condition_number(&g) > 60.0 {
                continue;
            }
            let j = &p * j_new * &p_inv;
            let eta = p_inv.row(n - 1).transpose();
            return Self::new(m, g, eta, j).expect("random structure is well-formed");
        }
    }
}

/// Given a nondegenerate skew form `rho` and an inner product `h` on `R^{2m}`,
/// returns `(J, g)` with `J^2 = -Id`, `g(JX, Y) = rho(X, Y)` and `g = rho(., J.)`.
pub(crate) fn compatible_pair(rho: &Mat, h: &Mat) -> (Mat, Mat) {
    let l = h
        .clone()
        .cholesky()
        .expect("inner product is positive definite")
        .l();
    let l_inv = l.clone().try_inverse().expect("cholesky factor invertible");
    // rho in h-orthonormal coordinates; A with h(AX, Y) = rho(X, Y)
    let rho_on = &l_inv * rho * l_inv.transpose();
    let a = rho_on.transpose();
    let j_on = linalg::polar_factor(&a);
    let j = l_inv.transpose() * j_on * l.transpose();
    let g = rho * &j;
    let g = (&g + g.transpose()) * 0.5;
    (j, g)
}

/// Outcome of [`ContactMetricSpace::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub checks: Vec<CheckRecord>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.id.as_str())
            .collect()
    }

    pub fn max_violation(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.max_violation)
            .fold(0.0, f64::max)
    }
}

/// Orthonormal frame adapted to the contact structure.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedFrame {
    pub e: Vec<Vector>,
    pub f: Vec<Vector>,
    pub xi: Vector,
    /// Columns `e_1, f_1, ..., e_m, f_m, xi` in ambient coordinates.
    pub basis: Mat,
}
