use crate::linalg::{self, max_abs, Mat};
use crate::report::CheckRecord;
use crate::space::ValidationReport;

use super::lie::LieContactModel;

/// Below this the contact coefficient counts as zero.
const CONTACT_FLOOR: f64 = 1e-9;

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

impl LieContactModel {
    /// `(eta ^ (d eta)^m)(b_0, ..., b_{n-1})`, expanded along `eta`:
    /// `sum_i (-1)^i eta_i m! Pf(d eta with row and column i removed)`.
    pub fn contact_coefficient(&self) -> f64 {
        let n = self.dim();
        let m = self.m();
        let eta = self.space().eta();
        let d = self.deta().to_matrix();
        let mut total = 0.0;
        for i in 0..n {
            if eta[i] == 0.0 {
                continue;
            }
            let keep: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            let minor = Mat::from_fn(n - 1, n - 1, |a, b| d[(keep[a], keep[b])]);
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * eta[i] * linalg::pfaffian(&minor);
        }
        total * factorial(m)
    }

    /// Bracket axioms, the contact condition, `d eta = g(J., .)`, `[C, xi] in C`
    /// and the pointwise structure equations.
    pub fn validity(&self, tol: f64) -> ValidationReport {
        let mut report = self.space().validate(tol);
        let n = self.dim();
        let c = self.structure_constants();

        let mut antisym = 0.0_f64;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    antisym = antisym.max((c.get(k, i, j) + c.get(k, j, i)).abs());
                }
            }
        }

        // sum_l c^l_ij c^m_lk + c^l_jk c^m_li + c^l_ki c^m_lj
        let mut jacobi = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut s = 0.0;
                        for l in 0..n {
                            s += c.get(l, i, j) * c.get(m, l, k)
                                + c.get(l, j, k) * c.get(m, l, i)
                                + c.get(l, k, i) * c.get(m, l, j);
                        }
                        jacobi = jacobi.max(s.abs());
                    }
                }
            }
        }

        let coefficient = self.contact_coefficient();
        let deta = self.deta().to_matrix();
        let compat = max_abs(&(&deta - self.space().kahler()));

        let space = self.space();
        let p = space.contact_projection();
        let eta = space.eta();
        let mut reeb = 0.0_f64;
        for i in 0..n {
            let x = p.column(i).into_owned();
            reeb = reeb.max(self.bracket(&x, space.xi()).dot(eta).abs());
        }

        report.checks.extend([
            CheckRecord::new("antisymmetry", "c^k_ij = -c^k_ji", antisym, tol),
            CheckRecord::new(
                "jacobi",
                "[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y] = 0",
                jacobi,
                tol,
            ),
            CheckRecord::flag(
                "contact_condition",
                "eta ^ (d eta)^m != 0",
                coefficient.is_finite() && coefficient.abs() > CONTACT_FLOOR,
            ),
            CheckRecord::new(
                "deta_compatible",
                "d eta(X,Y) = -eta([X,Y]) = g(JX,Y)",
                compat,
                tol,
            ),
            CheckRecord::new("reeb_bracket", "eta([X, xi]) = 0 for X in C", reeb, tol),
        ]);
        report
    }
}
