use crate::forms::{
    bianchi, decompose, part_11, parts_20_02, reeb_tensor, trace, value_j, wedge_eta_endo, TwoForm,
    VectorValuedTwoForm,
};
use crate::linalg::{max_abs, max_abs_vec, Mat, Vector};
use crate::report::CheckRecord;
use crate::space::ContactMetricSpace;
use crate::tensor::Dense3;

use super::lie::LieContactModel;

#[derive(Clone, Debug)]
pub(crate) struct Geometry {
    gamma: Dense3,
    nijenhuis: VectorValuedTwoForm,
    n02: VectorValuedTwoForm,
    script_j: Mat,
    nabla_f: VectorValuedTwoForm,
}

/// `Phi` with `g(X, Phi Z) = B(X; xi, Z)` on the contact distribution: the full
/// endomorphism block of a vector valued two-form.
pub fn endo_block(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> Mat {
    let d = decompose(space, b);
    &d.endo_plus.0 + &d.endo_minus.0
}

impl Geometry {
    fn compute(model: &LieContactModel) -> Self {
        let space = model.space();
        let n = model.dim();
        let g = space.g();
        let j = space.j();
        let c = model.structure_constants();

        // low[a, i, j] = g(b_a, [b_i, b_j])
        let low = Dense3::from_fn(n, |a, i, jj| {
            (0..n).map(|l| g[(a, l)] * c.get(l, i, jj)).sum()
        });
        // Koszul: 2 g(nabla_i b_j, b_z) = g([b_i,b_j],b_z) - g([b_j,b_z],b_i) + g([b_z,b_i],b_j)
        let lowered = Dense3::from_fn(n, |z, i, jj| {
            0.5 * (low.get(z, i, jj) - low.get(i, jj, z) + low.get(jj, z, i))
        });
        let gi = space.g_inv();
        let gamma = Dense3::from_fn(n, |k, i, jj| {
            (0..n).map(|z| gi[(k, z)] * lowered.get(z, i, jj)).sum()
        });

        let basis = |i: usize| Vector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 });
        let jj2 = j * j;
        let mut nij_vec = vec![Vector::zeros(n); n * n];
        for a in 0..n {
            for b in (a + 1)..n {
                let x = basis(a);
                let y = basis(b);
                let jx = j * &x;
                let jy = j * &y;
                let v = (model.bracket(&jx, &jy) + &jj2 * model.bracket(&x, &y)
                    - j * (model.bracket(&jx, &y) + model.bracket(&x, &jy)))
                    * 0.25;
                nij_vec[a * n + b] = v;
            }
        }
        let nijenhuis = VectorValuedTwoForm::from_fn(n, |x, a, b| (g * &nij_vec[a * n + b])[x]);
        let n02 = parts_20_02(space, &nijenhuis).1;

        let ad_xi = model.ad(space.xi());
        let script_j = &ad_xi * j - j * &ad_xi;

        let f = space.kahler();
        // (nabla_X F)(Y, Z) = -F(nabla_X Y, Z) - F(Y, nabla_X Z)
        let nabla_f = VectorValuedTwoForm::from_fn(n, |x, y, z| {
            let mut s = 0.0;
            for k in 0..n {
                s -= gamma.get(k, x, y) * f[(k, z)] + f[(y, k)] * gamma.get(k, x, z);
            }
            s
        });

        Self {
            gamma,
            nijenhuis,
            n02,
            script_j,
            nabla_f,
        }
    }
}

impl LieContactModel {
    pub(crate) fn geometry(&self) -> &Geometry {
        self.cache.get_or_init(|| Geometry::compute(self))
    }

    /// Levi-Civita coefficients: `nabla_{b_i} b_j = sum_k gamma.get(k, i, j) b_k`.
    pub fn levi_civita(&self) -> &Dense3 {
        &self.geometry().gamma
    }

    /// `g(X, N(Y, Z))` with `N = 1/4 ([JX,JY] + J^2[X,Y] - J([JX,Y] + [X,JY]))`.
    pub fn nijenhuis(&self) -> &VectorValuedTwoForm {
        &self.geometry().nijenhuis
    }

    /// The `(0,2)` part of the Nijenhuis tensor, which vanishes exactly on CR structures.
    pub fn nijenhuis_02(&self) -> &VectorValuedTwoForm {
        &self.geometry().n02
    }

    /// `L_xi J = [ad_xi, J]` as a matrix.
    pub fn script_j(&self) -> &Mat {
        &self.geometry().script_j
    }

    /// `(nabla F)(X; Y, Z) = (nabla_X F)(Y, Z)` for the Levi-Civita connection.
    pub fn nabla_f(&self) -> &VectorValuedTwoForm {
        &self.geometry().nabla_f
    }

    /// `nabla_X Y` for the Levi-Civita connection of left-invariant fields.
    pub fn lc_derivative(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim();
        let gamma = self.levi_civita();
        Vector::from_fn(n, |k, _| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += x[i] * y[j] * gamma.get(k, i, j);
                }
            }
            s
        })
    }

    /// Metric and torsion-free residuals of the Levi-Civita coefficients.
    pub fn levi_civita_checks(&self, tol: f64) -> Vec<CheckRecord> {
        let n = self.dim();
        let g = self.space().g();
        let gamma = self.levi_civita();
        let c = self.structure_constants();
        let lowered = Dense3::from_fn(n, |z, i, j| {
            (0..n).map(|k| g[(z, k)] * gamma.get(k, i, j)).sum()
        });
        let mut metric = 0.0_f64;
        let mut torsion = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    metric = metric.max((lowered.get(k, i, j) + lowered.get(j, i, k)).abs());
                    torsion = torsion
                        .max((gamma.get(k, i, j) - gamma.get(k, j, i) - c.get(k, i, j)).abs());
                }
            }
        }
        vec![
            CheckRecord::new(
                "lc_metric",
                "X g(Y,Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z)",
                metric,
                tol,
            ),
            CheckRecord::new(
                "lc_torsion_free",
                "nabla_X Y - nabla_Y X = [X, Y]",
                torsion,
                tol,
            ),
        ]
    }

    /// `2 g((nabla_X J) Y, Z) = g(JX, 4 N(Y,Z)) + d eta(JY, X) eta(Z) + d eta(X, JZ) eta(Y)`
    /// over frame triples, and `nabla_xi J = 0`.
    pub fn nabla_j_checks(&self, tol: f64) -> Vec<CheckRecord> {
        let space = self.space();
        let n = self.dim();
        let g = space.g();
        let j = space.j();
        let eta = space.eta();
        let f = self.deta().to_matrix();
        let nij = self.nijenhuis();
        let e = |i: usize| Vector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 });

        // (nabla_{b_i} J) b_y as columns
        let nabla_j: Vec<Mat> = (0..n)
            .map(|i| {
                let x = e(i);
                let mut m = Mat::zeros(n, n);
                for y in 0..n {
                    let yv = e(y);
                    let col = self.lc_derivative(&x, &(j * &yv)) - j * self.lc_derivative(&x, &yv);
                    m.set_column(y, &col);
                }
                m
            })
            .collect();

        let mut worst = 0.0_f64;
        for x in 0..n {
            let lhs_m = nabla_j[x].transpose() * g * 2.0; // [y, z] = 2 g((nabla_x J) b_y, b_z)
            for y in 0..n {
                for z in 0..n {
                    let four_n: f64 =
                        (0..n).map(|a| j[(a, x)] * nij.get(a, y, z)).sum::<f64>() * 4.0;
                    let deta_jy_x: f64 = (0..n).map(|a| j[(a, y)] * f[(a, x)]).sum();
                    let deta_x_jz: f64 = (0..n).map(|a| f[(x, a)] * j[(a, z)]).sum();
                    let rhs = four_n + deta_jy_x * eta[z] + deta_x_jz * eta[y];
                    worst = worst.max((lhs_m[(y, z)] - rhs).abs());
                }
            }
        }
        let xi = space.xi();
        let mut nabla_xi_j = Mat::zeros(n, n);
        for (i, m) in nabla_j.iter().enumerate() {
            nabla_xi_j += m * xi[i];
        }
        vec![
            CheckRecord::new(
                "nabla_j_formula",
                "2g((nabla_X J)Y,Z) = g(JX,4N(Y,Z)) + deta(JY,X)eta(Z) + deta(X,JZ)eta(Y)",
                worst,
                tol,
            ),
            CheckRecord::new("nabla_xi_j", "nabla_xi J = 0", max_abs(&nabla_xi_j), tol),
        ]
    }

    /// The structure identities of the Nijenhuis tensor and of `nabla F`.
    pub fn nf_checks(&self, tol: f64) -> Vec<CheckRecord> {
        let space = self.space();
        let n = self.dim();
        let g = space.g();
        let j = space.j();
        let p = space.contact_projection();
        let xi = space.xi();
        let f = TwoForm::from_matrix(&space.kahler());
        let fm = space.kahler();
        let nij = self.nijenhuis();
        let n02 = self.nijenhuis_02();
        let sj = self.script_j();
        let j_sj = j * sj;
        let nf = self.nabla_f();

        let n1 = n02 - &(reeb_tensor(space, &f) * 0.25) - wedge_eta_endo(space, &j_sj) * 0.25;
        let n1 = (nij - &n1).max_abs();
        let n_endo = endo_block(space, nij);
        let n_endo_dev = max_abs(&(&n_endo + &j_sj * 0.25));
        let n2 = max_abs_vec(&trace(space, nij));
        let n3 = bianchi(n02).max_abs();

        let (f20, f02) = parts_20_02(space, nf);
        let f11 = part_11(space, nf);
        let xi_slot = Mat::from_fn(n, n, |y, z| (0..n).map(|a| xi[a] * nf.get(a, y, z)).sum());
        let f1 = f11.max_abs().max(f20.max_abs()).max(max_abs(&xi_slot));
        let two_n02_j = value_j(space, n02) * 2.0;
        let f2 = (&f02 - &two_n02_j).max_abs();

        let nf_endo = endo_block(space, nf);
        let lhs = p.transpose() * nf_endo.transpose() * g * p;
        let rhs = p.transpose() * (n_endo.transpose() * g * j * 2.0 + &fm * j * 0.5) * p;
        let f3 = max_abs(&(lhs - rhs));
        let f4 = (nf - &(&two_n02_j + &wedge_eta_endo(space, &nf_endo))).max_abs();
        let closed = bianchi(nf).max_abs();

        let sym = max_abs(&(g * sj - (g * sj).transpose()));
        let anti = max_abs(&(j * sj + sj * j));
        vec![
            CheckRecord::new(
                "nijenhuis_split",
                "N = N^{0,2} - 1/4 xi(x)deta - 1/4 eta^(J L_xi J)",
                n1.max(n_endo_dev),
                tol,
            ),
            CheckRecord::new("nijenhuis_trace_free", "tr N = 0", n2, tol),
            CheckRecord::new("nijenhuis_02_bianchi", "b N^{0,2} = 0", n3, tol),
            CheckRecord::new(
                "nabla_f_vanishing_parts",
                "(nabla F)^{1,1} = (nabla F)^{2,0} = 0, nabla_xi F = 0",
                f1,
                tol,
            ),
            CheckRecord::new(
                "nabla_f_02",
                "(nabla F)^{0,2}(X;Y,Z) = 2 N^{0,2}(JX;Y,Z)",
                f2,
                tol,
            ),
            CheckRecord::new(
                "nabla_f_endo",
                "g((nabla F)^1 X, Y) = g(JY, 2 N^1 X) + 1/2 deta(X, JY)",
                f3,
                tol,
            ),
            CheckRecord::new(
                "nabla_f_split",
                "nabla F = 2 N^{0,2}(J.;.,.) + eta ^ (nabla F)^1",
                f4,
                tol,
            ),
            CheckRecord::new("nabla_f_closed", "b(nabla F) = 0", closed, tol),
            CheckRecord::new(
                "script_j_symmetric",
                "g(L_xi J X, Y) = g(X, L_xi J Y)",
                sym,
                tol,
            ),
            CheckRecord::new("script_j_anticommutes", "J L_xi J = -L_xi J J", anti, tol),
        ]
    }
}
