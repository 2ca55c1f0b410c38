//! Adapted connections built from their free torsion data `(omega, B, Phi)`.
//!
//! The torsion of the connection with data `(omega, B, Phi)` is
//! `T = N^{0,2} + 9/8 omega - 3/8 M omega + B + xi (x) d eta - 1/2 eta ^ (J L_xi J) + eta ^ Phi`
//! and its potential `A = nabla - nabla^g` is `A = -T + 3/2 b T`, with inverse `T = -A + 3 b A`.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{
    self, bianchi, compose, decompose, eta_wedge, mop, norm, plus_part, plus_violation, random_11s,
    random_plus, random_skew_j, reeb_tensor, relative, trace, violation_11s, violation_skew_j,
    wedge_eta_endo, ThreeForm, VectorValuedTwoForm, MEMBERSHIP_TOL,
};
use crate::linalg::{lstsq, max_abs, max_abs_vec, rank, Mat, Vector};
use crate::model::LieContactModel;
use crate::report::CheckRecord;
use crate::space::{ContactMetricSpace, ValidationReport, VALIDATION_TOL};
use crate::tensor::Dense3;

/// Free data of an adapted connection: `omega in Omega^+`, `B in Omega^{1,1}_s`,
/// `Phi in End^J_-`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedData {
    pub omega: ThreeForm,
    pub b: VectorValuedTwoForm,
    pub phi: Mat,
}

impl AdaptedData {
    /// All free slots zero: the generalized Tanaka-Webster connection.
    pub fn tanaka_webster(n: usize) -> Self {
        Self {
            omega: ThreeForm::zeros(n),
            b: VectorValuedTwoForm::zeros(n),
            phi: Mat::zeros(n, n),
        }
    }

    /// `omega = 0`, `B = 0`, `Phi = -J/2`: Dirac equivalent to the Levi-Civita connection.
    pub fn lc_equivalent(space: &ContactMetricSpace) -> Self {
        Self {
            phi: space.j() * -0.5,
            ..Self::tanaka_webster(space.dim())
        }
    }

    /// Projects arbitrary `(omega, B, Phi)` onto the admissible subspaces.
    pub fn project(
        space: &ContactMetricSpace,
        omega: &ThreeForm,
        b: &VectorValuedTwoForm,
        phi: &Mat,
    ) -> Self {
        let c11 = forms::part_11(space, b);
        Self {
            omega: plus_part(space, omega),
            b: &c11 - &forms::a_part(space, &c11),
            phi: forms::project_skew_j(space, phi),
        }
    }

    /// Standard normal draws projected onto the admissible subspaces.
    pub fn random(space: &ContactMetricSpace, rng: &mut impl Rng) -> Self {
        Self {
            omega: random_plus(space, rng),
            b: random_11s(space, rng),
            phi: random_skew_j(space, rng),
        }
    }

    /// Random data with `tr B = 3/8 tr M omega`, i.e. a nice connection.
    pub fn random_nice(space: &ContactMetricSpace, rng: &mut impl Rng) -> Result<Self> {
        let mut data = Self::random(space, rng);
        let target = nice_trace(space, &data.omega);
        data.b = with_trace(space, &data.b, &target)?;
        Ok(data)
    }

    /// Relative distance of each slot from its subspace.
    pub fn violations(&self, space: &ContactMetricSpace) -> [(&'static str, f64); 3] {
        [
            ("omega", plus_violation(space, &self.omega)),
            ("B", violation_11s(space, &self.b)),
            ("Phi", violation_skew_j(space, &self.phi)),
        ]
    }

    /// Fails with the first slot outside its subspace.
    pub fn check(&self, space: &ContactMetricSpace) -> Result<()> {
        let n = space.dim();
        if self.omega.dim() != n
            || self.b.dim() != n
            || self.phi.nrows() != n
            || self.phi.ncols() != n
        {
            return Err(Error::Dimension {
                what: "adapted data",
                expected: n,
                found: self.b.dim(),
            });
        }
        for (slot, violation) in self.violations(space) {
            if violation.is_nan() || violation > MEMBERSHIP_TOL {
                return Err(Error::Membership { slot, violation });
            }
        }
        Ok(())
    }

    /// Largest componentwise difference across the three slots.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.omega - &other.omega)
            .max_abs()
            .max((&self.b - &other.b).max_abs())
            .max(max_abs(&(&self.phi - &other.phi)))
    }
}

/// On-disk form of [`AdaptedData`], with indices in the model frame.
///
/// An `omega` entry `[i, j, k, v]` sets `omega_ijk = v` and its antisymmetric
/// images; a `B` entry sets `B(i; j, k) = v` and `B(i; k, j) = -v`; `Phi` is a
/// row-major table. Absent fields are zero.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdaptedDataFile {
    pub schema: u32,
    #[serde(default)]
    pub omega: Vec<(usize, usize, usize, f64)>,
    #[serde(default, rename = "B")]
    pub b: Vec<(usize, usize, usize, f64)>,
    #[serde(default, rename = "Phi")]
    pub phi: Option<Vec<Vec<f64>>>,
}

impl AdaptedDataFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    /// Converts to data in dimension `n`; membership is not checked here.
    pub fn into_data(self, n: usize) -> Result<AdaptedData> {
        if self.schema != crate::report::REPORT_SCHEMA {
            return Err(Error::Schema(format!(
                "unsupported schema version {}",
                self.schema
            )));
        }
        let mut data = AdaptedData::tanaka_webster(n);
        let mut seen = HashSet::new();
        let mut omega = vec![0.0; n * n * n];
        for (pos, &(i, j, k, v)) in self.omega.iter().enumerate() {
            if i >= n || j >= n || k >= n || !v.is_finite() {
                return Err(Error::Schema(format!(
                    "omega[{pos}]: index out of range or non-finite value"
                )));
            }
            let mut key = [i, j, k];
            key.sort_unstable();
            if key[0] == key[1] || key[1] == key[2] {
                if v != 0.0 {
                    return Err(Error::Schema(format!(
                        "omega[{pos}]: repeated index with nonzero value"
                    )));
                }
                continue;
            }
            if !seen.insert(key) {
                return Err(Error::Schema(format!("omega[{pos}]: duplicate entry")));
            }
            omega[(i * n + j) * n + k] = v;
        }
        // sign of the stored permutation relative to the sorted one
        data.omega = ThreeForm::from_fn(n, |a, b, c| {
            let perms = [
                (a, b, c, 1.0),
                (b, c, a, 1.0),
                (c, a, b, 1.0),
                (b, a, c, -1.0),
                (a, c, b, -1.0),
                (c, b, a, -1.0),
            ];
            perms
                .iter()
                .map(|&(x, y, z, s)| s * omega[(x * n + y) * n + z])
                .sum()
        });

        let mut seen = HashSet::new();
        for (pos, &(i, j, k, v)) in self.b.iter().enumerate() {
            if i >= n || j >= n || k >= n || !v.is_finite() {
                return Err(Error::Schema(format!(
                    "B[{pos}]: index out of range or non-finite value"
                )));
            }
            if j == k {
                if v != 0.0 {
                    return Err(Error::Schema(format!("B[{pos}]: B(i; j, j) must vanish")));
                }
                continue;
            }
            if !seen.insert((i, j.min(k), j.max(k))) {
                return Err(Error::Schema(format!("B[{pos}]: duplicate entry")));
            }
            data.b.set(i, j, k, v);
        }

        if let Some(rows) = self.phi {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Schema(format!("Phi must be a {n}x{n} table")));
            }
            if rows.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Schema("Phi has a non-finite entry".into()));
            }
            data.phi = Mat::from_fn(n, n, |a, b| rows[a][b]);
        }
        Ok(data)
    }
}

/// `3/8 tr M omega`: the trace a nice connection's `B` must have.
pub fn nice_trace(space: &ContactMetricSpace, omega: &ThreeForm) -> Vector {
    trace(space, &mop(space, &omega.embed())) * 0.375
}

/// Basis of `Omega^{1,1}_s` obtained by projecting the coordinate basis,
/// together with the matrix of the trace map on it.
fn s_basis(space: &ContactMetricSpace) -> (Vec<VectorValuedTwoForm>, Mat) {
    let n = space.dim();
    let len = VectorValuedTwoForm::zeros(n).components().len();
    let basis: Vec<VectorValuedTwoForm> = (0..len)
        .map(|k| {
            let mut i = 0;
            let unit = VectorValuedTwoForm::from_fn(n, |_, _, _| {
                i += 1;
                if i - 1 == k {
                    1.0
                } else {
                    0.0
                }
            });
            let c11 = forms::part_11(space, &unit);
            &c11 - &forms::a_part(space, &c11)
        })
        .collect();
    let traces = Mat::from_fn(n, len, |r, k| trace(space, &basis[k])[r]);
    (basis, traces)
}

/// The element of `Omega^{1,1}_s` closest to `b` (least-squares correction over
/// the projected coordinate basis) whose trace is `target`.
pub fn with_trace(
    space: &ContactMetricSpace,
    b: &VectorValuedTwoForm,
    target: &Vector,
) -> Result<VectorValuedTwoForm> {
    let (basis, traces) = s_basis(space);
    let rhs = target - trace(space, b);
    let coef = lstsq(&traces, &rhs, 1e-6);
    let mut out = b.clone();
    for (k, e) in basis.iter().enumerate() {
        if coef[k] != 0.0 {
            out = &out + &(e * coef[k]);
        }
    }
    let miss = max_abs_vec(&(trace(space, &out) - target));
    if miss > 1e-10 * max_abs_vec(target).max(1.0) {
        return Err(Error::Precondition(format!(
            "trace {miss:.3e} away from target is not reachable in Omega^{{1,1}}_s"
        )));
    }
    Ok(out)
}

/// Dimension of the trace-free part of `Omega^{1,1}_s`.
pub fn trace_free_s_dimension(space: &ContactMetricSpace) -> usize {
    let (basis, traces) = s_basis(space);
    let len = basis.len();
    let stack = Mat::from_fn(len, len, |r, c| basis[c].components()[r]);
    let rank_s = rank(&stack, 1e-6);
    let rank_tr = rank(&traces, 1e-6);
    rank_s - rank_tr
}

/// `T = N^{0,2} + 9/8 omega - 3/8 M omega + B + xi (x) d eta - 1/2 eta ^ (J L_xi J) + eta ^ Phi`.
pub fn torsion_from_data(
    model: &LieContactModel,
    data: &AdaptedData,
) -> Result<VectorValuedTwoForm> {
    let space = model.space();
    data.check(space)?;
    let w = data.omega.embed();
    let j_sj = space.j() * model.script_j();
    let t = model.nijenhuis_02() + &(&w * 1.125) - mop(space, &w) * 0.375
        + data.b.clone()
        + reeb_tensor(space, &model.deta())
        - wedge_eta_endo(space, &j_sj) * 0.5
        + wedge_eta_endo(space, &data.phi);
    Ok(t)
}

/// `A = -T + 3/2 b T`.
pub fn potential_from_torsion(t: &VectorValuedTwoForm) -> VectorValuedTwoForm {
    &bianchi(t).embed() * 1.5 - t.clone()
}

/// `T = -A + 3 b A`.
pub fn torsion_from_potential(a: &VectorValuedTwoForm) -> VectorValuedTwoForm {
    &bianchi(a).embed() * 3.0 - a.clone()
}

/// A metric connection on a left-invariant model, `nabla = nabla^g + A`.
#[derive(Clone, Debug)]
pub struct ConnectionField {
    model: LieContactModel,
    /// `nabla_{b_i} b_j = sum_k gamma.get(k, i, j) b_k`
    gamma: Dense3,
    torsion: VectorValuedTwoForm,
    potential: VectorValuedTwoForm,
}

impl ConnectionField {
    /// The metric connection with torsion `T`; `g(nabla_X Y, Z) = g(nabla^g_X Y, Z) + A(X; Y, Z)`.
    pub fn from_torsion(model: &LieContactModel, t: VectorValuedTwoForm) -> Result<Self> {
        let n = model.dim();
        if t.dim() != n {
            return Err(Error::Dimension {
                what: "torsion",
                expected: n,
                found: t.dim(),
            });
        }
        let a = potential_from_torsion(&t);
        let gi = model.space().g_inv();
        let lc = model.levi_civita();
        let gamma = Dense3::from_fn(n, |k, i, j| {
            lc.get(k, i, j) + (0..n).map(|z| gi[(k, z)] * a.get(i, j, z)).sum::<f64>()
        });
        Ok(Self {
            model: model.clone(),
            gamma,
            torsion: t,
            potential: a,
        })
    }

    pub fn levi_civita(model: &LieContactModel) -> Self {
        Self::from_torsion(model, VectorValuedTwoForm::zeros(model.dim()))
            .expect("dimensions agree")
    }

    /// The adapted connection with free data `data`.
    pub fn adapted(model: &LieContactModel, data: &AdaptedData) -> Result<Self> {
        Self::from_torsion(model, torsion_from_data(model, data)?)
    }

    pub fn tanaka_webster(model: &LieContactModel) -> Self {
        Self::adapted(model, &AdaptedData::tanaka_webster(model.dim()))
            .expect("zero data is admissible")
    }

    pub fn model(&self) -> &LieContactModel {
        &self.model
    }

    pub fn space(&self) -> &ContactMetricSpace {
        self.model.space()
    }

    pub fn gamma(&self) -> &Dense3 {
        &self.gamma
    }

    pub fn torsion(&self) -> &VectorValuedTwoForm {
        &self.torsion
    }

    /// `A(X; Y, Z) = g(A_X Y, Z)`.
    pub fn potential(&self) -> &VectorValuedTwoForm {
        &self.potential
    }

    /// `(Gamma_i)[k, j] = gamma^k_ij`, the matrix of `nabla_{b_i}` on constant fields.
    pub fn gamma_matrix(&self, i: usize) -> Mat {
        let n = self.model.dim();
        Mat::from_fn(n, n, |k, j| self.gamma.get(k, i, j))
    }

    /// `nabla_X Y` for left-invariant `X`, `Y`.
    pub fn derivative(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.model.dim();
        let mut out = Vector::zeros(n);
        for i in 0..n {
            if x[i] != 0.0 {
                out += self.gamma_matrix(i) * y * x[i];
            }
        }
        out
    }

    /// `nabla_X Y - nabla_Y X - [X, Y]` on frame pairs, as `g(W, T(X, Y))`.
    pub fn torsion_from_coefficients(&self) -> VectorValuedTwoForm {
        let n = self.model.dim();
        let g = self.space().g();
        let c = self.model.structure_constants();
        let raw = Dense3::from_fn(n, |k, i, j| {
            self.gamma.get(k, i, j) - self.gamma.get(k, j, i) - c.get(k, i, j)
        });
        VectorValuedTwoForm::from_fn(n, |w, i, j| {
            (0..n).map(|k| g[(w, k)] * raw.get(k, i, j)).sum()
        })
    }

    /// Residuals of `nabla g = 0`, `nabla J = 0`, `nabla eta = 0`, `nabla xi = 0`,
    /// of the potential form `A(X;Y,JZ) + A(X;JY,Z) = -(nabla^g F)(X;Y,Z)` and of
    /// `eta(nabla_X Y) = 0` for `Y` in the contact distribution.
    pub fn check_adapted(&self, tol: f64) -> ValidationReport {
        let space = self.space();
        let n = space.dim();
        let g = space.g();
        let j = space.j();
        let eta = space.eta();
        let xi = space.xi();
        let p = space.contact_projection();

        let mut metric = 0.0_f64;
        let mut nabla_j = 0.0_f64;
        let mut nabla_eta = 0.0_f64;
        let mut nabla_xi = 0.0_f64;
        let mut preserves = 0.0_f64;
        for i in 0..n {
            let gm = self.gamma_matrix(i);
            let low = g * &gm;
            metric = metric.max(max_abs(&(&low + low.transpose())));
            nabla_j = nabla_j.max(max_abs(&(&gm * j - j * &gm)));
            nabla_eta = nabla_eta.max(max_abs_vec(&(gm.transpose() * eta)));
            nabla_xi = nabla_xi.max(max_abs_vec(&(&gm * xi)));
            preserves = preserves.max(max_abs_vec(&((eta.transpose() * &gm * p).transpose())));
        }

        let a = &self.potential;
        let lhs = compose(a, [None, None, Some(j)]);
        let lhs2 = compose(a, [None, Some(j), None]);
        let nf = self.model.nabla_f();
        let mut aadap = 0.0_f64;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    aadap =
                        aadap.max((lhs.get(x, y, z) + lhs2.get(x, y, z) + nf.get(x, y, z)).abs());
                }
            }
        }
        let inverse = (&torsion_from_potential(a) - &self.torsion).max_abs();
        let torsion = (&self.torsion_from_coefficients() - &self.torsion).max_abs();

        ValidationReport {
            tolerance: tol,
            checks: vec![
                CheckRecord::new("nabla_g", "nabla g = 0", metric, tol),
                CheckRecord::new("nabla_j", "nabla J = 0", nabla_j, tol),
                CheckRecord::new("nabla_eta", "nabla eta = 0", nabla_eta, tol),
                CheckRecord::new("nabla_xi", "nabla xi = 0", nabla_xi, tol),
                CheckRecord::new(
                    "potential_adapted",
                    "A(X;Y,JZ) + A(X;JY,Z) = -(nabla^g F)(X;Y,Z)",
                    aadap,
                    tol,
                ),
                CheckRecord::new(
                    "preserves_contact",
                    "eta(nabla_X Y) = 0 for Y in C",
                    preserves,
                    tol,
                ),
                CheckRecord::new("potential_inverse", "T = -A + 3 b A", inverse, tol),
                CheckRecord::new(
                    "torsion_coefficients",
                    "T(X,Y) = nabla_X Y - nabla_Y X - [X,Y]",
                    torsion,
                    tol,
                ),
            ],
        }
    }

    fn require_adapted(&self) -> Result<()> {
        let report = self.check_adapted(VALIDATION_TOL);
        if report.passed() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "connection is not adapted; failing: {}",
                report.failing_ids().join(", ")
            )))
        }
    }

    /// Recovers `((b T)^+, T^{1,1}_s, T^1_-)` from an adapted connection.
    pub fn extract_data(&self) -> Result<AdaptedData> {
        self.require_adapted()?;
        let space = self.space();
        let d = decompose(space, &self.torsion);
        Ok(AdaptedData {
            omega: plus_part(space, &bianchi(&self.torsion)),
            b: d.c11_s,
            phi: d.endo_minus.0,
        })
    }

    pub fn trace_torsion(&self) -> Vector {
        trace(self.space(), &self.torsion)
    }

    pub fn bianchi_torsion(&self) -> ThreeForm {
        bianchi(&self.torsion)
    }

    /// `T(X, Y) = T(JX, JY)` for `X, Y` in the contact distribution, the real
    /// form of `T(C^{1,0}, C^{1,0}) = 0`; relative residual.
    pub fn cr_residual(&self) -> f64 {
        let space = self.space();
        let p = space.contact_projection();
        let t = &self.torsion;
        let tp = VectorValuedTwoForm::from_skew_dense(&compose(t, [None, Some(p), Some(p)]));
        relative((&tp - &mop(space, t)).max_abs(), norm(space, t))
    }

    /// Whether the connection is a CR connection; defined on CR structures
    /// (`N^{0,2} = 0`), where it is equivalent to `omega = 0`. Both criteria
    /// are evaluated and must agree.
    pub fn is_cr_connection(&self) -> Result<bool> {
        let space = self.space();
        let n02 = relative(
            self.model.nijenhuis_02().max_abs(),
            norm(space, self.model.nijenhuis()).max(1.0),
        );
        if n02 > MEMBERSHIP_TOL {
            return Err(Error::Precondition(format!(
                "CR connections need N^{{0,2}} = 0, found {n02:.3e} on {}",
                self.model.name()
            )));
        }
        let data = self.extract_data()?;
        let scale = norm(space, &self.torsion);
        let direct = self.cr_residual() <= MEMBERSHIP_TOL;
        let by_omega = relative(data.omega.max_abs(), scale) <= MEMBERSHIP_TOL;
        if direct != by_omega {
            return Err(Error::Inconsistent {
                check: "cr_connection",
                detail: format!("T(C10, C10) = 0 is {direct} but omega = 0 is {by_omega}"),
            });
        }
        Ok(direct)
    }
}

/// `tr T = -3/8 tr M omega + tr B`.
pub fn trace_formula(space: &ContactMetricSpace, data: &AdaptedData) -> Vector {
    trace(space, &data.b) - nice_trace(space, &data.omega)
}

/// `b T = omega + 1/3 eta ^ d eta + b(eta ^ Phi)`.
pub fn bianchi_formula(model: &LieContactModel, data: &AdaptedData) -> ThreeForm {
    let space = model.space();
    &(&data.omega + &(eta_wedge(space, &model.deta()) * (1.0 / 3.0)))
        + &bianchi(&wedge_eta_endo(space, &data.phi))
}

/// Torsion parts that do not depend on the connection:
/// `T^{0,2}`, `T^2_+`, `T^2_-`, `T^1_+`, `T^1_R`, compared with
/// `N^{0,2}`, `d eta`, `0`, `-1/2 J L_xi J`, `0`.
pub fn fixed_slot_residuals(
    model: &LieContactModel,
    t: &VectorValuedTwoForm,
) -> [(&'static str, f64); 5] {
    let space = model.space();
    let d = decompose(space, t);
    let deta = forms::contact_two_form(space, &model.deta());
    let half_jsj = space.j() * model.script_j() * -0.5;
    [
        ("T02", (&d.c02 - model.nijenhuis_02()).max_abs()),
        ("T2+", (&d.xi_plus - &deta).max_abs()),
        ("T2-", d.xi_minus.max_abs()),
        ("T1+", max_abs(&(&d.endo_plus.0 - half_jsj))),
        ("T1R", max_abs_vec(&d.reeb)),
    ]
}

/// `b(T^{2,0} - T^{1,1}_a)`, which vanishes for adapted torsion.
pub fn b20_minus_b11a(space: &ContactMetricSpace, t: &VectorValuedTwoForm) -> ThreeForm {
    let d = decompose(space, t);
    bianchi(&(&d.c20 - &d.c11_a))
}

/// `T(xi; xi, X)` over the frame.
pub fn reeb_reeb_torsion(space: &ContactMetricSpace, t: &VectorValuedTwoForm) -> f64 {
    let xi = space.xi();
    let n = space.dim();
    let mut worst = 0.0_f64;
    for x in 0..n {
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                s += xi[a] * xi[b] * t.get(a, b, x);
            }
        }
        worst = worst.max(s.abs());
    }
    worst
}

/// The torsion displayed for the generalized Tanaka-Webster connection in the
/// form `N + xi (x) d eta + 1/4 eta ^ d eta + 1/4 eta ^ (J - J L_xi J)`.
pub fn tanaka_webster_display(model: &LieContactModel) -> VectorValuedTwoForm {
    let space = model.space();
    let deta = model.deta();
    let j = space.j();
    let j_sj = j * model.script_j();
    model.nijenhuis()
        + &reeb_tensor(space, &deta)
        + eta_wedge(space, &deta).embed() * 0.25
        + wedge_eta_endo(space, &(j - j_sj)) * 0.25
}

/// The simplified generalized Tanaka-Webster torsion
/// `N^{0,2} + xi (x) d eta - 1/2 eta ^ (J L_xi J)`.
pub fn tanaka_webster_simplified(model: &LieContactModel) -> VectorValuedTwoForm {
    let space = model.space();
    let j_sj = space.j() * model.script_j();
    model.nijenhuis_02() + &reeb_tensor(space, &model.deta()) - wedge_eta_endo(space, &j_sj) * 0.5
}
