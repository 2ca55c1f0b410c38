//! Clifford multiplication at a point and the Dirac operator comparison of
//! adapted connections.
//!
//! Gamma matrices are `gamma_i = i Gamma_i` with the Hermitian tensor-product
//! generators
//! `Gamma_{2k-1} = sz^(k-1) (x) sx (x) Id`, `Gamma_{2k} = sz^(k-1) (x) sy (x) Id`,
//! `Gamma_n = sz^m`, so `gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij` and
//! every `gamma_i` is skew-adjoint. The Dirac operators of `nabla` and of the
//! Levi-Civita connection differ by the endomorphism
//! `-1/2 c(tr A) + 3/2 c(b A)`, independently of any auxiliary connection on a
//! determinant line, so connections are compared through it pointwise.

use nalgebra::{Complex, DMatrix};

use crate::connection::ConnectionField;
use crate::error::{Error, Result};
use crate::forms::{bianchi, norm, trace, ThreeForm};
use crate::linalg::{max_abs, max_abs_vec, Mat, Vector};
use crate::space::{ContactMetricSpace, VALIDATION_TOL};

pub type CMat = DMatrix<Complex<f64>>;

/// Tolerance for niceness and Dirac equivalence, scaled by `max(1, |T|)`.
pub const DIRAC_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn cmax_abs(m: &CMat) -> f64 {
    m.iter()
        .fold(0.0_f64, |acc, z| crate::linalg::nan_max(acc, z.norm()))
}

/// An endomorphism of the spinor module.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorEndomorphism(pub CMat);

impl SpinorEndomorphism {
    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn max_abs(&self) -> f64 {
        cmax_abs(&self.0)
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `max |S - S^*|`.
    pub fn self_adjoint_residual(&self) -> f64 {
        cmax_abs(&(&self.0 - self.0.adjoint()))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        cmax_abs(&(&self.0 - &other.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * c(s, 0.0))
    }
}

impl std::ops::Add for SpinorEndomorphism {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

#[derive(Clone, Debug)]
pub struct CliffordRep {
    m: usize,
    gammas: Vec<CMat>,
}

impl CliffordRep {
    pub fn build(m: usize) -> Self {
        assert!(m >= 1, "contact rank must be at least 1");
        let id = CMat::identity(2, 2);
        let sx = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let sy = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let sz = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let product = |k: usize, mid: &CMat| {
            let mut out = CMat::identity(1, 1);
            for slot in 0..m {
                let f = if slot < k {
                    &sz
                } else if slot == k {
                    mid
                } else {
                    &id
                };
                out = out.kronecker(f);
            }
            out
        };
        let mut gammas = Vec::with_capacity(2 * m + 1);
        for k in 0..m {
            gammas.push(product(k, &sx) * c(0.0, 1.0));
            gammas.push(product(k, &sy) * c(0.0, 1.0));
        }
        gammas.push(product(m, &id) * c(0.0, 1.0));
        Self { m, gammas }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.gammas.len()
    }

    pub fn spinor_dim(&self) -> usize {
        1 << self.m
    }

    pub fn gamma(&self, i: usize) -> &CMat {
        &self.gammas[i]
    }

    /// Worst residual of `gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij` and
    /// of `gamma_i^* = -gamma_i`.
    pub fn relation_residual(&self) -> f64 {
        let s = self.spinor_dim();
        let mut worst = 0.0_f64;
        for (i, a) in self.gammas.iter().enumerate() {
            worst = worst.max(cmax_abs(&(a.adjoint() + a)));
            for (j, b) in self.gammas.iter().enumerate() {
                let mut ac = a * b + b * a;
                if i == j {
                    ac += CMat::identity(s, s) * c(2.0, 0.0);
                }
                worst = worst.max(cmax_abs(&ac));
            }
        }
        worst
    }

    fn require_orthonormal(&self, space: &ContactMetricSpace) -> Result<()> {
        if space.dim() != self.dim() {
            return Err(Error::Dimension {
                what: "Clifford module",
                expected: self.dim(),
                found: space.dim(),
            });
        }
        let dev = max_abs(&(space.g() - Mat::identity(space.dim(), space.dim())));
        if dev > VALIDATION_TOL {
            return Err(Error::Precondition(format!(
                "Clifford multiplication needs an orthonormal frame (|g - Id| = {dev:.3e}); use adapted_frame"
            )));
        }
        Ok(())
    }

    /// `c(v) = sum_i v_i gamma_i`, for components in an orthonormal frame.
    pub fn c_vector(&self, space: &ContactMetricSpace, v: &Vector) -> Result<SpinorEndomorphism> {
        self.require_orthonormal(space)?;
        Ok(self.vector_unchecked(v))
    }

    /// `c(w) = sum_{i<j<k} w_ijk gamma_i gamma_j gamma_k`, for components in an orthonormal frame.
    pub fn c_threeform(
        &self,
        space: &ContactMetricSpace,
        w: &ThreeForm,
    ) -> Result<SpinorEndomorphism> {
        self.require_orthonormal(space)?;
        Ok(self.threeform_unchecked(w))
    }

    fn vector_unchecked(&self, v: &Vector) -> SpinorEndomorphism {
        let s = self.spinor_dim();
        let mut out = CMat::zeros(s, s);
        for (i, g) in self.gammas.iter().enumerate() {
            if v[i] != 0.0 {
                out += g * c(v[i], 0.0);
            }
        }
        SpinorEndomorphism(out)
    }

    fn threeform_unchecked(&self, w: &ThreeForm) -> SpinorEndomorphism {
        let n = self.dim();
        let s = self.spinor_dim();
        let mut out = CMat::zeros(s, s);
        for i in 0..n {
            for j in (i + 1)..n {
                let gij = &self.gammas[i] * &self.gammas[j];
                for k in (j + 1)..n {
                    let v = w.get(i, j, k);
                    if v != 0.0 {
                        out += &gij * &self.gammas[k] * c(v, 0.0);
                    }
                }
            }
        }
        SpinorEndomorphism(out)
    }

    /// `-1/2 c(tr A) + 3/2 c(b A)`, evaluated in the adapted orthonormal frame.
    pub fn dirac_difference(&self, conn: &ConnectionField) -> Result<SpinorEndomorphism> {
        let space = conn.space();
        let a = conn.potential();
        let tr = trace(space, a);
        let ba = bianchi(a);
        let (_, tr_on, ba_on) = to_adapted_frame(space, &tr, &ba)?;
        Ok(self.vector_unchecked(&tr_on).scale(-0.5) + self.threeform_unchecked(&ba_on).scale(1.5))
    }

    /// Clifford multiplication by a three-form given in the model frame.
    pub fn c_threeform_in_frame(
        &self,
        space: &ContactMetricSpace,
        w: &ThreeForm,
    ) -> Result<SpinorEndomorphism> {
        let (_, _, w_on) = to_adapted_frame(space, &Vector::zeros(space.dim()), w)?;
        Ok(self.threeform_unchecked(&w_on))
    }

    /// Whether the Dirac operator of an adapted connection is symmetric.
    ///
    /// Evaluates `tr T = 0`, `tr B = 3/8 tr M omega` and self-adjointness of the
    /// difference endomorphism; they must agree.
    pub fn is_nice(&self, conn: &ConnectionField) -> Result<bool> {
        self.nice_criteria(conn)?.agreed()
    }

    pub fn nice_criteria(&self, conn: &ConnectionField) -> Result<NiceCriteria> {
        let space = conn.space();
        let data = conn.extract_data()?;
        let scale = norm(space, conn.torsion()).max(1.0);
        let trace_t = max_abs_vec(&conn.trace_torsion());
        let by_data = max_abs_vec(&crate::connection::trace_formula(space, &data));
        let adjoint = self.dirac_difference(conn)?.self_adjoint_residual();
        Ok(NiceCriteria {
            trace_t,
            trace_b: by_data,
            self_adjoint: adjoint,
            threshold: DIRAC_TOL * scale,
        })
    }

    /// Whether two nice connections have the same Dirac operator.
    ///
    /// Evaluates `b T_1 = b T_2`, equality of `(omega, Phi)` and equality of
    /// the difference endomorphisms; they must agree.
    pub fn dirac_equivalent(
        &self,
        first: &ConnectionField,
        second: &ConnectionField,
    ) -> Result<bool> {
        if first.space() != second.space() {
            return Err(Error::Precondition(
                "connections live on different structures".into(),
            ));
        }
        for conn in [first, second] {
            if !self.is_nice(conn)? {
                return Err(Error::Precondition(format!(
                    "connection on {} is not nice",
                    conn.model().name()
                )));
            }
        }
        let scale = norm(first.space(), first.torsion())
            .max(norm(second.space(), second.torsion()))
            .max(1.0);
        let threshold = DIRAC_TOL * scale;
        let by_bianchi =
            (&first.bianchi_torsion() - &second.bianchi_torsion()).max_abs() <= threshold;
        let d1 = first.extract_data()?;
        let d2 = second.extract_data()?;
        let by_data = (&d1.omega - &d2.omega)
            .max_abs()
            .max(max_abs(&(&d1.phi - &d2.phi)))
            <= threshold;
        let by_operator = self
            .dirac_difference(first)?
            .distance(&self.dirac_difference(second)?)
            <= threshold;
        if by_bianchi != by_data || by_bianchi != by_operator {
            return Err(Error::Inconsistent {
                check: "dirac_equivalent",
                detail: format!(
                    "b T: {by_bianchi}, (omega, Phi): {by_data}, operator: {by_operator}"
                ),
            });
        }
        Ok(by_bianchi)
    }
}

/// The three niceness residuals of an adapted connection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NiceCriteria {
    /// `max |tr T|`
    pub trace_t: f64,
    /// `max |tr B - 3/8 tr M omega|`
    pub trace_b: f64,
    /// `max |D - D^*|` for the difference endomorphism `D`
    pub self_adjoint: f64,
    pub threshold: f64,
}

impl NiceCriteria {
    pub fn verdicts(&self) -> [bool; 3] {
        [self.trace_t, self.trace_b, self.self_adjoint].map(|v| v <= self.threshold)
    }

    pub fn agreed(&self) -> Result<bool> {
        let [a, b, c] = self.verdicts();
        if a != b || a != c {
            return Err(Error::Inconsistent {
                check: "nice",
                detail: format!("tr T = 0: {a}, tr B = 3/8 tr M omega: {b}, self-adjoint: {c}"),
            });
        }
        Ok(a)
    }
}

/// Components of a covector and a three-form in the adapted orthonormal frame.
fn to_adapted_frame(
    space: &ContactMetricSpace,
    v: &Vector,
    w: &ThreeForm,
) -> Result<(Mat, Vector, ThreeForm)> {
    let p = space.adapted_frame()?.basis;
    let n = space.dim();
    let v_on = p.transpose() * v;
    let dense = w
        .embed()
        .to_dense()
        .compose_slot(0, &p)
        .compose_slot(1, &p)
        .compose_slot(2, &p);
    let w_on = ThreeForm::from_fn(n, |a, b, c| dense.get(a, b, c));
    Ok((p, v_on, w_on))
}
