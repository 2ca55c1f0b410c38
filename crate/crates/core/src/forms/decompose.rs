use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};
use crate::random;
use crate::space::ContactMetricSpace;

use super::ops::{
    bianchi, compose, contact_part, m_two_form, mop, norm, reeb_eta_wedge, reeb_tensor,
    wedge_eta_endo,
};
use super::types::{EndoOnContact, ThreeForm, TwoForm, VectorValuedTwoForm};

/// Membership tolerance, relative to the norm of the input.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Inputs below this norm count as zero and belong to every subspace.
pub const ZERO_NORM: f64 = 1e-12;

/// `violation / scale`, or zero when the input is numerically zero.
pub fn relative(violation: f64, scale: f64) -> f64 {
    if scale < ZERO_NORM {
        0.0
    } else {
        violation / scale
    }
}

/// `B(J W; J Y, Z)`, the involution separating `(2,0)` from `(0,2)` on the
/// `-1` eigenspace of `M`.
fn s_involution(space: &ContactMetricSpace, d: &VectorValuedTwoForm) -> VectorValuedTwoForm {
    let j = space.j();
    VectorValuedTwoForm::skew_part(&compose(d, [Some(j), Some(j), None]))
}

/// The `(1,1)` part of the contact block, `(B_c + M B_c) / 2`.
pub fn part_11(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> VectorValuedTwoForm {
    let bc = contact_part(space, b);
    let mb = mop(space, &bc);
    (&bc + &mb) * 0.5
}

/// The `(2,0)` and `(0,2)` parts of the contact block.
pub fn parts_20_02(
    space: &ContactMetricSpace,
    b: &VectorValuedTwoForm,
) -> (VectorValuedTwoForm, VectorValuedTwoForm) {
    let bc = contact_part(space, b);
    let d = (&bc - &mop(space, &bc)) * 0.5;
    let sd = s_involution(space, &d);
    ((&d + &sd) * 0.5, (&d - &sd) * 0.5)
}

/// The `(0,2)` part alone.
pub fn part_02(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> VectorValuedTwoForm {
    parts_20_02(space, b).1
}

/// `A(B) = 3/4 (b B + M b B)` re-embedded; the projection of a `(1,1)` form onto `Omega^{1,1}_a`.
pub fn a_part(space: &ContactMetricSpace, b11: &VectorValuedTwoForm) -> VectorValuedTwoForm {
    let w = bianchi(b11).embed();
    (&w + &mop(space, &w)) * 0.75
}

/// The eight-part splitting of a vector valued two-form, with the `(1,1)` part
/// further split into its `b`-free and `b`-determined pieces.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub c20: VectorValuedTwoForm,
    pub c11: VectorValuedTwoForm,
    pub c02: VectorValuedTwoForm,
    pub c11_s: VectorValuedTwoForm,
    pub c11_a: VectorValuedTwoForm,
    /// `alpha(Y, Z) = B(xi; Y, Z)` on the contact distribution, `M`-even part.
    pub xi_plus: TwoForm,
    /// `M`-odd part of the same block.
    pub xi_minus: TwoForm,
    /// `g(X, Phi Z) = B(X; xi, Z)` on the contact distribution, `g`-symmetric part.
    pub endo_plus: EndoOnContact,
    /// `g`-skew part of the same block.
    pub endo_minus: EndoOnContact,
    /// `B(xi; xi, Z)` on the contact distribution.
    pub reeb: Vector,
}

/// Names of the eight parts in canonical order.
pub const PART_NAMES: [&str; 8] = ["2,0", "1,1", "0,2", "xi+", "xi-", "endo+", "endo-", "reeb"];

pub fn decompose(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> Decomposition {
    let n = b.dim();
    let xi = space.xi();
    let p = space.contact_projection();

    let c11 = part_11(space, b);
    let (c20, c02) = parts_20_02(space, b);
    let c11_a = a_part(space, &c11);
    let c11_s = &c11 - &c11_a;

    let bxi = Mat::from_fn(n, n, |y, z| (0..n).map(|a| xi[a] * b.get(a, y, z)).sum());
    let alpha = TwoForm::from_matrix(&(p.transpose() * &bxi * p));
    let m_alpha = m_two_form(space, &alpha);
    let xi_plus = (&alpha + &m_alpha) * 0.5;
    let xi_minus = (&alpha - &m_alpha) * 0.5;

    let beta = Mat::from_fn(n, n, |x, z| (0..n).map(|e| xi[e] * b.get(x, e, z)).sum());
    let beta = p.transpose() * beta * p;
    let sym = (&beta + beta.transpose()) * 0.5;
    let skew = (&beta - beta.transpose()) * 0.5;
    let endo_plus = EndoOnContact(space.g_inv() * sym);
    let endo_minus = EndoOnContact(space.g_inv() * skew);

    let rho = Vector::from_fn(n, |z, _| {
        (0..n)
            .map(|a| xi[a] * (0..n).map(|e| xi[e] * b.get(a, e, z)).sum::<f64>())
            .sum()
    });
    let reeb = p.transpose() * rho;

    Decomposition {
        c20,
        c11,
        c02,
        c11_s,
        c11_a,
        xi_plus,
        xi_minus,
        endo_plus,
        endo_minus,
        reeb,
    }
}

impl Decomposition {
    /// The eight parts embedded back as vector valued two-forms, in [`PART_NAMES`] order.
    pub fn embedded(&self, space: &ContactMetricSpace) -> [VectorValuedTwoForm; 8] {
        [
            self.c20.clone(),
            self.c11.clone(),
            self.c02.clone(),
            reeb_tensor(space, &self.xi_plus),
            reeb_tensor(space, &self.xi_minus),
            wedge_eta_endo(space, &self.endo_plus.0),
            wedge_eta_endo(space, &self.endo_minus.0),
            reeb_eta_wedge(space, &self.reeb),
        ]
    }

    pub fn reassemble(&self, space: &ContactMetricSpace) -> VectorValuedTwoForm {
        let parts = self.embedded(space);
        let mut it = parts.into_iter();
        let first = it.next().expect("eight parts");
        it.fold(first, |acc, x| &acc + &x)
    }

    /// Absolute violation of each defining relation, by part name; includes
    /// the `s`/`a` sub-split of `(1,1)`.
    pub fn membership_violations(&self, space: &ContactMetricSpace) -> Vec<(&'static str, f64)> {
        let j = space.j();
        let jt = j.transpose();
        let g = space.g();
        let eta = space.eta();
        let xi = space.xi();
        let p = space.contact_projection();

        let support = |b: &VectorValuedTwoForm| (b - &contact_part(space, b)).max_abs();
        let type_rel = |b: &VectorValuedTwoForm, sign: f64| {
            let t1 = compose(b, [None, Some(j), None]);
            let t2 = compose(b, [Some(j), None, None]);
            let mut m = 0.0_f64;
            for (x, y) in t1.as_slice().iter().zip(t2.as_slice()) {
                m = m.max((x + sign * y).abs());
            }
            m
        };
        let m_fixed = |b: &VectorValuedTwoForm, sign: f64| (&mop(space, b) - &(b * sign)).max_abs();

        let two_form = |a: &TwoForm, sign: f64| {
            let m = a.to_matrix();
            let rel = linalg::max_abs(&(&jt * &m * j - &m * sign));
            let sup = linalg::max_abs(&(m.clone() - p.transpose() * &m * p));
            rel.max(sup)
        };
        let endo = |phi: &Mat, sign: f64| {
            let beta = g * phi;
            let rel = linalg::max_abs(&(&beta - beta.transpose() * sign));
            let sup =
                linalg::max_abs_vec(&(phi * xi)).max(linalg::max_abs_vec(&(phi.transpose() * eta)));
            rel.max(sup)
        };

        let s_bianchi = bianchi(&self.c11_s).max_abs();
        let a_rel = (&self.c11_a - &a_part(space, &self.c11_a)).max_abs();

        vec![
            ("2,0", type_rel(&self.c20, 1.0).max(support(&self.c20))),
            ("1,1", m_fixed(&self.c11, 1.0).max(support(&self.c11))),
            (
                "1,1_s",
                m_fixed(&self.c11_s, 1.0)
                    .max(support(&self.c11_s))
                    .max(s_bianchi),
            ),
            (
                "1,1_a",
                m_fixed(&self.c11_a, 1.0)
                    .max(support(&self.c11_a))
                    .max(a_rel),
            ),
            ("0,2", type_rel(&self.c02, -1.0).max(support(&self.c02))),
            ("xi+", two_form(&self.xi_plus, 1.0)),
            ("xi-", two_form(&self.xi_minus, -1.0)),
            ("endo+", endo(&self.endo_plus.0, 1.0)),
            ("endo-", endo(&self.endo_minus.0, -1.0)),
            ("reeb", self.reeb.dot(xi).abs()),
        ]
    }
}

fn contact_violation(space: &ContactMetricSpace, w: &ThreeForm) -> f64 {
    let e = w.embed();
    (&e - &contact_part(space, &e)).max_abs()
}

/// `omega^-`: the `(0,2)` part of a three-form on the contact distribution, as a three-form.
pub fn minus_part(space: &ContactMetricSpace, w: &ThreeForm) -> ThreeForm {
    bianchi(&part_02(space, &w.embed()))
}

/// `omega^+ = omega_c - omega_c^-` after restricting to the contact distribution; no checks.
pub fn plus_part(space: &ContactMetricSpace, w: &ThreeForm) -> ThreeForm {
    let wc = bianchi(&contact_part(space, &w.embed()));
    let minus = minus_part(space, &wc);
    &wc - &minus
}

/// Splits a three-form on the contact distribution into `(omega^+, omega^-)`.
pub fn split_pm_threeform(
    space: &ContactMetricSpace,
    w: &ThreeForm,
) -> Result<(ThreeForm, ThreeForm)> {
    let scale = norm(space, &w.embed());
    let v = relative(contact_violation(space, w), scale);
    if v > MEMBERSHIP_TOL {
        return Err(Error::Precondition(format!(
            "three-form has components along xi (relative {v:.3e})"
        )));
    }
    let minus = minus_part(space, w);
    Ok((w - &minus, minus))
}

/// Relative distance of a three-form from `Omega^+`.
pub fn plus_violation(space: &ContactMetricSpace, w: &ThreeForm) -> f64 {
    let scale = norm(space, &w.embed());
    let sup = contact_violation(space, w);
    let minus = minus_part(space, w).max_abs();
    relative(sup.max(minus), scale)
}

fn require_plus(space: &ContactMetricSpace, w: &ThreeForm) -> Result<()> {
    let v = plus_violation(space, w);
    if v > MEMBERSHIP_TOL {
        return Err(Error::Membership {
            slot: "omega",
            violation: v,
        });
    }
    Ok(())
}

/// Inverse of `b` restricted to `Omega^{2,0}`: `3/2 (omega - M omega)`.
pub fn inv_b_20(space: &ContactMetricSpace, w: &ThreeForm) -> Result<VectorValuedTwoForm> {
    require_plus(space, w)?;
    let e = w.embed();
    Ok((&e - &mop(space, &e)) * 1.5)
}

/// Inverse of `b` restricted to `Omega^{1,1}_a`: `3/4 (omega + M omega)`.
pub fn inv_b_11a(space: &ContactMetricSpace, w: &ThreeForm) -> Result<VectorValuedTwoForm> {
    require_plus(space, w)?;
    let e = w.embed();
    Ok((&e + &mop(space, &e)) * 0.75)
}

/// Relative distance from `Omega^{2,0}`.
pub fn violation_20(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> f64 {
    let (c20, _) = parts_20_02(space, b);
    relative((b - &c20).max_abs(), norm(space, b))
}

/// Relative distance from `Omega^{0,2}`.
pub fn violation_02(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> f64 {
    relative((b - &part_02(space, b)).max_abs(), norm(space, b))
}

/// Relative distance from `Omega^{1,1}_a`.
pub fn violation_11a(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> f64 {
    let c11 = part_11(space, b);
    let off = (b - &c11).max_abs();
    relative(
        off.max((b - &a_part(space, &c11)).max_abs()),
        norm(space, b),
    )
}

/// Relative distance from `Omega^{1,1}_s`.
pub fn violation_11s(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> f64 {
    let c11 = part_11(space, b);
    let off = (b - &c11).max_abs();
    relative(off.max(bianchi(b).max_abs()), norm(space, b))
}

/// The isomorphism `Omega^{2,0} -> Omega^{1,1}_a`, `B -> 3/4 (b B + M b B)`.
pub fn phi_iso(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> Result<VectorValuedTwoForm> {
    let v = violation_20(space, b);
    if v > MEMBERSHIP_TOL {
        return Err(Error::Membership {
            slot: "2,0",
            violation: v,
        });
    }
    let w = bianchi(b).embed();
    Ok((&w + &mop(space, &w)) * 0.75)
}

/// The inverse isomorphism `Omega^{1,1}_a -> Omega^{2,0}`, `A -> 3/2 (b A - M b A)`.
pub fn phi_inv(space: &ContactMetricSpace, a: &VectorValuedTwoForm) -> Result<VectorValuedTwoForm> {
    let v = violation_11a(space, a);
    if v > MEMBERSHIP_TOL {
        return Err(Error::Membership {
            slot: "1,1_a",
            violation: v,
        });
    }
    let w = bianchi(a).embed();
    Ok((&w - &mop(space, &w)) * 1.5)
}

/// `g`-symmetric and `g`-skew parts of an endomorphism, with flags for
/// commuting with `J`.
#[derive(Clone, Debug)]
pub struct EndoSplit {
    pub sym: EndoOnContact,
    pub skew: EndoOnContact,
    pub sym_commutes_j: bool,
    pub skew_commutes_j: bool,
}

pub fn split_endo(space: &ContactMetricSpace, phi: &EndoOnContact) -> EndoSplit {
    let adj = space.adjoint(&phi.0);
    let sym = (&phi.0 + &adj) * 0.5;
    let skew = (&phi.0 - &adj) * 0.5;
    let scale = phi.max_abs();
    let commutes = |f: &Mat| {
        relative(linalg::max_abs(&(f * space.j() - space.j() * f)), scale) <= MEMBERSHIP_TOL
    };
    EndoSplit {
        sym_commutes_j: commutes(&sym),
        skew_commutes_j: commutes(&skew),
        sym: EndoOnContact(sym),
        skew: EndoOnContact(skew),
    }
}

/// Projects onto the endomorphisms of the contact distribution (`Phi xi = 0`, `eta Phi = 0`).
pub fn contact_endo(space: &ContactMetricSpace, phi: &Mat) -> Mat {
    let p = space.contact_projection();
    p * phi * p
}

/// Projects onto `End^J_-`: `g`-skew and commuting with `J`.
pub fn project_skew_j(space: &ContactMetricSpace, phi: &Mat) -> Mat {
    let phi = contact_endo(space, phi);
    let skew = (&phi - space.adjoint(&phi)) * 0.5;
    let j = space.j();
    (&skew - j * &skew * j) * 0.5
}

/// Relative distance from `End^J_-`.
pub fn violation_skew_j(space: &ContactMetricSpace, phi: &Mat) -> f64 {
    relative(
        linalg::max_abs(&(phi - project_skew_j(space, phi))),
        linalg::max_abs(phi),
    )
}

/// Random element of `Omega^+`, unnormalized.
pub fn random_plus(space: &ContactMetricSpace, rng: &mut impl Rng) -> ThreeForm {
    plus_part(space, &ThreeForm::random(space.dim(), rng))
}

pub fn random_20(space: &ContactMetricSpace, rng: &mut impl Rng) -> VectorValuedTwoForm {
    parts_20_02(space, &VectorValuedTwoForm::random(space.dim(), rng)).0
}

pub fn random_02(space: &ContactMetricSpace, rng: &mut impl Rng) -> VectorValuedTwoForm {
    part_02(space, &VectorValuedTwoForm::random(space.dim(), rng))
}

pub fn random_11(space: &ContactMetricSpace, rng: &mut impl Rng) -> VectorValuedTwoForm {
    part_11(space, &VectorValuedTwoForm::random(space.dim(), rng))
}

pub fn random_11s(space: &ContactMetricSpace, rng: &mut impl Rng) -> VectorValuedTwoForm {
    let c11 = random_11(space, rng);
    &c11 - &a_part(space, &c11)
}

pub fn random_11a(space: &ContactMetricSpace, rng: &mut impl Rng) -> VectorValuedTwoForm {
    a_part(space, &random_11(space, rng))
}

/// Random `g`-symmetric endomorphism of the contact distribution.
pub fn random_sym_endo(space: &ContactMetricSpace, rng: &mut impl Rng) -> Mat {
    let n = space.dim();
    let phi = contact_endo(space, &random::gaussian_matrix(rng, n, n));
    (&phi + space.adjoint(&phi)) * 0.5
}

/// Random `g`-skew endomorphism of the contact distribution.
pub fn random_skew_endo(space: &ContactMetricSpace, rng: &mut impl Rng) -> Mat {
    let n = space.dim();
    let phi = contact_endo(space, &random::gaussian_matrix(rng, n, n));
    (&phi - space.adjoint(&phi)) * 0.5
}

pub fn random_skew_j(space: &ContactMetricSpace, rng: &mut impl Rng) -> Mat {
    let n = space.dim();
    project_skew_j(space, &random::gaussian_matrix(rng, n, n))
}
