use crate::linalg::{Mat, Vector};
use crate::space::ContactMetricSpace;
use crate::tensor::Dense3;

use super::types::{ThreeForm, TwoForm, VectorValuedTwoForm};

/// Bianchi operator `b B(X,Y,Z) = (B(X;Y,Z) + B(Y;Z,X) + B(Z;X,Y)) / 3`.
///
/// Fixes embedded three-forms and always lands in three-forms.
pub fn bianchi(b: &VectorValuedTwoForm) -> ThreeForm {
    ThreeForm::from_fn(b.dim(), |x, y, z| {
        (b.get(x, y, z) + b.get(y, z, x) + b.get(z, x, y)) / 3.0
    })
}

/// `M B = B(J., J.)`: both form arguments precomposed with `J`.
pub fn mop(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> VectorValuedTwoForm {
    let j = space.j();
    let t = b.to_dense().compose_slot(1, j).compose_slot(2, j);
    VectorValuedTwoForm::from_skew_dense(&t)
}

/// `tr B(X) = sum_i B(e_i; e_i, X)` over an orthonormal basis, i.e. `g^{ab} B(a; b, X)`.
pub fn trace(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> Vector {
    let n = b.dim();
    let gi = space.g_inv();
    Vector::from_fn(n, |x, _| {
        let mut s = 0.0;
        for a in 0..n {
            for c in 0..n {
                let w = gi[(a, c)];
                if w != 0.0 {
                    s += w * b.get(a, c, x);
                }
            }
        }
        s
    })
}

/// `B(E0 X; E1 Y, E2 Z)` as a dense table; `None` leaves a slot unchanged.
pub fn compose(b: &VectorValuedTwoForm, slots: [Option<&Mat>; 3]) -> Dense3 {
    let mut t = b.to_dense();
    for (k, e) in slots.iter().enumerate() {
        if let Some(e) = e {
            t = t.compose_slot(k, e);
        }
    }
    t
}

/// Restriction to the contact distribution, `B(pi X; pi Y, pi Z)`.
pub fn contact_part(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> VectorValuedTwoForm {
    let p = space.contact_projection();
    VectorValuedTwoForm::from_skew_dense(&compose(b, [Some(p), Some(p), Some(p)]))
}

pub fn contact_part_three(space: &ContactMetricSpace, w: &ThreeForm) -> ThreeForm {
    bianchi(&contact_part(space, &w.embed()))
}

/// `B(J X; Y, Z)`.
pub fn value_j(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> VectorValuedTwoForm {
    VectorValuedTwoForm::from_skew_dense(&b.to_dense().compose_slot(0, space.j()))
}

/// `(eta ^ Phi)(X; Y, Z) = eta(Y) g(X, Phi Z) - eta(Z) g(X, Phi Y)`, with `Phi xi = 0` imposed.
pub fn wedge_eta_endo(space: &ContactMetricSpace, phi: &Mat) -> VectorValuedTwoForm {
    let beta = space.g() * phi * space.contact_projection();
    let eta = space.eta();
    VectorValuedTwoForm::from_fn(eta.len(), |x, y, z| {
        eta[y] * beta[(x, z)] - eta[z] * beta[(x, y)]
    })
}

/// `xi (x) alpha`, i.e. `(X; Y, Z) -> eta(X) alpha(Y, Z)`.
pub fn reeb_tensor(space: &ContactMetricSpace, alpha: &TwoForm) -> VectorValuedTwoForm {
    let eta = space.eta();
    VectorValuedTwoForm::from_fn(eta.len(), |x, y, z| eta[x] * alpha.get(y, z))
}

/// `xi (x) eta ^ beta`, i.e. `(X; Y, Z) -> eta(X) (eta(Y) beta(Z) - eta(Z) beta(Y))`.
pub fn reeb_eta_wedge(space: &ContactMetricSpace, beta: &Vector) -> VectorValuedTwoForm {
    let eta = space.eta();
    VectorValuedTwoForm::from_fn(eta.len(), |x, y, z| {
        eta[x] * (eta[y] * beta[z] - eta[z] * beta[y])
    })
}

/// The three-form `eta ^ alpha`.
pub fn eta_wedge(space: &ContactMetricSpace, alpha: &TwoForm) -> ThreeForm {
    let eta = space.eta();
    ThreeForm::from_fn(eta.len(), |x, y, z| {
        eta[x] * alpha.get(y, z) + eta[y] * alpha.get(z, x) + eta[z] * alpha.get(x, y)
    })
}

/// The Kahler form `F = g(J., .)`, which equals `d eta` on a metric contact structure.
pub fn kahler_two_form(space: &ContactMetricSpace) -> TwoForm {
    TwoForm::from_matrix(&space.kahler())
}

/// `alpha(J., J.)`.
pub fn m_two_form(space: &ContactMetricSpace, alpha: &TwoForm) -> TwoForm {
    let j = space.j();
    TwoForm::from_matrix(&(j.transpose() * alpha.to_matrix() * j))
}

/// Restriction of a scalar two-form to the contact distribution.
pub fn contact_two_form(space: &ContactMetricSpace, alpha: &TwoForm) -> TwoForm {
    let p = space.contact_projection();
    TwoForm::from_matrix(&(p.transpose() * alpha.to_matrix() * p))
}

fn raise_all(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> Dense3 {
    let gi = space.g_inv();
    b.to_dense()
        .compose_slot(0, gi)
        .compose_slot(1, gi)
        .compose_slot(2, gi)
}

/// Metric inner product of vector valued two-forms, normalized by `1/2!` on
/// the two form slots.
pub fn inner(space: &ContactMetricSpace, a: &VectorValuedTwoForm, b: &VectorValuedTwoForm) -> f64 {
    let raised = raise_all(space, b);
    0.5 * a
        .to_dense()
        .as_slice()
        .iter()
        .zip(raised.as_slice())
        .map(|(x, y)| x * y)
        .sum::<f64>()
}

pub fn norm(space: &ContactMetricSpace, b: &VectorValuedTwoForm) -> f64 {
    inner(space, b, b).max(0.0).sqrt()
}

/// Metric inner product of three-forms, normalized by `1/3!`.
pub fn inner_three(space: &ContactMetricSpace, a: &ThreeForm, b: &ThreeForm) -> f64 {
    inner(space, &a.embed(), &b.embed()) / 3.0
}

pub fn norm_three(space: &ContactMetricSpace, w: &ThreeForm) -> f64 {
    inner_three(space, w, w).max(0.0).sqrt()
}
