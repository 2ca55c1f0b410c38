use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};
use crate::random::{self, DetRng};
use crate::space::{compatible_pair, ContactMetricSpace};
use crate::tensor::Dense3;

use super::lie::LieContactModel;

/// Names accepted by [`builtin`], besides `heisenberg<n>` / `heis<n>` for any odd `n >= 3`.
pub const BUILTIN_NAMES: [&str; 4] = ["heisenberg3", "heis5", "su2", "noncr5"];

const NONCR5_JSON: &str = include_str!("../../models/noncr5.json");

/// The Heisenberg algebra in the frame `(e_1, f_1, ..., e_m, f_m, xi)` with
/// `[e_i, f_i] = -xi`, `g = Id` and `J e_i = f_i`.
pub fn heisenberg(m: usize) -> LieContactModel {
    let n = 2 * m + 1;
    let brackets: Vec<_> = (0..m).map(|i| (2 * i, 2 * i + 1, n - 1, -1.0)).collect();
    LieContactModel::from_brackets(
        format!("heisenberg{n}"),
        ContactMetricSpace::canonical(m),
        &brackets,
    )
    .expect("heisenberg brackets are in range")
}

/// `su(2)` in the frame `(e, f, xi)` with `[e, f] = -xi`, `[f, xi] = -2e`,
/// `[xi, e] = -2f` and the canonical `(g, eta, J)`.
///
/// Among the structures `[f, xi] = a e`, `[xi, e] = a f` the value `a = -2` is
/// the Sasakian normalization of the round sphere: `xi` is Killing, so
/// `L_xi J = 0`, and the Nijenhuis tensor has no `(0,2)` part.
pub fn su2() -> LieContactModel {
    let brackets = [(0, 1, 2, -1.0), (1, 2, 0, -2.0), (2, 0, 1, -2.0)];
    LieContactModel::from_brackets("su2", ContactMetricSpace::canonical(1), &brackets)
        .expect("su2 brackets are in range")
}

/// A frozen five-dimensional structure that is not CR: `N^{0,2} != 0` and `L_xi J != 0`.
pub fn noncr5() -> LieContactModel {
    LieContactModel::from_json(NONCR5_JSON).expect("bundled model parses")
}

pub fn builtin(name: &str) -> Option<LieContactModel> {
    match name {
        "su2" => return Some(su2()),
        "noncr5" => return Some(noncr5()),
        _ => {}
    }
    let digits = name
        .strip_prefix("heisenberg")
        .or_else(|| name.strip_prefix("heis"))?;
    let n: usize = digits.parse().ok()?;
    if n >= 3 && n % 2 == 1 {
        Some(heisenberg((n - 1) / 2))
    } else {
        None
    }
}

fn set(c: &mut Dense3, i: usize, j: usize, k: usize, v: f64) {
    c.add(k, i, j, v);
    c.add(k, j, i, -v);
}

/// Three-dimensional factors: Heisenberg, `su(2)`, `sl(2)`, `e(2)`.
fn three_dim(c: &mut Dense3, off: usize, kind: usize) {
    let (a, b, x) = (off, off + 1, off + 2);
    match kind {
        0 => set(c, a, b, x, 1.0),
        1 => {
            set(c, a, b, x, 1.0);
            set(c, b, x, a, 1.0);
            set(c, x, a, b, 1.0);
        }
        2 => {
            set(c, a, b, x, 1.0);
            set(c, b, x, a, -1.0);
            set(c, x, a, b, -1.0);
        }
        _ => {
            set(c, x, a, b, 1.0);
            set(c, x, b, a, -1.0);
        }
    }
}

/// A bracket table from the catalogue: a three-dimensional algebra plus
/// copies of `aff(R)` (`[a, b] = b`), or a Heisenberg algebra.
fn catalogue(n: usize, rng: &mut DetRng) -> Dense3 {
    let mut c = Dense3::zeros(n);
    let k = (n - 3) / 2;
    if n > 3 && rng.random_bool(0.2) {
        for i in 0..(n - 1) / 2 {
            set(&mut c, 2 * i, 2 * i + 1, n - 1, 1.0);
        }
        return c;
    }
    three_dim(&mut c, 0, rng.random_range(0..4));
    for i in 0..k {
        set(&mut c, 3 + 2 * i, 4 + 2 * i, 4 + 2 * i, 1.0);
    }
    c
}

/// `c'^k_ij = (P^{-1})^k_l c^l_ab P^a_i P^b_j`: the same algebra in the frame given by the columns of `P`.
fn change_frame(c: &Dense3, p: &Mat, p_inv: &Mat) -> Dense3 {
    let n = c.dim();
    let mut out = Dense3::zeros(n);
    for l in 0..n {
        for a in 0..n {
            for b in 0..n {
                let v = c.get(l, a, b);
                if v == 0.0 {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        let w = v * p[(a, i)] * p[(b, j)];
                        if w == 0.0 {
                            continue;
                        }
                        for k in 0..n {
                            out.add(k, i, j, p_inv[(k, l)] * w);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Builds `(g, J)` compatible with `d eta = -eta([., .])`, or `None` if `eta`
/// is not a contact form or the result is badly conditioned.
fn structure_for(c: &Dense3, eta: &Vector, rng: &mut DetRng) -> Option<ContactMetricSpace> {
    let n = c.dim();
    let m = (n - 1) / 2;
    let d = Mat::from_fn(n, n, |i, j| {
        -(0..n).map(|k| eta[k] * c.get(k, i, j)).sum::<f64>()
    });

    let s = linalg::singular_values(&d);
    let (smallest, second, largest) = (s[n - 1], s[n - 2], s[0]);
    if largest == 0.0 || second < 1e-2 * largest || smallest > 1e-6 * largest {
        return None;
    }
    let kernel = linalg::null_space(&d, 1e-6);
    if kernel.ncols() != 1 {
        return None;
    }
    let kernel = kernel.column(0).into_owned();
    let ek = eta.dot(&kernel);
    if ek.abs() < 0.1 * eta.norm() {
        return None;
    }
    let xi = kernel / ek;

    // Euclidean orthonormal basis of ker eta
    let unit = eta / eta.norm();
    let q = Mat::identity(n, n) - &unit * unit.transpose();
    let eig = q.symmetric_eigen();
    let cols: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    if cols.len() != n - 1 {
        return None;
    }
    let basis_c = Mat::from_fn(n, n - 1, |r, k| eig.eigenvectors[(r, cols[k])]);

    let rho = basis_c.transpose() * &d * &basis_c;
    let h = random::spd_matrix(rng, n - 1);
    let (j_c, g_c) = compatible_pair(&rho, &h);

    let mut frame = Mat::zeros(n, n);
    frame.view_mut((0, 0), (n, n - 1)).copy_from(&basis_c);
    frame.set_column(n - 1, &xi);
    let frame_inv = frame.clone().try_inverse()?;
    let mut g_new = Mat::zeros(n, n);
    g_new.view_mut((0, 0), (n - 1, n - 1)).copy_from(&g_c);
    g_new[(n - 1, n - 1)] = 1.0;
    let mut j_new = Mat::zeros(n, n);
    j_new.view_mut((0, 0), (n - 1, n - 1)).copy_from(&j_c);

    let g = frame_inv.transpose() * g_new * &frame_inv;
    let g = (&g + g.transpose()) * 0.5;
    if linalg::condition_number(&g) > 50.0 {
        return None;
    }
    let j = &frame * j_new * &frame_inv;
    ContactMetricSpace::new(m, g, eta.clone(), j).ok()
}

/// Searches the catalogue for a valid left-invariant metric contact structure
/// of dimension `dim`, deterministic in `seed`.
///
/// Each attempt draws an algebra, a frame change near the identity, a
/// covector `eta` and a compatible `(g, J)`; draws that fail the contact
/// condition, validation at `1e-10` or the conditioning bounds are discarded.
pub fn random_contact_lie(dim: usize, seed: u64, attempts: usize) -> Result<LieContactModel> {
    if dim < 3 || dim.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "dimension must be odd and at least 3, got {dim}"
        )));
    }
    let mut rng = random::rng(seed);
    for _ in 0..attempts {
        let base = catalogue(dim, &mut rng);
        let p = Mat::identity(dim, dim) + random::gaussian_matrix(&mut rng, dim, dim) * 0.3;
        if linalg::condition_number(&p) > 4.0 {
            continue;
        }
        let Some(p_inv) = p.clone().try_inverse() else {
            continue;
        };
        let c = change_frame(&base, &p, &p_inv);
        let eta = random::gaussian_vector(&mut rng, dim);
        let Some(space) = structure_for(&c, &eta, &mut rng) else {
            continue;
        };
        let names = (0..dim).map(|i| format!("b{i}")).collect();
        let Ok(model) = LieContactModel::new(format!("random{dim}-{seed}"), space, c)
            .and_then(|m| m.with_frame_names(names))
        else {
            continue;
        };
        if c_max(&model) > 10.0 || linalg::max_abs(model.script_j()) > 10.0 {
            continue;
        }
        if model.validity(1e-10).passed() {
            return Ok(model);
        }
    }
    Err(Error::NotFound { attempts })
}

fn c_max(model: &LieContactModel) -> f64 {
    model.structure_constants().max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_valid() {
        for name in BUILTIN_NAMES {
            let model = builtin(name).unwrap();
            let report = model.validity(1e-12);
            assert!(report.passed(), "{name}: {:?}", report.failing_ids());
        }
        assert!(builtin("heis7").is_some());
        assert!(builtin("heis4").is_none());
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn heisenberg_deta() {
        let h = heisenberg(1);
        assert_eq!(h.deta().get(0, 1), 1.0);
        assert_eq!(h.space().kahler()[(0, 1)], 1.0);
    }

    #[test]
    fn random_models_in_dim_3_always_found() {
        for seed in 0..20 {
            let model = random_contact_lie(3, seed, 50).unwrap();
            assert!(model.validity(1e-10).passed());
        }
    }

    #[test]
    fn random_models_are_deterministic() {
        let a = random_contact_lie(5, 4, 50).unwrap();
        let b = random_contact_lie(5, 4, 50).unwrap();
        assert_eq!(a.structure_constants(), b.structure_constants());
        assert_eq!(a.space(), b.space());
    }

    #[test]
    fn even_dimension_refused() {
        assert!(matches!(
            random_contact_lie(4, 0, 10),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            random_contact_lie(5, 0, 0),
            Err(Error::NotFound { attempts: 0 })
        ));
    }

    #[test]
    fn noncr5_is_not_cr() {
        let model = noncr5();
        assert!(model.nijenhuis_02().max_abs() > 1e-3);
        assert!(linalg::max_abs(model.script_j()) > 1e-3);
    }
}
