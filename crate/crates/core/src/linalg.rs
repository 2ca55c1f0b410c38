//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// `max` that propagates NaN, so a broken computation cannot look like a pass.
pub fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| nan_max(acc, x.abs()))
}

pub fn max_abs_vec(v: &Vector) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| nan_max(acc, x.abs()))
}

// nalgebra's SVD can lose several digits on rank-deficient input (a 5 x 40
// rank-3 product reconstructs with 6% error), so everything here goes
// through the symmetric eigensolver on the smaller Gram matrix. Singular
// values from a Gram matrix bottom out near 1e-8 of the largest, which is why
// rank cutoffs are relative and should stay at or above 1e-7.

/// Eigenpairs of the smaller Gram matrix of `a`, eigenvalues descending and
/// clamped at zero. `wide` is true when the Gram matrix is `a a^T`.
fn gram_eigen(a: &Mat) -> (Vec<f64>, Mat, bool) {
    let wide = a.nrows() < a.ncols();
    let gram = if wide {
        a * a.transpose()
    } else {
        a.transpose() * a
    };
    let gram = (&gram + gram.transpose()) * 0.5;
    let eig = gram.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
    let vectors = Mat::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors, wide)
}

/// Singular values in descending order (`min(rows, cols)` of them).
pub fn singular_values(a: &Mat) -> Vec<f64> {
    gram_eigen(a).0.into_iter().map(f64::sqrt).collect()
}

/// Number of singular values above `rel` times the largest.
pub fn rank(a: &Mat, rel: f64) -> usize {
    let sv = singular_values(a);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * top).count()
}

/// Orthonormal basis (as columns) of the kernel of `a`, cutting singular
/// values at `rel` times the largest.
pub fn null_space(a: &Mat, rel: f64) -> Mat {
    let n = a.ncols();
    let gram = a.transpose() * a;
    let gram = (&gram + gram.transpose()) * 0.5;
    let eig = gram.symmetric_eigen();
    let top = eig.eigenvalues.iter().copied().fold(0.0_f64, f64::max);
    let cols: Vec<usize> = (0..n)
        .filter(|&i| eig.eigenvalues[i].max(0.0).sqrt() <= rel * top.sqrt())
        .collect();
    Mat::from_fn(n, cols.len(), |r, c| eig.eigenvectors[(r, cols[c])])
}

/// Orthonormal basis (as columns) of the range of `a`, keeping singular
/// values above `rel` times the largest.
pub fn column_space(a: &Mat, rel: f64) -> Mat {
    let gram = a.transpose() * a;
    let gram = (&gram + gram.transpose()) * 0.5;
    let eig = gram.symmetric_eigen();
    let top = eig.eigenvalues.iter().copied().fold(0.0_f64, f64::max);
    let mut out = Vec::new();
    for i in 0..a.ncols() {
        let sigma = eig.eigenvalues[i].max(0.0).sqrt();
        if top > 0.0 && sigma > rel * top.sqrt() {
            out.push(a * eig.eigenvectors.column(i) / sigma);
        }
    }
    Mat::from_columns(&out)
}

/// Minimum-norm least-squares solution of `a x = b`, ignoring singular
/// values at or below `rel` times the largest.
pub fn lstsq(a: &Mat, b: &Vector, rel: f64) -> Vector {
    let (values, q, wide) = gram_eigen(a);
    let top = values.first().copied().unwrap_or(0.0);
    let cut = rel * rel * top;
    let inv = Vector::from_iterator(
        values.len(),
        values
            .iter()
            .map(|&l| if top > 0.0 && l > cut { 1.0 / l } else { 0.0 }),
    );
    if wide {
        // x = a^T (a a^T)^+ b
        let y = &q * (q.transpose() * b).component_mul(&inv);
        a.transpose() * y
    } else {
        // x = (a^T a)^+ a^T b
        &q * (q.transpose() * (a.transpose() * b)).component_mul(&inv)
    }
}

/// Orthogonal factor `a (a^T a)^{-1/2}` of the polar decomposition of an
/// invertible square matrix.
pub fn polar_factor(a: &Mat) -> Mat {
    let (values, q, _) = gram_eigen(a);
    let inv_sqrt = Mat::from_diagonal(&Vector::from_iterator(
        values.len(),
        values.iter().map(|&l| 1.0 / l.sqrt()),
    ));
    a * &q * inv_sqrt * q.transpose()
}

/// Ratio of largest to smallest singular value; saturates near 1e8 for
/// singular input.
pub fn condition_number(a: &Mat) -> f64 {
    let sv = singular_values(a);
    let max = sv.first().copied().unwrap_or(0.0);
    let min = sv.last().copied().unwrap_or(0.0);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Smallest eigenvalue of the symmetric part of `a`.
pub fn min_symmetric_eigenvalue(a: &Mat) -> f64 {
    let sym = (a + a.transpose()) * 0.5;
    sym.symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Pfaffian of a skew-symmetric matrix of even size, by expansion along the
/// first row. Sizes here never exceed 10, so the factorial cost is irrelevant.
pub fn pfaffian(a: &Mat) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 1.0;
    }
    if n % 2 == 1 {
        return 0.0;
    }
    let idx: Vec<usize> = (0..n).collect();
    pfaffian_rec(a, &idx)
}

fn pfaffian_rec(a: &Mat, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let first = idx[0];
    let rest = &idx[1..];
    let mut total = 0.0;
    for (pos, &j) in rest.iter().enumerate() {
        let entry = a[(first, j)];
        if entry == 0.0 {
            continue;
        }
        let sub: Vec<usize> = rest
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != pos)
            .map(|(_, &k)| k)
            .collect();
        let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * entry * pfaffian_rec(a, &sub);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lstsq_on_wide_rank_deficient_matrix() {
        // rows 0 and 1 span the range, row 2 is their sum
        let mut rng = crate::random::rng(5);
        let r0 = crate::random::gaussian_vector(&mut rng, 27);
        let r1 = crate::random::gaussian_vector(&mut rng, 27);
        let a = Mat::from_fn(3, 27, |i, j| match i {
            0 => r0[j],
            1 => r1[j],
            _ => r0[j] + r1[j],
        });
        assert_eq!(rank(&a, 1e-6), 2);
        let b = Vector::from_vec(vec![1.0, -2.0, -1.0]);
        let x = lstsq(&a, &b, 1e-6);
        assert!(max_abs_vec(&(&a * &x - &b)) < 1e-12);
        // minimum norm: x lies in the row space
        let y = lstsq(&(&a * a.transpose()), &b, 1e-6);
        assert!(max_abs_vec(&(a.transpose() * y - &x)) < 1e-12);
    }

    #[test]
    fn rank_deficient_product() {
        // the shape on which nalgebra's SVD loses accuracy
        let mut rng = crate::random::rng(1);
        for _ in 0..50 {
            let a = crate::random::gaussian_matrix(&mut rng, 5, 3)
                * crate::random::gaussian_matrix(&mut rng, 3, 40);
            assert_eq!(rank(&a, 1e-6), 3);
            assert_eq!(rank(&a.transpose(), 1e-6), 3);
            let range = column_space(&a, 1e-6);
            assert_eq!(range.ncols(), 3);
            assert!(max_abs(&(range.transpose() * &range - Mat::identity(3, 3))) < 1e-10);
            let k = null_space(&a, 1e-6);
            assert_eq!(k.ncols(), 37);
            assert!(max_abs(&(&a * &k)) < 1e-10 * max_abs(&a));
            assert!(max_abs(&(k.transpose() * &k - Mat::identity(37, 37))) < 1e-12);
        }
    }

    #[test]
    fn polar_factor_is_orthogonal() {
        let mut rng = crate::random::rng(2);
        let a = crate::random::gaussian_matrix(&mut rng, 6, 6);
        let q = polar_factor(&a);
        assert!(max_abs(&(q.transpose() * &q - Mat::identity(6, 6))) < 1e-12);
        // a = q p with p symmetric positive definite
        let p = q.transpose() * &a;
        assert!(max_abs(&(&p - p.transpose())) < 1e-12);
        assert!(min_symmetric_eigenvalue(&p) > 0.0);
    }

    #[test]
    fn pfaffian_of_standard_blocks() {
        let mut a = Mat::zeros(4, 4);
        a[(0, 1)] = 2.0;
        a[(1, 0)] = -2.0;
        a[(2, 3)] = 3.0;
        a[(3, 2)] = -3.0;
        assert!((pfaffian(&a) - 6.0).abs() < 1e-15);
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let n = 6;
        let a = Mat::from_fn(n, n, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let skew = &a - a.transpose();
        let pf = pfaffian(&skew);
        assert!((pf * pf - skew.determinant()).abs() < 1e-8 * (1.0 + pf * pf));
    }
}
