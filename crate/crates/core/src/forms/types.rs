use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::linalg::Mat;
use crate::random;
use crate::tensor::Dense3;

#[inline]
fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[inline]
fn pair_index(n: usize, b: usize, c: usize) -> usize {
    debug_assert!(b < c && c < n);
    b * (2 * n - b - 1) / 2 + (c - b - 1)
}

#[inline]
fn triple_count(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

// colex rank of a < b < c
#[inline]
fn triple_index(a: usize, b: usize, c: usize) -> usize {
    debug_assert!(a < b && b < c);
    c * (c - 1) * (c - 2) / 6 + b * (b - 1) / 2 + a
}

macro_rules! linear_space {
    ($t:ident) => {
        impl $t {
            pub fn dim(&self) -> usize {
                self.n
            }

            /// Stored independent components.
            pub fn components(&self) -> &[f64] {
                &self.data
            }

            /// Inverse of [`Self::components`]; panics on a length mismatch.
            pub fn from_components(n: usize, data: Vec<f64>) -> Self {
                let zero = Self::zeros(n);
                assert_eq!(data.len(), zero.data.len(), "component count");
                Self { n, data }
            }

            pub fn max_abs(&self) -> f64 {
                self.data
                    .iter()
                    .fold(0.0_f64, |acc, x| crate::linalg::nan_max(acc, x.abs()))
            }

            pub fn is_zero(&self) -> bool {
                self.data.iter().all(|&x| x == 0.0)
            }

            fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
                assert_eq!(self.n, other.n, "dimension mismatch");
                Self {
                    n: self.n,
                    data: self
                        .data
                        .iter()
                        .zip(&other.data)
                        .map(|(&a, &b)| f(a, b))
                        .collect(),
                }
            }

            pub fn scale(&self, s: f64) -> Self {
                Self {
                    n: self.n,
                    data: self.data.iter().map(|x| x * s).collect(),
                }
            }
        }

        impl Add<&$t> for &$t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                self.zip_with(rhs, |a, b| a + b)
            }
        }

        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }

        impl Sub<&$t> for &$t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                self.zip_with(rhs, |a, b| a - b)
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }

        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                self.scale(-1.0)
            }
        }

        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.scale(-1.0)
            }
        }

        impl Mul<f64> for &$t {
            type Output = $t;
            fn mul(self, s: f64) -> $t {
                self.scale(s)
            }
        }

        impl Mul<f64> for $t {
            type Output = $t;
            fn mul(self, s: f64) -> $t {
                self.scale(s)
            }
        }

        impl Mul<&$t> for f64 {
            type Output = $t;
            fn mul(self, t: &$t) -> $t {
                t.scale(self)
            }
        }

        impl Mul<$t> for f64 {
            type Output = $t;
            fn mul(self, t: $t) -> $t {
                t.scale(self)
            }
        }
    };
}

/// A `TM`-valued two-form through its components `B(X; Y, Z) = g(X, B(Y, Z))`.
///
/// Only `Y < Z` is stored, so skew symmetry in the last two slots is exact.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorValuedTwoForm {
    n: usize,
    data: Vec<f64>,
}

linear_space!(VectorValuedTwoForm);

impl VectorValuedTwoForm {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * pair_count(n)],
        }
    }

    /// Builds from `f(a, b, c)`, evaluated for `b < c` only.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * pair_count(n));
        for a in 0..n {
            for b in 0..n {
                for c in (b + 1)..n {
                    data.push(f(a, b, c));
                }
            }
        }
        Self { n, data }
    }

    /// Skew part `(T_abc - T_acb) / 2` of a dense table.
    pub fn skew_part(t: &Dense3) -> Self {
        Self::from_fn(t.dim(), |a, b, c| 0.5 * (t.get(a, b, c) - t.get(a, c, b)))
    }

    /// Reads `b < c` entries of a table that is already skew in its last two slots.
    pub fn from_skew_dense(t: &Dense3) -> Self {
        Self::from_fn(t.dim(), |a, b, c| t.get(a, b, c))
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        use std::cmp::Ordering::*;
        let p = pair_count(self.n);
        match b.cmp(&c) {
            Less => self.data[a * p + pair_index(self.n, b, c)],
            Greater => -self.data[a * p + pair_index(self.n, c, b)],
            Equal => 0.0,
        }
    }

    /// Sets `B(a; b, c)` and, implicitly, `B(a; c, b) = -value`.
    pub fn set(&mut self, a: usize, b: usize, c: usize, value: f64) {
        use std::cmp::Ordering::*;
        let p = pair_count(self.n);
        match b.cmp(&c) {
            Less => self.data[a * p + pair_index(self.n, b, c)] = value,
            Greater => self.data[a * p + pair_index(self.n, c, b)] = -value,
            Equal => assert!(value == 0.0, "diagonal entry of a two-form must vanish"),
        }
    }

    pub fn to_dense(&self) -> Dense3 {
        Dense3::from_fn(self.n, |a, b, c| self.get(a, b, c))
    }

    /// Standard normal components.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        Self::from_fn(n, |_, _, _| random::normal(rng))
    }

    /// Embedding `omega(X, Y, Z) = g(X, omega(Y, Z))`.
    pub fn from_three_form(w: &ThreeForm) -> Self {
        Self::from_fn(w.dim(), |a, b, c| w.get(a, b, c))
    }

    /// Euclidean dot product of components; frame dependent, used by tests.
    pub fn component_dot(&self, other: &Self) -> f64 {
        self.to_dense()
            .as_slice()
            .iter()
            .zip(other.to_dense().as_slice())
            .map(|(a, b)| a * b)
            .sum()
    }
}

impl From<&ThreeForm> for VectorValuedTwoForm {
    fn from(w: &ThreeForm) -> Self {
        Self::from_three_form(w)
    }
}

/// A totally antisymmetric three-form, stored for `a < b < c`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeForm {
    n: usize,
    data: Vec<f64>,
}

linear_space!(ThreeForm);

impl ThreeForm {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; triple_count(n)],
        }
    }

    /// Builds from `f(a, b, c)`, evaluated for `a < b < c` only.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; triple_count(n)];
        for c in 0..n {
            for b in 0..c {
                for a in 0..b {
                    data[triple_index(a, b, c)] = f(a, b, c);
                }
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        if a == b || b == c || a == c {
            return 0.0;
        }
        let (mut x, mut y, mut z) = (a, b, c);
        let mut sign = 1.0;
        if x > y {
            std::mem::swap(&mut x, &mut y);
            sign = -sign;
        }
        if y > z {
            std::mem::swap(&mut y, &mut z);
            sign = -sign;
        }
        if x > y {
            std::mem::swap(&mut x, &mut y);
            sign = -sign;
        }
        sign * self.data[triple_index(x, y, z)]
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        Self::from_fn(n, |_, _, _| random::normal(rng))
    }

    /// The components as a vector valued two-form.
    pub fn embed(&self) -> VectorValuedTwoForm {
        VectorValuedTwoForm::from_three_form(self)
    }
}

/// A scalar two-form, stored for `a < b`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm {
    n: usize,
    data: Vec<f64>,
}

linear_space!(TwoForm);

impl TwoForm {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; pair_count(n)],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(pair_count(n));
        for a in 0..n {
            for b in (a + 1)..n {
                data.push(f(a, b));
            }
        }
        Self { n, data }
    }

    /// Skew part of a square matrix.
    pub fn from_matrix(m: &Mat) -> Self {
        Self::from_fn(m.nrows(), |a, b| 0.5 * (m[(a, b)] - m[(b, a)]))
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Less => self.data[pair_index(self.n, a, b)],
            Greater => -self.data[pair_index(self.n, b, a)],
            Equal => 0.0,
        }
    }

    pub fn to_matrix(&self) -> Mat {
        Mat::from_fn(self.n, self.n, |a, b| self.get(a, b))
    }
}

/// Endomorphism of the contact distribution, extended by `Phi xi = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoOnContact(pub Mat);

impl EndoOnContact {
    pub fn zeros(n: usize) -> Self {
        Self(Mat::zeros(n, n))
    }

    pub fn matrix(&self) -> &Mat {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn max_abs(&self) -> f64 {
        crate::linalg::max_abs(&self.0)
    }
}

impl Add<&EndoOnContact> for &EndoOnContact {
    type Output = EndoOnContact;
    fn add(self, rhs: &EndoOnContact) -> EndoOnContact {
        EndoOnContact(&self.0 + &rhs.0)
    }
}

impl Sub<&EndoOnContact> for &EndoOnContact {
    type Output = EndoOnContact;
    fn sub(self, rhs: &EndoOnContact) -> EndoOnContact {
        EndoOnContact(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &EndoOnContact {
    type Output = EndoOnContact;
    fn mul(self, s: f64) -> EndoOnContact {
        EndoOnContact(&self.0 * s)
    }
}
