//! Dense rank-3 component tables used as scratch space by the form algebra.

use crate::linalg::Mat;

#[derive(Clone, Debug, PartialEq)]
pub struct Dense3 {
    n: usize,
    data: Vec<f64>,
}

impl Dense3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    data.push(f(a, b, c));
                }
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.n + b) * self.n + c
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[self.idx(a, b, c)]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: f64) {
        let i = self.idx(a, b, c);
        self.data[i] = v;
    }

    #[inline]
    pub fn add(&mut self, a: usize, b: usize, c: usize, v: f64) {
        let i = self.idx(a, b, c);
        self.data[i] += v;
    }

    /// Substitutes `E X` into one argument slot:
    /// `T'(.., X, ..) = T(.., E X, ..)`, i.e. `T'_{..b..} = sum_d T_{..d..} E[d, b]`.
    pub fn compose_slot(&self, slot: usize, e: &Mat) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = self.get(a, b, c);
                    if v == 0.0 {
                        continue;
                    }
                    match slot {
                        0 => {
                            for t in 0..n {
                                out.add(t, b, c, v * e[(a, t)]);
                            }
                        }
                        1 => {
                            for t in 0..n {
                                out.add(a, t, c, v * e[(b, t)]);
                            }
                        }
                        2 => {
                            for t in 0..n {
                                out.add(a, b, t, v * e[(c, t)]);
                            }
                        }
                        _ => panic!("slot index {slot} out of range"),
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .fold(0.0_f64, |acc, x| crate::linalg::nan_max(acc, x.abs()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}
