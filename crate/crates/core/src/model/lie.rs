use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::forms::TwoForm;
use crate::linalg::{Mat, Vector};
use crate::space::ContactMetricSpace;
use crate::tensor::Dense3;

use super::geometry::Geometry;

#[derive(Clone, Debug)]
pub struct LieContactModel {
    name: String,
    frame_names: Vec<String>,
    space: ContactMetricSpace,
    /// `c.get(k, i, j) = c^k_ij`
    c: Dense3,
    pub(super) cache: OnceLock<Geometry>,
}

impl LieContactModel {
    /// Assembles a model; only shapes are checked here, see [`Self::validity`].
    pub fn new(name: impl Into<String>, space: ContactMetricSpace, c: Dense3) -> Result<Self> {
        let n = space.dim();
        if c.dim() != n {
            return Err(Error::Dimension {
                what: "structure constants",
                expected: n,
                found: c.dim(),
            });
        }
        let frame_names = default_frame_names(space.m());
        Ok(Self {
            name: name.into(),
            frame_names,
            space,
            c,
            cache: OnceLock::new(),
        })
    }

    /// Builds from bracket entries `[b_i, b_j] = ... + v b_k + ...`; each
    /// entry also sets `c^k_ji = -v`.
    pub fn from_brackets(
        name: impl Into<String>,
        space: ContactMetricSpace,
        brackets: &[(usize, usize, usize, f64)],
    ) -> Result<Self> {
        let n = space.dim();
        let mut c = Dense3::zeros(n);
        for &(i, j, k, v) in brackets {
            if i >= n || j >= n || k >= n {
                return Err(Error::Schema(format!(
                    "bracket index out of range in [{i}, {j}, {k}]"
                )));
            }
            c.add(k, i, j, v);
            c.add(k, j, i, -v);
        }
        Self::new(name, space, c)
    }

    pub fn with_frame_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dim() {
            return Err(Error::Dimension {
                what: "frame names",
                expected: self.dim(),
                found: names.len(),
            });
        }
        self.frame_names = names;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn frame_names(&self) -> &[String] {
        &self.frame_names
    }

    pub fn space(&self) -> &ContactMetricSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn m(&self) -> usize {
        self.space.m()
    }

    pub fn structure_constants(&self) -> &Dense3 {
        &self.c
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim();
        let mut out = Vector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.c.get(k, i, j);
                }
            }
        }
        out
    }

    /// Matrix of `ad_x = [x, .]`.
    pub fn ad(&self, x: &Vector) -> Mat {
        let n = self.dim();
        Mat::from_fn(n, n, |k, j| {
            (0..n).map(|i| x[i] * self.c.get(k, i, j)).sum()
        })
    }

    /// `d eta(X, Y) = -eta([X, Y])` on left-invariant fields.
    pub fn deta(&self) -> TwoForm {
        let eta = self.space.eta();
        let n = self.dim();
        TwoForm::from_fn(n, |i, j| {
            -(0..n).map(|k| eta[k] * self.c.get(k, i, j)).sum::<f64>()
        })
    }
}

pub(crate) fn default_frame_names(m: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(2 * m + 1);
    for i in 1..=m {
        names.push(format!("e{i}"));
        names.push(format!("f{i}"));
    }
    names.push("xi".into());
    names
}
