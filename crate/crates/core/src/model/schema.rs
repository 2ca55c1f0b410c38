use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};
use crate::report::REPORT_SCHEMA;
use crate::space::ContactMetricSpace;
use crate::tensor::Dense3;

use super::lie::LieContactModel;

/// On-disk form of a model. Each `[i, j, k, v]` entry of
/// `structure_constants` sets `c^k_ij = v` and `c^k_ji = -v`; an absent
/// `metric` means the identity in the frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema: u32,
    pub name: String,
    pub m: usize,
    /// Defaults to `e1, f1, ..., em, fm, xi`.
    #[serde(default)]
    pub frame_names: Vec<String>,
    pub structure_constants: Vec<(usize, usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<f64>>>,
    pub eta: Vec<f64>,
    #[serde(rename = "J")]
    pub j: Vec<Vec<f64>>,
}

fn table(rows: &[Vec<f64>], n: usize, what: &str) -> Result<Mat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Schema(format!("{what} must be a {n}x{n} table")));
    }
    Ok(Mat::from_fn(n, n, |a, b| rows[a][b]))
}

fn rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|a| (0..m.ncols()).map(|b| m[(a, b)]).collect())
        .collect()
}

impl ModelFile {
    pub fn into_model(mut self) -> Result<LieContactModel> {
        if self.schema != REPORT_SCHEMA {
            return Err(Error::Schema(format!(
                "unsupported schema version {}",
                self.schema
            )));
        }
        if self.m == 0 {
            return Err(Error::Schema("m must be positive".into()));
        }
        let n = 2 * self.m + 1;
        if self.frame_names.is_empty() {
            self.frame_names = super::lie::default_frame_names(self.m);
        }
        if self.frame_names.len() != n {
            return Err(Error::Schema(format!(
                "frame_names has {} entries, expected {n}",
                self.frame_names.len()
            )));
        }
        if self.eta.len() != n {
            return Err(Error::Schema(format!(
                "eta has {} entries, expected {n}",
                self.eta.len()
            )));
        }
        let j = table(&self.j, n, "J")?;
        let g = match &self.metric {
            Some(t) => table(t, n, "metric")?,
            None => Mat::identity(n, n),
        };
        let finite = self
            .eta
            .iter()
            .chain(j.iter())
            .chain(g.iter())
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::Schema("non-finite entry in eta, J or metric".into()));
        }

        let mut c = Dense3::zeros(n);
        let mut seen = HashSet::new();
        for (pos, &(i, jj, k, v)) in self.structure_constants.iter().enumerate() {
            if i >= n || jj >= n || k >= n {
                return Err(Error::Schema(format!(
                    "structure_constants[{pos}]: index out of range for dimension {n}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::Schema(format!(
                    "structure_constants[{pos}]: non-finite value"
                )));
            }
            if i == jj {
                if v != 0.0 {
                    return Err(Error::Schema(format!(
                        "structure_constants[{pos}]: [b_{i}, b_{i}] must vanish"
                    )));
                }
                continue;
            }
            if !seen.insert((i.min(jj), i.max(jj), k)) {
                return Err(Error::Schema(format!(
                    "structure_constants[{pos}]: duplicate entry for [b_{i}, b_{jj}]_{k}"
                )));
            }
            c.set(k, i, jj, v);
            c.set(k, jj, i, -v);
        }

        let space = ContactMetricSpace::new(self.m, g, Vector::from_vec(self.eta), j)?;
        LieContactModel::new(self.name, space, c)?.with_frame_names(self.frame_names)
    }
}

impl LieContactModel {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        file.into_model()
    }

    pub fn to_model_file(&self) -> ModelFile {
        let n = self.dim();
        let c = self.structure_constants();
        let mut structure_constants = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let v = c.get(k, i, j);
                    if v != 0.0 {
                        structure_constants.push((i, j, k, v));
                    }
                }
            }
        }
        let space = self.space();
        ModelFile {
            schema: REPORT_SCHEMA,
            name: self.name().to_string(),
            m: self.m(),
            frame_names: self.frame_names().to_vec(),
            structure_constants,
            metric: Some(rows(space.g())),
            eta: space.eta().iter().copied().collect(),
            j: rows(space.j()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_model_file()).expect("model serializes")
    }
}
