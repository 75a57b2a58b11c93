//! Result reports: JSON with every float written to 17 significant digits.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use opapprox_core::Operator;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::CliError;
use crate::manifest::Problem;
use crate::mtx::{fmt_f64, read_mtx};

/// Witnesses with more than this many rows or columns go to a sibling
/// `.mtx` file.
pub const INLINE_LIMIT: usize = 100;

/// An `f64` serialized as `{:.16e}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F64(pub f64);

impl Serialize for F64 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("non-finite value {}", self.0)));
        }
        RawValue::from_string(fmt_f64(self.0))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for F64 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(F64)
    }
}

/// A dense matrix stored row by row; `im` is omitted for real matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineMatrix {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<F64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<F64>>,
}

impl InlineMatrix {
    pub fn from_operator(m: &Operator) -> Self {
        let entries: Vec<Complex64> = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .map(|ij| m[ij])
            .collect();
        let complex = entries.iter().any(|z| z.im != 0.0);
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            re: entries.iter().map(|z| F64(z.re)).collect(),
            im: complex.then(|| entries.iter().map(|z| F64(z.im)).collect()),
        }
    }

    pub fn to_operator(&self) -> Result<Operator, String> {
        let n = self.rows * self.cols;
        if self.re.len() != n || self.im.as_ref().is_some_and(|im| im.len() != n) {
            return Err(format!(
                "inline witness declares {}x{} but carries {} values",
                self.rows,
                self.cols,
                self.re.len()
            ));
        }
        Ok(Operator::from_fn(self.rows, self.cols, |i, j| {
            let k = i * self.cols + j;
            let im = self.im.as_ref().map_or(0.0, |v| v[k].0);
            Complex64::new(self.re[k].0, im)
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Inline(InlineMatrix),
    /// Matrix Market file, relative to the report's directory.
    File {
        path: String,
    },
}

impl Witness {
    /// Load the witness matrix; file paths resolve against `dir`.
    pub fn load(&self, dir: &Path) -> Result<Operator, CliError> {
        match self {
            Witness::Inline(m) => m.to_operator().map_err(CliError::Parse),
            Witness::File { path } => {
                read_mtx(&dir.join(path)).map_err(|e| CliError::Parse(e.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultReport {
    pub problem: Problem,
    pub exists: bool,
    pub min_value: Option<F64>,
    pub witness: Option<Witness>,
    pub residuals: BTreeMap<String, F64>,
    pub conditions: BTreeMap<String, bool>,
    pub diagnostics: Vec<String>,
}

impl ResultReport {
    pub fn new(problem: Problem) -> Self {
        Self {
            problem,
            exists: false,
            min_value: None,
            witness: None,
            residuals: BTreeMap::new(),
            conditions: BTreeMap::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }
}
