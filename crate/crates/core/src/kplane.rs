//! JSON file format for a `k`-plane given as an `m x n` matrix of linear
//! forms: `{"m": .., "n": .., "k": .., "entries": [[["p/q", ..], ..], ..]}`
//! where each entry lists the `k + 1` coefficients of `z_0..z_k`.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{FanoError, Result};
use crate::symalg::{LinForm, LinMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KPlaneDoc {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub entries: Vec<Vec<Vec<String>>>,
}

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(FanoError::Parse(msg.into()))
}

/// Parses an integer `p` or fraction `p/q`; decimals are rejected.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|e| FanoError::Parse(format!("bad rational {s:?}: {e}")))
}

/// Reduced `p/q` form, always with an explicit denominator.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl KPlaneDoc {
    pub fn to_matrix(&self) -> Result<LinMatrix> {
        if self.entries.len() != self.m {
            return parse_err(format!("expected {} rows, found {}", self.m, self.entries.len()));
        }
        let mut rows = Vec::with_capacity(self.m);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.n {
                return parse_err(format!("row {i}: expected {} entries, found {}", self.n, row.len()));
            }
            let mut forms = Vec::with_capacity(self.n);
            for (j, cell) in row.iter().enumerate() {
                if cell.len() != self.k + 1 {
                    return parse_err(format!(
                        "entry ({i}, {j}): expected {} coefficients, found {}",
                        self.k + 1,
                        cell.len()
                    ));
                }
                let coeffs = cell.iter().map(|c| parse_rational(c)).collect::<Result<_>>()?;
                forms.push(LinForm::from_coeffs(coeffs));
            }
            rows.push(forms);
        }
        if self.m == 0 || self.n == 0 {
            return parse_err("matrix must have at least one row and column");
        }
        LinMatrix::from_rows(rows).map_err(|e| FanoError::Parse(e.to_string()))
    }

    pub fn from_matrix(mat: &LinMatrix) -> Result<Self> {
        if mat.nvars() == 0 {
            return Err(FanoError::Domain("a k-plane needs at least one variable".into()));
        }
        let entries = (0..mat.m())
            .map(|i| {
                (0..mat.n())
                    .map(|j| mat.get(i, j).coeffs().iter().map(format_rational).collect())
                    .collect()
            })
            .collect();
        Ok(KPlaneDoc {
            m: mat.m(),
            n: mat.n(),
            k: mat.nvars() - 1,
            entries,
        })
    }
}

pub fn read_kplane(text: &str) -> Result<LinMatrix> {
    let doc: KPlaneDoc =
        serde_json::from_str(text).map_err(|e| FanoError::Parse(format!("k-plane document: {e}")))?;
    doc.to_matrix()
}

pub fn write_kplane(mat: &LinMatrix) -> Result<String> {
    let doc = KPlaneDoc::from_matrix(mat)?;
    let mut text = serde_json::to_string(&doc).expect("document serializes");
    text.push('\n');
    Ok(text)
}
