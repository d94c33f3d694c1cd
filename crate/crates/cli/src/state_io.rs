//! JSON state files.
//!
//! ```json
//! {"dims": [2, 2], "matrix": [[[0.5, 0], 0, 0, [0.5, 0]], ...]}
//! ```
//!
//! Matrix entries are `[re, im]` pairs or plain reals. A pure state may be
//! given instead as `"amplitudes": [[re, im], ...]`. A document may also
//! name a family, as in `{"family": "cj_global", "params": {"q": 0.5}}`,
//! with an optional `"seed"` for the `random` family.

use std::collections::BTreeMap;
use std::path::Path;

use entvec::scalar::CMatrix;
use entvec::{DensityMatrix, HilbertDims, PureState};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::families::{build_state, ParamMap};

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(self) -> entvec::scalar::Cx<f64> {
        match self {
            Entry::Complex([re, im]) => entvec::scalar::Cx::new(re, im),
            Entry::Real(re) => entvec::scalar::Cx::new(re, 0.0),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<Entry>>,
}

impl StateFile {
    pub fn into_state(self) -> CliResult<DensityMatrix<f64>> {
        let dims = HilbertDims::new(self.dims)?;
        let d = dims.total();
        match (self.matrix, self.amplitudes) {
            (Some(rows), None) => {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(entvec::Error::DimensionMismatch(format!(
                        "matrix must be {d}x{d} for dims {:?}",
                        dims.as_slice()
                    ))
                    .into());
                }
                let mat = CMatrix::<f64>::from_fn(d, d, |r, c| rows[r][c].value());
                Ok(DensityMatrix::new(dims, mat)?)
            }
            (None, Some(amps)) => {
                let amps = amps.into_iter().map(Entry::value).collect();
                Ok(PureState::new(dims, amps)?.to_density())
            }
            _ => Err(CliError::parse("state file needs exactly one of \"matrix\" or \"amplitudes\"")),
        }
    }

    pub fn from_state(rho: &DensityMatrix<f64>) -> Self {
        let d = rho.dim();
        let matrix = (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| {
                        let z = rho.entry(r, c);
                        Entry::Complex([z.re, z.im])
                    })
                    .collect()
            })
            .collect();
        StateFile { dims: rho.dims().as_slice().to_vec(), matrix: Some(matrix), amplitudes: None }
    }
}

/// Family reference inside a state document.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    family: String,
    #[serde(default)]
    params: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    seed: u64,
}

impl FamilyDoc {
    fn into_state(self) -> CliResult<DensityMatrix<f64>> {
        let mut text = Vec::with_capacity(self.params.len());
        for (k, v) in &self.params {
            let v = match v {
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::String(s) => s.clone(),
                other => return Err(CliError::parse(format!("parameter {k} has unsupported value {other}"))),
            };
            text.push(format!("{k}={v}"));
        }
        build_state(&self.family, &ParamMap::parse(&text.join(","))?, self.seed)
    }
}

pub fn parse_state(text: &str) -> CliResult<DensityMatrix<f64>> {
    let doc: serde_json::Value = serde_json::from_str(text)?;
    if doc.get("family").is_some() {
        serde_json::from_value::<FamilyDoc>(doc)?.into_state()
    } else {
        serde_json::from_value::<StateFile>(doc)?.into_state()
    }
}

/// Reads `arg` as inline JSON when it starts with `{`, else as a path.
pub fn load_state(arg: &str) -> CliResult<DensityMatrix<f64>> {
    if arg.trim_start().starts_with('{') {
        return parse_state(arg);
    }
    let text = std::fs::read_to_string(arg).map_err(|source| CliError::Io { path: arg.into(), source })?;
    parse_state(&text)
}

pub fn state_to_json(rho: &DensityMatrix<f64>) -> String {
    serde_json::to_string(&StateFile::from_state(rho)).expect("state serializes")
}

pub fn write_state(path: &Path, rho: &DensityMatrix<f64>) -> CliResult<()> {
    std::fs::write(path, state_to_json(rho) + "\n").map_err(|source| CliError::Io { path: path.into(), source })
}
