//! Two-parameter grid scans written as CSV.
//!
//! Points are evaluated in parallel and emitted in row-major order (first
//! axis outer). Points whose parameters fall outside the family's domain
//! (for example `q > p` for `rho2`) are kept as rows with `valid = 0` and
//! empty result columns, so every scan has exactly `steps1 * steps2` rows.

use std::io::Write;

use entvec::partitions::max_depth_level;
use rayon::prelude::*;

use crate::analysis::{run_question, Analysis, Options, Question};
use crate::error::{CliError, CliResult};
use crate::families::{build_state, check_keys, family_parties, ParamMap};

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    /// Parses `name=min:max:steps`.
    pub fn parse(text: &str) -> CliResult<Self> {
        let bad = || CliError::parse(format!("grid axis '{text}' is not name=min:max:steps"));
        let (name, range) = text.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [min, max, steps] = parts.as_slice() else { return Err(bad()) };
        let min: f64 = min.trim().parse().map_err(|_| bad())?;
        let max: f64 = max.trim().parse().map_err(|_| bad())?;
        let steps: usize = steps.trim().parse().map_err(|_| bad())?;
        if steps == 0 || !min.is_finite() || !max.is_finite() {
            return Err(bad());
        }
        if steps > 1 && max < min {
            return Err(CliError::parse(format!("grid axis '{text}' has max < min")));
        }
        Ok(Axis { name: name.trim().to_string(), min, max, steps })
    }

    /// Grid values; a single step sits at `min`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.max } else { self.min + h * i as f64 }).collect()
    }
}

/// Parses `p=0:1:200,q=0:1:200` into exactly two axes.
pub fn parse_grid(text: &str) -> CliResult<[Axis; 2]> {
    let axes = text.split(',').filter(|s| !s.trim().is_empty()).map(Axis::parse).collect::<CliResult<Vec<_>>>()?;
    match <[Axis; 2]>::try_from(axes) {
        Ok(a) if a[0].name != a[1].name => Ok(a),
        Ok(_) => Err(CliError::parse("the two grid axes must sweep different parameters")),
        Err(v) => Err(CliError::parse(format!("a scan sweeps exactly two parameters, got {}", v.len()))),
    }
}

#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub family: String,
    pub fixed: ParamMap,
    pub axes: [Axis; 2],
    pub options: Options,
    pub seed: u64,
}

const STRUCTURAL: &[&str] = &["N", "d", "dims", "rank"];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

/// Column layout, fixed by the family's party count.
struct Layout {
    parties: usize,
    decompose: Vec<String>,
    dimension_levels: usize,
    questions: Vec<Question>,
}

impl Layout {
    fn new(spec: &ScanSpec) -> CliResult<Self> {
        let parties = family_parties(&spec.family, &spec.fixed)?;
        let q = &spec.options.questions;
        let decompose = if q.contains(&Question::Decompose) {
            spec.options.decompose_families(parties)?.iter().map(|f| f.labels().join("+")).collect()
        } else {
            Vec::new()
        };
        let dimension_levels =
            if q.contains(&Question::Dimension) { spec.options.dimension_family(parties)?.len() } else { 0 };
        Ok(Layout { parties, decompose, dimension_levels, questions: q.clone() })
    }

    fn header(&self, axes: &[Axis; 2]) -> Vec<String> {
        let mut h = vec![axes[0].name.clone(), axes[1].name.clone(), "valid".into(), "status".into()];
        for q in &self.questions {
            match q {
                Question::NormalForm => {
                    h.extend(["nf_steps".into(), "nf_flatness".into(), "nf_converged".into()]);
                }
                Question::Decompose => {
                    for label in &self.decompose {
                        h.push(format!("w_decompose[{label}]"));
                        h.push(format!("not_decomposable[{label}]"));
                    }
                }
                Question::Ksep => {
                    for k in (1..self.parties).rev() {
                        h.push(format!("w_ksep_k{k}"));
                    }
                    h.push("ksep_certified_k".into());
                }
                Question::Depth => {
                    for m in 0..=max_depth_level(self.parties) {
                        h.push(format!("w_depth_m{m}"));
                    }
                    h.push("depth".into());
                }
                Question::Dimension => {
                    for j in 1..=self.dimension_levels {
                        h.push(format!("w_dim_j{j}"));
                    }
                    for j in 1..=self.dimension_levels {
                        h.push(format!("dim_j{j}"));
                    }
                }
            }
        }
        h
    }

    fn width(&self, axes: &[Axis; 2]) -> usize {
        self.header(axes).len()
    }

    fn cells(&self, a: &Analysis) -> Vec<String> {
        let w = |e: &entvec::classify::Evidence<f64>| e.as_ref().map_or(String::new(), |r| num(r.value));
        let mut out = Vec::new();
        let r = &a.report;
        for q in &self.questions {
            match q {
                Question::NormalForm => {
                    let fs = a.filters.as_ref().expect("normal form computed");
                    out.extend([fs.steps.to_string(), num(fs.flatness), flag(fs.converged)]);
                }
                Question::Decompose => {
                    for v in &r.decomposability {
                        out.push(w(&v.evidence));
                        out.push(flag(v.not_decomposable));
                    }
                }
                Question::Ksep => {
                    let ks = r.k_separability.as_ref().expect("ksep computed");
                    out.extend(ks.levels.iter().map(|l| w(&l.evidence)));
                    out.push(ks.certified_k.map_or(String::new(), |k| k.to_string()));
                }
                Question::Depth => {
                    let d = r.depth.as_ref().expect("depth computed");
                    for m in 0..=max_depth_level(self.parties) {
                        out.push(d.levels.get(m).map_or(String::new(), |l| w(&l.evidence)));
                    }
                    out.push(d.depth.map_or(String::new(), |x| x.to_string()));
                }
                Question::Dimension => {
                    let d = r.dimensionality.as_ref().expect("dimension computed");
                    out.extend(d.levels.iter().map(|l| w(&l.evidence)));
                    out.extend(d.levels.iter().map(|l| l.dimension.to_string()));
                }
            }
        }
        out
    }
}

fn status_of(e: &CliError) -> Option<&'static str> {
    match e {
        CliError::Core(entvec::Error::InvalidParameter(_)) => Some("invalid-params"),
        CliError::Core(entvec::Error::SingularMarginal { .. }) => Some("singular-marginal"),
        _ => None,
    }
}

fn evaluate_point(spec: &ScanSpec, layout: &Layout, x: f64, y: f64) -> CliResult<Vec<String>> {
    let mut params = spec.fixed.clone();
    params.set(&spec.axes[0].name, x);
    params.set(&spec.axes[1].name, y);
    let mut row = vec![num(x), num(y)];
    let result = build_state(&spec.family, &params, spec.seed).and_then(|rho| run_question(&rho, &spec.options));
    match result {
        Ok(a) => {
            row.extend(["1".to_string(), "ok".to_string()]);
            row.extend(layout.cells(&a));
        }
        Err(e) => {
            let status = status_of(&e).ok_or(e)?;
            row.extend(["0".to_string(), status.to_string()]);
        }
    }
    row.resize(layout.width(&spec.axes), String::new());
    Ok(row)
}

fn validate(spec: &ScanSpec) -> CliResult<()> {
    check_keys(&spec.family, &spec.fixed)?;
    for axis in &spec.axes {
        if STRUCTURAL.contains(&axis.name.as_str()) {
            return Err(CliError::parse(format!("cannot sweep structural parameter '{}'", axis.name)));
        }
        if spec.fixed.contains(&axis.name) {
            return Err(CliError::parse(format!("'{}' is both fixed and swept", axis.name)));
        }
        let mut probe = ParamMap::default();
        probe.set(&axis.name, 0.0);
        check_keys(&spec.family, &probe)?;
    }
    Ok(())
}

/// Evaluates the grid and writes CSV (header plus one row per point).
pub fn run_scan<W: Write>(spec: &ScanSpec, out: W) -> CliResult<usize> {
    validate(spec)?;
    let layout = Layout::new(spec)?;
    let xs = spec.axes[0].values();
    let ys = spec.axes[1].values();
    let points: Vec<(f64, f64)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
    let rows = points.par_iter().map(|&(x, y)| evaluate_point(spec, &layout, x, y)).collect::<CliResult<Vec<_>>>()?;
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(layout.header(&spec.axes))?;
    for row in &rows {
        writer.write_record(row)?;
    }
    writer.flush().map_err(|source| CliError::Io { path: "<csv>".into(), source })?;
    Ok(rows.len())
}
