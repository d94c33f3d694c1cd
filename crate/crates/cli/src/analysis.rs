//! Questions asked of one state and the options shared by `classify` and
//! `scan`.

use std::fmt;
use std::str::FromStr;

use entvec::classify::{
    dimensionality_vector_bound, entanglement_depth, k_separability_scan, not_decomposable, ClassificationReport,
};
use entvec::normalform::{normal_form, FilterSet};
use entvec::partitions::all_bipartitions;
use entvec::{DensityMatrix, HilbertDims, PairChoice, PairSet, PartitionFamily};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Question {
    /// Filter to the normal form first, then answer the rest on the result.
    NormalForm,
    Decompose,
    Ksep,
    Depth,
    Dimension,
}

impl FromStr for Question {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim() {
            "decompose" => Ok(Question::Decompose),
            "ksep" => Ok(Question::Ksep),
            "depth" => Ok(Question::Depth),
            "dimension" => Ok(Question::Dimension),
            "normalform" | "normal-form" => Ok(Question::NormalForm),
            other => Err(CliError::parse(format!(
                "unknown question '{other}' (use decompose, ksep, depth, dimension, normalform)"
            ))),
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Question::NormalForm => "normalform",
            Question::Decompose => "decompose",
            Question::Ksep => "ksep",
            Question::Depth => "depth",
            Question::Dimension => "dimension",
        })
    }
}

/// Sorted, de-duplicated list of questions from `ksep,depth,...`.
pub fn parse_questions(text: &str) -> CliResult<Vec<Question>> {
    let mut qs = text
        .split([',', '+'])
        .filter(|s| !s.trim().is_empty())
        .map(Question::from_str)
        .collect::<CliResult<Vec<_>>>()?;
    if qs.is_empty() {
        return Err(CliError::parse("no questions given"));
    }
    qs.sort();
    qs.dedup();
    Ok(qs)
}

/// Partition families from `--R`: families separated by `;`, bipartitions
/// within a family by `,`.
pub fn parse_families(text: &str, parties: usize) -> CliResult<Vec<PartitionFamily>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|f| PartitionFamily::parse(f.trim(), parties).map_err(|e| CliError::parse(e.to_string())))
        .collect()
}

/// Default decomposability families: every bipartition on its own, then all
/// of them together.
pub fn default_families(parties: usize) -> CliResult<Vec<PartitionFamily>> {
    let all = all_bipartitions(parties)?;
    let mut out: Vec<PartitionFamily> =
        all.iter().map(|s| PartitionFamily::new(parties, vec![s])).collect::<entvec::Result<_>>()?;
    if all.len() > 1 {
        out.push(all);
    }
    Ok(out)
}

/// `auto` or an explicit pair list.
#[derive(Clone, Debug, PartialEq)]
pub enum PairSpec {
    Auto(Option<usize>),
    Fixed(String),
}

impl PairSpec {
    pub fn new(text: &str, max_pairs: Option<usize>) -> Self {
        if text.trim().eq_ignore_ascii_case("auto") {
            PairSpec::Auto(max_pairs)
        } else {
            PairSpec::Fixed(text.trim().to_string())
        }
    }

    pub fn resolve(&self, dims: &HilbertDims) -> CliResult<PairChoice> {
        Ok(match self {
            PairSpec::Auto(budget) => PairChoice::Auto(*budget),
            PairSpec::Fixed(text) => {
                PairChoice::Fixed(PairSet::parse(text, dims).map_err(|e| CliError::parse(e.to_string()))?)
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub questions: Vec<Question>,
    /// Families for `decompose`; the first one is also used by `dimension`
    /// when given explicitly.
    pub families: Option<Vec<PartitionFamily>>,
    pub pairs: PairSpec,
    pub tol: f64,
    pub max_iter: usize,
}

impl Options {
    pub fn decompose_families(&self, parties: usize) -> CliResult<Vec<PartitionFamily>> {
        match &self.families {
            Some(f) => Ok(f.clone()),
            None => default_families(parties),
        }
    }

    pub fn dimension_family(&self, parties: usize) -> CliResult<PartitionFamily> {
        match self.families.as_ref().and_then(|f| f.first()) {
            Some(f) => Ok(f.clone()),
            None => Ok(PartitionFamily::single_parties(parties)?),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub dims: HilbertDims,
    pub questions: Vec<Question>,
    pub filters: Option<FilterSet<f64>>,
    pub report: ClassificationReport<f64>,
}

/// Answers the requested questions for one state.
pub fn run_question(rho: &DensityMatrix<f64>, options: &Options) -> CliResult<Analysis> {
    let n = rho.dims().parties();
    let choice = options.pairs.resolve(rho.dims())?;
    let mut filters = None;
    let mut state = rho.clone();
    if options.questions.contains(&Question::NormalForm) {
        let (nf, fs) = normal_form(rho, options.tol, options.max_iter)?;
        state = nf;
        filters = Some(fs);
    }
    let mut report = ClassificationReport::default();
    for q in &options.questions {
        match q {
            Question::NormalForm => {}
            Question::Decompose => {
                for fam in options.decompose_families(n)? {
                    report.decomposability.push(not_decomposable(&state, &fam, &choice)?);
                }
            }
            Question::Ksep => report.k_separability = Some(k_separability_scan(&state, &choice)?),
            Question::Depth => report.depth = Some(entanglement_depth(&state, &choice)?),
            Question::Dimension => {
                let fam = options.dimension_family(n)?;
                report.dimensionality = Some(dimensionality_vector_bound(&state, &fam, &choice)?);
            }
        }
    }
    Ok(Analysis { dims: rho.dims().clone(), questions: options.questions.clone(), filters, report })
}
