//! Command-line front end: state files and named families in, witness
//! reports and CSV scans out.

pub mod analysis;
pub mod error;
pub mod families;
pub mod report;
pub mod scan;
pub mod state_io;

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use entvec::normalform::{normal_form, DEFAULT_MAX_ITER, DEFAULT_TOL};
use entvec::{witness, DensityMatrix, PartitionFamily};

use analysis::{parse_families, parse_questions, run_question, Options, PairSpec};
use error::{CliError, CliResult};
use families::{build_state, ParamMap};
use scan::{parse_grid, run_scan, ScanSpec};

#[derive(Debug, Parser)]
#[command(name = "entvec", version, about = "Entropy-vector witnesses for multipartite entanglement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one witness W_j(rho, C, R).
    Witness(WitnessArgs),
    /// Answer decomposability, k-separability, depth and dimensionality questions.
    Classify(ClassifyArgs),
    /// Sweep two family parameters over a grid and write CSV.
    Scan(ScanArgs),
    /// Filter a state to its local normal form.
    #[command(name = "normal-form")]
    NormalForm(NormalFormArgs),
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// State file (JSON) or inline JSON beginning with '{'.
    #[arg(long, conflicts_with = "family")]
    pub state: Option<String>,
    /// Named family: rho1, sigma, rho2, rho3, cj_global, cj_local, ghz, psi_eps, random.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameters, e.g. pA=0.1,pB=0.2,pABC=0.25.
    #[arg(long, default_value = "")]
    pub params: String,
    /// Seed for the random family.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl StateArgs {
    pub fn load(&self) -> CliResult<DensityMatrix<f64>> {
        match (&self.state, &self.family) {
            (Some(s), None) => state_io::load_state(s),
            (None, Some(f)) => build_state(f, &ParamMap::parse(&self.params)?, self.seed),
            _ => Err(CliError::parse("give either --state or --family")),
        }
    }
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Coherence pairs: "auto" or a list such as 000-111,000-110.
    #[arg(long = "C", default_value = "auto")]
    pub pairs: String,
    /// Pair budget for automatic selection (default 2 * largest local dimension).
    #[arg(long)]
    pub max_pairs: Option<usize>,
}

impl PairArgs {
    fn spec(&self) -> PairSpec {
        PairSpec::new(&self.pairs, self.max_pairs)
    }
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Partition family, e.g. "A|BC,B|AC" or "A,B".
    #[arg(long = "R", id = "R")]
    pub partitions: String,
    #[command(flatten)]
    pub pairs: PairArgs,
    /// Entry of the ordered entropy vector to bound (default |R|).
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Questions: decompose, ksep, depth, dimension, normalform.
    #[arg(long, default_value = "ksep,depth,dimension")]
    pub questions: String,
    /// Families for decompose (';'-separated); the first also sets the dimension family.
    #[arg(long = "R")]
    pub families: Option<String>,
    #[command(flatten)]
    pub pairs: PairArgs,
    /// Normal-form tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub family: String,
    /// Parameters held fixed.
    #[arg(long, default_value = "")]
    pub params: String,
    /// Two swept parameters, e.g. p=0:1:200,q=0:1:200.
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value = "ksep")]
    pub questions: String,
    #[arg(long = "R")]
    pub families: Option<String>,
    #[command(flatten)]
    pub pairs: PairArgs,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// CSV destination (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct NormalFormArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Write the filtered state here as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

fn options(
    questions: &str,
    families: Option<&str>,
    parties: usize,
    pairs: &PairArgs,
    tol: f64,
    max_iter: usize,
) -> CliResult<Options> {
    Ok(Options {
        questions: parse_questions(questions)?,
        families: families.map(|f| parse_families(f, parties)).transpose()?,
        pairs: pairs.spec(),
        tol,
        max_iter,
    })
}

fn json_string(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

/// Runs one command and returns what goes to stdout.
pub fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Witness(args) => {
            let rho = args.state.load()?;
            let n = rho.dims().parties();
            let family = PartitionFamily::parse(&args.partitions, n).map_err(|e| CliError::parse(e.to_string()))?;
            let j = args.j.unwrap_or(family.len());
            let pairs = args.pairs.spec().resolve(rho.dims())?.resolve(&rho, &family, j)?;
            let w = witness(&rho, &pairs, &family, j)?;
            Ok(if args.json { json_string(&report::witness_json(&w)) } else { report::witness_text(&w) })
        }
        Command::Classify(args) => {
            let rho = args.state.load()?;
            let n = rho.dims().parties();
            let opts = options(&args.questions, args.families.as_deref(), n, &args.pairs, args.tol, args.max_iter)?;
            let a = run_question(&rho, &opts)?;
            Ok(if args.json { json_string(&report::analysis_json(&a)) } else { report::analysis_text(&a) })
        }
        Command::Scan(args) => {
            let fixed = ParamMap::parse(&args.params)?;
            let n = families::family_parties(&args.family, &fixed)?;
            let spec = ScanSpec {
                family: args.family.clone(),
                fixed,
                axes: parse_grid(&args.grid)?,
                options: options(&args.questions, args.families.as_deref(), n, &args.pairs, args.tol, args.max_iter)?,
                seed: args.seed,
            };
            match &args.out {
                Some(path) => {
                    let file = File::create(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                    let rows = run_scan(&spec, BufWriter::new(file))?;
                    Ok(format!("wrote {rows} rows to {}\n", path.display()))
                }
                None => {
                    let mut buf = Vec::new();
                    run_scan(&spec, &mut buf)?;
                    Ok(String::from_utf8(buf).expect("csv is utf-8"))
                }
            }
        }
        Command::NormalForm(args) => {
            let rho = args.state.load()?;
            let (nf, fs) = normal_form(&rho, args.tol, args.max_iter)?;
            if let Some(path) = &args.out {
                state_io::write_state(path, &nf)?;
            }
            Ok(if args.json {
                let mut v = report::filters_json(&fs);
                v["state"] = serde_json::to_value(state_io::StateFile::from_state(&nf))?;
                json_string(&v)
            } else {
                report::filters_text(&fs)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        super::Cli::command().debug_assert();
    }
}
