//! Named state families addressable as `--family NAME --params k=v,...`.

use std::collections::BTreeMap;
use std::fmt;

use entvec::oracle::{random_mixed_state, trial_rng};
use entvec::states::{self, Rho1Params, Rho2Params, Rho3Params};
use entvec::tensor::normalize;
use entvec::{DensityMatrix, HilbertDims};

use crate::error::{CliError, CliResult};

/// Parameter map parsed from `k=v,k=v`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamMap(BTreeMap<String, String>);

impl ParamMap {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut map = BTreeMap::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) =
                item.split_once('=').ok_or_else(|| CliError::parse(format!("parameter '{item}' is not key=value")))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(CliError::parse(format!("parameter '{}' given twice", k.trim())));
            }
        }
        Ok(ParamMap(map))
    }

    pub fn set(&mut self, key: &str, value: f64) {
        self.0.insert(key.to_string(), value.to_string());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn real(&self, key: &str) -> CliResult<Option<f64>> {
        self.raw(key)
            .map(|v| v.parse::<f64>().map_err(|_| CliError::parse(format!("parameter {key}='{v}' is not a number"))))
            .transpose()
    }

    fn real_or(&self, key: &str, default: f64) -> CliResult<f64> {
        Ok(self.real(key)?.unwrap_or(default))
    }

    fn required(&self, key: &str, family: &str) -> CliResult<f64> {
        self.real(key)?.ok_or_else(|| CliError::parse(format!("family {family} needs parameter {key}")))
    }

    fn count(&self, key: &str, default: usize) -> CliResult<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse::<usize>().map_err(|_| CliError::parse(format!("parameter {key}='{v}' is not a count"))),
        }
    }
}

impl fmt::Display for ParamMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&items.join(","))
    }
}

/// Families and their accepted parameter keys.
pub const FAMILIES: &[(&str, &[&str])] = &[
    ("rho1", &["pA", "pB", "pC", "pABC"]),
    ("sigma", &["pA", "pB", "pC", "pABC"]),
    ("rho2", &["N", "alpha", "beta", "p", "q"]),
    ("rho3", &["p", "q"]),
    ("cj_global", &["q"]),
    ("cj_local", &["q1", "q2"]),
    ("ghz", &["N", "d", "c0", "c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9"]),
    ("psi_eps", &["eps"]),
    ("random", &["dims", "rank"]),
];

fn known_keys(family: &str) -> CliResult<&'static [&'static str]> {
    FAMILIES.iter().find(|(name, _)| *name == family).map(|(_, keys)| *keys).ok_or_else(|| {
        let names: Vec<&str> = FAMILIES.iter().map(|(n, _)| *n).collect();
        CliError::parse(format!("unknown family '{family}' (known: {})", names.join(", ")))
    })
}

pub fn check_keys(family: &str, params: &ParamMap) -> CliResult<()> {
    let keys = known_keys(family)?;
    for k in params.keys() {
        if !keys.contains(&k) {
            return Err(CliError::parse(format!(
                "family {family} has no parameter '{k}' (accepted: {})",
                keys.join(", ")
            )));
        }
    }
    Ok(())
}

/// Weights of the `rho1`/`sigma` families; one omitted weight is the
/// remainder to 1.
fn rho1_params(params: &ParamMap) -> CliResult<Rho1Params> {
    let keys = ["pA", "pB", "pC", "pABC"];
    let values: Vec<Option<f64>> = keys.iter().map(|k| params.real(k)).collect::<CliResult<_>>()?;
    let missing: Vec<usize> = (0..4).filter(|&i| values[i].is_none()).collect();
    let mut w = [0.0; 4];
    match missing.as_slice() {
        [] => {
            for i in 0..4 {
                w[i] = values[i].unwrap_or_default();
            }
        }
        [m] => {
            let given: f64 = values.iter().flatten().sum();
            for i in 0..4 {
                w[i] = values[i].unwrap_or_default();
            }
            let rest = 1.0 - given;
            // absorb rounding from grid arithmetic
            w[*m] = if rest < 0.0 && rest > -1e-12 { 0.0 } else { rest };
        }
        _ => return Err(CliError::parse("give at least three of pA, pB, pC, pABC (the fourth is the remainder)")),
    }
    Ok(Rho1Params::new(w[0], w[1], w[2], w[3])?)
}

/// Number of parties of a family without building the state.
pub fn family_parties(family: &str, params: &ParamMap) -> CliResult<usize> {
    known_keys(family)?;
    Ok(match family {
        "rho2" => params.count("N", 5)?,
        "ghz" => params.count("N", 3)?,
        "cj_global" | "cj_local" => 4,
        "random" => parse_dims(params)?.parties(),
        _ => 3,
    })
}

fn parse_dims(params: &ParamMap) -> CliResult<HilbertDims> {
    let text = params.raw("dims").unwrap_or("2x2x2");
    let dims = text
        .split('x')
        .map(|d| d.trim().parse::<usize>().map_err(|_| CliError::parse(format!("dims='{text}' is not like 2x2x3"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(HilbertDims::new(dims)?)
}

/// Builds a unit-trace state of the named family.
pub fn build_state(family: &str, params: &ParamMap, seed: u64) -> CliResult<DensityMatrix<f64>> {
    check_keys(family, params)?;
    let rho = match family {
        "rho1" => states::rho1(&rho1_params(params)?)?,
        "sigma" => normalize(&states::sigma_filtered(&rho1_params(params)?)?)?,
        "rho2" => {
            let n = params.count("N", 5)?;
            let (alpha, beta) = match (params.real("alpha")?, params.real("beta")?) {
                (None, None) => (0.5f64.sqrt(), 0.5f64.sqrt()),
                (Some(a), None) => (a, (1.0 - a * a).max(0.0).sqrt()),
                (None, Some(b)) => ((1.0 - b * b).max(0.0).sqrt(), b),
                (Some(a), Some(b)) => (a, b),
            };
            let p = params.required("p", family)?;
            let q = params.required("q", family)?;
            states::rho2(&Rho2Params::new(n, alpha, beta, p, q)?)?
        }
        "rho3" => states::rho3(&Rho3Params::new(params.required("p", family)?, params.required("q", family)?)?)?,
        "cj_global" => states::cj_global(params.required("q", family)?)?,
        "cj_local" => states::cj_local(params.required("q1", family)?, params.required("q2", family)?)?,
        "ghz" => {
            let n = params.count("N", 3)?;
            let d = params.count("d", 2)?;
            let given = (0..d).any(|i| params.contains(&format!("c{i}")));
            if given {
                let coeffs = (0..d).map(|i| params.real_or(&format!("c{i}"), 0.0)).collect::<CliResult<Vec<f64>>>()?;
                states::ghz(n, d, &coeffs)?.to_density()
            } else {
                states::ghz_balanced(n, d)?.to_density()
            }
        }
        "psi_eps" => states::psi_eps(params.required("eps", family)?)?.to_density(),
        "random" => {
            let dims = parse_dims(params)?;
            let rank = params.count("rank", dims.total())?;
            random_mixed_state(&dims, rank, &mut trial_rng(seed, 0))?
        }
        _ => unreachable!("checked by known_keys"),
    };
    Ok(rho)
}
