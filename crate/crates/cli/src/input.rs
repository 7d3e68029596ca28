//! Loading a network from a file or a `--generate` spec string.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use jpdprof::{generate, parse_bif, parse_native, Family, GenSpec, Network};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    /// Pick by extension: `.bif` is BIF, anything else native JSON.
    Auto,
    Native,
    Bif,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NetArgs {
    /// Network file (native JSON or BIF).
    #[arg(conflicts_with = "generate")]
    pub input: Option<PathBuf>,
    /// Generate the network instead, e.g. `identical:n=10,k=2,p=0.1,0.9`,
    /// `identically_distributed:n=10,iv=0:0.1,0.9:1`, `dirichlet:n=8,k=3,alpha=0.5`.
    /// Extra keys: `indeg=` (max in-degree, default 0), `seed=` (default 0).
    #[arg(long, value_name = "SPEC")]
    pub generate: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    pub format: Format,
    /// Keep only these variables (comma-separated; must include all their
    /// parents).
    #[arg(long, value_delimiter = ',', value_name = "NAMES")]
    pub subset: Vec<String>,
}

/// Where the network came from, for the manifest.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    File {
        path: PathBuf,
        format: Format,
        sha256: String,
    },
    Generated(GenSpec),
}

pub struct Loaded {
    pub net: Network,
    pub source: Source,
}

pub fn load(args: &NetArgs) -> Result<Loaded, CliError> {
    let (net, source) = match (&args.input, &args.generate) {
        (_, Some(spec)) => {
            let spec = parse_gen_spec(spec)?;
            let net = generate(&spec).map_err(|e| CliError::input(e.to_string()))?;
            (net, Source::Generated(spec))
        }
        (Some(path), None) => load_file(path, args.format)?,
        (None, None) => return Err(CliError::input("no network given (use a file or --generate)")),
    };
    let net = if args.subset.is_empty() {
        net
    } else {
        let names: Vec<&str> = args.subset.iter().map(String::as_str).collect();
        net.subnetwork(&names)
            .map_err(|e| CliError::input(format!("--subset: {e}")))?
    };
    Ok(Loaded { net, source })
}

fn load_file(path: &Path, format: Format) -> Result<(Network, Source), CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::input(format!("{}: not UTF-8: {e}", path.display())))?;
    let format = match format {
        Format::Auto if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("bif")) => Format::Bif,
        Format::Auto => Format::Native,
        f => f,
    };
    let parsed = match format {
        Format::Bif => parse_bif(text),
        _ => parse_native(text),
    };
    let net = parsed.map_err(|e| CliError::input(format!("{}:{e}", path.display())))?;
    let source = Source::File {
        path: path.to_path_buf(),
        format,
        sha256: sha256_hex(&bytes),
    };
    Ok((net, source))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parses `family:key=value,...`. A comma-separated token without `=`
/// continues the previous key's list, so `p=0.1,0.9` is one key.
pub fn parse_gen_spec(text: &str) -> Result<GenSpec, CliError> {
    let bad = |msg: String| CliError::input(format!("--generate {text}: {msg}"));
    let (family, rest) = text
        .split_once(':')
        .ok_or_else(|| bad("expected `family:key=value,...`".into()))?;
    let mut keys: Vec<(String, Vec<String>)> = Vec::new();
    for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok.split_once('=') {
            Some((k, v)) => keys.push((k.trim().to_string(), vec![v.trim().to_string()])),
            None => match keys.last_mut() {
                Some((_, vals)) => vals.push(tok.to_string()),
                None => return Err(bad(format!("value `{tok}` has no key"))),
            },
        }
    }
    let get = |names: &[&str]| -> Option<&Vec<String>> {
        keys.iter().find(|(k, _)| names.contains(&k.as_str())).map(|(_, v)| v)
    };
    for (k, _) in &keys {
        let known = [
            "n", "k", "p", "probs", "iv", "intervals", "alpha", "concentration", "indeg",
            "max_in_degree", "seed",
        ];
        if !known.contains(&k.as_str()) {
            return Err(bad(format!("unknown key `{k}`")));
        }
    }
    let one = |names: &[&str]| -> Result<Option<&str>, CliError> {
        match get(names) {
            None => Ok(None),
            Some(v) if v.len() == 1 => Ok(Some(v[0].as_str())),
            Some(_) => Err(bad(format!("`{}` takes one value", names[0]))),
        }
    };
    let number = |s: &str| -> Result<f64, CliError> {
        s.parse::<f64>().map_err(|_| bad(format!("`{s}` is not a number")))
    };
    let int = |names: &[&str]| -> Result<Option<u64>, CliError> {
        one(names)?
            .map(|s| s.parse::<u64>().map_err(|_| bad(format!("`{s}` is not an integer"))))
            .transpose()
    };

    let n = int(&["n"])?.ok_or_else(|| bad("missing `n`".into()))? as usize;
    let explicit_k = int(&["k"])?.map(|k| k as usize);
    let max_in_degree = int(&["indeg", "max_in_degree"])?.unwrap_or(0) as usize;
    let seed = int(&["seed"])?.unwrap_or(0);

    let (family, implied_k) = match family.trim() {
        "identical" => {
            let probs = get(&["p", "probs"])
                .ok_or_else(|| bad("missing `p`".into()))?
                .iter()
                .map(|s| number(s))
                .collect::<Result<Vec<_>, _>>()?;
            let k = probs.len();
            (Family::Identical { probs }, Some(k))
        }
        "identically_distributed" | "intervals" => {
            let intervals = get(&["iv", "intervals"])
                .ok_or_else(|| bad("missing `iv`".into()))?
                .iter()
                .map(|s| {
                    let (lo, hi) = s
                        .split_once(':')
                        .ok_or_else(|| bad(format!("interval `{s}` is not `lo:hi`")))?;
                    Ok((number(lo)?, number(hi)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            // with k omitted, the intervals cover every outcome
            let k = intervals.len();
            (Family::IdenticallyDistributed { intervals }, Some(k))
        }
        "dirichlet" => {
            let alpha = one(&["alpha", "concentration"])?.map_or(Ok(1.0), number)?;
            (Family::Dirichlet { concentration: alpha }, None)
        }
        other => return Err(bad(format!("unknown family `{other}`"))),
    };
    let k = match (explicit_k, implied_k) {
        (Some(k), _) => k,
        (None, Some(k)) => k,
        (None, None) => 2,
    };
    Ok(GenSpec {
        family,
        n,
        k,
        max_in_degree,
        seed,
    })
}
