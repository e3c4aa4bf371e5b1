//! Input loading: zero tables (text or binary cache, sniffed by magic),
//! relation systems (file or built-in example name), α vectors (inline
//! decimals, JSON file, or solved from relations), and test functions.

use std::io::{BufReader, Read, Seek, SeekFrom};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use zetafrac::density::{TestFunction, TestTerm};
use zetafrac::error::{Error, Result};
use zetafrac::relations::{examples, solve_alpha, AlphaVector, ExactTerm, RelationSystem};
use zetafrac::xprec::XCtx;
use zetafrac::zeros::ZeroSet;

/// Load a zero table, accepting either the binary cache (sniffed via its
/// magic) or a text table of one γ per line.
pub fn load_zeros(path: &Path) -> Result<ZeroSet> {
    let mut file = std::fs::File::open(path)?;
    let mut magic = [0u8; 4];
    let n = file.read(&mut magic)?;
    file.seek(SeekFrom::Start(0))?;
    if n == 4 && &magic == b"ZFPZ" {
        ZeroSet::load_cache(BufReader::new(file))
    } else {
        ZeroSet::parse_zeros(BufReader::new(file))
    }
}

/// Load a relation system from a JSON file, or take a built-in example
/// by name (`example1`, `example2`).  The system is validated.
pub fn load_relations(source: &str) -> Result<RelationSystem> {
    let system = match source {
        "example1" => examples::example1(),
        "example2" => examples::example2(),
        path => serde_json::from_str(&std::fs::read_to_string(path)?)?,
    };
    system.validate()?;
    Ok(system)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphaFile {
    #[serde(default)]
    decimals: Option<Vec<String>>,
    #[serde(default)]
    exact: Option<Vec<Vec<ExactTerm>>>,
}

/// The three mutually exclusive α sources surfaced as flags.
#[derive(Debug, Clone, clap::Args)]
pub struct AlphaSource {
    /// Inline α as comma-separated decimals, e.g. "0.30103,0.1761"
    #[arg(long, value_name = "DECIMALS")]
    pub alpha: Option<String>,
    /// JSON file with {"decimals": [..]} or {"exact": [[{num,den,p},..],..]}
    #[arg(long, value_name = "FILE", conflicts_with = "alpha")]
    pub alpha_file: Option<PathBuf>,
    /// Solve α exactly from a relation system (file or example name)
    #[arg(long, value_name = "FILE|example1|example2", conflicts_with_all = ["alpha", "alpha_file"])]
    pub relations: Option<String>,
}

impl AlphaSource {
    /// Resolve to an α vector; exactly one source must be given.
    pub fn resolve(&self, ctx: &XCtx) -> Result<AlphaVector> {
        match (&self.alpha, &self.alpha_file, &self.relations) {
            (Some(inline), None, None) => {
                let decimals: Vec<String> =
                    inline.split(',').map(|s| s.trim().to_string()).collect();
                AlphaVector::from_decimals(ctx, &decimals)
            }
            (None, Some(path), None) => {
                let spec: AlphaFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                match (spec.decimals, spec.exact) {
                    (Some(decimals), None) => AlphaVector::from_decimals(ctx, &decimals),
                    (None, Some(exact)) => AlphaVector::from_exact(ctx, exact),
                    _ => Err(Error::Config(format!(
                        "{}: give exactly one of \"decimals\" or \"exact\"",
                        path.display()
                    ))),
                }
            }
            (None, None, Some(source)) => solve_alpha(ctx, &load_relations(source)?),
            _ => Err(Error::Config(
                "give exactly one α source: --alpha, --alpha-file, or --relations".into(),
            )),
        }
    }
}

/// Load an h-spec (JSON list of {"m", "re", "im"}) into a test function,
/// completing Hermitian symmetry; `n` is the torus dimension.
pub fn load_h_spec(path: Option<&PathBuf>, default_terms: &[TestTerm], n: usize) -> Result<TestFunction> {
    let terms: Vec<TestTerm> = match path {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
        None => default_terms.to_vec(),
    };
    TestFunction::from_terms(n, &terms)
}

/// Parse a comma-separated list.
pub fn parse_list<T: std::str::FromStr>(input: &str, what: &str) -> Result<Vec<T>> {
    input
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| Error::Config(format!("cannot parse {what} entry `{s}`")))
        })
        .collect()
}

/// Resolve explicit heights or 1-based zero indices into a T list.
pub fn resolve_t_list(
    zeros: &ZeroSet,
    t_list: Option<&String>,
    t_indices: Option<&String>,
) -> Result<Vec<f64>> {
    match (t_list, t_indices) {
        (Some(list), None) => parse_list(list, "--t-list"),
        (None, Some(list)) => parse_list::<usize>(list, "--t-indices")?
            .into_iter()
            .map(|k| {
                zeros.nth(k).ok_or_else(|| Error::Domain(format!(
                    "--t-indices: zero #{k} is beyond the table ({} zeros)",
                    zeros.count()
                )))
            })
            .collect(),
        (None, None) => Err(Error::Config("give --t-list or --t-indices".into())),
        _ => Err(Error::Config("give only one of --t-list / --t-indices".into())),
    }
}

/// Resolve a single T from an explicit height or a 1-based zero index.
pub fn resolve_t(zeros: &ZeroSet, t: Option<f64>, t_index: Option<usize>) -> Result<f64> {
    match (t, t_index) {
        (Some(t), None) => Ok(t),
        (None, Some(k)) => zeros.nth(k).ok_or_else(|| {
            Error::Domain(format!(
                "--t-index: zero #{k} is beyond the table ({} zeros)",
                zeros.count()
            ))
        }),
        (None, None) => Err(Error::Config("give --t or --t-index".into())),
        _ => Err(Error::Config("give only one of --t / --t-index".into())),
    }
}
