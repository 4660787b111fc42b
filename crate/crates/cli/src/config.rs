//! Flat key=value experiment configs plus the error type shared by the
//! whole binary. `#` starts a comment; blank lines are fine; unknown or
//! duplicate keys are hard errors so typos surface immediately.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use frs::frs_code::{make_params, FrsParams};
use frs::gf::make_field;

/// Every key any subcommand understands. Which ones are required is checked
/// per command; membership here is checked at load time.
const KNOWN_KEYS: &[&str] = &[
    "p",
    "e",
    "modulus",
    "gamma",
    "n",
    "m",
    "k",
    "s",
    "variant",
    "errors",
    "error_prob",
    "channel",
    "seed",
    "trials",
    "cap",
    "t",
    "r",
    "t_p",
    "seeds",
    "subspaces",
    "size_samples",
    "s_min",
    "s_max",
    "m_min",
    "m_max",
    "rates",
];

#[derive(Debug)]
pub enum CliError {
    Core(frs::Error),
    Msg(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Msg(m) => write!(f, "{m}"),
        }
    }
}

impl From<frs::Error> for CliError {
    fn from(e: frs::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Msg(format!("io: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Msg(format!("json: {e}"))
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(frs::Error::CapExceeded { .. }) => 2,
            CliError::Core(frs::Error::Internal(_)) => 3,
            _ => 1,
        }
    }
}

pub struct Config {
    map: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Msg(format!("config {}: {e}", path.display())))?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Msg(format!(
                    "config line {}: expected key=value, got '{line}'",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Msg(format!(
                    "config line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            if map.insert(key.clone(), value).is_some() {
                return Err(CliError::Msg(format!(
                    "config line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
        }
        Ok(Config { map })
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    /// Parses an optional key; absent is Ok(None), unparsable is an error.
    pub fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Msg(format!("config key '{key}' = '{v}': {e}"))),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        self.parse(key)?
            .ok_or_else(|| CliError::Msg(format!("config key '{key}' is required")))
    }

    /// Comma-separated list value.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T::Err: fmt::Display,
    {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|part| {
                    part.trim().parse::<T>().map_err(|e| {
                        CliError::Msg(format!("config key '{key}', entry '{}': {e}", part.trim()))
                    })
                })
                .collect::<Result<Vec<T>, CliError>>()
                .map(Some),
        }
    }
}

/// Builds the field and code from the `p, e, modulus?, gamma?, n, m, k`
/// keys, revalidating every invariant through the library constructors.
pub fn code_setup(cfg: &Config) -> Result<FrsParams, CliError> {
    let p = cfg.require::<u64>("p")?;
    let e = cfg.parse::<u32>("e")?.unwrap_or(1);
    let modulus = cfg.list::<u64>("modulus")?;
    let ctx = make_field(p, e, modulus.as_deref())?;
    let n = cfg.require::<usize>("n")?;
    let m = cfg.require::<usize>("m")?;
    let k = cfg.require::<usize>("k")?;
    match cfg.parse::<u64>("gamma")? {
        Some(g) => Ok(make_params(&ctx, ctx.elem(g)?, n, m, k)?),
        None => Ok(FrsParams::with_default_gamma(&ctx, n, m, k)?),
    }
}
