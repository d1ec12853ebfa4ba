//! Shared plumbing: error-to-exit-code mapping, config-file merging,
//! output targets, and CSV escaping.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use negadrift::report::Record;

#[derive(Debug)]
pub enum CliError {
    Domain(negadrift::Error),
    Schema(String),
    Io(io::Error),
}

impl From<negadrift::Error> for CliError {
    fn from(e: negadrift::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn schema(msg: impl Into<String>) -> Self {
        CliError::Schema(msg.into())
    }

    /// 2 for rejected inputs (usage, schema, precondition), 1 for internal
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) | CliError::Schema(_) => 2,
            CliError::Io(_) => 1,
        }
    }

    pub fn to_record(&self) -> Record {
        let (kind, message) = match self {
            CliError::Domain(e) => (e.kind(), e.to_string()),
            CliError::Schema(m) => ("schema", m.clone()),
            CliError::Io(e) => ("io", e.to_string()),
        };
        Record::new().with("error", kind).with("message", message)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A flat JSON config document mirroring the command's flags. Every key
/// must be consumed by the command; leftovers are schema violations.
pub struct ConfigMap {
    values: serde_json::Map<String, serde_json::Value>,
    source: String,
}

impl ConfigMap {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(ConfigMap {
                values: serde_json::Map::new(),
                source: String::new(),
            });
        };
        let text = fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::schema(format!("config {path:?} is not valid JSON: {e}")))?;
        match value {
            serde_json::Value::Object(values) => Ok(ConfigMap {
                values,
                source: path.display().to_string(),
            }),
            _ => Err(CliError::schema(format!(
                "config {path:?} must be a flat JSON object"
            ))),
        }
    }

    fn take(&mut self, key: &str) -> Option<serde_json::Value> {
        self.values.remove(key)
    }

    pub fn f64(&mut self, key: &str) -> CliResult<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| CliError::schema(format!("config key {key:?} must be a number"))),
        }
    }

    pub fn u64(&mut self, key: &str) -> CliResult<Option<u64>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(Some).ok_or_else(|| {
                CliError::schema(format!("config key {key:?} must be a non-negative integer"))
            }),
        }
    }

    pub fn string(&mut self, key: &str) -> CliResult<Option<String>> {
        match self.take(key) {
            None => Ok(None),
            Some(serde_json::Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(CliError::schema(format!(
                "config key {key:?} must be a string"
            ))),
        }
    }

    /// Fails on unconsumed keys so typos never pass silently.
    pub fn finish(self) -> CliResult<()> {
        if self.values.is_empty() {
            Ok(())
        } else {
            let keys: Vec<&String> = self.values.keys().collect();
            Err(CliError::schema(format!(
                "config {} has unknown keys: {keys:?}",
                self.source
            )))
        }
    }
}

/// Pick the flag value, then the config value, then fail with the flag name.
pub fn require<T>(flag: Option<T>, from_config: Option<T>, name: &str) -> CliResult<T> {
    flag.or(from_config)
        .ok_or_else(|| CliError::schema(format!("missing required parameter --{name}")))
}

pub const SEED_ENV: &str = "NEGADRIFT_SEED";

/// Master seed: flag, then config, then the environment default. Stochastic
/// commands refuse to run without one.
pub fn resolve_seed(flag: Option<u64>, from_config: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag.or(from_config) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .parse()
            .map_err(|_| CliError::schema(format!("{SEED_ENV}={text:?} is not a valid u64 seed"))),
        Err(_) => Err(CliError::schema(format!(
            "stochastic commands need a master seed: --seed, config \"seed\", or {SEED_ENV}"
        ))),
    }
}

/// Writes either to stdout or to a file; used by every emitting command.
pub enum OutTarget {
    Stdout(io::Stdout),
    File(fs::File),
}

impl OutTarget {
    pub fn create(path: Option<&PathBuf>) -> CliResult<Self> {
        Ok(match path {
            None => OutTarget::Stdout(io::stdout()),
            Some(p) => OutTarget::File(fs::File::create(p)?),
        })
    }
}

impl Write for OutTarget {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            OutTarget::Stdout(s) => s.write(buf),
            OutTarget::File(f) => f.write(buf),
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self {
            OutTarget::Stdout(s) => s.flush(),
            OutTarget::File(f) => f.flush(),
        }
    }
}

pub fn emit_record(out: &mut impl Write, record: &Record) -> CliResult<()> {
    writeln!(out, "{}", record.to_json_line())?;
    Ok(())
}

/// Quote a CSV field when it contains a comma, quote, or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Run a closure on a rayon pool of the requested size (0 = default).
pub fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::schema(format!("could not build worker pool: {e}")))?;
    Ok(pool.install(f))
}
