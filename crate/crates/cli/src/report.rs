use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

/// Failure modes that map onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Unparseable or out-of-range input (exit 2).
    Input(String),
    /// Parameters that cannot reach the requested accuracy (exit 3).
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Infeasible(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Infeasible(msg) => write!(f, "infeasible parameters: {msg}"),
        }
    }
}

impl From<groupoidal::error::Error> for CliError {
    fn from(err: groupoidal::error::Error) -> Self {
        use groupoidal::error::Error::*;
        match err {
            GridSupport { .. } | Truncation { .. } | WeightRange { .. } | InfeasibleGrid(_) | KernelTooLarge { .. } => {
                CliError::Infeasible(err.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Passes when `deviation < threshold`.
    pub fn below(name: &str, deviation: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            passed: deviation < threshold,
            deviation: Some(deviation),
            threshold: Some(threshold),
            witness: None,
            note: None,
        }
    }

    /// Passes when `deviation > threshold`.
    pub fn above(name: &str, deviation: f64, threshold: f64) -> Self {
        Check { passed: deviation > threshold, ..Check::below(name, deviation, threshold) }
    }

    pub fn flag(name: &str, passed: bool) -> Self {
        Check { name: name.into(), passed, deviation: None, threshold: None, witness: None, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub seed: u64,
    pub threads: usize,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub results: Value,
    pub files: Vec<String>,
}

/// Where a command writes its files, plus run metadata for the report.
pub struct Context {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub threads: usize,
    started: Instant,
    files: Vec<String>,
}

impl Context {
    pub fn new(out_dir: PathBuf, seed: u64, threads: usize) -> Self {
        Context { out_dir, seed, threads, started: Instant::now(), files: Vec::new() }
    }

    /// Creates `name` inside the output directory.
    pub fn create(&mut self, name: &str) -> CliResult<fs::File> {
        fs::create_dir_all(&self.out_dir)?;
        let path = self.out_dir.join(name);
        let file = fs::File::create(&path)?;
        self.files.push(path.display().to_string());
        Ok(file)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
        let path = self.out_dir.join(name);
        fs::create_dir_all(&self.out_dir)?;
        fs::write(&path, text + "\n")?;
        self.files.push(path.display().to_string());
        Ok(())
    }

    /// Builds the report, writes it as `<command>.json` and prints it.
    pub fn finish(&mut self, command: &str, parameters: Value, checks: Vec<Check>, results: Value) -> CliResult<RunReport> {
        let name = format!("{}.json", command.replace(' ', "-"));
        self.files.push(self.out_dir.join(&name).display().to_string());
        let report = RunReport {
            schema: SCHEMA,
            command: command.into(),
            parameters,
            passed: checks.iter().all(|c| c.passed),
            checks,
            seed: self.seed,
            threads: self.threads,
            wall_time_s: self.started.elapsed().as_secs_f64(),
            results,
            files: self.files.clone(),
        };
        let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Input(e.to_string()))?;
        fs::create_dir_all(&self.out_dir)?;
        fs::write(self.out_dir.join(&name), text.clone() + "\n")?;
        println!("{text}");
        Ok(report)
    }
}

