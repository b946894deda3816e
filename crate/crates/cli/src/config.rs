use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;
use springer_rca::verify::Suite;

use crate::{Command, Common, Failure, Op};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Keys accepted by `--config`; each mirrors the flag of the same name.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    n: Option<usize>,
    k: Option<usize>,
    max_degree: Option<usize>,
    format: Option<String>,
    output: Option<PathBuf>,
    threads: Option<usize>,
    op: Option<String>,
    r: Option<usize>,
    lambda: Option<String>,
    dress: Option<String>,
    suite: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Task {
    FixedPoints,
    Operator {
        op: Op,
        r: Option<usize>,
        lambda: Option<Vec<i64>>,
        dress: String,
    },
    Verify {
        suite: Suite,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub n: usize,
    pub k: usize,
    pub max_degree: usize,
    pub task: Task,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
}

pub const DEFAULT_MAX_DEGREE: usize = 10;

fn read_file(path: &Path) -> Result<FileConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))
}

fn parse_lambda(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            Failure::Usage(format!(
                "--lambda expects comma-separated integers, got `{s}`"
            ))
        })
}

fn parse_value<T: ValueEnum>(key: &str, s: &str) -> Result<T, Failure> {
    T::from_str(s, false).map_err(|_| Failure::Usage(format!("invalid {key} `{s}` in config")))
}

fn env_threads() -> Result<Option<usize>, Failure> {
    match std::env::var("SPRINGER_RCA_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or_else(|| {
                Failure::Usage(format!(
                    "SPRINGER_RCA_THREADS must be a positive integer, got `{v}`"
                ))
            }),
        Err(_) => Ok(None),
    }
}

/// Merges flags over the config file; the environment caps the thread count.
pub fn resolve(common: &Common, command: &Command) -> Result<RunConfig, Failure> {
    let file = match &common.config {
        Some(path) => read_file(path)?,
        None => FileConfig::default(),
    };
    let n = common
        .n
        .or(file.n)
        .ok_or_else(|| Failure::Usage("--n is required".into()))?;
    let k = common
        .k
        .or(file.k)
        .ok_or_else(|| Failure::Usage("--k is required".into()))?;
    let max_degree = common
        .max_degree
        .or(file.max_degree)
        .unwrap_or(DEFAULT_MAX_DEGREE);
    let format = match (common.format, &file.format) {
        (Some(f), _) => f,
        (None, Some(s)) => parse_value("format", s)?,
        (None, None) => Format::Json,
    };
    let requested = common.threads.or(file.threads);
    if requested == Some(0) {
        return Err(Failure::Usage("--threads must be positive".into()));
    }
    let threads = match (requested, env_threads()?) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };

    let task = match command {
        Command::FixedPoints => Task::FixedPoints,
        Command::Operator(args) => {
            let op = match (args.op, &file.op) {
                (Some(op), _) => op,
                (None, Some(s)) => parse_value("op", s)?,
                (None, None) => return Err(Failure::Usage("--op is required".into())),
            };
            let lambda = match args.lambda.as_deref().or(file.lambda.as_deref()) {
                Some(s) => Some(parse_lambda(s)?),
                None => None,
            };
            Task::Operator {
                op,
                r: args.r.or(file.r),
                lambda,
                dress: args
                    .dress
                    .clone()
                    .or(file.dress)
                    .unwrap_or_else(|| "1".into()),
            }
        }
        Command::Verify(args) => {
            let suite = match (args.suite, &file.suite) {
                (Some(s), _) => s,
                (None, Some(s)) => s
                    .parse()
                    .map_err(|e: springer_rca::Error| Failure::Usage(e.to_string()))?,
                (None, None) => Suite::All,
            };
            Task::Verify { suite }
        }
    };
    Ok(RunConfig {
        n,
        k,
        max_degree,
        task,
        format,
        output: common.output.clone().or(file.output),
        threads,
    })
}
