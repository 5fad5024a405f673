use std::path::PathBuf;
use std::str::FromStr;

use strata_core::Class;

use crate::CliError;

/// Where a seed state comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedSource {
    Builtin(String),
    File(PathBuf),
}

impl FromStr for SeedSource {
    type Err = String;

    /// `builtin:NAME` or a path.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_prefix("builtin:") {
            Some("") => Err("empty builtin seed name".into()),
            Some(name) => Ok(SeedSource::Builtin(name.to_string())),
            None if s.is_empty() => Err("empty seed path".into()),
            None => Ok(SeedSource::File(PathBuf::from(s))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyTarget {
    Fixture(String),
    Family(String),
    All,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Enumerate {
        class: Option<Class>,
        seed: Option<SeedSource>,
        out: Option<PathBuf>,
        nodes: Option<PathBuf>,
        /// Compare against the published counts of the class.
        check: bool,
    },
    Verify {
        target: VerifyTarget,
        samples: usize,
    },
    Filter {
        class: Option<Class>,
        seed: Option<SeedSource>,
        predicate: PathBuf,
        out: Option<PathBuf>,
    },
    Export {
        class: Option<Class>,
        seed: Option<SeedSource>,
        dot: Option<PathBuf>,
        graph: Option<PathBuf>,
        json: Option<PathBuf>,
    },
    SeedsList,
    SeedsValidate {
        paths: Vec<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// State cap for exploration; positive.
    pub budget: usize,
    /// Worker threads for exploration; `None` uses the default pool.
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(command: Command, budget: usize, threads: Option<usize>) -> Result<RunConfig, CliError> {
        if budget == 0 {
            return Err(CliError::Usage("budget must be positive".into()));
        }
        if threads == Some(0) {
            return Err(CliError::Usage("thread count must be positive".into()));
        }
        if let Command::Export { dot: None, graph: None, json: None, .. } = command {
            return Err(CliError::Usage("export needs at least one of --dot, --graph, --json".into()));
        }
        Ok(RunConfig { command, budget, threads })
    }
}
