use std::io::Write;
use std::path::Path;

use strata_core::enumerate::{stats, StatsRow};
use strata_core::seeds::{self, SeedSpec, BUILTINS};
use strata_core::{explore, filter_vf, virtual_components, Class, EnumerateError, FormalGraph, Predicate, SeedError};
use strata_core::{QueryError, VirtualComponent};
use strata_oracle::{builtin_family, family_names, family_scan, fixture_check, fixture_names, OracleError};

use crate::baseline::divergence;
use crate::config::{Command, RunConfig, SeedSource, VerifyTarget};
use crate::report;
use crate::CliError;

fn seed_error(e: SeedError) -> CliError {
    match e {
        SeedError::Io(m) => CliError::Io(m),
        other => CliError::Usage(format!("seed: {other}")),
    }
}

fn enumerate_error(e: EnumerateError) -> CliError {
    match e {
        EnumerateError::BudgetExceeded { .. } => CliError::Budget(format!("{e}; raise --budget or STRATA_BUDGET")),
        EnumerateError::BadSeed { .. } | EnumerateError::MixedClasses(..) => CliError::Usage(e.to_string()),
        EnumerateError::Flip(_) => CliError::Mismatch(e.to_string()),
    }
}

fn write_out(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => write_out(p, bytes),
        None => Ok(stdout.write_all(bytes)?),
    }
}

/// The seed named by `source`, or the default builtin of `class`.
pub fn load_seed(class: Option<Class>, source: Option<&SeedSource>) -> Result<SeedSpec, CliError> {
    let spec = match source {
        Some(SeedSource::Builtin(name)) => seeds::builtin_spec(name).map_err(seed_error)?,
        Some(SeedSource::File(path)) => seeds::load_seed(path).map_err(seed_error)?,
        None => {
            let class = class.ok_or_else(|| CliError::Usage("give --class or --seed".into()))?;
            let name = seeds::default_seed(class)
                .ok_or_else(|| CliError::Usage(format!("no builtin seed for {class}; pass --seed FILE")))?;
            seeds::builtin_spec(name).map_err(seed_error)?
        }
    };
    match class {
        Some(c) if c != spec.state.class => {
            Err(CliError::Usage(format!("--class {c} but the seed is of class {}", spec.state.class)))
        }
        _ => Ok(spec),
    }
}

pub struct Enumerated {
    pub graph: FormalGraph,
    pub comps: Vec<VirtualComponent>,
    pub rows: Vec<StatsRow>,
}

fn enumerate(cfg: &RunConfig, spec: &SeedSpec) -> Result<Enumerated, CliError> {
    let go = || explore(std::slice::from_ref(&spec.state), cfg.budget);
    let graph = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(go),
        None => go(),
    }
    .map_err(enumerate_error)?;
    let comps = virtual_components(&graph);
    let rows = stats(&graph, &comps);
    Ok(Enumerated { graph, comps, rows })
}

fn query_error(e: QueryError) -> CliError {
    CliError::Usage(e.to_string())
}

/// Runs one command; tables and reports go to `stdout`, notes to `stderr`.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.command {
        Command::Enumerate { class, seed, out, nodes, check } => {
            let spec = load_seed(*class, seed.as_ref())?;
            let e = enumerate(cfg, &spec)?;
            emit(out.as_deref(), stdout, &report::stats_csv(&e.rows))?;
            if let Some(p) = nodes {
                write_out(p, report::nodes_json(&e.graph, &e.comps, &e.rows).as_bytes())?;
            }
            writeln!(
                stderr,
                "{}: {} virtual functions, {} virtual components",
                e.graph.class,
                e.graph.len(),
                e.rows.len()
            )?;
            if *check {
                let report = divergence(e.graph.class, e.graph.len(), &e.rows);
                if !report.is_empty() {
                    for line in &report {
                        writeln!(stderr, "{line}")?;
                    }
                    return Err(CliError::Mismatch(format!("{} disagrees with the published counts", e.graph.class)));
                }
            }
            Ok(())
        }
        Command::Verify { target, samples } => verify(target, *samples, stdout),
        Command::Filter { class, seed, predicate, out } => {
            let text = std::fs::read_to_string(predicate)
                .map_err(|e| CliError::Io(format!("{}: {e}", predicate.display())))?;
            let pred = Predicate::from_json(&text).map_err(query_error)?;
            let spec = load_seed(*class, seed.as_ref())?;
            pred.check(spec.state.class).map_err(query_error)?;
            let e = enumerate(cfg, &spec)?;
            let hits = filter_vf(&e.graph, &pred).map_err(query_error)?;
            emit(out.as_deref(), stdout, &report::matches_csv(&e.graph, &e.comps, &e.rows, &hits))?;
            let owner = strata_core::enumerate::component_of(&e.graph, &e.comps);
            let mut by_card = std::collections::BTreeMap::new();
            for &i in &hits {
                *by_card.entry(e.rows[owner[i]].card).or_insert(0usize) += 1;
            }
            let spread: Vec<String> = by_card.iter().map(|(card, n)| format!("{n} in Card {card}")).collect();
            writeln!(stderr, "{}: {} of {} states match; {}", pred.name, hits.len(), e.graph.len(), spread.join(", "))?;
            Ok(())
        }
        Command::Export { class, seed, dot, graph, json } => {
            let spec = load_seed(*class, seed.as_ref())?;
            let name = match seed {
                Some(SeedSource::Builtin(n)) => n.clone(),
                Some(SeedSource::File(p)) => p.file_stem().map_or("seed".into(), |s| s.to_string_lossy().into()),
                None => spec.state.class.slug().to_string(),
            };
            if let Some(p) = dot {
                write_out(p, report::state_dot(&name, &spec.state).as_bytes())?;
            }
            if let Some(p) = json {
                write_out(p, (seeds::to_json(&spec) + "\n").as_bytes())?;
            }
            if let Some(p) = graph {
                let e = enumerate(cfg, &spec)?;
                write_out(p, report::component_dot(&e.graph, &e.comps, &e.rows).as_bytes())?;
            }
            Ok(())
        }
        Command::SeedsList => {
            for b in BUILTINS {
                let status = match b.status {
                    seeds::SeedStatus::Available => "available",
                    seeds::SeedStatus::Placeholder => "placeholder",
                };
                writeln!(stdout, "{:<16} {:<6} {:<12} {}", b.name, b.class.slug(), status, b.summary)?;
            }
            Ok(())
        }
        Command::SeedsValidate { paths } => {
            let mut bad = 0;
            for p in paths {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                let parsed =
                    if text.trim_start().starts_with('{') { seeds::from_json(&text) } else { seeds::parse_seed(&text) };
                let problems: Vec<String> = match parsed {
                    Ok(spec) => seeds::validate_seed(&spec.state).iter().map(|d| d.to_string()).collect(),
                    Err(e) => vec![e.to_string()],
                };
                if problems.is_empty() {
                    writeln!(stdout, "{}: ok", p.display())?;
                } else {
                    bad += 1;
                    for m in problems {
                        writeln!(stdout, "{}: {m}", p.display())?;
                    }
                }
            }
            if bad > 0 {
                return Err(CliError::Mismatch(format!("{bad} of {} seed file(s) invalid", paths.len())));
            }
            Ok(())
        }
    }
}

fn oracle_error(e: OracleError) -> CliError {
    match e {
        OracleError::UnknownFixture(name) => CliError::Usage(format!("unknown fixture or family `{name}`")),
        other => CliError::Mismatch(other.to_string()),
    }
}

fn verify(target: &VerifyTarget, samples: usize, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (fixtures, families): (Vec<&str>, Vec<&str>) = match target {
        VerifyTarget::Fixture(n) => (vec![n.as_str()], vec![]),
        VerifyTarget::Family(n) => (vec![], vec![n.as_str()]),
        VerifyTarget::All => (fixture_names(), family_names()),
    };
    let mut failed = 0;
    for name in &fixtures {
        let out = fixture_check(name).map_err(oracle_error)?;
        writeln!(stdout, "{:<8} {}", name, if out.passed { "pass" } else { "FAIL" })?;
        for d in &out.diffs {
            writeln!(stdout, "         {d}")?;
        }
        failed += usize::from(!out.passed);
    }
    for name in &families {
        let fam = builtin_family(name).map_err(oracle_error)?;
        let r = family_scan(&fam, &fam.grid(samples)).map_err(oracle_error)?;
        let missed = r.samples.iter().filter(|s| s.suspect_missed).count();
        let ok = r.is_clear() && missed == 0;
        writeln!(
            stdout,
            "{:<8} {}  {} samples, min |critical value| {:.6}, touches {:?}",
            name,
            if ok { "pass" } else { "FAIL" },
            r.samples.len(),
            r.min_abs_value,
            r.touches
        )?;
        failed += usize::from(!ok);
    }
    let total = fixtures.len() + families.len();
    writeln!(stdout, "{} checked, {failed} failed", total)?;
    if failed > 0 {
        return Err(CliError::Mismatch(format!("{failed} of {total} checks failed")));
    }
    Ok(())
}
