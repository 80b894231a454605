use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use graphpack::curve::{enumerate_generating_vectors, riemann_hurwitz_genus, CurveAction, CurveType};
use graphpack::group::{builtin, parse_catalog, BuiltinSpec, FiniteGroup, DEFAULT_CATALOG};
use graphpack::packing::{max_packing, packing_ratio, PackingOptions, DEFAULT_TIME_BUDGET};
use graphpack::report::{self, elements, fraction, Format, ReportHeader};
use graphpack::search::{ratio_table, run_search, SearchSpec};
use graphpack::slope::{abstract_slope, check_slope_bound, invariants, AdmissibleConfiguration, Verdict};
use graphpack::verify::verify_paper;

const BUDGET_VAR: &str = "GPL_TIME_BUDGET";

/// Packings of automorphism graphs on curves and the slopes of the
/// resulting Kodaira fibrations.
#[derive(Parser)]
#[command(name = "graphpack", version)]
struct Cli {
    /// Group catalog file; may be repeated.
    #[arg(long = "catalog", global = true, value_name = "FILE")]
    catalogs: Vec<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the genus-zero types with λ < 2/3 and their bounds.
    Types {
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Genus of a curve with an action of the given order and type.
    Genus { order: u64, curve_type: CurveType },
    /// List generating vectors up to simultaneous conjugation.
    Vectors {
        group: String,
        curve_type: CurveType,
        #[arg(long)]
        distinct: bool,
    },
    /// Maximum packing for every vector class of a group and type.
    Pack {
        group: String,
        curve_type: CurveType,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Chern numbers and slope of a configuration file.
    Slope { config: PathBuf },
    /// Sweep catalog groups over types and genera.
    Search {
        #[arg(long, default_value_t = 2)]
        max_genus: u64,
        /// Restrict to this type; may be repeated.
        #[arg(long = "type", value_name = "TYPE")]
        types: Vec<CurveType>,
        /// Search this group instead of the default builtin list; may be repeated.
        #[arg(long = "group", value_name = "GROUP")]
        groups: Vec<String>,
        /// Print the per-type ratio summary instead of the records.
        #[arg(long)]
        summary: bool,
        #[arg(long, default_value = "text")]
        format: Format,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Check the SL(2,3) genus 2 example end to end.
    VerifyPaper,
}

#[derive(Args)]
struct SolverArgs {
    /// Only use vectors with pairwise distinct entries.
    #[arg(long)]
    distinct: bool,
    /// Per-instance solver budget in seconds (default: $GPL_TIME_BUDGET, then 60).
    #[arg(long, value_name = "SECONDS")]
    budget: Option<u64>,
}

impl SolverArgs {
    fn budget(&self) -> Result<Duration, String> {
        if let Some(s) = self.budget {
            return Ok(Duration::from_secs(s));
        }
        match std::env::var(BUDGET_VAR) {
            Ok(v) => v
                .trim()
                .parse()
                .map(Duration::from_secs)
                .map_err(|_| format!("{BUDGET_VAR} must be a whole number of seconds, got `{v}`")),
            Err(_) => Ok(DEFAULT_TIME_BUDGET),
        }
    }
}

/// Groups from catalog files, by name, plus the file names in load order.
struct Catalog {
    groups: HashMap<String, Arc<FiniteGroup>>,
    ordered: Vec<Arc<FiniteGroup>>,
    files: Vec<String>,
}

impl Catalog {
    fn load(paths: &[PathBuf]) -> Result<Self, String> {
        let mut catalog = Catalog { groups: HashMap::new(), ordered: Vec::new(), files: Vec::new() };
        for path in paths {
            let shown = path.display().to_string();
            let file = File::open(path).map_err(|e| format!("{shown}: {e}"))?;
            let groups = parse_catalog(BufReader::new(file)).map_err(|e| format!("{shown}: {e}"))?;
            for g in groups {
                let name = g.name().to_string();
                if name.parse::<BuiltinSpec>().is_ok() {
                    return Err(format!("{shown}: group name `{name}` is reserved for a builtin"));
                }
                if catalog.groups.contains_key(&name) {
                    return Err(format!("{shown}: group `{name}` is already defined by an earlier catalog"));
                }
                let g = Arc::new(g);
                catalog.groups.insert(name, g.clone());
                catalog.ordered.push(g);
            }
            catalog.files.push(shown);
        }
        Ok(catalog)
    }

    fn resolve(&self, name: &str) -> Result<Arc<FiniteGroup>, String> {
        if let Some(g) = self.groups.get(name) {
            return Ok(g.clone());
        }
        builtin(name).map(Arc::new).map_err(|e| format!("unknown group `{name}`: {e}"))
    }
}

fn cmd_genus(order: u64, t: &CurveType) -> Result<String, String> {
    let g = riemann_hurwitz_genus(order, t.quotient_genus(), t.branch_orders()).map_err(|e| e.to_string())?;
    Ok(format!("{g}\n"))
}

fn cmd_vectors(group: &FiniteGroup, t: &CurveType, distinct: bool) -> Result<String, String> {
    let vectors = enumerate_generating_vectors(group, t, distinct).map_err(|e| e.to_string())?;
    let mut out =
        format!("{} (order {}), type {}: {} class(es)\n", group.name(), group.order(), t.tuple_string(), vectors.len());
    for v in &vectors {
        let _ = writeln!(out, "{v}");
    }
    Ok(out)
}

fn cmd_pack(group: &Arc<FiniteGroup>, t: &CurveType, distinct: bool, budget: Duration) -> Result<String, String> {
    let vectors = enumerate_generating_vectors(group, t, distinct).map_err(|e| e.to_string())?;
    let mut out = format!("group {} (order {}), type {}\n", group.name(), group.order(), t.tuple_string());
    if vectors.is_empty() {
        out.push_str("no generating vectors\n");
        return Ok(out);
    }
    let options = PackingOptions { time_budget: Some(budget), seed_lower_bound: None };
    let mut best: Option<(usize, usize, u64)> = None;
    let mut truncated = false;
    for (i, v) in vectors.iter().enumerate() {
        let action = CurveAction::new(group.clone(), t.clone(), v.clone()).map_err(|e| e.to_string())?;
        let r = max_packing(group, action.fixed_set(), &options).map_err(|e| e.to_string())?;
        let _ = writeln!(
            out,
            "class {} {v}: genus {}, m = {}{}, witness {}, bound {}",
            i + 1,
            action.genus(),
            r.m,
            if r.time_bounded { " (time-bounded)" } else { "" },
            elements(&r.witness),
            action.mu_bound(),
        );
        truncated |= r.time_bounded;
        if best.is_none_or(|(m, ..)| r.m > m) {
            best = Some((r.m, i + 1, action.genus()));
        }
    }
    let (m, class, genus) = best.expect("at least one vector");
    let ratio = packing_ratio(m as u64, genus).map_err(|e| e.to_string())?;
    let _ = writeln!(
        out,
        "best m = {m} (class {class}), ratio m/(g-1) = {}{}",
        fraction(&ratio),
        if truncated { ", time-bounded" } else { "" }
    );
    Ok(out)
}

fn cmd_slope(path: &PathBuf) -> Result<String, String> {
    let shown = path.display();
    let text = std::fs::read_to_string(path).map_err(|e| format!("{shown}: {e}"))?;
    let config = AdmissibleConfiguration::from_toml_str(&text).map_err(|e| format!("{shown}: {e}"))?;
    let inv = invariants(&config).map_err(|e| e.to_string())?;
    let nu = abstract_slope(&config).map_err(|e| e.to_string())?;
    let mut out = String::new();
    let _ = writeln!(out, "c2 = {}", fraction(&inv.c2));
    let _ = writeln!(out, "c1^2 = {}", fraction(&inv.c1sq));
    let _ = writeln!(out, "sigma = {}", fraction(&inv.sigma));
    let _ = writeln!(out, "slope = {}", fraction(&inv.slope));
    let _ = writeln!(out, "abstract slope = {}", fraction(&nu));
    let _ = writeln!(
        out,
        "galois = {}, simple = {}, very simple = {}",
        config.is_galois(),
        config.is_simple(),
        config.is_very_simple()
    );
    let genus = config.target_genus();
    let bound = match config.ramification_indices() {
        Some(r) if config.is_simple() && !r.is_empty() => {
            if r.len() as u64 > 3 * (genus - 1) {
                format!("not claimed: {} graphs exceed 3(g-1) = {}", r.len(), 3 * (genus - 1))
            } else {
                let check = check_slope_bound(genus, &r).map_err(|e| e.to_string())?;
                match check.verdict {
                    Verdict::Below => format!("below 8/3 by {}", fraction(&check.gap)),
                    Verdict::Equal => "equal to 8/3".to_string(),
                    Verdict::Above => "above 8/3".to_string(),
                }
            }
        }
        _ => "not applicable (needs a simple Galois configuration with graphs)".to_string(),
    };
    let _ = writeln!(out, "8/3 bound: {bound}");
    Ok(out)
}

fn run(cli: Cli) -> Result<String, String> {
    let catalog = Catalog::load(&cli.catalogs)?;
    match cli.command {
        Command::Types { format } => Ok(report::types_table(format)),
        Command::Genus { order, curve_type } => cmd_genus(order, &curve_type),
        Command::Vectors { group, curve_type, distinct } => {
            cmd_vectors(&*catalog.resolve(&group)?, &curve_type, distinct)
        }
        Command::Pack { group, curve_type, solver } => {
            let budget = solver.budget()?;
            cmd_pack(&catalog.resolve(&group)?, &curve_type, solver.distinct, budget)
        }
        Command::Slope { config } => cmd_slope(&config),
        Command::Search { max_genus, types, groups, summary, format, solver } => {
            let budget = solver.budget()?;
            let mut members: Vec<Arc<FiniteGroup>> = if groups.is_empty() {
                DEFAULT_CATALOG
                    .iter()
                    .map(|s| builtin(s).map(Arc::new).map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?
            } else {
                groups.iter().map(|g| catalog.resolve(g)).collect::<Result<_, _>>()?
            };
            for g in &catalog.ordered {
                if !members.iter().any(|m| m.name() == g.name()) {
                    members.push(g.clone());
                }
            }
            let mut sources = vec![if groups.is_empty() { "builtin defaults".to_string() } else { groups.join(" ") }];
            sources.extend(catalog.files.iter().cloned());
            let mut spec = SearchSpec::new(max_genus, members);
            if !types.is_empty() {
                spec = spec.with_types(types.clone());
            }
            spec.per_instance_budget = Some(budget);
            spec.require_distinct = solver.distinct;
            let mut flags = vec![format!("max-genus={max_genus}"), format!("budget={}s", budget.as_secs())];
            if !types.is_empty() {
                flags
                    .push(format!("types={}", types.iter().map(CurveType::tuple_string).collect::<Vec<_>>().join(" ")));
            }
            if solver.distinct {
                flags.push("distinct".into());
            }
            let header = ReportHeader { catalogs: sources, flags };
            let records = run_search(&spec).map_err(|e| e.to_string())?;
            Ok(if summary {
                report::ratio_report(&ratio_table(&records), &header, format)
            } else {
                report::search_report(&records, &header, format)
            })
        }
        Command::VerifyPaper => {
            let passed = verify_paper().map_err(|e| e.to_string())?;
            let mut out = String::new();
            for (i, name) in passed.iter().enumerate() {
                let _ = writeln!(out, "ok {:>2} {name}", i + 1);
            }
            let _ = writeln!(out, "all {} checks passed", passed.len());
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
