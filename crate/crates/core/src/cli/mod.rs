//! The `sulcheck` command line.
//!
//! Exit status: 0 when the checked property holds (or the command
//! succeeded), 1 when it does not, 2 on usage, parse or I/O errors and 3 when
//! a resource cap stops the search.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::checker::{check, CheckError, CheckerConfig, Stats, StrategyTable, TraceStep};
use crate::model::{parse_model_document, serialize_model, Model, PointedModel};
use crate::oracle::{qbf_eval, QbfInstance};
use crate::reduction::{build_distinguishing_family, pointed_fixture, reduce_qbf, translate_ctl, FIXTURE_KEYS};
use crate::syntax::ctl::parse_ctl;
use crate::syntax::{parse_expression, parse_formula, to_nnf, Flavor};
use crate::updates::{enumerate_submodels, enumerate_supermodels, enumerate_updates};

#[derive(Debug, Parser)]
#[command(
    name = "sulcheck",
    version,
    about = "Model checker for sabotage, creation and update logics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a pointed model satisfies a formula.
    Check {
        model: PathBuf,
        /// Formula text, or `@path` to read it from a file.
        formula: String,
        /// Point of evaluation; defaults to the model file's `point:`.
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        json: bool,
        /// Include a strategy table and a sample play for a true existential verdict.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        no_memo: bool,
        #[arg(long)]
        max_positions: Option<u64>,
        /// Overrides SULCHECK_DEPTH_CAP.
        #[arg(long)]
        depth_cap: Option<u64>,
    },
    /// Print the negation normal form of a formula or bare path formula.
    Nnf { formula: String },
    /// Translate a CTL formula.
    Translate {
        formula: String,
        #[arg(long, default_value = "sdl")]
        flavor: Flavor,
    },
    /// Build the model and formula encoding a QBF.
    ReduceQbf {
        /// QBF text, or `@path`.
        qbf: String,
        #[arg(long, default_value = "sdl")]
        flavor: Flavor,
        #[arg(long, value_enum, default_value = "both")]
        emit: Emit,
        /// Write `reduction.model` / `reduction.formula` here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check the reduction and evaluate the QBF, and report agreement.
        #[arg(long)]
        verify: bool,
    },
    /// Write the worked-example models as model files.
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
    },
    /// Write the two chain-and-fan models for index `n`.
    Family {
        n: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Stream the models one round can produce, one JSON object per line.
    Enumerate {
        model: PathBuf,
        #[arg(long, value_enum, default_value = "sub")]
        mode: EnumMode,
        /// One budget, or `angel,demon` for `--mode update`.
        #[arg(long, default_value = "1")]
        budgets: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Model,
    Formula,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnumMode {
    Sub,
    Super,
    Update,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Check(#[from] CheckError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(CheckError::PositionCap { .. } | CheckError::DepthCap { .. }) => 3,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_owned(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn stdout_err(source: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

/// Inline text, or the contents of the file after a leading `@`.
fn text_arg(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => Ok(read(Path::new(path))?.trim().to_owned()),
        None => Ok(arg.to_owned()),
    }
}

fn load_pointed(path: &Path, point: Option<&str>) -> Result<PointedModel, CliError> {
    let doc = parse_model_document(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let point = match point {
        Some(name) => doc.model.state_id(name).map_err(|e| CliError::Usage(e.to_string()))?,
        None => doc
            .point
            .ok_or_else(|| CliError::Usage(format!("{} has no `point:` line; pass --point", path.display())))?,
    };
    Ok(PointedModel::new(doc.model, point))
}

fn load_model(path: &Path) -> Result<Model, CliError> {
    parse_model_document(&read(path)?)
        .map(|d| d.model)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// The `--json` report of `check`.
#[derive(Debug, Serialize)]
pub struct CheckReport<'a> {
    pub verdict: bool,
    pub formula: String,
    pub point: &'a str,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<&'a StrategyTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<&'a [TraceStep]>,
}

impl CheckReport<'_> {
    /// Pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Parse `args` (including the program name) and run, writing to `out`.
/// Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Check {
            model,
            formula,
            point,
            json,
            witness,
            parallel,
            no_memo,
            max_positions,
            depth_cap,
        } => {
            let pm = load_pointed(&model, point.as_deref())?;
            let f = parse_formula(&text_arg(&formula)?).map_err(|e| CliError::Parse(e.to_string()))?;
            let mut cfg = CheckerConfig::from_env();
            cfg.memoization = !no_memo;
            cfg.parallel = parallel;
            cfg.witness = witness;
            if max_positions.is_some() {
                cfg.max_positions = max_positions;
            }
            if let Some(cap) = depth_cap {
                cfg.sul_depth_cap = cap;
            }
            let r = check(&pm, &f, &cfg)?;
            if json {
                let report = CheckReport {
                    verdict: r.value,
                    formula: f.to_string(),
                    point: pm.point_name(),
                    stats: r.stats,
                    witness: r.witness.as_ref(),
                    trace: r.trace.as_deref(),
                };
                writeln!(out, "{}", report.to_json()).map_err(stdout_err)?;
            } else {
                writeln!(out, "{}", r.value).map_err(stdout_err)?;
                writeln!(
                    out,
                    "positions explored: {}, memo hits: {}",
                    r.stats.positions_explored, r.stats.memo_hits
                )
                .map_err(stdout_err)?;
                if let Some(trace) = &r.trace {
                    write_trace(out, pm.point_name(), trace)?;
                }
                if let Some(t) = &r.witness {
                    let text = serde_json::to_string_pretty(t).expect("table serializes");
                    writeln!(out, "{text}").map_err(stdout_err)?;
                }
            }
            Ok(if r.value { 0 } else { 1 })
        }
        Command::Nnf { formula } => {
            let f = parse_expression(&text_arg(&formula)?).map_err(|e| CliError::Parse(e.to_string()))?;
            writeln!(out, "{}", to_nnf(&f)).map_err(stdout_err)?;
            Ok(0)
        }
        Command::Translate { formula, flavor } => {
            let f = parse_ctl(&text_arg(&formula)?).map_err(|e| CliError::Parse(e.to_string()))?;
            writeln!(out, "{}", translate_ctl(&f, flavor)).map_err(stdout_err)?;
            Ok(0)
        }
        Command::ReduceQbf {
            qbf,
            flavor,
            emit,
            out: dir,
            verify,
        } => {
            let q = QbfInstance::parse(&text_arg(&qbf)?).map_err(|e| CliError::Parse(e.to_string()))?;
            let r = reduce_qbf(&q, flavor).map_err(|e| CliError::Usage(e.to_string()))?;
            let model_text = serialize_model(&r.model.model, Some(r.model.point));
            let formula_text = format!("{}\n", r.formula);
            let emit_model = emit != Emit::Formula;
            let emit_formula = emit != Emit::Model;
            match &dir {
                Some(dir) => {
                    if emit_model {
                        write(&dir.join("reduction.model"), &model_text)?;
                    }
                    if emit_formula {
                        write(&dir.join("reduction.formula"), &formula_text)?;
                    }
                }
                None => {
                    if emit_model {
                        write!(out, "{model_text}").map_err(stdout_err)?;
                    }
                    if emit_formula {
                        write!(out, "{formula_text}").map_err(stdout_err)?;
                    }
                }
            }
            if !verify {
                return Ok(0);
            }
            let truth = qbf_eval(&q);
            let verdict = check(&r.model, &r.formula, &CheckerConfig::from_env())?.value;
            writeln!(out, "qbf: {truth}\ncheck: {verdict}\nagree: {}", truth == verdict).map_err(stdout_err)?;
            Ok(if truth == verdict { 0 } else { 1 })
        }
        Command::Fixtures { out: dir } => {
            for key in FIXTURE_KEYS {
                let pm = pointed_fixture(key).expect("every listed key has a fixture");
                let path = dir.join(format!("{key}.model"));
                write(&path, &serialize_model(&pm.model, Some(pm.point)))?;
                writeln!(out, "{}", path.display()).map_err(stdout_err)?;
            }
            Ok(0)
        }
        Command::Family { n, out: dir } => {
            let (short, long) = build_distinguishing_family(n).map_err(|e| CliError::Usage(e.to_string()))?;
            for (k, pm) in [(n + 2, short), (n + 3, long)] {
                let path = dir.join(format!("family{n}.M{k}.model"));
                write(&path, &serialize_model(&pm.model, Some(pm.point)))?;
                writeln!(out, "{}", path.display()).map_err(stdout_err)?;
            }
            Ok(0)
        }
        Command::Enumerate { model, mode, budgets } => {
            let m = load_model(&model)?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| CliError::Usage(format!("bad budget `{s}`")))
            };
            let parts: Vec<&str> = budgets.split(',').collect();
            let line = |out: &mut dyn Write, v: serde_json::Value| writeln!(out, "{v}").map_err(stdout_err);
            match (mode, parts.as_slice()) {
                (EnumMode::Sub, [b]) => {
                    for (set, result) in enumerate_submodels(&m, parse(b)?) {
                        line(
                            out,
                            json!({"removals": set.named_pairs(&m), "cost": set.total_cost(), "edges": edge_names(&result)}),
                        )?;
                    }
                }
                (EnumMode::Super, [b]) => {
                    for (set, result) in enumerate_supermodels(&m, parse(b)?) {
                        line(
                            out,
                            json!({"additions": set.named_pairs(&m), "cost": set.total_cost(), "edges": edge_names(&result)}),
                        )?;
                    }
                }
                (EnumMode::Update, [b]) | (EnumMode::Update, [b, _]) => {
                    let angel = parse(b)?;
                    let demon = parts.get(1).map_or(Ok(angel), |d| parse(d))?;
                    for (choice, result) in enumerate_updates(&m, angel, demon) {
                        let named = choice.to_named(&m);
                        line(
                            out,
                            json!({"additions": named.additions, "removals": named.removals, "edges": edge_names(&result)}),
                        )?;
                    }
                }
                _ => return Err(CliError::Usage(format!("bad --budgets `{budgets}` for this mode"))),
            }
            Ok(0)
        }
    }
}

fn edge_names(m: &Model) -> Vec<(&str, &str)> {
    m.edges().map(|(a, b)| (m.state_name(a), m.state_name(b))).collect()
}

fn write_trace(out: &mut dyn Write, start: &str, trace: &[TraceStep]) -> Result<(), CliError> {
    let pairs = |v: &[(String, String)]| v.iter().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(" ");
    writeln!(out, "sample play from {start}:").map_err(stdout_err)?;
    for (i, step) in trace.iter().enumerate() {
        writeln!(
            out,
            "  {}: +[{}] -[{}] => {}",
            i + 1,
            pairs(&step.additions),
            pairs(&step.removals),
            step.to
        )
        .map_err(stdout_err)?;
    }
    Ok(())
}
