mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use minfre_core::extremals::{aggregate_bounds, classify_rows, extremal_solutions};
use minfre_core::gen::{random_binary_fre, random_fre, random_graph, GenParams};
use minfre_core::oracle::{brute_force_cover, grid_optimum, sample_feasibility, DEFAULT_GRID_BUDGET};
use minfre_core::reduction::{reduce, ReductionState};
use minfre_core::solver::{feasible_region, gate_feasibility, solve_with, SolveOptions, Status};
use minfre_core::vertexcover::{load_graph, solve_cover, solve_cover_specialized, verify_structure};
use minfre_core::{load_instance, parse_vector, Cell, Instance, Sense};

use report::{CellDoc, CoverDoc, OracleDoc, ReduceDoc, SolveDoc};

const EXIT_OK: u8 = 0;
const EXIT_INFEASIBLE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(name = "minfre", version, about = "Exact optimization over max-min fuzzy relational equations")]
struct Cli {
    /// Worker threads for enumeration (defaults to all cores).
    #[arg(long, global = true, env = "MINFRE_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance document.
    Solve {
        path: PathBuf,
        /// Skip the pruning rules and enumerate the full selector product.
        #[arg(long)]
        no_rules: bool,
        /// Include the rule trace.
        #[arg(long)]
        trace: bool,
        /// Include every nonempty cell of the feasible region.
        #[arg(long)]
        region: bool,
        #[arg(long)]
        json: bool,
        /// Refuse instances whose reduced selector product exceeds this.
        #[arg(long)]
        max_triples: Option<u128>,
    },
    /// Print the rule trace, reduced domains and cardinalities.
    Reduce {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the feasible region as a list of boxes.
    Region {
        path: PathBuf,
        /// Keep duplicate and contained cells.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print every extremal solution of every row.
    Extremals {
        path: PathBuf,
    },
    /// Minimum vertex cover of a graph file (edge list or adjacency JSON).
    Vc {
        path: PathBuf,
        /// Cross-check against subset enumeration (at most 20 vertices).
        #[arg(long)]
        brute: bool,
        /// Also run the independent-set enumerator and require the same result.
        #[arg(long)]
        specialized: bool,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force reference checks.
    Oracle {
        path: PathBuf,
        /// Exhaustive optimum over the value grid.
        #[arg(long)]
        grid: bool,
        /// Compare membership with the cell union on this many random points.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Treat the file as a graph and run subset enumeration.
        #[arg(long)]
        cover: bool,
        #[arg(long, default_value_t = DEFAULT_GRID_BUDGET)]
        budget: u64,
    },
    /// Generate a random instance or graph.
    Gen {
        kind: GenKind,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0.7)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Decimal places of generated coefficients.
        #[arg(long, default_value_t = 2)]
        places: u32,
        #[arg(long, value_enum, default_value_t = SenseArg::Min)]
        sense: SenseArg,
        /// Derive b from a hidden point so the instance is feasible.
        #[arg(long)]
        planted: bool,
        /// Graph output as adjacency JSON instead of an edge list.
        #[arg(long)]
        adjacency: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check whether a point satisfies every equation.
    Check {
        path: PathBuf,
        /// JSON array or comma/space separated decimals.
        #[arg(long)]
        x: String,
        #[arg(long)]
        json: bool,
    },
}

// variant names double as the command-line values
#[allow(clippy::enum_variant_names)]
#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    RandomFre,
    RandomBinaryFre,
    RandomGraph,
}

#[derive(Clone, Copy, ValueEnum)]
enum SenseArg {
    Min,
    Max,
}

impl From<SenseArg> for Sense {
    fn from(s: SenseArg) -> Self {
        match s {
            SenseArg::Min => Sense::Minimize,
            SenseArg::Max => Sense::Maximize,
        }
    }
}

/// Failures caused by the input rather than by the solver.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn read_instance(path: &Path) -> Result<Instance> {
    load_instance(path)
        .with_context(|| format!("reading instance {}", path.display()))
        .map_err(|e| InputError(e).into())
}

fn emit_json<T: serde::Serialize>(value: &T) -> Result<()> {
    writeln!(io::stdout(), "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn timed<T>(label: &str, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    eprintln!("{label}: {:.3} ms", t.elapsed().as_secs_f64() * 1e3);
    out
}

fn cmd_solve(path: &Path, no_rules: bool, trace: bool, region: bool, json: bool, max_triples: Option<u128>) -> Result<u8> {
    let inst = read_instance(path)?;
    let opts = SolveOptions {
        rules: !no_rules,
        max_triples,
        ..SolveOptions::default()
    };
    let sol = timed("solve", || solve_with(&inst, &opts))?;
    let mut doc = SolveDoc::new(&sol);
    if trace {
        doc.trace = Some(sol.trace.iter().map(ToString::to_string).collect());
    }
    if region && sol.status == Status::Optimal {
        let cells = feasible_region(&inst, true).unwrap_or_default();
        doc.region = Some(cells.iter().map(|(t, c)| CellDoc::new(t, c)).collect());
    }
    if json {
        emit_json(&doc)?;
    } else {
        write!(io::stdout(), "{}", report::render_solve(&doc))?;
    }
    Ok(match sol.status {
        Status::Optimal => EXIT_OK,
        Status::Infeasible => EXIT_INFEASIBLE,
    })
}

fn cmd_reduce(path: &Path, json: bool) -> Result<u8> {
    let inst = read_instance(path)?;
    let cls = classify_rows(&inst);
    let ext = extremal_solutions(&inst, &cls);
    let bounds = aggregate_bounds(&ext, &cls);
    let gate = gate_feasibility(&cls, &bounds).err();
    let state = match gate {
        Some(_) => ReductionState::new(&ext, &cls, inst.b()),
        None => reduce(&inst, &cls, &ext, &bounds),
    };
    let doc = ReduceDoc::new(&state, gate);
    if json {
        emit_json(&doc)?;
    } else {
        write!(io::stdout(), "{}", report::render_reduce(&doc))?;
    }
    Ok(if doc.infeasibility_cause.is_some() { EXIT_INFEASIBLE } else { EXIT_OK })
}

fn cmd_region(path: &Path, all: bool, json: bool) -> Result<u8> {
    let inst = read_instance(path)?;
    match feasible_region(&inst, !all) {
        Ok(cells) => {
            let docs: Vec<CellDoc> = cells.iter().map(|(t, c)| CellDoc::new(t, c)).collect();
            if json {
                emit_json(&docs)?;
            } else {
                writeln!(io::stdout(), "{} cell(s)", docs.len())?;
                for (t, c) in &cells {
                    writeln!(io::stdout(), "{t}")?;
                    writeln!(io::stdout(), "  lower {}", report::join(&c.lower))?;
                    writeln!(io::stdout(), "  upper {}", report::join(&c.upper))?;
                }
            }
            Ok(EXIT_OK)
        }
        Err(cause) => {
            if json {
                emit_json(&serde_json::json!({ "cells": [], "infeasibility_cause": report::CauseDoc::from(cause) }))?;
            } else {
                writeln!(io::stdout(), "0 cell(s)\ninfeasible: {cause}")?;
            }
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn cmd_extremals(path: &Path) -> Result<u8> {
    let inst = read_instance(path)?;
    let cls = classify_rows(&inst);
    writeln!(io::stdout(), "I1 = {}", report::join_one_based(&cls.i1))?;
    writeln!(io::stdout(), "I2 = {}", report::join_one_based(&cls.i2))?;
    writeln!(io::stdout(), "I3 = {}", report::join_one_based(&cls.i3))?;
    for i in 0..inst.n() {
        writeln!(io::stdout(), "J{} = {}", i + 1, report::join_one_based(&cls.support[i]))?;
    }
    let ext = extremal_solutions(&inst, &cls);
    for (label, v) in ext.labelled() {
        writeln!(io::stdout(), "{label} = {}", report::join(v))?;
    }
    let bounds = aggregate_bounds(&ext, &cls);
    writeln!(io::stdout(), "lower1 = {}", report::join(&bounds.lower1))?;
    writeln!(io::stdout(), "upper1 = {}", report::join(&bounds.upper1))?;
    writeln!(io::stdout(), "lower2 = {}", report::join(&bounds.lower2))?;
    Ok(EXIT_OK)
}

fn read_graph(path: &Path) -> Result<minfre_core::vertexcover::Graph> {
    load_graph(path)
        .with_context(|| format!("reading graph {}", path.display()))
        .map_err(|e| InputError(e).into())
}

fn cmd_vc(path: &Path, brute: bool, specialized: bool, json: bool) -> Result<u8> {
    let g = read_graph(path)?;
    let r = timed("vc", || solve_cover(&g))?;
    if specialized {
        let s = solve_cover_specialized(&g);
        if s != r {
            bail!("specialized enumerator disagrees: size {} vs {}", s.size, r.size);
        }
    }
    let brute = if brute { Some(brute_force_cover(&g)?) } else { None };
    if let Some(b) = &brute {
        if b.size != r.size {
            bail!("brute force found a cover of size {}, solver returned {}", b.size, r.size);
        }
    }
    let checks = verify_structure(&r, &g);
    let passed = checks.all_passed();
    let doc = CoverDoc::new(&r, checks, brute);
    if json {
        emit_json(&doc)?;
    } else {
        write!(io::stdout(), "{}", report::render_cover(&doc))?;
    }
    if !passed {
        bail!("structural checks failed");
    }
    Ok(EXIT_OK)
}

fn cmd_oracle(path: &Path, grid: bool, sample: Option<u64>, seed: u64, cover: bool, budget: u64) -> Result<u8> {
    let mut doc = OracleDoc {
        grid: None,
        sample: None,
        cover: None,
    };
    if cover {
        let g = read_graph(path)?;
        doc.cover = Some(brute_force_cover(&g)?);
    } else {
        let inst = read_instance(path)?;
        if grid || sample.is_none() {
            doc.grid = Some(timed("grid", || grid_optimum(&inst, budget))?);
        }
        if let Some(k) = sample {
            let cells: Vec<Cell> = feasible_region(&inst, false)
                .map(|v| v.into_iter().map(|(_, c)| c).collect())
                .unwrap_or_default();
            doc.sample = Some(sample_feasibility(&inst, &cells, k, seed));
        }
    }
    emit_json(&doc)?;
    let disagree = doc.sample.as_ref().is_some_and(|s| !s.agrees());
    let infeasible = matches!(doc.grid, Some(minfre_core::oracle::GridResult::Infeasible));
    Ok(if disagree || infeasible { EXIT_INFEASIBLE } else { EXIT_OK })
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    kind: GenKind,
    n: usize,
    density: f64,
    seed: u64,
    places: u32,
    sense: SenseArg,
    planted: bool,
    adjacency: bool,
    output: Option<&Path>,
) -> Result<u8> {
    let p = GenParams {
        n,
        density,
        seed,
        places,
        sense: sense.into(),
        planted,
    };
    let generated = match kind {
        GenKind::RandomFre => random_fre(&p).map(|i| i.to_json() + "\n"),
        GenKind::RandomBinaryFre => random_binary_fre(&p).map(|i| i.to_json() + "\n"),
        GenKind::RandomGraph => random_graph(&p).map(|g| {
            if adjacency {
                g.to_adjacency_json() + "\n"
            } else {
                g.to_edge_list()
            }
        }),
    };
    let text = generated.map_err(|e| InputError(e.into()))?;
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => write!(io::stdout(), "{text}")?,
    }
    Ok(EXIT_OK)
}

fn cmd_check(path: &Path, x: &str, json: bool) -> Result<u8> {
    let inst = read_instance(path)?;
    let x = parse_vector(x).map_err(|e| InputError(e.into()))?;
    let report = inst.check_membership(&x).map_err(|e| InputError(e.into()))?;
    if json {
        emit_json(&report)?;
    } else {
        for r in &report.rows {
            let status = if r.satisfied() { "ok" } else { "violated" };
            let mut line = format!("row {}: {} = {} required {}", r.row + 1, status, r.achieved, r.required);
            if let Some(j) = r.violating {
                line.push_str(&format!(" (term {} exceeds)", j + 1));
            } else if let Some(j) = r.witness {
                line.push_str(&format!(" (attained at {})", j + 1));
            }
            writeln!(io::stdout(), "{line}")?;
        }
        writeln!(io::stdout(), "feasible: {}", report.feasible)?;
    }
    Ok(if report.feasible { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Solve { path, no_rules, trace, region, json, max_triples } => {
            cmd_solve(&path, no_rules, trace, region, json, max_triples)
        }
        Command::Reduce { path, json } => cmd_reduce(&path, json),
        Command::Region { path, all, json } => cmd_region(&path, all, json),
        Command::Extremals { path } => cmd_extremals(&path),
        Command::Vc { path, brute, specialized, json } => cmd_vc(&path, brute, specialized, json),
        Command::Oracle { path, grid, sample, seed, cover, budget } => {
            cmd_oracle(&path, grid, sample, seed, cover, budget)
        }
        Command::Gen { kind, n, density, seed, places, sense, planted, adjacency, output } => {
            cmd_gen(kind, n, density, seed, places, sense, planted, adjacency, output.as_deref())
        }
        Command::Check { path, x, json } => cmd_check(&path, &x, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        // a reader that closed the pipe early is not an error
        Err(e) if e.chain().any(|c| {
            c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
        }) =>
        {
            ExitCode::from(EXIT_OK)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::from(EXIT_FAILURE)
            }
        }
    }
}
