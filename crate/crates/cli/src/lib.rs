//! Command-line interface for the `dmbst` library.
//!
//! Exit codes: 0 success, 1 internal error or failed check, 2 invalid input or parameters,
//! 3 an exponential search exceeded its cap.

pub mod bench;
pub mod manifest;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use dmbst::approx::{nkry_with, pkry, ApproxResult, ChildOrdering, NkryOptions};
use dmbst::btsp::{btsp_order_children, btsp_path};
use dmbst::gadget::{audit_gaps, build_gadget, equivalence_check, GadgetParams, Preset, Variant};
use dmbst::io::{grid_to_json, parse_grid_json, parse_points, parse_points_json, to_json_string, PointFile};
use dmbst::oracle::{exact_dmbst, hamiltonian_path_exists};
use dmbst::spanning::TreeJson;
use dmbst::starsearch::{self, ObjectiveKind, SearchOptions};
use dmbst::{mst, Error, Metric, Point3, PointSet, Result};

use bench::Generator;
use manifest::{parse_manifest, sha256_hex, FileDigest, RunManifest, ARTIFACT_VERSION};

#[derive(Debug, Parser)]
#[command(name = "dmbst", version, about = "Degree-bounded minimum bottleneck spanning trees in 3-D")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write a run manifest with input and output digests.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Point file: JSON `{"metric", "points"}` or CSV rows `x,y,z`.
    pub points: PathBuf,
    /// Overrides the file's metric (default euclidean).
    #[arg(long)]
    pub metric: Option<Metric>,
}

#[derive(Debug, Args)]
pub struct GadgetArgs {
    /// Grid graph file `{"vertices": [[x, y], ...]}`.
    pub grid: PathBuf,
    #[arg(long, default_value = "e5")]
    pub variant: Variant,
    #[arg(long, default_value = "default")]
    pub preset: Preset,
    /// Rectilinear slack, replacing the preset's 0.01.
    #[arg(long)]
    pub delta_gap: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Ordering {
    /// Minimize the longest child-to-child link.
    Links,
    /// Also count the edge from the node to its first child.
    RootEdge,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimum spanning tree.
    Mst(PointArgs),
    /// Exact degree-bounded bottleneck tree (at most 14 points).
    Exact {
        #[command(flatten)]
        input: PointArgs,
        #[arg(long)]
        delta: usize,
    },
    /// NKRY approximation.
    Nkry {
        #[command(flatten)]
        input: PointArgs,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long, value_enum, default_value = "links")]
        ordering: Ordering,
    },
    /// PKRY approximation with `k` blocks per swapping node.
    Pkry {
        #[command(flatten)]
        input: PointArgs,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        root: usize,
    },
    /// Optimal bottleneck path from a start point through the given points.
    Btsp {
        #[command(flatten)]
        input: PointArgs,
        #[arg(long)]
        start: usize,
        /// Comma-separated point indices.
        #[arg(long, value_delimiter = ',', required = true)]
        visit: Vec<usize>,
        /// Ignore the edge from the start point (child-ordering objective).
        #[arg(long)]
        links_only: bool,
    },
    /// Search for stars maximizing a swap objective.
    Search {
        #[arg(long, default_value = "euclidean")]
        metric: Metric,
        #[arg(long)]
        children: usize,
        /// `nkry` or `pkry:<k>`.
        #[arg(long, default_value = "nkry")]
        objective: ObjectiveKind,
        /// `<restarts>x<iterations>`.
        #[arg(long, default_value = "200x5000")]
        budget: String,
        /// Start restart 0 from a bundled fixture id or a point file.
        #[arg(long)]
        init: Option<String>,
        /// Include the improvement trajectory of the best restart.
        #[arg(long)]
        trajectory: bool,
    },
    /// Recompute every bundled reference configuration (or the given ids).
    Verify {
        ids: Vec<String>,
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Reduction gadgets from grid graphs.
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Hamiltonian path in a grid graph (at most 12 vertices).
    Hampath {
        grid: PathBuf,
    },
    /// Approximation ratios on generated instances, as CSV.
    Bench {
        #[arg(long, value_enum, default_value = "uniform-cube")]
        generator: Generator,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "euclidean")]
        metric: Metric,
        /// Comma-separated degree bounds.
        #[arg(long, value_delimiter = ',', default_value = "3")]
        delta: Vec<usize>,
        /// Add a wall-clock column (makes the output nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Re-run a manifest and compare output digests.
    Replay {
        manifest_file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum GadgetCommand {
    /// Write the gadget point set.
    Build(GadgetArgs),
    /// Classify all pairwise distances and check the gap.
    Audit(GadgetArgs),
    /// Compare tree feasibility on the gadget with Hamiltonian paths in the grid.
    Equiv(GadgetArgs),
}

/// Result text plus whether the command's own checks passed.
struct Output {
    text: String,
    ok: bool,
}

#[derive(Default)]
struct Context {
    inputs: Vec<FileDigest>,
}

impl Context {
    fn read(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(FileDigest { path: path.display().to_string(), sha256: sha256_hex(text.as_bytes()) });
        Ok(text)
    }

    fn points(&mut self, args: &PointArgs) -> Result<PointSet> {
        let text = self.read(&args.points)?;
        parse_points(&args.points.to_string_lossy(), &text, args.metric)
    }
}

fn json_output<T: Serialize>(value: &T) -> Result<Output> {
    Ok(Output { text: to_json_string(value)?, ok: true })
}

fn approx_json(name: &str, delta: usize, k: Option<usize>, root: usize, r: &ApproxResult) -> serde_json::Value {
    json!({
        "algorithm": name,
        "delta": delta,
        "k": k,
        "root": root,
        "n": r.tree.len(),
        "bottleneck_value": r.bottleneck_value,
        "mst_bottleneck": r.mst_bottleneck,
        "ratio_vs_mst": r.ratio_vs_mst,
        "tree": TreeJson::from(&r.tree),
        "swap_log": r.swap_log,
    })
}

fn parse_budget(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parameter(format!("budget `{s}` is not <restarts>x<iterations> with both positive"));
    let (r, i) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let (r, i) = (r.trim().parse::<usize>().map_err(|_| bad())?, i.trim().parse::<usize>().map_err(|_| bad())?);
    if r == 0 || i == 0 {
        return Err(bad());
    }
    Ok((r, i))
}

fn gadget_params(args: &GadgetArgs) -> Result<GadgetParams> {
    match args.delta_gap {
        None => GadgetParams::preset(args.variant, args.preset),
        Some(g) if args.variant.metric() == Metric::Rectilinear => GadgetParams::rectilinear(args.variant, g),
        Some(_) => Err(Error::Parameter("--delta-gap applies to rectilinear variants only".into())),
    }
}

fn verify_table(checks: &[starsearch::FixtureCheck]) -> String {
    let mut out = format!(
        "{:<26} {:<11} {:<8} {:>12} {:>12} {:>10}  {}\n",
        "fixture", "metric", "objective", "recomputed", "reference", "min sep", "result"
    );
    for c in checks {
        out.push_str(&format!(
            "{:<26} {:<11} {:<8} {:>12.6} {:>12.6} {:>10.5}  {}\n",
            c.id,
            c.metric,
            c.objective,
            c.recomputed,
            c.paper_value,
            c.min_separation,
            if c.pass { "PASS" } else { "FAIL" }
        ));
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    out.push_str(&format!("{passed}/{} passed\n", checks.len()));
    out
}

fn execute(cli: &Cli, ctx: &mut Context) -> Result<Output> {
    match &cli.command {
        Command::Mst(input) => {
            let ps = ctx.points(input)?;
            if ps.len() < 2 {
                return Err(Error::InvalidInput("a spanning tree of one point has no edges".into()));
            }
            let t = mst(&ps)?;
            json_output(&json!({
                "n": ps.len(),
                "metric": ps.metric(),
                "bottleneck": t.bottleneck()?,
                "max_degree": t.max_degree(),
                "total_weight": t.total_weight(),
                "tree": TreeJson::from(&t),
            }))
        }
        Command::Exact { input, delta } => {
            let ps = ctx.points(input)?;
            let r = exact_dmbst(&ps, *delta)?;
            json_output(&json!({
                "delta": delta,
                "n": ps.len(),
                "bottleneck_value": r.bottleneck_value,
                "node_count_explored": r.node_count_explored,
                "tree": TreeJson::from(&r.witness_tree),
            }))
        }
        Command::Nkry { input, delta, root, ordering } => {
            let ps = ctx.points(input)?;
            let ordering = match ordering {
                Ordering::Links => ChildOrdering::LinksOnly,
                Ordering::RootEdge => ChildOrdering::IncludeRootEdge,
            };
            let r = nkry_with(&ps, *delta, *root, NkryOptions { ordering })?;
            json_output(&approx_json("nkry", *delta, None, *root, &r))
        }
        Command::Pkry { input, delta, k, root } => {
            let ps = ctx.points(input)?;
            let r = pkry(&ps, *delta, *k, *root)?;
            json_output(&approx_json("pkry", *delta, Some(*k), *root, &r))
        }
        Command::Btsp { input, start, visit, links_only } => {
            let ps = ctx.points(input)?;
            if *start >= ps.len() {
                return Err(Error::InvalidInput(format!("start {start} out of range for {} points", ps.len())));
            }
            let (order, value) = if *links_only {
                let r = btsp_order_children(&ps, visit)?;
                (r.order, r.link_bottleneck)
            } else {
                let r = btsp_path(&ps, *start, visit)?;
                (r.order, r.bottleneck_value)
            };
            json_output(&json!({
                "start": start,
                "visit": visit,
                "objective": if *links_only { "links" } else { "path" },
                "order": order,
                "bottleneck_value": value,
            }))
        }
        Command::Search { metric, children, objective, budget, init, trajectory } => {
            let (restarts, iterations) = parse_budget(budget)?;
            let init = match init {
                None => None,
                Some(spec) => {
                    let path = Path::new(spec);
                    let points: Vec<Point3> = if path.exists() {
                        let text = ctx.read(path)?;
                        parse_points_json(&text, Some(*metric))?.points().to_vec()
                    } else {
                        starsearch::fixture(spec)?.points.iter().map(|&p| Point3::from(p)).collect()
                    };
                    Some(points)
                }
            };
            let opts = SearchOptions { restarts, iterations, seed: cli.seed, init, record_trajectory: *trajectory };
            json_output(&starsearch::search(*metric, *children, *objective, &opts)?)
        }
        Command::Verify { ids, json } => {
            let checks = if ids.is_empty() {
                starsearch::verify_all()?
            } else {
                ids.iter().map(|id| starsearch::verify_fixture(id)).collect::<Result<Vec<_>>>()?
            };
            let ok = checks.iter().all(|c| c.pass);
            let text = if *json { to_json_string(&checks)? } else { verify_table(&checks) };
            Ok(Output { text, ok })
        }
        Command::Gadget(sub) => {
            let (args, kind) = match sub {
                GadgetCommand::Build(a) => (a, "build"),
                GadgetCommand::Audit(a) => (a, "audit"),
                GadgetCommand::Equiv(a) => (a, "equiv"),
            };
            let g = parse_grid_json(&ctx.read(&args.grid)?)?;
            let params = gadget_params(args)?;
            match kind {
                "build" => json_output(&PointFile::from_set(&build_gadget(&g, &params)?.points)),
                "audit" => {
                    let gi = build_gadget(&g, &params)?;
                    let report = audit_gaps(&gi)?;
                    json_output(&json!({
                        "variant": params.variant,
                        "params": params,
                        "points": gi.points.len(),
                        "closed_form_bounds": params.closed_form_bounds(),
                        "report": report,
                    }))
                }
                _ => {
                    let report = equivalence_check(&g, &params)?;
                    Ok(Output { ok: report.agree, text: to_json_string(&report)? })
                }
            }
        }
        Command::Hampath { grid } => {
            let g = parse_grid_json(&ctx.read(grid)?)?;
            let witness = hamiltonian_path_exists(&g)?;
            json_output(&json!({
                "grid": grid_to_json(&g),
                "hamiltonian_path": witness.is_some(),
                "witness": witness.map(|w| w.into_iter().map(|(x, y)| [x, y]).collect::<Vec<_>>()),
            }))
        }
        Command::Bench { generator, n, metric, delta, timing } => {
            if *n < 2 {
                return Err(Error::InvalidInput("benchmarks need at least two points".into()));
            }
            let ps = bench::generate(*generator, *n, cli.seed, *metric)?;
            Ok(Output { text: bench::bench_csv(&ps, delta, *timing)?, ok: true })
        }
        Command::Replay { manifest_file } => {
            let m = parse_manifest(&ctx.read(manifest_file)?)?;
            let mut argv = vec!["dmbst".to_string()];
            argv.extend(m.flags.iter().cloned());
            let replayed = Cli::try_parse_from(&argv)
                .map_err(|e| Error::InvalidInput(format!("manifest arguments do not parse: {e}")))?;
            if matches!(replayed.command, Command::Replay { .. }) {
                return Err(Error::InvalidInput("a manifest cannot replay another manifest".into()));
            }
            let out = execute(&replayed, &mut Context::default())?;
            let actual = sha256_hex(out.text.as_bytes());
            let expected = m.outputs.first().map(|d| d.sha256.clone()).unwrap_or_default();
            let version_matches = m.artifact_version == ARTIFACT_VERSION;
            let identical = actual == expected;
            Ok(Output {
                ok: identical,
                text: to_json_string(&json!({
                    "command": m.command,
                    "expected_sha256": expected,
                    "actual_sha256": actual,
                    "identical": identical,
                    "artifact_version_matches": version_matches,
                }))?,
            })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Mst(_) => "mst",
        Command::Exact { .. } => "exact",
        Command::Nkry { .. } => "nkry",
        Command::Pkry { .. } => "pkry",
        Command::Btsp { .. } => "btsp",
        Command::Search { .. } => "search",
        Command::Verify { .. } => "verify",
        Command::Gadget(GadgetCommand::Build(_)) => "gadget build",
        Command::Gadget(GadgetCommand::Audit(_)) => "gadget audit",
        Command::Gadget(GadgetCommand::Equiv(_)) => "gadget equiv",
        Command::Hampath { .. } => "hampath",
        Command::Bench { .. } => "bench",
        Command::Replay { .. } => "replay",
    }
}

/// Arguments after the program name with `--manifest` removed.
fn recorded_flags(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv.iter().skip(1) {
        if skip {
            skip = false;
        } else if a == "--manifest" {
            skip = true;
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => 3,
        e if e.is_validation() => 2,
        _ => 1,
    }
}

/// Caps the worker pool at `BF_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("BF_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Parameter(format!("BF_THREADS=`{v}` is not a positive integer")))?;
        // a pool configured earlier in the process keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn run_parsed(cli: &Cli, argv: &[String]) -> Result<bool> {
    configure_threads()?;
    let start = Instant::now();
    let mut ctx = Context::default();
    let out = execute(cli, &mut ctx)?;
    match &cli.out {
        Some(path) => std::fs::write(path, &out.text)?,
        None => std::io::stdout().write_all(out.text.as_bytes())?,
    }
    if let Some(path) = &cli.manifest {
        let m = RunManifest {
            command: command_name(&cli.command).into(),
            flags: recorded_flags(argv),
            seed: cli.seed,
            inputs: ctx.inputs,
            outputs: vec![FileDigest {
                path: cli.out.as_ref().map_or("-".into(), |p| p.display().to_string()),
                sha256: sha256_hex(out.text.as_bytes()),
            }],
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            artifact_version: ARTIFACT_VERSION.into(),
        };
        std::fs::write(path, serde_json::to_string_pretty(&m)? + "\n")?;
    }
    Ok(out.ok)
}

/// Parses `argv` (including the program name), runs the command, and returns the exit code.
pub fn run(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_parsed(&cli, argv) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_parsing() {
        assert_eq!(parse_budget("200x5000").unwrap(), (200, 5000));
        assert_eq!(parse_budget("3X4").unwrap(), (3, 4));
        for bad in ["0x5", "5x0", "5", "axb", "-1x2"] {
            assert!(parse_budget(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn manifest_flags_drop_manifest() {
        let argv: Vec<String> = ["dmbst", "nkry", "p.json", "--manifest", "m.json", "--delta", "3", "--manifest=x"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(recorded_flags(&argv), vec!["nkry", "p.json", "--delta", "3"]);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::InvalidInput("x".into())), 2);
        assert_eq!(exit_code(&Error::CapExceeded { what: "x", size: 2, cap: 1, detail: String::new() }), 3);
        assert_eq!(exit_code(&Error::Audit("x".into())), 1);
    }
}
