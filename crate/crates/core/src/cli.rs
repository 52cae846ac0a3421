//! Command-line driver, solution reports and the benchmark harness.
//!
//! Solution report (plain text):
//!
//! ```text
//! status OPTIMAL
//! parents 2
//! slot 0 1/3 1/6
//! slot 1 2/4 1/6
//! groups 1
//! 0 1 : I1 I2 I3
//! oracle_calls 0
//! wall_ms 1
//! ```
//!
//! Exit codes: 0 on success, 1 when the instance is infeasible, 2 on usage,
//! parse or I/O errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exact::{self, ExactLimits, ParentSelection, SolveStatus};
use crate::genotypes::{
    data_lines, parse_partition, parse_population, serialize_partition, serialize_population, CoverSolution,
    FindMinParentInstance, Genotype, Population,
};
use crate::greedy::{self, GreedyConfig};
use crate::mendel::Oracle;
use crate::reductions::{self, NonEdgeMode};
use crate::simgen::{self, ChildCount, SimConfig};

/// Parsed form of a solution report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub parents: usize,
    pub slots: Vec<Vec<Genotype>>,
    /// `(slot a, slot b, member ids)` per group.
    pub groups: Vec<(usize, usize, Vec<String>)>,
    pub oracle_calls: u64,
    pub wall_ms: u64,
}

impl SolveReport {
    pub fn from_cover(sol: &CoverSolution, pop: &Population, status: SolveStatus, wall: Duration) -> Self {
        Self {
            status,
            parents: sol.slot_count,
            slots: sol.slot_genotypes.iter().map(|s| s.loci.clone()).collect(),
            groups: sol
                .groups
                .iter()
                .zip(&sol.family_of_group)
                .map(|(g, &(a, b))| (a, b, g.iter().map(|&i| pop.members()[i].id.clone()).collect()))
                .collect(),
            oracle_calls: sol.oracle_calls,
            wall_ms: wall.as_millis() as u64,
        }
    }

    /// Slots are the chosen pool members in index order.
    pub fn from_selection(
        sel: &ParentSelection,
        inst: &FindMinParentInstance,
        status: SolveStatus,
        wall: Duration,
    ) -> Self {
        let slot_of = |p: usize| sel.chosen.iter().position(|&c| c == p).expect("pair within chosen");
        Self {
            status,
            parents: sel.chosen.len(),
            slots: sel
                .chosen
                .iter()
                .map(|&p| inst.parent_pool.members()[p].loci.clone())
                .collect(),
            groups: inst
                .partition
                .iter()
                .zip(&sel.pair_of_group)
                .map(|(cell, &(a, b))| {
                    (
                        slot_of(a),
                        slot_of(b),
                        cell.iter().map(|&i| inst.population.members()[i].id.clone()).collect(),
                    )
                })
                .collect(),
            oracle_calls: 0,
            wall_ms: wall.as_millis() as u64,
        }
    }

    pub fn infeasible(wall: Duration) -> Self {
        Self {
            status: SolveStatus::Infeasible,
            parents: 0,
            slots: Vec::new(),
            groups: Vec::new(),
            oracle_calls: 0,
            wall_ms: wall.as_millis() as u64,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "status {}", self.status.as_str()).unwrap();
        writeln!(out, "parents {}", self.parents).unwrap();
        for (i, loci) in self.slots.iter().enumerate() {
            write!(out, "slot {i}").unwrap();
            for g in loci {
                write!(out, " {g}").unwrap();
            }
            out.push('\n');
        }
        writeln!(out, "groups {}", self.groups.len()).unwrap();
        for (a, b, ids) in &self.groups {
            writeln!(out, "{a} {b} : {}", ids.join(" ")).unwrap();
        }
        writeln!(out, "oracle_calls {}", self.oracle_calls).unwrap();
        writeln!(out, "wall_ms {}", self.wall_ms).unwrap();
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = data_lines(text).peekable();
        let mut expect = |key: &str| -> Result<(usize, String)> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("missing `{key}` line")))?;
            let rest = line
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or_else(|| Error::parse(no, format!("expected `{key} ...`")))?;
            Ok((no, rest.trim().to_string()))
        };
        let num = |no: usize, s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::parse(no, format!("`{s}` is not a count")))
        };

        let (no, s) = expect("status")?;
        let status = s.parse().map_err(|e: String| Error::parse(no, e))?;
        let (no, s) = expect("parents")?;
        let parents = num(no, &s)? as usize;
        let mut slots = Vec::with_capacity(parents);
        for i in 0..parents {
            let (no, s) = expect("slot")?;
            let mut toks = s.split_whitespace();
            if toks.next().map(|t| num(no, t)).transpose()? != Some(i as u64) {
                return Err(Error::parse(no, format!("expected slot {i}")));
            }
            let loci = toks
                .map(str::parse::<Genotype>)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(no, e))?;
            slots.push(loci);
        }
        let (no, s) = expect("groups")?;
        let count = num(no, &s)?;
        let mut groups = Vec::new();
        for _ in 0..count {
            let (no, line) = lines.next().ok_or_else(|| Error::parse(0, "missing group line"))?;
            let (pair, ids) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(no, "group line needs `a b : ids`"))?;
            let pair: Vec<u64> = pair
                .split_whitespace()
                .map(|t| num(no, t))
                .collect::<Result<_>>()?;
            if pair.len() != 2 {
                return Err(Error::parse(no, "group line needs two slot indices"));
            }
            groups.push((
                pair[0] as usize,
                pair[1] as usize,
                ids.split_whitespace().map(String::from).collect(),
            ));
        }
        let mut oracle_calls = 0;
        let mut wall_ms = 0;
        for (no, line) in lines {
            match line.split_once(' ') {
                Some(("oracle_calls", v)) => oracle_calls = num(no, v.trim())?,
                Some(("wall_ms", v)) => wall_ms = num(no, v.trim())?,
                _ => return Err(Error::parse(no, format!("unexpected line `{line}`"))),
            }
        }
        Ok(Self {
            status,
            parents,
            slots,
            groups,
            oracle_calls,
            wall_ms,
        })
    }
}

#[derive(Debug, Parser)]
#[command(name = "minparent", version, about = "Cover a population by sibling groups with few parents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test whether the listed members form a sibling set
    Check {
        population: PathBuf,
        /// Comma-separated member ids
        #[arg(long, value_delimiter = ',', required = true)]
        members: Vec<String>,
    },
    /// Greedy cover with subset-size cap c
    SolveGreedy {
        population: PathBuf,
        #[arg(long, default_value_t = 3)]
        c: usize,
    },
    /// Exact minimum-parent cover
    SolveExact {
        population: PathBuf,
        #[arg(long)]
        max_slots: Option<usize>,
        #[arg(long)]
        budget_ms: Option<u64>,
    },
    /// Choose parents from a pool for a fixed partition
    FindParents(FindParentsArgs),
    /// Generate a random population with known families
    GenRandom {
        #[arg(long)]
        families: usize,
        /// Children per family: `C` or an inclusive range `LO..HI`
        #[arg(long)]
        children: String,
        #[arg(long)]
        loci: usize,
        #[arg(long)]
        alleles: u32,
        #[arg(long)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Build the MIN-PARENT instance for a triangle-packing graph
    ReduceTp {
        graph: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Build the FIND-MIN-PARENT instance for a MINREP instance
    ReduceMinrep {
        minrep: PathBuf,
        /// Directory for universe.txt, pool.txt and partition.txt
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// One non-edge locus per (pair, child) instead of per pair
        #[arg(long)]
        faithful: bool,
    },
    /// Maximum vertex-disjoint triangle packing by brute force
    SolveTpBrute { graph: PathBuf },
    /// Minimum MINREP solution by brute force
    SolveMinrepBrute { minrep: PathBuf },
    /// Run a benchmark suite and print CSV
    Bench {
        /// Built-in suite name
        #[arg(long, default_value = "smoke")]
        suite: String,
        /// Manifest file; overrides --suite
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct FindParentsArgs {
    population: PathBuf,
    pool: PathBuf,
    partition: PathBuf,
    #[arg(long, conflicts_with = "greedy")]
    exact: bool,
    #[arg(long)]
    greedy: bool,
    #[arg(long)]
    budget_ms: Option<u64>,
}

enum Outcome {
    Ok,
    Infeasible,
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Infeasible) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn budget(ms: Option<u64>) -> Option<Duration> {
    ms.map(Duration::from_millis)
}

fn parse_child_count(s: &str) -> Result<ChildCount> {
    let bad = || Error::InvalidConfig(format!("children `{s}` is not `C` or `LO..HI`"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok(ChildCount::Range(
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?,
        )),
        None => Ok(ChildCount::Fixed(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Check { population, members } => {
            let pop = parse_population(&read(&population)?)?;
            let idx = members
                .iter()
                .map(|id| {
                    pop.index_of(id)
                        .ok_or_else(|| Error::InvalidInstance(format!("unknown member `{id}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let oracle = Oracle::new();
            writeln!(out, "SIBLING {}", oracle.is_sibling_set(&pop, &idx)?)?;
        }
        Command::SolveGreedy { population, c } => {
            let pop = parse_population(&read(&population)?)?;
            let start = Instant::now();
            let oracle = Oracle::new();
            let sol = greedy::greedy_cover(&pop, GreedyConfig::new(c)?, &oracle)?;
            let report = SolveReport::from_cover(&sol, &pop, SolveStatus::Feasible, start.elapsed());
            out.write_all(report.render().as_bytes())?;
        }
        Command::SolveExact {
            population,
            max_slots,
            budget_ms,
        } => {
            let pop = parse_population(&read(&population)?)?;
            let start = Instant::now();
            let limits = ExactLimits {
                max_slots,
                time_budget: budget(budget_ms),
            };
            let res = exact::exact_min_parent(&pop, limits)?;
            if res.status != SolveStatus::Optimal {
                writeln!(err, "search limit reached; reporting the pairing cover")?;
            }
            let report = SolveReport::from_cover(&res.solution, &pop, res.status, start.elapsed());
            out.write_all(report.render().as_bytes())?;
        }
        Command::FindParents(args) => return find_parents(args, out, err),
        Command::GenRandom {
            families,
            children,
            loci,
            alleles,
            seed,
            output,
            truth,
        } => {
            let cfg = SimConfig {
                families,
                children_per_family: parse_child_count(&children)?,
                loci,
                alleles_per_locus: alleles,
                seed,
            };
            let (pop, gt) = simgen::random_population(&cfg)?;
            emit(&serialize_population(&pop), output.as_deref(), out)?;
            if let Some(t) = truth {
                std::fs::write(t, gt.serialize(&pop))?;
            }
        }
        Command::ReduceTp { graph, output } => {
            let g = reductions::parse_graph(&read(&graph)?)?;
            let pop = reductions::reduce_tp(&g)?;
            emit(&serialize_population(&pop), output.as_deref(), out)?;
        }
        Command::ReduceMinrep {
            minrep,
            output,
            faithful,
        } => {
            let m = reductions::parse_minrep(&read(&minrep)?)?;
            let mode = if faithful {
                NonEdgeMode::Faithful
            } else {
                NonEdgeMode::Compact
            };
            let inst = reductions::reduce_minrep(&m, mode)?;
            let universe = serialize_population(&inst.population);
            let pool = serialize_population(&inst.parent_pool);
            let partition = serialize_partition(&inst.partition, &inst.population);
            match output {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    std::fs::write(dir.join("universe.txt"), universe)?;
                    std::fs::write(dir.join("pool.txt"), pool)?;
                    std::fs::write(dir.join("partition.txt"), partition)?;
                }
                None => {
                    write!(out, "# universe.txt\n{universe}# pool.txt\n{pool}# partition.txt\n{partition}")?;
                }
            }
        }
        Command::SolveTpBrute { graph } => {
            let g = reductions::parse_graph(&read(&graph)?)?;
            let sol = reductions::brute_tp(&g);
            writeln!(out, "triangles {}", sol.t)?;
            for [a, b, c] in sol.triangles {
                writeln!(out, "{a} {b} {c}")?;
            }
        }
        Command::SolveMinrepBrute { minrep } => {
            let m = reductions::parse_minrep(&read(&minrep)?)?;
            let (gamma, witness) = reductions::brute_minrep(&m)?;
            let names: Vec<String> = witness.iter().map(ToString::to_string).collect();
            writeln!(out, "gamma {gamma}")?;
            writeln!(out, "witness {}", names.join(" "))?;
        }
        Command::Bench { suite, manifest } => {
            let (text, base) = match manifest {
                Some(p) => {
                    let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
                    (read(&p)?, base)
                }
                None => (builtin_suite(&suite)?.to_string(), PathBuf::new()),
            };
            let manifest = BenchManifest::parse(&text)?;
            out.write_all(run_bench(&manifest, &base)?.as_bytes())?;
        }
    }
    Ok(Outcome::Ok)
}

fn find_parents(args: FindParentsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    let pop = parse_population(&read(&args.population)?)?;
    let pool = parse_population(&read(&args.pool)?)?;
    let partition = parse_partition(&read(&args.partition)?, &pop)?;
    let inst = FindMinParentInstance::new(pop, pool, partition)?;
    let start = Instant::now();

    let result = if args.greedy {
        exact::greedy_find_min_parent(&inst).map(|s| (s, SolveStatus::Feasible))
    } else {
        let limits = ExactLimits {
            max_slots: None,
            time_budget: budget(args.budget_ms),
        };
        match exact::exact_find_min_parent(&inst, limits) {
            Err(Error::BudgetExceeded) => {
                writeln!(err, "search budget exceeded; falling back to greedy")?;
                exact::greedy_find_min_parent(&inst).map(|s| (s, SolveStatus::Feasible))
            }
            other => other.map(|s| (s, SolveStatus::Optimal)),
        }
    };
    match result {
        Ok((sel, status)) => {
            for (slot, &p) in sel.chosen.iter().enumerate() {
                writeln!(err, "slot {slot} = {}", inst.parent_pool.members()[p].id)?;
            }
            let report = SolveReport::from_selection(&sel, &inst, status, start.elapsed());
            out.write_all(report.render().as_bytes())?;
            Ok(Outcome::Ok)
        }
        Err(Error::Infeasible(msg)) => {
            writeln!(err, "infeasible: {msg}")?;
            out.write_all(SolveReport::infeasible(start.elapsed()).render().as_bytes())?;
            Ok(Outcome::Infeasible)
        }
        Err(e) => Err(e),
    }
}

const SMOKE_SUITE: &str = include_str!("../bench/smoke.toml");

fn builtin_suite(name: &str) -> Result<&'static str> {
    match name {
        "smoke" => Ok(SMOKE_SUITE),
        other => Err(Error::InvalidConfig(format!("unknown bench suite `{other}`"))),
    }
}

/// Benchmark manifest: instances crossed with algorithm runs.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchManifest {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(rename = "instance")]
    pub instances: Vec<BenchInstance>,
    #[serde(rename = "run")]
    pub runs: Vec<BenchRun>,
}

/// Exactly one of the source fields must be set.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchInstance {
    pub name: String,
    /// Inline population text.
    pub population: Option<String>,
    /// Population file, relative to the manifest.
    pub file: Option<PathBuf>,
    /// Inline graph text, reduced with the triangle-packing gadget.
    pub graph: Option<String>,
    pub random: Option<BenchRandom>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchRandom {
    pub families: usize,
    pub children: usize,
    pub loci: usize,
    pub alleles: u32,
    pub seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchRun {
    pub algorithm: String,
    pub c: Option<usize>,
    pub budget_ms: Option<u64>,
}

impl BenchManifest {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(format!("bench manifest: {e}")))
    }

    /// A built-in suite by name; only `smoke` exists.
    pub fn builtin(name: &str) -> Result<Self> {
        Self::parse(builtin_suite(name)?)
    }
}

pub const BENCH_HEADER: &str = "instance,n,l,algorithm,c,parents,optimal,oracle_calls,millis";

impl BenchInstance {
    fn load(&self, base: &Path) -> Result<Population> {
        let sources = [
            self.population.is_some(),
            self.file.is_some(),
            self.graph.is_some(),
            self.random.is_some(),
        ];
        if sources.iter().filter(|s| **s).count() != 1 {
            return Err(Error::InvalidConfig(format!(
                "bench instance `{}` needs exactly one source",
                self.name
            )));
        }
        if let Some(text) = &self.population {
            return parse_population(text);
        }
        if let Some(f) = &self.file {
            return parse_population(&read(&base.join(f))?);
        }
        if let Some(g) = &self.graph {
            return reductions::reduce_tp(&reductions::parse_graph(g)?);
        }
        let r = self.random.as_ref().expect("one source is set");
        let cfg = SimConfig {
            families: r.families,
            children_per_family: ChildCount::Fixed(r.children),
            loci: r.loci,
            alleles_per_locus: r.alleles,
            seed: r.seed,
        };
        Ok(simgen::random_population(&cfg)?.0)
    }
}

pub fn run_bench(manifest: &BenchManifest, base: &Path) -> Result<String> {
    let mut csv = format!("{BENCH_HEADER}\n");
    for inst in &manifest.instances {
        let pop = inst.load(base)?;
        for run in &manifest.runs {
            let start = Instant::now();
            let (c, parents, optimal, calls) = match run.algorithm.as_str() {
                "greedy" => {
                    let c = run.c.unwrap_or(3);
                    let oracle = Oracle::new();
                    let sol = greedy::greedy_cover(&pop, GreedyConfig::new(c)?, &oracle)?;
                    (c.to_string(), sol.slot_count, false, sol.oracle_calls)
                }
                "exact" => {
                    let limits = ExactLimits {
                        max_slots: None,
                        time_budget: budget(run.budget_ms),
                    };
                    let res = exact::exact_min_parent(&pop, limits)?;
                    (
                        String::new(),
                        res.solution.slot_count,
                        res.status == SolveStatus::Optimal,
                        0,
                    )
                }
                other => return Err(Error::InvalidConfig(format!("unknown algorithm `{other}`"))),
            };
            writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{}",
                inst.name,
                pop.n(),
                pop.ell(),
                run.algorithm,
                c,
                parents,
                optimal,
                calls,
                start.elapsed().as_millis()
            )
            .unwrap();
        }
    }
    Ok(csv)
}
