//! `mecsize`: sample random causal graphs, decide d-separation and Markov
//! equivalence, compute lower-bound certificates for equivalence class sizes,
//! and drive the desk-scale experiments.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context};
use clap::{Parser, Subcommand};

use mecsize_cli::config::{Caps, ConfigFile};
use mecsize_cli::experiments::{
    census_csv, run_census, run_scaling, run_suite, run_tails, scaling_csv, tails_csv,
    OutputFormat, PSpec, ScalingConfig, Suite, TailsConfig,
};
use mecsize_cli::format::{parse_kind, read_graph_file, write_graph_file};
use mecsize_core::dsep::is_d_connected_oracle_with_cap;
use mecsize_core::{
    certificate, markov_equivalent_dag_fast, markov_equivalent_exact_with_cap,
    mec_enumerate_oracle, mec_enumerate_with_cap, reverse_cycle,
    sample_dnp_rejection_with_budget, sample_uniform_admg, sample_uniform_dcg, CertificatePayload,
    DsepEngine, DsepQuery, GraphKind, MixedGraph, RngSeed, TowerSampler, VertexId, VertexSet,
};

#[derive(Parser)]
#[command(name = "mecsize", version, about = "Random causal graphs, d-separation, and Markov equivalence class bounds")]
struct Cli {
    /// Optional TOML config supplying defaults for the experiment flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two vertices are d-connected given a conditioning set.
    Dsep {
        graph: PathBuf,
        #[arg(long)]
        x: u32,
        #[arg(long)]
        y: u32,
        /// Conditioning vertices, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        given: Vec<u32>,
        /// Cross-check with the exhaustive walk oracle (small graphs only).
        #[arg(long)]
        oracle: bool,
    },
    /// Test whether two graphs are Markov equivalent.
    Equiv {
        file1: PathBuf,
        file2: PathBuf,
        /// Use the skeleton/v-structure test (DAGs only) instead of the
        /// signature comparison.
        #[arg(long)]
        fast: bool,
    },
    /// Size of a DAG's Markov equivalence class.
    Mec {
        file: PathBuf,
        /// Use the brute-force enumeration oracle (small graphs, any kind).
        #[arg(long)]
        oracle: bool,
        /// Also list the class members.
        #[arg(long)]
        members: bool,
    },
    /// Constructive lower-bound certificate for the MEC size.
    Bound { graph: PathBuf },
    /// Reverse a directed cycle, rewiring external in-edges one step back.
    Reverse {
        graph: PathBuf,
        /// Cycle as a comma-separated vertex list, e.g. 1,2,3.
        #[arg(long, value_delimiter = ',')]
        cycle: Vec<u32>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Sample random graphs.
    Sample {
        /// dag, admg, or dcg.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: u32,
        /// Edge probability for DAG sampling (default 0.5; uniform).
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        seed: u64,
        /// tower (exact DP sampler) or rejection.
        #[arg(long, default_value = "tower")]
        method: String,
        /// Output file, or output directory in batch mode.
        #[arg(short, long)]
        output: PathBuf,
        /// Batch mode: write this many graphs into the output directory.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Exhaustive Markov-equivalence census over all DAGs up to max-n.
    Census {
        #[arg(long)]
        max_n: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// csv (default) or json.
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Layer-2 matching sizes over an (n, p) grid.
    Scaling {
        /// Vertex counts, comma separated.
        #[arg(long, value_delimiter = ',')]
        n: Vec<u32>,
        /// Explicit probability grid, comma separated.
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        /// Alternative to --p: the rule `c/n` (pass --c).
        #[arg(long)]
        p_rule: Option<String>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
    },
    /// Empirical frequencies of the layer-size concentration events.
    Tails {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
    },
    /// Run the verification suites; exits nonzero if any check fails.
    Verify {
        /// all, reversible, flips, admg-toggle, dcg-reverse, dsep-oracle, or
        /// sampler.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for replayable failure artifacts.
        #[arg(long)]
        failures_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn or_cfg<T: Clone>(flag: Option<T>, cfg: Option<&T>, default: T) -> T {
    flag.or_else(|| cfg.cloned()).unwrap_or(default)
}

fn run() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut caps = Caps::from_env();
    cfg.apply_caps(&mut caps);

    match cli.command {
        Command::Dsep {
            graph,
            x,
            y,
            given,
            oracle,
        } => {
            let g = read_graph_file(&graph)?;
            let mut z = VertexSet::empty(g.n());
            for v in given {
                ensure!(v >= 1 && v <= g.n(), "conditioning vertex {v} out of range");
                z.insert(VertexId::new(v));
            }
            let q = DsepQuery::new(VertexId::new(x), VertexId::new(y), z)
                .context("invalid query: x, y must differ and avoid the conditioning set")?;
            let connected = DsepEngine::new(&g).is_d_connected(&q)?;
            if oracle {
                let slow = is_d_connected_oracle_with_cap(&g, &q, caps.oracle)?;
                ensure!(
                    slow == connected,
                    "internal error: walk oracle disagrees with the reachability engine"
                );
            }
            println!("{}", if connected { "connected" } else { "separated" });
        }
        Command::Equiv { file1, file2, fast } => {
            let g1 = read_graph_file(&file1)?;
            let g2 = read_graph_file(&file2)?;
            let eq = if fast {
                markov_equivalent_dag_fast(&g1, &g2)?
            } else {
                markov_equivalent_exact_with_cap(&g1, &g2, caps.signature)?
            };
            println!("{}", if eq { "equivalent" } else { "not-equivalent" });
        }
        Command::Mec {
            file,
            oracle,
            members,
        } => {
            let g = read_graph_file(&file)?;
            let mec = if oracle {
                mec_enumerate_oracle(&g)?
            } else {
                mec_enumerate_with_cap(&g, caps.enumeration)?
            };
            println!("size={}", mec.size());
            if members {
                for m in mec.members() {
                    println!("{}", one_line(m));
                }
            }
        }
        Command::Bound { graph } => {
            let g = read_graph_file(&graph)?;
            let cert = certificate(&g);
            match &cert.payload {
                CertificatePayload::Matching(m) => {
                    for &(v, w) in m.edges() {
                        println!("matching-edge {v} -> {w}");
                    }
                }
                CertificatePayload::SStructures(s) => {
                    println!("gadget-triples m={}", s.m());
                    for t in s.selection() {
                        println!(
                            "selected-triple v1={} v2={} v3={} shortcut={}",
                            t.v1,
                            t.v2,
                            t.v3,
                            if t.present { "present" } else { "absent" }
                        );
                    }
                }
                CertificatePayload::CyclePacking(p) => {
                    for c in p.cycles() {
                        let list: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                        println!("cycle {}", list.join(","));
                    }
                }
            }
            println!("log2_mec_lower_bound={}", cert.log2_bound);
        }
        Command::Reverse {
            graph,
            cycle,
            output,
        } => {
            let g = read_graph_file(&graph)?;
            let c: Vec<VertexId> = cycle.iter().map(|&v| VertexId::new(v)).collect();
            let h = reverse_cycle(&g, &c)?;
            write_graph_file(&output, &h)?;
            println!("wrote {}", output.display());
        }
        Command::Sample {
            kind,
            n,
            p,
            seed,
            method,
            output,
            trials,
        } => {
            let kind = parse_kind(&kind).context("kind must be dag, admg, or dcg")?;
            let seed = RngSeed::new(seed);
            if kind != GraphKind::Dag && p.is_some() {
                bail!("--p only applies to DAG sampling; ADMGs and DCGs are uniform");
            }
            if kind != GraphKind::Dag && method != "tower" {
                bail!("--method only applies to DAG sampling");
            }
            let p = p.unwrap_or(0.5);
            let sampler = match (kind, method.as_str()) {
                (GraphKind::Dag, "tower") => Some(TowerSampler::new(n, p)?),
                (GraphKind::Dag, "rejection") => None,
                (GraphKind::Dag, other) => bail!("unknown method `{other}`"),
                _ => None,
            };
            let draw = |s: RngSeed| -> anyhow::Result<MixedGraph> {
                Ok(match kind {
                    GraphKind::Dag => match &sampler {
                        Some(ts) => ts.sample(s),
                        None => sample_dnp_rejection_with_budget(n, p, s, caps.rejection_budget)?,
                    },
                    GraphKind::Admg => sample_uniform_admg(n, s),
                    GraphKind::Dcg => sample_uniform_dcg(n, s),
                })
            };
            match trials {
                None => {
                    write_graph_file(&output, &draw(seed)?)?;
                    println!("wrote {}", output.display());
                }
                Some(t) => {
                    std::fs::create_dir_all(&output)
                        .with_context(|| format!("creating {}", output.display()))?;
                    for i in 0..t {
                        let path = output.join(format!("trial-{i:05}.graph"));
                        write_graph_file(&path, &draw(seed.stream(i))?)?;
                    }
                    println!("wrote {t} graphs under {}", output.display());
                }
            }
        }
        Command::Census {
            max_n,
            output,
            format,
            seed,
        } => {
            let max_n = or_cfg(max_n, cfg.max_n.as_ref(), 4);
            let seed = RngSeed::new(or_cfg(seed, cfg.seed.as_ref(), 0));
            let fmt = parse_format(format, &cfg)?;
            let rows = run_census(max_n, seed)?;
            let body = match fmt {
                OutputFormat::Csv => census_csv(&rows),
                OutputFormat::Json => serde_json::to_string_pretty(&rows)? + "\n",
            };
            emit(output.as_deref().or(cfg.output.as_deref().map(Path::new)), &body)?;
            for r in &rows {
                println!(
                    "n={} dags={} mecs={} mean={:.3} max={}",
                    r.n, r.dag_count, r.mec_count, r.mean_mec_size, r.max_mec_size
                );
            }
        }
        Command::Scaling {
            n,
            p,
            p_rule,
            c,
            trials,
            seed,
            output,
            format,
        } => {
            let n_grid = if n.is_empty() {
                cfg.n.clone().unwrap_or_default()
            } else {
                n
            };
            ensure!(!n_grid.is_empty(), "pass --n (or `n` in the config file)");
            let p_rule = p_rule.or(cfg.p_rule.clone());
            let p_spec = match p_rule.as_deref() {
                Some("c/n") => PSpec::OverN {
                    c: or_cfg(c, cfg.c.as_ref(), 6.0),
                },
                Some(other) => bail!("unknown --p-rule `{other}` (supported: c/n)"),
                None => {
                    let grid = if p.is_empty() { cfg.p.clone().unwrap_or_default() } else { p };
                    ensure!(!grid.is_empty(), "pass --p or --p-rule c/n --c C");
                    PSpec::Grid(grid)
                }
            };
            let config = ScalingConfig {
                n_grid,
                p_spec,
                trials: or_cfg(trials, cfg.trials.as_ref(), 50),
                seed: RngSeed::new(or_cfg(seed, cfg.seed.as_ref(), 1)),
            };
            let fmt = parse_format(format, &cfg)?;
            let (records, summary) = run_scaling(&config)?;
            let body = match fmt {
                OutputFormat::Csv => scaling_csv(&records),
                OutputFormat::Json => {
                    serde_json::to_string_pretty(&serde_json::json!({
                        "records": records,
                        "summary": summary,
                    }))? + "\n"
                }
            };
            emit(output.as_deref().or(cfg.output.as_deref().map(Path::new)), &body)?;
            for pt in &summary.points {
                println!(
                    "n={} p={:.6} median_matching={:.1} frac_meeting_floor={:.2}",
                    pt.n, pt.p, pt.median_matching_size, pt.frac_meeting_floor
                );
            }
        }
        Command::Tails {
            n,
            p,
            trials,
            seed,
            output,
            format,
        } => {
            let n = or_cfg(n, cfg.n.as_ref().and_then(|v| v.first()), 0);
            ensure!(n >= 1, "pass --n");
            let p = or_cfg(p, cfg.p.as_ref().and_then(|v| v.first()), f64::NAN);
            ensure!(p.is_finite(), "pass --p");
            let summary = run_tails(TailsConfig {
                n,
                p,
                trials: or_cfg(trials, cfg.trials.as_ref(), 100),
                seed: RngSeed::new(or_cfg(seed, cfg.seed.as_ref(), 1)),
            })?;
            if summary.hypothesis_warning {
                eprintln!(
                    "warning: p = {p} is below 6/n = {:.6}; the concentration regime assumes 6/n <= p",
                    6.0 / n as f64
                );
            }
            let fmt = parse_format(format, &cfg)?;
            let body = match fmt {
                OutputFormat::Csv => tails_csv(&summary),
                OutputFormat::Json => serde_json::to_string_pretty(&summary)? + "\n",
            };
            if let Some(path) = output.as_deref().or(cfg.output.as_deref().map(Path::new)) {
                std::fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?;
            }
            println!(
                "h1<=5/p: {:.3}   h1>=1/(20p ln(1/p)): {:.3}   h2>=1/(p ln^2(1/p)): {:.3}",
                summary.freq_h1_upper, summary.freq_h1_lower, summary.freq_h2_lower
            );
        }
        Command::Verify {
            suite,
            trials,
            seed,
            failures_dir,
        } => {
            let suite_name = suite.or(cfg.suite.clone()).unwrap_or_else(|| "all".into());
            let suite = Suite::parse(&suite_name)
                .with_context(|| format!("unknown suite `{suite_name}`"))?;
            let trials = or_cfg(trials, cfg.trials.as_ref(), 200);
            let seed = RngSeed::new(or_cfg(seed, cfg.seed.as_ref(), 1));
            let failures_dir = failures_dir
                .or_else(|| cfg.failures_dir.clone().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("failures"));
            let report = run_suite(suite, trials, seed, Some(&failures_dir))?;
            for outcome in &report.outcomes {
                println!("{outcome}");
                for f in &outcome.failures {
                    println!("  {f}");
                }
            }
            if !report.all_passed() {
                eprintln!("failure artifacts (if any) under {}", failures_dir.display());
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_format(flag: Option<String>, cfg: &ConfigFile) -> anyhow::Result<OutputFormat> {
    let name = flag.or(cfg.format.clone()).unwrap_or_else(|| "csv".into());
    OutputFormat::parse(&name).with_context(|| format!("unknown format `{name}` (csv or json)"))
}

fn emit(path: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match path {
        Some(path) => {
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn one_line(g: &MixedGraph) -> String {
    let mut parts: Vec<String> = g
        .directed_edges()
        .iter()
        .map(|(a, b)| format!("{a}->{b}"))
        .collect();
    parts.extend(
        g.bidirected_edges()
            .iter()
            .map(|(a, b)| format!("{a}<->{b}")),
    );
    if parts.is_empty() {
        format!("(empty graph on {} vertices)", g.n())
    } else {
        parts.join(" ")
    }
}
