//! Reproducible experiment runner for looplab.
//!
//! Every run resolves to an [`ExperimentConfig`]; its hash names the outputs and is
//! embedded in every record. A run whose records file already exists is skipped.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use looplab::LawSpec;

use crate::config::{jsonl_passes, ExperimentConfig, Outputs};

#[derive(Parser)]
#[command(name = "looplab", version, about = "Conditioned BGW trees, looptrees and negative-drift walks")]
struct Cli {
    /// JSON experiment config; command-line flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default: $LOOPLAB_OUT_DIR, else ./looplab-out)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for replicate parallelism
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Recompute even if outputs for this config already exist
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample BGW trees as DSV1 files
    SampleTree {
        #[command(flatten)]
        common: Common,
        /// Condition on |T| = n
        #[arg(long, conflicts_with = "at_least")]
        exact_size: bool,
        /// Condition on |T| ≥ n (subcritical laws)
        #[arg(long)]
        at_least: bool,
        /// Sample unconditioned trees, aborting above this many vertices
        #[arg(long)]
        max_vertices: Option<u64>,
    },
    /// Build Loop or Loop-bar of a tree and export edges and the H° profile
    Loop {
        #[command(flatten)]
        common: Common,
        /// DSV1 input instead of sampling
        #[arg(long)]
        tree: Option<PathBuf>,
        /// loop or loop-bar
        #[arg(long)]
        kind: Option<String>,
    },
    /// Draw Trunk*_h skeletons, or extract the trunk of one vertex of a DSV1 tree
    Trunk {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        h: Option<u64>,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long)]
        vertex: Option<u64>,
    },
    /// Sample free walks, or walks conditioned on ζ ≥ n when n > 1
    Walk {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        horizon: Option<u64>,
        /// Increments are K − shift
        #[arg(long)]
        shift: Option<u64>,
    },
    /// Windowed TV between the conditioned walk and the coupled process
    Couple {
        #[command(flatten)]
        common: Common,
        /// Comma-separated n values
        #[arg(long, value_delimiter = ',')]
        ladder: Option<Vec<u64>>,
        #[arg(long)]
        window: Option<u64>,
    },
    /// Run a named acceptance suite
    Verify {
        #[arg(long)]
        suite: Option<String>,
        /// full or quick
        #[arg(long)]
        scale: Option<String>,
    },
    /// Exact enumeration identities up to size n
    Oracle {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Short name (binary, geometric, geometric-truncated, heavy-tail, critical-inf-var, even-odd) or JSON spec
    #[arg(long)]
    law: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    /// Number of trees, draws, paths or samples
    #[arg(long)]
    count: Option<u64>,
}

impl Common {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<(), String> {
        if let Some(l) = &self.law {
            cfg.law = Some(LawSpec::parse(l).map_err(|e| e.to_string())?);
        }
        set(&mut cfg.n, self.n);
        set(&mut cfg.replicates, self.count);
        Ok(())
    }
}

fn set<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let name = match &cli.command {
        Command::SampleTree { common, exact_size, at_least, max_vertices } => {
            common.apply(&mut cfg)?;
            if *exact_size {
                cfg.mode = Some("exact".into());
            } else if *at_least {
                cfg.mode = Some("at-least".into());
            } else if max_vertices.is_some() || cfg.mode.is_none() && cfg.n.is_none() {
                cfg.mode = Some("free".into());
            }
            set(&mut cfg.max_vertices, *max_vertices);
            "sample-tree"
        }
        Command::Loop { common, tree, kind } => {
            common.apply(&mut cfg)?;
            set(&mut cfg.tree, tree.clone());
            set(&mut cfg.kind, kind.clone());
            "loop"
        }
        Command::Trunk { common, h, tree, vertex } => {
            common.apply(&mut cfg)?;
            set(&mut cfg.h, *h);
            set(&mut cfg.tree, tree.clone());
            set(&mut cfg.vertex, *vertex);
            "trunk"
        }
        Command::Walk { common, horizon, shift } => {
            common.apply(&mut cfg)?;
            set(&mut cfg.horizon, *horizon);
            set(&mut cfg.shift, *shift);
            "walk"
        }
        Command::Couple { common, ladder, window } => {
            common.apply(&mut cfg)?;
            if let Some(l) = ladder {
                cfg.ladder = l.clone();
            }
            set(&mut cfg.window, *window);
            "couple"
        }
        Command::Verify { suite, scale } => {
            set(&mut cfg.suite, suite.clone());
            set(&mut cfg.scale, scale.clone());
            "verify"
        }
        Command::Oracle { common } => {
            common.apply(&mut cfg)?;
            "oracle"
        }
    };
    if !cfg.experiment.is_empty() && cfg.experiment != name {
        return Err(format!("config is for {:?}, not {name:?}", cfg.experiment));
    }
    cfg.experiment = name.to_string();
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<bool, String> {
    let cfg = resolve(cli)?;
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| e.to_string())?;
    }
    let extra = commands::extra_inputs(&cfg)?;
    let hash = cfg.hash(&extra)?;
    let mut label = cfg.experiment.clone();
    if let Some(s) = cfg.suite.as_ref().filter(|_| cfg.experiment == "verify") {
        label = format!("verify-{s}");
    }
    let out = Outputs::new(cli.out.clone(), &label, hash);
    let records = out.path(".jsonl");
    if records.exists() && !cli.force {
        eprintln!("outputs for config {} already present, skipping", &out.hash[..16]);
        println!("{}", records.display());
        let text = std::fs::read_to_string(&records).map_err(|e| e.to_string())?;
        return jsonl_passes(&text);
    }
    let meta = serde_json::json!({ "config": cfg, "config_hash": out.hash, "law": commands::law_metadata(&cfg), "extra": extra, "module_version": looplab::VERSION });
    out.write(".config.json", &serde_json::to_string_pretty(&meta).unwrap())?;
    match cfg.experiment.as_str() {
        "sample-tree" => commands::sample_tree(&cfg, &out),
        "loop" => commands::looptree(&cfg, &out),
        "trunk" => commands::trunk(&cfg, &out),
        "walk" => commands::walk(&cfg, &out),
        "couple" => commands::couple(&cfg, &out),
        "verify" => commands::verify(&cfg, &out),
        "oracle" => commands::oracle(&cfg, &out),
        _ => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("threshold check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
