use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use zcover::covering::{bound_report, covering_radius_of_words};
use zcover::families::{construct, ConstructOptions, FamilySpec};
use zcover::ring::gray_map;
use zcover::verify::{self, VerifyOptions, CHECKS};
use zcover::{covering_radius, LinearCode, MethodChoice, RingSpec, SearchConfig, WeightMetric, ZqVector};

#[derive(Parser, Debug)]
#[command(name = "zcover", version, about = "Covering radii of linear codes over Z_{2^s}")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for the search engines.
    #[arg(long, global = true, env = "ZCOVER_THREADS")]
    threads: Option<usize>,
    /// Cap on vectors visited (and distance evaluations) by any engine.
    #[arg(long, global = true)]
    budget_vectors: Option<u128>,
    /// Cap on coset-table entries.
    #[arg(long, global = true)]
    budget_memory: Option<u128>,
    /// Include the expensive verification instances.
    #[arg(long, global = true)]
    extended: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a family member, e.g. `construct simplex-alpha k=2`.
    Construct {
        family: String,
        /// Parameters as key=value.
        params: Vec<String>,
        /// Emit the dual code instead.
        #[arg(long)]
        dual: bool,
        /// Write the matrix to FILE and metadata to FILE.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Covering radius of the code in a matrix file (`-` for stdin).
    Radius {
        file: PathBuf,
        #[arg(long, default_value = "lee")]
        metric: WeightMetric,
        #[arg(long, default_value = "auto")]
        method: String,
        /// Largest weight tried by the bfs method.
        #[arg(long)]
        r_cap: Option<u32>,
        /// Same as --budget-vectors.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Lower and upper bounds on the covering radius.
    Bounds {
        file: PathBuf,
        #[arg(long, default_value = "homogeneous")]
        metric: WeightMetric,
        /// Block decomposition ROWS:COLS for the stacking bound.
        #[arg(long)]
        mattson: Option<String>,
    },
    /// Gray image of a Z4 code, with both covering radii on request.
    Gray {
        file: PathBuf,
        #[arg(long)]
        radius: bool,
    },
    /// Check the closed forms against the engines.
    Verify {
        /// Check ids, or `all`.
        ids: Vec<String>,
        /// List the available checks and exit.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
    },
}

impl Global {
    fn config(&self) -> SearchConfig {
        let mut cfg = SearchConfig {
            threads: self.threads,
            ..SearchConfig::default()
        };
        if let Some(v) = self.budget_vectors {
            cfg.max_distance_evals = v;
            cfg.max_syndrome_vectors = v;
            cfg.max_bfs_vectors = v;
        }
        if let Some(m) = self.budget_memory {
            cfg.max_table_entries = m;
        }
        cfg
    }
}

fn read_code(path: &Path) -> anyhow::Result<LinearCode> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(LinearCode::parse_matrix(&text)?)
}

fn parse_params(raw: &[String]) -> anyhow::Result<BTreeMap<String, i64>> {
    raw.iter()
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| anyhow!("parameter `{p}` is not key=value"))?;
            let v = match v {
                "true" => 1,
                "false" => 0,
                _ => v.parse().with_context(|| format!("parameter `{k}` is not an integer"))?,
            };
            Ok((k.to_string(), v))
        })
        .collect()
}

fn emit<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    Mismatch,
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let g = &cli.global;
    match cli.command {
        Command::Construct {
            family,
            params,
            dual,
            out,
        } => {
            let mut spec = FamilySpec::from_name(&family, &parse_params(&params)?)?;
            if dual {
                spec = FamilySpec::DualOf { of: Box::new(spec) };
            }
            let built = construct(&spec, &ConstructOptions::default())?;
            let matrix = built.code.to_matrix_text();
            let meta = json!({
                "metadata": built.metadata,
                "deleted_columns": built.deleted_columns,
            });
            match out {
                Some(path) => {
                    fs::write(&path, &matrix).with_context(|| format!("writing {}", path.display()))?;
                    let mut meta_path = path.into_os_string();
                    meta_path.push(".json");
                    fs::write(&meta_path, serde_json::to_string_pretty(&meta)?)?;
                }
                None => match g.format {
                    Format::Json => emit(&json!({ "matrix": matrix, "metadata": meta["metadata"], "deleted_columns": meta["deleted_columns"] }))?,
                    Format::Table => print!("{matrix}"),
                },
            }
            Ok(Outcome::Ok)
        }
        Command::Radius {
            file,
            metric,
            method,
            r_cap,
            budget,
        } => {
            let code = read_code(&file)?;
            let mut cfg = g.config();
            if let Some(b) = budget {
                cfg.max_distance_evals = b;
                cfg.max_syndrome_vectors = b;
                cfg.max_bfs_vectors = b;
            }
            let mut choice: MethodChoice = method.parse()?;
            if let (MethodChoice::Bfs { .. }, Some(cap)) = (choice, r_cap) {
                choice = MethodChoice::Bfs { r_cap: cap };
            }
            let report = covering_radius(&code, metric, choice, &cfg)?;
            match g.format {
                Format::Json => emit(&report)?,
                Format::Table => println!("{report}"),
            }
            Ok(Outcome::Ok)
        }
        Command::Bounds { file, metric, mattson } => {
            let code = read_code(&file)?;
            let split = match mattson {
                None => None,
                Some(s) => {
                    let (r, c) = s.split_once(':').ok_or_else(|| anyhow!("--mattson expects ROWS:COLS"))?;
                    Some((r.parse()?, c.parse()?))
                }
            };
            let report = bound_report(&code, metric, split, &g.config())?;
            match g.format {
                Format::Json => emit(&report)?,
                Format::Table => {
                    println!("sphere-covering lower bound  {}", report.sphere_covering_lb);
                    println!("ball lower bound ({metric})  {}", report.ball_lb);
                    if let Some(d) = report.delsarte_ub {
                        println!("delsarte upper bound         {d}");
                    }
                    if let Some(m) = &report.mattson_ub {
                        println!("stacking upper bound         {} = {} + {}", m.value, m.c0_radius, m.c1_radius);
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Gray { file, radius } => {
            let code = read_code(&file)?;
            if code.ring() != RingSpec::Z4 {
                bail!("the Gray map is defined for Z4 codes only");
            }
            let cfg = g.config();
            let words = code.enumerate_codewords(cfg.codeword_dim_limit)?;
            let image: Vec<ZqVector> = words.sorted().iter().map(gray_map).collect::<Result<_, _>>()?;
            let radii = if radius {
                let lee = covering_radius(&code, WeightMetric::Lee, MethodChoice::Auto, &cfg)?;
                let ham = covering_radius_of_words(RingSpec::Z2, 2 * code.len(), &image, WeightMetric::Hamming, &cfg)?;
                Some((lee, ham))
            } else {
                None
            };
            match g.format {
                Format::Json => {
                    let mut v = json!({
                        "length": 2 * code.len(),
                        "words": image.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                    });
                    if let Some((lee, ham)) = &radii {
                        v["lee_radius"] = serde_json::to_value(lee)?;
                        v["hamming_radius_of_image"] = serde_json::to_value(ham)?;
                    }
                    emit(&v)?;
                }
                Format::Table => {
                    for w in &image {
                        println!("{w}");
                    }
                    if let Some((lee, ham)) = &radii {
                        println!("{lee}");
                        println!("image: {ham}");
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Verify { ids, list, seed } => {
            if list {
                match g.format {
                    Format::Json => emit(&CHECKS)?,
                    Format::Table => {
                        for c in CHECKS {
                            println!("{:<24} {}", c.id, c.claim);
                        }
                    }
                }
                return Ok(Outcome::Ok);
            }
            let opts = VerifyOptions {
                extended: g.extended,
                config: g.config(),
                seed,
            };
            let results = verify::run_checks(&ids, &opts)?;
            match g.format {
                Format::Json => emit(&results)?,
                Format::Table => print!("{}", verify::render_table(&results)),
            }
            Ok(if verify::has_mismatch(&results) {
                Outcome::Mismatch
            } else {
                Outcome::Ok
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
