use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use schurdet::coefficients::{expand_with, g_coefficient_with};
use schurdet::oracle::schur_expansion_bruteforce;
use schurdet::records::{expansion_records, write_records, Format, ResultRecord};
use schurdet::shard::{merge, read_shard, run_shard, write_shard};
use schurdet::{enumerate_admissible, is_admissible, selftest, Engine, EngineConfig, Error, Partition};

/// Schur coefficients of even powers of the Vandermonde determinant.
#[derive(Parser)]
#[command(name = "schurdet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Params {
    /// Number of variables.
    #[arg(long)]
    n: usize,
    /// Half the exponent of the Vandermonde determinant.
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct Output {
    /// Record format: jsonl or csv.
    #[arg(long, default_value = "jsonl")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct Engineering {
    /// Worker threads (defaults to the available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Disable block factorization inside the recursion.
    #[arg(long)]
    no_factorize: bool,
}

impl Engineering {
    fn jobs(&self) -> usize {
        self.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
    }

    fn config(&self) -> EngineConfig {
        EngineConfig { factorize: !self.no_factorize, ..EngineConfig::from_env() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute a single coefficient g_λ.
    Coeff {
        #[command(flatten)]
        params: Params,
        /// Comma-separated weakly decreasing parts, e.g. 4,1,1.
        #[arg(long, value_parser = parse_lambda)]
        lambda: Partition,
        #[arg(long, default_value = "jsonl")]
        format: Format,
        #[arg(long)]
        no_factorize: bool,
    },
    /// Compute every admissible coefficient.
    Expand {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        eng: Engineering,
        #[command(flatten)]
        output: Output,
    },
    /// List the admissible partitions in reverse-lexicographic order.
    Admissible {
        #[command(flatten)]
        params: Params,
        /// Print only the number of partitions.
        #[arg(long)]
        count_only: bool,
    },
    /// Count admissible partitions whose coefficient is zero.
    Vanishing {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        eng: Engineering,
    },
    /// Compare the expansion with brute-force polynomial expansion.
    Verify {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        eng: Engineering,
    },
    /// Compute one residue class of the enumeration.
    Shard {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        shards: usize,
        #[arg(long)]
        index: usize,
        #[command(flatten)]
        eng: Engineering,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge shard files into one ordered result file.
    Merge {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the built-in consistency checks.
    Selftest,
}

fn parse_lambda(s: &str) -> Result<Partition, String> {
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| format!("bad part {p:?} in {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    Partition::new(parts).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Coeff { params: Params { n, k }, lambda, format, no_factorize } => {
            if lambda.length() > n {
                return Err(Failure::Usage(format!("{lambda} has more than {n} nonzero parts")));
            }
            let lambda = lambda.padded(n)?;
            if !is_admissible(&lambda, n, k)? {
                eprintln!("warning: {lambda} is outside the admissible window for n={n}, k={k}; the coefficient is 0");
            }
            let mut engine = Engine::new(EngineConfig { factorize: !no_factorize, ..EngineConfig::from_env() });
            let coeff = g_coefficient_with(&mut engine, &lambda, n, k)?;
            let record = ResultRecord { n, k, lambda: lambda.parts().to_vec(), coeff };
            write_records(sink(None)?, &[record], format)?;
        }
        Command::Expand { params: Params { n, k }, eng, output } => {
            let e = expand_with(n, k, eng.jobs(), eng.config())?;
            write_records(sink(output.out.as_deref())?, &expansion_records(&e), output.format)?;
        }
        Command::Admissible { params: Params { n, k }, count_only } => {
            let iter = enumerate_admissible(n, k)?;
            let mut w = sink(None)?;
            if count_only {
                writeln!(w, "{}", iter.count())?;
            } else {
                for p in iter {
                    let parts: Vec<String> = p.parts().iter().map(i64::to_string).collect();
                    writeln!(w, "{}", parts.join(","))?;
                }
            }
            w.flush()?;
        }
        Command::Vanishing { params: Params { n, k }, eng } => {
            let e = expand_with(n, k, eng.jobs(), eng.config())?;
            println!("n={n} k={k} admissible={} vanishing={}", e.len(), e.vanishing());
        }
        Command::Verify { params: Params { n, k }, eng } => {
            let oracle = schur_expansion_bruteforce(n, k)?;
            let e = expand_with(n, k, eng.jobs(), eng.config())?;
            if let Some((lambda, got, want)) = e.first_mismatch(&oracle) {
                let show = |c: Option<schurdet::Coefficient>| c.map_or("absent".to_string(), |c| c.to_string());
                return Err(Failure::Check(format!(
                    "mismatch at {lambda}: engine {}, oracle {}",
                    show(got),
                    show(want)
                )));
            }
            println!("ok: {} coefficients match for n={n} k={k}", e.len());
        }
        Command::Shard { params: Params { n, k }, shards, index, eng, out } => {
            let shard = run_shard(n, k, shards, index, eng.jobs(), eng.config())?;
            write_shard(sink(out.as_deref())?, &shard)?;
        }
        Command::Merge { files, output } => {
            let shards = files
                .iter()
                .map(|f| {
                    let file = File::open(f).map_err(|e| Failure::Usage(format!("{}: {e}", f.display())))?;
                    read_shard(BufReader::new(file)).map_err(|e| Failure::Usage(format!("{}: {e}", f.display())))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let records = match merge(&shards) {
                Ok(r) => r,
                Err(e @ Error::Incomplete { .. }) => {
                    let Error::Incomplete { missing, duplicated, .. } = &e else { unreachable!() };
                    let mut msg = e.to_string();
                    for m in missing {
                        msg.push_str(&format!("\n  missing {m:?}"));
                    }
                    for d in duplicated {
                        msg.push_str(&format!("\n  duplicated {d:?}"));
                    }
                    return Err(Failure::Check(msg));
                }
                Err(e) => return Err(Failure::Check(e.to_string())),
            };
            write_records(sink(output.out.as_deref())?, &records, output.format)?;
        }
        Command::Selftest => {
            let checks = selftest::run();
            let mut failed = 0;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                failed += usize::from(!c.passed);
            }
            if failed > 0 {
                return Err(Failure::Check(format!("{failed} of {} checks failed", checks.len())));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
