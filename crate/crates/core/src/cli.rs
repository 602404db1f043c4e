//! The `qrank` command-line front end.
//!
//! Every subcommand reads a code file (or `-` for stdin), writes to stdout or
//! `-o`, and reports errors on stderr with exit code 2. `check` exits with 1
//! when an identity fails.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::delsarte::{CodeFile, RankMetricCode, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::gf::FieldContext;
use crate::identities::check_named;
use crate::qpolymatroid::{records_json, QPolymatroid};
use crate::subspace::{count_subspaces, enumerate_subspaces, Subspace};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qrank", version, about = "Rank-metric codes, q-polymatroids and their identities")]
pub struct Cli {
    /// Largest number of codewords any single enumeration may visit.
    #[arg(long, global = true, env = "QRANK_BUDGET", default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,

    /// Worker threads for parallel enumeration.
    #[arg(long, global = true, env = "QRANK_THREADS", value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank distribution and rank weight enumerator.
    Wd { code: PathBuf },
    /// Rank generating function of the associated q-polymatroid.
    Rgf {
        code: PathBuf,
        /// Also print the hatted generating function.
        #[arg(long)]
        hat: bool,
    },
    /// The dual code under the trace product.
    Dual { code: PathBuf },
    /// The restriction C(J) to a subspace given as basis rows, e.g. "1,0;0,1".
    Restrict {
        code: PathBuf,
        #[arg(long)]
        subspace: String,
    },
    /// Rank table of the q-polymatroid.
    Polymatroid {
        code: PathBuf,
        /// Export the dual polymatroid instead.
        #[arg(long)]
        dual: bool,
    },
    /// Verify one identity, or all of them.
    Check { identity: String, code: PathBuf },
    /// A uniformly random code from a seeded generator.
    RandomCode {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        seed: u64,
    },
    /// Count or list the subspaces of F_q^n.
    Lattice {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        count_only: bool,
    },
}

/// Parses `argv` (including the program name) and runs it against the real stdio.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        // Only the first call in a process can configure the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads as usize).build_global();
    }
    match execute(&cli) {
        Ok((text, passed)) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) if passed => 0,
                Ok(()) => 1,
                Err(msg) => {
                    let _ = writeln!(err, "qrank: {msg}");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "qrank: {e}");
            2
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    let io_err = |e: io::Error| Error::Parse(format!("{}: {e}", path.display()));
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn load(path: &PathBuf) -> Result<(CodeFile, RankMetricCode)> {
    let file: CodeFile = serde_json::from_str(&read_input(path)?)?;
    let code = file.to_code()?;
    Ok((file, code))
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialise")
}

/// Output text plus whether every check passed.
fn execute(cli: &Cli) -> Result<(String, bool)> {
    let json = |default_json: bool| cli.format.map_or(default_json, |f| f == Format::Json);
    let budget = cli.budget;
    let text = match &cli.command {
        Command::Wd { code } => {
            let (_, code) = load(code)?;
            let dist = code.rank_distribution(budget)?;
            let enumerator = dist.enumerator().to_string();
            if json(true) {
                format!("{{\"rank_distribution\":{},\"enumerator\":{}}}\n", serde_json::to_string(&dist)?, json_string(&enumerator))
            } else {
                let counts: Vec<String> = dist.counts.iter().map(u64::to_string).collect();
                format!("rank distribution: {}\nenumerator: {}\n", counts.join(" "), enumerator)
            }
        }
        Command::Rgf { code, hat } => {
            let (_, code) = load(code)?;
            let p = QPolymatroid::from_code(&code)?;
            let rgf = p.rank_generating_function(false);
            let hatted = hat.then(|| p.rank_generating_function(true));
            if json(true) {
                let mut s = format!("{{\"rgf\":{},\"terms\":{}", json_string(&rgf.to_string()), records_json(&rgf).trim_end());
                if let Some(h) = &hatted {
                    s.push_str(&format!(",\"rgf_hat\":{},\"hat_terms\":{}", json_string(&h.to_string()), records_json(h).trim_end()));
                }
                s + "}\n"
            } else {
                let mut s = format!("R = {rgf}\n");
                if let Some(h) = &hatted {
                    s.push_str(&format!("R_hat = {h}\n"));
                }
                s
            }
        }
        Command::Dual { code } => {
            let (file, code) = load(code)?;
            code.dual().to_json(file.seed)
        }
        Command::Restrict { code, subspace } => {
            let (file, code) = load(code)?;
            let space = Subspace::parse(code.context(), code.n(), subspace)?;
            code.restrict(&space)?.to_json(file.seed)
        }
        Command::Polymatroid { code, dual } => {
            let (_, code) = load(code)?;
            let mut p = QPolymatroid::from_code(&code)?;
            if *dual {
                p = p.dual();
            }
            if json(true) {
                p.rank_table_json()
            } else {
                let l = p.lattice();
                l.subspaces().iter().zip(p.ranks()).map(|(s, r)| format!("{}\t[{}]\t{}\n", s.dim(), s.key(), r)).collect()
            }
        }
        Command::Check { identity, code } => {
            let (file, code) = load(code)?;
            let id = crate::identities::code_id(&code);
            let reports: Vec<_> = check_named(identity, &code, budget)?.into_iter().map(|r| r.with_id(&id, file.seed)).collect();
            let passed = reports.iter().all(|r| r.pass);
            let text = if json(false) {
                serde_json::to_string_pretty(&reports)? + "\n"
            } else {
                let failed = reports.iter().filter(|r| !r.pass).count();
                let mut s: String = reports.iter().map(|r| format!("{r}\n")).collect();
                s.push_str(&format!("{} checks, {} failed\n", reports.len(), failed));
                s
            };
            return Ok((text, passed));
        }
        Command::RandomCode { q, n, m, dim, seed } => {
            let ctx = FieldContext::of_order(*q)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            RankMetricCode::random(&ctx, *n, *m, *dim, &mut rng)?.to_json(Some(*seed))
        }
        Command::Lattice { q, n, dim, count_only } => {
            let ctx = FieldContext::of_order(*q)?;
            if let Some(d) = dim.filter(|&d| d > *n) {
                return Err(Error::InvalidDegree(d as u32));
            }
            let count = count_subspaces(*n, ctx.q(), *dim);
            if *count_only {
                format!("{count}\n")
            } else {
                let count_u64 = u64::try_from(&count).unwrap_or(u64::MAX);
                if count_u64 > budget {
                    return Err(Error::BudgetExceeded { needed: count.to_string(), budget });
                }
                let spaces = enumerate_subspaces(&ctx, *n, *dim);
                if json(true) {
                    let keys: Vec<String> = spaces.map(|s| json_string(&s.key())).collect();
                    format!("{{\"q\":{},\"n\":{},\"count\":{},\"subspaces\":[{}]}}\n", q, n, count, keys.join(","))
                } else {
                    spaces.map(|s| format!("{}\t[{}]\n", s.dim(), s.key())).collect()
                }
            }
        }
    };
    Ok((text, true))
}
