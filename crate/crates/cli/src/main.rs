//! Command-line front end: compute polynomials, specialize them at
//! permutation points, render bottom diagrams, enumerate weighted subset
//! families, and run the exhaustive verification harness.
//!
//! Exit codes: 0 on success, 1 when verification finds a mismatch, 2 on bad
//! flags or unparsable input. Stdout carries only the requested artifact
//! (deterministic bytes for fixed flags); progress and summaries go to
//! stderr. Setting GROTHKIT_CACHE_DUMP=path additionally writes the
//! polynomial cache as JSON after a run.

use std::env;
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use grothkit_core::pipedream::{bottom_diagram, hecke_subsets, hecke_sum, render_labels, render_weights};
use grothkit_core::verify::{self, VerifyMode};
use grothkit_core::{GrothCache, LaurentPoly, Permutation};

#[derive(Parser)]
#[command(
    name = "grothkit",
    version,
    about = "Exact double Grothendieck polynomials: recursion, specializations, pipe-dream sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the polynomial of a permutation
    Compute {
        /// Permutation in one-line notation ("2157634" or "2,1,5,7,6,3,4")
        w: String,
        /// Expected rank; it is an error if the permutation disagrees
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Specialize the polynomial of U at the point of V (x_i -> y_{V(i)})
    Specialize {
        u: String,
        v: String,
        /// Expected rank; it is an error if the permutations disagree
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Render the bottom diagram of a permutation
    Diagram {
        w: String,
        /// Expected rank; it is an error if the permutation disagrees
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = DiagramMode::Weights)]
        mode: DiagramMode,
    },
    /// List the subsets of V's bottom diagram evaluating to U, with their
    /// signed weighted sum
    Hecke {
        u: String,
        v: String,
        /// Expected rank; it is an error if the permutations disagree
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = HeckeFormat::Plain)]
        format: HeckeFormat,
        /// Prune enumeration using Bruhat-order monotonicity
        #[arg(long)]
        prune: bool,
    },
    /// Exhaustively check the subset-sum identity (and the recurrence,
    /// vanishing, and fixed-point identities) over all of S_n
    Verify {
        /// Rank to sweep (1..=6)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
        n: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Theorem)]
        mode: ModeArg,
        /// Worker threads (0 = all available); never changes output bytes
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Prune enumeration using Bruhat-order monotonicity
        #[arg(long)]
        prune: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Latex,
    Plain,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagramMode {
    Weights,
    Labels,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeckeFormat {
    Json,
    Plain,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Theorem,
    Lemmas,
    All,
}

impl From<ModeArg> for VerifyMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Theorem => VerifyMode::Theorem,
            ModeArg::Lemmas => VerifyMode::Lemmas,
            ModeArg::All => VerifyMode::All,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn parse_perm(s: &str, n: Option<usize>) -> Result<Permutation, String> {
    let p: Permutation = s.parse().map_err(|e| format!("{e}"))?;
    if let Some(n) = n {
        if p.n() != n {
            return Err(format!(
                "permutation {s} has rank {}, which contradicts --n {n}",
                p.n()
            ));
        }
    }
    Ok(p)
}

fn print_poly(poly: &LaurentPoly, format: Format) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string(poly).expect("polynomial serialization cannot fail")
        ),
        Format::Latex => println!("{}", poly.to_latex()),
        Format::Plain => println!("{}", poly.to_plain()),
    }
}

/// Writes the cache dump when GROTHKIT_CACHE_DUMP is set.
fn maybe_dump(cache: &GrothCache) -> Result<(), String> {
    if let Some(path) = env::var_os("GROTHKIT_CACHE_DUMP") {
        let mut payload = cache.dump_json();
        payload.push('\n');
        fs::write(&path, payload)
            .map_err(|e| format!("cannot write cache dump to {}: {e}", path.to_string_lossy()))?;
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Compute { w, n, format } => {
            let w = parse_perm(&w, n)?;
            let mut cache = GrothCache::new(w.n());
            let poly = cache.groth(&w).map_err(|e| e.to_string())?.clone();
            print_poly(&poly, format);
            maybe_dump(&cache)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Specialize { u, v, n, format } => {
            let u = parse_perm(&u, n)?;
            let v = parse_perm(&v, n)?;
            if u.n() != v.n() {
                return Err(format!("ranks differ: {u} is in S_{}, {v} is in S_{}", u.n(), v.n()));
            }
            let mut cache = GrothCache::new(u.n());
            let poly = cache.specialize(&u, &v).map_err(|e| e.to_string())?;
            print_poly(&poly, format);
            maybe_dump(&cache)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Diagram { w, n, mode } => {
            let w = parse_perm(&w, n)?;
            match mode {
                DiagramMode::Weights => {
                    let grid = render_weights(&w);
                    if !grid.is_empty() {
                        println!("{grid}");
                    }
                }
                DiagramMode::Labels => {
                    let grid = render_labels(&w);
                    if !grid.is_empty() {
                        println!("{grid}");
                    }
                }
                DiagramMode::Json => println!(
                    "{}",
                    serde_json::to_string(&bottom_diagram(&w))
                        .expect("diagram serialization cannot fail")
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Hecke {
            u,
            v,
            n,
            format,
            prune,
        } => {
            let u = parse_perm(&u, n)?;
            let v = parse_perm(&v, n)?;
            if u.n() != v.n() {
                return Err(format!("ranks differ: {u} is in S_{}, {v} is in S_{}", u.n(), v.n()));
            }
            let subsets = hecke_subsets(&u, &v, prune).map_err(|e| e.to_string())?;
            let sum = hecke_sum(&u, &v, prune).map_err(|e| e.to_string())?;
            match format {
                HeckeFormat::Json => {
                    #[derive(serde::Serialize)]
                    struct Envelope<'a> {
                        n: usize,
                        u: String,
                        v: String,
                        count: usize,
                        sum: &'a LaurentPoly,
                        diagrams: &'a [grothkit_core::Diagram],
                    }
                    let envelope = Envelope {
                        n: u.n(),
                        u: u.to_string(),
                        v: v.to_string(),
                        count: subsets.len(),
                        sum: &sum.poly,
                        diagrams: &subsets,
                    };
                    println!(
                        "{}",
                        serde_json::to_string(&envelope)
                            .expect("envelope serialization cannot fail")
                    );
                }
                HeckeFormat::Plain => {
                    println!("count: {}", subsets.len());
                    println!("sum: {}", sum.poly.to_plain());
                    for d in &subsets {
                        let cells: Vec<String> =
                            d.boxes().map(|b| format!("({},{})", b.row, b.col)).collect();
                        println!("[{}]", cells.join(", "));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            n,
            mode,
            jobs,
            prune,
        } => {
            let n = n as usize;
            let report = verify::run(n, mode.into(), jobs, prune).map_err(|e| e.to_string())?;
            println!("{}", report.to_json());
            for (phase, elapsed) in &report.elapsed {
                eprintln!("{phase}: {:.3}s", elapsed.as_secs_f64());
            }
            let mismatches: Vec<_> = report.mismatches().collect();
            eprintln!(
                "checked {} rows at rank {}: {}",
                report.rows.len(),
                report.n,
                if mismatches.is_empty() {
                    "all equal".to_string()
                } else {
                    format!("{} mismatches", mismatches.len())
                }
            );
            for r in &mismatches {
                let at_i = r.i.map(|i| format!(" i={i}")).unwrap_or_default();
                eprintln!("MISMATCH check={} u={} v={}{at_i}", r.check, r.u, r.v);
            }
            if env::var_os("GROTHKIT_CACHE_DUMP").is_some() {
                let mut cache = GrothCache::new(n);
                cache.warm_all().map_err(|e| e.to_string())?;
                maybe_dump(&cache)?;
            }
            Ok(if mismatches.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
