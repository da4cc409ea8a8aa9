//! The `prn` command line: every analysis of the library behind one
//! subcommand each, reading networks from `prn/1` documents.
//!
//! [`run`] does all the work and returns what would be printed, so the
//! binary is a thin shell and tests need no subprocess.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use prn::algebra::{self, ProbabilityCombiner};
use prn::exact::{format_rational, WithDecimal};
use prn::format::{parse_map, parse_network, parse_pbn, parse_subset, serialize_network};
use prn::linear;
use prn::markov::{power_deviation_profile, SteadyStateOptions, StochasticMatrix};
use prn::morphism::{self, render_search, Morphism, DEFAULT_SEARCH_BUDGET};
use prn::structure::{self, Decomposition, DecompositionOptions};
use prn::{dot, Prn};

/// What a command printed and how it wants the process to exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "prn", version, about = "Analyse probabilistic regulatory networks")]
struct Cli {
    /// Exit with status 1 when an analysis answers in the negative.
    #[arg(long, global = true)]
    fail_on_negative: bool,
    /// Node budget for homomorphism searches.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the transition matrix.
    Matrix { net: PathBuf },
    /// Print the stationary distribution.
    Steady {
        net: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
    /// Check a map for homomorphism conditions and report its epsilon.
    CheckHom { src: PathBuf, dst: PathBuf, map: PathBuf },
    /// List every homomorphism between two networks.
    SearchHom { src: PathBuf, dst: PathBuf },
    /// List every isomorphism between two networks.
    SearchIso { src: PathBuf, dst: PathBuf },
    /// Print the epsilon of a homomorphism.
    Epsilon { src: PathBuf, dst: PathBuf, map: PathBuf },
    /// Largest entry difference between the first N powers of two matrices.
    PowerProfile { src: PathBuf, dst: PathBuf, n: u32 },
    /// Print the sum of two networks.
    Sum { a: PathBuf, b: PathBuf },
    /// Print the product of two networks.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "multiply")]
        combiner: String,
    },
    /// Print the restriction of a network to an invariant subset.
    Restrict { net: PathBuf, subset: String },
    /// List every invariant subset.
    Invariants {
        net: PathBuf,
        #[arg(long, default_value_t = structure::DEFAULT_DECOMPOSITION_CAP)]
        cap: usize,
    },
    /// List the irreducible subnetworks.
    Irreducible { net: PathBuf },
    /// List the projections onto a subset.
    Projections { net: PathBuf, subset: String },
    /// Compare a network with the product of two of its subnetworks.
    Decompose { net: PathBuf, first: String, second: String },
    /// Expand a PBN document into a network document.
    ExpandPbn { pbn: PathBuf },
    /// Group the linear maps of Z_p^n by characteristic polynomial.
    LinearEnum {
        p: u32,
        n: usize,
        /// Also split the maps into isomorphism classes of one-function networks.
        #[arg(long)]
        classes: bool,
        #[arg(long, default_value_t = 1 << 16)]
        cap: u128,
    },
    /// Write the state space as a DOT digraph.
    ExportDot { net: PathBuf },
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("prn")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok((stdout, negative)) => {
            let code = if negative && cli.fail_on_negative { 1 } else { 0 };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e:#}\n") },
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<Arc<Prn>> {
    let text = read(path)?;
    let prn = parse_network(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(Arc::new(prn))
}

fn load_map(path: &Path, src: &Arc<Prn>, dst: &Arc<Prn>) -> Result<Morphism> {
    let text = read(path)?;
    parse_map(&text, src.clone(), dst.clone()).with_context(|| format!("in {}", path.display()))
}

fn subset(prn: &Prn, text: &str) -> Result<BTreeSet<usize>> {
    parse_subset(prn.space(), text).with_context(|| format!("subset {text:?}"))
}

/// Runs a parsed command; the flag is true for a negative answer.
fn execute(cli: &Cli) -> Result<(String, bool)> {
    let budget = cli.budget;
    let mut out = String::new();
    let mut negative = false;
    match &cli.command {
        Command::Matrix { net } => out = StochasticMatrix::of(&*load(net)?).to_string(),
        Command::Steady { net, tolerance } => {
            let t = StochasticMatrix::of(&*load(net)?);
            let options = SteadyStateOptions { tolerance: *tolerance, ..SteadyStateOptions::default() };
            out = t.steady_state(&options)?.to_string();
        }
        Command::CheckHom { src, dst, map } => {
            let (a, b) = (load(src)?, load(dst)?);
            let phi = load_map(map, &a, &b)?;
            let report = phi.check_homomorphism();
            negative = !report.is_homomorphism;
            out = report.render(&phi);
        }
        Command::SearchHom { src, dst } => {
            let found = morphism::enumerate_homomorphisms(&load(src)?, &load(dst)?, budget)?;
            negative = found.is_empty();
            out = render_search(&found);
        }
        Command::SearchIso { src, dst } => {
            let found = morphism::enumerate_isomorphisms(&load(src)?, &load(dst)?, budget)?;
            negative = found.is_empty();
            out = render_search(&found);
        }
        Command::Epsilon { src, dst, map } => {
            let (a, b) = (load(src)?, load(dst)?);
            let eps = load_map(map, &a, &b)?.epsilon()?;
            writeln!(out, "{}", WithDecimal(&eps))?;
        }
        Command::PowerProfile { src, dst, n } => {
            let a = StochasticMatrix::of(&*load(src)?);
            let b = StochasticMatrix::of(&*load(dst)?);
            for (k, d) in power_deviation_profile(&a, &b, *n)?.iter().enumerate() {
                writeln!(out, "{} {}", k + 1, format_rational(d))?;
            }
        }
        Command::Sum { a, b } => out = serialize_network(&algebra::sum(&*load(a)?, &*load(b)?)?),
        Command::Product { a, b, combiner } => {
            let combiner = ProbabilityCombiner::by_name(combiner)?;
            out = serialize_network(&algebra::product(&*load(a)?, &*load(b)?, &combiner)?);
        }
        Command::Restrict { net, subset: text } => {
            let prn = load(net)?;
            let s = subset(&prn, text)?;
            out = serialize_network(&algebra::restrict(&prn, &s)?);
        }
        Command::Invariants { net, cap } => {
            let prn = load(net)?;
            let lattice = structure::all_invariant_subnetworks(&prn, *cap)?;
            for set in &lattice.closed_sets {
                let mark = if lattice.minimal.contains(set) { "  (irreducible)" } else { "" };
                writeln!(out, "{}{mark}", prn.space().describe(set))?;
            }
        }
        Command::Irreducible { net } => {
            let prn = load(net)?;
            let parts = structure::irreducible_subnetworks(&prn);
            negative = parts.len() == 1 && parts[0].len() == prn.state_count();
            for set in &parts {
                writeln!(out, "{}", prn.space().describe(set))?;
            }
        }
        Command::Projections { net, subset: text } => {
            let prn = load(net)?;
            let s = subset(&prn, text)?;
            let search = structure::projections_onto(&prn, &s)?;
            if let Some(escapes) = &search.not_invariant {
                negative = true;
                writeln!(out, "{} is not invariant", prn.space().describe(&s))?;
                for e in escapes {
                    writeln!(out, "  {e}")?;
                }
            } else {
                negative = search.projections.is_empty();
                out.push_str(&render_search(&search.projections));
            }
        }
        Command::Decompose { net, first, second } => {
            let prn = load(net)?;
            let (y1, y2) = (subset(&prn, first)?, subset(&prn, second)?);
            let report = structure::check_product_decomposition(
                &prn,
                &y1,
                &y2,
                DecompositionOptions { budget, ..Default::default() },
            )?;
            negative = matches!(report.outcome, Decomposition::Irreducible | Decomposition::NotFound);
            out = report.render();
        }
        Command::ExpandPbn { pbn } => {
            let text = read(pbn)?;
            let parsed = parse_pbn(&text).with_context(|| format!("in {}", pbn.display()))?;
            out = serialize_network(&parsed.expand()?);
        }
        Command::LinearEnum { p, n, classes, cap } => {
            let groups = linear::classify_by_characteristic_polynomial(*p, *n, *cap)?;
            for (poly, matrices) in &groups {
                writeln!(out, "{poly}: {} matrices", matrices.len())?;
                for m in matrices {
                    writeln!(out, "  {m}")?;
                }
            }
            if *classes {
                out.push_str(&linear_classes(*p, *n, *cap, budget)?);
            }
        }
        Command::ExportDot { net } => out = dot::export_dot(&*load(net)?),
    }
    Ok((out, negative))
}

fn linear_classes(p: u32, n: usize, cap: u128, budget: usize) -> Result<String> {
    let matrices = linear::enumerate_matrices(p, n, cap)?;
    let networks = matrices
        .iter()
        .map(|m| Ok(Arc::new(linear::linear_prn(std::slice::from_ref(m), vec![prn::Probability::one()])?)))
        .collect::<Result<Vec<_>>>()?;
    let classes = morphism::isomorphism_classes(&networks, budget)?;
    let mut out = format!("{} isomorphism classes\n", classes.len());
    for class in &classes {
        let members: Vec<String> = class.iter().map(|&i| matrices[i].to_string()).collect();
        writeln!(out, "  {}", members.join("  "))?;
    }
    if classes.is_empty() {
        bail!("no matrices to classify");
    }
    Ok(out)
}
