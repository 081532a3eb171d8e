//! One function per subcommand; each returns the report to print or a
//! domain error for the caller to render on stderr.

use std::fs;
use std::path::{Path, PathBuf};

use profinite_core::cantor::{self, Sweep, TreePath};
use profinite_core::filter::{hausdorff_level, FilterChain};
use profinite_core::lattice::Lattice;
use profinite_core::mekler::{self, MeklerContext};
use profinite_core::slfam::{self, PrimeSet};

use crate::formats;
use crate::parse;
use crate::report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("io: {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("format: {path}: {source}")]
    Format { path: PathBuf, source: formats::FormatError },
    #[error("parse: {0}")]
    Word(#[from] parse::SyntaxError),
    #[error("parse: {0}")]
    Element(#[from] parse::ElementParseError),
    #[error("lattice: {0}")]
    Lattice(#[from] profinite_core::lattice::LatticeError),
    #[error("filter: {0}")]
    Filter(#[from] profinite_core::filter::FilterError),
    #[error("mekler: {0}")]
    Mekler(#[from] mekler::MeklerError),
    #[error("cantor: {0}")]
    Cantor(#[from] cantor::CantorError),
    #[error("slfam: {0}")]
    Slfam(#[from] slfam::SlError),
    #[error("group: {0}")]
    Group(#[from] profinite_core::GroupError),
    #[error("digits: {0:?} is not a comma-separated list of numbers")]
    BadDigits(String),
    #[error("primes: {0:?} is not a comma-separated list of numbers")]
    BadPrimes(String),
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_filter(path: &Path) -> Result<FilterChain, CliError> {
    formats::read_filter(&read_to_string(path)?)
        .map_err(|source| CliError::Format { path: path.to_path_buf(), source })
}

fn load_graph(path: &Path) -> Result<mekler::Graph, CliError> {
    formats::read_graph(&read_to_string(path)?)
        .map_err(|source| CliError::Format { path: path.to_path_buf(), source })
}

fn load_group(path: &Path) -> Result<profinite_core::FiniteGroup, CliError> {
    formats::read_group(&read_to_string(path)?)
        .map_err(|source| CliError::Format { path: path.to_path_buf(), source })
}

fn parse_list(text: &str) -> Option<Vec<u32>> {
    if text.trim().is_empty() {
        return Some(Vec::new());
    }
    text.split(',').map(|tok| tok.trim().parse::<u32>().ok()).collect()
}

fn parse_digits(text: &str) -> Result<Vec<usize>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|tok| tok.trim().parse::<usize>().ok())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| CliError::BadDigits(text.to_string()))
}

fn parse_primes(text: &str) -> Result<PrimeSet, CliError> {
    let list = parse_list(text).ok_or_else(|| CliError::BadPrimes(text.to_string()))?;
    Ok(PrimeSet::new(list)?)
}

// ---- lattice ----

pub fn lattice_enum(report: &mut Report, index: usize) -> Result<(), CliError> {
    let mut lat = Lattice::new();
    let element = lat.enumerate(index);
    report.block(&formats::write_lattice_element(&element));
    report.result(format!(
        "index={index} support={} target_order={}",
        element.support(),
        element.target().order()
    ));
    Ok(())
}

pub fn lattice_leq(report: &mut Report, i: usize, j: usize) -> Result<(), CliError> {
    let mut lat = Lattice::new();
    let a = lat.enumerate(i);
    let b = lat.enumerate(j);
    report.result(format!("leq={}", a.leq(&b)));
    Ok(())
}

pub fn lattice_meet(report: &mut Report, i: usize, j: usize) -> Result<(), CliError> {
    let mut lat = Lattice::new();
    let m = lat.enumerate(i).meet(&lat.enumerate(j))?;
    report.block(&formats::write_lattice_element(&m));
    report.result(format!("support={} target_order={}", m.support(), m.target().order()));
    Ok(())
}

pub fn lattice_join(report: &mut Report, i: usize, j: usize) -> Result<(), CliError> {
    let mut lat = Lattice::new();
    let m = lat.enumerate(i).join(&lat.enumerate(j))?;
    report.block(&formats::write_lattice_element(&m));
    report.result(format!("support={} target_order={}", m.support(), m.target().order()));
    Ok(())
}

pub fn lattice_delta(
    report: &mut Report,
    g: &str,
    h: &str,
    precision: usize,
) -> Result<(), CliError> {
    let g = parse::parse_word(g)?;
    let h = parse::parse_word(h)?;
    let mut lat = Lattice::new();
    let outcome = lat.delta(&g, &h, precision)?;
    report.line(format!("lhs: {g}"));
    report.line(format!("rhs: {h}"));
    report.result(format!("delta={outcome}"));
    Ok(())
}

// ---- filter ----

pub fn filter_quotient(report: &mut Report, path: &Path, level: usize) -> Result<(), CliError> {
    let mut chain = load_filter(path)?;
    let quotient = chain.quotient_at(level)?;
    report.block(&formats::write_group(&quotient));
    report.result(format!("level={level} order={}", quotient.order()));
    Ok(())
}

pub fn filter_principal(report: &mut Report, path: &Path, depth: usize) -> Result<(), CliError> {
    let mut chain = load_filter(path)?;
    let principal = chain.is_principal_up_to(depth)?;
    report.result(format!("principal={principal} depth={depth}"));
    Ok(())
}

pub fn filter_hausdorff(
    report: &mut Report,
    path_r: &Path,
    path_s: &Path,
    level: usize,
) -> Result<(), CliError> {
    let mut r = load_filter(path_r)?;
    let mut s = load_filter(path_s)?;
    let mut lat = Lattice::new();
    let agree = hausdorff_level(&mut lat, &mut r, &mut s, level)?;
    report.result(format!("level={level} agree={agree}"));
    Ok(())
}

// ---- mekler ----

fn mekler_context(graph_path: &Path, p: u32) -> Result<MeklerContext, CliError> {
    Ok(MeklerContext::new(load_graph(graph_path)?, p)?)
}

pub fn mekler_nice(report: &mut Report, graph_path: &Path) -> Result<(), CliError> {
    let graph = load_graph(graph_path)?;
    match graph.niceness() {
        Ok(()) => report.result("nice=true"),
        Err(witness) => report.result(format!("nice=false witness={witness}")),
    }
    Ok(())
}

pub fn mekler_mul(
    report: &mut Report,
    a: &str,
    b: &str,
    graph_path: &Path,
    p: u32,
) -> Result<(), CliError> {
    let ctx = mekler_context(graph_path, p)?;
    let u = parse::parse_element(a, &ctx)?;
    let w = parse::parse_element(b, &ctx)?;
    let product = ctx.multiply(&u, &w)?;
    report.result(format!("product={}", parse::render_element(&ctx, &product)));
    Ok(())
}

pub fn mekler_inv(
    report: &mut Report,
    a: &str,
    graph_path: &Path,
    p: u32,
) -> Result<(), CliError> {
    let ctx = mekler_context(graph_path, p)?;
    let u = parse::parse_element(a, &ctx)?;
    let inverse = ctx.inverse(&u)?;
    report.result(format!("inverse={}", parse::render_element(&ctx, &inverse)));
    Ok(())
}

pub fn mekler_comm(
    report: &mut Report,
    a: &str,
    b: &str,
    graph_path: &Path,
    p: u32,
) -> Result<(), CliError> {
    let ctx = mekler_context(graph_path, p)?;
    let u = parse::parse_element(a, &ctx)?;
    let w = parse::parse_element(b, &ctx)?;
    let formula = ctx.commutator_formula(&u, &w)?;
    let oracle = ctx.commutator_oracle(&u, &w)?;
    report.line(format!("oracle_agrees: {}", formula == oracle));
    report.result(format!("commutator={}", parse::render_element(&ctx, &formula)));
    Ok(())
}

pub fn mekler_gamma2(report: &mut Report, graph_path: &Path, p: u32) -> Result<(), CliError> {
    let graph = load_graph(graph_path)?;
    let outcome = mekler::gamma2(&graph, p)?;
    report.line(format!("classes: {}", outcome.class_count));
    report.block(&formats::write_graph(&outcome.graph));
    report.result(format!("isomorphic={}", outcome.graph == graph));
    Ok(())
}

pub fn mekler_classify(
    report: &mut Report,
    element: &str,
    graph_path: &Path,
    p: u32,
) -> Result<(), CliError> {
    let ctx = mekler_context(graph_path, p)?;
    let v = parse::parse_element(element, &ctx)?;
    let tag = ctx.case_classify(&v)?;
    let size = ctx.class_size(&v)?;
    report.result(format!("{tag} class_size={size}"));
    Ok(())
}

// ---- cantor ----

fn build_tree_from(path: &Path, depth: usize) -> Result<cantor::CosetTree, CliError> {
    let mut chain = load_filter(path)?;
    Ok(cantor::build_tree(&mut chain, depth)?)
}

pub fn cantor_tree(report: &mut Report, path: &Path, depth: usize) -> Result<(), CliError> {
    let tree = build_tree_from(path, depth)?;
    report.block(&formats::write_tree_dump(&tree));
    let branching: Vec<String> =
        tree.branching().iter().map(|k| k.to_string()).collect();
    report.result(format!("depth={depth} branching={}", branching.join(",")));
    Ok(())
}

pub fn cantor_encode(
    report: &mut Report,
    digits: &str,
    path: &Path,
    depth: usize,
) -> Result<(), CliError> {
    let digits = parse_digits(digits)?;
    let tree = build_tree_from(path, depth)?;
    let bits = tree.encode(&TreePath::new(digits))?;
    let rendered: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
    report.result(format!("bits={rendered}"));
    Ok(())
}

pub fn cantor_rho(
    report: &mut Report,
    z: &str,
    w: &str,
    level: usize,
    path: &Path,
    depth: usize,
) -> Result<(), CliError> {
    let z = TreePath::new(parse_digits(z)?);
    let w = TreePath::new(parse_digits(w)?);
    let tree = build_tree_from(path, depth)?;
    let y = tree.rho(&z, &w, level)?;
    let rendered: Vec<String> = y.digits().iter().map(|d| d.to_string()).collect();
    report.result(format!("digits={}", rendered.join(",")));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn cantor_verify(
    report: &mut Report,
    level: usize,
    exhaustive: bool,
    samples: u64,
    path: &Path,
    depth: usize,
) -> Result<(), CliError> {
    let tree = build_tree_from(path, depth)?;
    let sweep = if exhaustive { Sweep::Exhaustive } else { Sweep::Auto { samples } };
    let outcome = cantor::verify_difference_axioms_with(&tree, level, sweep)?;
    report.line(format!("quotient_order: {}", outcome.quotient_order));
    report.line(format!("identity_checks: {}", outcome.identity_checks));
    report.line(format!("associativity_checks: {}", outcome.associativity_checks));
    report.result(format!(
        "level={level} violations={} exhaustive={}",
        outcome.violations, outcome.exhaustive
    ));
    Ok(())
}

// ---- slfam ----

pub fn slfam_build(
    report: &mut Report,
    primes: &str,
    level: u32,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let set = parse_primes(primes)?;
    let group = slfam::gp_level(&set, level)?;
    let text = formats::write_group(&group);
    match out {
        Some(path) => {
            // Full content is materialized before any write; the rename
            // keeps partially written files from ever appearing.
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, &text)
                .and_then(|()| fs::rename(&tmp, path))
                .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
            report.line(format!("written: {}", path.display()));
        }
        None => report.block(&text),
    }
    report.result(format!("primes={set} level={level} order={}", group.order()));
    Ok(())
}

pub fn slfam_detect(
    report: &mut Report,
    path: &Path,
    candidates: &str,
) -> Result<(), CliError> {
    let group = load_group(path)?;
    let candidates = parse_primes(candidates)?;
    let detected = slfam::primes_detected(&group, &candidates)?;
    report.result(format!("primes={detected}"));
    Ok(())
}

pub fn slfam_distinguish(report: &mut Report, p: &str, q: &str) -> Result<(), CliError> {
    let p = parse_primes(p)?;
    let q = parse_primes(q)?;
    let outcome = slfam::distinguishing_level(&p, &q)?;
    report.result(format!("distinguish={outcome}"));
    Ok(())
}

pub fn slfam_ut3(report: &mut Report, p: u32) -> Result<(), CliError> {
    let group = slfam::ut3(p)?;
    report.block(&formats::write_group(&group));
    report.result(format!("order={} exponent={}", group.order(), group.exponent()));
    Ok(())
}
