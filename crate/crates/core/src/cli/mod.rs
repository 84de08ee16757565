//! The `bratteli` command line: read a diagram file, run one computation,
//! print a deterministic table.
//!
//! Exit codes: 0 on success, 1 when the input violates a mathematical
//! invariant (one diagnostic line names it), 2 when the input cannot be
//! parsed.

mod table;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::diagram::{enumerate_paths, tail_related, validate_diagram, BratteliDiagram, FinitePath};
use crate::fdcstar::{extract_transition, verify_expectation, ModelExpectation, TOLERANCE};
use crate::harmonic::{ergodic_components, harmonic_from_terminal};
use crate::io::{parse_rational_map, terminal_values, top_level_masses, DiagramFile, IoError};
use crate::rational::{binomial, parse_rational, ratio, Rational};
use crate::skew::{pascal_diagram, skew_product, SkewError};
use crate::walk::{check_q_measure, CylinderTable, QCheck};

pub use table::{Cell, Format, Table};

/// Largest depth `pascal` enumerates (2^depth rows).
pub const PASCAL_MAX_DEPTH: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "bratteli", version, about = "Exact random walks on Bratteli diagrams")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the diagram invariants.
    Validate { file: PathBuf },
    /// Markov measure of every cylinder of one length.
    Measure {
        file: PathBuf,
        /// Path length (defaults to the diagram depth).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Cotransition probability of every edge.
    Cotransition { file: PathBuf },
    /// Distributions of the walk at every level.
    Distributions { file: PathBuf },
    /// Radon–Nikodym cocycle D(a, b) of two tail-related rooted paths.
    Rn {
        file: PathBuf,
        /// Comma-separated edge ids.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Harmonic sequence with the given terminal values.
    Harmonic {
        file: PathBuf,
        /// JSON object from last-level vertex ids to rationals.
        #[arg(long)]
        terminal: PathBuf,
    },
    /// Ergodic components of the Markov measure.
    Decompose { file: PathBuf },
    /// Whether a cylinder measure is a q-measure for the walk's cotransition.
    Qcheck {
        file: PathBuf,
        /// JSON object from full-depth path labels to masses.
        #[arg(long)]
        measure: PathBuf,
    },
    /// Model conditional expectation of an inclusion graph, with its axioms
    /// checked.
    Expect {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Recover the transition probability from the model expectation.
    Extractp {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Pascal triangle checks: closed-form cotransition, q(path) = 1/C(n,k),
    /// D = 1 on tail-related pairs.
    Pascal {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        t: String,
    },
    /// Skew product by the "rho" potential from an initial window.
    Skew {
        file: PathBuf,
        /// Comma-separated group elements ("1;-2" for Z^2, "3/2" for Q+*).
        #[arg(long = "window", alias = "rho-window")]
        window: String,
    },
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Domain { message: String, invariant: String },
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Parse(m) => CliError::Parse(m),
            other => CliError::Domain {
                invariant: other.invariant().to_string(),
                message: other.to_string(),
            },
        }
    }
}

fn domain(message: impl Into<String>, invariant: impl Into<String>) -> CliError {
    CliError::Domain {
        message: message.into(),
        invariant: invariant.into(),
    }
}

macro_rules! from_domain {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                domain(e.to_string(), e.invariant())
            }
        }
    )*};
}

from_domain!(
    crate::diagram::DiagramError,
    crate::walk::WalkError,
    crate::harmonic::HarmonicError,
    crate::fdcstar::FdError,
    SkewError
);

/// A table plus, when a verification failed, the diagnostic to report.
struct Outcome {
    table: Table,
    failure: Option<CliError>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome { table, failure: None }
    }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.table.render(cli.format).as_bytes());
            match outcome.failure {
                None => 0,
                Some(f) => report(f, err),
            }
        }
        Err(e) => report(e, err),
    }
}

fn report(e: CliError, err: &mut dyn Write) -> i32 {
    match e {
        CliError::Parse(m) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        CliError::Domain { message, invariant } => {
            let _ = writeln!(err, "error: {message} (violated: {invariant})");
            1
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<DiagramFile, CliError> {
    Ok(DiagramFile::parse(&read(path)?)?)
}

fn parse_path(d: &BratteliDiagram, text: &str) -> Result<FinitePath, CliError> {
    let ids: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if ids.is_empty() {
        return Err(CliError::Parse(format!("empty path {text:?}")));
    }
    d.path_from_ids(0, &ids)
        .map_err(|e| CliError::Parse(format!("path {text:?}: {e}")))
}

fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { file } => validate(file),
        Command::Measure { file, depth } => measure(file, *depth).map(Into::into),
        Command::Cotransition { file } => cotransition(file).map(Into::into),
        Command::Distributions { file } => distributions(file).map(Into::into),
        Command::Rn { file, a, b } => rn(file, a, b).map(Into::into),
        Command::Harmonic { file, terminal } => harmonic(file, terminal).map(Into::into),
        Command::Decompose { file } => decompose(file).map(Into::into),
        Command::Qcheck { file, measure } => qcheck(file, measure),
        Command::Expect { graph } => expect(graph),
        Command::Extractp { graph } => extractp(graph),
        Command::Pascal { depth, t } => pascal(*depth, t),
        Command::Skew { file, window } => skew(file, window),
    }
}

fn validate(file: &Path) -> Result<Outcome, CliError> {
    let d = load(file)?.diagram()?;
    let violations = validate_diagram(&d);
    let mut table = Table::new(&["level", "item", "rule"]);
    for v in &violations {
        table.row(vec![v.level.into(), v.item.clone().into(), v.rule.into()]);
    }
    let failure =
        (!violations.is_empty()).then(|| domain(format!("{} violation(s)", violations.len()), "valid diagram"));
    Ok(Outcome { table, failure })
}

fn measure(file: &Path, depth: Option<usize>) -> Result<Table, CliError> {
    let walk = load(file)?.walk()?;
    let d = walk.diagram();
    let n = depth.unwrap_or(d.depth());
    if n > d.depth() {
        return Err(domain(
            format!("depth {n} exceeds diagram depth {}", d.depth()),
            "level in range",
        ));
    }
    let mut table = Table::new(&["level", "path", "value"]);
    for a in enumerate_paths(d, 0, n)? {
        table.row(vec![
            n.into(),
            d.path_label(&a).into(),
            walk.cylinder_measure(&a)?.into(),
        ]);
    }
    Ok(table)
}

fn cotransition(file: &Path) -> Result<Table, CliError> {
    let walk = load(file)?.walk()?;
    let d = walk.diagram();
    let mut table = Table::new(&["level", "edge", "value"]);
    for n in 1..=d.depth() {
        let floor = d.level(n);
        for e in 0..floor.edge_count() {
            table.row(vec![
                n.into(),
                floor.edge_id(e).into(),
                walk.cotransition().get(n, e).into(),
            ]);
        }
    }
    Ok(table)
}

fn distributions(file: &Path) -> Result<Table, CliError> {
    let walk = load(file)?.walk()?;
    let d = walk.diagram();
    let mut table = Table::new(&["level", "vertex", "value"]);
    for n in 0..=d.depth() {
        for (v, x) in walk.distribution(n).iter().enumerate() {
            table.row(vec![n.into(), d.vertex_id(n, v).into(), x.into()]);
        }
    }
    Ok(table)
}

fn rn(file: &Path, a: &str, b: &str) -> Result<Table, CliError> {
    let walk = load(file)?.walk()?;
    let d = walk.diagram();
    let (pa, pb) = (parse_path(d, a)?, parse_path(d, b)?);
    let value = walk.radon_nikodym(&pa, &pb)?;
    let mut table = Table::new(&["a", "b", "value"]);
    table.row(vec![d.path_label(&pa).into(), d.path_label(&pb).into(), value.into()]);
    Ok(table)
}

fn harmonic(file: &Path, terminal: &Path) -> Result<Table, CliError> {
    let walk = load(file)?.walk()?;
    let d = walk.diagram();
    let entries = parse_rational_map(&read(terminal)?)?;
    let h = harmonic_from_terminal(&walk, &terminal_values(d, &entries)?)?;
    let mut table = Table::new(&["level", "vertex", "value"]);
    for (n, level) in h.levels().iter().enumerate() {
        for (v, x) in level.iter().enumerate() {
            table.row(vec![n.into(), d.vertex_id(n, v).into(), x.into()]);
        }
    }
    Ok(table)
}

fn decompose(file: &Path) -> Result<Table, CliError> {
    let walk = load(file)?.walk()?;
    let d = walk.diagram();
    let mut table = Table::new(&["component", "weight", "terminal"]);
    for (i, c) in ergodic_components(&walk).iter().enumerate() {
        table.row(vec![
            i.into(),
            (&c.weight).into(),
            d.vertex_id(d.depth(), c.terminal).into(),
        ]);
    }
    Ok(table)
}

fn qcheck(file: &Path, measure: &Path) -> Result<Outcome, CliError> {
    let walk = load(file)?.walk()?;
    let d = walk.diagram();
    let entries = parse_rational_map(&read(measure)?)?;
    let top = top_level_masses(d, &entries)?;
    let table_m = CylinderTable::from_top_level(d.clone(), d.depth(), top)?;
    let verdict = check_q_measure(d, walk.cotransition(), &table_m, d.depth())?;
    let mut table = Table::new(&["result", "path", "mass", "expected"]);
    let failure = match verdict {
        QCheck::Holds => {
            table.row(vec!["holds".into(), "".into(), "".into(), "".into()]);
            None
        }
        QCheck::Fails { path, mass, expected } => {
            let label = d.path_label(&path);
            table.row(vec!["fails".into(), label.clone().into(), mass.into(), expected.into()]);
            Some(domain(
                format!("cylinder {label} breaks the q-measure identity"),
                "q-measure",
            ))
        }
    };
    Ok(Outcome { table, failure })
}

fn load_expectation(path: &Path) -> Result<ModelExpectation, CliError> {
    let (graph, p) = load(path)?.inclusion_graph()?;
    let p = p.ok_or_else(|| CliError::Parse("every edge needs a \"p\"".into()))?;
    Ok(ModelExpectation::new(Arc::new(graph), p)?)
}

fn expect(path: &Path) -> Result<Outcome, CliError> {
    let me = load_expectation(path)?;
    let report = verify_expectation(&me.ambient_map(), &me.subalgebra_basis(), TOLERANCE);
    let mut table = Table::new(&["check", "result", "detail"]);
    for c in &report.checks {
        table.row(vec![
            c.name.into(),
            if c.passed { "ok" } else { "FAIL" }.into(),
            c.detail.clone().into(),
        ]);
    }
    let failure = (!report.all_pass()).then(|| {
        domain(
            format!("failed: {}", report.failures().join(", ")),
            "conditional expectation axioms",
        )
    });
    Ok(Outcome { table, failure })
}

fn extractp(path: &Path) -> Result<Outcome, CliError> {
    let me = load_expectation(path)?;
    let recovered = extract_transition(&me.linear_map(), me.graph())?;
    let mut table = Table::new(&["edge", "p"]);
    for (id, x) in me.graph().edge_ids().iter().zip(&recovered) {
        table.row(vec![id.clone().into(), x.into()]);
    }
    let ok = recovered == me.p();
    table.note(format!("round trip: {}", if ok { "OK" } else { "FAIL" }));
    let failure = (!ok).then(|| domain("recovered p differs from the input", "Q(ε(c)) = p(c)e(s(c))"));
    Ok(Outcome { table, failure })
}

fn pascal(depth: usize, t: &str) -> Result<Outcome, CliError> {
    let t = parse_rational(t).ok_or_else(|| CliError::Parse(format!("bad rational {t:?}")))?;
    if depth > PASCAL_MAX_DEPTH {
        return Err(domain(
            format!("depth {depth} above {PASCAL_MAX_DEPTH}"),
            "parameter range",
        ));
    }
    let (d, walk) = pascal_diagram(depth, t)?;
    let mut failures = Vec::new();

    let mut closed_form = true;
    for n in 1..=depth {
        let floor = d.level(n);
        for e in 0..floor.edge_count() {
            let k = floor.rng(e) as i64;
            let expected = if e % 2 == 0 {
                ratio(n as i64 - k, n as i64)
            } else {
                ratio(k, n as i64)
            };
            closed_form &= *walk.cotransition().get(n, e) == expected;
        }
    }

    let mut table = Table::new(&["path", "k", "q"]);
    let paths = enumerate_paths(&d, 0, depth)?;
    let mut inverse_binomial = true;
    let mut by_end: BTreeMap<usize, Vec<&FinitePath>> = BTreeMap::new();
    for a in &paths {
        let k = a.range();
        let q = walk.path_cotransition(a)?;
        inverse_binomial &= q == binomial(depth as u64, k as u64).recip();
        let bits: String = a.edges().iter().map(|e| if e % 2 == 1 { '1' } else { '0' }).collect();
        table.row(vec![bits.into(), k.into(), q.into()]);
        by_end.entry(k).or_default().push(a);
    }

    let one = Rational::from_integer(1.into());
    let mut d_is_one = true;
    for group in by_end.values() {
        for a in group {
            for b in group {
                debug_assert!(tail_related(a, b));
                d_is_one &= walk.radon_nikodym(a, b)? == one;
            }
        }
    }

    let status = |ok: bool| if ok { "OK" } else { "FAIL" };
    table.note(format!("closed-form q: {}", status(closed_form)));
    table.note(format!("q(path) == 1/C(n,k): {}", status(inverse_binomial)));
    table.note(format!("D == 1: {}", status(d_is_one)));
    for (ok, name) in [
        (closed_form, "closed-form cotransition"),
        (inverse_binomial, "q(path) = 1/C(n,k)"),
        (d_is_one, "D = 1"),
    ] {
        if !ok {
            failures.push(name);
        }
    }
    let failure =
        (!failures.is_empty()).then(|| domain(format!("failed: {}", failures.join(", ")), "Pascal invariance"));
    Ok(Outcome { table, failure })
}

fn skew(file: &Path, window: &str) -> Result<Outcome, CliError> {
    let f = load(file)?;
    let d = Arc::new(f.diagram()?);
    let rho = f.potential()?;
    let group = rho.group();
    let elements = window
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            group
                .parse(s)
                .ok_or_else(|| CliError::Parse(format!("bad window element {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sd = skew_product(d.clone(), rho, &elements)?;
    let mut table = Table::new(&["level", "vertex", "base", "g"]);
    for n in 0..=d.depth() {
        for (i, (v, g)) in sd.vertices(n).iter().enumerate() {
            table.row(vec![
                n.into(),
                sd.diagram().vertex_id(n, i).into(),
                d.vertex_id(n, *v).into(),
                g.to_string().into(),
            ]);
        }
    }
    let violations = sd.law_violations();
    table.note(format!("laws: {}", if violations.is_empty() { "OK" } else { "FAIL" }));
    let failure = violations.first().map(|v| domain(v.clone(), "skew source/range law"));
    Ok(Outcome { table, failure })
}
