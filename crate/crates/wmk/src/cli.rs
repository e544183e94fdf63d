//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use wmk_core::engine::{
    atoms_up_to, fingerprint, infinite_certificate, is_atom, module_type, refinement_or_simplified,
    AtomVerdict, InfiniteCertificate, InfinitenessVerdict, ModuleType, RefinementVerdict,
};
use wmk_core::symbolic::{verify_all_witnesses, CheckVerdict};
use wmk_core::{
    k0_consistency, k0_invariants, verify_theorem_witnesses, Bounds, CongruenceEngine, Decision,
    EngineError, GeneratorName, MonoidPresentation, Verdict,
};

use crate::io::{self, Input, InputError};

pub const BOUNDS_ENV: &str = "WMK_DEFAULT_BOUNDS";

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    /// A definite result contradicting what the invocation asserted.
    Negative = 1,
    Unknown = 2,
    InputError = 3,
}

#[derive(Parser, Debug)]
#[command(
    name = "wmk",
    version,
    about = "V-monoids and K0 of weighted Leavitt path algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Graph file, or a monoid presentation file where a graph is not needed.
    pub input: PathBuf,
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
    /// Total degree for atom and refinement searches [default: 8]
    #[arg(long, value_name = "D")]
    pub bound_degree: Option<u64>,
    /// Node cap for breadth-first searches [default: 100000]
    #[arg(long, value_name = "N")]
    pub bound_nodes: Option<usize>,
    /// Largest n for module type and infiniteness checks [default: 10]
    #[arg(long, value_name = "N")]
    pub bound_n: Option<u64>,
    /// Largest k for module type [default: 10]
    #[arg(long, value_name = "K")]
    pub bound_k: Option<u64>,
    /// Critical-pair cap for the completion [default: 100000]
    #[arg(long, value_name = "P")]
    pub bound_pairs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the presentation of the V-monoid.
    Present {
        #[command(flatten)]
        common: Common,
        /// Eliminate generators first.
        #[arg(long)]
        simplify: bool,
    },
    /// Invariants of K0.
    K0 {
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether two elements are equal, e.g. `u=1,q:v:1=2`.
    Equal {
        #[command(flatten)]
        common: Common,
        a: String,
        b: String,
        #[arg(long, conflicts_with = "assert_not_equal")]
        assert_equal: bool,
        #[arg(long)]
        assert_not_equal: bool,
    },
    /// Module type (n, k) of a generator.
    ModuleType {
        #[command(flatten)]
        common: Common,
        /// Defaults to the only vertex of a one-vertex graph.
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Atoms up to the degree bound, or whether one element is an atom.
    Atoms {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        element: Option<String>,
    },
    /// Certificate that the monoid is infinite because of distinct weights.
    InfiniteCheck {
        #[command(flatten)]
        common: Common,
    },
    /// Bounded refinement check.
    RefineCheck {
        #[command(flatten)]
        common: Common,
    },
    /// Check the matrix identities at every emitting vertex.
    VerifyWitnesses {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Combined bounded invariants.
    Fingerprint {
        #[command(flatten)]
        common: Common,
    },
    /// Compare K0 computed directly with the group completion of the V-monoid.
    Consistency {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Self::Present { common, .. }
            | Self::K0 { common }
            | Self::Equal { common, .. }
            | Self::ModuleType { common, .. }
            | Self::Atoms { common, .. }
            | Self::InfiniteCheck { common }
            | Self::RefineCheck { common }
            | Self::VerifyWitnesses { common, .. }
            | Self::Fingerprint { common }
            | Self::Consistency { common } => common,
        }
    }
}

/// Defaults, then the environment spec, then explicit flags.
pub fn resolve_bounds(c: &Common, env: Option<&str>) -> Result<Bounds, InputError> {
    let mut b = match env {
        Some(spec) => io::parse_bounds(spec, Bounds::default())?,
        None => Bounds::default(),
    };
    if let Some(d) = c.bound_degree {
        b.degree = d;
    }
    if let Some(n) = c.bound_nodes {
        b.nodes = n;
    }
    if let Some(n) = c.bound_n {
        b.n_max = n;
    }
    if let Some(k) = c.bound_k {
        b.k_max = k;
    }
    if let Some(p) = c.bound_pairs {
        b.pairs = p;
    }
    Ok(b)
}

struct Report {
    status: Status,
    json: String,
    human: String,
}

impl Report {
    fn new(status: Status, value: &impl Serialize, human: String) -> Self {
        Self {
            status,
            json: serde_json::to_string_pretty(value).expect("reports serialize"),
            human,
        }
    }
}

/// Parses `args` (program name first), runs the command and writes its report.
/// Returns the exit status.
pub fn run<I, T>(
    args: I,
    env_bounds: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Status
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if informational { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if informational {
                Status::Ok
            } else {
                Status::InputError
            };
        }
    };
    match execute(&cli.command, env_bounds) {
        Ok(report) => {
            let text = if cli.command.common().json {
                report.json
            } else {
                report.human
            };
            let _ = writeln!(out, "{}", text.trim_end());
            report.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            Status::InputError
        }
    }
}

fn execute(cmd: &Command, env_bounds: Option<&str>) -> Result<Report, InputError> {
    let common = cmd.common();
    let bounds = resolve_bounds(common, env_bounds)?;
    let input = io::read_input(&common.input)?;
    match cmd {
        Command::Present { simplify, .. } => Ok(present(&input, *simplify)),
        Command::K0 { .. } => k0(&input),
        Command::Equal {
            a,
            b,
            assert_equal,
            assert_not_equal,
            ..
        } => equal(&input, bounds, a, b, *assert_equal, *assert_not_equal),
        Command::ModuleType { vertex, .. } => module(&input, bounds, vertex.as_deref()),
        Command::Atoms { element, .. } => atoms(&input, bounds, element.as_deref()),
        Command::InfiniteCheck { .. } => infinite(&input, bounds),
        Command::RefineCheck { .. } => Ok(refine(&input, bounds)),
        Command::VerifyWitnesses { vertex, .. } => witnesses(&input, vertex.as_deref()),
        Command::Fingerprint { .. } => Ok(fingerprint_report(&input, bounds)),
        Command::Consistency { .. } => consistency(&input),
    }
}

fn render_presentation(p: &MonoidPresentation) -> String {
    let gens: Vec<String> = p.generators().iter().map(ToString::to_string).collect();
    let mut s = format!("generators: {}\nrelations:", gens.join(", "));
    if p.relations().is_empty() {
        s.push_str(" none");
    }
    for r in p.relations() {
        let _ = write!(s, "\n  {}", r.render(p.generators()));
    }
    s
}

fn present(input: &Input, simplify: bool) -> Report {
    let p = input.presentation();
    if !simplify {
        return Report::new(Status::Ok, &p, render_presentation(&p));
    }
    let (simple, log) = p.auto_simplify();
    let mut human = render_presentation(&simple);
    for step in &log {
        let _ = write!(
            human,
            "\neliminated {} = {}",
            step.generator,
            step.image.render(p.generators())
        );
    }
    Report::new(Status::Ok, &simple, human)
}

fn k0(input: &Input) -> Result<Report, InputError> {
    let inv = k0_invariants(input.graph()?);
    Ok(Report::new(Status::Ok, &inv, format!("K0 = {inv}")))
}

fn equal(
    input: &Input,
    bounds: Bounds,
    a: &str,
    b: &str,
    assert_equal: bool,
    assert_not_equal: bool,
) -> Result<Report, InputError> {
    let p = input.presentation();
    let x = io::parse_element(a, p.generators())?;
    let y = io::parse_element(b, p.generators())?;
    let eng = CongruenceEngine::with_bounds(p, bounds);
    let d = eng.equal(&x, &y).map_err(engine_input_error)?;
    let status = match d.verdict() {
        Verdict::Unknown => Status::Unknown,
        Verdict::Equal if assert_not_equal => Status::Negative,
        Verdict::NotEqual if assert_equal => Status::Negative,
        _ => Status::Ok,
    };
    let human = match &d {
        Decision::Equal { certificate } => match certificate {
            wmk_core::engine::EqualityCertificate::Trace(t) => {
                format!("equal ({} rewrite steps)", t.len())
            }
            wmk_core::engine::EqualityCertificate::CommonNormalForm(n) => {
                format!(
                    "equal (common normal form {})",
                    n.render(eng.presentation().generators())
                )
            }
        },
        Decision::NotEqual { certificate } => {
            format!("not equal ({})", separation_kind(certificate))
        }
        Decision::Unknown {
            pairs_processed,
            nodes_visited,
        } => format!("unknown ({pairs_processed} pairs, {nodes_visited} nodes explored)"),
    };
    Ok(Report::new(status, &d, human))
}

fn separation_kind(s: &wmk_core::engine::Separation) -> &'static str {
    match s {
        wmk_core::engine::Separation::Functional { .. } => "separated by a linear functional",
        wmk_core::engine::Separation::NormalForms { .. } => "distinct normal forms",
        wmk_core::engine::Separation::ExhaustedClass { .. } => "exhausted congruence class",
    }
}

fn engine_input_error(e: EngineError) -> InputError {
    InputError::Usage(e.to_string())
}

fn module(input: &Input, bounds: Bounds, vertex: Option<&str>) -> Result<Report, InputError> {
    let p = input.presentation();
    let u: GeneratorName = match (vertex, input) {
        (Some(v), _) => v.parse().unwrap_or_else(|e| match e {}),
        (None, Input::Graph(g)) if g.vertex_count() == 1 => GeneratorName::vertex(g.vertex_name(0)),
        (None, Input::Presentation(p)) if p.generators().len() == 1 => p.generators()[0].clone(),
        _ => {
            return Err(InputError::Usage(
                "--vertex is required unless there is a single vertex".into(),
            ))
        }
    };
    if p.generator_index(&u).is_none() {
        return Err(InputError::Usage(format!("unknown generator `{u}`")));
    }
    let eng = CongruenceEngine::with_bounds(p, bounds);
    #[derive(Serialize)]
    struct Out<'a> {
        generator: String,
        #[serde(flatten)]
        result: &'a ModuleType,
    }
    match module_type(&eng, &u, bounds.n_max, bounds.k_max) {
        Ok(m) => {
            let human = match m {
                ModuleType::Found { n, k } => format!("({n},{k})"),
                ModuleType::NoneFound => {
                    format!("none with n <= {}, k <= {}", bounds.n_max, bounds.k_max)
                }
            };
            Ok(Report::new(
                Status::Ok,
                &Out {
                    generator: u.to_string(),
                    result: &m,
                },
                human,
            ))
        }
        Err(EngineError::Inconclusive(what)) => Ok(unknown_report(what)),
        Err(e) => Err(engine_input_error(e)),
    }
}

fn unknown_report(what: String) -> Report {
    #[derive(Serialize)]
    struct Out {
        result: &'static str,
        undecided: String,
    }
    let human = format!("unknown: undecided {what}");
    Report::new(
        Status::Unknown,
        &Out {
            result: "unknown",
            undecided: what,
        },
        human,
    )
}

fn atoms(input: &Input, bounds: Bounds, element: Option<&str>) -> Result<Report, InputError> {
    let p = input.presentation();
    let order = p.generators().to_vec();
    let eng = CongruenceEngine::with_bounds(p, bounds);
    if let Some(lit) = element {
        let a = io::parse_element(lit, &order)?;
        let v = is_atom(&eng, &a, &bounds).map_err(engine_input_error)?;
        let (status, human) = match &v {
            AtomVerdict::Yes => (Status::Ok, "atom".to_string()),
            AtomVerdict::No { left, right } => (
                Status::Ok,
                format!(
                    "not an atom: {} + {}",
                    left.render(&order),
                    right.render(&order)
                ),
            ),
            AtomVerdict::Unknown => (Status::Unknown, "unknown".to_string()),
        };
        return Ok(Report::new(status, &v, human));
    }
    let (found, complete) = atoms_up_to(&eng, bounds.degree, bounds.nodes);
    #[derive(Serialize)]
    struct Out {
        degree_bound: u64,
        complete: bool,
        atoms: Vec<wmk_core::Element>,
    }
    let mut human = format!(
        "{} atom classes up to degree {}{}",
        found.len(),
        bounds.degree,
        if complete {
            ""
        } else {
            " (some tests inconclusive)"
        }
    );
    for a in &found {
        let _ = write!(human, "\n  {}", a.render(&order));
    }
    let status = if complete {
        Status::Ok
    } else {
        Status::Unknown
    };
    Ok(Report::new(
        status,
        &Out {
            degree_bound: bounds.degree,
            complete,
            atoms: found,
        },
        human,
    ))
}

fn infinite(input: &Input, bounds: Bounds) -> Result<Report, InputError> {
    let g = input.graph()?;
    let eng = CongruenceEngine::with_bounds(wmk_core::build_v_monoid(g), bounds);
    match infinite_certificate(g, &eng, bounds.n_max) {
        Ok(c) => {
            let human = match &c {
                InfiniteCertificate::InfiniteByWeights {
                    vertex,
                    generator,
                    classes,
                } => format!(
                    "infinite: vertex {vertex} emits several weights; n·{generator} for 0 <= n <= {} give {} distinct classes",
                    bounds.n_max,
                    classes.len()
                ),
                InfiniteCertificate::NotApplicable => "not applicable: every vertex emits a single weight".into(),
            };
            Ok(Report::new(Status::Ok, &c, human))
        }
        Err(EngineError::Inconclusive(what)) => Ok(unknown_report(what)),
        Err(e) => Err(engine_input_error(e)),
    }
}

fn refinement_human(v: &RefinementVerdict, order: &[GeneratorName]) -> String {
    match v {
        RefinementVerdict::Satisfied {
            degree_bound,
            classes_checked,
        } => format!("satisfied up to degree {degree_bound} ({classes_checked} classes)"),
        RefinementVerdict::Fails { witness, .. } => format!(
            "fails: {} + {} = {} + {} has no refinement",
            witness.a1.render(order),
            witness.a2.render(order),
            witness.b1.render(order),
            witness.b2.render(order)
        ),
        RefinementVerdict::Inapplicable => "inapplicable: relations change total degree".into(),
    }
}

fn refine(input: &Input, bounds: Bounds) -> Report {
    let p = input.presentation();
    let order = p.generators().to_vec();
    let eng = CongruenceEngine::with_bounds(p, bounds);
    let (verdict, simplified) = refinement_or_simplified(&eng, &bounds);
    #[derive(Serialize)]
    struct Out<'a> {
        on_simplified: bool,
        #[serde(flatten)]
        verdict: &'a RefinementVerdict,
    }
    let mut human = refinement_human(&verdict, &order);
    if simplified {
        human.push_str(" [simplified presentation]");
    }
    Report::new(
        Status::Ok,
        &Out {
            on_simplified: simplified,
            verdict: &verdict,
        },
        human,
    )
}

fn witnesses(input: &Input, vertex: Option<&str>) -> Result<Report, InputError> {
    let g = input.graph()?;
    let reports = match vertex {
        Some(v) => {
            vec![verify_theorem_witnesses(g, v).map_err(|e| InputError::Usage(e.to_string()))?]
        }
        None => verify_all_witnesses(g).map_err(|e| InputError::Usage(e.to_string()))?,
    };
    let mut human = String::new();
    for r in &reports {
        let ok = r
            .checks
            .iter()
            .filter(|c| c.verdict == CheckVerdict::Verified)
            .count();
        let _ = write!(
            human,
            "vertex {}: {ok}/{} verified",
            r.vertex,
            r.checks.len()
        );
        for c in &r.checks {
            if let CheckVerdict::Counterexample { row, col, residual } = &c.verdict {
                let _ = write!(
                    human,
                    "\n  {:?} at l = {}: entry ({row},{col}) reduces to {residual}",
                    c.identity, c.l
                );
            }
        }
        human.push('\n');
    }
    let status = if reports.iter().all(|r| r.all_verified()) {
        Status::Ok
    } else {
        Status::Negative
    };
    Ok(Report::new(status, &reports, human))
}

fn fingerprint_report(input: &Input, bounds: Bounds) -> Report {
    let p = input.presentation();
    let order = p.generators().to_vec();
    let eng = CongruenceEngine::with_bounds(p, bounds);
    let f = fingerprint(&eng, &bounds);
    let atoms = match f.atom_count() {
        Some(n) => n.to_string(),
        None => format!(">= {} (incomplete)", f.atoms.len()),
    };
    let infinite = match &f.infiniteness {
        InfinitenessVerdict::InfiniteByRank { rank } => format!("infinite (group rank {rank})"),
        InfinitenessVerdict::InfiniteByFreeGenerator { generator } => {
            format!("infinite ({generator} is free)")
        }
        InfinitenessVerdict::Finite => "finite".into(),
        InfinitenessVerdict::Unknown => "unknown".into(),
    };
    let human = format!(
        "generators: {}\nrelations: {}\natoms up to degree {}: {atoms}\ngroup completion: {}\ndegree preserving: {}\nrefinement: {}{}\ninfiniteness: {infinite}",
        f.generator_count,
        f.relation_count,
        f.degree_bound,
        f.group,
        f.degree_preserving,
        refinement_human(&f.refinement, &order),
        if f.refinement_simplified { " [simplified presentation]" } else { "" },
    );
    let status = if f.atoms_complete && f.infiniteness != InfinitenessVerdict::Unknown {
        Status::Ok
    } else {
        Status::Unknown
    };
    Report::new(status, &f, human)
}

fn consistency(input: &Input) -> Result<Report, InputError> {
    let g = input.graph()?;
    let (report, status) = match k0_consistency(g) {
        Ok(r) => (r, Status::Ok),
        Err(f) => (*f.0, Status::Negative),
    };
    let human = format!(
        "direct: {}\nvia V-monoid: {}\n{}",
        report.direct_invariants,
        report.monoid_invariants,
        if status == Status::Ok {
            "consistent"
        } else {
            "MISMATCH"
        }
    );
    #[derive(Serialize)]
    struct Out<'a> {
        consistent: bool,
        #[serde(flatten)]
        report: &'a wmk_core::ConsistencyReport,
    }
    Ok(Report::new(
        status,
        &Out {
            consistent: status == Status::Ok,
            report: &report,
        },
        human,
    ))
}
