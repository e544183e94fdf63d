//! File formats: graph and presentation JSON, element literals, bound specs.

use std::fs;
use std::path::Path;

use serde_json::Value;
use thiserror::Error;
use wmk_core::graph::{GraphError, GraphSpec};
use wmk_core::presentation::PresentationError;
use wmk_core::{Bounds, Element, GeneratorName, MonoidPresentation, WeightedGraph};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read `{path}`: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed input at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid graph: {0}")]
    Validation(#[from] GraphError),
    #[error("invalid presentation: {0}")]
    Presentation(#[from] PresentationError),
    #[error("element literal `{literal}`, term {term}: {reason}")]
    Element {
        literal: String,
        term: usize,
        reason: String,
    },
    #[error("bounds `{spec}`: {reason}")]
    Bounds { spec: String, reason: String },
    #[error("{0}")]
    Usage(String),
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends its own position; keep only the description
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        Self::Parse {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

/// Contents of an input file: a weighted graph, or a bare monoid presentation.
#[derive(Debug, Clone)]
pub enum Input {
    Graph(WeightedGraph),
    Presentation(MonoidPresentation),
}

impl Input {
    pub fn presentation(&self) -> MonoidPresentation {
        match self {
            Self::Graph(g) => wmk_core::build_v_monoid(g),
            Self::Presentation(p) => p.clone(),
        }
    }

    pub fn graph(&self) -> Result<&WeightedGraph, InputError> {
        match self {
            Self::Graph(g) => Ok(g),
            Self::Presentation(_) => Err(InputError::Usage(
                "this command needs a graph file, not a presentation".into(),
            )),
        }
    }
}

pub fn read_to_string(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Read {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, InputError> {
    let spec: GraphSpec = serde_json::from_str(text)?;
    Ok(WeightedGraph::from_spec(&spec)?)
}

pub fn graph_to_json(g: &WeightedGraph) -> String {
    serde_json::to_string_pretty(&g.to_spec()).expect("graph specs serialize")
}

pub fn parse_presentation(text: &str) -> Result<MonoidPresentation, InputError> {
    Ok(serde_json::from_str(text)?)
}

pub fn presentation_to_json(p: &MonoidPresentation) -> String {
    serde_json::to_string_pretty(p).expect("presentations serialize")
}

/// Parses either file kind; presentations are recognised by their
/// `generators` key.
pub fn parse_input(text: &str) -> Result<Input, InputError> {
    let value: Value = serde_json::from_str(text)?;
    if value.get("generators").is_some() {
        parse_presentation(text).map(Input::Presentation)
    } else {
        parse_graph(text).map(Input::Graph)
    }
}

pub fn read_input(path: &Path) -> Result<Input, InputError> {
    parse_input(&read_to_string(path)?)
}

/// Parses `"u=1,q:v:1=2"`. The literal `0` (or an empty string) is the zero
/// element. Every generator must belong to `generators`.
pub fn parse_element(literal: &str, generators: &[GeneratorName]) -> Result<Element, InputError> {
    let trimmed = literal.trim();
    let mut out = Element::zero();
    if trimmed.is_empty() || trimmed == "0" {
        return Ok(out);
    }
    for (i, term) in trimmed.split(',').enumerate() {
        let fail = |reason: String| InputError::Element {
            literal: literal.into(),
            term: i + 1,
            reason,
        };
        let (name, coeff) = term
            .rsplit_once('=')
            .ok_or_else(|| fail("expected `generator=coefficient`".into()))?;
        let name = name.trim();
        let coeff: u64 = coeff
            .trim()
            .parse()
            .map_err(|e| fail(format!("bad coefficient `{}`: {e}", coeff.trim())))?;
        let g: GeneratorName = name.parse().unwrap_or_else(|e| match e {});
        if !generators.contains(&g) {
            return Err(fail(format!("unknown generator `{name}`")));
        }
        out.add_term(g, coeff);
    }
    Ok(out)
}

/// Overrides fields of `base` from `"degree=8,nodes=100000,n=10,k=10,pairs=100000"`.
pub fn parse_bounds(spec: &str, base: Bounds) -> Result<Bounds, InputError> {
    let mut b = base;
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fail = |reason: String| InputError::Bounds {
            spec: spec.into(),
            reason,
        };
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| fail(format!("`{part}` is not `key=value`")))?;
        let value: u64 = value
            .trim()
            .parse()
            .map_err(|e| fail(format!("`{part}`: {e}")))?;
        let as_usize =
            || usize::try_from(value).map_err(|_| fail(format!("`{part}` is too large")));
        match key.trim() {
            "degree" => b.degree = value,
            "nodes" => b.nodes = as_usize()?,
            "pairs" => b.pairs = as_usize()?,
            "trace" => b.trace_steps = as_usize()?,
            "n" => b.n_max = value,
            "k" => b.k_max = value,
            other => return Err(fail(format!("unknown key `{other}`"))),
        }
    }
    Ok(b)
}
