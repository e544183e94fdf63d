//! Row-finite weighted graphs and the per-vertex weight stratification.
//!
//! A [`WeightedGraph`] is immutable once built. Every other module consumes the
//! graph through vertex and edge indices into the declaration-ordered lists kept
//! here, so names only matter at the boundaries.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

/// Index of a vertex in declaration order.
pub type VertexIdx = usize;
/// Index of an edge in declaration order.
pub type EdgeIdx = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("invalid vertex id `{id}`: {reason}")]
    InvalidVertexId { id: String, reason: &'static str },
    #[error("invalid edge id `{id}`: {reason}")]
    InvalidEdgeId { id: String, reason: &'static str },
    #[error("edge `{edge}` has {end} `{vertex}` which is not a declared vertex")]
    DanglingEndpoint {
        edge: String,
        end: &'static str,
        vertex: String,
    },
    #[error("edge `{edge}` has weight {weight}; weights must be at least 1")]
    NonPositiveWeight { edge: String, weight: i64 },
    #[error("edge `{edge}` has weight {weight}, which exceeds the supported maximum")]
    WeightTooLarge { edge: String, weight: i64 },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("edge order for vertex `{vertex}` is invalid: {reason}")]
    InvalidEdgeOrder {
        vertex: String,
        reason: &'static str,
    },
}

/// Raw, unvalidated graph data as it appears in a graph file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct EdgeSpec {
    pub id: String,
    pub source: String,
    pub range: String,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub source: VertexIdx,
    pub range: VertexIdx,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    vertices: Vec<String>,
    vertex_index: BTreeMap<String, VertexIdx>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeIdx>>,
}

fn check_vertex_id(id: &str) -> Result<(), GraphError> {
    let reason = if id.is_empty() {
        "must not be empty"
    } else if id.starts_with("q:") {
        "the prefix `q:` is reserved for auxiliary generators"
    } else if id.contains([',', '=']) || id.chars().any(char::is_whitespace) {
        "must not contain `,`, `=` or whitespace"
    } else {
        return Ok(());
    };
    Err(GraphError::InvalidVertexId {
        id: id.into(),
        reason,
    })
}

impl WeightedGraph {
    /// Validates raw graph data.
    pub fn from_spec(spec: &GraphSpec) -> Result<Self, GraphError> {
        let mut vertex_index = BTreeMap::new();
        for (i, v) in spec.vertices.iter().enumerate() {
            check_vertex_id(v)?;
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut edge_ids = BTreeSet::new();
        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut out = alloc::vec![Vec::new(); spec.vertices.len()];
        for e in &spec.edges {
            if e.id.is_empty() {
                return Err(GraphError::InvalidEdgeId {
                    id: e.id.clone(),
                    reason: "must not be empty",
                });
            }
            if !edge_ids.insert(e.id.as_str()) {
                return Err(GraphError::DuplicateEdge(e.id.clone()));
            }
            let lookup = |name: &String, end: &'static str| {
                vertex_index
                    .get(name)
                    .copied()
                    .ok_or_else(|| GraphError::DanglingEndpoint {
                        edge: e.id.clone(),
                        end,
                        vertex: name.clone(),
                    })
            };
            let source = lookup(&e.source, "source")?;
            let range = lookup(&e.range, "range")?;
            if e.weight < 1 {
                return Err(GraphError::NonPositiveWeight {
                    edge: e.id.clone(),
                    weight: e.weight,
                });
            }
            let weight = u32::try_from(e.weight).map_err(|_| GraphError::WeightTooLarge {
                edge: e.id.clone(),
                weight: e.weight,
            })?;
            out[source].push(edges.len());
            edges.push(Edge {
                id: e.id.clone(),
                source,
                range,
                weight,
            });
        }
        Ok(Self {
            vertices: spec.vertices.clone(),
            vertex_index,
            edges,
            out,
        })
    }

    /// Convenience constructor from `(id, source, range, weight)` tuples.
    pub fn new<V: AsRef<str>>(
        vertices: &[V],
        edges: &[(&str, &str, &str, i64)],
    ) -> Result<Self, GraphError> {
        Self::from_spec(&GraphSpec {
            vertices: vertices.iter().map(|v| v.as_ref().into()).collect(),
            edges: edges
                .iter()
                .map(|&(id, s, r, w)| EdgeSpec {
                    id: id.into(),
                    source: s.into(),
                    range: r.into(),
                    weight: w,
                })
                .collect(),
        })
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    source: self.vertices[e.source].clone(),
                    range: self.vertices[e.range].clone(),
                    weight: i64::from(e.weight),
                })
                .collect(),
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: VertexIdx) -> &str {
        &self.vertices[v]
    }

    pub fn edge(&self, e: EdgeIdx) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_idx(&self, name: &str) -> Result<VertexIdx, GraphError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.into()))
    }

    /// Edges emitted by `v`, in declaration order.
    pub fn out_edges(&self, v: VertexIdx) -> &[EdgeIdx] {
        &self.out[v]
    }

    pub fn is_sink(&self, v: VertexIdx) -> bool {
        self.out[v].is_empty()
    }

    /// Emitting vertices in declaration order.
    pub fn emitting_vertices(&self) -> impl Iterator<Item = VertexIdx> + '_ {
        (0..self.vertices.len()).filter(|&v| !self.is_sink(v))
    }

    /// `w(v)`: maximal weight of an edge emitted by `v`, `0` for sinks.
    pub fn vertex_weight(&self, name: &str) -> Result<u32, GraphError> {
        Ok(self.weight_at(self.vertex_idx(name)?))
    }

    pub fn weight_at(&self, v: VertexIdx) -> u32 {
        self.out[v]
            .iter()
            .map(|&e| self.edges[e].weight)
            .max()
            .unwrap_or(0)
    }

    pub fn strata(&self, name: &str) -> Result<VertexStrata, GraphError> {
        Ok(self.strata_at(self.vertex_idx(name)?))
    }

    /// Stratification with equal-weight edges ordered by edge id.
    pub fn strata_at(&self, v: VertexIdx) -> VertexStrata {
        let mut order = self.out[v].clone();
        order.sort_by(|&a, &b| {
            let (ea, eb) = (&self.edges[a], &self.edges[b]);
            ea.weight.cmp(&eb.weight).then_with(|| ea.id.cmp(&eb.id))
        });
        VertexStrata::from_order(self, v, order)
    }
}

/// Weight stratification of `s⁻¹(v)`.
///
/// `weights[l]` is `w_l(v)` with `weights[0] = 0`, and `counts[l]` is the number of
/// emitted edges of weight at most `w_l(v)`. Both have length `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexStrata {
    pub vertex: VertexIdx,
    pub k: usize,
    pub weights: Vec<u32>,
    pub counts: Vec<usize>,
    pub ordered_edges: Vec<EdgeIdx>,
}

impl VertexStrata {
    fn from_order(g: &WeightedGraph, v: VertexIdx, order: Vec<EdgeIdx>) -> Self {
        let mut weights = alloc::vec![0u32];
        let mut counts = alloc::vec![0usize];
        for (pos, &e) in order.iter().enumerate() {
            let w = g.edges[e].weight;
            if *weights.last().unwrap() == w {
                *counts.last_mut().unwrap() = pos + 1;
            } else {
                weights.push(w);
                counts.push(pos + 1);
            }
        }
        Self {
            vertex: v,
            k: weights.len() - 1,
            weights,
            counts,
            ordered_edges: order,
        }
    }

    /// Stratification using a caller-chosen weight-respecting order of `s⁻¹(v)`.
    pub fn with_order(
        g: &WeightedGraph,
        v: VertexIdx,
        order: Vec<EdgeIdx>,
    ) -> Result<Self, GraphError> {
        let invalid = |reason| GraphError::InvalidEdgeOrder {
            vertex: g.vertices[v].clone(),
            reason,
        };
        let mut sorted = order.clone();
        sorted.sort_unstable();
        let mut expected = g.out[v].clone();
        expected.sort_unstable();
        if sorted != expected {
            return Err(invalid("not a permutation of the emitted edges"));
        }
        if order
            .windows(2)
            .any(|w| g.edges[w[0]].weight > g.edges[w[1]].weight)
        {
            return Err(invalid("weights must be nondecreasing"));
        }
        Ok(Self::from_order(g, v, order))
    }

    pub fn out_degree(&self) -> usize {
        self.ordered_edges.len()
    }

    /// `w(v)`, the last entry of `weights`.
    pub fn max_weight(&self) -> u32 {
        *self.weights.last().unwrap()
    }

    /// Edges `e^{n_{l-1}+1}, …, e^{n_l}` of weight exactly `w_l(v)`, for `1 ≤ l ≤ k`.
    pub fn level_edges(&self, l: usize) -> &[EdgeIdx] {
        &self.ordered_edges[self.counts[l - 1]..self.counts[l]]
    }
}
