//! Commutative monoid and abelian group presentations: the V-monoid `M(E,w)`,
//! the K₀ presentation, group completion, and generator elimination.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::lattice::{AbelianGroupInvariants, IntMatrix, SnfDecomposition};

/// A generator of `M(E,w)`: a vertex, or an auxiliary `q:v:i` with `1 ≤ i < k_v`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorName {
    Vertex(String),
    Q { vertex: String, index: u32 },
}

impl GeneratorName {
    pub fn vertex(v: impl Into<String>) -> Self {
        Self::Vertex(v.into())
    }

    pub fn q(v: impl Into<String>, index: u32) -> Self {
        Self::Q {
            vertex: v.into(),
            index,
        }
    }

    pub fn is_q(&self) -> bool {
        matches!(self, Self::Q { .. })
    }
}

impl fmt::Display for GeneratorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Vertex(v) => f.write_str(v),
            Self::Q { vertex, index } => write!(f, "q:{vertex}:{index}"),
        }
    }
}

impl FromStr for GeneratorName {
    type Err = core::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("q:") {
            if let Some((v, i)) = rest.rsplit_once(':') {
                if let Ok(index) = i.parse::<u32>() {
                    if !v.is_empty() && index >= 1 {
                        return Ok(Self::q(v, index));
                    }
                }
            }
        }
        Ok(Self::Vertex(s.into()))
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for GeneratorName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for GeneratorName {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(s.parse().unwrap_or_else(|e| match e {}))
    }
}

/// Finitely supported `ℕ₀`-combination of generators. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(BTreeMap<GeneratorName, u64>);

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit vector `α_y`.
    pub fn unit(g: GeneratorName) -> Self {
        Self::from_terms([(g, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GeneratorName, u64)>) -> Self {
        let mut e = Self::zero();
        for (g, c) in terms {
            e.add_term(g, c);
        }
        e
    }

    pub fn add_term(&mut self, g: GeneratorName, c: u64) {
        if c != 0 {
            *self.0.entry(g).or_insert(0) += c;
        }
    }

    pub fn get(&self, g: &GeneratorName) -> u64 {
        self.0.get(g).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GeneratorName, u64)> {
        self.0.iter().map(|(g, &c)| (g, c))
    }

    pub fn scaled(&self, k: u64) -> Self {
        Self::from_terms(self.terms().map(|(g, c)| (g.clone(), c * k)))
    }

    /// Applies the homomorphism fixing every generator except `y`, which is
    /// sent to `image`.
    pub fn substitute(&self, y: &GeneratorName, image: &Element) -> Self {
        let mut out = Self::zero();
        for (g, c) in self.terms() {
            if g == y {
                for (h, d) in image.terms() {
                    out.add_term(h.clone(), c * d);
                }
            } else {
                out.add_term(g.clone(), c);
            }
        }
        out
    }

    /// Renders with auxiliary generators first, then vertices, each group in
    /// the given generator order.
    pub fn render(&self, order: &[GeneratorName]) -> String {
        let mut parts = Vec::new();
        for want_q in [true, false] {
            for g in order.iter().filter(|g| g.is_q() == want_q) {
                match self.get(g) {
                    0 => {}
                    1 => parts.push(g.to_string()),
                    c => parts.push(alloc::format!("{c}{g}")),
                }
            }
        }
        // generators outside `order` still need to show up
        for (g, c) in self.terms() {
            if !order.contains(g) {
                parts.push(alloc::format!("{c}{g}"));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl core::ops::Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (g, c) in rhs.terms() {
            out.add_term(g.clone(), c);
        }
        out
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.terms().map(|(g, c)| (g.to_string(), c)))
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Element {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<GeneratorName, u64>::deserialize(d)?;
        Ok(Self::from_terms(raw))
    }
}

/// A defining relation `lhs = rhs`, compared as an unordered pair.
#[derive(Clone, Debug, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Relation {
    pub lhs: Element,
    pub rhs: Element,
}

impl Relation {
    pub fn new(lhs: Element, rhs: Element) -> Self {
        Self { lhs, rhs }
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn sides(&self) -> [&Element; 2] {
        [&self.lhs, &self.rhs]
    }

    pub fn render(&self, order: &[GeneratorName]) -> String {
        alloc::format!("{} = {}", self.lhs.render(order), self.rhs.render(order))
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        (self.lhs == other.lhs && self.rhs == other.rhs)
            || (self.lhs == other.rhs && self.rhs == other.lhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("generator `{0}` is not declared")]
    UnknownGenerator(GeneratorName),
    #[error("generator `{0}` is declared twice")]
    DuplicateGenerator(GeneratorName),
    #[error("relation index {index} out of range ({count} relations)")]
    RelationOutOfRange { index: usize, count: usize },
    #[error("relation {relation} does not isolate `{generator}` with unit coefficient")]
    NotEliminable {
        generator: GeneratorName,
        relation: usize,
    },
    #[error("vertex `{vertex}` has {k} distinct emitted weights; the classic graph monoid needs at most one")]
    NotClassic { vertex: String, k: usize },
}

/// Commutative monoid presentation. Relations are nontrivial and pairwise distinct
/// as unordered pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MonoidPresentation {
    generators: Vec<GeneratorName>,
    relations: Vec<Relation>,
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for MonoidPresentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            generators: Vec<GeneratorName>,
            relations: Vec<Relation>,
        }
        let raw = Raw::deserialize(d)?;
        Self::new(raw.generators, raw.relations).map_err(serde::de::Error::custom)
    }
}

/// One step of generator elimination: `generator` was replaced by `image`,
/// justified by `relation` of the presentation it was removed from.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonoidSubstitution {
    pub generator: GeneratorName,
    pub image: Element,
    pub relation: Relation,
}

/// Maps an element of the original presentation through every substitution of
/// an elimination log.
pub fn apply_log(log: &[MonoidSubstitution], e: &Element) -> Element {
    log.iter()
        .fold(e.clone(), |acc, s| acc.substitute(&s.generator, &s.image))
}

impl MonoidPresentation {
    pub fn new(
        generators: Vec<GeneratorName>,
        relations: Vec<Relation>,
    ) -> Result<Self, PresentationError> {
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(PresentationError::DuplicateGenerator(g.clone()));
            }
        }
        let mut kept: Vec<Relation> = Vec::with_capacity(relations.len());
        for r in relations {
            for side in r.sides() {
                if let Some((g, _)) = side.terms().find(|(g, _)| !generators.contains(g)) {
                    return Err(PresentationError::UnknownGenerator(g.clone()));
                }
            }
            if !r.is_trivial() && !kept.contains(&r) {
                kept.push(r);
            }
        }
        Ok(Self {
            generators,
            relations: kept,
        })
    }

    /// Free commutative monoid on the given generators.
    pub fn free(generators: Vec<GeneratorName>) -> Self {
        Self::new(generators, Vec::new()).expect("distinct generators")
    }

    pub fn generators(&self) -> &[GeneratorName] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn generator_index(&self, g: &GeneratorName) -> Option<usize> {
        self.generators.iter().position(|x| x == g)
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    /// Coordinates in generator order.
    pub fn to_dense(&self, e: &Element) -> Result<Vec<u64>, PresentationError> {
        let mut v = alloc::vec![0; self.generators.len()];
        for (g, c) in e.terms() {
            let i = self
                .generator_index(g)
                .ok_or_else(|| PresentationError::UnknownGenerator(g.clone()))?;
            v[i] = c;
        }
        Ok(v)
    }

    pub fn from_dense(&self, v: &[u64]) -> Element {
        Element::from_terms(self.generators.iter().cloned().zip(v.iter().copied()))
    }

    /// True when every relation has equal total degree on both sides.
    pub fn is_degree_preserving(&self) -> bool {
        self.relations
            .iter()
            .all(|r| r.lhs.total_degree() == r.rhs.total_degree())
    }

    fn isolated_image(&self, y: &GeneratorName, relation: usize) -> Option<Element> {
        let r = &self.relations[relation];
        let unit = Element::unit(y.clone());
        if r.lhs == unit && r.rhs.get(y) == 0 {
            Some(r.rhs.clone())
        } else if r.rhs == unit && r.lhs.get(y) == 0 {
            Some(r.lhs.clone())
        } else {
            None
        }
    }

    /// Removes `y` using relation `relation`, which must read `y = Σ n_x x` with
    /// `y` absent on the right.
    pub fn eliminate_generator(
        &self,
        y: &GeneratorName,
        relation: usize,
    ) -> Result<(Self, MonoidSubstitution), PresentationError> {
        if self.generator_index(y).is_none() {
            return Err(PresentationError::UnknownGenerator(y.clone()));
        }
        if relation >= self.relations.len() {
            return Err(PresentationError::RelationOutOfRange {
                index: relation,
                count: self.relations.len(),
            });
        }
        let image =
            self.isolated_image(y, relation)
                .ok_or_else(|| PresentationError::NotEliminable {
                    generator: y.clone(),
                    relation,
                })?;
        let generators = self
            .generators
            .iter()
            .filter(|g| *g != y)
            .cloned()
            .collect();
        let relations = self
            .relations
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != relation)
            .map(|(_, r)| Relation::new(r.lhs.substitute(y, &image), r.rhs.substitute(y, &image)))
            .collect();
        let step = MonoidSubstitution {
            generator: y.clone(),
            image,
            relation: self.relations[relation].clone(),
        };
        Ok((Self::new(generators, relations)?, step))
    }

    /// Eliminates generators until none can be removed. Candidates are scanned
    /// auxiliary generators first, then vertices; within each class relation by
    /// relation, and within a relation in generator order.
    pub fn auto_simplify(&self) -> (Self, Vec<MonoidSubstitution>) {
        let mut current = self.clone();
        let mut log = Vec::new();
        'outer: loop {
            for want_q in [true, false] {
                for rel in 0..current.relations.len() {
                    for y in current.generators.iter().filter(|g| g.is_q() == want_q) {
                        if current.isolated_image(y, rel).is_some() {
                            let y = y.clone();
                            let (next, step) = current
                                .eliminate_generator(&y, rel)
                                .expect("eliminable pair checked above");
                            current = next;
                            log.push(step);
                            continue 'outer;
                        }
                    }
                }
            }
            return (current, log);
        }
    }
}

impl fmt::Display for MonoidPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(ToString::to_string).collect();
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| r.render(&self.generators))
            .collect();
        write!(f, "<{} | {}>", gens.join(", "), rels.join("; "))
    }
}

/// Abelian group presentation: one integer row per relation (`lhs − rhs`).
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroupPresentation {
    pub generators: Vec<GeneratorName>,
    #[cfg_attr(feature = "serde", serde(with = "crate::bigint_serde::matrix"))]
    pub relation_matrix: IntMatrix,
}

/// Group elimination step: `generator = Σ coefficient · other`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSubstitution {
    pub generator: GeneratorName,
    pub image: Vec<(GeneratorName, BigInt)>,
}

impl GroupPresentation {
    pub fn invariants(&self) -> (AbelianGroupInvariants, SnfDecomposition) {
        AbelianGroupInvariants::of_presentation(self.generators.len(), &self.relation_matrix)
    }

    fn unit_coefficient(&self, y: usize, row: usize) -> Option<BigInt> {
        let c = &self.relation_matrix[(row, y)];
        c.abs().is_one().then(|| c.clone())
    }

    /// Removes `y` using relation row `relation`, in which `y` has coefficient ±1.
    pub fn eliminate_generator(
        &self,
        y: &GeneratorName,
        relation: usize,
    ) -> Result<(Self, GroupSubstitution), PresentationError> {
        let yi = self
            .generators
            .iter()
            .position(|g| g == y)
            .ok_or_else(|| PresentationError::UnknownGenerator(y.clone()))?;
        let m = &self.relation_matrix;
        if relation >= m.rows() {
            return Err(PresentationError::RelationOutOfRange {
                index: relation,
                count: m.rows(),
            });
        }
        let c = self.unit_coefficient(yi, relation).ok_or_else(|| {
            PresentationError::NotEliminable {
                generator: y.clone(),
                relation,
            }
        })?;
        let pivot_row = m.row(relation);
        // c·y + Σ r_x x = 0  ⇒  y = −c · Σ r_x x
        let image = self
            .generators
            .iter()
            .zip(pivot_row)
            .enumerate()
            .filter(|&(j, (_, r))| j != yi && !r.is_zero())
            .map(|(_, (g, r))| (g.clone(), -(&c * r)))
            .collect();
        let keep_cols: Vec<usize> = (0..m.cols()).filter(|&j| j != yi).collect();
        let mut out = IntMatrix::zeros(0, keep_cols.len());
        for i in (0..m.rows()).filter(|&i| i != relation) {
            let factor = &m[(i, yi)] * &c;
            let row: Vec<BigInt> = keep_cols
                .iter()
                .map(|&j| &m[(i, j)] - &factor * &pivot_row[j])
                .collect();
            out.push_row(row);
        }
        let generators = keep_cols
            .iter()
            .map(|&j| self.generators[j].clone())
            .collect();
        Ok((
            Self {
                generators,
                relation_matrix: out,
            },
            GroupSubstitution {
                generator: y.clone(),
                image,
            },
        ))
    }

    fn simplify_classes(&self, classes: &[bool]) -> (Self, Vec<GroupSubstitution>) {
        let mut current = self.clone();
        let mut log = Vec::new();
        'outer: loop {
            for &want_q in classes {
                for rel in 0..current.relation_matrix.rows() {
                    for (yi, y) in current.generators.iter().enumerate() {
                        if y.is_q() == want_q && current.unit_coefficient(yi, rel).is_some() {
                            let y = y.clone();
                            let (next, step) = current
                                .eliminate_generator(&y, rel)
                                .expect("eliminable pair checked above");
                            current = next;
                            log.push(step);
                            continue 'outer;
                        }
                    }
                }
            }
            return (current, log);
        }
    }

    /// Same scan order as [`MonoidPresentation::auto_simplify`], with any ±1
    /// coefficient counting as eliminable.
    pub fn auto_simplify(&self) -> (Self, Vec<GroupSubstitution>) {
        self.simplify_classes(&[true, false])
    }

    /// Eliminates only the auxiliary generators, leaving a presentation on vertices.
    pub fn eliminate_q_generators(&self) -> (Self, Vec<GroupSubstitution>) {
        self.simplify_classes(&[true])
    }
}

/// Builds `M(E,w)`: generators are the vertices, each followed by its
/// `q:v:1 … q:v:(k_v−1)`, and for every vertex and `1 ≤ i ≤ k_v` the relation
/// `q_{i−1} + (w_i − w_{i−1})·v = q_i + Σ_{w(e)=w_i} r(e)` with `q_0 = q_{k_v} = 0`.
pub fn build_v_monoid(g: &WeightedGraph) -> MonoidPresentation {
    let mut generators = Vec::new();
    let mut relations = Vec::new();
    for v in 0..g.vertex_count() {
        let name = g.vertex_name(v);
        generators.push(GeneratorName::vertex(name));
        let s = g.strata_at(v);
        for i in 1..s.k {
            generators.push(GeneratorName::q(name, i as u32));
        }
        let q = |i: usize| -> Element {
            if i == 0 || i == s.k {
                Element::zero()
            } else {
                Element::unit(GeneratorName::q(name, i as u32))
            }
        };
        for i in 1..=s.k {
            let mut lhs = q(i - 1);
            lhs.add_term(
                GeneratorName::vertex(name),
                u64::from(s.weights[i] - s.weights[i - 1]),
            );
            let mut rhs = q(i);
            for &e in s.level_edges(i) {
                rhs.add_term(GeneratorName::vertex(g.vertex_name(g.edge(e).range)), 1);
            }
            relations.push(Relation::new(lhs, rhs));
        }
    }
    MonoidPresentation::new(generators, relations).expect("generators declared by construction")
}

/// The classic graph monoid, defined when every vertex emits edges of a single weight.
pub fn build_graph_monoid_classic(
    g: &WeightedGraph,
) -> Result<MonoidPresentation, PresentationError> {
    for v in 0..g.vertex_count() {
        let k = g.strata_at(v).k;
        if k > 1 {
            return Err(PresentationError::NotClassic {
                vertex: g.vertex_name(v).into(),
                k,
            });
        }
    }
    Ok(build_v_monoid(g))
}

/// K₀ presentation on the vertices: one row `w(v)·v − Σ_{e ∈ s⁻¹(v)} r(e)` per
/// emitting vertex.
pub fn build_k0(g: &WeightedGraph) -> GroupPresentation {
    let n = g.vertex_count();
    let mut m = IntMatrix::zeros(0, n);
    for v in g.emitting_vertices() {
        let mut row = alloc::vec![BigInt::zero(); n];
        row[v] += BigInt::from(g.weight_at(v));
        for &e in g.out_edges(v) {
            row[g.edge(e).range] -= BigInt::one();
        }
        m.push_row(row);
    }
    GroupPresentation {
        generators: g.vertices().iter().map(GeneratorName::vertex).collect(),
        relation_matrix: m,
    }
}

/// Universal group of a monoid presentation: same generators, rows `lhs − rhs`.
pub fn group_completion(p: &MonoidPresentation) -> GroupPresentation {
    let n = p.generators().len();
    let mut m = IntMatrix::zeros(0, n);
    for r in p.relations() {
        let l = p.to_dense(&r.lhs).expect("validated presentation");
        let rr = p.to_dense(&r.rhs).expect("validated presentation");
        m.push_row(
            l.iter()
                .zip(&rr)
                .map(|(&a, &b)| BigInt::from(a) - BigInt::from(b))
                .collect(),
        );
    }
    GroupPresentation {
        generators: p.generators().to_vec(),
        relation_matrix: m,
    }
}
