//! Word problem for finitely presented commutative monoids.
//!
//! [`CongruenceEngine::equal`] decides `a ≈ b` in three stages:
//!
//! 1. The difference lattice: if `a − b` is not an integer combination of the
//!    relation differences, the elements are distinct, witnessed by a
//!    homomorphism to `ℤ` or `ℤ/d` read off a Smith normal form.
//! 2. Binomial completion: both sides are rewritten to normal form. A common
//!    normal form proves equality; distinct normal forms prove inequality when
//!    the completion finished.
//! 3. Bidirectional breadth-first search over single relation moves, used when
//!    the completion was capped. An exhausted class proves inequality.
//!
//! Otherwise the verdict is [`Verdict::Unknown`].

mod certificate;
mod completion;
mod invariants;
mod search;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::lattice::{smith_normal_form, Lattice, SnfDecomposition};
use crate::presentation::{
    group_completion, Element, GeneratorName, MonoidPresentation, PresentationError, Relation,
};

pub use certificate::{EqualityCertificate, ReplayError, Separation, Step, Trace};
pub use invariants::{
    atoms_up_to, fingerprint, infinite_certificate, is_atom, module_type, refinement_check,
    refinement_or_simplified, verify_elimination, AtomVerdict, EliminationCheck, Fingerprint,
    InfiniteCertificate, InfinitenessVerdict, ModuleType, RefinementVerdict, RefinementWitness,
};

use completion::{Completion, Vector};
use search::{ClassWalk, Exploration};

/// Search limits. Every limit turns into an honest `Unknown` when hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bounds {
    /// Critical pairs processed by the completion.
    pub pairs: usize,
    /// Elements visited by a breadth-first search.
    pub nodes: usize,
    /// Total degree for atom and refinement searches.
    pub degree: u64,
    /// Largest `n` tried by [`module_type`].
    pub n_max: u64,
    /// Largest `k` tried by [`module_type`].
    pub k_max: u64,
    /// Longest explicit equality trace before falling back to a normal-form
    /// certificate.
    pub trace_steps: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            pairs: 100_000,
            nodes: 100_000,
            degree: 8,
            n_max: 10,
            k_max: 10,
            trace_steps: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Equal,
    NotEqual,
    Unknown,
}

/// Outcome of an equality query together with its evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "verdict", rename_all = "snake_case"))]
pub enum Decision {
    Equal {
        certificate: EqualityCertificate,
    },
    NotEqual {
        certificate: Separation,
    },
    Unknown {
        pairs_processed: usize,
        nodes_visited: usize,
    },
}

impl Decision {
    pub fn verdict(&self) -> Verdict {
        match self {
            Self::Equal { .. } => Verdict::Equal,
            Self::NotEqual { .. } => Verdict::NotEqual,
            Self::Unknown { .. } => Verdict::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("element is congruent to zero")]
    ZeroElement,
    #[error("inconclusive: {0}")]
    Inconclusive(alloc::string::String),
    #[error("generator `{0}` is missing from the presentation")]
    MissingGenerator(GeneratorName),
    #[error("an equality expected to fail was proved: {0}")]
    Contradiction(alloc::string::String),
}

/// Result of [`CongruenceEngine::class_enumerate`].
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "status", content = "elements", rename_all = "snake_case")
)]
pub enum ClassEnumeration {
    Complete(Vec<Element>),
    Truncated(Vec<Element>),
}

impl ClassEnumeration {
    pub fn elements(&self) -> &[Element] {
        match self {
            Self::Complete(v) | Self::Truncated(v) => v,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Self::Complete(_))
    }
}

/// Decision procedure for one presentation. Construction runs the completion;
/// afterwards the engine is immutable, so queries may run concurrently.
#[derive(Clone, Debug)]
pub struct CongruenceEngine {
    presentation: MonoidPresentation,
    relations: Vec<(Vector, Vector)>,
    lattice: Lattice,
    snf: SnfDecomposition,
    completion: Completion,
    bounds: Bounds,
}

impl CongruenceEngine {
    pub fn new(presentation: MonoidPresentation) -> Self {
        Self::with_bounds(presentation, Bounds::default())
    }

    pub fn with_bounds(presentation: MonoidPresentation, bounds: Bounds) -> Self {
        let relations: Vec<(Vector, Vector)> = presentation
            .relations()
            .iter()
            .map(|r| {
                (
                    presentation
                        .to_dense(&r.lhs)
                        .expect("validated presentation"),
                    presentation
                        .to_dense(&r.rhs)
                        .expect("validated presentation"),
                )
            })
            .collect();
        let diffs = group_completion(&presentation).relation_matrix;
        let lattice = Lattice::from_generators(&diffs);
        let snf = smith_normal_form(&diffs);
        let completion = Completion::run(&relations, bounds.pairs);
        Self {
            presentation,
            relations,
            lattice,
            snf,
            completion,
            bounds,
        }
    }

    pub fn presentation(&self) -> &MonoidPresentation {
        &self.presentation
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    /// Hermite basis of the lattice spanned by `lhs − rhs` over all relations.
    pub fn difference_lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn difference_snf(&self) -> &SnfDecomposition {
        &self.snf
    }

    /// Whether the completion finished within the pair cap.
    pub fn is_complete(&self) -> bool {
        self.completion.is_complete()
    }

    pub fn pairs_processed(&self) -> usize {
        self.completion.pairs_processed()
    }

    /// Rechecks every critical pair of the current rewrite rules.
    pub fn is_confluent(&self) -> bool {
        self.completion.is_confluent()
    }

    /// Current rewrite rules, each read as `lhs → rhs`.
    pub fn rewrite_rules(&self) -> Vec<Relation> {
        self.completion
            .active_rules()
            .map(|r| {
                Relation::new(
                    self.presentation.from_dense(&r.lhs),
                    self.presentation.from_dense(&r.rhs),
                )
            })
            .collect()
    }

    pub fn normal_form(&self, a: &Element) -> Result<Element, EngineError> {
        let x = self.presentation.to_dense(a)?;
        Ok(self
            .presentation
            .from_dense(&self.completion.normal_form(&x, false).0))
    }

    pub fn equal(&self, a: &Element, b: &Element) -> Result<Decision, EngineError> {
        let x = self.presentation.to_dense(a)?;
        let y = self.presentation.to_dense(b)?;
        Ok(self.equal_dense(&x, &y))
    }

    pub(crate) fn relations_dense(&self) -> &[(Vector, Vector)] {
        &self.relations
    }

    pub(crate) fn dense(&self, a: &Element) -> Result<Vector, EngineError> {
        Ok(self.presentation.to_dense(a)?)
    }

    pub(crate) fn element(&self, x: &[u64]) -> Element {
        self.presentation.from_dense(x)
    }

    fn to_trace(&self, steps: Vec<Step<Vector>>) -> Trace {
        Trace {
            steps: steps
                .into_iter()
                .map(|s| Step {
                    relation: s.relation,
                    forward: s.forward,
                    context: self.element(&s.context),
                })
                .collect(),
        }
    }

    /// Separating functional for `x − y`, if the difference leaves the lattice.
    fn lattice_separation(&self, x: &[u64], y: &[u64]) -> Option<Separation> {
        let diff: Vec<BigInt> = x
            .iter()
            .zip(y)
            .map(|(&a, &b)| BigInt::from(a) - BigInt::from(b))
            .collect();
        if self.lattice.contains(&diff) {
            return None;
        }
        let n = diff.len();
        let v = &self.snf.v;
        for j in 0..n {
            let image: BigInt = (0..n).map(|i| &diff[i] * &v[(i, j)]).sum();
            let modulus = if j < self.snf.rank {
                self.snf.invariant_factors[j].clone()
            } else {
                BigInt::zero()
            };
            let nonzero = if modulus.is_zero() {
                !image.is_zero()
            } else {
                !image.mod_floor(&modulus).is_zero()
            };
            if nonzero {
                return Some(Separation::Functional {
                    values: (0..n).map(|i| v[(i, j)].clone()).collect(),
                    modulus,
                });
            }
        }
        unreachable!("lattice membership and Smith form disagree")
    }

    pub(crate) fn equal_dense(&self, x: &[u64], y: &[u64]) -> Decision {
        if x == y {
            return Decision::Equal {
                certificate: EqualityCertificate::Trace(Trace::default()),
            };
        }
        if let Some(sep) = self.lattice_separation(x, y) {
            return Decision::NotEqual { certificate: sep };
        }
        let (nx, tx) = self.completion.normal_form(x, true);
        let (ny, ty) = self.completion.normal_form(y, true);
        if nx == ny {
            let cap = self.bounds.trace_steps;
            let expanded = self
                .completion
                .expand(&tx, &self.relations, cap)
                .and_then(|mut fwd| {
                    let back = self.completion.expand(&ty, &self.relations, cap)?;
                    fwd.extend(back.into_iter().rev().map(|s| Step {
                        relation: s.relation,
                        forward: !s.forward,
                        context: s.context,
                    }));
                    (fwd.len() <= cap).then_some(fwd)
                });
            let certificate = match expanded {
                Some(steps) => EqualityCertificate::Trace(self.to_trace(steps)),
                None => EqualityCertificate::CommonNormalForm(self.element(&nx)),
            };
            return Decision::Equal { certificate };
        }
        if self.completion.is_complete() {
            return Decision::NotEqual {
                certificate: Separation::NormalForms {
                    lhs: self.element(&nx),
                    rhs: self.element(&ny),
                },
            };
        }
        match search::bidirectional(&self.relations, x, y, self.bounds.nodes) {
            Exploration::Joined(steps) => Decision::Equal {
                certificate: EqualityCertificate::Trace(self.to_trace(steps)),
            },
            Exploration::Separated { first, class } => Decision::NotEqual {
                certificate: Separation::ExhaustedClass {
                    of: self.element(if first { x } else { y }),
                    class: class.iter().map(|v| self.element(v)).collect(),
                },
            },
            Exploration::Exhausted { nodes } => Decision::Unknown {
                pairs_processed: self.completion.pairs_processed(),
                nodes_visited: nodes,
            },
        }
    }

    /// Independently checks an inequality certificate for `a` and `b`.
    pub fn check_separation(&self, sep: &Separation, a: &Element, b: &Element) -> bool {
        if let Some(ok) = sep.check_standalone(&self.presentation, a, b) {
            return ok;
        }
        let Separation::NormalForms { lhs, rhs } = sep else {
            return false;
        };
        lhs != rhs
            && self.completion.is_complete()
            && self.completion.is_confluent()
            && self.normal_form(a).as_ref() == Ok(lhs)
            && self.normal_form(b).as_ref() == Ok(rhs)
    }

    /// Checks any decision's certificate against `a` and `b`.
    pub fn check_decision(&self, d: &Decision, a: &Element, b: &Element) -> bool {
        match d {
            Decision::Equal {
                certificate: EqualityCertificate::Trace(t),
            } => t.proves(&self.presentation, a, b),
            Decision::Equal {
                certificate: EqualityCertificate::CommonNormalForm(nf),
            } => self.normal_form(a).as_ref() == Ok(nf) && self.normal_form(b).as_ref() == Ok(nf),
            Decision::NotEqual { certificate } => self.check_separation(certificate, a, b),
            Decision::Unknown { .. } => true,
        }
    }

    /// Closure of `a` under relation moves, up to `node_cap` elements.
    pub fn class_enumerate(
        &self,
        a: &Element,
        node_cap: usize,
    ) -> Result<ClassEnumeration, EngineError> {
        let x = self.dense(a)?;
        let to_elems = |s: BTreeSet<Vector>| s.iter().map(|v| self.element(v)).collect();
        Ok(
            match search::enumerate_class(&self.relations, &x, node_cap.max(1), |_| true) {
                ClassWalk::Complete(s) => ClassEnumeration::Complete(to_elems(s)),
                ClassWalk::Truncated(s) => ClassEnumeration::Truncated(to_elems(s)),
                ClassWalk::Stopped => unreachable!("visitor never stops"),
            },
        )
    }
}

/// Exhaustive bidirectional search with no completion, exposed as a reference
/// decision procedure.
pub fn search_equal(
    p: &MonoidPresentation,
    a: &Element,
    b: &Element,
    node_cap: usize,
) -> Result<Verdict, EngineError> {
    let rels: Vec<(Vector, Vector)> = p
        .relations()
        .iter()
        .map(|r| Ok((p.to_dense(&r.lhs)?, p.to_dense(&r.rhs)?)))
        .collect::<Result<_, PresentationError>>()?;
    Ok(
        match search::bidirectional(&rels, &p.to_dense(a)?, &p.to_dense(b)?, node_cap) {
            Exploration::Joined(_) => Verdict::Equal,
            Exploration::Separated { .. } => Verdict::NotEqual,
            Exploration::Exhausted { .. } => Verdict::Unknown,
        },
    )
}
