//! Checkable evidence for equality and inequality decisions.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::presentation::{Element, MonoidPresentation};

/// One move `context + from → context + to` along a relation, read
/// left-to-right when `forward`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Step<C = Element> {
    pub relation: usize,
    pub forward: bool,
    pub context: C,
}

/// A chain of relation moves from one element to another.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Trace {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step} refers to relation {relation}, which does not exist")]
    NoSuchRelation { step: usize, relation: usize },
    #[error("step {step} does not start from the current element")]
    Mismatch { step: usize },
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies every step starting at `start` and returns the final element.
    pub fn replay(&self, p: &MonoidPresentation, start: &Element) -> Result<Element, ReplayError> {
        let mut cur = start.clone();
        for (i, s) in self.steps.iter().enumerate() {
            let r = p
                .relations()
                .get(s.relation)
                .ok_or(ReplayError::NoSuchRelation {
                    step: i,
                    relation: s.relation,
                })?;
            let (from, to) = if s.forward {
                (&r.lhs, &r.rhs)
            } else {
                (&r.rhs, &r.lhs)
            };
            if &s.context + from != cur {
                return Err(ReplayError::Mismatch { step: i });
            }
            cur = &s.context + to;
        }
        Ok(cur)
    }

    /// True when the trace replays from `a` and ends at `b`.
    pub fn proves(&self, p: &MonoidPresentation, a: &Element, b: &Element) -> bool {
        self.replay(p, a).is_ok_and(|end| &end == b)
    }
}

/// Evidence that two elements are congruent.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EqualityCertificate {
    Trace(Trace),
    /// Both sides rewrite to this element under the engine's rewrite system;
    /// used when an explicit trace would be too long.
    CommonNormalForm(Element),
}

/// Evidence that two elements are not congruent.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Separation {
    /// A homomorphism to `ℤ` (modulus zero) or `ℤ/modulus`, given by its values
    /// on the generators, that kills every relation but not `a − b`.
    Functional {
        #[cfg_attr(feature = "serde", serde(with = "crate::bigint_serde::vec"))]
        values: Vec<BigInt>,
        #[cfg_attr(feature = "serde", serde(with = "crate::bigint_serde"))]
        modulus: BigInt,
    },
    /// Distinct irreducible forms under a confluent rewrite system.
    NormalForms { lhs: Element, rhs: Element },
    /// The full, finite class of `of`; the other element is not in it.
    ExhaustedClass { of: Element, class: Vec<Element> },
}

fn eval(values: &[BigInt], p: &MonoidPresentation, e: &Element) -> BigInt {
    e.terms()
        .map(|(g, c)| {
            let i = p
                .generator_index(g)
                .expect("element over presentation generators");
            &values[i] * BigInt::from(c)
        })
        .sum()
}

fn reduced(x: BigInt, modulus: &BigInt) -> BigInt {
    if modulus.is_zero() {
        x
    } else {
        x.mod_floor(modulus)
    }
}

impl Separation {
    /// Checks a functional or class certificate without any rewrite system.
    /// Normal-form certificates are checked by the engine that produced them.
    pub fn check_standalone(
        &self,
        p: &MonoidPresentation,
        a: &Element,
        b: &Element,
    ) -> Option<bool> {
        match self {
            Self::Functional { values, modulus } => {
                if values.len() != p.generators().len() {
                    return Some(false);
                }
                let kills = p.relations().iter().all(|r| {
                    reduced(eval(values, p, &r.lhs) - eval(values, p, &r.rhs), modulus).is_zero()
                });
                let separates =
                    !reduced(eval(values, p, a) - eval(values, p, b), modulus).is_zero();
                Some(kills && separates)
            }
            Self::ExhaustedClass { of, class } => {
                let other = if of == a {
                    b
                } else if of == b {
                    a
                } else {
                    return Some(false);
                };
                if !class.contains(of) || class.contains(other) {
                    return Some(false);
                }
                let closed = class
                    .iter()
                    .all(|x| neighbours(p, x).iter().all(|y| class.contains(y)));
                Some(closed)
            }
            Self::NormalForms { .. } => None,
        }
    }
}

/// Every element reachable from `x` by one relation move.
pub(crate) fn neighbours(p: &MonoidPresentation, x: &Element) -> Vec<Element> {
    let mut out = Vec::new();
    for r in p.relations() {
        for (from, to) in [(&r.lhs, &r.rhs), (&r.rhs, &r.lhs)] {
            if from.terms().all(|(g, c)| x.get(g) >= c) {
                let mut y = Element::zero();
                for (g, c) in x.terms() {
                    let left = c - from.get(g);
                    if left > 0 {
                        y.add_term(g.clone(), left);
                    }
                }
                out.push(&y + to);
            }
        }
    }
    out
}
