use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::graph::{EdgeIdx, VertexIdx, WeightedGraph};

/// A generator of `L_K(E,w)`. Indices start at 1; an index above the edge's
/// weight denotes zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Vertex(VertexIdx),
    Edge(EdgeIdx, u32),
    Star(EdgeIdx, u32),
}

impl Letter {
    /// Image under the involution.
    pub fn star(self) -> Self {
        match self {
            Self::Vertex(v) => Self::Vertex(v),
            Self::Edge(e, i) => Self::Star(e, i),
            Self::Star(e, i) => Self::Edge(e, i),
        }
    }

    fn render(self, g: &WeightedGraph, out: &mut String) {
        let _ = match self {
            Self::Vertex(v) => write!(out, "{}", g.vertex_name(v)),
            Self::Edge(e, i) => write!(out, "{}_{}", g.edge(e).id, i),
            Self::Star(e, i) => write!(out, "{}_{}*", g.edge(e).id, i),
        };
    }
}

/// A nonempty word in the generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarMonomial(Vec<Letter>);

impl StarMonomial {
    /// Panics on an empty word.
    pub fn new(letters: Vec<Letter>) -> Self {
        assert!(!letters.is_empty(), "monomials are nonempty words");
        Self(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Self(alloc::vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Self(w)
    }

    pub fn star(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.star()).collect())
    }

    pub fn render(&self, g: &WeightedGraph) -> String {
        let mut out = String::new();
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            l.render(g, &mut out);
        }
        out
    }
}

/// Finite rational combination of words. No zero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StarPolynomial {
    terms: BTreeMap<StarMonomial, BigRational>,
}

impl StarPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: StarMonomial, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn letter(l: Letter) -> Self {
        Self::monomial(StarMonomial::letter(l), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&StarMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &StarMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, m: StarMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }

    /// Involution: reverses words and swaps starred and unstarred letters.
    /// Coefficients are rational, so they are fixed.
    pub fn star(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.star(), c.clone());
        }
        out
    }

    pub fn render(&self, g: &WeightedGraph) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            if !abs.is_one() {
                let _ = write!(out, "{abs} ");
            }
            out.push_str(&m.render(g));
        }
        out
    }
}
