//! Invariants derived from equality decisions: atoms, module type,
//! infiniteness, refinement, and a combined fingerprint.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::completion::Vector;
use super::search::{self, ClassWalk};
use super::{Bounds, CongruenceEngine, EngineError, Verdict};
use crate::graph::WeightedGraph;
use crate::lattice::AbelianGroupInvariants;
use crate::presentation::{
    apply_log, group_completion, Element, GeneratorName, MonoidPresentation, MonoidSubstitution,
};

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "verdict", rename_all = "snake_case"))]
pub enum AtomVerdict {
    Yes,
    /// `a ≈ left + right` with both parts nonzero.
    No {
        left: Element,
        right: Element,
    },
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "result", rename_all = "snake_case"))]
pub enum ModuleType {
    Found { n: u64, k: u64 },
    NoneFound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "result", rename_all = "snake_case"))]
pub enum InfiniteCertificate {
    /// The classes of `n·generator`, `0 ≤ n ≤ bound`, are pairwise distinct.
    InfiniteByWeights {
        vertex: String,
        generator: GeneratorName,
        classes: Vec<Element>,
    },
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RefinementWitness {
    pub a1: Element,
    pub a2: Element,
    pub b1: Element,
    pub b2: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "verdict", rename_all = "snake_case"))]
pub enum RefinementVerdict {
    Satisfied {
        degree_bound: u64,
        classes_checked: usize,
    },
    /// `a1 + a2 ≈ b1 + b2` admits no refinement matrix.
    Fails {
        witness: RefinementWitness,
        degree_bound: u64,
    },
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "verdict", rename_all = "snake_case"))]
pub enum InfinitenessVerdict {
    /// The group completion has positive rank.
    InfiniteByRank {
        rank: usize,
    },
    /// No relation side is a multiple of `generator`, so every `n·generator`
    /// is alone in its class.
    InfiniteByFreeGenerator {
        generator: GeneratorName,
    },
    /// Every generator satisfies some `n·g ≈ (n+k)·g`.
    Finite,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Fingerprint {
    pub generator_count: usize,
    pub relation_count: usize,
    pub degree_bound: u64,
    /// One representative per atom class among elements of degree at most
    /// `degree_bound`.
    pub atoms: Vec<Element>,
    /// False when some atom test was inconclusive.
    pub atoms_complete: bool,
    pub group: AbelianGroupInvariants,
    pub degree_preserving: bool,
    pub refinement: RefinementVerdict,
    /// The refinement search ran on the simplified presentation.
    pub refinement_simplified: bool,
    pub infiniteness: InfinitenessVerdict,
}

impl Fingerprint {
    pub fn atom_count(&self) -> Option<usize> {
        self.atoms_complete.then_some(self.atoms.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "result", rename_all = "snake_case"))]
pub enum EliminationCheck {
    Verified,
    Failed { relation: usize },
    Inconclusive { relation: usize },
}

/// Calls `f` on every `b ≤ x` in lexicographic order until it returns `false`.
fn for_each_part(x: &[u64], mut f: impl FnMut(&[u64]) -> bool) -> bool {
    let mut b = vec![0u64; x.len()];
    loop {
        if !f(&b) {
            return false;
        }
        let mut i = x.len();
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if b[i] < x[i] {
                b[i] += 1;
                break;
            }
            b[i] = 0;
        }
    }
}

fn zero_is_isolated(eng: &CongruenceEngine) -> bool {
    eng.relations_dense()
        .iter()
        .all(|(l, r)| l.iter().any(|&c| c > 0) && r.iter().any(|&c| c > 0))
}

fn nonzero_verdict(eng: &CongruenceEngine, zero_isolated: bool, b: &[u64]) -> Verdict {
    if zero_isolated {
        return if b.iter().any(|&c| c > 0) {
            Verdict::NotEqual
        } else {
            Verdict::Equal
        };
    }
    eng.equal_dense(b, &vec![0; b.len()]).verdict()
}

/// Decides whether `a` is an atom by searching every split of every element of
/// its class.
pub fn is_atom(
    eng: &CongruenceEngine,
    a: &Element,
    bounds: &Bounds,
) -> Result<AtomVerdict, EngineError> {
    let x = eng.dense(a)?;
    atom_dense(eng, &x, bounds.nodes, zero_is_isolated(eng))
}

fn atom_dense(
    eng: &CongruenceEngine,
    x: &[u64],
    node_cap: usize,
    zero_isolated: bool,
) -> Result<AtomVerdict, EngineError> {
    match nonzero_verdict(eng, zero_isolated, x) {
        Verdict::Equal => return Err(EngineError::ZeroElement),
        Verdict::Unknown => return Ok(AtomVerdict::Unknown),
        Verdict::NotEqual => {}
    }
    let mut uncertain = false;
    let mut witness: Option<(Vector, Vector)> = None;
    // splits examined across the whole class; shares the node budget
    let mut budget = node_cap;
    let walk = search::enumerate_class(eng.relations_dense(), x, node_cap, |y| {
        for_each_part(y, |b| {
            if b.iter().all(|&c| c == 0) || b == y {
                return true;
            }
            if budget == 0 {
                uncertain = true;
                return false;
            }
            budget -= 1;
            let c: Vector = y.iter().zip(b).map(|(p, q)| p - q).collect();
            let vb = nonzero_verdict(eng, zero_isolated, b);
            let vc = nonzero_verdict(eng, zero_isolated, &c);
            if vb == Verdict::NotEqual && vc == Verdict::NotEqual {
                witness = Some((b.to_vec(), c));
                return false;
            }
            uncertain |= vb == Verdict::Unknown || vc == Verdict::Unknown;
            true
        })
    });
    Ok(match walk {
        ClassWalk::Stopped => match witness {
            Some((b, c)) => AtomVerdict::No {
                left: eng.element(&b),
                right: eng.element(&c),
            },
            None => AtomVerdict::Unknown,
        },
        ClassWalk::Complete(_) if !uncertain => AtomVerdict::Yes,
        _ => AtomVerdict::Unknown,
    })
}

/// Smallest `n ≥ 1`, then smallest `k ≥ 1`, with `n·u ≈ (n+k)·u`.
pub fn module_type(
    eng: &CongruenceEngine,
    u: &GeneratorName,
    n_max: u64,
    k_max: u64,
) -> Result<ModuleType, EngineError> {
    let i = eng
        .presentation()
        .generator_index(u)
        .ok_or_else(|| EngineError::MissingGenerator(u.clone()))?;
    let len = eng.presentation().generators().len();
    let multiple = |m: u64| {
        let mut v = vec![0; len];
        v[i] = m;
        v
    };
    for n in 1..=n_max {
        for k in 1..=k_max {
            match eng.equal_dense(&multiple(n), &multiple(n + k)).verdict() {
                Verdict::Equal => return Ok(ModuleType::Found { n, k }),
                Verdict::NotEqual => {}
                Verdict::Unknown => {
                    return Err(EngineError::Inconclusive(format!(
                        "{n}·{u} against {}·{u}",
                        n + k
                    )))
                }
            }
        }
    }
    Ok(ModuleType::NoneFound)
}

/// For the first vertex emitting more than one distinct weight, proves that
/// `n·q:v:1` for `0 ≤ n ≤ bound` are pairwise distinct.
pub fn infinite_certificate(
    g: &WeightedGraph,
    eng: &CongruenceEngine,
    bound: u64,
) -> Result<InfiniteCertificate, EngineError> {
    let Some(v) = (0..g.vertex_count()).find(|&v| g.strata_at(v).k > 1) else {
        return Ok(InfiniteCertificate::NotApplicable);
    };
    let vertex = String::from(g.vertex_name(v));
    let generator = GeneratorName::q(vertex.clone(), 1);
    let i = eng
        .presentation()
        .generator_index(&generator)
        .ok_or_else(|| EngineError::MissingGenerator(generator.clone()))?;
    let len = eng.presentation().generators().len();
    let vectors: Vec<Vector> = (0..=bound)
        .map(|n| {
            let mut x = vec![0; len];
            x[i] = n;
            x
        })
        .collect();
    for (m, xm) in vectors.iter().enumerate() {
        for (n, xn) in vectors.iter().enumerate().skip(m + 1) {
            match eng.equal_dense(xm, xn).verdict() {
                Verdict::NotEqual => {}
                Verdict::Equal => {
                    return Err(EngineError::Contradiction(format!(
                        "{m}·{generator} ≈ {n}·{generator}"
                    )))
                }
                Verdict::Unknown => {
                    return Err(EngineError::Inconclusive(format!(
                        "{m}·{generator} against {n}·{generator}"
                    )))
                }
            }
        }
    }
    Ok(InfiniteCertificate::InfiniteByWeights {
        vertex,
        generator,
        classes: vectors.iter().map(|x| eng.element(x)).collect(),
    })
}

/// Congruence classes of all elements up to a total degree, for a
/// degree-preserving presentation.
struct ClassIndex {
    id: BTreeMap<Vector, usize>,
    reps: Vec<Vector>,
}

impl ClassIndex {
    fn build(eng: &CongruenceEngine, degree_bound: u64) -> Self {
        let n = eng.presentation().generators().len();
        let mut index = Self {
            id: BTreeMap::new(),
            reps: Vec::new(),
        };
        for d in 0..=degree_bound {
            for x in compositions(d, n) {
                if index.id.contains_key(&x) {
                    continue;
                }
                let ClassWalk::Complete(class) =
                    search::enumerate_class(eng.relations_dense(), &x, usize::MAX, |_| true)
                else {
                    unreachable!("no node cap");
                };
                let cid = index.reps.len();
                for y in class {
                    index.id.insert(y, cid);
                }
                index.reps.push(x);
            }
            if n == 0 {
                break;
            }
        }
        index
    }

    fn of(&self, x: &[u64]) -> usize {
        self.id[x]
    }

    fn sum(&self, a: usize, b: usize) -> usize {
        let s: Vector = self.reps[a]
            .iter()
            .zip(&self.reps[b])
            .map(|(x, y)| x + y)
            .collect();
        self.of(&s)
    }
}

/// Vectors of length `n` with entries summing to `d`, lexicographically
/// decreasing.
fn compositions(d: u64, n: usize) -> Vec<Vector> {
    fn go(d: u64, n: usize, prefix: &mut Vector, out: &mut Vec<Vector>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=d).rev() {
            prefix.push(first);
            go(d - first, n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(d, n, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive refinement search over all classes of total degree at most
/// `degree_bound`. Only degree-preserving presentations are searched.
pub fn refinement_check(eng: &CongruenceEngine, degree_bound: u64) -> RefinementVerdict {
    if !eng.presentation().is_degree_preserving() {
        return RefinementVerdict::Inapplicable;
    }
    let index = ClassIndex::build(eng, degree_bound);
    let classes = index.reps.len();
    // ordered splits (class of b, class of x − b) over all members x of a class
    let mut splits: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); classes];
    for (x, &cid) in &index.id {
        for_each_part(x, |b| {
            let c: Vector = x.iter().zip(b).map(|(p, q)| p - q).collect();
            splits[cid].insert((index.of(b), index.of(&c)));
            true
        });
    }
    let zero = index.of(&vec![0; eng.presentation().generators().len()]);
    for cid in 0..classes {
        let decomps: Vec<(usize, usize)> = splits[cid]
            .iter()
            .filter(|&&(p, q)| p <= q && p != zero)
            .copied()
            .collect();
        for &(a1, a2) in decomps.iter().rev() {
            for &(b1, b2) in &decomps {
                if (a1, a2) == (b1, b2) {
                    continue;
                }
                let refinable = splits[a1].iter().any(|&(c11, c12)| {
                    splits[a2]
                        .iter()
                        .any(|&(c21, c22)| index.sum(c11, c21) == b1 && index.sum(c12, c22) == b2)
                });
                if !refinable {
                    let rep = |c: usize| eng.element(&index.reps[c]);
                    return RefinementVerdict::Fails {
                        witness: RefinementWitness {
                            a1: rep(a1),
                            a2: rep(a2),
                            b1: rep(b1),
                            b2: rep(b2),
                        },
                        degree_bound,
                    };
                }
            }
        }
    }
    RefinementVerdict::Satisfied {
        degree_bound,
        classes_checked: classes,
    }
}

fn infiniteness(
    eng: &CongruenceEngine,
    group: &AbelianGroupInvariants,
    bounds: &Bounds,
) -> InfinitenessVerdict {
    if group.free_rank > 0 {
        return InfinitenessVerdict::InfiniteByRank {
            rank: group.free_rank,
        };
    }
    let gens = eng.presentation().generators();
    for (i, g) in gens.iter().enumerate() {
        let escapes = |side: &Vector| side.iter().enumerate().any(|(j, &c)| j != i && c > 0);
        if eng
            .relations_dense()
            .iter()
            .all(|(l, r)| escapes(l) && escapes(r))
        {
            return InfinitenessVerdict::InfiniteByFreeGenerator {
                generator: g.clone(),
            };
        }
    }
    let all_torsion = gens.iter().all(|g| {
        matches!(
            module_type(eng, g, bounds.n_max, bounds.k_max),
            Ok(ModuleType::Found { .. })
        )
    });
    if all_torsion {
        InfinitenessVerdict::Finite
    } else {
        InfinitenessVerdict::Unknown
    }
}

/// Atom classes among elements of degree at most `degree_bound`, and whether
/// every test was conclusive.
/// One representative per atom class of degree at most `degree_bound`, and
/// whether every atom test was conclusive.
pub fn atoms_up_to(
    eng: &CongruenceEngine,
    degree_bound: u64,
    node_cap: usize,
) -> (Vec<Element>, bool) {
    let n = eng.presentation().generators().len();
    let zero_isolated = zero_is_isolated(eng);
    let mut found: Vec<Vector> = Vec::new();
    let mut complete = true;
    for d in 1..=degree_bound {
        if zero_isolated && d > 1 {
            // every element of degree ≥ 2 splits into two nonzero parts
            break;
        }
        for x in compositions(d, n) {
            match atom_dense(eng, &x, node_cap, zero_isolated) {
                Ok(AtomVerdict::Yes) => {
                    let mut fresh = true;
                    for y in &found {
                        match eng.equal_dense(&x, y).verdict() {
                            Verdict::Equal => fresh = false,
                            Verdict::Unknown => complete = false,
                            Verdict::NotEqual => {}
                        }
                    }
                    if fresh {
                        found.push(x);
                    }
                }
                Ok(AtomVerdict::No { .. }) | Err(EngineError::ZeroElement) => {}
                _ => complete = false,
            }
        }
    }
    (found.iter().map(|x| eng.element(x)).collect(), complete)
}

/// Runs [`refinement_check`] on the presentation, or on its simplification
/// when only the latter preserves degree. The flag reports which one was used.
pub fn refinement_or_simplified(
    eng: &CongruenceEngine,
    bounds: &Bounds,
) -> (RefinementVerdict, bool) {
    let p = eng.presentation();
    if p.is_degree_preserving() {
        return (refinement_check(eng, bounds.degree), false);
    }
    let (simple, _) = p.auto_simplify();
    if simple.is_degree_preserving() {
        let simple_eng = CongruenceEngine::with_bounds(simple, *bounds);
        (refinement_check(&simple_eng, bounds.degree), true)
    } else {
        (RefinementVerdict::Inapplicable, false)
    }
}

/// Bundles the bounded invariants of a presentation.
///
/// When the presentation is not degree-preserving but its simplification is,
/// the refinement search runs on the simplification.
pub fn fingerprint(eng: &CongruenceEngine, bounds: &Bounds) -> Fingerprint {
    let p = eng.presentation();
    let (group, _) = group_completion(p).invariants();
    let (atoms, atoms_complete) = atoms_up_to(eng, bounds.degree, bounds.nodes);
    let degree_preserving = p.is_degree_preserving();
    let (refinement, refinement_simplified) = refinement_or_simplified(eng, bounds);
    let infiniteness = infiniteness(eng, &group, bounds);
    Fingerprint {
        generator_count: p.generators().len(),
        relation_count: p.relations().len(),
        degree_bound: bounds.degree,
        atoms,
        atoms_complete,
        group,
        degree_preserving,
        refinement,
        refinement_simplified,
        infiniteness,
    }
}

/// Checks that every relation of `original`, pushed through the elimination
/// log, holds in the simplified presentation.
pub fn verify_elimination(
    original: &MonoidPresentation,
    log: &[MonoidSubstitution],
    simplified: &CongruenceEngine,
) -> Result<EliminationCheck, EngineError> {
    for (i, r) in original.relations().iter().enumerate() {
        let lhs = apply_log(log, &r.lhs);
        let rhs = apply_log(log, &r.rhs);
        match simplified.equal(&lhs, &rhs)?.verdict() {
            Verdict::Equal => {}
            Verdict::NotEqual => return Ok(EliminationCheck::Failed { relation: i }),
            Verdict::Unknown => return Ok(EliminationCheck::Inconclusive { relation: i }),
        }
    }
    Ok(EliminationCheck::Verified)
}
