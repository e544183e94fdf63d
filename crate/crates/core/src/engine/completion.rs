//! Completion of a commutative monoid presentation into a convergent rewrite
//! system.
//!
//! A relation `l = r` corresponds to the pure-difference binomial `x^l − x^r`,
//! and `a ≈ b` holds exactly when `x^a − x^b` lies in the ideal generated by
//! those binomials. Buchberger's algorithm on pure-difference binomials only
//! ever produces pure-difference binomials, so it runs entirely on pairs of
//! exponent vectors. Rules are oriented by graded reverse lexicographic order
//! over the generator sequence (first generator largest).
//!
//! Every rule remembers how it was derived, so a proof of `a ≈ b` found by
//! normal forms can be expanded into moves along the original relations.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::certificate::Step;

pub(crate) type Vector = Vec<u64>;

/// Graded reverse lexicographic comparison.
pub(crate) fn grevlex(a: &[u64], b: &[u64]) -> Ordering {
    let da: u64 = a.iter().sum();
    let db: u64 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

pub(crate) fn divides(small: &[u64], big: &[u64]) -> bool {
    small.iter().zip(big).all(|(s, b)| s <= b)
}

/// `x − from + to`, assuming `from ≤ x`.
pub(crate) fn apply(x: &[u64], from: &[u64], to: &[u64]) -> Vector {
    x.iter()
        .zip(from)
        .zip(to)
        .map(|((&x, &f), &t)| x - f + t)
        .collect()
}

fn sub(a: &[u64], b: &[u64]) -> Vector {
    a.iter().zip(b).map(|(&a, &b)| a - b).collect()
}

fn add(a: &[u64], b: &[u64]) -> Vector {
    a.iter().zip(b).map(|(&a, &b)| a + b).collect()
}

/// Application of a rule at `offset`: forward rewrites `offset + lhs` to
/// `offset + rhs`.
#[derive(Clone, Debug)]
pub(crate) struct RuleStep {
    rule: usize,
    forward: bool,
    offset: Vector,
}

impl RuleStep {
    fn reversed(&self) -> Self {
        Self {
            rule: self.rule,
            forward: !self.forward,
            offset: self.offset.clone(),
        }
    }
}

#[derive(Clone, Debug)]
enum Derivation {
    /// The rule is relation `relation`, read left-to-right when `forward`.
    Relation { relation: usize, forward: bool },
    /// Steps along earlier rules leading from the rule's lhs to its rhs.
    Chain(Vec<RuleStep>),
}

#[derive(Clone, Debug)]
pub(crate) struct Rule {
    pub(crate) lhs: Vector,
    pub(crate) rhs: Vector,
    alive: bool,
    derivation: Derivation,
}

#[derive(Clone, Debug)]
pub(crate) struct Completion {
    rules: Vec<Rule>,
    complete: bool,
    pairs_processed: usize,
}

fn reversed_chain(steps: &[RuleStep]) -> Vec<RuleStep> {
    steps.iter().rev().map(RuleStep::reversed).collect()
}

impl Completion {
    /// Runs Buchberger's algorithm on `relations` (pairs of exponent vectors),
    /// giving up after `pair_cap` critical pairs.
    pub(crate) fn run(relations: &[(Vector, Vector)], pair_cap: usize) -> Self {
        let mut c = Self {
            rules: Vec::new(),
            complete: false,
            pairs_processed: 0,
        };
        for (i, (l, r)) in relations.iter().enumerate() {
            let derivation = |forward| Derivation::Relation {
                relation: i,
                forward,
            };
            match grevlex(l, r) {
                Ordering::Greater => {
                    c.push_rule(l.clone(), r.clone(), derivation(true));
                }
                Ordering::Less => {
                    c.push_rule(r.clone(), l.clone(), derivation(false));
                }
                Ordering::Equal => {}
            }
        }
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        for j in 0..c.rules.len() {
            for i in 0..j {
                queue.push_back((i, j));
            }
        }
        while let Some((i, j)) = queue.pop_front() {
            if c.pairs_processed >= pair_cap {
                return c;
            }
            c.pairs_processed += 1;
            let (li, lj) = (&c.rules[i].lhs, &c.rules[j].lhs);
            if li.iter().zip(lj).all(|(&a, &b)| a == 0 || b == 0) {
                // coprime leading terms
                continue;
            }
            let lcm: Vector = li.iter().zip(lj).map(|(&a, &b)| a.max(b)).collect();
            let off_i = sub(&lcm, li);
            let off_j = sub(&lcm, lj);
            let si = add(&off_i, &c.rules[i].rhs);
            let sj = add(&off_j, &c.rules[j].rhs);
            let (ti, trace_i) = c.normal_form(&si, true);
            let (tj, trace_j) = c.normal_form(&sj, true);
            if ti == tj {
                continue;
            }
            let mut chain = reversed_chain(&trace_i);
            chain.push(RuleStep {
                rule: i,
                forward: false,
                offset: off_i,
            });
            chain.push(RuleStep {
                rule: j,
                forward: true,
                offset: off_j,
            });
            chain.extend(trace_j);
            // chain leads from ti to tj
            let new = if grevlex(&ti, &tj) == Ordering::Greater {
                c.push_rule(ti, tj, Derivation::Chain(chain))
            } else {
                c.push_rule(tj, ti, Derivation::Chain(reversed_chain(&chain)))
            };
            for k in 0..new {
                queue.push_back((k, new));
            }
        }
        c.complete = true;
        c.interreduce();
        c
    }

    fn push_rule(&mut self, lhs: Vector, rhs: Vector, derivation: Derivation) -> usize {
        self.rules.push(Rule {
            lhs,
            rhs,
            alive: true,
            derivation,
        });
        self.rules.len() - 1
    }

    /// Turns the completed basis into the reduced one: no lhs divisible by
    /// another, every rhs irreducible.
    fn interreduce(&mut self) {
        let n = self.rules.len();
        for i in 0..n {
            let redundant = (0..n).any(|j| {
                j != i
                    && self.rules[j].alive
                    && divides(&self.rules[j].lhs, &self.rules[i].lhs)
                    && (self.rules[j].lhs != self.rules[i].lhs || j < i)
            });
            if redundant {
                self.rules[i].alive = false;
            }
        }
        for i in 0..n {
            if !self.rules[i].alive {
                continue;
            }
            let rhs = self.rules[i].rhs.clone();
            let (nf, trace) = self.normal_form(&rhs, true);
            if nf == rhs {
                continue;
            }
            let zero = alloc::vec![0; rhs.len()];
            let mut chain = alloc::vec![RuleStep {
                rule: i,
                forward: true,
                offset: zero,
            }];
            chain.extend(trace);
            let lhs = self.rules[i].lhs.clone();
            self.rules[i].alive = false;
            self.push_rule(lhs, nf, Derivation::Chain(chain));
        }
    }

    pub(crate) fn is_complete(&self) -> bool {
        self.complete
    }

    pub(crate) fn pairs_processed(&self) -> usize {
        self.pairs_processed
    }

    pub(crate) fn active_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(|r| r.alive)
    }

    /// Rewrites `x` to an irreducible vector, recording the rule steps when asked.
    pub(crate) fn normal_form(&self, x: &[u64], record: bool) -> (Vector, Vec<RuleStep>) {
        let mut cur = x.to_vec();
        let mut trace = Vec::new();
        'outer: loop {
            for (idx, r) in self.rules.iter().enumerate() {
                if r.alive && divides(&r.lhs, &cur) {
                    let offset = sub(&cur, &r.lhs);
                    cur = add(&offset, &r.rhs);
                    if record {
                        trace.push(RuleStep {
                            rule: idx,
                            forward: true,
                            offset,
                        });
                    }
                    continue 'outer;
                }
            }
            return (cur, trace);
        }
    }

    /// Expands rule steps into moves along the original relations. Returns
    /// `None` once more than `cap` moves would be needed.
    pub(crate) fn expand(
        &self,
        steps: &[RuleStep],
        relations: &[(Vector, Vector)],
        cap: usize,
    ) -> Option<Vec<Step<Vector>>> {
        let mut out = Vec::new();
        // explicit stack of (rule, forward, offset)
        let mut stack: Vec<(usize, bool, Vector)> = steps
            .iter()
            .rev()
            .map(|s| (s.rule, s.forward, s.offset.clone()))
            .collect();
        while let Some((rule, forward, offset)) = stack.pop() {
            match &self.rules[rule].derivation {
                Derivation::Relation {
                    relation,
                    forward: f,
                } => {
                    if out.len() >= cap {
                        return None;
                    }
                    let _ = &relations[*relation];
                    out.push(Step {
                        relation: *relation,
                        forward: *f == forward,
                        context: offset,
                    });
                }
                Derivation::Chain(chain) => {
                    // push in reverse so the first step to execute is on top
                    if forward {
                        for s in chain.iter().rev() {
                            stack.push((s.rule, s.forward, add(&offset, &s.offset)));
                        }
                    } else {
                        for s in chain.iter() {
                            stack.push((s.rule, !s.forward, add(&offset, &s.offset)));
                        }
                    }
                }
            }
        }
        Some(out)
    }

    /// Checks that every critical pair of the active rules joins.
    pub(crate) fn is_confluent(&self) -> bool {
        let active: Vec<&Rule> = self.active_rules().collect();
        for (a, ri) in active.iter().enumerate() {
            for rj in &active[a + 1..] {
                let lcm: Vector = ri
                    .lhs
                    .iter()
                    .zip(&rj.lhs)
                    .map(|(&x, &y)| x.max(y))
                    .collect();
                let si = apply(&lcm, &ri.lhs, &ri.rhs);
                let sj = apply(&lcm, &rj.lhs, &rj.rhs);
                if self.normal_form(&si, false).0 != self.normal_form(&sj, false).0 {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn grevlex_orders_by_degree_then_last_variable() {
        assert_eq!(grevlex(&[0, 2], &[1, 0]), Ordering::Greater);
        // same degree: smaller exponent in the last variable wins
        assert_eq!(grevlex(&[2, 0], &[1, 1]), Ordering::Greater);
        assert_eq!(grevlex(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
    }

    #[test]
    fn single_loop_relation() {
        // 3v = 4v
        let c = Completion::run(&[(vec![3], vec![4])], 100);
        assert!(c.is_complete());
        assert_eq!(c.normal_form(&[7], false).0, vec![3]);
        assert_eq!(c.normal_form(&[2], false).0, vec![2]);
    }

    #[test]
    fn chain_expands_to_relation_moves() {
        // (v, q): v = q + v and 2v = v + q + q closes to a system where q·v → v
        let rels = vec![(vec![1, 0], vec![1, 1]), (vec![2, 0], vec![0, 3])];
        let c = Completion::run(&rels, 1000);
        assert!(c.is_complete());
        assert!(c.is_confluent());
        let (nf, trace) = c.normal_form(&[2, 2], true);
        let steps = c.expand(&trace, &rels, 10_000).unwrap();
        let mut cur = vec![2u64, 2];
        for s in &steps {
            let (from, to) = if s.forward {
                (&rels[s.relation].0, &rels[s.relation].1)
            } else {
                (&rels[s.relation].1, &rels[s.relation].0)
            };
            assert_eq!(cur, add(&s.context, from));
            cur = add(&s.context, to);
        }
        assert_eq!(cur, nf);
    }
}
