//! Breadth-first exploration of congruence classes by single relation moves.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use super::certificate::Step;
use super::completion::{apply, divides, Vector};

pub(crate) type Moves = [(Vector, Vector)];

/// Neighbours of `x` together with the step producing each.
pub(crate) fn moves<'a>(
    relations: &'a Moves,
    x: &'a [u64],
) -> impl Iterator<Item = (Vector, Step<Vector>)> + 'a {
    relations.iter().enumerate().flat_map(move |(i, (l, r))| {
        [(l, r, true), (r, l, false)]
            .into_iter()
            .filter(move |(from, _, _)| divides(from, x))
            .map(move |(from, to, forward)| {
                let context: Vector = x.iter().zip(from.iter()).map(|(a, b)| a - b).collect();
                (
                    apply(x, from, to),
                    Step {
                        relation: i,
                        forward,
                        context,
                    },
                )
            })
    })
}

pub(crate) enum Exploration {
    /// Steps leading from the first element to the second.
    Joined(Vec<Step<Vector>>),
    /// The class of the first (`true`) or second element was exhausted
    /// without meeting the other.
    Separated {
        first: bool,
        class: BTreeSet<Vector>,
    },
    Exhausted {
        nodes: usize,
    },
}

struct Side {
    parent: BTreeMap<Vector, Option<(Vector, Step<Vector>)>>,
    queue: VecDeque<Vector>,
}

impl Side {
    fn new(start: &[u64]) -> Self {
        let mut parent = BTreeMap::new();
        parent.insert(start.to_vec(), None);
        Self {
            parent,
            queue: VecDeque::from([start.to_vec()]),
        }
    }

    /// Steps from the side's root to `x`.
    fn path_to(&self, x: &[u64]) -> Vec<Step<Vector>> {
        let mut steps = Vec::new();
        let mut cur = x.to_vec();
        while let Some(Some((prev, step))) = self.parent.get(&cur) {
            steps.push(step.clone());
            cur = prev.clone();
        }
        steps.reverse();
        steps
    }
}

fn invert(steps: Vec<Step<Vector>>) -> impl Iterator<Item = Step<Vector>> {
    steps.into_iter().rev().map(|s| Step {
        relation: s.relation,
        forward: !s.forward,
        context: s.context,
    })
}

/// Bidirectional search between `a` and `b`, visiting at most `node_cap`
/// elements in total.
pub(crate) fn bidirectional(
    relations: &Moves,
    a: &[u64],
    b: &[u64],
    node_cap: usize,
) -> Exploration {
    if a == b {
        return Exploration::Joined(Vec::new());
    }
    let mut sides = [Side::new(a), Side::new(b)];
    loop {
        for (s, side) in sides.iter().enumerate() {
            if side.queue.is_empty() {
                let class = side.parent.keys().cloned().collect();
                return Exploration::Separated {
                    first: s == 0,
                    class,
                };
            }
        }
        let nodes = sides[0].parent.len() + sides[1].parent.len();
        if nodes > node_cap {
            return Exploration::Exhausted { nodes };
        }
        // expand the smaller frontier one full level
        let s = if sides[0].queue.len() <= sides[1].queue.len() {
            0
        } else {
            1
        };
        let level = sides[s].queue.len();
        for _ in 0..level {
            let x = sides[s].queue.pop_front().expect("level size");
            for (y, step) in moves(relations, &x) {
                if sides[s].parent.contains_key(&y) {
                    continue;
                }
                sides[s].parent.insert(y.clone(), Some((x.clone(), step)));
                if sides[1 - s].parent.contains_key(&y) {
                    let from_a = sides[0].path_to(&y);
                    let from_b = sides[1].path_to(&y);
                    let mut steps = from_a;
                    steps.extend(invert(from_b));
                    return Exploration::Joined(steps);
                }
                sides[s].queue.push_back(y);
            }
        }
    }
}

/// Walks the class of `a` breadth-first, calling `visit` on each element until
/// it returns `false`. Stops growing once `node_cap` elements are known.
pub(crate) fn enumerate_class(
    relations: &Moves,
    a: &[u64],
    node_cap: usize,
    mut visit: impl FnMut(&[u64]) -> bool,
) -> ClassWalk {
    let mut seen: BTreeSet<Vector> = BTreeSet::new();
    let mut queue = VecDeque::from([a.to_vec()]);
    seen.insert(a.to_vec());
    while let Some(x) = queue.pop_front() {
        if !visit(&x) {
            return ClassWalk::Stopped;
        }
        for (y, _) in moves(relations, &x) {
            if seen.contains(&y) {
                continue;
            }
            if seen.len() >= node_cap {
                return ClassWalk::Truncated(seen);
            }
            seen.insert(y.clone());
            queue.push_back(y);
        }
    }
    ClassWalk::Complete(seen)
}

pub(crate) enum ClassWalk {
    Complete(BTreeSet<Vector>),
    Truncated(BTreeSet<Vector>),
    Stopped,
}
