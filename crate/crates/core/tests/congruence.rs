use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;
use wmk_core::engine::{is_atom, module_type, AtomVerdict, ModuleType};
use wmk_core::{
    Bounds, CongruenceEngine, Element, GeneratorName, MonoidPresentation, Relation, Verdict,
};

const NAMES: [&str; 3] = ["a", "b", "c"];

fn gens(n: usize) -> Vec<GeneratorName> {
    NAMES[..n]
        .iter()
        .map(|s| GeneratorName::vertex(*s))
        .collect()
}

fn element(v: &[u64]) -> Element {
    Element::from_terms(gens(v.len()).into_iter().zip(v.iter().copied()))
}

/// Plain breadth-first closure of `a`; `None` when it outgrows `cap`.
fn closure(rels: &[(Vec<u64>, Vec<u64>)], a: &[u64], cap: usize) -> Option<BTreeSet<Vec<u64>>> {
    let mut seen = BTreeSet::from([a.to_vec()]);
    let mut queue = VecDeque::from([a.to_vec()]);
    while let Some(x) = queue.pop_front() {
        for (l, r) in rels {
            for (from, to) in [(l, r), (r, l)] {
                if from.iter().zip(&x).all(|(f, y)| f <= y) {
                    let y: Vec<u64> = x
                        .iter()
                        .zip(from)
                        .zip(to)
                        .map(|((x, f), t)| x - f + t)
                        .collect();
                    if seen.insert(y.clone()) {
                        if seen.len() > cap {
                            return None;
                        }
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    Some(seen)
}

fn oracle(rels: &[(Vec<u64>, Vec<u64>)], a: &[u64], b: &[u64], cap: usize) -> Verdict {
    for (x, y) in [(a, b), (b, a)] {
        if let Some(class) = closure(rels, x, cap) {
            return if class.contains(y) {
                Verdict::Equal
            } else {
                Verdict::NotEqual
            };
        }
    }
    Verdict::Unknown
}

#[derive(Debug, Clone)]
struct Instance {
    n: usize,
    rels: Vec<(Vec<u64>, Vec<u64>)>,
}

impl Instance {
    fn presentation(&self) -> MonoidPresentation {
        MonoidPresentation::new(
            gens(self.n),
            self.rels
                .iter()
                .map(|(l, r)| Relation::new(element(l), element(r)))
                .collect(),
        )
        .unwrap()
    }
}

fn vector(n: usize, max: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..=max, n)
}

fn instance() -> impl Strategy<Value = Instance> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec((vector(n, 3), vector(n, 3)), 0..=2)
            .prop_map(move |rels| Instance { n, rels })
    })
}

fn bounded(n: usize) -> impl Strategy<Value = Vec<u64>> {
    vector(n, 8).prop_filter("total at most 8", |v| v.iter().sum::<u64>() <= 8)
}

fn instance_with_elements(k: usize) -> impl Strategy<Value = (Instance, Vec<Vec<u64>>)> {
    instance().prop_flat_map(move |inst| {
        let n = inst.n;
        (Just(inst), prop::collection::vec(bounded(n), k))
    })
}

fn small_bounds() -> Bounds {
    Bounds {
        nodes: 20_000,
        ..Bounds::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn agrees_with_search_oracle((inst, xs) in instance_with_elements(2)) {
        let eng = CongruenceEngine::with_bounds(inst.presentation(), small_bounds());
        let (a, b) = (element(&xs[0]), element(&xs[1]));
        let d = eng.equal(&a, &b).unwrap();
        let o = oracle(&inst.rels, &xs[0], &xs[1], 20_000);
        if d.verdict() != Verdict::Unknown && o != Verdict::Unknown {
            prop_assert_eq!(d.verdict(), o);
        }
        prop_assert!(eng.check_decision(&d, &a, &b));
    }

    #[test]
    fn reflexive_and_symmetric((inst, xs) in instance_with_elements(2)) {
        let eng = CongruenceEngine::with_bounds(inst.presentation(), small_bounds());
        let (a, b) = (element(&xs[0]), element(&xs[1]));
        prop_assert_eq!(eng.equal(&a, &a).unwrap().verdict(), Verdict::Equal);
        let ab = eng.equal(&a, &b).unwrap().verdict();
        let ba = eng.equal(&b, &a).unwrap().verdict();
        if ab != Verdict::Unknown && ba != Verdict::Unknown {
            prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn transitive((inst, xs) in instance_with_elements(3)) {
        let eng = CongruenceEngine::with_bounds(inst.presentation(), small_bounds());
        let e: Vec<Element> = xs.iter().map(|x| element(x)).collect();
        let ab = eng.equal(&e[0], &e[1]).unwrap().verdict();
        let bc = eng.equal(&e[1], &e[2]).unwrap().verdict();
        let ac = eng.equal(&e[0], &e[2]).unwrap().verdict();
        if ab == Verdict::Equal && bc == Verdict::Equal {
            prop_assert_ne!(ac, Verdict::NotEqual);
        }
    }

    #[test]
    fn additive((inst, xs) in instance_with_elements(3)) {
        let eng = CongruenceEngine::with_bounds(inst.presentation(), small_bounds());
        let e: Vec<Element> = xs.iter().map(|x| element(x)).collect();
        if eng.equal(&e[0], &e[1]).unwrap().verdict() == Verdict::Equal {
            let d = eng.equal(&(&e[0] + &e[2]), &(&e[1] + &e[2])).unwrap();
            prop_assert_ne!(d.verdict(), Verdict::NotEqual);
        }
    }

    #[test]
    fn equality_implies_lattice_membership((inst, xs) in instance_with_elements(2)) {
        let eng = CongruenceEngine::with_bounds(inst.presentation(), small_bounds());
        if eng.equal(&element(&xs[0]), &element(&xs[1])).unwrap().verdict() == Verdict::Equal {
            let diff: Vec<num_bigint::BigInt> =
                xs[0].iter().zip(&xs[1]).map(|(&a, &b)| num_bigint::BigInt::from(a) - b).collect();
            prop_assert!(eng.difference_lattice().contains(&diff));
        }
    }

    #[test]
    fn finished_completion_is_confluent(inst in instance()) {
        let eng = CongruenceEngine::new(inst.presentation());
        if eng.is_complete() {
            prop_assert!(eng.is_confluent());
        }
    }

    #[test]
    fn module_type_is_minimal(inst in instance()) {
        let eng = CongruenceEngine::with_bounds(inst.presentation(), small_bounds());
        let u = GeneratorName::vertex("a");
        if let Ok(ModuleType::Found { n, k }) = module_type(&eng, &u, 6, 6) {
            let mult = |m: u64| Element::from_terms([(u.clone(), m)]);
            prop_assert_eq!(eng.equal(&mult(n), &mult(n + k)).unwrap().verdict(), Verdict::Equal);
            for n2 in 1..=n {
                let kmax = if n2 == n { k - 1 } else { 6 };
                for k2 in 1..=kmax {
                    prop_assert_eq!(
                        eng.equal(&mult(n2), &mult(n2 + k2)).unwrap().verdict(),
                        Verdict::NotEqual
                    );
                }
            }
        }
    }

    #[test]
    fn atom_witnesses_are_genuine((inst, xs) in instance_with_elements(1)) {
        let eng = CongruenceEngine::with_bounds(inst.presentation(), small_bounds());
        let a = element(&xs[0]);
        let bounds = Bounds { nodes: 2_000, ..Bounds::default() };
        if let Ok(AtomVerdict::No { left, right }) = is_atom(&eng, &a, &bounds) {
            prop_assert_eq!(eng.equal(&(&left + &right), &a).unwrap().verdict(), Verdict::Equal);
            prop_assert_eq!(eng.equal(&left, &Element::zero()).unwrap().verdict(), Verdict::NotEqual);
            prop_assert_eq!(eng.equal(&right, &Element::zero()).unwrap().verdict(), Verdict::NotEqual);
        }
    }
}

#[test]
fn concurrent_queries_match_sequential_ones() {
    fn assert_sync<T: Send + Sync>() {}
    assert_sync::<CongruenceEngine>();
    let rels = [
        (vec![2, 0, 0], vec![0, 1, 1]),
        (vec![1, 1, 0], vec![0, 0, 2]),
    ];
    let p = MonoidPresentation::new(
        gens(3),
        rels.iter()
            .map(|(l, r)| Relation::new(element(l), element(r)))
            .collect(),
    )
    .unwrap();
    let eng = CongruenceEngine::new(p);
    let queries: Vec<(Element, Element)> = (0..4u64)
        .flat_map(|i| (0..4u64).map(move |j| (element(&[i, j, 1]), element(&[j, 1, i]))))
        .collect();
    let sequential: Vec<Verdict> = queries
        .iter()
        .map(|(a, b)| eng.equal(a, b).unwrap().verdict())
        .collect();
    let parallel: Vec<Vec<Verdict>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..4)
            .map(|_| {
                s.spawn(|| {
                    queries
                        .iter()
                        .map(|(a, b)| eng.equal(a, b).unwrap().verdict())
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for run in parallel {
        assert_eq!(run, sequential);
    }
}
