use wmk_core::engine::{fingerprint, is_atom, verify_elimination, AtomVerdict, EliminationCheck};
use wmk_core::presentation::apply_log;
use wmk_core::{build_v_monoid, Bounds, CongruenceEngine, Element, Verdict, WeightedGraph};

fn sample_graphs() -> Vec<(&'static str, WeightedGraph)> {
    let loops = |ws: &[i64]| {
        let ids = ["e", "f", "g", "h"];
        let edges: Vec<_> = ws
            .iter()
            .zip(ids)
            .map(|(&w, id)| (id, "v", "v", w))
            .collect();
        WeightedGraph::new(&["v"], &edges).unwrap()
    };
    vec![
        (
            "L",
            WeightedGraph::new(&["u", "v", "x"], &[("e", "v", "u", 2), ("f", "v", "x", 2)])
                .unwrap(),
        ),
        (
            "L'",
            WeightedGraph::new(&["u", "v", "x"], &[("e", "v", "u", 1), ("f", "v", "x", 2)])
                .unwrap(),
        ),
        (
            "two weights",
            WeightedGraph::new(&["u", "v"], &[("e", "v", "u", 1), ("f", "v", "u", 2)]).unwrap(),
        ),
        ("loops 12", loops(&[1, 2])),
        ("rose 3333", loops(&[3, 3, 3, 3])),
        ("rose 2333", loops(&[2, 3, 3, 3])),
    ]
}

fn bounds() -> Bounds {
    Bounds {
        degree: 3,
        nodes: 2_000,
        ..Bounds::default()
    }
}

#[test]
fn eliminations_are_mutually_inverse() {
    for (name, g) in sample_graphs() {
        let original = build_v_monoid(&g);
        let (simple, log) = original.auto_simplify();
        let orig_eng = CongruenceEngine::new(original.clone());
        let simple_eng = CongruenceEngine::new(simple.clone());
        assert_eq!(
            verify_elimination(&original, &log, &simple_eng).unwrap(),
            EliminationCheck::Verified,
            "{name}"
        );
        // Substituting then including is the identity on generators.
        for gen in original.generators() {
            let x = Element::unit(gen.clone());
            let image = apply_log(&log, &x);
            assert_eq!(
                orig_eng.equal(&x, &image).unwrap().verdict(),
                Verdict::Equal,
                "{name}: {gen}"
            );
        }
        for r in simple.relations() {
            assert_eq!(
                orig_eng.equal(&r.lhs, &r.rhs).unwrap().verdict(),
                Verdict::Equal,
                "{name}"
            );
        }
    }
}

#[test]
fn atoms_survive_elimination() {
    let b = bounds();
    for (name, g) in sample_graphs() {
        let original = build_v_monoid(&g);
        let (simple, log) = original.auto_simplify();
        let orig_eng = CongruenceEngine::with_bounds(original, b);
        let simple_eng = CongruenceEngine::with_bounds(simple, b);
        let contradicts = |x: &AtomVerdict, y: &AtomVerdict| {
            matches!(
                (x, y),
                (AtomVerdict::Yes, AtomVerdict::No { .. })
                    | (AtomVerdict::No { .. }, AtomVerdict::Yes)
            )
        };
        for a in fingerprint(&orig_eng, &b).atoms {
            let there = is_atom(&simple_eng, &apply_log(&log, &a), &b).unwrap();
            let here = is_atom(&orig_eng, &a, &b).unwrap();
            assert!(
                !contradicts(&here, &there),
                "{name}: {a:?} {here:?} {there:?}"
            );
        }
        for a in fingerprint(&simple_eng, &b).atoms {
            let here = is_atom(&orig_eng, &a, &b).unwrap();
            assert!(
                !matches!(here, AtomVerdict::No { .. }),
                "{name}: {a:?} {here:?}"
            );
        }
    }
}

#[test]
fn atom_sets_agree_on_the_degree_preserving_pair() {
    let b = bounds();
    for (name, g) in &sample_graphs()[..2] {
        let original = build_v_monoid(g);
        let (simple, log) = original.auto_simplify();
        let orig = fingerprint(&CongruenceEngine::with_bounds(original, b), &b);
        let simple_eng = CongruenceEngine::with_bounds(simple, b);
        let simp = fingerprint(&simple_eng, &b);
        assert!(orig.atoms_complete && simp.atoms_complete, "{name}");
        let mut mapped: Vec<Element> = orig.atoms.iter().map(|a| apply_log(&log, a)).collect();
        mapped.sort();
        let mut expected = simp.atoms.clone();
        expected.sort();
        // Representatives may differ, so compare classes.
        assert_eq!(mapped.len(), expected.len(), "{name}");
        for m in &mapped {
            assert!(
                expected
                    .iter()
                    .any(|e| simple_eng.equal(m, e).unwrap().verdict() == Verdict::Equal),
                "{name}: {m:?}"
            );
        }
    }
}
