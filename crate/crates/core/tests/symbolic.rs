use proptest::prelude::*;
use wmk_core::graph::{EdgeSpec, GraphSpec, VertexStrata, WeightedGraph};
use wmk_core::symbolic::{
    a_of_strata, epsilon, epsilon_definition, reduce, star_transpose, verify_all_witnesses,
    BlockMatrix, ReductionRuleSet, ScanOrder, StarPolynomial,
};

type RawEdge = (usize, usize, i64);

fn raw_graph() -> impl Strategy<Value = (usize, Vec<RawEdge>)> {
    (1usize..=4).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n, 1i64..=4), 0..=6),
        )
    })
}

fn build(n: usize, edges: &[RawEdge], order: &[usize]) -> WeightedGraph {
    let spec = GraphSpec {
        vertices: (0..n).map(|i| format!("v{i}")).collect(),
        edges: order
            .iter()
            .map(|&k| {
                let (s, r, w) = edges[k];
                EdgeSpec {
                    id: format!("e{k}"),
                    source: format!("v{s}"),
                    range: format!("v{r}"),
                    weight: w,
                }
            })
            .collect(),
    };
    WeightedGraph::from_spec(&spec).expect("generated graphs are valid")
}

fn graph(n: usize, edges: &[RawEdge]) -> WeightedGraph {
    build(n, edges, &(0..edges.len()).collect::<Vec<_>>())
}

/// Unreduced products whose entries make up the rewriting corpus.
fn corpus(g: &WeightedGraph, s: &VertexStrata) -> Vec<StarPolynomial> {
    let a = a_of_strata(g, s);
    let a_star = star_transpose(&a);
    let mut mats: Vec<BlockMatrix> = vec![a.mul(&a_star).unwrap(), a_star.mul(&a).unwrap()];
    for l in 1..s.k {
        let eps = epsilon(g, s, l).unwrap();
        mats.push(eps.mul(&eps).unwrap());
        mats.push(epsilon_definition(g, s, l).unwrap());
    }
    mats.iter()
        .flat_map(|m| m.entries().map(|(_, _, p)| p.clone()).collect::<Vec<_>>())
        .collect()
}

fn edge_ids(g: &WeightedGraph, order: &[usize]) -> Vec<String> {
    order.iter().map(|&e| g.edge(e).id.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witnesses_hold_on_random_graphs((n, edges) in raw_graph()) {
        let g = graph(n, &edges);
        for report in verify_all_witnesses(&g).unwrap() {
            prop_assert!(report.all_verified(), "{report:?}");
        }
    }

    #[test]
    fn reduce_is_idempotent_and_star_compatible((n, edges) in raw_graph()) {
        let g = graph(n, &edges);
        let rules = ReductionRuleSet::new(&g);
        for v in g.emitting_vertices() {
            for p in corpus(&g, &g.strata_at(v)) {
                let r = reduce(&p, &rules).unwrap();
                prop_assert_eq!(&reduce(&r, &rules).unwrap(), &r);
                prop_assert_eq!(reduce(&p.star(), &rules).unwrap(), r.star());
            }
        }
    }

    #[test]
    fn scan_order_does_not_change_normal_forms((n, edges) in raw_graph()) {
        let g = graph(n, &edges);
        let fwd = ReductionRuleSet::new(&g);
        let rev = ReductionRuleSet::new(&g).with_scan_order(ScanOrder::Reverse);
        for v in g.emitting_vertices() {
            for p in corpus(&g, &g.strata_at(v)) {
                prop_assert_eq!(reduce(&p, &fwd).unwrap(), reduce(&p, &rev).unwrap());
            }
        }
    }

    #[test]
    fn epsilon_ignores_tie_break((n, edges) in raw_graph(), seed in any::<u64>()) {
        let g = graph(n, &edges);
        let rules = ReductionRuleSet::new(&g);
        for v in g.emitting_vertices() {
            let base = g.strata_at(v);
            let mut order = base.ordered_edges.clone();
            // Rotate each run of equal weights by a seed-dependent amount.
            for l in 1..=base.k {
                let (lo, hi) = (base.counts[l - 1], base.counts[l]);
                let len = hi - lo;
                order[lo..hi].rotate_left((seed as usize + l) % len);
            }
            let other = VertexStrata::with_order(&g, v, order).unwrap();
            for l in 1..base.k {
                let e1 = epsilon_definition(&g, &base, l).unwrap();
                let e2 = epsilon_definition(&g, &other, l).unwrap();
                prop_assert_eq!(e1.shape(), e2.shape());
                for ((_, _, p), (_, _, q)) in e1.entries().zip(e2.entries()) {
                    prop_assert_eq!(reduce(p, &rules).unwrap(), reduce(q, &rules).unwrap());
                }
            }
        }
    }

    #[test]
    fn strata_invariants((n, edges) in raw_graph()) {
        let g = graph(n, &edges);
        for v in 0..g.vertex_count() {
            let s = g.strata_at(v);
            prop_assert_eq!(s.weights.len(), s.k + 1);
            prop_assert_eq!(s.counts.len(), s.k + 1);
            prop_assert_eq!(s.weights[0], 0);
            prop_assert_eq!(s.counts[0], 0);
            prop_assert!(s.weights.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(s.counts.windows(2).all(|c| c[0] <= c[1]));
            prop_assert_eq!(s.counts[s.k], g.out_edges(v).len());
            prop_assert_eq!(s.max_weight(), g.weight_at(v));
            let ws: Vec<u32> = s.ordered_edges.iter().map(|&e| g.edge(e).weight).collect();
            prop_assert!(ws.windows(2).all(|w| w[0] <= w[1]));
            let mut distinct = ws.clone();
            distinct.dedup();
            prop_assert_eq!(&distinct[..], &s.weights[1..]);
            for l in 1..=s.k {
                let below = ws.iter().filter(|&&w| w <= s.weights[l]).count();
                prop_assert_eq!(below, s.counts[l]);
            }
        }
    }

    #[test]
    fn strata_ignore_declaration_order((n, edges) in raw_graph(), seed in any::<u64>()) {
        let g = graph(n, &edges);
        let mut order: Vec<usize> = (0..edges.len()).collect();
        if !order.is_empty() {
            let len = order.len();
            order.rotate_left(seed as usize % len);
        }
        order.reverse();
        let h = build(n, &edges, &order);
        for v in 0..n {
            let (s, t) = (g.strata_at(v), h.strata_at(v));
            prop_assert_eq!(&s.weights, &t.weights);
            prop_assert_eq!(&s.counts, &t.counts);
            prop_assert_eq!(edge_ids(&g, &s.ordered_edges), edge_ids(&h, &t.ordered_edges));
        }
    }
}
