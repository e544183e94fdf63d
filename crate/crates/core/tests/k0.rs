use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use wmk_core::graph::{EdgeSpec, GraphSpec};
use wmk_core::{
    build_graph_monoid_classic, build_k0, build_v_monoid, group_completion, k0_consistency,
    k0_invariants, smith_normal_form, AbelianGroupInvariants, IntMatrix, WeightedGraph,
};

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_1⋯d_i` is the gcd of all
/// `i × i` minors.
fn factors_by_minors(a: &IntMatrix) -> Vec<BigInt> {
    let mut divisors = vec![BigInt::one()];
    for i in 1..=a.rows().min(a.cols()) {
        let mut g = BigInt::zero();
        for rows in combinations(a.rows(), i) {
            for cols in combinations(a.cols(), i) {
                g = g.gcd(&a.select(&rows, &cols).determinant());
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
}

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (0usize..=4, 1usize..=4).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, n), m).prop_map(move |rows| {
            IntMatrix::from_rows(
                n,
                rows.into_iter()
                    .map(|r| r.into_iter().map(BigInt::from).collect())
                    .collect(),
            )
        })
    })
}

fn random_graph() -> impl Strategy<Value = WeightedGraph> {
    (1usize..=4)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((0..n, 0..n, 1i64..=4), 0..=6),
            )
        })
        .prop_map(|(n, edges)| {
            WeightedGraph::from_spec(&GraphSpec {
                vertices: (0..n).map(|i| format!("v{i}")).collect(),
                edges: edges
                    .iter()
                    .enumerate()
                    .map(|(k, &(s, r, w))| EdgeSpec {
                        id: format!("e{k}"),
                        source: format!("v{s}"),
                        range: format!("v{r}"),
                        weight: w,
                    })
                    .collect(),
            })
            .unwrap()
        })
}

fn permuted(a: &IntMatrix, rot_rows: usize, rot_cols: usize) -> IntMatrix {
    let rows: Vec<usize> = (0..a.rows()).map(|i| (i + rot_rows) % a.rows()).collect();
    let cols: Vec<usize> = (0..a.cols())
        .rev()
        .map(|j| (j + rot_cols) % a.cols())
        .collect();
    a.select(&rows, &cols)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn snf_replays_and_matches_minors(a in matrix()) {
        let snf = smith_normal_form(&a);
        prop_assert!(snf.verify(&a));
        prop_assert!(snf.u.determinant().magnitude().is_one());
        prop_assert!(snf.v.determinant().magnitude().is_one());
        prop_assert_eq!(&snf.invariant_factors, &factors_by_minors(&a));
    }

    #[test]
    fn invariants_ignore_row_and_column_order(a in matrix(), r in 0usize..4, c in 0usize..4) {
        let (x, _) = AbelianGroupInvariants::of_presentation(a.cols(), &a);
        let (y, _) = AbelianGroupInvariants::of_presentation(a.cols(), &permuted(&a, r, c));
        prop_assert_eq!(x, y);
    }

    #[test]
    fn k0_routes_agree(g in random_graph()) {
        let report = k0_consistency(&g).unwrap();
        prop_assert!(report.direct_snf.verify(&report.direct.relation_matrix));
        prop_assert!(report.monoid_snf.verify(&report.via_monoid.relation_matrix));
        // Without any elimination, the group completion still agrees.
        let (full, snf) = group_completion(&build_v_monoid(&g)).invariants();
        prop_assert!(snf.verify(&group_completion(&build_v_monoid(&g)).relation_matrix));
        prop_assert_eq!(full, k0_invariants(&g));
    }

    #[test]
    fn presentation_sizes(g in random_graph()) {
        let p = build_v_monoid(&g);
        let ks: Vec<usize> = (0..g.vertex_count()).map(|v| g.strata_at(v).k).collect();
        prop_assert_eq!(p.generators().len(), g.vertex_count() + ks.iter().map(|k| k.saturating_sub(1)).sum::<usize>());
        // Trivial and repeated relations are dropped.
        prop_assert!(p.relations().len() <= ks.iter().sum::<usize>());
        let classic = ks.iter().all(|&k| k <= 1);
        prop_assert_eq!(build_graph_monoid_classic(&g).is_ok(), classic);
        if classic {
            prop_assert!(p.generators().iter().all(|g| !g.is_q()));
        }
    }
}

#[test]
fn k0_rows_of_the_sample_graphs() {
    let l =
        WeightedGraph::new(&["u", "v", "x"], &[("e", "v", "u", 2), ("f", "v", "x", 2)]).unwrap();
    let k = build_k0(&l);
    assert_eq!(
        k.relation_matrix,
        IntMatrix::from_i64_rows(3, &[&[-1, 2, -1]])
    );
    let rose = WeightedGraph::new(
        &["v"],
        &[
            ("e", "v", "v", 3),
            ("f", "v", "v", 3),
            ("g", "v", "v", 3),
            ("h", "v", "v", 3),
        ],
    )
    .unwrap();
    assert_eq!(
        build_k0(&rose).relation_matrix,
        IntMatrix::from_i64_rows(1, &[&[-1]])
    );
    assert!(k0_invariants(&rose).is_trivial());
}
