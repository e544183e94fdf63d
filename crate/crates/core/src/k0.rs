//! K₀ of a weighted Leavitt path algebra, computed directly on the vertices and
//! cross-checked against the group completion of the simplified V-monoid.

use alloc::boxed::Box;

use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::lattice::{group_iso_check, AbelianGroupInvariants, SnfDecomposition};
use crate::presentation::{build_k0, build_v_monoid, group_completion, GroupPresentation};

pub fn k0_invariants(g: &WeightedGraph) -> AbelianGroupInvariants {
    build_k0(g).invariants().0
}

/// Both routes to K₀ with their Smith forms.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConsistencyReport {
    pub direct: GroupPresentation,
    pub via_monoid: GroupPresentation,
    pub direct_invariants: AbelianGroupInvariants,
    pub monoid_invariants: AbelianGroupInvariants,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub direct_snf: SnfDecomposition,
    #[cfg_attr(feature = "serde", serde(skip))]
    pub monoid_snf: SnfDecomposition,
}

#[derive(Debug, Error)]
#[error("K0 mismatch: direct {} vs group completion {}", .0.direct_invariants, .0.monoid_invariants)]
pub struct ConsistencyFailure(pub Box<ConsistencyReport>);

/// Compares `build_k0(g)` with `group_completion(auto_simplify(build_v_monoid(g)))`.
pub fn k0_consistency(g: &WeightedGraph) -> Result<ConsistencyReport, ConsistencyFailure> {
    let direct = build_k0(g);
    let (simplified, _) = build_v_monoid(g).auto_simplify();
    let via_monoid = group_completion(&simplified);
    let (direct_invariants, direct_snf) = direct.invariants();
    let (monoid_invariants, monoid_snf) = via_monoid.invariants();
    let report = ConsistencyReport {
        direct,
        via_monoid,
        direct_invariants,
        monoid_invariants,
        direct_snf,
        monoid_snf,
    };
    if group_iso_check(&report.direct_invariants, &report.monoid_invariants) {
        Ok(report)
    } else {
        Err(ConsistencyFailure(Box::new(report)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use num_bigint::BigInt;

    #[test]
    fn pair_with_equal_k0() {
        let l = WeightedGraph::new(&["u", "v", "x"], &[("e", "v", "u", 2), ("f", "v", "x", 2)])
            .unwrap();
        let lp = WeightedGraph::new(&["u", "v", "x"], &[("e", "v", "u", 1), ("f", "v", "x", 2)])
            .unwrap();
        assert_eq!(k0_invariants(&l), AbelianGroupInvariants::free(2));
        assert!(group_iso_check(&k0_invariants(&l), &k0_invariants(&lp)));
        assert!(k0_consistency(&lp).is_ok());
    }

    #[test]
    fn leavitt_algebra_torsion() {
        // n + k loops of weight n: K₀ = ℤ/k
        for (n, k) in [(1u32, 2u32), (2, 3), (3, 1), (2, 4)] {
            let ids: alloc::vec::Vec<alloc::string::String> =
                (0..n + k).map(|i| format!("e{i}")).collect();
            let edges: alloc::vec::Vec<(&str, &str, &str, i64)> = ids
                .iter()
                .map(|id| (id.as_str(), "v", "v", i64::from(n)))
                .collect();
            let g = WeightedGraph::new(&["v"], &edges).unwrap();
            let inv = k0_invariants(&g);
            assert_eq!(inv.free_rank, 0);
            let expected: alloc::vec::Vec<BigInt> = if k >= 2 {
                alloc::vec![BigInt::from(k)]
            } else {
                alloc::vec![]
            };
            assert_eq!(inv.torsion, expected);
            assert!(k0_consistency(&g).is_ok());
        }
    }

    #[test]
    fn sinks_only() {
        let g = WeightedGraph::new(&["a", "b", "c"], &[]).unwrap();
        let r = k0_consistency(&g).unwrap();
        assert_eq!(r.direct_invariants, AbelianGroupInvariants::free(3));
    }
}
