//! Relabeling `p1 <-> p2` (with `pi1 <-> pi3`, `pi2 <-> pi4`) permutes the
//! unramified extensions: `K1 <-> K2`, `K5 <-> K6`, `L2 <-> L4`, `L3 <-> L5`.

use capitulation::classifier::{cross_validate, invariants, predict};
use capitulation::symbols::pairs_up_to;

const K_IMAGE: [usize; 7] = [2, 1, 3, 4, 6, 5, 7];
const L_IMAGE: [usize; 7] = [1, 4, 5, 2, 3, 6, 7];

#[test]
fn predictions_are_invariant_under_swapping_the_primes() {
    for pair in pairs_up_to(250) {
        let a = invariants(&pair).unwrap();
        let b = invariants(&pair.swapped()).unwrap();
        assert_eq!(
            (a.legendre, a.m, a.n, a.q, a.psi),
            (b.legendre, b.m, b.n, b.q, b.psi),
            "{pair}"
        );
        assert_eq!((a.pi, a.b), (b.pi, b.b), "{pair}");

        let (pa, pb) = (predict(&a), predict(&b));
        assert_eq!(pa.cl2_k3, pb.cl2_k3);
        assert_eq!((pa.group_order, pa.coclass), (pb.group_order, pb.coclass));
        for j in 0..7 {
            assert_eq!(
                pa.k[j].class_group,
                pb.k[K_IMAGE[j] - 1].class_group,
                "{pair} K{}",
                j + 1
            );
            assert_eq!(
                pa.l[j].class_group,
                pb.l[L_IMAGE[j] - 1].class_group,
                "{pair} L{}",
                j + 1
            );
        }
        assert!(cross_validate(&b).unwrap().passed(), "{pair} swapped");
    }
}
