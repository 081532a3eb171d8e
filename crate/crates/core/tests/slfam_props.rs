//! Detection and distinguishing properties of the SL2 product family, and
//! the cross-module identification of the unitriangular group.

use profinite_core::finite::is_isomorphic;
use profinite_core::mekler::{rn_level_element, Graph};
use profinite_core::slfam::{
    distinguishing_level, gp_level, primes_detected, sl2_level, ut3, ut3_labeled, Distinguish,
    PrimeSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn detection_is_identity_on_small_subsets() {
    let candidates = PrimeSet::new([2, 3, 5]).unwrap();
    for subset in [vec![], vec![2], vec![3], vec![5], vec![2, 3]] {
        let set = PrimeSet::new(subset.iter().copied()).unwrap();
        let g = gp_level(&set, 1).unwrap();
        assert_eq!(primes_detected(&g, &candidates).unwrap(), set, "subset {subset:?}");
    }
}

#[test]
fn distinguishing_level_is_one_for_distinct_pairs() {
    let subsets: Vec<PrimeSet> = [vec![2], vec![3], vec![5], vec![2, 3], vec![2, 5]]
        .into_iter()
        .map(|s| PrimeSet::new(s).unwrap())
        .collect();
    for (i, p) in subsets.iter().enumerate() {
        for (j, q) in subsets.iter().enumerate() {
            let expected =
                if i == j { Distinguish::Equal } else { Distinguish::Level(1) };
            assert_eq!(distinguishing_level(p, q).unwrap(), expected);
        }
    }
}

#[test]
fn ut3_is_the_level_two_quotient_of_the_edgeless_pair() {
    // The group of 3x3 unitriangular matrices over F_3 is the level-2
    // truncation of the graph group on two non-adjacent vertices.
    let heisenberg = rn_level_element(&Graph::new(2, []).unwrap(), 3, 2).unwrap();
    assert!(is_isomorphic(&ut3(3).unwrap(), heisenberg.target()));
    // And not isomorphic to the elementary abelian group of the same order.
    let elementary = {
        use profinite_core::FiniteGroup;
        FiniteGroup::cyclic(3)
            .direct_product(&FiniteGroup::cyclic(3))
            .unwrap()
            .direct_product(&FiniteGroup::cyclic(3))
            .unwrap()
    };
    assert!(!is_isomorphic(&ut3(3).unwrap(), &elementary));
}

#[test]
fn ut3_multiplication_matches_matrix_oracle() {
    for p in [3u32, 5] {
        let (g, labels) = ut3_labeled(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
        for _ in 0..500 {
            let x = rng.gen_range(0..g.order());
            let y = rng.gen_range(0..g.order());
            let (a, b) = (labels[x], labels[y]);
            // Direct 3x3 matrix product of unitriangular matrices.
            let expect = [
                (a[0] + b[0]) % p,
                (a[1] + b[1]) % p,
                (a[2] + b[2] + a[0] * b[1]) % p,
            ];
            assert_eq!(labels[g.mul(x, y)], expect);
        }
    }
}

#[test]
fn sl2_projection_tower() {
    // Level-2 groups project onto level 1 with kernel of order p^3.
    for p in [2u32, 3] {
        let fine = sl2_level(p, 2).unwrap();
        let coarse = sl2_level(p, 1).unwrap();
        assert_eq!(
            fine.group().order() / coarse.group().order(),
            (p as usize).pow(3)
        );
    }
}

#[test]
fn multiply_in_sl2_matches_matrix_labels() {
    let level = sl2_level(3, 1).unwrap();
    let g = level.group();
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..300 {
        let x = rng.gen_range(0..g.order());
        let y = rng.gen_range(0..g.order());
        let (a, b) = (level.labels()[x], level.labels()[y]);
        let expect = [
            (a[0] * b[0] + a[1] * b[2]) % 3,
            (a[0] * b[1] + a[1] * b[3]) % 3,
            (a[2] * b[0] + a[3] * b[2]) % 3,
            (a[2] * b[1] + a[3] * b[3]) % 3,
        ];
        assert_eq!(level.labels()[g.mul(x, y)], expect);
    }
}
