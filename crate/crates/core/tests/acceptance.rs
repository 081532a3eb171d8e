//! Acceptance suite: one test per criterion, each printing a PASS line
//! after its exact-equality checks. Run with
//! `cargo test -p profinite-core --test acceptance -- --nocapture`.

use std::time::Instant;

use profinite_core::cantor::{build_tree, verify_difference_axioms, TreePath};
use profinite_core::filter::{cyclic_power_chain, hausdorff_level, Containment, FilterChain};
use profinite_core::finite::is_isomorphic;
use profinite_core::lattice::{Lattice, LatticeElement};
use profinite_core::mekler::{
    gamma2, rn_chain, rn_level_element, Graph, MeklerContext, MeklerElement,
};
use profinite_core::slfam::{
    distinguishing_level, gp_level, primes_detected, sl2_level, ut3, Distinguish, PrimeSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn acceptance_1_gamma2_round_trip() {
    let t = Instant::now();
    assert_eq!(gamma2(&Graph::cycle(5), 3).unwrap().graph, Graph::cycle(5));
    assert_eq!(gamma2(&Graph::cycle(5), 5).unwrap().graph, Graph::cycle(5));
    let c5_time = t.elapsed();
    assert!(c5_time.as_secs() < 1, "C5 cases took {c5_time:?}");
    let t = Instant::now();
    assert_eq!(gamma2(&Graph::petersen(), 3).unwrap().graph, Graph::petersen());
    let petersen_time = t.elapsed();
    assert!(petersen_time.as_secs() < 60, "Petersen took {petersen_time:?}");
    println!(
        "ACCEPTANCE 1 gamma2-round-trip: PASS (C5 {c5_time:?}, Petersen {petersen_time:?})"
    );
}

#[test]
fn acceptance_2_commutator_formula() {
    // Exhaustive over the level-3 truncation of G(C5), p = 3: vertex
    // support below 3 and the single surviving central pair (0,2).
    let ctx = MeklerContext::new(Graph::cycle(5), 3).unwrap();
    let mut truncated = Vec::new();
    for a0 in 0..3i64 {
        for a1 in 0..3i64 {
            for a2 in 0..3i64 {
                for b in 0..3i64 {
                    truncated.push(ctx.element(&[a0, a1, a2], &[(0, 2, b)]).unwrap());
                }
            }
        }
    }
    assert_eq!(truncated.len(), 81);
    let mut pairs = 0u64;
    for u in &truncated {
        for w in &truncated {
            assert_eq!(
                ctx.commutator_formula(u, w).unwrap(),
                ctx.commutator_oracle(u, w).unwrap()
            );
            pairs += 1;
        }
    }
    // Plus 1000 random pairs at p = 5 over the full five-vertex group.
    let ctx5 = MeklerContext::new(Graph::cycle(5), 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let u = random_element(&ctx5, &mut rng);
        let w = random_element(&ctx5, &mut rng);
        assert_eq!(
            ctx5.commutator_formula(&u, &w).unwrap(),
            ctx5.commutator_oracle(&u, &w).unwrap()
        );
    }
    println!("ACCEPTANCE 2 commutator-formula: PASS ({pairs} exhaustive pairs + 1000 random)");
}

fn random_element(ctx: &MeklerContext, rng: &mut ChaCha8Rng) -> MeklerElement {
    let p = ctx.prime() as i64;
    let alpha: Vec<i64> = (0..ctx.vertex_count()).map(|_| rng.gen_range(0..p)).collect();
    let beta: Vec<(usize, usize, i64)> =
        ctx.non_edges().iter().map(|&(r, s)| (r, s, rng.gen_range(0..p))).collect();
    ctx.element(&alpha, &beta).unwrap()
}

#[test]
fn acceptance_3_class_size_table() {
    let ctx = MeklerContext::new(Graph::cycle(5), 3).unwrap();
    let mut cosets = Vec::new();
    for code in 1..3u32.pow(5) {
        let alpha: Vec<i64> = (0..5).map(|i| (code / 3u32.pow(i) % 3) as i64).collect();
        cosets.push(ctx.element(&alpha, &[]).unwrap());
    }
    assert_eq!(cosets.len(), 242);
    // Exhaustive class sizes by pairwise centralizer comparison.
    for v in &cosets {
        let actual = cosets
            .iter()
            .filter(|w| ctx.same_class(v, w).unwrap())
            .count() as u64;
        assert_eq!(ctx.class_size(v).unwrap(), actual, "coset {:?}", v.alpha());
    }
    // The named representatives reproduce 2 / 4 / 6 / 2.
    let table = [
        (ctx.element(&[1], &[]).unwrap(), 2),
        (ctx.element(&[1, 1], &[]).unwrap(), 4),
        (ctx.element(&[1, 0, 1], &[]).unwrap(), 6),
        (ctx.element(&[1, 0, 1, 0, 1], &[]).unwrap(), 2),
    ];
    for (v, expected) in table {
        assert_eq!(ctx.class_size(&v).unwrap(), expected);
    }
    println!("ACCEPTANCE 3 class-size-table: PASS (242 cosets, sizes 2/4/6/2)");
}

#[test]
fn acceptance_4_centralizer_scaling() {
    let ctx = MeklerContext::new(Graph::cycle(5), 3).unwrap();
    let mut checked = 0u32;
    for code in 1..3u32.pow(5) {
        let alpha: Vec<i64> = (0..5).map(|i| (code / 3u32.pow(i) % 3) as i64).collect();
        let v = ctx.element(&alpha, &[]).unwrap();
        let squared = ctx.power(&v, 2).unwrap();
        assert!(ctx.same_class(&v, &squared).unwrap(), "alpha {alpha:?}");
        checked += 1;
    }
    println!("ACCEPTANCE 4 centralizer-scaling: PASS ({checked} noncentral cosets, gamma=2)");
}

#[test]
fn acceptance_5_lattice_laws_and_hausdorff_lemma() {
    let start = Instant::now();
    let mut lat = Lattice::new();
    let sample: Vec<LatticeElement> = (0..41).map(|i| lat.enumerate(i)).collect();

    // Partial order.
    let mut below = vec![vec![false; 41]; 41];
    for (i, a) in sample.iter().enumerate() {
        for (j, b) in sample.iter().enumerate() {
            below[i][j] = a.leq(b);
        }
    }
    for i in 0..41 {
        assert!(below[i][i]);
        for j in 0..41 {
            assert!(i == j || !(below[i][j] && below[j][i]));
            for k in 0..41 {
                if below[i][j] && below[j][k] {
                    assert!(below[i][k]);
                }
            }
        }
    }

    // Lattice axioms and bounds on random triples from the sample.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let a = &sample[rng.gen_range(0..41)];
        let b = &sample[rng.gen_range(0..41)];
        let c = &sample[rng.gen_range(0..41)];
        assert_eq!(a.meet(b).unwrap(), b.meet(a).unwrap());
        assert_eq!(a.join(b).unwrap(), b.join(a).unwrap());
        assert_eq!(a.meet(b).unwrap().meet(c).unwrap(), a.meet(&b.meet(c).unwrap()).unwrap());
        assert_eq!(a.join(b).unwrap().join(c).unwrap(), a.join(&b.join(c).unwrap()).unwrap());
        assert_eq!(&a.join(&a.meet(b).unwrap()).unwrap(), a);
        assert_eq!(&a.meet(&a.join(b).unwrap()).unwrap(), a);
        let m = a.meet(b).unwrap();
        let j = a.join(b).unwrap();
        assert!(m.leq(a) && m.leq(b) && a.leq(&j) && b.leq(&j));
        for c in &sample {
            if c.leq(a) && c.leq(b) {
                assert!(c.leq(&m));
            }
            if a.leq(c) && b.leq(c) {
                assert!(j.leq(c));
            }
        }
    }

    // The coarse-agreement lemma: R B(n) = S B(n) iff every sampled
    // element above B(n) contains R exactly when it contains S.
    let depth = 6;
    let mut chains: Vec<FilterChain> = vec![
        FilterChain::principal(LatticeElement::top()),
        FilterChain::principal(sample[1].clone()),
        cyclic_power_chain(2),
        cyclic_power_chain(3),
        rn_chain(&Graph::cycle(5), 3).unwrap(),
    ];
    // Develop each chain as deep as it goes once, so the clones below
    // inherit the prefix instead of rebuilding quotient tables.
    for chain in &mut chains {
        let _ = chain.develop(depth + 1);
    }
    for n in 0..=5usize {
        let base = lat.base_element(n).unwrap();
        for r in &chains {
            for s in &chains {
                let mut rc = r.clone();
                let mut sc = s.clone();
                let lhs = hausdorff_level(&mut lat, &mut rc, &mut sc, n).unwrap();
                let rhs = sample
                    .iter()
                    .filter(|l| base.leq(l))
                    .all(|l| {
                        let in_r = rc.contains(l, depth) == Containment::Yes;
                        let in_s = sc.contains(l, depth) == Containment::Yes;
                        in_r == in_s
                    });
                assert_eq!(lhs, rhs, "lemma sides disagree at level {n}");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "criterion 5 took {elapsed:?}");
    println!("ACCEPTANCE 5 lattice-laws-and-hausdorff-lemma: PASS ({elapsed:?})");
}

#[test]
fn acceptance_6_cantor_encoding() {
    let trees = [
        ("mod-2 tower", build_tree(&mut cyclic_power_chain(2), 3).unwrap()),
        (
            "mekler C5 p=3",
            build_tree(&mut rn_chain(&Graph::cycle(5), 3).unwrap(), 3).unwrap(),
        ),
    ];
    for (name, tree) in &trees {
        // Zero path goes to the zero string.
        let zero_bits = tree.encode(&TreePath::zero(3)).unwrap();
        assert!(zero_bits.iter().all(|&b| !b), "{name}");
        for n in 0..=3usize {
            // Injectivity of the encoding on level-n paths.
            let mut seen = std::collections::BTreeSet::new();
            for path in tree.paths_at(n).unwrap() {
                assert!(seen.insert(tree.encode(&path).unwrap()), "{name} level {n}");
            }
            // Prefix-code partition at every node: cylinder masses of the
            // child extensions sum exactly to one.
            if n < 3 {
                let k = tree.branching()[n];
                let prefix = tree.encode(&TreePath::zero(n)).unwrap().len();
                let exts: Vec<Vec<bool>> = (0..k)
                    .map(|d| {
                        let mut digits = vec![0usize; n + 1];
                        digits[n] = d;
                        tree.encode(&TreePath::new(digits)).unwrap()[prefix..].to_vec()
                    })
                    .collect();
                for i in 0..k {
                    for j in 0..k {
                        if i != j {
                            let (a, b) = (&exts[i], &exts[j]);
                            assert!(!(a.len() <= b.len() && &b[..a.len()] == a.as_slice()));
                        }
                    }
                }
                let scale = exts.iter().map(|e| e.len() as u32).max().unwrap();
                let mass: u64 = exts.iter().map(|e| 1u64 << (scale - e.len() as u32)).sum();
                assert_eq!(mass, 1u64 << scale, "{name} level {n}");
            }
            // Difference axioms, exhaustively (all quotients here are well
            // under the tabulated bound).
            assert!(tree.level_quotient(n).target().order() <= 2000);
            let report = verify_difference_axioms(tree, n, 0).unwrap();
            assert!(report.passed() && report.exhaustive, "{name} level {n}");
        }
    }
    println!("ACCEPTANCE 6 cantor-encoding: PASS (mod-2 and mekler trees to depth 3)");
}

#[test]
fn acceptance_7_gp_invariant() {
    let start = Instant::now();
    // Exhaustive determinant-one count oracle for the two smallest levels.
    for (p, expected) in [(2u32, 6usize), (3, 24)] {
        let mut brute = 0usize;
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        if (a * d + p * p - b * c) % p == 1 {
                            brute += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(brute, expected);
        assert_eq!(sl2_level(p, 1).unwrap().group().order(), expected);
    }
    // Detection is the identity on all eight subsets of {2, 3, 5}.
    let candidates = PrimeSet::new([2, 3, 5]).unwrap();
    let subsets: Vec<Vec<u32>> = vec![
        vec![],
        vec![2],
        vec![3],
        vec![5],
        vec![2, 3],
        vec![2, 5],
        vec![3, 5],
        vec![2, 3, 5],
    ];
    let sets: Vec<PrimeSet> =
        subsets.iter().map(|s| PrimeSet::new(s.iter().copied()).unwrap()).collect();
    for set in &sets {
        let g = gp_level(set, 1).unwrap();
        assert_eq!(&primes_detected(&g, &candidates).unwrap(), set);
    }
    // Distinct pairs are distinguished at level 1.
    for (i, p) in sets.iter().enumerate() {
        for q in sets.iter().skip(i + 1) {
            assert_eq!(distinguishing_level(p, q).unwrap(), Distinguish::Level(1));
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "criterion 7 took {elapsed:?}");
    println!("ACCEPTANCE 7 gp-invariant: PASS ({elapsed:?})");
}

#[test]
fn acceptance_8_group_axioms_and_exponent() {
    for p in [3u32, 5] {
        let ctx = MeklerContext::new(Graph::cycle(5), p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8 + p as u64);
        for _ in 0..1000 {
            let u = random_element(&ctx, &mut rng);
            let w = random_element(&ctx, &mut rng);
            let z = random_element(&ctx, &mut rng);
            // Oracle-validated products.
            let uw = ctx.multiply(&u, &w).unwrap();
            let mut letters = ctx.letters_of(&u);
            letters.extend(ctx.letters_of(&w));
            assert_eq!(uw, ctx.normal_form_of_letters(&letters));
            // Associativity.
            let left = ctx.multiply(&uw, &z).unwrap();
            let right = ctx.multiply(&u, &ctx.multiply(&w, &z).unwrap()).unwrap();
            assert_eq!(left, right);
            // Exponent p and the class-2 law.
            assert!(ctx.power(&u, p as i64).unwrap().is_identity());
            let inner = ctx.commutator_oracle(&u, &w).unwrap();
            assert!(ctx.commutator_oracle(&inner, &z).unwrap().is_identity());
        }
    }
    // The unitriangular group is the level-2 quotient of the edgeless
    // two-vertex graph group.
    let heisenberg = rn_level_element(&Graph::new(2, []).unwrap(), 3, 2).unwrap();
    assert!(is_isomorphic(&ut3(3).unwrap(), heisenberg.target()));
    println!("ACCEPTANCE 8 group-axioms-and-exponent: PASS (p in {{3,5}}, 1000 triples each)");
}
