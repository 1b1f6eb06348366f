use jeqp::canon::{canonical_form, equivalent, permute_partition};
use jeqp::constructions::Construction;
use jeqp::eigenfn::{
    block_decomposition, canonical_function, classify_theorem1, pairs_lower_bound, FormKind,
    VertexFunction,
};
use jeqp::io::{partition_from_json, partition_to_json};
use jeqp::{binomial, GraphParams, TwoPartition, Vertex, VertexIndex};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn params() -> impl Strategy<Value = GraphParams> {
    (2u32..=12)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_map(|(n, w)| GraphParams::new(n, w).unwrap())
}

fn small_function() -> impl Strategy<Value = VertexFunction> {
    (4u32..=8)
        .prop_flat_map(|n| (Just(n), 2..n - 1))
        .prop_flat_map(|(n, w)| {
            let g = GraphParams::new(n, w).unwrap();
            prop::collection::vec(-3i64..=3, g.order())
                .prop_map(move |v| VertexFunction::new(g, v).unwrap())
        })
}

fn membership() -> impl Strategy<Value = TwoPartition> {
    params()
        .prop_filter("small", |g| g.order() <= 300)
        .prop_flat_map(|g| {
            prop::collection::vec(1u8..=2, g.order()).prop_filter_map("two cells", move |m| {
                TwoPartition::from_membership(g, m).ok()
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_round_trip(g in params(), seed in any::<u64>()) {
        let r = (seed % binomial(g.n(), g.w())) as usize;
        let v = Vertex::unrank(g, VertexIndex(r)).unwrap();
        prop_assert_eq!(v.rank(), VertexIndex(r));
        prop_assert_eq!(Vertex::from_bitstring(g, &v.to_bitstring()).unwrap(), v);
        prop_assert_eq!(Vertex::from_support(g, &v.support()).unwrap(), v);
    }

    #[test]
    fn neighbours_are_at_distance_one(g in params(), seed in any::<u64>()) {
        let v = Vertex::unrank(g, VertexIndex((seed % binomial(g.n(), g.w())) as usize)).unwrap();
        let nb = v.neighbors();
        prop_assert_eq!(nb.len() as u32, g.degree());
        for u in nb {
            prop_assert_eq!(u.distance(&v).unwrap(), 1);
        }
    }

    #[test]
    fn differences_are_antisymmetric(f in small_function(), a in 0u32..8, b in 0u32..8) {
        let n = f.params().n();
        let (i, j) = (a % n, b % n);
        prop_assume!(i != j);
        let ij = f.partial_difference(i, j).unwrap().function;
        let ji = f.partial_difference(j, i).unwrap().function;
        prop_assert_eq!(ij.scaled(-1), ji);
        prop_assert_eq!(f.difference_vanishes(i, j), ij.is_zero());
    }

    #[test]
    fn blocks_cover_all_coordinates(f in small_function()) {
        let bd = block_decomposition(&f).unwrap();
        prop_assert_eq!(bd.sizes().iter().sum::<usize>(), f.params().n() as usize);
    }

    #[test]
    fn classification_reconstructs(f in small_function()) {
        let c = classify_theorem1(&f);
        if c.kind != FormKind::Other {
            prop_assert_eq!(c.reconstruct(f.params()).unwrap(), f);
        }
    }

    #[test]
    fn canonical_forms_classify_back(
        w in 2u32..=5,
        kind in prop::sample::select(vec![FormKind::F1, FormKind::F2, FormKind::F3]),
        perm_seed in any::<u64>(),
        alpha in prop::sample::select(vec![-5i64, -1, 1, 2, 9]),
    ) {
        let g = GraphParams::new(2 * w, w).unwrap();
        let mut coords: Vec<u32> = (0..2 * w).collect();
        coords.shuffle(&mut StdRng::seed_from_u64(perm_seed));
        let witness: Vec<u32> = match kind {
            FormKind::F3 => vec![coords[0]],
            _ => vec![coords[0], coords[1]],
        };
        let f = canonical_function(g, kind, &witness).unwrap().scaled(alpha);
        let c = classify_theorem1(&f);
        prop_assert_eq!(c.reconstruct(g).unwrap(), f.clone());
        if !(w == 2 && kind == FormKind::F1) {
            prop_assert_eq!(c.kind, kind);
        }
        prop_assert!(f.is_eigenfunction(g.eigenvalue(1).unwrap()).holds());
    }

    #[test]
    fn partition_json_round_trip(p in membership()) {
        prop_assert_eq!(partition_from_json(&partition_to_json(&p)).unwrap(), p.clone());
        prop_assert_eq!(TwoPartition::from_packed_bits(p.params(), &p.to_packed_bits()).unwrap(), p);
    }

    #[test]
    fn swap_is_an_involution(p in membership()) {
        let s = p.swapped();
        prop_assert_eq!(s.swapped(), p.clone());
        let (a, b) = p.cell_sizes();
        prop_assert_eq!(s.cell_sizes(), (b, a));
        if let Some(m) = p.verify_equitable().matrix() {
            prop_assert_eq!(s.verify_equitable().matrix(), Some(m.swapped()));
        }
    }

    #[test]
    fn pairs_bound_is_a_lower_bound(parts in prop::collection::vec(1i64..=8, 2..8), s in 1i64..=8) {
        let parts: Vec<i64> = parts.into_iter().map(|x| x.min(s)).collect();
        let total: i64 = parts.iter().sum();
        prop_assume!(s < total);
        let sum: i64 = parts.iter().sum();
        let sq: i64 = parts.iter().map(|x| x * x).sum();
        prop_assert!(pairs_lower_bound(total, s).unwrap() <= (sum * sum - sq) / 2);
    }
}

fn random_perm(rng: &mut StdRng, n: u32) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

#[test]
fn canonical_form_is_invariant_under_relabelling() {
    let mut rng = StdRng::seed_from_u64(0);
    for w in 3..=5 {
        for c in Construction::ALL {
            if w < c.min_w() {
                continue;
            }
            let p = c.build(w).unwrap();
            let reference = canonical_form(&p).unwrap();
            for _ in 0..100 {
                let perm = random_perm(&mut rng, 2 * w);
                let q = permute_partition(&p, &perm, rng.gen()).unwrap();
                assert_eq!(
                    canonical_form(&q).unwrap().membership,
                    reference.membership,
                    "{c}"
                );
            }
        }
    }
}

#[test]
fn canonical_form_is_idempotent_and_certified() {
    let mut rng = StdRng::seed_from_u64(1);
    for c in [Construction::C1, Construction::C3, Construction::C4] {
        let p = c.build(5).unwrap();
        let q = permute_partition(&p, &random_perm(&mut rng, 10), true).unwrap();
        let cf = canonical_form(&q).unwrap();
        assert_eq!(
            permute_partition(&q, &cf.perm, cf.swapped)
                .unwrap()
                .membership(),
            &cf.membership[..]
        );
        assert_eq!(
            canonical_form(&cf.partition()).unwrap().membership,
            cf.membership
        );
    }
}

#[test]
fn fast_rejection_agrees_with_full_canonicalisation() {
    let mut parts = Vec::new();
    for w in 4..=5 {
        for c in Construction::ALL {
            if w >= c.min_w() {
                parts.push(c.build(w).unwrap());
            }
        }
    }
    for p in &parts {
        for q in &parts {
            if p.params() != q.params() {
                continue;
            }
            let full =
                canonical_form(p).unwrap().membership == canonical_form(q).unwrap().membership;
            assert_eq!(equivalent(p, q).unwrap(), full);
        }
    }
}

#[test]
fn differences_of_relabelled_constructions_are_first_eigenfunctions() {
    let mut rng = StdRng::seed_from_u64(2);
    for c in Construction::ALL {
        let w = c.min_w().max(4);
        let p =
            permute_partition(&c.build(w).unwrap(), &random_perm(&mut rng, 2 * w), false).unwrap();
        let (f, _) = VertexFunction::of_partition(&p).unwrap();
        let lambda = GraphParams::new(2 * w - 2, w - 1)
            .unwrap()
            .eigenvalue(1)
            .unwrap();
        for i in 0..2 * w {
            for j in 0..2 * w {
                if i == j {
                    continue;
                }
                let d = f.partial_difference(i, j).unwrap().function;
                assert!(
                    d.is_zero() || d.is_eigenfunction(lambda).holds(),
                    "{c} ({i},{j})"
                );
                let kind = classify_theorem1(&d).kind;
                assert!(matches!(
                    kind,
                    FormKind::Zero | FormKind::F1 | FormKind::F2 | FormKind::F3
                ));
                let support = d.support_size() as u64;
                let expected = match kind {
                    FormKind::Zero => 0,
                    FormKind::F1 => 2 * binomial(2 * w - 4, w - 2),
                    FormKind::F2 => 2 * binomial(2 * w - 4, w - 3),
                    _ => binomial(2 * w - 2, w - 1),
                };
                assert_eq!(support, expected, "{c} ({i},{j}) {kind}");
            }
        }
    }
}
