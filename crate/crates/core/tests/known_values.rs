//! Worked values for small instances, each checked against a direct count.

use jeqp::canon::{canonical_form, equivalent, permute_partition};
use jeqp::constructions::{
    construction1, construction2, construction3, construction4, coordinate_partition,
    pattern_partition, Construction, PrefixPattern,
};
use jeqp::eigenfn::{
    block_decomposition, classify_theorem1, cross_edge_count, lemma5_audit, system1_census,
    CensusOutcome, DiffCensus, FormKind, VertexFunction,
};
use jeqp::search::{prop2_check, prop3_check};
use jeqp::{GraphParams, QuotientMatrix};
use num_rational::Rational64;

fn g(n: u32, w: u32) -> GraphParams {
    GraphParams::new(n, w).unwrap()
}

#[test]
fn construction2_differences_w3() {
    let (f, m) = VertexFunction::of_partition(&construction2(3).unwrap()).unwrap();
    assert_eq!(
        m,
        QuotientMatrix {
            a: 3,
            b: 6,
            c: 4,
            d: 5
        }
    );
    assert!(f.is_eigenfunction(g(6, 3).eigenvalue(2).unwrap()).holds());

    let d12 = f.partial_difference(0, 1).unwrap();
    assert!(d12.function.is_zero());
    assert_eq!(d12.function.params(), g(4, 2));

    let d13 = f.partial_difference(0, 2).unwrap();
    // remaining coordinates 2,4,5,6; local coordinate 0 is original coordinate 2
    for (y, &v) in d13.function.params().masks().zip(d13.function.values()) {
        assert_eq!(v, if y & 1 == 1 { 10 } else { -10 });
    }
    let c = classify_theorem1(&d13.function);
    assert_eq!(c.kind, FormKind::F3);
    assert_eq!(d13.lift(&c.witness), vec![1]);
    assert_eq!(c.scale, Rational64::from_integer(10));
}

#[test]
fn classifier_values() {
    let f1 = VertexFunction::from_fn(g(8, 4), |m| (m & 1) as i64 - (m >> 1 & 1) as i64);
    let c = classify_theorem1(&f1);
    assert_eq!((c.kind, c.witness.clone()), (FormKind::F1, vec![0, 1]));
    assert_eq!(c.scale, Rational64::from_integer(1));
    assert!(f1.is_eigenfunction(8).holds());

    assert_eq!(
        classify_theorem1(&VertexFunction::constant(g(6, 3), 0)).kind,
        FormKind::Zero
    );

    let f2 = VertexFunction::from_fn(g(6, 3), |m| match (m >> 3 & 1, m >> 4 & 1) {
        (1, 1) => 3,
        (0, 0) => -3,
        _ => 0,
    });
    let c = classify_theorem1(&f2);
    assert_eq!((c.kind, c.witness.clone()), (FormKind::F2, vec![3, 4]));
    assert_eq!(c.scale, Rational64::from_integer(3));
}

#[test]
fn constant_function() {
    let p = g(7, 3);
    let one = VertexFunction::constant(p, 1);
    assert!(one.is_eigenfunction(12).holds());
    for (i, j) in [(0, 1), (2, 6)] {
        assert!(one.partial_difference(i, j).unwrap().function.is_zero());
    }
}

#[test]
fn block_decompositions() {
    let bd = |p: jeqp::TwoPartition| {
        let (f, _) = VertexFunction::of_partition(&p).unwrap();
        block_decomposition(&f).unwrap()
    };
    let c2 = bd(construction2(3).unwrap());
    assert_eq!(c2.to_string(), "{1,2}{3,4,5,6}");
    assert_eq!(c2.size_multiset(), vec![4, 2]);
    assert_eq!(bd(construction4(3).unwrap()).to_string(), "{1,2,3}{4,5,6}");
    // x6 is determined by x1..x5 at weight 3, so it joins the block {2,3}
    assert_eq!(bd(construction1(3).unwrap()).to_string(), "{1}{2,3,6}{4,5}");
    assert_eq!(bd(construction3(5).unwrap()).largest(), 6);
    assert_eq!(bd(construction1(5).unwrap()).largest(), 7);
    assert_eq!(bd(construction2(5).unwrap()).size_multiset(), vec![8, 2]);
}

#[test]
fn cross_edges() {
    for (p, expected) in [
        (construction2(3).unwrap(), 48),
        (construction4(3).unwrap(), 18),
        (construction1(3).unwrap(), 42),
    ] {
        let audit = lemma5_audit(&p).unwrap();
        assert!(audit.equal);
        assert_eq!(audit.rhs, expected);
        assert_eq!(cross_edge_count(&p), expected);
    }
}

#[test]
fn construction4_census_w5() {
    let out = system1_census(&construction4(5).unwrap()).unwrap();
    let CensusOutcome::Complete {
        census,
        equation,
        total_ok,
        equation_ok,
    } = out
    else {
        panic!("expected a complete census, got {out:?}");
    };
    assert_eq!(
        census,
        DiffCensus {
            k0: 24,
            k1: 0,
            k2: 21
        }
    );
    assert_eq!(equation.lhs, 315);
    assert!(total_ok && equation_ok);
}

#[test]
fn construction2_census_routes_to_f3() {
    let out = system1_census(&construction2(4).unwrap()).unwrap();
    assert!(matches!(out, CensusOutcome::RoutedToF3 { .. }));
    assert!(out.passes());
}

#[test]
fn canonical_forms() {
    let c2 = construction2(3).unwrap();
    let moved = permute_partition(&c2, &[2, 3, 0, 1, 4, 5], false).unwrap();
    assert_eq!(
        canonical_form(&c2).unwrap().membership,
        canonical_form(&moved).unwrap().membership
    );
    assert_ne!(
        canonical_form(&construction2(5).unwrap())
            .unwrap()
            .membership,
        canonical_form(&construction3(5).unwrap())
            .unwrap()
            .membership
    );
    let c4 = construction4(3).unwrap();
    assert!(equivalent(&c4, &c4.swapped()).unwrap());
}

#[test]
fn relabelled_pattern_is_equivalent() {
    let pattern = Construction::C1
        .pattern()
        .permuted(&[3, 1, 4, 0, 2])
        .unwrap();
    let p = pattern_partition(g(8, 4), &pattern).unwrap();
    assert_ne!(p, construction1(4).unwrap());
    assert!(equivalent(&p, &construction1(4).unwrap()).unwrap());
    assert!(!equivalent(&construction2(4).unwrap(), &construction4(4).unwrap()).unwrap());
}

#[test]
fn pattern_alternatives_are_decided_by_canon() {
    // x1 + x3 in {0, 2}
    let alt = PrefixPattern::from_strings(
        4,
        &[
            "0000", "0100", "0001", "0101", "1010", "1110", "1011", "1111",
        ],
    )
    .unwrap();
    let p = pattern_partition(g(8, 4), &alt).unwrap();
    assert!(equivalent(&p, &construction2(4).unwrap()).unwrap());
}

#[test]
fn f3_and_block_audits() {
    assert!(prop2_check(&construction2(4).unwrap()).unwrap());
    assert!(prop2_check(&construction4(4).unwrap()).unwrap());
    for p in [construction1(5), construction2(5), construction3(5)] {
        assert!(prop3_check(&p.unwrap()).unwrap());
    }
}

#[test]
fn construction1_has_f3_difference_with_b_3w_minus_2() {
    // g_{4,1}(y) = 1 exactly when y_5 = 1, yet b = 3w - 2
    let p = construction1(4).unwrap();
    let (f, m) = VertexFunction::of_partition(&p).unwrap();
    assert_eq!(m.b, 10);
    let d = f.partial_difference(3, 0).unwrap();
    let c = classify_theorem1(&d.function);
    assert_eq!(c.kind, FormKind::F3);
    assert_eq!(d.lift(&c.witness), vec![4]);
    assert!(!prop2_check(&p).unwrap());
}

#[test]
fn first_eigenvalue_partition_is_not_second() {
    let p = coordinate_partition(g(6, 3), 0).unwrap();
    let m = p.verify_equitable().matrix().unwrap();
    assert_eq!(m.eigenvalues().1, g(6, 3).eigenvalue(1).unwrap());
    assert!(prop2_check(&p).is_err());
}
