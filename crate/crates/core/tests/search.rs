use std::collections::{BTreeMap, BTreeSet};

use jeqp::canon::canonical_form;
use jeqp::eigenfn::lemma5_audit;
use jeqp::search::{enumerate, SearchSpec, SearchStatus};
use jeqp::{admissible_matrices, AntipodalCheck, GraphParams, QuotientMatrix, TwoPartition};

/// All equitable partitions by exhaustive scan, keyed by exact quotient
/// matrix; each partition is a bit set of the vertices in `C2`.
fn brute_force(n: u32, w: u32) -> BTreeMap<QuotientMatrix, BTreeSet<u64>> {
    let masks: Vec<u64> = (0u64..1 << n).filter(|m| m.count_ones() == w).collect();
    let adj: Vec<Vec<usize>> = masks
        .iter()
        .map(|&x| {
            (0..masks.len())
                .filter(|&j| (x & masks[j]).count_ones() == w - 1)
                .collect()
        })
        .collect();
    let k = w * (n - w);
    let order = masks.len();
    let mut out: BTreeMap<QuotientMatrix, BTreeSet<u64>> = BTreeMap::new();
    for code in 1u64..(1 << order) - 1 {
        let mut row = [None::<u32>; 2];
        let ok = (0..order).all(|v| {
            let cell = (code >> v & 1) as usize;
            let in2 = adj[v].iter().filter(|&&u| code >> u & 1 == 1).count() as u32;
            *row[cell].get_or_insert(in2) == in2
        });
        if ok {
            let (b, d) = (row[0].unwrap(), row[1].unwrap());
            let m = QuotientMatrix {
                a: k - b,
                b,
                c: k - d,
                d,
            };
            out.entry(m).or_default().insert(code);
        }
    }
    out
}

fn code(p: &TwoPartition) -> u64 {
    p.membership()
        .iter()
        .enumerate()
        .fold(0, |acc, (v, &c)| acc | ((c == 2) as u64) << v)
}

fn labelled(g: GraphParams, m: QuotientMatrix) -> BTreeSet<u64> {
    let mut spec = SearchSpec::new(g, m);
    spec.symmetry = false;
    spec.keep_labeled = true;
    let out = enumerate(&spec).unwrap();
    assert_eq!(out.status, SearchStatus::Complete);
    out.labeled.unwrap().iter().map(code).collect()
}

#[test]
fn matches_brute_force_for_every_matrix() {
    for (n, w) in [(4, 2), (5, 2), (6, 2), (7, 2)] {
        let g = GraphParams::new(n, w).unwrap();
        for (m, expected) in brute_force(n, w) {
            assert_eq!(labelled(g, m), expected, "{g} {m}");
            let classes: BTreeSet<Vec<u8>> = expected
                .iter()
                .map(|&c| {
                    let cells = (0..g.order()).map(|v| 1 + (c >> v & 1) as u8).collect();
                    let p = TwoPartition::from_membership(g, cells).unwrap();
                    canonical_form(&p).unwrap().membership
                })
                .collect();
            let found = enumerate(&SearchSpec::new(g, m)).unwrap();
            let got: BTreeSet<Vec<u8>> = found
                .partitions
                .iter()
                .map(|p| p.membership().to_vec())
                .collect();
            assert_eq!(got, classes, "{g} {m}");
        }
    }
}

#[test]
fn matrices_without_partitions_come_back_empty() {
    let g = GraphParams::new(6, 2).unwrap();
    let found = brute_force(6, 2);
    for am in admissible_matrices(g).unwrap().iter() {
        let out = enumerate(&SearchSpec::new(g, am.matrix)).unwrap();
        assert_eq!(out.status, SearchStatus::Complete);
        assert_eq!(out.partitions.is_empty(), !found.contains_key(&am.matrix));
    }
}

fn classes(spec: &SearchSpec) -> Vec<String> {
    let out = enumerate(spec).unwrap();
    assert_eq!(out.status, SearchStatus::Complete);
    out.partitions
        .iter()
        .map(|p| p.membership_string())
        .collect()
}

#[test]
fn result_does_not_depend_on_configuration() {
    let g = GraphParams::new(8, 4).unwrap();
    for b in [8, 10, 12] {
        let m = admissible_matrices(g).unwrap().get(b).unwrap();
        let base = SearchSpec::new(g, m);
        let reference = classes(&base);
        assert!(!reference.is_empty());
        for (threads, split) in [(2, 4), (3, 10)] {
            let mut spec = base.clone();
            spec.threads = threads;
            spec.split_depth = split;
            assert_eq!(classes(&spec), reference, "b={b} threads={threads}");
        }
        let mut spec = base.clone();
        spec.shell_depth = Some(1);
        assert_eq!(classes(&spec), reference, "b={b} shell depth 1");
        let mut spec = base.clone();
        spec.antipodal = Some(false);
        assert_eq!(classes(&spec), reference, "b={b} without antipodal forcing");
    }
}

#[test]
fn symmetry_does_not_change_classes() {
    let g = GraphParams::new(7, 3).unwrap();
    for am in admissible_matrices(g).unwrap().iter() {
        let mut off = SearchSpec::new(g, am.matrix);
        off.symmetry = false;
        assert_eq!(classes(&off), classes(&SearchSpec::new(g, am.matrix)));
    }
}

#[test]
fn emitted_partitions_pass_audits() {
    let g = GraphParams::new(8, 4).unwrap();
    for am in admissible_matrices(g).unwrap().iter() {
        let out = enumerate(&SearchSpec::new(g, am.matrix)).unwrap();
        for p in &out.partitions {
            let m = p.verify_equitable().matrix().unwrap();
            assert!(m == am.matrix || m == am.matrix.swapped(), "{m}");
            assert_eq!(p.antipodal_closed().unwrap(), AntipodalCheck::Closed);
            assert!(lemma5_audit(p).unwrap().equal);
            assert_eq!(canonical_form(p).unwrap().membership, p.membership());
        }
    }
}

#[test]
fn labelled_solutions_with_symmetry_fix_vertex_zero() {
    let g = GraphParams::new(8, 4).unwrap();
    let m = admissible_matrices(g).unwrap().get(12).unwrap();
    let mut spec = SearchSpec::new(g, m);
    spec.keep_labeled = true;
    let out = enumerate(&spec).unwrap();
    let labeled = out.labeled.unwrap();
    // C1 = {x_i = x_j = x_k} with the triple inside {1..4} or {5..8}
    assert_eq!(labeled.len(), 8);
    assert!(labeled.iter().all(|p| p.cell(0) == 1));
    assert_eq!(out.partitions.len(), 1);
}

#[test]
fn budget_exhaustion_is_reported() {
    let g = GraphParams::new(8, 4).unwrap();
    let m = admissible_matrices(g).unwrap().get(8).unwrap();
    let mut spec = SearchSpec::new(g, m);
    spec.node_limit = 100;
    let out = enumerate(&spec).unwrap();
    assert_eq!(out.status, SearchStatus::BudgetExhausted);
    assert!(out.nodes > 100);
}
