//! Counting identities for equitable 2-partitions: cross edges versus
//! supports of partial differences, the sum-of-products bound for block
//! sizes, and the census of partial-difference types for `n = 2w`.

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use super::classify::{classify_theorem1, FormKind};
use super::function::VertexFunction;
use crate::error::{param, Error, Result};
use crate::johnson::{binomial, GraphParams, JohnsonGraph};
use crate::partition::{QuotientMatrix, TwoPartition};

/// Both sides of the identity `bc/(b+c)·C(n,w) = Σ_{i<j} |S(f_{i,j})|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma5Audit {
    pub lhs: Rational64,
    pub rhs: u64,
    pub equal: bool,
}

/// Evaluates both sides for an equitable partition.
pub fn lemma5_audit(p: &TwoPartition) -> Result<Lemma5Audit> {
    let (f, m) = VertexFunction::of_partition(p)?;
    let lhs = cross_edges_formula(p.params(), &m);
    let n = p.params().n();
    let pairs: Vec<(u32, u32)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let rhs: u64 = pairs
        .par_iter()
        .map(|&(i, j)| f.difference_support(i, j) as u64)
        .sum();
    Ok(Lemma5Audit {
        equal: lhs == Rational64::from_integer(rhs as i64),
        lhs,
        rhs,
    })
}

/// `bc/(b+c)·C(n,w)`.
pub fn cross_edges_formula(params: GraphParams, m: &QuotientMatrix) -> Rational64 {
    let (b, c) = (m.b as i64, m.c as i64);
    Rational64::new(b * c * params.order() as i64, b + c)
}

/// Number of edges whose ends lie in different cells, counted directly.
pub fn cross_edge_count(p: &TwoPartition) -> u64 {
    let g = JohnsonGraph::new(p.params());
    (0..g.order())
        .map(|i| {
            g.neighbors(i)
                .iter()
                .filter(|&&j| (j as usize) > i && p.cell(j as usize) != p.cell(i))
                .count() as u64
        })
        .sum()
}

/// Lower bound `½·s·⌊N/s⌋·(2N - s - s⌊N/s⌋)` on `Σ_{i<j} x_i x_j` over
/// nonnegative vectors summing to `N` with every entry at most `s`.
pub fn pairs_lower_bound(total: i64, s: i64) -> Result<i64> {
    if !(0 < s && s < total) {
        return param(format!("need 0 < s < N, got N = {total}, s = {s}"));
    }
    let q = total / s;
    Ok(s * q * (2 * total - s - s * q) / 2)
}

/// Numbers of partial differences equivalent to zero, `F1` and `F2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiffCensus {
    pub k0: u64,
    pub k1: u64,
    pub k2: u64,
}

/// The relation `bc(2w-3) = k1·w(w-1) + k2·w(w-2)` for given `w` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct System1Equation {
    pub lhs: i64,
    pub k1_coef: i64,
    pub k2_coef: i64,
}

impl System1Equation {
    /// `b + c = 4w - 2` is implied by `n = 2w`.
    pub fn new(w: u32, b: u32) -> Self {
        let (w, b) = (w as i64, b as i64);
        let c = 4 * w - 2 - b;
        System1Equation {
            lhs: b * c * (2 * w - 3),
            k1_coef: w * (w - 1),
            k2_coef: w * (w - 2),
        }
    }

    /// Divides through by the common gcd.
    pub fn reduced(self) -> Self {
        let g = gcd(gcd(self.lhs, self.k1_coef), self.k2_coef).max(1);
        System1Equation {
            lhs: self.lhs / g,
            k1_coef: self.k1_coef / g,
            k2_coef: self.k2_coef / g,
        }
    }

    pub fn holds(&self, census: &DiffCensus) -> bool {
        self.lhs == self.k1_coef * census.k1 as i64 + self.k2_coef * census.k2 as i64
    }

    /// Nonnegative solutions `(k1, k2)` with `k1 + k2 <= max_pairs`.
    pub fn solutions(&self, max_pairs: i64) -> Vec<(i64, i64)> {
        (0..=max_pairs)
            .filter_map(|k1| {
                let rest = self.lhs - self.k1_coef * k1;
                if rest < 0 || self.k2_coef == 0 {
                    return (rest == 0).then_some((k1, 0));
                }
                (rest % self.k2_coef == 0 && k1 + rest / self.k2_coef <= max_pairs)
                    .then(|| (k1, rest / self.k2_coef))
            })
            .collect()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Admissible `b` on `J(2w, w)` for which the census equation has a
/// nonnegative integer solution with `k1 + k2 <= C(2w, 2)`.
pub fn system1_feasible_b(w: u32) -> Vec<u32> {
    let pairs = binomial(2 * w, 2) as i64;
    (2 * w - 1..=4 * w - 3)
        .filter(|&b| !System1Equation::new(w, b).solutions(pairs).is_empty())
        .collect()
}

/// Result of [`system1_census`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CensusOutcome {
    /// Every difference was zero, `F1` or `F2`.
    Complete {
        census: DiffCensus,
        equation: System1Equation,
        total_ok: bool,
        equation_ok: bool,
    },
    /// Some difference (0-based pair) is of type `F3`; such partitions are
    /// handled by the `F3` route instead.
    RoutedToF3 { pair: (u32, u32) },
}

impl CensusOutcome {
    pub fn passes(&self) -> bool {
        match self {
            CensusOutcome::Complete {
                total_ok,
                equation_ok,
                ..
            } => *total_ok && *equation_ok,
            CensusOutcome::RoutedToF3 { .. } => true,
        }
    }
}

/// Classifies every partial difference of `f = b·χ_{C1} - c·χ_{C2}` for an
/// equitable partition of `J(2w, w)` with the second eigenvalue and checks
/// `k0 + k1 + k2 = C(2w, 2)` together with the census equation.
pub fn system1_census(p: &TwoPartition) -> Result<CensusOutcome> {
    let params = p.params();
    if !params.is_balanced() {
        return param(format!("census needs n = 2w, got {params}"));
    }
    let (f, m) = VertexFunction::of_partition(p)?;
    let l2 = params.eigenvalue(2)?;
    if m.eigenvalues().1 != l2 {
        return param(format!(
            "quotient matrix {m} does not have the second eigenvalue {l2}"
        ));
    }
    let n = params.n();
    let pairs: Vec<(u32, u32)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let kinds: Vec<Result<FormKind>> = pairs
        .par_iter()
        .map(|&(i, j)| Ok(classify_theorem1(&f.partial_difference(i, j)?.function).kind))
        .collect();
    let mut census = DiffCensus {
        k0: 0,
        k1: 0,
        k2: 0,
    };
    for (kind, &pair) in kinds.into_iter().zip(&pairs) {
        match kind? {
            FormKind::Zero => census.k0 += 1,
            FormKind::F1 => census.k1 += 1,
            FormKind::F2 => census.k2 += 1,
            FormKind::F3 => return Ok(CensusOutcome::RoutedToF3 { pair }),
            other => {
                return Err(Error::InvalidInput(format!(
                    "partial difference at ({},{}) classifies as {other}",
                    pair.0 + 1,
                    pair.1 + 1
                )))
            }
        }
    }
    let m = m.normalized();
    let equation = System1Equation::new(params.w(), m.b);
    Ok(CensusOutcome::Complete {
        total_ok: census.k0 + census.k1 + census.k2 == pairs.len() as u64,
        equation_ok: equation.holds(&census),
        census,
        equation,
    })
}
