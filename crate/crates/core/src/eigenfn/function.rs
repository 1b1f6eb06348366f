use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::johnson::{BitIter, GraphParams, JohnsonGraph, VertexIndex};
use crate::partition::{Equitability, QuotientMatrix, TwoPartition};

/// An integer-valued function on the vertices of `J(n, w)`, indexed by colex
/// rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexFunction {
    params: GraphParams,
    values: Vec<i64>,
}

/// Outcome of [`VertexFunction::is_eigenfunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenCheck {
    Holds,
    /// The all-zero function is never an eigenfunction.
    ZeroFunction,
    /// First vertex where `λ f(x) != Σ_{y~x} f(y)`.
    FailsAt(VertexIndex),
}

impl EigenCheck {
    pub fn holds(self) -> bool {
        self == EigenCheck::Holds
    }
}

impl VertexFunction {
    pub fn new(params: GraphParams, values: Vec<i64>) -> Result<Self> {
        if values.len() != params.order() {
            return param(format!(
                "{} values given for {params} with {} vertices",
                values.len(),
                params.order()
            ));
        }
        Ok(VertexFunction { params, values })
    }

    pub fn from_fn(params: GraphParams, f: impl Fn(u64) -> i64) -> Self {
        VertexFunction {
            params,
            values: params.masks().map(f).collect(),
        }
    }

    pub fn constant(params: GraphParams, value: i64) -> Self {
        VertexFunction {
            params,
            values: vec![value; params.order()],
        }
    }

    /// `b·χ_{C1} - c·χ_{C2}` for an equitable partition, together with its
    /// quotient matrix.
    pub fn of_partition(p: &TwoPartition) -> Result<(Self, QuotientMatrix)> {
        match p.verify_equitable() {
            Equitability::Equitable(m) => Ok((Self::of_partition_with(p, &m), m)),
            Equitability::Irregular(w) => param(format!(
                "partition is not equitable (vertex {} has counts {:?}, expected {:?})",
                w.vertex.0, w.found, w.expected
            )),
        }
    }

    /// `b·χ_{C1} - c·χ_{C2}` using the off-diagonal entries of `m`.
    pub fn of_partition_with(p: &TwoPartition, m: &QuotientMatrix) -> Self {
        let (b, c) = (m.b as i64, m.c as i64);
        VertexFunction {
            params: p.params(),
            values: p
                .membership()
                .iter()
                .map(|&cell| if cell == 1 { b } else { -c })
                .collect(),
        }
    }

    #[inline]
    pub fn params(&self) -> GraphParams {
        self.params
    }

    #[inline]
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    #[inline]
    pub fn at_mask(&self, mask: u64) -> i64 {
        self.values[self.params.rank_mask(mask)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `|S(f)|`, the number of vertices where the function is nonzero.
    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    pub fn scaled(&self, k: i64) -> VertexFunction {
        VertexFunction {
            params: self.params,
            values: self.values.iter().map(|&v| v * k).collect(),
        }
    }

    pub fn is_eigenfunction_in(&self, graph: &JohnsonGraph, lambda: i64) -> EigenCheck {
        assert_eq!(graph.params(), self.params, "graph/function mismatch");
        if self.is_zero() {
            return EigenCheck::ZeroFunction;
        }
        let failing = (0..graph.order()).into_par_iter().find_first(|&i| {
            let s: i64 = graph
                .neighbors(i)
                .iter()
                .map(|&j| self.values[j as usize])
                .sum();
            s != lambda * self.values[i]
        });
        match failing {
            Some(i) => EigenCheck::FailsAt(VertexIndex(i)),
            None => EigenCheck::Holds,
        }
    }

    /// Exact check of `λ f(x) = Σ_{y~x} f(y)` at every vertex.
    pub fn is_eigenfunction(&self, lambda: i64) -> EigenCheck {
        self.is_eigenfunction_in(&JohnsonGraph::new(self.params), lambda)
    }

    fn check_pair(&self, j1: u32, j2: u32) -> Result<()> {
        let n = self.params.n();
        if j1 == j2 || j1 >= n || j2 >= n {
            return param(format!("coordinate pair ({j1},{j2}) invalid for n = {n}"));
        }
        Ok(())
    }

    /// The partial difference `f_{j1,j2}` (0-based coordinates) on
    /// `J(n-2, w-1)` over the remaining coordinates in increasing order:
    /// `f(y + e_{j1}) - f(y + e_{j2})`.
    pub fn partial_difference(&self, j1: u32, j2: u32) -> Result<PartialDifference> {
        self.check_pair(j1, j2)?;
        let (n, w) = (self.params.n(), self.params.w());
        if w < 2 {
            return param("partial differences need w >= 2");
        }
        let target = GraphParams::new(n - 2, w - 1)
            .map_err(|e| Error::Parameter(format!("partial difference of {}: {e}", self.params)))?;
        let coords: Vec<u32> = (0..n).filter(|&c| c != j1 && c != j2).collect();
        let values = target
            .masks()
            .map(|y| {
                let base = deposit(y, &coords);
                self.at_mask(base | 1 << j1) - self.at_mask(base | 1 << j2)
            })
            .collect();
        Ok(PartialDifference {
            function: VertexFunction {
                params: target,
                values,
            },
            coords,
        })
    }

    /// Whether `f_{j1,j2} ≡ 0`, i.e. `f` is invariant under swapping the two
    /// coordinates.
    pub fn difference_vanishes(&self, j1: u32, j2: u32) -> bool {
        let swap = (1u64 << j1) | (1u64 << j2);
        self.params
            .masks()
            .zip(self.values.iter())
            .filter(|(m, _)| m >> j1 & 1 == 1 && m >> j2 & 1 == 0)
            .all(|(m, &v)| v == self.at_mask(m ^ swap))
    }

    /// `|S(f_{j1,j2})|` without materialising the difference.
    pub fn difference_support(&self, j1: u32, j2: u32) -> usize {
        let swap = (1u64 << j1) | (1u64 << j2);
        self.params
            .masks()
            .zip(self.values.iter())
            .filter(|(m, &v)| m >> j1 & 1 == 1 && m >> j2 & 1 == 0 && v != self.at_mask(m ^ swap))
            .count()
    }
}

/// A partial difference together with the original (0-based) coordinate of
/// each of its local coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialDifference {
    pub function: VertexFunction,
    pub coords: Vec<u32>,
}

impl PartialDifference {
    /// Maps local coordinates back to coordinates of the parent function.
    pub fn lift(&self, local: &[u32]) -> Vec<u32> {
        local.iter().map(|&c| self.coords[c as usize]).collect()
    }
}

/// Spreads the bits of `y` onto the positions listed in `coords`.
#[inline]
pub(crate) fn deposit(y: u64, coords: &[u32]) -> u64 {
    BitIter(y).fold(0u64, |acc, k| acc | 1 << coords[k as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, w: u32) -> GraphParams {
        GraphParams::new(n, w).unwrap()
    }

    fn bit(m: u64, i: u32) -> i64 {
        (m >> i & 1) as i64
    }

    #[test]
    fn f1_is_first_eigenfunction() {
        let g = p(8, 4);
        let f1 = VertexFunction::from_fn(g, |m| bit(m, 0) - bit(m, 1));
        assert_eq!(
            f1.is_eigenfunction(g.eigenvalue(1).unwrap()),
            EigenCheck::Holds
        );
        assert!(matches!(f1.is_eigenfunction(2), EigenCheck::FailsAt(_)));
    }

    #[test]
    fn constant_and_zero() {
        let g = p(7, 3);
        let one = VertexFunction::constant(g, 1);
        assert!(one.is_eigenfunction(12).holds());
        let zero = VertexFunction::constant(g, 0);
        assert_eq!(zero.is_eigenfunction(0), EigenCheck::ZeroFunction);
        let d = one.partial_difference(0, 4).unwrap();
        assert!(d.function.is_zero());
        assert_eq!(d.function.params(), p(5, 2));
    }

    #[test]
    fn partial_difference_errors() {
        let f = VertexFunction::constant(p(6, 3), 1);
        assert!(f.partial_difference(1, 1).is_err());
        assert!(f.partial_difference(0, 6).is_err());
        let f = VertexFunction::constant(p(5, 1), 1);
        assert!(f.partial_difference(0, 1).is_err());
        assert!(VertexFunction::new(p(6, 3), vec![0; 19]).is_err());
    }

    #[test]
    fn difference_agrees_with_fast_paths() {
        let g = p(7, 3);
        let f = VertexFunction::from_fn(g, |m| (m.wrapping_mul(0x9e37_79b9) >> 7) as i64 % 5);
        for j1 in 0..7 {
            for j2 in 0..7 {
                if j1 == j2 {
                    continue;
                }
                let d = f.partial_difference(j1, j2).unwrap();
                assert_eq!(d.function.is_zero(), f.difference_vanishes(j1, j2));
                assert_eq!(d.function.support_size(), f.difference_support(j1, j2));
                let r = f.partial_difference(j2, j1).unwrap();
                assert_eq!(r.function, d.function.scaled(-1));
            }
        }
    }

    #[test]
    fn lift_maps_back() {
        let f = VertexFunction::constant(p(6, 3), 0);
        let d = f.partial_difference(0, 2).unwrap();
        assert_eq!(d.coords, vec![1, 3, 4, 5]);
        assert_eq!(d.lift(&[0, 3]), vec![1, 5]);
    }
}
