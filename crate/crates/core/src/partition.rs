//! Two-cell vertex partitions, equitability and quotient matrices.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::johnson::{GraphParams, JohnsonGraph, VertexIndex};

/// A partition `(C1, C2)` of the vertices of `J(n, w)`, stored as one cell
/// label (`1` or `2`) per vertex in colex order. Both cells are nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoPartition {
    params: GraphParams,
    membership: Vec<u8>,
}

impl TwoPartition {
    pub fn from_membership(params: GraphParams, membership: Vec<u8>) -> Result<Self> {
        if membership.len() != params.order() {
            return Err(Error::InvalidPartition(format!(
                "membership has length {} but {params} has {} vertices",
                membership.len(),
                params.order()
            )));
        }
        if let Some(pos) = membership.iter().position(|&c| c != 1 && c != 2) {
            return Err(Error::InvalidPartition(format!(
                "cell label {} at index {pos} is not 1 or 2",
                membership[pos]
            )));
        }
        let ones = membership.iter().filter(|&&c| c == 1).count();
        if ones == 0 || ones == membership.len() {
            return Err(Error::InvalidPartition("a cell is empty".into()));
        }
        Ok(TwoPartition { params, membership })
    }

    /// Builds the partition with `C1 = { x : in_first(mask(x)) }`.
    pub fn from_predicate(params: GraphParams, in_first: impl Fn(u64) -> bool) -> Result<Self> {
        let membership = params
            .masks()
            .map(|m| if in_first(m) { 1 } else { 2 })
            .collect();
        TwoPartition::from_membership(params, membership)
    }

    /// Parses a membership string such as `"12211..."`.
    pub fn from_membership_str(params: GraphParams, s: &str) -> Result<Self> {
        let membership = s
            .bytes()
            .map(|b| match b {
                b'1' => Ok(1),
                b'2' => Ok(2),
                _ => Err(Error::Format(format!("bad cell label {:?}", b as char))),
            })
            .collect::<Result<Vec<u8>>>()?;
        TwoPartition::from_membership(params, membership)
    }

    #[inline]
    pub fn params(&self) -> GraphParams {
        self.params
    }

    #[inline]
    pub fn membership(&self) -> &[u8] {
        &self.membership
    }

    #[inline]
    pub fn cell(&self, index: usize) -> u8 {
        self.membership[index]
    }

    #[inline]
    pub fn cell_of_mask(&self, mask: u64) -> u8 {
        self.membership[self.params.rank_mask(mask)]
    }

    pub fn membership_string(&self) -> String {
        self.membership
            .iter()
            .map(|&c| (b'0' + c) as char)
            .collect()
    }

    /// `(|C1|, |C2|)`.
    pub fn cell_sizes(&self) -> (usize, usize) {
        let ones = self.membership.iter().filter(|&&c| c == 1).count();
        (ones, self.membership.len() - ones)
    }

    /// The same partition with the cell labels exchanged.
    pub fn swapped(&self) -> TwoPartition {
        TwoPartition {
            params: self.params,
            membership: self.membership.iter().map(|&c| 3 - c).collect(),
        }
    }

    /// A copy with the cell of one vertex flipped.
    pub fn with_flipped(&self, index: usize) -> Result<TwoPartition> {
        let mut membership = self.membership.clone();
        membership[index] = 3 - membership[index];
        TwoPartition::from_membership(self.params, membership)
    }

    /// One bit per vertex in colex order, least significant bit first; a set
    /// bit marks cell 2.
    pub fn to_packed_bits(&self) -> Vec<u8> {
        let mut bytes = vec![0u8; self.membership.len().div_ceil(8)];
        for (i, &c) in self.membership.iter().enumerate() {
            if c == 2 {
                bytes[i / 8] |= 1 << (i % 8);
            }
        }
        bytes
    }

    pub fn from_packed_bits(params: GraphParams, bytes: &[u8]) -> Result<Self> {
        let len = params.order();
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Format(format!(
                "expected {} bytes for {params}, got {}",
                len.div_ceil(8),
                bytes.len()
            )));
        }
        if !len.is_multiple_of(8) && bytes[len / 8] >> (len % 8) != 0 {
            return Err(Error::Format("padding bits are not zero".into()));
        }
        let membership = (0..len)
            .map(|i| 1 + (bytes[i / 8] >> (i % 8) & 1))
            .collect();
        TwoPartition::from_membership(params, membership)
    }

    /// Checks equitability against a prebuilt graph for the same parameters.
    pub fn verify_equitable_in(&self, graph: &JohnsonGraph) -> Equitability {
        assert_eq!(graph.params(), self.params, "graph/partition mismatch");
        let counts: Vec<(u32, u32)> = (0..graph.order())
            .into_par_iter()
            .map(|i| {
                let into_first = graph
                    .neighbors(i)
                    .iter()
                    .filter(|&&j| self.membership[j as usize] == 1)
                    .count() as u32;
                (into_first, self.params.degree() - into_first)
            })
            .collect();
        let mut expected: [Option<(u32, u32)>; 2] = [None, None];
        for (i, &found) in counts.iter().enumerate() {
            let cell = self.membership[i];
            match expected[cell as usize - 1] {
                None => expected[cell as usize - 1] = Some(found),
                Some(e) if e != found => {
                    return Equitability::Irregular(IrregularWitness {
                        vertex: VertexIndex(i),
                        cell,
                        expected: e,
                        found,
                    })
                }
                Some(_) => {}
            }
        }
        let (a, b) = expected[0].expect("cell 1 nonempty");
        let (c, d) = expected[1].expect("cell 2 nonempty");
        Equitability::Equitable(QuotientMatrix { a, b, c, d })
    }

    /// Checks whether neighbour counts into each cell depend only on the
    /// vertex's own cell. The witness is the first deviating vertex in colex
    /// order, compared against the first vertex of its cell.
    pub fn verify_equitable(&self) -> Equitability {
        self.verify_equitable_in(&JohnsonGraph::new(self.params))
    }

    /// For `n = 2w`: whether every vertex shares its cell with its complement.
    pub fn antipodal_closed(&self) -> Result<AntipodalCheck> {
        if !self.params.is_balanced() {
            return param(format!("antipodality needs n = 2w, got {}", self.params));
        }
        let full = self.params.full_mask();
        for (i, m) in self.params.masks().enumerate() {
            if self.membership[i] != self.cell_of_mask(!m & full) {
                return Ok(AntipodalCheck::Broken(VertexIndex(i)));
            }
        }
        Ok(AntipodalCheck::Closed)
    }
}

impl fmt::Display for TwoPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.params, self.membership_string())
    }
}

/// Outcome of [`TwoPartition::antipodal_closed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AntipodalCheck {
    Closed,
    /// A vertex whose complement lies in the other cell.
    Broken(VertexIndex),
}

/// Neighbour counts `(into C1, into C2)` at the first vertex breaking
/// regularity, with the counts seen earlier in its cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IrregularWitness {
    pub vertex: VertexIndex,
    pub cell: u8,
    pub expected: (u32, u32),
    pub found: (u32, u32),
}

/// Outcome of an equitability check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equitability {
    Equitable(QuotientMatrix),
    Irregular(IrregularWitness),
}

impl Equitability {
    pub fn matrix(&self) -> Option<QuotientMatrix> {
        match self {
            Equitability::Equitable(m) => Some(*m),
            Equitability::Irregular(_) => None,
        }
    }
}

/// The quotient matrix `[[a, b], [c, d]]` of an equitable 2-partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuotientMatrix {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl QuotientMatrix {
    /// Validates `a + b = c + d = w(n - w)` and `b, c > 0`.
    pub fn new(params: GraphParams, a: u32, b: u32, c: u32, d: u32) -> Result<Self> {
        let k = params.degree();
        if a + b != k || c + d != k {
            return param(format!(
                "rows of [[{a},{b}],[{c},{d}]] must sum to the degree {k} of {params}"
            ));
        }
        if b == 0 || c == 0 {
            return param("off-diagonal entries must be positive");
        }
        Ok(QuotientMatrix { a, b, c, d })
    }

    /// The second-eigenvalue matrix with the given `b`, if all entries are
    /// valid: `[[k - b, b], [2n - 2 - b, k - 2n + 2 + b]]`.
    pub fn second_eigenvalue_family(params: GraphParams, b: u32) -> Result<Self> {
        let k = params.degree() as i64;
        let n = params.n() as i64;
        let (bb, c) = (b as i64, 2 * n - 2 - b as i64);
        if c < 1 || bb > k || c > k {
            return param(format!("b = {b} gives no valid matrix for {params}"));
        }
        QuotientMatrix::new(params, (k - bb) as u32, b, c as u32, (k - c) as u32)
    }

    /// The two eigenvalues `(a + b, a - c)`.
    pub fn eigenvalues(&self) -> (i64, i64) {
        (self.a as i64 + self.b as i64, self.a as i64 - self.c as i64)
    }

    /// The matrix of the cell-swapped partition.
    pub fn swapped(&self) -> QuotientMatrix {
        QuotientMatrix {
            a: self.d,
            b: self.c,
            c: self.b,
            d: self.a,
        }
    }

    /// Representative with `b >= c`.
    pub fn normalized(&self) -> QuotientMatrix {
        if self.b >= self.c {
            *self
        } else {
            self.swapped()
        }
    }

    /// Cell sizes forced by double counting, `|C1| b = |C2| c`, if integral.
    pub fn cell_sizes(&self, params: GraphParams) -> Option<(usize, usize)> {
        let total = params.order() as u64;
        let num = self.c as u64 * total;
        let den = (self.b + self.c) as u64;
        if !num.is_multiple_of(den) {
            return None;
        }
        let first = (num / den) as usize;
        Some((first, total as usize - first))
    }
}

impl fmt::Display for QuotientMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// `(a + b, a - c)` for a quotient matrix.
pub fn quotient_eigenvalues(m: &QuotientMatrix) -> (i64, i64) {
    m.eigenvalues()
}

/// A quotient matrix of the second-eigenvalue family with its parameter `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdmissibleMatrix {
    pub b: u32,
    pub matrix: QuotientMatrix,
}

/// The quotient matrices with eigenvalues `{w(n-w), λ2(n,w)}` and `b >= c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixFamily {
    pub params: GraphParams,
    pub members: Vec<AdmissibleMatrix>,
}

impl MatrixFamily {
    pub fn get(&self, b: u32) -> Option<QuotientMatrix> {
        self.members.iter().find(|m| m.b == b).map(|m| m.matrix)
    }

    pub fn iter(&self) -> impl Iterator<Item = &AdmissibleMatrix> {
        self.members.iter()
    }
}

/// All admissible quotient matrices of equitable 2-partitions with the second
/// eigenvalue: `b` ranges over `n-1 ..= 2n-3` (so that `b >= c >= 1`), with
/// every entry nonnegative. Requires `w >= 2` and `n >= 2w`.
pub fn admissible_matrices(params: GraphParams) -> Result<MatrixFamily> {
    if params.w() < 2 || params.n() < 2 * params.w() {
        return param(format!(
            "admissible matrices need w >= 2 and n >= 2w, got {params}"
        ));
    }
    let n = params.n();
    let members = (n - 1..=2 * n - 3)
        .filter_map(|b| {
            QuotientMatrix::second_eigenvalue_family(params, b)
                .ok()
                .map(|matrix| AdmissibleMatrix { b, matrix })
        })
        .collect();
    Ok(MatrixFamily { params, members })
}
