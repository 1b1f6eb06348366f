//! Johnson graph fundamentals.
//!
//! A vertex of `J(n, w)` is a `w`-subset of the `n` coordinate positions,
//! stored as a bit mask with coordinate `i` (0-based) in bit `i`. For a fixed
//! weight, numeric order of masks coincides with colexicographic order of
//! supports, so a vertex's [`VertexIndex`] is also its position in the sorted
//! list of masks.
//!
//! Coordinates are 0-based everywhere in this crate except the textual
//! representations, which use 1-based coordinates with coordinate 1 leftmost.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Largest supported coordinate count.
pub const MAX_N: u32 = 62;

const BINOM_SIZE: usize = 65;

const fn build_binomials() -> [[u64; BINOM_SIZE]; BINOM_SIZE] {
    let mut t = [[0u64; BINOM_SIZE]; BINOM_SIZE];
    let mut n = 0;
    while n < BINOM_SIZE {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOMIALS: [[u64; BINOM_SIZE]; BINOM_SIZE] = build_binomials();

/// `C(n, k)`, zero when `k > n`. Valid for `n <= 64`.
#[inline]
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        0
    } else {
        BINOMIALS[n as usize][k as usize]
    }
}

/// Signed binomial that is zero for negative arguments.
pub(crate) fn binomial_i(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n as u32, k as u32) as i64
    }
}

/// The pair `(n, w)` of a Johnson graph `J(n, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphParams {
    n: u32,
    w: u32,
}

impl GraphParams {
    /// Validates `1 <= w <= n - 1` and `n <= MAX_N`.
    pub fn new(n: u32, w: u32) -> Result<Self> {
        if n > MAX_N {
            return param(format!("n = {n} exceeds the supported maximum {MAX_N}"));
        }
        if w == 0 || w >= n {
            return param(format!("J({n},{w}) requires 1 <= w <= n-1"));
        }
        Ok(GraphParams { n, w })
    }

    #[inline]
    pub fn n(self) -> u32 {
        self.n
    }

    #[inline]
    pub fn w(self) -> u32 {
        self.w
    }

    /// Number of vertices, `C(n, w)`.
    #[inline]
    pub fn order(self) -> usize {
        binomial(self.n, self.w) as usize
    }

    /// Vertex degree `w(n - w)`.
    #[inline]
    pub fn degree(self) -> u32 {
        self.w * (self.n - self.w)
    }

    /// Whether `n = 2w`, the case in which every vertex has an antipode.
    #[inline]
    pub fn is_balanced(self) -> bool {
        self.n == 2 * self.w
    }

    #[inline]
    pub(crate) fn full_mask(self) -> u64 {
        (1u64 << self.n) - 1
    }

    /// The `i`-th eigenvalue `(w - i)(n - w - i) - i`, for `0 <= i <= w`.
    pub fn eigenvalue(self, i: u32) -> Result<i64> {
        if i > self.w {
            return param(format!("eigenvalue index {i} outside [0, {}]", self.w));
        }
        let (n, w, i) = (self.n as i64, self.w as i64, i as i64);
        Ok((w - i) * (n - w - i) - i)
    }

    /// Index `i <= diameter()` with `eigenvalue(i) == theta`, if any.
    pub fn eigenvalue_index(self, theta: i64) -> Option<u32> {
        (0..=self.diameter()).find(|&i| self.eigenvalue(i).ok() == Some(theta))
    }

    /// Smaller of `w` and `n - w`; `J(n, w)` and `J(n, n - w)` are isomorphic
    /// under complementation, and the diameter equals this value.
    #[inline]
    pub fn diameter(self) -> u32 {
        self.w.min(self.n - self.w)
    }

    /// Number of vertices at distance `i` from a fixed vertex.
    pub fn shell_size(self, i: u32) -> u64 {
        binomial(self.w, i) * binomial(self.n - self.w, i)
    }

    /// Eigenvalue of the distance-`i` adjacency matrix on the `j`-th
    /// eigenspace (Eberlein polynomial).
    pub fn distance_eigenvalue(self, i: u32, j: u32) -> i64 {
        let w = self.diameter() as i64;
        let m = (self.n as i64) - w;
        let (i, j) = (i as i64, j as i64);
        (0..=i)
            .map(|h| {
                let sign = if h % 2 == 0 { 1 } else { -1 };
                sign * binomial_i(j, h) * binomial_i(w - j, i - h) * binomial_i(m - j, i - h)
            })
            .sum()
    }

    /// Iterates all vertex masks in colex (= [`VertexIndex`]) order.
    pub fn masks(self) -> MaskIter {
        MaskIter {
            next: (1u64 << self.w) - 1,
            limit: 1u64 << self.n,
        }
    }

    /// Colex rank of a mask of weight `w`. The mask is not validated.
    #[inline]
    pub fn rank_mask(self, mask: u64) -> usize {
        let mut rank = 0u64;
        let mut rest = mask;
        let mut k = 1;
        while rest != 0 {
            let pos = rest.trailing_zeros();
            rank += binomial(pos, k);
            k += 1;
            rest &= rest - 1;
        }
        rank as usize
    }

    /// Inverse of [`GraphParams::rank_mask`]. The rank is not validated.
    pub fn unrank_mask(self, rank: usize) -> u64 {
        let mut r = rank as u64;
        let mut mask = 0u64;
        let mut hi = self.n;
        for k in (1..=self.w).rev() {
            // largest c < hi with C(c, k) <= r
            let mut c = hi - 1;
            while binomial(c, k) > r {
                c -= 1;
            }
            mask |= 1u64 << c;
            r -= binomial(c, k);
            hi = c;
        }
        mask
    }
}

impl fmt::Display for GraphParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J({},{})", self.n, self.w)
    }
}

/// Gosper's-hack iterator over weight-`w` masks in increasing order.
pub struct MaskIter {
    next: u64,
    limit: u64,
}

impl Iterator for MaskIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next;
        if cur >= self.limit {
            return None;
        }
        let low = cur & cur.wrapping_neg();
        let ripple = cur + low;
        self.next = (((ripple ^ cur) >> 2) / low) | ripple;
        Some(cur)
    }
}

/// Position of a vertex in colex order, in `[0, C(n, w))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexIndex(pub usize);

/// A vertex of `J(n, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    params: GraphParams,
    mask: u64,
}

impl Vertex {
    pub fn from_mask(params: GraphParams, mask: u64) -> Result<Self> {
        if mask & !params.full_mask() != 0 {
            return param(format!("mask {mask:#x} has bits beyond n = {}", params.n));
        }
        if mask.count_ones() != params.w {
            return param(format!(
                "mask {mask:#x} has weight {} but w = {}",
                mask.count_ones(),
                params.w
            ));
        }
        Ok(Vertex { params, mask })
    }

    /// Builds a vertex from 1-based coordinate positions.
    pub fn from_support(params: GraphParams, support: &[u32]) -> Result<Self> {
        let mut mask = 0u64;
        for &c in support {
            if c == 0 || c > params.n {
                return param(format!("coordinate {c} outside 1..={}", params.n));
            }
            if mask & (1 << (c - 1)) != 0 {
                return param(format!("coordinate {c} repeated"));
            }
            mask |= 1 << (c - 1);
        }
        Vertex::from_mask(params, mask)
    }

    /// Parses a bitstring of length `n`, coordinate 1 leftmost.
    pub fn from_bitstring(params: GraphParams, s: &str) -> Result<Self> {
        if s.len() != params.n as usize {
            return Err(Error::Format(format!(
                "bitstring {s:?} has length {} but n = {}",
                s.len(),
                params.n
            )));
        }
        let mut mask = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => mask |= 1 << i,
                _ => return Err(Error::Format(format!("bad character {ch:?} in bitstring"))),
            }
        }
        Vertex::from_mask(params, mask)
    }

    pub fn unrank(params: GraphParams, index: VertexIndex) -> Result<Self> {
        if index.0 >= params.order() {
            return param(format!(
                "rank {} >= C({},{}) = {}",
                index.0,
                params.n,
                params.w,
                params.order()
            ));
        }
        Ok(Vertex {
            params,
            mask: params.unrank_mask(index.0),
        })
    }

    #[inline]
    pub fn params(&self) -> GraphParams {
        self.params
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn rank(&self) -> VertexIndex {
        VertexIndex(self.params.rank_mask(self.mask))
    }

    /// Whether 0-based coordinate `i` is one.
    #[inline]
    pub fn has(&self, i: u32) -> bool {
        self.mask >> i & 1 == 1
    }

    /// Sorted 1-based support.
    pub fn support(&self) -> Vec<u32> {
        (0..self.params.n)
            .filter(|&i| self.has(i))
            .map(|i| i + 1)
            .collect()
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.params.n)
            .map(|i| if self.has(i) { '1' } else { '0' })
            .collect()
    }

    /// The complementary vertex; only defined when `n = 2w`.
    pub fn antipode(&self) -> Result<Self> {
        if !self.params.is_balanced() {
            return param(format!("antipode requires n = 2w, got {}", self.params));
        }
        Ok(Vertex {
            params: self.params,
            mask: !self.mask & self.params.full_mask(),
        })
    }

    /// Graph distance, `w - |u ∩ v|`.
    pub fn distance(&self, other: &Vertex) -> Result<u32> {
        self.check_same(other)?;
        Ok(self.params.w - (self.mask & other.mask).count_ones())
    }

    /// Whether the supports meet in exactly `w - 1` positions.
    pub fn adjacent(&self, other: &Vertex) -> Result<bool> {
        Ok(self.distance(other)? == 1)
    }

    /// All `w(n - w)` neighbours, sorted by [`VertexIndex`].
    pub fn neighbors(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = neighbor_masks(self.params, self.mask)
            .map(|mask| Vertex {
                params: self.params,
                mask,
            })
            .collect();
        // colex order is numeric mask order
        out.sort_unstable_by_key(|v| v.mask);
        out
    }

    fn check_same(&self, other: &Vertex) -> Result<()> {
        if self.params != other.params {
            return param(format!(
                "vertices from different graphs {} and {}",
                self.params, other.params
            ));
        }
        Ok(())
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

/// Masks obtained from `mask` by swapping a one with a zero.
pub(crate) fn neighbor_masks(params: GraphParams, mask: u64) -> impl Iterator<Item = u64> {
    let zeros = !mask & params.full_mask();
    BitIter(mask).flat_map(move |i| BitIter(zeros).map(move |j| mask ^ (1 << i) ^ (1 << j)))
}

/// Iterator over set bit positions, lowest first.
#[derive(Clone, Copy)]
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// A materialised Johnson graph: vertex masks in colex order and a flat
/// neighbour table (each row sorted by index).
#[derive(Debug, Clone)]
pub struct JohnsonGraph {
    params: GraphParams,
    masks: Vec<u64>,
    adjacency: Vec<u32>,
}

impl JohnsonGraph {
    pub fn new(params: GraphParams) -> Self {
        let masks: Vec<u64> = params.masks().collect();
        let degree = params.degree() as usize;
        let mut adjacency = Vec::with_capacity(masks.len() * degree);
        for &m in &masks {
            let start = adjacency.len();
            adjacency.extend(neighbor_masks(params, m).map(|x| params.rank_mask(x) as u32));
            adjacency[start..].sort_unstable();
        }
        JohnsonGraph {
            params,
            masks,
            adjacency,
        }
    }

    #[inline]
    pub fn params(&self) -> GraphParams {
        self.params
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.masks.len()
    }

    #[inline]
    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    #[inline]
    pub fn mask(&self, index: usize) -> u64 {
        self.masks[index]
    }

    #[inline]
    pub fn neighbors(&self, index: usize) -> &[u32] {
        let d = self.params.degree() as usize;
        &self.adjacency[index * d..(index + 1) * d]
    }

    /// Index of the complementary vertex (`n = 2w` only; not checked).
    #[inline]
    pub fn antipode_index(&self, index: usize) -> usize {
        self.params
            .rank_mask(!self.masks[index] & self.params.full_mask())
    }

    /// Vertices at each distance `1..=depth` from every vertex: `shells[i-1]`
    /// is a flat table with rows of length `shell_size(i)`.
    pub fn distance_shells(&self, depth: u32) -> Vec<Vec<u32>> {
        let depth = depth.min(self.params.diameter());
        let w = self.params.w;
        let mut shells: Vec<Vec<u32>> = (1..=depth)
            .map(|i| Vec::with_capacity(self.order() * self.params.shell_size(i) as usize))
            .collect();
        for &x in &self.masks {
            for (j, &y) in self.masks.iter().enumerate() {
                let dist = w - (x & y).count_ones();
                if dist >= 1 && dist <= depth {
                    shells[(dist - 1) as usize].push(j as u32);
                }
            }
        }
        shells
    }
}
