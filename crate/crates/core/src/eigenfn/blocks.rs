use std::fmt;

use super::function::VertexFunction;
use crate::error::{Error, Result};

/// The coordinates `{0..n-1}` split into blocks of pairwise vanishing partial
/// differences. Blocks are sorted by their smallest coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockDecomposition {
    blocks: Vec<Vec<u32>>,
}

impl BlockDecomposition {
    /// Builds the decomposition of `f` and checks that vanishing is transitive.
    pub fn of(f: &VertexFunction) -> Result<Self> {
        let n = f.params().n() as usize;
        let zero: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| i == j || f.difference_vanishes(i as u32, j as u32))
                    .collect()
            })
            .collect();
        let mut block_of = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        for i in 0..n {
            if block_of[i] != usize::MAX {
                continue;
            }
            let members: Vec<u32> = (i..n).filter(|&j| zero[i][j]).map(|j| j as u32).collect();
            for &j in &members {
                if block_of[j as usize] != usize::MAX {
                    return Err(Error::Internal(format!(
                        "coordinate {j} joins two blocks: vanishing differences are not transitive"
                    )));
                }
                block_of[j as usize] = blocks.len();
            }
            blocks.push(members);
        }
        for i in 0..n {
            for j in 0..n {
                if zero[i][j] != (block_of[i] == block_of[j]) {
                    return Err(Error::Internal(format!(
                        "f_{{{i},{j}}} disagrees with the block structure"
                    )));
                }
            }
        }
        Ok(BlockDecomposition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Block sizes in block order.
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// The multiset of block sizes, in decreasing order.
    pub fn size_multiset(&self) -> Vec<usize> {
        let mut s = self.sizes();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn largest(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Index of the block holding coordinate `c`.
    pub fn block_of(&self, c: u32) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&c))
            .expect("coordinate in range")
    }

    /// Number of coordinate pairs in different blocks.
    pub fn cross_pairs(&self) -> usize {
        let n: usize = self.blocks.iter().map(Vec::len).sum();
        let within: usize = self
            .blocks
            .iter()
            .map(|b| b.len() * (b.len() - 1) / 2)
            .sum();
        n * (n - 1) / 2 - within
    }
}

impl fmt::Display for BlockDecomposition {
    /// 1-based, e.g. `{1,2}{3,4,5,6}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            let inner: Vec<String> = b.iter().map(|c| (c + 1).to_string()).collect();
            write!(f, "{{{}}}", inner.join(","))?;
        }
        Ok(())
    }
}

/// Block decomposition of `f`; see [`BlockDecomposition::of`].
pub fn block_decomposition(f: &VertexFunction) -> Result<BlockDecomposition> {
    BlockDecomposition::of(f)
}
