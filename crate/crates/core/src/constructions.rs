//! Partitions whose cell membership depends only on a few coordinates.
//!
//! The four families live on `J(2w, w)` and are given by a set `B` of
//! patterns on the first `k <= 5` coordinates: `C1` is the set of vertices
//! whose prefix lies in `B`. All of them are labelled so that `b >= c`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{param, Error, Result};
use crate::johnson::GraphParams;
use crate::partition::{QuotientMatrix, TwoPartition};

/// A set of binary `k`-tuples on the first `k` coordinates. Bit `i` of a
/// tuple is coordinate `i` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrefixPattern {
    k: u32,
    tuples: BTreeSet<u32>,
}

impl PrefixPattern {
    pub fn new(k: u32, tuples: impl IntoIterator<Item = u32>) -> Result<Self> {
        if k == 0 || k > 31 {
            return param(format!("pattern length {k} outside 1..=31"));
        }
        let tuples: BTreeSet<u32> = tuples.into_iter().collect();
        if let Some(t) = tuples.iter().find(|&&t| t >> k != 0) {
            return param(format!("tuple {t:#b} longer than k = {k}"));
        }
        Ok(PrefixPattern { k, tuples })
    }

    /// Parses tuples written as bitstrings with coordinate 1 leftmost.
    pub fn from_strings<S: AsRef<str>>(k: u32, tuples: &[S]) -> Result<Self> {
        let parsed = tuples
            .iter()
            .map(|s| {
                let s = s.as_ref();
                if s.len() != k as usize {
                    return Err(Error::Format(format!(
                        "tuple {s:?} does not have length {k}"
                    )));
                }
                s.chars()
                    .enumerate()
                    .try_fold(0u32, |acc, (i, ch)| match ch {
                        '0' => Ok(acc),
                        '1' => Ok(acc | 1 << i),
                        _ => Err(Error::Format(format!(
                            "bad character {ch:?} in tuple {s:?}"
                        ))),
                    })
            })
            .collect::<Result<Vec<u32>>>()?;
        PrefixPattern::new(k, parsed)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn tuples(&self) -> impl Iterator<Item = u32> + '_ {
        self.tuples.iter().copied()
    }

    pub fn contains(&self, prefix: u32) -> bool {
        self.tuples.contains(&prefix)
    }

    /// Tuples as bitstrings, coordinate 1 leftmost.
    pub fn to_strings(&self) -> Vec<String> {
        self.tuples
            .iter()
            .map(|&t| {
                (0..self.k)
                    .map(|i| if t >> i & 1 == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    /// The pattern after relabelling prefix coordinate `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[u32]) -> Result<Self> {
        let mut seen = vec![false; self.k as usize];
        if perm.len() != self.k as usize
            || perm
                .iter()
                .any(|&p| p >= self.k || std::mem::replace(&mut seen[p as usize], true))
        {
            return param("not a permutation of the pattern coordinates");
        }
        let tuples = self.tuples.iter().map(|&t| {
            (0..self.k)
                .filter(|&i| t >> i & 1 == 1)
                .fold(0u32, |acc, i| acc | 1 << perm[i as usize])
        });
        PrefixPattern::new(self.k, tuples)
    }
}

/// `C1` = vertices whose first `k` coordinates form a tuple of the pattern.
pub fn pattern_partition(params: GraphParams, pattern: &PrefixPattern) -> Result<TwoPartition> {
    if pattern.k > params.n() {
        return param(format!(
            "pattern length {} exceeds n = {}",
            pattern.k,
            params.n()
        ));
    }
    let low = (1u64 << pattern.k) - 1;
    TwoPartition::from_predicate(params, |m| pattern.contains((m & low) as u32)).map_err(
        |e| match e {
            Error::InvalidPartition(msg) => Error::InvalidPattern(msg),
            other => other,
        },
    )
}

/// The four families on `J(2w, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Construction {
    C1,
    C2,
    C3,
    C4,
}

impl Construction {
    pub const ALL: [Construction; 4] = [
        Construction::C1,
        Construction::C2,
        Construction::C3,
        Construction::C4,
    ];

    pub fn min_w(self) -> u32 {
        match self {
            Construction::C3 => 5,
            _ => 3,
        }
    }

    pub fn pattern(self) -> PrefixPattern {
        let (k, tuples): (u32, &[&str]) = match self {
            Construction::C1 => (
                5,
                &[
                    "10000", "11000", "10100", "00011", "01111", "00111", "01011", "11100",
                ],
            ),
            Construction::C2 => (2, &["00", "11"]),
            Construction::C3 => (
                5,
                &[
                    "00000", "00100", "00010", "00001", "10100", "01010", "00101", "00011",
                    "11111", "11011", "11101", "11110", "01011", "10101", "11010", "11100",
                ],
            ),
            Construction::C4 => (3, &["000", "111"]),
        };
        PrefixPattern::from_strings(k, tuples).expect("static pattern")
    }

    /// The quotient matrix of the family at weight `w`.
    pub fn matrix(self, w: u32) -> QuotientMatrix {
        let w2 = w * w;
        let (a, b, c, d) = match self {
            Construction::C1 => (w2 - 3 * w + 2, 3 * w - 2, w, w2 - w),
            Construction::C2 | Construction::C3 => (w2 - 2 * w, 2 * w, 2 * w - 2, w2 - 2 * w + 2),
            Construction::C4 => (w2 - 3 * w, 3 * w, w - 2, w2 - w + 2),
        };
        QuotientMatrix { a, b, c, d }
    }

    pub fn build(self, w: u32) -> Result<TwoPartition> {
        if w < self.min_w() {
            return param(format!("{self} needs w >= {}, got {w}", self.min_w()));
        }
        pattern_partition(GraphParams::new(2 * w, w)?, &self.pattern())
    }

    pub fn name(self) -> &'static str {
        match self {
            Construction::C1 => "c1",
            Construction::C2 => "c2",
            Construction::C3 => "c3",
            Construction::C4 => "c4",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c1" => Ok(Construction::C1),
            "c2" => Ok(Construction::C2),
            "c3" => Ok(Construction::C3),
            "c4" => Ok(Construction::C4),
            _ => param(format!("unknown construction {s:?}")),
        }
    }
}

pub fn construction1(w: u32) -> Result<TwoPartition> {
    Construction::C1.build(w)
}

pub fn construction2(w: u32) -> Result<TwoPartition> {
    Construction::C2.build(w)
}

pub fn construction3(w: u32) -> Result<TwoPartition> {
    Construction::C3.build(w)
}

pub fn construction4(w: u32) -> Result<TwoPartition> {
    Construction::C4.build(w)
}

/// `C1 = {x : x_i = 0}`, `C2 = {x : x_i = 1}` for a 0-based coordinate `i`;
/// equitable with the first eigenvalue.
pub fn coordinate_partition(params: GraphParams, i: u32) -> Result<TwoPartition> {
    if i >= params.n() {
        return param(format!("coordinate {} outside 1..={}", i + 1, params.n()));
    }
    TwoPartition::from_predicate(params, |m| m >> i & 1 == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::johnson::binomial;
    use crate::partition::Equitability;

    fn p(n: u32, w: u32) -> GraphParams {
        GraphParams::new(n, w).unwrap()
    }

    #[test]
    fn small_matrices() {
        let m = |part: TwoPartition| part.verify_equitable().matrix().unwrap();
        assert_eq!(
            m(construction1(4).unwrap()),
            QuotientMatrix {
                a: 6,
                b: 10,
                c: 4,
                d: 12
            }
        );
        assert_eq!(
            m(construction2(4).unwrap()),
            QuotientMatrix {
                a: 8,
                b: 8,
                c: 6,
                d: 10
            }
        );
        assert_eq!(
            m(construction3(5).unwrap()),
            QuotientMatrix {
                a: 15,
                b: 10,
                c: 8,
                d: 17
            }
        );
        assert_eq!(
            m(construction4(3).unwrap()),
            QuotientMatrix {
                a: 0,
                b: 9,
                c: 1,
                d: 8
            }
        );
    }

    #[test]
    fn thresholds() {
        assert!(construction3(4).is_err());
        assert!(construction1(2).is_err());
        assert!(construction4(3).is_ok());
    }

    #[test]
    fn patterns_reproduce_constructions() {
        let g = p(6, 3);
        let c2 = PrefixPattern::from_strings(2, &["00", "11"]).unwrap();
        assert_eq!(
            pattern_partition(g, &c2).unwrap(),
            construction2(3).unwrap()
        );
        let c4 = PrefixPattern::from_strings(3, &["000", "111"]).unwrap();
        assert_eq!(
            pattern_partition(g, &c4).unwrap(),
            construction4(3).unwrap()
        );
        assert_eq!(
            pattern_partition(p(8, 4), &Construction::C1.pattern()).unwrap(),
            construction1(4).unwrap()
        );
    }

    #[test]
    fn pattern_errors() {
        let g = p(6, 3);
        let everything = PrefixPattern::from_strings(1, &["0", "1"]).unwrap();
        assert!(matches!(
            pattern_partition(g, &everything),
            Err(Error::InvalidPattern(_))
        ));
        let long = PrefixPattern::new(7, [0]).unwrap();
        assert!(pattern_partition(g, &long).is_err());
        assert!(PrefixPattern::from_strings(2, &["0"]).is_err());
        assert!(PrefixPattern::from_strings(2, &["0a"]).is_err());
        assert!(PrefixPattern::new(2, [4]).is_err());
    }

    #[test]
    fn pattern_strings_round_trip() {
        let pat = Construction::C3.pattern();
        let again = PrefixPattern::from_strings(5, &pat.to_strings()).unwrap();
        assert_eq!(again, pat);
        assert_eq!(pat.tuples().count(), 16);
    }

    #[test]
    fn coordinate_partitions() {
        let m = coordinate_partition(p(6, 3), 0)
            .unwrap()
            .verify_equitable()
            .matrix()
            .unwrap();
        assert_eq!(
            m,
            QuotientMatrix {
                a: 6,
                b: 3,
                c: 3,
                d: 6
            }
        );
        assert_eq!(m.eigenvalues().1, p(6, 3).eigenvalue(1).unwrap());
        let m = coordinate_partition(p(8, 4), 1)
            .unwrap()
            .verify_equitable()
            .matrix()
            .unwrap();
        assert_eq!(
            m,
            QuotientMatrix {
                a: 12,
                b: 4,
                c: 4,
                d: 12
            }
        );
        for (n, w) in [(7, 3), (9, 2), (10, 6)] {
            let part = coordinate_partition(p(n, w), n - 1).unwrap();
            assert_eq!(
                part.cell_sizes(),
                (binomial(n - 1, w) as usize, binomial(n - 1, w - 1) as usize)
            );
            assert!(matches!(
                part.verify_equitable(),
                Equitability::Equitable(_)
            ));
        }
        assert!(coordinate_partition(p(6, 3), 6).is_err());
    }

    #[test]
    fn parse_names() {
        for c in Construction::ALL {
            assert_eq!(c.name().parse::<Construction>().unwrap(), c);
        }
        assert!("c5".parse::<Construction>().is_err());
    }
}
