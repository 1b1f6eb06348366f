//! Canonical forms of 2-partitions under coordinate permutations and cell
//! swap.
//!
//! The canonical form is the lexicographically smallest membership string
//! (`'1' < '2'`) over the whole group `S_n × {id, swap}`. The search fixes
//! the preimages of new coordinates `0, 1, ...` one at a time; after `k`
//! coordinates are fixed the first `C(k, w)` characters of the image are
//! known, because colex order lists every vertex inside `{0..k-1}` first.
//! Branches whose known prefix exceeds the best string so far are cut.
//!
//! Coordinates in the same block of the partition's block decomposition are
//! interchangeable (their transposition is an automorphism), so only the
//! smallest unused coordinate of each block is tried at every level. Neither
//! cut changes the result.

use std::cmp::Ordering;

use crate::eigenfn::{deposit, BlockDecomposition, VertexFunction};
use crate::error::{param, Error, Result};
use crate::johnson::{binomial, GraphParams};
use crate::partition::TwoPartition;

/// Default bound on `n` for exact canonicalisation.
pub const DEFAULT_MAX_N: u32 = 14;

/// A canonical membership string with the group element producing it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub params: GraphParams,
    /// Canonical membership labels (`1`/`2`) in colex order.
    pub membership: Vec<u8>,
    /// `perm[i]` is the new position of original coordinate `i` (0-based).
    pub perm: Vec<u32>,
    /// Whether cell labels are exchanged.
    pub swapped: bool,
}

impl CanonicalForm {
    pub fn membership_string(&self) -> String {
        self.membership
            .iter()
            .map(|&c| (b'0' + c) as char)
            .collect()
    }

    pub fn partition(&self) -> TwoPartition {
        TwoPartition::from_membership(self.params, self.membership.clone())
            .expect("canonical form of a valid partition")
    }

    /// The certificate permutation in 1-based cycle notation, `()` for the
    /// identity.
    pub fn cycle_notation(&self) -> String {
        cycle_notation(&self.perm)
    }
}

/// 1-based cycle notation of a permutation given as `perm[i] = image of i`.
pub fn cycle_notation(perm: &[u32]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] as usize == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = perm[i] as usize;
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// The image of `p` under the coordinate permutation `perm` (original
/// coordinate `i` moves to `perm[i]`), with cells exchanged if `swap`.
pub fn permute_partition(p: &TwoPartition, perm: &[u32], swap: bool) -> Result<TwoPartition> {
    let params = p.params();
    let n = params.n() as usize;
    let mut seen = vec![false; n];
    if perm.len() != n
        || perm
            .iter()
            .any(|&x| x as usize >= n || std::mem::replace(&mut seen[x as usize], true))
    {
        return param(format!("not a permutation of {n} coordinates"));
    }
    let mut membership = vec![0u8; params.order()];
    for (i, m) in params.masks().enumerate() {
        let image = deposit(m, perm);
        let cell = p.cell(i);
        membership[params.rank_mask(image)] = if swap { 3 - cell } else { cell };
    }
    TwoPartition::from_membership(params, membership)
}

struct Search<'a> {
    p: &'a TwoPartition,
    masks: Vec<u64>,
    /// `bounds[k] = C(k, w)`: length of the image prefix fixed by `k` coordinates.
    bounds: Vec<usize>,
    blocks: Vec<Vec<u32>>,
    /// New position -> original coordinate.
    sigma: Vec<u32>,
    used: u64,
    swap: bool,
    current: Vec<u8>,
    best: Option<(Vec<u8>, Vec<u32>, bool)>,
}

impl Search<'_> {
    fn run(&mut self, k: usize) {
        let n = self.sigma.len();
        if k == n {
            let better = match &self.best {
                None => true,
                Some((b, _, _)) => self.current < *b,
            };
            if better {
                self.best = Some((self.current.clone(), self.sigma.clone(), self.swap));
            }
            return;
        }
        for bi in 0..self.blocks.len() {
            let Some(&coord) = self.blocks[bi].iter().find(|&&c| self.used >> c & 1 == 0) else {
                continue;
            };
            self.sigma[k] = coord;
            self.used |= 1 << coord;
            let (start, end) = (self.bounds[k], self.bounds[k + 1]);
            for r in start..end {
                let original = deposit(self.masks[r], &self.sigma[..=k]);
                let cell = self.p.cell_of_mask(original);
                self.current.push(if self.swap { 3 - cell } else { cell });
            }
            let keep = match &self.best {
                None => true,
                Some((b, _, _)) => self.current[..end].cmp(&b[..end]) != Ordering::Greater,
            };
            if keep {
                self.run(k + 1);
            }
            self.current.truncate(start);
            self.used &= !(1 << coord);
        }
    }
}

/// Canonical form with the default size guard.
pub fn canonical_form(p: &TwoPartition) -> Result<CanonicalForm> {
    canonical_form_with_limit(p, DEFAULT_MAX_N)
}

/// Exact canonical form; fails with [`Error::TooLarge`] when `n > max_n`.
pub fn canonical_form_with_limit(p: &TwoPartition, max_n: u32) -> Result<CanonicalForm> {
    let params = p.params();
    let n = params.n();
    if n > max_n {
        return Err(Error::TooLarge(format!(
            "canonical form of {params} exceeds the limit n <= {max_n}"
        )));
    }
    let indicator = VertexFunction::from_fn(params, |m| (p.cell_of_mask(m) == 1) as i64);
    let blocks = BlockDecomposition::of(&indicator)?.blocks().to_vec();
    let mut search = Search {
        p,
        masks: params.masks().collect(),
        bounds: (0..=n).map(|k| binomial(k, params.w()) as usize).collect(),
        blocks,
        sigma: vec![0; n as usize],
        used: 0,
        swap: false,
        current: Vec::with_capacity(params.order()),
        best: None,
    };
    for swap in [false, true] {
        search.swap = swap;
        search.run(0);
    }
    let (membership, sigma, swapped) = search.best.expect("at least one permutation");
    let mut perm = vec![0u32; n as usize];
    for (new, &old) in sigma.iter().enumerate() {
        perm[old as usize] = new as u32;
    }
    Ok(CanonicalForm {
        params,
        membership,
        perm,
        swapped,
    })
}

/// Sorted cell sizes, quotient matrix up to swap (if equitable) and the
/// block-size multiset.
type Invariants = (Vec<usize>, Option<[u32; 4]>, Vec<usize>);

fn invariants(p: &TwoPartition) -> Result<Invariants> {
    let (s1, s2) = p.cell_sizes();
    let sizes = vec![s1.min(s2), s1.max(s2)];
    let matrix = p.verify_equitable().matrix().map(|m| {
        let s = m.swapped();
        [m.a, m.b, m.c, m.d].min([s.a, s.b, s.c, s.d])
    });
    let indicator = VertexFunction::from_fn(p.params(), |m| (p.cell_of_mask(m) == 1) as i64);
    let sbd = BlockDecomposition::of(&indicator)?.size_multiset();
    Ok((sizes, matrix, sbd))
}

/// Whether two partitions of the same graph are equivalent under coordinate
/// permutations and cell swap.
pub fn equivalent(p: &TwoPartition, q: &TwoPartition) -> Result<bool> {
    if p.params() != q.params() {
        return param(format!(
            "cannot compare partitions of {} and {}",
            p.params(),
            q.params()
        ));
    }
    if invariants(p)? != invariants(q)? {
        return Ok(false);
    }
    Ok(canonical_form(p)?.membership == canonical_form(q)?.membership)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construction2, construction3, construction4, coordinate_partition};

    #[test]
    fn relabelled_construction_has_same_form() {
        let c2 = construction2(3).unwrap();
        // (1 3)(2 4) in 1-based notation
        let moved = permute_partition(&c2, &[2, 3, 0, 1, 4, 5], false).unwrap();
        assert_ne!(moved, c2);
        assert_eq!(
            canonical_form(&moved).unwrap().membership,
            canonical_form(&c2).unwrap().membership
        );
        assert!(equivalent(&c2, &moved).unwrap());
    }

    #[test]
    fn swap_is_in_the_group() {
        let c4 = construction4(3).unwrap();
        assert_eq!(
            canonical_form(&c4).unwrap().membership,
            canonical_form(&c4.swapped()).unwrap().membership
        );
    }

    #[test]
    fn certificate_reproduces_form() {
        for p in [
            construction2(4).unwrap(),
            construction3(5).unwrap(),
            coordinate_partition(GraphParams::new(7, 3).unwrap(), 4).unwrap(),
        ] {
            let cf = canonical_form(&p).unwrap();
            let image = permute_partition(&p, &cf.perm, cf.swapped).unwrap();
            assert_eq!(image.membership(), &cf.membership[..]);
            let again = canonical_form(&cf.partition()).unwrap();
            assert_eq!(again.membership, cf.membership);
        }
    }

    #[test]
    fn different_families_differ() {
        assert!(!equivalent(&construction2(5).unwrap(), &construction3(5).unwrap()).unwrap());
        assert!(!equivalent(&construction2(4).unwrap(), &construction4(4).unwrap()).unwrap());
        assert!(equivalent(&construction2(3).unwrap(), &construction4(4).unwrap()).is_err());
    }

    #[test]
    fn guard() {
        let p = coordinate_partition(GraphParams::new(16, 2).unwrap(), 0).unwrap();
        assert!(matches!(canonical_form(&p), Err(Error::TooLarge(_))));
        assert!(canonical_form_with_limit(&p, 16).is_ok());
    }

    #[test]
    fn cycles() {
        assert_eq!(cycle_notation(&[0, 1, 2]), "()");
        assert_eq!(cycle_notation(&[2, 3, 0, 1]), "(1 3)(2 4)");
        assert_eq!(cycle_notation(&[1, 2, 0, 3]), "(1 2 3)");
    }
}
