//! Recognition of the four three-valued first-eigenvalue eigenfunctions.
//!
//! Up to a coordinate permutation and a nonzero multiple, a
//! `λ1(n,w)`-eigenfunction with values in `{-1, 0, 1}` is one of
//!
//! * `F1`: `x_i - x_j` (any `n`),
//! * `F2`: `+1` if `x_i = x_j = 1`, `-1` if `x_i = x_j = 0` (`n = 2w`),
//! * `F3`: `+1` if `x_i = 1`, `-1` otherwise (`n = 2w`),
//! * `F4`: `+1` on vertices inside a half `S`, `-1` inside its complement
//!   (`w = 2`, `n` even).
//!
//! The classifier finds candidate witnesses from the induced function on
//! `J(n,1)`, `a_i = Σ_{x ∋ i} f(x)`, whose value pattern identifies the form
//! and the special coordinates, and then confirms by exact reconstruction.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::function::VertexFunction;
use crate::johnson::GraphParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormKind {
    Zero,
    F1,
    F2,
    F3,
    F4,
    Other,
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A classification verdict. `witness` holds 0-based coordinates: the ordered
/// pair for `F1`/`F2`, the single coordinate for `F3`, the half containing
/// coordinate 0 for `F4`, and nothing otherwise. `scale` is zero for `Zero`
/// and `Other`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedForm {
    pub kind: FormKind,
    pub witness: Vec<u32>,
    pub scale: Rational64,
}

impl ClassifiedForm {
    fn bare(kind: FormKind) -> Self {
        ClassifiedForm {
            kind,
            witness: Vec::new(),
            scale: Rational64::from_integer(0),
        }
    }

    /// `scale · canonical(kind, witness)`, or `None` for `Other` or a
    /// non-integral result.
    pub fn reconstruct(&self, params: GraphParams) -> Option<VertexFunction> {
        match self.kind {
            FormKind::Zero => Some(VertexFunction::constant(params, 0)),
            FormKind::Other => None,
            kind => {
                if !self.scale.is_integer() {
                    return None;
                }
                let base = canonical_function(params, kind, &self.witness)?;
                Some(base.scaled(self.scale.to_integer()))
            }
        }
    }
}

/// Whether the form can occur on `J(n, w)` at all.
pub fn form_applies(params: GraphParams, kind: FormKind) -> bool {
    let (n, w) = (params.n(), params.w());
    match kind {
        FormKind::F1 => n >= 2,
        FormKind::F2 | FormKind::F3 => n == 2 * w && w >= 2,
        FormKind::F4 => w == 2 && n % 2 == 0 && n >= 4,
        FormKind::Zero | FormKind::Other => true,
    }
}

/// The canonical three-valued function of a kind for a given witness
/// (0-based coordinates). Returns `None` for an ill-shaped witness.
pub fn canonical_function(
    params: GraphParams,
    kind: FormKind,
    witness: &[u32],
) -> Option<VertexFunction> {
    let n = params.n();
    if witness.iter().any(|&c| c >= n) {
        return None;
    }
    let bit = |m: u64, i: u32| m >> i & 1 == 1;
    match (kind, witness) {
        (FormKind::F1, &[i, j]) if i != j => Some(VertexFunction::from_fn(params, |m| {
            bit(m, i) as i64 - bit(m, j) as i64
        })),
        (FormKind::F2, &[i, j]) if i != j => Some(VertexFunction::from_fn(params, |m| {
            match (bit(m, i), bit(m, j)) {
                (true, true) => 1,
                (false, false) => -1,
                _ => 0,
            }
        })),
        (FormKind::F3, &[i]) => Some(VertexFunction::from_fn(params, |m| {
            if bit(m, i) {
                1
            } else {
                -1
            }
        })),
        (FormKind::F4, half) if !half.is_empty() => {
            let s = half.iter().fold(0u64, |acc, &c| acc | 1 << c);
            let rest = !s & params.full_mask();
            Some(VertexFunction::from_fn(params, |m| {
                if m & !s == 0 {
                    1
                } else if m & !rest == 0 {
                    -1
                } else {
                    0
                }
            }))
        }
        _ => None,
    }
}

/// The induced values `a_i = Σ_{x ∋ i} f(x)` on the unit vectors.
pub fn induced_values(f: &VertexFunction) -> Vec<i64> {
    let n = f.params().n();
    let mut a = vec![0i64; n as usize];
    for (m, &v) in f.params().masks().zip(f.values()) {
        for (i, slot) in a.iter_mut().enumerate() {
            if m >> i & 1 == 1 {
                *slot += v;
            }
        }
    }
    a
}

/// Returns `Some(α)` when `f = α · g` exactly with `α` a nonzero integer;
/// `g` takes values in `{-1, 0, 1}`.
fn match_multiple(f: &VertexFunction, g: &VertexFunction) -> Option<i64> {
    let pos = g.values().iter().position(|&v| v != 0)?;
    let alpha = f.values()[pos] * g.values()[pos];
    if alpha == 0 {
        return None;
    }
    f.values()
        .iter()
        .zip(g.values())
        .all(|(&x, &y)| x == alpha * y)
        .then_some(alpha)
}

/// Classifies `f` as one of the forms above (witness chosen as the
/// lexicographically smallest tuple that realises it), `Zero`, or `Other`.
pub fn classify_theorem1(f: &VertexFunction) -> ClassifiedForm {
    if f.is_zero() {
        return ClassifiedForm::bare(FormKind::Zero);
    }
    let params = f.params();
    let n = params.n() as usize;
    let a = induced_values(f);
    let mut groups: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
    for (i, &v) in a.iter().enumerate() {
        groups.entry(v).or_default().push(i as u32);
    }

    let mut candidates: Vec<(FormKind, Vec<u32>)> = Vec::new();
    if form_applies(params, FormKind::F1) {
        let zeros = groups.get(&0).map_or(0, Vec::len);
        let positive: Vec<(&i64, &Vec<u32>)> = groups.iter().filter(|(v, _)| **v > 0).collect();
        if zeros == n - 2 && positive.len() == 1 && positive[0].1.len() == 1 {
            let (&p, plus) = positive[0];
            if let Some(minus) = groups.get(&-p).filter(|g| g.len() == 1) {
                let (i, j) = (plus[0].min(minus[0]), plus[0].max(minus[0]));
                candidates.push((FormKind::F1, vec![i, j]));
            }
        }
    }
    if groups.len() == 2 {
        let mut two: Vec<&Vec<u32>> = groups.values().collect();
        two.sort();
        if form_applies(params, FormKind::F2) {
            for g in two.iter().filter(|g| g.len() == 2) {
                candidates.push((FormKind::F2, g.to_vec()));
            }
        }
        if form_applies(params, FormKind::F3) {
            for g in two.iter().filter(|g| g.len() == 1) {
                candidates.push((FormKind::F3, g.to_vec()));
            }
        }
        if form_applies(params, FormKind::F4) && two[0].len() == n / 2 {
            candidates.push((FormKind::F4, two[0].to_vec()));
        }
    }

    for (kind, witness) in candidates {
        let canon = canonical_function(params, kind, &witness).expect("well-formed witness");
        if let Some(alpha) = match_multiple(f, &canon) {
            return ClassifiedForm {
                kind,
                witness,
                scale: Rational64::from_integer(alpha),
            };
        }
    }
    ClassifiedForm::bare(FormKind::Other)
}
