//! Audits tying enumeration results to the known constructions on `J(2w, w)`.

use std::time::Duration;

use serde::Serialize;

use super::engine::{enumerate, SearchSpec, SearchStatus};
use crate::canon::{canonical_form, equivalent, DEFAULT_MAX_N};
use crate::constructions::Construction;
use crate::eigenfn::classify_theorem1;
use crate::eigenfn::{lemma5_audit, system1_census, BlockDecomposition, FormKind, VertexFunction};
use crate::error::{param, Result};
use crate::johnson::GraphParams;
use crate::partition::{admissible_matrices, AntipodalCheck, QuotientMatrix, TwoPartition};

/// Budget and parallelism for [`classify_n_eq_2w`].
#[derive(Debug, Clone, Copy)]
pub struct ClassifyConfig {
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
    pub threads: usize,
    /// Largest `w` that is enumerated; above it only the constructions are
    /// audited.
    pub max_exhaustive_w: u32,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            node_limit: super::DEFAULT_NODE_LIMIT,
            time_limit: Some(super::DEFAULT_TIME_LIMIT),
            threads: 1,
            max_exhaustive_w: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassifyMode {
    Exhaustive,
    ConstructionsOnly,
}

/// Audit results for one partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassAudit {
    pub membership: String,
    /// The construction it is equivalent to, if any.
    pub construction: Option<String>,
    pub equitable: bool,
    pub antipodal: bool,
    pub lemma5: bool,
    pub census: bool,
    pub prop2: bool,
    /// `None` below `w = 5`.
    pub prop3: Option<bool>,
}

impl ClassAudit {
    pub fn passes(&self) -> bool {
        self.equitable
            && self.antipodal
            && self.lemma5
            && self.census
            && self.prop2
            && self.prop3.unwrap_or(true)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixReport {
    pub b: u32,
    pub matrix: QuotientMatrix,
    /// `None` for matrices that were not enumerated.
    pub status: Option<SearchStatus>,
    pub nodes: u64,
    pub wall_secs: f64,
    pub infeasible: Option<String>,
    pub classes: Vec<ClassAudit>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub w: u32,
    pub mode: ClassifyMode,
    pub status: SearchStatus,
    pub matrices: Vec<MatrixReport>,
}

impl ClassificationReport {
    /// Values of `b` with at least one class.
    pub fn occupied_b(&self) -> Vec<u32> {
        self.matrices
            .iter()
            .filter(|m| !m.classes.is_empty())
            .map(|m| m.b)
            .collect()
    }

    pub fn all_audits_pass(&self) -> bool {
        self.matrices
            .iter()
            .flat_map(|m| &m.classes)
            .all(ClassAudit::passes)
    }
}

fn constructions_at(w: u32) -> Vec<(Construction, TwoPartition)> {
    Construction::ALL
        .into_iter()
        .filter(|c| w >= c.min_w())
        .map(|c| (c, c.build(w).expect("construction above its threshold")))
        .collect()
}

fn require_second_eigenvalue(p: &TwoPartition) -> Result<(VertexFunction, QuotientMatrix)> {
    let params = p.params();
    if !params.is_balanced() {
        return param(format!("expected n = 2w, got {params}"));
    }
    let (f, m) = VertexFunction::of_partition(p)?;
    if m.eigenvalues().1 != params.eigenvalue(2)? {
        return param(format!(
            "{m} does not have the second eigenvalue of {params}"
        ));
    }
    Ok((f, m))
}

/// If some partial difference of `f` is of type `F3`, checks that `b = 2w`
/// and that `p` is equivalent to Construction 2; otherwise `true`.
pub fn prop2_check(p: &TwoPartition) -> Result<bool> {
    let (f, m) = require_second_eigenvalue(p)?;
    let n = p.params().n();
    let w = p.params().w();
    for i in 0..n {
        for j in i + 1..n {
            let d = f.partial_difference(i, j)?;
            if classify_theorem1(&d.function).kind == FormKind::F3 {
                return Ok(m.normalized().b == 2 * w
                    && w >= Construction::C2.min_w()
                    && equivalent(p, &Construction::C2.build(w)?)?);
            }
        }
    }
    Ok(true)
}

/// If the block decomposition of `f` has a block of size at least `2w - 5`,
/// checks that `p` is equivalent to one of the four constructions; otherwise
/// `true`. Needs `w >= 5`.
pub fn prop3_check(p: &TwoPartition) -> Result<bool> {
    let (f, _) = require_second_eigenvalue(p)?;
    let w = p.params().w();
    if w < 5 {
        return param(format!("needs w >= 5, got {w}"));
    }
    let bd = BlockDecomposition::of(&f)?;
    if bd.largest() < (2 * w - 5) as usize {
        return Ok(true);
    }
    for (_, c) in constructions_at(w) {
        if equivalent(p, &c)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Runs every audit on an equitable partition of `J(2w, w)` with the second
/// eigenvalue, matching it against `known` (canonical strings).
pub fn audit_class(p: &TwoPartition, known: &[(Construction, Vec<u8>)]) -> Result<ClassAudit> {
    let params = p.params();
    let (_, m) = require_second_eigenvalue(p)?;
    let equitable = p.verify_equitable().matrix() == Some(m);
    let construction = if params.n() <= DEFAULT_MAX_N {
        let cf = canonical_form(p)?;
        known
            .iter()
            .find(|(_, s)| *s == cf.membership)
            .map(|(c, _)| c.name().to_string())
    } else {
        None
    };
    Ok(ClassAudit {
        membership: p.membership_string(),
        construction,
        equitable,
        antipodal: p.antipodal_closed()? == AntipodalCheck::Closed,
        lemma5: lemma5_audit(p)?.equal,
        census: system1_census(p)?.passes(),
        prop2: prop2_check(p)?,
        prop3: if params.w() >= 5 {
            Some(prop3_check(p)?)
        } else {
            None
        },
    })
}

/// Enumerates (or, above `config.max_exhaustive_w`, audits the
/// constructions of) the equitable partitions of `J(2w, w)` with the second
/// eigenvalue, one report per admissible matrix.
pub fn classify_n_eq_2w(w: u32, config: &ClassifyConfig) -> Result<ClassificationReport> {
    if w < 4 {
        return param(format!("classification needs w >= 4, got {w}"));
    }
    let params = GraphParams::new(2 * w, w)?;
    let family = admissible_matrices(params)?;
    let built = constructions_at(w);
    let known: Vec<(Construction, Vec<u8>)> = if params.n() <= DEFAULT_MAX_N {
        built
            .iter()
            .map(|(c, p)| Ok((*c, canonical_form(p)?.membership)))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let exhaustive = w <= config.max_exhaustive_w;
    let mut status = SearchStatus::Complete;
    let mut matrices = Vec::new();
    for am in family.iter() {
        let mut report = MatrixReport {
            b: am.b,
            matrix: am.matrix,
            status: None,
            nodes: 0,
            wall_secs: 0.0,
            infeasible: None,
            classes: Vec::new(),
        };
        if exhaustive {
            let mut spec = SearchSpec::new(params, am.matrix);
            spec.node_limit = config.node_limit;
            spec.time_limit = config.time_limit;
            spec.threads = config.threads;
            let out = enumerate(&spec)?;
            if out.status == SearchStatus::BudgetExhausted {
                status = SearchStatus::BudgetExhausted;
            }
            report.status = Some(out.status);
            report.nodes = out.nodes;
            report.wall_secs = out.wall.as_secs_f64();
            report.infeasible = out.infeasible;
            for p in &out.partitions {
                report.classes.push(audit_class(p, &known)?);
            }
        } else {
            for (_, p) in &built {
                let m = p.verify_equitable().matrix();
                if m.map(|m| m.normalized()) == Some(am.matrix) {
                    report.classes.push(audit_class(p, &known)?);
                }
            }
        }
        matrices.push(report);
    }
    Ok(ClassificationReport {
        w,
        mode: if exhaustive {
            ClassifyMode::Exhaustive
        } else {
            ClassifyMode::ConstructionsOnly
        },
        status,
        matrices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construction1, construction2, construction3, construction4};

    #[test]
    fn prop2_on_w4() {
        assert!(prop2_check(&construction2(4).unwrap()).unwrap());
        assert!(prop2_check(&construction4(4).unwrap()).unwrap());
        // g_{1,4} of Construction 1 is ±(1 if x_5 = 0, -1 if x_5 = 1), an F3
        // difference with b = 3w - 2.
        assert!(!prop2_check(&construction1(4).unwrap()).unwrap());
    }

    #[test]
    fn prop2_on_construction3() {
        assert!(!prop2_check(&construction3(5).unwrap()).unwrap());
    }

    #[test]
    fn prop3_on_w5() {
        for p in [construction1(5), construction2(5), construction3(5)] {
            assert!(prop3_check(&p.unwrap()).unwrap());
        }
        assert!(prop3_check(&construction2(4).unwrap()).is_err());
    }

    #[test]
    fn rejects_first_eigenvalue() {
        let p =
            crate::constructions::coordinate_partition(GraphParams::new(8, 4).unwrap(), 0).unwrap();
        assert!(prop2_check(&p).is_err());
    }

    #[test]
    fn audit_mode_w7_matches_constructions() {
        let config = ClassifyConfig::default();
        let report = classify_n_eq_2w(7, &config).unwrap();
        assert_eq!(report.mode, ClassifyMode::ConstructionsOnly);
        assert_eq!(report.occupied_b(), vec![14, 19, 21]);
        for class in report.matrices.iter().flat_map(|m| &m.classes) {
            let name = class.construction.as_deref().unwrap();
            assert_eq!(class.prop2, name == "c2" || name == "c4", "{name}");
            assert!(class.equitable && class.antipodal && class.lemma5 && class.census);
            assert_eq!(class.prop3, Some(true));
        }
        let names: Vec<_> = report
            .matrices
            .iter()
            .flat_map(|m| m.classes.iter().map(|c| c.construction.clone().unwrap()))
            .collect();
        assert_eq!(names.len(), 4);
    }
}
