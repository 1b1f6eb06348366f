//! File formats.
//!
//! * Partition: `{"n":6,"w":3,"membership":"1221…"}`, one character per
//!   vertex in colex order. The binary variant is the packed bit string of
//!   [`TwoPartition::to_packed_bits`]; `n` and `w` travel separately.
//! * Function: `{"n":…,"w":…,"values":[…]}` in colex order.
//! * Classification: `{"kind":"F1","witness":[1,2],"scale_num":1,"scale_den":1}`
//!   with 1-based witness coordinates.
//! * Pattern: `{"k":2,"B":["00","11"]}`.
//! * Vertex: a bitstring `"110100"` or a sorted 1-based support list.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::constructions::PrefixPattern;
use crate::eigenfn::{ClassifiedForm, FormKind, VertexFunction};
use crate::error::{Error, Result};
use crate::johnson::{GraphParams, Vertex};
use crate::partition::TwoPartition;

fn format_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionRecord {
    pub n: u32,
    pub w: u32,
    pub membership: String,
}

impl PartitionRecord {
    pub fn of(p: &TwoPartition) -> Self {
        PartitionRecord {
            n: p.params().n(),
            w: p.params().w(),
            membership: p.membership_string(),
        }
    }

    pub fn to_partition(&self) -> Result<TwoPartition> {
        let params = GraphParams::new(self.n, self.w)?;
        TwoPartition::from_membership_str(params, &self.membership)
    }
}

pub fn partition_to_json(p: &TwoPartition) -> String {
    serde_json::to_string(&PartitionRecord::of(p)).expect("plain record")
}

pub fn partition_from_json(s: &str) -> Result<TwoPartition> {
    serde_json::from_str::<PartitionRecord>(s)
        .map_err(format_err)?
        .to_partition()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionRecord {
    pub n: u32,
    pub w: u32,
    pub values: Vec<i64>,
}

pub fn function_to_json(f: &VertexFunction) -> String {
    serde_json::to_string(&FunctionRecord {
        n: f.params().n(),
        w: f.params().w(),
        values: f.values().to_vec(),
    })
    .expect("plain record")
}

pub fn function_from_json(s: &str) -> Result<VertexFunction> {
    let r: FunctionRecord = serde_json::from_str(s).map_err(format_err)?;
    VertexFunction::new(GraphParams::new(r.n, r.w)?, r.values)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationRecord {
    pub kind: FormKind,
    pub witness: Vec<u32>,
    pub scale_num: i64,
    pub scale_den: i64,
}

impl ClassificationRecord {
    pub fn of(c: &ClassifiedForm) -> Self {
        ClassificationRecord {
            kind: c.kind,
            witness: c.witness.iter().map(|i| i + 1).collect(),
            scale_num: *c.scale.numer(),
            scale_den: *c.scale.denom(),
        }
    }

    pub fn to_form(&self) -> Result<ClassifiedForm> {
        if self.scale_den == 0 {
            return Err(Error::Format("zero scale denominator".into()));
        }
        let witness = self
            .witness
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or_else(|| Error::Format("witness coordinates are 1-based".into()))
            })
            .collect::<Result<_>>()?;
        Ok(ClassifiedForm {
            kind: self.kind,
            witness,
            scale: Rational64::new(self.scale_num, self.scale_den),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternRecord {
    pub k: u32,
    #[serde(rename = "B")]
    pub tuples: Vec<String>,
}

impl PatternRecord {
    pub fn of(p: &PrefixPattern) -> Self {
        PatternRecord {
            k: p.k(),
            tuples: p.to_strings(),
        }
    }

    pub fn to_pattern(&self) -> Result<PrefixPattern> {
        PrefixPattern::from_strings(self.k, &self.tuples)
    }
}

pub fn pattern_from_json(s: &str) -> Result<PrefixPattern> {
    serde_json::from_str::<PatternRecord>(s)
        .map_err(format_err)?
        .to_pattern()
}

/// A vertex as a bitstring or a 1-based support list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexRecord {
    Bitstring(String),
    Support(Vec<u32>),
}

impl VertexRecord {
    pub fn to_vertex(&self, params: GraphParams) -> Result<Vertex> {
        match self {
            VertexRecord::Bitstring(s) => Vertex::from_bitstring(params, s),
            VertexRecord::Support(s) => Vertex::from_support(params, s),
        }
    }
}

/// Parses a vertex given either as a bitstring or as comma-separated 1-based
/// coordinates (`"1,2,4"`), the latter optionally in JSON brackets.
pub fn parse_vertex(params: GraphParams, s: &str) -> Result<Vertex> {
    let s = s.trim();
    if !s.is_empty() && s.chars().all(|c| c == '0' || c == '1') && s.len() == params.n() as usize {
        return Vertex::from_bitstring(params, s);
    }
    let inner = s.trim_start_matches('[').trim_end_matches(']');
    let support = inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Format(format!("cannot read vertex {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Vertex::from_support(params, &support)
}
