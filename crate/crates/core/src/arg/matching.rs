use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cost::cost_at;
use super::{arity_mismatch, Arg, VertexId};
use crate::error::{Error, Result};

/// Weights of the deformation cost: `alpha` trades appearance against
/// structure, `gamma_e` trades angular against modulus edge dissimilarity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct MatchParams {
    alpha: f64,
    gamma_e: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    gamma: f64,
}

impl TryFrom<RawParams> for MatchParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        MatchParams::new(raw.alpha, raw.gamma)
    }
}

impl From<MatchParams> for RawParams {
    fn from(p: MatchParams) -> Self {
        RawParams { alpha: p.alpha, gamma: p.gamma_e }
    }
}

impl Default for MatchParams {
    fn default() -> Self {
        MatchParams { alpha: 0.5, gamma_e: 0.5 }
    }
}

impl MatchParams {
    pub fn new(alpha: f64, gamma_e: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid(format!("alpha must be in [0, 1], got {alpha}")));
        }
        if !(0.0..=1.0).contains(&gamma_e) {
            return Err(Error::invalid(format!("gamma must be in [0, 1], got {gamma_e}")));
        }
        Ok(MatchParams { alpha, gamma_e })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma_e(&self) -> f64 {
        self.gamma_e
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assignment {
    pub model_vertex: VertexId,
    pub cost: f64,
}

/// The chosen model vertex and its minimal cost for every input vertex.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabelAssignment {
    entries: BTreeMap<VertexId, Assignment>,
}

impl LabelAssignment {
    pub fn get(&self, input: VertexId) -> Option<Assignment> {
        self.entries.get(&input).copied()
    }

    pub fn model_vertex(&self, input: VertexId) -> Option<VertexId> {
        self.get(input).map(|a| a.model_vertex)
    }

    pub fn cost(&self, input: VertexId) -> Option<f64> {
        self.get(input).map(|a| a.cost)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries ordered by input vertex id.
    pub fn iter(&self) -> impl Iterator<Item = (VertexId, Assignment)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn mapping(&self) -> BTreeMap<VertexId, VertexId> {
        self.entries.iter().map(|(k, v)| (*k, v.model_vertex)).collect()
    }
}

/// Labels every input vertex with the model vertex whose local deformation
/// is smallest when the input vertex is merged into it.
///
/// Each input vertex is scored independently, so the result does not depend
/// on input order. Model candidates are scanned in ascending id order with a
/// strict `<`, which resolves ties to the smallest model id.
pub fn match_graphs(input: &Arg, model: &Arg, params: MatchParams) -> Result<LabelAssignment> {
    if model.is_empty() {
        return Err(Error::invalid("model graph has no vertices"));
    }
    if input.attribute_arity() != model.attribute_arity() {
        return Err(arity_mismatch(input.attribute_arity(), model.attribute_arity()));
    }

    let mut candidates: Vec<(VertexId, usize)> =
        model.vertices().iter().enumerate().map(|(pos, v)| (v.id, pos)).collect();
    candidates.sort_unstable();

    let entries = input
        .vertices()
        .iter()
        .map(|v_i| {
            let mut best = Assignment { model_vertex: candidates[0].0, cost: f64::INFINITY };
            for &(id, pos) in &candidates {
                let f = cost_at(model, pos, v_i.mu.as_slice(), v_i.centroid, params);
                if f < best.cost {
                    best = Assignment { model_vertex: id, cost: f };
                }
            }
            (v_i.id, best)
        })
        .collect();

    Ok(LabelAssignment { entries })
}
