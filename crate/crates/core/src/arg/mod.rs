//! Attributed relational graphs and the deformation-based matcher.
//!
//! An [`Arg`] is a directed graph whose vertices carry an appearance
//! attribute vector (mean color of an image region) and whose edges carry a
//! relational vector (normalized centroid displacement). Adjacency is always
//! stored in both directions.

mod cost;
mod matching;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cost::{assignment_cost, deform_vertex, edge_cost, relational_attribute, vertex_cost, Deformation};
pub use matching::{match_graphs, Assignment, LabelAssignment, MatchParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Index of an edge inside [`Arg::edges`].
pub type EdgeId = usize;

/// Object label carried by model vertices. `u16::MAX` is reserved for
/// "unlabelled" in exported label maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelId(pub u16);

impl LabelId {
    pub const UNLABELLED: LabelId = LabelId(u16::MAX);
}

impl fmt::Display for LabelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Appearance attributes of a vertex, every component in `[0, 1]`.
/// Length 3 for RGB, 1 for gray-scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct AttributeVector(Vec<f64>);

impl AttributeVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("attribute vector must not be empty"));
        }
        if let Some(c) = components.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::invalid(format!("attribute component {c} outside [0, 1]")));
        }
        Ok(AttributeVector(components))
    }

    pub fn rgb(r: f64, g: f64, b: f64) -> Result<Self> {
        Self::new(vec![r, g, b])
    }

    pub fn gray(g: f64) -> Result<Self> {
        Self::new(vec![g])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Component-wise mean of two vectors of equal length.
    pub fn midpoint(&self, other: &AttributeVector) -> Result<AttributeVector> {
        if self.len() != other.len() {
            return Err(arity_mismatch(self.len(), other.len()));
        }
        Ok(AttributeVector(
            self.0.iter().zip(&other.0).map(|(a, b)| (a + b) / 2.0).collect(),
        ))
    }
}

impl TryFrom<Vec<f64>> for AttributeVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        AttributeVector::new(v)
    }
}

impl From<AttributeVector> for Vec<f64> {
    fn from(v: AttributeVector) -> Self {
        v.0
    }
}

pub(crate) fn arity_mismatch(a: usize, b: usize) -> Error {
    Error::invalid(format!("attribute arity mismatch: {a} vs {b}"))
}

/// Region centroid in pixel units, in the coordinate frame of the active
/// rectangle (x rightward, y downward).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Centroid {
    pub x: f64,
    pub y: f64,
}

impl Centroid {
    pub const fn new(x: f64, y: f64) -> Self {
        Centroid { x, y }
    }

    pub fn midpoint(self, other: Centroid) -> Centroid {
        Centroid::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Centroid {
    fn from([x, y]: [f64; 2]) -> Self {
        Centroid { x, y }
    }
}

impl From<Centroid> for [f64; 2] {
    fn from(c: Centroid) -> Self {
        [c.x, c.y]
    }
}

/// Centroid displacement divided by `2 * d_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct RelationalVector {
    pub dx: f64,
    pub dy: f64,
}

impl RelationalVector {
    pub const ZERO: RelationalVector = RelationalVector { dx: 0.0, dy: 0.0 };

    pub const fn new(dx: f64, dy: f64) -> Self {
        RelationalVector { dx, dy }
    }

    pub fn norm(self) -> f64 {
        self.dx.hypot(self.dy)
    }

    pub fn dot(self, other: RelationalVector) -> f64 {
        self.dx * other.dx + self.dy * other.dy
    }
}

impl std::ops::Neg for RelationalVector {
    type Output = RelationalVector;

    fn neg(self) -> RelationalVector {
        RelationalVector::new(-self.dx, -self.dy)
    }
}

impl From<[f64; 2]> for RelationalVector {
    fn from([dx, dy]: [f64; 2]) -> Self {
        RelationalVector { dx, dy }
    }
}

impl From<RelationalVector> for [f64; 2] {
    fn from(v: RelationalVector) -> Self {
        [v.dx, v.dy]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub mu: AttributeVector,
    pub centroid: Centroid,
    pub pixel_count: u64,
    /// Set on model vertices only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<LabelId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub nu: RelationalVector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Incidence {
    pub edge: EdgeId,
    pub neighbor: usize,
    /// The vertex is the edge's source.
    pub outgoing: bool,
}

/// A directed attributed relational graph with symmetric adjacency.
///
/// Vertices are stored in insertion order; lookups by [`VertexId`] go
/// through an index built at construction. The graph is immutable once
/// built.
#[derive(Debug, Clone)]
pub struct Arg {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    d_max: f64,
    arity: usize,
    index: HashMap<VertexId, usize>,
    incident: Vec<Vec<Incidence>>,
}

impl PartialEq for Arg {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges == other.edges
            && self.d_max == other.d_max
            && self.arity == other.arity
    }
}

impl Arg {
    /// Builds a graph from explicit vertices and directed edges, checking
    /// every structural invariant.
    pub fn new(d_max: f64, arity: usize, vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Arg> {
        if !(d_max.is_finite() && d_max > 0.0) {
            return Err(Error::invalid(format!("d_max must be positive, got {d_max}")));
        }
        if arity == 0 {
            return Err(Error::invalid("attribute arity must be at least 1"));
        }
        let mut index = HashMap::with_capacity(vertices.len());
        for (pos, v) in vertices.iter().enumerate() {
            if v.mu.len() != arity {
                return Err(arity_mismatch(v.mu.len(), arity));
            }
            if v.pixel_count == 0 {
                return Err(Error::invalid(format!("vertex {} has zero pixels", v.id)));
            }
            if !v.centroid.is_finite() {
                return Err(Error::invalid(format!("vertex {} has a non-finite centroid", v.id)));
            }
            if index.insert(v.id, pos).is_some() {
                return Err(Error::invalid(format!("duplicate vertex id {}", v.id)));
            }
        }

        let mut seen = HashSet::with_capacity(edges.len());
        let mut incident = vec![Vec::new(); vertices.len()];
        for (eid, e) in edges.iter().enumerate() {
            if e.from == e.to {
                return Err(Error::invalid(format!("self-loop on vertex {}", e.from)));
            }
            let from = *index.get(&e.from).ok_or(Error::VertexNotFound(e.from))?;
            let to = *index.get(&e.to).ok_or(Error::VertexNotFound(e.to))?;
            if !(e.nu.dx.is_finite() && e.nu.dy.is_finite()) {
                return Err(Error::invalid(format!("edge ({}, {}) has a non-finite nu", e.from, e.to)));
            }
            if !seen.insert((e.from, e.to)) {
                return Err(Error::invalid(format!("duplicate edge ({}, {})", e.from, e.to)));
            }
            incident[from].push(Incidence { edge: eid, neighbor: to, outgoing: true });
            incident[to].push(Incidence { edge: eid, neighbor: from, outgoing: false });
        }
        if let Some(e) = edges.iter().find(|e| !seen.contains(&(e.to, e.from))) {
            return Err(Error::invalid(format!(
                "edge ({}, {}) has no reverse edge",
                e.from, e.to
            )));
        }

        Ok(Arg { vertices, edges, d_max, arity, index, incident })
    }

    /// Builds a graph from vertices and undirected adjacency pairs. Both
    /// directed edges are created for each pair, with relational vectors
    /// computed from the vertex centroids.
    pub fn from_adjacency<I>(d_max: f64, arity: usize, vertices: Vec<Vertex>, pairs: I) -> Result<Arg>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let centroid_of: HashMap<VertexId, Centroid> =
            vertices.iter().map(|v| (v.id, v.centroid)).collect();
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for (a, b) in pairs {
            let key = if a <= b { (a, b) } else { (b, a) };
            if a == b || !seen.insert(key) {
                continue;
            }
            let pa = *centroid_of.get(&a).ok_or(Error::VertexNotFound(a))?;
            let pb = *centroid_of.get(&b).ok_or(Error::VertexNotFound(b))?;
            let nu = relational_attribute(pa, pb, d_max)?;
            edges.push(Edge { from: a, to: b, nu });
            edges.push(Edge { from: b, to: a, nu: relational_attribute(pb, pa, d_max)? });
        }
        Arg::new(d_max, arity, vertices, edges)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn attribute_arity(&self) -> usize {
        self.arity
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, id: VertexId) -> Result<&Vertex> {
        self.position(id).map(|pos| &self.vertices[pos])
    }

    /// Ids of the edges entering or leaving `id`, both orientations.
    pub fn incident_edges(&self, id: VertexId) -> Result<Vec<EdgeId>> {
        let pos = self.position(id)?;
        Ok(self.incident[pos].iter().map(|inc| inc.edge).collect())
    }

    /// True when every vertex carries a label, as required of a model graph.
    pub fn is_fully_labelled(&self) -> bool {
        self.vertices.iter().all(|v| v.label.is_some())
    }

    pub(crate) fn position(&self, id: VertexId) -> Result<usize> {
        self.index.get(&id).copied().ok_or(Error::VertexNotFound(id))
    }

    pub(crate) fn incidences(&self, pos: usize) -> &[Incidence] {
        &self.incident[pos]
    }
}
