use super::{arity_mismatch, Arg, AttributeVector, Centroid, EdgeId, MatchParams, RelationalVector, VertexId};
use crate::error::{Error, Result};

/// `(to - from) / (2 * d_max)`.
pub fn relational_attribute(from: Centroid, to: Centroid, d_max: f64) -> Result<RelationalVector> {
    if !(d_max.is_finite() && d_max > 0.0) {
        return Err(Error::invalid(format!("d_max must be positive, got {d_max}")));
    }
    Ok(displacement(from, to, d_max))
}

#[inline]
fn displacement(from: Centroid, to: Centroid, d_max: f64) -> RelationalVector {
    let scale = 2.0 * d_max;
    RelationalVector::new((to.x - from.x) / scale, (to.y - from.y) / scale)
}

/// Euclidean distance between two attribute vectors.
pub fn vertex_cost(a: &AttributeVector, b: &AttributeVector) -> Result<f64> {
    if a.len() != b.len() {
        return Err(arity_mismatch(a.len(), b.len()));
    }
    Ok(euclidean(a.as_slice(), b.as_slice()))
}

#[inline]
fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Weighted angular and modulus dissimilarity between a deformed relational
/// vector and its model counterpart.
///
/// The angular term is `|cos θ - 1| / 2` and is taken as zero when either
/// vector has zero length.
pub fn edge_cost(deformed: RelationalVector, model: RelationalVector, gamma_e: f64) -> f64 {
    let nd = deformed.norm();
    let nm = model.norm();
    // |cos θ - 1| / 2 == |û - v̂|² / 4 for unit vectors û, v̂; the chord form
    // is exact when the directions coincide.
    let angular = if nd == 0.0 || nm == 0.0 {
        0.0
    } else {
        let ux = deformed.dx / nd - model.dx / nm;
        let uy = deformed.dy / nd - model.dy / nm;
        ((ux * ux + uy * uy) / 4.0).min(1.0)
    };
    gamma_e * angular + (1.0 - gamma_e) * (nd - nm).abs()
}

/// The local state of the deformation graph after merging an input vertex
/// into a model vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Deformation {
    pub mu: AttributeVector,
    pub centroid: Centroid,
    /// Recomputed relational vector for every edge incident to the merged
    /// vertex, in the model's incidence order.
    pub incident: Vec<(EdgeId, RelationalVector)>,
}

/// Merges `(mu_i, p_i)` into model vertex `v_m` without touching the model.
pub fn deform_vertex(model: &Arg, v_m: VertexId, mu_i: &AttributeVector, p_i: Centroid) -> Result<Deformation> {
    let pos = model.position(v_m)?;
    let vertex = &model.vertices()[pos];
    let mu = vertex.mu.midpoint(mu_i)?;
    let centroid = vertex.centroid.midpoint(p_i);
    let incident = model
        .incidences(pos)
        .iter()
        .map(|inc| (inc.edge, deformed_nu(model, centroid, inc.neighbor, inc.outgoing)))
        .collect();
    Ok(Deformation { mu, centroid, incident })
}

#[inline]
fn deformed_nu(model: &Arg, merged: Centroid, neighbor: usize, outgoing: bool) -> RelationalVector {
    let other = model.vertices()[neighbor].centroid;
    if outgoing {
        displacement(merged, other, model.d_max())
    } else {
        displacement(other, merged, model.d_max())
    }
}

/// Deformation cost of assigning an input vertex with attributes `mu_i` and
/// centroid `p_i` to model vertex `v_m`.
///
/// A model vertex without incident edges contributes no structural term.
pub fn assignment_cost(
    model: &Arg,
    v_m: VertexId,
    mu_i: &AttributeVector,
    p_i: Centroid,
    params: MatchParams,
) -> Result<f64> {
    let pos = model.position(v_m)?;
    if mu_i.len() != model.attribute_arity() {
        return Err(arity_mismatch(mu_i.len(), model.attribute_arity()));
    }
    Ok(cost_at(model, pos, mu_i.as_slice(), p_i, params))
}

/// Allocation-free cost evaluation shared by [`assignment_cost`] and the
/// matcher. Arity must already be checked.
pub(crate) fn cost_at(model: &Arg, pos: usize, mu_i: &[f64], p_i: Centroid, params: MatchParams) -> f64 {
    let vertex = &model.vertices()[pos];
    let appearance = vertex
        .mu
        .as_slice()
        .iter()
        .zip(mu_i)
        .map(|(m, i)| {
            let d = (m + i) / 2.0 - m;
            d * d
        })
        .sum::<f64>()
        .sqrt();

    let incidences = model.incidences(pos);
    let structural = if incidences.is_empty() {
        0.0
    } else {
        let merged = vertex.centroid.midpoint(p_i);
        let total: f64 = incidences
            .iter()
            .map(|inc| {
                let nu_d = deformed_nu(model, merged, inc.neighbor, inc.outgoing);
                edge_cost(nu_d, model.edges()[inc.edge].nu, params.gamma_e())
            })
            .sum();
        total / incidences.len() as f64
    };

    params.alpha() * appearance + (1.0 - params.alpha()) * structural
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arg::{Vertex, VertexId};

    const TOL: f64 = 1e-9;

    fn rgb(r: f64, g: f64, b: f64) -> AttributeVector {
        AttributeVector::rgb(r, g, b).unwrap()
    }

    fn two_vertex_model() -> Arg {
        let mu = rgb(0.3, 0.3, 0.3);
        Arg::from_adjacency(
            10.0,
            3,
            vec![
                Vertex { id: VertexId(0), mu: mu.clone(), centroid: Centroid::new(0.0, 0.0), pixel_count: 1, label: None },
                Vertex { id: VertexId(1), mu, centroid: Centroid::new(10.0, 0.0), pixel_count: 1, label: None },
            ],
            [(VertexId(0), VertexId(1))],
        )
        .unwrap()
    }

    #[test]
    fn relational_attribute_examples() {
        let nu = relational_attribute(Centroid::new(10.0, 10.0), Centroid::new(10.0, 10.0), 100.0).unwrap();
        assert_eq!(nu, RelationalVector::ZERO);
        let nu = relational_attribute(Centroid::new(0.0, 0.0), Centroid::new(100.0, 0.0), 100.0).unwrap();
        assert_eq!(nu, RelationalVector::new(0.5, 0.0));
        // (0 - 3) / 20, (0 - 4) / 20
        let nu = relational_attribute(Centroid::new(3.0, 4.0), Centroid::new(0.0, 0.0), 10.0).unwrap();
        assert!((nu.dx + 0.15).abs() < TOL && (nu.dy + 0.20).abs() < TOL);
        assert!(relational_attribute(Centroid::new(0.0, 0.0), Centroid::new(1.0, 0.0), 0.0).is_err());
        assert!(relational_attribute(Centroid::new(0.0, 0.0), Centroid::new(1.0, 0.0), -2.0).is_err());
    }

    #[test]
    fn vertex_cost_examples() {
        assert_eq!(vertex_cost(&rgb(0.2, 0.4, 0.6), &rgb(0.2, 0.4, 0.6)).unwrap(), 0.0);
        let c = vertex_cost(&rgb(0.0, 0.0, 0.0), &rgb(1.0, 1.0, 1.0)).unwrap();
        assert!((c - 3f64.sqrt()).abs() < TOL);
        // 0.3^2 + 0.4^2 + 0.5^2 = 0.5
        let c = vertex_cost(&rgb(0.1, 0.2, 0.3), &rgb(0.4, 0.6, 0.8)).unwrap();
        assert!((c - 0.5f64.sqrt()).abs() < TOL);
        assert!(vertex_cost(&rgb(0.1, 0.2, 0.3), &AttributeVector::gray(0.1).unwrap()).is_err());
    }

    #[test]
    fn edge_cost_examples() {
        let v = RelationalVector::new(0.1, 0.2);
        for gamma in [0.0, 0.3, 1.0] {
            assert!(edge_cost(v, v, gamma).abs() < TOL);
        }
        let c = edge_cost(RelationalVector::new(0.1, 0.0), RelationalVector::new(-0.1, 0.0), 1.0);
        assert!((c - 1.0).abs() < TOL);
        let c = edge_cost(RelationalVector::new(0.3, 0.0), RelationalVector::new(0.0, 0.5), 0.0);
        assert!((c - 0.2).abs() < TOL);
        // orthogonal, equal norm: 0.5 * |0 - 1| / 2
        let c = edge_cost(RelationalVector::new(0.0, 0.2), RelationalVector::new(0.2, 0.0), 0.5);
        assert!((c - 0.25).abs() < TOL);
    }

    #[test]
    fn zero_vector_has_no_angular_penalty() {
        let c = edge_cost(RelationalVector::ZERO, RelationalVector::new(0.3, 0.4), 1.0);
        assert_eq!(c, 0.0);
        let c = edge_cost(RelationalVector::ZERO, RelationalVector::new(0.3, 0.4), 0.5);
        assert!((c - 0.25).abs() < TOL);
    }

    #[test]
    fn deform_vertex_examples() {
        let model = two_vertex_model();
        let v0 = &model.vertices()[0];

        let d = deform_vertex(&model, VertexId(0), &v0.mu, v0.centroid).unwrap();
        assert_eq!(d.mu, v0.mu);
        assert_eq!(d.centroid, v0.centroid);
        for (eid, nu) in &d.incident {
            assert_eq!(*nu, model.edges()[*eid].nu);
        }

        let black = Arg::from_adjacency(
            1.0,
            3,
            vec![Vertex { id: VertexId(0), mu: rgb(0.0, 0.0, 0.0), centroid: Centroid::new(0.0, 0.0), pixel_count: 1, label: None }],
            [],
        )
        .unwrap();
        let d = deform_vertex(&black, VertexId(0), &rgb(1.0, 1.0, 1.0), Centroid::new(0.0, 0.0)).unwrap();
        assert_eq!(d.mu, rgb(0.5, 0.5, 0.5));

        let d = deform_vertex(&model, VertexId(0), &v0.mu, Centroid::new(0.0, 10.0)).unwrap();
        assert_eq!(d.centroid, Centroid::new(0.0, 5.0));
        assert_eq!(d.incident.len(), 2);
        let outgoing = model.edges().iter().position(|e| e.from == VertexId(0)).unwrap();
        let (_, nu) = d.incident.iter().find(|(e, _)| *e == outgoing).unwrap();
        assert!((nu.dx - 0.5).abs() < TOL && (nu.dy + 0.25).abs() < TOL);

        assert!(matches!(
            deform_vertex(&model, VertexId(9), &v0.mu, v0.centroid),
            Err(Error::VertexNotFound(VertexId(9)))
        ));
    }

    #[test]
    fn assignment_cost_examples() {
        let model = two_vertex_model();
        let v0 = model.vertices()[0].clone();
        for (a, g) in [(0.0, 0.0), (0.5, 0.5), (1.0, 0.2), (0.3, 1.0)] {
            let params = MatchParams::new(a, g).unwrap();
            assert_eq!(assignment_cost(&model, VertexId(0), &v0.mu, v0.centroid, params).unwrap(), 0.0);
        }

        // Isolated vertex: c_V(mean, m) = |i - m| / 2 = 0.4 with m = 0, i = 0.8.
        let isolated = Arg::new(
            5.0,
            1,
            vec![Vertex { id: VertexId(3), mu: AttributeVector::gray(0.0).unwrap(), centroid: Centroid::new(1.0, 1.0), pixel_count: 4, label: None }],
            vec![],
        )
        .unwrap();
        let params = MatchParams::new(0.5, 0.5).unwrap();
        let c = assignment_cost(&isolated, VertexId(3), &AttributeVector::gray(0.8).unwrap(), Centroid::new(3.0, 2.0), params).unwrap();
        assert!((c - 0.2).abs() < TOL);

        // Scalar hand evaluation: both directed edges deform to ±(0.5, -0.25)
        // against ±(0.5, 0).
        let nd = (0.5f64 * 0.5 + 0.25 * 0.25).sqrt();
        let cos = (0.5 * 0.5) / (nd * 0.5);
        let ce = 0.5 * (cos - 1.0).abs() / 2.0 + 0.5 * (nd - 0.5).abs();
        let expected = 0.5 * 0.0 + 0.5 * (ce + ce) / 2.0;
        let c = assignment_cost(&model, VertexId(0), &v0.mu, Centroid::new(0.0, 10.0), params).unwrap();
        assert!((c - expected).abs() < TOL);
        assert!((c - 0.027_950_849_718_747_37).abs() < TOL);
    }
}
