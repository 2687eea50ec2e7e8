//! Literal transcription of the labelling loop: for every input vertex and
//! every model vertex, copy the whole model graph, merge the input vertex
//! into the copy, recompute every incident relational vector from
//! centroids and score the copy against the untouched model.
//!
//! Shares nothing with the library's cost code on purpose.

use std::collections::BTreeMap;

use argseg_core::Arg;

#[derive(Clone)]
struct Graph {
    ids: Vec<u32>,
    mu: Vec<Vec<f64>>,
    p: Vec<(f64, f64)>,
    /// (from, to, nu) over positions.
    edges: Vec<(usize, usize, (f64, f64))>,
    d_max: f64,
}

impl Graph {
    fn from_arg(arg: &Arg) -> Graph {
        let mut order: Vec<usize> = (0..arg.vertex_count()).collect();
        order.sort_by_key(|&i| arg.vertices()[i].id);
        let pos_of = |id| order.iter().position(|&i| arg.vertices()[i].id == id).unwrap();
        Graph {
            ids: order.iter().map(|&i| arg.vertices()[i].id.0).collect(),
            mu: order.iter().map(|&i| arg.vertices()[i].mu.as_slice().to_vec()).collect(),
            p: order.iter().map(|&i| (arg.vertices()[i].centroid.x, arg.vertices()[i].centroid.y)).collect(),
            edges: arg.edges().iter().map(|e| (pos_of(e.from), pos_of(e.to), (e.nu.dx, e.nu.dy))).collect(),
            d_max: arg.d_max(),
        }
    }
}

pub fn edge_cost(a: (f64, f64), b: (f64, f64), gamma: f64) -> f64 {
    let na = (a.0 * a.0 + a.1 * a.1).sqrt();
    let nb = (b.0 * b.0 + b.1 * b.1).sqrt();
    let angular = if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        let theta = (a.0 * b.1 - a.1 * b.0).atan2(a.0 * b.0 + a.1 * b.1);
        (theta.cos() - 1.0).abs() / 2.0
    };
    gamma * angular + (1.0 - gamma) * (na - nb).abs()
}

fn cost(gd: &Graph, gm: &Graph, d: usize, alpha: f64, gamma: f64) -> f64 {
    let c_v = gd.mu[d].iter().zip(&gm.mu[d]).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let incident: Vec<usize> =
        (0..gd.edges.len()).filter(|&k| gd.edges[k].0 == d || gd.edges[k].1 == d).collect();
    let structural = if incident.is_empty() {
        0.0
    } else {
        incident.iter().map(|&k| edge_cost(gd.edges[k].2, gm.edges[k].2, gamma)).sum::<f64>() / incident.len() as f64
    };
    alpha * c_v + (1.0 - alpha) * structural
}

/// Input vertex id -> (model vertex id, minimal cost).
pub fn naive_match(input: &Arg, model: &Arg, alpha: f64, gamma: f64) -> BTreeMap<u32, (u32, f64)> {
    let gm = Graph::from_arg(model);
    let mut out = BTreeMap::new();
    for v_i in input.vertices() {
        let mut f_min = f64::INFINITY;
        let mut min_lbl: i64 = -1;
        for d in 0..gm.ids.len() {
            let mut gd = gm.clone();
            gd.mu[d] = gm.mu[d].iter().zip(v_i.mu.as_slice()).map(|(m, i)| (m + i) / 2.0).collect();
            gd.p[d] = ((gm.p[d].0 + v_i.centroid.x) / 2.0, (gm.p[d].1 + v_i.centroid.y) / 2.0);
            for k in 0..gd.edges.len() {
                let (a, b, _) = gd.edges[k];
                if a == d || b == d {
                    gd.edges[k].2 = (
                        (gd.p[b].0 - gd.p[a].0) / (2.0 * gd.d_max),
                        (gd.p[b].1 - gd.p[a].1) / (2.0 * gd.d_max),
                    );
                }
            }
            let f = cost(&gd, &gm, d, alpha, gamma);
            if f < f_min {
                f_min = f;
                min_lbl = d as i64;
            }
        }
        out.insert(v_i.id.0, (gm.ids[min_lbl as usize], f_min));
    }
    out
}

/// Per input vertex, the model vertex with the closest attributes (ties to
/// the smallest id).
pub fn nearest_by_attributes(input: &Arg, model: &Arg) -> BTreeMap<u32, u32> {
    let mut model_vs: Vec<_> = model.vertices().iter().collect();
    model_vs.sort_by_key(|v| v.id);
    input
        .vertices()
        .iter()
        .map(|v_i| {
            let mut best = (f64::INFINITY, 0);
            for v_m in &model_vs {
                // Merging halves the distance; the argmin is unchanged.
                let d = v_i
                    .mu
                    .as_slice()
                    .iter()
                    .zip(v_m.mu.as_slice())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                if d < best.0 {
                    best = (d, v_m.id.0);
                }
            }
            (v_i.id.0, best.1)
        })
        .collect()
}
