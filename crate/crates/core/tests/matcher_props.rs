#[path = "support/naive.rs"]
mod naive;

use argseg_core::fixtures::{random_arg, reorder, rng, RandomArgSpec};
use argseg_core::{
    assignment_cost, deform_vertex, edge_cost, match_graphs, relational_attribute, vertex_cost, Arg, AttributeVector,
    Centroid, MatchParams, RelationalVector, Vertex,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn small_pair(seed: u64, n_in: usize, n_model: usize, arity: usize) -> (Arg, Arg) {
    let mut r = rng(seed);
    let spec = |n| RandomArgSpec { arity, max_degree: 3, edge_attempts: 2, ..RandomArgSpec::new(n) };
    let input = random_arg(&mut r, spec(n_in));
    let model = random_arg(&mut r, RandomArgSpec { labelled: true, ..spec(n_model) });
    (input, model)
}

fn unit() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn centroid() -> impl Strategy<Value = Centroid> {
    (0.0..200.0f64, 0.0..200.0f64).prop_map(|(x, y)| Centroid::new(x, y))
}

fn nu() -> impl Strategy<Value = RelationalVector> {
    (-0.5..=0.5f64, -0.5..=0.5f64).prop_map(|(x, y)| RelationalVector::new(x, y))
}

fn rgb() -> impl Strategy<Value = AttributeVector> {
    (unit(), unit(), unit()).prop_map(|(r, g, b)| AttributeVector::rgb(r, g, b).unwrap())
}

proptest! {
    #[test]
    fn relational_attribute_is_antisymmetric(a in centroid(), b in centroid(), d in 1.0..500.0f64) {
        let ab = relational_attribute(a, b, d).unwrap();
        let ba = relational_attribute(b, a, d).unwrap();
        prop_assert_eq!(ab, -ba);
    }

    #[test]
    fn relational_attribute_range(a in centroid(), b in centroid()) {
        let d = ((a.x - b.x).hypot(a.y - b.y)).max(1e-9);
        let nu = relational_attribute(a, b, d).unwrap();
        prop_assert!(nu.dx.abs() <= 0.5 + 1e-12 && nu.dy.abs() <= 0.5 + 1e-12);
    }

    #[test]
    fn edge_cost_bounds_and_term_symmetry(a in nu(), b in nu(), g in unit()) {
        let c = edge_cost(a, b, g);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
        prop_assert!(edge_cost(a, a, g).abs() < 1e-12);
        // Pure angular and pure modulus terms are each symmetric.
        prop_assert!((edge_cost(a, b, 1.0) - edge_cost(b, a, 1.0)).abs() < 1e-12);
        prop_assert!((edge_cost(a, b, 0.0) - edge_cost(b, a, 0.0)).abs() < 1e-12);
        let blended = g * edge_cost(a, b, 1.0) + (1.0 - g) * edge_cost(a, b, 0.0);
        prop_assert!((c - blended).abs() < 1e-12);
    }

    #[test]
    fn edge_cost_agrees_with_angle_oracle(a in nu(), b in nu(), g in unit()) {
        let expected = naive::edge_cost((a.dx, a.dy), (b.dx, b.dy), g);
        prop_assert!((edge_cost(a, b, g) - expected).abs() < 1e-9);
    }

    #[test]
    fn vertex_cost_is_a_metric(a in rgb(), b in rgb(), c in rgb()) {
        let ab = vertex_cost(&a, &b).unwrap();
        prop_assert_eq!(vertex_cost(&a, &a).unwrap(), 0.0);
        prop_assert!((ab - vertex_cost(&b, &a).unwrap()).abs() < 1e-15);
        prop_assert!(ab <= vertex_cost(&a, &c).unwrap() + vertex_cost(&c, &b).unwrap() + 1e-12);
        if a != b {
            prop_assert!(ab > 0.0);
        }
    }

    #[test]
    fn zero_cost_iff_zero_deformation(
        seed in any::<u64>(),
        alpha in 0.01..0.99f64,
        gamma in 0.01..0.99f64,
        mu_i in rgb(),
        p_i in centroid(),
    ) {
        let mut r = rng(seed);
        let model = random_arg(&mut r, RandomArgSpec { max_degree: 4, edge_attempts: 4, ..RandomArgSpec::new(5) });
        let params = MatchParams::new(alpha, gamma).unwrap();
        for v in model.vertices() {
            if model.incident_edges(v.id).unwrap().is_empty() {
                continue;
            }
            prop_assert_eq!(assignment_cost(&model, v.id, &v.mu, v.centroid, params).unwrap(), 0.0);
            let c = assignment_cost(&model, v.id, &mu_i, p_i, params).unwrap();
            if mu_i != v.mu || p_i != v.centroid {
                prop_assert!(c > 0.0);
            }
        }
    }

    #[test]
    fn deformation_reproduces_assignment_cost(
        seed in any::<u64>(),
        alpha in unit(),
        gamma in unit(),
        mu_i in rgb(),
        p_i in centroid(),
    ) {
        let mut r = rng(seed);
        let model = random_arg(&mut r, RandomArgSpec::new(6));
        let params = MatchParams::new(alpha, gamma).unwrap();
        for v in model.vertices() {
            let d = deform_vertex(&model, v.id, &mu_i, p_i).unwrap();
            let structural = if d.incident.is_empty() {
                0.0
            } else {
                d.incident.iter().map(|&(e, nu)| edge_cost(nu, model.edges()[e].nu, gamma)).sum::<f64>()
                    / d.incident.len() as f64
            };
            let expected = alpha * vertex_cost(&d.mu, &v.mu).unwrap() + (1.0 - alpha) * structural;
            let got = assignment_cost(&model, v.id, &mu_i, p_i, params).unwrap();
            prop_assert!((got - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_full_copy_oracle(
        seed in any::<u64>(),
        n_in in 1usize..=6,
        n_model in 1usize..=4,
        alpha in unit(),
        gamma in unit(),
        gray in any::<bool>(),
    ) {
        let (input, model) = small_pair(seed, n_in, n_model, if gray { 1 } else { 3 });
        let params = MatchParams::new(alpha, gamma).unwrap();
        let got = match_graphs(&input, &model, params).unwrap();
        let expected = naive::naive_match(&input, &model, alpha, gamma);
        prop_assert_eq!(got.len(), expected.len());
        for (id, (m, c)) in expected {
            let a = got.get(argseg_core::VertexId(id)).unwrap();
            prop_assert_eq!(a.model_vertex.0, m);
            prop_assert!((a.cost - c).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_one_is_nearest_color(seed in any::<u64>(), gamma in unit()) {
        let (input, model) = small_pair(seed, 12, 5, 3);
        let got = match_graphs(&input, &model, MatchParams::new(1.0, gamma).unwrap()).unwrap();
        let expected = naive::nearest_by_attributes(&input, &model);
        prop_assert_eq!(
            got.mapping().into_iter().map(|(k, v)| (k.0, v.0)).collect::<std::collections::BTreeMap<_, _>>(),
            expected
        );
    }

    #[test]
    fn alpha_one_argmin_survives_attribute_scaling(seed in any::<u64>(), k in 0.05..=1.0f64) {
        let (input, model) = small_pair(seed, 10, 4, 3);
        let scale = |arg: &Arg| {
            let vertices = arg
                .vertices()
                .iter()
                .map(|v| Vertex {
                    mu: AttributeVector::new(v.mu.as_slice().iter().map(|c| c * k).collect()).unwrap(),
                    ..v.clone()
                })
                .collect();
            Arg::new(arg.d_max(), arg.attribute_arity(), vertices, arg.edges().to_vec()).unwrap()
        };
        let params = MatchParams::new(1.0, 0.5).unwrap();
        let before = match_graphs(&input, &model, params).unwrap().mapping();
        let after = match_graphs(&scale(&input), &scale(&model), params).unwrap().mapping();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn input_order_does_not_matter(seed in any::<u64>(), alpha in unit(), gamma in unit()) {
        let (input, model) = small_pair(seed, 15, 6, 3);
        let params = MatchParams::new(alpha, gamma).unwrap();
        let base = match_graphs(&input, &model, params).unwrap();
        let mut order: Vec<usize> = (0..input.vertex_count()).collect();
        order.shuffle(&mut rng(seed ^ 0x5eed));
        let permuted = match_graphs(&reorder(&input, &order), &model, params).unwrap();
        prop_assert_eq!(base, permuted);
    }

    #[test]
    fn matching_leaves_graphs_untouched(seed in any::<u64>()) {
        let (input, model) = small_pair(seed, 8, 4, 3);
        let (input_before, model_before) = (input.clone(), model.clone());
        match_graphs(&input, &model, MatchParams::default()).unwrap();
        prop_assert_eq!(input, input_before);
        prop_assert_eq!(model, model_before);
    }

    #[test]
    fn copy_of_model_is_identity(seed in any::<u64>(), alpha in 0.01..=1.0f64, gamma in unit()) {
        let mut r = rng(seed);
        let model = random_arg(&mut r, RandomArgSpec { labelled: true, ..RandomArgSpec::new(7) });
        let out = match_graphs(&model, &model, MatchParams::new(alpha, gamma).unwrap()).unwrap();
        for v in model.vertices() {
            prop_assert_eq!(out.model_vertex(v.id), Some(v.id));
            prop_assert!(out.cost(v.id).unwrap() < 1e-12);
        }
    }
}
