mod common;

use graphkms::fixture::{example_graph, Profile};
use graphkms::ground::{census, potentials, tight_subgraph, BoundaryPath, PotentialValue};
use graphkms::harmonic::{extreme_points, is_almost_harmonic, Harmonicity};
use graphkms::kms::kms_sets;
use graphkms::spectral::{a_beta, neumann_inverse, riesz_decompose, spectral_radius, WeightMatrix};
use graphkms::state::{eval_omega_lambda, CircularData, Word};
use graphkms::{
    components, min_membership, sign_profile, simple_cycles, GraphDocument, Path, SignTag, Vertex,
    VertexSet,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use common::*;

fn nonnegative_matrix() -> impl Strategy<Value = DMatrix<f64>> {
    (1usize..=8).prop_flat_map(|n| {
        proptest::collection::vec(prop_oneof![3 => Just(0.0), 2 => 0.0..2.0f64], n * n)
            .prop_map(move |v| DMatrix::from_row_slice(n, n, &v))
    })
}

/// `m` scaled to spectral radius at most `target`. Dense eigenvalues of a
/// nilpotent matrix come out tiny but nonzero, so the scale is also capped
/// by the row-sum norm.
fn contraction(m: &DMatrix<f64>, target: f64) -> DMatrix<f64> {
    let norm = m.row_iter().map(|r| r.sum()).fold(0.0, f64::max);
    let scale = eigen_radius(m).max(0.5 * norm);
    if scale > 0.0 {
        m * (target / scale)
    } else {
        m.clone()
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

    #[test]
    fn radius_matches_dense_eigenvalues(m in nonnegative_matrix()) {
        let rho = spectral_radius(&WeightMatrix::from_matrix(m.clone()).unwrap()).unwrap();
        let oracle = eigen_radius(&m);
        // nilpotent blocks defeat the dense solver's accuracy; compare loosely there
        prop_assert!((rho - oracle).abs() <= 1e-6 * oracle.max(1.0), "{rho} vs {oracle}");
    }

    #[test]
    fn radius_is_monotone_under_principal_blocks(m in nonnegative_matrix(), mask in any::<u8>()) {
        let b = WeightMatrix::from_matrix(m.clone()).unwrap();
        let keep: VertexSet = (0..m.nrows()).filter(|i| mask & (1 << i) != 0).map(Vertex).collect();
        let sub = b.principal(&keep).unwrap();
        prop_assert!(spectral_radius(&sub).unwrap() <= spectral_radius(&b).unwrap() + 1e-12);
    }

    #[test]
    fn neumann_inverse_solves(m in nonnegative_matrix()) {
        let n = m.nrows();
        let scaled = contraction(&m, 0.8);
        prop_assume!(scaled.amax() > 0.0);
        let inv = neumann_inverse(&WeightMatrix::from_matrix(scaled.clone()).unwrap()).map_err(|e| TestCaseError::fail(format!("{e} on {scaled}")))?;
        let residual = (DMatrix::identity(n, n) - &scaled) * &inv - DMatrix::identity(n, n);
        prop_assert!(residual.amax() <= 1e-9);
    }

    #[test]
    fn riesz_parts_are_unique(m in nonnegative_matrix(), k in proptest::collection::vec(0.0..1.0f64, 8)) {
        // ψ = Σ B^n k with ρ(B) < 1 is superharmonic with zero harmonic part
        let n = m.nrows();
        let scaled = contraction(&m, 0.7);
        let b = WeightMatrix::from_matrix(scaled.clone()).unwrap();
        let k = DVector::from_column_slice(&k[..n]);
        let inv = neumann_inverse(&b).unwrap();
        let psi = &inv * &k;
        let parts = riesz_decompose(&b, psi.as_slice()).unwrap();
        for i in 0..n {
            prop_assert!(parts.harmonic[i].abs() <= 1e-8);
            prop_assert!((parts.defect[i] - k[i]).abs() <= 1e-8, "{:?} vs {} on {}", parts, k, scaled);
        }
        let again = riesz_decompose(&b, psi.as_slice()).unwrap();
        prop_assert_eq!(parts, again);
    }
}

#[test]
fn components_partition_cycle_vertices() {
    let mut rng = rng(1);
    for _ in 0..50 {
        let g = random_graph(&mut rng);
        let comps = components(&g);
        let mut union = VertexSet::new();
        for c in &comps {
            assert!(c.members.is_disjoint(&union));
            union.extend(c.members.iter().copied());
            assert!(g.closure(&c.members).is_superset(&c.members));
            assert_eq!(g.closure(&c.members), closure_bfs(&g, &c.members));
            if c.circular {
                let start = VertexSet::from([c.least()]);
                assert!(g.hereditary_closure(&start).is_superset(&c.members));
            }
        }
        // a vertex lies on a cycle iff it reaches itself through at least one edge
        let on_cycle: VertexSet = g
            .vertex_ids()
            .filter(|&v| {
                g.out_edges(v).iter().any(|&e| {
                    let r = g.edge(e).range;
                    r == v || closure_bfs(&g, &VertexSet::from([v])).contains(&r)
                })
            })
            .collect();
        assert_eq!(union, on_cycle);
    }
}

#[test]
fn sign_profile_is_monotone_and_cycles_carry_loop_weight() {
    let mut rng = rng(2);
    for _ in 0..50 {
        let g = random_graph(&mut rng);
        let all: VertexSet = g.vertex_ids().collect();
        let whole = sign_profile(&g, &all).unwrap().tag;
        let sub: VertexSet = all.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        let part = sign_profile(&g, &sub).unwrap().tag;
        match whole {
            SignTag::AllPositive => {
                assert!(matches!(part, SignTag::AllPositive | SignTag::NoLoops))
            }
            SignTag::AllNegative => {
                assert!(matches!(part, SignTag::AllNegative | SignTag::NoLoops))
            }
            SignTag::NoLoops => assert_eq!(part, SignTag::NoLoops),
            _ => {}
        }
        // a loop built from two simple cycles through a shared vertex weighs their sum
        let cycles = simple_cycles(&g, &all).unwrap();
        for c1 in &cycles {
            for c2 in &cycles {
                if c2.source() == c1.source() {
                    let joined = c1.concat(c2).unwrap();
                    let w = joined.weight(&g);
                    assert!((w - c1.weight(&g) - c2.weight(&g)).abs() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn extreme_points_match_kms_sets() {
    for profile in Profile::ALL {
        let g = example_graph(profile);
        for i in -12..=12 {
            let beta = i as f64 * 0.25 + 0.01;
            let points = extreme_points(&g, beta).unwrap();
            let sets = kms_sets(&g, beta).unwrap();
            assert_eq!(points.len(), sets.len(), "{profile:?} at {beta}");
            let a = a_beta(&g, beta);
            for p in &points {
                assert_ne!(is_almost_harmonic(&a, &p.vector, &g), Harmonicity::Neither);
            }
        }
    }
}

#[test]
fn potentials_are_exact_fixed_points() {
    let mut rng = rng(3);
    for _ in 0..50 {
        let g = random_graph(&mut rng);
        let m = potentials(&g);
        for v in g.vertex_ids() {
            let PotentialValue::Finite(mv) = m.get(v) else {
                continue;
            };
            let mut best: f64 = 0.0;
            for &e in g.in_edges(v) {
                if let PotentialValue::Finite(ms) = m.get(g.edge(e).source) {
                    best = best.min(ms + g.edge(e).weight);
                }
            }
            assert_eq!(mv, best, "vertex {}", g.name(v));
        }
        let tight = tight_subgraph(&g, &m);
        let all: VertexSet = g.vertex_ids().collect();
        for cycle in simple_cycles(&g, &all).unwrap() {
            if cycle.edges().iter().all(|&e| tight.is_tight(e)) {
                assert_eq!(cycle.weight(&g), 0.0);
            }
        }
    }
}

#[test]
fn strictly_positive_weights_give_one_orbit_per_sink() {
    let mut rng = rng(4);
    for _ in 0..30 {
        let g = random_graph(&mut rng);
        let g = g.reweighted(|e| e.weight.abs()).unwrap();
        let c = census(&g).unwrap();
        assert!(!c.rich);
        assert!(c.cycle_orbits.is_empty());
        assert_eq!(c.sink_orbits.len(), g.sinks().len());
        assert!(c.sink_orbits.iter().all(|o| o.count == 1));
    }
}

#[test]
fn min_membership_follows_tight_shifts() {
    let g = example_graph(Profile::F2);
    let cycle = Path::from_ids(&g, &["a", "e3"]).unwrap();
    let at_v4 = BoundaryPath::Periodic {
        prefix: Path::empty(cycle.source()),
        cycle: cycle.clone(),
    };
    assert!(min_membership(&g, &at_v4).unwrap());
    // shifting by `a` lands at v3, whose potential is negative
    let m = potentials(&g);
    assert!(m.get(g.vertex("v3").unwrap()).finite().unwrap() < 0.0);
    let at_v3 = BoundaryPath::Periodic {
        prefix: Path::empty(g.vertex("v3").unwrap()),
        cycle: cycle.rotate(&g, 1),
    };
    assert!(!min_membership(&g, &at_v3).unwrap());
}

#[test]
fn circular_states_positive_consistent_and_twisted() {
    let mut rng = rng(5);
    for (profile, label, beta) in [(Profile::F1, "C3", 1.2), (Profile::F2, "C1", -0.7)] {
        let g = example_graph(profile);
        let d = CircularData::by_label(&g, label).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let eval = |l, w: &Word| eval_omega_lambda(&g, beta, &d, l, w).unwrap();
        let mut pick = picker(&mut rng);
        for _ in 0..200 {
            let w = graphkms::state::sample_word(&g, 5, &mut pick);
            let diag = Word::new(w.mu.clone(), w.mu.clone()).unwrap();
            assert!(eval(one, &diag).re >= 0.0);
            let (a, b) = (eval(i, &w), eval(i, &w.adjoint()));
            assert!((a - b.conj()).norm() <= 1e-14);
            if w.mu.len() == w.nu.len() {
                assert!((eval(one, &w) - eval(i, &w)).norm() <= 1e-14);
            }
        }
        // Σ_e ω(S_e S_e*) = ω(P_v) at non-sinks
        for v in g.vertex_ids().filter(|&v| !g.is_sink(v)) {
            let pv = eval(one, &Word::vertex(v));
            let sum: Complex64 = g
                .out_edges(v)
                .iter()
                .map(|&e| {
                    eval(
                        one,
                        &Word::new(Path::edge(&g, e), Path::edge(&g, e)).unwrap(),
                    )
                })
                .sum();
            assert!((pv - sum).norm() <= 1e-12, "vertex {}", g.name(v));
        }
        // the loop itself separates λ = 1 from λ = i
        let base = Path::empty(d.base);
        let w = Word::new(d.loop_path.clone(), base).unwrap();
        assert!((eval(one, &w) - eval(i, &w)).norm() > 1e-6);
    }
}

#[test]
fn documents_round_trip() {
    let mut rng = rng(6);
    for _ in 0..20 {
        let g = random_graph(&mut rng);
        let doc = GraphDocument::from_graph(&g);
        for text in [doc.to_json(), doc.to_text()] {
            let back = GraphDocument::parse(&text).unwrap().graph(None).unwrap();
            assert_eq!(back.to_string(), g.to_string());
            assert_eq!(
                spectral_radius(&a_beta(&back, 0.3)).unwrap().to_bits(),
                spectral_radius(&a_beta(&g, 0.3)).unwrap().to_bits()
            );
        }
    }
}

#[test]
fn vertex_projections_partition_each_block() {
    let mut rng = rng(7);
    let mut graphs = vec![example_graph(Profile::Gauge)];
    graphs.extend((0..20).map(|_| planted_graph(&mut rng, false).0));
    for g in graphs {
        let rep = graphkms::build_representation(&g).unwrap();
        for (i, block) in rep.blocks.iter().enumerate() {
            let rank: i64 = g
                .vertex_ids()
                .map(|v| rep.projection(v)[i].trace().constant_term())
                .sum();
            assert_eq!(rank, block.dim() as i64);
        }
    }
}
