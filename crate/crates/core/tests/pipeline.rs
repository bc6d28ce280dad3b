use gridpair_core::demand::{project, split_demands};
use gridpair_core::generate::{random_multigraph, random_pairing};
use gridpair_core::{
    solve, solve_complete, solve_with_report, verify, BaseOptions, DemandEdge, DemandGraph, Error,
    GridSpec, SolveOptions, Vertex,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn k18_pairing_routes_in_one_dimension() {
    let spec = GridSpec::new(18, 1).unwrap();
    let d = random_pairing(spec, &mut rng(5)).unwrap();
    let r = solve(&d, &SolveOptions::default()).unwrap();
    assert_eq!(r.len(), 9);
    let rep = verify(&spec, &d, &r);
    assert!(rep.ok, "{}", rep.render());
    assert!(rep.stats.max_trail_length <= 3);
}

#[test]
fn two_dimensional_pairings_satisfy_claims() {
    let spec = GridSpec::new(18, 2).unwrap();
    for seed in 0..20 {
        let d = random_pairing(spec, &mut rng(seed)).unwrap();
        let (r, report) = solve_with_report(
            &d,
            &SolveOptions {
                seed,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.len(), 162);
        let rep = verify(&spec, &d, &r);
        assert!(rep.ok, "seed {seed}: {}", rep.render());
        assert!(rep.stats.max_trail_length <= 9);
        assert_eq!(report.q, 2);
        assert!(report.max_layer_degree <= 2);
        assert!(report.max_column_degree <= 4);
    }
}

#[test]
fn projected_degree_is_bounded_by_t_q() {
    let spec = GridSpec::new(18, 2).unwrap();
    for seed in 0..100 {
        let d = random_pairing(spec, &mut rng(seed)).unwrap();
        let (_, cross) = split_demands(&d);
        let h = project(&cross, &spec).unwrap();
        assert!(h.max_degree() <= 36);
        assert_eq!(h.edges().len(), cross.len());
    }
}

#[test]
fn budget_four_on_t30() {
    let spec = GridSpec::new(30, 2).unwrap();
    let d = random_multigraph(spec, 3, &mut rng(1)).unwrap();
    assert_eq!(d.max_degree(), 3);
    let (r, report) = solve_with_report(&d, &SolveOptions::default()).unwrap();
    assert_eq!(report.q, 4);
    assert!(verify(&spec, &d, &r).ok);
}

#[test]
fn infeasible_budget_without_unchecked() {
    let spec = GridSpec::new(12, 2).unwrap();
    let d = random_pairing(spec, &mut rng(0)).unwrap();
    assert!(matches!(
        solve(&d, &SolveOptions::default()),
        Err(Error::InfeasibleBudget { t: 12, delta: 1 })
    ));
}

#[test]
fn unchecked_small_grid_is_verified_when_it_succeeds() {
    let spec = GridSpec::new(12, 2).unwrap();
    let opts = SolveOptions {
        unchecked: true,
        ..Default::default()
    };
    for seed in 0..5 {
        let d = random_pairing(spec, &mut rng(seed)).unwrap();
        if let Ok(r) = solve(&d, &opts) {
            assert!(verify(&spec, &d, &r).ok);
        }
    }
}

#[test]
fn jobs_and_seed_determinism() {
    let spec = GridSpec::new(18, 2).unwrap();
    let d = random_multigraph(spec, 2, &mut rng(9)).unwrap();
    let base = SolveOptions {
        seed: 42,
        shuffle_factors: true,
        ..Default::default()
    };
    let a = solve(
        &d,
        &SolveOptions {
            jobs: Some(1),
            ..base.clone()
        },
    )
    .unwrap();
    let b = solve(
        &d,
        &SolveOptions {
            jobs: Some(4),
            ..base.clone()
        },
    )
    .unwrap();
    let c = solve(&d, &base).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn simplified_trails_still_verify() {
    let spec = GridSpec::new(18, 2).unwrap();
    let d = random_pairing(spec, &mut rng(3)).unwrap();
    let r = solve(
        &d,
        &SolveOptions {
            simplify: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(verify(&spec, &d, &r).ok);
    for (_, tr) in r.trails() {
        let mut vs = tr.vertices().to_vec();
        vs.sort_unstable();
        vs.dedup();
        assert_eq!(vs.len(), tr.vertices().len(), "trail revisits a vertex");
    }
}

#[test]
fn mixed_intra_and_cross_demands() {
    let spec = GridSpec::new(18, 2).unwrap();
    let r = |c: [usize; 2]| spec.rank(&Vertex::new(c.to_vec())).unwrap();
    let d = DemandGraph::new(
        spec,
        vec![
            DemandEdge::new(10, r([0, 1]), r([0, 4])),
            DemandEdge::new(20, r([0, 1]), r([5, 1])),
            DemandEdge::new(30, r([3, 3]), r([5, 9])),
        ],
    )
    .unwrap();
    let routing = solve(&d, &SolveOptions::default()).unwrap();
    assert!(verify(&spec, &d, &routing).ok);
    assert_eq!(
        routing
            .trails()
            .iter()
            .map(|(id, _)| *id)
            .collect::<Vec<_>>(),
        vec![10, 20, 30]
    );
}

#[test]
fn base_solver_handles_degree_four_on_k18() {
    let spec = GridSpec::new(18, 1).unwrap();
    for seed in 0..50 {
        let d = random_multigraph(spec, 4, &mut rng(seed)).unwrap();
        let r = solve_complete(18, d.edges(), seed, &BaseOptions::default()).unwrap();
        let rep = verify(&spec, &d, &r);
        assert!(rep.ok);
        assert!(rep.stats.max_trail_length <= 3);
    }
}
