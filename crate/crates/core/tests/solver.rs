use laacoex_core::model::{build_rate_matrix, ModelParams, Phase, RateMatrix, SystemState};
use laacoex_core::solver::{balance_residuals, solve, solve_direct, solve_iterative, Method};
use proptest::prelude::*;

const LAMBDAS: [f64; 5] = [25.0, 37.0, 50.0, 62.5, 120.0];

// Frozen from an independent dense least-squares solve (numpy) of the same
// gate set, written separately from this crate.
const NO_LBT: [(f64, f64); 5] = [
    (0.254816552186, 0.745183447814),
    (0.412706359943, 0.869194587285),
    (0.534964028777, 0.930071942446),
    (0.616698030429, 0.958254923927),
    (0.793288240605, 0.992216445095),
];
const LBT_BUFFERED: [(f64, f64); 5] = [
    (0.428865181221, 0.571134818779),
    (0.541566019313, 0.678482291417),
    (0.633916046809, 0.732167906382),
    (0.697070027096, 0.757324932260),
    (0.835796452694, 0.788177027070),
];

fn on(z: u32) -> SystemState {
    SystemState::new(Phase::On, 0, 0, z)
}

#[test]
fn two_state_chain() {
    let m = RateMatrix::from_entries(
        ModelParams::default(),
        vec![on(0), on(1)],
        [(0, 1, 1.0), (1, 0, 3.0)],
    )
    .unwrap();
    for r in [
        solve_direct(&m).unwrap(),
        solve_iterative(&m, 1e-12, 1000).unwrap(),
    ] {
        assert!((r.pi[0] - 0.75).abs() < 1e-12);
        assert!((r.pi[1] - 0.25).abs() < 1e-12);
    }
}

#[test]
fn symmetric_cycle_is_uniform() {
    let m = RateMatrix::from_entries(
        ModelParams::default(),
        vec![on(0), on(1), on(2)],
        [(0, 1, 2.0), (1, 2, 2.0), (2, 0, 2.0)],
    )
    .unwrap();
    let d = solve_direct(&m).unwrap();
    let it = solve_iterative(&m, 1e-12, 1000).unwrap();
    for k in 0..3 {
        assert!((d.pi[k] - 1.0 / 3.0).abs() < 1e-14);
        assert!((it.pi[k] - 1.0 / 3.0).abs() < 1e-12);
    }
    assert_eq!(d.iterations, 0);
}

#[test]
fn two_class_wifi_only_chain() {
    // λ_ℓ = 0 without buffering: Wi-Fi alone, idle ↔ busy with rates 1 and 3
    let p = ModelParams {
        lambda_laa: 0.0,
        lambda_wifi: 1.0,
        mu_wifi: 3.0,
        buffering_enabled: false,
        ..ModelParams::table2(0.0)
    };
    let (m, r) = solve(&p, Method::Direct).unwrap();
    let idle = m.index_of(&on(0)).unwrap();
    assert!((r.pi[idle] - 0.75).abs() < 1e-14);
    assert_eq!(r.p_block_wifi, 0.0);
}

#[test]
fn no_lbt_grid_matches_oracle() {
    for (&l, &(laa, wifi)) in LAMBDAS.iter().zip(&NO_LBT) {
        let (_, r) = solve(&ModelParams::table2(l), Method::Direct).unwrap();
        assert!(
            (r.p_block_laa - laa).abs() < 1e-9,
            "λ={l}: {}",
            r.p_block_laa
        );
        assert!(
            (r.p_block_wifi - wifi).abs() < 1e-9,
            "λ={l}: {}",
            r.p_block_wifi
        );
        assert!(r.residual <= 1e-12);
    }
}

#[test]
fn lbt_grid_matches_oracle() {
    for (&l, &(laa, wifi)) in LAMBDAS.iter().zip(&LBT_BUFFERED) {
        let (_, d) = solve(&ModelParams::table1(l), Method::Direct).unwrap();
        let (_, it) = solve(&ModelParams::table1(l), Method::iterative()).unwrap();
        for r in [&d, &it] {
            assert!(
                (r.p_block_laa - laa).abs() < 1e-9,
                "λ={l}: {}",
                r.p_block_laa
            );
            assert!(
                (r.p_block_wifi - wifi).abs() < 1e-9,
                "λ={l}: {}",
                r.p_block_wifi
            );
        }
        assert!(it.iterations > 0);
    }
}

#[test]
fn dropping_probabilities_monotone_in_laa_load() {
    let rows: Vec<_> = LAMBDAS
        .iter()
        .map(|&l| solve(&ModelParams::table2(l), Method::Direct).unwrap().1)
        .collect();
    for w in rows.windows(2) {
        assert!(w[1].p_block_laa >= w[0].p_block_laa);
        assert!(w[1].p_block_wifi >= w[0].p_block_wifi);
    }
}

#[test]
fn iteration_cap_reports_non_convergence() {
    let m = build_rate_matrix(&ModelParams::table1(50.0)).unwrap();
    let err = solve_iterative(&m, 1e-15, 3).unwrap_err();
    assert!(matches!(
        err,
        laacoex_core::SolveError::NotConverged { iterations: 3, .. }
    ));
}

fn log_uniform() -> impl Strategy<Value = f64> {
    (-2.0f64..2.0).prop_map(|e| 10f64.powf(e))
}

prop_compose! {
    fn random_params()(
        rates in proptest::collection::vec(log_uniform(), 7),
        mult in 1.0f64..20.0,
        q in 0u32..=10,
        th_frac in 0.0f64..=1.0,
        lbt in any::<bool>(),
        buffering in any::<bool>(),
    ) -> ModelParams {
        let q_theta = ((q as f64) * th_frac).round() as u32;
        ModelParams {
            lambda_laa: rates[0],
            lambda_wifi: rates[1],
            mu_laa: rates[2],
            mu_wifi: rates[3],
            mu_sense: rates[4],
            mu_on: rates[5],
            mu_off: rates[6],
            fast_start_multiplier: mult,
            queue_capacity: q,
            queue_threshold: q_theta,
            lbt_enabled: lbt,
            buffering_enabled: buffering,
            ..ModelParams::default()
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn direct_and_iterative_agree(p in random_params()) {
        let m = build_rate_matrix(&p).unwrap();
        let d = solve_direct(&m).unwrap();
        let it = solve_iterative(&m, 1e-12, 1_000_000).unwrap();
        let linf = d.pi.iter().zip(&it.pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(linf <= 1e-8, "L∞ = {linf:e}");
        prop_assert!((d.p_block_laa - it.p_block_laa).abs() <= 1e-8);
        prop_assert!((d.p_block_wifi - it.p_block_wifi).abs() <= 1e-8);
    }

    #[test]
    fn stationary_invariants(p in random_params()) {
        let m = build_rate_matrix(&p).unwrap();
        prop_assert!(m.max_row_sum() <= 1e-12);
        let r = solve_direct(&m).unwrap();
        prop_assert!((r.pi.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(r.pi.iter().all(|&x| x >= 0.0));
        prop_assert!((0.0..=1.0).contains(&r.p_block_laa));
        prop_assert!((0.0..=1.0).contains(&r.p_block_wifi));
        let worst = balance_residuals(&m, &r.pi).into_iter().fold(0.0, f64::max);
        prop_assert!(worst <= 1e-10, "residual {worst:e}");
    }

    #[test]
    fn time_rescaling_invariance(p in random_params(), c in log_uniform()) {
        let (_, a) = solve(&p, Method::Direct).unwrap();
        let (_, b) = solve(&p.scaled(c), Method::Direct).unwrap();
        for (x, y) in a.pi.iter().zip(&b.pi) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
        prop_assert!((a.p_block_laa - b.p_block_laa).abs() <= 1e-10);
        prop_assert!((a.p_block_wifi - b.p_block_wifi).abs() <= 1e-10);
    }
}
