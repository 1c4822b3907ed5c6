//! The witness play realizes the game value, and plays that never reach the
//! error state pay zero regardless of the faults they spend.

mod common;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use maskdist_core::game::{build_strong, GameState};
use maskdist_core::semantics::augment_mask;
use maskdist_core::solver::{
    extract_strategies, payoff, solve_layers, value_from, witness_trace, Play, PlayEnd, INFINITE,
};

#[test]
fn witness_payoff_equals_value_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbee);
    let obs = ["a", "b"];
    let mut positive = 0;
    for case in 0..400 {
        let spec = common::random_lts(&mut rng, 5, &obs, &[], false);
        let impl_ = common::random_lts(&mut rng, 5, &obs, &["f"], false);
        let spec_m = augment_mask(&spec);
        let game = build_strong(&spec_m, &impl_).unwrap();
        let layers = solve_layers(&game);
        let value = value_from(&game, &layers);
        if value.is_zero() {
            assert!(witness_trace(&game, &layers).is_none());
            continue;
        }
        positive += 1;
        let play = witness_trace(&game, &layers).unwrap();
        assert_eq!(
            payoff(&play).unwrap(),
            value,
            "case {case}: witness payoff differs from the game value"
        );
    }
    assert!(positive >= 100, "only {positive} positive-value cases");
}

/// Random plays that follow the verifier's winning strategy inside its
/// region never reach the error state; once a state repeats they are lassos
/// and pay zero.
#[test]
fn verifier_conforming_lassos_pay_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a550);
    let obs = ["a", "b"];
    let mut lassos = 0;
    'outer: while lassos < 100 {
        let spec = common::random_lts(&mut rng, 5, &obs, &[], false);
        let impl_ = common::random_lts(&mut rng, 5, &obs, &["f"], false);
        let spec_m = augment_mask(&spec);
        let game = build_strong(&spec_m, &impl_).unwrap();
        let layers = solve_layers(&game);
        // start anywhere in the verifier's winning region
        let start = match (0..game.states.len())
            .find(|&v| layers.budget[v] == INFINITE && !game.states[v].is_err())
        {
            Some(v) => v,
            None => continue,
        };
        let (_, verifier) = extract_strategies(&game, &layers);
        let mut steps = Vec::new();
        let mut seen = std::collections::HashMap::new();
        let mut current = start;
        loop {
            if let Some(&at) = seen.get(&current) {
                lassos += 1;
                let play = Play {
                    steps,
                    end: PlayEnd::Lasso { cycle_start: at },
                };
                assert!(payoff(&play).unwrap().is_zero());
                continue 'outer;
            }
            seen.insert(current, steps.len());
            let edge = match &game.states[current] {
                GameState::Err => panic!("verifier strategy reached the error state"),
                GameState::Verifier { .. } => verifier
                    .get(&current)
                    .expect("verifier has a safe move inside its region")
                    .clone(),
                GameState::Refuter { .. } => {
                    // refuter moves arbitrarily; it cannot escape the region
                    let adj = &game.edges[current];
                    adj[rng.gen_range(0..adj.len())].clone()
                }
            };
            let target = edge.target;
            steps.push((current, edge));
            current = target;
        }
    }
}
