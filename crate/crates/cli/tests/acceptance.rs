//! Acceptance suite: one test per acceptance criterion, each printing a
//! single PASS line (run with `--nocapture` to see them). The large-instance
//! criterion is ignored by default; run it with `cargo test -- --ignored`.

mod support;

use std::time::Instant;

use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use maskdist_core::game::{build_strong, build_weak, GameState};
use maskdist_core::gcl;
use maskdist_core::relations::{bisimilar, masking_sim};
use maskdist_core::semantics::{augment_mask, restrict, Label, Lts};
use maskdist_core::solver::{
    distance, extract_strategies, payoff, solve_layers, value_from, witness_trace, Mode, Play,
    PlayEnd, INFINITE,
};

use support::*;

fn mode_of(weak: bool) -> Mode {
    if weak {
        Mode::Weak
    } else {
        Mode::Strong
    }
}

fn check_fixture_file(name: &str) {
    for (model, params, weak, num, den) in fixture_rows(&corpus_dir().join(name)) {
        let (spec_path, impl_path) = resolve_pair(&model, &params);
        let spec = load_model(&spec_path);
        let impl_ = load_model(&impl_path);
        let report = distance(&spec, &impl_, mode_of(weak)).unwrap();
        assert_eq!(
            report.value,
            Rational64::new(num, den),
            "{model}-{params}: got {}, expected {num}/{den}",
            report.value
        );
    }
}

/// Criterion 1: the desk-scale published distances reproduce exactly,
/// within the time budget.
#[test]
fn criterion_1_desk_scale_distances() {
    let start = Instant::now();
    check_fixture_file("fixtures.txt");
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "desk-scale rows took {elapsed:?}, budget is 60 s"
    );
    println!("criterion 1 (desk-scale distances): PASS ({elapsed:?})");
}

/// Criterion 2: the larger instances, opt-in because of their runtime.
#[test]
#[ignore = "larger instances; run with -- --ignored"]
fn criterion_2_large_instances() {
    check_fixture_file("fixtures_extended.txt");
    println!("criterion 2 (large instances): PASS");
}

fn cell_labels() -> (Label, Label, Label, Label) {
    (
        Label::obs("W0"),
        Label::obs("W1"),
        Label::obs("R0"),
        Label::obs("R1"),
    )
}

fn nominal_cell() -> Lts {
    let (w0, w1, r0, r1) = cell_labels();
    Lts::from_edges(
        2,
        vec![
            (0, w0.clone(), 0),
            (0, w1.clone(), 1),
            (0, r0, 0),
            (1, w0, 0),
            (1, w1, 1),
            (1, r1, 1),
        ],
    )
}

fn tolerant_cell() -> Lts {
    let (w0, w1, r0, r1) = cell_labels();
    let f = Label::fault("flip");
    Lts::from_edges(
        3,
        vec![
            (0, w0.clone(), 0),
            (0, w1.clone(), 1),
            (0, r0.clone(), 0),
            (0, f, 2),
            (1, w0.clone(), 0),
            (1, w1.clone(), 1),
            (1, r1, 1),
            (2, r0, 2),
            (2, w0, 0),
            (2, w1, 1),
        ],
    )
}

fn fragile_cell() -> Lts {
    let (w0, w1, _, r1) = cell_labels();
    let f = Label::fault("flip");
    let mut edges = tolerant_cell().edges.clone();
    edges.push((2, f, 3));
    edges.push((3, r1, 3));
    edges.push((3, w0, 0));
    edges.push((3, w1, 1));
    Lts::from_edges(4, edges)
}

/// Criterion 3: the memory-cell running example — one flip masked with the
/// expected relation, two flips giving 1/3 with a two-fault witness.
#[test]
fn criterion_3_running_example() {
    let report = distance(&nominal_cell(), &tolerant_cell(), Mode::Strong).unwrap();
    assert!(report.value.is_zero());
    let rel = masking_sim(&nominal_cell(), &tolerant_cell(), Mode::Strong).unwrap();
    for (s, t) in [(0, 0), (1, 1), (0, 2)] {
        assert!(rel.contains(s, t), "missing pair ({s},{t})");
    }
    let report = distance(&nominal_cell(), &fragile_cell(), Mode::Strong).unwrap();
    assert_eq!(report.value, Rational64::new(1, 3));
    let witness = report.witness.unwrap();
    assert_eq!(witness.iter().filter(|s| s.fault).count(), 2);
    println!("criterion 3 (running example): PASS");
}

/// Criterion 4: the game value is zero exactly when a masking simulation
/// exists, over random systems in both modes.
#[test]
fn criterion_4_game_matches_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xace4);
    let obs = ["a", "b", "c"];
    let faults = ["f", "g"];
    for case in 0..1100 {
        let spec = random_lts(&mut rng, 6, &obs[..1 + case % 3], &[], case % 2 == 1);
        let impl_ = random_lts(&mut rng, 6, &obs[..1 + case % 3], &faults[..case % 3], case % 2 == 1);
        for mode in [Mode::Strong, Mode::Weak] {
            let value = distance(&spec, &impl_, mode).unwrap().value;
            let rel = masking_sim(&spec, &impl_, mode);
            assert_eq!(value.is_zero(), rel.is_some(), "case {case} mode {mode:?}");
        }
    }
    println!("criterion 4 (game vs relation, 1100 pairs, both modes): PASS");
}

/// Criterion 5: the layered solver agrees with the literal winning-set
/// transcription on random games.
#[test]
fn criterion_5_solver_matches_transcription() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xace5);
    for case in 0..520 {
        let max = if case % 3 == 0 { 200 } else { 40 };
        let game = random_game(&mut rng, max);
        assert_eq!(
            solve_layers(&game),
            naive_layers(&game),
            "case {case} ({} states)",
            game.states.len()
        );
    }
    println!("criterion 5 (solver vs transcription, 520 games): PASS");
}

/// Criterion 6: triangle inequality over growing fault sets, exact
/// arithmetic.
#[test]
fn criterion_6_triangle_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xace6);
    let obs = ["a", "b"];
    for case in 0..520 {
        let with_tau = case % 2 == 1;
        let mode = mode_of(case % 4 >= 2);
        let a = random_lts(&mut rng, 5, &obs, &[], with_tau);
        let a1 = random_lts(&mut rng, 5, &obs, &["f"], with_tau);
        let a2 = random_lts(&mut rng, 5, &obs, &["f", "g"], with_tau);
        let d02 = distance(&a, &a2, mode).unwrap().value;
        let d01 = distance(&a, &a1, mode).unwrap().value;
        let d12 = distance(&a1, &a2, mode).unwrap().value;
        assert!(d02 <= d01 + d12, "case {case}: {d02} > {d01} + {d12}");
    }
    println!("criterion 6 (triangle inequality, 520 triples): PASS");
}

/// Criterion 7: the witness play realizes the value on every desk-scale
/// corpus model, and verifier-conforming lassos pay zero.
#[test]
fn criterion_7_payoff_consistency() {
    for (model, params, weak, _, _) in fixture_rows(&corpus_dir().join("fixtures.txt")) {
        let (spec_path, impl_path) = resolve_pair(&model, &params);
        let spec = augment_mask(&load_model(&spec_path));
        let impl_ = load_model(&impl_path);
        let game = if weak {
            build_weak(&spec, &impl_).unwrap()
        } else {
            build_strong(&spec, &impl_).unwrap()
        };
        let layers = solve_layers(&game);
        let value = value_from(&game, &layers);
        assert!(!value.is_zero(), "{model}-{params} unexpectedly masked");
        let play = witness_trace(&game, &layers).unwrap();
        assert_eq!(payoff(&play).unwrap(), value, "{model}-{params}");
    }

    // random verifier-conforming lassos
    let mut rng = ChaCha8Rng::seed_from_u64(0xace7);
    let obs = ["a", "b"];
    let mut lassos = 0;
    while lassos < 100 {
        let spec = augment_mask(&random_lts(&mut rng, 5, &obs, &[], false));
        let impl_ = random_lts(&mut rng, 5, &obs, &["f"], false);
        let game = build_strong(&spec, &impl_).unwrap();
        let layers = solve_layers(&game);
        let Some(start) = (0..game.states.len())
            .find(|&v| layers.budget[v] == INFINITE && !game.states[v].is_err())
        else {
            continue;
        };
        let (_, verifier) = extract_strategies(&game, &layers);
        let mut steps = Vec::new();
        let mut seen = std::collections::HashMap::new();
        let mut current = start;
        loop {
            if let Some(&at) = seen.get(&current) {
                let play = Play {
                    steps,
                    end: PlayEnd::Lasso { cycle_start: at },
                };
                assert!(payoff(&play).unwrap().is_zero());
                lassos += 1;
                break;
            }
            seen.insert(current, steps.len());
            let edge = match &game.states[current] {
                GameState::Err => unreachable!("verifier region never reaches the error state"),
                GameState::Verifier { .. } => verifier[&current].clone(),
                GameState::Refuter { .. } => {
                    let adj = &game.edges[current];
                    adj[rng.gen_range(0..adj.len())].clone()
                }
            };
            let target = edge.target;
            steps.push((current, edge));
            current = target;
        }
    }
    println!("criterion 7 (payoff consistency, corpus + 100 lassos): PASS");
}

/// Criterion 8: distance 1 exactly when the nominal model and the fault-free
/// part of the implementation are not weakly bisimilar.
#[test]
fn criterion_8_distance_one_characterization() {
    let one = Rational64::new(1, 1);
    for (model, params, _, _, _) in fixture_rows(&corpus_dir().join("fixtures.txt")) {
        let (spec_path, impl_path) = resolve_pair(&model, &params);
        let spec = load_model(&spec_path);
        let impl_ = load_model(&impl_path);
        let value = distance(&spec, &impl_, Mode::Weak).unwrap().value;
        let stripped = restrict(&impl_, &impl_.fault_set.clone());
        let same = bisimilar(&spec, &stripped, Mode::Weak);
        assert_eq!(value == one, !same, "{model}-{params}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xace8);
    let obs = ["a", "b"];
    for case in 0..200 {
        let spec = random_lts(&mut rng, 5, &obs, &[], case % 2 == 1);
        let impl_ = random_lts(&mut rng, 5, &obs, &["f"], case % 2 == 1);
        let value = distance(&spec, &impl_, Mode::Weak).unwrap().value;
        let stripped = restrict(&impl_, &impl_.fault_set.clone());
        let same = bisimilar(&spec, &stripped, Mode::Weak);
        assert_eq!(value == one, !same, "case {case}");
    }
    println!("criterion 8 (distance-one characterization, corpus + 200 pairs): PASS");
}

/// Criterion 9: the canonical printer round-trips every corpus file.
#[test]
fn criterion_9_frontend_round_trip() {
    let mut checked = 0;
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("gcl") {
            continue;
        }
        let source = std::fs::read_to_string(&path).unwrap();
        let program = gcl::parse(&source).unwrap_or_else(|e| panic!("{}:{e}", path.display()));
        let printed = gcl::pretty_print(&program);
        let reparsed =
            gcl::parse(&printed).unwrap_or_else(|e| panic!("{} (printed):{e}", path.display()));
        assert!(
            program.structurally_eq(&reparsed),
            "{} changed under print-and-parse",
            path.display()
        );
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} corpus files found");
    println!("criterion 9 (frontend round-trip, {checked} files): PASS");
}

/// The two-philosopher system deadlocks, and only behind a fault.
#[test]
fn phil_two_deadlock_only_behind_fault() {
    let impl_ = load_model(&corpus_dir().join("phil_2.gcl"));
    assert!(!impl_.deadlocks.is_empty(), "no deadlock state found");
    // no deadlock is reachable over fault-free edges alone
    let stripped = restrict(&impl_, &impl_.fault_set.clone());
    assert!(stripped.deadlocks.is_empty(), "deadlock without any fault");
}
