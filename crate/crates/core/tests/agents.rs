mod common;

use std::collections::HashSet;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stepworld::agents::{
    bit_length, enumerate_policies, make_baseline, policy_count, BaselineKind, LearnerParams, PolicyCode,
};
use stepworld::{agent_step, builtin_world, run_life, Agent, Letter, MeaningOfLife, TransducerPolicy};

use common::*;

fn learner(meaning: &MeaningOfLife) -> LearnerParams {
    LearnerParams {
        history: 1,
        epsilon: 0.3,
        alpha: 0.5,
        gamma: 0.5,
        decay_steps: Some(4000),
        meaning: meaning.clone(),
    }
}

#[test]
fn small_enumeration_counts() {
    let (s, o) = alphabets(1, 2);
    assert_eq!(enumerate_policies(s, o, 1).unwrap().count(), 2);
    let (s, o) = alphabets(2, 2);
    let all: Vec<_> = enumerate_policies(s.clone(), o.clone(), 1).unwrap().collect();
    assert_eq!(all.len(), 4);
    let first = &all[0].1;
    assert_eq!(*first, TransducerPolicy::constant(s, o, Letter(0)).unwrap());
}

#[test]
fn enumeration_is_complete_and_duplicate_free() {
    for m in 1..=2 {
        for k in 1..=2 {
            let (s, o) = alphabets(m, k);
            let stream = enumerate_policies(s.clone(), o.clone(), 2).unwrap();
            let total = stream.total();
            let mut seen = HashSet::new();
            let mut last_len = 0;
            for (code, p) in stream {
                assert!(code.length >= last_len);
                last_len = code.length;
                let table: Vec<(usize, usize)> = (0..p.state_count())
                    .flat_map(|q| s.letters().map(move |a| (q, a)))
                    .map(|(q, a)| (p.output(q, a).0, p.next_state(q, a)))
                    .collect();
                assert!(seen.insert((p.state_count(), table)));
            }
            // independent generation of every table with up to two states
            let mut expected = 0u64;
            for states in 1..=2usize {
                let cells = (states * m) as u32;
                expected += (k as u64).pow(cells) * (states as u64).pow(cells);
                assert_eq!(policy_count(m, k, states), Some((k as u64).pow(cells) * (states as u64).pow(cells)));
            }
            assert_eq!(seen.len() as u64, expected);
            assert_eq!(total, expected);
        }
    }
}

#[test]
fn codes_round_trip() {
    let (s, o) = alphabets(3, 2);
    for index in 0..100_000u64 {
        let p = PolicyCode::decode(index, s.clone(), o.clone()).unwrap();
        let code = PolicyCode::encode(&p).unwrap();
        assert_eq!(code.index, index);
        assert_eq!(code.length, bit_length(3, 2, p.state_count()));
        assert_eq!(PolicyCode::from_bits(&PolicyCode::bits(&p).unwrap(), s.clone(), o.clone()).unwrap(), p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let p = random_policy(&mut rng, &s, &o, 4).normalized_start();
        let code = PolicyCode::encode(&p).unwrap();
        assert_eq!(PolicyCode::decode(code.index, s.clone(), o.clone()).unwrap(), p);
    }
}

#[test]
fn echo_and_alternator() {
    let (s, o) = alphabets(2, 2);
    let renamed = |a: &Arc<stepworld::Alphabet>| {
        Arc::new(stepworld::Alphabet::new(a.role(), ["0", "1"]).unwrap())
    };
    let (es, eo) = (renamed(&s), renamed(&o));
    let mut echo = TransducerPolicy::echo(es, eo).unwrap();
    for v in [0, 1, 1, 0, 1] {
        assert_eq!(agent_step(&mut echo, Letter(v)), Letter(v));
    }

    let mut alt = TransducerPolicy::new(
        s.clone(),
        o.clone(),
        2,
        0,
        vec![Letter(0), Letter(0), Letter(1), Letter(1)],
        vec![1, 1, 0, 0],
    )
    .unwrap();
    let out: Vec<Letter> = [1, 0, 0, 1].iter().map(|&v| agent_step(&mut alt, Letter(v))).collect();
    assert_eq!(out, vec![Letter(0), Letter(1), Letter(0), Letter(1)]);
}

#[test]
fn constant_baseline_repeats() {
    let (s, o) = alphabets(2, 3);
    let mut a = make_baseline(BaselineKind::Constant(Letter(1)), s, o, 0).unwrap();
    assert!((0..50).all(|i| a.step(Letter(i % 2)) == Letter(1)));
    assert!(make_baseline(BaselineKind::Constant(Letter(3)), alphabets(2, 3).0, alphabets(2, 3).1, 0).is_err());
}

#[test]
fn random_baseline_is_balanced_and_seeded() {
    let (s, o) = alphabets(1, 2);
    let mut a = make_baseline(BaselineKind::Random, s.clone(), o.clone(), 17).unwrap();
    let draws: Vec<Letter> = (0..10_000).map(|_| a.step(Letter(0))).collect();
    let ones = draws.iter().filter(|l| l.0 == 1).count() as f64 / 1e4;
    assert!((0.45..=0.55).contains(&ones), "{ones}");
    a.reset();
    let again: Vec<Letter> = (0..10_000).map(|_| a.step(Letter(0))).collect();
    assert_eq!(draws, again);
}

#[test]
fn learner_masters_echo_reward_and_random_does_not() {
    let wf = builtin_world("echo-reward").unwrap();
    let (s, o) = (wf.world.sigma().clone(), wf.world.omega().clone());
    for seed in 0..5 {
        let mut l = make_baseline(BaselineKind::HistoryLearner(learner(&wf.meaning)), s.clone(), o.clone(), seed).unwrap();
        let life = run_life(&wf.world, &mut l, 5000, seed).unwrap();
        let tail = wf.meaning.value_of(&life.views[4900..]) as f64 / 100.0;
        assert!(tail >= 0.9, "learner seed {seed}: {tail}");

        let mut r = make_baseline(BaselineKind::Random, s.clone(), o.clone(), seed).unwrap();
        let life = run_life(&wf.world, &mut r, 5000, seed).unwrap();
        let tail = wf.meaning.value_of(&life.views[4900..]) as f64 / 100.0;
        assert!(tail <= 0.2, "random seed {seed}: {tail}");
    }
}

#[test]
fn baselines_are_reproducible() {
    let wf = builtin_world("echo-reward").unwrap();
    let (s, o) = (wf.world.sigma().clone(), wf.world.omega().clone());
    let kinds = [BaselineKind::Random, BaselineKind::Constant(Letter(0)), BaselineKind::HistoryLearner(learner(&wf.meaning))];
    for kind in kinds {
        let mut a = make_baseline(kind.clone(), s.clone(), o.clone(), 3).unwrap();
        let mut b = make_baseline(kind, s.clone(), o.clone(), 3).unwrap();
        let la = run_life(&wf.world, &mut a, 800, 1).unwrap();
        let lb = run_life(&wf.world, &mut b, 800, 1).unwrap();
        assert_eq!(la.actions, lb.actions);
        let again = run_life(&wf.world, &mut a, 800, 1).unwrap();
        assert_eq!(la.actions, again.actions);
    }
}

#[test]
fn policy_lives_do_not_depend_on_prior_use() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (s, o) = alphabets(2, 3);
    for _ in 0..100 {
        let world = random_world(&mut rng, &s, &o, 6);
        let fresh = random_policy(&mut rng, &s, &o, 3);
        let mut used = fresh.clone();
        for i in 0..37 {
            agent_step(&mut used, Letter(i % 2));
        }
        let a = run_life(&world, &mut fresh.clone(), 30, 0).unwrap();
        let b = run_life(&world, &mut used, 30, 0).unwrap();
        assert_eq!(a.views, b.views);
        assert_eq!(a.actions, b.actions);
    }
}
