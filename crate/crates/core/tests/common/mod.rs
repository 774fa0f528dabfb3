//! Random worlds and policies, plus brute-force oracles that do not share
//! code with the implementations they check.
#![allow(dead_code)]

use std::sync::Arc;

use num_rational::Ratio;
use rand::Rng;
use stepworld::agents::TransducerPolicy;
use stepworld::{Alphabet, Letter, MeaningOfLife, Requirement, Role, State, TestSuite, TestWorldSpec, WorldDef};

pub fn alphabets(m: usize, k: usize) -> (Arc<Alphabet>, Arc<Alphabet>) {
    (
        Arc::new(Alphabet::new(Role::Input, (0..m).map(|i| format!("v{i}"))).unwrap()),
        Arc::new(Alphabet::new(Role::Output, (0..k).map(|i| format!("a{i}"))).unwrap()),
    )
}

pub fn random_world<R: Rng>(rng: &mut R, sigma: &Arc<Alphabet>, omega: &Arc<Alphabet>, max_states: usize) -> WorldDef {
    let n = rng.gen_range(1..=max_states);
    let table = (0..n)
        .map(|_| (0..omega.len()).map(|_| State(rng.gen_range(0..n))).collect())
        .collect();
    let views = (0..n).map(|_| Letter(rng.gen_range(0..sigma.len()))).collect();
    WorldDef::deterministic(
        sigma.clone(),
        omega.clone(),
        (0..n).map(|i| format!("s{i}")).collect(),
        State(rng.gen_range(0..n)),
        table,
        views,
    )
    .unwrap()
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

pub fn random_policy<R: Rng>(rng: &mut R, sigma: &Arc<Alphabet>, omega: &Arc<Alphabet>, max_states: usize) -> TransducerPolicy {
    let s = rng.gen_range(1..=max_states);
    let cells = s * sigma.len();
    TransducerPolicy::new(
        sigma.clone(),
        omega.clone(),
        s,
        rng.gen_range(0..s),
        (0..cells).map(|_| Letter(rng.gen_range(0..omega.len()))).collect(),
        (0..cells).map(|_| rng.gen_range(0..s)).collect(),
    )
    .unwrap()
}

pub fn random_meaning<R: Rng>(rng: &mut R, sigma: &Arc<Alphabet>) -> MeaningOfLife {
    let good: Vec<Letter> = sigma.letters().filter(|_| rng.gen_bool(0.4)).collect();
    let bad: Vec<Letter> = sigma.letters().filter(|_| rng.gen_bool(0.4)).collect();
    MeaningOfLife::new(sigma.clone(), good, bad).unwrap()
}

/// Per-state best mean cycle value, by enumerating every simple cycle of
/// the successor graph and taking the best one reachable from each state.
pub fn brute_force_rates(world: &WorldDef, meaning: &MeaningOfLife) -> Vec<Ratio<i64>> {
    let n = world.state_count();
    let mut adj = vec![vec![false; n]; n];
    for s in 0..n {
        for a in world.omega().letters() {
            adj[s][world.successor(State(s), a).unwrap().0] = true;
        }
    }
    let weight = |t: usize| meaning.letter_value(world.view(State(t)));

    // best[v] = best mean of a simple cycle through v
    let mut best: Vec<Option<Ratio<i64>>> = vec![None; n];
    fn extend(
        start: usize,
        path: &mut Vec<usize>,
        sum: i64,
        adj: &[Vec<bool>],
        weight: &dyn Fn(usize) -> i64,
        best: &mut [Option<Ratio<i64>>],
    ) {
        let last = *path.last().unwrap();
        for next in 0..adj.len() {
            if !adj[last][next] {
                continue;
            }
            if next == start {
                let mean = Ratio::new(sum + weight(start), path.len() as i64);
                for &v in path.iter() {
                    if best[v].is_none_or(|b| mean > b) {
                        best[v] = Some(mean);
                    }
                }
            } else if next > start && !path.contains(&next) {
                path.push(next);
                extend(start, path, sum + weight(next), adj, weight, best);
                path.pop();
            }
        }
    }
    for start in 0..n {
        extend(start, &mut vec![start], 0, &adj, &weight, &mut best);
    }

    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            let mut top = None;
            while let Some(u) = stack.pop() {
                if let Some(b) = best[u] {
                    if top.is_none_or(|t| b > t) {
                        top = Some(b);
                    }
                }
                for v in 0..n {
                    if adj[u][v] && !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            top.expect("some cycle is reachable")
        })
        .collect()
}

/// Node-for-node comparison of fully materialized life trees.
pub fn trees_equal(a: &WorldDef, b: &WorldDef, depth: usize) -> bool {
    // walk every action sequence explicitly
    fn walk(a: &WorldDef, sa: State, b: &WorldDef, sb: State, left: usize) -> bool {
        if a.view(sa) != b.view(sb) {
            return false;
        }
        left == 0
            || a.omega().letters().all(|act| {
                walk(a, a.successor(sa, act).unwrap(), b, b.successor(sb, act).unwrap(), left - 1)
            })
    }
    walk(a, a.start(), b, b.start(), depth)
}

/// Same comparison as [`trees_equal`], level by level over the set of state
/// pairs sitting at each depth, so deep horizons stay cheap.
pub fn trees_equal_by_levels(a: &WorldDef, b: &WorldDef, depth: usize) -> bool {
    let mut level = std::collections::BTreeSet::from([(a.start(), b.start())]);
    for d in 0..=depth {
        if level.iter().any(|&(x, y)| a.view(x) != b.view(y)) {
            return false;
        }
        if d == depth {
            break;
        }
        level = level
            .iter()
            .flat_map(|&(x, y)| {
                a.omega()
                    .letters()
                    .map(move |act| (a.successor(x, act).unwrap(), b.successor(y, act).unwrap()))
            })
            .collect();
    }
    true
}

/// Σ = {good, bad}, Ω = {g, b}: every action lands in the state whose view
/// names it, so a policy's score is exactly its own output tally.
pub fn tally_world() -> (WorldDef, MeaningOfLife) {
    let sigma = Arc::new(Alphabet::new(Role::Input, ["good", "bad"]).unwrap());
    let omega = Arc::new(Alphabet::new(Role::Output, ["g", "b"]).unwrap());
    let world = WorldDef::deterministic(
        sigma.clone(),
        omega,
        vec!["G".into(), "B".into()],
        State(0),
        vec![vec![State(0), State(1)], vec![State(0), State(1)]],
        vec![Letter(0), Letter(1)],
    )
    .unwrap();
    let meaning = MeaningOfLife::from_names(sigma, &["good"], &["bad"]).unwrap();
    (world, meaning)
}

/// A cyclic transducer that ignores its input and plays `script` forever.
pub fn scripted_policy(world: &WorldDef, script: &[Letter]) -> TransducerPolicy {
    let n = script.len();
    let m = world.sigma().len();
    TransducerPolicy::new(
        world.sigma().clone(),
        world.omega().clone(),
        n,
        0,
        script.iter().flat_map(|&l| std::iter::repeat_n(l, m)).collect(),
        (0..n).flat_map(|q| std::iter::repeat_n((q + 1) % n, m)).collect(),
    )
    .unwrap()
}

/// `good` g's followed by `bad` b's.
pub fn tally_script(good: usize, bad: usize) -> Vec<Letter> {
    std::iter::repeat_n(Letter(0), good).chain(std::iter::repeat_n(Letter(1), bad)).collect()
}

pub fn builtin_spec(name: &str, train: u64, eval: u64, requirement: Requirement, seed: u64) -> TestWorldSpec {
    let wf = stepworld::builtin_world(name).unwrap();
    TestWorldSpec::new(name, Arc::new(wf.world), wf.meaning, train, eval, requirement, seed).unwrap()
}

/// One to three random worlds over shared two-letter alphabets, with
/// random windows, requirements and sometimes a tight step budget.
pub fn random_suite<R: Rng>(rng: &mut R, policy_cap: u64) -> TestSuite {
    let (sigma, omega) = alphabets(2, 2);
    let n = rng.gen_range(1..=3);
    let specs: Vec<TestWorldSpec> = (0..n)
        .map(|i| {
            let world = random_world(rng, &sigma, &omega, 4);
            let meaning = MeaningOfLife::new(sigma.clone(), [Letter(1)], [Letter(0)]).unwrap();
            let eval = rng.gen_range(1..=12u64);
            let requirement = if rng.gen_bool(0.3) {
                Requirement::Ratio { good: rng.gen_range(1..=9), bad: rng.gen_range(0..=2) }
            } else {
                Requirement::MinValue(rng.gen_range(-(eval as i64)..=eval as i64))
            };
            TestWorldSpec::new(format!("w{i}"), Arc::new(world), meaning, rng.gen_range(0..=6), eval, requirement, rng.gen())
                .unwrap()
        })
        .collect();
    let total: u64 = specs.iter().map(TestWorldSpec::total_steps).sum();
    let budget = if rng.gen_bool(0.25) { rng.gen_range(1..=total) } else { total };
    TestSuite::new(specs, budget, policy_cap).unwrap()
}
