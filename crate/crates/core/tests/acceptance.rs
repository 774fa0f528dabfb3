//! One PASS/FAIL line per acceptance criterion, written straight to stdout
//! so the lines show even when test output is captured.

mod common;

use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stepworld::agents::{enumerate_policies, make_baseline, policy_count, BaselineKind, LearnerParams};
use stepworld::worlds::max_mean_cycle_rates;
use stepworld::{
    builtin_world, builtin_worlds, crammer_demo, dovetail_search, evaluate_candidate, expand_life_tree, life_path,
    run_life, search_ai, worlds_indistinguishable, Letter, MeaningOfLife, Requirement, State, TestSuite,
    TestWorldSpec, WorldDef,
};

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn nine_to_one() -> Outcome {
    let (world, meaning) = tally_world();
    let spec = TestWorldSpec::new(
        "tally",
        Arc::new(world),
        meaning,
        1,
        100,
        Requirement::Ratio { good: 9, bad: 1 },
        0,
    )
    .map_err(|e| e.to_string())?;
    let a = evaluate_candidate(&scripted_policy(&spec.world, &tally_script(90, 10)), &spec).map_err(|e| e.to_string())?;
    let b = evaluate_candidate(&scripted_policy(&spec.world, &tally_script(89, 11)), &spec).map_err(|e| e.to_string())?;
    check((a.good, a.bad) == (90, 10) && (b.good, b.bad) == (89, 11), "scripts did not score as built")?;
    check(a.pass && !b.pass, format!("90/10 pass={} 89/11 pass={}", a.pass, b.pass))?;
    Ok("90/10 passes, 89/11 fails".into())
}

fn shortest_winner() -> Outcome {
    let spec = builtin_spec("echo-reward", 0, 50, Requirement::MinValue(50), 0);
    let (s, o) = (spec.world.sigma().clone(), spec.world.omega().clone());
    let suite = TestSuite::unbudgeted(vec![spec.clone()], 1_000_000).map_err(|e| e.to_string())?;
    let report = search_ai(&suite, 2).map_err(|e| e.to_string())?;
    let all: Vec<_> = enumerate_policies(s, o, 2).map_err(|e| e.to_string())?.collect();
    let one = all.iter().filter(|(c, _)| c.state_count == 1).count() as u64;
    let two = all.iter().filter(|(c, _)| c.state_count == 2).count() as u64;
    check(one == 4 && Some(two) == policy_count(2, 2, 2), format!("enumerated {one} + {two} policies"))?;
    let oracle = all.iter().find(|(_, p)| evaluate_candidate(p, &spec).is_ok_and(|e| e.pass)).map(|(c, _)| c.index);
    let got = report.winner.map(|w| w.index);
    check(oracle.is_some() && got == oracle, format!("search {got:?} vs exhaustive {oracle:?}"))?;
    Ok(format!("winner index {} over {} policies", got.unwrap(), all.len()))
}

fn dovetail_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut winners = 0;
    for i in 0..50 {
        let cap = rng.gen_range(50..2000);
        let suite = random_suite(&mut rng, cap);
        let slice = rng.gen_range(1..20);
        let a = search_ai(&suite, 2).map_err(|e| e.to_string())?;
        let b = dovetail_search(&suite, 2, slice).map_err(|e| e.to_string())?;
        check(a.winner == b.winner, format!("suite {i}: winners {:?} vs {:?}", a.winner, b.winner))?;
        check(a.render_table() == b.render_table(), format!("suite {i}: tables differ"))?;
        winners += a.winner.is_some() as usize;
    }
    Ok(format!("50 suites agree ({winners} with a winner)"))
}

fn tree_simulation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..100 {
        let m = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let (s, o) = alphabets(m, k);
        let world = random_world(&mut rng, &s, &o, 8);
        let mut policy = random_policy(&mut rng, &s, &o, 3);
        let depth = rng.gen_range(0..=8);
        let life = run_life(&world, &mut policy, depth + 1, 0).map_err(|e| e.to_string())?;
        let tree = expand_life_tree(&world, depth).map_err(|e| e.to_string())?;
        let path = life_path(&tree, &life.actions[..depth]).map_err(|e| e.to_string())?;
        check(path == life.views, format!("triple {i} disagrees"))?;
    }
    Ok("100 triples agree".into())
}

fn with_view(world: &WorldDef, at: State, view: Letter) -> WorldDef {
    let table = world
        .states()
        .map(|s| world.omega().letters().map(|a| world.successor(s, a).unwrap()).collect())
        .collect();
    let views = world.states().map(|s| if s == at { view } else { world.view(s) }).collect();
    WorldDef::deterministic(
        world.sigma().clone(),
        world.omega().clone(),
        world.states().map(|s| world.state_name(s).to_string()).collect(),
        world.start(),
        table,
        views,
    )
    .unwrap()
}

fn reachable(world: &WorldDef) -> Vec<State> {
    let mut seen = vec![world.start()];
    let mut i = 0;
    while i < seen.len() {
        for a in world.omega().letters() {
            let t = world.successor(seen[i], a).unwrap();
            if !seen.contains(&t) {
                seen.push(t);
            }
        }
        i += 1;
    }
    seen
}

fn indistinguishability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let (s, o) = alphabets(3, 2);
        let a = random_world(&mut rng, &s, &o, 8);
        let b = a.permuted(&random_permutation(&mut rng, a.state_count()));
        check(worlds_indistinguishable(&a, &b, None).unwrap(), format!("case {i}: renamed copy distinguished"))?;

        let r = reachable(&a);
        let at = r[rng.gen_range(0..r.len())];
        let view = Letter((a.view(at).0 + rng.gen_range(1..3)) % 3);
        let c = with_view(&a, at, view);
        let horizon = a.state_count() * c.state_count();
        check(!trees_equal_by_levels(&a, &c, horizon), format!("case {i}: oracle sees no difference"))?;
        check(!worlds_indistinguishable(&a, &c, None).unwrap(), format!("case {i}: changed view not distinguished"))?;
        check(
            !worlds_indistinguishable(&a, &c, Some(horizon)).unwrap(),
            format!("case {i}: not distinguished within {horizon}"),
        )?;
    }
    Ok("100 renamed copies equal, 100 altered copies distinguished".into())
}

fn fatal_rates() -> Outcome {
    let mut names = Vec::new();
    let mut refused = Vec::new();
    for (name, wf) in builtin_worlds() {
        if wf.world.state_count() > 6 {
            continue;
        }
        if !wf.world.is_deterministic() {
            refused.push(name);
            continue;
        }
        let got = max_mean_cycle_rates(&wf.world, &wf.meaning).map_err(|e| e.to_string())?;
        let want: Vec<Ratio<i64>> = brute_force_rates(&wf.world, &wf.meaning);
        check(got == want, format!("{name}: {got:?} vs {want:?}"))?;
        names.push(name);
    }
    Ok(format!("{} worlds exact ({}); stochastic, not analyzable: {}", names.len(), names.join(" "), refused.join(" ")))
}

fn life_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (s, _) = alphabets(5, 1);
    for i in 0..10_000 {
        let meaning = random_meaning(&mut rng, &s);
        let x: Vec<Letter> = (0..rng.gen_range(0..40)).map(|_| Letter(rng.gen_range(0..5))).collect();
        let y: Vec<Letter> = (0..rng.gen_range(0..40)).map(|_| Letter(rng.gen_range(0..5))).collect();
        let xy: Vec<Letter> = x.iter().chain(&y).copied().collect();
        check(meaning.value_of(&xy) == meaning.value_of(&x) + meaning.value_of(&y), format!("case {i}: additivity"))?;
        let mut shuffled = xy.clone();
        let p = random_permutation(&mut rng, shuffled.len());
        shuffled = p.iter().map(|&j| xy[j]).collect();
        check(meaning.value_of(&shuffled) == meaning.value_of(&xy), format!("case {i}: permutation"))?;
        let l = Letter(rng.gen_range(0..5));
        let both = |set: &std::collections::BTreeSet<Letter>| set.iter().copied().chain([l]).collect::<Vec<_>>();
        let without = |set: &std::collections::BTreeSet<Letter>| set.iter().copied().filter(|&m| m != l).collect::<Vec<_>>();
        let in_both = MeaningOfLife::new(s.clone(), both(meaning.good()), both(meaning.bad())).unwrap();
        let in_neither = MeaningOfLife::new(s.clone(), without(meaning.good()), without(meaning.bad())).unwrap();
        check(in_both.value_of(&xy) == in_neither.value_of(&xy), format!("case {i}: intersection"))?;
    }
    Ok("10^4 sequences".into())
}

fn crammer() -> Outcome {
    let nine = Requirement::Ratio { good: 9, bad: 1 };
    let suite = TestSuite::unbudgeted(vec![builtin_spec("period-2", 10, 100, nine, 0)], 1_000_000)
        .map_err(|e| e.to_string())?;
    let held = builtin_spec("period-3", 10, 100, nine, 0);
    let report = crammer_demo(&suite, &held, 2).map_err(|e| e.to_string())?;
    let (code, policy) = report.crammer.ok_or("no crammer found")?;
    let on_suite = evaluate_candidate(&policy, &suite.specs[0]).map_err(|e| e.to_string())?;
    let on_held = evaluate_candidate(&policy, &held).map_err(|e| e.to_string())?;
    check(on_suite.pass && !on_held.pass, "crammer does not behave as claimed")?;
    Ok(format!(
        "index {} scores {}:{} on period-2, {}:{} on period-3",
        code.index, on_suite.good, on_suite.bad, on_held.good, on_held.bad
    ))
}

fn tail_mean(kind: BaselineKind, seed: u64) -> f64 {
    let wf = builtin_world("echo-reward").unwrap();
    let mut agent = make_baseline(kind, wf.world.sigma().clone(), wf.world.omega().clone(), seed).unwrap();
    let life = run_life(&wf.world, &mut agent, 5000, seed).unwrap();
    wf.meaning.value_of(&life.views[4900..]) as f64 / 100.0
}

fn baseline_learning() -> Outcome {
    let meaning = builtin_world("echo-reward").unwrap().meaning;
    let params = LearnerParams { history: 1, epsilon: 0.3, alpha: 0.5, gamma: 0.5, decay_steps: Some(4000), meaning };
    let mut lines = Vec::new();
    for seed in 0..5 {
        let l = tail_mean(BaselineKind::HistoryLearner(params.clone()), seed);
        let r = tail_mean(BaselineKind::Random, seed);
        check(l >= 0.9 && r <= 0.2, format!("seed {seed}: learner {l:.2}, random {r:.2}"))?;
        lines.push(format!("{l:.2}/{r:.2}"));
    }
    Ok(format!("learner/random per seed: {}", lines.join(" ")))
}

fn reproducibility() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [&[&str]; 6] = [
        &["run-life", "--world", "worlds/two-door-bandit.world", "--agent", "learner", "--steps", "300", "--seed", "11"],
        &["search", "--suite", "suites/periods.suite", "--max-states", "1"],
        &["search", "--suite", "suites/period-2.suite", "--dovetail", "--slice", "5"],
        &["check-world", "--world", "worlds/gated-maze.world"],
        &["tree", "--world", "worlds/gated-maze.world", "--depth", "4"],
        &["bench", "--suite", "suites/echo.suite"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for n in 0..2 {
            let out = dir.path().join(format!("run{n}"));
            let o = Command::new(env!("CARGO_BIN_EXE_stepworld"))
                .args(args)
                .arg("--out")
                .arg(&out)
                .current_dir(&root)
                .output()
                .map_err(|e| e.to_string())?;
            let mut files: Vec<_> = std::fs::read_dir(dir.path())
                .unwrap()
                .map(|e| e.unwrap().path())
                .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with(&format!("run{n}")))
                .collect();
            files.sort();
            check(!files.is_empty(), format!("{}: wrote nothing", args[0]))?;
            let bytes: Vec<Vec<u8>> = files.iter().map(|f| std::fs::read(f).unwrap()).collect();
            outputs.push((o.status.code(), o.stdout, bytes));
        }
        check(outputs[0] == outputs[1], format!("{} {:?} differs between runs", args[0], &args[1..]))?;
    }
    Ok("run-life, search (both modes), check-world, tree, bench byte-identical".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("9:1 protocol fidelity", 1, nine_to_one),
        ("shortest-winner oracle", 10, shortest_winner),
        ("dovetail equivalence", 60, dovetail_equivalence),
        ("tree/simulation agreement", 5, tree_simulation),
        ("indistinguishability soundness", 10, indistinguishability),
        ("fatal-error rates vs brute force", 30, fatal_rates),
        ("life-value algebra", 5, life_algebra),
        ("crammer demonstration", 30, crammer),
        ("baseline learning", 10, baseline_learning),
        ("CLI reproducibility", 30, reproducibility),
    ];
    let mut failed = Vec::new();
    for (i, (name, bound, run)) in criteria.into_iter().enumerate() {
        let clock = Instant::now();
        let result = run();
        let elapsed = clock.elapsed();
        let result = match result {
            Ok(detail) if elapsed > Duration::from_secs(bound) => Err(format!("over time bound: {detail}")),
            other => other,
        };
        let (verdict, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        let line = format!("criterion {:>2} {verdict} {name} [{:.3}s / {bound}s] {detail}\n", i + 1, elapsed.as_secs_f64());
        let _ = std::io::stdout().lock().write_all(line.as_bytes());
        if result.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
