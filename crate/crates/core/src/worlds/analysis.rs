//! Fatal-error analysis: the best long-run value per step reachable from
//! each state, computed exactly as a maximum mean cycle.
//!
//! Each `(state, action)` pair is an edge `s -> World(s, a)` weighted by the
//! value of the successor's view. A state's rate is the largest mean weight
//! of any cycle reachable from it. Rates are found per strongly connected
//! component with Karp's recurrence
//!
//! ```text
//! D[0][src] = 0,  D[j][v] = max over edges u->v of D[j-1][u] + w(u, v)
//! rate = max_v min_{j < n} (D[n][v] - D[j][v]) / (n - j)
//! ```
//!
//! and propagated backwards through the component DAG.

use std::fmt::Write;

use num_rational::Ratio;

use crate::error::Result;
use crate::meaning::MeaningOfLife;
use crate::world::{State, WorldDef};

/// Exact mean value per step.
pub type Rate = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Good,
    HasFatalErrors,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodWorldReport {
    /// Optimal asymptotic rate from each state, indexed by state.
    pub rates: Vec<Rate>,
    /// States whose rate is strictly below the start state's.
    pub fatal_states: Vec<State>,
    /// The fatal states some action sequence reaches from the start.
    pub reachable_fatal: Vec<State>,
    pub verdict: Verdict,
}

impl GoodWorldReport {
    pub fn render(&self, world: &WorldDef) -> String {
        let mut out = String::from("state,rate,fatal,reachable\n");
        let reachable = reachable_from(world, world.start());
        for s in world.states() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                world.state_name(s),
                self.rates[s.0],
                self.fatal_states.contains(&s),
                reachable[s.0]
            );
        }
        let names = |v: &[State]| v.iter().map(|s| world.state_name(*s)).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "# fatal_states: {}", names(&self.fatal_states));
        let _ = writeln!(out, "# reachable_fatal: {}", names(&self.reachable_fatal));
        let _ = writeln!(
            out,
            "# verdict: {}",
            match self.verdict {
                Verdict::Good => "good",
                Verdict::HasFatalErrors => "has_fatal_errors",
            }
        );
        out
    }
}

fn successors(world: &WorldDef, s: State) -> impl Iterator<Item = State> + '_ {
    world.omega().letters().map(move |a| world.successor(s, a).expect("deterministic"))
}

fn reachable_from(world: &WorldDef, from: State) -> Vec<bool> {
    let mut seen = vec![false; world.state_count()];
    let mut stack = vec![from];
    seen[from.0] = true;
    while let Some(s) = stack.pop() {
        for t in successors(world, s) {
            if !seen[t.0] {
                seen[t.0] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// Strongly connected components in reverse topological order (sinks
/// first), by iterative Tarjan.
fn components(world: &WorldDef) -> Vec<Vec<State>> {
    let n = world.state_count();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut edge)) = work.last_mut() {
            let k = world.omega().len();
            if *edge < k {
                let w = world
                    .successor(State(v), crate::alphabet::Letter(*edge))
                    .expect("deterministic")
                    .0;
                *edge += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("nonempty");
                        on_stack[w] = false;
                        comp.push(State(w));
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Karp's maximum mean cycle restricted to the edges inside `comp`.
/// `None` when the component has no internal edge.
fn component_rate(world: &WorldDef, meaning: &MeaningOfLife, comp: &[State], member: &[Option<usize>]) -> Option<Rate> {
    let n = comp.len();
    let local = |s: State| member[s.0];
    let mut edges = Vec::new();
    for (i, &s) in comp.iter().enumerate() {
        for t in successors(world, s) {
            if let Some(j) = local(t) {
                edges.push((i, j, meaning.letter_value(world.view(t))));
            }
        }
    }
    if edges.is_empty() {
        return None;
    }
    let mut dist: Vec<Vec<Option<i64>>> = vec![vec![None; n]; n + 1];
    dist[0][0] = Some(0);
    for step in 1..=n {
        for &(u, v, w) in &edges {
            if let Some(du) = dist[step - 1][u] {
                let cand = du + w;
                if dist[step][v].is_none_or(|dv| cand > dv) {
                    dist[step][v] = Some(cand);
                }
            }
        }
    }
    (0..n)
        .filter_map(|v| {
            let dn = dist[n][v]?;
            (0..n)
                .filter_map(|j| dist[j][v].map(|dj| Rate::new(dn - dj, (n - j) as i64)))
                .min()
        })
        .max()
}

/// Maximum mean cycle value reachable from each state.
pub fn max_mean_cycle_rates(world: &WorldDef, meaning: &MeaningOfLife) -> Result<Vec<Rate>> {
    world.require_deterministic("fatal-error analysis")?;
    let comps = components(world);
    let mut comp_of = vec![0; world.state_count()];
    for (c, comp) in comps.iter().enumerate() {
        for s in comp {
            comp_of[s.0] = c;
        }
    }
    let mut member = vec![None; world.state_count()];
    let mut best: Vec<Option<Rate>> = vec![None; comps.len()];
    // sinks come first, so every successor component is final when visited
    for (c, comp) in comps.iter().enumerate() {
        for (i, s) in comp.iter().enumerate() {
            member[s.0] = Some(i);
        }
        let mut rate = component_rate(world, meaning, comp, &member);
        for s in comp {
            member[s.0] = None;
            for t in successors(world, *s) {
                let d = comp_of[t.0];
                if d != c {
                    rate = rate.max(best[d]);
                }
            }
        }
        best[c] = rate;
    }
    Ok(world
        .states()
        .map(|s| best[comp_of[s.0]].expect("every state of a total finite world reaches a cycle"))
        .collect())
}

/// Checks the world for fatal errors: states from which the best long-run
/// rate is strictly worse than from the start.
pub fn analyze_good_world(world: &WorldDef, meaning: &MeaningOfLife) -> Result<GoodWorldReport> {
    let rates = max_mean_cycle_rates(world, meaning)?;
    let baseline = rates[world.start().0];
    let fatal_states: Vec<State> = world.states().filter(|s| rates[s.0] < baseline).collect();
    let reachable = reachable_from(world, world.start());
    let reachable_fatal: Vec<State> = fatal_states.iter().copied().filter(|s| reachable[s.0]).collect();
    let verdict = if reachable_fatal.is_empty() { Verdict::Good } else { Verdict::HasFatalErrors };
    Ok(GoodWorldReport { rates, fatal_states, reachable_fatal, verdict })
}
