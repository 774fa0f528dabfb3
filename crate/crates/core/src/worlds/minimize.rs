//! State-count complexity proxy: merge states the agent can never tell
//! apart.

use crate::error::Result;
use crate::tree::states_indistinguishable;
use crate::world::{State, WorldDef};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityReport {
    pub states: usize,
    pub minimized_states: usize,
}

/// Class of each state: states share a class iff the worlds started from
/// them have identical trees of life. Classes are numbered by first member.
fn classes(world: &WorldDef) -> Vec<usize> {
    let mut reps: Vec<State> = Vec::new();
    let mut class = Vec::with_capacity(world.state_count());
    for s in world.states() {
        let found = reps
            .iter()
            .position(|&r| states_indistinguishable(world, r, world, s, None));
        class.push(found.unwrap_or_else(|| {
            reps.push(s);
            reps.len() - 1
        }));
    }
    class
}

/// The quotient world with one state per indistinguishability class. Each
/// class keeps its first member's name.
pub fn minimize(world: &WorldDef) -> Result<WorldDef> {
    world.require_deterministic("minimization")?;
    let class = classes(world);
    let count = class.iter().max().map_or(0, |m| m + 1);
    let mut reps = vec![None; count];
    for s in world.states() {
        reps[class[s.0]].get_or_insert(s);
    }
    let reps: Vec<State> = reps.into_iter().map(|r| r.expect("nonempty class")).collect();
    let table = reps
        .iter()
        .map(|&r| {
            world
                .omega()
                .letters()
                .map(|a| State(class[world.successor(r, a).expect("deterministic").0]))
                .collect()
        })
        .collect();
    WorldDef::deterministic(
        world.sigma().clone(),
        world.omega().clone(),
        reps.iter().map(|&r| world.state_name(r).to_string()).collect(),
        State(class[world.start().0]),
        table,
        reps.iter().map(|&r| world.view(r)).collect(),
    )
}

pub fn complexity_proxy(world: &WorldDef) -> Result<ComplexityReport> {
    world.require_deterministic("complexity proxy")?;
    let minimized_states = classes(world).into_iter().max().map_or(0, |m| m + 1);
    Ok(ComplexityReport { states: world.state_count(), minimized_states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::worlds_indistinguishable;
    use crate::worlds::{builtin_world, parse_world};

    #[test]
    fn duplicated_state_merges() {
        // echo-reward with "hit" duplicated as "hit2"
        let text = "sigma 0 1\nomega 0 1\ngood 1\nbad 0\nstart hit\n\
                    state hit view 1\nstate miss view 0\nstate hit2 view 1\n\
                    on hit 0 -> miss\non hit 1 -> hit2\non miss 0 -> hit2\non miss 1 -> miss\n\
                    on hit2 0 -> miss\non hit2 1 -> hit\n";
        let wf = parse_world(text).unwrap();
        let r = complexity_proxy(&wf.world).unwrap();
        assert_eq!(r, ComplexityReport { states: 3, minimized_states: 2 });
        let min = minimize(&wf.world).unwrap();
        assert_eq!(min.state_count(), 2);
        assert!(worlds_indistinguishable(&wf.world, &min, None).unwrap());
    }

    #[test]
    fn minimal_world_is_unchanged() {
        let echo = builtin_world("echo-reward").unwrap();
        assert_eq!(
            complexity_proxy(&echo.world).unwrap(),
            ComplexityReport { states: 2, minimized_states: 2 }
        );
    }

    #[test]
    fn maze_variants() {
        // goal and pit views are unique; start, hall and gate differ by what
        // their moves lead to
        let maze = builtin_world("gated-maze").unwrap();
        assert_eq!(complexity_proxy(&maze.world).unwrap().minimized_states, 5);
    }
}
