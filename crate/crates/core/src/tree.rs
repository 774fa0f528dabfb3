//! Trees of obtainable states and trees of life, materialized to a bounded
//! depth, and indistinguishability of worlds from the agent's point of view.
//!
//! Trees are stored in level order: the root is node 0 and the children of
//! node `i` are `i*k + 1 ..= i*k + k`, child `j` following action `Ω[j]`.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write;

use crate::alphabet::Letter;
use crate::error::{Error, Result};
use crate::world::{State, WorldDef};

/// Default cap on materialized tree size.
pub const DEFAULT_NODE_CAP: u64 = 1 << 22;

/// `(k^(depth+1) - 1) / (k - 1)` for `k > 1`, `depth + 1` for `k = 1`.
pub fn node_count(k: usize, depth: usize) -> Option<u64> {
    if k == 1 {
        return (depth as u64).checked_add(1);
    }
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for d in 0..=depth {
        total = total.checked_add(level)?;
        if d < depth {
            level = level.checked_mul(k as u64)?;
        }
    }
    Some(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree<T> {
    depth: usize,
    k: usize,
    nodes: Vec<T>,
}

/// Tree of obtainable states.
pub type StateTree = Tree<State>;
/// Tree of life: the state tree seen through `View`.
pub type LifeTree = Tree<Letter>;

impl<T: Copy> Tree<T> {
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Branching factor, `|Ω|`.
    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn root(&self) -> T {
        self.nodes[0]
    }

    pub fn child(&self, node: usize, action: Letter) -> usize {
        node * self.k + 1 + action.0
    }

    /// Nodes at distance `d` from the root, left to right.
    pub fn level(&self, d: usize) -> &[T] {
        assert!(d <= self.depth, "level {d} below depth {}", self.depth);
        let start = if d == 0 { 0 } else { node_count(self.k, d - 1).expect("fits") as usize };
        let width = self.k.pow(d as u32);
        &self.nodes[start..start + width]
    }

    /// Values along the path chosen by `actions`, root first.
    pub fn path(&self, actions: &[Letter]) -> Result<Vec<T>> {
        if actions.len() > self.depth {
            return Err(Error::OutOfRange(format!(
                "path of {} actions exceeds tree depth {}",
                actions.len(),
                self.depth
            )));
        }
        let mut node = 0;
        let mut out = Vec::with_capacity(actions.len() + 1);
        out.push(self.nodes[0]);
        for &a in actions {
            if a.0 >= self.k {
                return Err(Error::OutOfRange(format!("action {} with {} branches", a.0, self.k)));
            }
            node = self.child(node, a);
            out.push(self.nodes[node]);
        }
        Ok(out)
    }

    /// One line per node in level order: the action path (`/` for the root,
    /// `/a/b` for the node reached by actions `a` then `b`), a space, then
    /// the node's label.
    fn dump_with(&self, action_name: impl Fn(usize) -> String, label: impl Fn(T) -> String) -> String {
        let mut out = String::new();
        let mut paths: Vec<String> = vec![String::new()];
        for (i, node) in self.nodes.iter().enumerate() {
            let path = if i == 0 { "/" } else { paths[i].as_str() };
            let _ = writeln!(out, "{path} {}", label(*node));
            if i * self.k + 1 < self.nodes.len() {
                for j in 0..self.k {
                    let p = format!("{}/{}", paths[i], action_name(j));
                    paths.push(p);
                }
            }
        }
        out
    }
}

impl StateTree {
    pub fn dump(&self, world: &WorldDef) -> String {
        self.dump_with(|j| world.omega().name(Letter(j)).to_string(), |s| world.state_name(s).to_string())
    }
}

impl LifeTree {
    pub fn dump(&self, world: &WorldDef) -> String {
        self.dump_with(|j| world.omega().name(Letter(j)).to_string(), |l| world.sigma().name(l).to_string())
    }
}

fn check_size(world: &WorldDef, depth: usize, cap: u64) -> Result<usize> {
    let k = world.omega().len();
    let needed = node_count(k, depth);
    match needed {
        Some(n) if n <= cap => Ok(n as usize),
        _ => Err(Error::ResourceLimit {
            what: "tree nodes",
            needed: needed.map_or(u128::MAX, u128::from),
            cap: cap.into(),
        }),
    }
}

pub fn expand_state_tree(world: &WorldDef, depth: usize) -> Result<StateTree> {
    expand_state_tree_capped(world, depth, DEFAULT_NODE_CAP)
}

/// Expands every action sequence up to `depth` steps from the start state.
pub fn expand_state_tree_capped(world: &WorldDef, depth: usize, cap: u64) -> Result<StateTree> {
    world.require_deterministic("tree expansion")?;
    let total = check_size(world, depth, cap)?;
    let k = world.omega().len();
    let mut nodes = Vec::with_capacity(total);
    nodes.push(world.start());
    let mut i = 0;
    while nodes.len() < total {
        let s = nodes[i];
        for a in world.omega().letters() {
            nodes.push(world.successor(s, a).expect("deterministic"));
        }
        i += 1;
    }
    Ok(Tree { depth, k, nodes })
}

pub fn expand_life_tree(world: &WorldDef, depth: usize) -> Result<LifeTree> {
    expand_life_tree_capped(world, depth, DEFAULT_NODE_CAP)
}

pub fn expand_life_tree_capped(world: &WorldDef, depth: usize, cap: u64) -> Result<LifeTree> {
    let states = expand_state_tree_capped(world, depth, cap)?;
    Ok(Tree {
        depth,
        k: states.k,
        nodes: states.nodes.iter().map(|&s| world.view(s)).collect(),
    })
}

/// The views seen along `actions`, starting with the root's.
pub fn life_path(tree: &LifeTree, actions: &[Letter]) -> Result<Vec<Letter>> {
    tree.path(actions)
}

/// Whether the two worlds have identical trees of life down to `depth`
/// (`None` for the whole infinite tree).
///
/// Walks pairs of states in lockstep, visiting each pair once at its
/// shallowest depth, so the cost is `O(|S_a|·|S_b|·k)` whatever the depth.
pub fn worlds_indistinguishable(a: &WorldDef, b: &WorldDef, depth: Option<usize>) -> Result<bool> {
    if !a.sigma().same_letters(b.sigma()) || !a.omega().same_letters(b.omega()) {
        return Err(Error::AlphabetMismatch("worlds must share sigma and omega".into()));
    }
    a.require_deterministic("indistinguishability")?;
    b.require_deterministic("indistinguishability")?;
    Ok(states_indistinguishable(a, a.start(), b, b.start(), depth))
}

pub(crate) fn states_indistinguishable(
    a: &WorldDef,
    sa: State,
    b: &WorldDef,
    sb: State,
    depth: Option<usize>,
) -> bool {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((sa, sb));
    queue.push_back((sa, sb, 0usize));
    while let Some((x, y, d)) = queue.pop_front() {
        if a.view(x) != b.view(y) {
            return false;
        }
        if depth.is_some_and(|max| d >= max) {
            continue;
        }
        for act in a.omega().letters() {
            let next = (a.successor(x, act).expect("deterministic"), b.successor(y, act).expect("deterministic"));
            if seen.insert(next) {
                queue.push_back((next.0, next.1, d + 1));
            }
        }
    }
    true
}
