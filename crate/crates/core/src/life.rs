//! Running an agent in a world: view, act, transition, repeat.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::agents::Agent;
use crate::alphabet::Letter;
use crate::error::{Error, Result};
use crate::world::{State, WorldDef};

/// Randomness threaded through stochastic world transitions.
pub type WorldRng = ChaCha8Rng;

/// A life from birth to step `t`: `views[i]` was seen in `states[i]`, then
/// `actions[i]` was emitted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LifeRecord {
    pub actions: Vec<Letter>,
    pub views: Vec<Letter>,
    pub states: Option<Vec<State>>,
}

impl LifeRecord {
    pub fn len(&self) -> usize {
        self.views.len()
    }

    pub fn is_empty(&self) -> bool {
        self.views.is_empty()
    }

    /// Final step index; `None` for an empty record.
    pub fn t(&self) -> Option<usize> {
        self.views.len().checked_sub(1)
    }
}

/// Checks that an agent speaks the world's alphabets.
pub fn check_alphabets<A: Agent + ?Sized>(world: &WorldDef, agent: &A) -> Result<()> {
    if !agent.sigma().same_letters(world.sigma()) {
        return Err(Error::AlphabetMismatch(format!(
            "agent sigma [{}] vs world sigma [{}]",
            agent.sigma(),
            world.sigma()
        )));
    }
    if !agent.omega().same_letters(world.omega()) {
        return Err(Error::AlphabetMismatch(format!(
            "agent omega [{}] vs world omega [{}]",
            agent.omega(),
            world.omega()
        )));
    }
    Ok(())
}

/// A life in progress that can be advanced one step at a time.
pub struct Life<'w, A> {
    world: &'w WorldDef,
    agent: A,
    rng: WorldRng,
    state: State,
    step: u64,
}

/// What happened during one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub state: State,
    pub view: Letter,
    pub action: Letter,
}

impl<'w, A: Agent> Life<'w, A> {
    /// Resets the agent and places the world in its start state.
    pub fn begin(world: &'w WorldDef, mut agent: A, seed: u64) -> Result<Self> {
        check_alphabets(world, &agent)?;
        agent.reset();
        Ok(Life {
            world,
            agent,
            rng: WorldRng::seed_from_u64(seed),
            state: world.start(),
            step: 0,
        })
    }

    pub fn step(&mut self) -> Step {
        let state = self.state;
        let view = self.world.view(state);
        let action = self.agent.step(view);
        self.state = self.world.step(state, action, &mut self.rng);
        self.step += 1;
        Step { state, view, action }
    }

    /// Number of steps taken so far.
    pub fn age(&self) -> u64 {
        self.step
    }

    pub fn state(&self) -> State {
        self.state
    }

    pub fn into_agent(self) -> A {
        self.agent
    }
}

/// Lives `steps` steps from the world's start state and records everything.
pub fn run_life<A: Agent + ?Sized>(
    world: &WorldDef,
    agent: &mut A,
    steps: usize,
    seed: u64,
) -> Result<LifeRecord> {
    if steps == 0 {
        return Err(Error::InvalidConfig("a life needs at least one step".into()));
    }
    let mut life = Life::begin(world, agent, seed)?;
    let mut record = LifeRecord {
        actions: Vec::with_capacity(steps),
        views: Vec::with_capacity(steps),
        states: Some(Vec::with_capacity(steps)),
    };
    for _ in 0..steps {
        let step = life.step();
        record.views.push(step.view);
        record.actions.push(step.action);
        if let Some(states) = record.states.as_mut() {
            states.push(step.state);
        }
    }
    Ok(record)
}
