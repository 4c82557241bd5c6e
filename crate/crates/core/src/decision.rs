//! Sources of the random choices made by traceback and the GA.
//!
//! Production code draws from a seeded ChaCha stream; tests replay a fixed
//! script so that individual choices can be pinned.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub trait DecisionSource {
    /// Uniform index in `0..bound`. `bound` must be positive.
    fn index(&mut self, bound: usize) -> usize;

    fn coin(&mut self) -> bool;

    /// Uniform real in `[0, 1]`.
    fn unit(&mut self) -> f64;
}

/// Uniform element of `items`, or `None` when empty.
pub fn choose<'a, T>(ds: &mut dyn DecisionSource, items: &'a [T]) -> Option<&'a T> {
    if items.is_empty() {
        None
    } else {
        Some(&items[ds.index(items.len())])
    }
}

#[derive(Clone, Debug)]
pub struct RngSource(ChaCha8Rng);

impl RngSource {
    pub fn seeded(seed: u64) -> Self {
        RngSource(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.0
    }
}

impl DecisionSource for RngSource {
    fn index(&mut self, bound: usize) -> usize {
        self.0.gen_range(0..bound)
    }

    fn coin(&mut self) -> bool {
        self.0.gen_bool(0.5)
    }

    fn unit(&mut self) -> f64 {
        self.0.gen::<f64>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decision {
    Index(usize),
    Coin(bool),
    Unit(f64),
}

/// Replays a fixed list of decisions; panics if the caller asks for a
/// decision of a different kind or runs past the end of the script.
#[derive(Clone, Debug, Default)]
pub struct ScriptedSource {
    script: VecDeque<Decision>,
}

impl ScriptedSource {
    pub fn new(script: impl IntoIterator<Item = Decision>) -> Self {
        ScriptedSource {
            script: script.into_iter().collect(),
        }
    }

    pub fn remaining(&self) -> usize {
        self.script.len()
    }

    fn next(&mut self) -> Decision {
        self.script.pop_front().expect("decision script exhausted")
    }
}

impl DecisionSource for ScriptedSource {
    fn index(&mut self, bound: usize) -> usize {
        match self.next() {
            Decision::Index(i) => {
                assert!(i < bound, "scripted index {i} out of bound {bound}");
                i
            }
            other => panic!("expected an index decision, script has {other:?}"),
        }
    }

    fn coin(&mut self) -> bool {
        match self.next() {
            Decision::Coin(b) => b,
            other => panic!("expected a coin decision, script has {other:?}"),
        }
    }

    fn unit(&mut self) -> f64 {
        match self.next() {
            Decision::Unit(r) => r,
            other => panic!("expected a unit decision, script has {other:?}"),
        }
    }
}
