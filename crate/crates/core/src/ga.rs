//! The genetic algorithm: selection, reproduction operators and the run loop.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::dcsp::{Chromosome, DcspInstance, Side};
use crate::decision::{choose, DecisionSource, RngSource};
use crate::error::{Error, Result};
use crate::traceback::{evaluate, Direction, Recommendation};
use crate::word::{Letter, Word};

const REDRAW_LIMIT: usize = 16;

/// Population size and per-generation child counts for crossover,
/// substitution, deletion, insertion, selection and random admission.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ParameterSet {
    pop: usize,
    counts: [usize; 6],
}

impl ParameterSet {
    pub fn new(pop: usize, counts: [usize; 6]) -> Result<Self> {
        let total: usize = counts.iter().sum();
        if total != pop {
            return Err(Error::InvalidParams(format!(
                "child counts sum to {total}, population size is {pop}"
            )));
        }
        if pop < 2 {
            return Err(Error::InvalidParams("population size must be at least 2".into()));
        }
        if counts[4] == 0 {
            return Err(Error::InvalidParams(
                "at least one selection slot is required to keep the elite".into(),
            ));
        }
        if counts[0] > 0 && pop < 3 {
            return Err(Error::InvalidParams(
                "crossover needs a population of at least 3 for tournaments".into(),
            ));
        }
        Ok(ParameterSet { pop, counts })
    }

    /// Counts given in order; the population size is their sum.
    pub fn from_counts(counts: [usize; 6]) -> Result<Self> {
        Self::new(counts.iter().sum(), counts)
    }

    pub fn pop(&self) -> usize {
        self.pop
    }

    pub fn counts(&self) -> [usize; 6] {
        self.counts
    }

    pub fn crossovers(&self) -> usize {
        self.counts[0]
    }
    pub fn substitutions(&self) -> usize {
        self.counts[1]
    }
    pub fn deletions(&self) -> usize {
        self.counts[2]
    }
    pub fn insertions(&self) -> usize {
        self.counts[3]
    }
    pub fn selections(&self) -> usize {
        self.counts[4]
    }
    pub fn randoms(&self) -> usize {
        self.counts[5]
    }
}

impl Default for ParameterSet {
    fn default() -> Self {
        ParameterSet {
            pop: 200,
            counts: [5, 33, 4, 128, 30, 0],
        }
    }
}

impl FromStr for ParameterSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidParams(format!("expected six integers, got '{s}'")))?;
        let counts: [usize; 6] = values
            .try_into()
            .map_err(|_| Error::InvalidParams(format!("expected six integers, got '{s}'")))?;
        Self::from_counts(counts)
    }
}

impl fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.counts;
        write!(f, "{},{},{},{},{},{}", c[0], c[1], c[2], c[3], c[4], c[5])
    }
}

/// Which generator a substitution writes at the recommended position.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SubstitutionMode {
    #[default]
    Random,
    Recommended,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GaConfig {
    /// Suicide control: the maximum number of generations.
    pub sigma: usize,
    pub initial_length: usize,
    pub seed: u64,
    pub substitution: SubstitutionMode,
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sigma == 0 {
            return Err(Error::InvalidParams("sigma must be at least 1".into()));
        }
        if self.initial_length == 0 {
            return Err(Error::InvalidParams("initial length must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            sigma: 20_000,
            initial_length: 1,
            seed: 0,
            substitution: SubstitutionMode::Random,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Member {
    pub chromosome: Chromosome,
    pub cost: usize,
    pub recommendation: Recommendation,
}

/// Evaluated chromosomes, least cost first; ties keep insertion order.
#[derive(Clone, Debug)]
pub struct Population {
    members: Vec<Member>,
}

impl Population {
    pub fn from_members(mut members: Vec<Member>) -> Self {
        members.sort_by_key(|m| m.cost);
        Population { members }
    }

    /// Pseudo-reduces and evaluates every chromosome, then sorts.
    pub fn evaluate(
        inst: &DcspInstance,
        chromosomes: Vec<Chromosome>,
        ds: &mut dyn DecisionSource,
    ) -> Self {
        let members = chromosomes
            .into_iter()
            .map(|c| {
                let chromosome = c.pseudo_reduced(inst.spec());
                let (cost, recommendation) = evaluate(inst, &chromosome, ds);
                Member {
                    chromosome,
                    cost,
                    recommendation,
                }
            })
            .collect();
        Self::from_members(members)
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn best(&self) -> &Member {
        &self.members[0]
    }
}

fn roulette_indices(pop: &Population, n_s: usize, ds: &mut dyn DecisionSource) -> Vec<usize> {
    let costs: Vec<usize> = pop.members.iter().map(|m| m.cost).collect();
    let total: usize = costs.iter().sum();
    // Member k receives the mass of the member mirrored to it, so the best
    // gets the worst cost's share. Kept in integers: q_k = cumulative * W.
    let cumulative: Vec<usize> = costs
        .iter()
        .rev()
        .scan(0usize, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .collect();

    let mut out = Vec::with_capacity(n_s);
    for t in 0..n_s {
        if t == 0 {
            out.push(0);
            continue;
        }
        if total == 0 {
            out.push(ds.index(costs.len()));
            continue;
        }
        let threshold = ds.unit() * total as f64;
        let k = (0..costs.len())
            .find(|&k| {
                let lo = if k == 0 { 0 } else { cumulative[k - 1] };
                lo < cumulative[k] && threshold <= cumulative[k] as f64
            })
            .unwrap_or_else(|| {
                (0..costs.len())
                    .rev()
                    .find(|&k| costs[costs.len() - 1 - k] > 0)
                    .expect("total is positive")
            });
        out.push(k);
    }
    out
}

/// Cost-proportionate selection with the masses reversed so that low cost is
/// favoured. The first chromosome returned is always the best one.
pub fn roulette_select(pop: &Population, n_s: usize, ds: &mut dyn DecisionSource) -> Vec<Chromosome> {
    roulette_indices(pop, n_s, ds)
        .into_iter()
        .map(|k| pop.members[k].chromosome.clone())
        .collect()
}

fn tournament_indices(pop: &Population, ds: &mut dyn DecisionSource) -> (usize, usize) {
    let p = pop.len();
    let mut drawn: Vec<usize> = Vec::with_capacity(3);
    while drawn.len() < 3 {
        let mut k = ds.index(p - drawn.len());
        // map into the indices not drawn yet, in increasing order
        let mut taken = drawn.clone();
        taken.sort_unstable();
        for &d in &taken {
            if k >= d {
                k += 1;
            }
        }
        drawn.push(k);
    }
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&j| pop.members[drawn[j]].cost);
    (drawn[order[0]], drawn[order[1]])
}

/// Draws three distinct members and returns the two cheapest, preferring
/// earlier draws on ties.
pub fn tournament_select(pop: &Population, ds: &mut dyn DecisionSource) -> (Chromosome, Chromosome) {
    let (i, j) = tournament_indices(pop, ds);
    (
        pop.members[i].chromosome.clone(),
        pop.members[j].chromosome.clone(),
    )
}

/// Uniform `(i, j)` with `0 <= i <= j <= len`.
fn segment(w: &Word, ds: &mut dyn DecisionSource) -> Word {
    let len = w.len();
    let pairs = (len + 1) * (len + 2) / 2;
    let mut k = ds.index(pairs);
    let mut i = 0;
    while k > len - i {
        k -= len - i + 1;
        i += 1;
    }
    let j = i + k;
    Word::from_letters(w.letters()[i..j].to_vec())
}

/// Concatenates a random segment of each parent on one side; the other side
/// is copied from `c1`.
pub fn crossover(c1: &Chromosome, c2: &Chromosome, ds: &mut dyn DecisionSource) -> Chromosome {
    let side = if ds.coin() { Side::Chi } else { Side::Zeta };
    let first = segment(c1.side(side), ds);
    let second = segment(c2.side(side), ds);
    let mut child = c1.clone();
    *child.side_mut(side) = first.concat(&second);
    child
}

fn random_side_letter(inst: &DcspInstance, side: Side, ds: &mut dyn DecisionSource) -> Letter {
    let index = *choose(ds, inst.subset(side).indices()).expect("subsets are non-empty");
    Letter::generator(index, ds.coin())
}

fn cancels_with_neighbours(letters: &[Letter], at: usize, g: Letter) -> bool {
    let left = at.checked_sub(1).and_then(|k| letters.get(k));
    let right = letters.get(at + 1);
    [left, right].into_iter().flatten().any(|&n| n == g.inverse())
}

/// Writes `g` at `at`, redrawing a random legal letter while it would cancel
/// with a neighbour.
fn place_non_cancelling(
    inst: &DcspInstance,
    side: Side,
    letters: &mut [Letter],
    at: usize,
    g: Letter,
    ds: &mut dyn DecisionSource,
) {
    letters[at] = g;
    let mut tries = 0;
    while cancels_with_neighbours(letters, at, letters[at]) && tries < REDRAW_LIMIT {
        letters[at] = random_side_letter(inst, side, ds);
        tries += 1;
    }
}

/// Inserts the recommended generator next to the recommended position.
pub fn mutate_insert(
    inst: &DcspInstance,
    c: &Chromosome,
    rec: &Recommendation,
    ds: &mut dyn DecisionSource,
) -> Chromosome {
    let mut child = c.clone();
    let chi_len = c.chi.len();
    let word = child.side_mut(rec.side);
    let mut letters = std::mem::take(word).into_letters();
    let at = if letters.is_empty() {
        0
    } else {
        let p = rec.position(chi_len).min(letters.len() - 1);
        match rec.direction {
            Direction::Right => p + 1,
            Direction::Left => p,
        }
    };
    letters.insert(at, rec.generator);
    place_non_cancelling(inst, rec.side, &mut letters, at, rec.generator, ds);
    *word = Word::from_letters(letters);
    child
}

/// Replaces the letter at the recommended position.
pub fn mutate_substitute(
    inst: &DcspInstance,
    c: &Chromosome,
    rec: &Recommendation,
    mode: SubstitutionMode,
    ds: &mut dyn DecisionSource,
) -> Chromosome {
    let mut child = c.clone();
    let chi_len = c.chi.len();
    let word = child.side_mut(rec.side);
    if word.is_empty() {
        return child;
    }
    let mut letters = std::mem::take(word).into_letters();
    let at = rec.position(chi_len).min(letters.len() - 1);
    let g = match mode {
        SubstitutionMode::Random => random_side_letter(inst, rec.side, ds),
        SubstitutionMode::Recommended => rec.generator,
    };
    place_non_cancelling(inst, rec.side, &mut letters, at, g, ds);
    *word = Word::from_letters(letters);
    child
}

/// Removes the letter at the recommended position.
pub fn mutate_delete(c: &Chromosome, rec: &Recommendation) -> Chromosome {
    let mut child = c.clone();
    let chi_len = c.chi.len();
    let word = child.side_mut(rec.side);
    if word.is_empty() {
        return child;
    }
    let mut letters = std::mem::take(word).into_letters();
    let at = rec.position(chi_len).min(letters.len() - 1);
    letters.remove(at);
    *word = Word::from_letters(letters);
    child
}

/// Unreduced random words of exactly `length` letters on both sides.
pub fn random_chromosome(inst: &DcspInstance, length: usize, ds: &mut dyn DecisionSource) -> Chromosome {
    let mut draw = |side| (0..length).map(|_| random_side_letter(inst, side, ds)).collect();
    let chi = draw(Side::Chi);
    let zeta = draw(Side::Zeta);
    Chromosome::new(chi, zeta)
}

/// Breeds `p` children in the fixed slot order (crossovers, substitutions,
/// deletions, insertions, selections, randoms), then evaluates them.
pub fn next_generation(
    pop: &Population,
    inst: &DcspInstance,
    params: &ParameterSet,
    config: &GaConfig,
    ds: &mut dyn DecisionSource,
) -> Population {
    let mut children = Vec::with_capacity(params.pop());

    for _ in 0..params.crossovers() {
        let (i, j) = tournament_indices(pop, ds);
        children.push(crossover(
            &pop.members[i].chromosome,
            &pop.members[j].chromosome,
            ds,
        ));
    }
    for _ in 0..params.substitutions() {
        let parent = &pop.members[ds.index(pop.len())];
        children.push(mutate_substitute(
            inst,
            &parent.chromosome,
            &parent.recommendation,
            config.substitution,
            ds,
        ));
    }
    for _ in 0..params.deletions() {
        let parent = &pop.members[ds.index(pop.len())];
        children.push(mutate_delete(&parent.chromosome, &parent.recommendation));
    }
    for _ in 0..params.insertions() {
        let parent = &pop.members[ds.index(pop.len())];
        children.push(mutate_insert(
            inst,
            &parent.chromosome,
            &parent.recommendation,
            ds,
        ));
    }
    children.extend(roulette_select(pop, params.selections(), ds));
    for _ in 0..params.randoms() {
        children.push(random_chromosome(inst, config.initial_length, ds));
    }

    Population::evaluate(inst, children, ds)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solution(Chromosome),
    Timeout,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub outcome: Outcome,
    /// Number of populations iterated before the solution (or `sigma` on timeout).
    pub generations: usize,
    pub elapsed: Duration,
    /// Best cost of each evaluated generation.
    pub best_cost_trace: Vec<usize>,
}

impl RunResult {
    pub fn solved(&self) -> bool {
        matches!(self.outcome, Outcome::Solution(_))
    }

    pub fn final_cost(&self) -> usize {
        self.best_cost_trace.last().copied().unwrap_or(0)
    }
}

pub fn run(inst: &DcspInstance, params: &ParameterSet, config: &GaConfig) -> Result<RunResult> {
    run_observed(inst, params, config, |_, _| {})
}

/// Like [`run`], calling `observe(i, population)` after each generation is
/// evaluated and sorted.
pub fn run_observed(
    inst: &DcspInstance,
    params: &ParameterSet,
    config: &GaConfig,
    mut observe: impl FnMut(usize, &Population),
) -> Result<RunResult> {
    ParameterSet::new(params.pop, params.counts)?;
    config.validate()?;

    let start = Instant::now();
    let mut ds = RngSource::seeded(config.seed);
    let initial: Vec<Chromosome> = (0..params.pop())
        .map(|_| random_chromosome(inst, config.initial_length, &mut ds))
        .collect();
    let mut pop = Population::evaluate(inst, initial, &mut ds);
    let mut trace = Vec::new();

    for i in 0..config.sigma {
        observe(i, &pop);
        let best = pop.best();
        trace.push(best.cost);
        if best.cost == 0 {
            return Ok(RunResult {
                outcome: Outcome::Solution(best.chromosome.clone()),
                generations: i,
                elapsed: start.elapsed(),
                best_cost_trace: trace,
            });
        }
        pop = next_generation(&pop, inst, params, config, &mut ds);
    }

    Ok(RunResult {
        outcome: Outcome::Timeout,
        generations: config.sigma,
        elapsed: start.elapsed(),
        best_cost_trace: trace,
    })
}
