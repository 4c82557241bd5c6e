//! Solver for the double coset search problem in Vershik groups.
//!
//! Given parabolic subgroups `V(Y)`, `V(Z)` of `V_n` and words `a`, `b` with
//! `b ∈ V(Y) a V(Z)`, find `x ∈ V(Y)`, `y ∈ V(Z)` with `b = x a y`. The search
//! is posed as minimising `l(χ a ζ b⁻¹)` and solved by a genetic algorithm
//! whose mutations are steered by the traceback heuristic.

pub mod bench;
pub mod dcsp;
pub mod decision;
pub mod error;
pub mod ga;
pub mod instance_gen;
pub mod traceback;
pub mod word;

pub use error::{Error, Result};
pub use ga::{run, GaConfig, Outcome, ParameterSet, Population, RunResult, SubstitutionMode};
pub use dcsp::{cost, in_subgroup, is_solution, Chromosome, DcspInstance, GeneratorSubset, InstanceFile, Side};
pub use decision::{DecisionSource, RngSource, ScriptedSource};
pub use traceback::{evaluate, Direction, Recommendation};
pub use word::{GroupSpec, LabeledLetter, LabeledWord, Letter, Word};
