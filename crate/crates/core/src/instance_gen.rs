//! Random instances built by random walks, with the hidden witness kept.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dcsp::{Chromosome, DcspInstance, GeneratorSubset, InstanceFile};
use crate::error::{Error, Result};
use crate::word::{normal_form, random_word, GroupSpec, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layout {
    /// `n = 2m`, `Y = {1..m-1}`, `Z = {m+2..n}`.
    ProblemP,
    Explicit { y: Vec<usize>, z: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub rank: usize,
    pub l_a: usize,
    pub l_x: usize,
    pub l_y: usize,
    pub layout: Layout,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub instance: DcspInstance,
    pub witness_x: Word,
    pub witness_y: Word,
    /// Mean of the reduced witness lengths.
    pub s: f64,
}

impl GeneratedInstance {
    pub fn witness(&self) -> Chromosome {
        Chromosome::new(self.witness_x.clone(), self.witness_y.clone())
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            instance: self.instance.clone(),
            witness: Some(self.witness()),
        }
    }
}

pub fn problem_p_subgroups(rank: usize) -> Result<(GeneratorSubset, GeneratorSubset)> {
    if !rank.is_multiple_of(2) || rank < 4 {
        return Err(Error::InvalidSpec(format!(
            "problem (P) needs an even rank of at least 4, got {rank}"
        )));
    }
    let spec = GroupSpec::new(rank)?;
    let m = rank / 2;
    Ok((
        GeneratorSubset::new(1..m, &spec)?,
        GeneratorSubset::new(m + 2..=rank, &spec)?,
    ))
}

pub fn generate(spec: &InstanceSpec) -> Result<GeneratedInstance> {
    let group = GroupSpec::new(spec.rank)?;
    let (y_set, z_set) = match &spec.layout {
        Layout::ProblemP => problem_p_subgroups(spec.rank)?,
        Layout::Explicit { y, z } => (
            GeneratorSubset::new(y.iter().copied(), &group)?,
            GeneratorSubset::new(z.iter().copied(), &group)?,
        ),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let a = random_word(spec.l_a, &group.alphabet(), &group, &mut rng)?;
    let x = random_word(spec.l_x, y_set.indices(), &group, &mut rng)?;
    let y = random_word(spec.l_y, z_set.indices(), &group, &mut rng)?;
    let b = normal_form(&x.concat(&a).concat(&y), &group);
    let instance = DcspInstance::new(group, y_set, z_set, a, b)?;
    Ok(GeneratedInstance {
        instance,
        s: (spec.l_x + spec.l_y) as f64 / 2.0,
        witness_x: x,
        witness_y: y,
    })
}

/// Lengths drawn uniformly from `[1, max]`, redrawn until the witness mean
/// `s` lies in `s_range` (when given).
pub fn draw_lengths<R: Rng + ?Sized>(
    max_a: usize,
    max_x: usize,
    max_y: usize,
    s_range: Option<(f64, f64)>,
    rng: &mut R,
) -> Result<(usize, usize, usize)> {
    if max_a == 0 || max_x == 0 || max_y == 0 {
        return Err(Error::InvalidSpec("maximal lengths must be positive".into()));
    }
    if let Some((lo, hi)) = s_range {
        let reachable = (1.0_f64).max(lo) < hi && lo < (max_x + max_y) as f64 / 2.0;
        if !reachable {
            return Err(Error::InvalidSpec(format!(
                "no lengths up to ({max_x}, {max_y}) give s in [{lo}, {hi})"
            )));
        }
    }
    loop {
        let l_a = rng.gen_range(1..=max_a);
        let l_x = rng.gen_range(1..=max_x);
        let l_y = rng.gen_range(1..=max_y);
        let s = (l_x + l_y) as f64 / 2.0;
        match s_range {
            Some((lo, hi)) if s < lo || s >= hi => continue,
            _ => return Ok((l_a, l_x, l_y)),
        }
    }
}
