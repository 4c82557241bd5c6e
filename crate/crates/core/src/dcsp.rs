//! Double coset search instances, candidate pairs and the cost function.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::word::{normal_form, pseudo_normal_form, reduced_length, GroupSpec, Letter, Word};

/// Generator indices of a parabolic subgroup, kept sorted and unique.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GeneratorSubset(Vec<usize>);

impl GeneratorSubset {
    pub fn new(indices: impl IntoIterator<Item = usize>, spec: &GroupSpec) -> Result<Self> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptySubset);
        }
        for &i in &set {
            if i == 0 {
                return Err(Error::ZeroLetter);
            }
            spec.check_letter(Letter::generator(i, true))?;
        }
        Ok(GeneratorSubset(set.into_iter().collect()))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }
}

impl fmt::Display for GeneratorSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// True iff every letter of `w` has its index in `s`.
pub fn in_subgroup(w: &Word, s: &GeneratorSubset) -> bool {
    w.iter().all(|l| s.contains(l.index()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcspInstance {
    spec: GroupSpec,
    y_set: GeneratorSubset,
    z_set: GeneratorSubset,
    a: Word,
    b: Word,
    b_inverse: Word,
}

impl DcspInstance {
    /// Builds an instance; `b` is stored in normal form.
    pub fn new(
        spec: GroupSpec,
        y_set: GeneratorSubset,
        z_set: GeneratorSubset,
        a: Word,
        b: Word,
    ) -> Result<Self> {
        spec.check(&a)?;
        spec.check(&b)?;
        for s in [&y_set, &z_set] {
            if let Some(&i) = s.indices().last() {
                spec.check_letter(Letter::generator(i, true))?;
            }
        }
        let b = normal_form(&b, &spec);
        let b_inverse = b.inverse();
        Ok(DcspInstance {
            spec,
            y_set,
            z_set,
            a,
            b,
            b_inverse,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn y_set(&self) -> &GeneratorSubset {
        &self.y_set
    }

    pub fn z_set(&self) -> &GeneratorSubset {
        &self.z_set
    }

    pub fn a(&self) -> &Word {
        &self.a
    }

    pub fn b(&self) -> &Word {
        &self.b
    }

    pub fn b_inverse(&self) -> &Word {
        &self.b_inverse
    }

    pub fn subset(&self, side: Side) -> &GeneratorSubset {
        match side {
            Side::Chi => &self.y_set,
            Side::Zeta => &self.z_set,
        }
    }

    /// `E = χ a ζ b⁻¹` as a plain word.
    pub fn expression(&self, c: &Chromosome) -> Word {
        let mut e = Vec::with_capacity(c.chi.len() + self.a.len() + c.zeta.len() + self.b.len());
        e.extend_from_slice(c.chi.letters());
        e.extend_from_slice(self.a.letters());
        e.extend_from_slice(c.zeta.letters());
        e.extend_from_slice(self.b_inverse.letters());
        Word::from_letters(e)
    }
}

/// Which component of a chromosome a letter or recommendation refers to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    Chi,
    Zeta,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Chi => "chi",
            Side::Zeta => "zeta",
        }
    }
}

/// A candidate pair `(χ, ζ) ∈ V(Y) × V(Z)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Chromosome {
    pub chi: Word,
    pub zeta: Word,
}

impl Chromosome {
    pub fn new(chi: Word, zeta: Word) -> Self {
        Chromosome { chi, zeta }
    }

    /// Builds a chromosome after checking subgroup membership of both sides.
    pub fn checked(inst: &DcspInstance, chi: Word, zeta: Word) -> Result<Self> {
        for (side, w) in [(Side::Chi, &chi), (Side::Zeta, &zeta)] {
            if let Some(l) = w.iter().find(|l| !inst.subset(side).contains(l.index())) {
                return Err(Error::NotInSubgroup {
                    letter: l.value(),
                    side: side.name(),
                });
            }
        }
        Ok(Chromosome { chi, zeta })
    }

    pub fn side(&self, side: Side) -> &Word {
        match side {
            Side::Chi => &self.chi,
            Side::Zeta => &self.zeta,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut Word {
        match side {
            Side::Chi => &mut self.chi,
            Side::Zeta => &mut self.zeta,
        }
    }

    pub fn pseudo_reduced(&self, spec: &GroupSpec) -> Chromosome {
        Chromosome {
            chi: pseudo_normal_form(&self.chi, spec),
            zeta: pseudo_normal_form(&self.zeta, spec),
        }
    }

    pub fn is_member(&self, inst: &DcspInstance) -> bool {
        in_subgroup(&self.chi, inst.y_set()) && in_subgroup(&self.zeta, inst.z_set())
    }
}

/// `C((χ, ζ)) = l(normal form of χ a ζ b⁻¹)`.
pub fn cost(inst: &DcspInstance, c: &Chromosome) -> Result<usize> {
    inst.spec.check(&c.chi)?;
    inst.spec.check(&c.zeta)?;
    Ok(reduced_length(&inst.expression(c), &inst.spec))
}

/// Subgroup membership holds and the cost is zero.
pub fn is_solution(inst: &DcspInstance, c: &Chromosome) -> bool {
    c.is_member(inst) && cost(inst, c) == Ok(0)
}

/// The plain-text instance file: an instance plus an optional hidden witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: DcspInstance,
    pub witness: Option<Chromosome>,
}

impl FromStr for InstanceFile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut fields: [Option<(usize, &str)>; 7] = Default::default();
        const KEYS: [&str; 7] = ["n", "Y", "Z", "a", "b", "x", "y"];

        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(line_no, format!("expected 'key: value', got '{line}'")))?;
            let key = key.trim();
            let slot = KEYS
                .iter()
                .position(|&k| k == key)
                .ok_or_else(|| Error::parse(line_no, format!("unknown key '{key}'")))?;
            if fields[slot].is_some() {
                return Err(Error::parse(line_no, format!("duplicate key '{key}'")));
            }
            fields[slot] = Some((line_no, value.trim()));
        }

        let required = |slot: usize| {
            fields[slot].ok_or_else(|| Error::parse(0, format!("missing key '{}'", KEYS[slot])))
        };
        let (n_line, n_text) = required(0)?;
        let rank: usize = n_text
            .parse()
            .map_err(|_| Error::parse(n_line, format!("bad rank '{n_text}'")))?;
        let spec = GroupSpec::new(rank).map_err(|e| Error::parse(n_line, e.to_string()))?;

        let subset = |slot: usize| -> Result<GeneratorSubset> {
            let (line, text) = required(slot)?;
            let indices = text
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::parse(line, format!("bad generator list '{text}'")))?;
            GeneratorSubset::new(indices, &spec).map_err(|e| Error::parse(line, e.to_string()))
        };
        let word = |(line, text): (usize, &str)| -> Result<Word> {
            spec.parse_word(text).map_err(|e| Error::parse(line, e.to_string()))
        };

        let y_set = subset(1)?;
        let z_set = subset(2)?;
        let a = word(required(3)?)?;
        let b = word(required(4)?)?;
        let instance = DcspInstance::new(spec, y_set, z_set, a, b)?;

        let witness = match (fields[5], fields[6]) {
            (None, None) => None,
            (Some(x), Some(y)) => {
                let line = x.0;
                let (x, y) = (word(x)?, word(y)?);
                Some(
                    Chromosome::checked(&instance, x, y)
                        .map_err(|e| Error::parse(line, e.to_string()))?,
                )
            }
            (Some((line, _)), None) | (None, Some((line, _))) => {
                return Err(Error::parse(line, "witness needs both 'x' and 'y'"))
            }
        };
        Ok(InstanceFile { instance, witness })
    }
}

impl fmt::Display for InstanceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inst = &self.instance;
        writeln!(f, "n: {}", inst.spec.rank())?;
        writeln!(f, "Y: {}", inst.y_set)?;
        writeln!(f, "Z: {}", inst.z_set)?;
        writeln!(f, "a: {}", inst.a)?;
        writeln!(f, "b: {}", inst.b)?;
        if let Some(w) = &self.witness {
            writeln!(f, "x: {}", w.chi)?;
            writeln!(f, "y: {}", w.zeta)?;
        }
        Ok(())
    }
}
