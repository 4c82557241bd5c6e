//! Words in the Vershik group `V_n`.
//!
//! A word is a sequence of signed generators, `+i` for `x_i` and `-i` for
//! `x_i^{-1}`. Two generators `x_i` and `x_j` commute iff `|i - j| >= 2`;
//! there are no other relations. Reduction is done in two phases: geodesic
//! cancellation (which alone gives the pseudo-normal form) followed by the
//! lexicographically least linearization under
//! `x_1 < x_1^{-1} < x_2 < ... < x_n^{-1}` (the normal form).

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// A signed generator `x_i^{±1}`, stored as `±i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i32);

impl Letter {
    pub fn new(value: i32) -> Result<Self> {
        if value == 0 {
            Err(Error::ZeroLetter)
        } else {
            Ok(Letter(value))
        }
    }

    /// `x_index` when `positive`, else `x_index^{-1}`.
    pub fn generator(index: usize, positive: bool) -> Self {
        assert!(index >= 1, "generator indices start at 1");
        let v = index as i32;
        Letter(if positive { v } else { -v })
    }

    pub fn value(self) -> i32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index()
            .cmp(&other.index())
            .then_with(|| other.is_positive().cmp(&self.is_positive()))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The rank `n` of a Vershik group, which fixes the commutation relation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GroupSpec {
    rank: usize,
}

impl GroupSpec {
    pub fn new(rank: usize) -> Result<Self> {
        if rank < 2 {
            return Err(Error::RankTooSmall(rank));
        }
        Ok(GroupSpec { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn commutes(&self, i: usize, j: usize) -> bool {
        i.abs_diff(j) >= 2
    }

    /// Indices other than `i` itself whose generators do not commute with `x_i`.
    fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        [i.wrapping_sub(1), i + 1]
            .into_iter()
            .filter(move |&j| j >= 1 && j != i && !self.commutes(i, j))
    }

    pub fn check_letter(&self, letter: Letter) -> Result<()> {
        if letter.index() > self.rank {
            return Err(Error::LetterOutOfRange {
                letter: letter.value(),
                rank: self.rank,
            });
        }
        Ok(())
    }

    pub fn check(&self, word: &Word) -> Result<()> {
        word.iter().try_for_each(|&l| self.check_letter(l))
    }

    /// Parses the space-separated text form and checks every letter against the rank.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let word: Word = text.parse()?;
        self.check(&word)?;
        Ok(word)
    }

    pub fn alphabet(&self) -> Vec<usize> {
        (1..=self.rank).collect()
    }
}

/// A finite sequence of signed generators. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn from_values(values: &[i32]) -> Result<Self> {
        values.iter().map(|&v| Letter::new(v)).collect()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn values(&self) -> Vec<i32> {
        self.0.iter().map(|l| l.value()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.0.iter()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// The group inverse: reversed, every sign flipped.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn max_index(&self) -> usize {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Letter;
    type IntoIter = std::slice::Iter<'a, Letter>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(|tok| {
                let v: i32 = tok.parse().map_err(|_| Error::BadToken(tok.to_string()))?;
                Letter::new(v)
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub fn invert(u: &Word) -> Word {
    u.inverse()
}

/// A letter of `E` carrying the position it had in the chromosome, if any.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct LabeledLetter {
    pub letter: Letter,
    pub label: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LabeledWord(Vec<LabeledLetter>);

impl LabeledWord {
    pub fn new() -> Self {
        LabeledWord(Vec::new())
    }

    pub fn from_letters(letters: Vec<LabeledLetter>) -> Self {
        LabeledWord(letters)
    }

    pub fn push(&mut self, letter: Letter, label: Option<usize>) {
        self.0.push(LabeledLetter { letter, label });
    }

    /// Appends every letter of `word`, labelling them `first_label, first_label + 1, ...`.
    pub fn extend_labeled(&mut self, word: &Word, first_label: usize) {
        for (k, &l) in word.iter().enumerate() {
            self.push(l, Some(first_label + k));
        }
    }

    pub fn extend_unlabeled(&mut self, word: &Word) {
        for &l in word.iter() {
            self.push(l, None);
        }
    }

    pub fn letters(&self) -> &[LabeledLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn strip(&self) -> Word {
        self.0.iter().map(|l| l.letter).collect()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().filter_map(|l| l.label).collect()
    }

    /// The unlabeled word spanning positions `range` of this word.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        self.0[range].iter().map(|l| l.letter).collect()
    }
}

/// Positions of the letters that survive geodesic cancellation, ascending.
///
/// Equivalent to repeatedly deleting the pair `(s, t)` with `s` leftmost and
/// then `t` smallest, where `letters[t]` is the inverse of `letters[s]` and
/// every surviving letter strictly between them commutes with it. Each
/// incoming letter is matched against the latest surviving letter of the
/// same index, which is reachable iff no surviving neighbour-index letter
/// lies after it.
fn surviving_positions(spec: &GroupSpec, letters: &[Letter]) -> Vec<usize> {
    const NONE: usize = usize::MAX;
    let width = letters
        .iter()
        .map(|l| l.index())
        .max()
        .unwrap_or(0)
        .max(spec.rank)
        + 2;
    // Per-index stacks of surviving positions, linked through `below`.
    let mut top = vec![NONE; width];
    let mut below = vec![NONE; letters.len()];
    let mut alive = vec![true; letters.len()];

    for (t, &letter) in letters.iter().enumerate() {
        let i = letter.index();
        let head = top[i];
        let cancels = head != NONE
            && letters[head] == letter.inverse()
            && spec
                .neighbours(i)
                .all(|j| top[j] == NONE || top[j] < head);
        if cancels {
            top[i] = below[head];
            alive[head] = false;
            alive[t] = false;
        } else {
            below[t] = head;
            top[i] = t;
        }
    }

    (0..letters.len()).filter(|&p| alive[p]).collect()
}

/// Orders `positions` (a reduced word) into the lexicographically least
/// linear extension of its dependency order.
fn least_linearization(spec: &GroupSpec, letters: &[Letter], positions: &[usize]) -> Vec<usize> {
    let width = positions
        .iter()
        .map(|&p| letters[p].index())
        .max()
        .unwrap_or(0)
        + 2;
    let mut queues: Vec<Vec<usize>> = vec![Vec::new(); width];
    for &p in positions {
        queues[letters[p].index()].push(p);
    }
    let mut heads = vec![0usize; width];
    let head = |queues: &[Vec<usize>], heads: &[usize], i: usize| queues[i].get(heads[i]).copied();

    let mut order = Vec::with_capacity(positions.len());
    while order.len() < positions.len() {
        // At most one letter per index is ready, so the least ready index wins.
        let next = (1..width - 1).find(|&i| match head(&queues, &heads, i) {
            None => false,
            Some(p) => spec
                .neighbours(i)
                .all(|j| j >= width || head(&queues, &heads, j).is_none_or(|q| q > p)),
        });
        let i = next.expect("a reduced word always has a ready letter");
        order.push(queues[i][heads[i]]);
        heads[i] += 1;
    }
    order
}

/// Geodesic cancellation without reordering. Its length is the geodesic length.
pub fn cancel_geodesic(u: &Word, spec: &GroupSpec) -> Word {
    surviving_positions(spec, u.letters())
        .into_iter()
        .map(|p| u.letters()[p])
        .collect()
}

pub fn pseudo_normal_form(u: &Word, spec: &GroupSpec) -> Word {
    cancel_geodesic(u, spec)
}

pub fn normal_form(u: &Word, spec: &GroupSpec) -> Word {
    let letters = u.letters();
    let survivors = surviving_positions(spec, letters);
    least_linearization(spec, letters, &survivors)
        .into_iter()
        .map(|p| letters[p])
        .collect()
}

/// Geodesic length `l(u)`, without computing the normal form.
pub fn reduced_length(u: &Word, spec: &GroupSpec) -> usize {
    surviving_positions(spec, u.letters()).len()
}

/// Normal form in which every surviving letter keeps its label.
pub fn labeled_normal_form(e: &LabeledWord, spec: &GroupSpec) -> LabeledWord {
    let stripped: Vec<Letter> = e.letters().iter().map(|l| l.letter).collect();
    let survivors = surviving_positions(spec, &stripped);
    LabeledWord(
        least_linearization(spec, &stripped, &survivors)
            .into_iter()
            .map(|p| e.letters()[p])
            .collect(),
    )
}

fn all_letters(spec: &GroupSpec) -> impl Iterator<Item = Letter> + '_ {
    (1..=spec.rank()).flat_map(|i| [Letter::generator(i, true), Letter::generator(i, false)])
}

/// `RF(u)`: generators `g` such that `u g^{-1}` is one letter shorter than `u`.
pub fn roof(u: &Word, spec: &GroupSpec) -> BTreeSet<Letter> {
    let reduced = normal_form(u, spec);
    let base = reduced.len();
    if base == 0 {
        return BTreeSet::new();
    }
    let mut trial = reduced.into_letters();
    trial.push(Letter(1));
    all_letters(spec)
        .filter(|&g| {
            trial[base] = g.inverse();
            surviving_positions(spec, &trial).len() == base - 1
        })
        .collect()
}

/// `FL(u)`: generators `g` such that `g^{-1} u` is one letter shorter than `u`.
pub fn floor(u: &Word, spec: &GroupSpec) -> BTreeSet<Letter> {
    let reduced = normal_form(u, spec);
    let base = reduced.len();
    if base == 0 {
        return BTreeSet::new();
    }
    let mut trial = Vec::with_capacity(base + 1);
    trial.push(Letter(1));
    trial.extend_from_slice(reduced.letters());
    all_letters(spec)
        .filter(|&g| {
            trial[0] = g.inverse();
            surviving_positions(spec, &trial).len() == base - 1
        })
        .collect()
}

pub fn random_letter<R: Rng + ?Sized>(alphabet: &[usize], rng: &mut R) -> Letter {
    let i = alphabet[rng.gen_range(0..alphabet.len())];
    Letter::generator(i, rng.gen_bool(0.5))
}

/// Random walk producing a word whose geodesic length is exactly `k`.
///
/// Letters are drawn uniformly from `alphabet × {+1, -1}`. The result may be
/// unreduced.
pub fn random_word<R: Rng + ?Sized>(
    k: usize,
    alphabet: &[usize],
    spec: &GroupSpec,
    rng: &mut R,
) -> Result<Word> {
    if k == 0 {
        return Ok(Word::empty());
    }
    if alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    for &i in alphabet {
        spec.check_letter(Letter::generator(i.max(1), true))?;
        if i == 0 {
            return Err(Error::ZeroLetter);
        }
    }
    let mut u = Word::empty();
    let mut current = 0;
    while current < k {
        for _ in 0..k - current {
            u.push(random_letter(alphabet, rng));
        }
        current = reduced_length(&u, spec);
    }
    Ok(u)
}

/// Run-length encoding `[(i_1, mu_1), ...]` of a word, merging adjacent equal letters.
pub fn syllables(u: &Word) -> Vec<(usize, i32)> {
    let mut out: Vec<(usize, i32)> = Vec::new();
    for l in u.iter() {
        let step = if l.is_positive() { 1 } else { -1 };
        match out.last_mut() {
            Some((i, mu)) if *i == l.index() && (*mu > 0) == l.is_positive() => *mu += step,
            _ => out.push((l.index(), step)),
        }
    }
    out
}
