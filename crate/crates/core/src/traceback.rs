//! Traceback: recommends a generator and a position for mutating a chromosome.
//!
//! The letters of `χ` and `ζ` are labelled with their positions in `χζ`,
//! `E = χ a ζ b⁻¹` is reduced with the labels attached, and the surviving
//! labelled letters of the normal form are grouped into blocks. A block end is
//! picked at random; the unlabelled stretch `δ` beyond that end tells which
//! generators could cancel into it: the floor of `δ` when looking right, its
//! roof when looking left. The inverse of one such generator (restricted to
//! the side's subgroup) is the recommendation.

use std::fmt::Write as _;

use crate::dcsp::{Chromosome, DcspInstance, Side};
use crate::decision::{choose, DecisionSource};
use crate::word::{floor, labeled_normal_form, roof, LabeledWord, Letter, Word};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Direction {
    Left,
    Right,
}

/// A maximal run of adjacent labelled letters of one side in the reduced `E`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    pub labels: Vec<usize>,
    pub side: Side,
    /// Position of the first letter in the reduced word.
    pub start: usize,
    /// One past the position of the last letter.
    pub end: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Recommendation {
    pub generator: Letter,
    /// Label of the letter to act on, i.e. its position in `χζ`.
    pub label: usize,
    pub side: Side,
    pub direction: Direction,
    /// Set when produced by the random fallback rather than by a block.
    pub fallback: bool,
}

impl Recommendation {
    /// Position within the side's own word.
    pub fn position(&self, chi_len: usize) -> usize {
        match self.side {
            Side::Chi => self.label,
            Side::Zeta => self.label.saturating_sub(chi_len),
        }
    }
}

/// Everything traceback computed for one chromosome.
#[derive(Clone, Debug)]
pub struct Traceback {
    pub reduced: LabeledWord,
    pub chi_len: usize,
    pub blocks: Vec<Block>,
    /// Index into `blocks` of the block behind the recommendation, if any.
    pub chosen_block: Option<usize>,
    pub delta: Word,
    pub candidates: Vec<Letter>,
    pub recommendation: Recommendation,
}

impl Traceback {
    pub fn cost(&self) -> usize {
        self.reduced.len()
    }
}

fn side_of(label: usize, chi_len: usize) -> Side {
    if label < chi_len {
        Side::Chi
    } else {
        Side::Zeta
    }
}

pub fn compute_blocks(ebar: &LabeledWord, chi_len: usize) -> Vec<Block> {
    let mut blocks: Vec<Block> = Vec::new();
    for (pos, l) in ebar.letters().iter().enumerate() {
        let Some(label) = l.label else { continue };
        let side = side_of(label, chi_len);
        match blocks.last_mut() {
            Some(b) if b.end == pos && b.side == side => {
                b.labels.push(label);
                b.end = pos + 1;
            }
            _ => blocks.push(Block {
                labels: vec![label],
                side,
                start: pos,
                end: pos + 1,
            }),
        }
    }
    blocks
}

/// `E = χ a ζ b⁻¹` with the letters of `χζ` labelled `0..l(χζ)`.
pub fn labeled_expression(inst: &DcspInstance, c: &Chromosome) -> LabeledWord {
    let mut e = LabeledWord::new();
    e.extend_labeled(&c.chi, 0);
    e.extend_unlabeled(inst.a());
    e.extend_labeled(&c.zeta, c.chi.len());
    e.extend_unlabeled(inst.b_inverse());
    e
}

fn fallback(inst: &DcspInstance, c: &Chromosome, ds: &mut dyn DecisionSource) -> Recommendation {
    let side = if ds.coin() { Side::Chi } else { Side::Zeta };
    let alphabet = inst.subset(side).indices();
    let index = *choose(ds, alphabet).expect("generator subsets are non-empty");
    let generator = Letter::generator(index, ds.coin());
    let word_len = c.side(side).len();
    let position = if word_len == 0 { 0 } else { ds.index(word_len) };
    let label = match side {
        Side::Chi => position,
        Side::Zeta => c.chi.len() + position,
    };
    let direction = if ds.coin() {
        Direction::Right
    } else {
        Direction::Left
    };
    Recommendation {
        generator,
        label,
        side,
        direction,
        fallback: true,
    }
}

/// Full traceback of `c`, which should already be pseudo-reduced.
pub fn trace(inst: &DcspInstance, c: &Chromosome, ds: &mut dyn DecisionSource) -> Traceback {
    let spec = inst.spec();
    let chi_len = c.chi.len();
    let reduced = labeled_normal_form(&labeled_expression(inst, c), spec);
    let blocks = compute_blocks(&reduced, chi_len);

    let attempts = 2 * blocks.len();
    for _ in 0..attempts {
        let k = ds.index(blocks.len());
        let block = &blocks[k];
        let direction = if ds.coin() {
            Direction::Right
        } else {
            Direction::Left
        };
        let (label, span) = match direction {
            Direction::Right => {
                let stop = blocks.get(k + 1).map_or(reduced.len(), |b| b.start);
                (*block.labels.last().expect("blocks are non-empty"), block.end..stop)
            }
            Direction::Left => {
                let start = if k == 0 { 0 } else { blocks[k - 1].end };
                (block.labels[0], start..block.start)
            }
        };
        let delta = reduced.slice(span);
        let allowed = inst.subset(block.side);
        let edge = match direction {
            Direction::Right => floor(&delta, spec),
            Direction::Left => roof(&delta, spec),
        };
        let candidates: Vec<Letter> = edge.into_iter().filter(|g| allowed.contains(g.index())).collect();
        if let Some(&h) = choose(ds, &candidates) {
            let recommendation = Recommendation {
                generator: h.inverse(),
                label,
                side: block.side,
                direction,
                fallback: false,
            };
            return Traceback {
                reduced,
                chi_len,
                blocks,
                chosen_block: Some(k),
                delta,
                candidates,
                recommendation,
            };
        }
    }

    let recommendation = fallback(inst, c, ds);
    Traceback {
        reduced,
        chi_len,
        blocks,
        chosen_block: None,
        delta: Word::empty(),
        candidates: Vec::new(),
        recommendation,
    }
}

/// Cost of `c` together with a mutation recommendation.
pub fn evaluate(
    inst: &DcspInstance,
    c: &Chromosome,
    ds: &mut dyn DecisionSource,
) -> (usize, Recommendation) {
    let t = trace(inst, c, ds);
    (t.cost(), t.recommendation)
}

/// Two-row rendering of the labelled reduced word followed by the block table.
pub fn format_trace(t: &Traceback) -> String {
    let cells: Vec<(String, String)> = t
        .reduced
        .letters()
        .iter()
        .map(|l| {
            (
                l.label.map(|x| x.to_string()).unwrap_or_default(),
                l.letter.to_string(),
            )
        })
        .collect();
    let mut top = String::new();
    let mut bottom = String::new();
    for (label, letter) in &cells {
        let width = label.len().max(letter.len());
        let _ = write!(top, "{label:>width$} ");
        let _ = write!(bottom, "{letter:>width$} ");
    }
    let mut out = format!("{}\n{}\n", top.trim_end(), bottom.trim_end());
    for (k, b) in t.blocks.iter().enumerate() {
        let labels: Vec<String> = b.labels.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(
            out,
            "block {}: {} [{}] positions {}..{}",
            k + 1,
            b.side.name(),
            labels.join(" "),
            b.start,
            b.end
        );
    }
    out
}
