//! Reference implementations used as oracles. They are deliberately naive
//! and share no code with the library's reduction routines.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use rand::Rng;

fn commute(i: i32, j: i32) -> bool {
    (i.abs() - j.abs()).abs() >= 2
}

/// Shortest length reachable from `w` by swapping adjacent commuting letters
/// and deleting adjacent inverse pairs, by exhaustive search.
pub fn bfs_geodesic_length(w: &[i32]) -> usize {
    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    let mut queue = VecDeque::from([w.to_vec()]);
    seen.insert(w.to_vec());
    let mut best = w.len();
    while let Some(u) = queue.pop_front() {
        best = best.min(u.len());
        for k in 0..u.len().saturating_sub(1) {
            let (p, q) = (u[k], u[k + 1]);
            let next = if p == -q {
                let mut v = u.clone();
                v.drain(k..k + 2);
                v
            } else if commute(p, q) {
                let mut v = u.clone();
                v.swap(k, k + 1);
                v
            } else {
                continue;
            };
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    best
}

/// Repeatedly deletes a pair `x^e ... x^-e` whose in-between letters all
/// commute with `x`, until none is left. The result is geodesic.
pub fn pinch_reduce(w: &[i32]) -> Vec<i32> {
    let mut u = w.to_vec();
    'outer: loop {
        for i in 0..u.len() {
            for j in i + 1..u.len() {
                if u[j] == -u[i] {
                    u.remove(j);
                    u.remove(i);
                    continue 'outer;
                }
                if !commute(u[i], u[j]) {
                    break;
                }
            }
        }
        return u;
    }
}

pub fn random_values(rng: &mut impl Rng, rank: i32, len: usize) -> Vec<i32> {
    (0..len)
        .map(|_| {
            let i = rng.gen_range(1..=rank);
            if rng.gen() { i } else { -i }
        })
        .collect()
}

/// One random relation-preserving rewrite: a commuting swap, an inserted
/// `x x^-1`, or a deleted adjacent inverse pair.
pub fn random_rewrite(rng: &mut impl Rng, w: &mut Vec<i32>, rank: i32) {
    for _ in 0..8 {
        match rng.gen_range(0..3) {
            0 if w.len() >= 2 => {
                let k = rng.gen_range(0..w.len() - 1);
                if commute(w[k], w[k + 1]) {
                    w.swap(k, k + 1);
                    return;
                }
            }
            2 if w.len() >= 2 => {
                let k = rng.gen_range(0..w.len() - 1);
                if w[k] == -w[k + 1] {
                    w.drain(k..k + 2);
                    return;
                }
            }
            _ => {
                let x = random_values(rng, rank, 1)[0];
                let k = rng.gen_range(0..=w.len());
                w.splice(k..k, [x, -x]);
                return;
            }
        }
    }
}

/// Every word of length exactly `len` over ranks `±1..=±rank`.
pub fn all_words(rank: i32, len: usize) -> Vec<Vec<i32>> {
    let letters: Vec<i32> = (1..=rank).flat_map(|i| [i, -i]).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}
