//! Reduced words over generator labels and balls of group elements.

use std::fmt;

use rayon::prelude::*;

use crate::moebius::MoebiusTransform;

/// A syllable `g_label^exponent` with a nonzero exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub label: usize,
    pub exponent: i32,
}

/// A reduced word: adjacent syllables carry distinct labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn from_letters<I: IntoIterator<Item = (usize, i32)>>(letters: I) -> Self {
        let mut w = Word::identity();
        for (label, exponent) in letters {
            w.push(label, exponent);
        }
        w
    }

    /// Appends `g_label^exponent`, merging with (or cancelling against) the
    /// last syllable.
    pub fn push(&mut self, label: usize, exponent: i32) {
        if exponent == 0 {
            return;
        }
        match self.letters.last_mut() {
            Some(last) if last.label == label => {
                last.exponent += exponent;
                if last.exponent == 0 {
                    self.letters.pop();
                }
            }
            _ => self.letters.push(Letter { label, exponent }),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Word length with every generator counted once per unit exponent.
    pub fn len(&self) -> usize {
        self.letters.iter().map(|l| l.exponent.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Label of the leftmost syllable.
    pub fn lead(&self) -> Option<usize> {
        self.letters.first().map(|l| l.label)
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    label: l.label,
                    exponent: -l.exponent,
                })
                .collect(),
        }
    }

    /// Product of the letters left to right, with `generator(label)`
    /// supplying each generator.
    pub fn evaluate<F: Fn(usize) -> MoebiusTransform>(&self, generator: F) -> MoebiusTransform {
        self.letters
            .iter()
            .fold(MoebiusTransform::IDENTITY, |acc, l| {
                acc.compose(&generator(l.label).pow(l.exponent))
            })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.exponent == 1 {
                write!(f, "g{}", l.label)?;
            } else {
                write!(f, "g{}^{}", l.label, l.exponent)?;
            }
        }
        Ok(())
    }
}

/// All reduced words of length at most `radius` with their matrices, in a
/// fixed depth-first lexicographic order (letters ordered by generator and
/// then `+1` before `-1`).
#[derive(Debug, Clone)]
pub struct WordBall {
    pub radius: usize,
    pub generator_count: usize,
    pub elements: Vec<(Word, MoebiusTransform)>,
}

impl WordBall {
    pub fn new(generators: &[MoebiusTransform], labels: &[usize], radius: usize) -> Self {
        assert_eq!(generators.len(), labels.len(), "one label per generator");
        let n = generators.len();
        let alphabet: Vec<(usize, i32, MoebiusTransform)> = (0..n)
            .flat_map(|k| {
                [
                    (k, 1, generators[k]),
                    (k, -1, generators[k].invert()),
                ]
            })
            .collect();
        let mut elements = vec![(Word::identity(), MoebiusTransform::IDENTITY)];
        if radius > 0 {
            // Subtrees under distinct first letters are independent; the
            // concatenation order is fixed, so the result does not depend on
            // how the work is split.
            let subtrees: Vec<Vec<(Word, MoebiusTransform)>> = alphabet
                .par_iter()
                .map(|&(k, s, m)| {
                    let mut out = Vec::new();
                    let mut word = Word::identity();
                    word.push(labels[k], s);
                    explore(&alphabet, labels, radius, (k, s), word, m, &mut out);
                    out
                })
                .collect();
            for t in subtrees {
                elements.extend(t);
            }
        }
        WordBall {
            radius,
            generator_count: n,
            elements,
        }
    }

    /// Minimum of `f` over the ball, optionally skipping the identity.
    pub fn min_over<F>(&self, include_identity: bool, f: F) -> f64
    where
        F: Fn(&MoebiusTransform) -> f64 + Sync,
    {
        let skip = usize::from(!include_identity);
        self.elements[skip..]
            .par_iter()
            .map(|(_, m)| f(m))
            .reduce(|| f64::INFINITY, f64::min)
    }
}

fn explore(
    alphabet: &[(usize, i32, MoebiusTransform)],
    labels: &[usize],
    radius: usize,
    last: (usize, i32),
    word: Word,
    m: MoebiusTransform,
    out: &mut Vec<(Word, MoebiusTransform)>,
) {
    let depth = word.len();
    out.push((word.clone(), m));
    if depth == radius {
        return;
    }
    for &(k, s, g) in alphabet {
        if k == last.0 && s == -last.1 {
            continue;
        }
        let mut next = word.clone();
        next.push(labels[k], s);
        explore(alphabet, labels, radius, (k, s), next, m.compose(&g), out);
    }
}

/// Number of reduced words of length at most `radius` in a free group of
/// rank `n`.
pub fn ball_size(n: usize, radius: usize) -> usize {
    if n == 0 {
        return 1;
    }
    let mut total = 1;
    let mut layer = 2 * n;
    for _ in 0..radius {
        total += layer;
        layer *= 2 * n - 1;
    }
    total
}
