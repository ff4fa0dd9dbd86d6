//! Words over `{0, 1, 2}` that avoid the factors `02` and `20`.
//!
//! Letter `i` (1-based) of a word is the label of the `i`-th interface cell
//! counted from the outer edge of the grid: `0` for a cell of the set, `1`
//! for a dominated cell, `2` for an undominated one. Adjacent cells can never
//! be labelled `0` and `2`, hence the forbidden factors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::tropical::TropicalMatrix;
use crate::{Error, Result};

pub const IN_SET: u8 = 0;
pub const DOMINATED: u8 = 1;
pub const UNDOMINATED: u8 = 2;

pub const MAX_WORD_LEN: usize = 16;

/// A valid word of length `1..=16`, packed two bits per letter with letter 1
/// in the lowest bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    len: u8,
    bits: u32,
}

impl Word {
    pub fn from_letters(letters: &[u8]) -> Result<Self> {
        let len = letters.len();
        check_len(len)?;
        let mut bits = 0u32;
        for (idx, &letter) in letters.iter().enumerate() {
            if letter > UNDOMINATED {
                return Err(Error::input(format!("letter {letter} is not in {{0,1,2}}")));
            }
            if idx > 0 && letters_clash(letters[idx - 1], letter) {
                return Err(Error::input(format!(
                    "word contains the factor {}{}",
                    letters[idx - 1],
                    letter
                )));
            }
            bits |= (letter as u32) << (2 * idx);
        }
        Ok(Word {
            len: len as u8,
            bits,
        })
    }

    /// The constant word `letter^len`.
    pub fn uniform(len: usize, letter: u8) -> Result<Self> {
        Word::from_letters(&vec![letter; len])
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at 0-based position `idx`.
    #[inline]
    pub fn letter(&self, idx: usize) -> u8 {
        debug_assert!(idx < self.len());
        (self.bits >> (2 * idx) & 3) as u8
    }

    pub fn letters(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(|idx| self.letter(idx))
    }

    /// `|w|_a`, the number of occurrences of `letter`.
    pub fn count(&self, letter: u8) -> usize {
        self.letters().filter(|&l| l == letter).count()
    }

    pub fn packed(&self) -> u32 {
        self.bits
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in self.letters() {
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .bytes()
            .map(|b| match b {
                b'0'..=b'2' => Ok(b - b'0'),
                _ => Err(Error::input(format!(
                    "unexpected character {:?} in word",
                    b as char
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::from_letters(&letters)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on letters, shorter words first on a common prefix.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.letters().cmp(other.letters())
    }
}

fn check_len(len: usize) -> Result<()> {
    if !(1..=MAX_WORD_LEN).contains(&len) {
        return Err(Error::input(format!(
            "word length {len} outside 1..={MAX_WORD_LEN}"
        )));
    }
    Ok(())
}

#[inline]
fn letters_clash(a: u8, b: u8) -> bool {
    a != b && a + b == 2
}

/// Number of valid words of length `k`: `a_0 = 1`, `a_1 = 3`,
/// `a_k = 2 a_{k-1} + a_{k-2}`, which is the integer form of
/// `((1 + sqrt 2)^(k+1) + (1 - sqrt 2)^(k+1)) / 2`.
pub fn count_closed_form(k: usize) -> Result<u64> {
    check_len(k)?;
    let (mut prev, mut cur) = (1u64, 3u64);
    for _ in 1..k {
        (prev, cur) = (cur, 2 * cur + prev);
    }
    Ok(cur)
}

/// All valid words of one length, in lexicographic order, with ranking.
#[derive(Clone, Debug)]
pub struct WordTable {
    k: usize,
    words: Vec<Word>,
    /// `suffixes[r][a]`: valid words of length `r` starting with letter `a`.
    suffixes: Vec<[u64; 3]>,
}

impl WordTable {
    pub fn new(k: usize) -> Result<Self> {
        check_len(k)?;
        let mut suffixes = vec![[0u64; 3]; k + 1];
        suffixes[1] = [1, 1, 1];
        for r in 2..=k {
            for a in 0..3u8 {
                suffixes[r][a as usize] = (0..3u8)
                    .filter(|&b| !letters_clash(a, b))
                    .map(|b| suffixes[r - 1][b as usize])
                    .sum();
            }
        }

        let mut words = Vec::with_capacity(suffixes[k].iter().sum::<u64>() as usize);
        let mut letters = vec![0u8; k];
        extend(&mut letters, 0, &mut words);
        Ok(WordTable { k, words, suffixes })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = Word> + '_ {
        self.words.iter().copied()
    }

    pub fn unrank(&self, rank: usize) -> Word {
        self.words[rank]
    }

    /// Lexicographic rank, computed from suffix counts in `O(k)`.
    pub fn rank(&self, w: Word) -> usize {
        debug_assert_eq!(w.len(), self.k);
        let mut rank = 0u64;
        let mut prev: Option<u8> = None;
        for idx in 0..self.k {
            let letter = w.letter(idx);
            let remaining = self.k - idx;
            for smaller in 0..letter {
                if prev.map_or(true, |p| !letters_clash(p, smaller)) {
                    rank += self.suffixes[remaining][smaller as usize];
                }
            }
            prev = Some(letter);
        }
        rank as usize
    }

    /// The gluing matrix `L`: `+inf` on incompatible pairs, the overlap loss
    /// otherwise.
    pub fn build_l(&self) -> TropicalMatrix {
        let dim = self.len();
        let mut l = TropicalMatrix::infinite(dim);
        for (r, &w) in self.words.iter().enumerate() {
            for (c, &w2) in self.words.iter().enumerate() {
                if compatible_unchecked(w, w2) {
                    l.set(r, c, overlap_loss_unchecked(w, w2));
                }
            }
        }
        l
    }
}

fn extend(letters: &mut [u8], idx: usize, out: &mut Vec<Word>) {
    if idx == letters.len() {
        out.push(Word::from_letters(letters).expect("generated words are valid"));
        return;
    }
    for a in 0..3u8 {
        if idx > 0 && letters_clash(letters[idx - 1], a) {
            continue;
        }
        letters[idx] = a;
        extend(letters, idx + 1, out);
    }
}

pub fn enumerate(k: usize) -> Result<WordTable> {
    WordTable::new(k)
}

fn same_len(w: Word, w2: Word) -> Result<()> {
    if w.len() != w2.len() {
        return Err(Error::input(format!(
            "word lengths differ: {} vs {}",
            w.len(),
            w2.len()
        )));
    }
    Ok(())
}

/// Two interface words can face each other across a gluing seam iff their
/// letters sum to at most 2 at every position except the last, which is
/// adjacent to the grid interior and may be dominated from there.
pub fn compatible(w: Word, w2: Word) -> Result<bool> {
    same_len(w, w2)?;
    Ok(compatible_unchecked(w, w2))
}

#[inline]
fn compatible_unchecked(w: Word, w2: Word) -> bool {
    (0..w.len() - 1).all(|idx| w.letter(idx) + w2.letter(idx) <= 2)
}

/// Cells dominated from both sides of a seam:
/// `|{i : w[i] != 2, w2[i] = 0}| + |{i : w2[i] != 2, w[i] = 0}|`.
pub fn overlap_loss(w: Word, w2: Word) -> Result<u32> {
    same_len(w, w2)?;
    Ok(overlap_loss_unchecked(w, w2))
}

#[inline]
fn overlap_loss_unchecked(w: Word, w2: Word) -> u32 {
    (0..w.len())
        .map(|idx| {
            let (a, b) = (w.letter(idx), w2.letter(idx));
            (a != UNDOMINATED && b == IN_SET) as u32 + (b != UNDOMINATED && a == IN_SET) as u32
        })
        .sum()
}

/// `build_L` for a table.
pub fn build_l(table: &WordTable) -> TropicalMatrix {
    table.build_l()
}
