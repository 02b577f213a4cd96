//! Next-occurrence index over a byte string.

use alloc::vec;
use alloc::vec::Vec;

use crate::pos::Pos;

const ABSENT: u8 = u8::MAX;

/// Constant-time `next(c, from)` queries over one string.
///
/// Backed by a dense successor table with one row per position (plus one for
/// [`Pos::BEFORE`]) and one column per distinct byte of the text, so it takes
/// `O(n·σ)` space.
#[derive(Clone, Debug)]
pub struct OccurrenceIndex {
    text: Vec<u8>,
    alphabet: Vec<u8>,
    slot: [u8; 256],
    positions: Vec<Vec<usize>>,
    // row-major, (len + 1) rows of alphabet.len() raw positions
    table: Vec<u32>,
}

impl OccurrenceIndex {
    /// Indexes `text`. Empty text is fine.
    pub fn new(text: &[u8]) -> Self {
        assert!(text.len() < Pos::MAX_LEN, "text too long to index");

        let mut seen = [false; 256];
        for &c in text {
            seen[c as usize] = true;
        }
        let alphabet: Vec<u8> = (0..=255u8).filter(|&c| seen[c as usize]).collect();
        let mut slot = [ABSENT; 256];
        for (k, &c) in alphabet.iter().enumerate() {
            slot[c as usize] = k as u8;
        }

        let sigma = alphabet.len();
        let mut positions = vec![Vec::new(); sigma];
        for (i, &c) in text.iter().enumerate() {
            positions[slot[c as usize] as usize].push(i);
        }

        let n = text.len();
        let mut table = vec![Pos::INF.raw(); (n + 1) * sigma];
        // row r holds next occurrences strictly after raw position r, i.e. from text[r] on
        for r in (0..n).rev() {
            let (cur, below) = table.split_at_mut((r + 1) * sigma);
            let row = &mut cur[r * sigma..];
            row.copy_from_slice(&below[..sigma]);
            row[slot[text[r] as usize] as usize] = Pos::at(r).raw();
        }

        OccurrenceIndex {
            text: text.to_vec(),
            alphabet,
            slot,
            positions,
            table,
        }
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    /// Distinct bytes of the text, ascending.
    pub fn alphabet(&self) -> &[u8] {
        &self.alphabet
    }

    pub fn contains(&self, c: u8) -> bool {
        self.slot[c as usize] != ABSENT
    }

    /// Sorted positions of `c` in the text.
    pub fn positions(&self, c: u8) -> &[usize] {
        match self.slot[c as usize] {
            ABSENT => &[],
            k => &self.positions[k as usize],
        }
    }

    /// The byte at an ordinary position.
    ///
    /// Panics on [`Pos::BEFORE`], [`Pos::INF`] or an out-of-range position.
    pub fn at(&self, p: Pos) -> u8 {
        let i = p.index().expect("not an ordinary position");
        self.text[i]
    }

    /// Smallest position `p > from` with `text[p] == c`, or [`Pos::INF`].
    ///
    /// `next(c, INF)` is `INF`. Panics if `from` is an ordinary position past
    /// the end of the text.
    #[inline]
    pub fn next(&self, c: u8, from: Pos) -> Pos {
        if from.is_inf() {
            return Pos::INF;
        }
        let row = from.raw() as usize;
        assert!(
            row <= self.text.len(),
            "next: position {from} out of range for length {}",
            self.text.len()
        );
        match self.slot[c as usize] {
            ABSENT => Pos::INF,
            k => Pos::from_raw(self.table[row * self.alphabet.len() + k as usize]),
        }
    }

    /// Whether `c` occurs strictly between `after` and `before`.
    #[inline]
    pub fn occurs_between(&self, c: u8, after: Pos, before: Pos) -> bool {
        self.next(c, after) < before
    }
}
