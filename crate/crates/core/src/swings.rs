//! Swing algebra: node keys, swing computation and the extension filters.
//!
//! For a prefix `P` whose leftmost embedding ends at `x_end` in X and `y_end`
//! in Y, the top swing is the smallest X horizon past `x_end` at which `P`
//! stops being maximal against `Y[..=y_end]`; the bottom swing is the
//! symmetric Y horizon. Both are occurrences of the last character of `P`, or
//! [`Pos::INF`] when no horizon breaks maximality.
//!
//! Extensions are filtered by two tests evaluated at the leftmost occurrence
//! pair `(i, j)` of the appended character:
//!
//! * [`IndexedPair::rectangle_test`]: the existing prefix must stay maximal up
//!   to `(i, j)`, i.e. `i <= top` and `j <= bottom`.
//! * [`IndexedPair::junction_test`]: no character may fit between the prefix
//!   and the new character in both strings at once.
//!
//! Each test only rejects when an explicit one-character insertion witness
//! exists, so no genuine MCS prefix is ever lost. Prefixes that pass both
//! tests keep exact swings (the junction test rules out insertions that need
//! both horizons to grow), but they may still be dead ends; the builder prunes
//! those afterwards.

use core::fmt;

use alloc::vec::Vec;

use crate::occidx::OccurrenceIndex;
use crate::pos::Pos;

/// Node key: leftmost-embedding ends of a prefix in X and Y plus its swings.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quadruple {
    pub x_end: Pos,
    pub y_end: Pos,
    /// Top swing, a position in X.
    pub top: Pos,
    /// Bottom swing, a position in Y.
    pub bottom: Pos,
}

impl Quadruple {
    /// Key of the empty prefix.
    pub const SOURCE: Quadruple = Quadruple {
        x_end: Pos::BEFORE,
        y_end: Pos::BEFORE,
        top: Pos::INF,
        bottom: Pos::INF,
    };

    pub fn new(x_end: Pos, y_end: Pos, top: Pos, bottom: Pos) -> Self {
        Quadruple { x_end, y_end, top, bottom }
    }

    /// Builds a key from signed positions (`-1` before the string, `-2` infinity).
    pub fn from_signed(l: i64, m: i64, t: i64, b: i64) -> Option<Self> {
        Some(Quadruple {
            x_end: Pos::from_signed(l)?,
            y_end: Pos::from_signed(m)?,
            top: Pos::from_signed(t)?,
            bottom: Pos::from_signed(b)?,
        })
    }

    pub fn ends(&self) -> (Pos, Pos) {
        (self.x_end, self.y_end)
    }

    pub fn swings(&self) -> (Pos, Pos) {
        (self.top, self.bottom)
    }

    /// Both swings unbounded: no single-string extension breaks maximality.
    pub fn is_unbounded(&self) -> bool {
        self.top.is_inf() && self.bottom.is_inf()
    }
}

impl fmt::Debug for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{},{},{}>", self.x_end, self.y_end, self.top, self.bottom)
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An accepted extension of a node by character `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CandidateExtension {
    pub c: u8,
    /// Leftmost occurrence of `c` in X after the parent.
    pub i: Pos,
    /// Leftmost occurrence of `c` in Y after the parent.
    pub j: Pos,
    pub child: Quadruple,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SwingError {
    #[error("character {0:#04x} does not occur in both strings")]
    NotCommon(u8),
    #[error("character {c:#04x} does not occur after {parent}")]
    NoOccurrenceAfter { c: u8, parent: Quadruple },
}

/// Occurrence indexes of both input strings plus their common alphabet.
#[derive(Clone, Debug)]
pub struct IndexedPair {
    x: OccurrenceIndex,
    y: OccurrenceIndex,
    common: Vec<u8>,
}

impl IndexedPair {
    pub fn new(x: &[u8], y: &[u8]) -> Self {
        let x = OccurrenceIndex::new(x);
        let y = OccurrenceIndex::new(y);
        let common = x.alphabet().iter().copied().filter(|&c| y.contains(c)).collect();
        IndexedPair { x, y, common }
    }

    pub fn x(&self) -> &OccurrenceIndex {
        &self.x
    }

    pub fn y(&self) -> &OccurrenceIndex {
        &self.y
    }

    /// Bytes occurring in both strings, ascending.
    pub fn common_alphabet(&self) -> &[u8] {
        &self.common
    }

    /// Swings of the single-character prefix `c`, taken at its first
    /// occurrences in X and Y.
    pub fn base_swing(&self, c: u8) -> Result<(Pos, Pos), SwingError> {
        let l = self.x.next(c, Pos::BEFORE);
        let m = self.y.next(c, Pos::BEFORE);
        if l.is_inf() || m.is_inf() {
            return Err(SwingError::NotCommon(c));
        }
        Ok(self.personal_swing(Pos::BEFORE, Pos::BEFORE, l, m))
    }

    /// Swing contribution of the newest character, matched at `(l, m)`, with
    /// the previous character matched at `(prev_l, prev_m)`.
    ///
    /// The top part is the first occurrence of `X[l]` after the earliest
    /// X-occurrence (past `l`) of any character in `Y(prev_m, m)`. The bottom
    /// part is symmetric. Assumes the pair passed [`Self::junction_test`],
    /// which guarantees those characters do not occur in `X(prev_l, l)`.
    pub fn personal_swing(&self, prev_l: Pos, prev_m: Pos, l: Pos, m: Pos) -> (Pos, Pos) {
        assert!(prev_l < l && prev_m < m, "personal_swing: positions must advance");
        let c = self.x.at(l);
        assert_eq!(c, self.y.at(m), "personal_swing: X[l] != Y[m]");

        let mut x_reach = Pos::INF;
        let mut y_reach = Pos::INF;
        for &d in &self.common {
            if self.y.occurs_between(d, prev_m, m) {
                x_reach = x_reach.min(self.x.next(d, l));
            }
            if self.x.occurs_between(d, prev_l, l) {
                y_reach = y_reach.min(self.y.next(d, m));
            }
        }
        (self.x.next(c, x_reach), self.y.next(c, y_reach))
    }

    /// Key of `P·c` given the key of `P`.
    pub fn extend_quadruple(&self, parent: &Quadruple, c: u8) -> Result<Quadruple, SwingError> {
        let i = self.x.next(c, parent.x_end);
        let j = self.y.next(c, parent.y_end);
        if i.is_inf() || j.is_inf() {
            return Err(SwingError::NoOccurrenceAfter { c, parent: *parent });
        }
        Ok(self.child_at(parent, c, i, j))
    }

    fn child_at(&self, parent: &Quadruple, c: u8, i: Pos, j: Pos) -> Quadruple {
        let (top, bottom) = self.personal_swing(parent.x_end, parent.y_end, i, j);
        Quadruple {
            x_end: i,
            y_end: j,
            top: top.min(self.x.next(c, parent.top)),
            bottom: bottom.min(self.y.next(c, parent.bottom)),
        }
    }

    /// Whether the parent prefix stays maximal within `X[..i]`, `Y[..j]`
    /// according to its swings.
    #[inline]
    pub fn rectangle_test(parent: &Quadruple, i: Pos, j: Pos) -> bool {
        i <= parent.top && j <= parent.bottom
    }

    /// Whether no character fits strictly between the parent's ends and
    /// `(i, j)` in both strings simultaneously.
    pub fn junction_test(&self, parent: &Quadruple, i: Pos, j: Pos) -> bool {
        !self.common.iter().any(|&d| {
            self.x.occurs_between(d, parent.x_end, i) && self.y.occurs_between(d, parent.y_end, j)
        })
    }

    /// Leftmost occurrence pairs `(c, i, j)` of every character common to
    /// both strings after the parent's ends, by ascending `c`.
    pub fn candidates<'a>(&'a self, parent: &'a Quadruple) -> impl Iterator<Item = (u8, Pos, Pos)> + 'a {
        self.common.iter().filter_map(move |&c| {
            let i = self.x.next(c, parent.x_end);
            let j = self.y.next(c, parent.y_end);
            (!i.is_inf() && !j.is_inf()).then_some((c, i, j))
        })
    }

    /// Candidates passing both filters, with their child keys, by ascending `c`.
    pub fn extensions<'a>(&'a self, parent: &'a Quadruple) -> impl Iterator<Item = CandidateExtension> + 'a {
        self.candidates(parent)
            .filter(move |&(_, i, j)| Self::rectangle_test(parent, i, j) && self.junction_test(parent, i, j))
            .map(move |(c, i, j)| CandidateExtension {
                c,
                i,
                j,
                child: self.child_at(parent, c, i, j),
            })
    }

    /// Folds [`Self::extend_quadruple`] along `prefix` from the source.
    pub fn quadruple_of(&self, prefix: &[u8]) -> Result<Quadruple, SwingError> {
        prefix
            .iter()
            .try_fold(Quadruple::SOURCE, |q, &c| self.extend_quadruple(&q, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: usize) -> Pos {
        Pos::at(i)
    }

    fn q(l: i64, m: i64, t: i64, b: i64) -> Quadruple {
        Quadruple::from_signed(l, m, t, b).unwrap()
    }

    const INF: i64 = -2;

    #[test]
    fn base_swing_examples() {
        let pair = IndexedPair::new(b"TATCGACTC", b"TGACGCTAC");
        assert_eq!(pair.base_swing(b'T').unwrap(), (Pos::INF, Pos::INF));

        let pair = IndexedPair::new(b"TCACAG", b"TACGAT");
        assert_eq!(pair.base_swing(b'T').unwrap(), (Pos::INF, Pos::INF));
        assert_eq!(pair.base_swing(b'A').unwrap(), (Pos::INF, p(4)));
        assert_eq!(pair.base_swing(b'Z'), Err(SwingError::NotCommon(b'Z')));
    }

    #[test]
    fn personal_swing_examples() {
        let pair = IndexedPair::new(b"TCACAG", b"TACGAT");
        assert_eq!(pair.personal_swing(p(0), p(0), p(1), p(2)).0, p(3));
        assert_eq!(pair.personal_swing(p(1), p(2), p(2), p(4)).0, Pos::INF);
        // adjacent on both sides: nothing can be inserted
        assert_eq!(pair.personal_swing(p(1), p(0), p(2), p(1)), (Pos::INF, Pos::INF));
    }

    #[test]
    #[should_panic(expected = "advance")]
    fn personal_swing_rejects_non_advancing() {
        let pair = IndexedPair::new(b"TCACAG", b"TACGAT");
        pair.personal_swing(p(1), p(2), p(1), p(4));
    }

    #[test]
    fn extend_examples() {
        let pair = IndexedPair::new(b"TATCGACTC", b"TGACGCTAC");
        assert_eq!(pair.quadruple_of(b"TAC").unwrap(), q(3, 3, 6, 8));

        let pair = IndexedPair::new(b"TCACAGATG", b"ACTCTGGTAG");
        assert_eq!(pair.quadruple_of(b"TCG").unwrap(), q(5, 5, 8, 9));
        assert_eq!(pair.quadruple_of(b"ACG").unwrap(), q(5, 5, 8, 9));

        let pair = IndexedPair::new(b"TCACAG", b"TACGAT");
        let t = pair.extend_quadruple(&Quadruple::SOURCE, b'T').unwrap();
        assert_eq!(t, q(0, 0, INF, INF));
        assert_eq!(pair.extend_quadruple(&t, b'C').unwrap(), q(1, 2, 3, INF));
        assert_eq!(pair.quadruple_of(b"TCA").unwrap(), q(2, 4, 4, INF));
        assert!(matches!(
            pair.extend_quadruple(&t, b'T'),
            Err(SwingError::NoOccurrenceAfter { c: b'T', .. })
        ));
    }

    #[test]
    fn rectangle_examples() {
        assert!(!IndexedPair::rectangle_test(&q(1, 2, 3, INF), p(5), p(3)));
        assert!(IndexedPair::rectangle_test(&Quadruple::SOURCE, p(100), p(7)));
        assert!(IndexedPair::rectangle_test(&q(3, 3, 6, 8), p(6), p(4)));
        assert!(!IndexedPair::rectangle_test(&q(3, 3, 6, 8), p(7), p(4)));
    }

    #[test]
    fn junction_examples() {
        let pair = IndexedPair::new(b"ABC", b"ABC");
        assert!(!pair.junction_test(&q(0, 0, INF, INF), p(2), p(2)));

        let pair = IndexedPair::new(b"TCACAG", b"GTACTA");
        assert!(!pair.junction_test(&Quadruple::SOURCE, p(1), p(3)));
        assert!(pair.junction_test(&Quadruple::SOURCE, p(5), p(0)));
    }

    #[test]
    fn fig2_right_filters_are_only_necessary() {
        // A and T are the valid extensions; G passes both filters but leads
        // nowhere and is removed by pruning
        let pair = IndexedPair::new(b"TCACAGATG", b"ACTCTGGTAG");
        let node = pair.quadruple_of(b"TCG").unwrap();
        let chars: Vec<u8> = pair.extensions(&node).map(|e| e.c).collect();
        assert_eq!(chars, b"AGT");
    }
}
