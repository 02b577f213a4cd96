//! Positions in a string, extended with a "before the string" value and an
//! absorbing "no such position" value.

use core::fmt;

/// A position in one of the input strings.
///
/// Three kinds of value exist: [`Pos::BEFORE`] (the virtual position `-1`
/// preceding the string), ordinary 0-based positions, and [`Pos::INF`], which
/// compares greater than every position and stands for "absent".
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos(u32);

impl Pos {
    /// The virtual position `-1`.
    pub const BEFORE: Pos = Pos(0);
    /// Absent / unbounded.
    pub const INF: Pos = Pos(u32::MAX);

    /// Largest string length a position can address.
    pub const MAX_LEN: usize = (u32::MAX - 2) as usize;

    /// Ordinary position `i`.
    #[inline]
    pub fn at(i: usize) -> Pos {
        assert!(i < Self::MAX_LEN, "position {i} out of range");
        Pos(i as u32 + 1)
    }

    /// Builds a position from the signed encoding used in files and by the
    /// signed notation: `-1` is [`Pos::BEFORE`], `-2` is [`Pos::INF`].
    pub fn from_signed(v: i64) -> Option<Pos> {
        match v {
            -2 => Some(Pos::INF),
            -1 => Some(Pos::BEFORE),
            v if v >= 0 && (v as u64) < Self::MAX_LEN as u64 => Some(Pos::at(v as usize)),
            _ => None,
        }
    }

    /// Inverse of [`Pos::from_signed`].
    pub fn to_signed(self) -> i64 {
        match self {
            Pos::INF => -2,
            Pos(raw) => raw as i64 - 1,
        }
    }

    /// The 0-based index, for ordinary positions.
    #[inline]
    pub fn index(self) -> Option<usize> {
        match self {
            Pos::BEFORE | Pos::INF => None,
            Pos(raw) => Some(raw as usize - 1),
        }
    }

    #[inline]
    pub fn is_inf(self) -> bool {
        self == Pos::INF
    }

    /// Row in a successor table: `BEFORE` is row 0, position `i` is row `i + 1`.
    #[inline]
    pub(crate) fn raw(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn from_raw(raw: u32) -> Pos {
        Pos(raw)
    }
}

impl fmt::Debug for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Pos::INF => f.write_str("inf"),
            p => write!(f, "{}", p.to_signed()),
        }
    }
}
