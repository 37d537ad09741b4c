//! Dimension names and dimension sets.
//!
//! A case carries up to four nominal variables, named `w`, `x`, `y` and `z`
//! by position. Subsets of dimensions are small bitmasks; iteration is always
//! in ascending dimension order, which fixes the summation order of every
//! derived quantity.

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Maximum number of variables per case.
pub const MAX_ARITY: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    W,
    X,
    Y,
    Z,
}

impl Dim {
    pub const ALL: [Dim; MAX_ARITY] = [Dim::W, Dim::X, Dim::Y, Dim::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Dim> {
        Dim::ALL.get(index).copied()
    }

    /// Upper-case display letter.
    pub fn letter(self) -> char {
        ['W', 'X', 'Y', 'Z'][self.index()]
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Dim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "w" | "W" => Ok(Dim::W),
            "x" | "X" => Ok(Dim::X),
            "y" | "Y" => Ok(Dim::Y),
            "z" | "Z" => Ok(Dim::Z),
            other => Err(Error::UnknownDimension(other.to_string())),
        }
    }
}

/// Number of variables per case: three (`w,x,y`) or four (`w,x,y,z`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(into = "usize")]
pub enum Arity {
    Three,
    Four,
}

impl Arity {
    pub fn get(self) -> usize {
        match self {
            Arity::Three => 3,
            Arity::Four => 4,
        }
    }

    pub fn from_len(len: usize) -> Option<Arity> {
        match len {
            3 => Some(Arity::Three),
            4 => Some(Arity::Four),
            _ => None,
        }
    }

    /// The set of all dimensions present at this arity.
    pub fn dims(self) -> DimSet {
        DimSet::first(self.get())
    }
}

impl From<Arity> for usize {
    fn from(a: Arity) -> usize {
        a.get()
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// A set of dimensions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimSet(u8);

impl DimSet {
    pub const EMPTY: DimSet = DimSet(0);
    pub const FULL: DimSet = DimSet(0b1111);

    pub fn of(dims: &[Dim]) -> DimSet {
        dims.iter().copied().collect()
    }

    /// The first `n` dimensions.
    pub fn first(n: usize) -> DimSet {
        debug_assert!(n <= MAX_ARITY);
        DimSet(((1u16 << n) - 1) as u8)
    }

    pub fn from_bits(bits: u8) -> Option<DimSet> {
        (bits <= Self::FULL.0).then_some(DimSet(bits))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, dim: Dim) -> bool {
        self.0 & (1 << dim.index()) != 0
    }

    pub fn with(self, dim: Dim) -> DimSet {
        DimSet(self.0 | (1 << dim.index()))
    }

    pub fn without(self, dim: Dim) -> DimSet {
        DimSet(self.0 & !(1 << dim.index()))
    }

    pub fn is_subset_of(self, other: DimSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: DimSet) -> DimSet {
        DimSet(self.0 | other.0)
    }

    /// Dimensions in ascending order.
    pub fn iter(self) -> impl Iterator<Item = Dim> {
        Dim::ALL.into_iter().filter(move |d| self.contains(*d))
    }

    /// Every non-empty subset, in ascending bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = DimSet> {
        let bits = self.0;
        (1..=bits).filter(move |s| s & !bits == 0).map(DimSet)
    }

    /// Checks that the set is non-empty and fits within `arity` variables.
    pub fn check_in_range(self, arity: Arity) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptySubset);
        }
        match self.iter().find(|d| d.index() >= arity.get()) {
            Some(dim) => Err(Error::DimensionOutOfRange {
                dim,
                arity: arity.get(),
            }),
            None => Ok(()),
        }
    }

    /// The fifteen non-empty subsets of `WXYZ`, by size and then
    /// lexicographically: `W, X, Y, Z, WX, WY, ..., XYZ, WXYZ`.
    pub fn report_order() -> &'static [DimSet; 15] {
        &REPORT_ORDER
    }
}

const REPORT_ORDER: [DimSet; 15] = [
    DimSet(0b0001),
    DimSet(0b0010),
    DimSet(0b0100),
    DimSet(0b1000),
    DimSet(0b0011),
    DimSet(0b0101),
    DimSet(0b1001),
    DimSet(0b0110),
    DimSet(0b1010),
    DimSet(0b1100),
    DimSet(0b0111),
    DimSet(0b1011),
    DimSet(0b1101),
    DimSet(0b1110),
    DimSet(0b1111),
];

impl FromIterator<Dim> for DimSet {
    fn from_iter<I: IntoIterator<Item = Dim>>(iter: I) -> Self {
        iter.into_iter().fold(DimSet::EMPTY, DimSet::with)
    }
}

impl fmt::Display for DimSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.iter() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Parses `"wxz"`, `"W,X,Z"` or `"w x z"`. Repeated letters are rejected.
impl FromStr for DimSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut set = DimSet::EMPTY;
        for c in s.chars().filter(|c| !c.is_whitespace() && *c != ',') {
            let dim: Dim = c.to_string().parse()?;
            if set.contains(dim) {
                return Err(Error::DimensionsNotDistinct);
            }
            set = set.with(dim);
        }
        if set.is_empty() {
            return Err(Error::EmptySubset);
        }
        Ok(set)
    }
}
