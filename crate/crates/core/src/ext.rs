//! Values extended by a point at infinity.
//!
//! `Ext<i64>` is the codomain of the z-adic valuation, `Ext<BigRational>`
//! the tropical semiring of `(min, +)` over the rationals.

use std::fmt;
use std::ops::{Add, Sub};

use num_rational::BigRational;

/// `T ∪ {∞}`, ordered with `∞` above every finite value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext<T> {
    Finite(T),
    Infinity,
}

/// An element of `ℚ ∪ {∞}`.
pub type Tropical = Ext<BigRational>;

impl<T> Ext<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    pub fn finite(self) -> Option<T> {
        match self {
            Ext::Finite(v) => Some(v),
            Ext::Infinity => None,
        }
    }

    pub fn as_finite(&self) -> Option<&T> {
        match self {
            Ext::Finite(v) => Some(v),
            Ext::Infinity => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Ext<U> {
        match self {
            Ext::Finite(v) => Ext::Finite(f(v)),
            Ext::Infinity => Ext::Infinity,
        }
    }
}

impl<T> From<Option<T>> for Ext<T> {
    fn from(v: Option<T>) -> Self {
        v.map_or(Ext::Infinity, Ext::Finite)
    }
}

impl<T: Add<Output = T>> Add for Ext<T> {
    type Output = Ext<T>;

    /// Tropical multiplication: `∞` absorbs.
    fn add(self, rhs: Self) -> Self::Output {
        match (self, rhs) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a + b),
            _ => Ext::Infinity,
        }
    }
}

impl<T: Add<Output = T>> Add<T> for Ext<T> {
    type Output = Ext<T>;

    fn add(self, rhs: T) -> Self::Output {
        self.map(|a| a + rhs)
    }
}

impl<T: Sub<Output = T>> Sub<T> for Ext<T> {
    type Output = Ext<T>;

    fn sub(self, rhs: T) -> Self::Output {
        self.map(|a| a - rhs)
    }
}

impl<T: fmt::Display> fmt::Display for Ext<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Finite(v) => v.fmt(f),
            Ext::Infinity => f.write_str("inf"),
        }
    }
}
