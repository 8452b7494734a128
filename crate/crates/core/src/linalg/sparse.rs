use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use super::Rational;

/// Closed integer range `min..=max` of basis indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub min: i64,
    pub max: i64,
}

impl Window {
    /// Panics if `min > max`; windows are never empty.
    pub fn new(min: i64, max: i64) -> Self {
        assert!(min <= max, "empty window {min}:{max}");
        Window { min, max }
    }

    pub fn len(&self) -> usize {
        (self.max - self.min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, index: i64) -> bool {
        self.min <= index && index <= self.max
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        self.min <= other.min && other.max <= self.max
    }

    pub fn hull(&self, other: &Window) -> Window {
        Window::new(self.min.min(other.min), self.max.max(other.max))
    }

    pub fn indices(&self) -> impl DoubleEndedIterator<Item = i64> + Clone {
        self.min..=self.max
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.min, self.max)
    }
}

/// Finitely supported map from integer indices to nonzero rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVector {
    entries: BTreeMap<i64, Rational>,
}

impl SparseVector {
    pub fn new() -> Self {
        SparseVector::default()
    }

    pub fn unit(index: i64) -> Self {
        let mut v = SparseVector::new();
        v.entries.insert(index, Rational::one());
        v
    }

    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut v = SparseVector::new();
        for (i, c) in entries {
            v.add_term(i, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: i64) -> Rational {
        self.entries.get(&index).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, i64, Rational> {
        self.entries.iter()
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    /// Smallest index carrying a nonzero value.
    pub fn leading_index(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    /// Smallest window containing the support, `None` for the zero vector.
    pub fn support_window(&self) -> Option<Window> {
        Some(Window::new(self.leading_index()?, self.max_index()?))
    }

    pub fn supported_in(&self, window: &Window) -> bool {
        self.entries.keys().all(|&i| window.contains(i))
    }

    /// Adds `c` at `index`, dropping the entry if it cancels.
    pub fn add_term(&mut self, index: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(index) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += factor * other`
    pub fn axpy(&mut self, factor: &Rational, other: &SparseVector) {
        if factor.is_zero() {
            return;
        }
        for (&i, c) in &other.entries {
            self.add_term(i, &(factor * c));
        }
    }

    pub fn scaled(&self, factor: &Rational) -> SparseVector {
        if factor.is_zero() {
            return SparseVector::new();
        }
        SparseVector {
            entries: self.entries.iter().map(|(&i, c)| (i, c * factor)).collect(),
        }
    }

    pub fn add(&self, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.axpy(&Rational::one(), other);
        out
    }

    pub fn sub(&self, other: &SparseVector) -> SparseVector {
        let mut out = self.clone();
        out.axpy(&-Rational::one(), other);
        out
    }

    pub fn neg(&self) -> SparseVector {
        self.scaled(&-Rational::one())
    }

    pub fn dot(&self, other: &SparseVector) -> Rational {
        let (small, large) = if self.nnz() <= other.nnz() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .entries
            .iter()
            .filter_map(|(i, a)| large.entries.get(i).map(|b| a * b))
            .sum()
    }

    /// Keeps only the entries inside `window`.
    pub fn restricted(&self, window: &Window) -> SparseVector {
        SparseVector {
            entries: self
                .entries
                .range(window.min..=window.max)
                .map(|(&i, c)| (i, c.clone()))
                .collect(),
        }
    }
}

impl fmt::Debug for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

impl FromIterator<(i64, Rational)> for SparseVector {
    fn from_iter<T: IntoIterator<Item = (i64, Rational)>>(iter: T) -> Self {
        SparseVector::from_entries(iter)
    }
}
