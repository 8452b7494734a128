use std::collections::BTreeMap;

use super::{Rational, SparseVector, Window};

/// Incremental reduced row-echelon form keyed by pivot index.
///
/// Pivots are the smallest index of each row, rows are monic at their pivot,
/// and no row carries a nonzero entry in another row's pivot column.
#[derive(Clone, Debug, Default)]
pub(crate) struct Echelon {
    rows: BTreeMap<i64, SparseVector>,
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Echelon::default()
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn pivots(&self) -> impl Iterator<Item = i64> + '_ {
        self.rows.keys().copied()
    }

    pub(crate) fn rows(&self) -> impl Iterator<Item = (i64, &SparseVector)> {
        self.rows.iter().map(|(&p, r)| (p, r))
    }

    /// Eliminates every pivot column from `v`.
    pub(crate) fn reduce(&self, v: &SparseVector) -> SparseVector {
        let mut out = v.clone();
        let hits: Vec<(i64, Rational)> = v
            .iter()
            .filter(|(i, _)| self.rows.contains_key(i))
            .map(|(&i, c)| (i, c.clone()))
            .collect();
        for (p, c) in hits {
            out.axpy(&-c, &self.rows[&p]);
        }
        out
    }

    /// Adds `v` to the row space. Returns `true` if the rank grew.
    pub(crate) fn insert(&mut self, v: &SparseVector) -> bool {
        let reduced = self.reduce(v);
        let Some(pivot) = reduced.leading_index() else {
            return false;
        };
        let inv = reduced.get(pivot).recip().expect("leading entry is nonzero");
        let row = reduced.scaled(&inv);
        for other in self.rows.values_mut() {
            let c = other.get(pivot);
            if !c.is_zero() {
                other.axpy(&-c, &row);
            }
        }
        self.rows.insert(pivot, row);
        true
    }

    pub(crate) fn into_rows(self) -> Vec<SparseVector> {
        self.rows.into_values().collect()
    }
}

/// Linear subspace of the coordinate space over a finite index window,
/// stored as its canonical reduced row-echelon basis. Two subspaces over the
/// same window are equal iff their stored bases are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    window: Window,
    basis: Vec<SparseVector>,
}

impl Subspace {
    pub fn zero(window: Window) -> Self {
        Subspace {
            window,
            basis: Vec::new(),
        }
    }

    pub fn full(window: Window) -> Self {
        Subspace {
            window,
            basis: window.indices().map(SparseVector::unit).collect(),
        }
    }

    /// Span of `vectors`. Panics if a vector leaves `window`.
    pub fn span<'a, I>(window: Window, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVector>,
    {
        let mut ech = Echelon::new();
        for v in vectors {
            assert!(v.supported_in(&window), "vector {v:?} not supported in window {window}");
            ech.insert(v);
        }
        Subspace {
            window,
            basis: ech.into_rows(),
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn basis(&self) -> &[SparseVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        if !v.supported_in(&self.window) {
            return false;
        }
        let mut ech = Echelon::new();
        for b in &self.basis {
            ech.insert(b);
        }
        ech.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    /// The same subspace viewed inside a larger window.
    pub fn with_window(&self, window: Window) -> Subspace {
        assert!(
            window.contains_window(&self.window),
            "window {window} does not contain {}",
            self.window
        );
        Subspace {
            window,
            basis: self.basis.clone(),
        }
    }

    /// Vectors pairing to zero with every basis vector under the standard
    /// dot product on the window.
    pub fn annihilator(&self) -> Subspace {
        super::kernel_basis(&self.basis, self.window)
    }
}

/// Canonical basis of `a ∩ b`, over the hull of the two windows.
pub fn subspace_intersection(a: &Subspace, b: &Subspace) -> Subspace {
    let window = a.window.hull(&b.window);
    let a = a.with_window(window);
    let b = b.with_window(window);
    let constraints: Vec<SparseVector> = a.annihilator().basis.into_iter().chain(b.annihilator().basis).collect();
    super::kernel_basis(&constraints, window)
}
