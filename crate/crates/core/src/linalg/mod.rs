//! Exact linear algebra over the rationals: scalars, sparse vectors indexed
//! by integers, subspaces in canonical form, and linear-system solving.
//!
//! Every routine works on an explicit closed index window. Results are
//! stable under enlarging the window once it covers every relevant support.

mod rational;
mod sparse;
mod subspace;

pub use rational::Rational;
pub use sparse::{SparseVector, Window};
pub use subspace::{subspace_intersection, Subspace};

pub(crate) use subspace::Echelon;

/// Outcome of [`solve_linear_system`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(SparseVector),
    Parametric { particular: SparseVector, kernel: Subspace },
    Inconsistent,
}

/// `{v supported in window : <r, v> = 0 for every row r}` in canonical form.
///
/// Row entries outside the window multiply coordinates that are pinned to
/// zero, so they are ignored.
pub fn kernel_basis(rows: &[SparseVector], window: Window) -> Subspace {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(&r.restricted(&window));
        if ech.rank() == window.len() {
            break;
        }
    }
    let pivots: std::collections::BTreeSet<i64> = ech.pivots().collect();
    let generators: Vec<SparseVector> = window
        .indices()
        .filter(|f| !pivots.contains(f))
        .map(|f| {
            let mut k = SparseVector::unit(f);
            for (p, row) in ech.rows() {
                let c = row.get(f);
                if !c.is_zero() {
                    k.add_term(p, &-c);
                }
            }
            k
        })
        .collect();
    Subspace::span(window, &generators)
}

/// Solves `<rows[i], v> = rhs[i]` for `v` supported in `window`.
///
/// Panics if `rows` and `rhs` differ in length.
pub fn solve_linear_system(rows: &[SparseVector], rhs: &[Rational], window: Window) -> Solution {
    assert_eq!(rows.len(), rhs.len(), "row/rhs length mismatch");
    // The right-hand side rides along in a column past the window so that
    // pivots never land on it unless the system is inconsistent.
    let aug = window.max + 1;
    let mut ech = Echelon::new();
    for (r, b) in rows.iter().zip(rhs) {
        let mut row = r.restricted(&window);
        row.add_term(aug, b);
        ech.insert(&row);
    }
    if ech.pivots().any(|p| p == aug) {
        return Solution::Inconsistent;
    }
    let particular: SparseVector = ech.rows().map(|(p, row)| (p, row.get(aug))).collect();
    let kernel = kernel_basis(rows, window);
    if kernel.is_zero() {
        Solution::Unique(particular)
    } else {
        Solution::Parametric { particular, kernel }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(entries: &[(i64, i64)]) -> SparseVector {
        SparseVector::from_entries(entries.iter().map(|&(i, c)| (i, Rational::from(c))))
    }

    #[test]
    fn single_equation_depends_on_window() {
        let rows = [v(&[(0, 1)])];
        let rhs = [Rational::zero()];
        assert_eq!(
            solve_linear_system(&rows, &rhs, Window::new(0, 0)),
            Solution::Unique(SparseVector::new())
        );
        match solve_linear_system(&rows, &rhs, Window::new(0, 1)) {
            Solution::Parametric { particular, kernel } => {
                assert!(particular.is_zero());
                assert_eq!(kernel, Subspace::span(Window::new(0, 1), &[SparseVector::unit(1)]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_system_is_full_space() {
        let w = Window::new(0, 3);
        match solve_linear_system(&[], &[], w) {
            Solution::Parametric { kernel, .. } => assert_eq!(kernel, Subspace::full(w)),
            other => panic!("{other:?}"),
        }
        assert_eq!(kernel_basis(&[], w).dim(), 4);
    }

    #[test]
    fn inconsistent_system() {
        let rows = [v(&[(0, 1), (1, 1)]), v(&[(0, 2), (1, 2)])];
        let rhs = [Rational::from(1), Rational::from(3)];
        assert_eq!(
            solve_linear_system(&rows, &rhs, Window::new(0, 1)),
            Solution::Inconsistent
        );
    }

    #[test]
    fn unique_solution_satisfies_rows() {
        let rows = [v(&[(0, 2), (1, 1)]), v(&[(0, 1), (1, -1)])];
        let rhs = [Rational::from(3), Rational::new(1, 2)];
        let Solution::Unique(x) = solve_linear_system(&rows, &rhs, Window::new(0, 1)) else {
            panic!()
        };
        for (r, b) in rows.iter().zip(&rhs) {
            assert_eq!(&r.dot(&x), b);
        }
    }

    #[test]
    fn spanning_rows_leave_zero_kernel() {
        let w = Window::new(-1, 1);
        let rows = [
            v(&[(-1, 1), (0, 1)]),
            v(&[(0, 1), (1, 1)]),
            v(&[(-1, 1), (1, -1)]),
            v(&[(1, 5)]),
        ];
        assert!(kernel_basis(&rows, w).is_zero());
    }

    #[test]
    fn centralizer_rows_of_e0() {
        // [a, e_0] = sum_j -j a_j e_j, one row per output index j.
        let w = Window::new(-10, 10);
        let rows: Vec<SparseVector> = w.indices().map(|j| v(&[(j, -j)])).collect();
        assert_eq!(kernel_basis(&rows, w), Subspace::span(w, &[SparseVector::unit(0)]));
    }

    fn system() -> impl Strategy<Value = Vec<Vec<(i64, i64)>>> {
        prop::collection::vec(prop::collection::vec((0i64..8, -4i64..5), 0..5), 0..7)
    }

    fn to_rows(raw: &[Vec<(i64, i64)>]) -> Vec<SparseVector> {
        raw.iter().map(|r| v(r)).collect()
    }

    proptest! {
        #[test]
        fn kernel_annihilates_rows_and_rank_nullity(raw in system()) {
            let w = Window::new(0, 7);
            let rows = to_rows(&raw);
            let k = kernel_basis(&rows, w);
            for b in k.basis() {
                for r in &rows {
                    prop_assert!(r.dot(b).is_zero());
                }
            }
            let rank = Subspace::span(w, &rows).dim();
            prop_assert_eq!(k.dim() + rank, w.len());
        }

        #[test]
        fn intersection_bounds(ra in system(), rb in system()) {
            let w = Window::new(0, 7);
            let a = kernel_basis(&to_rows(&ra), w);
            let b = kernel_basis(&to_rows(&rb), w);
            let c = subspace_intersection(&a, &b);
            prop_assert!(c.is_subspace_of(&a));
            prop_assert!(c.is_subspace_of(&b));
            prop_assert!(c.dim() + w.len() >= a.dim() + b.dim());
        }

        #[test]
        fn solutions_satisfy_system(raw in system(), rhs in prop::collection::vec(-3i64..4, 7)) {
            let w = Window::new(0, 7);
            let rows = to_rows(&raw);
            let rhs: Vec<Rational> = rhs[..rows.len()].iter().map(|&b| b.into()).collect();
            match solve_linear_system(&rows, &rhs, w) {
                Solution::Unique(x) | Solution::Parametric { particular: x, .. } => {
                    for (r, b) in rows.iter().zip(&rhs) {
                        prop_assert_eq!(&r.dot(&x), b);
                    }
                }
                Solution::Inconsistent => {
                    // Some combination of rows must vanish while its rhs does not.
                    let mut ech = Echelon::new();
                    for (r, b) in rows.iter().zip(&rhs) {
                        let mut row = r.clone();
                        row.add_term(w.max + 1, b);
                        ech.insert(&row);
                    }
                    prop_assert!(ech.pivots().any(|p| p == w.max + 1));
                }
            }
        }
    }
}
