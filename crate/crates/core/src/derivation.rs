//! Derivations as finite tables.
//!
//! The positive Witt and thin algebras are generated by `e_1` and `e_2`, so a
//! derivation of either is pinned down by the pair `(D(e_1), D(e_2))`. The
//! rest of the table follows from the Leibniz rule along `[e_1, e_k]`, and
//! every other bracket relation becomes a consistency condition on the pair.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{ad_on, bracket, bracket_vectors, Algebra, Element, StructureConstants};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Rational, SparseVector, Subspace, Window};
use crate::map::LinearMapTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeibnizReport {
    Pass { pairs: usize },
    Fail { pair: (i64, i64), residual: Element },
}

impl LeibnizReport {
    pub fn passed(&self) -> bool {
        matches!(self, LeibnizReport::Pass { .. })
    }
}

/// Pairs `i < j` with `i`, `j` and `i + j` in the window and `|i|, |j| <= bound`.
fn leibniz_pairs(algebra: Algebra, window: Window, bound: i64) -> impl Iterator<Item = (i64, i64)> {
    let lo = window.min.max(-bound);
    let hi = window.max.min(bound);
    (lo..=hi)
        .flat_map(move |i| (i + 1..=hi).map(move |j| (i, j)))
        .filter(move |&(i, j)| window.contains(i + j) && algebra.contains_index(i))
}

/// `D([e_i, e_j]) - [D(e_i), e_j] - [e_i, D(e_j)]`.
fn leibniz_residual(d: &LinearMapTable, i: i64, j: i64) -> Result<Element> {
    let alg = d.algebra();
    let (ei, ej) = (Element::basis(alg, i)?, Element::basis(alg, j)?);
    let lhs = d.apply(&bracket(&ei, &ej)?)?;
    let rhs = bracket(d.image(i)?, &ej)?.add(&bracket(&ei, d.image(j)?)?)?;
    lhs.sub(&rhs)
}

/// Checks the Leibniz rule on every basis pair `i < j` with `i`, `j`, `i + j`
/// inside the table's truncation and `|i|, |j| <= degree_bound`, in
/// lexicographic order. Fails with [`Error::TruncationTooSmall`] when the
/// truncation stops short of `degree_bound`.
pub fn leibniz_check(d: &LinearMapTable, degree_bound: i64) -> Result<LeibnizReport> {
    if degree_bound > d.window().max {
        return Err(Error::TruncationTooSmall(format!(
            "depth {degree_bound} exceeds truncation {}",
            d.window()
        )));
    }
    let mut pairs = 0;
    for (i, j) in leibniz_pairs(d.algebra(), d.window(), degree_bound) {
        let residual = leibniz_residual(d, i, j)?;
        pairs += 1;
        if !residual.is_zero() {
            return Ok(LeibnizReport::Fail { pair: (i, j), residual });
        }
    }
    Ok(LeibnizReport::Pass { pairs })
}

/// The bracket relation that failed while extending generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InconsistencyReport {
    /// The relation `[e_i, e_j]` whose Leibniz rule fails.
    pub pair: (i64, i64),
    /// `D([e_i, e_j]) - [D(e_i), e_j] - [e_i, D(e_j)]`.
    pub residual: Element,
}

impl fmt::Display for InconsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.pair;
        write!(f, "relation [e_{i},e_{j}] at e_{}: residual {}", i + j, self.residual)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    Consistent(LinearMapTable),
    Inconsistent(InconsistencyReport),
}

fn check_generated(algebra: Algebra, operation: &'static str) -> Result<()> {
    match algebra {
        Algebra::PositiveWitt | Algebra::Thin => Ok(()),
        other => Err(Error::UnsupportedAlgebra {
            algebra: other,
            operation,
        }),
    }
}

/// Images of `e_1..=e_truncation` forced by the generator images, using
/// `e_{k+1} = [e_1, e_k] / (k - 1)` (positive Witt) or `e_{k+1} = [e_1, e_k]`
/// (thin) for `k >= 2`.
fn propagate(algebra: Algebra, img_e1: &SparseVector, img_e2: &SparseVector, truncation: i64) -> Vec<SparseVector> {
    let e1 = SparseVector::unit(1);
    let mut images = vec![img_e1.clone(), img_e2.clone()];
    for k in 2..truncation {
        let prev = &images[(k - 1) as usize];
        let mut next = bracket_vectors(&algebra, img_e1, &SparseVector::unit(k));
        next.axpy(&Rational::one(), &bracket_vectors(&algebra, &e1, prev));
        if algebra == Algebra::PositiveWitt {
            next = next.scaled(&Rational::new(1, k - 1));
        }
        images.push(next);
    }
    images
}

/// Extends `D(e_1)`, `D(e_2)` to a table on `1..=truncation` and re-checks
/// every bracket relation that fits in the truncation.
pub fn extend_from_generators(
    algebra: Algebra,
    img_e1: &Element,
    img_e2: &Element,
    truncation: i64,
) -> Result<Extension> {
    check_generated(algebra, "extend_from_generators")?;
    if truncation < 3 {
        return Err(Error::Precondition(format!(
            "truncation {truncation} must be at least 3"
        )));
    }
    let (img_e1, img_e2) = (img_e1.embed(algebra)?, img_e2.embed(algebra)?);
    let images = propagate(algebra, img_e1.coeffs(), img_e2.coeffs(), truncation)
        .into_iter()
        .zip(1..)
        .map(|(v, k)| Ok((k, Element::from_vector(algebra, v)?)))
        .collect::<Result<Vec<_>>>()?;
    let table = LinearMapTable::new(algebra, Window::new(1, truncation), images)?;
    Ok(match leibniz_check(&table, truncation)? {
        LeibnizReport::Pass { .. } => Extension::Consistent(table),
        LeibnizReport::Fail { pair, residual } => Extension::Inconsistent(InconsistencyReport { pair, residual }),
    })
}

/// Which generator image a coordinate belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Coefficient of `e_index` in `D(e_1)`.
    E1,
    /// Coefficient of `e_index` in `D(e_2)`.
    E2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coordinate {
    pub generator: Generator,
    pub index: i64,
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.generator {
            Generator::E1 => "alpha",
            Generator::E2 => "beta",
        };
        write!(f, "{name}_{}", self.index)
    }
}

/// Space of generator-image pairs that extend to derivations, in RREF over
/// the coordinates `alpha_1.., beta_..` of `(D(e_1), D(e_2))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpace {
    pub algebra: Algebra,
    pub support_bound: i64,
    pub depth: i64,
    pub coordinates: Vec<Coordinate>,
    pub basis: Subspace,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Reads a coordinate vector as `(D(e_1), D(e_2))`.
    pub fn generator_images(&self, v: &SparseVector) -> Result<(Element, Element)> {
        let mut e1 = SparseVector::new();
        let mut e2 = SparseVector::new();
        for (&c, value) in v.iter() {
            let coord = self
                .coordinates
                .get(c as usize)
                .ok_or_else(|| Error::Precondition(format!("coordinate {c} out of range")))?;
            match coord.generator {
                Generator::E1 => e1.add_term(coord.index, value),
                Generator::E2 => e2.add_term(coord.index, value),
            }
        }
        Ok((
            Element::from_vector(self.algebra, e1)?,
            Element::from_vector(self.algebra, e2)?,
        ))
    }

    /// Full table for a coordinate vector via [`extend_from_generators`].
    pub fn table(&self, v: &SparseVector, truncation: i64) -> Result<Extension> {
        let (e1, e2) = self.generator_images(v)?;
        extend_from_generators(self.algebra, &e1, &e2, truncation)
    }
}

/// Default consistency depth for support bound `n`.
pub fn default_depth(support_bound: i64) -> i64 {
    2 * support_bound + 3
}

/// Solves for all generator-image pairs that extend to derivations.
///
/// Thin: `D(e_1)` and `D(e_2)` range over `span{e_1..e_n}`. The coefficient
/// `beta_1` is solved for like every other coordinate; it is always forced to
/// zero and is then dropped, leaving coordinates
/// `(alpha_1..alpha_n, beta_2..beta_n)`.
///
/// Positive Witt: `D(e_k)` ranges over `span{e_1..e_{k+n-1}}`, so `D(e_1)`
/// over `e_1..e_n` and `D(e_2)` over `e_1..e_{n+1}`. This is the space swept
/// out by `ad(a)` with `a` supported in `0..n-1`. Coordinates are
/// `(alpha_1..alpha_n, beta_1..beta_{n+1})`.
///
/// Every Leibniz relation `[e_i, e_j]` with `i + j <= depth` is imposed.
pub fn derivation_space_basis(algebra: Algebra, support_bound: i64, depth: i64) -> Result<DerivationSpace> {
    check_generated(algebra, "derivation_space_basis")?;
    let n = support_bound;
    if n < 1 {
        return Err(Error::Precondition(format!("support bound {n} must be at least 1")));
    }
    if depth < default_depth(n) {
        return Err(Error::Precondition(format!(
            "consistency depth {depth} must be at least 2n+3 = {}",
            default_depth(n)
        )));
    }
    let e2_top = if algebra == Algebra::PositiveWitt { n + 1 } else { n };
    let coordinates: Vec<Coordinate> = (1..=n)
        .map(|index| Coordinate {
            generator: Generator::E1,
            index,
        })
        .chain((1..=e2_top).map(|index| Coordinate {
            generator: Generator::E2,
            index,
        }))
        .collect();
    let coord_window = Window::new(0, coordinates.len() as i64 - 1);

    // One constraint row per (relation, output index); column c holds the
    // residual produced by the c-th unit coordinate vector. Residuals are
    // linear in the generator images.
    let mut rows: BTreeMap<(i64, i64, i64), SparseVector> = BTreeMap::new();
    for (c, coord) in coordinates.iter().enumerate() {
        let unit = SparseVector::unit(coord.index);
        let zero = SparseVector::new();
        let (g1, g2) = match coord.generator {
            Generator::E1 => (&unit, &zero),
            Generator::E2 => (&zero, &unit),
        };
        let images = propagate(algebra, g1, g2, depth);
        for (i, j) in leibniz_pairs(algebra, Window::new(1, depth), depth) {
            let mut residual = SparseVector::new();
            if let Some((k, coef)) = algebra.basis_bracket(i, j) {
                residual.axpy(&coef, &images[(k - 1) as usize]);
            }
            residual.axpy(
                &-Rational::one(),
                &bracket_vectors(&algebra, &images[(i - 1) as usize], &SparseVector::unit(j)),
            );
            residual.axpy(
                &-Rational::one(),
                &bracket_vectors(&algebra, &SparseVector::unit(i), &images[(j - 1) as usize]),
            );
            for (&t, value) in residual.iter() {
                rows.entry((i, j, t)).or_default().add_term(c as i64, value);
            }
        }
    }
    let rows: Vec<SparseVector> = rows.into_values().collect();
    let mut basis = kernel_basis(&rows, coord_window);
    let mut coordinates = coordinates;

    if algebra == Algebra::Thin {
        let beta1 = n;
        if basis.basis().iter().all(|b| b.get(beta1).is_zero()) {
            coordinates.remove(beta1 as usize);
            let shifted: Vec<SparseVector> = basis
                .basis()
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|(&c, v)| (if c > beta1 { c - 1 } else { c }, v.clone()))
                        .collect()
                })
                .collect();
            basis = Subspace::span(Window::new(0, coordinates.len() as i64 - 1), &shifted);
        }
    }

    Ok(DerivationSpace {
        algebra,
        support_bound: n,
        depth,
        coordinates,
        basis,
    })
}

/// Support bound of the generator images of a positive Witt table.
fn generator_support(d: &LinearMapTable) -> Result<i64> {
    Ok(d.image(1)?.support_bound().max(d.image(2)?.support_bound()))
}

/// Recovers `a` in W⁺+⟨e₀⟩ with `D = ad(a)` on the positive Witt algebra.
///
/// With `alpha_i` the coefficients of `D(e_1)` and `beta_3` the `e_3`
/// coefficient of `D(e_2)`, the element is
/// `alpha_1 e_0 + beta_3 e_1 - sum_{i>=3} alpha_i/(i-2) e_{i-1}`; `ad(a)` is
/// then compared with `D` on the whole truncation.
pub fn recover_inner_wplus(d: &LinearMapTable) -> Result<Element> {
    if d.algebra() != Algebra::PositiveWitt {
        return Err(Error::UnsupportedAlgebra {
            algebra: d.algebra(),
            operation: "recover_inner_wplus",
        });
    }
    let s = generator_support(d)?;
    let need = 2 * s + 3;
    if d.window().min != 1 || d.window().max < need {
        return Err(Error::TruncationTooSmall(format!(
            "recovery needs e_1..e_{need}, table covers {}",
            d.window()
        )));
    }
    let img1 = d.image(1)?;
    let mut a = SparseVector::new();
    a.add_term(0, &img1.coeff(1));
    a.add_term(1, &d.image(2)?.coeff(3));
    for (&i, alpha) in img1.coeffs().iter().filter(|(&i, _)| i >= 3) {
        a.add_term(i - 1, &-(alpha / &Rational::from(i - 2)));
    }
    let a = Element::from_vector(Algebra::PositiveWittExtended, a)?;
    verify_inner(d, &a)?;
    Ok(a)
}

/// Recovers `a` in W with `D = ad(a)`.
///
/// `[a, e_0] = -sum_j j a_j e_j` fixes every `a_j` with `j != 0`; the
/// `e_0` coefficient is the `e_1` coefficient of `D(e_1)`.
pub fn recover_inner_witt(d: &LinearMapTable) -> Result<Element> {
    if d.algebra() != Algebra::Witt {
        return Err(Error::UnsupportedAlgebra {
            algebra: d.algebra(),
            operation: "recover_inner_witt",
        });
    }
    if !(d.window().contains(0) && d.window().contains(1)) {
        return Err(Error::TruncationTooSmall(format!(
            "recovery needs e_0 and e_1, table covers {}",
            d.window()
        )));
    }
    let mut a: SparseVector = d
        .image(0)?
        .coeffs()
        .iter()
        .filter(|(&j, _)| j != 0)
        .map(|(&j, c)| (j, -(c / &Rational::from(j))))
        .collect();
    a.add_term(0, &d.image(1)?.coeff(1));
    let a = Element::from_vector(Algebra::Witt, a)?;
    verify_inner(d, &a)?;
    Ok(a)
}

fn verify_inner(d: &LinearMapTable, a: &Element) -> Result<()> {
    let inner = ad_on(a, d.algebra(), d.window())?;
    match d.first_difference(&inner) {
        None => Ok(()),
        Some((k, diff)) => Err(Error::NotADerivation(format!(
            "candidate a = {a} disagrees at e_{k}: D(e_{k}) - [a,e_{k}] = {diff}"
        ))),
    }
}

/// Parameters of a thin-algebra derivation: `alpha_1..alpha_n` for `D(e_1)`
/// and `beta_2..beta_m` for `D(e_2)`. There is no `beta_1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThinDerivationParams {
    alpha: Vec<Rational>,
    beta: Vec<Rational>,
}

impl ThinDerivationParams {
    /// `alpha[0]` is `alpha_1`; `beta[0]` is `beta_2`.
    pub fn new(alpha: Vec<Rational>, beta: Vec<Rational>) -> Self {
        ThinDerivationParams { alpha, beta }
    }

    pub fn alpha(&self, i: i64) -> Rational {
        usize::try_from(i - 1)
            .ok()
            .and_then(|k| self.alpha.get(k).cloned())
            .unwrap_or_default()
    }

    pub fn beta(&self, i: i64) -> Rational {
        usize::try_from(i - 2)
            .ok()
            .and_then(|k| self.beta.get(k).cloned())
            .unwrap_or_default()
    }

    /// Reads the parameters off `D(e_1)` and `D(e_2)`; fails if `D(e_2)` has
    /// an `e_1` component.
    pub fn read_off(img_e1: &Element, img_e2: &Element) -> Result<Self> {
        if !img_e2.coeff(1).is_zero() {
            return Err(Error::NotADerivation(format!("D(e_2) = {img_e2} has an e_1 component")));
        }
        let top = |e: &Element| e.coeffs().max_index().unwrap_or(0);
        let alpha = (1..=top(img_e1)).map(|i| img_e1.coeff(i)).collect();
        let beta = (2..=top(img_e2)).map(|i| img_e2.coeff(i)).collect();
        Ok(ThinDerivationParams { alpha, beta })
    }
}

/// The thin-algebra derivation with `D(e_1) = sum alpha_i e_i`,
/// `D(e_2) = sum beta_i e_i` and, for `j >= 3`,
/// `D(e_j) = ((j-2) alpha_1 + beta_2) e_j + sum_{i>=1} beta_{i+2} e_{i+j}`.
pub fn thin_derivation(params: &ThinDerivationParams, truncation: i64) -> Result<LinearMapTable> {
    if truncation < 3 {
        return Err(Error::Precondition(format!(
            "truncation {truncation} must be at least 3"
        )));
    }
    let alg = Algebra::Thin;
    let img_e1 = Element::from_terms(alg, params.alpha.iter().cloned().zip(1..).map(|(c, i)| (i, c)))?;
    let img_e2 = Element::from_terms(alg, params.beta.iter().cloned().zip(2..).map(|(c, i)| (i, c)))?;
    let mut images = vec![(1, img_e1), (2, img_e2)];
    let alpha1 = params.alpha(1);
    let beta2 = params.beta(2);
    for j in 3..=truncation {
        let mut v = SparseVector::new();
        v.add_term(j, &(&(&alpha1 * &Rational::from(j - 2)) + &beta2));
        for (c, i) in params.beta.iter().skip(1).zip(1..) {
            v.add_term(i + j, c);
        }
        images.push((j, Element::from_vector(alg, v)?));
    }
    LinearMapTable::new(alg, Window::new(1, truncation), images)
}

/// `[a, e_j]` computed from the structure constants of W⁺+⟨e₀⟩.
pub fn inner_image_formula_check(a: &Element, j: i64) -> Result<Element> {
    if j < 1 {
        return Err(Error::Precondition(format!("index {j} must be at least 1")));
    }
    let a = a.embed(Algebra::PositiveWittExtended)?;
    bracket(&a, &Element::basis(Algebra::PositiveWittExtended, j)?)
}
