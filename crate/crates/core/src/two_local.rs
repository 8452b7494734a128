//! 2-local derivations.
//!
//! A map `delta` is a 2-local derivation when every pair `(x, y)` admits a
//! derivation `D` with `D(x) = delta(x)` and `D(y) = delta(y)`. Maps are
//! evaluated on demand; the per-pair derivation is carried by a
//! [`WitnessCertificate`] and checked, never assumed.
//!
//! Two families of checks live here:
//!
//! * the thin algebra's non-additive map together with its per-pair
//!   witnesses, and
//! * the rigidity argument for W and W⁺: if a 2-local derivation kills the
//!   probe basis vectors, every witness for `(e_k, x)` lies in the
//!   centralizer of `e_k`, so `delta(x)` lies in `[C(e_k), x]`. When these
//!   forced spaces meet only in zero for two probes, `delta(x)` vanishes.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{act, bracket_vectors, Algebra, Element};
use crate::derivation::{thin_derivation, ThinDerivationParams};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, subspace_intersection, Rational, SparseVector, Subspace, Window};
use crate::map::LinearMapTable;

fn expect_thin(x: &Element) -> Result<()> {
    if x.algebra() == Algebra::Thin {
        Ok(())
    } else {
        Err(Error::MixedAlgebras(x.algebra(), Algebra::Thin))
    }
}

/// The thin-algebra map: `0` when the `e_1` coefficient of `x` vanishes,
/// otherwise `x` with its `e_1` component removed.
pub fn thin_delta(x: &Element) -> Result<Element> {
    expect_thin(x)?;
    if x.coeff(1).is_zero() {
        Ok(Element::zero(Algebra::Thin))
    } else {
        x.sub(&Element::basis(Algebra::Thin, 1)?.scale(&x.coeff(1)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The inner derivation `ad(a)`.
    Inner(Element),
    Derivation(LinearMapTable),
}

impl Witness {
    pub fn apply(&self, x: &Element) -> Result<Element> {
        match self {
            Witness::Inner(a) => act(a, x),
            Witness::Derivation(d) => d.apply(x),
        }
    }
}

/// Which construction produced a thin witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessCase {
    /// Neither element has an `e_1` component: the zero derivation.
    Zero,
    /// Exactly one element has an `e_1` component: `e_1` is sent to that
    /// element's non-`e_1` part divided by its `e_1` coefficient, all other
    /// basis vectors to zero. `swapped` is set when that element is `x`.
    GeneratorShift { swapped: bool },
    /// Both have an `e_1` component: the projection killing `e_1`.
    Grading,
}

impl WitnessCase {
    pub fn number(self) -> u8 {
        match self {
            WitnessCase::Zero => 1,
            WitnessCase::GeneratorShift { .. } => 2,
            WitnessCase::Grading => 3,
        }
    }
}

impl fmt::Display for WitnessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessCase::GeneratorShift { swapped: true } => write!(f, "2 (swapped)"),
            other => write!(f, "{}", other.number()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub x: Element,
    pub y: Element,
    pub case: WitnessCase,
    pub witness: Witness,
}

/// Builds the derivation certifying the 2-local property of [`thin_delta`]
/// on `(x, y)`.
pub fn thin_witness(x: &Element, y: &Element) -> Result<WitnessCertificate> {
    expect_thin(x)?;
    expect_thin(y)?;
    let truncation = x
        .coeffs()
        .max_index()
        .unwrap_or(0)
        .max(y.coeffs().max_index().unwrap_or(0))
        .max(3);
    let (x1, y1) = (x.coeff(1), y.coeff(1));
    let (case, params) = match (x1.is_zero(), y1.is_zero()) {
        (true, true) => (WitnessCase::Zero, ThinDerivationParams::default()),
        (true, false) | (false, true) => {
            let swapped = y1.is_zero();
            let (lead, c1) = if swapped { (x, &x1) } else { (y, &y1) };
            let inv = c1.recip().expect("nonzero e_1 coefficient");
            let top = lead.coeffs().max_index().unwrap_or(1);
            let alpha = std::iter::once(Rational::zero())
                .chain((2..=top).map(|k| &lead.coeff(k) * &inv))
                .collect();
            (
                WitnessCase::GeneratorShift { swapped },
                ThinDerivationParams::new(alpha, Vec::new()),
            )
        }
        (false, false) => (
            WitnessCase::Grading,
            ThinDerivationParams::new(Vec::new(), vec![Rational::one()]),
        ),
    };
    Ok(WitnessCertificate {
        x: x.clone(),
        y: y.clone(),
        case,
        witness: Witness::Derivation(thin_derivation(&params, truncation)?),
    })
}

/// `delta(z) - witness(z)` for both members of the pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairVerdict {
    pub x_residual: Element,
    pub y_residual: Element,
}

impl PairVerdict {
    pub fn passed(&self) -> bool {
        self.x_residual.is_zero() && self.y_residual.is_zero()
    }
}

pub fn verify_pair<F>(delta: F, cert: &WitnessCertificate) -> Result<PairVerdict>
where
    F: Fn(&Element) -> Result<Element>,
{
    let residual = |z: &Element| delta(z)?.sub(&cert.witness.apply(z)?);
    Ok(PairVerdict {
        x_residual: residual(&cert.x)?,
        y_residual: residual(&cert.y)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivityReport {
    /// `delta(x + y)`
    pub image_of_sum: Element,
    /// `delta(x) + delta(y)`
    pub sum_of_images: Element,
    /// `delta(x + y) - delta(x) - delta(y)`
    pub residual: Element,
}

impl AdditivityReport {
    pub fn violated(&self) -> bool {
        !self.residual.is_zero()
    }
}

pub fn additivity_violation<F>(delta: F, x: &Element, y: &Element) -> Result<AdditivityReport>
where
    F: Fn(&Element) -> Result<Element>,
{
    let image_of_sum = delta(&x.add(y)?)?;
    let sum_of_images = delta(x)?.add(&delta(y)?)?;
    let residual = image_of_sum.sub(&sum_of_images)?;
    Ok(AdditivityReport {
        image_of_sum,
        sum_of_images,
        residual,
    })
}

/// `{a supported in window : [a, t] = 0}`.
pub fn centralizer(algebra: Algebra, t: &Element, window: Window) -> Result<Subspace> {
    algebra.check_window(&window)?;
    let t = t.embed(algebra)?;
    let mut rows: BTreeMap<i64, SparseVector> = BTreeMap::new();
    for i in window.indices() {
        let image = bracket_vectors(&algebra, &SparseVector::unit(i), t.coeffs());
        for (&s, c) in image.iter() {
            rows.entry(s).or_default().add_term(i, c);
        }
    }
    let rows: Vec<SparseVector> = rows.into_values().collect();
    Ok(kernel_basis(&rows, window))
}

/// Span of `[a, x]` over the witnesses `a` (drawn from the witness algebra,
/// supported in `window`) that commute with the probe `e_probe`.
///
/// The returned subspace lives on the hull of `window` and the supports of
/// those images.
pub fn forced_image_space(algebra: Algebra, probe: i64, x: &Element, window: Window) -> Result<Subspace> {
    let witness_alg = algebra.witness_algebra();
    let x = x.embed(algebra)?;
    let probe_el = Element::basis(algebra, probe)?;
    let cent = centralizer(witness_alg, &probe_el, window)?;
    let images = cent
        .basis()
        .iter()
        .map(|a| Ok(act(&Element::from_vector(witness_alg, a.clone())?, &x)?.into_coeffs()))
        .collect::<Result<Vec<_>>>()?;
    let out = images
        .iter()
        .filter_map(SparseVector::support_window)
        .fold(window, |w, s| w.hull(&s));
    Ok(Subspace::span(out, &images))
}

/// Forced image spaces for `x` under each probe, and their intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityTrace {
    pub algebra: Algebra,
    pub target: Element,
    pub probes: Vec<i64>,
    pub forced: Vec<Subspace>,
    pub intersection: Subspace,
}

impl RigidityTrace {
    /// Whether the forced spaces meet only in zero.
    pub fn is_rigid(&self) -> bool {
        self.intersection.is_zero()
    }
}

fn check_rigidity_algebra(algebra: Algebra, operation: &'static str) -> Result<()> {
    match algebra {
        Algebra::Witt | Algebra::PositiveWitt => Ok(()),
        other => Err(Error::UnsupportedAlgebra {
            algebra: other,
            operation,
        }),
    }
}

fn trace(algebra: Algebra, x: &Element, probes: Vec<i64>, window: Window) -> Result<RigidityTrace> {
    algebra.witness_algebra().check_window(&window)?;
    if let Some(p) = probes.iter().find(|&&p| !window.contains(p)) {
        return Err(Error::WindowTooSmall(format!(
            "window {window} does not contain probe index {p}"
        )));
    }
    let forced = probes
        .iter()
        .map(|&p| forced_image_space(algebra, p, x, window))
        .collect::<Result<Vec<_>>>()?;
    let intersection = forced
        .iter()
        .skip(1)
        .fold(forced[0].clone(), |acc, s| subspace_intersection(&acc, s));
    Ok(RigidityTrace {
        algebra,
        target: x.embed(algebra)?,
        probes,
        forced,
        intersection,
    })
}

/// Probes for a general element: `{e_0, e_n}` with `n = 2 n_x + 1` on W,
/// `{e_1, e_m}` with `m = 2 n + 1` on W⁺, where `n_x` (resp. `n`) bounds the
/// support of `x`.
pub fn rigidity_probes(algebra: Algebra, x: &Element) -> Result<Vec<i64>> {
    check_rigidity_algebra(algebra, "rigidity_check")?;
    let bound = x.support_bound();
    Ok(match algebra {
        Algebra::Witt => vec![0, 2 * bound + 1],
        _ => vec![1, 2 * bound + 1],
    })
}

/// Certifies that a 2-local derivation vanishing on the probes vanishes on
/// `x`: the trace is rigid when the forced spaces meet in zero.
pub fn rigidity_check(algebra: Algebra, x: &Element, window: Window) -> Result<RigidityTrace> {
    check_rigidity_algebra(algebra, "rigidity_check")?;
    let x = x.embed(algebra)?;
    if x.is_zero() {
        return Err(Error::Precondition("rigidity target must be nonzero".into()));
    }
    trace(algebra, &x, rigidity_probes(algebra, &x)?, window)
}

/// Rigidity for a single basis vector `e_i`, probing with the generating
/// pair: `{e_0, e_1}` on W (`i` not 0 or 1), `{e_1, e_2}` on W⁺ (`i >= 3`).
pub fn basis_rigidity_check(algebra: Algebra, i: i64, window: Window) -> Result<RigidityTrace> {
    check_rigidity_algebra(algebra, "basis_rigidity_check")?;
    let probes = match algebra {
        Algebra::Witt if i == 0 || i == 1 => return Err(Error::Precondition(format!("index {i} is a probe index"))),
        Algebra::Witt => vec![0, 1],
        _ if i < 3 => return Err(Error::Precondition(format!("index {i} must be at least 3"))),
        _ => vec![1, 2],
    };
    trace(algebra, &Element::basis(algebra, i)?, probes, window)
}

/// Probes of the generating pair a baseline derivation is matched on.
pub fn generator_probes(algebra: Algebra) -> Result<[i64; 2]> {
    check_rigidity_algebra(algebra, "generator_probes")?;
    Ok(if algebra == Algebra::Witt { [0, 1] } else { [1, 2] })
}

/// Result of subtracting a baseline derivation from a 2-local map and
/// running rigidity on the remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaselineReport {
    /// `delta(e_k) - D(e_k)` on the generating pair.
    pub generator_residuals: Vec<(i64, Element)>,
    pub trace: RigidityTrace,
    /// `delta(x) - D(x)`
    pub remainder: Element,
}

impl BaselineReport {
    /// The baseline matches on the generators and, where the trace is rigid,
    /// on `x` as well.
    pub fn consistent(&self) -> bool {
        self.generator_residuals.iter().all(|(_, r)| r.is_zero())
            && (!self.trace.is_rigid() || self.remainder.is_zero())
    }
}

/// Subtracts a derivation `baseline` that agrees with `delta` on the
/// generating pair, then checks rigidity of the remainder at `x`.
pub fn rigidity_with_baseline<F>(
    delta: F,
    baseline: &LinearMapTable,
    x: &Element,
    window: Window,
) -> Result<BaselineReport>
where
    F: Fn(&Element) -> Result<Element>,
{
    let algebra = baseline.algebra();
    let generator_residuals = generator_probes(algebra)?
        .into_iter()
        .map(|k| {
            let e = Element::basis(algebra, k)?;
            Ok((k, delta(&e)?.sub(&baseline.apply(&e)?)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let trace = rigidity_check(algebra, x, window)?;
    let x = x.embed(algebra)?;
    let remainder = delta(&x)?.sub(&baseline.apply(&x)?)?;
    Ok(BaselineReport {
        generator_residuals,
        trace,
        remainder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ad_on;
    use crate::derivation::leibniz_check;

    fn el(alg: Algebra, s: &str) -> Element {
        Element::parse(alg, s).unwrap()
    }

    fn thin(s: &str) -> Element {
        el(Algebra::Thin, s)
    }

    fn span(alg_window: Window, vs: &[&str]) -> Subspace {
        let v: Vec<SparseVector> = vs.iter().map(|s| el(Algebra::Witt, s).into_coeffs()).collect();
        Subspace::span(alg_window, &v)
    }

    #[test]
    fn delta_examples() {
        assert_eq!(thin_delta(&thin("e_1 + e_2")).unwrap(), thin("e_2"));
        assert!(thin_delta(&thin("2*e_2")).unwrap().is_zero());
        assert!(thin_delta(&thin("0")).unwrap().is_zero());
        assert!(thin_delta(&el(Algebra::Witt, "e_1")).is_err());
    }

    #[test]
    fn witness_cases() {
        let c = thin_witness(&thin("2*e_2"), &thin("e_3")).unwrap();
        assert_eq!(c.case, WitnessCase::Zero);
        assert!(matches!(&c.witness, Witness::Derivation(d) if d.is_zero()));

        let c = thin_witness(&thin("e_2"), &thin("e_1 + 3*e_2")).unwrap();
        assert_eq!(c.case, WitnessCase::GeneratorShift { swapped: false });
        let Witness::Derivation(d) = &c.witness else { panic!() };
        assert_eq!(d.image(1).unwrap(), &thin("3*e_2"));
        assert_eq!(c.witness.apply(&c.y).unwrap(), thin("3*e_2"));

        let c = thin_witness(&thin("e_1 + e_2"), &thin("-e_1 + e_2")).unwrap();
        assert_eq!(c.case, WitnessCase::Grading);
        assert_eq!(c.witness.apply(&c.x).unwrap(), thin("e_2"));
        assert_eq!(c.witness.apply(&c.y).unwrap(), thin("e_2"));

        let c = thin_witness(&thin("-2*e_1 + e_4"), &thin("e_3")).unwrap();
        assert_eq!(c.case, WitnessCase::GeneratorShift { swapped: true });
        assert!(verify_pair(thin_delta, &c).unwrap().passed());
    }

    #[test]
    fn witnesses_are_derivations() {
        for (x, y) in [("e_1 + e_5", "e_2"), ("e_3", "2*e_1 - e_7 + e_2"), ("e_1", "e_1 + e_2")] {
            let c = thin_witness(&thin(x), &thin(y)).unwrap();
            let Witness::Derivation(d) = &c.witness else { panic!() };
            assert!(leibniz_check(d, d.window().max).unwrap().passed());
            assert!(verify_pair(thin_delta, &c).unwrap().passed());
        }
    }

    #[test]
    fn verify_pair_reports_residual() {
        let cert = WitnessCertificate {
            x: thin("e_1 + e_2"),
            y: thin("e_3"),
            case: WitnessCase::Zero,
            witness: Witness::Derivation(LinearMapTable::zero(Algebra::Thin, Window::new(1, 3)).unwrap()),
        };
        let v = verify_pair(thin_delta, &cert).unwrap();
        assert!(!v.passed());
        assert_eq!(v.x_residual, thin("e_2"));
        assert!(v.y_residual.is_zero());

        let cert = WitnessCertificate {
            x: thin("0"),
            y: thin("0"),
            case: WitnessCase::Zero,
            witness: Witness::Inner(thin("0")),
        };
        assert!(verify_pair(|z: &Element| Ok(z.clone()), &cert).unwrap().passed());
    }

    #[test]
    fn additivity() {
        let r = additivity_violation(thin_delta, &thin("e_1 + e_2"), &thin("-e_1 + e_2")).unwrap();
        assert!(r.violated());
        assert!(r.image_of_sum.is_zero());
        assert_eq!(r.sum_of_images, thin("2*e_2"));
        assert_eq!(r.residual, thin("-2*e_2"));
        assert!(!additivity_violation(thin_delta, &thin("e_3"), &thin("e_4"))
            .unwrap()
            .violated());

        let d = ad_on(&thin("e_1 - e_3"), Algebra::Thin, Window::new(1, 10)).unwrap();
        let lin = |z: &Element| d.apply(z);
        assert!(!additivity_violation(lin, &thin("e_1 + e_2"), &thin("-e_1 + e_9"))
            .unwrap()
            .violated());
    }

    #[test]
    fn centralizer_examples() {
        let w = Window::new(-10, 10);
        let c = centralizer(Algebra::Witt, &el(Algebra::Witt, "e_0"), w).unwrap();
        assert_eq!(c, span(w, &["e_0"]));
        let c = centralizer(Algebra::Witt, &el(Algebra::Witt, "e_1"), w).unwrap();
        assert_eq!(c, span(w, &["e_1"]));
        let w = Window::new(0, 15);
        let ext = Algebra::PositiveWittExtended;
        let c = centralizer(ext, &el(ext, "e_2"), w).unwrap();
        assert_eq!(c, Subspace::span(w, &[SparseVector::unit(2)]));
        // A non-basis element: [a, e_1 + e_2] = 0 only for multiples of it.
        let c = centralizer(ext, &el(ext, "e_1 + e_2"), w).unwrap();
        assert_eq!(c, Subspace::span(w, &[el(ext, "e_1 + e_2").into_coeffs()]));
    }

    #[test]
    fn forced_spaces() {
        let w = Window::new(-10, 10);
        let alg = Algebra::Witt;
        let f = forced_image_space(alg, 0, &el(alg, "e_2"), w).unwrap();
        assert_eq!(f.basis(), &[SparseVector::unit(2)]);
        let f = forced_image_space(alg, 1, &el(alg, "e_2"), w).unwrap();
        assert_eq!(f.basis(), &[SparseVector::unit(3)]);
        assert!(forced_image_space(alg, 0, &el(alg, "e_0"), w).unwrap().is_zero());
    }

    #[test]
    fn rigidity_examples() {
        let w = Window::new(-12, 12);
        let alg = Algebra::Witt;
        let t = rigidity_check(alg, &el(alg, "e_2"), w).unwrap();
        assert_eq!(t.probes, [0, 5]);
        assert!(t.is_rigid());

        let t = rigidity_check(alg, &el(alg, "3*e_-2 + e_1"), w).unwrap();
        assert_eq!(t.forced[0].basis(), &[el(alg, "e_-2 - 1/6*e_1").into_coeffs()]);
        assert_eq!(t.forced[1].basis(), &[el(alg, "e_3 + 4/21*e_6").into_coeffs()]);
        assert!(t.is_rigid());

        let wp = Algebra::PositiveWitt;
        let t = rigidity_check(wp, &el(wp, "e_1 + e_2"), Window::new(0, 10)).unwrap();
        assert_eq!(t.probes, [1, 5]);
        assert!(t.is_rigid());

        assert!(matches!(
            rigidity_check(alg, &el(alg, "e_3"), Window::new(-5, 5)),
            Err(Error::WindowTooSmall(_))
        ));
        assert!(rigidity_check(alg, &el(alg, "0"), w).is_err());
        assert!(rigidity_check(Algebra::Thin, &thin("e_1"), Window::new(1, 5)).is_err());
    }

    #[test]
    fn basis_rigidity_examples() {
        let w = Window::new(-10, 10);
        let alg = Algebra::Witt;
        let t = basis_rigidity_check(alg, 5, w).unwrap();
        assert_eq!(t.forced[0].basis(), &[SparseVector::unit(5)]);
        assert_eq!(t.forced[1].basis(), &[SparseVector::unit(6)]);
        assert!(t.is_rigid());
        let t = basis_rigidity_check(alg, -3, w).unwrap();
        assert_eq!(t.forced[0].basis(), &[SparseVector::unit(-3)]);
        assert_eq!(t.forced[1].basis(), &[SparseVector::unit(-2)]);
        assert!(t.is_rigid());
        let t = basis_rigidity_check(Algebra::PositiveWitt, 7, Window::new(0, 10)).unwrap();
        assert_eq!(t.forced[0].basis(), &[SparseVector::unit(8)]);
        assert_eq!(t.forced[1].basis(), &[SparseVector::unit(9)]);
        assert!(t.is_rigid());
        assert!(basis_rigidity_check(alg, 1, w).is_err());
        assert!(basis_rigidity_check(Algebra::PositiveWitt, 2, Window::new(0, 10)).is_err());
    }

    #[test]
    fn baseline_pipeline() {
        let alg = Algebra::Witt;
        let w = Window::new(-12, 12);
        let a = el(alg, "2*e_-1 + e_0 - 1/3*e_2");
        let d = ad_on(&a, alg, Window::new(-30, 30)).unwrap();
        let delta = |z: &Element| act(&a, z);
        let x = el(alg, "e_3 - e_-2");
        let rep = rigidity_with_baseline(delta, &d, &x, w).unwrap();
        assert!(rep.consistent());
        assert!(rep.remainder.is_zero());

        // A map that agrees with ad(a) on e_0, e_1 but not on x is caught.
        let bent = |z: &Element| {
            let v = act(&a, z)?;
            if z == &x {
                v.add(&el(alg, "e_1"))
            } else {
                Ok(v)
            }
        };
        let rep = rigidity_with_baseline(bent, &d, &x, w).unwrap();
        assert!(rep.trace.is_rigid());
        assert!(!rep.consistent());
    }
}
