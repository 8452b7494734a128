//! The four algebras as structure-constant machines.
//!
//! Witt, positive Witt and extended positive Witt share the rule
//! `[e_i, e_j] = (j - i) e_{i+j}` and differ only in their index domains.
//! The thin algebra has `[e_1, e_n] = e_{n+1}` for `n >= 2`, completed by
//! antisymmetry, with every other basis bracket zero.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Rational, SparseVector, Window};
use crate::map::LinearMapTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algebra {
    /// Basis `e_i`, `i` any integer.
    Witt,
    /// Basis `e_i`, `i >= 1`.
    PositiveWitt,
    /// Positive Witt with `e_0` adjoined; witnesses for derivations of the
    /// positive Witt algebra live here.
    PositiveWittExtended,
    /// Basis `e_n`, `n >= 1`.
    Thin,
}

impl Algebra {
    pub const ALL: [Algebra; 4] = [
        Algebra::Witt,
        Algebra::PositiveWitt,
        Algebra::PositiveWittExtended,
        Algebra::Thin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algebra::Witt => "witt",
            Algebra::PositiveWitt => "wplus",
            Algebra::PositiveWittExtended => "wplus_ext",
            Algebra::Thin => "thin",
        }
    }

    /// Lowest basis index, `None` when the domain is unbounded below.
    pub fn min_index(self) -> Option<i64> {
        match self {
            Algebra::Witt => None,
            Algebra::PositiveWitt | Algebra::Thin => Some(1),
            Algebra::PositiveWittExtended => Some(0),
        }
    }

    pub fn contains_index(self, index: i64) -> bool {
        self.min_index().is_none_or(|m| index >= m)
    }

    pub fn check_window(self, window: &Window) -> Result<()> {
        if self.contains_index(window.min) {
            Ok(())
        } else {
            Err(Error::IndexOutOfDomain {
                algebra: self,
                index: window.min,
            })
        }
    }

    /// Algebra whose inner derivations cover all derivations of `self`.
    pub fn witness_algebra(self) -> Algebra {
        match self {
            Algebra::PositiveWitt => Algebra::PositiveWittExtended,
            other => other,
        }
    }

    /// Whether basis elements of `self` can be read as elements of `target`.
    pub fn embeds_into(self, target: Algebra) -> bool {
        self == target || (self == Algebra::PositiveWitt && target == Algebra::PositiveWittExtended)
    }

    fn is_witt_family(self) -> bool {
        !matches!(self, Algebra::Thin)
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algebra::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown algebra `{s}`")))
    }
}

/// A bracket given by its values on basis pairs.
pub trait StructureConstants {
    fn contains_index(&self, index: i64) -> bool;

    /// `[e_i, e_j]` as `(index, coefficient)`, or `None` when it vanishes.
    fn basis_bracket(&self, i: i64, j: i64) -> Option<(i64, Rational)>;
}

impl StructureConstants for Algebra {
    fn contains_index(&self, index: i64) -> bool {
        Algebra::contains_index(*self, index)
    }

    fn basis_bracket(&self, i: i64, j: i64) -> Option<(i64, Rational)> {
        if self.is_witt_family() {
            (i != j).then(|| (i + j, Rational::from(j - i)))
        } else {
            match (i, j) {
                (1, n) if n >= 2 => Some((n + 1, Rational::one())),
                (n, 1) if n >= 2 => Some((n + 1, -Rational::one())),
                _ => None,
            }
        }
    }
}

/// Bilinear extension of a basis rule to sparse coefficient vectors.
pub fn bracket_vectors<S>(rule: &S, x: &SparseVector, y: &SparseVector) -> SparseVector
where
    S: StructureConstants + ?Sized,
{
    let mut out = SparseVector::new();
    for (&i, a) in x.iter() {
        for (&j, b) in y.iter() {
            if let Some((k, c)) = rule.basis_bracket(i, j) {
                out.add_term(k, &(&c * &(a * b)));
            }
        }
    }
    out
}

/// A finitely supported element of one of the algebras.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    algebra: Algebra,
    coeffs: SparseVector,
}

impl Element {
    pub fn zero(algebra: Algebra) -> Self {
        Element {
            algebra,
            coeffs: SparseVector::new(),
        }
    }

    pub fn basis(algebra: Algebra, index: i64) -> Result<Self> {
        Element::from_vector(algebra, SparseVector::unit(index))
    }

    pub fn from_vector(algebra: Algebra, coeffs: SparseVector) -> Result<Self> {
        if let Some(index) = coeffs.indices().find(|&i| !algebra.contains_index(i)) {
            return Err(Error::IndexOutOfDomain { algebra, index });
        }
        Ok(Element { algebra, coeffs })
    }

    pub fn from_terms<I>(algebra: Algebra, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        Element::from_vector(algebra, SparseVector::from_entries(terms))
    }

    /// Parses the element grammar, e.g. `3*e_1 - 1/2*e_-4` or `0`.
    pub fn parse(algebra: Algebra, text: &str) -> Result<Self> {
        Element::from_vector(algebra, parse_terms(text)?)
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn coeffs(&self) -> &SparseVector {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> SparseVector {
        self.coeffs
    }

    pub fn coeff(&self, index: i64) -> Rational {
        self.coeffs.get(index)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Largest `|index|` in the support; zero for the zero element.
    pub fn support_bound(&self) -> i64 {
        self.coeffs.indices().map(i64::abs).max().unwrap_or(0)
    }

    /// Reads this element inside `target` (identity, or W⁺ into W⁺+⟨e₀⟩).
    pub fn embed(&self, target: Algebra) -> Result<Element> {
        if self.algebra.embeds_into(target) {
            Ok(Element {
                algebra: target,
                coeffs: self.coeffs.clone(),
            })
        } else {
            Err(Error::MixedAlgebras(self.algebra, target))
        }
    }

    fn same_algebra(&self, other: &Element) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::MixedAlgebras(self.algebra, other.algebra))
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_algebra(other)?;
        Ok(Element {
            algebra: self.algebra,
            coeffs: self.coeffs.add(&other.coeffs),
        })
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.same_algebra(other)?;
        Ok(Element {
            algebra: self.algebra,
            coeffs: self.coeffs.sub(&other.coeffs),
        })
    }

    pub fn scale(&self, factor: &Rational) -> Element {
        Element {
            algebra: self.algebra,
            coeffs: self.coeffs.scaled(factor),
        }
    }

    pub fn neg(&self) -> Element {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.coeffs)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.algebra, self)
    }
}

/// Writes a coefficient vector in the element grammar, ascending index.
pub fn fmt_terms(f: &mut impl fmt::Write, v: &SparseVector) -> fmt::Result {
    if v.is_zero() {
        return f.write_str("0");
    }
    for (n, (&k, c)) in v.iter().enumerate() {
        let mag = if n == 0 {
            if c.is_negative() {
                f.write_str("-")?;
            }
            c.abs()
        } else if c.is_negative() {
            f.write_str(" - ")?;
            c.abs()
        } else {
            f.write_str(" + ")?;
            c.clone()
        };
        if mag.is_one() {
            write!(f, "e_{k}")?;
        } else {
            write!(f, "{mag}*e_{k}")?;
        }
    }
    Ok(())
}

pub fn terms_to_string(v: &SparseVector) -> String {
    let mut s = String::new();
    fmt_terms(&mut s, v).expect("writing to a String");
    s
}

fn parse_terms(text: &str) -> Result<SparseVector> {
    let s: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
    let err = |msg: &str| Error::Parse(format!("{msg} in element `{}`", text.trim()));
    if s.is_empty() {
        return Err(err("empty input"));
    }
    if s == b"0" {
        return Ok(SparseVector::new());
    }
    let digits = |pos: &mut usize| -> &[u8] {
        let start = *pos;
        while *pos < s.len() && s[*pos].is_ascii_digit() {
            *pos += 1;
        }
        &s[start..*pos]
    };
    let mut out = SparseVector::new();
    let mut pos = 0;
    while pos < s.len() {
        let negative = match s[pos] {
            b'+' => {
                pos += 1;
                false
            }
            b'-' => {
                pos += 1;
                true
            }
            _ if pos == 0 => false,
            _ => return Err(err("expected `+` or `-` between terms")),
        };
        let coeff = if s[pos..].starts_with(b"e_") {
            Rational::one()
        } else {
            let start = pos;
            if digits(&mut pos).is_empty() {
                return Err(err("expected a coefficient or `e_`"));
            }
            if pos < s.len() && s[pos] == b'/' {
                pos += 1;
                if digits(&mut pos).is_empty() {
                    return Err(err("missing denominator"));
                }
            }
            let lit = std::str::from_utf8(&s[start..pos]).expect("ascii");
            let c: Rational = lit.parse()?;
            if !s[pos..].starts_with(b"*") {
                return Err(err("expected `*` after coefficient"));
            }
            pos += 1;
            if !s[pos..].starts_with(b"e_") {
                return Err(err("expected `e_` after `*`"));
            }
            c
        };
        pos += 2;
        let start = pos;
        if pos < s.len() && s[pos] == b'-' {
            pos += 1;
        }
        if digits(&mut pos).is_empty() {
            return Err(err("expected an integer index after `e_`"));
        }
        let index: i64 = std::str::from_utf8(&s[start..pos])
            .expect("ascii")
            .parse()
            .map_err(|_| err("index out of range"))?;
        let coeff = if negative { -coeff } else { coeff };
        out.add_term(index, &coeff);
    }
    Ok(out)
}

/// `[x, y]` for two elements of the same algebra.
pub fn bracket(x: &Element, y: &Element) -> Result<Element> {
    x.same_algebra(y)?;
    Ok(Element {
        algebra: x.algebra,
        coeffs: bracket_vectors(&x.algebra, &x.coeffs, &y.coeffs),
    })
}

/// `[a, x]` where `a` lives in `x`'s algebra or in its witness algebra
/// (W⁺+⟨e₀⟩ acting on its ideal W⁺). The result lies in `x`'s algebra.
pub fn act(a: &Element, x: &Element) -> Result<Element> {
    let target = x.algebra;
    if a.algebra != target && a.algebra != target.witness_algebra() {
        return Err(Error::MixedAlgebras(a.algebra, target));
    }
    Element::from_vector(target, bracket_vectors(&a.algebra, &a.coeffs, &x.coeffs))
}

/// `ad(a)` tabulated on `window` of `a`'s own algebra. Images may have
/// support outside the window.
pub fn ad(a: &Element, window: Window) -> Result<LinearMapTable> {
    ad_on(a, a.algebra, window)
}

/// `ad(a)` as a map on `target`, where `a` is in `target` or its witness
/// algebra.
pub fn ad_on(a: &Element, target: Algebra, window: Window) -> Result<LinearMapTable> {
    target.check_window(&window)?;
    let images = window
        .indices()
        .map(|k| Ok((k, act(a, &Element::basis(target, k)?)?)))
        .collect::<Result<Vec<_>>>()?;
    LinearMapTable::new(target, window, images)
}

/// Outcome of [`jacobi_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JacobiReport {
    Pass {
        triples: usize,
    },
    Fail {
        triple: (i64, i64, i64),
        residual: SparseVector,
    },
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        matches!(self, JacobiReport::Pass { .. })
    }
}

/// Checks the Jacobi identity on basis triples `i < j < k` drawn from the
/// window (in lexicographic order); triples with a repeated index satisfy it
/// for any antisymmetric rule. Returns the first violating triple.
pub fn jacobi_check<S>(rule: &S, window: Window) -> JacobiReport
where
    S: StructureConstants + ?Sized,
{
    let idx: Vec<i64> = window.indices().filter(|&i| rule.contains_index(i)).collect();
    let nested = |a: i64, b: i64, c: i64, out: &mut SparseVector| {
        if let Some((m, cbc)) = rule.basis_bracket(b, c) {
            if let Some((n, cam)) = rule.basis_bracket(a, m) {
                out.add_term(n, &(&cbc * &cam));
            }
        }
    };
    let mut count = 0;
    for (p, &i) in idx.iter().enumerate() {
        for (q, &j) in idx.iter().enumerate().skip(p + 1) {
            for &k in &idx[q + 1..] {
                let mut r = SparseVector::new();
                nested(i, j, k, &mut r);
                nested(j, k, i, &mut r);
                nested(k, i, j, &mut r);
                count += 1;
                if !r.is_zero() {
                    return JacobiReport::Fail {
                        triple: (i, j, k),
                        residual: r,
                    };
                }
            }
        }
    }
    JacobiReport::Pass { triples: count }
}
