//! Linear maps given by their values on a finite window of basis vectors.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::linalg::{Rational, SparseVector, Window};

/// A linear map on `algebra`, known on every basis vector of `window`.
///
/// Images may have support outside the window; the table only promises to
/// know `D(e_k)` for `k` inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMapTable {
    algebra: Algebra,
    window: Window,
    images: BTreeMap<i64, Element>,
}

impl LinearMapTable {
    /// Fails unless every index of `window` receives exactly one image in
    /// `algebra`.
    pub fn new<I>(algebra: Algebra, window: Window, images: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Element)>,
    {
        algebra.check_window(&window)?;
        let mut map = BTreeMap::new();
        for (k, im) in images {
            if !window.contains(k) {
                return Err(Error::Parse(format!("image index {k} outside truncation {window}")));
            }
            if im.algebra() != algebra {
                return Err(Error::MixedAlgebras(im.algebra(), algebra));
            }
            if map.insert(k, im).is_some() {
                return Err(Error::Parse(format!("duplicate image for index {k}")));
            }
        }
        if let Some(k) = window.indices().find(|k| !map.contains_key(k)) {
            return Err(Error::Parse(format!(
                "missing image for index {k} in truncation {window}"
            )));
        }
        Ok(LinearMapTable {
            algebra,
            window,
            images: map,
        })
    }

    pub fn zero(algebra: Algebra, window: Window) -> Result<Self> {
        LinearMapTable::new(algebra, window, window.indices().map(|k| (k, Element::zero(algebra))))
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn image(&self, index: i64) -> Result<&Element> {
        self.images
            .get(&index)
            .ok_or_else(|| Error::TruncationTooSmall(format!("no image for e_{index} in truncation {}", self.window)))
    }

    pub fn images(&self) -> impl Iterator<Item = (i64, &Element)> {
        self.images.iter().map(|(&k, im)| (k, im))
    }

    /// Applies the map to `x` by linearity.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        let x = x.embed(self.algebra)?;
        let mut out = SparseVector::new();
        for (&k, c) in x.coeffs().iter() {
            out.axpy(c, self.image(k)?.coeffs());
        }
        Element::from_vector(self.algebra, out)
    }

    pub fn is_zero(&self) -> bool {
        self.images.values().all(Element::is_zero)
    }

    /// `self - other` on the common window. Both tables must share algebra
    /// and window.
    pub fn sub(&self, other: &LinearMapTable) -> Result<LinearMapTable> {
        if self.algebra != other.algebra {
            return Err(Error::MixedAlgebras(self.algebra, other.algebra));
        }
        if self.window != other.window {
            return Err(Error::Precondition(format!(
                "truncations differ ({} vs {})",
                self.window, other.window
            )));
        }
        let images = self
            .images
            .iter()
            .map(|(&k, im)| Ok((k, im.sub(&other.images[&k])?)))
            .collect::<Result<Vec<_>>>()?;
        LinearMapTable::new(self.algebra, self.window, images)
    }

    /// First index where the two tables disagree, with `self - other` there.
    pub fn first_difference(&self, other: &LinearMapTable) -> Option<(i64, Element)> {
        self.images.iter().find_map(|(&k, im)| {
            let theirs = other.images.get(&k)?;
            let d = im.sub(theirs).ok()?;
            (!d.is_zero()).then_some((k, d))
        })
    }

    pub fn to_json(&self) -> Value {
        let images: Map<String, Value> = self
            .images
            .iter()
            .map(|(k, im)| (k.to_string(), vector_to_json(im.coeffs())))
            .collect();
        json!({
            "algebra": self.algebra.name(),
            "truncation": {"min": self.window.min, "max": self.window.max},
            "images": images,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("map JSON: {msg}"));
        let algebra: Algebra = value
            .get("algebra")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing string field `algebra`"))?
            .parse()?;
        let trunc = value
            .get("truncation")
            .ok_or_else(|| bad("missing field `truncation`"))?;
        let bound = |name: &str| {
            trunc
                .get(name)
                .and_then(Value::as_i64)
                .ok_or_else(|| bad(&format!("missing integer `truncation.{name}`")))
        };
        let (min, max) = (bound("min")?, bound("max")?);
        if min > max {
            return Err(bad("truncation.min exceeds truncation.max"));
        }
        let images = value
            .get("images")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing object field `images`"))?;
        let images = images
            .iter()
            .map(|(key, entries)| {
                let k: i64 = key
                    .parse()
                    .map_err(|_| bad(&format!("image key `{key}` is not an integer")))?;
                let v = vector_from_json(entries)?;
                Ok((k, Element::from_vector(algebra, v)?))
            })
            .collect::<Result<Vec<_>>>()?;
        LinearMapTable::new(algebra, Window::new(min, max), images)
    }
}

/// `[[index, "p/q"], ...]` in ascending index order.
pub fn vector_to_json(v: &SparseVector) -> Value {
    Value::Array(v.iter().map(|(&i, c)| json!([i, c.to_string()])).collect())
}

pub fn vector_from_json(value: &Value) -> Result<SparseVector> {
    let bad = || Error::Parse(format!("expected [[index, \"p/q\"], ...], got {value}"));
    let entries = value.as_array().ok_or_else(bad)?;
    let mut out = SparseVector::new();
    for entry in entries {
        let pair = entry.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
        let index = pair[0].as_i64().ok_or_else(bad)?;
        let c: Rational = pair[1].as_str().ok_or_else(bad)?.parse()?;
        out.add_term(index, &c);
    }
    Ok(out)
}
