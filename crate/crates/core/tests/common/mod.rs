//! Test-only helpers: a seeded generator and an independent derivation-space
//! oracle that works on the raw Leibniz constraint matrix with its own
//! structure constants and its own elimination.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twolocal_core::{Algebra, Element, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational with numerator and denominator bounded by `bound`.
pub fn small_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    let p = loop {
        let p = rng.random_range(-bound..=bound);
        if p != 0 {
            break p;
        }
    };
    Rational::new(p, rng.random_range(1..=bound))
}

/// Random element with `terms` draws over `lo..=hi`.
pub fn random_element(rng: &mut impl Rng, alg: Algebra, lo: i64, hi: i64, terms: usize, bound: i64) -> Element {
    let t: Vec<(i64, Rational)> = (0..terms)
        .map(|_| (rng.random_range(lo..=hi), small_rational(rng, bound)))
        .collect();
    Element::from_terms(alg, t).unwrap()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `[e_i, e_j]` written out independently of the library.
fn structure(alg: Algebra, i: i64, j: i64) -> Option<(i64, i64)> {
    match alg {
        Algebra::Thin => match (i, j) {
            (1, n) if n >= 2 => Some((n + 1, 1)),
            (n, 1) if n >= 2 => Some((n + 1, -1)),
            _ => None,
        },
        _ => (i != j).then_some((i + j, j - i)),
    }
}

/// Rank of a set of sparse rows, by plain forward elimination.
fn rank(rows: Vec<BTreeMap<usize, BigRational>>) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
    for mut row in rows {
        while let Some((&c, v)) = row.iter().next() {
            let v = v.clone();
            match pivots.get(&c) {
                Some(p) => {
                    for (&k, pv) in p {
                        let e = row.entry(k).or_insert_with(BigRational::zero);
                        *e -= &v * pv;
                        if e.is_zero() {
                            row.remove(&k);
                        }
                    }
                }
                None => {
                    let inv = BigRational::one() / v;
                    for x in row.values_mut() {
                        *x *= &inv;
                    }
                    pivots.insert(c, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Dimension of the space of derivations on `1..=depth`, with `D(e_k)`
/// unknown on `e_1..e_{top(k)}` and every Leibniz relation `i < j`,
/// `i + j <= depth` imposed. `D(e_1)`, `D(e_2)` determine the rest along
/// `[e_1, e_k]`, so this equals the dimension of the generator-image space.
pub fn raw_derivation_dimension(alg: Algebra, n: i64, depth: i64) -> usize {
    let top = |k: i64| match (alg, k) {
        (Algebra::Thin, 1 | 2) => n,
        (Algebra::Thin, k) => k + n,
        (_, k) => k + n - 1,
    };
    let mut var = BTreeMap::new();
    for k in 1..=depth {
        for t in 1..=top(k) {
            let id = var.len();
            var.insert((k, t), id);
        }
    }
    let mut eqs: BTreeMap<(i64, i64, i64), BTreeMap<usize, BigRational>> = BTreeMap::new();
    let mut push = |key: (i64, i64), t: i64, id: usize, c: BigRational| {
        let e = eqs
            .entry((key.0, key.1, t))
            .or_default()
            .entry(id)
            .or_insert_with(BigRational::zero);
        *e += c;
    };
    for i in 1..=depth {
        for j in (i + 1)..=depth {
            if i + j > depth {
                continue;
            }
            // D([e_i, e_j]) = c D(e_{i+j})
            if let Some((k, c)) = structure(alg, i, j) {
                for t in 1..=top(k) {
                    push((i, j), t, var[&(k, t)], q(c));
                }
            }
            // - [D(e_i), e_j] = - sum_t u(i,t) [e_t, e_j]
            for t in 1..=top(i) {
                if let Some((s, c)) = structure(alg, t, j) {
                    push((i, j), s, var[&(i, t)], q(-c));
                }
            }
            // - [e_i, D(e_j)]
            for t in 1..=top(j) {
                if let Some((s, c)) = structure(alg, i, t) {
                    push((i, j), s, var[&(j, t)], q(-c));
                }
            }
        }
    }
    let rows: Vec<_> = eqs
        .into_values()
        .map(|mut r| {
            r.retain(|_, v| !v.is_zero());
            r
        })
        .collect();
    var.len() - rank(rows)
}
