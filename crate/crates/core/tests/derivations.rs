mod common;

use common::{random_element, raw_derivation_dimension, rng, small_rational};
use rand::Rng;
use twolocal_core::derivation::{
    default_depth, derivation_space_basis, extend_from_generators, leibniz_check, recover_inner_witt,
    recover_inner_wplus, thin_derivation, Extension, ThinDerivationParams,
};
use twolocal_core::{ad, ad_on, Algebra, Element, Rational, Window};

#[test]
fn wplus_inner_roundtrip() {
    let mut rng = rng(0x5eed_0001);
    for _ in 0..200 {
        let a = random_element(&mut rng, Algebra::PositiveWittExtended, 0, 10, 6, 9);
        let d = ad_on(&a, Algebra::PositiveWitt, Window::new(1, 2 * 12 + 3)).unwrap();
        assert_eq!(recover_inner_wplus(&d).unwrap(), a);
    }
}

#[test]
fn witt_inner_roundtrip() {
    let mut rng = rng(0x5eed_0002);
    for _ in 0..100 {
        let a = random_element(&mut rng, Algebra::Witt, -8, 8, 6, 9);
        let d = ad(&a, Window::new(-20, 20)).unwrap();
        assert_eq!(recover_inner_witt(&d).unwrap(), a);
    }
}

#[test]
fn extension_reproduces_inner_maps() {
    let mut rng = rng(0x5eed_0003);
    let alg = Algebra::PositiveWitt;
    for _ in 0..50 {
        let a = random_element(&mut rng, Algebra::PositiveWittExtended, 0, 8, 5, 9);
        let n = 20;
        let inner = ad_on(&a, alg, Window::new(1, n)).unwrap();
        let out = extend_from_generators(alg, inner.image(1).unwrap(), inner.image(2).unwrap(), n).unwrap();
        assert_eq!(out, Extension::Consistent(inner));
    }
}

fn random_params(rng: &mut impl Rng) -> ThinDerivationParams {
    let n = rng.random_range(1..=8);
    let pick = |rng: &mut _| -> Rational {
        if rng_bool(rng) {
            small_rational(rng, 9)
        } else {
            Rational::zero()
        }
    };
    let alpha = (0..n).map(|_| pick(rng)).collect();
    let beta = (0..n - 1).map(|_| pick(rng)).collect();
    ThinDerivationParams::new(alpha, beta)
}

fn rng_bool(rng: &mut impl Rng) -> bool {
    rng.random_bool(0.7)
}

#[test]
fn thin_derivations_satisfy_leibniz() {
    let mut rng = rng(0x5eed_0004);
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let d = thin_derivation(&p, 30).unwrap();
        for depth in [3, 10, 30] {
            assert!(leibniz_check(&d, depth).unwrap().passed(), "{p:?}");
        }
        // The same table is what the generator extension produces.
        let ext = extend_from_generators(Algebra::Thin, d.image(1).unwrap(), d.image(2).unwrap(), 30).unwrap();
        assert_eq!(ext, Extension::Consistent(d));
    }
}

#[test]
fn thin_space_matches_raw_oracle_and_closed_form() {
    for n in 1..=8 {
        let m = default_depth(n);
        let space = derivation_space_basis(Algebra::Thin, n, m).unwrap();
        let expected = (2 * n - 1) as usize;
        assert_eq!(space.dim(), expected, "n={n}");
        assert_eq!(raw_derivation_dimension(Algebra::Thin, n, m), expected, "oracle n={n}");
        for b in space.basis.basis() {
            let (e1, e2) = space.generator_images(b).unwrap();
            let p = ThinDerivationParams::read_off(&e1, &e2).unwrap();
            let Extension::Consistent(d) = space.table(b, 30).unwrap() else {
                panic!()
            };
            assert_eq!(thin_derivation(&p, 30).unwrap(), d);
        }
    }
}

#[test]
fn wplus_space_matches_raw_oracle_and_is_inner() {
    for n in 1..=8 {
        let m = default_depth(n);
        let space = derivation_space_basis(Algebra::PositiveWitt, n, m).unwrap();
        assert_eq!(space.dim(), n as usize, "n={n}");
        assert_eq!(
            raw_derivation_dimension(Algebra::PositiveWitt, n, m),
            n as usize,
            "oracle n={n}"
        );
        for b in space.basis.basis() {
            let Extension::Consistent(d) = space.table(b, 2 * (n + 1) + 3).unwrap() else {
                panic!()
            };
            let a = recover_inner_wplus(&d).unwrap();
            assert!(a.coeffs().supported_in(&Window::new(0, n - 1)), "{a}");
        }
    }
}

#[test]
fn table_extension_is_linear() {
    let mut rng = rng(0x5eed_0005);
    for _ in 0..30 {
        let d = thin_derivation(&random_params(&mut rng), 15).unwrap();
        let x = random_element(&mut rng, Algebra::Thin, 1, 15, 4, 5);
        let y = random_element(&mut rng, Algebra::Thin, 1, 15, 4, 5);
        let (s, t) = (small_rational(&mut rng, 5), small_rational(&mut rng, 5));
        let lhs = d.apply(&x.scale(&s).add(&y.scale(&t)).unwrap()).unwrap();
        let rhs = d
            .apply(&x)
            .unwrap()
            .scale(&s)
            .add(&d.apply(&y).unwrap().scale(&t))
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn zero_map_is_a_derivation_everywhere() {
    let z = Element::zero(Algebra::PositiveWitt);
    let Extension::Consistent(d) = extend_from_generators(Algebra::PositiveWitt, &z, &z, 9).unwrap() else {
        panic!()
    };
    assert!(d.is_zero());
    assert!(recover_inner_wplus(&d).unwrap().is_zero());
}
