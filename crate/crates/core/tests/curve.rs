mod common;

use common::{affine_points, curve, deriv, eval_bits, point_count};
use ffd_core::field::Fe;
use ffd_core::picard::{class_eq, h0, Divisor};
use ffd_core::{load_curve, CurveConfig, Error, Func, RatFunc};
use proptest::prelude::*;

#[test]
fn place_counts_match_point_counts() {
    for (m, g, rmax) in [(1u8, 2usize, 3usize), (1, 3, 3), (2, 2, 2), (2, 3, 2)] {
        let c = curve(m, g);
        let n: Vec<usize> = (1..=rmax).map(|d| c.places_of_degree(d).unwrap().len()).collect();
        for r in 1..=rmax {
            let weighted: usize = (1..=r).filter(|d| r % d == 0).map(|d| d * n[d - 1]).sum();
            assert_eq!(weighted, point_count(&c, m * r as u8), "m={m} g={g} r={r}");
        }
    }
    assert_eq!(curve(1, 2).rational_places().len(), 3);
}

#[test]
fn place_list_is_deterministic() {
    let ids = |c: &ffd_core::CurveModel| -> Vec<String> {
        c.enumerate_places(2).unwrap().iter().map(|p| format!("{}:{}", p.id(), p.pi())).collect()
    };
    let a = ids(&curve(2, 3));
    assert_eq!(a, ids(&curve(2, 3)));
    let d1 = a.iter().filter(|s| s.starts_with("d1.")).count();
    assert!(a.iter().take(1 + d1).all(|s| s.starts_with("inf") || s.starts_with("d1.")));
    let c = curve(2, 3);
    for p in c.enumerate_places(2).unwrap() {
        assert_eq!(c.place_by_id(&p.id()).unwrap(), p);
    }
    assert!(matches!(c.place_by_id("d1.99"), Err(Error::UnknownPlace(_))));
}

#[test]
fn canonical_class_from_two_differentials() {
    for g in [2, 3] {
        let c = curve(1, g);
        let k = c.canonical_divisor();
        assert_eq!(k.degree(), 2 * c.g() - 2);
        assert_eq!(h0(&c, &k).unwrap(), g);
        // h dy = (h' y + f') dx, so div(dy) is supported on supp K and the divisor of that ratio
        let m = c.m();
        let ratio = Func::new(
            RatFunc::new(c.f().deriv(), c.h().clone()),
            RatFunc::new(c.h().deriv(), c.h().clone()),
        );
        let mut support: Vec<_> = k.terms().map(|(p, _)| p.clone()).collect();
        support.extend(c.div_of(&ratio).unwrap().terms().map(|(p, _)| p.clone()));
        support.sort();
        support.dedup();
        let mut dy = Divisor::zero();
        for p in &support {
            dy.add_term(p, c.differential_valuation(p, &Func::y(m)).unwrap());
        }
        assert_eq!(dy.degree(), 2 * c.g() - 2);
        assert!(class_eq(&c, &dy, &k));
    }
}

#[test]
fn unsupported_models_are_rejected() {
    let load = |h: &[u8], f: &[u8]| load_curve(&CurveConfig::new(1, h, f));
    assert!(matches!(load(&[0], &[0, 0, 0, 0, 0, 1]), Err(Error::UnsupportedModel(_))));
    assert!(matches!(load(&[1], &[0, 0, 0, 0, 1]), Err(Error::UnsupportedModel(_))));
    assert!(matches!(load(&[1], &[0, 0, 0, 1]), Err(Error::GenusTooSmall(1))));
    assert!(matches!(load_curve(&CurveConfig::new(1, &[2], &[1])), Err(Error::Parse(_))));
}

/// A singular affine point over GF(2^r), r <= 3: F = F_x = F_y = 0 with
/// F_y = h and F_x = h' y + f'.
fn brute_force_singular(h: &[u8], f: &[u8]) -> bool {
    let (dh, df) = (deriv(h), deriv(f));
    (1..=3u8).any(|r| {
        affine_points(h, f, r).into_iter().any(|(x, y): (Fe, Fe)| {
            eval_bits(h, x).is_zero() && (eval_bits(&dh, x) * y + eval_bits(&df, x)).is_zero()
        })
    })
}

fn model() -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (2usize..=3).prop_flat_map(|g| {
        let h = proptest::collection::vec(0u8..=1, g + 1).prop_filter("h != 0", |h| h.iter().any(|&b| b == 1));
        let f = proptest::collection::vec(0u8..=1, 2 * g + 1).prop_map(|mut f| {
            f.push(1);
            f
        });
        (h, f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn smoothness_matches_jacobian_criterion((h, f) in model()) {
        let res = load_curve(&CurveConfig::new(1, &h, &f));
        let singular = brute_force_singular(&h, &f);
        match res {
            Ok(c) => {
                prop_assert!(!singular);
                let k = c.canonical_divisor();
                prop_assert_eq!(k.degree(), 2 * c.g() - 2);
                prop_assert_eq!(h0(&c, &k).unwrap(), c.genus());
            }
            Err(Error::SingularModel(_)) => prop_assert!(singular),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }
}
