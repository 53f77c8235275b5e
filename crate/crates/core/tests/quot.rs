mod common;

use common::curve;
use ffd_core::frobenius::{frob_push, frob_push_line, raynaud_b};
use ffd_core::picard::{enumerate_pic, Divisor, DivisorClass};
use ffd_core::quot::*;
use ffd_core::sheaves::{det_and_deg, line_bundle, twist};
use ffd_core::CurveModel;

/// V lies in Q* iff it is contained in no F_*(L(-P)) for P in its support.
fn qstar_oracle(c: &CurveModel, l: &DivisorClass, qp: &QuotPoint) -> bool {
    qp.delta.terms().all(|(p, _)| {
        let lp = twist(c, &line_bundle(c, l), &Divisor::point(p).neg()).unwrap();
        let (sub, _) = frob_push(c, &lp).unwrap();
        !sub.contains(&qp.sub).unwrap()
    })
}

fn check_points(c: &CurveModel, l: &DivisorClass, pts: &[QuotPoint]) {
    let b = raynaud_b(c).unwrap();
    let (e, _) = frob_push_line(c, l).unwrap();
    for qp in pts {
        let k = qp.colength() as i64;
        assert!(e.contains(&qp.sub).unwrap());
        assert!(qp.delta.is_effective());
        let (det, d) = det_and_deg(c, &qp.sub).unwrap();
        assert_eq!(d, e.degree(c) - k);
        assert_eq!(det, l.add(c, &b).sub(c, &DivisorClass::of_divisor(c, &qp.delta)));
        assert_eq!(support_of(c, &e, &qp.sub).unwrap(), qp.delta);
        assert_eq!(qp.in_qstar, qstar_oracle(c, l, qp));
        let back = locate(c, l, &qp.sub).unwrap();
        assert_eq!(back.delta, qp.delta);
        assert_eq!(back.local_data, qp.local_data);
        assert_eq!(back.in_qstar, qp.in_qstar);
    }
    // distinct labels give distinct sub-modules
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            if a.delta == b.delta {
                assert_ne!(a.local_data, b.local_data);
                assert!(!a.sub.lattice_eq(&b.sub).unwrap());
            }
        }
    }
}

#[test]
fn colength_one_and_two_points() {
    for (m, g) in [(1, 2), (1, 3), (2, 2)] {
        let c = curve(m, g);
        let q = 1u32 << m;
        let l = &enumerate_pic(&c, 1)[1];
        for k in 0..=if m == 1 { 2 } else { 1 } {
            let pts = quot_points(&c, l, k, QuotOptions::default()).unwrap();
            check_points(&c, l, &pts);
            assert!(pts.iter().all(|p| p.colength() == k));
        }
        let places = c.enumerate_places(2).unwrap();
        for p in &places {
            let d1 = Divisor::point(p);
            let pts = quot_points_at(&c, l, &d1).unwrap();
            assert_eq!(pts.len() as u32, q.pow(p.deg() as u32) + 1, "at {}", p.id());
            check_points(&c, l, &pts);
        }
        let rational: Vec<_> = places.iter().filter(|p| p.deg() == 1).collect();
        // multiplicity-free: product of local counts
        let d2 = Divisor::point(rational[1]).add(&Divisor::point(rational[2]));
        assert_eq!(quot_points_at(&c, l, &d2).unwrap().len() as u32, (q + 1) * (q + 1));
        // a double point: q^2 + q + 1
        let dd = Divisor::point(rational[0]).scale(2);
        let pts = quot_points_at(&c, l, &dd).unwrap();
        assert_eq!(pts.len(), quot_local_count(q, 2));
        assert_eq!(pts.len() as u32, q * q + q + 1);
        check_points(&c, l, &pts);
    }
}

#[test]
fn local_count_is_a_q_integer() {
    // the count enumerates pairs of generators: keep q^(4l) small
    for (q, top) in [(2u32, 3usize), (4, 2), (8, 1)] {
        for l in 0..=top {
            let want: u32 = (0..=l as u32).map(|a| q.pow(a)).sum();
            assert_eq!(quot_local_count(q, l) as u32, want);
        }
    }
}

#[test]
fn push_forward_inclusion_has_colength_one() {
    let c = curve(1, 3);
    for l in enumerate_pic(&c, 0).iter().take(3) {
        let lb = line_bundle(&c, l);
        let (small, _) = frob_push(&c, &lb).unwrap();
        for p in c.enumerate_places(1).unwrap() {
            let (big, _) = frob_push(&c, &twist(&c, &lb, &Divisor::point(&p)).unwrap()).unwrap();
            assert!(big.contains(&small).unwrap());
            assert_eq!(support_of(&c, &big, &small).unwrap(), Divisor::point(&p));
        }
    }
}

#[test]
fn colength_bound() {
    let c = curve(1, 2);
    let l = &enumerate_pic(&c, 0)[0];
    assert!(quot_points(&c, l, 3, QuotOptions::default()).is_err());
    let p = &c.enumerate_places(1).unwrap()[0];
    assert!(quot_points_at(&c, l, &Divisor::point(p).neg()).is_err());
}
