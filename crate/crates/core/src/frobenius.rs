//! Frobenius pull-back of bundles, push-forward of line bundles and the
//! theta characteristic B = det F_*O.
//!
//! K is free of rank 2 over its subfield of squares with basis {1, x};
//! `F_*` is the coordinate map `z = z0^2 + x z1^2 -> (z0, z1)`.

use crate::curve::{CurveModel, Func};
use crate::error::{Error, Result};
use crate::lattice::{span, Fin, Inf, Mat};
use crate::picard::{canonical_class, DivisorClass};
use crate::ratfunc::RatFunc;
use crate::sheaves::{
    det_and_deg, from_funcs, hom_space, line_bundle, line_class, saturation, scale_vec, t_inf, to_funcs,
    LatticePair, SheafMap,
};

/// F*V: square all lattice data and take the generated module.
pub fn frob_pull(c: &CurveModel, v: &LatticePair) -> Result<LatticePair> {
    let build = |basis: &Mat, z: &Func| -> Vec<Vec<RatFunc>> {
        let mut gens = Vec::new();
        for b in &basis.cols {
            let sq = from_funcs(&to_funcs(b).iter().map(|w| c.ffrob(w)).collect::<Vec<_>>());
            gens.push(scale_vec(c, z, &sq));
            gens.push(sq);
        }
        gens
    };
    let n = 2 * v.rank();
    LatticePair::from_generators(
        v.rank(),
        &build(v.fin(), &Func::y(c.m())),
        &build(v.inf(), &t_inf(c)),
    )
    .and_then(|p| {
        debug_assert_eq!(p.fin().rows, n);
        Ok(p)
    })
}

/// Class of F*O(D): the divisor doubles.
pub fn frob_pull_class(c: &CurveModel, d: &DivisorClass) -> DivisorClass {
    d.mul(c, 2)
}

/// Writes `z = z0^2 + x z1^2`.
pub fn split_squares(c: &CurveModel, z: &Func) -> (Func, Func) {
    let sp = |r: &RatFunc| r.split_even_odd();
    // y = Y0^2 + x Y1^2 with Y_i = (y h_i + (f h)_i) / h
    let (h0, h1) = c.h().split_even_odd();
    let (fh0, fh1) = c.f().mul(c.h()).split_even_odd();
    let hinv = RatFunc::from_poly(c.h().clone()).inv();
    let y0 = Func::new(RatFunc::from_poly(fh0).mul(&hinv), RatFunc::from_poly(h0).mul(&hinv));
    let y1 = Func::new(RatFunc::from_poly(fh1).mul(&hinv), RatFunc::from_poly(h1).mul(&hinv));
    let (a0, a1) = sp(&z.a);
    let (b0, b1) = sp(&z.b);
    let x = RatFunc::x(c.m());
    let z0 = Func::from_ratfunc(a0).add(&y0.scale(&b0)).add(&y1.scale(&b1.mul(&x)));
    let z1 = Func::from_ratfunc(a1).add(&y1.scale(&b0)).add(&y0.scale(&b1));
    (z0, z1)
}

/// F_*L for a rank-1 pair, with the counit `F*(F_*L) -> L`, `(w0, w1) -> w0 + x w1`.
pub fn frob_push(c: &CurveModel, l: &LatticePair) -> Result<(LatticePair, SheafMap)> {
    if l.rank() != 1 {
        return Err(Error::RankMismatch { expected: 1, found: l.rank() });
    }
    let m = c.m();
    let phi = |z: &Func| -> Vec<RatFunc> {
        let (z0, z1) = split_squares(c, z);
        from_funcs(&[z0, z1])
    };
    let build = |basis: &Mat, s: &RatFunc| -> Vec<Vec<RatFunc>> {
        let mut gens = Vec::new();
        for b in &basis.cols {
            let z = Func::new(b[0].clone(), b[1].clone());
            gens.push(phi(&z));
            gens.push(phi(&z.scale(s)));
        }
        gens
    };
    let fin = span::<Fin>(4, &build(l.fin(), &RatFunc::x(m)))?;
    let inf = span::<Inf>(4, &build(l.inf(), &RatFunc::x_pow(-1, m)))?;
    let pushed = LatticePair::from_bases(2, fin, inf);
    let counit = SheafMap {
        source: frob_pull(c, &pushed)?,
        target: l.clone(),
        matrix: vec![Func::one(m), Func::from_ratfunc(RatFunc::x(m))],
    };
    Ok((pushed, counit))
}

pub fn frob_push_line(c: &CurveModel, l: &DivisorClass) -> Result<(LatticePair, SheafMap)> {
    frob_push(c, &line_bundle(c, l))
}

/// Whether a map into a line bundle is surjective (image lattices equal the target).
pub fn is_surjective_onto_line(c: &CurveModel, phi: &SheafMap) -> Result<bool> {
    let img = |basis: &Mat| -> Vec<Vec<RatFunc>> {
        basis.cols.iter().map(|b| from_funcs(&phi.apply(c, &to_funcs(b)))).collect()
    };
    let fin = span::<Fin>(2, &img(phi.source.fin()))?;
    let inf = span::<Inf>(2, &img(phi.source.inf()))?;
    LatticePair::from_bases(1, fin, inf).lattice_eq(&phi.target)
}

/// Kernel of the counit `F*(F_*L) -> L`: the saturated line spanned by (x, 1).
pub fn counit_kernel(c: &CurveModel, counit: &SheafMap) -> Result<LatticePair> {
    let m = c.m();
    saturation(c, &counit.source, &[Func::from_ratfunc(RatFunc::x(m)), Func::one(m)])
}

/// B = det F_*O, checked against 2B = K.
pub fn raynaud_b(c: &CurveModel) -> Result<DivisorClass> {
    let (o, _) = frob_push_line(c, &DivisorClass::zero(c))?;
    let (b, deg) = det_and_deg(c, &o)?;
    if deg != c.g() - 1 || b.mul(c, 2) != canonical_class(c) {
        return Err(Error::ThetaCheckFailed);
    }
    Ok(b)
}

#[derive(Clone, Debug)]
pub struct ExtensionSplitting {
    pub splits: bool,
    pub hom_dim: usize,
    /// A section of the quotient map with `counit . section = 1`.
    pub section: Option<SheafMap>,
}

/// Whether `0 -> xi + B -> F*F_*(xi - B) -> xi - B -> 0` splits.
pub fn extension_splitting(c: &CurveModel, xi: &DivisorClass) -> Result<ExtensionSplitting> {
    let b = raynaud_b(c)?;
    let lq = xi.sub(c, &b);
    let (_, counit) = frob_push_line(c, &lq)?;
    let quot = counit.target.clone();
    let homs = hom_space(c, &quot, &counit.source)?;
    let hom_dim = homs.len();
    for s in homs {
        let comp = counit.apply(c, &s.matrix);
        // End(L) = k: the composition is a constant
        let k = &comp[0];
        if !k.is_zero() {
            let inv = c.finv(k)?;
            let section = SheafMap { matrix: s.matrix.iter().map(|z| c.fmul(z, &inv)).collect(), ..s };
            return Ok(ExtensionSplitting { splits: true, hom_dim, section: Some(section) });
        }
    }
    Ok(ExtensionSplitting { splits: false, hom_dim, section: None })
}

pub fn extension_splitting_check(c: &CurveModel, xi: &DivisorClass) -> Result<bool> {
    Ok(extension_splitting(c, xi)?.splits)
}

/// Class of the counit kernel of F*F_*L; equals L + 2B.
pub fn counit_kernel_class(c: &CurveModel, l: &DivisorClass) -> Result<DivisorClass> {
    let (_, counit) = frob_push_line(c, l)?;
    line_class(c, &counit_kernel(c, &counit)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{load_curve, CurveConfig};
    use crate::picard::enumerate_pic;

    fn curve(m: u8, g: usize) -> CurveModel {
        load_curve(&CurveConfig::artin_schreier(m, g)).unwrap()
    }

    #[test]
    fn square_decomposition() {
        let c = curve(2, 2);
        let m = c.m();
        let z = Func::new(
            RatFunc::new(crate::Poly::from_bits(&[3, 0, 1, 2], m), crate::Poly::from_bits(&[1, 1], m)),
            RatFunc::x_pow(3, m),
        );
        let (z0, z1) = split_squares(&c, &z);
        let back = c.ffrob(&z0).add(&c.ffrob(&z1).scale(&RatFunc::x(m)));
        assert_eq!(back, z);
    }

    #[test]
    fn push_forward_degrees_and_sections() {
        let c = curve(1, 2);
        for e in 0..=3 {
            for l in enumerate_pic(&c, e).iter().take(5) {
                let (v, counit) = frob_push_line(&c, l).unwrap();
                assert_eq!(v.degree(&c), e + c.g() - 1);
                assert_eq!(v.h0().unwrap(), line_bundle(&c, l).h0().unwrap());
                assert!(is_surjective_onto_line(&c, &counit).unwrap());
                assert_eq!(counit.source.degree(&c), 2 * (e + c.g() - 1));
            }
        }
    }

    #[test]
    fn theta_characteristic() {
        for g in [2, 3] {
            let c = curve(1, g);
            let b = raynaud_b(&c).unwrap();
            assert_eq!(b.degree(), c.g() - 1);
            let d = b.mul(&c, 2).representative(&c).unwrap();
            assert_eq!(crate::picard::h0(&c, &d).unwrap(), g);
        }
    }

    #[test]
    fn pull_back_doubles_line_classes() {
        let c = curve(2, 2);
        for l in enumerate_pic(&c, 1).iter().take(6) {
            let p = frob_pull(&c, &line_bundle(&c, l)).unwrap();
            assert_eq!(line_class(&c, &p).unwrap(), frob_pull_class(&c, l));
        }
    }

    #[test]
    fn counit_kernel_is_l_plus_2b() {
        let c = curve(1, 2);
        let b = raynaud_b(&c).unwrap();
        for l in enumerate_pic(&c, 1) {
            assert_eq!(counit_kernel_class(&c, &l).unwrap(), l.add(&c, &b.mul(&c, 2)));
        }
    }

    #[test]
    fn splitting_parity() {
        let c = curve(1, 2);
        let b = raynaud_b(&c).unwrap();
        for e in [2, 3] {
            for xi in enumerate_pic(&c, e).iter().take(4) {
                let s = extension_splitting(&c, xi).unwrap();
                assert_eq!(s.splits, (e - b.degree()) % 2 == 0);
                if !s.splits {
                    assert_eq!(s.hom_dim, 2);
                }
            }
        }
    }
}
