//! Co-length-l sub-modules of F_*L (points of the Quot scheme), the
//! surjectivity locus Q* and the support map.
//!
//! A modification at a place P of local length n is labelled by the column
//! Hermite form `[[t^a, c], [0, t^b]]`, a + b = n, c a polynomial in the
//! uniformizer t of degree < a with residue-field coefficients, taken with
//! respect to a deterministic local frame of the ambient bundle.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveModel, Func, Place, PlaceKind};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::frobenius::{frob_pull, frob_push_line, is_surjective_onto_line};
use crate::lattice::{self, span, Fin, Inf, Mat};
use crate::linalg;
use crate::picard::{Divisor, DivisorClass, DivisorLiteral};
use crate::ratfunc::RatFunc;
use crate::sheaves::{scale_vec, t_inf, twist, LatticePair, SheafMap};

pub const MAX_COLENGTH: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LocalLabel {
    pub place: String,
    pub a: u32,
    pub b: u32,
    /// Coefficients of c in t; each residue element as base-field coordinates.
    pub c: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct QuotPoint {
    pub ambient: LatticePair,
    pub sub: LatticePair,
    pub delta: Divisor,
    pub in_qstar: bool,
    pub local_data: Vec<LocalLabel>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct QuotOptions {
    /// Allow degree-2 places in the support (l = 2 only).
    pub degree_two_support: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotPointJson {
    #[serde(rename = "L")]
    pub l_class: DivisorLiteral,
    pub l: usize,
    pub delta: DivisorLiteral,
    pub local_data: Vec<LocalLabel>,
    #[serde(rename = "in_Qstar")]
    pub in_qstar: bool,
}

impl QuotPoint {
    pub fn colength(&self) -> usize {
        self.delta.degree() as usize
    }

    pub fn to_json(&self, c: &CurveModel, l: &DivisorClass) -> QuotPointJson {
        QuotPointJson {
            l_class: l.literal(c),
            l: self.colength(),
            delta: self.delta.literal(),
            local_data: self.local_data.clone(),
            in_qstar: self.in_qstar,
        }
    }
}

pub fn delta_map(qp: &QuotPoint) -> Divisor {
    qp.delta.clone()
}

/// A function with valuation 1 at P.
fn uniformizer(c: &CurveModel, p: &Place) -> Func {
    let m = c.m();
    match p.kind() {
        PlaceKind::Infinity => t_inf(c),
        PlaceKind::Ramified => {
            let t = Func::new(RatFunc::from_poly(p.v0().clone()), RatFunc::one(m));
            if c.valuation(p, &t) == 1 {
                t
            } else {
                t.add(&Func::from_poly(p.pi().clone()))
            }
        }
        _ => Func::from_poly(p.pi().clone()),
    }
}

/// Lifts of a basis of the residue field at P over the ground field.
fn residue_basis(c: &CurveModel, p: &Place) -> Vec<Func> {
    let m = c.m();
    if p.deg() == 1 {
        vec![Func::one(m)]
    } else if p.kind() == PlaceKind::Inert {
        vec![Func::one(m), Func::y(m)]
    } else {
        vec![Func::one(m), Func::from_ratfunc(RatFunc::x(m))]
    }
}

fn residue_elements(c: &CurveModel, p: &Place) -> Vec<Vec<u32>> {
    let q = 1u32 << c.m();
    let n = residue_basis(c, p).len();
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (0..q).map(move |a| [v.clone(), vec![a]].concat())).collect();
    }
    out
}

fn lift(c: &CurveModel, basis: &[Func], coords: &[u32]) -> Func {
    basis
        .iter()
        .zip(coords)
        .fold(Func::from_ratfunc(RatFunc::zero(c.m())), |acc, (b, &a)| acc.add(&b.scale_fe(Fe::new(a, c.m()))))
}

fn single_point(p: &Place, n: i64) -> Divisor {
    let mut d = Divisor::zero();
    d.add_term(p, n);
    d
}

/// Local data at a place: the relevant lattice, the ring marker and `m_P^n E`.
struct Local<'a> {
    c: &'a CurveModel,
    p: Place,
    e: &'a LatticePair,
    t: Func,
    frame: (Vec<RatFunc>, Vec<RatFunc>),
}

impl<'a> Local<'a> {
    fn new(c: &'a CurveModel, e: &'a LatticePair, p: &Place) -> Result<Local<'a>> {
        let t = uniformizer(c, p);
        let me = twist(c, e, &single_point(p, -1))?;
        let inf = p.is_infinity();
        let (basis, small) = if inf { (e.inf(), me.inf()) } else { (e.fin(), me.fin()) };
        for i in 0..basis.ncols() {
            for j in (i + 1)..basis.ncols() {
                let (bi, bj) = (&basis.cols[i], &basis.cols[j]);
                let ok = Self::span_with(c, small, &[bi.clone(), bj.clone()], inf)
                    .and_then(|s| if inf { lattice::lattice_eq::<Inf>(&s, basis) } else { lattice::lattice_eq::<Fin>(&s, basis) })?;
                if ok {
                    return Ok(Local { c, p: p.clone(), e, t, frame: (bi.clone(), bj.clone()) });
                }
            }
        }
        Err(Error::InternalInconsistency(format!("no local frame at {}", p.id())))
    }

    /// Lattice spanned by `base` and the O-modules generated by `vs`.
    fn span_with(c: &CurveModel, base: &Mat, vs: &[Vec<RatFunc>], inf: bool) -> Result<Mat> {
        let z = if inf { t_inf(c) } else { Func::y(c.m()) };
        let mut gens = base.cols.clone();
        for v in vs {
            gens.push(v.clone());
            gens.push(scale_vec(c, &z, v));
        }
        if inf {
            span::<Inf>(base.rows, &gens)
        } else {
            span::<Fin>(base.rows, &gens)
        }
    }

    fn labels(&self, n: u32) -> Vec<LocalLabel> {
        let res = residue_elements(self.c, &self.p);
        let mut out = Vec::new();
        for a in 0..=n {
            let mut cs: Vec<Vec<Vec<u32>>> = vec![vec![]];
            for _ in 0..a {
                cs = cs.into_iter().flat_map(|v| res.iter().map(move |r| [v.clone(), vec![r.clone()]].concat())).collect();
            }
            for c in cs {
                out.push(LocalLabel { place: self.p.id(), a, b: n - a, c });
            }
        }
        out
    }

    /// The sub-module of E equal to E away from P with the given label at P.
    fn modification(&self, lab: &LocalLabel) -> Result<LatticePair> {
        let c = self.c;
        let n = (lab.a + lab.b) as i64;
        let small = twist(c, self.e, &single_point(&self.p, -n))?;
        let rb = residue_basis(c, &self.p);
        let tp = |k: u32| (0..k).fold(Func::one(c.m()), |acc, _| c.fmul(&acc, &self.t));
        let mut cf = Func::from_ratfunc(RatFunc::zero(c.m()));
        for (i, co) in lab.c.iter().enumerate() {
            cf = cf.add(&c.fmul(&lift(c, &rb, co), &tp(i as u32)));
        }
        let (s1, s2) = &self.frame;
        let v1 = scale_vec(c, &tp(lab.a), s1);
        let v2: Vec<RatFunc> =
            scale_vec(c, &cf, s1).iter().zip(scale_vec(c, &tp(lab.b), s2)).map(|(x, y)| x.add(&y)).collect();
        let inf = self.p.is_infinity();
        let base = if inf { small.inf() } else { small.fin() };
        let m = Self::span_with(c, base, &[v1, v2], inf)?;
        Ok(if inf {
            LatticePair::from_bases(self.e.rank(), self.e.fin().clone(), m)
        } else {
            LatticePair::from_bases(self.e.rank(), m, self.e.inf().clone())
        })
    }
}

/// Effective divisors of degree `l` on the allowed places, in canonical order.
fn patterns(c: &CurveModel, l: usize, opts: QuotOptions) -> Result<Vec<Divisor>> {
    let rat = c.rational_places();
    let mut out = Vec::new();
    match l {
        0 => out.push(Divisor::zero()),
        1 => out.extend(rat.iter().map(Divisor::point)),
        2 => {
            for (i, p) in rat.iter().enumerate() {
                out.push(single_point(p, 2));
                for q in &rat[i + 1..] {
                    out.push(Divisor::point(p).add(&Divisor::point(q)));
                }
            }
            if opts.degree_two_support {
                out.extend(c.places_of_degree(2)?.iter().map(Divisor::point));
            }
        }
        _ => return Err(Error::UnsupportedColength(l)),
    }
    Ok(out)
}

fn glue(c: &CurveModel, e: &LatticePair, mods: &[(Place, LatticePair)]) -> Result<LatticePair> {
    let mut fin = e.fin().clone();
    let mut inf = e.inf().clone();
    for (p, v) in mods {
        if p.is_infinity() {
            inf = v.inf().clone();
        } else {
            fin = lattice::intersect::<Fin>(&fin, v.fin())?;
        }
    }
    let _ = c;
    Ok(LatticePair::from_bases(e.rank(), fin, inf))
}

fn in_qstar(c: &CurveModel, sub: &LatticePair, counit: &SheafMap) -> Result<bool> {
    let map = SheafMap { source: frob_pull(c, sub)?, target: counit.target.clone(), matrix: counit.matrix.clone() };
    is_surjective_onto_line(c, &map)
}

/// All co-length-l sub-modules of F_*L supported on the allowed places.
pub fn quot_points(c: &CurveModel, l_cls: &DivisorClass, l: usize, opts: QuotOptions) -> Result<Vec<QuotPoint>> {
    if l > MAX_COLENGTH {
        return Err(Error::UnsupportedColength(l));
    }
    let (e, counit) = frob_push_line(c, l_cls)?;
    let pats = patterns(c, l, opts)?;
    let chunks: Vec<Result<Vec<QuotPoint>>> = pats.par_iter().map(|d| points_at(c, &e, &counit, d)).collect();
    let mut all = Vec::new();
    for ch in chunks {
        all.extend(ch?);
    }
    Ok(all)
}

/// The sub-modules of F_*L whose support divisor is exactly `d`.
pub fn quot_points_at(c: &CurveModel, l_cls: &DivisorClass, d: &Divisor) -> Result<Vec<QuotPoint>> {
    if !d.is_effective() {
        return Err(Error::BadDegree("support divisor must be effective".into()));
    }
    if d.degree() as usize > MAX_COLENGTH {
        return Err(Error::UnsupportedColength(d.degree() as usize));
    }
    let (e, counit) = frob_push_line(c, l_cls)?;
    points_at(c, &e, &counit, d)
}

fn points_at(c: &CurveModel, e: &LatticePair, counit: &SheafMap, d: &Divisor) -> Result<Vec<QuotPoint>> {
    let locals: Vec<(Place, i64)> = d.terms().map(|(p, k)| (p.clone(), k)).collect();
    let mut per_place: Vec<Vec<(LocalLabel, LatticePair)>> = Vec::new();
    for (p, k) in &locals {
        let loc = Local::new(c, e, p)?;
        let mut v = Vec::new();
        for lab in loc.labels(*k as u32) {
            let m = loc.modification(&lab)?;
            v.push((lab, m));
        }
        per_place.push(v);
    }
    let mut combos: Vec<Vec<usize>> = vec![vec![]];
    for choices in &per_place {
        combos = combos.into_iter().flat_map(|v| (0..choices.len()).map(move |i| [v.clone(), vec![i]].concat())).collect();
    }
    let mut out = Vec::new();
    for combo in combos {
        let mods: Vec<(Place, LatticePair)> =
            combo.iter().enumerate().map(|(k, &i)| (locals[k].0.clone(), per_place[k][i].1.clone())).collect();
        let labels: Vec<LocalLabel> = combo.iter().enumerate().map(|(k, &i)| per_place[k][i].0.clone()).collect();
        let sub = glue(c, e, &mods)?;
        let q = in_qstar(c, &sub, counit)?;
        out.push(QuotPoint { ambient: e.clone(), sub, delta: d.clone(), in_qstar: q, local_data: labels });
    }
    Ok(out)
}

/// Support divisor of `E / V` with local lengths, for `V` a sub-module of `E`.
pub fn support_of(c: &CurveModel, e: &LatticePair, v: &LatticePair) -> Result<Divisor> {
    let mut d = Divisor::zero();
    let l_inf = e.inf().det().deg() - v.inf().det().deg();
    if l_inf > 0 {
        d.add_term(&c.infinity(), l_inf);
    }
    let ratio = v.fin().det().div(&e.fin().det());
    if !ratio.is_poly() {
        return Err(Error::InternalInconsistency("not a sub-module".into()));
    }
    for (pi, k) in ratio.num().factor() {
        let k = k as i64;
        let places = c.places_over(&pi);
        if places.len() == 1 {
            let p = &places[0];
            d.add_term(p, k * pi.deg() / p.deg() as i64);
            continue;
        }
        // split: V + m_P^k E agrees with V at P and with E at the other place
        for p in &places {
            let far = twist(c, e, &single_point(p, -k))?;
            let w = lattice::sum::<Fin>(v.fin(), far.fin())?;
            let n = w.det().div(&e.fin().det()).num().valuation(&pi);
            if n > 0 {
                d.add_term(p, n);
            }
        }
    }
    Ok(d)
}

/// Locates a sub-module of F_*L among the labelled modifications.
pub fn locate(c: &CurveModel, l_cls: &DivisorClass, v: &LatticePair) -> Result<QuotPoint> {
    let (e, counit) = frob_push_line(c, l_cls)?;
    if !e.contains(v)? {
        return Err(Error::InternalInconsistency("not a sub-module of F_*L".into()));
    }
    let delta = support_of(c, &e, v)?;
    let mut labels = Vec::new();
    for (p, k) in delta.terms() {
        if p.deg() > 2 || (p.deg() == 2 && k > 1) {
            return Err(Error::UnsupportedColength(delta.degree() as usize));
        }
        let loc = Local::new(c, &e, p)?;
        let mut found = None;
        for lab in loc.labels(k as u32) {
            if loc.modification(&lab)?.contains(v)? {
                found = Some(lab);
                break;
            }
        }
        labels.push(found.ok_or_else(|| Error::InternalInconsistency(format!("no local label at {}", p.id())))?);
    }
    let q = in_qstar(c, v, &counit)?;
    Ok(QuotPoint { ambient: e, sub: v.clone(), delta, in_qstar: q, local_data: labels })
}

/// Number of co-length-l sub-modules of a free rank-2 module over a DVR with
/// residue field GF(q), by enumerating the sub-modules of `(R / t^l)^2`
/// generated by pairs of elements.
pub fn quot_local_count(q_size: u32, l: usize) -> usize {
    assert!(q_size.is_power_of_two() && q_size >= 2 && l <= 3);
    if l == 0 {
        return 1;
    }
    let m = q_size.trailing_zeros() as u8;
    let n = 2 * l;
    let elems: Vec<Vec<Fe>> = (0..(q_size as u64).pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let a = (k % q_size as u64) as u32;
                    k /= q_size as u64;
                    Fe::new(a, m)
                })
                .collect()
        })
        .collect();
    // coordinates: (u_0..u_{l-1}, w_0..w_{l-1}); t shifts each block up by one
    let shift = |v: &[Fe]| -> Vec<Fe> {
        let mut s = vec![Fe::zero(m); n];
        for blk in 0..2 {
            for i in 0..l - 1 {
                s[blk * l + i + 1] = v[blk * l + i];
            }
        }
        s
    };
    let orbit = |v: &[Fe]| -> Vec<Vec<Fe>> {
        let mut out = vec![v.to_vec()];
        for _ in 1..l {
            let next = shift(out.last().unwrap());
            out.push(next);
        }
        out
    };
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for u in &elems {
        for w in &elems {
            let mut rows = orbit(u);
            rows.extend(orbit(w));
            let piv = linalg::rref(&mut rows, n);
            if piv.len() == l {
                seen.insert(rows.iter().flatten().map(|a| a.bits()).collect());
            }
        }
    }
    seen.len()
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
    fn local_counts() {
        assert_eq!(quot_local_count(2, 0), 1);
        assert_eq!(quot_local_count(2, 1), 3);
        assert_eq!(quot_local_count(2, 2), 7);
        assert_eq!(quot_local_count(4, 1), 5);
    }

    #[test]
    fn colength_zero_and_one() {
        let c = curve(1, 2);
        let l = &enumerate_pic(&c, 1)[0];
        let q0 = quot_points(&c, l, 0, QuotOptions::default()).unwrap();
        assert_eq!(q0.len(), 1);
        assert!(q0[0].in_qstar && q0[0].sub.lattice_eq(&q0[0].ambient).unwrap());
        let q1 = quot_points(&c, l, 1, QuotOptions::default()).unwrap();
        let nplaces = c.rational_places().len();
        assert_eq!(q1.len(), 3 * nplaces);
        for p in c.rational_places() {
            let at: Vec<_> = q1.iter().filter(|q| q.delta == Divisor::point(&p)).collect();
            assert_eq!(at.len(), 3);
            assert_eq!(at.iter().filter(|q| q.in_qstar).count(), 2, "{}", p.id());
        }
        let deg = q0[0].ambient.degree(&c);
        for q in &q1 {
            assert_eq!(q.sub.degree(&c), deg - 1);
            let back = locate(&c, l, &q.sub).unwrap();
            assert_eq!(back.local_data, q.local_data);
            assert_eq!(back.delta, q.delta);
        }
    }

    #[test]
    fn colength_two_counts() {
        let c = curve(1, 2);
        let l = &enumerate_pic(&c, 1)[1];
        let q2 = quot_points(&c, l, 2, QuotOptions::default()).unwrap();
        let mut ds: Vec<Divisor> = Vec::new();
        for q in &q2 {
            if !ds.contains(&q.delta) {
                ds.push(q.delta.clone());
            }
        }
        for d in ds {
            let n = q2.iter().filter(|q| q.delta == d).count();
            let expect = if d.is_multiplicity_free() { 9 } else { 7 };
            assert_eq!(n, expect);
            if d.is_multiplicity_free() {
                assert_eq!(q2.iter().filter(|q| q.delta == d && q.in_qstar).count(), 4);
            }
        }
    }
}
