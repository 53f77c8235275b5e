//! The basic construction of Frobenius-destabilized bundles as sub-modules
//! of F_*L, its inverse, and the censuses built on top of them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveModel, Func};
use crate::error::{Error, Result};
use crate::frobenius::{frob_pull, frob_push_line, raynaud_b, split_squares};
use crate::lattice::{preimage, span, Fin, Inf, Mat};
use crate::picard::{enumerate_pic, Divisor, DivisorClass, DivisorLiteral};
use crate::quot::{locate, quot_points, quot_points_at, LocalLabel, QuotOptions, QuotPoint};
use crate::ratfunc::RatFunc;
use crate::sheaves::{
    det_and_deg, extension_bundle, from_funcs, hom_space, is_isomorphic, line_bundle, to_funcs, twist, IsoVerdict,
    LatticePair,
};
use crate::stability::{hn, max_sub_search, s_invariant};

#[derive(Clone, Debug)]
pub struct ConstructionDatum {
    pub l: usize,
    pub l_cls: DivisorClass,
    pub quot: QuotPoint,
    pub result: LatticePair,
}

/// deg L = d - 1 - (g - 2 - l).
pub fn quotient_degree(c: &CurveModel, d: i64, l: usize) -> i64 {
    d - 1 - (c.g() - 2 - l as i64)
}

fn check_colength(c: &CurveModel, l: usize) -> Result<()> {
    if l as i64 > c.g() - 2 {
        return Err(Error::ColengthTooLarge { l, max: c.g() - 2 });
    }
    Ok(())
}

pub fn basic_construct(c: &CurveModel, l_cls: &DivisorClass, l: usize, index: usize) -> Result<ConstructionDatum> {
    check_colength(c, l)?;
    let pts = quot_points(c, l_cls, l, QuotOptions::default())?;
    let qp = pts.get(index).ok_or(Error::IndexOutOfRange { index, len: pts.len() })?.clone();
    if !qp.in_qstar {
        return Err(Error::NotInQstar(index));
    }
    Ok(ConstructionDatum { l, l_cls: l_cls.clone(), result: qp.sub.clone(), quot: qp })
}

/// All data with co-length `l` and quotient class `l_cls`.
pub fn data_for(c: &CurveModel, l_cls: &DivisorClass, l: usize) -> Result<Vec<ConstructionDatum>> {
    check_colength(c, l)?;
    Ok(quot_points(c, l_cls, l, QuotOptions::default())?
        .into_iter()
        .filter(|q| q.in_qstar)
        .map(|q| ConstructionDatum { l, l_cls: l_cls.clone(), result: q.sub.clone(), quot: q })
        .collect())
}

/// Recovers the datum of a semi-stable V with F*V not semi-stable.
pub fn classify(c: &CurveModel, v: &LatticePair) -> Result<ConstructionDatum> {
    if s_invariant(c, v)? < 0 {
        return Err(Error::NotSemistable);
    }
    let d = v.degree(c);
    let w = frob_pull(c, v)?;
    let ms = max_sub_search(c, &w)?;
    if 2 * ms.degree <= 2 * d {
        return Err(Error::NotDestabilized);
    }
    let (detw, _) = det_and_deg(c, &w)?;
    let l_cls = detw.sub(c, ms.witness());
    let lb = line_bundle(c, &l_cls);
    let psi = hom_space(c, &w, &lb)?;
    if psi.len() != 1 {
        return Err(Error::InternalInconsistency(format!("{} quotient maps onto the HN quotient", psi.len())));
    }
    let psi = &psi[0];
    // adjoint V -> F_*L: v -> split(psi(F v))
    let adj = |basis: &Mat| -> Vec<Vec<RatFunc>> {
        basis
            .cols
            .iter()
            .map(|b| {
                let fv: Vec<Func> = to_funcs(b).iter().map(|z| c.ffrob(z)).collect();
                let z = &psi.apply(c, &fv)[0];
                let (z0, z1) = split_squares(c, z);
                from_funcs(&[z0, z1])
            })
            .collect()
    };
    let img = LatticePair::from_bases(2, span::<Fin>(4, &adj(v.fin()))?, span::<Inf>(4, &adj(v.inf()))?);
    let qp = locate(c, &l_cls, &img)?;
    let l = qp.colength();
    if l as i64 > c.g() - 2 {
        return Err(Error::InternalInconsistency(format!("recovered co-length {} exceeds g - 2", l)));
    }
    Ok(ConstructionDatum { l, l_cls, result: v.clone(), quot: qp })
}

impl ConstructionDatum {
    /// Same datum: equal quotient class and equal canonical labels.
    pub fn same_point(&self, o: &ConstructionDatum) -> bool {
        self.l == o.l && self.l_cls == o.l_cls && self.quot.delta == o.quot.delta && self.quot.local_data == o.quot.local_data
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumSummary {
    pub l: usize,
    #[serde(rename = "L")]
    pub l_class: DivisorLiteral,
    pub delta: DivisorLiteral,
    pub labels: Vec<LocalLabel>,
    pub d: i64,
    pub det: DivisorLiteral,
    pub s: i64,
    pub s_frob: i64,
    pub destabilizing_degree: i64,
    pub stratum_j: i64,
}

pub fn summarize(c: &CurveModel, dt: &ConstructionDatum) -> Result<DatumSummary> {
    let v = &dt.result;
    let (det, d) = det_and_deg(c, v)?;
    let s = s_invariant(c, v)?;
    let (_, rep, j) = hn(c, &frob_pull(c, v)?)?;
    Ok(DatumSummary {
        l: dt.l,
        l_class: dt.l_cls.literal(c),
        delta: dt.quot.delta.literal(),
        labels: dt.quot.local_data.clone(),
        d,
        det: det.literal(c),
        s,
        s_frob: rep.s,
        destabilizing_degree: (2 * d - rep.s) / 2,
        stratum_j: j,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub d: i64,
    pub data: Vec<DatumSummary>,
    /// Index pairs of isomorphic results with distinct data.
    pub collisions: Vec<(usize, usize)>,
}

/// All rational data of determinant degree `d`, pairwise tested for isomorphism.
pub fn injectivity_census(c: &CurveModel, d: i64) -> Result<InjectivityReport> {
    let mut data = Vec::new();
    for l in 0..=(c.g() - 2) as usize {
        for l_cls in enumerate_pic(c, quotient_degree(c, d, l)) {
            data.extend(data_for(c, &l_cls, l)?);
        }
    }
    let summaries: Vec<DatumSummary> = data.par_iter().map(|dt| summarize(c, dt)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..data.len())
        .flat_map(|i| ((i + 1)..data.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| summaries[i].det == summaries[j].det)
        .collect();
    let verdicts: Vec<Result<Option<(usize, usize)>>> = pairs
        .par_iter()
        .map(|&(i, j)| Ok((is_isomorphic(c, &data[i].result, &data[j].result)? != IsoVerdict::No).then_some((i, j))))
        .collect();
    let mut collisions = Vec::new();
    for v in verdicts {
        if let Some(p) = v? {
            collisions.push(p);
        }
    }
    Ok(InjectivityReport { d, data: summaries, collisions })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberPair {
    #[serde(rename = "D")]
    pub divisor: DivisorLiteral,
    #[serde(rename = "L")]
    pub l_class: DivisorLiteral,
    pub qstar_points: usize,
    pub det_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub xi: DivisorLiteral,
    pub l: usize,
    pub pairs: Vec<FiberPair>,
    pub all_det_ok: bool,
}

/// Effective GF(q)-rational divisors of degree `l`, canonical order.
pub fn effective_divisors(c: &CurveModel, l: usize) -> Result<Vec<Divisor>> {
    let places = c.enumerate_places(l.max(1))?;
    fn go(pl: &[crate::curve::Place], start: usize, left: usize, d: Divisor, out: &mut Vec<Divisor>) {
        if left == 0 {
            out.push(d);
            return;
        }
        for i in start..pl.len() {
            if pl[i].deg() <= left {
                go(pl, i, left - pl[i].deg(), d.add(&Divisor::point(&pl[i])), out);
            }
        }
    }
    let mut out = Vec::new();
    go(&places, 0, l, Divisor::zero(), &mut out);
    Ok(out)
}

/// The pairs (D, L) with B + L - D = xi and the Q* points over each.
pub fn fixed_det_fiber(c: &CurveModel, xi: &DivisorClass, l: usize) -> Result<FiberReport> {
    if l as i64 > c.g() - 1 {
        return Err(Error::ColengthTooLarge { l, max: c.g() - 1 });
    }
    let b = raynaud_b(c)?;
    let pairs: Vec<FiberPair> = effective_divisors(c, l)?
        .par_iter()
        .map(|dd| {
            let l_cls = xi.sub(c, &b).add(c, &DivisorClass::of_divisor(c, dd));
            let pts: Vec<QuotPoint> = quot_points_at(c, &l_cls, dd)?.into_iter().filter(|q| q.in_qstar).collect();
            let mut det_ok = true;
            for q in &pts {
                det_ok &= det_and_deg(c, &q.sub)?.0 == *xi;
            }
            Ok(FiberPair { divisor: dd.literal(), l_class: l_cls.literal(c), qstar_points: pts.len(), det_ok })
        })
        .collect::<Result<_>>()?;
    let all_det_ok = pairs.iter().all(|p| p.det_ok);
    Ok(FiberReport { xi: xi.literal(c), l, pairs, all_det_ok })
}

/// `V = {e in F_*(M^2) : pi(e) in Q(-D)}` where `pi` is the quotient by the
/// canonical copy of M and Q = M + B.
pub fn variant_construct(c: &CurveModel, m_cls: &DivisorClass, d: &Divisor) -> Result<LatticePair> {
    if d.degree() != c.g() - 1 || !d.is_effective() {
        return Err(Error::BadDegree(format!("D must be effective of degree {}", c.g() - 1)));
    }
    let l_cls = m_cls.mul(c, 2);
    let (e, _) = frob_push_line(c, &l_cls)?;
    let homs = hom_space(c, &line_bundle(c, m_cls), &e)?;
    if homs.len() != 1 {
        return Err(Error::InternalInconsistency(format!("{} maps M -> F_*(M^2)", homs.len())));
    }
    let w = homs[0].apply(c, &[Func::one(c.m())]);
    // pi(e) = e1 w2 - e2 w1
    let proj = |v: &[RatFunc]| -> Func {
        let ev = to_funcs(v);
        c.fmul(&ev[0], &w[1]).add(&c.fmul(&ev[1], &w[0]))
    };
    let image = |basis: &Mat| -> Vec<Vec<RatFunc>> { basis.cols.iter().map(|b| from_funcs(&[proj(b)])).collect() };
    let q = LatticePair::from_generators(1, &image(e.fin()), &image(e.inf()))?;
    let qd = twist(c, &q, &d.neg())?;
    let cut = |eb: &Mat, qb: &Mat, fin: bool| -> Result<Mat> {
        let einv = eb.inverse()?;
        let qinv = qb.inverse()?;
        let cols: Vec<Vec<RatFunc>> = (0..4)
            .map(|k| {
                let mut unit = vec![RatFunc::zero(c.m()); 4];
                unit[k] = RatFunc::one(c.m());
                let mut col = einv.apply(&unit);
                col.extend(qinv.apply(&from_funcs(&[proj(&unit)])));
                col
            })
            .collect();
        let m = Mat::from_cols(6, cols);
        if fin {
            preimage::<Fin>(&m)
        } else {
            preimage::<Inf>(&m)
        }
    };
    Ok(LatticePair::from_bases(2, cut(e.fin(), qd.fin(), true)?, cut(e.inf(), qd.inf(), false)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub xi: DivisorLiteral,
    pub v0_stratum: i64,
    pub v0_frob_s: i64,
    pub samples: usize,
    pub stable: usize,
    pub destabilized: usize,
    pub isomorphic_to_v0: usize,
    pub counterexamples: Vec<u64>,
}

/// Sampling census: every stable extension with det = xi and F*V not
/// semi-stable must be isomorphic to F_*(xi - B).
pub fn genus2_uniqueness(c: &CurveModel, xi: &DivisorClass, samples: usize, seed: u64) -> Result<UniquenessReport> {
    if c.genus() != 2 {
        return Err(Error::BadDegree("the uniqueness census is for genus 2".into()));
    }
    let b = raynaud_b(c)?;
    let (v0, _) = frob_push_line(c, &xi.sub(c, &b))?;
    let (_, rep0, j0) = hn(c, &frob_pull(c, &v0)?)?;
    let d = xi.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plans: Vec<(DivisorClass, DivisorClass, u64)> = (0..samples)
        .map(|_| {
            let e_sub = (d + 1).div_euclid(2) - 1 - rng.gen_range(0..2i64);
            let pic = enumerate_pic(c, e_sub);
            let a = pic[rng.gen_range(0..pic.len())].clone();
            let q = xi.sub(c, &a);
            (a, q, rng.gen_range(1..u64::MAX))
        })
        .collect();
    let outcomes: Vec<Result<(bool, bool, bool)>> = plans
        .par_iter()
        .map(|(a, q, s)| {
            let v = extension_bundle(c, a, q, *s)?;
            if s_invariant(c, &v)? <= 0 {
                return Ok((false, false, false));
            }
            let (_, rep, _) = hn(c, &frob_pull(c, &v)?)?;
            if rep.s >= 0 {
                return Ok((true, false, false));
            }
            Ok((true, true, is_isomorphic(c, &v, &v0)? == IsoVerdict::Yes))
        })
        .collect();
    let mut r = UniquenessReport {
        xi: xi.literal(c),
        v0_stratum: j0,
        v0_frob_s: rep0.s,
        samples,
        stable: 0,
        destabilized: 0,
        isomorphic_to_v0: 0,
        counterexamples: Vec::new(),
    };
    for (o, (_, _, s)) in outcomes.into_iter().zip(&plans) {
        let (st, de, iso) = o?;
        r.stable += st as usize;
        r.destabilized += de as usize;
        r.isomorphic_to_v0 += iso as usize;
        if de && !iso {
            r.counterexamples.push(*s);
        }
    }
    Ok(r)
}
