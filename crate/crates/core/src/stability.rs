//! Maximal line subbundles, the s-invariant and Harder-Narasimhan data of
//! rank-2 bundles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::field::Embedding;
use crate::picard::{enumerate_pic, DivisorClass, DivisorLiteral};
use crate::sheaves::{hom_dim, line_bundle, LatticePair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HNPolygon {
    pub vertices: Vec<(i64, i64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityFlags {
    pub stable: bool,
    pub strictly_semistable: bool,
    pub unstable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub s: i64,
    /// Witness class, defined over the field the search ended on.
    pub max_sub_class: DivisorClass,
    pub max_sub_literal: DivisorLiteral,
    pub flags: StabilityFlags,
    /// Degree of the field extension the search ran over (1 = ground field).
    pub field_extension_used: u8,
}

/// Largest residue level (bits) used when a rational search violates s <= g.
pub const MAX_SEARCH_LEVEL: u8 = 4;

/// Result of the line-subbundle search.
#[derive(Clone, Debug)]
pub struct MaxSub {
    pub degree: i64,
    /// All rational classes of maximal degree admitting a nonzero map, sorted.
    pub witnesses: Vec<DivisorClass>,
}

impl MaxSub {
    pub fn witness(&self) -> &DivisorClass {
        &self.witnesses[0]
    }
}

fn level_witnesses(c: &CurveModel, v: &LatticePair, e: i64) -> Result<Vec<DivisorClass>> {
    let found: Vec<Result<Option<DivisorClass>>> = enumerate_pic(c, e)
        .into_par_iter()
        .map(|l| Ok((hom_dim(c, &line_bundle(c, &l), v)? > 0).then_some(l)))
        .collect();
    let mut out = Vec::new();
    for r in found {
        if let Some(l) = r? {
            out.push(l);
        }
    }
    Ok(out)
}

fn level_nonempty(c: &CurveModel, v: &LatticePair, e: i64) -> Result<bool> {
    let hit = enumerate_pic(c, e)
        .into_par_iter()
        .map(|l| hom_dim(c, &line_bundle(c, &l), v).map(|h| h > 0))
        .find_any(|r| !matches!(r, Ok(false)));
    hit.unwrap_or(Ok(false))
}

/// Maximal degree of a rational line class mapping nontrivially into V.
///
/// Starts at ceil((d - g)/2) and walks up to the last nonempty level, or down
/// to the first nonempty one; the nonempty levels are closed downward, so
/// only the final level is scanned in full.
pub fn max_sub_search(c: &CurveModel, v: &LatticePair) -> Result<MaxSub> {
    if v.rank() != 2 {
        return Err(Error::RankMismatch { expected: 2, found: v.rank() });
    }
    let d = v.degree(c);
    let mut e = (d - c.g()).div_euclid(2) + (d - c.g()).rem_euclid(2);
    if level_nonempty(c, v, e)? {
        while level_nonempty(c, v, e + 1)? {
            e += 1;
        }
    } else {
        e -= 1;
        while !level_nonempty(c, v, e)? {
            e -= 1;
        }
    }
    Ok(MaxSub { degree: e, witnesses: level_witnesses(c, v, e)? })
}

pub fn max_sub(c: &CurveModel, v: &LatticePair) -> Result<(i64, DivisorClass)> {
    let r = max_sub_search(c, v)?;
    Ok((r.degree, r.witness().clone()))
}

/// A search result together with the field it was obtained over.
pub struct Search {
    pub ms: MaxSub,
    pub curve: CurveModel,
    pub r: u8,
}

/// Rational search, repeated over extensions of degree 2, 3, 4 (up to
/// `MAX_SEARCH_LEVEL` bits) while s > g, which no geometric bundle satisfies.
pub fn search(c: &CurveModel, v: &LatticePair) -> Result<Search> {
    let d = v.degree(c);
    let mut cur = Search { ms: max_sub_search(c, v)?, curve: c.clone(), r: 1 };
    for r in 2..=4u8 {
        if d - 2 * cur.ms.degree <= c.g() {
            break;
        }
        if c.m() * r > MAX_SEARCH_LEVEL {
            break;
        }
        let ext = c.extend(r)?;
        let e = Embedding::new(c.m(), ext.m())?;
        let ms = max_sub_search(&ext, &v.embed(&e))?;
        cur = Search { ms, curve: ext, r };
    }
    Ok(cur)
}

pub fn s_invariant(c: &CurveModel, v: &LatticePair) -> Result<i64> {
    Ok(v.degree(c) - 2 * search(c, v)?.ms.degree)
}

fn report_from(c: &CurveModel, v: &LatticePair, sr: &Search) -> StabilityReport {
    let s = v.degree(c) - 2 * sr.ms.degree;
    StabilityReport {
        s,
        max_sub_class: sr.ms.witness().clone(),
        max_sub_literal: sr.ms.witness().literal(&sr.curve),
        flags: StabilityFlags { stable: s > 0, strictly_semistable: s == 0, unstable: s < 0 },
        field_extension_used: sr.r,
    }
}

pub fn stability_report(c: &CurveModel, v: &LatticePair) -> Result<StabilityReport> {
    Ok(report_from(c, v, &search(c, v)?))
}

/// Re-runs the search over the extension of degree `r`.
pub fn stability_report_over(c: &CurveModel, v: &LatticePair, r: u8) -> Result<StabilityReport> {
    if r == 1 {
        return stability_report(c, v);
    }
    let ext = c.extend(r)?;
    let e = Embedding::new(c.m(), ext.m())?;
    let ve = v.embed(&e);
    let ms = max_sub_search(&ext, &ve)?;
    Ok(report_from(&ext, &ve, &Search { ms, curve: ext.clone(), r }))
}

pub fn polygon(d: i64, e_star: i64) -> HNPolygon {
    if 2 * e_star > d {
        HNPolygon { vertices: vec![(0, 0), (1, e_star), (2, d)] }
    } else {
        HNPolygon { vertices: vec![(0, 0), (2, d)] }
    }
}

/// The polygon P_j of the stratum j for bundles of degree 2d: (0,0), (1, d + j), (2, 2d).
pub fn stratum_polygon(d: i64, j: i64) -> HNPolygon {
    polygon(2 * d, d + j)
}

/// Harder-Narasimhan polygon, report and stratum index `max(0, e* - floor(deg/2))`.
pub fn hn(c: &CurveModel, v: &LatticePair) -> Result<(HNPolygon, StabilityReport, i64)> {
    let sr = search(c, v)?;
    let d = v.degree(c);
    let rep = report_from(c, v, &sr);
    let j = (sr.ms.degree - d.div_euclid(2)).max(0);
    Ok((polygon(d, sr.ms.degree), rep, j))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityJson {
    pub s: i64,
    pub max_sub: DivisorLiteral,
    pub flags: StabilityFlags,
    pub polygon: Vec<[i64; 2]>,
    pub stratum_j: i64,
    pub field_extension_used: u8,
}

pub fn stability_json(p: &HNPolygon, r: &StabilityReport, j: i64) -> StabilityJson {
    StabilityJson {
        s: r.s,
        max_sub: r.max_sub_literal.clone(),
        flags: r.flags,
        polygon: p.vertices.iter().map(|&(a, b)| [a, b]).collect(),
        stratum_j: j,
        field_extension_used: r.field_extension_used,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{load_curve, CurveConfig};
    use crate::frobenius::{frob_pull, frob_push_line};
    use crate::sheaves::direct_sum;

    fn curve(m: u8, g: usize) -> CurveModel {
        load_curve(&CurveConfig::artin_schreier(m, g)).unwrap()
    }

    #[test]
    fn split_bundle_planted_maximum() {
        let c = curve(1, 2);
        let a = &enumerate_pic(&c, 2)[3];
        let b = &enumerate_pic(&c, -1)[1];
        let v = direct_sum(&line_bundle(&c, b), &line_bundle(&c, a));
        let ms = max_sub_search(&c, &v).unwrap();
        assert_eq!(ms.degree, 2);
        assert_eq!(ms.witnesses, vec![a.clone()]);
        let (p, r, j) = hn(&c, &v).unwrap();
        assert_eq!(p.vertices, vec![(0, 0), (1, 2), (2, 1)]);
        assert!(r.flags.unstable);
        assert_eq!(j, 2);
    }

    #[test]
    fn push_forward_and_its_pull_back() {
        let c = curve(1, 2);
        let l = &enumerate_pic(&c, 1)[0];
        let (v, _) = frob_push_line(&c, l).unwrap();
        let (p, r, j) = hn(&c, &v).unwrap();
        assert_eq!((r.s, j), (2, 0));
        assert_eq!(p.vertices, vec![(0, 0), (2, 2)]);
        let w = frob_pull(&c, &v).unwrap();
        let (p, r, j) = hn(&c, &w).unwrap();
        assert_eq!((r.s, j), (-2, 1));
        assert_eq!(p, stratum_polygon(2, 1));
    }
}
