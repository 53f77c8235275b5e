//! Double covers `y^2 + h(x) y = f(x)` of the line over GF(2^m), with
//! `h, f` defined over GF(2), `deg f = 2g + 1` and `deg h <= g`.
//!
//! Such a model has exactly one place at infinity, rational and totally
//! ramified, and every finite place is cut out by an irreducible `pi(x)`
//! together with a root of `v^2 + h v + f mod pi` (split or ramified) or by
//! `pi` alone (inert).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Embedding, Fe, MAX_LEVEL};
use crate::linalg::gf2_solve_cols;
use crate::picard::Divisor;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::series::Series;

/// Default relative precision of local expansions.
pub const DEFAULT_PREC: usize = 48;

/// The JSON curve description `{"m": .., "h": [..], "f": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveConfig {
    pub m: u8,
    pub h: Vec<u8>,
    pub f: Vec<u8>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_high_genus: bool,
}

impl CurveConfig {
    pub fn new(m: u8, h: &[u8], f: &[u8]) -> CurveConfig {
        CurveConfig { m, h: h.to_vec(), f: f.to_vec(), allow_high_genus: false }
    }

    /// y^2 + y = x^(2g+1).
    pub fn artin_schreier(m: u8, g: usize) -> CurveConfig {
        let mut f = vec![0u8; 2 * g + 2];
        f[2 * g + 1] = 1;
        CurveConfig::new(m, &[1], &f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceKind {
    Infinity,
    Split,
    Ramified,
    Inert,
}

/// A closed point of the curve over GF(2^m).
///
/// `alpha, beta` is one geometric point in GF(2^(m * deg)) lying over it; for
/// infinity it is the origin of the chart `x' = 1/x, y' = y / x^(g+1)`.
#[derive(Clone)]
pub struct Place {
    kind: PlaceKind,
    pi: Poly,
    v0: Poly,
    deg: usize,
    idx: usize,
    alpha: Fe,
    beta: Fe,
}

impl Place {
    pub fn kind(&self) -> PlaceKind {
        self.kind
    }

    /// The irreducible polynomial below a finite place (1 at infinity).
    pub fn pi(&self) -> &Poly {
        &self.pi
    }

    /// Root of `v^2 + h v + f mod pi` for split and ramified places.
    pub fn v0(&self) -> &Poly {
        &self.v0
    }

    /// Residue degree over GF(2^m).
    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn is_infinity(&self) -> bool {
        self.kind == PlaceKind::Infinity
    }

    pub fn point(&self) -> (Fe, Fe) {
        (self.alpha, self.beta)
    }

    /// Level of the residue field as a tower level over GF(2).
    pub fn residue_level(&self) -> u8 {
        self.alpha.level()
    }

    /// Ramification index over the x-line.
    pub fn ramification(&self) -> i64 {
        match self.kind {
            PlaceKind::Infinity | PlaceKind::Ramified => 2,
            _ => 1,
        }
    }

    pub fn id(&self) -> String {
        match self.kind {
            PlaceKind::Infinity => "inf".to_string(),
            _ => format!("d{}.{}", self.deg, self.idx),
        }
    }

    fn sort_key(&self) -> (usize, bool, usize) {
        (self.deg, !self.is_infinity(), self.idx)
    }
}

impl PartialEq for Place {
    fn eq(&self, o: &Place) -> bool {
        self.kind == o.kind && self.pi == o.pi && self.v0 == o.v0
    }
}

impl Eq for Place {}

impl std::hash::Hash for Place {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        self.pi.hash(state);
        self.v0.hash(state);
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, o: &Place) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Place {
    fn cmp(&self, o: &Place) -> Ordering {
        self.sort_key().cmp(&o.sort_key())
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// An element `a + b y` of the function field, with `a, b` in GF(2^m)(x).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Func {
    pub a: RatFunc,
    pub b: RatFunc,
}

impl Func {
    pub fn new(a: RatFunc, b: RatFunc) -> Func {
        Func { a, b }
    }

    pub fn from_ratfunc(a: RatFunc) -> Func {
        let l = a.level();
        Func { a, b: RatFunc::zero(l) }
    }

    pub fn from_poly(p: Poly) -> Func {
        Func::from_ratfunc(RatFunc::from_poly(p))
    }

    pub fn one(level: u8) -> Func {
        Func::from_ratfunc(RatFunc::one(level))
    }

    pub fn y(level: u8) -> Func {
        Func { a: RatFunc::zero(level), b: RatFunc::one(level) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Func) -> Func {
        Func { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn scale(&self, r: &RatFunc) -> Func {
        Func { a: self.a.mul(r), b: self.b.mul(r) }
    }

    pub fn scale_fe(&self, c: Fe) -> Func {
        Func { a: self.a.scale(c), b: self.b.scale(c) }
    }
}

#[derive(Default)]
struct PlaceCache {
    by_degree: BTreeMap<usize, Arc<Vec<Place>>>,
    jacobian: Option<Arc<Vec<(Poly, Poly)>>>,
    extensions: BTreeMap<u8, CurveModel>,
}

/// A validated curve model.
#[derive(Clone)]
pub struct CurveModel {
    config: CurveConfig,
    m: u8,
    g: usize,
    h: Poly,
    f: Poly,
    cache: Arc<Mutex<PlaceCache>>,
}

impl fmt::Debug for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 + ({})y = {} over GF(2^{})", self.h, self.f, self.m)
    }
}

pub fn load_curve(cfg: &CurveConfig) -> Result<CurveModel> {
    if cfg.m == 0 || cfg.m > MAX_LEVEL {
        return Err(Error::Parse(format!("m = {} outside 1..={}", cfg.m, MAX_LEVEL)));
    }
    if cfg.h.iter().chain(&cfg.f).any(|&b| b > 1) {
        return Err(Error::Parse("curve coefficients must lie in GF(2)".into()));
    }
    let m = cfg.m;
    let h = Poly::from_bits(&cfg.h, m);
    let f = Poly::from_bits(&cfg.f, m);
    if h.is_zero() {
        return Err(Error::UnsupportedModel("h = 0 gives an inseparable cover".into()));
    }
    if f.deg() < 1 || f.deg() % 2 == 0 {
        return Err(Error::UnsupportedModel(format!(
            "deg f = {} must be odd (one place at infinity)",
            f.deg()
        )));
    }
    let g = ((f.deg() - 1) / 2) as usize;
    if h.deg() > g as i64 {
        return Err(Error::UnsupportedModel(format!("deg h = {} exceeds g = {}", h.deg(), g)));
    }
    // affine singular points satisfy h = 0 and h'^2 f = f'^2
    let dh = h.deriv();
    let crit = dh.square().mul(&f).add(&f.deriv().square());
    let common = h.gcd(&crit);
    if common.deg() > 0 {
        return Err(Error::SingularModel(format!("singular over the roots of {}", common)));
    }
    if g < 2 {
        return Err(Error::GenusTooSmall(g));
    }
    if g > 3 && !cfg.allow_high_genus {
        return Err(Error::UnsupportedModel(format!("genus {} needs allow_high_genus", g)));
    }
    Ok(CurveModel { config: cfg.clone(), m, g, h, f, cache: Default::default() })
}

pub fn parse_curve(json: &str) -> Result<CurveModel> {
    let cfg: CurveConfig = serde_json::from_str(json)?;
    load_curve(&cfg)
}

impl CurveModel {
    pub fn config(&self) -> &CurveConfig {
        &self.config
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn g(&self) -> i64 {
        self.g as i64
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    /// Size of the base field.
    pub fn q(&self) -> u64 {
        1u64 << self.m
    }

    /// The same curve over GF(2^(m * r)).
    pub fn extend(&self, r: u8) -> Result<CurveModel> {
        if let Some(c) = self.cache.lock().unwrap().extensions.get(&r) {
            return Ok(c.clone());
        }
        let mut cfg = self.config.clone();
        cfg.m = self.m.checked_mul(r).filter(|&l| l <= MAX_LEVEL).ok_or(
            Error::IncompatibleTower { from: self.m, target: self.m.saturating_mul(r) },
        )?;
        let c = load_curve(&cfg)?;
        self.cache.lock().unwrap().extensions.insert(r, c.clone());
        Ok(c)
    }

    /// Memoized rational points of the Jacobian as reduced Mumford pairs.
    pub(crate) fn jacobian_pairs(&self, compute: impl FnOnce() -> Vec<(Poly, Poly)>) -> Arc<Vec<(Poly, Poly)>> {
        if let Some(j) = &self.cache.lock().unwrap().jacobian {
            return j.clone();
        }
        let j = Arc::new(compute());
        self.cache.lock().unwrap().jacobian = Some(j.clone());
        j
    }

    pub fn infinity(&self) -> Place {
        let z = Fe::zero(self.m);
        Place {
            kind: PlaceKind::Infinity,
            pi: Poly::one(self.m),
            v0: Poly::zero(self.m),
            deg: 1,
            idx: 0,
            alpha: z,
            beta: z,
        }
    }

    /// All places of degree exactly `d`, in canonical order.
    pub fn places_of_degree(&self, d: usize) -> Result<Arc<Vec<Place>>> {
        if d == 0 || self.m as usize * d > MAX_LEVEL as usize {
            return Err(Error::UnsupportedModel(format!(
                "places of degree {} over GF(2^{}) exceed the field tower",
                d, self.m
            )));
        }
        if let Some(v) = self.cache.lock().unwrap().by_degree.get(&d) {
            return Ok(v.clone());
        }
        let mut out: Vec<Place> = Vec::new();
        if d == 1 {
            out.push(self.infinity());
        }
        for pi in Poly::irreducibles(d, self.m) {
            out.extend(self.raw_places_over(&pi));
        }
        if d % 2 == 0 {
            for pi in Poly::irreducibles(d / 2, self.m) {
                out.extend(self.raw_places_over(&pi).into_iter().filter(|p| p.deg == d));
            }
        }
        out.retain(|p| p.deg == d);
        out.sort_by(|a, b| {
            (a.kind == PlaceKind::Infinity)
                .cmp(&(b.kind == PlaceKind::Infinity))
                .reverse()
                .then_with(|| a.pi.key().cmp(&b.pi.key()))
                .then_with(|| a.v0.key().cmp(&b.v0.key()))
        });
        let mut finite_idx = 0;
        for p in out.iter_mut() {
            if !p.is_infinity() {
                finite_idx += 1;
                p.idx = finite_idx - 1;
            }
        }
        let arc = Arc::new(out);
        self.cache.lock().unwrap().by_degree.insert(d, arc.clone());
        Ok(arc)
    }

    /// Complete, duplicate-free list of places of degree at most `max_degree`.
    pub fn enumerate_places(&self, max_degree: usize) -> Result<Vec<Place>> {
        let mut out = Vec::new();
        for d in 1..=max_degree {
            out.extend(self.places_of_degree(d)?.iter().cloned());
        }
        Ok(out)
    }

    /// Rational places (degree 1), infinity first.
    pub fn rational_places(&self) -> Vec<Place> {
        self.places_of_degree(1).expect("degree-1 places always exist").to_vec()
    }

    pub fn place_by_id(&self, id: &str) -> Result<Place> {
        if id == "inf" {
            return Ok(self.infinity());
        }
        let bad = || Error::UnknownPlace(id.to_string());
        let rest = id.strip_prefix('d').ok_or_else(bad)?;
        let (d, i) = rest.split_once('.').ok_or_else(bad)?;
        let d: usize = d.parse().map_err(|_| bad())?;
        let i: usize = i.parse().map_err(|_| bad())?;
        let list = self.places_of_degree(d).map_err(|_| bad())?;
        list.iter().find(|p| !p.is_infinity() && p.idx == i).cloned().ok_or_else(bad)
    }

    /// The split or ramified place `(pi, v0 mod pi)`.
    pub fn place_of(&self, pi: &Poly, v: &Poly) -> Result<Place> {
        let v0 = v.rem(pi);
        let list = self.places_of_degree(pi.deg() as usize)?;
        list.iter()
            .find(|p| {
                matches!(p.kind, PlaceKind::Split | PlaceKind::Ramified) && &p.pi == pi && p.v0 == v0
            })
            .cloned()
            .ok_or_else(|| Error::InternalInconsistency(format!("no place ({}, {})", pi, v0)))
    }

    /// All places lying over the irreducible `pi`, with their canonical ids.
    pub fn places_over(&self, pi: &Poly) -> Vec<Place> {
        let d = pi.deg() as usize;
        let mut out = Vec::new();
        for deg in [d, 2 * d] {
            if let Ok(list) = self.places_of_degree(deg) {
                out.extend(list.iter().filter(|p| !p.is_infinity() && &p.pi == pi).cloned());
            }
        }
        out
    }

    fn raw_places_over(&self, pi: &Poly) -> Vec<Place> {
        let m = self.m;
        let d = pi.deg() as usize;
        let n = m as usize * d;
        let emb = Embedding::new(m, n as u8).expect("tower level checked by caller");
        let alpha = smallest_root(pi, &emb);
        let ha = self.h.eval(alpha);
        let fa = self.f.eval(alpha);
        let mk = |kind, v0: Poly, deg, alpha, beta| Place { kind, pi: pi.clone(), v0, deg, idx: 0, alpha, beta };
        if ha.is_zero() {
            let beta = fa.sqrt();
            let v0 = interpolate(alpha, beta, d, m);
            return vec![mk(PlaceKind::Ramified, v0, d, alpha, beta)];
        }
        let c = fa * (ha * ha).inv().unwrap();
        match c.artin_schreier_root() {
            Some(w) => {
                let b1 = ha * w;
                let v1 = interpolate(alpha, b1, d, m);
                let v2 = v1.add(&self.h).rem(pi);
                let b2 = b1 + ha;
                vec![mk(PlaceKind::Split, v1, d, alpha, b1), mk(PlaceKind::Split, v2, d, alpha, b2)]
            }
            None => {
                if 2 * n > MAX_LEVEL as usize {
                    return Vec::new();
                }
                let up = Embedding::new(n as u8, 2 * n as u8).unwrap();
                let (a2, h2, c2) = (up.apply(alpha), up.apply(ha), up.apply(c));
                let w = c2.artin_schreier_root().expect("quadratic extension splits the fiber");
                vec![mk(PlaceKind::Inert, Poly::zero(m), 2 * d, a2, h2 * w)]
            }
        }
    }

    // ---- function field arithmetic ----

    pub fn fmul(&self, u: &Func, w: &Func) -> Func {
        let h = RatFunc::from_poly(self.h.clone());
        let f = RatFunc::from_poly(self.f.clone());
        let bb = u.b.mul(&w.b);
        Func {
            a: u.a.mul(&w.a).add(&bb.mul(&f)),
            b: u.a.mul(&w.b).add(&u.b.mul(&w.a)).add(&bb.mul(&h)),
        }
    }

    /// The hyperelliptic conjugate `y -> y + h`.
    pub fn conj(&self, z: &Func) -> Func {
        Func { a: z.a.add(&z.b.mul_poly(&self.h)), b: z.b.clone() }
    }

    /// N(a + b y) = a^2 + a b h + b^2 f.
    pub fn norm(&self, z: &Func) -> RatFunc {
        z.a.square().add(&z.a.mul(&z.b).mul_poly(&self.h)).add(&z.b.square().mul_poly(&self.f))
    }

    pub fn finv(&self, z: &Func) -> Result<Func> {
        if z.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm(z).inv();
        Ok(self.conj(z).scale(&n))
    }

    pub fn fdiv(&self, u: &Func, w: &Func) -> Result<Func> {
        Ok(self.fmul(u, &self.finv(w)?))
    }

    /// Absolute Frobenius on functions.
    pub fn ffrob(&self, z: &Func) -> Func {
        let b2 = z.b.square();
        Func { a: z.a.square().add(&b2.mul_poly(&self.f)), b: b2.mul_poly(&self.h) }
    }

    // ---- valuations ----

    /// Exact valuation; `i64::MAX` for zero.
    pub fn valuation(&self, p: &Place, z: &Func) -> i64 {
        if z.is_zero() {
            return i64::MAX;
        }
        match p.kind {
            PlaceKind::Infinity => {
                let va = if z.a.is_zero() { i64::MAX } else { -2 * z.a.deg() };
                let vb = if z.b.is_zero() { i64::MAX } else { -2 * z.b.deg() - (2 * self.g as i64 + 1) };
                va.min(vb)
            }
            PlaceKind::Ramified => self.norm(z).valuation(&p.pi),
            PlaceKind::Inert => self.norm(z).valuation(&p.pi) / 2,
            PlaceKind::Split => {
                let k = z.a.valuation(&p.pi).min(z.b.valuation(&p.pi));
                let s = RatFunc::from_poly(p.pi.clone()).inv();
                let mut u = z.clone();
                for _ in 0..k.abs() {
                    u = if k > 0 { u.scale(&s) } else { u.scale(&RatFunc::from_poly(p.pi.clone())) };
                }
                let ra = eval_integral(&u.a, p.alpha);
                let rb = eval_integral(&u.b, p.alpha);
                if !(ra + rb * p.beta).is_zero() {
                    k
                } else {
                    k + self.norm(&u).valuation(&p.pi)
                }
            }
        }
    }

    /// Principal divisor of a nonzero function.
    pub fn div_of(&self, z: &Func) -> Result<Divisor> {
        if z.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm(z);
        let mut primes: Vec<Poly> = Vec::new();
        // a pole at one point of a split fibre can cancel a zero at the other
        for part in [n.num(), n.den(), z.a.den(), z.b.den()] {
            if part.deg() > 0 {
                primes.extend(part.factor().into_iter().map(|(p, _)| p));
            }
        }
        primes.sort_by_key(|a| a.key());
        primes.dedup();
        let mut d = Divisor::zero();
        for pi in primes {
            if self.m as usize * pi.deg() as usize > MAX_LEVEL as usize {
                return Err(Error::UnsupportedModel(format!("prime {} beyond the field tower", pi)));
            }
            for p in self.places_over(&pi) {
                let p = self.canonical_place(&p)?;
                let v = self.valuation(&p, z);
                d.add_term(&p, v);
            }
        }
        d.add_term(&self.infinity(), self.valuation(&self.infinity(), z));
        Ok(d)
    }

    /// The enumerated (indexed) copy of a place.
    pub fn canonical_place(&self, p: &Place) -> Result<Place> {
        if p.is_infinity() {
            return Ok(self.infinity());
        }
        let list = self.places_of_degree(p.deg)?;
        list.iter().find(|q| *q == p).cloned().ok_or_else(|| {
            Error::InternalInconsistency(format!("place over {} missing from enumeration", p.pi))
        })
    }

    /// div(dx) = (h)_0 + (2g - 2 - 2 deg h) inf.
    pub fn canonical_divisor(&self) -> Divisor {
        let mut d = Divisor::zero();
        for (pi, e) in self.h.factor() {
            let p = self.places_over(&pi).remove(0);
            let p = self.canonical_place(&p).expect("roots of h are enumerable");
            d.add_term(&p, 2 * e as i64);
        }
        d.add_term(&self.infinity(), 2 * self.g as i64 - 2 - 2 * self.h.deg());
        d
    }

    // ---- local expansions ----

    /// Laurent expansions of x and y in a uniformizer at `p`.
    pub fn local_expansion(&self, p: &Place, prec: usize) -> LocalExpansion {
        let n = p.residue_level();
        let emb = Embedding::new(self.m, n).unwrap();
        let iters = (usize::BITS - prec.leading_zeros()) as usize + 3;
        match p.kind {
            PlaceKind::Split | PlaceKind::Inert => {
                let x = Series::from_poly(&Poly::new(vec![p.alpha, Fe::one(n)], n), prec as i64);
                let e = |c: Fe| emb.apply(c);
                let fx = x.eval_poly(&self.f, &e, prec);
                let hx_inv = x.eval_poly(&self.h, &e, prec).inv();
                let mut y = Series::constant(p.beta, prec);
                for _ in 0..iters {
                    y = y.mul(&y).add(&fx).mul(&hx_inv);
                }
                LocalExpansion { x, y, emb }
            }
            PlaceKind::Ramified => {
                let t = Series::t_pow(1, n, prec);
                let w = ramified_param(&self.h, &self.f, p.alpha, p.beta, &emb, prec, iters);
                let x = Series::constant(p.alpha, prec).add(&w);
                let y = Series::constant(p.beta, prec).add(&t);
                LocalExpansion { x, y, emb }
            }
            PlaceKind::Infinity => {
                let g = self.g;
                let ht = self.h.reverse(g + 1);
                let ft = self.f.reverse(2 * g + 2);
                let z = Fe::zero(n);
                let w = ramified_param(&ht, &ft, z, z, &emb, prec, iters);
                let x = w.inv();
                let mut xg = Series::constant(Fe::one(n), prec);
                for _ in 0..=g {
                    xg = xg.mul(&x);
                }
                let y = xg.shift(1);
                LocalExpansion { x, y, emb }
            }
        }
    }

    /// Valuation of the differential `dz` at `p`, via local expansions.
    pub fn differential_valuation(&self, p: &Place, z: &Func) -> Option<i64> {
        let le = self.local_expansion(p, DEFAULT_PREC);
        le.func(z).deriv().valuation()
    }
}

/// Expansion data at a place: x(t), y(t) with coefficients in the residue field.
pub struct LocalExpansion {
    pub x: Series,
    pub y: Series,
    emb: Embedding,
}

impl LocalExpansion {
    pub fn level(&self) -> u8 {
        self.emb.target()
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    pub fn poly(&self, p: &Poly) -> Series {
        let e = |c: Fe| self.emb.apply(c);
        let prec = self.x.rel_prec();
        self.x.eval_poly(p, &e, prec)
    }

    pub fn ratfunc(&self, r: &RatFunc) -> Series {
        if r.is_poly() {
            return self.poly(r.num());
        }
        self.poly(r.num()).div(&self.poly(r.den()))
    }

    pub fn func(&self, z: &Func) -> Series {
        let a = self.ratfunc(&z.a);
        if z.b.is_zero() {
            return a;
        }
        a.add(&self.ratfunc(&z.b).mul(&self.y))
    }
}

/// Solves `(beta + t)^2 + h(alpha + w)(beta + t) + f(alpha + w) = 0` for `w`
/// with `v(w) = 2` by Newton iteration.
fn ramified_param(h: &Poly, f: &Poly, alpha: Fe, beta: Fe, emb: &Embedding, prec: usize, iters: usize) -> Series {
    let n = emb.target();
    let e = |c: Fe| emb.apply(c);
    let ys = Series::constant(beta, prec).add(&Series::t_pow(1, n, prec));
    let (dh, df) = (h.deriv(), f.deriv());
    let d0 = dh.eval(alpha) * beta + df.eval(alpha);
    let mut w = Series::t_pow(2, n, prec).scale(d0.inv().expect("smooth ramified point"));
    let a = Series::constant(alpha, prec);
    for _ in 0..iters {
        let x = a.add(&w);
        let g = ys.mul(&ys).add(&x.eval_poly(h, &e, prec).mul(&ys)).add(&x.eval_poly(f, &e, prec));
        if g.is_unresolved_zero() {
            break;
        }
        let gw = x.eval_poly(&dh, &e, prec).mul(&ys).add(&x.eval_poly(&df, &e, prec));
        w = w.add(&g.div(&gw));
    }
    w
}

fn smallest_root(pi: &Poly, emb: &Embedding) -> Fe {
    if emb.source() == emb.target() {
        debug_assert_eq!(pi.deg(), 1);
        return pi.coeff(0) * pi.lc().inv().unwrap();
    }
    let up = pi.embed(emb);
    up.factor()
        .into_iter()
        .map(|(l, _)| l.coeff(0))
        .min()
        .expect("irreducible polynomial splits in its residue field")
}

/// The polynomial `v` of degree < d over GF(2^m) with `v(alpha) = beta`.
fn interpolate(alpha: Fe, beta: Fe, d: usize, m: u8) -> Poly {
    let n = alpha.level();
    let emb = Embedding::new(m, n).unwrap();
    let mut cols = Vec::with_capacity(d * m as usize);
    let mut pw = Fe::one(n);
    for _ in 0..d {
        for j in 0..m {
            cols.push((emb.apply(Fe::new(1 << j, m)) * pw).bits());
        }
        pw *= alpha;
    }
    let sol = gf2_solve_cols(&cols, beta.bits()).expect("powers of alpha span the residue field");
    let mut c = Vec::with_capacity(d);
    for i in 0..d {
        c.push(Fe::new(sol >> (i * m as usize) & ((1 << m) - 1), m));
    }
    Poly::new(c, m)
}

/// Value at `a` of a rational function regular there.
fn eval_integral(r: &RatFunc, a: Fe) -> Fe {
    if r.is_zero() {
        return Fe::zero(a.level());
    }
    r.num().eval(a) * r.den().eval(a).inv().expect("function is integral at the place")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2() -> CurveModel {
        load_curve(&CurveConfig::artin_schreier(1, 2)).unwrap()
    }

    #[test]
    fn genus_of_test_curves() {
        assert_eq!(g2().genus(), 2);
        assert_eq!(load_curve(&CurveConfig::artin_schreier(1, 3)).unwrap().genus(), 3);
        assert_eq!(load_curve(&CurveConfig::artin_schreier(1, 1)).unwrap_err(), Error::GenusTooSmall(1));
    }

    #[test]
    fn rejects_singular_and_unsupported() {
        // y^2 + x y = x^5: h and f both vanish at 0 to high order
        let c = CurveConfig::new(1, &[0, 1], &[0, 0, 0, 0, 0, 1]);
        assert!(matches!(load_curve(&c), Err(Error::SingularModel(_))));
        let c = CurveConfig::new(1, &[0], &[0, 0, 0, 0, 0, 1]);
        assert!(matches!(load_curve(&c), Err(Error::UnsupportedModel(_))));
        let c = CurveConfig::new(1, &[1], &[0, 0, 0, 0, 1]);
        assert!(matches!(load_curve(&c), Err(Error::UnsupportedModel(_))));
    }

    #[test]
    fn rational_places_of_genus_two() {
        let c = g2();
        let ps = c.rational_places();
        assert_eq!(ps.len(), 3);
        assert!(ps[0].is_infinity());
        assert!(ps[1..].iter().all(|p| p.kind() == PlaceKind::Split && p.pi().deg() == 1));
        // x = 1 is inert: a degree-2 place
        let d2 = c.places_of_degree(2).unwrap();
        assert!(d2.iter().any(|p| p.kind() == PlaceKind::Inert && p.pi() == &Poly::from_bits(&[1, 1], 1)));
    }

    #[test]
    fn expansions_satisfy_the_equation() {
        let c = g2();
        for p in c.enumerate_places(3).unwrap() {
            let le = c.local_expansion(&p, 24);
            let e = |z: &Series| z.clone();
            let lhs = e(&le.y).mul(&le.y).add(&le.poly(c.h()).mul(&le.y)).add(&le.poly(c.f()));
            assert!(lhs.is_unresolved_zero(), "{:?}: {:?}", p, lhs);
            assert_eq!(le.func(&Func::y(1)).valuation(), Some(c.valuation(&p, &Func::y(1))));
        }
    }

    #[test]
    fn series_valuation_matches_norm_valuation() {
        let c = g2();
        let l = 1;
        let z = Func::new(
            RatFunc::new(Poly::from_bits(&[1, 0, 1, 1], l), Poly::from_bits(&[0, 0, 1], l)),
            RatFunc::from_poly(Poly::from_bits(&[1, 1], l)),
        );
        for p in c.enumerate_places(4).unwrap() {
            let s = c.local_expansion(&p, 40).func(&z);
            assert_eq!(s.valuation(), Some(c.valuation(&p, &z)), "{:?}", p);
        }
        assert_eq!(c.div_of(&z).unwrap().degree(), 0);
    }
}
