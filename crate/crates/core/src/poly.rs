//! Dense univariate polynomials over GF(2^m), with factorization.

use std::cmp::Ordering;
use std::fmt;

use crate::field::{Embedding, Fe};

/// Polynomial with coefficients in GF(2^level), low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<Fe>,
    level: u8,
}

impl Poly {
    pub fn new(mut c: Vec<Fe>, level: u8) -> Poly {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        Poly { c, level }
    }

    pub fn zero(level: u8) -> Poly {
        Poly { c: Vec::new(), level }
    }

    pub fn one(level: u8) -> Poly {
        Poly { c: vec![Fe::one(level)], level }
    }

    pub fn x(level: u8) -> Poly {
        Poly { c: vec![Fe::zero(level), Fe::one(level)], level }
    }

    pub fn constant(a: Fe) -> Poly {
        Poly::new(vec![a], a.level())
    }

    pub fn monomial(a: Fe, k: usize) -> Poly {
        let mut c = vec![Fe::zero(a.level()); k + 1];
        c[k] = a;
        Poly::new(c, a.level())
    }

    /// Polynomial over GF(2) given as bits, low degree first.
    pub fn from_bits(bits: &[u8], level: u8) -> Poly {
        Poly::new(bits.iter().map(|&b| Fe::new(b as u32 & 1, level)).collect(), level)
    }

    /// Decode an integer in base 2^level (digit i is the coefficient of x^i).
    pub fn from_index(mut idx: u64, level: u8) -> Poly {
        let mut c = Vec::new();
        let base = 1u64 << level;
        while idx > 0 {
            c.push(Fe::new((idx % base) as u32, level));
            idx /= base;
        }
        Poly::new(c, level)
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::zero(self.level))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::zero(self.level))
    }

    pub fn scale(&self, a: Fe) -> Poly {
        if a.is_zero() {
            return Poly::zero(self.level);
        }
        Poly { c: self.c.iter().map(|&b| b * a).collect(), level: self.level }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.lc().inv().unwrap())
    }

    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Fe::zero(self.level); k];
        c.extend_from_slice(&self.c);
        Poly { c, level: self.level }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(self.coeff(i) + o.coeff(i));
        }
        Poly::new(c, self.level)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.level);
        }
        let mut c = vec![Fe::zero(self.level); self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c, self.level)
    }

    pub fn square(&self) -> Poly {
        self.frob()
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Division with remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.deg() < d.deg() {
            return (Poly::zero(self.level), self.clone());
        }
        let inv = d.lc().inv().unwrap();
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        let mut q = vec![Fe::zero(self.level); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = r[k + dd] * inv;
            if coef.is_zero() {
                continue;
            }
            q[k] = coef;
            for (j, &b) in d.c.iter().enumerate() {
                r[k + j] += coef * b;
            }
        }
        r.truncate(dd);
        (Poly::new(q, self.level), Poly::new(r, self.level))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, o: &Poly) -> bool {
        o.rem(self).is_zero()
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s*self + t*o = g, g monic.
    pub fn xgcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let l = self.level;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(l), Poly::zero(l));
        let (mut t0, mut t1) = (Poly::zero(l), Poly::one(l));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = r1;
            r1 = r;
            let s = s0.add(&q.mul(&s1));
            s0 = s1;
            s1 = s;
            let t = t0.add(&q.mul(&t1));
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.xgcd(m);
        if g.is_one() {
            Some(s.rem(m))
        } else {
            None
        }
    }

    pub fn eval(&self, a: Fe) -> Fe {
        let mut acc = Fe::zero(a.level());
        if a.level() == self.level {
            for &c in self.c.iter().rev() {
                acc = acc * a + c;
            }
        } else {
            let e = Embedding::new(self.level, a.level()).expect("incompatible evaluation point");
            for &c in self.c.iter().rev() {
                acc = acc * a + e.apply(c);
            }
        }
        acc
    }

    pub fn deriv(&self) -> Poly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| if i % 2 == 1 { a } else { Fe::zero(self.level) })
            .collect();
        Poly::new(c, self.level)
    }

    /// Absolute Frobenius: squares every coefficient and substitutes x -> x^2.
    pub fn frob(&self) -> Poly {
        let mut c = vec![Fe::zero(self.level); (2 * self.c.len()).saturating_sub(1)];
        for (i, &a) in self.c.iter().enumerate() {
            c[2 * i] = a.frob();
        }
        Poly::new(c, self.level)
    }

    /// Writes self = e^2 + x * o^2 and returns (e, o).
    pub fn split_even_odd(&self) -> (Poly, Poly) {
        let mut e = Vec::new();
        let mut o = Vec::new();
        for (i, &a) in self.c.iter().enumerate() {
            if i % 2 == 0 {
                e.push(a.sqrt());
            } else {
                o.push(a.sqrt());
            }
        }
        (Poly::new(e, self.level), Poly::new(o, self.level))
    }

    /// Square root of a polynomial all of whose odd coefficients vanish.
    pub fn sqrt(&self) -> Poly {
        let (e, o) = self.split_even_odd();
        debug_assert!(o.is_zero(), "not a square");
        e
    }

    pub fn embed(&self, e: &Embedding) -> Poly {
        Poly::new(self.c.iter().map(|&a| e.apply(a)).collect(), e.target())
    }

    /// Coefficients reversed with respect to degree `n` (x^n p(1/x)).
    pub fn reverse(&self, n: usize) -> Poly {
        let mut c = vec![Fe::zero(self.level); n + 1];
        for (i, &a) in self.c.iter().enumerate() {
            debug_assert!(i <= n);
            c[n - i] = a;
        }
        Poly::new(c, self.level)
    }

    /// Number of times `p` divides self (self != 0).
    pub fn valuation(&self, p: &Poly) -> i64 {
        debug_assert!(!self.is_zero());
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(p);
            if !r.is_zero() {
                return v;
            }
            v += 1;
            cur = q;
        }
    }

    /// Sort key: degree first, then coefficients from the top.
    pub fn key(&self) -> Vec<u32> {
        let mut k = vec![self.c.len() as u32];
        k.extend(self.c.iter().rev().map(|a| a.bits()));
        k
    }

    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.level).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.square().rem(m);
            e >>= 1;
        }
        acc
    }

    /// Irreducible monic factors with multiplicities, sorted by [`Poly::key`].
    pub fn factor(&self) -> Vec<(Poly, usize)> {
        assert!(!self.is_zero());
        let mut out = Vec::new();
        for (sq, mult) in squarefree(&self.monic()) {
            for (d, part) in distinct_degree(&sq) {
                for f in equal_degree(&part, d) {
                    out.push((f, mult));
                }
            }
        }
        out.sort_by(|a, b| a.0.key().cmp(&b.0.key()));
        out
    }

    pub fn is_irreducible(&self) -> bool {
        if self.deg() < 1 {
            return false;
        }
        let sq = squarefree(&self.monic());
        if sq.len() != 1 || sq[0].1 != 1 {
            return false;
        }
        let dd = distinct_degree(&sq[0].0);
        dd.len() == 1 && dd[0].0 as i64 == self.deg()
    }

    /// All monic irreducible polynomials of degree `d` over GF(2^level).
    pub fn irreducibles(d: usize, level: u8) -> Vec<Poly> {
        let q = 1u64 << level;
        let count = q.pow(d as u32);
        let mut out = Vec::new();
        for idx in 0..count {
            let mut p = Poly::from_index(idx, level);
            let mut c = p.c.clone();
            c.resize(d, Fe::zero(level));
            c.push(Fe::one(level));
            p = Poly::new(c, level);
            if p.is_irreducible() {
                out.push(p);
            }
        }
        out
    }
}

fn squarefree(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.deg() < 1 {
        return out;
    }
    let df = f.deriv();
    if df.is_zero() {
        for (g, k) in squarefree(&f.sqrt()) {
            out.push((g, 2 * k));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() && c.deg() > 0 {
        for (g, k) in squarefree(&c.monic().sqrt()) {
            out.push((g, 2 * k));
        }
    }
    out
}

fn distinct_degree(f: &Poly) -> Vec<(usize, Poly)> {
    let l = f.level;
    let q = 1u128 << l;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = Poly::x(l);
    let mut h = x.rem(&rest);
    let mut i = 0;
    while rest.deg() >= 2 * (i as i64 + 1) {
        i += 1;
        h = h.pow_mod(q, &rest);
        let g = rest.gcd(&h.add(&x));
        if !g.is_one() {
            out.push((i, g.clone()));
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
        }
    }
    if rest.deg() > 0 {
        out.push((rest.deg() as usize, rest.monic()));
    }
    out
}

fn equal_degree(f: &Poly, d: usize) -> Vec<Poly> {
    let l = f.level;
    let n = f.deg() as usize;
    if n == d {
        return vec![f.monic()];
    }
    let mut seed: u64 = 0x9E37_79B9_7F4A_7C15;
    loop {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let a = Poly::from_index(seed >> 11, l).rem(f);
        if a.deg() < 1 {
            continue;
        }
        // trace map a + a^2 + ... + a^(2^(m d - 1))
        let mut t = a.clone();
        let mut acc = a.clone();
        for _ in 1..(l as usize * d) {
            t = t.square().rem(f);
            acc = acc.add(&t);
        }
        let g = f.gcd(&acc);
        if g.deg() > 0 && g.deg() < f.deg() {
            let mut out = equal_degree(&g, d);
            out.extend(equal_degree(&f.div_exact(&g), d));
            return out;
        }
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = if a.is_one() && i > 0 { String::new() } else { format!("{}", a) };
            let sep = if coef.is_empty() || i == 0 { "" } else { "*" };
            match i {
                0 => write!(f, "{}", coef)?,
                1 => write!(f, "{}{}x", coef, sep)?,
                _ => write!(f, "{}{}x^{}", coef, sep, i)?,
            }
        }
        Ok(())
    }
}
