//! Truncated Laurent series over GF(2^m) with precision tracking.

use std::fmt;

use crate::field::Fe;
use crate::poly::Poly;

/// `t^val * (c[0] + c[1] t + ...) + O(t^(val + c.len()))`, with `c[0] != 0`
/// unless the series is an unresolved zero `O(t^val)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    val: i64,
    c: Vec<Fe>,
    level: u8,
}

impl Series {
    fn normalized(mut val: i64, mut c: Vec<Fe>, level: u8) -> Series {
        let lead = c.iter().position(|a| !a.is_zero()).unwrap_or(c.len());
        c.drain(..lead);
        val += lead as i64;
        Series { val, c, level }
    }

    /// Exact constant known to relative precision `prec`.
    pub fn constant(a: Fe, prec: usize) -> Series {
        let mut c = vec![Fe::zero(a.level()); prec];
        if prec > 0 {
            c[0] = a;
        }
        Series::normalized(0, c, a.level())
    }

    pub fn zero(abs: i64, level: u8) -> Series {
        Series { val: abs, c: Vec::new(), level }
    }

    /// t^k, exact to relative precision `prec`.
    pub fn t_pow(k: i64, level: u8, prec: usize) -> Series {
        let mut s = Series::constant(Fe::one(level), prec);
        s.val = k;
        s
    }

    /// A polynomial in t, to absolute precision `abs`.
    pub fn from_poly(p: &Poly, abs: i64) -> Series {
        let n = abs.max(0) as usize;
        let c = (0..n).map(|i| p.coeff(i)).collect();
        Series::normalized(0, c, p.level())
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn is_unresolved_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Valuation, or `None` if the series is zero to known precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn abs_prec(&self) -> i64 {
        self.val + self.c.len() as i64
    }

    pub fn rel_prec(&self) -> usize {
        self.c.len()
    }

    /// Coefficient of t^k; panics if beyond the known precision.
    pub fn coeff(&self, k: i64) -> Fe {
        assert!(k < self.abs_prec(), "series coefficient beyond precision");
        if k < self.val {
            Fe::zero(self.level)
        } else {
            self.c[(k - self.val) as usize]
        }
    }

    pub fn add(&self, o: &Series) -> Series {
        let abs = self.abs_prec().min(o.abs_prec());
        let v = self.val.min(o.val).min(abs);
        let c = (v..abs)
            .map(|k| {
                let a = if k >= self.val { self.c[(k - self.val) as usize] } else { Fe::zero(self.level) };
                let b = if k >= o.val { o.c[(k - o.val) as usize] } else { Fe::zero(self.level) };
                a + b
            })
            .collect();
        Series::normalized(v, c, self.level)
    }

    pub fn mul(&self, o: &Series) -> Series {
        if self.c.is_empty() || o.c.is_empty() {
            // zero times something: absolute precision from the known parts
            let abs = match (self.valuation(), o.valuation()) {
                (None, Some(v)) => self.val + v,
                (Some(v), None) => o.val + v,
                _ => self.val + o.val,
            };
            return Series::zero(abs, self.level);
        }
        let n = self.c.len().min(o.c.len());
        let mut c = vec![Fe::zero(self.level); n];
        for i in 0..n {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..(n - i) {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Series::normalized(self.val + o.val, c, self.level)
    }

    pub fn scale(&self, a: Fe) -> Series {
        if a.is_zero() {
            return Series::zero(self.abs_prec(), self.level);
        }
        Series { val: self.val, c: self.c.iter().map(|&b| b * a).collect(), level: self.level }
    }

    pub fn shift(&self, k: i64) -> Series {
        Series { val: self.val + k, c: self.c.clone(), level: self.level }
    }

    pub fn inv(&self) -> Series {
        assert!(!self.c.is_empty(), "inverse of an unresolved zero series");
        let n = self.c.len();
        let a0inv = self.c[0].inv().unwrap();
        let mut b = vec![Fe::zero(self.level); n];
        b[0] = a0inv;
        for k in 1..n {
            let mut s = Fe::zero(self.level);
            for i in 1..=k {
                s += self.c[i] * b[k - i];
            }
            b[k] = s * a0inv;
        }
        Series { val: -self.val, c: b, level: self.level }
    }

    pub fn div(&self, o: &Series) -> Series {
        self.mul(&o.inv())
    }

    /// d/dt.
    pub fn deriv(&self) -> Series {
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(i, &a)| if (self.val + i as i64).rem_euclid(2) == 1 { a } else { Fe::zero(self.level) })
            .collect();
        Series::normalized(self.val - 1, c, self.level)
    }

    /// Evaluate a polynomial (coefficients possibly in a subfield) at this series.
    pub fn eval_poly(&self, p: &Poly, embed: &dyn Fn(Fe) -> Fe, prec: usize) -> Series {
        let mut acc = Series::zero(i64::MAX / 4, self.level);
        let mut first = true;
        for &c in p.coeffs().iter().rev() {
            let cst = Series::constant(embed(c), prec);
            if first {
                acc = cst;
                first = false;
            } else {
                acc = acc.mul(self).add(&cst);
            }
        }
        if first {
            return Series::zero(i64::MAX / 4, self.level);
        }
        acc
    }

    /// Truncate the relative precision.
    pub fn truncate(&self, rel: usize) -> Series {
        let mut c = self.c.clone();
        c.truncate(rel);
        Series { val: self.val, c, level: self.level }
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{}*[", self.val)?;
        for a in &self.c {
            write!(f, "{} ", a)?;
        }
        write!(f, "]+O(t^{})", self.abs_prec())
    }
}
