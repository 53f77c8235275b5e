//! Rational functions in one variable over GF(2^m), kept in lowest terms.

use std::fmt;

use crate::field::{Embedding, Fe};
use crate::poly::Poly;

/// `num / den` with `den` monic and coprime to `num`; zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> RatFunc {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero(num.level());
        }
        if den.is_constant() {
            let inv = den.lc().inv().unwrap();
            return RatFunc { num: num.scale(inv), den: Poly::one(den.level()) };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        let inv = den.lc().inv().unwrap();
        RatFunc { num: num.scale(inv), den: den.scale(inv) }
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let l = p.level();
        RatFunc { num: p, den: Poly::one(l) }
    }

    pub fn zero(level: u8) -> RatFunc {
        RatFunc { num: Poly::zero(level), den: Poly::one(level) }
    }

    pub fn one(level: u8) -> RatFunc {
        RatFunc::from_poly(Poly::one(level))
    }

    pub fn x(level: u8) -> RatFunc {
        RatFunc::from_poly(Poly::x(level))
    }

    pub fn constant(a: Fe) -> RatFunc {
        RatFunc::from_poly(Poly::constant(a))
    }

    /// x^k for any integer k.
    pub fn x_pow(k: i64, level: u8) -> RatFunc {
        let m = Poly::monomial(Fe::one(level), k.unsigned_abs() as usize);
        if k >= 0 {
            RatFunc::from_poly(m)
        } else {
            RatFunc { num: Poly::one(level), den: m }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn level(&self) -> u8 {
        self.num.level()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// deg(num) - deg(den); `i64::MIN` for zero.
    pub fn deg(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.num.deg() - self.den.deg()
        }
    }

    /// Coefficient of x^deg in the expansion at infinity.
    pub fn lead(&self) -> Fe {
        self.num.lc()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.level());
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&o.num));
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        self.mul(&RatFunc::from_poly(p.clone()))
    }

    pub fn scale(&self, a: Fe) -> RatFunc {
        RatFunc { num: self.num.scale(a), den: if a.is_zero() { Poly::one(self.level()) } else { self.den.clone() } }
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> RatFunc {
        self.mul(&o.inv())
    }

    pub fn square(&self) -> RatFunc {
        RatFunc { num: self.num.square(), den: self.den.square() }
    }

    /// Absolute Frobenius (squaring).
    pub fn frob(&self) -> RatFunc {
        self.square()
    }

    /// Writes self = e^2 + x * o^2 with e, o rational.
    pub fn split_even_odd(&self) -> (RatFunc, RatFunc) {
        let (e, o) = self.num.mul(&self.den).split_even_odd();
        (RatFunc::new(e, self.den.clone()), RatFunc::new(o, self.den.clone()))
    }

    pub fn eval_poly_at(&self, a: Fe) -> Option<Fe> {
        let d = self.den.eval(a);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(a) * d.inv().unwrap())
        }
    }

    /// Valuation at the finite place of k(x) given by the irreducible `p`.
    pub fn valuation(&self, p: &Poly) -> i64 {
        if self.is_zero() {
            return i64::MAX;
        }
        self.num.valuation(p) - self.den.valuation(p)
    }

    pub fn embed(&self, e: &Embedding) -> RatFunc {
        RatFunc::new(self.num.embed(e), self.den.embed(e))
    }

    /// Polynomial division with remainder (both sides must be polynomials).
    pub fn poly_divrem(&self, o: &RatFunc) -> (RatFunc, RatFunc) {
        debug_assert!(self.is_poly() && o.is_poly());
        let (q, r) = self.num.divrem(&o.num);
        (RatFunc::from_poly(q), RatFunc::from_poly(r))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_arith() {
        let l = 2;
        let a = RatFunc::new(Poly::from_index(0x1d, l), Poly::from_index(0x27, l));
        let b = RatFunc::new(Poly::from_index(0x6, l), Poly::from_index(0x13, l));
        let s = a.add(&b);
        assert_eq!(s.add(&b), a);
        let p = a.mul(&b);
        assert_eq!(p.div(&b), a);
        assert!(p.den().lc().is_one());
    }

    #[test]
    fn even_odd_split() {
        let l = 2;
        let a = RatFunc::new(Poly::from_index(0x1d3, l), Poly::from_index(0x27, l));
        let (e, o) = a.split_even_odd();
        assert_eq!(e.square().add(&RatFunc::x(l).mul(&o.square())), a);
    }
}
