//! Lattices in k(x)^n over the two rings that matter on the x-line: the
//! polynomial ring k[x] and the valuation ring R of the place at infinity
//! (rational functions of degree <= 0).
//!
//! A lattice is stored as an invertible n x n matrix whose columns form a
//! basis. Everything is built on two primitives, [`span`] and [`preimage`].

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::linalg;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// Column-major square or rectangular matrix over k(x).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    pub rows: usize,
    pub cols: Vec<Vec<RatFunc>>,
}

impl Mat {
    pub fn zero(rows: usize, ncols: usize, level: u8) -> Mat {
        Mat { rows, cols: vec![vec![RatFunc::zero(level); rows]; ncols] }
    }

    pub fn identity(n: usize, level: u8) -> Mat {
        let mut m = Mat::zero(n, n, level);
        for i in 0..n {
            m.cols[i][i] = RatFunc::one(level);
        }
        m
    }

    pub fn from_cols(rows: usize, cols: Vec<Vec<RatFunc>>) -> Mat {
        debug_assert!(cols.iter().all(|c| c.len() == rows));
        Mat { rows, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.cols[j][i]
    }

    pub fn level(&self) -> u8 {
        self.cols[0][0].level()
    }

    pub fn transpose(&self) -> Mat {
        let cols = (0..self.rows).map(|i| self.cols.iter().map(|c| c[i].clone()).collect()).collect();
        Mat { rows: self.ncols(), cols }
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        debug_assert_eq!(self.ncols(), o.rows);
        let cols = o.cols.iter().map(|c| self.apply(c)).collect();
        Mat { rows: self.rows, cols }
    }

    pub fn apply(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        let l = self.level();
        let mut out = vec![RatFunc::zero(l); self.rows];
        for (c, a) in self.cols.iter().zip(v) {
            if a.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(c) {
                if !e.is_zero() {
                    *o = o.add(&e.mul(a));
                }
            }
        }
        out
    }

    pub fn scale(&self, a: &RatFunc) -> Mat {
        Mat { rows: self.rows, cols: self.cols.iter().map(|c| c.iter().map(|e| e.mul(a)).collect()).collect() }
    }

    pub fn inverse(&self) -> Result<Mat> {
        let n = self.rows;
        debug_assert_eq!(n, self.ncols());
        let l = self.level();
        // row-major augmented elimination
        let mut a: Vec<Vec<RatFunc>> = (0..n)
            .map(|i| {
                let mut r: Vec<RatFunc> = (0..n).map(|j| self.cols[j][i].clone()).collect();
                r.extend((0..n).map(|j| if i == j { RatFunc::one(l) } else { RatFunc::zero(l) }));
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n)
                .filter(|&i| !a[i][c].is_zero())
                .min_by_key(|&i| a[i][c].num().deg() + a[i][c].den().deg())
                .ok_or(Error::RankDeficient)?;
            a.swap(c, p);
            let inv = a[c][c].inv();
            a[c] = a[c].iter().map(|e| e.mul(&inv)).collect();
            let piv = a[c].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == c || row[c].is_zero() {
                    continue;
                }
                let s = row[c].clone();
                for (e, pe) in row.iter_mut().zip(&piv) {
                    if !pe.is_zero() {
                        *e = e.add(&s.mul(pe));
                    }
                }
            }
        }
        let cols = (0..n).map(|j| (0..n).map(|i| a[i][n + j].clone()).collect()).collect();
        Ok(Mat { rows: n, cols })
    }

    pub fn det(&self) -> RatFunc {
        let n = self.rows;
        let l = self.level();
        let mut a: Vec<Vec<RatFunc>> = (0..n).map(|i| (0..n).map(|j| self.cols[j][i].clone()).collect()).collect();
        let mut acc = RatFunc::one(l);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return RatFunc::zero(l);
            };
            a.swap(c, p);
            acc = acc.mul(&a[c][c]);
            let inv = a[c][c].inv();
            for i in (c + 1)..n {
                if a[i][c].is_zero() {
                    continue;
                }
                let s = a[i][c].mul(&inv);
                for j in c..n {
                    let t = a[c][j].mul(&s);
                    a[i][j] = a[i][j].add(&t);
                }
            }
        }
        acc
    }
}

/// One of the two Euclidean rings used for lattices.
pub trait Ring {
    fn contains(a: &RatFunc) -> bool;
    /// Euclidean size; smaller is a better pivot.
    fn size(a: &RatFunc) -> i64;
    /// `q` in the ring with `size(a - q b) < size(b)` or `a = q b`.
    fn quo(a: &RatFunc, b: &RatFunc) -> RatFunc;
    /// Scalar `s` with `s * gens` integral (for rings needing it).
    fn clearing_factor(gens: &[Vec<RatFunc>]) -> RatFunc;
}

/// The polynomial ring k[x].
pub struct Fin;

/// The valuation ring at infinity of k(x).
pub struct Inf;

impl Ring for Fin {
    fn contains(a: &RatFunc) -> bool {
        a.is_poly()
    }
    fn size(a: &RatFunc) -> i64 {
        a.deg()
    }
    fn quo(a: &RatFunc, b: &RatFunc) -> RatFunc {
        RatFunc::from_poly(a.num().divrem(b.num()).0)
    }
    fn clearing_factor(gens: &[Vec<RatFunc>]) -> RatFunc {
        let mut l: Option<Poly> = None;
        for e in gens.iter().flatten() {
            let d = e.den();
            l = Some(match l {
                None => d.clone(),
                Some(acc) => {
                    let g = acc.gcd(d);
                    acc.mul(&d.div_exact(&g))
                }
            });
        }
        RatFunc::from_poly(l.unwrap_or_else(|| Poly::one(gens[0][0].level())))
    }
}

impl Ring for Inf {
    fn contains(a: &RatFunc) -> bool {
        a.is_zero() || a.deg() <= 0
    }
    fn size(a: &RatFunc) -> i64 {
        -a.deg()
    }
    fn quo(a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.div(b)
    }
    fn clearing_factor(gens: &[Vec<RatFunc>]) -> RatFunc {
        RatFunc::one(gens[0][0].level())
    }
}

/// A basis of the R-span of `gens` (vectors of length n). Fails unless the
/// span has full rank n.
pub fn span<R: Ring>(n: usize, gens: &[Vec<RatFunc>]) -> Result<Mat> {
    let mut cols: Vec<Vec<RatFunc>> = gens.iter().filter(|v| v.iter().any(|e| !e.is_zero())).cloned().collect();
    if cols.len() < n {
        return Err(Error::RankDeficient);
    }
    let s = R::clearing_factor(&cols);
    if !s.is_one() {
        for c in cols.iter_mut() {
            for e in c.iter_mut() {
                *e = e.mul(&s);
            }
        }
    }
    let mut p = 0;
    for i in 0..n {
        loop {
            let live: Vec<usize> = (p..cols.len()).filter(|&j| !cols[j][i].is_zero()).collect();
            if live.is_empty() {
                break;
            }
            let best = *live.iter().min_by_key(|&&j| (R::size(&cols[j][i]), j)).unwrap();
            cols.swap(p, best);
            if live.len() == 1 {
                p += 1;
                break;
            }
            let piv = cols[p].clone();
            for j in (p + 1)..cols.len() {
                if cols[j][i].is_zero() {
                    continue;
                }
                let q = R::quo(&cols[j][i], &piv[i]);
                for (e, pe) in cols[j].iter_mut().zip(&piv) {
                    if !pe.is_zero() {
                        *e = e.add(&q.mul(pe));
                    }
                }
            }
        }
    }
    if p < n {
        return Err(Error::RankDeficient);
    }
    cols.truncate(n);
    let sinv = s.inv();
    if !sinv.is_one() {
        for c in cols.iter_mut() {
            for e in c.iter_mut() {
                *e = e.mul(&sinv);
            }
        }
    }
    Ok(Mat { rows: n, cols })
}

/// Basis of `{u in k(x)^n : M u in R^p}` for a `p x n` matrix `M` of rank n.
pub fn preimage<R: Ring>(m: &Mat) -> Result<Mat> {
    let n = m.ncols();
    let rows: Vec<Vec<RatFunc>> = (0..m.rows).map(|i| m.cols.iter().map(|c| c[i].clone()).collect()).collect();
    let b = span::<R>(n, &rows)?;
    b.transpose().inverse()
}

pub fn is_integral<R: Ring>(m: &Mat) -> bool {
    m.cols.iter().flatten().all(R::contains)
}

/// Whether the lattice spanned by `b2` lies in the one spanned by `b1`.
pub fn contains<R: Ring>(b1: &Mat, b2: &Mat) -> Result<bool> {
    Ok(is_integral::<R>(&b1.inverse()?.mul(b2)))
}

pub fn lattice_eq<R: Ring>(b1: &Mat, b2: &Mat) -> Result<bool> {
    Ok(contains::<R>(b1, b2)? && contains::<R>(b2, b1)?)
}

pub fn intersect<R: Ring>(b1: &Mat, b2: &Mat) -> Result<Mat> {
    let n = b1.rows;
    let l = b1.level();
    let t = b2.inverse()?.mul(b1);
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut c: Vec<RatFunc> = (0..n).map(|i| if i == j { RatFunc::one(l) } else { RatFunc::zero(l) }).collect();
        c.extend(t.cols[j].iter().cloned());
        cols.push(c);
    }
    let a = preimage::<R>(&Mat { rows: 2 * n, cols })?;
    Ok(b1.mul(&a))
}

pub fn sum<R: Ring>(b1: &Mat, b2: &Mat) -> Result<Mat> {
    let gens: Vec<Vec<RatFunc>> = b1.cols.iter().chain(&b2.cols).cloned().collect();
    span::<R>(b1.rows, &gens)
}

/// A k[x]-basis of the finite lattice reduced against the lattice at infinity.
///
/// Column j of `fin` is a section of the bundle twisted by `-delta[j]` at
/// infinity on the x-line; global sections are `x^k fin_j` for `k <= -delta[j]`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub fin: Mat,
    pub delta: Vec<i64>,
}

impl Reduced {
    pub fn h0(&self) -> usize {
        self.delta.iter().map(|&d| (1 - d).max(0) as usize).sum()
    }

    pub fn sections(&self) -> Vec<Vec<RatFunc>> {
        let l = self.fin.level();
        let mut out = Vec::new();
        for (j, &d) in self.delta.iter().enumerate() {
            for k in 0..=(-d) {
                let xk = RatFunc::x_pow(k, l);
                out.push(self.fin.cols[j].iter().map(|e| e.mul(&xk)).collect());
            }
        }
        out
    }
}

/// Column reduction of `fin` relative to `inf` (the local splitting at infinity).
pub fn reduce(fin: &Mat, inf: &Mat) -> Result<Reduced> {
    let n = fin.rows;
    let l = fin.level();
    let inf_inv = inf.inverse()?;
    let mut b = fin.clone();
    let mut s = inf_inv.mul(&b);
    loop {
        let delta: Vec<i64> = s.cols.iter().map(|c| c.iter().filter(|e| !e.is_zero()).map(|e| e.deg()).max().unwrap()).collect();
        let lead: Vec<Vec<Fe>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = &s.cols[j][i];
                        if !e.is_zero() && e.deg() == delta[j] {
                            e.lead()
                        } else {
                            Fe::zero(l)
                        }
                    })
                    .collect()
            })
            .collect();
        let ker = linalg::kernel(&lead, n, l);
        let Some(c) = ker.first() else {
            return Ok(Reduced { fin: b, delta });
        };
        let j0 = (0..n).filter(|&j| !c[j].is_zero()).max_by_key(|&j| (delta[j], std::cmp::Reverse(j))).unwrap();
        let mut nb = vec![RatFunc::zero(l); n];
        let mut ns = vec![RatFunc::zero(l); n];
        for j in (0..n).filter(|&j| !c[j].is_zero()) {
            let coef = RatFunc::x_pow(delta[j0] - delta[j], l).scale(c[j]);
            for i in 0..n {
                nb[i] = nb[i].add(&b.cols[j][i].mul(&coef));
                ns[i] = ns[i].add(&s.cols[j][i].mul(&coef));
            }
        }
        if ns.iter().all(|e| e.is_zero()) {
            return Err(Error::RankDeficient);
        }
        b.cols[j0] = nb;
        s.cols[j0] = ns;
    }
}
