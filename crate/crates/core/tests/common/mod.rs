#![allow(dead_code)]

use ffd_core::field::{Fe, MODULI};
use ffd_core::{load_curve, CurveConfig, CurveModel};

pub fn curve(m: u8, g: usize) -> CurveModel {
    load_curve(&CurveConfig::artin_schreier(m, g)).unwrap()
}

fn eval(coeffs: &[u8], x: Fe, level: u8) -> Fe {
    coeffs.iter().rev().fold(Fe::zero(level), |acc, &b| acc * x + if b == 1 { Fe::one(level) } else { Fe::zero(level) })
}

/// Affine points of y^2 + h y = f over GF(2^level), brute force.
pub fn affine_points(h: &[u8], f: &[u8], level: u8) -> Vec<(Fe, Fe)> {
    let mut out = Vec::new();
    for x in Fe::all(level) {
        let (hx, fx) = (eval(h, x, level), eval(f, x, level));
        for y in Fe::all(level) {
            if y * y + hx * y == fx {
                out.push((x, y));
            }
        }
    }
    out
}

/// #X(GF(2^level)) including the single point at infinity.
pub fn point_count(c: &CurveModel, level: u8) -> usize {
    affine_points(&c.config().h, &c.config().f, level).len() + 1
}

pub fn deriv(p: &[u8]) -> Vec<u8> {
    (1..p.len()).map(|i| if i % 2 == 1 { p[i] } else { 0 }).collect()
}

pub fn eval_bits(p: &[u8], x: Fe) -> Fe {
    eval(p, x, x.level())
}

/// Carry-less product reduced by the shipped modulus.
pub fn clmul_mod(a: u32, b: u32, m: u8) -> u32 {
    let mut r: u64 = 0;
    for i in 0..m {
        if b >> i & 1 == 1 {
            r ^= (a as u64) << i;
        }
    }
    let modulus = MODULI[m as usize] as u64;
    for i in (m as u32..2 * m as u32).rev() {
        if r >> i & 1 == 1 {
            r ^= modulus << (i - m as u32);
        }
    }
    r as u32
}

/// #Pic^0 = L(1) from point counts over GF(q^r), r <= g (Newton identities).
pub fn pic0_from_zeta(c: &CurveModel) -> i64 {
    let g = c.genus();
    let q = c.q() as i64;
    let s: Vec<i64> = (1..=g)
        .map(|r| q.pow(r as u32) + 1 - point_count(c, c.m() * r as u8) as i64)
        .collect();
    // L(t) = exp(-sum s_r t^r / r): k c_k = -sum_{r=1..k} s_r c_{k-r}
    let mut co = vec![1i64];
    for k in 1..=g {
        let acc: i64 = (1..=k).map(|r| s[r - 1] * co[k - r]).sum();
        assert_eq!(acc % k as i64, 0);
        co.push(-acc / k as i64);
    }
    let mut total: i64 = co.iter().sum();
    for k in 0..g {
        total += q.pow((g - k) as u32) * co[k];
    }
    total
}
