//! Dense linear algebra over GF(2) (bit-packed) and over GF(2^m).

use crate::field::Fe;

/// A row of a bit-packed GF(2) matrix.
pub type BitRow = Vec<u64>;

pub fn bit_get(r: &[u64], i: usize) -> bool {
    r[i / 64] >> (i % 64) & 1 == 1
}

pub fn bit_set(r: &mut [u64], i: usize) {
    r[i / 64] |= 1u64 << (i % 64);
}

pub fn bit_flip(r: &mut [u64], i: usize) {
    r[i / 64] ^= 1u64 << (i % 64);
}

pub fn bit_row(ncols: usize) -> BitRow {
    vec![0u64; ncols.div_ceil(64)]
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn gf2_rref(rows: &mut Vec<BitRow>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| bit_get(&rows[i], c)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && bit_get(row, c) {
                xor_into(row, &pivot);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{v : M v = 0}` for `M` given by rows.
pub fn gf2_kernel(rows: &[BitRow], ncols: usize) -> Vec<BitRow> {
    let mut m = rows.to_vec();
    let pivots = gf2_rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = bit_row(ncols);
        bit_set(&mut v, free);
        for (row, &p) in m.iter().zip(&pivots) {
            if bit_get(row, free) {
                bit_set(&mut v, p);
            }
        }
        out.push(v);
    }
    out
}

/// Solves a square-or-tall system over GF(2) given by column masks (at most 32 rows).
pub fn gf2_solve_cols(cols: &[u32], rhs: u32) -> Option<u32> {
    // rows of the augmented system, as (coefficient mask over unknowns, rhs bit)
    let n = cols.len();
    let mut rows: Vec<(u32, bool)> = (0..32)
        .map(|i| {
            let mut mask = 0u32;
            for (j, &c) in cols.iter().enumerate() {
                if c >> i & 1 == 1 {
                    mask |= 1 << j;
                }
            }
            (mask, rhs >> i & 1 == 1)
        })
        .collect();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0 >> c & 1 == 1) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.0 >> c & 1 == 1 {
                row.0 ^= pivot.0;
                row.1 ^= pivot.1;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row.1) {
        return None;
    }
    let mut x = 0u32;
    for (i, &c) in pivots.iter().enumerate() {
        if rows[i].1 {
            x |= 1 << c;
        }
    }
    Some(x)
}

/// Reduced row echelon form over GF(2^m) in place; returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<Fe>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().unwrap();
        for a in rows[r].iter_mut() {
            *a *= inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let s = row[c];
            for (a, &b) in row.iter_mut().zip(&pivot) {
                *a += s * b;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Fe>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of the right kernel `{v : M v = 0}`.
pub fn kernel(rows: &[Vec<Fe>], ncols: usize, level: u8) -> Vec<Vec<Fe>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Fe::zero(level); ncols];
        v[free] = Fe::one(level);
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = row[free];
        }
        out.push(v);
    }
    out
}

pub fn det(rows: &[Vec<Fe>], level: u8) -> Fe {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut acc = Fe::one(level);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Fe::zero(level);
        };
        m.swap(c, p);
        acc *= m[c][c];
        let inv = m[c][c].inv().unwrap();
        for i in (c + 1)..n {
            if m[i][c].is_zero() {
                continue;
            }
            let s = m[i][c] * inv;
            for j in c..n {
                let t = m[c][j];
                m[i][j] += s * t;
            }
        }
    }
    acc
}

/// Expands vectors over GF(2^m) into GF(2) bit rows (m bits per entry).
pub fn to_bits(v: &[Fe]) -> BitRow {
    let m = v.first().map(|a| a.level() as usize).unwrap_or(1);
    let mut r = bit_row(v.len() * m);
    for (i, a) in v.iter().enumerate() {
        for j in 0..m {
            if a.bits() >> j & 1 == 1 {
                bit_set(&mut r, i * m + j);
            }
        }
    }
    r
}

pub fn from_bits(r: &[u64], len: usize, level: u8) -> Vec<Fe> {
    let m = level as usize;
    (0..len)
        .map(|i| {
            let mut b = 0u32;
            for j in 0..m {
                if bit_get(r, i * m + j) {
                    b |= 1 << j;
                }
            }
            Fe::new(b, level)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_annihilated() {
        let l = 2;
        let rows: Vec<Vec<Fe>> = [[1u32, 2, 3, 0], [2, 3, 1, 1], [3, 1, 2, 1]]
            .iter()
            .map(|r| r.iter().map(|&b| Fe::new(b, l)).collect())
            .collect();
        let k = kernel(&rows, 4, l);
        assert_eq!(k.len() + rank(&rows, 4), 4);
        for v in &k {
            for r in &rows {
                let s = r.iter().zip(v).fold(Fe::zero(l), |acc, (&a, &b)| acc + a * b);
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn gf2_kernel_dimension() {
        let mut a = bit_row(70);
        bit_set(&mut a, 0);
        bit_set(&mut a, 69);
        let mut b = bit_row(70);
        bit_set(&mut b, 69);
        let k = gf2_kernel(&[a, b], 70);
        assert_eq!(k.len(), 68);
        assert!(k.iter().all(|v| !bit_get(v, 0) && !bit_get(v, 69)));
    }

    #[test]
    fn det_of_singular_is_zero() {
        let l = 3;
        let r = vec![Fe::new(5, l), Fe::new(3, l)];
        let s: Vec<Fe> = r.iter().map(|&a| a * Fe::new(6, l)).collect();
        assert!(det(&[r, s], l).is_zero());
    }
}
