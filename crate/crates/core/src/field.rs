//! Arithmetic in GF(2^m) for 1 <= m <= 16.
//!
//! Every element carries its level `m`; the modulus for each level is fixed
//! (see [`MODULI`]) so element encodings are reproducible. Multiplication goes
//! through log/antilog tables built lazily per level.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported extension degree over GF(2).
pub const MAX_LEVEL: u8 = 16;

/// Irreducible modulus for each level, bit `i` is the coefficient of `z^i`.
pub const MODULI: [u32; 17] = [
    0, 0b11, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B,
    0x4443, 0x8003, 0x1100B,
];

struct Tables {
    exp: Vec<u16>,
    log: Vec<u32>,
    order: u32,
}

static TABLES: [OnceLock<Tables>; 17] = [const { OnceLock::new() }; 17];

fn clmul_reduce(a: u32, b: u32, m: u8) -> u32 {
    let modulus = MODULI[m as usize];
    let mut acc: u32 = 0;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

fn tables(m: u8) -> &'static Tables {
    TABLES[m as usize].get_or_init(|| {
        let size = 1u32 << m;
        let order = size - 1;
        // smallest generator of the multiplicative group
        let mut gen = 1u32;
        'search: for cand in 1..size {
            let mut x = 1u32;
            for k in 1..=order {
                x = clmul_reduce(x, cand, m);
                if x == 1 {
                    if k == order {
                        gen = cand;
                        break 'search;
                    }
                    break;
                }
            }
        }
        let mut exp = vec![0u16; 2 * order as usize + 1];
        let mut log = vec![0u32; size as usize];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x as u16;
            exp[(k + order) as usize] = x as u16;
            log[x as usize] = k;
            x = clmul_reduce(x, gen, m);
        }
        exp[2 * order as usize] = 1;
        Tables { exp, log, order }
    })
}

/// An element of GF(2^m) in the polynomial basis of `MODULI[m]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe {
    bits: u16,
    level: u8,
}

impl Fe {
    pub fn new(bits: u32, level: u8) -> Fe {
        debug_assert!((1..=MAX_LEVEL).contains(&level));
        debug_assert!(bits < (1u32 << level));
        Fe { bits: bits as u16, level }
    }

    pub fn zero(level: u8) -> Fe {
        Fe { bits: 0, level }
    }

    pub fn one(level: u8) -> Fe {
        Fe { bits: 1, level }
    }

    pub fn bits(self) -> u32 {
        self.bits as u32
    }

    pub fn level(self) -> u8 {
        self.level
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn is_one(self) -> bool {
        self.bits == 1
    }

    /// Multiplicative inverse.
    pub fn inv(self) -> Result<Fe> {
        if self.bits == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = tables(self.level);
        let l = t.log[self.bits as usize];
        let e = if l == 0 { 0 } else { t.order - l };
        Ok(Fe { bits: t.exp[e as usize], level: self.level })
    }

    /// Frobenius: a -> a^2.
    pub fn frob(self) -> Fe {
        self * self
    }

    /// Inverse of the Frobenius; squaring is a bijection on a finite field of characteristic 2.
    pub fn sqrt(self) -> Fe {
        let mut x = self;
        for _ in 1..self.level {
            x = x * x;
        }
        x
    }

    pub fn pow(self, mut e: u64) -> Fe {
        let mut base = self;
        let mut acc = Fe::one(self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Absolute trace to GF(2).
    pub fn trace(self) -> bool {
        let mut acc = self;
        let mut x = self;
        for _ in 1..self.level {
            x = x * x;
            acc += x;
        }
        debug_assert!(acc.bits <= 1);
        acc.bits == 1
    }

    /// Smallest root of `w^2 + w = self`, if any (exists iff the trace vanishes).
    pub fn artin_schreier_root(self) -> Option<Fe> {
        if self.trace() {
            return None;
        }
        let m = self.level;
        let cols: Vec<u32> = (0..m)
            .map(|i| {
                let e = Fe::new(1 << i, m);
                (e * e + e).bits()
            })
            .collect();
        let w = Fe::new(crate::linalg::gf2_solve_cols(&cols, self.bits())?, m);
        let w1 = w + Fe::one(m);
        Some(if w1.bits < w.bits { w1 } else { w })
    }

    /// Image under the fixed embedding GF(2^level) -> GF(2^target).
    pub fn embed(self, target: u8) -> Result<Fe> {
        let emb = Embedding::new(self.level, target)?;
        Ok(emb.apply(self))
    }

    /// All elements of GF(2^level), in encoding order.
    pub fn all(level: u8) -> impl Iterator<Item = Fe> {
        (0..(1u32 << level)).map(move |b| Fe::new(b, level))
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Hexadecimal bit-vector, low degree in the least significant bit.
impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.bits)
    }
}

impl Add for Fe {
    type Output = Fe;
    #[inline]
    fn add(self, rhs: Fe) -> Fe {
        debug_assert_eq!(self.level, rhs.level);
        Fe { bits: self.bits ^ rhs.bits, level: self.level }
    }
}

impl Sub for Fe {
    type Output = Fe;
    #[inline]
    fn sub(self, rhs: Fe) -> Fe {
        self + rhs
    }
}

impl AddAssign for Fe {
    #[inline]
    fn add_assign(&mut self, rhs: Fe) {
        *self = *self + rhs;
    }
}

impl Mul for Fe {
    type Output = Fe;
    #[inline]
    fn mul(self, rhs: Fe) -> Fe {
        debug_assert_eq!(self.level, rhs.level);
        if self.bits == 0 || rhs.bits == 0 {
            return Fe { bits: 0, level: self.level };
        }
        if self.level == 1 {
            return self;
        }
        let t = tables(self.level);
        let e = t.log[self.bits as usize] + t.log[rhs.bits as usize];
        Fe { bits: t.exp[e as usize], level: self.level }
    }
}

impl MulAssign for Fe {
    #[inline]
    fn mul_assign(&mut self, rhs: Fe) {
        *self = *self * rhs;
    }
}

/// The embedding GF(2^source) -> GF(2^target) sending the generator `z` to the
/// smallest root of `MODULI[source]` in the target field.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: u8,
    target: u8,
    image_of_z: Fe,
}

impl Embedding {
    pub fn new(source: u8, target: u8) -> Result<Embedding> {
        if source == 0 || target > MAX_LEVEL || source > target || target % source != 0 {
            return Err(Error::IncompatibleTower { from: source, target });
        }
        let image_of_z = if source == target {
            Fe::new(if source == 1 { 1 } else { 2 }, target)
        } else {
            root_of_modulus(source, target)
        };
        Ok(Embedding { source, target, image_of_z })
    }

    pub fn source(&self) -> u8 {
        self.source
    }

    pub fn target(&self) -> u8 {
        self.target
    }

    pub fn apply(&self, a: Fe) -> Fe {
        debug_assert_eq!(a.level, self.source);
        if self.source == self.target {
            return a;
        }
        let mut acc = Fe::zero(self.target);
        let mut power = Fe::one(self.target);
        for i in 0..self.source {
            if a.bits >> i & 1 == 1 {
                acc += power;
            }
            power *= self.image_of_z;
        }
        acc
    }
}

fn root_of_modulus(source: u8, target: u8) -> Fe {
    static CACHE: OnceLock<std::sync::Mutex<std::collections::HashMap<(u8, u8), Fe>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&(source, target)) {
        return *r;
    }
    let modulus = MODULI[source as usize];
    let root = Fe::all(target)
        .find(|&c| {
            let mut acc = Fe::zero(target);
            let mut power = Fe::one(target);
            for i in 0..=source {
                if modulus >> i & 1 == 1 {
                    acc += power;
                }
                power *= c;
            }
            acc.is_zero()
        })
        .expect("an irreducible polynomial of degree s has a root in GF(2^(s*r))");
    cache.lock().unwrap().insert((source, target), root);
    root
}

/// Frobenius-style operation selector used by the CLI and FFI surfaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Frob,
    Sqrt,
    Embed(u8),
}

pub fn field_arith(a: Fe, b: Fe, op: FieldOp) -> Result<Fe> {
    match op {
        FieldOp::Add => Ok(a + b),
        FieldOp::Mul => Ok(a * b),
        FieldOp::Inv => a.inv(),
        FieldOp::Frob => Ok(a.frob()),
        FieldOp::Sqrt => Ok(a.sqrt()),
        FieldOp::Embed(target) => a.embed(target),
    }
}
