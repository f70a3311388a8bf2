//! Arithmetic in the binary fields `GF(2^b)` for `1 <= b <= 16`.
//!
//! Elements are bit patterns of polynomials over GF(2) reduced by a
//! primitive polynomial, packed into `u16`. Multiplication runs through
//! log/antilog tables indexed by powers of `x`, which the constructor
//! verifies to be a group generator; the reduction polynomial itself is
//! checked irreducible by trial division up to degree `b/2`.

use crate::error::{Error, Result};

/// Primitive polynomials over GF(2), one per degree. Bit `i` is the
/// coefficient of `x^i`, leading bit included.
const PRIMITIVE_POLY: [u32; 17] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

fn pdeg(a: u64) -> i64 {
    63 - a.leading_zeros() as i64
}

/// Remainder of carryless polynomial division.
fn pmod(mut a: u64, m: u64) -> u64 {
    debug_assert!(m != 0);
    let dm = pdeg(m);
    while pdeg(a) >= dm {
        a ^= m << (pdeg(a) - dm);
    }
    a
}

/// True when `poly` (of degree >= 2) has no factor of degree in
/// `1..=deg/2`; degree-1 polynomials are always irreducible.
fn is_irreducible(poly: u64) -> bool {
    let d = pdeg(poly);
    if d < 1 {
        return false;
    }
    for g_deg in 1..=d / 2 {
        for g in (1u64 << g_deg)..(1u64 << (g_deg + 1)) {
            if pmod(poly, g) == 0 {
                return false;
            }
        }
    }
    true
}

/// `GF(2^b)` with table-driven arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    b: u32,
    poly: u32,
    /// exp[i] = x^i, for i in 0..2^b-1.
    exp: Vec<u16>,
    /// log[a] = i with x^i = a, for a != 0; log[0] unused.
    log: Vec<u16>,
}

impl Field {
    /// Field with the built-in primitive polynomial for width `b`.
    pub fn new(b: u32) -> Result<Self> {
        if !(1..=16).contains(&b) {
            return Err(Error::InvalidParameter(format!("field width {b} not in 1..=16")));
        }
        Self::with_poly(b, PRIMITIVE_POLY[b as usize])
    }

    /// Field with a caller-chosen reduction polynomial. The polynomial must
    /// have degree exactly `b`, be irreducible, and have `x` as a generator
    /// of the multiplicative group (primitivity).
    pub fn with_poly(b: u32, poly: u32) -> Result<Self> {
        if !(1..=16).contains(&b) {
            return Err(Error::InvalidParameter(format!("field width {b} not in 1..=16")));
        }
        if pdeg(poly as u64) != b as i64 {
            return Err(Error::InvalidParameter(format!(
                "reduction polynomial {poly:#x} does not have degree {b}"
            )));
        }
        if !is_irreducible(poly as u64) {
            return Err(Error::InvalidParameter(format!(
                "reduction polynomial {poly:#x} is reducible"
            )));
        }
        let size = 1usize << b;
        let order = size - 1;
        let mut exp = vec![0u16; order];
        let mut log = vec![0u16; size];
        let mut v: u32 = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = v as u16;
            if i > 0 && v == 1 {
                return Err(Error::InvalidParameter(format!(
                    "x has order {i} under {poly:#x}: not primitive"
                )));
            }
            log[v as usize] = i as u16;
            v <<= 1;
            if v & (1 << b) != 0 {
                v ^= poly;
            }
        }
        // Cycle must close back to 1 exactly at the group order.
        let closes = {
            let mut w = exp[order - 1] as u32;
            w <<= 1;
            if w & (1 << b) != 0 {
                w ^= poly;
            }
            w == 1
        };
        if !closes {
            return Err(Error::InvalidParameter(format!("x is not primitive under {poly:#x}")));
        }
        Ok(Field { b, poly, exp, log })
    }

    pub fn width(&self) -> u32 {
        self.b
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Number of field elements, `2^b`.
    pub fn size(&self) -> usize {
        1 << self.b
    }

    /// Multiplicative group order, `2^b - 1`.
    pub fn order(&self) -> usize {
        self.size() - 1
    }

    /// The generator `x` (the element `0b10`), or 1 in GF(2) where the
    /// group is trivial.
    pub fn alpha(&self) -> u16 {
        if self.b == 1 {
            1
        } else {
            2
        }
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[i % self.order()]
    }

    pub fn inv(&self, a: u16) -> Result<u16> {
        if a == 0 {
            return Err(Error::InvalidParameter("zero has no inverse".into()));
        }
        let i = self.log[a as usize] as usize;
        Ok(self.exp[(self.order() - i) % self.order()])
    }

    pub fn div(&self, a: u16, b: u16) -> Result<u16> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` by table lookup; `0^0 = 1`.
    pub fn pow(&self, a: u16, e: u64) -> u16 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let i = self.log[a as usize] as u64;
        self.exp[((i as u128 * e as u128) % self.order() as u128) as usize]
    }

    /// `x^i`.
    pub fn exp(&self, i: usize) -> u16 {
        self.exp[i % self.order()]
    }

    /// Discrete log base `x` of a nonzero element.
    pub fn log(&self, a: u16) -> Result<usize> {
        if a == 0 {
            return Err(Error::InvalidParameter("zero has no logarithm".into()));
        }
        Ok(self.log[a as usize] as usize)
    }

    fn check_element(&self, a: u16) -> Result<()> {
        if (a as usize) < self.size() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{a} is not a GF(2^{}) element", self.b)))
        }
    }

    /// Validates a slice of field elements.
    pub fn check_elements(&self, v: &[u16]) -> Result<()> {
        v.iter().try_for_each(|&a| self.check_element(a))
    }
}
