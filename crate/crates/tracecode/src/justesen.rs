//! Brute-force inner codes of rate m/(m+s) and their concatenation with an
//! outer Reed-Solomon code.
//!
//! The inner code maps x to (x, sigma'(alpha * x)) where x ranges over
//! GF(2^m), sigma' projects onto s bits, and alpha is found by exhaustive
//! search so that no nonzero codeword has Hamming weight <= e, with
//! e = floor((m+s) * H^{-1}(s/(m+s))). The minimum-distance certificate is
//! re-verified whenever a code is reconstructed from its descriptor.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::rs::RSCode;

/// Binary entropy H(x) = -x log2 x - (1-x) log2 (1-x), with H(0) = H(1) = 0.
pub fn binary_entropy(x: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x), "entropy argument outside [0,1]");
    if x == 0.0 || x == 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Inverse of `binary_entropy` on [0, 1/2]: the unique x in [0, 1/2] with
/// H(x) = y, computed by bisection to ~1e-16.
pub fn inverse_binary_entropy(y: f64) -> f64 {
    assert!((0.0..=1.0).contains(&y), "entropy value outside [0,1]");
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    // H is strictly increasing on [0, 1/2]; 200 halvings exhaust f64.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The weight bound e = floor((m+s) * H^{-1}(s/(m+s))).
fn weight_bound(m: u32, s: u32) -> u32 {
    let frac = s as f64 / (m + s) as f64;
    ((m + s) as f64 * inverse_binary_entropy(frac)).floor() as u32
}

/// An inner code GF(2^m) -> {0,1}^{m+s} with certified minimum distance.
///
/// Codeword of x: the m bits of x (most significant first) followed by the
/// top s bits of alpha * x. Every nonzero codeword has weight > e, so the
/// code corrects floor(e/2) bit errors under nearest-codeword decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JustesenInner {
    field: Field,
    m: u32,
    s: u32,
    alpha: u16,
    e: u32,
}

impl JustesenInner {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn alpha(&self) -> u16 {
        self.alpha
    }

    /// The certified weight bound: all nonzero codewords have weight > e.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// Codeword length m + s.
    pub fn block_len(&self) -> usize {
        (self.m + self.s) as usize
    }

    /// Number of bit errors nearest-codeword decoding is guaranteed to fix.
    pub fn error_tolerance(&self) -> usize {
        (self.e / 2) as usize
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Codeword of `x` as an (m+s)-bit mask, message bits on top.
    fn encode_mask(&self, x: u16) -> u32 {
        debug_assert!((x as u32) < (1u32 << self.m));
        let prod = self.field.mul(self.alpha, x) as u32;
        let tail = prod >> (self.m - self.s);
        ((x as u32) << self.s) | tail
    }

    /// Codeword of `x`, most significant bit first.
    pub fn encode(&self, x: u16) -> BitString {
        let mask = self.encode_mask(x);
        let w = self.block_len();
        BitString((0..w).map(|i| ((mask >> (w - 1 - i)) & 1) as u8).collect())
    }

    /// Nearest-codeword decoding of an (m+s)-bit block; ties break toward
    /// the smaller symbol.
    pub fn decode(&self, block: &[u8]) -> Result<u16> {
        if block.len() != self.block_len() {
            return Err(Error::InvalidParameter(format!(
                "inner block length {} != {}",
                block.len(),
                self.block_len()
            )));
        }
        let mut received = 0u32;
        for &b in block {
            received = (received << 1) | (b & 1) as u32;
        }
        let mut best = 0u16;
        let mut best_dist = u32::MAX;
        for x in 0..(1u32 << self.m) {
            let d = (self.encode_mask(x as u16) ^ received).count_ones();
            if d < best_dist {
                best_dist = d;
                best = x as u16;
            }
        }
        Ok(best)
    }

    /// Exhaustive minimum nonzero codeword weight.
    pub fn min_nonzero_weight(&self) -> u32 {
        (1..(1u32 << self.m))
            .map(|x| self.encode_mask(x as u16).count_ones())
            .min()
            .expect("m >= 1")
    }
}

/// Finds the first alpha in GF(2^m) whose code (x, sigma'(alpha*x)) has
/// minimum nonzero weight > e = floor((m+s) * H^{-1}(s/(m+s))).
///
/// Exhaustive over alpha and codewords: 2^{2m} weight checks, hence m <= 14.
/// A counting argument guarantees such an alpha exists.
pub fn justesen_inner_search(m: u32, s: u32) -> Result<JustesenInner> {
    if !(1..=14).contains(&m) || s < 1 || s > m {
        return Err(Error::InvalidParameter(format!(
            "inner search needs 1 <= s <= m <= 14, got m={m} s={s}"
        )));
    }
    let field = Field::new(m)?;
    let e = weight_bound(m, s);
    for alpha in 0..(1u32 << m) {
        let code = JustesenInner {
            field: field.clone(),
            m,
            s,
            alpha: alpha as u16,
            e,
        };
        if code.min_nonzero_weight() > e {
            return Ok(code);
        }
    }
    Err(Error::ConstructionFailed(format!(
        "no alpha gives minimum weight > {e} at m={m} s={s}"
    )))
}

#[derive(Serialize, Deserialize)]
struct InnerRepr {
    m: u32,
    s: u32,
    alpha: u16,
    e: u32,
}

impl Serialize for JustesenInner {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        InnerRepr {
            m: self.m,
            s: self.s,
            alpha: self.alpha,
            e: self.e,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for JustesenInner {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = InnerRepr::deserialize(de)?;
        if !(1..=14).contains(&r.m) || r.s < 1 || r.s > r.m {
            return Err(D::Error::custom("inner code needs 1 <= s <= m <= 14"));
        }
        let field = Field::new(r.m).map_err(D::Error::custom)?;
        if (r.alpha as u32) >= (1u32 << r.m) {
            return Err(D::Error::custom("alpha outside GF(2^m)"));
        }
        if r.e != weight_bound(r.m, r.s) {
            return Err(D::Error::custom("stored e disagrees with (m, s)"));
        }
        let code = JustesenInner {
            field,
            m: r.m,
            s: r.s,
            alpha: r.alpha,
            e: r.e,
        };
        if code.min_nonzero_weight() <= r.e {
            return Err(D::Error::custom("minimum-weight certificate failed"));
        }
        Ok(code)
    }
}

/// Concatenation of an outer Reed-Solomon code over GF(2^m) with a
/// [`JustesenInner`] code, plus `pad` trailing zero bits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcatCode {
    outer: RSCode,
    inner: JustesenInner,
    pad: usize,
}

impl ConcatCode {
    pub fn new(outer: RSCode, inner: JustesenInner, pad: usize) -> Result<Self> {
        if outer.field().width() != inner.m() {
            return Err(Error::InvalidParameter(format!(
                "outer symbols are {} bits but inner code takes {}",
                outer.field().width(),
                inner.m()
            )));
        }
        Ok(ConcatCode { outer, inner, pad })
    }

    pub fn outer(&self) -> &RSCode {
        &self.outer
    }

    pub fn inner(&self) -> &JustesenInner {
        &self.inner
    }

    /// Total codeword length in bits, padding included.
    pub fn block_len(&self) -> usize {
        self.outer.n() * self.inner.block_len() + self.pad
    }

    pub fn message_len(&self) -> usize {
        self.outer.k()
    }

    /// Any bit-error pattern of weight < this budget is corrected: flipping
    /// an inner block takes > e/2 errors, and the outer code fixes up to
    /// floor((n-k)/2) wrong symbols.
    pub fn guaranteed_budget(&self) -> usize {
        let t_out = (self.outer.n() - self.outer.k()) / 2;
        (t_out + 1) * (self.inner.error_tolerance() + 1)
    }

    pub fn encode(&self, msg: &[u16]) -> Result<BitString> {
        let symbols = self.outer.encode(msg)?;
        let mut bits = Vec::with_capacity(self.block_len());
        for &sym in &symbols {
            bits.extend_from_slice(&self.inner.encode(sym));
        }
        bits.resize(bits.len() + self.pad, 0);
        Ok(BitString(bits))
    }

    /// Nearest-codeword inner decoding per block, then outer RS decoding.
    /// Padding bits are ignored. Outer decode failures propagate.
    pub fn decode(&self, word: &BitString) -> Result<Vec<u16>> {
        if word.len() != self.block_len() {
            return Err(Error::Format(format!(
                "codeword length {} != {}",
                word.len(),
                self.block_len()
            )));
        }
        let w = self.inner.block_len();
        let mut symbols = Vec::with_capacity(self.outer.n());
        for i in 0..self.outer.n() {
            symbols.push(Some(self.inner.decode(&word[i * w..(i + 1) * w])?));
        }
        self.outer.decode(&symbols)
    }
}

/// Derived parameters for a rate >= 1 - eps concatenated code of length n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JustesenParams {
    pub m: u32,
    pub s: u32,
    pub n_prime: usize,
    pub k_prime: usize,
}

/// The parameter coupling behind the rate-(1 - eps) construction: m is the
/// smallest integer > 12/eps with m * 2^m >= n, s the largest with
/// m/(m+s) >= 1 - eps/3, then n' = floor(n/(m+s)) outer blocks of
/// dimension k' = ceil(n' * (1 - eps/3)).
pub fn justesen_params(n: usize, eps: f64) -> Result<JustesenParams> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in (0, 1], got {eps}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let mut m = (12.0 / eps).floor() as u32 + 1;
    while m <= 14 && (m as u64) * (1u64 << m) < n as u64 {
        m += 1;
    }
    if m > 14 {
        return Err(Error::ConstructionFailed(format!(
            "coupling yields m={m} > 14; inner search is capped at 2^28 steps"
        )));
    }
    let rate_floor = 1.0 - eps / 3.0;
    let mut s = 1u32;
    while m as f64 / (m + s + 1) as f64 >= rate_floor {
        s += 1;
    }
    if s > m || (m as f64 / (m + s) as f64) < rate_floor {
        return Err(Error::ConstructionFailed(format!(
            "no valid s for m={m}, eps={eps}"
        )));
    }
    let n_prime = n / (m + s) as usize;
    let k_prime = (n_prime as f64 * rate_floor).ceil() as usize;
    if n_prime == 0 || k_prime > n_prime {
        return Err(Error::ConstructionFailed(format!(
            "n={n} too short for m+s={}",
            m + s
        )));
    }
    Ok(JustesenParams {
        m,
        s,
        n_prime,
        k_prime,
    })
}
