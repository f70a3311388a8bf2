//! Subsequence-embedding counts, trace likelihoods, and exact maximum-
//! likelihood decoding over a codebook.
//!
//! For the deletion channel, the probability of receiving `y` from input `x`
//! of length `n` factors as `Emb(y, x) * q^(n-|y|) * (1-q)^|y|`, where
//! `Emb(y, x)` counts the distinct index sets embedding `y` as a subsequence
//! of `x`. Over a codebook of equal-length words the channel factors are the
//! same for every word, so the exact ML decision reduces to maximizing the
//! product of embedding counts across traces.
//!
//! # Example
//!
//! ```
//! use tracecode::bits::BitString;
//! use tracecode::likelihood::count_embeddings;
//!
//! let y = BitString::parse("10").unwrap();
//! let x = BitString::parse("110").unwrap();
//! assert_eq!(count_embeddings(&y, &x), 2u32.into());
//! ```

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::stats::{wilson_interval, WilsonInterval};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A set of pairwise-distinct codewords of one common length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    words: Vec<BitString>,
}

impl Codebook {
    /// Builds a codebook, checking nonemptiness, equal lengths, and
    /// pairwise distinctness.
    pub fn new(words: Vec<BitString>) -> Result<Self> {
        let n = match words.first() {
            Some(w) => w.len(),
            None => return Err(Error::InvalidParameter("codebook must be nonempty".into())),
        };
        if words.iter().any(|w| w.len() != n) {
            return Err(Error::InvalidParameter("codewords must share one length".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for w in &words {
            if !seen.insert(w.as_slice().to_vec()) {
                return Err(Error::InvalidParameter(format!("duplicate codeword {w}")));
            }
        }
        Ok(Codebook { n, words })
    }

    /// All `2^m` words of length `m`, indexed by their value read MSB-first.
    /// Capped at `m <= 20` to keep the table explicit.
    pub fn full(m: usize) -> Result<Self> {
        if m == 0 || m > 20 {
            return Err(Error::InvalidParameter(format!("word length {m} not in 1..=20")));
        }
        let words = (0u32..1 << m)
            .map(|v| BitString::from_bits(&(0..m).map(|i| ((v >> (m - 1 - i)) & 1) as u8).collect::<Vec<_>>()))
            .collect();
        Ok(Codebook { n: m, words })
    }

    pub fn word_len(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &BitString {
        &self.words[i]
    }

    pub fn words(&self) -> &[BitString] {
        &self.words
    }

    /// Index of `w` in the codebook, if present.
    pub fn position(&self, w: &BitString) -> Option<usize> {
        self.words.iter().position(|c| c == w)
    }
}

#[derive(Serialize, Deserialize)]
struct CodebookRepr {
    n: usize,
    words: Vec<String>,
}

impl Serialize for Codebook {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CodebookRepr { n: self.n, words: self.words.iter().map(|w| w.to_hex()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Codebook {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CodebookRepr::deserialize(d)?;
        let words = repr
            .words
            .iter()
            .map(|h| BitString::from_hex(h, repr.n))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Codebook::new(words).map_err(D::Error::custom)
    }
}

/// Counts embeddings of `y` as a subsequence of `x`, exactly.
///
/// Rolling-row DP over prefixes of `x`: after consuming `x[..i]`, `row[j]`
/// holds the number of embeddings of `y[..j]`. Empty `y` has one embedding;
/// `|y| > |x|` has zero.
pub fn count_embeddings(y: &BitString, x: &BitString) -> BigUint {
    let mut row: Vec<BigUint> = vec![BigUint::zero(); y.len() + 1];
    row[0] = BigUint::one();
    for &xi in x.iter() {
        for j in (1..=y.len()).rev() {
            if y[j - 1] == xi {
                let prev = row[j - 1].clone();
                row[j] += prev;
            }
        }
    }
    row.pop().unwrap()
}

/// Same DP in `u128`. Valid without overflow for `|x| <= 128` since counts
/// are bounded by `C(|x|, |y|)`; callers must enforce that bound.
fn count_embeddings_u128(y: &[u8], x: &[u8]) -> u128 {
    debug_assert!(x.len() <= 128);
    let mut row = vec![0u128; y.len() + 1];
    row[0] = 1;
    for &xi in x {
        for j in (1..=y.len()).rev() {
            if y[j - 1] == xi {
                row[j] += row[j - 1];
            }
        }
    }
    row[y.len()]
}

fn log2_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        let lo: u64 = v.try_into().unwrap_or(u64::MAX);
        return (lo as f64).log2();
    }
    // Top 64 bits as mantissa, rest as exponent.
    let shift = bits - 64;
    let top: BigUint = v >> shift;
    let lo: u64 = (&top).try_into().unwrap();
    (lo as f64).log2() + shift as f64
}

fn check_open_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("deletion probability {q} not in (0,1)")));
    }
    Ok(())
}

fn check_unit_q(q: f64) -> Result<()> {
    if !(q >= 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("deletion probability {q} not in [0,1)")));
    }
    Ok(())
}

/// Log-base-2 of `Pr[y | x]` under the deletion channel with rate `q`.
///
/// Returns negative infinity when `y` is not a subsequence of `x` (including
/// `|y| > |x|`). `q` must lie strictly inside (0,1); the endpoint channels
/// are deterministic and have no meaningful log-likelihood surface.
pub fn bdc_log_likelihood(y: &BitString, x: &BitString, q: f64) -> Result<f64> {
    check_open_q(q)?;
    if y.len() > x.len() {
        return Ok(f64::NEG_INFINITY);
    }
    let count = count_embeddings(y, x);
    if count.is_zero() {
        return Ok(f64::NEG_INFINITY);
    }
    let deleted = (x.len() - y.len()) as f64;
    Ok(log2_biguint(&count) + deleted * q.log2() + y.len() as f64 * (1.0 - q).log2())
}

/// Candidates whose float scores sit within this window of the maximum are
/// re-compared with exact big-integer products. The accumulated float error
/// over any realistic trace count is below 2^-30, so the true argmax always
/// survives into the window.
const SCORE_WINDOW: f64 = 1e-6;

/// Exact maximum-likelihood decoding of possibly-missing traces against a
/// codebook.
///
/// `None` entries are unobserved traces and contribute no evidence. Ties are
/// broken toward the lowest index; if every codeword has likelihood zero
/// (some trace embeds in none of them), returns index 0 as a give-up value.
pub fn ml_decode(cb: &Codebook, traces: &[Option<BitString>], q: f64) -> Result<usize> {
    // Codebook words share one length, so the q-power factors of the
    // likelihood are common to every candidate and the argmax reduces to
    // embedding counts alone; q = 0 (nothing deleted) is therefore fine.
    check_unit_q(q)?;
    if cb.is_empty() {
        return Err(Error::InvalidParameter("codebook must be nonempty".into()));
    }
    if traces.is_empty() {
        return Err(Error::InvalidParameter("need at least one trace slot".into()));
    }
    let observed: Vec<&BitString> = traces.iter().flatten().collect();
    let fast = cb.n <= 128;
    // Per-word sum of log2 embedding counts; None marks likelihood zero.
    let mut scores: Vec<Option<f64>> = Vec::with_capacity(cb.len());
    for w in &cb.words {
        let mut sum = 0.0;
        let mut dead = false;
        for y in &observed {
            if y.len() > w.len() {
                dead = true;
                break;
            }
            let lg = if fast {
                let c = count_embeddings_u128(y, w);
                if c == 0 {
                    f64::NEG_INFINITY
                } else if c <= 1 << 53 {
                    (c as f64).log2()
                } else {
                    log2_biguint(&BigUint::from(c))
                }
            } else {
                log2_biguint(&count_embeddings(y, w))
            };
            if lg == f64::NEG_INFINITY {
                dead = true;
                break;
            }
            sum += lg;
        }
        scores.push(if dead { None } else { Some(sum) });
    }
    let best = match scores.iter().flatten().cloned().fold(None, |m: Option<f64>, s| {
        Some(match m {
            Some(m) => m.max(s),
            None => s,
        })
    }) {
        Some(b) => b,
        None => return Ok(0), // every word is impossible: give up
    };
    let candidates: Vec<usize> = (0..cb.len())
        .filter(|&i| matches!(scores[i], Some(s) if s >= best - SCORE_WINDOW))
        .collect();
    if candidates.len() == 1 {
        return Ok(candidates[0]);
    }
    // Near-tie: settle exactly with big-integer products, lowest index wins.
    let mut winner = candidates[0];
    let mut winner_product = exact_product(&observed, cb.word(winner));
    for &i in &candidates[1..] {
        let p = exact_product(&observed, cb.word(i));
        if p > winner_product {
            winner = i;
            winner_product = p;
        }
    }
    Ok(winner)
}

fn exact_product(observed: &[&BitString], w: &BitString) -> BigUint {
    let mut p = BigUint::one();
    for y in observed {
        p *= count_embeddings(y, w);
    }
    p
}

/// Monte-Carlo estimate of the average-case ML failure rate.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FailureEstimate {
    pub trials: u64,
    pub failures: u64,
    pub failure_rate: f64,
    /// Wilson 95% score interval for the failure rate.
    pub ci: WilsonInterval,
}

/// Estimates average-case ML decoding success over the full codebook of
/// length-`m` words, reported as a failure rate: draws a uniform codeword,
/// passes it through the deletion channel `t` times, decodes, and counts
/// mismatches.
pub fn estimate_avg_success<R: Rng + ?Sized>(
    m: usize,
    q: f64,
    t: usize,
    trials: u64,
    rng: &mut R,
) -> Result<FailureEstimate> {
    check_unit_q(q)?;
    if t == 0 {
        return Err(Error::InvalidParameter("need at least one trace".into()));
    }
    let cb = Codebook::full(m)?;
    let mut failures = 0u64;
    for _ in 0..trials {
        let idx = rng.gen_range(0..cb.len());
        let traces: Vec<Option<BitString>> = (0..t)
            .map(|_| crate::channel::apply_bdc(cb.word(idx), q, rng).map(|tr| Some(tr.payload)))
            .collect::<Result<_>>()?;
        if ml_decode(&cb, &traces, q)? != idx {
            failures += 1;
        }
    }
    let rate = if trials == 0 { 0.0 } else { failures as f64 / trials as f64 };
    Ok(FailureEstimate {
        trials,
        failures,
        failure_rate: rate,
        ci: wilson_interval(failures, trials, 1.96),
    })
}
