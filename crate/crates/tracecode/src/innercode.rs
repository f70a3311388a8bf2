//! m-protected inner codebooks and their multi-trace reconstruction.
//!
//! A word is m-protected when it reads 0^m w 1^m with w starting in 1 and
//! ending in 0, and every interior window of length L >= max(3, ceil(m/4))
//! carries between L/4 and 3L/4 ones. The buffers let an outer parser cut
//! traces at long runs without splitting content, and the density condition
//! keeps interior runs short.
//!
//! The window floor is clamped to 3: below that, length-2 windows would
//! force strict alternation (a length-2 window must then hold exactly one
//! 1), collapsing the codebook to a single word at small m.
//!
//! Codebooks are built constructively by rejection sampling followed by
//! greedy pruning of the words with the worst estimated reconstruction
//! failure, a constructive stand-in for intersecting a protected code with
//! a low-failure one.

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::likelihood::{ml_decode, Codebook};

/// Rejection-sampling attempt cap per word. Uniform-interior acceptance is
/// small at tight lengths (measured ~1e-5 at n=60, m=8 and ~2e-4 at n=48,
/// m=8), so the cap leaves two orders of magnitude of headroom.
const SAMPLE_CAP: usize = 1_000_000;
/// Greedy pruning round cap.
const PRUNE_ROUNDS: usize = 100;

/// Interior windows shorter than this are unconstrained.
fn window_floor(m: u32) -> usize {
    (m as usize).div_ceil(4).max(3)
}

/// Exact check of the m-protected conditions, O(|w|^2) over all windows.
pub fn is_m_protected(w: &BitString, m: u32) -> bool {
    let m = m as usize;
    let n = w.len();
    // Needs room for both buffers and a nonempty interior "1...0".
    if n < 2 * m + 2 {
        return false;
    }
    if w[..m].iter().any(|&b| b != 0) || w[n - m..].iter().any(|&b| b != 1) {
        return false;
    }
    let interior = &w[m..n - m];
    let len = interior.len();
    if interior[0] != 1 || interior[len - 1] != 0 {
        return false;
    }
    // ones[i] = number of 1s in interior[..i].
    let mut ones = vec![0usize; len + 1];
    for (i, &b) in interior.iter().enumerate() {
        ones[i + 1] = ones[i] + b as usize;
    }
    for l in window_floor(m as u32)..=len {
        for start in 0..=len - l {
            let c = ones[start + l] - ones[start];
            // L/4 <= c <= 3L/4, kept exact as L <= 4c <= 3L.
            if 4 * c < l || 4 * c > 3 * l {
                return false;
            }
        }
    }
    true
}

/// Samples a length-n m-protected word: uniform interiors of the form
/// 1 || {0,1}^(n-2m-2) || 0 are drawn until one passes `is_m_protected`.
pub fn sample_protected<R: Rng + ?Sized>(n: usize, m: u32, rng: &mut R) -> Result<BitString> {
    if n < 3 * m as usize || n < 2 * m as usize + 2 {
        return Err(Error::InvalidParameter(format!(
            "protected words need n >= 3m, got n={n}, m={m}"
        )));
    }
    for _ in 0..SAMPLE_CAP {
        let mut bits = vec![0u8; n];
        bits[m as usize] = 1;
        for b in &mut bits[m as usize + 1..n - m as usize - 1] {
            *b = rng.gen_range(0..2);
        }
        for b in &mut bits[n - m as usize..] {
            *b = 1;
        }
        let w = BitString(bits);
        if is_m_protected(&w, m) {
            return Ok(w);
        }
    }
    Err(Error::ConstructionFailed(format!(
        "no m-protected word found in {SAMPLE_CAP} attempts at n={n}, m={m}"
    )))
}

/// A codebook of m-protected words with optional per-word estimated
/// reconstruction failure rates.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtectedCodebook {
    codebook: Codebook,
    m: u32,
    failure_rates: Option<Vec<f64>>,
}

impl ProtectedCodebook {
    /// Wraps an existing codebook, asserting every word is m-protected.
    pub fn new(codebook: Codebook, m: u32) -> Result<Self> {
        for (i, w) in codebook.words().iter().enumerate() {
            if !is_m_protected(w, m) {
                return Err(Error::InvalidParameter(format!(
                    "word {i} is not {m}-protected"
                )));
            }
        }
        Ok(ProtectedCodebook {
            codebook,
            m,
            failure_rates: None,
        })
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Word length n_R.
    pub fn word_len(&self) -> usize {
        self.codebook.word_len()
    }

    pub fn len(&self) -> usize {
        self.codebook.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codebook.is_empty()
    }

    /// Per-word Monte Carlo failure estimates from the build, if any.
    pub fn failure_rates(&self) -> Option<&[f64]> {
        self.failure_rates.as_deref()
    }
}

/// Monte Carlo estimate of word `idx`'s reconstruction failure under T
/// traces of BDC_q and ML decoding against `book`.
fn estimate_word_failure<R: Rng + ?Sized>(
    book: &Codebook,
    idx: usize,
    q: f64,
    t: usize,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    let word = book.word(idx).clone();
    let mut failures = 0usize;
    for _ in 0..trials {
        let traces: Vec<Option<BitString>> = (0..t)
            .map(|_| Ok(Some(crate::channel::apply_bdc(&word, q, rng)?.payload)))
            .collect::<Result<_>>()?;
        if ml_decode(book, &traces, q)? != idx {
            failures += 1;
        }
    }
    Ok(failures as f64 / trials as f64)
}

/// One greedy pruning pass: repeatedly resample the word with the worst
/// estimated failure and keep the replacement only when its estimate is
/// strictly better, so the stored mean never increases.
fn prune_codebook<R: Rng + ?Sized>(
    words: &mut Vec<BitString>,
    rates: &mut [f64],
    m: u32,
    q: f64,
    t: usize,
    trials: usize,
    rng: &mut R,
) -> Result<()> {
    let n = words[0].len();
    for _ in 0..PRUNE_ROUNDS {
        let worst = (0..rates.len())
            .max_by(|&a, &b| rates[a].total_cmp(&rates[b]))
            .expect("nonempty codebook");
        if rates[worst] == 0.0 {
            break;
        }
        let candidate = sample_protected(n, m, rng)?;
        if words.contains(&candidate) {
            continue;
        }
        let old = std::mem::replace(&mut words[worst], candidate);
        let trial_book = Codebook::new(words.clone())?;
        let est = estimate_word_failure(&trial_book, worst, q, t, trials, rng)?;
        if est < rates[worst] {
            rates[worst] = est;
        } else {
            words[worst] = old;
        }
    }
    Ok(())
}

/// Builds a codebook of 2^k distinct m-protected words of length n_R.
///
/// With `prune_trials > 0`, each word's reconstruction failure under
/// (T, q) is estimated by Monte Carlo and the worst words are greedily
/// resampled; the resulting estimates are stored on the codebook.
pub fn build_inner_code<R: Rng + ?Sized>(
    n_r: usize,
    k: u32,
    m: u32,
    q: f64,
    t: usize,
    prune_trials: usize,
    rng: &mut R,
) -> Result<ProtectedCodebook> {
    if k > 16 {
        return Err(Error::InvalidParameter(format!(
            "codebook size 2^{k} is past any desk-scale use"
        )));
    }
    let size = 1usize << k;
    let mut words: Vec<BitString> = Vec::with_capacity(size);
    let mut misses = 0usize;
    while words.len() < size {
        let w = sample_protected(n_r, m, rng)?;
        if words.contains(&w) {
            misses += 1;
            if misses > SAMPLE_CAP {
                return Err(Error::ConstructionFailed(format!(
                    "fewer than 2^{k} distinct protected words at n_R={n_r}, m={m}"
                )));
            }
            continue;
        }
        words.push(w);
    }
    let mut failure_rates = None;
    if prune_trials > 0 && t > 0 {
        let book = Codebook::new(words.clone())?;
        let mut rates = (0..size)
            .map(|i| estimate_word_failure(&book, i, q, t, prune_trials, rng))
            .collect::<Result<Vec<f64>>>()?;
        prune_codebook(&mut words, &mut rates, m, q, t, prune_trials, rng)?;
        failure_rates = Some(rates);
    }
    Ok(ProtectedCodebook {
        codebook: Codebook::new(words)?,
        m,
        failure_rates,
    })
}

/// Multi-trace ML reconstruction of a codebook index. MISSING traces are
/// skipped; if every trace is MISSING the decoder answers DON'T-KNOW
/// (`None`), which outer layers consume as an erasure.
pub fn inner_reconstruct(
    cb: &ProtectedCodebook,
    traces: &[Option<BitString>],
    q: f64,
) -> Result<Option<usize>> {
    if traces.iter().all(|t| t.is_none()) {
        return Ok(None);
    }
    ml_decode(&cb.codebook, traces, q).map(Some)
}

#[derive(Serialize, Deserialize)]
struct ProtectedRepr {
    #[serde(flatten)]
    codebook: Codebook,
    m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    failure_rates: Option<Vec<f64>>,
}

impl Serialize for ProtectedCodebook {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ProtectedRepr {
            codebook: self.codebook.clone(),
            m: self.m,
            failure_rates: self.failure_rates.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ProtectedCodebook {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = ProtectedRepr::deserialize(de)?;
        let mut book = ProtectedCodebook::new(r.codebook, r.m).map_err(D::Error::custom)?;
        if let Some(rates) = r.failure_rates {
            if rates.len() != book.len() {
                return Err(D::Error::custom("failure_rates length mismatch"));
            }
            book.failure_rates = Some(rates);
        }
        Ok(book)
    }
}
