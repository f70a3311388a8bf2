//! Synchronization strings and position recovery for deletion-corrupted
//! symbol streams.
//!
//! A string `S` of length `n` is an eta-synchronization string when every
//! pair of adjacent intervals looks sufficiently different: for all
//! `0 <= i < j < k <= n`, the insertion-deletion distance between `S[i..j)`
//! and `S[j..k)` exceeds `(1 - eta) * (k - i)`. Equivalently, the LCS of the
//! two intervals is below `eta * (k - i) / 2`. Such strings exist over an
//! alphabet of size `O(1/eta^2)` and random strings achieve the property
//! with positive probability, so rejection sampling finds them.
//!
//! Two position-recovery routines are provided. Under pure deletions,
//! a received symbol whose leftmost and rightmost subsequence embeddings
//! agree is *provably* at that position, so guesses are error-free. Under
//! insertions and deletions, a minimum-distance global alignment recovers
//! positions with at most `2 n delta / (1 - eta)` misdecodings when the
//! adversary performs at most `n * delta` edits.

use crate::bits::SymbolString;
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A verified eta-synchronization string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyncString {
    pub eta: f64,
    pub alphabet_size: u32,
    pub symbols: Vec<u32>,
}

impl SyncString {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn as_symbol_string(&self) -> SymbolString {
        SymbolString::new(self.symbols.clone(), self.alphabet_size).unwrap()
    }

    /// Worst-case misdecoding count for `index_insdel` under at most
    /// `n * delta` insertions plus deletions.
    pub fn misdecoding_bound(&self, delta: f64) -> f64 {
        2.0 * self.len() as f64 * delta / (1.0 - self.eta)
    }
}

/// Outcome of a synchronization check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SyncCheck {
    pub ok: bool,
    /// Lexicographically first `(i, j, k)` with
    /// `ID(S[i..j), S[j..k)) <= (1 - eta)(k - i)`, if any.
    pub violation: Option<(usize, usize, usize)>,
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter(format!("eta {eta} not in (0,1)")));
    }
    Ok(())
}

/// Smallest alphabet size at which random strings are plausibly
/// eta-synchronizing: `ceil(64 / eta^2)`.
pub fn recommended_alphabet(eta: f64) -> u32 {
    (64.0 / (eta * eta)).ceil() as u32
}

/// True at `(i, j, k)` when the synchronization inequality fails there.
/// `lcs` is `LCS(S[i..j), S[j..k))`.
#[inline]
fn violates(i: usize, k: usize, lcs: u32, eta: f64) -> bool {
    let id = (k - i) as f64 - 2.0 * lcs as f64;
    id <= (1.0 - eta) * (k - i) as f64
}

/// Checks the synchronization property exhaustively over all interval pairs,
/// reporting the lexicographically first violating triple.
///
/// For each `(i, j)` the LCS against the growing right interval is updated
/// one symbol at a time, so the whole scan costs `O(n^4)` word operations
/// with a small constant and short-circuits at the first violation.
pub fn verify_sync(symbols: &[u32], eta: f64) -> Result<SyncCheck> {
    check_eta(eta)?;
    let n = symbols.len();
    let mut row: Vec<u32> = Vec::with_capacity(n);
    for i in 0..n {
        for j in i + 1..n {
            let a = &symbols[i..j];
            row.clear();
            row.resize(a.len() + 1, 0);
            for k in j + 1..=n {
                let c = symbols[k - 1];
                let mut diag = row[0];
                for p in 1..=a.len() {
                    let old = row[p];
                    let mut v = row[p].max(row[p - 1]);
                    if a[p - 1] == c {
                        v = v.max(diag + 1);
                    }
                    row[p] = v;
                    diag = old;
                }
                if violates(i, k, row[a.len()], eta) {
                    return Ok(SyncCheck { ok: false, violation: Some((i, j, k)) });
                }
            }
        }
    }
    Ok(SyncCheck { ok: true, violation: None })
}

/// Cheap rejection filter: scans only triples with `k - i <= cap`. A string
/// that fails any short window fails `verify_sync`, so generators can skip
/// the full scan for most rejected samples.
fn violates_short_window(symbols: &[u32], eta: f64, cap: usize) -> bool {
    let n = symbols.len();
    let mut row = [0u32; 16];
    for i in 0..n {
        for j in i + 1..(i + cap).min(n) {
            let a = &symbols[i..j];
            let row = &mut row[..a.len() + 1];
            row.fill(0);
            for k in j + 1..=(i + cap).min(n) {
                let c = symbols[k - 1];
                let mut diag = row[0];
                for p in 1..=a.len() {
                    let old = row[p];
                    let mut v = row[p].max(row[p - 1]);
                    if a[p - 1] == c {
                        v = v.max(diag + 1);
                    }
                    row[p] = v;
                    diag = old;
                }
                if violates(i, k, row[a.len()], eta) {
                    return true;
                }
            }
        }
    }
    false
}

const SHORT_WINDOW_CAP: usize = 12;

/// Generates a verified eta-synchronization string of length `n`.
///
/// When `n <= alphabet_size` the sample is a uniformly random string of
/// pairwise-distinct symbols; adjacent intervals then share nothing, so the
/// property holds for every eta and the first attempt succeeds. Otherwise
/// uniform strings are drawn and verified until one passes or
/// `max_attempts` is exhausted.
pub fn gen_sync<R: Rng + ?Sized>(
    n: usize,
    eta: f64,
    alphabet_size: u32,
    rng: &mut R,
    max_attempts: usize,
) -> Result<SyncString> {
    check_eta(eta)?;
    if n == 0 {
        return Err(Error::InvalidParameter("sync string length must be positive".into()));
    }
    if alphabet_size < 2 {
        return Err(Error::InvalidParameter("alphabet size must be at least 2".into()));
    }
    if max_attempts == 0 {
        return Err(Error::InvalidParameter("need at least one attempt".into()));
    }
    if n <= alphabet_size as usize {
        let mut pool: Vec<u32> = (0..alphabet_size).collect();
        pool.shuffle(rng);
        pool.truncate(n);
        let check = verify_sync(&pool, eta)?;
        debug_assert!(check.ok, "distinct symbols cannot violate synchronization");
        return Ok(SyncString { eta, alphabet_size, symbols: pool });
    }
    for _ in 0..max_attempts {
        let symbols: Vec<u32> = (0..n).map(|_| rng.gen_range(0..alphabet_size)).collect();
        if violates_short_window(&symbols, eta, SHORT_WINDOW_CAP) {
            continue;
        }
        if verify_sync(&symbols, eta)?.ok {
            return Ok(SyncString { eta, alphabet_size, symbols });
        }
    }
    Err(Error::ConstructionFailed(format!(
        "no eta={eta} synchronization string of length {n} over {alphabet_size} symbols \
         in {max_attempts} attempts"
    )))
}

/// Insertion-deletion distance: the number of edits (insertions plus
/// deletions, no substitutions) turning `a` into `b`, which is
/// `|a| + |b| - 2 LCS(a, b)`.
pub fn id_distance(a: &[u32], b: &[u32]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut row = vec![0u32; short.len() + 1];
    for &c in long {
        let mut diag = row[0];
        for p in 1..=short.len() {
            let old = row[p];
            let mut v = row[p].max(row[p - 1]);
            if short[p - 1] == c {
                v = v.max(diag + 1);
            }
            row[p] = v;
            diag = old;
        }
    }
    a.len() + b.len() - 2 * row[short.len()] as usize
}

/// Position recovery under pure deletions.
///
/// Expects `received` to be a subsequence of the synchronization string
/// (callers feed it deletion-channel output); if it is not, every position
/// comes back `None`. Each received position is assigned the index where
/// its leftmost and rightmost embeddings agree, and `None` where they
/// differ. Agreement pins the symbol in *every* embedding, including the
/// true one, so all `Some` guesses are correct regardless of eta.
pub fn index_deletion_only(s: &SyncString, received: &[u32]) -> Vec<Option<usize>> {
    let n = s.symbols.len();
    let r = received.len();
    let mut left = vec![0usize; r];
    let mut pos = 0usize;
    for (j, &c) in received.iter().enumerate() {
        while pos < n && s.symbols[pos] != c {
            pos += 1;
        }
        if pos == n {
            return vec![None; r]; // not a subsequence
        }
        left[j] = pos;
        pos += 1;
    }
    let mut right = vec![0usize; r];
    let mut pos = n;
    for j in (0..r).rev() {
        let c = received[j];
        while pos > 0 && s.symbols[pos - 1] != c {
            pos -= 1;
        }
        debug_assert!(pos > 0, "leftmost embedding exists, so rightmost must too");
        pos -= 1;
        right[j] = pos;
    }
    (0..r).map(|j| if left[j] == right[j] { Some(left[j]) } else { None }).collect()
}

/// Position recovery under insertions and deletions.
///
/// Computes a minimum insertion-deletion-distance global alignment between
/// the synchronization string and `received` (equivalently, a maximum
/// matching of equal symbols), walking ties toward the earliest matches.
/// Matched received positions map to their aligned index; unmatched ones
/// (treated as insertions) map to `None`.
///
/// `delta` is the corruption budget the caller believes applies, as a
/// fraction of the length; it scales the misdecoding guarantee
/// (`misdecoding_bound`) but does not gate the alignment, which is computed
/// unconditionally.
pub fn index_insdel(s: &SyncString, received: &[u32], delta: f64) -> Result<Vec<Option<usize>>> {
    if !(0.0..=1.0).contains(&delta) || delta.is_nan() {
        return Err(Error::InvalidParameter(format!("delta {delta} not in [0,1]")));
    }
    let n = s.symbols.len();
    let r = received.len();
    // Suffix LCS table: lcs[i][j] = LCS(s[i..], received[j..]).
    let mut lcs = vec![vec![0u32; r + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..r).rev() {
            lcs[i][j] = if s.symbols[i] == received[j] {
                lcs[i + 1][j + 1] + 1
            } else {
                lcs[i + 1][j].max(lcs[i][j + 1])
            };
        }
    }
    let mut guesses = vec![None; r];
    let (mut i, mut j) = (0usize, 0usize);
    while i < n && j < r {
        if s.symbols[i] == received[j] && lcs[i][j] == lcs[i + 1][j + 1] + 1 {
            guesses[j] = Some(i);
            i += 1;
            j += 1;
        } else if lcs[i + 1][j] >= lcs[i][j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    Ok(guesses)
}
