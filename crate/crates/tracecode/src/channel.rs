//! Deletion and erasure channel models.
//!
//! The binary deletion channel `BDC_q` deletes every input symbol
//! independently with probability `q` and concatenates the survivors; the
//! receiver learns neither the positions nor the number of deleted symbols.
//! The erasure channel `EC_q` instead replaces symbols with an erasure
//! marker, preserving positions.
//!
//! [`couple_erasure_to_traces`] links the two: given the output of
//! `EC_{q^T}`, it produces `T` traces whose joint distribution matches `T`
//! independent draws of `BDC_q` applied to the original string. Cells erased
//! by the erasure channel are deleted in every trace; surviving cells receive
//! a keep-pattern conditioned on appearing in at least one trace.
//!
//! # Example
//!
//! ```
//! use rand::SeedableRng;
//! use tracecode::bits::BitString;
//! use tracecode::channel::apply_bdc;
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let x = BitString::parse("1100101").unwrap();
//! let t = apply_bdc(&x, 0.5, &mut rng).unwrap();
//! assert!(t.payload.len() <= x.len());
//! ```

use crate::bits::{BitString, DeletionPattern, SymbolString};
use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// One channel output, optionally carrying the deletion pattern that
/// produced it (instrumented mode, for ground-truth tests).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace<S> {
    pub payload: S,
    pub pattern: Option<DeletionPattern>,
}

pub type BitTrace = Trace<BitString>;
pub type SymbolTrace = Trace<SymbolString>;

/// Erasure-channel output: positions are preserved, erased cells are `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErasedString {
    pub cells: Vec<Option<u32>>,
    pub alphabet_size: u32,
}

fn check_q(q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) || q.is_nan() {
        return Err(Error::InvalidParameter(format!("deletion probability {q} not in [0,1]")));
    }
    Ok(())
}

/// Samples an iid keep-set: each position survives with probability `1-q`.
pub fn sample_deletion_pattern<R: Rng + ?Sized>(len: usize, q: f64, rng: &mut R) -> Result<DeletionPattern> {
    check_q(q)?;
    let kept = (0..len).filter(|_| rng.gen::<f64>() >= q).collect();
    Ok(DeletionPattern { kept })
}

/// Passes a bit string through `BDC_q`.
pub fn apply_bdc<R: Rng + ?Sized>(x: &BitString, q: f64, rng: &mut R) -> Result<BitTrace> {
    let p = sample_deletion_pattern(x.len(), q, rng)?;
    Ok(Trace { payload: p.apply_bits(x), pattern: None })
}

/// Like [`apply_bdc`] but records the deletion pattern in the trace.
pub fn apply_bdc_instrumented<R: Rng + ?Sized>(x: &BitString, q: f64, rng: &mut R) -> Result<BitTrace> {
    let p = sample_deletion_pattern(x.len(), q, rng)?;
    Ok(Trace { payload: p.apply_bits(x), pattern: Some(p) })
}

/// Passes a symbol string through `BDC_q`.
pub fn apply_bdc_symbols<R: Rng + ?Sized>(x: &SymbolString, q: f64, rng: &mut R) -> Result<SymbolTrace> {
    let p = sample_deletion_pattern(x.len(), q, rng)?;
    Ok(Trace { payload: p.apply_symbols(x), pattern: Some(p) })
}

/// Passes a symbol string through the erasure channel `EC_q`.
pub fn apply_erasure<R: Rng + ?Sized>(x: &SymbolString, q: f64, rng: &mut R) -> Result<ErasedString> {
    check_q(q)?;
    Ok(ErasedString {
        cells: x
            .symbols
            .iter()
            .map(|&s| if rng.gen::<f64>() < q { None } else { Some(s) })
            .collect(),
        alphabet_size: x.alphabet_size,
    })
}

/// Converts an erasure-channel output into a deletion-channel output by
/// dropping erased cells. The recorded pattern lists the surviving positions.
pub fn erasures_to_deletions(y: &ErasedString) -> SymbolTrace {
    let mut kept = Vec::new();
    let mut symbols = Vec::new();
    for (i, cell) in y.cells.iter().enumerate() {
        if let Some(s) = cell {
            kept.push(i);
            symbols.push(*s);
        }
    }
    Trace {
        payload: SymbolString { symbols, alphabet_size: y.alphabet_size },
        pattern: Some(DeletionPattern { kept }),
    }
}

const COUPLING_REJECTION_CAP: usize = 10_000;

/// Samples a keep-pattern over `t` traces conditioned on at least one keep.
///
/// Rejection sampling first (capped), then an exact fallback: draw the index
/// of the first kept trace from its conditional distribution
/// `P(first = j) = q^j (1-q) / (1 - q^t)`, after which later traces are
/// unconditioned Bernoulli.
fn sample_present_pattern<R: Rng + ?Sized>(t: usize, q: f64, rng: &mut R) -> Vec<bool> {
    for _ in 0..COUPLING_REJECTION_CAP {
        let pat: Vec<bool> = (0..t).map(|_| rng.gen::<f64>() >= q).collect();
        if pat.iter().any(|&k| k) {
            return pat;
        }
    }
    let norm = 1.0 - q.powi(t as i32);
    let u: f64 = rng.gen::<f64>() * norm;
    let mut acc = 0.0;
    let mut first = t - 1;
    for j in 0..t {
        acc += q.powi(j as i32) * (1.0 - q);
        if u < acc {
            first = j;
            break;
        }
    }
    let mut pat = vec![false; t];
    pat[first] = true;
    for k in pat.iter_mut().skip(first + 1) {
        *k = rng.gen::<f64>() >= q;
    }
    pat
}

/// Expands one erasure-channel output into `t` coupled deletion traces.
///
/// If `y` came from `EC_{q^t}(x)`, the returned traces are jointly
/// distributed as `t` independent applications of `BDC_q` to `x`. Traces are
/// instrumented with their deletion patterns (positions refer to `x`).
pub fn couple_erasure_to_traces<R: Rng + ?Sized>(
    y: &ErasedString,
    q: f64,
    t: usize,
    rng: &mut R,
) -> Result<Vec<SymbolTrace>> {
    check_q(q)?;
    if t == 0 {
        return Err(Error::InvalidParameter("need at least one trace".into()));
    }
    if q == 0.0 && y.cells.iter().any(|c| c.is_none()) {
        return Err(Error::InvalidParameter("erased cells are impossible at q = 0".into()));
    }
    let mut kept: Vec<Vec<usize>> = vec![Vec::new(); t];
    let mut symbols: Vec<Vec<u32>> = vec![Vec::new(); t];
    for (i, cell) in y.cells.iter().enumerate() {
        match cell {
            None => {} // erased: deleted in every trace
            Some(s) => {
                let pat = sample_present_pattern(t, q, rng);
                for (j, &keep) in pat.iter().enumerate() {
                    if keep {
                        kept[j].push(i);
                        symbols[j].push(*s);
                    }
                }
            }
        }
    }
    Ok(kept
        .into_iter()
        .zip(symbols)
        .map(|(k, s)| Trace {
            payload: SymbolString { symbols: s, alphabet_size: y.alphabet_size },
            pattern: Some(DeletionPattern { kept: k }),
        })
        .collect())
}
