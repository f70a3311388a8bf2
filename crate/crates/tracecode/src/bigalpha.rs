//! Large-alphabet coded trace reconstruction: an outer erasure code zipped
//! symbol-wise with a synchronization string.
//!
//! Codewords are pairs (c_i, s_i) with c_i an outer Reed-Solomon symbol and
//! s_i the i-th synchronization symbol, packed into one alphabet index as
//! c_i * |sigma_sync| + s_i. Decoding keeps only traces that retained at
//! least (1 - q') * n symbols with q' = (1+q)/2, recovers each kept
//! symbol's source position from the sync components via deletion-only
//! indexing, fills every source cell from its first witness, and erasure
//! decodes the rest.

use serde::{Deserialize, Serialize};

use crate::bits::SymbolString;
use crate::error::{Error, Result};
use crate::rs::RSCode;
use crate::syncstr::{index_deletion_only, SyncString};

/// The zipped codec. The outer code and sync string must share one length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BigAlphaCodec {
    outer: RSCode,
    sync: SyncString,
    q: f64,
}

impl BigAlphaCodec {
    pub fn new(outer: RSCode, sync: SyncString, q: f64) -> Result<Self> {
        if sync.symbols.len() != outer.n() {
            return Err(Error::InvalidParameter(format!(
                "sync length {} != outer block length {}",
                sync.symbols.len(),
                outer.n()
            )));
        }
        if !(0.0..1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!(
                "deletion probability must lie in [0, 1), got {q}"
            )));
        }
        Ok(BigAlphaCodec { outer, sync, q })
    }

    pub fn outer(&self) -> &RSCode {
        &self.outer
    }

    pub fn sync(&self) -> &SyncString {
        &self.sync
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Block length n shared by the outer code and the sync string.
    pub fn n(&self) -> usize {
        self.outer.n()
    }

    /// Content alphabet size 2^b.
    pub fn content_alphabet(&self) -> u32 {
        self.outer.field().size() as u32
    }

    /// Combined pair alphabet size |sigma_content| * |sigma_sync|.
    pub fn pair_alphabet(&self) -> u32 {
        self.content_alphabet() * self.sync.alphabet_size
    }

    /// Minimum retained length for a trace to count as useful,
    /// (1 - q') * n with q' = (1+q)/2.
    pub fn useful_threshold(&self) -> f64 {
        (1.0 - (1.0 + self.q) / 2.0) * self.n() as f64
    }

    fn pack(&self, content: u16, sync: u32) -> u32 {
        content as u32 * self.sync.alphabet_size + sync
    }

    fn unpack(&self, pair: u32) -> (u16, u32) {
        (
            (pair / self.sync.alphabet_size) as u16,
            pair % self.sync.alphabet_size,
        )
    }
}

/// Trace count helper ceil(log_{1/q}(160 / eps^3)) for a target erasure
/// fraction eps; at least 1.
pub fn recommended_traces(q: f64, eps: f64) -> Result<usize> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "trace formula needs q in (0,1), got {q}"
        )));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "trace formula needs eps in (0,1], got {eps}"
        )));
    }
    let t = ((160.0 / eps.powi(3)).ln() / (1.0 / q).ln()).ceil() as usize;
    Ok(t.max(1))
}

/// Zips the outer codeword of `msg` with the sync string.
pub fn ba_encode(codec: &BigAlphaCodec, msg: &[u16]) -> Result<SymbolString> {
    let content = codec.outer.encode(msg)?;
    let symbols = content
        .iter()
        .zip(&codec.sync.symbols)
        .map(|(&c, &s)| codec.pack(c, s))
        .collect();
    Ok(SymbolString {
        symbols,
        alphabet_size: codec.pair_alphabet(),
    })
}

/// The pre-erasure-decoding cell fill: drops non-useful traces, indexes
/// each useful trace's sync components, and fills every source cell with
/// the content component of its first witness, scanning traces in input
/// order. Cells no witness reaches stay ERASED (`None`).
///
/// Errors when no trace is useful.
pub fn ba_decode_cells(
    codec: &BigAlphaCodec,
    traces: &[SymbolString],
) -> Result<Vec<Option<u16>>> {
    let n = codec.n();
    let threshold = codec.useful_threshold();
    let mut cells: Vec<Option<u16>> = vec![None; n];
    let mut useful = 0usize;
    for trace in traces {
        if trace.alphabet_size != codec.pair_alphabet() {
            return Err(Error::InvalidParameter(format!(
                "trace alphabet {} != codec pair alphabet {}",
                trace.alphabet_size,
                codec.pair_alphabet()
            )));
        }
        if (trace.symbols.len() as f64) < threshold {
            continue;
        }
        useful += 1;
        let parts: Vec<(u16, u32)> = trace.symbols.iter().map(|&p| codec.unpack(p)).collect();
        let sync_part: Vec<u32> = parts.iter().map(|&(_, s)| s).collect();
        let assignment = index_deletion_only(&codec.sync, &sync_part);
        for (j, &idx) in assignment.iter().enumerate() {
            if let Some(i) = idx {
                if cells[i].is_none() {
                    cells[i] = Some(parts[j].0);
                }
            }
        }
    }
    if useful == 0 {
        return Err(Error::DecodeFailure(
            "no useful trace: every trace fell below the length threshold".into(),
        ));
    }
    Ok(cells)
}

/// Full decoding: cell fill followed by outer erasure correction.
pub fn ba_decode(codec: &BigAlphaCodec, traces: &[SymbolString]) -> Result<Vec<u16>> {
    let cells = ba_decode_cells(codec, traces)?;
    codec.outer.decode(&cells)
}
