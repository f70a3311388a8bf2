//! The binary trace-reconstruction codec: interleaved content and
//! synchronization blocks with a three-phase decoder.
//!
//! A codeword is a_1 || b_1 || ... || a_n || b_n where a_i is an m-protected
//! inner codeword carrying one outer Reed-Solomon symbol and b_i is a
//! run-length codeword carrying one synchronization symbol. Decoding
//! (1) cuts each trace at long runs into decoded content and sync blocks,
//! (2) decodes the sync blocks and aligns content blocks to source indices
//! by insdel indexing against the synchronization string, (3) reconstructs
//! each index's inner symbol from its aligned windows across traces and
//! finishes with outer errors-and-erasures decoding.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{BitString, DeletionPattern};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::innercode::{build_inner_code, inner_reconstruct, ProtectedCodebook};
use crate::rs::RSCode;
use crate::runcode::{rl_decode, rl_encode, RunCodeParams};
use crate::syncstr::{gen_sync, index_insdel, SyncString};

/// Codec parameters. Desk-scale values are set directly; the [`asymptotic`]
/// helpers derive the formula versions for reference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinaryCodecParams {
    /// Channel deletion probability the codec is tuned for.
    pub q: f64,
    /// Outer block length (number of interleaved index positions).
    pub n_out: usize,
    /// Outer code dimension.
    pub k_out: usize,
    /// Inner codebook bits: the content alphabet is GF(2^k_inner).
    pub k_inner: u32,
    /// Content block length in bits.
    pub n_r: usize,
    /// Buffer length of the inner code.
    pub m: u32,
    /// Run-length code half run-count (sync alphabet is 2^big_k).
    pub big_k: u32,
    /// Sync block length in bits; must equal 3 * big_k * (unit length).
    pub n_s: usize,
    /// Trace count the decoder expects.
    pub t: usize,
    /// Synchronization string parameter.
    pub eta: f64,
}

impl BinaryCodecParams {
    /// Buffer threshold m' = (1-q)m/2: received runs strictly longer are
    /// read as buffers.
    pub fn m_prime(&self) -> f64 {
        0.5 * (1.0 - self.q) * self.m as f64
    }

    /// Run-length unit length n_S / (3K).
    pub fn m_s(&self) -> u32 {
        (self.n_s / (3 * self.big_k as usize)) as u32
    }

    /// Parse-misfire diagnostic gamma = 2^{-(1-q)m/80}; near 1 at desk
    /// scale, where it is reported rather than relied on.
    pub fn gamma(&self) -> f64 {
        2f64.powf(-(1.0 - self.q) * self.m as f64 / 80.0)
    }

    /// Indexing parameter 13 * gamma, clamped into [0, 1]. The insdel
    /// indexer validates but does not act on it.
    pub fn delta(&self) -> f64 {
        (13.0 * self.gamma()).min(1.0)
    }

    /// Interleaved block length n_R + n_S.
    pub fn block_len(&self) -> usize {
        self.n_r + self.n_s
    }

    /// Total codeword length n_out * (n_R + n_S).
    pub fn codeword_len(&self) -> usize {
        self.n_out * self.block_len()
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.q) {
            return Err(Error::InvalidParameter(format!(
                "deletion probability must lie in [0, 1), got {}",
                self.q
            )));
        }
        if self.m < 1 || self.m_prime() <= 0.0 {
            return Err(Error::InvalidParameter("buffer threshold m' must be positive".into()));
        }
        if self.n_r <= 2 * self.m as usize {
            return Err(Error::InvalidParameter(format!(
                "content length {} leaves no interior beyond the buffers 2m = {}",
                self.n_r,
                2 * self.m
            )));
        }
        if self.big_k < 1 || self.n_s % (3 * self.big_k as usize) != 0 || self.m_s() < 1 {
            return Err(Error::InvalidParameter(format!(
                "sync length {} is not 3K times a positive unit at K={}",
                self.n_s, self.big_k
            )));
        }
        if self.k_inner < 1 || self.k_inner > 16 {
            return Err(Error::InvalidParameter("content symbol width must lie in 1..=16".into()));
        }
        if self.n_out == 0 || self.k_out > self.n_out {
            return Err(Error::InvalidParameter(format!(
                "outer code ({}, {}) is not a code",
                self.n_out, self.k_out
            )));
        }
        if self.t < 1 {
            return Err(Error::InvalidParameter("trace count must be at least 1".into()));
        }
        if !(0.0 < self.eta && self.eta < 1.0) {
            return Err(Error::InvalidParameter(format!("eta {} not in (0,1)", self.eta)));
        }
        Ok(())
    }

    /// Desk-scale defaults mirroring the reference operating point.
    pub fn desk_default() -> Self {
        BinaryCodecParams {
            q: 0.3,
            n_out: 31,
            k_out: 19,
            k_inner: 5,
            n_r: 48,
            m: 8,
            big_k: 4,
            n_s: 24,
            t: 16,
            eta: 2.0 / 3.0,
        }
    }
}

/// The asymptotic parameter formulas, for reference and diagnostics. They
/// produce unusably large values at desk scale by design.
pub mod asymptotic {
    /// beta = 10^4 / (1-q)^3.
    pub fn beta(q: f64) -> f64 {
        1e4 / (1.0 - q).powi(3)
    }

    /// n_R = floor(10^4 * beta * (1/eps) * log2(1/eps)).
    pub fn n_r(q: f64, eps: f64) -> f64 {
        (1e4 * beta(q) * (1.0 / eps) * (1.0 / eps).log2()).floor()
    }

    /// m = floor(beta * log2(n_R)).
    pub fn m(q: f64, n_r: f64) -> f64 {
        (beta(q) * n_r.log2()).floor()
    }

    /// n_S = 60m, with K = 20 sync bits, so the run unit is exactly m.
    pub fn n_s(m: f64) -> f64 {
        60.0 * m
    }

    /// delta_S = 6K * 2^{-(1-q)m/40} at K = 20.
    pub fn delta_s(q: f64, m: f64) -> f64 {
        120.0 * 2f64.powf(-(1.0 - q) * m / 40.0)
    }

    /// gamma = 2^{-(1-q)m/80}.
    pub fn gamma(q: f64, m: f64) -> f64 {
        2f64.powf(-(1.0 - q) * m / 80.0)
    }

    /// delta_out = eps^3 / 50000.
    pub fn delta_out(eps: f64) -> f64 {
        eps.powi(3) / 50_000.0
    }

    /// delta_R = n_R^{-3 beta}.
    pub fn delta_r(q: f64, n_r: f64) -> f64 {
        n_r.powf(-3.0 * beta(q))
    }
}

/// A fully built codec bundle: all four components plus parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinaryCodec {
    pub params: BinaryCodecParams,
    inner: ProtectedCodebook,
    run: RunCodeParams,
    outer: RSCode,
    sync: SyncString,
}

impl BinaryCodec {
    /// Builds all components from parameters: inner protected codebook,
    /// run-length sync carrier, outer Reed-Solomon code, and a verified
    /// synchronization string.
    pub fn build<R: Rng + ?Sized>(params: BinaryCodecParams, rng: &mut R) -> Result<Self> {
        Self::build_with(params, 0, 20_000, rng)
    }

    /// As [`BinaryCodec::build`], with inner-codebook pruning trials and a
    /// sync-string attempt budget.
    pub fn build_with<R: Rng + ?Sized>(
        params: BinaryCodecParams,
        prune_trials: usize,
        sync_attempts: usize,
        rng: &mut R,
    ) -> Result<Self> {
        params.validate()?;
        let inner = build_inner_code(
            params.n_r,
            params.k_inner,
            params.m,
            params.q,
            params.t,
            prune_trials,
            rng,
        )?;
        let run = RunCodeParams::new(params.big_k, params.m_s(), params.q)?;
        let outer = RSCode::new(Field::new(params.k_inner)?, params.n_out, params.k_out)?;
        let sync = gen_sync(
            params.n_out,
            params.eta,
            1u32 << params.big_k,
            rng,
            sync_attempts,
        )?;
        Ok(BinaryCodec {
            params,
            inner,
            run,
            outer,
            sync,
        })
    }

    pub fn inner(&self) -> &ProtectedCodebook {
        &self.inner
    }

    pub fn run(&self) -> &RunCodeParams {
        &self.run
    }

    pub fn outer(&self) -> &RSCode {
        &self.outer
    }

    pub fn sync(&self) -> &SyncString {
        &self.sync
    }

    pub fn message_len(&self) -> usize {
        self.params.k_out
    }

    pub fn codeword_len(&self) -> usize {
        self.params.codeword_len()
    }
}

/// Encodes a message of k_out content symbols: outer-encode, then emit
/// a_i || b_i per outer position.
pub fn bc_encode(codec: &BinaryCodec, msg: &[u16]) -> Result<BitString> {
    let symbols = codec.outer.encode(msg)?;
    let mut bits = Vec::with_capacity(codec.codeword_len());
    for (i, &r) in symbols.iter().enumerate() {
        bits.extend_from_slice(codec.inner.codebook().word(r as usize));
        bits.extend_from_slice(&rl_encode(&codec.run, codec.sync.symbols[i] as u64)?);
    }
    debug_assert_eq!(bits.len(), codec.codeword_len());
    Ok(BitString(bits))
}

/// A trace cut into decoded content blocks and their trailing sync blocks.
/// Spans index into the parsed trace; blocks are disjoint and in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParsedTrace {
    pub content_blocks: Vec<BitString>,
    pub sync_blocks: Vec<BitString>,
    pub content_spans: Vec<(usize, usize)>,
    pub sync_spans: Vec<(usize, usize)>,
}

/// Maximal runs of `z` as (bit, start, end) triples.
fn runs_of(z: &[u8]) -> Vec<(u8, usize, usize)> {
    let mut runs: Vec<(u8, usize, usize)> = Vec::new();
    for (i, &b) in z.iter().enumerate() {
        match runs.last_mut() {
            Some((bit, _, end)) if *bit == b => *end = i + 1,
            _ => runs.push((b, i, i + 1)),
        }
    }
    runs
}

/// Cuts a trace at decoded buffers (maximal runs strictly longer than m').
///
/// A decoded content block is a 0-buffer, at least one buffer-free run,
/// then a 1-buffer; its sync block stretches from the block's end to the
/// next block's start (or the end of the trace). Leading bits before the
/// first block belong to no block.
pub fn parse_trace(z: &BitString, m_prime: f64) -> ParsedTrace {
    let runs = runs_of(z);
    let is_buffer = |i: usize| (runs[i].2 - runs[i].1) as f64 > m_prime;
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < runs.len() {
        if !(is_buffer(i) && runs[i].0 == 0) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < runs.len() && !is_buffer(j) {
            j += 1;
        }
        if j == runs.len() {
            break;
        }
        if runs[j].0 == 1 {
            // Interior must hold at least one content run.
            if j > i + 1 {
                spans.push((runs[i].1, runs[j].2));
            }
            i = j + 1;
        } else {
            // Two 0-buffers in a row: restart from the later one.
            i = j;
        }
    }
    let mut parsed = ParsedTrace::default();
    for (k, &(s, e)) in spans.iter().enumerate() {
        let sync_end = spans.get(k + 1).map_or(z.len(), |&(ns, _)| ns);
        parsed.content_blocks.push(BitString(z[s..e].to_vec()));
        parsed.content_spans.push((s, e));
        parsed.sync_blocks.push(BitString(z[e..sync_end].to_vec()));
        parsed.sync_spans.push((e, sync_end));
    }
    parsed
}

/// Per-trace, per-source-index content block guesses (MISSING = `None`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlignmentGuess {
    /// guesses[t][i]: guessed image of content block i in trace t.
    pub guesses: Vec<Vec<Option<BitString>>>,
    /// Trace spans of the guesses, for instrumentation.
    pub spans: Vec<Vec<Option<(usize, usize)>>>,
}

/// Aligns parsed traces to source indices: decode each sync block, index
/// the decoded symbol sequence against the synchronization string, and
/// assign each content block to its indexed source position. Duplicate
/// assignments keep the first.
pub fn align_traces(
    run: &RunCodeParams,
    sync: &SyncString,
    parsed: &[ParsedTrace],
    delta: f64,
) -> Result<AlignmentGuess> {
    let n = sync.symbols.len();
    let mut out = AlignmentGuess {
        guesses: vec![vec![None; n]; parsed.len()],
        spans: vec![vec![None; n]; parsed.len()],
    };
    for (t, p) in parsed.iter().enumerate() {
        let received: Vec<u32> = p
            .sync_blocks
            .iter()
            .map(|y| rl_decode(run, y) as u32)
            .collect();
        let assignment = index_insdel(sync, &received, delta)?;
        for (j, &a) in assignment.iter().enumerate() {
            if let Some(i) = a {
                if out.guesses[t][i].is_none() {
                    out.guesses[t][i] = Some(p.content_blocks[j].clone());
                    out.spans[t][i] = Some(p.content_spans[j]);
                }
            }
        }
    }
    Ok(out)
}

/// Full decoding: parse, align, reconstruct each inner symbol across
/// traces (DON'T-KNOW becomes an outer erasure), then outer decode.
pub fn bc_decode(codec: &BinaryCodec, traces: &[BitString]) -> Result<Vec<u16>> {
    let m_prime = codec.params.m_prime();
    let parsed: Vec<ParsedTrace> = traces.iter().map(|z| parse_trace(z, m_prime)).collect();
    let guess = align_traces(&codec.run, &codec.sync, &parsed, codec.params.delta())?;
    let mut cells: Vec<Option<u16>> = Vec::with_capacity(codec.params.n_out);
    for i in 0..codec.params.n_out {
        let column: Vec<Option<BitString>> = (0..traces.len())
            .map(|t| guess.guesses[t][i].clone())
            .collect();
        cells.push(inner_reconstruct(&codec.inner, &column, codec.params.q)?.map(|s| s as u16));
    }
    codec.outer.decode(&cells)
}

/// Ground-truth parse diagnostics from instrumented deletion patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntactReport {
    /// intact[t][i] for source indices i in 0..n_out.
    pub intact: Vec<Vec<bool>>,
    /// Spurious buffer count per trace: decoded buffers lying strictly
    /// inside the image of some content block's interior.
    pub spurious: Vec<usize>,
}

impl IntactReport {
    /// Index i is correctly parsed in trace t when i-1, i, i+1 are all
    /// intact (out-of-range neighbors count as intact).
    pub fn correctly_parsed(&self, t: usize, i: usize) -> bool {
        let row = &self.intact[t];
        (i == 0 || row[i - 1]) && row[i] && (i + 1 >= row.len() || row[i + 1])
    }
}

/// Evaluates the intact conditions for every (trace, index) pair against
/// the true deletion patterns.
///
/// Index i is intact in trace t when, under that trace's pattern,
/// 1. more than m' of a_i's m leading 0s survive,
/// 2. more than m' of a_i's m trailing 1s survive,
/// 3. no decoded buffer lies inside the image of a_i's interior,
/// 4. every run of b_i keeps more than m' bits,
/// 5. the image of b_i decodes to the correct sync symbol, and
/// 6. the image of a_i's interior has some 1 before some 0 (so the decoded
///    content between the buffers is nonempty).
///
/// Strict > m' matches the buffer definition (a run is a buffer only when
/// strictly longer than m'), and condition 6 closes the gap where an
/// interior image of the form 0...01...1 would be absorbed entirely into
/// the two buffers; both are needed for the report to certify parses
/// exactly rather than with high probability.
pub fn diagnose_intact(
    codec: &BinaryCodec,
    codeword: &BitString,
    patterns: &[DeletionPattern],
) -> Result<IntactReport> {
    let p = &codec.params;
    let n_c = codec.codeword_len();
    if codeword.len() != n_c {
        return Err(Error::InvalidParameter(format!(
            "codeword length {} != {}",
            codeword.len(),
            n_c
        )));
    }
    let m_prime = p.m_prime();
    let m = p.m as usize;
    let block = p.block_len();
    let mut report = IntactReport {
        intact: Vec::with_capacity(patterns.len()),
        spurious: Vec::with_capacity(patterns.len()),
    };
    for pattern in patterns {
        let kept = &pattern.kept;
        if kept.iter().any(|&j| j >= n_c) {
            return Err(Error::InvalidParameter("pattern index out of range".into()));
        }
        // trace_pos[j] = position of codeword bit j in the trace.
        let mut trace_pos = vec![usize::MAX; n_c];
        for (pos, &j) in kept.iter().enumerate() {
            trace_pos[j] = pos;
        }
        let surviving = |range: std::ops::Range<usize>| -> usize {
            range.filter(|&j| trace_pos[j] != usize::MAX).count()
        };
        let z = pattern.apply_bits(codeword);
        let buffers: Vec<(usize, usize)> = runs_of(&z)
            .into_iter()
            .filter(|&(_, s, e)| (e - s) as f64 > m_prime)
            .map(|(_, s, e)| (s, e))
            .collect();
        // Image span of a codeword range in trace coordinates, if any bit
        // survives.
        let image_span = |range: std::ops::Range<usize>| -> Option<(usize, usize)> {
            let first = range.clone().find(|&j| trace_pos[j] != usize::MAX)?;
            let last = range.rev().find(|&j| trace_pos[j] != usize::MAX)?;
            Some((trace_pos[first], trace_pos[last] + 1))
        };
        let mut row = Vec::with_capacity(p.n_out);
        let mut spurious_total = 0usize;
        for i in 0..p.n_out {
            let a = i * block;
            let interior = a + m..a + p.n_r - m;
            let c1 = surviving(a..a + m) as f64 > m_prime;
            let c2 = surviving(a + p.n_r - m..a + p.n_r) as f64 > m_prime;
            let (c3, c6) = match image_span(interior.clone()) {
                Some((s, e)) => {
                    let spurious = buffers.iter().filter(|&&(bs, be)| bs >= s && be <= e).count();
                    spurious_total += spurious;
                    let first_one = interior
                        .clone()
                        .find(|&j| trace_pos[j] != usize::MAX && codeword[j] == 1);
                    let last_zero = interior
                        .clone()
                        .rev()
                        .find(|&j| trace_pos[j] != usize::MAX && codeword[j] == 0);
                    let nonempty = match (first_one, last_zero) {
                        (Some(o), Some(z0)) => o < z0,
                        _ => false,
                    };
                    (spurious == 0, nonempty)
                }
                None => (true, false),
            };
            let b_start = a + p.n_r;
            let b_end = (i + 1) * block;
            let c4 = runs_of(&codeword[b_start..b_end])
                .iter()
                .all(|&(_, s, e)| surviving(b_start + s..b_start + e) as f64 > m_prime);
            let b_image: Vec<u8> = (b_start..b_end)
                .filter(|&j| trace_pos[j] != usize::MAX)
                .map(|j| codeword[j])
                .collect();
            let c5 = rl_decode(&codec.run, &b_image) == codec.sync.symbols[i] as u64;
            row.push(c1 && c2 && c3 && c4 && c5 && c6);
        }
        report.intact.push(row);
        report.spurious.push(spurious_total);
    }
    Ok(report)
}
