//! Text-level encode/decode/simulate over codec bundles, shared by the
//! CLI and the C ABI.
//!
//! Message and trace formats per codec kind:
//! - `bigalpha`: messages and traces are comma-separated symbol lists;
//!   traces carry pair-alphabet symbols.
//! - `binary`: messages are comma-separated outer symbols; codewords and
//!   traces are 01-strings.
//! - `inner`: the message is a codebook index; traces are 01-strings.
//! - `runcode`: the message is one integer below `2^K`; the trace is a
//!   01-string (single-trace code, extra lines are ignored).
//! - `avgcase`: the message is itself a codebook word as a 01-string.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bigalpha::{ba_decode, ba_encode};
use crate::binarycode::{bc_decode, bc_encode};
use crate::bits::{BitString, SymbolString};
use crate::channel::{apply_bdc, apply_bdc_symbols};
use crate::error::{Error, Result};
use crate::experiment::{split_seed, BuiltCodec};
use crate::innercode::inner_reconstruct;
use crate::likelihood::ml_decode;
use crate::runcode::{rl_decode, rl_encode};

/// The deletion probability a bundle was built for, where it stores one.
pub fn codec_q(codec: &BuiltCodec) -> Option<f64> {
    match codec {
        BuiltCodec::Bigalpha(c) => Some(c.q()),
        BuiltCodec::Binary(c) => Some(c.params.q),
        BuiltCodec::Runcode(c) => Some(c.q()),
        BuiltCodec::Inner(_) | BuiltCodec::Avgcase(_) => None,
    }
}

/// `flag` if present, else the codec's own deletion probability.
pub fn resolve_q(codec: &BuiltCodec, flag: Option<f64>) -> Result<f64> {
    flag.or_else(|| codec_q(codec)).ok_or_else(|| {
        Error::InvalidParameter("this codec stores no deletion probability; pass q".into())
    })
}

pub fn parse_symbol_list(s: &str) -> Result<Vec<u16>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u16>()
                .map_err(|e| Error::Format(format!("bad symbol {tok:?}: {e}")))
        })
        .collect()
}

pub fn parse_u32_list(s: &str) -> Result<Vec<u32>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|e| Error::Format(format!("bad symbol {tok:?}: {e}")))
        })
        .collect()
}

pub fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn parse_single_symbol(s: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|e| Error::Format(format!("bad symbol {s:?}: {e}")))
}

/// Encode a text message to a text codeword.
pub fn encode_message(codec: &BuiltCodec, message: &str) -> Result<String> {
    Ok(match codec {
        BuiltCodec::Bigalpha(c) => {
            let cw = ba_encode(c, &parse_symbol_list(message)?)?;
            join(&cw.symbols)
        }
        BuiltCodec::Binary(c) => bc_encode(c, &parse_symbol_list(message)?)?.to_string(),
        BuiltCodec::Inner(c) => {
            let idx = parse_single_symbol(message)? as usize;
            if idx >= c.len() {
                return Err(Error::InvalidParameter(format!(
                    "index {idx} outside codebook of {} words",
                    c.len()
                )));
            }
            c.codebook().word(idx).to_string()
        }
        BuiltCodec::Runcode(c) => rl_encode(c, parse_single_symbol(message)?)?.to_string(),
        BuiltCodec::Avgcase(cb) => {
            let x = BitString::parse(message)?;
            if x.len() != cb.word_len() {
                return Err(Error::InvalidParameter(format!(
                    "message length {} != {}",
                    x.len(),
                    cb.word_len()
                )));
            }
            x.to_string()
        }
    })
}

/// Decode one trace per line back to the text message.
pub fn decode_traces(codec: &BuiltCodec, lines: &[&str], q: f64) -> Result<String> {
    Ok(match codec {
        BuiltCodec::Bigalpha(c) => {
            let traces = lines
                .iter()
                .map(|l| SymbolString::new(parse_u32_list(l)?, c.pair_alphabet()))
                .collect::<Result<Vec<_>>>()?;
            join(&ba_decode(c, &traces)?)
        }
        BuiltCodec::Binary(c) => {
            let traces =
                lines.iter().map(|l| BitString::parse(l)).collect::<Result<Vec<_>>>()?;
            join(&bc_decode(c, &traces)?)
        }
        BuiltCodec::Inner(c) => {
            let traces = lines
                .iter()
                .map(|l| BitString::parse(l).map(Some))
                .collect::<Result<Vec<_>>>()?;
            match inner_reconstruct(c, &traces, q)? {
                Some(idx) => idx.to_string(),
                None => return Err(Error::DecodeFailure("every trace is missing".into())),
            }
        }
        BuiltCodec::Runcode(c) => {
            // Single-trace code: decode the first line.
            let line = lines
                .first()
                .ok_or_else(|| Error::InvalidParameter("need one trace".into()))?;
            rl_decode(c, &BitString::parse(line)?).to_string()
        }
        BuiltCodec::Avgcase(cb) => {
            let traces = lines
                .iter()
                .map(|l| BitString::parse(l).map(Some))
                .collect::<Result<Vec<_>>>()?;
            cb.word(ml_decode(cb, &traces, q)?).to_string()
        }
    })
}

/// Encode `message` and push it through the channel `t` times; one trace
/// per output line. Trace `i` uses the seed stream `split_seed(seed, 0, i)`.
pub fn simulate_traces(
    codec: &BuiltCodec,
    message: &str,
    t: usize,
    q: f64,
    seed: u64,
) -> Result<String> {
    let encoded = encode_message(codec, message)?;
    let mut out = String::new();
    for trial in 0..t {
        let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, 0, trial as u64));
        let line = match codec {
            BuiltCodec::Bigalpha(c) => {
                let cw = SymbolString::new(parse_u32_list(&encoded)?, c.pair_alphabet())?;
                join(&apply_bdc_symbols(&cw, q, &mut rng)?.payload.symbols)
            }
            _ => {
                let cw = BitString::parse(&encoded)?;
                apply_bdc(&cw, q, &mut rng)?.payload.to_string()
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}
