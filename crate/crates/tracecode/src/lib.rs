//! Coded trace reconstruction over the binary deletion channel.
//!
//! The deletion channel drops each transmitted bit independently with
//! probability `q` and hands the receiver the concatenated survivors, with
//! no markers for what was lost. Trace reconstruction asks how many
//! independent channel outputs ("traces") are needed to recover the input.
//! For arbitrary strings that number is believed to grow with the length;
//! this crate implements code constructions for which a constant number of
//! traces suffices at any block length, together with the channel models,
//! decoders, and measurement harness needed to check their behavior
//! empirically.
//!
//! Module map, bottom up:
//!
//! - [`bits`], [`channel`]: bit/symbol strings, deletion and erasure
//!   channels, and the coupling between them.
//! - [`likelihood`]: exact subsequence-embedding counts and maximum-
//!   likelihood decoding over small codebooks.
//! - [`syncstr`]: synchronization strings and position recovery.
//! - [`gf`], [`rs`]: finite-field arithmetic and Reed-Solomon codes used as
//!   outer codes.
//! - [`justesen`]: the concatenated binary code used at large rates.
//! - [`runcode`]: the run-length inner code for high deletion rates.
//! - [`innercode`]: protected inner codebooks searched by sampling.
//! - [`bigalpha`]: trace reconstruction over large alphabets.
//! - [`binarycode`]: the full binary construction (buffers, sync blocks,
//!   protected inner words, outer code).
//! - [`experiment`]: seeded sweeps with confidence intervals and CSV
//!   output.
//! - [`textio`]: the text message/trace formats shared by the CLI and the
//!   C ABI.

pub mod bigalpha;
pub mod binarycode;
pub mod bits;
pub mod channel;
pub mod error;
pub mod experiment;
pub mod gf;
pub mod innercode;
pub mod justesen;
pub mod likelihood;
pub mod rs;
pub mod runcode;
pub mod stats;
pub mod syncstr;
pub mod textio;

pub use error::{Error, Result};
