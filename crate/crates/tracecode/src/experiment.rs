//! Seeded Monte Carlo experiment harness: builds a codec per grid point,
//! runs independent encode -> channel -> decode trials with split rng
//! streams, and tallies failure rates with Wilson intervals.
//!
//! Determinism contract: (config, seed) fully determines every tallied
//! number. Trials may run on a thread pool (size from `TRACECODE_THREADS`),
//! but each trial owns an rng seeded by `split_seed(seed, grid, trial)`, so
//! scheduling cannot change any outcome, and rows are emitted in grid
//! order. Wall-clock timing is the one nondeterministic column and is
//! zeroed unless explicitly requested.

use std::io::Write;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigalpha::{ba_decode, ba_encode, BigAlphaCodec};
use crate::binarycode::{bc_decode, bc_encode, BinaryCodec, BinaryCodecParams};
use crate::bits::BitString;
use crate::channel::{apply_bdc, apply_bdc_symbols};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::innercode::{build_inner_code, inner_reconstruct, ProtectedCodebook};
use crate::likelihood::{ml_decode, Codebook};
use crate::rs::RSCode;
use crate::runcode::{rl_decode, rl_encode, RunCodeParams};
use crate::stats::wilson_interval;
use crate::syncstr::gen_sync;

/// Which scheme a sweep exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodecKind {
    /// Large-alphabet codec: content/sync symbol pairs over one big field.
    Bigalpha,
    /// Binary interleaved codec.
    Binary,
    /// Protected inner codebook alone, multi-trace ML reconstruction.
    Inner,
    /// Run-length sync code alone, per-trace decode with plurality vote.
    Runcode,
    /// Average-case ML reconstruction over the full codebook {0,1}^n.
    Avgcase,
}

impl CodecKind {
    pub fn name(&self) -> &'static str {
        match self {
            CodecKind::Bigalpha => "bigalpha",
            CodecKind::Binary => "binary",
            CodecKind::Inner => "inner",
            CodecKind::Runcode => "runcode",
            CodecKind::Avgcase => "avgcase",
        }
    }
}

/// Optional parameter overrides; unset fields take kind-specific defaults
/// (documented on [`build_codec`]).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamOverrides {
    /// bigalpha: outer length n; avgcase: string length; unused elsewhere.
    pub n: Option<usize>,
    /// bigalpha: content symbol width in bits.
    pub b: Option<u32>,
    /// Outer code dimension (bigalpha, binary).
    pub k_out: Option<usize>,
    /// Inner symbol width (binary, inner).
    pub k_inner: Option<u32>,
    /// Inner codeword length (binary, inner).
    pub n_r: Option<usize>,
    /// Buffer length (binary, inner) or run unit length (runcode).
    pub m: Option<u32>,
    /// binary: outer length. Defaults to 31.
    pub n_out: Option<usize>,
    /// Run-length half run-count K (binary, runcode).
    pub big_k: Option<u32>,
    /// binary: sync block length.
    pub n_s: Option<usize>,
    /// Sync string parameter (bigalpha, binary).
    pub eta: Option<f64>,
    /// Inner codebook pruning trials (binary, inner). Defaults to 0.
    pub prune_trials: Option<usize>,
}

/// One sweep: codec kind, q grid, T grid, trial count, seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub codec: CodecKind,
    /// Channel deletion probabilities; codecs are rebuilt per grid point.
    pub q: Vec<f64>,
    /// Trace counts.
    pub t: Vec<usize>,
    pub trials: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: ParamOverrides,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.q.is_empty() || self.t.is_empty() {
            return Err(Error::InvalidParameter("q and t grids must be nonempty".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        for &q in &self.q {
            if !(0.0..1.0).contains(&q) {
                return Err(Error::InvalidParameter(format!("grid q {q} not in [0,1)")));
            }
        }
        if self.t.contains(&0) {
            return Err(Error::InvalidParameter("trace counts must be positive".into()));
        }
        Ok(())
    }

    /// Parses a config from TOML or JSON text (tried in that order).
    pub fn parse(text: &str) -> Result<Self> {
        match toml::from_str::<ExperimentConfig>(text) {
            Ok(cfg) => Ok(cfg),
            Err(toml_err) => serde_json::from_str(text).map_err(|json_err| {
                Error::Format(format!(
                    "config is neither TOML ({toml_err}) nor JSON ({json_err})"
                ))
            }),
        }
    }
}

/// One grid point's tally. `seconds` is wall time for the whole point.
#[derive(Clone, Debug, Serialize)]
pub struct ResultRow {
    pub codec: &'static str,
    pub q: f64,
    pub t: usize,
    /// Codeword length at this grid point (bits, or symbols for bigalpha).
    pub n: usize,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seconds: f64,
}

/// splitmix64 finalizer: a fixed, platform-independent mixer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Per-trial stream seed. Trial index `u64::MAX` is reserved for the grid
/// point's codec build.
pub fn split_seed(seed: u64, grid: u64, trial: u64) -> u64 {
    mix(mix(mix(seed.wrapping_add(0x9e37_79b9_7f4a_7c15)).wrapping_add(grid)).wrapping_add(trial))
}

/// A codec instance bound to one grid point. The serialized form is a
/// JSON object tagged with `"kind"`, the CLI's codec bundle format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BuiltCodec {
    Bigalpha(BigAlphaCodec),
    Binary(Box<BinaryCodec>),
    Inner(ProtectedCodebook),
    Runcode(RunCodeParams),
    Avgcase(Codebook),
}

impl BuiltCodec {
    /// Codeword length reported in the `n` column.
    pub fn n(&self) -> usize {
        match self {
            BuiltCodec::Bigalpha(c) => c.n(),
            BuiltCodec::Binary(c) => c.codeword_len(),
            BuiltCodec::Inner(c) => c.codebook().word_len(),
            BuiltCodec::Runcode(c) => c.codeword_len(),
            BuiltCodec::Avgcase(c) => c.word_len(),
        }
    }
}

/// Builds the codec for one grid point. Defaults:
/// bigalpha n=256, b=12, k_out = 3n/4, eta=0.5, sync alphabet n;
/// binary the desk defaults (n_out=31, k_out=19, k_inner=5, n_r=48, m=8,
/// K=4, n_s=24, eta=2/3); inner n_r=48, k_inner=5, m=8; runcode K=4, m=40;
/// avgcase n=4.
pub fn build_codec<R: Rng + ?Sized>(
    kind: CodecKind,
    p: &ParamOverrides,
    q: f64,
    t: usize,
    rng: &mut R,
) -> Result<BuiltCodec> {
    match kind {
        CodecKind::Bigalpha => {
            let n = p.n.unwrap_or(256);
            let b = p.b.unwrap_or(12);
            let k_out = p.k_out.unwrap_or(n - n.div_ceil(4));
            let eta = p.eta.unwrap_or(0.5);
            let outer = RSCode::new(Field::new(b)?, n, k_out)?;
            let sync = gen_sync(n, eta, u32::try_from(n).unwrap_or(u32::MAX), rng, 50)?;
            Ok(BuiltCodec::Bigalpha(BigAlphaCodec::new(outer, sync, q)?))
        }
        CodecKind::Binary => {
            let d = BinaryCodecParams::desk_default();
            let params = BinaryCodecParams {
                q,
                n_out: p.n_out.unwrap_or(d.n_out),
                k_out: p.k_out.unwrap_or(d.k_out),
                k_inner: p.k_inner.unwrap_or(d.k_inner),
                n_r: p.n_r.unwrap_or(d.n_r),
                m: p.m.unwrap_or(d.m),
                big_k: p.big_k.unwrap_or(d.big_k),
                n_s: p.n_s.unwrap_or(d.n_s),
                t,
                eta: p.eta.unwrap_or(d.eta),
            };
            let codec =
                BinaryCodec::build_with(params, p.prune_trials.unwrap_or(0), 20_000, rng)?;
            Ok(BuiltCodec::Binary(Box::new(codec)))
        }
        CodecKind::Inner => Ok(BuiltCodec::Inner(build_inner_code(
            p.n_r.unwrap_or(48),
            p.k_inner.unwrap_or(5),
            p.m.unwrap_or(8),
            q,
            t,
            p.prune_trials.unwrap_or(0),
            rng,
        )?)),
        CodecKind::Runcode => Ok(BuiltCodec::Runcode(RunCodeParams::new(
            p.big_k.unwrap_or(4),
            p.m.unwrap_or(40),
            q,
        )?)),
        CodecKind::Avgcase => Ok(BuiltCodec::Avgcase(Codebook::full(p.n.unwrap_or(4))?)),
    }
}

/// Builds the codec for a config's first grid point, seeding the
/// construction stream from the config seed (trial slot `u64::MAX` is
/// reserved for builds and never collides with a trial stream).
pub fn build_from_config(cfg: &ExperimentConfig) -> Result<BuiltCodec> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(cfg.seed.unwrap_or(0), 0, u64::MAX));
    build_codec(cfg.codec, &cfg.params, cfg.q[0], cfg.t[0], &mut rng)
}

/// Runs one encode -> channel -> decode round; returns true on failure.
/// Decode FAILURE answers count as failures; other errors propagate.
pub fn run_trial<R: Rng + ?Sized>(
    codec: &BuiltCodec,
    q: f64,
    t: usize,
    rng: &mut R,
) -> Result<bool> {
    match codec {
        BuiltCodec::Bigalpha(c) => {
            let size = c.content_alphabet();
            let msg: Vec<u16> =
                (0..c.outer().k()).map(|_| rng.gen_range(0..size) as u16).collect();
            let cw = ba_encode(c, &msg)?;
            let traces = (0..t)
                .map(|_| apply_bdc_symbols(&cw, q, rng).map(|tr| tr.payload))
                .collect::<Result<Vec<_>>>()?;
            match ba_decode(c, &traces) {
                Ok(got) => Ok(got != msg),
                Err(Error::DecodeFailure(_)) => Ok(true),
                Err(e) => Err(e),
            }
        }
        BuiltCodec::Binary(c) => {
            let size = 1u16 << c.params.k_inner;
            let msg: Vec<u16> =
                (0..c.message_len()).map(|_| rng.gen_range(0..size)).collect();
            let cw = bc_encode(c, &msg)?;
            let traces = (0..t)
                .map(|_| apply_bdc(&cw, q, rng).map(|tr| tr.payload))
                .collect::<Result<Vec<BitString>>>()?;
            match bc_decode(c, &traces) {
                Ok(got) => Ok(got != msg),
                Err(Error::DecodeFailure(_)) => Ok(true),
                Err(e) => Err(e),
            }
        }
        BuiltCodec::Inner(c) => {
            let idx = rng.gen_range(0..c.len());
            let traces = (0..t)
                .map(|_| apply_bdc(c.codebook().word(idx), q, rng).map(|tr| Some(tr.payload)))
                .collect::<Result<Vec<_>>>()?;
            Ok(inner_reconstruct(c, &traces, q)? != Some(idx))
        }
        BuiltCodec::Runcode(c) => {
            let sigma = rng.gen_range(0..c.symbol_count());
            let cw = rl_encode(c, sigma)?;
            // Decode each trace independently; plurality vote, ties toward
            // the smaller symbol.
            let mut votes: std::collections::BTreeMap<u64, usize> = Default::default();
            for _ in 0..t {
                let z = apply_bdc(&cw, q, rng)?.payload;
                *votes.entry(rl_decode(c, &z)).or_insert(0) += 1;
            }
            let winner = votes
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                .map(|(&s, _)| s)
                .unwrap();
            Ok(winner != sigma)
        }
        BuiltCodec::Avgcase(cb) => {
            let idx = rng.gen_range(0..cb.len());
            let traces = (0..t)
                .map(|_| apply_bdc(cb.word(idx), q, rng).map(|tr| Some(tr.payload)))
                .collect::<Result<Vec<_>>>()?;
            Ok(ml_decode(cb, &traces, q)? != idx)
        }
    }
}

fn run_grid(cfg: &ExperimentConfig, seed: u64) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::with_capacity(cfg.q.len() * cfg.t.len());
    for (iq, &q) in cfg.q.iter().enumerate() {
        for (it, &t) in cfg.t.iter().enumerate() {
            let grid = (iq * cfg.t.len() + it) as u64;
            let mut build_rng = ChaCha8Rng::seed_from_u64(split_seed(seed, grid, u64::MAX));
            let codec = build_codec(cfg.codec, &cfg.params, q, t, &mut build_rng)
                .map_err(|e| {
                    Error::ConstructionFailed(format!("grid point q={q}, T={t}: {e}"))
                })?;
            let start = Instant::now();
            let failures = (0..cfg.trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, grid, trial));
                    run_trial(&codec, q, t, &mut rng).map(u64::from)
                })
                .try_reduce(|| 0u64, |a, b| Ok(a + b))?;
            let rate = failures as f64 / cfg.trials as f64;
            let ci = wilson_interval(failures, cfg.trials, 1.96);
            rows.push(ResultRow {
                codec: cfg.codec.name(),
                q,
                t,
                n: codec.n(),
                trials: cfg.trials,
                failures,
                rate,
                ci_lo: ci.lo,
                ci_hi: ci.hi,
                seconds: start.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(rows)
}

/// Runs the full sweep. Rows come back in grid order (q outer, T inner).
/// `TRACECODE_THREADS` bounds the worker pool; any value keeps results
/// identical, only faster or slower.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let seed = cfg.seed.unwrap_or(0);
    match std::env::var("TRACECODE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        Some(threads) if threads > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::ConstructionFailed(format!("thread pool: {e}")))?
            .install(|| run_grid(cfg, seed)),
        _ => run_grid(cfg, seed),
    }
}

/// Writes rows as CSV with the stable header
/// `codec,q,T,n,trials,failures,rate,ci_lo,ci_hi,seconds`.
///
/// With `include_timing` false (the default surface) the seconds column is
/// written as 0.000 so that equal (config, seed) runs are byte-identical.
pub fn write_csv<W: Write>(rows: &[ResultRow], include_timing: bool, out: &mut W) -> Result<()> {
    writeln!(out, "codec,q,T,n,trials,failures,rate,ci_lo,ci_hi,seconds")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.3}",
            r.codec,
            r.q,
            r.t,
            r.n,
            r.trials,
            r.failures,
            r.rate,
            r.ci_lo,
            r.ci_hi,
            if include_timing { r.seconds } else { 0.0 }
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_cfg(kind: CodecKind) -> ExperimentConfig {
        ExperimentConfig {
            codec: kind,
            q: vec![0.0],
            t: vec![1],
            trials: 1,
            seed: Some(7),
            params: ParamOverrides::default(),
        }
    }

    #[test]
    fn zero_deletion_single_trial_never_fails() {
        // Every codec kind decodes a zero-deletion trial exactly.
        for kind in [
            CodecKind::Bigalpha,
            CodecKind::Binary,
            CodecKind::Inner,
            CodecKind::Runcode,
            CodecKind::Avgcase,
        ] {
            let cfg = base_cfg(kind);
            let rows = run_experiment(&cfg).unwrap();
            assert_eq!(rows.len(), 1);
            assert_eq!(rows[0].failures, 0, "{} failed at q=0", kind.name());
            assert_eq!(rows[0].rate, 0.0);
        }
    }

    #[test]
    fn csv_deterministic_for_same_seed() {
        let mut cfg = base_cfg(CodecKind::Runcode);
        // Short runs at q=0.5 put per-run misreads in the tens of percent,
        // so different seeds almost surely tally different failure counts.
        cfg.params.m = Some(6);
        cfg.q = vec![0.2, 0.5];
        cfg.t = vec![1, 3];
        cfg.trials = 50;
        let mut a = Vec::new();
        write_csv(&run_experiment(&cfg).unwrap(), false, &mut a).unwrap();
        let mut b = Vec::new();
        write_csv(&run_experiment(&cfg).unwrap(), false, &mut b).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with(b"codec,q,T,n,trials,failures,rate,ci_lo,ci_hi,seconds\n"));
        // A different seed changes some tally (2x50 noisy trials at q=0.4).
        cfg.seed = Some(8);
        let mut c = Vec::new();
        write_csv(&run_experiment(&cfg).unwrap(), false, &mut c).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        // Deterministic per-trial rng streams: a serial run equals the
        // parallel default.
        let mut cfg = base_cfg(CodecKind::Avgcase);
        cfg.q = vec![0.3];
        cfg.t = vec![2];
        cfg.trials = 200;
        let rows = run_experiment(&cfg).unwrap();
        let serial: u64 = (0..cfg.trials)
            .map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(split_seed(7, 0, trial));
                let codec = {
                    let mut b =
                        ChaCha8Rng::seed_from_u64(split_seed(7, 0, u64::MAX));
                    build_codec(CodecKind::Avgcase, &cfg.params, 0.3, 2, &mut b).unwrap()
                };
                u64::from(run_trial(&codec, 0.3, 2, &mut rng).unwrap())
            })
            .sum();
        assert_eq!(rows[0].failures, serial);
    }

    #[test]
    fn config_parses_from_toml_and_json() {
        let toml_text = r#"
            codec = "bigalpha"
            q = [0.5]
            t = [1, 2]
            trials = 10
            seed = 3
            [params]
            n = 64
            b = 8
        "#;
        let cfg = ExperimentConfig::parse(toml_text).unwrap();
        assert_eq!(cfg.codec, CodecKind::Bigalpha);
        assert_eq!(cfg.params.n, Some(64));
        let json_text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::parse(&json_text).unwrap(), cfg);
        assert!(ExperimentConfig::parse("codec = nonsense").is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = base_cfg(CodecKind::Runcode);
        cfg.q.clear();
        assert!(run_experiment(&cfg).is_err());
        let mut cfg = base_cfg(CodecKind::Runcode);
        cfg.trials = 0;
        assert!(run_experiment(&cfg).is_err());
        let mut cfg = base_cfg(CodecKind::Runcode);
        cfg.q = vec![1.0];
        assert!(run_experiment(&cfg).is_err());
        let mut cfg = base_cfg(CodecKind::Runcode);
        cfg.t = vec![0];
        assert!(run_experiment(&cfg).is_err());
    }

    #[test]
    fn build_failure_carries_grid_context() {
        let mut cfg = base_cfg(CodecKind::Bigalpha);
        cfg.params.n = Some(64);
        cfg.params.b = Some(4); // RS length 64 > 2^4 - 1: build must fail
        let err = run_experiment(&cfg).unwrap_err().to_string();
        assert!(err.contains("q=0"), "missing grid context: {err}");
    }

    #[test]
    fn runcode_failure_rate_increases_with_q() {
        let mut cfg = base_cfg(CodecKind::Runcode);
        cfg.q = vec![0.1, 0.5];
        cfg.trials = 300;
        let rows = run_experiment(&cfg).unwrap();
        assert!(rows[0].failures <= rows[1].failures);
        assert_eq!(rows[0].failures, 0, "q=0.1 is inside the clean regime");
    }

    #[test]
    fn avgcase_failure_nonincreasing_in_t() {
        let mut cfg = base_cfg(CodecKind::Avgcase);
        cfg.q = vec![0.3];
        cfg.t = vec![1, 2, 4, 8, 16];
        cfg.trials = 400;
        let rows = run_experiment(&cfg).unwrap();
        for w in rows.windows(2) {
            assert!(
                w[1].rate <= w[0].rate + 0.06,
                "T={} rate {} vs T={} rate {}",
                w[1].t,
                w[1].rate,
                w[0].t,
                w[0].rate
            );
        }
    }
}
