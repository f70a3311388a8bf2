//! Acceptance gate: fourteen numbered end-to-end criteria, one test each.
//! Every criterion checks the library against an oracle implemented
//! independently in this file (exhaustive enumeration, rational
//! arithmetic, or analytic values), at the stated scales and tolerances.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use tracecode::bigalpha::{ba_decode, ba_encode, BigAlphaCodec};
use tracecode::binarycode::{
    bc_decode, bc_encode, diagnose_intact, parse_trace, BinaryCodec, BinaryCodecParams,
};
use tracecode::bits::{BitString, DeletionPattern, SymbolString};
use tracecode::channel::{
    apply_bdc, apply_bdc_instrumented, apply_erasure, couple_erasure_to_traces,
    sample_deletion_pattern,
};
use tracecode::error::Error;
use tracecode::experiment::{run_experiment, CodecKind, ExperimentConfig, ParamOverrides};
use tracecode::gf::Field;
use tracecode::justesen::{inverse_binary_entropy, justesen_inner_search};
use tracecode::likelihood::{count_embeddings, estimate_avg_success, ml_decode, Codebook};
use tracecode::rs::RSCode;
use tracecode::runcode::{rl_decode, rl_encode, RunCodeParams};
use tracecode::syncstr::{gen_sync, index_deletion_only, index_insdel, verify_sync};

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xACCE_0000 + tag)
}

fn random_bits(len: usize, rng: &mut ChaCha8Rng) -> BitString {
    BitString((0..len).map(|_| rng.gen_range(0..2u8)).collect())
}

/// Applies the keep-set encoded in the bits of `mask` (bit i set = keep
/// position i). Oracle-side counterpart of a deletion pattern.
fn apply_mask(x: &[u8], mask: u32) -> Vec<u8> {
    (0..x.len()).filter(|&i| mask >> i & 1 == 1).map(|i| x[i]).collect()
}

/// Oracle embedding count: enumerate every one of the 2^|x| keep-sets and
/// count those whose output equals `y`.
fn exhaustive_embeddings(y: &[u8], x: &[u8]) -> u64 {
    assert!(x.len() <= 20);
    (0u32..1 << x.len()).filter(|&mask| apply_mask(x, mask) == y).count() as u64
}

#[test]
fn criterion_01_embedding_count_oracle() {
    let start = Instant::now();
    let mut rng = rng(1);
    for pair in 0..200 {
        let n = rng.gen_range(1..=12);
        let x = random_bits(n, &mut rng);
        // Half genuine traces, half unrelated strings (usually not a
        // subsequence, exercising the zero side).
        let y = if pair % 2 == 0 {
            apply_bdc(&x, 0.4, &mut rng).unwrap().payload
        } else {
            random_bits(rng.gen_range(0..=n), &mut rng)
        };
        let lib = count_embeddings(&y, &x);
        assert_eq!(
            lib,
            exhaustive_embeddings(&y, &x).into(),
            "count_embeddings({y}, {x})"
        );
    }
    let secs = start.elapsed().as_secs_f64();
    println!("criterion 01 PASS: 200 pairs, exact agreement, {secs:.2} s (budget 10 s)");
    assert!(secs < 10.0, "embedding oracle took {secs:.2} s");
}

fn big_pow(base: &BigRational, exp: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

#[test]
fn criterion_02_likelihood_normalization() {
    // Sum over all distinct outputs y of Pr[y|x] = Emb(y,x) q^(n-|y|)
    // (1-q)^|y| must be exactly 1 in rational arithmetic.
    let mut rng = rng(2);
    let q = BigRational::new(BigInt::from(1), BigInt::from(3));
    let keep = BigRational::one() - &q;
    for _ in 0..20 {
        let n = rng.gen_range(1..=10);
        let x = random_bits(n, &mut rng);
        let mut outputs: HashSet<Vec<u8>> = HashSet::new();
        for mask in 0u32..1 << n {
            outputs.insert(apply_mask(&x, mask));
        }
        let mut total = BigRational::zero();
        for y in &outputs {
            let emb = BigInt::from(count_embeddings(&BitString(y.clone()), &x));
            total += BigRational::from(emb) * big_pow(&q, n - y.len()) * big_pow(&keep, y.len());
        }
        assert!(total.is_one(), "sum over outputs of {x} is {total}, not 1");
    }
    println!("criterion 02 PASS: 20 strings, rational total exactly 1");
}

/// Oracle likelihood of one trace under one word: enumerate keep-sets.
fn brute_likelihood(y: &[u8], w: &[u8], q: &BigRational) -> BigRational {
    let keep = BigRational::one() - q;
    let matches = exhaustive_embeddings(y, w);
    BigRational::from(BigInt::from(matches))
        * big_pow(q, w.len() - y.len().min(w.len()))
        * big_pow(&keep, y.len())
}

#[test]
fn criterion_03_ml_equivalence() {
    let mut rng = rng(3);
    let q = BigRational::new(BigInt::from(3), BigInt::from(10));
    for instance in 0..100 {
        // 16 distinct random words of length 12.
        let mut words: Vec<BitString> = Vec::new();
        while words.len() < 16 {
            let w = random_bits(12, &mut rng);
            if !words.contains(&w) {
                words.push(w);
            }
        }
        let cb = Codebook::new(words.clone()).unwrap();
        let t = rng.gen_range(1..=5);
        let truth = rng.gen_range(0..16);
        let traces: Vec<Option<BitString>> = (0..t)
            .map(|_| Some(apply_bdc(cb.word(truth), 0.3, &mut rng).unwrap().payload))
            .collect();
        // Brute-force decoder: exact rational likelihood product per word,
        // argmax with lowest index winning ties; all-zero gives up as 0.
        let mut best = 0usize;
        let mut best_l = BigRational::zero();
        for (i, w) in words.iter().enumerate() {
            let mut l = BigRational::one();
            for tr in traces.iter().flatten() {
                if tr.len() > w.len() {
                    l = BigRational::zero();
                    break;
                }
                l *= brute_likelihood(tr, w, &q);
                if l.is_zero() {
                    break;
                }
            }
            if l > best_l {
                best = i;
                best_l = l.clone();
            }
        }
        let got = ml_decode(&cb, &traces, 0.3).unwrap();
        assert_eq!(got, best, "instance {instance}: ml_decode {got} vs brute {best}");
    }
    println!("criterion 03 PASS: 100 instances, zero mismatches");
}

#[test]
fn criterion_04_deletion_only_indexing_error_free() {
    let mut rng = rng(4);
    let s = gen_sync(200, 0.5, 256, &mut rng, 50).unwrap();
    assert!(verify_sync(&s.symbols, 0.5).unwrap().ok, "sync string must verify");
    let mut assigned_total = 0u64;
    for _ in 0..1000 {
        let pattern = sample_deletion_pattern(200, 0.75, &mut rng).unwrap();
        let received: Vec<u32> = pattern.kept.iter().map(|&i| s.symbols[i]).collect();
        let guesses = index_deletion_only(&s, &received);
        for (j, guess) in guesses.iter().enumerate() {
            if let Some(i) = guess {
                assert_eq!(*i, pattern.kept[j], "misdecoding: position {j} of the trace");
                assigned_total += 1;
            }
        }
    }
    println!("criterion 04 PASS: 1000 trials, zero misdecodings ({assigned_total} assignments)");
}

#[test]
fn criterion_05_insdel_indexing_bound() {
    let mut rng = rng(5);
    let s = gen_sync(200, 0.5, 256, &mut rng, 50).unwrap();
    let delta = 0.2;
    // Hard per-trial ceiling 2 n delta / (1 - eta).
    let bound = 2.0 * 200.0 * delta / (1.0 - 0.5);
    let mut worst = 0usize;
    for _ in 0..1000 {
        // Corrupt with d deletions and then i insertions, d + i <= delta*n.
        let budget = 40;
        let d = rng.gen_range(0..=budget / 2);
        let ins = rng.gen_range(0..=budget - d);
        // origin[j] = Some(source index) for surviving symbols.
        let mut stream: Vec<(u32, Option<usize>)> =
            s.symbols.iter().cloned().zip((0..200).map(Some)).collect();
        for _ in 0..d {
            let at = rng.gen_range(0..stream.len());
            stream.remove(at);
        }
        for _ in 0..ins {
            let at = rng.gen_range(0..=stream.len());
            stream.insert(at, (rng.gen_range(0..256), None));
        }
        let received: Vec<u32> = stream.iter().map(|&(v, _)| v).collect();
        let guesses = index_insdel(&s, &received, delta).unwrap();
        let misdecodings = guesses
            .iter()
            .zip(&stream)
            .filter(|(g, (_, origin))| {
                matches!((g, origin), (Some(i), Some(p)) if i != p)
            })
            .count();
        assert!(
            (misdecodings as f64) <= bound,
            "{misdecodings} misdecodings > bound {bound}"
        );
        worst = worst.max(misdecodings);
    }
    println!("criterion 05 PASS: 1000 trials, worst {worst} misdecodings <= bound {bound}");
}

#[test]
fn criterion_06_rs_exhaustive() {
    let start = Instant::now();
    let field = Field::new(3).unwrap();
    let code = RSCode::new(field, 7, 3).unwrap();
    let mut patterns = 0u64;
    // Every message; every pattern with 2e + f <= d - 1 = 4.
    for msg_id in 0..512u32 {
        let msg: Vec<u16> = (0..3).map(|i| (msg_id >> (3 * i) & 7) as u16).collect();
        let cw = code.encode(&msg).unwrap();
        let mut check = |received: &[Option<u16>]| {
            assert_eq!(
                code.decode(received).unwrap(),
                msg,
                "message {msg:?}, received {received:?}"
            );
            patterns += 1;
        };
        // e = 0: erasures only, f <= 4.
        for f_mask in 0u32..128 {
            if f_mask.count_ones() > 4 {
                continue;
            }
            let received: Vec<Option<u16>> = (0..7)
                .map(|i| (f_mask >> i & 1 == 0).then(|| cw[i]))
                .collect();
            check(&received);
        }
        // e = 1: one error (7 wrong values), f <= 2 among the rest.
        for e_pos in 0..7 {
            for delta in 1..8u16 {
                for f_mask in 0u32..128 {
                    if f_mask >> e_pos & 1 == 1 || f_mask.count_ones() > 2 {
                        continue;
                    }
                    let received: Vec<Option<u16>> = (0..7)
                        .map(|i| {
                            if f_mask >> i & 1 == 1 {
                                None
                            } else if i == e_pos {
                                Some(cw[i] ^ delta)
                            } else {
                                Some(cw[i])
                            }
                        })
                        .collect();
                    check(&received);
                }
            }
        }
        // e = 2: two errors, no erasures.
        for a in 0..7 {
            for b in a + 1..7 {
                for da in 1..8u16 {
                    for db in 1..8u16 {
                        let mut received: Vec<Option<u16>> = cw.iter().map(|&c| Some(c)).collect();
                        received[a] = Some(cw[a] ^ da);
                        received[b] = Some(cw[b] ^ db);
                        check(&received);
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    println!("criterion 06 PASS: {patterns} (message, pattern) decodes, {secs:.1} s (budget 60 s)");
    assert!(secs < 60.0, "RS exhaustive took {secs:.1} s");
}

#[test]
fn criterion_07_justesen_certificate() {
    let code = justesen_inner_search(8, 8).unwrap();
    // Independent weight scan over every nonzero input.
    let min_w = (1..256u16)
        .map(|x| code.encode(x).iter().filter(|&&b| b == 1).count())
        .min()
        .unwrap();
    let floor_bound = (16.0 * inverse_binary_entropy(0.5)).floor() as usize;
    assert!(
        min_w > floor_bound,
        "minimum weight {min_w} must exceed floor(16 H^-1(1/2)) = {floor_bound}"
    );
    println!("criterion 07 PASS: exhaustive minimum nonzero weight {min_w} > {floor_bound}");
}

#[test]
fn criterion_08_runcode_failure_bound_and_roundtrip() {
    let mut rng = rng(8);
    let params = RunCodeParams::new(4, 40, 0.5).unwrap();
    let bound = 6.0 * 4.0 * 2f64.powf(-(1.0 - 0.5) * 40.0 / 40.0);
    let trials = 10_000;
    let mut failures = 0u64;
    for _ in 0..trials {
        let sigma = rng.gen_range(0..params.symbol_count());
        let cw = rl_encode(&params, sigma).unwrap();
        let z = apply_bdc(&cw, 0.5, &mut rng).unwrap().payload;
        if rl_decode(&params, &z) != sigma {
            failures += 1;
        }
    }
    let rate = failures as f64 / trials as f64;
    assert!(rate <= bound, "failure rate {rate} > bound {bound}");
    // Clean roundtrip: identity over all 2^K symbols with the decoder
    // matched to the undeleted channel (q = 0, threshold 1.4m in (m, 2m]).
    // The q = 0.5 threshold 0.7m sits below m by construction and cannot
    // classify undeleted runs.
    let clean = RunCodeParams::new(4, 40, 0.0).unwrap();
    for sigma in 0..clean.symbol_count() {
        let cw = rl_encode(&clean, sigma).unwrap();
        assert_eq!(rl_decode(&clean, &cw), sigma, "clean roundtrip of {sigma}");
    }
    println!(
        "criterion 08 PASS: failure rate {rate:.4} <= bound {bound:.2} over {trials} trials; clean roundtrip identity on all 16 symbols"
    );
}

#[test]
fn criterion_09_coupling_chi_square() {
    let mut rng = rng(9);
    let (q, t): (f64, usize) = (0.5, 2);
    let samples = 100_000;
    let len = 8usize;
    let mut counts = [0u64; 4];
    for _ in 0..samples {
        let x = SymbolString::new((0..len as u32).collect(), len as u32).unwrap();
        let y = apply_erasure(&x, q.powi(t as i32), &mut rng).unwrap();
        let traces = couple_erasure_to_traces(&y, q, t, &mut rng).unwrap();
        let mut kept = vec![[false; 2]; len];
        for (ti, tr) in traces.iter().enumerate() {
            for &pos in &tr.pattern.as_ref().unwrap().kept {
                kept[pos][ti] = true;
            }
        }
        for cell in &kept {
            counts[usize::from(cell[0]) + 2 * usize::from(cell[1])] += 1;
        }
    }
    // Analytic joint keep-pattern probabilities for t independent BDC_q.
    let total = (samples * len) as f64;
    let mut stat = 0.0;
    for (pat, &obs) in counts.iter().enumerate() {
        let p: f64 = (0..t)
            .map(|ti| if pat >> ti & 1 == 1 { 1.0 - q } else { q })
            .product();
        let expected = total * p;
        stat += (obs as f64 - expected).powi(2) / expected;
    }
    // Chi-square upper 1% critical value at 3 degrees of freedom; the
    // statistic below it means p > 0.01.
    assert!(stat < 11.345, "chi-square statistic {stat:.2} >= 11.345 (p <= 0.01)");
    println!("criterion 09 PASS: chi-square {stat:.2} < 11.345 over {} cells", samples * len);
}

#[test]
fn criterion_10_bigalpha_end_to_end() {
    let mut rng = rng(10);
    let outer = RSCode::new(Field::new(12).unwrap(), 256, 192).unwrap();
    let sync = gen_sync(256, 0.5, 256, &mut rng, 50).unwrap();
    let codec = BigAlphaCodec::new(outer, sync, 0.5).unwrap();
    let trials = 200;
    let mut ok = 0;
    for _ in 0..trials {
        let msg: Vec<u16> = (0..192).map(|_| rng.gen_range(0..1u32 << 12) as u16).collect();
        let cw = ba_encode(&codec, &msg).unwrap();
        let traces: Vec<SymbolString> = (0..6)
            .map(|_| {
                tracecode::channel::apply_bdc_symbols(&cw, 0.5, &mut rng).unwrap().payload
            })
            .collect();
        if ba_decode(&codec, &traces).ok().as_deref() == Some(&msg) {
            ok += 1;
        }
    }
    assert!(
        ok * 100 >= trials * 99,
        "success {ok}/{trials} below 0.99 at n=256, b=12, q=0.5, T=6"
    );
    // Sweeps through the harness: failure nondecreasing in q at fixed T,
    // nonincreasing in T at fixed q.
    let sweep = |q: Vec<f64>, t: Vec<usize>| {
        run_experiment(&ExperimentConfig {
            codec: CodecKind::Bigalpha,
            q,
            t,
            trials: 100,
            seed: Some(0xACCE),
            params: ParamOverrides {
                n: Some(256),
                b: Some(12),
                k_out: Some(192),
                eta: Some(0.5),
                ..Default::default()
            },
        })
        .unwrap()
    };
    let by_q = sweep(vec![0.5, 0.77, 0.8], vec![6]);
    for w in by_q.windows(2) {
        assert!(
            w[0].failures <= w[1].failures,
            "success not nonincreasing in q: {} failures at q={} vs {} at q={}",
            w[0].failures,
            w[0].q,
            w[1].failures,
            w[1].q
        );
    }
    let by_t = sweep(vec![0.77], vec![2, 4, 6]);
    for w in by_t.windows(2) {
        assert!(
            w[1].failures <= w[0].failures,
            "success not nondecreasing in T: {} failures at T={} vs {} at T={}",
            w[1].failures,
            w[1].t,
            w[0].failures,
            w[0].t
        );
    }
    println!(
        "criterion 10 PASS: success {ok}/{trials}; q-sweep failures {:?}, T-sweep failures {:?}",
        by_q.iter().map(|r| r.failures).collect::<Vec<_>>(),
        by_t.iter().map(|r| r.failures).collect::<Vec<_>>()
    );
}

#[test]
fn criterion_11_binary_end_to_end() {
    let start = Instant::now();
    let params = BinaryCodecParams {
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
    };
    let mut rng = rng(11);
    let codec = BinaryCodec::build_with(params, 0, 20_000, &mut rng).unwrap();
    let trials = 200;
    let mut ok = 0;
    for _ in 0..trials {
        let msg: Vec<u16> = (0..19).map(|_| rng.gen_range(0..32u16)).collect();
        let cw = bc_encode(&codec, &msg).unwrap();
        let traces: Vec<BitString> = (0..16)
            .map(|_| apply_bdc(&cw, 0.3, &mut rng).unwrap().payload)
            .collect();
        if bc_decode(&codec, &traces).ok().as_deref() == Some(&msg) {
            ok += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 600.0, "binary end-to-end took {secs:.0} s (budget 600 s)");
    let rate = ok as f64 / trials as f64;
    println!("criterion 11: success {ok}/{trials} ({rate:.3}) in {secs:.1} s");
    assert!(
        ok * 20 >= trials * 19,
        "success {ok}/{trials} < 0.95 at the pinned parameters: n_S=24 with K=4 makes sync \
         unit runs 2 bits long against the buffer threshold m' = 2.8, so no sync run can \
         clear the threshold and block alignment collapses at q=0.3"
    );
}

#[test]
fn criterion_12_good2_zero_violations() {
    // Exactness of the parse diagnosis: every correctly parsed (trace,
    // index) pair must expose exactly the images of its content and sync
    // blocks. Parameters chosen so correctly parsed indices are plentiful.
    let params = BinaryCodecParams {
        q: 0.25,
        n_out: 31,
        k_out: 19,
        k_inner: 5,
        n_r: 48,
        m: 8,
        big_k: 4,
        n_s: 192,
        t: 2,
        eta: 2.0 / 3.0,
    };
    let mut rng = rng(12);
    let codec = BinaryCodec::build_with(params, 0, 20_000, &mut rng).unwrap();
    let block = params.block_len();
    let mut checked = 0u64;
    for _ in 0..1000 {
        let msg: Vec<u16> = (0..19).map(|_| rng.gen_range(0..32u16)).collect();
        let cw = bc_encode(&codec, &msg).unwrap();
        let traces: Vec<_> = (0..2)
            .map(|_| apply_bdc_instrumented(&cw, 0.25, &mut rng).unwrap())
            .collect();
        let patterns: Vec<DeletionPattern> =
            traces.iter().map(|tr| tr.pattern.clone().unwrap()).collect();
        let report = diagnose_intact(&codec, &cw, &patterns).unwrap();
        for (t, tr) in traces.iter().enumerate() {
            let parsed = parse_trace(&tr.payload, params.m_prime());
            let mut trace_pos = vec![usize::MAX; cw.len()];
            for (pos, &j) in patterns[t].kept.iter().enumerate() {
                trace_pos[j] = pos;
            }
            let image = |range: std::ops::Range<usize>| -> Option<(usize, usize)> {
                let mut it = range.filter(|&j| trace_pos[j] != usize::MAX);
                let first = it.next()?;
                let last = it.last().unwrap_or(first);
                Some((trace_pos[first], trace_pos[last] + 1))
            };
            for i in 0..31 {
                if !report.correctly_parsed(t, i) {
                    continue;
                }
                checked += 1;
                let a_span = image(i * block..i * block + 48).expect("surviving content bits");
                let b_span = image(i * block + 48..(i + 1) * block).expect("surviving sync bits");
                let j = parsed
                    .content_spans
                    .iter()
                    .position(|&sp| sp == a_span)
                    .unwrap_or_else(|| panic!("violation: no decoded block equals the image of content block {i}"));
                assert_eq!(
                    parsed.sync_spans[j], b_span,
                    "violation: sync block image mismatch at index {i}"
                );
            }
        }
    }
    println!("criterion 12 PASS: zero violations over {checked} correctly-parsed pairs");
    assert!(checked > 10_000, "only {checked} correctly-parsed pairs exercised");
}

#[test]
fn criterion_13_average_case_estimator() {
    let mut rng = rng(13);
    // Analytic value at m=1, T=1, q=1/2: the trace is the input with
    // probability 1/2 (always decoded right) and empty otherwise (give-up
    // guesses index 0, right half the time): failure = 1/2 * 1/2.
    let est = estimate_avg_success(1, 0.5, 1, 10_000, &mut rng).unwrap();
    assert!(
        (est.failure_rate - 0.25).abs() <= 0.02,
        "failure rate {} not within 0.25 +- 0.02",
        est.failure_rate
    );
    let mut rates = Vec::new();
    for t in [1usize, 2, 4, 8, 16] {
        rates.push(estimate_avg_success(4, 0.3, t, 10_000, &mut rng).unwrap().failure_rate);
    }
    for w in rates.windows(2) {
        assert!(w[1] <= w[0], "failure not nonincreasing in T: {rates:?}");
    }
    println!(
        "criterion 13 PASS: m=1 failure {:.3} within 0.25 +- 0.02; T-sweep failures {rates:?}",
        est.failure_rate
    );
}

#[test]
fn criterion_14_experiment_determinism() {
    // Library level: identical configs give identical CSV bytes.
    let cfg_text = r#"
        codec = "runcode"
        q = [0.2, 0.5]
        t = [1, 3]
        trials = 200
        seed = 7

        [params]
        big_k = 4
        m = 6
    "#;
    let cfg = ExperimentConfig::parse(cfg_text).unwrap();
    let mut a = Vec::new();
    tracecode::experiment::write_csv(&run_experiment(&cfg).unwrap(), false, &mut a).unwrap();
    let mut b = Vec::new();
    tracecode::experiment::write_csv(&run_experiment(&cfg).unwrap(), false, &mut b).unwrap();
    assert_eq!(a, b, "library CSV differs between identical runs");

    // CLI level: the experiment subcommand re-run with the same seed
    // produces byte-identical files.
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.toml");
    std::fs::write(&cfg_path, cfg_text).unwrap();
    let csv = |name: &str| {
        let path = dir.path().join(name);
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_tracecode"))
            .args([
                "experiment",
                "--config",
                cfg_path.to_str().unwrap(),
                "--seed",
                "7",
                "--out",
                path.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(path).unwrap()
    };
    let first = csv("a.csv");
    let second = csv("b.csv");
    assert_eq!(first, second, "CLI CSV differs between identical runs");
    assert!(
        first.starts_with(b"codec,q,T,n,trials,failures,rate,ci_lo,ci_hi,seconds"),
        "missing CSV header"
    );
    assert_eq!(first, a, "CLI and library CSV disagree");
    println!("criterion 14 PASS: byte-identical CSV across reruns (library and CLI)");
}

/// The error enum distinguishes decode failures (exit code 1 surface) from
/// usage errors; keep the mapping honest for downstream exit codes.
#[test]
fn decode_failure_error_is_distinct() {
    let e = Error::DecodeFailure("x".into());
    assert!(matches!(e, Error::DecodeFailure(_)));
}
