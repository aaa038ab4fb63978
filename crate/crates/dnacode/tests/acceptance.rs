//! Acceptance gate: six criteria, one pass/fail line each. Every check here
//! is either an exact worked example or an exhaustive/oracle sweep at desk
//! scale; nothing is mocked.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, UnwindSafe};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dnacode::dup::{self, DupKind, DupRule, PolyaConfig};
use dnacode::seqcore::Alphabet;
use dnacode::sliced::{self, DataIndexedParams};
use dnacode::{checks, multidel, vt};

fn criterion(number: usize, label: &str, body: impl FnOnce() + UnwindSafe) {
    match catch_unwind(body) {
        Ok(()) => println!("criterion {number} ({label}): pass"),
        Err(cause) => {
            println!("criterion {number} ({label}): FAIL");
            std::panic::resume_unwind(cause);
        }
    }
}

fn bits_of(w: u32, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((w >> (n - 1 - i)) & 1) as u8).collect()
}

/// Odometer over base-q words; returns false after wrapping to all zeros.
fn increment(w: &mut [u8], q: u8) -> bool {
    for d in w.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

#[test]
fn criterion_1_worked_examples() {
    criterion(1, "worked-example regression", || {
        let rows = checks::reference_table(&checks::CheckConfig::default());
        for r in &rows {
            assert!(r.pass, "{}: expected {:?}, got {:?}", r.name, r.expected, r.actual);
        }
        assert!(rows.len() >= 13, "table lost rows: {}", rows.len());
    });
}

#[test]
fn criterion_2_vt_exhaustive() {
    criterion(2, "VT exhaustive suite", || {
        for n in 1..=12usize {
            let mut seen_total = 0usize;
            for a in 0..=n {
                let params = vt::VtParams::new(n, a).unwrap();
                let book = vt::codebook(&params).unwrap();
                // Membership is exactly "syndrome == a".
                for c in &book {
                    assert_eq!(vt::syndrome(c, &params).unwrap(), a);
                }
                seen_total += book.len();
                if a == 0 {
                    let floor = (1u64 << n) as f64 / (n as f64 + 1.0);
                    assert!(book.len() as f64 >= floor, "|VT({n},0)| = {}", book.len());
                }
                for c in &book {
                    let mut received = BTreeSet::new();
                    for i in 0..n {
                        let mut y = c.clone();
                        y.remove(i);
                        received.insert(y);
                    }
                    for y in received {
                        assert_eq!(vt::decode(&y, &params).unwrap(), *c, "n={n} a={a}");
                        assert_eq!(vt::decode_brute(&y, &params).unwrap(), *c);
                    }
                }
            }
            // The n+1 codebooks tile the whole cube.
            assert_eq!(seen_total, 1 << n, "VT codebooks do not partition at n={n}");
        }
    });
}

#[test]
fn criterion_3_multidel_exhaustive() {
    criterion(3, "multi-deletion exhaustive suite", || {
        // Gap-1 words, every pair of deletions, unique decoding.
        for n in 2..=14usize {
            let mut w = vec![0u8; n];
            loop {
                if multidel::satisfies_gap(&w, 1) {
                    let sums = multidel::weighted_sums(&w, 2).unwrap();
                    let mut received = BTreeSet::new();
                    for i in 0..n {
                        for j in i + 1..n {
                            let mut y = w.clone();
                            y.remove(j);
                            y.remove(i);
                            received.insert(y);
                        }
                    }
                    for y in received {
                        assert_eq!(
                            multidel::decode_constrained(&y, n, &sums, 2).unwrap(),
                            w,
                            "n={n} w={w:?}"
                        );
                    }
                }
                if !increment(&mut w, 2) {
                    break;
                }
            }
        }

        // Indicator roundtrip over the full cube.
        for n in 1..=14usize {
            let mut w = vec![0u8; n];
            loop {
                let i10 = multidel::indicator10(&w);
                let i01 = multidel::indicator01(&w);
                assert_eq!(multidel::reconstruct_from_indicators(&i10, &i01).unwrap(), w);
                if !increment(&mut w, 2) {
                    break;
                }
            }
        }

        // Full t=2 pipeline: every 10-bit message, every distinct word
        // obtainable by at most two deletions.
        let n = 10usize;
        let full = multidel::codeword_len(n, 2).unwrap();
        for msg in 0u32..1 << n {
            let data = bits_of(msg, n);
            let cw = multidel::encode_t_del(&data, 2).unwrap();
            assert_eq!(cw.len(), full);
            let mut received: BTreeSet<Vec<u8>> = BTreeSet::from([cw.clone()]);
            for i in 0..full {
                let mut y1 = cw.clone();
                y1.remove(i);
                for j in 0..y1.len() {
                    let mut y2 = y1.clone();
                    y2.remove(j);
                    received.insert(y2);
                }
                received.insert(y1);
            }
            for y in received {
                assert_eq!(multidel::decode_t_del(&y, n, 2).unwrap(), data, "msg={msg:#x}");
            }
        }

        // Redundancy bound with explicit slack: 4t log n with t=2 gives
        // 8 log2(1024) = 80, plus 64 slack bits.
        let measured = multidel::checksum_bits(1 << 10, 2).unwrap();
        assert!(measured <= 8 * 10 + 64, "checksum bits {measured}");
    });
}

#[test]
fn criterion_4_sliced_suite() {
    criterion(4, "sliced-channel suite", || {
        // Exact redundancy values.
        let full = sliced::set_redundancy(sliced::log2_binomial(1 << 6, 4), 4, 6).unwrap();
        assert!(full.abs() < 1e-9, "full code redundancy {full}");
        let indexed = sliced::index_based_redundancy(4, 6).unwrap();
        assert!((indexed - 3.28).abs() < 0.01, "index-based redundancy {indexed}");

        // Order invariance of decoding under read shuffling.
        let params = DataIndexedParams::new(4, 16, 1, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let data: Vec<u8> = (0..params.data_len()).map(|_| rng.gen_range(0..2u8)).collect();
        let cw = params.encode(&data).unwrap();
        for seed in 0..10u64 {
            let mut reads: Vec<Vec<u8>> = cw.sequences().cloned().collect();
            reads.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(params.decode(&reads).unwrap(), data, "shuffle seed {seed}");
        }

        // Every single-substitution pattern is corrected at M=4, L=16, t=1.
        for i in 0..cw.m() {
            for j in 0..cw.l() {
                let mut reads: Vec<Vec<u8>> = cw.sequences().cloned().collect();
                reads[i][j] ^= 1;
                assert_eq!(params.decode(&reads).unwrap(), data, "flip ({i},{j})");
            }
        }

        // Data-as-index beats explicit indexing at M=64, L=16, t=1.
        let index_based = sliced::index_based_redundancy_protected(64, 16, 1).unwrap();
        let est = sliced::data_indexed_redundancy_bound(64, 16, 1, 13, 400, 2024).unwrap();
        assert!(
            est.redundancy_bits < index_based,
            "data-indexed {} vs index-based {index_based}",
            est.redundancy_bits
        );
    });
}

#[test]
fn criterion_5_duplication_suite() {
    criterion(5, "duplication suite", || {
        let binary = Alphabet::binary();
        let bin = |s: &str| binary.parse(s).unwrap();
        let rule = |kind, k| DupRule::new(kind, k).unwrap();

        // Exact Pólya probabilities for the k=1 reverse-complement system.
        let cfg = PolyaConfig {
            x0: bin("0"),
            rule: rule(DupKind::ReverseComplement, 1),
            steps: 3,
            seed: 0,
        };
        let dist = dup::polya_exact_dist(&cfg, 1 << 12).unwrap();
        let frac = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(dist[&bin("0111")], frac(1, 6));
        assert_eq!(dist[&bin("0101")], frac(1, 3));

        // Derivative/integrate inverse: exhaustive while q^n is small, dense
        // seeded sampling for the largest alphabets.
        for q in 2u8..=4 {
            for n in 0..=14usize {
                for k in 1..=3usize {
                    let exhaustive = (q as f64).powi(n as i32) <= 5e6;
                    if exhaustive {
                        let mut w = vec![0u8; n];
                        loop {
                            let d = dup::derivative(&w, k, q).unwrap();
                            assert_eq!(d.d.len(), n + k);
                            assert_eq!(dup::integrate(&d).unwrap(), w);
                            if !increment(&mut w, q) {
                                break;
                            }
                        }
                    } else {
                        let mut rng = ChaCha8Rng::seed_from_u64(
                            (q as u64) << 32 | (n as u64) << 8 | k as u64,
                        );
                        for _ in 0..300_000 {
                            let w: Vec<u8> = (0..n).map(|_| rng.gen_range(0..q)).collect();
                            let d = dup::derivative(&w, k, q).unwrap();
                            assert_eq!(dup::integrate(&d).unwrap(), w);
                        }
                    }
                }
            }
        }

        // Tandem duplication commutes with 0^k insertion in the derivative.
        for k in 1..=3usize {
            for n in k..=10usize {
                let mut w = vec![0u8; n];
                loop {
                    let base = dup::derivative(&w, k, 2).unwrap().d;
                    let x = bin(&w.iter().map(|&b| char::from(b'0' + b)).collect::<String>());
                    for src in 0..=n - k {
                        let y = dup::apply_dup(&x, &rule(DupKind::Tandem, k), src, None).unwrap();
                        let dy = dup::derivative(y.symbols(), k, 2).unwrap().d;
                        let inserted = (0..=base.len()).any(|i| {
                            dy[..i] == base[..i]
                                && dy[i..i + k].iter().all(|&b| b == 0)
                                && dy[i + k..] == base[i..]
                        });
                        assert!(inserted, "w={w:?} k={k} src={src}");
                    }
                    if !increment(&mut w, 2) {
                        break;
                    }
                }
            }
        }

        // Fixed-k root: order invariance against a literal-de-dup oracle.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 1..=2usize {
            for n in 0..=10usize {
                let mut w = vec![0u8; n];
                loop {
                    let via_derivative = {
                        let x = binary
                            .parse(&w.iter().map(|&b| char::from(b'0' + b)).collect::<String>())
                            .unwrap();
                        dup::tandem_root_fixed_k(&x, k).unwrap().symbols().to_vec()
                    };
                    for _ in 0..50 {
                        let mut cur = w.clone();
                        loop {
                            let mut sites = Vec::new();
                            if cur.len() >= 2 * k {
                                for i in 0..=cur.len() - 2 * k {
                                    if cur[i..i + k] == cur[i + k..i + 2 * k] {
                                        sites.push(i);
                                    }
                                }
                            }
                            if sites.is_empty() {
                                break;
                            }
                            let i = sites[rng.gen_range(0..sites.len())];
                            cur.drain(i + k..i + 2 * k);
                        }
                        assert_eq!(cur, via_derivative, "w={w:?} k={k}");
                    }
                    if !increment(&mut w, 2) {
                        break;
                    }
                }
            }
        }

        // Binary unbounded-tandem roots stay within the six possibilities.
        let six: BTreeSet<&str> = ["0", "1", "01", "10", "010", "101"].into();
        for n in 1..=12usize {
            let mut w = vec![0u8; n];
            loop {
                let x = binary
                    .parse(&w.iter().map(|&b| char::from(b'0' + b)).collect::<String>())
                    .unwrap();
                let report = dup::roots_unbounded_tandem(&x, 1 << 20).unwrap();
                for r in &report.roots {
                    assert!(six.contains(r.render().as_str()), "{} -> {}", x.render(), r.render());
                }
                if !increment(&mut w, 2) {
                    break;
                }
            }
        }

        // Duplication code: every codeword, every derivation of <= 3 tandem
        // duplications, decoded exactly.
        {
            let (n, q, k) = (8usize, 2u8, 2usize);
            let total = dup::irreducible_count(n, q, k).unwrap();
            for rank in 0..total {
                let cw = dup::irreducible_unrank(rank, n, q, k).unwrap();
                let mut frontier = BTreeSet::from([cw.clone()]);
                for _ in 0..3 {
                    let mut next: BTreeSet<Vec<u8>> = BTreeSet::new();
                    for w in &frontier {
                        for i in 0..=w.len() - k {
                            let mut child = w.clone();
                            let copy: Vec<u8> = w[i..i + k].to_vec();
                            for (off, &s) in copy.iter().enumerate() {
                                child.insert(i + k + off, s);
                            }
                            next.insert(child);
                        }
                    }
                    for y in &next {
                        assert_eq!(dup::dup_code_decode(y, n, q, k).unwrap(), cw);
                    }
                    frontier = next;
                }
            }
        }

        // Irreducible rate near its asymptote.
        let rate = dup::irreducible_rate(24, 2, 3).unwrap();
        assert!((rate - 0.9098).abs() < 0.05, "rate {rate}");

        // Capacity-profile trends for q=2, k=1.
        let bound = 1 << 22;
        let end0 = dup::capacity_profile(&bin("0"), &rule(DupKind::End, 1), 10, bound).unwrap();
        assert!(end0.windows(2).all(|p| p[1].1 >= p[0].1), "end(0) profile falls: {end0:?}");
        let end01 = dup::capacity_profile(&bin("01"), &rule(DupKind::End, 1), 12, bound).unwrap();
        assert!(end01.windows(2).all(|p| p[1].1 >= p[0].1), "end(01) profile falls");
        assert!(end01.last().unwrap().1 > end01[0].1, "end(01) profile does not rise");
        let tan0 = dup::capacity_profile(&bin("0"), &rule(DupKind::Tandem, 1), 10, bound).unwrap();
        assert!(tan0.iter().all(|&(_, r)| r == 0.0), "tandem(0) cone is a single chain");
        let tan01 =
            dup::capacity_profile(&bin("01"), &rule(DupKind::Tandem, 1), 12, bound).unwrap();
        let late: Vec<f64> =
            tan01.iter().filter(|&&(n, _)| n >= 5).map(|&(_, r)| r).collect();
        assert!(late.windows(2).all(|p| p[1] < p[0]), "tandem(01) profile does not fall");

        // k=2 reverse complement drifts toward alternation: the 00/11 window
        // share shrinks between step 100 and step 2000 on average.
        let (mut early, mut late) = (0.0f64, 0.0f64);
        for seed in 0..20u64 {
            let cfg = PolyaConfig {
                x0: bin("00"),
                rule: rule(DupKind::ReverseComplement, 2),
                steps: 2000,
                seed,
            };
            let snaps = dup::polya_snapshots(&cfg, &[100, 2000]).unwrap();
            for (slot, seq) in [(&mut early, &snaps[0]), (&mut late, &snaps[1])] {
                let f = dup::kmer_frequencies(seq, 2).unwrap();
                *slot += f.get(&bin("00")).copied().unwrap_or(0.0)
                    + f.get(&bin("11")).copied().unwrap_or(0.0);
            }
        }
        assert!(late / 20.0 < early / 20.0, "early {early} late {late}");
    });
}

#[test]
fn criterion_6_determinism() {
    criterion(6, "determinism", || {
        // Library level: the sampled redundancy bound is bit-stable.
        let a = sliced::data_indexed_redundancy_bound(64, 16, 1, 13, 50, 7).unwrap();
        let b = sliced::data_indexed_redundancy_bound(64, 16, 1, 13, 50, 7).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

        // Stochastic simulations repeat exactly under a fixed seed.
        let cfg = PolyaConfig {
            x0: Alphabet::binary().parse("01").unwrap(),
            rule: DupRule::new(DupKind::Interspersed, 2).unwrap(),
            steps: 500,
            seed: 99,
        };
        assert_eq!(
            dup::polya_simulate(&cfg).unwrap().render(),
            dup::polya_simulate(&cfg).unwrap().render()
        );

        // CLI level: identical spec, byte-identical report.
        let exe = env!("CARGO_BIN_EXE_dnacode");
        let run = || {
            std::process::Command::new(exe)
                .args(["dup", "simulate", "--kind", "rc", "--k", "2", "--steps", "300",
                       "--snapshots", "100,300", "--seed", "11", "--format", "json"])
                .stdin(std::process::Stdio::piped())
                .stdout(std::process::Stdio::piped())
                .spawn()
                .and_then(|mut child| {
                    use std::io::Write;
                    child.stdin.take().unwrap().write_all(b"00")?;
                    child.wait_with_output()
                })
                .unwrap()
        };
        let (out1, out2) = (run(), run());
        assert!(out1.status.success(), "CLI failed: {out1:?}");
        assert_eq!(out1.stdout, out2.stdout);

        let total: BigRational = dup::polya_exact_dist(
            &PolyaConfig {
                x0: Alphabet::binary().parse("0").unwrap(),
                rule: DupRule::new(DupKind::ReverseComplement, 1).unwrap(),
                steps: 4,
                seed: 0,
            },
            1 << 12,
        )
        .unwrap()
        .values()
        .cloned()
        .sum();
        assert!(total.is_one());
    });
}
