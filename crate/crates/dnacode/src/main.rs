//! Command-line front end. Every subcommand builds an `ExperimentSpec`,
//! dispatches into the library, and renders one report in the requested
//! format; identical spec + seed gives byte-identical output.

use std::collections::BTreeMap;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use dnacode::dup::{self, DupKind, DupRule, PolyaConfig};
use dnacode::seqcore::{self, Alphabet, Seq};
use dnacode::sliced::{self, DataIndexedParams, SlicedChannelConfig, SlicedCodeword};
use dnacode::{checks, multidel, vt, Error};

/// Environment variable bounding enumeration sizes (descendant sets, exact
/// distributions, root searches).
const ENUM_CAP_VAR: &str = "DNACODE_ENUM_CAP";
const ENUM_CAP_DEFAULT: usize = 1_000_000;

#[derive(Parser)]
#[command(name = "dnacode", version, about = "Channel-coding toolkit for DNA data storage")]
struct Cli {
    /// RNG seed for stochastic operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Sequence alphabet: auto, binary, dna, or a base q for digits 0..q.
    #[arg(long, global = true, default_value = "auto")]
    alphabet: String,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum BallKindArg {
    Sub,
    Del,
    Ins,
}

#[derive(Copy, Clone, ValueEnum)]
enum DupKindArg {
    Tandem,
    End,
    Interspersed,
    Rc,
}

impl From<DupKindArg> for DupKind {
    fn from(k: DupKindArg) -> DupKind {
        match k {
            DupKindArg::Tandem => DupKind::Tandem,
            DupKindArg::End => DupKind::End,
            DupKindArg::Interspersed => DupKind::Interspersed,
            DupKindArg::Rc => DupKind::ReverseComplement,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the error ball around a sequence read from stdin.
    Ball {
        #[arg(long, value_enum)]
        kind: BallKindArg,
        #[arg(long, default_value_t = 1)]
        radius: usize,
    },
    /// Varshamov–Tenengolts single-deletion codes.
    Vt {
        #[command(subcommand)]
        op: VtOp,
    },
    /// Weighted-sum codes for t >= 2 deletions.
    Multidel {
        #[command(subcommand)]
        op: MultidelOp,
    },
    /// Codes over unordered sets of sequences.
    Sliced {
        #[command(subcommand)]
        op: SlicedOp,
    },
    /// Duplication channels, roots, and duplication-correcting codes.
    Dup {
        #[command(subcommand)]
        op: DupOp,
    },
    /// Recompute every built-in worked example; nonzero exit on mismatch.
    Examples {
        /// Shift the VT verification modulus (mutation-testing knob).
        #[arg(long, default_value_t = 0)]
        corrupt_vt_modulus: usize,
    },
}

#[derive(Subcommand)]
enum VtOp {
    /// Systematic encode of data bits (stdin) into VT(n, 0).
    Encode {
        #[arg(long)]
        n: usize,
    },
    /// Decode a length-n or length-(n-1) word from stdin.
    Decode {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        a: usize,
    },
    /// List every codeword of VT(n, a).
    Codebook {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        a: usize,
    },
}

#[derive(Subcommand)]
enum MultidelOp {
    /// Full t-deletion pipeline encode of data bits from stdin.
    Encode {
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
    /// Pipeline decode; n is the data length before encoding.
    Decode {
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long)]
        n: usize,
    },
    /// Weighted modulo sums of a gap-constrained word from stdin.
    Sums {
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
}

#[derive(Subcommand)]
enum SlicedOp {
    /// Encode data bits (stdin) into an unordered set of M length-L strands.
    Encode {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 0)]
        t: usize,
    },
    /// Decode reads (one binary strand per line on stdin).
    Decode {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 0)]
        t: usize,
    },
    /// Pass a vial (stdin, `M L` header then strands) through the channel.
    Simulate {
        #[arg(long, default_value_t = 0)]
        losses: usize,
        #[arg(long, default_value_t = 0)]
        substitutions: usize,
        #[arg(long, default_value_t = 0)]
        del_per_seq: usize,
        #[arg(long, default_value_t = 0)]
        ins_per_seq: usize,
    },
    /// Compare index-based and data-indexed redundancy at (M, L, t).
    Redundancy {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Prefix length for the data-indexed family (default: smallest feasible).
        #[arg(long)]
        p: Option<usize>,
        /// Sampling trials for the large-M counting bound.
        #[arg(long, default_value_t = 400)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum DupOp {
    /// One stochastic duplication trajectory from the stdin sequence.
    Simulate {
        #[arg(long, value_enum)]
        kind: DupKindArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        steps: usize,
        /// Comma-separated steps at which to record k-mer frequencies.
        #[arg(long, value_delimiter = ',')]
        snapshots: Vec<usize>,
        /// k-mer length for the frequency series.
        #[arg(long, default_value_t = 2)]
        kmer: usize,
    },
    /// Exact distribution of the process after `steps` rounds.
    ExactDist {
        #[arg(long, value_enum)]
        kind: DupKindArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        steps: usize,
    },
    /// Tandem duplication root for a fixed window length k.
    Root {
        #[arg(long)]
        k: usize,
    },
    /// All roots under tandem duplications of every length.
    Roots,
    /// Capacity profile log_q(count)/n for descendants up to length n-max.
    Capacity {
        #[arg(long, value_enum)]
        kind: DupKindArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Count irreducible words and the rate of the duplication code.
    Irreducible {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[arg(long)]
        k: usize,
    },
    /// Search for `target` as a substring of some bounded-depth descendant.
    Express {
        #[arg(long, value_enum)]
        kind: DupKindArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// f(n): the largest minimum de-duplication distance to a root.
    F {
        #[arg(long)]
        n: usize,
    },
}

/// What was run and with what inputs; embedded in every report.
#[derive(Serialize)]
struct ExperimentSpec {
    module: &'static str,
    operation: &'static str,
    parameters: BTreeMap<String, String>,
    seed: u64,
    format: &'static str,
}

struct Report {
    spec: ExperimentSpec,
    result: Value,
    text: String,
    csv: Option<String>,
    exit_error: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let body = render(&cli, &report);
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &body) {
                    eprintln!("{}", json!({ "error": e.to_string() }));
                    return ExitCode::FAILURE;
                }
            } else {
                print!("{body}");
            }
            if report.exit_error {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}

fn render(cli: &Cli, report: &Report) -> String {
    match cli.format {
        Format::Text => {
            let mut s = report.text.clone();
            if !s.ends_with('\n') && !s.is_empty() {
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let full = json!({ "spec": report.spec, "result": report.result });
            let mut s = serde_json::to_string_pretty(&full).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => report.csv.clone().unwrap_or_else(|| {
            let mut s = String::from("value\n");
            for line in report.text.lines() {
                s.push_str(line);
                s.push('\n');
            }
            s
        }),
    }
}

fn enum_cap() -> Result<usize, Error> {
    match std::env::var(ENUM_CAP_VAR) {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{ENUM_CAP_VAR} must be an integer, got {v:?}"))),
        Err(_) => Ok(ENUM_CAP_DEFAULT),
    }
}

fn stdin_word() -> Result<String, Error> {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| Error::InvalidInput(format!("stdin: {e}")))?;
    let word = buf.trim().to_string();
    if word.is_empty() {
        return Err(Error::InvalidInput("expected a sequence on stdin".into()));
    }
    Ok(word)
}

fn stdin_lines() -> Result<Vec<String>, Error> {
    Ok(stdin_word()?.lines().map(|l| l.trim().to_string()).filter(|l| !l.is_empty()).collect())
}

fn pick_alphabet(flag: &str, sample: &str) -> Result<Alphabet, Error> {
    match flag {
        "binary" => Ok(Alphabet::binary()),
        "dna" => Ok(Alphabet::dna()),
        "auto" => {
            if sample.chars().all(|c| "ACGT".contains(c)) && !sample.is_empty() {
                Ok(Alphabet::dna())
            } else if sample.chars().all(|c| c == '0' || c == '1') {
                Ok(Alphabet::binary())
            } else if sample.chars().all(|c| c.is_ascii_digit()) {
                let q = sample.bytes().map(|b| b - b'0').max().unwrap_or(1) + 1;
                Alphabet::digits(q.max(2))
            } else {
                Err(Error::InvalidInput(format!("cannot infer an alphabet for {sample:?}")))
            }
        }
        other => match other.parse::<u8>() {
            Ok(q) => Alphabet::digits(q),
            Err(_) => Err(Error::InvalidInput(format!(
                "unknown alphabet {other:?}; expected auto, binary, dna, or a base"
            ))),
        },
    }
}

fn parse_seq(cli: &Cli, text: &str) -> Result<Seq, Error> {
    pick_alphabet(&cli.alphabet, text)?.parse(text)
}

fn parse_bits(text: &str) -> Result<Vec<u8>, Error> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::InvalidInput(format!("expected a binary string, found {other:?}"))),
        })
        .collect()
}

fn render_bits(bits: &[u8]) -> String {
    bits.iter().map(|&b| char::from(b'0' + b)).collect()
}

fn spec_of(
    cli: &Cli,
    module: &'static str,
    operation: &'static str,
    params: &[(&str, String)],
) -> ExperimentSpec {
    ExperimentSpec {
        module,
        operation,
        parameters: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        seed: cli.seed,
        format: cli.format.name(),
    }
}

fn list_report(spec: ExperimentSpec, header: &str, items: Vec<String>) -> Report {
    let mut csv = format!("{header}\n");
    for item in &items {
        csv.push_str(item);
        csv.push('\n');
    }
    Report {
        spec,
        result: json!(items),
        text: items.join("\n"),
        csv: Some(csv),
        exit_error: false,
    }
}

fn scalar_report(spec: ExperimentSpec, result: Value, text: String) -> Report {
    Report { spec, result, text, csv: None, exit_error: false }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Ball { kind, radius } => {
            let x = parse_seq(cli, &stdin_word()?)?;
            let kind_name = match kind {
                BallKindArg::Sub => "sub",
                BallKindArg::Del => "del",
                BallKindArg::Ins => "ins",
            };
            let spec = spec_of(
                cli,
                "seqcore",
                "ball",
                &[
                    ("center", x.render()),
                    ("kind", kind_name.to_string()),
                    ("radius", radius.to_string()),
                ],
            );
            let ball = match kind {
                BallKindArg::Sub => seqcore::substitution_ball(&x, *radius),
                BallKindArg::Del => seqcore::deletion_ball(&x, *radius)?,
                BallKindArg::Ins => seqcore::insertion_ball(&x, *radius),
            };
            let members: Vec<String> = ball.members.iter().map(|s| s.render()).collect();
            Ok(list_report(spec, "member", members))
        }

        Command::Vt { op } => run_vt(cli, op),
        Command::Multidel { op } => run_multidel(cli, op),
        Command::Sliced { op } => run_sliced(cli, op),
        Command::Dup { op } => run_dup(cli, op),

        Command::Examples { corrupt_vt_modulus } => {
            let rows = checks::reference_table(&checks::CheckConfig {
                vt_modulus_offset: *corrupt_vt_modulus,
            });
            let spec = spec_of(
                cli,
                "cli",
                "examples",
                &[("corrupt_vt_modulus", corrupt_vt_modulus.to_string())],
            );
            let mut text = String::new();
            let mut csv = String::from("name,expected,actual,pass\n");
            for r in &rows {
                let verdict = if r.pass { "pass" } else { "FAIL" };
                text.push_str(&format!("[{verdict}] {}: {}", r.name, r.expected));
                if !r.pass {
                    text.push_str(&format!(" (got {})", r.actual));
                }
                text.push('\n');
                csv.push_str(&format!(
                    "{:?},{:?},{:?},{}\n",
                    r.name, r.expected, r.actual, r.pass
                ));
            }
            let failed = rows.iter().filter(|r| !r.pass).count();
            text.push_str(&format!("{} of {} examples pass", rows.len() - failed, rows.len()));
            Ok(Report {
                spec,
                result: serde_json::to_value(&rows).expect("rows serialize"),
                text,
                csv: Some(csv),
                exit_error: failed > 0,
            })
        }
    }
}

fn run_vt(cli: &Cli, op: &VtOp) -> Result<Report, Error> {
    match op {
        VtOp::Encode { n } => {
            let data = parse_bits(&stdin_word()?)?;
            let spec = spec_of(cli, "vt", "encode", &[
                ("data", render_bits(&data)),
                ("n", n.to_string()),
            ]);
            let cw = vt::encode(&data, *n)?;
            let text = render_bits(&cw);
            Ok(scalar_report(spec, json!({ "codeword": text }), text))
        }
        VtOp::Decode { n, a } => {
            let y = parse_bits(&stdin_word()?)?;
            let spec = spec_of(cli, "vt", "decode", &[
                ("received", render_bits(&y)),
                ("n", n.to_string()),
                ("a", a.to_string()),
            ]);
            let c = vt::decode(&y, &vt::VtParams::new(*n, *a)?)?;
            let text = render_bits(&c);
            Ok(scalar_report(spec, json!({ "codeword": text }), text))
        }
        VtOp::Codebook { n, a } => {
            let spec = spec_of(cli, "vt", "codebook", &[
                ("n", n.to_string()),
                ("a", a.to_string()),
            ]);
            let words = vt::codebook(&vt::VtParams::new(*n, *a)?)?;
            let items: Vec<String> = words.iter().map(|w| render_bits(w)).collect();
            Ok(list_report(spec, "codeword", items))
        }
    }
}

fn run_multidel(cli: &Cli, op: &MultidelOp) -> Result<Report, Error> {
    match op {
        MultidelOp::Encode { t } => {
            let data = parse_bits(&stdin_word()?)?;
            let spec = spec_of(cli, "multidel", "encode", &[
                ("data", render_bits(&data)),
                ("t", t.to_string()),
            ]);
            let cw = multidel::encode_t_del(&data, *t)?;
            let text = render_bits(&cw);
            Ok(scalar_report(spec, json!({ "codeword": text }), text))
        }
        MultidelOp::Decode { t, n } => {
            let noisy = parse_bits(&stdin_word()?)?;
            let spec = spec_of(cli, "multidel", "decode", &[
                ("received", render_bits(&noisy)),
                ("t", t.to_string()),
                ("n", n.to_string()),
            ]);
            let data = multidel::decode_t_del(&noisy, *n, *t)?;
            let text = render_bits(&data);
            Ok(scalar_report(spec, json!({ "data": text }), text))
        }
        MultidelOp::Sums { t } => {
            let c = parse_bits(&stdin_word()?)?;
            let spec = spec_of(cli, "multidel", "sums", &[
                ("word", render_bits(&c)),
                ("t", t.to_string()),
            ]);
            let sums = multidel::weighted_sums(&c, *t)?;
            let mods = multidel::moduli(*t, c.len())?;
            let text = sums
                .residues
                .iter()
                .zip(&mods)
                .enumerate()
                .map(|(p, (r, m))| format!("p={p}: {r} mod {m}"))
                .collect::<Vec<_>>()
                .join("\n");
            let mut csv = String::from("p,residue,modulus\n");
            for (p, (r, m)) in sums.residues.iter().zip(&mods).enumerate() {
                csv.push_str(&format!("{p},{r},{m}\n"));
            }
            let result = json!({
                "residues": sums.residues.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "moduli": mods.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            });
            Ok(Report { spec, result, text, csv: Some(csv), exit_error: false })
        }
    }
}

fn run_sliced(cli: &Cli, op: &SlicedOp) -> Result<Report, Error> {
    match op {
        SlicedOp::Encode { m, l, t } => {
            let data = parse_bits(&stdin_word()?)?;
            let spec = spec_of(cli, "sliced", "encode", &[
                ("data", render_bits(&data)),
                ("m", m.to_string()),
                ("l", l.to_string()),
                ("t", t.to_string()),
            ]);
            let cw = sliced::encode_data_indexed(&data, *m, *l, *t)?;
            let text = sliced::write_vial(&cw);
            let strands: Vec<String> = cw.sequences().map(|s| render_bits(s)).collect();
            Ok(Report {
                spec,
                result: json!({ "m": m, "l": l, "sequences": strands }),
                text,
                csv: None,
                exit_error: false,
            })
        }
        SlicedOp::Decode { m, l, t } => {
            let reads: Vec<Vec<u8>> =
                stdin_lines()?.iter().map(|line| parse_bits(line)).collect::<Result<_, _>>()?;
            let spec = spec_of(cli, "sliced", "decode", &[
                ("reads", reads.len().to_string()),
                ("m", m.to_string()),
                ("l", l.to_string()),
                ("t", t.to_string()),
            ]);
            let data = sliced::decode_data_indexed(&reads, *m, *l, *t)?;
            let text = render_bits(&data);
            Ok(scalar_report(spec, json!({ "data": text }), text))
        }
        SlicedOp::Simulate { losses, substitutions, del_per_seq, ins_per_seq } => {
            let vial = stdin_word()?;
            let cw: SlicedCodeword = sliced::parse_vial(&vial)?;
            let cfg = SlicedChannelConfig {
                losses: *losses,
                substitutions: *substitutions,
                del_per_seq: *del_per_seq,
                ins_per_seq: *ins_per_seq,
            };
            let spec = spec_of(cli, "sliced", "simulate", &[
                ("m", cw.m().to_string()),
                ("l", cw.l().to_string()),
                ("losses", losses.to_string()),
                ("substitutions", substitutions.to_string()),
                ("del_per_seq", del_per_seq.to_string()),
                ("ins_per_seq", ins_per_seq.to_string()),
            ]);
            let out = sliced::sliced_channel(&cw, &cfg, cli.seed)?;
            let items: Vec<String> = out.reads.iter().map(|r| render_bits(r)).collect();
            Ok(list_report(spec, "read", items))
        }
        SlicedOp::Redundancy { m, l, t, p, trials } => {
            let spec = spec_of(cli, "sliced", "redundancy", &[
                ("m", m.to_string()),
                ("l", l.to_string()),
                ("t", t.to_string()),
                ("p", p.map(|v| v.to_string()).unwrap_or_else(|| "auto".into())),
                ("trials", trials.to_string()),
            ]);
            let index_based = sliced::index_based_redundancy_protected(*m, *l, *t)?;
            // Small M: count the data-indexed code exactly. Large M: lower
            // bound on the family size via sampling.
            let (data_indexed, detail) = if *m <= 8 {
                let params = DataIndexedParams::new(*m, *l, *t, *p)?;
                let r = sliced::data_indexed_redundancy(&params)?;
                (r, json!({ "method": "exact", "p": params.p }))
            } else {
                let p = p.unwrap_or(13);
                let est = sliced::data_indexed_redundancy_bound(*m, *l, *t, p, *trials, cli.seed)?;
                let r = est.redundancy_bits;
                (r, json!({ "method": "sampled-bound", "p": p, "estimate": est }))
            };
            let text = format!(
                "index-based redundancy: {index_based:.4} bits\n\
                 data-indexed redundancy: {data_indexed:.4} bits"
            );
            let csv = format!(
                "scheme,redundancy_bits\nindex_based,{index_based}\ndata_indexed,{data_indexed}\n"
            );
            let result = json!({
                "index_based_bits": index_based,
                "data_indexed_bits": data_indexed,
                "detail": detail,
            });
            Ok(Report { spec, result, text, csv: Some(csv), exit_error: false })
        }
    }
}

fn run_dup(cli: &Cli, op: &DupOp) -> Result<Report, Error> {
    let cap = enum_cap()?;
    match op {
        DupOp::Simulate { kind, k, steps, snapshots, kmer } => {
            let x0 = parse_seq(cli, &stdin_word()?)?;
            let rule = DupRule::new((*kind).into(), *k)?;
            let spec = spec_of(cli, "dup", "simulate", &[
                ("x0", x0.render()),
                ("kind", format!("{:?}", rule.kind)),
                ("k", k.to_string()),
                ("steps", steps.to_string()),
                ("kmer", kmer.to_string()),
            ]);
            let cfg = PolyaConfig { x0, rule, steps: *steps, seed: cli.seed };
            let mut at = snapshots.clone();
            at.sort_unstable();
            at.dedup();
            at.retain(|&s| s <= *steps);
            let record_final = at.last() != Some(steps);
            if record_final {
                at.push(*steps);
            }
            let snaps = dup::polya_snapshots(&cfg, &at)?;
            let last = snaps.last().expect("final snapshot present").render();

            let mut csv = String::from("step,kmer,freq\n");
            let mut series = Vec::new();
            for (&step, seq) in at.iter().zip(&snaps) {
                for (w, f) in dup::kmer_frequencies(seq, *kmer)? {
                    csv.push_str(&format!("{step},{},{f}\n", w.render()));
                    series.push(json!({ "step": step, "kmer": w.render(), "freq": f }));
                }
            }
            Ok(Report {
                spec,
                result: json!({ "final": last, "frequencies": series }),
                text: last,
                csv: Some(csv),
                exit_error: false,
            })
        }
        DupOp::ExactDist { kind, k, steps } => {
            let x0 = parse_seq(cli, &stdin_word()?)?;
            let rule = DupRule::new((*kind).into(), *k)?;
            let spec = spec_of(cli, "dup", "exact-dist", &[
                ("x0", x0.render()),
                ("kind", format!("{:?}", rule.kind)),
                ("k", k.to_string()),
                ("steps", steps.to_string()),
            ]);
            let cfg = PolyaConfig { x0, rule, steps: *steps, seed: cli.seed };
            let dist = dup::polya_exact_dist(&cfg, cap)?;
            let mut text = String::new();
            let mut csv = String::from("sequence,probability\n");
            let mut rows = Vec::new();
            for (seq, prob) in &dist {
                text.push_str(&format!("{}\t{prob}\n", seq.render()));
                csv.push_str(&format!("{},{prob}\n", seq.render()));
                rows.push(json!({ "sequence": seq.render(), "probability": prob.to_string() }));
            }
            text.pop();
            Ok(Report { spec, result: json!(rows), text, csv: Some(csv), exit_error: false })
        }
        DupOp::Root { k } => {
            let x = parse_seq(cli, &stdin_word()?)?;
            let spec = spec_of(cli, "dup", "root", &[
                ("x", x.render()),
                ("k", k.to_string()),
            ]);
            let root = dup::tandem_root_fixed_k(&x, *k)?;
            let text = root.render();
            Ok(scalar_report(spec, json!({ "root": text }), text))
        }
        DupOp::Roots => {
            let x = parse_seq(cli, &stdin_word()?)?;
            let spec = spec_of(cli, "dup", "roots", &[("x", x.render())]);
            let report = dup::roots_unbounded_tandem(&x, cap)?;
            let roots: Vec<String> = report.roots.iter().map(|r| r.render()).collect();
            let text = format!("{}\nmin steps: {}", roots.join("\n"), report.min_steps);
            let mut csv = String::from("root\n");
            for r in &roots {
                csv.push_str(r);
                csv.push('\n');
            }
            Ok(Report {
                spec,
                result: json!({ "roots": roots, "min_steps": report.min_steps }),
                text,
                csv: Some(csv),
                exit_error: false,
            })
        }
        DupOp::Capacity { kind, k, n_max } => {
            let x = parse_seq(cli, &stdin_word()?)?;
            let rule = DupRule::new((*kind).into(), *k)?;
            let spec = spec_of(cli, "dup", "capacity", &[
                ("x", x.render()),
                ("kind", format!("{:?}", rule.kind)),
                ("k", k.to_string()),
                ("n_max", n_max.to_string()),
            ]);
            let profile = dup::capacity_profile(&x, &rule, *n_max, cap)?;
            let mut text = String::new();
            let mut csv = String::from("n,rate\n");
            let mut rows = Vec::new();
            for (n, rate) in &profile {
                text.push_str(&format!("n={n}: {rate:.6}\n"));
                csv.push_str(&format!("{n},{rate}\n"));
                rows.push(json!({ "n": n, "rate": rate }));
            }
            text.pop();
            Ok(Report { spec, result: json!(rows), text, csv: Some(csv), exit_error: false })
        }
        DupOp::Irreducible { n, q, k } => {
            let spec = spec_of(cli, "dup", "irreducible", &[
                ("n", n.to_string()),
                ("q", q.to_string()),
                ("k", k.to_string()),
            ]);
            let count = dup::irreducible_count(*n, *q, *k)?;
            let rate = dup::irreducible_rate(*n, *q, *k)?;
            let text = format!("count: {count}\nrate: {rate:.6}");
            Ok(scalar_report(
                spec,
                json!({ "count": count.to_string(), "rate": rate }),
                text,
            ))
        }
        DupOp::Express { kind, k, target, depth } => {
            let x = parse_seq(cli, &stdin_word()?)?;
            let y = x.alphabet().parse(target)?;
            let rule = DupRule::new((*kind).into(), *k)?;
            let spec = spec_of(cli, "dup", "express", &[
                ("x", x.render()),
                ("target", y.render()),
                ("kind", format!("{:?}", rule.kind)),
                ("k", k.to_string()),
                ("depth", depth.to_string()),
            ]);
            let outcome = dup::fully_expressive_search(&x, &rule, &y, *depth, cap)?;
            let text = match outcome {
                dup::ExpressiveSearch::FoundAtDepth(d) => format!("found at depth {d}"),
                dup::ExpressiveSearch::NotFoundWithinBound(d) => {
                    format!("not found within depth {d}")
                }
            };
            Ok(scalar_report(spec, serde_json::to_value(outcome).expect("serializes"), text))
        }
        DupOp::F { n } => {
            let spec = spec_of(cli, "dup", "f", &[("n", n.to_string())]);
            let f = dup::max_distance_to_root(*n, cap)?;
            Ok(scalar_report(spec, json!({ "f": f }), f.to_string()))
        }
    }
}
