//! Alphabets, sequences, error balls and a generic seeded error channel.
//!
//! This module is the oracle bedrock: the balls are computed by exact
//! enumeration and every other module tests against them. Sequences are
//! value-semantic and immutable; symbols are stored as alphabet indices and
//! glyphs appear only at I/O boundaries.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug)]
struct AlphabetInner {
    glyphs: Vec<char>,
    complement: Option<Vec<u8>>,
}

/// A finite alphabet with optional complement involution.
#[derive(Debug, Clone)]
pub struct Alphabet(Arc<AlphabetInner>);

impl Alphabet {
    /// Builds an alphabet from distinct glyphs and an optional complement map
    /// given as index pairs. The complement must be an involution without
    /// fixed points.
    pub fn new(glyphs: &[char], complement: Option<&[u8]>) -> Result<Self> {
        if glyphs.is_empty() {
            return Err(Error::InvalidInput("empty alphabet".into()));
        }
        let mut seen = BTreeSet::new();
        for g in glyphs {
            if !seen.insert(*g) {
                return Err(Error::InvalidInput(format!("duplicate glyph {g:?}")));
            }
        }
        if let Some(map) = complement {
            if map.len() != glyphs.len() {
                return Err(Error::InvalidInput("complement map size mismatch".into()));
            }
            for (i, &c) in map.iter().enumerate() {
                let c = c as usize;
                if c >= glyphs.len() || map[c] as usize != i || c == i {
                    return Err(Error::InvalidInput(
                        "complement map must be a fixed-point-free involution".into(),
                    ));
                }
            }
        }
        Ok(Alphabet(Arc::new(AlphabetInner {
            glyphs: glyphs.to_vec(),
            complement: complement.map(|m| m.to_vec()),
        })))
    }

    /// The binary alphabet `{0, 1}` with complement `0 <-> 1`.
    pub fn binary() -> Self {
        Alphabet::new(&['0', '1'], Some(&[1, 0])).unwrap()
    }

    /// The DNA alphabet `{A, C, G, T}` with Watson-Crick pairing
    /// `A <-> T`, `C <-> G`.
    pub fn dna() -> Self {
        Alphabet::new(&['A', 'C', 'G', 'T'], Some(&[3, 2, 1, 0])).unwrap()
    }

    /// Digit alphabet `{0, 1, ..., q-1}` without a complement map.
    pub fn digits(q: u8) -> Result<Self> {
        if q == 0 || q > 10 {
            return Err(Error::InvalidInput(format!("unsupported digit alphabet size {q}")));
        }
        let glyphs: Vec<char> = (0..q).map(|i| (b'0' + i) as char).collect();
        Alphabet::new(&glyphs, None)
    }

    pub fn size(&self) -> u8 {
        self.0.glyphs.len() as u8
    }

    pub fn glyph(&self, index: u8) -> char {
        self.0.glyphs[index as usize]
    }

    pub fn index_of(&self, glyph: char) -> Option<u8> {
        self.0.glyphs.iter().position(|&g| g == glyph).map(|i| i as u8)
    }

    /// Complement of a symbol index, if the alphabet defines one.
    pub fn complement(&self, index: u8) -> Option<u8> {
        self.0.complement.as_ref().map(|m| m[index as usize])
    }

    pub fn has_complement(&self) -> bool {
        self.0.complement.is_some()
    }

    /// Parses a glyph string into a sequence over this alphabet.
    pub fn parse(&self, text: &str) -> Result<Seq> {
        let mut symbols = Vec::with_capacity(text.len());
        for ch in text.chars() {
            let idx = self
                .index_of(ch)
                .ok_or_else(|| Error::InvalidInput(format!("glyph {ch:?} not in alphabet")))?;
            symbols.push(idx);
        }
        Seq::from_indices(self.clone(), symbols)
    }

    /// The empty sequence over this alphabet.
    pub fn empty(&self) -> Seq {
        Seq { alphabet: self.clone(), symbols: Vec::new() }
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.glyphs == other.0.glyphs
    }
}
impl Eq for Alphabet {}

/// An immutable finite sequence over an [`Alphabet`].
#[derive(Debug, Clone)]
pub struct Seq {
    alphabet: Alphabet,
    symbols: Vec<u8>,
}

impl Seq {
    pub fn from_indices(alphabet: Alphabet, symbols: Vec<u8>) -> Result<Self> {
        let q = alphabet.size();
        if let Some(&bad) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::InvalidInput(format!("symbol index {bad} out of range for q={q}")));
        }
        Ok(Seq { alphabet, symbols })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Renders the sequence as a glyph string.
    pub fn render(&self) -> String {
        self.symbols.iter().map(|&s| self.alphabet.glyph(s)).collect()
    }

    /// True iff `self` is a (not necessarily contiguous) subsequence of `other`.
    pub fn is_subsequence_of(&self, other: &Seq) -> bool {
        is_subsequence(&self.symbols, &other.symbols)
    }

    pub(crate) fn with(&self, symbols: Vec<u8>) -> Seq {
        Seq { alphabet: self.alphabet.clone(), symbols }
    }
}

pub(crate) fn is_subsequence(short: &[u8], long: &[u8]) -> bool {
    let mut it = long.iter();
    short.iter().all(|s| it.any(|l| l == s))
}

impl PartialEq for Seq {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols && self.alphabet == other.alphabet
    }
}
impl Eq for Seq {}

impl PartialOrd for Seq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Seq {
    fn cmp(&self, other: &Self) -> Ordering {
        // Shorter sequences first, then lexicographic; alphabets are expected
        // to match whenever sequences are compared.
        (self.symbols.len(), &self.symbols).cmp(&(other.symbols.len(), &other.symbols))
    }
}

impl Hash for Seq {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.alphabet.size().hash(state);
        self.symbols.hash(state);
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The kind of point error an [`ErrorBall`] is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BallKind {
    Substitution,
    Deletion,
    Insertion,
}

/// The exact set of sequences reachable from a center by at most `radius`
/// errors of one kind. The center is always a member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorBall {
    pub center: Seq,
    pub radius: usize,
    pub kind: BallKind,
    pub members: BTreeSet<Seq>,
}

impl ErrorBall {
    pub fn contains(&self, seq: &Seq) -> bool {
        self.members.contains(seq)
    }
}

/// All sequences obtainable from `x` by at most `t` symbol replacements.
pub fn substitution_ball(x: &Seq, t: usize) -> ErrorBall {
    let q = x.alphabet().size();
    let mut members: BTreeSet<Seq> = BTreeSet::new();
    members.insert(x.clone());
    let mut frontier: Vec<Vec<u8>> = vec![x.symbols().to_vec()];
    for _ in 0..t {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..w.len() {
                for s in 0..q {
                    if s != w[i] {
                        let mut v = w.clone();
                        v[i] = s;
                        if members.insert(x.with(v.clone())) {
                            next.push(v);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    ErrorBall { center: x.clone(), radius: t, kind: BallKind::Substitution, members }
}

/// All subsequences of `x` of length at least `len(x) - t`.
pub fn deletion_ball(x: &Seq, t: usize) -> Result<ErrorBall> {
    if t > x.len() {
        return Err(Error::InfeasibleBudget(format!(
            "cannot delete {t} symbols from a length-{} sequence",
            x.len()
        )));
    }
    let mut members: BTreeSet<Seq> = BTreeSet::new();
    members.insert(x.clone());
    let mut frontier: Vec<Vec<u8>> = vec![x.symbols().to_vec()];
    for _ in 0..t {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..w.len() {
                let mut v = w.clone();
                v.remove(i);
                if members.insert(x.with(v.clone())) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    Ok(ErrorBall { center: x.clone(), radius: t, kind: BallKind::Deletion, members })
}

/// All supersequences of `x` of length at most `len(x) + t`.
pub fn insertion_ball(x: &Seq, t: usize) -> ErrorBall {
    let q = x.alphabet().size();
    let mut members: BTreeSet<Seq> = BTreeSet::new();
    members.insert(x.clone());
    let mut frontier: Vec<Vec<u8>> = vec![x.symbols().to_vec()];
    for _ in 0..t {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..=w.len() {
                for s in 0..q {
                    let mut v = w.clone();
                    v.insert(i, s);
                    if members.insert(x.with(v.clone())) {
                        next.push(v);
                    }
                }
            }
        }
        frontier = next;
    }
    ErrorBall { center: x.clone(), radius: t, kind: BallKind::Insertion, members }
}

/// True iff the radius-`t` deletion balls of `x` and `y` intersect, i.e. the
/// two sequences can become indistinguishable after at most `t` deletions
/// each.
pub fn deletion_confusable(x: &Seq, y: &Seq, t: usize) -> Result<bool> {
    if x.alphabet() != y.alphabet() {
        return Err(Error::InvalidInput("sequences over different alphabets".into()));
    }
    let bx = deletion_ball(x, t.min(x.len()))?;
    let by = deletion_ball(y, t.min(y.len()))?;
    Ok(bx.members.intersection(&by.members).next().is_some())
}

/// Maps a binary sequence to DNA two bits at a time: `A=00, C=01, G=10, T=11`.
pub fn bits_to_dna(bits: &Seq) -> Result<Seq> {
    if bits.alphabet().size() != 2 {
        return Err(Error::InvalidInput("bits_to_dna expects a binary sequence".into()));
    }
    if bits.len() % 2 != 0 {
        return Err(Error::InvalidInput(format!("odd bit length {}", bits.len())));
    }
    let symbols = bits
        .symbols()
        .chunks(2)
        .map(|pair| pair[0] * 2 + pair[1])
        .collect();
    Seq::from_indices(Alphabet::dna(), symbols)
}

/// Inverse of [`bits_to_dna`].
pub fn dna_to_bits(dna: &Seq) -> Result<Seq> {
    if dna.alphabet().size() != 4 {
        return Err(Error::InvalidInput("dna_to_bits expects a DNA sequence".into()));
    }
    let mut symbols = Vec::with_capacity(dna.len() * 2);
    for &s in dna.symbols() {
        symbols.push(s >> 1);
        symbols.push(s & 1);
    }
    Seq::from_indices(Alphabet::binary(), symbols)
}

/// Triples every symbol.
pub fn repetition3_encode(data: &Seq) -> Seq {
    let mut symbols = Vec::with_capacity(data.len() * 3);
    for &s in data.symbols() {
        symbols.extend_from_slice(&[s, s, s]);
    }
    data.with(symbols)
}

/// Majority vote over every consecutive triple.
pub fn repetition3_decode(noisy: &Seq) -> Result<Seq> {
    if noisy.len() % 3 != 0 {
        return Err(Error::InvalidInput(format!(
            "repetition-3 framing error: length {} not divisible by 3",
            noisy.len()
        )));
    }
    let mut symbols = Vec::with_capacity(noisy.len() / 3);
    for triple in noisy.symbols().chunks(3) {
        let mut counts = [0usize; 256];
        for &s in triple {
            counts[s as usize] += 1;
        }
        let best = triple
            .iter()
            .copied()
            .max_by_key(|&s| counts[s as usize])
            .unwrap();
        symbols.push(best);
    }
    Ok(noisy.with(symbols))
}

/// Deterministic error budgets for the generic point channel. All randomness
/// enters through the explicit seed passed to [`apply_channel`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ChannelConfig {
    pub deletions: usize,
    pub insertions: usize,
    pub substitutions: usize,
}

/// Applies exactly the configured number of substitutions, then deletions,
/// then insertions, at uniformly chosen positions. Pure in `(x, cfg, seed)`.
pub fn apply_channel(x: &Seq, cfg: &ChannelConfig, seed: u64) -> Result<Seq> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    apply_channel_with(x, cfg, &mut rng)
}

/// Like [`apply_channel`] but drawing from a caller-owned generator.
pub fn apply_channel_with(x: &Seq, cfg: &ChannelConfig, rng: &mut impl Rng) -> Result<Seq> {
    if cfg.substitutions > x.len() || cfg.deletions > x.len() {
        return Err(Error::InfeasibleBudget(format!(
            "budget {cfg:?} infeasible for length {}",
            x.len()
        )));
    }
    let q = x.alphabet().size();
    if q < 2 && (cfg.substitutions > 0 || cfg.insertions > 0) {
        return Err(Error::InfeasibleBudget("unary alphabet cannot substitute".into()));
    }
    let mut w = x.symbols().to_vec();

    let mut positions: Vec<usize> = (0..w.len()).collect();
    positions.shuffle(rng);
    for &i in positions.iter().take(cfg.substitutions) {
        let offset = rng.gen_range(1..q);
        w[i] = (w[i] + offset) % q;
    }

    let mut positions: Vec<usize> = (0..w.len()).collect();
    positions.shuffle(rng);
    let mut doomed: Vec<usize> = positions.into_iter().take(cfg.deletions).collect();
    doomed.sort_unstable_by(|a, b| b.cmp(a));
    for i in doomed {
        w.remove(i);
    }

    for _ in 0..cfg.insertions {
        let i = rng.gen_range(0..=w.len());
        let s = rng.gen_range(0..q);
        w.insert(i, s);
    }

    Ok(x.with(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(s: &str) -> Seq {
        Alphabet::binary().parse(s).unwrap()
    }

    fn render_set(ball: &ErrorBall) -> BTreeSet<String> {
        ball.members.iter().map(|s| s.render()).collect()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn substitution_ball_examples() {
        let b = substitution_ball(&bin("1001"), 1);
        assert_eq!(render_set(&b), set(&["1001", "0001", "1101", "1011", "1000"]));
        let b = substitution_ball(&bin("0000"), 1);
        assert_eq!(render_set(&b), set(&["0000", "1000", "0100", "0010", "0001"]));
        let x = bin("0110");
        let b = substitution_ball(&x, 0);
        assert_eq!(b.members.len(), 1);
        assert!(b.contains(&x));
    }

    #[test]
    fn substitution_ball_size_content_independent() {
        // |B_sub(x, t)| depends on (n, t, q) only.
        for n in 0..=10usize {
            for t in 0..=2usize.min(n) {
                let mut sizes = BTreeSet::new();
                for w in 0..(1u32 << n) {
                    let symbols: Vec<u8> = (0..n).map(|i| ((w >> i) & 1) as u8).collect();
                    let x = Seq::from_indices(Alphabet::binary(), symbols).unwrap();
                    sizes.insert(substitution_ball(&x, t).members.len());
                }
                assert_eq!(sizes.len(), 1, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn deletion_ball_examples() {
        let b = deletion_ball(&bin("1001"), 1).unwrap();
        assert_eq!(render_set(&b), set(&["1001", "001", "101", "100"]));
        let b = deletion_ball(&bin("0000"), 1).unwrap();
        assert_eq!(render_set(&b), set(&["0000", "000"]));
        let b = deletion_ball(&bin("1011"), 1).unwrap();
        assert_eq!(render_set(&b), set(&["1011", "011", "111", "101"]));
        assert!(deletion_ball(&bin("01"), 3).is_err());
    }

    #[test]
    fn deletion_ball_size_is_runs_plus_one() {
        for n in 1..=10usize {
            for w in 0..(1u32 << n) {
                let symbols: Vec<u8> = (0..n).map(|i| ((w >> i) & 1) as u8).collect();
                let runs = 1 + symbols.windows(2).filter(|p| p[0] != p[1]).count();
                let x = Seq::from_indices(Alphabet::binary(), symbols).unwrap();
                let b = deletion_ball(&x, 1).unwrap();
                assert_eq!(b.members.len(), runs + 1);
            }
        }
    }

    #[test]
    fn insertion_ball_examples() {
        let b = insertion_ball(&bin("0"), 1);
        assert_eq!(render_set(&b), set(&["0", "00", "01", "10"]));
        let b = insertion_ball(&bin(""), 1);
        assert_eq!(render_set(&b), set(&["", "0", "1"]));
        let x = bin("10");
        assert_eq!(insertion_ball(&x, 0).members.len(), 1);
    }

    #[test]
    fn insertion_deletion_duality() {
        // y in D_t(x) iff x in I_t(y), exhaustively for n <= 8 (t = 1).
        for n in 1..=8usize {
            for w in 0..(1u32 << n) {
                let symbols: Vec<u8> = (0..n).map(|i| ((w >> i) & 1) as u8).collect();
                let x = Seq::from_indices(Alphabet::binary(), symbols).unwrap();
                for y in deletion_ball(&x, 1).unwrap().members {
                    assert!(insertion_ball(&y, 1).contains(&x));
                }
            }
        }
    }

    #[test]
    fn deletion_confusable_examples() {
        assert!(deletion_confusable(&bin("1010101"), &bin("0101010"), 1).unwrap());
        assert!(deletion_confusable(&bin("0110"), &bin("0110"), 0).unwrap());
        assert!(!deletion_confusable(&bin("00"), &bin("11"), 1).unwrap());
    }

    #[test]
    fn dna_mapping() {
        let bits = bin("00101001");
        assert_eq!(bits_to_dna(&bits).unwrap().render(), "AGGC");
        assert_eq!(bits_to_dna(&bin("")).unwrap().render(), "");
        assert!(bits_to_dna(&bin("011")).is_err());
        // Exhaustive roundtrip for even lengths up to 16 bits.
        for n in (0..=16usize).step_by(2) {
            let step = if n > 10 { 97 } else { 1 };
            let mut w = 0u32;
            while w < (1u32 << n) {
                let symbols: Vec<u8> = (0..n).map(|i| ((w >> i) & 1) as u8).collect();
                let x = Seq::from_indices(Alphabet::binary(), symbols).unwrap();
                assert_eq!(dna_to_bits(&bits_to_dna(&x).unwrap()).unwrap(), x);
                w += step;
            }
        }
    }

    #[test]
    fn repetition3_examples() {
        assert_eq!(repetition3_encode(&bin("01001")).render(), "000111000000111");
        // Corrupted row from the worked replication example.
        let noisy = bin("100110000001111");
        assert_eq!(repetition3_decode(&noisy).unwrap().render(), "01001");
        assert!(repetition3_decode(&bin("0000")).is_err());
        for n in 0..=10usize {
            for w in 0..(1u32 << n) {
                let symbols: Vec<u8> = (0..n).map(|i| ((w >> i) & 1) as u8).collect();
                let x = Seq::from_indices(Alphabet::binary(), symbols).unwrap();
                assert_eq!(repetition3_decode(&repetition3_encode(&x)).unwrap(), x);
            }
        }
    }

    #[test]
    fn channel_zero_budget_is_identity() {
        let x = bin("110010");
        assert_eq!(apply_channel(&x, &ChannelConfig::default(), 7).unwrap(), x);
    }

    #[test]
    fn channel_is_pure_in_seed() {
        let x = bin("1100101110");
        let cfg = ChannelConfig { deletions: 2, insertions: 1, substitutions: 1 };
        let a = apply_channel(&x, &cfg, 42).unwrap();
        let b = apply_channel(&x, &cfg, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn channel_deletions_stay_in_ball() {
        for seed in 0..1000u64 {
            let x = bin("101100101011");
            let cfg = ChannelConfig { deletions: 2, ..Default::default() };
            let y = apply_channel(&x, &cfg, seed).unwrap();
            assert!(deletion_ball(&x, 2).unwrap().contains(&y));
        }
    }

    #[test]
    fn channel_single_deletion_statistics() {
        // Deleting bit 3 or 4 of 1011 both give 101, so 101 shows up with
        // empirical frequency near 2/4.
        let x = bin("1011");
        let cfg = ChannelConfig { deletions: 1, ..Default::default() };
        let trials = 20_000;
        let hits = (0..trials)
            .filter(|&seed| apply_channel(&x, &cfg, seed).unwrap().render() == "101")
            .count();
        let freq = hits as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.02, "freq={freq}");
    }

    #[test]
    fn channel_infeasible_budget() {
        let x = bin("10");
        let cfg = ChannelConfig { deletions: 3, ..Default::default() };
        assert!(apply_channel(&x, &cfg, 0).is_err());
    }

    #[test]
    fn alphabet_invariants() {
        assert!(Alphabet::new(&['a', 'a'], None).is_err());
        assert!(Alphabet::new(&['a', 'b'], Some(&[0, 1])).is_err()); // fixed points
        let dna = Alphabet::dna();
        assert_eq!(dna.complement(0), Some(3));
        assert_eq!(dna.complement(dna.complement(1).unwrap()), Some(1));
    }
}
