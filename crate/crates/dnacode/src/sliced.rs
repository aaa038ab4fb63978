//! Coding over an unordered set of `M` binary sequences of length `L`.
//!
//! DNA molecules in a vial carry no order, some are never sampled, and the
//! survivors pick up point errors. This module models that channel and
//! implements two codecs on top of it: the classic index-based scheme (spend
//! the first bits of every sequence on its position) and a data-as-index
//! scheme where the prefixes are themselves information, drawn from a greedy
//! family of large-minimum-distance prefix sets.
//!
//! Sequences are plain `Vec<u8>` bit vectors here; the alphabet is always
//! binary and the hot paths (family enumeration, matching) want cheap words.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Error, Result};

/// An unordered set of `M` distinct length-`L` binary sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicedCodeword {
    l: usize,
    sequences: BTreeSet<Vec<u8>>,
}

impl SlicedCodeword {
    pub fn new(sequences: Vec<Vec<u8>>) -> Result<Self> {
        let l = sequences.first().map(|s| s.len()).unwrap_or(0);
        if sequences.iter().any(|s| s.len() != l) {
            return Err(Error::InvalidInput("sequences must share one length".into()));
        }
        if sequences.iter().flatten().any(|&b| b > 1) {
            return Err(Error::InvalidInput("sequences must be binary".into()));
        }
        let m = sequences.len();
        let set: BTreeSet<Vec<u8>> = sequences.into_iter().collect();
        if set.len() != m {
            return Err(Error::InvalidInput("sequences must be distinct".into()));
        }
        Ok(Self { l, sequences: set })
    }

    pub fn m(&self) -> usize {
        self.sequences.len()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// The member sequences in ascending lexicographic order.
    pub fn sequences(&self) -> impl Iterator<Item = &Vec<u8>> {
        self.sequences.iter()
    }
}

/// What comes back from the channel: a multiset of reads, order meaningless,
/// lengths arbitrary once insertions and deletions are enabled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicedRead {
    pub reads: Vec<Vec<u8>>,
}

/// Error budgets for [`sliced_channel`]. `losses` sequences disappear,
/// `substitutions` is a *total* across all surviving symbol positions, and the
/// per-sequence deletion/insertion counts extend the basic model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SlicedChannelConfig {
    pub losses: usize,
    pub substitutions: usize,
    pub del_per_seq: usize,
    pub ins_per_seq: usize,
}

/// Applies the sliced channel to a codeword: remove `losses` sequences
/// uniformly, place `substitutions` flips uniformly over the remaining symbol
/// positions without replacement, apply per-sequence deletions and insertions,
/// then discard order. Pure in `(cw, cfg, seed)`.
pub fn sliced_channel(cw: &SlicedCodeword, cfg: &SlicedChannelConfig, seed: u64) -> Result<SlicedRead> {
    let pool: Vec<Vec<u8>> = cw.sequences().cloned().collect();
    Ok(SlicedRead { reads: sliced_channel_pool(&pool, cfg, seed)? })
}

/// Same channel over a raw pool (possibly a multiset, e.g. a replicated
/// index-based encoding).
pub fn sliced_channel_pool(pool: &[Vec<u8>], cfg: &SlicedChannelConfig, seed: u64) -> Result<Vec<Vec<u8>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if cfg.losses > pool.len() {
        return Err(Error::InfeasibleBudget(format!(
            "{} losses from a pool of {}",
            cfg.losses,
            pool.len()
        )));
    }
    let mut survivors: Vec<Vec<u8>> = pool.to_vec();
    survivors.shuffle(&mut rng);
    survivors.truncate(pool.len() - cfg.losses);

    let total: usize = survivors.iter().map(|s| s.len()).sum();
    if cfg.substitutions > total {
        return Err(Error::InfeasibleBudget(format!(
            "{} substitutions over {total} surviving symbols",
            cfg.substitutions
        )));
    }
    let flips = rand::seq::index::sample(&mut rng, total, cfg.substitutions);
    let mut flat: Vec<(usize, usize)> = Vec::with_capacity(total);
    for (si, s) in survivors.iter().enumerate() {
        for j in 0..s.len() {
            flat.push((si, j));
        }
    }
    for k in flips.iter() {
        let (si, j) = flat[k];
        survivors[si][j] ^= 1;
    }

    for s in survivors.iter_mut() {
        if cfg.del_per_seq > s.len() {
            return Err(Error::InfeasibleBudget("deletion budget exceeds length".into()));
        }
        let mut doomed: Vec<usize> =
            rand::seq::index::sample(&mut rng, s.len(), cfg.del_per_seq).into_vec();
        doomed.sort_unstable_by(|a, b| b.cmp(a));
        for i in doomed {
            s.remove(i);
        }
        for _ in 0..cfg.ins_per_seq {
            let i = rng.gen_range(0..=s.len());
            let b = rng.gen_range(0..2u8);
            s.insert(i, b);
        }
    }

    survivors.shuffle(&mut rng);
    Ok(survivors)
}

/// Membership check: could `reads` have come out of the channel applied to
/// `cw`, treating every field of `cfg` as an upper bound? Searches over which
/// sequences were lost and which read came from which survivor.
pub fn reachable(cw: &SlicedCodeword, reads: &[Vec<u8>], cfg: &SlicedChannelConfig) -> Result<bool> {
    let m = cw.m();
    if reads.len() > m {
        return Ok(false);
    }
    if m - reads.len() > cfg.losses {
        return Ok(false);
    }
    if m > 10 {
        return Err(Error::BoundExceeded(m));
    }
    let sources: Vec<&Vec<u8>> = cw.sequences().collect();
    // cost[i][j] = fewest substitutions turning source i into read j within
    // the per-sequence deletion/insertion budgets, or None if impossible.
    let mut cost = vec![vec![None; reads.len()]; m];
    for (i, s) in sources.iter().enumerate() {
        for (j, r) in reads.iter().enumerate() {
            cost[i][j] = min_substitutions(s, r, cfg.del_per_seq, cfg.ins_per_seq);
        }
    }
    let mut used = vec![false; m];
    Ok(assign(&cost, 0, &mut used, cfg.substitutions))
}

fn assign(cost: &[Vec<Option<usize>>], j: usize, used: &mut [bool], budget: usize) -> bool {
    if j == cost[0].len() {
        return true;
    }
    for i in 0..cost.len() {
        if used[i] {
            continue;
        }
        if let Some(c) = cost[i][j] {
            if c <= budget {
                used[i] = true;
                if assign(cost, j + 1, used, budget - c) {
                    used[i] = false;
                    return true;
                }
                used[i] = false;
            }
        }
    }
    false
}

/// Fewest substitutions aligning `a` to `b` using at most `dd` deletions and
/// `ii` insertions; `None` when no alignment fits the budgets. Enumerates the
/// deleted positions of `a` and the inserted positions of `b` directly, which
/// is fine at vial scale.
fn min_substitutions(a: &[u8], b: &[u8], dd: usize, ii: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for del in 0..=dd.min(a.len()) {
        let ins = match (b.len() + del).checked_sub(a.len()) {
            Some(i) if i <= ii => i,
            _ => continue,
        };
        for_each_combination(a.len(), del, &mut |drop_a| {
            let kept_a: Vec<u8> = a
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop_a.contains(i))
                .map(|(_, &x)| x)
                .collect();
            for_each_combination(b.len(), ins, &mut |drop_b| {
                let subs = b
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !drop_b.contains(i))
                    .map(|(_, &x)| x)
                    .zip(kept_a.iter())
                    .filter(|(x, &y)| *x != y)
                    .count();
                if best.map_or(true, |v| subs < v) {
                    best = Some(subs);
                }
            });
        });
    }
    best
}

fn for_each_combination(n: usize, k: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(n: usize, k: usize, start: usize, acc: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if acc.len() == k {
            visit(acc);
            return;
        }
        for i in start..n {
            acc.push(i);
            rec(n, k, i + 1, acc, visit);
            acc.pop();
        }
    }
    rec(n, k, 0, &mut Vec::new(), visit);
}

/// log₂ of the binomial coefficient C(n, k), exact big-integer arithmetic
/// under the logarithm.
pub fn log2_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let mut c = BigUint::from(1u32);
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    log2_biguint(&c)
}

fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shifted = x >> (bits - 53);
    (shifted.to_u64().unwrap() as f64).log2() + (bits - 53) as f64
}

/// Redundancy of a code over M-subsets of {0,1}^L:
/// log₂ C(2^L, M) − log₂|C|. Zero for the unrestricted code.
pub fn set_redundancy(code_size_log2: f64, m: u64, l: u32) -> Result<f64> {
    if l >= 64 || m > 1u64 << l {
        return Err(Error::InvalidInput(format!("need M ≤ 2^L, got M={m}, L={l}")));
    }
    Ok(log2_binomial(1u64 << l, m) - code_size_log2)
}

/// Redundancy of the plain index-based scheme with no error protection:
/// log₂ C(2^L, M) − M(L − log₂ M).
pub fn index_based_redundancy(m: u64, l: u32) -> Result<f64> {
    set_redundancy((m as f64) * (l as f64 - (m as f64).log2()), m, l)
}

/// Redundancy of the index-based scheme when indices are drawn from a
/// distance-(2t+1) lexicode, so substitution errors on indices are
/// correctable. Payloads stay unprotected in both schemes being compared.
pub fn index_based_redundancy_protected(m: usize, l: usize, t: usize) -> Result<f64> {
    let bl = index_block_len(m, 2 * t + 1)?;
    if bl > l {
        return Err(Error::InfeasibleBudget(format!(
            "protected index needs {bl} bits but L = {l}"
        )));
    }
    set_redundancy((m * (l - bl)) as f64, m as u64, l as u32)
}

// ---------------------------------------------------------------------------
// Index-based scheme
// ---------------------------------------------------------------------------

/// Protection options for the index-based codec. `replication` guards against
/// sequence loss, `distance` is the pairwise Hamming distance of the index
/// blocks (1 means plain binary indices), and `payload_guard` enables the
/// payload-distance rescue for reads whose index block got corrupted onto
/// another valid index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexProtection {
    pub replication: usize,
    pub distance: usize,
    pub payload_guard: bool,
}

impl Default for IndexProtection {
    fn default() -> Self {
        Self { replication: 1, distance: 1, payload_guard: false }
    }
}

/// Greedy lexicode over `bits`-bit words with minimum distance `d`, truncated
/// to `count` words; `None` when the lexicode is too small.
fn lexicode(bits: usize, d: usize, count: usize) -> Option<Vec<u64>> {
    let mut words: Vec<u64> = Vec::with_capacity(count);
    for w in 0..1u64 << bits {
        if words.iter().all(|&v| (v ^ w).count_ones() as usize >= d) {
            words.push(w);
            if words.len() == count {
                return Some(words);
            }
        }
    }
    None
}

/// Smallest index-block width whose greedy lexicode holds `m` words at
/// pairwise distance `d`.
pub fn index_block_len(m: usize, d: usize) -> Result<usize> {
    if m < 2 {
        return Err(Error::InvalidInput("need at least two sequences".into()));
    }
    for bits in 1..=24 {
        if lexicode(bits, d, m).is_some() {
            return Ok(bits);
        }
    }
    Err(Error::InfeasibleBudget(format!("no {d}-distance index code for M = {m} within 24 bits")))
}

fn index_blocks(m: usize, d: usize) -> Result<Vec<Vec<u8>>> {
    let bits = index_block_len(m, d)?;
    let words = lexicode(bits, d, m).expect("length was chosen to fit");
    Ok(words.into_iter().map(|w| word_to_bits(w, bits)).collect())
}

fn word_to_bits(w: u64, bits: usize) -> Vec<u8> {
    (0..bits).map(|i| ((w >> (bits - 1 - i)) & 1) as u8).collect()
}

/// Payload capacity of the index-based scheme under `prot`.
pub fn indexed_data_len(m: usize, l: usize, prot: &IndexProtection) -> Result<usize> {
    let bl = index_block_len(m, prot.distance)?;
    if bl > l {
        return Err(Error::InfeasibleBudget(format!("index block {bl} exceeds L = {l}")));
    }
    Ok(m * (l - bl))
}

/// Splits `data` into per-sequence payloads, prefixes each with its index
/// block, and replicates the pool `prot.replication` times.
pub fn encode_indexed(data: &[u8], m: usize, l: usize, prot: &IndexProtection) -> Result<Vec<Vec<u8>>> {
    if prot.replication == 0 {
        return Err(Error::InvalidInput("replication factor must be positive".into()));
    }
    let want = indexed_data_len(m, l, prot)?;
    if data.len() != want {
        return Err(Error::InvalidInput(format!("expected {want} data bits, got {}", data.len())));
    }
    let blocks = index_blocks(m, prot.distance)?;
    let pb = l - blocks[0].len();
    let mut sequences = Vec::with_capacity(m);
    for i in 0..m {
        let mut s = blocks[i].clone();
        s.extend_from_slice(&data[i * pb..(i + 1) * pb]);
        sequences.push(s);
    }
    if prot.payload_guard {
        // A corrupted index can only be mistaken for a nearby block;
        // require those payloads to disagree loudly.
        for i in 0..m {
            for j in i + 1..m {
                let bd = hamming(&blocks[i], &blocks[j]);
                let pd = hamming(&sequences[i][l - pb..], &sequences[j][l - pb..]);
                if bd <= 2 && pd < 3 {
                    return Err(Error::InvalidInput(format!(
                        "payload guard: indices {i} and {j} are {bd} apart but payloads only {pd}"
                    )));
                }
            }
        }
    }
    let mut pool = Vec::with_capacity(m * prot.replication);
    for _ in 0..prot.replication {
        pool.extend(sequences.iter().cloned());
    }
    Ok(pool)
}

fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Recovers the data from index-based reads. Each read is matched to the
/// nearest index block (ties go unassigned), payloads are combined by
/// bitwise majority, and with `payload_guard` reads that are payload
/// outliers in an over-full group are reassigned to empty indices.
pub fn decode_indexed(reads: &[Vec<u8>], m: usize, l: usize, prot: &IndexProtection) -> Result<Vec<u8>> {
    let blocks = index_blocks(m, prot.distance)?;
    let bl = blocks[0].len();
    if bl > l {
        return Err(Error::InfeasibleBudget(format!("index block {bl} exceeds L = {l}")));
    }
    let pb = l - bl;

    let mut groups: Vec<Vec<Vec<u8>>> = vec![Vec::new(); m];
    let mut unassigned: Vec<Vec<u8>> = Vec::new();
    for r in reads {
        if r.len() != l {
            return Err(Error::ChannelModelViolation(format!(
                "read of length {} in a substitution/loss-only decode (L = {l})",
                r.len()
            )));
        }
        match nearest(&r[..bl], &blocks) {
            Some(idx) => groups[idx].push(r[bl..].to_vec()),
            None => unassigned.push(r.clone()),
        }
    }

    if prot.payload_guard {
        // Peel payload outliers out of over-full groups...
        for g in groups.iter_mut() {
            while g.len() > prot.replication {
                let maj = majority(g, pb);
                let (worst, dist) = g
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (i, hamming(p, &maj)))
                    .max_by_key(|&(i, d)| (d, usize::MAX - i))
                    .expect("group is non-empty");
                if dist == 0 {
                    break;
                }
                // Only the payload survives the peel; its index field already
                // pointed at the wrong block.
                let p = g.remove(worst);
                unassigned.push(p);
            }
        }
        // ...and hand them to the empty index nearest their observed block.
        let empties: Vec<usize> = (0..m).filter(|&i| groups[i].is_empty()).collect();
        if !empties.is_empty() {
            for p in std::mem::take(&mut unassigned) {
                // Outliers carry only their payload; full unassigned reads
                // carry an index block we can still measure against.
                let target = if p.len() == l {
                    nearest_of(&p[..bl], &blocks, &empties)
                } else {
                    if empties.len() == 1 { Some(empties[0]) } else { None }
                };
                match target {
                    Some(idx) => groups[idx].push(if p.len() == l { p[bl..].to_vec() } else { p }),
                    None => unassigned.push(p),
                }
            }
        }
    }

    let missing: Vec<usize> = (0..m).filter(|&i| groups[i].is_empty()).collect();
    if !missing.is_empty() {
        return Err(Error::MissingIndices(missing));
    }
    let mut out = Vec::with_capacity(m * pb);
    for g in &groups {
        out.extend(majority(g, pb));
    }
    Ok(out)
}

fn nearest(prefix: &[u8], blocks: &[Vec<u8>]) -> Option<usize> {
    let all: Vec<usize> = (0..blocks.len()).collect();
    nearest_of(prefix, blocks, &all)
}

fn nearest_of(prefix: &[u8], blocks: &[Vec<u8>], among: &[usize]) -> Option<usize> {
    let mut best = None;
    let mut tie = false;
    for &i in among {
        let d = hamming(prefix, &blocks[i]);
        match best {
            None => best = Some((i, d)),
            Some((_, bd)) if d < bd => {
                best = Some((i, d));
                tie = false;
            }
            Some((_, bd)) if d == bd => tie = true,
            _ => {}
        }
    }
    match (best, tie) {
        (Some((i, _)), false) => Some(i),
        _ => None,
    }
}

fn majority(group: &[Vec<u8>], pb: usize) -> Vec<u8> {
    let mut out = vec![0u8; pb];
    for (j, bit) in out.iter_mut().enumerate() {
        let ones = group.iter().filter(|p| p.get(j) == Some(&1)).count();
        // Strict majority; an exact tie reads as 0.
        *bit = u8::from(2 * ones > group.len());
    }
    out
}

// ---------------------------------------------------------------------------
// Data-as-index scheme
// ---------------------------------------------------------------------------

/// A canonical family of M-element prefix sets, each with pairwise Hamming
/// distance ≥ d, enumerated greedily in lexicographic order. The family index
/// itself carries data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCodebookFamily {
    pub p: usize,
    pub d: usize,
    sets: Vec<Vec<u64>>,
}

impl PrefixCodebookFamily {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Set members as ascending p-bit words.
    pub fn set(&self, index: usize) -> &[u64] {
        &self.sets[index]
    }

    fn truncate(&mut self, len: usize) {
        self.sets.truncate(len);
    }
}

const FAMILY_NODE_CAP: usize = 50_000_000;

/// Enumerates every distance-`d` M-subset of {0,1}^p in lexicographic order,
/// keeping a set only if its matching distance to every kept set is also
/// ≥ d. The second filter is what makes the family decodable: without it two
/// kept sets could differ by a single substituted prefix and t errors would
/// be ambiguous.
pub fn greedy_prefix_family(m: usize, p: usize, d: usize) -> Result<PrefixCodebookFamily> {
    if m < 2 || d == 0 {
        return Err(Error::InvalidInput("need M ≥ 2 and d ≥ 1".into()));
    }
    if m > 8 || p > 16 {
        return Err(Error::BoundExceeded(m.max(p)));
    }
    let universe = 1u64 << p;
    let mut sets: Vec<Vec<u64>> = Vec::new();
    let mut nodes = 0usize;
    let mut acc: Vec<u64> = Vec::with_capacity(m);

    fn rec(
        start: u64,
        universe: u64,
        m: usize,
        d: usize,
        acc: &mut Vec<u64>,
        sets: &mut Vec<Vec<u64>>,
        nodes: &mut usize,
    ) -> Result<()> {
        if acc.len() == m {
            if sets.iter().all(|s| matching_distance(s, acc) >= d) {
                sets.push(acc.clone());
            }
            return Ok(());
        }
        for w in start..universe {
            *nodes += 1;
            if *nodes > FAMILY_NODE_CAP {
                return Err(Error::BoundExceeded(*nodes));
            }
            if acc.iter().all(|&v| (v ^ w).count_ones() as usize >= d) {
                acc.push(w);
                rec(w + 1, universe, m, d, acc, sets, nodes)?;
                acc.pop();
            }
        }
        Ok(())
    }
    rec(0, universe, m, d, &mut acc, &mut sets, &mut nodes)?;
    if sets.is_empty() {
        return Err(Error::InfeasibleBudget(format!(
            "no distance-{d} {m}-set exists at prefix length {p}"
        )));
    }
    Ok(PrefixCodebookFamily { p, d, sets })
}

/// Minimum-cost perfect matching distance between two equal-size word sets
/// under Hamming cost, by branch-and-bound over assignments.
fn matching_distance(a: &[u64], b: &[u64]) -> usize {
    fn rec(a: &[u64], b: &[u64], i: usize, used: &mut [bool], cost: usize, best: &mut usize) {
        if cost >= *best {
            return;
        }
        if i == a.len() {
            *best = cost;
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                rec(a, b, i + 1, used, cost + (a[i] ^ b[j]).count_ones() as usize, best);
                used[j] = false;
            }
        }
    }
    let mut best = usize::MAX;
    let mut used = vec![false; b.len()];
    rec(a, b, 0, &mut used, 0, &mut best);
    best
}

/// Data bits a protected payload field of `field` bits can carry against `t`
/// substitutions: the field itself for t = 0, a shortened Hamming code for
/// t = 1, bit-wise (2t+1)-repetition beyond that.
pub fn payload_data_bits(field: usize, t: usize) -> usize {
    match t {
        0 => field,
        1 => field.saturating_sub(hamming_parity_bits(field)),
        _ => field / (2 * t + 1),
    }
}

fn hamming_parity_bits(field: usize) -> usize {
    let mut r = 0;
    while (1usize << r) < field + 1 {
        r += 1;
    }
    r
}

fn payload_encode(data: &[u8], field: usize, t: usize) -> Vec<u8> {
    match t {
        0 => data.to_vec(),
        1 => hamming_encode(data, field),
        _ => {
            let mut out = Vec::with_capacity(field);
            for &b in data {
                out.extend(std::iter::repeat(b).take(2 * t + 1));
            }
            out.resize(field, 0);
            out
        }
    }
}

fn payload_decode(word: &[u8], t: usize) -> Result<Vec<u8>> {
    match t {
        0 => Ok(word.to_vec()),
        1 => hamming_decode(word),
        _ => {
            let k = word.len() / (2 * t + 1);
            Ok((0..k)
                .map(|i| {
                    let chunk = &word[i * (2 * t + 1)..(i + 1) * (2 * t + 1)];
                    let ones = chunk.iter().filter(|&&b| b == 1).count();
                    u8::from(2 * ones > chunk.len())
                })
                .collect())
        }
    }
}

/// Shortened Hamming encode: data goes into the non-power-of-two positions
/// of 1..=field, parities into the powers of two.
fn hamming_encode(data: &[u8], field: usize) -> Vec<u8> {
    let mut w = vec![0u8; field + 1]; // 1-based
    let mut di = 0;
    for pos in 1..=field {
        if !pos.is_power_of_two() {
            w[pos] = data[di];
            di += 1;
        }
    }
    debug_assert_eq!(di, data.len());
    let r = hamming_parity_bits(field);
    for j in 0..r {
        let p = 1usize << j;
        if p > field {
            break;
        }
        let parity = (1..=field)
            .filter(|&i| i & p != 0 && !i.is_power_of_two())
            .fold(0u8, |acc, i| acc ^ w[i]);
        w[p] = parity;
    }
    w[1..].to_vec()
}

fn hamming_decode(word: &[u8]) -> Result<Vec<u8>> {
    let field = word.len();
    let mut w = vec![0u8];
    w.extend_from_slice(word);
    let mut syndrome = 0usize;
    let r = hamming_parity_bits(field);
    for j in 0..r {
        let p = 1usize << j;
        let parity = (1..=field).filter(|&i| i & p != 0).fold(0u8, |acc, i| acc ^ w[i]);
        if parity != 0 {
            syndrome |= p;
        }
    }
    if syndrome > field {
        return Err(Error::Uncorrectable(format!(
            "payload syndrome {syndrome} points outside the shortened code"
        )));
    }
    if syndrome != 0 {
        w[syndrome] ^= 1;
    }
    Ok((1..=field).filter(|&i| !i.is_power_of_two()).map(|i| w[i]).collect())
}

/// A fixed instantiation of the data-as-index scheme: the family index picks
/// the prefix set, prefixes index the sequences by lexicographic order, and
/// payloads are individually substitution-protected so that t errors anywhere
/// in the codeword are correctable.
#[derive(Debug, Clone)]
pub struct DataIndexedParams {
    pub m: usize,
    pub l: usize,
    pub t: usize,
    pub p: usize,
    family: PrefixCodebookFamily,
    rank_bits: usize,
}

impl DataIndexedParams {
    /// Builds parameters, choosing the smallest workable prefix length when
    /// `p` is not given (the family must offer at least two sets, otherwise
    /// its index carries nothing).
    pub fn new(m: usize, l: usize, t: usize, p: Option<usize>) -> Result<Self> {
        let d = 2 * t + 1;
        let build = |p: usize| -> Result<Self> {
            if p > l {
                return Err(Error::InfeasibleBudget(format!("prefix length {p} exceeds L = {l}")));
            }
            let mut family = greedy_prefix_family(m, p, d)?;
            if family.len() < 2 {
                return Err(Error::InfeasibleBudget(format!(
                    "family at p = {p} has a single set; no data fits in the index"
                )));
            }
            let rank_bits = usize::BITS as usize - 1 - family.len().leading_zeros() as usize;
            family.truncate(1 << rank_bits);
            Ok(Self { m, l, t, p, family, rank_bits })
        };
        match p {
            Some(p) => build(p),
            None => {
                let floor = (usize::BITS - (m - 1).leading_zeros()) as usize;
                let mut last = Error::InfeasibleBudget("no feasible prefix length".into());
                for p in floor..=l.min(16) {
                    match build(p) {
                        Ok(params) => return Ok(params),
                        Err(e) => last = e,
                    }
                }
                Err(last)
            }
        }
    }

    pub fn family(&self) -> &PrefixCodebookFamily {
        &self.family
    }

    pub fn payload_bits_per_seq(&self) -> usize {
        payload_data_bits(self.l - self.p, self.t)
    }

    pub fn data_len(&self) -> usize {
        self.rank_bits + self.m * self.payload_bits_per_seq()
    }

    pub fn encode(&self, data: &[u8]) -> Result<SlicedCodeword> {
        if data.len() != self.data_len() {
            return Err(Error::InvalidInput(format!(
                "expected {} data bits, got {}",
                self.data_len(),
                data.len()
            )));
        }
        let rank = data[..self.rank_bits].iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
        let set = self.family.set(rank);
        let field = self.l - self.p;
        let k = self.payload_bits_per_seq();
        let mut sequences = Vec::with_capacity(self.m);
        for (i, &prefix) in set.iter().enumerate() {
            let chunk = &data[self.rank_bits + i * k..self.rank_bits + (i + 1) * k];
            let mut s = word_to_bits(prefix, self.p);
            s.extend(payload_encode(chunk, field, self.t));
            sequences.push(s);
        }
        SlicedCodeword::new(sequences)
    }

    /// Matches the observed prefixes against every family set, picks the one
    /// with the cheapest perfect matching (a cost tie across sets or across
    /// assignments is a decode failure, never broken silently), reorders the
    /// reads accordingly and strips the payload protection.
    pub fn decode(&self, reads: &[Vec<u8>]) -> Result<Vec<u8>> {
        if reads.len() < self.m {
            return Err(Error::MissingIndices((reads.len()..self.m).collect()));
        }
        if reads.len() > self.m {
            return Err(Error::ChannelModelViolation(format!(
                "{} reads for an M = {} codeword",
                reads.len(),
                self.m
            )));
        }
        if reads.iter().any(|r| r.len() != self.l) {
            return Err(Error::ChannelModelViolation("reads must have length L".into()));
        }
        let prefixes: Vec<u64> = reads
            .iter()
            .map(|r| r[..self.p].iter().fold(0u64, |acc, &b| acc << 1 | b as u64))
            .collect();

        let mut best: Option<(usize, usize)> = None; // (set index, cost)
        let mut tied = false;
        for si in 0..self.family.len() {
            let cost = matching_distance(self.family.set(si), &prefixes);
            match best {
                None => best = Some((si, cost)),
                Some((_, bc)) if cost < bc => {
                    best = Some((si, cost));
                    tied = false;
                }
                Some((_, bc)) if cost == bc => tied = true,
                _ => {}
            }
        }
        let (rank, cost) = best.expect("family is non-empty");
        if tied {
            return Err(Error::Ambiguous(format!(
                "two prefix sets both explain the reads at cost {cost}"
            )));
        }
        let set = self.family.set(rank);
        let assignment = unique_min_assignment(set, &prefixes, cost).ok_or_else(|| {
            Error::Ambiguous("several read orderings achieve the best matching cost".into())
        })?;

        let mut data = Vec::with_capacity(self.data_len());
        for j in (0..self.rank_bits).rev() {
            data.push(((rank >> j) & 1) as u8);
        }
        for &ri in &assignment {
            data.extend(payload_decode(&reads[ri][self.p..], self.t)?);
        }
        Ok(data)
    }
}

/// The minimum-cost assignment set[i] -> reads[assignment[i]] if it is
/// unique at cost `target`, else `None`.
fn unique_min_assignment(set: &[u64], prefixes: &[u64], target: usize) -> Option<Vec<usize>> {
    fn rec(
        set: &[u64],
        prefixes: &[u64],
        i: usize,
        cost: usize,
        target: usize,
        used: &mut [bool],
        acc: &mut Vec<usize>,
        found: &mut Option<Vec<usize>>,
        count: &mut usize,
    ) {
        if cost > target || *count > 1 {
            return;
        }
        if i == set.len() {
            *count += 1;
            if found.is_none() {
                *found = Some(acc.clone());
            } else if found.as_deref() != Some(acc.as_slice()) {
                *count = 2;
            }
            return;
        }
        for j in 0..prefixes.len() {
            if !used[j] {
                used[j] = true;
                acc.push(j);
                let c = (set[i] ^ prefixes[j]).count_ones() as usize;
                rec(set, prefixes, i + 1, cost + c, target, used, acc, found, count);
                acc.pop();
                used[j] = false;
            }
        }
    }
    let mut found = None;
    let mut count = 0usize;
    let mut used = vec![false; prefixes.len()];
    rec(set, prefixes, 0, 0, target, &mut used, &mut Vec::new(), &mut found, &mut count);
    if count == 1 {
        found
    } else {
        None
    }
}

pub fn encode_data_indexed(data: &[u8], m: usize, l: usize, t: usize) -> Result<SlicedCodeword> {
    DataIndexedParams::new(m, l, t, None)?.encode(data)
}

pub fn decode_data_indexed(reads: &[Vec<u8>], m: usize, l: usize, t: usize) -> Result<Vec<u8>> {
    DataIndexedParams::new(m, l, t, None)?.decode(reads)
}

/// Measured redundancy of a concrete data-as-index instantiation.
pub fn data_indexed_redundancy(params: &DataIndexedParams) -> Result<f64> {
    set_redundancy(params.data_len() as f64, params.m as u64, params.l as u32)
}

// ---------------------------------------------------------------------------
// Redundancy estimation at scales where the family cannot be enumerated
// ---------------------------------------------------------------------------

/// Outcome of [`data_indexed_redundancy_bound`]. All quantities are log₂.
#[derive(Debug, Clone, Serialize)]
pub struct RedundancyEstimate {
    /// Estimated log₂ of the number of distance-d M-subsets of {0,1}^p.
    pub log2_sets_all: f64,
    /// log₂ of the per-set conflict-neighbourhood volume used in the
    /// covering argument.
    pub log2_overlap: f64,
    /// Guaranteed log₂ family size after the matching-distance filter:
    /// `log2_sets_all − log2_overlap`.
    pub log2_family_bound: f64,
    /// Upper bound on the scheme's redundancy in bits.
    pub redundancy_bits: f64,
    pub trials: usize,
    pub dead_ends: usize,
}

/// Upper-bounds the redundancy of the data-as-index scheme at parameters too
/// large to enumerate. The count of distance-(2t+1) M-subsets is estimated by
/// sequential importance sampling (uniform greedy growth, weighting each
/// trial by the product of choice counts), and the matching-distance filter
/// loses at most a factor of the conflict neighbourhood volume
/// Σ_{j≤2t} C(Mp, j), since greedily kept sets form a maximal independent set
/// in the conflict graph.
pub fn data_indexed_redundancy_bound(
    m: usize,
    l: usize,
    t: usize,
    p: usize,
    trials: usize,
    seed: u64,
) -> Result<RedundancyEstimate> {
    if p > 20 || p > l {
        return Err(Error::InvalidInput(format!("prefix length {p} out of range for L = {l}")));
    }
    if trials == 0 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    let d = 2 * t + 1;
    let n = 1usize << p;
    // Masks of the radius-(d-1) ball: flipping within it would land a new
    // word too close to a chosen one.
    let mut ball: Vec<u32> = Vec::new();
    for mask in 0..n as u32 {
        if (mask.count_ones() as usize) < d {
            ball.push(mask);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log_weights: Vec<f64> = Vec::with_capacity(trials);
    let mut dead_ends = 0usize;
    let mut alive: Vec<u32> = Vec::with_capacity(n);
    let mut pos: Vec<u32> = vec![0; n];
    for _ in 0..trials {
        alive.clear();
        alive.extend(0..n as u32);
        for (i, &w) in alive.iter().enumerate() {
            pos[w as usize] = i as u32;
        }
        const GONE: u32 = u32::MAX;
        let mut logw = 0.0f64;
        let mut ok = true;
        for _ in 0..m {
            if alive.is_empty() {
                ok = false;
                break;
            }
            logw += (alive.len() as f64).log2();
            let idx = rng.gen_range(0..alive.len());
            let w = alive[idx];
            for &mask in &ball {
                let v = (w ^ mask) as usize;
                let at = pos[v];
                if at != GONE {
                    let last = *alive.last().unwrap();
                    alive.swap_remove(at as usize);
                    if (last as usize) != v {
                        pos[last as usize] = at;
                    }
                    pos[v] = GONE;
                }
            }
        }
        if ok {
            log_weights.push(logw);
        } else {
            dead_ends += 1;
        }
    }
    if log_weights.is_empty() {
        return Err(Error::Uncorrectable("every sampling trial dead-ended".into()));
    }

    // log₂ of the mean weight over all trials (dead ends contribute zero).
    let peak = log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = log_weights.iter().map(|&w| (w - peak).exp2()).sum::<f64>() / trials as f64;
    let log2_ordered = peak + mean.log2();
    let log2_mfact: f64 = (1..=m as u64).map(|i| (i as f64).log2()).sum();
    let log2_sets_all = log2_ordered - log2_mfact;

    let mut overlap = BigUint::from(0u32);
    for j in 0..=2 * t {
        let mut c = BigUint::from(1u32);
        for i in 0..j {
            c = c * BigUint::from((m * p - i) as u64) / BigUint::from((i + 1) as u64);
        }
        overlap += c;
    }
    let log2_overlap = log2_biguint(&overlap);
    let log2_family_bound = (log2_sets_all - log2_overlap).max(0.0);

    let rank_bits = log2_family_bound.floor();
    let data_bits = rank_bits + (m * payload_data_bits(l - p, t)) as f64;
    let redundancy_bits = set_redundancy(data_bits, m as u64, l as u32)?;
    Ok(RedundancyEstimate {
        log2_sets_all,
        log2_overlap,
        log2_family_bound,
        redundancy_bits,
        trials,
        dead_ends,
    })
}

// ---------------------------------------------------------------------------
// Vial files and trial reports
// ---------------------------------------------------------------------------

/// Renders a codeword in the vial format: a `M L` header, then one sequence
/// per line in ascending order.
pub fn write_vial(cw: &SlicedCodeword) -> String {
    let mut out = format!("{} {}\n", cw.m(), cw.l());
    for s in cw.sequences() {
        for &b in s {
            out.push(char::from(b'0' + b));
        }
        out.push('\n');
    }
    out
}

pub fn parse_vial(text: &str) -> Result<SlicedCodeword> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::InvalidInput("empty vial file".into()))?;
    let mut parts = header.split_whitespace();
    let m: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::InvalidInput("vial header must be `M L`".into()))?;
    let l: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::InvalidInput("vial header must be `M L`".into()))?;
    let mut sequences = Vec::with_capacity(m);
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut s = Vec::with_capacity(l);
        for ch in line.chars() {
            match ch {
                '0' => s.push(0),
                '1' => s.push(1),
                _ => return Err(Error::InvalidInput(format!("bad vial symbol {ch:?}"))),
            }
        }
        if s.len() != l {
            return Err(Error::InvalidInput(format!(
                "vial line length {} does not match header L = {l}",
                s.len()
            )));
        }
        sequences.push(s);
    }
    if sequences.len() != m {
        return Err(Error::InvalidInput(format!(
            "vial holds {} sequences but header says {m}",
            sequences.len()
        )));
    }
    SlicedCodeword::new(sequences)
}

/// One simulation trial, as emitted by the CLI in JSON.
#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub seed: u64,
    pub losses: usize,
    pub substitutions: usize,
    pub success: bool,
    pub redundancy_bits: f64,
}

/// Seed-splitting rule for batch simulations: trial i runs on `seed + i`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed.wrapping_add(trial)
}
