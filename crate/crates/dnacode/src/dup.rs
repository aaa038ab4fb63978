//! String-duplication systems for in-vivo storage.
//!
//! A duplication channel copies a substring and re-inserts it somewhere
//! (adjacent, at the end, anywhere, or reversed-complemented). This module
//! covers the combinatorial side (descendant cones, capacity profiles,
//! expressiveness, roots and de-duplication distance), the stochastic side
//! (the Pólya string model, exact and simulated), and the coding side: the
//! k-step discrete derivative that turns fixed-k tandem duplication into
//! `0^k` insertion, and the irreducible-sequence code it induces.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::seqcore::Seq;
use crate::{Error, Result};

/// The four duplication mechanisms, all copying a window of fixed length `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DupKind {
    Tandem,
    End,
    Interspersed,
    ReverseComplement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DupRule {
    pub kind: DupKind,
    pub k: usize,
}

impl DupRule {
    pub fn new(kind: DupKind, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("duplication length must be positive".into()));
        }
        Ok(Self { kind, k })
    }
}

/// Applies one duplication. The source window is `[src_pos, src_pos + k)`;
/// `insert_pos` is required for interspersed duplication only and gives the
/// position of the copy in the original coordinates.
pub fn apply_dup(x: &Seq, rule: &DupRule, src_pos: usize, insert_pos: Option<usize>) -> Result<Seq> {
    let n = x.len();
    let k = rule.k;
    if src_pos + k > n {
        return Err(Error::InvalidInput(format!(
            "source window [{src_pos}, {}) outside length {n}",
            src_pos + k
        )));
    }
    let s = x.symbols();
    let copy: Vec<u8> = match rule.kind {
        DupKind::ReverseComplement => {
            if !x.alphabet().has_complement() {
                return Err(Error::InvalidInput(
                    "reverse-complement duplication needs a complement map".into(),
                ));
            }
            s[src_pos..src_pos + k]
                .iter()
                .rev()
                .map(|&b| x.alphabet().complement(b).expect("map checked above"))
                .collect()
        }
        _ => s[src_pos..src_pos + k].to_vec(),
    };
    let at = match rule.kind {
        DupKind::Tandem | DupKind::ReverseComplement => src_pos + k,
        DupKind::End => n,
        DupKind::Interspersed => {
            let at = insert_pos.ok_or_else(|| {
                Error::InvalidInput("interspersed duplication needs an insert position".into())
            })?;
            if at > n {
                return Err(Error::InvalidInput(format!("insert position {at} outside length {n}")));
            }
            at
        }
    };
    let mut out = Vec::with_capacity(n + k);
    out.extend_from_slice(&s[..at]);
    out.extend_from_slice(&copy);
    out.extend_from_slice(&s[at..]);
    Ok(x.with(out))
}

/// All one-step descendants of `symbols` under `rule`, as raw symbol vectors.
fn step_children(x: &Seq, rule: &DupRule, out: &mut BTreeSet<Vec<u8>>) -> Result<()> {
    let n = x.len();
    let k = rule.k;
    if n < k {
        return Ok(());
    }
    for src in 0..=n - k {
        match rule.kind {
            DupKind::Interspersed => {
                for at in 0..=n {
                    out.insert(apply_dup(x, rule, src, Some(at))?.symbols().to_vec());
                }
            }
            _ => {
                out.insert(apply_dup(x, rule, src, None)?.symbols().to_vec());
            }
        }
    }
    Ok(())
}

/// Exact |D*(x) ∩ Σⁿ| by breadth-first closure over lengths
/// `|x|, |x|+k, …, n`. `bound` caps the number of distinct sequences held at
/// any level; exceeding it reports the per-length counts completed so far.
pub fn descendant_count(x: &Seq, rule: &DupRule, n: usize, bound: usize) -> Result<u64> {
    Ok(descendant_levels(x, rule, n, bound)?.last().expect("at least the start level").1)
}

fn descendant_levels(x: &Seq, rule: &DupRule, n: usize, bound: usize) -> Result<Vec<(usize, u64)>> {
    if n < x.len() || (n - x.len()) % rule.k != 0 {
        return Err(Error::InvalidInput(format!(
            "target length {n} unreachable from {} in steps of {}",
            x.len(),
            rule.k
        )));
    }
    let mut levels: Vec<(usize, u64)> = vec![(x.len(), 1)];
    let mut frontier: BTreeSet<Vec<u8>> = BTreeSet::from([x.symbols().to_vec()]);
    let mut len = x.len();
    while len < n {
        let mut next = BTreeSet::new();
        for w in &frontier {
            step_children(&x.with(w.clone()), rule, &mut next)?;
            if next.len() > bound {
                return Err(Error::PartialCount { completed: levels });
            }
        }
        len += rule.k;
        levels.push((len, next.len() as u64));
        frontier = next;
    }
    Ok(levels)
}

/// Finite-n capacity profile: `(n, (1/n)·log₂|D*(x) ∩ Σⁿ|)` for every
/// reachable length up to `n_max`. A trend diagnostic, not a limit claim.
pub fn capacity_profile(x: &Seq, rule: &DupRule, n_max: usize, bound: usize) -> Result<Vec<(usize, f64)>> {
    let levels = descendant_levels(x, rule, n_max, bound)?;
    Ok(levels
        .into_iter()
        .map(|(n, count)| (n, (count as f64).log2() / n as f64))
        .collect())
}

// ---------------------------------------------------------------------------
// The Pólya string model
// ---------------------------------------------------------------------------

/// A stochastic duplication process: `steps` rounds, each picking a source
/// window (and, for interspersed, an insertion point) uniformly at random.
#[derive(Debug, Clone)]
pub struct PolyaConfig {
    pub x0: Seq,
    pub rule: DupRule,
    pub steps: usize,
    pub seed: u64,
}

/// Draws one trajectory and returns the final sequence.
pub fn polya_simulate(cfg: &PolyaConfig) -> Result<Seq> {
    Ok(polya_snapshots(cfg, &[cfg.steps])?.pop().expect("one snapshot requested"))
}

/// Draws one trajectory, recording the sequence after each step listed in
/// `at` (which must be non-decreasing and ≤ `cfg.steps`).
pub fn polya_snapshots(cfg: &PolyaConfig, at: &[usize]) -> Result<Vec<Seq>> {
    if at.windows(2).any(|w| w[0] > w[1]) || at.last().is_some_and(|&s| s > cfg.steps) {
        return Err(Error::InvalidInput("snapshot steps must be sorted and within range".into()));
    }
    if cfg.x0.len() < cfg.rule.k {
        return Err(Error::InvalidInput("start sequence shorter than the duplication window".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cur = cfg.x0.clone();
    let mut snaps = Vec::with_capacity(at.len());
    let mut want = at.iter().copied().peekable();
    for step in 0..=cfg.steps {
        while want.peek() == Some(&step) {
            snaps.push(cur.clone());
            want.next();
        }
        if step == cfg.steps {
            break;
        }
        let sites = cur.len() - cfg.rule.k + 1;
        let src = rng.gen_range(0..sites);
        let at_pos = match cfg.rule.kind {
            DupKind::Interspersed => Some(rng.gen_range(0..=cur.len())),
            _ => None,
        };
        cur = apply_dup(&cur, &cfg.rule, src, at_pos)?;
    }
    Ok(snaps)
}

/// Exact outcome distribution of the Pólya model after `cfg.steps` rounds,
/// by enumerating every choice path with its probability. `bound` caps the
/// number of paths.
pub fn polya_exact_dist(cfg: &PolyaConfig, bound: usize) -> Result<BTreeMap<Seq, BigRational>> {
    if cfg.x0.len() < cfg.rule.k {
        return Err(Error::InvalidInput("start sequence shorter than the duplication window".into()));
    }
    let mut dist = BTreeMap::new();
    let mut paths = 0usize;
    fn rec(
        cur: &Seq,
        rule: &DupRule,
        left: usize,
        prob: BigRational,
        dist: &mut BTreeMap<Seq, BigRational>,
        paths: &mut usize,
        bound: usize,
    ) -> Result<()> {
        if left == 0 {
            *paths += 1;
            if *paths > bound {
                return Err(Error::BoundExceeded(*paths));
            }
            *dist.entry(cur.clone()).or_insert_with(BigRational::zero) += prob;
            return Ok(());
        }
        let sites = cur.len() - rule.k + 1;
        let choices = match rule.kind {
            DupKind::Interspersed => sites * (cur.len() + 1),
            _ => sites,
        };
        let p = prob / BigInt::from(choices);
        for src in 0..sites {
            match rule.kind {
                DupKind::Interspersed => {
                    for at in 0..=cur.len() {
                        let next = apply_dup(cur, rule, src, Some(at))?;
                        rec(&next, rule, left - 1, p.clone(), dist, paths, bound)?;
                    }
                }
                _ => {
                    let next = apply_dup(cur, rule, src, None)?;
                    rec(&next, rule, left - 1, p.clone(), dist, paths, bound)?;
                }
            }
        }
        Ok(())
    }
    rec(&cfg.x0, &cfg.rule, cfg.steps, BigRational::one(), &mut dist, &mut paths, bound)?;
    Ok(dist)
}

/// Sliding-window m-mer frequencies, normalized by the window count.
pub fn kmer_frequencies(x: &Seq, m: usize) -> Result<BTreeMap<Seq, f64>> {
    if m == 0 || m > x.len() {
        return Err(Error::InvalidInput(format!("window {m} for length {}", x.len())));
    }
    let windows = x.len() - m + 1;
    let mut counts: BTreeMap<Seq, usize> = BTreeMap::new();
    for i in 0..windows {
        *counts.entry(x.with(x.symbols()[i..i + m].to_vec())).or_insert(0) += 1;
    }
    Ok(counts.into_iter().map(|(k, c)| (k, c as f64 / windows as f64)).collect())
}

/// H(Sₙ)/len from the exact Pólya distribution — a finite-n diagnostic of the
/// entropy rate, not the limit.
pub fn entropy_estimate(cfg: &PolyaConfig, bound: usize) -> Result<f64> {
    let dist = polya_exact_dist(cfg, bound)?;
    let len = (cfg.x0.len() + cfg.steps * cfg.rule.k) as f64;
    let h: f64 = dist
        .values()
        .map(|p| {
            let p = p.to_f64().expect("probabilities are moderate rationals");
            if p > 0.0 {
                -p * p.log2()
            } else {
                0.0
            }
        })
        .sum();
    Ok(h / len)
}

// ---------------------------------------------------------------------------
// Discrete derivatives and tandem roots
// ---------------------------------------------------------------------------

/// The k-step discrete derivative ∂ₖx = x0^k − 0^kx over ℤ_q, kept in the
/// paper-literal length n+k form so that a tandem duplication of length k in
/// x is exactly an insertion of 0^k in d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeSeq {
    pub d: Vec<u8>,
    pub k: usize,
    pub q: u8,
}

pub fn derivative(x: &[u8], k: usize, q: u8) -> Result<DerivativeSeq> {
    if q < 2 || k == 0 {
        return Err(Error::InvalidInput("need q ≥ 2 and k ≥ 1".into()));
    }
    if x.iter().any(|&s| s >= q) {
        return Err(Error::InvalidInput("symbol out of range".into()));
    }
    let n = x.len();
    let mut d = Vec::with_capacity(n + k);
    for i in 0..n + k {
        let hi = if i < n { x[i] } else { 0 };
        let lo = if i >= k { x[i - k] } else { 0 };
        d.push((hi + q - lo) % q);
    }
    Ok(DerivativeSeq { d, k, q })
}

/// Exact inverse of [`derivative`] via xᵢ = dᵢ + xᵢ₋ₖ. The trailing k entries
/// of d are redundant; when they disagree with the reconstruction the input
/// was not a valid derivative.
pub fn integrate(d: &DerivativeSeq) -> Result<Vec<u8>> {
    let q = d.q;
    if q < 2 || d.k == 0 || d.d.len() < d.k {
        return Err(Error::InvalidInput("malformed derivative".into()));
    }
    if d.d.iter().any(|&s| s >= q) {
        return Err(Error::InvalidInput("symbol out of range".into()));
    }
    let n = d.d.len() - d.k;
    let mut x = vec![0u8; n];
    for i in 0..n {
        let lo = if i >= d.k { x[i - d.k] } else { 0 };
        x[i] = (d.d[i] + lo) % q;
    }
    for i in n..n + d.k {
        let lo = if i >= d.k { x[i - d.k] } else { 0 };
        if d.d[i] != (q - lo) % q {
            return Err(Error::Inconsistent(format!(
                "trailing derivative entry {i} does not close the recursion"
            )));
        }
    }
    Ok(x)
}

/// Unique fixed-k tandem root. In the derivative domain a duplication is a
/// `0^k` insertion into the difference part `d[k..n]`, so de-duplicating to
/// exhaustion collapses each maximal zero run of length z there to `z mod k`
/// zeros — independent of the removal order.
pub fn tandem_root_fixed_k(x: &Seq, k: usize) -> Result<Seq> {
    let symbols = tandem_root_symbols(x.symbols(), k, x.alphabet().size())?;
    Ok(x.with(symbols))
}

pub(crate) fn tandem_root_symbols(x: &[u8], k: usize, q: u8) -> Result<Vec<u8>> {
    let n = x.len();
    let d = derivative(x, k, q)?;
    if n <= k {
        return Ok(x.to_vec());
    }
    let mut root: Vec<u8> = d.d[..k].to_vec();
    let mut phi = Vec::with_capacity(n - k);
    let mut run = 0usize;
    for &s in &d.d[k..n] {
        if s == 0 {
            run += 1;
        } else {
            phi.resize(phi.len() + run % k, 0);
            phi.push(s);
            run = 0;
        }
    }
    phi.resize(phi.len() + run % k, 0);
    for (i, &s) in phi.iter().enumerate() {
        let lo = root[i];
        root.push((s + lo) % q);
    }
    Ok(root)
}

/// Report of an unbounded-tandem de-duplication search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootReport {
    pub roots: BTreeSet<Seq>,
    /// Fewest de-duplication steps from the input to any root.
    pub min_steps: usize,
}

/// All roots of `x` under tandem de-duplication of *any* length, by BFS over
/// every de-duplication choice. `bound` caps the visited-set size.
pub fn roots_unbounded_tandem(x: &Seq, bound: usize) -> Result<RootReport> {
    let mut roots = BTreeSet::new();
    let mut min_steps: Option<usize> = None;
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::from([x.symbols().to_vec()]);
    let mut queue: VecDeque<(Vec<u8>, usize)> = VecDeque::from([(x.symbols().to_vec(), 0)]);
    while let Some((w, depth)) = queue.pop_front() {
        let mut reducible = false;
        let n = w.len();
        for len in 1..=n / 2 {
            for i in 0..=n - 2 * len {
                if w[i..i + len] == w[i + len..i + 2 * len] {
                    reducible = true;
                    let mut child = w.clone();
                    child.drain(i + len..i + 2 * len);
                    if seen.insert(child.clone()) {
                        if seen.len() > bound {
                            return Err(Error::BoundExceeded(seen.len()));
                        }
                        queue.push_back((child, depth + 1));
                    }
                }
            }
        }
        if !reducible {
            roots.insert(x.with(w));
            min_steps = Some(min_steps.map_or(depth, |m| m.min(depth)));
        }
    }
    Ok(RootReport { roots, min_steps: min_steps.expect("every word has a root") })
}

/// f(n): the maximum over binary words of length n of the fewest unbounded
/// tandem de-duplication steps to reach a root.
pub fn max_distance_to_root(n: usize, bound: usize) -> Result<usize> {
    if n == 0 || n > 20 {
        return Err(Error::BoundExceeded(n));
    }
    let mut memo: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut f = 0;
    for w in 0..1u32 << n {
        let word: Vec<u8> = (0..n).map(|i| ((w >> (n - 1 - i)) & 1) as u8).collect();
        let steps = min_steps_memo(&word, &mut memo, bound)?;
        f = f.max(steps);
    }
    Ok(f)
}

fn min_steps_memo(w: &[u8], memo: &mut HashMap<Vec<u8>, usize>, bound: usize) -> Result<usize> {
    if let Some(&s) = memo.get(w) {
        return Ok(s);
    }
    if memo.len() > bound {
        return Err(Error::BoundExceeded(memo.len()));
    }
    let n = w.len();
    let mut best: Option<usize> = None;
    for len in 1..=n / 2 {
        for i in 0..=n - 2 * len {
            if w[i..i + len] == w[i + len..i + 2 * len] {
                let mut child = w.to_vec();
                child.drain(i + len..i + 2 * len);
                let s = 1 + min_steps_memo(&child, memo, bound)?;
                best = Some(best.map_or(s, |b| b.min(s)));
            }
        }
    }
    let steps = best.unwrap_or(0);
    memo.insert(w.to_vec(), steps);
    Ok(steps)
}

/// Result of a bounded expressiveness search; "not found" is a value, since
/// the search proves nothing beyond its depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpressiveSearch {
    FoundAtDepth(usize),
    NotFoundWithinBound(usize),
}

/// Does some descendant of `x` within `depth_bound` duplication steps contain
/// `y` as a substring? Bounded BFS with `state_bound` on the visited set.
pub fn fully_expressive_search(
    x: &Seq,
    rule: &DupRule,
    y: &Seq,
    depth_bound: usize,
    state_bound: usize,
) -> Result<ExpressiveSearch> {
    let target = y.symbols();
    let contains = |w: &[u8]| w.windows(target.len().max(1)).any(|win| win == target);
    if target.is_empty() || contains(x.symbols()) {
        return Ok(ExpressiveSearch::FoundAtDepth(0));
    }
    let mut frontier: BTreeSet<Vec<u8>> = BTreeSet::from([x.symbols().to_vec()]);
    for depth in 1..=depth_bound {
        let mut next = BTreeSet::new();
        for w in &frontier {
            step_children(&x.with(w.clone()), rule, &mut next)?;
            if next.len() > state_bound {
                return Err(Error::BoundExceeded(next.len()));
            }
        }
        if next.iter().any(|w| contains(w)) {
            return Ok(ExpressiveSearch::FoundAtDepth(depth));
        }
        frontier = next;
    }
    Ok(ExpressiveSearch::NotFoundWithinBound(depth_bound))
}

// ---------------------------------------------------------------------------
// Irreducible sequences and the duplication-correcting code
// ---------------------------------------------------------------------------

/// State for the transfer-matrix style count: appending a symbol can only
/// complete a length-2k tandem window, so the last 2k−1 symbols suffice.
type IrrMemo = HashMap<(Vec<u8>, usize), u128>;

fn append_ok(state: &[u8], s: u8, k: usize) -> bool {
    if state.len() < 2 * k - 1 {
        return true;
    }
    // The candidate window is w + s; appending is fine unless its halves match.
    let w = &state[state.len() - (2 * k - 1)..];
    let repeat = (0..k - 1).all(|i| w[i] == w[i + k]) && w[k - 1] == s;
    !repeat
}

fn completions(state: &[u8], remaining: usize, q: u8, k: usize, memo: &mut IrrMemo) -> u128 {
    if remaining == 0 {
        return 1;
    }
    let key = (state.to_vec(), remaining);
    if let Some(&c) = memo.get(&key) {
        return c;
    }
    let mut total = 0u128;
    for s in 0..q {
        if append_ok(state, s, k) {
            let mut next = state.to_vec();
            next.push(s);
            if next.len() > 2 * k - 1 {
                next.remove(0);
            }
            total += completions(&next, remaining - 1, q, k, memo);
        }
    }
    memo.insert(key, total);
    total
}

/// Number of length-n words over ℤ_q with no tandem repeat of length k
/// (i.e. no window ww with |w| = k).
pub fn irreducible_count(n: usize, q: u8, k: usize) -> Result<u128> {
    if q < 2 || k == 0 {
        return Err(Error::InvalidInput("need q ≥ 2 and k ≥ 1".into()));
    }
    if n > 96 || (n as u32) * (q as u32).ilog2().max(1) > 120 {
        return Err(Error::BoundExceeded(n));
    }
    let mut memo = IrrMemo::new();
    Ok(completions(&[], n, q, k, &mut memo))
}

/// (1/n)·log₂ of the irreducible count — the rate of the duplication code.
pub fn irreducible_rate(n: usize, q: u8, k: usize) -> Result<f64> {
    let c = irreducible_count(n, q, k)?;
    Ok((c as f64).log2() / n as f64)
}

/// Bits the irreducible codebook of length n can carry.
pub fn dup_code_bits(n: usize, q: u8, k: usize) -> Result<usize> {
    let c = irreducible_count(n, q, k)?;
    if c < 2 {
        return Err(Error::InfeasibleBudget("irreducible codebook carries no data".into()));
    }
    Ok((128 - c.leading_zeros() - 1) as usize)
}

/// The rank-th irreducible word of length n in lexicographic order.
pub fn irreducible_unrank(mut rank: u128, n: usize, q: u8, k: usize) -> Result<Vec<u8>> {
    let total = irreducible_count(n, q, k)?;
    if rank >= total {
        return Err(Error::InvalidInput(format!("rank {rank} out of {total}")));
    }
    let mut memo = IrrMemo::new();
    let mut state: Vec<u8> = Vec::new();
    let mut word = Vec::with_capacity(n);
    for pos in 0..n {
        for s in 0..q {
            if !append_ok(&state, s, k) {
                continue;
            }
            let mut next = state.clone();
            next.push(s);
            if next.len() > 2 * k - 1 {
                next.remove(0);
            }
            let c = completions(&next, n - pos - 1, q, k, &mut memo);
            if rank < c {
                word.push(s);
                state = next;
                break;
            }
            rank -= c;
        }
    }
    debug_assert_eq!(word.len(), n);
    Ok(word)
}

/// Lexicographic rank of an irreducible word.
pub fn irreducible_rank(word: &[u8], q: u8, k: usize) -> Result<u128> {
    let n = word.len();
    irreducible_count(n, q, k)?; // validates bounds
    let mut memo = IrrMemo::new();
    let mut state: Vec<u8> = Vec::new();
    let mut rank = 0u128;
    for (pos, &sym) in word.iter().enumerate() {
        if !append_ok(&state, sym, k) {
            return Err(Error::InvalidInput(format!(
                "word has a length-{k} tandem repeat ending at position {}",
                pos + 1
            )));
        }
        for s in 0..sym {
            if append_ok(&state, s, k) {
                let mut next = state.clone();
                next.push(s);
                if next.len() > 2 * k - 1 {
                    next.remove(0);
                }
                rank += completions(&next, n - pos - 1, q, k, &mut memo);
            }
        }
        state.push(sym);
        if state.len() > 2 * k - 1 {
            state.remove(0);
        }
    }
    Ok(rank)
}

/// Encodes a bit string as an irreducible word of length n. The codebook is
/// the full irreducible set; any number of fixed-k tandem duplications is
/// correctable by [`dup_code_decode`].
pub fn dup_code_encode(data: &[u8], n: usize, q: u8, k: usize) -> Result<Vec<u8>> {
    let bits = dup_code_bits(n, q, k)?;
    if data.len() != bits {
        return Err(Error::InvalidInput(format!("expected {bits} data bits, got {}", data.len())));
    }
    let rank = data.iter().fold(0u128, |acc, &b| acc << 1 | u128::from(b));
    irreducible_unrank(rank, n, q, k)
}

/// Decodes by de-duplicating to the unique root. A root of the wrong length
/// means the input is outside the channel model.
pub fn dup_code_decode(y: &[u8], n: usize, q: u8, k: usize) -> Result<Vec<u8>> {
    let root = tandem_root_symbols(y, k, q)?;
    if root.len() != n {
        return Err(Error::ChannelModelViolation(format!(
            "root has length {}, codebook expects {n}",
            root.len()
        )));
    }
    Ok(root)
}

/// Recovers the data bits behind a received word.
pub fn dup_code_decode_data(y: &[u8], n: usize, q: u8, k: usize) -> Result<Vec<u8>> {
    let root = dup_code_decode(y, n, q, k)?;
    let rank = irreducible_rank(&root, q, k)?;
    let bits = dup_code_bits(n, q, k)?;
    if rank >> bits != 0 {
        return Err(Error::ChannelModelViolation(format!(
            "root ranks at {rank}, beyond the {bits}-bit codebook"
        )));
    }
    Ok((0..bits).rev().map(|i| ((rank >> i) & 1) as u8).collect())
}
