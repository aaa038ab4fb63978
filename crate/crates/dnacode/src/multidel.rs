//! Multiple-deletion correction for binary sequences.
//!
//! Building blocks, bottom to top:
//!
//! - indicator vectors marking the `1 -> 0` and `0 -> 1` transitions of a
//!   word; they always have at least one 0 between any two 1's and jointly
//!   determine the word;
//! - weighted modular checksums that protect a gap-constrained word against
//!   `t` deletions, with weights `w_0(i) = 1` and `w_p(i) = sum_{j<=i} j^p`
//!   for `p >= 1`. For `t = 2` the moduli are `2 n^(p+1)` for `p = 0, 1, 2`;
//!   in general `3 t n^(p+1)` for `p = 0, ..., 6t`;
//! - a `(t+1)`-fold repetition code that survives `t` deletions by rounding
//!   run lengths up;
//! - the full pipeline: data, then the repetition-protected checksums of both
//!   indicator vectors of the data.
//!
//! Decoders are exhaustive candidate enumerations; the constructions prove
//! uniqueness, so more than one surviving candidate raises an alarm.

use crate::{Error, Result};

/// Marks positions where a 1 is followed by a 0, with the boundary convention
/// that the virtual symbol past the end is 1.
pub fn indicator10(c: &[u8]) -> Vec<u8> {
    let n = c.len();
    (0..n)
        .map(|i| {
            let next = if i + 1 < n { c[i + 1] } else { 1 };
            u8::from(c[i] == 1 && next == 0)
        })
        .collect()
}

/// Marks positions where a 0 is followed by a 1, with the same boundary
/// convention (virtual symbol 1). The convention makes the indicator pair
/// invertible for every word including the constant ones.
pub fn indicator01(c: &[u8]) -> Vec<u8> {
    let n = c.len();
    (0..n)
        .map(|i| {
            let next = if i + 1 < n { c[i + 1] } else { 1 };
            u8::from(c[i] == 0 && next == 1)
        })
        .collect()
}

/// Recovers the unique word with the given indicator pair.
///
/// Scanning right to left, a mark pins the symbol at its position and every
/// unmarked position copies the value implied by the nearest mark to its
/// right; with no marks at all the word is all-ones (the only word whose pair
/// is all-zero under the boundary convention).
pub fn reconstruct_from_indicators(ind10: &[u8], ind01: &[u8]) -> Result<Vec<u8>> {
    if ind10.len() != ind01.len() {
        return Err(Error::Inconsistent("indicator length mismatch".into()));
    }
    let n = ind10.len();
    let mut c = vec![0u8; n];
    let mut current = 1u8;
    for i in (0..n).rev() {
        match (ind10[i], ind01[i]) {
            (1, 1) => return Err(Error::Inconsistent(format!("both marks at position {}", i + 1))),
            (1, 0) => {
                // c[i] = 1 and the next symbol (or boundary) must look like 0.
                if i + 1 < n && c[i + 1] != 0 {
                    return Err(Error::Inconsistent(format!("1->0 mark at {} unmet", i + 1)));
                }
                if i + 1 == n {
                    return Err(Error::Inconsistent("1->0 mark at the boundary".into()));
                }
                c[i] = 1;
                current = 1;
            }
            (0, 1) => {
                if i + 1 < n && c[i + 1] != 1 {
                    return Err(Error::Inconsistent(format!("0->1 mark at {} unmet", i + 1)));
                }
                c[i] = 0;
                current = 0;
            }
            _ => c[i] = current,
        }
    }
    if indicator10(&c) != ind10 || indicator01(&c) != ind01 {
        return Err(Error::Inconsistent("indicator pair has no preimage".into()));
    }
    Ok(c)
}

/// True iff `c` has at least `gap` zeros between any two ones.
pub fn satisfies_gap(c: &[u8], gap: usize) -> bool {
    let mut last_one: Option<usize> = None;
    for (i, &b) in c.iter().enumerate() {
        if b == 1 {
            if let Some(j) = last_one {
                if i - j <= gap {
                    return false;
                }
            }
            last_one = Some(i);
        }
    }
    true
}

/// Minimum zero gap required between ones for the `t`-deletion construction.
pub fn required_gap(t: usize) -> usize {
    t.saturating_sub(1).max(1)
}

/// The checksum vector protecting a gap-constrained word of length `n`
/// against `t` deletions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSums {
    pub t: usize,
    pub n: usize,
    pub residues: Vec<u128>,
}

///// Moduli for the `t`-deletion sums: `2 n^(p+1)` for `p = 0..=2` when `t = 2`
/// and `3 t n^(p+1)` for `p = 0..=6t` otherwise.
pub fn moduli(t: usize, n: usize) -> Result<Vec<u128>> {
    if t < 2 {
        return Err(Error::InvalidInput("weighted sums need t >= 2".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    let (factor, p_max) = if t == 2 { (2u128, 2usize) } else { (3 * t as u128, 6 * t) };
    let mut result = Vec::with_capacity(p_max + 1);
    let mut power = 1u128;
    for _p in 0..=p_max {
        power = power
            .checked_mul(n as u128)
            .ok_or_else(|| Error::BoundExceeded(n))?;
        let m = factor
            .checked_mul(power)
            .ok_or_else(|| Error::BoundExceeded(n))?;
        result.push(m);
    }
    Ok(result)
}

/// Cumulative power weights: `w_0(i) = 1`, `w_p(i) = sum_{j<=i} j^p` for
/// `p >= 1`, with `i` 1-based.
fn weight_table(p_max: usize, n: usize) -> Vec<Vec<u128>> {
    let mut table = Vec::with_capacity(p_max + 1);
    table.push(vec![1u128; n]);
    for p in 1..=p_max {
        let mut row = Vec::with_capacity(n);
        let mut acc = 0u128;
        for i in 1..=n as u128 {
            acc += i.pow(p as u32);
            row.push(acc);
        }
        table.push(row);
    }
    table
}

/// Weighted modular checksums of a gap-constrained word.
pub fn weighted_sums(c: &[u8], t: usize) -> Result<WeightedSums> {
    if !satisfies_gap(c, required_gap(t)) {
        return Err(Error::InvalidInput(format!(
            "sequence violates the gap-{} constraint",
            required_gap(t)
        )));
    }
    Ok(weighted_sums_unchecked(c, t)?)
}

/// Same as [`weighted_sums`] but without the gap check; used for arbitrary
/// words in tests of linearity.
pub fn weighted_sums_unchecked(c: &[u8], t: usize) -> Result<WeightedSums> {
    let n = c.len();
    let mods = moduli(t, n)?;
    let weights = weight_table(mods.len() - 1, n);
    let residues = mods
        .iter()
        .enumerate()
        .map(|(p, &m)| {
            let mut acc = 0u128;
            for (i, &b) in c.iter().enumerate() {
                if b == 1 {
                    acc = (acc + weights[p][i]) % m;
                }
            }
            acc
        })
        .collect();
    Ok(WeightedSums { t, n, residues })
}

/// Enumerates every way of inserting `count` bits into `y` at full length
/// `n`, calling `visit` for each candidate (candidates may repeat).
fn for_each_supersequence(y: &[u8], n: usize, visit: &mut impl FnMut(&[u8])) {
    let missing = n - y.len();
    let mut buf = vec![0u8; n];
    fn rec(
        y: &[u8],
        buf: &mut Vec<u8>,
        pos: usize,
        used: usize,
        missing: usize,
        visit: &mut impl FnMut(&[u8]),
    ) {
        let remaining = buf.len() - pos;
        let left = y.len() - used;
        if remaining == left {
            for (i, &b) in y[used..].iter().enumerate() {
                buf[pos + i] = b;
            }
            visit(buf);
            return;
        }
        if left > 0 {
            buf[pos] = y[used];
            rec(y, buf, pos + 1, used + 1, missing, visit);
        }
        // Insert a free bit here.
        for bit in 0..2u8 {
            buf[pos] = bit;
            rec(y, buf, pos + 1, used, missing, visit);
        }
    }
    if missing == 0 {
        visit(y);
        return;
    }
    rec(y, &mut buf, 0, 0, missing, visit);
}

/// Recovers the unique gap-constrained length-`n` supersequence of `y` whose
/// checksums match `sums`. Zero candidates means the input is uncorrectable;
/// more than one is a construction-violation alarm.
pub fn decode_constrained(y: &[u8], n: usize, sums: &WeightedSums, t: usize) -> Result<Vec<u8>> {
    if y.len() > n || n - y.len() > t {
        return Err(Error::InvalidInput(format!(
            "received length {} incompatible with n={n}, t={t}",
            y.len()
        )));
    }
    let gap = required_gap(t);
    let mut found: Option<Vec<u8>> = None;
    let mut ambiguous = false;
    for_each_supersequence(y, n, &mut |c| {
        if !satisfies_gap(c, gap) {
            return;
        }
        if let Ok(s) = weighted_sums_unchecked(c, t) {
            if s.residues == sums.residues {
                match &found {
                    None => found = Some(c.to_vec()),
                    Some(prev) if prev.as_slice() != c => ambiguous = true,
                    _ => {}
                }
            }
        }
    });
    if ambiguous {
        return Err(Error::Ambiguous("multiple constrained supersequences match".into()));
    }
    found.ok_or_else(|| Error::Uncorrectable("no constrained supersequence matches".into()))
}

/// Repeats every bit `t + 1` times.
pub fn repetition_del_encode(bits: &[u8], t: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(bits.len() * (t + 1));
    for &b in bits {
        out.extend(std::iter::repeat(b).take(t + 1));
    }
    out
}

/// Inverts [`repetition_del_encode`] after at most `t` deletions by rounding
/// every run length up to the nearest multiple of `t + 1`.
pub fn repetition_del_decode(noisy: &[u8], t: usize) -> Result<Vec<u8>> {
    let block = t + 1;
    let mut out = Vec::new();
    let mut removed = 0usize;
    let mut i = 0usize;
    while i < noisy.len() {
        let bit = noisy[i];
        let mut len = 0usize;
        while i < noisy.len() && noisy[i] == bit {
            len += 1;
            i += 1;
        }
        let rounded = len.div_ceil(block) * block;
        removed += rounded - len;
        if removed > t {
            return Err(Error::Uncorrectable(format!(
                "run rounding implies more than {t} deletions"
            )));
        }
        out.extend(std::iter::repeat(bit).take(rounded / block));
    }
    Ok(out)
}

/// Bit widths of the serialized residues for parameters `(t, n)`.
fn residue_widths(t: usize, n: usize) -> Result<Vec<usize>> {
    Ok(moduli(t, n)?
        .into_iter()
        .map(|m| (128 - (m - 1).leading_zeros()) as usize)
        .collect())
}

fn serialize_sums(sums: &WeightedSums) -> Result<Vec<u8>> {
    let widths = residue_widths(sums.t, sums.n)?;
    let mut bits = Vec::new();
    for (&r, &w) in sums.residues.iter().zip(&widths) {
        for b in (0..w).rev() {
            bits.push(((r >> b) & 1) as u8);
        }
    }
    Ok(bits)
}

fn deserialize_sums(bits: &[u8], t: usize, n: usize) -> Result<WeightedSums> {
    let widths = residue_widths(t, n)?;
    let total: usize = widths.iter().sum();
    if bits.len() != total {
        return Err(Error::InvalidInput("checksum framing error".into()));
    }
    let mut residues = Vec::with_capacity(widths.len());
    let mut pos = 0usize;
    for &w in &widths {
        let mut r = 0u128;
        for _ in 0..w {
            r = (r << 1) | bits[pos] as u128;
            pos += 1;
        }
        residues.push(r);
    }
    Ok(WeightedSums { t, n, residues })
}

/// Number of checksum bits (before repetition protection) in the `t`-deletion
/// pipeline for data length `n`: both indicator vectors' serialized sums.
pub fn checksum_bits(n: usize, t: usize) -> Result<usize> {
    Ok(residue_widths(t, n)?.iter().sum::<usize>() * 2)
}

/// Total codeword length of the pipeline for data length `n`.
pub fn codeword_len(n: usize, t: usize) -> Result<usize> {
    Ok(n + checksum_bits(n, t)? * (t + 1))
}

/// Encodes arbitrary data against `t` deletions: the data itself, followed by
/// the repetition-protected weighted sums of both of its indicator vectors.
pub fn encode_t_del(data: &[u8], t: usize) -> Result<Vec<u8>> {
    if data.is_empty() {
        return Err(Error::InvalidInput("empty data".into()));
    }
    if data.iter().any(|&b| b > 1) {
        return Err(Error::InvalidInput("data is not binary".into()));
    }
    let sums10 = weighted_sums(&indicator10(data), t)?;
    let sums01 = weighted_sums(&indicator01(data), t)?;
    let mut tail = serialize_sums(&sums10)?;
    tail.extend(serialize_sums(&sums01)?);
    let mut out = data.to_vec();
    out.extend(repetition_del_encode(&tail, t));
    Ok(out)
}

/// Decodes a pipeline codeword after at most `t` deletions, given the data
/// length `n`. Tries every split of the deletions between data and checksum
/// tail, enumerates data candidates against the recovered sums, and verifies
/// each survivor by re-encoding.
pub fn decode_t_del(noisy: &[u8], n: usize, t: usize) -> Result<Vec<u8>> {
    let full = codeword_len(n, t)?;
    if noisy.len() > full || full - noisy.len() > t {
        return Err(Error::InvalidInput(format!(
            "received length {} incompatible with n={n}, t={t}",
            noisy.len()
        )));
    }
    let deletions = full - noisy.len();
    let tail_bits = checksum_bits(n, t)?;
    let widths = residue_widths(t, n)?;
    let per_indicator: usize = widths.iter().sum();

    let mut result: Option<Vec<u8>> = None;
    let mut ambiguous = false;
    for d_data in 0..=deletions {
        let data_len = n - d_data;
        if data_len > noisy.len() {
            continue;
        }
        let (data_part, tail_part) = noisy.split_at(data_len);
        let tail = match repetition_del_decode(tail_part, t) {
            Ok(bits) => bits,
            Err(_) => continue,
        };
        if tail.len() != tail_bits {
            continue;
        }
        let sums10 = deserialize_sums(&tail[..per_indicator], t, n)?;
        let sums01 = deserialize_sums(&tail[per_indicator..], t, n)?;
        for_each_supersequence(data_part, n, &mut |c| {
            let i10 = indicator10(c);
            let i01 = indicator01(c);
            let ok = weighted_sums_unchecked(&i10, t)
                .map(|s| s.residues == sums10.residues)
                .unwrap_or(false)
                && weighted_sums_unchecked(&i01, t)
                    .map(|s| s.residues == sums01.residues)
                    .unwrap_or(false);
            if !ok {
                return;
            }
            // Final referee: the received word must really be a t-deletion
            // descendant of the re-encoded candidate.
            let reencoded = match encode_t_del(c, t) {
                Ok(w) => w,
                Err(_) => return,
            };
            if !crate::seqcore::is_subsequence(noisy, &reencoded) {
                return;
            }
            match &result {
                None => result = Some(c.to_vec()),
                Some(prev) if prev.as_slice() != c => ambiguous = true,
                _ => {}
            }
        });
    }
    if ambiguous {
        return Err(Error::Ambiguous("multiple data candidates survive".into()));
    }
    result.ok_or_else(|| Error::Uncorrectable("no data candidate matches the checksums".into()))
}
