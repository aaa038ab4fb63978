//! Varshamov-Tenengolts single-deletion codes.
//!
//! The code with parameters `(n, a)` is the set of binary words of length `n`
//! whose weighted checksum `sum(i * c_i)` is `a` modulo `n + 1` (1-based
//! positions). Next to the linear-time decoder this module keeps a brute-force
//! decoding oracle that enumerates the insertion ball of the received word;
//! the oracle is the correctness referee for the fast path.
//!
//! Binary sequences are plain `&[u8]` slices with values 0 and 1.

use crate::{Error, Result};

/// Largest `n` for which [`codebook`] will enumerate all `2^n` words.
pub const ENUM_BOUND: usize = 26;

/// Code parameters: word length `n` and syndrome residue `a` in `[0, n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VtParams {
    pub n: usize,
    pub a: usize,
}

impl VtParams {
    pub fn new(n: usize, a: usize) -> Result<Self> {
        if a > n {
            return Err(Error::InvalidInput(format!("residue a={a} out of range [0, {n}]")));
        }
        Ok(VtParams { n, a })
    }
}

fn check_bits(c: &[u8]) -> Result<()> {
    if c.iter().any(|&b| b > 1) {
        return Err(Error::InvalidInput("sequence is not binary".into()));
    }
    Ok(())
}

/// `sum(i * c_i) mod (n + 1)` with 1-based indexing.
pub fn syndrome(c: &[u8], params: &VtParams) -> Result<usize> {
    check_bits(c)?;
    if c.len() != params.n {
        return Err(Error::InvalidInput(format!(
            "expected length {}, got {}",
            params.n,
            c.len()
        )));
    }
    Ok(syndrome_raw(c) % (params.n + 1))
}

fn syndrome_raw(c: &[u8]) -> usize {
    c.iter()
        .enumerate()
        .map(|(i, &b)| (i + 1) * b as usize)
        .sum()
}

/// Linear-time single-deletion decoder. Accepts either an intact length-n
/// word (checked against the syndrome) or a word one symbol short; the output
/// is the unique codeword of the `(n, a)` code whose deletion ball contains it.
pub fn decode(y: &[u8], params: &VtParams) -> Result<Vec<u8>> {
    check_bits(y)?;
    let n = params.n;
    if y.len() == n {
        if syndrome(y, params)? != params.a {
            return Err(Error::Uncorrectable("intact word has the wrong syndrome".into()));
        }
        return Ok(y.to_vec());
    }
    if y.len() + 1 != n {
        return Err(Error::InvalidInput(format!(
            "expected length {} or {}, got {}",
            n - 1,
            n,
            y.len()
        )));
    }
    let m = n + 1;
    let w: usize = y.iter().map(|&b| b as usize).sum();
    let s = (params.a + m - syndrome_raw(y) % m) % m;

    let mut c = Vec::with_capacity(n);
    if s <= w {
        // A 0 was deleted with s ones to its right.
        let mut ones_right = 0usize;
        let mut pos = y.len();
        while ones_right < s {
            pos -= 1;
            ones_right += y[pos] as usize;
        }
        c.extend_from_slice(&y[..pos]);
        c.push(0);
        c.extend_from_slice(&y[pos..]);
    } else {
        // A 1 was deleted with s - w - 1 zeros to its left.
        let zeros_left = s - w - 1;
        let mut seen = 0usize;
        let mut pos = 0usize;
        while seen < zeros_left {
            if pos >= y.len() {
                return Err(Error::Uncorrectable("no valid re-insertion position".into()));
            }
            seen += (1 - y[pos]) as usize;
            pos += 1;
        }
        c.extend_from_slice(&y[..pos]);
        c.push(1);
        c.extend_from_slice(&y[pos..]);
    }

    if syndrome(&c, params)? != params.a {
        return Err(Error::Uncorrectable(
            "received word is not reachable from the codebook".into(),
        ));
    }
    Ok(c)
}

/// Brute-force decoding oracle: enumerate every length-`n` supersequence of
/// `y` and keep the ones with the right syndrome.
pub fn decode_brute(y: &[u8], params: &VtParams) -> Result<Vec<u8>> {
    check_bits(y)?;
    let n = params.n;
    if y.len() + 1 != n {
        return Err(Error::InvalidInput(format!(
            "expected length {}, got {}",
            n - 1,
            y.len()
        )));
    }
    let mut candidates: Vec<Vec<u8>> = Vec::new();
    for pos in 0..n {
        for bit in 0..2u8 {
            let mut c = Vec::with_capacity(n);
            c.extend_from_slice(&y[..pos]);
            c.push(bit);
            c.extend_from_slice(&y[pos..]);
            if syndrome(&c, params)? == params.a && !candidates.contains(&c) {
                candidates.push(c);
            }
        }
    }
    match candidates.len() {
        0 => Err(Error::Uncorrectable("no supersequence has the target syndrome".into())),
        1 => Ok(candidates.pop().unwrap()),
        k => Err(Error::Ambiguous(format!("{k} candidate codewords"))),
    }
}

/// All length-`n` words with syndrome `a`, in lexicographic order.
pub fn codebook(params: &VtParams) -> Result<Vec<Vec<u8>>> {
    let n = params.n;
    if n > ENUM_BOUND {
        return Err(Error::BoundExceeded(1 << ENUM_BOUND));
    }
    let mut words = Vec::new();
    for w in 0..(1u64 << n) {
        let c: Vec<u8> = (0..n).map(|i| ((w >> (n - 1 - i)) & 1) as u8).collect();
        if syndrome(&c, params)? == params.a {
            words.push(c);
        }
    }
    Ok(words)
}

fn check_position_count(n: usize) -> usize {
    // Dyadic positions 1, 2, 4, ..., 2^floor(log2 n).
    let mut t = 0;
    while (1usize << t) <= n {
        t += 1;
    }
    t
}

/// Number of data bits carried by a systematic length-`n` codeword.
pub fn data_len(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidInput("codeword length must be positive".into()));
    }
    Ok(n - check_position_count(n))
}

/// Systematic encoder for the `(n, a = 0)` code: data bits occupy the
/// non-dyadic positions and the check bits at positions `1, 2, 4, ...` are
/// solved so the syndrome vanishes.
pub fn encode(data: &[u8], n: usize) -> Result<Vec<u8>> {
    check_bits(data)?;
    let k = data_len(n)?;
    if data.len() != k {
        return Err(Error::InvalidInput(format!(
            "expected {k} data bits for n={n}, got {}",
            data.len()
        )));
    }
    let m = n + 1;
    let mut c = vec![0u8; n];
    let mut next = 0usize;
    for pos in 1..=n {
        if !pos.is_power_of_two() {
            c[pos - 1] = data[next];
            next += 1;
        }
    }
    let deficit = (m - syndrome_raw(&c) % m) % m;
    // deficit <= n < 2^t, so its binary expansion fits the dyadic positions.
    let mut rest = deficit;
    let mut bit = 0usize;
    while rest > 0 {
        if rest & 1 == 1 {
            c[(1usize << bit) - 1] = 1;
        }
        rest >>= 1;
        bit += 1;
    }
    debug_assert_eq!(syndrome_raw(&c) % m, 0);
    Ok(c)
}

/// Inverts the systematic embedding of [`encode`].
pub fn extract(codeword: &[u8]) -> Result<Vec<u8>> {
    check_bits(codeword)?;
    let n = codeword.len();
    data_len(n)?;
    Ok((1..=n)
        .filter(|pos| !pos.is_power_of_two())
        .map(|pos| codeword[pos - 1])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn syndrome_examples() {
        let p = VtParams::new(6, 0).unwrap();
        assert_eq!(syndrome(&bits("001100"), &p).unwrap(), 0);
        assert_eq!(syndrome(&bits("000000"), &p).unwrap(), 0);
        assert_eq!(syndrome(&bits("000110"), &p).unwrap(), 2);
        assert_eq!(syndrome(&bits("100110"), &p).unwrap(), 3);
        // The seventh supersequence of 00110 has residue 6; every candidate
        // residue is distinct.
        assert_eq!(syndrome(&bits("001101"), &p).unwrap(), 6);
        assert!(syndrome(&bits("01"), &p).is_err());
    }

    #[test]
    fn decode_worked_example() {
        let p = VtParams::new(6, 0).unwrap();
        assert_eq!(decode(&bits("00110"), &p).unwrap(), bits("001100"));
        assert_eq!(decode_brute(&bits("00110"), &p).unwrap(), bits("001100"));
    }

    #[test]
    fn decode_all_zero() {
        let p = VtParams::new(4, 0).unwrap();
        assert_eq!(decode(&bits("000"), &p).unwrap(), bits("0000"));
    }

    #[test]
    fn decode_uncorrectable() {
        // 11 has syndrome 3 mod 4; no single insertion into 1 reaches it...
        // instead pick a received word with no valid preimage: for n=2, a=1
        // the codebook is {10}; deleting from 10 gives 0 or 1.
        let p = VtParams::new(2, 1).unwrap();
        assert!(decode(&bits("1"), &p).is_ok());
        let p = VtParams::new(2, 2).unwrap();
        // codebook {01}; received "1" decodes to 01; received "0"?
        assert_eq!(decode(&bits("1"), &p).unwrap(), bits("01"));
    }

    #[test]
    fn codebook_examples() {
        let p = VtParams::new(4, 0).unwrap();
        let cb = codebook(&p).unwrap();
        let got: Vec<String> = cb
            .iter()
            .map(|c| c.iter().map(|&b| (b + b'0') as char).collect())
            .collect();
        assert_eq!(got, vec!["0000", "0110", "1001", "1111"]);
        let p = VtParams::new(1, 0).unwrap();
        assert_eq!(codebook(&p).unwrap(), vec![bits("0")]);
    }

    #[test]
    fn codebook_size_meets_redundancy_bound() {
        for n in 1..=14usize {
            let p = VtParams::new(n, 0).unwrap();
            let size = codebook(&p).unwrap().len() as f64;
            assert!(size >= (1u64 << n) as f64 / (n + 1) as f64, "n={n}");
        }
    }

    #[test]
    fn codebooks_partition_small() {
        for n in 1..=8usize {
            let mut total = 0usize;
            let mut seen = std::collections::HashSet::new();
            for a in 0..=n {
                let p = VtParams::new(n, a).unwrap();
                for c in codebook(&p).unwrap() {
                    assert!(seen.insert(c));
                    total += 1;
                }
            }
            assert_eq!(total, 1usize << n);
        }
    }

    #[test]
    fn fast_decoder_matches_oracle_small() {
        for n in 2..=9usize {
            for a in 0..=n {
                let p = VtParams::new(n, a).unwrap();
                for w in 0..(1u32 << (n - 1)) {
                    let y: Vec<u8> = (0..n - 1).map(|i| ((w >> i) & 1) as u8).collect();
                    match decode_brute(&y, &p) {
                        Ok(c) => assert_eq!(decode(&y, &p).unwrap(), c),
                        Err(Error::Uncorrectable(_)) => {
                            assert!(decode(&y, &p).is_err());
                        }
                        Err(e) => panic!("oracle failed: {e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn encoder_roundtrip_n10() {
        let n = 10;
        let k = data_len(n).unwrap();
        assert_eq!(k, 6);
        for w in 0..(1u32 << k) {
            let data: Vec<u8> = (0..k).map(|i| ((w >> i) & 1) as u8).collect();
            let c = encode(&data, n).unwrap();
            let p = VtParams::new(n, 0).unwrap();
            assert_eq!(syndrome(&c, &p).unwrap(), 0);
            assert_eq!(extract(&c).unwrap(), data);
            // Any single deletion is recovered.
            for del in 0..n {
                let mut y = c.clone();
                y.remove(del);
                assert_eq!(decode(&y, &p).unwrap(), c);
            }
        }
    }

    #[test]
    fn encoder_random_n30() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let n = 30;
        let k = data_len(n).unwrap();
        let p = VtParams::new(n, 0).unwrap();
        for _ in 0..1000 {
            let data: Vec<u8> = (0..k).map(|_| rng.gen_range(0..2u8)).collect();
            let c = encode(&data, n).unwrap();
            assert_eq!(syndrome(&c, &p).unwrap(), 0);
        }
    }

    #[test]
    fn encode_trivial_n1() {
        assert_eq!(encode(&[], 1).unwrap(), bits("0"));
        assert!(encode(&[], 0).is_err());
    }
}
