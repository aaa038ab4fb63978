//! Regression harness over the worked examples: every hand-checkable value
//! from the toolkit's source material, computed by the real implementations
//! and compared against its expected rendering.
//!
//! The table powers the CLI `examples` subcommand and the acceptance gate.
//! A deliberate-corruption knob ([`CheckConfig::vt_modulus_offset`]) exists
//! so the harness itself can be tested: shifting the VT modulus must fail
//! exactly the VT row and nothing else.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::seqcore::{
    self, deletion_ball, repetition3_decode, repetition3_encode, substitution_ball, Alphabet,
};
use crate::{dup, multidel, vt};

#[derive(Debug, Clone, Copy, Default)]
pub struct CheckConfig {
    /// Added to the VT modulus n+1 when re-verifying the decoded word's
    /// syndrome; nonzero values are for mutation-testing the harness.
    pub vt_modulus_offset: usize,
}

/// One worked example: computed vs. expected, both rendered as text.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

fn row(name: &str, expected: impl Into<String>, actual: impl Into<String>) -> CheckRow {
    let expected = expected.into();
    let actual = actual.into();
    let pass = expected == actual;
    CheckRow { name: name.to_string(), expected, actual, pass }
}

fn bits(s: &str) -> Vec<u8> {
    s.bytes().map(|b| b - b'0').collect()
}

fn render(v: &[u8]) -> String {
    v.iter().map(|&b| char::from(b'0' + b)).collect()
}

fn render_ball(members: &BTreeSet<seqcore::Seq>) -> String {
    let items: Vec<String> = members.iter().map(|s| s.render()).collect();
    format!("{{{}}}", items.join(", "))
}

/// Recomputes every worked example and reports one row each.
pub fn reference_table(cfg: &CheckConfig) -> Vec<CheckRow> {
    let binary = Alphabet::binary();
    let dna = Alphabet::dna();
    let mut rows = Vec::new();

    // VT single-deletion decode, re-verified under the (possibly corrupted)
    // modulus so the harness is sensitive to it.
    {
        let params = vt::VtParams::new(6, 0).unwrap();
        let actual = match vt::decode(&bits("00110"), &params) {
            Ok(c) => {
                let m = 7 + cfg.vt_modulus_offset;
                let synd: usize =
                    c.iter().enumerate().map(|(i, &b)| (i + 1) * b as usize).sum::<usize>() % m;
                if synd == 0 {
                    render(&c)
                } else {
                    format!("{} [syndrome {synd} mod {m}]", render(&c))
                }
            }
            Err(e) => format!("error: {e}"),
        };
        rows.push(row("vt decode 00110 (n=6, a=0)", "001100", actual));
    }

    // Weighted modulo sums of 101001 and the two-deletion decode.
    {
        let actual = match multidel::weighted_sums(&bits("101001"), 2) {
            Ok(s) => {
                let m = multidel::moduli(2, 6).unwrap();
                format!(
                    "({}, {}, {}) mod ({}, {}, {})",
                    s.residues[0], s.residues[1], s.residues[2], m[0], m[1], m[2]
                )
            }
            Err(e) => format!("error: {e}"),
        };
        rows.push(row("weighted sums of 101001", "(3, 28, 106) mod (12, 72, 432)", actual));

        let sums = multidel::weighted_sums(&bits("101001"), 2);
        let actual = match sums.and_then(|s| multidel::decode_constrained(&bits("1001"), 6, &s, 2)) {
            Ok(c) => render(&c),
            Err(e) => format!("error: {e}"),
        };
        rows.push(row("two-deletion decode of 1001 (n=6)", "101001", actual));
    }

    // The four duplication flavours on ACCTAGGA, window CTA.
    {
        let x = dna.parse("ACCTAGGA").unwrap();
        let cases: [(&str, dup::DupKind, Option<usize>, &str); 4] = [
            ("tandem", dup::DupKind::Tandem, None, "ACCTACTAGGA"),
            ("end", dup::DupKind::End, None, "ACCTAGGACTA"),
            ("interspersed", dup::DupKind::Interspersed, Some(7), "ACCTAGGCTAA"),
            ("reverse-complement", dup::DupKind::ReverseComplement, None, "ACCTATAGGGA"),
        ];
        for (label, kind, at, expected) in cases {
            let rule = dup::DupRule::new(kind, 3).unwrap();
            let actual = match dup::apply_dup(&x, &rule, 2, at) {
                Ok(y) => y.render(),
                Err(e) => format!("error: {e}"),
            };
            rows.push(row(&format!("{label} duplication of CTA in ACCTAGGA"), expected, actual));
        }
    }

    // Unbounded tandem roots of 210121010.
    {
        let x = Alphabet::digits(3).unwrap().parse("210121010").unwrap();
        let actual = match dup::roots_unbounded_tandem(&x, 1 << 16) {
            Ok(report) => {
                let names: Vec<String> = report.roots.iter().map(|r| r.render()).collect();
                format!("{{{}}}", names.join(", "))
            }
            Err(e) => format!("error: {e}"),
        };
        rows.push(row("roots of 210121010", "{210, 2101210}", actual));
    }

    // Bits-to-nucleotides mapping of 00101001.
    {
        let b = binary.parse("00101001").unwrap();
        let actual = match seqcore::bits_to_dna(&b) {
            Ok(d) => match seqcore::dna_to_bits(&d) {
                Ok(back) => format!("{} -> {}", d.render(), back.render()),
                Err(e) => format!("error: {e}"),
            },
            Err(e) => format!("error: {e}"),
        };
        rows.push(row("bits 00101001 as DNA and back", "AGGC -> 00101001", actual));
    }

    // Triple-repetition: clean encode plus majority correction of the
    // corrupted read.
    {
        let data = binary.parse("01001").unwrap();
        rows.push(row(
            "repetition-3 encode 01001",
            "000111000000111",
            repetition3_encode(&data).render(),
        ));
        let noisy = binary.parse("100110000001111").unwrap();
        let actual = match repetition3_decode(&noisy) {
            Ok(d) => d.render(),
            Err(e) => format!("error: {e}"),
        };
        rows.push(row("repetition-3 decode 100110000001111", "01001", actual));
    }

    // Error-ball sets.
    {
        let b = substitution_ball(&binary.parse("1001").unwrap(), 1);
        rows.push(row(
            "substitution ball of 1001",
            "{0001, 1000, 1001, 1011, 1101}",
            render_ball(&b.members),
        ));
        let b = deletion_ball(&binary.parse("0000").unwrap(), 1).unwrap();
        rows.push(row("deletion ball of 0000", "{000, 0000}", render_ball(&b.members)));
        let b = deletion_ball(&binary.parse("1011").unwrap(), 1).unwrap();
        rows.push(row("deletion ball of 1011", "{011, 101, 111, 1011}", render_ball(&b.members)));
    }

    rows
}

pub fn all_pass(rows: &[CheckRow]) -> bool {
    rows.iter().all(|r| r.pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_table_passes() {
        let rows = reference_table(&CheckConfig::default());
        for r in &rows {
            assert!(r.pass, "{}: expected {:?}, got {:?}", r.name, r.expected, r.actual);
        }
        assert!(rows.iter().any(|r| r.name.contains("weighted sums")));
    }

    #[test]
    fn corrupted_vt_modulus_fails_only_vt_rows() {
        let rows = reference_table(&CheckConfig { vt_modulus_offset: 1 });
        for r in &rows {
            let is_vt = r.name.starts_with("vt ");
            assert_eq!(!r.pass, is_vt, "{}: pass={}", r.name, r.pass);
        }
    }
}
