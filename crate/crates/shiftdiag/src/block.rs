//! Blocks (finite words) stored as ASCII letter bytes, plus small word-combinatorics helpers.
//!
//! Letters are ASCII bytes so blocks print as the strings they denote; the binary
//! systems in this crate use `b'0'` and `b'1'`.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// A single letter of an alphabet, stored as its ASCII byte.
pub type Letter = u8;

/// A finite word over an alphabet.
pub type Block = Vec<Letter>;

/// The binary letter `0`.
pub const ZERO: Letter = b'0';
/// The binary letter `1`.
pub const ONE: Letter = b'1';

/// Renders a block as the string it denotes.
pub fn display(w: &[Letter]) -> String {
    String::from_utf8_lossy(w).into_owned()
}

/// Parses a block from its string form. Letters must be ASCII alphanumeric.
pub fn parse_block(s: &str) -> Result<Block> {
    if !s.bytes().all(|b| b.is_ascii_alphanumeric()) {
        return Err(Error::InvalidBlock(format!(
            "letters must be ASCII alphanumeric: {s:?}"
        )));
    }
    Ok(s.as_bytes().to_vec())
}

/// The other binary letter.
///
/// # Panics
/// Panics if `c` is not `b'0'` or `b'1'`.
pub fn dual(c: Letter) -> Letter {
    assert!(c == ZERO || c == ONE, "dual is defined on binary letters");
    c ^ 1
}

/// Drops the first letter.
pub fn tail(w: &[Letter]) -> &[Letter] {
    &w[1.min(w.len())..]
}

/// Canonical block order: by length, then lexicographic.
pub fn cmp_len_lex(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// True when the word reads the same in both directions.
pub fn is_palindrome(w: &[Letter]) -> bool {
    w.iter().eq(w.iter().rev())
}

/// Detects a factor of the form `B·B·b` inside `w`, where `B` is a nonempty
/// block and `b` is the first letter of `B` (a square prolonged by one letter).
pub fn has_bbb(w: &[Letter]) -> bool {
    let n = w.len();
    for l in 1..=n.saturating_sub(1) / 2 {
        for i in 0..=n.saturating_sub(2 * l + 1) {
            if w[i..i + l] == w[i + l..i + 2 * l] && w[i + 2 * l] == w[i] {
                return true;
            }
        }
    }
    false
}

/// Concatenates a block and a single letter.
pub fn extend(w: &[Letter], c: Letter) -> Block {
    let mut out = Vec::with_capacity(w.len() + 1);
    out.extend_from_slice(w);
    out.push(c);
    out
}

/// Concatenates a single letter and a block.
pub fn prepend(c: Letter, w: &[Letter]) -> Block {
    let mut out = Vec::with_capacity(w.len() + 1);
    out.push(c);
    out.extend_from_slice(w);
    out
}

/// Concatenates two blocks.
pub fn concat(a: &[Letter], b: &[Letter]) -> Block {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_round_trip() {
        let w = parse_block("0010").unwrap();
        assert_eq!(w, b"0010".to_vec());
        assert_eq!(display(&w), "0010");
        assert!(parse_block("01 0").is_err());
    }

    #[test]
    fn dual_swaps_binary_letters() {
        assert_eq!(dual(ZERO), ONE);
        assert_eq!(dual(ONE), ZERO);
    }

    #[test]
    fn tail_drops_first_letter() {
        assert_eq!(tail(b"0110"), b"110");
        assert_eq!(tail(b"0"), b"");
        assert_eq!(tail(b""), b"");
    }

    #[test]
    fn len_lex_order() {
        assert_eq!(cmp_len_lex(b"1", b"00"), Ordering::Less);
        assert_eq!(cmp_len_lex(b"01", b"00"), Ordering::Greater);
        assert_eq!(cmp_len_lex(b"01", b"01"), Ordering::Equal);
    }

    #[test]
    fn palindromes() {
        assert!(is_palindrome(b""));
        assert!(is_palindrome(b"0"));
        assert!(is_palindrome(b"010010"));
        assert!(!is_palindrome(b"01"));
    }

    #[test]
    fn square_plus_letter_detection() {
        // 01010 = (01)(01)0 and 000 = (0)(0)0 have the pattern; 0110 does not.
        assert!(has_bbb(b"01010"));
        assert!(has_bbb(b"10101"));
        assert!(has_bbb(b"000"));
        assert!(!has_bbb(b"0110"));
        assert!(!has_bbb(b"0110100110010110")); // square-plus-letter never occurs here
        assert!(!has_bbb(b"01"));
    }
}
