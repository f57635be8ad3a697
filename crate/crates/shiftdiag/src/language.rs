//! Finite language tables scanned from a sequence prefix, with certification
//! against a known complexity function and left/right extension queries.

use std::collections::BTreeSet;

use crate::block::{display, Block, Letter};
use crate::error::{Error, Result};

/// Whether a table's block counts have been checked against a complexity function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    /// Built from a finite scan; counts are whatever the prefix exhibited.
    Heuristic,
    /// Counts match a supplied complexity function at every stored length.
    Certified,
}

/// The set of all blocks of each length `1..=max_len` occurring in a scanned prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageTable {
    alphabet: Vec<Letter>,
    max_len: usize,
    by_len: Vec<BTreeSet<Block>>,
    source_prefix_len: usize,
    certification: Certification,
}

/// Default scan length for a requested table depth: long enough that syndetic
/// recurrence makes the scan exhaustive for the systems in this crate.
pub fn default_scan_len(max_len: usize) -> usize {
    4096.max(64 * max_len)
}

/// Scans every window of a prefix and records the distinct blocks of each
/// length up to `max_len`.
pub fn scan_language(prefix: &[Letter], max_len: usize) -> Result<LanguageTable> {
    if max_len == 0 {
        return Err(Error::LengthOutOfRange { len: 0, max_len: 0 });
    }
    if prefix.len() < max_len {
        return Err(Error::InsufficientPrefix {
            needed: max_len,
            got: prefix.len(),
        });
    }
    let mut alphabet: Vec<Letter> = prefix
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    alphabet.sort_unstable();
    let mut by_len: Vec<BTreeSet<Block>> = vec![BTreeSet::new(); max_len];
    for k in 1..=max_len {
        let set = &mut by_len[k - 1];
        for w in prefix.windows(k) {
            if !set.contains(w) {
                set.insert(w.to_vec());
            }
        }
    }
    Ok(LanguageTable {
        alphabet,
        max_len,
        by_len,
        source_prefix_len: prefix.len(),
        certification: Certification::Heuristic,
    })
}

impl LanguageTable {
    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn source_prefix_len(&self) -> usize {
        self.source_prefix_len
    }

    pub fn certification(&self) -> Certification {
        self.certification
    }

    pub fn is_certified(&self) -> bool {
        self.certification == Certification::Certified
    }

    /// Membership test. The empty block is always present.
    ///
    /// # Panics
    /// Panics when `w` is longer than `max_len`; public operations validate
    /// their ranges before querying, and a silent `false` here would corrupt
    /// significance judgements.
    pub fn contains(&self, w: &[Letter]) -> bool {
        assert!(
            w.len() <= self.max_len,
            "language query of length {} exceeds table max_len {}",
            w.len(),
            self.max_len
        );
        if w.is_empty() {
            return true;
        }
        self.by_len[w.len() - 1].contains(w)
    }

    /// All stored blocks of length `k`.
    pub fn blocks_of_len(&self, k: usize) -> Result<&BTreeSet<Block>> {
        if k == 0 || k > self.max_len {
            return Err(Error::LengthOutOfRange {
                len: k,
                max_len: self.max_len,
            });
        }
        Ok(&self.by_len[k - 1])
    }

    /// Number of distinct blocks of length `k` (the complexity value `p(k)`).
    pub fn complexity(&self, k: usize) -> Result<usize> {
        Ok(self.blocks_of_len(k)?.len())
    }

    /// `p(1), …, p(max_len)` as a vector.
    pub fn complexity_profile(&self) -> Vec<usize> {
        self.by_len.iter().map(|s| s.len()).collect()
    }

    /// Checks counts against `expected` at every stored length and marks the
    /// table certified; a mismatch signals that the scanned prefix was too short
    /// (or the expected function wrong) and names the offending length.
    pub fn certify(mut self, expected: &dyn Fn(usize) -> usize) -> Result<Self> {
        for k in 1..=self.max_len {
            let observed = self.by_len[k - 1].len();
            if observed != expected(k) {
                return Err(Error::ComplexityMismatch {
                    len: k,
                    observed,
                    expected: expected(k),
                });
            }
        }
        self.certification = Certification::Certified;
        Ok(self)
    }

    fn require_member(&self, w: &[Letter]) -> Result<()> {
        if w.len() > self.max_len {
            return Err(Error::LengthOutOfRange {
                len: w.len(),
                max_len: self.max_len,
            });
        }
        if !self.contains(w) {
            return Err(Error::BlockNotInLanguage { block: display(w) });
        }
        Ok(())
    }

    /// Letters `a` with `a·w` in the language. Requires `|w| + 1 <= max_len`.
    pub fn left_extensions(&self, w: &[Letter]) -> Result<BTreeSet<Letter>> {
        self.require_member(w)?;
        if w.len() + 1 > self.max_len {
            return Err(Error::LengthOutOfRange {
                len: w.len() + 1,
                max_len: self.max_len,
            });
        }
        let mut out = BTreeSet::new();
        for &a in &self.alphabet {
            let cand = crate::block::prepend(a, w);
            if self.contains(&cand) {
                out.insert(a);
            }
        }
        Ok(out)
    }

    /// Letters `a` with `w·a` in the language. Requires `|w| + 1 <= max_len`.
    pub fn right_extensions(&self, w: &[Letter]) -> Result<BTreeSet<Letter>> {
        self.require_member(w)?;
        if w.len() + 1 > self.max_len {
            return Err(Error::LengthOutOfRange {
                len: w.len() + 1,
                max_len: self.max_len,
            });
        }
        let mut out = BTreeSet::new();
        for &a in &self.alphabet {
            let cand = crate::block::extend(w, a);
            if self.contains(&cand) {
                out.insert(a);
            }
        }
        Ok(out)
    }

    /// Blocks of length `n` with at least two left extensions.
    pub fn left_special_blocks(&self, n: usize) -> Result<BTreeSet<Block>> {
        let mut out = BTreeSet::new();
        for w in self.blocks_of_len(n)? {
            if self.left_extensions(w)?.len() >= 2 {
                out.insert(w.clone());
            }
        }
        Ok(out)
    }

    /// Blocks of length `n` with at least two right extensions.
    pub fn right_special_blocks(&self, n: usize) -> Result<BTreeSet<Block>> {
        let mut out = BTreeSet::new();
        for w in self.blocks_of_len(n)? {
            if self.right_extensions(w)?.len() >= 2 {
                out.insert(w.clone());
            }
        }
        Ok(out)
    }

    /// True when all length-`n` blocks have letter-1 counts within one of
    /// each other.
    pub fn is_balanced(&self, n: usize) -> Result<bool> {
        let ones = |w: &Block| w.iter().filter(|&&c| c == crate::block::ONE).count();
        let blocks = self.blocks_of_len(n)?;
        let mut min = usize::MAX;
        let mut max = 0usize;
        for w in blocks {
            let c = ones(w);
            min = min.min(c);
            max = max.max(c);
        }
        Ok(blocks.is_empty() || max - min <= 1)
    }

    /// Structural self-check: every sub-block of a stored block is stored
    /// (factor closure), and every stored block of length `k < max_len` is the
    /// prefix of some stored block of length `k + 1` (right-extension closure).
    pub fn validate_closures(&self) -> Result<()> {
        for k in 2..=self.max_len {
            for w in &self.by_len[k - 1] {
                if !self.contains(&w[..k - 1]) || !self.contains(&w[1..]) {
                    return Err(Error::StructuralFailure(format!(
                        "factor closure violated at {}",
                        display(w)
                    )));
                }
            }
        }
        for k in 1..self.max_len {
            for w in &self.by_len[k - 1] {
                let extended = self.by_len[k]
                    .range(w.clone()..)
                    .next()
                    .is_some_and(|x| x.starts_with(w));
                if !extended {
                    return Err(Error::StructuralFailure(format!(
                        "right-extension closure violated at {}",
                        display(w)
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixed_point_prefix, Substitution};

    fn morse_prefix(n: usize) -> Block {
        fixed_point_prefix(&Substitution::morse(), crate::block::ZERO, n).unwrap()
    }

    fn fib_prefix(n: usize) -> Block {
        fixed_point_prefix(&Substitution::fibonacci(), crate::block::ZERO, n).unwrap()
    }

    #[test]
    fn scan_collects_all_two_blocks_of_the_morse_prefix() {
        let t = scan_language(b"0110100110010110", 2).unwrap();
        assert_eq!(t.alphabet(), b"01");
        assert_eq!(
            t.blocks_of_len(1)
                .unwrap()
                .iter()
                .cloned()
                .collect::<Vec<_>>(),
            vec![b"0".to_vec(), b"1".to_vec()]
        );
        assert_eq!(
            t.blocks_of_len(2)
                .unwrap()
                .iter()
                .cloned()
                .collect::<Vec<_>>(),
            vec![
                b"00".to_vec(),
                b"01".to_vec(),
                b"10".to_vec(),
                b"11".to_vec()
            ]
        );
    }

    #[test]
    fn scan_of_constant_prefix() {
        let t = scan_language(b"00000", 3).unwrap();
        assert_eq!(t.complexity_profile(), vec![1, 1, 1]);
        assert_eq!(t.alphabet(), b"0");
    }

    #[test]
    fn scan_rejects_short_prefix() {
        assert!(matches!(
            scan_language(b"01", 3),
            Err(Error::InsufficientPrefix { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn fibonacci_counts_are_n_plus_one() {
        let t = scan_language(&fib_prefix(4096), 10).unwrap();
        assert_eq!(
            t.complexity_profile(),
            (1..=10).map(|n| n + 1).collect::<Vec<_>>()
        );
        let t = t.certify(&|n| n + 1).unwrap();
        assert!(t.is_certified());
    }

    #[test]
    fn certify_rejects_short_fibonacci_scan() {
        let t = scan_language(&fib_prefix(12), 10).unwrap();
        let err = t.certify(&|n| n + 1).unwrap_err();
        assert!(matches!(err, Error::ComplexityMismatch { .. }));
    }

    #[test]
    fn morse_left_extension_examples() {
        let t = scan_language(&morse_prefix(4096), 8).unwrap();
        let both: BTreeSet<Letter> = (*b"01").into_iter().collect();
        assert_eq!(t.left_extensions(b"10").unwrap(), both);
        assert_eq!(t.left_extensions(b"01").unwrap(), both);
        // 000 and 111 never occur, so 00 and 11 extend only one way.
        assert_eq!(
            t.left_extensions(b"00").unwrap(),
            (*b"1").into_iter().collect()
        );
        assert_eq!(
            t.left_extensions(b"11").unwrap(),
            (*b"0").into_iter().collect()
        );
    }

    #[test]
    fn membership_errors_are_reported() {
        let t = scan_language(&fib_prefix(512), 6).unwrap();
        assert!(matches!(
            t.left_extensions(b"11"),
            Err(Error::BlockNotInLanguage { .. })
        ));
    }

    #[test]
    fn special_blocks_of_the_sturmian_table() {
        let t = scan_language(&fib_prefix(2048), 8).unwrap();
        assert_eq!(
            t.left_special_blocks(1)
                .unwrap()
                .iter()
                .cloned()
                .collect::<Vec<_>>(),
            vec![b"0".to_vec()]
        );
        assert_eq!(
            t.right_special_blocks(4)
                .unwrap()
                .iter()
                .cloned()
                .collect::<Vec<_>>(),
            vec![b"0010".to_vec()]
        );
        // Exactly one special block per side and length; they are mutual reversals.
        for n in 1..=7 {
            let ls = t.left_special_blocks(n).unwrap();
            let rs = t.right_special_blocks(n).unwrap();
            assert_eq!(ls.len(), 1, "left special count at length {n}");
            assert_eq!(rs.len(), 1, "right special count at length {n}");
            let mut rev = ls.first().unwrap().clone();
            rev.reverse();
            assert_eq!(&rev, rs.first().unwrap());
        }
    }

    #[test]
    fn morse_two_blocks_are_left_special() {
        let t = scan_language(&morse_prefix(2048), 6).unwrap();
        let ls = t.left_special_blocks(2).unwrap();
        assert_eq!(
            ls.iter().cloned().collect::<Vec<_>>(),
            vec![b"01".to_vec(), b"10".to_vec()]
        );
    }

    #[test]
    fn fibonacci_is_balanced_everywhere() {
        let t = scan_language(&fib_prefix(2048), 10).unwrap();
        for n in 1..=10 {
            assert!(t.is_balanced(n).unwrap(), "balance at length {n}");
        }
    }

    #[test]
    fn closures_hold_for_scanned_tables() {
        scan_language(&fib_prefix(2048), 10)
            .unwrap()
            .validate_closures()
            .unwrap();
        scan_language(&morse_prefix(2048), 10)
            .unwrap()
            .validate_closures()
            .unwrap();
    }
}
