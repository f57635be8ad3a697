//! Follower sets, significance of blocks, and the significant-suffix map that
//! underlies Markov-diagram construction.

use std::collections::BTreeSet;

use crate::block::{display, tail, Block, Letter};
use crate::error::{Error, Result};
use crate::language::LanguageTable;

/// All continuations of a base block within a horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FollowerSet {
    pub base: Block,
    pub horizon: usize,
    /// Every nonempty `v` with `1 <= |v| <= horizon` and `base·v` in the language.
    pub followers: BTreeSet<Block>,
}

/// Outcome of a bounded significance check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignificanceVerdict {
    /// The block's follower set is strictly smaller than its tail's; the
    /// witness `v` satisfies `tail(w)·v` in the language and `w·v` not.
    /// Length-one blocks are significant with an empty witness.
    SignificantWitnessed(Block),
    /// No witness of length up to the horizon exists.
    NotSignificantUpTo(usize),
}

impl SignificanceVerdict {
    pub fn is_significant(&self) -> bool {
        matches!(self, SignificanceVerdict::SignificantWitnessed(_))
    }

    pub fn witness(&self) -> Option<&Block> {
        match self {
            SignificanceVerdict::SignificantWitnessed(v) => Some(v),
            SignificanceVerdict::NotSignificantUpTo(_) => None,
        }
    }
}

fn require_block_in(table: &LanguageTable, w: &[Letter]) -> Result<()> {
    if w.len() > table.max_len() {
        return Err(Error::LengthOutOfRange {
            len: w.len(),
            max_len: table.max_len(),
        });
    }
    if !table.contains(w) {
        return Err(Error::BlockNotInLanguage { block: display(w) });
    }
    Ok(())
}

fn require_horizon(table: &LanguageTable, base_len: usize, h: usize) -> Result<()> {
    if base_len + h > table.max_len() {
        return Err(Error::HorizonExceedsTable {
            needed: base_len + h,
            max_len: table.max_len(),
        });
    }
    Ok(())
}

/// Collects every continuation of `w` up to length `h`. `w` may be empty, in
/// which case the followers are simply all blocks of length up to `h`.
pub fn follower_horizon(table: &LanguageTable, w: &[Letter], h: usize) -> Result<FollowerSet> {
    require_block_in(table, w)?;
    require_horizon(table, w.len(), h)?;
    let mut followers = BTreeSet::new();
    let mut frontier: Vec<Block> = vec![Vec::new()];
    let mut cand = Vec::with_capacity(w.len() + h);
    for _ in 0..h {
        let mut next = Vec::new();
        for v in &frontier {
            for &a in table.alphabet() {
                cand.clear();
                cand.extend_from_slice(w);
                cand.extend_from_slice(v);
                cand.push(a);
                if table.contains(&cand) {
                    let mut v2 = Vec::with_capacity(v.len() + 1);
                    v2.extend_from_slice(v);
                    v2.push(a);
                    followers.insert(v2.clone());
                    next.push(v2);
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(FollowerSet {
        base: w.to_vec(),
        horizon: h,
        followers,
    })
}

/// Decides whether `w` is significant within horizon `h`: whether dropping its
/// first letter strictly enlarges the follower set. The search runs
/// breadth-first, so a returned witness is shortest possible and
/// lexicographically least among the shortest.
pub fn is_significant(
    table: &LanguageTable,
    w: &[Letter],
    h: usize,
) -> Result<SignificanceVerdict> {
    if w.is_empty() {
        return Err(Error::InvalidBlock(
            "significance of the empty block".into(),
        ));
    }
    require_block_in(table, w)?;
    require_horizon(table, w.len(), h)?;
    if w.len() == 1 {
        return Ok(SignificanceVerdict::SignificantWitnessed(Vec::new()));
    }
    let u = &w[1..];
    // Frontier holds extensions v of the tail, i.e. u·v in the language; since
    // the language is factor closed this covers every possible witness.
    let mut frontier: Vec<Block> = vec![Vec::new()];
    let mut u_cand = Vec::with_capacity(u.len() + h);
    let mut w_cand = Vec::with_capacity(w.len() + h);
    for _ in 0..h {
        let mut next = Vec::new();
        for v in &frontier {
            for &a in table.alphabet() {
                u_cand.clear();
                u_cand.extend_from_slice(u);
                u_cand.extend_from_slice(v);
                u_cand.push(a);
                if !table.contains(&u_cand) {
                    continue;
                }
                let mut v2 = Vec::with_capacity(v.len() + 1);
                v2.extend_from_slice(v);
                v2.push(a);
                w_cand.clear();
                w_cand.extend_from_slice(w);
                w_cand.extend_from_slice(&v2);
                if !table.contains(&w_cand) {
                    return Ok(SignificanceVerdict::SignificantWitnessed(v2));
                }
                next.push(v2);
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(SignificanceVerdict::NotSignificantUpTo(h))
}

/// The longest significant suffix of `w` (with respect to horizon `h`).
/// Total, because length-one blocks are significant by convention.
pub fn sig(table: &LanguageTable, w: &[Letter], h: usize) -> Result<Block> {
    if w.is_empty() {
        return Err(Error::InvalidBlock(
            "significant suffix of the empty block".into(),
        ));
    }
    require_block_in(table, w)?;
    require_horizon(table, w.len(), h)?;
    for start in 0..w.len() {
        if is_significant(table, &w[start..], h)?.is_significant() {
            return Ok(w[start..].to_vec());
        }
    }
    Ok(w[w.len() - 1..].to_vec())
}

/// The significant blocks of a Sturmian system in closed form: for `n >= 2`
/// they are exactly `0·L` and `1·L` where `L` is the length-`n-1` prefix of
/// the left special word; for `n = 1` they are the two letters.
pub fn sturmian_significant_blocks(l_prefix: &[Letter], n: usize) -> Result<BTreeSet<Block>> {
    if n == 0 {
        return Err(Error::InvalidBlock(
            "significant blocks of length zero".into(),
        ));
    }
    if l_prefix.len() + 1 < n {
        return Err(Error::InsufficientPrefix {
            needed: n - 1,
            got: l_prefix.len(),
        });
    }
    let mut out = BTreeSet::new();
    for x in [crate::block::ZERO, crate::block::ONE] {
        out.insert(crate::block::prepend(x, &l_prefix[..n - 1]));
    }
    Ok(out)
}

/// Upper bound on the witness length needed to certify every significant
/// block of length at most `depth + 1` of a Sturmian system, derived from the
/// structure of its right special blocks: the block `x·L` (with `L` the
/// length-`n-1` prefix of the left special word `l`) acquires a witness as
/// soon as `reverse(L)` occurs in `l` followed by the dual letter of `x`, and
/// the witness length is one more than the occurrence's start index. Witness
/// lengths grow in jumps (they track the return words of the reversed
/// prefixes), so a fixed multiple of the depth is not generally sufficient.
pub fn sturmian_witness_horizon(l_prefix: &[Letter], depth: usize) -> Result<usize> {
    let mut worst = 1usize;
    for n in 2..=depth + 1 {
        if l_prefix.len() < n {
            return Err(Error::InsufficientPrefix {
                needed: n,
                got: l_prefix.len(),
            });
        }
        let mut pattern: Block = l_prefix[..n - 1].to_vec();
        pattern.reverse();
        pattern.push(0);
        for x in [crate::block::ZERO, crate::block::ONE] {
            *pattern.last_mut().unwrap() = x;
            match l_prefix
                .windows(pattern.len())
                .position(|win| win == pattern.as_slice())
            {
                Some(i) => worst = worst.max(i + 1),
                None => {
                    return Err(Error::InsufficientPrefix {
                        needed: l_prefix.len() + 1,
                        got: l_prefix.len(),
                    })
                }
            }
        }
    }
    Ok(worst)
}

/// Significance test specialised to the Prouhet-Thue-Morse language: a block
/// is significant exactly when its tail is left special (both letters extend
/// it on the left). Length-one blocks are significant by convention.
pub fn morse_is_significant(table: &LanguageTable, w: &[Letter]) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::InvalidBlock(
            "significance of the empty block".into(),
        ));
    }
    require_block_in(table, w)?;
    if w.len() == 1 {
        return Ok(true);
    }
    let u = tail(w);
    let mut cand = Vec::with_capacity(w.len());
    Ok([crate::block::ZERO, crate::block::ONE].iter().all(|&x| {
        cand.clear();
        cand.push(x);
        cand.extend_from_slice(u);
        table.contains(&cand)
    }))
}

/// For each depth `N = 1, …, nmax`, reports whether the length-`N` block of
/// `prefix` ending at position `p` (exclusive) is significant within horizon
/// `h`. Returns the ascending list of significant depths.
pub fn significant_depths(
    table: &LanguageTable,
    prefix: &[Letter],
    p: usize,
    nmax: usize,
    h: usize,
) -> Result<Vec<usize>> {
    if nmax == 0 || p < nmax {
        return Err(Error::LengthOutOfRange {
            len: nmax,
            max_len: p,
        });
    }
    if p + h > prefix.len() {
        return Err(Error::InsufficientPrefix {
            needed: p + h,
            got: prefix.len(),
        });
    }
    require_horizon(table, nmax, h)?;
    let mut out = Vec::new();
    for n in 1..=nmax {
        let w = &prefix[p - n..p];
        if is_significant(table, w, h)?.is_significant() {
            out.push(n);
        }
    }
    Ok(out)
}
