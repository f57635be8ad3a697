//! Prouhet-Thue-Morse specifics: the exact complexity formula, 1-cuttings and
//! ancestor chains under the doubling substitution, and the recognizability
//! index check.

use crate::block::{display, dual, has_bbb, Block, Letter, ONE, ZERO};
use crate::error::{Error, Result};
use crate::generators::{fixed_point_prefix, Substitution};

/// The block-counting function of the Prouhet-Thue-Morse system in closed
/// form: `p(0) = 1`, `p(1) = 2`, `p(2) = 4`, and for `n >= 3` with
/// `m = n - 1`, `r = floor(log2(m - 1))`, `q = m - 2^r`:
/// `p(n) = 3*2^r + 4q` when `2q <= 2^r`, else `4*2^r + 2q`.
pub fn morse_complexity(n: usize) -> usize {
    match n {
        0 => 1,
        1 => 2,
        2 => 4,
        _ => {
            let m = n - 1;
            let r = (m - 1).ilog2() as usize;
            let pow = 1usize << r;
            let q = m - pow;
            if 2 * q <= pow {
                3 * pow + 4 * q
            } else {
                4 * pow + 2 * q
            }
        }
    }
}

/// One way of cutting a block into images of the doubling substitution
/// `0 -> 01, 1 -> 10`: an optional dangling first letter (when the cut starts
/// inside an image), a run of complete two-letter images, and an optional
/// dangling last letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneCutting {
    /// 0 when the block starts at an image boundary, 1 otherwise.
    pub offset: usize,
    /// The dangling first letter, present exactly when `offset == 1`.
    pub leading: Option<Letter>,
    /// Complete images; each pair holds two distinct letters.
    pub pairs: Vec<[Letter; 2]>,
    /// The dangling last letter, when the block ends mid-image.
    pub trailing: Option<Letter>,
    /// The preimage block: the opposite of the leading dangler, then the
    /// first letter of each pair, then the trailing dangler verbatim.
    pub ancestor: Block,
}

impl OneCutting {
    /// Rebuilds the block this cutting was derived from.
    pub fn reassemble(&self) -> Block {
        let mut out = Vec::new();
        if let Some(s) = self.leading {
            out.push(s);
        }
        for p in &self.pairs {
            out.extend_from_slice(p);
        }
        if let Some(t) = self.trailing {
            out.push(t);
        }
        out
    }
}

fn cutting_at(w: &[Letter], offset: usize) -> Option<OneCutting> {
    let leading = if offset == 1 { Some(w[0]) } else { None };
    let body = &w[offset..];
    let mut pairs = Vec::with_capacity(body.len() / 2);
    for chunk in body.chunks_exact(2) {
        if chunk[0] == chunk[1] {
            return None;
        }
        pairs.push([chunk[0], chunk[1]]);
    }
    let trailing = body.chunks_exact(2).remainder().first().copied();
    let mut ancestor = Vec::with_capacity(pairs.len() + 2);
    if let Some(s) = leading {
        ancestor.push(dual(s));
    }
    ancestor.extend(pairs.iter().map(|p| p[0]));
    if let Some(t) = trailing {
        ancestor.push(t);
    }
    Some(OneCutting {
        offset,
        leading,
        pairs,
        trailing,
        ancestor,
    })
}

/// All ways of cutting `w` along images of the doubling substitution, offset
/// 0 first. Rejects blocks containing a square followed by its own first
/// letter, which never occur in the Prouhet-Thue-Morse word, and blocks
/// admitting no cutting at all.
pub fn one_cuttings(w: &[Letter]) -> Result<Vec<OneCutting>> {
    if w.is_empty() {
        return Err(Error::InvalidBlock("cutting of the empty block".into()));
    }
    if w.iter().any(|&c| c != ZERO && c != ONE) {
        return Err(Error::InvalidBlock(format!(
            "cutting of a non-binary block {}",
            display(w)
        )));
    }
    if has_bbb(w) {
        return Err(Error::BlockNotInLanguage { block: display(w) });
    }
    let out: Vec<OneCutting> = [0usize, 1]
        .iter()
        .filter_map(|&o| cutting_at(w, o))
        .collect();
    if out.is_empty() {
        return Err(Error::BlockNotInLanguage { block: display(w) });
    }
    Ok(out)
}

/// Iterates unique cuttings upward: starting from `w`, repeatedly replaces the
/// current block by its unique 1-cutting ancestor and records it, stopping as
/// soon as the recorded block has fewer than four letters or equals one of
/// the two alternating four-blocks (whose cuttings are ambiguous).
pub fn ancestor_chain(w: &[Letter]) -> Result<Vec<Block>> {
    let mut chain = Vec::new();
    let mut cur = w.to_vec();
    let terminal = |b: &[Letter]| b.len() < 4 || b == b"0101".as_slice() || b == b"1010".as_slice();
    while !terminal(&cur) {
        let mut cuttings = one_cuttings(&cur)?;
        if cuttings.len() != 1 {
            return Err(Error::AmbiguousCutting {
                block: display(&cur),
                ancestors: cuttings.iter().map(|c| display(&c.ancestor)).collect(),
            });
        }
        cur = cuttings.pop().expect("one cutting").ancestor;
        chain.push(cur.clone());
    }
    Ok(chain)
}

/// Result of scanning a sample of the Prouhet-Thue-Morse word for positions
/// whose following `k + 1` letters fail to determine the position's parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecognizabilityReport {
    pub k: usize,
    pub sample_len: usize,
    pub holds: bool,
    /// `(first, second, block)`: the same block starts at both positions but
    /// their parities differ.
    pub counterexample: Option<(usize, usize, Block)>,
}

/// Checks whether knowing the letter at a position and the next `k` letters
/// determines the position's parity (membership in the even cut set of the
/// doubling substitution), over a sample prefix of the given length. The scan
/// is deterministic: the first collision in ascending position order wins.
pub fn recognizability_index_check(k: usize, sample_len: usize) -> Result<RecognizabilityReport> {
    let window = k + 1;
    if sample_len < window {
        return Err(Error::LengthOutOfRange {
            len: window,
            max_len: sample_len,
        });
    }
    let prefix = fixed_point_prefix(&Substitution::morse(), ZERO, sample_len)?;
    let mut first_seen: std::collections::BTreeMap<&[Letter], usize> =
        std::collections::BTreeMap::new();
    for m in 0..=sample_len - window {
        let w = &prefix[m..m + window];
        match first_seen.get(w) {
            None => {
                first_seen.insert(w, m);
            }
            Some(&first) => {
                if first % 2 != m % 2 {
                    return Ok(RecognizabilityReport {
                        k,
                        sample_len,
                        holds: false,
                        counterexample: Some((first, m, w.to_vec())),
                    });
                }
            }
        }
    }
    Ok(RecognizabilityReport {
        k,
        sample_len,
        holds: true,
        counterexample: None,
    })
}
