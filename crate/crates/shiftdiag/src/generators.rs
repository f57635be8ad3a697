//! Exact word generators: continued-fraction directives and their standard
//! sequences, rational mechanical words, and primitive substitutions.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::block::{Block, Letter};
use crate::error::{Error, Result};

/// A directive `(d_1, d_2, d_3, …)` for building standard sequences, stored as
/// an explicit list of terms with an optional periodic tail.
///
/// `d_1` may be zero; all later terms must be positive. When `periodic_from`
/// is `Some(j)`, the terms from index `j` onward repeat forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectiveSpec {
    terms: Vec<u32>,
    periodic_from: Option<usize>,
}

impl DirectiveSpec {
    pub fn new(terms: Vec<u32>, periodic_from: Option<usize>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidDirective("directive has no terms".into()));
        }
        for (i, &d) in terms.iter().enumerate().skip(1) {
            if d == 0 {
                return Err(Error::InvalidDirective(format!(
                    "term {} is zero; only the first term may be zero",
                    i + 1
                )));
            }
        }
        if let Some(j) = periodic_from {
            if j >= terms.len() {
                return Err(Error::InvalidDirective(format!(
                    "periodic tail starts at index {} but only {} terms given",
                    j,
                    terms.len()
                )));
            }
            if terms[j..].contains(&0) {
                return Err(Error::InvalidDirective(
                    "periodic tail contains a zero term".into(),
                ));
            }
        }
        Ok(DirectiveSpec {
            terms,
            periodic_from,
        })
    }

    /// Parses a comma-separated directive such as `1,2,3`. A `~` before a term
    /// marks the start of a periodic tail: `0,3,~1` means `(0, 3, 1, 1, 1, …)`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut periodic_from = None;
        for (i, raw) in s.split(',').enumerate() {
            let raw = raw.trim();
            let body = match raw.strip_prefix('~') {
                Some(rest) => {
                    if periodic_from.is_some() {
                        return Err(Error::InvalidDirective(
                            "more than one periodic marker".into(),
                        ));
                    }
                    periodic_from = Some(i);
                    rest
                }
                None => raw,
            };
            if periodic_from.is_some() && periodic_from != Some(i) && raw.contains('~') {
                return Err(Error::InvalidDirective("misplaced periodic marker".into()));
            }
            let d: u32 = body.parse().map_err(|_| {
                Error::InvalidDirective(format!("term {:?} is not a nonnegative integer", raw))
            })?;
            terms.push(d);
        }
        DirectiveSpec::new(terms, periodic_from)
    }

    /// The golden-ratio directive `(1, 1, 1, …)`.
    pub fn fibonacci() -> Self {
        DirectiveSpec {
            terms: vec![1],
            periodic_from: Some(0),
        }
    }

    /// The directive term `d_{i+1}` (zero-based index), if defined.
    pub fn term(&self, i: usize) -> Option<u32> {
        if i < self.terms.len() {
            return Some(self.terms[i]);
        }
        let j = self.periodic_from?;
        let cycle = self.terms.len() - j;
        Some(self.terms[j + (i - j) % cycle])
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic_from.is_some()
    }

    /// Canonical text form, re-parsable by [`DirectiveSpec::parse`].
    pub fn label(&self) -> String {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, d)| {
                if self.periodic_from == Some(i) {
                    format!("~{d}")
                } else {
                    d.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn repeat_concat(base: &[Letter], times: u32, tail: &[Letter]) -> Block {
    let mut out = Vec::with_capacity(base.len() * times as usize + tail.len());
    for _ in 0..times {
        out.extend_from_slice(base);
    }
    out.extend_from_slice(tail);
    out
}

/// The standard sequence `s_k` of a directive: `s_{-1} = 1`, `s_0 = 0`,
/// `s_k = s_{k-1}^{d_k} s_{k-2}`.
pub fn standard_sequence(spec: &DirectiveSpec, k: usize) -> Result<Block> {
    let mut prev: Block = b"1".to_vec();
    let mut cur: Block = b"0".to_vec();
    for i in 0..k {
        let d = spec.term(i).ok_or_else(|| {
            Error::DirectiveExhausted(format!(
                "standard sequence s_{} needs {} directive terms but only {} are given",
                k,
                k,
                spec.terms.len()
            ))
        })?;
        let next = repeat_concat(&cur, d, &prev);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// The first `m` letters of the one-sided left special word of a directive,
/// i.e. of the limit of its standard sequences.
pub fn left_special_prefix(spec: &DirectiveSpec, m: usize) -> Result<Block> {
    // s_1, s_2, … form a prefix chain because every later directive term is
    // positive, so the limit word is well defined.
    let mut prev: Block = b"1".to_vec();
    let mut cur: Block = b"0".to_vec();
    let mut i = 0usize;
    while i == 0 || cur.len() < m {
        let d = spec.term(i).ok_or_else(|| {
            Error::DirectiveExhausted(format!(
                "directive ends before its standard sequences reach length {m}"
            ))
        })?;
        let next = repeat_concat(&cur, d, &prev);
        prev = cur;
        cur = next;
        i += 1;
    }
    cur.truncate(m);
    Ok(cur)
}

/// An exact rational slope/intercept pair for mechanical words, with
/// `0 <= alpha <= 1` and `0 <= beta <= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalSlope {
    alpha_num: i64,
    alpha_den: i64,
    beta_num: i64,
    beta_den: i64,
}

impl RationalSlope {
    pub fn new(alpha_num: i64, alpha_den: i64, beta_num: i64, beta_den: i64) -> Result<Self> {
        if alpha_den <= 0 || beta_den <= 0 {
            return Err(Error::InvalidSlope("denominators must be positive".into()));
        }
        if alpha_num < 0 || alpha_num > alpha_den {
            return Err(Error::InvalidSlope(format!(
                "slope {alpha_num}/{alpha_den} is outside [0, 1]"
            )));
        }
        if beta_num < 0 || beta_num > beta_den {
            return Err(Error::InvalidSlope(format!(
                "intercept {beta_num}/{beta_den} is outside [0, 1]"
            )));
        }
        Ok(RationalSlope {
            alpha_num,
            alpha_den,
            beta_num,
            beta_den,
        })
    }

    /// `floor(alpha * k + beta)` computed exactly.
    fn floor_at(&self, k: i128) -> i128 {
        let num = self.alpha_num as i128 * self.beta_den as i128 * k
            + self.beta_num as i128 * self.alpha_den as i128;
        let den = self.alpha_den as i128 * self.beta_den as i128;
        num.div_euclid(den)
    }

    /// `ceil(alpha * k + beta)` computed exactly.
    fn ceil_at(&self, k: i128) -> i128 {
        let num = self.alpha_num as i128 * self.beta_den as i128 * k
            + self.beta_num as i128 * self.alpha_den as i128;
        let den = self.alpha_den as i128 * self.beta_den as i128;
        -(-num).div_euclid(den)
    }
}

/// Letters `floor(alpha(k+1)+beta) - floor(alpha*k+beta)` for
/// `k = start, …, start+len-1`.
pub fn lower_mechanical(slope: &RationalSlope, start: usize, len: usize) -> Block {
    (start..start + len)
        .map(|k| {
            let bit = slope.floor_at(k as i128 + 1) - slope.floor_at(k as i128);
            if bit == 0 {
                crate::block::ZERO
            } else {
                crate::block::ONE
            }
        })
        .collect()
}

/// Letters `ceil(alpha(k+1)+beta) - ceil(alpha*k+beta)` for
/// `k = start, …, start+len-1`.
pub fn upper_mechanical(slope: &RationalSlope, start: usize, len: usize) -> Block {
    (start..start + len)
        .map(|k| {
            let bit = slope.ceil_at(k as i128 + 1) - slope.ceil_at(k as i128);
            if bit == 0 {
                crate::block::ZERO
            } else {
                crate::block::ONE
            }
        })
        .collect()
}

/// A non-erasing substitution on a finite alphabet, given by one image block
/// per letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    images: BTreeMap<Letter, Block>,
}

impl Substitution {
    pub fn new(images: BTreeMap<Letter, Block>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidSubstitution("no letter images given".into()));
        }
        for (&c, image) in &images {
            if image.is_empty() {
                return Err(Error::InvalidSubstitution(format!(
                    "letter {} has an empty image",
                    c as char
                )));
            }
            for &x in image {
                if !images.contains_key(&x) {
                    return Err(Error::InvalidSubstitution(format!(
                        "image of {} uses letter {} which has no image",
                        c as char, x as char
                    )));
                }
            }
        }
        Ok(Substitution { images })
    }

    /// Parses `0=01,1=10` style image lists.
    pub fn parse(s: &str) -> Result<Self> {
        let mut images = BTreeMap::new();
        for part in s.split(',') {
            let part = part.trim();
            let (lhs, rhs) = part.split_once('=').ok_or_else(|| {
                Error::InvalidSubstitution(format!("rule {part:?} is not of the form letter=image"))
            })?;
            let lhs = lhs.trim().as_bytes();
            if lhs.len() != 1 {
                return Err(Error::InvalidSubstitution(format!(
                    "left side of {part:?} is not a single letter"
                )));
            }
            let image = crate::block::parse_block(rhs.trim())
                .map_err(|e| Error::InvalidSubstitution(e.to_string()))?;
            if images.insert(lhs[0], image).is_some() {
                return Err(Error::InvalidSubstitution(format!(
                    "letter {} has two images",
                    lhs[0] as char
                )));
            }
        }
        Substitution::new(images)
    }

    /// `0 -> 01, 1 -> 10`.
    pub fn morse() -> Self {
        Substitution::new(
            [
                (crate::block::ZERO, b"01".to_vec()),
                (crate::block::ONE, b"10".to_vec()),
            ]
            .into_iter()
            .collect(),
        )
        .expect("built-in substitution is valid")
    }

    /// `0 -> 01, 1 -> 0`.
    pub fn fibonacci() -> Self {
        Substitution::new(
            [
                (crate::block::ZERO, b"01".to_vec()),
                (crate::block::ONE, b"0".to_vec()),
            ]
            .into_iter()
            .collect(),
        )
        .expect("built-in substitution is valid")
    }

    pub fn alphabet(&self) -> Vec<Letter> {
        self.images.keys().copied().collect()
    }

    pub fn image(&self, c: Letter) -> Option<&Block> {
        self.images.get(&c)
    }

    /// Applies the substitution to every letter of `w` and concatenates.
    pub fn apply(&self, w: &[Letter]) -> Result<Block> {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &c in w {
            let image = self
                .images
                .get(&c)
                .ok_or_else(|| Error::InvalidBlock(format!("letter {} has no image", c as char)))?;
            out.extend_from_slice(image);
        }
        Ok(out)
    }

    /// Canonical text form, re-parsable by [`Substitution::parse`].
    pub fn label(&self) -> String {
        self.images
            .iter()
            .map(|(&c, image)| format!("{}={}", c as char, crate::block::display(image)))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// True when some power of the substitution maps every letter to a block
    /// containing every letter. Powers up to `|alphabet| * max image length`
    /// are checked, which suffices for the incidence matrices arising here.
    pub fn is_primitive(&self) -> bool {
        let alphabet: BTreeSet<Letter> = self.images.keys().copied().collect();
        let max_image = self.images.values().map(Vec::len).max().unwrap_or(0);
        let bound = alphabet.len() * max_image;
        // letters_of[c] = set of letters occurring in the current power's image of c
        let mut letters_of: BTreeMap<Letter, BTreeSet<Letter>> = self
            .images
            .keys()
            .map(|&c| (c, [c].into_iter().collect()))
            .collect();
        for _ in 0..bound {
            let next: BTreeMap<Letter, BTreeSet<Letter>> = letters_of
                .iter()
                .map(|(&c, set)| {
                    let mut acc = BTreeSet::new();
                    for &x in set {
                        acc.extend(self.images[&x].iter().copied());
                    }
                    (c, acc)
                })
                .collect();
            letters_of = next;
            if letters_of.values().all(|s| *s == alphabet) {
                return true;
            }
        }
        false
    }
}

/// The first `m` letters of the fixed point of `sub` starting with `seed`.
///
/// The seed letter must begin its own image. When the iteration stalls on a
/// finite fixed block (as for the identity substitution), that block is
/// repeated periodically to length `m`.
pub fn fixed_point_prefix(sub: &Substitution, seed: Letter, m: usize) -> Result<Block> {
    let image = sub
        .image(seed)
        .ok_or(Error::NotProlongable { seed: seed as char })?;
    if image.first() != Some(&seed) {
        return Err(Error::NotProlongable { seed: seed as char });
    }
    let mut cur: Block = vec![seed];
    while cur.len() < m {
        let next = sub.apply(&cur)?;
        if next == cur {
            // Finite fixed block: extend it periodically.
            let period = cur.clone();
            while cur.len() < m {
                cur.extend_from_slice(&period);
            }
            break;
        }
        cur = next;
    }
    cur.truncate(m);
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::display;

    #[test]
    fn standard_sequences_match_known_values() {
        let all_ones = DirectiveSpec::new(vec![1, 1, 1, 1], None).unwrap();
        assert_eq!(
            display(&standard_sequence(&all_ones, 4).unwrap()),
            "01001010"
        );
        let d = DirectiveSpec::new(vec![0, 3, 1, 1], None).unwrap();
        assert_eq!(display(&standard_sequence(&d, 4).unwrap()), "111011110");
        assert_eq!(display(&standard_sequence(&d, 0).unwrap()), "0");
    }

    #[test]
    fn standard_sequences_form_a_prefix_chain() {
        let spec = DirectiveSpec::parse("0,3,1,1,1,15,2,72").unwrap();
        for k in 1..=7 {
            let a = standard_sequence(&spec, k).unwrap();
            let b = standard_sequence(&spec, k + 1).unwrap();
            assert!(b.starts_with(&a), "s_{k} is a prefix of s_{}", k + 1);
        }
    }

    #[test]
    fn directive_exhaustion_is_an_error() {
        let d = DirectiveSpec::new(vec![1, 1], None).unwrap();
        assert!(matches!(
            standard_sequence(&d, 3),
            Err(Error::DirectiveExhausted(_))
        ));
        assert!(matches!(
            left_special_prefix(&d, 100),
            Err(Error::DirectiveExhausted(_))
        ));
    }

    #[test]
    fn directive_validation() {
        assert!(matches!(
            DirectiveSpec::new(vec![], None),
            Err(Error::InvalidDirective(_))
        ));
        assert!(matches!(
            DirectiveSpec::new(vec![1, 0], None),
            Err(Error::InvalidDirective(_))
        ));
        assert!(DirectiveSpec::new(vec![0, 3], None).is_ok());
        assert!(matches!(
            DirectiveSpec::new(vec![1], Some(3)),
            Err(Error::InvalidDirective(_))
        ));
    }

    #[test]
    fn directive_parsing_round_trips() {
        let d = DirectiveSpec::parse("0,3,~1").unwrap();
        assert_eq!(d.label(), "0,3,~1");
        assert_eq!(d.term(0), Some(0));
        assert_eq!(d.term(1), Some(3));
        assert_eq!(d.term(2), Some(1));
        assert_eq!(d.term(100), Some(1));
        assert!(d.is_periodic());

        let fib = DirectiveSpec::fibonacci();
        assert_eq!(fib.label(), "~1");
        assert_eq!(DirectiveSpec::parse("~1").unwrap(), fib);
        assert_eq!(fib.term(999), Some(1));

        let finite = DirectiveSpec::parse("2,5").unwrap();
        assert_eq!(finite.term(1), Some(5));
        assert_eq!(finite.term(2), None);

        assert!(DirectiveSpec::parse("1,x").is_err());
        assert!(DirectiveSpec::parse("~1,~2").is_err());
    }

    #[test]
    fn left_special_prefixes_match_known_values() {
        let fib = DirectiveSpec::fibonacci();
        assert_eq!(
            display(&left_special_prefix(&fib, 18).unwrap()),
            "010010100100101001"
        );
        let pi4 = DirectiveSpec::parse("0,3,1,1,1,15,2,72").unwrap();
        assert_eq!(
            display(&left_special_prefix(&pi4, 23).unwrap()),
            "11101111011101111011110"
        );
    }

    #[test]
    fn golden_directive_matches_the_substitution_fixed_point() {
        // The all-ones directive generates the same one-sided word as the
        // substitution 0 -> 01, 1 -> 0; asserted rather than assumed.
        let by_directive = left_special_prefix(&DirectiveSpec::fibonacci(), 4096).unwrap();
        let by_substitution =
            fixed_point_prefix(&Substitution::fibonacci(), crate::block::ZERO, 4096).unwrap();
        assert_eq!(by_directive, by_substitution);
    }

    #[test]
    fn mechanical_words_with_small_slopes() {
        let s = RationalSlope::new(13, 34, 0, 1).unwrap();
        assert_eq!(display(&lower_mechanical(&s, 0, 6)), "001001");
        assert_eq!(display(&upper_mechanical(&s, 0, 6)), "101001");

        let zero = RationalSlope::new(0, 1, 0, 1).unwrap();
        assert_eq!(display(&lower_mechanical(&zero, 0, 4)), "0000");
        let one = RationalSlope::new(1, 1, 0, 1).unwrap();
        assert_eq!(display(&lower_mechanical(&one, 0, 4)), "1111");
    }

    #[test]
    fn convergent_slope_tracks_the_golden_word() {
        // 13/34 is a continued-fraction convergent of the golden slope, so the
        // mechanical words agree with the golden word for a long stretch after
        // their first letter.
        let f = left_special_prefix(&DirectiveSpec::fibonacci(), 31).unwrap();
        let s = RationalSlope::new(13, 34, 0, 1).unwrap();
        let lower = lower_mechanical(&s, 0, 32);
        let upper = upper_mechanical(&s, 0, 32);
        assert_eq!(lower[0], crate::block::ZERO);
        assert_eq!(upper[0], crate::block::ONE);
        assert_eq!(&lower[1..], &f[..]);
        assert_eq!(&upper[1..], &f[..]);
    }

    #[test]
    fn slope_validation() {
        assert!(matches!(
            RationalSlope::new(3, 2, 0, 1),
            Err(Error::InvalidSlope(_))
        ));
        assert!(matches!(
            RationalSlope::new(1, 0, 0, 1),
            Err(Error::InvalidSlope(_))
        ));
        assert!(matches!(
            RationalSlope::new(1, 2, -1, 2),
            Err(Error::InvalidSlope(_))
        ));
    }

    #[test]
    fn substitution_fixed_points() {
        let morse = fixed_point_prefix(&Substitution::morse(), crate::block::ZERO, 16).unwrap();
        assert_eq!(display(&morse), "0110100110010110");
        let fib = fixed_point_prefix(&Substitution::fibonacci(), crate::block::ZERO, 12).unwrap();
        assert_eq!(display(&fib), "010010100100");
    }

    #[test]
    fn identity_substitution_extends_periodically() {
        let id = Substitution::parse("a=a").unwrap();
        assert_eq!(display(&fixed_point_prefix(&id, b'a', 5).unwrap()), "aaaaa");
    }

    #[test]
    fn prolongability_is_checked() {
        let swap = Substitution::parse("0=10,1=01").unwrap();
        assert!(matches!(
            fixed_point_prefix(&swap, crate::block::ZERO, 8),
            Err(Error::NotProlongable { seed: '0' })
        ));
        assert!(matches!(
            fixed_point_prefix(&Substitution::morse(), b'x', 8),
            Err(Error::NotProlongable { seed: 'x' })
        ));
    }

    #[test]
    fn substitution_validation() {
        assert!(matches!(
            Substitution::parse("0=01"),
            Err(Error::InvalidSubstitution(_))
        ));
        assert!(matches!(
            Substitution::parse("0=,1=0"),
            Err(Error::InvalidSubstitution(_))
        ));
        assert!(matches!(
            Substitution::parse("0=01,0=10,1=0"),
            Err(Error::InvalidSubstitution(_))
        ));
        assert_eq!(Substitution::morse().label(), "0=01,1=10");
    }

    #[test]
    fn primitivity_judgements() {
        assert!(Substitution::morse().is_primitive());
        assert!(Substitution::fibonacci().is_primitive());
        assert!(!Substitution::parse("0=00,1=11").unwrap().is_primitive());
        // On a one-letter alphabet the identity is vacuously primitive (k=1).
        assert!(Substitution::parse("a=a").unwrap().is_primitive());
        // A two-letter swap is primitive only in odd powers for one letter and
        // even for the other, never simultaneously full: not primitive.
        assert!(!Substitution::parse("0=1,1=0").unwrap().is_primitive());
    }
}
