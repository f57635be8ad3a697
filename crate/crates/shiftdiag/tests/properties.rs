//! Exhaustive desk-scale lemma suites plus randomized structural properties.

use std::collections::BTreeSet;

use proptest::prelude::*;

use shiftdiag::block::{display, dual, has_bbb, parse_block, tail, Block, ZERO};
use shiftdiag::diagram::{build_generic, build_morse, build_sturmian, diagram_equal};
use shiftdiag::generators::{
    fixed_point_prefix, left_special_prefix, lower_mechanical, standard_sequence, DirectiveSpec,
    RationalSlope, Substitution,
};
use shiftdiag::language::{scan_language, LanguageTable};
use shiftdiag::morse::{morse_complexity, one_cuttings};
use shiftdiag::paths::{check_iterated_sig, count_rooted_paths, verify_bijection};
use shiftdiag::significance::{
    is_significant, morse_is_significant, sig, sturmian_significant_blocks,
    sturmian_witness_horizon,
};

const H: usize = 30;

fn fib_table(max_len: usize, scan: usize) -> LanguageTable {
    let p = fixed_point_prefix(&Substitution::fibonacci(), ZERO, scan).unwrap();
    scan_language(&p, max_len)
        .unwrap()
        .certify(&|n| n + 1)
        .unwrap()
}

fn pi4_spec() -> DirectiveSpec {
    DirectiveSpec::new(vec![0, 3, 1, 1, 1, 15, 2, 72], None).unwrap()
}

fn pi4_table(max_len: usize, scan: usize) -> LanguageTable {
    let l = left_special_prefix(&pi4_spec(), scan).unwrap();
    scan_language(&l, max_len)
        .unwrap()
        .certify(&|n| n + 1)
        .unwrap()
}

fn morse_table(max_len: usize, scan: usize) -> LanguageTable {
    let p = fixed_point_prefix(&Substitution::morse(), ZERO, scan).unwrap();
    scan_language(&p, max_len)
        .unwrap()
        .certify(&|n| morse_complexity(n))
        .unwrap()
}

fn desk_tables() -> Vec<(&'static str, LanguageTable)> {
    vec![
        ("fibonacci", fib_table(45, 4096)),
        ("pi4", pi4_table(45, 4096)),
        ("morse", morse_table(45, 4096)),
    ]
}

fn significant_set(table: &LanguageTable, n: usize, h: usize) -> BTreeSet<Block> {
    table
        .blocks_of_len(n)
        .unwrap()
        .iter()
        .filter(|w| is_significant(table, w, h).unwrap().is_significant())
        .cloned()
        .collect()
}

#[test]
fn lemma_dropping_the_last_letter_preserves_significance() {
    for (name, table) in desk_tables() {
        for n in 2..=12usize {
            for w in significant_set(&table, n, H) {
                let prefix = &w[..n - 1];
                assert!(
                    is_significant(&table, prefix, H).unwrap().is_significant(),
                    "{name}: {} significant but prefix {} is not",
                    display(&w),
                    display(prefix)
                );
            }
        }
    }
}

#[test]
fn lemma_sig_composes_one_letter_at_a_time() {
    for (name, table) in desk_tables() {
        for n in 1..=12usize {
            for w in table.blocks_of_len(n).unwrap() {
                for c in *b"01" {
                    let mut wc = w.clone();
                    wc.push(c);
                    if !table.contains(&wc) {
                        continue;
                    }
                    let mut sc = sig(&table, w, H).unwrap();
                    sc.push(c);
                    assert_eq!(
                        sig(&table, &sc, H).unwrap(),
                        sig(&table, &wc, H).unwrap(),
                        "{name}: composition mismatch at {}",
                        display(&wc)
                    );
                }
            }
        }
    }
}

#[test]
fn lemma_significant_blocks_have_left_special_tails() {
    for (name, table) in desk_tables() {
        for n in 2..=12usize {
            for w in significant_set(&table, n, H) {
                let exts = table.left_extensions(tail(&w)).unwrap();
                assert_eq!(
                    exts.len(),
                    2,
                    "{name}: tail of significant {} is not left special",
                    display(&w)
                );
            }
        }
    }
}

#[test]
fn lemma_iterated_sig_holds_along_rooted_paths() {
    let fib = fib_table(45, 4096);
    let fl = left_special_prefix(&DirectiveSpec::fibonacci(), 16).unwrap();
    let fd = build_sturmian(&fl, "fibonacci", 12).unwrap();
    let pi4 = pi4_table(45, 4096);
    let pd = build_generic(&pi4, "pi4", 12, 30).unwrap();
    let mor = morse_table(45, 4096);
    let md = build_morse(&mor, "morse", 10, 30).unwrap();
    for n in 1..=10usize {
        check_iterated_sig(&fd, &fib, n, H).unwrap();
        check_iterated_sig(&pd, &pi4, n, H).unwrap();
        check_iterated_sig(&md, &mor, n, H).unwrap();
    }
}

#[test]
fn rooted_paths_biject_with_blocks_at_desk_scale() {
    let fib = fib_table(45, 4096);
    let fl = left_special_prefix(&DirectiveSpec::fibonacci(), 16).unwrap();
    let fd = build_sturmian(&fl, "fibonacci", 12).unwrap();
    let pi4 = pi4_table(45, 4096);
    let pd = build_generic(&pi4, "pi4", 12, 30).unwrap();
    let mor = morse_table(45, 4096);
    let md = build_morse(&mor, "morse", 8, 30).unwrap();
    for n in 1..=12usize {
        verify_bijection(&fd, &fib, n).unwrap();
        verify_bijection(&pd, &pi4, n).unwrap();
        assert_eq!(count_rooted_paths(&fd, n).unwrap(), (n + 1) as u64);
        assert_eq!(count_rooted_paths(&pd, n).unwrap(), (n + 1) as u64);
    }
    for n in 1..=8usize {
        verify_bijection(&md, &mor, n).unwrap();
        assert_eq!(
            count_rooted_paths(&md, n).unwrap(),
            morse_complexity(n) as u64
        );
    }
}

#[test]
fn closed_form_significant_blocks_agree_with_the_search() {
    // The horizon each system needs is dictated by where the reversed l
    // prefixes recur: 21 for Fibonacci up to length 14, but 219 for the
    // (0,3,1,1,1,15,2,72) directive, whose length-14 block 1·L(13) has no
    // shorter witness. A fixed small horizon would silently drop it.
    let fl = left_special_prefix(&DirectiveSpec::fibonacci(), 4096).unwrap();
    let ph =
        sturmian_witness_horizon(&left_special_prefix(&pi4_spec(), 4096).unwrap(), 13).unwrap();
    assert_eq!(ph, 219);
    let pl = left_special_prefix(&pi4_spec(), 4096).unwrap();
    for (l, table, h) in [
        (fl, fib_table(45, 4096), H),
        (pl, pi4_table(14 + 219 + 1, 4096), 219),
    ] {
        for n in 1..=14usize {
            assert_eq!(
                sturmian_significant_blocks(&l, n).unwrap(),
                significant_set(&table, n, h),
                "closed form vs search at length {n}"
            );
        }
    }
}

#[test]
fn morse_rule_agrees_with_the_search() {
    let table = morse_table(45, 4096);
    for n in 1..=10usize {
        for w in table.blocks_of_len(n).unwrap() {
            assert_eq!(
                morse_is_significant(&table, w).unwrap(),
                is_significant(&table, w, H).unwrap().is_significant(),
                "rule vs search at {}",
                display(w)
            );
        }
    }
}

#[test]
fn sturmian_tables_have_unique_mirrored_special_blocks() {
    let fl = left_special_prefix(&DirectiveSpec::fibonacci(), 64).unwrap();
    let pl = left_special_prefix(&pi4_spec(), 64).unwrap();
    for (l, table) in [(fl, fib_table(45, 4096)), (pl, pi4_table(45, 4096))] {
        for n in 1..=14usize {
            let ls = table.left_special_blocks(n).unwrap();
            let rs = table.right_special_blocks(n).unwrap();
            assert_eq!(ls.len(), 1);
            assert_eq!(rs.len(), 1);
            let left = ls.first().unwrap().clone();
            assert_eq!(left, l[..n].to_vec(), "left special is a prefix of l");
            let mut rev = left.clone();
            rev.reverse();
            assert_eq!(&rev, rs.first().unwrap(), "right special is its mirror");
            assert!(table.is_balanced(n).unwrap());
        }
    }
}

#[test]
fn scanned_tables_are_factor_and_extension_closed() {
    for (_, table) in desk_tables() {
        table.validate_closures().unwrap();
    }
}

#[test]
fn morse_blocks_never_contain_a_letter_cubed() {
    let table = morse_table(45, 4096);
    for n in 1..=12usize {
        for w in table.blocks_of_len(n).unwrap() {
            assert!(!has_bbb(w), "letter cubed inside {}", display(w));
        }
    }
}

#[test]
fn sturmian_diagrams_are_acyclic_with_complete_spines() {
    for (spec, depth) in [(DirectiveSpec::fibonacci(), 12usize), (pi4_spec(), 9)] {
        let l = left_special_prefix(&spec, depth + 1).unwrap();
        let d = build_sturmian(&l, "sturmian", depth).unwrap();
        assert!(d.topological_order().is_some(), "diagram has a cycle");
        for x in *b"01" {
            let mut spelled = Vec::new();
            for k in 0..depth {
                let mut from = vec![x];
                from.extend_from_slice(&l[..k]);
                let mut to = from.clone();
                to.push(l[k]);
                let hits: Vec<_> = if k + 1 == depth {
                    d.frontier_arrows(&from)
                } else {
                    d.out_arrows(&from)
                }
                .into_iter()
                .filter(|a| a.to == to)
                .collect();
                assert_eq!(hits.len(), 1, "missing spine arrow at level {k}");
                spelled.push(hits[0].letter);
            }
            assert_eq!(spelled, l[..depth].to_vec(), "spine letters spell l");
        }
    }
}

fn directive_strategy() -> impl Strategy<Value = DirectiveSpec> {
    (0u32..=3, prop::collection::vec(1u32..=4, 1..=5)).prop_map(|(d0, rest)| {
        let mut terms = vec![d0];
        terms.extend(rest);
        let periodic_from = terms.len() - 1;
        DirectiveSpec::new(terms, Some(periodic_from)).unwrap()
    })
}

fn contains_sub(hay: &[u8], needle: &[u8]) -> bool {
    hay.windows(needle.len()).any(|w| w == needle)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_sturmian_closed_form_matches_generic(spec in directive_strategy(), depth in 2usize..=8) {
        let l = left_special_prefix(&spec, 4096).unwrap();
        let horizon = sturmian_witness_horizon(&l, depth).unwrap().max(2 * depth + 12);
        let max_len = depth + 1 + horizon;
        prop_assert!(max_len <= 192, "directive {} needs max_len {}", spec.label(), max_len);
        let table = scan_language(&l, max_len).unwrap().certify(&|n| n + 1).unwrap();
        let generic = build_generic(&table, "prop", depth, horizon).unwrap();
        let closed = build_sturmian(&l, "prop", depth).unwrap();
        prop_assert!(diagram_equal(&generic, &closed), "builders disagree for {}", spec.label());
        closed.validate_arrows(&table, horizon).unwrap();
        prop_assert!(closed.topological_order().is_some());
        for n in 1..=depth {
            verify_bijection(&closed, &table, n).unwrap();
            prop_assert_eq!(count_rooted_paths(&closed, n).unwrap(), (n + 1) as u64);
        }
    }

    #[test]
    fn random_standard_sequences_chain_as_prefixes(spec in directive_strategy()) {
        for k in 1..=8usize {
            let a = standard_sequence(&spec, k).unwrap();
            let b = standard_sequence(&spec, k + 1).unwrap();
            prop_assert!(b.starts_with(&a), "s_{} is not a prefix of s_{}", k, k + 1);
        }
    }

    #[test]
    fn random_morse_windows_cut_consistently(start in 0usize..4000, len in 1usize..=12) {
        let word = fixed_point_prefix(&Substitution::morse(), ZERO, 4096).unwrap();
        let table = morse_table(14, 4096);
        let sub = Substitution::morse();
        let w = &word[start..start + len];
        let cuttings = one_cuttings(w).unwrap();
        prop_assert!(!cuttings.is_empty());
        let unique = len >= 5 || contains_sub(w, b"00") || contains_sub(w, b"11");
        if unique {
            prop_assert_eq!(cuttings.len(), 1, "window {} should cut uniquely", display(w));
        }
        // Ambiguous windows carry one spurious decomposition whose ancestor
        // leaves the language (e.g. 0101 -> 111); the true one stays inside.
        prop_assert!(
            cuttings.iter().any(|c| table.contains(&c.ancestor)),
            "no cutting of {} has an ancestor in the language",
            display(w)
        );
        for c in &cuttings {
            prop_assert_eq!(&c.reassemble(), &w.to_vec(), "reassembly mismatch");
            if unique {
                prop_assert!(table.contains(&c.ancestor), "ancestor {} not in language", display(&c.ancestor));
            }
            let image = sub.apply(&c.ancestor).unwrap();
            prop_assert!(contains_sub(&image, w), "window not inside ancestor image");
        }
    }

    #[test]
    fn random_mechanical_words_are_balanced(num in 0i64..=12, den in 1i64..=12, start in 0usize..=20) {
        prop_assume!(num <= den);
        let slope = RationalSlope::new(num, den, 0, 1).unwrap();
        let word = lower_mechanical(&slope, start, 256);
        let table = scan_language(&word, 8).unwrap();
        for n in 1..=8usize {
            prop_assert!(table.is_balanced(n).unwrap(), "{num}/{den} unbalanced at {n}");
        }
    }

    #[test]
    fn fixed_point_prefixes_are_substitution_invariant(m in 1usize..=200) {
        for sub in [Substitution::morse(), Substitution::fibonacci()] {
            let p = fixed_point_prefix(&sub, ZERO, m).unwrap();
            let image = sub.apply(&p).unwrap();
            prop_assert!(image.starts_with(&p));
        }
    }

    #[test]
    fn random_sturmian_significant_blocks_are_dual_pairs(spec in directive_strategy(), n in 2usize..=10) {
        let l = left_special_prefix(&spec, 64).unwrap();
        let set = sturmian_significant_blocks(&l, n).unwrap();
        prop_assert_eq!(set.len(), 2);
        let mut firsts: Vec<u8> = set.iter().map(|w| w[0]).collect();
        firsts.sort_unstable();
        prop_assert_eq!(firsts, vec![b'0', b'1']);
        for w in &set {
            prop_assert_eq!(&w[1..], &l[..n - 1], "tail must be the l prefix");
            let mut mirrored = w.clone();
            mirrored[0] = dual(mirrored[0]);
            prop_assert!(set.contains(&mirrored));
        }
    }
}

#[test]
fn parse_and_display_round_trip_language_blocks() {
    let table = morse_table(12, 2048);
    for n in 1..=12usize {
        for w in table.blocks_of_len(n).unwrap() {
            assert_eq!(&parse_block(&display(w)).unwrap(), w);
        }
    }
}
