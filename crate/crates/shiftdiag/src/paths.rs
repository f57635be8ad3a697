//! Rooted paths of a Markov diagram: safety bounds, counting, enumeration,
//! and the projection back onto language blocks.

use std::collections::{BTreeMap, VecDeque};

use crate::block::{cmp_len_lex, display, Block, Letter};
use crate::diagram::MarkovDiagram;
use crate::error::{Error, Result};
use crate::language::LanguageTable;
use crate::significance::sig;

/// Arrow-distance of every vertex from the nearest length-one vertex,
/// following within arrows. Unreachable vertices are absent.
pub fn rooted_distances(diagram: &MarkovDiagram) -> BTreeMap<Block, usize> {
    let mut dist: BTreeMap<Block, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for v in diagram.vertices_of_len(1) {
        dist.insert(v.clone(), 0);
        queue.push_back(v.clone());
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for a in diagram.out_arrows(&v) {
            if !dist.contains_key(&a.to) {
                dist.insert(a.to.clone(), d + 1);
                queue.push_back(a.to.clone());
            }
        }
    }
    dist
}

/// Ensures rooted paths with `n` vertices cannot be starved by the depth
/// bound: every reachable frontier source must lie at least `n - 1` arrows
/// from the roots, so no path of `n` vertices ever needs a frontier arrow.
pub fn ensure_safe(diagram: &MarkovDiagram, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::LengthOutOfRange { len: 0, max_len: 0 });
    }
    let dist = rooted_distances(diagram);
    for s in diagram.frontier_sources() {
        if let Some(&d) = dist.get(s) {
            if d + 2 <= n {
                return Err(Error::DepthBoundTooSmall { n, position: d + 1 });
            }
        }
    }
    Ok(())
}

/// Number of rooted paths with exactly `n` vertices, by dynamic programming
/// over within arrows. Refuses when the depth bound is too small for `n`.
pub fn count_rooted_paths(diagram: &MarkovDiagram, n: usize) -> Result<u64> {
    ensure_safe(diagram, n)?;
    let index: BTreeMap<&Block, usize> = diagram
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut counts = vec![0u64; diagram.vertices.len()];
    for v in diagram.vertices_of_len(1) {
        counts[index[v]] = 1;
    }
    for _ in 1..n {
        let mut next = vec![0u64; diagram.vertices.len()];
        for a in &diagram.arrows {
            next[index[&a.to]] += counts[index[&a.from]];
        }
        counts = next;
    }
    Ok(counts.iter().sum())
}

/// All rooted paths with exactly `n` vertices, each path a vertex sequence,
/// in lexicographic order of the vertex sequences (vertices compared by
/// length, then lexicographically).
pub fn rooted_paths(diagram: &MarkovDiagram, n: usize) -> Result<Vec<Vec<Block>>> {
    ensure_safe(diagram, n)?;
    let mut out = Vec::new();
    let mut stack: Vec<Block> = Vec::with_capacity(n);
    fn extend(
        diagram: &MarkovDiagram,
        n: usize,
        stack: &mut Vec<Block>,
        out: &mut Vec<Vec<Block>>,
    ) {
        if stack.len() == n {
            out.push(stack.clone());
            return;
        }
        let last = stack.last().expect("stack holds the root").clone();
        for a in diagram.out_arrows(&last) {
            stack.push(a.to.clone());
            extend(diagram, n, stack, out);
            stack.pop();
        }
    }
    for root in diagram.vertices_of_len(1) {
        stack.push(root.clone());
        extend(diagram, n, &mut stack, &mut out);
        stack.pop();
    }
    Ok(out)
}

/// The block spelled by a path: the last letter of each vertex in order.
pub fn project(path: &[Block]) -> Block {
    path.iter()
        .map(|v| *v.last().expect("vertices are nonempty"))
        .collect()
}

/// Checks that path projection is a bijection from rooted paths with `n`
/// vertices onto the language blocks of length `n`.
pub fn verify_bijection(diagram: &MarkovDiagram, table: &LanguageTable, n: usize) -> Result<()> {
    let paths = rooted_paths(diagram, n)?;
    let mut seen: BTreeMap<Block, usize> = BTreeMap::new();
    for p in &paths {
        *seen.entry(project(p)).or_insert(0) += 1;
    }
    let blocks = table.blocks_of_len(n)?;
    let duplicates: Vec<String> = seen
        .iter()
        .filter(|(_, &c)| c > 1)
        .map(|(w, _)| display(w))
        .collect();
    let missing: Vec<String> = blocks
        .iter()
        .filter(|w| !seen.contains_key(*w))
        .map(|w| display(w))
        .collect();
    let extra: Vec<String> = seen
        .keys()
        .filter(|w| !blocks.contains(*w))
        .map(|w| display(w))
        .collect();
    if duplicates.is_empty() && missing.is_empty() && extra.is_empty() {
        Ok(())
    } else {
        Err(Error::BijectionFailure {
            duplicates,
            missing,
            extra,
        })
    }
}

/// The projection of the unique rooted path with `n - 1` vertices whose
/// terminal vertex has two outgoing arrows (counting frontier arrows): the
/// right special block of length `n - 1` when the system has exactly one.
pub fn unique_double_extension(diagram: &MarkovDiagram, n: usize) -> Result<Block> {
    if n < 2 {
        return Err(Error::LengthOutOfRange { len: n, max_len: 1 });
    }
    let paths = rooted_paths(diagram, n - 1)?;
    let mut hits: Vec<Block> = Vec::new();
    for p in &paths {
        let last = p.last().expect("paths are nonempty");
        if diagram.out_degree(last) == 2 {
            hits.push(project(p));
        }
    }
    match hits.len() {
        1 => Ok(hits.pop().expect("one element")),
        k => Err(Error::StructuralFailure(format!(
            "expected one doubly extendable path of {} vertices, found {k}",
            n - 1
        ))),
    }
}

/// Checks the significant-suffix invariant along every rooted path with `n`
/// vertices: the i-th vertex equals the significant suffix of the projection
/// of the first i vertices.
pub fn check_iterated_sig(
    diagram: &MarkovDiagram,
    table: &LanguageTable,
    n: usize,
    h: usize,
) -> Result<()> {
    for p in rooted_paths(diagram, n)? {
        let word = project(&p);
        for i in 1..=p.len() {
            let expected = sig(table, &word[..i], h)?;
            if p[i - 1] != expected {
                return Err(Error::StructuralFailure(format!(
                    "path vertex {} is {} but the projection prefix {} has significant suffix {}",
                    i,
                    display(&p[i - 1]),
                    display(&word[..i]),
                    display(&expected)
                )));
            }
        }
    }
    Ok(())
}

/// Convenience: sorted projections of all rooted paths with `n` vertices.
pub fn projected_blocks(diagram: &MarkovDiagram, n: usize) -> Result<Vec<Block>> {
    let mut out: Vec<Block> = rooted_paths(diagram, n)?
        .iter()
        .map(|p| project(p))
        .collect();
    out.sort_by(|a, b| cmp_len_lex(a, b));
    out.windows(2)
        .all(|w| w[0] != w[1])
        .then_some(())
        .ok_or_else(|| Error::StructuralFailure("duplicate projections".into()))?;
    Ok(out)
}

/// Letters spelled by the arrows along a path (one shorter than the path).
pub fn arrow_letters(diagram: &MarkovDiagram, path: &[Block]) -> Result<Vec<Letter>> {
    let mut letters = Vec::new();
    for pair in path.windows(2) {
        let arrow = diagram
            .out_arrows(&pair[0])
            .into_iter()
            .find(|a| a.to == pair[1])
            .ok_or_else(|| {
                Error::StructuralFailure(format!(
                    "no arrow from {} to {}",
                    display(&pair[0]),
                    display(&pair[1])
                ))
            })?;
        letters.push(arrow.letter);
    }
    Ok(letters)
}
