//! Markov diagrams over significant blocks: a generic table-driven builder,
//! a closed-form Sturmian builder, and a rule-based builder for the
//! Prouhet-Thue-Morse system, plus serialization and structural checks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::block::{cmp_len_lex, display, is_palindrome, parse_block, Block, Letter};
use crate::error::{Error, Result};
use crate::language::LanguageTable;
use crate::significance::{is_significant, morse_is_significant, sig};

/// A labelled arrow of a Markov diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub from: Block,
    pub to: Block,
    pub letter: Letter,
}

impl Arrow {
    pub fn new(from: &[Letter], to: &[Letter], letter: Letter) -> Self {
        Arrow {
            from: from.to_vec(),
            to: to.to_vec(),
            letter,
        }
    }
}

impl Ord for Arrow {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        cmp_len_lex(&self.from, &other.from)
            .then_with(|| cmp_len_lex(&self.to, &other.to))
            .then_with(|| self.letter.cmp(&other.letter))
    }
}

impl PartialOrd for Arrow {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -{}-> {}",
            display(&self.from),
            self.letter as char,
            display(&self.to)
        )
    }
}

/// How a diagram was constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Table-driven: vertices by witness search, targets by significant suffix.
    Generic { horizon: usize },
    /// Sturmian closed form: spine and cross arrows from the left special word.
    SturmianClosedForm,
    /// Vertices by the left-special-tail rule, targets by significant suffix.
    MorseRule { horizon: usize },
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Generic { .. } => "generic",
            Provenance::SturmianClosedForm => "sturmian-closed-form",
            Provenance::MorseRule { .. } => "morse-rule",
        }
    }

    pub fn horizon(&self) -> Option<usize> {
        match self {
            Provenance::Generic { horizon } | Provenance::MorseRule { horizon } => Some(*horizon),
            Provenance::SturmianClosedForm => None,
        }
    }

    fn from_parts(label: &str, horizon: Option<usize>) -> Result<Self> {
        match (label, horizon) {
            ("generic", Some(h)) => Ok(Provenance::Generic { horizon: h }),
            ("morse-rule", Some(h)) => Ok(Provenance::MorseRule { horizon: h }),
            ("sturmian-closed-form", None) => Ok(Provenance::SturmianClosedForm),
            _ => Err(Error::InvalidConfig(format!(
                "provenance {label:?} with horizon {horizon:?} is not valid"
            ))),
        }
    }
}

/// A depth-bounded Markov diagram. Vertices are the significant blocks of
/// length up to `depth`; arrows within the diagram point at the significant
/// suffix of the extended source block, and arrows whose target would exceed
/// the depth bound are kept separately as the frontier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovDiagram {
    pub system: String,
    pub depth: usize,
    pub provenance: Provenance,
    /// Length of the source prefix the diagram was derived from.
    pub scan_len: usize,
    /// Sorted by length, then lexicographically.
    pub vertices: Vec<Block>,
    /// Sorted; targets are vertices.
    pub arrows: Vec<Arrow>,
    /// Sorted; targets have length `depth + 1`.
    pub frontier: Vec<Arrow>,
}

impl MarkovDiagram {
    pub fn contains_vertex(&self, v: &[Letter]) -> bool {
        self.vertices.iter().any(|w| w == v)
    }

    pub fn vertices_of_len(&self, n: usize) -> Vec<&Block> {
        self.vertices.iter().filter(|w| w.len() == n).collect()
    }

    /// Arrows within the diagram leaving `v`.
    pub fn out_arrows(&self, v: &[Letter]) -> Vec<&Arrow> {
        self.arrows.iter().filter(|a| a.from == v).collect()
    }

    /// Frontier arrows leaving `v`.
    pub fn frontier_arrows(&self, v: &[Letter]) -> Vec<&Arrow> {
        self.frontier.iter().filter(|a| a.from == v).collect()
    }

    /// Out-degree counting both within and frontier arrows.
    pub fn out_degree(&self, v: &[Letter]) -> usize {
        self.out_arrows(v).len() + self.frontier_arrows(v).len()
    }

    pub fn frontier_sources(&self) -> BTreeSet<&Block> {
        self.frontier.iter().map(|a| &a.from).collect()
    }

    /// Kahn topological sort over the within arrows; `None` when cyclic.
    pub fn topological_order(&self) -> Option<Vec<Block>> {
        let index: BTreeMap<&Block, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let mut indegree = vec![0usize; self.vertices.len()];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for a in &self.arrows {
            let (i, j) = (index[&a.from], index[&a.to]);
            succ[i].push(j);
            indegree[j] += 1;
        }
        let mut queue: VecDeque<usize> = (0..self.vertices.len())
            .filter(|&i| indegree[i] == 0)
            .collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(i) = queue.pop_front() {
            order.push(self.vertices[i].clone());
            for &j in &succ[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        (order.len() == self.vertices.len()).then_some(order)
    }

    /// Checks every arrow against the language table: the spelled extension is
    /// in the language, the target is its significant suffix, within targets
    /// are vertices, and frontier targets have length `depth + 1`.
    pub fn validate_arrows(&self, table: &LanguageTable, h: usize) -> Result<()> {
        let vertex_set: BTreeSet<&Block> = self.vertices.iter().collect();
        for (a, within) in self
            .arrows
            .iter()
            .map(|a| (a, true))
            .chain(self.frontier.iter().map(|a| (a, false)))
        {
            if !vertex_set.contains(&a.from) {
                return Err(Error::StructuralFailure(format!(
                    "arrow {a} leaves a non-vertex"
                )));
            }
            let extended = crate::block::extend(&a.from, a.letter);
            if !table.contains(&extended) {
                return Err(Error::StructuralFailure(format!(
                    "arrow {a} spells {} which is not in the language",
                    display(&extended)
                )));
            }
            let target = sig(table, &extended, h)?;
            if target != a.to {
                return Err(Error::StructuralFailure(format!(
                    "arrow {a} should target {}",
                    display(&target)
                )));
            }
            if within {
                if !vertex_set.contains(&a.to) {
                    return Err(Error::StructuralFailure(format!(
                        "arrow {a} targets a non-vertex"
                    )));
                }
            } else if a.to.len() != self.depth + 1 {
                return Err(Error::StructuralFailure(format!(
                    "frontier arrow {a} targets length {} instead of {}",
                    a.to.len(),
                    self.depth + 1
                )));
            }
        }
        Ok(())
    }
}

fn require_depth(depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(Error::LengthOutOfRange { len: 0, max_len: 0 });
    }
    Ok(())
}

fn finish(
    system: &str,
    depth: usize,
    provenance: Provenance,
    scan_len: usize,
    mut vertices: Vec<Block>,
    mut arrows: Vec<Arrow>,
    mut frontier: Vec<Arrow>,
) -> MarkovDiagram {
    vertices.sort_by(|a, b| cmp_len_lex(a, b));
    arrows.sort();
    frontier.sort();
    MarkovDiagram {
        system: system.to_string(),
        depth,
        provenance,
        scan_len,
        vertices,
        arrows,
        frontier,
    }
}

/// Builds the depth-`depth` diagram of any scanned language by witness search.
/// Requires `depth + 1 + horizon <= table.max_len()` so that significance of
/// the extended blocks can be judged.
pub fn build_generic(
    table: &LanguageTable,
    system: &str,
    depth: usize,
    horizon: usize,
) -> Result<MarkovDiagram> {
    require_depth(depth)?;
    if depth + 1 + horizon > table.max_len() {
        return Err(Error::HorizonExceedsTable {
            needed: depth + 1 + horizon,
            max_len: table.max_len(),
        });
    }
    let mut vertices = Vec::new();
    for n in 1..=depth {
        for w in table.blocks_of_len(n)? {
            if is_significant(table, w, horizon)?.is_significant() {
                vertices.push(w.clone());
            }
        }
    }
    let mut arrows = Vec::new();
    let mut frontier = Vec::new();
    for a in &vertices {
        for &c in table.alphabet() {
            let extended = crate::block::extend(a, c);
            if !table.contains(&extended) {
                continue;
            }
            let target = sig(table, &extended, horizon)?;
            let arrow = Arrow {
                from: a.clone(),
                to: target,
                letter: c,
            };
            if arrow.to.len() > depth {
                frontier.push(arrow);
            } else {
                arrows.push(arrow);
            }
        }
    }
    Ok(finish(
        system,
        depth,
        Provenance::Generic { horizon },
        table.source_prefix_len(),
        vertices,
        arrows,
        frontier,
    ))
}

/// Builds the depth-`depth` diagram of a Sturmian system in closed form from
/// a prefix of its left special word `l`, with no language scan:
///
/// * vertices are `x·L(k)` for both letters `x` and `0 <= k < depth`, where
///   `L(k)` is the length-`k` prefix of `l`;
/// * every vertex `x·L(k)` carries a spine arrow to `x·L(k+1)` labelled
///   `l[k]` (a frontier arrow when `k = depth - 1`);
/// * each right special vertex — `l[k-1]·L(k-1)` for those `k` with `L(k-1)`
///   a palindrome — carries one cross arrow labelled with the opposite letter
///   of `l[k-1]`, to `l[m-1]·L(m)` for the largest smaller palindrome level
///   `m` with `l[m-1] != l[k-1]`, or to the single opposite letter when no
///   such level exists.
pub fn build_sturmian(l_prefix: &[Letter], system: &str, depth: usize) -> Result<MarkovDiagram> {
    require_depth(depth)?;
    if l_prefix.len() < depth {
        return Err(Error::InsufficientPrefix {
            needed: depth,
            got: l_prefix.len(),
        });
    }
    if l_prefix
        .iter()
        .any(|&c| c != crate::block::ZERO && c != crate::block::ONE)
    {
        return Err(Error::InvalidBlock(
            "closed-form construction needs a binary word".into(),
        ));
    }
    let level = |k: usize| &l_prefix[..k];
    let mut vertices = Vec::new();
    for k in 0..depth {
        for x in [crate::block::ZERO, crate::block::ONE] {
            vertices.push(crate::block::prepend(x, level(k)));
        }
    }
    let mut arrows = Vec::new();
    let mut frontier = Vec::new();
    // Spine arrows.
    for (k, &letter) in l_prefix.iter().enumerate().take(depth) {
        for x in [crate::block::ZERO, crate::block::ONE] {
            let arrow = Arrow {
                from: crate::block::prepend(x, level(k)),
                to: crate::block::prepend(x, level(k + 1)),
                letter,
            };
            if k + 1 == depth {
                frontier.push(arrow);
            } else {
                arrows.push(arrow);
            }
        }
    }
    // Cross arrows at palindrome levels.
    let palindrome_levels: Vec<usize> = (1..=depth)
        .filter(|&k| is_palindrome(level(k - 1)))
        .collect();
    for (i, &k) in palindrome_levels.iter().enumerate() {
        let x = l_prefix[k - 1];
        let from = crate::block::prepend(x, level(k - 1));
        let to = palindrome_levels[..i]
            .iter()
            .rev()
            .find(|&&m| l_prefix[m - 1] != x)
            .map(|&m| crate::block::prepend(l_prefix[m - 1], level(m)))
            .unwrap_or_else(|| vec![crate::block::dual(x)]);
        arrows.push(Arrow {
            from,
            to,
            letter: crate::block::dual(x),
        });
    }
    Ok(finish(
        system,
        depth,
        Provenance::SturmianClosedForm,
        l_prefix.len(),
        vertices,
        arrows,
        frontier,
    ))
}

/// Builds the depth-`depth` diagram of the Prouhet-Thue-Morse system using the
/// left-special-tail rule for vertex selection; arrow targets still go through
/// the significant-suffix search, so `depth + 1 + horizon <= table.max_len()`
/// is required.
pub fn build_morse(
    table: &LanguageTable,
    system: &str,
    depth: usize,
    horizon: usize,
) -> Result<MarkovDiagram> {
    require_depth(depth)?;
    if depth + 1 + horizon > table.max_len() {
        return Err(Error::HorizonExceedsTable {
            needed: depth + 1 + horizon,
            max_len: table.max_len(),
        });
    }
    let mut vertices = Vec::new();
    for n in 1..=depth {
        for w in table.blocks_of_len(n)? {
            if morse_is_significant(table, w)? {
                vertices.push(w.clone());
            }
        }
    }
    let mut arrows = Vec::new();
    let mut frontier = Vec::new();
    for a in &vertices {
        for &c in table.alphabet() {
            let extended = crate::block::extend(a, c);
            if !table.contains(&extended) {
                continue;
            }
            let target = sig(table, &extended, horizon)?;
            let arrow = Arrow {
                from: a.clone(),
                to: target,
                letter: c,
            };
            if arrow.to.len() > depth {
                frontier.push(arrow);
            } else {
                arrows.push(arrow);
            }
        }
    }
    Ok(finish(
        system,
        depth,
        Provenance::MorseRule { horizon },
        table.source_prefix_len(),
        vertices,
        arrows,
        frontier,
    ))
}

/// Differences between two diagrams' vertex and arrow sets (left vs right).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagramDiff {
    pub missing_vertices: Vec<Block>,
    pub extra_vertices: Vec<Block>,
    pub missing_arrows: Vec<Arrow>,
    pub extra_arrows: Vec<Arrow>,
    pub missing_frontier: Vec<Arrow>,
    pub extra_frontier: Vec<Arrow>,
}

impl DiagramDiff {
    pub fn is_empty(&self) -> bool {
        self.missing_vertices.is_empty()
            && self.extra_vertices.is_empty()
            && self.missing_arrows.is_empty()
            && self.extra_arrows.is_empty()
            && self.missing_frontier.is_empty()
            && self.extra_frontier.is_empty()
    }
}

impl fmt::Display for DiagramDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "diagrams agree");
        }
        let blocks = |v: &[Block]| v.iter().map(|w| display(w)).collect::<Vec<_>>().join(", ");
        let arrows = |v: &[Arrow]| {
            v.iter()
                .map(Arrow::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        if !self.missing_vertices.is_empty() {
            writeln!(f, "missing vertices: {}", blocks(&self.missing_vertices))?;
        }
        if !self.extra_vertices.is_empty() {
            writeln!(f, "extra vertices: {}", blocks(&self.extra_vertices))?;
        }
        if !self.missing_arrows.is_empty() {
            writeln!(f, "missing arrows: {}", arrows(&self.missing_arrows))?;
        }
        if !self.extra_arrows.is_empty() {
            writeln!(f, "extra arrows: {}", arrows(&self.extra_arrows))?;
        }
        if !self.missing_frontier.is_empty() {
            writeln!(f, "missing frontier: {}", arrows(&self.missing_frontier))?;
        }
        if !self.extra_frontier.is_empty() {
            writeln!(f, "extra frontier: {}", arrows(&self.extra_frontier))?;
        }
        Ok(())
    }
}

/// Set-level comparison of two diagrams, ignoring provenance and scan length.
/// "Missing" means present in `left` but not `right`.
pub fn diagram_diff(left: &MarkovDiagram, right: &MarkovDiagram) -> DiagramDiff {
    fn split<T: Ord + Clone>(a: &[T], b: &[T]) -> (Vec<T>, Vec<T>) {
        let sa: BTreeSet<&T> = a.iter().collect();
        let sb: BTreeSet<&T> = b.iter().collect();
        (
            sa.difference(&sb).map(|x| (*x).clone()).collect(),
            sb.difference(&sa).map(|x| (*x).clone()).collect(),
        )
    }
    let (missing_vertices, extra_vertices) = split(&left.vertices, &right.vertices);
    let (missing_arrows, extra_arrows) = split(&left.arrows, &right.arrows);
    let (missing_frontier, extra_frontier) = split(&left.frontier, &right.frontier);
    DiagramDiff {
        missing_vertices,
        extra_vertices,
        missing_arrows,
        extra_arrows,
        missing_frontier,
        extra_frontier,
    }
}

/// True when vertex, arrow, and frontier sets coincide.
pub fn diagram_equal(left: &MarkovDiagram, right: &MarkovDiagram) -> bool {
    diagram_diff(left, right).is_empty()
}

/// Serialized arrow: blocks as strings, letter as a one-character string.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArrowDoc {
    pub from: String,
    pub to: String,
    pub letter: String,
}

/// Serialized diagram with its construction parameters embedded.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DiagramDoc {
    pub system: String,
    pub provenance: String,
    pub depth: usize,
    pub horizon: Option<usize>,
    pub scan_len: usize,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    pub frontier: Vec<ArrowDoc>,
}

fn arrow_to_doc(a: &Arrow) -> ArrowDoc {
    ArrowDoc {
        from: display(&a.from),
        to: display(&a.to),
        letter: (a.letter as char).to_string(),
    }
}

fn arrow_from_doc(d: &ArrowDoc) -> Result<Arrow> {
    let letter = d.letter.as_bytes();
    if letter.len() != 1 {
        return Err(Error::InvalidBlock(format!(
            "arrow letter {:?} is not a single character",
            d.letter
        )));
    }
    Ok(Arrow {
        from: parse_block(&d.from)?,
        to: parse_block(&d.to)?,
        letter: letter[0],
    })
}

impl MarkovDiagram {
    pub fn to_doc(&self) -> DiagramDoc {
        DiagramDoc {
            system: self.system.clone(),
            provenance: self.provenance.label().to_string(),
            depth: self.depth,
            horizon: self.provenance.horizon(),
            scan_len: self.scan_len,
            vertices: self.vertices.iter().map(|v| display(v)).collect(),
            arrows: self.arrows.iter().map(arrow_to_doc).collect(),
            frontier: self.frontier.iter().map(arrow_to_doc).collect(),
        }
    }

    pub fn from_doc(doc: &DiagramDoc) -> Result<Self> {
        let provenance = Provenance::from_parts(&doc.provenance, doc.horizon)?;
        let vertices = doc
            .vertices
            .iter()
            .map(|s| parse_block(s))
            .collect::<Result<Vec<_>>>()?;
        let arrows = doc
            .arrows
            .iter()
            .map(arrow_from_doc)
            .collect::<Result<Vec<_>>>()?;
        let frontier = doc
            .frontier
            .iter()
            .map(arrow_from_doc)
            .collect::<Result<Vec<_>>>()?;
        Ok(finish(
            &doc.system,
            doc.depth,
            provenance,
            doc.scan_len,
            vertices,
            arrows,
            frontier,
        ))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.to_doc())?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: DiagramDoc = serde_json::from_str(s)?;
        MarkovDiagram::from_doc(&doc)
    }

    /// Graphviz rendering: vertices as nodes labelled by their blocks,
    /// frontier arrows dashed. Output is deterministic.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph markov {\n");
        out.push_str(&format!(
            "  label=\"system={} provenance={} depth={} horizon={} scan_len={}\";\n",
            self.system,
            self.provenance.label(),
            self.depth,
            self.provenance
                .horizon()
                .map_or_else(|| "none".to_string(), |h| h.to_string()),
            self.scan_len
        ));
        out.push_str("  rankdir=LR;\n  node [shape=box];\n");
        for v in &self.vertices {
            out.push_str(&format!("  \"{}\";\n", display(v)));
        }
        for a in &self.arrows {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                display(&a.from),
                display(&a.to),
                a.letter as char
            ));
        }
        for a in &self.frontier {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\", style=dashed];\n",
                display(&a.from),
                display(&a.to),
                a.letter as char
            ));
        }
        out.push_str("}\n");
        out
    }
}
