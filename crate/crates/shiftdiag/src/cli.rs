//! Command-line interface: argument parsing, config-file merging, and the
//! subcommand implementations.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::block::{display, has_bbb, parse_block, tail, Block, Letter};
use crate::diagram::{build_generic, build_morse, build_sturmian, diagram_diff, MarkovDiagram};
use crate::error::{Error, Result};
use crate::generators::{fixed_point_prefix, left_special_prefix, DirectiveSpec, Substitution};
use crate::language::{default_scan_len, scan_language, Certification, LanguageTable};
use crate::morse::{ancestor_chain, morse_complexity, one_cuttings, recognizability_index_check};
use crate::paths::{check_iterated_sig, count_rooted_paths, verify_bijection};
use crate::significance::{is_significant, sig, sturmian_witness_horizon, SignificanceVerdict};

/// Markov diagrams and significant-block machinery for binary minimal
/// subshifts.
#[derive(Parser, Debug)]
#[command(name = "shiftdiag", version, about)]
pub struct Cli {
    /// Config file with `key = value` lines mirroring the long flags;
    /// explicit flags win over the file.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a prefix of the system's one-sided word.
    Gen(GenArgs),
    /// Scan the language and print its complexity table.
    Lang(LangArgs),
    /// Judge significance of a block, or list the significant blocks of a length.
    Sig(SigArgs),
    /// Build the Markov diagram.
    Diagram(DiagramArgs),
    /// Count rooted paths of the Markov diagram.
    Paths(PathsArgs),
    /// Run the structural check suite; one line per check.
    Verify(VerifyArgs),
}

#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// System selector: fibonacci, morse, sturmian, substitution.
    #[arg(long)]
    pub system: Option<String>,
    /// Continued-fraction directive for sturmian systems, e.g. `0,3,~1`
    /// (`~` starts a periodic tail).
    #[arg(long)]
    pub directive: Option<String>,
    /// Substitution images for substitution systems, e.g. `0=01,1=10`.
    #[arg(long)]
    pub images: Option<String>,
    /// Seed letter for substitution fixed points (default: first prolongable letter).
    #[arg(long)]
    pub seed: Option<char>,
    /// Diagram depth bound N (default 8).
    #[arg(long)]
    pub depth: Option<usize>,
    /// Witness-search horizon H (default 2(N+1)+8).
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Prefix length M to scan (default max(4096, 64 * table length),
    /// doubled until the complexity profile stabilizes when no exact
    /// complexity formula is known).
    #[arg(long = "scan-len")]
    pub scan_len: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of letters to print (default 64).
    #[arg(long)]
    pub len: Option<usize>,
    /// Write output to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LangArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Output format: json or report.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write output to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SigArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Judge this block: verdict, witness, and longest significant suffix.
    #[arg(long)]
    pub block: Option<String>,
    /// List all significant blocks of this length instead.
    #[arg(long)]
    pub len: Option<usize>,
    /// Write output to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DiagramArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Construction: generic, closed-form (sturmian), or rule (morse).
    /// Defaults to the most specific builder for the system.
    #[arg(long, value_enum)]
    pub builder: Option<BuilderChoice>,
    /// Output format: json, dot, or report.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write output to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PathsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Count rooted paths with this many vertices (default: the depth).
    #[arg(long)]
    pub n: Option<usize>,
    /// Write output to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Dot,
    Report,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuilderChoice {
    /// Table-driven witness search; works for every system.
    Generic,
    /// Sturmian spine/cross construction from the left special word.
    #[value(name = "closed-form")]
    ClosedForm,
    /// Prouhet-Thue-Morse left-special-tail rule.
    Rule,
}

/// A fully resolved system: what word to generate and which exact
/// complexity function, if any, certifies its language tables.
#[derive(Clone, Debug)]
pub enum SystemSpec {
    Fibonacci,
    Morse,
    Sturmian(DirectiveSpec),
    Substitution { sub: Substitution, seed: Letter },
}

impl SystemSpec {
    /// Resolves a system from its name plus the directive/images/seed
    /// parameters that the name requires.
    pub fn from_parts(
        name: &str,
        directive: Option<&str>,
        images: Option<&str>,
        seed: Option<char>,
    ) -> Result<Self> {
        match name {
            "fibonacci" => Ok(SystemSpec::Fibonacci),
            "morse" => Ok(SystemSpec::Morse),
            "sturmian" => {
                let d = directive.ok_or_else(|| {
                    Error::InvalidConfig("sturmian systems need --directive".into())
                })?;
                Ok(SystemSpec::Sturmian(DirectiveSpec::parse(d)?))
            }
            "substitution" => {
                let images = images.ok_or_else(|| {
                    Error::InvalidConfig("substitution systems need --images".into())
                })?;
                let sub = Substitution::parse(images)?;
                let seed = match seed {
                    Some(c) => {
                        if c as u32 > 0x7f {
                            return Err(Error::InvalidConfig(format!(
                                "seed {c:?} is not an ASCII letter"
                            )));
                        }
                        c as u8
                    }
                    None => sub
                        .alphabet()
                        .into_iter()
                        .find(|&c| {
                            sub.image(c)
                                .map(|im| im.first() == Some(&c))
                                .unwrap_or(false)
                        })
                        .ok_or_else(|| {
                            Error::InvalidConfig(
                                "no letter begins its own image; pass --seed explicitly".into(),
                            )
                        })?,
                };
                Ok(SystemSpec::Substitution { sub, seed })
            }
            other => Err(Error::InvalidConfig(format!(
                "unknown system {other:?} (expected fibonacci, morse, sturmian, or substitution)"
            ))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            SystemSpec::Fibonacci => "fibonacci".into(),
            SystemSpec::Morse => "morse".into(),
            SystemSpec::Sturmian(d) => format!("sturmian({})", d.label()),
            SystemSpec::Substitution { sub, seed } => {
                format!("substitution({};seed={})", sub.label(), *seed as char)
            }
        }
    }

    /// The first `len` letters of the system's one-sided word.
    pub fn prefix(&self, len: usize) -> Result<Block> {
        match self {
            SystemSpec::Fibonacci => left_special_prefix(&DirectiveSpec::fibonacci(), len),
            SystemSpec::Sturmian(d) => left_special_prefix(d, len),
            SystemSpec::Morse => {
                fixed_point_prefix(&Substitution::morse(), crate::block::ZERO, len)
            }
            SystemSpec::Substitution { sub, seed } => fixed_point_prefix(sub, *seed, len),
        }
    }

    /// The exact block count at each length, when known in closed form.
    pub fn expected_complexity(&self, n: usize) -> Option<usize> {
        match self {
            SystemSpec::Fibonacci | SystemSpec::Sturmian(_) => Some(n + 1),
            SystemSpec::Morse => Some(morse_complexity(n)),
            SystemSpec::Substitution { .. } => None,
        }
    }

    /// The directive when the system is Sturmian.
    pub fn directive(&self) -> Option<DirectiveSpec> {
        match self {
            SystemSpec::Fibonacci => Some(DirectiveSpec::fibonacci()),
            SystemSpec::Sturmian(d) => Some(d.clone()),
            _ => None,
        }
    }

    pub fn is_morse(&self) -> bool {
        matches!(self, SystemSpec::Morse)
    }
}

const CONFIG_KEYS: &[&str] = &[
    "system",
    "directive",
    "images",
    "seed",
    "depth",
    "horizon",
    "scan-len",
    "len",
    "n",
    "block",
    "builder",
    "format",
    "out",
];

/// Parses a `key = value` config file; `#` starts a comment.
pub fn load_config(path: Option<&Path>) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    let Some(path) = path else {
        return Ok(map);
    };
    let text = fs::read_to_string(path)?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!(
                "{}:{}: expected key = value",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim().to_string();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(Error::InvalidConfig(format!(
                "{}:{}: unknown key {key:?}",
                path.display(),
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn merge_string(cli: Option<String>, cfg: &BTreeMap<String, String>, key: &str) -> Option<String> {
    cli.or_else(|| cfg.get(key).cloned())
}

fn merge_usize(
    cli: Option<usize>,
    cfg: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<usize>> {
    if cli.is_some() {
        return Ok(cli);
    }
    cfg.get(key)
        .map(|v| {
            v.parse::<usize>()
                .map_err(|_| Error::InvalidConfig(format!("{key} must be an integer, got {v:?}")))
        })
        .transpose()
}

fn merge_path(cli: Option<PathBuf>, cfg: &BTreeMap<String, String>, key: &str) -> Option<PathBuf> {
    cli.or_else(|| cfg.get(key).map(PathBuf::from))
}

fn merge_format(
    cli: Option<OutputFormat>,
    cfg: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<OutputFormat>> {
    if cli.is_some() {
        return Ok(cli);
    }
    cfg.get(key)
        .map(|v| {
            OutputFormat::from_str(v, true)
                .map_err(|_| Error::InvalidConfig(format!("unknown format {v:?}")))
        })
        .transpose()
}

fn merge_builder(
    cli: Option<BuilderChoice>,
    cfg: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<BuilderChoice>> {
    if cli.is_some() {
        return Ok(cli);
    }
    cfg.get(key)
        .map(|v| {
            BuilderChoice::from_str(v, true)
                .map_err(|_| Error::InvalidConfig(format!("unknown builder {v:?}")))
        })
        .transpose()
}

/// Common settings after merging flags over the config file and applying
/// defaults.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub system: SystemSpec,
    pub depth: usize,
    pub horizon: usize,
    pub scan_len: Option<usize>,
}

pub fn resolve_common(args: &CommonArgs, cfg: &BTreeMap<String, String>) -> Result<Resolved> {
    let system_name = merge_string(args.system.clone(), cfg, "system")
        .ok_or_else(|| Error::InvalidConfig("missing --system (or `system` in config)".into()))?;
    let directive = merge_string(args.directive.clone(), cfg, "directive");
    let images = merge_string(args.images.clone(), cfg, "images");
    let seed = match args.seed {
        Some(c) => Some(c),
        None => match cfg.get("seed") {
            Some(v) if v.chars().count() == 1 => v.chars().next(),
            Some(v) => {
                return Err(Error::InvalidConfig(format!(
                    "seed must be a single character, got {v:?}"
                )))
            }
            None => None,
        },
    };
    let system =
        SystemSpec::from_parts(&system_name, directive.as_deref(), images.as_deref(), seed)?;
    let depth = merge_usize(args.depth, cfg, "depth")?.unwrap_or(8);
    if depth == 0 {
        return Err(Error::InvalidConfig("depth must be at least 1".into()));
    }
    let horizon = merge_usize(args.horizon, cfg, "horizon")?.unwrap_or(2 * (depth + 1) + 8);
    let scan_len = merge_usize(args.scan_len, cfg, "scan-len")?;
    Ok(Resolved {
        system,
        depth,
        horizon,
        scan_len,
    })
}

/// Scans (and, when an exact complexity function is known, certifies) a
/// language table for the system. Without a formula the scan length is
/// doubled until the complexity profile stabilizes, unless it was given
/// explicitly.
pub fn build_table(
    system: &SystemSpec,
    max_len: usize,
    scan_len: Option<usize>,
) -> Result<LanguageTable> {
    let has_formula = system.expected_complexity(1).is_some();
    let initial = scan_len.unwrap_or_else(|| default_scan_len(max_len));
    if has_formula {
        let prefix = system.prefix(initial)?;
        return scan_language(&prefix, max_len)?.certify(&|n| {
            system
                .expected_complexity(n)
                .expect("formula checked above")
        });
    }
    if scan_len.is_some() {
        let prefix = system.prefix(initial)?;
        return scan_language(&prefix, max_len);
    }
    let mut scan = initial;
    let mut table = scan_language(&system.prefix(scan)?, max_len)?;
    for _ in 0..6 {
        let doubled = scan_language(&system.prefix(scan * 2)?, max_len)?;
        if doubled.complexity_profile() == table.complexity_profile() {
            return Ok(doubled);
        }
        scan *= 2;
        table = doubled;
    }
    Err(Error::StructuralFailure(format!(
        "complexity profile did not stabilize up to scan length {scan}"
    )))
}

/// Builds the diagram with the requested (or default) construction.
pub fn build_diagram(r: &Resolved, builder: Option<BuilderChoice>) -> Result<MarkovDiagram> {
    let choice = builder.unwrap_or({
        if r.system.directive().is_some() {
            BuilderChoice::ClosedForm
        } else if r.system.is_morse() {
            BuilderChoice::Rule
        } else {
            BuilderChoice::Generic
        }
    });
    let label = r.system.label();
    match choice {
        BuilderChoice::ClosedForm => {
            let d = r.system.directive().ok_or_else(|| {
                Error::InvalidConfig("the closed-form builder needs a sturmian system".into())
            })?;
            let l = left_special_prefix(&d, r.depth)?;
            build_sturmian(&l, &label, r.depth)
        }
        BuilderChoice::Rule => {
            if !r.system.is_morse() {
                return Err(Error::InvalidConfig(
                    "the rule builder only applies to the morse system".into(),
                ));
            }
            let table = build_table(&r.system, r.depth + 1 + r.horizon, r.scan_len)?;
            build_morse(&table, &label, r.depth, r.horizon)
        }
        BuilderChoice::Generic => {
            let table = build_table(&r.system, r.depth + 1 + r.horizon, r.scan_len)?;
            build_generic(&table, &label, r.depth, r.horizon)
        }
    }
}

fn emit<W: Write>(stdout: &mut W, out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json_line<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct LenCount {
    len: usize,
    count: usize,
}

#[derive(Serialize)]
struct LangDoc {
    system: String,
    max_len: usize,
    scan_len: usize,
    certification: String,
    counts: Vec<LenCount>,
}

fn cmd_lang(r: &Resolved, format: OutputFormat) -> Result<String> {
    let table = build_table(&r.system, r.depth, r.scan_len)?;
    let counts: Vec<LenCount> = (1..=table.max_len())
        .map(|len| {
            Ok(LenCount {
                len,
                count: table.complexity(len)?,
            })
        })
        .collect::<Result<_>>()?;
    let doc = LangDoc {
        system: r.system.label(),
        max_len: table.max_len(),
        scan_len: table.source_prefix_len(),
        certification: match table.certification() {
            Certification::Certified => "certified".into(),
            Certification::Heuristic => "heuristic".into(),
        },
        counts,
    };
    match format {
        OutputFormat::Json => to_json_line(&doc),
        OutputFormat::Report => {
            let mut out = String::new();
            out.push_str(&format!("system: {}\n", doc.system));
            out.push_str(&format!("scan_len: {}\n", doc.scan_len));
            out.push_str(&format!("certification: {}\n", doc.certification));
            for c in &doc.counts {
                out.push_str(&format!("p({}) = {}\n", c.len, c.count));
            }
            Ok(out)
        }
        OutputFormat::Dot => Err(Error::InvalidConfig(
            "dot output is only available for diagrams".into(),
        )),
    }
}

#[derive(Serialize)]
struct SigBlockDoc {
    system: String,
    block: String,
    horizon: usize,
    scan_len: usize,
    significant: bool,
    witness: Option<String>,
    not_significant_up_to: Option<usize>,
    longest_significant_suffix: String,
}

#[derive(Serialize)]
struct SigLenDoc {
    system: String,
    len: usize,
    horizon: usize,
    scan_len: usize,
    significant_blocks: Vec<String>,
}

fn cmd_sig(r: &Resolved, block: Option<String>, len: Option<usize>) -> Result<String> {
    match (block, len) {
        (Some(b), None) => {
            let w = parse_block(&b)?;
            if w.is_empty() {
                return Err(Error::InvalidBlock("--block must be nonempty".into()));
            }
            let table = build_table(&r.system, w.len() + r.horizon, r.scan_len)?;
            let verdict = is_significant(&table, &w, r.horizon)?;
            let suffix = sig(&table, &w, r.horizon)?;
            let doc = SigBlockDoc {
                system: r.system.label(),
                block: display(&w),
                horizon: r.horizon,
                scan_len: table.source_prefix_len(),
                significant: verdict.is_significant(),
                witness: verdict.witness().map(|v| display(v)),
                not_significant_up_to: match verdict {
                    SignificanceVerdict::NotSignificantUpTo(h) => Some(h),
                    SignificanceVerdict::SignificantWitnessed(_) => None,
                },
                longest_significant_suffix: display(&suffix),
            };
            to_json_line(&doc)
        }
        (None, Some(n)) => {
            if n == 0 {
                return Err(Error::InvalidConfig("--len must be at least 1".into()));
            }
            let table = build_table(&r.system, n + r.horizon, r.scan_len)?;
            let mut blocks = Vec::new();
            for w in table.blocks_of_len(n)? {
                if is_significant(&table, w, r.horizon)?.is_significant() {
                    blocks.push(display(w));
                }
            }
            let doc = SigLenDoc {
                system: r.system.label(),
                len: n,
                horizon: r.horizon,
                scan_len: table.source_prefix_len(),
                significant_blocks: blocks,
            };
            to_json_line(&doc)
        }
        _ => Err(Error::InvalidConfig(
            "pass exactly one of --block or --len".into(),
        )),
    }
}

fn cmd_diagram(
    r: &Resolved,
    builder: Option<BuilderChoice>,
    format: OutputFormat,
) -> Result<String> {
    let d = build_diagram(r, builder)?;
    match format {
        OutputFormat::Json => d.to_json(),
        OutputFormat::Dot => Ok(d.to_dot()),
        OutputFormat::Report => {
            let mut out = String::new();
            out.push_str(&format!("system: {}\n", d.system));
            out.push_str(&format!("provenance: {}\n", d.provenance.label()));
            out.push_str(&format!("depth: {}\n", d.depth));
            out.push_str(&format!(
                "horizon: {}\n",
                d.provenance
                    .horizon()
                    .map_or_else(|| "none".to_string(), |h| h.to_string())
            ));
            out.push_str(&format!("scan_len: {}\n", d.scan_len));
            let lengths = (1..=d.depth)
                .map(|n| format!("{n}:{}", d.vertices_of_len(n).len()))
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!("vertices: {} ({lengths})\n", d.vertices.len()));
            out.push_str(&format!("arrows: {}\n", d.arrows.len()));
            for a in &d.arrows {
                out.push_str(&format!("  {a}\n"));
            }
            out.push_str(&format!("frontier: {}\n", d.frontier.len()));
            for a in &d.frontier {
                out.push_str(&format!("  {a}\n"));
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct PathsDoc {
    system: String,
    provenance: String,
    depth: usize,
    horizon: Option<usize>,
    scan_len: usize,
    n: usize,
    count: u64,
}

fn cmd_paths(r: &Resolved, n: Option<usize>) -> Result<String> {
    let d = build_diagram(r, None)?;
    let n = n.unwrap_or(r.depth);
    let count = count_rooted_paths(&d, n)?;
    to_json_line(&PathsDoc {
        system: d.system.clone(),
        provenance: d.provenance.label().to_string(),
        depth: d.depth,
        horizon: d.provenance.horizon(),
        scan_len: d.scan_len,
        n,
        count,
    })
}

struct CheckLog<'a, W: Write> {
    out: &'a mut W,
    failed: usize,
}

impl<'a, W: Write> CheckLog<'a, W> {
    fn run(&mut self, name: &str, result: Result<()>) -> Result<()> {
        match result {
            Ok(()) => writeln!(self.out, "ok {name}")?,
            Err(e) => {
                self.failed += 1;
                writeln!(self.out, "FAIL {name}: {e}")?;
            }
        }
        Ok(())
    }
}

fn check_special_blocks(table: &LanguageTable, depth: usize) -> Result<()> {
    for n in 1..depth {
        let ls = table.left_special_blocks(n)?;
        let rs = table.right_special_blocks(n)?;
        if ls.len() != 1 || rs.len() != 1 {
            return Err(Error::StructuralFailure(format!(
                "expected one special block per side at length {n}, got {} left, {} right",
                ls.len(),
                rs.len()
            )));
        }
        let mut rev = ls.first().expect("one element").clone();
        rev.reverse();
        if &rev != rs.first().expect("one element") {
            return Err(Error::StructuralFailure(format!(
                "special blocks at length {n} are not mutual reversals"
            )));
        }
    }
    Ok(())
}

fn check_balance(table: &LanguageTable, depth: usize) -> Result<()> {
    for n in 1..=depth {
        if !table.is_balanced(n)? {
            return Err(Error::StructuralFailure(format!(
                "letter counts at length {n} spread by more than one"
            )));
        }
    }
    Ok(())
}

fn check_no_square_plus_letter(table: &LanguageTable) -> Result<()> {
    for n in 1..=table.max_len() {
        for w in table.blocks_of_len(n)? {
            if has_bbb(w) {
                return Err(Error::StructuralFailure(format!(
                    "{} contains a square followed by its first letter",
                    display(w)
                )));
            }
        }
    }
    Ok(())
}

fn check_cutting_uniqueness(table: &LanguageTable) -> Result<()> {
    let top = table.max_len().min(12);
    for n in 5..=top {
        for w in table.blocks_of_len(n)? {
            let cuts = one_cuttings(w)?;
            if cuts.len() != 1 {
                return Err(Error::StructuralFailure(format!(
                    "{} has {} cuttings",
                    display(w),
                    cuts.len()
                )));
            }
        }
    }
    // Ancestors along the chain stay in the language.
    for w in table.blocks_of_len(top)? {
        for anc in ancestor_chain(w)? {
            if !table.contains(&anc) {
                return Err(Error::StructuralFailure(format!(
                    "chain ancestor {} of {} left the language",
                    display(&anc),
                    display(w)
                )));
            }
        }
    }
    Ok(())
}

fn check_drop_last_closure(d: &MarkovDiagram) -> Result<()> {
    for v in &d.vertices {
        if v.len() >= 2 && !d.contains_vertex(&v[..v.len() - 1]) {
            return Err(Error::StructuralFailure(format!(
                "dropping the last letter of vertex {} leaves the vertex set",
                display(v)
            )));
        }
    }
    Ok(())
}

fn check_sig_composition(table: &LanguageTable, depth: usize, h: usize) -> Result<()> {
    for n in 1..=depth {
        for w in table.blocks_of_len(n)? {
            let s = sig(table, w, h)?;
            for &c in table.alphabet() {
                let extended = crate::block::extend(w, c);
                if !table.contains(&extended) {
                    continue;
                }
                let direct = sig(table, &extended, h)?;
                let composed = sig(table, &crate::block::extend(&s, c), h)?;
                if direct != composed {
                    return Err(Error::StructuralFailure(format!(
                        "sig({}) = {} but sig(sig({})·{}) = {}",
                        display(&extended),
                        display(&direct),
                        display(w),
                        c as char,
                        display(&composed)
                    )));
                }
            }
        }
    }
    Ok(())
}

fn check_tail_left_extendable(d: &MarkovDiagram, table: &LanguageTable) -> Result<()> {
    for v in &d.vertices {
        if v.len() < 2 {
            continue;
        }
        let exts = table.left_extensions(tail(v))?;
        if exts.len() < 2 {
            return Err(Error::StructuralFailure(format!(
                "tail of significant block {} has a single left extension",
                display(v)
            )));
        }
    }
    Ok(())
}

fn check_path_counts(d: &MarkovDiagram, table: &LanguageTable, depth: usize) -> Result<()> {
    for n in 1..=depth {
        let counted = count_rooted_paths(d, n)?;
        let expected = table.complexity(n)? as u64;
        if counted != expected {
            return Err(Error::StructuralFailure(format!(
                "{counted} rooted paths with {n} vertices but {expected} blocks"
            )));
        }
    }
    Ok(())
}

fn cmd_verify<W: Write>(r: &Resolved, stdout: &mut W) -> Result<()> {
    let max_len = r.depth + 1 + r.horizon;
    let table = build_table(&r.system, max_len, r.scan_len)?;
    let diagram = build_diagram(r, None)?;
    let mut log = CheckLog {
        out: stdout,
        failed: 0,
    };
    log.run("table-closures", table.validate_closures())?;
    if r.system.expected_complexity(1).is_some() {
        // build_table certified the counts; restate the fact as a check line.
        log.run(
            "certified-complexity",
            if table.is_certified() {
                Ok(())
            } else {
                Err(Error::StructuralFailure("table is not certified".into()))
            },
        )?;
    }
    if r.system.directive().is_some() {
        log.run("special-blocks", check_special_blocks(&table, r.depth))?;
        log.run("balance", check_balance(&table, r.depth))?;
    }
    if r.system.is_morse() {
        log.run("no-square-plus-letter", check_no_square_plus_letter(&table))?;
        log.run("cutting-uniqueness", check_cutting_uniqueness(&table))?;
        let recognizability = (|| {
            let rep = recognizability_index_check(3, 1 << 14)?;
            if rep.holds {
                Ok(())
            } else {
                Err(Error::StructuralFailure(format!(
                    "counterexample {:?}",
                    rep.counterexample
                )))
            }
        })();
        log.run("recognizability-index-3", recognizability)?;
    }
    if r.system.directive().is_some() || r.system.is_morse() {
        let agreement = (|| {
            // Witnesses for Sturmian significant blocks can be much longer
            // than the default horizon (they track recurrences of reversed l
            // prefixes), so raise the search horizon to what the directive
            // actually needs before comparing builders.
            let mut horizon = r.horizon;
            if let Some(d) = r.system.directive() {
                let l = left_special_prefix(&d, table.source_prefix_len().max(4096))?;
                horizon = horizon.max(sturmian_witness_horizon(&l, r.depth)?);
            }
            let widened;
            let search_table = if r.depth + 1 + horizon > table.max_len() {
                widened = build_table(&r.system, r.depth + 1 + horizon, r.scan_len)?;
                &widened
            } else {
                &table
            };
            let generic = build_generic(search_table, &r.system.label(), r.depth, horizon)?;
            let diff = diagram_diff(&diagram, &generic);
            if diff.is_empty() {
                Ok(())
            } else {
                Err(Error::StructuralFailure(format!("{diff}")))
            }
        })();
        log.run("builder-agreement", agreement)?;
    }
    log.run(
        "arrow-soundness",
        diagram.validate_arrows(&table, r.horizon),
    )?;
    log.run("drop-last-closure", check_drop_last_closure(&diagram))?;
    log.run(
        "sig-composition",
        check_sig_composition(&table, r.depth, r.horizon),
    )?;
    log.run(
        "tail-left-extendable",
        check_tail_left_extendable(&diagram, &table),
    )?;
    log.run("path-bijection", {
        (1..=r.depth).try_for_each(|n| verify_bijection(&diagram, &table, n))
    })?;
    log.run("path-counts", check_path_counts(&diagram, &table, r.depth))?;
    log.run(
        "iterated-sig",
        check_iterated_sig(&diagram, &table, r.depth.min(8), r.horizon),
    )?;
    let failed = log.failed;
    if failed > 0 {
        return Err(Error::VerificationFailed { failed });
    }
    Ok(())
}

/// Executes a parsed command line, writing program output to `stdout`.
pub fn run<W: Write>(cli: Cli, stdout: &mut W) -> Result<()> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Gen(a) => {
            let r = resolve_common(&a.common, &cfg)?;
            let len = merge_usize(a.len, &cfg, "len")?.unwrap_or(64);
            let mut text = display(&r.system.prefix(len)?);
            text.push('\n');
            emit(stdout, merge_path(a.out, &cfg, "out").as_deref(), &text)
        }
        Command::Lang(a) => {
            let r = resolve_common(&a.common, &cfg)?;
            let format = merge_format(a.format, &cfg, "format")?.unwrap_or(OutputFormat::Json);
            let text = cmd_lang(&r, format)?;
            emit(stdout, merge_path(a.out, &cfg, "out").as_deref(), &text)
        }
        Command::Sig(a) => {
            let r = resolve_common(&a.common, &cfg)?;
            let block = merge_string(a.block, &cfg, "block");
            let len = merge_usize(a.len, &cfg, "len")?;
            let text = cmd_sig(&r, block, len)?;
            emit(stdout, merge_path(a.out, &cfg, "out").as_deref(), &text)
        }
        Command::Diagram(a) => {
            let r = resolve_common(&a.common, &cfg)?;
            let builder = merge_builder(a.builder, &cfg, "builder")?;
            let format = merge_format(a.format, &cfg, "format")?.unwrap_or(OutputFormat::Json);
            let text = cmd_diagram(&r, builder, format)?;
            emit(stdout, merge_path(a.out, &cfg, "out").as_deref(), &text)
        }
        Command::Paths(a) => {
            let r = resolve_common(&a.common, &cfg)?;
            let n = merge_usize(a.n, &cfg, "n")?;
            let text = cmd_paths(&r, n)?;
            emit(stdout, merge_path(a.out, &cfg, "out").as_deref(), &text)
        }
        Command::Verify(a) => {
            let r = resolve_common(&a.common, &cfg)?;
            cmd_verify(&r, stdout)
        }
    }
}

/// Process exit code for an error: 2 for unusable requests (bad flags,
/// malformed inputs, out-of-range parameters), 1 for genuine property or
/// verification failures discovered while computing.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_)
        | Error::InvalidDirective(_)
        | Error::InvalidSlope(_)
        | Error::InvalidSubstitution(_)
        | Error::InvalidBlock(_)
        | Error::NotProlongable { .. }
        | Error::BlockNotInLanguage { .. }
        | Error::LengthOutOfRange { .. }
        | Error::InsufficientPrefix { .. }
        | Error::HorizonExceedsTable { .. }
        | Error::DirectiveExhausted(_)
        | Error::DepthBoundTooSmall { .. }
        | Error::Io(_) => 2,
        Error::ComplexityMismatch { .. }
        | Error::StructuralFailure(_)
        | Error::BijectionFailure { .. }
        | Error::AmbiguousCutting { .. }
        | Error::VerificationFailed { .. }
        | Error::Json(_) => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn resolution_applies_defaults_and_config_fallbacks() {
        let args = CommonArgs {
            system: Some("fibonacci".into()),
            ..Default::default()
        };
        let r = resolve_common(&args, &BTreeMap::new()).unwrap();
        assert_eq!(r.depth, 8);
        assert_eq!(r.horizon, 2 * 9 + 8);
        assert!(r.scan_len.is_none());

        let r = resolve_common(&args, &cfg(&[("depth", "12"), ("scan-len", "2048")])).unwrap();
        assert_eq!(r.depth, 12);
        assert_eq!(r.horizon, 2 * 13 + 8);
        assert_eq!(r.scan_len, Some(2048));

        // Explicit flags win over the config file.
        let args = CommonArgs {
            system: Some("fibonacci".into()),
            depth: Some(5),
            ..Default::default()
        };
        let r = resolve_common(&args, &cfg(&[("depth", "12")])).unwrap();
        assert_eq!(r.depth, 5);
    }

    #[test]
    fn system_resolution_errors() {
        let no_system = CommonArgs::default();
        assert!(matches!(
            resolve_common(&no_system, &BTreeMap::new()),
            Err(Error::InvalidConfig(_))
        ));
        let bad = CommonArgs {
            system: Some("unknown".into()),
            ..Default::default()
        };
        assert!(resolve_common(&bad, &BTreeMap::new()).is_err());
        let sturmian_no_directive = CommonArgs {
            system: Some("sturmian".into()),
            ..Default::default()
        };
        assert!(resolve_common(&sturmian_no_directive, &BTreeMap::new()).is_err());
    }

    #[test]
    fn substitution_seed_inference() {
        let args = CommonArgs {
            system: Some("substitution".into()),
            images: Some("0=01,1=10".into()),
            ..Default::default()
        };
        let r = resolve_common(&args, &BTreeMap::new()).unwrap();
        match r.system {
            SystemSpec::Substitution { seed, .. } => assert_eq!(seed, b'0'),
            other => panic!("unexpected system {other:?}"),
        }
    }

    #[test]
    fn fibonacci_and_explicit_directive_agree() {
        let fib = SystemSpec::Fibonacci;
        let explicit = SystemSpec::Sturmian(DirectiveSpec::parse("~1").unwrap());
        assert_eq!(fib.prefix(64).unwrap(), explicit.prefix(64).unwrap());
    }

    #[test]
    fn substitution_tables_stabilize() {
        let sub = Substitution::parse("0=001,1=0").unwrap();
        let t = build_table(&SystemSpec::Substitution { sub, seed: b'0' }, 6, None).unwrap();
        assert!(!t.is_certified());
        assert_eq!(t.complexity(1).unwrap(), 2);
    }

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(exit_code_for(&Error::InvalidConfig("x".into())), 2);
        assert_eq!(
            exit_code_for(&Error::BlockNotInLanguage { block: "11".into() }),
            2
        );
        assert_eq!(exit_code_for(&Error::VerificationFailed { failed: 1 }), 1);
        assert_eq!(
            exit_code_for(&Error::ComplexityMismatch {
                len: 3,
                observed: 5,
                expected: 4
            }),
            1
        );
    }
}
