//! The `selfembed` command line: exit 0 when every check passes, 1 on a
//! violation, 2 on a usage or input error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::adversary::cac::{cac_build, cac_verify, CacRecord};
use crate::adversary::{isomaxinf_run, isomaxinf_verify, Fault, StageRecord};
use crate::analysis::{chain_or_antichain, AnalysisError, jump_decode, synthesize_type1, synthesize_type2, Finiteness};
use crate::codings::singlepath::{
    check_tech_conditions, decode_from_embedding, harden_weak, path_extract, singlepath_build,
};
use crate::codings::staircase::{property_checks, staircase_build, staircase_decode, GrowthMode};
use crate::codings::type3::{Type3Tree, Type3Truth};
use crate::embedding::{find_embedding, kruskal_index, verify_embedding, Embedding, KruskalIndex};
use crate::format::{
    parse_adversary_config, parse_embedding, parse_finite_tree, parse_schedule, parse_treev1, write_embedding,
    write_treev1, FormatError, Schedule,
};
use crate::oracles::{ApproxStack, HonestOracle};
use crate::report::{Check, Report};
use crate::stagewise::{StagewiseTree, TreeEvent};
use crate::tree::{FiniteTree, NodeId};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{path}: {msg}")]
    Trace { path: String, msg: String },
}

#[derive(Parser, Debug)]
#[command(name = "selfembed", version, about = "Self-embeddings of computable trees at finite horizon")]
pub struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Last stage to run.
    #[arg(long, global = true, default_value_t = 300)]
    horizon: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Stages before the horizon after which nothing may change.
    #[arg(long, global = true, default_value_t = 100)]
    margin: u64,
    /// JSON-lines stage log or trace to write.
    #[arg(long, global = true)]
    log: Option<PathBuf>,
    /// Where to write the JSON report (default: standard output).
    #[arg(long, global = true)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build a coding tree from a schedule.
    Build(BuildArgs),
    #[command(subcommand)]
    Embed(EmbedCmd),
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Run a priority construction against configured opponents.
    Adversary(AdversaryArgs),
    /// Audit a trace written by `adversary`.
    Verify(VerifyArgs),
    /// Summarize report files; fails if any check failed.
    Report { files: Vec<PathBuf> },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BuildKind {
    Staircase,
    Singlepath,
    Harden,
    Type3,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Top,
    Bottom,
}

#[derive(Args, Debug)]
struct BuildArgs {
    kind: BuildKind,
    /// Schedule with `stage <s> elem <x>` lines for K.
    #[arg(long = "k")]
    k: PathBuf,
    /// Schedule for the family A_0, A_1, … (type 3; defaults to the K file).
    #[arg(long)]
    family: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Top)]
    mode: Mode,
    /// String length tracked exactly (type 3).
    #[arg(long, default_value_t = 24)]
    depth: usize,
    /// Write the tree in treev1.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum EmbedCmd {
    /// Search for an embedding of `src` into `dst`.
    Find {
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a map given as `<src> -> <dst>` lines.
    Check {
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        #[arg(long)]
        map: PathBuf,
    },
    /// Kruskal index of a sequence of tree files, or of a seeded random sequence.
    Kruskal {
        files: Vec<PathBuf>,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 6)]
        max_nodes: usize,
        #[arg(long)]
        window: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum AnalyzeCmd {
    /// Build a coding tree of the given type and synthesize a self-embedding of it.
    Selfembed {
        #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=3))]
        ty: u8,
        #[arg(long = "k")]
        k: PathBuf,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Embedding (types 1, 2) or witness JSON (type 3).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the coding tree in treev1 (types 1, 2).
        #[arg(long)]
        tree_out: Option<PathBuf>,
    },
    /// Read K off a self-embedding of a staircase tree.
    Decode {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long = "k")]
        k: PathBuf,
        /// Moved node to start from (default: the first successor of the root).
        #[arg(long)]
        node: Option<u64>,
        #[arg(long, default_value_t = 5)]
        imax: usize,
    },
    /// Find a chain or an antichain of the given size among settled nodes.
    Cac {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, default_value_t = 30)]
        target: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Construction {
    Isomaxinf,
    Cac,
}

#[derive(Args, Debug)]
struct AdversaryArgs {
    construction: Construction,
    #[arg(long)]
    config: PathBuf,
    /// Test-only: break the construction's discipline at this stage.
    #[arg(long)]
    inject_fault: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    construction: Construction,
    #[arg(long)]
    trace: PathBuf,
}

/// First line of a trace file.
#[derive(Serialize, Deserialize, Debug)]
struct TraceHeader {
    construction: Construction,
    horizon: u64,
    /// Requirements that must be settled (cac).
    requirements: usize,
    /// Stage after which components may not change (isomaxinf).
    stable_by: u64,
}

type Outcome = Result<(Report, Option<String>), CliError>;

/// Parses `argv` and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok((report, stdout)) => {
            if let Some(s) = stdout {
                println!("{s}");
            }
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match &cli.common.report {
                Some(p) => {
                    if let Err(e) = fs::write(p, text + "\n") {
                        eprintln!("error: {}: {e}", p.display());
                        return 2;
                    }
                }
                None => println!("{text}"),
            }
            if report.all_pass() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn read(p: &Path) -> Result<String, CliError> {
    fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })
}

fn write(p: &Path, text: &str) -> Result<(), CliError> {
    fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source })
}

fn fmt_err(p: &Path) -> impl FnOnce(FormatError) -> CliError + '_ {
    move |source| CliError::Format { path: p.display().to_string(), source }
}

fn schedule(p: &Path) -> Result<Schedule, CliError> {
    parse_schedule(&read(p)?).map_err(fmt_err(p))
}

/// A tree file, or a builtin `chain<n>` (n nodes) / `star<n>` (n leaves).
fn tree_arg(s: &str) -> Result<FiniteTree, CliError> {
    let p = Path::new(s);
    if p.exists() {
        return parse_finite_tree(&read(p)?).map_err(fmt_err(p));
    }
    let builtin = |prefix: &str| s.strip_prefix(prefix).and_then(|n| n.parse::<u64>().ok());
    if let Some(n) = builtin("chain").filter(|&n| n > 0) {
        return Ok(FiniteTree::chain(&(0..n).collect::<Vec<_>>()));
    }
    if let Some(n) = builtin("star") {
        return Ok(FiniteTree::star(n));
    }
    Err(CliError::Usage(format!("'{s}' is neither a file nor chain<n> / star<n>")))
}

fn jsonl<T: Serialize>(path: &Path, header: Option<&TraceHeader>, rows: &[T]) -> Result<(), CliError> {
    let mut f = fs::File::create(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let mut put = |v: String| {
        writeln!(f, "{v}").map_err(|source| CliError::Io { path: path.display().to_string(), source })
    };
    if let Some(h) = header {
        put(serde_json::to_string(h).expect("serializes"))?;
    }
    for r in rows {
        put(serde_json::to_string(r).expect("serializes"))?;
    }
    Ok(())
}

/// One record per stage: the growth events of that stage plus `extra(stage)`.
fn stage_log(p: &StagewiseTree, extra: impl Fn(u64) -> serde_json::Value) -> Vec<serde_json::Value> {
    let mut rows = Vec::new();
    let ev = p.events();
    let mut i = 0;
    for s in 0..=p.horizon() {
        let mut added = Vec::new();
        while i < ev.len() && ev[i].0 == s {
            added.push(match ev[i].1 {
                TreeEvent::Attach { node, parent } => json!([node, parent]),
                TreeEvent::Splice { node, parent, child } => json!([node, parent, child]),
            });
            i += 1;
        }
        let mut row = json!({ "stage": s, "added": added });
        if let (Some(obj), serde_json::Value::Object(more)) = (row.as_object_mut(), extra(s)) {
            obj.extend(more);
        }
        rows.push(row);
    }
    rows
}

fn failed(name: &str, e: impl std::fmt::Display) -> Check {
    Check::new(name, false, e.to_string())
}

fn dispatch(cli: &Cli) -> Outcome {
    let c = &cli.common;
    if c.horizon == 0 {
        return Err(CliError::Usage("--horizon must be at least 1".into()));
    }
    match &cli.cmd {
        Cmd::Build(a) => build(c, a),
        Cmd::Embed(e) => embed(c, e),
        Cmd::Analyze(a) => analyze(c, a),
        Cmd::Adversary(a) => adversary(c, a),
        Cmd::Verify(v) => verify(v),
        Cmd::Report { files } => summarize(files),
    }
}

fn report(command: &str, inputs: Vec<String>, horizon: Option<u64>, checks: Vec<Check>) -> Report {
    Report { command: command.into(), inputs, horizon, checks }
}

fn show(p: &Path) -> String {
    p.display().to_string()
}

fn build(c: &Common, a: &BuildArgs) -> Outcome {
    let sched = schedule(&a.k)?;
    let k = &sched.k;
    let mut inputs = vec![show(&a.k)];
    let mut checks = Vec::new();
    let (tree, rows) = match a.kind {
        BuildKind::Staircase => {
            let mode = match a.mode {
                Mode::Top => GrowthMode::ExtendTop,
                Mode::Bottom => GrowthMode::InsertBottom,
            };
            let st = match staircase_build(k, c.horizon, mode) {
                Ok(st) => st,
                Err(e) => return Ok((report("build staircase", inputs, Some(c.horizon), vec![failed("build", e)]), None)),
            };
            let i_max = k.events().iter().map(|e| e.0 as usize).max().unwrap_or(0);
            checks.extend(property_checks(&st, k, i_max));
            let rows = stage_log(&st.presentation, |s| json!({ "markers": st.markers.at(s) }));
            (st.presentation, rows)
        }
        BuildKind::Singlepath | BuildKind::Harden => {
            let built = if matches!(a.kind, BuildKind::Singlepath) {
                singlepath_build(k, c.horizon)
            } else {
                harden_weak(k, c.horizon)
            };
            let p = match built {
                Ok(p) => p,
                Err(e) => return Ok((report("build singlepath", inputs, Some(c.horizon), vec![failed("build", e)]), None)),
            };
            let t = p.final_tree();
            checks.push(Check::new("binary", t.max_branching() <= 2, format!("max branching {}", t.max_branching())));
            if matches!(a.kind, BuildKind::Singlepath) {
                checks.push(Check::from_failures("tech_conditions", &check_tech_conditions(&t), "ok at the horizon"));
            }
            let parent = |s: u64| p.live_parent(NodeId(s + 1));
            let rows = stage_log(&p, |s| json!({ "n_s": parent(s) }));
            (p, rows)
        }
        BuildKind::Type3 => {
            let fam_path = a.family.clone().unwrap_or_else(|| a.k.clone());
            let fam = schedule(&fam_path)?.family;
            if let Some(f) = &a.family {
                inputs.push(show(f));
            }
            let stack = match ApproxStack::new(fam, k.clone(), a.depth, c.horizon) {
                Ok(s) => s,
                Err(e) => return Ok((report("build type3", inputs, Some(c.horizon), vec![failed("build", e)]), None)),
            };
            let t3 = match Type3Tree::build(&stack, c.horizon, a.depth) {
                Ok(t) => t,
                Err(e) => return Ok((report("build type3", inputs, Some(c.horizon), vec![failed("build", e)]), None)),
            };
            let truth = Type3Truth::from_stack(&stack, a.depth);
            let lvls: Vec<u64> = truth.levels().iter().copied().take_while(|&b| (b as usize) < a.depth / 2).collect();
            let bound = lvls.last().copied().unwrap_or(0) as usize;
            let after = c.horizon.saturating_sub(c.margin.min(c.horizon / 2));
            let seen: Vec<u64> = t3
                .nodes_at(c.horizon)
                .into_iter()
                .filter(|x| x.len() <= bound && t3.looks_branching(x, after, 3))
                .map(|x| x.len() as u64)
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            checks.push(Check::new(
                "branching_levels",
                seen == lvls,
                format!("branching lengths {seen:?}, declared levels {lvls:?}"),
            ));
            let (p, strings) = match t3.presentation() {
                Ok(x) => x,
                Err(e) => return Ok((report("build type3", inputs, Some(c.horizon), vec![failed("build", e)]), None)),
            };
            let label = |n: NodeId| strings[n.0 as usize].to_string();
            let ev = p.events();
            let mut rows = Vec::new();
            let mut i = 0;
            for s in 0..=c.horizon {
                let mut added = Vec::new();
                while i < ev.len() && ev[i].0 == s {
                    added.push(label(ev[i].1.node()));
                    i += 1;
                }
                rows.push(json!({ "stage": s, "added": added }));
            }
            (p, rows)
        }
    };
    if let Some(l) = &c.log {
        jsonl(l, None, &rows)?;
    }
    if let Some(o) = &a.out {
        write(o, &write_treev1(&tree))?;
    }
    let name = format!("build {:?}", a.kind).to_lowercase();
    Ok((report(&name, inputs, Some(c.horizon), checks), None))
}

fn embed(c: &Common, e: &EmbedCmd) -> Outcome {
    match e {
        EmbedCmd::Find { src, dst, out } => {
            let (a, b) = (tree_arg(src)?, tree_arg(dst)?);
            let found = find_embedding(&a, &b);
            let mut checks = Vec::new();
            let text = match &found {
                Some(emb) => {
                    let bad = verify_embedding(emb).map_err(|e| CliError::Usage(e.to_string()))?;
                    let bad: Vec<String> = bad.iter().map(|v| format!("{v:?}")).collect();
                    checks.push(Check::from_failures("witness", &bad, "found; witness verified"));
                    write_embedding(&emb.map)
                }
                None => {
                    checks.push(Check::new("witness", true, "not-found"));
                    "not-found\n".to_string()
                }
            };
            if let Some(o) = out {
                write(o, &text)?;
            }
            Ok((report("embed find", vec![src.clone(), dst.clone()], None, checks), Some(text.trim_end().into())))
        }
        EmbedCmd::Check { src, dst, map } => {
            let (a, b) = (Arc::new(tree_arg(src)?), Arc::new(tree_arg(dst)?));
            let m = parse_embedding(&read(map)?).map_err(fmt_err(map))?;
            let emb = Embedding::new(a, b, m);
            let check = match verify_embedding(&emb) {
                Ok(v) => Check::from_failures(
                    "embedding",
                    &v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>(),
                    "order preserved and reflected, injective, total",
                ),
                Err(e) => failed("embedding", e),
            };
            Ok((report("embed check", vec![src.clone(), dst.clone(), show(map)], None, vec![check]), None))
        }
        EmbedCmd::Kruskal { files, random, max_nodes, window } => {
            let mut inputs: Vec<String> = files.iter().map(|f| show(f)).collect();
            let mut seq = Vec::new();
            for f in files {
                seq.push(parse_finite_tree(&read(f)?).map_err(fmt_err(f))?);
            }
            if let Some(n) = random {
                let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
                seq.extend((0..*n).map(|_| FiniteTree::random(&mut rng, *max_nodes)));
                inputs.push(format!("random {n} trees, seed {}", c.seed));
            }
            if seq.is_empty() {
                return Err(CliError::Usage("no trees given".into()));
            }
            let w = window.unwrap_or(seq.len());
            let k = kruskal_index(&seq, w);
            let check = match k {
                KruskalIndex::Index(k) => Check::new("kruskal_window", true, format!("k = {k}")),
                KruskalIndex::Inconsistent => Check::new("kruskal_window", false, "inconsistent within the window"),
            };
            Ok((report("embed kruskal", inputs, None, vec![check]), None))
        }
    }
}

fn analyze(c: &Common, a: &AnalyzeCmd) -> Outcome {
    match a {
        AnalyzeCmd::Selfembed { ty, k, family, levels, out, tree_out } => {
            let sched = schedule(k)?;
            let fam_path = family.clone().unwrap_or_else(|| k.clone());
            let mut inputs = vec![show(k)];
            if let Some(f) = family {
                inputs.push(show(f));
            }
            let name = format!("analyze selfembed --type {ty}");
            let want: Vec<bool> = (0..=5).map(|x| sched.k.contains_at(x, u64::MAX)).collect();
            let done = |checks| Ok((report(&name, inputs.clone(), Some(c.horizon), checks), None));
            match ty {
                1 | 2 => {
                    let built = if *ty == 1 {
                        staircase_build(&sched.k, c.horizon, GrowthMode::ExtendTop).map(|s| s.presentation)
                    } else {
                        singlepath_build(&sched.k, c.horizon)
                    };
                    let p = match built {
                        Ok(p) => p,
                        Err(e) => return done(vec![failed("build", e)]),
                    };
                    let oracle = match HonestOracle::new(&p) {
                        Ok(o) => o,
                        Err(e) => return done(vec![failed("oracle", e)]),
                    };
                    let phi = if *ty == 1 { synthesize_type1(&p, &oracle, 0) } else { synthesize_type2(&p, &oracle) };
                    let phi = match phi {
                        Ok(phi) => phi,
                        Err(e) => return done(vec![failed("synthesis", e)]),
                    };
                    let mut checks = vec![
                        Check::new("valid", crate::embedding::is_valid(&phi), format!("{} nodes mapped", phi.map.len())),
                        Check::new("weakly_nontrivial", phi.weakly_nontrivial(), format!("{} nodes moved", phi.moved_nodes().len())),
                    ];
                    let decoded = if *ty == 1 {
                        let n0 = phi.target.successors(NodeId(0)).ok().and_then(|s| s.first().copied());
                        n0.ok_or_else(|| "root has no successor".to_string())
                            .and_then(|n0| staircase_decode(&phi, n0, 5, &sched.k).map(|d| d.bits).map_err(|e| e.to_string()))
                    } else {
                        path_extract(&oracle, NodeId(0))
                            .map_err(|e| e.to_string())
                            .and_then(|path| {
                                let m = path.iter().copied().find(|&x| phi.get(x).is_some_and(|y| y != x));
                                let m = m.ok_or("no path node is moved")?;
                                decode_from_embedding(&phi, m, 6, &sched.k).map_err(|e| e.to_string())
                            })
                    };
                    checks.push(match decoded {
                        Ok(bits) => Check::new("decode", bits == want, format!("K[0..=5] decoded {bits:?}, expected {want:?}")),
                        Err(e) => failed("decode", e),
                    });
                    if let Some(o) = out {
                        write(o, &write_embedding(&phi.map))?;
                    }
                    if let Some(o) = tree_out {
                        write(o, &write_treev1(&p))?;
                    }
                    done(checks)
                }
                _ => {
                    let sched_f = schedule(&fam_path)?;
                    let depth = 24;
                    let stack = match ApproxStack::new(sched_f.family.clone(), sched.k.clone(), depth, c.horizon) {
                        Ok(s) => s,
                        Err(e) => return done(vec![failed("build", e)]),
                    };
                    let t3 = match Type3Tree::build(&stack, c.horizon, depth) {
                        Ok(t) => t,
                        Err(e) => return done(vec![failed("build", e)]),
                    };
                    // the walk's reach is not known in advance; declare more levels until it fits
                    let mut deep = 64;
                    let (truth, dec) = loop {
                        let oracle_stack = match ApproxStack::new(sched_f.family.clone(), sched.k.clone(), deep, c.horizon) {
                            Ok(s) => s,
                            Err(e) => return done(vec![failed("build", e)]),
                        };
                        let truth = Type3Truth::from_stack(&oracle_stack, deep);
                        match jump_decode(&truth, t3.nodes_at(c.horizon), &sched_f.family, *levels) {
                            Ok(d) => break (truth, d),
                            Err(AnalysisError::HorizonTooSmall(_)) if deep < 4096 => deep *= 2,
                            Err(e) => return done(vec![failed("walk", e)]),
                        }
                    };
                    let lv = truth.levels();
                    let dominated: Vec<String> = (0..*levels)
                        .filter(|&n| (dec.witness.c[n] as u64) < lv[n])
                        .map(|n| format!("c({n}) = {} < b({n}) = {}", dec.witness.c[n], lv[n]))
                        .collect();
                    let wrong: Vec<String> = dec
                        .verdicts
                        .iter()
                        .enumerate()
                        .filter(|&(n, v)| (*v == Finiteness::Infinite) != sched_f.family.is_infinite(n))
                        .map(|(n, v)| format!("A_{n} judged {v:?}"))
                        .collect();
                    let checks = vec![
                        Check::from_failures("domination", &dominated, format!("c = {:?}", dec.witness.c)),
                        Check::from_failures("jump_verdicts", &wrong, format!("{:?}", dec.verdicts)),
                    ];
                    if let Some(o) = out {
                        let w = json!({ "witness": dec.witness, "verdicts": dec.verdicts });
                        write(o, &(serde_json::to_string_pretty(&w).expect("serializes") + "\n"))?;
                    }
                    done(checks)
                }
            }
        }
        AnalyzeCmd::Decode { tree, embedding, k, node, imax } => {
            let p = parse_treev1(&read(tree)?).map_err(fmt_err(tree))?;
            let t = Arc::new(p.final_tree());
            let m = parse_embedding(&read(embedding)?).map_err(fmt_err(embedding))?;
            let src = Arc::new(t.restrict(|x| m.contains_key(&x)).map_err(|e| CliError::Usage(e.to_string()))?);
            let phi = Embedding::new(src, t.clone(), m);
            let sched = schedule(k)?;
            let inputs = vec![show(tree), show(embedding), show(k)];
            let start = node.map(NodeId).or_else(|| t.successors(t.root()).ok().and_then(|s| s.first().copied()));
            let Some(start) = start else {
                return Err(CliError::Usage("tree has no successor of the root".into()));
            };
            let want: Vec<bool> = (0..=*imax as u64).map(|x| sched.k.contains_at(x, u64::MAX)).collect();
            let check = match staircase_decode(&phi, start, *imax, &sched.k) {
                Ok(d) => Check::new("decode", d.bits == want, format!("ψ = {:?}, bits {:?}", d.psi, d.bits)),
                Err(e) => failed("decode", e),
            };
            Ok((report("analyze decode", inputs, Some(p.horizon()), vec![check]), None))
        }
        AnalyzeCmd::Cac { tree, target } => {
            let p = parse_treev1(&read(tree)?).map_err(fmt_err(tree))?;
            let h = p.horizon();
            let checks = match chain_or_antichain(&p, h, *target, c.margin.min(h)) {
                Ok(cert) => {
                    let ok = cert.verify(&p.final_tree());
                    vec![Check::new("certificate", ok, format!("{cert:?}"))]
                }
                Err(e) => vec![failed("certificate", e)],
            };
            Ok((report("analyze cac", vec![show(tree)], Some(h), checks), None))
        }
    }
}

fn adversary(c: &Common, a: &AdversaryArgs) -> Outcome {
    let cfg = parse_adversary_config(&read(&a.config)?).map_err(fmt_err(&a.config))?;
    let inputs = vec![show(&a.config)];
    match a.construction {
        Construction::Isomaxinf => {
            if cfg.pairs.is_empty() {
                return Err(CliError::Usage("config declares no pair lines".into()));
            }
            let run = isomaxinf_run(cfg.pairs, c.horizon, a.inject_fault.map(|stage| Fault { stage }));
            let stable_by = c.horizon.saturating_sub(c.margin);
            let header =
                TraceHeader { construction: a.construction, horizon: c.horizon, requirements: run.pairs.len(), stable_by };
            if let Some(l) = &c.log {
                jsonl(l, Some(&header), &run.trace)?;
            }
            Ok((report("adversary isomaxinf", inputs, Some(c.horizon), isomaxinf_verify(&run.trace, stable_by)), None))
        }
        Construction::Cac => {
            let run = cac_build(&cfg.enumerators, c.horizon, a.inject_fault);
            let requirements = 2 * cfg.enumerators.len();
            let header = TraceHeader { construction: a.construction, horizon: c.horizon, requirements, stable_by: 0 };
            if let Some(l) = &c.log {
                jsonl(l, Some(&header), &run.trace)?;
            }
            let (mut checks, _) = cac_verify(&run.trace, requirements);
            let mb = run.tree.final_tree().max_branching();
            checks.push(Check::new("max_branching", mb == 2, format!("max branching {mb}")));
            Ok((report("adversary cac", inputs, Some(c.horizon), checks), None))
        }
    }
}

fn read_trace<T: for<'de> Deserialize<'de>>(p: &Path) -> Result<(TraceHeader, Vec<T>), CliError> {
    let text = read(p)?;
    let bad = |line: usize, e: serde_json::Error| CliError::Trace { path: show(p), msg: format!("line {}: {e}", line + 1) };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (i, first) = lines.next().ok_or_else(|| CliError::Trace { path: show(p), msg: "empty trace".into() })?;
    let header: TraceHeader = serde_json::from_str(first).map_err(|e| bad(i, e))?;
    let rows = lines.map(|(i, l)| serde_json::from_str(l).map_err(|e| bad(i, e))).collect::<Result<Vec<T>, _>>()?;
    Ok((header, rows))
}

fn verify(v: &VerifyArgs) -> Outcome {
    let inputs = vec![show(&v.trace)];
    match v.construction {
        Construction::Isomaxinf => {
            let (h, rows): (TraceHeader, Vec<StageRecord>) = read_trace(&v.trace)?;
            check_kind(&h, v)?;
            Ok((report("verify isomaxinf", inputs, Some(h.horizon), isomaxinf_verify(&rows, h.stable_by)), None))
        }
        Construction::Cac => {
            let (h, rows): (TraceHeader, Vec<CacRecord>) = read_trace(&v.trace)?;
            check_kind(&h, v)?;
            let (checks, _) = cac_verify(&rows, h.requirements);
            Ok((report("verify cac", inputs, Some(h.horizon), checks), None))
        }
    }
}

fn check_kind(h: &TraceHeader, v: &VerifyArgs) -> Result<(), CliError> {
    if h.construction != v.construction {
        return Err(CliError::Trace { path: show(&v.trace), msg: format!("trace is for {:?}", h.construction) });
    }
    Ok(())
}

fn summarize(files: &[PathBuf]) -> Outcome {
    if files.is_empty() {
        return Err(CliError::Usage("no report files given".into()));
    }
    let mut checks = Vec::new();
    let mut lines = Vec::new();
    for f in files {
        let r: Report = serde_json::from_str(&read(f)?)
            .map_err(|e| CliError::Trace { path: show(f), msg: e.to_string() })?;
        for ch in r.checks {
            lines.push(format!("{:<5} {:<28} {:<22} {}", if ch.passed() { "pass" } else { "FAIL" }, r.command, ch.name, ch.detail));
            checks.push(Check { name: format!("{}/{}", r.command, ch.name), ..ch });
        }
    }
    Ok((report("report", files.iter().map(|f| show(f)).collect(), None, checks), Some(lines.join("\n"))))
}
