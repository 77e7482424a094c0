//! The `entangle` command line.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use super::cache::Cache;
use super::lattice::subgroup_lattice;
use super::spec::{Built, GroupSpec};
use super::verify::{run_all, stretch_caps, summarize};
use crate::entangle::{
    classify_2q, cyclic_witness, ent_set, ent_set_direct, entangling_subgroups, groupcomp_verify, ContextSummary,
    EntanglingRecord, EntReport,
};
use crate::error::{Error, Result};
use crate::group::{enumerate_subgroups, subgroup_classes, Caps, Enumeration, FiniteGroup, LatticeStore, Subgroup};
use crate::group_id::{identify_with_caps, ISO_LABEL_VERSION};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "entangle", version, about = "Entanglement types of subgroups of GL2(Z/pq)")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    pub format: Format,
    /// Neither read nor write the subgroup-lattice cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Largest group order to build.
    #[arg(long, global = true)]
    pub max_order: Option<usize>,
    /// Largest group to enumerate up to conjugacy.
    #[arg(long, global = true)]
    pub max_enumerate: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Direct,
    Goursat,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Entanglement type of G and the basic context data.
    Type(SpecArg),
    /// Every achievable base-change type, with witnesses.
    EntSet {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    /// A subgroup whose base-change type is Z/ell.
    Witness {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        ell: u64,
    },
    /// Subgroups H with H ∩ N_p = H ∩ N_q properly inside H.
    Entangling {
        #[command(flatten)]
        spec: SpecArg,
        /// Every subgroup rather than one per conjugacy class.
        #[arg(long)]
        all: bool,
    },
    /// Case table for p = 2 and odd q, checked against the computed Ent set.
    Classify2q {
        #[command(flatten)]
        spec: SpecArg,
        /// Skip computing the Ent set.
        #[arg(long)]
        no_compute: bool,
    },
    /// Subgroups up to conjugacy, or all of them.
    Subgroups {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        all: bool,
    },
    /// Run the reproduction matrix on the bundled fixtures.
    VerifyPaper {
        /// Also run the large GL2(3) x GL2(q) targets, with raised caps.
        #[arg(long)]
        stretch: bool,
    },
    /// Subgroup lattice up to conjugacy.
    Lattice {
        #[command(flatten)]
        spec: SpecArg,
        /// Write the lattice as a DOT digraph to this file ("-" for stdout).
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
pub struct SpecArg {
    /// Group spec: a JSON file, "-" for stdin, or "fixture:<name>".
    #[arg(long)]
    pub spec: String,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Type(_) => "type",
            Command::EntSet { .. } => "ent-set",
            Command::Witness { .. } => "witness",
            Command::Entangling { .. } => "entangling",
            Command::Classify2q { .. } => "classify-2q",
            Command::Subgroups { .. } => "subgroups",
            Command::VerifyPaper { .. } => "verify-paper",
            Command::Lattice { .. } => "lattice",
        }
    }

    fn spec(&self) -> Option<&SpecArg> {
        match self {
            Command::Type(s)
            | Command::EntSet { spec: s, .. }
            | Command::Witness { spec: s, .. }
            | Command::Entangling { spec: s, .. }
            | Command::Classify2q { spec: s, .. }
            | Command::Subgroups { spec: s, .. }
            | Command::Lattice { spec: s, .. } => Some(s),
            Command::VerifyPaper { .. } => None,
        }
    }
}

/// Every JSON report has this shape.
#[derive(Serialize)]
pub struct Envelope {
    pub schema_version: u32,
    pub iso_label_version: u32,
    pub command: &'static str,
    pub spec_hash: Option<String>,
    pub spec: Option<Value>,
    pub result: Value,
}

/// A command's result: the JSON payload, a text rendering, and whether it
/// counts as success.
struct Outcome {
    result: Value,
    text: String,
    success: bool,
}

impl Outcome {
    fn ok(result: impl Serialize, text: String) -> Result<Outcome> {
        Ok(Outcome {
            result: serde_json::to_value(result).expect("serializable report"),
            text,
            success: true,
        })
    }
}

pub fn read_spec(arg: &str) -> Result<GroupSpec> {
    if let Some(name) = arg.strip_prefix("fixture:") {
        return super::fixtures::fixture(name);
    }
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Precondition(format!("cannot read spec from stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Precondition(format!("cannot read spec {arg}: {e}")))?
    };
    GroupSpec::parse(&text)
}

fn type_cmd(built: &Built) -> Result<Outcome> {
    let ctx = built.require_context()?;
    let summary = ContextSummary::of(ctx);
    let result = json!({
        "context": summary,
        "n_p_order": ctx.n_p.order(),
        "n_q_order": ctx.n_q.order(),
        "join_order": ctx.join.order(),
        "type_order": ctx.type_order(),
        "full_product": ctx.is_full_product(),
    });
    let text = format!(
        "G <= GL2(Z/{}), |G| = {}, |G mod {}| = {}, |G mod {}| = {}, d = {}\nentanglement type: {}\n",
        ctx.modulus(),
        summary.order,
        ctx.p,
        summary.image_p_order,
        ctx.q,
        summary.image_q_order,
        summary.d,
        summary.entanglement_type
    );
    Outcome::ok(result, text)
}

fn ent_set_cmd(built: &Built, strategy: StrategyArg, caps: &Caps, store: Option<&dyn LatticeStore>) -> Result<(Outcome, bool)> {
    let ctx = built.require_context()?;
    let report: EntReport = match strategy {
        StrategyArg::Auto => ent_set(ctx, caps, store)?,
        StrategyArg::Direct => ent_set_direct(ctx, caps, store)?,
        StrategyArg::Goursat => {
            if !ctx.is_full_product() {
                return Err(Error::Precondition(format!(
                    "the Goursat strategy needs G to be the full product of its images; its type is {}",
                    ctx.entanglement_type()
                )));
            }
            ent_set(ctx, caps, store)?
        }
    };
    let types: Vec<String> = report.classes().iter().map(|c| c.to_string()).collect();
    let text = format!(
        "Ent set ({:?}, {} scanned): {}\n",
        report.strategy,
        report.scanned,
        types.join(", ")
    );
    let hit = report.cache_hit;
    let result = json!({ "types": types, "report": report });
    Ok((Outcome::ok(result, text)?, hit))
}

fn witness_cmd(built: &Built, ell: u64) -> Result<Outcome> {
    let ctx = built.require_context()?;
    let h = cyclic_witness(ctx, ell)?;
    // re-verify from the member list alone
    let again = Subgroup::from_members(&ctx.group, h.members())?;
    let class = ctx.base_change_type(&again)?;
    let verified = class == crate::group_id::IsoClass::cyclic(ell);
    let branch = if ctx.type_order() as u64 % ell == 0 { "quotient" } else { "kernels" };
    let g = &ctx.group;
    let result = json!({
        "ell": ell,
        "branch": branch,
        "order": h.order(),
        "base_change_type": class,
        "verified": verified,
        "generators": h.generators().iter().map(|&x| g.label(x)).collect::<Vec<_>>(),
        "members": h.members(),
    });
    let text = format!(
        "witness for Z/{ell} ({branch} branch): order {}, type {class}, verified {verified}\ngenerators: {}\n",
        h.order(),
        h.generators().iter().map(|&x| g.label(x)).collect::<Vec<_>>().join(" ")
    );
    let mut out = Outcome::ok(result, text)?;
    out.success = verified;
    Ok(out)
}

fn entangling_cmd(built: &Built, all: bool, caps: &Caps) -> Result<Outcome> {
    let ctx = built.require_context()?;
    let mode = if all { Enumeration::All } else { Enumeration::UpToConjugacy };
    let found = entangling_subgroups(&ctx.group, &ctx.n_p, &ctx.n_q, mode, caps)?;
    let mut records = Vec::new();
    let mut lines = Vec::new();
    for e in &found {
        let comp = groupcomp_verify(&ctx.group, &ctx.n_p, &ctx.n_q, &e.subgroup)?;
        let record = EntanglingRecord::from(e);
        let class = record.class.as_ref().map_or("-".to_string(), |c| c.to_string());
        lines.push(format!("order {:>4}  meet {:>3}  quotient {class}", record.order, record.meet_order));
        records.push(json!({ "record": record, "groupcomp_holds": comp }));
    }
    let result = json!({
        "mode": if all { "all" } else { "up_to_conjugacy" },
        "count": found.len(),
        "subgroups": records,
    });
    let text = format!("{} entangling subgroups\n{}\n", found.len(), lines.join("\n"));
    Outcome::ok(result, text)
}

fn classify_cmd(built: &Built, compute: bool, caps: &Caps, store: Option<&dyn LatticeStore>) -> Result<Outcome> {
    let ctx = built.require_context()?;
    let c = classify_2q(ctx, compute, caps, store)?;
    let show = |v: &Option<Vec<crate::group_id::IsoClass>>| {
        v.as_ref().map_or("-".to_string(), |v| {
            v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        })
    };
    let text = format!(
        "q = {}, |im_2| = {}, im_q surjective {}, type trivial {}\npredicted: {}\ncomputed: {}\n",
        c.q,
        c.image_2_order,
        c.image_q_surjective,
        c.type_trivial,
        show(&c.predicted),
        show(&c.computed)
    );
    let success = c.matches_prediction != Some(false) && c.within_bound != Some(false);
    let mut out = Outcome::ok(c, text)?;
    out.success = success;
    Ok(out)
}

fn subgroups_cmd(built: &Built, all: bool, caps: &Caps, store: Option<&dyn LatticeStore>) -> Result<(Outcome, bool)> {
    let g = &built.group;
    let (subs, sizes, hit): (Vec<Subgroup>, Vec<usize>, bool) = if all {
        let subs = enumerate_subgroups(g, Enumeration::All, caps)?;
        let n = subs.len();
        (subs, vec![1; n], false)
    } else {
        let (classes, hit) = subgroup_classes(g, caps, store)?;
        let sizes = classes.iter().map(|c| c.size).collect();
        (classes.into_iter().map(|c| c.representative).collect(), sizes, hit)
    };
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for (h, size) in subs.iter().zip(sizes) {
        let class = identify_with_caps(&Arc::new(FiniteGroup::from_subgroup(h)), caps);
        let bc = built.context.as_ref().map(|ctx| ctx.base_change_type(h)).transpose()?;
        lines.push(format!(
            "order {:>5}  x{size:<4} {class}{}",
            h.order(),
            bc.as_ref().map_or(String::new(), |t| format!("  type {t}"))
        ));
        rows.push(json!({
            "order": h.order(),
            "conjugates": size,
            "class": class,
            "base_change_type": bc,
            "members": h.members(),
        }));
    }
    let result = json!({
        "mode": if all { "all" } else { "up_to_conjugacy" },
        "group_order": g.order(),
        "count": rows.len(),
        "subgroups": rows,
    });
    let text = format!("{} subgroups of a group of order {}\n{}\n", rows.len(), g.order(), lines.join("\n"));
    Ok((Outcome::ok(result, text)?, hit))
}

fn lattice_cmd(
    built: &Built,
    dot: Option<&PathBuf>,
    caps: &Caps,
    store: Option<&dyn LatticeStore>,
    stdout: &mut dyn Write,
) -> Result<(Option<Outcome>, bool)> {
    let lattice = subgroup_lattice(&built.group, built.context.as_ref(), caps, store)?;
    let hit = lattice.cache_hit;
    let name = format!("subgroups of a group of order {}", built.group.order());
    match dot {
        Some(path) if path.as_os_str() == "-" => {
            stdout
                .write_all(lattice.to_dot(&name).as_bytes())
                .map_err(|e| Error::Io(e.to_string()))?;
            Ok((None, hit))
        }
        _ => {
            if let Some(path) = dot {
                std::fs::write(path, lattice.to_dot(&name))
                    .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
            }
            let text = format!("{} classes, {} covering edges\n", lattice.nodes.len(), lattice.edges.len());
            Ok((Some(Outcome::ok(&lattice, text)?), hit))
        }
    }
}

fn verify_cmd(stretch: bool, caps: &Caps, store: Option<&dyn LatticeStore>, stderr: &mut dyn Write) -> Result<Outcome> {
    let results = run_all(caps, store, stretch);
    let mut text = String::new();
    for r in &results {
        let line = format!(
            "{} [{}] {}: {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.detail
        );
        text.push_str(&line);
        let _ = writeln!(stderr, "verify-paper [{}] {:.2}s", r.id, r.elapsed.as_secs_f64());
    }
    let success = results.iter().all(|r| r.passed);
    let result = json!({ "summary": summarize(&results), "items": results });
    Ok(Outcome {
        result,
        text,
        success,
    })
}

fn caps_for(cli: &Cli) -> Caps {
    let mut caps = match &cli.command {
        Command::VerifyPaper { stretch: true } => stretch_caps(),
        _ => Caps::default(),
    };
    if let Some(n) = cli.max_order {
        caps.order = n;
    }
    if let Some(n) = cli.max_enumerate {
        caps.enumerate_classes = n;
    }
    caps
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool> {
    let start = Instant::now();
    let caps = caps_for(cli);
    let cache = if cli.no_cache { None } else { Cache::from_env() };
    let store: Option<&dyn LatticeStore> = cache.as_ref().map(|c| c as &dyn LatticeStore);
    let spec = cli.command.spec().map(|s| read_spec(&s.spec)).transpose()?;
    let built = spec.as_ref().map(|s| s.build(&caps)).transpose()?;
    let built_ref = || built.as_ref().expect("command has a spec");
    let mut cache_hit = None;
    let outcome = match &cli.command {
        Command::Type(_) => Some(type_cmd(built_ref())?),
        Command::EntSet { strategy, .. } => {
            let (o, hit) = ent_set_cmd(built_ref(), *strategy, &caps, store)?;
            cache_hit = Some(hit);
            Some(o)
        }
        Command::Witness { ell, .. } => Some(witness_cmd(built_ref(), *ell)?),
        Command::Entangling { all, .. } => Some(entangling_cmd(built_ref(), *all, &caps)?),
        Command::Classify2q { no_compute, .. } => Some(classify_cmd(built_ref(), !no_compute, &caps, store)?),
        Command::Subgroups { all, .. } => {
            let (o, hit) = subgroups_cmd(built_ref(), *all, &caps, store)?;
            cache_hit = Some(hit);
            Some(o)
        }
        Command::VerifyPaper { stretch } => Some(verify_cmd(*stretch, &caps, store, stderr)?),
        Command::Lattice { dot, .. } => {
            let (o, hit) = lattice_cmd(built_ref(), dot.as_ref(), &caps, store, stdout)?;
            cache_hit = Some(hit);
            o
        }
    };
    let mut success = true;
    if let Some(outcome) = outcome {
        success = outcome.success;
        let rendered = match cli.format {
            Format::Text => outcome.text,
            Format::Json => {
                let envelope = Envelope {
                    schema_version: SCHEMA_VERSION,
                    iso_label_version: ISO_LABEL_VERSION,
                    command: cli.command.name(),
                    spec_hash: spec.as_ref().map(|s| s.content_hash()),
                    spec: spec
                        .as_ref()
                        .map(|s| serde_json::from_str(&s.to_canonical_json()).expect("canonical JSON")),
                    result: outcome.result,
                };
                let mut s = serde_json::to_string_pretty(&envelope).expect("serializable report");
                s.push('\n');
                s
            }
        };
        stdout.write_all(rendered.as_bytes()).map_err(|e| Error::Io(e.to_string()))?;
    }
    let provenance = match (&cache, cache_hit) {
        (None, _) => "cache disabled".to_string(),
        (Some(c), Some(true)) => format!("cache hit ({})", c.dir().display()),
        (Some(c), Some(false)) => format!("cache miss ({})", c.dir().display()),
        (Some(c), None) => format!("cache {}", c.dir().display()),
    };
    let _ = writeln!(
        stderr,
        "entangle {}: {:.3}s, {provenance}",
        cli.command.name(),
        start.elapsed().as_secs_f64()
    );
    Ok(success)
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code: 0 on success, 2 on bad input or a failed
/// precondition, 1 on internal failure or a failed verification.
pub fn run_command<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| execute(&cli, stdout, stderr)));
    match result {
        Ok(Ok(true)) => 0,
        Ok(Ok(false)) => 1,
        Ok(Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_precondition() {
                2
            } else {
                1
            }
        }
        Err(_) => {
            let _ = writeln!(stderr, "error: internal failure");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["entangle", "--no-cache"];
        argv.extend_from_slice(args);
        let code = run_command(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ent_set_json() {
        let (code, out, _) = run(&["ent-set", "--spec", "fixture:prod-gl2-2-gl2-3"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["result"]["types"], json!(["1", "Z/2", "Z/3", "S3"]));
        assert_eq!(v["spec_hash"].as_str().unwrap().len(), 64);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["type", "--spec", "fixture:gl2-3"]).0, 2);
        assert_eq!(run(&["type", "--spec", "/nonexistent.json"]).0, 2);
        assert_eq!(run(&["witness", "--ell", "5", "--spec", "fixture:prod-gl2-2-gl2-3"]).0, 2);
        assert_eq!(run(&["frobnicate"]).0, 2);
        assert_eq!(run(&["--help"]).0, 0);
        let (code, out, _) = run(&["--format", "text", "witness", "--ell", "3", "--spec", "fixture:prod-gl2-2-gl2-3"]);
        assert_eq!(code, 0);
        assert!(out.contains("verified true"));
    }

    #[test]
    fn deterministic_reports() {
        let args = ["entangling", "--spec", "fixture:fiber-z2-s3-s3"];
        let (c1, a, _) = run(&args);
        let (c2, b, _) = run(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["result"]["count"], 5);
    }

    #[test]
    fn lattice_dot_to_stdout() {
        let (code, out, _) = run(&["lattice", "--dot", "-", "--spec", "fixture:prod-gl2-2-gl2-3"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("digraph"));
        assert!(out.contains("type S3"));
    }
}
