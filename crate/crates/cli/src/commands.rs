use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use superclaim::agreement::{parse_confidence, parse_marks, render_report, report_json, Stage};
use superclaim::claim::{ClaimDocument, ClaimEntry, Slot};
use superclaim::class::slug;
use superclaim::io::dsl::emit_claims;
use superclaim::io::model_format::{parse_model_with, ModelOptions};
use superclaim::io::{from_json, parse_claims, to_json, to_nanopub, to_trig, NanopubConfig, ProvenanceInfo};
use superclaim::logic::{build_formula, build_schema, render_always_implication, render_formula, render_gloss, render_gloss_explained, RenderStyle};
use superclaim::reasoner::{corpus_consistency, Assumption, VerdictKind};
use superclaim::resolver::{bind, FileCache, Resolver, SearchOutcome, SearchSource, TermCandidate};
use superclaim::stats::{coverage_report, usage_report};
use superclaim::{evaluate, parse_qualifier, Status};

use crate::config::{FileConfig, OutputFormat};
use crate::{Cli, Command, EmitFormat};

const DEFAULT_LIMIT: usize = 5;

pub type Outcome = Result<u8, String>;

struct Ctx {
    file: FileConfig,
    format: OutputFormat,
    base_iri: Option<String>,
    reflexive: Option<bool>,
    offline: bool,
    cache_dir: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Outcome {
    let file = match &cli.global.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let ctx = Ctx {
        format: cli.global.format.or(file.format).unwrap_or_default(),
        base_iri: cli.global.base_iri.clone().or_else(|| file.base_iri.clone()),
        reflexive: if cli.global.no_reflexive { Some(false) } else { file.reflexive },
        offline: cli.global.offline || file.offline.unwrap_or(false),
        cache_dir: cli.global.cache_dir.clone().or_else(|| file.cache_dir.clone()),
        file,
    };
    match cli.command {
        Command::Validate { files, emit } => validate(&ctx, &files, emit),
        Command::Gloss { files, explain } => gloss(&ctx, &files, explain),
        Command::Formula { files, style, qualifier, no_context } => formula(&ctx, &files, &style, qualifier, no_context),
        Command::Eval { files, model } => eval(&ctx, &files, &model),
        Command::Check { files } => check(&ctx, &files),
        Command::Stats { files } => stats(&ctx, &files),
        Command::Coverage { files } => coverage(&ctx, &files),
        Command::Agreement { marks, confidence } => agreement(&ctx, &marks, confidence.as_deref()),
        Command::Resolve { labels, claims, sources, limit, interactive, output } => {
            resolve(&ctx, &labels, claims.as_deref(), &sources, limit, interactive, output.as_deref())
        }
        Command::Export { files, created, creator, out_dir } => export(&ctx, &files, created, creator, out_dir.as_deref()),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_file(path: &Path) -> Result<Result<ClaimDocument, String>, String> {
    let text = read(path)?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let parsed = if is_json { from_json(&text) } else { parse_claims(&text) };
    Ok(parsed.map(|d| d.with_source_path(path.display().to_string())).map_err(|e| format!("{}: {e}", path.display())))
}

/// Parse and merge claim files; any parse failure is an input error.
fn load_claims(files: &[PathBuf]) -> Result<ClaimDocument, String> {
    if files.is_empty() {
        return Err("no claim files given".into());
    }
    let mut entries: Vec<ClaimEntry> = Vec::new();
    for f in files {
        entries.extend(parse_file(f)??.entries);
    }
    ClaimDocument::new(entries).map_err(|e| e.to_string())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn validate(ctx: &Ctx, files: &[PathBuf], emit: Option<EmitFormat>) -> Outcome {
    let mut errors = Vec::new();
    let mut entries = Vec::new();
    for f in files {
        match parse_file(f)? {
            Ok(doc) => entries.extend(doc.entries),
            Err(e) => errors.push(e),
        }
    }
    let mut merged = None;
    if errors.is_empty() {
        match ClaimDocument::new(entries.clone()) {
            Ok(d) => merged = Some(d),
            Err(e) => errors.push(e.to_string()),
        }
    }
    let count = entries.len();
    if ctx.format == OutputFormat::Structured {
        print_json(&json!({ "valid": errors.is_empty(), "claims": count, "errors": errors }));
    } else {
        for e in &errors {
            println!("{e}");
        }
        if let Some(doc) = merged {
            match emit {
                Some(EmitFormat::Dsl) => print!("{}", emit_claims(&doc)),
                Some(EmitFormat::Json) => print!("{}", to_json(&doc)),
                None => println!("ok: {count} claims"),
            }
        }
    }
    Ok(u8::from(!errors.is_empty()))
}

fn gloss(ctx: &Ctx, files: &[PathBuf], explain: bool) -> Outcome {
    let doc = load_claims(files)?;
    let render = if explain { render_gloss_explained } else { render_gloss };
    let rows: Vec<(String, String)> = doc.instances().map(|i| (i.id().to_string(), render(i))).collect();
    if ctx.format == OutputFormat::Structured {
        print_json(&Value::Array(rows.iter().map(|(id, g)| json!({ "id": id, "gloss": g })).collect()));
    } else {
        for (id, g) in rows {
            println!("{id}: {g}");
        }
    }
    Ok(0)
}

fn formula(ctx: &Ctx, files: &[PathBuf], style: &str, qualifier: Option<String>, no_context: bool) -> Outcome {
    let style = RenderStyle::parse(style).ok_or_else(|| format!("unknown style `{style}` (unicode, ascii, latex)"))?;
    let mut rows = Vec::new();
    if let Some(q) = qualifier {
        let q = parse_qualifier(&q).map_err(|e| e.to_string())?;
        let f = build_schema(q, !no_context);
        rows.push((q.phrase(), render_formula(&f, style), render_always_implication(&f, style)));
    } else {
        let doc = load_claims(files)?;
        for inst in doc.instances() {
            let f = build_formula(inst);
            rows.push((inst.id().to_string(), render_formula(&f, style), render_always_implication(&f, style)));
        }
    }
    if ctx.format == OutputFormat::Structured {
        print_json(&Value::Array(
            rows.iter().map(|(id, f, imp)| json!({ "id": id, "formula": f, "implication": imp })).collect(),
        ));
    } else {
        for (id, f, imp) in rows {
            println!("{id}: {f}");
            if let Some(imp) = imp {
                println!("{}  {imp}", " ".repeat(id.chars().count()));
            }
        }
    }
    Ok(0)
}

fn eval(ctx: &Ctx, files: &[PathBuf], model: &Path) -> Outcome {
    let doc = load_claims(files)?;
    let m = parse_model_with(&read(model)?, ModelOptions { reflexive: ctx.reflexive })
        .map_err(|e| format!("{}: {e}", model.display()))?;
    let mut rows = Vec::new();
    for inst in doc.instances() {
        let r = evaluate(&m, inst).map_err(|e| e.to_string())?;
        rows.push((inst.id().to_string(), r));
    }
    if ctx.format == OutputFormat::Structured {
        print_json(&Value::Array(
            rows.iter()
                .map(|(id, r)| {
                    json!({ "id": id, "status": r.status.as_str(), "ratio": r.ratio.map(|q| format!("{}/{}", q.numer(), q.denom())),
                            "condition_count": r.condition_count, "event_count": r.event_count })
                })
                .collect(),
        ));
    } else {
        for (id, r) in rows {
            match (r.status, r.ratio) {
                (Status::Indeterminate, _) | (_, None) => println!("{id}: indeterminate, empty condition set"),
                (s, Some(q)) => println!(
                    "{id}: {}, ratio {}/{} ({} of {} condition pairs)",
                    s.as_str(),
                    q.numer(),
                    q.denom(),
                    r.event_count,
                    r.condition_count
                ),
            }
        }
    }
    Ok(0)
}

fn check(ctx: &Ctx, files: &[PathBuf]) -> Outcome {
    let doc = load_claims(files)?;
    let instances: Vec<_> = doc.instances().cloned().collect();
    let mut findings = corpus_consistency(&instances).map_err(|e| e.to_string())?;
    if ctx.reflexive == Some(false) {
        findings.retain(|f| !f.verdict.assumptions.contains(&Assumption::ReflexiveAccessibility));
    }
    let contradictions = findings.iter().filter(|f| f.verdict.kind == VerdictKind::Contradicts).count();
    if ctx.format == OutputFormat::Structured {
        print_json(&json!({
            "contradictions": contradictions,
            "entailments": findings.len() - contradictions,
            "findings": findings.iter().map(|f| json!({
                "kind": f.verdict.kind.as_str(),
                "claims": [f.ids.0, f.ids.1],
                "assumptions": f.verdict.assumptions.iter().map(|a| a.as_str()).collect::<Vec<_>>(),
                "rules": f.verdict.rule_trace,
            })).collect::<Vec<_>>(),
        }));
    } else {
        for f in &findings {
            let arrow = if f.verdict.kind == VerdictKind::Contradicts { "<->" } else { "=>" };
            let assumptions: Vec<&str> = f.verdict.assumptions.iter().map(|a| a.as_str()).collect();
            println!(
                "{}: {} {arrow} {} [{}] assuming {}",
                f.verdict.kind.as_str(),
                f.ids.0,
                f.ids.1,
                f.verdict.rule_trace.join(", "),
                if assumptions.is_empty() { "nothing".to_string() } else { assumptions.join(", ") }
            );
        }
        println!("{} contradictions, {} entailments among {} claims", contradictions, findings.len() - contradictions, instances.len());
    }
    Ok(u8::from(contradictions > 0))
}

fn stats(ctx: &Ctx, files: &[PathBuf]) -> Outcome {
    let r = usage_report(&load_claims(files)?);
    match ctx.format {
        OutputFormat::Structured => print_json(&r.to_json()),
        OutputFormat::Text => print!("{}", r.render_text()),
    }
    Ok(0)
}

fn coverage(ctx: &Ctx, files: &[PathBuf]) -> Outcome {
    let r = coverage_report(&load_claims(files)?);
    match ctx.format {
        OutputFormat::Structured => print_json(&r.to_json()),
        OutputFormat::Text => print!("{}", r.render_text()),
    }
    Ok(0)
}

fn agreement(ctx: &Ctx, marks: &[PathBuf], confidence: Option<&Path>) -> Outcome {
    let mut reports = Vec::new();
    for (i, path) in marks.iter().enumerate() {
        let stage = if i == 0 { Stage::BeforeDiscussion } else { Stage::AfterDiscussion };
        let mut m = parse_marks(&read(path)?, stage).map_err(|e| format!("{}: {e}", path.display()))?;
        if let Some(c) = confidence {
            parse_confidence(&read(c)?, &mut m).map_err(|e| format!("{}: {e}", c.display()))?;
        }
        reports.push((path, m));
    }
    if ctx.format == OutputFormat::Structured {
        print_json(&Value::Array(
            reports.iter().map(|(p, m)| json!({ "file": p.display().to_string(), "report": report_json(m) })).collect(),
        ));
    } else {
        for (i, (p, m)) in reports.iter().enumerate() {
            if i > 0 {
                println!();
            }
            println!("== {}", p.display());
            print!("{}", render_report(m));
        }
    }
    Ok(0)
}

fn parse_sources(names: &[String], ctx: &Ctx) -> Result<BTreeSet<SearchSource>, String> {
    let names: Vec<String> = if names.is_empty() {
        ctx.file.resolver.sources.clone().unwrap_or_else(|| vec!["wikidata".into()])
    } else {
        names.iter().flat_map(|n| n.split(',').map(str::to_string)).collect()
    };
    names
        .iter()
        .map(|n| SearchSource::parse(n).ok_or_else(|| format!("unknown source `{n}` (wikidata, bioportal, lov)")))
        .collect()
}

fn make_resolver(ctx: &Ctx) -> Result<Resolver, String> {
    let rc = ctx.file.resolver_config(ctx.offline)?;
    let cache = ctx.cache_dir.as_ref().map(|d| FileCache::new(d, rc.ttl));
    let fetcher: Option<Box<dyn superclaim::resolver::Fetcher>> =
        if ctx.offline { None } else { Some(Box::new(crate::http::HttpFetcher::new()?)) };
    Ok(Resolver::new(rc, fetcher, cache))
}

fn candidate_json(c: &TermCandidate) -> Value {
    serde_json::to_value(c).expect("candidates serialize")
}

fn print_outcome(label: &str, out: &SearchOutcome) {
    println!("{label}:");
    if out.candidates.is_empty() {
        println!("  (no candidates)");
    }
    for (i, c) in out.candidates.iter().enumerate() {
        let desc = c.description.as_deref().map(|d| format!(" - {d}")).unwrap_or_default();
        println!("  {:>2}. [{} #{}] {} <{}>{desc}", i + 1, c.source, c.rank, c.label, c.iri);
    }
    for w in &out.warnings {
        eprintln!("warning: {label}: {w}");
    }
}

fn resolve(
    ctx: &Ctx,
    labels: &[String],
    claims: Option<&Path>,
    sources: &[String],
    limit: Option<usize>,
    interactive: bool,
    output: Option<&Path>,
) -> Outcome {
    let sources = parse_sources(sources, ctx)?;
    let limit = limit.or(ctx.file.resolver.limit).unwrap_or(DEFAULT_LIMIT);
    let resolver = make_resolver(ctx)?;
    let search = |label: &str| resolver.search(label, &sources, limit).map_err(|e| format!("`{label}`: {e}"));

    let Some(path) = claims else {
        if labels.is_empty() {
            return Err("give labels to look up or --claims <PATH>".into());
        }
        let mut results = Vec::new();
        for l in labels {
            results.push((l.clone(), search(l)?));
        }
        emit_search_results(ctx, &results);
        return Ok(0);
    };

    let mut doc = load_claims(&[path.to_path_buf()])?;
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut results = Vec::new();
    for entry in &mut doc.entries {
        let ClaimEntry::Expressible(inst) = entry else { continue };
        for slot in Slot::ALL {
            let Some(label) = inst.slot(slot).and_then(|c| match c {
                superclaim::ClassExpr::Atomic { label, term: None } => Some(label.clone()),
                _ => None,
            }) else {
                continue;
            };
            let out = search(&label)?;
            let key = format!("{} {} `{label}`", inst.id(), slot.as_str());
            if interactive {
                print_outcome(&key, &out);
                if out.candidates.is_empty() {
                    continue;
                }
                eprint!("choose 1-{} (empty to skip): ", out.candidates.len());
                io::stderr().flush().ok();
                let answer = lines.next().transpose().map_err(|e| e.to_string())?.unwrap_or_default();
                let answer = answer.trim();
                if answer.is_empty() {
                    continue;
                }
                let pick = answer
                    .parse::<usize>()
                    .ok()
                    .and_then(|n| n.checked_sub(1))
                    .and_then(|n| out.candidates.get(n))
                    .ok_or_else(|| format!("invalid choice `{answer}`"))?;
                *inst = bind(inst, slot, pick).map_err(|e| e.to_string())?;
            } else {
                results.push((key, out));
            }
        }
    }
    if interactive {
        let text = emit_claims(&doc);
        match output {
            Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?,
            None => print!("{text}"),
        }
    } else {
        emit_search_results(ctx, &results);
    }
    Ok(0)
}

fn emit_search_results(ctx: &Ctx, results: &[(String, SearchOutcome)]) {
    if ctx.format == OutputFormat::Structured {
        print_json(&Value::Array(
            results
                .iter()
                .map(|(l, o)| {
                    json!({ "query": l, "candidates": o.candidates.iter().map(candidate_json).collect::<Vec<_>>(),
                            "warnings": o.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>() })
                })
                .collect(),
        ));
    } else {
        for (l, o) in results {
            print_outcome(l, o);
        }
    }
}

fn export(ctx: &Ctx, files: &[PathBuf], created: Option<String>, creator: Option<String>, out_dir: Option<&Path>) -> Outcome {
    let base = ctx.base_iri.clone().ok_or("export needs --base-iri (or base_iri in the config file)")?;
    let doc = load_claims(files)?;
    let prov = ProvenanceInfo {
        created: created.unwrap_or_else(|| chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string()),
        creator: creator.or_else(|| ctx.file.creator.clone()).unwrap_or_else(|| "unknown".into()),
    };
    let base = if base.ends_with('/') || base.ends_with('#') { base } else { format!("{base}/") };
    let instances: Vec<_> = doc.instances().collect();
    let single = instances.len() == 1;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    for inst in instances {
        let cfg = NanopubConfig::new(if single && out_dir.is_none() { base.clone() } else { format!("{base}{}/", slug(inst.id())) });
        let np = to_nanopub(inst, &prov, &cfg).map_err(|e| e.to_string())?;
        let trig = to_trig(&np);
        match out_dir {
            Some(dir) => {
                let p = dir.join(format!("{}.trig", slug(inst.id())));
                fs::write(&p, trig).map_err(|e| format!("{}: {e}", p.display()))?;
            }
            None => print!("{trig}"),
        }
    }
    Ok(0)
}
