//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.
//!
//! Criteria 8 and 9 compare against the original study files when
//! `SUPERCLAIM_DATASET_DIR` (holding `dataset-a.claims` and
//! `dataset-b.claims`) or `SUPERCLAIM_MARKS_DIR` (holding `before.tsv` and
//! `after.tsv`) are set; otherwise they run their synthetic substitutes.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use oxrdf::GraphName;
use oxttl::TriGParser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{fixture, interpret, random_instance, random_model, read_fixture, ModelShape};
use superclaim::agreement::{
    claim_level, level_distribution, mistake_statistics, pairwise_agreement, parse_marks, AgreementLevel, Mark, Stage,
    StudyMarks,
};
use superclaim::claim::Slot;
use superclaim::decimal::{percent, round_decimal};
use superclaim::io::model_format::{emit_model, parse_model};
use superclaim::io::{emit_claims, from_json, parse_claims, to_json, to_nanopub, to_trig, NanopubConfig, ProvenanceInfo};
use superclaim::logic::{build_formula, build_schema, render_always_implication, render_formula, render_gloss_explained, RenderStyle};
use superclaim::reasoner::{check_pair, qualifier_entails};
use superclaim::stats::{coverage_report, usage_report, QualifierFamily};
use superclaim::vocab::{qualifier_params, Comparison, Modality, QualifierBase};
use superclaim::{evaluate, ClaimDocument, FiniteModel, Qualifier, Rational, RelationGroup, Status, SuperPatternInstance};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn q(text: &str) -> Qualifier {
    superclaim::parse_qualifier(text).unwrap()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    // (phrase, numerator, denominator, comparison) transcribed from the qualifier table.
    let table: [(&str, u64, u64, Comparison); 10] = [
        ("always", 1, 1, Comparison::Equal),
        ("generally", 9, 10, Comparison::AtLeast),
        ("mostly", 1, 2, Comparison::AtLeast),
        ("frequently", 1, 10, Comparison::AtLeast),
        ("sometimes", 1, 1000, Comparison::AtLeast),
        ("never", 0, 1, Comparison::Equal),
        ("generally not", 1, 10, Comparison::AtMost),
        ("mostly not", 1, 2, Comparison::AtMost),
        ("frequently not", 9, 10, Comparison::AtMost),
        ("sometimes not", 999, 1000, Comparison::AtMost),
    ];
    let mut seen = BTreeSet::new();
    for (phrase, n, d, cmp) in table {
        for (prefix, modality) in [("", Modality::Actual), ("can ", Modality::Possible)] {
            let text = format!("{prefix}{phrase}");
            let p = qualifier_params(q(&text));
            ensure(p.threshold == Rational::new(n, d) && p.comparison == cmp && p.modality == modality, || {
                format!("{text}: got {:?}", p)
            })?;
            seen.insert(q(&text));
        }
    }
    ensure(seen.len() == 20 && Qualifier::all().len() == 20, || "expected 20 distinct qualifiers".into())?;
    within(Duration::from_secs(1), start)?;
    Ok("20 qualifiers match the table and the modality rule".into())
}

fn golden(name: &str) -> String {
    read_fixture(&format!("golden/{name}")).trim_end_matches('\n').to_string()
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let always = build_schema(q("always"), true);
    let cases = [
        ("always.txt", render_formula(&always, RenderStyle::UnicodeMath)),
        ("always-implication.txt", render_always_implication(&always, RenderStyle::UnicodeMath).unwrap_or_default()),
        ("can-generally-not.txt", render_formula(&build_schema(q("can generally not"), true), RenderStyle::UnicodeMath)),
        ("context-free-can-always.txt", render_formula(&build_schema(q("can always"), false), RenderStyle::UnicodeMath)),
    ];
    for (file, got) in cases {
        let want = golden(file);
        ensure(got == want, || format!("{file}: got `{got}`, want `{want}`"))?;
    }
    within(Duration::from_secs(1), start)?;
    Ok("always, can-generally-not and context-free renderings match golden files".into())
}

fn koa() -> SuperPatternInstance {
    parse_claims(&read_fixture("koa.claims")).unwrap().instances().next().unwrap().clone()
}

fn criterion_3() -> Check {
    let got = render_gloss_explained(&koa());
    let want = golden("koa-gloss.txt");
    ensure(got == want, || format!("got `{got}`"))?;
    let formula = render_formula(&build_formula(&koa()), RenderStyle::UnicodeMath);
    ensure(formula == golden("koa-formula.txt"), || format!("formula `{formula}`"))?;
    Ok("example claim reads exactly as the quoted sentence".into())
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let models = 600;
    let mut comparisons = 0;
    let mut statuses = BTreeMap::new();
    for i in 0..models {
        let shape = ModelShape { reflexive: i % 3 != 0, taxonomy_closed: i % 2 == 0, ..Default::default() };
        let m = random_model(&mut rng, shape);
        for j in 0..5 {
            let inst = random_instance(&mut rng, &format!("r{j}"));
            let got = evaluate(&m, &inst).map_err(|e| e.to_string())?;
            let want = interpret(&m, &build_formula(&inst));
            let agree = match want {
                None => got.status == Status::Indeterminate && got.ratio.is_none(),
                Some((ratio, ok)) => got.ratio == Some(ratio) && got.holds() == ok && got.status != Status::Indeterminate,
            };
            ensure(agree, || format!("model {i}, instance {inst:?}: evaluator {got:?}, interpreter {want:?}"))?;
            *statuses.entry(got.status.as_str()).or_insert(0) += 1;
            comparisons += 1;
        }
    }
    ensure(statuses.len() == 3, || format!("degenerate sample: {statuses:?}"))?;
    within(Duration::from_secs(30), start)?;
    Ok(format!("{comparisons} evaluations on {models} models agree with the interpreter {statuses:?}"))
}

/// Subject `s`, object `o`, `n` subjects of which `k` reach an object.
fn ratio_model(n: usize, k: usize) -> FiniteModel {
    let mut m = FiniteModel::new("w");
    m.add_individual("o").add_class_member("w", "o", "o");
    for i in 0..n {
        let y = format!("y{i}");
        m.add_individual(y.clone()).add_class_member("w", "s", y.clone());
        if i < k {
            m.add_relation_pair("w", superclaim::RelationType::Causes, y, "o");
        }
    }
    m
}

fn criterion_5() -> Check {
    let inst = |qual: &str| {
        let text = format!("SUBJECT: s\nQUALIFIER: {qual}\nRELATION: causes\nOBJECT: o\n");
        parse_claims(&text).unwrap().instances().next().unwrap().clone()
    };
    let m = ratio_model(1000, 1);
    let r = evaluate(&m, &inst("sometimes")).map_err(|e| e.to_string())?;
    ensure(r.ratio == Some(Rational::new(1, 1000)) && r.holds(), || format!("1/1000 sometimes: {r:?}"))?;
    let m = ratio_model(1000, 999);
    let r = evaluate(&m, &inst("sometimes not")).map_err(|e| e.to_string())?;
    ensure(r.ratio == Some(Rational::new(999, 1000)) && r.holds(), || format!("999/1000 sometimes not: {r:?}"))?;
    let m = ratio_model(1000, 0);
    let r = evaluate(&m, &inst("sometimes")).map_err(|e| e.to_string())?;
    ensure(r.status == Status::Fails, || "0/1000 must fail sometimes".into())?;
    Ok("1/1000 satisfies sometimes, 999/1000 satisfies sometimes not".into())
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let slots = [("a", "b", "c", true), ("a", "b+c", "a", true), ("b", "c", "c", false)];
    let mut instances = Vec::new();
    for (ctx, subj, obj, with_ctx) in slots {
        for qual in Qualifier::all() {
            for rel in common::RELATIONS {
                let text = format!(
                    "{}SUBJECT: {subj}\nQUALIFIER: {}\nRELATION: {}\nOBJECT: {obj}\n",
                    if with_ctx { format!("CONTEXT: {ctx}\n") } else { String::new() },
                    qual.phrase(),
                    rel.name()
                );
                instances.push(parse_claims(&text).unwrap().instances().next().unwrap().clone());
            }
        }
    }
    let mut verdicts = Vec::new();
    for (i, a) in instances.iter().enumerate() {
        for (j, b) in instances.iter().enumerate() {
            if i != j {
                let v = check_pair(a, b);
                if v.kind != superclaim::VerdictKind::Independent {
                    verdicts.push((i, j, v.kind));
                }
            }
        }
    }
    let models = 1200;
    let mut exercised = 0u64;
    for n in 0..models {
        let m = random_model(&mut rng, ModelShape::default());
        let results: Vec<_> = instances.iter().map(|inst| evaluate(&m, inst).unwrap()).collect();
        for &(i, j, kind) in &verdicts {
            let (a, b) = (&results[i], &results[j]);
            match kind {
                superclaim::VerdictKind::Entails => {
                    if a.holds() {
                        exercised += 1;
                        ensure(b.holds(), || format!("model {n}: {:?} holds but {:?} does not", instances[i], instances[j]))?;
                    }
                }
                superclaim::VerdictKind::Contradicts => {
                    if a.ratio.is_some() && b.ratio.is_some() {
                        exercised += 1;
                        ensure(!(a.holds() && b.holds()), || format!("model {n}: both {i} and {j} hold"))?;
                    }
                }
                superclaim::VerdictKind::Independent => {}
            }
        }
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("{} verdicts, {models} models, {exercised} premise-true checks, no counterexample", verdicts.len()))
}

fn criterion_7() -> Check {
    let chains = [
        ["always", "generally", "mostly", "frequently", "sometimes"],
        ["never", "generally not", "mostly not", "frequently not", "sometimes not"],
    ];
    for modal in ["", "can "] {
        for chain in chains {
            for (i, a) in chain.iter().enumerate() {
                for (j, b) in chain.iter().enumerate() {
                    let (qa, qb) = (q(&format!("{modal}{a}")), q(&format!("{modal}{b}")));
                    ensure(qualifier_entails(qa, qb) == (i <= j), || format!("{qa} => {qb} should be {}", i <= j))?;
                }
            }
        }
    }
    // The whole 20x20 table against containment of the satisfying ratio sets
    // over a grid that includes every threshold.
    let grid: Vec<Rational> = (0..=1000).map(|k| Rational::new(k, 1000)).collect();
    let sat = |qual: Qualifier| -> Vec<bool> {
        let p = qualifier_params(qual);
        grid.iter().map(|r| p.comparison.test(*r, p.threshold)).collect()
    };
    for a in Qualifier::all() {
        for b in Qualifier::all() {
            if a.modal == b.modal {
                let implied = sat(a).iter().zip(sat(b)).all(|(x, y)| !x || y);
                ensure(qualifier_entails(a, b) == implied, || format!("{a} => {b}: expected {implied}"))?;
            }
        }
    }
    Ok("both chains hold; 20x20 table equals ratio-set containment within each modality".into())
}

fn load_dir(var: &str, names: &[&str]) -> Option<Vec<String>> {
    let dir = std::env::var_os(var)?;
    Some(names.iter().map(|n| std::fs::read_to_string(std::path::Path::new(&dir).join(n)).expect(n)).collect())
}

fn criterion_8() -> Check {
    let (texts, origin) = match load_dir("SUPERCLAIM_DATASET_DIR", &["dataset-a.claims", "dataset-b.claims"]) {
        Some(t) => (t, "study data"),
        None => (vec![read_fixture("synthetic/dataset-a.claims"), read_fixture("synthetic/dataset-b.claims")], "synthetic substitute"),
    };
    let a = parse_claims(&texts[0]).map_err(|e| e.to_string())?;
    let b = parse_claims(&texts[1]).map_err(|e| e.to_string())?;
    let both = ClaimDocument::new(a.entries.iter().chain(&b.entries).cloned().collect()).map_err(|e| e.to_string())?;
    let u = usage_report(&both);
    ensure(u.qualifier_count(q("generally")) == 30 && u.qualifier_count(q("can generally")) == 17, || "generally counts".into())?;
    let fams: Vec<u64> = QualifierFamily::ALL.iter().map(|f| u.family_total(*f)).collect();
    ensure(fams == [43, 6, 19, 0], || format!("family totals {fams:?}"))?;
    let groups: Vec<u64> = RelationGroup::ALL.iter().map(|g| u.group_total(*g)).collect();
    ensure(groups == [12, 7, 43, 6], || format!("group totals {groups:?}"))?;
    ensure((u.expressible_count, u.context_used_count, u.total_claims) == (68, 57, 75), || "ratios".into())?;
    ensure(percent(u.share(68).unwrap(), 1) == "90.7", || "68/75".into())?;
    let c = coverage_report(&a);
    let totals: Vec<u64> = [Slot::Context, Slot::Subject, Slot::Object].iter().map(|s| c.slot(*s).total).collect();
    ensure(totals == [38, 45, 45] && c.resolved() == 18, || format!("coverage totals {totals:?}, resolved {}", c.resolved()))?;
    let overall = percent(c.overall().unwrap(), 2);
    ensure(overall == "14.06", || format!("overall coverage {overall}"))?;
    Ok(format!("{origin}: counts 30/17, families 43/6/19/0, groups 12/7/43/6, 68/75 and 57/75, coverage {overall}%"))
}

/// Direct reading of the level definitions for one claim.
fn oracle_level(marks: &[[Mark; 3]]) -> AgreementLevel {
    let n = 3;
    let best = |c: &[Mark; 3]| c.iter().filter(|m| **m == Mark::Best).count();
    let no_mistake = |c: &[Mark; 3]| c.iter().all(|m| *m != Mark::Mistake);
    if marks.iter().any(|c| best(c) == n) {
        AgreementLevel::A
    } else if marks.iter().any(|c| 2 * best(c) > n && no_mistake(c)) {
        AgreementLevel::B
    } else if marks.iter().any(no_mistake) {
        AgreementLevel::C
    } else {
        AgreementLevel::D
    }
}

fn criterion_9() -> Check {
    if let Some(texts) = load_dir("SUPERCLAIM_MARKS_DIR", &["before.tsv", "after.tsv"]) {
        let before = parse_marks(&texts[0], Stage::BeforeDiscussion).map_err(|e| e.to_string())?;
        let after = parse_marks(&texts[1], Stage::AfterDiscussion).map_err(|e| e.to_string())?;
        let counts = |m: &StudyMarks| AgreementLevel::ALL.map(|l| level_distribution(m).count(l));
        ensure(counts(&before) == [2, 12, 9, 2], || format!("before {:?}", counts(&before)))?;
        ensure(counts(&after) == [21, 3, 1, 0], || format!("after {:?}", counts(&after)))?;
        let (mb, ma) = (mistake_statistics(&before), mistake_statistics(&after));
        ensure(percent(mb.with_mistake, 0) == "38" && percent(ma.with_mistake, 0) == "6", || "mistake shares".into())?;
        ensure(percent(mb.with_best_and_mistake, 0) == "2", || "both-marked share".into())?;
        let min = pairwise_agreement(&before).min().unwrap();
        ensure(round_decimal(min, 2) == "0.57", || format!("pairwise minimum {min}"))?;
        ensure(pairwise_agreement(&after).min().unwrap() > Rational::new(82, 100), || "after pairwise".into())?;
        return Ok("study marks reproduce the level table, mistake shares and pairwise agreement".into());
    }
    let start = Instant::now();
    let marks = [Mark::Best, Mark::Mistake, Mark::None];
    let claims = ["c1", "c2"];
    let cands = ["f1", "f2"];
    let parts = ["p1", "p2", "p3"];
    let mut spaces = 0u64;
    for code in 0..3u32.pow(12) {
        let mut grid = [[[Mark::None; 3]; 2]; 2];
        let mut rest = code;
        for c in 0..2 {
            for k in 0..2 {
                for p in 0..3 {
                    grid[c][k][p] = marks[(rest % 3) as usize];
                    rest /= 3;
                }
            }
        }
        let mut sm = StudyMarks::new(Stage::BeforeDiscussion);
        for c in 0..2 {
            for k in 0..2 {
                for p in 0..3 {
                    sm.set(claims[c], cands[k], parts[p], grid[c][k][p]).map_err(|e| e.to_string())?;
                }
            }
        }
        for c in 0..2 {
            let got = claim_level(&sm, claims[c]).map_err(|e| e.to_string())?;
            ensure(got == oracle_level(&grid[c]), || format!("space {code}, claim {c}: {got}"))?;
        }
        let pw = pairwise_agreement(&sm);
        for a in 0..3 {
            for b in a + 1..3 {
                let mut sum = Rational::from(0);
                for c in 0..2 {
                    for k in 0..2 {
                        let (x, y) = (grid[c][k][a], grid[c][k][b]);
                        sum += if x == y {
                            Rational::from(1)
                        } else if x != Mark::None && y != Mark::None {
                            Rational::from(0)
                        } else {
                            Rational::new(1, 2)
                        };
                    }
                }
                let want = sum / Rational::from(4);
                ensure(pw.get(parts[a], parts[b]) == Some(want) && pw.get(parts[b], parts[a]) == Some(want), || {
                    format!("space {code}: pairwise {a},{b}")
                })?;
            }
        }
        spaces += 1;
    }
    Ok(format!("synthetic substitute: {spaces} mark spaces match the direct definitions ({:.1?})", start.elapsed()))
}

fn criterion_10() -> Check {
    let doc = parse_claims(&read_fixture("corpus.claims")).map_err(|e| e.to_string())?;
    ensure(doc.len() >= 20, || format!("fixture corpus has {} claims", doc.len()))?;
    let canon = doc.canonicalized();
    let back = parse_claims(&emit_claims(&doc)).map_err(|e| e.to_string())?;
    ensure(back.entries == canon.entries, || "claim DSL round trip".into())?;
    let back = from_json(&to_json(&doc)).map_err(|e| e.to_string())?;
    ensure(back.entries == doc.entries, || "interchange round trip".into())?;
    for model in ["models/three-persons.model", "models/two-worlds.model"] {
        let m = parse_model(&read_fixture(model)).map_err(|e| e.to_string())?;
        ensure(parse_model(&emit_model(&m)).as_ref() == Ok(&m), || format!("{model} round trip"))?;
    }
    let prov = ProvenanceInfo { created: "2024-01-01T00:00:00Z".into(), creator: "https://orcid.org/0000-0000-0000-0000".into() };
    let mut graphs_checked = 0;
    for inst in doc.instances() {
        let base = format!("http://example.org/np/{}/", inst.id());
        let np = to_nanopub(inst, &prov, &NanopubConfig::new(&base)).map_err(|e| e.to_string())?;
        let trig = to_trig(&np);
        let mut by_graph: BTreeMap<String, Vec<oxrdf::Quad>> = BTreeMap::new();
        for quad in TriGParser::new().for_slice(trig.as_bytes()) {
            let quad = quad.map_err(|e| format!("{}: {e}\n{trig}", inst.id()))?;
            let GraphName::NamedNode(g) = &quad.graph_name else {
                return Err(format!("{}: triple outside a named graph", inst.id()));
            };
            by_graph.entry(g.as_str().to_string()).or_default().push(quad);
        }
        let names: Vec<String> = ["assertion", "provenance", "pubinfo"].iter().map(|g| format!("{base}{g}")).collect();
        ensure(by_graph.keys().cloned().collect::<Vec<_>>() == names, || format!("{}: graphs {:?}", inst.id(), by_graph.keys()))?;
        let claim = format!("{base}claim");
        let preds: BTreeSet<String> = by_graph[&names[0]]
            .iter()
            .filter(|q| q.subject.to_string() == format!("<{claim}>"))
            .map(|q| q.predicate.as_str().rsplit(['#', '/']).next().unwrap().to_string())
            .filter(|p| p.starts_with("has-"))
            .collect();
        let mut want: BTreeSet<String> =
            ["has-subject-class", "has-qualifier", "has-relation", "has-object-class"].iter().map(|s| s.to_string()).collect();
        if inst.context.is_some() {
            want.insert("has-context-class".into());
        }
        ensure(preds == want, || format!("{}: assertion predicates {preds:?}", inst.id()))?;
        graphs_checked += 1;
    }
    Ok(format!("{} claims round-trip through DSL and JSON; 2 models; {graphs_checked} nanopubs reparse", doc.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("qualifier semantics", criterion_1),
        ("formula rendering", criterion_2),
        ("gloss rendering", criterion_3),
        ("evaluator oracle equivalence", criterion_4),
        ("evaluator boundary exactness", criterion_5),
        ("reasoner soundness", criterion_6),
        ("qualifier lattice", criterion_7),
        ("corpus statistics", criterion_8),
        ("agreement levels", criterion_9),
        ("round trips", criterion_10),
    ];
    let _ = fixture("");
    let _ = QualifierBase::ALL;
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
