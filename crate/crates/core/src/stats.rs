//! Usage and vocabulary-coverage statistics over claim corpora.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::claim::{ClaimDocument, Slot};
use crate::class::TermSource;
use crate::decimal::percent;
use crate::vocab::{Qualifier, QualifierBase, Rational, RelationGroup, RelationType};

/// The four qualifier families: plain or "can", positive or negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QualifierFamily {
    Positive,
    Negative,
    CanPositive,
    CanNegative,
}

impl QualifierFamily {
    pub const ALL: [QualifierFamily; 4] =
        [QualifierFamily::Positive, QualifierFamily::Negative, QualifierFamily::CanPositive, QualifierFamily::CanNegative];

    pub fn of(q: Qualifier) -> Self {
        match (q.modal, q.negated) {
            (false, false) => QualifierFamily::Positive,
            (false, true) => QualifierFamily::Negative,
            (true, false) => QualifierFamily::CanPositive,
            (true, true) => QualifierFamily::CanNegative,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QualifierFamily::Positive => "positive",
            QualifierFamily::Negative => "negative",
            QualifierFamily::CanPositive => "can positive",
            QualifierFamily::CanNegative => "can negative",
        }
    }

    fn qualifier(self, base: QualifierBase) -> Qualifier {
        let (modal, negated) = match self {
            QualifierFamily::Positive => (false, false),
            QualifierFamily::Negative => (false, true),
            QualifierFamily::CanPositive => (true, false),
            QualifierFamily::CanNegative => (true, true),
        };
        Qualifier::new(base, negated, modal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageReport {
    pub qualifier_counts: BTreeMap<Qualifier, u64>,
    pub relation_counts: BTreeMap<RelationType, u64>,
    pub expressible_count: u64,
    pub context_used_count: u64,
    pub total_claims: u64,
}

impl UsageReport {
    pub fn qualifier_count(&self, q: Qualifier) -> u64 {
        self.qualifier_counts.get(&q).copied().unwrap_or(0)
    }

    pub fn family_total(&self, family: QualifierFamily) -> u64 {
        self.qualifier_counts.iter().filter(|(q, _)| QualifierFamily::of(**q) == family).map(|(_, n)| n).sum()
    }

    pub fn relation_count(&self, r: RelationType) -> u64 {
        self.relation_counts.get(&r).copied().unwrap_or(0)
    }

    pub fn group_total(&self, g: RelationGroup) -> u64 {
        g.members().map(|r| self.relation_count(r)).sum()
    }

    pub fn no_context_count(&self) -> u64 {
        self.expressible_count - self.context_used_count
    }

    /// `n` out of all claims, including inexpressible ones.
    pub fn share(&self, n: u64) -> Option<Rational> {
        (self.total_claims > 0).then(|| Rational::new(n, self.total_claims))
    }

    fn pct(&self, n: u64) -> String {
        self.share(n).map(|r| format!("{}%", percent(r, 1))).unwrap_or_else(|| "-".into())
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "claims: {}", self.total_claims);
        let _ = writeln!(out, "expressible: {} ({})", self.expressible_count, self.pct(self.expressible_count));
        let _ = writeln!(out, "with context: {} ({})", self.context_used_count, self.pct(self.context_used_count));
        let _ = writeln!(out, "without context: {} ({})", self.no_context_count(), self.pct(self.no_context_count()));
        out.push('\n');

        let bases: Vec<QualifierBase> = QualifierBase::ALL.to_vec();
        let _ = write!(out, "{:<14}", "qualifier");
        for b in &bases {
            let _ = write!(out, "{:>12}", b.as_str());
        }
        let _ = writeln!(out, "{:>8}", "total");
        for fam in QualifierFamily::ALL {
            let _ = write!(out, "{:<14}", fam.as_str());
            for b in &bases {
                let n = self.qualifier_count(fam.qualifier(*b));
                let cell = if n == 0 { String::new() } else { n.to_string() };
                let _ = write!(out, "{cell:>12}");
            }
            let _ = writeln!(out, "{:>8}", self.family_total(fam));
        }
        out.push('\n');

        let width = RelationType::ALL.iter().map(|r| r.name().len()).max().unwrap_or(0) + 2;
        let _ = writeln!(out, "{:<width$}{:>6}{:>10}", "relation", "count", "group");
        for g in RelationGroup::ALL {
            for r in g.members() {
                let total = if r.is_group_head() { self.group_total(g).to_string() } else { String::new() };
                let name = if r.is_group_head() { r.name().to_uppercase() } else { format!("  {}", r.name()) };
                let _ = writeln!(out, "{name:<width$}{:>6}{total:>10}", self.relation_count(r));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let qualifiers: serde_json::Map<String, Value> =
            self.qualifier_counts.iter().map(|(q, n)| (q.phrase(), json!(n))).collect();
        let families: serde_json::Map<String, Value> =
            QualifierFamily::ALL.iter().map(|f| (f.as_str().to_string(), json!(self.family_total(*f)))).collect();
        let relations: serde_json::Map<String, Value> =
            self.relation_counts.iter().map(|(r, n)| (r.name().to_string(), json!(n))).collect();
        let groups: serde_json::Map<String, Value> =
            RelationGroup::ALL.iter().map(|g| (g.as_str().to_string(), json!(self.group_total(*g)))).collect();
        json!({
            "total_claims": self.total_claims,
            "expressible": self.expressible_count,
            "context_used": self.context_used_count,
            "no_context": self.no_context_count(),
            "qualifiers": qualifiers,
            "qualifier_families": families,
            "relations": relations,
            "relation_groups": groups,
        })
    }
}

/// Count qualifiers, relations, expressibility and context use.
/// Inexpressible claims count toward the total only.
pub fn usage_report(doc: &ClaimDocument) -> UsageReport {
    let mut report = UsageReport {
        qualifier_counts: Qualifier::all().into_iter().map(|q| (q, 0)).collect(),
        relation_counts: RelationType::ALL.into_iter().map(|r| (r, 0)).collect(),
        expressible_count: 0,
        context_used_count: 0,
        total_claims: doc.entries.len() as u64,
    };
    for inst in doc.instances() {
        report.expressible_count += 1;
        if inst.context.is_some() {
            report.context_used_count += 1;
        }
        *report.qualifier_counts.entry(inst.qualifier).or_default() += 1;
        *report.relation_counts.entry(inst.relation).or_default() += 1;
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SlotCoverage {
    /// Top-level classes filling this slot.
    pub total: u64,
    /// Resolved top-level classes per identifier source.
    pub by_source: BTreeMap<TermSource, u64>,
}

impl SlotCoverage {
    pub fn resolved(&self) -> u64 {
        self.by_source.values().sum()
    }

    pub fn coverage(&self) -> Option<Rational> {
        (self.total > 0).then(|| Rational::new(self.resolved(), self.total))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverageReport {
    pub slots: BTreeMap<Slot, SlotCoverage>,
}

impl CoverageReport {
    pub fn slot(&self, s: Slot) -> SlotCoverage {
        self.slots.get(&s).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> u64 {
        self.slots.values().map(|s| s.total).sum()
    }

    pub fn resolved(&self) -> u64 {
        self.slots.values().map(SlotCoverage::resolved).sum()
    }

    pub fn overall(&self) -> Option<Rational> {
        (self.total() > 0).then(|| Rational::new(self.resolved(), self.total()))
    }

    fn sources(&self) -> Vec<TermSource> {
        let mut s: Vec<TermSource> = self.slots.values().flat_map(|c| c.by_source.keys().copied()).collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn render_text(&self) -> String {
        let pct = |r: Option<Rational>| r.map(|r| format!("{}%", percent(r, 2))).unwrap_or_else(|| "-".into());
        let order = [Slot::Context, Slot::Subject, Slot::Object];
        let mut out = String::new();
        let _ = writeln!(out, "{:<24}{:>10}{:>10}{:>10}{:>10}", "", "context", "subject", "object", "total");
        let _ = write!(out, "{:<24}", "top-level classes");
        for s in order {
            let _ = write!(out, "{:>10}", self.slot(s).total);
        }
        let _ = writeln!(out, "{:>10}", self.total());
        for src in self.sources() {
            let _ = write!(out, "{:<24}", src.as_str());
            let mut sum = 0;
            for s in order {
                let n = self.slot(s).by_source.get(&src).copied().unwrap_or(0);
                sum += n;
                let _ = write!(out, "{n:>10}");
            }
            let _ = writeln!(out, "{sum:>10}");
        }
        let _ = write!(out, "{:<24}", "coverage");
        for s in order {
            let _ = write!(out, "{:>10}", pct(self.slot(s).coverage()));
        }
        let _ = writeln!(out, "{:>10}", pct(self.overall()));
        out
    }

    pub fn to_json(&self) -> Value {
        let slots: serde_json::Map<String, Value> = self
            .slots
            .iter()
            .map(|(s, c)| {
                let by: serde_json::Map<String, Value> =
                    c.by_source.iter().map(|(k, v)| (k.as_str().to_string(), json!(v))).collect();
                (
                    s.as_str().to_string(),
                    json!({ "total": c.total, "resolved": c.resolved(), "by_source": by,
                            "coverage": c.coverage().map(|r| percent(r, 2)) }),
                )
            })
            .collect();
        json!({ "slots": slots, "total": self.total(), "resolved": self.resolved(),
                "coverage": self.overall().map(|r| percent(r, 2)) })
    }
}

/// Count top-level slot fillers and those bound to an existing identifier.
/// Intersections and minted identifiers count as unresolved.
pub fn coverage_report(doc: &ClaimDocument) -> CoverageReport {
    let mut report = CoverageReport::default();
    for inst in doc.instances() {
        for slot in Slot::ALL {
            let Some(class) = inst.slot(slot) else { continue };
            let entry = report.slots.entry(slot).or_default();
            entry.total += 1;
            if let Some(t) = class.term().filter(|t| t.source != TermSource::Minted) {
                *entry.by_source.entry(t.source).or_default() += 1;
            }
        }
    }
    report
}
