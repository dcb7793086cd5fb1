//! Agreement measures for a formalization study in which every participant
//! marks each candidate formalization of a claim as best, mistaken, or
//! neither.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde_json::{json, Value};
use thiserror::Error;

use crate::decimal::{percent, round_decimal};
use crate::vocab::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mark {
    Best,
    Mistake,
    #[default]
    None,
}

impl Mark {
    pub fn parse(text: &str) -> Option<Mark> {
        match text.trim().to_ascii_lowercase().as_str() {
            "best" => Some(Mark::Best),
            "mistake" => Some(Mark::Mistake),
            "none" | "" | "-" => Some(Mark::None),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Stage {
    #[default]
    BeforeDiscussion,
    AfterDiscussion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AgreementLevel {
    /// Some candidate is marked best by every participant.
    A,
    /// Some candidate is best for a strict majority, with no mistake mark from the rest.
    B,
    /// Some candidate has no mistake mark at all.
    C,
    D,
}

impl AgreementLevel {
    pub const ALL: [AgreementLevel; 4] = [AgreementLevel::A, AgreementLevel::B, AgreementLevel::C, AgreementLevel::D];
}

impl fmt::Display for AgreementLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarksError {
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("conflicting marks for claim `{claim}`, candidate `{candidate}`, participant `{participant}`")]
    Conflict { claim: String, candidate: String, participant: String },
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("{0}")]
    Csv(String),
}

/// Marks for one study stage. Missing (claim, candidate, participant)
/// triples read as [`Mark::None`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StudyMarks {
    pub claims: Vec<String>,
    pub candidates: BTreeMap<String, Vec<String>>,
    pub participants: Vec<String>,
    marks: HashMap<(String, String, String), Mark>,
    pub stage: Stage,
    /// Self-reported confidence (1 to 5) per claim and participant.
    pub confidence: BTreeMap<(String, String), u8>,
}

impl StudyMarks {
    pub fn new(stage: Stage) -> Self {
        StudyMarks { stage, ..Default::default() }
    }

    fn register(&mut self, claim: &str, candidate: &str, participant: &str) {
        if !self.candidates.contains_key(claim) {
            self.claims.push(claim.to_string());
            self.candidates.insert(claim.to_string(), Vec::new());
        }
        let cands = self.candidates.get_mut(claim).unwrap();
        if !cands.iter().any(|c| c == candidate) {
            cands.push(candidate.to_string());
        }
        if !self.participants.iter().any(|p| p == participant) {
            self.participants.push(participant.to_string());
        }
    }

    /// Set a mark. A participant gives a candidate one mark only; setting a
    /// different non-`None` mark over an existing one is a conflict.
    pub fn set(&mut self, claim: &str, candidate: &str, participant: &str, mark: Mark) -> Result<(), MarksError> {
        self.register(claim, candidate, participant);
        let key = (claim.to_string(), candidate.to_string(), participant.to_string());
        match self.marks.get(&key) {
            Some(prev) if *prev != mark && *prev != Mark::None && mark != Mark::None => Err(MarksError::Conflict {
                claim: claim.into(),
                candidate: candidate.into(),
                participant: participant.into(),
            }),
            Some(prev) if *prev != Mark::None && mark == Mark::None => Ok(()),
            _ => {
                self.marks.insert(key, mark);
                Ok(())
            }
        }
    }

    pub fn mark(&self, claim: &str, candidate: &str, participant: &str) -> Mark {
        self.marks
            .get(&(claim.to_string(), candidate.to_string(), participant.to_string()))
            .copied()
            .unwrap_or_default()
    }

    fn candidate_marks<'a>(&'a self, claim: &'a str, candidate: &'a str) -> impl Iterator<Item = Mark> + 'a {
        self.participants.iter().map(move |p| self.mark(claim, candidate, p))
    }

    /// Every (claim, candidate) pair in file order.
    pub fn data_points(&self) -> impl Iterator<Item = (&str, &str)> {
        self.claims
            .iter()
            .flat_map(move |c| self.candidates[c].iter().map(move |k| (c.as_str(), k.as_str())))
    }
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let delimiter = if first.contains('\t') {
        b'\t'
    } else if first.contains(';') && !first.contains(',') {
        b';'
    } else {
        b','
    };
    csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn is_header(cell: &str) -> bool {
    matches!(cell.to_ascii_lowercase().as_str(), "claim" | "claim-id" | "claim_id")
}

/// Read a delimited table of `claim, candidate, participant, mark` rows.
/// Tab, comma or semicolon delimiters are detected from the first line; a
/// header row starting with `claim` is skipped.
pub fn parse_marks(text: &str, stage: Stage) -> Result<StudyMarks, MarksError> {
    let mut marks = StudyMarks::new(stage);
    for (i, rec) in csv_reader(text).records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| MarksError::Csv(e.to_string()))?;
        if rec.iter().all(str::is_empty) || (row == 1 && rec.get(0).is_some_and(is_header)) {
            continue;
        }
        if rec.len() != 4 {
            return Err(MarksError::Row { row, message: format!("expected 4 fields, found {}", rec.len()) });
        }
        let (claim, cand, part) = (&rec[0], &rec[1], &rec[2]);
        if claim.is_empty() || cand.is_empty() || part.is_empty() {
            return Err(MarksError::Row { row, message: "empty identifier".into() });
        }
        let mark = Mark::parse(&rec[3])
            .ok_or_else(|| MarksError::Row { row, message: format!("unknown mark `{}`", &rec[3]) })?;
        marks.set(claim, cand, part, mark)?;
    }
    Ok(marks)
}

/// Read `claim, participant, rating` rows (rating 1 to 5) into `marks`.
pub fn parse_confidence(text: &str, marks: &mut StudyMarks) -> Result<(), MarksError> {
    for (i, rec) in csv_reader(text).records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| MarksError::Csv(e.to_string()))?;
        if rec.iter().all(str::is_empty) || (row == 1 && rec.get(0).is_some_and(is_header)) {
            continue;
        }
        if rec.len() != 3 {
            return Err(MarksError::Row { row, message: format!("expected 3 fields, found {}", rec.len()) });
        }
        let rating: u8 = rec[2]
            .parse()
            .ok()
            .filter(|r| (1..=5).contains(r))
            .ok_or_else(|| MarksError::Row { row, message: format!("rating `{}` is not 1 to 5", &rec[2]) })?;
        marks.confidence.insert((rec[0].to_string(), rec[1].to_string()), rating);
    }
    Ok(())
}

pub fn claim_level(marks: &StudyMarks, claim: &str) -> Result<AgreementLevel, MarksError> {
    let cands = marks.candidates.get(claim).ok_or_else(|| MarksError::UnknownClaim(claim.to_string()))?;
    let n = marks.participants.len();
    let tallies: Vec<(usize, usize)> = cands
        .iter()
        .map(|k| {
            marks.candidate_marks(claim, k).fold((0, 0), |(b, m), mark| match mark {
                Mark::Best => (b + 1, m),
                Mark::Mistake => (b, m + 1),
                Mark::None => (b, m),
            })
        })
        .collect();
    if n > 0 && tallies.iter().any(|&(best, _)| best == n) {
        return Ok(AgreementLevel::A);
    }
    if tallies.iter().any(|&(best, mistakes)| 2 * best > n && mistakes == 0) {
        return Ok(AgreementLevel::B);
    }
    if tallies.iter().any(|&(_, mistakes)| mistakes == 0) {
        return Ok(AgreementLevel::C);
    }
    Ok(AgreementLevel::D)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelDistribution {
    pub counts: BTreeMap<AgreementLevel, u64>,
    pub total: u64,
}

impl LevelDistribution {
    pub fn count(&self, l: AgreementLevel) -> u64 {
        self.counts.get(&l).copied().unwrap_or(0)
    }

    pub fn fraction(&self, l: AgreementLevel) -> Option<Rational> {
        (self.total > 0).then(|| Rational::new(self.count(l), self.total))
    }

    /// Fraction rendered to two decimals.
    pub fn rel(&self, l: AgreementLevel) -> String {
        self.fraction(l).map(|r| round_decimal(r, 2)).unwrap_or_else(|| "-".into())
    }
}

pub fn level_distribution(marks: &StudyMarks) -> LevelDistribution {
    let mut counts: BTreeMap<AgreementLevel, u64> = AgreementLevel::ALL.iter().map(|l| (*l, 0)).collect();
    for c in &marks.claims {
        let level = claim_level(marks, c).expect("claims come from the marks");
        *counts.entry(level).or_default() += 1;
    }
    LevelDistribution { counts, total: marks.claims.len() as u64 }
}

/// Symmetric matrix of mean per-candidate agreement between participants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseAgreement {
    pub participants: Vec<String>,
    values: BTreeMap<(String, String), Rational>,
}

impl PairwiseAgreement {
    pub fn get(&self, a: &str, b: &str) -> Option<Rational> {
        let key = if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        self.values.get(&key).copied()
    }

    /// Unordered pairs with their values, in sorted order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str, Rational)> {
        self.values.iter().map(|((a, b), v)| (a.as_str(), b.as_str(), *v))
    }

    pub fn min(&self) -> Option<Rational> {
        self.values.values().min().copied()
    }

    pub fn max(&self) -> Option<Rational> {
        self.values.values().max().copied()
    }
}

fn pair_score(a: Mark, b: Mark) -> Rational {
    match (a, b) {
        _ if a == b => Rational::from(1),
        (Mark::Best, Mark::Mistake) | (Mark::Mistake, Mark::Best) => Rational::from(0),
        _ => Rational::new(1, 2),
    }
}

/// Score 1 for identical marks, 0 for best against mistake, 1/2 otherwise;
/// averaged over every (claim, candidate) pair.
pub fn pairwise_agreement(marks: &StudyMarks) -> PairwiseAgreement {
    let points: Vec<(&str, &str)> = marks.data_points().collect();
    let mut values = BTreeMap::new();
    let ps = &marks.participants;
    for (i, a) in ps.iter().enumerate() {
        for b in &ps[i + 1..] {
            if points.is_empty() {
                continue;
            }
            let sum: Rational = points
                .iter()
                .map(|(c, k)| pair_score(marks.mark(c, k, a), marks.mark(c, k, b)))
                .fold(Rational::from(0), |acc, s| acc + s);
            let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
            values.insert(key, sum / Rational::from(points.len() as u64));
        }
    }
    PairwiseAgreement { participants: ps.clone(), values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MistakeStatistics {
    /// Candidates with at least one mistake mark.
    pub with_mistake: Rational,
    /// Candidates with at least one mistake mark and at least one best mark.
    pub with_best_and_mistake: Rational,
    pub candidates: u64,
}

pub fn mistake_statistics(marks: &StudyMarks) -> MistakeStatistics {
    let mut total = 0u64;
    let mut with_mistake = 0u64;
    let mut both = 0u64;
    for (c, k) in marks.data_points() {
        total += 1;
        let ms: Vec<Mark> = marks.candidate_marks(c, k).collect();
        let m = ms.contains(&Mark::Mistake);
        let b = ms.contains(&Mark::Best);
        with_mistake += u64::from(m);
        both += u64::from(m && b);
    }
    let frac = |n: u64| if total == 0 { Rational::from(0) } else { Rational::new(n, total) };
    MistakeStatistics { with_mistake: frac(with_mistake), with_best_and_mistake: frac(both), candidates: total }
}

/// Level table, mistake figures and the pairwise matrix as plain text.
pub fn render_report(marks: &StudyMarks) -> String {
    let dist = level_distribution(marks);
    let mut out = String::new();
    let _ = writeln!(out, "{:<8}{:>6}{:>8}", "level", "abs.", "rel.");
    for l in AgreementLevel::ALL {
        let _ = writeln!(out, "{:<8}{:>6}{:>8}", l.to_string(), dist.count(l), dist.rel(l));
    }
    let ms = mistake_statistics(marks);
    let _ = writeln!(out, "\ncandidates: {}", ms.candidates);
    let _ = writeln!(out, "with a mistake mark: {}%", percent(ms.with_mistake, 0));
    let _ = writeln!(out, "with best and mistake marks: {}%", percent(ms.with_best_and_mistake, 0));

    let pw = pairwise_agreement(marks);
    let w = marks.participants.iter().map(String::len).max().unwrap_or(0).max(4) + 2;
    let _ = write!(out, "\n{:<w$}", "");
    for p in &marks.participants {
        let _ = write!(out, "{p:>w$}");
    }
    out.push('\n');
    for a in &marks.participants {
        let _ = write!(out, "{a:<w$}");
        for b in &marks.participants {
            let cell = if a == b { "-".to_string() } else { pw.get(a, b).map(|v| round_decimal(v, 2)).unwrap_or_default() };
            let _ = write!(out, "{cell:>w$}");
        }
        out.push('\n');
    }
    out
}

pub fn report_json(marks: &StudyMarks) -> Value {
    let dist = level_distribution(marks);
    let levels: serde_json::Map<String, Value> = AgreementLevel::ALL
        .iter()
        .map(|l| (l.to_string(), json!({ "abs": dist.count(*l), "rel": dist.rel(*l) })))
        .collect();
    let ms = mistake_statistics(marks);
    let pw = pairwise_agreement(marks);
    let pairs: Vec<Value> =
        pw.pairs().map(|(a, b, v)| json!({ "a": a, "b": b, "value": round_decimal(v, 2), "exact": v.to_string() })).collect();
    json!({
        "levels": levels,
        "with_mistake": ms.with_mistake.to_string(),
        "with_best_and_mistake": ms.with_best_and_mistake.to_string(),
        "candidates": ms.candidates,
        "pairwise": pairs,
    })
}
