//! Closed vocabularies of the claim pattern: the 20 qualifiers and the 25
//! relation types.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::VocabError;

/// Exact ratio type used for thresholds and evaluation results.
pub type Rational = Ratio<u64>;

/// The five quantity words a qualifier is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QualifierBase {
    Sometimes,
    Frequently,
    Mostly,
    Generally,
    Always,
}

impl QualifierBase {
    pub const ALL: [QualifierBase; 5] = [
        QualifierBase::Sometimes,
        QualifierBase::Frequently,
        QualifierBase::Mostly,
        QualifierBase::Generally,
        QualifierBase::Always,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QualifierBase::Sometimes => "sometimes",
            QualifierBase::Frequently => "frequently",
            QualifierBase::Mostly => "mostly",
            QualifierBase::Generally => "generally",
            QualifierBase::Always => "always",
        }
    }
}

/// Direction of the threshold test applied to a conditional ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    Equal,
    AtLeast,
    AtMost,
}

impl Comparison {
    pub fn test(self, ratio: Rational, threshold: Rational) -> bool {
        match self {
            Comparison::Equal => ratio == threshold,
            Comparison::AtLeast => ratio >= threshold,
            Comparison::AtMost => ratio <= threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Equal => "=",
            Comparison::AtLeast => "≥",
            Comparison::AtMost => "≤",
        }
    }
}

/// Whether the event side is read at the actual world or in some accessible world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modality {
    Actual,
    Possible,
}

/// One of the 20 closed-list qualifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Qualifier {
    pub base: QualifierBase,
    pub negated: bool,
    /// The "can" prefix.
    pub modal: bool,
}

/// Threshold, comparison and modality derived from a qualifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QualifierParams {
    pub threshold: Rational,
    pub comparison: Comparison,
    pub modality: Modality,
}

impl Qualifier {
    pub const fn new(base: QualifierBase, negated: bool, modal: bool) -> Self {
        Qualifier { base, negated, modal }
    }

    /// All 20 qualifiers: positives before negatives, plain before "can".
    pub fn all() -> Vec<Qualifier> {
        let mut out = Vec::with_capacity(20);
        for modal in [false, true] {
            for negated in [false, true] {
                for base in QualifierBase::ALL.iter().rev() {
                    out.push(Qualifier::new(*base, negated, modal));
                }
            }
        }
        out
    }

    /// The phrase without the "can" prefix, e.g. "never" or "mostly not".
    pub fn core_phrase(&self) -> String {
        match (self.base, self.negated) {
            (QualifierBase::Always, true) => "never".to_string(),
            (base, false) => base.as_str().to_string(),
            (base, true) => format!("{} not", base.as_str()),
        }
    }

    /// Canonical phrase, e.g. "can generally not".
    pub fn phrase(&self) -> String {
        if self.modal {
            format!("can {}", self.core_phrase())
        } else {
            self.core_phrase()
        }
    }

    /// Kebab-case identifier, e.g. "can-generally-not".
    pub fn slug(&self) -> String {
        self.phrase().replace(' ', "-")
    }

    pub fn params(&self) -> QualifierParams {
        qualifier_params(*self)
    }
}

impl fmt::Display for Qualifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.phrase())
    }
}

impl Serialize for Qualifier {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.phrase())
    }
}

impl<'de> Deserialize<'de> for Qualifier {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_qualifier(&text).map_err(serde::de::Error::custom)
    }
}

fn normalize_phrase(text: &str) -> String {
    text.trim()
        .to_lowercase()
        .split(|c: char| c.is_whitespace() || c == '-' || c == '_')
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn nearest<'a>(input: &str, candidates: impl Iterator<Item = &'a str>) -> String {
    candidates
        .map(|c| (strsim::levenshtein(input, c), c))
        .min_by_key(|(d, _)| *d)
        .map(|(_, c)| c.to_string())
        .unwrap_or_default()
}

/// Parse a qualifier phrase. Case and hyphenation are ignored; "can" is
/// written as a plain word, never in parentheses.
pub fn parse_qualifier(text: &str) -> Result<Qualifier, VocabError> {
    let norm = normalize_phrase(text);
    let all = Qualifier::all();
    if let Some(q) = all.iter().find(|q| q.phrase() == norm) {
        return Ok(*q);
    }
    let phrases: Vec<String> = all.iter().map(|q| q.phrase()).collect();
    Err(VocabError::UnknownQualifier {
        input: text.trim().to_string(),
        nearest: nearest(&norm, phrases.iter().map(String::as_str)),
    })
}

/// Threshold, comparison and modality for a qualifier.
pub fn qualifier_params(q: Qualifier) -> QualifierParams {
    use QualifierBase::*;
    let (num, den, comparison) = match (q.base, q.negated) {
        (Always, false) => (1, 1, Comparison::Equal),
        (Generally, false) => (9, 10, Comparison::AtLeast),
        (Mostly, false) => (1, 2, Comparison::AtLeast),
        (Frequently, false) => (1, 10, Comparison::AtLeast),
        (Sometimes, false) => (1, 1000, Comparison::AtLeast),
        (Always, true) => (0, 1, Comparison::Equal),
        (Generally, true) => (1, 10, Comparison::AtMost),
        (Mostly, true) => (1, 2, Comparison::AtMost),
        (Frequently, true) => (9, 10, Comparison::AtMost),
        (Sometimes, true) => (999, 1000, Comparison::AtMost),
    };
    QualifierParams {
        threshold: Rational::new(num, den),
        comparison,
        modality: if q.modal {
            Modality::Possible
        } else {
            Modality::Actual
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationGroup {
    Sameness,
    NumericalComparison,
    Causality,
    SpatioTemporality,
}

impl RelationGroup {
    pub const ALL: [RelationGroup; 4] = [
        RelationGroup::Sameness,
        RelationGroup::NumericalComparison,
        RelationGroup::Causality,
        RelationGroup::SpatioTemporality,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationGroup::Sameness => "sameness",
            RelationGroup::NumericalComparison => "numerical-comparison",
            RelationGroup::Causality => "causality",
            RelationGroup::SpatioTemporality => "spatio-temporality",
        }
    }

    pub fn head(self) -> RelationType {
        match self {
            RelationGroup::Sameness => RelationType::IsSameAs,
            RelationGroup::NumericalComparison => RelationType::ComparesTo,
            RelationGroup::Causality => RelationType::HasCausalRelationshipWith,
            RelationGroup::SpatioTemporality => RelationType::HasSpatioTemporalRelationshipWith,
        }
    }

    pub fn members(self) -> impl Iterator<Item = RelationType> {
        RelationType::ALL.into_iter().filter(move |r| r.group() == self)
    }
}

macro_rules! relations {
    ($( $variant:ident => $name:literal, $group:ident; )*) => {
        /// One of the 25 closed-list relation types.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum RelationType {
            $( $variant, )*
        }

        impl RelationType {
            /// Every relation, in table order (group head first within each group).
            pub const ALL: [RelationType; 25] = [ $( RelationType::$variant, )* ];

            /// Display name as written in the relation table.
            pub fn name(self) -> &'static str {
                match self {
                    $( RelationType::$variant => $name, )*
                }
            }

            pub fn group(self) -> RelationGroup {
                match self {
                    $( RelationType::$variant => RelationGroup::$group, )*
                }
            }
        }
    };
}

relations! {
    IsSameAs => "is same as", Sameness;
    ComparesTo => "compares to", NumericalComparison;
    HasSimilarValueAs => "has similar value as", NumericalComparison;
    HasSameValueAs => "has same value as", NumericalComparison;
    HasDifferentValueFrom => "has different value from", NumericalComparison;
    HasSmallerValueThan => "has smaller value than", NumericalComparison;
    HasLargerValueThan => "has larger value than", NumericalComparison;
    HasCausalRelationshipWith => "has causal relationship with", Causality;
    Affects => "affects", Causality;
    ContributesTo => "contributes to", Causality;
    Enables => "enables", Causality;
    Inhibits => "inhibits", Causality;
    Prevents => "prevents", Causality;
    Increases => "increases", Causality;
    Decreases => "decreases", Causality;
    Requires => "requires", Causality;
    Causes => "causes", Causality;
    IsNecessaryAndSufficientFor => "is necessary and sufficient for", Causality;
    IsCausedBy => "is caused by", Causality;
    HasSpatioTemporalRelationshipWith => "has spatio-temporal relationship with", SpatioTemporality;
    Includes => "includes", SpatioTemporality;
    IsIncludedIn => "is included in", SpatioTemporality;
    CoOccursWith => "co-occurs with", SpatioTemporality;
    IsFollowedBy => "is followed by", SpatioTemporality;
    Follows => "follows", SpatioTemporality;
}

impl RelationType {
    /// Kebab-case identifier, e.g. "co-occurs-with".
    pub fn id(self) -> String {
        self.name().replace(' ', "-")
    }

    pub fn is_group_head(self) -> bool {
        self.group().head() == self
    }

    pub fn head(self) -> RelationType {
        self.group().head()
    }

    /// Short gloss. `includes` carries the widened reading adopted after the
    /// annotation study.
    pub fn description(self) -> Option<&'static str> {
        match self {
            RelationType::Includes => Some("spatio-temporally or conceptually includes"),
            _ => None,
        }
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for RelationType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for RelationType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_relation(&text).map_err(serde::de::Error::custom)
    }
}

/// Parse a relation phrase or identifier; case, hyphens and spaces are
/// normalized before matching.
pub fn parse_relation(text: &str) -> Result<RelationType, VocabError> {
    let norm = normalize_phrase(text);
    RelationType::ALL
        .into_iter()
        .find(|r| normalize_phrase(r.name()) == norm)
        .ok_or_else(|| VocabError::UnknownRelation {
            input: text.trim().to_string(),
            heads: RelationGroup::ALL.iter().map(|g| g.head().name().to_string()).collect(),
        })
}

/// True iff `general` equals `specific` or heads its group.
pub fn relation_subsumes(general: RelationType, specific: RelationType) -> bool {
    general == specific || (general.is_group_head() && general.group() == specific.group())
}
