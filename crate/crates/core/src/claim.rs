use std::collections::HashSet;

use crate::class::ClassExpr;
use crate::error::{ClaimsError, ClassError};
use crate::vocab::{Qualifier, RelationType};

/// Bookkeeping carried alongside a claim.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ClaimMeta {
    pub id: String,
    /// Atomic, independent, declarative, absolute restatement of the claim.
    pub aida: Option<String>,
    pub source: Option<String>,
}

impl ClaimMeta {
    pub fn new(id: impl Into<String>) -> Self {
        ClaimMeta { id: id.into(), ..Default::default() }
    }
}

/// Which class slot of a pattern instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Context,
    Subject,
    Object,
}

impl Slot {
    pub const ALL: [Slot; 3] = [Slot::Context, Slot::Subject, Slot::Object];

    pub fn as_str(self) -> &'static str {
        match self {
            Slot::Context => "context",
            Slot::Subject => "subject",
            Slot::Object => "object",
        }
    }

    pub fn parse(text: &str) -> Option<Slot> {
        Slot::ALL.into_iter().find(|s| s.as_str().eq_ignore_ascii_case(text.trim()))
    }
}

/// One formalized claim: an instantiated five-slot pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuperPatternInstance {
    pub context: Option<ClassExpr>,
    pub subject: ClassExpr,
    pub qualifier: Qualifier,
    pub relation: RelationType,
    pub object: ClassExpr,
    pub meta: ClaimMeta,
}

impl SuperPatternInstance {
    pub fn new(
        id: impl Into<String>,
        context: Option<ClassExpr>,
        subject: ClassExpr,
        qualifier: Qualifier,
        relation: RelationType,
        object: ClassExpr,
    ) -> Self {
        SuperPatternInstance {
            context,
            subject,
            qualifier,
            relation,
            object,
            meta: ClaimMeta::new(id),
        }
    }

    pub fn id(&self) -> &str {
        &self.meta.id
    }

    pub fn slot(&self, slot: Slot) -> Option<&ClassExpr> {
        match slot {
            Slot::Context => self.context.as_ref(),
            Slot::Subject => Some(&self.subject),
            Slot::Object => Some(&self.object),
        }
    }

    pub fn slot_mut(&mut self, slot: Slot) -> Option<&mut ClassExpr> {
        match slot {
            Slot::Context => self.context.as_mut(),
            Slot::Subject => Some(&mut self.subject),
            Slot::Object => Some(&mut self.object),
        }
    }

    pub fn validate(&self) -> Result<(), ClassError> {
        if let Some(c) = &self.context {
            c.validate()?;
        }
        self.subject.validate()?;
        self.object.validate()
    }

    /// Copy with every intersection flattened, deduplicated and sorted.
    pub fn canonicalized(&self) -> SuperPatternInstance {
        SuperPatternInstance {
            context: self.context.as_ref().map(ClassExpr::canonical),
            subject: self.subject.canonical(),
            object: self.object.canonical(),
            ..self.clone()
        }
    }
}

/// A corpus record: either a formalized claim, or a claim that was judged
/// too simple for the pattern and is kept only so denominators stay right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClaimEntry {
    Expressible(SuperPatternInstance),
    Inexpressible(ClaimMeta),
}

impl ClaimEntry {
    pub fn meta(&self) -> &ClaimMeta {
        match self {
            ClaimEntry::Expressible(i) => &i.meta,
            ClaimEntry::Inexpressible(m) => m,
        }
    }

    pub fn id(&self) -> &str {
        &self.meta().id
    }

    pub fn expressible(&self) -> bool {
        matches!(self, ClaimEntry::Expressible(_))
    }

    pub fn instance(&self) -> Option<&SuperPatternInstance> {
        match self {
            ClaimEntry::Expressible(i) => Some(i),
            ClaimEntry::Inexpressible(_) => None,
        }
    }
}

impl From<SuperPatternInstance> for ClaimEntry {
    fn from(inst: SuperPatternInstance) -> Self {
        ClaimEntry::Expressible(inst)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClaimDocument {
    pub entries: Vec<ClaimEntry>,
    pub source_path: String,
}

impl ClaimDocument {
    pub fn new(entries: Vec<ClaimEntry>) -> Result<Self, ClaimsError> {
        let doc = ClaimDocument { entries, source_path: String::new() };
        doc.check_unique_ids()?;
        Ok(doc)
    }

    pub fn from_instances(instances: Vec<SuperPatternInstance>) -> Result<Self, ClaimsError> {
        ClaimDocument::new(instances.into_iter().map(ClaimEntry::from).collect())
    }

    pub fn with_source_path(mut self, path: impl Into<String>) -> Self {
        self.source_path = path.into();
        self
    }

    pub fn check_unique_ids(&self) -> Result<(), ClaimsError> {
        let mut seen = HashSet::new();
        for e in &self.entries {
            if !seen.insert(e.id()) {
                return Err(ClaimsError::DuplicateId(e.id().to_string()));
            }
        }
        Ok(())
    }

    pub fn instances(&self) -> impl Iterator<Item = &SuperPatternInstance> {
        self.entries.iter().filter_map(ClaimEntry::instance)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same entries with canonically sorted intersections; source path dropped.
    pub fn canonicalized(&self) -> ClaimDocument {
        ClaimDocument {
            entries: self
                .entries
                .iter()
                .map(|e| match e {
                    ClaimEntry::Expressible(i) => ClaimEntry::Expressible(i.canonicalized()),
                    other => other.clone(),
                })
                .collect(),
            source_path: String::new(),
        }
    }
}
