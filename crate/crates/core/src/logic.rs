//! Higher-order logic form of an instantiated pattern, its text renderings,
//! and the English gloss.
//!
//! The form is a conditional ratio test
//!
//! ```text
//! P( m(∃z( o(z) ∧ i(z,x) ∧ r(y,z) )) | s(y) ∧ c(x) ∧ i(y,x) ) ⪋ q
//! ```
//!
//! where `i` is "is in the context of". Without a context class the `c` and
//! `i` atoms drop out and `x` disappears.

use std::fmt::{self, Write as _};

use crate::claim::SuperPatternInstance;
use crate::decimal::exact_decimal;
use crate::vocab::{qualifier_params, Comparison, Modality, Qualifier, Rational};

/// Name of the context-of predicate.
pub const CONTEXT_OF: &str = "i";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    CondProbCmp {
        event: Box<Formula>,
        condition: Box<Formula>,
        comparison: Comparison,
        threshold: Rational,
    },
    Possibly(Box<Formula>),
    Exists(Var, Box<Formula>),
    Conj(Vec<Formula>),
    Unary(String, Var),
    Binary(String, Var, Var),
}

impl Formula {
    fn unary(p: &str, v: Var) -> Formula {
        Formula::Unary(p.to_string(), v)
    }

    fn binary(p: &str, a: Var, b: Var) -> Formula {
        Formula::Binary(p.to_string(), a, b)
    }

    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
        let mut add = |v: Var, bound: &Vec<Var>| {
            if !bound.contains(&v) && !out.contains(&v) {
                out.push(v);
            }
        };
        match self {
            Formula::Unary(_, v) => add(*v, bound),
            Formula::Binary(_, a, b) => {
                add(*a, bound);
                add(*b, bound);
            }
            Formula::Conj(parts) => parts.iter().for_each(|p| p.collect_free(bound, out)),
            Formula::Possibly(b) => b.collect_free(bound, out),
            Formula::Exists(v, b) => {
                bound.push(*v);
                b.collect_free(bound, out);
                bound.pop();
            }
            Formula::CondProbCmp { event, condition, .. } => {
                event.collect_free(bound, out);
                condition.collect_free(bound, out);
            }
        }
    }

    /// Atoms in the subtree, left to right.
    pub fn atoms(&self) -> Vec<&Formula> {
        match self {
            Formula::Unary(..) | Formula::Binary(..) => vec![self],
            Formula::Conj(parts) => parts.iter().flat_map(Formula::atoms).collect(),
            Formula::Possibly(b) | Formula::Exists(_, b) => b.atoms(),
            Formula::CondProbCmp { event, condition, .. } => {
                let mut a = event.atoms();
                a.extend(condition.atoms());
                a
            }
        }
    }
}

/// Predicate names plugged into the template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateNames {
    pub context: Option<String>,
    pub subject: String,
    pub relation: String,
    pub object: String,
}

impl PredicateNames {
    /// The single-letter schema names `c`, `s`, `r`, `o`.
    pub fn schematic(with_context: bool) -> Self {
        PredicateNames {
            context: with_context.then(|| "c".to_string()),
            subject: "s".into(),
            relation: "r".into(),
            object: "o".into(),
        }
    }

    /// Slugged class labels and the relation identifier of an instance.
    pub fn of(inst: &SuperPatternInstance) -> Self {
        PredicateNames {
            context: inst.context.as_ref().map(|c| c.predicate_name()),
            subject: inst.subject.predicate_name(),
            relation: inst.relation.id(),
            object: inst.object.predicate_name(),
        }
    }
}

/// Fill the template with the given predicate names and qualifier.
pub fn build_template(names: &PredicateNames, qualifier: Qualifier) -> Formula {
    use Var::*;
    let params = qualifier_params(qualifier);
    let (event_body, condition) = match &names.context {
        Some(c) => (
            Formula::Conj(vec![
                Formula::unary(&names.object, Z),
                Formula::binary(CONTEXT_OF, Z, X),
                Formula::binary(&names.relation, Y, Z),
            ]),
            Formula::Conj(vec![
                Formula::unary(&names.subject, Y),
                Formula::unary(c, X),
                Formula::binary(CONTEXT_OF, Y, X),
            ]),
        ),
        None => (
            Formula::Conj(vec![
                Formula::unary(&names.object, Z),
                Formula::binary(&names.relation, Y, Z),
            ]),
            Formula::unary(&names.subject, Y),
        ),
    };
    let exists = Formula::Exists(Z, Box::new(event_body));
    let event = match params.modality {
        Modality::Possible => Formula::Possibly(Box::new(exists)),
        Modality::Actual => exists,
    };
    Formula::CondProbCmp {
        event: Box::new(event),
        condition: Box::new(condition),
        comparison: params.comparison,
        threshold: params.threshold,
    }
}

pub fn build_formula(inst: &SuperPatternInstance) -> Formula {
    build_template(&PredicateNames::of(inst), inst.qualifier)
}

/// The template with schema letters in place of the instance's names.
pub fn build_schema(qualifier: Qualifier, with_context: bool) -> Formula {
    build_template(&PredicateNames::schematic(with_context), qualifier)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderStyle {
    #[default]
    UnicodeMath,
    Ascii,
    Latex,
}

impl RenderStyle {
    pub fn parse(text: &str) -> Option<RenderStyle> {
        match text.trim().to_ascii_lowercase().as_str() {
            "unicode" | "unicode-math" => Some(RenderStyle::UnicodeMath),
            "ascii" => Some(RenderStyle::Ascii),
            "latex" => Some(RenderStyle::Latex),
            _ => None,
        }
    }
}

struct Symbols {
    exists: &'static str,
    forall: &'static str,
    and: &'static str,
    implies: &'static str,
    diamond: &'static str,
    given: &'static str,
    eq: &'static str,
    geq: &'static str,
    leq: &'static str,
}

fn symbols(style: RenderStyle) -> Symbols {
    match style {
        RenderStyle::UnicodeMath => Symbols {
            exists: "∃",
            forall: "∀",
            and: "∧",
            implies: "→",
            diamond: "◇",
            given: "|",
            eq: "=",
            geq: "≥",
            leq: "≤",
        },
        RenderStyle::Ascii => Symbols {
            exists: "EXISTS ",
            forall: "FORALL ",
            and: "AND",
            implies: "->",
            diamond: "DIAMOND",
            given: "|",
            eq: "=",
            geq: ">=",
            leq: "<=",
        },
        RenderStyle::Latex => Symbols {
            exists: "\\exists ",
            forall: "\\forall ",
            and: "\\wedge",
            implies: "\\rightarrow",
            diamond: "\\Diamond",
            given: "\\mid",
            eq: "=",
            geq: "\\geq",
            leq: "\\leq",
        },
    }
}

fn pred_name(name: &str, style: RenderStyle) -> String {
    if style == RenderStyle::Latex && name.chars().count() > 1 {
        format!("\\text{{{name}}}")
    } else {
        name.to_string()
    }
}

fn write_formula(out: &mut String, f: &Formula, style: RenderStyle, sym: &Symbols) {
    match f {
        Formula::Unary(p, v) => {
            let _ = write!(out, "{}({v})", pred_name(p, style));
        }
        Formula::Binary(p, a, b) => {
            let _ = write!(out, "{}({a},{b})", pred_name(p, style));
        }
        Formula::Conj(parts) => {
            for (i, part) in parts.iter().enumerate() {
                if i > 0 {
                    let _ = write!(out, " {} ", sym.and);
                }
                if matches!(part, Formula::Conj(_)) {
                    out.push('(');
                    write_formula(out, part, style, sym);
                    out.push(')');
                } else {
                    write_formula(out, part, style, sym);
                }
            }
        }
        Formula::Exists(v, body) => {
            let _ = write!(out, "{}{v}( ", sym.exists);
            write_formula(out, body, style, sym);
            out.push_str(" )");
        }
        Formula::Possibly(body) => {
            out.push_str(sym.diamond);
            out.push('(');
            write_formula(out, body, style, sym);
            out.push(')');
        }
        Formula::CondProbCmp { event, condition, comparison, threshold } => {
            out.push_str("P( ");
            // the modality slot is always parenthesized, even when empty
            if matches!(**event, Formula::Possibly(_)) {
                write_formula(out, event, style, sym);
            } else {
                out.push('(');
                write_formula(out, event, style, sym);
                out.push(')');
            }
            let _ = write!(out, " {} ", sym.given);
            write_formula(out, condition, style, sym);
            let cmp = match comparison {
                Comparison::Equal => sym.eq,
                Comparison::AtLeast => sym.geq,
                Comparison::AtMost => sym.leq,
            };
            let _ = write!(out, " ) {cmp} {}", exact_decimal(*threshold));
        }
    }
}

pub fn render_formula(f: &Formula, style: RenderStyle) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, style, &symbols(style));
    out
}

/// Implication reading of a ratio-equals-one formula without modality:
/// every condition tuple satisfies the event. The quantifiers over the
/// condition variables are universal. `None` for any other formula.
pub fn render_always_implication(f: &Formula, style: RenderStyle) -> Option<String> {
    let Formula::CondProbCmp { event, condition, comparison: Comparison::Equal, threshold } = f else {
        return None;
    };
    if *threshold != Rational::from(1) || matches!(**event, Formula::Possibly(_)) {
        return None;
    }
    let sym = symbols(style);
    let mut out = String::new();
    for v in condition.free_vars().into_iter().rev() {
        let _ = write!(out, "{}{v} ", sym.forall);
    }
    out.push_str("( ");
    write_formula(&mut out, condition, style, &sym);
    let _ = write!(out, " {} ", sym.implies);
    write_formula(&mut out, event, style, &sym);
    out.push_str(" )");
    Some(out)
}

fn pluralize_word(word: &str) -> String {
    let lower = word.to_lowercase();
    if ["s", "x", "z", "ch", "sh"].iter().any(|e| lower.ends_with(e)) {
        format!("{word}es")
    } else if lower.ends_with('y')
        && !lower.ends_with("ay")
        && !lower.ends_with("ey")
        && !lower.ends_with("oy")
        && !lower.ends_with("uy")
    {
        format!("{}ies", &word[..word.len() - 1])
    } else {
        format!("{word}s")
    }
}

fn pluralize(label: &str) -> String {
    match label.rsplit_once(' ') {
        Some((head, last)) => format!("{head} {}", pluralize_word(last)),
        None => pluralize_word(label),
    }
}

fn context_plural(c: &crate::class::ClassExpr) -> String {
    use crate::class::ClassExpr;
    match c {
        ClassExpr::Atomic { label, .. } => pluralize(label),
        ClassExpr::Intersection(parts) => {
            let mut labels: Vec<String> = parts.iter().map(ClassExpr::display_label).collect();
            labels[0] = context_plural(&parts[0]);
            labels.join(" together with ")
        }
    }
}

/// English reading of an instance.
pub fn render_gloss(inst: &SuperPatternInstance) -> String {
    gloss(inst, false)
}

/// Like [`render_gloss`], but a context reading ends with
/// "(i.e. the same <context>)".
pub fn render_gloss_explained(inst: &SuperPatternInstance) -> String {
    gloss(inst, true)
}

fn gloss(inst: &SuperPatternInstance, explain: bool) -> String {
    let core = format!(
        "things of type {} {} have a relation of type {} to things of type {}",
        inst.subject.display_label(),
        inst.qualifier.phrase(),
        inst.relation.name(),
        inst.object.display_label(),
    );
    match &inst.context {
        Some(c) => {
            let note = if explain { format!(" (i.e. the same {})", c.display_label()) } else { String::new() };
            format!("In the context of all {}, {core} that are in the same context{note}.", context_plural(c))
        }
        None => {
            let mut chars = core.chars();
            let first = chars.next().map(|c| c.to_uppercase().collect::<String>()).unwrap_or_default();
            format!("{first}{}.", chars.as_str())
        }
    }
}
