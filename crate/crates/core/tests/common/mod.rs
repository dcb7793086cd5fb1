//! Helpers shared by the integration tests: a brute-force interpreter for
//! built formulas, seeded random models and instances, and fixture paths.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use superclaim::logic::{Formula, Var, CONTEXT_OF};
use superclaim::vocab::Comparison;
use superclaim::{ClassExpr, FiniteModel, Qualifier, Rational, RelationType, SuperPatternInstance};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// Outcome of the direct reading: `None` when no assignment satisfies the
/// condition, otherwise the ratio and whether the comparison holds.
pub type Reading = Option<(Rational, bool)>;

type Env = BTreeMap<Var, String>;

fn unary_holds(m: &FiniteModel, w: &str, pred: &str, a: &str) -> bool {
    // Compound predicates are named by their parts joined with `+`.
    pred.split('+').all(|part| m.class_ext.get(&(w.to_string(), part.to_string())).is_some_and(|s| s.contains(a)))
}

fn binary_holds(m: &FiniteModel, w: &str, pred: &str, a: &str, b: &str) -> bool {
    let pair = (a.to_string(), b.to_string());
    if pred == CONTEXT_OF {
        return m.context_of.get(w).is_some_and(|s| s.contains(&pair));
    }
    let r = RelationType::ALL.into_iter().find(|r| r.id() == pred).unwrap_or_else(|| panic!("unknown predicate {pred}"));
    m.rel_ext.get(&(w.to_string(), r)).is_some_and(|s| s.contains(&pair))
}

fn holds(m: &FiniteModel, w: &str, f: &Formula, env: &mut Env) -> bool {
    match f {
        Formula::Unary(p, v) => unary_holds(m, w, p, &env[v]),
        Formula::Binary(p, a, b) => binary_holds(m, w, p, &env[a], &env[b]),
        Formula::Conj(parts) => parts.iter().all(|p| holds(m, w, p, env)),
        Formula::Exists(v, body) => {
            let saved = env.get(v).cloned();
            let found = m.domain.iter().any(|d| {
                env.insert(*v, d.clone());
                holds(m, w, body, env)
            });
            match saved {
                Some(s) => env.insert(*v, s),
                None => env.remove(v),
            };
            found
        }
        Formula::Possibly(body) => {
            let targets: Vec<String> =
                m.accessibility.iter().filter(|(a, _)| a == w).map(|(_, b)| b.clone()).collect();
            targets.iter().any(|t| holds(m, t, body, env))
        }
        Formula::CondProbCmp { .. } => panic!("nested probability"),
    }
}

/// Read a built formula on `m` by enumerating every assignment of its free
/// variables over the domain, straight from the formula tree.
pub fn interpret(m: &FiniteModel, f: &Formula) -> Reading {
    let Formula::CondProbCmp { event, condition, comparison, threshold } = f else {
        panic!("not a conditional-probability formula");
    };
    let vars = f.free_vars();
    let domain: Vec<&String> = m.domain.iter().collect();
    let mut cond = 0u64;
    let mut both = 0u64;
    let mut idx = vec![0usize; vars.len()];
    if !vars.is_empty() && domain.is_empty() {
        return None;
    }
    loop {
        let mut env: Env = vars.iter().zip(&idx).map(|(v, i)| (*v, domain[*i].clone())).collect();
        if holds(m, &m.actual, condition, &mut env) {
            cond += 1;
            if holds(m, &m.actual, event, &mut env) {
                both += 1;
            }
        }
        // odometer over assignments
        let mut k = 0;
        loop {
            if k == idx.len() {
                return finish(cond, both, *comparison, *threshold);
            }
            idx[k] += 1;
            if idx[k] < domain.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn finish(cond: u64, both: u64, cmp: Comparison, t: Rational) -> Reading {
    if cond == 0 {
        return None;
    }
    let r = Rational::new(both, cond);
    let ok = match cmp {
        Comparison::Equal => r == t,
        Comparison::AtLeast => r >= t,
        Comparison::AtMost => r <= t,
    };
    Some((r, ok))
}

pub const LABELS: [&str; 3] = ["a", "b", "c"];

/// Relations used by the generators: two groups, each with its head.
pub const RELATIONS: [RelationType; 5] = [
    RelationType::HasCausalRelationshipWith,
    RelationType::Causes,
    RelationType::Affects,
    RelationType::HasSpatioTemporalRelationshipWith,
    RelationType::CoOccursWith,
];

#[derive(Debug, Clone, Copy)]
pub struct ModelShape {
    pub max_worlds: usize,
    pub max_individuals: usize,
    pub reflexive: bool,
    pub taxonomy_closed: bool,
}

impl Default for ModelShape {
    fn default() -> Self {
        ModelShape { max_worlds: 4, max_individuals: 6, reflexive: true, taxonomy_closed: true }
    }
}

pub fn random_model(rng: &mut ChaCha8Rng, shape: ModelShape) -> FiniteModel {
    let nw = rng.gen_range(1..=shape.max_worlds);
    let ni = rng.gen_range(1..=shape.max_individuals);
    let worlds: Vec<String> = (0..nw).map(|i| format!("w{i}")).collect();
    let inds: Vec<String> = (0..ni).map(|i| format!("d{i}")).collect();
    let mut m = FiniteModel::new(worlds[0].clone());
    m.reflexive = shape.reflexive;
    for w in &worlds[1..] {
        m.add_world(w.clone());
    }
    for d in &inds {
        m.add_individual(d.clone());
    }
    let density: f64 = rng.gen_range(0.2..0.8);
    for a in &worlds {
        for b in &worlds {
            if a != b && rng.gen_bool(0.5) {
                m.add_access(a.clone(), b.clone());
            }
        }
        for label in LABELS {
            for d in &inds {
                if rng.gen_bool(density) {
                    m.add_class_member(a, label, d.clone());
                }
            }
        }
        for d in &inds {
            for e in &inds {
                if rng.gen_bool(density / 2.0) {
                    m.add_context_pair(a, d.clone(), e.clone());
                }
                for r in RELATIONS {
                    if rng.gen_bool(density / 3.0) {
                        m.add_relation_pair(a, r, d.clone(), e.clone());
                    }
                }
            }
        }
    }
    if shape.reflexive {
        m.make_reflexive();
    } else {
        m.accessibility.retain(|(a, b)| a != b);
        for a in &worlds {
            if rng.gen_bool(0.3) {
                m.add_access(a.clone(), a.clone());
            }
        }
    }
    if shape.taxonomy_closed {
        m.close_under_taxonomy();
    }
    m
}

pub fn random_class(rng: &mut ChaCha8Rng) -> ClassExpr {
    if rng.gen_bool(0.25) {
        let mut parts = LABELS.to_vec();
        parts.shuffle(rng);
        ClassExpr::intersection(parts[..2].iter().map(|l| ClassExpr::atomic(*l).unwrap()).collect()).unwrap()
    } else {
        ClassExpr::atomic(*LABELS.choose(rng).unwrap()).unwrap()
    }
}

pub fn random_instance(rng: &mut ChaCha8Rng, id: &str) -> SuperPatternInstance {
    let context = rng.gen_bool(0.6).then(|| random_class(rng));
    SuperPatternInstance::new(
        id,
        context,
        random_class(rng),
        *Qualifier::all().choose(rng).unwrap(),
        *RELATIONS.choose(rng).unwrap(),
        random_class(rng),
    )
}
