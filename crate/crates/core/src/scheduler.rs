//! Application order computation and variant generation.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::check::{check_wellformed, Diagnostic};
use crate::dsl::{AocExpr, Delta, ProductConfiguration};
use crate::engine::{apply_delta, ApplicationError};
use crate::model::ModelLibrary;

/// Deltas by name, iterated in name order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaLibrary {
    deltas: BTreeMap<String, Delta>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("delta `{0}` is defined more than once")]
pub struct DuplicateDelta(pub String);

impl DeltaLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_deltas(deltas: impl IntoIterator<Item = Delta>) -> Result<Self, DuplicateDelta> {
        let mut lib = Self::new();
        for delta in deltas {
            lib.insert(delta)?;
        }
        Ok(lib)
    }

    pub fn insert(&mut self, delta: Delta) -> Result<(), DuplicateDelta> {
        if self.deltas.contains_key(&delta.name) {
            return Err(DuplicateDelta(delta.name));
        }
        self.deltas.insert(delta.name.clone(), delta);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Delta> {
        self.deltas.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.deltas.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Delta> {
        self.deltas.values()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.deltas.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }
}

/// Evaluates a constraint for a delta about to be applied after
/// `applied_before`. `after d` holds only if `d` is selected and already
/// applied, so `!after d` is vacuous for an unselected `d`.
pub fn evaluate_aoc(aoc: &AocExpr, applied_before: &BTreeSet<String>, config: &BTreeSet<String>) -> bool {
    eval(aoc, &|d| applied_before.contains(d) && config.contains(d))
}

fn eval(aoc: &AocExpr, applied: &impl Fn(&str) -> bool) -> bool {
    match aoc {
        AocExpr::True => true,
        AocExpr::After(d) => applied(d),
        AocExpr::Not(e) => !eval(e, applied),
        AocExpr::And(l, r) => eval(l, applied) && eval(r, applied),
        AocExpr::Or(l, r) => eval(l, applied) || eval(r, applied),
    }
}

/// One `after` atom, possibly negated, as it occurs in a constraint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AocLiteral {
    pub delta: String,
    pub negated: bool,
}

impl fmt::Display for AocLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!after {}", self.delta)
        } else {
            write!(f, "after {}", self.delta)
        }
    }
}

/// The first literal, left to right, that makes `aoc` evaluate to something
/// other than `want`. None if `aoc` already evaluates to `want`.
fn blame(aoc: &AocExpr, want: bool, applied: &impl Fn(&str) -> bool) -> Option<AocLiteral> {
    if eval(aoc, applied) == want {
        return None;
    }
    match aoc {
        AocExpr::True => None,
        AocExpr::After(d) => Some(AocLiteral { delta: d.clone(), negated: !want }),
        AocExpr::Not(e) => blame(e, !want, applied),
        AocExpr::And(l, r) | AocExpr::Or(l, r) => blame(l, want, applied).or_else(|| blame(r, want, applied)),
    }
}

/// A delta that could not be appended to a prefix, with the literal of its
/// constraint that failed. No literal means the constraint is false
/// regardless of the prefix, which the parser cannot produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocked {
    pub delta: String,
    pub literal: Option<AocLiteral>,
}

/// A prefix no remaining delta can extend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeadEnd {
    pub prefix: Vec<String>,
    pub blocked: Vec<Blocked>,
}

impl fmt::Display for DeadEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "after [{}]:", self.prefix.join(", "))?;
        for (i, b) in self.blocked.iter().enumerate() {
            let sep = if i == 0 { " " } else { "; " };
            match &b.literal {
                Some(literal) => write!(f, "{sep}{} needs `{literal}`", b.delta)?,
                None => write!(f, "{sep}{} can never be applied", b.delta)?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderFailure {
    #[error("configuration selects unknown delta `{name}`")]
    UnknownDelta { name: String },
    #[error("no application order satisfies the constraints ({} dead end(s))", dead_ends.len())]
    Unsatisfiable { dead_ends: Vec<DeadEnd> },
}

/// Computes the lexicographically smallest order of `config.deltas` in which
/// every delta's constraint holds against the deltas applied before it.
///
/// Depth-first search trying candidates in name order, so the first complete
/// order found is the smallest. Whether a constraint holds depends only on
/// the set already applied, which makes failure a property of that set; sets
/// known to fail are not expanded twice.
pub fn compute_order(config: &ProductConfiguration, deltas: &DeltaLibrary) -> Result<Vec<String>, OrderFailure> {
    let mut selected = Vec::with_capacity(config.deltas.len());
    for name in &config.deltas {
        match deltas.get(name) {
            Some(delta) => selected.push(delta),
            None => return Err(OrderFailure::UnknownDelta { name: name.clone() }),
        }
    }
    let mut search = Search {
        selected: &selected,
        config: &config.deltas,
        used: vec![false; selected.len()],
        prefix: Vec::new(),
        failed: HashSet::new(),
        dead_ends: Vec::new(),
    };
    if search.extend() {
        Ok(search.prefix.iter().map(|&i| selected[i].name.clone()).collect())
    } else {
        Err(OrderFailure::Unsatisfiable { dead_ends: search.dead_ends })
    }
}

struct Search<'a> {
    /// Sorted by name, since the configuration is a sorted set.
    selected: &'a [&'a Delta],
    config: &'a BTreeSet<String>,
    used: Vec<bool>,
    prefix: Vec<usize>,
    failed: HashSet<Vec<bool>>,
    dead_ends: Vec<DeadEnd>,
}

impl Search<'_> {
    fn extend(&mut self) -> bool {
        if self.prefix.len() == self.selected.len() {
            return true;
        }
        if self.failed.contains(&self.used) {
            return false;
        }
        let applied = |d: &str| {
            self.config.contains(d)
                && self.selected.iter().zip(&self.used).any(|(delta, &used)| used && delta.name == d)
        };
        let mut ready = Vec::new();
        let mut blocked = Vec::new();
        for (i, delta) in self.selected.iter().enumerate() {
            if self.used[i] {
                continue;
            }
            if eval(&delta.aoc, &applied) {
                ready.push(i);
            } else {
                blocked.push(Blocked { delta: delta.name.clone(), literal: blame(&delta.aoc, true, &applied) });
            }
        }
        if ready.is_empty() {
            self.dead_ends.push(DeadEnd {
                prefix: self.prefix.iter().map(|&i| self.selected[i].name.clone()).collect(),
                blocked,
            });
        }
        for i in ready {
            self.used[i] = true;
            self.prefix.push(i);
            if self.extend() {
                return true;
            }
            self.prefix.pop();
            self.used[i] = false;
        }
        self.failed.insert(self.used.clone());
        false
    }
}

/// A generated product variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationResult {
    pub variant: ModelLibrary,
    pub applied_order: Vec<String>,
    /// Well-formedness of the variant. Reported, not enforced.
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error(transparent)]
    Order(#[from] OrderFailure),
    #[error(transparent)]
    Application(#[from] ApplicationError),
}

/// Orders the configured deltas, applies them to `core` one after another
/// and checks the result.
pub fn generate(
    core: &ModelLibrary,
    deltas: &DeltaLibrary,
    config: &ProductConfiguration,
) -> Result<GenerationResult, GenerateError> {
    let order = compute_order(config, deltas)?;
    let mut variant = core.clone();
    for name in &order {
        let delta = deltas.get(name).expect("ordered deltas exist");
        variant = apply_delta(&variant, delta)?;
    }
    let diagnostics = check_wellformed(&variant);
    Ok(GenerationResult { variant, applied_order: order, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_deltas;

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn library(src: &str) -> DeltaLibrary {
        DeltaLibrary::from_deltas(parse_deltas(src).unwrap()).unwrap()
    }

    fn config(names: &[&str]) -> ProductConfiguration {
        ProductConfiguration::new("P", names.iter().copied())
    }

    #[test]
    fn negated_atom_on_unselected_delta_is_vacuous() {
        let aoc = AocExpr::not(AocExpr::after("DTW_post"));
        assert!(evaluate_aoc(&aoc, &set(&[]), &set(&["DABS"])));
    }

    #[test]
    fn atoms_and_conjunctions() {
        assert!(evaluate_aoc(&AocExpr::after("DTW_pre"), &set(&["DTW_pre"]), &set(&["DTW_pre", "DTW", "DTW_post"])));
        let both = AocExpr::and(AocExpr::after("A"), AocExpr::after("B"));
        assert!(!evaluate_aoc(&both, &set(&["A"]), &set(&["A", "B", "C"])));
        assert!(evaluate_aoc(&AocExpr::True, &set(&[]), &set(&[])));
    }

    #[test]
    fn applied_outside_config_does_not_count() {
        assert!(!evaluate_aoc(&AocExpr::after("X"), &set(&["X"]), &set(&[])));
    }

    const CHAIN: &str = "
        delta DTW_pre { modify model M { } }
        delta DTW { aoc after DTW_pre modify model M { } }
        delta DTW_post { aoc after DTW modify model M { } }
        delta DABS { aoc !after DTW_post modify model M { } }
        delta DTC_pre { modify model M { } }
        delta DTC { aoc after DTC_pre && after DABS modify model M { } }
        delta A { aoc after B modify model M { } }
        delta B { aoc after A modify model M { } }
    ";

    #[test]
    fn chain_is_ordered() {
        let lib = library(CHAIN);
        assert_eq!(
            compute_order(&config(&["DTW_post", "DTW", "DTW_pre"]), &lib).unwrap(),
            ["DTW_pre", "DTW", "DTW_post"]
        );
        assert_eq!(compute_order(&config(&["DABS"]), &lib).unwrap(), ["DABS"]);
        assert_eq!(compute_order(&config(&[]), &lib).unwrap(), Vec::<String>::new());
    }

    #[test]
    fn dependent_delta_comes_last() {
        let lib = library(CHAIN);
        let order = compute_order(&config(&["DABS", "DTC_pre", "DTC"]), &lib).unwrap();
        assert_eq!(order, ["DABS", "DTC_pre", "DTC"]);
    }

    #[test]
    fn negative_constraint_forces_earlier_position() {
        let lib = library(CHAIN);
        let order = compute_order(&config(&["DABS", "DTW_pre", "DTW", "DTW_post"]), &lib).unwrap();
        assert_eq!(order, ["DABS", "DTW_pre", "DTW", "DTW_post"]);
    }

    #[test]
    fn cycle_is_unsatisfiable_with_witness() {
        let lib = library(CHAIN);
        let err = compute_order(&config(&["A", "B"]), &lib).unwrap_err();
        let OrderFailure::Unsatisfiable { dead_ends } = &err else { panic!("{err}") };
        assert_eq!(dead_ends.len(), 1);
        assert_eq!(dead_ends[0].to_string(), "after []: A needs `after B`; B needs `after A`");
    }

    #[test]
    fn missing_dependency_names_the_atom() {
        let lib = library(CHAIN);
        let err = compute_order(&config(&["DTW"]), &lib).unwrap_err();
        let OrderFailure::Unsatisfiable { dead_ends } = err else { panic!() };
        assert_eq!(dead_ends[0].blocked[0].literal, Some(AocLiteral { delta: "DTW_pre".into(), negated: false }));
    }

    #[test]
    fn violated_negation_is_blamed() {
        let lib = library(
            "delta P { aoc after Q modify model M { } }
             delta Q { aoc !after R modify model M { } }
             delta R { aoc !(after Q || after P) modify model M { } }",
        );
        let err = compute_order(&config(&["P", "Q", "R"]), &lib).unwrap_err();
        let OrderFailure::Unsatisfiable { dead_ends } = err else { panic!() };
        let rendered: Vec<String> = dead_ends.iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["after [Q, P]: R needs `!after Q`", "after [R]: P needs `after Q`; Q needs `!after R`"]);
    }

    #[test]
    fn constant_false_constraint_blocks_without_literal() {
        let never = Delta { name: "N".into(), aoc: AocExpr::not(AocExpr::True), modifications: vec![] };
        let lib = DeltaLibrary::from_deltas([never]).unwrap();
        let err = compute_order(&config(&["N"]), &lib).unwrap_err();
        let OrderFailure::Unsatisfiable { dead_ends } = err else { panic!() };
        assert_eq!(dead_ends[0].to_string(), "after []: N can never be applied");
    }

    #[test]
    fn unknown_delta() {
        let lib = library(CHAIN);
        assert_eq!(
            compute_order(&config(&["DABS", "Nope"]), &lib).unwrap_err(),
            OrderFailure::UnknownDelta { name: "Nope".into() }
        );
    }

    #[test]
    fn duplicate_delta_rejected() {
        let deltas = parse_deltas("delta D { modify model M { } }").unwrap();
        let twice = deltas.iter().cloned().chain(deltas.iter().cloned());
        assert_eq!(DeltaLibrary::from_deltas(twice).unwrap_err(), DuplicateDelta("D".into()));
    }
}
