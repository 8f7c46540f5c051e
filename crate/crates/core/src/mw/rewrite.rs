//! Word rewriting with named Milnor–Witt relations and replayable derivations.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, Unit};

use super::expr::{Letter, Monomial, MwExpression, Word};

/// The named relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// `η[u] = [u]η`
    EtaComm,
    /// `[a][1-a] = 0`, `a ≠ 1`
    Steinberg,
    /// `[uv] = [u] + [v] + η[u][v]`
    Product,
    /// `ηη[-1] = -2η`
    EtaHyp,
    /// `η[a][b] = [b]η[a]`
    Central,
    /// `[ab] = [a] + <a>[b]`
    Twisted,
    /// `[a^{-1}] = -<a^{-1}>[a]`
    Inv,
    /// `[a][-a] = 0`
    NegSelf,
    /// `[1] = 0`
    One,
    /// `[a][-a^{-1}] = 0`
    NegInv,
    /// `[u][v] = [u+v][-v/u]`, `u + v ≠ 0`
    Sum,
}

impl Rule {
    pub const ALL: [Rule; 11] = [
        Rule::EtaComm,
        Rule::Steinberg,
        Rule::Product,
        Rule::EtaHyp,
        Rule::Central,
        Rule::Twisted,
        Rule::Inv,
        Rule::NegSelf,
        Rule::One,
        Rule::NegInv,
        Rule::Sum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::EtaComm => "R-eta-comm",
            Rule::Steinberg => "R-steinberg",
            Rule::Product => "R-product",
            Rule::EtaHyp => "R-eta-hyp",
            Rule::Central => "R-central",
            Rule::Twisted => "R-twisted",
            Rule::Inv => "R-inv",
            Rule::NegSelf => "R-negself",
            Rule::One => "R-one",
            Rule::NegInv => "R-neginv",
            Rule::Sum => "R-sum",
        }
    }

    /// Names of the unit variables the rule binds.
    pub fn variables(self) -> &'static [&'static str] {
        match self {
            Rule::EtaComm => &["u"],
            Rule::Steinberg => &["a"],
            Rule::Product | Rule::Sum => &["u", "v"],
            Rule::EtaHyp | Rule::One => &[],
            Rule::Central | Rule::Twisted => &["a", "b"],
            Rule::Inv | Rule::NegSelf | Rule::NegInv => &["a"],
        }
    }

    /// Whether the rule may also be applied right to left.
    pub fn reversible(self) -> bool {
        matches!(self, Rule::EtaComm | Rule::Central | Rule::Sum)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown rule `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

/// Where a step applies: the `term`-th term of the current (collected)
/// expression, starting at letter `offset` of its word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Position {
    pub offset: usize,
    pub term: usize,
}

pub type Bindings = BTreeMap<String, Unit>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub position: Position,
    pub bindings: Bindings,
    pub direction: Direction,
}

/// A rule set; the standard one, or one with an injected fault for testing
/// the checker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RuleSet {
    /// Replaces the Steinberg side condition `b = 1 - a` by `b = 1 + a`.
    pub corrupt_steinberg: bool,
}

impl RuleSet {
    pub fn standard() -> Self {
        RuleSet::default()
    }

    pub fn with_corrupt_steinberg() -> Self {
        RuleSet {
            corrupt_steinberg: true,
        }
    }
}

/// An instantiated rule: `lhs` rewrites to the combination `rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub lhs: Word,
    pub rhs: Vec<(i64, Word)>,
}

fn sym(u: &Unit) -> Letter {
    Letter::Sym(u.clone())
}

fn binding<'a>(rule: Rule, b: &'a Bindings, name: &str) -> Result<&'a Unit> {
    b.get(name)
        .ok_or_else(|| Error::Precondition(format!("{rule} needs a binding for `{name}`")))
}

fn nonzero(x: Option<Unit>, what: &str) -> Result<Unit> {
    x.ok_or_else(|| Error::Precondition(format!("{what} must be nonzero")))
}

/// Instantiates `rule` with `bindings`, checking its side conditions.
pub fn instantiate(
    rule: Rule,
    bindings: &Bindings,
    field: &FieldDescriptor,
    rules: &RuleSet,
) -> Result<Instance> {
    for name in bindings.keys() {
        if !rule.variables().contains(&name.as_str()) {
            return Err(Error::Precondition(format!("{rule} has no variable `{name}`")));
        }
    }
    for u in bindings.values() {
        field.check_same(u.field())?;
    }
    let eta = Letter::Eta;
    let inst = match rule {
        Rule::EtaComm => {
            let u = binding(rule, bindings, "u")?;
            Instance {
                lhs: vec![eta.clone(), sym(u)],
                rhs: vec![(1, vec![sym(u), eta])],
            }
        }
        Rule::Steinberg => {
            let a = binding(rule, bindings, "a")?;
            let b = if rules.corrupt_steinberg {
                field.one().add(a)?
            } else {
                a.one_minus()
            };
            let b = b.ok_or_else(|| {
                let need = if rules.corrupt_steinberg { "a ≠ -1" } else { "a ≠ 1" };
                Error::Precondition(format!("{rule} needs {need}, got a = {a}"))
            })?;
            Instance {
                lhs: vec![sym(a), sym(&b)],
                rhs: vec![],
            }
        }
        Rule::Product | Rule::Twisted => {
            let (x, y) = if rule == Rule::Product { ("u", "v") } else { ("a", "b") };
            let u = binding(rule, bindings, x)?;
            let v = binding(rule, bindings, y)?;
            Instance {
                lhs: vec![sym(&u.mul(v)?)],
                rhs: vec![
                    (1, vec![sym(u)]),
                    (1, vec![sym(v)]),
                    (1, vec![eta, sym(u), sym(v)]),
                ],
            }
        }
        Rule::EtaHyp => {
            let m1 = field.one().neg();
            Instance {
                lhs: vec![eta.clone(), eta.clone(), sym(&m1)],
                rhs: vec![(-2, vec![eta])],
            }
        }
        Rule::Central => {
            let a = binding(rule, bindings, "a")?;
            let b = binding(rule, bindings, "b")?;
            Instance {
                lhs: vec![eta.clone(), sym(a), sym(b)],
                rhs: vec![(1, vec![sym(b), eta, sym(a)])],
            }
        }
        Rule::Inv => {
            let a = binding(rule, bindings, "a")?;
            let ai = a.inv();
            Instance {
                lhs: vec![sym(&ai)],
                rhs: vec![(-1, vec![sym(a)]), (-1, vec![eta, sym(&ai), sym(a)])],
            }
        }
        Rule::NegSelf => {
            let a = binding(rule, bindings, "a")?;
            Instance {
                lhs: vec![sym(a), sym(&a.neg())],
                rhs: vec![],
            }
        }
        Rule::One => Instance {
            lhs: vec![sym(&field.one())],
            rhs: vec![],
        },
        Rule::NegInv => {
            let a = binding(rule, bindings, "a")?;
            Instance {
                lhs: vec![sym(a), sym(&a.inv().neg())],
                rhs: vec![],
            }
        }
        Rule::Sum => {
            let u = binding(rule, bindings, "u")?;
            let v = binding(rule, bindings, "v")?;
            let s = nonzero(u.add(v)?, "u + v")?;
            let t = v.div(u)?.neg();
            Instance {
                lhs: vec![sym(u), sym(v)],
                rhs: vec![(1, vec![sym(&s), sym(&t)])],
            }
        }
    };
    Ok(inst)
}

/// Applies one step to `expr`.
pub fn apply_step(expr: &MwExpression, step: &Step, rules: &RuleSet) -> Result<MwExpression> {
    let field = expr.field();
    let inst = instantiate(step.rule, &step.bindings, field, rules)?;
    let (pattern, replacement) = match step.direction {
        Direction::Forward => (inst.lhs, inst.rhs),
        Direction::Backward => {
            if !step.rule.reversible() {
                return Err(Error::Precondition(format!(
                    "{} cannot be applied backward",
                    step.rule
                )));
            }
            let (c, w) = inst.rhs.into_iter().next().expect("reversible rules have one word");
            debug_assert_eq!(c, 1);
            (w, vec![(1, inst.lhs)])
        }
    };
    let term = expr.terms().get(step.position.term).ok_or_else(|| {
        Error::Precondition(format!(
            "term index {} out of range ({} terms)",
            step.position.term,
            expr.terms().len()
        ))
    })?;
    let off = step.position.offset;
    let end = off + pattern.len();
    if end > term.word.len() || term.word[off..end] != pattern[..] {
        return Err(Error::Precondition(format!(
            "{} does not match term `{term}` at offset {off}",
            step.rule
        )));
    }
    let mut terms: Vec<Monomial> = expr
        .terms()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != step.position.term)
        .map(|(_, t)| t.clone())
        .collect();
    for (c, w) in replacement {
        let mut word = term.word[..off].to_vec();
        word.extend(w);
        word.extend(term.word[end..].iter().cloned());
        terms.push(Monomial::new(term.coeff * c, word));
    }
    MwExpression::from_terms(field, terms)
}

/// A start expression, a list of steps, and the claimed end expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub start: MwExpression,
    pub steps: Vec<Step>,
    pub end: MwExpression,
}

/// First failing step of a derivation; `step == steps.len()` means every
/// step applied but the claimed end was not reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepFailure {
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for StepFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step, self.reason)
    }
}

/// Replays `d` under `rules`.
pub fn check_derivation(d: &Derivation, rules: &RuleSet) -> std::result::Result<(), StepFailure> {
    let mut current = d.start.clone();
    for (i, step) in d.steps.iter().enumerate() {
        current = apply_step(&current, step, rules).map_err(|e| StepFailure {
            step: i,
            reason: e.to_string(),
        })?;
    }
    if current != d.end {
        return Err(StepFailure {
            step: d.steps.len(),
            reason: format!("derivation ends at `{current}`, not `{}`", d.end),
        });
    }
    Ok(())
}

pub fn verify_derivation(d: &Derivation) -> bool {
    check_derivation(d, &RuleSet::standard()).is_ok()
}

fn step(rule: Rule, term: usize, offset: usize, bindings: &[(&str, &Unit)]) -> Step {
    Step {
        rule,
        position: Position { term, offset },
        bindings: bindings
            .iter()
            .map(|(k, v)| (k.to_string(), (*v).clone()))
            .collect(),
        direction: Direction::Forward,
    }
}

/// Default depth of the fallback search.
pub const DEFAULT_SEARCH_DEPTH: usize = 64;

fn check_sum_to_one(units: &[Unit]) -> Result<FieldDescriptor> {
    let first = units
        .first()
        .ok_or_else(|| Error::Precondition("need at least one unit".into()))?;
    let field = first.field().clone();
    let mut sum: Option<Unit> = None;
    for u in units {
        field.check_same(u.field())?;
        sum = match sum {
            None => Some(u.clone()),
            Some(s) => s.add(u)?,
        };
    }
    if !sum.as_ref().is_some_and(Unit::is_one) {
        return Err(Error::Precondition(format!(
            "units {} do not sum to 1",
            units.iter().map(|u| u.literal()).collect::<Vec<_>>().join(",")
        )));
    }
    Ok(field)
}

/// Derives `[u_1]...[u_n] = 0` from `u_1 + ... + u_n = 1`.
///
/// Follows the induction: `[1] = 0` for `n = 1`, Steinberg for `n = 2`, and
/// otherwise rewrites the last two active factors `[u][v]` to
/// `[u+v][-v/u]`, which keeps the active prefix summing to 1, or kills the
/// word with `[u][-u] = 0` when `u + v = 0`. If the result does not replay,
/// a bounded search is tried.
pub fn derive_extended_steinberg(units: &[Unit]) -> Result<Derivation> {
    derive_extended_steinberg_with_depth(units, DEFAULT_SEARCH_DEPTH)
}

pub fn derive_extended_steinberg_with_depth(units: &[Unit], depth: usize) -> Result<Derivation> {
    let field = check_sum_to_one(units)?;
    let start = MwExpression::symbol_product(&field, units)?;
    let zero = MwExpression::zero(&field);
    let mut word: Vec<Unit> = units.to_vec();
    let mut steps = Vec::new();
    let mut k = word.len();
    loop {
        if k == 1 {
            steps.push(step(Rule::One, 0, 0, &[]));
            break;
        }
        if k == 2 {
            steps.push(step(Rule::Steinberg, 0, 0, &[("a", &word[0])]));
            break;
        }
        let (u, v) = (word[k - 2].clone(), word[k - 1].clone());
        match u.add(&v)? {
            None => {
                steps.push(step(Rule::NegSelf, 0, k - 2, &[("a", &u)]));
                break;
            }
            Some(s) => {
                steps.push(step(Rule::Sum, 0, k - 2, &[("u", &u), ("v", &v)]));
                word[k - 2] = s;
                word[k - 1] = v.div(&u)?.neg();
                k -= 1;
            }
        }
    }
    let d = Derivation {
        start: start.clone(),
        steps,
        end: zero.clone(),
    };
    if verify_derivation(&d) {
        return Ok(d);
    }
    let steps = search_to_zero(&start, depth)?;
    Ok(Derivation {
        start,
        steps,
        end: zero,
    })
}

/// Bindings that make `rule` match `word` at `offset` in the forward
/// direction, if any.
fn infer_bindings(rule: Rule, word: &[Letter], offset: usize) -> Option<Bindings> {
    let unit_at = |i: usize| match word.get(offset + i) {
        Some(Letter::Sym(u)) => Some(u.clone()),
        _ => None,
    };
    let mut b = Bindings::new();
    match rule {
        Rule::Steinberg | Rule::NegSelf | Rule::NegInv => {
            b.insert("a".into(), unit_at(0)?);
        }
        Rule::Sum => {
            b.insert("u".into(), unit_at(0)?);
            b.insert("v".into(), unit_at(1)?);
        }
        Rule::One => {}
        _ => return None,
    }
    Some(b)
}

/// Depth-bounded search for a derivation of `start = 0` using the killing
/// rules and `R-sum`.
pub fn search_to_zero(start: &MwExpression, depth: usize) -> Result<Vec<Step>> {
    let rules = RuleSet::standard();
    let mut seen = HashSet::new();
    let mut path = Vec::new();
    if dfs(start, depth, &rules, &mut seen, &mut path) {
        Ok(path)
    } else {
        Err(Error::SearchExhausted(depth))
    }
}

fn dfs(
    expr: &MwExpression,
    depth: usize,
    rules: &RuleSet,
    seen: &mut HashSet<String>,
    path: &mut Vec<Step>,
) -> bool {
    if expr.is_zero() {
        return true;
    }
    if depth == 0 || !seen.insert(expr.to_string()) {
        return false;
    }
    let order = [Rule::One, Rule::Steinberg, Rule::NegSelf, Rule::NegInv, Rule::Sum];
    for (ti, term) in expr.terms().iter().enumerate() {
        for rule in order {
            for offset in 0..term.word.len() {
                let Some(bindings) = infer_bindings(rule, &term.word, offset) else {
                    continue;
                };
                let s = Step {
                    rule,
                    position: Position { term: ti, offset },
                    bindings,
                    direction: Direction::Forward,
                };
                if let Ok(next) = apply_step(expr, &s, rules) {
                    path.push(s);
                    if dfs(&next, depth - 1, rules, seen, path) {
                        return true;
                    }
                    path.pop();
                }
            }
        }
    }
    false
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    bindings: BTreeMap<String, String>,
    direction: Direction,
    position: Position,
    rule: String,
}

#[derive(Serialize, Deserialize)]
struct DerivationJson {
    end: String,
    field: String,
    start: String,
    steps: Vec<StepJson>,
}

impl Derivation {
    pub fn field(&self) -> &FieldDescriptor {
        self.start.field()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Derivation> {
        let dto: DerivationJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("bad derivation JSON: {e}")))?;
        let field: FieldDescriptor = dto.field.parse()?;
        let mut steps = Vec::with_capacity(dto.steps.len());
        for s in dto.steps {
            let bindings = s
                .bindings
                .iter()
                .map(|(k, v)| Ok((k.clone(), field.parse_unit(v)?)))
                .collect::<Result<Bindings>>()?;
            steps.push(Step {
                rule: s.rule.parse()?,
                position: s.position,
                bindings,
                direction: s.direction,
            });
        }
        Ok(Derivation {
            start: MwExpression::parse(&field, &dto.start)?,
            steps,
            end: MwExpression::parse(&field, &dto.end)?,
        })
    }
}

impl Serialize for Derivation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DerivationJson {
            end: self.end.to_string(),
            field: self.field().to_string(),
            start: self.start.to_string(),
            steps: self
                .steps
                .iter()
                .map(|st| StepJson {
                    bindings: st
                        .bindings
                        .iter()
                        .map(|(k, v)| (k.clone(), v.literal()))
                        .collect(),
                    direction: st.direction,
                    position: st.position,
                    rule: st.rule.name().to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::sum_to_one_tuples;
    use crate::mw::normal::normalize;

    fn f(q: u64) -> FieldDescriptor {
        FieldDescriptor::finite(q).unwrap()
    }

    fn units(field: &FieldDescriptor, xs: &[i64]) -> Vec<Unit> {
        xs.iter().map(|&x| field.unit_from_int(x).unwrap()).collect()
    }

    #[test]
    fn worked_example_over_f7() {
        let field = f(7);
        let d = derive_extended_steinberg(&units(&field, &[3, 3, 2])).unwrap();
        let rules: Vec<Rule> = d.steps.iter().map(|s| s.rule).collect();
        assert_eq!(rules, [Rule::Sum, Rule::Steinberg]);
        assert!(verify_derivation(&d));
        assert!(d.end.is_zero());
        let mid = apply_step(&d.start, &d.steps[0], &RuleSet::standard()).unwrap();
        assert_eq!(mid.to_string(), "[3]*[5]*[4]");
    }

    #[test]
    fn base_cases() {
        let r = FieldDescriptor::real();
        let d = derive_extended_steinberg(&units(&r, &[1])).unwrap();
        assert_eq!(d.steps.len(), 1);
        assert_eq!(d.steps[0].rule, Rule::One);
        let d = derive_extended_steinberg(&units(&r, &[3, -2])).unwrap();
        assert_eq!(d.steps[0].rule, Rule::Steinberg);
        assert!(verify_derivation(&d));
        assert!(matches!(
            derive_extended_steinberg(&units(&r, &[3, 2])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn negself_branch() {
        let r = FieldDescriptor::real();
        let d = derive_extended_steinberg(&units(&r, &[1, 2, -2])).unwrap();
        assert_eq!(d.steps[0].rule, Rule::NegSelf);
        assert!(verify_derivation(&d));
    }

    #[test]
    fn wrong_steinberg_instance_rejected() {
        let field = f(7);
        let start = MwExpression::parse(&field, "[3][4]").unwrap();
        let d = Derivation {
            start,
            steps: vec![step(Rule::Steinberg, 0, 0, &[("a", &field.unit_from_int(3).unwrap())])],
            end: MwExpression::zero(&field),
        };
        let err = check_derivation(&d, &RuleSet::standard()).unwrap_err();
        assert_eq!(err.step, 0);
        assert!(!verify_derivation(&d));
    }

    #[test]
    fn eta_hyp_single_step() {
        let field = f(5);
        let d = Derivation {
            start: MwExpression::parse(&field, "eta*eta*[-1] + 2*eta").unwrap(),
            steps: vec![step(Rule::EtaHyp, 1, 0, &[])],
            end: MwExpression::zero(&field),
        };
        assert!(verify_derivation(&d), "{:?}", check_derivation(&d, &RuleSet::standard()));
    }

    #[test]
    fn backward_only_for_reversible_rules() {
        let field = f(7);
        let three = field.unit_from_int(3).unwrap();
        let e = MwExpression::parse(&field, "[3]*eta").unwrap();
        let mut s = step(Rule::EtaComm, 0, 0, &[("u", &three)]);
        s.direction = Direction::Backward;
        let out = apply_step(&e, &s, &RuleSet::standard()).unwrap();
        assert_eq!(out.to_string(), "eta*[3]");
        let e = MwExpression::parse(&field, "[3]").unwrap();
        let mut s = step(Rule::One, 0, 0, &[]);
        s.direction = Direction::Backward;
        assert!(apply_step(&e, &s, &RuleSet::standard()).is_err());
    }

    #[test]
    fn corrupted_rules_reject_valid_derivations() {
        let field = f(7);
        let d = derive_extended_steinberg(&units(&field, &[3, 5])).unwrap();
        assert!(check_derivation(&d, &RuleSet::with_corrupt_steinberg()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let field = f(9);
        for t in sum_to_one_tuples(&field, 3, 0).unwrap().take(20) {
            let d = derive_extended_steinberg(&t).unwrap();
            let v = d.to_json_value();
            let back = Derivation::from_json_value(&v).unwrap();
            assert_eq!(back, d);
            assert_eq!(serde_json::to_string(&back.to_json_value()).unwrap(), serde_json::to_string(&v).unwrap());
        }
    }

    #[test]
    fn search_fallback_finds_derivations() {
        let field = f(5);
        for t in sum_to_one_tuples(&field, 3, 0).unwrap() {
            let start = MwExpression::symbol_product(&field, &t).unwrap();
            let steps = search_to_zero(&start, DEFAULT_SEARCH_DEPTH).unwrap();
            let d = Derivation {
                start,
                steps,
                end: MwExpression::zero(&field),
            };
            assert!(verify_derivation(&d));
        }
        let nonzero = MwExpression::parse(&field, "[2]").unwrap();
        assert!(matches!(search_to_zero(&nonzero, 8), Err(Error::SearchExhausted(8))));
    }

    #[test]
    fn small_exhaustive_steinberg() {
        for q in [3u64, 5, 7] {
            let field = f(q);
            for n in 1..=3 {
                for t in sum_to_one_tuples(&field, n, 0).unwrap() {
                    let d = derive_extended_steinberg(&t).unwrap();
                    assert!(verify_derivation(&d));
                    assert!(normalize(&d.start).unwrap().is_zero());
                }
            }
        }
    }
}
