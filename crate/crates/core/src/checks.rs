//! The acceptance suite: eleven exact checks with first-counterexample
//! reporting.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{enumerate_units, sum_to_one_tuples, FieldDescriptor, Unit, DEFAULT_GRID_BOUND};
use crate::forms::oracle::brute_force_gw;
use crate::forms::{
    fundamental_power_description, gw_of_form, witt_ambient, GwClass, QuadraticForm,
};
use crate::mw::{
    cartesian_check, check_derivation, derive_extended_steinberg, eta_power_image, instantiate,
    normalize, normalize_at, theta0, Letter, Monomial, MwExpression, Rule, RuleSet, Word,
};
use crate::slice::{
    convergence_check, eta_consistency, kmw_times_in, moore_filtration, shift_index,
    tate_filtration, ConvergenceCertificate, FiltrationQuery,
};
use crate::subgroup::Extent;
use crate::transfer::{
    extensions_up_to, filtration_preservation_check, projection_formula_check,
    transfer_closure_over, FiniteExtension,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Reduced bounds.
    Quick,
    /// The bounds of the acceptance criteria.
    Full,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(Error::Parse(format!("unknown profile `{s}` (quick, full)"))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Quick => "quick",
            Profile::Full => "full",
        })
    }
}

/// Faults that can be injected to exercise the checkers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Faults {
    pub corrupt_steinberg: bool,
}

impl Faults {
    fn rules(self) -> RuleSet {
        RuleSet {
            corrupt_steinberg: self.corrupt_steinberg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub first_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:>2} {}: {} cases", self.id, self.name, self.cases)?;
        if let Some(ms) = self.elapsed_ms {
            write!(f, " ({ms} ms)")?;
        }
        if let Some(why) = &self.first_failure {
            write!(f, "; first failure: {why}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub profile: Profile,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

/// Counts cases and keeps the first failure.
#[derive(Default)]
struct Tally {
    cases: u64,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.check(false, || what);
    }

    fn record<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(format!("{}: {e}", what()));
                None
            }
        }
    }
}

type Check = fn(Profile, Faults) -> Tally;

const CRITERIA: [(u32, &str, Check); 11] = [
    (1, "I-adic ladder over R", ladder),
    (2, "filtration at p = q = 0", main_specialization),
    (3, "grid law and shift invariance", grid_law),
    (4, "extended Steinberg derivations", extended_steinberg),
    (5, "relation soundness", relation_soundness),
    (6, "theta0 and eta-images", theta_and_eta),
    (7, "cartesian square", cartesian),
    (8, "oracle equivalence", oracle_equivalence),
    (9, "Moore spectrum filtration", moore),
    (10, "convergence", convergence),
    (11, "transfers", transfers),
];

/// Numbers and names of the criteria, in order.
pub fn criteria() -> Vec<(u32, &'static str)> {
    CRITERIA.iter().map(|(id, name, _)| (*id, *name)).collect()
}

/// Runs one criterion by number.
pub fn run_criterion(id: u32, profile: Profile, faults: Faults) -> Result<CriterionResult> {
    let (_, name, check) = CRITERIA
        .iter()
        .find(|(i, _, _)| *i == id)
        .ok_or_else(|| Error::Domain(format!("no criterion {id}")))?;
    let start = Instant::now();
    let tally = check(profile, faults);
    let elapsed = start.elapsed().as_millis() as u64;
    Ok(CriterionResult {
        id,
        name: name.to_string(),
        passed: tally.failure.is_none() && tally.cases > 0,
        cases: tally.cases,
        first_failure: tally.failure,
        elapsed_ms: (profile == Profile::Full).then_some(elapsed),
    })
}

/// Runs every criterion in order.
pub fn check_all(profile: Profile, faults: Faults) -> SuiteReport {
    let criteria: Vec<CriterionResult> = CRITERIA
        .iter()
        .map(|(id, _, _)| run_criterion(*id, profile, faults).expect("known id"))
        .collect();
    SuiteReport {
        profile,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

fn f(q: u64) -> FieldDescriptor {
    FieldDescriptor::finite(q).expect("valid order")
}

/// `R, F_3, F_5, F_7, F_9, C`.
pub fn headline_fields() -> Vec<FieldDescriptor> {
    vec![
        FieldDescriptor::real(),
        f(3),
        f(5),
        f(7),
        f(9),
        FieldDescriptor::complex(),
    ]
}

fn ladder(_: Profile, _: Faults) -> Tally {
    let mut t = Tally::default();
    let r = FieldDescriptor::real();
    for n in 0..=12u32 {
        let Some(d) = t.record(fundamental_power_description(&r, n), || format!("n = {n}")) else {
            continue;
        };
        let index_ok = match n {
            0 => d.extent() == Extent::Full,
            _ => d.extent() == Extent::IndexInRankZero(1 << (n - 1)),
        };
        t.check(index_ok, || format!("n = {n}: extent {}", d.extent()));
        let g = 1i64 << n;
        for rank in -2..=2i64 {
            for s in -2 * g - 2..=2 * g + 2 {
                if (rank - s).rem_euclid(2) != 0 {
                    continue;
                }
                let expected = n == 0 || (rank == 0 && s % g == 0);
                t.check(d.contains(&[rank, s]) == expected, || {
                    format!("n = {n}: membership of (rank {rank}, signature {s})")
                });
            }
        }
        if n >= 1 {
            let label = format!("signature ∈ {g}ℤ, rank 0");
            t.check(d.description() == label, || format!("n = {n}: label {}", d.description()));
        }
    }
    t
}

fn main_specialization(_: Profile, _: Faults) -> Tally {
    let mut t = Tally::default();
    for field in headline_fields() {
        for n in -3..=8i64 {
            let lhs = tate_filtration(&FiltrationQuery::new(&field, n, 0, 0));
            let rhs = fundamental_power_description(&field, n.max(0) as u32);
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => t.check(a == b, || {
                    format!("{field}, n = {n}: {} vs I^{}", a.description(), n.max(0))
                }),
                (Err(e), _) | (_, Err(e)) => t.fail(format!("{field}, n = {n}: {e}")),
            }
        }
    }
    t
}

fn grid_law(profile: Profile, _: Faults) -> Tally {
    let mut t = Tally::default();
    let bound = if profile == Profile::Full { 6 } else { 3 };
    let mut fields = headline_fields();
    fields.extend([f(11), f(13), f(25), f(27)]);
    for field in fields {
        for n in -bound..=bound {
            for p in -bound..=bound {
                for q in -bound..=bound {
                    let query = FiltrationQuery::new(&field, n, p, q);
                    let what = || format!("{field}, (n, p, q) = ({n}, {p}, {q})");
                    let Some(sub) = t.record(tate_filtration(&query), what) else {
                        continue;
                    };
                    let big_n = shift_index(n - p, n - q);
                    if let Some(expected) = t.record(kmw_times_in(q - p, big_n, &field), what) {
                        t.check(sub == expected, || format!("{}: differs from K^MW·I^{big_n}", what()));
                    }
                    if let Some(ok) = t.record(eta_consistency(&query), what) {
                        t.check(ok, || format!("{}: η-power image differs", what()));
                    }
                    for r in -2..=2 {
                        let shifted = tate_filtration(&query.shifted(r));
                        if let Some(s) = t.record(shifted, || format!("{}, r = {r}", what())) {
                            t.check(s == sub, || format!("{}: not invariant under r = {r}", what()));
                        }
                    }
                }
            }
        }
    }
    t
}

fn literal_list(units: &[Unit]) -> String {
    let parts: Vec<String> = units.iter().map(|u| u.literal()).collect();
    format!("[{}]", parts.join(","))
}

fn extended_steinberg(profile: Profile, faults: Faults) -> Tally {
    let mut t = Tally::default();
    let rules = faults.rules();
    let max_n = if profile == Profile::Full { 4 } else { 3 };
    for q in [3u64, 5, 7, 9] {
        let field = f(q);
        for n in 2..=max_n {
            let Some(tuples) = t.record(sum_to_one_tuples(&field, n, DEFAULT_GRID_BOUND), || {
                format!("{field}, n = {n}")
            }) else {
                continue;
            };
            for units in tuples {
                let what = || format!("{field} tuple {}", literal_list(&units));
                let Some(d) = t.record(derive_extended_steinberg(&units), what) else {
                    continue;
                };
                if let Err(e) = check_derivation(&d, &rules) {
                    t.fail(format!("{}: {e}", what()));
                    continue;
                }
                let zero = normalize(&d.end).map(|nf| nf.is_zero()).unwrap_or(false);
                t.check(zero && d.end.is_zero(), || format!("{}: end is not 0", what()));
            }
        }
    }
    t
}

fn word_expr(field: &FieldDescriptor, word: Word) -> MwExpression {
    MwExpression::from_terms(field, vec![Monomial::new(1, word)]).expect("same field")
}

fn symbol_count(word: &[Letter]) -> usize {
    word.iter().filter(|l| matches!(l, Letter::Sym(_))).count()
}

fn relation_soundness(_: Profile, faults: Faults) -> Tally {
    let mut t = Tally::default();
    let rules = faults.rules();
    // K^MW_2(F_q) = 0 hides wrong relations between two symbols, so a real
    // sample is added to the exhaustive finite instances
    let mut cases: Vec<(FieldDescriptor, Vec<Unit>)> = [3u64, 5, 7, 9]
        .into_iter()
        .map(|q| {
            let field = f(q);
            let units = enumerate_units(&field).expect("finite field");
            (field, units)
        })
        .collect();
    let r = FieldDescriptor::real();
    let sample = ["1", "-1", "2", "-2", "1/2", "-1/2", "3", "-3"]
        .iter()
        .map(|s| r.parse_unit(s).expect("valid literal"))
        .collect();
    cases.push((r, sample));
    for (field, units) in cases {
        let mut contexts: Vec<(Word, Word)> = vec![(vec![], vec![]), (vec![Letter::Eta], vec![])];
        for c in &units {
            contexts.push((vec![Letter::Sym(c.clone())], vec![]));
            contexts.push((vec![], vec![Letter::Sym(c.clone())]));
        }
        for rule in Rule::ALL {
            let vars = rule.variables();
            let mut assignments: Vec<Vec<&Unit>> = vec![vec![]];
            for _ in vars {
                assignments = assignments
                    .into_iter()
                    .flat_map(|a| {
                        units.iter().map(move |u| {
                            let mut b = a.clone();
                            b.push(u);
                            b
                        })
                    })
                    .collect();
            }
            for values in assignments {
                let bindings = vars
                    .iter()
                    .zip(&values)
                    .map(|(k, v)| (k.to_string(), (*v).clone()))
                    .collect();
                let Ok(inst) = instantiate(rule, &bindings, &field, &rules) else {
                    continue;
                };
                for (pre, post) in &contexts {
                    let wrap = |w: &Word| {
                        let mut out = pre.clone();
                        out.extend(w.iter().cloned());
                        out.extend(post.iter().cloned());
                        out
                    };
                    let lhs = wrap(&inst.lhs);
                    if symbol_count(&lhs) > 3 {
                        continue;
                    }
                    let degree = crate::mw::expr::word_degree(&lhs);
                    let rhs_terms = inst
                        .rhs
                        .iter()
                        .map(|(c, w)| Monomial::new(*c, wrap(w)))
                        .collect();
                    let what = || format!("{field} {rule} {bindings:?} in context {pre:?}…{post:?}");
                    let Some(rhs) = t.record(MwExpression::from_terms(&field, rhs_terms), what) else {
                        continue;
                    };
                    let a = normalize_at(&word_expr(&field, lhs.clone()), degree);
                    let b = normalize_at(&rhs, degree);
                    match (a, b) {
                        (Ok(a), Ok(b)) => t.check(a == b, || {
                            format!("{}: {} ≠ {}", what(), a, b)
                        }),
                        (Err(e), _) | (_, Err(e)) => t.fail(format!("{}: {e}", what())),
                    }
                }
            }
        }
    }
    t
}

fn theta_and_eta(profile: Profile, _: Faults) -> Tally {
    let mut t = Tally::default();
    for field in headline_fields() {
        // sample of degree-0 elements: integers, η[u], <u>
        let units: Vec<Unit> = if field.is_finite() {
            enumerate_units(&field).expect("finite field")
        } else {
            ["1", "-1", "2", "-3", "1/2", "-5/7"]
                .iter()
                .map(|s| field.parse_unit(s).expect("valid literal"))
                .collect()
        };
        let mut sample = vec![
            MwExpression::one(&field),
            MwExpression::constant(&field, -2),
            MwExpression::zero(&field),
        ];
        for u in &units {
            sample.push(MwExpression::eta(&field).mul(&MwExpression::symbol(u)).expect("same field"));
            sample.push(MwExpression::bracket(u));
        }
        for x in &sample {
            let tx = theta0(x);
            for y in &sample {
                let what = || format!("{field}: x = {x}, y = {y}");
                let (Some(tx), Some(ty)) = (
                    t.record(tx.clone(), what),
                    t.record(theta0(y), what),
                ) else {
                    continue;
                };
                let prod = x.mul(y).and_then(|xy| theta0(&xy));
                let sum = x.add(y).and_then(|s| theta0(&s));
                if let (Some(p), Some(s)) = (t.record(prod, what), t.record(sum, what)) {
                    let ok = Ok(p) == tx.mul(&ty) && Ok(s) == tx.add(&ty);
                    t.check(ok, || format!("{}: not a ring map", what()));
                }
            }
        }
        // <u> goes to the class of the rank-one form
        for u in &units {
            if let Some(c) = t.record(theta0(&MwExpression::bracket(u)), || format!("{field} <{u}>")) {
                let form = QuadraticForm::new(&field, vec![u.clone()]).expect("same field");
                t.check(c == gw_of_form(&form), || format!("{field}: theta0(<{u}>) = {c}"));
            }
        }
        // bijective onto coordinates: a + b η[g] ↦ distinct classes covering a box
        let g = field.nonsquare();
        let mut seen = std::collections::BTreeMap::new();
        let b_range = if field.is_finite() { -2..=1i64 } else { -2..=2 };
        for a in -4..=4i64 {
            for b in b_range.clone() {
                if g.is_none() && b != 0 {
                    continue;
                }
                let mut e = MwExpression::constant(&field, a);
                if let Some(g) = &g {
                    let eg = MwExpression::eta(&field).mul(&MwExpression::symbol(g)).expect("same field");
                    e = e.add(&eg.scale(b)).expect("same field");
                }
                if let Some(c) = t.record(theta0(&e), || format!("{field}: {e}")) {
                    seen.entry(c.coords()).or_insert_with(Vec::new).push(e.to_string());
                }
            }
        }
        let injective_expected = !field.is_finite();
        for (coords, pre) in &seen {
            // over F_q, 2η[g] = 0 in GW, so b and b + 2 collide
            let expected = if injective_expected { 1 } else { 2 };
            t.check(pre.len() == expected, || {
                format!("{field}: {coords:?} has preimages {pre:?}")
            });
        }
        for rank in -2..=2i64 {
            let targets: Vec<Vec<i64>> = match field.family() {
                crate::field::FieldFamily::FiniteOdd => vec![vec![rank, 0], vec![rank, 1]],
                crate::field::FieldFamily::RealClosed => {
                    (-rank.abs()..=rank.abs()).step_by(2).map(|s| vec![rank, s]).collect()
                }
                crate::field::FieldFamily::QuadraticallyClosed => vec![vec![rank]],
            };
            for v in targets {
                t.check(seen.contains_key(&v), || format!("{field}: {v:?} not in the image"));
            }
        }
        // η^n-images
        let limit = if profile == Profile::Full { 4096 } else { 256 };
        for n in 1..=8u32 {
            let what = || format!("{field}, n = {n}");
            let image = eta_power_image(&field, n, limit);
            let expected = fundamental_power_description(&field, n);
            if let (Some(a), Some(b)) = (t.record(image, what), t.record(expected, what)) {
                t.check(a == b, || format!("{}: image {} vs I^n {}", what(), a.extent(), b.extent()));
            }
        }
    }
    t
}

fn cartesian(_: Profile, _: Faults) -> Tally {
    let mut t = Tally::default();
    for q in [3u64, 5, 7, 9, 11, 13] {
        let field = f(q);
        for m in [1i64, 2] {
            if let Some(rep) = t.record(cartesian_check(&field, m), || format!("{field}, m = {m}")) {
                let expected = if m == 1 { q - 1 } else { 1 };
                t.check(rep.passed && rep.fiber_product_order == expected, || {
                    format!(
                        "{field}, m = {m}: {} commutation failures, fiber order {}",
                        rep.commutation_failures, rep.fiber_product_order
                    )
                });
            }
        }
    }
    t
}

fn oracle_equivalence(profile: Profile, _: Faults) -> Tally {
    let mut t = Tally::default();
    let max_rank = if profile == Profile::Full { 6 } else { 4 };
    for q in [3u64, 5, 7, 9, 11, 13] {
        let field = f(q);
        let Some(table) = t.record(brute_force_gw(&field, max_rank), || field.to_string()) else {
            continue;
        };
        let mut invariants = std::collections::BTreeSet::new();
        for class in table.classes() {
            let first = gw_of_form(&table.member_form(&class.members[0]));
            t.check(invariants.insert(first.coords()), || {
                format!("{field}: two oracle classes share invariants {:?}", first.coords())
            });
            t.check(first.disc_dev() == Some(class.disc as i64), || {
                format!("{field}: oracle discriminant {} vs {:?}", class.disc, first.disc_dev())
            });
            for member in &class.members {
                let c: GwClass = gw_of_form(&table.member_form(member));
                t.check(c == first, || format!("{field}: member {member:?} has invariants {:?}", c.coords()));
            }
        }
        t.check(invariants.len() == 2 * max_rank + 1, || {
            format!("{field}: {} classes up to rank {max_rank}", invariants.len())
        });
        // W(F_q) from anisotropic representatives
        let Some(witt_table) = t.record(brute_force_gw(&field, 4), || field.to_string()) else {
            continue;
        };
        let mut anisotropic = std::collections::BTreeSet::new();
        for c in witt_table.classes() {
            let form = witt_table.member_form(&c.members[0]);
            if let Some(k) = t.record(witt_table.witt_reduce(&form), || format!("{field}: Witt reduction")) {
                anisotropic.insert(k);
            }
        }
        t.check(anisotropic.len() == 4, || format!("{field}: |W| = {}", anisotropic.len()));
        let empty = QuadraticForm::new(&field, vec![]).expect("same field");
        let zero = witt_table.classify(&empty).expect("rank 0");
        let ones = |k: usize| QuadraticForm::new(&field, vec![field.one(); k]).expect("same field");
        let order = (1..=4).find(|&k| witt_table.witt_reduce(&ones(k)).ok() == Some(zero));
        let cyclic = order == Some(4);
        t.check(cyclic == (q % 4 == 3), || format!("{field}: order of <1> in W is {order:?}"));
        let structure = witt_ambient(&field).structure().to_string();
        let expected = if q % 4 == 3 { "Z/4" } else { "Z/2 ⊕ Z/2" };
        t.check(structure == expected, || format!("{field}: W modelled as {structure}"));
    }
    t
}

fn moore(_: Profile, _: Faults) -> Tally {
    let mut t = Tally::default();
    let mut fields = vec![FieldDescriptor::real()];
    fields.extend([3u64, 5, 7, 9, 11, 13].map(f));
    for field in fields {
        for ell in [3i64, 5, 7] {
            for n in 0..=10u32 {
                let what = || format!("{field}, ell = {ell}, n = {n}");
                let Some(s) = t.record(moore_filtration(ell, &field, n), what) else {
                    continue;
                };
                let ok = if n == 0 {
                    s.is_full()
                } else if field.is_finite() {
                    s.is_zero()
                } else {
                    s.structure().to_string() == format!("Z/{ell}")
                        && s.description() == format!("Z/{ell}")
                };
                t.check(ok, || format!("{}: got {}", what(), s.structure()));
            }
        }
    }
    t
}

fn convergence(_: Profile, _: Faults) -> Tally {
    let mut t = Tally::default();
    for field in headline_fields() {
        if let Some(rep) = t.record(convergence_check(&field, 12), || field.to_string()) {
            let certificate_ok = match (field.family(), &rep.certificate) {
                (crate::field::FieldFamily::RealClosed, ConvergenceCertificate::TwoAdicValuation { .. }) => true,
                (_, ConvergenceCertificate::FiniteLength { .. }) => !matches!(
                    field.family(),
                    crate::field::FieldFamily::RealClosed
                ),
                _ => false,
            };
            t.check(rep.separated && certificate_ok && rep.elements_checked > 0, || {
                format!("{field}: counterexample {:?}", rep.counterexample)
            });
        }
    }
    t
}

fn transfers(profile: Profile, _: Faults) -> Tally {
    let mut t = Tally::default();
    let rank_bound = if profile == Profile::Full { 4 } else { 2 };
    let extensions = ["Fq(9)/Fq(3)", "Fq(27)/Fq(3)", "Fq(25)/Fq(5)", "C/R"];
    for s in extensions {
        let Some(ext) = t.record(s.parse::<FiniteExtension>(), || s.to_string()) else {
            continue;
        };
        if let Some(rep) = t.record(projection_formula_check(&ext, rank_bound), || s.to_string()) {
            t.check(rep.passed, || format!("projection formula over {s}: {:?}", rep.counterexample));
        }
        for m in -3..=3 {
            for n in 0..=3 {
                let what = || format!("preservation over {s}, q - p = {m}, N = {n}");
                if let Some(rep) = t.record(filtration_preservation_check(&ext, m, n), what) {
                    t.check(rep.passed, || format!("{}: {:?}", what(), rep.counterexample));
                }
            }
        }
    }
    let bound = if profile == Profile::Full { 3 } else { 2 };
    for base in [f(3), f(5)] {
        let Some(exts) = t.record(extensions_up_to(&base, 3), || base.to_string()) else {
            continue;
        };
        for n in -bound..=bound {
            for p in -bound..=bound {
                for q in -bound..=bound {
                    let what = || format!("closure over {base}, (n, p, q) = ({n}, {p}, {q})");
                    let closure = transfer_closure_over(&base, &exts, q, p, n);
                    let expected = tate_filtration(&FiltrationQuery::new(&base, n, p, q));
                    if let (Some(a), Some(b)) = (t.record(closure, what), t.record(expected, what)) {
                        t.check(a == b, || format!("{}: {} vs {}", what(), a.extent(), b.extent()));
                    }
                }
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let report = check_all(Profile::Quick, Faults::default());
        for c in &report.criteria {
            assert!(c.passed, "{c}");
            assert!(c.elapsed_ms.is_none());
        }
        assert!(report.passed);
    }

    #[test]
    fn corrupt_steinberg_is_caught() {
        let faults = Faults {
            corrupt_steinberg: true,
        };
        let r4 = run_criterion(4, Profile::Quick, faults).unwrap();
        assert!(!r4.passed);
        assert!(r4.first_failure.unwrap().contains("tuple"));
        assert!(!run_criterion(5, Profile::Quick, faults).unwrap().passed);
        assert!(run_criterion(1, Profile::Quick, faults).unwrap().passed);
    }

    #[test]
    fn profile_parsing() {
        assert_eq!("full".parse::<Profile>().unwrap(), Profile::Full);
        assert!("slow".parse::<Profile>().is_err());
        assert!(run_criterion(12, Profile::Quick, Faults::default()).is_err());
    }
}
