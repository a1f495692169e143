//! The one-sided sequent calculus: sequents, rule applications, premise
//! computation and single-step checking.

mod format;
mod tree;

use std::fmt;

use thiserror::Error;

use crate::syntax::{CaptureError, Formula, Term, Var, VarSet};

pub use format::{
    parse_proof, proof_from_sexp, proof_to_sexp, render_proof, rule_from_sexp, rule_to_sexp,
    sequent_from_sexp, sequent_to_sexp,
};
pub(crate) use tree::check_closed_leaf;
pub(crate) use format::{maybe_annotated_from_sexp, maybe_annotated_to_sexp, node_id};
pub use tree::{check_tree, NodeFault, ProofTree, Step, TreeError};

/// A finite multiset of formulas, stored sorted so that equality is multiset
/// equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Sequent(Vec<Formula>);

impl Sequent {
    pub fn new(mut formulas: Vec<Formula>) -> Sequent {
        formulas.sort();
        Sequent(formulas)
    }

    pub fn empty() -> Sequent {
        Sequent(Vec::new())
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.binary_search(f).is_ok()
    }

    pub fn count(&self, f: &Formula) -> usize {
        self.0.iter().filter(|g| *g == f).count()
    }

    /// `self, f`
    pub fn with(&self, f: Formula) -> Sequent {
        let mut v = self.0.clone();
        let at = v.binary_search(&f).unwrap_or_else(|e| e);
        v.insert(at, f);
        Sequent(v)
    }

    /// Removes one occurrence of `f`.
    pub fn without(&self, f: &Formula) -> Option<Sequent> {
        let at = self.0.binary_search(f).ok()?;
        let mut v = self.0.clone();
        v.remove(at);
        Some(Sequent(v))
    }

    /// Multiset union.
    pub fn union(&self, other: &Sequent) -> Sequent {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Sequent::new(v)
    }

    /// Multiset difference `self ∖ other`, if `other` is a sub-multiset.
    pub fn minus(&self, other: &Sequent) -> Option<Sequent> {
        let mut rest = self.clone();
        for f in other.iter() {
            rest = rest.without(f)?;
        }
        Some(rest)
    }

    pub fn is_submultiset_of(&self, other: &Sequent) -> bool {
        other.minus(self).is_some()
    }

    pub fn free_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        for f in &self.0 {
            f.collect_free(&mut out);
        }
        out
    }

    pub fn all_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        for f in &self.0 {
            f.collect_all_vars(&mut out);
        }
        out
    }

    pub fn has_free(&self, y: &Var) -> bool {
        self.0.iter().any(|f| f.has_free(y))
    }

    /// `Γ[y ↦ t]`
    pub fn substitute(&self, y: &Var, t: &Term) -> Result<Sequent, CaptureError> {
        let v = self
            .0
            .iter()
            .map(|f| f.substitute(y, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Sequent::new(v))
    }
}

impl FromIterator<Formula> for Sequent {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        Sequent::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Sequent {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", sequent_to_sexp(self))
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxiomKind {
    /// `Γ, t₀ = t₁, t₀ ≠ t₁`
    Atomic,
    /// `Γ, s(t) ≠ 0`
    Succ,
}

impl AxiomKind {
    pub fn name(self) -> &'static str {
        match self {
            AxiomKind::Atomic => "ax_a",
            AxiomKind::Succ => "ax_s",
        }
    }
}

/// Recognises initial sequents by syntactic term equality. `ax_a` wins when
/// both kinds match.
pub fn is_axiom(gamma: &Sequent) -> Option<AxiomKind> {
    let atomic = gamma.iter().any(|f| match f {
        Formula::Eq(t, u) => gamma.contains(&Formula::Neq(t.clone(), u.clone())),
        _ => false,
    });
    if atomic {
        return Some(AxiomKind::Atomic);
    }
    let succ = gamma
        .iter()
        .any(|f| matches!(f, Formula::Neq(Term::Succ(_), Term::Zero)));
    succ.then_some(AxiomKind::Succ)
}

/// An inference rule together with the arguments that make its premises
/// computable from the conclusion.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    And { principal: Formula },
    Or { principal: Formula },
    /// `principal` is `∀y φ`, `∀y ≤ t φ` or `t ≰ u`; `eigen` is the active
    /// variable `z`.
    All { principal: Formula, eigen: Var },
    /// `principal` is `∃y φ`, `∃y ≤ t φ` or `t ≤ u`.
    Ex { principal: Formula, witness: Term },
    Ref { t: Term },
    Rep {
        t0: Term,
        t1: Term,
        u0: Term,
        u1: Term,
        y: Var,
    },
    Add0 { t: Term },
    AddS { t: Term, u: Term },
    Mult0 { t: Term },
    MultS { t: Term, u: Term },
    Pred { t0: Term, t1: Term },
    Case { var: Var },
    Weak { delta: Sequent },
    Cut { formula: Formula },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::And { .. } => "and",
            Rule::Or { .. } => "or",
            Rule::All { .. } => "all",
            Rule::Ex { .. } => "ex",
            Rule::Ref { .. } => "ref",
            Rule::Rep { .. } => "rep",
            Rule::Add0 { .. } => "add0",
            Rule::AddS { .. } => "adds",
            Rule::Mult0 { .. } => "mult0",
            Rule::MultS { .. } => "mults",
            Rule::Pred { .. } => "pred",
            Rule::Case { .. } => "case",
            Rule::Weak { .. } => "weak",
            Rule::Cut { .. } => "cut",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Rule::And { .. } | Rule::Case { .. } | Rule::Cut { .. } => 2,
            _ => 1,
        }
    }

    /// True for rules whose premises differ from the conclusion only in
    /// atomic formulas.
    pub fn is_atomic_rule(&self) -> bool {
        matches!(
            self,
            Rule::Ref { .. }
                | Rule::Rep { .. }
                | Rule::Add0 { .. }
                | Rule::AddS { .. }
                | Rule::Mult0 { .. }
                | Rule::MultS { .. }
                | Rule::Pred { .. }
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rule_to_sexp(self))
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Why a rule's arguments do not fit its conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArgMismatch {
    #[error("principal formula {0} does not occur in the conclusion")]
    PrincipalAbsent(Formula),
    #[error("principal formula {0} has the wrong shape for this rule")]
    WrongShape(Formula),
    #[error("eigenvariable {0} occurs free in the conclusion")]
    EigenNotFresh(Var),
    #[error("case variable {0} is not free in the conclusion")]
    CaseVarNotFree(Var),
    #[error("weakened formulas {0} are not a sub-multiset of the conclusion")]
    NotSubMultiset(Sequent),
    #[error("side formula {0} does not occur in the conclusion")]
    SideAbsent(Formula),
    #[error(transparent)]
    Capture(#[from] CaptureError),
}

/// The unique premise list of `rule` applied to `conclusion`, left to right.
pub fn premises_of(conclusion: &Sequent, rule: &Rule) -> Result<Vec<Sequent>, ArgMismatch> {
    let take = |p: &Formula| {
        conclusion
            .without(p)
            .ok_or_else(|| ArgMismatch::PrincipalAbsent(p.clone()))
    };
    Ok(match rule {
        Rule::And { principal } => match principal {
            Formula::And(a, b) => {
                let gamma = take(principal)?;
                vec![gamma.with((**a).clone()), gamma.with((**b).clone())]
            }
            _ => return Err(ArgMismatch::WrongShape(principal.clone())),
        },
        Rule::Or { principal } => match principal {
            Formula::Or(a, b) => {
                let gamma = take(principal)?;
                vec![gamma.with((**a).clone()).with((**b).clone())]
            }
            _ => return Err(ArgMismatch::WrongShape(principal.clone())),
        },
        Rule::All { principal, eigen } => {
            let gamma = take(principal)?;
            if conclusion.has_free(eigen) {
                return Err(ArgMismatch::EigenNotFresh(eigen.clone()));
            }
            let z = Term::Var(eigen.clone());
            let instance = match principal {
                Formula::All(y, body) => body.substitute(y, &z)?,
                Formula::AllLe(y, t, body) => Formula::or(
                    Formula::Nle(z.clone(), t.clone()),
                    body.substitute(y, &z)?,
                ),
                Formula::Nle(t, u) => Formula::Neq(Term::add(z, t.clone()), u.clone()),
                _ => return Err(ArgMismatch::WrongShape(principal.clone())),
            };
            vec![gamma.with(instance)]
        }
        Rule::Ex { principal, witness } => {
            if !conclusion.contains(principal) {
                return Err(ArgMismatch::PrincipalAbsent(principal.clone()));
            }
            let instance = match principal {
                Formula::Ex(y, body) => body.substitute(y, witness)?,
                Formula::ExLe(y, t, body) => Formula::and(
                    Formula::Le(witness.clone(), t.clone()),
                    body.substitute(y, witness)?,
                ),
                Formula::Le(t, u) => Formula::Eq(Term::add(witness.clone(), t.clone()), u.clone()),
                _ => return Err(ArgMismatch::WrongShape(principal.clone())),
            };
            vec![conclusion.with(instance)]
        }
        Rule::Ref { t } => vec![conclusion.with(Formula::Neq(t.clone(), t.clone()))],
        Rule::Rep { t0, t1, u0, u1, y } => {
            let eq = Formula::Neq(t0.clone(), t1.clone());
            let at0 = Formula::Neq(u0.substitute(y, t0), u1.substitute(y, t0));
            let needed = Sequent::new(vec![eq, at0.clone()]);
            if !needed.is_submultiset_of(conclusion) {
                let missing = needed
                    .iter()
                    .find(|f| conclusion.count(f) < needed.count(f))
                    .cloned()
                    .unwrap_or(at0);
                return Err(ArgMismatch::SideAbsent(missing));
            }
            vec![conclusion.with(Formula::Neq(u0.substitute(y, t1), u1.substitute(y, t1)))]
        }
        Rule::Add0 { t } => vec![conclusion.with(Formula::Neq(
            Term::add(t.clone(), Term::Zero),
            t.clone(),
        ))],
        Rule::AddS { t, u } => vec![conclusion.with(Formula::Neq(
            Term::add(t.clone(), Term::succ(u.clone())),
            Term::succ(Term::add(t.clone(), u.clone())),
        ))],
        Rule::Mult0 { t } => vec![conclusion.with(Formula::Neq(
            Term::mul(t.clone(), Term::Zero),
            Term::Zero,
        ))],
        Rule::MultS { t, u } => vec![conclusion.with(Formula::Neq(
            Term::mul(t.clone(), Term::succ(u.clone())),
            Term::add(Term::mul(t.clone(), u.clone()), t.clone()),
        ))],
        Rule::Pred { t0, t1 } => {
            let side = Formula::Neq(Term::succ(t0.clone()), Term::succ(t1.clone()));
            if !conclusion.contains(&side) {
                return Err(ArgMismatch::SideAbsent(side));
            }
            vec![conclusion.with(Formula::Neq(t0.clone(), t1.clone()))]
        }
        Rule::Case { var } => {
            if !conclusion.has_free(var) {
                return Err(ArgMismatch::CaseVarNotFree(var.clone()));
            }
            vec![
                conclusion.substitute(var, &Term::Zero)?,
                conclusion.substitute(var, &Term::succ(Term::Var(var.clone())))?,
            ]
        }
        Rule::Weak { delta } => match conclusion.minus(delta) {
            Some(rest) => vec![rest],
            None => return Err(ArgMismatch::NotSubMultiset(delta.clone())),
        },
        Rule::Cut { formula } => vec![
            conclusion.with(formula.clone()),
            conclusion.with(formula.negate()),
        ],
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("({rule}) does not apply: {source}")]
    Args {
        rule: &'static str,
        #[source]
        source: ArgMismatch,
    },
    #[error("({rule}) takes {expected} premise(s), found {found}")]
    Arity {
        rule: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("({rule}) premise {index}: expected {expected}, found {found}")]
    Premise {
        rule: &'static str,
        index: usize,
        expected: Sequent,
        found: Sequent,
    },
}

/// Checks one inference: the given children must equal the computed premises,
/// in order.
pub fn check_step(conclusion: &Sequent, rule: &Rule, children: &[Sequent]) -> Result<(), StepError> {
    let expected = premises_of(conclusion, rule).map_err(|source| StepError::Args {
        rule: rule.name(),
        source,
    })?;
    if expected.len() != children.len() {
        return Err(StepError::Arity {
            rule: rule.name(),
            expected: expected.len(),
            found: children.len(),
        });
    }
    for (index, (e, c)) in expected.into_iter().zip(children).enumerate() {
        if &e != c {
            return Err(StepError::Premise {
                rule: rule.name(),
                index,
                expected: e,
                found: c.clone(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::syntax::{parse_formula, parse_term};

    fn seq(items: &[&str]) -> Sequent {
        items.iter().map(|s| parse_formula(s).unwrap()).collect()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn axiom_recognition() {
        assert_eq!(is_axiom(&seq(&["(eq x y)", "(neq x y)", "(eq 0 0)"])), Some(AxiomKind::Atomic));
        assert_eq!(is_axiom(&seq(&["(neq (s (add x 0)) 0)"])), Some(AxiomKind::Succ));
        assert_eq!(is_axiom(&seq(&["(eq x y)", "(neq y x)"])), None);
        assert_eq!(
            is_axiom(&seq(&["(eq x y)", "(neq x y)", "(neq (s 0) 0)"])),
            Some(AxiomKind::Atomic)
        );
    }

    #[test]
    fn premises_examples() {
        let or = f("(or (eq 0 0) (neq 0 0))");
        assert_eq!(
            premises_of(&seq(&["(or (eq 0 0) (neq 0 0))"]), &Rule::Or { principal: or }).unwrap(),
            vec![seq(&["(eq 0 0)", "(neq 0 0)"])]
        );
        let ex = f("(ex y (eq y 0))");
        assert_eq!(
            premises_of(
                &seq(&["(ex y (eq y 0))"]),
                &Rule::Ex {
                    principal: ex,
                    witness: Term::Zero
                }
            )
            .unwrap(),
            vec![seq(&["(eq 0 0)", "(ex y (eq y 0))"])]
        );
        assert_eq!(
            premises_of(
                &seq(&["(eq x 0)", "(ex y (eq x (s y)))"]),
                &Rule::Case { var: Var::new("x") }
            )
            .unwrap(),
            vec![
                seq(&["(eq 0 0)", "(ex y (eq 0 (s y)))"]),
                seq(&["(eq (s x) 0)", "(ex y (eq (s x) (s y)))"])
            ]
        );
    }

    #[test]
    fn check_step_examples() {
        assert!(check_step(
            &seq(&["(eq 0 0)"]),
            &Rule::Ref { t: Term::Zero },
            &[seq(&["(eq 0 0)", "(neq 0 0)"])]
        )
        .is_ok());
        let gamma = seq(&["(eq x y)"]);
        let rule = Rule::AddS { t: t("x"), u: t("y") };
        assert!(check_step(
            &gamma,
            &rule,
            &[gamma.with(f("(neq (add x (s y)) (s (add x y)))"))]
        )
        .is_ok());
        let err = check_step(&gamma, &Rule::Case { var: Var::new("z") }, &[gamma.clone(), gamma.clone()])
            .unwrap_err();
        assert!(matches!(
            err,
            StepError::Args {
                source: ArgMismatch::CaseVarNotFree(_),
                ..
            }
        ));
    }

    #[test]
    fn eigenvariable_must_be_fresh() {
        let gamma = seq(&["(all y (eq y x))", "(eq x 0)"]);
        let rule = Rule::All {
            principal: f("(all y (eq y x))"),
            eigen: Var::new("x"),
        };
        assert!(matches!(
            premises_of(&gamma, &rule),
            Err(ArgMismatch::EigenNotFresh(_))
        ));
    }

    #[test]
    fn rep_adds_the_rewritten_instance() {
        let gamma = seq(&["(neq a b)", "(neq (s a) 0)"]);
        let rule = Rule::Rep {
            t0: t("a"),
            t1: t("b"),
            u0: t("(s y)"),
            u1: t("0"),
            y: Var::new("y"),
        };
        assert_eq!(
            premises_of(&gamma, &rule).unwrap(),
            vec![gamma.with(f("(neq (s b) 0)"))]
        );
        // t₀ ≠ t₁ and the t₀-instance are distinct multiset members.
        let same = Rule::Rep {
            t0: t("a"),
            t1: t("b"),
            u0: t("y"),
            u1: t("b"),
            y: Var::new("y"),
        };
        assert!(premises_of(&seq(&["(neq a b)"]), &same).is_err());
        assert!(premises_of(&seq(&["(neq a b)", "(neq a b)"]), &same).is_ok());
    }

    #[test]
    fn weak_uses_multiplicities() {
        let gamma = seq(&["(eq 0 0)", "(eq 0 0)", "(neq x 0)"]);
        let delta = seq(&["(eq 0 0)", "(eq 0 0)"]);
        assert_eq!(
            premises_of(&gamma, &Rule::Weak { delta }).unwrap(),
            vec![seq(&["(neq x 0)"])]
        );
        let too_many = seq(&["(neq x 0)", "(neq x 0)"]);
        assert!(premises_of(&gamma, &Rule::Weak { delta: too_many }).is_err());
    }

    #[test]
    fn sugared_principals() {
        let gamma = seq(&["(all<= y x (eq y y))"]);
        let rule = Rule::All {
            principal: f("(all<= y x (eq y y))"),
            eigen: Var::new("e"),
        };
        assert_eq!(
            premises_of(&gamma, &rule).unwrap(),
            vec![seq(&["(or (nle e x) (eq e e))"])]
        );
        let le = seq(&["(le x y)"]);
        let rule = Rule::Ex {
            principal: f("(le x y)"),
            witness: t("0"),
        };
        assert_eq!(
            premises_of(&le, &rule).unwrap(),
            vec![seq(&["(le x y)", "(eq (add 0 x) y)"])]
        );
    }

    #[test]
    fn generated_instances_round_trip() {
        let mut rng = gen::rng(11);
        for name in gen::RULE_NAMES {
            for _ in 0..50 {
                let (conclusion, rule) = gen::random_rule_instance(&mut rng, name).unwrap();
                let premises = premises_of(&conclusion, &rule)
                    .unwrap_or_else(|e| panic!("{name}: {e} on {conclusion}"));
                assert_eq!(premises.len(), rule.arity());
                assert_eq!(check_step(&conclusion, &rule, &premises), Ok(()));
            }
        }
    }
}
