//! Terms and formulas of first-order arithmetic in negation normal form.
//!
//! Negation is a syntactic operation ([`Formula::negate`]) pushed down to the
//! atoms. Bounded quantifiers and `≤` are kept as first-class constructors so
//! that the bounded (Δ₀) fragment stays syntactically recognisable; they can be
//! expanded with [`Formula::desugar`] and recognised again with
//! [`Formula::resugar`].

mod classify;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use classify::{classify, is_in, profile, ClassProfile, ComplexityClass, Kind};
pub use parse::{
    formula_from_sexp, formula_to_sexp, parse_formula, parse_term, term_from_sexp, term_to_sexp,
    var_from_sexp,
};

/// An individual variable; equality is by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    /// Panics on an empty name.
    pub fn new(name: &str) -> Var {
        assert!(!name.is_empty(), "variable names are non-empty");
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Var {
        Var::new(s)
    }
}

/// Variable sets iterate in name order, which fixes every rendering.
pub type VarSet = BTreeSet<Var>;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Zero,
    Var(Var),
    Succ(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn add(t: Term, u: Term) -> Term {
        Term::Add(Box::new(t), Box::new(u))
    }

    pub fn mul(t: Term, u: Term) -> Term {
        Term::Mul(Box::new(t), Box::new(u))
    }

    pub fn free_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Term::Zero => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Succ(t) => t.collect_vars(out),
            Term::Add(a, b) | Term::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn contains_var(&self, y: &Var) -> bool {
        match self {
            Term::Zero => false,
            Term::Var(v) => v == y,
            Term::Succ(t) => t.contains_var(y),
            Term::Add(a, b) | Term::Mul(a, b) => a.contains_var(y) || b.contains_var(y),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// `self[y ↦ t]`; terms have no binders, so this never fails.
    pub fn substitute(&self, y: &Var, t: &Term) -> Term {
        match self {
            Term::Zero => Term::Zero,
            Term::Var(v) if v == y => t.clone(),
            Term::Var(_) => self.clone(),
            Term::Succ(a) => Term::succ(a.substitute(y, t)),
            Term::Add(a, b) => Term::add(a.substitute(y, t), b.substitute(y, t)),
            Term::Mul(a, b) => Term::mul(a.substitute(y, t), b.substitute(y, t)),
        }
    }

    /// If this term is a numeral `sᵏ(0)`, returns `k`.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut k = 0;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(k),
                Term::Succ(inner) => {
                    k += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Zero | Term::Var(_) => 1,
            Term::Succ(t) => 1 + t.size(),
            Term::Add(a, b) | Term::Mul(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// The numeral `sᵏ(0)`.
pub fn numeral(k: u64) -> Term {
    let mut t = Term::Zero;
    for _ in 0..k {
        t = Term::succ(t);
    }
    t
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Neq(Term, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    All(Var, Box<Formula>),
    Ex(Var, Box<Formula>),
    /// `∀y ≤ t φ`; `y` does not occur in `t`.
    AllLe(Var, Term, Box<Formula>),
    /// `∃y ≤ t φ`; `y` does not occur in `t`.
    ExLe(Var, Term, Box<Formula>),
    /// `t ≤ u`, short for `∃z (z + t = u)`.
    Le(Term, Term),
    /// `t ≰ u`, the dual of [`Formula::Le`], short for `∀z (z + t ≠ u)`.
    Nle(Term, Term),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("substituting for {var} would capture {binder}")]
pub struct CaptureError {
    /// The binder that would capture a variable of the substituted term.
    pub binder: Var,
    /// The variable being replaced.
    pub var: Var,
}

impl Formula {
    pub fn eq(t: Term, u: Term) -> Formula {
        Formula::Eq(t, u)
    }

    pub fn neq(t: Term, u: Term) -> Formula {
        Formula::Neq(t, u)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn all(y: Var, a: Formula) -> Formula {
        Formula::All(y, Box::new(a))
    }

    pub fn ex(y: Var, a: Formula) -> Formula {
        Formula::Ex(y, Box::new(a))
    }

    /// Panics if `y` occurs in `t`.
    pub fn all_le(y: Var, t: Term, a: Formula) -> Formula {
        assert!(!t.contains_var(&y), "bound variable occurs in its bound");
        Formula::AllLe(y, t, Box::new(a))
    }

    /// Panics if `y` occurs in `t`.
    pub fn ex_le(y: Var, t: Term, a: Formula) -> Formula {
        assert!(!t.contains_var(&y), "bound variable occurs in its bound");
        Formula::ExLe(y, t, Box::new(a))
    }

    /// `⊤ := 0 = 0`
    pub fn top() -> Formula {
        Formula::Eq(Term::Zero, Term::Zero)
    }

    /// `⊥ := 0 ≠ 0`
    pub fn bot() -> Formula {
        Formula::Neq(Term::Zero, Term::Zero)
    }

    /// `a → b := ā ∨ b`
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::or(a.negate(), b)
    }

    /// `a ↔ b := (a → b) ∧ (b → a)`
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Left-associated disjunction; the empty disjunction is `⊥`.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::bot)
    }

    /// Left-associated conjunction; the empty conjunction is `⊤`.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::Eq(..) | Formula::Neq(..) | Formula::Le(..) | Formula::Nle(..)
        )
    }

    /// True when the formula uses only the core constructors.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Neq(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_core() && b.is_core(),
            Formula::All(_, a) | Formula::Ex(_, a) => a.is_core(),
            Formula::AllLe(..) | Formula::ExLe(..) | Formula::Le(..) | Formula::Nle(..) => false,
        }
    }

    /// The Tait negation `φ̄`.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Eq(t, u) => Formula::Neq(t.clone(), u.clone()),
            Formula::Neq(t, u) => Formula::Eq(t.clone(), u.clone()),
            Formula::And(a, b) => Formula::or(a.negate(), b.negate()),
            Formula::Or(a, b) => Formula::and(a.negate(), b.negate()),
            Formula::All(y, a) => Formula::ex(y.clone(), a.negate()),
            Formula::Ex(y, a) => Formula::all(y.clone(), a.negate()),
            Formula::AllLe(y, t, a) => Formula::ExLe(y.clone(), t.clone(), Box::new(a.negate())),
            Formula::ExLe(y, t, a) => Formula::AllLe(y.clone(), t.clone(), Box::new(a.negate())),
            Formula::Le(t, u) => Formula::Nle(t.clone(), u.clone()),
            Formula::Nle(t, u) => Formula::Le(t.clone(), u.clone()),
        }
    }

    pub fn free_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_free(&mut out);
        out
    }

    pub(crate) fn collect_free(&self, out: &mut VarSet) {
        match self {
            Formula::Eq(t, u) | Formula::Neq(t, u) | Formula::Le(t, u) | Formula::Nle(t, u) => {
                t.collect_vars(out);
                u.collect_vars(out);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::All(y, a) | Formula::Ex(y, a) => {
                let mut inner = a.free_vars();
                inner.remove(y);
                out.extend(inner);
            }
            Formula::AllLe(y, t, a) | Formula::ExLe(y, t, a) => {
                let mut inner = a.free_vars();
                inner.remove(y);
                out.extend(inner);
                t.collect_vars(out);
            }
        }
    }

    pub fn has_free(&self, y: &Var) -> bool {
        match self {
            Formula::Eq(t, u) | Formula::Neq(t, u) | Formula::Le(t, u) | Formula::Nle(t, u) => {
                t.contains_var(y) || u.contains_var(y)
            }
            Formula::And(a, b) | Formula::Or(a, b) => a.has_free(y) || b.has_free(y),
            Formula::All(z, a) | Formula::Ex(z, a) => z != y && a.has_free(y),
            Formula::AllLe(z, t, a) | Formula::ExLe(z, t, a) => {
                t.contains_var(y) || (z != y && a.has_free(y))
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable occurring anywhere, free or bound.
    pub fn all_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    pub(crate) fn collect_all_vars(&self, out: &mut VarSet) {
        match self {
            Formula::Eq(t, u) | Formula::Neq(t, u) | Formula::Le(t, u) | Formula::Nle(t, u) => {
                t.collect_vars(out);
                u.collect_vars(out);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_all_vars(out);
                b.collect_all_vars(out);
            }
            Formula::All(y, a) | Formula::Ex(y, a) => {
                out.insert(y.clone());
                a.collect_all_vars(out);
            }
            Formula::AllLe(y, t, a) | Formula::ExLe(y, t, a) => {
                out.insert(y.clone());
                t.collect_vars(out);
                a.collect_all_vars(out);
            }
        }
    }

    /// `φ[y ↦ t]`, replacing free occurrences of `y` only.
    ///
    /// Fails when a variable of `t` would become bound at a substituted
    /// occurrence, or when the substitution would put a bounded quantifier's
    /// own variable into its bound.
    pub fn substitute(&self, y: &Var, t: &Term) -> Result<Formula, CaptureError> {
        if !self.has_free(y) {
            return Ok(self.clone());
        }
        Ok(match self {
            Formula::Eq(a, b) => Formula::Eq(a.substitute(y, t), b.substitute(y, t)),
            Formula::Neq(a, b) => Formula::Neq(a.substitute(y, t), b.substitute(y, t)),
            Formula::Le(a, b) => Formula::Le(a.substitute(y, t), b.substitute(y, t)),
            Formula::Nle(a, b) => Formula::Nle(a.substitute(y, t), b.substitute(y, t)),
            Formula::And(a, b) => Formula::and(a.substitute(y, t)?, b.substitute(y, t)?),
            Formula::Or(a, b) => Formula::or(a.substitute(y, t)?, b.substitute(y, t)?),
            Formula::All(z, a) | Formula::Ex(z, a) => {
                // has_free(y) guarantees z != y and y is free in a.
                if t.contains_var(z) {
                    return Err(CaptureError {
                        binder: z.clone(),
                        var: y.clone(),
                    });
                }
                let body = a.substitute(y, t)?;
                match self {
                    Formula::All(..) => Formula::all(z.clone(), body),
                    _ => Formula::ex(z.clone(), body),
                }
            }
            Formula::AllLe(z, bound, a) | Formula::ExLe(z, bound, a) => {
                let new_bound = bound.substitute(y, t);
                let body = if z != y && a.has_free(y) {
                    if t.contains_var(z) {
                        return Err(CaptureError {
                            binder: z.clone(),
                            var: y.clone(),
                        });
                    }
                    a.substitute(y, t)?
                } else {
                    (**a).clone()
                };
                if new_bound.contains_var(z) {
                    return Err(CaptureError {
                        binder: z.clone(),
                        var: y.clone(),
                    });
                }
                match self {
                    Formula::AllLe(..) => Formula::AllLe(z.clone(), new_bound, Box::new(body)),
                    _ => Formula::ExLe(z.clone(), new_bound, Box::new(body)),
                }
            }
        })
    }

    /// Expands `≤`, `≰` and the bounded quantifiers into core constructors.
    /// Witness variables for `≤` come from the reserved `_w` namespace.
    pub fn desugar(&self) -> Formula {
        let mut fresh = Fresh::new("_w", self.all_vars());
        self.desugar_with(&mut fresh)
    }

    fn desugar_with(&self, fresh: &mut Fresh) -> Formula {
        match self {
            Formula::Eq(..) | Formula::Neq(..) => self.clone(),
            Formula::Le(t, u) => {
                let z = fresh.next_var();
                Formula::ex(
                    z.clone(),
                    Formula::Eq(Term::add(Term::Var(z), t.clone()), u.clone()),
                )
            }
            Formula::Nle(t, u) => {
                let z = fresh.next_var();
                Formula::all(
                    z.clone(),
                    Formula::Neq(Term::add(Term::Var(z), t.clone()), u.clone()),
                )
            }
            Formula::And(a, b) => Formula::and(a.desugar_with(fresh), b.desugar_with(fresh)),
            Formula::Or(a, b) => Formula::or(a.desugar_with(fresh), b.desugar_with(fresh)),
            Formula::All(y, a) => Formula::all(y.clone(), a.desugar_with(fresh)),
            Formula::Ex(y, a) => Formula::ex(y.clone(), a.desugar_with(fresh)),
            Formula::AllLe(y, t, a) => {
                let guard = Formula::Nle(Term::Var(y.clone()), t.clone()).desugar_with(fresh);
                Formula::all(y.clone(), Formula::or(guard, a.desugar_with(fresh)))
            }
            Formula::ExLe(y, t, a) => {
                let guard = Formula::Le(Term::Var(y.clone()), t.clone()).desugar_with(fresh);
                Formula::ex(y.clone(), Formula::and(guard, a.desugar_with(fresh)))
            }
        }
    }

    /// Recognises the expansion patterns produced by [`Formula::desugar`] and
    /// folds them back into `≤`, `≰` and bounded quantifiers, bottom-up.
    pub fn resugar(&self) -> Formula {
        match self {
            Formula::Eq(..) | Formula::Neq(..) | Formula::Le(..) | Formula::Nle(..) => self.clone(),
            Formula::And(a, b) => Formula::and(a.resugar(), b.resugar()),
            Formula::Or(a, b) => Formula::or(a.resugar(), b.resugar()),
            Formula::AllLe(y, t, a) => Formula::AllLe(y.clone(), t.clone(), Box::new(a.resugar())),
            Formula::ExLe(y, t, a) => Formula::ExLe(y.clone(), t.clone(), Box::new(a.resugar())),
            Formula::All(y, a) => {
                let body = a.resugar();
                if let Formula::Neq(lhs, u) = &body {
                    if let Some(t) = witness_sum(y, lhs, u) {
                        return Formula::Nle(t, u.clone());
                    }
                }
                if let Formula::Or(guard, rest) = &body {
                    if let Formula::Nle(Term::Var(v), t) = &**guard {
                        if v == y && !t.contains_var(y) {
                            return Formula::AllLe(y.clone(), t.clone(), rest.clone());
                        }
                    }
                }
                Formula::all(y.clone(), body)
            }
            Formula::Ex(y, a) => {
                let body = a.resugar();
                if let Formula::Eq(lhs, u) = &body {
                    if let Some(t) = witness_sum(y, lhs, u) {
                        return Formula::Le(t, u.clone());
                    }
                }
                if let Formula::And(guard, rest) = &body {
                    if let Formula::Le(Term::Var(v), t) = &**guard {
                        if v == y && !t.contains_var(y) {
                            return Formula::ExLe(y.clone(), t.clone(), rest.clone());
                        }
                    }
                }
                Formula::ex(y.clone(), body)
            }
        }
    }

    /// Nesting depth of connectives and quantifiers; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Neq(..) | Formula::Le(..) | Formula::Nle(..) => 0,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            Formula::All(_, a) | Formula::Ex(_, a) | Formula::AllLe(_, _, a) | Formula::ExLe(_, _, a) => {
                1 + a.depth()
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(t, u) | Formula::Neq(t, u) | Formula::Le(t, u) | Formula::Nle(t, u) => {
                1 + t.size() + u.size()
            }
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::All(_, a) | Formula::Ex(_, a) => 1 + a.size(),
            Formula::AllLe(_, t, a) | Formula::ExLe(_, t, a) => 1 + t.size() + a.size(),
        }
    }
}

/// Matches `z + t` against a witness variable `z` not occurring in `t` or `u`.
fn witness_sum(z: &Var, lhs: &Term, u: &Term) -> Option<Term> {
    match lhs {
        Term::Add(a, t) if **a == Term::Var(z.clone()) && !t.contains_var(z) && !u.contains_var(z) => {
            Some((**t).clone())
        }
        _ => None,
    }
}

/// Deterministic fresh-variable supply over a reserved name prefix.
///
/// Names are `prefix0`, `prefix1`, ... skipping anything in the avoid set; every
/// name handed out is added to the avoid set.
#[derive(Clone, Debug)]
pub struct Fresh {
    prefix: String,
    next: usize,
    avoid: VarSet,
}

impl Fresh {
    pub fn new(prefix: &str, avoid: VarSet) -> Fresh {
        Fresh {
            prefix: prefix.to_string(),
            next: 0,
            avoid,
        }
    }

    pub fn avoid(&mut self, vars: impl IntoIterator<Item = Var>) {
        self.avoid.extend(vars);
    }

    pub fn next_var(&mut self) -> Var {
        loop {
            let v = Var::new(&format!("{}{}", self.prefix, self.next));
            self.next += 1;
            if self.avoid.insert(v.clone()) {
                return v;
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", term_to_sexp(self))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", formula_to_sexp(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Term {
        Term::var(name)
    }

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    #[test]
    fn negate_dualises_quantifiers() {
        assert_eq!(f("(all y (eq x y))").negate(), f("(ex y (neq x y))"));
        let phi = f("(and (eq 0 0) (neq 0 0))");
        assert_eq!(phi.negate().negate(), phi);
        let bounded = f("(all<= y x (eq y 0))");
        assert_eq!(bounded.negate(), f("(ex<= y x (neq y 0))"));
    }

    #[test]
    fn substitute_replaces_free_occurrences_only() {
        let phi = f("(ex z (eq (add z x) y))");
        assert_eq!(
            phi.substitute(&Var::new("x"), &Term::Zero).unwrap(),
            f("(ex z (eq (add z 0) y))")
        );
        let err = phi
            .substitute(&Var::new("x"), &Term::succ(v("z")))
            .unwrap_err();
        assert_eq!(err.binder, Var::new("z"));
        let bound = f("(all x (eq x x))");
        assert_eq!(bound.substitute(&Var::new("x"), &Term::Zero).unwrap(), bound);
    }

    #[test]
    fn substitute_into_bound_of_bounded_quantifier() {
        let phi = f("(all<= y x (eq y y))");
        assert_eq!(
            phi.substitute(&Var::new("x"), &Term::succ(v("x"))).unwrap(),
            f("(all<= y (s x) (eq y y))")
        );
        assert!(phi.substitute(&Var::new("x"), &v("y")).is_err());
    }

    #[test]
    fn free_vars_examples() {
        let names = |s: VarSet| s.iter().map(|v| v.name().to_string()).collect::<Vec<_>>();
        assert_eq!(names(f("(ex z (eq (add z x) y))").free_vars()), ["x", "y"]);
        assert!(Term::Zero.free_vars().is_empty());
        assert_eq!(names(f("(all<= y x (eq y 0))").free_vars()), ["x"]);
    }

    #[test]
    fn desugar_examples() {
        assert_eq!(f("(le x y)").desugar(), f("(ex _w0 (eq (add _w0 x) y))"));
        assert_eq!(
            f("(ex<= y t (eq y 0))").desugar(),
            f("(ex y (and (ex _w0 (eq (add _w0 y) t)) (eq y 0)))")
        );
        assert_eq!(f("(eq 0 0)").desugar(), f("(eq 0 0)"));
        assert!(f("(all<= y (s x) (le y x))").desugar().is_core());
    }

    #[test]
    fn desugar_avoids_user_variables_in_reserved_namespace() {
        let phi = f("(and (le _w0 x) (eq _w1 0))");
        let d = phi.desugar();
        assert_eq!(d, f("(and (ex _w2 (eq (add _w2 _w0) x)) (eq _w1 0))"));
    }

    #[test]
    fn resugar_inverts_desugar() {
        for text in [
            "(le x y)",
            "(nle (s x) y)",
            "(all<= y (add x x) (or (le y x) (eq y 0)))",
            "(ex<= y x (all z (neq (mul y z) x)))",
        ] {
            let phi = f(text);
            assert_eq!(phi.desugar().resugar(), phi, "{text}");
        }
    }

    #[test]
    fn numerals() {
        assert_eq!(numeral(0), Term::Zero);
        assert_eq!(numeral(3), Term::succ(Term::succ(Term::succ(Term::Zero))));
        assert_eq!(numeral(17).as_numeral(), Some(17));
        assert_eq!(v("x").as_numeral(), None);
    }

    #[test]
    fn fresh_skips_avoided_names() {
        let mut fresh = Fresh::new("_e", [Var::new("_e0"), Var::new("_e2")].into());
        assert_eq!(fresh.next_var().name(), "_e1");
        assert_eq!(fresh.next_var().name(), "_e3");
    }
}
