//! Evaluation in the standard model.
//!
//! Terms evaluate exactly. Formulas evaluate in Kleene's three-valued logic:
//! atoms and bounded quantifiers are exact, while an unbounded quantifier is
//! decided only when a witness or counterexample turns up below the cutoff.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::calculus::Sequent;
use crate::syntax::{Formula, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }

    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Unknown,
        }
    }

    pub fn or(self, other: Truth) -> Truth {
        self.not().and(other.not()).not()
    }

    pub fn name(self) -> &'static str {
        match self {
            Truth::True => "True",
            Truth::False => "False",
            Truth::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite map from variables to naturals; unmapped variables denote 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, BigUint>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn get(&self, v: &Var) -> BigUint {
        self.0.get(v).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, v: Var, value: impl Into<BigUint>) {
        self.0.insert(v, value.into());
    }

    pub fn with(mut self, v: Var, value: impl Into<BigUint>) -> Assignment {
        self.set(v, value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &BigUint)> {
        self.0.iter()
    }

    /// Temporarily binds `v`, restoring the previous value afterwards.
    fn scoped<R>(&mut self, v: &Var, value: BigUint, f: impl FnOnce(&mut Assignment) -> R) -> R {
        let old = self.0.insert(v.clone(), value);
        let r = f(self);
        match old {
            Some(o) => self.0.insert(v.clone(), o),
            None => self.0.remove(v),
        };
        r
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad assignment literal '{0}': expected name=value pairs separated by commas")]
pub struct AssignmentParseError(pub String);

impl FromStr for Assignment {
    type Err = AssignmentParseError;

    /// Reads `x=3,y=0`; the empty string is the empty assignment.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut a = Assignment::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| AssignmentParseError(s.to_string()))?;
            let name = name.trim();
            let valid = name.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
            if !valid {
                return Err(AssignmentParseError(s.to_string()));
            }
            let value: BigUint = value
                .trim()
                .parse()
                .map_err(|_| AssignmentParseError(s.to_string()))?;
            a.set(Var::new(name), value);
        }
        Ok(a)
    }
}

pub fn eval_term(t: &Term, v: &Assignment) -> BigUint {
    match t {
        Term::Zero => BigUint::zero(),
        Term::Var(x) => v.get(x),
        Term::Succ(a) => eval_term(a, v) + BigUint::one(),
        Term::Add(a, b) => eval_term(a, v) + eval_term(b, v),
        Term::Mul(a, b) => eval_term(a, v) * eval_term(b, v),
    }
}

/// How unbounded quantifiers are treated.
#[derive(Clone, Copy)]
enum Reading {
    /// Three-valued: undecided searches give `Unknown`.
    Kleene,
    /// Two-valued over the finite domain `0..=cutoff`.
    Truncated,
}

fn quantify(
    phi: &Formula,
    y: &Var,
    range: impl Iterator<Item = BigUint>,
    universal: bool,
    exhaustive: bool,
    v: &mut Assignment,
    cutoff: u64,
    reading: Reading,
) -> Truth {
    // ∀ is the dual of ∃: search for the decisive value.
    let decisive = if universal { Truth::False } else { Truth::True };
    let mut all_opposite = true;
    for k in range {
        let r = v.scoped(y, k, |v| eval(phi, v, cutoff, reading));
        if r == decisive {
            return decisive;
        }
        if r == Truth::Unknown {
            all_opposite = false;
        }
    }
    if exhaustive && all_opposite {
        decisive.not()
    } else {
        Truth::Unknown
    }
}

fn eval(phi: &Formula, v: &mut Assignment, cutoff: u64, reading: Reading) -> Truth {
    let upto = |n: BigUint| num_iter::range_inclusive(n);
    match phi {
        Formula::Eq(t, u) => Truth::from_bool(eval_term(t, v) == eval_term(u, v)),
        Formula::Neq(t, u) => Truth::from_bool(eval_term(t, v) != eval_term(u, v)),
        Formula::Le(t, u) => Truth::from_bool(eval_term(t, v) <= eval_term(u, v)),
        Formula::Nle(t, u) => Truth::from_bool(eval_term(t, v) > eval_term(u, v)),
        Formula::And(a, b) => {
            let l = eval(a, v, cutoff, reading);
            if l == Truth::False {
                return l;
            }
            l.and(eval(b, v, cutoff, reading))
        }
        Formula::Or(a, b) => {
            let l = eval(a, v, cutoff, reading);
            if l == Truth::True {
                return l;
            }
            l.or(eval(b, v, cutoff, reading))
        }
        Formula::AllLe(y, t, a) | Formula::ExLe(y, t, a) => {
            let bound = eval_term(t, v);
            let universal = matches!(phi, Formula::AllLe(..));
            quantify(a, y, upto(bound), universal, true, v, cutoff, reading)
        }
        Formula::All(y, a) | Formula::Ex(y, a) => {
            let universal = matches!(phi, Formula::All(..));
            let exhaustive = matches!(reading, Reading::Truncated);
            quantify(a, y, upto(BigUint::from(cutoff)), universal, exhaustive, v, cutoff, reading)
        }
    }
}

mod num_iter {
    use num_bigint::BigUint;
    use num_traits::One;

    /// `0..=n` over arbitrary-precision naturals.
    pub fn range_inclusive(n: BigUint) -> impl Iterator<Item = BigUint> {
        let mut next = Some(BigUint::default());
        std::iter::from_fn(move || {
            let k = next.take()?;
            if k < n {
                next = Some(&k + BigUint::one());
            }
            Some(k)
        })
    }
}

/// Three-valued truth with unbounded quantifiers searched up to `cutoff`.
/// Never `True` for a false formula nor `False` for a true one.
pub fn eval_formula(phi: &Formula, v: &Assignment, cutoff: u64) -> Truth {
    eval(phi, &mut v.clone(), cutoff, Reading::Kleene)
}

/// Two-valued truth in the structure where unbounded quantifiers range over
/// `0..=cutoff` only. A small-scope approximation: it can disagree with the
/// standard model in either direction.
pub fn eval_truncated(phi: &Formula, v: &Assignment, cutoff: u64) -> bool {
    eval(phi, &mut v.clone(), cutoff, Reading::Truncated) == Truth::True
}

/// `⋁Γ` in three-valued logic; the empty sequent is `False`.
pub fn sequent_truth(gamma: &Sequent, v: &Assignment, cutoff: u64) -> Truth {
    let mut acc = Truth::False;
    for f in gamma {
        acc = acc.or(eval_formula(f, v, cutoff));
        if acc == Truth::True {
            break;
        }
    }
    acc
}

/// Every assignment of values in `0..=bound` to `vars`, in lexicographic order.
pub fn assignments(vars: &[Var], bound: u64) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for x in vars {
        out = out
            .into_iter()
            .flat_map(|a| (0..=bound).map(move |k| a.clone().with(x.clone(), k)))
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::syntax::{classify, numeral, parse_formula, Kind};
    use proptest::prelude::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn term_examples() {
        let empty = Assignment::new();
        assert_eq!(eval_term(&Term::mul(numeral(2), numeral(2)), &empty), BigUint::from(4u32));
        let v: Assignment = "x=3".parse().unwrap();
        assert_eq!(eval_term(&Term::add(Term::var("x"), numeral(1)), &v), BigUint::from(4u32));
        assert_eq!(eval_term(&Term::var("y"), &empty), BigUint::zero());
        for k in 0..=64 {
            assert_eq!(eval_term(&numeral(k), &empty), BigUint::from(k));
        }
    }

    #[test]
    fn formula_examples() {
        let empty = Assignment::new();
        assert_eq!(eval_formula(&f("(ex y (eq (add y y) (s (s 0))))"), &empty, 8), Truth::True);
        assert_eq!(eval_formula(&f("(all x (neq (s x) 0))"), &empty, 8), Truth::Unknown);
        assert_eq!(eval_formula(&f("(ex<= y 1 (eq y 5))"), &empty, 0), Truth::False);
        assert_eq!(eval_formula(&f("(all x (eq x 0))"), &empty, 8), Truth::False);
    }

    #[test]
    fn sequent_examples() {
        let empty = Assignment::new();
        let s = |items: &[&str]| items.iter().map(|x| f(x)).collect::<Sequent>();
        assert_eq!(sequent_truth(&s(&["(eq 0 0)"]), &empty, 8), Truth::True);
        assert_eq!(sequent_truth(&Sequent::empty(), &empty, 8), Truth::False);
        assert_eq!(sequent_truth(&s(&["(neq x x)", "(eq 0 0)"]), &empty, 8), Truth::True);
    }

    #[test]
    fn assignment_literals() {
        let a: Assignment = "x=3, y=0".parse().unwrap();
        assert_eq!(a.to_string(), "x=3,y=0");
        assert!("x3".parse::<Assignment>().is_err());
        assert!("x=-1".parse::<Assignment>().is_err());
        assert_eq!(assignments(&[Var::new("a"), Var::new("b")], 2).len(), 9);
    }

    #[test]
    fn truncated_reading_decides_everything() {
        let phi = f("(all x (eq (mul x 0) 0))");
        assert!(eval_truncated(&phi, &Assignment::new(), 4));
        assert!(!eval_truncated(&f("(ex x (eq x 9))"), &Assignment::new(), 4));
    }

    fn has_universal_sugar(phi: &Formula) -> bool {
        match phi {
            Formula::Nle(..) | Formula::AllLe(..) => true,
            Formula::Eq(..) | Formula::Neq(..) | Formula::Le(..) => false,
            Formula::And(a, b) | Formula::Or(a, b) => has_universal_sugar(a) || has_universal_sugar(b),
            Formula::All(_, a) | Formula::Ex(_, a) | Formula::ExLe(_, _, a) => has_universal_sugar(a),
        }
    }

    fn sample(seed: u64) -> Vec<Assignment> {
        let mut r = gen::rng(seed);
        use rand::Rng;
        (0..4)
            .map(|_| {
                Assignment::new()
                    .with(Var::new("x"), r.gen_range(0u32..=4))
                    .with(Var::new("u"), r.gen_range(0u32..=4))
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn negation_coherence(seed in any::<u64>()) {
            let phi = gen::random_formula(seed, 3);
            for v in sample(seed) {
                prop_assert_eq!(eval_formula(&phi.negate(), &v, 4), eval_formula(&phi, &v, 4).not());
                prop_assert_eq!(
                    eval_formula(&phi.negate().desugar(), &v, 4),
                    eval_formula(&phi.desugar(), &v, 4).not()
                );
            }
        }

        #[test]
        fn cutoff_monotonicity(seed in any::<u64>()) {
            let phi = gen::random_formula(seed, 3);
            for v in sample(seed) {
                let low = eval_formula(&phi, &v, 2);
                if low != Truth::Unknown {
                    prop_assert_eq!(eval_formula(&phi, &v, 5), low);
                }
            }
        }

        #[test]
        fn delta0_is_decided(seed in any::<u64>()) {
            let mut r = gen::rng(seed);
            let phi = gen::random_delta0(&mut r, 3, &mut Vec::new());
            prop_assert_eq!(classify(&phi).kind, Kind::Delta0);
            for v in sample(seed) {
                prop_assert_ne!(eval_formula(&phi, &v, 0), Truth::Unknown);
            }
        }

        #[test]
        fn desugared_truth_is_reached_with_a_larger_cutoff(seed in any::<u64>()) {
            // Universal sugar expands to an unbounded ∀, which three-valued
            // evaluation can never confirm; the property is about ∃-sugar.
            let phi = gen::random_formula(seed, 2);
            prop_assume!(!has_universal_sugar(&phi) && !has_universal_sugar(&phi.negate()));
            let mut r = gen::rng(seed);
            use rand::Rng;
            let v = Assignment::new()
                .with(Var::new("x"), r.gen_range(0u32..=2))
                .with(Var::new("u"), r.gen_range(0u32..=2));
            if eval_formula(&phi, &v, 3) == Truth::True {
                // Term values stay below 40 for these samples.
                prop_assert_eq!(eval_formula(&phi.desugar(), &v, 3 + 40), Truth::True);
            }
        }
    }
}
