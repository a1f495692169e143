use crate::sexpr::{parse_one, ParseError, Sexp};

use super::{numeral, Formula, Term, Var};

const KEYWORDS: &[&str] = &[
    "s", "add", "mul", "eq", "neq", "and", "or", "all", "ex", "all<=", "ex<=", "le", "nle", "imp",
    "iff", "not", "top", "bot",
];

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub fn var_from_sexp(e: &Sexp) -> Result<Var, ParseError> {
    let name = e.expect_atom()?;
    if !is_identifier(name) || KEYWORDS.contains(&name) {
        return Err(e.err(format!("not a variable name: {name}")));
    }
    Ok(Var::new(name))
}

fn arity(e: &Sexp, head: &str, args: &[Sexp], n: usize) -> Result<(), ParseError> {
    if args.len() != n {
        return Err(e.err(format!(
            "'{head}' takes {n} argument(s), found {}",
            args.len()
        )));
    }
    Ok(())
}

pub fn term_from_sexp(e: &Sexp) -> Result<Term, ParseError> {
    if let Some(a) = e.as_atom() {
        if a.bytes().all(|b| b.is_ascii_digit()) {
            // Decimal literals are read as numerals.
            let k: u64 = a
                .parse()
                .map_err(|_| e.err(format!("numeral too large: {a}")))?;
            return Ok(numeral(k));
        }
        return Ok(Term::Var(var_from_sexp(e)?));
    }
    let (head, args) = e
        .as_tagged()
        .ok_or_else(|| e.err(format!("expected a term, found {e}")))?;
    match head {
        "s" => {
            arity(e, head, args, 1)?;
            Ok(Term::succ(term_from_sexp(&args[0])?))
        }
        "add" | "mul" => {
            arity(e, head, args, 2)?;
            let a = term_from_sexp(&args[0])?;
            let b = term_from_sexp(&args[1])?;
            Ok(if head == "add" {
                Term::add(a, b)
            } else {
                Term::mul(a, b)
            })
        }
        _ => Err(e.err(format!("unknown term constructor '{head}'"))),
    }
}

pub fn formula_from_sexp(e: &Sexp) -> Result<Formula, ParseError> {
    match e.as_atom() {
        Some("top") => return Ok(Formula::top()),
        Some("bot") => return Ok(Formula::bot()),
        Some(a) => return Err(e.err(format!("expected a formula, found atom '{a}'"))),
        None => {}
    }
    let (head, args) = e
        .as_tagged()
        .ok_or_else(|| e.err(format!("expected a formula, found {e}")))?;
    let binary_terms = |args: &[Sexp]| -> Result<(Term, Term), ParseError> {
        arity(e, head, args, 2)?;
        Ok((term_from_sexp(&args[0])?, term_from_sexp(&args[1])?))
    };
    match head {
        "eq" => binary_terms(args).map(|(t, u)| Formula::Eq(t, u)),
        "neq" => binary_terms(args).map(|(t, u)| Formula::Neq(t, u)),
        "le" => binary_terms(args).map(|(t, u)| Formula::Le(t, u)),
        "nle" => binary_terms(args).map(|(t, u)| Formula::Nle(t, u)),
        "and" | "or" => {
            if args.len() < 2 {
                return Err(e.err(format!("'{head}' takes at least 2 arguments")));
            }
            let parts = args
                .iter()
                .map(formula_from_sexp)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(if head == "and" {
                Formula::conjunction(parts)
            } else {
                Formula::disjunction(parts)
            })
        }
        "imp" | "iff" => {
            arity(e, head, args, 2)?;
            let a = formula_from_sexp(&args[0])?;
            let b = formula_from_sexp(&args[1])?;
            Ok(if head == "imp" {
                Formula::imp(a, b)
            } else {
                Formula::iff(a, b)
            })
        }
        "not" => {
            arity(e, head, args, 1)?;
            Ok(formula_from_sexp(&args[0])?.negate())
        }
        "all" | "ex" => {
            arity(e, head, args, 2)?;
            let y = var_from_sexp(&args[0])?;
            let body = formula_from_sexp(&args[1])?;
            Ok(if head == "all" {
                Formula::all(y, body)
            } else {
                Formula::ex(y, body)
            })
        }
        "all<=" | "ex<=" => {
            arity(e, head, args, 3)?;
            let y = var_from_sexp(&args[0])?;
            let t = term_from_sexp(&args[1])?;
            if t.contains_var(&y) {
                return Err(args[1].err(format!("bound variable {y} occurs in its bound")));
            }
            let body = Box::new(formula_from_sexp(&args[2])?);
            Ok(if head == "all<=" {
                Formula::AllLe(y, t, body)
            } else {
                Formula::ExLe(y, t, body)
            })
        }
        _ => Err(e.err(format!("unknown formula constructor '{head}'"))),
    }
}

pub fn term_to_sexp(t: &Term) -> Sexp {
    match t {
        Term::Zero => Sexp::atom("0"),
        Term::Var(v) => Sexp::atom(v.name()),
        Term::Succ(a) => Sexp::tagged("s", [term_to_sexp(a)]),
        Term::Add(a, b) => Sexp::tagged("add", [term_to_sexp(a), term_to_sexp(b)]),
        Term::Mul(a, b) => Sexp::tagged("mul", [term_to_sexp(a), term_to_sexp(b)]),
    }
}

pub fn formula_to_sexp(phi: &Formula) -> Sexp {
    let terms = |tag: &str, t: &Term, u: &Term| Sexp::tagged(tag, [term_to_sexp(t), term_to_sexp(u)]);
    match phi {
        Formula::Eq(t, u) => terms("eq", t, u),
        Formula::Neq(t, u) => terms("neq", t, u),
        Formula::Le(t, u) => terms("le", t, u),
        Formula::Nle(t, u) => terms("nle", t, u),
        Formula::And(a, b) => Sexp::tagged("and", [formula_to_sexp(a), formula_to_sexp(b)]),
        Formula::Or(a, b) => Sexp::tagged("or", [formula_to_sexp(a), formula_to_sexp(b)]),
        Formula::All(y, a) => Sexp::tagged("all", [Sexp::atom(y.name()), formula_to_sexp(a)]),
        Formula::Ex(y, a) => Sexp::tagged("ex", [Sexp::atom(y.name()), formula_to_sexp(a)]),
        Formula::AllLe(y, t, a) => Sexp::tagged(
            "all<=",
            [Sexp::atom(y.name()), term_to_sexp(t), formula_to_sexp(a)],
        ),
        Formula::ExLe(y, t, a) => Sexp::tagged(
            "ex<=",
            [Sexp::atom(y.name()), term_to_sexp(t), formula_to_sexp(a)],
        ),
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    term_from_sexp(&parse_one(text)?)
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    formula_from_sexp(&parse_one(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_examples() {
        assert_eq!(parse_term("(s 0)").unwrap(), Term::succ(Term::Zero));
        let x = Term::var("x");
        let y = Term::var("y");
        assert_eq!(
            parse_formula("(all y (eq (add x y) (add y x)))").unwrap(),
            Formula::all(
                Var::new("y"),
                Formula::Eq(Term::add(x.clone(), y.clone()), Term::add(y, x))
            )
        );
        let err = parse_formula("(ex y").unwrap_err();
        assert!(err.message.contains("end of input"));
    }

    #[test]
    fn sugar_expands_at_parse_time() {
        assert_eq!(
            parse_formula("(imp (eq x 0) (eq y 0))").unwrap(),
            parse_formula("(or (neq x 0) (eq y 0))").unwrap()
        );
        assert_eq!(
            parse_formula("(not (all x (eq x 0)))").unwrap(),
            parse_formula("(ex x (neq x 0))").unwrap()
        );
        assert_eq!(parse_formula("top").unwrap(), Formula::top());
        assert_eq!(parse_formula("bot").unwrap(), Formula::bot());
        assert_eq!(parse_term("3").unwrap(), numeral(3));
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "(eq 0)",
            "(all (s x) (eq x x))",
            "(all<= y (s y) (eq y y))",
            "(foo 0 0)",
            "x",
            "(eq (s 0 0) 0)",
            "(all eq (eq 0 0))",
        ] {
            assert!(parse_formula(bad).is_err(), "{bad}");
        }
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(seed in any::<u64>()) {
            let phi = crate::gen::random_formula(seed, 5);
            let text = phi.to_string();
            prop_assert_eq!(parse_formula(&text).unwrap(), phi);
        }
    }
}
