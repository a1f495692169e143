//! Proof-tree s-expressions.
//!
//! ```text
//! (node :id L (seq f ...) (rule <name> <args...>) <child>*)
//! (node :id L (aseq (seq f ...) (vars x ...)) (axiom))
//! ```
//! Leaves end in `(axiom)`, `(assume f)`, `(open)` or `(back L)`.

use crate::annotation::Annotation;
use crate::sexpr::{parse_one, ParseError, Sexp};
use crate::syntax::{formula_from_sexp, formula_to_sexp, term_from_sexp, term_to_sexp, var_from_sexp};

use super::{ProofTree, Rule, Sequent, Step};

pub fn sequent_to_sexp(s: &Sequent) -> Sexp {
    Sexp::tagged("seq", s.iter().map(formula_to_sexp))
}

pub fn sequent_from_sexp(e: &Sexp) -> Result<Sequent, ParseError> {
    let items = e.expect_tagged("seq")?;
    Ok(Sequent::new(
        items
            .iter()
            .map(formula_from_sexp)
            .collect::<Result<_, _>>()?,
    ))
}

/// Reads either `(seq ...)` or `(aseq (seq ...) (vars ...))`.
pub(crate) fn maybe_annotated_from_sexp(e: &Sexp) -> Result<(Sequent, Option<Annotation>), ParseError> {
    match e.as_tagged() {
        Some(("seq", _)) => Ok((sequent_from_sexp(e)?, None)),
        Some(("aseq", args)) => {
            if args.len() != 2 {
                return Err(e.err("(aseq ...) takes a sequent and a variable list"));
            }
            Ok((
                sequent_from_sexp(&args[0])?,
                Some(Annotation::from_sexp(&args[1])?),
            ))
        }
        _ => Err(e.err(format!("expected (seq ...) or (aseq ...), found {e}"))),
    }
}

pub(crate) fn maybe_annotated_to_sexp(s: &Sequent, a: Option<&Annotation>) -> Sexp {
    match a {
        None => sequent_to_sexp(s),
        Some(a) => Sexp::tagged("aseq", [sequent_to_sexp(s), a.to_sexp()]),
    }
}

pub fn rule_to_sexp(r: &Rule) -> Sexp {
    let t = term_to_sexp;
    let f = formula_to_sexp;
    let v = |x: &crate::Var| Sexp::atom(x.name());
    let args: Vec<Sexp> = match r {
        Rule::And { principal } | Rule::Or { principal } => vec![f(principal)],
        Rule::All { principal, eigen } => vec![f(principal), v(eigen)],
        Rule::Ex { principal, witness } => vec![f(principal), t(witness)],
        Rule::Ref { t: a } | Rule::Add0 { t: a } | Rule::Mult0 { t: a } => vec![t(a)],
        Rule::Rep { t0, t1, u0, u1, y } => vec![t(t0), t(t1), t(u0), t(u1), v(y)],
        Rule::AddS { t: a, u } | Rule::MultS { t: a, u } => vec![t(a), t(u)],
        Rule::Pred { t0, t1 } => vec![t(t0), t(t1)],
        Rule::Case { var } => vec![v(var)],
        Rule::Weak { delta } => delta.iter().map(f).collect(),
        Rule::Cut { formula } => vec![f(formula)],
    };
    let mut items = vec![Sexp::atom(r.name())];
    items.extend(args);
    Sexp::tagged("rule", items)
}

pub fn rule_from_sexp(e: &Sexp) -> Result<Rule, ParseError> {
    let items = e.expect_tagged("rule")?;
    let (name, args) = items
        .split_first()
        .ok_or_else(|| e.err("(rule) needs a rule name"))?;
    let name = name.expect_atom()?;
    let want = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(e.err(format!(
                "rule '{name}' takes {n} argument(s), found {}",
                args.len()
            )))
        }
    };
    let f = formula_from_sexp;
    let t = term_from_sexp;
    Ok(match name {
        "and" | "or" | "cut" => {
            want(1)?;
            let p = f(&args[0])?;
            match name {
                "and" => Rule::And { principal: p },
                "or" => Rule::Or { principal: p },
                _ => Rule::Cut { formula: p },
            }
        }
        "all" => {
            want(2)?;
            Rule::All {
                principal: f(&args[0])?,
                eigen: var_from_sexp(&args[1])?,
            }
        }
        "ex" => {
            want(2)?;
            Rule::Ex {
                principal: f(&args[0])?,
                witness: t(&args[1])?,
            }
        }
        "ref" | "add0" | "mult0" => {
            want(1)?;
            let a = t(&args[0])?;
            match name {
                "ref" => Rule::Ref { t: a },
                "add0" => Rule::Add0 { t: a },
                _ => Rule::Mult0 { t: a },
            }
        }
        "adds" | "mults" | "pred" => {
            want(2)?;
            let a = t(&args[0])?;
            let b = t(&args[1])?;
            match name {
                "adds" => Rule::AddS { t: a, u: b },
                "mults" => Rule::MultS { t: a, u: b },
                _ => Rule::Pred { t0: a, t1: b },
            }
        }
        "rep" => {
            want(5)?;
            Rule::Rep {
                t0: t(&args[0])?,
                t1: t(&args[1])?,
                u0: t(&args[2])?,
                u1: t(&args[3])?,
                y: var_from_sexp(&args[4])?,
            }
        }
        "case" => {
            want(1)?;
            Rule::Case {
                var: var_from_sexp(&args[0])?,
            }
        }
        "weak" => {
            if args.is_empty() {
                return Err(e.err("rule 'weak' needs at least one formula"));
            }
            Rule::Weak {
                delta: Sequent::new(args.iter().map(f).collect::<Result<_, _>>()?),
            }
        }
        _ => return Err(e.err(format!("unknown rule '{name}'"))),
    })
}

pub fn proof_to_sexp(p: &ProofTree) -> Sexp {
    let mut items = vec![
        Sexp::atom("node"),
        Sexp::atom(":id"),
        Sexp::atom(p.id.as_str()),
        maybe_annotated_to_sexp(&p.sequent, p.annotation.as_ref()),
    ];
    match &p.step {
        Step::Rule { rule, premises } => {
            items.push(rule_to_sexp(rule));
            items.extend(premises.iter().map(proof_to_sexp));
        }
        Step::Axiom => items.push(Sexp::tagged("axiom", [])),
        Step::Assume(phi) => items.push(Sexp::tagged("assume", [formula_to_sexp(phi)])),
        Step::Open => items.push(Sexp::tagged("open", [])),
        Step::Back(target) => items.push(Sexp::tagged("back", [Sexp::atom(target.as_str())])),
    }
    Sexp::list(items)
}

pub(crate) fn node_id(e: &Sexp, args: &[Sexp]) -> Result<String, ParseError> {
    match args {
        [key, id, ..] if key.as_atom() == Some(":id") => Ok(id.expect_atom()?.to_string()),
        _ => Err(e.err("expected ':id <label>' after 'node'")),
    }
}

pub fn proof_from_sexp(e: &Sexp) -> Result<ProofTree, ParseError> {
    let args = e.expect_tagged("node")?;
    let id = node_id(e, args)?;
    let rest = &args[2..];
    let (seq_e, rest) = rest
        .split_first()
        .ok_or_else(|| e.err("node is missing its sequent"))?;
    let (sequent, annotation) = maybe_annotated_from_sexp(seq_e)?;
    let (how, children) = rest
        .split_first()
        .ok_or_else(|| e.err("node is missing its rule or leaf marker"))?;
    let leaf_only = |step: Step| {
        if children.is_empty() {
            Ok(step)
        } else {
            Err(children[0].err("leaf node has children"))
        }
    };
    let step = match how.as_tagged() {
        Some(("rule", _)) => {
            let rule = rule_from_sexp(how)?;
            let premises = children
                .iter()
                .map(proof_from_sexp)
                .collect::<Result<Vec<_>, _>>()?;
            if premises.len() != rule.arity() {
                return Err(e.err(format!(
                    "rule '{}' needs {} premise(s), found {}",
                    rule.name(),
                    rule.arity(),
                    premises.len()
                )));
            }
            Step::Rule { rule, premises }
        }
        Some(("axiom", [])) => leaf_only(Step::Axiom)?,
        Some(("open", [])) => leaf_only(Step::Open)?,
        Some(("assume", [phi])) => leaf_only(Step::Assume(formula_from_sexp(phi)?))?,
        Some(("back", [target])) => leaf_only(Step::Back(target.expect_atom()?.to_string()))?,
        _ => return Err(how.err(format!("expected (rule ...) or a leaf marker, found {how}"))),
    };
    Ok(ProofTree {
        id,
        sequent,
        annotation,
        step,
    })
}

pub fn parse_proof(text: &str) -> Result<ProofTree, ParseError> {
    proof_from_sexp(&parse_one(text)?)
}

/// Multi-line rendering; `parse_proof` reads it back unchanged.
pub fn render_proof(p: &ProofTree) -> String {
    let mut s = proof_to_sexp(p).pretty(100);
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn rules_round_trip() {
        let mut rng = gen::rng(5);
        for name in gen::RULE_NAMES {
            for _ in 0..20 {
                let (_, rule) = gen::random_rule_instance(&mut rng, name).unwrap();
                let e = rule_to_sexp(&rule);
                assert_eq!(rule_from_sexp(&parse_one(&e.to_string()).unwrap()).unwrap(), rule);
            }
        }
    }

    #[test]
    fn proof_round_trip_with_annotations() {
        let text = "(node :id r (aseq (seq (eq x x)) (vars x)) (rule ref x)
                      (node :id a (seq (eq x x) (neq x x)) (axiom)))";
        let p = parse_proof(text).unwrap();
        assert_eq!(p.children().len(), 1);
        assert!(p.annotation.is_some());
        assert_eq!(parse_proof(&render_proof(&p)).unwrap(), p);
    }

    #[test]
    fn structural_errors_are_reported() {
        assert!(parse_proof("(node :id r (seq) (rule cut (eq 0 0)) (node :id a (seq) (open)))").is_err());
        assert!(parse_proof("(node r (seq) (axiom))").is_err());
        assert!(parse_proof("(node :id r (seq) (axiom) (node :id a (seq) (axiom)))").is_err());
        assert!(parse_proof("(node :id r (seq) (rule frob))").is_err());
    }
}
