//! Annotated sequents `Γ↾V` and the annotation discipline of the three
//! systems. Given the annotation of a conclusion, the annotations of the
//! premises are uniquely determined.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::calculus::{premises_of, ArgMismatch, ProofTree, Rule, Sequent, Step};
use crate::sexpr::{ParseError, Sexp};
use crate::syntax::{is_in, var_from_sexp, Formula, Kind, Var, VarSet};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Annotation(VarSet);

impl Annotation {
    pub fn empty() -> Annotation {
        Annotation(VarSet::new())
    }

    pub fn new(vars: impl IntoIterator<Item = Var>) -> Annotation {
        Annotation(vars.into_iter().collect())
    }

    pub fn vars(&self) -> &VarSet {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.0.contains(v)
    }

    pub fn with(&self, v: Var) -> Annotation {
        let mut s = self.0.clone();
        s.insert(v);
        Annotation(s)
    }

    pub fn is_subset(&self, other: &Annotation) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn to_sexp(&self) -> Sexp {
        Sexp::tagged("vars", self.0.iter().map(|v| Sexp::atom(v.name())))
    }

    pub fn from_sexp(e: &Sexp) -> Result<Annotation, ParseError> {
        let items = e.expect_tagged("vars")?;
        Ok(Annotation(
            items.iter().map(var_from_sexp).collect::<Result<_, _>>()?,
        ))
    }
}

impl fmt::Display for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum System {
    /// `Sₙ`: tails restricted to Πₙ₊₁.
    Sn,
    /// `S^Π_n`: cycles through sequents made entirely of Πₙ₊₁-formulas.
    SPi,
    /// `S^Σ_n`: cycles through sequents made entirely of Σₙ-formulas.
    SSigma,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Sn => "sn",
            System::SPi => "spi",
            System::SSigma => "ssigma",
        }
    }

    pub fn from_name(s: &str) -> Option<System> {
        match s {
            "sn" => Some(System::Sn),
            "spi" => Some(System::SPi),
            "ssigma" => Some(System::SSigma),
            _ => None,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mode {
    pub system: System,
    pub level: usize,
    /// Sentences usable as assumption leaves.
    pub assumptions: BTreeSet<Formula>,
}

impl Mode {
    pub fn new(system: System, level: usize) -> Mode {
        Mode {
            system,
            level,
            assumptions: BTreeSet::new(),
        }
    }

    pub fn sn(level: usize) -> Mode {
        Mode::new(System::Sn, level)
    }

    pub fn spi(level: usize) -> Mode {
        Mode::new(System::SPi, level)
    }

    pub fn ssigma(level: usize) -> Mode {
        Mode::new(System::SSigma, level)
    }

    pub fn with_assumptions(mut self, t: impl IntoIterator<Item = Formula>) -> Mode {
        self.assumptions.extend(t);
        self
    }

    /// The restriction class: Πₙ₊₁ for `Sn` and `SPi`, Σₙ for `SSigma`.
    pub fn restriction(&self) -> (Kind, usize) {
        match self.system {
            System::Sn | System::SPi => (Kind::Pi, self.level + 1),
            System::SSigma => (Kind::Sigma, self.level),
        }
    }

    pub fn in_class(&self, phi: &Formula) -> bool {
        let (kind, n) = self.restriction();
        is_in(phi, kind, n)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.system, self.level)
    }
}

/// Premise annotations of `rule` applied to `conclusion ↾ v`.
pub fn propagate(
    conclusion: &Sequent,
    v: &Annotation,
    rule: &Rule,
    mode: &Mode,
) -> Result<Vec<Annotation>, ArgMismatch> {
    let premises = premises_of(conclusion, rule)?;
    let keep_if = |ok: bool| if ok { v.clone() } else { Annotation::empty() };
    Ok(match rule {
        Rule::And { principal } => match principal {
            Formula::And(a, b) => vec![keep_if(mode.in_class(a)), keep_if(mode.in_class(b))],
            _ => unreachable!("premises_of checked the shape"),
        },
        Rule::Cut { formula } => vec![
            keep_if(mode.in_class(formula)),
            keep_if(mode.in_class(&formula.negate())),
        ],
        Rule::All { principal, eigen } => {
            if mode.system == System::SSigma {
                vec![Annotation::empty()]
            } else {
                // The instance is the one formula the premise gained.
                let gamma = conclusion.without(principal).expect("principal present");
                let instance = premises[0]
                    .minus(&gamma)
                    .and_then(|d| d.iter().next().cloned())
                    .expect("premise extends the side formulas");
                vec![keep_if(!v.contains(eigen) && mode.in_class(&instance))]
            }
        }
        Rule::Case { var } => {
            let ok = match mode.system {
                System::Sn => conclusion
                    .iter()
                    .filter(|f| f.has_free(var))
                    .all(|f| mode.in_class(f)),
                System::SPi | System::SSigma => conclusion.iter().all(|f| mode.in_class(f)),
            };
            vec![
                Annotation::empty(),
                if ok {
                    v.with(var.clone())
                } else {
                    Annotation::empty()
                },
            ]
        }
        _ => vec![v.clone(); premises.len()],
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot annotate node {node}: {source}")]
pub struct AnnotateError {
    pub node: String,
    #[source]
    pub source: ArgMismatch,
}

/// Annotates the whole tree top-down from `root_v`, replacing any existing
/// annotations. Back-link leaves are annotated by their position.
pub fn annotate_tree(pi: &ProofTree, root_v: &Annotation, mode: &Mode) -> Result<ProofTree, AnnotateError> {
    let mut out = pi.clone();
    annotate_in_place(&mut out, root_v.clone(), mode)?;
    Ok(out)
}

fn annotate_in_place(node: &mut ProofTree, v: Annotation, mode: &Mode) -> Result<(), AnnotateError> {
    if let Step::Rule { rule, premises } = &mut node.step {
        let anns = propagate(&node.sequent, &v, rule, mode).map_err(|source| AnnotateError {
            node: node.id.clone(),
            source,
        })?;
        for (child, a) in premises.iter_mut().zip(anns) {
            annotate_in_place(child, a, mode)?;
        }
    }
    node.annotation = Some(v);
    Ok(())
}

/// Removes all annotations; sequents, rules and ids are unchanged.
pub fn erase(pi: &ProofTree) -> ProofTree {
    pi.erase()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn seq(items: &[&str]) -> Sequent {
        items.iter().map(|s| parse_formula(s).unwrap()).collect()
    }

    fn ann(names: &[&str]) -> Annotation {
        Annotation::new(names.iter().map(|n| Var::new(n)))
    }

    #[test]
    fn case_extends_when_variable_only_in_class() {
        // y is free only in a Π₁ formula; the Σ₁ formula does not mention y.
        let gamma = seq(&["(all z (eq (add y z) z))", "(ex w (eq w x))"]);
        let r = Rule::Case { var: Var::new("y") };
        assert_eq!(
            propagate(&gamma, &ann(&["x"]), &r, &Mode::sn(0)).unwrap(),
            vec![ann(&[]), ann(&["x", "y"])]
        );
        // SPi needs the whole conclusion in Π₁.
        assert_eq!(
            propagate(&gamma, &ann(&["x"]), &r, &Mode::spi(0)).unwrap(),
            vec![ann(&[]), ann(&[])]
        );
    }

    #[test]
    fn all_drops_annotation_on_annotated_eigenvariable() {
        let gamma = seq(&["(all y (eq y y))"]);
        let r = Rule::All {
            principal: parse_formula("(all y (eq y y))").unwrap(),
            eigen: Var::new("z"),
        };
        assert_eq!(propagate(&gamma, &ann(&["z"]), &r, &Mode::sn(0)).unwrap(), vec![ann(&[])]);
        assert_eq!(propagate(&gamma, &ann(&["x"]), &r, &Mode::sn(0)).unwrap(), vec![ann(&["x"])]);
        assert_eq!(propagate(&gamma, &ann(&["x"]), &r, &Mode::ssigma(1)).unwrap(), vec![ann(&[])]);
    }

    #[test]
    fn and_and_cut_follow_the_class_of_each_side() {
        let gamma = seq(&["(and (all y (eq y x)) (ex y (all z (eq y z))))"]);
        let r = Rule::And {
            principal: gamma.formulas()[0].clone(),
        };
        assert_eq!(
            propagate(&gamma, &ann(&["x"]), &r, &Mode::sn(0)).unwrap(),
            vec![ann(&["x"]), ann(&[])]
        );
        let cut = Rule::Cut {
            formula: parse_formula("(all y (eq y x))").unwrap(),
        };
        assert_eq!(
            propagate(&gamma, &ann(&["x"]), &cut, &Mode::sn(0)).unwrap(),
            vec![ann(&["x"]), ann(&[])]
        );
    }

    #[test]
    fn annotate_then_erase_is_identity() {
        let gamma = seq(&["(eq x x)"]);
        let tree = ProofTree::node(
            "r",
            gamma.clone(),
            Rule::Case { var: Var::new("x") },
            vec![
                ProofTree::leaf("a", seq(&["(eq 0 0)"]), Step::Open),
                ProofTree::leaf("b", seq(&["(eq (s x) (s x))"]), Step::Open),
            ],
        );
        let a = annotate_tree(&tree, &Annotation::empty(), &Mode::sn(0)).unwrap();
        assert_eq!(a.children()[1].annotation, Some(ann(&["x"])));
        assert_eq!(a.children()[0].annotation, Some(ann(&[])));
        assert_eq!(erase(&a), tree);
        assert_eq!(annotate_tree(&a, &Annotation::empty(), &Mode::sn(0)).unwrap(), a);
    }
}
