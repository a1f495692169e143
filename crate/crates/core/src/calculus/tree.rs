use std::collections::BTreeSet;

use thiserror::Error;

use super::{check_step, is_axiom, Rule, Sequent, StepError};
use crate::annotation::Annotation;
use crate::syntax::Formula;

/// A finite proof tree. Leaves close a branch in one of four ways; in a
/// cyclic proof the `Back` leaves carry the back-link function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTree {
    pub id: String,
    pub sequent: Sequent,
    pub annotation: Option<Annotation>,
    pub step: Step,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Rule { rule: Rule, premises: Vec<ProofTree> },
    Axiom,
    Assume(Formula),
    /// A truncation point of an unfolded proof.
    Open,
    /// A back-link to the node with the given id.
    Back(String),
}

impl ProofTree {
    pub fn leaf(id: impl Into<String>, sequent: Sequent, step: Step) -> ProofTree {
        ProofTree {
            id: id.into(),
            sequent,
            annotation: None,
            step,
        }
    }

    pub fn node(id: impl Into<String>, sequent: Sequent, rule: Rule, premises: Vec<ProofTree>) -> ProofTree {
        ProofTree {
            id: id.into(),
            sequent,
            annotation: None,
            step: Step::Rule { rule, premises },
        }
    }

    pub fn children(&self) -> &[ProofTree] {
        match &self.step {
            Step::Rule { premises, .. } => premises,
            _ => &[],
        }
    }

    pub fn children_mut(&mut self) -> &mut [ProofTree] {
        match &mut self.step {
            Step::Rule { premises, .. } => premises,
            _ => &mut [],
        }
    }

    pub fn rule(&self) -> Option<&Rule> {
        match &self.step {
            Step::Rule { rule, .. } => Some(rule),
            _ => None,
        }
    }

    /// Nodes in pre-order.
    pub fn nodes(&self) -> Vec<&ProofTree> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.children().iter().rev());
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.nodes().len()
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.children()
            .iter()
            .map(|c| 1 + c.height())
            .max()
            .unwrap_or(0)
    }

    pub fn get(&self, id: &str) -> Option<&ProofTree> {
        self.nodes().into_iter().find(|n| n.id == id)
    }

    /// Ids of the nodes from the root down to `id`, inclusive.
    pub fn path_to(&self, id: &str) -> Option<Vec<&ProofTree>> {
        if self.id == id {
            return Some(vec![self]);
        }
        for c in self.children() {
            if let Some(mut p) = c.path_to(id) {
                p.insert(0, self);
                return Some(p);
            }
        }
        None
    }

    pub fn has_back_links(&self) -> bool {
        self.nodes().iter().any(|n| matches!(n.step, Step::Back(_)))
    }

    pub fn is_annotated(&self) -> bool {
        self.nodes().iter().any(|n| n.annotation.is_some())
    }

    pub fn is_fully_annotated(&self) -> bool {
        self.nodes().iter().all(|n| n.annotation.is_some())
    }

    /// Copy with every annotation removed.
    pub fn erase(&self) -> ProofTree {
        let mut t = self.clone();
        t.for_each_mut(&mut |n| n.annotation = None);
        t
    }

    pub fn for_each_mut(&mut self, f: &mut impl FnMut(&mut ProofTree)) {
        f(self);
        for c in self.children_mut() {
            c.for_each_mut(f);
        }
    }

    /// Ids occurring more than once, in first-repeat order.
    pub fn duplicate_ids(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut dups = Vec::new();
        for n in self.nodes() {
            if !seen.insert(n.id.as_str()) && !dups.contains(&n.id) {
                dups.push(n.id.clone());
            }
        }
        dups
    }

    /// Equality of shape, sequents, annotations and leaves, ignoring node ids
    /// (and back-link target names).
    pub fn same_shape(&self, other: &ProofTree) -> bool {
        if self.sequent != other.sequent || self.annotation != other.annotation {
            return false;
        }
        match (&self.step, &other.step) {
            (Step::Rule { rule: r1, premises: p1 }, Step::Rule { rule: r2, premises: p2 }) => {
                r1 == r2 && p1.len() == p2.len() && p1.iter().zip(p2).all(|(a, b)| a.same_shape(b))
            }
            (Step::Back(_), Step::Back(_)) => true,
            (a, b) => a == b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NodeFault {
    #[error(transparent)]
    Step(#[from] StepError),
    #[error("leaf marked (axiom) is not an initial sequent")]
    NotAxiom,
    #[error("assumption leaf must be exactly {{{0}}}")]
    AssumptionShape(Formula),
    #[error("{0} is not among the assumptions")]
    NotAssumed(Formula),
    #[error("assumption {0} is not a sentence")]
    NotSentence(Formula),
    #[error("open leaf in a finished proof")]
    Open,
    #[error("back-link to {0} in a tree proof")]
    BackLink(String),
    #[error("node id occurs more than once")]
    DuplicateId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node {node}: {fault}")]
pub struct TreeError {
    pub node: String,
    pub fault: NodeFault,
}

/// Checks a leaf that is an axiom or an assumption. Returns `None` for other
/// steps.
pub(crate) fn check_closed_leaf(
    n: &ProofTree,
    assumptions: &BTreeSet<Formula>,
) -> Option<Result<(), NodeFault>> {
    match &n.step {
        Step::Axiom => Some(if is_axiom(&n.sequent).is_some() {
            Ok(())
        } else {
            Err(NodeFault::NotAxiom)
        }),
        Step::Assume(phi) => Some(if n.sequent != Sequent::new(vec![phi.clone()]) {
            Err(NodeFault::AssumptionShape(phi.clone()))
        } else if !phi.is_sentence() {
            Err(NodeFault::NotSentence(phi.clone()))
        } else if !assumptions.contains(phi) {
            Err(NodeFault::NotAssumed(phi.clone()))
        } else {
            Ok(())
        }),
        _ => None,
    }
}

/// Checks a finite proof: every inference and leaf. Open and back-link leaves
/// are rejected. All faults are reported, in pre-order.
pub fn check_tree(pi: &ProofTree, assumptions: &BTreeSet<Formula>) -> Result<(), Vec<TreeError>> {
    let mut errors = Vec::new();
    for id in pi.duplicate_ids() {
        errors.push(TreeError {
            node: id,
            fault: NodeFault::DuplicateId,
        });
    }
    for n in pi.nodes() {
        let fault = match &n.step {
            Step::Rule { rule, premises } => {
                let kids: Vec<Sequent> = premises.iter().map(|p| p.sequent.clone()).collect();
                check_step(&n.sequent, rule, &kids).err().map(NodeFault::from)
            }
            Step::Open => Some(NodeFault::Open),
            Step::Back(target) => Some(NodeFault::BackLink(target.clone())),
            _ => check_closed_leaf(n, assumptions).and_then(Result::err),
        };
        if let Some(fault) = fault {
            errors.push(TreeError {
                node: n.id.clone(),
                fault,
            });
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn assume_tree() -> (ProofTree, Formula) {
        let phi = parse_formula("(all x (eq x x))").unwrap();
        let sigma = Sequent::new(vec![phi.clone()]);
        // {φ} proved from the assumption itself, through a trivial (ref) step.
        let tree = ProofTree::node(
            "r",
            sigma.clone(),
            Rule::Ref { t: crate::Term::Zero },
            vec![ProofTree::node(
                "w",
                sigma.with(parse_formula("(neq 0 0)").unwrap()),
                Rule::Weak {
                    delta: Sequent::new(vec![parse_formula("(neq 0 0)").unwrap()]),
                },
                vec![ProofTree::leaf("a", sigma, Step::Assume(phi.clone()))],
            )],
        );
        (tree, phi)
    }

    #[test]
    fn assumption_leaves_need_membership() {
        let (tree, phi) = assume_tree();
        assert_eq!(check_tree(&tree, &[phi].into()), Ok(()));
        let errs = check_tree(&tree, &BTreeSet::new()).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].node, "a");
        assert!(matches!(errs[0].fault, NodeFault::NotAssumed(_)));
    }

    #[test]
    fn open_and_back_leaves_are_rejected() {
        let s = Sequent::new(vec![parse_formula("(eq x 0)").unwrap()]);
        let open = ProofTree::leaf("o", s.clone(), Step::Open);
        assert!(matches!(
            check_tree(&open, &BTreeSet::new()).unwrap_err()[0].fault,
            NodeFault::Open
        ));
        let back = ProofTree::leaf("b", s, Step::Back("o".into()));
        assert!(check_tree(&back, &BTreeSet::new()).is_err());
    }

    #[test]
    fn path_and_lookup() {
        let (tree, _) = assume_tree();
        let path: Vec<&str> = tree.path_to("a").unwrap().iter().map(|n| n.id.as_str()).collect();
        assert_eq!(path, ["r", "w", "a"]);
        assert_eq!(tree.height(), 2);
        assert!(tree.duplicate_ids().is_empty());
    }
}
