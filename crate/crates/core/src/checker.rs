//! Validation of annotated cyclic proofs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::annotation::{propagate, Mode};
use crate::calculus::{check_step, is_axiom, ProofTree, Rule, Sequent, Step};
use crate::semantics::{assignments, sequent_truth, Assignment, Truth};
use crate::sexpr::Sexp;
use crate::syntax::Var;

/// A finite annotated proof tree whose `Back` leaves define the back-link
/// function `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicProof {
    pub tree: ProofTree,
}

impl CyclicProof {
    pub fn new(tree: ProofTree) -> CyclicProof {
        CyclicProof { tree }
    }

    /// `d` as a map from leaf id to target id.
    pub fn back_links(&self) -> BTreeMap<String, String> {
        self.tree
            .nodes()
            .into_iter()
            .filter_map(|n| match &n.step {
                Step::Back(t) => Some((n.id.clone(), t.clone())),
                _ => None,
            })
            .collect()
    }

    pub fn root(&self) -> &ProofTree {
        &self.tree
    }
}

impl From<ProofTree> for CyclicProof {
    fn from(tree: ProofTree) -> Self {
        CyclicProof::new(tree)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    DuplicateId,
    Step,
    Annotation,
    Axiom,
    Assumption,
    OpenLeaf,
    DanglingLink,
    NotAncestor,
    SequentMismatch,
    AnnotationMismatch,
    EmptyAnnotation,
    NonConstantAnnotation,
    NoProgress,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::DuplicateId => "DuplicateId",
            Condition::Step => "Step",
            Condition::Annotation => "Annotation",
            Condition::Axiom => "Axiom",
            Condition::Assumption => "Assumption",
            Condition::OpenLeaf => "OpenLeaf",
            Condition::DanglingLink => "DanglingLink",
            Condition::NotAncestor => "NotAncestor",
            Condition::SequentMismatch => "SequentMismatch",
            Condition::AnnotationMismatch => "AnnotationMismatch",
            Condition::EmptyAnnotation => "EmptyAnnotation",
            Condition::NonConstantAnnotation => "NonConstantAnnotation",
            Condition::NoProgress => "NoProgress",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub node: String,
    pub condition: Condition,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Statistics {
    pub nodes: usize,
    pub back_links: usize,
    /// Edges on each back-link's path from target to leaf, in leaf-id order.
    pub cycle_lengths: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub statistics: Statistics,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }

    pub fn to_sexp(&self) -> Sexp {
        let verdict = if self.is_valid() { "valid" } else { "invalid" };
        let mut items = vec![Sexp::tagged("verdict", [Sexp::atom(verdict)])];
        for v in &self.violations {
            items.push(Sexp::tagged(
                "violation",
                [
                    Sexp::tagged("node", [Sexp::atom(v.node.as_str())]),
                    Sexp::tagged("tag", [Sexp::atom(v.condition.name())]),
                    Sexp::tagged("message", [Sexp::string(v.message.as_str())]),
                ],
            ));
        }
        let s = &self.statistics;
        items.push(Sexp::tagged(
            "stats",
            [
                Sexp::tagged("nodes", [Sexp::atom(s.nodes.to_string())]),
                Sexp::tagged("back-links", [Sexp::atom(s.back_links.to_string())]),
                Sexp::tagged(
                    "cycle-lengths",
                    s.cycle_lengths.iter().map(|k| Sexp::atom(k.to_string())),
                ),
            ],
        ));
        Sexp::tagged("report", items)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", if self.is_valid() { "valid" } else { "invalid" })?;
        let s = &self.statistics;
        writeln!(
            f,
            "nodes: {}, back-links: {}, cycle lengths: {:?}",
            s.nodes, s.back_links, s.cycle_lengths
        )?;
        for v in &self.violations {
            writeln!(f, "violation at {} [{}]: {}", v.node, v.condition, v.message)?;
        }
        Ok(())
    }
}

/// True when the edge from `parent` to its `index`-th child enters the right
/// premise of a (case) application.
fn is_case_right(parent: &ProofTree, index: usize) -> bool {
    matches!(parent.rule(), Some(Rule::Case { .. })) && index == 1
}

fn is_case_left(parent: &ProofTree, index: usize) -> bool {
    matches!(parent.rule(), Some(Rule::Case { .. })) && index == 0
}

/// Root-to-node paths as (node, index of the child taken next) pairs.
fn paths(tree: &ProofTree) -> BTreeMap<*const ProofTree, Vec<(&ProofTree, usize)>> {
    let mut out = BTreeMap::new();
    let mut stack: Vec<(&ProofTree, Vec<(&ProofTree, usize)>)> = vec![(tree, Vec::new())];
    while let Some((n, path)) = stack.pop() {
        for (i, c) in n.children().iter().enumerate() {
            let mut p = path.clone();
            p.push((n, i));
            stack.push((c, p));
        }
        out.insert(n as *const _, path);
    }
    out
}

/// Checks every condition on an annotated cyclic proof. Problems are reported
/// independently; the proof is valid iff none are found.
pub fn validate(pi: &CyclicProof, mode: &Mode) -> ValidationReport {
    let tree = &pi.tree;
    let mut violations = Vec::new();
    let mut push = |node: &str, condition: Condition, message: String| {
        violations.push(Violation {
            node: node.to_string(),
            condition,
            message,
        })
    };
    let mut stats = Statistics::default();
    for id in tree.duplicate_ids() {
        push(&id, Condition::DuplicateId, "node id occurs more than once".into());
    }
    let ancestry = paths(tree);
    let nodes = tree.nodes();
    stats.nodes = nodes.len();
    for n in &nodes {
        if n.annotation.is_none() {
            push(&n.id, Condition::Annotation, "node is not annotated".into());
        }
        match &n.step {
            Step::Rule { rule, premises } => {
                let kids: Vec<Sequent> = premises.iter().map(|p| p.sequent.clone()).collect();
                if let Err(e) = check_step(&n.sequent, rule, &kids) {
                    push(&n.id, Condition::Step, e.to_string());
                    continue;
                }
                let Some(v) = &n.annotation else { continue };
                match propagate(&n.sequent, v, rule, mode) {
                    Ok(expected) => {
                        for (p, e) in premises.iter().zip(expected) {
                            if let Some(a) = &p.annotation {
                                if *a != e {
                                    push(
                                        &p.id,
                                        Condition::Annotation,
                                        format!(
                                            "annotation {a} differs from {e} required by ({}) at {}",
                                            rule.name(),
                                            n.id
                                        ),
                                    );
                                }
                            }
                        }
                    }
                    Err(e) => push(&n.id, Condition::Annotation, e.to_string()),
                }
            }
            Step::Axiom => {
                if is_axiom(&n.sequent).is_none() {
                    push(&n.id, Condition::Axiom, format!("{} is not an initial sequent", n.sequent));
                }
            }
            Step::Assume(_) => {
                if let Some(Err(e)) = crate::calculus::check_closed_leaf(n, &mode.assumptions) {
                    push(&n.id, Condition::Assumption, e.to_string());
                }
            }
            Step::Open => push(&n.id, Condition::OpenLeaf, "open leaf in a cyclic proof".into()),
            Step::Back(target) => {
                stats.back_links += 1;
                let path = &ancestry[&(*n as *const ProofTree)];
                let Some(start) = path.iter().position(|(a, _)| a.id == *target) else {
                    if nodes.iter().any(|m| m.id == *target) {
                        push(
                            &n.id,
                            Condition::NotAncestor,
                            format!("back-link target {target} is not a proper ancestor"),
                        );
                    } else {
                        push(&n.id, Condition::DanglingLink, format!("no node with id {target}"));
                    }
                    continue;
                };
                // The last ancestor with that id, in case ids repeat.
                let start = path
                    .iter()
                    .rposition(|(a, _)| a.id == *target)
                    .unwrap_or(start);
                let segment = &path[start..];
                let b = segment[0].0;
                stats.cycle_lengths.push(segment.len());
                if b.sequent != n.sequent {
                    push(
                        &n.id,
                        Condition::SequentMismatch,
                        format!("leaf sequent {} differs from target sequent {}", n.sequent, b.sequent),
                    );
                }
                if b.annotation != n.annotation {
                    push(
                        &n.id,
                        Condition::AnnotationMismatch,
                        format!(
                            "leaf annotation {} differs from target annotation {}",
                            show(&n.annotation),
                            show(&b.annotation)
                        ),
                    );
                }
                let on_path: Vec<&ProofTree> = segment.iter().map(|(a, _)| *a).chain([*n]).collect();
                if let Some(e) = on_path
                    .iter()
                    .find(|a| a.annotation.as_ref().is_some_and(|v| v.is_empty()))
                {
                    push(
                        &n.id,
                        Condition::EmptyAnnotation,
                        format!("node {} on the cycle to {target} is annotated with the empty set", e.id),
                    );
                }
                let distinct: BTreeSet<_> = on_path.iter().map(|a| &a.annotation).collect();
                if distinct.len() > 1 {
                    push(
                        &n.id,
                        Condition::NonConstantAnnotation,
                        format!("annotations on the cycle to {target} are not constant"),
                    );
                }
                if !segment.iter().any(|(a, i)| is_case_right(a, *i)) {
                    push(
                        &n.id,
                        Condition::NoProgress,
                        format!("the cycle to {target} passes no right premise of (case)"),
                    );
                }
            }
        }
    }
    ValidationReport {
        violations,
        statistics: stats,
    }
}

fn show(a: &Option<crate::annotation::Annotation>) -> String {
    a.as_ref().map_or_else(|| "(none)".to_string(), |a| a.to_string())
}

/// Outcome of following back-links through a finite unfolding.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProgressReport {
    /// Root-to-frontier paths of the unfolding that were examined.
    pub paths: usize,
    /// Back-link traversals along those paths.
    pub jumps: usize,
    /// Variables whose (case) right premise is crossed on each traversed cycle,
    /// keyed by back-link leaf.
    pub progress: BTreeMap<String, BTreeSet<Var>>,
    pub failures: Vec<String>,
    /// True if the path budget ran out before the depth bound was reached.
    pub truncated: bool,
}

impl ProgressReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

const PATH_BUDGET: usize = 200_000;

/// Walks every path of the unfolding of `pi` down to nodes at `depth`, following
/// back-links as jumps. Each cycle traversed must avoid left premises of
/// (case) and cross at least one right premise.
pub fn check_progress_on_unfolding(pi: &CyclicProof, depth: usize) -> ProgressReport {
    let tree = &pi.tree;
    let ancestry = paths(tree);
    let by_id: BTreeMap<&str, &ProofTree> = tree.nodes().into_iter().map(|n| (n.id.as_str(), n)).collect();
    let mut report = ProgressReport::default();
    // Per back-link: the cycle's static verdict, computed once.
    let mut verdicts: BTreeMap<String, Result<BTreeSet<Var>, String>> = BTreeMap::new();
    let mut stack: Vec<(&ProofTree, usize)> = vec![(tree, 0)];
    while let Some((n, d)) = stack.pop() {
        if report.paths >= PATH_BUDGET {
            report.truncated = true;
            break;
        }
        if d > depth {
            report.paths += 1;
            continue;
        }
        match &n.step {
            Step::Rule { premises, .. } => {
                for c in premises.iter().rev() {
                    stack.push((c, d + 1));
                }
            }
            Step::Back(target) => {
                let Some(b) = by_id.get(target.as_str()) else {
                    report.failures.push(format!("{}: dangling back-link to {target}", n.id));
                    continue;
                };
                report.jumps += 1;
                let verdict = verdicts.entry(n.id.clone()).or_insert_with(|| {
                    let path = &ancestry[&(n as *const ProofTree)];
                    let Some(start) = path.iter().rposition(|(a, _)| a.id == *target) else {
                        return Err(format!("{}: target {target} is not an ancestor", n.id));
                    };
                    let segment = &path[start..];
                    if let Some((a, _)) = segment.iter().find(|(a, i)| is_case_left(a, *i)) {
                        return Err(format!(
                            "{}: cycle to {target} passes the left premise of (case) at {}",
                            n.id, a.id
                        ));
                    }
                    let vars: BTreeSet<Var> = segment
                        .iter()
                        .filter(|(a, i)| is_case_right(a, *i))
                        .filter_map(|(a, _)| match a.rule() {
                            Some(Rule::Case { var }) => Some(var.clone()),
                            _ => None,
                        })
                        .collect();
                    if vars.is_empty() {
                        Err(format!(
                            "{}: cycle to {target} crosses no right premise of (case) (at unfolding depth {d})",
                            n.id
                        ))
                    } else {
                        Ok(vars)
                    }
                });
                match verdict {
                    Ok(vars) => {
                        report.progress.insert(n.id.clone(), vars.clone());
                        // The copy of the target's subtree replaces the leaf.
                        for c in b.children().iter().rev() {
                            stack.push((c, d + 1));
                        }
                        if b.children().is_empty() {
                            report.paths += 1;
                        }
                    }
                    Err(msg) => {
                        if !report.failures.contains(msg) {
                            report.failures.push(msg.clone());
                        }
                        report.paths += 1;
                    }
                }
            }
            _ => report.paths += 1,
        }
    }
    report
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SoundnessReport {
    /// Sequent evaluations performed.
    pub evaluations: usize,
    /// Sequents that evaluated `False`, with the falsifying assignment.
    pub false_hits: Vec<(String, Assignment)>,
}

impl SoundnessReport {
    pub fn ok(&self) -> bool {
        self.false_hits.is_empty()
    }
}

/// Evaluates every sequent of the proof under all assignments of its free
/// variables into `0..=value_bound`. A valid proof has no `False` sequent.
pub fn soundness_sample(pi: &CyclicProof, value_bound: u64, cutoff: u64) -> SoundnessReport {
    soundness_sample_tree(&pi.tree, value_bound, cutoff)
}

pub fn soundness_sample_tree(tree: &ProofTree, value_bound: u64, cutoff: u64) -> SoundnessReport {
    let mut report = SoundnessReport::default();
    let mut seen: BTreeSet<&Sequent> = BTreeSet::new();
    for n in tree.nodes() {
        if !seen.insert(&n.sequent) {
            continue;
        }
        let vars: Vec<Var> = n.sequent.free_vars().into_iter().collect();
        for v in assignments(&vars, value_bound) {
            report.evaluations += 1;
            if sequent_truth(&n.sequent, &v, cutoff) == Truth::False {
                report.false_hits.push((n.id.clone(), v));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::{annotate_tree, Annotation};
    use crate::calculus::parse_proof;

    /// A cycle through (case) on x, closed by an axiom on the left.
    fn loop_proof(mode: &Mode) -> CyclicProof {
        let text = "
          (node :id r (seq (le 0 x)) (rule case x)
            (node :id l (seq (le 0 0)) (rule ex (le 0 0) 0)
              (node :id l1 (seq (le 0 0) (eq (add 0 0) 0)) (rule add0 0)
                (node :id l2 (seq (le 0 0) (eq (add 0 0) 0) (neq (add 0 0) 0)) (axiom))))
            (node :id s (seq (le 0 (s x))) (rule weak (le 0 (s x)))
              (node :id b (seq) (rule ref 0)
                (node :id bb (seq (neq 0 0)) (open)))))";
        let tree = parse_proof(text).unwrap();
        CyclicProof::new(annotate_tree(&tree, &Annotation::empty(), mode).unwrap())
    }

    #[test]
    fn open_leaves_are_reported() {
        let mode = Mode::sn(0);
        let r = validate(&loop_proof(&mode), &mode);
        assert!(r.has(Condition::OpenLeaf));
        assert_eq!(r.statistics.nodes, 7);
    }

    #[test]
    fn cycle_without_case_has_no_progress() {
        let text = "
          (node :id r (aseq (seq (eq x x) (neq 0 0)) (vars x)) (rule ref 0)
            (node :id a (aseq (seq (eq x x) (neq 0 0) (neq 0 0)) (vars x)) (rule weak (neq 0 0))
              (node :id b (aseq (seq (eq x x) (neq 0 0)) (vars x)) (back r))))";
        let pi = CyclicProof::new(parse_proof(text).unwrap());
        let r = validate(&pi, &Mode::sn(0));
        assert!(r.has(Condition::NoProgress), "{r}");
        assert_eq!(r.violations.len(), 1);
        let p = check_progress_on_unfolding(&pi, 2);
        assert!(!p.ok());
        assert!(check_progress_on_unfolding(&pi, 1).ok());
    }

    #[test]
    fn back_link_errors() {
        let text = "
          (node :id r (aseq (seq (eq x x)) (vars x)) (rule cut (eq 0 0))
            (node :id a (aseq (seq (eq x x) (eq 0 0)) (vars x)) (back zz))
            (node :id b (aseq (seq (eq x x) (neq 0 0)) (vars x)) (back a)))";
        let pi = CyclicProof::new(parse_proof(text).unwrap());
        let r = validate(&pi, &Mode::sn(0));
        assert!(r.has(Condition::DanglingLink));
        assert!(r.has(Condition::NotAncestor));
        let s = r.to_sexp().to_string();
        assert!(s.starts_with("(report (verdict invalid)"), "{s}");
    }
}
