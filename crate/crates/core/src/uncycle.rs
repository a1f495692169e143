//! Extraction of induction certificates from cyclic proofs: the node set `M`
//! of a root cycle, the invariant `θ`, the induction formula `ζ(z)`, ranks,
//! and the proof obligations whose provability in `IΣₙ₊₁` turns the cycle
//! into an ordinary induction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::annotation::{Mode, System};
use crate::calculus::{ProofTree, Rule, Sequent};
use crate::checker::{validate, CyclicProof};
use crate::semantics::{assignments, eval_formula, eval_truncated, Assignment, Truth};
use crate::sexpr::{parse_one, ParseError, Sexp};
use crate::syntax::{formula_from_sexp, formula_to_sexp, var_from_sexp, Formula, Fresh, Kind, Term, Var, VarSet};

/// Nodes with a directed path to the root, where directed paths follow tree
/// edges downwards and back-links. `None` when no leaf links to the root.
pub fn compute_m(pi: &CyclicProof) -> Option<BTreeSet<String>> {
    let links = pi.back_links();
    if !links.values().any(|t| *t == pi.tree.id) {
        return None;
    }
    // Reverse edges: child -> parent, target -> leaf.
    let mut rev: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for n in pi.tree.nodes() {
        for c in n.children() {
            rev.entry(c.id.as_str()).or_default().push(n.id.as_str());
        }
    }
    for (leaf, target) in &links {
        rev.entry(target.as_str()).or_default().push(leaf.as_str());
    }
    let mut m = BTreeSet::new();
    let mut queue = VecDeque::from([pi.tree.id.as_str()]);
    while let Some(id) = queue.pop_front() {
        if m.insert(id.to_string()) {
            queue.extend(rev.get(id).into_iter().flatten().copied());
        }
    }
    Some(m)
}

/// Splits `gamma` into `(Φ, Ψ)`: `Ψ` holds the formulas of the mode's
/// restriction class (Πₙ₊₁, or Σₙ for `SSigma`), `Φ` the rest.
pub fn split_sequent(gamma: &Sequent, mode: &Mode) -> (Vec<Formula>, Vec<Formula>) {
    gamma.iter().cloned().partition(|f| !mode.in_class(f))
}

/// `φ_a`, the negated disjunction of the non-class part.
fn phi_of(gamma: &Sequent, mode: &Mode) -> Formula {
    Formula::disjunction(split_sequent(gamma, mode).0).negate()
}

/// `ψ_a`, the disjunction of the class part.
fn psi_of(gamma: &Sequent, mode: &Mode) -> Formula {
    Formula::disjunction(split_sequent(gamma, mode).1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObligationKind {
    Base,
    Step,
    SideEquiv,
    ThetaGamma,
    RootDischarge,
}

impl ObligationKind {
    pub fn name(self) -> &'static str {
        match self {
            ObligationKind::Base => "base",
            ObligationKind::Step => "step",
            ObligationKind::SideEquiv => "side-equiv",
            ObligationKind::ThetaGamma => "theta-gamma",
            ObligationKind::RootDischarge => "root-discharge",
        }
    }

    pub fn from_name(s: &str) -> Option<ObligationKind> {
        [
            ObligationKind::Base,
            ObligationKind::Step,
            ObligationKind::SideEquiv,
            ObligationKind::ThetaGamma,
            ObligationKind::RootDischarge,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ObligationStatus {
    #[default]
    Unchecked,
    BoundedTrue,
    BoundedUnknown,
    /// Some assignment made the formula false.
    Falsified,
}

impl ObligationStatus {
    pub fn name(self) -> &'static str {
        match self {
            ObligationStatus::Unchecked => "unchecked",
            ObligationStatus::BoundedTrue => "bounded-true",
            ObligationStatus::BoundedUnknown => "bounded-unknown",
            ObligationStatus::Falsified => "falsified",
        }
    }

    pub fn from_name(s: &str) -> Option<ObligationStatus> {
        [
            ObligationStatus::Unchecked,
            ObligationStatus::BoundedTrue,
            ObligationStatus::BoundedUnknown,
            ObligationStatus::Falsified,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub kind: ObligationKind,
    /// The node or edge the obligation belongs to, if any.
    pub about: Vec<String>,
    pub formula: Formula,
    pub status: ObligationStatus,
}

/// Why `Φ` does not grow along an edge inside `M`. `Link` is a back-link,
/// the other tags follow the rule at the upper node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeTag {
    Link,
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl EdgeTag {
    pub fn name(self) -> &'static str {
        match self {
            EdgeTag::Link => "link",
            EdgeTag::A => "A",
            EdgeTag::B => "B",
            EdgeTag::C => "C",
            EdgeTag::D => "D",
            EdgeTag::E => "E",
            EdgeTag::F => "F",
            EdgeTag::G => "G",
            EdgeTag::H => "H",
        }
    }

    pub fn from_name(s: &str) -> Option<EdgeTag> {
        use EdgeTag::*;
        [Link, A, B, C, D, E, F, G, H].into_iter().find(|t| t.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeJustification {
    pub from: String,
    pub to: String,
    pub tag: EdgeTag,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductionCertificate {
    /// Root of the cyclic subproof the certificate was extracted from.
    pub root: String,
    pub level: usize,
    pub system: System,
    pub m: BTreeSet<String>,
    pub c: BTreeSet<String>,
    pub b: VarSet,
    pub case_vars: Vec<Var>,
    pub fresh_z: Var,
    pub theta: Formula,
    pub zeta: Formula,
    pub phi_root: Formula,
    /// The side formula is provably `⊤`: `Φ` is empty at every (case)
    /// conclusion of the cycle.
    pub phi_root_trivial: bool,
    pub ranks: BTreeMap<String, usize>,
    pub obligations: Vec<Obligation>,
    pub edges: Vec<EdgeJustification>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractionError {
    #[error("the proof is not valid in {mode}: {report}")]
    Invalid { mode: String, report: String },
    #[error("node {node}: {message}")]
    Node { node: String, message: String },
    #[error("the root cycle passes no (case) conclusion")]
    NoCase,
    #[error("the rank graph has a cycle through {0}")]
    RankCycle(String),
    #[error("{0}")]
    Invariant(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extraction {
    Certificate(Box<InductionCertificate>),
    NoRootCycle,
}

/// The formula `ζ(t)` for a certificate, i.e. `ζ` with `z` replaced by `t`.
pub fn zeta_at(cert: &InductionCertificate, t: &Term) -> Formula {
    cert.zeta
        .substitute(&cert.fresh_z, t)
        .expect("ζ binds only case variables, which never occur in t")
}

/// Builds `ζ(z) = ∀y₁≤z … ∀yₘ≤z (y₁ + ⋯ + yₘ = z → θ)`.
pub fn build_zeta(case_vars: &[Var], z: &Var, theta: &Formula) -> Formula {
    let sum = case_vars
        .iter()
        .map(|y| Term::Var(y.clone()))
        .reduce(Term::add)
        .unwrap_or(Term::Zero);
    let body = Formula::imp(Formula::eq(sum, Term::Var(z.clone())), theta.clone());
    case_vars
        .iter()
        .rev()
        .fold(body, |acc, y| Formula::all_le(y.clone(), Term::Var(z.clone()), acc))
}

/// Extracts the certificate of the root cycle of `pi`, after validating it.
pub fn extract_certificate(pi: &CyclicProof, mode: &Mode) -> Result<Extraction, ExtractionError> {
    let report = validate(pi, mode);
    if !report.is_valid() {
        return Err(ExtractionError::Invalid {
            mode: mode.to_string(),
            report: report.to_string(),
        });
    }
    extract_unchecked(pi, mode)
}

/// Walks the proof the way the main induction does: a subproof whose root is
/// targeted by a back-link yields a certificate, and the search continues in
/// the subproofs hanging off its cycle; otherwise it continues in the
/// premises. Certificates come out in pre-order of their roots.
pub fn extract_all(pi: &CyclicProof, mode: &Mode) -> Result<Vec<InductionCertificate>, ExtractionError> {
    let report = validate(pi, mode);
    if !report.is_valid() {
        return Err(ExtractionError::Invalid {
            mode: mode.to_string(),
            report: report.to_string(),
        });
    }
    let mut out = Vec::new();
    descend(&pi.tree, mode, &mut out)?;
    Ok(out)
}

fn descend(node: &ProofTree, mode: &Mode, out: &mut Vec<InductionCertificate>) -> Result<(), ExtractionError> {
    let sub = CyclicProof::new(node.clone());
    match extract_unchecked(&sub, mode)? {
        Extraction::NoRootCycle => {
            for c in node.children() {
                descend(c, mode, out)?;
            }
        }
        Extraction::Certificate(cert) => {
            let m = cert.m.clone();
            out.push(*cert);
            for n in node.nodes() {
                if m.contains(&n.id) {
                    for c in n.children().iter().filter(|c| !m.contains(&c.id)) {
                        descend(c, mode, out)?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn node_err(node: &str, message: impl Into<String>) -> ExtractionError {
    ExtractionError::Node {
        node: node.to_string(),
        message: message.into(),
    }
}

/// Extraction without the validity check; callers guarantee validity.
fn extract_unchecked(pi: &CyclicProof, mode: &Mode) -> Result<Extraction, ExtractionError> {
    let Some(m) = compute_m(pi) else {
        return Ok(Extraction::NoRootCycle);
    };
    let nodes = pi.tree.nodes();
    let links = pi.back_links();
    let root = &pi.tree;
    let root_v = root
        .annotation
        .clone()
        .ok_or_else(|| node_err(&root.id, "root is not annotated"))?;
    if root_v.is_empty() {
        return Err(node_err(&root.id, "root cycle with empty annotation"));
    }

    // Directed edges inside M, in pre-order.
    let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut edges = Vec::new();
    for n in &nodes {
        if !m.contains(&n.id) {
            continue;
        }
        if n.annotation.as_ref() != Some(&root_v) {
            return Err(node_err(&n.id, "annotation differs from the root's on the cycle"));
        }
        if let Some(t) = links.get(&n.id) {
            succ.entry(n.id.as_str()).or_default().push(t.as_str());
            edges.push(EdgeJustification {
                from: n.id.clone(),
                to: t.clone(),
                tag: EdgeTag::Link,
            });
        }
        for (i, c) in n.children().iter().enumerate() {
            if m.contains(&c.id) {
                succ.entry(n.id.as_str()).or_default().push(c.id.as_str());
                let rule = n.rule().expect("nodes with children carry a rule");
                edges.push(EdgeJustification {
                    from: n.id.clone(),
                    to: c.id.clone(),
                    tag: edge_tag(n, i, rule, mode)?,
                });
            }
        }
    }

    let mut b = VarSet::new();
    let mut case_vars: Vec<Var> = Vec::new();
    let mut c_set = BTreeSet::new();
    let mut c_order = Vec::new();
    for n in &nodes {
        if !m.contains(&n.id) {
            continue;
        }
        match n.rule() {
            Some(Rule::All { eigen, .. }) => {
                b.insert(eigen.clone());
            }
            Some(Rule::Case { var }) => {
                if !case_vars.contains(var) {
                    case_vars.push(var.clone());
                }
                c_set.insert(n.id.clone());
                c_order.push(*n);
            }
            _ => {}
        }
    }
    if c_order.is_empty() {
        return Err(ExtractionError::NoCase);
    }

    let mut notes = Vec::new();
    let mut phi_root_trivial = false;
    if mode.system != System::Sn {
        for c in &c_order {
            let (phi, _) = split_sequent(&c.sequent, mode);
            if !phi.is_empty() {
                return Err(node_err(
                    &c.id,
                    "a (case) conclusion on the cycle has formulas outside the restriction class",
                ));
            }
        }
        phi_root_trivial = true;
        notes.push(format!(
            "{}: the side formula is equivalent to the empty one at every (case) conclusion, so it is provable",
            mode.system
        ));
        if mode.system == System::SSigma && mode.level > 0 {
            notes.push(
                "ζ is a Σₙ formula under bounded universals; reading it as Σₙ uses Σₙ-collection, which is not performed here"
                    .to_string(),
            );
        }
    }

    let theta_body = Formula::conjunction(c_order.iter().map(|c| psi_of(&c.sequent, mode)));
    let theta = b
        .iter()
        .rev()
        .fold(theta_body, |acc, v| Formula::all(v.clone(), acc));

    let mut avoid = VarSet::new();
    for n in &nodes {
        avoid.extend(n.sequent.all_vars());
    }
    avoid.extend(b.iter().cloned());
    avoid.extend(case_vars.iter().cloned());
    avoid.extend(theta.all_vars());
    let z = Fresh::new("z", avoid).next_var();
    let zeta = build_zeta(&case_vars, &z, &theta);

    let phi_r = if phi_root_trivial {
        Formula::top()
    } else {
        phi_of(&root.sequent, mode)
    };

    let ranks = compute_ranks(&m, &c_set, &succ)?;

    let cert = InductionCertificate {
        root: root.id.clone(),
        level: mode.level,
        system: mode.system,
        m,
        c: c_set,
        b,
        case_vars,
        fresh_z: z,
        theta,
        zeta,
        phi_root: phi_r,
        phi_root_trivial,
        ranks,
        obligations: Vec::new(),
        edges,
        notes,
    };
    let mut cert = cert;
    cert.obligations = build_obligations(&cert, root, mode);
    check_invariants(&cert, pi, mode)?;
    Ok(Extraction::Certificate(Box::new(cert)))
}

fn build_obligations(cert: &InductionCertificate, root: &ProofTree, mode: &Mode) -> Vec<Obligation> {
    let nodes = root.nodes();
    let by_id: BTreeMap<&str, &ProofTree> = nodes.iter().map(|n| (n.id.as_str(), *n)).collect();
    let (z, theta, zeta, phi_r) = (&cert.fresh_z, &cert.theta, &cert.zeta, &cert.phi_root);
    let mut obligations = Vec::new();
    let mut push = |kind, about: Vec<String>, formula| {
        obligations.push(Obligation {
            kind,
            about,
            formula,
            status: ObligationStatus::Unchecked,
        })
    };
    push(
        ObligationKind::Base,
        vec![],
        Formula::imp(phi_r.clone(), zeta.substitute(z, &Term::Zero).expect("fresh z")),
    );
    push(
        ObligationKind::Step,
        vec![],
        Formula::imp(
            phi_r.clone(),
            Formula::all(
                z.clone(),
                Formula::imp(
                    zeta.clone(),
                    zeta.substitute(z, &Term::succ(Term::Var(z.clone()))).expect("fresh z"),
                ),
            ),
        ),
    );
    let phi_at = |id: &str| phi_of(&by_id[id].sequent, mode);
    for e in &cert.edges {
        if e.tag != EdgeTag::Link {
            push(
                ObligationKind::SideEquiv,
                vec![e.from.clone(), e.to.clone()],
                Formula::iff(phi_at(&e.from), phi_at(&e.to)),
            );
        }
    }
    if cert.phi_root_trivial {
        push(
            ObligationKind::SideEquiv,
            vec![root.id.clone()],
            Formula::iff(phi_of(&root.sequent, mode), Formula::top()),
        );
    }
    for n in &nodes {
        if cert.m.contains(&n.id) {
            let s = &n.sequent;
            push(
                ObligationKind::ThetaGamma,
                vec![n.id.clone()],
                Formula::imp(theta.clone(), Formula::imp(phi_of(s, mode), psi_of(s, mode))),
            );
        }
    }
    push(
        ObligationKind::RootDischarge,
        vec![],
        Formula::imp(phi_r.clone(), psi_of(&root.sequent, mode)),
    );
    obligations
}

/// The certificate with `θ` replaced and `ζ` and the obligations rebuilt
/// around it; no invariants are checked. `pi` is the proof the certificate
/// was extracted from. Used to test that the obligations pin `θ` down.
pub fn replace_theta(cert: &InductionCertificate, pi: &CyclicProof, mode: &Mode, theta: Formula) -> InductionCertificate {
    let root = pi.tree.get(&cert.root).expect("certificate root belongs to the proof");
    let mut out = cert.clone();
    out.zeta = build_zeta(&out.case_vars, &out.fresh_z, &theta);
    out.theta = theta;
    out.obligations = build_obligations(&out, root, mode);
    out
}

fn edge_tag(n: &ProofTree, premise: usize, rule: &Rule, mode: &Mode) -> Result<EdgeTag, ExtractionError> {
    Ok(match rule {
        Rule::Ref { .. }
        | Rule::Rep { .. }
        | Rule::Add0 { .. }
        | Rule::AddS { .. }
        | Rule::Mult0 { .. }
        | Rule::MultS { .. }
        | Rule::Pred { .. } => EdgeTag::A,
        Rule::Weak { .. } => EdgeTag::B,
        Rule::Or { .. } => EdgeTag::C,
        Rule::Ex { .. } => EdgeTag::D,
        Rule::All { principal, .. } => {
            if !mode.in_class(principal) {
                return Err(node_err(&n.id, "(∀) on the cycle with a principal formula outside the class"));
            }
            EdgeTag::E
        }
        Rule::And { principal } => {
            let Formula::And(a, b) = principal else {
                return Err(node_err(&n.id, "(∧) principal is not a conjunction"));
            };
            let side = if premise == 0 { a } else { b };
            if !mode.in_class(side) {
                return Err(node_err(&n.id, "(∧) premise on the cycle displays a formula outside the class"));
            }
            EdgeTag::F
        }
        Rule::Cut { formula } => {
            let side = if premise == 0 { formula.clone() } else { formula.negate() };
            if !mode.in_class(&side) {
                return Err(node_err(&n.id, "(cut) premise on the cycle displays a formula outside the class"));
            }
            EdgeTag::G
        }
        Rule::Case { var } => {
            if premise != 1 {
                return Err(node_err(&n.id, "left premise of (case) lies on the cycle"));
            }
            let (phi, _) = split_sequent(&n.sequent, mode);
            if phi.iter().any(|f| f.has_free(var)) {
                return Err(node_err(&n.id, format!("case variable {var} is free outside the class")));
            }
            EdgeTag::H
        }
    })
}

/// Longest path to `C` through `M` with edges out of `C` removed.
fn compute_ranks(
    m: &BTreeSet<String>,
    c: &BTreeSet<String>,
    succ: &BTreeMap<&str, Vec<&str>>,
) -> Result<BTreeMap<String, usize>, ExtractionError> {
    fn go<'a>(
        a: &'a str,
        c: &BTreeSet<String>,
        succ: &BTreeMap<&'a str, Vec<&'a str>>,
        memo: &mut BTreeMap<&'a str, Option<usize>>,
    ) -> Result<usize, ExtractionError> {
        match memo.get(a) {
            Some(Some(r)) => return Ok(*r),
            Some(None) => return Err(ExtractionError::RankCycle(a.to_string())),
            None => {}
        }
        if c.contains(a) {
            memo.insert(a, Some(0));
            return Ok(0);
        }
        memo.insert(a, None);
        let mut best: Option<usize> = None;
        for &s in succ.get(a).into_iter().flatten() {
            let r = go(s, c, succ, memo)?;
            best = Some(best.map_or(r + 1, |b| b.max(r + 1)));
        }
        let r = best.ok_or_else(|| ExtractionError::Invariant(format!("node {a} reaches no (case) conclusion")))?;
        memo.insert(a, Some(r));
        Ok(r)
    }
    let mut memo = BTreeMap::new();
    let mut out = BTreeMap::new();
    for a in m {
        out.insert(a.clone(), go(a, c, succ, &mut memo)?);
    }
    Ok(out)
}

fn check_invariants(cert: &InductionCertificate, pi: &CyclicProof, mode: &Mode) -> Result<(), ExtractionError> {
    let fail = |s: &str| Err(ExtractionError::Invariant(s.to_string()));
    let (kind, n) = mode.restriction();
    if !crate::syntax::is_in(&cert.theta, kind, n) {
        return fail("θ is outside the restriction class");
    }
    if kind == Kind::Pi && !crate::syntax::is_in(&cert.zeta, Kind::Pi, n) {
        return fail("ζ is outside the restriction class");
    }
    if cert.theta.has_free(&cert.fresh_z)
        || cert.b.contains(&cert.fresh_z)
        || cert.phi_root.has_free(&cert.fresh_z)
        || pi.tree.nodes().iter().any(|n| n.sequent.all_vars().contains(&cert.fresh_z))
    {
        return fail("the induction variable is not fresh");
    }
    if !cert.c.is_subset(&cert.m) {
        return fail("C is not contained in M");
    }
    if cert.ranks.values().any(|&r| r >= cert.m.len()) {
        return fail("a rank is not below |M|");
    }
    if mode.system == System::SSigma && !cert.b.is_empty() {
        return fail("B is non-empty in the Σ system");
    }
    for e in &cert.edges {
        if !cert.c.contains(&e.from) && cert.ranks[&e.to] >= cert.ranks[&e.from] {
            return fail("rank does not decrease along an edge inside M");
        }
    }
    Ok(())
}

/// Outcome of evaluating one obligation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObligationCheck {
    pub status: ObligationStatus,
    pub evaluations: usize,
    /// Assignment under which the formula is false.
    pub counterexample: Option<Assignment>,
    /// Assignment under which the formula fails when every quantifier is read
    /// as ranging over `0..=cutoff` only.
    pub truncated_counterexample: Option<Assignment>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub checks: Vec<ObligationCheck>,
}

impl CertificateReport {
    pub fn falsified(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == ObligationStatus::Falsified)
            .count()
    }

    pub fn truncated_hits(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.truncated_counterexample.is_some())
            .count()
    }
}

/// Evaluates one formula's universal closure over `{0..=bound}`.
pub fn check_obligation(phi: &Formula, bound: u64, cutoff: u64) -> ObligationCheck {
    let vars: Vec<Var> = phi.free_vars().into_iter().collect();
    let mut unknown = false;
    let mut counterexample = None;
    let mut truncated_counterexample = None;
    let mut evaluations = 0;
    for a in assignments(&vars, bound) {
        evaluations += 1;
        match eval_formula(phi, &a, cutoff) {
            Truth::False => {
                if counterexample.is_none() {
                    counterexample = Some(a.clone());
                }
            }
            Truth::Unknown => unknown = true,
            Truth::True => {}
        }
        if truncated_counterexample.is_none() && !eval_truncated(phi, &a, cutoff) {
            truncated_counterexample = Some(a);
        }
        if counterexample.is_some() && truncated_counterexample.is_some() {
            break;
        }
    }
    let status = if counterexample.is_some() {
        ObligationStatus::Falsified
    } else if unknown {
        ObligationStatus::BoundedUnknown
    } else {
        ObligationStatus::BoundedTrue
    };
    ObligationCheck {
        status,
        evaluations,
        counterexample,
        truncated_counterexample,
    }
}

/// Checks every obligation by bounded evaluation and records the statuses in
/// the certificate. Obligations are independent and are spread over `jobs`
/// threads.
pub fn check_certificate_bounded(
    cert: &mut InductionCertificate,
    bound: u64,
    cutoff: u64,
    jobs: usize,
) -> CertificateReport {
    let formulas: Vec<&Formula> = cert.obligations.iter().map(|o| &o.formula).collect();
    let jobs = jobs.max(1).min(formulas.len().max(1));
    let mut checks: Vec<Option<ObligationCheck>> = vec![None; formulas.len()];
    std::thread::scope(|s| {
        let chunk = formulas.len().div_ceil(jobs).max(1);
        let handles: Vec<_> = formulas
            .chunks(chunk)
            .map(|fs| s.spawn(move || fs.iter().map(|f| check_obligation(f, bound, cutoff)).collect::<Vec<_>>()))
            .collect();
        let mut i = 0;
        for h in handles {
            for c in h.join().expect("obligation checker panicked") {
                checks[i] = Some(c);
                i += 1;
            }
        }
    });
    let checks: Vec<ObligationCheck> = checks.into_iter().map(|c| c.expect("every obligation checked")).collect();
    for (o, c) in cert.obligations.iter_mut().zip(&checks) {
        o.status = c.status;
    }
    CertificateReport { checks }
}

fn ids_sexp(tag: &str, ids: impl IntoIterator<Item = impl AsRef<str>>) -> Sexp {
    Sexp::tagged(tag, ids.into_iter().map(|i| Sexp::atom(i.as_ref())))
}

fn vars_sexp(tag: &str, vars: impl IntoIterator<Item = Var>) -> Sexp {
    Sexp::tagged(tag, vars.into_iter().map(|v| Sexp::atom(v.name())))
}

impl InductionCertificate {
    pub fn to_sexp(&self) -> Sexp {
        let mut items = vec![
            ids_sexp("root", [&self.root]),
            Sexp::tagged("level", [Sexp::atom(self.level.to_string().as_str())]),
            Sexp::tagged("mode", [Sexp::atom(self.system.name())]),
            Sexp::tagged("theta", [formula_to_sexp(&self.theta)]),
            Sexp::tagged("zeta", [formula_to_sexp(&self.zeta)]),
            vars_sexp("fresh", [self.fresh_z.clone()]),
            vars_sexp("case-vars", self.case_vars.iter().cloned()),
            vars_sexp("B", self.b.iter().cloned()),
            ids_sexp("M", &self.m),
            ids_sexp("C", &self.c),
            Sexp::tagged(
                "phi-root",
                [
                    formula_to_sexp(&self.phi_root),
                    Sexp::atom(if self.phi_root_trivial { "trivial" } else { "nontrivial" }),
                ],
            ),
            Sexp::tagged(
                "ranks",
                self.ranks.iter().map(|(id, k)| {
                    Sexp::list(vec![Sexp::atom(id.as_str()), Sexp::atom(k.to_string().as_str())])
                }),
            ),
        ];
        for o in &self.obligations {
            items.push(Sexp::tagged(
                "obligation",
                [
                    Sexp::tagged("kind", [Sexp::atom(o.kind.name())]),
                    ids_sexp("about", &o.about),
                    Sexp::tagged("formula", [formula_to_sexp(&o.formula)]),
                    Sexp::tagged("desugared", [formula_to_sexp(&o.formula.desugar())]),
                    Sexp::tagged("status", [Sexp::atom(o.status.name())]),
                ],
            ));
        }
        for e in &self.edges {
            items.push(Sexp::tagged(
                "edge-just",
                [
                    Sexp::atom(e.from.as_str()),
                    Sexp::atom(e.to.as_str()),
                    Sexp::atom(e.tag.name()),
                ],
            ));
        }
        for n in &self.notes {
            items.push(Sexp::tagged("note", [Sexp::string(n.as_str())]));
        }
        Sexp::tagged("certificate", items)
    }

    pub fn from_sexp(e: &Sexp) -> Result<InductionCertificate, ParseError> {
        let items = e.expect_tagged("certificate")?;
        let mut fields: BTreeMap<&str, &[Sexp]> = BTreeMap::new();
        let mut obligations = Vec::new();
        let mut edges = Vec::new();
        let mut notes = Vec::new();
        for it in items {
            let (head, args) = it
                .as_tagged()
                .ok_or_else(|| it.err("expected a tagged certificate entry"))?;
            match head {
                "obligation" => {
                    let get = |tag: &str| {
                        args.iter()
                            .find_map(|a| a.as_tagged().filter(|(h, _)| *h == tag).map(|(_, r)| r))
                            .ok_or_else(|| it.err(format!("obligation is missing ({tag} ...)")))
                    };
                    let one = |tag: &str| -> Result<&Sexp, ParseError> {
                        match get(tag)? {
                            [x] => Ok(x),
                            _ => Err(it.err(format!("({tag} ...) takes one item"))),
                        }
                    };
                    let kind_e = one("kind")?;
                    let kind = ObligationKind::from_name(kind_e.expect_atom()?)
                        .ok_or_else(|| kind_e.err("unknown obligation kind"))?;
                    let status_e = one("status")?;
                    let status = ObligationStatus::from_name(status_e.expect_atom()?)
                        .ok_or_else(|| status_e.err("unknown obligation status"))?;
                    let about = get("about")?
                        .iter()
                        .map(|a| a.expect_atom().map(str::to_string))
                        .collect::<Result<_, _>>()?;
                    obligations.push(Obligation {
                        kind,
                        about,
                        formula: formula_from_sexp(one("formula")?)?,
                        status,
                    });
                }
                "edge-just" => match args {
                    [f, t, tag] => edges.push(EdgeJustification {
                        from: f.expect_atom()?.to_string(),
                        to: t.expect_atom()?.to_string(),
                        tag: EdgeTag::from_name(tag.expect_atom()?).ok_or_else(|| tag.err("unknown edge tag"))?,
                    }),
                    _ => return Err(it.err("(edge-just from to tag)")),
                },
                "note" => match args {
                    [s] => match &s.kind {
                        crate::sexpr::SexpKind::Str(text) => notes.push(text.clone()),
                        _ => return Err(s.err("note must be a string")),
                    },
                    _ => return Err(it.err("(note \"...\")")),
                },
                other => {
                    if fields.insert(other, args).is_some() {
                        return Err(it.err(format!("duplicate ({other} ...) entry")));
                    }
                }
            }
        }
        let field = |tag: &str| fields.get(tag).copied().ok_or_else(|| e.err(format!("certificate is missing ({tag} ...)")));
        let single = |tag: &str| -> Result<&Sexp, ParseError> {
            match field(tag)? {
                [x] => Ok(x),
                _ => Err(e.err(format!("({tag} ...) takes one item"))),
            }
        };
        let ids = |tag: &str| -> Result<BTreeSet<String>, ParseError> {
            field(tag)?.iter().map(|a| a.expect_atom().map(str::to_string)).collect()
        };
        let vars = |tag: &str| -> Result<Vec<Var>, ParseError> { field(tag)?.iter().map(var_from_sexp).collect() };
        let number = |x: &Sexp| -> Result<usize, ParseError> {
            x.expect_atom()?.parse().map_err(|_| x.err("expected a natural number"))
        };
        let system_e = single("mode")?;
        let system = System::from_name(system_e.expect_atom()?).ok_or_else(|| system_e.err("unknown system"))?;
        let fresh = vars("fresh")?;
        let [fresh_z] = <[Var; 1]>::try_from(fresh).map_err(|_| e.err("(fresh z) takes one variable"))?;
        let (phi_root, phi_root_trivial) = match field("phi-root")? {
            [f, t] => (
                formula_from_sexp(f)?,
                match t.expect_atom()? {
                    "trivial" => true,
                    "nontrivial" => false,
                    _ => return Err(t.err("expected trivial or nontrivial")),
                },
            ),
            _ => return Err(e.err("(phi-root f trivial|nontrivial)")),
        };
        let mut ranks = BTreeMap::new();
        for r in field("ranks")? {
            match r.as_list() {
                Some([id, k]) => {
                    ranks.insert(id.expect_atom()?.to_string(), number(k)?);
                }
                _ => return Err(r.err("rank entries are (id k)")),
            }
        }
        Ok(InductionCertificate {
            root: single("root")?.expect_atom()?.to_string(),
            level: number(single("level")?)?,
            system,
            m: ids("M")?,
            c: ids("C")?,
            b: vars("B")?.into_iter().collect(),
            case_vars: vars("case-vars")?,
            fresh_z,
            theta: formula_from_sexp(single("theta")?)?,
            zeta: formula_from_sexp(single("zeta")?)?,
            phi_root,
            phi_root_trivial,
            ranks,
            obligations,
            edges,
            notes,
        })
    }

    pub fn parse(text: &str) -> Result<InductionCertificate, ParseError> {
        InductionCertificate::from_sexp(&parse_one(text)?)
    }

    pub fn render(&self) -> String {
        let mut s = self.to_sexp().pretty(100);
        s.push('\n');
        s
    }
}

impl fmt::Display for InductionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certificate for the cycle at {} ({} {})", self.root, self.system, self.level)?;
        writeln!(f, "  M = {{{}}}", self.m.iter().cloned().collect::<Vec<_>>().join(", "))?;
        writeln!(f, "  C = {{{}}}", self.c.iter().cloned().collect::<Vec<_>>().join(", "))?;
        writeln!(
            f,
            "  case variables: {}",
            self.case_vars.iter().map(|v| v.name()).collect::<Vec<_>>().join(", ")
        )?;
        writeln!(f, "  B = {{{}}}", self.b.iter().map(|v| v.name()).collect::<Vec<_>>().join(", "))?;
        writeln!(f, "  theta = {}", self.theta)?;
        writeln!(f, "  zeta({}) = {}", self.fresh_z, self.zeta)?;
        writeln!(
            f,
            "  phi_root = {}{}",
            self.phi_root,
            if self.phi_root_trivial { " (trivial)" } else { "" }
        )?;
        for o in &self.obligations {
            writeln!(f, "  [{}] {} {}", o.status.name(), o.kind.name(), o.about.join(" -> "))?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn split_keeps_every_formula() {
        let gamma: Sequent = [f("(all y (eq x y))"), f("(ex y (all z (eq y z)))"), f("(eq x 0)")]
            .into_iter()
            .collect();
        let (phi, psi) = split_sequent(&gamma, &Mode::sn(0));
        assert_eq!(phi, vec![f("(ex y (all z (eq y z)))")]);
        assert_eq!(psi.len(), 2);
        assert_eq!(split_sequent(&Sequent::empty(), &Mode::sn(0)), (vec![], vec![]));
    }

    #[test]
    fn zeta_shape() {
        let theta = f("(all w (eq (add x w) (add w x)))");
        let z = Var::new("z0");
        let zeta = build_zeta(&[Var::new("x")], &z, &theta);
        assert_eq!(zeta, f("(all<= x z0 (imp (eq x z0) (all w (eq (add x w) (add w x)))))"));
        assert!(crate::syntax::is_in(&zeta, Kind::Pi, 1));
    }

    #[test]
    fn schema_example_certificate() {
        let x = Var::new("x");
        let phi = f("(all y (eq (add x y) (add y x)))");
        let pi = crate::builders::induction_schema_proof(&phi, &x, 0).unwrap();
        let Extraction::Certificate(cert) = extract_certificate(&pi, &Mode::sn(0)).unwrap() else {
            panic!("the example has a root cycle")
        };
        let mut cert = *cert;
        assert_eq!(cert.m, ["r", "e", "a", "w", "b"].map(String::from).into_iter().collect());
        assert_eq!(cert.c, ["r".to_string()].into_iter().collect());
        assert_eq!(cert.case_vars, vec![x.clone()]);
        assert!(cert.b.is_empty());
        assert_eq!(cert.theta, phi);
        assert_eq!(cert.zeta, build_zeta(&[x], &cert.fresh_z, &phi));
        let ranks: Vec<usize> = ["r", "e", "a", "w", "b"].iter().map(|i| cert.ranks[*i]).collect();
        assert_eq!(ranks, vec![0, 4, 3, 2, 1]);
        let report = check_certificate_bounded(&mut cert, 2, 4, 2);
        assert_eq!(report.falsified(), 0);
        assert_eq!(report.truncated_hits(), 0);
        assert!(cert.obligations.iter().all(|o| o.status != ObligationStatus::Unchecked));
        assert_eq!(InductionCertificate::parse(&cert.render()).unwrap(), cert);

        let bad = replace_theta(&cert, &pi, &Mode::sn(0), f("(all y (eq (add x y) y))"));
        let mut bad = bad;
        assert!(check_certificate_bounded(&mut bad, 2, 4, 1).truncated_hits() > 0);
    }

    #[test]
    fn acyclic_proofs_have_no_root_cycle() {
        let t = crate::builders::tautology(&Sequent::empty(), &f("(all y (eq y y))"));
        let t = crate::annotation::annotate_tree(&t, &crate::annotation::Annotation::empty(), &Mode::sn(0)).unwrap();
        let pi = CyclicProof::new(t);
        assert_eq!(compute_m(&pi), None);
        assert_eq!(extract_certificate(&pi, &Mode::sn(0)).unwrap(), Extraction::NoRootCycle);
        assert!(extract_all(&pi, &Mode::sn(0)).unwrap().is_empty());
    }

    #[test]
    fn obligation_check_statuses() {
        assert_eq!(check_obligation(&f("(eq (add x 0) x)"), 3, 8).status, ObligationStatus::BoundedTrue);
        assert_eq!(check_obligation(&f("(all y (eq y y))"), 3, 8).status, ObligationStatus::BoundedUnknown);
        let c = check_obligation(&f("(eq x 0)"), 3, 8);
        assert_eq!(c.status, ObligationStatus::Falsified);
        assert!(c.truncated_counterexample.is_some());
    }
}
