//! Constructors for canonical proofs: tautologies, the induction schema as a
//! cyclic proof, closure under the induction rule, the ω-rule cascade, and
//! ground atoms.

use thiserror::Error;

use crate::annotation::{annotate_tree, Annotation, Mode, System};
use crate::calculus::{is_axiom, premises_of, ProofTree, Rule, Sequent, Step};
use crate::checker::{validate, CyclicProof};
use crate::semantics::{eval_term, Assignment};
use crate::syntax::{is_in, numeral, Formula, Fresh, Kind, Term, Var, VarSet};
use crate::transform::reannotate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreError {
    #[error("{formula} is not in {class}")]
    Class { formula: Formula, class: String },
    #[error("{var} is not free in {formula}")]
    NotFree { var: Var, formula: Formula },
    #[error("{var} is free in the side formulas")]
    FreeInSide { var: Var },
    #[error("{what}: expected {expected}, found {found}")]
    Sequent {
        what: String,
        expected: Sequent,
        found: Sequent,
    },
    #[error("{what} is not valid: {report}")]
    Invalid { what: String, report: String },
    #[error("{0}")]
    Other(String),
}

struct Ids {
    prefix: String,
    next: usize,
}

impl Ids {
    fn new(prefix: &str) -> Ids {
        Ids {
            prefix: prefix.to_string(),
            next: 0,
        }
    }

    fn next(&mut self) -> String {
        let id = format!("{}{}", self.prefix, self.next);
        self.next += 1;
        id
    }
}

fn step(id: String, conclusion: &Sequent, rule: Rule, build: impl FnOnce(Vec<Sequent>) -> Vec<ProofTree>) -> ProofTree {
    let premises = premises_of(conclusion, &rule).expect("builder applies rules to matching sequents");
    ProofTree::node(id, conclusion.clone(), rule, build(premises))
}

/// A proof of `Γ, φ, φ̄` by induction on `φ`. Node ids are `t0`, `t1`, ....
pub fn tautology(gamma: &Sequent, phi: &Formula) -> ProofTree {
    let mut avoid: VarSet = gamma.all_vars();
    avoid.extend(phi.all_vars());
    let mut fresh = Fresh::new("v", avoid);
    let mut ids = Ids::new("t");
    taut(gamma, phi, &mut fresh, &mut ids)
}

fn taut(gamma: &Sequent, phi: &Formula, fresh: &mut Fresh, ids: &mut Ids) -> ProofTree {
    let neg = phi.negate();
    let conclusion = gamma.with(phi.clone()).with(neg.clone());
    let id = ids.next();
    if is_axiom(&conclusion).is_some() {
        return ProofTree::leaf(id, conclusion, Step::Axiom);
    }
    match phi {
        Formula::Eq(..) | Formula::Neq(..) => unreachable!("atomic tautologies are axioms"),
        Formula::And(..) | Formula::Or(..) => {
            // Split the disjunction side first, then the conjunction.
            let (conj, disj) = if matches!(phi, Formula::And(..)) {
                (phi.clone(), neg.clone())
            } else {
                (neg.clone(), phi.clone())
            };
            let (Formula::And(ca, cb), Formula::Or(da, db)) = (&conj, &disj) else {
                unreachable!()
            };
            step(id, &conclusion, Rule::Or { principal: disj.clone() }, |ps| {
                let mid = &ps[0];
                let mid_id = ids.next();
                vec![step(mid_id, mid, Rule::And { principal: conj.clone() }, |qs| {
                    // qs[0] = Δ, ca, da, db with ca and da dual; likewise for cb, db.
                    let left_side = qs[0].without(ca).and_then(|s| s.without(da)).expect("present");
                    let right_side = qs[1].without(cb).and_then(|s| s.without(db)).expect("present");
                    let l = taut(&left_side, ca, fresh, ids);
                    let r = taut(&right_side, cb, fresh, ids);
                    vec![l, r]
                })]
            })
        }
        _ => {
            let (univ, exist) = if matches!(phi, Formula::All(..) | Formula::AllLe(..) | Formula::Nle(..)) {
                (phi.clone(), neg.clone())
            } else {
                (neg.clone(), phi.clone())
            };
            let z = fresh.next_var();
            step(id, &conclusion, Rule::All { principal: univ.clone(), eigen: z.clone() }, |ps| {
                let above = &ps[0];
                let ex_id = ids.next();
                vec![step(ex_id, above, Rule::Ex { principal: exist.clone(), witness: Term::Var(z) }, |qs| {
                    let top = &qs[0];
                    // The two new formulas are dual instances.
                    let added_u = above.minus(&conclusion.without(&univ).expect("present")).expect("extends");
                    let inst = added_u.iter().next().expect("one instance").clone();
                    let side = top
                        .without(&inst)
                        .and_then(|s| s.without(&inst.negate()))
                        .expect("dual instances present");
                    vec![taut(&side, &inst, fresh, ids)]
                })]
            })
        }
    }
}

/// `ψ = ¬∀x(φ(x) → φ(s(x)))`, pushed into negation normal form.
pub fn induction_hypothesis_negation(phi: &Formula, x: &Var) -> Result<Formula, PreError> {
    let step = phi
        .substitute(x, &Term::succ(Term::Var(x.clone())))
        .map_err(|e| PreError::Other(e.to_string()))?;
    Ok(Formula::all(x.clone(), Formula::imp(phi.clone(), step)).negate())
}

fn check_class(phi: &Formula, n: usize, x: &Var) -> Result<(), PreError> {
    if !is_in(phi, Kind::Pi, n + 1) {
        return Err(PreError::Class {
            formula: phi.clone(),
            class: format!("Pi{}", n + 1),
        });
    }
    if !phi.has_free(x) {
        return Err(PreError::NotFree {
            var: x.clone(),
            formula: phi.clone(),
        });
    }
    Ok(())
}

fn subst(phi: &Formula, x: &Var, t: &Term) -> Result<Formula, PreError> {
    phi.substitute(x, t).map_err(|e| PreError::Other(e.to_string()))
}

/// Prefixes every node id and back-link target.
pub fn relabel(tree: &ProofTree, prefix: &str) -> ProofTree {
    let mut out = tree.clone();
    out.for_each_mut(&mut |n| {
        n.id = format!("{prefix}{}", n.id);
        if let Step::Back(t) = &mut n.step {
            *t = format!("{prefix}{t}");
        }
    });
    out
}

/// The cyclic proof of `φ̄(0), ψ, φ(x)` with `ψ = ¬∀x(φ(x) → φ(s(x)))`,
/// annotated with `{x}` at the root.
pub fn induction_schema_proof(phi: &Formula, x: &Var, n: usize) -> Result<CyclicProof, PreError> {
    check_class(phi, n, x)?;
    let xv = Term::Var(x.clone());
    let sx = Term::succ(xv.clone());
    let phi0 = subst(phi, x, &Term::Zero)?;
    let phis = subst(phi, x, &sx)?;
    let psi = induction_hypothesis_negation(phi, x)?;
    let base: Sequent = [phi0.negate(), psi.clone()].into_iter().collect();
    let root_seq = base.with(phi.clone());
    let conj = Formula::and(phi.clone(), phis.negate());

    let tree = step("r".into(), &root_seq, Rule::Case { var: x.clone() }, |ps| {
        let left = relabel(&tautology(&[psi.clone()].into_iter().collect(), &phi0), "l.");
        debug_assert_eq!(left.sequent, ps[0]);
        let right = step("e".into(), &ps[1], Rule::Ex { principal: psi.clone(), witness: xv.clone() }, |qs| {
            vec![step("a".into(), &qs[0], Rule::And { principal: conj.clone() }, |rs| {
                let w = step("w".into(), &rs[0], Rule::Weak { delta: [phis.clone()].into_iter().collect() }, |ts| {
                    vec![ProofTree::leaf("b", ts[0].clone(), Step::Back("r".into()))]
                });
                let t = relabel(&tautology(&base, &phis), "s.");
                debug_assert_eq!(t.sequent, rs[1]);
                vec![w, t]
            })]
        });
        vec![left, right]
    });
    let root_v = Annotation::new([x.clone()]);
    let tree = annotate_tree(&tree, &root_v, &Mode::sn(n)).map_err(|e| PreError::Other(e.to_string()))?;
    Ok(CyclicProof::new(tree))
}

/// Closes `{φ(0)}` and `{φ̄(x), φ(s(x))}` under the induction rule: a cyclic
/// proof of `{φ(x)}` in the Π system at `mode.level`.
pub fn induction_rule_proof(
    pi0: &CyclicProof,
    pi1: &CyclicProof,
    phi: &Formula,
    x: &Var,
    mode: &Mode,
) -> Result<CyclicProof, PreError> {
    if mode.system != System::SPi {
        return Err(PreError::Other(format!("the induction rule proof lives in spi, not {}", mode.system)));
    }
    let n = mode.level;
    check_class(phi, n, x)?;
    let sx = Term::succ(Term::Var(x.clone()));
    let phi0 = subst(phi, x, &Term::Zero)?;
    let phis = subst(phi, x, &sx)?;
    let want0: Sequent = [phi0].into_iter().collect();
    let want1: Sequent = [phi.negate(), phis.clone()].into_iter().collect();
    for (what, pi, want) in [("base proof", pi0, &want0), ("step proof", pi1, &want1)] {
        if pi.tree.sequent != *want {
            return Err(PreError::Sequent {
                what: what.to_string(),
                expected: want.clone(),
                found: pi.tree.sequent.clone(),
            });
        }
        let report = validate(pi, mode);
        if !report.is_valid() {
            return Err(PreError::Invalid {
                what: what.to_string(),
                report: report.to_string(),
            });
        }
    }
    let root_seq: Sequent = [phi.clone()].into_iter().collect();
    let tree = step("r".into(), &root_seq, Rule::Case { var: x.clone() }, |ps| {
        let left = relabel(&pi0.tree, "p0.");
        debug_assert_eq!(left.sequent, ps[0]);
        let cut = step("c".into(), &ps[1], Rule::Cut { formula: phi.clone() }, |qs| {
            let w = step("w".into(), &qs[0], Rule::Weak { delta: [phis.clone()].into_iter().collect() }, |ts| {
                vec![ProofTree::leaf("b", ts[0].clone(), Step::Back("r".into()))]
            });
            vec![w, relabel(&pi1.tree, "p1.")]
        });
        vec![left, cut]
    });
    let pi = CyclicProof::new(tree.erase());
    reannotate(&pi, &Annotation::new([x.clone()]), mode).map_err(|e| PreError::Other(e.to_string()))
}

/// Hand-built premises of the induction rule for `φ(x) = ∀y (0 + x = x)`:
/// proofs of `{φ(0)}` and `{φ̄(x), φ(s(x))}`.
pub fn zero_add_premises() -> (Formula, Var, CyclicProof, CyclicProof) {
    let x = Var::new("x");
    let y = Var::new("y");
    let v = Var::new("v");
    let xv = Term::Var(x.clone());
    let sx = Term::succ(xv.clone());
    let phi_of = |t: Term| Formula::all(y.clone(), Formula::eq(Term::add(Term::Zero, t.clone()), t));
    let phi = phi_of(xv.clone());

    let s0: Sequent = [phi_of(Term::Zero)].into_iter().collect();
    let pi0 = step("z0".into(), &s0, Rule::All { principal: phi_of(Term::Zero), eigen: v.clone() }, |ps| {
        vec![step("z1".into(), &ps[0], Rule::Add0 { t: Term::Zero }, |qs| {
            vec![ProofTree::leaf("z2", qs[0].clone(), Step::Axiom)]
        })]
    });

    let s1: Sequent = [phi.negate(), phi_of(sx.clone())].into_iter().collect();
    let pi1 = step("o0".into(), &s1, Rule::All { principal: phi_of(sx.clone()), eigen: v.clone() }, |ps| {
        vec![step("o1".into(), &ps[0], Rule::Ex { principal: phi.negate(), witness: Term::Var(v.clone()) }, |qs| {
            vec![step("o2".into(), &qs[0], Rule::AddS { t: Term::Zero, u: xv.clone() }, |rs| {
                let h = Var::new("h");
                let rep = Rule::Rep {
                    t0: Term::add(Term::Zero, xv.clone()),
                    t1: xv.clone(),
                    u0: Term::add(Term::Zero, sx.clone()),
                    u1: Term::succ(Term::Var(h.clone())),
                    y: h,
                };
                vec![step("o3".into(), &rs[0], rep, |ts| vec![ProofTree::leaf("o4", ts[0].clone(), Step::Axiom)])]
            })]
        })]
    });
    let mode = Mode::spi(0);
    let ann = |t: ProofTree| CyclicProof::new(annotate_tree(&t, &Annotation::empty(), &mode).expect("hand-built proof"));
    (phi, x, ann(pi0), ann(pi1))
}

/// The ω-rule cascade truncated after `proofs.len()` (case) applications:
/// `proofs[k]` proves `Γ, φ(k̄)` and the last right premise is left open.
pub fn omega_truncation(proofs: &[ProofTree], gamma: &Sequent, phi: &Formula, x: &Var) -> Result<ProofTree, PreError> {
    if gamma.has_free(x) {
        return Err(PreError::FreeInSide { var: x.clone() });
    }
    if !proofs.is_empty() && !phi.has_free(x) {
        return Err(PreError::NotFree {
            var: x.clone(),
            formula: phi.clone(),
        });
    }
    let shifted = |k: u64| -> Result<Formula, PreError> {
        let mut t = Term::Var(x.clone());
        for _ in 0..k {
            t = Term::succ(t);
        }
        subst(phi, x, &t)
    };
    let k_max = proofs.len() as u64;
    let mut tree = ProofTree::leaf(format!("c{k_max}"), gamma.with(shifted(k_max)?), Step::Open);
    for (k, p) in proofs.iter().enumerate().rev() {
        let want = gamma.with(subst(phi, x, &numeral(k as u64))?);
        if p.sequent != want {
            return Err(PreError::Sequent {
                what: format!("proof {k}"),
                expected: want,
                found: p.sequent.clone(),
            });
        }
        let conclusion = gamma.with(shifted(k as u64)?);
        let premises = premises_of(&conclusion, &Rule::Case { var: x.clone() }).map_err(|e| PreError::Other(e.to_string()))?;
        debug_assert_eq!(premises[0], want);
        debug_assert_eq!(premises[1], tree.sequent);
        tree = ProofTree::node(
            format!("c{k}"),
            conclusion,
            Rule::Case { var: x.clone() },
            vec![relabel(p, &format!("k{k}.")), tree],
        );
    }
    Ok(tree)
}

/// Innermost-leftmost redex of a closed term: the term with the redex replaced
/// by `hole`, the redex, its contractum and the rule supplying the equation.
fn redex(t: &Term, hole: &Var) -> Option<(Term, Term, Term, Rule)> {
    let wrap = |ctx: Term, f: &dyn Fn(Term) -> Term| f(ctx);
    match t {
        Term::Zero | Term::Var(_) => None,
        Term::Succ(a) => redex(a, hole).map(|(c, l, r, rule)| (wrap(c, &|c| Term::succ(c)), l, r, rule)),
        Term::Add(a, b) | Term::Mul(a, b) => {
            let is_add = matches!(t, Term::Add(..));
            let rebuild = |x: Term, y: Term| if is_add { Term::add(x, y) } else { Term::mul(x, y) };
            if let Some((c, l, r, rule)) = redex(a, hole) {
                return Some((rebuild(c, (**b).clone()), l, r, rule));
            }
            if let Some((c, l, r, rule)) = redex(b, hole) {
                return Some((rebuild((**a).clone(), c), l, r, rule));
            }
            let (a, b) = ((**a).clone(), (**b).clone());
            let (r, rule) = match (is_add, &b) {
                (true, Term::Zero) => (a.clone(), Rule::Add0 { t: a }),
                (true, Term::Succ(u)) => (Term::succ(Term::add(a.clone(), (**u).clone())), Rule::AddS { t: a, u: (**u).clone() }),
                (false, Term::Zero) => (Term::Zero, Rule::Mult0 { t: a }),
                (false, Term::Succ(u)) => (
                    Term::add(Term::mul(a.clone(), (**u).clone()), a.clone()),
                    Rule::MultS { t: a, u: (**u).clone() },
                ),
                _ => return None,
            };
            Some((Term::Var(hole.clone()), t.clone(), r, rule))
        }
    }
}

/// Builds a proof bottom-up as a chain of single-premise rules.
struct Chain {
    steps: Vec<(Sequent, Rule)>,
    current: Sequent,
}

impl Chain {
    fn apply(&mut self, rule: Rule) {
        let next = premises_of(&self.current, &rule).expect("ground prover applies rules correctly");
        let next = next.into_iter().next().expect("chain rules have one premise");
        self.steps.push((self.current.clone(), rule));
        self.current = next;
    }

    fn drop(&mut self, formulas: &[Formula]) {
        let delta: Sequent = formulas.iter().cloned().collect();
        if delta.is_submultiset_of(&self.current) && !delta.is_empty() {
            self.apply(Rule::Weak { delta });
        }
    }

    fn finish(self) -> ProofTree {
        let mut tree = ProofTree::leaf(format!("g{}", self.steps.len()), self.current, Step::Axiom);
        for (i, (s, r)) in self.steps.into_iter().enumerate().rev() {
            tree = ProofTree::node(format!("g{i}"), s, r, vec![tree]);
        }
        tree
    }

    fn closed(&self) -> bool {
        is_axiom(&self.current).is_some()
    }

    /// Rewrites the side of `a ≠ b` selected by `left` to a numeral, keeping
    /// only the rewritten disequality. Returns the final atom.
    fn normalize(&mut self, mut a: Term, mut b: Term, left: bool) -> (Term, Term) {
        let hole = Var::new("h");
        loop {
            if self.closed() {
                return (a, b);
            }
            let side = if left { &a } else { &b };
            let Some((ctx, l, r, rule)) = redex(side, &hole) else {
                return (a, b);
            };
            let eq = Formula::Neq(l.clone(), r.clone());
            let old = Formula::Neq(a.clone(), b.clone());
            self.apply(rule);
            let (u0, u1) = if left { (ctx.clone(), b.clone()) } else { (a.clone(), ctx.clone()) };
            self.apply(Rule::Rep {
                t0: l,
                t1: r.clone(),
                u0: u0.clone(),
                u1: u1.clone(),
                y: hole.clone(),
            });
            let new_side = ctx.substitute(&hole, &r);
            if left {
                a = new_side;
            } else {
                b = new_side;
            }
            self.drop(&[eq, old]);
        }
    }
}

/// A proof of `{t = u}` when the closed terms have the same value, of
/// `{t ≠ u}` otherwise.
pub fn prove_ground_atom(t: &Term, u: &Term) -> Result<ProofTree, PreError> {
    if !t.is_closed() || !u.is_closed() {
        return Err(PreError::Other("ground atoms need closed terms".into()));
    }
    let empty = Assignment::new();
    let tv = eval_term(t, &empty);
    let uv = eval_term(u, &empty);
    let hole = Var::new("h");
    let hv = Term::Var(hole.clone());
    if tv == uv {
        let goal = Formula::Eq(t.clone(), u.clone());
        let mut c = Chain {
            steps: Vec::new(),
            current: [goal].into_iter().collect(),
        };
        // t ≠ t, rewritten on the right to t ≠ n.
        c.apply(Rule::Ref { t: t.clone() });
        let (_, n) = c.normalize(t.clone(), t.clone(), false);
        if c.closed() {
            return Ok(c.finish());
        }
        // u ≠ u, rewritten on the right to u ≠ n.
        c.apply(Rule::Ref { t: u.clone() });
        let (_, m) = c.normalize(u.clone(), u.clone(), false);
        debug_assert_eq!(n, m);
        if c.closed() {
            return Ok(c.finish());
        }
        // Turn u ≠ n into n ≠ u, then t ≠ n into t ≠ u.
        c.apply(Rule::Ref { t: u.clone() });
        c.apply(Rule::Rep {
            t0: u.clone(),
            t1: n.clone(),
            u0: hv.clone(),
            u1: u.clone(),
            y: hole.clone(),
        });
        c.drop(&[Formula::Neq(u.clone(), u.clone()), Formula::Neq(u.clone(), n.clone())]);
        c.apply(Rule::Rep {
            t0: n.clone(),
            t1: u.clone(),
            u0: t.clone(),
            u1: hv,
            y: hole,
        });
        debug_assert!(c.closed());
        Ok(c.finish())
    } else {
        let goal = Formula::Neq(t.clone(), u.clone());
        let mut c = Chain {
            steps: Vec::new(),
            current: [goal].into_iter().collect(),
        };
        let (a, b) = c.normalize(t.clone(), u.clone(), true);
        let (mut a, mut b) = c.normalize(a, b, false);
        while let (Term::Succ(a1), Term::Succ(b1)) = (&a, &b) {
            let (a1, b1) = ((**a1).clone(), (**b1).clone());
            c.apply(Rule::Pred { t0: a1.clone(), t1: b1.clone() });
            c.drop(&[Formula::Neq(a.clone(), b.clone())]);
            a = a1;
            b = b1;
        }
        if a == Term::Zero {
            // 0 ≠ s(k): flip it to s(k) ≠ 0.
            c.apply(Rule::Ref { t: Term::Zero });
            c.apply(Rule::Rep {
                t0: Term::Zero,
                t1: b.clone(),
                u0: hv,
                u1: Term::Zero,
                y: hole,
            });
        }
        debug_assert!(c.closed());
        Ok(c.finish())
    }
}

/// A proof with two independent cycles: a conjunction of two induction
/// schema instances, each unfolded by (∨), annotated from `∅` in `Sₙ`.
pub fn two_loop_example(phi1: &Formula, phi2: &Formula, x: &Var, n: usize) -> Result<CyclicProof, PreError> {
    let a = induction_schema_proof(phi1, x, n)?;
    let b = induction_schema_proof(phi2, x, n)?;
    let disj = |s: &Sequent| Formula::disjunction(s.iter().cloned());
    let (da, db) = (disj(&a.tree.sequent), disj(&b.tree.sequent));
    // Peels (∨) off a left-associated disjunction until the sequent is the
    // one `inner` proves.
    fn peel(ctx: Sequent, f: &Formula, inner: ProofTree, ids: &mut Ids) -> ProofTree {
        let conclusion = ctx.with(f.clone());
        if conclusion == inner.sequent {
            return inner;
        }
        let Formula::Or(l, r) = f else {
            unreachable!("members are reached before leaving the disjunction")
        };
        let id = ids.next();
        let next = peel(ctx.with((**r).clone()), l, inner, ids);
        ProofTree::node(id, conclusion, Rule::Or { principal: f.clone() }, vec![next])
    }
    let mut ids = Ids::new("o");
    let left = peel(Sequent::empty(), &da, relabel(&a.tree, "A.").erase(), &mut ids);
    let right = peel(Sequent::empty(), &db, relabel(&b.tree, "B.").erase(), &mut ids);
    let conj = Formula::and(da, db);
    let root_seq: Sequent = [conj.clone()].into_iter().collect();
    let tree = ProofTree::node("r", root_seq, Rule::And { principal: conj }, vec![left, right]);
    reannotate(&CyclicProof::new(tree), &Annotation::empty(), &Mode::sn(n)).map_err(|e| PreError::Other(e.to_string()))
}

/// A named proof together with the mode it is checked in.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub proof: CyclicProof,
    pub mode: Mode,
}

/// Π₁ facts about addition and multiplication used for the worked example.
pub const SCHEMA_FORMULAS: &[&str] = &[
    "(all y (eq (add x y) (add y x)))",
    "(all y (eq (mul x y) (mul y x)))",
    "(all y (eq (add 0 x) x))",
    "(all y (eq (add (s x) y) (add x (s y))))",
    "(all y (eq (mul 0 x) 0))",
];

/// The regression corpus: worked examples, random induction schema
/// instances, the induction rule, two loops, tautologies and ground atoms.
/// At least `size` entries, deterministic in `seed`.
pub fn corpus(seed: u64, size: usize) -> Vec<CorpusEntry> {
    use rand::Rng;
    let mut rng = crate::gen::rng(seed);
    let x = Var::new("x");
    let mut out = Vec::new();
    for (i, s) in SCHEMA_FORMULAS.iter().enumerate() {
        let phi = crate::syntax::parse_formula(s).expect("corpus formula");
        add(&mut out, format!("schema_fact_{i}"), induction_schema_proof(&phi, &x, 0).expect("Π₁"), Mode::sn(0));
    }
    for n in 1..=2 {
        let phi = crate::gen::random_pi_formula(&mut rng, n, n + 3, &x);
        add(&mut out, format!("schema_pi{}", n + 1), induction_schema_proof(&phi, &x, n).expect("Πₙ₊₁"), Mode::sn(n));
    }
    let (phi, xv, pi0, pi1) = zero_add_premises();
    add(&mut out, "zero_add_base".into(), pi0.clone(), Mode::spi(0));
    add(&mut out, "zero_add_step".into(), pi1.clone(), Mode::spi(0));
    add(
        &mut out,
        "induction_rule".into(),
        induction_rule_proof(&pi0, &pi1, &phi, &xv, &Mode::spi(0)).expect("premises fit"),
        Mode::spi(0),
    );
    let f0 = crate::syntax::parse_formula(SCHEMA_FORMULAS[0]).expect("corpus formula");
    let f1 = crate::syntax::parse_formula(SCHEMA_FORMULAS[1]).expect("corpus formula");
    add(&mut out, "two_loops".into(), two_loop_example(&f0, &f1, &x, 0).expect("Π₁"), Mode::sn(0));
    let mut k = 0;
    while out.len() < size {
        match k % 3 {
            0 => {
                let phi = crate::gen::random_pi_formula(&mut rng, 0, 3, &x);
                if let Ok(p) = induction_schema_proof(&phi, &x, 0) {
                    add(&mut out, format!("schema_random_{k}"), p, Mode::sn(0));
                }
            }
            1 => {
                let phi = crate::gen::random_formula_with(&mut rng, 3);
                let t = tautology(&Sequent::empty(), &phi);
                let t = annotate_tree(&t, &Annotation::empty(), &Mode::sn(0)).expect("tautologies annotate");
                add(&mut out, format!("tautology_{k}"), CyclicProof::new(t), Mode::sn(0));
            }
            _ => {
                let a = rng.gen_range(0..5u64);
                let b = rng.gen_range(0..5u64);
                let t = Term::mul(numeral(a), numeral(b));
                let u = numeral(rng.gen_range(0..=(a * b + 1)));
                let p = prove_ground_atom(&t, &u).expect("closed terms");
                let p = annotate_tree(&p, &Annotation::empty(), &Mode::sn(0)).expect("ground proofs annotate");
                add(&mut out, format!("ground_{k}"), CyclicProof::new(p), Mode::sn(0));
            }
        }
        k += 1;
    }
    out
}

fn add(out: &mut Vec<CorpusEntry>, name: String, proof: CyclicProof, mode: Mode) {
    out.push(CorpusEntry { name, proof, mode });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_tree;
    use crate::syntax::parse_formula;
    use std::collections::BTreeSet;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn tautologies_check() {
        for s in [
            "(eq x y)",
            "(all y (eq y y))",
            "(and (eq 0 0) (eq x x))",
            "(or (all<= y x (eq y 0)) (ex z (le z x)))",
            "(nle x (s x))",
        ] {
            let t = tautology(&Sequent::empty(), &f(s));
            check_tree(&t, &BTreeSet::new()).unwrap_or_else(|e| panic!("{s}: {e:?}"));
        }
        assert_eq!(tautology(&Sequent::empty(), &f("(eq x y)")).node_count(), 1);
    }

    #[test]
    fn induction_schema_validates() {
        let phi = f("(all y (eq (add x y) (add y x)))");
        let pi = induction_schema_proof(&phi, &Var::new("x"), 0).unwrap();
        let r = validate(&pi, &Mode::sn(0));
        assert!(r.is_valid(), "{r}");
        assert!(induction_schema_proof(&f("(ex y (all z (eq x (add y z))))"), &Var::new("x"), 0).is_err());
    }

    #[test]
    fn induction_rule_validates_in_spi() {
        let (phi, x, pi0, pi1) = zero_add_premises();
        let pi = induction_rule_proof(&pi0, &pi1, &phi, &x, &Mode::spi(0)).unwrap();
        let r = validate(&pi, &Mode::spi(0));
        assert!(r.is_valid(), "{r}");
        assert!(!validate(&pi, &Mode::ssigma(0)).is_valid());
        assert!(matches!(
            induction_rule_proof(&pi1, &pi0, &phi, &x, &Mode::spi(0)),
            Err(PreError::Sequent { .. })
        ));
    }

    #[test]
    fn omega_cascade_shape() {
        let x = Var::new("x");
        let phi = f("(eq (add x 0) x)");
        let proofs: Vec<ProofTree> = (0..2)
            .map(|k| prove_ground_atom(&Term::add(numeral(k), Term::Zero), &numeral(k)).unwrap())
            .collect();
        let t = omega_truncation(&proofs, &Sequent::empty(), &phi, &x).unwrap();
        check_tree(&t, &BTreeSet::new()).unwrap_err();
        let open: Vec<_> = t.nodes().into_iter().filter(|n| n.step == Step::Open).collect();
        assert_eq!(open.len(), 1);
        assert_eq!(open[0].sequent, [f("(eq (add (s (s x)) 0) (s (s x)))")].into_iter().collect());
        let t0 = omega_truncation(&[], &Sequent::empty(), &phi, &x).unwrap();
        assert_eq!(t0.step, Step::Open);
        let side: Sequent = [f("(eq x 0)")].into_iter().collect();
        assert!(omega_truncation(&[], &side, &phi, &x).is_err());
    }

    #[test]
    fn ground_atoms() {
        let none = BTreeSet::new();
        for (t, u) in [
            ("(add (s 0) (s 0))", "(s (s 0))"),
            ("0", "0"),
            ("(s 0)", "0"),
            ("0", "(s 0)"),
            ("(mul 2 3)", "(add 3 3)"),
            ("(mul 2 3)", "(add 3 4)"),
        ] {
            let (t, u) = (crate::syntax::parse_term(t).unwrap(), crate::syntax::parse_term(u).unwrap());
            let p = prove_ground_atom(&t, &u).unwrap();
            check_tree(&p, &none).unwrap_or_else(|e| panic!("{t} {u}: {e:?}"));
        }
    }

    #[test]
    fn two_loops() {
        let x = Var::new("x");
        let pi = two_loop_example(&f("(all y (eq (add x y) (add y x)))"), &f("(all y (eq (mul x y) (mul y x)))"), &x, 0).unwrap();
        let r = validate(&pi, &Mode::sn(0));
        assert!(r.is_valid(), "{r}");
        assert!(pi.back_links().len() >= 2);
    }
}
