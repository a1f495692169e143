//! Seeded random generators for terms, formulas and rule instances.
//!
//! All generators are deterministic given the seed, so failures found by the
//! property tests and the acceptance suite can be replayed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{Rule, Sequent};
use crate::syntax::{numeral, Formula, Term, Var};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const FREE: &[&str] = &["x", "u"];
const BOUND: &[&str] = &["y", "z", "w"];

fn pick_var(rng: &mut impl Rng, scope: &[Var]) -> Var {
    let free_count = FREE.len();
    let i = rng.gen_range(0..free_count + scope.len());
    if i < free_count {
        Var::new(FREE[i])
    } else {
        scope[i - free_count].clone()
    }
}

pub fn random_term(rng: &mut impl Rng, depth: usize, scope: &[Var]) -> Term {
    let choice = if depth == 0 {
        rng.gen_range(0..3)
    } else {
        rng.gen_range(0..6)
    };
    match choice {
        0 => Term::Zero,
        1 => numeral(rng.gen_range(1..3)),
        2 => Term::Var(pick_var(rng, scope)),
        3 => Term::succ(random_term(rng, depth - 1, scope)),
        4 => Term::add(
            random_term(rng, depth - 1, scope),
            random_term(rng, depth - 1, scope),
        ),
        _ => Term::mul(
            random_term(rng, depth - 1, scope),
            random_term(rng, depth - 1, scope),
        ),
    }
}

fn random_atom(rng: &mut impl Rng, scope: &[Var]) -> Formula {
    let t = random_term(rng, 2, scope);
    let u = random_term(rng, 2, scope);
    match rng.gen_range(0..4) {
        0 => Formula::Eq(t, u),
        1 => Formula::Neq(t, u),
        2 => Formula::Le(t, u),
        _ => Formula::Nle(t, u),
    }
}

/// A bound for a bounded quantifier on `y`: a term over the scope without `y`.
fn random_bound(rng: &mut impl Rng, y: &Var, scope: &[Var]) -> Term {
    let t = random_term(rng, 1, scope);
    if t.contains_var(y) {
        Term::var(FREE[0])
    } else {
        t
    }
}

fn random_formula_in(rng: &mut impl Rng, depth: usize, scope: &mut Vec<Var>) -> Formula {
    if depth == 0 {
        return random_atom(rng, scope);
    }
    match rng.gen_range(0..8) {
        0 => random_atom(rng, scope),
        1 => Formula::and(
            random_formula_in(rng, depth - 1, scope),
            random_formula_in(rng, depth - 1, scope),
        ),
        2 => Formula::or(
            random_formula_in(rng, depth - 1, scope),
            random_formula_in(rng, depth - 1, scope),
        ),
        k => {
            let y = Var::new(BOUND.choose(rng).unwrap());
            let bound = random_bound(rng, &y, scope);
            scope.push(y.clone());
            let body = random_formula_in(rng, depth - 1, scope);
            scope.pop();
            match k {
                3 => Formula::all(y, body),
                4 => Formula::ex(y, body),
                5 => Formula::AllLe(y, bound, Box::new(body)),
                6 => Formula::ExLe(y, bound, Box::new(body)),
                _ => Formula::all(y, body),
            }
        }
    }
}

/// An arbitrary formula of depth at most `depth` over every constructor.
pub fn random_formula(seed: u64, depth: usize) -> Formula {
    random_formula_with(&mut rng(seed), depth)
}

pub fn random_formula_with(rng: &mut impl Rng, depth: usize) -> Formula {
    random_formula_in(rng, depth, &mut Vec::new())
}

/// A Δ₀ formula: connectives, atoms, and bounded quantifiers only.
pub fn random_delta0(rng: &mut impl Rng, depth: usize, scope: &mut Vec<Var>) -> Formula {
    if depth == 0 {
        return random_atom(rng, scope);
    }
    match rng.gen_range(0..5) {
        0 => random_atom(rng, scope),
        1 => Formula::and(
            random_delta0(rng, depth - 1, scope),
            random_delta0(rng, depth - 1, scope),
        ),
        2 => Formula::or(
            random_delta0(rng, depth - 1, scope),
            random_delta0(rng, depth - 1, scope),
        ),
        k => {
            let y = Var::new(BOUND.choose(rng).unwrap());
            let bound = random_bound(rng, &y, scope);
            scope.push(y.clone());
            let body = random_delta0(rng, depth - 1, scope);
            scope.pop();
            if k == 3 {
                Formula::AllLe(y, bound, Box::new(body))
            } else {
                Formula::ExLe(y, bound, Box::new(body))
            }
        }
    }
}

/// A formula of depth at most `depth` in Πₙ₊₁ with `x` free: an alternating
/// quantifier prefix of length `n + 1` starting with ∀ over a Δ₀ matrix.
/// The depth budget is shared between prefix and matrix.
pub fn random_pi_formula(rng: &mut impl Rng, n: usize, depth: usize, x: &Var) -> Formula {
    let prefix = (n + 1).min(depth.max(1));
    let mut scope = Vec::new();
    let mut binders = Vec::new();
    for _ in 0..prefix {
        let free: Vec<&&str> = BOUND
            .iter()
            .filter(|b| !binders.iter().any(|v: &Var| v.name() == **b))
            .collect();
        let y = match free.choose(rng) {
            Some(b) => Var::new(b),
            None => Var::new(&format!("y{}", binders.len())),
        };
        binders.push(y.clone());
        scope.push(y);
    }
    let budget = depth.saturating_sub(prefix + 1);
    let mut matrix = random_delta0(rng, budget, &mut scope);
    if !matrix.has_free(x) || rng.gen_bool(0.3) {
        let anchor = Formula::Eq(
            Term::add(Term::Var(x.clone()), random_term(rng, 0, &scope)),
            random_term(rng, 1, &scope),
        );
        let anchor = if anchor.has_free(x) {
            anchor
        } else {
            Formula::Eq(Term::Var(x.clone()), Term::Var(x.clone()))
        };
        matrix = if rng.gen_bool(0.5) {
            Formula::or(matrix, anchor)
        } else {
            Formula::and(anchor, matrix)
        };
    }
    let mut phi = matrix;
    for (i, y) in binders.into_iter().enumerate().rev() {
        phi = if i % 2 == 0 {
            Formula::all(y, phi)
        } else {
            Formula::ex(y, phi)
        };
    }
    phi
}

/// One randomly chosen valid instance of the named rule, as a conclusion
/// together with the rule application. Returns `None` only for unknown names.
pub fn random_rule_instance(rng: &mut impl Rng, name: &str) -> Option<(Sequent, Rule)> {
    let ctx_size = rng.gen_range(0..3);
    let mut ctx: Vec<Formula> = (0..ctx_size)
        .map(|_| random_formula_with(rng, 2))
        .collect();
    let t = |rng: &mut ChaCha8Rng| random_term(rng, 2, &[]);
    let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
    let rule = match name {
        "and" => {
            let p = Formula::and(random_formula_with(&mut r, 2), random_formula_with(&mut r, 2));
            ctx.push(p.clone());
            Rule::And { principal: p }
        }
        "or" => {
            let p = Formula::or(random_formula_with(&mut r, 2), random_formula_with(&mut r, 2));
            ctx.push(p.clone());
            Rule::Or { principal: p }
        }
        "all" => {
            let p = match r.gen_range(0..3) {
                0 => Formula::all(Var::new("y"), random_formula_in(&mut r, 2, &mut vec![Var::new("y")])),
                1 => Formula::AllLe(
                    Var::new("y"),
                    t(&mut r).substitute(&Var::new("y"), &Term::Zero),
                    Box::new(random_formula_in(&mut r, 2, &mut vec![Var::new("y")])),
                ),
                _ => Formula::Nle(t(&mut r), t(&mut r)),
            };
            ctx.push(p.clone());
            let mut avoid = crate::syntax::VarSet::new();
            for f in &ctx {
                avoid.extend(f.all_vars());
            }
            let eigen = crate::syntax::Fresh::new("_e", avoid).next_var();
            Rule::All {
                principal: p,
                eigen,
            }
        }
        "ex" => {
            let p = match r.gen_range(0..3) {
                0 => Formula::ex(Var::new("y"), random_formula_in(&mut r, 2, &mut vec![Var::new("y")])),
                1 => Formula::ExLe(
                    Var::new("y"),
                    t(&mut r).substitute(&Var::new("y"), &Term::Zero),
                    Box::new(random_formula_in(&mut r, 2, &mut vec![Var::new("y")])),
                ),
                _ => Formula::Le(t(&mut r), t(&mut r)),
            };
            ctx.push(p.clone());
            // Closed witnesses can never be captured.
            let witness = if r.gen_bool(0.5) {
                numeral(r.gen_range(0..4))
            } else {
                Term::var(FREE[r.gen_range(0..FREE.len())])
            };
            let witness = match p.clone() {
                Formula::Ex(y, body) | Formula::ExLe(y, _, body)
                    if witness_captured(&body, &y, &witness) =>
                {
                    numeral(1)
                }
                _ => witness,
            };
            Rule::Ex {
                principal: p,
                witness,
            }
        }
        "ref" => Rule::Ref { t: t(&mut r) },
        "rep" => {
            let y = Var::new("y");
            let t0 = t(&mut r);
            let t1 = t(&mut r);
            let u0 = random_term(&mut r, 2, std::slice::from_ref(&y));
            let u1 = random_term(&mut r, 2, std::slice::from_ref(&y));
            ctx.push(Formula::Neq(t0.clone(), t1.clone()));
            ctx.push(Formula::Neq(u0.substitute(&y, &t0), u1.substitute(&y, &t0)));
            Rule::Rep { t0, t1, u0, u1, y }
        }
        "add0" => Rule::Add0 { t: t(&mut r) },
        "adds" => Rule::AddS {
            t: t(&mut r),
            u: t(&mut r),
        },
        "mult0" => Rule::Mult0 { t: t(&mut r) },
        "mults" => Rule::MultS {
            t: t(&mut r),
            u: t(&mut r),
        },
        "pred" => {
            let t0 = t(&mut r);
            let t1 = t(&mut r);
            ctx.push(Formula::Neq(Term::succ(t0.clone()), Term::succ(t1.clone())));
            Rule::Pred { t0, t1 }
        }
        "case" => {
            let y = Var::new(FREE[r.gen_range(0..FREE.len())]);
            let scope = [y.clone()];
            let f = match r.gen_range(0..3) {
                0 => Formula::Eq(random_term(&mut r, 2, &scope), Term::Var(y.clone())),
                1 => Formula::all(
                    Var::new("z"),
                    Formula::Neq(Term::add(Term::Var(y.clone()), Term::var("z")), random_term(&mut r, 1, &scope)),
                ),
                _ => Formula::Le(Term::Var(y.clone()), random_term(&mut r, 2, &scope)),
            };
            ctx.push(f);
            Rule::Case { var: y }
        }
        "weak" => {
            let delta: Vec<Formula> = (0..r.gen_range(1..3))
                .map(|_| random_formula_with(&mut r, 2))
                .collect();
            ctx.extend(delta.iter().cloned());
            Rule::Weak {
                delta: Sequent::new(delta),
            }
        }
        "cut" => Rule::Cut {
            formula: random_formula_with(&mut r, 2),
        },
        _ => return None,
    };
    Some((Sequent::new(ctx), rule))
}

fn witness_captured(body: &Formula, y: &Var, w: &Term) -> bool {
    body.substitute(y, w).is_err()
}

/// Rule names with a generator in [`random_rule_instance`].
pub const RULE_NAMES: &[&str] = &[
    "and", "or", "all", "ex", "ref", "rep", "add0", "adds", "mult0", "mults", "pred", "case",
    "weak", "cut",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{is_in, Kind};

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_formula(7, 4), random_formula(7, 4));
    }

    #[test]
    fn pi_formulas_land_in_their_class() {
        let x = Var::new("x");
        let mut r = rng(3);
        for n in 0..3 {
            for _ in 0..50 {
                let phi = random_pi_formula(&mut r, n, 3 + n, &x);
                assert!(is_in(&phi, Kind::Pi, n + 1), "{phi}");
                assert!(phi.has_free(&x), "{phi}");
                assert!(phi.depth() <= 3 + n, "{phi}");
            }
        }
    }
}
