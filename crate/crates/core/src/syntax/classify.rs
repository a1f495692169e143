//! Arithmetical-hierarchy classification on the sugared syntax.
//!
//! `≤`, `≰` and bounded quantifiers over Δ₀ bodies count as Δ₀. A bounded
//! quantifier over a non-Δ₀ body is read as the corresponding unbounded one.

use std::fmt;

use super::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Delta0,
    Sigma,
    Pi,
}

/// A minimal class; `level` is 0 exactly for `Delta0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ComplexityClass {
    pub kind: Kind,
    pub level: usize,
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Delta0 => write!(f, "Delta0"),
            Kind::Sigma => write!(f, "Sigma{}", self.level),
            Kind::Pi => write!(f, "Pi{}", self.level),
        }
    }
}

/// Least `s` and `p` with the formula in Σ_s and in Π_p.
/// Both are 0 for Δ₀ formulas; otherwise they differ by at most one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassProfile {
    pub sigma: usize,
    pub pi: usize,
}

impl ClassProfile {
    const DELTA0: ClassProfile = ClassProfile { sigma: 0, pi: 0 };

    fn join(self, other: ClassProfile) -> ClassProfile {
        ClassProfile {
            sigma: self.sigma.max(other.sigma),
            pi: self.pi.max(other.pi),
        }
    }

    fn exists(self) -> ClassProfile {
        let sigma = self.sigma.max(1);
        ClassProfile {
            sigma,
            pi: sigma + 1,
        }
    }

    fn forall(self) -> ClassProfile {
        let pi = self.pi.max(1);
        ClassProfile { sigma: pi + 1, pi }
    }
}

pub fn profile(phi: &Formula) -> ClassProfile {
    match phi {
        Formula::Eq(..) | Formula::Neq(..) | Formula::Le(..) | Formula::Nle(..) => {
            ClassProfile::DELTA0
        }
        Formula::And(a, b) | Formula::Or(a, b) => profile(a).join(profile(b)),
        Formula::Ex(_, a) => profile(a).exists(),
        Formula::All(_, a) => profile(a).forall(),
        Formula::ExLe(_, _, a) => {
            let p = profile(a);
            if p == ClassProfile::DELTA0 {
                p
            } else {
                p.exists()
            }
        }
        Formula::AllLe(_, _, a) => {
            let p = profile(a);
            if p == ClassProfile::DELTA0 {
                p
            } else {
                p.forall()
            }
        }
    }
}

/// The minimal class. When a formula sits in Σ_k and Π_k for the same least
/// `k > 0` (only possible through mixed connectives), Sigma is reported.
pub fn classify(phi: &Formula) -> ComplexityClass {
    let p = profile(phi);
    if p.sigma == 0 {
        ComplexityClass {
            kind: Kind::Delta0,
            level: 0,
        }
    } else if p.pi < p.sigma {
        ComplexityClass {
            kind: Kind::Pi,
            level: p.pi,
        }
    } else {
        ComplexityClass {
            kind: Kind::Sigma,
            level: p.sigma,
        }
    }
}

/// Membership in Σₙ, Πₙ, or (for `Kind::Delta0`) Δ₀ regardless of `n`.
pub fn is_in(phi: &Formula, kind: Kind, n: usize) -> bool {
    let p = profile(phi);
    match kind {
        Kind::Delta0 => p.sigma == 0,
        Kind::Sigma => p.sigma <= n,
        Kind::Pi => p.pi <= n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use proptest::prelude::*;

    fn class(text: &str) -> ComplexityClass {
        classify(&parse_formula(text).unwrap())
    }

    #[test]
    fn worked_examples() {
        assert_eq!(class("(eq 0 0)").kind, Kind::Delta0);
        assert_eq!(
            class("(ex z (eq (add z x) y))"),
            ComplexityClass {
                kind: Kind::Sigma,
                level: 1
            }
        );
        assert_eq!(
            class("(all x (ex y (eq (mul x x) y)))"),
            ComplexityClass {
                kind: Kind::Pi,
                level: 2
            }
        );
    }

    #[test]
    fn le_is_delta0_but_its_expansion_is_sigma1() {
        let le = parse_formula("(le x y)").unwrap();
        assert_eq!(classify(&le).kind, Kind::Delta0);
        assert_eq!(
            classify(&le.desugar()),
            ComplexityClass {
                kind: Kind::Sigma,
                level: 1
            }
        );
        assert_eq!(classify(&le.desugar().resugar()).kind, Kind::Delta0);
    }

    #[test]
    fn bounded_over_unbounded_reads_as_unbounded() {
        assert_eq!(
            class("(all<= y x (ex z (eq z y)))"),
            ComplexityClass {
                kind: Kind::Pi,
                level: 2
            }
        );
        assert_eq!(class("(all<= y x (ex<= z y (eq z y)))").kind, Kind::Delta0);
    }

    #[test]
    fn mixed_connective_tie_reports_sigma() {
        let c = class("(or (ex y (eq y x)) (all y (eq y x)))");
        assert_eq!(
            c,
            ComplexityClass {
                kind: Kind::Sigma,
                level: 2
            }
        );
    }

    proptest! {
        #[test]
        fn membership_is_monotone(seed in any::<u64>()) {
            let phi = crate::gen::random_formula(seed, 4);
            for n in 0..4 {
                if is_in(&phi, Kind::Sigma, n) {
                    prop_assert!(is_in(&phi, Kind::Sigma, n + 1));
                    prop_assert!(is_in(&phi, Kind::Pi, n + 1));
                }
                if is_in(&phi, Kind::Pi, n) {
                    prop_assert!(is_in(&phi, Kind::Pi, n + 1));
                    prop_assert!(is_in(&phi, Kind::Sigma, n + 1));
                }
            }
            let both0 = is_in(&phi, Kind::Sigma, 0) && is_in(&phi, Kind::Pi, 0);
            prop_assert_eq!(both0, classify(&phi).kind == Kind::Delta0);
        }

        #[test]
        fn negation_swaps_sigma_and_pi(seed in any::<u64>()) {
            let phi = crate::gen::random_formula(seed, 4);
            let p = profile(&phi);
            let q = profile(&phi.negate());
            prop_assert_eq!((p.sigma, p.pi), (q.pi, q.sigma));
        }

        #[test]
        fn classification_survives_desugar_resugar(seed in any::<u64>()) {
            let phi = crate::gen::random_formula(seed, 4);
            prop_assert_eq!(classify(&phi.resugar()), classify(&phi.desugar().resugar()));
        }
    }
}
