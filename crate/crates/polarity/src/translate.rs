//! The eight formula translations from classical into intuitionistic logic:
//! four historical ones and the two polarized pairs, plus the sequent-level
//! lifting used by the proof transformations.

use std::fmt;
use std::str::FromStr;

use crate::formula::Formula;
use crate::proof::Sequent;

/// A translation scheme. The polarized schemes come in mutually recursive
/// pairs: `KPos`/`KNeg` and `GGPos`/`GGNeg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Kolmogorov,
    GodelGentzen,
    Kuroda,
    Krivine,
    KPos,
    KNeg,
    GGPos,
    GGNeg,
}

impl Scheme {
    pub const ALL: [Scheme; 8] = [
        Scheme::Kolmogorov,
        Scheme::GodelGentzen,
        Scheme::Kuroda,
        Scheme::Krivine,
        Scheme::KPos,
        Scheme::KNeg,
        Scheme::GGPos,
        Scheme::GGNeg,
    ];

    /// The four schemes that have a single intuitionistic goal form.
    pub const GOAL_SCHEMES: [Scheme; 4] = [
        Scheme::Kolmogorov,
        Scheme::GodelGentzen,
        Scheme::Kuroda,
        Scheme::Krivine,
    ];

    /// CLI name of the scheme.
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Kolmogorov => "ko",
            Scheme::GodelGentzen => "gg",
            Scheme::Kuroda => "ku",
            Scheme::Krivine => "kr",
            Scheme::KPos => "k+",
            Scheme::KNeg => "k-",
            Scheme::GGPos => "p",
            Scheme::GGNeg => "n",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownScheme(pub String);

impl fmt::Display for UnknownScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown scheme '{}' (expected ko, gg, ku, kr, k+, k-, p or n)",
            self.0
        )
    }
}

impl std::error::Error for UnknownScheme {}

impl FromStr for Scheme {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> Result<Scheme, UnknownScheme> {
        Ok(match s {
            "ko" => Scheme::Kolmogorov,
            "gg" => Scheme::GodelGentzen,
            "ku" => Scheme::Kuroda,
            "kr" => Scheme::Krivine,
            "k+" => Scheme::KPos,
            "k-" => Scheme::KNeg,
            "p" => Scheme::GGPos,
            "n" => Scheme::GGNeg,
            other => return Err(UnknownScheme(other.to_owned())),
        })
    }
}

fn not(f: Formula) -> Formula {
    Formula::not(f)
}

fn notnot(f: Formula) -> Formula {
    Formula::not(Formula::not(f))
}

/// Applies the translation clauses of `scheme` by structural recursion.
/// No simplification is performed; the output is the definitional image.
pub fn translate(scheme: Scheme, f: &Formula) -> Formula {
    match scheme {
        Scheme::Kolmogorov => kolmogorov(f),
        Scheme::GodelGentzen => godel_gentzen(f),
        Scheme::Kuroda => kuroda(f),
        Scheme::Krivine => krivine(f),
        Scheme::KPos => k_pos(f),
        Scheme::KNeg => k_neg(f),
        Scheme::GGPos => gg_pos(f),
        Scheme::GGNeg => gg_neg(f),
    }
}

fn kolmogorov(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_, _) => notnot(f.clone()),
        Formula::And(a, b) => notnot(Formula::and(kolmogorov(a), kolmogorov(b))),
        Formula::Or(a, b) => notnot(Formula::or(kolmogorov(a), kolmogorov(b))),
        Formula::Implies(a, b) => notnot(Formula::implies(kolmogorov(a), kolmogorov(b))),
        Formula::Not(a) => notnot(not(kolmogorov(a))),
        Formula::Forall(x, a) => notnot(Formula::Forall(x.clone(), Box::new(kolmogorov(a)))),
        Formula::Exists(x, a) => notnot(Formula::Exists(x.clone(), Box::new(kolmogorov(a)))),
    }
}

fn godel_gentzen(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_, _) => notnot(f.clone()),
        Formula::And(a, b) => Formula::and(godel_gentzen(a), godel_gentzen(b)),
        Formula::Or(a, b) => not(Formula::and(not(godel_gentzen(a)), not(godel_gentzen(b)))),
        Formula::Implies(a, b) => Formula::implies(godel_gentzen(a), godel_gentzen(b)),
        Formula::Not(a) => not(godel_gentzen(a)),
        Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(godel_gentzen(a))),
        Formula::Exists(x, a) => not(Formula::Forall(x.clone(), Box::new(not(godel_gentzen(a))))),
    }
}

fn kuroda(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_, _) => f.clone(),
        Formula::And(a, b) => Formula::and(kuroda(a), kuroda(b)),
        Formula::Or(a, b) => Formula::or(kuroda(a), kuroda(b)),
        Formula::Implies(a, b) => Formula::implies(kuroda(a), kuroda(b)),
        Formula::Not(a) => not(kuroda(a)),
        Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(notnot(kuroda(a)))),
        Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(kuroda(a))),
    }
}

fn krivine(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_, _) => not(f.clone()),
        Formula::And(a, b) => Formula::or(krivine(a), krivine(b)),
        Formula::Or(a, b) => Formula::and(krivine(a), krivine(b)),
        Formula::Implies(a, b) => Formula::and(not(krivine(a)), krivine(b)),
        Formula::Not(a) => not(krivine(a)),
        // The universal clause reads as the existential of the translated
        // body; it is the De Morgan dual under the negated interpretation.
        Formula::Forall(x, a) => Formula::Exists(x.clone(), Box::new(krivine(a))),
        Formula::Exists(x, a) => not(Formula::Exists(x.clone(), Box::new(not(krivine(a))))),
    }
}

fn k_pos(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_, _) => f.clone(),
        Formula::And(a, b) => Formula::and(k_pos(a), k_pos(b)),
        Formula::Or(a, b) => Formula::or(k_pos(a), k_pos(b)),
        Formula::Implies(a, b) => Formula::implies(notnot(k_neg(a)), k_pos(b)),
        Formula::Not(a) => not(k_neg(a)),
        Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(k_pos(a))),
        Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(k_pos(a))),
    }
}

fn k_neg(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_, _) => f.clone(),
        Formula::And(a, b) => Formula::and(notnot(k_neg(a)), notnot(k_neg(b))),
        Formula::Or(a, b) => Formula::or(notnot(k_neg(a)), notnot(k_neg(b))),
        Formula::Implies(a, b) => Formula::implies(k_pos(a), notnot(k_neg(b))),
        Formula::Not(a) => not(k_pos(a)),
        Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(notnot(k_neg(a)))),
        Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(notnot(k_neg(a)))),
    }
}

fn gg_pos(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_, _) => f.clone(),
        Formula::And(a, b) => Formula::and(gg_pos(a), gg_pos(b)),
        Formula::Or(a, b) => Formula::or(gg_pos(a), gg_pos(b)),
        Formula::Implies(a, b) => Formula::implies(gg_neg(a), gg_pos(b)),
        Formula::Not(a) => not(gg_neg(a)),
        Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(gg_pos(a))),
        Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(gg_pos(a))),
    }
}

fn gg_neg(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_, _) => notnot(f.clone()),
        Formula::And(a, b) => Formula::and(gg_neg(a), gg_neg(b)),
        Formula::Or(a, b) => not(Formula::and(not(gg_neg(a)), not(gg_neg(b)))),
        Formula::Implies(a, b) => Formula::implies(gg_pos(a), gg_neg(b)),
        Formula::Not(a) => not(gg_pos(a)),
        Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(gg_neg(a))),
        Formula::Exists(x, a) => not(Formula::Forall(x.clone(), Box::new(not(gg_neg(a))))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoGoalForm(pub Scheme);

impl fmt::Display for NoGoalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scheme '{}' has no single-goal form", self.0)
    }
}

impl std::error::Error for NoGoalForm {}

/// The intuitionistic goal equiprovable with classical provability of `f`:
/// `f^Ko`, `f^gg`, `~~f^Ku` or `~f^Kr` depending on the scheme.
pub fn goal_wrapper(scheme: Scheme, f: &Formula) -> Result<Formula, NoGoalForm> {
    match scheme {
        Scheme::Kolmogorov => Ok(kolmogorov(f)),
        Scheme::GodelGentzen => Ok(godel_gentzen(f)),
        Scheme::Kuroda => Ok(notnot(kuroda(f))),
        Scheme::Krivine => Ok(not(krivine(f))),
        other => Err(NoGoalForm(other)),
    }
}

/// Direction of a sequent-level lifting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftDirection {
    KolmogorovPolarized,
    GgPolarized,
}

/// A lifted sequent. For intuitionistic targets the right side holds at
/// most one formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslatedSequent {
    pub left: Vec<Formula>,
    pub right: Vec<Formula>,
}

impl TranslatedSequent {
    pub fn as_sequent(&self) -> Sequent {
        Sequent::new(self.left.clone(), self.right.clone())
    }
}

/// Lifts a classical sequent into its intuitionistic image.
///
/// Kolmogorov-polarized: hypotheses map through the positive translation,
/// right formulas move left as `~(D^K-)`, and the optional `stoup` formula
/// becomes the single right-side goal `D^K-`.
///
/// Gg-polarized: hypotheses map through `p`, right formulas move left as
/// the antinegation of their `n` image, and the stoup becomes `A^n`.
pub fn lift_sequent(
    direction: LiftDirection,
    seq: &Sequent,
    stoup: Option<&Formula>,
) -> TranslatedSequent {
    let mut left = Vec::with_capacity(seq.left.len() + seq.right.len());
    match direction {
        LiftDirection::KolmogorovPolarized => {
            for g in &seq.left {
                left.push(k_pos(g));
            }
            for d in &seq.right {
                left.push(not(k_neg(d)));
            }
            TranslatedSequent {
                left,
                right: stoup.map(k_neg).into_iter().collect(),
            }
        }
        LiftDirection::GgPolarized => {
            for g in &seq.left {
                left.push(gg_pos(g));
            }
            for d in &seq.right {
                left.push(gg_neg(d).antinegate());
            }
            TranslatedSequent {
                left,
                right: stoup.map(gg_neg).into_iter().collect(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;

    fn t(scheme: Scheme, input: &str) -> String {
        translate(scheme, &parse_formula(input).unwrap()).to_string()
    }

    #[test]
    fn kolmogorov_clauses() {
        assert_eq!(t(Scheme::Kolmogorov, "A | B"), "~~(~~A | ~~B)");
        assert_eq!(t(Scheme::Kolmogorov, "~A"), "~~~~~A");
        assert_eq!(
            t(Scheme::Kolmogorov, "forall x. P(x)"),
            "~~(forall x. ~~P(x))"
        );
    }

    #[test]
    fn godel_gentzen_clauses() {
        assert_eq!(t(Scheme::GodelGentzen, "A | B"), "~(~~~A & ~~~B)");
        assert_eq!(t(Scheme::GodelGentzen, "A & B"), "~~A & ~~B");
        assert_eq!(
            t(Scheme::GodelGentzen, "exists x. P(x)"),
            "~(forall x. ~~~P(x))"
        );
    }

    #[test]
    fn kuroda_clauses() {
        assert_eq!(t(Scheme::Kuroda, "forall x. P(x)"), "forall x. ~~P(x)");
        assert_eq!(t(Scheme::Kuroda, "A & B -> A | B"), "A & B -> A | B");
    }

    #[test]
    fn krivine_clauses() {
        assert_eq!(t(Scheme::Krivine, "A & B"), "~A | ~B");
        assert_eq!(t(Scheme::Krivine, "A | B"), "~A & ~B");
        assert_eq!(t(Scheme::Krivine, "A -> B"), "~~A & ~B");
        assert_eq!(t(Scheme::Krivine, "forall x. P(x)"), "exists x. ~P(x)");
    }

    #[test]
    fn polarized_kolmogorov_clauses() {
        assert_eq!(t(Scheme::KPos, "A | B"), "A | B");
        assert_eq!(t(Scheme::KNeg, "exists x. P(x)"), "exists x. ~~P(x)");
        assert_eq!(t(Scheme::KPos, "A -> B"), "~~A -> B");
        assert_eq!(t(Scheme::KNeg, "A -> B"), "A -> ~~B");
    }

    #[test]
    fn polarized_gg_clauses() {
        assert_eq!(t(Scheme::GGPos, "P"), "P");
        assert_eq!(t(Scheme::GGNeg, "A | B"), "~(~~~A & ~~~B)");
        assert_eq!(t(Scheme::GGPos, "A -> B"), "~~A -> B");
        assert_eq!(t(Scheme::GGNeg, "exists x. P(x)"), "~(forall x. ~~~P(x))");
    }

    #[test]
    fn goal_wrappers() {
        let p = parse_formula("P").unwrap();
        assert_eq!(goal_wrapper(Scheme::Kuroda, &p).unwrap().to_string(), "~~P");
        assert_eq!(goal_wrapper(Scheme::GodelGentzen, &p).unwrap().to_string(), "~~P");
        assert_eq!(goal_wrapper(Scheme::Krivine, &p).unwrap().to_string(), "~~P");
        assert!(goal_wrapper(Scheme::KPos, &p).is_err());
    }

    #[test]
    fn lift_examples() {
        // P |- with stoup P lifts to P |- ~~P under the gg polarization.
        let p = parse_formula("P").unwrap();
        let lifted = lift_sequent(
            LiftDirection::GgPolarized,
            &Sequent::new(vec![p.clone()], vec![]),
            Some(&p),
        );
        assert_eq!(lifted.left, vec![p.clone()]);
        assert_eq!(lifted.right[0].to_string(), "~~P");

        // |- Q v R with no stoup: the antinegation exposes the conjunction.
        let qr = parse_formula("Q | R").unwrap();
        let lifted = lift_sequent(
            LiftDirection::GgPolarized,
            &Sequent::new(vec![], vec![qr]),
            None,
        );
        assert!(lifted.right.is_empty());
        assert_eq!(lifted.left[0].to_string(), "~~~Q & ~~~R");

        // |- P lifts to ~P |- under the Kolmogorov polarization.
        let lifted = lift_sequent(
            LiftDirection::KolmogorovPolarized,
            &Sequent::new(vec![], vec![p.clone()]),
            None,
        );
        assert!(lifted.right.is_empty());
        assert_eq!(lifted.left[0].to_string(), "~P");
    }
}
