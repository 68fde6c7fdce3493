//! Proof checkers for the three cut-free calculi: classical LK,
//! intuitionistic LJ, and the focused classical calculus LKF.
//!
//! Each checker walks the tree once and verifies, per node, that the rule
//! instantiates its schema exactly: contexts must match between conclusion
//! and premises after removing/adding the schema formulas (as multisets up
//! to alpha-equivalence), eigensymbols must be fresh with respect to the
//! node's conclusion, and witnesses must substitute correctly.

use crate::formula::{Formula, Term};
use crate::proof::{
    multiset_eq, without, ActiveHandle, CheckReport, FocusedSequent, ProofNode,
    RuleId, Sequent,
};

/// Checks a proof against the classical sequent calculus.
pub fn check_lk(p: &ProofNode) -> CheckReport {
    let mut path = Vec::new();
    match check_node_lk(p, &mut path) {
        Ok(()) => CheckReport::ok(),
        Err(reason) => CheckReport::fail(path, reason),
    }
}

/// Checks a proof against the intuitionistic sequent calculus.
pub fn check_lj(p: &ProofNode) -> CheckReport {
    let mut path = Vec::new();
    match check_node_lj(p, &mut path) {
        Ok(()) => CheckReport::ok(),
        Err(reason) => CheckReport::fail(path, reason),
    }
}

/// Checks a proof against the focused classical sequent calculus.
pub fn check_lkf(p: &ProofNode) -> CheckReport {
    let mut path = Vec::new();
    match check_node_lkf(p, &mut path) {
        Ok(()) => CheckReport::ok(),
        Err(reason) => CheckReport::fail(path, reason),
    }
}

/// A right-side formula can leave the stoup iff it is atomic, existential,
/// disjunctive or negated.
pub fn releasable(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Atom(_, _) | Formula::Exists(_, _) | Formula::Or(_, _) | Formula::Not(_)
    )
}

type Check = Result<(), String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn active_of(p: &ProofNode) -> Result<ActiveHandle, String> {
    p.active
        .ok_or_else(|| format!("rule {} requires an active-formula handle", p.rule))
}

fn left_active<'a>(s: &'a [Formula], p: &ProofNode) -> Result<(usize, &'a Formula), String> {
    match active_of(p)? {
        ActiveHandle::Left(i) => s
            .get(i)
            .map(|f| (i, f))
            .ok_or_else(|| format!("active left index {} out of range", i)),
        other => fail(format!("rule {} must act on the left, got {:?}", p.rule, other)),
    }
}

fn right_active<'a>(s: &'a [Formula], p: &ProofNode) -> Result<(usize, &'a Formula), String> {
    match active_of(p)? {
        ActiveHandle::Right(i) => s
            .get(i)
            .map(|f| (i, f))
            .ok_or_else(|| format!("active right index {} out of range", i)),
        other => fail(format!("rule {} must act on the right, got {:?}", p.rule, other)),
    }
}

fn expect_premises(p: &ProofNode) -> Check {
    if p.premises.len() != p.rule.arity() {
        return fail(format!(
            "rule {} expects {} premise(s), found {}",
            p.rule,
            p.rule.arity(),
            p.premises.len()
        ));
    }
    Ok(())
}

fn plain<'a>(p: &'a ProofNode) -> Result<&'a Sequent, String> {
    p.conclusion
        .as_plain()
        .ok_or_else(|| "conclusion is a focused sequent in an unfocused calculus".to_owned())
}

fn focused<'a>(p: &'a ProofNode) -> Result<&'a FocusedSequent, String> {
    p.conclusion
        .as_focused()
        .ok_or_else(|| "conclusion is a plain sequent in the focused calculus".to_owned())
}

fn check_multisets(premise: &Sequent, left: &[Formula], right: &[Formula], what: &str) -> Check {
    if !multiset_eq(&premise.left, left) {
        return fail(format!("{}: left context mismatch", what));
    }
    if !multiset_eq(&premise.right, right) {
        return fail(format!("{}: right context mismatch", what));
    }
    Ok(())
}

fn with_extra(base: &[Formula], extra: &[&Formula]) -> Vec<Formula> {
    let mut out = base.to_vec();
    out.extend(extra.iter().map(|f| (*f).clone()));
    out
}

fn eigen_of(p: &ProofNode) -> Result<&str, String> {
    p.eigen
        .as_deref()
        .ok_or_else(|| format!("rule {} requires an eigensymbol", p.rule))
}

fn witness_of(p: &ProofNode) -> Result<&Term, String> {
    p.witness
        .as_ref()
        .ok_or_else(|| format!("rule {} requires a witness term", p.rule))
}

fn check_eigen_fresh(c: &str, p: &ProofNode) -> Check {
    if p.conclusion.symbols().contains(c) {
        return fail(format!(
            "eigenvariable violation: '{}' occurs in the conclusion sequent",
            c
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Classical sequent calculus.

fn check_node_lk(p: &ProofNode, path: &mut Vec<usize>) -> Result<(), String> {
    check_rule_lk(p).map_err(|e| format!("{} ({}): {}", p.rule, p.conclusion, e))?;
    for (i, premise) in p.premises.iter().enumerate() {
        path.push(i);
        check_node_lk(premise, path)?;
        path.pop();
    }
    Ok(())
}

fn check_rule_lk(p: &ProofNode) -> Check {
    let concl = plain(p)?;
    expect_premises(p)?;
    let prem = |i: usize| -> Result<&Sequent, String> { plain(&p.premises[i]) };
    match p.rule {
        RuleId::Ax => {
            let ok = concl
                .left
                .iter()
                .any(|a| concl.right.iter().any(|b| a.alpha_eq(b)));
            if !ok {
                return fail("axiom: no formula occurs on both sides");
            }
            Ok(())
        }
        RuleId::AndL => {
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::And(a, b) = f else {
                return fail("active formula is not a conjunction");
            };
            check_multisets(
                prem(0)?,
                &with_extra(&without(&concl.left, i), &[a, b]),
                &concl.right,
                "premise",
            )
        }
        RuleId::AndR => {
            let (i, f) = right_active(&concl.right, p)?;
            let Formula::And(a, b) = f else {
                return fail("active formula is not a conjunction");
            };
            let rest = without(&concl.right, i);
            check_multisets(prem(0)?, &concl.left, &with_extra(&rest, &[a]), "first premise")?;
            check_multisets(prem(1)?, &concl.left, &with_extra(&rest, &[b]), "second premise")
        }
        RuleId::OrL => {
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Or(a, b) = f else {
                return fail("active formula is not a disjunction");
            };
            let rest = without(&concl.left, i);
            check_multisets(prem(0)?, &with_extra(&rest, &[a]), &concl.right, "first premise")?;
            check_multisets(prem(1)?, &with_extra(&rest, &[b]), &concl.right, "second premise")
        }
        RuleId::OrR => {
            let (i, f) = right_active(&concl.right, p)?;
            let Formula::Or(a, b) = f else {
                return fail("active formula is not a disjunction");
            };
            check_multisets(
                prem(0)?,
                &concl.left,
                &with_extra(&without(&concl.right, i), &[a, b]),
                "premise",
            )
        }
        RuleId::OrR1 | RuleId::OrR2 => fail("the additive disjunction rules belong to LJ only"),
        RuleId::ImpL => {
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Implies(a, b) = f else {
                return fail("active formula is not an implication");
            };
            let rest = without(&concl.left, i);
            check_multisets(prem(0)?, &rest, &with_extra(&concl.right, &[a]), "first premise")?;
            check_multisets(prem(1)?, &with_extra(&rest, &[b]), &concl.right, "second premise")
        }
        RuleId::ImpR => {
            let (i, f) = right_active(&concl.right, p)?;
            let Formula::Implies(a, b) = f else {
                return fail("active formula is not an implication");
            };
            check_multisets(
                prem(0)?,
                &with_extra(&concl.left, &[a]),
                &with_extra(&without(&concl.right, i), &[b]),
                "premise",
            )
        }
        RuleId::NotL => {
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Not(a) = f else {
                return fail("active formula is not a negation");
            };
            check_multisets(
                prem(0)?,
                &without(&concl.left, i),
                &with_extra(&concl.right, &[a]),
                "premise",
            )
        }
        RuleId::NotR => {
            let (i, f) = right_active(&concl.right, p)?;
            let Formula::Not(a) = f else {
                return fail("active formula is not a negation");
            };
            check_multisets(
                prem(0)?,
                &with_extra(&concl.left, &[a]),
                &without(&concl.right, i),
                "premise",
            )
        }
        RuleId::ExistsL => {
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Exists(x, body) = f else {
                return fail("active formula is not existential");
            };
            let c = eigen_of(p)?;
            check_eigen_fresh(c, p)?;
            let inst = body.substitute(x, &Term::Const(c.to_owned()));
            check_multisets(
                prem(0)?,
                &with_extra(&without(&concl.left, i), &[&inst]),
                &concl.right,
                "premise",
            )
        }
        RuleId::ExistsR => {
            let (i, f) = right_active(&concl.right, p)?;
            let Formula::Exists(x, body) = f else {
                return fail("active formula is not existential");
            };
            let t = witness_of(p)?;
            let inst = body.substitute(x, t);
            check_multisets(
                prem(0)?,
                &concl.left,
                &with_extra(&without(&concl.right, i), &[&inst]),
                "premise",
            )
        }
        RuleId::ForallL => {
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Forall(x, body) = f else {
                return fail("active formula is not universal");
            };
            let t = witness_of(p)?;
            let inst = body.substitute(x, t);
            check_multisets(
                prem(0)?,
                &with_extra(&without(&concl.left, i), &[&inst]),
                &concl.right,
                "premise",
            )
        }
        RuleId::ForallR => {
            let (i, f) = right_active(&concl.right, p)?;
            let Formula::Forall(x, body) = f else {
                return fail("active formula is not universal");
            };
            let c = eigen_of(p)?;
            check_eigen_fresh(c, p)?;
            let inst = body.substitute(x, &Term::Const(c.to_owned()));
            check_multisets(
                prem(0)?,
                &concl.left,
                &with_extra(&without(&concl.right, i), &[&inst]),
                "premise",
            )
        }
        RuleId::ContrL => {
            let (_, f) = left_active(&concl.left, p)?;
            check_multisets(prem(0)?, &with_extra(&concl.left, &[f]), &concl.right, "premise")
        }
        RuleId::ContrR => {
            let (_, f) = right_active(&concl.right, p)?;
            check_multisets(prem(0)?, &concl.left, &with_extra(&concl.right, &[f]), "premise")
        }
        RuleId::WeakL => {
            let (i, _) = left_active(&concl.left, p)?;
            check_multisets(prem(0)?, &without(&concl.left, i), &concl.right, "premise")
        }
        RuleId::WeakR => {
            let (i, _) = right_active(&concl.right, p)?;
            check_multisets(prem(0)?, &concl.left, &without(&concl.right, i), "premise")
        }
        RuleId::Focus | RuleId::Release => fail("focus/release belong to the focused calculus"),
    }
}

// ---------------------------------------------------------------------------
// Intuitionistic sequent calculus.

fn check_node_lj(p: &ProofNode, path: &mut Vec<usize>) -> Result<(), String> {
    check_rule_lj(p).map_err(|e| format!("{} ({}): {}", p.rule, p.conclusion, e))?;
    for (i, premise) in p.premises.iter().enumerate() {
        path.push(i);
        check_node_lj(premise, path)?;
        path.pop();
    }
    Ok(())
}

fn check_rule_lj(p: &ProofNode) -> Check {
    let concl = plain(p)?;
    if concl.right.len() > 1 {
        return fail("intuitionistic sequents have at most one right formula");
    }
    expect_premises(p)?;
    let prem = |i: usize| -> Result<&Sequent, String> {
        let s = plain(&p.premises[i])?;
        if s.right.len() > 1 {
            return fail("intuitionistic sequents have at most one right formula");
        }
        Ok(s)
    };
    match p.rule {
        RuleId::Ax => {
            // The right side must be a single formula also present on the left.
            let [goal] = concl.right.as_slice() else {
                return fail("axiom: right side must hold exactly one formula");
            };
            if !concl.left.iter().any(|a| a.alpha_eq(goal)) {
                return fail("axiom: right formula does not occur on the left");
            }
            Ok(())
        }
        RuleId::AndL => {
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::And(a, b) = f else {
                return fail("active formula is not a conjunction");
            };
            check_multisets(
                prem(0)?,
                &with_extra(&without(&concl.left, i), &[a, b]),
                &concl.right,
                "premise",
            )
        }
        RuleId::AndR => {
            let (_, f) = right_active(&concl.right, p)?;
            let Formula::And(a, b) = f else {
                return fail("active formula is not a conjunction");
            };
            check_multisets(prem(0)?, &concl.left, std::slice::from_ref(a), "first premise")?;
            check_multisets(prem(1)?, &concl.left, std::slice::from_ref(b), "second premise")
        }
        RuleId::OrL => {
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Or(a, b) = f else {
                return fail("active formula is not a disjunction");
            };
            let rest = without(&concl.left, i);
            check_multisets(prem(0)?, &with_extra(&rest, &[a]), &concl.right, "first premise")?;
            check_multisets(prem(1)?, &with_extra(&rest, &[b]), &concl.right, "second premise")
        }
        RuleId::OrR => fail("LJ splits the disjunction rule into or_r1/or_r2"),
        RuleId::OrR1 | RuleId::OrR2 => {
            let (_, f) = right_active(&concl.right, p)?;
            let Formula::Or(a, b) = f else {
                return fail("active formula is not a disjunction");
            };
            let kept = if p.rule == RuleId::OrR1 { a } else { b };
            check_multisets(prem(0)?, &concl.left, std::slice::from_ref(kept), "premise")
        }
        RuleId::ImpL => {
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Implies(a, b) = f else {
                return fail("active formula is not an implication");
            };
            let rest = without(&concl.left, i);
            // The first premise proves the antecedent with nothing else on
            // the right.
            check_multisets(prem(0)?, &rest, std::slice::from_ref(a), "first premise")?;
            check_multisets(prem(1)?, &with_extra(&rest, &[b]), &concl.right, "second premise")
        }
        RuleId::ImpR => {
            let (_, f) = right_active(&concl.right, p)?;
            let Formula::Implies(a, b) = f else {
                return fail("active formula is not an implication");
            };
            check_multisets(
                prem(0)?,
                &with_extra(&concl.left, &[a]),
                std::slice::from_ref(b),
                "premise",
            )
        }
        RuleId::NotL => {
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Not(a) = f else {
                return fail("active formula is not a negation");
            };
            check_multisets(
                prem(0)?,
                &without(&concl.left, i),
                std::slice::from_ref(a),
                "premise",
            )
        }
        RuleId::NotR => {
            let (_, f) = right_active(&concl.right, p)?;
            let Formula::Not(a) = f else {
                return fail("active formula is not a negation");
            };
            // The premise has an empty right side.
            check_multisets(prem(0)?, &with_extra(&concl.left, &[a]), &[], "premise")
        }
        RuleId::ExistsL => {
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Exists(x, body) = f else {
                return fail("active formula is not existential");
            };
            let c = eigen_of(p)?;
            check_eigen_fresh(c, p)?;
            let inst = body.substitute(x, &Term::Const(c.to_owned()));
            check_multisets(
                prem(0)?,
                &with_extra(&without(&concl.left, i), &[&inst]),
                &concl.right,
                "premise",
            )
        }
        RuleId::ExistsR => {
            let (_, f) = right_active(&concl.right, p)?;
            let Formula::Exists(x, body) = f else {
                return fail("active formula is not existential");
            };
            let t = witness_of(p)?;
            let inst = body.substitute(x, t);
            check_multisets(prem(0)?, &concl.left, std::slice::from_ref(&inst), "premise")
        }
        RuleId::ForallL => {
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Forall(x, body) = f else {
                return fail("active formula is not universal");
            };
            let t = witness_of(p)?;
            let inst = body.substitute(x, t);
            check_multisets(
                prem(0)?,
                &with_extra(&without(&concl.left, i), &[&inst]),
                &concl.right,
                "premise",
            )
        }
        RuleId::ForallR => {
            let (_, f) = right_active(&concl.right, p)?;
            let Formula::Forall(x, body) = f else {
                return fail("active formula is not universal");
            };
            let c = eigen_of(p)?;
            check_eigen_fresh(c, p)?;
            let inst = body.substitute(x, &Term::Const(c.to_owned()));
            check_multisets(prem(0)?, &concl.left, std::slice::from_ref(&inst), "premise")
        }
        RuleId::ContrL => {
            let (_, f) = left_active(&concl.left, p)?;
            check_multisets(prem(0)?, &with_extra(&concl.left, &[f]), &concl.right, "premise")
        }
        RuleId::ContrR => fail("contr_r does not exist in LJ"),
        RuleId::WeakL => {
            let (i, _) = left_active(&concl.left, p)?;
            check_multisets(prem(0)?, &without(&concl.left, i), &concl.right, "premise")
        }
        RuleId::WeakR => {
            let (_, _) = right_active(&concl.right, p)?;
            // The premise right side is empty, as displayed.
            check_multisets(prem(0)?, &concl.left, &[], "premise")
        }
        RuleId::Focus | RuleId::Release => fail("focus/release belong to the focused calculus"),
    }
}

// ---------------------------------------------------------------------------
// Focused classical sequent calculus.

fn check_node_lkf(p: &ProofNode, path: &mut Vec<usize>) -> Result<(), String> {
    check_rule_lkf(p).map_err(|e| format!("{} ({}): {}", p.rule, p.conclusion, e))?;
    for (i, premise) in p.premises.iter().enumerate() {
        path.push(i);
        check_node_lkf(premise, path)?;
        path.pop();
    }
    Ok(())
}

struct FocusedParts<'a> {
    left: &'a [Formula],
    stoup: Option<&'a Formula>,
    right: &'a [Formula],
}

fn check_focused(
    premise: &FocusedSequent,
    expect: FocusedParts<'_>,
    what: &str,
) -> Check {
    if !multiset_eq(&premise.left, expect.left) {
        return fail(format!("{}: left context mismatch", what));
    }
    if !multiset_eq(&premise.right, expect.right) {
        return fail(format!("{}: right context mismatch", what));
    }
    match (&premise.stoup, expect.stoup) {
        (None, None) => Ok(()),
        (Some(a), Some(b)) if a.alpha_eq(b) => Ok(()),
        (Some(_), None) => fail(format!("{}: stoup must be empty", what)),
        (None, Some(_)) => fail(format!("{}: stoup formula missing", what)),
        (Some(_), Some(_)) => fail(format!("{}: stoup formula mismatch", what)),
    }
}

fn check_rule_lkf(p: &ProofNode) -> Check {
    let concl = focused(p)?;
    expect_premises(p)?;
    let prem = |i: usize| -> Result<&FocusedSequent, String> { focused(&p.premises[i]) };
    let stoup_empty = || -> Check {
        if concl.stoup.is_some() {
            return fail(format!("rule {} requires an empty stoup", p.rule));
        }
        Ok(())
    };
    let stoup_formula = || -> Result<&Formula, String> {
        concl
            .stoup
            .as_ref()
            .ok_or_else(|| format!("rule {} acts on the stoup, which is empty", p.rule))
    };
    match p.rule {
        RuleId::Ax => {
            stoup_empty()?;
            let ok = concl.left.iter().any(|a| {
                a.is_atomic() && concl.right.iter().any(|b| a.alpha_eq(b))
            });
            if !ok {
                return fail("axiom: no atomic formula occurs on both sides");
            }
            Ok(())
        }
        RuleId::AndL => {
            stoup_empty()?;
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::And(a, b) = f else {
                return fail("active formula is not a conjunction");
            };
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &with_extra(&without(&concl.left, i), &[a, b]),
                    stoup: None,
                    right: &concl.right,
                },
                "premise",
            )
        }
        RuleId::AndR => {
            let f = stoup_formula()?;
            let Formula::And(a, b) = f else {
                return fail("stoup formula is not a conjunction");
            };
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &concl.left,
                    stoup: Some(a),
                    right: &concl.right,
                },
                "first premise",
            )?;
            check_focused(
                prem(1)?,
                FocusedParts {
                    left: &concl.left,
                    stoup: Some(b),
                    right: &concl.right,
                },
                "second premise",
            )
        }
        RuleId::OrL => {
            stoup_empty()?;
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Or(a, b) = f else {
                return fail("active formula is not a disjunction");
            };
            let rest = without(&concl.left, i);
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &with_extra(&rest, &[a]),
                    stoup: None,
                    right: &concl.right,
                },
                "first premise",
            )?;
            check_focused(
                prem(1)?,
                FocusedParts {
                    left: &with_extra(&rest, &[b]),
                    stoup: None,
                    right: &concl.right,
                },
                "second premise",
            )
        }
        RuleId::OrR => {
            stoup_empty()?;
            let (i, f) = right_active(&concl.right, p)?;
            let Formula::Or(a, b) = f else {
                return fail("active formula is not a disjunction");
            };
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &concl.left,
                    stoup: None,
                    right: &with_extra(&without(&concl.right, i), &[a, b]),
                },
                "premise",
            )
        }
        RuleId::OrR1 | RuleId::OrR2 => fail("the additive disjunction rules belong to LJ only"),
        RuleId::ImpL => {
            stoup_empty()?;
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Implies(a, b) = f else {
                return fail("active formula is not an implication");
            };
            let rest = without(&concl.left, i);
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &rest,
                    stoup: Some(a),
                    right: &concl.right,
                },
                "first premise",
            )?;
            check_focused(
                prem(1)?,
                FocusedParts {
                    left: &with_extra(&rest, &[b]),
                    stoup: None,
                    right: &concl.right,
                },
                "second premise",
            )
        }
        RuleId::ImpR => {
            let f = stoup_formula()?;
            let Formula::Implies(a, b) = f else {
                return fail("stoup formula is not an implication");
            };
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &with_extra(&concl.left, &[a]),
                    stoup: Some(b),
                    right: &concl.right,
                },
                "premise",
            )
        }
        RuleId::NotL => {
            stoup_empty()?;
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Not(a) = f else {
                return fail("active formula is not a negation");
            };
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &without(&concl.left, i),
                    stoup: Some(a),
                    right: &concl.right,
                },
                "premise",
            )
        }
        RuleId::NotR => {
            stoup_empty()?;
            let (i, f) = right_active(&concl.right, p)?;
            let Formula::Not(a) = f else {
                return fail("active formula is not a negation");
            };
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &with_extra(&concl.left, &[a]),
                    stoup: None,
                    right: &without(&concl.right, i),
                },
                "premise",
            )
        }
        RuleId::ExistsL => {
            stoup_empty()?;
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Exists(x, body) = f else {
                return fail("active formula is not existential");
            };
            let c = eigen_of(p)?;
            check_eigen_fresh(c, p)?;
            let inst = body.substitute(x, &Term::Const(c.to_owned()));
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &with_extra(&without(&concl.left, i), &[&inst]),
                    stoup: None,
                    right: &concl.right,
                },
                "premise",
            )
        }
        RuleId::ExistsR => {
            stoup_empty()?;
            let (i, f) = right_active(&concl.right, p)?;
            let Formula::Exists(x, body) = f else {
                return fail("active formula is not existential");
            };
            let t = witness_of(p)?;
            let inst = body.substitute(x, t);
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &concl.left,
                    stoup: None,
                    right: &with_extra(&without(&concl.right, i), &[&inst]),
                },
                "premise",
            )
        }
        RuleId::ForallL => {
            stoup_empty()?;
            let (i, f) = left_active(&concl.left, p)?;
            let Formula::Forall(x, body) = f else {
                return fail("active formula is not universal");
            };
            let t = witness_of(p)?;
            let inst = body.substitute(x, t);
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &with_extra(&without(&concl.left, i), &[&inst]),
                    stoup: None,
                    right: &concl.right,
                },
                "premise",
            )
        }
        RuleId::ForallR => {
            let f = stoup_formula()?;
            let Formula::Forall(x, body) = f else {
                return fail("stoup formula is not universal");
            };
            let c = eigen_of(p)?;
            check_eigen_fresh(c, p)?;
            let inst = body.substitute(x, &Term::Const(c.to_owned()));
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &concl.left,
                    stoup: Some(&inst),
                    right: &concl.right,
                },
                "premise",
            )
        }
        RuleId::ContrL => {
            stoup_empty()?;
            let (_, f) = left_active(&concl.left, p)?;
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &with_extra(&concl.left, &[f]),
                    stoup: None,
                    right: &concl.right,
                },
                "premise",
            )
        }
        RuleId::ContrR => {
            stoup_empty()?;
            let (_, f) = right_active(&concl.right, p)?;
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &concl.left,
                    stoup: None,
                    right: &with_extra(&concl.right, &[f]),
                },
                "premise",
            )
        }
        RuleId::WeakL => {
            stoup_empty()?;
            let (i, _) = left_active(&concl.left, p)?;
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &without(&concl.left, i),
                    stoup: None,
                    right: &concl.right,
                },
                "premise",
            )
        }
        RuleId::WeakR => {
            // Weakening introduces a formula directly into the stoup.
            let _ = stoup_formula()?;
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &concl.left,
                    stoup: None,
                    right: &concl.right,
                },
                "premise",
            )
        }
        RuleId::Focus => {
            stoup_empty()?;
            let (i, f) = right_active(&concl.right, p)?;
            if releasable(f) {
                return fail(
                    "focus: the formula is atomic, existential, disjunctive or negated",
                );
            }
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &concl.left,
                    stoup: Some(f),
                    right: &without(&concl.right, i),
                },
                "premise",
            )
        }
        RuleId::Release => {
            let f = stoup_formula()?;
            if !releasable(f) {
                return fail(
                    "release: the formula is neither atomic nor existential, disjunctive or negated",
                );
            }
            check_focused(
                prem(0)?,
                FocusedParts {
                    left: &concl.left,
                    stoup: None,
                    right: &with_extra(&concl.right, &[f]),
                },
                "premise",
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;
    use crate::proof::{ActiveHandle, Conclusion, ProofNode, Sequent};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn plain_node(rule: RuleId, left: &[&str], right: &[&str], premises: Vec<ProofNode>) -> ProofNode {
        ProofNode::new(
            rule,
            Conclusion::Plain(Sequent::new(
                left.iter().map(|s| f(s)).collect(),
                right.iter().map(|s| f(s)).collect(),
            )),
            premises,
        )
    }

    fn focused_node(
        rule: RuleId,
        left: &[&str],
        stoup: Option<&str>,
        right: &[&str],
        premises: Vec<ProofNode>,
    ) -> ProofNode {
        ProofNode::new(
            rule,
            Conclusion::Focused(FocusedSequent::new(
                left.iter().map(|s| f(s)).collect(),
                stoup.map(f),
                right.iter().map(|s| f(s)).collect(),
            )),
            premises,
        )
    }

    #[test]
    fn lk_axioms() {
        assert!(check_lk(&plain_node(RuleId::Ax, &["P"], &["P"], vec![])).valid);
        // No atomicity restriction in LK.
        assert!(
            check_lk(&plain_node(RuleId::Ax, &["Q", "A & B"], &["A & B", "R"], vec![])).valid
        );
        assert!(!check_lk(&plain_node(RuleId::Ax, &["P"], &["Q"], vec![])).valid);
    }

    #[test]
    fn lk_eigen_violation() {
        // forall_r whose eigensymbol occurs in the conclusion is rejected.
        let premise = plain_node(RuleId::Ax, &["P(c)"], &["P(c)"], vec![]);
        let node = plain_node(RuleId::ForallR, &["P(c)"], &["forall x. P(x)"], vec![premise])
            .with_active(ActiveHandle::Right(0))
            .with_eigen("c");
        let report = check_lk(&node);
        assert!(!report.valid);
        assert!(report.failure.unwrap().reason.contains("eigenvariable"));

        // A fresh eigensymbol passes: |- forall x. (P(x) -> P(x)).
        let ax = plain_node(RuleId::Ax, &["P(c)"], &["P(c)"], vec![]);
        let imp = plain_node(RuleId::ImpR, &[], &["P(c) -> P(c)"], vec![ax])
            .with_active(ActiveHandle::Right(0));
        let node = plain_node(RuleId::ForallR, &[], &["forall x. (P(x) -> P(x))"], vec![imp])
            .with_active(ActiveHandle::Right(0))
            .with_eigen("c");
        assert!(check_lk(&node).valid, "{}", check_lk(&node));
    }

    #[test]
    fn lj_rejects_classical_shapes() {
        // contr_r is not an LJ rule.
        let premise = plain_node(RuleId::Ax, &["P"], &["P"], vec![]);
        let node = plain_node(RuleId::ContrR, &["P"], &["P"], vec![premise])
            .with_active(ActiveHandle::Right(0));
        assert!(!check_lj(&node).valid);

        // Two right formulas are rejected.
        let node = plain_node(RuleId::Ax, &["P"], &["P", "Q"], vec![]);
        assert!(!check_lj(&node).valid);
    }

    #[test]
    fn lj_or_and_not_rules() {
        let premise = plain_node(RuleId::Ax, &["A"], &["A"], vec![]);
        let node = plain_node(RuleId::OrR1, &["A"], &["A | B"], vec![premise])
            .with_active(ActiveHandle::Right(0));
        assert!(check_lj(&node).valid, "{}", check_lj(&node));

        // not_r premise has an empty right side.
        let inner = plain_node(RuleId::Ax, &["Q", "P"], &["P"], vec![]);
        let notl = plain_node(RuleId::NotL, &["Q", "P", "~P"], &[], vec![inner])
            .with_active(ActiveHandle::Left(2));
        let notr = plain_node(RuleId::NotR, &["Q", "P"], &["~~P"], vec![notl])
            .with_active(ActiveHandle::Right(0));
        assert!(check_lj(&notr).valid, "{}", check_lj(&notr));
    }

    #[test]
    fn lkf_side_conditions() {
        // release on a conjunction is rejected.
        let prem = focused_node(RuleId::Ax, &["A & B"], None, &["A & B"], vec![]);
        let node = focused_node(RuleId::Release, &["A & B"], Some("A & B"), &[], vec![prem]);
        let report = check_lkf(&node);
        assert!(!report.valid);

        // focus on an existential is rejected.
        let prem = focused_node(RuleId::Ax, &["P"], Some("exists x. Q(x)"), &["P"], vec![]);
        let node = focused_node(
            RuleId::Focus,
            &["P"],
            None,
            &["exists x. Q(x)", "P"],
            vec![prem],
        )
        .with_active(ActiveHandle::Right(0));
        assert!(!check_lkf(&node).valid);

        // ax on a compound formula is rejected.
        let node = focused_node(RuleId::Ax, &["A & B"], None, &["A & B"], vec![]);
        assert!(!check_lkf(&node).valid);

        // ax on an atom passes.
        let node = focused_node(RuleId::Ax, &["P", "A & B"], None, &["P"], vec![]);
        assert!(check_lkf(&node).valid);
    }

    #[test]
    fn lkf_weak_r_targets_stoup() {
        let prem = focused_node(RuleId::Ax, &["P"], None, &["P"], vec![]);
        let node = focused_node(RuleId::WeakR, &["P"], Some("A & B"), &["P"], vec![prem])
            .with_active(ActiveHandle::Stoup);
        assert!(check_lkf(&node).valid, "{}", check_lkf(&node));
    }

    #[test]
    fn context_permutation_is_irrelevant() {
        let premise = plain_node(RuleId::Ax, &["B", "A"], &["A"], vec![]);
        let node = plain_node(RuleId::AndL, &["A & B"], &["A"], vec![premise])
            .with_active(ActiveHandle::Left(0));
        assert!(check_lk(&node).valid);
    }
}
