//! Kleene inversion: invertible right rules can be permuted downward,
//! yielding proofs of the rule's premises from a proof of its conclusion.
//!
//! The transformation walks the proof and replaces every right-hand copy of
//! the inverted occurrence by the premise component. Nodes whose rule
//! decomposes the occurrence are spliced out; weakenings of the occurrence
//! are replaced by context widening (which adds no nodes, so heights never
//! increase); contractions of the occurrence are re-applied to the
//! components.

use crate::formula::{Formula, FreshGen, Term};
use crate::proof::{ActiveHandle, Conclusion, ProofNode, RuleId, Sequent};

use super::{
    find_formula, fresh_gen_for, mk_plain, plain_conclusion, terr, widen_plain, TransformError,
};

/// What a right occurrence is inverted into.
#[derive(Clone, Debug)]
enum InvMode {
    /// `B & C` becomes `B`.
    ConjLeft,
    /// `B & C` becomes `C`.
    ConjRight,
    /// `B -> C` becomes `C` on the right with `B` added to the left.
    Imp,
    /// `forall x. B` becomes `B[c/x]` for the given fresh constant.
    Forall(String),
}

/// Inverts the invertible right rule for the occurrence at right index
/// `occ` of the end sequent. The occurrence's head must be a conjunction,
/// an implication or a universal quantifier. Returns the premise proofs of
/// the corresponding right rule (two for a conjunction, one otherwise).
pub fn kleene_invert(p: &ProofNode, occ: usize) -> Result<Vec<ProofNode>, TransformError> {
    let concl = plain_conclusion(p)?;
    let Some(f) = concl.right.get(occ) else {
        return terr(format!("right occurrence {} out of range", occ));
    };
    let mut fresh = fresh_gen_for(p);
    match f {
        Formula::And(_, _) => Ok(vec![
            invert_one(p, occ, &InvMode::ConjLeft, &mut fresh)?,
            invert_one(p, occ, &InvMode::ConjRight, &mut fresh)?,
        ]),
        Formula::Implies(_, _) => Ok(vec![invert_one(p, occ, &InvMode::Imp, &mut fresh)?]),
        Formula::Forall(_, _) => {
            let c = fresh.fresh("c");
            Ok(vec![invert_one(p, occ, &InvMode::Forall(c), &mut fresh)?])
        }
        other => terr(format!(
            "cannot invert a right occurrence with head '{}'",
            head_name(other)
        )),
    }
}

fn head_name(f: &Formula) -> &'static str {
    match f {
        Formula::Atom(_, _) => "atom",
        Formula::And(_, _) => "and",
        Formula::Or(_, _) => "or",
        Formula::Implies(_, _) => "implies",
        Formula::Not(_) => "not",
        Formula::Forall(_, _) => "forall",
        Formula::Exists(_, _) => "exists",
    }
}

/// The component that replaces the occurrence on the right, plus the
/// formula added on the left for the implication mode.
fn components(f: &Formula, mode: &InvMode) -> Result<(Formula, Option<Formula>), TransformError> {
    match (f, mode) {
        (Formula::And(b, _), InvMode::ConjLeft) => Ok(((**b).clone(), None)),
        (Formula::And(_, c), InvMode::ConjRight) => Ok(((**c).clone(), None)),
        (Formula::Implies(b, c), InvMode::Imp) => Ok(((**c).clone(), Some((**b).clone()))),
        (Formula::Forall(x, b), InvMode::Forall(c)) => {
            Ok((b.substitute(x, &Term::Const(c.clone())), None))
        }
        _ => terr("occurrence shape does not match the inversion mode"),
    }
}

/// The inverted rule for each mode.
fn matching_rule(mode: &InvMode) -> RuleId {
    match mode {
        InvMode::ConjLeft | InvMode::ConjRight => RuleId::AndR,
        InvMode::Imp => RuleId::ImpR,
        InvMode::Forall(_) => RuleId::ForallR,
    }
}

fn invert_one(
    p: &ProofNode,
    occ: usize,
    mode: &InvMode,
    fresh: &mut FreshGen,
) -> Result<ProofNode, TransformError> {
    let concl = plain_conclusion(p)?.clone();
    let a = concl.right[occ].clone();
    let (component, extra_left) = components(&a, mode)?;

    // The transformed conclusion: the occurrence replaced 1-for-1 on the
    // right (indices stay stable), the implication antecedent appended on
    // the left.
    let new_conclusion = || -> Conclusion {
        let mut right = concl.right.clone();
        right[occ] = component.clone();
        let mut left = concl.left.clone();
        if let Some(b) = &extra_left {
            left.push(b.clone());
        }
        mk_plain(left, right)
    };

    // Does the root rule act on a right-hand copy of the occurrence?
    let acts_on_copy = match p.active {
        Some(ActiveHandle::Right(j)) => concl.right.get(j).is_some_and(|g| g.alpha_eq(&a)),
        _ => false,
    };

    if acts_on_copy {
        let j = match p.active {
            Some(ActiveHandle::Right(j)) => j,
            _ => unreachable!(),
        };
        match p.rule {
            r if r == matching_rule(mode) => {
                // The rule being inverted: splice it out.
                match mode {
                    InvMode::ConjLeft => Ok(p.premises[0].clone()),
                    InvMode::ConjRight => Ok(p.premises[1].clone()),
                    InvMode::Imp => Ok(p.premises[0].clone()),
                    InvMode::Forall(c) => {
                        let d = p
                            .eigen
                            .clone()
                            .ok_or_else(|| TransformError("forall_r without eigen".into()))?;
                        // Align the proof's own eigensymbol with the one
                        // chosen for this inversion.
                        Ok(p.premises[0].rename_const(&d, c))
                    }
                }
            }
            RuleId::WeakR => {
                // Weakening of the occurrence: widen the subproof by the
                // premise formulas instead (no new nodes).
                let sub = &p.premises[0];
                let extra_l: Vec<Formula> = extra_left.iter().cloned().collect();
                Ok(widen_plain(sub, &extra_l, &[component], fresh))
            }
            RuleId::ContrR => {
                // Both copies in the premise descend from the occurrence:
                // invert each, then contract the components.
                let sub = &p.premises[0];
                let sub_seq = plain_conclusion(sub)?;
                let first = find_formula(&sub_seq.right, &a)?;
                let once = invert_one(sub, first, mode, fresh)?;
                let once_seq = plain_conclusion(&once)?;
                let second = find_formula(&once_seq.right, &a)?;
                let twice = invert_one(&once, second, mode, fresh)?;

                // Contract the duplicated component on the right (and the
                // duplicated antecedent on the left for implications).
                let twice_seq = plain_conclusion(&twice)?.clone();
                let comp_idx = find_formula(&twice_seq.right, &component)?;
                let mut contracted_right = twice_seq.right.clone();
                contracted_right.remove(comp_idx);
                let pos = find_formula(&contracted_right, &component)?;
                let mut out = ProofNode::new(
                    RuleId::ContrR,
                    mk_plain(twice_seq.left.clone(), contracted_right.clone()),
                    vec![twice],
                )
                .with_active(ActiveHandle::Right(pos));
                if let Some(b) = &extra_left {
                    let out_seq = plain_conclusion(&out)?.clone();
                    let b_idx = find_formula(&out_seq.left, b)?;
                    let mut contracted_left = out_seq.left.clone();
                    contracted_left.remove(b_idx);
                    let bpos = find_formula(&contracted_left, b)?;
                    out = ProofNode::new(
                        RuleId::ContrL,
                        mk_plain(contracted_left, out_seq.right.clone()),
                        vec![out],
                    )
                    .with_active(ActiveHandle::Left(bpos));
                }
                Ok(out)
            }
            other => terr(format!(
                "rule {} cannot act on an occurrence with this head",
                other
            )),
        }
    } else {
        // The occurrence is passive: transform the conclusion and recurse
        // into every premise that carries a copy.
        let premises = p
            .premises
            .iter()
            .map(|q| {
                let q_seq = plain_conclusion(q)?;
                match find_formula(&q_seq.right, &a) {
                    Ok(pos) => invert_one(q, pos, mode, fresh),
                    // The copy vanished (e.g. the erased side of a weakened
                    // branch cannot happen here since contexts persist, but
                    // alpha-matching may fail only on malformed input).
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let node = ProofNode {
            rule: p.rule,
            conclusion: new_conclusion(),
            premises,
            active: p.active,
            witness: p.witness.clone(),
            eigen: p.eigen.clone(),
        };
        // An eigensymbol stays fresh: the component's symbols are a subset
        // of the occurrence's (already in the old conclusion), and the
        // fresh constant of a Forall inversion is globally new.
        Ok(node)
    }
}

/// Inverts a right occurrence `~X` into `X` on the left: from a proof of
/// `G |- ~X, D` builds a proof of `G, X |- D`.
pub(crate) fn invert_not_right(
    p: &ProofNode,
    occ: usize,
    fresh: &mut FreshGen,
) -> Result<ProofNode, TransformError> {
    let concl = plain_conclusion(p)?.clone();
    let Formula::Not(x) = concl.right[occ].clone() else {
        return terr("invert_not_right on a non-negation");
    };
    let a = concl.right[occ].clone();
    let body = (*x).clone();

    let new_conclusion = || -> Conclusion {
        let mut right = concl.right.clone();
        right.remove(occ);
        let mut left = concl.left.clone();
        left.push(body.clone());
        mk_plain(left, right)
    };

    let acts_on_copy = match p.active {
        Some(ActiveHandle::Right(j)) => concl.right.get(j).is_some_and(|g| g.alpha_eq(&a)),
        _ => false,
    };

    if acts_on_copy {
        match p.rule {
            RuleId::NotR => Ok(p.premises[0].clone()),
            RuleId::WeakR => Ok(widen_plain(&p.premises[0], &[body], &[], fresh)),
            RuleId::ContrR => {
                let sub = &p.premises[0];
                let first = find_formula(&plain_conclusion(sub)?.right, &a)?;
                let once = invert_not_right(sub, first, fresh)?;
                let second = find_formula(&plain_conclusion(&once)?.right, &a)?;
                let twice = invert_not_right(&once, second, fresh)?;
                // Contract the two copies of the body on the left.
                let seq = plain_conclusion(&twice)?.clone();
                let idx = find_formula(&seq.left, &body)?;
                let mut contracted = seq.left.clone();
                contracted.remove(idx);
                let pos = find_formula(&contracted, &body)?;
                Ok(
                    ProofNode::new(RuleId::ContrL, mk_plain(contracted, seq.right), vec![twice])
                        .with_active(ActiveHandle::Left(pos)),
                )
            }
            other => terr(format!("rule {} cannot act on a negated right occurrence", other)),
        }
    } else if p.rule == RuleId::Ax {
        // If the axiom's only matching pair goes through the occurrence,
        // rebuild it as not_l over an axiom on the body.
        let survives = concl.left.iter().any(|l| {
            concl
                .right
                .iter()
                .enumerate()
                .any(|(j, r)| j != occ && l.alpha_eq(r))
        });
        if survives {
            Ok(ProofNode::new(RuleId::Ax, new_conclusion(), vec![]))
        } else {
            // The pair is (~X left, ~X right): not_l on the left copy.
            let li = find_formula(&concl.left, &a)?;
            let mut inner_left = concl.left.clone();
            inner_left.remove(li);
            inner_left.push(body.clone());
            let mut inner_right = concl.right.clone();
            inner_right.remove(occ);
            inner_right.push(body.clone());
            let ax = ProofNode::new(RuleId::Ax, mk_plain(inner_left, inner_right), vec![]);
            // The not_l conclusion keeps X on the left (it was added by the
            // inversion), removing the right occurrence.
            Ok(ProofNode::new(RuleId::NotL, new_conclusion(), vec![ax])
                .with_active(ActiveHandle::Left(li)))
        }
    } else {
        let premises = p
            .premises
            .iter()
            .map(|q| {
                let pos = find_formula(&plain_conclusion(q)?.right, &a)?;
                invert_not_right(q, pos, fresh)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProofNode {
            rule: p.rule,
            conclusion: new_conclusion(),
            premises,
            active: adjust_right_removal(p.active, occ),
            witness: p.witness.clone(),
            eigen: p.eigen.clone(),
        })
    }
}

/// Inverts a left occurrence `~X` into `X` on the right: from a proof of
/// `G, ~X |- D` builds a proof of `G |- X, D`.
pub(crate) fn invert_not_left(
    p: &ProofNode,
    occ: usize,
    fresh: &mut FreshGen,
) -> Result<ProofNode, TransformError> {
    let concl = plain_conclusion(p)?.clone();
    let Formula::Not(x) = concl.left[occ].clone() else {
        return terr("invert_not_left on a non-negation");
    };
    let a = concl.left[occ].clone();
    let body = (*x).clone();

    let new_conclusion = || -> Conclusion {
        let mut left = concl.left.clone();
        left.remove(occ);
        let mut right = concl.right.clone();
        right.push(body.clone());
        mk_plain(left, right)
    };

    let acts_on_copy = match p.active {
        Some(ActiveHandle::Left(j)) => concl.left.get(j).is_some_and(|g| g.alpha_eq(&a)),
        _ => false,
    };

    if acts_on_copy {
        match p.rule {
            RuleId::NotL => Ok(p.premises[0].clone()),
            RuleId::WeakL => Ok(widen_plain(&p.premises[0], &[], &[body], fresh)),
            RuleId::ContrL => {
                let sub = &p.premises[0];
                let first = find_formula(&plain_conclusion(sub)?.left, &a)?;
                let once = invert_not_left(sub, first, fresh)?;
                let second = find_formula(&plain_conclusion(&once)?.left, &a)?;
                let twice = invert_not_left(&once, second, fresh)?;
                let seq = plain_conclusion(&twice)?.clone();
                let idx = find_formula(&seq.right, &body)?;
                let mut contracted = seq.right.clone();
                contracted.remove(idx);
                let pos = find_formula(&contracted, &body)?;
                Ok(
                    ProofNode::new(RuleId::ContrR, mk_plain(seq.left, contracted), vec![twice])
                        .with_active(ActiveHandle::Right(pos)),
                )
            }
            other => terr(format!("rule {} cannot act on a negated left occurrence", other)),
        }
    } else if p.rule == RuleId::Ax {
        let survives = concl.right.iter().any(|r| {
            concl
                .left
                .iter()
                .enumerate()
                .any(|(i, l)| i != occ && l.alpha_eq(r))
        });
        if survives {
            Ok(ProofNode::new(RuleId::Ax, new_conclusion(), vec![]))
        } else {
            // The pair is (~X@occ, ~X right): not_r on the right copy.
            let rj = find_formula(&concl.right, &a)?;
            let mut inner_left = concl.left.clone();
            inner_left.remove(occ);
            inner_left.push(body.clone());
            let mut inner_right = concl.right.clone();
            inner_right.remove(rj);
            inner_right.push(body.clone());
            let ax = ProofNode::new(RuleId::Ax, mk_plain(inner_left, inner_right), vec![]);
            Ok(ProofNode::new(RuleId::NotR, new_conclusion(), vec![ax])
                .with_active(ActiveHandle::Right(rj)))
        }
    } else {
        let premises = p
            .premises
            .iter()
            .map(|q| {
                let pos = find_formula(&plain_conclusion(q)?.left, &a)?;
                invert_not_left(q, pos, fresh)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProofNode {
            rule: p.rule,
            conclusion: new_conclusion(),
            premises,
            active: adjust_left_removal(p.active, occ),
            witness: p.witness.clone(),
            eigen: p.eigen.clone(),
        })
    }
}

/// Active-handle adjustment when a left occurrence is removed.
fn adjust_left_removal(active: Option<ActiveHandle>, removed: usize) -> Option<ActiveHandle> {
    match active {
        Some(ActiveHandle::Left(i)) if i > removed => Some(ActiveHandle::Left(i - 1)),
        other => other,
    }
}

/// Active-handle adjustment when a right occurrence is removed.
fn adjust_right_removal(active: Option<ActiveHandle>, removed: usize) -> Option<ActiveHandle> {
    match active {
        Some(ActiveHandle::Right(j)) if j > removed => Some(ActiveHandle::Right(j - 1)),
        other => other,
    }
}

/// Strips a double negation from a right occurrence: from a proof of
/// `G |- ~~X, D` builds a proof of `G |- X, D` by two inversions.
pub(crate) fn strip_double_negation_right(
    p: &ProofNode,
    occ: usize,
    fresh: &mut FreshGen,
) -> Result<ProofNode, TransformError> {
    let concl = plain_conclusion(p)?;
    let Formula::Not(inner) = &concl.right[occ] else {
        return terr("strip_double_negation_right: occurrence is not negated");
    };
    let Formula::Not(_) = **inner else {
        return terr("strip_double_negation_right: occurrence is not doubly negated");
    };
    let once = invert_not_right(p, occ, fresh)?;
    // The inner negation was appended to the left.
    let seq = plain_conclusion(&once)?;
    let pos = find_formula(&seq.left, inner)?;
    invert_not_left(&once, pos, fresh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::check_lk;
    use crate::parse::parse_sequent;
    use crate::prover::{prove_lk, SearchBudget, SearchResult};
    use crate::transform::eta_expand;

    fn proved(s: &str) -> ProofNode {
        let seq = parse_sequent(s).unwrap();
        match prove_lk(&seq, &SearchBudget::default()) {
            SearchResult::Proved(p) => eta_expand(&p).unwrap(),
            other => panic!("expected proof of {}, got {}", s, other.verdict()),
        }
    }

    #[test]
    fn inverting_the_last_rule_returns_the_subproof() {
        // A proof ending in imp_r: inversion is its immediate subproof.
        let p = proved("|- P -> P");
        assert_eq!(p.rule, RuleId::ImpR);
        let inv = kleene_invert(&p, 0).unwrap();
        assert_eq!(inv.len(), 1);
        assert_eq!(inv[0], p.premises[0]);
        assert!(inv[0].height() < p.height());
    }

    #[test]
    fn inverting_a_conjunction_yields_two_premise_proofs() {
        let p = proved("P & Q |- P & Q");
        let seq = p.conclusion.as_plain().unwrap().clone();
        assert!(matches!(seq.right[0], Formula::And(_, _)));
        let inv = kleene_invert(&p, 0).unwrap();
        assert_eq!(inv.len(), 2);
        for (i, q) in inv.iter().enumerate() {
            let report = check_lk(q);
            assert!(report.valid, "premise {}: {}", i, report);
            assert!(q.height() <= p.height());
        }
        let left = inv[0].conclusion.as_plain().unwrap();
        assert_eq!(left.right.len(), 1);
    }

    #[test]
    fn inverting_a_weakening_does_not_increase_height() {
        // Build weak_r introducing B -> C over a proof of P |- P.
        let sub = proved("P |- P");
        let f = crate::parse::parse_formula("B -> C").unwrap();
        let concl = mk_plain(
            sub.conclusion.as_plain().unwrap().left.clone(),
            vec![f.clone(), Formula::atom("P")],
        );
        let p = ProofNode::new(RuleId::WeakR, concl, vec![sub]).with_active(ActiveHandle::Right(0));
        assert!(check_lk(&p).valid);
        let inv = kleene_invert(&p, 0).unwrap();
        assert_eq!(inv.len(), 1);
        let report = check_lk(&inv[0]);
        assert!(report.valid, "{}", report);
        // The subproof is widened rather than weakened: strictly shorter.
        assert!(inv[0].height() < p.height());
        let seq = inv[0].conclusion.as_plain().unwrap();
        assert!(seq.left.iter().any(|g| g.to_string() == "B"));
        assert!(seq.right.iter().any(|g| g.to_string() == "C"));
    }

    #[test]
    fn inverting_under_an_unrelated_rule_decreases_height() {
        // |- (P -> P) & (Q -> Q): the prover ends with and_r; inverting
        // the left conjunct's implication must permute below it.
        let p = proved("|- (P & P) | (Q -> Q), R & R");
        // Find the right occurrence R & R at index 1.
        let seq = p.conclusion.as_plain().unwrap();
        let occ = seq
            .right
            .iter()
            .position(|f| f.to_string() == "R & R")
            .unwrap();
        let inv = kleene_invert(&p, occ).unwrap();
        for q in &inv {
            let report = check_lk(q);
            assert!(report.valid, "{}", report);
            assert!(q.height() < p.height(), "strict decrease expected");
        }
    }

    #[test]
    fn inverting_universal_quantifier() {
        let p = proved("forall x. P(x) |- forall y. P(y)");
        let inv = kleene_invert(&p, 0).unwrap();
        assert_eq!(inv.len(), 1);
        let report = check_lk(&inv[0]);
        assert!(report.valid, "{}", report);
        let seq = inv[0].conclusion.as_plain().unwrap();
        assert!(seq.right[0].is_atomic());
    }

    #[test]
    fn double_negation_stripping() {
        let p = proved("~~P |- ~~P");
        let mut fresh = fresh_gen_for(&p);
        let stripped = strip_double_negation_right(&p, 0, &mut fresh).unwrap();
        let report = check_lk(&stripped);
        assert!(report.valid, "{}", report);
        let seq = stripped.conclusion.as_plain().unwrap();
        assert_eq!(seq.right.len(), 1);
        assert_eq!(seq.right[0].to_string(), "P");
        assert_eq!(seq.left[0].to_string(), "~~P");
    }
}
