//! Equivalence of the focused and unfocused classical calculi: `unfocus`
//! erases the stoup (focus and release nodes disappear), `focus` rebuilds
//! the stoup discipline over an eta-expanded classical proof.

use crate::check::releasable;
use crate::formula::{Formula, FreshGen, Term};
use crate::proof::{ActiveHandle, Conclusion, ProofNode, RuleId};

use super::invert::kleene_invert;
use super::{
    find_formula, focused_conclusion, fresh_gen_for, mk_focused, mk_plain, plain_conclusion,
    terr, widen_focused, TransformError,
};

/// Selects at most one occurrence of the end sequent's right multiset to
/// start in the stoup.
pub type StoupChoice = Option<usize>;

/// Erases the stoup of a focused proof: the semicolon becomes a comma,
/// focus and release nodes are spliced out, every other rule maps to its
/// unfocused instance.
pub fn unfocus(p: &ProofNode) -> Result<ProofNode, TransformError> {
    if matches!(p.rule, RuleId::Focus | RuleId::Release) {
        return unfocus(&p.premises[0]);
    }
    let fs = focused_conclusion(p)?;
    let stoup_shift = fs.stoup.is_some() as usize;
    let active = p.active.map(|a| match a {
        ActiveHandle::Stoup => ActiveHandle::Right(0),
        ActiveHandle::Right(j) => ActiveHandle::Right(j + stoup_shift),
        ActiveHandle::Left(i) => ActiveHandle::Left(i),
    });
    let premises = p
        .premises
        .iter()
        .map(unfocus)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProofNode {
        rule: p.rule,
        conclusion: Conclusion::Plain(fs.unfocused()),
        premises,
        active,
        witness: p.witness.clone(),
        eigen: p.eigen.clone(),
    })
}

/// Focuses an eta-expanded classical proof: given a choice of at most one
/// right occurrence, produces a focused proof of `G |- A; D` where `A` is
/// the chosen occurrence and `D` the remaining right formulas.
pub fn focus(p: &ProofNode, choice: StoupChoice) -> Result<ProofNode, TransformError> {
    let mut fresh = fresh_gen_for(p);
    focus_rec(p, choice, &mut fresh)
}

/// Negative right heads stay in the stoup until fully decomposed.
fn focusable(f: &Formula) -> bool {
    !releasable(f)
}

fn focus_rec(
    p: &ProofNode,
    choice: StoupChoice,
    fresh: &mut FreshGen,
) -> Result<ProofNode, TransformError> {
    let seq = plain_conclusion(p)?.clone();
    if let Some(i) = choice {
        if i >= seq.right.len() {
            return terr(format!("stoup choice {} out of range", i));
        }
        // Negative heads: invert the right rule and rebuild it inside the
        // stoup (the Kleene-invert-then-recurse case).
        let a = seq.right[i].clone();
        if focusable(&a) {
            return focus_negative(p, i, &a, fresh);
        }
    }

    // The stoup choice (if any) is releasable. Dispatch on the root rule.
    let delta_of = |without: usize| {
        let mut r = seq.right.clone();
        r.remove(without);
        r
    };
    let wrap_release = |node: ProofNode, fresh_choice: StoupChoice| -> ProofNode {
        // `node` concludes G |- .; right. Release the chosen occurrence.
        match fresh_choice {
            None => node,
            Some(i) => {
                let a = seq.right[i].clone();
                let release_concl = mk_focused(seq.left.clone(), Some(a), delta_of(i));
                ProofNode::new(RuleId::Release, release_concl, vec![node])
            }
        }
    };

    // Does the root rule act on the chosen occurrence (or a copy of it)?
    let acting_on_choice = match (choice, p.active) {
        (Some(i), Some(ActiveHandle::Right(j))) => seq.right[j].alpha_eq(&seq.right[i]),
        _ => false,
    };
    let ax_on_choice = choice.is_some()
        && p.rule == RuleId::Ax
        && seq.left.iter().any(|l| l.alpha_eq(&seq.right[choice.unwrap()]));

    if acting_on_choice || ax_on_choice {
        // Direct cases: the rule decomposes the stoup formula right after a
        // release (weakening goes straight into the stoup).
        let i = choice.unwrap();
        let a = seq.right[i].clone();
        let j = match p.active {
            Some(ActiveHandle::Right(j)) if seq.right[j].alpha_eq(&a) => j,
            _ => i,
        };
        match p.rule {
            RuleId::Ax => {
                let ax = ProofNode::new(
                    RuleId::Ax,
                    mk_focused(seq.left.clone(), None, seq.right.clone()),
                    vec![],
                );
                return Ok(wrap_release(ax, choice));
            }
            RuleId::WeakR => {
                let sub = focus_rec(&p.premises[0], None, fresh)?;
                let concl = mk_focused(seq.left.clone(), Some(a), delta_of(j));
                return Ok(ProofNode::new(RuleId::WeakR, concl, vec![sub])
                    .with_active(ActiveHandle::Stoup));
            }
            RuleId::ContrR => {
                let sub = focus_rec(&p.premises[0], None, fresh)?;
                let concl = mk_focused(seq.left.clone(), None, seq.right.clone());
                let contr = ProofNode::new(RuleId::ContrR, concl, vec![sub])
                    .with_active(ActiveHandle::Right(j));
                return Ok(wrap_release(contr, choice));
            }
            RuleId::OrR => {
                let sub = focus_rec(&p.premises[0], None, fresh)?;
                let concl = mk_focused(seq.left.clone(), None, seq.right.clone());
                let or = ProofNode::new(RuleId::OrR, concl, vec![sub])
                    .with_active(ActiveHandle::Right(j));
                return Ok(wrap_release(or, choice));
            }
            RuleId::NotR => {
                let sub = focus_rec(&p.premises[0], None, fresh)?;
                let concl = mk_focused(seq.left.clone(), None, seq.right.clone());
                let not = ProofNode::new(RuleId::NotR, concl, vec![sub])
                    .with_active(ActiveHandle::Right(j));
                return Ok(wrap_release(not, choice));
            }
            RuleId::ExistsR => {
                let sub = focus_rec(&p.premises[0], None, fresh)?;
                let concl = mk_focused(seq.left.clone(), None, seq.right.clone());
                let ex = ProofNode::new(RuleId::ExistsR, concl, vec![sub])
                    .with_active(ActiveHandle::Right(j))
                    .with_witness(p.witness.clone().ok_or_else(|| {
                        TransformError("exists_r without witness".into())
                    })?);
                return Ok(wrap_release(ex, choice));
            }
            other => {
                return terr(format!(
                    "rule {} acts on a releasable occurrence in an unexpected way",
                    other
                ))
            }
        }
    }

    // The root rule acts away from the chosen occurrence.
    match p.rule {
        RuleId::Ax => {
            let ax = ProofNode::new(
                RuleId::Ax,
                mk_focused(seq.left.clone(), None, seq.right.clone()),
                vec![],
            );
            Ok(wrap_release(ax, choice))
        }
        // Left rules: keep the whole right side unfocused.
        RuleId::AndL | RuleId::OrL | RuleId::ExistsL | RuleId::ForallL | RuleId::ContrL
        | RuleId::WeakL => {
            let premises = p
                .premises
                .iter()
                .map(|q| focus_rec(q, None, fresh))
                .collect::<Result<Vec<_>, _>>()?;
            let concl = mk_focused(seq.left.clone(), None, seq.right.clone());
            let node = ProofNode {
                rule: p.rule,
                conclusion: concl,
                premises,
                active: p.active,
                witness: p.witness.clone(),
                eigen: p.eigen.clone(),
            };
            Ok(wrap_release(node, choice))
        }
        RuleId::ImpL => {
            // The first premise puts the antecedent into the stoup.
            let Some(ActiveHandle::Left(li)) = p.active else {
                return terr("imp_l without a left active handle");
            };
            let Formula::Implies(ant, _) = &seq.left[li] else {
                return terr("imp_l on a non-implication");
            };
            let p1_seq = plain_conclusion(&p.premises[0])?;
            let pos = find_formula(&p1_seq.right, ant)?;
            let p1 = focus_rec(&p.premises[0], Some(pos), fresh)?;
            let p2 = focus_rec(&p.premises[1], None, fresh)?;
            let concl = mk_focused(seq.left.clone(), None, seq.right.clone());
            let node = ProofNode::new(RuleId::ImpL, concl, vec![p1, p2])
                .with_active(ActiveHandle::Left(li));
            Ok(wrap_release(node, choice))
        }
        RuleId::NotL => {
            let Some(ActiveHandle::Left(li)) = p.active else {
                return terr("not_l without a left active handle");
            };
            let Formula::Not(body) = &seq.left[li] else {
                return terr("not_l on a non-negation");
            };
            let p1_seq = plain_conclusion(&p.premises[0])?;
            let pos = find_formula(&p1_seq.right, body)?;
            let p1 = focus_rec(&p.premises[0], Some(pos), fresh)?;
            let concl = mk_focused(seq.left.clone(), None, seq.right.clone());
            let node = ProofNode::new(RuleId::NotL, concl, vec![p1])
                .with_active(ActiveHandle::Left(li));
            Ok(wrap_release(node, choice))
        }
        // Right rules on an occurrence other than the choice.
        RuleId::AndR | RuleId::ImpR | RuleId::ForallR => {
            let Some(ActiveHandle::Right(j)) = p.active else {
                return terr("right rule without a right active handle");
            };
            let c = seq.right[j].clone();
            let stoup_node = match (&c, p.rule) {
                (Formula::And(b, e), RuleId::AndR) => {
                    let p1_seq = plain_conclusion(&p.premises[0])?;
                    let pos1 = find_formula(&p1_seq.right, b)?;
                    let s1 = focus_rec(&p.premises[0], Some(pos1), fresh)?;
                    let p2_seq = plain_conclusion(&p.premises[1])?;
                    let pos2 = find_formula(&p2_seq.right, e)?;
                    let s2 = focus_rec(&p.premises[1], Some(pos2), fresh)?;
                    let concl = mk_focused(seq.left.clone(), Some(c.clone()), delta_of(j));
                    ProofNode::new(RuleId::AndR, concl, vec![s1, s2])
                        .with_active(ActiveHandle::Stoup)
                }
                (Formula::Implies(_, e), RuleId::ImpR) => {
                    let p1_seq = plain_conclusion(&p.premises[0])?;
                    let pos = find_formula(&p1_seq.right, e)?;
                    let s1 = focus_rec(&p.premises[0], Some(pos), fresh)?;
                    let concl = mk_focused(seq.left.clone(), Some(c.clone()), delta_of(j));
                    ProofNode::new(RuleId::ImpR, concl, vec![s1]).with_active(ActiveHandle::Stoup)
                }
                (Formula::Forall(x, body), RuleId::ForallR) => {
                    let eig = p
                        .eigen
                        .clone()
                        .ok_or_else(|| TransformError("forall_r without eigen".into()))?;
                    let inst = body.substitute(x, &Term::Const(eig.clone()));
                    let p1_seq = plain_conclusion(&p.premises[0])?;
                    let pos = find_formula(&p1_seq.right, &inst)?;
                    let s1 = focus_rec(&p.premises[0], Some(pos), fresh)?;
                    let concl = mk_focused(seq.left.clone(), Some(c.clone()), delta_of(j));
                    ProofNode::new(RuleId::ForallR, concl, vec![s1])
                        .with_active(ActiveHandle::Stoup)
                        .with_eigen(&eig)
                }
                _ => return terr("right rule and occurrence shape disagree"),
            };
            // Close the stoup with a focus node (the head is negative, so
            // focusing is permitted), then release the original choice.
            let focus_concl = mk_focused(seq.left.clone(), None, seq.right.clone());
            let node = ProofNode::new(RuleId::Focus, focus_concl, vec![stoup_node])
                .with_active(ActiveHandle::Right(j));
            Ok(wrap_release(node, choice))
        }
        RuleId::OrR | RuleId::NotR | RuleId::ExistsR | RuleId::ContrR => {
            // A positive right rule on an occurrence other than the chosen
            // one: it applies with the stoup empty.
            let Some(ActiveHandle::Right(j)) = p.active else {
                return terr("right rule without a right active handle");
            };
            let sub = focus_rec(&p.premises[0], None, fresh)?;
            let concl = mk_focused(seq.left.clone(), None, seq.right.clone());
            let mut node = ProofNode::new(p.rule, concl, vec![sub])
                .with_active(ActiveHandle::Right(j));
            if let Some(w) = &p.witness {
                node = node.with_witness(w.clone());
            }
            Ok(wrap_release(node, choice))
        }
        RuleId::WeakR => {
            // Weakening of an occurrence other than the choice: drop the
            // node and widen the focused subproof instead.
            let Some(ActiveHandle::Right(j)) = p.active else {
                return terr("weak_r without a right active handle");
            };
            let c = seq.right[j].clone();
            let sub_choice = match choice {
                None => None,
                Some(i) => {
                    let sub_seq = plain_conclusion(&p.premises[0])?;
                    Some(find_formula(&sub_seq.right, &seq.right[i])?)
                }
            };
            let sub = focus_rec(&p.premises[0], sub_choice, fresh)?;
            Ok(widen_focused(&sub, &[c], fresh))
        }
        RuleId::OrR1 | RuleId::OrR2 | RuleId::Focus | RuleId::Release => {
            terr(format!("rule {} does not belong to the classical calculus", p.rule))
        }
    }
}

/// The negative-stoup case: Kleene inversion on the chosen occurrence, the
/// induction hypothesis on the inverted premises, and the right rule
/// rebuilt inside the stoup.
fn focus_negative(
    p: &ProofNode,
    i: usize,
    a: &Formula,
    fresh: &mut FreshGen,
) -> Result<ProofNode, TransformError> {
    let seq = plain_conclusion(p)?.clone();
    let mut delta = seq.right.clone();
    delta.remove(i);
    match a {
        Formula::And(_, _) => {
            let inverted = kleene_invert(p, i)?;
            // The component replaces the occurrence at the same index.
            let s1 = focus_rec(&inverted[0], Some(i), fresh)?;
            let s2 = focus_rec(&inverted[1], Some(i), fresh)?;
            let concl = mk_focused(seq.left.clone(), Some(a.clone()), delta);
            Ok(ProofNode::new(RuleId::AndR, concl, vec![s1, s2]).with_active(ActiveHandle::Stoup))
        }
        Formula::Implies(_, _) => {
            let inverted = kleene_invert(p, i)?;
            let s1 = focus_rec(&inverted[0], Some(i), fresh)?;
            let concl = mk_focused(seq.left.clone(), Some(a.clone()), delta);
            Ok(ProofNode::new(RuleId::ImpR, concl, vec![s1]).with_active(ActiveHandle::Stoup))
        }
        Formula::Forall(_, _) => {
            // kleene_invert picks a globally fresh eigensymbol; recover it
            // from the inverted premise. When the bound variable does not
            // occur in the body any fresh constant serves.
            let inverted = kleene_invert(p, i)?;
            let sub_seq = plain_conclusion(&inverted[0])?.clone();
            let inst = sub_seq.right[i].clone();
            let eig = recover_eigen(a, &inst).unwrap_or_else(|| fresh.fresh("c"));
            let s1 = focus_rec(&inverted[0], Some(i), fresh)?;
            let concl = mk_focused(seq.left.clone(), Some(a.clone()), delta);
            Ok(ProofNode::new(RuleId::ForallR, concl, vec![s1])
                .with_active(ActiveHandle::Stoup)
                .with_eigen(&eig))
        }
        _ => terr("focus_negative on a non-negative head"),
    }
}

/// Finds the constant `c` such that `inst` is the universal body with `c`
/// substituted for the bound variable, if the variable occurs at all.
fn recover_eigen(forall: &Formula, inst: &Formula) -> Option<String> {
    let Formula::Forall(x, body) = forall else {
        return None;
    };
    // The eigensymbol is whatever constant the bound variable maps to; find
    // it by locating a position where the body has the variable.
    fn search(body: &Formula, inst: &Formula, x: &str) -> Option<String> {
        match (body, inst) {
            (Formula::Atom(_, args1), Formula::Atom(_, args2)) => {
                args1.iter().zip(args2).find_map(|(t1, t2)| search_term(t1, t2, x))
            }
            (Formula::And(a1, b1), Formula::And(a2, b2))
            | (Formula::Or(a1, b1), Formula::Or(a2, b2))
            | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
                search(a1, a2, x).or_else(|| search(b1, b2, x))
            }
            (Formula::Not(a1), Formula::Not(a2)) => search(a1, a2, x),
            (Formula::Forall(y, a1), Formula::Forall(_, a2))
            | (Formula::Exists(y, a1), Formula::Exists(_, a2)) => {
                if y == x {
                    None
                } else {
                    search(a1, a2, x)
                }
            }
            _ => None,
        }
    }
    fn search_term(t1: &Term, t2: &Term, x: &str) -> Option<String> {
        match (t1, t2) {
            (Term::Var(v), Term::Const(c)) if v == x => Some(c.clone()),
            (Term::App(_, a1), Term::App(_, a2)) => {
                a1.iter().zip(a2).find_map(|(s1, s2)| search_term(s1, s2, x))
            }
            _ => None,
        }
    }
    search(body, inst, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_lk, check_lkf};
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

    fn focus_and_check(p: &ProofNode, choice: StoupChoice) -> ProofNode {
        let f = focus(p, choice).unwrap();
        let report = check_lkf(&f);
        assert!(report.valid, "focused proof invalid: {}", report);
        let fs = f.end_sequent().as_focused().unwrap();
        let orig = p.end_sequent().as_plain().unwrap();
        assert!(fs.unfocused().multiset_eq(orig), "end sequent mismatch");
        match choice {
            None => assert!(fs.stoup.is_none()),
            Some(i) => assert!(fs.stoup.as_ref().unwrap().alpha_eq(&orig.right[i])),
        }
        f
    }

    #[test]
    fn focusing_simple_proofs() {
        for s in [
            "|- P | ~P",
            "|- P -> P",
            "P & Q |- Q & P",
            "|- ((P -> Q) -> P) -> P",
            "|- (A & B) -> (A | B)",
            "P(a) |- exists x. P(x)",
            "forall x. P(x) |- P(a) & P(b)",
        ] {
            let p = proved(s);
            let seq = p.end_sequent().as_plain().unwrap().clone();
            focus_and_check(&p, None);
            for i in 0..seq.right.len() {
                focus_and_check(&p, Some(i));
            }
        }
    }

    #[test]
    fn unfocus_recovers_a_classical_proof() {
        for s in ["|- P | ~P", "|- (A & B) -> (A | B)", "P -> Q, P |- Q"] {
            let p = proved(s);
            let seq = p.end_sequent().as_plain().unwrap().clone();
            for choice in std::iter::once(None).chain((0..seq.right.len()).map(Some)) {
                let f = focus_and_check(&p, choice);
                let back = unfocus(&f).unwrap();
                let report = check_lk(&back);
                assert!(report.valid, "{}", report);
                assert!(back.end_sequent().as_plain().unwrap().multiset_eq(&seq));
            }
        }
    }

    #[test]
    fn focused_weakening_goes_into_the_stoup() {
        // weak_r introducing A & B over a proof of P |- P, focused with the
        // weakened formula as the stoup choice.
        let sub = proved("P |- P");
        let f = crate::parse::parse_formula("A & B").unwrap();
        let concl = mk_plain(vec![Formula::atom("P")], vec![f.clone(), Formula::atom("P")]);
        let p = ProofNode::new(RuleId::WeakR, concl, vec![sub]).with_active(ActiveHandle::Right(0));
        assert!(check_lk(&p).valid);
        let focused = focus_and_check(&p, Some(0));
        assert_eq!(focused.rule, RuleId::WeakR);
    }

    #[test]
    fn release_only_on_releasable_heads() {
        // Focusing |- A & B with the conjunction chosen must produce a
        // stoup ending, not a release.
        let p = proved("A & B |- A & B");
        let f = focus_and_check(&p, Some(0));
        assert_eq!(f.rule, RuleId::AndR);
        assert!(f.end_sequent().as_focused().unwrap().stoup.is_some());
    }
}
