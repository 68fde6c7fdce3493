//! Eta-expansion of axioms: every axiom on a compound formula is replaced
//! by its decomposition down to atomic axioms. Weakenings are left alone; a
//! weakening by a compound formula stays a single weakening.

use crate::formula::{Formula, FreshGen, Term};
use crate::proof::{ActiveHandle, Conclusion, ProofNode, RuleId};

use super::{fresh_gen_for, mk_plain, plain_conclusion, terr, TransformError};

/// Eta-expands a classical proof: afterwards every axiom node closes on an
/// atomic principal pair. The end sequent is unchanged.
pub fn eta_expand(p: &ProofNode) -> Result<ProofNode, TransformError> {
    let mut fresh = fresh_gen_for(p);
    expand_rec(p, &mut fresh, false)
}

/// Eta-expands an intuitionistic proof in the same way.
pub fn eta_expand_lj(p: &ProofNode) -> Result<ProofNode, TransformError> {
    let mut fresh = fresh_gen_for(p);
    expand_rec(p, &mut fresh, true)
}

fn expand_rec(
    p: &ProofNode,
    fresh: &mut FreshGen,
    intuitionistic: bool,
) -> Result<ProofNode, TransformError> {
    if p.rule != RuleId::Ax {
        let premises = p
            .premises
            .iter()
            .map(|q| expand_rec(q, fresh, intuitionistic))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(ProofNode {
            rule: p.rule,
            conclusion: p.conclusion.clone(),
            premises,
            active: p.active,
            witness: p.witness.clone(),
            eigen: p.eigen.clone(),
        });
    }
    let concl = plain_conclusion(p)?;
    // Keep the node when an atomic pair already closes it.
    let atomic_pair = concl
        .left
        .iter()
        .any(|a| a.is_atomic() && concl.right.iter().any(|b| a.alpha_eq(b)));
    if atomic_pair {
        return Ok(p.clone());
    }
    let Some((i, j)) = concl.left.iter().enumerate().find_map(|(i, a)| {
        concl
            .right
            .iter()
            .position(|b| a.alpha_eq(b))
            .map(|j| (i, j))
    }) else {
        return terr("axiom node with no matching pair");
    };
    let mut gamma = concl.left.clone();
    let a = gamma.remove(i);
    let mut delta = concl.right.clone();
    delta.remove(j);
    Ok(expand_axiom(&gamma, &a, &delta, fresh, intuitionistic))
}

/// Builds a proof of `gamma, a |- a, delta` (or `gamma, a |- a` in the
/// intuitionistic calculus, where `delta` must be empty) using axioms on
/// atoms only. The principal formula sits last on the left and first on
/// the right.
fn expand_axiom(
    gamma: &[Formula],
    a: &Formula,
    delta: &[Formula],
    fresh: &mut FreshGen,
    intuitionistic: bool,
) -> ProofNode {
    let left_with = |extra: &[Formula]| -> Vec<Formula> {
        let mut l = gamma.to_vec();
        l.extend(extra.iter().cloned());
        l
    };
    let right_with = |first: &Formula, extra: &[Formula]| -> Vec<Formula> {
        let mut r = vec![first.clone()];
        r.extend(extra.iter().cloned());
        r.extend(delta.iter().cloned());
        r
    };
    let concl = mk_plain(left_with(&[a.clone()]), right_with(a, &[]));
    let a_idx = gamma.len();

    match a {
        Formula::Atom(_, _) => ProofNode::new(RuleId::Ax, concl, vec![]),
        Formula::And(b, c) => {
            // and_r over and_l on each side.
            let mk_half = |kept: &Formula, other: &Formula, fresh: &mut FreshGen| -> ProofNode {
                let mut inner_gamma = gamma.to_vec();
                inner_gamma.push(other.clone());
                let sub = expand_axiom(&inner_gamma, kept, delta, fresh, intuitionistic);
                let half_concl = mk_plain(left_with(&[a.clone()]), right_with(kept, &[]));
                ProofNode::new(RuleId::AndL, half_concl, vec![sub])
                    .with_active(ActiveHandle::Left(a_idx))
            };
            let p1 = mk_half(b, c, fresh);
            let p2 = mk_half(c, b, fresh);
            ProofNode::new(RuleId::AndR, concl, vec![p1, p2]).with_active(ActiveHandle::Right(0))
        }
        Formula::Or(b, c) => {
            let mk_half = |kept: &Formula,
                           other: &Formula,
                           rule1: bool,
                           fresh: &mut FreshGen|
             -> ProofNode {
                let mut inner_gamma = gamma.to_vec();
                inner_gamma.push(kept.clone());
                let half_concl = mk_plain(inner_gamma.clone(), right_with(a, &[]));
                if intuitionistic {
                    // or_r1 / or_r2 keep only the matching disjunct.
                    let sub = expand_axiom(gamma, kept, delta, fresh, true);
                    ProofNode::new(
                        if rule1 { RuleId::OrR1 } else { RuleId::OrR2 },
                        half_concl,
                        vec![sub],
                    )
                    .with_active(ActiveHandle::Right(0))
                } else {
                    // Multiplicative or_r: the premise keeps both disjuncts.
                    let mut extra = vec![other.clone()];
                    extra.extend(delta.iter().cloned());
                    let sub = expand_axiom(gamma, kept, &extra, fresh, false);
                    ProofNode::new(RuleId::OrR, half_concl, vec![sub])
                        .with_active(ActiveHandle::Right(0))
                }
            };
            let p1 = mk_half(b, c, true, fresh);
            let p2 = mk_half(c, b, false, fresh);
            ProofNode::new(RuleId::OrL, concl, vec![p1, p2]).with_active(ActiveHandle::Left(a_idx))
        }
        Formula::Implies(b, c) => {
            // imp_r over imp_l.
            let p1 = if intuitionistic {
                expand_axiom(gamma, b, &[], fresh, true)
            } else {
                let mut extra = vec![(**c).clone()];
                extra.extend(delta.iter().cloned());
                expand_axiom(gamma, b, &extra, fresh, false)
            };
            let mut inner_gamma = gamma.to_vec();
            inner_gamma.push((**b).clone());
            let p2 = expand_axiom(&inner_gamma, c, delta, fresh, intuitionistic);
            let impl_concl = mk_plain(
                left_with(&[a.clone(), (**b).clone()]),
                right_with(c, &[]),
            );
            let impl_node = ProofNode::new(RuleId::ImpL, impl_concl, vec![p1, p2])
                .with_active(ActiveHandle::Left(a_idx));
            ProofNode::new(RuleId::ImpR, concl, vec![impl_node])
                .with_active(ActiveHandle::Right(0))
        }
        Formula::Not(b) => {
            // not_r over not_l; in the intuitionistic calculus the premise
            // of not_r has an empty right side, which holds here because
            // delta is empty.
            let sub = expand_axiom(gamma, b, delta, fresh, intuitionistic);
            let notl_concl = mk_plain(
                left_with(&[a.clone(), (**b).clone()]),
                delta.to_vec(),
            );
            let notl = ProofNode::new(RuleId::NotL, notl_concl, vec![sub])
                .with_active(ActiveHandle::Left(a_idx));
            ProofNode::new(RuleId::NotR, concl, vec![notl]).with_active(ActiveHandle::Right(0))
        }
        Formula::Forall(x, body) => {
            // forall_r (eigen c) over forall_l (witness c).
            let c = fresh.fresh("c");
            let inst = body.substitute(x, &Term::Const(c.clone()));
            let sub = expand_axiom(gamma, &inst, delta, fresh, intuitionistic);
            let fl_concl = mk_plain(left_with(&[a.clone()]), right_with(&inst, &[]));
            let fl = ProofNode::new(RuleId::ForallL, fl_concl, vec![sub])
                .with_active(ActiveHandle::Left(a_idx))
                .with_witness(Term::Const(c.clone()));
            ProofNode::new(RuleId::ForallR, concl, vec![fl])
                .with_active(ActiveHandle::Right(0))
                .with_eigen(&c)
        }
        Formula::Exists(x, body) => {
            // exists_l (eigen c) over exists_r (witness c).
            let c = fresh.fresh("c");
            let inst = body.substitute(x, &Term::Const(c.clone()));
            let sub = expand_axiom(gamma, &inst, delta, fresh, intuitionistic);
            let mut inner_gamma = gamma.to_vec();
            inner_gamma.push(inst.clone());
            let er_concl = mk_plain(inner_gamma, right_with(a, &[]));
            let er = ProofNode::new(RuleId::ExistsR, er_concl, vec![sub])
                .with_active(ActiveHandle::Right(0))
                .with_witness(Term::Const(c.clone()));
            ProofNode::new(RuleId::ExistsL, concl, vec![er])
                .with_active(ActiveHandle::Left(a_idx))
                .with_eigen(&c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_lj, check_lk};
    use crate::parse::parse_formula;
    use crate::proof::Sequent;

    fn ax_on(s: &str) -> ProofNode {
        let f = parse_formula(s).unwrap();
        ProofNode::new(
            RuleId::Ax,
            Conclusion::Plain(Sequent::new(vec![f.clone()], vec![f])),
            vec![],
        )
    }

    fn assert_atomic_axioms(p: &ProofNode) {
        if p.rule == RuleId::Ax {
            let s = p.conclusion.as_plain().unwrap();
            assert!(s
                .left
                .iter()
                .any(|a| a.is_atomic() && s.right.iter().any(|b| a.alpha_eq(b))));
        }
        for q in &p.premises {
            assert_atomic_axioms(q);
        }
    }

    #[test]
    fn atomic_axiom_unchanged() {
        let ax = ax_on("P");
        assert_eq!(eta_expand(&ax).unwrap(), ax);
    }

    #[test]
    fn conjunction_axiom_expands() {
        let ax = ax_on("A & B");
        let expanded = eta_expand(&ax).unwrap();
        let report = check_lk(&expanded);
        assert!(report.valid, "{}", report);
        assert_eq!(expanded.rule, RuleId::AndR);
        assert_atomic_axioms(&expanded);
        assert!(expanded
            .end_sequent()
            .as_plain()
            .unwrap()
            .multiset_eq(ax.end_sequent().as_plain().unwrap()));
    }

    #[test]
    fn universal_axiom_expands_with_fresh_eigen() {
        let ax = ax_on("forall x. P(x)");
        let expanded = eta_expand(&ax).unwrap();
        let report = check_lk(&expanded);
        assert!(report.valid, "{}", report);
        // Root is forall_r with the matching forall_l above it.
        assert_eq!(expanded.rule, RuleId::ForallR);
        assert_eq!(expanded.premises[0].rule, RuleId::ForallL);
        assert_eq!(expanded.premises[0].premises[0].rule, RuleId::Ax);
        assert_atomic_axioms(&expanded);
    }

    #[test]
    fn all_connectives_expand() {
        for s in [
            "A | B",
            "A -> B",
            "~A",
            "exists x. Q(x)",
            "(A & B) -> (A | ~B)",
            "forall x. exists y. R(x,y)",
        ] {
            let ax = ax_on(s);
            let expanded = eta_expand(&ax).unwrap();
            let report = check_lk(&expanded);
            assert!(report.valid, "{}: {}", s, report);
            assert_atomic_axioms(&expanded);
            assert!(expanded
                .end_sequent()
                .as_plain()
                .unwrap()
                .multiset_eq(ax.end_sequent().as_plain().unwrap()));
        }
    }

    #[test]
    fn intuitionistic_expansion() {
        for s in [
            "A & B",
            "A | B",
            "A -> B",
            "~A",
            "forall x. P(x)",
            "exists x. Q(x)",
            "~(A | B) -> ~A & ~B",
        ] {
            let f = parse_formula(s).unwrap();
            let ax = ProofNode::new(
                RuleId::Ax,
                Conclusion::Plain(Sequent::new(vec![f.clone()], vec![f])),
                vec![],
            );
            let expanded = eta_expand_lj(&ax).unwrap();
            let report = check_lj(&expanded);
            assert!(report.valid, "{}: {}", s, report);
            assert_atomic_axioms(&expanded);
        }
    }
}
