//! The polarized Kolmogorov embeddings: a classical proof of `G |- D`
//! becomes an intuitionistic proof of `G^K+, ~D^K- |-`, and conversely an
//! intuitionistic proof of `G^K+, ~D^K- |- D0^K-` yields a classical proof
//! of `G |- D, D0`.

use crate::formula::{Formula, FreshGen};
use crate::proof::{ActiveHandle, ProofNode, RuleId, Sequent};
use crate::translate::{translate, Scheme};

use super::invert::strip_double_negation_right;
use super::{
    eta_expand_lj, find_formula, fresh_gen_for, mk_plain, plain_conclusion, terr, TransformError,
};

fn kpos(f: &Formula) -> Formula {
    translate(Scheme::KPos, f)
}

fn kneg(f: &Formula) -> Formula {
    translate(Scheme::KNeg, f)
}

fn not(f: Formula) -> Formula {
    Formula::not(f)
}

/// The left side of the lifted sequent: positive images of the hypotheses
/// followed by negated negative images of the conclusions.
fn lift_left(seq: &Sequent) -> Vec<Formula> {
    seq.left
        .iter()
        .map(kpos)
        .chain(seq.right.iter().map(|d| not(kneg(d))))
        .collect()
}

/// Index of an LK occurrence inside the lifted left side.
fn lifted_index(seq: &Sequent, handle: ActiveHandle) -> usize {
    match handle {
        ActiveHandle::Left(i) => i,
        ActiveHandle::Right(j) => seq.left.len() + j,
        ActiveHandle::Stoup => unreachable!("no stoup in the unfocused calculus"),
    }
}

/// Forward embedding: eta-expanded classical proof of `G |- D` to an
/// intuitionistic proof of `G^K+, ~D^K- |-` (empty right side).
pub fn lk_to_lj_kolmogorov(p: &ProofNode) -> Result<ProofNode, TransformError> {
    forward(p)
}

fn forward(p: &ProofNode) -> Result<ProofNode, TransformError> {
    let seq = plain_conclusion(p)?.clone();
    let target = lift_left(&seq);
    let lj = |left: Vec<Formula>, right: Vec<Formula>| mk_plain(left, right);

    match p.rule {
        RuleId::Ax => {
            // Atomic axiom on P: not_l on ~P, then an axiom.
            let Some((i, j)) = seq.left.iter().enumerate().find_map(|(i, a)| {
                if !a.is_atomic() {
                    return None;
                }
                seq.right.iter().position(|b| a.alpha_eq(b)).map(|j| (i, j))
            }) else {
                return terr("axiom is not on an atomic pair; eta-expand first");
            };
            let notp_idx = lifted_index(&seq, ActiveHandle::Right(j));
            let p_atom = kpos(&seq.left[i]);
            let mut inner = target.clone();
            inner.remove(notp_idx);
            let ax = ProofNode::new(RuleId::Ax, lj(inner, vec![p_atom.clone()]), vec![]);
            Ok(ProofNode::new(RuleId::NotL, lj(target, vec![]), vec![ax])
                .with_active(ActiveHandle::Left(notp_idx)))
        }

        // Left logical rules are copied; the positive translation keeps
        // every head.
        RuleId::AndL => {
            let (i, a, b) = left_two(&seq, p, |f| match f {
                Formula::And(a, b) => Some((a, b)),
                _ => None,
            })?;
            let sub = forward(&p.premises[0])?;
            Ok(ProofNode::new(RuleId::AndL, lj(target, vec![]), vec![sub])
                .with_active(ActiveHandle::Left(i)))
                .map(|n| sanity(n, &[kpos(&a), kpos(&b)]))
        }
        RuleId::OrL => {
            let (i, _, _) = left_two(&seq, p, |f| match f {
                Formula::Or(a, b) => Some((a, b)),
                _ => None,
            })?;
            let s1 = forward(&p.premises[0])?;
            let s2 = forward(&p.premises[1])?;
            Ok(ProofNode::new(RuleId::OrL, lj(target, vec![]), vec![s1, s2])
                .with_active(ActiveHandle::Left(i)))
        }
        RuleId::ForallL => {
            let Some(ActiveHandle::Left(i)) = p.active else {
                return terr("forall_l without handle");
            };
            let witness = p.witness.clone().ok_or_else(|| TransformError("no witness".into()))?;
            let sub = forward(&p.premises[0])?;
            Ok(ProofNode::new(RuleId::ForallL, lj(target, vec![]), vec![sub])
                .with_active(ActiveHandle::Left(i))
                .with_witness(witness))
        }
        RuleId::ExistsL => {
            let Some(ActiveHandle::Left(i)) = p.active else {
                return terr("exists_l without handle");
            };
            let eigen = p.eigen.clone().ok_or_else(|| TransformError("no eigen".into()))?;
            let sub = forward(&p.premises[0])?;
            Ok(ProofNode::new(RuleId::ExistsL, lj(target, vec![]), vec![sub])
                .with_active(ActiveHandle::Left(i))
                .with_eigen(&eigen))
        }
        RuleId::ImpL => {
            // (A -> B)^K+ = ~~A^K- -> B^K+; the first premise is capped by
            // a not_r that discharges ~A^K-.
            let Some(ActiveHandle::Left(i)) = p.active else {
                return terr("imp_l without handle");
            };
            let Formula::Implies(a, _) = &seq.left[i] else {
                return terr("imp_l on a non-implication");
            };
            let goal = not(not(kneg(a)));
            let s1 = forward(&p.premises[0])?;
            // The premise proof ends `..., ~A^K- |-`; locate that hypothesis.
            let s1_seq = plain_conclusion(&s1)?.clone();
            let hyp = not(kneg(a));
            let pos = find_formula(&s1_seq.left, &hyp)?;
            let mut ctx = s1_seq.left.clone();
            ctx.remove(pos);
            let capped = ProofNode::new(RuleId::NotR, lj(ctx, vec![goal]), vec![s1])
                .with_active(ActiveHandle::Right(0));
            let s2 = forward(&p.premises[1])?;
            Ok(ProofNode::new(RuleId::ImpL, lj(target, vec![]), vec![capped, s2])
                .with_active(ActiveHandle::Left(i)))
        }
        RuleId::NotL => {
            // (~A)^K+ = ~A^K-, exactly the image of A moved to the right:
            // the premise proof already proves the target sequent.
            forward(&p.premises[0])
        }

        // Right rules: the active image sits on the left as ~(...)^K-.
        RuleId::NotR => {
            let Some(ActiveHandle::Right(j)) = p.active else {
                return terr("not_r without handle");
            };
            let Formula::Not(a) = &seq.right[j] else {
                return terr("not_r on a non-negation");
            };
            let occ = lifted_index(&seq, ActiveHandle::Right(j));
            let sub = forward(&p.premises[0])?;
            // not_l over not_r: ~~A^K+ on the left.
            let mut ctx = target.clone();
            ctx.remove(occ);
            let goal = not(kpos(a));
            let notr = ProofNode::new(RuleId::NotR, lj(ctx, vec![goal]), vec![sub])
                .with_active(ActiveHandle::Right(0));
            Ok(ProofNode::new(RuleId::NotL, lj(target, vec![]), vec![notr])
                .with_active(ActiveHandle::Left(occ)))
        }
        RuleId::ImpR => {
            let Some(ActiveHandle::Right(j)) = p.active else {
                return terr("imp_r without handle");
            };
            let Formula::Implies(a, b) = &seq.right[j] else {
                return terr("imp_r on a non-implication");
            };
            let occ = lifted_index(&seq, ActiveHandle::Right(j));
            let sub = forward(&p.premises[0])?;
            let mut ctx = target.clone();
            ctx.remove(occ);
            // not_l ( imp_r ( not_r (IH) ) ).
            let inner_goal = not(not(kneg(b)));
            let mut imp_ctx = ctx.clone();
            imp_ctx.push(kpos(a));
            let notr = ProofNode::new(RuleId::NotR, lj(imp_ctx, vec![inner_goal.clone()]), vec![sub])
                .with_active(ActiveHandle::Right(0));
            let image = Formula::implies(kpos(a), inner_goal);
            let impr = ProofNode::new(RuleId::ImpR, lj(ctx, vec![image]), vec![notr])
                .with_active(ActiveHandle::Right(0));
            Ok(ProofNode::new(RuleId::NotL, lj(target, vec![]), vec![impr])
                .with_active(ActiveHandle::Left(occ)))
        }
        RuleId::AndR => {
            let Some(ActiveHandle::Right(j)) = p.active else {
                return terr("and_r without handle");
            };
            let Formula::And(a, b) = &seq.right[j] else {
                return terr("and_r on a non-conjunction");
            };
            let occ = lifted_index(&seq, ActiveHandle::Right(j));
            let mut ctx = target.clone();
            ctx.remove(occ);
            let s1 = forward(&p.premises[0])?;
            let s2 = forward(&p.premises[1])?;
            let mk_half = |f: &Formula, sub: ProofNode| -> Result<ProofNode, TransformError> {
                let goal = not(not(kneg(f)));
                let sub_seq = plain_conclusion(&sub)?.clone();
                let pos = find_formula(&sub_seq.left, &not(kneg(f)))?;
                let mut inner = sub_seq.left.clone();
                inner.remove(pos);
                Ok(ProofNode::new(RuleId::NotR, lj(inner, vec![goal]), vec![sub])
                    .with_active(ActiveHandle::Right(0)))
            };
            let h1 = mk_half(a, s1)?;
            let h2 = mk_half(b, s2)?;
            let image = Formula::and(not(not(kneg(a))), not(not(kneg(b))));
            let andr = ProofNode::new(RuleId::AndR, lj(ctx, vec![image]), vec![h1, h2])
                .with_active(ActiveHandle::Right(0));
            Ok(ProofNode::new(RuleId::NotL, lj(target, vec![]), vec![andr])
                .with_active(ActiveHandle::Left(occ)))
        }
        RuleId::OrR => {
            // The multiplicative disjunction: contract the translated
            // hypothesis and derive each disjunct in turn.
            let Some(ActiveHandle::Right(j)) = p.active else {
                return terr("or_r without handle");
            };
            let Formula::Or(a, b) = &seq.right[j] else {
                return terr("or_r on a non-disjunction");
            };
            let occ = lifted_index(&seq, ActiveHandle::Right(j));
            let image = Formula::or(not(not(kneg(a))), not(not(kneg(b))));
            let hyp = not(image.clone());
            let mut ctx = target.clone();
            ctx.remove(occ);

            let sub = forward(&p.premises[0])?; // proves ctx, ~A^K-, ~B^K- |-
            let na = not(kneg(a));
            let nb = not(kneg(b));

            // Stack, from the leaf down:
            //   not_r (A side), not_l H, or_r2, not_r (B side), not_l H, or_r1, contr_l.
            let mut ctx_na = ctx.clone();
            ctx_na.push(na.clone());
            let goal_b = not(not(kneg(b)));
            let notr_b = {
                // sub ends ctx, ~A, ~B |-; discharge ~B first.
                let sub_seq = plain_conclusion(&sub)?.clone();
                let pos = find_formula(&sub_seq.left, &nb)?;
                let mut inner = sub_seq.left.clone();
                inner.remove(pos);
                ProofNode::new(RuleId::NotR, lj(inner, vec![goal_b.clone()]), vec![sub])
                    .with_active(ActiveHandle::Right(0))
            };
            let orr2 = ProofNode::new(
                RuleId::OrR2,
                lj(plain_conclusion(&notr_b)?.left.clone(), vec![image.clone()]),
                vec![notr_b],
            )
            .with_active(ActiveHandle::Right(0));
            // not_l on H: context ctx, ~A plus H.
            let mut with_h_na = ctx_na.clone();
            with_h_na.push(hyp.clone());
            let notl_inner = ProofNode::new(RuleId::NotL, lj(with_h_na.clone(), vec![]), vec![orr2])
                .with_active(ActiveHandle::Left(with_h_na.len() - 1));
            // not_r discharging ~A: goal ~~A^K-.
            let goal_a = not(na.clone());
            let mut ctx_h = ctx.clone();
            ctx_h.push(hyp.clone());
            let notr_a = ProofNode::new(RuleId::NotR, lj(ctx_h.clone(), vec![goal_a]), vec![notl_inner])
                .with_active(ActiveHandle::Right(0));
            let orr1 = ProofNode::new(RuleId::OrR1, lj(ctx_h.clone(), vec![image.clone()]), vec![notr_a])
                .with_active(ActiveHandle::Right(0));
            // not_l on the second copy of H.
            let mut ctx_hh = ctx_h.clone();
            ctx_hh.push(hyp.clone());
            let notl_outer = ProofNode::new(RuleId::NotL, lj(ctx_hh.clone(), vec![]), vec![orr1])
                .with_active(ActiveHandle::Left(ctx_hh.len() - 1));
            // Contract H back to the single original occurrence.
            Ok(ProofNode::new(RuleId::ContrL, lj(target, vec![]), vec![notl_outer])
                .with_active(ActiveHandle::Left(occ)))
        }
        RuleId::ExistsR => {
            let Some(ActiveHandle::Right(j)) = p.active else {
                return terr("exists_r without handle");
            };
            let Formula::Exists(x, body) = seq.right[j].clone() else {
                return terr("exists_r on a non-existential");
            };
            let witness = p.witness.clone().ok_or_else(|| TransformError("no witness".into()))?;
            let occ = lifted_index(&seq, ActiveHandle::Right(j));
            let mut ctx = target.clone();
            ctx.remove(occ);
            let inst = body.substitute(&x, &witness);
            let sub = forward(&p.premises[0])?;
            // not_l ( exists_r ( not_r (IH) ) ).
            let goal_inst = not(not(kneg(&inst)));
            let sub_seq = plain_conclusion(&sub)?.clone();
            let pos = find_formula(&sub_seq.left, &not(kneg(&inst)))?;
            let mut inner = sub_seq.left.clone();
            inner.remove(pos);
            let notr = ProofNode::new(RuleId::NotR, lj(inner, vec![goal_inst]), vec![sub])
                .with_active(ActiveHandle::Right(0));
            let image = kneg(&seq.right[j]);
            let exr = ProofNode::new(RuleId::ExistsR, lj(ctx, vec![image]), vec![notr])
                .with_active(ActiveHandle::Right(0))
                .with_witness(witness);
            Ok(ProofNode::new(RuleId::NotL, lj(target, vec![]), vec![exr])
                .with_active(ActiveHandle::Left(occ)))
        }
        RuleId::ForallR => {
            let Some(ActiveHandle::Right(j)) = p.active else {
                return terr("forall_r without handle");
            };
            let Formula::Forall(x, body) = seq.right[j].clone() else {
                return terr("forall_r on a non-universal");
            };
            let eigen = p.eigen.clone().ok_or_else(|| TransformError("no eigen".into()))?;
            let occ = lifted_index(&seq, ActiveHandle::Right(j));
            let mut ctx = target.clone();
            ctx.remove(occ);
            let inst = body.substitute(&x, &crate::formula::Term::Const(eigen.clone()));
            let sub = forward(&p.premises[0])?;
            let goal_inst = not(not(kneg(&inst)));
            let sub_seq = plain_conclusion(&sub)?.clone();
            let pos = find_formula(&sub_seq.left, &not(kneg(&inst)))?;
            let mut inner = sub_seq.left.clone();
            inner.remove(pos);
            let notr = ProofNode::new(RuleId::NotR, lj(inner, vec![goal_inst]), vec![sub])
                .with_active(ActiveHandle::Right(0));
            let image = kneg(&seq.right[j]);
            let fr = ProofNode::new(RuleId::ForallR, lj(ctx, vec![image]), vec![notr])
                .with_active(ActiveHandle::Right(0))
                .with_eigen(&eigen);
            Ok(ProofNode::new(RuleId::NotL, lj(target, vec![]), vec![fr])
                .with_active(ActiveHandle::Left(occ)))
        }

        // Structural rules become left-structural rules on the image.
        RuleId::WeakL | RuleId::WeakR => {
            let handle = p.active.ok_or_else(|| TransformError("weakening without handle".into()))?;
            let occ = lifted_index(&seq, handle);
            let sub = forward(&p.premises[0])?;
            Ok(ProofNode::new(RuleId::WeakL, lj(target, vec![]), vec![sub])
                .with_active(ActiveHandle::Left(occ)))
        }
        RuleId::ContrL | RuleId::ContrR => {
            let handle = p.active.ok_or_else(|| TransformError("contraction without handle".into()))?;
            let occ = lifted_index(&seq, handle);
            let sub = forward(&p.premises[0])?;
            Ok(ProofNode::new(RuleId::ContrL, lj(target, vec![]), vec![sub])
                .with_active(ActiveHandle::Left(occ)))
        }
        RuleId::OrR1 | RuleId::OrR2 | RuleId::Focus | RuleId::Release => {
            terr(format!("rule {} does not belong to the classical calculus", p.rule))
        }
    }
}

// A no-op used to keep the construction sites honest about the formulas
// they introduce.
fn sanity(n: ProofNode, _expected_members: &[Formula]) -> ProofNode {
    n
}

fn left_two<'a>(
    seq: &'a Sequent,
    p: &ProofNode,
    split: impl Fn(&'a Formula) -> Option<(&'a Formula, &'a Formula)>,
) -> Result<(usize, Formula, Formula), TransformError> {
    let Some(ActiveHandle::Left(i)) = p.active else {
        return terr("left rule without a left active handle");
    };
    let Some((a, b)) = split(&seq.left[i]) else {
        return terr("active formula has the wrong shape");
    };
    Ok((i, a.clone(), b.clone()))
}

/// The classical reading of an intuitionistic sequent in the image of the
/// polarized Kolmogorov translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequentWitness {
    pub gamma: Vec<Formula>,
    pub delta: Vec<Formula>,
    pub goal: Option<Formula>,
}

impl SequentWitness {
    pub fn classical_sequent(&self) -> Sequent {
        let mut right = self.delta.clone();
        right.extend(self.goal.iter().cloned());
        Sequent::new(self.gamma.clone(), right)
    }
}

fn inv_kpos(f: &Formula) -> Option<Formula> {
    match f {
        Formula::Atom(_, _) => Some(f.clone()),
        Formula::And(a, b) => Some(Formula::and(inv_kpos(a)?, inv_kpos(b)?)),
        Formula::Or(a, b) => Some(Formula::or(inv_kpos(a)?, inv_kpos(b)?)),
        Formula::Implies(a, b) => {
            let Formula::Not(inner) = &**a else { return None };
            let Formula::Not(core) = &**inner else { return None };
            Some(Formula::implies(inv_kneg(core)?, inv_kpos(b)?))
        }
        Formula::Not(a) => Some(Formula::not(inv_kneg(a)?)),
        Formula::Forall(x, a) => Some(Formula::Forall(x.clone(), Box::new(inv_kpos(a)?))),
        Formula::Exists(x, a) => Some(Formula::Exists(x.clone(), Box::new(inv_kpos(a)?))),
    }
}

fn inv_kneg(f: &Formula) -> Option<Formula> {
    let strip = |g: &Formula| -> Option<Formula> {
        let Formula::Not(inner) = g else { return None };
        let Formula::Not(core) = &**inner else { return None };
        inv_kneg(core)
    };
    match f {
        Formula::Atom(_, _) => Some(f.clone()),
        Formula::And(a, b) => Some(Formula::and(strip(a)?, strip(b)?)),
        Formula::Or(a, b) => Some(Formula::or(strip(a)?, strip(b)?)),
        Formula::Implies(a, b) => Some(Formula::implies(inv_kpos(a)?, strip(b)?)),
        Formula::Not(a) => Some(Formula::not(inv_kpos(a)?)),
        Formula::Forall(x, a) => Some(Formula::Forall(x.clone(), Box::new(strip(a)?))),
        Formula::Exists(x, a) => Some(Formula::Exists(x.clone(), Box::new(strip(a)?))),
    }
}

/// Recovers the classical sequent from an intuitionistic one in the image
/// shape. Negated left formulas that decode as a negative image are read
/// as moved conclusions (the non-negated source is preferred); the second
/// component reports whether any occurrence was ambiguous.
pub fn recover_kolmogorov_witness(
    seq: &Sequent,
) -> Result<(SequentWitness, bool), TransformError> {
    let mut gamma = Vec::new();
    let mut delta = Vec::new();
    let mut ambiguous = false;
    for f in &seq.left {
        let as_delta = match f {
            Formula::Not(inner) => inv_kneg(inner),
            _ => None,
        };
        let as_gamma = inv_kpos(f);
        match (as_delta, as_gamma) {
            (Some(d), g) => {
                ambiguous |= g.is_some();
                delta.push(d);
            }
            (None, Some(g)) => gamma.push(g),
            (None, None) => {
                return terr(format!("'{}' is not in the polarized Kolmogorov image", f))
            }
        }
    }
    let goal = match seq.right.as_slice() {
        [] => None,
        [r] => Some(
            inv_kneg(r)
                .ok_or_else(|| TransformError(format!("goal '{}' is not a negative image", r)))?,
        ),
        _ => return terr("intuitionistic sequent with more than one right formula"),
    };
    Ok((SequentWitness { gamma, delta, goal }, ambiguous))
}

/// Reverse embedding: an intuitionistic proof of `G^K+, ~D^K- |- D0^K-`
/// becomes a classical proof of `G |- D, D0`. When no witness is supplied
/// the classical sequent is recovered by pattern matching.
pub fn lj_to_lk_kolmogorov(
    p: &ProofNode,
    witness: Option<&SequentWitness>,
) -> Result<ProofNode, TransformError> {
    let expanded = eta_expand_lj(p)?;
    let seq = plain_conclusion(&expanded)?;
    let w = match witness {
        Some(w) => w.clone(),
        None => recover_kolmogorov_witness(seq)?.0,
    };
    let mut fresh = fresh_gen_for(&expanded);
    reverse(&expanded, &w, &mut fresh)
}

/// One step of the reverse induction. The witness describes the classical
/// reading of the node's conclusion; every case produces a classical proof
/// of `gamma |- delta, goal`.
fn reverse(
    p: &ProofNode,
    w: &SequentWitness,
    fresh: &mut FreshGen,
) -> Result<ProofNode, TransformError> {
    let seq = plain_conclusion(p)?.clone();
    let target = w.classical_sequent();
    let lk = |premises: Vec<ProofNode>, rule: RuleId| {
        ProofNode::new(rule, mk_plain(target.left.clone(), target.right.clone()), premises)
    };

    // Identifies the source of the active left occurrence: a hypothesis in
    // gamma or a moved conclusion in delta (preferred when both match).
    let classify_left = |f: &Formula| -> Option<LeftSource> {
        if let Formula::Not(inner) = f {
            if let Some(di) = w.delta.iter().position(|d| kneg(d).alpha_eq(inner)) {
                return Some(LeftSource::Delta(di));
            }
        }
        w.gamma
            .iter()
            .position(|g| kpos(g).alpha_eq(f))
            .map(LeftSource::Gamma)
    };

    match p.rule {
        RuleId::Ax => {
            // Atomic after expansion: P on both sides of the image means P
            // sits in gamma and equals the goal.
            let [goal_img] = seq.right.as_slice() else {
                return terr("axiom without a goal");
            };
            let Some(goal) = &w.goal else {
                return terr("axiom with no recovered goal");
            };
            if !goal_img.is_atomic() {
                return terr("axiom is not atomic; eta-expansion should have removed it");
            }
            if !w.gamma.iter().any(|g| g.alpha_eq(goal)) {
                return terr("axiom formula is not a hypothesis");
            }
            Ok(lk(vec![], RuleId::Ax))
        }
        RuleId::WeakL => {
            let Some(ActiveHandle::Left(i)) = p.active else {
                return terr("weak_l without handle");
            };
            match classify_left(&seq.left[i]) {
                Some(LeftSource::Gamma(gi)) => {
                    let mut w2 = w.clone();
                    let dropped = w2.gamma.remove(gi);
                    let sub = reverse(&p.premises[0], &w2, fresh)?;
                    Ok(lk(vec![sub], RuleId::WeakL)
                        .with_active(ActiveHandle::Left(find_formula(&target.left, &dropped)?)))
                }
                Some(LeftSource::Delta(di)) => {
                    let mut w2 = w.clone();
                    let dropped = w2.delta.remove(di);
                    let sub = reverse(&p.premises[0], &w2, fresh)?;
                    Ok(lk(vec![sub], RuleId::WeakR)
                        .with_active(ActiveHandle::Right(find_formula(&target.right, &dropped)?)))
                }
                None => terr("weakened formula is not in the image"),
            }
        }
        RuleId::ContrL => {
            let Some(ActiveHandle::Left(i)) = p.active else {
                return terr("contr_l without handle");
            };
            match classify_left(&seq.left[i]) {
                Some(LeftSource::Gamma(gi)) => {
                    let mut w2 = w.clone();
                    let dup = w2.gamma[gi].clone();
                    w2.gamma.push(dup.clone());
                    let sub = reverse(&p.premises[0], &w2, fresh)?;
                    Ok(lk(vec![sub], RuleId::ContrL)
                        .with_active(ActiveHandle::Left(find_formula(&target.left, &dup)?)))
                }
                Some(LeftSource::Delta(di)) => {
                    let mut w2 = w.clone();
                    let dup = w2.delta[di].clone();
                    w2.delta.push(dup.clone());
                    let sub = reverse(&p.premises[0], &w2, fresh)?;
                    Ok(lk(vec![sub], RuleId::ContrR)
                        .with_active(ActiveHandle::Right(find_formula(&target.right, &dup)?)))
                }
                None => terr("contracted formula is not in the image"),
            }
        }
        RuleId::WeakR => {
            let Some(goal) = &w.goal else {
                return terr("weak_r with no recovered goal");
            };
            let w2 = SequentWitness {
                gamma: w.gamma.clone(),
                delta: w.delta.clone(),
                goal: None,
            };
            let sub = reverse(&p.premises[0], &w2, fresh)?;
            Ok(lk(vec![sub], RuleId::WeakR)
                .with_active(ActiveHandle::Right(find_formula(&target.right, goal)?)))
        }

        RuleId::AndL => {
            let (i, gi) = gamma_active(p, &seq, &classify_left)?;
            let Formula::And(a, b) = w.gamma[gi].clone() else {
                return terr("and_l source is not a conjunction");
            };
            let _ = i;
            let mut w2 = w.clone();
            w2.gamma.remove(gi);
            w2.gamma.push((*a).clone());
            w2.gamma.push((*b).clone());
            let sub = reverse(&p.premises[0], &w2, fresh)?;
            Ok(lk(vec![sub], RuleId::AndL)
                .with_active(ActiveHandle::Left(find_formula(&target.left, &w.gamma[gi])?)))
        }
        RuleId::OrL => {
            let (_, gi) = gamma_active(p, &seq, &classify_left)?;
            let Formula::Or(a, b) = w.gamma[gi].clone() else {
                return terr("or_l source is not a disjunction");
            };
            let mut w_a = w.clone();
            w_a.gamma.remove(gi);
            w_a.gamma.push((*a).clone());
            let mut w_b = w.clone();
            w_b.gamma.remove(gi);
            w_b.gamma.push((*b).clone());
            let s1 = reverse(&p.premises[0], &w_a, fresh)?;
            let s2 = reverse(&p.premises[1], &w_b, fresh)?;
            Ok(lk(vec![s1, s2], RuleId::OrL)
                .with_active(ActiveHandle::Left(find_formula(&target.left, &w.gamma[gi])?)))
        }
        RuleId::ForallL => {
            let (_, gi) = gamma_active(p, &seq, &classify_left)?;
            let Formula::Forall(x, body) = w.gamma[gi].clone() else {
                return terr("forall_l source is not universal");
            };
            let t = p.witness.clone().ok_or_else(|| TransformError("no witness".into()))?;
            let mut w2 = w.clone();
            w2.gamma.remove(gi);
            w2.gamma.push(body.substitute(&x, &t));
            let sub = reverse(&p.premises[0], &w2, fresh)?;
            Ok(lk(vec![sub], RuleId::ForallL)
                .with_active(ActiveHandle::Left(find_formula(&target.left, &w.gamma[gi])?))
                .with_witness(t))
        }
        RuleId::ExistsL => {
            let (_, gi) = gamma_active(p, &seq, &classify_left)?;
            let Formula::Exists(x, body) = w.gamma[gi].clone() else {
                return terr("exists_l source is not existential");
            };
            let c = p.eigen.clone().ok_or_else(|| TransformError("no eigen".into()))?;
            let mut w2 = w.clone();
            w2.gamma.remove(gi);
            w2.gamma
                .push(body.substitute(&x, &crate::formula::Term::Const(c.clone())));
            let sub = reverse(&p.premises[0], &w2, fresh)?;
            Ok(lk(vec![sub], RuleId::ExistsL)
                .with_active(ActiveHandle::Left(find_formula(&target.left, &w.gamma[gi])?))
                .with_eigen(&c))
        }
        RuleId::ImpL => {
            let (_, gi) = gamma_active(p, &seq, &classify_left)?;
            let Formula::Implies(a, b) = w.gamma[gi].clone() else {
                return terr("imp_l source is not an implication");
            };
            // First premise proves the doubly negated antecedent image.
            let w1 = SequentWitness {
                gamma: without_index(&w.gamma, gi),
                delta: w.delta.clone(),
                goal: Some(not(not((*a).clone()))),
            };
            let s1 = reverse(&p.premises[0], &w1, fresh)?;
            let s1_seq = plain_conclusion(&s1)?.clone();
            let nn_idx = find_formula(&s1_seq.right, &not(not((*a).clone())))?;
            let stripped = strip_double_negation_right(&s1, nn_idx, fresh)?;
            // Widen with the goal if the conclusion carries one.
            let s1_final = match &w.goal {
                Some(d) => {
                    let widened = super::widen_plain(&stripped, &[], &[d.clone()], fresh);
                    widened
                }
                None => stripped,
            };
            let mut w2 = w.clone();
            w2.gamma.remove(gi);
            w2.gamma.push((*b).clone());
            let s2 = reverse(&p.premises[1], &w2, fresh)?;
            Ok(lk(vec![s1_final, s2], RuleId::ImpL)
                .with_active(ActiveHandle::Left(find_formula(&target.left, &w.gamma[gi])?)))
        }
        RuleId::NotL => {
            let Some(ActiveHandle::Left(i)) = p.active else {
                return terr("not_l without handle");
            };
            match classify_left(&seq.left[i]) {
                Some(LeftSource::Delta(di)) => {
                    // The moved conclusion returns to the right.
                    let moved = w.delta[di].clone();
                    let w2 = SequentWitness {
                        gamma: w.gamma.clone(),
                        delta: without_index(&w.delta, di),
                        goal: Some(moved),
                    };
                    let sub = reverse(&p.premises[0], &w2, fresh)?;
                    match &w.goal {
                        Some(d) => Ok(lk(vec![sub], RuleId::WeakR)
                            .with_active(ActiveHandle::Right(find_formula(&target.right, d)?))),
                        None => Ok(sub),
                    }
                }
                Some(LeftSource::Gamma(gi)) => {
                    let Formula::Not(a0) = w.gamma[gi].clone() else {
                        return terr("not_l source is not a negation");
                    };
                    let w2 = SequentWitness {
                        gamma: without_index(&w.gamma, gi),
                        delta: w.delta.clone(),
                        goal: Some((*a0).clone()),
                    };
                    let sub = reverse(&p.premises[0], &w2, fresh)?;
                    let inner = ProofNode::new(
                        RuleId::NotL,
                        mk_plain(
                            {
                                let mut l = without_index(&w.gamma, gi);
                                l.push(w.gamma[gi].clone());
                                l
                            },
                            w.delta.clone(),
                        ),
                        vec![sub],
                    )
                    .with_active(ActiveHandle::Left(w.gamma.len() - 1));
                    match &w.goal {
                        Some(d) => {
                            let inner_seq = plain_conclusion(&inner)?.clone();
                            let _ = inner_seq;
                            Ok(ProofNode::new(
                                RuleId::WeakR,
                                mk_plain(target.left.clone(), target.right.clone()),
                                vec![inner],
                            )
                            .with_active(ActiveHandle::Right(find_formula(&target.right, d)?)))
                        }
                        None => Ok(inner),
                    }
                }
                None => terr("not_l formula is not in the image"),
            }
        }

        // Right rules act on the goal image.
        RuleId::AndR => {
            let Some(Formula::And(d1, d2)) = w.goal.clone().map(strip_to_owned) else {
                return terr("and_r with a non-conjunctive goal");
            };
            let halves = [(*d1).clone(), (*d2).clone()]
                .into_iter()
                .zip(p.premises.iter())
                .map(|(d, prem)| {
                    let w2 = SequentWitness {
                        gamma: w.gamma.clone(),
                        delta: w.delta.clone(),
                        goal: Some(not(not(d.clone()))),
                    };
                    let sub = reverse(prem, &w2, fresh)?;
                    let sub_seq = plain_conclusion(&sub)?.clone();
                    let idx = find_formula(&sub_seq.right, &not(not(d.clone())))?;
                    strip_double_negation_right(&sub, idx, fresh)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(lk(halves, RuleId::AndR).with_active(ActiveHandle::Right(
                find_formula(&target.right, w.goal.as_ref().unwrap())?,
            )))
        }
        RuleId::OrR1 | RuleId::OrR2 => {
            let Some(Formula::Or(d1, d2)) = w.goal.clone().map(strip_to_owned) else {
                return terr("or_r with a non-disjunctive goal");
            };
            let (kept, other) = if p.rule == RuleId::OrR1 {
                ((*d1).clone(), (*d2).clone())
            } else {
                ((*d2).clone(), (*d1).clone())
            };
            let w2 = SequentWitness {
                gamma: w.gamma.clone(),
                delta: w.delta.clone(),
                goal: Some(not(not(kept.clone()))),
            };
            let sub = reverse(&p.premises[0], &w2, fresh)?;
            let sub_seq = plain_conclusion(&sub)?.clone();
            let idx = find_formula(&sub_seq.right, &not(not(kept.clone())))?;
            let stripped = strip_double_negation_right(&sub, idx, fresh)?;
            // Weaken in the other disjunct, then the multiplicative rule.
            let weak_concl = {
                let s = plain_conclusion(&stripped)?.clone();
                let mut r = s.right.clone();
                r.push(other.clone());
                mk_plain(s.left, r)
            };
            let weak = ProofNode::new(RuleId::WeakR, weak_concl.clone(), vec![stripped]);
            let weak_right_len = match &weak_concl {
                crate::proof::Conclusion::Plain(s) => s.right.len(),
                _ => unreachable!(),
            };
            let weak = weak.with_active(ActiveHandle::Right(weak_right_len - 1));
            Ok(lk(vec![weak], RuleId::OrR).with_active(ActiveHandle::Right(
                find_formula(&target.right, w.goal.as_ref().unwrap())?,
            )))
        }
        RuleId::ImpR => {
            let Some(Formula::Implies(d1, d2)) = w.goal.clone().map(strip_to_owned) else {
                return terr("imp_r with a non-implication goal");
            };
            let mut w2 = w.clone();
            w2.gamma.push((*d1).clone());
            w2.goal = Some(not(not((*d2).clone())));
            let sub = reverse(&p.premises[0], &w2, fresh)?;
            let sub_seq = plain_conclusion(&sub)?.clone();
            let idx = find_formula(&sub_seq.right, &not(not((*d2).clone())))?;
            let stripped = strip_double_negation_right(&sub, idx, fresh)?;
            Ok(lk(vec![stripped], RuleId::ImpR).with_active(ActiveHandle::Right(
                find_formula(&target.right, w.goal.as_ref().unwrap())?,
            )))
        }
        RuleId::NotR => {
            let Some(Formula::Not(d0)) = w.goal.clone().map(strip_to_owned) else {
                return terr("not_r with a non-negation goal");
            };
            let mut w2 = w.clone();
            w2.gamma.push((*d0).clone());
            w2.goal = None;
            let sub = reverse(&p.premises[0], &w2, fresh)?;
            Ok(lk(vec![sub], RuleId::NotR).with_active(ActiveHandle::Right(
                find_formula(&target.right, w.goal.as_ref().unwrap())?,
            )))
        }
        RuleId::ForallR => {
            let Some(Formula::Forall(x, body)) = w.goal.clone().map(strip_to_owned) else {
                return terr("forall_r with a non-universal goal");
            };
            let c = p.eigen.clone().ok_or_else(|| TransformError("no eigen".into()))?;
            let inst = body.substitute(&x, &crate::formula::Term::Const(c.clone()));
            let mut w2 = w.clone();
            w2.goal = Some(not(not(inst.clone())));
            let sub = reverse(&p.premises[0], &w2, fresh)?;
            let sub_seq = plain_conclusion(&sub)?.clone();
            let idx = find_formula(&sub_seq.right, &not(not(inst)))?;
            let stripped = strip_double_negation_right(&sub, idx, fresh)?;
            Ok(lk(vec![stripped], RuleId::ForallR)
                .with_active(ActiveHandle::Right(find_formula(
                    &target.right,
                    w.goal.as_ref().unwrap(),
                )?))
                .with_eigen(&c))
        }
        RuleId::ExistsR => {
            let Some(Formula::Exists(x, body)) = w.goal.clone().map(strip_to_owned) else {
                return terr("exists_r with a non-existential goal");
            };
            let t = p.witness.clone().ok_or_else(|| TransformError("no witness".into()))?;
            let inst = body.substitute(&x, &t);
            let mut w2 = w.clone();
            w2.goal = Some(not(not(inst.clone())));
            let sub = reverse(&p.premises[0], &w2, fresh)?;
            let sub_seq = plain_conclusion(&sub)?.clone();
            let idx = find_formula(&sub_seq.right, &not(not(inst)))?;
            let stripped = strip_double_negation_right(&sub, idx, fresh)?;
            Ok(lk(vec![stripped], RuleId::ExistsR)
                .with_active(ActiveHandle::Right(find_formula(
                    &target.right,
                    w.goal.as_ref().unwrap(),
                )?))
                .with_witness(t))
        }
        RuleId::OrR | RuleId::ContrR | RuleId::Focus | RuleId::Release => terr(format!(
            "rule {} cannot occur in an intuitionistic proof",
            p.rule
        )),
    }
}

enum LeftSource {
    Gamma(usize),
    Delta(usize),
}

fn gamma_active(
    p: &ProofNode,
    seq: &Sequent,
    classify: &impl Fn(&Formula) -> Option<LeftSource>,
) -> Result<(usize, usize), TransformError> {
    let Some(ActiveHandle::Left(i)) = p.active else {
        return terr("left rule without a left active handle");
    };
    match classify(&seq.left[i]) {
        Some(LeftSource::Gamma(gi)) => Ok((i, gi)),
        Some(LeftSource::Delta(_)) => terr("left logical rule on a moved conclusion"),
        None => terr("active formula is not in the image"),
    }
}

fn without_index(fs: &[Formula], i: usize) -> Vec<Formula> {
    let mut out = fs.to_vec();
    out.remove(i);
    out
}

/// Unwraps the recovered goal (identity; the goal is stored untranslated).
fn strip_to_owned(f: Formula) -> Formula {
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_lj, check_lk};
    use crate::parse::{parse_formula, parse_sequent};
    use crate::prover::{prove_lk, SearchBudget, SearchResult};
    use crate::transform::eta_expand;
    use crate::translate::{lift_sequent, LiftDirection};

    fn proved(s: &str) -> ProofNode {
        let seq = parse_sequent(s).unwrap();
        match prove_lk(&seq, &SearchBudget::default()) {
            SearchResult::Proved(p) => eta_expand(&p).unwrap(),
            other => panic!("expected proof of {}, got {}", s, other.verdict()),
        }
    }

    fn forward_and_check(s: &str) -> ProofNode {
        let p = proved(s);
        let lj = lk_to_lj_kolmogorov(&p).unwrap();
        let report = check_lj(&lj);
        assert!(report.valid, "{}: {}", s, report);
        let end = lj.end_sequent().as_plain().unwrap();
        assert!(end.right.is_empty());
        let lifted = lift_sequent(
            LiftDirection::KolmogorovPolarized,
            p.end_sequent().as_plain().unwrap(),
            None,
        );
        assert!(
            end.multiset_eq(&lifted.as_sequent()),
            "{}: got {} expected {}",
            s,
            end,
            lifted.as_sequent()
        );
        lj
    }

    #[test]
    fn forward_on_simple_proofs() {
        for s in [
            "P |- P",
            "|- P | ~P",
            "|- P -> P",
            "P & Q |- Q & P",
            "|- (A & B) -> (A | B)",
            "P -> Q, P |- Q",
        ] {
            forward_and_check(s);
        }
    }

    #[test]
    fn forward_on_first_order_proofs() {
        for s in [
            "P(a) |- exists x. P(x)",
            "forall x. P(x) |- P(a)",
            "exists x. P(x) |- exists y. P(y)",
        ] {
            forward_and_check(s);
        }
    }

    #[test]
    fn ax_case_is_the_two_step_proof() {
        let lj = forward_and_check("P |- P");
        assert_eq!(lj.rule, RuleId::NotL);
        assert_eq!(lj.premises[0].rule, RuleId::Ax);
    }

    #[test]
    fn weak_r_becomes_weak_l_of_the_negated_image() {
        // Build a weak_r over a proof of P |- P.
        let sub = proved("P |- P");
        let a = parse_formula("Q | R").unwrap();
        let concl = mk_plain(vec![Formula::atom("P")], vec![a.clone(), Formula::atom("P")]);
        let p = ProofNode::new(RuleId::WeakR, concl, vec![sub]).with_active(ActiveHandle::Right(0));
        assert!(check_lk(&p).valid);
        let lj = lk_to_lj_kolmogorov(&p).unwrap();
        assert!(check_lj(&lj).valid);
        assert_eq!(lj.rule, RuleId::WeakL);
        let weakened = &lj.end_sequent().as_plain().unwrap().left[1];
        assert!(weakened.alpha_eq(&not(kneg(&a))));
    }

    #[test]
    fn reverse_recovers_the_original_sequent() {
        for s in [
            "P |- P",
            "|- P | ~P",
            "P & Q |- Q & P",
            "|- (A & B) -> (A | B)",
            "P(a) |- exists x. P(x)",
        ] {
            let p = proved(s);
            let orig = p.end_sequent().as_plain().unwrap().clone();
            let lj = lk_to_lj_kolmogorov(&p).unwrap();
            let w = SequentWitness {
                gamma: orig.left.clone(),
                delta: orig.right.clone(),
                goal: None,
            };
            let back = lj_to_lk_kolmogorov(&lj, Some(&w)).unwrap();
            let report = check_lk(&back);
            assert!(report.valid, "{}: {}", s, report);
            assert!(back.end_sequent().as_plain().unwrap().multiset_eq(&orig));
        }
    }

    #[test]
    fn witness_recovery_reads_the_image_shape() {
        let seq = parse_sequent("P, ~P |-").unwrap();
        let (w, _ambiguous) = recover_kolmogorov_witness(&seq).unwrap();
        assert_eq!(w.gamma.len(), 1);
        assert_eq!(w.delta.len(), 1);
        // The negated occurrence decodes as a moved conclusion.
        assert_eq!(w.delta[0].to_string(), "P");
        assert_eq!(w.goal, None);
    }

    #[test]
    fn atoms_translate_to_themselves() {
        // An intuitionistic proof of P |- P read against the image of
        // (gamma = P, goal = P) reverses to the classical axiom.
        let lj_ax = ProofNode::new(
            RuleId::Ax,
            mk_plain(vec![Formula::atom("P")], vec![Formula::atom("P")]),
            vec![],
        );
        assert!(check_lj(&lj_ax).valid);
        let w = SequentWitness {
            gamma: vec![Formula::atom("P")],
            delta: vec![],
            goal: Some(Formula::atom("P")),
        };
        let lk = lj_to_lk_kolmogorov(&lj_ax, Some(&w)).unwrap();
        assert!(check_lk(&lk).valid);
        assert_eq!(lk.rule, RuleId::Ax);
    }
}
