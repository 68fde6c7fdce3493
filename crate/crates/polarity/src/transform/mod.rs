//! Executable proof transformations between the three calculi.
//!
//! The transformations realize the embedding results: eta-expansion of
//! axioms, Kleene inversion of invertible right rules, the equivalence of
//! the focused and unfocused classical calculi, and the forward and reverse
//! polarized translations of proofs (Kolmogorov route on plain classical
//! proofs, Gödel-Gentzen route through the focused calculus).
//!
//! All transformations are pure tree-to-tree functions. Fresh symbols are
//! drawn from a deterministic counter seeded with the input proof's symbol
//! set, so outputs are reproducible.

mod expand;
mod focusing;
mod gg;
mod invert;
mod kolmogorov;

pub use expand::{eta_expand, eta_expand_lj};
pub use focusing::{focus, unfocus, StoupChoice};
pub use gg::{
    lj_to_lk_gg, lj_to_lk_gg_corollary, lkf_to_lj_gg, lkf_to_lj_gg_with_coverage,
    normalize_atomic_not_l, recover_gg_witness, GgWitness,
};
pub use invert::kleene_invert;
pub use kolmogorov::{
    lj_to_lk_kolmogorov, lk_to_lj_kolmogorov, recover_kolmogorov_witness, SequentWitness,
};

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{Formula, FreshGen};
use crate::proof::{Conclusion, FocusedSequent, ProofNode, Sequent};

/// A proof transformation failed: the input was outside the transform's
/// domain (not checker-valid, wrong calculus, or not in the image shape).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformError(pub String);

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "transform error: {}", self.0)
    }
}

impl std::error::Error for TransformError {}

pub(crate) fn terr<T>(msg: impl Into<String>) -> Result<T, TransformError> {
    Err(TransformError(msg.into()))
}

/// The two proof-translation routes into intuitionistic logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Kolmogorov,
    Gg,
}

impl std::str::FromStr for Route {
    type Err = TransformError;

    fn from_str(s: &str) -> Result<Route, TransformError> {
        match s {
            "kolmogorov" | "ko" => Ok(Route::Kolmogorov),
            "gg" => Ok(Route::Gg),
            other => terr(format!("unknown route '{}' (expected gg or kolmogorov)", other)),
        }
    }
}

/// Runs the full forward pipeline on a valid classical proof: eta-expansion
/// followed by the route's embedding (through the focused calculus for the
/// Gödel-Gentzen route). The output is an intuitionistic proof.
pub fn pipeline(p: &ProofNode, route: Route) -> Result<ProofNode, TransformError> {
    let expanded = eta_expand(p)?;
    match route {
        Route::Kolmogorov => lk_to_lj_kolmogorov(&expanded),
        Route::Gg => {
            let focused = focus(&expanded, None)?;
            lkf_to_lj_gg(&focused)
        }
    }
}

pub(crate) fn fresh_gen_for(p: &ProofNode) -> FreshGen {
    let mut fresh = FreshGen::new();
    fresh.reserve(p.all_symbols());
    fresh
}

pub(crate) fn plain_conclusion<'a>(p: &'a ProofNode) -> Result<&'a Sequent, TransformError> {
    p.conclusion
        .as_plain()
        .ok_or_else(|| TransformError("expected an unfocused proof".to_owned()))
}

pub(crate) fn focused_conclusion<'a>(
    p: &'a ProofNode,
) -> Result<&'a FocusedSequent, TransformError> {
    p.conclusion
        .as_focused()
        .ok_or_else(|| TransformError("expected a focused proof".to_owned()))
}

pub(crate) fn mk_plain(left: Vec<Formula>, right: Vec<Formula>) -> Conclusion {
    Conclusion::Plain(Sequent::new(left, right))
}

pub(crate) fn mk_focused(
    left: Vec<Formula>,
    stoup: Option<Formula>,
    right: Vec<Formula>,
) -> Conclusion {
    Conclusion::Focused(FocusedSequent::new(left, stoup, right))
}

/// Index of the first formula alpha-equal to `f`.
pub(crate) fn find_formula(fs: &[Formula], f: &Formula) -> Result<usize, TransformError> {
    fs.iter()
        .position(|g| g.alpha_eq(f))
        .ok_or_else(|| TransformError(format!("formula '{}' not found in context", f)))
}

/// Widens every sequent of an unfocused proof by extra context formulas
/// (appended, so active-formula indices stay valid). Eigensymbols clashing
/// with the extra formulas' symbols are renamed first; the result of
/// widening a valid proof is again valid.
pub(crate) fn widen_plain(
    p: &ProofNode,
    extra_left: &[Formula],
    extra_right: &[Formula],
    fresh: &mut FreshGen,
) -> ProofNode {
    if extra_left.is_empty() && extra_right.is_empty() {
        return p.clone();
    }
    let mut syms = BTreeSet::new();
    for f in extra_left.iter().chain(extra_right.iter()) {
        syms.extend(f.symbols());
    }
    widen_plain_rec(p, extra_left, extra_right, &syms, fresh)
}

fn widen_plain_rec(
    p: &ProofNode,
    extra_left: &[Formula],
    extra_right: &[Formula],
    syms: &BTreeSet<String>,
    fresh: &mut FreshGen,
) -> ProofNode {
    let mut p = p.clone();
    if let Some(c) = p.eigen.clone() {
        if syms.contains(&c) {
            let replacement = fresh.fresh("c");
            p = p.rename_const(&c, &replacement);
        }
    }
    let Conclusion::Plain(s) = &p.conclusion else {
        // Transform-internal invariant; focused nodes never reach here.
        return p;
    };
    let mut left = s.left.clone();
    left.extend(extra_left.iter().cloned());
    let mut right = s.right.clone();
    right.extend(extra_right.iter().cloned());
    ProofNode {
        rule: p.rule,
        conclusion: mk_plain(left, right),
        premises: p
            .premises
            .iter()
            .map(|q| widen_plain_rec(q, extra_left, extra_right, syms, fresh))
            .collect(),
        active: p.active,
        witness: p.witness.clone(),
        eigen: p.eigen.clone(),
    }
}

/// Widens the unfocused right multiset of every sequent of a focused proof.
pub(crate) fn widen_focused(
    p: &ProofNode,
    extra_right: &[Formula],
    fresh: &mut FreshGen,
) -> ProofNode {
    if extra_right.is_empty() {
        return p.clone();
    }
    let mut syms = BTreeSet::new();
    for f in extra_right {
        syms.extend(f.symbols());
    }
    widen_focused_rec(p, extra_right, &syms, fresh)
}

fn widen_focused_rec(
    p: &ProofNode,
    extra_right: &[Formula],
    syms: &BTreeSet<String>,
    fresh: &mut FreshGen,
) -> ProofNode {
    let mut p = p.clone();
    if let Some(c) = p.eigen.clone() {
        if syms.contains(&c) {
            let replacement = fresh.fresh("c");
            p = p.rename_const(&c, &replacement);
        }
    }
    let Conclusion::Focused(s) = &p.conclusion else {
        return p;
    };
    let mut right = s.right.clone();
    right.extend(extra_right.iter().cloned());
    ProofNode {
        rule: p.rule,
        conclusion: mk_focused(s.left.clone(), s.stoup.clone(), right),
        premises: p
            .premises
            .iter()
            .map(|q| widen_focused_rec(q, extra_right, syms, fresh))
            .collect(),
        active: p.active,
        witness: p.witness.clone(),
        eigen: p.eigen.clone(),
    }
}

/// Rule-wise embedding of an intuitionistic proof into the classical
/// calculus: the additive disjunction rules become weakening followed by
/// the multiplicative rule, and the premises of rules that erase the
/// right-hand side are widened back.
pub fn embed_lj_into_lk(p: &ProofNode) -> Result<ProofNode, TransformError> {
    let mut fresh = fresh_gen_for(p);
    embed_rec(p, &mut fresh)
}

fn embed_rec(p: &ProofNode, fresh: &mut FreshGen) -> Result<ProofNode, TransformError> {
    use crate::proof::{ActiveHandle, RuleId};
    let concl = plain_conclusion(p)?;
    let premises: Vec<ProofNode> = p
        .premises
        .iter()
        .map(|q| embed_rec(q, fresh))
        .collect::<Result<_, _>>()?;
    match p.rule {
        RuleId::OrR1 | RuleId::OrR2 => {
            let Some(ActiveHandle::Right(i)) = p.active else {
                return terr("or_r1/or_r2 without a right active handle");
            };
            let Formula::Or(a, b) = &concl.right[i] else {
                return terr("or_r1/or_r2 on a non-disjunction");
            };
            // \Gamma |- A becomes \Gamma |- A, B by weakening, then the
            // multiplicative rule applies.
            let (kept, added) = if p.rule == RuleId::OrR1 {
                ((**a).clone(), (**b).clone())
            } else {
                ((**b).clone(), (**a).clone())
            };
            let sub = premises.into_iter().next().expect("unary rule");
            let weak_concl = mk_plain(concl.left.clone(), vec![added.clone(), kept.clone()]);
            let weak = ProofNode::new(RuleId::WeakR, weak_concl, vec![sub])
                .with_active(ActiveHandle::Right(0));
            Ok(ProofNode::new(
                RuleId::OrR,
                Conclusion::Plain(concl.clone()),
                vec![weak],
            )
            .with_active(ActiveHandle::Right(i)))
        }
        RuleId::NotL => {
            // The intuitionistic rule erases the conclusion's right side;
            // the classical premise keeps it.
            let sub = premises.into_iter().next().expect("unary rule");
            let widened = widen_plain(&sub, &[], &concl.right, fresh);
            Ok(ProofNode {
                rule: p.rule,
                conclusion: Conclusion::Plain(concl.clone()),
                premises: vec![widened],
                active: p.active,
                witness: p.witness.clone(),
                eigen: p.eigen.clone(),
            })
        }
        RuleId::ImpL => {
            let mut it = premises.into_iter();
            let p1 = it.next().expect("binary rule");
            let p2 = it.next().expect("binary rule");
            let p1 = widen_plain(&p1, &[], &concl.right, fresh);
            Ok(ProofNode {
                rule: p.rule,
                conclusion: Conclusion::Plain(concl.clone()),
                premises: vec![p1, p2],
                active: p.active,
                witness: p.witness.clone(),
                eigen: p.eigen.clone(),
            })
        }
        _ => Ok(ProofNode {
            rule: p.rule,
            conclusion: Conclusion::Plain(concl.clone()),
            premises,
            active: p.active,
            witness: p.witness.clone(),
            eigen: p.eigen.clone(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_lj, check_lk};
    use crate::parse::parse_sequent;
    use crate::prover::{prove_lj, SearchBudget, SearchResult};

    #[test]
    fn lj_proofs_embed_into_lk() {
        for s in [
            "|- P -> P | Q",
            "P & Q |- Q & P",
            "|- ~~(P | ~P)",
            "P -> Q, P |- Q",
            "forall x. P(x) |- exists y. P(y)",
        ] {
            let seq = parse_sequent(s).unwrap();
            let SearchResult::Proved(p) = prove_lj(&seq, &SearchBudget::default()) else {
                panic!("expected a proof of {}", s);
            };
            assert!(check_lj(&p).valid);
            // The raw LJ proof is generally not LK-valid (additive
            // disjunction, erased contexts), but the embedding is.
            let embedded = embed_lj_into_lk(&p).unwrap();
            let report = check_lk(&embedded);
            assert!(report.valid, "{}: {}", s, report);
            assert!(embedded
                .end_sequent()
                .as_plain()
                .unwrap()
                .multiset_eq(&seq));
        }
    }

    #[test]
    fn widening_preserves_validity_and_renames_eigens() {
        use crate::parse::parse_formula;
        let seq = parse_sequent("|- forall x. (P(x) -> P(x))").unwrap();
        let SearchResult::Proved(p) =
            crate::prover::prove_lk(&seq, &SearchBudget::default())
        else {
            panic!("provable");
        };
        // Widen by a formula mentioning the eigensymbol the proof uses.
        let clash = parse_formula("Q(c1)").unwrap();
        let mut fresh = fresh_gen_for(&p);
        fresh.reserve(clash.symbols());
        let widened = widen_plain(&p, &[clash.clone()], &[], &mut fresh);
        let report = check_lk(&widened);
        assert!(report.valid, "{}", report);
        let end = widened.end_sequent().as_plain().unwrap();
        assert_eq!(end.left.len(), 1);
        assert_eq!(end.right.len(), 1);
    }
}
