//! Bounded backward proof search for LK and LJ.
//!
//! The searches are used as an independent provability oracle for the
//! equiprovability experiments and as proof generators for the transform
//! corpora. They apply invertible rules eagerly and branch on the
//! non-invertible choices (additive disjunction, left implication and
//! negation in LJ, quantifier witnesses everywhere), with loop detection by
//! sequent memoization up to alpha-equivalence.
//!
//! `Refuted` is only reported when the search space was exhausted soundly:
//! any branch cut short by a depth cap, a contraction budget or the bounded
//! witness enumeration downgrades a failure to `Unknown`.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::formula::{Formula, FreshGen, Term};
use crate::proof::{ActiveHandle, Conclusion, ProofNode, RuleId, Sequent};

/// Bounds on the backward search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum recursion depth.
    pub max_depth: usize,
    /// How many times one formula may be contracted (kept for reuse) on a
    /// branch before further uses consume it.
    pub max_contractions_per_formula: usize,
    /// Maximum nesting depth of enumerated quantifier witness terms.
    pub max_term_depth: usize,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_depth: 4000,
            max_contractions_per_formula: 2,
            max_term_depth: 2,
        }
    }
}

/// Outcome of a search.
#[derive(Clone, Debug)]
pub enum SearchResult {
    Proved(ProofNode),
    /// The search space was exhausted without finding a proof. Only
    /// reported when no budget limit was hit (for quantified sequents this
    /// never happens; witness enumeration is inherently bounded).
    Refuted,
    /// The budget was exhausted before the search space was.
    Unknown,
}

impl SearchResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchResult::Proved(_))
    }

    pub fn proof(&self) -> Option<&ProofNode> {
        match self {
            SearchResult::Proved(p) => Some(p),
            _ => None,
        }
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            SearchResult::Proved(_) => "proved",
            SearchResult::Refuted => "refuted",
            SearchResult::Unknown => "unknown",
        }
    }
}

enum Outcome {
    Proved(ProofNode),
    Fail { complete: bool },
}

impl Outcome {
    fn incomplete() -> Outcome {
        Outcome::Fail { complete: false }
    }

    fn certain() -> Outcome {
        Outcome::Fail { complete: true }
    }
}

fn plain(left: Vec<Formula>, right: Vec<Formula>) -> Conclusion {
    Conclusion::Plain(Sequent::new(left, right))
}

fn node(rule: RuleId, concl: &Sequent, premises: Vec<ProofNode>) -> ProofNode {
    ProofNode::new(rule, plain(concl.left.clone(), concl.right.clone()), premises)
}

/// Ground candidate terms for quantifier witnesses, built from the symbols
/// of the root sequent up to the budgeted depth. Capped so enumeration
/// stays finite and small.
fn candidate_terms(seq: &Sequent, max_depth: usize) -> Vec<Term> {
    let mut constants: Vec<String> = Vec::new();
    let mut functions: Vec<(String, usize)> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for f in seq.left.iter().chain(seq.right.iter()) {
        collect_signature(f, &mut constants, &mut functions, &mut seen);
    }
    if constants.is_empty() {
        constants.push("a".to_owned());
    }
    let mut layers: Vec<Term> = constants.iter().map(|c| Term::Const(c.clone())).collect();
    let mut all = layers.clone();
    for _ in 0..max_depth {
        let mut next = Vec::new();
        for (f, arity) in &functions {
            // One argument tuple per previous-layer term keeps the
            // candidate set small.
            for t in &layers {
                let args = vec![t.clone(); *arity];
                next.push(Term::App(f.clone(), args));
            }
        }
        if next.is_empty() {
            break;
        }
        all.extend(next.iter().cloned());
        layers = next;
        if all.len() > 64 {
            all.truncate(64);
            break;
        }
    }
    all
}

fn collect_signature(
    f: &Formula,
    constants: &mut Vec<String>,
    functions: &mut Vec<(String, usize)>,
    seen: &mut BTreeSet<String>,
) {
    match f {
        Formula::Atom(_, args) => {
            for t in args {
                collect_term_signature(t, constants, functions, seen);
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_signature(a, constants, functions, seen);
            collect_signature(b, constants, functions, seen);
        }
        Formula::Not(a) => collect_signature(a, constants, functions, seen),
        Formula::Forall(_, a) | Formula::Exists(_, a) => {
            collect_signature(a, constants, functions, seen)
        }
    }
}

fn collect_term_signature(
    t: &Term,
    constants: &mut Vec<String>,
    functions: &mut Vec<(String, usize)>,
    seen: &mut BTreeSet<String>,
) {
    match t {
        Term::Var(_) => {}
        Term::Const(c) => {
            if seen.insert(format!("c:{}", c)) {
                constants.push(c.clone());
            }
        }
        Term::App(f, args) => {
            if seen.insert(format!("f:{}", f)) {
                functions.push((f.clone(), args.len()));
            }
            for a in args {
                collect_term_signature(a, constants, functions, seen);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Classical search.

struct LkSearch {
    budget: SearchBudget,
    fresh: FreshGen,
    proved: HashMap<String, ProofNode>,
}

/// Finds the indices of two alpha-equal formulas, if any.
fn find_duplicate(fs: &[Formula]) -> Option<usize> {
    for i in 0..fs.len() {
        for j in (i + 1)..fs.len() {
            if fs[i].alpha_eq(&fs[j]) {
                return Some(j);
            }
        }
    }
    None
}

/// Backward search in the classical calculus. All propositional rules of
/// the calculus are invertible, so the propositional fragment is decided by
/// saturation with axioms checked on atomic leaves only.
pub fn prove_lk(seq: &Sequent, budget: &SearchBudget) -> SearchResult {
    let mut fresh = FreshGen::new();
    fresh.reserve(seq.symbols());
    let mut search = LkSearch {
        budget: *budget,
        fresh,
        proved: HashMap::new(),
    };
    let mut path = HashSet::new();
    match search.solve(seq, &HashMap::new(), &mut path, 0) {
        Outcome::Proved(p) => SearchResult::Proved(p),
        Outcome::Fail { complete: true } => SearchResult::Refuted,
        Outcome::Fail { complete: false } => SearchResult::Unknown,
    }
}

impl LkSearch {
    fn solve(
        &mut self,
        seq: &Sequent,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> Outcome {
        if depth > self.budget.max_depth {
            return Outcome::incomplete();
        }
        let key = seq.canonical_key();
        if let Some(p) = self.proved.get(&key) {
            return Outcome::Proved(p.clone());
        }

        // Duplicate context formulas are collapsed through weakening;
        // provability is unchanged (contraction is a rule of the calculus)
        // and the search state stays bounded.
        if let Some(j) = find_duplicate(&seq.left) {
            let mut l = seq.left.clone();
            l.remove(j);
            let premise = Sequent::new(l, seq.right.clone());
            return self.unary(RuleId::WeakL, seq, ActiveHandle::Left(j), premise, uses, path, depth);
        }
        if let Some(j) = find_duplicate(&seq.right) {
            let mut r = seq.right.clone();
            r.remove(j);
            let premise = Sequent::new(seq.left.clone(), r);
            return self.unary(RuleId::WeakR, seq, ActiveHandle::Right(j), premise, uses, path, depth);
        }

        // Invertible phase: decompose the first compound formula. Left
        // universals and right existentials wait for the witness phase.
        if let Some(i) = seq
            .left
            .iter()
            .position(|f| !f.is_atomic() && !matches!(f, Formula::Forall(_, _)))
        {
            return self.left_rule(seq, i, uses, path, depth);
        }
        if let Some(i) = seq
            .right
            .iter()
            .position(|f| !f.is_atomic() && !matches!(f, Formula::Exists(_, _)))
        {
            return self.right_rule(seq, i, uses, path, depth);
        }

        // Leaf phase: atoms plus left universals and right existentials.
        if let Some(proof) = atomic_axiom(seq) {
            self.proved.insert(key, proof.clone());
            return Outcome::Proved(proof);
        }

        let quantified: Vec<(bool, usize)> = seq
            .left
            .iter()
            .enumerate()
            .filter(|(_, f)| matches!(f, Formula::Forall(_, _)))
            .map(|(i, _)| (true, i))
            .chain(
                seq.right
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| matches!(f, Formula::Exists(_, _)))
                    .map(|(i, _)| (false, i)),
            )
            .collect();
        if quantified.is_empty() {
            return Outcome::certain();
        }

        if !path.insert(key.clone()) {
            // The same sequent already occurs below on this branch; a
            // minimal proof never repeats it.
            return Outcome::certain();
        }
        let mut result = Outcome::incomplete();
        let terms = candidate_terms(seq, self.budget.max_term_depth);
        'outer: for (on_left, i) in quantified {
            let f = if on_left { &seq.left[i] } else { &seq.right[i] };
            let fkey = format!("{}:{}", if on_left { "L" } else { "R" }, f.canonical());
            let used = uses.get(&fkey).copied().unwrap_or(0);
            if used > self.budget.max_contractions_per_formula {
                continue;
            }
            let keep = used < self.budget.max_contractions_per_formula;
            let mut uses = uses.clone();
            *uses.entry(fkey).or_insert(0) += 1;
            for t in terms.clone() {
                let attempt = if on_left {
                    self.instantiate_forall_left(seq, i, &t, keep, &uses, path, depth)
                } else {
                    self.instantiate_exists_right(seq, i, &t, keep, &uses, path, depth)
                };
                if let Outcome::Proved(p) = attempt {
                    result = Outcome::Proved(p);
                    break 'outer;
                }
            }
        }
        path.remove(&seq.canonical_key());
        if let Outcome::Proved(p) = &result {
            self.proved.insert(seq.canonical_key(), p.clone());
        }
        result
    }

    #[allow(clippy::too_many_arguments)]
    fn instantiate_forall_left(
        &mut self,
        seq: &Sequent,
        i: usize,
        t: &Term,
        keep: bool,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> Outcome {
        let Formula::Forall(x, body) = &seq.left[i] else {
            unreachable!()
        };
        let inst = body.substitute(x, t);
        let mut left = seq.left.clone();
        if keep {
            left.push(inst);
        } else {
            left[i] = inst;
        }
        let premise = Sequent::new(left, seq.right.clone());
        match self.solve(&premise, uses, path, depth + 1) {
            Outcome::Proved(sub) => {
                let rule_node = if keep {
                    // contr_l keeps the universal for further instantiation:
                    // the forall_l premise retains a copy.
                    let mid = ProofNode::new(
                        RuleId::ForallL,
                        plain(
                            {
                                let mut l = seq.left.clone();
                                l.push(seq.left[i].clone());
                                l
                            },
                            seq.right.clone(),
                        ),
                        vec![sub],
                    )
                    .with_active(ActiveHandle::Left(seq.left.len()))
                    .with_witness(t.clone());
                    node(RuleId::ContrL, seq, vec![mid]).with_active(ActiveHandle::Left(i))
                } else {
                    node(RuleId::ForallL, seq, vec![sub])
                        .with_active(ActiveHandle::Left(i))
                        .with_witness(t.clone())
                };
                Outcome::Proved(rule_node)
            }
            fail => fail,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn instantiate_exists_right(
        &mut self,
        seq: &Sequent,
        i: usize,
        t: &Term,
        keep: bool,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> Outcome {
        let Formula::Exists(x, body) = &seq.right[i] else {
            unreachable!()
        };
        let inst = body.substitute(x, t);
        let mut right = seq.right.clone();
        if keep {
            right.push(inst);
        } else {
            right[i] = inst;
        }
        let premise = Sequent::new(seq.left.clone(), right);
        match self.solve(&premise, uses, path, depth + 1) {
            Outcome::Proved(sub) => {
                let rule_node = if keep {
                    let mid = ProofNode::new(
                        RuleId::ExistsR,
                        plain(seq.left.clone(), {
                            let mut r = seq.right.clone();
                            r.push(seq.right[i].clone());
                            r
                        }),
                        vec![sub],
                    )
                    .with_active(ActiveHandle::Right(seq.right.len()))
                    .with_witness(t.clone());
                    node(RuleId::ContrR, seq, vec![mid]).with_active(ActiveHandle::Right(i))
                } else {
                    node(RuleId::ExistsR, seq, vec![sub])
                        .with_active(ActiveHandle::Right(i))
                        .with_witness(t.clone())
                };
                Outcome::Proved(rule_node)
            }
            fail => fail,
        }
    }

    fn left_rule(
        &mut self,
        seq: &Sequent,
        i: usize,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> Outcome {
        let f = seq.left[i].clone();
        let rest = || {
            let mut l = seq.left.clone();
            l.remove(i);
            l
        };
        match &f {
            Formula::And(a, b) => {
                let mut left = rest();
                left.push((**a).clone());
                left.push((**b).clone());
                let premise = Sequent::new(left, seq.right.clone());
                self.unary(RuleId::AndL, seq, ActiveHandle::Left(i), premise, uses, path, depth)
            }
            Formula::Or(a, b) => {
                let mut l1 = rest();
                l1.push((**a).clone());
                let mut l2 = rest();
                l2.push((**b).clone());
                self.binary(
                    RuleId::OrL,
                    seq,
                    ActiveHandle::Left(i),
                    Sequent::new(l1, seq.right.clone()),
                    Sequent::new(l2, seq.right.clone()),
                    uses,
                    path,
                    depth,
                )
            }
            Formula::Implies(a, b) => {
                let mut r1 = seq.right.clone();
                r1.push((**a).clone());
                let mut l2 = rest();
                l2.push((**b).clone());
                self.binary(
                    RuleId::ImpL,
                    seq,
                    ActiveHandle::Left(i),
                    Sequent::new(rest(), r1),
                    Sequent::new(l2, seq.right.clone()),
                    uses,
                    path,
                    depth,
                )
            }
            Formula::Not(a) => {
                let mut r = seq.right.clone();
                r.push((**a).clone());
                let premise = Sequent::new(rest(), r);
                self.unary(RuleId::NotL, seq, ActiveHandle::Left(i), premise, uses, path, depth)
            }
            Formula::Exists(x, body) => {
                let c = self.fresh.fresh("c");
                let inst = body.substitute(x, &Term::Const(c.clone()));
                let mut left = rest();
                left.push(inst);
                let premise = Sequent::new(left, seq.right.clone());
                match self.solve(&premise, uses, path, depth + 1) {
                    Outcome::Proved(sub) => Outcome::Proved(
                        node(RuleId::ExistsL, seq, vec![sub])
                            .with_active(ActiveHandle::Left(i))
                            .with_eigen(&c),
                    ),
                    fail => fail,
                }
            }
            Formula::Atom(_, _) | Formula::Forall(_, _) => unreachable!(),
        }
    }

    fn right_rule(
        &mut self,
        seq: &Sequent,
        i: usize,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> Outcome {
        let f = seq.right[i].clone();
        let rest = || {
            let mut r = seq.right.clone();
            r.remove(i);
            r
        };
        match &f {
            Formula::And(a, b) => {
                let mut r1 = rest();
                r1.push((**a).clone());
                let mut r2 = rest();
                r2.push((**b).clone());
                self.binary(
                    RuleId::AndR,
                    seq,
                    ActiveHandle::Right(i),
                    Sequent::new(seq.left.clone(), r1),
                    Sequent::new(seq.left.clone(), r2),
                    uses,
                    path,
                    depth,
                )
            }
            Formula::Or(a, b) => {
                let mut r = rest();
                r.push((**a).clone());
                r.push((**b).clone());
                let premise = Sequent::new(seq.left.clone(), r);
                self.unary(RuleId::OrR, seq, ActiveHandle::Right(i), premise, uses, path, depth)
            }
            Formula::Implies(a, b) => {
                let mut l = seq.left.clone();
                l.push((**a).clone());
                let mut r = rest();
                r.push((**b).clone());
                let premise = Sequent::new(l, r);
                self.unary(RuleId::ImpR, seq, ActiveHandle::Right(i), premise, uses, path, depth)
            }
            Formula::Not(a) => {
                let mut l = seq.left.clone();
                l.push((**a).clone());
                let premise = Sequent::new(l, rest());
                self.unary(RuleId::NotR, seq, ActiveHandle::Right(i), premise, uses, path, depth)
            }
            Formula::Forall(x, body) => {
                let c = self.fresh.fresh("c");
                let inst = body.substitute(x, &Term::Const(c.clone()));
                let mut r = rest();
                r.push(inst);
                let premise = Sequent::new(seq.left.clone(), r);
                match self.solve(&premise, uses, path, depth + 1) {
                    Outcome::Proved(sub) => Outcome::Proved(
                        node(RuleId::ForallR, seq, vec![sub])
                            .with_active(ActiveHandle::Right(i))
                            .with_eigen(&c),
                    ),
                    fail => fail,
                }
            }
            Formula::Atom(_, _) | Formula::Exists(_, _) => unreachable!(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn unary(
        &mut self,
        rule: RuleId,
        seq: &Sequent,
        active: ActiveHandle,
        premise: Sequent,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> Outcome {
        match self.solve(&premise, uses, path, depth + 1) {
            Outcome::Proved(sub) => {
                Outcome::Proved(node(rule, seq, vec![sub]).with_active(active))
            }
            fail => fail,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn binary(
        &mut self,
        rule: RuleId,
        seq: &Sequent,
        active: ActiveHandle,
        p1: Sequent,
        p2: Sequent,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> Outcome {
        let first = self.solve(&p1, uses, path, depth + 1);
        let Outcome::Proved(s1) = first else {
            return first;
        };
        match self.solve(&p2, uses, path, depth + 1) {
            Outcome::Proved(s2) => {
                Outcome::Proved(node(rule, seq, vec![s1, s2]).with_active(active))
            }
            fail => fail,
        }
    }
}

fn atomic_axiom(seq: &Sequent) -> Option<ProofNode> {
    for a in &seq.left {
        if !a.is_atomic() {
            continue;
        }
        if seq.right.iter().any(|b| a.alpha_eq(b)) {
            return Some(node(RuleId::Ax, seq, vec![]));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Intuitionistic search.

struct LjSearch {
    budget: SearchBudget,
    fresh: FreshGen,
    proved: HashMap<String, ProofNode>,
    // Failures are memoized together with the budget signature under which
    // they were observed; loop-pruned failures are path-dependent and are
    // not stored.
    failed: HashMap<String, bool>,
}

enum LjOutcome {
    Proved(ProofNode),
    Fail { complete: bool, pruned: bool },
}

/// Backward search in the intuitionistic calculus.
pub fn prove_lj(seq: &Sequent, budget: &SearchBudget) -> SearchResult {
    if seq.right.len() > 1 {
        return SearchResult::Refuted;
    }
    let mut fresh = FreshGen::new();
    fresh.reserve(seq.symbols());
    let mut search = LjSearch {
        budget: *budget,
        fresh,
        proved: HashMap::new(),
        failed: HashMap::new(),
    };
    let mut path = HashSet::new();
    match search.solve(seq, &HashMap::new(), &mut path, 0) {
        LjOutcome::Proved(p) => SearchResult::Proved(p),
        LjOutcome::Fail { complete: true, .. } => SearchResult::Refuted,
        LjOutcome::Fail { complete: false, .. } => SearchResult::Unknown,
    }
}

fn uses_signature(uses: &HashMap<String, usize>) -> String {
    let mut entries: Vec<String> = uses
        .iter()
        .filter(|(_, n)| **n > 0)
        .map(|(k, n)| format!("{}={}", k, n))
        .collect();
    entries.sort();
    entries.join(",")
}

impl LjSearch {
    fn solve(
        &mut self,
        seq: &Sequent,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> LjOutcome {
        if depth > self.budget.max_depth {
            return LjOutcome::Fail {
                complete: false,
                pruned: false,
            };
        }
        let key = seq.canonical_key();
        if let Some(p) = self.proved.get(&key) {
            return LjOutcome::Proved(p.clone());
        }
        let memo_key = format!("{}#{}", key, uses_signature(uses));
        if let Some(complete) = self.failed.get(&memo_key) {
            return LjOutcome::Fail {
                complete: *complete,
                pruned: false,
            };
        }

        // Axioms close eagerly; an axiom is always a minimal proof.
        if let [goal] = seq.right.as_slice() {
            if seq.left.iter().any(|a| a.alpha_eq(goal)) {
                let proof = node(RuleId::Ax, seq, vec![]);
                self.proved.insert(key, proof.clone());
                return LjOutcome::Proved(proof);
            }
        }

        // Collapse duplicate hypotheses through weakening to keep the
        // search state bounded.
        if let Some(j) = find_duplicate(&seq.left) {
            let mut l = seq.left.clone();
            l.remove(j);
            let premise = Sequent::new(l, seq.right.clone());
            return self.descend(
                RuleId::WeakL,
                seq,
                ActiveHandle::Left(j),
                None,
                None,
                premise,
                uses,
                path,
                depth,
            );
        }

        // Invertible phase.
        if let Some(i) = seq.left.iter().position(|f| {
            matches!(f, Formula::And(_, _) | Formula::Or(_, _) | Formula::Exists(_, _))
        }) {
            return self.invertible_left(seq, i, uses, path, depth);
        }
        if let [goal] = seq.right.as_slice() {
            if matches!(
                goal,
                Formula::And(_, _) | Formula::Implies(_, _) | Formula::Not(_) | Formula::Forall(_, _)
            ) {
                return self.invertible_right(seq, uses, path, depth);
            }
        }

        // Choice phase: additive disjunction and existential witnesses on
        // the right; implication, negation and universal instantiation on
        // the left.
        if !path.insert(key.clone()) {
            return LjOutcome::Fail {
                complete: true,
                pruned: true,
            };
        }
        let result = self.choices(seq, uses, path, depth);
        path.remove(&key);
        match &result {
            LjOutcome::Proved(p) => {
                self.proved.insert(key, p.clone());
            }
            LjOutcome::Fail { complete, pruned } => {
                if !pruned {
                    self.failed.insert(memo_key, *complete);
                }
            }
        }
        result
    }

    fn choices(
        &mut self,
        seq: &Sequent,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> LjOutcome {
        let mut complete = true;
        let mut pruned = false;
        fn consider(
            out: LjOutcome,
            complete: &mut bool,
            pruned: &mut bool,
        ) -> Option<ProofNode> {
            match out {
                LjOutcome::Proved(p) => Some(p),
                LjOutcome::Fail {
                    complete: c,
                    pruned: pr,
                } => {
                    *complete &= c;
                    *pruned |= pr;
                    None
                }
            }
        }

        let terms = candidate_terms(seq, self.budget.max_term_depth);

        // Right-side choices.
        if let [goal] = seq.right.as_slice() {
            match goal.clone() {
                Formula::Or(a, b) => {
                    for (rule, kept) in [(RuleId::OrR1, (*a).clone()), (RuleId::OrR2, (*b).clone())]
                    {
                        let premise = Sequent::new(seq.left.clone(), vec![kept]);
                        let out = self.descend(
                            rule,
                            seq,
                            ActiveHandle::Right(0),
                            None,
                            None,
                            premise,
                            uses,
                            path,
                            depth,
                        );
                        if let Some(p) = consider(out, &mut complete, &mut pruned) {
                            return LjOutcome::Proved(p);
                        }
                    }
                }
                Formula::Exists(x, body) => {
                    // The witness space is unbounded, so failing here can
                    // never certify refutation.
                    complete = false;
                    for t in terms.clone() {
                        let premise =
                            Sequent::new(seq.left.clone(), vec![body.substitute(&x, &t)]);
                        let out = self.descend(
                            RuleId::ExistsR,
                            seq,
                            ActiveHandle::Right(0),
                            Some(t),
                            None,
                            premise,
                            uses,
                            path,
                            depth,
                        );
                        if let Some(p) = consider(out, &mut complete, &mut pruned) {
                            return LjOutcome::Proved(p);
                        }
                    }
                }
                _ => {}
            }
        }

        // Left-side choices.
        for i in 0..seq.left.len() {
            let f = seq.left[i].clone();
            match &f {
                Formula::Implies(a, b) => {
                    let fkey = format!("L:{}", f.canonical());
                    let used = uses.get(&fkey).copied().unwrap_or(0);
                    let keep = used < self.budget.max_contractions_per_formula;
                    let mut uses2 = uses.clone();
                    *uses2.entry(fkey).or_insert(0) += 1;

                    let mut rest: Vec<Formula> = seq.left.clone();
                    rest.remove(i);
                    let mut retained = rest.clone();
                    if keep {
                        retained.push(f.clone());
                    }
                    let p1 = Sequent::new(retained, vec![(**a).clone()]);
                    let mut l2 = rest.clone();
                    l2.push((**b).clone());
                    let p2 = Sequent::new(l2, seq.right.clone());
                    let out = self.imp_l(seq, i, keep, p1, p2, &uses2, path, depth);
                    if !keep {
                        // Without retention the attempt is weaker than the
                        // full rule, so a failure is not exhaustive.
                        complete = false;
                    }
                    if let Some(p) = consider(out, &mut complete, &mut pruned) {
                        return LjOutcome::Proved(p);
                    }
                }
                Formula::Not(a) => {
                    let fkey = format!("L:{}", f.canonical());
                    let used = uses.get(&fkey).copied().unwrap_or(0);
                    let keep = used < self.budget.max_contractions_per_formula;
                    let mut uses2 = uses.clone();
                    *uses2.entry(fkey).or_insert(0) += 1;

                    let mut rest: Vec<Formula> = seq.left.clone();
                    rest.remove(i);
                    let mut retained = rest.clone();
                    if keep {
                        retained.push(f.clone());
                    }
                    let premise = Sequent::new(retained, vec![(**a).clone()]);
                    let out = self.not_l(seq, i, keep, premise, &uses2, path, depth);
                    if !keep {
                        complete = false;
                    }
                    if let Some(p) = consider(out, &mut complete, &mut pruned) {
                        return LjOutcome::Proved(p);
                    }
                }
                Formula::Forall(x, body) => {
                    let fkey = format!("L:{}", f.canonical());
                    let used = uses.get(&fkey).copied().unwrap_or(0);
                    if used > self.budget.max_contractions_per_formula {
                        complete = false;
                        continue;
                    }
                    let keep = used < self.budget.max_contractions_per_formula;
                    let mut uses2 = uses.clone();
                    *uses2.entry(fkey).or_insert(0) += 1;
                    complete = false;
                    for t in terms.clone() {
                        let inst = body.substitute(x, &t);
                        let mut left = seq.left.clone();
                        if keep {
                            left.push(inst);
                        } else {
                            left[i] = inst;
                        }
                        let premise = Sequent::new(left, seq.right.clone());
                        let out = self.forall_l(seq, i, keep, t, premise, &uses2, path, depth);
                        if let Some(p) = consider(out, &mut complete, &mut pruned) {
                            return LjOutcome::Proved(p);
                        }
                    }
                }
                _ => {}
            }
        }

        LjOutcome::Fail { complete, pruned }
    }

    fn invertible_left(
        &mut self,
        seq: &Sequent,
        i: usize,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> LjOutcome {
        let f = seq.left[i].clone();
        let mut rest = seq.left.clone();
        rest.remove(i);
        match &f {
            Formula::And(a, b) => {
                let mut l = rest;
                l.push((**a).clone());
                l.push((**b).clone());
                let premise = Sequent::new(l, seq.right.clone());
                self.descend(
                    RuleId::AndL,
                    seq,
                    ActiveHandle::Left(i),
                    None,
                    None,
                    premise,
                    uses,
                    path,
                    depth,
                )
            }
            Formula::Or(a, b) => {
                let mut l1 = rest.clone();
                l1.push((**a).clone());
                let mut l2 = rest;
                l2.push((**b).clone());
                let p1 = Sequent::new(l1, seq.right.clone());
                let p2 = Sequent::new(l2, seq.right.clone());
                let first = self.solve(&p1, uses, path, depth + 1);
                let LjOutcome::Proved(s1) = first else {
                    return first;
                };
                match self.solve(&p2, uses, path, depth + 1) {
                    LjOutcome::Proved(s2) => LjOutcome::Proved(
                        node(RuleId::OrL, seq, vec![s1, s2]).with_active(ActiveHandle::Left(i)),
                    ),
                    fail => fail,
                }
            }
            Formula::Exists(x, body) => {
                let c = self.fresh.fresh("c");
                let inst = body.substitute(x, &Term::Const(c.clone()));
                let mut l = rest;
                l.push(inst);
                let premise = Sequent::new(l, seq.right.clone());
                match self.solve(&premise, uses, path, depth + 1) {
                    LjOutcome::Proved(sub) => LjOutcome::Proved(
                        node(RuleId::ExistsL, seq, vec![sub])
                            .with_active(ActiveHandle::Left(i))
                            .with_eigen(&c),
                    ),
                    fail => fail,
                }
            }
            _ => unreachable!(),
        }
    }

    fn invertible_right(
        &mut self,
        seq: &Sequent,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> LjOutcome {
        let goal = seq.right[0].clone();
        match &goal {
            Formula::And(a, b) => {
                let p1 = Sequent::new(seq.left.clone(), vec![(**a).clone()]);
                let p2 = Sequent::new(seq.left.clone(), vec![(**b).clone()]);
                let first = self.solve(&p1, uses, path, depth + 1);
                let LjOutcome::Proved(s1) = first else {
                    return first;
                };
                match self.solve(&p2, uses, path, depth + 1) {
                    LjOutcome::Proved(s2) => LjOutcome::Proved(
                        node(RuleId::AndR, seq, vec![s1, s2]).with_active(ActiveHandle::Right(0)),
                    ),
                    fail => fail,
                }
            }
            Formula::Implies(a, b) => {
                let mut l = seq.left.clone();
                l.push((**a).clone());
                let premise = Sequent::new(l, vec![(**b).clone()]);
                self.descend(
                    RuleId::ImpR,
                    seq,
                    ActiveHandle::Right(0),
                    None,
                    None,
                    premise,
                    uses,
                    path,
                    depth,
                )
            }
            Formula::Not(a) => {
                let mut l = seq.left.clone();
                l.push((**a).clone());
                let premise = Sequent::new(l, vec![]);
                self.descend(
                    RuleId::NotR,
                    seq,
                    ActiveHandle::Right(0),
                    None,
                    None,
                    premise,
                    uses,
                    path,
                    depth,
                )
            }
            Formula::Forall(x, body) => {
                let c = self.fresh.fresh("c");
                let inst = body.substitute(x, &Term::Const(c.clone()));
                let premise = Sequent::new(seq.left.clone(), vec![inst]);
                match self.solve(&premise, uses, path, depth + 1) {
                    LjOutcome::Proved(sub) => LjOutcome::Proved(
                        node(RuleId::ForallR, seq, vec![sub])
                            .with_active(ActiveHandle::Right(0))
                            .with_eigen(&c),
                    ),
                    fail => fail,
                }
            }
            _ => unreachable!(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &mut self,
        rule: RuleId,
        seq: &Sequent,
        active: ActiveHandle,
        witness: Option<Term>,
        eigen: Option<String>,
        premise: Sequent,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> LjOutcome {
        match self.solve(&premise, uses, path, depth + 1) {
            LjOutcome::Proved(sub) => {
                let mut n = node(rule, seq, vec![sub]).with_active(active);
                if let Some(t) = witness {
                    n = n.with_witness(t);
                }
                if let Some(c) = eigen {
                    n = n.with_eigen(&c);
                }
                LjOutcome::Proved(n)
            }
            fail => fail,
        }
    }

    /// Left implication, optionally contracted first so the implication
    /// stays available in the first premise.
    #[allow(clippy::too_many_arguments)]
    fn imp_l(
        &mut self,
        seq: &Sequent,
        i: usize,
        keep: bool,
        p1: Sequent,
        p2: Sequent,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> LjOutcome {
        let first = self.solve(&p1, uses, path, depth + 1);
        let LjOutcome::Proved(s1) = first else {
            return first;
        };
        let second = self.solve(&p2, uses, path, depth + 1);
        let LjOutcome::Proved(s2) = second else {
            return second;
        };
        if keep {
            let mut doubled = seq.left.clone();
            doubled.push(seq.left[i].clone());
            let mid = ProofNode::new(RuleId::ImpL, plain(doubled, seq.right.clone()), vec![s1, s2])
                .with_active(ActiveHandle::Left(seq.left.len()));
            LjOutcome::Proved(
                node(RuleId::ContrL, seq, vec![mid]).with_active(ActiveHandle::Left(i)),
            )
        } else {
            LjOutcome::Proved(
                node(RuleId::ImpL, seq, vec![s1, s2]).with_active(ActiveHandle::Left(i)),
            )
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn not_l(
        &mut self,
        seq: &Sequent,
        i: usize,
        keep: bool,
        premise: Sequent,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> LjOutcome {
        match self.solve(&premise, uses, path, depth + 1) {
            LjOutcome::Proved(sub) => {
                if keep {
                    let mut doubled = seq.left.clone();
                    doubled.push(seq.left[i].clone());
                    let mid =
                        ProofNode::new(RuleId::NotL, plain(doubled, seq.right.clone()), vec![sub])
                            .with_active(ActiveHandle::Left(seq.left.len()));
                    LjOutcome::Proved(
                        node(RuleId::ContrL, seq, vec![mid]).with_active(ActiveHandle::Left(i)),
                    )
                } else {
                    LjOutcome::Proved(
                        node(RuleId::NotL, seq, vec![sub]).with_active(ActiveHandle::Left(i)),
                    )
                }
            }
            fail => fail,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn forall_l(
        &mut self,
        seq: &Sequent,
        i: usize,
        keep: bool,
        t: Term,
        premise: Sequent,
        uses: &HashMap<String, usize>,
        path: &mut HashSet<String>,
        depth: usize,
    ) -> LjOutcome {
        match self.solve(&premise, uses, path, depth + 1) {
            LjOutcome::Proved(sub) => {
                if keep {
                    let mut doubled = seq.left.clone();
                    doubled.push(seq.left[i].clone());
                    let mid = ProofNode::new(
                        RuleId::ForallL,
                        plain(doubled, seq.right.clone()),
                        vec![sub],
                    )
                    .with_active(ActiveHandle::Left(seq.left.len()))
                    .with_witness(t);
                    LjOutcome::Proved(
                        node(RuleId::ContrL, seq, vec![mid]).with_active(ActiveHandle::Left(i)),
                    )
                } else {
                    LjOutcome::Proved(
                        node(RuleId::ForallL, seq, vec![sub])
                            .with_active(ActiveHandle::Left(i))
                            .with_witness(t),
                    )
                }
            }
            fail => fail,
        }
    }
}

// ---------------------------------------------------------------------------
// Semantic oracle.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantifierPresent;

impl std::fmt::Display for QuantifierPresent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "formula contains a quantifier")
    }
}

impl std::error::Error for QuantifierPresent {}

/// Truth-table tautology check for propositional formulas. Distinct atoms
/// (by alpha-canonical rendering) are treated as independent variables.
pub fn decide_classical_prop(f: &Formula) -> Result<bool, QuantifierPresent> {
    decide_classical_sequent(&Sequent::new(vec![], vec![f.clone()]))
}

/// Truth-table validity of a propositional sequent: the conjunction of the
/// left implies the disjunction of the right in every valuation.
pub fn decide_classical_sequent(seq: &Sequent) -> Result<bool, QuantifierPresent> {
    if seq
        .left
        .iter()
        .chain(seq.right.iter())
        .any(Formula::has_quantifiers)
    {
        return Err(QuantifierPresent);
    }
    let mut atoms: Vec<String> = Vec::new();
    for f in seq.left.iter().chain(seq.right.iter()) {
        collect_atoms(f, &mut atoms);
    }
    atoms.sort();
    atoms.dedup();
    let n = atoms.len();
    assert!(n < 26, "truth-table oracle limited to 25 atoms");
    for bits in 0..(1u64 << n) {
        let valuation: HashMap<&str, bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.as_str(), bits & (1 << i) != 0))
            .collect();
        let premises = seq.left.iter().all(|f| eval(f, &valuation));
        let conclusion = seq.right.iter().any(|f| eval(f, &valuation));
        if premises && !conclusion {
            return Ok(false);
        }
    }
    Ok(true)
}

fn collect_atoms(f: &Formula, out: &mut Vec<String>) {
    match f {
        Formula::Atom(_, _) => out.push(f.canonical().to_string()),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        Formula::Not(a) => collect_atoms(a, out),
        Formula::Forall(_, _) | Formula::Exists(_, _) => unreachable!(),
    }
}

fn eval(f: &Formula, valuation: &HashMap<&str, bool>) -> bool {
    match f {
        Formula::Atom(_, _) => valuation[f.canonical().to_string().as_str()],
        Formula::And(a, b) => eval(a, valuation) && eval(b, valuation),
        Formula::Or(a, b) => eval(a, valuation) || eval(b, valuation),
        Formula::Implies(a, b) => !eval(a, valuation) || eval(b, valuation),
        Formula::Not(a) => !eval(a, valuation),
        Formula::Forall(_, _) | Formula::Exists(_, _) => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_lj, check_lk};
    use crate::parse::{parse_formula, parse_sequent};

    fn lk(s: &str) -> SearchResult {
        prove_lk(&parse_sequent(s).unwrap(), &SearchBudget::default())
    }

    fn lj(s: &str) -> SearchResult {
        prove_lj(&parse_sequent(s).unwrap(), &SearchBudget::default())
    }

    #[test]
    fn classical_basics() {
        let r = lk("P | ~P");
        assert!(r.is_proved());
        assert!(check_lk(r.proof().unwrap()).valid);
        assert!(matches!(lk("P"), SearchResult::Refuted));
        let peirce = lk("((P -> Q) -> P) -> P");
        assert!(peirce.is_proved());
        assert!(check_lk(peirce.proof().unwrap()).valid);
        assert!(decide_classical_prop(&parse_formula("((P -> Q) -> P) -> P").unwrap()).unwrap());
    }

    #[test]
    fn intuitionistic_basics() {
        assert!(matches!(lj("P | ~P"), SearchResult::Refuted));
        let r = lj("~~(P | ~P)");
        assert!(r.is_proved(), "double negation of excluded middle");
        assert!(
            check_lj(r.proof().unwrap()).valid,
            "{}",
            check_lj(r.proof().unwrap())
        );
        assert!(lj("P -> P").is_proved());
        assert!(matches!(lj("~~P -> P"), SearchResult::Refuted));
    }

    #[test]
    fn gg_image_of_excluded_middle_is_provable() {
        let f = parse_formula("P | ~P").unwrap();
        let img = crate::translate::translate(crate::translate::Scheme::GodelGentzen, &f);
        let r = prove_lj(&Sequent::new(vec![], vec![img]), &SearchBudget::default());
        assert!(r.is_proved());
        assert!(check_lj(r.proof().unwrap()).valid);
    }

    #[test]
    fn first_order_proofs() {
        let r = lk("P(a) |- exists x. P(x)");
        assert!(r.is_proved());
        assert!(check_lk(r.proof().unwrap()).valid);

        let r = lk("forall x. P(x) |- P(a)");
        assert!(r.is_proved());
        assert!(check_lk(r.proof().unwrap()).valid);

        // Reuse of a universal hypothesis requires contraction.
        let r = lk("forall x. P(x) |- P(a) & P(b)");
        assert!(r.is_proved());
        assert!(check_lk(r.proof().unwrap()).valid);

        let r = lj("forall x. P(x) |- exists x. P(x)");
        assert!(r.is_proved());
        assert!(check_lj(r.proof().unwrap()).valid);
    }

    #[test]
    fn drinker_needs_classical_logic() {
        // exists x. (P(x) -> forall y. P(y)): classically provable.
        let s = "exists x. (P(x) -> forall y. P(y))";
        assert!(lk(s).is_proved());
        assert!(!lj(s).is_proved());
    }

    #[test]
    fn truth_table_agrees_on_examples() {
        assert!(decide_classical_prop(&parse_formula("P -> P").unwrap()).unwrap());
        assert!(!decide_classical_prop(&parse_formula("P & ~P").unwrap()).unwrap());
        assert!(decide_classical_prop(&parse_formula("A & B -> (A | B)").unwrap()).unwrap());
        assert!(decide_classical_prop(&parse_formula("forall x. P(x)").unwrap()).is_err());
    }
}
