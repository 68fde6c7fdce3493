//! Proof objects shared by the three calculi: sequents, rule identifiers,
//! rule-labeled proof trees and the JSON interchange format.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::{Formula, Term};
use crate::parse::{parse_formula, parse_term, ParseError};

/// A two-sided sequent. Both sides are multisets; the vectors are storage
/// order only, and all comparisons go through [`multiset_eq`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub left: Vec<Formula>,
    pub right: Vec<Formula>,
}

impl Sequent {
    pub fn new(left: Vec<Formula>, right: Vec<Formula>) -> Sequent {
        Sequent { left, right }
    }

    pub fn symbols(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        for f in self.left.iter().chain(self.right.iter()) {
            out.extend(f.symbols());
        }
        out
    }

    /// Structural equality up to alpha-equivalence and multiset reordering.
    pub fn multiset_eq(&self, other: &Sequent) -> bool {
        multiset_eq(&self.left, &other.left) && multiset_eq(&self.right, &other.right)
    }

    pub fn canonical_key(&self) -> String {
        format!(
            "{}|{}",
            canonical_multiset_key(&self.left),
            canonical_multiset_key(&self.right)
        )
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.left.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", g)?;
        }
        if self.left.is_empty() {
            write!(f, "|-")?;
        } else {
            write!(f, " |-")?;
        }
        for (i, g) in self.right.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {}", g)?;
        }
        Ok(())
    }
}

/// A focused sequent: left multiset, a stoup holding zero or one formula,
/// and the remaining right multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FocusedSequent {
    pub left: Vec<Formula>,
    pub stoup: Option<Formula>,
    pub right: Vec<Formula>,
}

impl FocusedSequent {
    pub fn new(left: Vec<Formula>, stoup: Option<Formula>, right: Vec<Formula>) -> FocusedSequent {
        FocusedSequent { left, stoup, right }
    }

    pub fn symbols(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        for f in self.left.iter().chain(self.right.iter()).chain(self.stoup.iter()) {
            out.extend(f.symbols());
        }
        out
    }

    pub fn multiset_eq(&self, other: &FocusedSequent) -> bool {
        multiset_eq(&self.left, &other.left)
            && multiset_eq(&self.right, &other.right)
            && match (&self.stoup, &other.stoup) {
                (None, None) => true,
                (Some(a), Some(b)) => a.alpha_eq(b),
                _ => false,
            }
    }

    /// The plain sequent obtained by merging the stoup into the right side.
    pub fn unfocused(&self) -> Sequent {
        let mut right = Vec::with_capacity(self.right.len() + 1);
        if let Some(s) = &self.stoup {
            right.push(s.clone());
        }
        right.extend(self.right.iter().cloned());
        Sequent::new(self.left.clone(), right)
    }
}

impl fmt::Display for FocusedSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.left.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", g)?;
        }
        if self.left.is_empty() {
            write!(f, "|-")?;
        } else {
            write!(f, " |-")?;
        }
        match &self.stoup {
            Some(s) => write!(f, " {};", s)?,
            None => write!(f, " .;")?,
        }
        for (i, g) in self.right.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {}", g)?;
        }
        Ok(())
    }
}

/// Multiset equality of formula lists up to alpha-equivalence.
pub fn multiset_eq(a: &[Formula], b: &[Formula]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut ca: Vec<Formula> = a.iter().map(|f| f.canonical()).collect();
    let mut cb: Vec<Formula> = b.iter().map(|f| f.canonical()).collect();
    ca.sort();
    cb.sort();
    ca == cb
}

fn canonical_multiset_key(fs: &[Formula]) -> String {
    let mut keys: Vec<String> = fs.iter().map(|f| f.canonical().to_string()).collect();
    keys.sort();
    keys.join(";;")
}

/// Removes one occurrence alpha-equal to `f`; None if there is none.
pub fn remove_one(fs: &[Formula], f: &Formula) -> Option<Vec<Formula>> {
    let idx = fs.iter().position(|g| g.alpha_eq(f))?;
    let mut out = fs.to_vec();
    out.remove(idx);
    Some(out)
}

/// `fs` with the occurrence at `idx` replaced by `with`.
pub fn replace_at(fs: &[Formula], idx: usize, with: &[Formula]) -> Vec<Formula> {
    let mut out = Vec::with_capacity(fs.len() + with.len());
    out.extend_from_slice(&fs[..idx]);
    out.extend_from_slice(with);
    out.extend_from_slice(&fs[idx + 1..]);
    out
}

/// `fs` without the occurrence at `idx`.
pub fn without(fs: &[Formula], idx: usize) -> Vec<Formula> {
    replace_at(fs, idx, &[])
}

/// Rule identifiers across all three calculi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum RuleId {
    Ax,
    AndL,
    AndR,
    OrL,
    OrR,
    OrR1,
    OrR2,
    ImpL,
    ImpR,
    NotL,
    NotR,
    ExistsL,
    ExistsR,
    ForallL,
    ForallR,
    ContrL,
    ContrR,
    WeakL,
    WeakR,
    Focus,
    Release,
}

impl RuleId {
    pub fn name(self) -> &'static str {
        match self {
            RuleId::Ax => "ax",
            RuleId::AndL => "and_l",
            RuleId::AndR => "and_r",
            RuleId::OrL => "or_l",
            RuleId::OrR => "or_r",
            RuleId::OrR1 => "or_r1",
            RuleId::OrR2 => "or_r2",
            RuleId::ImpL => "imp_l",
            RuleId::ImpR => "imp_r",
            RuleId::NotL => "not_l",
            RuleId::NotR => "not_r",
            RuleId::ExistsL => "exists_l",
            RuleId::ExistsR => "exists_r",
            RuleId::ForallL => "forall_l",
            RuleId::ForallR => "forall_r",
            RuleId::ContrL => "contr_l",
            RuleId::ContrR => "contr_r",
            RuleId::WeakL => "weak_l",
            RuleId::WeakR => "weak_r",
            RuleId::Focus => "focus",
            RuleId::Release => "release",
        }
    }

    /// Number of premises the rule takes.
    pub fn arity(self) -> usize {
        match self {
            RuleId::Ax => 0,
            RuleId::AndR | RuleId::OrL | RuleId::ImpL => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Identifies the principal occurrence a rule instance decomposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActiveHandle {
    Left(usize),
    Right(usize),
    Stoup,
}

/// The conclusion of a proof node: plain for LK/LJ, focused for LKF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conclusion {
    Plain(Sequent),
    Focused(FocusedSequent),
}

impl Conclusion {
    pub fn as_plain(&self) -> Option<&Sequent> {
        match self {
            Conclusion::Plain(s) => Some(s),
            Conclusion::Focused(_) => None,
        }
    }

    pub fn as_focused(&self) -> Option<&FocusedSequent> {
        match self {
            Conclusion::Plain(_) => None,
            Conclusion::Focused(s) => Some(s),
        }
    }

    pub fn symbols(&self) -> std::collections::BTreeSet<String> {
        match self {
            Conclusion::Plain(s) => s.symbols(),
            Conclusion::Focused(s) => s.symbols(),
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::Plain(s) => write!(f, "{}", s),
            Conclusion::Focused(s) => write!(f, "{}", s),
        }
    }
}

/// A rule-labeled proof tree node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofNode {
    pub rule: RuleId,
    pub conclusion: Conclusion,
    pub premises: Vec<ProofNode>,
    pub active: Option<ActiveHandle>,
    pub witness: Option<Term>,
    pub eigen: Option<String>,
}

impl ProofNode {
    pub fn new(rule: RuleId, conclusion: Conclusion, premises: Vec<ProofNode>) -> ProofNode {
        ProofNode {
            rule,
            conclusion,
            premises,
            active: None,
            witness: None,
            eigen: None,
        }
    }

    pub fn with_active(mut self, active: ActiveHandle) -> ProofNode {
        self.active = Some(active);
        self
    }

    pub fn with_witness(mut self, witness: Term) -> ProofNode {
        self.witness = Some(witness);
        self
    }

    pub fn with_eigen(mut self, eigen: &str) -> ProofNode {
        self.eigen = Some(eigen.to_owned());
        self
    }

    /// Height of the tree: leaves count 1.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::height).max().unwrap_or(0)
    }

    /// Total number of nodes.
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::node_count).sum::<usize>()
    }

    /// The root conclusion.
    pub fn end_sequent(&self) -> &Conclusion {
        &self.conclusion
    }

    /// All symbols occurring anywhere in the proof, including eigensymbols
    /// and witness terms.
    pub fn all_symbols(&self) -> std::collections::BTreeSet<String> {
        let mut out = self.conclusion.symbols();
        if let Some(t) = &self.witness {
            t.symbols(&mut out);
        }
        if let Some(c) = &self.eigen {
            out.insert(c.clone());
        }
        for p in &self.premises {
            out.extend(p.all_symbols());
        }
        out
    }

    /// Renames the constant `old` to `new` in every sequent, witness and
    /// eigensymbol of the proof.
    pub fn rename_const(&self, old: &str, new: &str) -> ProofNode {
        let conclusion = match &self.conclusion {
            Conclusion::Plain(s) => Conclusion::Plain(Sequent::new(
                s.left.iter().map(|f| f.rename_const(old, new)).collect(),
                s.right.iter().map(|f| f.rename_const(old, new)).collect(),
            )),
            Conclusion::Focused(s) => Conclusion::Focused(FocusedSequent::new(
                s.left.iter().map(|f| f.rename_const(old, new)).collect(),
                s.stoup.as_ref().map(|f| f.rename_const(old, new)),
                s.right.iter().map(|f| f.rename_const(old, new)).collect(),
            )),
        };
        ProofNode {
            rule: self.rule,
            conclusion,
            premises: self.premises.iter().map(|p| p.rename_const(old, new)).collect(),
            active: self.active,
            witness: self.witness.as_ref().map(|t| rename_term_const(t, old, new)),
            eigen: self.eigen.as_ref().map(|c| {
                if c == old {
                    new.to_owned()
                } else {
                    c.clone()
                }
            }),
        }
    }
}

fn rename_term_const(t: &Term, old: &str, new: &str) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::Const(c) if c == old => Term::Const(new.to_owned()),
        Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| rename_term_const(a, old, new)).collect(),
        ),
    }
}

/// Verdict of a proof checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub valid: bool,
    pub failure: Option<CheckFailure>,
}

/// First violation found: path of premise indices from the root, plus a
/// description of the violated side condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub path: Vec<usize>,
    pub reason: String,
}

impl CheckReport {
    pub fn ok() -> CheckReport {
        CheckReport {
            valid: true,
            failure: None,
        }
    }

    pub fn fail(path: Vec<usize>, reason: impl Into<String>) -> CheckReport {
        CheckReport {
            valid: false,
            failure: Some(CheckFailure {
                path,
                reason: reason.into(),
            }),
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "valid"),
            Some(fail) => write!(f, "invalid at {:?}: {}", fail.path, fail.reason),
        }
    }
}

// JSON interchange. Formulas and terms travel as concrete-syntax strings.

#[derive(Serialize, Deserialize)]
struct JsonSequent {
    left: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stoup: Option<String>,
    right: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonActive {
    Stoup(String),
    Indexed { side: String, index: usize },
}

#[derive(Serialize, Deserialize)]
struct JsonProof {
    rule: RuleId,
    conclusion: JsonSequent,
    #[serde(default)]
    premises: Vec<JsonProof>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    active: Option<JsonActive>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eigen: Option<String>,
}

/// Error loading a proof from JSON: either malformed JSON or an unparseable
/// formula inside it.
#[derive(Debug)]
pub enum ProofLoadError {
    Json(serde_json::Error),
    Formula(ParseError),
}

impl fmt::Display for ProofLoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofLoadError::Json(e) => write!(f, "malformed proof JSON: {}", e),
            ProofLoadError::Formula(e) => write!(f, "bad formula in proof: {}", e),
        }
    }
}

impl std::error::Error for ProofLoadError {}

impl From<serde_json::Error> for ProofLoadError {
    fn from(e: serde_json::Error) -> Self {
        ProofLoadError::Json(e)
    }
}

impl From<ParseError> for ProofLoadError {
    fn from(e: ParseError) -> Self {
        ProofLoadError::Formula(e)
    }
}

fn to_json(p: &ProofNode) -> JsonProof {
    let conclusion = match &p.conclusion {
        Conclusion::Plain(s) => JsonSequent {
            left: s.left.iter().map(|f| f.to_string()).collect(),
            stoup: None,
            right: s.right.iter().map(|f| f.to_string()).collect(),
        },
        Conclusion::Focused(s) => JsonSequent {
            left: s.left.iter().map(|f| f.to_string()).collect(),
            // A focused sequent with an empty stoup serializes as ".".
            stoup: Some(s.stoup.as_ref().map(|f| f.to_string()).unwrap_or_else(|| ".".to_owned())),
            right: s.right.iter().map(|f| f.to_string()).collect(),
        },
    };
    JsonProof {
        rule: p.rule,
        conclusion,
        premises: p.premises.iter().map(to_json).collect(),
        active: p.active.map(|a| match a {
            ActiveHandle::Stoup => JsonActive::Stoup("stoup".to_owned()),
            ActiveHandle::Left(i) => JsonActive::Indexed {
                side: "left".to_owned(),
                index: i,
            },
            ActiveHandle::Right(i) => JsonActive::Indexed {
                side: "right".to_owned(),
                index: i,
            },
        }),
        witness: p.witness.as_ref().map(|t| t.to_string()),
        eigen: p.eigen.clone(),
    }
}

fn from_json(j: &JsonProof) -> Result<ProofNode, ProofLoadError> {
    let left = j
        .conclusion
        .left
        .iter()
        .map(|s| parse_formula(s))
        .collect::<Result<Vec<_>, _>>()?;
    let right = j
        .conclusion
        .right
        .iter()
        .map(|s| parse_formula(s))
        .collect::<Result<Vec<_>, _>>()?;
    let conclusion = match &j.conclusion.stoup {
        None => Conclusion::Plain(Sequent::new(left, right)),
        Some(s) if s == "." || s.is_empty() => {
            Conclusion::Focused(FocusedSequent::new(left, None, right))
        }
        Some(s) => Conclusion::Focused(FocusedSequent::new(left, Some(parse_formula(s)?), right)),
    };
    let active = match &j.active {
        None => None,
        Some(JsonActive::Stoup(s)) if s == "stoup" => Some(ActiveHandle::Stoup),
        Some(JsonActive::Stoup(other)) => {
            return Err(ProofLoadError::Json(serde_json::Error::io(
                std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    format!("bad active handle '{}'", other),
                ),
            )))
        }
        Some(JsonActive::Indexed { side, index }) => match side.as_str() {
            "left" => Some(ActiveHandle::Left(*index)),
            "right" => Some(ActiveHandle::Right(*index)),
            other => {
                return Err(ProofLoadError::Json(serde_json::Error::io(
                    std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("bad active side '{}'", other),
                    ),
                )))
            }
        },
    };
    Ok(ProofNode {
        rule: j.rule,
        conclusion,
        premises: j.premises.iter().map(from_json).collect::<Result<Vec<_>, _>>()?,
        active,
        witness: j.witness.as_ref().map(|t| parse_term(t)).transpose()?,
        eigen: j.eigen.clone(),
    })
}

/// Serializes a proof to the interchange JSON.
pub fn proof_to_json(p: &ProofNode) -> String {
    serde_json::to_string_pretty(&to_json(p)).expect("proof serialization cannot fail")
}

/// Loads a proof from interchange JSON.
pub fn proof_from_json(text: &str) -> Result<ProofNode, ProofLoadError> {
    let j: JsonProof = serde_json::from_str(text)?;
    from_json(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    #[test]
    fn height_and_end_sequent() {
        let p = Formula::atom("P");
        let ax = ProofNode::new(
            RuleId::Ax,
            Conclusion::Plain(Sequent::new(vec![p.clone()], vec![p.clone()])),
            vec![],
        );
        assert_eq!(ax.height(), 1);
        assert_eq!(
            ax.end_sequent().as_plain().unwrap(),
            &Sequent::new(vec![p.clone()], vec![p.clone()])
        );

        let and = Formula::and(p.clone(), p.clone());
        let two = ProofNode::new(
            RuleId::AndR,
            Conclusion::Plain(Sequent::new(vec![p.clone()], vec![and])),
            vec![ax.clone(), ax.clone()],
        );
        assert_eq!(two.height(), 2);

        let mut chain = ax;
        for _ in 0..3 {
            let concl = chain.conclusion.clone();
            chain = ProofNode::new(RuleId::ContrL, concl, vec![chain])
                .with_active(ActiveHandle::Left(0));
        }
        assert_eq!(chain.height(), 4);
    }

    #[test]
    fn multiset_comparison() {
        let a = Formula::atom("A");
        let b = Formula::atom("B");
        assert!(multiset_eq(
            &[a.clone(), b.clone(), a.clone()],
            &[b.clone(), a.clone(), a.clone()]
        ));
        assert!(!multiset_eq(&[a.clone(), a.clone()], &[a.clone()]));
        let fx = Formula::forall("x", Formula::pred("P", vec![Term::var("x")]));
        let fy = Formula::forall("y", Formula::pred("P", vec![Term::var("y")]));
        assert!(multiset_eq(&[fx], &[fy]));
    }

    #[test]
    fn json_round_trip() {
        let s = "forall x. P(x) -> Q(a)";
        let f = crate::parse::parse_formula(s).unwrap();
        let node = ProofNode::new(
            RuleId::ForallR,
            Conclusion::Focused(FocusedSequent::new(vec![], Some(f.clone()), vec![f.clone()])),
            vec![],
        )
        .with_active(ActiveHandle::Stoup)
        .with_eigen("c1")
        .with_witness(Term::app("f", vec![Term::constant("a")]));
        let json = proof_to_json(&node);
        let back = proof_from_json(&json).unwrap();
        assert_eq!(node, back);
    }
}
