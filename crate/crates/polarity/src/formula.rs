//! First-order syntax: terms, formulas, substitution, antinegation,
//! occurrence polarity and negation counting.

use std::collections::BTreeSet;
use std::fmt;

/// A first-order term: a variable, a constant, or a function application.
///
/// Whether a nullary identifier is a variable or a constant is decided at
/// construction time (the parser binds identifiers that are in scope of a
/// quantifier as variables, everything else as constants).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_owned())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_owned())
    }

    pub fn app(function: &str, args: Vec<Term>) -> Term {
        Term::App(function.to_owned(), args)
    }

    /// Free variables of the term.
    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => {
                for a in args {
                    a.vars(out);
                }
            }
        }
    }

    /// Constant and function identifiers occurring in the term.
    pub fn symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::App(f, args) => {
                out.insert(f.clone());
                for a in args {
                    a.symbols(out);
                }
            }
        }
    }

    fn substitute(&self, var: &str, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => t.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(var, t)).collect())
            }
        }
    }

    fn rename_const(&self, old: &str, new: &str) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Const(c) if c == old => Term::Const(new.to_owned()),
            Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| a.rename_const(old, new)).collect(),
            ),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v),
            Term::Const(c) => write!(f, "{}", c),
            Term::App(name, args) => {
                write!(f, "{}(", name)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", a)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A first-order formula over one-sorted terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String, Vec<Term>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

/// Polarity of a subformula occurrence: flips through negation bodies and
/// the left of an implication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// One step of an occurrence path: which child of a connective to enter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathStep {
    Left,
    Right,
    Body,
}

/// A path from the root of a formula to one subformula occurrence.
pub type OccurrencePath = Vec<PathStep>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidPath {
    pub at: usize,
}

impl fmt::Display for InvalidPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "occurrence path invalid at step {}", self.at)
    }
}

impl std::error::Error for InvalidPath {}

impl Formula {
    pub fn atom(predicate: &str) -> Formula {
        Formula::Atom(predicate.to_owned(), vec![])
    }

    pub fn pred(predicate: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(predicate.to_owned(), args)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall(var.to_owned(), Box::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(var.to_owned(), Box::new(body))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_, _))
    }

    /// Number of negation nodes in the tree.
    pub fn count_negations(&self) -> usize {
        match self {
            Formula::Atom(_, _) => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.count_negations() + b.count_negations()
            }
            Formula::Not(a) => 1 + a.count_negations(),
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.count_negations(),
        }
    }

    /// Number of nodes in the tree (connectives, quantifiers and atoms).
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_, _) => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
        }
    }

    pub fn has_quantifiers(&self) -> bool {
        match self {
            Formula::Atom(_, _) => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.has_quantifiers() || b.has_quantifiers()
            }
            Formula::Not(a) => a.has_quantifiers(),
            Formula::Forall(_, _) | Formula::Exists(_, _) => true,
        }
    }

    /// The antinegation operator: strips a leading negation if there is one,
    /// otherwise adds one. Not a connective; it has no sequent rule.
    pub fn antinegate(&self) -> Formula {
        match self {
            Formula::Not(b) => (**b).clone(),
            _ => Formula::not(self.clone()),
        }
    }

    /// Polarity of the occurrence addressed by `path`: positive iff the
    /// number of flips (negation bodies and left sides of implications)
    /// along the path is even.
    pub fn polarity_at(&self, path: &[PathStep]) -> Result<Polarity, InvalidPath> {
        let mut cur = self;
        let mut pol = Polarity::Positive;
        for (i, step) in path.iter().enumerate() {
            match (cur, step) {
                (Formula::And(a, _), PathStep::Left) | (Formula::Or(a, _), PathStep::Left) => {
                    cur = a;
                }
                (Formula::And(_, b), PathStep::Right) | (Formula::Or(_, b), PathStep::Right) => {
                    cur = b;
                }
                (Formula::Implies(a, _), PathStep::Left) => {
                    pol = pol.flip();
                    cur = a;
                }
                (Formula::Implies(_, b), PathStep::Right) => {
                    cur = b;
                }
                (Formula::Not(a), PathStep::Body) => {
                    pol = pol.flip();
                    cur = a;
                }
                (Formula::Forall(_, a), PathStep::Body) | (Formula::Exists(_, a), PathStep::Body) => {
                    cur = a;
                }
                _ => return Err(InvalidPath { at: i }),
            }
        }
        Ok(pol)
    }

    /// The subformula addressed by `path`.
    pub fn at_path(&self, path: &[PathStep]) -> Result<&Formula, InvalidPath> {
        let mut cur = self;
        for (i, step) in path.iter().enumerate() {
            match (cur, step) {
                (Formula::And(a, _), PathStep::Left)
                | (Formula::Or(a, _), PathStep::Left)
                | (Formula::Implies(a, _), PathStep::Left) => cur = a,
                (Formula::And(_, b), PathStep::Right)
                | (Formula::Or(_, b), PathStep::Right)
                | (Formula::Implies(_, b), PathStep::Right) => cur = b,
                (Formula::Not(a), PathStep::Body)
                | (Formula::Forall(_, a), PathStep::Body)
                | (Formula::Exists(_, a), PathStep::Body) => cur = a,
                _ => return Err(InvalidPath { at: i }),
            }
        }
        Ok(cur)
    }

    /// Free variables of the formula.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out);
        out
    }

    fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => {
                for a in args {
                    a.vars(out);
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.free_vars_into(out);
                b.free_vars_into(out);
            }
            Formula::Not(a) => a.free_vars_into(out),
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                let mut inner = BTreeSet::new();
                a.free_vars_into(&mut inner);
                inner.remove(x);
                out.extend(inner);
            }
        }
    }

    /// All constant, function, predicate and free-variable identifiers
    /// occurring in the formula. Bound variables are excluded.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.symbols_into(&mut out);
        out.extend(self.free_vars());
        out
    }

    fn symbols_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p, args) => {
                out.insert(p.clone());
                for a in args {
                    a.symbols(out);
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.symbols_into(out);
                b.symbols_into(out);
            }
            Formula::Not(a) => a.symbols_into(out),
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.symbols_into(out),
        }
    }

    /// Capture-avoiding substitution of `t` for the free variable `var`.
    /// Bound variables are renamed (with a prime suffix) when they would
    /// capture a free variable of `t`.
    pub fn substitute(&self, var: &str, t: &Term) -> Formula {
        match self {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|a| a.substitute(var, t)).collect())
            }
            Formula::And(a, b) => Formula::and(a.substitute(var, t), b.substitute(var, t)),
            Formula::Or(a, b) => Formula::or(a.substitute(var, t), b.substitute(var, t)),
            Formula::Implies(a, b) => {
                Formula::implies(a.substitute(var, t), b.substitute(var, t))
            }
            Formula::Not(a) => Formula::not(a.substitute(var, t)),
            Formula::Forall(x, a) => {
                let (x, a) = rebind(x, a, var, t);
                Formula::Forall(x, Box::new(a))
            }
            Formula::Exists(x, a) => {
                let (x, a) = rebind(x, a, var, t);
                Formula::Exists(x, Box::new(a))
            }
        }
    }

    /// Renames every occurrence of the constant `old` to `new` (used when
    /// eigensymbols must be refreshed).
    pub fn rename_const(&self, old: &str, new: &str) -> Formula {
        match self {
            Formula::Atom(p, args) => Formula::Atom(
                p.clone(),
                args.iter().map(|a| a.rename_const(old, new)).collect(),
            ),
            Formula::And(a, b) => Formula::and(a.rename_const(old, new), b.rename_const(old, new)),
            Formula::Or(a, b) => Formula::or(a.rename_const(old, new), b.rename_const(old, new)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_const(old, new), b.rename_const(old, new))
            }
            Formula::Not(a) => Formula::not(a.rename_const(old, new)),
            Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(a.rename_const(old, new))),
            Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(a.rename_const(old, new))),
        }
    }

    /// Canonical alpha-normal form: bound variables renamed to positional
    /// names. Structural equality of canonical forms is alpha-equivalence.
    pub fn canonical(&self) -> Formula {
        self.canonical_rec(&mut Vec::new())
    }

    fn canonical_rec(&self, bound: &mut Vec<(String, String)>) -> Formula {
        match self {
            Formula::Atom(p, args) => Formula::Atom(
                p.clone(),
                args.iter().map(|a| canonical_term(a, bound)).collect(),
            ),
            Formula::And(a, b) => {
                Formula::and(a.canonical_rec(bound), b.canonical_rec(bound))
            }
            Formula::Or(a, b) => Formula::or(a.canonical_rec(bound), b.canonical_rec(bound)),
            Formula::Implies(a, b) => {
                Formula::implies(a.canonical_rec(bound), b.canonical_rec(bound))
            }
            Formula::Not(a) => Formula::not(a.canonical_rec(bound)),
            Formula::Forall(x, a) => {
                let fresh = format!("#{}", bound.len());
                bound.push((x.clone(), fresh.clone()));
                let body = a.canonical_rec(bound);
                bound.pop();
                Formula::Forall(fresh, Box::new(body))
            }
            Formula::Exists(x, a) => {
                let fresh = format!("#{}", bound.len());
                bound.push((x.clone(), fresh.clone()));
                let body = a.canonical_rec(bound);
                bound.pop();
                Formula::Exists(fresh, Box::new(body))
            }
        }
    }

    /// Alpha-equivalence: equality up to renaming of bound variables. This
    /// is the formula equality used by every calculus rule.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self.canonical() == other.canonical()
    }
}

fn canonical_term(t: &Term, bound: &[(String, String)]) -> Term {
    match t {
        Term::Var(v) => {
            for (orig, fresh) in bound.iter().rev() {
                if orig == v {
                    return Term::Var(fresh.clone());
                }
            }
            Term::Var(v.clone())
        }
        Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| canonical_term(a, bound)).collect(),
        ),
    }
}

fn rebind(x: &str, body: &Formula, var: &str, t: &Term) -> (String, Formula) {
    if x == var {
        // Bound occurrences shadow the substituted variable.
        return (x.to_owned(), (*body).clone());
    }
    let mut tvars = BTreeSet::new();
    t.vars(&mut tvars);
    if tvars.contains(x) && body.free_vars().contains(var) {
        // The binder would capture a free variable of t; rename it first.
        let mut avoid = body.free_vars();
        avoid.extend(tvars);
        avoid.insert(var.to_owned());
        let mut fresh = format!("{}'", x);
        while avoid.contains(&fresh) {
            fresh.push('\'');
        }
        let renamed = body.substitute(x, &Term::Var(fresh.clone()));
        (fresh, renamed.substitute(var, t))
    } else {
        (x.to_owned(), body.substitute(var, t))
    }
}

/// Produces identifiers unused by anything seen so far.
#[derive(Clone, Debug, Default)]
pub struct FreshGen {
    used: BTreeSet<String>,
    counter: usize,
}

impl FreshGen {
    pub fn new() -> FreshGen {
        FreshGen::default()
    }

    pub fn reserve<I: IntoIterator<Item = String>>(&mut self, names: I) {
        self.used.extend(names);
    }

    pub fn fresh(&mut self, prefix: &str) -> String {
        loop {
            self.counter += 1;
            let candidate = format!("{}{}", prefix, self.counter);
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
        }
    }
}

// Rendering with minimal parentheses. Precedence, loosest to tightest:
// quantifiers (scope to the end of the enclosing group), ->, |, &, ~.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f, 0)
    }
}

fn write_formula(fm: &Formula, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
    match fm {
        Formula::Atom(p, args) => {
            write!(f, "{}", p)?;
            if !args.is_empty() {
                write!(f, "(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", a)?;
                }
                write!(f, ")")?;
            }
            Ok(())
        }
        Formula::Implies(a, b) => {
            let parens = ctx > 1;
            if parens {
                write!(f, "(")?;
            }
            write_formula(a, f, 2)?;
            write!(f, " -> ")?;
            write_formula(b, f, 1)?;
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }
        Formula::Or(a, b) => {
            let parens = ctx > 2;
            if parens {
                write!(f, "(")?;
            }
            write_formula(a, f, 2)?;
            write!(f, " | ")?;
            write_formula(b, f, 3)?;
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }
        Formula::And(a, b) => {
            let parens = ctx > 3;
            if parens {
                write!(f, "(")?;
            }
            write_formula(a, f, 3)?;
            write!(f, " & ")?;
            write_formula(b, f, 4)?;
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }
        Formula::Not(a) => {
            write!(f, "~")?;
            match **a {
                Formula::Atom(_, _) | Formula::Not(_) => write_formula(a, f, 4),
                _ => {
                    write!(f, "(")?;
                    write_formula(a, f, 0)?;
                    write!(f, ")")
                }
            }
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let word = if matches!(fm, Formula::Forall(_, _)) {
                "forall"
            } else {
                "exists"
            };
            // A quantifier scopes to the end of its group, so it only prints
            // bare at top level or as the trailing arm of an implication.
            let parens = ctx > 1;
            if parens {
                write!(f, "(")?;
            }
            write!(f, "{} {}. ", word, x)?;
            write_formula(a, f, 0)?;
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

/// Renders a formula to its concrete-syntax string.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("P")
    }

    fn q() -> Formula {
        Formula::atom("Q")
    }

    #[test]
    fn antinegate_strips_one_negation() {
        let conj = Formula::and(Formula::atom("A"), Formula::atom("B"));
        assert_eq!(Formula::not(conj.clone()).antinegate(), conj);
        let pa = Formula::pred("P", vec![Term::constant("a")]);
        assert_eq!(pa.antinegate(), Formula::not(pa.clone()));
        let nnp = Formula::not(Formula::not(p()));
        assert_eq!(nnp.antinegate(), Formula::not(p()));
    }

    #[test]
    fn antinegate_of_not_is_identity() {
        for f in [p(), Formula::not(p()), Formula::implies(p(), q())] {
            assert_eq!(Formula::not(f.clone()).antinegate(), f);
        }
    }

    #[test]
    fn polarity_examples() {
        let a = Formula::atom("A");
        assert_eq!(a.polarity_at(&[]).unwrap(), Polarity::Positive);
        let imp = Formula::implies(Formula::atom("A"), Formula::atom("B"));
        assert_eq!(imp.polarity_at(&[PathStep::Left]).unwrap(), Polarity::Negative);
        let f = Formula::not(imp);
        assert_eq!(
            f.polarity_at(&[PathStep::Body, PathStep::Left]).unwrap(),
            Polarity::Positive
        );
        assert!(f.polarity_at(&[PathStep::Left]).is_err());
    }

    #[test]
    fn count_negations_examples() {
        // ~~(~~(~~A & ~~B) -> ~~(~~A | ~~B)) has 14 negations.
        let nn = |f: Formula| Formula::not(Formula::not(f));
        let a = Formula::atom("A");
        let b = Formula::atom("B");
        let f = nn(Formula::implies(
            nn(Formula::and(nn(a.clone()), nn(b.clone()))),
            nn(Formula::or(nn(a.clone()), nn(b.clone()))),
        ));
        assert_eq!(f.count_negations(), 14);
        assert_eq!(Formula::and(a.clone(), b.clone()).count_negations(), 0);
        // ~(~~~A & ~~~B) has 7.
        let nnn = |f: Formula| Formula::not(Formula::not(Formula::not(f)));
        let g = Formula::not(Formula::and(nnn(a), nnn(b)));
        assert_eq!(g.count_negations(), 7);
    }

    #[test]
    fn substitute_examples() {
        let px = Formula::pred("P", vec![Term::var("x")]);
        assert_eq!(
            px.substitute("x", &Term::constant("a")),
            Formula::pred("P", vec![Term::constant("a")])
        );

        let closed = Formula::forall("x", px.clone());
        assert_eq!(closed.substitute("x", &Term::constant("a")), closed);

        // (exists y. Q(x,y))[f(y)/x] renames the binder to avoid capture.
        let f = Formula::exists("y", Formula::pred("Q", vec![Term::var("x"), Term::var("y")]));
        let t = Term::app("f", vec![Term::var("y")]);
        let got = f.substitute("x", &t);
        let expected = Formula::exists(
            "y'",
            Formula::pred("Q", vec![t.clone(), Term::var("y'")]),
        );
        assert!(got.alpha_eq(&expected), "got {}", got);
        // The free y of the substituted term stays free.
        assert!(got.free_vars().contains("y"));
    }

    #[test]
    fn symbols_examples() {
        let pa = Formula::pred("P", vec![Term::constant("a")]);
        assert_eq!(
            pa.symbols().into_iter().collect::<Vec<_>>(),
            vec!["P".to_owned(), "a".to_owned()]
        );
        let all = Formula::forall("x", Formula::pred("P", vec![Term::var("x")]));
        assert_eq!(all.symbols().into_iter().collect::<Vec<_>>(), vec!["P".to_owned()]);
        let qfb = Formula::pred("Q", vec![Term::app("f", vec![Term::constant("b")])]);
        assert_eq!(
            qfb.symbols().into_iter().collect::<Vec<_>>(),
            vec!["Q".to_owned(), "b".to_owned(), "f".to_owned()]
        );
    }

    #[test]
    fn alpha_equivalence() {
        let f = Formula::forall("x", Formula::pred("P", vec![Term::var("x")]));
        let g = Formula::forall("y", Formula::pred("P", vec![Term::var("y")]));
        assert!(f.alpha_eq(&g));
        assert_ne!(f, g);
        let h = Formula::forall("y", Formula::pred("P", vec![Term::constant("y")]));
        assert!(!f.alpha_eq(&h));
    }
}
