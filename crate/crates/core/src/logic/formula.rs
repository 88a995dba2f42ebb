use std::fmt;

use super::Vocabulary;

/// Propositional formula. Atoms are indices into a [`Vocabulary`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(index: usize) -> Self {
        Formula::Atom(index)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    /// Left-nested conjunction; `None` for an empty input.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    pub fn max_atom(&self) -> Option<usize> {
        match self {
            Formula::Atom(k) => Some(*k),
            Formula::Not(f) => f.max_atom(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.max_atom().max(r.max_atom())
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    /// Evaluates against the bits of a model id. Atoms past bit 31 read as false.
    pub(crate) fn eval_bits(&self, bits: u32) -> bool {
        match self {
            Formula::Atom(k) => *k < 32 && (bits >> k) & 1 == 1,
            Formula::Not(f) => !f.eval_bits(bits),
            Formula::And(l, r) => l.eval_bits(bits) && r.eval_bits(bits),
            Formula::Or(l, r) => l.eval_bits(bits) || r.eval_bits(bits),
            Formula::Implies(l, r) => !l.eval_bits(bits) || r.eval_bits(bits),
            Formula::Iff(l, r) => l.eval_bits(bits) == r.eval_bits(bits),
        }
    }

    /// Renders in the concrete syntax accepted by [`super::parse_formula`].
    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, vocab }
    }

    pub fn to_text(&self, vocab: &Vocabulary) -> String {
        self.display(vocab).to_string()
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            Formula::Atom(_) => 6,
        }
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    vocab: &'a Vocabulary,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula, min_prec: u8) -> fmt::Result {
        let prec = node.precedence();
        let parens = prec < min_prec;
        if parens {
            f.write_str("(")?;
        }
        match node {
            Formula::Atom(k) => match self.vocab.name(*k) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "#{k}")?,
            },
            Formula::Not(inner) => {
                f.write_str("!")?;
                self.write(f, inner, 5)?;
            }
            // And, Or and Iff associate to the left, Implies to the right.
            Formula::And(l, r) => self.binary(f, l, " & ", r, prec, prec + 1)?,
            Formula::Or(l, r) => self.binary(f, l, " | ", r, prec, prec + 1)?,
            Formula::Iff(l, r) => self.binary(f, l, " <-> ", r, prec, prec + 1)?,
            Formula::Implies(l, r) => self.binary(f, l, " -> ", r, prec + 1, prec)?,
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }

    fn binary(
        &self,
        f: &mut fmt::Formatter<'_>,
        l: &Formula,
        op: &str,
        r: &Formula,
        left_min: u8,
        right_min: u8,
    ) -> fmt::Result {
        self.write(f, l, left_min)?;
        f.write_str(op)?;
        self.write(f, r, right_min)
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn prints_minimal_parentheses() {
        let v = vocab();
        let (a, b, c) = (Formula::atom(0), Formula::atom(1), Formula::atom(2));
        let f = Formula::implies(Formula::and(a.clone(), b.clone()), c.clone());
        assert_eq!(f.to_text(&v), "a & b -> c");
        let f = Formula::implies(Formula::implies(a.clone(), b.clone()), c.clone());
        assert_eq!(f.to_text(&v), "(a -> b) -> c");
        let f = Formula::implies(a.clone(), Formula::implies(b.clone(), c.clone()));
        assert_eq!(f.to_text(&v), "a -> b -> c");
        let f = Formula::and(a.clone(), Formula::and(b.clone(), c.clone()));
        assert_eq!(f.to_text(&v), "a & (b & c)");
        let f = Formula::not(Formula::or(a.clone(), Formula::not(b)));
        assert_eq!(f.to_text(&v), "!(a | !b)");
        let f = Formula::iff(a.clone(), Formula::iff(a, c));
        assert_eq!(f.to_text(&v), "a <-> (a <-> c)");
    }

    #[test]
    fn depth_and_max_atom() {
        let f = Formula::and(Formula::atom(0), Formula::not(Formula::atom(2)));
        assert_eq!(f.depth(), 2);
        assert_eq!(f.max_atom(), Some(2));
    }
}
