//! Classical propositional logic over a finite, enumerable vocabulary.
//!
//! Formulas store atoms as indices into a [`Vocabulary`]; a [`Model`] is a
//! truth assignment encoded as the bits of its id, bit `k` holding the value of
//! atom `k`. Entailment and consistency are decided by model checking over
//! [`ModelSet`] bitsets.

mod formula;
mod model;
mod parser;
mod semantics;

pub use formula::{Formula, FormulaDisplay};
pub use model::{Model, ModelSet, ModelSetIter};
pub use parser::parse_formula;
pub use semantics::{consistent, entails, eval, models_of, models_of_all};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Default bound on the number of atoms, so that `2^n` models stay enumerable.
pub const DEFAULT_MAX_ATOMS: usize = 20;

/// Largest bound a vocabulary may be configured with (model ids are `u32`).
pub const HARD_MAX_ATOMS: usize = 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogicError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("vocabulary of {size} atoms exceeds the enumeration bound of {limit}")]
    VocabularyTooLarge { size: usize, limit: usize },
    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),
}

/// Ordered list of distinct atom names.
#[derive(Clone)]
pub struct Vocabulary {
    atoms: Vec<String>,
    limit: usize,
}

impl Vocabulary {
    pub fn new<I, S>(atoms: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_limit(atoms, DEFAULT_MAX_ATOMS)
    }

    /// Builds a vocabulary with a custom enumeration bound (capped at [`HARD_MAX_ATOMS`]).
    pub fn with_limit<I, S>(atoms: I, limit: usize) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let limit = limit.min(HARD_MAX_ATOMS);
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        for (i, name) in atoms.iter().enumerate() {
            if !is_identifier(name) {
                return Err(LogicError::InvalidAtomName(name.clone()));
            }
            if atoms[..i].contains(name) {
                return Err(LogicError::DuplicateAtom(name.clone()));
            }
        }
        if atoms.len() > limit {
            return Err(LogicError::VocabularyTooLarge { size: atoms.len(), limit });
        }
        Ok(Vocabulary { atoms, limit })
    }

    pub fn shared(self) -> Arc<Vocabulary> {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    pub fn name(&self, index: usize) -> Option<&str> {
        self.atoms.get(index).map(String::as_str)
    }

    /// Number of models, `2^n`.
    pub fn model_count(&self) -> usize {
        1usize << self.atoms.len()
    }

    pub fn models(&self) -> impl Iterator<Item = Model> + '_ {
        let width = self.len();
        (0..self.model_count() as u32).map(move |id| Model::from_id_unchecked(id, width))
    }

    pub fn parse(&self, text: &str) -> Result<Formula, LogicError> {
        parse_formula(text, self)
    }

    /// Checks that every atom of `f` belongs to this vocabulary.
    pub fn check(&self, f: &Formula) -> Result<(), LogicError> {
        match f.max_atom() {
            Some(k) if k >= self.len() => Err(LogicError::VocabularyMismatch(format!(
                "formula references atom #{k} but the vocabulary has {} atoms",
                self.len()
            ))),
            _ => Ok(()),
        }
    }
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms
    }
}

impl Eq for Vocabulary {}

impl fmt::Debug for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.atoms).finish()
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
