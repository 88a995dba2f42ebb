use std::fmt;

use super::{LogicError, Vocabulary};

/// A complete truth assignment. Bit `k` of the id is the value of atom `k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Model {
    id: u32,
    width: u8,
}

impl Model {
    pub fn from_id(id: u32, width: usize) -> Result<Self, LogicError> {
        if width > super::HARD_MAX_ATOMS {
            return Err(LogicError::VocabularyTooLarge { size: width, limit: super::HARD_MAX_ATOMS });
        }
        if (id as u64) >> width != 0 {
            return Err(LogicError::VocabularyMismatch(format!(
                "model id {id} does not fit in {width} atoms"
            )));
        }
        Ok(Self::from_id_unchecked(id, width))
    }

    pub(crate) fn from_id_unchecked(id: u32, width: usize) -> Self {
        Model { id, width: width as u8 }
    }

    pub fn from_assignment(values: &[bool]) -> Result<Self, LogicError> {
        let id = values
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, &v)| acc | ((v as u64) << k));
        Self::from_id(id as u32, values.len())
    }

    /// Looks up atoms by name; atoms not listed are false.
    pub fn from_true_atoms(vocab: &Vocabulary, names: &[&str]) -> Result<Self, LogicError> {
        let mut id = 0u32;
        for name in names {
            let k = vocab
                .index_of(name)
                .ok_or_else(|| LogicError::UnknownAtom((*name).to_string()))?;
            id |= 1 << k;
        }
        Ok(Self::from_id_unchecked(id, vocab.len()))
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn value(&self, atom: usize) -> bool {
        (self.id >> atom) & 1 == 1
    }

    pub fn assignment(&self) -> Vec<bool> {
        (0..self.width()).map(|k| self.value(k)).collect()
    }
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}<", self.id)?;
        for k in 0..self.width() {
            f.write_str(if self.value(k) { "T" } else { "F" })?;
        }
        f.write_str(">")
    }
}

/// A set of models of a fixed-width vocabulary, stored as a bitset over model ids.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModelSet {
    width: usize,
    words: Vec<u64>,
}

impl ModelSet {
    pub fn empty(width: usize) -> Self {
        let bits = 1usize << width;
        ModelSet { width, words: vec![0; bits.div_ceil(64)] }
    }

    pub fn full(width: usize) -> Self {
        let mut s = Self::empty(width);
        s.words.iter_mut().for_each(|w| *w = u64::MAX);
        s.trim();
        s
    }

    /// The models in which atom `k` is true.
    pub fn atom(width: usize, k: usize) -> Self {
        let mut s = Self::empty(width);
        if k < 6 {
            // Repeating pattern inside each word: runs of 2^k zeros then 2^k ones.
            let run = 1u32 << k;
            let mut pattern = 0u64;
            for bit in 0..64u32 {
                if (bit / run) % 2 == 1 {
                    pattern |= 1 << bit;
                }
            }
            s.words.iter_mut().for_each(|w| *w = pattern);
        } else {
            let run = 1usize << (k - 6);
            for (i, w) in s.words.iter_mut().enumerate() {
                if (i / run) % 2 == 1 {
                    *w = u64::MAX;
                }
            }
        }
        s.trim();
        s
    }

    fn trim(&mut self) {
        let bits = 1usize << self.width;
        if bits < 64 {
            self.words[0] &= (1u64 << bits) - 1;
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn contains(&self, id: u32) -> bool {
        let id = id as usize;
        id < (1usize << self.width) && (self.words[id / 64] >> (id % 64)) & 1 == 1
    }

    pub fn contains_model(&self, m: &Model) -> bool {
        m.width() == self.width && self.contains(m.id())
    }

    pub fn insert(&mut self, id: u32) {
        let id = id as usize;
        assert!(id < (1usize << self.width), "model id out of range");
        self.words[id / 64] |= 1 << (id % 64);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn complement(&self) -> Self {
        let mut s = ModelSet { width: self.width, words: self.words.iter().map(|w| !w).collect() };
        s.trim();
        s
    }

    pub fn intersect(&self, other: &Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        ModelSet {
            width: self.width,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        ModelSet {
            width: self.width,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Ids in ascending order.
    pub fn iter(&self) -> ModelSetIter<'_> {
        ModelSetIter { set: self, word: 0, current: self.words.first().copied().unwrap_or(0) }
    }

    pub fn models(&self) -> impl Iterator<Item = Model> + '_ {
        let width = self.width;
        self.iter().map(move |id| Model::from_id_unchecked(id, width))
    }
}

impl fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct ModelSetIter<'a> {
    set: &'a ModelSet,
    word: usize,
    current: u64,
}

impl Iterator for ModelSetIter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros();
                self.current &= self.current - 1;
                return Some((self.word * 64) as u32 + bit);
            }
            self.word += 1;
            self.current = *self.set.words.get(self.word)?;
        }
    }
}
