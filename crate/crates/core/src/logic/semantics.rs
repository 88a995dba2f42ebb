use super::{Formula, LogicError, Model, ModelSet, Vocabulary};

/// Truth value of `f` in `m`.
pub fn eval(m: &Model, f: &Formula) -> Result<bool, LogicError> {
    if let Some(k) = f.max_atom() {
        if k >= m.width() {
            return Err(LogicError::VocabularyMismatch(format!(
                "formula references atom #{k} but the model assigns {} atoms",
                m.width()
            )));
        }
    }
    Ok(f.eval_bits(m.id()))
}

/// `Mod(f)`: every model of the vocabulary satisfying `f`.
pub fn models_of(vocab: &Vocabulary, f: &Formula) -> Result<ModelSet, LogicError> {
    vocab.check(f)?;
    Ok(model_set(vocab.len(), f))
}

fn model_set(width: usize, f: &Formula) -> ModelSet {
    match f {
        Formula::Atom(k) => ModelSet::atom(width, *k),
        Formula::Not(g) => model_set(width, g).complement(),
        Formula::And(l, r) => model_set(width, l).intersect(&model_set(width, r)),
        Formula::Or(l, r) => model_set(width, l).union(&model_set(width, r)),
        Formula::Implies(l, r) => model_set(width, l).complement().union(&model_set(width, r)),
        Formula::Iff(l, r) => {
            let (l, r) = (model_set(width, l), model_set(width, r));
            l.intersect(&r).union(&l.complement().intersect(&r.complement()))
        }
    }
}

/// Models of the conjunction of `formulas`; the full model space for an empty input.
pub fn models_of_all<'a, I>(vocab: &Vocabulary, formulas: I) -> Result<ModelSet, LogicError>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut acc = ModelSet::full(vocab.len());
    for f in formulas {
        acc = acc.intersect(&models_of(vocab, f)?);
    }
    Ok(acc)
}

pub fn entails<'a, I>(vocab: &Vocabulary, premises: I, claim: &Formula) -> Result<bool, LogicError>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let prem = models_of_all(vocab, premises)?;
    Ok(prem.is_subset(&models_of(vocab, claim)?))
}

pub fn consistent<'a, I>(vocab: &Vocabulary, formulas: I) -> Result<bool, LogicError>
where
    I: IntoIterator<Item = &'a Formula>,
{
    Ok(!models_of_all(vocab, formulas)?.is_empty())
}
