use crate::error::{Error, Result};

use super::word::{Alphabet, Word};

/// An endomorphism of a free group, given by the image of each generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endomorphism {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.rank() {
            return Err(Error::InvalidParameter(format!(
                "endomorphism of rank {} needs {} images, got {}",
                alphabet.rank(),
                alphabet.rank(),
                images.len()
            )));
        }
        for img in &images {
            alphabet.check(img.alphabet())?;
        }
        Ok(Endomorphism { alphabet, images })
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let images = (0..alphabet.rank())
            .map(|g| Word::letter(alphabet, super::Letter::new(g, false)).expect("in range"))
            .collect();
        Endomorphism { alphabet, images }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &Word {
        &self.images[generator]
    }

    /// Substitutes every letter by its image (inverse letters by the inverse
    /// image) and reduces.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.alphabet.check(w.alphabet())?;
        let inverses: Vec<Word> = self.images.iter().map(Word::inverse).collect();
        let mut out = Word::identity(self.alphabet);
        for l in w.letters() {
            let img = if l.is_inverse() {
                &inverses[l.generator()]
            } else {
                &self.images[l.generator()]
            };
            out = out.mul_unchecked(img);
        }
        Ok(out)
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &Endomorphism) -> Result<Endomorphism> {
        self.alphabet.check(inner.alphabet)?;
        let images = inner
            .images
            .iter()
            .map(|img| self.apply(img))
            .collect::<Result<Vec<_>>>()?;
        Ok(Endomorphism {
            alphabet: self.alphabet,
            images,
        })
    }
}
