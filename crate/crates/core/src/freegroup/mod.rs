//! Reduced words in a free group `F_n` and the maps between them.

mod census;
mod endomorphism;
mod word;

pub use census::{
    count_cyclically_reduced, count_reduced, enumerate_cyclically_reduced, sample_cyclically_reduced,
    sample_cyclically_reduced_upto, CyclicallyReducedWords,
};
pub use endomorphism::Endomorphism;
pub use word::{parse_word_lines, parse_word_list, Alphabet, Letter, Word};

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn raw_word(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
        prop::collection::vec(
            (1..=rank as i32, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g }),
            0..max_len,
        )
    }

    fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
        raw_word(rank, max_len).prop_map(move |raw| Word::reduce(&raw, Alphabet::new(rank).unwrap()).unwrap())
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent_and_shortening(raw in raw_word(3, 24)) {
            let a = Alphabet::new(3).unwrap();
            let once = Word::reduce(&raw, a).unwrap();
            let twice = Word::from_letters(a, once.letters().iter().copied()).unwrap();
            prop_assert_eq!(&once, &twice);
            prop_assert!(once.len() <= raw.len());
        }

        #[test]
        fn inverse_cancels(u in word(3, 20)) {
            prop_assert!(u.multiply(&u.inverse()).unwrap().is_empty());
            prop_assert!(u.inverse().multiply(&u).unwrap().is_empty());
        }

        #[test]
        fn multiplication_associates(u in word(2, 12), v in word(2, 12), x in word(2, 12)) {
            let left = u.multiply(&v).unwrap().multiply(&x).unwrap();
            let right = u.multiply(&v.multiply(&x).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn cyclic_reduce_reassembles(u in word(2, 20)) {
            let (core, conj) = u.cyclic_reduce();
            prop_assert!(core.is_cyclically_reduced());
            let back = conj.multiply(&core).unwrap().multiply(&conj.inverse()).unwrap();
            prop_assert_eq!(back, u);
        }

        #[test]
        fn endomorphism_laws(
            ia in word(2, 6), ib in word(2, 6),
            ja in word(2, 6), jb in word(2, 6),
            u in word(2, 10), v in word(2, 10),
        ) {
            let a = Alphabet::new(2).unwrap();
            let phi = Endomorphism::new(a, vec![ia, ib]).unwrap();
            let psi = Endomorphism::new(a, vec![ja, jb]).unwrap();
            let uv = u.multiply(&v).unwrap();
            prop_assert_eq!(
                phi.apply(&uv).unwrap(),
                phi.apply(&u).unwrap().multiply(&phi.apply(&v).unwrap()).unwrap()
            );
            let composed = phi.compose(&psi).unwrap();
            prop_assert_eq!(composed.apply(&u).unwrap(), phi.apply(&psi.apply(&u).unwrap()).unwrap());
        }
    }
}
