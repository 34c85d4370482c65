//! Seeded random elements.

use rand::Rng;

use super::{GroupElement, GroupSpec, Letter, Word};

/// A uniformly random reduced word of exactly `len` letters in `F_rank`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, rank: u32, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5));
        if letters.last().is_some_and(|p| p.cancels(l)) {
            continue;
        }
        letters.push(l);
    }
    Word::from_reduced(letters)
}

/// A random element built from a random letter string of length at most
/// `max_len` (per direct-product coordinate).
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, spec: &GroupSpec, max_len: usize) -> GroupElement {
    match spec {
        GroupSpec::Free(k) => {
            let len = rng.gen_range(0..=max_len);
            GroupElement::Free(random_word(rng, *k, len))
        }
        GroupSpec::Product(fs) => {
            GroupElement::Product(fs.iter().map(|f| random_element(rng, f, max_len)).collect())
        }
        GroupSpec::FreeProduct(fs) => {
            let len = rng.gen_range(0..=max_len);
            let letters: Vec<Letter> = (0..len)
                .map(|_| Letter::new(rng.gen_range(0..fs.len() as u32), rng.gen_bool(0.5)))
                .collect();
            spec.from_letters(letters).expect("generators in range")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn words_have_requested_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for len in 0..20 {
            let w = random_word(&mut rng, 2, len);
            assert_eq!(w.len(), len);
            assert!(w.is_reduced());
        }
    }

    #[test]
    fn elements_belong_to_spec() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for text in ["free(3)", "product(free(2),free(3))", "freeprod(z,z/2,z/3)"] {
            let spec = GroupSpec::parse(text).unwrap();
            for _ in 0..200 {
                let g = random_element(&mut rng, &spec, 8);
                spec.check(&g).unwrap();
            }
        }
    }
}
