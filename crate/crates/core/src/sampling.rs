//! Deterministic random generators for words, boundary words, sets and
//! algebra elements. All randomness flows through a caller-provided
//! `ChaCha8Rng`, so identical seeds reproduce identical objects on every
//! platform.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cylinder::{cover_witness, BasicSet};
use crate::error::Result;
use crate::lambda::{
    BoundaryLetter, BoundaryVector, BoundaryWord, Ext, GroupVector, Letter, Side, Word,
};

pub fn rand_side(rng: &mut ChaCha8Rng) -> Side {
    if rng.gen_bool(0.5) {
        Side::A
    } else {
        Side::B
    }
}

/// A random strictly positive vector with coordinates in `[-bound, bound]`.
pub fn rand_positive_vector(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> GroupVector {
    loop {
        let coords: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        let v = GroupVector::new(coords).expect("n >= 1");
        if v.is_positive() {
            return v;
        }
    }
}

/// A random alternating word with up to `max_len` letters (possibly empty).
pub fn rand_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize, bound: i64) -> Result<Word> {
    let len = rng.gen_range(0..=max_len);
    let mut side = rand_side(rng);
    let mut letters = Vec::with_capacity(len);
    for _ in 0..len {
        letters.push(Letter::new(side, rand_positive_vector(rng, n, bound))?);
        side = side.other();
    }
    Word::new(n, letters)
}

/// A random nonempty word.
pub fn rand_nonempty_word(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_len: usize,
    bound: i64,
) -> Result<Word> {
    loop {
        let w = rand_word(rng, n, max_len, bound)?;
        if !w.is_empty() {
            return Ok(w);
        }
    }
}

/// A random boundary vector with finite coordinates in `[0, bound]`.
pub fn rand_boundary_vector(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Result<BoundaryVector> {
    let inf_from = rng.gen_range(0..n);
    let mut coords = Vec::with_capacity(n);
    for i in 0..n {
        if i < inf_from {
            coords.push(Ext::Fin(rng.gen_range(0..=bound)));
        } else {
            coords.push(Ext::Inf);
        }
    }
    BoundaryVector::new(coords)
}

/// A random finitely representable boundary point: a finite-boundary word or
/// an eventually periodic word, both with small prefixes.
pub fn rand_boundary_word(rng: &mut ChaCha8Rng, n: usize, depth: usize) -> Result<BoundaryWord> {
    let prefix = rand_word(rng, n, depth.min(3), 2)?;
    if rng.gen_bool(0.5) {
        let side = match prefix.last_side() {
            Some(s) => s.other(),
            None => rand_side(rng),
        };
        BoundaryWord::finite(
            prefix,
            BoundaryLetter::new(side, rand_boundary_vector(rng, n, 2)?),
        )
    } else {
        // A two-letter period avoids the single-copy collapse most of the
        // time and keeps equality tests interesting.
        let first = match prefix.last_side() {
            Some(s) => s.other(),
            None => rand_side(rng),
        };
        let period = Word::new(
            n,
            vec![
                Letter::new(first, rand_positive_vector(rng, n, 2))?,
                Letter::new(first.other(), rand_positive_vector(rng, n, 2))?,
            ],
        )?;
        BoundaryWord::periodic(prefix, period)
    }
}

/// A random canonical basic set with root length and subtracted family sizes
/// bounded by `max_root`, `max_sub` and `sub_len`.
pub fn rand_basic_set(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_root: usize,
    max_sub: usize,
    sub_len: usize,
    bound: i64,
) -> Result<BasicSet> {
    let root = rand_word(rng, n, max_root, bound)?;
    let k = rng.gen_range(0..=max_sub);
    let mut sub = Vec::with_capacity(k);
    for _ in 0..k {
        // Bias toward axis letters so cover situations actually occur.
        if rng.gen_bool(0.4) {
            let mut coords = vec![0i64; n];
            coords[n - 1] = rng.gen_range(1..=bound);
            let side = rand_side(rng);
            let mut w = Word::single(side, GroupVector::new(coords)?)?;
            if rng.gen_bool(0.3) {
                w = w.concat(&Word::unit(n, side.other()))?;
            }
            sub.push(w);
        } else {
            sub.push(rand_nonempty_word(rng, n, sub_len, bound)?);
        }
    }
    BasicSet::new(root, sub)
}

/// A random nonempty basic set.
pub fn rand_nonempty_set(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_root: usize,
    max_sub: usize,
    sub_len: usize,
    bound: i64,
) -> Result<BasicSet> {
    loop {
        let s = rand_basic_set(rng, n, max_root, max_sub, sub_len, bound)?;
        if !s.is_empty() {
            return Ok(s);
        }
    }
}

/// A random boundary point inside a nonempty set: an uncovered cylinder is
/// located exactly, then extended by a random tail.
pub fn rand_point_in(
    rng: &mut ChaCha8Rng,
    set: &BasicSet,
    depth: usize,
) -> Result<BoundaryWord> {
    let BasicSet::Set { root, sub } = set else {
        return Err(crate::error::Error::EmptySet);
    };
    let n = root.dim();
    // A plain random point often works and adds variety.
    for _ in 0..8 {
        let z = rand_boundary_word(rng, n, depth)?;
        let x = root.concat_boundary(&z)?;
        if set.member(&x)? {
            return Ok(x);
        }
    }
    let free = cover_witness(n, sub)?.expect("nonempty set has an uncovered cylinder");
    let stem = root.concat(&free)?;
    let z = rand_boundary_word(rng, n, depth)?;
    let x = stem.concat_boundary(&z)?;
    debug_assert!(set.member(&x)?);
    Ok(x)
}

/// A random pair of words with equal length vectors, for lag-zero
/// generators: the second word redistributes the letters of the first.
pub fn rand_equal_length_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_len: usize,
    bound: i64,
) -> Result<(Word, Word)> {
    let p = rand_nonempty_word(rng, n, max_len, bound)?;
    let total = p.length()?;
    for _ in 0..32 {
        // Split `total` into at most max_len positive letters.
        let parts = rng.gen_range(1..=max_len);
        let mut remaining = total.clone();
        let mut values = Vec::new();
        let mut ok = true;
        for i in 0..parts {
            if i + 1 == parts {
                if remaining.is_positive() {
                    values.push(remaining.clone());
                } else {
                    ok = false;
                }
                break;
            }
            let piece = rand_positive_vector(rng, n, bound);
            let rest = match remaining.checked_sub(&piece) {
                Ok(r) => r,
                Err(_) => {
                    ok = false;
                    break;
                }
            };
            if !rest.is_positive() {
                ok = false;
                break;
            }
            values.push(piece);
            remaining = rest;
        }
        if !ok {
            continue;
        }
        let mut side = rand_side(rng);
        let mut letters = Vec::with_capacity(values.len());
        for v in values {
            letters.push(Letter::new(side, v)?);
            side = side.other();
        }
        let q = Word::new(n, letters)?;
        if q.length()? == total {
            return Ok((p, q));
        }
    }
    // Fall back to a single letter carrying the whole length.
    let q = Word::single(rand_side(rng), total)?;
    Ok((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;

    #[test]
    fn equal_length_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let (p, q) = rand_equal_length_pair(&mut rng, 2, 3, 2).unwrap();
            assert_eq!(p.length().unwrap(), q.length().unwrap());
            assert!(!p.is_empty());
            assert!(!q.is_empty());
        }
    }

    #[test]
    fn points_land_inside_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let s = rand_nonempty_set(&mut rng, 2, 2, 3, 2, 2).unwrap();
            let x = rand_point_in(&mut rng, &s, 3).unwrap();
            assert!(s.member(&x).unwrap());
        }
    }

    #[test]
    fn boundary_words_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = rand_boundary_word(&mut rng, 2, 4).unwrap();
            assert_eq!(x.dim(), 2);
        }
    }
}
