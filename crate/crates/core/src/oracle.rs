//! Independent pointwise semantics used to cross-check the symbolic layer:
//! evaluation of elements at groupoid points, pointwise convolution over
//! explicit factorizations, brute-force set comparison over a bounded grid
//! of boundary words, and deterministic point sampling.
//!
//! Everything here goes through `quotient`/`concat`/`member` only, never
//! through the composition or normalization machinery it is checking.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Element;
use crate::cylinder::{BasicSet, SetUnion};
use crate::error::Result;
use crate::groupoid::{Bisection, GroupoidPoint};
use crate::lambda::{
    BoundaryLetter, BoundaryVector, BoundaryWord, Ext, GroupVector, Letter, Side, Word,
};
use crate::sampling;
use crate::scalar::Scalar;

/// Deterministic sampling parameters; the same plan always yields the same
/// stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplePlan {
    pub seed: u64,
    pub depth: usize,
    pub count: usize,
}

/// Sum of the coefficients of the terms containing `g`.
pub fn eval_element(f: &Element, g: &GroupoidPoint) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (t, c) in f.terms() {
        if t.contains(g)? {
            acc = acc + c.clone();
        }
    }
    Ok(acc)
}

/// Convolution evaluated at a single point: sums coefficient products over
/// all factorizations `gamma = gamma1 · gamma2` with `gamma1` in a term of
/// `f` and `gamma2` in a term of `g`. Each term pair admits at most one
/// factorization because bisections are injective on sources and ranges.
pub fn convolve_pointwise(f: &Element, g: &Element, gamma: &GroupoidPoint) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (t1, c1) in f.terms() {
        let Some(z1) = t1.p().quotient_boundary(gamma.range())? else {
            continue;
        };
        if !t1.set().member(&z1)? {
            continue;
        }
        let mid = t1.q().concat_boundary(&z1)?;
        for (t2, c2) in g.terms() {
            let lag = t1.lag().checked_add(t2.lag())?;
            if &lag != gamma.lag() {
                continue;
            }
            let Some(z2) = t2.p().quotient_boundary(&mid)? else {
                continue;
            };
            if !t2.set().member(&z2)? {
                continue;
            }
            if &t2.q().concat_boundary(&z2)? != gamma.source() {
                continue;
            }
            acc = acc + c1.clone() * c2.clone();
        }
    }
    Ok(acc)
}

/// Pointwise evaluation of a gauge image, summing complex coefficients.
pub fn eval_gauge(
    terms: &[(Bisection, Complex64)],
    g: &GroupoidPoint,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, c) in terms {
        if t.contains(g)? {
            acc += c;
        }
    }
    Ok(acc)
}

/// Deterministic stream of valid groupoid points. With a support hint the
/// points are drawn inside the hinted bisection.
pub fn sample_points(
    n: usize,
    plan: &SamplePlan,
    hint: Option<&Bisection>,
) -> Result<Vec<GroupoidPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut out = Vec::with_capacity(plan.count);
    for _ in 0..plan.count {
        let g = match hint {
            Some(t) => {
                let z = sampling::rand_point_in(&mut rng, &t.set(), plan.depth)?;
                GroupoidPoint::new(
                    t.p().concat_boundary(&z)?,
                    t.lag().clone(),
                    t.q().concat_boundary(&z)?,
                )?
            }
            None => {
                let z = sampling::rand_boundary_word(&mut rng, n, plan.depth)?;
                let p = sampling::rand_word(&mut rng, n, plan.depth.min(3), 2)?;
                let q = sampling::rand_word(&mut rng, n, plan.depth.min(3), 2)?;
                let k = p.length()?.checked_sub(&q.length()?)?;
                GroupoidPoint::new(p.concat_boundary(&z)?, k, q.concat_boundary(&z)?)?
            }
        };
        out.push(g);
    }
    Ok(out)
}

/// All boundary words with at most `depth` letters whose interior letters
/// have coordinates in `[-bound, bound]` and whose closing boundary letter
/// has finite coordinates in `[0, bound]`.
pub fn enumerate_boundary_words(n: usize, depth: usize, bound: i64) -> Result<Vec<BoundaryWord>> {
    let letters = grid_letters(n, bound)?;
    let closers = grid_boundary_vectors(n, bound)?;
    let mut out = Vec::new();
    // stack of (interior prefix letters, next allowed side)
    let mut stack: Vec<Vec<Letter>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let sides: &[Side] = match prefix.last() {
            None => &[Side::A, Side::B],
            Some(l) => match l.side {
                Side::A => &[Side::B],
                Side::B => &[Side::A],
            },
        };
        for &side in sides {
            for b in &closers {
                let w = Word::new(n, prefix.clone())?;
                out.push(BoundaryWord::finite(
                    w,
                    BoundaryLetter::new(side, b.clone()),
                )?);
            }
            if prefix.len() + 1 < depth {
                for v in &letters {
                    let mut next = prefix.clone();
                    next.push(Letter::new(side, v.clone())?);
                    stack.push(next);
                }
            }
        }
    }
    Ok(out)
}

fn grid_letters(n: usize, bound: i64) -> Result<Vec<GroupVector>> {
    let mut out = Vec::new();
    let mut cur = vec![-bound; n];
    loop {
        let v = GroupVector::new(cur.clone())?;
        if v.is_positive() {
            out.push(v);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < bound {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -bound;
                }
                break;
            }
        }
    }
}

fn grid_boundary_vectors(n: usize, bound: i64) -> Result<Vec<BoundaryVector>> {
    // Enumerate by the index where ∞ starts, filling finite prefixes from
    // the grid.
    let mut out = Vec::new();
    for inf_from in 0..n {
        let mut cur = vec![0i64; inf_from];
        'tuples: loop {
            let mut coords: Vec<Ext> = cur.iter().map(|&c| Ext::Fin(c)).collect();
            coords.extend(std::iter::repeat(Ext::Inf).take(n - inf_from));
            out.push(BoundaryVector::new(coords)?);
            let mut i = inf_from;
            loop {
                if i == 0 {
                    break 'tuples;
                }
                i -= 1;
                if cur[i] < bound {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = 0;
                    }
                    continue 'tuples;
                }
            }
        }
    }
    Ok(out)
}

/// Compares two unions pointwise over the bounded grid; `false` refutes set
/// equality, `true` means the grid cannot distinguish them.
pub fn brute_force_set_equal(
    a: &SetUnion,
    b: &SetUnion,
    depth: usize,
    bound: i64,
) -> Result<bool> {
    let n = match a.parts().first().or_else(|| b.parts().first()) {
        Some(p) => p.dim().expect("nonempty part"),
        None => return Ok(true),
    };
    for x in enumerate_boundary_words(n, depth, bound)? {
        if a.member(&x)? != b.member(&x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches for a member of `set` among boundary words of at most `depth`
/// letters, pruning branches that cannot reach the root or that fell inside
/// a subtracted cylinder. The coordinate grid adapts to the set.
pub fn witness_search(set: &BasicSet, depth: usize) -> Result<Option<BoundaryWord>> {
    let BasicSet::Set { root, sub } = set else {
        return Ok(None);
    };
    let n = root.dim();
    let mut bound: i64 = 1;
    for w in std::iter::once(root).chain(sub.iter()) {
        for l in w.letters() {
            for &c in l.value.coords() {
                bound = bound.max(c.abs());
            }
        }
    }
    bound += 1;
    let letters = grid_letters(n, bound)?;
    let closers = grid_boundary_vectors(n, bound)?;
    let absolute: Vec<Word> =
        sub.iter().map(|r| root.concat(r)).collect::<Result<Vec<_>>>()?;

    fn rec(
        set: &BasicSet,
        root: &Word,
        absolute: &[Word],
        prefix: &Word,
        letters: &[GroupVector],
        closers: &[BoundaryVector],
        depth: usize,
    ) -> Result<Option<BoundaryWord>> {
        // Prune: no extension of `prefix` can re-enter V(root).
        if prefix.incomparable(root)? {
            return Ok(None);
        }
        // Prune: already swallowed by a subtracted cylinder.
        for a in absolute {
            if a.is_prefix_of(prefix)? {
                return Ok(None);
            }
        }
        let sides: &[Side] = match prefix.last_side() {
            None => &[Side::A, Side::B],
            Some(Side::A) => &[Side::B],
            Some(Side::B) => &[Side::A],
        };
        for &side in sides {
            for b in closers {
                let x = BoundaryWord::finite(
                    prefix.clone(),
                    BoundaryLetter::new(side, b.clone()),
                )?;
                if set.member(&x)? {
                    return Ok(Some(x));
                }
            }
            if prefix.len() + 1 < depth {
                for v in letters {
                    let next = prefix.concat(&Word::single(side, v.clone())?)?;
                    if next.len() > prefix.len() {
                        if let Some(x) =
                            rec(set, root, absolute, &next, letters, closers, depth)?
                        {
                            return Ok(Some(x));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    rec(set, root, &absolute, &Word::empty(n), &letters, &closers, depth)
}

/// Membership predicate agreement between a computed set and a reference
/// predicate over the grid.
pub fn agree_on_grid(
    n: usize,
    depth: usize,
    bound: i64,
    lhs: impl Fn(&BoundaryWord) -> Result<bool>,
    rhs: impl Fn(&BoundaryWord) -> Result<bool>,
) -> Result<bool> {
    for x in enumerate_boundary_words(n, depth, bound)? {
        if lhs(&x)? != rhs(&x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A uniformly random scalar with small rational parts; kept here so the
/// oracle and the suites agree on coefficient generation.
pub fn rand_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let num = rng.gen_range(-3i64..=3);
    let den = rng.gen_range(1i64..=3);
    let inum = rng.gen_range(-2i64..=2);
    Scalar::from_ratio(num, den) + Scalar::i() * Scalar::from_ratio(inum, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{parse_boundary_word, parse_word};

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn bw(s: &str) -> BoundaryWord {
        parse_boundary_word(s, 2).unwrap()
    }

    #[test]
    fn eval_indicator() {
        // χ_{U(p,q)} is 1 exactly on (pz, l(p)−l(q), qz)
        let p = w("a(1,0)");
        let q = w("b(2,0)");
        let f = Element::gen_pq(&p, &q).unwrap();
        let z = bw("a(0,inf)");
        let k = p.length().unwrap().checked_sub(&q.length().unwrap()).unwrap();
        let g = GroupoidPoint::new(
            p.concat_boundary(&z).unwrap(),
            k,
            q.concat_boundary(&z).unwrap(),
        )
        .unwrap();
        assert_eq!(eval_element(&f, &g).unwrap(), Scalar::one());
        // off support
        let h = GroupoidPoint::new(z.clone(), GroupVector::zero(2), z.clone()).unwrap();
        assert_eq!(eval_element(&f, &h).unwrap(), Scalar::zero());
    }

    #[test]
    fn pointwise_convolution_matches_product_on_generators() {
        // s_p · s_q at (pqz, l(pq), z) is 1
        let p = w("a(1,0)");
        let q = w("b(2,0)");
        let f = Element::gen_s(&p).unwrap();
        let g = Element::gen_s(&q).unwrap();
        let z = bw("a(0,inf)");
        let pq = p.concat(&q).unwrap();
        let gamma = GroupoidPoint::new(
            pq.concat_boundary(&z).unwrap(),
            pq.length().unwrap(),
            z.clone(),
        )
        .unwrap();
        assert_eq!(convolve_pointwise(&f, &g, &gamma).unwrap(), Scalar::one());
        let sym = f.mul(&g).unwrap();
        assert_eq!(eval_element(&sym, &gamma).unwrap(), Scalar::one());
    }

    #[test]
    fn grid_enumeration_counts() {
        let pts = enumerate_boundary_words(2, 2, 1).unwrap();
        // letters with coords in [-1,1], positive: (0,1), (1,-1), (1,0), (1,1) = 4
        // closers: (0,inf), (1,inf), (inf,inf) = 3
        // depth ≤ 2: 2·3 + 2·4·3 = 30
        assert_eq!(pts.len(), 30);
        // determinism
        let pts2 = enumerate_boundary_words(2, 2, 1).unwrap();
        assert_eq!(pts, pts2);
    }

    #[test]
    fn witness_search_agrees_with_is_empty() {
        let empty = BasicSet::new(w("a(1,0)"), vec![w("a(0,1)"), w("b(0,1)")]).unwrap();
        assert!(empty.is_empty());
        assert!(witness_search(&empty, 5).unwrap().is_none());

        let alive = BasicSet::new(w("a(1,0)"), vec![w("b(2,0)")]).unwrap();
        let found = witness_search(&alive, 5).unwrap().unwrap();
        assert!(alive.member(&found).unwrap());
    }

    #[test]
    fn sampling_is_deterministic_and_hinted() {
        let plan = SamplePlan { seed: 11, depth: 3, count: 20 };
        let a = sample_points(2, &plan, None).unwrap();
        let b = sample_points(2, &plan, None).unwrap();
        assert_eq!(a.len(), 20);
        assert_eq!(a, b);
        let t = Bisection::unit_pair(w("a(1,0)"), w("b(1,0)")).unwrap();
        for g in sample_points(2, &plan, Some(&t)).unwrap() {
            assert!(t.contains(&g).unwrap());
        }
    }

    #[test]
    fn brute_force_distinguishes() {
        let a = SetUnion::from_disjoint(vec![BasicSet::cylinder(w("a(1,0)"))]);
        let b = SetUnion::from_disjoint(vec![BasicSet::new(w("a(1,0)"), vec![w("b(1,0)")]).unwrap()]);
        assert!(!brute_force_set_equal(&a, &b, 3, 1).unwrap());
        assert!(brute_force_set_equal(&a, &a, 3, 1).unwrap());
        // split identity: V(μ) = V(μe') ∪ V(μe'')
        let mu = w("a(1,1)");
        let u = SetUnion::from_disjoint(vec![BasicSet::cylinder(mu.clone())]);
        let v = SetUnion::from_disjoint(vec![
            BasicSet::cylinder(mu.concat(&Word::unit(2, Side::A)).unwrap()),
            BasicSet::cylinder(mu.concat(&Word::unit(2, Side::B)).unwrap()),
        ]);
        assert!(brute_force_set_equal(&u, &v, 4, 1).unwrap());
    }
}
