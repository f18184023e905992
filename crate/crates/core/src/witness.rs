//! Constructive certificates: separation of boundary points by disjoint
//! basic sets, contracting bisections inside a nonempty set, aperiodic
//! prefixes, and the source-fiber witnesses behind minimality.
//!
//! Every constructor validates its own output with the cylinder and
//! groupoid predicates before returning it.

use serde_json::{json, Value};

use crate::cylinder::{cover_witness, BasicSet};
use crate::error::{Error, Result};
use crate::groupoid::{Bisection, GroupoidPoint};
use crate::lambda::{
    BoundaryLetter, BoundaryVector, BoundaryWord, Ext, GroupVector, Letter, LetterView, Side, Word,
};

/// Two disjoint basic sets separating a pair of boundary points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationCertificate {
    pub a: BasicSet,
    pub b: BasicSet,
}

/// Builds a separation certificate for `x ≠ y`: a pair of disjoint basic
/// sets with `x ∈ A`, `y ∈ B`, constructed from the first letter where the
/// two words diverge.
pub fn separation_witness(x: &BoundaryWord, y: &BoundaryWord) -> Result<SeparationCertificate> {
    if x == y {
        return Err(Error::EqualPoints);
    }
    let n = x.dim();
    if y.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: y.dim() });
    }
    let bound = divergence_bound(x, y);
    let mut k = 0;
    let (alpha, beta) = loop {
        if k > bound {
            // Canonical forms are equal as sequences only for equal points.
            return Err(Error::EqualPoints);
        }
        let a = x.letter_at(k);
        let b = y.letter_at(k);
        match (a, b) {
            (Some(la), Some(lb)) if letters_equal(&la, &lb) => {
                k += 1;
            }
            (Some(la), Some(lb)) => break (own(&la), own(&lb)),
            _ => return Err(Error::EqualPoints),
        }
    };

    // Common prefix: the first k letters of x, all interior.
    let mut prefix_letters = Vec::with_capacity(k);
    for i in 0..k {
        match x.letter_at(i) {
            Some(LetterView::Interior(l)) => prefix_letters.push(l.clone()),
            _ => unreachable!("letters before a divergence are interior"),
        }
    }
    let w = Word::new(n, prefix_letters)?;

    let (a, b) = if alpha.side() != beta.side() {
        // Divergent copies: probe each branch by a cylinder.
        let a = BasicSet::cylinder(w.concat(&probe(n, &alpha)?)?);
        let b = BasicSet::cylinder(w.concat(&probe(n, &beta)?)?);
        (a, b)
    } else {
        separate_same_copy(n, &w, &alpha, &beta)?
    };

    let cert = SeparationCertificate { a, b };
    // Self-validation.
    if !cert.a.member(x)? || !cert.b.member(y)? || !cert.a.intersect(&cert.b)?.is_empty() {
        return Err(Error::EqualPoints);
    }
    Ok(cert)
}

#[derive(Debug, Clone)]
enum OwnLetter {
    Interior(Letter),
    Boundary(BoundaryLetter),
}

impl OwnLetter {
    fn side(&self) -> Side {
        match self {
            OwnLetter::Interior(l) => l.side,
            OwnLetter::Boundary(l) => l.side,
        }
    }

    fn ext_coords(&self) -> Vec<Ext> {
        match self {
            OwnLetter::Interior(l) => l.value.coords().iter().map(|&c| Ext::Fin(c)).collect(),
            OwnLetter::Boundary(l) => l.value.coords().to_vec(),
        }
    }

    fn is_interior(&self) -> bool {
        matches!(self, OwnLetter::Interior(_))
    }
}

fn own(v: &LetterView<'_>) -> OwnLetter {
    match v {
        LetterView::Interior(l) => OwnLetter::Interior((*l).clone()),
        LetterView::Boundary(l) => OwnLetter::Boundary((*l).clone()),
    }
}

fn letters_equal(a: &LetterView<'_>, b: &LetterView<'_>) -> bool {
    match (a, b) {
        (LetterView::Interior(x), LetterView::Interior(y)) => x == y,
        (LetterView::Boundary(x), LetterView::Boundary(y)) => x == y,
        _ => false,
    }
}

fn divergence_bound(x: &BoundaryWord, y: &BoundaryWord) -> usize {
    fn size(w: &BoundaryWord) -> (usize, usize) {
        match w {
            BoundaryWord::Finite { prefix, .. } => (prefix.len() + 1, 1),
            BoundaryWord::Periodic { prefix, period } => (prefix.len(), period.len()),
        }
    }
    let (px, dx) = size(x);
    let (py, dy) = size(y);
    px.max(py) + dx * dy + 2
}

// A cylinder extension containing the point continuing with this letter.
fn probe(n: usize, l: &OwnLetter) -> Result<Word> {
    match l {
        OwnLetter::Interior(l) => Word::new(n, vec![l.clone()]),
        OwnLetter::Boundary(l) => Ok(Word::unit(n, l.side)),
    }
}

// Same-copy divergence: produce (set containing the α-point, set containing
// the β-point).
fn separate_same_copy(
    n: usize,
    w: &Word,
    alpha: &OwnLetter,
    beta: &OwnLetter,
) -> Result<(BasicSet, BasicSet)> {
    let side = alpha.side();
    if let (OwnLetter::Interior(la), OwnLetter::Interior(lb)) = (alpha, beta) {
        // Both interior: the lex-larger letter pins its own cylinder, the
        // smaller point survives in the relative complement.
        let (small, big) = if la.value < lb.value { (la, lb) } else { (lb, la) };
        let cut = Word::new(n, vec![big.clone()])?;
        let inside = BasicSet::cylinder(w.concat(&cut)?);
        let outside = BasicSet::new(w.clone(), vec![cut])?;
        return Ok(if small == la { (outside, inside) } else { (inside, outside) });
    }

    // At least one boundary letter: cut at the first differing coordinate.
    let ea = alpha.ext_coords();
    let eb = beta.ext_coords();
    let j0 = ea
        .iter()
        .zip(&eb)
        .position(|(a, b)| a != b)
        .expect("letters differ");
    let (small, big, alpha_is_small) = if ea[j0] < eb[j0] {
        (&ea, &eb, true)
    } else {
        (&eb, &ea, false)
    };
    let big_is_interior = if alpha_is_small { beta.is_interior() } else { alpha.is_interior() };
    let mut coords = Vec::with_capacity(n);
    for i in 0..n {
        if i < j0 {
            coords.push(match small[i] {
                Ext::Fin(v) => v,
                Ext::Inf => 0,
            });
        } else if i == j0 {
            let Ext::Fin(v) = small[j0] else {
                unreachable!("the smaller coordinate at a divergence is finite");
            };
            coords.push(v + 1);
        } else if big_is_interior {
            // Keep the tail of the interior target so the cut stays lex
            // below it.
            coords.push(match big[i] {
                Ext::Fin(v) => v,
                Ext::Inf => unreachable!("interior letters are finite"),
            });
        } else {
            coords.push(0);
        }
    }
    let cut = Word::single(side, GroupVector::new(coords)?)?;
    let inside = BasicSet::cylinder(w.concat(&cut)?);
    let outside = BasicSet::new(w.clone(), vec![cut])?;
    Ok(if alpha_is_small { (outside, inside) } else { (inside, outside) })
}

/// A contracting bisection inside a nonempty set: `Z = [μ,0]_{V(μ)}` with
/// `V(μ) ⊆ U` and range `V(μμ)` a proper subset of `V(μ)`, witnessed by a
/// point.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub mu: Word,
    pub z: Bisection,
    pub source: BasicSet,
    pub range: BasicSet,
    pub strict_witness: BoundaryWord,
}

impl Contraction {
    pub fn to_json(&self) -> Value {
        json!({
            "mu": self.mu.to_string(),
            "z": self.z.to_json(),
            "source": self.source.to_json(),
            "range": self.range.to_json(),
            "strict_witness": self.strict_witness.to_string(),
        })
    }
}

/// Finds `μ` with `V(μ) ⊆ U` by locating a cylinder that escapes every
/// subtracted word, and returns the contracting bisection over it.
pub fn contraction_bisection(u: &BasicSet) -> Result<Contraction> {
    let BasicSet::Set { root, sub } = u else {
        return Err(Error::EmptySet);
    };
    let n = root.dim();
    let mu = match cover_witness(n, sub)? {
        Some(free) => root.concat(&free)?,
        None => unreachable!("a canonical nonempty set is not covered"),
    };
    let z = Bisection::new(mu.clone(), Word::empty(n), BasicSet::cylinder(mu.clone()))?
        .expect("cylinder is nonempty");
    let source = z.source_set()?;
    let range = z.range_set()?;
    // Certificate checks: s(Z) = V(μ) ⊆ U and r(Z) = V(μμ) ⊊ V(μ).
    if !source.subtract(u)?.is_empty() {
        return Err(Error::EmptySet);
    }
    if !range.subtract(&source)?.is_empty() {
        return Err(Error::EmptySet);
    }
    let escape_side = mu.first_side().expect("μ is nonempty").other();
    let tail = BoundaryWord::letter(BoundaryLetter::new(
        escape_side,
        BoundaryVector::minimal(n),
    ));
    let strict_witness = mu.concat_boundary(&tail)?;
    if !source.member(&strict_witness)? || range.member(&strict_witness)? {
        return Err(Error::EmptySet);
    }
    Ok(Contraction { mu, z, source, range, strict_witness })
}

/// A finite prefix of the canonical aperiodic point `η·a₁a₂a₃…` with
/// strictly growing first coordinates, together with the positions at which
/// every periodic split is refuted.
#[derive(Debug, Clone)]
pub struct AperiodicPrefix {
    pub word: Word,
    /// `(i, j, at)`: the continuation of the split `(w[..i], w[i..j])`
    /// diverges from the construction at letter index `at`.
    pub refuted_splits: Vec<(usize, usize, usize)>,
}

impl AperiodicPrefix {
    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word.to_string(),
            "refuted_splits": self.refuted_splits,
        })
    }
}

/// Extends `eta` by `depth` fresh letters `(i, 0, …, 0)` on alternating
/// copies and refutes every periodic split within the checked horizon.
pub fn aperiodic_point(eta: &Word, depth: usize) -> Result<AperiodicPrefix> {
    let n = eta.dim();
    let mut letters = eta.letters().to_vec();
    let mut side = match eta.last_side() {
        Some(s) => s.other(),
        None => Side::A,
    };
    for i in 1..=depth {
        let mut coords = vec![0i64; n];
        coords[0] = i as i64;
        letters.push(Letter::new(side, GroupVector::new(coords)?)?);
        side = side.other();
    }
    let word = Word::new(n, letters)?;

    // The construction rule extended beyond the stored prefix.
    let rule_letter = |idx: usize| -> Result<Letter> {
        if idx < word.len() {
            return Ok(word.letters()[idx].clone());
        }
        let fresh = idx - eta.len() + 1;
        let mut coords = vec![0i64; n];
        coords[0] = fresh as i64;
        let side = if (idx - eta.len()) % 2 == 0 {
            match eta.last_side() {
                Some(s) => s.other(),
                None => Side::A,
            }
        } else {
            match eta.last_side() {
                Some(s) => s,
                None => Side::B,
            }
        };
        Letter::new(side, GroupVector::new(coords)?)
    };

    let mut refuted = Vec::new();
    for i in 0..word.len() {
        for j in i + 1..=word.len() {
            let q = Word::new(n, word.letters()[..i].to_vec())?;
            let d = Word::new(n, word.letters()[i..j].to_vec())?;
            let candidate = BoundaryWord::periodic(q, d)?;
            let horizon = word.len() + 2 * (j - i) + 2;
            let mut at = None;
            for k in 0..=horizon {
                let ours = rule_letter(k)?;
                let theirs = candidate.letter_at(k);
                let matches = match theirs {
                    Some(LetterView::Interior(l)) => *l == ours,
                    _ => false,
                };
                if !matches {
                    at = Some(k);
                    break;
                }
            }
            match at {
                Some(k) => refuted.push((i, j, k)),
                None => return Err(Error::RefinementOverflow),
            }
        }
    }
    Ok(AperiodicPrefix { word, refuted_splits: refuted })
}

/// The witness behind minimality: `ν` incomparable to every subtracted word
/// of `U = V(p)\…` together with the groupoid point `(x, −l(pν), pν·x)`
/// whose source lies in `U` and whose range is `x`.
#[derive(Debug, Clone)]
pub struct MinimalityWitness {
    pub nu: Word,
    pub point: GroupoidPoint,
}

impl MinimalityWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "nu": self.nu.to_string(),
            "x": self.point.range().to_string(),
            "lag": self.point.lag().coords(),
            "source": self.point.source().to_string(),
        })
    }
}

pub fn minimality_witness(x: &BoundaryWord, u: &BasicSet) -> Result<MinimalityWitness> {
    let BasicSet::Set { root, sub } = u else {
        return Err(Error::EmptySet);
    };
    let n = root.dim();
    let nu = match cover_witness(n, sub)? {
        Some(free) => free,
        None => unreachable!("a canonical nonempty set is not covered"),
    };
    let stem = root.concat(&nu)?;
    let src = stem.concat_boundary(x)?;
    let lag = GroupVector::zero(n).checked_sub(&stem.length()?)?;
    let point = GroupoidPoint::new(x.clone(), lag, src.clone())?;
    if !u.member(&src)? {
        return Err(Error::EmptySet);
    }
    Ok(MinimalityWitness { nu, point })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{parse_boundary_word, parse_word, shift_equiv};

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn bw(s: &str) -> BoundaryWord {
        parse_boundary_word(s, 2).unwrap()
    }

    fn check(x: &str, y: &str) -> SeparationCertificate {
        let cert = separation_witness(&bw(x), &bw(y)).unwrap();
        cert
    }

    #[test]
    fn separation_cases() {
        // different copies at the first letter
        check("a(1,0)b(inf,inf)", "b(2,0)a(inf,inf)");
        // same copy, interior values differ
        check("a(1,0)b(inf,inf)", "a(2,0)b(inf,inf)");
        // boundary vs boundary, same copy
        check("a(0,inf)", "a(1,inf)");
        check("a(inf,inf)", "a(0,inf)");
        // interior vs boundary, same copy
        check("a(1,0)b(inf,inf)", "a(1,inf)");
        check("a(5,7)b(inf,inf)", "a(3,inf)");
        // divergence after a shared prefix
        check("a(1,0)b(2,0)a(inf,inf)", "a(1,0)b(2,0)a(1,0)b(inf,inf)");
    }

    #[test]
    fn separation_periodic_points() {
        check("0~(a(1,0)b(1,0))", "0~(a(1,0)b(2,0))");
        check("0~(a(1,0)b(1,0))", "a(1,0)b(inf,inf)");
        check("b(2,2)~(a(1,0)b(1,0))", "b(2,2)~(a(1,0)b(3,0))");
    }

    #[test]
    fn separation_rejects_equal_points() {
        assert!(separation_witness(&bw("a(0,inf)"), &bw("a(0,inf)")).is_err());
    }

    #[test]
    fn contraction_on_full_space() {
        let c = contraction_bisection(&BasicSet::full(2)).unwrap();
        // deterministic choice: e_n in the first copy
        assert_eq!(c.mu, w("a(0,1)"));
        assert!(c.source.member(&c.strict_witness).unwrap());
        assert!(!c.range.member(&c.strict_witness).unwrap());
    }

    #[test]
    fn contraction_avoids_subtracted_words() {
        let u = BasicSet::new(w("a(1,0)"), vec![w("b(2,0)")]).unwrap();
        let c = contraction_bisection(&u).unwrap();
        assert!(c.source.subtract(&u).unwrap().is_empty());
        assert!(c.range.subtract(&c.source).unwrap().is_empty());
        // μ extends the root and dodges the subtracted cylinder
        assert!(w("a(1,0)").is_prefix_of(&c.mu).unwrap());
        assert!(c.mu.incomparable(&w("a(1,0)b(2,0)")).unwrap());
    }

    #[test]
    fn aperiodic_prefix_shape() {
        let cert = aperiodic_point(&Word::empty(2), 3).unwrap();
        assert_eq!(cert.word, w("a(1,0)b(2,0)a(3,0)"));
        // every split refuted
        assert_eq!(cert.refuted_splits.len(), 3 + 2 + 1);
        let cert2 = aperiodic_point(&w("b(7,7)"), 4).unwrap();
        assert_eq!(cert2.word, w("b(7,7)a(1,0)b(2,0)a(3,0)b(4,0)"));
        assert!(w("b(7,7)").is_prefix_of(&cert2.word).unwrap());
    }

    #[test]
    fn minimality_point_validates() {
        let u = BasicSet::new(w("a(1,0)"), vec![w("b(2,0)")]).unwrap();
        let x = bw("b(inf,inf)");
        let m = minimality_witness(&x, &u).unwrap();
        assert!(u.member(m.point.source()).unwrap());
        assert_eq!(m.point.range(), &x);
        let stem = w("a(1,0)").concat(&m.nu).unwrap();
        let neg = GroupVector::zero(2).checked_sub(&stem.length().unwrap()).unwrap();
        assert!(shift_equiv(&x, &neg, m.point.source()).unwrap());
    }
}
