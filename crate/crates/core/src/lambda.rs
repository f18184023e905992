//! Words over two copies of the positive cone `Λ⁺` of `Λ = Z^n` (lex order),
//! boundary words, concatenation with merging, prefix quotients, length
//! functions, and shift equivalence.
//!
//! A word alternates letters from the two copies. Boundary words are either a
//! finite word closed off by a single boundary letter (an element of `∂Λ⁺`,
//! i.e. a vector ending in `∞` with `∞`-propagation), or an eventually
//! periodic infinite word stored as `prefix · period^∞` in a canonical form
//! that makes equality structural.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Which copy of `Λ⁺` a letter is drawn from. The text syntax uses `a` for
/// the first copy and `b` for the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    pub fn tag(self) -> char {
        match self {
            Side::A => 'a',
            Side::B => 'b',
        }
    }
}

/// A point of `Z^n`. Comparisons are lexicographic (derived `Ord` on the
/// coordinate vector agrees with it).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupVector {
    coords: Vec<i64>,
}

impl GroupVector {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(GroupVector { coords })
    }

    pub fn zero(n: usize) -> Self {
        GroupVector { coords: vec![0; n] }
    }

    /// `e_n = (0, …, 0, 1)`, the minimum of `Λ⁺`.
    pub fn unit_last(n: usize) -> Self {
        let mut coords = vec![0; n];
        coords[n - 1] = 1;
        GroupVector { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Strictly positive in lex order, i.e. a member of `Λ⁺`.
    pub fn is_positive(&self) -> bool {
        match self.coords.iter().find(|&&c| c != 0) {
            Some(&c) => c > 0,
            None => false,
        }
    }

    /// Nonzero only in the final coordinate. These are exactly the letters
    /// lex-below every other positive vector.
    pub fn is_axis(&self) -> bool {
        self.coords[..self.coords.len() - 1].iter().all(|&c| c == 0)
    }

    pub fn checked_add(&self, other: &GroupVector) -> Result<GroupVector> {
        self.zip_with(other, |a, b| a.checked_add(b))
    }

    pub fn checked_sub(&self, other: &GroupVector) -> Result<GroupVector> {
        self.zip_with(other, |a, b| a.checked_sub(b))
    }

    fn zip_with(&self, other: &GroupVector, f: impl Fn(i64, i64) -> Option<i64>) -> Result<GroupVector> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| f(a, b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupVector { coords })
    }

    pub fn lex_cmp(&self, other: &GroupVector) -> Result<Ordering> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self.coords.cmp(&other.coords))
    }

    pub fn as_ext(&self) -> ExtVector {
        ExtVector { coords: self.coords.iter().map(|&c| Ext::Fin(c)).collect() }
    }
}

/// An integer extended with `∞`. Derived `Ord` puts `Fin(_) < Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    Fin(i64),
    Inf,
}

impl Ext {
    pub fn is_inf(self) -> bool {
        matches!(self, Ext::Inf)
    }

    fn checked_add_int(self, rhs: i64) -> Result<Ext> {
        match self {
            Ext::Inf => Ok(Ext::Inf),
            Ext::Fin(v) => v.checked_add(rhs).map(Ext::Fin).ok_or(Error::Overflow),
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Fin(v) => write!(f, "{v}"),
            Ext::Inf => write!(f, "inf"),
        }
    }
}

/// A vector over `Z ∪ {∞}` with lexicographic comparison. Used for lengths
/// of boundary words; no positivity or propagation constraints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtVector {
    coords: Vec<Ext>,
}

impl ExtVector {
    pub fn new(coords: Vec<Ext>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(ExtVector { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Ext] {
        &self.coords
    }

    pub fn lex_cmp(&self, other: &ExtVector) -> Result<Ordering> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self.coords.cmp(&other.coords))
    }
}

/// A point of `∂Λ⁺`: the last coordinate is `∞`, every coordinate is a
/// natural number or `∞`, and `∞` propagates rightward.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryVector {
    coords: Vec<Ext>,
}

impl BoundaryVector {
    pub fn new(coords: Vec<Ext>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if !coords.last().unwrap().is_inf() {
            return Err(Error::BadBoundaryVector("last coordinate must be inf"));
        }
        let mut seen_inf = false;
        for &c in &coords {
            match c {
                Ext::Inf => seen_inf = true,
                Ext::Fin(v) => {
                    if seen_inf {
                        return Err(Error::BadBoundaryVector("inf must propagate rightward"));
                    }
                    if v < 0 {
                        return Err(Error::BadBoundaryVector("finite coordinates must be natural"));
                    }
                }
            }
        }
        Ok(BoundaryVector { coords })
    }

    /// `(0, …, 0, ∞)`, the minimal boundary vector.
    pub fn minimal(n: usize) -> Self {
        let mut coords = vec![Ext::Fin(0); n];
        coords[n - 1] = Ext::Inf;
        BoundaryVector { coords }
    }

    /// All coordinates infinite.
    pub fn all_inf(n: usize) -> Self {
        BoundaryVector { coords: vec![Ext::Inf; n] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Ext] {
        &self.coords
    }

    /// Index of the first infinite coordinate.
    pub fn inf_from(&self) -> usize {
        self.coords.iter().position(|c| c.is_inf()).unwrap()
    }

    /// Componentwise sum with an interior vector; `∞ + k = ∞`.
    pub fn add_interior(&self, a: &GroupVector) -> Result<BoundaryVector> {
        if self.dim() != a.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: a.dim() });
        }
        let coords = self
            .coords
            .iter()
            .zip(a.coords())
            .map(|(&c, &v)| c.checked_add_int(v))
            .collect::<Result<Vec<_>>>()?;
        // The sum of a natural coordinate of ∂Λ⁺ and an interior coordinate
        // can dip below zero only if the result is no longer in ∂Λ⁺, which
        // cannot happen when `self = a + r` arises from concatenation; guard
        // anyway so invalid inputs surface as errors.
        BoundaryVector::new(coords)
    }

    /// Componentwise difference `self − a` when it lands in `∂Λ⁺`.
    pub fn sub_interior(&self, a: &GroupVector) -> Result<Option<BoundaryVector>> {
        if self.dim() != a.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: a.dim() });
        }
        let mut coords = Vec::with_capacity(self.dim());
        for (&c, &v) in self.coords.iter().zip(a.coords()) {
            match c {
                Ext::Inf => coords.push(Ext::Inf),
                Ext::Fin(cv) => {
                    let d = cv.checked_sub(v).ok_or(Error::Overflow)?;
                    if d < 0 {
                        return Ok(None);
                    }
                    coords.push(Ext::Fin(d));
                }
            }
        }
        Ok(Some(BoundaryVector { coords }))
    }

    pub fn as_ext(&self) -> ExtVector {
        ExtVector { coords: self.coords.clone() }
    }
}

/// An interior letter: a strictly positive vector in one of the two copies.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub side: Side,
    pub value: GroupVector,
}

impl Letter {
    pub fn new(side: Side, value: GroupVector) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::NonPositiveLetter);
        }
        Ok(Letter { side, value })
    }
}

/// The closing letter of a finite boundary word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryLetter {
    pub side: Side,
    pub value: BoundaryVector,
}

impl BoundaryLetter {
    pub fn new(side: Side, value: BoundaryVector) -> Self {
        BoundaryLetter { side, value }
    }
}

/// A finite alternating word; the empty word is the tree's base point `0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    n: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty(n: usize) -> Self {
        Word { n, letters: Vec::new() }
    }

    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        for (i, l) in letters.iter().enumerate() {
            if l.value.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: l.value.dim() });
            }
            if i > 0 && letters[i - 1].side == l.side {
                return Err(Error::AlternationViolation);
            }
        }
        Ok(Word { n, letters })
    }

    pub fn single(side: Side, value: GroupVector) -> Result<Self> {
        let n = value.dim();
        Ok(Word { n, letters: vec![Letter::new(side, value)?] })
    }

    /// `e_n` placed in the given copy; `e_n'` for side A, `e_n''` for side B.
    pub fn unit(n: usize, side: Side) -> Self {
        Word { n, letters: vec![Letter { side, value: GroupVector::unit_last(n) }] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first_side(&self) -> Option<Side> {
        self.letters.first().map(|l| l.side)
    }

    pub fn last_side(&self) -> Option<Side> {
        self.letters.last().map(|l| l.side)
    }

    /// Concatenation `self · other`, merging letters at the junction when
    /// they share a copy.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        let mut letters = self.letters.clone();
        let mut rest = other.letters.iter();
        let first = rest.next().unwrap();
        let last = letters.last_mut().unwrap();
        if last.side == first.side {
            last.value = last.value.checked_add(&first.value)?;
        } else {
            letters.push(first.clone());
        }
        letters.extend(rest.cloned());
        Ok(Word { n: self.n, letters })
    }

    /// Concatenation `self · x` with a boundary word.
    pub fn concat_boundary(&self, x: &BoundaryWord) -> Result<BoundaryWord> {
        if self.n != x.dim() {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.dim() });
        }
        match x {
            BoundaryWord::Finite { prefix, last } => {
                if prefix.is_empty() && self.last_side() == Some(last.side) {
                    let head = Word {
                        n: self.n,
                        letters: self.letters[..self.len() - 1].to_vec(),
                    };
                    let merged = last.value.add_interior(&self.letters.last().unwrap().value)?;
                    BoundaryWord::finite(head, BoundaryLetter::new(last.side, merged))
                } else {
                    BoundaryWord::finite(self.concat(prefix)?, last.clone())
                }
            }
            BoundaryWord::Periodic { prefix, period } => {
                BoundaryWord::periodic(self.concat(prefix)?, period.clone())
            }
        }
    }

    /// The length vector `l(w) = Σ letters`.
    pub fn length(&self) -> Result<GroupVector> {
        let mut acc = GroupVector::zero(self.n);
        for l in &self.letters {
            acc = acc.checked_add(&l.value)?;
        }
        Ok(acc)
    }

    /// Prefix quotient: `Some(r)` with `x = self · r` when `self ⪯ x`.
    pub fn quotient(&self, x: &Word) -> Result<Option<Word>> {
        if self.n != x.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.n });
        }
        if self.is_empty() {
            return Ok(Some(x.clone()));
        }
        if self.len() > x.len() {
            return Ok(None);
        }
        let k = self.len();
        for i in 0..k - 1 {
            if self.letters[i] != x.letters[i] {
                return Ok(None);
            }
        }
        let mine = &self.letters[k - 1];
        let theirs = &x.letters[k - 1];
        if mine.side != theirs.side {
            return Ok(None);
        }
        let diff = theirs.value.checked_sub(&mine.value)?;
        let mut letters = Vec::new();
        if diff.is_positive() {
            letters.push(Letter { side: theirs.side, value: diff });
        } else if !diff.is_zero() {
            return Ok(None);
        }
        letters.extend(x.letters[k..].iter().cloned());
        Ok(Some(Word { n: self.n, letters }))
    }

    /// Prefix quotient against a boundary word.
    pub fn quotient_boundary(&self, x: &BoundaryWord) -> Result<Option<BoundaryWord>> {
        if self.n != x.dim() {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.dim() });
        }
        if self.is_empty() {
            return Ok(Some(x.clone()));
        }
        match x {
            BoundaryWord::Finite { prefix, last } => {
                if self.len() <= prefix.len() {
                    match self.quotient(prefix)? {
                        Some(rest) => {
                            Ok(Some(BoundaryWord::finite(rest, last.clone())?))
                        }
                        None => Ok(None),
                    }
                } else if self.len() == prefix.len() + 1 {
                    for i in 0..prefix.len() {
                        if self.letters[i] != prefix.letters[i] {
                            return Ok(None);
                        }
                    }
                    let mine = self.letters.last().unwrap();
                    if mine.side != last.side {
                        return Ok(None);
                    }
                    match last.value.sub_interior(&mine.value)? {
                        Some(rest) => Ok(Some(BoundaryWord::finite(
                            Word::empty(self.n),
                            BoundaryLetter::new(last.side, rest),
                        )?)),
                        None => Ok(None),
                    }
                } else {
                    Ok(None)
                }
            }
            BoundaryWord::Periodic { prefix, period } => {
                // Unroll just enough of the periodic part to cover `self`.
                let mut unrolled = prefix.clone();
                while unrolled.len() < self.len() + 1 {
                    unrolled = unrolled.concat(period)?;
                }
                let need = self.len();
                // Split the unrolled word at `need` letters: the remainder of
                // the point is (tail of unrolled) followed by period^∞ with
                // the phase implied by how much was unrolled.
                let consumed_prefix = Word { n: self.n, letters: unrolled.letters[..need].to_vec() };
                let partial = match self.quotient(&consumed_prefix)? {
                    None => {
                        // The last letter may still match partially.
                        return self.quotient_partial_periodic(&unrolled, period);
                    }
                    Some(w) => w,
                };
                if !partial.is_empty() {
                    // self is strictly shorter than `need` letters worth; the
                    // general path below handles it uniformly.
                    return self.quotient_partial_periodic(&unrolled, period);
                }
                let tail = Word { n: self.n, letters: unrolled.letters[need..].to_vec() };
                Ok(Some(BoundaryWord::periodic(tail, period.clone())?))
            }
        }
    }

    // Match `self` against the beginning of `unrolled · period^∞`, allowing a
    // partial final letter.
    fn quotient_partial_periodic(&self, unrolled: &Word, period: &Word) -> Result<Option<BoundaryWord>> {
        let k = self.len();
        debug_assert!(unrolled.len() >= k);
        for i in 0..k - 1 {
            if self.letters[i] != unrolled.letters[i] {
                return Ok(None);
            }
        }
        let mine = &self.letters[k - 1];
        let theirs = &unrolled.letters[k - 1];
        if mine.side != theirs.side {
            return Ok(None);
        }
        let diff = theirs.value.checked_sub(&mine.value)?;
        let mut letters = Vec::new();
        if diff.is_positive() {
            letters.push(Letter { side: theirs.side, value: diff });
        } else if !diff.is_zero() {
            return Ok(None);
        }
        letters.extend(unrolled.letters[k..].iter().cloned());
        let head = Word { n: self.n, letters };
        Ok(Some(BoundaryWord::periodic(head, period.clone())?))
    }

    /// `self ⪯ x`.
    pub fn is_prefix_of(&self, x: &Word) -> Result<bool> {
        Ok(self.quotient(x)?.is_some())
    }

    /// Neither word extends the other; equivalently the cylinders over them
    /// are disjoint.
    pub fn incomparable(&self, other: &Word) -> Result<bool> {
        Ok(self.quotient(other)?.is_none() && other.quotient(self)?.is_none())
    }
}

/// A finitely representable point of `∂X`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryWord {
    /// `prefix · β` with `β ∈ ∂Λ⁺` in one of the copies.
    Finite { prefix: Word, last: BoundaryLetter },
    /// `prefix · period^∞` in canonical form: the period is primitive, its
    /// first and last letters use different copies, and the prefix is the
    /// shortest possible.
    Periodic { prefix: Word, period: Word },
}

impl BoundaryWord {
    pub fn finite(prefix: Word, last: BoundaryLetter) -> Result<Self> {
        if last.value.dim() != prefix.dim() {
            return Err(Error::DimensionMismatch { expected: prefix.dim(), got: last.value.dim() });
        }
        if prefix.last_side() == Some(last.side) {
            return Err(Error::AlternationViolation);
        }
        Ok(BoundaryWord::Finite { prefix, last })
    }

    /// The point `β` alone.
    pub fn letter(last: BoundaryLetter) -> Self {
        let n = last.value.dim();
        BoundaryWord::Finite { prefix: Word::empty(n), last }
    }

    /// Canonical form of `prefix · period^∞`. Collapses to a finite boundary
    /// word when the period lives in a single copy.
    pub fn periodic(prefix: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        if prefix.dim() != period.dim() {
            return Err(Error::DimensionMismatch { expected: prefix.dim(), got: period.dim() });
        }
        let n = prefix.dim();
        let mut prefix = prefix;
        let mut letters: Vec<Letter> = period.letters().to_vec();

        // Rotate a same-copy wrap into the prefix: w·(c1…cd)^∞ with
        // copy(c1) = copy(cd) equals (w·c1)·(c2…c(d-1)(cd+c1))^∞.
        while letters.len() >= 2 && letters.first().unwrap().side == letters.last().unwrap().side {
            let head = letters.remove(0);
            prefix = prefix.concat(&Word { n, letters: vec![head.clone()] })?;
            let tail = letters.last_mut().unwrap();
            tail.value = tail.value.checked_add(&head.value)?;
        }

        if letters.len() == 1 {
            // Single-copy period: the point is the supremum of the chain of
            // multiples, a boundary letter with ∞ from the leading nonzero
            // coordinate of the period value on.
            let l = &letters[0];
            let lead = l.value.coords().iter().position(|&c| c != 0).unwrap();
            let mut coords = vec![Ext::Fin(0); n];
            for c in coords.iter_mut().skip(lead) {
                *c = Ext::Inf;
            }
            let beta = BoundaryLetter::new(l.side, BoundaryVector::new(coords)?);
            let tail = BoundaryWord::letter(beta);
            return prefix.concat_boundary(&tail);
        }

        // Junction merge: absorb the first period letter into the prefix when
        // it shares a copy with the prefix's last letter.
        if prefix.last_side() == Some(letters[0].side) {
            let head = letters.remove(0);
            prefix = prefix.concat(&Word { n, letters: vec![head.clone()] })?;
            letters.push(head);
        }

        // Primitive period.
        let d = letters.len();
        'outer: for len in 1..=d / 2 {
            if d % len != 0 {
                continue;
            }
            for i in len..d {
                if letters[i] != letters[i - len] {
                    continue 'outer;
                }
            }
            letters.truncate(len);
            break;
        }

        // Shortest prefix: pull equal letters back across the junction.
        while !prefix.is_empty() && prefix.letters().last() == letters.last() {
            let mut ls = prefix.letters().to_vec();
            ls.pop();
            prefix = Word { n, letters: ls };
            let last = letters.pop().unwrap();
            letters.insert(0, last);
        }

        debug_assert_ne!(letters.first().unwrap().side, letters.last().unwrap().side);
        debug_assert_ne!(prefix.last_side(), Some(letters[0].side));
        Ok(BoundaryWord::Periodic { prefix, period: Word { n, letters } })
    }

    pub fn dim(&self) -> usize {
        match self {
            BoundaryWord::Finite { prefix, .. } => prefix.dim(),
            BoundaryWord::Periodic { prefix, .. } => prefix.dim(),
        }
    }

    pub fn first_side(&self) -> Side {
        match self {
            BoundaryWord::Finite { prefix, last } => prefix.first_side().unwrap_or(last.side),
            BoundaryWord::Periodic { prefix, period } => {
                prefix.first_side().unwrap_or_else(|| period.first_side().unwrap())
            }
        }
    }

    /// Length with `∞` entries: for eventually periodic words a coordinate is
    /// infinite as soon as the period contributes to it or any earlier
    /// coordinate, matching the supremum over finite prefixes.
    pub fn length(&self) -> Result<ExtVector> {
        match self {
            BoundaryWord::Finite { prefix, last } => {
                let base = prefix.length()?;
                let coords = base
                    .coords()
                    .iter()
                    .zip(last.value.coords())
                    .map(|(&b, &c)| c.checked_add_int(b))
                    .collect::<Result<Vec<_>>>()?;
                ExtVector::new(coords)
            }
            BoundaryWord::Periodic { prefix, period } => {
                let base = prefix.length()?;
                let step = period.length()?;
                let lead = step.coords().iter().position(|&c| c != 0).unwrap();
                let coords = base
                    .coords()
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| if i >= lead { Ext::Inf } else { Ext::Fin(b) })
                    .collect();
                ExtVector::new(coords)
            }
        }
    }

    /// Letters of the word as an infinite (or boundary-terminated) stream.
    pub fn letter_at(&self, i: usize) -> Option<LetterView<'_>> {
        match self {
            BoundaryWord::Finite { prefix, last } => {
                if i < prefix.len() {
                    Some(LetterView::Interior(&prefix.letters()[i]))
                } else if i == prefix.len() {
                    Some(LetterView::Boundary(last))
                } else {
                    None
                }
            }
            BoundaryWord::Periodic { prefix, period } => {
                if i < prefix.len() {
                    Some(LetterView::Interior(&prefix.letters()[i]))
                } else {
                    let j = (i - prefix.len()) % period.len();
                    Some(LetterView::Interior(&period.letters()[j]))
                }
            }
        }
    }
}

/// A borrowed letter of a boundary word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LetterView<'a> {
    Interior(&'a Letter),
    Boundary(&'a BoundaryLetter),
}

impl LetterView<'_> {
    pub fn side(&self) -> Side {
        match self {
            LetterView::Interior(l) => l.side,
            LetterView::Boundary(l) => l.side,
        }
    }
}

/// Decides `x ∼_k y`: some `p, q ∈ X` and `z ∈ ∂X` satisfy `x = pz`,
/// `y = qz`, `k = l(p) − l(q)`.
pub fn shift_equiv(x: &BoundaryWord, k: &GroupVector, y: &BoundaryWord) -> Result<bool> {
    if x.dim() != y.dim() || x.dim() != k.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: y.dim().min(k.dim()) });
    }
    match (x, y) {
        (BoundaryWord::Finite { last: bx, .. }, BoundaryWord::Finite { last: by, .. }) => {
            if bx.side != by.side || bx.value.inf_from() != by.value.inf_from() {
                return Ok(false);
            }
            // On the coordinates where the tails are finite the lag is pinned
            // to l(x) − l(y); on the infinite coordinates any lag is realized
            // by enlarging the split letters.
            let lx = x.length()?;
            let ly = y.length()?;
            let cut = bx.value.inf_from();
            for i in 0..cut {
                let (Ext::Fin(a), Ext::Fin(b)) = (lx.coords()[i], ly.coords()[i]) else {
                    unreachable!("finite pattern coordinate");
                };
                let want = a.checked_sub(b).ok_or(Error::Overflow)?;
                if k.coords()[i] != want {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (
            BoundaryWord::Periodic { prefix: ux, period: rho },
            BoundaryWord::Periodic { prefix: uy, period: sigma },
        ) => {
            if rho.len() != sigma.len() {
                return Ok(false);
            }
            let d = rho.len();
            let lx = ux.length()?;
            let ly = uy.length()?;
            let step = rho.length()?;
            for r in 0..d {
                let rotated: Vec<Letter> = rho
                    .letters()
                    .iter()
                    .cycle()
                    .skip(r)
                    .take(d)
                    .cloned()
                    .collect();
                if rotated != sigma.letters() {
                    continue;
                }
                // Common tail rot_r(rho)^∞; base lag l(ux) + Σ_{i<r} rho_i − l(uy).
                let mut base = lx.checked_sub(&ly)?;
                for l in rho.letters().iter().take(r) {
                    base = base.checked_add(&l.value)?;
                }
                let diff = k.checked_sub(&base)?;
                if is_integer_multiple(&diff, &step)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => Ok(false),
    }
}

// diff = m · step for some integer m (step ≠ 0).
fn is_integer_multiple(diff: &GroupVector, step: &GroupVector) -> Result<bool> {
    let lead = step.coords().iter().position(|&c| c != 0);
    let Some(lead) = lead else {
        return Ok(diff.is_zero());
    };
    let s = step.coords()[lead];
    let d = diff.coords()[lead];
    if d % s != 0 {
        return Ok(false);
    }
    let m = d / s;
    for (&dc, &sc) in diff.coords().iter().zip(step.coords()) {
        match sc.checked_mul(m) {
            Some(v) if v == dc => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Text syntax: a(1,0)b(2,3), inf coordinates, 0 for the empty word, ~(...)
// for eventually periodic tails.
// ---------------------------------------------------------------------------

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.side.tag())?;
        for (i, c) in self.value.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BoundaryLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.side.tag())?;
        for (i, c) in self.value.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Display for BoundaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryWord::Finite { prefix, last } => {
                if !prefix.is_empty() {
                    write!(f, "{prefix}")?;
                }
                write!(f, "{last}")
            }
            BoundaryWord::Periodic { prefix, period } => {
                write!(f, "{prefix}~({period})")
            }
        }
    }
}

/// Cursor-based parser for the word syntax shared by the CLI and JSON files.
pub struct WordParser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> WordParser<'a> {
    pub fn new(src: &'a str, n: usize) -> Self {
        WordParser { src: src.as_bytes(), pos: 0, n }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    pub fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'\n') | Some(b'\r')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn parse_int(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start || (self.pos == start + 1 && self.src[start] == b'-') {
            return Err(Error::parse(start, "expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start, "integer out of range"))
    }

    fn parse_coords(&mut self) -> Result<Vec<Ext>> {
        self.expect(b'(')?;
        let mut coords = Vec::new();
        loop {
            self.skip_ws();
            if self.src[self.pos..].starts_with(b"inf") {
                self.pos += 3;
                coords.push(Ext::Inf);
            } else {
                coords.push(Ext::Fin(self.parse_int()?));
            }
            self.skip_ws();
            match self.bump() {
                Some(b',') => continue,
                Some(b')') => break,
                _ => return Err(Error::parse(self.pos, "expected ',' or ')'")),
            }
        }
        if coords.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: coords.len() });
        }
        Ok(coords)
    }

    fn side_at(&self) -> Option<Side> {
        match self.peek() {
            Some(b'a') => Some(Side::A),
            Some(b'b') => Some(Side::B),
            _ => None,
        }
    }

    /// Parses a finite word; juxtaposed same-copy letters merge.
    pub fn parse_word(&mut self) -> Result<Word> {
        self.skip_ws();
        if self.peek() == Some(b'0') {
            self.pos += 1;
            return Ok(Word::empty(self.n));
        }
        let mut word = Word::empty(self.n);
        let mut any = false;
        while let Some(side) = self.side_at() {
            let at = self.pos;
            self.pos += 1;
            let coords = self.parse_coords()?;
            let mut value = Vec::with_capacity(self.n);
            for c in coords {
                match c {
                    Ext::Fin(v) => value.push(v),
                    Ext::Inf => {
                        return Err(Error::parse(at, "inf is not allowed in an interior letter"))
                    }
                }
            }
            let letter = Letter::new(side, GroupVector::new(value)?)
                .map_err(|e| Error::parse(at, e.to_string()))?;
            word = word
                .concat(&Word { n: self.n, letters: vec![letter] })
                .map_err(|e| Error::parse(at, e.to_string()))?;
            any = true;
        }
        if !any {
            return Err(Error::parse(self.pos, "expected a word"));
        }
        Ok(word)
    }

    /// Parses a boundary word: letters where the final one may carry `inf`
    /// coordinates, or a `~(period)` suffix.
    pub fn parse_boundary_word(&mut self) -> Result<BoundaryWord> {
        self.skip_ws();
        let mut letters: Vec<(usize, Side, Vec<Ext>)> = Vec::new();
        if self.peek() == Some(b'0') {
            self.pos += 1;
        } else {
            while let Some(side) = self.side_at() {
                let at = self.pos;
                self.pos += 1;
                let coords = self.parse_coords()?;
                letters.push((at, side, coords));
            }
        }
        if self.peek() == Some(b'~') {
            self.pos += 1;
            self.expect(b'(')?;
            let period = self.parse_word()?;
            self.expect(b')')?;
            let prefix = self.finite_letters(&letters)?;
            return BoundaryWord::periodic(prefix, period);
        }
        let Some((at, side, coords)) = letters.pop() else {
            return Err(Error::parse(self.pos, "expected a boundary word"));
        };
        if !coords.iter().any(|c| c.is_inf()) {
            return Err(Error::parse(at, "a boundary word must end in an inf letter or a ~(period)"));
        }
        let prefix = self.finite_letters(&letters)?;
        let value = BoundaryVector::new(coords).map_err(|e| Error::parse(at, e.to_string()))?;
        BoundaryWord::finite(prefix, BoundaryLetter::new(side, value))
    }

    fn finite_letters(&self, letters: &[(usize, Side, Vec<Ext>)]) -> Result<Word> {
        let mut out = Word::empty(self.n);
        for (at, side, coords) in letters {
            let mut value = Vec::with_capacity(self.n);
            for c in coords {
                match c {
                    Ext::Fin(v) => value.push(*v),
                    Ext::Inf => return Err(Error::parse(*at, "inf only allowed in the final letter")),
                }
            }
            let letter = Letter::new(*side, GroupVector::new(value)?)
                .map_err(|e| Error::parse(*at, e.to_string()))?;
            out = out
                .concat(&Word { n: self.n, letters: vec![letter] })
                .map_err(|e| Error::parse(*at, e.to_string()))?;
        }
        Ok(out)
    }

    pub fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(Error::parse(self.pos, "trailing input"));
        }
        Ok(())
    }
}

/// Parses a finite word from its text form; `n` is the session dimension.
pub fn parse_word(src: &str, n: usize) -> Result<Word> {
    let mut p = WordParser::new(src, n);
    let w = p.parse_word()?;
    p.finish()?;
    Ok(w)
}

/// Parses a boundary word from its text form.
pub fn parse_boundary_word(src: &str, n: usize) -> Result<BoundaryWord> {
    let mut p = WordParser::new(src, n);
    let w = p.parse_boundary_word()?;
    p.finish()?;
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn bw(s: &str) -> BoundaryWord {
        parse_boundary_word(s, 2).unwrap()
    }

    fn gv(coords: &[i64]) -> GroupVector {
        GroupVector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn lex_comparisons() {
        assert_eq!(gv(&[0, 1]).lex_cmp(&gv(&[1, -5])).unwrap(), Ordering::Less);
        assert_eq!(gv(&[3, 2]).lex_cmp(&gv(&[3, 2])).unwrap(), Ordering::Equal);
        let b = BoundaryVector::new(vec![Ext::Fin(0), Ext::Inf]).unwrap();
        let c = ExtVector::new(vec![Ext::Fin(0), Ext::Fin(5)]).unwrap();
        assert_eq!(b.as_ext().lex_cmp(&c).unwrap(), Ordering::Greater);
        assert!(gv(&[0, 1]).lex_cmp(&GroupVector::zero(3)).is_err());
    }

    #[test]
    fn unit_is_minimal() {
        let e = GroupVector::unit_last(2);
        for v in [gv(&[0, 1]), gv(&[0, 7]), gv(&[1, -9]), gv(&[2, 0])] {
            assert!(v.is_positive());
            assert_ne!(e.lex_cmp(&v).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn concat_merges_same_copy() {
        assert_eq!(w("a(1,0)").concat(&w("a(0,1)")).unwrap(), w("a(1,1)"));
        assert_eq!(w("a(1,0)").concat(&w("b(2,3)")).unwrap(), w("a(1,0)b(2,3)"));
        let zero = Word::empty(2);
        assert_eq!(zero.concat(&w("a(1,0)")).unwrap(), w("a(1,0)"));
        assert_eq!(w("a(1,0)").concat(&zero).unwrap(), w("a(1,0)"));
    }

    #[test]
    fn quotient_partial_letter() {
        // x = a(1,0)b(5,5)..., p = a(0,3): remainder starts a(1,-3).
        let x = bw("a(1,0)b(5,5)a(0,1)b(inf,inf)");
        let r = w("a(0,3)").quotient_boundary(&x).unwrap().unwrap();
        assert_eq!(r, bw("a(1,-3)b(5,5)a(0,1)b(inf,inf)"));
        assert_eq!(w("a(0,3)").concat_boundary(&r).unwrap(), x);

        assert!(w("a(1,0)").quotient_boundary(&bw("b(1,0)a(inf,inf)")).unwrap().is_none());
        assert_eq!(w("a(1,0)").quotient(&w("a(1,0)")).unwrap().unwrap(), Word::empty(2));
    }

    #[test]
    fn length_additive() {
        assert_eq!(w("a(1,0)b(2,3)").length().unwrap(), gv(&[3, 3]));
        assert_eq!(Word::empty(2).length().unwrap(), gv(&[0, 0]));
        let p = w("a(1,0)b(0,4)");
        let q = w("b(2,-1)a(0,1)");
        let both = p.concat(&q).unwrap();
        assert_eq!(
            both.length().unwrap(),
            p.length().unwrap().checked_add(&q.length().unwrap()).unwrap()
        );
    }

    #[test]
    fn periodic_collapse_to_boundary_letter() {
        // Single-copy period a(1,0) collapses to a(inf,inf).
        let x = BoundaryWord::periodic(Word::empty(2), w("a(1,0)")).unwrap();
        assert_eq!(x, bw("a(inf,inf)"));
        for k in 1..20 {
            let p = Word::single(Side::A, gv(&[k, 0])).unwrap();
            assert!(p.quotient_boundary(&x).unwrap().is_some(), "prefix chain at {k}");
        }
        // Leading nonzero in the last coordinate only freezes that tail.
        let y = BoundaryWord::periodic(Word::empty(2), w("a(0,3)")).unwrap();
        assert_eq!(y, bw("a(0,inf)"));
    }

    #[test]
    fn periodic_canonical_forms() {
        let x = BoundaryWord::periodic(Word::empty(2), w("a(1,0)b(1,0)")).unwrap();
        assert_eq!(x, bw("0~(a(1,0)b(1,0))"));
        // Doubled period reduces.
        let y = BoundaryWord::periodic(w("a(2,2)"), w("a(1,0)b(1,0)a(1,0)b(1,0)")).unwrap();
        assert_eq!(y, BoundaryWord::periodic(w("a(2,2)"), w("a(1,0)b(1,0)")).unwrap());
        // A prefix that ends like the period is pulled into the rotation.
        let z = BoundaryWord::periodic(w("a(1,0)"), w("b(2,0)a(1,0)")).unwrap();
        assert_eq!(z, bw("0~(a(1,0)b(2,0))"));
        // Same-copy wrap rotates with a merge.
        let t = BoundaryWord::periodic(Word::empty(2), w("a(1,0)b(2,0)a(3,0)")).unwrap();
        assert_eq!(t, bw("a(1,0)~(b(2,0)a(4,0))"));
    }

    #[test]
    fn shift_equiv_basics() {
        let x = bw("a(1,0)b(inf,inf)");
        assert!(shift_equiv(&x, &GroupVector::zero(2), &x).unwrap());

        let p = bw("0~(a(1,0)b(1,0))");
        let lag = w("a(1,0)b(1,0)").length().unwrap();
        assert!(shift_equiv(&p, &lag, &p).unwrap());
        assert!(shift_equiv(&p, &GroupVector::zero(2), &p).unwrap());
        assert!(!shift_equiv(&p, &gv(&[1, 0]), &p).unwrap());

        // Tails in different copies never meet.
        let y = bw("b(1,1)a(inf,inf)");
        let x2 = bw("a(1,0)b(inf,inf)");
        for k in [gv(&[0, 0]), gv(&[1, 0]), gv(&[-2, 3])] {
            assert!(!shift_equiv(&x2, &k, &y).unwrap());
        }
    }

    #[test]
    fn shift_equiv_infinite_pattern_frees_lag() {
        // x = a(inf,inf): the whole lag is absorbed by the split letter.
        let x = bw("a(inf,inf)");
        assert!(shift_equiv(&x, &gv(&[3, -7]), &x).unwrap());
        // x = a(0,inf): first coordinate pinned, second free.
        let y = bw("a(0,inf)");
        assert!(shift_equiv(&y, &gv(&[0, 5]), &y).unwrap());
        assert!(!shift_equiv(&y, &gv(&[1, 0]), &y).unwrap());
    }

    #[test]
    fn boundary_word_text_round_trip() {
        for s in ["a(1,0)b(2,3)~(a(1,0)b(1,0))", "a(0,inf)", "a(1,0)b(inf,inf)", "0~(a(1,0)b(2,0))"] {
            let x = bw(s);
            assert_eq!(bw(&x.to_string()), x);
        }
        assert_eq!(w("a(1,0)a(0,1)"), w("a(1,1)"));
    }

    #[test]
    fn rejects_malformed_words() {
        assert!(parse_word("a(1,0)", 3).is_err());
        assert!(parse_word("a(0,0)", 2).is_err());
        assert!(parse_word("a(-1,0)", 2).is_err());
        assert!(parse_word("a(1,inf)", 2).is_err());
        assert!(parse_boundary_word("a(1,0)", 2).is_err());
        assert!(parse_boundary_word("a(inf,1)", 2).is_err());
        assert!(Word::new(
            2,
            vec![
                Letter::new(Side::A, gv(&[1, 0])).unwrap(),
                Letter::new(Side::A, gv(&[1, 0])).unwrap()
            ]
        )
        .is_err());
    }
}
