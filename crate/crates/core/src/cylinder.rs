//! The Boolean algebra of compact-open subsets of the tree boundary
//! generated by the cylinders `V(p)`.
//!
//! A [`BasicSet`] is `V(p) \ ∪ V(p·r)` stored with root-relative subtracted
//! words. Construction always canonicalizes: the subtracted family is a
//! `⪯`-antichain with sibling pairs `{r·e_n', r·e_n''}` merged into `r`, and
//! the root is pushed as deep as possible, so set equality is structural
//! equality. [`SetUnion`] closes the basic sets under finite disjoint union.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lambda::{parse_word, GroupVector, Side, Word};
use crate::lambda::BoundaryWord;

/// A canonical compact-open set `V(root) \ ∪_{r ∈ sub} V(root·r)`, or the
/// empty set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasicSet {
    Empty,
    Set { root: Word, sub: Vec<Word> },
}

impl BasicSet {
    /// The whole boundary `∂X = V(0)`.
    pub fn full(n: usize) -> Self {
        BasicSet::Set { root: Word::empty(n), sub: Vec::new() }
    }

    /// The cylinder `V(p)`.
    pub fn cylinder(root: Word) -> Self {
        BasicSet::Set { root, sub: Vec::new() }
    }

    /// `V(p; q) = V(p) \ V(q)`, normalized by the usual convention: the
    /// subtrahend is dropped when the roots are incomparable and the result
    /// is empty when `q ⪯ p`.
    pub fn relative(p: &Word, q: &Word) -> Result<Self> {
        if q.is_prefix_of(p)? {
            return Ok(BasicSet::Empty);
        }
        match p.quotient(q)? {
            Some(r) => BasicSet::new(p.clone(), vec![r]),
            None => Ok(BasicSet::cylinder(p.clone())),
        }
    }

    /// Canonical set `V(root) \ ∪ V(root·r)`.
    pub fn new(root: Word, sub: Vec<Word>) -> Result<Self> {
        canonical(root, sub)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, BasicSet::Empty)
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            BasicSet::Empty => None,
            BasicSet::Set { root, .. } => Some(root.dim()),
        }
    }

    pub fn root(&self) -> Option<&Word> {
        match self {
            BasicSet::Empty => None,
            BasicSet::Set { root, .. } => Some(root),
        }
    }

    pub fn sub(&self) -> &[Word] {
        match self {
            BasicSet::Empty => &[],
            BasicSet::Set { sub, .. } => sub,
        }
    }

    /// Membership of a finitely representable boundary point.
    pub fn member(&self, x: &BoundaryWord) -> Result<bool> {
        match self {
            BasicSet::Empty => Ok(false),
            BasicSet::Set { root, sub } => {
                let Some(z) = root.quotient_boundary(x)? else {
                    return Ok(false);
                };
                for r in sub {
                    if r.quotient_boundary(&z)?.is_some() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Exact intersection; canonical.
    pub fn intersect(&self, other: &BasicSet) -> Result<BasicSet> {
        let (BasicSet::Set { root: p, sub: rs }, BasicSet::Set { root: q, sub: ss }) = (self, other)
        else {
            return Ok(BasicSet::Empty);
        };
        let (deep, deep_sub, t, shallow_sub) = if let Some(t) = p.quotient(q)? {
            (q, ss, t, rs)
        } else if let Some(t) = q.quotient(p)? {
            (p, rs, t, ss)
        } else {
            return Ok(BasicSet::Empty);
        };
        let mut sub = deep_sub.to_vec();
        for r in shallow_sub {
            if r.quotient(&t)?.is_some() {
                // V(deep) sits inside a subtracted cylinder.
                return Ok(BasicSet::Empty);
            }
            if let Some(w) = t.quotient(r)? {
                sub.push(w);
            }
        }
        canonical(deep.clone(), sub)
    }

    /// Exact difference as a disjoint union of canonical basic sets.
    pub fn subtract(&self, other: &BasicSet) -> Result<SetUnion> {
        let BasicSet::Set { root, sub } = self else {
            return Ok(SetUnion::empty());
        };
        let common = self.intersect(other)?;
        let BasicSet::Set { root: c, sub: cut } = &common else {
            return Ok(SetUnion::from_disjoint(vec![self.clone()]));
        };
        let mut parts = Vec::new();
        // Outside V(c).
        let t = root.quotient(c)?.expect("intersection root extends ours");
        let mut outer = sub.clone();
        outer.push(t);
        parts.push(canonical(root.clone(), outer)?);
        // Inside one of the cylinders carved out of the intersection.
        for (k, u) in cut.iter().enumerate() {
            let ck = c.concat(u)?;
            let mut part = self.intersect(&BasicSet::cylinder(ck))?;
            for v in cut.iter().take(k) {
                part = minus_cylinder(part, &c.concat(v)?)?;
            }
            parts.push(part);
        }
        Ok(SetUnion::from_disjoint(parts))
    }

    /// `{x : μ·x ∈ self}`.
    pub fn preimage(&self, mu: &Word) -> Result<BasicSet> {
        let BasicSet::Set { root, sub } = self else {
            return Ok(BasicSet::Empty);
        };
        if let Some(t) = mu.quotient(root)? {
            // root = μ·t
            return canonical(t, sub.clone());
        }
        if let Some(u) = root.quotient(mu)? {
            // μ = root·u: points μx always lie in V(root).
            let mut out = Vec::new();
            for s in sub {
                if s.quotient(&u)?.is_some() {
                    return Ok(BasicSet::Empty);
                }
                if let Some(t) = u.quotient(s)? {
                    out.push(t);
                }
            }
            return canonical(Word::empty(root.dim()), out);
        }
        Ok(BasicSet::Empty)
    }

    /// `{prefix·x : x ∈ self}`.
    pub fn translate(&self, prefix: &Word) -> Result<BasicSet> {
        match self {
            BasicSet::Empty => Ok(BasicSet::Empty),
            BasicSet::Set { root, sub } => canonical(prefix.concat(root)?, sub.clone()),
        }
    }

    /// Re-expresses a set contained in `V(p)` relative to `p`.
    pub fn rebase(&self, p: &Word) -> Result<BasicSet> {
        match self {
            BasicSet::Empty => Ok(BasicSet::Empty),
            BasicSet::Set { root, sub } => {
                let t = p
                    .quotient(root)?
                    .ok_or(Error::EmptySet)?;
                canonical(t, sub.clone())
            }
        }
    }

    /// Deterministic ordering key used for atoms and serialization.
    pub fn sort_key(&self) -> Result<(GroupVector, Word, Vec<Word>)> {
        match self {
            BasicSet::Empty => Err(Error::EmptySet),
            BasicSet::Set { root, sub } => Ok((root.length()?, root.clone(), sub.clone())),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            BasicSet::Empty => Value::Null,
            BasicSet::Set { root, sub } => json!({
                "root": root.to_string(),
                "sub": sub.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &Value, n: usize) -> Result<Self> {
        if v.is_null() {
            return Ok(BasicSet::Empty);
        }
        let root = v
            .get("root")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse(0, "set object needs a root"))?;
        let mut sub = Vec::new();
        if let Some(arr) = v.get("sub").and_then(Value::as_array) {
            for s in arr {
                let s = s.as_str().ok_or_else(|| Error::parse(0, "sub entries must be strings"))?;
                sub.push(parse_word(s, n)?);
            }
        }
        BasicSet::new(parse_word(root, n)?, sub)
    }
}

impl fmt::Display for BasicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicSet::Empty => write!(f, "none"),
            BasicSet::Set { root, sub } => {
                if root.is_empty() && sub.is_empty() {
                    return write!(f, "all");
                }
                write!(f, "V({root})")?;
                for r in sub {
                    // Subtracted cylinders print at absolute roots.
                    let abs = root.concat(r).map_err(|_| fmt::Error)?;
                    write!(f, " \\ V({abs})")?;
                }
                Ok(())
            }
        }
    }
}

/// A finite disjoint union of basic sets, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetUnion {
    parts: Vec<BasicSet>,
}

impl SetUnion {
    pub fn empty() -> Self {
        SetUnion { parts: Vec::new() }
    }

    /// Builds a union from parts known to be pairwise disjoint; empty parts
    /// are dropped and the rest sorted.
    pub fn from_disjoint(parts: Vec<BasicSet>) -> Self {
        let mut parts: Vec<BasicSet> = parts.into_iter().filter(|p| !p.is_empty()).collect();
        parts.sort_by_cached_key(|p| p.sort_key().expect("nonempty part"));
        SetUnion { parts }
    }

    pub fn parts(&self) -> &[BasicSet] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn member(&self, x: &BoundaryWord) -> Result<bool> {
        for p in &self.parts {
            if p.member(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn subtract_basic(&self, b: &BasicSet) -> Result<SetUnion> {
        let mut out = Vec::new();
        for p in &self.parts {
            out.extend(p.subtract(b)?.parts);
        }
        Ok(SetUnion::from_disjoint(out))
    }

    pub fn subtract(&self, other: &SetUnion) -> Result<SetUnion> {
        let mut cur = self.clone();
        for p in &other.parts {
            cur = cur.subtract_basic(p)?;
        }
        Ok(cur)
    }

    pub fn intersect_basic(&self, b: &BasicSet) -> Result<SetUnion> {
        let mut out = Vec::new();
        for p in &self.parts {
            out.push(p.intersect(b)?);
        }
        Ok(SetUnion::from_disjoint(out))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.parts.iter().map(BasicSet::to_json).collect())
    }

    pub fn from_json(v: &Value, n: usize) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::parse(0, "set union must be an array"))?;
        let mut parts = Vec::new();
        for p in arr {
            parts.push(BasicSet::from_json(p, n)?);
        }
        Ok(SetUnion::from_disjoint(parts))
    }
}

impl fmt::Display for SetUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "none");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Decides whether `∪_{r} V(r) ⊇ ∂X`.
pub fn covers(n: usize, words: &[Word]) -> Result<bool> {
    Ok(cover_witness(n, words)?.is_none())
}

/// Either the family covers the boundary, or a cylinder disjoint from every
/// member is produced. The witness word is incomparable to every input word.
pub fn cover_witness(n: usize, words: &[Word]) -> Result<Option<Word>> {
    if words.iter().any(|w| w.is_empty()) {
        return Ok(None);
    }
    for side in [Side::A, Side::B] {
        let on_side: Vec<&Word> = words.iter().filter(|w| w.first_side() == Some(side)).collect();
        if let Some(w) = side_witness(n, &on_side, side)? {
            debug_assert!(words.iter().all(|r| w.incomparable(r).unwrap()));
            return Ok(Some(w));
        }
    }
    Ok(None)
}

// Coverage of the sub-branch of points whose first letter lies in `side`.
// Returns a witness cylinder word (starting on `side`, incomparable to every
// word of `ws`) when the branch is not covered.
fn side_witness(n: usize, ws: &[&Word], side: Side) -> Result<Option<Word>> {
    let mut axis_singles: Vec<i64> = Vec::new();
    let mut multis: Vec<(&GroupVector, Vec<Word>)> = Vec::new();
    for w in ws {
        let first = &w.letters()[0];
        if w.len() == 1 {
            if first.value.is_axis() {
                axis_singles.push(*first.value.coords().last().unwrap());
            }
            // A single letter with an earlier nonzero coordinate only covers
            // the lex cone above itself, which the axis analysis subsumes.
        } else {
            let tail = Word::new(n, w.letters()[1..].to_vec())?;
            match multis.iter_mut().find(|(v, _)| *v == &first.value) {
                Some((_, tails)) => tails.push(tail),
                None => multis.push((&first.value, vec![tail])),
            }
        }
    }
    let has_multi = |t: i64| {
        let cand = axis_vec(n, t);
        multis.iter().any(|(v, _)| **v == cand)
    };

    match axis_singles.iter().min() {
        None => {
            // No axis single: even the minimal boundary letter of this side
            // escapes every single-letter cylinder. Pick an axis branch with
            // no multi-letter words attached and seal it.
            let mut t = 1;
            while has_multi(t) {
                t += 1;
            }
            Ok(Some(sealed_witness(n, side, t, ws)?))
        }
        Some(&m) => {
            for t in 1..m {
                let cand = axis_vec(n, t);
                let tails = multis.iter().find(|(v, _)| **v == cand).map(|(_, ts)| ts);
                match tails {
                    None => return Ok(Some(sealed_witness(n, side, t, ws)?)),
                    Some(tails) => {
                        let refs: Vec<&Word> = tails.iter().collect();
                        if let Some(sub) = side_witness(n, &refs, side.other())? {
                            let head = Word::new(
                                n,
                                vec![crate::lambda::Letter::new(side, cand)?],
                            )?;
                            return Ok(Some(head.concat(&sub)?));
                        }
                    }
                }
            }
            Ok(None)
        }
    }
}

fn axis_vec(n: usize, t: i64) -> GroupVector {
    let mut coords = vec![0; n];
    coords[n - 1] = t;
    GroupVector::new(coords).unwrap()
}

// The branch of points whose first letter is exactly t·e_n is uncovered;
// extend by e_n letters on alternating sides until the word is incomparable
// to every input. One extension always suffices.
fn sealed_witness(n: usize, side: Side, t: i64, ws: &[&Word]) -> Result<Word> {
    let mut w = Word::new(n, vec![crate::lambda::Letter::new(side, axis_vec(n, t))?])?;
    let bound = ws.iter().map(|r| r.len()).max().unwrap_or(0) + 2;
    loop {
        let mut ok = true;
        for r in ws {
            if !w.incomparable(r)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(w);
        }
        if w.len() > bound {
            return Err(Error::RefinementOverflow);
        }
        w = w.concat(&Word::unit(n, w.last_side().unwrap().other()))?;
    }
}

// V(root)\∪V(root·sub) minus the cylinder V(c); stays basic.
fn minus_cylinder(set: BasicSet, c: &Word) -> Result<BasicSet> {
    let BasicSet::Set { root, mut sub } = set else {
        return Ok(BasicSet::Empty);
    };
    if c.is_prefix_of(&root)? {
        return Ok(BasicSet::Empty);
    }
    match root.quotient(c)? {
        Some(t) => {
            sub.push(t);
            canonical(root, sub)
        }
        None => canonical(root, sub),
    }
}

// Canonical form: antichain, sibling merge, emptiness, maximal root.
fn canonical(root: Word, sub: Vec<Word>) -> Result<BasicSet> {
    let n = root.dim();
    let mut root = root;
    let mut sub = sub;
    loop {
        if sub.iter().any(|r| r.is_empty()) {
            return Ok(BasicSet::Empty);
        }
        antichain(&mut sub)?;
        if merge_one_sibling_pair(n, &mut sub)? {
            continue;
        }
        if cover_witness(n, &sub)?.is_none() {
            return Ok(BasicSet::Empty);
        }
        // Push the root into a child branch while the other child is empty.
        let mut pushed = false;
        for side in [Side::A, Side::B] {
            let unit = Word::unit(n, side);
            let other = Word::unit(n, side.other());
            if child_is_empty(n, &other, &sub)? {
                let mut next = Vec::new();
                for r in &sub {
                    if let Some(t) = unit.quotient(r)? {
                        next.push(t);
                    }
                }
                root = root.concat(&unit)?;
                sub = next;
                pushed = true;
                break;
            }
        }
        if pushed {
            continue;
        }
        sub.sort();
        sub.dedup();
        return Ok(BasicSet::Set { root, sub });
    }
}

// Is V(e_side) \ ∪ V(translated sub) empty?
fn child_is_empty(n: usize, unit: &Word, sub: &[Word]) -> Result<bool> {
    let mut rel = Vec::new();
    for r in sub {
        if let Some(t) = unit.quotient(r)? {
            if t.is_empty() {
                return Ok(true);
            }
            rel.push(t);
        }
    }
    covers(n, &rel)
}

// Keep only ⪯-minimal subtracted words.
fn antichain(sub: &mut Vec<Word>) -> Result<()> {
    sub.sort();
    sub.dedup();
    let mut keep = vec![true; sub.len()];
    for i in 0..sub.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..sub.len() {
            if i == j || !keep[j] {
                continue;
            }
            if sub[j].is_prefix_of(&sub[i])? && sub[j] != sub[i] {
                keep[i] = false;
                break;
            }
        }
    }
    let mut idx = 0;
    sub.retain(|_| {
        let k = keep[idx];
        idx += 1;
        k
    });
    Ok(())
}

// Replace a pair {w·e_n', w·e_n''} by w. Returns true if a merge happened.
fn merge_one_sibling_pair(n: usize, sub: &mut Vec<Word>) -> Result<bool> {
    let e = GroupVector::unit_last(n);
    for i in 0..sub.len() {
        let last = sub[i].letters().last().unwrap().clone();
        let reduced = last.value.checked_sub(&e)?;
        let parent = if reduced.is_zero() {
            Word::new(n, sub[i].letters()[..sub[i].len() - 1].to_vec())?
        } else if reduced.is_positive() {
            let mut letters = sub[i].letters().to_vec();
            letters.last_mut().unwrap().value = reduced;
            Word::new(n, letters)?
        } else {
            continue;
        };
        let sibling = parent.concat(&Word::unit(n, last.side.other()))?;
        if let Some(j) = sub.iter().position(|w| *w == sibling) {
            if j != i {
                let mut out = Vec::with_capacity(sub.len() - 1);
                for (k, w) in sub.iter().enumerate() {
                    if k != i && k != j {
                        out.push(w.clone());
                    }
                }
                out.push(parent);
                *sub = out;
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The disjointization of a finite family: every nonempty
/// `A_F = ∩_{i∈F} S_i \ ∪_{i∉F} S_i` together with, for each input set, the
/// indices of the atoms it contains.
#[derive(Debug, Clone)]
pub struct AtomDecomposition {
    pub atoms: Vec<SetUnion>,
    /// For atom `k`, the set of input indices whose set contains it.
    pub in_inputs: Vec<Vec<usize>>,
    /// For input `i`, the atoms partitioning it.
    pub of_input: Vec<Vec<usize>>,
}

/// Disjointizes `sets` over the whole boundary; `n` is needed so the empty
/// family still produces the full atom.
pub fn atoms(n: usize, sets: &[BasicSet]) -> Result<AtomDecomposition> {
    let k = sets.len();
    assert!(k < usize::BITS as usize, "atom family too large");
    let mut collected: Vec<(Vec<usize>, SetUnion)> = Vec::new();
    for mask in 0..(1usize << k) {
        let mut inter = BasicSet::full(n);
        let mut members = Vec::new();
        for (i, s) in sets.iter().enumerate() {
            if mask & (1 << i) != 0 {
                inter = inter.intersect(s)?;
                members.push(i);
            }
        }
        if inter.is_empty() {
            continue;
        }
        let mut atom = SetUnion::from_disjoint(vec![inter]);
        for (i, s) in sets.iter().enumerate() {
            if mask & (1 << i) == 0 {
                atom = atom.subtract_basic(s)?;
            }
        }
        if !atom.is_empty() {
            collected.push((members, atom));
        }
    }
    collected.sort_by_cached_key(|(_, a)| {
        a.parts().first().map(|p| p.sort_key().expect("nonempty")).unwrap()
    });
    let mut of_input = vec![Vec::new(); k];
    let mut in_inputs = Vec::new();
    for (idx, (members, _)) in collected.iter().enumerate() {
        for &i in members {
            of_input[i].push(idx);
        }
        in_inputs.push(members.clone());
    }
    Ok(AtomDecomposition {
        atoms: collected.into_iter().map(|(_, a)| a).collect(),
        in_inputs,
        of_input,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_boundary_word;

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn v(s: &str) -> BasicSet {
        BasicSet::cylinder(w(s))
    }

    fn bw(s: &str) -> BoundaryWord {
        parse_boundary_word(s, 2).unwrap()
    }

    #[test]
    fn intersection_trichotomy() {
        assert_eq!(v("a(1,0)").intersect(&v("b(1,0)")).unwrap(), BasicSet::Empty);
        let nested = v("a(1,0)").intersect(&v("a(1,0)b(2,0)")).unwrap();
        assert_eq!(nested, v("a(1,0)b(2,0)"));
        let a = BasicSet::new(w("a(1,0)"), vec![w("b(2,0)")]).unwrap();
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn binary_split_identities() {
        // V(μ) \ (V(μe') ∪ V(μe'')) = ∅
        let inner = BasicSet::new(w("a(3,1)"), vec![w("a(0,1)"), w("b(0,1)")]).unwrap();
        assert!(inner.is_empty());
        // V(μ) \ V(μe') = V(μe'')
        let s = BasicSet::new(w("a(3,1)"), vec![w("a(0,1)")]).unwrap();
        assert_eq!(s, v("a(3,1)b(0,1)"));
    }

    #[test]
    fn coverage_decision() {
        assert!(covers(2, &[w("a(0,1)"), w("b(0,1)")]).unwrap());
        assert!(!covers(2, &[w("a(1,0)")]).unwrap());
        assert!(!covers(2, &[]).unwrap());
        // witness survives: a(0,inf) escapes V(a(1,0))
        let witness = bw("a(0,inf)");
        assert!(!v("a(1,0)").member(&witness).unwrap());
        assert!(BasicSet::full(2).member(&witness).unwrap());
    }

    #[test]
    fn member_basic() {
        let set = BasicSet::new(w("a(1,0)"), vec![w("b(2,0)")]).unwrap();
        assert!(set.member(&bw("a(1,0)b(1,0)a(inf,inf)")).unwrap());
        assert!(!set.member(&bw("a(1,0)b(2,0)a(inf,inf)")).unwrap());
        assert!(!set.member(&bw("b(1,0)a(inf,inf)")).unwrap());
        // a(0,inf) is not in V(a(1,0))
        assert!(!v("a(1,0)").member(&bw("a(0,inf)")).unwrap());
    }

    #[test]
    fn subtraction_cases() {
        // V(p) \ V(pq) is basic
        let d = v("a(1,0)").subtract(&v("a(1,0)b(2,0)")).unwrap();
        assert_eq!(d.parts().len(), 1);
        assert_eq!(d.parts()[0], BasicSet::new(w("a(1,0)"), vec![w("b(2,0)")]).unwrap());
        // A \ A = ∅
        let a = BasicSet::new(w("a(1,0)"), vec![w("b(2,0)")]).unwrap();
        assert!(a.subtract(&a).unwrap().is_empty());
        // V(μ) \ V(μ e') = V(μ e'')
        let mu = v("b(2,3)");
        let diff = mu.subtract(&v("b(2,3)a(0,1)")).unwrap();
        assert_eq!(diff.parts(), &[v("b(2,3)b(0,1)")]);
    }

    #[test]
    fn canonical_pushes_root() {
        // V(0) \ V(e') = V(e'')
        let s = BasicSet::new(Word::empty(2), vec![w("a(0,1)")]).unwrap();
        assert_eq!(s, v("b(0,1)"));
        // Case-I style set keeps its root.
        let t = BasicSet::new(Word::empty(2), vec![w("a(1,0)")]).unwrap();
        assert_eq!(t.root().unwrap(), &Word::empty(2));
        // Sibling merge happens below the root too.
        let u = BasicSet::new(w("a(1,0)"), vec![w("b(1,0)a(0,1)"), w("b(1,0)b(0,1)")]).unwrap();
        assert_eq!(u, BasicSet::new(w("a(1,0)"), vec![w("b(1,0)")]).unwrap());
    }

    #[test]
    fn canonicalize_idempotent_examples() {
        let sets = [
            BasicSet::new(w("a(1,0)"), vec![w("b(2,0)"), w("b(1,0)a(1,0)")]).unwrap(),
            BasicSet::new(Word::empty(2), vec![w("a(0,2)")]).unwrap(),
            BasicSet::new(w("b(0,1)"), vec![w("a(0,1)"), w("a(0,2)")]).unwrap(),
        ];
        for s in sets {
            if let BasicSet::Set { root, sub } = &s {
                assert_eq!(canonical(root.clone(), sub.clone()).unwrap(), s);
            }
        }
    }

    #[test]
    fn preimage_cases() {
        let setw = BasicSet::new(Word::empty(2), vec![w("a(1,0)b(1,0)")]).unwrap();
        // μ shallower than the subtracted word
        let pre = setw.preimage(&w("a(1,0)")).unwrap();
        assert_eq!(pre, BasicSet::new(Word::empty(2), vec![w("b(1,0)")]).unwrap());
        // subtracted word above μ kills everything
        let pre2 = setw.preimage(&w("a(1,0)b(1,0)")).unwrap();
        assert!(pre2.is_empty());
        // incomparable μ misses the root
        assert_eq!(v("a(1,0)").preimage(&w("b(5,5)")).unwrap(), BasicSet::Empty);
    }

    #[test]
    fn atoms_small_families() {
        // {V(e'), V(e'')}: the atoms are the inputs, the complement is empty.
        let d = atoms(2, &[v("a(0,1)"), v("b(0,1)")]).unwrap();
        assert_eq!(d.atoms.len(), 2);
        assert_eq!(d.of_input[0].len(), 1);
        // nested pair: V(p)\V(pq), V(pq), and the complement of V(p)
        let d2 = atoms(2, &[v("a(1,0)"), v("a(1,0)b(2,0)")]).unwrap();
        assert_eq!(d2.atoms.len(), 3);
        assert_eq!(d2.of_input[0].len(), 2);
        assert_eq!(d2.of_input[1].len(), 1);
        // single set: atom + complement
        let d3 = atoms(2, &[v("a(1,0)")]).unwrap();
        assert_eq!(d3.atoms.len(), 2);
        assert_eq!(d3.of_input[0].len(), 1);
    }

    #[test]
    fn relative_follows_convention() {
        assert_eq!(BasicSet::relative(&w("a(1,0)"), &w("b(1,0)")).unwrap(), v("a(1,0)"));
        assert!(BasicSet::relative(&w("a(1,0)b(1,0)"), &w("a(1,0)")).unwrap().is_empty());
        assert_eq!(
            BasicSet::relative(&w("a(1,0)"), &w("a(1,0)b(1,0)")).unwrap(),
            BasicSet::new(w("a(1,0)"), vec![w("b(1,0)")]).unwrap()
        );
    }
}
