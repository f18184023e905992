//! Compact-open bisections `[p,q]_W` of the boundary groupoid: the partial
//! maps `q·x ↦ p·x` for `x` in a compact-open `W`, together with their
//! intersection, composition and inversion calculus.

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::cylinder::BasicSet;
use crate::error::{Error, Result};
use crate::lambda::{parse_word, shift_equiv, BoundaryWord, GroupVector, Word};

/// A groupoid element `(x, k, y)` with `x ∼_k y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidPoint {
    x: BoundaryWord,
    k: GroupVector,
    y: BoundaryWord,
}

impl GroupoidPoint {
    pub fn new(x: BoundaryWord, k: GroupVector, y: BoundaryWord) -> Result<Self> {
        if !shift_equiv(&x, &k, &y)? {
            return Err(Error::NotShiftEquivalent);
        }
        Ok(GroupoidPoint { x, k, y })
    }

    pub fn range(&self) -> &BoundaryWord {
        &self.x
    }

    pub fn lag(&self) -> &GroupVector {
        &self.k
    }

    pub fn source(&self) -> &BoundaryWord {
        &self.y
    }

    pub fn inverse(&self) -> Result<GroupoidPoint> {
        let zero = GroupVector::zero(self.k.dim());
        GroupoidPoint::new(self.y.clone(), zero.checked_sub(&self.k)?, self.x.clone())
    }

    /// Composition `(x,k,y)·(y,m,z) = (x,k+m,z)`; the sources must match.
    pub fn compose(&self, other: &GroupoidPoint) -> Result<Option<GroupoidPoint>> {
        if self.y != other.x {
            return Ok(None);
        }
        Ok(Some(GroupoidPoint::new(
            self.x.clone(),
            self.k.checked_add(&other.k)?,
            other.y.clone(),
        )?))
    }
}

/// The bisection `[p,q]_W = {(p·x, l(p)−l(q), q·x) : x ∈ W}` in the maximal
/// normal form: `W` has root `0`, all common extension sits in the legs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bisection {
    p: Word,
    q: Word,
    /// Subtracted words of the root-0 set `W = ∂X \ ∪ V(w_i)`.
    w: Vec<Word>,
    lag: GroupVector,
}

impl Bisection {
    /// Builds `[p,q]_A` and normalizes; `None` when `A` is empty.
    pub fn new(p: Word, q: Word, set: BasicSet) -> Result<Option<Bisection>> {
        let BasicSet::Set { root, sub } = set else {
            return Ok(None);
        };
        let p = p.concat(&root)?;
        let q = q.concat(&root)?;
        let lag = p.length()?.checked_sub(&q.length()?)?;
        Ok(Some(Bisection { p, q, w: sub, lag }))
    }

    /// `U(p, q) = [p,q]_{∂X}`.
    pub fn unit_pair(p: Word, q: Word) -> Result<Bisection> {
        let lag = p.length()?.checked_sub(&q.length()?)?;
        Ok(Bisection { p, q, w: Vec::new(), lag })
    }

    /// The identity bisection over a set.
    pub fn diagonal(set: &BasicSet) -> Result<Option<Bisection>> {
        let n = match set.dim() {
            Some(n) => n,
            None => return Ok(None),
        };
        Bisection::new(Word::empty(n), Word::empty(n), set.clone())
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn p(&self) -> &Word {
        &self.p
    }

    pub fn q(&self) -> &Word {
        &self.q
    }

    pub fn lag(&self) -> &GroupVector {
        &self.lag
    }

    /// The root-0 set `W`.
    pub fn set(&self) -> BasicSet {
        BasicSet::Set { root: Word::empty(self.dim()), sub: self.w.clone() }
    }

    pub fn is_diagonal(&self) -> bool {
        self.p == self.q
    }

    /// `[p,q]_A ∩ [r,s]_B` via the common-extension trichotomy.
    pub fn intersect(&self, other: &Bisection) -> Result<Option<Bisection>> {
        if let (Some(mu), Some(mu2)) = (self.p.quotient(&other.p)?, self.q.quotient(&other.q)?) {
            if mu == mu2 {
                let set = self.set().intersect(&other.set().translate(&mu)?)?;
                return Bisection::new(self.p.clone(), self.q.clone(), set);
            }
        }
        if let (Some(mu), Some(mu2)) = (other.p.quotient(&self.p)?, other.q.quotient(&self.q)?) {
            if mu == mu2 {
                let set = other.set().intersect(&self.set().translate(&mu)?)?;
                return Bisection::new(other.p.clone(), other.q.clone(), set);
            }
        }
        Ok(None)
    }

    /// Set-wise product of bisections; empty unless the inner legs share an
    /// extension.
    pub fn compose(&self, other: &Bisection) -> Result<Option<Bisection>> {
        if let Some(mu) = self.q.quotient(&other.p)? {
            // other.p = q·μ
            let set = other.set().intersect(&self.set().preimage(&mu)?)?;
            return Bisection::new(self.p.concat(&mu)?, other.q.clone(), set);
        }
        if let Some(mu) = other.p.quotient(&self.q)? {
            // q = other.p·μ
            let set = self.set().intersect(&other.set().preimage(&mu)?)?;
            return Bisection::new(self.p.clone(), other.q.concat(&mu)?, set);
        }
        Ok(None)
    }

    /// `[p,q]_W ↦ [q,p]_W`.
    pub fn inverse(&self) -> Result<Bisection> {
        let zero = GroupVector::zero(self.dim());
        Ok(Bisection {
            p: self.q.clone(),
            q: self.p.clone(),
            w: self.w.clone(),
            lag: zero.checked_sub(&self.lag)?,
        })
    }

    /// Image of `W` under the source map, `q·W`.
    pub fn source_set(&self) -> Result<BasicSet> {
        self.set().translate(&self.q)
    }

    /// Image of `W` under the range map, `p·W`.
    pub fn range_set(&self) -> Result<BasicSet> {
        self.set().translate(&self.p)
    }

    /// Is the groupoid point `(x, k, y)` an element of this bisection?
    pub fn contains(&self, g: &GroupoidPoint) -> Result<bool> {
        if g.lag() != &self.lag {
            return Ok(false);
        }
        let Some(zx) = self.p.quotient_boundary(g.range())? else {
            return Ok(false);
        };
        let Some(zy) = self.q.quotient_boundary(g.source())? else {
            return Ok(false);
        };
        if zx != zy {
            return Ok(false);
        }
        self.set().member(&zx)
    }

    /// `self ⊆ other` as sets of groupoid elements.
    pub fn subset_of(&self, other: &Bisection) -> Result<bool> {
        Ok(self.intersect(other)?.as_ref() == Some(self))
    }

    /// Deterministic order: lag, then legs, then set.
    pub fn sort_key(&self) -> (GroupVector, Word, Word, Vec<Word>) {
        (self.lag.clone(), self.p.clone(), self.q.clone(), self.w.clone())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p.to_string(),
            "q": self.q.to_string(),
            "sub": self.w.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, n: usize) -> Result<Self> {
        let p = v.get("p").and_then(Value::as_str).ok_or_else(|| Error::parse(0, "missing p"))?;
        let q = v.get("q").and_then(Value::as_str).ok_or_else(|| Error::parse(0, "missing q"))?;
        let mut sub = Vec::new();
        if let Some(arr) = v.get("sub").and_then(Value::as_array) {
            for s in arr {
                sub.push(parse_word(
                    s.as_str().ok_or_else(|| Error::parse(0, "sub entries must be strings"))?,
                    n,
                )?);
            }
        }
        let set = BasicSet::new(Word::empty(n), sub)?;
        Bisection::new(parse_word(p, n)?, parse_word(q, n)?, set)?.ok_or(Error::EmptySet)
    }
}

impl PartialOrd for Bisection {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bisection {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl std::fmt::Display for Bisection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.w.is_empty() {
            write!(f, "U({}, {})", self.p, self.q)
        } else {
            write!(f, "B({}, {}, {})", self.p, self.q, self.set())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_boundary_word;

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn bw(s: &str) -> BoundaryWord {
        parse_boundary_word(s, 2).unwrap()
    }

    fn u(p: &str, q: &str) -> Bisection {
        Bisection::unit_pair(w(p), w(q)).unwrap()
    }

    #[test]
    fn normal_form_absorbs_the_set_root() {
        let set = BasicSet::cylinder(w("b(1,0)"));
        let t = Bisection::new(w("a(1,0)"), w("a(2,0)"), set).unwrap().unwrap();
        assert_eq!(t, u("a(1,0)b(1,0)", "a(2,0)b(1,0)"));
    }

    #[test]
    fn intersect_common_extension() {
        let t1 = u("a(1,0)", "b(1,0)");
        let t2 = Bisection::unit_pair(
            w("a(1,0)").concat(&w("b(2,0)")).unwrap(),
            w("b(1,0)").concat(&w("b(2,0)")).unwrap(),
        )
        .unwrap();
        let cap = t1.intersect(&t2).unwrap().unwrap();
        assert_eq!(cap, t2);
        // no common extension
        assert!(t1.intersect(&u("a(1,0)", "a(1,0)")).unwrap().is_none());
        // idempotence
        assert_eq!(t1.intersect(&t1).unwrap().unwrap(), t1);
    }

    #[test]
    fn compose_follows_leg_matching() {
        // [p,q]_W ∘ [q,s]_W = [p,s]_W
        let t1 = u("a(1,0)", "b(1,0)");
        let t2 = u("b(1,0)", "a(0,1)");
        let prod = t1.compose(&t2).unwrap().unwrap();
        assert_eq!(prod, u("a(1,0)", "a(0,1)"));
        // s_{a(1,0)} · s_{a(0,1)} · s_{b(2,0)}^*
        let s1 = u("a(1,0)", "0");
        let s2 = u("a(0,1)", "b(2,0)");
        let prod2 = s1.compose(&s2).unwrap().unwrap();
        assert_eq!(prod2, u("a(1,1)", "b(2,0)"));
        // incomparable legs
        assert!(u("a(1,0)", "b(1,0)").compose(&u("a(5,5)", "0")).unwrap().is_none());
    }

    #[test]
    fn lag_is_additive_under_compose() {
        let t1 = u("a(1,0)", "b(1,0)a(0,2)");
        let t2 = u("b(1,0)a(0,2)b(3,0)", "a(0,1)");
        let prod = t1.compose(&t2).unwrap().unwrap();
        let want = t1.lag().checked_add(t2.lag()).unwrap();
        assert_eq!(prod.lag(), &want);
    }

    #[test]
    fn inverse_swaps_legs() {
        let t = u("a(1,0)", "b(2,0)");
        let inv = t.inverse().unwrap();
        assert_eq!(inv, u("b(2,0)", "a(1,0)"));
        assert_eq!(inv.inverse().unwrap(), t);
        let zero = GroupVector::zero(2);
        assert_eq!(zero.checked_sub(t.lag()).unwrap(), *inv.lag());
    }

    #[test]
    fn source_range_and_identity_product() {
        let t = u("a(1,0)", "b(2,0)");
        assert_eq!(t.source_set().unwrap(), BasicSet::cylinder(w("b(2,0)")));
        assert_eq!(t.range_set().unwrap(), BasicSet::cylinder(w("a(1,0)")));
        let id = t.compose(&t.inverse().unwrap()).unwrap().unwrap();
        let want = Bisection::diagonal(&t.range_set().unwrap()).unwrap().unwrap();
        assert_eq!(id, want);
    }

    #[test]
    fn contains_points() {
        let t = u("a(1,0)", "b(2,0)");
        let z = bw("a(inf,inf)");
        let x = w("a(1,0)").concat_boundary(&z).unwrap();
        let y = w("b(2,0)").concat_boundary(&z).unwrap();
        let k = t.lag().clone();
        let g = GroupoidPoint::new(x, k, y).unwrap();
        assert!(t.contains(&g).unwrap());
        // lag mismatch
        let g2 = GroupoidPoint::new(
            g.range().clone(),
            GroupVector::zero(2),
            g.range().clone(),
        )
        .unwrap();
        assert!(!t.contains(&g2).unwrap());
    }
}
