//! The dense subalgebra of the crossed product by the gauge action, spanned
//! by functions `t ↦ ⟨λ,t⟩·χ_{[p,q]_W}`. Convolution integrates the
//! character orthogonality away symbolically: a product of generators
//! survives exactly when the exponents line up with the grade.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::groupoid::Bisection;
use crate::lambda::{GroupVector, Side, Word};
use crate::scalar::Scalar;

/// A generator `⟨λ,·⟩·χ_T` of the crossed product.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CPTerm {
    pub lambda: GroupVector,
    pub term: Bisection,
}

impl CPTerm {
    pub fn new(lambda: GroupVector, term: Bisection) -> Result<Self> {
        if lambda.dim() != term.dim() {
            return Err(Error::DimensionMismatch { expected: term.dim(), got: lambda.dim() });
        }
        Ok(CPTerm { lambda, term })
    }
}

/// A finite linear combination of crossed-product generators, kept with each
/// exponent's algebra part in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CPElement {
    n: usize,
    terms: BTreeMap<CPTerm, Scalar>,
}

impl CPElement {
    pub fn zero(n: usize) -> Self {
        CPElement { n, terms: BTreeMap::new() }
    }

    pub fn generator(lambda: GroupVector, term: Bisection, coeff: Scalar) -> Result<Self> {
        let n = term.dim();
        let t = CPTerm::new(lambda, term)?;
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(t, coeff);
        }
        Ok(CPElement { n, terms })
    }

    /// `⟨λ,·⟩ · f` for a core-algebra element `f`.
    pub fn from_element(lambda: &GroupVector, f: &Element) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (t, c) in f.terms() {
            terms.insert(CPTerm::new(lambda.clone(), t.clone())?, c.clone());
        }
        Ok(CPElement { n: f.dim(), terms })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<CPTerm, Scalar> {
        &self.terms
    }

    pub fn add(&self, other: &CPElement) -> CPElement {
        let mut terms = self.terms.clone();
        for (t, c) in &other.terms {
            let e = terms.entry(t.clone()).or_insert_with(Scalar::zero);
            *e = e.clone() + c.clone();
            if e.is_zero() {
                terms.remove(t);
            }
        }
        CPElement { n: self.n, terms }
    }

    pub fn neg(&self) -> CPElement {
        CPElement {
            n: self.n,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &CPElement) -> CPElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> CPElement {
        if s.is_zero() {
            return CPElement::zero(self.n);
        }
        CPElement {
            n: self.n,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), s.clone() * c.clone())).collect(),
        }
    }

    /// Renormalizes each exponent's algebra part.
    pub fn normalize(&self) -> Result<CPElement> {
        let mut by_lambda: BTreeMap<GroupVector, Element> = BTreeMap::new();
        for (t, c) in &self.terms {
            let piece = Element::from_term(t.term.clone(), c.clone());
            match by_lambda.get_mut(&t.lambda) {
                Some(e) => *e = e.add(&piece),
                None => {
                    by_lambda.insert(t.lambda.clone(), piece);
                }
            }
        }
        let mut out = CPElement::zero(self.n);
        for (lambda, e) in by_lambda {
            out = out.add(&CPElement::from_element(&lambda, &e.normalize()?)?);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.normalize()?.terms.is_empty())
    }

    /// Convolution. On generators `(λ₁,T₁)·(λ₂,T₂)` the Haar integral of the
    /// characters vanishes unless `λ₁ + grade(T₂) = λ₂`, and then the result
    /// is `(λ₂, T₁T₂)`.
    pub fn convolve(&self, other: &CPElement) -> Result<CPElement> {
        let mut raw = CPElement::zero(self.n);
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                let aligned = t1.lambda.checked_add(t2.term.lag())? == t2.lambda;
                if !aligned {
                    continue;
                }
                if let Some(t) = t1.term.compose(&t2.term)? {
                    raw = raw.add(&CPElement::generator(
                        t2.lambda.clone(),
                        t,
                        c1.clone() * c2.clone(),
                    )?);
                }
            }
        }
        raw.normalize()
    }

    /// `f^*(t) = ⟨λ + l(q) − l(p), t⟩ s_q s_p^*` on generators, conjugate
    /// linear.
    pub fn adjoint(&self) -> Result<CPElement> {
        let mut out = CPElement::zero(self.n);
        for (t, c) in &self.terms {
            let lambda = t.lambda.checked_sub(t.term.lag())?;
            out = out.add(&CPElement::generator(lambda, t.term.inverse()?, c.conj())?);
        }
        out.normalize()
    }

    /// The dual action: shifts every character exponent by `beta`.
    pub fn dual_action(&self, beta: &GroupVector) -> Result<CPElement> {
        let mut out = CPElement::zero(self.n);
        for (t, c) in &self.terms {
            out = out.add(&CPElement::generator(
                t.lambda.checked_add(beta)?,
                t.term.clone(),
                c.clone(),
            )?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(t, c)| {
                json!({
                    "lambda": t.lambda.coords(),
                    "coeff": {"re": c.re().to_string(), "im": c.im().to_string()},
                    "term": t.term.to_json(),
                })
            })
            .collect();
        Value::Array(terms)
    }
}

impl fmt::Display for CPElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let vec = t
                .lambda
                .coords()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let inner = Element::from_term(t.term.clone(), c.clone());
            write!(f, "CP(({vec}), {inner})")?;
        }
        Ok(())
    }
}

/// Embeds a grade-zero element of the core as a constant function.
pub fn embed_core(b: &Element) -> Result<CPElement> {
    for t in b.terms().keys() {
        if !t.lag().is_zero() {
            return Err(Error::NotGradeZero);
        }
    }
    CPElement::from_element(&GroupVector::zero(b.dim()), b)
}

/// `embed(b1) · f · embed(b2)`; vanishes unless a generator has `λ = 0` and
/// grade zero, in which case it lands back in the embedded core.
pub fn hereditary_product(b1: &Element, f: &CPElement, b2: &Element) -> Result<CPElement> {
    embed_core(b1)?.convolve(f)?.convolve(&embed_core(b2)?)
}

/// Outcome of the sufficient membership test for the ideal generated by the
/// embedded core: `NotImplied` is a non-answer, not a refutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IbAnswer {
    Implied,
    NotImplied,
}

/// Sufficient condition: every generator satisfies `λ + l(q) ≥ l(p)` in lex
/// order.
pub fn in_ib_sufficient(f: &CPElement) -> Result<IbAnswer> {
    for t in f.terms().keys() {
        let slack = t.lambda.checked_sub(t.term.lag())?;
        if slack.is_positive() || slack.is_zero() {
            continue;
        }
        return Ok(IbAnswer::NotImplied);
    }
    Ok(IbAnswer::Implied)
}

/// The smallest `β ≥ 0` with `β + λ + l(q) ≥ l(p)` for every generator of
/// `f`; shifting by it lands `f` under the sufficient condition.
pub fn exhaustion_beta(f: &CPElement) -> Result<GroupVector> {
    let mut best = GroupVector::zero(f.dim());
    for t in f.terms().keys() {
        let need = t.term.lag().checked_sub(&t.lambda)?;
        if need.lex_cmp(&best)? == std::cmp::Ordering::Greater {
            best = need;
        }
    }
    Ok(best)
}

/// Verifies the exponent-insertion identity behind the invariance of the
/// core ideal under the nonnegative dual action: for `λ ≥ 0`,
/// `α̂_λ(f·b·g) = f'·b'·g'` where the primed generators carry `λ` inserted
/// as a first-copy letter into the inner legs.
pub fn dual_invariance_identity(
    f: &CPTerm,
    b: &CPTerm,
    g: &CPTerm,
    lambda: &GroupVector,
) -> Result<bool> {
    if !b.lambda.is_zero() || !b.term.lag().is_zero() {
        return Err(Error::NotGradeZero);
    }
    if !(lambda.is_zero() || lambda.is_positive()) {
        return Err(Error::NegativeExponent);
    }
    let one = Scalar::one();
    let fe = CPElement::generator(f.lambda.clone(), f.term.clone(), one.clone())?;
    let be = CPElement::generator(b.lambda.clone(), b.term.clone(), one.clone())?;
    let ge = CPElement::generator(g.lambda.clone(), g.term.clone(), one.clone())?;
    let lhs = fe.convolve(&be)?.convolve(&ge)?.dual_action(lambda)?.normalize()?;

    if lambda.is_zero() {
        let rhs = fe.convolve(&be)?.convolve(&ge)?;
        return Ok(lhs == rhs);
    }

    let insert = Word::single(Side::A, lambda.clone())?;
    let fp = rebuild(&f.term, |p, q| Ok((p.clone(), insert.concat(q)?)))?;
    let bp = rebuild(&b.term, |p, q| Ok((insert.concat(p)?, insert.concat(q)?)))?;
    let gp = rebuild(&g.term, |p, q| Ok((insert.concat(p)?, q.clone())))?;

    let f2 = CPElement::generator(f.lambda.clone(), fp, one.clone())?;
    let b2 = CPElement::generator(GroupVector::zero(b.lambda.dim()), bp, one.clone())?;
    let g2 = CPElement::generator(lambda.checked_add(&g.lambda)?, gp, one)?;
    let rhs = f2.convolve(&b2)?.convolve(&g2)?.normalize()?;
    Ok(lhs == rhs)
}

fn rebuild(
    t: &Bisection,
    legs: impl Fn(&Word, &Word) -> Result<(Word, Word)>,
) -> Result<Bisection> {
    let (p, q) = legs(t.p(), t.q())?;
    Bisection::new(p, q, t.set())?.ok_or(Error::EmptySet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn gv(c: &[i64]) -> GroupVector {
        GroupVector::new(c.to_vec()).unwrap()
    }

    fn gen(lambda: &[i64], p: &str, q: &str) -> CPElement {
        CPElement::generator(
            gv(lambda),
            Bisection::unit_pair(w(p), w(q)).unwrap(),
            Scalar::one(),
        )
        .unwrap()
    }

    #[test]
    fn closed_forms_for_f_fstar() {
        let (p, q) = (w("a(1,0)b(1,0)"), w("b(2,2)"));
        let f = gen(&[1, -3], "a(1,0)b(1,0)", "b(2,2)");
        let fstar = f.adjoint().unwrap();
        // f·f* = ⟨λ + l(q) − l(p), ·⟩ s_p s_p^*
        let lam = gv(&[1, -3])
            .checked_add(&q.length().unwrap())
            .unwrap()
            .checked_sub(&p.length().unwrap())
            .unwrap();
        let want = CPElement::generator(
            lam,
            Bisection::unit_pair(p.clone(), p.clone()).unwrap(),
            Scalar::one(),
        )
        .unwrap();
        assert_eq!(f.convolve(&fstar).unwrap(), want);
        // f*·f = ⟨λ,·⟩ s_q s_q^*
        let want2 = CPElement::generator(
            gv(&[1, -3]),
            Bisection::unit_pair(q.clone(), q.clone()).unwrap(),
            Scalar::one(),
        )
        .unwrap();
        assert_eq!(fstar.convolve(&f).unwrap(), want2);
    }

    #[test]
    fn convolution_needs_aligned_exponents() {
        let f = gen(&[1, 0], "a(1,0)", "0");
        let g = gen(&[0, 0], "0", "a(1,0)");
        // grade of g's term is (-1,0); λ_f + grade = λ_g holds
        assert!(!f.convolve(&g).unwrap().terms().is_empty());
        let h = gen(&[5, 0], "0", "a(1,0)");
        assert!(f.convolve(&h).unwrap().terms().is_empty());
    }

    #[test]
    fn adjoint_involutive_and_antimultiplicative() {
        let f = gen(&[1, 2], "a(1,0)", "b(1,0)");
        let g = gen(&[-1, 0], "b(1,0)", "0");
        assert_eq!(f.adjoint().unwrap().adjoint().unwrap(), f);
        let lhs = f.convolve(&g).unwrap().adjoint().unwrap();
        let rhs = g.adjoint().unwrap().convolve(&f.adjoint().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dual_action_shifts_exponents() {
        let f = gen(&[1, 2], "a(1,0)", "b(1,0)");
        let shifted = f.dual_action(&gv(&[0, 3])).unwrap();
        let (t, _) = shifted.terms().iter().next().unwrap();
        assert_eq!(t.lambda, gv(&[1, 5]));
        assert_eq!(f.dual_action(&GroupVector::zero(2)).unwrap(), f);
        let twice = f.dual_action(&gv(&[1, 0])).unwrap().dual_action(&gv(&[0, 1])).unwrap();
        assert_eq!(twice, f.dual_action(&gv(&[1, 1])).unwrap());
    }

    #[test]
    fn embedding_is_multiplicative() {
        let b1 = Element::gen_pq(&w("a(1,0)"), &w("b(1,0)")).unwrap();
        let b2 = Element::gen_pq(&w("b(1,0)"), &w("b(1,0)")).unwrap();
        let lhs = embed_core(&b1).unwrap().convolve(&embed_core(&b2).unwrap()).unwrap();
        let rhs = embed_core(&b1.mul(&b2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        let one = embed_core(&Element::one(2).unwrap()).unwrap();
        assert_eq!(one.convolve(&embed_core(&b1).unwrap()).unwrap(), embed_core(&b1).unwrap());
        assert!(embed_core(&Element::gen_s(&w("a(1,0)")).unwrap()).is_err());
    }

    #[test]
    fn hereditary_vanishing() {
        let b = Element::one(2).unwrap();
        // λ = 0 and grade 0 survives
        let f0 = gen(&[0, 0], "a(1,0)", "b(1,0)");
        let r = hereditary_product(&b, &f0, &b).unwrap();
        assert_eq!(r, f0);
        // λ ≠ 0 dies
        let f1 = gen(&[0, 1], "a(1,0)", "b(1,0)");
        assert!(hereditary_product(&b, &f1, &b).unwrap().terms().is_empty());
        // grade ≠ 0, λ = 0 dies
        let f2 = gen(&[0, 0], "a(1,0)", "0");
        assert!(hereditary_product(&b, &f2, &b).unwrap().terms().is_empty());
    }

    #[test]
    fn ib_condition() {
        let ok = gen(&[0, 0], "b(2,2)", "b(2,2)");
        assert_eq!(in_ib_sufficient(&ok).unwrap(), IbAnswer::Implied);
        // λ + l(q) − l(p) = (1,0)+(1,0)−(2,0) = 0 ≥ 0
        let g = gen(&[1, 0], "a(1,0)b(1,0)", "b(1,0)");
        assert_eq!(in_ib_sufficient(&g).unwrap(), IbAnswer::Implied);
        let bad = gen(&[-1, 0], "a(1,0)", "a(1,0)");
        assert_eq!(in_ib_sufficient(&bad).unwrap(), IbAnswer::NotImplied);
        let beta = exhaustion_beta(&bad).unwrap();
        assert_eq!(
            in_ib_sufficient(&bad.dual_action(&beta).unwrap()).unwrap(),
            IbAnswer::Implied
        );
    }

    #[test]
    fn insertion_identity_small() {
        // Nonvanishing instance: λ₁ = 0, λ₂ = grade(g).
        let f = CPTerm::new(gv(&[0, 0]), Bisection::unit_pair(w("a(1,0)"), w("b(1,0)")).unwrap())
            .unwrap();
        let b = CPTerm::new(gv(&[0, 0]), Bisection::unit_pair(w("b(1,0)"), w("b(1,0)")).unwrap())
            .unwrap();
        let g = CPTerm::new(
            gv(&[2, 0]),
            Bisection::unit_pair(w("b(1,0)a(2,0)"), w("b(1,0)")).unwrap(),
        )
        .unwrap();
        assert!(dual_invariance_identity(&f, &b, &g, &gv(&[0, 1])).unwrap());
        assert!(dual_invariance_identity(&f, &b, &g, &GroupVector::zero(2)).unwrap());
    }
}
