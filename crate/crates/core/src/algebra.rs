//! Exact linear combinations of the indicator functions `χ_{[p,q]_W}`: the
//! dense *-algebra spanned by the products `s_p s_q^*` of the generating
//! partial isometries. Products extend the bisection calculus bilinearly;
//! the normal form atomizes the supports within each co-prefix class so that
//! an element is zero exactly when it has no terms.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::cylinder::{atoms, BasicSet};
use crate::error::{Error, Result};
use crate::groupoid::{Bisection, GroupoidPoint};
use crate::lambda::{GroupVector, Word};
use crate::scalar::Scalar;

/// An exact element of the dense *-algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    n: usize,
    terms: BTreeMap<Bisection, Scalar>,
}

impl Element {
    pub fn zero(n: usize) -> Self {
        Element { n, terms: BTreeMap::new() }
    }

    /// The unit `χ_{[0,0]_{∂X}} = s_0`.
    pub fn one(n: usize) -> Result<Self> {
        let t = Bisection::unit_pair(Word::empty(n), Word::empty(n))?;
        Ok(Element::from_term(t, Scalar::one()))
    }

    /// The generator `s_p = χ_{U(p,0)}`.
    pub fn gen_s(p: &Word) -> Result<Self> {
        let t = Bisection::unit_pair(p.clone(), Word::empty(p.dim()))?;
        Ok(Element::from_term(t, Scalar::one()))
    }

    /// `s_p s_q^* = χ_{U(p,q)}`.
    pub fn gen_pq(p: &Word, q: &Word) -> Result<Self> {
        let t = Bisection::unit_pair(p.clone(), q.clone())?;
        Ok(Element::from_term(t, Scalar::one()))
    }

    pub fn from_term(t: Bisection, c: Scalar) -> Self {
        let n = t.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(t, c);
        }
        Element { n, terms }
    }

    /// `χ_{[p,q]_A}`; zero when the set is empty.
    pub fn chi(p: &Word, q: &Word, set: &BasicSet) -> Result<Self> {
        match Bisection::new(p.clone(), q.clone(), set.clone())? {
            Some(t) => Ok(Element::from_term(t, Scalar::one())),
            None => Ok(Element::zero(p.dim())),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Bisection, Scalar> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut terms = self.terms.clone();
        for (t, c) in &other.terms {
            let entry = terms.entry(t.clone()).or_insert_with(Scalar::zero);
            *entry = entry.clone() + c.clone();
            if entry.is_zero() {
                terms.remove(t);
            }
        }
        Element { n: self.n, terms }
    }

    pub fn neg(&self) -> Element {
        Element {
            n: self.n,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        if s.is_zero() {
            return Element::zero(self.n);
        }
        Element {
            n: self.n,
            terms: self.terms.iter().map(|(t, c)| (t.clone(), s.clone() * c.clone())).collect(),
        }
    }

    /// Bilinear extension of bisection composition; the result is in normal
    /// form. Reproduces the generator relations: `s_p s_q = s_{pq}`,
    /// `s_p^* s_q = s_r` when `q = pr`, `s_r^*` when `p = qr`, else `0`.
    pub fn mul(&self, other: &Element) -> Result<Element> {
        let mut raw: Vec<(Bisection, Scalar)> = Vec::new();
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                if let Some(t) = t1.compose(t2)? {
                    raw.push((t, c1.clone() * c2.clone()));
                }
            }
        }
        normalize_terms(self.n, raw)
    }

    /// Conjugate-linear involution.
    pub fn adjoint(&self) -> Result<Element> {
        let mut raw = Vec::new();
        for (t, c) in &self.terms {
            raw.push((t.inverse()?, c.conj()));
        }
        normalize_terms(self.n, raw)
    }

    /// Canonical normal form; idempotent, and zero iff there are no terms.
    pub fn normalize(&self) -> Result<Element> {
        normalize_terms(self.n, self.terms.iter().map(|(t, c)| (t.clone(), c.clone())).collect())
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.normalize()?.terms.is_empty())
    }

    /// The grade `l(p) − l(q)` shared by all terms, when there is one.
    pub fn grade(&self) -> Result<GroupVector> {
        let mut it = self.terms.keys();
        let first = it.next().ok_or(Error::NotHomogeneous)?;
        let g = first.lag().clone();
        for t in it {
            if t.lag() != &g {
                return Err(Error::NotHomogeneous);
            }
        }
        Ok(g)
    }

    /// The terms of grade `λ`.
    pub fn homogeneous_part(&self, lambda: &GroupVector) -> Element {
        Element {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.lag() == lambda)
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }

    /// All grades present.
    pub fn grades(&self) -> Vec<GroupVector> {
        let mut gs: Vec<GroupVector> = self.terms.keys().map(|t| t.lag().clone()).collect();
        gs.sort();
        gs.dedup();
        gs
    }

    /// The conditional expectation onto the lag-zero core: keeps exactly the
    /// grade-zero terms.
    pub fn expectation(&self) -> Element {
        self.homogeneous_part(&GroupVector::zero(self.n))
    }

    /// Applies the gauge automorphism at `t`: every term is scaled by the
    /// character value at its grade. The only inexact operation in the crate.
    pub fn gauge_apply(&self, t: &GaugePoint) -> Result<GaugeElement> {
        if t.angles.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: t.angles.len() });
        }
        let mut terms = Vec::new();
        for (term, c) in &self.terms {
            let (re, im) = c.to_f64();
            let z = Complex64::new(re, im) * t.character(term.lag());
            terms.push((term.clone(), z));
        }
        Ok(GaugeElement { terms })
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(t, c)| {
                json!({
                    "coeff": {"re": c.re().to_string(), "im": c.im().to_string()},
                    "p": t.p().to_string(),
                    "q": t.q().to_string(),
                    "set": t.set().to_json(),
                })
            })
            .collect();
        Value::Array(terms)
    }

    pub fn from_json(v: &Value, n: usize) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::parse(0, "element must be an array"))?;
        let mut out = Element::zero(n);
        for t in arr {
            let coeff = t.get("coeff").ok_or_else(|| Error::parse(0, "missing coeff"))?;
            let re = parse_rational(coeff.get("re").and_then(Value::as_str).unwrap_or("0"))?;
            let im = parse_rational(coeff.get("im").and_then(Value::as_str).unwrap_or("0"))?;
            let p = crate::lambda::parse_word(
                t.get("p").and_then(Value::as_str).ok_or_else(|| Error::parse(0, "missing p"))?,
                n,
            )?;
            let q = crate::lambda::parse_word(
                t.get("q").and_then(Value::as_str).ok_or_else(|| Error::parse(0, "missing q"))?,
                n,
            )?;
            let set = match t.get("set") {
                Some(s) => BasicSet::from_json(s, n)?,
                None => BasicSet::full(n),
            };
            let chi = Element::chi(&p, &q, &set)?.scale(&Scalar::new(re, im));
            out = out.add(&chi);
        }
        Ok(out)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    s.parse::<BigRational>().map_err(|_| Error::parse(0, format!("bad rational: {s}")))
}

// Group terms into co-prefix classes, rebase each class to its least pair,
// disjointize the supports and recombine.
fn normalize_terms(n: usize, raw: Vec<(Bisection, Scalar)>) -> Result<Element> {
    // Merge duplicate bisections first.
    let mut merged: BTreeMap<Bisection, Scalar> = BTreeMap::new();
    for (t, c) in raw {
        if c.is_zero() {
            continue;
        }
        let entry = merged.entry(t).or_insert_with(Scalar::zero);
        *entry = entry.clone() + c;
    }
    merged.retain(|_, c| !c.is_zero());
    let terms: Vec<(Bisection, Scalar)> = merged.into_iter().collect();

    // Union-find over pairwise relatability.
    let mut parent: Vec<usize> = (0..terms.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            if pair_le(&terms[i].0, &terms[j].0)? || pair_le(&terms[j].0, &terms[i].0)? {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..terms.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }

    let mut out: BTreeMap<Bisection, Scalar> = BTreeMap::new();
    for members in classes.values() {
        // Least pair of the class.
        let mut base = &terms[members[0]].0;
        for &i in &members[1..] {
            if pair_le(&terms[i].0, base)? {
                base = &terms[i].0;
            }
        }
        // Rebase every member's support below the base legs.
        let mut sets = Vec::with_capacity(members.len());
        for &i in members {
            let mu = base
                .p()
                .quotient(terms[i].0.p())?
                .expect("class member extends the least pair");
            sets.push(terms[i].0.set().translate(&mu)?);
        }
        let decomposition = atoms(n, &sets)?;
        for (k, atom) in decomposition.atoms.iter().enumerate() {
            if decomposition.in_inputs[k].is_empty() {
                continue;
            }
            let mut coeff = Scalar::zero();
            for &input in &decomposition.in_inputs[k] {
                coeff = coeff + terms[members[input]].1.clone();
            }
            if coeff.is_zero() {
                continue;
            }
            for part in atom.parts() {
                let t = Bisection::new(base.p().clone(), base.q().clone(), part.clone())?
                    .expect("atom parts are nonempty");
                let entry = out.entry(t).or_insert_with(Scalar::zero);
                *entry = entry.clone() + coeff.clone();
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(Element { n, terms: out })
}

// a ≤ b: some μ has b = (a.p·μ, a.q·μ).
fn pair_le(a: &Bisection, b: &Bisection) -> Result<bool> {
    match (a.p().quotient(b.p())?, a.q().quotient(b.q())?) {
        (Some(m1), Some(m2)) => Ok(m1 == m2),
        _ => Ok(false),
    }
}

/// A point of the dual torus with rational angle coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugePoint {
    angles: Vec<BigRational>,
}

impl GaugePoint {
    /// Angles are taken mod 1.
    pub fn new(angles: Vec<BigRational>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let one = BigRational::from_integer(1.into());
        let angles = angles
            .into_iter()
            .map(|a| {
                let f = a.fract();
                if f < BigRational::zero() {
                    f + one.clone()
                } else {
                    f
                }
            })
            .collect();
        Ok(GaugePoint { angles })
    }

    pub fn trivial(n: usize) -> Self {
        GaugePoint { angles: vec![BigRational::zero(); n] }
    }

    pub fn angles(&self) -> &[BigRational] {
        &self.angles
    }

    /// `⟨λ, t⟩ = exp(2πi Σ λ_i θ_i)`, reduced mod 1 exactly first.
    pub fn character(&self, lambda: &GroupVector) -> Complex64 {
        let mut total = BigRational::zero();
        for (c, a) in lambda.coords().iter().zip(&self.angles) {
            total += BigRational::from_integer((*c).into()) * a;
        }
        let frac = total.fract();
        let theta: f64 = {
            let n: f64 = frac.numer().to_string().parse().unwrap_or(0.0);
            let d: f64 = frac.denom().to_string().parse().unwrap_or(1.0);
            n / d
        };
        let arg = 2.0 * std::f64::consts::PI * theta;
        Complex64::new(arg.cos(), arg.sin())
    }
}

/// An element with complex floating-point coefficients, produced by the
/// gauge action. Not normalized; evaluation sums the containing terms.
#[derive(Debug, Clone)]
pub struct GaugeElement {
    terms: Vec<(Bisection, Complex64)>,
}

impl GaugeElement {
    pub fn terms(&self) -> &[(Bisection, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, g: &GroupoidPoint) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, c) in &self.terms {
            if t.contains(g)? {
                acc += c;
            }
        }
        Ok(acc)
    }

    /// Floating-point convolution used to test multiplicativity of the gauge
    /// action; composes term pairs without renormalizing.
    pub fn convolve(&self, other: &GaugeElement) -> Result<GaugeElement> {
        let mut terms = Vec::new();
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                if let Some(t) = t1.compose(t2)? {
                    terms.push((t, c1 * c2));
                }
            }
        }
        Ok(GaugeElement { terms })
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c == &Scalar::one() {
                write!(f, "{}", term_text(t))?;
            } else {
                write!(f, "{} * {}", c, term_text(t))?;
            }
        }
        Ok(())
    }
}

fn term_text(t: &Bisection) -> String {
    let full = t.set().sub().is_empty();
    if full && t.q().is_empty() {
        return format!("S({})", t.p());
    }
    if full && t.p().is_empty() && !t.q().is_empty() {
        return format!("ADJ(S({}))", t.q());
    }
    format!("CHI({}, {}, {})", t.p(), t.q(), set_text(&t.set()))
}

fn set_text(s: &BasicSet) -> String {
    match s {
        BasicSet::Empty => "none".to_string(),
        BasicSet::Set { root, sub } => {
            if sub.is_empty() && root.is_empty() {
                return "all".to_string();
            }
            let mut out = if root.is_empty() {
                "all".to_string()
            } else {
                format!("V({root})")
            };
            for r in sub {
                let abs = root.concat(r).expect("display");
                out.push_str(&format!(" \\ V({abs})"));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn s(p: &str) -> Element {
        Element::gen_s(&w(p)).unwrap()
    }

    #[test]
    fn generator_products() {
        // s_p s_q = s_{pq}
        let left = s("a(1,0)").mul(&s("a(0,1)")).unwrap();
        assert_eq!(left, s("a(1,1)"));
        // s_p^* s_{pr} = s_r
        let sp_star = s("a(1,0)").adjoint().unwrap();
        let spr = s("a(1,0)b(2,0)");
        assert_eq!(sp_star.mul(&spr).unwrap(), s("b(2,0)"));
        // s_{a(1,0)}^* s_{b(1,0)} = 0
        let z = s("a(1,0)").adjoint().unwrap().mul(&s("b(1,0)")).unwrap();
        assert!(z.terms().is_empty());
        // s_p^* s_p = 1
        let isom = s("a(3,-1)").adjoint().unwrap().mul(&s("a(3,-1)")).unwrap();
        assert_eq!(isom, Element::one(2).unwrap());
    }

    #[test]
    fn adjoint_is_involutive() {
        let f = s("a(1,0)")
            .mul(&s("b(2,0)").adjoint().unwrap())
            .unwrap()
            .scale(&Scalar::from_ratio(3, 2))
            .add(&Element::one(2).unwrap());
        assert_eq!(f.adjoint().unwrap().adjoint().unwrap(), f.normalize().unwrap());
    }

    #[test]
    fn binary_split_normalizes_to_zero() {
        // χ_{V(μ)} − χ_{V(μe')} − χ_{V(μe'')} = 0 on the diagonal.
        let mu = w("a(2,1)");
        let d0 = Element::chi(&mu, &mu, &BasicSet::full(2)).unwrap();
        let e1 = mu.concat(&Word::unit(2, crate::lambda::Side::A)).unwrap();
        let e2 = mu.concat(&Word::unit(2, crate::lambda::Side::B)).unwrap();
        let d1 = Element::chi(&e1, &e1, &BasicSet::full(2)).unwrap();
        let d2 = Element::chi(&e2, &e2, &BasicSet::full(2)).unwrap();
        let f = d0.sub(&d1).sub(&d2);
        assert!(f.is_zero().unwrap());
        assert_eq!(f.normalize().unwrap(), Element::zero(2));
    }

    #[test]
    fn chi_difference_identity() {
        // χ_{U(a,b)} − χ_{U(aμ,bμ)} = χ_{[a,b]_{∂X \ V(μ)}}
        let a = w("a(1,0)");
        let b = w("b(2,0)");
        let mu = w("a(0,1)");
        let big = Element::gen_pq(&a, &b).unwrap();
        let small =
            Element::gen_pq(&a.concat(&mu).unwrap(), &b.concat(&mu).unwrap()).unwrap();
        let diff = big.sub(&small).normalize().unwrap();
        let want = Element::chi(
            &a,
            &b,
            &BasicSet::new(Word::empty(2), vec![mu.clone()]).unwrap(),
        )
        .unwrap()
        .normalize()
        .unwrap();
        assert_eq!(diff, want);
    }

    #[test]
    fn normalize_idempotent() {
        let f = s("a(1,0)")
            .add(&s("a(1,0)b(1,0)").scale(&Scalar::from_int(2)))
            .add(&Element::one(2).unwrap().neg());
        let n1 = f.normalize().unwrap();
        let n2 = n1.normalize().unwrap();
        assert_eq!(n1, n2);
    }

    #[test]
    fn grading() {
        let f = s("a(1,0)").mul(&s("b(2,3)").adjoint().unwrap()).unwrap();
        assert_eq!(f.grade().unwrap(), GroupVector::new(vec![-1, -3]).unwrap());
        let one = Element::one(2).unwrap();
        assert_eq!(one.grade().unwrap(), GroupVector::zero(2));
        let mixed = f.add(&one);
        assert!(mixed.grade().is_err());
        assert_eq!(mixed.homogeneous_part(&GroupVector::zero(2)), one);
    }

    #[test]
    fn expectation_projects_onto_grade_zero() {
        let f = s("a(1,0)");
        assert_eq!(f.expectation(), Element::zero(2));
        let g = Element::gen_pq(&w("a(1,0)"), &w("b(1,0)")).unwrap();
        assert_eq!(g.expectation(), g);
        let h = f.add(&g);
        assert_eq!(h.expectation(), g);
        // Φ∘Φ = Φ
        assert_eq!(h.expectation().expectation(), h.expectation());
    }

    #[test]
    fn gauge_characters() {
        let t = GaugePoint::new(vec![
            BigRational::new(1.into(), 4.into()),
            BigRational::new(1.into(), 3.into()),
        ])
        .unwrap();
        let g = GroupVector::new(vec![4, 3]).unwrap();
        let z = t.character(&g);
        // 4·(1/4) + 3·(1/3) = 2 ≡ 0 mod 1
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let trivial = GaugePoint::trivial(2);
        let f = s("a(1,0)");
        let gf = f.gauge_apply(&trivial).unwrap();
        assert_eq!(gf.terms().len(), 1);
        assert!((gf.terms()[0].1 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
