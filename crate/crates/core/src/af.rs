//! Disjointization of a finite family of lag-zero generators into a
//! verified self-adjoint system of matrix units, plus the block structure
//! and inclusion multiplicities between nested systems.
//!
//! The construction refines the boundary into a partition on which every
//! generator acts as a bijection between parts, restricts each generator to
//! the parts of its source, and closes the resulting partial maps under
//! adjoints, products, and the diagonal identities of the parts. Root
//! maximality makes a unit unique given its source and range, so the closure
//! is bounded by the square of the number of parts.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::algebra::Element;
use crate::cylinder::BasicSet;
use crate::error::{Error, Result};
use crate::groupoid::Bisection;
use crate::lambda::Word;
use crate::scalar::Scalar;

const MAX_PARTS: usize = 4096;

/// A verified-by-construction system of matrix units covering a finite set
/// of lag-zero generators.
#[derive(Debug, Clone)]
pub struct MatrixUnitSystem {
    n: usize,
    generators: Vec<(Word, Word)>,
    parts: Vec<BasicSet>,
    units: Vec<Bisection>,
    /// Indices into `units` whose sum reproduces each input generator.
    decompositions: Vec<Vec<usize>>,
    /// Partition of part indices into blocks.
    blocks: Vec<Vec<usize>>,
}

impl MatrixUnitSystem {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[BasicSet] {
        &self.parts
    }

    pub fn units(&self) -> &[Bisection] {
        &self.units
    }

    pub fn generators(&self) -> &[(Word, Word)] {
        &self.generators
    }

    pub fn decompositions(&self) -> &[Vec<usize>] {
        &self.decompositions
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// `χ_{U(p,q)}` of an input generator as an exact sum of units.
    pub fn generator_sum(&self, idx: usize) -> Result<Element> {
        let mut acc = Element::zero(self.n);
        for &u in &self.decompositions[idx] {
            acc = acc.add(&Element::from_term(self.units[u].clone(), Scalar::one()));
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "parts": self.parts.iter().map(BasicSet::to_json).collect::<Vec<_>>(),
            "units": self.units.iter().map(Bisection::to_json).collect::<Vec<_>>(),
            "decompositions": self.decompositions,
            "blocks": self.blocks,
        })
    }
}

/// Follows the disjointization construction: atomize the source and range
/// cylinders, refine until every generator maps parts to parts, restrict,
/// and close self-adjointly.
pub fn disjointize_generators(gens: &[(Word, Word)]) -> Result<MatrixUnitSystem> {
    if gens.is_empty() {
        return Err(Error::NoGenerators);
    }
    let n = gens[0].0.dim();
    for (p, q) in gens {
        if p.length()? != q.length()? {
            return Err(Error::UnequalLengths);
        }
        if p.dim() != n || q.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.dim().max(q.dim()) });
        }
    }

    // Initial partition refining every source and range cylinder, built by
    // splitting incrementally rather than enumerating subsets.
    let mut cylinders: Vec<BasicSet> = Vec::new();
    for (p, q) in gens {
        for w in [p, q] {
            let c = BasicSet::cylinder(w.clone());
            if !cylinders.contains(&c) {
                cylinders.push(c);
            }
        }
    }
    let mut parts: Vec<BasicSet> = vec![BasicSet::full(n)];
    for c in &cylinders {
        let mut next = Vec::with_capacity(parts.len() + 1);
        for part in &parts {
            let inside = part.intersect(c)?;
            if !inside.is_empty() {
                next.push(inside);
            }
            next.extend(part.subtract(c)?.parts().iter().cloned());
        }
        parts = next;
    }

    // Both directions of every generator.
    let mut maps: Vec<(Word, Word)> = Vec::new();
    for (p, q) in gens {
        if !maps.contains(&(p.clone(), q.clone())) {
            maps.push((p.clone(), q.clone()));
        }
        if !maps.contains(&(q.clone(), p.clone())) {
            maps.push((q.clone(), p.clone()));
        }
    }

    // Refine until every map sends parts to parts.
    'refine: loop {
        if parts.len() > MAX_PARTS {
            return Err(Error::RefinementOverflow);
        }
        for (p, q) in &maps {
            for ci in 0..parts.len() {
                let c = &parts[ci];
                let root = c.root().expect("parts are nonempty");
                if !q.is_prefix_of(root)? {
                    continue;
                }
                let image = c.rebase(q)?.translate(p)?;
                for di in 0..parts.len() {
                    let d = &parts[di];
                    let meet = d.intersect(&image)?;
                    if meet.is_empty() || &meet == d {
                        continue;
                    }
                    // Split d by the image.
                    let mut next = Vec::with_capacity(parts.len() + 1);
                    for (k, part) in parts.iter().enumerate() {
                        if k != di {
                            next.push(part.clone());
                        }
                    }
                    next.push(meet);
                    next.extend(d.subtract(&image)?.parts().iter().cloned());
                    parts = next;
                    continue 'refine;
                }
            }
        }
        break;
    }
    parts.sort_by_cached_key(|p| p.sort_key().expect("nonempty part"));

    // Restrict each generator to the parts of its source cylinder.
    let mut units: Vec<Bisection> = Vec::new();
    let mut decompositions: Vec<Vec<usize>> = Vec::new();
    let push_unit = |units: &mut Vec<Bisection>, u: Bisection| -> usize {
        match units.iter().position(|v| v == &u) {
            Some(i) => i,
            None => {
                units.push(u);
                units.len() - 1
            }
        }
    };
    for part in &parts {
        let u = Bisection::diagonal(part)?.expect("parts are nonempty");
        push_unit(&mut units, u);
    }
    for (p, q) in gens {
        let mut dec = Vec::new();
        for part in &parts {
            let root = part.root().expect("nonempty");
            if !q.is_prefix_of(root)? {
                continue;
            }
            let u = Bisection::new(p.clone(), q.clone(), part.rebase(q)?)?
                .expect("restriction of a unit to a nonempty part");
            dec.push(push_unit(&mut units, u));
        }
        decompositions.push(dec);
    }

    // Close under adjoints and products.
    let mut idx = 0;
    while idx < units.len() {
        let adj = units[idx].inverse()?;
        push_unit(&mut units, adj);
        idx += 1;
    }
    loop {
        if units.len() > MAX_PARTS {
            return Err(Error::RefinementOverflow);
        }
        let mut added = false;
        let len = units.len();
        for i in 0..len {
            for j in 0..len {
                if let Some(prod) = units[i].compose(&units[j])? {
                    if !units.contains(&prod) {
                        units.push(prod.inverse()?);
                        units.push(prod);
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }
    units.sort();
    units.dedup();

    // Remap decompositions after the sort.
    let mut decompositions2 = Vec::with_capacity(decompositions.len());
    for (gi, (p, q)) in gens.iter().enumerate() {
        let _ = gi;
        let mut dec = Vec::new();
        for (ui, u) in units.iter().enumerate() {
            if u.p().dim() != n {
                continue;
            }
            // The restriction units of this generator are exactly those with
            // source a part of V(q) and legs extending (p, q) coherently.
            if unit_restricts(u, p, q, &parts)? {
                dec.push(ui);
            }
        }
        // Sanity: their sources partition V(q).
        let mut covered = crate::cylinder::SetUnion::from_disjoint(vec![BasicSet::cylinder(
            q.clone(),
        )]);
        for &ui in &dec {
            covered = covered.subtract_basic(&units[ui].source_set()?)?;
        }
        if !covered.is_empty() {
            return Err(Error::ExpressionFailure);
        }
        decompositions2.push(dec);
    }

    // Blocks: connected components of parts under the units.
    let part_index = |s: &BasicSet, parts: &[BasicSet]| parts.iter().position(|p| p == s);
    let mut parent: Vec<usize> = (0..parts.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for u in &units {
        let (Some(si), Some(ri)) = (
            part_index(&u.source_set()?, &parts),
            part_index(&u.range_set()?, &parts),
        ) else {
            return Err(Error::UnverifiedSystem);
        };
        let (a, b) = (find(&mut parent, si), find(&mut parent, ri));
        if a != b {
            parent[a] = b;
        }
    }
    let mut blocks_map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..parts.len() {
        let r = find(&mut parent, i);
        blocks_map.entry(r).or_default().push(i);
    }
    let blocks: Vec<Vec<usize>> = blocks_map.into_values().collect();

    Ok(MatrixUnitSystem {
        n,
        generators: gens.to_vec(),
        parts,
        units,
        decompositions: decompositions2,
        blocks,
    })
}

// Does `u` arise by restricting U(p,q) to a source part?
fn unit_restricts(u: &Bisection, p: &Word, q: &Word, parts: &[BasicSet]) -> Result<bool> {
    let src = u.source_set()?;
    if !parts.contains(&src) {
        return Ok(false);
    }
    let Some(root) = src.root() else { return Ok(false) };
    if !q.is_prefix_of(root)? {
        return Ok(false);
    }
    let expected = Bisection::new(p.clone(), q.clone(), src.rebase(q)?)?;
    Ok(expected.as_ref() == Some(u))
}

/// One failed law with a human-readable description.
#[derive(Debug, Clone)]
pub struct Violation {
    pub what: String,
}

/// Result of checking the matrix-unit laws exactly.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checked_pairs: usize,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, with exact products: grade zero, pairwise disjointness, adjoint
/// and diagonal closure, and the composition law
/// `e·f = δ_{source(e), range(f)} · (unit from range(e) to source(f))`.
pub fn verify_matrix_units(sys: &MatrixUnitSystem) -> Result<VerifyReport> {
    let mut violations = Vec::new();
    let units = sys.units();
    for u in units {
        if !u.lag().is_zero() {
            violations.push(Violation { what: format!("unit {u} has nonzero lag") });
        }
        let adj = u.inverse()?;
        if !units.contains(&adj) {
            violations.push(Violation { what: format!("adjoint of {u} missing") });
        }
    }
    for part in sys.parts() {
        let d = Bisection::diagonal(part)?.expect("nonempty part");
        if !units.contains(&d) {
            violations.push(Violation { what: format!("diagonal unit over {part} missing") });
        }
    }
    let mut checked = 0;
    for (i, e) in units.iter().enumerate() {
        for (j, f) in units.iter().enumerate() {
            checked += 1;
            if i != j && e.intersect(f)?.is_some() {
                violations.push(Violation { what: format!("units {e} and {f} overlap") });
            }
            let match_expected = e.source_set()? == f.range_set()?;
            match e.compose(f)? {
                None => {
                    if match_expected {
                        violations.push(Violation {
                            what: format!("{e}·{f} vanished despite matching supports"),
                        });
                    }
                }
                Some(prod) => {
                    if !match_expected {
                        violations.push(Violation {
                            what: format!("{e}·{f} nonzero with mismatched supports"),
                        });
                    } else if !units.contains(&prod) {
                        violations.push(Violation {
                            what: format!("{e}·{f} = {prod} escapes the system"),
                        });
                    } else if prod.range_set()? != e.range_set()?
                        || prod.source_set()? != f.source_set()?
                    {
                        violations.push(Violation {
                            what: format!("{e}·{f} connects the wrong parts"),
                        });
                    }
                }
            }
        }
    }
    Ok(VerifyReport { checked_pairs: checked, violations })
}

/// Block dimensions (numbers of diagonal units per block); checks the
/// counting identity `Σ dᵢ² = #units` and that the system verifies.
pub fn finite_dim_structure(sys: &MatrixUnitSystem) -> Result<Vec<usize>> {
    let report = verify_matrix_units(sys)?;
    if !report.ok() {
        return Err(Error::UnverifiedSystem);
    }
    let dims: Vec<usize> = sys.blocks().iter().map(|b| b.len()).collect();
    let total: usize = dims.iter().map(|d| d * d).sum();
    if total != sys.units().len() {
        return Err(Error::UnverifiedSystem);
    }
    Ok(dims)
}

/// The inclusion data of a refinement step between the systems of a nested
/// pair of generator sets.
#[derive(Debug, Clone)]
pub struct BratteliStep {
    pub small_dims: Vec<usize>,
    pub large_dims: Vec<usize>,
    /// `multiplicity[i][j]`: how many large-block-`j` parts sit inside one
    /// part of small block `i`.
    pub multiplicity: Vec<Vec<usize>>,
}

impl BratteliStep {
    pub fn to_json(&self) -> Value {
        json!({
            "small_dims": self.small_dims,
            "large_dims": self.large_dims,
            "multiplicity": self.multiplicity,
        })
    }

    /// Graphviz rendering of the step.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph bratteli {\n  rankdir=TB;\n");
        for (i, d) in self.small_dims.iter().enumerate() {
            out.push_str(&format!("  s{i} [label=\"M{d}\"];\n"));
        }
        for (j, d) in self.large_dims.iter().enumerate() {
            out.push_str(&format!("  l{j} [label=\"M{d}\"];\n"));
        }
        for (i, row) in self.multiplicity.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                if m > 0 {
                    out.push_str(&format!("  s{i} -> l{j} [label=\"{m}\"];\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Expresses the system of `gens_small` inside the system of the superset
/// `gens_large`: every small unit is an exact sum of large units, and each
/// small block embeds into the large blocks with well-defined
/// multiplicities.
pub fn bratteli_step(gens_small: &[(Word, Word)], gens_large: &[(Word, Word)]) -> Result<BratteliStep> {
    for g in gens_small {
        if !gens_large.contains(g) {
            return Err(Error::NotNested);
        }
    }
    let small = disjointize_generators(gens_small)?;
    let large = disjointize_generators(gens_large)?;

    // Every small unit must be an exact sum of the large units beneath it.
    for e in small.units() {
        let mut sum = Element::zero(small.dim());
        for u in large.units() {
            if u.subset_of(e)? {
                sum = sum.add(&Element::from_term(u.clone(), Scalar::one()));
            }
        }
        let diff = Element::from_term(e.clone(), Scalar::one()).sub(&sum);
        if !diff.is_zero()? {
            return Err(Error::ExpressionFailure);
        }
    }

    // Large parts refine small parts: locate each large part's host.
    let mut host = Vec::with_capacity(large.parts().len());
    for lp in large.parts() {
        let mut found = None;
        for (si, sp) in small.parts().iter().enumerate() {
            if lp.subtract(sp)?.is_empty() {
                found = Some(si);
                break;
            }
        }
        host.push(found.ok_or(Error::ExpressionFailure)?);
    }
    let large_block_of = |part: usize| -> usize {
        large
            .blocks()
            .iter()
            .position(|b| b.contains(&part))
            .expect("every part belongs to a block")
    };

    let mut multiplicity = vec![vec![0usize; large.blocks().len()]; small.blocks().len()];
    for (bi, block) in small.blocks().iter().enumerate() {
        let mut reference: Option<Vec<usize>> = None;
        for &sp in block {
            let mut row = vec![0usize; large.blocks().len()];
            for (lp, &h) in host.iter().enumerate() {
                if h == sp {
                    row[large_block_of(lp)] += 1;
                }
            }
            match &reference {
                None => reference = Some(row),
                Some(r) => {
                    if r != &row {
                        // Different parts of one block must split identically.
                        return Err(Error::ExpressionFailure);
                    }
                }
            }
        }
        multiplicity[bi] = reference.expect("blocks are nonempty");
    }

    Ok(BratteliStep {
        small_dims: small.blocks().iter().map(|b| b.len()).collect(),
        large_dims: large.blocks().iter().map(|b| b.len()).collect(),
        multiplicity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    #[test]
    fn unit_pair_split_system() {
        // generators {(e', e'')}: a single 2x2 block
        let sys = disjointize_generators(&[(w("a(0,1)"), w("b(0,1)"))]).unwrap();
        assert_eq!(sys.parts().len(), 2);
        assert_eq!(sys.units().len(), 4);
        let report = verify_matrix_units(&sys).unwrap();
        assert!(report.ok(), "{:?}", report.violations);
        assert_eq!(finite_dim_structure(&sys).unwrap(), vec![2]);
        // the off-diagonal unit with full sets is present
        let off = Bisection::unit_pair(w("a(0,1)"), w("b(0,1)")).unwrap();
        assert!(sys.units().contains(&off));
    }

    #[test]
    fn single_projection_system() {
        let sys = disjointize_generators(&[(w("a(1,0)"), w("a(1,0)"))]).unwrap();
        let report = verify_matrix_units(&sys).unwrap();
        assert!(report.ok(), "{:?}", report.violations);
        // projection + complement identity: blocks [1, 1]
        let mut dims = finite_dim_structure(&sys).unwrap();
        dims.sort();
        assert_eq!(dims, vec![1, 1]);
    }

    #[test]
    fn decomposition_reproduces_generators() {
        let gens = vec![
            (w("a(0,1)"), w("b(0,1)")),
            (w("a(0,2)"), w("a(0,1)b(0,1)")),
        ];
        let sys = disjointize_generators(&gens).unwrap();
        let report = verify_matrix_units(&sys).unwrap();
        assert!(report.ok(), "{:?}", report.violations);
        for (i, (p, q)) in gens.iter().enumerate() {
            let whole = Element::gen_pq(p, q).unwrap();
            let sum = sys.generator_sum(i).unwrap();
            assert!(whole.sub(&sum).is_zero().unwrap(), "generator {i} decomposition");
        }
        let dims = finite_dim_structure(&sys).unwrap();
        let total: usize = dims.iter().map(|d| d * d).sum();
        assert_eq!(total, sys.units().len());
    }

    #[test]
    fn corrupted_system_is_reported() {
        let mut sys = disjointize_generators(&[(w("a(0,1)"), w("b(0,1)"))]).unwrap();
        // Break a unit: shrink its set so products stop matching.
        let broken = Bisection::new(
            w("a(0,1)"),
            w("b(0,1)"),
            BasicSet::cylinder(w("a(0,1)")),
        )
        .unwrap()
        .unwrap();
        sys.units[1] = broken;
        let report = verify_matrix_units(&sys).unwrap();
        assert!(!report.ok());
    }

    #[test]
    fn bratteli_identity_and_refinement() {
        let gens = vec![(w("a(1,0)"), w("a(1,0)"))];
        let step = bratteli_step(&gens, &gens).unwrap();
        // identity inclusion
        for (i, row) in step.multiplicity.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                assert_eq!(m, usize::from(i == j), "row {i} col {j}");
            }
        }
        // refine the projection by a deeper split
        let large = vec![
            (w("a(1,0)"), w("a(1,0)")),
            (w("a(1,0)a(0,1)"), w("a(1,0)b(0,1)")),
        ];
        let step2 = bratteli_step(&gens, &large).unwrap();
        assert_eq!(step2.small_dims.len(), 2);
        for row in &step2.multiplicity {
            assert!(row.iter().any(|&m| m > 0));
        }
        let dot = step2.to_dot();
        assert!(dot.contains("digraph"));
        // non-nested input is rejected
        assert!(bratteli_step(&large, &gens).is_err());
    }
}
