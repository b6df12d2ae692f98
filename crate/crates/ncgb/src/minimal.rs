//! Rewriting a presentation onto its degree-one generators and computing
//! the degrees of a minimal generating set of the defining ideal by exact
//! linear algebra.

use std::collections::BTreeMap;

use num::BigInt;
use thiserror::Error;

use crate::coeff::FieldSpec;
use crate::freealg::{Polynomial, VariableTable, Word};
use crate::hilbert::{count_irreducible, series_free};
use crate::ore::{generated_in_degree_one, AlgebraPresentation, EliminationStep, GenerationOutcome};
use crate::rewrite::{normal_form, Provenance, RewriteSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinimalError {
    #[error("presentation is not generated in degree one (stuck: {stuck:?})")]
    NotGeneratedInDegreeOne { stuck: Vec<usize> },
    #[error("elimination depends on the uncertified coefficient `{coeff}`")]
    UndeterminedElimination { coeff: String },
    #[error("basis is complete to degree {complete_to}, needed {needed}")]
    IncompleteBasis { complete_to: u32, needed: u32 },
    #[error("minimal generator counts are not computed over parametric coefficients")]
    ParametricModeUnsupported,
    #[error("coefficient `{coeff}` is not certified invertible")]
    NonInvertibleParametric { coeff: String },
}

/// Ascending multiset of minimal-generator degrees, e.g. `[2, 2, 3]`.
pub type RelationType = Vec<u32>;

/// An explicit elimination order: (relation index, variable rank) pairs,
/// with an optional new variable order for the derived presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationChoice {
    pub steps: Vec<(usize, usize)>,
    /// Ranks of the surviving degree-one variables in their new order;
    /// default is the restriction of the original order.
    pub reorder: Option<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct DerivedPresentation {
    pub presentation: AlgebraPresentation,
    /// The eliminations that were applied, with final expressions over the
    /// surviving variables (in original ranks).
    pub steps: Vec<EliminationStep>,
    /// Map from old rank to new rank for the surviving variables.
    pub rank_map: BTreeMap<usize, usize>,
}

/// Rewrite the presentation onto its degree-one variables: eliminated
/// variables are substituted everywhere, empty relations dropped, and the
/// surviving relations re-expressed over the restricted table.
pub fn to_degree_one(
    p: &AlgebraPresentation,
    choice: Option<&EliminationChoice>,
) -> Result<DerivedPresentation, MinimalError> {
    let steps: Vec<EliminationStep> = match choice {
        None => match generated_in_degree_one(p) {
            GenerationOutcome::Yes(steps) => steps,
            GenerationOutcome::No { stuck } => {
                return Err(MinimalError::NotGeneratedInDegreeOne { stuck })
            }
            GenerationOutcome::Undetermined { blocked_coeff } => {
                return Err(MinimalError::UndeterminedElimination { coeff: blocked_coeff })
            }
        },
        Some(choice) => apply_choice(p, choice)?,
    };

    let table = &p.table;
    let consumed: Vec<usize> = steps.iter().map(|s| s.relation).collect();
    let keep_ranks: Vec<usize> = match choice.and_then(|c| c.reorder.clone()) {
        Some(order) => order,
        None => (0..table.len()).filter(|&r| table.degree(r) == 1).collect(),
    };
    let new_table = table.restrict(&keep_ranks);
    let rank_map: BTreeMap<usize, usize> =
        keep_ranks.iter().enumerate().map(|(new, &old)| (old, new)).collect();

    let mut relations = Vec::new();
    for (idx, rel) in p.relations.iter().enumerate() {
        if consumed.contains(&idx) {
            continue;
        }
        let mut cur = rel.clone();
        for s in &steps {
            cur = cur
                .substitute(s.var, &s.expr, table)
                .expect("elimination expressions are homogeneous");
        }
        if cur.is_zero() {
            continue;
        }
        relations.push(remap(&cur, &rank_map, &new_table));
    }

    let presentation = AlgebraPresentation::new(
        format!("{} (degree-one generators)", p.name),
        p.field.clone(),
        new_table,
        relations,
    )
    .expect("substitution preserves homogeneity");
    Ok(DerivedPresentation { presentation, steps, rank_map })
}

fn apply_choice(
    p: &AlgebraPresentation,
    choice: &EliminationChoice,
) -> Result<Vec<EliminationStep>, MinimalError> {
    let table = &p.table;
    let spec = &p.field;
    let mut steps: Vec<EliminationStep> = Vec::new();
    for &(idx, var) in &choice.steps {
        let mut cur = p.relations[idx].clone();
        for s in &steps {
            cur = cur
                .substitute(s.var, &s.expr, table)
                .expect("elimination expressions are homogeneous");
        }
        let standalone = Word::from_ranks(&[var], table);
        let c = cur
            .coeff(&standalone)
            .ok_or(MinimalError::NotGeneratedInDegreeOne { stuck: vec![var] })?
            .clone();
        if !c.is_invertible(spec) {
            return Err(MinimalError::NonInvertibleParametric { coeff: c.display(spec) });
        }
        let mut rest = cur.clone();
        rest.add_term(standalone, c.neg());
        let inv = c.inverse(spec).expect("certified invertible");
        steps.push(EliminationStep { relation: idx, var, expr: rest.scale(&inv.neg()) });
    }
    for k in (0..steps.len()).rev() {
        let mut expr = steps[k].expr.clone();
        for later in steps[k + 1..].to_vec() {
            expr = expr
                .substitute(later.var, &later.expr, table)
                .expect("elimination expressions are homogeneous");
        }
        steps[k].expr = expr;
    }
    Ok(steps)
}

fn remap(p: &Polynomial, rank_map: &BTreeMap<usize, usize>, new_table: &VariableTable) -> Polynomial {
    let mut out = Polynomial::zero();
    for (w, c) in p.terms() {
        let ranks: Vec<usize> = w
            .letters()
            .map(|l| *rank_map.get(&l).expect("eliminated variable survived substitution"))
            .collect();
        out.add_term(Word::from_ranks(&ranks, new_table), c.clone());
    }
    out
}

/// Dimension of the degree-`d` piece of the defining ideal, computed by
/// word counting: all words minus the irreducible ones.
pub fn ideal_dimension(gb: &RewriteSystem, degrees: &[u32], d: u32) -> Result<BigInt, MinimalError> {
    let complete_to = gb.complete_to.unwrap_or(0);
    if complete_to < d {
        return Err(MinimalError::IncompleteBasis { complete_to, needed: d });
    }
    let free = series_free(degrees, d);
    let irr = count_irreducible(&gb.leads(), degrees, d);
    Ok(free.coeff(d) - irr.coeff(d))
}

/// Sparse triangular eliminator over an exact field: rows are polynomials,
/// pivots are leading words. Inserting a row either grows the rank or
/// reduces the row to zero.
pub struct Eliminator<'a> {
    spec: &'a FieldSpec,
    pivots: BTreeMap<Word, Polynomial>,
}

impl<'a> Eliminator<'a> {
    pub fn new(spec: &'a FieldSpec) -> Self {
        Eliminator { spec, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce against the stored pivots by leading-word cancellation and
    /// insert the (monicized) remainder if nonzero. Returns whether the
    /// rank grew.
    pub fn insert(&mut self, p: Polynomial) -> bool {
        let mut p = p;
        loop {
            let Ok((w, c)) = p.leading_term() else {
                return false; // reduced to zero: dependent row
            };
            match self.pivots.get(w) {
                Some(b) => {
                    let c = c.clone();
                    p = p.sub(&b.scale(&c));
                }
                None => {
                    let lc = c.clone();
                    let inv = lc.inverse(self.spec).expect("field coefficient");
                    let monic = p.scale(&inv);
                    self.pivots.insert(w.clone(), monic);
                    return true;
                }
            }
        }
    }
}

/// Minimal number of ideal generators per degree, by the rank formula for
/// `dim (I / (F+ I + I F+))_d`. The degree-d piece of `F+ I + I F+` equals
/// `F_1 I_{d-1} + I_{d-1} F_1` for algebras generated in degree one, so its
/// spanning rows are generator multiples of a triangular basis of
/// `I_{d-1}`; the basis elements of degree exactly `d` are then inserted on
/// top and the rank growth counted. Degrees at which the completed basis
/// has no element contribute nothing: everything there reduces via lower
/// degrees.
pub fn minimal_generator_counts(
    gb: &RewriteSystem,
    table: &VariableTable,
    spec: &FieldSpec,
    max_degree: u32,
) -> Result<RelationType, MinimalError> {
    if matches!(spec, FieldSpec::Parametric(_)) {
        return Err(MinimalError::ParametricModeUnsupported);
    }
    let complete_to = gb.complete_to.unwrap_or(0);
    if complete_to < max_degree {
        return Err(MinimalError::IncompleteBasis { complete_to, needed: max_degree });
    }
    assert!(
        table.degrees().iter().all(|&d| d == 1),
        "minimal counts run on degree-one presentations"
    );
    let n = table.len();
    let mut rel_type = Vec::new();
    for d in 1..=max_degree {
        let this_degree: Vec<&crate::rewrite::RewriteRule> = gb.rules_of_degree(d).collect();
        if this_degree.is_empty() {
            continue;
        }
        let mut elim = Eliminator::new(spec);
        // triangular basis of I_{d-1}: w - NF(w) over the reducible words w
        let ideal_below = reducible_basis(gb, table, spec, d - 1);
        for b in &ideal_below {
            for rank in 0..n {
                let x = Word::from_ranks(&[rank], table);
                elim.insert(b.sandwich(&x, &Word::one()));
                elim.insert(b.sandwich(&Word::one(), &x));
            }
        }
        let mut count = 0u32;
        for rule in this_degree {
            if elim.insert(rule.as_polynomial(spec)) {
                count += 1;
            }
        }
        for _ in 0..count {
            rel_type.push(d);
        }
    }
    Ok(rel_type)
}

/// `w - NF(w)` for every reducible word `w` of the given degree: a
/// triangular spanning set of the degree-`d` piece of the ideal.
fn reducible_basis(
    gb: &RewriteSystem,
    table: &VariableTable,
    spec: &FieldSpec,
    d: u32,
) -> Vec<Polynomial> {
    let mut out = Vec::new();
    for w in words_of_degree(d, table) {
        if gb.is_irreducible(&w) {
            continue;
        }
        let p = Polynomial::monomial(w, spec.one());
        let nf = normal_form(&p, gb, table);
        out.push(p.sub(&nf));
    }
    out
}

/// All words of the given weighted degree, ascending.
pub fn words_of_degree(d: u32, table: &VariableTable) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack = vec![Word::one()];
    while let Some(w) = stack.pop() {
        if w.degree() == d {
            out.push(w);
            continue;
        }
        for rank in 0..table.len() {
            if w.degree() + table.degree(rank) <= d {
                stack.push(w.concat(&Word::from_ranks(&[rank], table)));
            }
        }
    }
    out.sort();
    out
}

/// Which ambiguity each basis element of degree `d` came from; input
/// relations are marked `Original`. Advisory: attribution depends on the
/// completion strategy, the counts do not.
pub fn overlap_attribution(gb: &RewriteSystem, d: u32) -> Vec<(Word, Provenance)> {
    gb.rules_of_degree(d)
        .map(|r| (r.lead.clone(), r.provenance.clone()))
        .collect()
}

/// Pretty form `[2,2,3]` used by reports.
pub fn relation_type_string(t: &RelationType) -> String {
    let inner: Vec<String> = t.iter().map(|d| d.to_string()).collect();
    format!("[{}]", inner.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::complete;

    /// Commutative polynomial ring on n degree-one variables.
    fn commutative(n: usize) -> AlgebraPresentation {
        let table = VariableTable::of_degrees(&vec![1; n]);
        let k = FieldSpec::Rationals;
        let mut rels = Vec::new();
        for j in 0..n {
            for i in 0..j {
                let lhs = Polynomial::monomial(Word::from_ranks(&[j, i], &table), k.one());
                let rhs = Polynomial::monomial(Word::from_ranks(&[i, j], &table), k.one());
                rels.push(lhs.sub(&rhs));
            }
        }
        AlgebraPresentation::new("commutative", k, table, rels).unwrap()
    }

    #[test]
    fn commutative_relation_type() {
        let p = commutative(3);
        let sys = p.rewrite_system().unwrap();
        let (gb, _) = complete(&sys, 5, &p.table, &p.field).unwrap();
        let t = minimal_generator_counts(&gb, &p.table, &p.field, 5).unwrap();
        assert_eq!(t, vec![2, 2, 2]);
    }

    #[test]
    fn free_algebra_has_empty_ideal() {
        let mut gb = RewriteSystem::new(vec![]);
        gb.complete_to = Some(6);
        for d in 1..=6 {
            assert_eq!(ideal_dimension(&gb, &[1, 1], d).unwrap(), BigInt::from(0));
        }
        assert!(matches!(
            ideal_dimension(&gb, &[1, 1], 7),
            Err(MinimalError::IncompleteBasis { .. })
        ));
    }

    #[test]
    fn already_degree_one_is_unchanged() {
        let p = commutative(3);
        let derived = to_degree_one(&p, None).unwrap();
        assert!(derived.steps.is_empty());
        assert_eq!(derived.presentation.table, p.table);
        assert_eq!(derived.presentation.relations, p.relations);
    }

    #[test]
    fn eliminator_counts_rank() {
        let table = VariableTable::of_degrees(&[1, 1]);
        let k = FieldSpec::Rationals;
        let w = |ranks: &[usize]| Word::from_ranks(ranks, &table);
        let mut e = Eliminator::new(&k);
        let p1 = Polynomial::monomial(w(&[1, 0]), k.one())
            .sub(&Polynomial::monomial(w(&[0, 1]), k.one()));
        let p2 = Polynomial::monomial(w(&[1, 0]), k.from_integer(2))
            .sub(&Polynomial::monomial(w(&[0, 1]), k.from_integer(2)));
        let p3 = Polynomial::monomial(w(&[1, 0]), k.one())
            .add(&Polynomial::monomial(w(&[0, 1]), k.one()));
        assert!(e.insert(p1));
        assert!(!e.insert(p2)); // scalar multiple
        assert!(e.insert(p3));
        assert_eq!(e.rank(), 2);
    }
}
