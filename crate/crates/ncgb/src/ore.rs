//! Validation of graded iterated Ore-extension and enveloping-algebra
//! presentations: extraction of the skew maps sigma and delta per adjoined
//! variable, injectivity certificates for sigma, elimination onto degree-one
//! generators, and degree-type enumeration.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::coeff::{FieldElement, FieldSpec};
use crate::freealg::{Polynomial, VariableTable, Word};
use crate::linalg::rank_with_certificate;
use crate::rewrite::{
    self, diamond_check, make_rule, normal_form, RewriteError, RewriteSystem,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OreError {
    #[error("relation {relation} is not homogeneous")]
    Inhomogeneous { relation: usize },
    #[error("relation {relation} is zero")]
    ZeroRelation { relation: usize },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// A finitely presented graded algebra: coefficient field, ordered weighted
/// variables, and homogeneous relations stored as lead-minus-tail
/// polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraPresentation {
    pub name: String,
    pub field: FieldSpec,
    pub table: VariableTable,
    pub relations: Vec<Polynomial>,
}

impl AlgebraPresentation {
    pub fn new(
        name: impl Into<String>,
        field: FieldSpec,
        table: VariableTable,
        relations: Vec<Polynomial>,
    ) -> Result<Self, OreError> {
        for (i, r) in relations.iter().enumerate() {
            if r.is_zero() {
                return Err(OreError::ZeroRelation { relation: i });
            }
            if r.homogeneous_degree().is_none() {
                return Err(OreError::Inhomogeneous { relation: i });
            }
        }
        Ok(AlgebraPresentation { name: name.into(), field, table, relations })
    }

    pub fn rewrite_system(&self) -> Result<RewriteSystem, RewriteError> {
        RewriteSystem::from_relations(&self.relations, &self.field)
    }

    /// Sorted multiset of the variable degrees.
    pub fn degree_type(&self) -> Vec<u32> {
        let mut d = self.table.degrees();
        d.sort_unstable();
        d
    }
}

/// The skew endomorphism and derivation read off the relations for one
/// adjoined variable: `x_j x_i = sigma_j(x_i) x_j + delta_j(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaDeltaData {
    pub j: usize,
    pub sigma: BTreeMap<usize, Polynomial>,
    pub delta: BTreeMap<usize, Polynomial>,
}

impl SigmaDeltaData {
    /// Rebuild the relation polynomial `x_j x_i - sigma_j(x_i) x_j -
    /// delta_j(x_i)` for a pair; used by the round-trip tests.
    pub fn rebuild_relation(
        &self,
        i: usize,
        table: &VariableTable,
        spec: &FieldSpec,
    ) -> Polynomial {
        let lead = Polynomial::monomial(Word::from_ranks(&[self.j, i], table), spec.one());
        let xj = Word::from_ranks(&[self.j], table);
        let sigma_part = self.sigma[&i].sandwich(&Word::one(), &xj);
        lead.sub(&sigma_part).sub(&self.delta[&i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OreFailure {
    /// No relation with leading word `x_j x_i`.
    MissingPair { j: usize, i: usize },
    /// Two relations share the leading word `x_j x_i`.
    DuplicatePair { j: usize, i: usize },
    /// Leading word is not of the form `x_j x_i` with `j > i`.
    BadLeadShape { relation: usize, lead: Word },
    /// A tail word mentions a variable above `x_j`, or `x_j` more than
    /// once, or `x_j` away from the final position.
    BadTailShape { j: usize, i: usize, word: Word },
    /// The leading coefficient cannot be normalized to 1.
    NotMonicizable { relation: usize, coeff: String },
    /// An ambiguity with this superposition word does not reduce to zero.
    UnresolvedAmbiguity { word: Word, value: Polynomial },
    /// Enveloping check: sigma is not the identity on this pair.
    NonIdentitySigma { j: usize, i: usize },
    /// Enveloping check: delta is not a linear combination of generators.
    NonlinearDelta { j: usize, i: usize, word: Word },
}

#[derive(Debug, Clone)]
pub struct OreReport {
    pub ok: bool,
    pub sigma_delta: Vec<SigmaDeltaData>,
    pub failures: Vec<OreFailure>,
    pub ambiguities_checked: usize,
}

/// Check that a presentation has the shape of a graded iterated Ore
/// extension: one relation per pair `j > i` with leading word `x_j x_i`,
/// tails confined to smaller variables with `x_j` appearing exactly once at
/// the end of the sigma part, and all ambiguities resolvable.
pub fn validate_ore(p: &AlgebraPresentation) -> OreReport {
    let mut failures = Vec::new();
    let n = p.table.len();
    let mut by_pair: BTreeMap<(usize, usize), usize> = BTreeMap::new();

    let mut rules = Vec::new();
    for (idx, rel) in p.relations.iter().enumerate() {
        let rule = match make_rule(rel, &p.field) {
            Ok(r) => r,
            Err(RewriteError::NonInvertibleParametric { coeff }) => {
                failures.push(OreFailure::NotMonicizable { relation: idx, coeff });
                continue;
            }
            Err(_) => unreachable!("presentation invariants"),
        };
        let lead = &rule.lead;
        if lead.len() != 2 || lead.letter_at(0) <= lead.letter_at(1) {
            failures.push(OreFailure::BadLeadShape { relation: idx, lead: lead.clone() });
            continue;
        }
        let (j, i) = (lead.letter_at(0), lead.letter_at(1));
        if by_pair.insert((j, i), idx).is_some() {
            failures.push(OreFailure::DuplicatePair { j, i });
            continue;
        }
        rules.push(((j, i), rule));
    }
    for j in 0..n {
        for i in 0..j {
            if !by_pair.contains_key(&(j, i)) {
                failures.push(OreFailure::MissingPair { j, i });
            }
        }
    }

    let mut sigma_delta: Vec<SigmaDeltaData> = Vec::new();
    for j in 0..n {
        let mut data = SigmaDeltaData { j, sigma: BTreeMap::new(), delta: BTreeMap::new() };
        for i in 0..j {
            let Some(rule) = rules.iter().find(|((rj, ri), _)| (*rj, *ri) == (j, i)) else {
                continue;
            };
            match split_sigma_delta(&rule.1.tail, j, &p.table) {
                Ok((sigma, delta)) => {
                    data.sigma.insert(i, sigma);
                    data.delta.insert(i, delta);
                }
                Err(word) => failures.push(OreFailure::BadTailShape { j, i, word }),
            }
        }
        if j > 0 {
            sigma_delta.push(data);
        }
    }

    let mut ambiguities_checked = 0;
    if failures.is_empty() {
        let sys = RewriteSystem::new(rules.into_iter().map(|(_, r)| r).collect());
        let ambs = rewrite::ambiguities(&sys, &p.table);
        let bound = ambs
            .iter()
            .map(|a| a.superposition().degree())
            .max()
            .unwrap_or(0);
        let report = diamond_check(&sys, bound, &p.table);
        ambiguities_checked = report.checked;
        for (a, value) in report.unresolved {
            failures.push(OreFailure::UnresolvedAmbiguity { word: a.superposition(), value });
        }
    }

    OreReport { ok: failures.is_empty(), sigma_delta, failures, ambiguities_checked }
}

/// Split a tail into the sigma part (words ending in exactly one `x_j`,
/// with that letter stripped) and the delta part (words free of `x_j`).
/// Errors with the offending word when a letter above `x_j` appears, `x_j`
/// repeats, or `x_j` sits away from the end.
fn split_sigma_delta(
    tail: &Polynomial,
    j: usize,
    table: &VariableTable,
) -> Result<(Polynomial, Polynomial), Word> {
    let mut sigma = Polynomial::zero();
    let mut delta = Polynomial::zero();
    for (w, c) in tail.terms() {
        if w.letters().any(|l| l > j) {
            return Err(w.clone());
        }
        match w.count_letter(j) {
            0 => delta.add_term(w.clone(), c.clone()),
            1 if w.len() >= 1 && w.letter_at(w.len() - 1) == j => {
                sigma.add_term(w.slice(0, w.len() - 1, table), c.clone());
            }
            _ => return Err(w.clone()),
        }
    }
    Ok((sigma, delta))
}

#[derive(Debug, Clone, PartialEq)]
pub enum SigmaVerdict {
    /// Sigma is surjective on every generator-degree graded piece of the
    /// prefix algebra, hence bijective, hence injective.
    Certified,
    /// A nonzero element of a graded piece maps to zero.
    NotInjective { witness: Polynomial },
    /// The rank depends on parameter values the nonzero set does not
    /// certify; the offending pivot minor is reported.
    Undetermined { reason: String },
}

/// Certify injectivity of `sigma_j` on the prefix algebra generated by the
/// variables below `x_j`. For each degree occurring among those generators,
/// the endomorphism matrix on the graded piece (basis: irreducible words)
/// is built and its rank computed exactly; full rank everywhere certifies
/// surjectivity on a generating set and therefore bijectivity.
pub fn check_sigma_injective(
    p: &AlgebraPresentation,
    j: usize,
    max_degree: u32,
) -> SigmaVerdict {
    if j == 0 {
        return SigmaVerdict::Certified;
    }
    // collect sigma images and prefix rules
    let mut sigma: BTreeMap<usize, Polynomial> = BTreeMap::new();
    let mut prefix_rules = Vec::new();
    for rel in &p.relations {
        let rule = match make_rule(rel, &p.field) {
            Ok(r) => r,
            Err(e) => return SigmaVerdict::Undetermined { reason: e.to_string() },
        };
        let lead = &rule.lead;
        if lead.len() != 2 {
            return SigmaVerdict::Undetermined { reason: "non-pair leading word".into() };
        }
        let (rj, ri) = (lead.letter_at(0), lead.letter_at(1));
        if rj == j {
            match split_sigma_delta(&rule.tail, j, &p.table) {
                Ok((s, _)) => {
                    sigma.insert(ri, s);
                }
                Err(w) => {
                    return SigmaVerdict::Undetermined {
                        reason: format!("bad tail word {}", w.display(&p.table)),
                    }
                }
            }
        } else if rj < j {
            prefix_rules.push(rule);
        }
    }
    for i in 0..j {
        if !sigma.contains_key(&i) {
            return SigmaVerdict::Undetermined { reason: format!("missing pair ({j}, {i})") };
        }
    }
    let prefix = RewriteSystem::new(prefix_rules);

    let gen_degrees: BTreeSet<u32> = (0..j).map(|i| p.table.degree(i)).collect();
    for d in gen_degrees {
        if d > max_degree {
            return SigmaVerdict::Undetermined {
                reason: format!("degree {d} beyond the requested bound {max_degree}"),
            };
        }
        // basis of the degree-d piece: irreducible words over ranks < j
        let mut basis: Vec<Word> = irreducible_words(d, j, &prefix, &p.table);
        basis.sort();
        basis.reverse();
        let index: BTreeMap<&Word, usize> =
            basis.iter().enumerate().map(|(k, w)| (w, k)).collect();
        let mut rows = Vec::with_capacity(basis.len());
        for w in &basis {
            let mut image = Polynomial::monomial(Word::one(), p.field.one());
            for l in w.letters() {
                image = image.mul(&sigma[&l]);
            }
            let image = normal_form(&image, &prefix, &p.table);
            let mut row = vec![p.field.zero(); basis.len()];
            for (iw, c) in image.terms() {
                let k = index
                    .get(iw)
                    .expect("normal form stays in the irreducible basis");
                row[*k] = c.clone();
            }
            rows.push(row);
        }
        let out = rank_with_certificate(rows, &p.field);
        if out.rank < basis.len() {
            let dep = out.dependency.expect("rank-deficient rows have a dependency");
            let mut witness = Polynomial::zero();
            for (k, c) in dep.iter().enumerate() {
                if !c.is_zero() {
                    witness.add_term(basis[k].clone(), c.clone());
                }
            }
            return SigmaVerdict::NotInjective { witness };
        }
        if !out.certified {
            let minor = out
                .pivot_minor
                .map(|m| m.display(&p.field))
                .unwrap_or_else(|| "1".into());
            return SigmaVerdict::Undetermined {
                reason: format!("pivot minor `{minor}` is not certified nonzero"),
            };
        }
    }
    SigmaVerdict::Certified
}

/// All irreducible words of the given degree over variables of rank < j.
fn irreducible_words(
    degree: u32,
    j: usize,
    sys: &RewriteSystem,
    table: &VariableTable,
) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack = vec![Word::one()];
    while let Some(w) = stack.pop() {
        if w.degree() == degree {
            out.push(w);
            continue;
        }
        for rank in 0..j {
            if w.degree() + table.degree(rank) > degree {
                continue;
            }
            let next = w.concat(&Word::from_ranks(&[rank], table));
            // only the new suffix can introduce a forbidden subword
            if sys.is_irreducible(&next) {
                stack.push(next);
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct EnvReport {
    pub ok: bool,
    pub failures: Vec<OreFailure>,
    pub ambiguities_checked: usize,
}

/// Check the enveloping-algebra shape: an Ore presentation in which every
/// sigma is the identity and every delta is a linear combination of single
/// generators of the matching degree (the diamond condition is then the
/// Jacobi identity for the induced bracket).
pub fn validate_enveloping(p: &AlgebraPresentation) -> EnvReport {
    let ore = validate_ore(p);
    let mut failures = ore.failures.clone();
    for data in &ore.sigma_delta {
        let j = data.j;
        for (&i, sigma) in &data.sigma {
            let expected = Polynomial::monomial(Word::from_ranks(&[i], &p.table), p.field.one());
            if *sigma != expected {
                failures.push(OreFailure::NonIdentitySigma { j, i });
            }
        }
        for (&i, delta) in &data.delta {
            for (w, _) in delta.terms() {
                if w.len() != 1 {
                    failures.push(OreFailure::NonlinearDelta { j, i, word: w.clone() });
                }
            }
        }
    }
    EnvReport { ok: failures.is_empty(), failures, ambiguities_checked: ore.ambiguities_checked }
}

/// One step of the elimination plan: `var` solved from `relation`, equal to
/// `expr` over the surviving variables.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationStep {
    pub relation: usize,
    pub var: usize,
    pub expr: Polynomial,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenerationOutcome {
    /// Every variable of degree > 1 can be eliminated; the plan lists the
    /// eliminations in order, with each expression over degree-one
    /// variables only.
    Yes(Vec<EliminationStep>),
    /// Some variables of degree > 1 cannot be expressed in degree-one
    /// generators.
    No { stuck: Vec<usize> },
    /// Eliminability hinges on a coefficient the nonzero set does not
    /// certify.
    Undetermined { blocked_coeff: String },
}

/// Fixpoint elimination: repeatedly pick the unused relation with the
/// smallest leading term in which some not-yet-eliminated variable of
/// degree > 1 appears as a standalone word with a certified-invertible
/// coefficient (and nowhere else in that relation), and solve for it.
pub fn generated_in_degree_one(p: &AlgebraPresentation) -> GenerationOutcome {
    let table = &p.table;
    let spec = &p.field;
    let mut remaining: BTreeSet<usize> =
        (0..table.len()).filter(|&r| table.degree(r) > 1).collect();
    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut subst: Vec<(usize, Polynomial)> = Vec::new();
    let mut steps: Vec<EliminationStep> = Vec::new();

    while !remaining.is_empty() {
        let mut best: Option<(Word, usize, usize, Polynomial, FieldElement)> = None;
        let mut blocked: Option<String> = None;
        for (idx, rel) in p.relations.iter().enumerate() {
            if used.contains(&idx) {
                continue;
            }
            let mut cur = rel.clone();
            for (v, e) in &subst {
                cur = cur.substitute(*v, e, table).expect("plan expressions are homogeneous");
            }
            if cur.is_zero() {
                continue;
            }
            let lead = cur.leading_term().expect("nonzero").0.clone();
            for &v in &remaining {
                let standalone = Word::from_ranks(&[v], table);
                let Some(c) = cur.coeff(&standalone) else { continue };
                // the variable must not occur anywhere else in the relation
                let elsewhere = cur
                    .terms()
                    .any(|(w, _)| *w != standalone && w.letters().any(|l| l == v));
                if elsewhere {
                    continue;
                }
                if !c.is_invertible(spec) {
                    blocked.get_or_insert_with(|| c.display(spec));
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((bl, bidx, bv, _, _)) => {
                        (&lead, idx, v) < (bl, *bidx, *bv)
                    }
                };
                if better {
                    best = Some((lead.clone(), idx, v, cur.clone(), c.clone()));
                }
            }
        }
        match best {
            Some((_, idx, v, cur, c)) => {
                // cur = c*v + rest  =>  v = -rest/c
                let standalone = Word::from_ranks(&[v], table);
                let mut rest = cur.clone();
                rest.add_term(standalone, c.neg());
                let inv = c.inverse(spec).expect("certified invertible");
                let expr = rest.scale(&inv.neg());
                used.insert(idx);
                remaining.remove(&v);
                subst.push((v, expr.clone()));
                steps.push(EliminationStep { relation: idx, var: v, expr });
            }
            None => {
                return match blocked {
                    Some(coeff) => GenerationOutcome::Undetermined { blocked_coeff: coeff },
                    None => GenerationOutcome::No { stuck: remaining.into_iter().collect() },
                };
            }
        }
    }

    // expressions may mention variables eliminated later; finalize last to
    // first so every expression ends up over degree-one variables only
    for k in (0..steps.len()).rev() {
        let mut expr = steps[k].expr.clone();
        for later in steps[k + 1..].to_vec() {
            expr = expr
                .substitute(later.var, &later.expr, table)
                .expect("plan expressions are homogeneous");
        }
        steps[k].expr = expr;
    }
    GenerationOutcome::Yes(steps)
}

/// Sorted degrees of the table.
pub fn degree_type(p: &AlgebraPresentation) -> Vec<u32> {
    p.degree_type()
}

/// All degree types an iterated Ore extension on `n` weighted variables,
/// generated in degree one with injective skew maps, can have. Encodes the
/// three structural constraints:
/// (a) at least two variables of degree one;
/// (b) every degree above one is a sum of the degrees of two other slots;
/// (c) not both exactly two degree-one variables and two or more of degree
///     two.
/// Entries are bounded by `2n`, a safe over-approximation of the pairwise
/// sum closure. Output ascending.
pub fn enumerate_degree_types(n: usize) -> Vec<Vec<u32>> {
    assert!(n >= 1);
    let bound = (2 * n) as u32;
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    fn rec(n: usize, bound: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == n {
            if admissible_degree_type(current) {
                out.push(current.clone());
            }
            return;
        }
        let lo = current.last().copied().unwrap_or(1);
        for d in lo..=bound {
            current.push(d);
            rec(n, bound, current, out);
            current.pop();
        }
    }
    rec(n, bound, &mut current, &mut out);
    out.sort();
    out
}

fn admissible_degree_type(ds: &[u32]) -> bool {
    let ones = ds.iter().filter(|&&d| d == 1).count();
    if ones < 2 {
        return false;
    }
    let twos = ds.iter().filter(|&&d| d == 2).count();
    if ones == 2 && twos >= 2 {
        return false;
    }
    ds.iter()
        .enumerate()
        .filter(|(_, &d)| d > 1)
        .all(|(k, &d)| sum_split_witness(ds, k, d).is_some())
}

/// A pair of distinct positions whose degrees sum to `d` (the entry at
/// `skip` may serve only once).
pub fn sum_split_witness(ds: &[u32], skip: usize, d: u32) -> Option<(usize, usize)> {
    for i in 0..ds.len() {
        for j in i + 1..ds.len() {
            if ds[i] + ds[j] == d && i != skip && j != skip {
                return Some((i, j));
            }
        }
    }
    // the slot being justified may itself be one of the two summands only
    // if another slot carries the same degree; distinct positions suffice
    None
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn commutative_presentation_is_ore() {
        let p = commutative(3);
        let report = validate_ore(&p);
        assert!(report.ok, "failures: {:?}", report.failures);
        // sigma is the identity, delta is zero
        for data in &report.sigma_delta {
            for (i, s) in &data.sigma {
                let expected =
                    Polynomial::monomial(Word::from_ranks(&[*i], &p.table), p.field.one());
                assert_eq!(*s, expected);
            }
            for (_, d) in &data.delta {
                assert!(d.is_zero());
            }
        }
        let env = validate_enveloping(&p);
        assert!(env.ok);
        for j in 0..3 {
            assert_eq!(check_sigma_injective(&p, j, 4), SigmaVerdict::Certified);
        }
    }

    #[test]
    fn missing_pair_is_reported() {
        let mut p = commutative(3);
        p.relations.pop();
        let report = validate_ore(&p);
        assert!(!report.ok);
        assert!(report
            .failures
            .iter()
            .any(|f| matches!(f, OreFailure::MissingPair { j: 2, i: 1 })));
    }

    #[test]
    fn sigma_delta_round_trip() {
        let p = commutative(3);
        let report = validate_ore(&p);
        for data in &report.sigma_delta {
            for &i in data.sigma.keys() {
                let rebuilt = data.rebuild_relation(i, &p.table, &p.field);
                // find the relation with that leading word
                let lead = Word::from_ranks(&[data.j, i], &p.table);
                let original = p
                    .relations
                    .iter()
                    .find(|r| *r.leading_term().unwrap().0 == lead)
                    .unwrap();
                assert_eq!(&rebuilt, original);
            }
        }
    }

    #[test]
    fn degree_types_dimension_five() {
        let types = enumerate_degree_types(5);
        assert_eq!(
            types,
            vec![
                vec![1, 1, 1, 1, 1],
                vec![1, 1, 1, 1, 2],
                vec![1, 1, 1, 2, 2],
                vec![1, 1, 1, 2, 3],
                vec![1, 1, 2, 3, 3],
                vec![1, 1, 2, 3, 4],
                vec![1, 1, 2, 3, 5],
            ]
        );
    }

    #[test]
    fn degree_types_small_dimensions() {
        assert_eq!(enumerate_degree_types(1), Vec::<Vec<u32>>::new());
        assert_eq!(enumerate_degree_types(2), vec![vec![1, 1]]);
        assert_eq!(
            enumerate_degree_types(3),
            vec![vec![1, 1, 1], vec![1, 1, 2]]
        );
    }

    #[test]
    fn stuck_variable_is_reported() {
        // a degree-2 variable never expressible in degree-one generators
        let table = VariableTable::new(vec![
            ("x1".into(), 2),
            ("x2".into(), 1),
            ("x3".into(), 1),
        ]);
        let k = FieldSpec::Rationals;
        let rel = |j: usize, i: usize| {
            Polynomial::monomial(Word::from_ranks(&[j, i], &table), k.one()).sub(
                &Polynomial::monomial(Word::from_ranks(&[i, j], &table), k.one()),
            )
        };
        let rels = vec![rel(1, 0), rel(2, 0), rel(2, 1)];
        let p = AlgebraPresentation::new("central-x1", k, table.clone(), rels).unwrap();
        match generated_in_degree_one(&p) {
            GenerationOutcome::No { stuck } => assert_eq!(stuck, vec![0]),
            other => panic!("expected stuck, got {other:?}"),
        }
    }
}
