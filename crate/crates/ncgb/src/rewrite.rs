//! Reduction systems on the free algebra: normal forms, ambiguity
//! enumeration, diamond-condition checking, and degree-bounded completion
//! to a reduced Gröbner basis.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::coeff::{CoeffError, FieldSpec};
use crate::freealg::{Polynomial, VariableTable, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("cannot make a rule from the zero polynomial")]
    ZeroRelation,
    #[error("relation is not homogeneous")]
    Inhomogeneous,
    #[error("leading coefficient `{coeff}` is not certified invertible")]
    NonInvertibleParametric { coeff: String },
}

impl From<CoeffError> for RewriteError {
    fn from(e: CoeffError) -> Self {
        match e {
            CoeffError::NonInvertibleParametric { coeff } => {
                RewriteError::NonInvertibleParametric { coeff }
            }
            CoeffError::DivisionByZero => RewriteError::ZeroRelation,
        }
    }
}

/// Where a basis element came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// Present in the input presentation.
    Original,
    /// Added during completion from the ambiguity with this superposition
    /// word.
    FromAmbiguity(Word),
}

/// A monic rewrite rule `lead -> tail`: every tail word is strictly smaller
/// than `lead` and has the same weighted degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub lead: Word,
    pub tail: Polynomial,
    pub provenance: Provenance,
}

impl RewriteRule {
    pub fn degree(&self) -> u32 {
        self.lead.degree()
    }

    /// The relation `lead - tail` as a polynomial.
    pub fn as_polynomial(&self, spec: &FieldSpec) -> Polynomial {
        Polynomial::monomial(self.lead.clone(), spec.one()).sub(&self.tail)
    }
}

/// Divide a nonzero homogeneous polynomial by its leading coefficient and
/// orient it as a rule. In the parametric domain the leading coefficient
/// must be certified invertible; failing that signals that a case split on
/// the coefficient would be required.
pub fn make_rule(p: &Polynomial, spec: &FieldSpec) -> Result<RewriteRule, RewriteError> {
    if p.is_zero() {
        return Err(RewriteError::ZeroRelation);
    }
    if p.homogeneous_degree().is_none() {
        return Err(RewriteError::Inhomogeneous);
    }
    let (lead, lc) = p.leading_term().expect("nonzero");
    let lead = lead.clone();
    let scaled = if lc.is_one() {
        p.clone()
    } else {
        if !lc.is_invertible(spec) {
            return Err(RewriteError::NonInvertibleParametric { coeff: lc.display(spec) });
        }
        p.scale(&lc.inverse(spec)?)
    };
    // tail = lead - p/lc
    let tail = Polynomial::monomial(lead.clone(), spec.one()).sub(&scaled);
    Ok(RewriteRule { lead, tail, provenance: Provenance::Original })
}

/// A set of rules with distinct leading words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteSystem {
    pub rules: Vec<RewriteRule>,
    pub reduced: bool,
    pub complete_to: Option<u32>,
}

impl RewriteSystem {
    pub fn new(rules: Vec<RewriteRule>) -> Self {
        let mut leads = std::collections::BTreeSet::new();
        for r in &rules {
            assert!(leads.insert(r.lead.clone()), "duplicate leading word");
        }
        RewriteSystem { rules, reduced: false, complete_to: None }
    }

    pub fn from_relations(
        relations: &[Polynomial],
        spec: &FieldSpec,
    ) -> Result<Self, RewriteError> {
        let rules = relations
            .iter()
            .map(|p| make_rule(p, spec))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RewriteSystem::new(rules))
    }

    pub fn leads(&self) -> Vec<Word> {
        self.rules.iter().map(|r| r.lead.clone()).collect()
    }

    pub fn rules_of_degree(&self, d: u32) -> impl Iterator<Item = &RewriteRule> {
        self.rules.iter().filter(move |r| r.degree() == d)
    }

    /// Leftmost redex in `w`: the smallest position where some rule's lead
    /// starts, with the first such rule in list order.
    fn leftmost_redex(&self, w: &Word) -> Option<(usize, usize)> {
        for pos in 0..w.len() {
            for (ri, _rule) in self.rules.iter().enumerate() {
                if self.matches_at(w, pos, ri) {
                    return Some((pos, ri));
                }
            }
        }
        None
    }

    fn rightmost_redex(&self, w: &Word) -> Option<(usize, usize)> {
        for pos in (0..w.len()).rev() {
            for (ri, _) in self.rules.iter().enumerate().rev() {
                if self.matches_at(w, pos, ri) {
                    return Some((pos, ri));
                }
            }
        }
        None
    }

    fn matches_at(&self, w: &Word, pos: usize, ri: usize) -> bool {
        let lead = &self.rules[ri].lead;
        let l = lead.len();
        l > 0
            && pos + l <= w.len()
            && (0..l).all(|k| w.letter_at(pos + k) == lead.letter_at(k))
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        self.leftmost_redex(w).is_none()
    }
}

/// Redex selection order; all strategies agree once the system satisfies
/// the diamond condition, which the confluence tests exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Reduce the greatest reducible word, leftmost occurrence first.
    GreatestWordLeftmost,
    /// Reduce the smallest reducible word, rightmost occurrence first.
    SmallestWordRightmost,
}

/// Fully reduce `p` against `sys`. Terminates by the descending chain
/// condition: each step replaces a word by strictly smaller words.
pub fn normal_form(p: &Polynomial, sys: &RewriteSystem, table: &VariableTable) -> Polynomial {
    normal_form_with(p, sys, table, Strategy::GreatestWordLeftmost)
}

pub fn normal_form_with(
    p: &Polynomial,
    sys: &RewriteSystem,
    table: &VariableTable,
    strategy: Strategy,
) -> Polynomial {
    let mut p = p.clone();
    loop {
        let target = match strategy {
            Strategy::GreatestWordLeftmost => p.terms().rev().find_map(|(w, c)| {
                sys.leftmost_redex(w).map(|(pos, ri)| (w.clone(), c.clone(), pos, ri))
            }),
            Strategy::SmallestWordRightmost => p.terms().find_map(|(w, c)| {
                sys.rightmost_redex(w).map(|(pos, ri)| (w.clone(), c.clone(), pos, ri))
            }),
        };
        let Some((w, c, pos, ri)) = target else {
            return p;
        };
        let rule = &sys.rules[ri];
        let u = w.slice(0, pos, table);
        let v = w.slice(pos + rule.lead.len(), w.len(), table);
        p.add_term(w.clone(), c.neg());
        p = p.add(&rule.tail.sandwich(&u, &v).scale(&c));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbiguityKind {
    Overlap,
    Inclusion,
}

/// An overlap `(left, right, u, v, w)` with `lead(left) = uv` and
/// `lead(right) = vw`, all of `u, v, w` nonempty; or an inclusion with
/// `lead(left) = v` occurring inside `lead(right) = uvw`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambiguity {
    pub kind: AmbiguityKind,
    pub left: usize,
    pub right: usize,
    pub u: Word,
    pub v: Word,
    pub w: Word,
}

impl Ambiguity {
    /// The superposition word `uvw`.
    pub fn superposition(&self) -> Word {
        self.u.concat(&self.v).concat(&self.w)
    }
}

/// All overlap and inclusion ambiguities of the system, sorted by the
/// superposition word (degree first), then rule indices. Self-overlaps are
/// enumerated.
pub fn ambiguities(sys: &RewriteSystem, table: &VariableTable) -> Vec<Ambiguity> {
    let n = sys.rules.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let li = &sys.rules[i].lead;
            let lj = &sys.rules[j].lead;
            // overlaps: a proper nonempty suffix of li is a proper prefix of lj
            for vlen in 1..li.len().min(lj.len()) {
                let matched =
                    (0..vlen).all(|k| li.letter_at(li.len() - vlen + k) == lj.letter_at(k));
                if matched {
                    out.push(Ambiguity {
                        kind: AmbiguityKind::Overlap,
                        left: i,
                        right: j,
                        u: li.slice(0, li.len() - vlen, table),
                        v: li.slice(li.len() - vlen, li.len(), table),
                        w: lj.slice(vlen, lj.len(), table),
                    });
                }
            }
            // inclusions: li a proper subword of lj
            if i != j && li.len() < lj.len() {
                for pos in 0..=lj.len() - li.len() {
                    let matched = (0..li.len()).all(|k| lj.letter_at(pos + k) == li.letter_at(k));
                    if matched {
                        out.push(Ambiguity {
                            kind: AmbiguityKind::Inclusion,
                            left: i,
                            right: j,
                            u: lj.slice(0, pos, table),
                            v: li.clone(),
                            w: lj.slice(pos + li.len(), lj.len(), table),
                        });
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.superposition()
            .cmp(&b.superposition())
            .then(a.left.cmp(&b.left))
            .then(a.right.cmp(&b.right))
    });
    out
}

/// Flip the polynomial so its leading coefficient carries the canonical
/// sign; reported ambiguity values are then independent of which side of
/// the superposition was subtracted from which.
fn sign_normalize(p: Polynomial) -> Polynomial {
    match p.leading_term() {
        Ok((_, c)) if c.canonical_sign_is_negative() => p.neg(),
        _ => p,
    }
}

/// Normal form of the S-difference of an ambiguity: the two one-step
/// reductions of the superposition word, subtracted and fully reduced.
/// Zero exactly when the ambiguity is resolvable relative to `sys`.
pub fn resolve_check(a: &Ambiguity, sys: &RewriteSystem, table: &VariableTable) -> Polynomial {
    let left = &sys.rules[a.left];
    let right = &sys.rules[a.right];
    let diff = match a.kind {
        AmbiguityKind::Overlap => {
            // lead(left)·w reduces to tail(left)·w; u·lead(right) to u·tail(right)
            left.tail
                .sandwich(&Word::one(), &a.w)
                .sub(&right.tail.sandwich(&a.u, &Word::one()))
        }
        AmbiguityKind::Inclusion => left.tail.sandwich(&a.u, &a.w).sub(&right.tail),
    };
    sign_normalize(normal_form(&diff, sys, table))
}

#[derive(Debug, Clone)]
pub struct DiamondReport {
    pub checked: usize,
    pub resolved: usize,
    pub unresolved: Vec<(Ambiguity, Polynomial)>,
}

impl DiamondReport {
    pub fn ok(&self) -> bool {
        self.unresolved.is_empty()
    }
}

/// Run `resolve_check` on every ambiguity of superposition degree at most
/// `max_degree`. An empty unresolved list certifies the diamond condition
/// up to that degree; for a finite homogeneous system whose ambiguities all
/// sit below the bound, that certifies it outright.
pub fn diamond_check(sys: &RewriteSystem, max_degree: u32, table: &VariableTable) -> DiamondReport {
    let mut report = DiamondReport { checked: 0, resolved: 0, unresolved: Vec::new() };
    for a in ambiguities(sys, table) {
        if a.superposition().degree() > max_degree {
            continue;
        }
        report.checked += 1;
        let nf = resolve_check(&a, sys, table);
        if nf.is_zero() {
            report.resolved += 1;
        } else {
            report.unresolved.push((a, nf));
        }
    }
    report
}

#[derive(Debug, Clone)]
pub enum TraceEvent {
    AmbiguityResolved { word: Word, left: usize, right: usize },
    AmbiguityProducedRule { word: Word, left: usize, right: usize, lead: Word },
    InputKept { input: usize, lead: Word },
    InputReducedToZero { input: usize },
    InputSkipped { input: usize, degree: u32 },
}

pub type CompletionTrace = Vec<TraceEvent>;

/// Buchberger-style completion, processed degree by degree. Within one
/// degree, ambiguities among rules already in the basis are handled before
/// input relations of that degree, so a consequence of an overlap is
/// attributed to the overlap even when an input relation also implies it.
/// New rules only spawn ambiguities of strictly higher degree, so a single
/// pass per degree suffices. Input relations of degree beyond `max_degree`
/// are dropped from the truncated basis.
pub fn complete(
    sys: &RewriteSystem,
    max_degree: u32,
    table: &VariableTable,
    spec: &FieldSpec,
) -> Result<(RewriteSystem, CompletionTrace), RewriteError> {
    let mut pending: BTreeMap<u32, Vec<(usize, RewriteRule)>> = BTreeMap::new();
    for (i, r) in sys.rules.iter().enumerate() {
        pending.entry(r.degree()).or_default().push((i, r.clone()));
    }
    let mut trace = CompletionTrace::new();
    let mut basis = RewriteSystem { rules: Vec::new(), reduced: false, complete_to: None };

    for d in 1..=max_degree {
        for a in ambiguities(&basis, table) {
            if a.superposition().degree() != d {
                continue;
            }
            let nf = resolve_check(&a, &basis, table);
            if nf.is_zero() {
                trace.push(TraceEvent::AmbiguityResolved {
                    word: a.superposition(),
                    left: a.left,
                    right: a.right,
                });
            } else {
                let mut rule = make_rule(&nf, spec)?;
                rule.provenance = Provenance::FromAmbiguity(a.superposition());
                trace.push(TraceEvent::AmbiguityProducedRule {
                    word: a.superposition(),
                    left: a.left,
                    right: a.right,
                    lead: rule.lead.clone(),
                });
                basis.rules.push(rule);
            }
        }
        if let Some(inputs) = pending.remove(&d) {
            for (idx, input) in inputs {
                let nf = normal_form(&input.as_polynomial(spec), &basis, table);
                if nf.is_zero() {
                    trace.push(TraceEvent::InputReducedToZero { input: idx });
                } else {
                    let mut rule = make_rule(&nf, spec)?;
                    rule.provenance = input.provenance.clone();
                    trace.push(TraceEvent::InputKept { input: idx, lead: rule.lead.clone() });
                    basis.rules.push(rule);
                }
            }
        }
    }
    for (_, inputs) in pending {
        for (idx, input) in inputs {
            trace.push(TraceEvent::InputSkipped { input: idx, degree: input.degree() });
        }
    }

    // leads are mutually irreducible by construction; bring the tails to
    // normal form against the final basis
    let snapshot = basis.clone();
    for rule in &mut basis.rules {
        rule.tail = normal_form(&rule.tail, &snapshot, table);
    }
    basis.reduced = true;
    basis.complete_to = Some(max_degree);
    Ok((basis, trace))
}

/// Reduce a system against itself until it satisfies the reduced-basis
/// invariants: no rule's lead or tail contains another rule's lead.
pub fn inter_reduce(
    sys: &RewriteSystem,
    table: &VariableTable,
    spec: &FieldSpec,
) -> Result<RewriteSystem, RewriteError> {
    let mut rules = sys.rules.clone();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < rules.len() {
            let others = RewriteSystem {
                rules: rules
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, r)| r.clone())
                    .collect(),
                reduced: false,
                complete_to: None,
            };
            let poly = rules[i].as_polynomial(spec);
            let nf = normal_form(&poly, &others, table);
            if nf == poly {
                let tail_nf = normal_form(&rules[i].tail, &others, table);
                if tail_nf != rules[i].tail {
                    rules[i].tail = tail_nf;
                    changed = true;
                }
                i += 1;
            } else if nf.is_zero() {
                rules.remove(i);
                changed = true;
            } else {
                let mut rule = make_rule(&nf, spec)?;
                rule.provenance = rules[i].provenance.clone();
                rules[i] = rule;
                changed = true;
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    let mut out = RewriteSystem::new(rules);
    out.reduced = true;
    out.complete_to = sys.complete_to;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldSpec;
    use crate::freealg::VariableTable;

    fn mono(ranks: &[usize], t: &VariableTable, k: &FieldSpec) -> Polynomial {
        Polynomial::monomial(Word::from_ranks(ranks, t), k.one())
    }

    /// x2*x1 -> x1*x2 over two degree-one variables.
    fn commutator_system(t: &VariableTable, k: &FieldSpec) -> RewriteSystem {
        let rel = mono(&[1, 0], t, k).sub(&mono(&[0, 1], t, k));
        RewriteSystem::from_relations(&[rel], k).unwrap()
    }

    #[test]
    fn normal_form_sorts_letters() {
        let t = VariableTable::of_degrees(&[1, 1]);
        let k = FieldSpec::Rationals;
        let sys = commutator_system(&t, &k);
        let p = mono(&[1, 0, 1, 0], &t, &k); // x2 x1 x2 x1
        let nf = normal_form(&p, &sys, &t);
        assert_eq!(nf, mono(&[0, 0, 1, 1], &t, &k));
        // an irreducible word is unchanged
        let q = mono(&[0, 1, 1], &t, &k);
        assert_eq!(normal_form(&q, &sys, &t), q);
    }

    #[test]
    fn single_rule_has_no_ambiguities() {
        let t = VariableTable::of_degrees(&[1, 1]);
        let k = FieldSpec::Rationals;
        let sys = commutator_system(&t, &k);
        assert!(ambiguities(&sys, &t).is_empty());
    }

    #[test]
    fn overlap_enumeration_on_quadratic_leads() {
        // leads {x4x3, x4x2, x5x4, x5x3, x5x2} on degree-one variables
        // x2<x3<x4<x5: the degree-3 overlaps are exactly x5x4x2 and x5x4x3
        let t = VariableTable::of_degrees(&[1, 1, 1, 1]); // ranks: x2,x3,x4,x5
        let k = FieldSpec::Rationals;
        let pairs = [(2, 1), (2, 0), (3, 2), (3, 1), (3, 0)];
        let rels: Vec<Polynomial> = pairs
            .iter()
            .map(|&(j, i)| mono(&[j, i], &t, &k).sub(&mono(&[i, j], &t, &k)))
            .collect();
        let sys = RewriteSystem::from_relations(&rels, &k).unwrap();
        let ambs = ambiguities(&sys, &t);
        let words: Vec<Word> = ambs.iter().map(|a| a.superposition()).collect();
        assert_eq!(
            words,
            vec![Word::from_ranks(&[3, 2, 0], &t), Word::from_ranks(&[3, 2, 1], &t)]
        );
        assert!(ambs.iter().all(|a| a.kind == AmbiguityKind::Overlap));
    }

    #[test]
    fn inclusion_ambiguities_are_found() {
        let t = VariableTable::of_degrees(&[1, 1]);
        let k = FieldSpec::Rationals;
        let r1 = mono(&[1, 0], &t, &k).sub(&mono(&[0, 1], &t, &k));
        let r2 = mono(&[1, 1, 0, 0], &t, &k).sub(&mono(&[0, 0, 1, 1], &t, &k));
        let sys = RewriteSystem::from_relations(&[r1, r2], &k).unwrap();
        let ambs = ambiguities(&sys, &t);
        assert!(ambs.iter().any(|a| a.kind == AmbiguityKind::Inclusion));
    }

    #[test]
    fn commutative_overlaps_resolve() {
        // fully commutative system on three letters
        let t = VariableTable::of_degrees(&[1, 1, 1]);
        let k = FieldSpec::Rationals;
        let rels: Vec<Polynomial> = [(1, 0), (2, 0), (2, 1)]
            .iter()
            .map(|&(j, i)| mono(&[j, i], &t, &k).sub(&mono(&[i, j], &t, &k)))
            .collect();
        let sys = RewriteSystem::from_relations(&rels, &k).unwrap();
        let report = diamond_check(&sys, 3, &t);
        assert_eq!(report.checked, 1); // x3x2x1
        assert!(report.ok());
        // a confluent system completes to itself
        let (done, _) = complete(&sys, 4, &t, &k).unwrap();
        assert_eq!(done.leads(), sys.leads());
        let again = inter_reduce(&done, &t, &k).unwrap();
        assert_eq!(again.leads(), done.leads());
    }

    #[test]
    fn make_rule_monicizes() {
        let t = VariableTable::of_degrees(&[1, 1]);
        let k = FieldSpec::Rationals;
        let p = mono(&[1, 0], &t, &k).scale(&k.from_integer(3)).sub(&mono(&[0, 1], &t, &k));
        let rule = make_rule(&p, &k).unwrap();
        assert_eq!(rule.lead, Word::from_ranks(&[1, 0], &t));
        let (w, c) = rule.tail.leading_term().unwrap();
        assert_eq!(*w, Word::from_ranks(&[0, 1], &t));
        assert_eq!(c.display(&k), "1/3");
    }

    #[test]
    fn make_rule_refuses_uncertified_parametric_lead() {
        let t = VariableTable::of_degrees(&[1, 1]);
        let k = FieldSpec::parametric(&["b3", "i1"], &["i1"]);
        let p = mono(&[1, 0], &t, &k)
            .scale(&k.param_named("b3"))
            .sub(&mono(&[0, 1], &t, &k));
        match make_rule(&p, &k) {
            Err(RewriteError::NonInvertibleParametric { coeff }) => assert_eq!(coeff, "b3"),
            other => panic!("expected NonInvertibleParametric, got {other:?}"),
        }
        let q = mono(&[1, 0], &t, &k)
            .scale(&k.param_named("i1"))
            .sub(&mono(&[0, 1], &t, &k));
        assert!(make_rule(&q, &k).is_ok());
    }

    #[test]
    fn inter_reduce_rewrites_tails() {
        // x3x2 -> x2x3 and x4x3 -> x3x2: the second tail rewrites to x2x3
        let t = VariableTable::of_degrees(&[1, 1, 1, 1]);
        let k = FieldSpec::Rationals;
        let r1 = mono(&[2, 1], &t, &k).sub(&mono(&[1, 2], &t, &k));
        let r2 = mono(&[3, 2], &t, &k).sub(&mono(&[2, 1], &t, &k));
        let sys = RewriteSystem::from_relations(&[r1.clone(), r2], &k).unwrap();
        let reduced = inter_reduce(&sys, &t, &k).unwrap();
        let tail = &reduced.rules[1].tail;
        assert_eq!(*tail, mono(&[1, 2], &t, &k));
        let again = inter_reduce(&reduced, &t, &k).unwrap();
        assert_eq!(again, reduced);
    }
}
