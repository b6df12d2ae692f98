//! Words and polynomials in the free associative algebra on an ordered,
//! weighted variable table, under weighted graded lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::coeff::{FieldElement, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeAlgError {
    #[error("replacement degree {replacement} does not match variable degree {variable}")]
    DegreeMismatch { variable: u32, replacement: u32 },
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
}

/// Ordered list of variables. The list position is the rank in the total
/// order: a later entry is greater. Every degree is at least 1.
#[derive(Clone, PartialEq, Eq)]
pub struct VariableTable {
    vars: Vec<(String, u32)>,
}

impl VariableTable {
    pub fn new(vars: Vec<(String, u32)>) -> Self {
        let mut seen = std::collections::BTreeSet::new();
        for (name, deg) in &vars {
            assert!(!name.is_empty(), "empty variable name");
            assert!(*deg >= 1, "variable `{name}` must have degree >= 1");
            assert!(seen.insert(name.clone()), "duplicate variable `{name}`");
        }
        VariableTable { vars }
    }

    pub fn of_degrees(degrees: &[u32]) -> Self {
        VariableTable::new(
            degrees
                .iter()
                .enumerate()
                .map(|(i, &d)| (format!("x{}", i + 1), d))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn degree(&self, rank: usize) -> u32 {
        self.vars[rank].1
    }

    pub fn name(&self, rank: usize) -> &str {
        &self.vars[rank].0
    }

    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(n, _)| n == name)
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.vars.iter().map(|(_, d)| *d).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, u32)> {
        self.vars.iter().map(|(n, d)| (n.as_str(), *d))
    }

    /// Table restricted to the given ranks, in the given order.
    pub fn restrict(&self, ranks: &[usize]) -> VariableTable {
        VariableTable::new(ranks.iter().map(|&r| self.vars[r].clone()).collect())
    }
}

/// A monomial: a sequence of variable ranks with its weighted degree cached.
/// The empty word is the unit. Comparison is by total degree first, then
/// leftmost differing letter with the higher rank winning; since every
/// variable has degree >= 1, two distinct words of equal degree always
/// differ at some shared position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u8>,
    degree: u32,
}

impl Word {
    pub fn one() -> Self {
        Word { letters: Vec::new(), degree: 0 }
    }

    pub fn letter(rank: usize, table: &VariableTable) -> Self {
        Word { letters: vec![rank as u8], degree: table.degree(rank) }
    }

    pub fn from_ranks(ranks: &[usize], table: &VariableTable) -> Self {
        let degree = ranks.iter().map(|&r| table.degree(r)).sum();
        Word { letters: ranks.iter().map(|&r| r as u8).collect(), degree }
    }

    pub fn is_one(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters.iter().map(|&b| b as usize)
    }

    pub fn letter_at(&self, i: usize) -> usize {
        self.letters[i] as usize
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters, degree: self.degree + other.degree }
    }

    /// Subword of letter positions `[from, to)`, with degrees recomputed.
    pub fn slice(&self, from: usize, to: usize, table: &VariableTable) -> Word {
        let letters: Vec<u8> = self.letters[from..to].to_vec();
        let degree = letters.iter().map(|&b| table.degree(b as usize)).sum();
        Word { letters, degree }
    }

    /// First position at which `pattern` occurs as a contiguous subword.
    pub fn find(&self, pattern: &Word) -> Option<usize> {
        if pattern.len() > self.len() {
            return None;
        }
        (0..=self.len() - pattern.len())
            .find(|&i| self.letters[i..i + pattern.len()] == pattern.letters[..])
    }

    pub fn contains(&self, pattern: &Word) -> bool {
        self.find(pattern).is_some()
    }

    pub fn count_letter(&self, rank: usize) -> usize {
        self.letters.iter().filter(|&&b| b as usize == rank).count()
    }

    pub fn display(&self, table: &VariableTable) -> String {
        if self.is_one() {
            "1".to_string()
        } else {
            self.letters()
                .map(|r| table.name(r).to_string())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic comparison; the named form of `Word`'s `Ord`.
pub fn compare_words(u: &Word, v: &Word) -> Ordering {
    u.cmp(v)
}

/// Sparse polynomial: word -> nonzero coefficient. The map order makes the
/// last entry the leading term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Word, FieldElement>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn monomial(word: Word, coeff: FieldElement) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&FieldElement> {
        self.terms.get(w)
    }

    pub fn add_term(&mut self, word: Word, coeff: FieldElement) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(cur) => {
                let sum = cur.add(&coeff);
                if sum.is_zero() {
                    self.terms.remove(&word);
                } else {
                    *cur = sum;
                }
            }
            None => {
                self.terms.insert(word, coeff);
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(w, x)| (w.clone(), x.mul(c))).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb), ca.mul(cb));
            }
        }
        out
    }

    /// `u * self * v` for words `u`, `v`.
    pub fn sandwich(&self, u: &Word, v: &Word) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (u.concat(w).concat(v), c.clone()))
                .collect(),
        }
    }

    pub fn leading_term(&self) -> Result<(&Word, &FieldElement), FreeAlgError> {
        self.terms.last_key_value().ok_or(FreeAlgError::ZeroPolynomial)
    }

    /// Degree shared by all words, if the polynomial is homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree();
        it.all(|w| w.degree() == d).then_some(d)
    }

    /// Replace every occurrence of the variable `rank` in every word by the
    /// homogeneous polynomial `replacement`, expanding and collecting.
    pub fn substitute(
        &self,
        rank: usize,
        replacement: &Polynomial,
        table: &VariableTable,
    ) -> Result<Polynomial, FreeAlgError> {
        let var_degree = table.degree(rank);
        if let Some(d) = replacement.homogeneous_degree() {
            if d != var_degree {
                return Err(FreeAlgError::DegreeMismatch { variable: var_degree, replacement: d });
            }
        } else if !replacement.is_zero() {
            return Err(FreeAlgError::DegreeMismatch { variable: var_degree, replacement: 0 });
        }
        let mut out = Polynomial::zero();
        for (w, c) in &self.terms {
            let mut pieces: Vec<Polynomial> = Vec::new();
            let mut current = Word::one();
            for l in w.letters() {
                if l == rank {
                    pieces.push(Polynomial::monomial(current, trivial_one(c)));
                    pieces.push(replacement.clone());
                    current = Word::one();
                } else {
                    current = current.concat(&Word::from_ranks(&[l], table));
                }
            }
            pieces.push(Polynomial::monomial(current, c.clone()));
            let mut acc = pieces[0].clone();
            for piece in &pieces[1..] {
                acc = acc.mul(piece);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    pub fn display(&self, table: &VariableTable, spec: &FieldSpec) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.canonical_sign_is_negative();
            let mag = if neg { c.neg() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_str = mag.display(spec);
            let needs_parens = coeff_str.contains('+') || coeff_str.contains(" - ");
            let coeff_str = if needs_parens { format!("({coeff_str})") } else { coeff_str };
            if w.is_one() {
                out.push_str(&coeff_str);
            } else if mag.is_one() {
                out.push_str(&w.display(table));
            } else {
                out.push_str(&format!("{}*{}", coeff_str, w.display(table)));
            }
        }
        out
    }
}

/// Coefficient 1 in the same domain as `c`.
fn trivial_one(c: &FieldElement) -> FieldElement {
    match c {
        FieldElement::Rat(_) => FieldSpec::Rationals.one(),
        FieldElement::Cyc(_, _) => FieldSpec::Cyclotomic3.one(),
        FieldElement::Par(r) => {
            FieldElement::Par(crate::coeff::RatFun::from_poly(crate::coeff::MPoly::one(
                r.num().nvars(),
            )))
        }
    }
}

impl fmt::Debug for VariableTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VariableTable[")?;
        for (i, (n, d)) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{d}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_11235() -> VariableTable {
        // ascending rank; degrees of (x1..x5) = (5,3,2,1,1)
        VariableTable::new(vec![
            ("x1".into(), 5),
            ("x2".into(), 3),
            ("x3".into(), 2),
            ("x4".into(), 1),
            ("x5".into(), 1),
        ])
    }

    #[test]
    fn weighted_graded_lex() {
        let t = table_11235();
        let x5x4 = Word::from_ranks(&[4, 3], &t);
        let x3 = Word::from_ranks(&[2], &t);
        assert_eq!(x5x4.degree(), 2);
        assert_eq!(x3.degree(), 2);
        // equal degree, x5 beats x3 at the first letter
        assert_eq!(compare_words(&x5x4, &x3), Ordering::Greater);
        assert_eq!(compare_words(&x3, &x3), Ordering::Equal);
    }

    #[test]
    fn all_degree_one_order() {
        let t = VariableTable::of_degrees(&[1, 1]);
        let x2x1 = Word::from_ranks(&[1, 0], &t);
        let x1x2 = Word::from_ranks(&[0, 1], &t);
        assert_eq!(compare_words(&x2x1, &x1x2), Ordering::Greater);
    }

    #[test]
    fn substitution_expands() {
        // substitute x1 -> x3*x2 - b*x2*x3 into x2*x1 over Q with b = 2
        let t = table_11235();
        let k = FieldSpec::Rationals;
        let b = k.from_integer(2);
        let mut repl = Polynomial::monomial(Word::from_ranks(&[2, 1], &t), k.one());
        repl.add_term(Word::from_ranks(&[1, 2], &t), b.neg());
        let p = Polynomial::monomial(Word::from_ranks(&[1, 0], &t), k.one());
        let out = p.substitute(0, &repl, &t).unwrap();
        let mut expect = Polynomial::monomial(Word::from_ranks(&[1, 2, 1], &t), k.one());
        expect.add_term(Word::from_ranks(&[1, 1, 2], &t), b.neg());
        assert_eq!(out, expect);
        // a polynomial without the variable is unchanged
        let q = Polynomial::monomial(Word::from_ranks(&[3, 4], &t), k.one());
        assert_eq!(q.substitute(0, &repl, &t).unwrap(), q);
    }

    #[test]
    fn substitution_checks_degree() {
        let t = table_11235();
        let k = FieldSpec::Rationals;
        let repl = Polynomial::monomial(Word::from_ranks(&[4], &t), k.one());
        let p = Polynomial::monomial(Word::from_ranks(&[0], &t), k.one());
        assert!(matches!(
            p.substitute(0, &repl, &t),
            Err(FreeAlgError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn leading_term_of_relation() {
        let t = table_11235();
        let k = FieldSpec::Rationals;
        // x5*x4 - x4*x5 - x3
        let mut p = Polynomial::monomial(Word::from_ranks(&[4, 3], &t), k.one());
        p.add_term(Word::from_ranks(&[3, 4], &t), k.one().neg());
        p.add_term(Word::from_ranks(&[2], &t), k.one().neg());
        let (w, c) = p.leading_term().unwrap();
        assert_eq!(*w, Word::from_ranks(&[4, 3], &t));
        assert!(c.is_one());
        assert!(Polynomial::zero().leading_term().is_err());
    }

    #[test]
    fn homogeneity_propagates_under_mul() {
        let t = VariableTable::of_degrees(&[1, 1, 2]);
        let k = FieldSpec::Rationals;
        let mut p = Polynomial::monomial(Word::from_ranks(&[0, 1], &t), k.one());
        p.add_term(Word::from_ranks(&[2], &t), k.from_integer(3));
        let q = Polynomial::monomial(Word::from_ranks(&[1], &t), k.one());
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert_eq!(p.mul(&q).homogeneous_degree(), Some(3));
        assert_eq!(p.sub(&p).homogeneous_degree(), None); // zero has no degree
    }
}
