//! Truncated power-series arithmetic, Hilbert series of weighted free and
//! weighted commutative algebras, irreducible-word counting for monomial
//! quotients, Hilbert-driven relation counting, and the alternating Betti
//! polynomial of the length-five symmetric resolution shape.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, One, Zero};
use thiserror::Error;

use crate::freealg::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbertError {
    #[error("series inverse needs constant term 1, found {found}")]
    NonUnitConstantTerm { found: BigInt },
    #[error("negative predicted relation count {count} at degree {degree}")]
    NegativeCount { degree: u32, count: BigInt },
}

/// Integer power series truncated at order `N`: `coeffs[d]` is the degree-d
/// coefficient and `len() == N + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigInt>,
}

impl PowerSeries {
    pub fn zero(order: u32) -> Self {
        PowerSeries { coeffs: vec![BigInt::zero(); order as usize + 1] }
    }

    pub fn one(order: u32) -> Self {
        let mut s = PowerSeries::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty());
        PowerSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        PowerSeries::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn order(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeff(&self, d: u32) -> &BigInt {
        &self.coeffs[d as usize]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn truncate(&self, order: u32) -> PowerSeries {
        assert!(order <= self.order(), "cannot extend a truncated series");
        PowerSeries { coeffs: self.coeffs[..=order as usize].to_vec() }
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: (0..=n as usize).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: (0..=n as usize).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order()) as usize;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if !other.coeffs[j].is_zero() {
                    coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
                }
            }
        }
        PowerSeries { coeffs }
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }
}

/// Truncated multiplicative inverse; `s * inverse(s)` is 1 through the
/// truncation order.
pub fn series_inverse(s: &PowerSeries) -> Result<PowerSeries, HilbertError> {
    if !s.coeffs[0].is_one() {
        return Err(HilbertError::NonUnitConstantTerm { found: s.coeffs[0].clone() });
    }
    let n = s.coeffs.len();
    let mut inv = vec![BigInt::zero(); n];
    inv[0] = BigInt::one();
    for d in 1..n {
        let mut acc = BigInt::zero();
        for k in 1..=d {
            if !s.coeffs[k].is_zero() {
                acc += &s.coeffs[k] * &inv[d - k];
            }
        }
        inv[d] = -acc;
    }
    Ok(PowerSeries { coeffs: inv })
}

/// Hilbert series of the weighted commutative polynomial ring: the
/// truncated expansion of `1 / prod_i (1 - t^{d_i})`.
pub fn series_weighted_poly(degrees: &[u32], order: u32) -> PowerSeries {
    let mut s = PowerSeries::one(order);
    for &d in degrees {
        // multiply by 1/(1 - t^d) in place: running sums with stride d
        let d = d as usize;
        for i in d..s.coeffs.len() {
            let prev = s.coeffs[i - d].clone();
            s.coeffs[i] += prev;
        }
    }
    s
}

/// Hilbert series of the free algebra on weighted generators:
/// `1 / (1 - sum_i t^{d_i})`, counting all words.
pub fn series_free(degrees: &[u32], order: u32) -> PowerSeries {
    let mut s = PowerSeries::one(order);
    for i in 1..s.coeffs.len() {
        let mut acc = BigInt::zero();
        for &d in degrees {
            let d = d as usize;
            if d <= i {
                acc += &s.coeffs[i - d];
            }
        }
        s.coeffs[i] = acc;
    }
    s
}

/// Subword-avoidance automaton: states are proper prefixes of the forbidden
/// words, transitions follow the longest-suffix (failure link) rule, and
/// any state whose string contains a forbidden word is dead.
struct SubwordAutomaton {
    /// delta[state][letter] = Some(next) or None when the extension hits a
    /// forbidden subword.
    delta: Vec<Vec<Option<usize>>>,
}

impl SubwordAutomaton {
    fn build(leads: &[Word], n_letters: usize) -> Self {
        // trie over the forbidden words
        let mut children: Vec<Vec<Option<usize>>> = vec![vec![None; n_letters]];
        let mut terminal: Vec<bool> = vec![false];
        for lead in leads {
            let mut cur = 0usize;
            for l in lead.letters() {
                cur = match children[cur][l] {
                    Some(next) => next,
                    None => {
                        children.push(vec![None; n_letters]);
                        terminal.push(false);
                        let next = children.len() - 1;
                        children[cur][l] = Some(next);
                        next
                    }
                };
            }
            terminal[cur] = true;
        }
        // breadth-first failure links; a node is dead if it or any suffix
        // state is terminal
        let n = children.len();
        let mut fail = vec![0usize; n];
        let mut dead = terminal.clone();
        let mut queue: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        let mut order: Vec<usize> = Vec::new();
        for a in 0..n_letters {
            if let Some(c) = children[0][a] {
                fail[c] = 0;
                queue.push_back(c);
            }
        }
        while let Some(s) = queue.pop_front() {
            order.push(s);
            dead[s] = dead[s] || dead[fail[s]];
            for a in 0..n_letters {
                if let Some(c) = children[s][a] {
                    // longest proper suffix of (s, a) present in the trie
                    let mut f = fail[s];
                    let fc = loop {
                        if let Some(fc) = children[f][a] {
                            break fc;
                        }
                        if f == 0 {
                            break 0;
                        }
                        f = fail[f];
                    };
                    fail[c] = if fc == c { 0 } else { fc };
                    queue.push_back(c);
                }
            }
        }
        // full transition table with dead states removed
        let mut delta = vec![vec![None; n_letters]; n];
        // compute goto for the root and propagate in BFS order
        for a in 0..n_letters {
            let target = children[0][a].unwrap_or(0);
            delta[0][a] = (!dead[target]).then_some(target);
        }
        for &s in &order {
            for a in 0..n_letters {
                let target = match children[s][a] {
                    Some(c) => c,
                    None => {
                        // inherited from the failure state; resolved already
                        // since `order` is breadth-first
                        match delta[fail[s]][a] {
                            Some(t) => t,
                            None => {
                                delta[s][a] = None;
                                continue;
                            }
                        }
                    }
                };
                delta[s][a] = (!dead[target]).then_some(target);
            }
        }
        SubwordAutomaton { delta }
    }
}

/// Count, for each degree up to `order`, the words over the weighted
/// alphabet that avoid every word of `leads` as a subword. Dynamic
/// programming over (automaton state, accumulated degree) with exact
/// integers.
pub fn count_irreducible(leads: &[Word], degrees: &[u32], order: u32) -> PowerSeries {
    let auto = SubwordAutomaton::build(leads, degrees.len());
    let n_states = auto.delta.len();
    let n = order as usize;
    let mut counts = vec![BigInt::zero(); n + 1];
    // dp[d][s] = number of irreducible words of degree d ending in state s
    let mut dp = vec![vec![BigInt::zero(); n_states]; n + 1];
    if leads.iter().any(|l| l.is_one()) {
        // the empty word is forbidden: nothing is irreducible
        return PowerSeries { coeffs: counts };
    }
    dp[0][0] = BigInt::one();
    for d in 0..=n {
        for s in 0..n_states {
            if dp[d][s].is_zero() {
                continue;
            }
            counts[d] += &dp[d][s];
            for (a, &deg) in degrees.iter().enumerate() {
                let d2 = d + deg as usize;
                if d2 > n {
                    continue;
                }
                if let Some(s2) = auto.delta[s][a] {
                    let add = dp[d][s].clone();
                    dp[d2][s2] += add;
                }
            }
        }
    }
    PowerSeries { coeffs: counts }
}

/// Hilbert-driven prediction of how many new leading words the completed
/// basis must acquire at each degree: the irreducible-word count over the
/// leads supplied so far, minus the target series, read degree by degree.
/// Degrees with count zero are omitted from the result.
pub fn hilbert_driven_counts(
    leads_by_degree: &BTreeMap<u32, BTreeSet<Word>>,
    degrees: &[u32],
    target: &PowerSeries,
    order: u32,
) -> Result<BTreeMap<u32, u64>, HilbertError> {
    assert!(target.order() >= order, "target series too short");
    let mut out = BTreeMap::new();
    for d in 1..=order {
        let leads: Vec<Word> = leads_by_degree
            .range(..=d)
            .flat_map(|(_, set)| set.iter().cloned())
            .collect();
        let have = count_irreducible(&leads, degrees, d);
        let diff = have.coeff(d) - target.coeff(d);
        if diff < BigInt::zero() {
            return Err(HilbertError::NegativeCount { degree: d, count: diff });
        }
        if !diff.is_zero() {
            let count: u64 = diff.to_string().parse().expect("count fits u64");
            out.insert(d, count);
        }
    }
    Ok(out)
}

/// The alternating sum of the length-five symmetric free resolution with
/// `b` degree-one generators, relation degrees `rel_type`, and total shift
/// `l`:  `1 - b t + sum t^{a_i} - sum t^{l-a_i} + b t^{l-1} - t^l`.
pub fn q_from_resolution(b: u32, rel_type: &[u32], l: u32, order: u32) -> PowerSeries {
    assert!(order >= l, "order must reach the total shift");
    assert!(rel_type.iter().all(|&a| a < l), "shift must exceed every relation degree");
    let mut s = PowerSeries::zero(order);
    let mut add = |d: u32, v: i64| {
        s.coeffs[d as usize] += BigInt::from(v);
    };
    add(0, 1);
    add(1, -(b as i64));
    for &a in rel_type {
        add(a, 1);
        add(l - a, -1);
    }
    add(l - 1, b as i64);
    add(l, -1);
    s
}

/// Search for the unique total shift `l` making
/// `q_from_resolution(b, rel_type, l) * target = 1`; scans every feasible
/// `l` up to the target's truncation order.
pub fn solve_shift(b: u32, rel_type: &[u32], target: &PowerSeries) -> Option<u32> {
    let order = target.order();
    let min_l = rel_type.iter().max().map(|&a| a + 1).unwrap_or(2);
    (min_l..=order).find(|&l| {
        let q = q_from_resolution(b, rel_type, l, order);
        q.mul(target).is_one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::VariableTable;

    #[test]
    fn weighted_poly_series_baseline() {
        let s = series_weighted_poly(&[1, 1, 1, 1, 2], 3);
        assert_eq!(s, PowerSeries::from_i64(&[1, 4, 11, 24]));
        assert_eq!(series_weighted_poly(&[1], 4), PowerSeries::from_i64(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn free_series_baseline() {
        assert_eq!(series_free(&[1, 1, 1, 1], 3), PowerSeries::from_i64(&[1, 4, 16, 64]));
        assert_eq!(series_free(&[1], 5), PowerSeries::from_i64(&[1, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn inverse_round_trip() {
        let s = PowerSeries::from_i64(&[1, -3, 1, 5, -5, -1, 3, -1]);
        let inv = series_inverse(&s).unwrap();
        assert!(s.mul(&inv).is_one());
        assert_eq!(series_inverse(&inv).unwrap(), s);
        let id = PowerSeries::from_i64(&[1, 0, 0, 0]);
        assert_eq!(series_inverse(&id).unwrap(), id);
        let bad = PowerSeries::from_i64(&[2, 1]);
        assert!(series_inverse(&bad).is_err());
    }

    #[test]
    fn irreducible_counts_match_quoted_values() {
        // degree-one variables x2<x3<x4<x5, ranks 0..=3
        let t = VariableTable::of_degrees(&[1, 1, 1, 1]);
        let w = |ranks: &[usize]| Word::from_ranks(ranks, &t);
        // {x3x2, x4x3, x4x2, x5x4, x5x3}: 1, 4, 11, 28
        let leads = vec![w(&[1, 0]), w(&[2, 1]), w(&[2, 0]), w(&[3, 2]), w(&[3, 1])];
        assert_eq!(count_irreducible(&leads, &[1, 1, 1, 1], 3), PowerSeries::from_i64(&[1, 4, 11, 28]));
        // {x4x3, x4x2, x5x4, x5x3, x5x2}: 1, 4, 11, 26
        let leads = vec![w(&[2, 1]), w(&[2, 0]), w(&[3, 2]), w(&[3, 1]), w(&[3, 0])];
        assert_eq!(count_irreducible(&leads, &[1, 1, 1, 1], 3), PowerSeries::from_i64(&[1, 4, 11, 26]));
        // no forbidden words: the free series
        assert_eq!(count_irreducible(&[], &[1, 1, 1, 1], 3), series_free(&[1, 1, 1, 1], 3));
    }

    #[test]
    fn hilbert_driven_quoted_counts() {
        let t = VariableTable::of_degrees(&[1, 1, 1, 1]);
        let w = |ranks: &[usize]| Word::from_ranks(ranks, &t);
        let target = series_weighted_poly(&[1, 1, 1, 1, 2], 3);
        let mut by_degree = BTreeMap::new();
        by_degree.insert(
            2,
            BTreeSet::from([w(&[1, 0]), w(&[2, 1]), w(&[2, 0]), w(&[3, 2]), w(&[3, 1])]),
        );
        let counts = hilbert_driven_counts(&by_degree, &[1, 1, 1, 1], &target, 3).unwrap();
        assert_eq!(counts, BTreeMap::from([(3, 4)]));
        // all six commutators against the commutative target: nothing missing
        let commutative_target = series_weighted_poly(&[1, 1, 1, 1], 3);
        let mut full = BTreeMap::new();
        full.insert(
            2,
            BTreeSet::from([
                w(&[1, 0]),
                w(&[2, 0]),
                w(&[2, 1]),
                w(&[3, 0]),
                w(&[3, 1]),
                w(&[3, 2]),
            ]),
        );
        let counts = hilbert_driven_counts(&full, &[1, 1, 1, 1], &commutative_target, 3).unwrap();
        assert!(counts.is_empty());
    }

    #[test]
    fn q_polynomials_from_resolution() {
        assert_eq!(
            q_from_resolution(3, &[2, 3, 3, 3, 3, 3], 7, 7),
            PowerSeries::from_i64(&[1, -3, 1, 5, -5, -1, 3, -1])
        );
        assert_eq!(
            q_from_resolution(3, &[2, 2, 3], 8, 8),
            PowerSeries::from_i64(&[1, -3, 2, 1, 0, -1, -2, 3, -1])
        );
        assert_eq!(
            q_from_resolution(2, &[], 4, 4),
            PowerSeries::from_i64(&[1, -2, 0, 2, -1])
        );
    }

    #[test]
    fn shift_recovery() {
        let target = series_weighted_poly(&[1, 1, 1, 2, 2], 12);
        assert_eq!(solve_shift(3, &[2, 3, 3, 3, 3, 3], &target), Some(7));
        let target = series_weighted_poly(&[1, 1, 1, 2, 3], 12);
        assert_eq!(solve_shift(3, &[2, 2, 3], &target), Some(8));
        assert_eq!(solve_shift(3, &[2, 2, 2], &target), None);
    }

    #[test]
    fn empty_word_forbidden_kills_everything() {
        let leads = vec![Word::one()];
        let s = count_irreducible(&leads, &[1, 1], 3);
        assert_eq!(s, PowerSeries::from_i64(&[0, 0, 0, 0]));
    }
}
