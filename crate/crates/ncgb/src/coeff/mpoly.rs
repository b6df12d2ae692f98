//! Sparse multivariate polynomials over the rationals.
//!
//! These back the parametric coefficient domain. Terms are kept in a map
//! keyed by exponent vector under graded lexicographic order (earlier
//! parameter = more significant), so the leading term is the last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::{BigRational, One, Signed, Zero};

/// Exponent vector of a term. All vectors in one polynomial ring have the
/// same length (one slot per declared parameter).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponents(pub Vec<u32>);

impl Exponents {
    pub fn zero(nvars: usize) -> Self {
        Exponents(vec![0; nvars])
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise division; `None` when some exponent would go negative.
    fn div(&self, other: &Exponents) -> Option<Exponents> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponents)
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            // higher power of an earlier parameter wins the tie
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` parameters with rational coefficients.
/// No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Exponents::zero(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = Exponents::zero(nvars);
        e.0[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: BigRational) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().total() == 0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading (greatest) term under the graded-lex order.
    pub fn leading(&self) -> Option<(&Exponents, &BigRational)> {
        self.terms.last_key_value()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.mul(eb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = BigRational::one() / lc.clone();
                self.scale(&inv)
            }
        }
    }

    /// Exact division: returns `Some(q)` with `self = q * g`, or `None` when
    /// the division is not exact.
    pub fn div_exact(&self, g: &MPoly) -> Option<MPoly> {
        assert!(!g.is_zero(), "division by zero polynomial");
        let (ge, gc) = g.leading().unwrap();
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            let qe = re.div(ge)?;
            let qc = rc / gc;
            quot.add_term(qe.clone(), qc.clone());
            let piece = g.mul(&MPoly::monomial(self.nvars, qe, qc));
            rem = rem.sub(&piece);
        }
        Some(quot)
    }

    /// Substitute rational values for all parameters.
    pub fn eval(&self, values: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &p) in e.0.iter().enumerate() {
                for _ in 0..p {
                    term *= &values[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitute a polynomial for each parameter (used by scenario
    /// specialization; replacements indexed by parameter).
    pub fn compose(&self, replacements: &[MPoly]) -> MPoly {
        let target_nvars = replacements.first().map(|p| p.nvars).unwrap_or(self.nvars);
        let mut acc = MPoly::zero(target_nvars);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(acc.nvars, c.clone());
            for (i, &p) in e.0.iter().enumerate() {
                for _ in 0..p {
                    term = term.mul(&replacements[i]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    fn degree_in(&self, x: usize) -> u32 {
        self.terms.keys().map(|e| e.0[x]).max().unwrap_or(0)
    }

    /// Highest parameter index occurring in `self` or `other`.
    fn main_var_with(&self, other: &MPoly) -> Option<usize> {
        (0..self.nvars)
            .rev()
            .find(|&x| self.degree_in(x) > 0 || other.degree_in(x) > 0)
    }

    /// Coefficient of x^k viewed as univariate in parameter `x`.
    fn coeff_of_power(&self, x: usize, k: u32) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.0[x] == k {
                let mut e2 = e.clone();
                e2.0[x] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    fn mul_by_power(&self, x: usize, k: u32) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.0[x] += k;
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Content with respect to `x`: monic gcd of the univariate coefficients.
    fn content_wrt(&self, x: usize) -> MPoly {
        let mut cont = MPoly::zero(self.nvars);
        for k in 0..=self.degree_in(x) {
            let c = self.coeff_of_power(x, k);
            if !c.is_zero() {
                cont = gcd(&cont, &c);
                if cont.is_constant() {
                    break;
                }
            }
        }
        cont
    }

    fn pseudo_rem(&self, g: &MPoly, x: usize) -> MPoly {
        let dg = g.degree_in(x);
        let lcg = g.coeff_of_power(x, dg);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(x) >= dg {
            let dr = r.degree_in(x);
            let lcr = r.coeff_of_power(x, dr);
            r = lcg.mul(&r).sub(&lcr.mul_by_power(x, dr - dg).mul(g));
        }
        r
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || e.total() == 0 {
                factors.push(mag.to_string());
            }
            for (j, &p) in e.0.iter().enumerate() {
                if p == 1 {
                    factors.push(names[j].clone());
                } else if p > 1 {
                    factors.push(format!("{}^{}", names[j], p));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Monic gcd. Monomial arguments take a componentwise-minimum fast path;
/// the general case runs a primitive Euclidean remainder sequence on the
/// highest parameter present.
pub fn gcd(f: &MPoly, g: &MPoly) -> MPoly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.is_monomial() || g.is_monomial() {
        let (m, p) = if f.is_monomial() { (f, g) } else { (g, f) };
        let me = m.leading().unwrap().0;
        let mut mins = me.0.clone();
        for (e, _) in p.terms() {
            for (slot, pe) in mins.iter_mut().zip(&e.0) {
                *slot = (*slot).min(*pe);
            }
        }
        return MPoly::monomial(f.nvars, Exponents(mins), BigRational::one());
    }
    match f.main_var_with(g) {
        None => MPoly::one(f.nvars),
        Some(x) => {
            let cf = f.content_wrt(x);
            let cg = g.content_wrt(x);
            let cont = gcd(&cf, &cg);
            let mut a = f.div_exact(&cf).expect("content divides");
            let mut b = g.div_exact(&cg).expect("content divides");
            if a.degree_in(x) < b.degree_in(x) {
                std::mem::swap(&mut a, &mut b);
            }
            loop {
                let r = a.pseudo_rem(&b, x);
                if r.is_zero() {
                    break;
                }
                let rc = r.content_wrt(x);
                a = b;
                b = r.div_exact(&rc).expect("content divides");
            }
            // b may have picked up content in x-free parameters
            let bc = b.content_wrt(x);
            let prim = b.div_exact(&bc).expect("content divides");
            cont.mul(&prim).monic()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn v(i: usize) -> MPoly {
        MPoly::var(3, i)
    }

    #[test]
    fn graded_lex_order() {
        // a > b > c in significance; a*c vs b^2: same degree, a wins
        let ac = Exponents(vec![1, 0, 1]);
        let bb = Exponents(vec![0, 2, 0]);
        assert!(ac > bb);
        let c3 = Exponents(vec![0, 0, 3]);
        assert!(c3 > ac); // higher total degree
    }

    #[test]
    fn exact_division_roundtrip() {
        let f = v(0).add(&v(1)); // a + b
        let g = v(0).sub(&v(2)).add(&MPoly::constant(3, q(2))); // a - c + 2
        let prod = f.mul(&g);
        assert_eq!(prod.div_exact(&f).unwrap(), g);
        assert_eq!(prod.div_exact(&g).unwrap(), f);
        assert!(f.div_exact(&g).is_none());
    }

    #[test]
    fn gcd_of_products() {
        let f = v(0).add(&v(1)); // a + b
        let g = v(1).add(&v(2)); // b + c
        let h = v(0).sub(&v(1)); // a - b
        let fg = f.mul(&g);
        let fh = f.mul(&h);
        assert_eq!(gcd(&fg, &fh), f.monic());
        assert_eq!(gcd(&g, &h), MPoly::one(3));
    }

    #[test]
    fn gcd_monomial_fast_path() {
        // gcd(2 a^2 b, 4 a b c) = a b
        let m1 = MPoly::monomial(3, Exponents(vec![2, 1, 0]), q(2));
        let m2 = MPoly::monomial(3, Exponents(vec![1, 1, 1]), q(4));
        assert_eq!(gcd(&m1, &m2), MPoly::monomial(3, Exponents(vec![1, 1, 0]), q(1)));
        // gcd(a b, a^2 - a b) = a
        let p = v(0).mul(&v(0)).sub(&v(0).mul(&v(1)));
        let m = v(0).mul(&v(1));
        assert_eq!(gcd(&m, &p), v(0));
    }

    #[test]
    fn eval_matches_structure() {
        let p = v(0).mul(&v(1)).add(&MPoly::constant(3, q(5)));
        let vals = [q(2), q(3), q(7)];
        assert_eq!(p.eval(&vals), q(11));
    }
}
