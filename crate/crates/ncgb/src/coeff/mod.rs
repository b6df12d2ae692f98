//! Exact coefficient arithmetic in three domains: the rationals, the
//! quadratic extension by a primitive cube root of unity, and multivariate
//! rational functions over the rationals with a declared set of parameters
//! that may be inverted.

pub mod mpoly;

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, Signed, Zero};
use thiserror::Error;

pub use mpoly::{gcd as mpoly_gcd, Exponents, MPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parametric coefficient `{coeff}` is not certified invertible")]
    NonInvertibleParametric { coeff: String },
}

/// Which coefficient field a presentation works over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    /// Q(w) with w^2 + w + 1 = 0.
    Cyclotomic3,
    Parametric(ParamSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSpec {
    /// Declared parameter names; index is the slot in exponent vectors.
    /// Earlier parameters are more significant in the term order.
    pub names: Vec<String>,
    /// Indices of parameters assumed nonzero (hence invertible).
    pub nonzero: Vec<usize>,
}

impl ParamSpec {
    pub fn new(names: Vec<String>, nonzero_names: &[&str]) -> Self {
        let nonzero = nonzero_names
            .iter()
            .map(|n| {
                names
                    .iter()
                    .position(|m| m == n)
                    .unwrap_or_else(|| panic!("nonzero parameter `{n}` not declared"))
            })
            .collect();
        ParamSpec { names, nonzero }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|m| m == name)
    }
}

impl FieldSpec {
    pub fn parametric(names: &[&str], nonzero: &[&str]) -> FieldSpec {
        FieldSpec::Parametric(ParamSpec::new(names.iter().map(|s| s.to_string()).collect(), nonzero))
    }

    pub fn nvars(&self) -> usize {
        match self {
            FieldSpec::Parametric(p) => p.names.len(),
            _ => 0,
        }
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            FieldSpec::Rationals => FieldElement::Rat(BigRational::zero()),
            FieldSpec::Cyclotomic3 => FieldElement::Cyc(BigRational::zero(), BigRational::zero()),
            FieldSpec::Parametric(p) => FieldElement::Par(RatFun::zero(p.names.len())),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(&self, q: BigRational) -> FieldElement {
        match self {
            FieldSpec::Rationals => FieldElement::Rat(q),
            FieldSpec::Cyclotomic3 => FieldElement::Cyc(q, BigRational::zero()),
            FieldSpec::Parametric(p) => {
                FieldElement::Par(RatFun::from_poly(MPoly::constant(p.names.len(), q)))
            }
        }
    }

    pub fn from_integer(&self, n: i64) -> FieldElement {
        self.from_rational(BigRational::from_integer(n.into()))
    }

    /// The cube-root-of-unity generator; only defined over `Cyclotomic3`.
    pub fn omega(&self) -> FieldElement {
        assert!(matches!(self, FieldSpec::Cyclotomic3), "omega needs the cyclotomic field");
        FieldElement::Cyc(BigRational::zero(), BigRational::one())
    }

    /// The parameter with the given index as a field element.
    pub fn param(&self, i: usize) -> FieldElement {
        match self {
            FieldSpec::Parametric(p) => {
                FieldElement::Par(RatFun::from_poly(MPoly::var(p.names.len(), i)))
            }
            _ => panic!("param() needs a parametric field"),
        }
    }

    pub fn param_named(&self, name: &str) -> FieldElement {
        match self {
            FieldSpec::Parametric(p) => {
                let i = p.index_of(name).unwrap_or_else(|| panic!("unknown parameter `{name}`"));
                self.param(i)
            }
            _ => panic!("param_named() needs a parametric field"),
        }
    }
}

/// Normalized rational function: the denominator is monic under the
/// graded-lex term order, gcd(num, den) = 1, and zero is 0/1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFun {
    num: MPoly,
    den: MPoly,
}

impl RatFun {
    pub fn zero(nvars: usize) -> Self {
        RatFun { num: MPoly::zero(nvars), den: MPoly::one(nvars) }
    }

    pub fn from_poly(p: MPoly) -> Self {
        let n = p.nvars();
        RatFun { num: p, den: MPoly::one(n) }
    }

    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFun { num, den };
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = MPoly::one(self.den.nvars());
            return;
        }
        let g = mpoly_gcd(&self.num, &self.den);
        if !g.is_constant() {
            self.num = self.num.div_exact(&g).expect("gcd divides");
            self.den = self.den.div_exact(&g).expect("gcd divides");
        }
        let lc = self.den.leading_coeff();
        if !lc.is_one() {
            let inv = BigRational::one() / lc;
            self.den = self.den.scale(&inv);
            self.num = self.num.scale(&inv);
        }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, other: &RatFun) -> RatFun {
        RatFun::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    fn sub(&self, other: &RatFun) -> RatFun {
        RatFun::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    fn mul(&self, other: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.den.is_one_poly() {
            self.num.display(names)
        } else {
            let n = self.num.display(names);
            let d = self.den.display(names);
            let n = if self.num.num_terms() > 1 { format!("({n})") } else { n };
            let d = if self.den.num_terms() > 1 { format!("({d})") } else { d };
            format!("{n}/{d}")
        }
    }
}

impl MPoly {
    fn is_one_poly(&self) -> bool {
        self.num_terms() == 1
            && self
                .leading()
                .map(|(e, c)| e.total() == 0 && c.is_one())
                .unwrap_or(false)
    }
}

/// An exact scalar in one of the three coefficient domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldElement {
    Rat(BigRational),
    /// a + b*w with w^2 = -1 - w.
    Cyc(BigRational, BigRational),
    Par(RatFun),
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rat(a) => a.is_zero(),
            FieldElement::Cyc(a, b) => a.is_zero() && b.is_zero(),
            FieldElement::Par(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rat(a) => a.is_one(),
            FieldElement::Cyc(a, b) => a.is_one() && b.is_zero(),
            FieldElement::Par(r) => r.den().is_one_poly() && r.num().is_one_poly(),
        }
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        match (self, other) {
            (FieldElement::Rat(a), FieldElement::Rat(b)) => FieldElement::Rat(a + b),
            (FieldElement::Cyc(a, b), FieldElement::Cyc(c, d)) => FieldElement::Cyc(a + c, b + d),
            (FieldElement::Par(a), FieldElement::Par(b)) => FieldElement::Par(a.add(b)),
            _ => panic!("mixed coefficient domains"),
        }
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        match (self, other) {
            (FieldElement::Rat(a), FieldElement::Rat(b)) => FieldElement::Rat(a - b),
            (FieldElement::Cyc(a, b), FieldElement::Cyc(c, d)) => FieldElement::Cyc(a - c, b - d),
            (FieldElement::Par(a), FieldElement::Par(b)) => FieldElement::Par(a.sub(b)),
            _ => panic!("mixed coefficient domains"),
        }
    }

    pub fn neg(&self) -> FieldElement {
        match self {
            FieldElement::Rat(a) => FieldElement::Rat(-a.clone()),
            FieldElement::Cyc(a, b) => FieldElement::Cyc(-a.clone(), -b.clone()),
            FieldElement::Par(r) => FieldElement::Par(r.neg()),
        }
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        match (self, other) {
            (FieldElement::Rat(a), FieldElement::Rat(b)) => FieldElement::Rat(a * b),
            (FieldElement::Cyc(a, b), FieldElement::Cyc(c, d)) => {
                // (a + bw)(c + dw) with w^2 = -1 - w
                let bd = b * d;
                FieldElement::Cyc(a * c - &bd, a * d + b * c - &bd)
            }
            (FieldElement::Par(a), FieldElement::Par(b)) => FieldElement::Par(a.mul(b)),
            _ => panic!("mixed coefficient domains"),
        }
    }

    /// Multiplicative inverse. In the parametric domain only certified
    /// invertible elements (rational multiples of monomials in the declared
    /// nonzero parameters) may be inverted.
    pub fn inverse(&self, spec: &FieldSpec) -> Result<FieldElement, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        match self {
            FieldElement::Rat(a) => Ok(FieldElement::Rat(BigRational::one() / a.clone())),
            FieldElement::Cyc(a, b) => {
                // (a + bw)^-1 = (a - b - bw) / (a^2 - ab + b^2)
                let norm = a * a - a * b + b * b;
                Ok(FieldElement::Cyc((a - b) / &norm, -b.clone() / &norm))
            }
            FieldElement::Par(r) => {
                if !self.is_invertible(spec) {
                    return Err(CoeffError::NonInvertibleParametric {
                        coeff: self.display(spec),
                    });
                }
                Ok(FieldElement::Par(RatFun::new(r.den().clone(), r.num().clone())))
            }
        }
    }

    pub fn div(&self, other: &FieldElement, spec: &FieldSpec) -> Result<FieldElement, CoeffError> {
        Ok(self.mul(&other.inverse(spec)?))
    }

    /// True when the element is certified invertible: nonzero over Q and
    /// Q(w); in the parametric domain, a nonzero rational times a monomial
    /// whose parameters all lie in the declared nonzero set.
    pub fn is_invertible(&self, spec: &FieldSpec) -> bool {
        match self {
            FieldElement::Rat(_) | FieldElement::Cyc(_, _) => !self.is_zero(),
            FieldElement::Par(r) => {
                if r.is_zero() {
                    return false;
                }
                let nonzero = match spec {
                    FieldSpec::Parametric(p) => &p.nonzero,
                    _ => panic!("parametric element under non-parametric spec"),
                };
                let certified_monomial = |p: &MPoly| {
                    p.is_monomial()
                        && p.leading()
                            .map(|(e, _)| {
                                e.0.iter()
                                    .enumerate()
                                    .all(|(i, &x)| x == 0 || nonzero.contains(&i))
                            })
                            .unwrap_or(false)
                };
                certified_monomial(r.num()) && certified_monomial(r.den())
            }
        }
    }

    /// Canonical sign used to orient reported polynomials: negative means
    /// the element flips under the domain's sign normalization.
    pub fn canonical_sign_is_negative(&self) -> bool {
        match self {
            FieldElement::Rat(a) => a.is_negative(),
            FieldElement::Cyc(a, b) => {
                if !a.is_zero() {
                    a.is_negative()
                } else {
                    b.is_negative()
                }
            }
            FieldElement::Par(r) => r.num().leading_coeff().is_negative(),
        }
    }

    /// Substitute rational values for every parameter, landing in Q.
    /// Panics if a denominator vanishes under the assignment.
    pub fn eval_rational(&self, values: &[BigRational]) -> BigRational {
        match self {
            FieldElement::Rat(a) => a.clone(),
            FieldElement::Cyc(_, _) => panic!("cannot evaluate a cyclotomic element rationally"),
            FieldElement::Par(r) => {
                let d = r.den().eval(values);
                assert!(!d.is_zero(), "denominator vanished under substitution");
                r.num().eval(values) / d
            }
        }
    }

    /// Substitute rational functions for selected parameters, staying in the
    /// same parametric field. Unlisted parameters map to themselves.
    pub fn substitute_params(
        &self,
        spec: &FieldSpec,
        assignment: &BTreeMap<usize, FieldElement>,
    ) -> FieldElement {
        let FieldElement::Par(r) = self else {
            return self.clone();
        };
        let n = spec.nvars();
        let repl: Vec<RatFun> = (0..n)
            .map(|i| match assignment.get(&i) {
                Some(FieldElement::Par(f)) => f.clone(),
                Some(_) => panic!("substitution value must be parametric"),
                None => RatFun::from_poly(MPoly::var(n, i)),
            })
            .collect();
        let expand = |p: &MPoly| -> RatFun {
            let mut acc = RatFun::zero(n);
            for (e, c) in p.terms() {
                let mut term = RatFun::from_poly(MPoly::constant(n, c.clone()));
                for (i, &pow) in e.0.iter().enumerate() {
                    for _ in 0..pow {
                        term = term.mul(&repl[i]);
                    }
                }
                acc = acc.add(&term);
            }
            acc
        };
        let num = expand(r.num());
        let den = expand(r.den());
        assert!(!den.is_zero(), "denominator vanished under substitution");
        FieldElement::Par(RatFun::new(
            num.num().mul(den.den()),
            num.den().mul(den.num()),
        ))
    }

    /// Approximate complex value with w = exp(2*pi*i/3); used only by
    /// floating-point sanity checks.
    pub fn to_complex(&self) -> (f64, f64) {
        match self {
            FieldElement::Rat(a) => (rat_to_f64(a), 0.0),
            FieldElement::Cyc(a, b) => {
                let (wa, wb) = (-0.5, 3f64.sqrt() / 2.0);
                let bf = rat_to_f64(b);
                (rat_to_f64(a) + bf * wa, bf * wb)
            }
            FieldElement::Par(_) => panic!("no numeric value for parametric elements"),
        }
    }

    pub fn display(&self, spec: &FieldSpec) -> String {
        match self {
            FieldElement::Rat(a) => a.to_string(),
            FieldElement::Cyc(a, b) => {
                if b.is_zero() {
                    a.to_string()
                } else if a.is_zero() {
                    if b.is_one() {
                        "w".into()
                    } else if (-b.clone()).is_one() {
                        "-w".into()
                    } else {
                        format!("{b}*w")
                    }
                } else {
                    let sign = if b.is_negative() { "-" } else { "+" };
                    let mag = b.abs();
                    if mag.is_one() {
                        format!("{a} {sign} w")
                    } else {
                        format!("{a} {sign} {mag}*w")
                    }
                }
            }
            FieldElement::Par(r) => {
                let FieldSpec::Parametric(p) = spec else {
                    panic!("parametric element under non-parametric spec")
                };
                r.display(&p.names)
            }
        }
    }
}

fn rat_to_f64(q: &BigRational) -> f64 {
    let n: f64 = q.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = q.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rat(a) => write!(f, "{a}"),
            FieldElement::Cyc(_, _) => write!(f, "{}", self.display(&FieldSpec::Cyclotomic3)),
            FieldElement::Par(r) => {
                // without a spec we cannot name parameters; index them
                let names: Vec<String> = (0..r.num().nvars()).map(|i| format!("p{i}")).collect();
                write!(f, "{}", r.display(&names))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn omega_cubed_is_one() {
        let k = FieldSpec::Cyclotomic3;
        let w = k.omega();
        let w2 = w.mul(&w);
        assert_eq!(w.mul(&w2), k.one());
        // w^2 = -1 - w
        assert_eq!(w2, FieldElement::Cyc(q(-1, 1), q(-1, 1)));
    }

    #[test]
    fn cyclotomic_constant_from_cube_root() {
        // with b = w^2, 2b^2/(1 - b + b^2) = -b
        let k = FieldSpec::Cyclotomic3;
        let w = k.omega();
        let b = w.mul(&w);
        let b2 = b.mul(&b);
        let denom = k.one().sub(&b).add(&b2);
        let c = k.from_integer(2).mul(&b2).div(&denom, &k).unwrap();
        assert_eq!(c, b.neg());
    }

    #[test]
    fn cyclotomic_inverse() {
        let k = FieldSpec::Cyclotomic3;
        let w = k.omega();
        let x = k.from_integer(3).add(&w.mul(&k.from_integer(2)));
        let inv = x.inverse(&k).unwrap();
        assert_eq!(x.mul(&inv), k.one());
        assert_eq!(w.inverse(&k).unwrap(), w.mul(&w));
    }

    #[test]
    fn parametric_normalization() {
        // (e1*h1 - d1*i1)/b1 keeps denominator b1
        let k = FieldSpec::parametric(&["b1", "d1", "e1", "g1", "h1", "i1"], &["b1"]);
        let e1 = k.param_named("e1");
        let h1 = k.param_named("h1");
        let d1 = k.param_named("d1");
        let i1 = k.param_named("i1");
        let b1 = k.param_named("b1");
        let g1 = e1.mul(&h1).sub(&d1.mul(&i1)).div(&b1, &k).unwrap();
        assert_eq!(g1.display(&k), "(-d1*i1 + e1*h1)/b1");
        // b1 * g1 + d1*i1 - e1*h1 = 0
        let back = b1.mul(&g1).add(&d1.mul(&i1)).sub(&e1.mul(&h1));
        assert!(back.is_zero());
    }

    #[test]
    fn parametric_invertibility_is_syntactic() {
        let k = FieldSpec::parametric(&["e1", "i1"], &["i1"]);
        let i1 = k.param_named("i1");
        let e1 = k.param_named("e1");
        assert!(i1.is_invertible(&k));
        assert!(!e1.is_invertible(&k));
        assert!(!k.zero().is_invertible(&k));
        assert!(i1.mul(&i1).mul(&k.from_integer(-3)).is_invertible(&k));
        assert!(!i1.add(&e1).is_invertible(&k));
        assert!(e1.mul(&i1).div(&i1, &k).is_err() == false);
        // division BY e1 is refused even though e1 is generically nonzero
        assert!(i1.div(&e1, &k).is_err());
    }

    #[test]
    fn rational_div_by_zero() {
        let k = FieldSpec::Rationals;
        assert_eq!(k.one().div(&k.zero(), &k), Err(CoeffError::DivisionByZero));
        assert_eq!(k.from_rational(q(3, 7)).is_invertible(&k), true);
    }
}
