//! Exact rank computation by fraction-free (Bareiss) elimination.
//!
//! Works over all three coefficient domains. Parametric entries are cleared
//! to polynomials row by row, every division in the elimination is exact
//! polynomial division, and pivots are only required to be nonzero — not
//! certified invertible — so the rank is computed over the full rational
//! function field. Certification of the final pivot minor is reported
//! separately so callers can distinguish "full rank for every admissible
//! parameter value" from "full rank generically".

use crate::coeff::{FieldElement, FieldSpec, RatFun};

#[derive(Debug, Clone)]
pub struct RankOutcome {
    pub rank: usize,
    /// Determinant of the pivot submatrix (the last Bareiss pivot), up to
    /// sign from row swaps; present when rank > 0.
    pub pivot_minor: Option<FieldElement>,
    /// Whether the pivot minor is certified invertible under the spec, so
    /// the rank cannot drop under any admissible parameter specialization.
    pub certified: bool,
    /// When some input row is a combination of the others: coefficients of
    /// one vanishing combination, indexed like the input rows.
    pub dependency: Option<Vec<FieldElement>>,
}

/// Multiply through by denominators so parametric entries are polynomials;
/// row scaling by a nonzero element preserves rank and dependencies up to
/// scale.
fn clear_row(row: &mut [FieldElement], spec: &FieldSpec) {
    if !matches!(spec, FieldSpec::Parametric(_)) {
        return;
    }
    let mut scale = spec.one();
    for e in row.iter() {
        if let FieldElement::Par(r) = e {
            if !r.den().is_constant() {
                scale = scale.mul(&FieldElement::Par(RatFun::from_poly(r.den().clone())));
            }
        }
    }
    if !scale.is_one() {
        for e in row.iter_mut() {
            *e = e.mul(&scale);
        }
    }
}

/// Exact division valid inside Bareiss steps: ordinary field division over
/// Q and Q(w); exact polynomial division of numerators in the parametric
/// domain (entries there are denominator-free by construction).
fn exact_div(a: &FieldElement, b: &FieldElement) -> FieldElement {
    match (a, b) {
        (FieldElement::Par(x), FieldElement::Par(y)) => {
            // cleared rows keep denominators at 1 throughout the sweep
            debug_assert!(x.den().is_constant() && y.den().is_constant());
            let num = x.num().div_exact(y.num()).expect("Bareiss division is exact");
            FieldElement::Par(RatFun::from_poly(num))
        }
        (FieldElement::Rat(x), FieldElement::Rat(y)) => FieldElement::Rat(x / y),
        (FieldElement::Cyc(_, _), FieldElement::Cyc(_, _)) => {
            a.mul(&b.inverse(&FieldSpec::Cyclotomic3).expect("nonzero pivot"))
        }
        _ => panic!("mixed domains in elimination"),
    }
}

/// Fraction-free Gaussian elimination with an identity block carried along
/// to recover a vanishing row combination when the rows are dependent.
pub fn rank_with_certificate(rows: Vec<Vec<FieldElement>>, spec: &FieldSpec) -> RankOutcome {
    let m = rows.len();
    if m == 0 {
        return RankOutcome { rank: 0, pivot_minor: None, certified: true, dependency: None };
    }
    let n = rows[0].len();
    // augment [A | I]
    let mut a: Vec<Vec<FieldElement>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            assert_eq!(row.len(), n, "ragged matrix");
            clear_row(&mut row, spec);
            for k in 0..m {
                row.push(if k == i { spec.one() } else { spec.zero() });
            }
            row
        })
        .collect();

    let width = n + m;
    let mut prev_pivot = spec.one();
    let mut pivot_row = 0usize;
    let mut last_pivot: Option<FieldElement> = None;
    for col in 0..n {
        if pivot_row >= m {
            break;
        }
        // prefer a certified-invertible pivot so certificates survive
        let found = (pivot_row..m)
            .find(|&r| a[r][col].is_invertible(spec))
            .or_else(|| (pivot_row..m).find(|&r| !a[r][col].is_zero()));
        let Some(r) = found else {
            continue;
        };
        a.swap(pivot_row, r);
        let pivot = a[pivot_row][col].clone();
        // every row below is rescaled, factor zero or not: the one-step
        // division stays exact only on the fully updated matrix
        for i in pivot_row + 1..m {
            let factor = a[i][col].clone();
            for j in 0..width {
                let num = pivot.mul(&a[i][j]).sub(&factor.mul(&a[pivot_row][j]));
                a[i][j] = if num.is_zero() { spec.zero() } else { exact_div(&num, &prev_pivot) };
            }
        }
        prev_pivot = pivot.clone();
        last_pivot = Some(pivot);
        pivot_row += 1;
    }

    let rank = pivot_row;
    let dependency = a[rank..].iter().find_map(|row| {
        row[..n]
            .iter()
            .all(|e| e.is_zero())
            .then(|| row[n..].to_vec())
    });
    let certified = match &last_pivot {
        Some(p) => p.is_invertible(spec),
        None => true,
    };
    RankOutcome { rank, pivot_minor: last_pivot, certified, dependency }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: &FieldSpec, n: i64) -> FieldElement {
        k.from_integer(n)
    }

    #[test]
    fn full_rank_rational() {
        let k = FieldSpec::Rationals;
        let rows = vec![
            vec![q(&k, 2), q(&k, 1)],
            vec![q(&k, 1), q(&k, 1)],
        ];
        let out = rank_with_certificate(rows, &k);
        assert_eq!(out.rank, 2);
        assert!(out.certified);
        assert!(out.dependency.is_none());
    }

    #[test]
    fn dependent_rows_produce_a_combination() {
        let k = FieldSpec::Rationals;
        let rows = vec![
            vec![q(&k, 1), q(&k, 2), q(&k, 3)],
            vec![q(&k, 2), q(&k, 4), q(&k, 6)],
            vec![q(&k, 0), q(&k, 1), q(&k, 1)],
        ];
        let out = rank_with_certificate(rows.clone(), &k);
        assert_eq!(out.rank, 2);
        let dep = out.dependency.expect("dependency");
        // check the combination really vanishes
        for col in 0..3 {
            let mut acc = k.zero();
            for (i, c) in dep.iter().enumerate() {
                acc = acc.add(&c.mul(&rows[i][col]));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn identically_singular_parametric_matrix() {
        // rows (-e7*h1, e7*i1), (-d7*h1, d7*i1): rank 1 whatever the values
        let k = FieldSpec::parametric(&["d7", "e7", "h1", "i1"], &["i1"]);
        let e7 = k.param_named("e7");
        let d7 = k.param_named("d7");
        let h1 = k.param_named("h1");
        let i1 = k.param_named("i1");
        let rows = vec![
            vec![e7.mul(&h1).neg(), e7.mul(&i1)],
            vec![d7.mul(&h1).neg(), d7.mul(&i1)],
        ];
        let out = rank_with_certificate(rows.clone(), &k);
        assert_eq!(out.rank, 1);
        let dep = out.dependency.expect("dependency");
        for col in 0..2 {
            let mut acc = k.zero();
            for (i, c) in dep.iter().enumerate() {
                acc = acc.add(&c.mul(&rows[i][col]));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn generic_full_rank_is_not_certified() {
        // [[e7, 0], [0, i1]] with only i1 declared nonzero: full rank
        // generically but the determinant e7*i1 is not certified
        let k = FieldSpec::parametric(&["e7", "i1"], &["i1"]);
        let rows = vec![
            vec![k.param_named("e7"), k.zero()],
            vec![k.zero(), k.param_named("i1")],
        ];
        let out = rank_with_certificate(rows, &k);
        assert_eq!(out.rank, 2);
        assert!(!out.certified);
    }

    #[test]
    fn certified_diagonal() {
        let k = FieldSpec::parametric(&["e7", "i1"], &["e7", "i1"]);
        let rows = vec![
            vec![k.param_named("e7"), k.zero()],
            vec![k.zero(), k.param_named("i1")],
        ];
        let out = rank_with_certificate(rows, &k);
        assert_eq!(out.rank, 2);
        assert!(out.certified);
    }
}
