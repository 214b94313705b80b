//! Exact phase-one simplex with Bland's rule.

use crate::error::Result;
use crate::scalar::{ExactScalar, Sign};

/// A basic feasible point of `{x ≥ 0 : a·x = b}`, or `None` when the system
/// is infeasible.
///
/// Bland's rule (lowest-index entering column, lowest-index leaving basic
/// variable on ratio ties) makes the pivot sequence, and hence the returned
/// vertex, a deterministic function of the input.
pub fn feasible_point<T: ExactScalar>(a: &[Vec<T>], b: &[T]) -> Result<Option<Vec<T>>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m;

    // Tableau rows: [a | I | b] with b made nonnegative.
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.sign()? == Sign::Negative;
        let mut r: Vec<T> = row.iter().map(|x| if flip { -x.clone() } else { x.clone() }).collect();
        r.extend((0..m).map(|k| T::from_i64((k == i) as i64)));
        r.push(if flip { -rhs.clone() } else { rhs.clone() });
        rows.push(r);
    }
    let mut basis: Vec<usize> = (n..width).collect();

    // Phase-one objective: minimise the sum of artificials. Reduced costs of
    // the original columns start at minus the column sums.
    let mut cost: Vec<T> = vec![T::zero(); width + 1];
    for r in &rows {
        for j in 0..n {
            cost[j] = cost[j].clone() - &r[j];
        }
        cost[width] = cost[width].clone() - &r[width];
    }

    loop {
        let mut entering = None;
        for (j, c) in cost.iter().take(width).enumerate() {
            if c.sign()? == Sign::Negative {
                entering = Some(j);
                break;
            }
        }
        let Some(col) = entering else { break };

        let mut leaving: Option<(usize, T)> = None;
        for (i, r) in rows.iter().enumerate() {
            if r[col].sign()? != Sign::Positive {
                continue;
            }
            let ratio = r[width].try_div(&r[col])?;
            let better = match &leaving {
                None => true,
                Some((li, best)) => match ratio.try_cmp(best)? {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => basis[i] < basis[*li],
                    std::cmp::Ordering::Greater => false,
                },
            };
            if better {
                leaving = Some((i, ratio));
            }
        }
        // The phase-one objective is bounded below by zero, so some row qualifies.
        let (pivot_row, _) = leaving.expect("phase-one objective is bounded");

        let p = rows[pivot_row][col].clone();
        for x in rows[pivot_row].iter_mut() {
            *x = x.try_div(&p)?;
        }
        let pivot = rows[pivot_row].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i == pivot_row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, y) in r.iter_mut().zip(&pivot) {
                if !y.is_zero() {
                    *x = x.clone() - f.try_mul(y)?;
                }
            }
        }
        if !cost[col].is_zero() {
            let f = cost[col].clone();
            for (x, y) in cost.iter_mut().zip(&pivot) {
                if !y.is_zero() {
                    *x = x.clone() - f.try_mul(y)?;
                }
            }
        }
        basis[pivot_row] = col;
    }

    if cost[width].sign()? != Sign::Zero {
        return Ok(None);
    }
    let mut x = vec![T::zero(); n];
    for (r, &var) in rows.iter().zip(&basis) {
        if var < n {
            x[var] = r[width].clone();
        }
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn qv(xs: &[&str]) -> Vec<Rational> {
        xs.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn simplex_from_the_first_vertex() {
        let x = feasible_point(&[qv(&["1", "1"])], &qv(&["1"])).unwrap().unwrap();
        assert_eq!(x, qv(&["1", "0"]));
    }

    #[test]
    fn balanced_solution() {
        let a = vec![qv(&["1", "-1"]), qv(&["1", "1"])];
        let x = feasible_point(&a, &qv(&["0", "1"])).unwrap().unwrap();
        assert_eq!(x, qv(&["1/2", "1/2"]));
    }

    #[test]
    fn infeasible_systems() {
        let a = vec![qv(&["1", "1"]), qv(&["1", "1"])];
        assert!(feasible_point(&a, &qv(&["0", "1"])).unwrap().is_none());
        assert!(feasible_point(&[qv(&["1", "1"])], &qv(&["-1"])).unwrap().is_none());
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        let x = feasible_point(&[qv(&["-1", "-2"])], &qv(&["-4"])).unwrap().unwrap();
        assert_eq!(x, qv(&["4", "0"]));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance recast as a feasibility problem.
        let a = vec![
            qv(&["1/4", "-8", "-1", "9", "1", "0", "0"]),
            qv(&["1/2", "-12", "-1/2", "3", "0", "1", "0"]),
            qv(&["0", "0", "1", "0", "0", "0", "1"]),
        ];
        let b = qv(&["0", "0", "1"]);
        let x = feasible_point(&a, &b).unwrap().unwrap();
        for (row, rhs) in a.iter().zip(&b) {
            let lhs: Rational = row.iter().zip(&x).map(|(p, q)| p * q).sum();
            assert_eq!(&lhs, rhs);
        }
        assert!(x.iter().all(|v| *v >= q("0")));
    }
}
