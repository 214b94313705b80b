//! Dense exact linear algebra: square solves over any [`ExactScalar`], row
//! reduction over Q, and Hermite normal form over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{denominator_lcm, ExactScalar, Rational};

/// A matrix stored as a list of rows.
pub type Matrix<T> = Vec<Vec<T>>;

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Matrix<T> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_vec<T: ExactScalar>(m: &[Vec<T>], v: &[T]) -> Result<Vec<T>> {
    m.iter().map(|row| crate::scalar::dot(row, v)).collect()
}

/// Row-reduces `[a | b]` in place and returns the solution of `a·x = b`
/// for each right-hand-side column of `b`.
fn gauss_jordan<T: ExactScalar>(mut a: Matrix<T>, mut b: Matrix<T>) -> Result<Matrix<T>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidInput("singular matrix".into()))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].try_div(&p)?;
        }
        for j in 0..b[col].len() {
            b[col][j] = b[col][j].try_div(&p)?;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let delta = f.try_mul(&a[col][j])?;
                a[r][j] = a[r][j].clone() - delta;
            }
            for j in 0..b[r].len() {
                let delta = f.try_mul(&b[col][j])?;
                b[r][j] = b[r][j].clone() - delta;
            }
        }
    }
    Ok(b)
}

/// Solves the square system `a·x = rhs` exactly.
pub fn solve<T: ExactScalar>(a: &[Vec<T>], rhs: &[T]) -> Result<Vec<T>> {
    let b = rhs.iter().map(|x| vec![x.clone()]).collect();
    Ok(gauss_jordan(a.to_vec(), b)?
        .into_iter()
        .map(|mut r| r.remove(0))
        .collect())
}

pub fn inverse<T: ExactScalar>(a: &[Vec<T>]) -> Result<Matrix<T>> {
    let n = a.len();
    let identity = (0..n)
        .map(|i| (0..n).map(|j| T::from_i64((i == j) as i64)).collect())
        .collect();
    gauss_jordan(a.to_vec(), identity)
}

pub fn determinant<T: ExactScalar>(a: &[Vec<T>]) -> Result<T> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = T::from_i64(1);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(T::zero());
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        let p = m[col][col].clone();
        det = det.try_mul(&p)?;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].try_div(&p)?;
            for j in col..n {
                let delta = f.try_mul(&m[col][j])?;
                m[r][j] = m[r][j].clone() - delta;
            }
        }
    }
    Ok(det)
}

/// Rank of a list of row vectors over any exact field.
pub fn rank_of<T: ExactScalar>(rows: &[Vec<T>]) -> Result<usize> {
    let mut m = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].try_div(&m[rank][col])?;
            for j in col..ncols {
                let delta = f.try_mul(&m[rank][j])?;
                m[r][j] = m[r][j].clone() - delta;
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Reduced row echelon form over Q. Returns the nonzero rows and their
/// pivot columns.
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> (Matrix<Rational>, Vec<usize>) {
    let mut m: Matrix<Rational> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..ncols {
                    let delta = &f * &m[row][j];
                    m[r][j] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x ∈ Qⁿ : ⟨v, x⟩ = 0 for all given v}`, in reduced row echelon
/// form so the result is canonical.
pub fn orthogonal_complement(vectors: &[Vec<Rational>], n: usize) -> Matrix<Rational> {
    let (reduced, pivots) = rref(vectors, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis: Matrix<Rational> = free
        .iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); n];
            x[f] = Rational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect();
    rref(&basis, n).0
}

/// Column-style Hermite normal form of the lattice generated by the given
/// integer column vectors (each of length `d`).
///
/// The result is a lower-triangular basis (as a list of `d` columns) with
/// positive diagonal and off-diagonal entries reduced into `[0, diagonal)`.
/// Fails when the generators do not span a full-rank lattice.
pub fn hermite_normal_form(generators: &[Vec<BigInt>], d: usize) -> Result<Matrix<BigInt>> {
    let mut cols: Matrix<BigInt> = generators
        .iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    for i in 0..d {
        loop {
            let candidate = (i..cols.len())
                .filter(|&j| !cols[j][i].is_zero())
                .min_by(|&a, &b| cols[a][i].abs().cmp(&cols[b][i].abs()));
            let Some(best) = candidate else {
                return Err(Error::InvalidLattice(
                    "generators do not span a full-rank lattice".into(),
                ));
            };
            cols.swap(i, best);
            let mut done = true;
            for j in i + 1..cols.len() {
                if cols[j][i].is_zero() {
                    continue;
                }
                let q = cols[j][i].div_floor(&cols[i][i]);
                let pivot_col = cols[i].clone();
                for (x, p) in cols[j].iter_mut().zip(&pivot_col) {
                    *x -= &q * p;
                }
                if !cols[j][i].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if cols[i][i].is_negative() {
            for x in cols[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        let pivot_col = cols[i].clone();
        for j in 0..i {
            let q = cols[j][i].div_floor(&pivot_col[i]);
            if !q.is_zero() {
                for (x, p) in cols[j].iter_mut().zip(&pivot_col) {
                    *x -= &q * p;
                }
            }
        }
        cols.retain(|c| c.iter().any(|x| !x.is_zero()));
    }
    cols.truncate(d);
    Ok(cols)
}

/// Canonical basis (column HNF) of the lattice generated by rational columns.
pub fn rational_lattice_hnf(generators: &[Vec<Rational>], d: usize) -> Result<Matrix<Rational>> {
    let den = denominator_lcm(generators.iter().flatten());
    let scaled: Matrix<BigInt> = generators
        .iter()
        .map(|c| c.iter().map(|x| (x * &den).to_integer()).collect())
        .collect();
    let hnf = hermite_normal_form(&scaled, d)?;
    Ok(hnf
        .into_iter()
        .map(|c| c.into_iter().map(|x| Rational::new(x, den.clone())).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Scalar};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn qv(xs: &[&str]) -> Vec<Rational> {
        xs.iter().map(|s| q(s)).collect()
    }

    fn iv(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn solves_small_systems() {
        let a = vec![qv(&["2", "-1"]), qv(&["1", "1"])];
        assert_eq!(solve(&a, &qv(&["1", "2"])).unwrap(), qv(&["1", "1"]));
        let singular = vec![qv(&["1", "2"]), qv(&["2", "4"])];
        assert!(solve(&singular, &qv(&["1", "1"])).is_err());
        assert_eq!(determinant(&a).unwrap(), q("3"));
        assert_eq!(determinant(&singular).unwrap(), q("0"));
    }

    #[test]
    fn inverse_over_quadratic_field() {
        let s = |t: &str| Scalar::parse(t).unwrap();
        let a = vec![vec![s("1"), s("sqrt:2")], vec![s("0"), s("2")]];
        let inv = inverse(&a).unwrap();
        let col0 = mat_vec(&a, &[inv[0][0].clone(), inv[1][0].clone()]).unwrap();
        assert_eq!(col0, vec![s("1"), s("0")]);
        assert_eq!(inv[0][1], s("-1/2*sqrt:2"));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(
            orthogonal_complement(&[qv(&["0", "0"])], 2),
            vec![qv(&["1", "0"]), qv(&["0", "1"])]
        );
        assert_eq!(orthogonal_complement(&[qv(&["1", "-1"])], 2), vec![qv(&["1", "1"])]);
        assert!(orthogonal_complement(&[qv(&["1", "0"]), qv(&["0", "1"])], 2).is_empty());
        assert_eq!(orthogonal_complement(&[], 1), vec![qv(&["1"])]);
    }

    #[test]
    fn hnf_of_generating_sets() {
        // Z² generated redundantly.
        let h = hermite_normal_form(&[iv(&[2, 0]), iv(&[3, 0]), iv(&[0, 1])], 2).unwrap();
        assert_eq!(h, vec![iv(&[1, 0]), iv(&[0, 1])]);
        let h = hermite_normal_form(&[iv(&[2, 1]), iv(&[-1, 1])], 2).unwrap();
        // determinant is preserved up to sign
        assert_eq!(&h[0][0] * &h[1][1], BigInt::from(3));
        assert!(h[1][0].is_zero());
        assert!(!h[0][1].is_negative() && h[0][1] < h[1][1]);
        assert!(hermite_normal_form(&[iv(&[1, 1]), iv(&[2, 2])], 2).is_err());
    }

    #[test]
    fn rational_hnf_is_canonical() {
        let a = rational_lattice_hnf(&[qv(&["1/2", "0"]), qv(&["0", "1/2"])], 2).unwrap();
        let b = rational_lattice_hnf(&[qv(&["1/2", "1/2"]), qv(&["0", "-1/2"])], 2).unwrap();
        assert_eq!(a, b);
    }
}
