//! Small dense exact linear algebra over `BigRational`.
//!
//! Everything here is sized for desk-scale instances (matrices of a few
//! hundred rows at most); plain Gaussian elimination is enough.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Row-reduce a copy of `m`, returning (rank, pivot column indices).
pub fn rank_with_pivots(m: &[Vec<Rat>]) -> (usize, Vec<usize>) {
    let rows = m.len();
    if rows == 0 {
        return (0, vec![]);
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        // pick the largest entry in this column for mild stability of sizes
        let mut sel = None;
        for r in row..rows {
            if !a[r][col].is_zero() {
                match sel {
                    None => sel = Some(r),
                    Some(s) => {
                        if a[r][col].abs() > a[s][col].abs() {
                            sel = Some(r)
                        }
                    }
                }
            }
        }
        let Some(sel) = sel else { continue };
        a.swap(row, sel);
        let inv = a[row][col].clone();
        for c in col..cols {
            let v = &a[row][c] / &inv;
            a[row][c] = v;
        }
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..cols {
                    let v = &a[r][c] - &f * &a[row][c];
                    a[r][c] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    (row, pivots)
}

/// Solve `a x = b` for square nonsingular `a`. Returns None when singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let sel = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, sel);
        let inv = m[col][col].clone();
        for c in col..=n {
            let v = &m[col][c] / &inv;
            m[col][c] = v;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let v = &m[r][c] - &f * &m[col][c];
                    m[r][c] = v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Inverse of a square nonsingular rational matrix.
pub fn invert(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        cols.push(solve(a, &e)?);
    }
    // cols[j] is the j-th column of the inverse
    let mut inv = vec![vec![Rat::zero(); n]; n];
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            inv[i][j] = v.clone();
        }
    }
    Some(inv)
}

/// One-dimensional kernel of an integer matrix, scaled to the primitive
/// positive integer vector. Returns None if the kernel is not 1-dimensional.
pub fn primitive_kernel(a: &[Vec<i64>]) -> Option<Vec<BigInt>> {
    let n = a.len();
    let m: Vec<Vec<Rat>> = a
        .iter()
        .map(|row| row.iter().map(|&v| rat_int(v)).collect())
        .collect();
    let (rank, pivots) = rank_with_pivots(&m);
    if rank != n - 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    // Solve a restricted system: set x[free] = 1, solve for pivot variables.
    let mut sub = Vec::new();
    let mut rhs = Vec::new();
    for row in &m {
        let mut r = Vec::new();
        for (c, item) in row.iter().enumerate() {
            if c != free {
                r.push(item.clone());
            }
        }
        sub.push(r);
        rhs.push(-row[free].clone());
    }
    // sub is n x (n-1); drop one dependent row to make it square
    let mut x = None;
    for drop in 0..n {
        let mut sq = Vec::new();
        let mut b = Vec::new();
        for r in 0..n {
            if r != drop {
                sq.push(sub[r].clone());
                b.push(rhs[r].clone());
            }
        }
        if let Some(sol) = solve(&sq, &b) {
            x = Some(sol);
            break;
        }
    }
    let x = x?;
    let mut full = Vec::with_capacity(n);
    let mut it = x.into_iter();
    for c in 0..n {
        if c == free {
            full.push(Rat::one());
        } else {
            full.push(it.next().unwrap());
        }
    }
    // clear denominators and divide by gcd
    let mut lcm = BigInt::one();
    for v in &full {
        lcm = num_integer::lcm(lcm, v.denom().clone());
    }
    let mut ints: Vec<BigInt> = full.iter().map(|v| v.numer() * &lcm / v.denom()).collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = num_integer::gcd(g, v.clone());
    }
    if !g.is_zero() {
        for v in &mut ints {
            *v /= &g;
        }
    }
    if ints.iter().any(|v| v.is_negative()) {
        if ints.iter().any(|v| v.is_positive()) {
            return None;
        }
        for v in &mut ints {
            *v = -v.clone();
        }
    }
    Some(ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect()
    }

    #[test]
    fn rank_and_solve() {
        let a = m(&[&[2, -1], &[-1, 2]]);
        let (rank, _) = rank_with_pivots(&a);
        assert_eq!(rank, 2);
        let x = solve(&a, &[rat_int(1), rat_int(1)]).unwrap();
        assert_eq!(x, vec![rat_int(1), rat_int(1)]);
    }

    #[test]
    fn kernel_of_affine_a1() {
        let a = vec![vec![2, -2], vec![-2, 2]];
        let k = primitive_kernel(&a).unwrap();
        assert_eq!(k, vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn invert_round_trip() {
        let a = m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let inv = invert(&a).unwrap();
        let x = &inv[0];
        // first column of A * inv == e_0
        let dot0: Rat = (0..3).map(|j| &a[0][j] * &x[j].clone()).sum();
        assert_eq!(dot0, Rat::one());
    }
}
