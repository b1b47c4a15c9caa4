#![allow(clippy::needless_range_loop)]
//! Dense Gaussian elimination over exact scalars.

use crate::scalars::Scalar;

pub type Matrix = Vec<Vec<Scalar>>;

/// Reduce `m` to reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..ncols {
                if !m[r][j].is_zero() {
                    let t = &m[r][j] * &f;
                    m[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(m: &Matrix, ncols: usize) -> usize {
    let mut a = m.clone();
    rref(&mut a, ncols).len()
}

/// Basis of `{ v : m v = 0 }`, one vector per free column.
pub fn nullspace(m: &Matrix, ncols: usize) -> Vec<Vec<Scalar>> {
    let mut a = m.clone();
    let pivots = rref(&mut a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); ncols];
            v[f] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[row][f];
            }
            v
        })
        .collect()
}

/// Solve `m x = b`, or `None` when inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); ncols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][ncols].clone();
    }
    Some(x)
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = vec![s(&[1, 2, 3]), s(&[2, 4, 6])];
        assert_eq!(rank(&m, 3), 1);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = (0..3).fold(Scalar::zero(), |acc, j| acc + &m[0][j] * &v[j]);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn symbolic_rank_drops_at_special_value() {
        let k: Scalar = "k".parse().unwrap();
        let m = vec![vec![k.clone() + Scalar::from_int(2), Scalar::zero()], s(&[0, 1])];
        assert_eq!(rank(&m, 2), 2);
        let at = vec![s(&[0, 0]), s(&[0, 1])];
        assert_eq!(rank(&at, 2), 1);
    }

    #[test]
    fn inverse_and_solve() {
        let m = vec![s(&[2, 1]), s(&[1, 1])];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![s(&[1, -1]), s(&[-1, 2])]);
        assert_eq!(solve(&m, &s(&[3, 2])).unwrap(), s(&[1, 1]));
        assert!(inverse(&vec![s(&[1, 2]), s(&[2, 4])]).is_none());
    }
}
