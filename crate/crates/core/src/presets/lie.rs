#![allow(clippy::needless_range_loop)]
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalars::Scalar;

/// A finite-dimensional Lie algebra with an invariant form.
///
/// `structure[a][b][c]` is the coefficient of basis element `c` in `[a, b]`;
/// the form is normalized so that long roots have square length 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieData {
    pub name: String,
    pub basis: Vec<String>,
    pub structure: Vec<Vec<Vec<Scalar>>>,
    pub form: Matrix,
    pub dual_coxeter: i64,
}

type Mat = Vec<Vec<i64>>;

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = vec![vec![0; n]; n];
    m[i][j] = 1;
    m
}

fn sub(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

impl LieData {
    /// Structure constants and trace form of a matrix Lie algebra.
    pub fn from_matrices(name: &str, names: &[&str], mats: &[Mat], dual_coxeter: i64) -> Result<LieData> {
        let flat = |m: &Mat| -> Vec<Scalar> { m.iter().flatten().map(|&x| Scalar::from_int(x)).collect() };
        // columns are the flattened basis matrices
        let cols: Vec<Vec<Scalar>> = mats.iter().map(flat).collect();
        let rows = cols[0].len();
        let system: Matrix = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let mut structure = Vec::new();
        for a in mats {
            let mut row = Vec::new();
            for b in mats {
                let br = sub(&mat_mul(a, b), &mat_mul(b, a));
                let coords = linalg::solve(&system, &flat(&br))
                    .ok_or_else(|| Error::InvalidLieData(format!("{name}: basis is not closed under brackets")))?;
                row.push(coords);
            }
            structure.push(row);
        }
        let trace = |m: &Mat| (0..m.len()).map(|i| m[i][i]).sum::<i64>();
        let form = mats
            .iter()
            .map(|a| mats.iter().map(|b| Scalar::from_int(trace(&mat_mul(a, b)))).collect())
            .collect();
        let lie = LieData {
            name: name.to_string(),
            basis: names.iter().map(|s| s.to_string()).collect(),
            structure,
            form,
            dual_coxeter,
        };
        lie.validate()?;
        Ok(lie)
    }

    pub fn sl2() -> LieData {
        let e = unit(2, 0, 1);
        let f = unit(2, 1, 0);
        let h = sub(&unit(2, 0, 0), &unit(2, 1, 1));
        LieData::from_matrices("sl2", &["e", "h", "f"], &[e, h, f], 2).expect("sl2 is valid")
    }

    pub fn sl3() -> LieData {
        let e = |i, j| unit(3, i, j);
        let h1 = sub(&e(0, 0), &e(1, 1));
        let h2 = sub(&e(1, 1), &e(2, 2));
        LieData::from_matrices(
            "sl3",
            &["e1", "e2", "e3", "h1", "h2", "f1", "f2", "f3"],
            &[e(0, 1), e(1, 2), e(0, 2), h1, h2, e(1, 0), e(2, 1), e(2, 0)],
            3,
        )
        .expect("sl3 is valid")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() {
                    continue;
                }
                let k = &x[a] * &y[b];
                for c in 0..n {
                    if !self.structure[a][b][c].is_zero() {
                        out[c] += &(&k * &self.structure[a][b][c]);
                    }
                }
            }
        }
        out
    }

    pub fn pairing(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                if !self.form[a][b].is_zero() {
                    acc += &(&(&x[a] * &y[b]) * &self.form[a][b]);
                }
            }
        }
        acc
    }

    fn unit_vec(&self, a: usize) -> Vec<Scalar> {
        (0..self.dim())
            .map(|i| if i == a { Scalar::one() } else { Scalar::zero() })
            .collect()
    }

    /// Check antisymmetry, the Jacobi identity, symmetry and invariance of
    /// the form, and nondegeneracy.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let bad = |msg: String| Err(Error::InvalidLieData(format!("{}: {msg}", self.name)));
        if self.structure.len() != n || self.form.len() != n {
            return bad("table sizes do not match the basis".into());
        }
        let e: Vec<Vec<Scalar>> = (0..n).map(|a| self.unit_vec(a)).collect();
        for a in 0..n {
            for b in 0..n {
                let ab = self.bracket(&e[a], &e[b]);
                let ba = self.bracket(&e[b], &e[a]);
                if ab.iter().zip(&ba).any(|(x, y)| !(x + y).is_zero()) {
                    return bad(format!("bracket of {} and {} is not antisymmetric", self.basis[a], self.basis[b]));
                }
                if self.form[a][b] != self.form[b][a] {
                    return bad("form is not symmetric".into());
                }
                for c in 0..n {
                    let j1 = self.bracket(&e[a], &self.bracket(&e[b], &e[c]));
                    let j2 = self.bracket(&e[b], &self.bracket(&e[c], &e[a]));
                    let j3 = self.bracket(&e[c], &self.bracket(&e[a], &e[b]));
                    if (0..n).any(|i| !(&(&j1[i] + &j2[i]) + &j3[i]).is_zero()) {
                        return bad("Jacobi identity fails".into());
                    }
                    let inv = &self.pairing(&ab, &e[c]) + &self.pairing(&e[b], &self.bracket(&e[a], &e[c]));
                    if !inv.is_zero() {
                        return bad("form is not invariant".into());
                    }
                }
            }
        }
        if linalg::inverse(&self.form).is_none() {
            return bad("form is degenerate".into());
        }
        Ok(())
    }

    /// Inverse of the Gram matrix of the form.
    pub fn inverse_form(&self) -> Matrix {
        linalg::inverse(&self.form).expect("validated form is nondegenerate")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_relations() {
        let g = LieData::sl2();
        let (e, h, f) = (g.unit_vec(0), g.unit_vec(1), g.unit_vec(2));
        assert_eq!(g.bracket(&e, &f), h);
        assert_eq!(g.bracket(&h, &e), e.iter().map(|x| x * &Scalar::from_int(2)).collect::<Vec<_>>());
        assert_eq!(g.pairing(&e, &f), Scalar::one());
        assert_eq!(g.pairing(&h, &h), Scalar::from_int(2));
    }

    #[test]
    fn sl3_long_root_has_length_two() {
        let g = LieData::sl3();
        assert_eq!(g.dim(), 8);
        let h1 = g.unit_vec(3);
        assert_eq!(g.pairing(&h1, &h1), Scalar::from_int(2));
    }

    #[test]
    fn inconsistent_structure_constants_are_rejected() {
        let mut g = LieData::sl2();
        g.structure[1][2][2] = Scalar::from_int(-3);
        g.structure[2][1][2] = Scalar::from_int(3);
        assert!(matches!(g.validate(), Err(Error::InvalidLieData(_))));
    }
}
