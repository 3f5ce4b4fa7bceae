//! Dense exact linear algebra over `Q(zeta_N)`.

use crate::cyclo::CycScalar;
use crate::error::{Error, Result};

/// Row-major square or rectangular matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<CycScalar>,
}

impl Matrix {
    pub fn zeros(n: u32, rows: usize, cols: usize) -> Result<Matrix> {
        let z = CycScalar::zero(n)?;
        Ok(Matrix { rows, cols, data: vec![z; rows * cols] })
    }

    pub fn identity(n: u32, dim: usize) -> Result<Matrix> {
        let mut m = Self::zeros(n, dim, dim)?;
        let one = CycScalar::one(n)?;
        for i in 0..dim {
            m.data[i * dim + i] = one.clone();
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<CycScalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn get(&self, i: usize, j: usize) -> &CycScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = self.data.first().map_or(1, CycScalar::modulus);
        let mut out = Self::zeros(n, self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CycScalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn trace(&self) -> Result<CycScalar> {
        let n = self.data.first().map_or(1, CycScalar::modulus);
        let mut acc = CycScalar::zero(n)?;
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + self.get(i, i);
        }
        Ok(acc)
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = Vec::with_capacity(rows * cols);
        for i1 in 0..self.rows {
            for i2 in 0..other.rows {
                for j1 in 0..self.cols {
                    for j2 in 0..other.cols {
                        data.push(self.get(i1, j1) * other.get(i2, j2));
                    }
                }
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        rref(&mut m).len()
    }

    pub fn det(&self) -> Result<CycScalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.data.first().map_or(1, CycScalar::modulus);
        let mut m = self.clone();
        let mut det = CycScalar::one(n)?;
        let d = self.rows;
        for c in 0..d {
            let Some(piv) = (c..d).find(|&r| !m.get(r, c).is_zero()) else {
                return CycScalar::zero(n);
            };
            if piv != c {
                for j in 0..d {
                    m.data.swap(piv * d + j, c * d + j);
                }
                det = -det;
            }
            let p = m.get(c, c).clone();
            det = &det * &p;
            let pinv = p.inv()?;
            for r in c + 1..d {
                if m.get(r, c).is_zero() {
                    continue;
                }
                let factor = m.get(r, c) * &pinv;
                for j in c..d {
                    let v = m.get(r, j) - &(&factor * m.get(c, j));
                    m.set(r, j, v);
                }
            }
        }
        Ok(det)
    }
}

/// Reduces in place to reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                m.data.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = m.get(r, c).inv().expect("pivot is nonzero");
        for j in c..cols {
            let v = m.get(r, j) * &inv;
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in c..cols {
                let v = m.get(i, j) - &(&factor * m.get(r, j));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace(a: &Matrix) -> Result<Vec<Vec<CycScalar>>> {
    let n = a.data.first().map_or(1, CycScalar::modulus);
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![CycScalar::zero(n)?; a.cols];
        v[fc] = CycScalar::one(n)?;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m.get(row, fc);
        }
        basis.push(v);
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycScalar {
        CycScalar::root_of_unity(n, k).unwrap()
    }

    #[test]
    fn nullspace_and_rank() {
        let one = z(4, 0);
        let i = z(4, 1);
        let m = Matrix::from_rows(vec![vec![one.clone(), i.clone()], vec![i.clone(), -&one]]).unwrap();
        // second row is i times the first
        assert_eq!(m.rank(), 1);
        let ns = nullspace(&m).unwrap();
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert!((&(&one * &v[0]) + &(&i * &v[1])).is_zero());
    }

    #[test]
    fn determinant() {
        let m = Matrix::from_rows(vec![vec![z(3, 0), z(3, 1)], vec![z(3, 2), z(3, 0)]]).unwrap();
        // 1 - zeta^3 = 0
        assert!(m.det().unwrap().is_zero());
        let id = Matrix::identity(3, 3).unwrap();
        assert!(id.det().unwrap().is_one());
    }
}
