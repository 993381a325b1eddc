use std::ops::{Index, IndexMut};

use super::complex::{self, Complex};
use super::rmatrix::RealMatrix;
use crate::error::{Error, Result};

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        Self {
            n,
            data: vec![complex::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for j in 0..n {
            m[(j, j)] = complex::ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (j, &z) in diag.iter().enumerate() {
            m[(j, j)] = z;
        }
        m
    }

    /// Validating constructor: rejects non-finite entries.
    pub fn from_entries(n: usize, entries: Vec<Complex>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(entries.len(), n * n));
        }
        if !entries.iter().all(|z| z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, data: entries })
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(row.len(), n));
            }
            data.extend_from_slice(row);
        }
        Self::from_entries(n, data)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex] {
        &self.data
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(self.n, rhs.n));
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(self.n, rhs.n));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(Self { n: self.n, data })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(self.n, rhs.n));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(Self { n: self.n, data })
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.abs_sq()).sum::<f64>().sqrt()
    }

    pub fn frobenius_dist(&self, rhs: &Self) -> Result<f64> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(self.n, rhs.n));
        }
        Ok(self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| (a - b).abs_sq())
            .sum::<f64>()
            .sqrt())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.abs()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex {
        let mut t = complex::ZERO;
        for j in 0..self.n {
            t += self.data[j * self.n + j];
        }
        t
    }

    /// ‖M − id‖_F
    pub fn dist_from_identity(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let mut z = self.data[i * self.n + j];
                if i == j {
                    z.re -= 1.0;
                }
                s += z.abs_sq();
            }
        }
        s.sqrt()
    }

    pub fn re_part(&self) -> RealMatrix {
        RealMatrix::from_fn(self.n, self.n, |i, j| self[(i, j)].re)
    }

    pub fn im_part(&self) -> RealMatrix {
        RealMatrix::from_fn(self.n, self.n, |i, j| self[(i, j)].im)
    }

    pub fn from_re_im(re: &RealMatrix, im: &RealMatrix) -> Result<Self> {
        if re.rows() != re.cols() || re.rows() != im.rows() || re.cols() != im.cols() {
            return Err(Error::DimensionMismatch(re.rows(), im.rows()));
        }
        let n = re.rows();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex::new(re[(i, j)], im[(i, j)]);
            }
        }
        Ok(m)
    }

    /// Realification in (x, y) coordinates: z = x + iy acts through the
    /// 2n×2n block matrix [[X, −Y], [Y, X]].
    pub fn realify(&self) -> RealMatrix {
        let n = self.n;
        let mut r = RealMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = self[(i, j)];
                r[(i, j)] = z.re;
                r[(i, j + n)] = -z.im;
                r[(i + n, j)] = z.im;
                r[(i + n, j + n)] = z.re;
            }
        }
        r
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs();
        for col in 0..n {
            let (pivot_row, pivot_abs) = (col..n)
                .map(|r| (r, a[(r, col)].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if pivot_abs <= 1e-13 * scale.max(1.0) {
                return Err(Error::Singular);
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let p = a[(col, col)].recip();
            for j in 0..n {
                a[(col, j)] *= p;
                inv[(col, j)] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f.re == 0.0 && f.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let u = a[(col, j)];
                    let v = inv[(col, j)];
                    a[(r, j)] -= f * u;
                    inv[(r, j)] -= f * v;
                }
            }
        }
        Ok(inv)
    }

    /// Determinant via LU with partial pivoting.
    pub fn det(&self) -> Complex {
        let n = self.n;
        let mut a = self.clone();
        let mut det = complex::ONE;
        for col in 0..n {
            let (pivot_row, pivot_abs) = (col..n)
                .map(|r| (r, a[(r, col)].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if pivot_abs == 0.0 {
                return complex::ZERO;
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                det = -det;
            }
            let p = a[(col, col)];
            det *= p;
            for r in (col + 1)..n {
                let f = a[(r, col)] / p;
                for j in col..n {
                    let u = a[(col, j)];
                    a[(r, j)] -= f * u;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        let n = self.n;
        for j in 0..n {
            self.data.swap(r1 * n + j, r2 * n + j);
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.n + j]
    }
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::complex::{I, ONE, ZERO};

    #[test]
    fn identity_times_m_is_m() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex::new(1.0, 2.0), Complex::new(-0.5, 0.25)],
            vec![Complex::new(0.0, -1.0), Complex::new(3.0, 0.0)],
        ])
        .unwrap();
        let id = ComplexMatrix::identity(2);
        let p = id.mul(&m).unwrap();
        assert!(p.frobenius_dist(&m).unwrap() < 1e-15);
    }

    #[test]
    fn diag_i_squares_to_minus_identity() {
        let d = ComplexMatrix::from_diagonal(&[I, I]);
        let p = d.mul(&d).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[-ONE, -ONE]);
        assert!(p.frobenius_dist(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn permutation_is_involutive() {
        let p = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap();
        let sq = p.mul(&p).unwrap();
        assert!(sq.dist_from_identity() < 1e-15);
    }

    #[test]
    fn conj_of_diag_i() {
        let d = ComplexMatrix::from_diagonal(&[I]);
        assert_eq!(d.conj()[(0, 0)], Complex::new(0.0, -1.0));
    }

    #[test]
    fn transpose_is_involutive() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex::new(1.0, 2.0), Complex::new(-0.5, 0.25)],
            vec![Complex::new(0.0, -1.0), Complex::new(3.0, 0.0)],
        ])
        .unwrap();
        assert!(m.transpose().transpose().frobenius_dist(&m).unwrap() == 0.0);
    }

    #[test]
    fn frobenius_distances() {
        let id = ComplexMatrix::identity(2);
        let z = ComplexMatrix::zeros(2);
        assert!((id.frobenius_dist(&z).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(id.frobenius_dist(&id).unwrap(), 0.0);
        let one = ComplexMatrix::from_diagonal(&[ONE]);
        let minus = ComplexMatrix::from_diagonal(&[-ONE]);
        assert!((one.frobenius_dist(&minus).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn rejects_non_finite() {
        let r = ComplexMatrix::from_entries(1, vec![Complex::new(f64::NAN, 0.0)]);
        assert!(matches!(r, Err(Error::NonFinite)));
    }

    #[test]
    fn inverse_of_diagonal() {
        let d = ComplexMatrix::from_diagonal(&[Complex::new(0.0, 2.0), Complex::new(-1.0, 1.0)]);
        let inv = d.inverse().unwrap();
        let p = d.mul(&inv).unwrap();
        assert!(p.dist_from_identity() < 1e-14);
    }

    #[test]
    fn det_of_permutation() {
        let p = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap();
        let d = p.det();
        assert!((d - Complex::new(-1.0, 0.0)).abs() < 1e-15);
    }
}
