use std::fmt;
use std::ops::{Index, IndexMut};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// Dense square complex matrix with row-major storage.
///
/// Serializes to/from the JSON form
/// `{ "dim": n, "re": [[...]], "im": [[...]] }`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        assert!(dim >= 1 && rows.iter().all(|r| r.len() == dim), "rows must form a square matrix");
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn ensure_finite(&self) -> Result<(), LinalgError> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(LinalgError::NonFinite)
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self::from_fn(self.dim, |i, j| self[(i, j)] + rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self::from_fn(self.dim, |i, j| self[(i, j)] - rhs[(i, j)])
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_fn(self.dim, |i, j| c * self[(i, j)])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max_ij |m_ij - conj(m_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut defect = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                defect = defect.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        defect
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol * self.norm_max().max(1.0)
    }

    pub fn to_json_string(&self) -> String {
        let json = MatrixJson {
            dim: self.dim,
            re: (0..self.dim)
                .map(|i| (0..self.dim).map(|j| self[(i, j)].re).collect())
                .collect(),
            im: (0..self.dim)
                .map(|i| (0..self.dim).map(|j| self[(i, j)].im).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&json).expect("matrix serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self, LinalgError> {
        let json: MatrixJson =
            serde_json::from_str(s).map_err(|e| LinalgError::Parse(e.to_string()))?;
        if json.dim == 0 {
            return Err(LinalgError::Parse("dim must be at least 1".into()));
        }
        if json.re.len() != json.dim || json.im.len() != json.dim {
            return Err(LinalgError::Parse(format!(
                "expected {} rows in re and im",
                json.dim
            )));
        }
        for part in [&json.re, &json.im] {
            for row in part {
                if row.len() != json.dim {
                    return Err(LinalgError::Parse(format!(
                        "expected {} columns per row",
                        json.dim
                    )));
                }
            }
        }
        let m = Self::from_fn(json.dim, |i, j| Complex64::new(json.re[i][j], json.im[i][j]));
        if !m.is_finite() {
            return Err(LinalgError::Parse("matrix entries must be finite".into()));
        }
        Ok(m)
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<(), LinalgError> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<Self, LinalgError> {
        let s = std::fs::read_to_string(path)?;
        Self::from_json_str(&s)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.4e}{:+.4e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
