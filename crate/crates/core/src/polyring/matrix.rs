use std::fmt;

use super::{Poly, PolyError, Var, VarSpace};
use crate::ring::{Ctx, RingError, Series};

/// Dense rectangular matrix of polynomials sharing one space and field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(ctx: Ctx, space: VarSpace, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Poly::one(ctx, space)
                        } else {
                            Poly::zero(ctx, space)
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn scale(&self, c: &Poly) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let rows = (0..self.rows)
            .map(|i| {
                (0..other.cols)
                    .map(|j| {
                        let mut acc = self.get(i, 0) * other.get(0, j);
                        for k in 1..self.cols {
                            acc = &acc + &(self.get(i, k) * other.get(k, j));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    /// Submatrix keeping the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|&i| cols.iter().map(|&j| self.get(i, j).clone()).collect())
                .collect(),
        )
    }

    fn without(&self, row: usize, col: usize) -> Self {
        let rs: Vec<usize> = (0..self.rows).filter(|&i| i != row).collect();
        let cs: Vec<usize> = (0..self.cols).filter(|&j| j != col).collect();
        self.select(&rs, &cs)
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let (ctx, space) = self.ctx_space();
        match self.rows {
            0 => Poly::one(ctx, space),
            1 => self.entries[0].clone(),
            2 => &(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0)),
            n => {
                let mut acc = Poly::zero(ctx, space);
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let term = a * &self.without(0, j).det();
                    acc = if j % 2 == 0 {
                        &acc + &term
                    } else {
                        &acc - &term
                    };
                }
                acc
            }
        }
    }

    /// Transposed cofactor matrix: `M · adj(M) = adj(M) · M = det(M) · Id`.
    pub fn adjugate(&self) -> Self {
        assert_eq!(self.rows, self.cols, "adjugate of a non-square matrix");
        let (ctx, space) = self.ctx_space();
        let n = self.rows;
        if n == 1 {
            return Self::identity(ctx, space, 1);
        }
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let minor = self.without(j, i).det();
                        if (i + j) % 2 == 0 {
                            minor
                        } else {
                            -&minor
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn eval(&self, ys: &[Series], ts: &[Series]) -> Result<SeriesMatrix, PolyError> {
        let entries = self
            .entries
            .iter()
            .map(|p| p.eval(ys, ts))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Entry-wise [`Poly::agrees_to`].
    pub fn agrees_to(&self, other: &Self, prec: u32) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.agrees_to(b, prec))
    }

    fn ctx_space(&self) -> (Ctx, VarSpace) {
        let e = self.entries.first().expect("empty matrix has no context");
        (e.ctx(), e.space())
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        f.write_str("]")
    }
}

/// `(∂f_i/∂v_j)` for the given polynomials and variables.
pub fn jacobian(fs: &[Poly], vars: &[Var]) -> PolyMatrix {
    PolyMatrix::from_rows(
        fs.iter()
            .map(|f| vars.iter().map(|&v| f.diff(v)).collect())
            .collect(),
    )
}

/// Dense matrix over `k[[x]]`, e.g. `G(y')` or `H(y')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Series>,
}

impl SeriesMatrix {
    pub fn from_rows(rows: Vec<Vec<Series>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Series] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Series]) -> Vec<Series> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0) * &v[0];
                for (j, vj) in v.iter().enumerate().skip(1) {
                    acc = &acc + &(self.get(i, j) * vj);
                }
                acc
            })
            .collect()
    }

    /// Smallest lower bound on the order of the entries.
    pub fn min_valuation(&self) -> u32 {
        self.entries
            .iter()
            .map(|e| e.valuation().lower_bound())
            .min()
            .unwrap_or(0)
    }

    /// Solves `self · z = b` for a square matrix whose determinant is a
    /// unit of `k[[x]]`, by elimination with unit pivots.
    #[allow(clippy::needless_range_loop)]
    pub fn solve_unit(&self, b: &[Series]) -> Result<Vec<Series>, RingError> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, b.len(), "right-hand side dimension mismatch");
        let n = self.rows;
        let mut a: Vec<Vec<Series>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| a[r][col].is_unit())
                .ok_or(RingError::NotAUnit)?;
            a.swap(col, piv);
            rhs.swap(col, piv);
            let inv = a[col][col].inv_unit()?;
            for v in &mut a[col][col..] {
                *v = &*v * &inv;
            }
            rhs[col] = &rhs[col] * &inv;
            for r in 0..n {
                if r == col || a[r][col].is_zero_at_prec() {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in col..n {
                    let t = &factor * &a[col][j];
                    a[r][j] = &a[r][j] - &t;
                }
                let t = &factor * &rhs[col];
                rhs[r] = &rhs[r] - &t;
            }
        }
        Ok(rhs)
    }
}

impl fmt::Display for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        f.write_str("]")
    }
}
