//! Kronecker lifting of 1-D operators onto 2-D blocks.
//!
//! Unknowns of a block are ordered x-major: the value at `(x_i, y_j)` sits at
//! `i·(Ny+1) + j`, so each x-station holds a contiguous vector along y. Systems
//! with `k` components stack whole blocks: component `c` starts at `c·(Nx+1)(Ny+1)`.

use serde::{Deserialize, Serialize};
use sprs::{CsMat, TriMat};

use crate::linalg::{Matrix, Scalar};
use crate::sbp::{make_sbp_operator, DiagonalNorm, SbpOperator1D};
use crate::{Error, Result};

/// Standard Kronecker product, exact or floating point.
pub fn kron<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.kron(b)
}

/// Sparse Kronecker product.
pub fn kron_sparse(a: &CsMat<f64>, b: &CsMat<f64>) -> CsMat<f64> {
    sprs::kronecker_product(a.view(), b.view())
}

/// Sparse copy of a dense matrix, dropping exact zeros.
pub fn to_sparse(m: &Matrix<f64>) -> CsMat<f64> {
    let mut t = TriMat::new(m.shape());
    for i in 0..m.nrows() {
        for (j, &v) in m.row(i).iter().enumerate() {
            if v != 0.0 {
                t.add_triplet(i, j, v);
            }
        }
    }
    t.to_csr()
}

pub fn sparse_diag(d: &[f64]) -> CsMat<f64> {
    let mut t = TriMat::new((d.len(), d.len()));
    for (i, &v) in d.iter().enumerate() {
        t.add_triplet(i, i, v);
    }
    t.to_csr()
}

pub fn sparse_eye(n: usize) -> CsMat<f64> {
    CsMat::eye(n)
}

/// `y = A x` for a CSR matrix.
pub fn sparse_matvec(a: &CsMat<f64>, x: &[f64]) -> Vec<f64> {
    assert_eq!(a.cols(), x.len(), "matvec length mismatch");
    let mut y = vec![0.0; a.rows()];
    if a.is_csr() {
        for (i, row) in a.outer_iterator().enumerate() {
            y[i] = row.iter().map(|(j, v)| v * x[j]).sum();
        }
    } else {
        for (v, (i, j)) in a.iter() {
            y[i] += v * x[j];
        }
    }
    y
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// Rectangular block `[x0, x1] × [y0, y1]` with `(nx+1)(ny+1)` points.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockGrid2D {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub order: usize,
}

impl BlockGrid2D {
    pub fn new(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize, order: usize) -> Result<Self> {
        if !(x.1 > x.0 && y.1 > y.0) || nx == 0 || ny == 0 {
            return Err(Error::Invalid(format!("degenerate block {x:?} × {y:?} with {nx}×{ny} intervals")));
        }
        Ok(Self {
            x0: x.0,
            x1: x.1,
            y0: y.0,
            y1: y.1,
            nx,
            ny,
            hx: (x.1 - x.0) / nx as f64,
            hy: (y.1 - y.0) / ny as f64,
            order,
        })
    }

    pub fn points(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * (self.ny + 1) + j
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.hx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.hy
    }

    pub fn x_operator(&self) -> Result<SbpOperator1D> {
        make_sbp_operator(self.order, self.nx, self.hx)
    }

    pub fn y_operator(&self) -> Result<SbpOperator1D> {
        make_sbp_operator(self.order, self.ny, self.hy)
    }

    pub fn x_norm(&self) -> Result<DiagonalNorm> {
        DiagonalNorm::new(self.order, self.nx, self.hx)
    }

    pub fn y_norm(&self) -> Result<DiagonalNorm> {
        DiagonalNorm::new(self.order, self.ny, self.hy)
    }

    /// Diagonal of `I_k ⊗ Hx ⊗ Hy`.
    pub fn norm_diag(&self, k: usize) -> Result<Vec<f64>> {
        let hx = self.x_norm()?.diag();
        let hy = self.y_norm()?.diag();
        let mut d = Vec::with_capacity(k * self.points());
        for _ in 0..k {
            for a in &hx {
                d.extend(hy.iter().map(|b| a * b));
            }
        }
        Ok(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Dx,
    Dy,
    Hx,
    Hy,
    E0x,
    ENx,
    E0y,
    EMy,
}

/// A 1-D operator on the block unknowns.
#[derive(Clone, Debug)]
pub struct LiftedOperator {
    pub role: Role,
    pub matrix: CsMat<f64>,
}

/// One-dimensional ingredients that can be lifted.
#[derive(Clone, Copy, Debug)]
pub enum Op1D<'a> {
    Derivative(&'a SbpOperator1D),
    Norm(&'a DiagonalNorm),
    /// `e_0` (`last == false`) or `e_N` (`last == true`) on a line of `len` points.
    Selector { len: usize, last: bool },
}

/// Lifts a 1-D operator along `axis`: `op ⊗ I_y` for x and `I_x ⊗ op` for y.
/// Selectors become rectangular maps from the block onto one boundary line
/// (returned as the transpose of the `e ⊗ I` form so they act as extractors).
pub fn lift(op: Op1D<'_>, grid: &BlockGrid2D, axis: Axis) -> Result<LiftedOperator> {
    let along = match axis {
        Axis::X => grid.nx + 1,
        Axis::Y => grid.ny + 1,
    };
    let (m1d, role) = match op {
        Op1D::Derivative(d) => {
            (to_sparse(d.d1()), if axis == Axis::X { Role::Dx } else { Role::Dy })
        }
        Op1D::Norm(h) => (sparse_diag(&h.diag()), if axis == Axis::X { Role::Hx } else { Role::Hy }),
        Op1D::Selector { len, last } => {
            let mut t = TriMat::new((1, len));
            t.add_triplet(0, if last { len - 1 } else { 0 }, 1.0);
            let role = match (axis, last) {
                (Axis::X, false) => Role::E0x,
                (Axis::X, true) => Role::ENx,
                (Axis::Y, false) => Role::E0y,
                (Axis::Y, true) => Role::EMy,
            };
            (t.to_csr(), role)
        }
    };
    if m1d.cols() != along {
        return Err(Error::Dimension(format!("operator of size {} lifted along an axis of {along} points", m1d.cols())));
    }
    let matrix = match axis {
        Axis::X => kron_sparse(&m1d, &sparse_eye(grid.ny + 1)),
        Axis::Y => kron_sparse(&sparse_eye(grid.nx + 1), &m1d),
    };
    Ok(LiftedOperator { role, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, Matrix};

    fn grid() -> BlockGrid2D {
        BlockGrid2D::new((0.0, 1.0), (0.0, 2.0), 10, 12, 4).unwrap()
    }

    #[test]
    fn identity_kron() {
        let k = kron(&Matrix::<f64>::identity(2), &Matrix::identity(3));
        assert_eq!(k, Matrix::identity(6));
        let a = Matrix::from_fn(2, 3, |i, j| int((i + j) as i64));
        let b = Matrix::from_fn(4, 5, |i, j| int((i * j) as i64));
        assert_eq!(kron(&a, &b).shape(), (8, 15));
    }

    #[test]
    fn sparse_kron_matches_dense() {
        let a = Matrix::from_fn(3, 2, |i, j| (i as f64) - 2.0 * j as f64);
        let b = Matrix::from_fn(2, 3, |i, j| (i * j) as f64 + 0.5);
        let s = kron_sparse(&to_sparse(&a), &to_sparse(&b));
        let d = kron(&a, &b);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(s.get(i, j).copied().unwrap_or(0.0), d[(i, j)]);
            }
        }
    }

    #[test]
    fn selector_extracts_interface_line() {
        let g = grid();
        let e = lift(Op1D::Selector { len: g.nx + 1, last: true }, &g, Axis::X).unwrap();
        let u: Vec<f64> = (0..g.points()).map(|k| k as f64).collect();
        let line = sparse_matvec(&e.matrix, &u);
        assert_eq!(line.len(), g.ny + 1);
        for (j, v) in line.iter().enumerate() {
            assert_eq!(*v, g.index(g.nx, j) as f64);
        }
    }

    #[test]
    fn lifted_norms_give_positive_diagonal() {
        let g = grid();
        let hx = lift(Op1D::Norm(&g.x_norm().unwrap()), &g, Axis::X).unwrap();
        let hy = lift(Op1D::Norm(&g.y_norm().unwrap()), &g, Axis::Y).unwrap();
        let m = &hx.matrix * &hy.matrix;
        assert_eq!(m.nnz(), g.points());
        for (v, (i, j)) in m.iter() {
            assert_eq!(i, j);
            assert!(*v > 0.0);
        }
        let d = g.norm_diag(1).unwrap();
        for (v, (i, _)) in m.iter() {
            assert!((v - d[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn dx_of_x_is_one() {
        let g = grid();
        let dx = lift(Op1D::Derivative(&g.x_operator().unwrap()), &g, Axis::X).unwrap();
        let mut f = vec![0.0; g.points()];
        for i in 0..=g.nx {
            for j in 0..=g.ny {
                f[g.index(i, j)] = g.x(i) + 0.0 * g.y(j);
            }
        }
        for v in sparse_matvec(&dx.matrix, &f) {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn axes_commute() {
        let g = grid();
        let dx = lift(Op1D::Derivative(&g.x_operator().unwrap()), &g, Axis::X).unwrap().matrix;
        let hy = lift(Op1D::Norm(&g.y_norm().unwrap()), &g, Axis::Y).unwrap().matrix;
        let a = &dx * &hy;
        let b = &hy * &dx;
        for (v, (i, j)) in a.iter() {
            assert!((v - b.get(i, j).copied().unwrap_or(0.0)).abs() < 1e-12);
        }
        assert_eq!(a.nnz(), b.nnz());
    }

    #[test]
    fn size_mismatch_rejected() {
        let g = grid();
        let op = make_sbp_operator(4, 20, 0.1).unwrap();
        assert!(matches!(lift(Op1D::Derivative(&op), &g, Axis::X), Err(Error::Dimension(_))));
    }
}
