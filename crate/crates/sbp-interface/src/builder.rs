//! Construction of SBP-preserving interpolation pairs from two norms.
//!
//! The unknowns are the upper closure of the fine-to-coarse operator and its
//! interior stencil. The coarse-to-fine partner is tied to it through
//! `c2f = H_f⁻¹ f2cᵀ H_c`, so every accuracy requirement on either operator is a
//! linear equation in the same unknowns. After the required degrees are imposed,
//! the leftover freedom is spent minimising the closure errors for successively
//! higher monomial degrees; any freedom still left is fixed by taking the
//! minimum-norm coefficient vector.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::interp::{fill_interior, place_closure, sbp_partner, verify_accuracy, verify_sbp_preserving};
use crate::interp::{InterpKind, InterpolationPair, StencilShape};
use crate::linalg::{int, solve_affine, Matrix};
use crate::sbp::DiagonalNorm;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct BuildResult {
    pub pair: InterpolationPair,
    /// Largest residual reported by the SBP-preserving and accuracy checks.
    pub residual_norm: f64,
    /// Free parameters left after imposing the accuracy equations.
    pub free_params_used: usize,
    /// Monomial degrees whose closure error was minimised, in order.
    pub optimized_degrees: Vec<usize>,
}

/// Summary written by the command line builder.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildSummary {
    pub p: usize,
    pub shape: StencilShape,
    pub residual_norm: f64,
    pub free_params_used: usize,
    pub optimized_degrees: Vec<usize>,
    pub closure: Vec<Vec<String>>,
    pub stencil: Vec<String>,
}

impl BuildResult {
    pub fn summary(&self, shape: StencilShape) -> BuildSummary {
        let s = |x: &BigRational| crate::linalg::rational_string(x);
        let f = &self.pair.f2c;
        let ratio = self.pair.ratio();
        let reach = ratio * shape.s;
        let mid = f.nrows() / 2;
        let centre = ratio * mid;
        BuildSummary {
            p: self.pair.p,
            shape,
            residual_norm: self.residual_norm,
            free_params_used: self.free_params_used,
            optimized_degrees: self.optimized_degrees.clone(),
            closure: (0..shape.q).map(|i| f.row(i)[..shape.r].iter().map(s).collect()).collect(),
            stencil: (0..=reach).map(|d| s(&f[(mid, centre + d)])).collect(),
        }
    }
}

/// Linear map from the unknowns to the fine-to-coarse entries of the upper half.
struct Layout {
    shape: StencilShape,
    ratio: usize,
}

impl Layout {
    fn unknowns(&self) -> usize {
        self.shape.q * self.shape.r + self.reach() + 1
    }

    fn reach(&self) -> usize {
        self.ratio * self.shape.s
    }

    /// Unknown index feeding `f2c[i][j]`, if any.
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let StencilShape { q, r, .. } = self.shape;
        if i < q {
            return (j < r).then_some(i * r + j);
        }
        let d = j.abs_diff(self.ratio * i);
        (d <= self.reach()).then_some(q * r + d)
    }
}

/// Builds a `p`th-order SBP-preserving pair for the given norms and closure shape.
pub fn build_interp(p: usize, coarse: &DiagonalNorm, fine: &DiagonalNorm, shape: StencilShape) -> Result<BuildResult> {
    if p == 0 {
        return Err(Error::Invalid("accuracy order must be at least 1".into()));
    }
    let (mc, mf) = (coarse.n(), fine.n());
    if mc == 0 || mf % mc != 0 || !(1..=2).contains(&(mf / mc)) {
        return Err(Error::Dimension(format!("fine grid of {mf} intervals is not a 1:1 or 2:1 refinement of {mc}")));
    }
    let ratio = mf / mc;
    let lay = Layout { shape, ratio };
    if mc < 2 * shape.q + 2 * shape.s + 2 || mf + 1 < 2 * shape.r + 2 {
        return Err(Error::GridTooSmall(format!("shape {shape:?} needs a larger grid than {mc} coarse intervals")));
    }
    let wc = coarse.weights();
    let wf = fine.weights();
    let nu = lay.unknowns();
    let b = (p - 1) / 2;

    // Row forms over the unknowns: f2c rows 0..=mc/2, c2f rows 0..=mf/2.
    let f2c_rows: Vec<Vec<(usize, usize)>> = (0..=mc / 2)
        .map(|i| (0..=mf).filter_map(|j| lay.slot(i, j).map(|u| (j, u))).collect())
        .collect();
    let ratio_q = int(ratio as i64);
    let c2f_rows: Vec<Vec<(usize, usize, BigRational)>> = (0..=mf / 2)
        .map(|j| {
            // Lower closure rows only touch the lower half of the fine grid.
            (0..=mc - shape.q)
                .filter_map(|i| lay.slot(i, j).map(|u| (i, u, &ratio_q * &wc[i] / &wf[j])))
                .collect()
        })
        .collect();

    // One equation row per (operator row, degree).
    let equation = |k: usize, kind: Side, row: usize| -> (Vec<BigRational>, BigRational) {
        let mut a = vec![BigRational::zero(); nu];
        let target;
        match kind {
            Side::Coarse => {
                for &(j, u) in &f2c_rows[row] {
                    a[u] += num_traits::pow(int(j as i64), k);
                }
                target = num_traits::pow(int((ratio * row) as i64), k);
            }
            Side::Fine => {
                for (i, u, c) in &c2f_rows[row] {
                    a[*u] += c * num_traits::pow(int((ratio * i) as i64), k);
                }
                target = num_traits::pow(int(row as i64), k);
            }
        }
        (a, target)
    };
    let boundary = |kind: Side, row: usize| match kind {
        Side::Coarse => row < shape.q,
        Side::Fine => row < shape.r,
    };
    let rows_of = |kind: Side| match kind {
        Side::Coarse => 0..f2c_rows.len(),
        Side::Fine => 0..c2f_rows.len(),
    };

    let mut eqs = Vec::new();
    let mut rhs = Vec::new();
    for kind in [Side::Coarse, Side::Fine] {
        for row in rows_of(kind) {
            let kmax = if boundary(kind, row) { b } else { p - 1 };
            for k in 0..=kmax {
                let (a, t) = equation(k, kind, row);
                eqs.push(a);
                rhs.push(t);
            }
        }
    }
    let a = Matrix::from_rows(eqs);
    let sol = solve_affine(&a, &rhs)?;
    let free_params_used = sol.null_basis.ncols();
    let mut z0 = sol.particular;
    let mut basis = sol.null_basis;

    // Sequential least squares on the closure rows.
    let mut optimized_degrees = Vec::new();
    let kmax = p + 2 * shape.s + 4;
    for k in b + 1..=kmax {
        if basis.ncols() == 0 {
            break;
        }
        let mut g = Vec::new();
        let mut y = Vec::new();
        for kind in [Side::Coarse, Side::Fine] {
            for row in rows_of(kind).filter(|&r| boundary(kind, r)) {
                let (a, t) = equation(k, kind, row);
                g.push(a);
                y.push(t);
            }
        }
        let g = Matrix::from_rows(g);
        let gk = g.matmul(&basis);
        if gk.is_zero() {
            continue;
        }
        let gz = g.matvec(&z0);
        let c: Vec<BigRational> = y.iter().zip(&gz).map(|(t, v)| t - v).collect();
        let gkt = gk.transpose();
        let step = solve_affine(&gkt.matmul(&gk), &gkt.matvec(&c))?;
        let dz = basis.matvec(&step.particular);
        z0 = z0.iter().zip(&dz).map(|(a, b)| a + b).collect();
        basis = basis.matmul(&step.null_basis);
        optimized_degrees.push(k);
    }
    if basis.ncols() > 0 {
        let kt = basis.transpose();
        let rhs: Vec<BigRational> = kt.matvec(&z0).into_iter().map(|v| -v).collect();
        let step = solve_affine(&kt.matmul(&basis), &rhs)?;
        let dz = basis.matvec(&step.particular);
        z0 = z0.iter().zip(&dz).map(|(a, b)| a + b).collect();
    }

    let closure: Vec<(usize, usize, BigRational)> = (0..shape.q)
        .flat_map(|i| (0..shape.r).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, z0[i * shape.r + j].clone()))
        .collect();
    let stencil = z0[shape.q * shape.r..].to_vec();
    let mut f2c = Matrix::zeros(mc + 1, mf + 1);
    fill_interior(&mut f2c, &stencil, shape.q, ratio);
    place_closure(&mut f2c, &closure);
    let c2f = sbp_partner(&f2c, coarse, fine);
    let pair = InterpolationPair::from_parts(InterpKind::Custom, p, f2c, c2f, coarse.clone(), fine.clone(), shape.q, shape.r)?;
    let preserving = verify_sbp_preserving(&pair);
    let accuracy = verify_accuracy(&pair);
    if !accuracy.pass || !preserving.pass {
        return Err(Error::Infeasible(format!(
            "constructed pair fails its checks: {:?}",
            preserving.failures.iter().chain(&accuracy.failures).collect::<Vec<_>>()
        )));
    }
    let residual_norm = preserving.max_residual.max(accuracy.max_residual);
    Ok(BuildResult { pair, residual_norm, free_params_used, optimized_degrees })
}

#[derive(Clone, Copy)]
enum Side {
    Coarse,
    Fine,
}

/// Norms and shape used for the tabulated operator of order `p` on a coarse grid of `mc` intervals.
pub fn standard_setup(p: usize, mc: usize) -> Result<(DiagonalNorm, DiagonalNorm, StencilShape)> {
    let shape = match p {
        2 => StencilShape::new(1, 3, 1)?,
        4 => StencilShape::new(3, 11, 2)?,
        6 => StencilShape::new(3, 17, 3)?,
        8 => StencilShape::new(4, 23, 4)?,
        _ => return Err(Error::UnsupportedOrder(p)),
    };
    let h = 1.0 / mc as f64;
    Ok((DiagonalNorm::new(p, mc, h)?, DiagonalNorm::new(p, 2 * mc, h / 2.0)?, shape))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{load_interp_pair, InterpKind};
    use crate::linalg::rat;

    #[test]
    fn second_order_reproduces_table() {
        let (c, f, shape) = standard_setup(2, 12).unwrap();
        let built = build_interp(2, &c, &f, shape).unwrap();
        let table = load_interp_pair(InterpKind::P2, 12, 1.0 / 12.0).unwrap();
        assert_eq!(built.pair.f2c, table.f2c);
        assert_eq!(built.pair.c2f, table.c2f);
        assert_eq!(built.residual_norm, 0.0);
        let s = built.summary(shape);
        assert_eq!(s.closure[0], vec!["11/20", "1/2", "-1/20"]);
        assert_eq!(s.stencil, vec!["11/20", "1/4", "-1/40"]);
    }

    #[test]
    fn conforming_identity() {
        let c = DiagonalNorm::trivial(10, 0.1);
        let built = build_interp(1, &c, &c, StencilShape::new(1, 1, 0).unwrap()).unwrap();
        assert_eq!(built.pair.f2c, Matrix::identity(11));
        assert_eq!(built.pair.c2f, Matrix::identity(11));
        assert_eq!(built.residual_norm, 0.0);
    }

    #[test]
    fn fourth_order_interior_is_forced() {
        let (c, f, shape) = standard_setup(4, 30).unwrap();
        let built = build_interp(4, &c, &f, shape).unwrap();
        let m = &built.pair.f2c;
        assert_eq!(m[(15, 31)], rat(9, 32));
        assert_eq!(m[(15, 33)], rat(-1, 32));
        assert_eq!(m[(15, 32)], rat(-4, 1) * &m[(15, 34)]);
    }

    #[test]
    fn rejects_small_grids_and_bad_ratios() {
        let (c, f, shape) = standard_setup(4, 8).unwrap();
        assert!(matches!(build_interp(4, &c, &f, shape), Err(Error::GridTooSmall(_))));
        let f3 = DiagonalNorm::new(4, 24, 0.1).unwrap();
        assert!(matches!(build_interp(4, &c, &f3, shape), Err(Error::Dimension(_))));
    }
}
