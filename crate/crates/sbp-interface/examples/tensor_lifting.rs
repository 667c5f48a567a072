//! Kronecker lifting of 1-D SBP operators onto a rectangular block.

use sbp_interface::tensor::{lift, sparse_matvec, Axis, BlockGrid2D, Op1D};

fn main() -> sbp_interface::Result<()> {
    let grid = BlockGrid2D::new((0.0, 1.0), (0.0, 2.0), 32, 64, 6)?;
    let dx = lift(Op1D::Derivative(&grid.x_operator()?), &grid, Axis::X)?;
    let dy = lift(Op1D::Derivative(&grid.y_operator()?), &grid, Axis::Y)?;
    let east = lift(Op1D::Selector { len: grid.nx + 1, last: true }, &grid, Axis::X)?;

    let mut u = vec![0.0; grid.points()];
    for i in 0..=grid.nx {
        for j in 0..=grid.ny {
            u[grid.index(i, j)] = (grid.x(i) * grid.y(j)).exp();
        }
    }
    let ux = sparse_matvec(&dx.matrix, &u);
    let uy = sparse_matvec(&dy.matrix, &u);
    let mut err: f64 = 0.0;
    for i in 0..=grid.nx {
        for j in 0..=grid.ny {
            let (x, y) = (grid.x(i), grid.y(j));
            let e = (x * y).exp();
            err = err.max((ux[grid.index(i, j)] - y * e).abs()).max((uy[grid.index(i, j)] - x * e).abs());
        }
    }
    let line = sparse_matvec(&east.matrix, &u);
    println!("{} unknowns, {} nonzeros in Dx, max gradient error {err:.2e}", grid.points(), dx.matrix.nnz());
    println!("east line has {} values, u(1, 2) = {:.6}", line.len(), line[grid.ny]);
    Ok(())
}
