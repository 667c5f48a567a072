//! SAT penalty terms for block interfaces, outer boundaries and viscous coupling.
//!
//! Contributions are accumulated into an [`Assembly`], a sparse matrix over the
//! global unknown vector in which each block occupies a contiguous range laid
//! out as described in [`crate::tensor`].

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sprs::{CsMat, TriMat};

use crate::interp::InterpolationPair;
use crate::linalg::Matrix;
use crate::sbp::SbpOperator1D;
use crate::tensor::BlockGrid2D;
use crate::{Error, Result};

const SYM_TOL: f64 = 1e-12;

/// `A = A⁺ + A⁻`, `Ā = A⁺ − A⁻`, from the eigen-decomposition of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymmetricSplit {
    pub a: Matrix<f64>,
    pub plus: Matrix<f64>,
    pub minus: Matrix<f64>,
    pub bar: Matrix<f64>,
}

fn check_symmetric(a: &Matrix<f64>, what: &str) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!("{what} is {:?}, expected square", a.shape())));
    }
    let scale = a.max_abs().max(1.0);
    for i in 0..a.nrows() {
        for j in 0..i {
            if (a[(i, j)] - a[(j, i)]).abs() > SYM_TOL * scale {
                return Err(Error::Invalid(format!("{what} is not symmetric")));
            }
        }
    }
    Ok(())
}

pub fn symmetric_split(a: &Matrix<f64>) -> Result<SymmetricSplit> {
    check_symmetric(a, "flux matrix")?;
    let n = a.nrows();
    let m = faer::Mat::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let evd = m.self_adjoint_eigen(faer::Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let u = evd.U();
    let s = evd.S().column_vector();
    let part = |f: &dyn Fn(f64) -> f64| {
        Matrix::from_fn(n, n, |i, j| (0..n).map(|k| u[(i, k)] * f(s[k]) * u[(j, k)]).sum())
    };
    Ok(SymmetricSplit {
        a: a.clone(),
        plus: part(&|l| l.max(0.0)),
        minus: part(&|l| l.min(0.0)),
        bar: part(&|l| l.abs()),
    })
}

/// Interface treatment of the hyperbolic part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMode {
    /// Energy-neutral penalties `Σ_L = A/2`, `Σ_R = −A/2`.
    NonDissipative,
    /// Upwind penalties `Σ_L = A⁻`, `Σ_R = −A⁺`.
    Characteristic,
    /// Non-dissipative penalties plus the quadratic damping terms weighted by `Ω`.
    Quadratic,
}

impl FromStr for CouplingMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "non_dissipative" | "nondissipative" | "neutral" => Ok(CouplingMode::NonDissipative),
            "characteristic" | "char" => Ok(CouplingMode::Characteristic),
            "quadratic" | "quad" => Ok(CouplingMode::Quadratic),
            _ => Err(Error::Invalid(format!("unknown coupling mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CouplingSpec {
    pub mode: CouplingMode,
    /// Flux matrix normal to the interface.
    pub a: Matrix<f64>,
    pub omega: Option<Matrix<f64>>,
}

impl CouplingSpec {
    pub fn new(mode: CouplingMode, a: Matrix<f64>, omega: Option<Matrix<f64>>) -> Self {
        Self { mode, a, omega }
    }

    /// Quadratic coupling with `Ω = Ā`.
    pub fn quadratic_abar(a: Matrix<f64>) -> Result<Self> {
        let bar = symmetric_split(&a)?.bar;
        Ok(Self { mode: CouplingMode::Quadratic, a, omega: Some(bar) })
    }

    /// Interface penalty matrices `(Σ_L, Σ_R)`.
    pub fn sigmas(&self) -> Result<(Matrix<f64>, Matrix<f64>)> {
        let split = symmetric_split(&self.a)?;
        Ok(match self.mode {
            CouplingMode::Characteristic => (split.minus, split.plus.scale(&-1.0)),
            _ => (self.a.scale(&0.5), self.a.scale(&-0.5)),
        })
    }

    fn checked_omega(&self) -> Result<&Matrix<f64>> {
        let omega = self
            .omega
            .as_ref()
            .ok_or_else(|| Error::Invalid("quadratic coupling needs a symmetric positive definite omega".into()))?;
        check_symmetric(omega, "omega")?;
        if omega.shape() != self.a.shape() {
            return Err(Error::Dimension("omega and A differ in size".into()));
        }
        if omega.min_sym_eigenvalue()? <= 0.0 {
            return Err(Error::Invalid("omega is not positive definite".into()));
        }
        Ok(omega)
    }
}

/// Diffusion coefficients and the two free symmetric penalty parameters.
#[derive(Clone, Debug)]
pub struct ViscousCouplingSpec {
    pub c11: Matrix<f64>,
    pub c12: Matrix<f64>,
    pub c21: Matrix<f64>,
    pub c22: Matrix<f64>,
    pub sigma2: Matrix<f64>,
    pub sigma4: Matrix<f64>,
}

/// Penalty matrices derived from `sigma2` and `sigma4`.
#[derive(Clone, Debug)]
pub struct ViscousSigmas {
    pub s2l: Matrix<f64>,
    pub s2r: Matrix<f64>,
    pub s3l: Matrix<f64>,
    pub s3r: Matrix<f64>,
    pub s4l: Matrix<f64>,
    pub s4r: Matrix<f64>,
    pub s5l: Matrix<f64>,
    pub s5r: Matrix<f64>,
}

impl ViscousCouplingSpec {
    /// Validates `xᵀ(C + Cᵀ)x ≥ 0` for the block matrix `C = [[C11, C12], [C21, C22]]`.
    pub fn new(
        c11: Matrix<f64>,
        c12: Matrix<f64>,
        c21: Matrix<f64>,
        c22: Matrix<f64>,
        sigma2: Matrix<f64>,
        sigma4: Matrix<f64>,
    ) -> Result<Self> {
        let k = c11.nrows();
        for (m, name) in [(&c11, "C11"), (&c12, "C12"), (&c21, "C21"), (&c22, "C22"), (&sigma2, "sigma2"), (&sigma4, "sigma4")] {
            if m.shape() != (k, k) {
                return Err(Error::Dimension(format!("{name} is {:?}, expected {k}×{k}", m.shape())));
            }
        }
        check_symmetric(&sigma2, "sigma2")?;
        check_symmetric(&sigma4, "sigma4")?;
        let c = Matrix::from_fn(2 * k, 2 * k, |i, j| {
            let blk = match (i / k, j / k) {
                (0, 0) => &c11,
                (0, 1) => &c12,
                (1, 0) => &c21,
                _ => &c22,
            };
            blk[(i % k, j % k)]
        });
        let lo = c.min_sym_eigenvalue()?;
        if lo < -1e-12 * c.max_abs().max(1.0) {
            return Err(Error::Invalid(format!("diffusion matrix violates parabolicity (eigenvalue {lo:.3e})")));
        }
        Ok(Self { c11, c12, c21, c22, sigma2, sigma4 })
    }

    /// Default penalties `Σ² = Σ⁴ = I/2`.
    pub fn with_half_sigmas(c11: Matrix<f64>, c12: Matrix<f64>, c21: Matrix<f64>, c22: Matrix<f64>) -> Result<Self> {
        let half = Matrix::identity(c11.nrows()).scale(&0.5);
        Self::new(c11, c12, c21, c22, half.clone(), half)
    }

    pub fn k(&self) -> usize {
        self.c11.nrows()
    }

    pub fn is_zero(&self) -> bool {
        [&self.c11, &self.c12, &self.c21, &self.c22].iter().all(|m| m.max_abs() == 0.0)
    }

    pub fn sigmas(&self) -> ViscousSigmas {
        let eye = Matrix::identity(self.k());
        ViscousSigmas {
            s2l: self.sigma2.sub(&eye),
            s2r: self.sigma2.clone(),
            s3l: self.sigma2.scale(&-1.0),
            s3r: eye.sub(&self.sigma2),
            s4l: self.sigma4.sub(&eye),
            s4r: self.sigma4.clone(),
            s5l: self.sigma4.scale(&-1.0),
            s5r: eye.sub(&self.sigma4),
        }
    }
}

/// A block placed in the global unknown vector.
#[derive(Clone, Copy, Debug)]
pub struct BlockRef<'a> {
    pub grid: &'a BlockGrid2D,
    pub offset: usize,
    pub k: usize,
}

impl BlockRef<'_> {
    pub fn len(&self) -> usize {
        self.k * self.grid.points()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Sparse accumulator for a global operator.
pub struct Assembly {
    n: usize,
    tri: TriMat<f64>,
}

fn nonzeros(m: &Matrix<f64>) -> Vec<(usize, usize, f64)> {
    let mut v = Vec::new();
    for i in 0..m.nrows() {
        for (j, &x) in m.row(i).iter().enumerate() {
            if x != 0.0 {
                v.push((i, j, x));
            }
        }
    }
    v
}

impl Assembly {
    pub fn new(n: usize) -> Self {
        Self { n, tri: TriMat::new((n, n)) }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.tri.add_triplet(i, j, v);
    }

    /// Adds `K ⊗ X ⊗ Y` into the (row block, column block) position.
    pub fn add_kron3(&mut self, row: BlockRef<'_>, col: BlockRef<'_>, k: &Matrix<f64>, x: &Matrix<f64>, y: &Matrix<f64>) {
        let (rg, cg) = (row.grid, col.grid);
        assert_eq!(k.shape(), (row.k, col.k), "component matrix shape");
        assert_eq!(x.shape(), (rg.nx + 1, cg.nx + 1), "x factor shape");
        assert_eq!(y.shape(), (rg.ny + 1, cg.ny + 1), "y factor shape");
        let (kn, xn, yn) = (nonzeros(k), nonzeros(x), nonzeros(y));
        let (rp, cp) = (rg.points(), cg.points());
        for &(c, d, kv) in &kn {
            for &(i, i2, xv) in &xn {
                for &(j, j2, yv) in &yn {
                    let r = row.offset + c * rp + rg.index(i, j);
                    let s = col.offset + d * cp + cg.index(i2, j2);
                    self.tri.add_triplet(r, s, kv * xv * yv);
                }
            }
        }
    }

    pub fn finish(self) -> CsMat<f64> {
        self.tri.to_csr()
    }
}

/// Block faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Face {
    West,
    East,
    South,
    North,
}

impl Face {
    pub const ALL: [Face; 4] = [Face::West, Face::East, Face::South, Face::North];

    /// Sign of the outward normal along the face's axis.
    pub fn normal_sign(self) -> f64 {
        match self {
            Face::West | Face::South => -1.0,
            Face::East | Face::North => 1.0,
        }
    }

    pub fn is_x(self) -> bool {
        matches!(self, Face::West | Face::East)
    }
}

/// Outer boundary conditions with zero data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OuterBc {
    /// Incoming characteristics set to zero, scaled by `strength` (1 is the standard penalty).
    Characteristic { strength: f64 },
    /// The two components are equal on the boundary; energy neutral penalty.
    EqualComponents,
}

/// 1-D dense helpers.
fn unit(n: usize, at: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[at] = 1.0;
    e
}

fn outer(col: &[f64], row: &[f64]) -> Matrix<f64> {
    Matrix::from_fn(col.len(), row.len(), |i, j| col[i] * row[j])
}

fn hinv_e(op: &SbpOperator1D, at: usize) -> Vec<f64> {
    let h = op.norm().diag();
    unit(h.len(), at).iter().zip(&h).map(|(e, w)| e / w).collect()
}

/// `H⁻¹ D1ᵀ e_at`.
fn hinv_dt_e(op: &SbpOperator1D, at: usize) -> Vec<f64> {
    let h = op.norm().diag();
    let d = op.d1();
    (0..h.len()).map(|i| d[(at, i)] / h[i]).collect()
}

/// Row `at` of `D1`.
fn d_row(op: &SbpOperator1D, at: usize) -> Vec<f64> {
    op.d1().row(at).to_vec()
}

/// `H⁻¹ D1ᵀ H`, the norm adjoint of `D1`.
fn h_adjoint(op: &SbpOperator1D) -> Matrix<f64> {
    let h = op.norm().diag();
    let d = op.d1();
    Matrix::from_fn(h.len(), h.len(), |i, j| d[(j, i)] * h[j] / h[i])
}

struct Ops {
    dx: SbpOperator1D,
    dy: SbpOperator1D,
}

fn ops(grid: &BlockGrid2D) -> Result<Ops> {
    Ok(Ops { dx: grid.x_operator()?, dy: grid.y_operator()? })
}

/// Interface maps `(to_left, to_right)` between the two y-grids.
fn interface_maps<'p>(pair: &'p InterpolationPair, left: &BlockGrid2D, right: &BlockGrid2D) -> Result<(&'p Matrix<f64>, &'p Matrix<f64>)> {
    let (mc, mf) = (pair.coarse_norm.n(), pair.fine_norm.n());
    if left.ny == mc && right.ny == mf {
        Ok((pair.f2c_f64(), pair.c2f_f64()))
    } else if left.ny == mf && right.ny == mc {
        Ok((pair.c2f_f64(), pair.f2c_f64()))
    } else {
        Err(Error::Dimension(format!(
            "interface grids of {} and {} intervals do not match a pair of {mc} and {mf}",
            left.ny, right.ny
        )))
    }
}

/// Hyperbolic interface penalties between `left` (east face) and `right` (west face).
pub fn assemble_interface_sat(
    spec: &CouplingSpec,
    left: BlockRef<'_>,
    right: BlockRef<'_>,
    pair: &InterpolationPair,
    asm: &mut Assembly,
) -> Result<()> {
    let k = spec.a.nrows();
    if left.k != k || right.k != k {
        return Err(Error::Dimension("component count differs from flux matrix size".into()));
    }
    let (f, g) = interface_maps(pair, left.grid, right.grid)?;
    let (lo, ro) = (ops(left.grid)?, ops(right.grid)?);
    let (nl, nr) = (left.grid.nx, right.grid.nx);
    let (sl, sr) = spec.sigmas()?;

    let eye_l = Matrix::identity(left.grid.ny + 1);
    let eye_r = Matrix::identity(right.grid.ny + 1);
    let xl = hinv_e(&lo.dx, nl);
    let xr = hinv_e(&ro.dx, 0);
    let (enl, e0r) = (unit(nl + 1, nl), unit(nr + 1, 0));
    let ll = outer(&xl, &enl);
    let lr = outer(&xl, &e0r);
    let rr = outer(&xr, &e0r);
    let rl = outer(&xr, &enl);

    asm.add_kron3(left, left, &sl, &ll, &eye_l);
    asm.add_kron3(left, right, &sl.scale(&-1.0), &lr, f);
    asm.add_kron3(right, right, &sr, &rr, &eye_r);
    asm.add_kron3(right, left, &sr.scale(&-1.0), &rl, g);

    if spec.mode == CouplingMode::Quadratic {
        let omega = spec.checked_omega()?;
        let neg = omega.scale(&-1.0);
        let hl = left.grid.y_norm()?.matrix();
        let hr = right.grid.y_norm()?.matrix();
        asm.add_kron3(left, left, &neg, &ll, &hl);
        asm.add_kron3(left, left, &neg, &ll, &f.matmul(&hr).matmul(g));
        asm.add_kron3(left, right, omega, &lr, &hl.matmul(f));
        asm.add_kron3(left, right, omega, &lr, &f.matmul(&hr));
        asm.add_kron3(right, right, &neg, &rr, &hr);
        asm.add_kron3(right, right, &neg, &rr, &g.matmul(&hl).matmul(f));
        asm.add_kron3(right, left, omega, &rl, &hr.matmul(g));
        asm.add_kron3(right, left, omega, &rl, &g.matmul(&hl));
    }
    Ok(())
}

/// Penalty for one outer face of a block with flux matrices `A` (x) and `B` (y).
pub fn assemble_outer_boundary_sat(
    block: BlockRef<'_>,
    a: &Matrix<f64>,
    b: &Matrix<f64>,
    face: Face,
    bc: &OuterBc,
    asm: &mut Assembly,
) -> Result<()> {
    let g = block.grid;
    let flux = if face.is_x() { a } else { b };
    if flux.shape() != (block.k, block.k) {
        return Err(Error::Dimension("flux matrix size differs from component count".into()));
    }
    let jn = flux.scale(&face.normal_sign());
    let sigma = match bc {
        OuterBc::Characteristic { strength } => symmetric_split(&jn)?.minus.scale(strength),
        OuterBc::EqualComponents => {
            let s = jn[(0, 0)];
            let fits = block.k == 2 && jn[(0, 1)] == 0.0 && jn[(1, 0)] == 0.0 && jn[(1, 1)] == -s;
            if !fits {
                return Err(Error::UnsupportedBc(
                    "equal-component condition needs two components with a flux of the form diag(s, -s)".into(),
                ));
            }
            // Σ_b cᵀ with c = (1, -1) and Σ_b = (s/2)(1, 1).
            Matrix::from_rows(vec![vec![0.5 * s, -0.5 * s], vec![0.5 * s, -0.5 * s]])
        }
    };
    let o = ops(g)?;
    let (x, y) = face_factors(&o, g, face);
    asm.add_kron3(block, block, &sigma, &x, &y);
    Ok(())
}

/// `H⁻¹ e eᵀ` on the face axis, identity on the other.
fn face_factors(o: &Ops, g: &BlockGrid2D, face: Face) -> (Matrix<f64>, Matrix<f64>) {
    match face {
        Face::West | Face::East => {
            let at = if face == Face::West { 0 } else { g.nx };
            (outer(&hinv_e(&o.dx, at), &unit(g.nx + 1, at)), Matrix::identity(g.ny + 1))
        }
        Face::South | Face::North => {
            let at = if face == Face::South { 0 } else { g.ny };
            (Matrix::identity(g.nx + 1), outer(&hinv_e(&o.dy, at), &unit(g.ny + 1, at)))
        }
    }
}

/// Volume terms `−A⊗Dx − B⊗Dy` plus the second-derivative terms when diffusion is present.
pub fn assemble_interior(
    block: BlockRef<'_>,
    a: &Matrix<f64>,
    b: &Matrix<f64>,
    viscous: Option<&ViscousCouplingSpec>,
    asm: &mut Assembly,
) -> Result<()> {
    let g = block.grid;
    let o = ops(g)?;
    let ix = Matrix::identity(g.nx + 1);
    let iy = Matrix::identity(g.ny + 1);
    asm.add_kron3(block, block, &a.scale(&-1.0), o.dx.d1(), &iy);
    asm.add_kron3(block, block, &b.scale(&-1.0), &ix, o.dy.d1());
    if let Some(v) = viscous {
        let dxx = o.dx.d1().matmul(o.dx.d1());
        let dyy = o.dy.d1().matmul(o.dy.d1());
        asm.add_kron3(block, block, &v.c11, &dxx, &iy);
        asm.add_kron3(block, block, &v.c12.add(&v.c21), o.dx.d1(), o.dy.d1());
        asm.add_kron3(block, block, &v.c22, &ix, &dyy);
    }
    Ok(())
}

/// Weak zero-flux condition for the diffusive flux on an outer face; energy neutral.
pub fn assemble_viscous_outer(spec: &ViscousCouplingSpec, block: BlockRef<'_>, face: Face, asm: &mut Assembly) -> Result<()> {
    let g = block.grid;
    let o = ops(g)?;
    let sign = -face.normal_sign();
    match face {
        Face::West | Face::East => {
            let at = if face == Face::West { 0 } else { g.nx };
            let he = hinv_e(&o.dx, at);
            let iy = Matrix::identity(g.ny + 1);
            asm.add_kron3(block, block, &spec.c11.scale(&sign), &outer(&he, &d_row(&o.dx, at)), &iy);
            asm.add_kron3(block, block, &spec.c12.scale(&sign), &outer(&he, &unit(g.nx + 1, at)), o.dy.d1());
        }
        Face::South | Face::North => {
            let at = if face == Face::South { 0 } else { g.ny };
            let he = hinv_e(&o.dy, at);
            let ix = Matrix::identity(g.nx + 1);
            asm.add_kron3(block, block, &spec.c21.scale(&sign), o.dx.d1(), &outer(&he, &unit(g.ny + 1, at)));
            asm.add_kron3(block, block, &spec.c22.scale(&sign), &ix, &outer(&he, &d_row(&o.dy, at)));
        }
    }
    Ok(())
}

/// Interface penalties for the diffusive terms.
///
/// The x-flux at the interface is `C11 u_x + C12 u_y`, so the cross penalties
/// carry `C12`. The `u_y` penalty uses the norm adjoint `H⁻¹ Dyᵀ H` of the
/// tangential derivative so that the interface terms cancel.
pub fn assemble_viscous_sat(
    spec: &ViscousCouplingSpec,
    left: BlockRef<'_>,
    right: BlockRef<'_>,
    pair: &InterpolationPair,
    asm: &mut Assembly,
) -> Result<()> {
    if spec.is_zero() {
        return Ok(());
    }
    let (f, g) = interface_maps(pair, left.grid, right.grid)?;
    let (lo, ro) = (ops(left.grid)?, ops(right.grid)?);
    let (nl, nr) = (left.grid.nx, right.grid.nx);
    let s = spec.sigmas();
    let (c11, c12) = (&spec.c11, &spec.c12);
    let eye_l = Matrix::identity(left.grid.ny + 1);
    let eye_r = Matrix::identity(right.grid.ny + 1);
    let (enl, e0r) = (unit(nl + 1, nl), unit(nr + 1, 0));
    let neg = |m: Matrix<f64>| m.scale(&-1.0);

    // Left block, east face.
    let he = hinv_e(&lo.dx, nl);
    let hde = hinv_dt_e(&lo.dx, nl);
    let adj_l = h_adjoint(&lo.dy);
    let k1 = s.s2l.matmul(c11);
    asm.add_kron3(left, left, &k1, &outer(&hde, &enl), &eye_l);
    asm.add_kron3(left, right, &neg(k1), &outer(&hde, &e0r), f);
    let k2 = c11.matmul(&s.s3l);
    asm.add_kron3(left, left, &k2, &outer(&he, &d_row(&lo.dx, nl)), &eye_l);
    asm.add_kron3(left, right, &neg(k2), &outer(&he, &d_row(&ro.dx, 0)), f);
    let k3 = s.s4l.matmul(c12);
    asm.add_kron3(left, left, &k3, &outer(&he, &enl), &adj_l);
    asm.add_kron3(left, right, &neg(k3), &outer(&he, &e0r), &adj_l.matmul(f));
    let k4 = c12.matmul(&s.s5l);
    asm.add_kron3(left, left, &k4, &outer(&he, &enl), lo.dy.d1());
    asm.add_kron3(left, right, &neg(k4), &outer(&he, &e0r), &f.matmul(ro.dy.d1()));

    // Right block, west face.
    let he = hinv_e(&ro.dx, 0);
    let hde = hinv_dt_e(&ro.dx, 0);
    let adj_r = h_adjoint(&ro.dy);
    let k1 = s.s2r.matmul(c11);
    asm.add_kron3(right, right, &k1, &outer(&hde, &e0r), &eye_r);
    asm.add_kron3(right, left, &neg(k1), &outer(&hde, &enl), g);
    let k2 = c11.matmul(&s.s3r);
    asm.add_kron3(right, right, &k2, &outer(&he, &d_row(&ro.dx, 0)), &eye_r);
    asm.add_kron3(right, left, &neg(k2), &outer(&he, &d_row(&lo.dx, nl)), g);
    let k3 = s.s4r.matmul(c12);
    asm.add_kron3(right, right, &k3, &outer(&he, &e0r), &adj_r);
    asm.add_kron3(right, left, &neg(k3), &outer(&he, &enl), &adj_r.matmul(g));
    let k4 = c12.matmul(&s.s5r);
    asm.add_kron3(right, right, &k4, &outer(&he, &e0r), ro.dy.d1());
    asm.add_kron3(right, left, &neg(k4), &outer(&he, &enl), &g.matmul(lo.dy.d1()));
    Ok(())
}
