//! Two-block model problem, eigenvalue spectra and energy checks.
//!
//! The model is `u_t + A u_x + B u_y = ε(C11 u_xx + (C12 + C21) u_xy + C22 u_yy)`
//! on `[0,2] × [0,1]`, split at `x = 1` into two unit squares where one block
//! has twice the resolution of the other.

use std::io::Write;
use std::path::Path;

use faer::Mat;
use serde::{Deserialize, Serialize};
use sprs::CsMat;

use crate::interp::{load_interp_pair, InterpKind, InterpolationPair};
use crate::linalg::Matrix;
use crate::sat::{
    assemble_interface_sat, assemble_interior, assemble_outer_boundary_sat, assemble_viscous_outer,
    assemble_viscous_sat, symmetric_split, Assembly, BlockRef, CouplingMode, CouplingSpec, Face, OuterBc,
    ViscousCouplingSpec,
};
use crate::sbp::DiagonalNorm;
use crate::tensor::BlockGrid2D;
use crate::{Error, Result};

/// Default threshold on scaled real parts.
pub const STABILITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoarseSide {
    #[default]
    Left,
    Right,
}

/// `Ω` as either the named default `"abar"` or an explicit matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaSpec {
    Named(String),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViscousConfig {
    pub c11: Vec<Vec<f64>>,
    pub c12: Vec<Vec<f64>>,
    pub c21: Vec<Vec<f64>>,
    pub c22: Vec<Vec<f64>>,
    #[serde(default)]
    pub sigma2: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub sigma4: Option<Vec<Vec<f64>>>,
}

impl ViscousConfig {
    pub fn spec(&self) -> Result<ViscousCouplingSpec> {
        let m = |v: &Vec<Vec<f64>>| to_matrix(v, "viscous coefficient");
        let (c11, c12, c21, c22) = (m(&self.c11)?, m(&self.c12)?, m(&self.c21)?, m(&self.c22)?);
        let half = Matrix::identity(c11.nrows()).scale(&0.5);
        let s2 = self.sigma2.as_ref().map(m).transpose()?.unwrap_or_else(|| half.clone());
        let s4 = self.sigma4.as_ref().map(m).transpose()?.unwrap_or(half);
        ViscousCouplingSpec::new(c11, c12, c21, c22, s2, s4)
    }
}

fn to_matrix(rows: &[Vec<f64>], what: &str) -> Result<Matrix<f64>> {
    let n = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!("{what} must be a non-empty rectangular matrix")));
    }
    Ok(Matrix::from_rows(rows.to_vec()))
}

fn from_matrix(m: &Matrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).to_vec()).collect()
}

/// Configuration of the two-block model problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub interp: InterpKind,
    pub coupling: CouplingMode,
    /// Points per side of the coarse block.
    pub coarse_points: usize,
    #[serde(default)]
    pub coarse_side: CoarseSide,
    /// SBP orders; implied by the interpolation kind unless it is `identity`.
    #[serde(default)]
    pub order_left: Option<usize>,
    #[serde(default)]
    pub order_right: Option<usize>,
    #[serde(default = "default_flux")]
    pub a: Vec<Vec<f64>>,
    #[serde(default = "default_flux")]
    pub b: Vec<Vec<f64>>,
    #[serde(default)]
    pub omega: Option<OmegaSpec>,
    #[serde(default = "default_outer")]
    pub outer: OuterBc,
    #[serde(default)]
    pub viscous: Option<ViscousConfig>,
}

fn default_flux() -> Vec<Vec<f64>> {
    vec![vec![1.0, 0.0], vec![0.0, -1.0]]
}

fn default_outer() -> OuterBc {
    OuterBc::EqualComponents
}

impl ModelConfig {
    /// `A = B = diag(1, −1)` with equal-component outer conditions.
    pub fn new(interp: InterpKind, coupling: CouplingMode, coarse_points: usize) -> Self {
        Self {
            interp,
            coupling,
            coarse_points,
            coarse_side: CoarseSide::Left,
            order_left: None,
            order_right: None,
            a: default_flux(),
            b: default_flux(),
            omega: None,
            outer: default_outer(),
            viscous: None,
        }
    }

    /// Scalar problem `u_t + a u_x + b u_y = ...` with characteristic outer conditions.
    pub fn scalar(interp: InterpKind, coupling: CouplingMode, coarse_points: usize, a: f64, b: f64) -> Self {
        Self {
            a: vec![vec![a]],
            b: vec![vec![b]],
            outer: OuterBc::Characteristic { strength: 1.0 },
            ..Self::new(interp, coupling, coarse_points)
        }
    }

    pub fn with_viscous(mut self, c11: &Matrix<f64>, c12: &Matrix<f64>, c21: &Matrix<f64>, c22: &Matrix<f64>) -> Self {
        self.viscous = Some(ViscousConfig {
            c11: from_matrix(c11),
            c12: from_matrix(c12),
            c21: from_matrix(c21),
            c22: from_matrix(c22),
            sigma2: None,
            sigma4: None,
        });
        self
    }

    /// `(left, right)` SBP orders.
    pub fn orders(&self) -> Result<(usize, usize)> {
        let implied = self.interp.orders().map(|(c, f)| match self.coarse_side {
            CoarseSide::Left => (c, f),
            CoarseSide::Right => (f, c),
        });
        let given = (self.order_left, self.order_right);
        match (implied, given) {
            (Some(o), (None, None)) => Ok(o),
            (Some(o), (l, r)) => {
                if l.is_some_and(|l| l != o.0) || r.is_some_and(|r| r != o.1) {
                    Err(Error::Invalid(format!("orders {given:?} do not match interpolation {} (expects {o:?})", self.interp)))
                } else {
                    Ok(o)
                }
            }
            (None, (Some(l), Some(r))) if l == r => Ok((l, r)),
            (None, (Some(l), None)) | (None, (None, Some(l))) => Ok((l, l)),
            (None, _) => Err(Error::Invalid(format!(
                "interpolation {} needs one SBP order shared by both blocks",
                self.interp
            ))),
        }
    }

    fn ratio(&self) -> usize {
        if self.interp == InterpKind::Identity {
            1
        } else {
            2
        }
    }
}

/// `du/dt = L u` with the global diagonal norm `M`.
#[derive(Clone, Debug)]
pub struct SemiDiscreteSystem {
    pub l: CsMat<f64>,
    pub m: Vec<f64>,
    pub left: BlockGrid2D,
    pub right: BlockGrid2D,
    pub k: usize,
    /// Global indices of the left block's east line followed by the right block's west line,
    /// each component-major.
    pub interface: Vec<usize>,
    pub pair: InterpolationPair,
}

impl SemiDiscreteSystem {
    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn right_offset(&self) -> usize {
        self.k * self.left.points()
    }

    /// Spacing of the right block, used to scale eigenvalues.
    pub fn h_right(&self) -> f64 {
        self.right.hx
    }

    /// Smallest spacing of the two blocks.
    pub fn h_fine(&self) -> f64 {
        self.left.hx.min(self.right.hx)
    }
}

pub fn assemble_model_operator(cfg: &ModelConfig) -> Result<SemiDiscreteSystem> {
    let (ol, or) = cfg.orders()?;
    if cfg.coarse_points < 2 {
        return Err(Error::GridTooSmall(format!("{} coarse points", cfg.coarse_points)));
    }
    let a = to_matrix(&cfg.a, "A")?;
    let b = to_matrix(&cfg.b, "B")?;
    let k = a.nrows();
    if a.shape() != (k, k) || b.shape() != (k, k) {
        return Err(Error::Dimension("A and B must be square of equal size".into()));
    }
    let nc = cfg.coarse_points - 1;
    let nf = cfg.ratio() * nc;
    let (nl, nr) = match cfg.coarse_side {
        CoarseSide::Left => (nc, nf),
        CoarseSide::Right => (nf, nc),
    };
    let left = BlockGrid2D::new((0.0, 1.0), (0.0, 1.0), nl, nl, ol)?;
    let right = BlockGrid2D::new((1.0, 2.0), (0.0, 1.0), nr, nr, or)?;

    let pair = if cfg.interp == InterpKind::Identity {
        InterpolationPair::identity(DiagonalNorm::new(ol, nc, 1.0 / nc as f64)?)
    } else {
        load_interp_pair(cfg.interp, nc, 1.0 / nc as f64)?
    };

    let omega = match (&cfg.omega, cfg.coupling) {
        (_, m) if m != CouplingMode::Quadratic => None,
        (None, _) => Some(symmetric_split(&a)?.bar),
        (Some(OmegaSpec::Named(s)), _) if s.eq_ignore_ascii_case("abar") => Some(symmetric_split(&a)?.bar),
        (Some(OmegaSpec::Named(s)), _) => return Err(Error::Invalid(format!("unknown omega {s:?}"))),
        (Some(OmegaSpec::Matrix(rows)), _) => Some(to_matrix(rows, "omega")?),
    };
    let coupling = CouplingSpec::new(cfg.coupling, a.clone(), omega);
    let viscous = cfg.viscous.as_ref().map(ViscousConfig::spec).transpose()?;
    if let Some(v) = &viscous {
        if v.k() != k {
            return Err(Error::Dimension("viscous coefficients differ in size from A".into()));
        }
    }

    let lref = BlockRef { grid: &left, offset: 0, k };
    let rref = BlockRef { grid: &right, offset: lref.len(), k };
    let n = lref.len() + rref.len();
    let mut asm = Assembly::new(n);
    for blk in [lref, rref] {
        assemble_interior(blk, &a, &b, viscous.as_ref(), &mut asm)?;
    }
    assemble_interface_sat(&coupling, lref, rref, &pair, &mut asm)?;
    if let Some(v) = &viscous {
        assemble_viscous_sat(v, lref, rref, &pair, &mut asm)?;
    }
    let faces = [(lref, [Face::West, Face::South, Face::North]), (rref, [Face::East, Face::South, Face::North])];
    for (blk, list) in faces {
        for face in list {
            assemble_outer_boundary_sat(blk, &a, &b, face, &cfg.outer, &mut asm)?;
            if let Some(v) = &viscous {
                assemble_viscous_outer(v, blk, face, &mut asm)?;
            }
        }
    }

    let mut m = left.norm_diag(k)?;
    m.extend(right.norm_diag(k)?);
    let mut interface = Vec::with_capacity(k * (left.ny + right.ny + 2));
    for c in 0..k {
        interface.extend((0..=left.ny).map(|j| c * left.points() + left.index(left.nx, j)));
    }
    for c in 0..k {
        interface.extend((0..=right.ny).map(|j| rref.offset + c * right.points() + right.index(0, j)));
    }
    Ok(SemiDiscreteSystem { l: asm.finish(), m, left, right, k, interface, pair })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Stable,
    Unstable,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// `(re, im)` of each eigenvalue multiplied by `h_scale`.
    #[serde(skip_serializing)]
    pub eigenvalues: Vec<(f64, f64)>,
    pub unknowns: usize,
    pub h_scale: f64,
    pub max_real_scaled: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
}

pub fn dense(l: &CsMat<f64>) -> Mat<f64> {
    let mut d = Mat::zeros(l.rows(), l.cols());
    for (v, (i, j)) in l.iter() {
        d[(i, j)] += *v;
    }
    d
}

/// Full eigenvalue set of `L`, scaled by `h_scale`.
pub fn compute_spectrum(sys: &SemiDiscreteSystem, h_scale: f64) -> Result<SpectrumReport> {
    let ev = dense(&sys.l).eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let eigenvalues: Vec<(f64, f64)> = ev.iter().map(|z| (z.re * h_scale, z.im * h_scale)).collect();
    let max_real_scaled = eigenvalues.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max);
    let verdict = classify_stability(max_real_scaled, STABILITY_TOL);
    Ok(SpectrumReport {
        eigenvalues,
        unknowns: sys.dim(),
        h_scale,
        max_real_scaled,
        verdict,
        tolerance: STABILITY_TOL,
    })
}

pub fn classify_stability(max_real_scaled: f64, tol: f64) -> Verdict {
    if max_real_scaled <= tol {
        Verdict::Stable
    } else {
        Verdict::Unstable
    }
}

impl SpectrumReport {
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self.verdict = classify_stability(self.max_real_scaled, tol);
        self
    }

    /// Largest distance from an eigenvalue to the nearest conjugate of another eigenvalue.
    pub fn conjugation_defect(&self) -> f64 {
        let ev = &self.eigenvalues;
        let mut by_im: Vec<usize> = (0..ev.len()).collect();
        by_im.sort_by(|&a, &b| ev[a].1.total_cmp(&ev[b].1));
        let ims: Vec<f64> = by_im.iter().map(|&i| ev[i].1).collect();
        let mut worst = 0.0f64;
        for &(re, im) in ev {
            // Search outward from the position of -im in the sorted list.
            let start = ims.partition_point(|&x| x < -im);
            let mut best = f64::INFINITY;
            for dir in [-1isize, 1] {
                let mut p = if dir < 0 { start as isize - 1 } else { start as isize };
                while p >= 0 && (p as usize) < ims.len() {
                    let (r2, i2) = ev[by_im[p as usize]];
                    if (i2 + im).abs() > best {
                        break;
                    }
                    best = best.min(((r2 - re).powi(2) + (i2 + im).powi(2)).sqrt());
                    p += dir;
                }
            }
            worst = worst.max(best);
        }
        worst
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "re_scaled,im_scaled")?;
        for (re, im) in &self.eigenvalues {
            writeln!(f, "{re:.17e},{im:.17e}")?;
        }
        f.flush()?;
        Ok(())
    }
}

/// `S = M L + Lᵀ M`, the rate of change of the discrete energy.
pub fn energy_matrix(sys: &SemiDiscreteSystem) -> Mat<f64> {
    let n = sys.dim();
    let mut s = Mat::zeros(n, n);
    for (v, (i, j)) in sys.l.iter() {
        s[(i, j)] += sys.m[i] * v;
        s[(j, i)] += sys.m[i] * v;
    }
    s
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnergyReport {
    pub max_eigenvalue: f64,
    /// Largest entry of `S` restricted to the interface lines.
    pub interface_max_abs: f64,
    pub interface_max_eigenvalue: f64,
}

pub fn interface_block(sys: &SemiDiscreteSystem, s: &Mat<f64>) -> Mat<f64> {
    let idx = &sys.interface;
    Mat::from_fn(idx.len(), idx.len(), |a, b| s[(idx[a], idx[b])])
}

fn max_sym_eigenvalue(m: &Mat<f64>) -> Result<f64> {
    let ev = m.self_adjoint_eigenvalues(faer::Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
    Ok(ev.last().copied().unwrap_or(0.0))
}

pub fn energy_report(sys: &SemiDiscreteSystem) -> Result<EnergyReport> {
    let s = energy_matrix(sys);
    let blk = interface_block(sys, &s);
    let mut interface_max_abs = 0.0f64;
    for j in 0..blk.ncols() {
        for i in 0..blk.nrows() {
            interface_max_abs = interface_max_abs.max(blk[(i, j)].abs());
        }
    }
    Ok(EnergyReport {
        max_eigenvalue: max_sym_eigenvalue(&s)?,
        interface_max_abs,
        interface_max_eigenvalue: max_sym_eigenvalue(&blk)?,
    })
}

/// Interface coupling matrix `X = [[H_L, −H_L F], [−H_R G, H_R]]` on the two interface lines.
pub fn interface_x(sys: &SemiDiscreteSystem) -> Result<Matrix<f64>> {
    let hl = sys.left.y_norm()?.matrix();
    let hr = sys.right.y_norm()?.matrix();
    let (mc, mf) = (sys.pair.coarse_norm.n(), sys.pair.fine_norm.n());
    let (f, g) = if sys.left.ny == mc && sys.right.ny == mf {
        (sys.pair.f2c_f64(), sys.pair.c2f_f64())
    } else {
        (sys.pair.c2f_f64(), sys.pair.f2c_f64())
    };
    let (nl, nr) = (hl.nrows(), hr.nrows());
    let hlf = hl.matmul(f);
    let hrg = hr.matmul(g);
    Ok(Matrix::from_fn(nl + nr, nl + nr, |i, j| match (i < nl, j < nl) {
        (true, true) => hl[(i, j)],
        (true, false) => -hlf[(i, j - nl)],
        (false, true) => -hrg[(i - nl, j)],
        (false, false) => hr[(i - nl, j - nl)],
    }))
}

/// `K ⊗ X` laid out like [`SemiDiscreteSystem::interface`].
pub fn component_kron_interface(sys: &SemiDiscreteSystem, k: &Matrix<f64>, x: &Matrix<f64>) -> Matrix<f64> {
    let (nl, nr) = (sys.left.ny + 1, sys.right.ny + 1);
    let kc = sys.k;
    let pos = |line: usize| -> (usize, usize) {
        // (component, position within X)
        if line < kc * nl {
            (line / nl, line % nl)
        } else {
            let r = line - kc * nl;
            (r / nr, nl + r % nr)
        }
    };
    let n = kc * (nl + nr);
    Matrix::from_fn(n, n, |a, b| {
        let (ca, xa) = pos(a);
        let (cb, xb) = pos(b);
        k[(ca, cb)] * x[(xa, xb)]
    })
}

pub fn to_faer(m: &Matrix<f64>) -> Mat<f64> {
    m.to_faer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_threshold() {
        assert_eq!(classify_stability(0.0, 1e-10), Verdict::Stable);
        assert_eq!(classify_stability(1e-4, 1e-8), Verdict::Unstable);
    }

    #[test]
    fn fourth_order_sizes() {
        let sys = assemble_model_operator(&ModelConfig::new(InterpKind::P4, CouplingMode::NonDissipative, 15)).unwrap();
        assert_eq!(sys.left.points(), 225);
        assert_eq!(sys.right.points(), 29 * 29);
        assert_eq!(sys.dim(), 2 * (225 + 841));
    }

    #[test]
    fn inconsistent_orders_rejected() {
        let mut cfg = ModelConfig::new(InterpKind::P8To4, CouplingMode::NonDissipative, 25);
        cfg.order_left = Some(4);
        assert!(assemble_model_operator(&cfg).is_err());
        let cfg = ModelConfig::new(InterpKind::Identity, CouplingMode::NonDissipative, 10);
        assert!(assemble_model_operator(&cfg).is_err());
    }

    #[test]
    fn config_round_trip() {
        let cfg = ModelConfig::new(InterpKind::P6, CouplingMode::Quadratic, 21);
        let s = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<ModelConfig>(&s).unwrap(), cfg);
        let bad = r#"{"interp":"p4","coupling":"quadratic","coarse_points":9,"bogus":1}"#;
        assert!(serde_json::from_str::<ModelConfig>(bad).is_err());
    }
}
