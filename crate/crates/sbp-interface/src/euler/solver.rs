//! Two-block Euler solver: coarse block `[0,5]²`, fine block `[5,10]×[0,5]`.

use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;
use serde::{Deserialize, Serialize};

use super::vortex::{vortex_state, Primitive, VortexParams};
use crate::interp::{check_inter2, load_interp_pair, InterpKind, InterpolationPair};
use crate::sat::CouplingMode;
use crate::sbp::{make_sbp_operator, DiagonalNorm, SbpOperator1D};
use crate::tensor::BlockGrid2D;
use crate::{Error, Result};

const K: usize = 4;
type M4 = [[f64; K]; K];

/// SBP orders of the two blocks, written `"p"` or `"coarse:fine"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OrderSpec {
    pub coarse: usize,
    pub fine: usize,
}

impl OrderSpec {
    pub fn interp(self) -> Result<InterpKind> {
        Ok(match (self.coarse, self.fine) {
            (2, 2) => InterpKind::P2,
            (4, 4) => InterpKind::P4,
            (6, 6) => InterpKind::P6,
            (8, 8) => InterpKind::P8,
            (4, 2) => InterpKind::P4To2,
            (8, 4) => InterpKind::P8To4,
            (c, f) => return Err(Error::Invalid(format!("no interpolation pair couples order {c} to order {f}"))),
        })
    }

    pub fn label(self) -> String {
        if self.coarse == self.fine {
            self.coarse.to_string()
        } else {
            format!("{}:{}", self.coarse, self.fine)
        }
    }
}

impl TryFrom<String> for OrderSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<OrderSpec> for String {
    fn from(o: OrderSpec) -> String {
        o.label()
    }
}

impl std::str::FromStr for OrderSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad order {s:?}")));
        let spec = match s.split_once(':') {
            Some((a, b)) => OrderSpec { coarse: num(a)?, fine: num(b)? },
            None => {
                let p = num(s)?;
                OrderSpec { coarse: p, fine: p }
            }
        };
        spec.interp()?;
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerConfig {
    pub order: OrderSpec,
    /// Points per side of the coarse block.
    pub m: usize,
    /// Interface treatment; chosen from the pair when absent (see [`EulerConfig::coupling_mode`]).
    #[serde(default)]
    pub coupling: Option<CouplingMode>,
    /// Defaults to 0.5, or 0.2 when the coarse side is eighth order.
    #[serde(default)]
    pub cfl: Option<f64>,
    #[serde(default = "default_tend")]
    pub t_end: f64,
    #[serde(default)]
    pub vortex: VortexParams,
}

/// Pairs whose unit-spacing `inter2` eigenvalue falls below this get quadratic coupling by default.
pub const INTER2_CHARACTERISTIC_LIMIT: f64 = -1.0;

fn default_tend() -> f64 {
    1.0
}

impl EulerConfig {
    pub fn new(order: OrderSpec, m: usize) -> Self {
        Self { order, m, coupling: None, cfl: None, t_end: default_tend(), vortex: VortexParams::default() }
    }

    pub fn with_coupling(mut self, mode: CouplingMode) -> Self {
        self.coupling = Some(mode);
        self
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = Some(cfl);
        self
    }

    /// Characteristic coupling unless the pair badly violates the `inter2` conditions,
    /// in which case the quadratic penalties are used.
    pub fn coupling_mode(&self) -> Result<CouplingMode> {
        if let Some(m) = self.coupling {
            return Ok(m);
        }
        let kind = self.order.interp()?;
        let mc = 4 * kind.shape().map_or(4, |s| s.r);
        let pair = load_interp_pair(kind, mc, 1.0)?;
        let lo = check_inter2(&pair)?.psd_min_eigenvalue.unwrap_or(0.0);
        Ok(if lo < INTER2_CHARACTERISTIC_LIMIT { CouplingMode::Quadratic } else { CouplingMode::Characteristic })
    }

    pub fn cfl_value(&self) -> f64 {
        self.cfl.unwrap_or(if self.order.coarse == 8 { 0.2 } else { 0.5 })
    }
}

/// Conservative variables `(ρ, ρu, ρv, E)` per block, component-major.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerState {
    pub t: f64,
    pub blocks: [Vec<f64>; 2],
}

/// Sparse rows of an interface map.
#[derive(Clone, Debug)]
struct RowMap(Vec<Vec<(usize, f64)>>);

impl RowMap {
    fn from_dense(m: &crate::linalg::Matrix<f64>) -> Self {
        RowMap(
            (0..m.nrows())
                .map(|i| m.row(i).iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| (j, *v)).collect())
                .collect(),
        )
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.0.iter().map(|r| r.iter().map(|&(j, v)| v * x[j]).sum()).collect()
    }
}

fn mat4_vec(m: &M4, x: &[f64; K]) -> [f64; K] {
    let mut y = [0.0; K];
    for i in 0..K {
        for j in 0..K {
            y[i] += m[i][j] * x[j];
        }
    }
    y
}

/// Split of the free-stream flux Jacobian in direction `(nx, ny)` into `(J, J⁺, J⁻, |J|)`.
pub fn jacobian_split(state: Primitive, gamma: f64, n: (f64, f64)) -> Result<[M4; 4]> {
    let Primitive { rho, u, v, p } = state;
    let c = (gamma * p / rho).sqrt();
    let h = (p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v) + p) / rho;
    let vn = u * n.0 + v * n.1;
    let cols = [
        [1.0, u - c * n.0, v - c * n.1, h - c * vn],
        [1.0, u, v, 0.5 * (u * u + v * v)],
        [0.0, -n.1, n.0, -n.1 * u + n.0 * v],
        [1.0, u + c * n.0, v + c * n.1, h + c * vn],
    ];
    let lam = [vn - c, vn, vn, vn + c];
    let r = Mat::from_fn(K, K, |i, j| cols[j][i]);
    let rinv = r.partial_piv_lu().inverse();
    if !rinv.as_ref().is_all_finite() {
        return Err(Error::Nonphysical("degenerate flux Jacobian".into()));
    }
    let build = |f: &dyn Fn(f64) -> f64| {
        let mut m = [[0.0; K]; K];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..K).map(|k| r[(i, k)] * f(lam[k]) * rinv[(k, j)]).sum();
            }
        }
        m
    };
    Ok([build(&|l| l), build(&|l| l.max(0.0)), build(&|l| l.min(0.0)), build(&|l| l.abs())])
}

fn scale4(m: &M4, s: f64) -> M4 {
    let mut r = *m;
    r.iter_mut().flatten().for_each(|e| *e *= s);
    r
}

struct Block {
    grid: BlockGrid2D,
    dx: SbpOperator1D,
    dy: SbpOperator1D,
    hx: Vec<f64>,
    hy: Vec<f64>,
}

impl Block {
    fn new(grid: BlockGrid2D) -> Result<Self> {
        let dx = make_sbp_operator(grid.order, grid.nx, grid.hx)?;
        let dy = make_sbp_operator(grid.order, grid.ny, grid.hy)?;
        let hx = dx.norm().diag();
        let hy = dy.norm().diag();
        Ok(Self { grid, dx, dy, hx, hy })
    }

    fn points(&self) -> usize {
        self.grid.points()
    }
}

pub struct EulerSolver {
    pub config: EulerConfig,
    blocks: [Block; 2],
    pair: InterpolationPair,
    to_left: RowMap,
    to_right: RowMap,
    sigma_l: M4,
    sigma_r: M4,
    omega: Option<M4>,
    /// Penalties for west, east, south, north faces.
    outer: [M4; 4],
}

impl EulerSolver {
    pub fn new(config: EulerConfig) -> Result<Self> {
        config.vortex.validate()?;
        if !(config.cfl_value() > 0.0) || !(config.t_end >= 0.0) {
            return Err(Error::Invalid("cfl must be positive and t_end non-negative".into()));
        }
        let kind = config.order.interp()?;
        if config.m < 2 {
            return Err(Error::GridTooSmall(format!("M = {}", config.m)));
        }
        let mc = config.m - 1;
        let coarse = BlockGrid2D::new((0.0, 5.0), (0.0, 5.0), mc, mc, config.order.coarse)?;
        let fine = BlockGrid2D::new((5.0, 10.0), (0.0, 5.0), 2 * mc, 2 * mc, config.order.fine)?;
        let pair = load_interp_pair(kind, mc, coarse.hy)?;
        let to_left = RowMap::from_dense(pair.f2c_f64());
        let to_right = RowMap::from_dense(pair.c2f_f64());

        let g = config.vortex.gamma;
        let inf = config.vortex.free_stream();
        let [a, ap, am, abar] = jacobian_split(inf, g, (1.0, 0.0))?;
        let coupling = config.coupling_mode()?;
        let (sigma_l, sigma_r, omega) = match coupling {
            CouplingMode::Characteristic => (am, scale4(&ap, -1.0), None),
            CouplingMode::NonDissipative => (scale4(&a, 0.5), scale4(&a, -0.5), None),
            CouplingMode::Quadratic => (scale4(&a, 0.5), scale4(&a, -0.5), Some(abar)),
        };
        let mut outer = [[[0.0; K]; K]; 4];
        for (slot, n) in outer.iter_mut().zip([(-1.0, 0.0), (1.0, 0.0), (0.0, -1.0), (0.0, 1.0)]) {
            *slot = jacobian_split(inf, g, n)?[2];
        }
        Ok(Self {
            blocks: [Block::new(coarse)?, Block::new(fine)?],
            config,
            pair,
            to_left,
            to_right,
            sigma_l,
            sigma_r,
            omega,
            outer,
        })
    }

    pub fn grids(&self) -> [&BlockGrid2D; 2] {
        [&self.blocks[0].grid, &self.blocks[1].grid]
    }

    pub fn pair(&self) -> &InterpolationPair {
        &self.pair
    }

    pub fn h_fine(&self) -> f64 {
        self.blocks[1].grid.hx
    }

    /// `cfl · h_fine / (|u∞| + c∞)`.
    pub fn max_time_step(&self) -> f64 {
        let v = &self.config.vortex;
        self.config.cfl_value() * self.h_fine() / (1.0 + v.sound_speed())
    }

    fn sample(&self, f: impl Fn(f64, f64) -> Primitive) -> [Vec<f64>; 2] {
        let g = self.config.vortex.gamma;
        let mut out: [Vec<f64>; 2] = Default::default();
        for (b, dst) in self.blocks.iter().zip(out.iter_mut()) {
            let np = b.points();
            *dst = vec![0.0; K * np];
            for i in 0..=b.grid.nx {
                for j in 0..=b.grid.ny {
                    let q = f(b.grid.x(i), b.grid.y(j)).to_conservative(g);
                    let idx = b.grid.index(i, j);
                    for c in 0..K {
                        dst[c * np + idx] = q[c];
                    }
                }
            }
        }
        out
    }

    pub fn exact_state(&self, t: f64) -> EulerState {
        let v = self.config.vortex;
        EulerState { t, blocks: self.sample(|x, y| vortex_state(x, y, t, &v)) }
    }

    pub fn free_stream_state(&self) -> EulerState {
        let s = self.config.vortex.free_stream();
        EulerState { t: 0.0, blocks: self.sample(|_, _| s) }
    }

    /// Time derivative of `state` with exact-solution data on outer faces.
    /// With `free_stream_data`, the outer data is the free stream instead.
    pub fn rhs_with(&self, state: &EulerState, free_stream_data: bool) -> Result<[Vec<f64>; 2]> {
        let g = self.config.vortex.gamma;
        let params = self.config.vortex;
        let inf = params.free_stream();
        let data = |x: f64, y: f64| {
            if free_stream_data {
                inf.to_conservative(g)
            } else {
                vortex_state(x, y, state.t, &params).to_conservative(g)
            }
        };
        let mut out: [Vec<f64>; 2] = Default::default();
        for (bi, (b, q)) in self.blocks.iter().zip(state.blocks.iter()).enumerate() {
            let np = b.points();
            if q.len() != K * np {
                return Err(Error::Dimension(format!("block {bi} holds {} values, expected {}", q.len(), K * np)));
            }
            let mut fx = vec![0.0; K * np];
            let mut fy = vec![0.0; K * np];
            for idx in 0..np {
                let (rho, mu, mv, e) = (q[idx], q[np + idx], q[2 * np + idx], q[3 * np + idx]);
                let (u, v) = (mu / rho, mv / rho);
                let p = (g - 1.0) * (e - 0.5 * rho * (u * u + v * v));
                if !(rho > 0.0 && p > 0.0) {
                    let (i, j) = (idx / (b.grid.ny + 1), idx % (b.grid.ny + 1));
                    return Err(Error::Nonphysical(format!(
                        "rho = {rho:.3e}, p = {p:.3e} at ({:.4}, {:.4}) in block {bi}, t = {:.4}",
                        b.grid.x(i),
                        b.grid.y(j),
                        state.t
                    )));
                }
                fx[idx] = mu;
                fx[np + idx] = mu * u + p;
                fx[2 * np + idx] = mu * v;
                fx[3 * np + idx] = u * (e + p);
                fy[idx] = mv;
                fy[np + idx] = mu * v;
                fy[2 * np + idx] = mv * v + p;
                fy[3 * np + idx] = v * (e + p);
            }
            let mut r = vec![0.0; K * np];
            let ny1 = b.grid.ny + 1;
            for c in 0..K {
                for j in 0..ny1 {
                    let o = c * np + j;
                    b.dx.apply_strided(&fx, o, ny1, &mut r, o, ny1, -1.0 / b.grid.hx);
                }
                for i in 0..=b.grid.nx {
                    let o = c * np + i * ny1;
                    b.dy.apply_strided(&fy, o, 1, &mut r, o, 1, -1.0 / b.grid.hy);
                }
            }
            // Outer faces: the coarse block has no east face, the fine block no west face.
            let faces: &[usize] = if bi == 0 { &[0, 2, 3] } else { &[1, 2, 3] };
            for &f in faces {
                let (line, along_x): (Vec<(usize, usize)>, bool) = match f {
                    0 => ((0..ny1).map(|j| (0, j)).collect(), true),
                    1 => ((0..ny1).map(|j| (b.grid.nx, j)).collect(), true),
                    2 => ((0..=b.grid.nx).map(|i| (i, 0)).collect(), false),
                    _ => ((0..=b.grid.nx).map(|i| (i, b.grid.ny)).collect(), false),
                };
                let w = if along_x { b.hx[0] } else { b.hy[0] };
                for (i, j) in line {
                    let idx = b.grid.index(i, j);
                    let gd = data(b.grid.x(i), b.grid.y(j));
                    let diff: [f64; K] = std::array::from_fn(|c| q[c * np + idx] - gd[c]);
                    let pen = mat4_vec(&self.outer[f], &diff);
                    for c in 0..K {
                        r[c * np + idx] += pen[c] / w;
                    }
                }
            }
            out[bi] = r;
        }
        self.interface_terms(state, &mut out);
        Ok(out)
    }

    pub fn rhs(&self, state: &EulerState) -> Result<[Vec<f64>; 2]> {
        self.rhs_with(state, false)
    }

    fn interface_terms(&self, state: &EulerState, out: &mut [Vec<f64>; 2]) {
        let (bl, br) = (&self.blocks[0], &self.blocks[1]);
        let (npl, npr) = (bl.points(), br.points());
        let (nl, nr) = (bl.grid.ny + 1, br.grid.ny + 1);
        let wl: Vec<Vec<f64>> =
            (0..K).map(|c| (0..nl).map(|j| state.blocks[0][c * npl + bl.grid.index(bl.grid.nx, j)]).collect()).collect();
        let wr: Vec<Vec<f64>> =
            (0..K).map(|c| (0..nr).map(|j| state.blocks[1][c * npr + br.grid.index(0, j)]).collect()).collect();
        let jump_l: Vec<Vec<f64>> =
            (0..K).map(|c| wl[c].iter().zip(self.to_left.apply(&wr[c])).map(|(a, b)| a - b).collect()).collect();
        let jump_r: Vec<Vec<f64>> =
            (0..K).map(|c| wr[c].iter().zip(self.to_right.apply(&wl[c])).map(|(a, b)| a - b).collect()).collect();
        let mut pen_l = vec![vec![0.0; nl]; K];
        let mut pen_r = vec![vec![0.0; nr]; K];
        let mix = |m: &M4, src: &[Vec<f64>], dst: &mut [Vec<f64>], s: f64| {
            for c in 0..K {
                for d in 0..K {
                    if m[c][d] != 0.0 {
                        for (o, v) in dst[c].iter_mut().zip(&src[d]) {
                            *o += s * m[c][d] * v;
                        }
                    }
                }
            }
        };
        mix(&self.sigma_l, &jump_l, &mut pen_l, 1.0);
        mix(&self.sigma_r, &jump_r, &mut pen_r, 1.0);
        if let Some(omega) = &self.omega {
            let hj_l: Vec<Vec<f64>> = jump_l.iter().map(|v| v.iter().zip(&bl.hy).map(|(a, h)| a * h).collect()).collect();
            let hj_r: Vec<Vec<f64>> = jump_r.iter().map(|v| v.iter().zip(&br.hy).map(|(a, h)| a * h).collect()).collect();
            let damp_l: Vec<Vec<f64>> = (0..K)
                .map(|c| hj_l[c].iter().zip(self.to_left.apply(&hj_r[c])).map(|(a, b)| a - b).collect())
                .collect();
            let damp_r: Vec<Vec<f64>> = (0..K)
                .map(|c| hj_r[c].iter().zip(self.to_right.apply(&hj_l[c])).map(|(a, b)| a - b).collect())
                .collect();
            mix(omega, &damp_l, &mut pen_l, -1.0);
            mix(omega, &damp_r, &mut pen_r, -1.0);
        }
        let wxl = bl.hx[bl.grid.nx];
        let wxr = br.hx[0];
        for c in 0..K {
            for j in 0..nl {
                out[0][c * npl + bl.grid.index(bl.grid.nx, j)] += pen_l[c][j] / wxl;
            }
            for j in 0..nr {
                out[1][c * npr + br.grid.index(0, j)] += pen_r[c][j] / wxr;
            }
        }
    }

    /// Classical fourth-order Runge–Kutta from `state.t` to `t_end`.
    pub fn integrate(&self, state: &EulerState, t_end: f64) -> Result<EulerState> {
        let span = t_end - state.t;
        if span < 0.0 {
            return Err(Error::Invalid(format!("t_end {t_end} precedes the state time {}", state.t)));
        }
        let mut cur = state.clone();
        if span == 0.0 {
            return Ok(cur);
        }
        let steps = (span / self.max_time_step()).ceil().max(1.0) as usize;
        let dt = span / steps as f64;
        let axpy = |base: &EulerState, k: &[Vec<f64>; 2], a: f64, t: f64| EulerState {
            t,
            blocks: std::array::from_fn(|b| base.blocks[b].iter().zip(&k[b]).map(|(x, y)| x + a * y).collect()),
        };
        for step in 0..steps {
            let t0 = state.t + step as f64 * dt;
            cur.t = t0;
            let k1 = self.rhs(&cur)?;
            let k2 = self.rhs(&axpy(&cur, &k1, 0.5 * dt, t0 + 0.5 * dt))?;
            let k3 = self.rhs(&axpy(&cur, &k2, 0.5 * dt, t0 + 0.5 * dt))?;
            let k4 = self.rhs(&axpy(&cur, &k3, dt, t0 + dt))?;
            for b in 0..2 {
                for (i, x) in cur.blocks[b].iter_mut().enumerate() {
                    *x += dt / 6.0 * (k1[b][i] + 2.0 * k2[b][i] + 2.0 * k3[b][i] + k4[b][i]);
                }
            }
            if cur.blocks.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::Nonphysical(format!("solution blew up at t = {:.4}", t0 + dt)));
            }
        }
        cur.t = t_end;
        Ok(cur)
    }

    pub fn steps_to(&self, span: f64) -> usize {
        (span / self.max_time_step()).ceil().max(1.0) as usize
    }

    /// Norm-weighted l2 errors of `(ρ, u, v, p)` against the exact solution, summed over blocks.
    pub fn l2_error(&self, state: &EulerState) -> [f64; 4] {
        let g = self.config.vortex.gamma;
        let mut total = [0.0; 4];
        for (b, q) in self.blocks.iter().zip(&state.blocks) {
            let np = b.points();
            let mut acc = [0.0; 4];
            for i in 0..=b.grid.nx {
                for j in 0..=b.grid.ny {
                    let idx = b.grid.index(i, j);
                    let qa = [q[idx], q[np + idx], q[2 * np + idx], q[3 * np + idx]];
                    let num = Primitive::from_conservative(&qa, g).as_array();
                    let ex = vortex_state(b.grid.x(i), b.grid.y(j), state.t, &self.config.vortex).as_array();
                    let w = b.hx[i] * b.hy[j];
                    for v in 0..4 {
                        acc[v] += w * (num[v] - ex[v]).powi(2);
                    }
                }
            }
            for v in 0..4 {
                total[v] += acc[v].sqrt();
            }
        }
        total
    }

    /// Field dump rows `(x, y, ρ, u, v, p)`.
    pub fn field_rows(&self, state: &EulerState) -> Vec<[f64; 6]> {
        let g = self.config.vortex.gamma;
        let mut rows = Vec::new();
        for (b, q) in self.blocks.iter().zip(&state.blocks) {
            let np = b.points();
            for i in 0..=b.grid.nx {
                for j in 0..=b.grid.ny {
                    let idx = b.grid.index(i, j);
                    let s = Primitive::from_conservative(&[q[idx], q[np + idx], q[2 * np + idx], q[3 * np + idx]], g);
                    rows.push([b.grid.x(i), b.grid.y(j), s.rho, s.u, s.v, s.p]);
                }
            }
        }
        rows
    }

    pub fn coarse_norm(&self) -> &DiagonalNorm {
        &self.pair.coarse_norm
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_parsing() {
        assert_eq!("8:4".parse::<OrderSpec>().unwrap(), OrderSpec { coarse: 8, fine: 4 });
        assert_eq!("6".parse::<OrderSpec>().unwrap().interp().unwrap(), InterpKind::P6);
        assert!("2:4".parse::<OrderSpec>().is_err());
        assert!("x".parse::<OrderSpec>().is_err());
    }

    #[test]
    fn jacobian_matches_flux_derivative() {
        let s = Primitive { rho: 1.1, u: 0.4, v: -0.3, p: 5.0 };
        let g = 1.4;
        for n in [(1.0, 0.0), (0.0, -1.0)] {
            let [a, ap, am, abar] = jacobian_split(s, g, n).unwrap();
            let q0 = s.to_conservative(g);
            let flux = |q: &[f64; 4]| {
                let t = Primitive::from_conservative(q, g);
                let vn = t.u * n.0 + t.v * n.1;
                [q[0] * vn, q[1] * vn + t.p * n.0, q[2] * vn + t.p * n.1, (q[3] + t.p) * vn]
            };
            for j in 0..4 {
                let d = 1e-6;
                let mut qp = q0;
                let mut qm = q0;
                qp[j] += d;
                qm[j] -= d;
                let (fp, fm) = (flux(&qp), flux(&qm));
                for i in 0..4 {
                    assert!(((fp[i] - fm[i]) / (2.0 * d) - a[i][j]).abs() < 1e-6);
                    assert!((ap[i][j] + am[i][j] - a[i][j]).abs() < 1e-12);
                    assert!((ap[i][j] - am[i][j] - abar[i][j]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn free_stream_is_preserved() {
        for (order, mode) in [
            ("2", CouplingMode::Characteristic),
            ("4:2", CouplingMode::Quadratic),
            ("6", CouplingMode::Characteristic),
            ("8:4", CouplingMode::Quadratic),
        ] {
            let solver = EulerSolver::new(EulerConfig::new(order.parse().unwrap(), 26).with_coupling(mode)).unwrap();
            let r = solver.rhs_with(&solver.free_stream_state(), true).unwrap();
            let worst = r.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(worst < 1e-12, "{order}: {worst:e}");
        }
    }

    #[test]
    fn zero_span_is_identity() {
        let solver = EulerSolver::new(EulerConfig::new("4".parse().unwrap(), 21)).unwrap();
        let s = solver.exact_state(0.3);
        assert_eq!(solver.integrate(&s, 0.3).unwrap(), s);
        assert!(solver.l2_error(&s).iter().all(|e| *e < 1e-13));
    }

    #[test]
    fn nonphysical_state_detected() {
        let solver = EulerSolver::new(EulerConfig::new("2".parse().unwrap(), 11)).unwrap();
        let mut s = solver.free_stream_state();
        s.blocks[0][3] = -1.0;
        assert!(matches!(solver.rhs(&s), Err(Error::Nonphysical(_))));
    }
}
