//! Interface interpolation pairs for 2:1 nonconforming block interfaces.
//!
//! `f2c` maps fine-grid interface values to the coarse grid and `c2f` maps the
//! other way. A pair is SBP preserving when `H_f · c2f = f2cᵀ · H_c`.

mod tables;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{int, parse_rational, rat, rational_string, to_f64, Matrix};
use crate::report::{OrderError, VerificationReport};
use crate::sbp::DiagonalNorm;
use crate::{Error, Result};

/// Tabulated interpolation operators, plus the conforming identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpKind {
    P2,
    P4,
    P6,
    P8,
    #[serde(rename = "p4_to_2")]
    P4To2,
    #[serde(rename = "p8_to_4")]
    P8To4,
    #[serde(rename = "nonsbp_p4")]
    NonSbpP4,
    #[serde(rename = "nonsbp_p6")]
    NonSbpP6,
    Identity,
    /// Output of the interpolation builder.
    Custom,
}

impl InterpKind {
    pub const TABULATED: [InterpKind; 8] = [
        InterpKind::P2,
        InterpKind::P4,
        InterpKind::P6,
        InterpKind::P8,
        InterpKind::P4To2,
        InterpKind::P8To4,
        InterpKind::NonSbpP4,
        InterpKind::NonSbpP6,
    ];

    /// SBP orders of the coarse and fine side.
    pub fn orders(self) -> Option<(usize, usize)> {
        Some(match self {
            InterpKind::P2 => (2, 2),
            InterpKind::P4 | InterpKind::NonSbpP4 => (4, 4),
            InterpKind::P6 | InterpKind::NonSbpP6 => (6, 6),
            InterpKind::P8 => (8, 8),
            InterpKind::P4To2 => (4, 2),
            InterpKind::P8To4 => (8, 4),
            InterpKind::Identity | InterpKind::Custom => return None,
        })
    }

    /// Declared accuracy order.
    pub fn accuracy(self) -> usize {
        match self {
            InterpKind::P2 | InterpKind::P4To2 => 2,
            InterpKind::P4 | InterpKind::P8To4 | InterpKind::NonSbpP4 => 4,
            InterpKind::P6 | InterpKind::NonSbpP6 => 6,
            InterpKind::P8 => 8,
            InterpKind::Identity | InterpKind::Custom => 1,
        }
    }

    /// Coefficients are truncated decimals rather than exact rationals.
    pub fn is_decimal(self) -> bool {
        matches!(self, InterpKind::P8 | InterpKind::P8To4)
    }

    pub fn is_sbp_preserving(self) -> bool {
        !matches!(self, InterpKind::NonSbpP4 | InterpKind::NonSbpP6)
    }

    /// Closure shape `(q, r, s)` of the fine-to-coarse operator for the SBP kinds.
    pub fn shape(self) -> Option<StencilShape> {
        let (q, r, s) = match self {
            InterpKind::P2 => (1, 3, 1),
            InterpKind::P4 | InterpKind::P4To2 => (3, 11, 2),
            InterpKind::P6 => (3, 17, 3),
            InterpKind::P8 | InterpKind::P8To4 => (4, 23, 4),
            _ => return None,
        };
        Some(StencilShape { q, r, s })
    }

    pub fn name(self) -> &'static str {
        match self {
            InterpKind::P2 => "p2",
            InterpKind::P4 => "p4",
            InterpKind::P6 => "p6",
            InterpKind::P8 => "p8",
            InterpKind::P4To2 => "p4_to_2",
            InterpKind::P8To4 => "p8_to_4",
            InterpKind::NonSbpP4 => "nonsbp_p4",
            InterpKind::NonSbpP6 => "nonsbp_p6",
            InterpKind::Identity => "identity",
            InterpKind::Custom => "custom",
        }
    }
}

impl fmt::Display for InterpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InterpKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let kind = match key.as_str() {
            "p2" => InterpKind::P2,
            "p4" => InterpKind::P4,
            "p6" => InterpKind::P6,
            "p8" => InterpKind::P8,
            "p4_to_2" | "p4to2" | "4:2" => InterpKind::P4To2,
            "p8_to_4" | "p8to4" | "8:4" => InterpKind::P8To4,
            "nonsbp_p4" => InterpKind::NonSbpP4,
            "nonsbp_p6" => InterpKind::NonSbpP6,
            "identity" => InterpKind::Identity,
            "custom" => InterpKind::Custom,
            _ => return Err(Error::Invalid(format!("unknown interpolation kind {s:?}"))),
        };
        Ok(kind)
    }
}

/// Closure layout of a fine-to-coarse operator: `q` boundary rows spanning `r`
/// fine columns, and an interior stencil `a_0 ... a_{2s}` over fine offsets `-2s..=2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StencilShape {
    pub q: usize,
    pub r: usize,
    pub s: usize,
}

impl StencilShape {
    pub fn new(q: usize, r: usize, s: usize) -> Result<Self> {
        if q == 0 || r < 2 * s + 1 {
            return Err(Error::Invalid(format!("shape q={q}, r={r}, s={s} needs q >= 1 and r >= 2s+1")));
        }
        Ok(Self { q, r, s })
    }
}

/// Fine-to-coarse and coarse-to-fine operators with the norms they couple.
#[derive(Clone, Debug)]
pub struct InterpolationPair {
    pub kind: InterpKind,
    /// Declared accuracy order.
    pub p: usize,
    pub f2c: Matrix<BigRational>,
    pub c2f: Matrix<BigRational>,
    pub coarse_norm: DiagonalNorm,
    pub fine_norm: DiagonalNorm,
    /// Rows of `f2c` (resp. `c2f`) at each end that belong to a boundary closure.
    pub f2c_boundary_rows: usize,
    pub c2f_boundary_rows: usize,
    f2c_f64: Matrix<f64>,
    c2f_f64: Matrix<f64>,
}

impl InterpolationPair {
    /// Assembles a pair from its parts; the floating point copies are derived here.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        kind: InterpKind,
        p: usize,
        f2c: Matrix<BigRational>,
        c2f: Matrix<BigRational>,
        coarse_norm: DiagonalNorm,
        fine_norm: DiagonalNorm,
        f2c_boundary_rows: usize,
        c2f_boundary_rows: usize,
    ) -> Result<Self> {
        let (mc1, mf1) = (coarse_norm.len(), fine_norm.len());
        if f2c.shape() != (mc1, mf1) || c2f.shape() != (mf1, mc1) {
            return Err(Error::Dimension(format!(
                "f2c {:?} and c2f {:?} do not match norms of {mc1} and {mf1} points",
                f2c.shape(),
                c2f.shape()
            )));
        }
        let f2c_f64 = f2c.to_f64();
        let c2f_f64 = c2f.to_f64();
        Ok(Self { kind, p, f2c, c2f, coarse_norm, fine_norm, f2c_boundary_rows, c2f_boundary_rows, f2c_f64, c2f_f64 })
    }

    /// Identity coupling of two conforming grids sharing `norm`.
    pub fn identity(norm: DiagonalNorm) -> Self {
        let n = norm.len();
        let eye = Matrix::identity(n);
        Self::from_parts(InterpKind::Identity, 1, eye.clone(), eye, norm.clone(), norm, 0, 0).expect("square identity")
    }

    pub fn f2c_f64(&self) -> &Matrix<f64> {
        &self.f2c_f64
    }

    pub fn c2f_f64(&self) -> &Matrix<f64> {
        &self.c2f_f64
    }

    /// Coarse to fine point ratio (2, or 1 for the identity).
    pub fn ratio(&self) -> usize {
        self.fine_norm.n() / self.coarse_norm.n().max(1)
    }

    /// Index of the last coarse point.
    pub fn mc(&self) -> usize {
        self.coarse_norm.n()
    }

    pub fn dump(&self) -> PairDump {
        let rows = |m: &Matrix<BigRational>| -> Vec<Vec<String>> {
            (0..m.nrows()).map(|i| m.row(i).iter().map(rational_string).collect()).collect()
        };
        PairDump {
            kind: self.kind,
            p: self.p,
            mc: self.mc(),
            coarse_norm_weights: self.coarse_norm.weights().iter().map(rational_string).collect(),
            fine_norm_weights: self.fine_norm.weights().iter().map(rational_string).collect(),
            f2c: rows(&self.f2c),
            c2f: rows(&self.c2f),
        }
    }
}

/// Serializable listing of a pair with exact entries.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PairDump {
    pub kind: InterpKind,
    pub p: usize,
    pub mc: usize,
    pub coarse_norm_weights: Vec<String>,
    pub fine_norm_weights: Vec<String>,
    pub f2c: Vec<Vec<String>>,
    pub c2f: Vec<Vec<String>>,
}

struct Table {
    closure: Vec<(usize, usize, BigRational)>,
    stencil: Vec<BigRational>,
}

fn parse_table(closure: &[(usize, usize, &str)], stencil: &[&str]) -> Table {
    Table {
        closure: closure.iter().map(|&(i, j, v)| (i, j, parse_rational(v).expect("table entry"))).collect(),
        stencil: stencil.iter().map(|v| parse_rational(v).expect("table entry")).collect(),
    }
}

fn table(kind: InterpKind) -> Table {
    use tables::*;
    match kind {
        InterpKind::P2 => Table {
            closure: vec![(0, 0, rat(11, 20)), (0, 1, rat(1, 2)), (0, 2, rat(-1, 20))],
            stencil: vec![rat(11, 20), rat(1, 4), rat(-1, 40)],
        },
        InterpKind::P4 | InterpKind::NonSbpP4 => parse_table(P4_CLOSURE, P4_STENCIL),
        InterpKind::P6 | InterpKind::NonSbpP6 => parse_table(P6_CLOSURE, P6_STENCIL),
        InterpKind::P8 => parse_table(P8_CLOSURE, P8_STENCIL),
        InterpKind::P4To2 => parse_table(P4_TO_2_CLOSURE, P4_TO_2_STENCIL),
        InterpKind::P8To4 => parse_table(P8_TO_4_CLOSURE, P8_TO_4_STENCIL),
        InterpKind::Identity | InterpKind::Custom => unreachable!(),
    }
}

/// Places the interior stencil on rows `first..=mc-first`; row `i` is centred on fine column `ratio·i`.
pub(crate) fn fill_interior(m: &mut Matrix<BigRational>, stencil: &[BigRational], first: usize, ratio: usize) {
    let mc = m.nrows() - 1;
    let reach = stencil.len() - 1;
    for i in first..=mc - first {
        for off in 0..=2 * reach {
            let j = (ratio * i + off) as isize - reach as isize;
            if j >= 0 && (j as usize) < m.ncols() {
                m[(i, j as usize)] = stencil[off.abs_diff(reach)].clone();
            }
        }
    }
}

/// Writes a closure block at the top-left corner and its persymmetric image at the bottom-right.
pub(crate) fn place_closure(m: &mut Matrix<BigRational>, entries: &[(usize, usize, BigRational)]) {
    let (r, c) = (m.nrows() - 1, m.ncols() - 1);
    for (i, j, v) in entries {
        m[(*i, *j)] = v.clone();
        m[(r - i, c - j)] = v.clone();
    }
}

/// `c2f = H_f⁻¹ f2cᵀ H_c` with `h_c = 2 h_f`.
pub fn sbp_partner(f2c: &Matrix<BigRational>, coarse: &DiagonalNorm, fine: &DiagonalNorm) -> Matrix<BigRational> {
    let ratio = int((fine.n() / coarse.n().max(1)) as i64);
    let wc = coarse.weights();
    let wf = fine.weights();
    Matrix::from_fn(f2c.ncols(), f2c.nrows(), |j, i| {
        let a = &f2c[(i, j)];
        if a.is_zero() {
            BigRational::zero()
        } else {
            a * &wc[i] * &ratio / &wf[j]
        }
    })
}

fn non_sbp_c2f(kind: InterpKind, stencil: &[BigRational], mc: usize) -> (Matrix<BigRational>, usize) {
    let mf = 2 * mc;
    let mut c2f = Matrix::zeros(mf + 1, mc + 1);
    let rows: Vec<Vec<BigRational>> = match kind {
        InterpKind::NonSbpP4 => vec![
            vec![int(1)],
            vec![rat(5, 16), rat(15, 16), rat(-5, 16), rat(1, 16)],
            vec![int(0), int(1)],
        ],
        _ => vec![
            vec![int(1)],
            vec![rat(63, 256), rat(315, 256), rat(-105, 128), rat(63, 128), rat(-45, 256), rat(7, 256)],
            vec![int(0), int(1)],
            vec![rat(-7, 256), rat(105, 256), rat(105, 128), rat(-35, 128), rat(21, 256), rat(-3, 256)],
            vec![int(0), int(0), int(1)],
        ],
    };
    let top = rows.len();
    for (j, row) in rows.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            c2f[(j, i)] = v.clone();
            c2f[(mf - j, mc - i)] = v.clone();
        }
    }
    let reach = stencil.len() - 1;
    for j in top..=mf - top {
        for i in 0..=mc {
            let d = (2 * i).abs_diff(j);
            if d <= reach {
                c2f[(j, i)] = int(2) * &stencil[d];
            }
        }
    }
    (c2f, top)
}

/// Instantiates a tabulated pair for a coarse interface of `mc + 1` points and spacing `h_c`.
pub fn load_interp_pair(kind: InterpKind, mc: usize, h_c: f64) -> Result<InterpolationPair> {
    let Some((oc, of)) = kind.orders() else {
        return Err(Error::Invalid("the identity pair is built from a norm, see InterpolationPair::identity".into()));
    };
    let mf = 2 * mc;
    let coarse = DiagonalNorm::new(oc, mc, h_c)?;
    let fine = DiagonalNorm::new(of, mf, h_c / 2.0)?;
    let t = table(kind);
    let p = kind.accuracy();
    if let Some(shape) = kind.shape() {
        if mc + 1 < 2 * shape.q + 1 || mf + 1 < 2 * shape.r {
            return Err(Error::GridTooSmall(format!("{kind} needs more than {mc} coarse intervals")));
        }
        let mut f2c = Matrix::zeros(mc + 1, mf + 1);
        fill_interior(&mut f2c, &t.stencil, shape.q, 2);
        place_closure(&mut f2c, &t.closure);
        let c2f = sbp_partner(&f2c, &coarse, &fine);
        InterpolationPair::from_parts(kind, p, f2c, c2f, coarse, fine, shape.q, shape.r)
    } else {
        let inject = if kind == InterpKind::NonSbpP4 { 2 } else { 3 };
        let reach = t.stencil.len() - 1;
        if mc < 2 * inject + reach / 2 + 1 {
            return Err(Error::GridTooSmall(format!("{kind} needs more than {mc} coarse intervals")));
        }
        let mut f2c = Matrix::zeros(mc + 1, mf + 1);
        fill_interior(&mut f2c, &t.stencil, inject, 2);
        let injection: Vec<_> = (0..inject).map(|i| (i, 2 * i, BigRational::one())).collect();
        place_closure(&mut f2c, &injection);
        let (c2f, top) = non_sbp_c2f(kind, &t.stencil, mc);
        InterpolationPair::from_parts(kind, p, f2c, c2f, coarse, fine, inject, top)
    }
}

/// Relative tolerance applied to pairs built from truncated decimals.
pub const DECIMAL_TOL: f64 = 1e-12;

fn exact_mode(pair: &InterpolationPair) -> bool {
    !pair.kind.is_decimal()
}

/// Checks `H_f · c2f = f2cᵀ · H_c`, exactly for rational tables.
pub fn verify_sbp_preserving(pair: &InterpolationPair) -> VerificationReport {
    let exact = exact_mode(pair);
    let mut report = VerificationReport::new(format!("{} sbp-preserving", pair.kind), exact);
    let (mc1, mf1) = (pair.coarse_norm.len(), pair.fine_norm.len());
    if pair.f2c.shape() != (mc1, mf1) || pair.c2f.shape() != (mf1, mc1) {
        report.fail("dimension mismatch between operators and norms");
        report.max_residual = f64::INFINITY;
        return report;
    }
    let ratio = (pair.fine_norm.n() / pair.coarse_norm.n().max(1)) as i64;
    let mut worst_row = None;
    if exact {
        // Common factor h_f dropped: H_f -> w_f, H_c -> ratio * w_c.
        let wc = pair.coarse_norm.weights();
        let wf = pair.fine_norm.weights();
        let r = int(ratio);
        for j in 0..mf1 {
            for i in 0..mc1 {
                let d = &wf[j] * &pair.c2f[(j, i)] - &pair.f2c[(i, j)] * &wc[i] * &r;
                if !d.is_zero() {
                    let v = to_f64(&d).abs() * pair.fine_norm.h();
                    if v > report.max_residual {
                        report.max_residual = v;
                        worst_row = Some(j);
                    }
                }
            }
        }
        if report.max_residual != 0.0 {
            report.fail(format!("H_f c2f differs from f2c^T H_c (worst fine row {worst_row:?})"));
        }
    } else {
        let hc = pair.coarse_norm.diag();
        let hf = pair.fine_norm.diag();
        let (f2c, c2f) = (pair.f2c_f64(), pair.c2f_f64());
        let mut scale = 0.0f64;
        for j in 0..mf1 {
            for i in 0..mc1 {
                let rhs = f2c[(i, j)] * hc[i];
                scale = scale.max(rhs.abs());
                let d = (hf[j] * c2f[(j, i)] - rhs).abs();
                if d > report.max_residual {
                    report.max_residual = d;
                    worst_row = Some(j);
                }
            }
        }
        report.max_residual /= scale.max(f64::MIN_POSITIVE);
        if report.max_residual > DECIMAL_TOL {
            report.fail(format!("relative residual {:.3e} (worst fine row {worst_row:?})", report.max_residual));
        }
    }
    report
}

/// Monomial reproduction of both operators for degrees `0..p`.
pub fn verify_accuracy(pair: &InterpolationPair) -> VerificationReport {
    let exact = exact_mode(pair);
    let mut report = VerificationReport::new(format!("{} accuracy p={}", pair.kind, pair.p), exact);
    let (mc, mf) = (pair.coarse_norm.n(), pair.fine_norm.n());
    // Both grids cover [0, 1].
    let xc: Vec<BigRational> = (0..=mc).map(|i| rat(i as i64, mc as i64)).collect();
    let xf: Vec<BigRational> = (0..=mf).map(|j| rat(j as i64, mf as i64)).collect();
    let bmax = (pair.p - 1) / 2;
    let tol = if exact { 0.0 } else { DECIMAL_TOL };
    for k in 0..pair.p {
        let pc: Vec<BigRational> = xc.iter().map(|x| num_traits::pow(x.clone(), k)).collect();
        let pf: Vec<BigRational> = xf.iter().map(|x| num_traits::pow(x.clone(), k)).collect();
        let (ci, cb) = row_errors(&pair.f2c, &pf, &pc, pair.f2c_boundary_rows);
        let (fi, fb) = row_errors(&pair.c2f, &pc, &pf, pair.c2f_boundary_rows);
        let e = OrderError { k, interior: ci.max(fi), boundary: cb.max(fb) };
        report.max_residual = report.max_residual.max(e.interior);
        if k <= bmax {
            report.max_residual = report.max_residual.max(e.boundary);
        }
        if e.interior > tol {
            report.fail(format!("interior rows miss x^{k} by {:.3e}", e.interior));
        }
        if k <= bmax && e.boundary > tol {
            report.fail(format!("boundary rows miss x^{k} by {:.3e}", e.boundary));
        }
        report.per_k_errors.push(e);
    }
    report
}

/// Largest error in interior and in boundary rows of `m · input - expected`.
fn row_errors(m: &Matrix<BigRational>, input: &[BigRational], expected: &[BigRational], boundary: usize) -> (f64, f64) {
    let out = m.matvec(input);
    let n = out.len();
    let (mut interior, mut bnd) = (0.0f64, 0.0f64);
    for (r, (o, e)) in out.iter().zip(expected).enumerate() {
        let d = o - e;
        if d.is_zero() {
            continue;
        }
        let v = to_f64(&d).abs();
        if r < boundary || r >= n - boundary {
            bnd = bnd.max(v);
        } else {
            interior = interior.max(v);
        }
    }
    (interior, bnd)
}

/// Smallest eigenvalue of the symmetric parts of `H_c (I - f2c c2f)` and `H_f (I - c2f f2c)`.
pub fn check_inter2(pair: &InterpolationPair) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(format!("{} inter2", pair.kind), false);
    let (f2c, c2f) = (pair.f2c_f64(), pair.c2f_f64());
    let coarse = pair.coarse_norm.matrix().matmul(&Matrix::identity(f2c.nrows()).sub(&f2c.matmul(c2f)));
    let fine = pair.fine_norm.matrix().matmul(&Matrix::identity(c2f.nrows()).sub(&c2f.matmul(f2c)));
    let lo = coarse.min_sym_eigenvalue()?.min(fine.min_sym_eigenvalue()?);
    report.psd_min_eigenvalue = Some(lo);
    report.max_residual = (-lo).max(0.0);
    if lo < -INTER2_TOL {
        report.fail(format!("minimum eigenvalue {lo:.3e} is negative"));
    }
    Ok(report)
}

/// Round-off allowance for the positive semi-definiteness check.
pub const INTER2_TOL: f64 = 1e-12;

#[cfg(test)]
mod tests {
    use super::*;

    fn row(m: &Matrix<BigRational>, i: usize) -> Vec<BigRational> {
        m.row(i).to_vec()
    }

    #[test]
    fn p2_tables() {
        let pair = load_interp_pair(InterpKind::P2, 8, 0.125).unwrap();
        let r0 = row(&pair.f2c, 0);
        assert_eq!(&r0[..3], &[rat(11, 20), rat(1, 2), rat(-1, 20)]);
        assert!(r0[3..].iter().all(Zero::is_zero));
        let r3 = row(&pair.f2c, 3);
        assert_eq!(&r3[4..9], &[rat(-1, 40), rat(1, 4), rat(11, 20), rat(1, 4), rat(-1, 40)]);
        let last = row(&pair.f2c, 8);
        assert_eq!(&last[14..], &[rat(-1, 20), rat(1, 2), rat(11, 20)]);
        assert_eq!(&row(&pair.c2f, 0)[..2], &[rat(11, 10), rat(-1, 10)]);
        assert_eq!(&row(&pair.c2f, 1)[..2], &[rat(1, 2), rat(1, 2)]);
        assert_eq!(&row(&pair.c2f, 2)[..3], &[rat(-1, 20), rat(11, 10), rat(-1, 20)]);
    }

    #[test]
    fn derived_c2f_matches_printed_hybrid_entries() {
        let pair = load_interp_pair(InterpKind::P4To2, 20, 0.05).unwrap();
        let printed = [
            (0, 0, "198814379483797276626589/206226611905841578860720"),
            (0, 1, "1342353899420590372183/20622661190584157886072"),
            (0, 2, "-6011306572161601487699/206226611905841578860720"),
            (1, 0, "16579655991556720660697/51556652976460394715180"),
            (2, 3, "-14345449851542882358651239/118786528457764749423774720"),
            (4, 4, "-292764282684548619564311/2474719342870098946328640"),
            (7, 5, "-27348461476516948621801/412453223811683157721440"),
        ];
        for (j, i, v) in printed {
            assert_eq!(pair.c2f[(j, i)], parse_rational(v).unwrap(), "c2f[{j}][{i}]");
        }
    }

    #[test]
    fn row_sums_are_one() {
        for kind in InterpKind::TABULATED {
            let pair = load_interp_pair(kind, 30, 1.0 / 30.0).unwrap();
            for s in pair.f2c.row_sums().iter().chain(pair.c2f.row_sums().iter()) {
                if kind.is_decimal() {
                    assert!((to_f64(s) - 1.0).abs() < 1e-13, "{kind}");
                } else {
                    assert_eq!(s, &int(1), "{kind}");
                }
            }
        }
    }

    #[test]
    fn all_kinds_are_accurate() {
        for kind in InterpKind::TABULATED {
            let r = verify_accuracy(&load_interp_pair(kind, 40, 0.025).unwrap());
            assert!(r.pass, "{kind}: {:?}", r.failures);
        }
    }

    #[test]
    fn p2_boundary_error_for_linear() {
        let mc = 8;
        let pair = load_interp_pair(InterpKind::P2, mc, 1.0 / mc as f64).unwrap();
        let xf: Vec<BigRational> = (0..=2 * mc).map(|j| rat(j as i64, 2 * mc as i64)).collect();
        let e0 = &pair.f2c.matvec(&xf)[0];
        let hf = rat(1, 2 * mc as i64);
        assert_eq!(e0, &(rat(2, 5) * hf));
        let r = verify_accuracy(&pair);
        assert!(r.pass);
        assert!(r.per_k_errors[1].boundary > 0.0);
    }

    #[test]
    fn sbp_kinds_preserve_and_nonsbp_do_not() {
        for kind in InterpKind::TABULATED {
            let r = verify_sbp_preserving(&load_interp_pair(kind, 24, 1.0 / 24.0).unwrap());
            assert_eq!(r.pass, kind.is_sbp_preserving(), "{kind}: {r:?}");
        }
        let r = verify_sbp_preserving(&load_interp_pair(InterpKind::P6, 20, 0.05).unwrap());
        assert!(r.exact && r.max_residual == 0.0);
        let r = verify_sbp_preserving(&load_interp_pair(InterpKind::NonSbpP4, 20, 0.05).unwrap());
        assert!(r.max_residual > 0.0);
    }

    #[test]
    fn inter2_signs() {
        let p2 = check_inter2(&load_interp_pair(InterpKind::P2, 20, 0.05).unwrap()).unwrap();
        assert!(p2.pass && p2.psd_min_eigenvalue.unwrap() >= -1e-12);
        let p4 = check_inter2(&load_interp_pair(InterpKind::P4, 20, 0.05).unwrap()).unwrap();
        assert!(p4.pass, "{:?}", p4.psd_min_eigenvalue);
        let p6 = check_inter2(&load_interp_pair(InterpKind::P6, 20, 0.05).unwrap()).unwrap();
        assert!(p6.psd_min_eigenvalue.unwrap() < -1e-8);
    }

    #[test]
    fn identity_pair_is_trivially_psd() {
        let pair = InterpolationPair::identity(DiagonalNorm::new(4, 12, 0.1).unwrap());
        let r = check_inter2(&pair).unwrap();
        assert_eq!(r.psd_min_eigenvalue, Some(0.0));
        assert!(verify_sbp_preserving(&pair).pass);
    }

    #[test]
    fn small_grids_rejected() {
        assert!(matches!(load_interp_pair(InterpKind::P6, 6, 0.1), Err(Error::GridTooSmall(_))));
        assert!(load_interp_pair(InterpKind::Identity, 6, 0.1).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in InterpKind::TABULATED {
            assert_eq!(kind.name().parse::<InterpKind>().unwrap(), kind);
            let json = serde_json::to_string(&kind).unwrap();
            assert_eq!(json, format!("\"{}\"", kind.name()));
        }
        assert_eq!("P8_TO_4".parse::<InterpKind>().unwrap(), InterpKind::P8To4);
    }
}
