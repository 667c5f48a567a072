//! Diagonal-norm first-derivative SBP operators on equidistant grids.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{int, parse_rational, rat, rational_string, to_f64, Matrix};
use crate::report::{OrderError, VerificationReport};
use crate::{Error, Result};

pub const SUPPORTED_ORDERS: [usize; 4] = [2, 4, 6, 8];

fn closure_norm(order: usize) -> Result<Vec<BigRational>> {
    let w = match order {
        2 => vec![rat(1, 2)],
        4 => vec![rat(17, 48), rat(59, 48), rat(43, 48), rat(49, 48)],
        6 => vec![
            rat(13649, 43200),
            rat(12013, 8640),
            rat(2711, 4320),
            rat(5359, 4320),
            rat(7877, 8640),
            rat(43801, 43200),
        ],
        8 => vec![
            rat(1498139, 5080320),
            rat(1107307, 725760),
            rat(20761, 80640),
            rat(1304999, 725760),
            rat(299527, 725760),
            rat(103097, 80640),
            rat(670091, 725760),
            rat(5127739, 5080320),
        ],
        _ => return Err(Error::UnsupportedOrder(order)),
    };
    Ok(w)
}

/// Right half of the central stencil, offsets 1..=order/2.
fn central_weights(order: usize) -> Vec<BigRational> {
    match order {
        2 => vec![rat(1, 2)],
        4 => vec![rat(2, 3), rat(-1, 12)],
        6 => vec![rat(3, 4), rat(-3, 20), rat(1, 60)],
        8 => vec![rat(4, 5), rat(-1, 5), rat(4, 105), rat(-1, 280)],
        _ => unreachable!(),
    }
}

/// Strictly upper entries `Q[i][j]`, `i < j < width`, of the boundary closure block.
const Q4_CLOSURE: &[&[&str]] = &[&["59/96", "-1/12", "-1/32"], &["59/96", "0"], &["59/96"]];

const Q6_CLOSURE: &[&[&str]] = &[
    &["104009/172800", "30443/259200", "-33311/86400", "5621/28800", "-601/20736"],
    &["-311/51840", "6743/5760", "-24337/34560", "36661/259200"],
    &["-2231/5184", "41287/51840", "-7333/28800"],
    &["4147/17280", "25427/259200"],
    &["342523/518400"],
];

// Three closure entries are free in the eighth-order family; the values below
// minimise the leading boundary truncation errors.
const Q8_CLOSURE: &[&[&str]] = &[
    &[
        "477234514301/718002754560",
        "-5324275637/307715466240",
        "-4317401030263/19386074373120",
        "6234737879/538502065920",
        "5397234907/61543093248",
        "-383811257/24446499840",
        "-6320767/767370240",
    ],
    &[
        "24537248759/153857733120",
        "55735901189/76928866560",
        "-129164595149/2769439196160",
        "-36212096099/153857733120",
        "408955/9700992",
        "496045391/24172162560",
    ],
    &[
        "20712579827/153857733120",
        "8865513187/307715466240",
        "-135923471/5698434560",
        "5909/5389440",
        "38407/25579008",
    ],
    &["2848228927/11396869120", "75994781003/153857733120", "-4644473/62363520", "-17694275/537159168"],
    &["2663374289/8791870464", "-5994029/77607936", "1040990723/48344325120"],
    &["577/802", "-102/793"],
    &["671/882"],
];

/// Diagonal SBP norm `H = h diag(w_0, ..., w_N)`, stored as the dimensionless closure
/// weights; interior weights are 1 and the lower closure mirrors the upper one.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalNorm {
    order: usize,
    n: usize,
    h: f64,
    closure: Vec<BigRational>,
}

impl DiagonalNorm {
    /// The standard norm paired with the derivative operator of the given order.
    pub fn new(order: usize, n: usize, h: f64) -> Result<Self> {
        Self::from_closure(order, closure_norm(order)?, n, h)
    }

    /// Identity weights, for conforming (1:1) couplings.
    pub fn trivial(n: usize, h: f64) -> Self {
        Self { order: 0, n, h, closure: Vec::new() }
    }

    /// A norm with user supplied closure weights. `order` is only a label.
    pub fn from_closure(order: usize, closure: Vec<BigRational>, n: usize, h: f64) -> Result<Self> {
        if closure.iter().any(|w| w <= &BigRational::zero()) {
            return Err(Error::Invalid("norm weights must be positive".into()));
        }
        if n + 1 < 2 * closure.len() {
            return Err(Error::GridTooSmall(format!(
                "{} points cannot hold two closures of width {}",
                n + 1,
                closure.len()
            )));
        }
        if !(h > 0.0) {
            return Err(Error::Invalid(format!("grid spacing must be positive, got {h}")));
        }
        Ok(Self { order, n, h, closure })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Index of the last grid point.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn closure(&self) -> &[BigRational] {
        &self.closure
    }

    /// Dimensionless weight of point `i`.
    pub fn weight(&self, i: usize) -> BigRational {
        assert!(i <= self.n);
        let j = i.min(self.n - i);
        self.closure.get(j).cloned().unwrap_or_else(BigRational::one)
    }

    pub fn weights(&self) -> Vec<BigRational> {
        (0..=self.n).map(|i| self.weight(i)).collect()
    }

    /// Diagonal of `H` including the factor `h`.
    pub fn diag(&self) -> Vec<f64> {
        (0..=self.n).map(|i| to_f64(&self.weight(i)) * self.h).collect()
    }

    /// `H` as a dense matrix with exact weights scaled by a rational grid spacing.
    pub fn matrix_exact(&self, h: &BigRational) -> Matrix<BigRational> {
        Matrix::diag(&self.weights().into_iter().map(|w| w * h).collect::<Vec<_>>())
    }

    pub fn matrix(&self) -> Matrix<f64> {
        Matrix::diag(&self.diag())
    }

    pub fn with_h(&self, h: f64) -> Self {
        Self { h, ..self.clone() }
    }
}

/// First-derivative SBP operator `D1 = H⁻¹Q`.
#[derive(Clone, Debug)]
pub struct SbpOperator1D {
    order: usize,
    norm: DiagonalNorm,
    q: Matrix<BigRational>,
    d1: Matrix<f64>,
    band: Band,
}

/// Compact row representation of `D1` used for fast application.
#[derive(Clone, Debug)]
struct Band {
    /// Upper closure rows of `h·D1`, each starting at column 0.
    top: Vec<Vec<f64>>,
    /// Interior `h·D1` stencil over offsets `-half..=half`.
    interior: Vec<f64>,
}

impl SbpOperator1D {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn norm(&self) -> &DiagonalNorm {
        &self.norm
    }

    pub fn n(&self) -> usize {
        self.norm.n
    }

    pub fn h(&self) -> f64 {
        self.norm.h
    }

    pub fn q(&self) -> &Matrix<BigRational> {
        &self.q
    }

    pub fn d1(&self) -> &Matrix<f64> {
        &self.d1
    }

    /// Boundary selector `e_0`.
    pub fn e0(&self) -> Vec<f64> {
        selector(self.n() + 1, 0)
    }

    /// Boundary selector `e_N`.
    pub fn en(&self) -> Vec<f64> {
        selector(self.n() + 1, self.n())
    }

    /// Builds an operator from a given norm and `Q` without validating the SBP property.
    pub fn from_parts(order: usize, norm: DiagonalNorm, q: Matrix<BigRational>) -> Result<Self> {
        if q.shape() != (norm.len(), norm.len()) {
            return Err(Error::Dimension(format!("Q is {:?}, norm has {} points", q.shape(), norm.len())));
        }
        let d1 = dense_d1(&norm, &q);
        let band = band_from(&d1, norm.h, order.max(2) / 2, norm.closure.len().max(1));
        Ok(Self { order, norm, q, d1, band })
    }

    /// `D1 · values`.
    pub fn apply_d1(&self, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() != self.n() + 1 {
            return Err(Error::Dimension(format!("expected {} values, got {}", self.n() + 1, values.len())));
        }
        let mut out = vec![0.0; values.len()];
        self.apply_strided(values, 0, 1, &mut out, 0, 1, 1.0 / self.h());
        Ok(out)
    }

    /// Accumulates `scale · h · D1` applied to the line `src[off + i*stride]` into `dst[doff + i*dstride]`.
    /// Callers pass `scale = factor / h`.
    #[allow(clippy::too_many_arguments)]
    pub fn apply_strided(
        &self,
        src: &[f64],
        off: usize,
        stride: usize,
        dst: &mut [f64],
        doff: usize,
        dstride: usize,
        scale: f64,
    ) {
        let n = self.n();
        let at = |i: usize| src[off + i * stride];
        let w = self.band.top.len();
        for (i, row) in self.band.top.iter().enumerate() {
            let mut lo = 0.0;
            let mut hi = 0.0;
            for (j, c) in row.iter().enumerate() {
                lo += c * at(j);
                hi += c * at(n - j);
            }
            dst[doff + i * dstride] += scale * lo;
            dst[doff + (n - i) * dstride] -= scale * hi;
        }
        let half = self.band.interior.len() / 2;
        for i in w..=n - w {
            let mut acc = 0.0;
            for (m, c) in self.band.interior.iter().enumerate() {
                acc += c * at(i + m - half);
            }
            dst[doff + i * dstride] += scale * acc;
        }
    }

    pub fn dump(&self) -> OperatorDump {
        OperatorDump {
            order: self.order,
            n: self.n(),
            h: self.h(),
            norm_weights: self.norm.weights().iter().map(rational_string).collect(),
            q: (0..self.q.nrows()).map(|i| self.q.row(i).iter().map(rational_string).collect()).collect(),
        }
    }
}

fn selector(len: usize, at: usize) -> Vec<f64> {
    let mut e = vec![0.0; len];
    e[at] = 1.0;
    e
}

fn dense_d1(norm: &DiagonalNorm, q: &Matrix<BigRational>) -> Matrix<f64> {
    let w: Vec<f64> = norm.diag();
    Matrix::from_fn(q.nrows(), q.ncols(), |i, j| to_f64(&q[(i, j)]) / w[i])
}

fn band_from(d1: &Matrix<f64>, h: f64, half: usize, closure: usize) -> Band {
    let n = d1.nrows() - 1;
    let rows = closure.min(n / 2);
    let width = (closure + half).min(n + 1);
    let top = (0..rows).map(|i| (0..width).map(|j| d1[(i, j)] * h).collect()).collect();
    let mid = n / 2;
    let interior = (0..=2 * half).map(|m| d1[(mid, mid + m - half)] * h).collect();
    Band { top, interior }
}

/// Constructs the standard diagonal-norm operator of the given order on `N+1` points.
pub fn make_sbp_operator(order: usize, n: usize, h: f64) -> Result<SbpOperator1D> {
    let norm = DiagonalNorm::new(order, n, h)?;
    let closure: &[&[&str]] = match order {
        2 => &[],
        4 => Q4_CLOSURE,
        6 => Q6_CLOSURE,
        8 => Q8_CLOSURE,
        _ => return Err(Error::UnsupportedOrder(order)),
    };
    let width = norm.closure.len();
    let half = order / 2;
    if n + 1 < 2 * width.max(half + 1) {
        return Err(Error::GridTooSmall(format!("order {order} needs at least {} points", 2 * width)));
    }
    let mut q = Matrix::zeros(n + 1, n + 1);
    for (m, c) in central_weights(order).into_iter().enumerate() {
        let m = m + 1;
        for i in 0..=n - m {
            q[(i, i + m)] = c.clone();
            q[(i + m, i)] = -c.clone();
        }
    }
    if !closure.is_empty() {
        for i in 0..width {
            for j in 0..width {
                q[(i, j)] = BigRational::zero();
            }
        }
        for (i, row) in closure.iter().enumerate() {
            for (k, s) in row.iter().enumerate() {
                let j = i + 1 + k;
                let v = parse_rational(s).expect("closure table entry");
                q[(j, i)] = -v.clone();
                q[(i, j)] = v;
            }
        }
        for i in 0..width {
            for j in 0..width {
                q[(n - i, n - j)] = -q[(i, j)].clone();
            }
        }
    }
    q[(0, 0)] = rat(-1, 2);
    q[(n, n)] = rat(1, 2);
    SbpOperator1D::from_parts(order, norm, q)
}

/// Serializable operator listing with rational entries as `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OperatorDump {
    pub order: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub h: f64,
    pub norm_weights: Vec<String>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<String>>,
}

/// Checks `Q + Qᵀ = B` exactly, norm positivity and polynomial exactness of `D1`.
pub fn verify_sbp_property(op: &SbpOperator1D) -> VerificationReport {
    let n = op.n();
    let q = op.q();
    let mut report = VerificationReport::new(format!("sbp order {} N={}", op.order, n), true);
    let mut dev = 0.0f64;
    for i in 0..=n {
        for j in 0..=n {
            let b = match (i, j) {
                (0, 0) => int(-1),
                (i, j) if i == n && j == n => int(1),
                _ => BigRational::zero(),
            };
            let d = &q[(i, j)] + &q[(j, i)] - b;
            if !d.is_zero() {
                dev = dev.max(to_f64(&d).abs());
            }
        }
    }
    report.max_residual = dev;
    if dev != 0.0 {
        report.fail(format!("Q + Q^T deviates from B by {dev}"));
    }
    if op.norm.weights().iter().any(|w| w <= &BigRational::zero()) {
        report.fail("norm has non-positive weights");
    }

    // Exactness on x_i = i (unit spacing); D1 = H⁻¹Q is scale free in this sense.
    let w = op.norm.weights();
    let width = op.norm.closure.len().max(1);
    let p = op.order;
    for k in 0..=p {
        let xs: Vec<BigRational> = (0..=n).map(|i| num_traits::pow(int(i as i64), k)).collect();
        let dq = q.matvec(&xs);
        let mut e = OrderError { k, interior: 0.0, boundary: 0.0 };
        for i in 0..=n {
            let exact = if k == 0 { BigRational::zero() } else { int(k as i64) * num_traits::pow(int(i as i64), k - 1) };
            let err = to_f64(&(&dq[i] / &w[i] - exact)).abs();
            let boundary = i < width || i > n - width;
            if boundary {
                e.boundary = e.boundary.max(err);
            } else {
                e.interior = e.interior.max(err);
            }
        }
        if e.interior != 0.0 && k <= p {
            report.fail(format!("interior rows not exact for x^{k}"));
        }
        if e.boundary != 0.0 && k <= p / 2 {
            report.fail(format!("boundary rows not exact for x^{k}"));
        }
        report.per_k_errors.push(e);
    }
    report
}

/// `D1 · values`.
pub fn apply_d1(op: &SbpOperator1D, values: &[f64]) -> Result<Vec<f64>> {
    op.apply_d1(values)
}
