//! First-derivative SBP operators: algebraic checks and convergence on a smooth function.

use sbp_interface::sbp::{make_sbp_operator, verify_sbp_property, SUPPORTED_ORDERS};

fn main() -> sbp_interface::Result<()> {
    for order in SUPPORTED_ORDERS {
        let report = verify_sbp_property(&make_sbp_operator(order, 40, 1.0 / 40.0)?);
        let mut errs = Vec::new();
        for n in [40, 80, 160] {
            let h = 1.0 / n as f64;
            let op = make_sbp_operator(order, n, h)?;
            let u: Vec<f64> = (0..=n).map(|i| (3.0 * i as f64 * h).sin()).collect();
            let du = op.apply_d1(&u)?;
            let err = du
                .iter()
                .enumerate()
                .map(|(i, d)| (d - 3.0 * (3.0 * i as f64 * h).cos()).abs())
                .fold(0.0, f64::max);
            errs.push(err);
        }
        let rates: Vec<String> = errs.windows(2).map(|w| format!("{:.2}", (w[0] / w[1]).log2())).collect();
        println!(
            "order {order}: Q + Q^T = B exact: {}, max errors {:.2e} {:.2e} {:.2e}, rates {}",
            report.pass && report.exact,
            errs[0],
            errs[1],
            errs[2],
            rates.join(" ")
        );
    }
    Ok(())
}
