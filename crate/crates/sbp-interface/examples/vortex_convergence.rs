//! Isentropic vortex crossing the coarse/fine interface; observed convergence rates.

use sbp_interface::euler::{refinement_study, EulerConfig, OrderSpec};

fn main() -> sbp_interface::Result<()> {
    let order: OrderSpec = std::env::args().nth(1).as_deref().unwrap_or("4").parse()?;
    let report = refinement_study(&EulerConfig::new(order, 0), &[21, 31, 41], 1)?;
    println!("order {} coupling {:?} cfl {}", report.order, report.coupling, report.cfl);
    for row in &report.rows {
        let q = row.q.map(|q| format!("{:.2} {:.2} {:.2} {:.2}", q[0], q[1], q[2], q[3])).unwrap_or_default();
        let e = row.log10_errors;
        println!("M={:<4} log10 l2 (rho u v p) {:.2} {:.2} {:.2} {:.2}   q {q}", row.m, e[0], e[1], e[2], e[3]);
    }
    Ok(())
}
