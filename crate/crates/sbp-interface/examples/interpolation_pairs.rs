//! Tabulated coarse/fine interpolation pairs and their checks.

use sbp_interface::interp::{check_inter2, load_interp_pair, verify_accuracy, verify_sbp_preserving, InterpKind};

fn main() -> sbp_interface::Result<()> {
    let mc = 32;
    println!("{:<10} {:>9} {:>9} {:>14}", "kind", "sbp", "accuracy", "inter2 min eig");
    for kind in InterpKind::TABULATED {
        let pair = load_interp_pair(kind, mc, 1.0 / mc as f64)?;
        let sbp = verify_sbp_preserving(&pair);
        let acc = verify_accuracy(&pair);
        let lo = check_inter2(&pair)?.psd_min_eigenvalue.unwrap_or(f64::NAN);
        println!("{:<10} {:>9} {:>9} {:>14.3e}", kind.name(), sbp.pass, acc.pass, lo);
    }
    Ok(())
}
