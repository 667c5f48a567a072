//! Constructs interpolation pairs from two norms and compares with the tables.

use sbp_interface::builder::{build_interp, standard_setup};
use sbp_interface::interp::{load_interp_pair, verify_accuracy, verify_sbp_preserving, InterpKind};

fn main() -> sbp_interface::Result<()> {
    for (p, kind) in [(2, InterpKind::P2), (4, InterpKind::P4)] {
        let mc = 8 * p;
        let (coarse, fine, shape) = standard_setup(p, mc)?;
        let built = build_interp(p, &coarse, &fine, shape)?;
        let table = load_interp_pair(kind, mc, 1.0 / mc as f64)?;
        let summary = built.summary(shape);
        println!(
            "p={p}: sbp-preserving {}, accurate {}, identical to table {}, free parameters {}",
            verify_sbp_preserving(&built.pair).pass,
            verify_accuracy(&built.pair).pass,
            built.pair.f2c == table.f2c,
            summary.free_params_used
        );
        println!("  interior stencil (centre outwards): {}", summary.stencil.join(", "));
    }
    Ok(())
}
