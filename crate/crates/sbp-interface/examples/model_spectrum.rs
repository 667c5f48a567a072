//! Eigenvalues of the two-block model problem; writes them as CSV when a path is given.

use sbp_interface::interp::InterpKind;
use sbp_interface::sat::CouplingMode;
use sbp_interface::spectrum::{assemble_model_operator, compute_spectrum, ModelConfig};

fn main() -> sbp_interface::Result<()> {
    let out = std::env::args().nth(1);
    for kind in [InterpKind::P4, InterpKind::NonSbpP4] {
        let sys = assemble_model_operator(&ModelConfig::new(kind, CouplingMode::NonDissipative, 15))?;
        let report = compute_spectrum(&sys, sys.h_right())?;
        println!(
            "{:<10} {} unknowns, max scaled real part {:+.3e} -> {:?}",
            kind.name(),
            report.unknowns,
            report.max_real_scaled,
            report.verdict
        );
        if let Some(dir) = &out {
            report.write_csv(&std::path::Path::new(dir).join(format!("spectrum_{}.csv", kind.name())))?;
        }
    }
    Ok(())
}
