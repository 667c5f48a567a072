//! Interface energy contributions of the three hyperbolic couplings.

use sbp_interface::interp::InterpKind;
use sbp_interface::sat::CouplingMode;
use sbp_interface::spectrum::{assemble_model_operator, energy_matrix, interface_block, ModelConfig};

fn main() -> sbp_interface::Result<()> {
    for kind in [InterpKind::P4, InterpKind::P6, InterpKind::NonSbpP4] {
        for mode in [CouplingMode::NonDissipative, CouplingMode::Characteristic, CouplingMode::Quadratic] {
            let sys = assemble_model_operator(&ModelConfig::new(kind, mode, 19))?;
            let blk = interface_block(&sys, &energy_matrix(&sys));
            let ev = blk.self_adjoint_eigenvalues(faer::Side::Lower).map_err(|e| sbp_interface::Error::Eigen(format!("{e:?}")))?;
            println!(
                "{:<10} {:<16} interface energy eigenvalues in [{:+.3e}, {:+.3e}]",
                kind.name(),
                format!("{mode:?}"),
                ev.first().unwrap(),
                ev.last().unwrap()
            );
        }
    }
    Ok(())
}
