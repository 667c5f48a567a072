//! Advection-diffusion across a nonconforming interface with viscous interface penalties.

use sbp_interface::interp::InterpKind;
use sbp_interface::linalg::Matrix;
use sbp_interface::sat::CouplingMode;
use sbp_interface::spectrum::{assemble_model_operator, compute_spectrum, ModelConfig};

fn main() -> sbp_interface::Result<()> {
    let zero = Matrix::zeros(2, 2);
    for eps in [0.0, 0.01, 0.1] {
        let c = Matrix::identity(2).scale(&eps);
        let mut cfg = ModelConfig::new(InterpKind::P4, CouplingMode::NonDissipative, 13);
        if eps > 0.0 {
            cfg = cfg.with_viscous(&c, &zero, &zero, &c);
        }
        let sys = assemble_model_operator(&cfg)?;
        let r = compute_spectrum(&sys, sys.h_right())?;
        println!("diffusion {eps:<5} max scaled real part {:+.3e}", r.max_real_scaled);
    }
    Ok(())
}
