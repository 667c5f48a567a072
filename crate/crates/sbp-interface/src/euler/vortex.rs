//! Isentropic vortex carried by a uniform free stream.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VortexParams {
    pub mach: f64,
    /// Free-stream direction in degrees from the x-axis.
    pub angle_deg: f64,
    pub center0: (f64, f64),
    pub strength: f64,
    pub radius: f64,
    pub gamma: f64,
}

impl Default for VortexParams {
    fn default() -> Self {
        Self { mach: 0.3, angle_deg: 10.0, center0: (4.0, 2.5), strength: 1.0, radius: 1.5, gamma: 1.4 }
    }
}

/// Primitive variables.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl Primitive {
    pub fn to_conservative(self, gamma: f64) -> [f64; 4] {
        let e = self.p / (gamma - 1.0) + 0.5 * self.rho * (self.u * self.u + self.v * self.v);
        [self.rho, self.rho * self.u, self.rho * self.v, e]
    }

    pub fn from_conservative(q: &[f64; 4], gamma: f64) -> Self {
        let rho = q[0];
        let u = q[1] / rho;
        let v = q[2] / rho;
        let p = (gamma - 1.0) * (q[3] - 0.5 * rho * (u * u + v * v));
        Self { rho, u, v, p }
    }

    pub fn as_array(self) -> [f64; 4] {
        [self.rho, self.u, self.v, self.p]
    }
}

impl VortexParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mach > 0.0 && self.mach < 1.0) {
            return Err(Error::Invalid(format!("Mach number {} outside (0, 1)", self.mach)));
        }
        if !(self.strength > 0.0 && self.radius > 0.0 && self.gamma > 1.0) {
            return Err(Error::Invalid("vortex strength, radius and gamma - 1 must be positive".into()));
        }
        let peak = self.strength.powi(2) * (self.gamma - 1.0) * self.mach.powi(2) / (8.0 * PI * PI) * 1f64.exp();
        if peak >= 1.0 {
            return Err(Error::Nonphysical(format!("vortex strength {} empties the core", self.strength)));
        }
        Ok(())
    }

    /// Free-stream velocity.
    pub fn velocity(&self) -> (f64, f64) {
        let a = self.angle_deg.to_radians();
        (a.cos(), a.sin())
    }

    pub fn p_inf(&self) -> f64 {
        1.0 / (self.gamma * self.mach * self.mach)
    }

    pub fn sound_speed(&self) -> f64 {
        1.0 / self.mach
    }

    pub fn free_stream(&self) -> Primitive {
        let (u, v) = self.velocity();
        Primitive { rho: 1.0, u, v, p: self.p_inf() }
    }

    pub fn center(&self, t: f64) -> (f64, f64) {
        let (u, v) = self.velocity();
        (self.center0.0 + u * t, self.center0.1 + v * t)
    }
}

/// Exact state at `(x, y, t)`.
pub fn vortex_state(x: f64, y: f64, t: f64, params: &VortexParams) -> Primitive {
    let (xc, yc) = params.center(t);
    let (dx, dy) = (x - xc, y - yc);
    let rc = params.radius;
    let f = 1.0 - (dx * dx + dy * dy) / (rc * rc);
    let g = params.gamma;
    let eps = params.strength;
    let (u0, v0) = params.velocity();
    let swirl = eps / (2.0 * PI * rc) * (0.5 * f).exp();
    let rho = (1.0 - eps * eps * (g - 1.0) * params.mach.powi(2) / (8.0 * PI * PI) * f.exp()).powf(1.0 / (g - 1.0));
    Primitive { rho, u: u0 - swirl * dy, v: v0 + swirl * dx, p: rho.powf(g) / (g * params.mach.powi(2)) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn far_field_is_free_stream() {
        let p = VortexParams::default();
        let s = vortex_state(40.0, -30.0, 0.0, &p);
        let f = p.free_stream();
        assert!((s.rho - 1.0).abs() < 1e-15);
        assert!((s.u - f.u).abs() < 1e-15 && (s.v - f.v).abs() < 1e-15);
        assert!((s.p - 1.0 / (1.4 * 0.09)).abs() < 1e-12);
        assert!(((f.u * f.u + f.v * f.v).sqrt() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn translation() {
        let p = VortexParams::default();
        let (u, v) = p.velocity();
        for &(x, y, t) in &[(4.3, 2.2, 0.7), (5.0, 2.6, 1.0), (3.1, 3.0, 2.5)] {
            let a = vortex_state(x, y, t, &p);
            let b = vortex_state(x - u * t, y - v * t, 0.0, &p);
            assert!((a.rho - b.rho).abs() < 1e-14 && (a.p - b.p).abs() < 1e-12);
            assert!((a.u - b.u).abs() < 1e-14 && (a.v - b.v).abs() < 1e-14);
        }
        let (xc, yc) = p.center(1.0);
        assert!((xc - 4.984_807_753).abs() < 1e-9);
        assert!((yc - 2.673_648_178).abs() < 1e-9);
    }

    #[test]
    fn conservative_round_trip() {
        let s = Primitive { rho: 0.9, u: 0.3, v: -0.2, p: 7.1 };
        let back = Primitive::from_conservative(&s.to_conservative(1.4), 1.4);
        assert!((back.p - s.p).abs() < 1e-13 && (back.u - s.u).abs() < 1e-15);
    }

    /// Residual of the Euler equations for the exact solution, by central differences.
    #[test]
    fn satisfies_euler_equations() {
        let p = VortexParams { strength: 3.0, ..VortexParams::default() };
        let g = p.gamma;
        let q = |x: f64, y: f64, t: f64| vortex_state(x, y, t, &p).to_conservative(g);
        let flux = |x: f64, y: f64, t: f64| {
            let s = vortex_state(x, y, t, &p);
            let e = s.to_conservative(g)[3];
            (
                [s.rho * s.u, s.rho * s.u * s.u + s.p, s.rho * s.u * s.v, s.u * (e + s.p)],
                [s.rho * s.v, s.rho * s.u * s.v, s.rho * s.v * s.v + s.p, s.v * (e + s.p)],
            )
        };
        let d = 1e-4;
        for &(x, y, t) in &[(4.2, 2.7, 0.3), (3.8, 2.4, 0.0), (4.9, 2.9, 0.8)] {
            for c in 0..4 {
                let qt = (q(x, y, t + d)[c] - q(x, y, t - d)[c]) / (2.0 * d);
                let fx = (flux(x + d, y, t).0[c] - flux(x - d, y, t).0[c]) / (2.0 * d);
                let gy = (flux(x, y + d, t).1[c] - flux(x, y - d, t).1[c]) / (2.0 * d);
                assert!((qt + fx + gy).abs() < 1e-5, "component {c}: {}", qt + fx + gy);
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(VortexParams { mach: 1.2, ..Default::default() }.validate().is_err());
        assert!(VortexParams { strength: 0.0, ..Default::default() }.validate().is_err());
        assert!(VortexParams { strength: 50.0, ..Default::default() }.validate().is_err());
        assert!(VortexParams::default().validate().is_ok());
    }
}
