//! Built-in benchmark systems and point configurations.
//!
//! Two stock systems drive most of the studies: a symmetric two-pole
//! system (poles -2.1 and -0.1, both residues 1/2) with four interpolation
//! settings plus a distance sweep, and a ten-pole diagonal system (poles
//! -1..-10, unit residues) with two ways of splitting twenty points on the
//! negative real axis. The five-pole rational function
//! `(s^4 + s^3 - 2s - 1)/((s+1)(s^2+2s+2)(s^2+s+1))` carries the
//! structured-sensitivity tables in its distinct-point and same-point
//! variants.

use crate::error::{Error, Result};
use crate::numerics::{c64, C64};
use crate::systems::SisoPoleResidue;

/// Two-pole system: poles -2.1, -0.1, residues 1/2, 1/2
/// (state-space form A = [[-1.1, 1], [1, -1.1]], B = [0;1], C = [0 1]).
pub fn example1_system() -> SisoPoleResidue {
    SisoPoleResidue::new(
        vec![c64(-2.1, 0.0), c64(-0.1, 0.0)],
        vec![c64(0.5, 0.0), c64(0.5, 0.0)],
    )
    .expect("static system")
}

/// The four interpolation-point settings for the two-pole system,
/// returned as (mu, lambda).
pub fn example1_setting(setting: usize) -> Result<(Vec<C64>, Vec<C64>)> {
    match setting {
        1 => Ok((vec![c64(0.0, 1.0), c64(0.0, -1.0)], vec![c64(0.0, 0.0), c64(1.0, 0.0)])),
        2 => Ok((vec![c64(0.0, 2.0), c64(0.0, -2.0)], vec![c64(0.25, 0.0), c64(0.75, 0.0)])),
        3 => Ok((vec![c64(0.0, 4.0), c64(0.0, -4.0)], vec![c64(0.4, 0.0), c64(0.6, 0.0)])),
        4 => Ok((vec![c64(10.0, 0.0), c64(11.0, 0.0)], vec![c64(8.0, 0.0), c64(9.0, 0.0)])),
        _ => Err(Error::InvalidArgument(format!("example1 has settings 1-4, got {setting}"))),
    }
}

/// Base points of the distance sweep; translate by d to get
/// mu = [d, d+2], lambda = [d-1, d+1] (d = 1, 11, 101 are the tabulated
/// rows).
pub fn example1_distance_base() -> (Vec<C64>, Vec<C64>) {
    (vec![c64(0.0, 0.0), c64(2.0, 0.0)], vec![c64(-1.0, 0.0), c64(1.0, 0.0)])
}

/// Tabulated distance values.
pub const EXAMPLE1_DISTANCE_TABLE: [f64; 3] = [1.0, 11.0, 101.0];

/// Deeper sweep for slope fitting, far enough out that the asymptotic
/// exponents (4n-4 and 4n-2) show up in a log-log fit.
pub const EXAMPLE1_DISTANCE_SWEEP: [f64; 5] = [20.0, 40.0, 80.0, 160.0, 320.0];

/// Ten-pole diagonal system: A = diag(-1..-10), B = C^T = ones.
pub fn example2_system() -> SisoPoleResidue {
    SisoPoleResidue::new(
        (1..=10).map(|i| c64(-(i as f64), 0.0)).collect(),
        vec![c64(1.0, 0.0); 10],
    )
    .expect("static system")
}

/// The two left/right separations of twenty points in (-11, 0):
/// setting 1 interlaces them, setting 2 splits them half and half.
pub fn example2_setting(setting: usize) -> Result<(Vec<C64>, Vec<C64>)> {
    match setting {
        1 => Ok((
            (0..10).map(|i| c64(-9.75 + i as f64, 0.0)).collect(),
            (0..10).map(|i| c64(-10.25 + i as f64, 0.0)).collect(),
        )),
        2 => Ok((
            (0..10).map(|i| c64(-10.25 + 0.5 * i as f64, 0.0)).collect(),
            (0..10).map(|i| c64(-5.25 + 0.5 * i as f64, 0.0)).collect(),
        )),
        _ => Err(Error::InvalidArgument(format!("example2 has settings 1-2, got {setting}"))),
    }
}

/// Five-pole system with transfer function
/// `(s^4 + s^3 - 2s - 1)/((s+1)(s^2+2s+2)(s^2+s+1))`.
pub fn five_pole_system() -> SisoPoleResidue {
    let s3 = 3f64.sqrt();
    SisoPoleResidue::new(
        vec![
            c64(-1.0, 0.0),
            c64(-1.0, -1.0),
            c64(-1.0, 1.0),
            c64(-0.5, -s3 / 2.0),
            c64(-0.5, s3 / 2.0),
        ],
        vec![
            c64(1.0, 0.0),
            c64(0.0, -0.5),
            c64(0.0, 0.5),
            c64(0.0, -s3 / 3.0),
            c64(0.0, s3 / 3.0),
        ],
    )
    .expect("static system")
}

/// Distinct points for the five-pole structured study:
/// lambda_j = 2j/9, mu = -lambda.
pub fn five_pole_distinct_points() -> (Vec<C64>, Vec<C64>) {
    let lambda: Vec<C64> = (1..=5).map(|j| c64(2.0 * j as f64 / 9.0, 0.0)).collect();
    let mu = lambda.iter().map(|&l| -l).collect();
    (mu, lambda)
}

/// Same-point (Hermite) configuration: mu = lambda = 2j/9.
pub fn five_pole_same_points() -> Vec<C64> {
    (1..=5).map(|j| c64(2.0 * j as f64 / 9.0, 0.0)).collect()
}

/// Looks up a built-in system by name.
pub fn system_by_name(name: &str) -> Result<SisoPoleResidue> {
    match name {
        "example1" => Ok(example1_system()),
        "example2" => Ok(example2_system()),
        "example42" | "example43" | "five_pole" => Ok(five_pole_system()),
        other => Err(Error::InvalidArgument(format!(
            "unknown built-in system '{other}' (expected example1, example2, example42, example43)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{transfer_eval, SystemModel};

    #[test]
    fn five_pole_matches_rational_form() {
        let sys = SystemModel::PoleResidue(five_pole_system());
        let s = c64(0.7, -0.4);
        let num = s.powu(4) + s.powu(3) - s * 2.0 - 1.0;
        let den = (s + 1.0) * (s * s + s * 2.0 + 2.0) * (s * s + s + 1.0);
        let got = transfer_eval(&sys, s).unwrap()[(0, 0)];
        assert!((got - num / den).norm() < 1e-13);
    }

    #[test]
    fn settings_are_valid() {
        for s in 1..=4 {
            example1_setting(s).unwrap();
        }
        for s in 1..=2 {
            example2_setting(s).unwrap();
        }
        assert!(example1_setting(5).is_err());
        assert!(system_by_name("nope").is_err());
    }
}
