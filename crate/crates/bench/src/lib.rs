//! Fixed workloads shared by the benchmarks.

use num_complex::Complex64;
use qwalk_core::walk::LatticePoint;

/// Starting points benchmarked for the DP and the generating function.
pub const STARTS: [LatticePoint; 2] = [LatticePoint::new(1, 1), LatticePoint::new(2, 3)];

/// Evaluation points `z` for `h(1, z)`: real, complex, and close to 1.
pub fn z_points() -> Vec<(&'static str, Complex64)> {
    vec![
        ("z=0.5", Complex64::new(0.5, 0.0)),
        ("z=0.9e^{2i}", Complex64::from_polar(0.9, 2.0)),
        ("z=0.999", Complex64::new(0.999, 0.0)),
    ]
}
