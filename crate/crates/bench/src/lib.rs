//! Fixed inputs shared by the benchmarks.

use qorbit_core::{Complex64, RepParams};

pub fn sample_params() -> Vec<RepParams> {
    let mut out = Vec::new();
    for i in 0..25 {
        for j in 0..20 {
            let c0 = 0.2 + 4.8 * i as f64 / 24.0;
            let nu0 = -4.0 + 8.0 * j as f64 / 19.0;
            out.push(RepParams::real(0.5, c0, nu0).expect("valid grid point"));
        }
    }
    out
}

pub fn disc_points(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(0.9 * (k + 1) as f64 / n as f64, 2.399 * k as f64)).collect()
}
