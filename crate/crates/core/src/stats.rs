//! Small-sample statistics for replication aggregation.

/// Two-sided 95% Student-t critical values `t_{0.975, ν}` for ν = 1..=30.
const T975: [f64; 30] = [
    12.706204736,
    4.302652730,
    3.182446305,
    2.776445105,
    2.570581836,
    2.446911851,
    2.364624252,
    2.306004135,
    2.262157163,
    2.228138852,
    2.200985160,
    2.178812830,
    2.160368656,
    2.144786688,
    2.131449546,
    2.119905299,
    2.109815578,
    2.100922040,
    2.093024054,
    2.085963447,
    2.079613845,
    2.073873068,
    2.068657610,
    2.063898562,
    2.059538553,
    2.055529439,
    2.051830516,
    2.048407142,
    2.045229642,
    2.042272456,
];

const Z975: f64 = 1.959963984540054;

/// `t_{0.975, ν}`. Tabulated up to ν = 30, Cornish-Fisher expansion in
/// `1/ν` beyond.
pub fn t_critical_975(dof: u32) -> f64 {
    match dof {
        0 => f64::INFINITY,
        1..=30 => T975[dof as usize - 1],
        _ => {
            let z = Z975;
            let n = f64::from(dof);
            let z2 = z * z;
            let z3 = z2 * z;
            let z5 = z3 * z2;
            let z7 = z5 * z2;
            z + (z3 + z) / (4.0 * n)
                + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * n * n)
                + (3.0 * z7 + 19.0 * z5 + 17.0 * z3 - 15.0 * z) / (384.0 * n * n * n)
        }
    }
}

/// Sample mean and 95% confidence half-width of `values`. A single value
/// has zero half-width.
pub fn mean_ci95(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    let half = t_critical_975((n - 1) as u32) * libm::sqrt(var / n as f64);
    (mean, half)
}
