//! Generating functions, giant-component fractions and the regime table for
//! long-range models.

mod branching;
mod law;
mod regime;

pub use branching::{giant_fraction, pgf_g0, pgf_g1, second_gen_mean, Phase, TheoryReport};
pub use law::DegreeLaw;
pub use regime::{
    benjamini_bound, classify_regime, distance_exponent, loglog_upper_coefficient, DegreeRegime,
    DistanceRegime, LambdaCRegime, RegimeClass,
};

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
