//! Fixed physical constants (CODATA 2018 exact values where defined).

/// Physical constants used throughout the model. These are fixed reference
/// values, not tunable device parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Planck constant (J s)
    pub h: f64,
    /// Elementary charge (C)
    pub e: f64,
    /// Vacuum permittivity (F/m)
    pub eps0: f64,
    /// Boltzmann constant (J/K)
    pub kb: f64,
}

/// The one and only set of physical constants.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    h: 6.626_070_15e-34,
    e: 1.602_176_634e-19,
    eps0: 8.854_187_812_8e-12,
    kb: 1.380_649e-23,
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_strictly_positive() {
        assert!(CONSTANTS.h > 0.0);
        assert!(CONSTANTS.e > 0.0);
        assert!(CONSTANTS.eps0 > 0.0);
        assert!(CONSTANTS.kb > 0.0);
    }
}
