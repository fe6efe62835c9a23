//! Reference datasets with n = 46 observations each.

/// Active repair times (hours) for an airborne communications transceiver.
pub const REPAIR_TIMES: [f64; 46] = [
    0.2, 0.3, 0.5, 0.5, 0.5, 0.5, 0.6, 0.6, 0.7, 0.7, 0.7, 0.8, 0.8, 1.0, 1.0, 1.0, 1.0, 1.1, 1.3,
    1.5, 1.5, 1.5, 1.5, 2.0, 2.0, 2.2, 2.5, 2.7, 3.0, 3.0, 3.3, 3.3, 4.0, 4.0, 4.5, 4.7, 5.0, 5.4,
    5.4, 7.0, 7.5, 8.8, 9.0, 10.3, 22.0, 24.5,
];

/// Strength of 15 cm glass fibres.
pub const GLASS_FIBER_STRENGTH: [f64; 46] = [
    0.37, 0.4, 0.7, 0.75, 0.8, 0.81, 0.83, 0.86, 0.92, 0.92, 0.94, 0.95, 0.98, 1.03, 1.06, 1.06,
    1.08, 1.09, 1.1, 1.1, 1.13, 1.14, 1.15, 1.17, 1.2, 1.2, 1.21, 1.22, 1.25, 1.28, 1.28, 1.29,
    1.29, 1.3, 1.35, 1.35, 1.37, 1.37, 1.38, 1.4, 1.4, 1.42, 1.43, 1.51, 1.53, 1.61,
];
