//! Quasi-stationary levels, spectral pole structure and short-time survival
//! laws for a particle leaking out of a spherical well through a finite
//! rectangular barrier (s-wave, ħ = 1).
//!
//! Everything is generic over the scalar type (`f32` or `f64`, see
//! [`Real`]); `f64` aliases are provided at the crate root.
//!
//! ```
//! use zenolab::{analyze_level, find_levels, PhysicalConfig};
//!
//! let pi = std::f64::consts::PI;
//! let config = PhysicalConfig::new(0.5, 1.0, 2.0, (3.0 * pi).powi(2));
//! let params = config.to_dimensionless().unwrap();
//! let levels = find_levels(&params);
//! assert_eq!(levels.len(), 3);
//!
//! let an = analyze_level(&params, &levels[0], false).unwrap();
//! let sp = an.survival.unwrap();
//! assert!(sp.tau2_tilde < sp.tau1_tilde);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod continuum;
pub mod error;
pub mod jet;
pub mod model;
pub mod pipeline;
pub mod poles;
pub mod polynomial;
pub mod quadrature;
pub mod quasibound;
pub mod scalar;
pub mod spectral;
pub mod survival;
pub mod tolerance;
pub mod zeno;

pub use continuum::{
    match_coefficients, spectral_denominator, spectral_weight, wavefunction_at, CoefficientSet, WaveNumbers,
};
pub use error::{Error, Result};
pub use jet::Jet;
pub use model::{to_dimensionless, validate, ModelParams, PhysicalConfig, ValidationReport};
pub use pipeline::{analyze_level, LevelAnalysis};
pub use poles::{narrow_pole, pole2, pole4, survival_params, tau0_closed_form, Pole, PoleSet, SurvivalParams};
pub use polynomial::quartic_roots;
pub use quadrature::QuadratureOptions;
pub use quasibound::{find_levels, QuasiLevel};
pub use scalar::Real;
pub use spectral::{shape_constants, taylor_expand, SpectralShape, TaylorCoeffs};
pub use survival::{
    oracle_deviation, p2, p4, p4_approx, p4_over_p2, p_oracle, short_time_coefficients, survival_deficit, zeno_time,
    OracleValue, SurvivalOracle, TimeGrid,
};
pub use tolerance::Tolerances;
pub use zeno::{
    crossover, linear_fit, phi, sweep_tau2_vs_gap, sweep_tau2_vs_w, tau2_phenomenological, CrossoverResult, LinearFit,
    SweepResult, SweepRow,
};

pub type PhysicalConfigF64 = PhysicalConfig<f64>;
pub type ModelParamsF64 = ModelParams<f64>;
pub type QuasiLevelF64 = QuasiLevel<f64>;
pub type SpectralShapeF64 = SpectralShape<f64>;
pub type TaylorCoeffsF64 = TaylorCoeffs<f64>;
pub type PoleF64 = Pole<f64>;
pub type PoleSetF64 = PoleSet<f64>;
pub type SurvivalParamsF64 = SurvivalParams<f64>;
pub type CrossoverResultF64 = CrossoverResult<f64>;
pub type SweepRowF64 = SweepRow<f64>;
pub type SweepResultF64 = SweepResult<f64>;
pub type LevelAnalysisF64 = LevelAnalysis<f64>;
