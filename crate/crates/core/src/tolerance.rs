//! Named tolerance profiles for the checks run against computed quantities.

use serde::Serialize;

use crate::quadrature::QuadratureOptions;

/// Environment variable selecting a profile (`default` or `strict`).
pub const PROFILE_ENV: &str = "ZENOLAB_TOLERANCE_PROFILE";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub profile: &'static str,
    /// `|F(σ₀)|` for located levels.
    pub level_residual: f64,
    /// Relative agreement of ε, γ with the fitted local expansion.
    pub expansion_rel: f64,
    /// Relative distance between the narrow quartic root and `z₀`.
    pub pole_match: f64,
    /// Backward residual of the quartic roots.
    pub quartic_residual: f64,
    /// Bound on `|a₁|/|a₂|` with both taken in `t̃` units.
    pub linear_term: f64,
    /// Maximum `|P⁽⁴⁾ − P_oracle|`.
    pub oracle_abs: f64,
    /// Ratio band for `τ₀` approximate against exact.
    pub tau0_ratio: f64,
    pub phi_residual: f64,
    pub tau2_width_r2: f64,
    pub tau2_gap_r2: f64,
    /// Accepted band for `τ₂` over its phenomenological estimate.
    pub pheno_band: (f64, f64),
    pub quadrature: QuadratureOptions,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        profile: "default",
        level_residual: 1e-12,
        expansion_rel: 1e-6,
        pole_match: 1e-3,
        quartic_residual: 1e-10,
        linear_term: 1e-12,
        oracle_abs: 5e-3,
        tau0_ratio: 0.05,
        phi_residual: 1e-10,
        tau2_width_r2: 0.999,
        tau2_gap_r2: 0.99,
        pheno_band: (0.5, 2.0),
        quadrature: QuadratureOptions { abs_tol: 1e-10, max_subdivisions: 4000, nodes: 24 },
    };

    pub const STRICT: Tolerances = Tolerances {
        profile: "strict",
        level_residual: 1e-13,
        expansion_rel: 1e-7,
        pole_match: 1e-4,
        quartic_residual: 1e-11,
        linear_term: 1e-13,
        oracle_abs: 1e-3,
        tau0_ratio: 0.01,
        phi_residual: 1e-11,
        tau2_width_r2: 0.9999,
        tau2_gap_r2: 0.999,
        pheno_band: (0.5, 2.0),
        quadrature: QuadratureOptions { abs_tol: 1e-12, max_subdivisions: 8000, nodes: 32 },
    };

    pub fn by_name(name: &str) -> Option<Tolerances> {
        match name.trim().to_ascii_lowercase().as_str() {
            "default" | "" => Some(Self::DEFAULT),
            "strict" => Some(Self::STRICT),
            _ => None,
        }
    }

    /// Profile named by [`PROFILE_ENV`]; unset or unknown names give the default.
    pub fn from_env() -> Tolerances {
        std::env::var(PROFILE_ENV).ok().and_then(|v| Self::by_name(&v)).unwrap_or(Self::DEFAULT)
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(Tolerances::by_name("STRICT").unwrap().profile, "strict");
        assert_eq!(Tolerances::by_name("default").unwrap(), Tolerances::default());
        assert!(Tolerances::by_name("lenient").is_none());
    }

    #[test]
    fn strict_is_never_looser() {
        let (d, s) = (Tolerances::DEFAULT, Tolerances::STRICT);
        assert!(s.oracle_abs <= d.oracle_abs && s.pole_match <= d.pole_match);
        assert!(s.tau2_width_r2 >= d.tau2_width_r2 && s.tau2_gap_r2 >= d.tau2_gap_r2);
        assert!(s.quadrature.abs_tol <= d.quadrature.abs_tol);
    }
}
