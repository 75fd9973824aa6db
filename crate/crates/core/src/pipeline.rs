//! One-call analysis of a single quasi-level: shape constants, both pole
//! approximations and the survival parameters.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::poles::{narrow_pole, pole2, pole4, survival_params, Pole, PoleSet, SurvivalParams};
use crate::quasibound::QuasiLevel;
use crate::scalar::{to_f64, Real};
use crate::spectral::{shape_constants_unchecked, taylor_expand_unchecked, SpectralShape, TaylorCoeffs};

#[derive(Debug, Clone, PartialEq)]
pub struct LevelAnalysis<T> {
    pub level: QuasiLevel<T>,
    pub shape: SpectralShape<T>,
    pub taylor: TaylorCoeffs<T>,
    /// Pole of the quadratic truncation.
    pub z0: Pole<T>,
    /// Narrow root of the quartic; present whenever the quartic solve succeeds.
    pub narrow: Result<Pole<T>>,
    pub poles: Result<PoleSet<T>>,
    pub survival: Result<SurvivalParams<T>>,
}

impl<T: Real> LevelAnalysis<T> {
    /// True when the two-pole survival law is available.
    pub fn validated(&self) -> bool {
        self.survival.is_ok()
    }
}

pub fn analyze_level<T: Real>(
    params: &ModelParams<T>,
    level: &QuasiLevel<T>,
    include_shallow: bool,
) -> Result<LevelAnalysis<T>> {
    if level.is_shallow() && !include_shallow {
        return Err(Error::ShallowLevel { index: level.index, arho0: to_f64(level.arho0) });
    }
    let shape = shape_constants_unchecked(params, level);
    let taylor = taylor_expand_unchecked(params, level, 4)?;
    let z0 = pole2(&shape, level);
    let narrow = narrow_pole(&taylor);
    let poles = pole4(&taylor, level);
    let survival = poles.clone().and_then(|ps| survival_params(&ps, &shape, level));
    Ok(LevelAnalysis { level: *level, shape, taylor, z0, narrow, poles, survival })
}
