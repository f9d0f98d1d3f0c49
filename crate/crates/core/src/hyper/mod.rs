//! Hypergeometric parameters, coefficients and contexts.

pub mod coeff;
mod function;
mod params;

pub use coeff::{
    coefficient, coefficient_valuation, coefficients, coefficients_mod_p, coefficients_padic,
    pochhammer_valuation, CoefficientValuations, PochhammerCounter,
};
pub use function::{Context, HypergeometricFunction, ScaledJson, ScaledMonomialHyper, Series};
pub use params::{HypergeometricParameters, ParamsJson};
