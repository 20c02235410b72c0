//! Spectral functions, quotient matrices, the multiplicity-2 block, the
//! `L` calibration and the verification suites.

mod block;
mod calibrate;
mod functions;
mod quotients;
mod relations;
mod verify;

pub use block::{
    block, block2x2, block_coefficients_at, block_limit, interface_coefficients,
    interface_coefficients_at, rarita_schwinger_block, shared_factor, shared_factor_sloped,
    xi_eps_label, Block, Block2,
};
pub use calibrate::{calibrate_l, Calibration, CalibrationEntry, CalibrationError, CalibrationReport};
pub use functions::{
    b33_from_z, b33_of, b33_sloped, exchanged_rs_eigenvalue, mult2_gamma_product, mult2_product_of, mult2_product_sloped,
    z_of, z_sloped, z_value,
};
pub use quotients::{
    mult1_entry, mult1_quotient_matrix, mult2_det_quotient_matrix, mult2_entry, QuotientEntry,
    QuotientMatrix,
};
pub use verify::{
    case1_suite, case2_suite, case3_suite, closed_form_suite, det_coherence_suite,
    interface_suite, mult1_coherence_suite, numeric_agreement_suite, remark_suite, run_all,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactError, Rational};
use crate::ktypes::{KType, Params, Sign};
use crate::operators::OperatorError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectraError {
    #[error("{ktype} is not a multiplicity-2 type")]
    WrongMultiplicity { ktype: KType },
    #[error("C{which} vanishes at {ktype}")]
    SingularCoefficient { which: u8, ktype: KType },
    #[error("block entries at {ktype} have no finite limit")]
    NoLimit { ktype: KType },
    #[error("exact evaluation at {ktype}: {source}")]
    Exact { source: ExactError, ktype: KType },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Window of K-types: `f_min ≤ f ≤ f_max`, `j ≤ j_max`, chiralities `xi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub f_min: Rational,
    pub f_max: Rational,
    pub j_max: Rational,
    pub xi: Vec<Sign>,
}

impl Default for Region {
    fn default() -> Region {
        Region {
            f_min: Rational::new(-9, 2),
            f_max: Rational::new(9, 2),
            j_max: Rational::new(9, 2),
            xi: Sign::BOTH.to_vec(),
        }
    }
}

impl Region {
    pub fn new(f_min: Rational, f_max: Rational, j_max: Rational) -> Region {
        Region { f_min, f_max, j_max, ..Region::default() }
    }

    pub fn with_xi(mut self, xi: Vec<Sign>) -> Region {
        self.xi = xi;
        self
    }

    /// One more step in every direction, so every neighbor of a center is
    /// inside.
    pub fn widened(&self) -> Region {
        Region {
            f_min: &self.f_min - 1,
            f_max: &self.f_max + 1,
            j_max: &self.j_max + 1,
            xi: self.xi.clone(),
        }
    }

    pub fn contains(&self, k: &KType) -> bool {
        self.xi.contains(&k.xi) && k.f >= self.f_min && k.f <= self.f_max && k.j <= self.j_max
    }

    /// K-types with second entry `½ + q`, in (Ξ, f, j, ε) order.
    pub fn centers(&self, params: &Params, q: u8) -> Vec<KType> {
        let mut out = Vec::new();
        let fs = params.lattice().points(&self.f_min, &self.f_max);
        let mut xis = self.xi.clone();
        xis.sort();
        xis.dedup();
        for &xi in &xis {
            for f in &fs {
                let mut j = crate::ktypes::j_floor(q);
                while j <= self.j_max {
                    for eps in Sign::BOTH {
                        if let Ok(k) = params.ktype(xi, f.clone(), j.clone(), q, eps) {
                            out.push(k);
                        }
                    }
                    j += Rational::one();
                }
            }
        }
        out
    }
}
