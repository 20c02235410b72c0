//! Exact spectra of conformally covariant intertwining operators on the
//! twistor bundle over S¹ × S^{n-1}.
//!
//! The operators are diagonal on K-types. Multiplicity-1 types carry a scalar
//! given by a gamma quotient `Z`; multiplicity-2 types carry a 2×2 block with
//! rational coefficients times a shared gamma factor. The crate evaluates
//! these exactly and checks the recursions that connect neighboring types.
//!
//! ```
//! use twistor_spectra::exact::{q, Phased};
//! use twistor_spectra::ktypes::{Lattice, Params, Sign};
//! use twistor_spectra::spectra::z_value;
//!
//! // At r = 1/2 the spectral function is -(f - ΞεJ)/4.
//! let params = Params::new(4, q(1, 2), Lattice::Half).unwrap();
//! let z = z_value(&params, &q(5, 2), &q(3, 2), Sign::Plus);
//! assert_eq!(z.value().unwrap(), Phased::real(q(-1, 4)));
//! ```

pub mod exact;
pub mod ktypes;
pub mod operators;
pub mod report;
pub mod spectra;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use exact::Rational;
use ktypes::{default_sphere, KType, Params, SphereSpectrum};

/// Which version of the three printed formulas known to contain misprints
/// is used: the det-m2 middle-right entry, the (2,2) entry of the interface
/// block, and the (1,1) entry of the r = 1/2 Rarita–Schwinger block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fidelity {
    #[default]
    Corrected,
    StrictPaper,
}

/// Where the shared factor of a multiplicity-2 block is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorReading {
    /// `B₃₃` of `(f+1; j, 3/2, …)`.
    #[default]
    ShiftedF,
    /// `B₃₃` of `(f; j, 3/2, …)`.
    SameF,
}

/// Entry of the 𝒟 block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DEntry {
    D11,
    D12,
    D21,
    D22,
    D33,
}

impl DEntry {
    pub const ALL: [DEntry; 5] = [DEntry::D11, DEntry::D12, DEntry::D21, DEntry::D22, DEntry::D33];
}

/// A deliberate `+1` perturbation of one coefficient, used to confirm the
/// verification suites are not vacuous.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mutation {
    /// `C_i` of the interface block, `i` in 1..=6.
    BlockCoefficient(u8),
    /// Adds `J_a` to the entry.
    D(DEntry),
    Mult1Entry(ktypes::Direction),
    Mult2Entry(ktypes::Direction),
}

/// Parameters plus the conventions every computation depends on.
#[derive(Clone, Debug)]
pub struct Model {
    pub params: Params,
    pub sphere: Arc<dyn SphereSpectrum>,
    pub fidelity: Fidelity,
    pub reading: FactorReading,
    pub mutation: Option<Mutation>,
}

impl Model {
    pub fn new(params: Params) -> Model {
        Model {
            params,
            sphere: default_sphere(),
            fidelity: Fidelity::Corrected,
            reading: FactorReading::ShiftedF,
            mutation: None,
        }
    }

    pub fn with_fidelity(mut self, fidelity: Fidelity) -> Model {
        self.fidelity = fidelity;
        self
    }

    pub fn with_reading(mut self, reading: FactorReading) -> Model {
        self.reading = reading;
        self
    }

    pub fn with_mutation(mut self, mutation: Option<Mutation>) -> Model {
        self.mutation = mutation;
        self
    }

    pub fn with_sphere(mut self, sphere: Arc<dyn SphereSpectrum>) -> Model {
        self.sphere = sphere;
        self
    }

    pub fn n(&self) -> Rational {
        self.params.nr()
    }

    pub fn r(&self) -> &Rational {
        self.params.r()
    }

    /// Signed Dirac eigenvalue `J_a`.
    pub fn j_signed(&self, k: &KType) -> Rational {
        self.sphere.dirac(self.params.n(), &k.j, k.eps)
    }

    /// `J = ε J_a`.
    pub fn j_unsigned(&self, k: &KType) -> Rational {
        k.eps.rational() * self.j_signed(k)
    }

    pub fn lambda_tt(&self, k: &KType) -> Rational {
        self.sphere.twistor_tt(self.params.n(), &k.j)
    }

    pub(crate) fn bump(&self, m: Mutation) -> Rational {
        if self.mutation == Some(m) {
            Rational::one()
        } else {
            Rational::zero()
        }
    }
}
