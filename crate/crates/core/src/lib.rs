//! Crossed-product Cuntz algebras `O_n ⋊ Γ̂` twisted by weights in a dual
//! group Γ: semigroup decisions, exact algebra arithmetic, classification
//! certificates and explicit AF and scaling-element constructions.
//!
//! ```
//! use cuntz_cross::af::{decompose, DecomposeOptions, RegionFamily};
//! use cuntz_cross::{classify, Algebra, GroupElement, OmegaData};
//!
//! let omega = OmegaData::over_integers(&[1, 2])?;
//! let verdict = classify(&omega)?;
//! assert!(verdict.condition_i && verdict.af_itself == Some(true));
//!
//! let alg = Algebra::new(omega.clone());
//! let pts = [GroupElement::integer(0), GroupElement::integer(1)];
//! let family = RegionFamily::singletons(omega.group(), &pts)?;
//! let report = decompose(&alg, &family, &DecomposeOptions::default())?;
//! assert_eq!(report.summands(), 2);
//! # Ok::<(), cuntz_cross::Error>(())
//! ```

pub mod af;
pub mod algebra;
pub mod classify;
pub mod error;
pub mod expr;
pub mod function;
pub mod gamma;
pub mod problem;
pub mod scalar;
pub mod scaling;
pub mod semigroup;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use gamma::{Alphabet, BasisElement, GroupDescriptor, GroupElement, OmegaData, RealBasis};
pub use scalar::Scalar;
pub use words::{PrefixRelation, Word};
pub use function::FiniteFunction;
pub use algebra::{Algebra, AlgebraElement, MultiplierWordSum};
pub use classify::{classify, Tristate, Verdict};
