//! p-adic valuation trees of integer polynomials.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computation: valuation arithmetic, sparse bivariate polynomials, tree
//! construction and labeling, the 2-adic splitting classifier for general
//! quadratics with its exhaustive verifiers, and Newton–Hensel lifting for
//! 2×2 polynomial systems. Serialization, exporters and the command-line
//! front end live in the companion `valtree` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod hensel;
pub mod padic;
pub mod polynomial;
pub mod splitting;
pub mod valtree;

pub use error::{Error, Result};
pub use num_bigint::{BigInt, BigUint};
pub use padic::{Prime, Valuation};
pub use polynomial::{Arity, Polynomial, QuadraticCoefficients};
pub use valtree::{LabelingMode, NodeLabel, ResidueClass, TreeNode, ValuationTree};
