//! Exact-arithmetic toolkit for unipotent matrix groups: Gauss LDU
//! decompositions, coadjoint orbits, induced-representation generators as
//! symbolic differential operators, Gaussian product measures, and seeded
//! Monte-Carlo probes of the resulting unitary representations.
//!
//! All core linear algebra is generic over the [`scalar::Scalar`] type; the
//! two scalars used in practice are exact rationals ([`Rational`]) and exact
//! multivariate rational functions ([`symbolic::RatFun`]).

pub mod gauss;
pub mod induced;
pub mod measure;
pub mod orbit;
pub mod repnum;
pub mod scalar;
pub mod symbolic;
pub mod unimat;

pub use scalar::Scalar;
pub use symbolic::{Poly, RatFun, Rational, VarId, VarRole};

/// Dense matrix over exact rationals.
pub type RationalMatrix = unimat::DenseMatrix<Rational>;
/// Dense matrix over rational functions.
pub type SymbolicMatrix = unimat::DenseMatrix<RatFun>;
/// Unitriangular matrix over exact rationals.
pub type RationalUnipotent = unimat::UnipotentMatrix<Rational>;
/// Unitriangular matrix over rational functions.
pub type SymbolicUnipotent = unimat::UnipotentMatrix<RatFun>;
/// Lie-algebra functional over exact rationals.
pub type RationalFunctional = unimat::Functional<Rational>;
/// Lie-algebra functional over rational functions.
pub type SymbolicFunctional = unimat::Functional<RatFun>;
