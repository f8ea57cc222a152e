//! Numerical hyperKähler potentials for nilpotent adjoint orbits in the
//! classical complex Lie algebras.
//!
//! Nilpotent orbits in sl(n), so(n) and sp(n) arise as finite-dimensional
//! hyperKähler quotients of a flat space of quiver arrows, and the orbit's
//! hyperKähler potential is the restriction of the flat radial function r²
//! to the zero set of the moment map. For small Jordan blocks the potential
//! collapses to closed spectral and trace formulas; this crate implements
//! every such formula together with an independent numerical oracle (a
//! least-squares moment-map solver) that cross-validates each value.
//!
//! The main entry point is [`report::compute_all`], which detects the orbit
//! of a validated element, evaluates every applicable route and compares
//! them. The building blocks are public: dense complex arithmetic and a
//! deterministic Jacobi eigensolver ([`mat`], [`eigen`]), algebra
//! conventions and canonical representatives ([`algebra`], [`jordan`],
//! [`fiber`]), the quiver arrow space with its moment map ([`quiver`],
//! [`solve`]) and the potential formulas themselves ([`potential`]).

pub mod algebra;
pub mod eigen;
pub mod error;
pub mod fiber;
pub mod form;
pub mod jordan;
pub mod mat;
pub mod potential;
pub mod quiver;
pub mod report;
pub mod sample;
pub mod solve;
pub mod tol;

pub use algebra::{AlgebraKind, Family, JordanType, Method, OrbitElement};
pub use error::{Error, Result};
pub use mat::ComplexMatrix;
pub use report::{compute_all, OracleOptions, PotentialReport};
pub use tol::Tolerances;
