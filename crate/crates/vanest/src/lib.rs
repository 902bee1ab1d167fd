//! Exact-arithmetic homological algebra for the coalgebra, Chevalley-Eilenberg
//! and van Est complexes of a free module, together with a homological
//! perturbation engine and a flat-coordinate symbol calculus for the
//! differential Hochschild complex.

pub mod chevalley;
pub mod coalgebra;
pub mod element;
pub mod graded;
pub mod hkr;
pub mod homotopy;
pub mod morphism;
pub mod polynomial;
pub mod rational;
pub mod ring;
pub mod rng;
pub mod suites;
pub mod van_est;
