//! Finite-cutoff laboratory for quantum-limit type spectral functionals.
//!
//! The crate works with 1D model operators whose spectra and eigenfunctions
//! are known in closed form (Dirichlet and Neumann intervals, circles) and
//! with their tensor products on rectangles. Every set is a finite union of
//! intervals or axis-aligned rectangles, so every mass integral is evaluated
//! from exact antiderivatives and no quadrature enters the library path.
//!
//! Modules, bottom up:
//!
//! * [`numerics`]: symmetric eigensolver, small exact rationals, exact
//!   collision detection between two rational sequences.
//! * [`model_spectra`]: closed-form spectra, basis functions and their
//!   pairwise mass integrals.
//! * [`sets`]: interval and rectangle unions, complements, vertical traces.
//! * [`product_spectrum`]: product eigenvalues, multiplicities, the minimal
//!   multiplicity check and exceptional dilatation parameters.
//! * [`functionals`]: the eigenfunction-mass infimum `g`, its Fubini
//!   composite lower bound, the sine lower bound and a high-frequency proxy.
//! * [`square_lab`]: eigenspaces of the Dirichlet square indexed by sums of
//!   two squares, and their concentration constants.
//! * [`tube_lab`]: tubes around straight geodesics and the lower bounds on
//!   the mass outside them.

pub mod error;
pub mod functionals;
pub mod model_spectra;
pub mod numerics;
pub mod product_spectrum;
pub mod sets;
pub mod square_lab;
pub mod tube_lab;

pub use error::{Error, Result};
pub use functionals::{FunctionalKind, FunctionalValue, PiecewiseWeight, Weight1D};
pub use model_spectra::{BasisFunction, ModelOperator1D, OperatorKind, SpectrumEntry};
pub use numerics::{Rational, SymMatrix};
pub use product_spectrum::{ArithmeticMode, ProductEntry, ProductSpectrum};
pub use sets::{IntervalSet, Rect, RectSet};
