//! Twisted Ruelle and Selberg zeta functions of hyperbolic surfaces, twisted
//! cohomology of the unit tangent bundle via Fox calculus, and the integer
//! predictions (vanishing orders, resonance dimensions, torsion) they are
//! checked against.

pub mod cohomology;
pub mod error;
pub mod fuchsian;
pub mod linalg;
pub mod predictions;
pub mod presentation;
pub mod qsqrt2;
pub mod representation;
pub mod spectrum_io;
pub mod zeta;

pub use error::{Error, Result};
pub use fuchsian::{
    bolza_group, enumerate_spectrum, surface_group_regular_polygon, translation_length, ArithmeticMode,
    EnumOptions, GeodesicClass, GroupSpec, Isometry, LengthSpectrum, SurfaceGroup,
};
pub use num_complex::Complex64;
pub use presentation::{Gen, Presentation, PresentationKind, Word};
pub use representation::Representation;
pub use cohomology::{cohomology_dims, CohomologyDims};
pub use predictions::{PredictionReport, TorsionValue};
pub use representation::RepClassification;
pub use zeta::{HolonomyAssignment, PreparedSpectrum, ZetaKind, ZetaOptions, ZetaValue};
