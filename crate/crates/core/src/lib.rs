//! Exact computations around sup-convolution inequalities on simplices:
//! discrete sup-convolutions and concave envelopes of lattice-sampled
//! functions, the hypersimplex subdivision of the simplex, the sharp
//! constants `c_{k,n}`, averageable maps, and covering certificates built
//! from good translates.
//!
//! All arithmetic is exact (`BigRational`).

pub mod averageable;
pub mod combinatorics;
pub mod compositions;
pub mod cover;
pub mod envelope;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod rational;
pub mod rng;
pub mod subdivision;
pub mod supconv;

pub use averageable::{
    build_maps, build_medial_example, verify_certificate, AffinePiece, AverageabilityCertificate, PLMap, Target,
    VerificationReport,
};
pub use combinatorics::{asymptotic_bound, constant_c, eulerian, worpitzky_check, ConstantReport};
pub use cover::{closure_good, find_cover, search_cover, theorem13_cover, CoverCertificate, GoodTranslate};
pub use envelope::{concave_envelope, normalize_to_simplex_form, EnvelopeResult, SampledFunction};
pub use error::{Error, Result};
pub use geometry::{lattice, BaryLattice, BaryPoint, SimplexGeom, MAX_DIM};
pub use harness::{
    make_extremal, make_random, verify_theorem1, verify_theorem4, FunctionFile, InequalityReport, Tolerance, Verdict,
};
pub use rational::Rational;
pub use subdivision::{classify_point, enumerate_b, extremal_profile, subdivide, CompositionVector, SubdivisionCell};
pub use supconv::{sup_convolve_n, sup_convolve_pair, SupConvTable};
