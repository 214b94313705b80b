//! Exact verification of multiple tilings by translates of a convex polytope.
//!
//! The geometry is generic over [`ExactScalar`]. The aliases at the crate
//! root fix it to [`Scalar`], which covers rationals, one real quadratic
//! field, and rational combinations of declared irrational generators.

pub mod enumerator;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod polytope;
pub mod refine;
pub mod sampling;
pub mod scalar;
pub mod simplex;
pub mod synth;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use polytope::{Boundary, ProbeDirection};
pub use scalar::{ExactScalar, Generator, Rational, Scalar, Sign};

pub type Polytope = polytope::Polytope<Scalar>;
pub type Facet = polytope::Facet<Scalar>;
pub type HalfOpenPolytope = polytope::HalfOpenPolytope<Scalar>;
pub type Lattice = lattice::Lattice<Scalar>;
pub type Coset = lattice::Coset<Scalar>;
pub type QuasiPeriodicSet = lattice::QuasiPeriodicSet<Scalar>;
pub type WindowMultiset = lattice::WindowMultiset<Scalar>;
pub type EnumeratorContext = enumerator::EnumeratorContext<Scalar>;
pub type Translations = enumerator::Translations<Scalar>;
pub type SampleRegion = sampling::SampleRegion<Scalar>;
pub type VerificationMode = verify::VerificationMode<Scalar>;
pub type Verification = verify::Verification<Scalar>;
pub type TilingCertificate = verify::TilingCertificate<Scalar>;
pub type Discrepancy = verify::Discrepancy<Scalar>;
pub type ConnectivityVerdict = verify::ConnectivityVerdict<Scalar>;
pub type PipelineOutcome = verify::PipelineOutcome<Scalar>;
pub type CosetFamily = synth::CosetFamily<Scalar>;
pub type Synthesis = synth::Synthesis<Scalar>;
pub type WeightSolution = synth::WeightSolution<Scalar>;
pub type RefinementResult = refine::RefinementResult<Scalar>;

pub type RationalPolytope = polytope::Polytope<Rational>;
pub type RationalLattice = lattice::Lattice<Rational>;
