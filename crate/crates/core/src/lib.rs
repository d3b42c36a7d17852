//! Exact computations in spin bordism: integer linear algebra, graded rings
//! with Steenrod squares, Atiyah-Hirzebruch spectral sequences with a hint
//! system for differentials and extensions, characteristic numbers of product
//! manifolds, Picard groupoid algebra, and a registry of known bordism groups
//! and orientability facts.

pub mod abelian;
pub mod ahss;
pub mod charnum;
pub mod picard;
pub mod registry;
pub mod ring;

pub use abelian::{AbelianGroup, Coeff, GroupMorphism, IntMatrix};
pub use charnum::{Block, BundleData, ManifoldModel, SuLoopInvariants};
pub use picard::{GradedTorsor, PicardData, QuadraticMap, SkewForm};
pub use registry::{GroupExpr, OrientabilityVerdict, Structure};
pub use ring::{CohomologyClass, RingPresentation};
