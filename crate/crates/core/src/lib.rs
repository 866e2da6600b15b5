//! Exact-arithmetic magnitude homology of finite quasi metric spaces.
//!
//! The crate models finite quasi metric spaces with exact extended-rational
//! distances, builds their bigraded magnitude chain complexes as sparse
//! integer matrices, and computes homology three independent ways:
//!
//! * an integer Smith-normal-form oracle ([`homology`]),
//! * a combinatorial basis enumeration for geodetic spaces ([`theta`]),
//! * closed-form rank formulas for Moore graphs and even cycle graphs
//!   ([`closedform`]).
//!
//! The [`resolution`] module assembles the underlying projective resolutions
//! explicitly and certifies their exactness, which is how the combinatorial
//! routes are cross-validated down to the chain level.
//!
//! All arithmetic is exact: distances are arbitrary-precision rationals and
//! all linear algebra runs over arbitrary-precision integers. There is no
//! floating point anywhere in the computational path.
//!
//! ```
//! use maghom::space::Family;
//! use maghom::chain::Variant;
//! use maghom::homology::homology;
//! use maghom::theta::rank_prediction;
//! use num_rational::BigRational;
//!
//! let space = Family::Petersen.build().unwrap();
//! let ell = BigRational::from_integer(3.into());
//! let group = homology(&space, 2, &ell, Variant::Normalized, None).unwrap();
//! let predicted = rank_prediction(&space, 2, &ell).unwrap();
//! assert_eq!(group.rank, predicted);
//! assert_eq!(group.rank, 120);
//! assert!(group.torsion.is_empty());
//! ```

pub mod chain;
pub mod closedform;
pub mod homology;
pub mod matrix;
pub mod resolution;
pub mod space;
pub mod theta;

pub use space::{ExtDist, FourCut, QuasiMetricSpace, Trail};
