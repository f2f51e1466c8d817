//! Exact Fock-space computations for cohomology rings of Hilbert schemes of
//! points on surfaces and their symmetric-product orbifold counterparts.

pub mod builtin;
pub mod error;
pub mod fock;
pub mod lehn;
pub mod linalg;
pub mod model_file;
pub mod oracle;
pub mod orbifold;
pub mod partition;
pub mod rational;
pub mod report;
pub mod ring;
pub mod surface;
pub mod theorems;
pub mod vertex;

pub use error::{Error, Result};
pub use rational::Q;
pub use surface::{GradedClass, KunnethTensor, SurfaceModel};
