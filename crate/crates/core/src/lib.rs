//! Exact germ-level computations on manifolds with corners.
//!
//! Everything happens at the deepest point of a local model `R^n_k`:
//! smooth map germs, their action on corner strata, transverse fibre
//! products and their boundaries, and orientation signs. A small glued-chart
//! format covers the global distinctions between kinds of corner manifolds.

pub mod complex;
pub mod error;
pub mod fibre;
pub mod germ;
pub mod linalg;
pub mod model;
pub mod orient;
pub mod poly;
pub mod random;
pub mod suites;

pub use error::{Error, Result};
pub use germ::{compose, direct_product_germ, product_germ, CornerMapGerm};
pub use linalg::{Matrix, Q};
pub use model::{Label, ModelCorner};
