//! Equivariant Hodge classes of elliptic surfaces and projective-bundle
//! hypersurfaces under Galois base change, with Mordell–Weil rank bounds.

pub mod basechange;
pub mod config;
pub mod covers;
pub mod engine;
pub mod error;
pub mod mwbound;
pub mod poly;
pub mod report;
pub mod repring;
pub mod weierstrass;

pub use error::{Error, ErrorClass, Result};
