//! Communication systems as morphisms, information functions on them, and an
//! engine that audits information functions against the axioms.
//!
//! ```
//! use infocat::finset::{shannon, FinSetMorphism};
//! use infocat::measure::LogBase;
//!
//! let f = FinSetMorphism::from_map(2, vec![0, 1, 1, 1]).unwrap();
//! let h = shannon(&f, LogBase::Two).unwrap();
//! assert!((h - 0.811278).abs() < 1e-6);
//! ```

pub mod arrow;
pub mod audit;
pub mod capacity;
pub mod category;
pub mod channel;
pub mod coslice;
pub mod dual;
pub mod error;
pub mod field;
pub mod finprob;
pub mod finset;
pub mod finvect;
pub mod json;
pub mod measure;
pub mod noisy;
pub mod noisy_prob;
pub mod rational;
pub mod sample;

pub use category::{Category, CategoryId, Enumerate};
pub use error::{Error, Result};
pub use measure::{InfoMeasure, LogBase, Measured};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/categories.md")]
    mod categories {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/axioms.md")]
    mod axioms {}
    #[doc = include_str!("../../../book/src/noisy.md")]
    mod noisy {}
    #[doc = include_str!("../../../book/src/capacity.md")]
    mod capacity {}
    #[doc = include_str!("../../../book/src/probability.md")]
    mod probability {}
    #[doc = include_str!("../../../book/src/linear.md")]
    mod linear {}
    #[doc = include_str!("../../../book/src/audit.md")]
    mod audit {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
