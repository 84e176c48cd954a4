//! Exact quadratic form arithmetic over iterated Laurent series fields
//! `k((t1))...((tn))` with `k` one of `F3`, `R`, `C`.
//!
//! Square classes are bit vectors, the Witt ring is a group ring over
//! `Z/4`, `Z` or `Z/2`, and Pfister numbers are computed by exhaustive
//! search with verifiable certificates.

pub mod error;
pub mod ideals;
pub mod pfnum;
pub mod qform;
pub mod sqclass;
pub mod syntax;
pub mod witt;

pub use error::{Error, Result};
pub use qform::{DiagonalForm, PfisterSpec};
pub use sqclass::{Base, FieldDesc, SquareClass};
pub use syntax::{parse_class, parse_field, parse_form, print_form, print_pfister};
