//! Library half of the `sumprod` harness: set-family generation, the
//! standard test corpus, certificate bundles, invariant batteries, and the
//! command implementations the binary dispatches to.

pub mod bundle;
pub mod commands;
pub mod corpus;
pub mod error;
pub mod family;
pub mod verify;

pub use error::CliError;
pub use sumprod_core::notation::AnySet;

/// Dispatches a generic closure over whichever ambient an [`AnySet`] holds.
#[macro_export]
macro_rules! with_set {
    ($any:expr, |$s:ident| $body:expr) => {
        match $any {
            $crate::AnySet::Laurent($s) => $body,
            $crate::AnySet::Padic($s) => $body,
        }
    };
}
