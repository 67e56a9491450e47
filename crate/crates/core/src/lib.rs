//! Finite crossed modules, non-abelian Čech cohomology on finite covers,
//! extensions of finite groupoids by crossed modules and their Morita
//! equivalences.

pub mod cech;
pub mod cli;
pub mod cocycle;
pub mod error;
pub mod extension;
pub mod fingroup;
pub mod format;
pub mod morita;
pub mod xmod;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

/// Default cap on the size of any exhaustive search.
pub const DEFAULT_MAX_SEARCH: u64 = 1 << 24;

/// The search cap, taken from `GERBE_MAX_SEARCH` when set.
pub fn max_search_from_env() -> u64 {
    std::env::var("GERBE_MAX_SEARCH")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_SEARCH)
}
