//! Computational pieces for circular orders on finite sets, cyclically
//! ordered order trees, star recalibration, rotation and translation
//! numbers of PL circle maps, Euler-cocycle lifting certificates, and the
//! two-bridge / braid certificate pipelines built on top of them.
//!
//! Everything order-theoretic and arithmetic is exact (big integers and
//! big rationals). Floating point appears only in the `twobridge`
//! representation checks, where tolerances are stated at the call sites.

pub mod braids;
pub mod circord;
pub mod dynamics;
pub mod exact;
pub mod homology;
pub mod ordtree;
pub mod recal;
pub mod sampling;
pub mod twobridge;
