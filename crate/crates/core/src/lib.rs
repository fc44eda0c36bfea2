//! Genus-2 Heegaard diagrams, region words, truncated left orders and
//! order-driven splitting of the associated branched surface.

pub mod diagram;
pub mod group;
pub mod order;
pub mod branch;
pub mod analysis;
