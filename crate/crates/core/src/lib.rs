//! Exact generating series of walks in graphs.
//!
//! A graph is a set of half-edges with a source map and an involution
//! (reversal) that may have fixed points. Walks are counted by length and
//! by number of bumps (immediate backtracks), giving the path series G(t)
//! and the enriched series F(u,t). This crate computes those series by
//! transfer-matrix iteration, checks them against a brute-force census,
//! and implements the related identities: the labelled transform, the
//! generalized Ihara-Selberg zeta function, free and direct products of
//! graphs, and the cogrowth / spectral-radius maps.

pub mod catalog;
pub mod cogrowth;
pub mod enumerate;
pub mod graph;
pub mod products;
pub mod series;
pub mod transfer;
pub mod zeta;
