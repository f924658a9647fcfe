//! Hyperbolic surfaces glued from right-angled octagons along signed graphs.
//!
//! The crate computes the ring geometry `R(n, t)`, solves for the critical
//! parameter `t_n`, certifies the angle matrix, builds combinatorial surface
//! models with their systoles, and counts the resulting surfaces.

pub mod angle_matrix;
pub mod census;
pub mod cli;
pub mod hyptrig;
pub mod oracle;
pub mod par;
pub mod ring_solver;
pub mod signed_graph;
pub mod surface_model;

pub use hyptrig::LogReal;
