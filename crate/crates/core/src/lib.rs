//! Exhaustive censuses of elliptic curves over small finite fields.
//!
//! The crate enumerates Weierstrass models over `F_q`, counts isomorphism
//! classes with weight `1/#Aut`, tabulates torsion structures and Weil-pairing
//! data, and checks the resulting numbers against closed-form estimators and
//! explicit bounds. Every weighted quantity is an [`ExactRational`].

pub mod census;
pub mod ecurve;
pub mod exec;
pub mod ffield;
pub mod modbounds;
pub mod models;
pub mod numtheory;
pub mod rational;

pub use ecurve::{CurveModel, CurvePoint, GroupStructure, Transformation};
pub use exec::Execution;
pub use ffield::{make_field, FieldElement, FieldSpec};
pub use rational::ExactRational;
