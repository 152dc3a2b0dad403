pub mod arith;
pub mod bessel;
pub mod linalg;
pub mod qexp;
pub mod curve;
pub mod catalog;
pub mod periods;
pub mod poincare;
pub mod svp;
pub mod verify;
pub mod cli;
