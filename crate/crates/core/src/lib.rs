pub mod cli;
pub mod cluster;
pub mod eigen;
pub mod error;
pub mod fastforward;
pub mod groundstate;
pub mod model;
pub mod operators;
pub mod regsolver;
pub mod verify;
