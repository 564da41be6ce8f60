pub mod arith;
pub mod error;
pub mod fock;
pub mod kesten;
pub mod moments;
pub mod partition;
pub mod verify;
