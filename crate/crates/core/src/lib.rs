pub mod cli;
pub mod cohomology;
pub mod equidist;
pub mod hermitian;
pub mod int;
pub mod liegen;
pub mod linalg;
pub mod real;
pub mod ring;
pub mod registry;
pub mod symspace;
