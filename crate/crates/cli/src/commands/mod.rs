pub mod axioms;
pub mod equiv;
pub mod export;
pub mod tomo;
