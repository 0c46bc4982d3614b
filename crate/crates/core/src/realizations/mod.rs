//! Concrete quantizer–dequantizer pairs.

pub mod coherent;
pub mod fock;
pub mod manifest;
pub mod position;
pub mod spin;

pub use coherent::{coherent_overlap, coherent_pair, coherent_vector, CoherentGrid};
pub use fock::{fock_weyl_pair, two_mode_weyl_pair, FockSpace};
pub use manifest::PairManifest;
pub use position::{
    fock_to_position_symbol, hermite_function, position_pair, position_to_fock_symbol, GridSymbol,
};
pub use spin::{multiplet_pair, spin_weyl_pair, SpinSpace};
