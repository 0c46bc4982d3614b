pub mod algebra;
pub mod axioms;
pub mod error;
pub mod group;
pub mod io;
pub mod groupoid;
pub mod linalg;
pub mod quadrature;
pub mod realizations;
pub mod starprod;
pub mod tomography;
