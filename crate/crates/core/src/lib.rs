//! Exact local computations for the symmetric pairs `(GL_2n, GL_n x GL_n)` and
//! `(GL_n(D), GL_n(E))` over `Q_p`, `p` odd.

pub mod coset;
pub mod cyclo;
pub mod error;
pub mod ext;
pub mod fpoly;
pub mod lattice;
pub mod limit;
pub mod matching;
pub mod matrix;
pub mod nilpotent;
pub mod orbital;
pub mod padic;
pub mod pairs;
pub mod sample;
pub mod weil;

pub use error::{Error, Result};
