//! Exact computation of Solomon and Bushnell–Reiner zeta functions of modules
//! over orders, as truncated formal series over the classes of simple modules.

pub mod error;
pub mod gfq;
pub mod hereditary;
pub mod hey;
pub mod oracle;
pub mod prolif;
pub mod qcomb;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use series::{Alphabet, AlphabetEntry, Monomial, Substitution, TruncatedSeries};
