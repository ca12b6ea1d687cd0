//! Error-transparent gate synthesis for rotation-symmetric bosonic codes.
//!
//! The crate builds binomial and general hard-cutoff rotation-symmetric codes,
//! synthesizes parity-nested Hamiltonians that commute with photon-loss errors on the
//! code space, checks those commutation properties, and benchmarks the resulting gates
//! under photon loss followed by recovery.
//!
//! ```
//! use paritynest::{codes::CodeSpec, construct};
//!
//! let code = CodeSpec::binomial(3, 3).unwrap();
//! let gate = construct::theorem2(&code, 2).unwrap();
//! assert_eq!(gate.orders.into_iter().collect::<Vec<_>>(), vec![1]);
//! ```

pub mod codes;
pub mod construct;
pub mod error;
pub mod fidelity;
pub mod fock;
pub mod linalg;
pub mod lindblad;
pub mod loss;
pub mod recovery;
pub mod transparency;
pub mod witness;

pub use codes::CodeSpec;
pub use construct::{Construction, EtHamiltonian};
pub use error::{Error, Result};
pub use fidelity::{FidelityCurve, FidelityPoint, LogLogFit};
pub use fock::{DenseOperator, ErrorSet, ErrorTerm, ParityBlocks, State, C64};
