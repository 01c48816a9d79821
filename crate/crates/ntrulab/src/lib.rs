//! Lattice cryptanalysis laboratory for NTRU-HPS.
//!
//! The crate is organized around the pipeline of a message-recovery attack
//! that works on a lattice independent of the public key:
//!
//! * [`ring`] — exact arithmetic in the convolution rings `Z[x]/(x^N - 1)`
//!   and its mod-q quotient: star products, centerlifts, inverses, ternary
//!   sampling, circulant matrices.
//! * [`ntru`] — NTRU-HPS key generation, encryption, decryption and nonce
//!   recovery.
//! * [`lattice`] — integer-lattice toolkit: Gram–Schmidt, LLL reduction,
//!   Babai's nearest plane, and exact SVP/CVP by enumeration at small rank.
//! * [`attack`] — the key-independent lattice construction, the oracle model,
//!   target assembly, message extraction and candidate verification, plus the
//!   classic public-key-lattice CVP attack as a baseline.
//! * [`analysis`] — evaluation of every inequality the attack's correctness
//!   argument rests on.
//! * [`harness`] — CLI and experiment orchestration with seeded, reproducible
//!   trials and machine-readable reports.

pub mod analysis;
pub mod attack;
pub mod harness;
pub mod lattice;
pub mod ntru;
pub mod real;
pub mod ring;

pub use ring::{ConvPoly, TernarySpace};
