//! Desk-scale interactive oracle proofs of proximity for Reed-Solomon and
//! Reed-Muller codes over characteristic-2 field towers.
//!
//! The crate builds up, layer by layer:
//!
//! * [`field`] — a GF(2^b) tower (b = 2, 4, 8, 16, 32) with exact subfield
//!   embeddings, enumeration, and seeded sampling.
//! * [`poly`] — exact univariate/multivariate polynomial arithmetic, low-degree
//!   extension, vanishing division, variable splitting, and affine geometry
//!   (lines and planes) over subfield grids.
//! * [`codes`] — Reed-Solomon / Reed-Muller code specs, agreement and distance,
//!   brute-force nearest-codeword and list-decoding oracles for tiny parameters.
//! * [`prox`] — proximity-generator coefficient sampling and the combine
//!   constructions for mixing functions of different degrees.
//! * [`quotient`] — the quotienting operators that remove side conditions.
//! * [`iop`] — transcripts, sessions, Poly-IOP machinery, the compile
//!   transformation, and round-by-round state instrumentation.
//! * [`sumcheck`] — univariate and trivariate sumcheck over a multiplicative
//!   subgroup.
//! * [`lowrate`] — the mutually recursive low-rate RS / individual-degree RM
//!   IOPPs over the degree schedule 2^(2^k).
//! * [`constrate`] — the constant-rate trivariate Reed-Muller IOPP.
//! * [`r1cs`] — R1CS instances, their algebraization over a subgroup cube, and
//!   the end-to-end prover/verifier.
//! * [`ldt`] — the low-degree-testing laboratory: agreement profiles, inclusion
//!   graph spectra, and the adversary suite behind all soundness measurements.
//!
//! Everything is deterministic given a 32-byte seed; oracles are held in
//! memory and all brute-force searches are exact below configured enumeration
//! caps.

pub mod cli;
pub mod codes;
pub mod constrate;
pub mod error;
pub mod field;
pub mod iop;
pub mod ldt;
pub mod linalg;
pub mod lowrate;
pub mod poly;
pub mod prox;
pub mod quotient;
pub mod r1cs;
pub mod ratio;
pub mod rng;
pub mod sumcheck;

pub use error::{Error, Result};
pub use field::{FieldElem, FieldId, Tower};
pub use ratio::Ratio;
pub use rng::Seed;
