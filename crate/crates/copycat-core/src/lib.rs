//! Desk-scale reproduction of an instruction-count controlled channel and the
//! key-recovery attacks it enables.
//!
//! The pipeline has three layers:
//!
//! * [`victims`] — instrumented implementations of leaky algorithms (binary
//!   extended Euclidean inversion in two layouts, a Knuth-style binary
//!   inversion, binary and Euclidean GCD, and a dummy-padded scalar
//!   multiplication). Each run returns the mathematical result together with
//!   the exact branch outcomes it took.
//! * [`channel`] — the simulated controlled channel. Branch traces are
//!   lowered to instruction-count weight traces under a configurable binary
//!   layout profile and decoded back with the rule tables derived from the
//!   same profile.
//! * recovery — [`recover_inverse`] extracts the unknown operand of a single
//!   traced modular inversion, [`recover_rsa`] factors an RSA modulus from a
//!   single key-generation trace by branch-and-prune search, and [`lattice`]
//!   recovers ECDSA keys from many signatures with leaked nonce lengths.
//!
//! [`schemes`] supplies ground-truth keys and signature corpora, and
//! [`experiments`] wires full attack pipelines for the CLI and the
//! acceptance suite.

pub mod arith;
pub mod channel;
pub mod experiments;
pub mod lattice;
pub mod recover_inverse;
pub mod recover_rsa;
pub mod schemes;
pub mod victims;
