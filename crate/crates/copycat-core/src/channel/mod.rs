//! The simulated controlled channel.
//!
//! A victim's [`BranchTrace`](crate::victims::BranchTrace) is what the
//! adversary wants; what the channel physically yields is a
//! [`WeightTrace`]: instruction counts between consecutive accesses to the
//! page holding the arithmetic helpers. [`LayoutProfile`] captures the
//! binary-layout mapping between the two for a victim build, and the decoder
//! reconstructs the exact branch trace from the weights using rule tables
//! derived from the profile.
//!
//! Scalar-multiplication step traces and the instruction-granular page-trace
//! toy live here as well.

mod codec;
mod file;
mod pagesim;
mod profile;
mod steps;

pub use codec::{decode_weights, encode_weights, Decoded};
pub use file::{read_trace, write_trace, TraceFile, TraceParseError};
pub use pagesim::{simulate_page_trace, Page, ToyProgram, ToyStep};
pub use profile::{ChannelError, LayoutProfile};
pub use steps::{
    decode_steps, decode_steps_prefix, encode_steps, StepTrace, ZBound, DUMMY_STEP_WEIGHT,
    REAL_STEP_WEIGHT,
};

use crate::victims::Variant;

/// The adversary's raw observation: ordered instruction counts between
/// consecutive arithmetic-page accesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTrace {
    pub variant: Variant,
    pub weights: Vec<u32>,
}
