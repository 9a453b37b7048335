//! Lowering branch traces to weight traces and decoding them back.
//!
//! Decoding walks the weight stream with one weight of lookahead. Pattern
//! starts identify division-loop iterations and comparison blocks; the
//! transition weight that follows every comparison block names the reduced
//! side and therefore the loop the following halvings belong to. A halving
//! run never mixes loops between comparisons, so the loop context pins the
//! U/V attribution; the entry weight pins it for the run before the first
//! comparison.

use crate::victims::{BranchEvent, BranchTrace};

use super::{ChannelError, LayoutProfile, WeightTrace};

/// Lower a branch trace to the instruction-count weights this profile's
/// binary would exhibit.
pub fn encode_weights(
    trace: &BranchTrace,
    profile: &LayoutProfile,
) -> Result<WeightTrace, ChannelError> {
    if trace.variant != profile.variant {
        return Err(ChannelError::VariantMismatch {
            trace: trace.variant,
            profile: profile.variant,
        });
    }
    let mut weights = Vec::new();
    for (i, ev) in trace.events.iter().enumerate() {
        if i == 0 {
            weights.push(match ev {
                BranchEvent::UHalvePlain | BranchEvent::UHalveAdjust => profile.entry_u,
                BranchEvent::VHalvePlain | BranchEvent::VHalveAdjust => profile.entry_v,
                BranchEvent::CmpS1 | BranchEvent::CmpS2 => profile.entry_cmp,
                other => return Err(ChannelError::UnsupportedEvent(other.name())),
            });
        }
        match ev {
            BranchEvent::UHalvePlain | BranchEvent::VHalvePlain => {
                weights.extend_from_slice(&profile.plain)
            }
            BranchEvent::UHalveAdjust | BranchEvent::VHalveAdjust => {
                weights.extend_from_slice(&profile.adjust)
            }
            BranchEvent::CmpS1 => {
                weights.extend_from_slice(&profile.cmp);
                weights.push(profile.trans_s1);
            }
            BranchEvent::CmpS2 => {
                weights.extend_from_slice(&profile.cmp);
                weights.push(profile.trans_s2);
            }
            other => return Err(ChannelError::UnsupportedEvent(other.name())),
        }
    }
    Ok(WeightTrace { variant: trace.variant, weights })
}

/// Decode result. `weights_consumed < total` means the stream ended inside
/// an event pattern; the decoded events are then a strict prefix of the
/// original trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub trace: BranchTrace,
    pub weights_consumed: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum LoopCtx {
    U,
    V,
    /// Entry said the first block is the comparison; no halvings may appear
    /// before it.
    CmpOnly,
}

/// Reconstruct the branch trace from a weight trace recorded under the same
/// profile.
pub fn decode_weights(
    wt: &WeightTrace,
    profile: &LayoutProfile,
) -> Result<Decoded, ChannelError> {
    if wt.variant != profile.variant {
        return Err(ChannelError::VariantMismatch {
            trace: wt.variant,
            profile: profile.variant,
        });
    }
    let weights = &wt.weights;
    let mut trace = BranchTrace::new(wt.variant);
    if weights.is_empty() {
        return Ok(Decoded { trace, weights_consumed: 0 });
    }

    let mut ctx = match weights[0] {
        w if w == profile.entry_u => LoopCtx::U,
        w if w == profile.entry_v => LoopCtx::V,
        w if w == profile.entry_cmp => LoopCtx::CmpOnly,
        _ => return Err(ChannelError::Undecodable { offset: 0 }),
    };
    let mut pos = 1usize;

    // Matches `pattern` at `pos`; Ok(true) consumed it, Ok(false) ran out of
    // stream inside it (truncated tail).
    let match_pattern = |pos: &mut usize, pattern: &[u32]| -> Result<bool, ChannelError> {
        for (i, &w) in pattern.iter().enumerate() {
            match weights.get(*pos + i) {
                None => return Ok(false),
                Some(&got) if got == w => {}
                Some(_) => return Err(ChannelError::Undecodable { offset: *pos + i }),
            }
        }
        *pos += pattern.len();
        Ok(true)
    };

    while pos < weights.len() {
        let consumed_before = pos;
        let start = weights[pos];
        if start == profile.cmp[0] {
            if !match_pattern(&mut pos, &profile.cmp)? {
                return Ok(Decoded { trace, weights_consumed: consumed_before });
            }
            // The transition weight after the block names the reduced side.
            match weights.get(pos) {
                None => return Ok(Decoded { trace, weights_consumed: consumed_before }),
                Some(&w) if w == profile.trans_s1 => {
                    trace.push(BranchEvent::CmpS1);
                    ctx = LoopCtx::U;
                }
                Some(&w) if w == profile.trans_s2 => {
                    trace.push(BranchEvent::CmpS2);
                    ctx = LoopCtx::V;
                }
                Some(_) => return Err(ChannelError::Undecodable { offset: pos }),
            }
            pos += 1;
        } else if start == profile.plain[0] || start == profile.adjust[0] {
            let adjust = start == profile.adjust[0];
            let pattern = if adjust { &profile.adjust } else { &profile.plain };
            if !match_pattern(&mut pos, pattern)? {
                return Ok(Decoded { trace, weights_consumed: consumed_before });
            }
            let ev = match (ctx, adjust) {
                (LoopCtx::U, false) => BranchEvent::UHalvePlain,
                (LoopCtx::U, true) => BranchEvent::UHalveAdjust,
                (LoopCtx::V, false) => BranchEvent::VHalvePlain,
                (LoopCtx::V, true) => BranchEvent::VHalveAdjust,
                (LoopCtx::CmpOnly, _) => {
                    return Err(ChannelError::Undecodable { offset: consumed_before })
                }
            };
            trace.push(ev);
        } else {
            return Err(ChannelError::Undecodable { offset: pos });
        }
    }
    Ok(Decoded { trace, weights_consumed: weights.len() })
}
