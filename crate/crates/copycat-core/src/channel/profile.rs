//! Binary-layout profiles: the per-event weight patterns of one victim
//! build. The numbers are artifacts of a particular compiler and layout, so
//! they are configuration, not constants; the presets carry the measured
//! values for the two inversion layouts.

use std::fmt;

use crate::victims::Variant;

/// Weight patterns for a BEEA-family victim. A halving iteration
/// contributes its pattern (leading transition included), a comparison
/// block contributes `cmp` followed by one transition weight that names the
/// loop being entered, and the first block of a run is preceded by one
/// entry weight naming the block the prologue fell into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutProfile {
    pub variant: Variant,
    /// Entry weight when execution starts at the u-loop / v-loop / compare.
    pub entry_u: u32,
    pub entry_v: u32,
    pub entry_cmp: u32,
    /// Division-loop iteration without the odd-adjust.
    pub plain: Vec<u32>,
    /// Division-loop iteration with the odd-adjust.
    pub adjust: Vec<u32>,
    /// Comparison-and-subtract block.
    pub cmp: Vec<u32>,
    /// Transition weight after a comparison that reduced the u side
    /// (next stop: u-loop).
    pub trans_s1: u32,
    /// Transition weight after a comparison that reduced the v side
    /// (next stop: v-loop).
    pub trans_s2: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChannelError {
    /// Profile fails the decode-injectivity check.
    AmbiguousProfile(String),
    /// Trace and profile are for different victims.
    VariantMismatch { trace: Variant, profile: Variant },
    /// Event has no weight pattern under this profile.
    UnsupportedEvent(&'static str),
    /// Weight stream stops matching every rule at this offset.
    Undecodable { offset: usize },
    /// Step trace malformed (a real step precedes a dummy step, or a weight
    /// is neither).
    MalformedSteps { index: usize },
}

impl fmt::Display for ChannelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelError::AmbiguousProfile(why) => write!(f, "ambiguous layout profile: {why}"),
            ChannelError::VariantMismatch { trace, profile } => {
                write!(f, "trace is for {trace} but profile is for {profile}")
            }
            ChannelError::UnsupportedEvent(ev) => {
                write!(f, "event {ev} has no weight pattern in this profile")
            }
            ChannelError::Undecodable { offset } => {
                write!(f, "weight stream undecodable at offset {offset}")
            }
            ChannelError::MalformedSteps { index } => {
                write!(f, "step trace malformed at index {index}")
            }
        }
    }
}

impl std::error::Error for ChannelError {}

impl LayoutProfile {
    /// Validates decode injectivity: within each decoder slot the candidate
    /// weights must be distinct, so one weight of lookahead identifies the
    /// event.
    pub fn new(profile: LayoutProfile) -> Result<LayoutProfile, ChannelError> {
        let p = &profile;
        if !matches!(p.variant, Variant::FullBeea | Variant::CompactBeea) {
            return Err(ChannelError::AmbiguousProfile(
                "weight profiles exist only for the BEEA layouts".into(),
            ));
        }
        if p.plain.is_empty() || p.adjust.is_empty() || p.cmp.is_empty() {
            return Err(ChannelError::AmbiguousProfile("empty weight pattern".into()));
        }
        let all = p
            .plain
            .iter()
            .chain(&p.adjust)
            .chain(&p.cmp)
            .chain([&p.entry_u, &p.entry_v, &p.entry_cmp, &p.trans_s1, &p.trans_s2]);
        if all.into_iter().any(|&w| w == 0) {
            return Err(ChannelError::AmbiguousProfile("zero weight".into()));
        }
        let entries = [p.entry_u, p.entry_v, p.entry_cmp];
        if entries[0] == entries[1] || entries[0] == entries[2] || entries[1] == entries[2] {
            return Err(ChannelError::AmbiguousProfile("entry weights collide".into()));
        }
        let starts = [p.plain[0], p.adjust[0], p.cmp[0]];
        if starts[0] == starts[1] || starts[0] == starts[2] || starts[1] == starts[2] {
            return Err(ChannelError::AmbiguousProfile("pattern start weights collide".into()));
        }
        if p.trans_s1 == p.trans_s2 {
            return Err(ChannelError::AmbiguousProfile("transition weights collide".into()));
        }
        Ok(profile)
    }

    /// Measured layout of the straightforward inversion: a plain iteration
    /// is the triple-division pattern (11, 3), an adjusted iteration is
    /// (13, 4, 3, 3), a comparison block is (5, 4, 4), and the transitions
    /// into the u-loop and v-loop weigh 8 and 13.
    pub fn full_beea() -> LayoutProfile {
        LayoutProfile::new(LayoutProfile {
            variant: Variant::FullBeea,
            entry_u: 9,
            entry_v: 14,
            entry_cmp: 6,
            plain: vec![11, 3],
            adjust: vec![13, 4, 3, 3],
            cmp: vec![5, 4, 4],
            trans_s1: 8,
            trans_s2: 13,
        })
        .expect("preset is injective")
    }

    /// Measured layout of the compact inversion: (7) for a plain iteration,
    /// (8, 3, 3) for an adjusted one, (5, 4) for the comparison block, same
    /// loop transitions as the full layout.
    pub fn compact_beea() -> LayoutProfile {
        LayoutProfile::new(LayoutProfile {
            variant: Variant::CompactBeea,
            entry_u: 9,
            entry_v: 14,
            entry_cmp: 6,
            plain: vec![7],
            adjust: vec![8, 3, 3],
            cmp: vec![5, 4],
            trans_s1: 8,
            trans_s2: 13,
        })
        .expect("preset is injective")
    }

    pub fn preset(variant: Variant) -> Option<LayoutProfile> {
        match variant {
            Variant::FullBeea => Some(LayoutProfile::full_beea()),
            Variant::CompactBeea => Some(LayoutProfile::compact_beea()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_pass_injectivity() {
        LayoutProfile::full_beea();
        LayoutProfile::compact_beea();
    }

    #[test]
    fn colliding_starts_rejected() {
        let mut p = LayoutProfile::full_beea();
        p.adjust[0] = p.plain[0];
        assert!(matches!(
            LayoutProfile::new(p),
            Err(ChannelError::AmbiguousProfile(_))
        ));
    }

    #[test]
    fn colliding_transitions_rejected() {
        let mut p = LayoutProfile::compact_beea();
        p.trans_s2 = p.trans_s1;
        assert!(LayoutProfile::new(p).is_err());
    }
}
