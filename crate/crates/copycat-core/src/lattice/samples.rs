//! Signature-sample files for the lattice attack: one signature per line,
//! whitespace-separated decimal fields `r s h z`. `#` lines are comments.

use num_bigint::BigUint;

use crate::schemes::SignatureSample;

use super::LatticeError;

pub fn write_samples(sigs: &[SignatureSample]) -> String {
    let mut out = String::new();
    for s in sigs {
        let z = s.z.expect("lattice samples carry a z annotation");
        out.push_str(&format!("{} {} {} {z}\n", s.r, s.s, s.h));
    }
    out
}

pub fn parse_samples(text: &str) -> Result<Vec<SignatureSample>, LatticeError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut next_int = |name: &str| -> Result<BigUint, LatticeError> {
            fields
                .next()
                .and_then(|f| BigUint::parse_bytes(f.as_bytes(), 10))
                .ok_or_else(|| {
                    LatticeError::BadInstance(format!("line {}: bad field {name}", idx + 1))
                })
        };
        let r = next_int("r")?;
        let s = next_int("s")?;
        let h = next_int("h")?;
        let z = next_int("z")?;
        out.push(SignatureSample {
            r,
            s,
            h,
            k: None,
            z: Some(u64::try_from(&z).map_err(|_| {
                LatticeError::BadInstance(format!("line {}: z too large", idx + 1))
            })?),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let sigs = vec![
            SignatureSample {
                r: BigUint::from(11u32),
                s: BigUint::from(22u32),
                h: BigUint::from(33u32),
                k: None,
                z: Some(4),
            },
            SignatureSample {
                r: BigUint::from(44u32),
                s: BigUint::from(55u32),
                h: BigUint::from(66u32),
                k: None,
                z: Some(0),
            },
        ];
        let text = write_samples(&sigs);
        assert_eq!(parse_samples(&text).unwrap(), sigs);
    }
}
