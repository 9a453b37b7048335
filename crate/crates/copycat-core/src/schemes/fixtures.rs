//! Line-oriented fixture serialization: one key or signature per line,
//! decimal big-integer fields, tagged by scheme.
//!
//! ```text
//! RSA p=<dec> q=<dec> n=<dec> e=<dec> d=<dec> lambda=<dec> dp=<dec> dq=<dec> qinv=<dec>
//! DSA p=<dec> n=<dec> g=<dec> x=<dec> y=<dec>
//! ECDSA curve=<preset> d=<dec> qx=<dec> qy=<dec>
//! ELG p=<dec> g=<dec> x=<dec> y=<dec>
//! SIG r=<dec> s=<dec> h=<dec> [k=<dec>] [z=<dec>]
//! ```
//!
//! Lines starting with `#` are comments.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;

use super::{Curve, CurvePreset, DsaKey, EcdsaKey, ElGamalKey, Point, RsaKey, SignatureSample};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fixture {
    Rsa(RsaKey),
    Dsa(DsaKey),
    Ecdsa(EcdsaKey),
    ElGamal(ElGamalKey),
    Signature(SignatureSample),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for FixtureParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for FixtureParseError {}

pub fn write_fixture(fixture: &Fixture) -> String {
    match fixture {
        Fixture::Rsa(k) => format!(
            "RSA p={} q={} n={} e={} d={} lambda={} dp={} dq={} qinv={}",
            k.p, k.q, k.n, k.e, k.d, k.lambda, k.dp, k.dq, k.qinv
        ),
        Fixture::Dsa(k) => format!("DSA p={} n={} g={} x={} y={}", k.p, k.n, k.g, k.x, k.y),
        Fixture::Ecdsa(k) => {
            let preset = preset_of(&k.curve).map(|p| p.name()).unwrap_or("custom");
            let (qx, qy) = match &k.q {
                Point::Affine { x, y } => (x.to_string(), y.to_string()),
                Point::Infinity => ("0".into(), "0".into()),
            };
            format!("ECDSA curve={preset} d={} qx={qx} qy={qy}", k.d)
        }
        Fixture::ElGamal(k) => format!("ELG p={} g={} x={} y={}", k.p, k.g, k.x, k.y),
        Fixture::Signature(s) => {
            let mut line = format!("SIG r={} s={} h={}", s.r, s.s, s.h);
            if let Some(k) = &s.k {
                line.push_str(&format!(" k={k}"));
            }
            if let Some(z) = s.z {
                line.push_str(&format!(" z={z}"));
            }
            line
        }
    }
}

fn preset_of(curve: &Curve) -> Option<CurvePreset> {
    [CurvePreset::Tiny, CurvePreset::Secp160r1, CurvePreset::P256]
        .into_iter()
        .find(|p| &p.curve() == curve)
}

pub fn write_fixtures(fixtures: &[Fixture]) -> String {
    let mut out = String::new();
    for f in fixtures {
        out.push_str(&write_fixture(f));
        out.push('\n');
    }
    out
}

pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>, FixtureParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_line(line, lineno)?);
    }
    Ok(out)
}

fn parse_line(line: &str, lineno: usize) -> Result<Fixture, FixtureParseError> {
    let err = |message: String| FixtureParseError { line: lineno, message };
    let mut parts = line.split_whitespace();
    let tag = parts.next().ok_or_else(|| err("empty line".into()))?;
    let mut fields: HashMap<&str, &str> = HashMap::new();
    for part in parts {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| err(format!("field `{part}` is not key=value")))?;
        fields.insert(key, value);
    }
    let get = |name: &str| -> Result<BigUint, FixtureParseError> {
        let raw = fields
            .get(name)
            .ok_or_else(|| err(format!("missing field `{name}`")))?;
        BigUint::parse_bytes(raw.as_bytes(), 10)
            .ok_or_else(|| err(format!("field `{name}` is not a decimal integer")))
    };
    match tag {
        "RSA" => Ok(Fixture::Rsa(RsaKey {
            p: get("p")?,
            q: get("q")?,
            n: get("n")?,
            e: get("e")?,
            d: get("d")?,
            lambda: get("lambda")?,
            dp: get("dp")?,
            dq: get("dq")?,
            qinv: get("qinv")?,
        })),
        "DSA" => Ok(Fixture::Dsa(DsaKey {
            p: get("p")?,
            n: get("n")?,
            g: get("g")?,
            x: get("x")?,
            y: get("y")?,
        })),
        "ECDSA" => {
            let name = fields
                .get("curve")
                .ok_or_else(|| err("missing field `curve`".into()))?;
            let preset = CurvePreset::from_name(name)
                .ok_or_else(|| err(format!("unknown curve preset `{name}`")))?;
            Ok(Fixture::Ecdsa(EcdsaKey {
                curve: preset.curve(),
                d: get("d")?,
                q: Point::Affine { x: get("qx")?, y: get("qy")? },
            }))
        }
        "ELG" => Ok(Fixture::ElGamal(ElGamalKey {
            p: get("p")?,
            g: get("g")?,
            x: get("x")?,
            y: get("y")?,
        })),
        "SIG" => {
            let k = fields.get("k").map(|_| get("k")).transpose()?;
            let z = match fields.get("z") {
                Some(raw) => Some(raw.parse::<u64>().map_err(|_| err("bad z field".into()))?),
                None => None,
            };
            Ok(Fixture::Signature(SignatureSample {
                r: get("r")?,
                s: get("s")?,
                h: get("h")?,
                k,
                z,
            }))
        }
        other => Err(err(format!("unknown fixture tag `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn round_trips_every_fixture_kind() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let rsa = super::super::rsa_keygen(64, &BigUint::from(65537u32), &mut rng).unwrap();
        let dsa = super::super::dsa_keygen(32, &mut rng).unwrap();
        let curve = CurvePreset::Tiny.curve();
        let ecdsa = super::super::ecdsa_keygen(&curve, &mut rng).unwrap();
        let elg = super::super::elgamal_keygen(32, &mut rng).unwrap();
        let sig = super::super::dsa_sign(&dsa, &BigUint::from(17u32), None, &mut rng);
        let fixtures = vec![
            Fixture::Rsa(rsa),
            Fixture::Dsa(dsa),
            Fixture::Ecdsa(ecdsa),
            Fixture::ElGamal(elg),
            Fixture::Signature(sig),
        ];
        let text = write_fixtures(&fixtures);
        let parsed = parse_fixtures(&text).unwrap();
        assert_eq!(parsed, fixtures);
    }

    #[test]
    fn parse_error_carries_line_number() {
        let text = "DSA p=23 n=11 g=4 x=7 y=8\nBOGUS a=1\n";
        let e = parse_fixtures(text).unwrap_err();
        assert_eq!(e.line, 2);
    }
}
