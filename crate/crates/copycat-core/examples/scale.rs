use copycat_core::recover_rsa::*;
use copycat_core::schemes::rsa_keygen;
use copycat_core::victims::{beea_full, openssl_bgcd};
use num_bigint::BigUint;
use num_integer::Integer;
use rand::SeedableRng;
use std::time::Instant;

fn main() {
    let e = BigUint::from(65537u32);
    // 2048-bit CRT smoke
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(1);
    let t = Instant::now();
    let key = rsa_keygen(2048, &e, &mut rng).unwrap();
    println!("2048 keygen {:?}", t.elapsed());
    let t = Instant::now();
    let (_, trace) = beea_full(&key.q, &key.p).unwrap();
    let (p, q) = recover_pq_from_crt_trace(&trace, &key.n).unwrap();
    assert_eq!((p, q), (key.p.clone(), key.q.clone()));
    println!("2048 crt recovery {:?} (trace {} events)", t.elapsed(), trace.len());

    // masked attack: known full-size mask at 256 bits
    let key = rsa_keygen(256, &e, &mut rng).unwrap();
    use num_bigint::RandBigInt;
    let r = loop {
        let r = rng.gen_biguint_below(&key.lambda);
        if r.gcd(&key.lambda) == BigUint::from(1u32) && r > BigUint::from(1u32) { break r; }
    };
    let er = &e * &r;
    let t = Instant::now();
    let (_, bt) = beea_full(&er, &key.lambda).unwrap();
    match masked_d_attack(&bt, None, MaskedExponent::Known(er.clone()), &key.n, 8).unwrap() {
        DFactorOutcome::Factors(p, q) => {
            assert_eq!(&p * &q, key.n);
            println!("masked known-r 256: ok {:?}", t.elapsed());
        }
        DFactorOutcome::Fail => println!("masked known-r 256: FAIL (gcd = {})", (&key.p - 1u32).gcd(&(&key.q - 1u32))),
    }

    // joint masked attack with unknown r at 64 bits
    for trial in 0..5 {
        let key = rsa_keygen(64, &e, &mut rng).unwrap();
        let r = loop {
            let r = rng.gen_biguint_below(&key.lambda);
            if r.gcd(&key.lambda) == BigUint::from(1u32) && r > BigUint::from(1u32) { break r; }
        };
        let er = &e * &r;
        let t = Instant::now();
        let (_, bt) = beea_full(&er, &key.lambda).unwrap();
        let (_, gt) = openssl_bgcd(&r, &key.lambda).unwrap();
        let g = (&key.p - 1u32).gcd(&(&key.q - 1u32));
        let tz = g.trailing_zeros().unwrap_or(0);
        let pow2 = (&g >> tz) == BigUint::from(1u32) && tz <= 8;
        match masked_d_attack(&bt, Some(&gt), MaskedExponent::Unknown { e: e.clone() }, &key.n, 8).unwrap() {
            DFactorOutcome::Factors(p, q) => {
                assert_eq!(&p * &q, key.n);
                println!("joint trial {trial}: ok in {:?} (gcd 2-power: {pow2})", t.elapsed());
            }
            DFactorOutcome::Fail => println!("joint trial {trial}: fail in {:?} (gcd 2-power: {pow2}, gcd={g})", t.elapsed()),
        }
    }
}
