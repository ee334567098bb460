mod common;

use common::*;
use polar_qkd::polar_codec::{
    construct_frozen_set, encode, generator_matrix, sc_decode, systematic_decode,
    systematic_encode, PolarCode,
};
use polar_qkd::BitBlock;
use proptest::collection::vec;
use proptest::prelude::*;

fn random_code() -> impl Strategy<Value = PolarCode> {
    (1u32..=8).prop_flat_map(|n| {
        vec(any::<bool>(), 1usize << n).prop_map(move |mask| {
            let frozen: Vec<usize> = mask
                .iter()
                .enumerate()
                .filter(|(_, &f)| f)
                .map(|(i, _)| i)
                .collect();
            PolarCode::new(n, &frozen).unwrap()
        })
    })
}

fn code_and_data() -> impl Strategy<Value = (PolarCode, Vec<u8>)> {
    random_code().prop_flat_map(|code| {
        let k = code.data_count();
        (Just(code), vec(0u8..=1, k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn encode_is_an_involution(n in 0u32..=10, seed in any::<u64>()) {
        let code = PolarCode::new(n, &[]).unwrap();
        let u = BitBlock::random(1 << n, &mut polar_qkd::rng::stream_rng(seed, 0));
        prop_assert_eq!(encode(&encode(&u, &code).unwrap(), &code).unwrap(), u);
    }

    #[test]
    fn encode_matches_dense_generator(n in 0u32..=8, seed in any::<u64>()) {
        let code = PolarCode::new(n, &[]).unwrap();
        let u = BitBlock::random(1 << n, &mut polar_qkd::rng::stream_rng(seed, 0));
        let x = encode(&u, &code).unwrap();
        prop_assert_eq!(x.into_vec(), dense_encode(u.as_slice()));
    }

    #[test]
    fn systematic_matches_gaussian_oracle((code, d) in code_and_data()) {
        let x = systematic_encode(&block(&d), &code).unwrap();
        let oracle = gaussian_systematic(code.frozen_mask(), &d).expect("nonsingular");
        prop_assert_eq!(x.as_slice(), oracle.as_slice());
    }

    #[test]
    fn systematic_property((code, d) in code_and_data()) {
        let d = block(&d);
        let x = systematic_encode(&d, &code).unwrap();
        prop_assert_eq!(x.select(code.data_indices()), d);
        let u = encode(&x, &code).unwrap();
        prop_assert!(code.frozen_indices().iter().all(|&f| u.get(f) == 0));
    }

    #[test]
    fn systematic_is_linear((code, a) in code_and_data(), seed in any::<u64>()) {
        let a = block(&a);
        let b = BitBlock::random(code.data_count(), &mut polar_qkd::rng::stream_rng(seed, 1));
        let lhs = systematic_encode(&(&a ^ &b), &code).unwrap();
        let rhs = &systematic_encode(&a, &code).unwrap() ^ &systematic_encode(&b, &code).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn noiseless_round_trip((code, d) in code_and_data(), e in 0.001f64..0.3) {
        let d = block(&d);
        let x = systematic_encode(&d, &code).unwrap();
        prop_assert_eq!(systematic_decode(&x, e, &code).unwrap(), d);
    }
}

#[test]
fn noiseless_round_trip_designed_codes_up_to_4096() {
    for n in 1..=12u32 {
        let code = PolarCode::design(0.04, 1 << n).unwrap();
        for seed in 0..3 {
            let d = BitBlock::random(
                code.data_count(),
                &mut polar_qkd::rng::stream_rng(seed, u64::from(n)),
            );
            let x = systematic_encode(&d, &code).unwrap();
            assert_eq!(systematic_decode(&x, 0.04, &code).unwrap(), d, "n = {n}");
        }
    }
}

#[test]
fn worked_example_codeword_expression() {
    let code = PolarCode::from_frozen_set(3, &[1, 2, 3, 5]).unwrap();
    for d in all_nibbles() {
        let [d1, d2, d3, d4] = d;
        let u = block(&[0, 0, 0, d1, 0, d2, d3, d4]);
        assert_eq!(
            encode(&u, &code).unwrap().as_slice(),
            &worked_example_codeword(d)
        );
    }
}

#[test]
fn worked_example_systematic_codeword() {
    // Solving x'[data] = d with (x'G)[frozen] = 0 gives d1⊕d2⊕d3 in the first
    // position; the other seven positions agree with the printed x'.
    let code = PolarCode::from_frozen_set(3, &[1, 2, 3, 5]).unwrap();
    for d in all_nibbles() {
        let [d1, d2, d3, _] = d;
        let mut expected = worked_example_substituted(d);
        expected[0] = d1 ^ d2 ^ d3;
        let x = systematic_encode(&block(&d), &code).unwrap();
        assert_eq!(x.as_slice(), &expected, "d = {d:?}");
        assert_eq!(
            Some(x.as_slice().to_vec()),
            gaussian_systematic(code.frozen_mask(), &d)
        );
    }
}

#[test]
fn worked_example_decodes_1011() {
    let code = PolarCode::from_frozen_set(3, &[1, 2, 3, 5]).unwrap();
    let d = BitBlock::parse("1011").unwrap();
    let x = systematic_encode(&d, &code).unwrap();
    assert_eq!(systematic_decode(&x, 0.05, &code).unwrap(), d);
}

#[test]
fn generator_matrix_matches_definition() {
    for n in 0..=6u32 {
        let g = generator_matrix(n).unwrap();
        for (r, row) in g.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert_eq!(v, g_entry(r, c));
            }
        }
    }
}

/// Exhaustive maximum-likelihood decoding over all 16 codewords. On a BSC
/// with e < 1/2 this is minimum Hamming distance.
fn ml_decode(y: &BitBlock, code: &PolarCode) -> Vec<BitBlock> {
    let mut best = usize::MAX;
    let mut winners = Vec::new();
    for d in all_nibbles() {
        let d = block(&d);
        let x = systematic_encode(&d, code).unwrap();
        let dist = x.hamming_distance(y).unwrap();
        if dist < best {
            best = dist;
            winners.clear();
        }
        if dist == best {
            winners.push(d);
        }
    }
    winners
}

#[test]
fn single_flips_against_ml_oracle() {
    let code = PolarCode::from_frozen_set(3, &[1, 2, 3, 5]).unwrap();
    let mut sc_misses = Vec::new();
    for d in all_nibbles() {
        let d = block(&d);
        let x = systematic_encode(&d, &code).unwrap();
        for pos in 0..8 {
            let mut y = x.clone();
            y.flip(pos);
            // minimum distance 4: every single flip has a unique ML decision
            assert_eq!(ml_decode(&y, &code), vec![d.clone()]);
            if systematic_decode(&y, 0.05, &code).unwrap() != d {
                sc_misses.push((d.to_string(), pos));
            }
        }
    }
    // SC on this (4,8) code corrects every single flip, like ML.
    assert!(sc_misses.is_empty(), "{sc_misses:?}");
}

#[test]
fn sc_never_beats_ml_on_double_flips() {
    let code = PolarCode::from_frozen_set(3, &[1, 2, 3, 5]).unwrap();
    for d in all_nibbles() {
        let d = block(&d);
        let x = systematic_encode(&d, &code).unwrap();
        for a in 0..8 {
            for b in a + 1..8 {
                let mut y = x.clone();
                y.flip(a);
                y.flip(b);
                let ml = ml_decode(&y, &code);
                let sc = systematic_decode(&y, 0.05, &code).unwrap();
                // the SC output is a codeword, so it can be at most as close as ML's
                let sc_dist = systematic_encode(&sc, &code)
                    .unwrap()
                    .hamming_distance(&y)
                    .unwrap();
                let ml_dist = systematic_encode(&ml[0], &code)
                    .unwrap()
                    .hamming_distance(&y)
                    .unwrap();
                assert!(sc_dist >= ml_dist);
            }
        }
    }
}

#[test]
fn sc_decode_forces_frozen_zero() {
    let code = PolarCode::design(0.04, 256).unwrap();
    let y = BitBlock::random(256, &mut polar_qkd::rng::stream_rng(3, 3));
    let u = sc_decode(&y, 0.04, &code).unwrap();
    assert!(code.frozen_indices().iter().all(|&f| u.get(f) == 0));
}

#[test]
fn descriptor_round_trip() {
    let code = PolarCode::design(0.04, 1024).unwrap();
    let text = code.to_descriptor();
    assert_eq!(PolarCode::from_descriptor(&text).unwrap(), code);
}

#[test]
fn bhattacharyya_edges() {
    assert!(construct_frozen_set(0.1, 64, 0).unwrap().is_empty());
    assert_eq!(
        construct_frozen_set(0.1, 16, 16).unwrap(),
        (1..=16).collect::<Vec<_>>()
    );
}
