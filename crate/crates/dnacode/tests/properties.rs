//! Randomized invariants; every failure shrinks to a small witness.

use proptest::collection::vec;
use proptest::prelude::*;

use dnacode::dup;
use dnacode::multidel;
use dnacode::seqcore::{self, Alphabet, ChannelConfig};
use dnacode::sliced::DataIndexedParams;
use dnacode::vt;

proptest! {
    #[test]
    fn vt_corrects_any_single_deletion(n in 3usize..=30, seed in vec(0u8..2, 30), pos_seed: usize) {
        let usable = vt::data_len(n).unwrap();
        if usable == 0 { return Ok(()); }
        let data = &seed[..usable];
        let cw = vt::encode(data, n).unwrap();
        prop_assert_eq!(cw.len(), n);
        let mut y = cw.clone();
        y.remove(pos_seed % n);
        let params = vt::VtParams::new(n, 0).unwrap();
        prop_assert_eq!(vt::decode(&y, &params).unwrap(), cw.clone());
        prop_assert_eq!(vt::extract(&cw).unwrap(), data.to_vec());
    }

    #[test]
    fn pipeline_survives_up_to_two_deletions(
        data in vec(0u8..2, 2..20),
        cuts in vec(0usize..1000, 0..=2),
    ) {
        let cw = multidel::encode_t_del(&data, 2).unwrap();
        let mut y = cw.clone();
        for c in cuts {
            y.remove(c % y.len());
        }
        prop_assert_eq!(multidel::decode_t_del(&y, data.len(), 2).unwrap(), data);
    }

    #[test]
    fn indicators_reconstruct_every_word(w in vec(0u8..2, 0..40)) {
        let i10 = multidel::indicator10(&w);
        let i01 = multidel::indicator01(&w);
        prop_assert_eq!(multidel::reconstruct_from_indicators(&i10, &i01).unwrap(), w);
    }

    #[test]
    fn derivative_integrate_inverse(q in 2u8..=4, k in 1usize..=3, seed in vec(0u8..12, 0..40)) {
        let w: Vec<u8> = seed.iter().map(|&s| s % q).collect();
        let d = dup::derivative(&w, k, q).unwrap();
        prop_assert_eq!(d.d.len(), w.len() + k);
        prop_assert_eq!(dup::integrate(&d).unwrap(), w);
    }

    #[test]
    fn duplication_preserves_the_fixed_k_root(
        seed in vec(0u8..2, 1..16),
        k in 1usize..=3,
        src in 0usize..16,
        rounds in 1usize..4,
    ) {
        let alphabet = Alphabet::binary();
        let mut x = alphabet.parse(
            &seed.iter().map(|&b| char::from(b'0' + b)).collect::<String>()
        ).unwrap();
        if x.len() < k { return Ok(()); }
        let root = dup::tandem_root_fixed_k(&x, k).unwrap();
        let rule = dup::DupRule::new(dup::DupKind::Tandem, k).unwrap();
        for _ in 0..rounds {
            let at = src % (x.len() - k + 1);
            x = dup::apply_dup(&x, &rule, at, None).unwrap();
        }
        prop_assert_eq!(dup::tandem_root_fixed_k(&x, k).unwrap(), root);
    }

    #[test]
    fn channel_respects_edit_budgets(
        seed in vec(0u8..2, 1..30),
        dels in 0usize..3,
        ins in 0usize..3,
        subs in 0usize..3,
        rng_seed: u64,
    ) {
        let alphabet = Alphabet::binary();
        let x = alphabet.parse(
            &seed.iter().map(|&b| char::from(b'0' + b)).collect::<String>()
        ).unwrap();
        let dels = dels.min(x.len());
        let subs = subs.min(x.len().saturating_sub(dels));
        let cfg = ChannelConfig { deletions: dels, insertions: ins, substitutions: subs };
        let y = seqcore::apply_channel(&x, &cfg, rng_seed).unwrap();
        prop_assert_eq!(y.len(), x.len() - dels + ins);
        if ins == 0 && subs == 0 {
            prop_assert!(y.is_subsequence_of(&x));
        }
        if dels == 0 && subs == 0 {
            prop_assert!(x.is_subsequence_of(&y));
        }
    }

    #[test]
    fn data_indexed_roundtrip_is_order_free(data_seed: u64, shuffle_seed: u64) {
        use rand::{Rng, SeedableRng};
        use rand::seq::SliceRandom;
        use rand_chacha::ChaCha8Rng;
        let params = DataIndexedParams::new(4, 16, 1, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(data_seed);
        let data: Vec<u8> = (0..params.data_len()).map(|_| rng.gen_range(0..2u8)).collect();
        let cw = params.encode(&data).unwrap();
        let mut reads: Vec<Vec<u8>> = cw.sequences().cloned().collect();
        reads.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle_seed));
        prop_assert_eq!(params.decode(&reads).unwrap(), data);
    }
}
