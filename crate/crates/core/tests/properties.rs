use powerpath::embed::{embed_power_path, embed_square_path, hamilton_path, EmbedMode, EmbedParams};
use powerpath::extremal::longest_power_path;
use powerpath::median::{
    bad_indices, check_properties, eliminate_bad_indices, insertion_local_search, rotate_triple, Rotation,
};
use powerpath::{compose_forward, forward_edges, Ordering, Tournament};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn shuffled(n: usize, seed: u64) -> Ordering {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    Ordering::new(perm).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn local_search_degree_bound(n in 2usize..70, seed: u64, start: u64) {
        let t = Tournament::random(n, seed);
        let ord = insertion_local_search(&t, &shuffled(n, start)).unwrap();
        let seq = ord.as_slice();
        for p in 0..n {
            let mut out = 0;
            for q in p + 1..n {
                out += usize::from(t.edge(seq[p], seq[q]));
                prop_assert!(2 * out >= q - p, "vertex at {} has {} out-neighbours up to {}", p, out, q);
            }
        }
        prop_assert!(check_properties(&t, &ord).unwrap().is_adjacent_forward);
    }

    #[test]
    fn rotations_preserve_forward_count(n in 3usize..30, seed: u64, start: u64) {
        let t = Tournament::random(n, seed);
        let ord = shuffled(n, start);
        let before = forward_edges(&t, &ord).unwrap();
        for i in 3..=n {
            let (a, b, c) = (ord.at(i - 2), ord.at(i - 1), ord.at(i));
            let cyclic = t.edge(a, b) && t.edge(b, c) && t.edge(c, a);
            for rot in [Rotation::Left, Rotation::Right] {
                match rotate_triple(&t, &ord, i, rot) {
                    Ok(r) => {
                        prop_assert!(cyclic);
                        prop_assert_eq!(forward_edges(&t, &r).unwrap(), before);
                    }
                    Err(_) => prop_assert!(!cyclic),
                }
            }
        }
    }

    #[test]
    fn elimination_clears_bad_indices(n in 3usize..45, seed: u64, start: u64) {
        let t = Tournament::random(n, seed);
        let ord = insertion_local_search(&t, &shuffled(n, start)).unwrap();
        let out = eliminate_bad_indices(&t, &ord).unwrap();
        prop_assert!(bad_indices(&t, &out).unwrap().is_empty());
        prop_assert!(forward_edges(&t, &out).unwrap() >= forward_edges(&t, &ord).unwrap());
        let mut sorted = out.clone().into_vec();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn square_and_hamilton_paths_verify(n in 1usize..120, seed: u64) {
        let t = Tournament::random(n, seed);
        let w = embed_square_path(&t).unwrap();
        prop_assert!(w.verify(&t).unwrap());
        prop_assert!(w.len() >= (2 * n).div_ceil(3));
        let h = hamilton_path(&t).unwrap();
        prop_assert_eq!(h.len(), n);
        prop_assert!(h.verify(&t).unwrap());
    }

    #[test]
    fn heuristic_power_embedding_verifies(
        n in 30usize..600,
        seed: u64,
        k in 1usize..=3,
        t_scale in 1usize..4,
        blocks_extra in 0usize..3,
        implicit: bool,
    ) {
        let a_star = 1usize << (2 * k);
        let block_size = a_star * t_scale;
        let params = EmbedParams::new(k, block_size, a_star, 2 * k + 1 + blocks_extra).unwrap();
        let t = if implicit { Tournament::implicit_random(n, seed) } else { Tournament::random(n, seed) };
        let e = embed_power_path(&t, &params, EmbedMode::Heuristic).unwrap();
        prop_assert!(e.witness.verify(&t).unwrap());
        prop_assert!(e.trace.check(&params).is_ok());
        prop_assert_eq!(e.witness.len(), k * e.trace.steps.len() + e.trace.final_chunk.len());
    }

    #[test]
    fn composition_is_subadditive(na in 1usize..7, nb in 1usize..7, sa: u64, sb: u64, k in 1usize..4) {
        let a = Tournament::random(na, sa);
        let b = Tournament::random(nb, sb);
        let ab = compose_forward(&a, &b).unwrap();
        let whole = longest_power_path(&ab, k).unwrap().max_vertices;
        let parts = longest_power_path(&a, k).unwrap().max_vertices + longest_power_path(&b, k).unwrap().max_vertices;
        prop_assert!(whole <= parts);
    }
}
