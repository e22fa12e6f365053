use ira_lattice::codec::{
    cn_update_dft, cn_update_direct, encode_full, make_ensemble, sample_graph, vn_update, Preset, ProbVec,
};
use ira_lattice::PartitionTable;
use proptest::prelude::*;

fn prob_vec(q: usize) -> impl Strategy<Value = ProbVec<f64>> {
    prop::collection::vec(1e-6f64..1.0, q).prop_map(ProbVec::from_weights)
}

fn check_case() -> impl Strategy<Value = (Vec<ProbVec<f64>>, Vec<usize>, usize)> {
    (2usize..=5).prop_flat_map(|deg| {
        (
            prop::collection::vec(prob_vec(25), deg),
            prop::collection::vec(0usize..25, deg),
            0..deg,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dft_check_update_matches_direct((inc, h, target) in check_case()) {
        let t = PartitionTable::hurwitz_1_2i();
        let a = cn_update_direct(&inc, &h, target, &t).unwrap();
        let b = cn_update_dft(&inc, &h, target, &t).unwrap();
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn check_update_of_uniform_inputs_is_uniform(h in prop::collection::vec(0usize..25, 3), target in 0usize..3) {
        let t = PartitionTable::hurwitz_1_2i();
        let inc = vec![ProbVec::<f64>::from_weights(vec![1.0; 25]); 3];
        let out = cn_update_dft(&inc, &h, target, &t).unwrap();
        prop_assert!(out.as_slice().iter().all(|&v| (v - 0.04).abs() < 1e-12));
    }

    #[test]
    fn variable_update_is_order_free(a in prob_vec(25), b in prob_vec(25), c in prob_vec(25)) {
        let x = vn_update(&[a.clone(), b.clone()], Some(&c)).unwrap();
        let y = vn_update(&[b, a], Some(&c)).unwrap();
        for (u, v) in x.as_slice().iter().zip(y.as_slice()) {
            prop_assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn encoder_is_linear(seed in any::<u64>(), graph_seed in 0u64..4) {
        let t = PartitionTable::hurwitz_1_2i();
        let p = Preset::Rate3_4;
        let e = make_ensemble(&p.edge_vn(), &p.edge_cn(), &t, 400).unwrap();
        let g = sample_graph(&e, graph_seed);
        let mut rng = ira_lattice::rng::stream(seed, 0);
        let mut draw = || (0..g.k).map(|_| rand::Rng::random_range(&mut rng, 0..25u8)).collect::<Vec<u8>>();
        let (u1, u2) = (draw(), draw());
        let sum: Vec<u8> = u1.iter().zip(&u2).map(|(&a, &b)| t.add_idx(a as usize, b as usize) as u8).collect();
        let c1 = encode_full(&u1, &g, &t).unwrap().c;
        let c2 = encode_full(&u2, &g, &t).unwrap().c;
        let c12 = encode_full(&sum, &g, &t).unwrap().c;
        for n in 0..g.n {
            prop_assert_eq!(t.add_idx(c1[n] as usize, c2[n] as usize), c12[n] as usize);
        }
    }
}

#[test]
fn graphs_are_fully_determined_by_seed() {
    let t = PartitionTable::hurwitz_1_2i();
    let p = Preset::Rate1_2;
    let e = make_ensemble(&p.edge_vn(), &p.edge_cn(), &t, 1000).unwrap();
    assert_eq!(sample_graph(&e, 3), sample_graph(&e, 3));
    assert_ne!(sample_graph(&e, 3).interleaver, sample_graph(&e, 4).interleaver);
    let g = sample_graph(&e, 3);
    assert!(g.constraint_residuals(&t).iter().all(|&r| r == 0));
}
