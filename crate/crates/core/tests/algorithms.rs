//! Randomized algorithms checked against the oracles.

use localcut::generators::{circulant, clique, random_digraph, random_undirected};
use localcut::global_vc::{exact_vertex_connectivity, vertex_connectivity_check, VcConfig, VcVerdict};
use localcut::kecs::{max_kecs_directed, max_kecs_undirected, KecsConfig};
use localcut::local_ec::{approx_bound, gap_local_ec, local_ec, local_ec_alt, mark_cap, volume_bound};
use localcut::local_vc::local_vc;
use localcut::oracle::{self, brute_local_ec, brute_max_kecs};
use localcut::testing::{Model, Property, Tester, TesterConfig};
use localcut::{DirectedGraph, LocalCutParams, Mode, VertexId};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn leaving(g: &DirectedGraph, set: &[VertexId]) -> (usize, usize) {
    let mut inside = vec![false; g.n()];
    set.iter().for_each(|&v| inside[v] = true);
    let cut = g.arcs().filter(|&(u, v)| inside[u] && !inside[v]).count();
    let vol = g.arcs().filter(|&(u, _)| inside[u]).count();
    (cut, vol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn local_ec_output_is_a_small_local_cut(
        n in 3usize..16,
        p in 0.1f64..0.6,
        seed in any::<u64>(),
        nu in 1usize..12,
        k in 1usize..5,
        gamma in 0usize..3,
    ) {
        let g = random_digraph(n, p, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = (seed % n as u64) as usize;
        let params = LocalCutParams { x, nu, k, gamma };
        let Ok(out) = local_ec(&g, params, Mode::Relaxed, &mut rng) else { return Ok(()) };
        prop_assert!(out.stats.marked <= mark_cap(nu, k, gamma));
        prop_assert_eq!(out.stats.queries, out.stats.marked);
        if let Some(c) = out.edge_cut() {
            let (cut, vol) = leaving(&g, &c.vertices);
            prop_assert!(c.vertices.contains(&x) && c.vertices.len() < n);
            prop_assert_eq!((cut, vol), (c.cut_size, c.volume));
            prop_assert!(cut < k + gamma);
            prop_assert!(vol <= volume_bound(nu, k, gamma));
            // The enumeration oracle lists the same set.
            let all = brute_local_ec(&g, x, volume_bound(nu, k, gamma), k + gamma).unwrap();
            prop_assert!(all.contains(&c.vertices));
        }
    }

    #[test]
    fn gap_and_alt_outputs_are_sound(
        n in 3usize..16,
        p in 0.1f64..0.6,
        seed in any::<u64>(),
        nu in 1usize..12,
        k in 1usize..6,
    ) {
        let g = random_digraph(n, p, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        let x = (seed % n as u64) as usize;
        let gamma = k / 2;
        if let Ok(out) = gap_local_ec(&g, LocalCutParams { x, nu, k, gamma }, Mode::Relaxed, &mut rng) {
            if let Some(c) = out.edge_cut() {
                prop_assert!(c.vertices.contains(&x));
                prop_assert!(leaving(&g, &c.vertices).0 < k);
            }
        }
        if let Ok(out) = local_ec_alt(&g, x, nu, k, 0.5, Mode::Relaxed, &mut rng) {
            if let Some(c) = out.edge_cut() {
                prop_assert!(c.vertices.contains(&x) && c.vertices.len() < n);
                prop_assert!(leaving(&g, &c.vertices).0 < approx_bound(0.5, k));
            }
        }
    }

    #[test]
    fn local_vc_output_is_a_valid_triple(
        n in 4usize..18,
        p in 0.1f64..0.6,
        seed in any::<u64>(),
        nu in 1usize..10,
        k in 1usize..5,
        gamma in 0usize..2,
    ) {
        let g = random_digraph(n, p, seed);
        prop_assume!(g.min_out_degree() > 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(7));
        let x = (seed % n as u64) as usize;
        let Ok(out) = local_vc(&g, LocalCutParams { x, nu, k, gamma }, Mode::Relaxed, &mut rng) else { return Ok(()) };
        if let Some(r) = out.vertex_cut() {
            let t = r.witness.as_ref().expect("cuts carry a triple");
            prop_assert!(t.is_valid_in(&g));
            prop_assert_eq!(&t.separator, &r.cut);
            prop_assert!(r.cut.len() < k + gamma);
            if !r.fallback && r.split_volume > 0 {
                prop_assert!(t.left.contains(&x));
                prop_assert!(r.cut.len() <= r.split_cut);
            }
        }
    }
}

#[test]
fn global_vc_matches_oracle() {
    let mut wrong = 0;
    for seed in 0..40u64 {
        let n = 8 + seed as usize % 18;
        let g = if seed % 2 == 0 { random_digraph(n, 0.35, seed) } else { random_undirected(n, 0.3, seed) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let got = exact_vertex_connectivity(&g, &VcConfig::new(1, 0.5), &mut rng);
        let want = oracle::exact_vertex_connectivity(&g).unwrap();
        if let Some(t) = &got.triple {
            assert!(t.is_valid_in(&g), "seed {seed}");
        }
        wrong += usize::from(got.kappa != want.kappa);
    }
    assert!(wrong <= 1, "{wrong} disagreements");
}

#[test]
fn global_vc_cut_sizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let r = vertex_connectivity_check(&clique(12), &VcConfig::new(11, 0.2), &mut rng).unwrap();
    assert_eq!(r.verdict, VcVerdict::KConnected);
    // κ = 6: asking for k = 7 must find a cut, k = 6 may return one of size 6.
    let g = circulant(20, &[1, 2, 3]);
    for (k, must_cut) in [(7, true), (6, false), (4, false)] {
        let r = vertex_connectivity_check(&g, &VcConfig::new(k, 0.2), &mut rng).unwrap();
        match r.verdict {
            VcVerdict::Cut { cut, triple } => {
                assert!(triple.is_valid_in(&g));
                assert!(cut.len() >= 6 && cut.len() < approx_bound(0.2, k));
            }
            VcVerdict::KConnected => assert!(!must_cut, "k={k}"),
        }
    }
}

#[test]
fn kecs_matches_brute_force() {
    for seed in 0..60u64 {
        let n = 6 + seed as usize % 12;
        let k = 2 + seed as usize % 3;
        let directed = seed % 2 == 0;
        let g = if directed { random_digraph(n, 0.3, seed) } else { random_undirected(n, 0.35, seed) };
        let want = brute_max_kecs(&g, k).unwrap();
        for forced in [false, true] {
            let mut cfg = KecsConfig::new(k);
            if forced {
                cfg.nu = Some(6);
                cfg.baseline_arcs = Some(0);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
            let (got, _) = if directed {
                max_kecs_directed(&g, &cfg, &mut rng).unwrap()
            } else {
                max_kecs_undirected(&g, &cfg, &mut rng).unwrap()
            };
            assert_eq!(got.parts, want, "seed {seed} forced {forced}");
        }
    }
}

#[test]
fn testers_accept_connected_graphs() {
    let g = circulant(40, &[1, 2, 3, 4]);
    for property in [Property::Edge, Property::Vertex] {
        for model in [Model::Unbounded { avg_degree_known: true }, Model::Bounded { d: 8 }] {
            let tester = Tester::new(&g, TesterConfig::new(8, 0.3, model, property)).unwrap();
            for seed in 0..20 {
                let v = tester.run(&mut ChaCha8Rng::seed_from_u64(seed));
                assert!(!v.rejected(), "{property:?} {model:?} seed {seed}");
                assert!(v.queries <= tester.budget());
            }
        }
    }
}
