mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use journet::graph::{adjacency_rows, build_graph, Directedness, NodeKind, NodeRef};
use journet::layers::{build_bipartite, build_layer, project_one_mode, BipartiteKind, LayerSpec, Side};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn random_links_match_dense_accumulation() {
    for seed in 0..10 {
        let mut r = rng(seed);
        let mut dense = [[0u64; 20]; 20];
        let mut links = Vec::new();
        while links.len() < 100 {
            let (u, v) = (r.gen_range(0..20u64), r.gen_range(0..20u64));
            if u == v {
                continue;
            }
            let w = r.gen_range(1..=4);
            dense[u.min(v) as usize][u.max(v) as usize] += w;
            links.push((a(u), a(v), w));
        }
        let g = build_graph(Directedness::Undirected, links, []).unwrap();
        let mut expected = BTreeMap::new();
        for (u, row) in dense.iter().enumerate() {
            for (v, &w) in row.iter().enumerate() {
                if w > 0 {
                    expected.insert((a(u as u64), a(v as u64)), w);
                }
            }
        }
        assert_eq!(link_map(&g), expected, "seed {seed}");
        // symmetry and degree-sum invariants
        let degree_sum: usize = (0..g.node_count()).map(|i| g.neighbours(i).len()).sum();
        assert_eq!(degree_sum, 2 * g.link_count());
        for (u, v, w) in g.links() {
            assert_eq!(g.weight(v, u), Some(w));
        }
    }
}

#[test]
fn directed_out_degree_sum_is_arc_count() {
    let mut r = rng(3);
    let mut links = Vec::new();
    for _ in 0..60 {
        let (u, v) = (r.gen_range(0..15u64), r.gen_range(0..15u64));
        if u != v {
            links.push((a(u), a(v), 1));
        }
    }
    let g = build_graph(Directedness::Directed, links, []).unwrap();
    let out: usize = (0..g.node_count()).map(|i| g.out_links(i).len()).sum();
    let inn: usize = (0..g.node_count()).map(|i| g.in_links(i).len()).sum();
    assert_eq!(out, g.link_count());
    assert_eq!(inn, g.link_count());
}

#[test]
fn coauthor_row_for_3672() {
    let g = build_layer(&coauthor_fixture(), LayerSpec::CoAuthorship);
    let rows = adjacency_rows(&g, None);
    let row = rows.iter().find(|r| r.node == a(3672)).unwrap();
    assert_eq!(row.neighbours, vec![a(3671), a(3673), a(3674)]);
    assert_eq!(row.degree, 3);
    assert_eq!(row.aux_count, 1);
    let row100 = rows.iter().find(|r| r.node == a(100)).unwrap();
    assert_eq!(row100.neighbours, vec![a(4368), a(4385), a(10446)]);
    assert_eq!(row100.aux_count, 3);
}

#[test]
fn adjacency_rows_match_link_scan_and_ignore_insertion_order() {
    for seed in 0..10 {
        let mut r = rng(50 + seed);
        let g = random_graph(&mut r, 15, 0.25);
        let rows = adjacency_rows(&g, None);
        assert_eq!(rows.len(), 15);
        for row in &rows {
            let scan: BTreeSet<NodeRef> = g
                .link_triples()
                .into_iter()
                .filter_map(|(u, v, _)| {
                    if u == row.node {
                        Some(v)
                    } else if v == row.node {
                        Some(u)
                    } else {
                        None
                    }
                })
                .collect();
            assert_eq!(row.degree, scan.len());
            assert_eq!(row.neighbours, scan.into_iter().collect::<Vec<_>>());
        }
        let mut triples = g.link_triples();
        triples.shuffle(&mut r);
        let again = build_graph(Directedness::Undirected, triples.into_iter().map(|(u, v, w)| (v, u, w)), g.nodes().to_vec()).unwrap();
        assert_eq!(again, g);
        assert_eq!(adjacency_rows(&again, None), rows);
    }
}

#[test]
fn bipartite_links_match_nested_loops() {
    let c = random_corpus(&mut rng(11), 20);
    let expected_ap: BTreeSet<(NodeRef, NodeRef)> = c
        .papers
        .values()
        .flat_map(|p| p.author_ids.iter().map(move |x| (a(*x), NodeRef::paper(p.paper_id))))
        .collect();
    let expected_pp: BTreeSet<(NodeRef, NodeRef)> = c
        .papers
        .values()
        .flat_map(|p| p.pacs_codes.iter().map(move |x| (NodeRef::paper(p.paper_id), NodeRef::pacs(x))))
        .collect();
    let expected_pr: BTreeSet<(NodeRef, NodeRef)> = c
        .papers
        .values()
        .flat_map(|p| p.reference_keys.iter().map(move |x| (NodeRef::paper(p.paper_id), NodeRef::reference(&x.key))))
        .collect();
    for (kind, expected) in [
        (BipartiteKind::AuthorPaper, expected_ap),
        (BipartiteKind::PaperPacs, expected_pp),
        (BipartiteKind::PaperReference, expected_pr),
    ] {
        let b = build_bipartite(&c, kind);
        let got: BTreeSet<(NodeRef, NodeRef)> = b.graph().link_triples().into_iter().map(|(u, v, w)| {
            assert_eq!(w, 1);
            (u, v)
        }).collect();
        assert_eq!(got, expected, "{kind:?}");
        // no intra-kind link, every paper present
        assert!(b.graph().links().all(|(u, v, _)| b.graph().node(u).kind != b.graph().node(v).kind));
        assert!(c.papers.keys().all(|id| b.graph().contains(&NodeRef::paper(*id))));
    }
}

#[test]
fn projection_equals_pairwise_intersections() {
    for seed in 0..100 {
        let mut r = rng(1000 + seed);
        let (bg, left_rel, right_rel) = random_bipartite(&mut r);
        for (side, rel) in [(Side::Left, &left_rel), (Side::Right, &right_rel)] {
            let g = project_one_mode(&bg, side);
            assert_eq!(link_map(&g), pairwise_common(rel), "seed {seed} {side:?}");
            assert_eq!(g.nodes(), rel.keys().cloned().collect::<Vec<_>>().as_slice());
        }
    }
}

#[test]
fn coupling_and_cocitation_are_projection_duals() {
    for seed in 0..50 {
        let c = random_corpus(&mut rng(500 + seed), 20);
        let bip = build_bipartite(&c, BipartiteKind::PaperReference);
        assert_eq!(build_layer(&c, LayerSpec::BibliographicCoupling), project_one_mode(&bip, Side::Left));
        let cocit = build_layer(&c, LayerSpec::CoCitation);
        let proj = project_one_mode(&bip, Side::Right);
        // co-citation has only cited works as nodes; the projection matches on links
        assert_eq!(link_map(&cocit), link_map(&proj), "seed {seed}");
    }
}

#[test]
fn projection_edges_agree_with_records() {
    let c = random_corpus(&mut rng(77), 20);
    let coauth = build_layer(&c, LayerSpec::CoAuthorship);
    for ((u, v), w) in link_map(&coauth) {
        let (journet::NodeId::Int(x), journet::NodeId::Int(y)) = (&u.id, &v.id) else { panic!() };
        let shared = c.papers.values().filter(|p| p.author_ids.contains(x) && p.author_ids.contains(y)).count();
        assert_eq!(w as usize, shared);
    }
    for (i, n) in coauth.nodes().iter().enumerate() {
        let journet::NodeId::Int(x) = n.id else { panic!() };
        let count = c.papers.values().filter(|p| p.author_ids.contains(&x)).count();
        assert_eq!(coauth.aux(i), Some(count as u64));
    }
    let pacs = build_layer(&c, LayerSpec::PaperCommonPacs);
    for ((u, v), w) in link_map(&pacs) {
        let pu = &c.papers[&u.id.to_string().parse().unwrap()];
        let pv = &c.papers[&v.id.to_string().parse().unwrap()];
        assert_eq!(w as usize, pu.pacs_codes.intersection(&pv.pacs_codes).count());
    }
    let cit = build_layer(&c, LayerSpec::PaperCitation);
    for (u, v, w) in cit.link_triples() {
        assert_eq!(w, 1);
        let citing = &c.papers[&u.id.to_string().parse().unwrap()];
        assert!(citing.reference_keys.iter().any(|r| r.internal_paper_id.map(|i| i.to_string()) == Some(v.id.to_string())));
    }
}

#[test]
fn seed_paper_pattern_in_three_layers() {
    let c = overlap_corpus();
    let seed = p("v4n4p14");
    let other = p("v4n2p17");
    for spec in [LayerSpec::PaperCommonAuthor, LayerSpec::PaperCommonPacs] {
        let g = build_layer(&c, spec);
        let (i, j) = (g.index_of(&seed).unwrap(), g.index_of(&other).unwrap());
        assert!(g.weight(i, j).is_some(), "{spec}");
    }
    let cit = build_layer(&c, LayerSpec::PaperCitation);
    let (i, j) = (cit.index_of(&seed).unwrap(), cit.index_of(&other).unwrap());
    assert_eq!(cit.weight(i, j), Some(1));
    assert_eq!(cit.weight(j, i), None);
}

#[test]
fn every_layer_is_deterministic_and_loop_free() {
    let c = random_corpus(&mut rng(9), 20);
    for spec in LayerSpec::ALL {
        let g = build_layer(&c, spec);
        assert_eq!(g, build_layer(&c, spec));
        assert_eq!(g.is_directed(), spec.is_directed());
        assert!(g.links().all(|(u, v, _)| u != v));
        let kinds: BTreeSet<NodeKind> = spec.node_kinds().iter().copied().collect();
        assert!(g.kinds().is_subset(&kinds), "{spec}");
    }
}

proptest! {
    #[test]
    fn insertion_order_never_changes_the_graph(mut edges in prop::collection::vec((0u64..12, 0u64..12, 1u64..4), 0..40)) {
        edges.retain(|(u, v, _)| u != v);
        let g1 = build_graph(Directedness::Undirected, edges.iter().map(|&(u, v, w)| (a(u), a(v), w)), []).unwrap();
        edges.reverse();
        let g2 = build_graph(Directedness::Undirected, edges.iter().map(|&(u, v, w)| (a(v), a(u), w)), []).unwrap();
        prop_assert_eq!(&g1, &g2);
        prop_assert_eq!(adjacency_rows(&g1, None), adjacency_rows(&g2, None));
    }
}
