use super::*;
use crate::fixtures;
use rand::{Rng, SeedableRng};

fn swap_loop() -> CleanPresentation {
    CleanPresentation::new(2, &[(vec![1, 2], vec![1, 2], vec![Word::letter(2), Word::letter(1)])]).unwrap()
}

fn partial_hnn() -> CleanPresentation {
    CleanPresentation::new(2, &[(vec![1], vec![2], vec![Word::letter(2)])]).unwrap()
}

#[test]
fn validation_examples() {
    for f in fixtures::all() {
        assert!(validate_clean(&f.gog()).is_ok(), "{}", f.name);
    }
    let mut g = fixtures::PARTIAL_HNN.gog();
    g.edge_maps.insert(0, FreeMap::new(1, 2, vec![Word::from_letters(&[2, 2])]).unwrap());
    let report = validate_clean(&g);
    assert!(matches!(report.violations[..], [Error::NotABasisOfFactor(_)]), "{report:?}");

    let mut g = fixtures::SWAP.gog();
    g.edges[0].bar = 0;
    let report = validate_clean(&g);
    assert!(!report.is_ok());
    assert!(report.violations.iter().any(|e| e.to_string().contains("bar(e) = e")));
}

#[test]
fn spanning_tree_examples() {
    let single = Graph { vertices: vec![0], edges: vec![] };
    assert!(spanning_tree(&single).unwrap().is_empty());
    let e = |id, bar, tau| EdgeSpec { id, bar, tau };
    let parallel = Graph { vertices: vec![0, 1], edges: vec![e(0, 1, 1), e(1, 0, 0), e(2, 3, 1), e(3, 2, 0)] };
    assert_eq!(spanning_tree(&parallel).unwrap(), [0]);
    let path = Graph {
        vertices: vec![0, 1, 2],
        edges: vec![e(0, 1, 1), e(1, 0, 0), e(2, 3, 2), e(3, 2, 1)],
    };
    assert_eq!(spanning_tree(&path).unwrap(), [0, 2]);
    let split = Graph { vertices: vec![0, 1], edges: vec![] };
    assert_eq!(spanning_tree(&split).unwrap_err(), Error::Disconnected);
}

#[test]
fn collapse_examples() {
    let c = collapse(&fixtures::SWAP.gog()).unwrap();
    assert_eq!(c.rank, 2);
    assert_eq!(c.loops.len(), 1);
    let rec = c.tree_record.as_ref().unwrap();
    assert_eq!(rec.vertex_dictionary[&0], [Word::letter(1), Word::letter(2)]);

    let g = fixtures::AMALGAM.gog();
    let c = collapse(&g).unwrap();
    assert_eq!(c.rank, 3);
    assert_eq!(c.rank, g.total_vertex_rank() - 1);
    assert!(c.loops.is_empty());
    for r in rewritten_original_relators(&g, &c).unwrap() {
        assert!(is_trivial(&r, &c), "{r}");
    }
    // a loop survives collapse unchanged
    let c = collapse(&fixtures::PARTIAL_HNN.gog()).unwrap();
    assert_eq!(c.loops[0].domain.selected(), &[1]);
    assert_eq!(c.loops[0].codomain.selected(), &[2]);
}

#[test]
fn collapse_of_a_graph_with_tree_and_loop() {
    // two vertices joined by two edge pairs: one becomes the tree, the other a loop
    let g: GraphOfGroups = serde_json::from_str(
        r#"{"vertices":[0,1],
            "edges":[{"id":0,"bar":1,"tau":1},{"id":1,"bar":0,"tau":0},
                     {"id":2,"bar":3,"tau":1},{"id":3,"bar":2,"tau":0}],
            "vertex_ranks":{"0":2,"1":2},
            "edge_factors":{"0":{"selected":[1]},"1":{"selected":[1]},
                            "2":{"selected":[2]},"3":{"selected":[2]}},
            "edge_maps":{"0":{"source_rank":1,"images":[[1]]},
                         "3":{"source_rank":1,"images":[[2]]}}}"#,
    )
    .unwrap();
    let c = collapse(&g).unwrap();
    assert_eq!(c.rank, 3);
    assert_eq!(c.loops.len(), 1);
    for r in rewritten_original_relators(&g, &c).unwrap() {
        assert!(is_trivial(&r, &c), "{r}");
    }
    assert_eq!(polyfree_chain(&c).quotient_rank, 1);
}

#[test]
fn presentation_examples() {
    let p = pi1_presentation(&partial_hnn());
    assert_eq!(p.relators.len(), 1);
    assert_eq!(p.relators[0].to_string(), "t1 x1 t1^-1 x2^-1");
    let p = pi1_presentation(&swap_loop());
    let shown: Vec<String> = p.relators.iter().map(|r| r.to_string()).collect();
    assert_eq!(shown, ["t1 x1 t1^-1 x2^-1", "t1 x2 t1^-1 x1^-1"]);
    let free = CleanPresentation::new(2, &[]).unwrap();
    assert!(pi1_presentation(&free).relators.is_empty());
}

#[test]
fn britton_examples() {
    let c = partial_hnn();
    let w = c.parse_word("t1 x1 t1^-1 x2^-1").unwrap();
    assert!(britton_reduce(&w, &c).is_empty());
    let w = c.parse_word("t1 x2 t1^-1").unwrap();
    assert_eq!(britton_reduce(&w, &c), w);
    assert!(britton_reduce(&GoGWord::identity(), &c).is_empty());
    for f in fixtures::all() {
        let c = f.presentation().unwrap();
        for w in f.words(&c, true).unwrap() {
            assert!(is_trivial(&w, &c), "{}: {w}", f.name);
        }
        for w in f.words(&c, false).unwrap() {
            let r = britton_reduce(&w, &c);
            assert!(!r.is_empty(), "{}: {w}", f.name);
            assert!(!has_pinch(&r, &c));
        }
    }
}

#[test]
fn projection_and_chain() {
    let c = CleanPresentation::new(1, &[(vec![], vec![], vec![]), (vec![], vec![], vec![])]).unwrap();
    let w = GoGWord::parse("t1 x1 t2", 1, 2).unwrap();
    assert_eq!(project_to_graph_group(&w).letters(), &[1, 2]);
    assert!(project_to_graph_group(&GoGWord::parse("x1 x1", 1, 2).unwrap()).is_identity());
    assert!(project_to_graph_group(&GoGWord::parse("t1 x1 t1^-1", 1, 2).unwrap()).is_identity());
    let chain = polyfree_chain(&c);
    assert_eq!(chain.quotient_rank, 2);
    assert_eq!(chain.length, 2);
    let chain = polyfree_chain(&CleanPresentation::new(2, &[]).unwrap());
    assert_eq!((chain.quotient_rank, chain.length), (0, 1));
    let chain = polyfree_chain(&partial_hnn());
    assert!(chain.relators_project_trivially && chain.kernel_is_tree_of_free_groups);
}

/// `⟨x, y, t | t x t⁻¹ = y⟩` is free on `{x, t}`; substituting `y = t x t⁻¹`
/// and freely reducing decides triviality independently of Britton.
#[test]
fn britton_agrees_with_free_rewriting() {
    let c = partial_hnn();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let len = rng.gen_range(0..=12);
        let mut w = GoGWord::identity();
        let mut flat = Vec::new();
        for _ in 0..len {
            let s: i32 = [1, 2, 3][rng.gen_range(0..3)] * if rng.gen_bool(0.5) { 1 } else { -1 };
            match s.abs() {
                1 => {
                    w.push_vertex(Word::letter(s.signum()));
                    flat.push(s.signum());
                }
                2 => {
                    w.push_vertex(Word::letter(2 * s.signum()));
                    // y^{±1} = t x^{±1} t⁻¹ in F(x, t) with t as letter 2
                    flat.extend([2, s.signum(), -2]);
                }
                _ => {
                    w.push_loop(s.signum());
                    flat.push(2 * s.signum());
                }
            }
        }
        let free_trivial = Word::from_letters(&flat).is_identity();
        assert_eq!(is_trivial(&w, &c), free_trivial, "{w}");
    }
}
