use proptest::prelude::*;
use toggled_core::{
    brute_force_solutions, complementing_set, gf2, inductive::PairToggle, min_weight_solution, pair_toggle_set, solve,
    solve_complement, Configuration, Graph, MemoTable, PressSet,
};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |present| {
            let all = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            Graph::from_edges(n, all.zip(present).filter(|(_, p)| *p).map(|(e, _)| e)).unwrap()
        })
    })
}

fn bits(n: usize) -> impl Strategy<Value = Vec<bool>> {
    proptest::collection::vec(any::<bool>(), n)
}

fn from_bools(v: &[bool]) -> PressSet {
    PressSet::from_indices(v.len(), v.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
}

fn graph_and_set(max_n: usize) -> impl Strategy<Value = (Graph, PressSet, PressSet)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), bits(n), bits(n)).prop_map(|(g, a, b)| (g, from_bools(&a), from_bools(&b)))
    })
}

proptest! {
    #[test]
    fn solutions_round_trip((g, s, _) in graph_and_set(16)) {
        // any reachable delta is solved, and the answer reproduces it
        let target = g.effect(&s).unwrap();
        let out = solve(&g, &target).unwrap().expect("effect of a press-set is reachable");
        prop_assert_eq!(g.effect(&out.particular).unwrap(), target);
        for b in &out.nullspace_basis {
            prop_assert!(g.effect(b).unwrap().is_zero());
        }
        prop_assert_eq!(out.rank + out.nullity(), g.n());
    }

    #[test]
    fn nullspace_basis_is_independent(g in graph_strategy(16)) {
        let out = solve_complement(&g).unwrap();
        let rows = out.nullspace_basis.iter().map(|b| b.bits().clone()).collect();
        prop_assert_eq!(gf2::Gf2Matrix::from_rows(rows, g.n()).rank(), out.nullity());
    }

    #[test]
    fn inductive_and_linear_agree(g in graph_strategy(14)) {
        let (constructed, trace) = complementing_set(&g).unwrap();
        prop_assert!(g.effect(&constructed).unwrap().is_all_ones());
        prop_assert_eq!(trace.replay().unwrap(), constructed.clone());
        let linear = solve_complement(&g).unwrap();
        prop_assert!(linear.same_coset(&linear.particular, &constructed));
    }

    #[test]
    fn pair_sets_are_exact(g in graph_strategy(12), a in 0usize..12, b in 0usize..12) {
        prop_assume!(a < g.n() && b < g.n() && a != b);
        match pair_toggle_set(&g, a, b, &mut MemoTable::new()).unwrap() {
            PairToggle::Pair(s) => {
                prop_assert_eq!(g.effect(&s).unwrap(), Configuration::from_indices(g.n(), [a, b]));
            }
            PairToggle::ShortCircuit(s) => prop_assert!(g.effect(&s).unwrap().is_all_ones()),
        }
    }

    #[test]
    fn min_weight_matches_brute_force((g, s, _) in graph_and_set(14)) {
        let target = g.effect(&s).unwrap();
        let out = solve(&g, &target).unwrap().unwrap();
        let best = min_weight_solution(&out, gf2::DEFAULT_NULLITY_CAP).unwrap();
        let oracle = brute_force_solutions(&g, &target).unwrap();
        prop_assert_eq!(Some(&best), oracle.min_weight());
    }
}

#[test]
fn solution_counts_match_enumeration_up_to_twelve() {
    use toggled_core::{generate, GraphKind};
    for (n, seed) in (1..=12).flat_map(|n| (0..4).map(move |s| (n, s))) {
        let g = generate(&GraphKind::ErdosRenyi { n, p: 0.35 }, Some(seed)).unwrap();
        let target = Configuration::ones(n);
        let out = solve(&g, &target).unwrap().unwrap();
        let oracle = brute_force_solutions(&g, &target).unwrap();
        assert_eq!(
            out.solution_count(),
            Some(oracle.solutions.len() as u128),
            "n={n} seed={seed}"
        );
    }
}
