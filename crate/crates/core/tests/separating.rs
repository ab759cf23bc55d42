use proptest::prelude::*;
use tverberg_core::separating::{
    build_auxiliary_graph, check_fac_bound, extract_incidences, improve_separating_system, naive_separating_system,
    DisjointFamily, IncidenceKind, SeparatingSystem, DEFAULT_MAX_ROUNDS,
};

fn check_graph(system: &SeparatingSystem, a: usize) -> Result<(), TestCaseError> {
    let incidences = extract_incidences(system);
    prop_assert!(incidences.len() <= a * (a - 1) / 2);
    let mut pairs: Vec<_> = incidences.iter().map(|r| r.pair).collect();
    pairs.dedup();
    prop_assert_eq!(pairs.len(), incidences.len(), "one incidence per pair");
    let graph = build_auxiliary_graph(system, &incidences).map_err(|e| TestCaseError::fail(e.to_string()))?;
    graph.check_plane().map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(graph.edges.len() <= 3 * a - 6);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn naive_systems_are_valid_and_planar(a in 3usize..=6, seed in any::<u64>()) {
        let family = DisjointFamily::random(a, seed).unwrap();
        let naive = naive_separating_system(&family).unwrap();
        prop_assert!(naive.validate(&family).is_ok());
        prop_assert!(naive.fac <= a * (a - 1));
        check_graph(&naive, a)?;
    }

    #[test]
    fn improvement_keeps_validity_and_raises_the_score(a in 3usize..=6, seed in any::<u64>()) {
        let family = DisjointFamily::random(a, seed).unwrap();
        let naive = naive_separating_system(&family).unwrap();
        let imp = improve_separating_system(&naive, &family, DEFAULT_MAX_ROUNDS).unwrap();
        prop_assert!(imp.system.validate(&family).is_ok());
        let mut prev = imp.initial;
        for m in &imp.moves {
            prop_assert_eq!(m.before, prev);
            prop_assert!(m.after > m.before);
            // lexicographic in (|I|, |I1|), and Fac only drops at a fixed pair
            let lex_before = (m.before.incidences, m.before.type1);
            let lex_after = (m.after.incidences, m.after.type1);
            prop_assert!(lex_after >= lex_before);
            if lex_after == lex_before {
                prop_assert!(m.after.fac < m.before.fac);
            }
            prev = m.after;
        }
        prop_assert_eq!(prev, imp.score);
        check_graph(&imp.system, a)?;
        let report = check_fac_bound(&imp.system).unwrap();
        let incidences = extract_incidences(&imp.system);
        prop_assert_eq!(report.incidences, incidences.len());
        prop_assert_eq!(report.type1, incidences.iter().filter(|r| r.kind == IncidenceKind::Type1).count());
        if imp.supported {
            prop_assert!(report.fac <= 2 * report.incidences);
        }
    }

    #[test]
    fn systems_survive_json(a in 3usize..=5, seed in any::<u64>()) {
        let family = DisjointFamily::random(a, seed).unwrap();
        let system = naive_separating_system(&family).unwrap();
        let text = serde_json::to_string(&system).unwrap();
        let back: SeparatingSystem = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &system);
        let ftext = serde_json::to_string(&family).unwrap();
        let fback: DisjointFamily = serde_json::from_str(&ftext).unwrap();
        prop_assert_eq!(fback.sets(), family.sets());
    }
}
