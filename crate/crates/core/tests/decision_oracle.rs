mod common;

use common::{all_two_element_binary, data, table_of, Rng};
use maltsev_lab::decision::{
    verify_local_qwnu, verify_siggers_instances, verify_siggers_pattern, Decider,
};
use maltsev_lab::image::induced_algebra;
use maltsev_lab::io::{read_algebra, report_from_json, report_to_json};
use maltsev_lab::oracle::{
    oracle_find_quasi_siggers, oracle_find_qwnu, random_algebra, table_is_quasi_siggers,
    table_is_qwnu, DEFAULT_CLONE_BUDGET,
};
use maltsev_lab::{
    check_qwnu_identities, has_k_qwnu, has_k_wnu_idemp, has_n_local_k_qwnu, has_quasi_taylor,
    minimal_unary_idempotent, term_table, Error, FiniteAlgebra, Operation, Problem, Term,
};

fn oracle_qwnu(alg: &FiniteAlgebra, k: usize) -> bool {
    oracle_find_qwnu(alg, k, DEFAULT_CLONE_BUDGET)
        .verdict()
        .expect("complete slice")
}

fn oracle_siggers(alg: &FiniteAlgebra) -> bool {
    oracle_find_quasi_siggers(alg, DEFAULT_CLONE_BUDGET)
        .verdict()
        .expect("complete slice")
}

#[test]
fn named_algebras_against_oracle() {
    let semilattice = read_algebra(&data("semilattice.alg")).unwrap();
    let projection = read_algebra(&data("projection.alg")).unwrap();
    let minority = read_algebra(&data("z2_minority.alg")).unwrap();
    let affine = read_algebra(&data("z3_maltsev.alg")).unwrap();

    for k in 2..=5 {
        assert!(has_k_qwnu(&semilattice, k).unwrap().is_yes());
    }
    for k in 2..=3 {
        assert!(oracle_qwnu(&semilattice, k));
        assert!(!oracle_qwnu(&projection, k));
        let r = has_k_qwnu(&projection, k).unwrap();
        assert!(!r.is_yes());
        let refutation = r.refutation.unwrap();
        assert_eq!((refutation.first, refutation.second), (vec![0], vec![1]));
    }
    assert!(oracle_qwnu(&minority, 3));
    assert!(has_k_qwnu(&minority, 3).unwrap().is_yes());
    assert!(oracle_qwnu(&affine, 2));
    assert!(!oracle_qwnu(&affine, 3));
    assert!(has_k_qwnu(&affine, 2).unwrap().is_yes());
    assert!(!has_k_qwnu(&affine, 3).unwrap().is_yes());
}

#[test]
fn basic_operations_as_witnesses() {
    let minority = read_algebra(&data("z2_minority.alg")).unwrap();
    let m = Term::apply("m", vec![Term::var(0), Term::var(1), Term::var(2)]);
    assert!(check_qwnu_identities(&minority, &m, 3).unwrap());
    let t = term_table(&minority, &m, 3).unwrap();
    assert!(table_is_qwnu(2, 3, &t));

    let affine = read_algebra(&data("z3_maltsev.alg")).unwrap();
    // binary members are a1 x + a2 y with a1 + a2 = 1; only a1 = a2 = 2 is symmetric
    let r = oracle_find_qwnu(&affine, 2, DEFAULT_CLONE_BUDGET);
    let table = r.table.unwrap();
    assert_eq!(table, table_of(3, 2, |a| (2 * a[0] + 2 * a[1]) % 3));
}

#[test]
fn two_element_algebras_agree_with_oracle() {
    for alg in all_two_element_binary() {
        for k in 2..=4 {
            assert_eq!(
                has_k_qwnu(&alg, k).unwrap().is_yes(),
                oracle_qwnu(&alg, k),
                "{} k={k}",
                alg.name()
            );
        }
        assert_eq!(
            has_quasi_taylor(&alg).unwrap().is_yes(),
            oracle_siggers(&alg),
            "{}",
            alg.name()
        );
    }
}

#[test]
fn random_ternary_algebras_agree_with_oracle() {
    let mut checked = 0;
    for seed in 0..60 {
        let alg = random_algebra(seed, 3, &[2], seed % 2 == 0);
        let oracle = oracle_find_qwnu(&alg, 2, DEFAULT_CLONE_BUDGET);
        if let Some(v) = oracle.verdict() {
            assert_eq!(has_k_qwnu(&alg, 2).unwrap().is_yes(), v, "seed {seed}");
            checked += 1;
        }
    }
    assert!(checked > 30, "only {checked} complete slices");
}

#[test]
fn witnesses_satisfy_their_equalities() {
    for seed in 0..40 {
        let alg = random_algebra(seed, 3, &[2, 1], false);
        for k in 2..=3 {
            let r = has_k_qwnu(&alg, k).unwrap();
            for w in &r.witnesses {
                verify_local_qwnu(&alg, &w.term, k, &w.first, &w.second).unwrap();
            }
        }
        let r = has_quasi_taylor(&alg).unwrap();
        for w in &r.witnesses {
            verify_siggers_instances(&alg, &w.term, w.first[0], w.second[0]).unwrap();
        }
    }
}

#[test]
fn reports_survive_json() {
    let alg = random_algebra(11, 2, &[3], false);
    for report in [
        has_k_qwnu(&alg, 3).unwrap(),
        has_quasi_taylor(&alg).unwrap(),
    ] {
        let back = report_from_json(&report_to_json(&report)).unwrap();
        assert_eq!(back.answer, report.answer);
        for (a, b) in back.witnesses.iter().zip(&report.witnesses) {
            assert_eq!(a.term, b.term);
            match report.problem {
                Problem::QuasiTaylor => {
                    verify_siggers_instances(&alg, &a.term, a.first[0], a.second[0]).map(|_| ())
                }
                _ => verify_local_qwnu(&alg, &a.term, report.k, &a.first, &a.second).map(|_| ()),
            }
            .unwrap();
        }
    }
}

#[test]
fn parallel_and_sequential_agree() {
    for seed in 0..20 {
        let alg = random_algebra(seed, 3, &[2], false);
        let par = Decider::default().has_k_qwnu(&alg, 3).unwrap();
        let seq = Decider::default().sequential().has_k_qwnu(&alg, 3).unwrap();
        assert_eq!(par.answer, seq.answer);
        assert_eq!(par.refutation, seq.refutation);
        assert_eq!(par.witnesses, seq.witnesses);
    }
}

#[test]
fn refutations_reproduce() {
    for seed in 0..30 {
        let alg = random_algebra(seed, 3, &[2], false);
        let r = has_k_qwnu(&alg, 2).unwrap();
        if let Some(refutation) = &r.refutation {
            let rel = Decider::default()
                .pair_subpower(
                    &alg,
                    Problem::KQwnu,
                    2,
                    &refutation.first,
                    &refutation.second,
                )
                .unwrap();
            assert!(rel.tuples().all(|t| t[0] != t[1]));
        }
    }
}

#[test]
fn argument_and_precondition_errors() {
    let semilattice = read_algebra(&data("semilattice.alg")).unwrap();
    assert!(matches!(
        has_k_qwnu(&semilattice, 1),
        Err(Error::Argument(_))
    ));
    assert!(matches!(
        has_n_local_k_qwnu(&semilattice, 0, 3),
        Err(Error::Argument(_))
    ));
    let cap = read_algebra(&data("cap3.alg")).unwrap();
    match has_k_wnu_idemp(&cap, 2) {
        Err(Error::Precondition(m)) => assert!(m.contains('g') && m.contains("= 1"), "{m}"),
        other => panic!("{other:?}"),
    }
    assert!(has_k_wnu_idemp(&semilattice, 4).unwrap().is_yes());
}

#[test]
fn resource_errors_are_distinct() {
    let alg = random_algebra(5, 3, &[2], false);
    let tiny = maltsev_lab::Limits::default().with_max_tuples(2);
    assert!(Decider::new(tiny)
        .has_k_qwnu(&alg, 3)
        .unwrap_err()
        .is_resource());
    let r = oracle_find_quasi_siggers(&random_algebra(1, 3, &[3], false), 3);
    assert!(!r.complete || r.table.is_some());
}

#[test]
fn local_terms_are_monotone_in_n() {
    for seed in 0..15 {
        let alg = random_algebra(seed, 2, &[2], false);
        let one = has_n_local_k_qwnu(&alg, 1, 3).unwrap().is_yes();
        assert_eq!(one, has_k_qwnu(&alg, 3).unwrap().is_yes());
        let two = has_n_local_k_qwnu(&alg, 2, 3).unwrap().is_yes();
        if one {
            assert!(two, "seed {seed}");
        }
    }
}

#[test]
fn idempotent_image_transfer() {
    // Terms of the induced algebra lift to A, so a yes on B' forces a yes on A.
    let mut rng = Rng::new(99);
    for seed in 0..60 {
        let sig = [rng.range(1, 2), 2];
        let alg = random_algebra(seed, 3, &sig, false);
        let img = minimal_unary_idempotent(&alg).unwrap();
        let b = induced_algebra(&alg, &img).unwrap();
        assert!(b.is_idempotent());
        for k in 2..=3 {
            if has_k_qwnu(&b, k).unwrap().is_yes() {
                assert!(has_k_qwnu(&alg, k).unwrap().is_yes(), "seed {seed} k={k}");
            }
        }
    }
}

#[test]
fn siggers_tables_from_oracle_satisfy_identity() {
    for alg in all_two_element_binary() {
        if let Some(t) = oracle_find_quasi_siggers(&alg, DEFAULT_CLONE_BUDGET).table {
            assert!(table_is_quasi_siggers(2, &t));
        }
    }
    let one = FiniteAlgebra::new("one", 1, vec![Operation::new("c", 0, vec![0])]).unwrap();
    assert!(has_quasi_taylor(&one).unwrap().is_yes());
}

#[test]
fn quasi_taylor_matches_oracle_on_random_algebras() {
    let mut rng = Rng::new(17);
    let mut complete = 0;
    for seed in 0..150 {
        let n = rng.range(1, 3);
        let sig: Vec<usize> = (0..rng.range(1, 2)).map(|_| rng.range(1, 3)).collect();
        let alg = random_algebra(700 + seed, n, &sig, false);
        let fast = has_quasi_taylor(&alg).unwrap().is_yes();
        // an incomplete slice decides nothing
        if let Some(v) = oracle_find_quasi_siggers(&alg, DEFAULT_CLONE_BUDGET).verdict() {
            complete += 1;
            assert_eq!(fast, v, "seed {}", 700 + seed);
        }
    }
    assert!(complete > 100, "{complete}");
}

#[test]
fn diagonal_test_is_sound_but_incomplete() {
    let minority = read_algebra(&data("z2_minority.alg")).unwrap();
    assert!(oracle_siggers(&minority));
    assert!(has_quasi_taylor(&minority).unwrap().is_yes());
    let diagonal = Decider::default().diagonal_siggers_test(&minority).unwrap();
    assert!(!diagonal.is_yes());
    for seed in 0..60 {
        let alg = random_algebra(seed, 2 + (seed % 2) as usize, &[2], false);
        let d = Decider::default().diagonal_siggers_test(&alg).unwrap();
        for w in &d.witnesses {
            verify_siggers_pattern(&alg, &w.term, w.first[0], w.second[0]).unwrap();
        }
        if d.is_yes() {
            assert!(has_quasi_taylor(&alg).unwrap().is_yes(), "seed {seed}");
        }
    }
}
