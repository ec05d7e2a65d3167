use qldpc_bp::bp::ChannelPrior;
use qldpc_bp::constructions::builtin;
use qldpc_bp::oracle::{coset_decode, exact_map, exact_marginals};
use qldpc_bp::{PauliOperator, Syndrome};

fn brute_force_probability(prior: &ChannelPrior, e: &PauliOperator) -> f64 {
    (0..e.num_qubits())
        .map(|q| prior.qubit(q)[e.get(q).index()])
        .product()
}

#[test]
fn coset_masses_account_for_all_probability() {
    let five = builtin("five_qubit").unwrap();
    for epsilon in [0.01, 0.05, 0.3] {
        let prior = ChannelPrior::depolarizing(5, epsilon).unwrap();
        let mut total = 0.0;
        for index in 0..16 {
            let s = Syndrome::from_index(4, index);
            let table = coset_decode(&five, &prior, &s).unwrap().table;
            assert!((table.masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            total += table.syndrome_probability;
        }
        assert!((total - 1.0).abs() < 1e-12, "{total}");
    }
}

#[test]
fn coset_tables_match_direct_enumeration() {
    let five = builtin("five_qubit").unwrap();
    let prior = ChannelPrior::depolarizing(5, 0.07).unwrap();
    let mut by_syndrome = vec![vec![0.0; 4]; 16];
    for idx in 0..1u64 << 10 {
        let e = PauliOperator::from_index(5, idx);
        let s = five.syndrome(&e).unwrap();
        let key = (0..4)
            .filter(|&c| s.is_flipped(c))
            .map(|c| 1usize << c)
            .sum::<usize>();
        let t = five.pure_error_for_syndrome(&s).unwrap();
        let class = five.logical_class(&e.multiply(&t).unwrap()).unwrap() as usize;
        by_syndrome[key][class] += brute_force_probability(&prior, &e);
    }
    for (index, masses) in by_syndrome.iter().enumerate() {
        let s = Syndrome::from_index(4, index as u64);
        let decoded = coset_decode(&five, &prior, &s).unwrap();
        let total: f64 = masses.iter().sum();
        assert!((decoded.table.syndrome_probability - total).abs() < 1e-14);
        for (l, m) in masses.iter().enumerate() {
            assert!((decoded.table.masses[l] - m / total).abs() < 1e-12);
        }
        let recovery_class = five
            .logical_class(
                &decoded
                    .recovery
                    .multiply(&five.pure_error_for_syndrome(&s).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(recovery_class, decoded.class);
        assert_eq!(five.syndrome(&decoded.recovery).unwrap(), s);
    }
}

#[test]
fn map_error_sits_in_a_coset_at_least_as_heavy_as_itself() {
    let five = builtin("five_qubit").unwrap();
    let prior = ChannelPrior::depolarizing(5, 0.05).unwrap();
    for index in 0..16 {
        let s = Syndrome::from_index(4, index);
        let map = exact_map(&five, &prior, &s).unwrap();
        assert_eq!(five.syndrome(&map).unwrap(), s);
        let decoded = coset_decode(&five, &prior, &s).unwrap();
        let t = five.pure_error_for_syndrome(&s).unwrap();
        let class = five.logical_class(&map.multiply(&t).unwrap()).unwrap() as usize;
        let p_map = brute_force_probability(&prior, &map) / decoded.table.syndrome_probability;
        assert!(decoded.table.masses[class] >= p_map - 1e-15);
        let marginals = exact_marginals(&five, &prior, &s).unwrap();
        for m in marginals {
            assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn size_guards_are_errors() {
    let big = qldpc_bp::constructions::generate_bicycle(
        &qldpc_bp::constructions::BicycleSpec::new(40, 20, 8, 1),
    )
    .unwrap()
    .code;
    let prior = ChannelPrior::depolarizing(40, 0.1).unwrap();
    let s = Syndrome::trivial(20);
    assert!(exact_marginals(&big, &prior, &s).is_err());
    assert!(coset_decode(&big, &prior, &s).is_err());
}
