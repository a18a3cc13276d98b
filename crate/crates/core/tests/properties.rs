use proptest::prelude::*;

use qcluster_core::classical::SfFraction;
use qcluster_core::mutation::{
    classical_pullback_path, classical_transport, pullback_fraction, pullback_generator, transport, Limits,
    RightFraction,
};
use qcluster_core::{CGState, MutationPath, QCoeff, QElement, QuantumTorus, Seed};

/// Integer skew-symmetric form with multipliers in {1, 2}.
fn seed_strategy(max_rank: usize, all_unfrozen: bool) -> impl Strategy<Value = Seed> {
    (2..=max_rank).prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        (
            prop::collection::vec(-2i64..=2, pairs),
            prop::collection::vec(1u64..=2, n),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(upper, d, frozen)| {
                let mut b = vec![vec![0; n]; n];
                let mut it = upper.into_iter();
                for i in 0..n {
                    for j in i + 1..n {
                        let x = it.next().unwrap();
                        b[i][j] = x;
                        b[j][i] = -x;
                    }
                }
                let mut unfrozen: Vec<bool> = frozen.iter().map(|f| all_unfrozen || !f).collect();
                unfrozen[0] = true;
                Seed::new(unfrozen, d, b, 1).unwrap()
            })
    })
}

fn with_path(max_rank: usize, len: usize, all_unfrozen: bool) -> impl Strategy<Value = (Seed, MutationPath)> {
    seed_strategy(max_rank, all_unfrozen).prop_flat_map(move |s| {
        let u = s.unfrozen_indices();
        (Just(s), prop::collection::vec(prop::sample::select(u), 0..=len))
            .prop_map(|(s, p)| (s, MutationPath::new(p)))
    })
}

fn element_strategy(t: &QuantumTorus) -> impl Strategy<Value = QElement> {
    let n = t.rank();
    let t = t.clone();
    prop::collection::vec((prop::collection::vec(-2i32..=2, n), -3i64..=3, 1i64..=3), 1..=3).prop_map(move |terms| {
        let mut x = t.zero();
        for (e, q, c) in terms {
            x.add_term(e, &QCoeff::monomial(q, c));
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mutation_is_an_involution((s, p) in with_path(5, 4, false)) {
        let t = s.mutate_path(&p).unwrap();
        let back = t.mutate_path(&p.reversed()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn transposition_commutes_with_mutation((s, p) in with_path(5, 3, false)) {
        prop_assert_eq!(s.mutate_path(&p).unwrap().transpose(), s.transpose().mutate_path(&p).unwrap());
        // transposing twice gives back the seed up to a common rescaling of d
        let tt = s.transpose().transpose();
        prop_assert_eq!(tt.exchange_matrix().unwrap(), s.exchange_matrix().unwrap());
        let (d, dd) = (s.d_numerators(), tt.d_numerators());
        for i in 0..s.rank() {
            prop_assert_eq!(d[i] * dd[0], dd[i] * d[0]);
        }
    }

    #[test]
    fn torus_product_is_associative((t, a, b, c) in seed_strategy(4, false).prop_flat_map(|s| {
        let t = QuantumTorus::new(&s);
        let e = element_strategy(&t);
        (Just(t.clone()), e, element_strategy(&t), element_strategy(&t))
    })) {
        let ab_c = t.mul(&t.mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = t.mul(&a, &t.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = t.mul(&a, &b.add(&c)).unwrap();
        prop_assert_eq!(left, t.mul(&a, &b).unwrap().add(&t.mul(&a, &c).unwrap()));
    }

    #[test]
    fn division_undoes_binomial_multiplication(
        s in seed_strategy(4, false),
        v in prop::collection::vec(-1i32..=1, 4),
        m in -3i64..=3,
        terms in prop::collection::vec((prop::collection::vec(-2i32..=2, 4), 1i64..=3), 1..=4),
    ) {
        let t = QuantumTorus::new(&s);
        let n = s.rank();
        let v = &v[..n];
        prop_assume!(v.iter().any(|&x| x != 0));
        let mut a = t.zero();
        for (e, c) in terms {
            a.add_term(e[..n].to_vec(), &QCoeff::monomial(0, c));
        }
        let prod = t.mul_binomial(&a, v, m).unwrap();
        prop_assert_eq!(t.exact_div(&prod, v, m).unwrap(), a);
    }

    #[test]
    fn generator_formula_matches_general_pullback(s in seed_strategy(5, false), k_pick in any::<prop::sample::Index>(), i_pick in any::<prop::sample::Index>()) {
        let u = s.unfrozen_indices();
        let k = u[k_pick.index(u.len())];
        let i = i_pick.index(s.rank());
        let mutated = s.mutate(k).unwrap();
        let xi = QuantumTorus::new(&mutated).x(i);
        let general: RightFraction = pullback_fraction(&s, k, &xi).unwrap();
        let formula = pullback_generator(&s, k, i).unwrap();
        prop_assert!(general.equals(&formula, &QuantumTorus::new(&s)).unwrap());
    }

    #[test]
    fn transport_there_and_back((s, p) in with_path(4, 3, false), e in prop::collection::vec(0i32..=2, 4)) {
        let n = s.rank();
        let t = QuantumTorus::new(&s);
        let f = t.one().add(&t.monomial(e[..n].to_vec()));
        let lim = Limits::default();
        if let Ok(there) = transport(&s, &f, &p, &lim) {
            let end = s.mutate_path(&p).unwrap();
            prop_assert_eq!(transport(&end, &there, &p.reversed(), &lim).unwrap(), f);
        }
    }

    #[test]
    fn quantum_transport_specializes_to_classical((s, p) in with_path(4, 3, false), e in prop::collection::vec(0i32..=1, 4)) {
        let n = s.rank();
        let t = QuantumTorus::new(&s);
        let f = t.x(0).add(&t.monomial(e[..n].to_vec()));
        if let Ok(x) = transport(&s, &f, &p, &Limits::default()) {
            let classical = classical_transport(&s, &SfFraction::from_poly(f.specialize_q1()).unwrap(), &p).unwrap();
            prop_assert!(classical.equals(&SfFraction::from_poly(x.specialize_q1()).unwrap()));
        }
    }

    #[test]
    fn c_and_g_are_sign_coherent((s, p) in with_path(4, 6, true)) {
        let mut st = CGState::new(&s).unwrap();
        for &k in p.steps() {
            let (a, b) = st.step_g_both(k).unwrap();
            prop_assert_eq!(a, b);
            st = st.step(k).unwrap();
            prop_assert!(st.check_sign_coherence().is_coherent(), "{:?}", st.c());
            prop_assert_eq!(st.det_c().magnitude().clone(), 1u32.into());
        }
    }

    #[test]
    fn tropical_pullbacks_are_c_vectors((s, p) in with_path(4, 3, true)) {
        // uncancelled fractions grow like (1 + X_k)^|ε| per step
        for l in 0..=p.len() {
            let m = s.mutate_path(&p.prefix(l)).unwrap().exchange_matrix().unwrap();
            prop_assume!(m.iter().flatten().all(|x| x.abs() <= 2));
        }
        let st = CGState::new(&s).unwrap().step_path(&p).unwrap();
        let n = s.rank();
        for j in 0..n {
            let x = classical_pullback_path(&s, &SfFraction::var(n, j), &p).unwrap();
            for i in 0..n {
                prop_assert_eq!(x.tropicalize(i) as i64, st.c()[i][j]);
            }
        }
    }
}
