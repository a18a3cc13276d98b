use alloc::vec;

use crate::seed::Seed;

/// Three unfrozen vertices joined by double arrows in a cycle.
pub fn build_markov() -> Seed {
    Seed::from_exchange_matrix(vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]], vec![1, 1, 1], vec![true; 3])
        .expect("the Markov matrix is skew-symmetric")
        .with_label("markov")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation::{transport, Limits};
    use crate::polycheck::is_universally_monomial;
    use crate::qtorus::QuantumTorus;
    use crate::seed::MutationPath;

    #[test]
    fn product_of_all_variables_is_invariant() {
        let s = build_markov();
        assert!(is_universally_monomial(&s, &[1, 1, 1]));
        assert!(!is_universally_monomial(&s, &[1, 0, 0]));
        let t = QuantumTorus::new(&s);
        let x = t.x_multi(&[0, 1, 2]);
        let y = transport(&s, &x, &MutationPath::new(vec![0]), &Limits::default()).unwrap();
        assert!(y.is_monomial());
        assert_eq!(y.exponents().next().unwrap(), &vec![1, 1, 1]);
    }

    #[test]
    fn mutation_reverses_the_cycle() {
        let s = build_markov();
        let m = s.mutate(0).unwrap();
        assert_eq!(m.exchange_matrix().unwrap(), vec![vec![0, -2, 2], vec![2, 0, -2], vec![-2, 2, 0]]);
    }
}
