//! C- and G-matrices maintained along a mutation path.
//!
//! `c[i][j] = c_{ij;t}` is the `i`-th entry of the `j`-th c-vector and
//! likewise for `g`. The transposed seed is mutated in lockstep so that the
//! matrix `G̃_t` with entries `g†_{ji;t}` is always available.

use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::Result;
use crate::matrix::{self, IntMatrix};
use crate::seed::{MutationPath, Seed};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Side {
    root_eps: IntMatrix,
    seed: Seed,
    c: IntMatrix,
    g: IntMatrix,
}

impl Side {
    fn new(seed: Seed) -> Result<Self> {
        let root_eps = seed.exchange_matrix()?;
        let n = seed.rank();
        Ok(Side { root_eps, seed, c: matrix::identity(n), g: matrix::identity(n) })
    }

    fn step(&self, k: usize) -> Result<Self> {
        let eps = self.seed.exchange_matrix()?;
        let c = c_recurrence(&self.c, &eps, k);
        let g = g_recurrence(&self.g, &self.c, &eps, &self.root_eps, k);
        Ok(Side { root_eps: self.root_eps.clone(), seed: self.seed.mutate(k)?, c, g })
    }
}

/// `c_{ij;t'}` from `c_{ij;t}`: column `k` negated, other columns
/// `c_ij + c_ik [ε_kj]_+ + [-c_ik]_+ ε_kj`.
pub fn c_recurrence(c: &IntMatrix, eps: &IntMatrix, k: usize) -> IntMatrix {
    let n = c.len();
    let mut out = c.clone();
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if j == k {
                -c[i][k]
            } else {
                c[i][j] + c[i][k] * eps[k][j].max(0) + (-c[i][k]).max(0) * eps[k][j]
            };
        }
    }
    out
}

/// Column `k` becomes `-g_k + Σ_l [ε_lk]_+ g_l - Σ_l [c_lk]_+ ε_{·l;t0}`.
pub fn g_recurrence(g: &IntMatrix, c: &IntMatrix, eps: &IntMatrix, root_eps: &IntMatrix, k: usize) -> IntMatrix {
    let n = g.len();
    let mut out = g.clone();
    for i in 0..n {
        let mut v = -g[i][k];
        for l in 0..n {
            v += g[i][l] * eps[l][k].max(0) - root_eps[i][l] * c[l][k].max(0);
        }
        out[i][k] = v;
    }
    out
}

/// The same update computed from the other exchange monomial.
pub fn g_recurrence_alt(g: &IntMatrix, c: &IntMatrix, eps: &IntMatrix, root_eps: &IntMatrix, k: usize) -> IntMatrix {
    let n = g.len();
    let mut out = g.clone();
    for i in 0..n {
        let mut v = -g[i][k];
        for l in 0..n {
            v += g[i][l] * (-eps[l][k]).max(0) - root_eps[i][l] * (-c[l][k]).max(0);
        }
        out[i][k] = v;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CGState {
    path: MutationPath,
    main: Side,
    dual: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoherenceViolation {
    CColumn { column: usize, path: MutationPath },
    GRow { row: usize, path: MutationPath },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignCoherenceReport {
    /// Sign of each c-vector, `None` when mixed.
    pub c_columns: Vec<Option<i8>>,
    /// Sign of each coordinate across all g-vectors, `None` when mixed.
    pub g_rows: Vec<Option<i8>>,
    pub violations: Vec<CoherenceViolation>,
}

impl SignCoherenceReport {
    pub fn is_coherent(&self) -> bool {
        self.violations.is_empty()
    }
}

impl CGState {
    /// Root state; the root exchange matrix must be integral everywhere.
    pub fn new(seed: &Seed) -> Result<Self> {
        Ok(CGState {
            path: MutationPath::root(),
            main: Side::new(seed.clone())?,
            dual: Side::new(seed.transpose())?,
        })
    }

    pub fn seed(&self) -> &Seed {
        &self.main.seed
    }

    pub fn dual_seed(&self) -> &Seed {
        &self.dual.seed
    }

    pub fn path(&self) -> &MutationPath {
        &self.path
    }

    pub fn c(&self) -> &IntMatrix {
        &self.main.c
    }

    pub fn g(&self) -> &IntMatrix {
        &self.main.g
    }

    pub fn c_dagger(&self) -> &IntMatrix {
        &self.dual.c
    }

    pub fn g_dagger(&self) -> &IntMatrix {
        &self.dual.g
    }

    pub fn root_exchange(&self) -> &IntMatrix {
        &self.main.root_eps
    }

    /// `G̃_t` with entry `(i, j)` equal to `g†_{ji;t}`.
    pub fn g_tilde(&self) -> IntMatrix {
        matrix::transpose(&self.dual.g)
    }

    /// Mutates the seed and advances C, G and the transposed-seed data.
    pub fn step(&self, k: usize) -> Result<Self> {
        self.main.seed.check_mutable(k)?;
        Ok(CGState { path: self.path.child(k), main: self.main.step(k)?, dual: self.dual.step(k)? })
    }

    pub fn step_path(&self, path: &MutationPath) -> Result<Self> {
        let mut s = self.clone();
        for &k in path.steps() {
            s = s.step(k)?;
        }
        Ok(s)
    }

    /// The new C-matrix after mutating at `k`.
    pub fn step_c(&self, k: usize) -> Result<IntMatrix> {
        self.main.seed.check_mutable(k)?;
        Ok(c_recurrence(&self.main.c, &self.main.seed.exchange_matrix()?, k))
    }

    /// The new G-matrix after mutating at `k`, from both exchange monomials.
    pub fn step_g_both(&self, k: usize) -> Result<(IntMatrix, IntMatrix)> {
        self.main.seed.check_mutable(k)?;
        let eps = self.main.seed.exchange_matrix()?;
        let a = g_recurrence(&self.main.g, &self.main.c, &eps, &self.main.root_eps, k);
        let b = g_recurrence_alt(&self.main.g, &self.main.c, &eps, &self.main.root_eps, k);
        Ok((a, b))
    }

    pub fn det_c(&self) -> BigInt {
        matrix::determinant(&self.main.c)
    }

    pub fn check_sign_coherence(&self) -> SignCoherenceReport {
        sign_coherence(&self.main.c, &self.main.g, &self.path)
    }
}

/// Sign coherence of the columns of `c` and the rows of `g`.
pub fn sign_coherence(c: &IntMatrix, g: &IntMatrix, path: &MutationPath) -> SignCoherenceReport {
    let n = c.len();
    let mut r = SignCoherenceReport::default();
    for j in 0..n {
        let s = matrix::coherent_sign(c.iter().map(|row| row[j]));
        if s.is_none() {
            r.violations.push(CoherenceViolation::CColumn { column: j, path: path.clone() });
        }
        r.c_columns.push(s);
    }
    for (i, row) in g.iter().enumerate() {
        let s = matrix::coherent_sign(row.iter().copied());
        if s.is_none() {
            r.violations.push(CoherenceViolation::GRow { row: i, path: path.clone() });
        }
        r.g_rows.push(s);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn root_is_identity() {
        let s = Seed::from_quiver(3, &[(0, 1), (1, 2)], &[]).unwrap();
        let st = CGState::new(&s).unwrap();
        assert_eq!(st.c(), &matrix::identity(3));
        assert_eq!(st.g_tilde(), matrix::identity(3));
        assert!(st.check_sign_coherence().is_coherent());
    }

    #[test]
    fn first_step_negates_column() {
        let s = Seed::from_quiver(2, &[(0, 1)], &[]).unwrap();
        let st = CGState::new(&s).unwrap().step(0).unwrap();
        assert_eq!(st.c(), &vec![vec![-1, 1], vec![0, 1]]);
        let (a, b) = CGState::new(&s).unwrap().step_g_both(0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn a2_pentagon_gives_signed_permutation() {
        let s = Seed::from_quiver(2, &[(0, 1)], &[]).unwrap();
        let st = CGState::new(&s).unwrap().step_path(&MutationPath::new(vec![0, 1, 0, 1, 0])).unwrap();
        for row in st.c() {
            assert_eq!(row.iter().filter(|&&x| x != 0).count(), 1);
            assert!(row.iter().all(|&x| x.abs() <= 1));
        }
        assert_eq!(st.det_c().magnitude(), &num_bigint::BigUint::from(1u32));
    }

    #[test]
    fn corrupted_matrix_is_reported() {
        let c = vec![vec![1, 0], vec![-1, 1]];
        let r = sign_coherence(&c, &matrix::identity(2), &MutationPath::root());
        assert_eq!(r.violations, vec![CoherenceViolation::CColumn { column: 0, path: MutationPath::root() }]);
    }
}
