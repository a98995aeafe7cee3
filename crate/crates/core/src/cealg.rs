//! Chevalley–Eilenberg cohomology of finite-dimensional Lie algebras over `Q`.
//!
//! Cochains `Λ^k g* ⊗ V` use the basis `e^I ⊗ v_a` with `I` increasing and
//! listed lexicographically; the flat index is `pos(I) * dim V + a`. The
//! differential is
//!
//! ```text
//! (dω)(X_1..X_{k+1}) = Σ_{p<q} (-1)^{p+q} ω([X_p, X_q], X_1..^p..^q..)
//!                    + Σ_p (-1)^{p+1} ρ(X_p) ω(X_1..^p..).
//! ```

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::exactalg::{AbGroupClass, Hom, MixedModule, Rat, RatMatrix};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CeError {
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
}

/// Structure constants: `bracket(e_i, e_j) = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData {
    dim: usize,
    c: Vec<Vec<Vec<Rat>>>,
}

impl LieAlgebraData {
    pub fn new(dim: usize, c: Vec<Vec<Vec<Rat>>>) -> Result<Self, CeError> {
        if c.len() != dim || c.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim)) {
            return Err(CeError::InvalidAlgebra(format!("structure constants must be {dim}x{dim}x{dim}")));
        }
        let g = Self { dim, c };
        g.validate()?;
        Ok(g)
    }

    /// Builds from the nonzero brackets `[e_i, e_j] = Σ coef e_k` with `i < j`.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, &[(usize, i64)])]) -> Result<Self, CeError> {
        let mut c = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        for &(i, j, terms) in brackets {
            if i >= dim || j >= dim || terms.iter().any(|&(k, _)| k >= dim) {
                return Err(CeError::InvalidAlgebra("bracket index out of range".into()));
            }
            for &(k, v) in terms {
                c[i][j][k] += Rat::from_integer(v.into());
                c[j][i][k] -= Rat::from_integer(v.into());
            }
        }
        Self::new(dim, c)
    }

    pub fn abelian(dim: usize) -> Self {
        Self { dim, c: vec![vec![vec![Rat::zero(); dim]; dim]; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self, i: usize, j: usize) -> &[Rat] {
        &self.c[i][j]
    }

    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let w = xi * yj;
                for (k, ck) in self.c[i][j].iter().enumerate() {
                    if !ck.is_zero() {
                        out[k] += &w * ck;
                    }
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        v[i] = Rat::one();
        v
    }

    fn validate(&self) -> Result<(), CeError> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if self.c[i][j][k] != -self.c[j][i][k].clone() {
                        return Err(CeError::InvalidAlgebra(format!("bracket not antisymmetric at ({i}, {j})")));
                    }
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (ei, ej, ek) = (self.basis(i), self.basis(j), self.basis(k));
                    let a = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let b = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let c = self.bracket(&ek, &self.bracket(&ei, &ej));
                    if (0..d).any(|m| !(&a[m] + &b[m] + &c[m]).is_zero()) {
                        return Err(CeError::InvalidAlgebra(format!("Jacobi identity fails at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The same algebra in the basis `f_i = Σ_k p[k][i] e_k`.
    pub fn change_basis(&self, p: &RatMatrix) -> Result<Self, CeError> {
        let inv = p.inverse().ok_or_else(|| CeError::InvalidAlgebra("basis change is singular".into()))?;
        let d = self.dim;
        let mut c = vec![vec![vec![Rat::zero(); d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                let b = self.bracket(&p.col(i), &p.col(j));
                c[i][j] = inv.mul_vec(&b);
            }
        }
        Self::new(d, c)
    }

    /// Direct sum of two algebras.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let d = self.dim + other.dim;
        let mut c = vec![vec![vec![Rat::zero(); d]; d]; d];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    c[i][j][k] = self.c[i][j][k].clone();
                }
            }
        }
        let o = self.dim;
        for i in 0..other.dim {
            for j in 0..other.dim {
                for k in 0..other.dim {
                    c[o + i][o + j][o + k] = other.c[i][j][k].clone();
                }
            }
        }
        Self { dim: d, c }
    }
}

/// A representation `ρ_i = ρ(e_i)` on `V = Q^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationData {
    dim: usize,
    matrices: Vec<RatMatrix>,
}

impl RepresentationData {
    pub fn new(g: &LieAlgebraData, dim: usize, matrices: Vec<RatMatrix>) -> Result<Self, CeError> {
        if matrices.len() != g.dim() || matrices.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(CeError::InvalidRepresentation(format!(
                "need {} matrices of size {dim}x{dim}",
                g.dim()
            )));
        }
        let rep = Self { dim, matrices };
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let lhs = rep.action(g.structure(i, j));
                let rhs = &(&rep.matrices[i] * &rep.matrices[j]) - &(&rep.matrices[j] * &rep.matrices[i]);
                if lhs != rhs {
                    return Err(CeError::InvalidRepresentation(format!(
                        "action does not respect the bracket of e{i}, e{j}"
                    )));
                }
            }
        }
        Ok(rep)
    }

    pub fn trivial(g: &LieAlgebraData, dim: usize) -> Self {
        Self { dim, matrices: vec![RatMatrix::zeros(dim, dim); g.dim()] }
    }

    /// `ρ(e_i) = ad(e_i)`.
    pub fn adjoint(g: &LieAlgebraData) -> Self {
        let d = g.dim();
        let matrices = (0..d)
            .map(|i| {
                let mut m = RatMatrix::zeros(d, d);
                for j in 0..d {
                    for k in 0..d {
                        m[(k, j)] = g.structure(i, j)[k].clone();
                    }
                }
                m
            })
            .collect();
        Self { dim: d, matrices }
    }

    /// `ρ(e_i) = -ad(e_i)^T`.
    pub fn coadjoint(g: &LieAlgebraData) -> Self {
        let ad = Self::adjoint(g);
        Self { dim: ad.dim, matrices: ad.matrices.iter().map(|m| -&m.transpose()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[RatMatrix] {
        &self.matrices
    }

    /// `ρ(x)` for `x = Σ x_i e_i`.
    pub fn action(&self, x: &[Rat]) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.dim, self.dim);
        for (xi, m) in x.iter().zip(&self.matrices) {
            if !xi.is_zero() {
                out = &out + &m.map(|v| v * xi);
            }
        }
        out
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let d = self.dim + other.dim;
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| {
                let mut m = RatMatrix::zeros(d, d);
                for i in 0..a.rows() {
                    for j in 0..a.cols() {
                        m[(i, j)] = a[(i, j)].clone();
                    }
                }
                for i in 0..b.rows() {
                    for j in 0..b.cols() {
                        m[(self.dim + i, self.dim + j)] = b[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        Self { dim: d, matrices }
    }

    /// `s ρ s^{-1}`.
    pub fn conjugate(&self, s: &RatMatrix) -> Result<Self, CeError> {
        let inv = s.inverse().ok_or_else(|| CeError::InvalidRepresentation("conjugating matrix is singular".into()))?;
        Ok(Self { dim: self.dim, matrices: self.matrices.iter().map(|m| &(s * m) * &inv).collect() })
    }

    /// The representation in the basis `f_i = Σ_k p[k][i] e_k` of the algebra.
    pub fn change_algebra_basis(&self, p: &RatMatrix) -> Self {
        Self { dim: self.dim, matrices: (0..p.cols()).map(|i| self.action(&p.col(i))).collect() }
    }
}

/// `M = V / Λ` with `Λ` generated by the given vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct InfinitesimalModule {
    rep: RepresentationData,
    lattice: Vec<Vec<Rat>>,
}

impl InfinitesimalModule {
    pub fn new(rep: RepresentationData, lattice: Vec<Vec<Rat>>) -> Result<Self, CeError> {
        for v in &lattice {
            if v.len() != rep.dim() {
                return Err(CeError::InvalidModule(format!("lattice vector of length {}", v.len())));
            }
            for (i, m) in rep.matrices().iter().enumerate() {
                if m.mul_vec(v).iter().any(|x| !x.is_zero()) {
                    return Err(CeError::InvalidModule(format!("e{i} does not annihilate the lattice")));
                }
            }
        }
        Ok(Self { rep, lattice })
    }

    pub fn rep(&self) -> &RepresentationData {
        &self.rep
    }

    pub fn quotient(&self) -> MixedModule {
        MixedModule::new(0, self.rep.dim(), self.lattice.clone()).expect("lengths checked")
    }
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn multi_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Sign of the permutation sorting distinct `args`, with the sorted result.
fn sort_sign(args: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = args.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Dimension of `C^k = Λ^k g* ⊗ V`.
pub fn cochain_dim(g: &LieAlgebraData, rep: &RepresentationData, k: usize) -> usize {
    multi_indices(g.dim(), k).len() * rep.dim()
}

/// Matrix of `d: C^k -> C^{k+1}`.
pub fn ce_differential(g: &LieAlgebraData, rep: &RepresentationData, k: usize) -> RatMatrix {
    let m = rep.dim();
    let src = multi_indices(g.dim(), k);
    let dst = multi_indices(g.dim(), k + 1);
    let src_pos: HashMap<Vec<usize>, usize> = src.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let mut out = RatMatrix::zeros(dst.len() * m, src.len() * m);
    for (row, j) in dst.iter().enumerate() {
        for p in 0..j.len() {
            for q in p + 1..j.len() {
                let sign: i64 = if (p + q) % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> =
                    j.iter().enumerate().filter(|&(t, _)| t != p && t != q).map(|(_, &x)| x).collect();
                for (mi, coef) in g.structure(j[p], j[q]).iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let mut args = vec![mi];
                    args.extend_from_slice(&rest);
                    let Some((sorted, s)) = sort_sign(&args) else { continue };
                    let col = src_pos[&sorted];
                    let w = coef * Rat::from_integer((sign * s).into());
                    for b in 0..m {
                        out[(row * m + b, col * m + b)] += &w;
                    }
                }
            }
            let rest: Vec<usize> = j.iter().enumerate().filter(|&(t, _)| t != p).map(|(_, &x)| x).collect();
            let col = src_pos[&rest];
            let rho = &rep.matrices()[j[p]];
            let negate = p % 2 == 1;
            for b in 0..m {
                for a in 0..m {
                    let v = &rho[(b, a)];
                    if !v.is_zero() {
                        if negate {
                            out[(row * m + b, col * m + a)] -= v;
                        } else {
                            out[(row * m + b, col * m + a)] += v;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Dimension of `H^k(g, V)`.
pub fn ce_betti(g: &LieAlgebraData, rep: &RepresentationData, k: usize) -> usize {
    if k > g.dim() {
        return 0;
    }
    let dim_k = cochain_dim(g, rep, k);
    let rank_out = ce_differential(g, rep, k).rank();
    let rank_in = if k == 0 { 0 } else { ce_differential(g, rep, k - 1).rank() };
    dim_k - rank_out - rank_in
}

/// `H^k(g, V) = Q^q`.
pub fn ce_cohomology(g: &LieAlgebraData, rep: &RepresentationData, k: usize) -> AbGroupClass {
    AbGroupClass::rationals(ce_betti(g, rep, k))
}

/// `H^k(g, V/Λ)`; degree 0 is the subgroup of `V/Λ` killed by every `ρ_i`.
pub fn ce_module_cohomology(g: &LieAlgebraData, m: &InfinitesimalModule, k: usize) -> AbGroupClass {
    if k > 0 {
        return ce_cohomology(g, m.rep(), k);
    }
    let quotient = m.quotient();
    let stacked = m
        .rep()
        .matrices()
        .iter()
        .fold(RatMatrix::zeros(0, m.rep().dim()), |acc, r| acc.vstack(r));
    let target = MixedModule::direct_sum(&vec![quotient.clone(); g.dim()]).module;
    Hom::induced(stacked, &quotient, &target)
        .expect("lattice is annihilated by the action")
        .kernel()
        .classify()
}

/// Low-dimensional real Lie algebras with integer structure constants.
pub mod library {
    use super::LieAlgebraData;

    /// `[e0, e1] = e1`.
    pub fn aff1() -> LieAlgebraData {
        LieAlgebraData::from_brackets(2, &[(0, 1, &[(1, 1)])]).unwrap()
    }

    /// `[x, y] = z`.
    pub fn heisenberg3() -> LieAlgebraData {
        LieAlgebraData::from_brackets(3, &[(0, 1, &[(2, 1)])]).unwrap()
    }

    /// Basis `(h, e, f)`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn sl2() -> LieAlgebraData {
        LieAlgebraData::from_brackets(3, &[(0, 1, &[(1, 2)]), (0, 2, &[(2, -2)]), (1, 2, &[(0, 1)])]).unwrap()
    }

    /// `[e_i, e_j] = ε_ijk e_k`.
    pub fn so3() -> LieAlgebraData {
        LieAlgebraData::from_brackets(3, &[(0, 1, &[(2, 1)]), (1, 2, &[(0, 1)]), (2, 0, &[(1, 1)])]).unwrap()
    }

    /// `gl2 = sl2 + center`.
    pub fn gl2() -> LieAlgebraData {
        sl2().direct_sum(&LieAlgebraData::abelian(1))
    }

    /// Filiform `[e0, e1] = e2`, `[e0, e2] = e3`.
    pub fn filiform4() -> LieAlgebraData {
        LieAlgebraData::from_brackets(4, &[(0, 1, &[(2, 1)]), (0, 2, &[(3, 1)])]).unwrap()
    }

    pub fn all() -> Vec<(&'static str, LieAlgebraData)> {
        vec![
            ("abelian1", LieAlgebraData::abelian(1)),
            ("abelian2", LieAlgebraData::abelian(2)),
            ("abelian3", LieAlgebraData::abelian(3)),
            ("aff1", aff1()),
            ("h3", heisenberg3()),
            ("sl2", sl2()),
            ("so3", so3()),
            ("gl2", gl2()),
            ("h3+R", heisenberg3().direct_sum(&LieAlgebraData::abelian(1))),
            ("n4", filiform4()),
            ("aff1+aff1", aff1().direct_sum(&aff1())),
        ]
    }
}
