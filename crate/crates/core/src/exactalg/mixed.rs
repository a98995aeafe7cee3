//! Mixed modules `(Z^m + Q^n) / <relations>` and the homomorphisms between them.
//!
//! Every computation reduces to two primitives: integer Smith normal form on
//! lattice blocks and exact rational elimination on divisible blocks.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::abgroup::AbGroupClass;
use super::matrix::{complete_basis, independent_subset, Int, Rat, RatMatrix};
use super::snf::{column_lattice_basis, integer_kernel, smith_normal_form, Smith};
use super::ExactAlgError;

/// The abelian group `(Z^m + Q^n) / <relations>`.
///
/// Ambient coordinates are ordered lattice first, then divisible. A relation
/// is a vector of length `m + n` whose first `m` entries are integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedModule {
    lattice_rank: usize,
    divisible_rank: usize,
    relations: Vec<Vec<Rat>>,
}

impl MixedModule {
    pub fn new(
        lattice_rank: usize,
        divisible_rank: usize,
        relations: Vec<Vec<Rat>>,
    ) -> Result<Self, ExactAlgError> {
        let dim = lattice_rank + divisible_rank;
        for r in &relations {
            if r.len() != dim {
                return Err(ExactAlgError::DimensionMismatch { expected: dim, found: r.len() });
            }
            if r[..lattice_rank].iter().any(|v| !v.is_integer()) {
                return Err(ExactAlgError::NonIntegralLattice);
            }
        }
        let relations = relations.into_iter().filter(|r| r.iter().any(|v| !v.is_zero())).collect();
        Ok(Self { lattice_rank, divisible_rank, relations })
    }

    pub fn trivial() -> Self {
        Self { lattice_rank: 0, divisible_rank: 0, relations: Vec::new() }
    }

    /// `Z^m`.
    pub fn lattice(m: usize) -> Self {
        Self { lattice_rank: m, divisible_rank: 0, relations: Vec::new() }
    }

    /// `Q^n`.
    pub fn rational(n: usize) -> Self {
        Self { lattice_rank: 0, divisible_rank: n, relations: Vec::new() }
    }

    /// `Q^n / Z^n`, the exact stand-in for a torus `R^n / Z^n`.
    pub fn torus(n: usize) -> Self {
        let relations = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        Self { lattice_rank: 0, divisible_rank: n, relations }
    }

    /// `Z/d`.
    pub fn cyclic(d: i64) -> Self {
        Self {
            lattice_rank: 1,
            divisible_rank: 0,
            relations: if d == 0 { vec![] } else { vec![vec![Rat::from_integer(Int::from(d))]] },
        }
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn divisible_rank(&self) -> usize {
        self.divisible_rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.lattice_rank + self.divisible_rank
    }

    pub fn relations(&self) -> &[Vec<Rat>] {
        &self.relations
    }

    /// Unit vectors of the ambient lattice block.
    pub fn lattice_generators(&self) -> Vec<Vec<Rat>> {
        (0..self.lattice_rank).map(|i| unit(self.ambient_dim(), i)).collect()
    }

    /// Unit vectors of the ambient divisible block.
    pub fn divisible_generators(&self) -> Vec<Vec<Rat>> {
        (0..self.divisible_rank).map(|i| unit(self.ambient_dim(), self.lattice_rank + i)).collect()
    }

    /// Whether `v` lies in the subgroup generated by the relations.
    pub fn relation_span_contains(&self, v: &[Rat]) -> bool {
        self.relation_span().contains(v)
    }

    /// The relation subgroup factored once, for repeated membership tests.
    pub fn relation_span(&self) -> RelationSpan {
        if self.relations.is_empty() {
            return RelationSpan { scale: Rat::one(), smith: None };
        }
        let (scaled, d) = RatMatrix::from_cols(self.ambient_dim(), &self.relations).clear_denominators();
        RelationSpan { scale: Rat::from_integer(d), smith: Some(smith_normal_form(&scaled)) }
    }

    /// Whether two ambient vectors denote the same element.
    pub fn same_element(&self, a: &[Rat], b: &[Rat]) -> bool {
        let diff: Vec<Rat> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.relation_span_contains(&diff)
    }

    /// Canonical decomposition `Z^r + (+) Z/d_i + Q^q + (Q/Z)^t`.
    pub fn classify(&self) -> AbGroupClass {
        let (m, n) = (self.lattice_rank, self.divisible_rank);
        let k = self.relations.len();
        // lattice block of the relations, one relation per column
        let lat = RatMatrix::from_cols(m, &self.relations.iter().map(|r| r[..m].to_vec()).collect::<Vec<_>>())
            .map(|v| v.to_integer());
        let lat = if k == 0 { super::matrix::IntMatrix::zeros(m, 0) } else { lat };
        let smith = smith_normal_form(&lat);
        let torsion: Vec<Int> = smith.diagonal().into_iter().filter(|d| !d.is_one()).collect();
        let free_rank = m - smith.rank;

        // relations whose lattice part cancels contribute a lattice inside Q^n
        let combos = if k == 0 { Vec::new() } else { integer_kernel(&lat) };
        let divisible_parts: Vec<Vec<Rat>> = combos
            .iter()
            .map(|c| {
                (0..n)
                    .map(|j| {
                        c.iter()
                            .zip(&self.relations)
                            .fold(Rat::zero(), |acc, (ci, r)| acc + Rat::from_integer(ci.clone()) * &r[m + j])
                    })
                    .collect()
            })
            .collect();
        let s = if divisible_parts.is_empty() || n == 0 {
            0
        } else {
            RatMatrix::from_cols(n, &divisible_parts).rank()
        };
        AbGroupClass { free_rank, torsion, divisible_rank: n - s, divisible_torsion_rank: s }
    }

    /// Direct sum; lattice coordinates of all summands come first.
    pub fn direct_sum(summands: &[MixedModule]) -> DirectSum {
        let total_m: usize = summands.iter().map(|s| s.lattice_rank).sum();
        let total_n: usize = summands.iter().map(|s| s.divisible_rank).sum();
        let mut lattice_offsets = Vec::with_capacity(summands.len());
        let mut divisible_offsets = Vec::with_capacity(summands.len());
        let (mut lo, mut dof) = (0, total_m);
        for s in summands {
            lattice_offsets.push(lo);
            divisible_offsets.push(dof);
            lo += s.lattice_rank;
            dof += s.divisible_rank;
        }
        let mut relations = Vec::new();
        let dim = total_m + total_n;
        let mut ds = DirectSum {
            module: MixedModule::trivial(),
            summands: summands.to_vec(),
            lattice_offsets,
            divisible_offsets,
        };
        for (i, s) in summands.iter().enumerate() {
            for r in &s.relations {
                let mut v = vec![Rat::zero(); dim];
                for (local, x) in r.iter().enumerate() {
                    v[ds.global_index(i, local)] = x.clone();
                }
                relations.push(v);
            }
        }
        ds.module = MixedModule { lattice_rank: total_m, divisible_rank: total_n, relations };
        ds
    }
}

fn unit(dim: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    v[i] = Rat::one();
    v
}

/// A direct sum together with the coordinate bookkeeping of its summands.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: MixedModule,
    pub summands: Vec<MixedModule>,
    lattice_offsets: Vec<usize>,
    divisible_offsets: Vec<usize>,
}

impl DirectSum {
    /// Global ambient index of local coordinate `local` of summand `summand`.
    pub fn global_index(&self, summand: usize, local: usize) -> usize {
        let m = self.summands[summand].lattice_rank;
        if local < m {
            self.lattice_offsets[summand] + local
        } else {
            self.divisible_offsets[summand] + (local - m)
        }
    }
}

/// A homomorphism of mixed modules given by a rational matrix on ambient coordinates.
#[derive(Clone, Debug)]
pub struct Hom {
    src: MixedModule,
    dst: MixedModule,
    matrix: RatMatrix,
}

/// Generators of a subgroup `Z<int_gens> + Q<div_gens>` of an ambient space.
#[derive(Clone, Debug, Default)]
pub struct Generators {
    pub integral: Vec<Vec<Rat>>,
    pub divisible: Vec<Vec<Rat>>,
}

/// A subquotient presented as a new mixed module, with the coordinate maps
/// relating it to the ambient it was cut out of.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub module: MixedModule,
    /// New ambient coordinates to old ambient coordinates; lands in the numerator.
    pub section: RatMatrix,
    /// Old ambient coordinates to new ambient coordinates; meaningful on the numerator.
    pub coords: RatMatrix,
}

impl Hom {
    /// Checks that `matrix` induces a homomorphism `src -> dst`.
    pub fn induced(matrix: RatMatrix, src: &MixedModule, dst: &MixedModule) -> Result<Self, ExactAlgError> {
        if matrix.rows() != dst.ambient_dim() || matrix.cols() != src.ambient_dim() {
            return Err(ExactAlgError::ShapeMismatch {
                rows: matrix.rows(),
                cols: matrix.cols(),
                src: src.ambient_dim(),
                dst: dst.ambient_dim(),
            });
        }
        let (sm, dm) = (src.lattice_rank, dst.lattice_rank);
        for i in 0..dm {
            for j in 0..sm {
                if !matrix[(i, j)].is_integer() {
                    return Err(ExactAlgError::NotWellDefined(format!(
                        "lattice generator {j} maps to a non-integral lattice coordinate"
                    )));
                }
            }
            for j in sm..src.ambient_dim() {
                if !matrix[(i, j)].is_zero() {
                    return Err(ExactAlgError::NotWellDefined(format!(
                        "divisible generator {} has a nonzero lattice image",
                        j - sm
                    )));
                }
            }
        }
        let span = dst.relation_span();
        for (idx, r) in src.relations.iter().enumerate() {
            let image = matrix.mul_vec(r);
            if !span.contains(&image) {
                return Err(ExactAlgError::NotWellDefined(format!(
                    "relation {idx} maps outside the relation span of the target"
                )));
            }
        }
        Ok(Self { src: src.clone(), dst: dst.clone(), matrix })
    }

    pub fn identity(m: &MixedModule) -> Self {
        Self { src: m.clone(), dst: m.clone(), matrix: RatMatrix::identity(m.ambient_dim()) }
    }

    pub fn zero(src: &MixedModule, dst: &MixedModule) -> Self {
        Self { src: src.clone(), dst: dst.clone(), matrix: RatMatrix::zeros(dst.ambient_dim(), src.ambient_dim()) }
    }

    pub fn src(&self) -> &MixedModule {
        &self.src
    }

    pub fn dst(&self) -> &MixedModule {
        &self.dst
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn compose(&self, after: &Hom) -> Hom {
        Hom { src: self.src.clone(), dst: after.dst.clone(), matrix: &after.matrix * &self.matrix }
    }

    /// Whether the map is zero on every element of the source.
    pub fn is_zero_map(&self) -> bool {
        let span = self.dst.relation_span();
        self.src
            .lattice_generators()
            .iter()
            .chain(self.src.divisible_generators().iter())
            .all(|g| {
                let img = self.matrix.mul_vec(g);
                if g[self.src.lattice_rank..].iter().any(|x| !x.is_zero()) {
                    // a divisible generator: every rational multiple must vanish
                    img.iter().all(Zero::is_zero)
                } else {
                    span.contains(&img)
                }
            })
    }

    /// Generators of `{x : f(x) in relations(dst)}` inside the source ambient.
    pub fn preimage_of_relations(&self) -> Generators {
        let (m, n) = (self.src.lattice_rank, self.src.divisible_rank);
        let rows = self.dst.ambient_dim();
        let f_lat = self.matrix.block(0..rows, 0..m);
        let f_div = self.matrix.block(0..rows, m..m + n);
        let annihilator = f_div.left_annihilator();
        let rel = if self.dst.relations.is_empty() {
            RatMatrix::zeros(rows, 0)
        } else {
            RatMatrix::from_cols(rows, &self.dst.relations)
        };
        let k = rel.cols();
        // P [f_lat | -rel] (z, c) = 0 describes the admissible integer data
        let system = &annihilator * &f_lat.hstack(&(-&rel));
        let integral = if m + k == 0 {
            Vec::new()
        } else {
            let (scaled, _) = system.clear_denominators();
            integer_kernel(&scaled)
                .into_iter()
                .map(|zc| {
                    let z: Vec<Rat> = zc[..m].iter().map(|v| Rat::from_integer(v.clone())).collect();
                    let c: Vec<Rat> = zc[m..].iter().map(|v| Rat::from_integer(v.clone())).collect();
                    let target: Vec<Rat> =
                        rel.mul_vec(&c).iter().zip(f_lat.mul_vec(&z)).map(|(a, b)| a - b).collect();
                    let q = if n == 0 {
                        Vec::new()
                    } else {
                        f_div.solve(&target).expect("admissible data has a divisible lift")
                    };
                    z.into_iter().chain(q).collect()
                })
                .collect()
        };
        let divisible = f_div
            .nullspace()
            .into_iter()
            .map(|q| std::iter::repeat(Rat::zero()).take(m).chain(q).collect())
            .collect();
        Generators { integral, divisible }
    }

    /// Generators of `relations(dst) + f(src)` inside the target ambient.
    pub fn image_with_relations(&self) -> Generators {
        let mut integral = self.dst.relations.clone();
        integral.extend(self.src.lattice_generators().iter().map(|g| self.matrix.mul_vec(g)));
        let divisible = self.src.divisible_generators().iter().map(|g| self.matrix.mul_vec(g)).collect();
        Generators { integral, divisible }
    }

    pub fn kernel_with_inclusion(&self) -> (MixedModule, Hom) {
        let num = self.preimage_of_relations();
        let den = Generators { integral: self.src.relations.clone(), divisible: Vec::new() };
        let sq = subquotient(&self.src, &num, &den);
        let inclusion = Hom { src: sq.module.clone(), dst: self.src.clone(), matrix: sq.section };
        (sq.module, inclusion)
    }

    pub fn kernel(&self) -> MixedModule {
        self.kernel_with_inclusion().0
    }

    pub fn cokernel_with_projection(&self) -> (MixedModule, Hom) {
        let num = Generators {
            integral: self.dst.lattice_generators(),
            divisible: self.dst.divisible_generators(),
        };
        let sq = subquotient(&self.dst, &num, &self.image_with_relations());
        let projection = Hom { src: self.dst.clone(), dst: sq.module.clone(), matrix: sq.coords };
        (sq.module, projection)
    }

    pub fn cokernel(&self) -> MixedModule {
        self.cokernel_with_projection().0
    }
}

/// Homology `ker(outgoing) / im(incoming)` at the shared middle module.
pub fn homology(incoming: &Hom, outgoing: &Hom) -> MixedModule {
    debug_assert_eq!(incoming.dst, outgoing.src);
    let num = outgoing.preimage_of_relations();
    let den = incoming.image_with_relations();
    subquotient(&outgoing.src, &num, &den).module
}

/// Presents `num / den` as a mixed module. `den` must be contained in `num`,
/// and the divisible generators of both must have vanishing lattice part.
pub fn subquotient(ambient: &MixedModule, num: &Generators, den: &Generators) -> Subquotient {
    let (m, n) = (ambient.lattice_rank, ambient.divisible_rank);
    let dim = m + n;
    let div_part = |v: &Vec<Rat>| -> Vec<Rat> { v[m..].to_vec() };

    // divisible part W of the numerator and a basis T of Q^n adapted to it
    let w_basis = independent_subset(n, &num.divisible.iter().map(div_part).collect::<Vec<_>>());
    let w = w_basis.len();
    let t = RatMatrix::from_cols(n, &complete_basis(n, &w_basis));
    let t_inv = if n == 0 { RatMatrix::zeros(0, 0) } else { t.inverse().expect("adapted basis is invertible") };

    // ambient -> (lattice part, W coordinates, complement coordinates)
    let split = |v: &[Rat]| -> (Vec<Rat>, Vec<Rat>) {
        let c = t_inv.mul_vec(&v[m..]);
        let free: Vec<Rat> = v[..m].iter().cloned().chain(c[w..].iter().cloned()).collect();
        (free, c[..w].to_vec())
    };

    let free_dim = m + n - w;
    let f_vectors: Vec<Vec<Rat>> = num.integral.iter().map(|g| split(g).0).collect();
    let h_cols: Vec<Vec<Rat>> = if f_vectors.is_empty() || free_dim == 0 {
        Vec::new()
    } else {
        let (scaled, denom) = RatMatrix::from_cols(free_dim, &f_vectors).clear_denominators();
        let denom = Rat::from_integer(denom);
        column_lattice_basis(&scaled)
            .into_iter()
            .map(|col| col.into_iter().map(|x| Rat::from_integer(x) / &denom).collect())
            .collect()
    };
    let a = h_cols.len();
    let h = RatMatrix::from_cols(free_dim, &h_cols);
    let h_pinv = if a == 0 {
        RatMatrix::zeros(0, free_dim)
    } else {
        let ht = h.transpose();
        let gram = &ht * &h;
        &gram.inverse().expect("lattice basis has full column rank") * &ht
    };

    // coordinates before collapsing divisible denominators: (y in Z^a, w in Q^w)
    let coords0 = {
        let mut c = RatMatrix::zeros(a + w, dim);
        for j in 0..dim {
            let mut e = vec![Rat::zero(); dim];
            e[j] = Rat::one();
            let (free, wpart) = split(&e);
            let y = h_pinv.mul_vec(&free);
            for (i, v) in y.into_iter().chain(wpart).enumerate() {
                c[(i, j)] = v;
            }
        }
        c
    };

    // quotient of W by the divisible part of the denominator
    let den_w: Vec<Vec<Rat>> = den.divisible.iter().map(|g| coords0.mul_vec(g)[a..].to_vec()).collect();
    let den_w = independent_subset(w, &den_w);
    let p2 = if den_w.is_empty() {
        RatMatrix::identity(w)
    } else {
        RatMatrix::from_cols(w, &den_w).left_annihilator()
    };
    let q = p2.rows();
    let mut collapse = RatMatrix::zeros(a + q, a + w);
    for i in 0..a {
        collapse[(i, i)] = Rat::one();
    }
    for i in 0..q {
        for j in 0..w {
            collapse[(a + i, a + j)] = p2[(i, j)].clone();
        }
    }
    let coords = &collapse * &coords0;

    let relations: Vec<Vec<Rat>> = den.integral.iter().map(|g| coords.mul_vec(g)).collect();
    debug_assert!(relations.iter().all(|r| r[..a].iter().all(Rat::is_integer)));
    let module = MixedModule::new(a, q, relations).expect("subquotient relations are integral");

    // section: y -> H y, u -> T (S2 u ; 0) with S2 a right inverse of P2
    let s2 = if q == 0 {
        RatMatrix::zeros(w, 0)
    } else {
        let p2t = p2.transpose();
        &p2t * &(&p2 * &p2t).inverse().expect("P2 has full row rank")
    };
    let mut section = RatMatrix::zeros(dim, a + q);
    for (k, col) in h_cols.iter().enumerate() {
        let lat = &col[..m];
        let comp = &col[m..];
        let mut coeffs = vec![Rat::zero(); n];
        coeffs[w..].clone_from_slice(comp);
        let qv = t.mul_vec(&coeffs);
        for i in 0..m {
            section[(i, k)] = lat[i].clone();
        }
        for i in 0..n {
            section[(m + i, k)] = qv[i].clone();
        }
    }
    for k in 0..q {
        let mut coeffs = vec![Rat::zero(); n];
        for i in 0..w {
            coeffs[i] = s2[(i, k)].clone();
        }
        let qv = t.mul_vec(&coeffs);
        for i in 0..n {
            section[(m + i, a + k)] = qv[i].clone();
        }
    }
    Subquotient { module, section, coords }
}

/// Integer span of a module's relations, with its Smith form cached.
#[derive(Clone, Debug)]
pub struct RelationSpan {
    scale: Rat,
    smith: Option<Smith>,
}

impl RelationSpan {
    pub fn contains(&self, v: &[Rat]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let Some(s) = &self.smith else { return false };
        // relations were scaled to integers; v must scale into the same lattice
        let mut w = Vec::with_capacity(v.len());
        for x in v {
            let y = x * &self.scale;
            if !y.is_integer() {
                return false;
            }
            w.push(y.to_integer());
        }
        s.u.mul_vec(&w).iter().enumerate().all(|(i, y)| {
            if i < s.rank {
                y.is_multiple_of(&s.d[(i, i)])
            } else {
                y.is_zero()
            }
        })
    }
}
