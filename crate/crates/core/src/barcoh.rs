//! Cohomology of discrete groups and finite groupoids with mixed-module
//! coefficients.
//!
//! Finite groupoids use the (normalized) bar complex on the nerve: an
//! `n`-cochain assigns to each composable string `(g_1, ..., g_n)` an element
//! of the fiber over `target(g_1)`, and
//!
//! ```text
//! (δf)(g_1..g_{n+1}) = g_1·f(g_2..g_{n+1})
//!                    + Σ_{i=1..n} (-1)^i f(.., g_i g_{i+1}, ..)
//!                    + (-1)^{n+1} f(g_1..g_n).
//! ```
//!
//! The infinite cyclic group uses its two-term resolution `M --(σ-1)--> M`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::exactalg::{homology, AbGroupClass, DirectSum, ExactAlgError, Hom, MixedModule, Rat, RatMatrix};

pub const DEFAULT_DEGREE_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BarCohError {
    #[error("degree {degree} exceeds the bar-complex cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error(transparent)]
    Algebra(#[from] ExactAlgError),
}

/// The discrete groupoids supported by the cohomology engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiscreteGroupoidSpec {
    /// `table[g][h] = gh`; element order is arbitrary.
    FiniteGroup { table: Vec<Vec<usize>> },
    InfiniteCyclic,
    /// All ordered pairs of a finite set of `objects`.
    PairGroupoid { objects: usize },
    /// `action[g][x] = g·x` for a finite group acting on `0..points`.
    FiniteActionGroupoid { group_table: Vec<Vec<usize>>, action: Vec<Vec<usize>> },
}

impl DiscreteGroupoidSpec {
    pub fn cyclic_group(n: usize) -> Self {
        let table = (0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect();
        Self::FiniteGroup { table }
    }

    /// Direct product of two finite groups given by tables.
    pub fn product_group(a: &[Vec<usize>], b: &[Vec<usize>]) -> Self {
        let (na, nb) = (a.len(), b.len());
        let table = (0..na * nb)
            .map(|g| (0..na * nb).map(|h| a[g / nb][h / nb] * nb + b[g % nb][h % nb]).collect())
            .collect();
        Self::FiniteGroup { table }
    }

    /// Dihedral group of order `2n`: element `r^i s^j` is `2i + j`.
    pub fn dihedral_group(n: usize) -> Self {
        let mul = |(i1, j1): (usize, usize), (i2, j2): (usize, usize)| {
            let i = if j1 == 0 { (i1 + i2) % n } else { (i1 + n - i2) % n };
            (i, (j1 + j2) % 2)
        };
        let table = (0..2 * n)
            .map(|g| (0..2 * n).map(|h| {
                let (i, j) = mul((g / 2, g % 2), (h / 2, h % 2));
                2 * i + j
            }).collect())
            .collect();
        Self::FiniteGroup { table }
    }

    /// Quaternion group of order 8: elements `±1, ±i, ±j, ±k` encoded as `2u + sign`.
    pub fn quaternion_group() -> Self {
        // unit products: (unit, unit) -> (unit, negative?)
        let unit_mul = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (2, 1) => (3, true),
                (3, 2) => (1, true),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let table = (0..8)
            .map(|g| (0..8).map(|h| {
                let (u, neg) = unit_mul(g / 2, h / 2);
                let sign = (g % 2) ^ (h % 2) ^ usize::from(neg);
                2 * u + sign
            }).collect())
            .collect();
        Self::FiniteGroup { table }
    }

    pub fn build(&self) -> Result<Option<FiniteGroupoid>, BarCohError> {
        match self {
            Self::InfiniteCyclic => Ok(None),
            Self::FiniteGroup { table } => {
                let identity = validate_group(table)?;
                let morphisms = (0..table.len()).map(|_| Arrow { source: 0, target: 0 }).collect();
                let compose = table.iter().map(|row| row.iter().map(|&x| Some(x)).collect()).collect();
                Ok(Some(FiniteGroupoid { objects: 1, morphisms, compose, identities: vec![identity] }))
            }
            Self::PairGroupoid { objects } => {
                let n = *objects;
                if n == 0 {
                    return Err(BarCohError::InvalidGroupoid("pair groupoid needs at least one object".into()));
                }
                // arrow (t, s) : s -> t has index t*n + s
                let morphisms = (0..n * n).map(|i| Arrow { source: i % n, target: i / n }).collect();
                let compose = (0..n * n)
                    .map(|g| {
                        (0..n * n)
                            .map(|h| (g % n == h / n).then_some((g / n) * n + h % n))
                            .collect()
                    })
                    .collect();
                let identities = (0..n).map(|x| x * n + x).collect();
                Ok(Some(FiniteGroupoid { objects: n, morphisms, compose, identities }))
            }
            Self::FiniteActionGroupoid { group_table, action } => {
                let e = validate_group(group_table)?;
                let order = group_table.len();
                if action.len() != order {
                    return Err(BarCohError::InvalidGroupoid("action table needs one row per group element".into()));
                }
                let points = action.first().map_or(0, Vec::len);
                if points == 0 || action.iter().any(|r| r.len() != points || r.iter().any(|&y| y >= points)) {
                    return Err(BarCohError::InvalidGroupoid("ragged or out-of-range action table".into()));
                }
                for x in 0..points {
                    if action[e][x] != x {
                        return Err(BarCohError::InvalidGroupoid("identity does not act trivially".into()));
                    }
                    for g in 0..order {
                        for h in 0..order {
                            if action[g][action[h][x]] != action[group_table[g][h]][x] {
                                return Err(BarCohError::InvalidGroupoid(format!(
                                    "action is not compatible with multiplication at ({g}, {h}, {x})"
                                )));
                            }
                        }
                    }
                }
                // arrow (g, x) : x -> g·x has index g*points + x
                let morphisms = (0..order * points)
                    .map(|i| Arrow { source: i % points, target: action[i / points][i % points] })
                    .collect();
                let compose = (0..order * points)
                    .map(|a| {
                        let (g, x) = (a / points, a % points);
                        (0..order * points)
                            .map(|b| {
                                let (h, y) = (b / points, b % points);
                                (action[h][y] == x).then_some(group_table[g][h] * points + y)
                            })
                            .collect()
                    })
                    .collect();
                let identities = (0..points).map(|x| e * points + x).collect();
                Ok(Some(FiniteGroupoid { objects: points, morphisms, compose, identities }))
            }
        }
    }
}

fn validate_group(table: &[Vec<usize>]) -> Result<usize, BarCohError> {
    let n = table.len();
    if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
        return Err(BarCohError::InvalidGroupoid("multiplication table must be square with entries in range".into()));
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
        .ok_or_else(|| BarCohError::InvalidGroupoid("no identity element".into()))?;
    for g in 0..n {
        if !(0..n).any(|h| table[g][h] == identity && table[h][g] == identity) {
            return Err(BarCohError::InvalidGroupoid(format!("element {g} has no inverse")));
        }
        for h in 0..n {
            for k in 0..n {
                if table[table[g][h]][k] != table[g][table[h][k]] {
                    return Err(BarCohError::InvalidGroupoid(format!("not associative at ({g}, {h}, {k})")));
                }
            }
        }
    }
    Ok(identity)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
}

/// A finite groupoid with an explicit partial composition table.
#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    pub objects: usize,
    pub morphisms: Vec<Arrow>,
    /// `compose[g][h] = Some(g∘h)` when `source(g) == target(h)`.
    pub compose: Vec<Vec<Option<usize>>>,
    pub identities: Vec<usize>,
}

impl FiniteGroupoid {
    pub fn is_identity(&self, g: usize) -> bool {
        self.identities[self.morphisms[g].source] == g
    }

    /// All composable strings of length `n`; length zero lists objects.
    pub fn strings(&self, n: usize, normalized: bool) -> Vec<Vec<usize>> {
        if n == 0 {
            return (0..self.objects).map(|x| vec![x]).collect();
        }
        let usable: Vec<usize> =
            (0..self.morphisms.len()).filter(|&g| !(normalized && self.is_identity(g))).collect();
        let mut out: Vec<Vec<usize>> = usable.iter().map(|&g| vec![g]).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for s in &out {
                let last = *s.last().unwrap();
                for &g in &usable {
                    if self.morphisms[g].target == self.morphisms[last].source {
                        let mut t = s.clone();
                        t.push(g);
                        next.push(t);
                    }
                }
            }
            out = next;
        }
        out
    }
}

/// Coefficients: one fiber per object and, for each arrow `g: x -> y`, a
/// matrix acting `fiber(x) -> fiber(y)`. For the infinite cyclic group the
/// single action matrix is the generator.
#[derive(Clone, Debug)]
pub struct GroupoidModule {
    pub fibers: Vec<MixedModule>,
    pub actions: Vec<RatMatrix>,
}

impl GroupoidModule {
    /// Every arrow acts by the identity on a constant fiber.
    pub fn trivial(groupoid: &DiscreteGroupoidSpec, fiber: &MixedModule) -> Result<Self, BarCohError> {
        let id = RatMatrix::identity(fiber.ambient_dim());
        match groupoid.build()? {
            None => Ok(Self { fibers: vec![fiber.clone()], actions: vec![id] }),
            Some(g) => Ok(Self { fibers: vec![fiber.clone(); g.objects], actions: vec![id; g.morphisms.len()] }),
        }
    }

    /// Infinite cyclic group acting through its generator.
    pub fn cyclic_generator(fiber: &MixedModule, generator: RatMatrix) -> Self {
        Self { fibers: vec![fiber.clone()], actions: vec![generator] }
    }

    /// Constant fiber with the action of arrow `(g, x)` given by `rep[g]`;
    /// works for groups (one object) and action groupoids.
    pub fn from_group_action(
        groupoid: &DiscreteGroupoidSpec,
        fiber: &MixedModule,
        rep: &[RatMatrix],
    ) -> Result<Self, BarCohError> {
        let g = groupoid
            .build()?
            .ok_or_else(|| BarCohError::InvalidModule("use cyclic_generator for the infinite cyclic group".into()))?;
        let order = rep.len();
        if order == 0 || g.morphisms.len() % order != 0 {
            return Err(BarCohError::InvalidModule("one action matrix per group element is required".into()));
        }
        let points = g.morphisms.len() / order;
        let actions = (0..g.morphisms.len()).map(|a| rep[a / points].clone()).collect();
        Ok(Self { fibers: vec![fiber.clone(); g.objects], actions })
    }

    fn check_hom(&self, m: &RatMatrix, src: usize, dst: usize) -> Result<Hom, BarCohError> {
        Hom::induced(m.clone(), &self.fibers[src], &self.fibers[dst])
            .map_err(|e| BarCohError::InvalidModule(e.to_string()))
    }

    /// Validates fibers and action maps against the groupoid.
    pub fn validate(&self, groupoid: &DiscreteGroupoidSpec) -> Result<(), BarCohError> {
        let Some(g) = groupoid.build()? else {
            if self.fibers.len() != 1 || self.actions.len() != 1 {
                return Err(BarCohError::InvalidModule("infinite cyclic module needs one fiber and one generator".into()));
            }
            self.check_hom(&self.actions[0], 0, 0)?;
            let inv = self.actions[0]
                .inverse()
                .ok_or_else(|| BarCohError::InvalidModule("generator action is not invertible".into()))?;
            self.check_hom(&inv, 0, 0)?;
            return Ok(());
        };
        if self.fibers.len() != g.objects || self.actions.len() != g.morphisms.len() {
            return Err(BarCohError::InvalidModule(format!(
                "expected {} fibers and {} action matrices",
                g.objects,
                g.morphisms.len()
            )));
        }
        let homs: Vec<Hom> = g
            .morphisms
            .iter()
            .zip(&self.actions)
            .map(|(a, m)| self.check_hom(m, a.source, a.target))
            .collect::<Result<_, _>>()?;
        let equal_maps = |x: &RatMatrix, y: &RatMatrix, src: usize, dst: usize| {
            Hom::induced(x - y, &self.fibers[src], &self.fibers[dst]).map(|h| h.is_zero_map()).unwrap_or(false)
        };
        for (x, &e) in g.identities.iter().enumerate() {
            if !equal_maps(homs[e].matrix(), &RatMatrix::identity(self.fibers[x].ambient_dim()), x, x) {
                return Err(BarCohError::InvalidModule(format!("identity at object {x} acts nontrivially")));
            }
        }
        for a in 0..g.morphisms.len() {
            for b in 0..g.morphisms.len() {
                if let Some(c) = g.compose[a][b] {
                    let prod = homs[b].compose(&homs[a]);
                    let (s, t) = (g.morphisms[b].source, g.morphisms[a].target);
                    if !equal_maps(prod.matrix(), homs[c].matrix(), s, t) {
                        return Err(BarCohError::InvalidModule(format!(
                            "action does not respect composition of arrows {a} and {b}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Bar complex of a finite groupoid with coefficients in a module.
#[derive(Clone, Debug)]
pub struct BarComplex {
    groupoid: FiniteGroupoid,
    module: GroupoidModule,
    normalized: bool,
}

/// One degree of the bar complex: the cochain module and its indexing.
#[derive(Clone, Debug)]
pub struct CochainSpace {
    pub strings: Vec<Vec<usize>>,
    pub sum: DirectSum,
    index: HashMap<Vec<usize>, usize>,
}

impl CochainSpace {
    pub fn module(&self) -> &MixedModule {
        &self.sum.module
    }
}

impl BarComplex {
    pub fn new(groupoid: FiniteGroupoid, module: GroupoidModule, normalized: bool) -> Self {
        Self { groupoid, module, normalized }
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    fn target_object(&self, degree: usize, s: &[usize]) -> usize {
        if degree == 0 {
            s[0]
        } else {
            self.groupoid.morphisms[s[0]].target
        }
    }

    pub fn cochains(&self, degree: usize) -> CochainSpace {
        let strings = self.groupoid.strings(degree, self.normalized);
        let fibers: Vec<MixedModule> =
            strings.iter().map(|s| self.module.fibers[self.target_object(degree, s)].clone()).collect();
        let index = strings.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        CochainSpace { sum: MixedModule::direct_sum(&fibers), strings, index }
    }

    /// Faces of a string with their sign and whether the action of the first
    /// arrow is applied. Degenerate faces are dropped in the normalized complex.
    fn faces(&self, degree: usize, s: &[usize]) -> Vec<(Vec<usize>, i64, bool)> {
        let g = &self.groupoid;
        let n = degree + 1; // length of s
        let mut out = Vec::with_capacity(n + 1);
        if degree == 0 {
            let a = g.morphisms[s[0]];
            out.push((vec![a.source], 1, true));
            out.push((vec![a.target], -1, false));
            return out;
        }
        out.push((s[1..].to_vec(), 1, true));
        for i in 1..n {
            let c = g.compose[s[i - 1]][s[i]].expect("strings are composable");
            if self.normalized && g.is_identity(c) {
                continue;
            }
            let mut t = s[..i - 1].to_vec();
            t.push(c);
            t.extend_from_slice(&s[i + 1..]);
            out.push((t, if i % 2 == 0 { 1 } else { -1 }, false));
        }
        out.push((s[..n - 1].to_vec(), if n % 2 == 0 { 1 } else { -1 }, false));
        out
    }

    fn differential_matrix(&self, src: &CochainSpace, dst: &CochainSpace, degree: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(dst.module().ambient_dim(), src.module().ambient_dim());
        for (row_idx, s) in dst.strings.iter().enumerate() {
            let fiber_dim = dst.sum.summands[row_idx].ambient_dim();
            for (face, sign, act) in self.faces(degree, s) {
                let Some(&col_idx) = src.index.get(&face) else { continue };
                let sign = Rat::from_integer(sign.into());
                let block = if act {
                    self.module.actions[s[0]].clone()
                } else {
                    RatMatrix::identity(fiber_dim)
                };
                for i in 0..block.rows() {
                    for j in 0..block.cols() {
                        if !block[(i, j)].is_zero() {
                            let (r, c) = (dst.sum.global_index(row_idx, i), src.sum.global_index(col_idx, j));
                            let v = &m[(r, c)] + &sign * &block[(i, j)];
                            m[(r, c)] = v;
                        }
                    }
                }
            }
        }
        m
    }

    /// The coboundary `C^degree -> C^{degree+1}`.
    pub fn differential(&self, degree: usize) -> Hom {
        let src = self.cochains(degree);
        let dst = self.cochains(degree + 1);
        self.differential_between(&src, &dst, degree)
    }

    pub fn differential_between(&self, src: &CochainSpace, dst: &CochainSpace, degree: usize) -> Hom {
        let m = self.differential_matrix(src, dst, degree);
        Hom::induced(m, src.module(), dst.module()).expect("coboundary of a valid module is well defined")
    }

    pub fn cohomology(&self, degree: usize) -> AbGroupClass {
        let c = self.cochains(degree);
        let next = self.cochains(degree + 1);
        let outgoing = self.differential_between(&c, &next, degree);
        let incoming = if degree == 0 {
            Hom::zero(&MixedModule::trivial(), c.module())
        } else {
            self.differential_between(&self.cochains(degree - 1), &c, degree - 1)
        };
        homology(&incoming, &outgoing).classify()
    }

    /// `H^{degree+1}` of the complex whose degree-0 cochains are replaced by zero.
    pub fn truncated_cohomology(&self, degree: usize) -> AbGroupClass {
        let full = degree + 1;
        let c = self.cochains(full);
        let next = self.cochains(full + 1);
        let outgoing = self.differential_between(&c, &next, full);
        let incoming = if full == 1 {
            Hom::zero(&MixedModule::trivial(), c.module())
        } else {
            self.differential_between(&self.cochains(full - 1), &c, full - 1)
        };
        homology(&incoming, &outgoing).classify()
    }
}

fn finite_complex(g: &DiscreteGroupoidSpec, m: &GroupoidModule) -> Result<BarComplex, BarCohError> {
    m.validate(g)?;
    let groupoid = g.build()?.expect("finite kind");
    Ok(BarComplex::new(groupoid, m.clone(), true))
}

fn generator_minus_one(m: &GroupoidModule) -> Hom {
    let fiber = &m.fibers[0];
    let a = &m.actions[0] - &RatMatrix::identity(fiber.ambient_dim());
    Hom::induced(a, fiber, fiber).expect("validated generator")
}

/// `H^degree(G; M)`.
pub fn group_cohomology(
    g: &DiscreteGroupoidSpec,
    m: &GroupoidModule,
    degree: usize,
    cap: usize,
) -> Result<AbGroupClass, BarCohError> {
    if *g == DiscreteGroupoidSpec::InfiniteCyclic {
        m.validate(g)?;
        let d = generator_minus_one(m);
        return Ok(match degree {
            0 => d.kernel().classify(),
            1 => d.cokernel().classify(),
            _ => AbGroupClass::trivial(),
        });
    }
    if degree > cap {
        return Err(BarCohError::DegreeCapExceeded { degree, cap });
    }
    Ok(finite_complex(g, m)?.cohomology(degree))
}

/// Truncated cohomology `H^degree_0(G; M) = H^{degree+1}` of the complex
/// without degree-0 cochains; in degree 0 this is the group of 1-cocycles.
pub fn truncated_cohomology(
    g: &DiscreteGroupoidSpec,
    m: &GroupoidModule,
    degree: usize,
    cap: usize,
) -> Result<AbGroupClass, BarCohError> {
    if *g == DiscreteGroupoidSpec::InfiniteCyclic {
        m.validate(g)?;
        // C^1 = M (value on the generator) and C^2 = 0 in the small resolution
        return Ok(if degree == 0 { m.fibers[0].classify() } else { AbGroupClass::trivial() });
    }
    if degree + 1 > cap {
        return Err(BarCohError::DegreeCapExceeded { degree: degree + 1, cap });
    }
    Ok(finite_complex(g, m)?.truncated_cohomology(degree))
}

/// Cohomology of the pair groupoid on `objects` points with a constant fiber.
pub fn pair_groupoid_cohomology(objects: usize, fiber: &MixedModule, degree: usize) -> Result<AbGroupClass, BarCohError> {
    let spec = DiscreteGroupoidSpec::PairGroupoid { objects };
    let m = GroupoidModule::trivial(&spec, fiber)?;
    Ok(finite_complex(&spec, &m)?.cohomology(degree))
}

/// A scalar action matrix `[[v]]`.
pub fn scalar_action(v: i64) -> RatMatrix {
    RatMatrix::from_vec(1, 1, vec![Rat::from_integer(v.into())])
}

/// The sign representation of a group table: elements of even "length" act by
/// `+1`. Only used for cyclic groups, where `g` acts by `(-1)^g`.
pub fn cyclic_sign_action(order: usize) -> Vec<RatMatrix> {
    (0..order).map(|g| scalar_action(if g % 2 == 0 { 1 } else { -1 })).collect()
}


#[cfg(test)]
mod tests {
    use super::*;

    fn z_twisted() -> GroupoidModule {
        GroupoidModule::cyclic_generator(&MixedModule::lattice(1), scalar_action(-1))
    }

    #[test]
    fn infinite_cyclic_twisted_lattice() {
        let g = DiscreteGroupoidSpec::InfiniteCyclic;
        let m = z_twisted();
        let h: Vec<String> = (0..4).map(|k| group_cohomology(&g, &m, k, 4).unwrap().to_string()).collect();
        assert_eq!(h, ["0", "Z/2", "0", "0"]);
    }

    #[test]
    fn infinite_cyclic_torus_and_rational() {
        let g = DiscreteGroupoidSpec::InfiniteCyclic;
        let torus = GroupoidModule::cyclic_generator(&MixedModule::torus(1), scalar_action(-1));
        assert_eq!(group_cohomology(&g, &torus, 0, 4).unwrap().to_string(), "Z/2");
        assert!(group_cohomology(&g, &torus, 1, 4).unwrap().is_trivial());
        let q = GroupoidModule::cyclic_generator(&MixedModule::rational(1), scalar_action(-1));
        for k in 0..3 {
            assert!(group_cohomology(&g, &q, k, 4).unwrap().is_trivial());
        }
    }

    #[test]
    fn truncated_examples() {
        let z = DiscreteGroupoidSpec::InfiniteCyclic;
        let triv = GroupoidModule::cyclic_generator(&MixedModule::lattice(1), scalar_action(1));
        assert_eq!(truncated_cohomology(&z, &triv, 0, 4).unwrap().to_string(), "Z^1");

        let c2 = DiscreteGroupoidSpec::cyclic_group(2);
        let m = GroupoidModule::trivial(&c2, &MixedModule::lattice(1)).unwrap();
        assert!(truncated_cohomology(&c2, &m, 0, 4).unwrap().is_trivial());
        assert_eq!(truncated_cohomology(&c2, &m, 1, 4).unwrap().to_string(), "Z/2");
    }

    #[test]
    fn cyclic_group_integral_cohomology_is_periodic() {
        let c3 = DiscreteGroupoidSpec::cyclic_group(3);
        let m = GroupoidModule::trivial(&c3, &MixedModule::lattice(1)).unwrap();
        let h: Vec<String> = (0..5).map(|k| group_cohomology(&c3, &m, k, 4).unwrap().to_string()).collect();
        assert_eq!(h, ["Z^1", "0", "Z/3", "0", "Z/3"]);
    }

    #[test]
    fn degree_cap_is_enforced() {
        let c2 = DiscreteGroupoidSpec::cyclic_group(2);
        let m = GroupoidModule::trivial(&c2, &MixedModule::lattice(1)).unwrap();
        assert_eq!(
            group_cohomology(&c2, &m, 5, 4),
            Err(BarCohError::DegreeCapExceeded { degree: 5, cap: 4 })
        );
    }

    #[test]
    fn pair_groupoid_examples() {
        assert_eq!(pair_groupoid_cohomology(1, &MixedModule::lattice(1), 0).unwrap().to_string(), "Z^1");
        assert_eq!(pair_groupoid_cohomology(3, &MixedModule::cyclic(4), 0).unwrap().to_string(), "Z/4");
        assert!(pair_groupoid_cohomology(3, &MixedModule::cyclic(4), 2).unwrap().is_trivial());
        assert!(pair_groupoid_cohomology(2, &MixedModule::torus(1), 1).unwrap().is_trivial());
    }

    #[test]
    fn invalid_tables_and_modules_are_rejected() {
        let bad = DiscreteGroupoidSpec::FiniteGroup { table: vec![vec![0, 1], vec![1, 1]] };
        assert!(matches!(bad.build(), Err(BarCohError::InvalidGroupoid(_))));
        let c2 = DiscreteGroupoidSpec::cyclic_group(2);
        // generator acting by 2 on Z does not square to the identity
        let m = GroupoidModule::from_group_action(&c2, &MixedModule::lattice(1), &[scalar_action(1), scalar_action(2)])
            .unwrap();
        assert!(matches!(m.validate(&c2), Err(BarCohError::InvalidModule(_))));
    }

    #[test]
    fn builtin_groups_are_groups() {
        for g in [
            DiscreteGroupoidSpec::dihedral_group(4),
            DiscreteGroupoidSpec::quaternion_group(),
            DiscreteGroupoidSpec::product_group(&[vec![0, 1], vec![1, 0]], &[vec![0, 1], vec![1, 0]]),
        ] {
            assert!(g.build().is_ok());
        }
    }
}
