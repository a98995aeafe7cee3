//! Central extensions of coordinate groups and action groupoids by vector
//! groups, built from normalized 2-cocycles, and recovery of the cocycle from
//! a section. Finite abelian extensions are handled in table form.

use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::Rat;
use crate::forms::{parse_poly, Chart, LaurentPoly};
use crate::vanest::{check_cocycle, CocycleExpr, CoordGroupSpec, VanEstError};

/// Expansions with more cocycle terms than this are verified by sampling.
pub const DEFAULT_SYMBOLIC_TERM_BOUND: usize = 400;
pub const SAMPLE_POINTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtendError {
    #[error("cocycle condition fails: residual {0}")]
    CocycleViolation(String),
    #[error("cocycle is not normalized")]
    NotNormalized,
    #[error("not a section of the projection: {0}")]
    NotASection(String),
    #[error("invalid finite data: {0}")]
    InvalidTable(String),
    #[error(transparent)]
    VanEst(#[from] VanEstError),
}

/// A central extension request: `0 -> C^r -> E -> G -> 0` with one cocycle
/// per fiber coordinate.
#[derive(Clone, Debug)]
pub struct ExtensionSpec {
    pub base: CoordGroupSpec,
    pub fiber_vars: Vec<String>,
    pub cocycles: Vec<CocycleExpr>,
}

impl ExtensionSpec {
    pub fn new(base: CoordGroupSpec, fiber_vars: &[&str], cocycles: Vec<CocycleExpr>) -> Self {
        Self { base, fiber_vars: fiber_vars.iter().map(|s| s.to_string()).collect(), cocycles }
    }

    /// One fiber coordinate with the cocycle given as text on `B^2`.
    pub fn parse(base: CoordGroupSpec, fiber_var: &str, cocycle: &str) -> Result<Self, ExtendError> {
        let f = CocycleExpr::parse(&base, 2, cocycle)?;
        Ok(Self::new(base, &[fiber_var], vec![f]))
    }
}

/// How an identity was verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Verification {
    Symbolic,
    Sampled { points: usize },
}

/// The extension groupoid with explicit multiplication on the chart
/// `(E', E, x)`: left factor primed, `x` the source of the right factor.
#[derive(Clone, Debug)]
pub struct BuiltGroupoid {
    pub base: CoordGroupSpec,
    pub fiber_vars: Vec<String>,
    pub cocycles: Vec<CocycleExpr>,
    pub law_chart: Arc<Chart>,
    pub law: Vec<LaurentPoly>,
    pub inverse: Vec<LaurentPoly>,
    pub associativity: Verification,
}

fn primed(name: &str) -> String {
    format!("{name}'")
}

impl BuiltGroupoid {
    /// Coordinates of an arrow: group variables, then fiber variables.
    pub fn coords(&self) -> Vec<String> {
        self.base.vars().iter().chain(&self.fiber_vars).cloned().collect()
    }

    pub fn dim(&self) -> usize {
        self.base.dim() + self.fiber_vars.len()
    }

    /// `(μ(g', g), c' + c + f(g', g))` as text.
    pub fn law_string(&self) -> String {
        let k = self.base.dim();
        let names = self.law_chart.names();
        let mut parts: Vec<String> = self.law[..k].iter().map(|p| p.display(names).to_string()).collect();
        for (c, f) in self.fiber_vars.iter().zip(&self.cocycles) {
            let f = f.to_string();
            parts.push(match f.as_str() {
                "0" => format!("{c}' + {c}"),
                _ => match f.strip_prefix('-') {
                    Some(rest) => format!("{c}' + {c} - {rest}"),
                    None => format!("{c}' + {c} + {f}"),
                },
            });
        }
        format!("({})", parts.join(", "))
    }

    /// `left · right` where `x` is the source of `right`.
    pub fn apply_law(&self, left: &[LaurentPoly], right: &[LaurentPoly], x: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let nv = left[0].nvars();
        let comps: Vec<LaurentPoly> = left.iter().chain(right).chain(x).cloned().collect();
        self.law.iter().map(|p| p.compose(&comps, nv).expect("law is polynomial in its arguments")).collect()
    }

    fn group_part<'a>(&self, e: &'a [LaurentPoly]) -> &'a [LaurentPoly] {
        &e[..self.base.dim()]
    }

    fn act(&self, e: &[LaurentPoly], x: &[LaurentPoly]) -> Vec<LaurentPoly> {
        self.base.apply_action(self.group_part(e), x).expect("validated action")
    }

    /// The extension as a coordinate group when the cocycle ignores the base.
    pub fn as_coord_group(&self, name: &str) -> Option<CoordGroupSpec> {
        let n = self.dim();
        let m = self.base.base_dim();
        if self.law.iter().any(|p| (2 * n..2 * n + m).any(|i| p.depends_on(i))) {
            return None;
        }
        if self.inverse.iter().any(|p| (n..n + m).any(|i| p.depends_on(i))) {
            return None;
        }
        // base exponents are zero, so their target slot is irrelevant
        let squash = |p: &LaurentPoly, dims: usize| {
            let map: Vec<usize> = (0..p.nvars()).map(|i| if i < dims { i } else { 0 }).collect();
            p.reindex(dims, &map)
        };
        let law = self.law.iter().map(|p| squash(p, 2 * n)).collect();
        let inverse = self.inverse.iter().map(|p| squash(p, n)).collect();
        // the action ignores the fiber coordinates
        let k = self.base.dim();
        let action = self
            .base
            .base_vars()
            .iter()
            .enumerate()
            .map(|(j, _)| {
                let comps: Vec<LaurentPoly> = (0..k)
                    .map(|i| LaurentPoly::var(n + m, i))
                    .chain((0..m).map(|i| LaurentPoly::var(n + m, n + i)))
                    .collect();
                let base_action = self.base.apply_action(&comps[..k], &comps[k..]).ok()?;
                Some(base_action[j].clone())
            })
            .collect::<Option<Vec<_>>>()?;
        let identity: Vec<Rat> =
            self.base.identity().iter().cloned().chain(self.fiber_vars.iter().map(|_| Rat::zero())).collect();
        let base_names: Vec<String> = self.base.base_vars().to_vec();
        CoordGroupSpec::new(name, self.coords(), base_names, identity, law, inverse, action).ok()
    }
}

fn cocycle_with_base_map(f: &CocycleExpr, nv: usize, left: &[LaurentPoly], right: &[LaurentPoly], x: &[LaurentPoly]) -> LaurentPoly {
    let comps: Vec<LaurentPoly> = left.iter().chain(right).chain(x).cloned().collect();
    f.expr.compose(&comps, nv).expect("cocycle is Laurent in its arguments")
}

/// Builds `(g', c')(g, c) = (g'g, c' + c + f(g', g))` and verifies the groupoid axioms.
pub fn build_central_extension(spec: &ExtensionSpec) -> Result<BuiltGroupoid, ExtendError> {
    build_central_extension_with_bound(spec, DEFAULT_SYMBOLIC_TERM_BOUND)
}

pub fn build_central_extension_with_bound(spec: &ExtensionSpec, bound: usize) -> Result<BuiltGroupoid, ExtendError> {
    let g = &spec.base;
    if spec.cocycles.len() != spec.fiber_vars.len() || spec.cocycles.iter().any(|f| f.degree != 2) {
        return Err(ExtendError::InvalidTable("one degree-2 cocycle per fiber coordinate is required".into()));
    }
    for f in &spec.cocycles {
        let check = check_cocycle(g, f)?;
        if !check.holds {
            return Err(ExtendError::CocycleViolation(check.residual_text()));
        }
        if !f.is_normalized(g) {
            return Err(ExtendError::NotNormalized);
        }
    }
    let (k, r, m) = (g.dim(), spec.fiber_vars.len(), g.base_dim());
    let n = k + r;
    let coords: Vec<String> = g.vars().iter().chain(&spec.fiber_vars).cloned().collect();
    let law_chart = Chart::new(
        coords.iter().map(|c| primed(c)).chain(coords.iter().cloned()).chain(g.base_vars().iter().cloned()),
    );
    let nv = 2 * n + m;
    let var = |i| LaurentPoly::var(nv, i);
    let left: Vec<LaurentPoly> = (0..n).map(var).collect();
    let right: Vec<LaurentPoly> = (n..2 * n).map(var).collect();
    let x: Vec<LaurentPoly> = (2 * n..nv).map(var).collect();
    let mut law = g.apply_mul(&left[..k], &right[..k])?;
    for (j, f) in spec.cocycles.iter().enumerate() {
        let fj = cocycle_with_base_map(f, nv, &left[..k], &right[..k], &x);
        law.push(left[k + j].add(&right[k + j]).add(&fj));
    }
    // inverse on (E, x) of an arrow with source x: (g^{-1}, -c - f(g^{-1}, g, x))
    let inv_nv = n + m;
    let ivar = |i| LaurentPoly::var(inv_nv, i);
    let ge: Vec<LaurentPoly> = (0..k).map(ivar).collect();
    let xe: Vec<LaurentPoly> = (n..n + m).map(ivar).collect();
    let ginv = g.apply_inv(&ge)?;
    let mut inverse = ginv.clone();
    for (j, f) in spec.cocycles.iter().enumerate() {
        let fj = cocycle_with_base_map(f, inv_nv, &ginv, &ge, &xe);
        inverse.push(ivar(k + j).neg().sub(&fj));
    }
    let mut built = BuiltGroupoid {
        base: g.clone(),
        fiber_vars: spec.fiber_vars.clone(),
        cocycles: spec.cocycles.clone(),
        law_chart,
        law,
        inverse,
        associativity: Verification::Symbolic,
    };
    let size: usize = spec.cocycles.iter().map(|f| f.expr.num_terms()).sum();
    built.associativity = if size > bound {
        verify_sampled(&built)?;
        Verification::Sampled { points: SAMPLE_POINTS }
    } else {
        verify_symbolic(&built)?;
        Verification::Symbolic
    };
    verify_identity_inverse(&built)?;
    Ok(built)
}

fn triple(built: &BuiltGroupoid) -> (usize, Vec<LaurentPoly>, Vec<LaurentPoly>, Vec<LaurentPoly>, Vec<LaurentPoly>) {
    let n = built.dim();
    let m = built.base.base_dim();
    let nv = 3 * n + m;
    let var = |i| LaurentPoly::var(nv, i);
    (nv, (0..n).map(var).collect(), (n..2 * n).map(var).collect(), (2 * n..3 * n).map(var).collect(), (3 * n..nv).map(var).collect())
}

fn associativity_sides(built: &BuiltGroupoid) -> (Vec<LaurentPoly>, Vec<LaurentPoly>) {
    let (_, u, v, w, x) = triple(built);
    let wx = built.act(&w, &x);
    let lhs = built.apply_law(&built.apply_law(&u, &v, &wx), &w, &x);
    let rhs = built.apply_law(&u, &built.apply_law(&v, &w, &x), &x);
    (lhs, rhs)
}

fn verify_symbolic(built: &BuiltGroupoid) -> Result<(), ExtendError> {
    let (lhs, rhs) = associativity_sides(built);
    for (a, b) in lhs.iter().zip(&rhs) {
        let res = a.sub(b);
        if !res.is_zero() {
            return Err(ExtendError::CocycleViolation(format!("{} nonzero terms", res.num_terms())));
        }
    }
    Ok(())
}

fn verify_sampled(built: &BuiltGroupoid) -> Result<(), ExtendError> {
    // evaluate both bracketings at random rational points without expanding
    let n = built.dim();
    let m = built.base.base_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let eval_law = |l: &[Rat], r: &[Rat], x: &[Rat]| -> Option<Vec<Rat>> {
        let pt: Vec<Rat> = l.iter().chain(r).chain(x).cloned().collect();
        built.law.iter().map(|p| p.evaluate(&pt)).collect()
    };
    let act = |g: &[Rat], x: &[Rat]| -> Option<Vec<Rat>> {
        let k = built.base.dim();
        let nv = k + m;
        let polys: Vec<LaurentPoly> = (0..k).map(|i| LaurentPoly::var(nv, i)).collect();
        let xs: Vec<LaurentPoly> = (k..nv).map(|i| LaurentPoly::var(nv, i)).collect();
        let act = built.base.apply_action(&polys, &xs).ok()?;
        let pt: Vec<Rat> = g[..k].iter().chain(x).cloned().collect();
        act.iter().map(|p| p.evaluate(&pt)).collect()
    };
    for _ in 0..SAMPLE_POINTS {
        let mut draw = |len: usize| -> Vec<Rat> {
            (0..len).map(|_| Rat::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into())).collect()
        };
        let (u, v, w, x) = (draw(n), draw(n), draw(n), draw(m));
        let (Some(wx), Some(vw)) = (act(&w, &x), eval_law(&v, &w, &x)) else { continue };
        let lhs = eval_law(&u, &v, &wx).and_then(|uv| eval_law(&uv, &w, &x));
        let rhs = eval_law(&u, &vw, &x);
        if let (Some(a), Some(b)) = (lhs, rhs) {
            if a != b {
                return Err(ExtendError::CocycleViolation("sampled associativity failure".into()));
            }
        }
    }
    Ok(())
}

fn verify_identity_inverse(built: &BuiltGroupoid) -> Result<(), ExtendError> {
    let n = built.dim();
    let m = built.base.base_dim();
    let nv = n + m;
    let e: Vec<LaurentPoly> = built
        .base
        .identity()
        .iter()
        .map(|c| LaurentPoly::constant(nv, c.clone()))
        .chain((0..built.fiber_vars.len()).map(|_| LaurentPoly::zero(nv)))
        .collect();
    let u: Vec<LaurentPoly> = (0..n).map(|i| LaurentPoly::var(nv, i)).collect();
    let x: Vec<LaurentPoly> = (n..nv).map(|i| LaurentPoly::var(nv, i)).collect();
    let ux = built.act(&u, &x);
    if built.apply_law(&e, &u, &x) != u || built.apply_law(&u, &e, &x) != u {
        return Err(ExtendError::CocycleViolation("identity is not two-sided".into()));
    }
    let comps: Vec<LaurentPoly> = u.iter().chain(&x).cloned().collect();
    let inv: Vec<LaurentPoly> = built.inverse.iter().map(|p| p.compose(&comps, nv).expect("Laurent")).collect();
    // inv is an arrow from u·x back to x
    if built.apply_law(&inv, &u, &x) != e || built.apply_law(&u, &inv, &ux) != e {
        return Err(ExtendError::CocycleViolation("inverse is not two-sided".into()));
    }
    Ok(())
}

/// Whether `(0, a)` commutes with every arrow, as a symbolic identity.
pub fn fiber_is_central(built: &BuiltGroupoid) -> bool {
    let (nv, u, v, _, x) = triple(built);
    let k = built.base.dim();
    let mut a: Vec<LaurentPoly> =
        built.base.identity().iter().map(|c| LaurentPoly::constant(nv, c.clone())).collect();
    a.extend(v[k..].iter().cloned());
    let ux = built.act(&u, &x);
    built.apply_law(&a, &u, &x) == built.apply_law(&u, &a, &ux)
}

/// Checks that `entries(law(g', g)) = entries(g') · entries(g)` as matrices,
/// i.e. that the coordinate map into a matrix group is a homomorphism.
pub fn verify_matrix_model(
    built: &BuiltGroupoid,
    entries: impl Fn(&[LaurentPoly]) -> Vec<Vec<LaurentPoly>>,
) -> bool {
    let n = built.dim();
    let m = built.base.base_dim();
    let nv = 2 * n + m;
    let var = |i| LaurentPoly::var(nv, i);
    let left: Vec<LaurentPoly> = (0..n).map(var).collect();
    let right: Vec<LaurentPoly> = (n..2 * n).map(var).collect();
    let x: Vec<LaurentPoly> = (2 * n..nv).map(var).collect();
    let prod = entries(&built.apply_law(&left, &right, &x));
    let (a, b) = (entries(&left), entries(&right));
    let size = a.len();
    (0..size).all(|i| {
        (0..size).all(|j| {
            let s = (0..size).fold(LaurentPoly::zero(nv), |acc, t| acc.add(&a[i][t].mul(&b[t][j])));
            s == prod[i][j]
        })
    })
}

/// Upper unitriangular `3x3` matrix with entries `(a, c; b)` from coordinates `(a, b, c)`.
pub fn unipotent_matrix(coords: &[LaurentPoly]) -> Vec<Vec<LaurentPoly>> {
    let nv = coords[0].nvars();
    let (one, zero) = (LaurentPoly::one(nv), LaurentPoly::zero(nv));
    vec![
        vec![one.clone(), coords[0].clone(), coords[2].clone()],
        vec![zero.clone(), one.clone(), coords[1].clone()],
        vec![zero.clone(), zero, one],
    ]
}

/// The cocycle read off a section, with the certificate that it differs
/// from the building cocycle by a coboundary.
#[derive(Clone, Debug)]
pub struct ExtensionClass {
    pub cocycles: Vec<CocycleExpr>,
    /// Fiber components `φ` of the section, as 1-cochains.
    pub certificate: Vec<CocycleExpr>,
    /// Whether `recovered - building = δφ` holds symbolically.
    pub certified: bool,
}

/// `f(g', g) = σ(g')σ(g)σ(g'g)^{-1}` read in the fiber. The section is given
/// by its components on the chart `(group vars, base vars)`.
pub fn extension_class(built: &BuiltGroupoid, section: &[LaurentPoly]) -> Result<ExtensionClass, ExtendError> {
    let g = &built.base;
    let (k, r, m) = (g.dim(), built.fiber_vars.len(), g.base_dim());
    let sec_nv = k + m;
    if section.len() != k + r || section.iter().any(|p| p.nvars() != sec_nv) {
        return Err(ExtendError::NotASection("wrong number of components".into()));
    }
    for (i, p) in section[..k].iter().enumerate() {
        if *p != LaurentPoly::var(sec_nv, i) {
            return Err(ExtendError::NotASection(format!("component {i} does not project to the identity map")));
        }
    }
    for (j, p) in section[k..].iter().enumerate() {
        let mut q = p.clone();
        for (i, e) in g.identity().iter().enumerate() {
            q = q.substitute_constant(i, e).ok_or_else(|| ExtendError::NotASection("undefined at the identity".into()))?;
        }
        if !q.is_zero() {
            return Err(ExtendError::NotASection(format!("fiber component {j} is nonzero at the identity")));
        }
    }
    // work on B^2 = (g', g, x) with x the source of g
    let b2 = g.b_chart(2);
    let nv = b2.dim();
    let var = |i| LaurentPoly::var(nv, i);
    let g1: Vec<LaurentPoly> = (0..k).map(var).collect();
    let g2: Vec<LaurentPoly> = (k..2 * k).map(var).collect();
    let x: Vec<LaurentPoly> = (2 * k..nv).map(var).collect();
    let eval_section = |gp: &[LaurentPoly], xp: &[LaurentPoly]| -> Vec<LaurentPoly> {
        let comps: Vec<LaurentPoly> = gp.iter().chain(xp).cloned().collect();
        section.iter().map(|p| p.compose(&comps, nv).expect("Laurent section")).collect()
    };
    let g2x = g.apply_action(&g2, &x)?;
    let s1 = eval_section(&g1, &g2x);
    let s2 = eval_section(&g2, &x);
    let prod = built.apply_law(&s1, &s2, &x);
    let g12 = g.apply_mul(&g1, &g2)?;
    let s12 = eval_section(&g12, &x);
    let mut cocycles = Vec::with_capacity(r);
    let mut certificate = Vec::with_capacity(r);
    let mut certified = true;
    for j in 0..r {
        let f = prod[k + j].sub(&s12[k + j]);
        let recovered = CocycleExpr::new(g, 2, f);
        let b1 = g.b_chart(1);
        let to_b1: Vec<usize> = (0..sec_nv).collect();
        let phi = CocycleExpr::new(g, 1, section[k + j].reindex(b1.dim(), &to_b1));
        let dphi = crate::vanest::coboundary(g, &phi)?;
        certified &= recovered.expr.sub(&built.cocycles[j].expr) == dphi.expr;
        cocycles.push(recovered);
        certificate.push(phi);
    }
    Ok(ExtensionClass { cocycles, certificate, certified })
}

/// Parses a section `(g, φ_1, ..., φ_r)` given only its fiber components.
pub fn section_from_strings(built: &BuiltGroupoid, fiber: &[&str]) -> Result<Vec<LaurentPoly>, ExtendError> {
    let g = &built.base;
    let chart = g.lie_chart();
    let mut out: Vec<LaurentPoly> = (0..g.dim()).map(|i| LaurentPoly::var(chart.dim(), i)).collect();
    for s in fiber {
        out.push(parse_poly(s, &chart).map_err(VanEstError::from)?);
    }
    Ok(out)
}

/// A finite group given by a multiplication table.
pub type Table = Vec<Vec<usize>>;

/// Abelian extension of a finite group by `Z/n` in table form: element
/// `(g, c)` has index `g * n + c` and
/// `(g', c')(g, c) = (g'g, c' + action[g'] * c + f(g', g))`.
pub fn finite_extension(group: &Table, n: usize, action: &[usize], f: &[Vec<usize>]) -> Result<Table, ExtendError> {
    let order = group.len();
    if n == 0 || action.len() != order || f.len() != order || f.iter().any(|r| r.len() != order) {
        return Err(ExtendError::InvalidTable("shape mismatch".into()));
    }
    let elems = order * n;
    let table: Table = (0..elems)
        .map(|p| {
            (0..elems)
                .map(|q| {
                    let (g1, c1) = (p / n, p % n);
                    let (g2, c2) = (q / n, q % n);
                    group[g1][g2] * n + (c1 + action[g1] * c2 + f[g1][g2]) % n
                })
                .collect()
        })
        .collect();
    for a in 0..elems {
        for b in 0..elems {
            for c in 0..elems {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(ExtendError::CocycleViolation(format!("table not associative at ({a}, {b}, {c})")));
                }
            }
        }
    }
    Ok(table)
}

/// A bijection `φ` with `φ(ab) = φ(a)φ(b)`, found by backtracking.
pub fn find_isomorphism(a: &Table, b: &Table) -> Option<Vec<usize>> {
    let n = a.len();
    if b.len() != n {
        return None;
    }
    let order = |t: &Table, x: usize| -> usize {
        let e = (0..n).find(|&e| (0..n).all(|g| t[e][g] == g)).unwrap_or(0);
        let mut y = x;
        let mut k = 1;
        while y != e && k <= n {
            y = t[y][x];
            k += 1;
        }
        k
    };
    let oa: Vec<usize> = (0..n).map(|x| order(a, x)).collect();
    let ob: Vec<usize> = (0..n).map(|x| order(b, x)).collect();
    fn go(i: usize, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>, a: &Table, b: &Table, oa: &[usize], ob: &[usize]) -> bool {
        let n = a.len();
        if i == n {
            return (0..n).all(|x| (0..n).all(|y| map[a[x][y]] == Some(b[map[x].unwrap()][map[y].unwrap()])));
        }
        for cand in 0..n {
            if used[cand] || oa[i] != ob[cand] {
                continue;
            }
            map[i] = Some(cand);
            used[cand] = true;
            let consistent = (0..=i).all(|x| {
                (0..=i).all(|y| {
                    let xy = a[x][y];
                    match map[xy] {
                        Some(v) if xy <= i => v == b[map[x].unwrap()][map[y].unwrap()],
                        _ => true,
                    }
                })
            });
            if consistent && go(i + 1, map, used, a, b, oa, ob) {
                return true;
            }
            used[cand] = false;
            map[i] = None;
        }
        false
    }
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    go(0, &mut map, &mut used, a, b, &oa, &ob).then(|| map.into_iter().map(Option::unwrap).collect())
}

/// Grid format: one row per line, entries separated by single spaces.
pub fn table_to_grid(t: &Table) -> String {
    t.iter().map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("\n")
}

pub fn cyclic_table(n: usize) -> Table {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}
