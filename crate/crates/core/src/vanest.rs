//! Integration and differentiation of cocycles on coordinate groups and
//! their action groupoids.
//!
//! A coordinate group has a polynomial (or Laurent) multiplication on named
//! variables and may act on base coordinates. Nerve charts:
//!
//! * `B^n = (g_1, ..., g_n, x)`: slot `i` carries `n - i` primes and `x` is the
//!   source of `g_n`.
//! * `E^n = (g_1, ..., g_n, g_0, X)`: slot `i` carries `n - i + 1` primes,
//!   `g_0` none, and `X` is the target of the arrow `g_0`. The projection to
//!   `B^n` forgets `g_0`, so fiberwise calculus is calculus in `g_0`.
//!
//! The ladder right-translates a Lie algebra form onto `E^0`, then alternates
//! fiberwise primitives with the pullback differential; rung `q` uses
//! `(-1)^{q+1} Σ_i (-1)^i d_i^*`, which makes `differentiate` a left inverse.

use std::sync::Arc;

use num_traits::Zero;

use crate::cealg::LieAlgebraData;
use crate::exactalg::Rat;
use crate::forms::{parse_poly, Chart, FormError, LaurentMap, LaurentPoly, ParseError, PrimitiveStrategy, SymbolicForm};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VanEstError {
    #[error("invalid coordinate group: {0}")]
    InvalidGroup(String),
    #[error("form does not live on the Lie chart ({0})")]
    ChartMismatch(String),
    #[error("degree {degree} is outside the supported range 1..=2")]
    DegreeOutOfRange { degree: usize },
    #[error("Lie algebra form must have constant coefficients in the group variables")]
    NotConstant,
    #[error("translated form is not fiberwise closed")]
    NotClosed,
    #[error("no polynomial primitive at {step}: a period obstruction is present")]
    ObstructionEncountered { step: String },
    #[error("not a cocycle: residual {0}")]
    NotACocycle(String),
    #[error("ladder output is not basic: {0}")]
    LadderMismatch(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn primed(name: &str, k: usize) -> String {
    format!("{name}{}", "'".repeat(k))
}

/// A group on coordinates with Laurent multiplication, optionally acting on
/// base coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordGroupSpec {
    pub name: String,
    vars: Vec<String>,
    base: Vec<String>,
    identity: Vec<Rat>,
    /// On `(vars', vars)`: left factor primed.
    mul: Vec<LaurentPoly>,
    /// On `vars`.
    inv: Vec<LaurentPoly>,
    /// On `(vars, base)`.
    action: Vec<LaurentPoly>,
}

impl CoordGroupSpec {
    pub fn new(
        name: &str,
        vars: Vec<String>,
        base: Vec<String>,
        identity: Vec<Rat>,
        mul: Vec<LaurentPoly>,
        inv: Vec<LaurentPoly>,
        action: Vec<LaurentPoly>,
    ) -> Result<Self, VanEstError> {
        let n = vars.len();
        if identity.len() != n || mul.len() != n || inv.len() != n || action.len() != base.len() {
            return Err(VanEstError::InvalidGroup("component counts do not match the variables".into()));
        }
        if mul.iter().any(|p| p.nvars() != 2 * n)
            || inv.iter().any(|p| p.nvars() != n)
            || action.iter().any(|p| p.nvars() != n + base.len())
        {
            return Err(VanEstError::InvalidGroup("components live on the wrong chart".into()));
        }
        let g = Self { name: name.into(), vars, base, identity, mul, inv, action };
        g.validate()?;
        Ok(g)
    }

    /// Builds from text; `mul` uses primed names for the left factor.
    pub fn from_strings(
        name: &str,
        vars: &[&str],
        base: &[&str],
        identity: Option<Vec<Rat>>,
        mul: &[&str],
        inv: &[&str],
        action: &[&str],
    ) -> Result<Self, VanEstError> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let base: Vec<String> = base.iter().map(|s| s.to_string()).collect();
        let mul_chart = Chart::new(vars.iter().map(|v| primed(v, 1)).chain(vars.iter().cloned()));
        let group_chart = Chart::new(vars.iter().cloned());
        let act_chart = Chart::new(vars.iter().chain(&base).cloned());
        let mul = mul.iter().map(|s| parse_poly(s, &mul_chart)).collect::<Result<_, _>>()?;
        let inv = inv.iter().map(|s| parse_poly(s, &group_chart)).collect::<Result<_, _>>()?;
        let action = action.iter().map(|s| parse_poly(s, &act_chart)).collect::<Result<_, _>>()?;
        let identity = identity.unwrap_or_else(|| vec![Rat::zero(); vars.len()]);
        Self::new(name, vars, base, identity, mul, inv, action)
    }

    /// `C^n` under addition, no base.
    pub fn abelian(names: &[&str]) -> Self {
        let mul: Vec<String> = names.iter().map(|v| format!("{v}' + {v}")).collect();
        let inv: Vec<String> = names.iter().map(|v| format!("-{v}")).collect();
        let mul: Vec<&str> = mul.iter().map(String::as_str).collect();
        let inv: Vec<&str> = inv.iter().map(String::as_str).collect();
        Self::from_strings(&format!("C^{}", names.len()), names, &[], None, &mul, &inv, &[]).expect("abelian group")
    }

    /// `C^2` acting on `C^2` by translation of log coordinates.
    pub fn plane_action() -> Self {
        Self::from_strings(
            "C2xC2",
            &["a", "b"],
            &["x", "y"],
            None,
            &["a' + a", "b' + b"],
            &["-a", "-b"],
            &["x + a", "y + b"],
        )
        .expect("plane action groupoid")
    }

    /// The Heisenberg group with law `(a'+a, b'+b, c'+c+a'b)`.
    pub fn heisenberg() -> Self {
        Self::from_strings(
            "H3",
            &["a", "b", "c"],
            &[],
            None,
            &["a' + a", "b' + b", "c' + c + a'*b"],
            &["-a", "-b", "-c + a*b"],
            &[],
        )
        .expect("Heisenberg group")
    }

    /// `C* x C*` in multiplicative coordinates.
    pub fn multiplicative_torus() -> Self {
        Self::from_strings(
            "C*xC*",
            &["z", "w"],
            &[],
            Some(vec![Rat::from_integer(1.into()), Rat::from_integer(1.into())]),
            &["z'*z", "w'*w"],
            &["z^-1", "w^-1"],
            &[],
        )
        .expect("torus")
    }

    /// The affine group `x ↦ a x + b` with law `(a'a, a'b + b')`.
    pub fn affine() -> Self {
        Self::from_strings(
            "Aff1",
            &["a", "b"],
            &[],
            Some(vec![Rat::from_integer(1.into()), Rat::zero()]),
            &["a'*a", "a'*b + b'"],
            &["a^-1", "-a^-1*b"],
            &[],
        )
        .expect("affine group")
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn base_dim(&self) -> usize {
        self.base.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn base_vars(&self) -> &[String] {
        &self.base
    }

    pub fn identity(&self) -> &[Rat] {
        &self.identity
    }

    fn err(msg: impl Into<String>) -> VanEstError {
        VanEstError::InvalidGroup(msg.into())
    }

    /// `left · right` for component lists on a common chart.
    pub fn apply_mul(&self, left: &[LaurentPoly], right: &[LaurentPoly]) -> Result<Vec<LaurentPoly>, VanEstError> {
        let nv = left[0].nvars();
        let comps: Vec<LaurentPoly> = left.iter().chain(right).cloned().collect();
        self.mul
            .iter()
            .map(|p| p.compose(&comps, nv).ok_or_else(|| Self::err("multiplication leaves the Laurent ring")))
            .collect()
    }

    pub fn apply_inv(&self, g: &[LaurentPoly]) -> Result<Vec<LaurentPoly>, VanEstError> {
        let nv = g[0].nvars();
        self.inv
            .iter()
            .map(|p| p.compose(g, nv).ok_or_else(|| Self::err("inverse leaves the Laurent ring")))
            .collect()
    }

    pub fn apply_action(&self, g: &[LaurentPoly], x: &[LaurentPoly]) -> Result<Vec<LaurentPoly>, VanEstError> {
        let Some(first) = g.first() else { return Ok(x.to_vec()) };
        let nv = first.nvars();
        let comps: Vec<LaurentPoly> = g.iter().chain(x).cloned().collect();
        self.action
            .iter()
            .map(|p| p.compose(&comps, nv).ok_or_else(|| Self::err("action leaves the Laurent ring")))
            .collect()
    }

    fn identity_polys(&self, nvars: usize) -> Vec<LaurentPoly> {
        self.identity.iter().map(|c| LaurentPoly::constant(nvars, c.clone())).collect()
    }

    fn validate(&self) -> Result<(), VanEstError> {
        let n = self.dim();
        let m = self.base_dim();
        let nv = 3 * n + m;
        let slot = |s: usize| -> Vec<LaurentPoly> { (0..n).map(|i| LaurentPoly::var(nv, s * n + i)).collect() };
        let base: Vec<LaurentPoly> = (0..m).map(|i| LaurentPoly::var(nv, 3 * n + i)).collect();
        let (x, y, z) = (slot(0), slot(1), slot(2));
        let e = self.identity_polys(nv);
        let xy = self.apply_mul(&x, &y)?;
        if self.apply_mul(&xy, &z)? != self.apply_mul(&x, &self.apply_mul(&y, &z)?)? {
            return Err(Self::err("multiplication is not associative"));
        }
        if self.apply_mul(&e, &x)? != x || self.apply_mul(&x, &e)? != x {
            return Err(Self::err("identity is not two-sided"));
        }
        let xi = self.apply_inv(&x)?;
        if self.apply_mul(&xi, &x)? != e || self.apply_mul(&x, &xi)? != e {
            return Err(Self::err("inverse is not two-sided"));
        }
        if m > 0 {
            if self.apply_action(&e, &base)? != base {
                return Err(Self::err("identity does not act trivially"));
            }
            let lhs = self.apply_action(&xy, &base)?;
            let rhs = self.apply_action(&x, &self.apply_action(&y, &base)?)?;
            if lhs != rhs {
                return Err(Self::err("action is not compatible with multiplication"));
            }
        }
        Ok(())
    }

    /// Group variables followed by base variables; Lie algebra forms live here.
    pub fn lie_chart(&self) -> Arc<Chart> {
        Chart::new(self.vars.iter().chain(&self.base).cloned())
    }

    pub fn b_chart(&self, n: usize) -> Arc<Chart> {
        let mut names = Vec::new();
        for slot in 1..=n {
            names.extend(self.vars.iter().map(|v| primed(v, n - slot)));
        }
        names.extend(self.base.iter().cloned());
        Chart::new(names)
    }

    pub fn e_chart(&self, n: usize) -> Arc<Chart> {
        let mut names = Vec::new();
        for slot in 1..=n {
            names.extend(self.vars.iter().map(|v| primed(v, n - slot + 1)));
        }
        names.extend(self.vars.iter().cloned());
        names.extend(self.base.iter().cloned());
        Chart::new(names)
    }

    /// Structure constants from the second-order part of the multiplication at the identity.
    pub fn lie_algebra(&self) -> LieAlgebraData {
        let n = self.dim();
        let at_identity: Vec<Rat> = self.identity.iter().chain(&self.identity).cloned().collect();
        let mut c = vec![vec![vec![Rat::zero(); n]; n]; n];
        for (k, mk) in self.mul.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let second = |l: usize, r: usize| {
                        mk.partial(l).partial(n + r).evaluate(&at_identity).expect("defined at the identity")
                    };
                    c[i][j][k] = second(i, j) - second(j, i);
                }
            }
        }
        LieAlgebraData::new(n, c).expect("a group law induces a Lie algebra")
    }
}

/// Which nerve a [`SimplicialChart`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NerveKind {
    B,
    E,
}

/// Charts and face maps of `B^q` or `E^q` for `q <= max`.
#[derive(Clone, Debug)]
pub struct SimplicialChart {
    pub kind: NerveKind,
    pub charts: Vec<Arc<Chart>>,
    /// `faces[m][i] = d_i : X^m -> X^{m-1}` (empty at `m = 0`).
    pub faces: Vec<Vec<LaurentMap>>,
}

impl SimplicialChart {
    pub fn new(g: &CoordGroupSpec, kind: NerveKind, max: usize) -> Result<Self, VanEstError> {
        let chart = |m| match kind {
            NerveKind::B => g.b_chart(m),
            NerveKind::E => g.e_chart(m),
        };
        let charts: Vec<Arc<Chart>> = (0..=max).map(chart).collect();
        let mut faces = vec![Vec::new()];
        for m in 1..=max {
            let src = &charts[m];
            let nv = src.dim();
            let n = g.dim();
            let slot = |s: usize| -> Vec<LaurentPoly> { (0..n).map(|i| LaurentPoly::var(nv, s * n + i)).collect() };
            let slots = if kind == NerveKind::B { m } else { m + 1 };
            let base: Vec<LaurentPoly> = (0..g.base_dim()).map(|i| LaurentPoly::var(nv, slots * n + i)).collect();
            let mut row = Vec::with_capacity(m + 1);
            for i in 0..=m {
                let mut comps: Vec<LaurentPoly> = Vec::new();
                if i == 0 {
                    for s in 1..slots {
                        comps.extend(slot(s));
                    }
                    comps.extend(base.iter().cloned());
                } else if i < m || kind == NerveKind::E {
                    for s in 0..i - 1 {
                        comps.extend(slot(s));
                    }
                    comps.extend(g.apply_mul(&slot(i - 1), &slot(i))?);
                    for s in i + 1..slots {
                        comps.extend(slot(s));
                    }
                    if i == m {
                        comps.extend(g.apply_action(&slot(m - 1), &base)?);
                    } else {
                        comps.extend(base.iter().cloned());
                    }
                } else {
                    for s in 0..m - 1 {
                        comps.extend(slot(s));
                    }
                    comps.extend(g.apply_action(&slot(m - 1), &base)?);
                }
                row.push(LaurentMap::new(src, &charts[m - 1], comps));
            }
            faces.push(row);
        }
        Ok(Self { kind, charts, faces })
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for `i < j` on every level.
    pub fn verify_simplicial_identities(&self) -> Result<(), String> {
        for m in 2..self.charts.len() {
            for j in 0..=m {
                for i in 0..j {
                    let lhs = self.faces[m][j].then(&self.faces[m - 1][i]).map_err(|e| e.to_string())?;
                    let rhs = self.faces[m][i].then(&self.faces[m - 1][j - 1]).map_err(|e| e.to_string())?;
                    if lhs != rhs {
                        return Err(format!("{:?}^{m}: d_{i} d_{j} != d_{} d_{i}", self.kind, j - 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// `Σ_i (-1)^i d_i^*` from level `m - 1` to level `m`.
    pub fn coboundary(&self, m: usize, form: &SymbolicForm) -> Result<SymbolicForm, VanEstError> {
        let mut out = SymbolicForm::zero(&self.charts[m], form.degree());
        for (i, face) in self.faces[m].iter().enumerate() {
            let p = form.pullback(face)?;
            out = if i % 2 == 0 { out.add(&p) } else { out.sub(&p) };
        }
        Ok(out)
    }
}

/// Coefficient module of a cocycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ValueModule {
    /// The additive group `C`.
    #[default]
    Vector,
    /// `C / Z`, values read modulo the period lattice.
    Torus,
}

/// A groupoid cochain: a function on the `B^n` chart.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleExpr {
    pub degree: usize,
    pub chart: Arc<Chart>,
    pub expr: LaurentPoly,
    pub value: ValueModule,
}

impl CocycleExpr {
    pub fn new(g: &CoordGroupSpec, degree: usize, expr: LaurentPoly) -> Self {
        Self { degree, chart: g.b_chart(degree), expr, value: ValueModule::Vector }
    }

    pub fn parse(g: &CoordGroupSpec, degree: usize, src: &str) -> Result<Self, VanEstError> {
        let chart = g.b_chart(degree);
        let expr = parse_poly(src, &chart)?;
        Ok(Self { degree, chart, expr, value: ValueModule::Vector })
    }

    pub fn zero(g: &CoordGroupSpec, degree: usize) -> Self {
        Self::new(g, degree, LaurentPoly::zero(g.b_chart(degree).dim()))
    }

    /// Whether the cochain vanishes as soon as one arrow is an identity.
    pub fn is_normalized(&self, g: &CoordGroupSpec) -> bool {
        let n = g.dim();
        (0..self.degree).all(|slot| {
            let mut p = Some(self.expr.clone());
            for (i, e) in g.identity.iter().enumerate() {
                p = p.and_then(|q| q.substitute_constant(slot * n + i, e));
            }
            p.is_some_and(|q| q.is_zero())
        })
    }
}

impl std::fmt::Display for CocycleExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.expr.write_with(self.chart.names(), f)
    }
}

/// Outcome of a cocycle check: the coboundary and whether it vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleCheck {
    pub holds: bool,
    pub residual: LaurentPoly,
    pub residual_chart: Arc<Chart>,
}

impl CocycleCheck {
    pub fn residual_text(&self) -> String {
        self.residual.display(self.residual_chart.names()).to_string()
    }
}

/// `δf = Σ (-1)^i d_i^* f` with trivial action on the values.
pub fn check_cocycle(g: &CoordGroupSpec, f: &CocycleExpr) -> Result<CocycleCheck, VanEstError> {
    let nerve = SimplicialChart::new(g, NerveKind::B, f.degree + 1)?;
    let form = SymbolicForm::function(&nerve.charts[f.degree], f.expr.clone());
    let residual = nerve.coboundary(f.degree + 1, &form)?.coefficient(&[]);
    Ok(CocycleCheck { holds: residual.is_zero(), residual, residual_chart: nerve.charts[f.degree + 1].clone() })
}

/// One line of the ladder trace.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TraceStep {
    pub label: String,
    pub expression: String,
}

#[derive(Clone, Debug)]
pub struct LadderResult {
    pub cocycle: CocycleExpr,
    pub trace: Vec<TraceStep>,
}

fn lie_form_checks(g: &CoordGroupSpec, omega: &SymbolicForm) -> Result<(), VanEstError> {
    if **omega.chart() != *g.lie_chart() {
        return Err(VanEstError::ChartMismatch(omega.chart().names().join(", ")));
    }
    let n = g.dim();
    for (idx, c) in omega.terms() {
        if idx.iter().any(|&i| i >= n) {
            return Err(VanEstError::ChartMismatch("differentials of base variables".into()));
        }
        if (0..n).any(|i| c.depends_on(i)) {
            return Err(VanEstError::NotConstant);
        }
    }
    Ok(())
}

/// Left translation of a Lie algebra form to the fibers of `E^0`, so that it
/// is invariant under `g ↦ g'g`.
pub fn translate(g: &CoordGroupSpec, omega: &SymbolicForm) -> Result<SymbolicForm, VanEstError> {
    lie_form_checks(g, omega)?;
    let n = g.dim();
    let e0 = g.e_chart(0);
    let nv = e0.dim();
    let gvars: Vec<LaurentPoly> = (0..n).map(|i| LaurentPoly::var(nv, i)).collect();
    let ginv = g.apply_inv(&gvars)?;
    let comps: Vec<LaurentPoly> = ginv.iter().chain(&gvars).cloned().collect();
    // row i: Σ_j ∂μ_i/∂k_j (g^{-1}, g) dg_j
    let rows: Vec<SymbolicForm> = g
        .mul
        .iter()
        .map(|mi| {
            (0..n).try_fold(SymbolicForm::zero(&e0, 1), |acc, j| {
                let coef = mi.partial(n + j).compose(&comps, nv).ok_or(FormError::NonLaurentComposition)?;
                Ok::<_, FormError>(acc.add(&SymbolicForm::dvar(&e0, j).scale(&coef)))
            })
        })
        .collect::<Result<_, _>>()?;
    let lie_to_e0: Vec<usize> = (0..nv).collect();
    let mut out = SymbolicForm::zero(&e0, omega.degree());
    for (idx, c) in omega.terms() {
        let mut t = SymbolicForm::function(&e0, c.reindex(nv, &lie_to_e0));
        for &i in idx {
            t = t.wedge(&rows[i]);
        }
        out = out.add(&t);
    }
    Ok(out)
}

/// Integrates a closed Lie algebra form of degree 1 or 2 to a normalized
/// groupoid cocycle.
pub fn integrate_ladder(g: &CoordGroupSpec, omega: &SymbolicForm) -> Result<LadderResult, VanEstError> {
    let k = omega.degree();
    if !(1..=2).contains(&k) {
        return Err(VanEstError::DegreeOutOfRange { degree: k });
    }
    let n = g.dim();
    let nerve = SimplicialChart::new(g, NerveKind::E, k)?;
    let fiber = |q: usize| -> Vec<usize> { (q * n..(q + 1) * n).collect() };
    let mut trace = Vec::new();
    let mut step = |label: String, f: &SymbolicForm| trace.push(TraceStep { label, expression: f.to_string() });

    let theta = translate(g, omega)?;
    step("translated form on E^0".into(), &theta);
    if !theta.d_in(&fiber(0)).is_zero() {
        return Err(VanEstError::NotClosed);
    }
    let mut eta = theta;
    for q in 0..k {
        eta = eta.primitive_in(&fiber(q), PrimitiveStrategy::Iterated).map_err(|e| match e {
            FormError::NotPolynomial => VanEstError::ObstructionEncountered { step: format!("E^{q}") },
            FormError::NotClosed => VanEstError::NotClosed,
            other => VanEstError::Form(other),
        })?;
        step(format!("primitive on E^{q}"), &eta);
        let mut next = nerve.coboundary(q + 1, &eta)?;
        if q % 2 == 0 {
            next = next.neg();
        }
        eta = next.restrict_to(&fiber(q + 1));
        step(format!("fiberwise coboundary on E^{}", q + 1), &eta);
    }
    let top = eta.coefficient(&[]);
    if fiber(k).iter().any(|&i| top.depends_on(i)) {
        return Err(VanEstError::LadderMismatch(eta.to_string()));
    }
    let mut expr = top;
    for (i, e) in fiber(k).into_iter().zip(&g.identity) {
        expr = expr.substitute_constant(i, e).expect("no dependence on the fiber variables");
    }
    let b = g.b_chart(k);
    let to_b: Vec<usize> = (0..nerve.charts[k].dim())
        .map(|i| if i < k * n { i } else if i < (k + 1) * n { 0 } else { i - n })
        .collect();
    let cocycle = CocycleExpr::new(g, k, expr.reindex(b.dim(), &to_b));
    trace.push(TraceStep { label: format!("cocycle on B^{k}"), expression: cocycle.to_string() });
    Ok(LadderResult { cocycle, trace })
}

/// The Lie algebra form of a cocycle of degree 1 or 2: the linear part at
/// the identity, or the antisymmetrized mixed second derivative.
pub fn differentiate(g: &CoordGroupSpec, f: &CocycleExpr) -> Result<SymbolicForm, VanEstError> {
    if !(1..=2).contains(&f.degree) {
        return Err(VanEstError::DegreeOutOfRange { degree: f.degree });
    }
    let check = check_cocycle(g, f)?;
    if !check.holds {
        return Err(VanEstError::NotACocycle(check.residual_text()));
    }
    let n = g.dim();
    let lie = g.lie_chart();
    let at_identity = |p: LaurentPoly| -> LaurentPoly {
        let mut p = p;
        for slot in 0..f.degree {
            for (i, e) in g.identity.iter().enumerate() {
                p = p.substitute_constant(slot * n + i, e).expect("defined at the identity");
            }
        }
        let map: Vec<usize> = (0..p.nvars()).map(|i| if i < f.degree * n { 0 } else { i - (f.degree - 1) * n }).collect();
        p.reindex(lie.dim(), &map)
    };
    let mut out = SymbolicForm::zero(&lie, f.degree);
    if f.degree == 1 {
        for j in 0..n {
            let c = at_identity(f.expr.partial(j));
            out = out.add(&SymbolicForm::term(&lie, c, &[j]));
        }
    } else {
        for i in 0..n {
            for j in i + 1..n {
                let mixed = |a: usize, b: usize| f.expr.partial(a).partial(n + b);
                let c = at_identity(mixed(i, j).sub(&mixed(j, i)));
                out = out.add(&SymbolicForm::term(&lie, c, &[i, j]));
            }
        }
    }
    Ok(out)
}

/// `δg` of a cochain, as a cochain one degree up.
pub fn coboundary(g: &CoordGroupSpec, f: &CocycleExpr) -> Result<CocycleExpr, VanEstError> {
    let check = check_cocycle(g, f)?;
    Ok(CocycleExpr { degree: f.degree + 1, chart: check.residual_chart, expr: check.residual, value: f.value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_form;

    fn lie_form(g: &CoordGroupSpec, src: &str) -> SymbolicForm {
        parse_form(src, &g.lie_chart()).unwrap()
    }

    #[test]
    fn charts_follow_the_priming_convention() {
        let g = CoordGroupSpec::plane_action();
        assert_eq!(g.b_chart(2).names(), ["a'", "b'", "a", "b", "x", "y"]);
        assert_eq!(g.e_chart(2).names(), ["a''", "b''", "a'", "b'", "a", "b", "x", "y"]);
    }

    #[test]
    fn simplicial_identities_hold() {
        for g in [
            CoordGroupSpec::plane_action(),
            CoordGroupSpec::heisenberg(),
            CoordGroupSpec::multiplicative_torus(),
            CoordGroupSpec::affine(),
        ] {
            for kind in [NerveKind::B, NerveKind::E] {
                SimplicialChart::new(&g, kind, 3).unwrap().verify_simplicial_identities().unwrap();
            }
        }
    }

    #[test]
    fn heisenberg_ladder() {
        let g = CoordGroupSpec::plane_action();
        let res = integrate_ladder(&g, &lie_form(&g, "da^db")).unwrap();
        assert_eq!(res.cocycle.to_string(), "a'*b");
        let labels: Vec<&str> = res.trace.iter().map(|s| s.expression.as_str()).collect();
        assert_eq!(labels, ["da^db", "a*db", "a'*db", "a'*b", "a''*b'", "a'*b"]);
        assert!(check_cocycle(&g, &res.cocycle).unwrap().holds);
        assert!(res.cocycle.is_normalized(&g));
        assert_eq!(differentiate(&g, &res.cocycle).unwrap(), lie_form(&g, "da^db"));
    }

    #[test]
    fn degree_one_and_zero_forms() {
        let g = CoordGroupSpec::abelian(&["a"]);
        let f = integrate_ladder(&g, &lie_form(&g, "da")).unwrap().cocycle;
        assert_eq!(f.to_string(), "a");
        assert_eq!(differentiate(&g, &f).unwrap(), lie_form(&g, "da"));
        let zero = SymbolicForm::zero(&g.lie_chart(), 1);
        assert!(integrate_ladder(&g, &zero).unwrap().cocycle.expr.is_zero());
        let plane = CoordGroupSpec::plane_action();
        assert!(translate(&plane, &SymbolicForm::zero(&plane.lie_chart(), 2)).unwrap().is_zero());
    }

    #[test]
    fn cocycle_check_residual() {
        let g = CoordGroupSpec::abelian(&["a"]);
        let f = CocycleExpr::parse(&g, 2, "a' + a").unwrap();
        let check = check_cocycle(&g, &f).unwrap();
        assert!(!check.holds);
        assert_eq!(check.residual_text(), "-a'' + a");
        assert!(check_cocycle(&g, &CocycleExpr::zero(&g, 2)).unwrap().holds);
        assert!(matches!(differentiate(&g, &f), Err(VanEstError::NotACocycle(_))));
    }

    #[test]
    fn obstruction_on_the_multiplicative_torus() {
        let g = CoordGroupSpec::multiplicative_torus();
        let omega = lie_form(&g, "dz^dw");
        assert_eq!(translate(&g, &omega).unwrap().to_string(), "z^-1*w^-1*dz^dw");
        assert!(matches!(integrate_ladder(&g, &omega), Err(VanEstError::ObstructionEncountered { .. })));
    }

    #[test]
    fn heisenberg_lie_algebra_and_coboundaries() {
        let g = CoordGroupSpec::heisenberg();
        let lie = g.lie_algebra();
        assert_eq!(lie.structure(0, 1), [Rat::zero(), Rat::zero(), Rat::from_integer(1.into())]);
        // differentiating δφ gives d_CE of the linear part of φ
        let phi = CocycleExpr::parse(&g, 1, "c + a^2*b - 3*b*c").unwrap();
        let dphi = coboundary(&g, &phi).unwrap();
        assert_eq!(differentiate(&g, &dphi).unwrap(), lie_form(&g, "-da^db"));
    }

    #[test]
    fn nonabelian_ladders() {
        let aff = CoordGroupSpec::affine();
        // db is not closed for the affine algebra, and da integrates to log a
        assert_eq!(integrate_ladder(&aff, &lie_form(&aff, "db")).unwrap_err(), VanEstError::NotClosed);
        assert!(matches!(
            integrate_ladder(&aff, &lie_form(&aff, "da")),
            Err(VanEstError::ObstructionEncountered { .. })
        ));
        let h = CoordGroupSpec::heisenberg();
        for src in ["da", "db", "da^db", "da^dc", "da^dc + 2*db^dc"] {
            let res = integrate_ladder(&h, &lie_form(&h, src)).unwrap();
            assert!(check_cocycle(&h, &res.cocycle).unwrap().holds, "{src}");
            assert!(res.cocycle.is_normalized(&h), "{src}");
            assert_eq!(differentiate(&h, &res.cocycle).unwrap(), lie_form(&h, src), "{src}");
        }
        let res = integrate_ladder(&h, &lie_form(&h, "da^dc")).unwrap();
        assert_eq!(res.cocycle.to_string(), "1/2*a'^2*b + a'*c");
    }

    #[test]
    fn invalid_groups_are_rejected() {
        let bad = CoordGroupSpec::from_strings("bad", &["a"], &[], None, &["a' + a + a'*a"], &["-a"], &[]);
        assert!(matches!(bad, Err(VanEstError::InvalidGroup(_))));
    }
}
