use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::laurent::{write_monomial, LaurentPoly};
use super::FormError;
use crate::exactalg::Rat;

/// An ordered list of coordinate names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    names: Vec<String>,
}

impl Chart {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Self> {
        Arc::new(Self { names: names.into_iter().map(Into::into).collect() })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn var(&self, name: &str) -> LaurentPoly {
        LaurentPoly::var(self.dim(), self.index_of(name).unwrap_or_else(|| panic!("no variable {name}")))
    }
}

/// A differential form `Σ_I c_I dx_I` with Laurent coefficients on a chart;
/// each `I` is strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicForm {
    chart: Arc<Chart>,
    degree: usize,
    terms: BTreeMap<Vec<usize>, LaurentPoly>,
}

/// Primitive construction strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrimitiveStrategy {
    /// Radial homotopy: contraction with the Euler field, integrated along rays.
    #[default]
    Radial,
    /// Write `ω = dv∧α + β` for the first remaining variable `v`, integrate `α`
    /// in `v` from 0, and recurse on the remaining variables.
    Iterated,
}

/// Sorts distinct indices, returning the permutation sign; `None` on repeats.
fn sorted_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some((v, sign))
}

impl SymbolicForm {
    pub fn zero(chart: &Arc<Chart>, degree: usize) -> Self {
        Self { chart: chart.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn function(chart: &Arc<Chart>, f: LaurentPoly) -> Self {
        let mut out = Self::zero(chart, 0);
        out.add_term(vec![], f);
        out
    }

    /// `dx_i`.
    pub fn dvar(chart: &Arc<Chart>, i: usize) -> Self {
        let mut out = Self::zero(chart, 1);
        out.add_term(vec![i], LaurentPoly::one(chart.dim()));
        out
    }

    /// `c · dx_I` for an arbitrary index list (sorted with sign).
    pub fn term(chart: &Arc<Chart>, c: LaurentPoly, idx: &[usize]) -> Self {
        let mut out = Self::zero(chart, idx.len());
        if let Some((sorted, sign)) = sorted_with_sign(idx) {
            out.add_term(sorted, if sign < 0 { c.neg() } else { c });
        }
        out
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &[usize]) -> LaurentPoly {
        self.terms.get(idx).cloned().unwrap_or_else(|| LaurentPoly::zero(self.chart.dim()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of a 0-form.
    pub fn as_function(&self) -> Option<LaurentPoly> {
        (self.degree == 0).then(|| self.coefficient(&[]))
    }

    fn add_term(&mut self, idx: Vec<usize>, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(idx.clone()).or_insert_with(|| LaurentPoly::zero(c.nvars()));
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&idx);
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.chart, other.chart, "forms live on different charts");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(i.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&LaurentPoly::constant(self.chart.dim(), -Rat::one()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplication by a function.
    pub fn scale(&self, f: &LaurentPoly) -> Self {
        let mut out = Self::zero(&self.chart, self.degree);
        for (i, c) in &self.terms {
            out.add_term(i.clone(), c.mul(f));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(&self.chart, self.degree + other.degree);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let mut idx = i.clone();
                idx.extend_from_slice(j);
                if let Some((sorted, sign)) = sorted_with_sign(&idx) {
                    let c = a.mul(b);
                    out.add_term(sorted, if sign < 0 { c.neg() } else { c });
                }
            }
        }
        out
    }

    /// Exterior derivative in the variables of `vars` only (all of them for
    /// the full derivative); other variables are treated as parameters.
    pub fn d_in(&self, vars: &[usize]) -> Self {
        let mut out = Self::zero(&self.chart, self.degree + 1);
        for (idx, c) in &self.terms {
            for &v in vars {
                let dc = c.partial(v);
                if dc.is_zero() {
                    continue;
                }
                let mut full = vec![v];
                full.extend_from_slice(idx);
                if let Some((sorted, sign)) = sorted_with_sign(&full) {
                    out.add_term(sorted, if sign < 0 { dc.neg() } else { dc });
                }
            }
        }
        out
    }

    pub fn exterior_d(&self) -> Self {
        let all: Vec<usize> = (0..self.chart.dim()).collect();
        self.d_in(&all)
    }

    /// Drops every term containing a differential of a variable outside `vars`.
    pub fn restrict_to(&self, vars: &[usize]) -> Self {
        let mut out = Self::zero(&self.chart, self.degree);
        for (idx, c) in &self.terms {
            if idx.iter().all(|i| vars.contains(i)) {
                out.add_term(idx.clone(), c.clone());
            }
        }
        out
    }

    /// Sets variable `i` to a constant in every coefficient; terms with `dx_i` are dropped.
    pub fn substitute_constant(&self, i: usize, value: &Rat) -> Option<Self> {
        let mut out = Self::zero(&self.chart, self.degree);
        for (idx, c) in &self.terms {
            if !idx.contains(&i) {
                out.add_term(idx.clone(), c.substitute_constant(i, value)?);
            }
        }
        Some(out)
    }

    /// Whether some coefficient depends on variable `i` or some term contains `dx_i`.
    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.iter().any(|(idx, c)| idx.contains(&i) || c.depends_on(i))
    }

    /// Moves the form to another chart, sending variable `i` to `map[i]`.
    pub fn reindex(&self, chart: &Arc<Chart>, map: &[usize]) -> Self {
        let mut out = Self::zero(chart, self.degree);
        for (idx, c) in &self.terms {
            let new_idx: Vec<usize> = idx.iter().map(|&i| map[i]).collect();
            if let Some((sorted, sign)) = sorted_with_sign(&new_idx) {
                let c = c.reindex(chart.dim(), map);
                out.add_term(sorted, if sign < 0 { c.neg() } else { c });
            }
        }
        out
    }

    /// Pullback along a map whose components are Laurent polynomials on the
    /// source chart; `map.target` must be this form's chart.
    pub fn pullback(&self, map: &LaurentMap) -> Result<Self, FormError> {
        if *map.target != *self.chart {
            return Err(FormError::ChartMismatch);
        }
        let src = &map.source;
        let n = src.dim();
        let differentials: Vec<SymbolicForm> =
            map.components.iter().map(|p| SymbolicForm::function(src, p.clone()).exterior_d()).collect();
        let mut out = Self::zero(src, self.degree);
        for (idx, c) in &self.terms {
            let coef = c.compose(&map.components, n).ok_or(FormError::NonLaurentComposition)?;
            let mut t = SymbolicForm::function(src, coef);
            for &i in idx {
                t = t.wedge(&differentials[i]);
            }
            if self.degree == 0 {
                t.degree = 0;
            }
            out = out.add(&t);
        }
        out.degree = self.degree;
        Ok(out)
    }

    /// Exact evaluation at a point on tangent vectors.
    pub fn evaluate(&self, point: &[Rat], vectors: &[Vec<Rat>]) -> Option<Rat> {
        assert_eq!(vectors.len(), self.degree);
        let mut total = Rat::zero();
        for (idx, c) in &self.terms {
            let m: Vec<Vec<Rat>> =
                (0..self.degree).map(|r| idx.iter().map(|&i| vectors[r][i].clone()).collect()).collect();
            total += c.evaluate(point)? * small_det(m);
        }
        Some(total)
    }

    /// `η` with `dη = ω` on the whole chart.
    pub fn primitive(&self, strategy: PrimitiveStrategy) -> Result<Self, FormError> {
        let all: Vec<usize> = (0..self.chart.dim()).collect();
        self.primitive_in(&all, strategy)
    }

    /// Fiberwise primitive in the variables `vars`: `ω` must only contain
    /// differentials of those variables and be closed under `d_in(vars)`;
    /// other variables are parameters and may appear with negative powers.
    pub fn primitive_in(&self, vars: &[usize], strategy: PrimitiveStrategy) -> Result<Self, FormError> {
        if self.degree == 0 {
            return Err(FormError::DegreeZero);
        }
        if self.terms.keys().any(|idx| idx.iter().any(|i| !vars.contains(i))) {
            return Err(FormError::NotFiberwise);
        }
        if !self.d_in(vars).is_zero() {
            return Err(FormError::NotClosed);
        }
        if self.terms.values().any(|c| !c.is_polynomial_in(vars)) {
            return Err(FormError::NotPolynomial);
        }
        let eta = match strategy {
            PrimitiveStrategy::Radial => self.radial(vars),
            PrimitiveStrategy::Iterated => self.iterated(vars),
        };
        debug_assert_eq!(eta.d_in(vars), *self);
        Ok(eta)
    }

    fn radial(&self, vars: &[usize]) -> Self {
        let p = self.degree;
        let mut out = Self::zero(&self.chart, p - 1);
        for (idx, c) in &self.terms {
            let c = c.divide_by_degree(vars, p as i32).expect("p >= 1 and exponents >= 0");
            for (r, &i) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(r);
                let xi = LaurentPoly::var(self.chart.dim(), i);
                let t = c.mul(&xi);
                out.add_term(rest, if r % 2 == 1 { t.neg() } else { t });
            }
        }
        out
    }

    fn iterated(&self, vars: &[usize]) -> Self {
        let p = self.degree;
        let Some((&v, rest)) = vars.split_first() else {
            debug_assert!(self.is_zero());
            return Self::zero(&self.chart, p - 1);
        };
        // ω = dv∧α + β
        let mut a = Self::zero(&self.chart, p - 1);
        let mut beta = Self::zero(&self.chart, p);
        for (idx, c) in &self.terms {
            if idx.first() == Some(&v) {
                let integral = c.integrate_from_zero(v).expect("polynomial in v");
                a.add_term(idx[1..].to_vec(), integral);
            } else {
                beta.add_term(idx.clone(), c.clone());
            }
        }
        let gamma = beta.sub(&a.d_in(rest));
        let gamma = gamma.substitute_constant(v, &Rat::zero()).expect("polynomial in v");
        a.add(&gamma.iterated(rest))
    }

    /// Canonical text form, parseable by [`super::parse_form`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn small_det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col].clone();
        for r in col + 1..n {
            let f = &m[r][col] / &m[col][col];
            for k in col..n {
                let v = &m[col][k] * &f;
                m[r][k] -= v;
            }
        }
    }
    det
}

impl fmt::Display for SymbolicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.chart.names();
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if self.degree == 0 {
            return self.coefficient(&[]).write_with(names, f);
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            let diff: Vec<String> = idx.iter().map(|&i| format!("d{}", names[i])).collect();
            let diff = diff.join("^");
            if let Some((e, coef)) = c.as_monomial() {
                let negative = coef.is_negative();
                if n == 0 {
                    if negative {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if negative { " - " } else { " + " })?;
                }
                let abs = coef.abs();
                if e.iter().all(|&k| k == 0) && abs.is_one() {
                    write!(f, "{diff}")?;
                } else {
                    write_monomial(e, &abs, names, f)?;
                    write!(f, "*{diff}")?;
                }
            } else {
                if n > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "(")?;
                c.write_with(names, f)?;
                write!(f, ")*{diff}")?;
            }
        }
        Ok(())
    }
}

/// A map between charts with Laurent components on the source chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMap {
    pub source: Arc<Chart>,
    pub target: Arc<Chart>,
    pub components: Vec<LaurentPoly>,
}

impl LaurentMap {
    pub fn new(source: &Arc<Chart>, target: &Arc<Chart>, components: Vec<LaurentPoly>) -> Self {
        assert_eq!(components.len(), target.dim());
        assert!(components.iter().all(|c| c.nvars() == source.dim()));
        Self { source: source.clone(), target: target.clone(), components }
    }

    pub fn identity(chart: &Arc<Chart>) -> Self {
        let components = (0..chart.dim()).map(|i| LaurentPoly::var(chart.dim(), i)).collect();
        Self::new(chart, chart, components)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &LaurentMap) -> Result<LaurentMap, FormError> {
        if *next.source != *self.target {
            return Err(FormError::ChartMismatch);
        }
        let components = next
            .components
            .iter()
            .map(|c| c.compose(&self.components, self.source.dim()).ok_or(FormError::NonLaurentComposition))
            .collect::<Result<_, _>>()?;
        Ok(LaurentMap::new(&self.source, &next.target, components))
    }

    /// Pullback of a function on the target chart.
    pub fn pull_function(&self, f: &LaurentPoly) -> Result<LaurentPoly, FormError> {
        f.compose(&self.components, self.source.dim()).ok_or(FormError::NonLaurentComposition)
    }
}
