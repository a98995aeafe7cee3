//! Periods of closed 2-forms over parameterized spheres and tori, with
//! lattice membership and discreteness verdicts.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::forms::SymbolicForm;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_GENERATOR_FLOOR: f64 = 1e-4;
pub const MIN_MESH: usize = 8;
/// Gauss–Legendre points per mesh cell and axis.
const GAUSS_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PeriodError {
    #[error("mesh {0} is below the minimum of {MIN_MESH}")]
    MeshTooSmall(usize),
    #[error("integrand is not finite at parameter ({u}, {v}); the cycle likely meets a pole")]
    NonFiniteSample { u: f64, v: f64 },
    #[error("cycle lives in dimension {cycle} but the form in dimension {form}")]
    DimensionMismatch { cycle: usize, form: usize },
    #[error("tolerance must be positive")]
    BadTolerance,
}

pub type Coefficient = Arc<dyn Fn(&[Complex64]) -> Complex64 + Send + Sync>;

/// A 2-form `Σ c_ij dx_i ∧ dx_j` (i < j) with evaluable coefficients.
#[derive(Clone)]
pub struct NumericForm {
    pub dim: usize,
    pub components: Vec<((usize, usize), Coefficient)>,
}

impl std::fmt::Debug for NumericForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let idx: Vec<_> = self.components.iter().map(|c| c.0).collect();
        f.debug_struct("NumericForm").field("dim", &self.dim).field("components", &idx).finish()
    }
}

impl NumericForm {
    pub fn new(dim: usize, components: Vec<((usize, usize), Coefficient)>) -> Self {
        Self { dim, components }
    }

    /// Panics unless `form` has degree 2.
    pub fn from_symbolic(form: &SymbolicForm) -> Self {
        assert_eq!(form.degree(), 2, "periods are taken of 2-forms");
        let components = form
            .terms()
            .map(|(idx, c)| {
                let c = c.clone();
                let f: Coefficient = Arc::new(move |p: &[Complex64]| c.evaluate_c64(p));
                ((idx[0], idx[1]), f)
            })
            .collect();
        Self { dim: form.chart().dim(), components }
    }

    /// `k/(4π) · (x dy∧dz + y dz∧dx + z dx∧dy) / r^3` on `(x, y, z)`.
    pub fn sphere_area(k: f64) -> Self {
        let scale = k / (4.0 * PI);
        let coef = move |num: usize| -> Coefficient {
            Arc::new(move |p: &[Complex64]| {
                let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                p[num] * scale / (r2 * r2.sqrt())
            })
        };
        // dz∧dx = -dx∧dz
        let neg_y: Coefficient = {
            let f = coef(1);
            Arc::new(move |p: &[Complex64]| -f(p))
        };
        Self { dim: 3, components: vec![((1, 2), coef(0)), ((0, 2), neg_y), ((0, 1), coef(2))] }
    }

    pub fn eval(&self, p: &[Complex64], u: &[Complex64], v: &[Complex64]) -> Complex64 {
        self.components.iter().map(|((i, j), c)| c(p) * (u[*i] * v[*j] - u[*j] * v[*i])).sum()
    }

    fn coefficient(&self, i: usize, j: usize, p: &[Complex64]) -> Complex64 {
        self.components
            .iter()
            .map(|((a, b), c)| match (*a == i && *b == j, *a == j && *b == i) {
                (true, _) => c(p),
                (_, true) => -c(p),
                _ => Complex64::new(0.0, 0.0),
            })
            .sum()
    }

    /// Largest `|dω|` coefficient at `p` by central differences along real directions.
    pub fn closedness_residual(&self, p: &[Complex64]) -> f64 {
        let h = 1e-5;
        let partial = |k: usize, i: usize, j: usize| {
            let mut a = p.to_vec();
            let mut b = p.to_vec();
            a[k] += h;
            b[k] -= h;
            (self.coefficient(i, j, &a) - self.coefficient(i, j, &b)) / (2.0 * h)
        };
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let d = partial(i, j, k) - partial(j, i, k) + partial(k, i, j);
                    worst = worst.max(d.norm());
                }
            }
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CycleShape {
    /// Round sphere in the coordinates `axes` of the chart.
    Sphere { center: [f64; 3], radius: f64, axes: [usize; 3] },
    /// `(u, v) ↦ (2πu, 2πv)` in coordinates `axes`.
    FlatTorus { axes: [usize; 2] },
    /// `(r_1 e^{2πiu}, r_2 e^{2πiv})` in complex coordinates `axes`.
    UnitTorus { axes: [usize; 2], radii: [f64; 2] },
}

/// A closed 2-cycle parameterized by the unit square. Coordinates not moved
/// by the shape stay at `base`.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Cycle2 {
    pub shape: CycleShape,
    pub base: Vec<f64>,
    #[serde(default)]
    pub reversed: bool,
}

impl Cycle2 {
    pub fn sphere(dim: usize, radius: f64) -> Self {
        Self { shape: CycleShape::Sphere { center: [0.0; 3], radius, axes: [0, 1, 2] }, base: vec![0.0; dim], reversed: false }
    }

    pub fn flat_torus(dim: usize) -> Self {
        Self { shape: CycleShape::FlatTorus { axes: [0, 1] }, base: vec![0.0; dim], reversed: false }
    }

    pub fn unit_torus(dim: usize) -> Self {
        Self { shape: CycleShape::UnitTorus { axes: [0, 1], radii: [1.0, 1.0] }, base: vec![0.0; dim], reversed: false }
    }

    pub fn reversed(mut self) -> Self {
        self.reversed = !self.reversed;
        self
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// Point and the two tangent vectors at `(u, v)`.
    pub fn eval(&self, u: f64, v: f64) -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
        let (v, flip) = if self.reversed { (1.0 - v, -1.0) } else { (v, 1.0) };
        let n = self.dim();
        let zero = Complex64::new(0.0, 0.0);
        let mut p: Vec<Complex64> = self.base.iter().map(|&b| Complex64::new(b, 0.0)).collect();
        let mut du = vec![zero; n];
        let mut dv = vec![zero; n];
        let re = |x: f64| Complex64::new(x, 0.0);
        match &self.shape {
            CycleShape::Sphere { center, radius, axes } => {
                let (th, ph) = (PI * u, 2.0 * PI * v);
                let pos = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
                let d_th = [th.cos() * ph.cos(), th.cos() * ph.sin(), -th.sin()];
                let d_ph = [-th.sin() * ph.sin(), th.sin() * ph.cos(), 0.0];
                for k in 0..3 {
                    p[axes[k]] = re(center[k] + radius * pos[k]);
                    du[axes[k]] = re(radius * PI * d_th[k]);
                    dv[axes[k]] = re(radius * 2.0 * PI * d_ph[k]);
                }
            }
            CycleShape::FlatTorus { axes } => {
                p[axes[0]] = re(2.0 * PI * u);
                p[axes[1]] = re(2.0 * PI * v);
                du[axes[0]] = re(2.0 * PI);
                dv[axes[1]] = re(2.0 * PI);
            }
            CycleShape::UnitTorus { axes, radii } => {
                let i2pi = Complex64::new(0.0, 2.0 * PI);
                let z = Complex64::from_polar(radii[0], 2.0 * PI * u);
                let w = Complex64::from_polar(radii[1], 2.0 * PI * v);
                p[axes[0]] = z;
                p[axes[1]] = w;
                du[axes[0]] = i2pi * z;
                dv[axes[1]] = i2pi * w;
            }
        }
        for x in &mut dv {
            *x *= flip;
        }
        (p, du, dv)
    }
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    (1..=order)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (order as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=order {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = order as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            ((x + 1.0) / 2.0, w / 2.0)
        })
        .collect()
}

fn quadrature(form: &NumericForm, cycle: &Cycle2, mesh: usize) -> Result<Complex64, PeriodError> {
    let rule = gauss_legendre(GAUSS_ORDER);
    let h = 1.0 / mesh as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for a in 0..mesh {
        for b in 0..mesh {
            for &(xu, wu) in &rule {
                for &(xv, wv) in &rule {
                    let (u, v) = ((a as f64 + xu) * h, (b as f64 + xv) * h);
                    let (p, du, dv) = cycle.eval(u, v);
                    let val = form.eval(&p, &du, &dv);
                    if !val.re.is_finite() || !val.im.is_finite() {
                        return Err(PeriodError::NonFiniteSample { u, v });
                    }
                    total += val * (wu * wv * h * h);
                }
            }
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Period {
    pub re: f64,
    pub im: f64,
    /// `|I(n) - I(2n)|`.
    pub error: f64,
    /// `|dω|` at a few points of the cycle.
    pub closedness_residual: f64,
}

impl Period {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Composite Gauss–Legendre quadrature on an `n × n` mesh; the reported value
/// is the `2n` result and the error is the difference to the `n` result.
pub fn period(form: &NumericForm, cycle: &Cycle2, mesh: usize) -> Result<Period, PeriodError> {
    if mesh < MIN_MESH {
        return Err(PeriodError::MeshTooSmall(mesh));
    }
    if form.dim != cycle.dim() {
        return Err(PeriodError::DimensionMismatch { cycle: cycle.dim(), form: form.dim });
    }
    let coarse = quadrature(form, cycle, mesh)?;
    let fine = quadrature(form, cycle, 2 * mesh)?;
    let closedness_residual = [(0.3, 0.2), (0.5, 0.5), (0.7, 0.9)]
        .iter()
        .map(|&(u, v)| form.closedness_residual(&cycle.eval(u, v).0))
        .fold(0.0, f64::max);
    Ok(Period { re: fine.re, im: fine.im, error: (fine - coarse).norm(), closedness_residual })
}

/// Generators of the kernel lattice; empty means the trivial lattice.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PeriodLattice {
    pub generators: Vec<f64>,
}

impl PeriodLattice {
    pub fn integers() -> Self {
        Self { generators: vec![1.0] }
    }

    pub fn trivial() -> Self {
        Self { generators: Vec::new() }
    }

    /// Distance from `x` to the nearest lattice point, with that point's coefficients.
    pub fn distance(&self, x: f64) -> (f64, Vec<i64>) {
        let gens: Vec<f64> = self.generators.iter().copied().filter(|g| *g != 0.0).collect();
        match gens.as_slice() {
            [] => (x.abs(), vec![]),
            [g] => {
                let c = (x / g).round();
                ((x - c * g).abs(), vec![c as i64])
            }
            _ => {
                // bounded search over small combinations
                let smallest = gens.iter().fold(f64::INFINITY, |m, g| m.min(g.abs()));
                let bound = ((x.abs() / smallest).ceil() as i64 + 2).min(50);
                let mut best = (f64::INFINITY, vec![0; gens.len()]);
                let mut coeffs = vec![-bound; gens.len()];
                loop {
                    let val: f64 = coeffs.iter().zip(&gens).map(|(c, g)| *c as f64 * g).sum();
                    if (x - val).abs() < best.0 {
                        best = ((x - val).abs(), coeffs.clone());
                    }
                    let mut k = 0;
                    while k < coeffs.len() && coeffs[k] == bound {
                        coeffs[k] = -bound;
                        k += 1;
                    }
                    if k == coeffs.len() {
                        break;
                    }
                    coeffs[k] += 1;
                }
                best
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Integrable,
    Obstructed { witness: f64, distance: f64 },
}

pub fn integrability_verdict(periods: &[f64], lattice: &PeriodLattice, tol: f64) -> Result<Verdict, PeriodError> {
    if tol <= 0.0 {
        return Err(PeriodError::BadTolerance);
    }
    for &p in periods {
        let (d, _) = lattice.distance(p);
        if d > tol {
            return Ok(Verdict::Obstructed { witness: p, distance: d });
        }
    }
    Ok(Verdict::Integrable)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Discreteness {
    Discrete { generator: f64 },
    Indiscrete,
}

/// Approximate GCD by Euclid with tolerance. A generator below `floor`
/// means the sample generates a dense subgroup as far as can be told.
pub fn discreteness_check(values: &[f64], tol: f64, floor: f64) -> Result<Discreteness, PeriodError> {
    if tol <= 0.0 {
        return Err(PeriodError::BadTolerance);
    }
    let mut g: f64 = 0.0;
    for &v in values {
        let (mut a, mut b) = (g.max(v.abs()), g.min(v.abs()));
        while b > tol {
            let r = a % b;
            a = b;
            b = r.min(b - r);
            if a < floor {
                return Ok(Discreteness::Indiscrete);
            }
        }
        g = a;
    }
    if g <= tol {
        return Ok(Discreteness::Discrete { generator: 0.0 });
    }
    if g < floor {
        return Ok(Discreteness::Indiscrete);
    }
    let ok = values.iter().all(|v| (v - (v / g).round() * g).abs() < tol.max(1e-12) * (1.0 + v.abs()));
    Ok(if ok { Discreteness::Discrete { generator: g } } else { Discreteness::Indiscrete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{parse_form, Chart};

    #[test]
    fn nodes_integrate_polynomials() {
        let rule = gauss_legendre(GAUSS_ORDER);
        let s: f64 = rule.iter().map(|(x, w)| w * x.powi(9)).sum();
        assert!((s - 0.1).abs() < 1e-14);
    }

    #[test]
    fn sphere_periods() {
        for k in [1.0, 2.0, 3.0, 0.5] {
            let p = period(&NumericForm::sphere_area(k), &Cycle2::sphere(3, 1.0), 8).unwrap();
            assert!((p.re - k).abs() < 1e-6, "{k}: {p:?}");
            assert!(p.closedness_residual < 1e-6);
        }
        let rev = period(&NumericForm::sphere_area(1.0), &Cycle2::sphere(3, 2.0).reversed(), 8).unwrap();
        assert!((rev.re + 1.0).abs() < 1e-6);
    }

    #[test]
    fn torus_periods() {
        let c = Chart::new(["t", "p"]);
        let w = parse_form("dt^dp", &c).unwrap();
        let p = period(&NumericForm::from_symbolic(&w), &Cycle2::flat_torus(2), 8).unwrap();
        assert!((p.re / (4.0 * PI * PI) - 1.0).abs() < 1e-12);
        let zw = Chart::new(["z", "w"]);
        let log = parse_form("dz^dw/(z*w)", &zw).unwrap();
        let p = period(&NumericForm::from_symbolic(&log), &Cycle2::unit_torus(2), 8).unwrap();
        assert!((p.re + 4.0 * PI * PI).abs() < 1e-9 && p.im.abs() < 1e-9);
    }

    #[test]
    fn exact_forms_have_zero_period() {
        let c = Chart::new(["a", "b", "t"]);
        let w = parse_form("da^db + 2*a*t*da^db + a^2*dt^db", &c).unwrap();
        assert!(w.exterior_d().is_zero());
        let p = period(&NumericForm::from_symbolic(&w), &Cycle2::sphere(3, 1.5), 8).unwrap();
        assert!(p.re.abs() < 1e-9);
    }

    #[test]
    fn errors() {
        let f = NumericForm::sphere_area(1.0);
        assert_eq!(period(&f, &Cycle2::sphere(3, 1.0), 4), Err(PeriodError::MeshTooSmall(4)));
        assert!(matches!(period(&f, &Cycle2::sphere(3, 0.0), 8), Err(PeriodError::NonFiniteSample { .. })));
        assert!(matches!(period(&f, &Cycle2::flat_torus(2), 8), Err(PeriodError::DimensionMismatch { .. })));
    }

    #[test]
    fn verdicts() {
        let z = PeriodLattice::integers();
        assert_eq!(integrability_verdict(&[1.0000003, 2.0], &z, 1e-5), Ok(Verdict::Integrable));
        assert!(matches!(integrability_verdict(&[0.5], &z, 1e-6), Ok(Verdict::Obstructed { witness, .. }) if witness == 0.5));
        assert_eq!(integrability_verdict(&[], &PeriodLattice::trivial(), 1e-6), Ok(Verdict::Integrable));
        let two = PeriodLattice { generators: vec![2.0, 3.0] };
        assert_eq!(integrability_verdict(&[1.0], &two, 1e-9), Ok(Verdict::Integrable));
    }

    #[test]
    fn discreteness() {
        match discreteness_check(&[2.0, 3.0], 1e-6, DEFAULT_GENERATOR_FLOOR).unwrap() {
            Discreteness::Discrete { generator } => assert!((generator - 1.0).abs() < 1e-9),
            d => panic!("{d:?}"),
        }
        assert_eq!(discreteness_check(&[1.0, 2f64.sqrt()], 1e-9, DEFAULT_GENERATOR_FLOOR), Ok(Discreteness::Indiscrete));
        assert_eq!(discreteness_check(&[0.0], 1e-6, DEFAULT_GENERATOR_FLOOR), Ok(Discreteness::Discrete { generator: 0.0 }));
    }
}
